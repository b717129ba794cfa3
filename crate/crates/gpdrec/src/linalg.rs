//! Exact linear algebra over Z/n.
//!
//! Systems are solved by CRT across the prime-power factors of the modulus;
//! each prime-power factor is reduced Smith-style, picking the entry of
//! minimal p-valuation in the remaining submatrix as pivot and tracking the
//! column transform so solutions can be pulled back.  Matrices here are tiny
//! (dozens of columns), so clarity wins over sparsity tricks.

use crate::error::{Error, Result};

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn submod(a: u64, b: u64, q: u64) -> u64 {
    (a + q - b % q) % q
}

/// Inverse of `a` mod `q`, when gcd(a, q) = 1.
pub fn mod_inverse(a: u64, q: u64) -> Option<u64> {
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let d = r0 / r1;
        (r0, r1) = (r1, r0 - d * r1);
        (s0, s1) = (s1, s0 - d * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(q as i128) as u64)
}

fn p_valuation(mut x: u64, p: u64, e: u32) -> u32 {
    let mut v = 0;
    while v < e && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// One solution of `a x = b` over Z/p^e, or None.
fn solve_prime_power(a: &[Vec<u64>], b: &[u64], p: u64, e: u32) -> Option<Vec<u64>> {
    let q = p.pow(e);
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    if cols == 0 {
        return if b.iter().all(|&x| x % q == 0) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x % q).collect())
        .collect();
    let mut rhs: Vec<u64> = b.iter().map(|&x| x % q).collect();
    // x = V z; V starts as the identity and records column swaps/shears.
    let mut v: Vec<Vec<u64>> = (0..cols)
        .map(|i| {
            let mut r = vec![0u64; cols];
            r[i] = 1;
            r
        })
        .collect();

    let steps = rows.min(cols);
    let mut rank = 0;
    for step in 0..steps {
        // Global min-valuation pivot over the remaining submatrix; this is
        // what makes elimination sound over Z/p^e (all remaining entries are
        // then divisible by the pivot's p-part).
        let mut best: Option<(usize, usize, u32)> = None;
        for i in step..rows {
            for j in step..cols {
                if m[i][j] % q != 0 {
                    let val = p_valuation(m[i][j], p, e);
                    if best.is_none_or(|(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((bi, bj, val)) = best else { break };
        m.swap(step, bi);
        rhs.swap(step, bi);
        if bj != step {
            for r in m.iter_mut() {
                r.swap(step, bj);
            }
            for r in v.iter_mut() {
                r.swap(step, bj);
            }
        }
        let pv = p.pow(val);
        let unit = m[step][step] / pv;
        let uinv = mod_inverse(unit, q).expect("unit part is coprime to p");
        for j in step..cols {
            m[step][j] = mulmod(m[step][j], uinv, q);
        }
        rhs[step] = mulmod(rhs[step], uinv, q);
        for i in (step + 1)..rows {
            let c = m[i][step];
            if c != 0 {
                let f = c / pv;
                for j in step..cols {
                    let t = mulmod(f, m[step][j], q);
                    m[i][j] = submod(m[i][j], t, q);
                }
                rhs[i] = submod(rhs[i], mulmod(f, rhs[step], q), q);
            }
        }
        for j in (step + 1)..cols {
            let c = m[step][j];
            if c != 0 {
                let f = c / pv;
                for r in m.iter_mut() {
                    let t = mulmod(f, r[step], q);
                    r[j] = submod(r[j], t, q);
                }
                for r in v.iter_mut() {
                    let t = mulmod(f, r[step], q);
                    r[j] = submod(r[j], t, q);
                }
            }
        }
        rank = step + 1;
    }

    for i in rank..rows {
        if rhs[i] % q != 0 {
            return None;
        }
    }
    let mut z = vec![0u64; cols];
    for i in 0..rank {
        let pv = m[i][i];
        if pv == 0 {
            if rhs[i] % q != 0 {
                return None;
            }
            continue;
        }
        if rhs[i] % pv != 0 {
            return None;
        }
        z[i] = rhs[i] / pv;
    }
    let mut x = vec![0u64; cols];
    for i in 0..cols {
        let mut acc = 0u64;
        for j in 0..cols {
            acc = (acc + mulmod(v[i][j], z[j], q)) % q;
        }
        x[i] = acc;
    }
    Some(x)
}

fn crt_pair(r1: u64, q1: u64, r2: u64, q2: u64) -> u64 {
    // q1, q2 coprime
    let inv = mod_inverse(q1 % q2, q2).expect("moduli coprime");
    let t = mulmod(submod(r2, r1 % q2, q2), inv, q2);
    r1 + q1 * t
}

/// One solution of `a x = b` over Z/n, or None when the system is
/// inconsistent.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64], n: u64) -> Option<Vec<u64>> {
    assert!(n >= 1);
    let cols = a.first().map_or(0, |r| r.len());
    if n == 1 {
        return Some(vec![0; cols]);
    }
    let mut sol: Option<(Vec<u64>, u64)> = None;
    for (p, e) in factorize(n) {
        let q = p.pow(e);
        let part = solve_prime_power(a, b, p, e)?;
        sol = Some(match sol {
            None => (part, q),
            Some((acc, qa)) => {
                let combined = acc
                    .iter()
                    .zip(part.iter())
                    .map(|(&x1, &x2)| crt_pair(x1, qa, x2, q))
                    .collect();
                (combined, qa * q)
            }
        });
    }
    sol.map(|(x, _)| x)
}

pub fn is_solvable(a: &[Vec<u64>], b: &[u64], n: u64) -> bool {
    solve_mod(a, b, n).is_some()
}

/// The lexicographically least solution of `a x = b` over Z/n (coordinates
/// compared as residues 0..n), or None.  Found greedily: fix each coordinate
/// in turn to the least value that keeps the tail system consistent.
pub fn solve_lex_min(a: &[Vec<u64>], b: &[u64], n: u64) -> Result<Option<Vec<u64>>> {
    let cols = a.first().map_or(0, |r| r.len());
    if !is_solvable(a, b, n) {
        return Ok(None);
    }
    let mut fixed = Vec::with_capacity(cols);
    let mut rhs: Vec<u64> = b.iter().map(|&x| x % n).collect();
    for j in 0..cols {
        let tail: Vec<Vec<u64>> = a.iter().map(|r| r[j + 1..].to_vec()).collect();
        let mut chosen = None;
        for v in 0..n {
            let adj: Vec<u64> = rhs
                .iter()
                .zip(a.iter())
                .map(|(&r, row)| submod(r, mulmod(v, row[j], n), n))
                .collect();
            if is_solvable(&tail, &adj, n) {
                chosen = Some(v);
                rhs = adj;
                break;
            }
        }
        let Some(v) = chosen else {
            return Err(Error::invalid("greedy solve lost consistency".to_string()));
        };
        fixed.push(v);
    }
    Ok(Some(fixed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_solutions(a: &[Vec<u64>], b: &[u64], n: u64) -> Vec<Vec<u64>> {
        let cols = a.first().map_or(0, |r| r.len());
        let total = (n as u128).pow(cols as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut x = vec![0u64; cols];
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = (c % n as u128) as u64;
                c /= n as u128;
            }
            let ok = a.iter().zip(b.iter()).all(|(row, &rhs)| {
                let s: u128 = row
                    .iter()
                    .zip(x.iter())
                    .map(|(&c, &v)| c as u128 * v as u128)
                    .sum();
                (s % n as u128) as u64 == rhs % n
            });
            if ok {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn mixed_valuation_pivot() {
        // 2x + y = 1 mod 4 is solvable only through the unit column.
        let a = vec![vec![2, 1]];
        let b = vec![1];
        let x = solve_mod(&a, &b, 4).unwrap();
        assert_eq!((2 * x[0] + x[1]) % 4, 1);
        let lex = solve_lex_min(&a, &b, 4).unwrap().unwrap();
        assert_eq!(lex, vec![0, 1]);
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![2, 2]];
        let b = vec![1];
        assert!(solve_mod(&a, &b, 4).is_none());
    }

    #[test]
    fn crt_split_modulus() {
        let a = vec![vec![3, 1], vec![1, 5]];
        let b = vec![4, 2];
        let x = solve_mod(&a, &b, 6).unwrap();
        assert_eq!((3 * x[0] + x[1]) % 6, 4);
        assert_eq!((x[0] + 5 * x[1]) % 6, 2);
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(
            n in 2u64..13,
            rows in 0usize..4,
            cols in 0usize..4,
            seed: u64,
        ) {
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                state >> 33
            };
            let a: Vec<Vec<u64>> =
                (0..rows).map(|_| (0..cols).map(|_| next() % n).collect()).collect();
            let b: Vec<u64> = (0..rows).map(|_| next() % n).collect();
            let brute = brute_solutions(&a, &b, n);
            let got = solve_mod(&a, &b, n);
            prop_assert_eq!(got.is_some(), !brute.is_empty());
            if let Some(x) = got {
                prop_assert!(brute.contains(&x));
                let lex = solve_lex_min(&a, &b, n).unwrap().unwrap();
                prop_assert_eq!(&lex, &brute[0]);
            }
        }
    }
}
