//! Finite commutative coefficient rings with unit.
//!
//! The ring universe is Z/n and finite products of such; this already
//! realizes every combination of reduced/non-reduced and
//! indecomposable/decomposable that the reconstruction theory distinguishes.
//! Elements are encoded as a single mixed-radix `u64` over the factor moduli,
//! so they are `Copy` and cheap to enumerate.  Unit, idempotent and nilpotent
//! caches are built eagerly at construction; downstream brute-force oracles
//! rely on full element enumeration, hence the hard size cap.

use crate::error::{Error, Result};
use crate::linalg::{factorize, mod_inverse};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const MAX_RING_SIZE: u64 = 10_000;
pub const MAX_LAURENT_EXP: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingSpec {
    Mod(u64),
    Product(Vec<u64>),
}

/// A finite commutative ring with unit: Z/n or a product of modular rings.
#[derive(Debug, Clone)]
pub struct Ring {
    spec: RingSpec,
    moduli: Vec<u64>,
    size: u64,
    units: Vec<u64>,
    unit_inverse: Vec<Option<u64>>,
    idempotents: Vec<u64>,
    nilpotents: Vec<u64>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.moduli == other.moduli
    }
}
impl Eq for Ring {}

impl Ring {
    pub fn modular(n: u64) -> Result<Ring> {
        Ring::from_spec(&RingSpec::Mod(n))
    }

    pub fn product(factors: &[u64]) -> Result<Ring> {
        Ring::from_spec(&RingSpec::Product(factors.to_vec()))
    }

    pub fn from_spec(spec: &RingSpec) -> Result<Ring> {
        let moduli = match spec {
            RingSpec::Mod(n) => vec![*n],
            RingSpec::Product(f) => f.clone(),
        };
        if moduli.is_empty() {
            return Err(Error::invalid("ring product needs at least one factor"));
        }
        let mut size: u64 = 1;
        for &m in &moduli {
            if m < 2 {
                return Err(Error::invalid(format!(
                    "ring modulus must be >= 2, got {m}"
                )));
            }
            size = size
                .checked_mul(m)
                .filter(|&s| s <= MAX_RING_SIZE)
                .ok_or_else(|| {
                    let needed = moduli
                        .iter()
                        .fold(1u128, |acc, &x| acc.saturating_mul(x as u128));
                    Error::capacity("ring size", needed, MAX_RING_SIZE as u128)
                })?;
        }
        let mut ring = Ring {
            spec: spec.clone(),
            moduli,
            size,
            units: Vec::new(),
            unit_inverse: vec![None; size as usize],
            idempotents: Vec::new(),
            nilpotents: Vec::new(),
        };
        for x in 0..size {
            if let Some(inv) = ring.compute_inverse(x) {
                ring.units.push(x);
                ring.unit_inverse[x as usize] = Some(inv);
            }
            if ring.mul(x, x) == x {
                ring.idempotents.push(x);
            }
            if ring.is_nilpotent_raw(x) {
                ring.nilpotents.push(x);
            }
        }
        Ok(ring)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        self.encode_fn(|_| 1)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        0..self.size
    }

    fn encode_fn(&self, f: impl Fn(usize) -> u64) -> u64 {
        let mut code = 0u64;
        let mut radix = 1u64;
        for (i, &m) in self.moduli.iter().enumerate() {
            code += (f(i) % m) * radix;
            radix *= m;
        }
        code
    }

    pub fn component(&self, x: u64, i: usize) -> u64 {
        let mut c = x;
        for &m in &self.moduli[..i] {
            c /= m;
        }
        c % self.moduli[i]
    }

    pub fn from_components(&self, comps: &[u64]) -> u64 {
        self.encode_fn(|i| comps[i])
    }

    /// Canonical embedding of an integer (i.e. n·1 for n ∈ Z).
    pub fn from_int(&self, v: i64) -> u64 {
        self.encode_fn(|i| v.rem_euclid(self.moduli[i] as i64) as u64)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.encode_fn(|i| (self.component(a, i) + self.component(b, i)) % self.moduli[i])
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.encode_fn(|i| (self.moduli[i] - self.component(a, i)) % self.moduli[i])
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.encode_fn(|i| {
            (self.component(a, i) as u128 * self.component(b, i) as u128 % self.moduli[i] as u128)
                as u64
        })
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn compute_inverse(&self, x: u64) -> Option<u64> {
        let mut comps = Vec::with_capacity(self.moduli.len());
        for (i, &m) in self.moduli.iter().enumerate() {
            comps.push(mod_inverse(self.component(x, i), m)?);
        }
        Some(self.from_components(&comps))
    }

    fn is_nilpotent_raw(&self, x: u64) -> bool {
        // x nilpotent in Z/m iff every prime of m divides x.
        (0..self.moduli.len()).all(|i| {
            let c = self.component(x, i);
            factorize(self.moduli[i]).iter().all(|&(p, _)| c % p == 0)
        })
    }

    pub fn inverse(&self, x: u64) -> Option<u64> {
        self.unit_inverse[x as usize]
    }

    pub fn is_unit(&self, x: u64) -> bool {
        self.unit_inverse[x as usize].is_some()
    }

    /// The invertible elements, each paired with its inverse.
    pub fn units(&self) -> Vec<(u64, u64)> {
        self.units
            .iter()
            .map(|&u| (u, self.unit_inverse[u as usize].unwrap()))
            .collect()
    }

    pub fn idempotents(&self) -> &[u64] {
        &self.idempotents
    }

    pub fn nilpotents(&self) -> &[u64] {
        &self.nilpotents
    }

    /// True iff the only idempotents are 0 and 1.
    pub fn is_indecomposable(&self) -> bool {
        self.idempotents.len() == 2
    }

    /// True iff there is no nonzero nilpotent.
    pub fn is_reduced(&self) -> bool {
        self.nilpotents.len() == 1
    }

    /// Least k with n^k = 0 for a nilpotent n.
    pub fn nilpotency_degree(&self, n: u64) -> Option<u32> {
        let mut x = self.one();
        for k in 0..=64 {
            if x == 0 {
                return Some(k);
            }
            x = self.mul(x, n);
        }
        None
    }

    pub fn display(&self, x: u64) -> String {
        if self.moduli.len() == 1 {
            format!("{x}")
        } else {
            let comps: Vec<String> = (0..self.moduli.len())
                .map(|i| self.component(x, i).to_string())
                .collect();
            format!("({})", comps.join(","))
        }
    }

    pub fn name(&self) -> String {
        match &self.spec {
            RingSpec::Mod(n) => format!("Z/{n}"),
            RingSpec::Product(f) => {
                let parts: Vec<String> = f.iter().map(|m| format!("Z/{m}")).collect();
                parts.join(" x ")
            }
        }
    }

    /// For a modular ring of prime-power order, returns (p, e).
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        if self.moduli.len() != 1 {
            return None;
        }
        let f = factorize(self.moduli[0]);
        if f.len() == 1 {
            Some(f[0])
        } else {
            None
        }
    }
}

/// Laurent polynomial over Z/p^k; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub coeffs: BTreeMap<i64, u64>,
}

impl LaurentPoly {
    pub fn new(ring: &Ring, terms: &[(i64, u64)]) -> Result<LaurentPoly> {
        let mut coeffs = BTreeMap::new();
        for &(e, c) in terms {
            if e.abs() > MAX_LAURENT_EXP {
                return Err(Error::capacity(
                    "laurent exponent",
                    e.unsigned_abs() as u128,
                    MAX_LAURENT_EXP as u128,
                ));
            }
            let c = c % ring.size();
            if c != 0 {
                let entry = coeffs.entry(e).or_insert(0);
                *entry = ring.add(*entry, c);
                if *entry == 0 {
                    coeffs.remove(&e);
                }
            }
        }
        Ok(LaurentPoly { coeffs })
    }

    pub fn one(_ring: &Ring) -> LaurentPoly {
        LaurentPoly {
            coeffs: BTreeMap::from([(0, 1)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &LaurentPoly, ring: &Ring) -> Result<LaurentPoly> {
        let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                let e = e1 + e2;
                if e.abs() > MAX_LAURENT_EXP {
                    return Err(Error::capacity(
                        "laurent exponent",
                        e.unsigned_abs() as u128,
                        MAX_LAURENT_EXP as u128,
                    ));
                }
                let entry = acc.entry(e).or_insert(0);
                *entry = ring.add(*entry, ring.mul(c1, c2));
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(LaurentPoly { coeffs: acc })
    }

    pub fn display(&self, ring: &Ring) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&e, &c)| match e {
                0 => ring.display(c),
                1 => format!("{}x", ring.display(c)),
                _ => format!("{}x^{}", ring.display(c), e),
            })
            .collect();
        terms.join(" + ")
    }
}

/// Inverse of a Laurent polynomial over Z/p^k, if it is a unit.
///
/// Reduce mod the nilradical (p): the image in the residue field's Laurent
/// ring must be a single monomial c·x^m, since Laurent rings over a field
/// have trivial units only.  Then u = c·x^m·(1 + nu) with nu supported on
/// p-divisible coefficients, and (1 + nu) inverts by the finite geometric
/// series 1 - nu + nu^2 - ...
pub fn laurent_unit_inverse(ring: &Ring, u: &LaurentPoly) -> Result<Option<LaurentPoly>> {
    let (p, k) = ring
        .prime_power()
        .ok_or_else(|| Error::invalid("laurent inversion needs a Z/p^k coefficient ring"))?;
    if u.is_zero() {
        return Ok(None);
    }
    let nonzero_mod_p: Vec<i64> = u
        .coeffs
        .iter()
        .filter(|(_, &c)| c % p != 0)
        .map(|(&e, _)| e)
        .collect();
    let [m] = nonzero_mod_p[..] else {
        return Ok(None);
    };
    let c = u.coeffs[&m];
    let cinv = ring
        .inverse(c)
        .expect("coefficient nonzero mod p is a unit in Z/p^k");
    // t = c^-1 x^-m, so u*t = 1 + nu with nu in p·R[x,x^-1].
    let t = LaurentPoly::new(ring, &[(-m, cinv)])?;
    let one_plus_nu = u.mul(&t, ring)?;
    let mut nu = one_plus_nu.clone();
    let e0 = nu.coeffs.entry(0).or_insert(0);
    *e0 = ring.sub(*e0, ring.one());
    if *e0 == 0 {
        nu.coeffs.remove(&0);
    }
    debug_assert!(nu.coeffs.values().all(|&c| c % p == 0));
    // (1 + nu)^-1 = sum_{j<k} (-nu)^j
    let mut inv = LaurentPoly::one(ring);
    let mut pw = LaurentPoly::one(ring);
    for j in 1..k {
        pw = pw.mul(&nu, ring)?;
        let sign = if j % 2 == 1 {
            ring.neg(ring.one())
        } else {
            ring.one()
        };
        for (&e, &cc) in &pw.coeffs {
            let term = ring.mul(sign, cc);
            let entry = inv.coeffs.entry(e).or_insert(0);
            *entry = ring.add(*entry, term);
            if *entry == 0 {
                inv.coeffs.remove(&e);
            }
        }
    }
    let total = t.mul(&inv, ring)?;
    let check = u.mul(&total, ring)?;
    if check != LaurentPoly::one(ring) {
        return Ok(None);
    }
    Ok(Some(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn indecomposable_and_reduced_small_cases() {
        let z4 = Ring::modular(4).unwrap();
        assert!(z4.is_indecomposable());
        assert!(!z4.is_reduced());
        let z6 = Ring::modular(6).unwrap();
        assert!(!z6.is_indecomposable());
        assert_eq!(z6.idempotents(), &[0, 1, 3, 4]);
        assert!(z6.is_reduced());
        let z2 = Ring::modular(2).unwrap();
        assert!(z2.is_indecomposable());
        assert!(z2.is_reduced());
    }

    #[test]
    fn unit_sets() {
        let z6 = Ring::modular(6).unwrap();
        let us: Vec<u64> = z6.units().iter().map(|&(u, _)| u).collect();
        assert_eq!(us, vec![1, 5]);
        let z4 = Ring::modular(4).unwrap();
        let us: Vec<u64> = z4.units().iter().map(|&(u, _)| u).collect();
        assert_eq!(us, vec![1, 3]);
        for (u, v) in z6.units() {
            assert_eq!(z6.mul(u, v), 1);
        }
    }

    #[test]
    fn ring_rejects_bad_moduli() {
        assert!(Ring::modular(1).is_err());
        assert!(Ring::modular(20_000).is_err());
        assert!(Ring::product(&[]).is_err());
    }

    #[test]
    fn laurent_nilpotent_inverse_over_z4() {
        let z4 = Ring::modular(4).unwrap();
        // 1 - 2x, which equals 1 + 2x mod 4
        let u = LaurentPoly::new(&z4, &[(0, 1), (1, z4.neg(2))]).unwrap();
        let inv = laurent_unit_inverse(&z4, &u).unwrap().unwrap();
        assert_eq!(inv, LaurentPoly::new(&z4, &[(0, 1), (1, 2)]).unwrap());
        assert_eq!(u.mul(&inv, &z4).unwrap(), LaurentPoly::one(&z4));
    }

    #[test]
    fn laurent_trivial_unit_and_nonunit() {
        let z4 = Ring::modular(4).unwrap();
        let u = LaurentPoly::new(&z4, &[(2, 3)]).unwrap();
        let inv = laurent_unit_inverse(&z4, &u).unwrap().unwrap();
        assert_eq!(inv, LaurentPoly::new(&z4, &[(-2, 3)]).unwrap());

        let z2 = Ring::modular(2).unwrap();
        let v = LaurentPoly::new(&z2, &[(0, 1), (1, 1)]).unwrap();
        assert!(laurent_unit_inverse(&z2, &v).unwrap().is_none());

        let z6 = Ring::modular(6).unwrap();
        let w = LaurentPoly::new(&z6, &[(0, 1)]).unwrap();
        assert!(laurent_unit_inverse(&z6, &w).is_err());
    }

    #[test]
    fn crt_product_matches_modular() {
        // product(Z/2, Z/3) is ring-isomorphic to Z/6
        let prod = Ring::product(&[2, 3]).unwrap();
        let z6 = Ring::modular(6).unwrap();
        assert_eq!(prod.units().len(), z6.units().len());
        assert_eq!(prod.idempotents().len(), z6.idempotents().len());
        assert_eq!(prod.is_reduced(), z6.is_reduced());
        assert_eq!(prod.is_indecomposable(), z6.is_indecomposable());
    }

    proptest! {
        #[test]
        fn predicates_match_cache_counts(n in 2u64..64) {
            let r = Ring::modular(n).unwrap();
            prop_assert_eq!(r.is_indecomposable(), r.idempotents().len() == 2);
            prop_assert_eq!(r.is_reduced(), r.nilpotents().len() == 1);
            // units form a group: closed under product, every element has inverse
            for &(u, ui) in r.units().iter() {
                prop_assert_eq!(r.mul(u, ui), r.one());
                for &(v, _) in r.units().iter() {
                    prop_assert!(r.is_unit(r.mul(u, v)));
                }
            }
        }

        #[test]
        fn coprime_product_is_modular(a in 2u64..12, b in 2u64..12) {
            prop_assume!(crate::linalg::factorize(a).iter().all(|&(p, _)| b % p != 0));
            let prod = Ring::product(&[a, b]).unwrap();
            let modl = Ring::modular(a * b).unwrap();
            prop_assert_eq!(prod.units().len(), modl.units().len());
            prop_assert_eq!(prod.idempotents().len(), modl.idempotents().len());
            prop_assert_eq!(prod.nilpotents().len(), modl.nilpotents().len());
        }

        #[test]
        fn laurent_inverse_is_exact(pk in prop::sample::select(vec![2u64,3,4,5,7,8,9,16,25,27]), seed: u64) {
            let ring = Ring::modular(pk).unwrap();
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                state >> 33
            };
            let terms: Vec<(i64, u64)> = (0..4)
                .map(|_| ((next() % 7) as i64 - 3, next() % pk))
                .collect();
            let u = LaurentPoly::new(&ring, &terms).unwrap();
            if let Some(v) = laurent_unit_inverse(&ring, &u).unwrap() {
                prop_assert_eq!(u.mul(&v, &ring).unwrap(), LaurentPoly::one(&ring));
                // over a reduced indecomposable modular ring (pk prime), any
                // unit found must be a single monomial with unit coefficient
                if ring.is_reduced() && ring.is_indecomposable() {
                    prop_assert_eq!(u.coeffs.len(), 1);
                    let (_, &c) = u.coeffs.iter().next().unwrap();
                    prop_assert!(ring.is_unit(c));
                }
            }
        }
    }
}
