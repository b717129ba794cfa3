//! Finite groups, grading groups, and group rings over a finite coefficient
//! ring, with the unit-theoretic censuses and witnesses the reconstruction
//! theory turns on.
//!
//! Unit detection is by exhaustive two-sided inverse search.  This is slow by
//! design: the census is the independent oracle every normalizer computation
//! downstream is checked against, so it must not share machinery with them.

use crate::error::{Error, Result};
use crate::ring::Ring;
use serde::{Deserialize, Serialize};

pub const MAX_GROUP_ORDER: usize = 1024;

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
    pub labels: Vec<String>,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::invalid("cyclic group order must be positive"));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::capacity(
                "group order",
                n as u128,
                MAX_GROUP_ORDER as u128,
            ));
        }
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        FiniteGroup::from_table(table, Some(labels))
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1).unwrap()
    }

    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("group table must be square and nonempty"));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::capacity(
                "group order",
                n as u128,
                MAX_GROUP_ORDER as u128,
            ));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::invalid("group table entry out of range"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::invalid("group table has no identity"))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::invalid(format!("group element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::invalid(format!(
                            "group table not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("e{i}")).collect());
        if labels.len() != n {
            return Err(Error::invalid("group label count mismatch"));
        }
        Ok(FiniteGroup {
            size: n,
            table,
            identity,
            inverse,
            labels,
        })
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != self.identity {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    pub fn is_cyclic(&self) -> Option<usize> {
        (0..self.size).find(|&x| self.element_order(x) == self.size)
    }
}

/// The group a grading cocycle lands in.  Integers are kept unbounded since
/// path-groupoid gradings use length differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradingGroup {
    Trivial,
    Integers,
    Finite(FiniteGroup),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GradeElem {
    Unit,
    Int(i64),
    Fin(usize),
}

impl GradingGroup {
    pub fn identity(&self) -> GradeElem {
        match self {
            GradingGroup::Trivial => GradeElem::Unit,
            GradingGroup::Integers => GradeElem::Int(0),
            GradingGroup::Finite(g) => GradeElem::Fin(g.identity),
        }
    }

    pub fn mul(&self, a: GradeElem, b: GradeElem) -> Result<GradeElem> {
        match (self, a, b) {
            (GradingGroup::Trivial, GradeElem::Unit, GradeElem::Unit) => Ok(GradeElem::Unit),
            (GradingGroup::Integers, GradeElem::Int(x), GradeElem::Int(y)) => Ok(GradeElem::Int(
                x.checked_add(y)
                    .ok_or_else(|| Error::invalid("grade overflow"))?,
            )),
            (GradingGroup::Finite(g), GradeElem::Fin(x), GradeElem::Fin(y)) => {
                Ok(GradeElem::Fin(g.mul(x, y)))
            }
            _ => Err(Error::invalid(
                "grade element does not belong to the grading group",
            )),
        }
    }

    pub fn inv(&self, a: GradeElem) -> Result<GradeElem> {
        match (self, a) {
            (GradingGroup::Trivial, GradeElem::Unit) => Ok(GradeElem::Unit),
            (GradingGroup::Integers, GradeElem::Int(x)) => Ok(GradeElem::Int(-x)),
            (GradingGroup::Finite(g), GradeElem::Fin(x)) => Ok(GradeElem::Fin(g.inverse[x])),
            _ => Err(Error::invalid(
                "grade element does not belong to the grading group",
            )),
        }
    }

    pub fn contains(&self, a: GradeElem) -> bool {
        matches!(
            (self, a),
            (GradingGroup::Trivial, GradeElem::Unit) | (GradingGroup::Integers, GradeElem::Int(_))
        ) || matches!((self, a), (GradingGroup::Finite(g), GradeElem::Fin(x)) if x < g.size)
    }

    pub fn display(&self, a: GradeElem) -> String {
        match (self, a) {
            (GradingGroup::Trivial, _) => "1".into(),
            (GradingGroup::Integers, GradeElem::Int(x)) => x.to_string(),
            (GradingGroup::Finite(g), GradeElem::Fin(x)) => g.labels[x].clone(),
            _ => "?".into(),
        }
    }
}

/// Element of the group ring RG, stored densely over the group elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupRingElem {
    pub coeffs: Vec<u64>,
}

impl GroupRingElem {
    pub fn zero(group: &FiniteGroup) -> GroupRingElem {
        GroupRingElem {
            coeffs: vec![0; group.size],
        }
    }

    pub fn one(ring: &Ring, group: &FiniteGroup) -> GroupRingElem {
        let mut e = GroupRingElem::zero(group);
        e.coeffs[group.identity] = ring.one();
        e
    }

    pub fn monomial(group: &FiniteGroup, g: usize, c: u64) -> GroupRingElem {
        let mut e = GroupRingElem::zero(group);
        e.coeffs[g] = c;
        e
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn display(&self, ring: &Ring, group: &FiniteGroup) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(g, &c)| {
                if g == group.identity {
                    ring.display(c)
                } else if c == ring.one() {
                    group.labels[g].clone()
                } else {
                    format!("{}{}", ring.display(c), group.labels[g])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Convolution product in RG.
pub fn gr_multiply(
    ring: &Ring,
    group: &FiniteGroup,
    a: &GroupRingElem,
    b: &GroupRingElem,
) -> GroupRingElem {
    let mut out = GroupRingElem::zero(group);
    for (g, &ca) in a.coeffs.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (h, &cb) in b.coeffs.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            let k = group.mul(g, h);
            out.coeffs[k] = ring.add(out.coeffs[k], ring.mul(ca, cb));
        }
    }
    out
}

/// True iff a = r·g with r a ring unit and g a single group element.
pub fn is_trivial_unit(ring: &Ring, a: &GroupRingElem) -> bool {
    let supp = a.support();
    supp.len() == 1 && ring.is_unit(a.coeffs[supp[0]])
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitCensus {
    pub ring: String,
    pub group_order: usize,
    pub unit_count: usize,
    pub trivial_count: usize,
    /// Nontrivial units with their two-sided inverses, in enumeration order.
    #[serde(skip)]
    pub nontrivial_witnesses: Vec<(GroupRingElem, GroupRingElem)>,
    pub nontrivial_count: usize,
}

fn decode_elem(group: &FiniteGroup, ring: &Ring, code: u128) -> GroupRingElem {
    let mut coeffs = vec![0u64; group.size];
    let mut c = code;
    let r = ring.size() as u128;
    for x in coeffs.iter_mut() {
        *x = (c % r) as u64;
        c /= r;
    }
    GroupRingElem { coeffs }
}

/// Exhaustive unit census of RG: every element is tested for a two-sided
/// inverse by scanning all elements.
pub fn unit_census(ring: &Ring, group: &FiniteGroup, cap: u128) -> Result<UnitCensus> {
    let total = (ring.size() as u128)
        .checked_pow(group.size as u32)
        .ok_or_else(|| Error::capacity("unit census", u128::MAX, cap))?;
    if total > cap {
        return Err(Error::capacity("unit census", total, cap));
    }
    let one = GroupRingElem::one(ring, group);
    let mut unit_count = 0;
    let mut trivial_count = 0;
    let mut nontrivial = Vec::new();
    for code in 0..total {
        let a = decode_elem(group, ring, code);
        let mut inv = None;
        for code_b in 0..total {
            let b = decode_elem(group, ring, code_b);
            if gr_multiply(ring, group, &a, &b) == one && gr_multiply(ring, group, &b, &a) == one {
                inv = Some(b);
                break;
            }
        }
        if let Some(b) = inv {
            unit_count += 1;
            if is_trivial_unit(ring, &a) {
                trivial_count += 1;
            } else {
                nontrivial.push((a, b));
            }
        }
    }
    Ok(UnitCensus {
        ring: ring.name(),
        group_order: group.size,
        unit_count,
        trivial_count,
        nontrivial_count: nontrivial.len(),
        nontrivial_witnesses: nontrivial,
    })
}

/// Constructive nontrivial unit of RG when R fails reduced-or-indecomposable
/// and G is nontrivial: e + (1-e)h for an idempotent e outside {0,1}, else
/// 1 - nh for a nonzero nilpotent n, inverted by the geometric series.
/// Returns the witness with its inverse, verified nontrivial.
pub fn nontrivial_unit_witness(
    ring: &Ring,
    group: &FiniteGroup,
) -> Result<Option<(GroupRingElem, GroupRingElem)>> {
    if group.is_trivial() {
        return Err(Error::invalid(
            "nontrivial unit witness needs a nontrivial group",
        ));
    }
    let h = (0..group.size).find(|&x| x != group.identity).unwrap();
    let hinv = group.inverse[h];
    let one = GroupRingElem::one(ring, group);
    // decomposable witness first, for deterministic outputs
    if let Some(&e) = ring
        .idempotents()
        .iter()
        .find(|&&e| e != 0 && e != ring.one())
    {
        let co = ring.sub(ring.one(), e);
        let mut w = GroupRingElem::monomial(group, group.identity, e);
        w.coeffs[h] = ring.add(w.coeffs[h], co);
        let mut winv = GroupRingElem::monomial(group, group.identity, e);
        winv.coeffs[hinv] = ring.add(winv.coeffs[hinv], co);
        debug_assert_eq!(gr_multiply(ring, group, &w, &winv), one);
        verify_witness(ring, group, &w, &winv)?;
        return Ok(Some((w, winv)));
    }
    if let Some(&n) = ring.nilpotents().iter().find(|&&n| n != 0) {
        let k = ring.nilpotency_degree(n).unwrap();
        let mut w = one.clone();
        w.coeffs[h] = ring.sub(w.coeffs[h], n);
        // inverse: sum_j (n h)^j
        let mut winv = GroupRingElem::zero(group);
        let mut g = group.identity;
        let mut c = ring.one();
        for _ in 0..k {
            winv.coeffs[g] = ring.add(winv.coeffs[g], c);
            g = group.mul(g, h);
            c = ring.mul(c, n);
        }
        verify_witness(ring, group, &w, &winv)?;
        return Ok(Some((w, winv)));
    }
    Ok(None)
}

fn verify_witness(
    ring: &Ring,
    group: &FiniteGroup,
    w: &GroupRingElem,
    winv: &GroupRingElem,
) -> Result<()> {
    let one = GroupRingElem::one(ring, group);
    if gr_multiply(ring, group, w, winv) != one || gr_multiply(ring, group, winv, w) != one {
        return Err(Error::PropertyFailed(
            "constructed witness does not invert".into(),
        ));
    }
    if is_trivial_unit(ring, w) {
        return Err(Error::PropertyFailed(
            "constructed witness is a trivial unit".into(),
        ));
    }
    Ok(())
}

/// True iff RG has only trivial units, decided by exhaustive census.
pub fn has_only_trivial_units(ring: &Ring, group: &FiniteGroup, cap: u128) -> Result<bool> {
    let census = unit_census(ring, group, cap)?;
    Ok(census.nontrivial_count == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> FiniteGroup {
        FiniteGroup::cyclic(2).unwrap()
    }

    #[test]
    fn neher_idempotent_witness_over_z6() {
        let z6 = Ring::modular(6).unwrap();
        let g = c2();
        // (3+4g)^2 = 1 over Z/6
        let a = GroupRingElem { coeffs: vec![3, 4] };
        assert_eq!(gr_multiply(&z6, &g, &a, &a), GroupRingElem::one(&z6, &g));
        assert!(!is_trivial_unit(&z6, &a));
        let (w, winv) = nontrivial_unit_witness(&z6, &g).unwrap().unwrap();
        assert_eq!(w, a);
        assert_eq!(winv, a);
    }

    #[test]
    fn neher_nilpotent_witness_over_z4() {
        let z4 = Ring::modular(4).unwrap();
        let g = c2();
        let (w, winv) = nontrivial_unit_witness(&z4, &g).unwrap().unwrap();
        // 1 - 2g = 1 + 2g mod 4, self inverse
        assert_eq!(w, GroupRingElem { coeffs: vec![1, 2] });
        assert_eq!(winv, GroupRingElem { coeffs: vec![1, 2] });
        assert_eq!(gr_multiply(&z4, &g, &w, &winv), GroupRingElem::one(&z4, &g));
    }

    #[test]
    fn reduced_indecomposable_has_no_witness() {
        let z2 = Ring::modular(2).unwrap();
        assert!(nontrivial_unit_witness(&z2, &c2()).unwrap().is_none());
        let triv = FiniteGroup::trivial();
        assert!(nontrivial_unit_witness(&z2, &triv).is_err());
    }

    #[test]
    fn trivial_unit_detection() {
        let z6 = Ring::modular(6).unwrap();
        let g = c2();
        assert!(is_trivial_unit(&z6, &GroupRingElem { coeffs: vec![0, 5] }));
        assert!(!is_trivial_unit(&z6, &GroupRingElem { coeffs: vec![3, 4] }));
        let z2 = Ring::modular(2).unwrap();
        // 1+g squares to 0 over Z/2
        let a = GroupRingElem { coeffs: vec![1, 1] };
        assert_eq!(gr_multiply(&z2, &g, &a, &a), GroupRingElem::zero(&g));
        assert!(!is_trivial_unit(&z2, &a));
    }

    #[test]
    fn census_small_grid() {
        let cases: Vec<(u64, usize, usize, usize)> = vec![
            // (modulus, group order, units, nontrivial)
            (2, 2, 2, 0),
            (3, 2, 4, 0),
            (4, 2, 8, 4),
            (6, 2, 8, 4),
            (2, 3, 3, 0),
        ];
        for (n, go, units, nontriv) in cases {
            let ring = Ring::modular(n).unwrap();
            let group = FiniteGroup::cyclic(go).unwrap();
            let census = unit_census(&ring, &group, 1 << 20).unwrap();
            assert_eq!(
                (census.unit_count, census.nontrivial_count),
                (units, nontriv),
                "Z/{n} C{go}"
            );
            for (w, winv) in &census.nontrivial_witnesses {
                assert_eq!(
                    gr_multiply(&ring, &group, w, winv),
                    GroupRingElem::one(&ring, &group)
                );
                assert!(!is_trivial_unit(&ring, w));
            }
        }
    }

    #[test]
    fn census_cap_is_enforced() {
        let z4 = Ring::modular(4).unwrap();
        let g = FiniteGroup::cyclic(4).unwrap();
        assert!(matches!(
            unit_census(&z4, &g, 10).unwrap_err(),
            Error::Capacity { .. }
        ));
    }

    #[test]
    fn census_includes_3_plus_4g_over_z6() {
        let z6 = Ring::modular(6).unwrap();
        let census = unit_census(&z6, &c2(), 1 << 20).unwrap();
        let target = GroupRingElem { coeffs: vec![3, 4] };
        assert!(census
            .nontrivial_witnesses
            .iter()
            .any(|(w, _)| *w == target));
    }

    #[test]
    fn witness_grid_for_defective_rings() {
        // every ring failing reduced-or-indecomposable and nontrivial group
        for spec in [vec![4], vec![6], vec![9], vec![2, 3], vec![2, 2]] {
            let ring = if spec.len() == 1 {
                Ring::modular(spec[0]).unwrap()
            } else {
                Ring::product(&spec).unwrap()
            };
            assert!(!(ring.is_reduced() && ring.is_indecomposable()));
            for go in [2, 3, 4] {
                let group = FiniteGroup::cyclic(go).unwrap();
                let w = nontrivial_unit_witness(&ring, &group).unwrap();
                assert!(w.is_some(), "{} C{}", ring.name(), go);
            }
        }
    }

    #[test]
    fn census_and_witness_are_consistent() {
        // witness present ⇒ census finds nontrivial units; census empty ⇒ no
        // witness; census nonempty with no witness only over reduced
        // indecomposable rings (units not of the two constructed shapes)
        for n in [2u64, 3, 4, 5, 6, 9] {
            let ring = Ring::modular(n).unwrap();
            for go in [2usize, 3] {
                let group = FiniteGroup::cyclic(go).unwrap();
                let census = unit_census(&ring, &group, 1 << 24).unwrap();
                let witness = nontrivial_unit_witness(&ring, &group).unwrap();
                if witness.is_some() {
                    assert!(census.nontrivial_count >= 1, "Z/{n} C{go}");
                }
                if census.nontrivial_count == 0 {
                    assert!(witness.is_none(), "Z/{n} C{go}");
                }
                if census.nontrivial_count > 0 && witness.is_none() {
                    assert!(ring.is_reduced() && ring.is_indecomposable(), "Z/{n} C{go}");
                }
            }
        }
        // regression: reduced indecomposable instances with no nontrivial units
        for (n, go) in [(2u64, 2usize), (3, 2), (2, 3)] {
            let ring = Ring::modular(n).unwrap();
            let group = FiniteGroup::cyclic(go).unwrap();
            assert_eq!(
                unit_census(&ring, &group, 1 << 24)
                    .unwrap()
                    .nontrivial_count,
                0
            );
        }
    }

    #[test]
    fn grading_group_ops() {
        let z = GradingGroup::Integers;
        assert_eq!(
            z.mul(GradeElem::Int(2), GradeElem::Int(-5)).unwrap(),
            GradeElem::Int(-3)
        );
        assert_eq!(z.inv(GradeElem::Int(7)).unwrap(), GradeElem::Int(-7));
        let f = GradingGroup::Finite(FiniteGroup::cyclic(3).unwrap());
        assert_eq!(
            f.mul(GradeElem::Fin(1), GradeElem::Fin(2)).unwrap(),
            GradeElem::Fin(0)
        );
        assert!(f.mul(GradeElem::Fin(1), GradeElem::Int(0)).is_err());
    }
}
