//! Finite discrete graded groupoids: construction, isotropy analysis,
//! effectiveness, local bisections and their inverse semigroup.
//!
//! Finiteness makes the topology discrete, so "ample Hausdorff" holds
//! automatically, the interior of the isotropy bundle equals the isotropy
//! bundle, and every object is an isolated point.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GradeElem, GradingGroup};
use crate::invsemi::{InvSemigroup, SemigroupGrading};
use std::collections::{BTreeMap, BTreeSet};

/// Reject full bisection enumeration when a grade fiber holds more arrows
/// than this (2^16 candidate subsets per fiber).
pub const MAX_FIBER_ARROWS: usize = 16;

/// Arrow budget for groupoid construction; the composition table is dense.
pub const MAX_GROUPOID_ARROWS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrow {
    pub dom: usize,
    pub cod: usize,
}

/// A finite groupoid: indexed objects and arrows, a partial composition
/// table, inverses, and the unit arrow of each object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub n_objects: usize,
    pub object_labels: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub arrow_labels: Vec<String>,
    compose: Vec<Option<usize>>,
    pub inv: Vec<usize>,
    pub unit: Vec<usize>,
}

/// A grading cocycle: a functor into a grading group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub group: GradingGroup,
    pub grades: Vec<GradeElem>,
}

impl Cocycle {
    pub fn trivial(gpd: &FiniteGroupoid) -> Cocycle {
        Cocycle {
            group: GradingGroup::Trivial,
            grades: vec![GradeElem::Unit; gpd.arrows.len()],
        }
    }

    pub fn validate(&self, gpd: &FiniteGroupoid) -> Result<()> {
        if self.grades.len() != gpd.arrows.len() {
            return Err(Error::invalid("cocycle length mismatch"));
        }
        for g in &self.grades {
            if !self.group.contains(*g) {
                return Err(Error::invalid("cocycle value outside the grading group"));
            }
        }
        let id = self.group.identity();
        for x in 0..gpd.n_objects {
            if self.grades[gpd.unit[x]] != id {
                return Err(Error::invalid(format!(
                    "cocycle non-identity on unit of object {x}"
                )));
            }
        }
        for a in 0..gpd.arrows.len() {
            if self.grades[gpd.inv[a]] != self.group.inv(self.grades[a])? {
                return Err(Error::invalid(format!(
                    "cocycle not inverse-compatible at arrow {a}"
                )));
            }
            for b in 0..gpd.arrows.len() {
                if let Some(c) = gpd.compose(a, b) {
                    if self.grades[c] != self.group.mul(self.grades[a], self.grades[b])? {
                        return Err(Error::invalid(format!(
                            "cocycle not multiplicative at ({a},{b})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.group, GradingGroup::Trivial)
    }
}

impl FiniteGroupoid {
    pub fn from_parts(
        n_objects: usize,
        object_labels: Option<Vec<String>>,
        arrows: Vec<Arrow>,
        arrow_labels: Option<Vec<String>>,
        compose: Vec<Option<usize>>,
        inv: Vec<usize>,
        unit: Vec<usize>,
    ) -> Result<FiniteGroupoid> {
        let n = arrows.len();
        let gpd = FiniteGroupoid {
            n_objects,
            object_labels: object_labels
                .unwrap_or_else(|| (0..n_objects).map(|i| format!("x{i}")).collect()),
            arrows,
            arrow_labels: arrow_labels.unwrap_or_else(|| (0..n).map(|i| format!("a{i}")).collect()),
            compose,
            inv,
            unit,
        };
        gpd.validate()?;
        Ok(gpd)
    }

    fn validate(&self) -> Result<()> {
        let n = self.arrows.len();
        if n > MAX_GROUPOID_ARROWS {
            return Err(Error::capacity(
                "groupoid arrows",
                n as u128,
                MAX_GROUPOID_ARROWS as u128,
            ));
        }
        if self.object_labels.len() != self.n_objects
            || self.arrow_labels.len() != n
            || self.compose.len() != n * n
            || self.inv.len() != n
            || self.unit.len() != self.n_objects
        {
            return Err(Error::invalid("groupoid component length mismatch"));
        }
        for a in &self.arrows {
            if a.dom >= self.n_objects || a.cod >= self.n_objects {
                return Err(Error::invalid("arrow endpoint out of range"));
            }
        }
        for (x, &u) in self.unit.iter().enumerate() {
            if u >= n || self.arrows[u].dom != x || self.arrows[u].cod != x {
                return Err(Error::invalid(format!(
                    "unit arrow of object {x} malformed"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let defined = self.arrows[a].dom == self.arrows[b].cod;
                match self.compose(a, b) {
                    Some(c) => {
                        if !defined {
                            return Err(Error::invalid(format!(
                                "composition defined on non-composable pair ({a},{b})"
                            )));
                        }
                        if c >= n
                            || self.arrows[c].dom != self.arrows[b].dom
                            || self.arrows[c].cod != self.arrows[a].cod
                        {
                            return Err(Error::invalid(format!(
                                "composite of ({a},{b}) has wrong endpoints"
                            )));
                        }
                    }
                    None => {
                        if defined {
                            return Err(Error::invalid(format!(
                                "composable pair ({a},{b}) missing a composite"
                            )));
                        }
                    }
                }
            }
        }
        for a in 0..n {
            let u_dom = self.unit[self.arrows[a].dom];
            let u_cod = self.unit[self.arrows[a].cod];
            if self.compose(a, u_dom) != Some(a) || self.compose(u_cod, a) != Some(a) {
                return Err(Error::invalid(format!(
                    "units do not act as identities at {a}"
                )));
            }
            let i = self.inv[a];
            if i >= n
                || self.arrows[i].dom != self.arrows[a].cod
                || self.arrows[i].cod != self.arrows[a].dom
                || self.compose(a, i) != Some(u_cod)
                || self.compose(i, a) != Some(u_dom)
            {
                return Err(Error::invalid(format!("arrow {a} is not invertible")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.compose(b, c).and_then(|bc| self.compose(a, bc));
                    let right = self.compose(a, b).and_then(|ab| self.compose(ab, c));
                    if left != right {
                        return Err(Error::invalid(format!(
                            "composition not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// a∘b, defined when dom(a) = cod(b).
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose[a * self.arrows.len() + b]
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_unit_arrow(&self, a: usize) -> bool {
        self.unit[self.arrows[a].dom] == a
    }

    /// The pair groupoid on n objects: one arrow j -> i for every pair.
    pub fn pair_groupoid(n: usize) -> Result<FiniteGroupoid> {
        if n == 0 {
            return Err(Error::invalid("pair groupoid needs at least one object"));
        }
        if n * n > MAX_GROUPOID_ARROWS {
            return Err(Error::capacity(
                "groupoid arrows",
                (n as u128) * (n as u128),
                MAX_GROUPOID_ARROWS as u128,
            ));
        }
        let mut arrows = Vec::new();
        let mut labels = Vec::new();
        let idx = |i: usize, j: usize| i * n + j;
        for i in 0..n {
            for j in 0..n {
                arrows.push(Arrow { dom: j, cod: i });
                labels.push(if i == j {
                    format!("id{i}")
                } else {
                    format!("({j}->{i})")
                });
            }
        }
        let m = arrows.len();
        let mut compose = vec![None; m * m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    compose[idx(i, j) * m + idx(j, k)] = Some(idx(i, k));
                }
            }
        }
        let inv = (0..m).map(|a| idx(a % n, a / n)).collect();
        let unit = (0..n).map(|i| idx(i, i)).collect();
        FiniteGroupoid::from_parts(n, None, arrows, Some(labels), compose, inv, unit)
    }

    /// A group viewed as a one-object groupoid.
    pub fn group_as_groupoid(g: &FiniteGroup) -> Result<FiniteGroupoid> {
        let m = g.size;
        let arrows = vec![Arrow { dom: 0, cod: 0 }; m];
        let mut compose = vec![None; m * m];
        for a in 0..m {
            for b in 0..m {
                compose[a * m + b] = Some(g.mul(a, b));
            }
        }
        FiniteGroupoid::from_parts(
            1,
            None,
            arrows,
            Some(g.labels.clone()),
            compose,
            g.inverse.clone(),
            vec![g.identity],
        )
    }

    /// A bundle of groups, one per object; arrows are the fiberwise group
    /// elements.
    pub fn group_bundle(groups: &[FiniteGroup]) -> Result<FiniteGroupoid> {
        if groups.is_empty() {
            return Err(Error::invalid("group bundle needs at least one object"));
        }
        let parts: Vec<FiniteGroupoid> = groups
            .iter()
            .map(FiniteGroupoid::group_as_groupoid)
            .collect::<Result<_>>()?;
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            acc = FiniteGroupoid::disjoint_union(&acc, p)?;
        }
        Ok(acc)
    }

    pub fn disjoint_union(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> Result<FiniteGroupoid> {
        let no = g1.n_objects;
        let na = g1.n_arrows();
        let n_objects = no + g2.n_objects;
        let mut arrows = g1.arrows.clone();
        arrows.extend(g2.arrows.iter().map(|a| Arrow {
            dom: a.dom + no,
            cod: a.cod + no,
        }));
        let m = arrows.len();
        let mut compose = vec![None; m * m];
        for a in 0..g1.n_arrows() {
            for b in 0..g1.n_arrows() {
                compose[a * m + b] = g1.compose(a, b);
            }
        }
        for a in 0..g2.n_arrows() {
            for b in 0..g2.n_arrows() {
                compose[(a + na) * m + (b + na)] = g2.compose(a, b).map(|c| c + na);
            }
        }
        let mut inv: Vec<usize> = g1.inv.clone();
        inv.extend(g2.inv.iter().map(|&i| i + na));
        let mut unit = g1.unit.clone();
        unit.extend(g2.unit.iter().map(|&u| u + na));
        let labels: Vec<String> = g1
            .arrow_labels
            .iter()
            .map(|l| format!("L.{l}"))
            .chain(g2.arrow_labels.iter().map(|l| format!("R.{l}")))
            .collect();
        let obj_labels: Vec<String> = g1
            .object_labels
            .iter()
            .map(|l| format!("L.{l}"))
            .chain(g2.object_labels.iter().map(|l| format!("R.{l}")))
            .collect();
        FiniteGroupoid::from_parts(
            n_objects,
            Some(obj_labels),
            arrows,
            Some(labels),
            compose,
            inv,
            unit,
        )
    }

    pub fn product(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> Result<FiniteGroupoid> {
        if g1.n_arrows() * g2.n_arrows() > MAX_GROUPOID_ARROWS {
            return Err(Error::capacity(
                "groupoid arrows",
                (g1.n_arrows() as u128) * (g2.n_arrows() as u128),
                MAX_GROUPOID_ARROWS as u128,
            ));
        }
        let n_objects = g1.n_objects * g2.n_objects;
        let oidx = |x: usize, y: usize| x * g2.n_objects + y;
        let aidx = |a: usize, b: usize| a * g2.n_arrows() + b;
        let mut arrows = Vec::with_capacity(g1.n_arrows() * g2.n_arrows());
        for a in &g1.arrows {
            for b in &g2.arrows {
                arrows.push(Arrow {
                    dom: oidx(a.dom, b.dom),
                    cod: oidx(a.cod, b.cod),
                });
            }
        }
        let m = arrows.len();
        let mut compose = vec![None; m * m];
        for a1 in 0..g1.n_arrows() {
            for b1 in 0..g2.n_arrows() {
                for a2 in 0..g1.n_arrows() {
                    for b2 in 0..g2.n_arrows() {
                        if let (Some(c1), Some(c2)) = (g1.compose(a1, a2), g2.compose(b1, b2)) {
                            compose[aidx(a1, b1) * m + aidx(a2, b2)] = Some(aidx(c1, c2));
                        }
                    }
                }
            }
        }
        let mut inv = vec![0usize; m];
        for a in 0..g1.n_arrows() {
            for b in 0..g2.n_arrows() {
                inv[aidx(a, b)] = aidx(g1.inv[a], g2.inv[b]);
            }
        }
        let mut unit = vec![0usize; n_objects];
        for x in 0..g1.n_objects {
            for y in 0..g2.n_objects {
                unit[oidx(x, y)] = aidx(g1.unit[x], g2.unit[y]);
            }
        }
        FiniteGroupoid::from_parts(n_objects, None, arrows, None, compose, inv, unit)
    }

    /// The isotropy group at x, with the arrow indices realizing it.
    pub fn isotropy_group(&self, x: usize) -> Result<(FiniteGroup, Vec<usize>)> {
        if x >= self.n_objects {
            return Err(Error::invalid("object index out of range"));
        }
        let members: Vec<usize> = (0..self.n_arrows())
            .filter(|&a| self.arrows[a].dom == x && self.arrows[a].cod == x)
            .collect();
        let pos: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let table: Vec<Vec<usize>> = members
            .iter()
            .map(|&a| {
                members
                    .iter()
                    .map(|&b| pos[&self.compose(a, b).unwrap()])
                    .collect()
            })
            .collect();
        let labels = members
            .iter()
            .map(|&a| self.arrow_labels[a].clone())
            .collect();
        Ok((FiniteGroup::from_table(table, Some(labels))?, members))
    }

    /// Arrow set of the interior of the isotropy bundle.  Every subset of a
    /// finite discrete groupoid is open, so this is the isotropy bundle
    /// itself: all arrows with dom = cod.
    pub fn isotropy_interior(&self) -> Vec<usize> {
        (0..self.n_arrows())
            .filter(|&a| self.arrows[a].dom == self.arrows[a].cod)
            .collect()
    }

    /// Effective iff the isotropy interior consists of unit arrows only;
    /// finite-discretely, iff all isotropy groups are trivial.
    pub fn is_effective(&self) -> bool {
        self.isotropy_interior()
            .iter()
            .all(|&a| self.is_unit_arrow(a))
    }

    /// Object partition into orbits.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut repr: Vec<usize> = (0..self.n_objects).collect();
        fn find(repr: &mut Vec<usize>, x: usize) -> usize {
            if repr[x] != x {
                let r = find(repr, repr[x]);
                repr[x] = r;
            }
            repr[x]
        }
        for a in &self.arrows {
            let (rd, rc) = (find(&mut repr, a.dom), find(&mut repr, a.cod));
            if rd != rc {
                repr[rd] = rc;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.n_objects {
            let r = find(&mut repr, x);
            groups.entry(r).or_default().push(x);
        }
        groups.into_values().collect()
    }

    /// The full subgroupoid of arrows in the grade-identity fiber.
    pub fn grade_identity_subgroupoid(&self, c: &Cocycle) -> Result<(FiniteGroupoid, Vec<usize>)> {
        let id = c.group.identity();
        let keep: Vec<usize> = (0..self.n_arrows())
            .filter(|&a| c.grades[a] == id)
            .collect();
        self.subgroupoid_on_arrows(&keep)
    }

    /// Restrict to a subset of arrows that is closed under composition,
    /// inverses and contains all units.
    pub fn subgroupoid_on_arrows(&self, keep: &[usize]) -> Result<(FiniteGroupoid, Vec<usize>)> {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let arrows: Vec<Arrow> = keep.iter().map(|&a| self.arrows[a]).collect();
        let m = arrows.len();
        let mut compose = vec![None; m * m];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if let Some(c) = self.compose(a, b) {
                    let Some(&k) = pos.get(&c) else {
                        return Err(Error::invalid("arrow subset not closed under composition"));
                    };
                    compose[i * m + j] = Some(k);
                }
            }
        }
        let inv: Vec<usize> = keep
            .iter()
            .map(|&a| {
                pos.get(&self.inv[a])
                    .copied()
                    .ok_or_else(|| Error::invalid("arrow subset not closed under inverses"))
            })
            .collect::<Result<_>>()?;
        let unit: Vec<usize> = self
            .unit
            .iter()
            .map(|u| {
                pos.get(u)
                    .copied()
                    .ok_or_else(|| Error::invalid("arrow subset misses a unit"))
            })
            .collect::<Result<_>>()?;
        let labels = keep.iter().map(|&a| self.arrow_labels[a].clone()).collect();
        let gpd = FiniteGroupoid::from_parts(
            self.n_objects,
            Some(self.object_labels.clone()),
            arrows,
            Some(labels),
            compose,
            inv,
            unit,
        )?;
        Ok((gpd, keep.to_vec()))
    }

    /// d- and r-injectivity of an arrow set.
    pub fn is_local_bisection(&self, set: &[usize]) -> bool {
        let mut doms = BTreeSet::new();
        let mut cods = BTreeSet::new();
        for &a in set {
            if !doms.insert(self.arrows[a].dom) || !cods.insert(self.arrows[a].cod) {
                return false;
            }
        }
        true
    }

    /// Setwise product of two arrow sets.
    pub fn set_product(&self, u: &[usize], v: &[usize]) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &a in u {
            for &b in v {
                if let Some(c) = self.compose(a, b) {
                    out.insert(c);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn set_inverse(&self, u: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = u.iter().map(|&a| self.inv[a]).collect();
        out.sort_unstable();
        out
    }

    pub fn dom_set(&self, u: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = u.iter().map(|&a| self.arrows[a].dom).collect();
        set.into_iter().collect()
    }

    pub fn cod_set(&self, u: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = u.iter().map(|&a| self.arrows[a].cod).collect();
        set.into_iter().collect()
    }
}

/// All local bisections contained in the given arrow pool.
fn bisections_in(gpd: &FiniteGroupoid, pool: &[usize]) -> Result<Vec<Vec<usize>>> {
    if pool.len() > MAX_FIBER_ARROWS {
        return Err(Error::capacity(
            "bisection enumeration per fiber",
            pool.len() as u128,
            MAX_FIBER_ARROWS as u128,
        ));
    }
    if gpd.n_objects > 64 {
        // the identity fiber alone would already blow the per-fiber cap
        return Err(Error::capacity(
            "bisection enumeration objects",
            gpd.n_objects as u128,
            64,
        ));
    }
    let mut out = Vec::new();
    let total = 1usize << pool.len();
    'subset: for mask in 0..total {
        let mut doms = 0u64;
        let mut cods = 0u64;
        let mut set = Vec::new();
        for (i, &a) in pool.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (d, c) = (gpd.arrows[a].dom as u64, gpd.arrows[a].cod as u64);
                if doms >> d & 1 == 1 || cods >> c & 1 == 1 {
                    continue 'subset;
                }
                doms |= 1 << d;
                cods |= 1 << c;
                set.push(a);
            }
        }
        out.push(set);
    }
    Ok(out)
}

/// The inverse semigroup of (homogeneous) compact local bisections under the
/// setwise product, with the empty set as zero.  With a cocycle only
/// single-fiber bisections are kept and the result carries the induced
/// grading.
pub fn bisections(
    gpd: &FiniteGroupoid,
    cocycle: Option<&Cocycle>,
) -> Result<(Vec<Vec<usize>>, InvSemigroup, Option<SemigroupGrading>)> {
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    sets.insert(Vec::new());
    match cocycle {
        None => {
            let pool: Vec<usize> = (0..gpd.n_arrows()).collect();
            for b in bisections_in(gpd, &pool)? {
                sets.insert(b);
            }
        }
        Some(c) => {
            c.validate(gpd)?;
            let mut fibers: BTreeMap<GradeElem, Vec<usize>> = BTreeMap::new();
            for a in 0..gpd.n_arrows() {
                fibers.entry(c.grades[a]).or_default().push(a);
            }
            for pool in fibers.values() {
                for b in bisections_in(gpd, pool)? {
                    sets.insert(b);
                }
            }
        }
    }
    // order by (size, contents) so the empty set is element 0
    let mut elements: Vec<Vec<usize>> = sets.into_iter().collect();
    elements.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    let index: BTreeMap<&[usize], usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for (i, u) in elements.iter().enumerate() {
        for (j, v) in elements.iter().enumerate() {
            let p = gpd.set_product(u, v);
            table[i][j] = *index
                .get(p.as_slice())
                .ok_or_else(|| Error::invalid("bisection product escaped the element set"))?;
        }
    }
    let labels: Vec<String> = elements
        .iter()
        .map(|u| {
            if u.is_empty() {
                "{}".to_string()
            } else {
                let names: Vec<&str> = u.iter().map(|&a| gpd.arrow_labels[a].as_str()).collect();
                format!("{{{}}}", names.join(","))
            }
        })
        .collect();
    let sg = InvSemigroup::from_table(table, Some(0), Some(labels))?;
    let grading = cocycle.map(|c| SemigroupGrading {
        group: c.group.clone(),
        grades: elements
            .iter()
            .map(|u| u.first().map(|&a| c.grades[a]))
            .collect(),
    });
    Ok((elements, sg, grading))
}

/// Regression guard for the meet implementation: at finite scale every
/// bisection semigroup admits binary meets (they are intersections).
pub fn binary_meets_check(sg: &InvSemigroup) -> bool {
    sg.has_binary_meets()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invsemi::check_partial_hom;
    use proptest::prelude::*;

    #[test]
    fn pair_groupoid_counts() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        assert_eq!(g.n_objects, 2);
        assert_eq!(g.n_arrows(), 4);
        assert!(g.is_effective());
        let (iso, _) = g.isotropy_group(0).unwrap();
        assert!(iso.is_trivial());
    }

    #[test]
    fn group_as_groupoid_isotropy() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroupoid::group_as_groupoid(&c2).unwrap();
        assert_eq!((g.n_objects, g.n_arrows()), (1, 2));
        assert!(!g.is_effective());
        let (iso, _) = g.isotropy_group(0).unwrap();
        assert_eq!(iso.size, 2);
    }

    #[test]
    fn bundle_counts_and_interior() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let triv = FiniteGroup::trivial();
        let g = FiniteGroupoid::group_bundle(&[c2, triv]).unwrap();
        assert_eq!((g.n_objects, g.n_arrows()), (2, 3));
        assert!(!g.is_effective());
        assert_eq!(g.isotropy_interior().len(), 3);

        let pair = FiniteGroupoid::pair_groupoid(2).unwrap();
        let c2g = FiniteGroupoid::group_as_groupoid(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        let u = FiniteGroupoid::disjoint_union(&pair, &c2g).unwrap();
        // units of the pair part plus the whole C2 fiber
        assert_eq!(u.isotropy_interior().len(), 4);
    }

    #[test]
    fn bisection_semigroup_of_pair2() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let (elements, sg, _) = bisections(&g, None).unwrap();
        assert_eq!(elements.len(), 7);
        assert_eq!(sg.zero, Some(0));
        assert_eq!(sg.idempotents().len(), 4);
        assert!(binary_meets_check(&sg));
        // meets are intersections
        for (i, u) in elements.iter().enumerate() {
            for (j, v) in elements.iter().enumerate() {
                let m = sg.meet(i, j).unwrap();
                let inter: Vec<usize> = u.iter().copied().filter(|a| v.contains(a)).collect();
                assert_eq!(elements[m], inter);
            }
        }
    }

    #[test]
    fn bisection_semigroup_of_c2() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroupoid::group_as_groupoid(&c2).unwrap();
        let (elements, sg, _) = bisections(&g, None).unwrap();
        assert_eq!(elements.len(), 3);
        assert_eq!(sg.zero, Some(0));
    }

    #[test]
    fn homogeneous_bisections_are_graded_and_full() {
        // pair groupoid on 2 objects with cross arrows graded ±1
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let grades = (0..g.n_arrows())
            .map(|a| {
                let Arrow { dom, cod } = g.arrows[a];
                GradeElem::Int(cod as i64 - dom as i64)
            })
            .collect();
        let c = Cocycle {
            group: GradingGroup::Integers,
            grades,
        };
        c.validate(&g).unwrap();
        let (helems, hsg, grading) = bisections(&g, Some(&c)).unwrap();
        assert_eq!(helems.len(), 6);
        let theta = grading.unwrap();
        assert!(check_partial_hom(&hsg, &theta).unwrap());

        // full inverse subsemigroup of the ungraded bisections
        let (elems, sg, _) = bisections(&g, None).unwrap();
        let subset: Vec<usize> = helems
            .iter()
            .map(|h| elems.iter().position(|e| e == h).unwrap())
            .collect();
        assert!(sg.is_full_inverse_subsemigroup(&subset));
        assert!(sg.is_order_ideal(&subset));
    }

    #[test]
    fn compatibility_is_union_bisection() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let (elements, sg, _) = bisections(&g, None).unwrap();
        for (i, u) in elements.iter().enumerate() {
            for (j, v) in elements.iter().enumerate() {
                let mut union: Vec<usize> = u.iter().chain(v.iter()).copied().collect();
                union.sort_unstable();
                union.dedup();
                let expected = g.is_local_bisection(&union);
                assert_eq!(sg.is_compatible(i, j), expected);
                if expected {
                    let join = sg.join(i, j).unwrap().unwrap();
                    assert_eq!(elements[join], union);
                }
            }
        }
    }

    #[test]
    fn full_distributive_subsemigroups_are_join_closed() {
        // whenever both Γc and a full Γc^h are distributive, the subsemigroup
        // is closed under the joins of its compatible pairs
        let a2 = crate::leavitt::DirectedGraph {
            vertices: vec!["v".into(), "w".into()],
            edges: vec![crate::leavitt::Edge {
                name: "e".into(),
                src: "v".into(),
                dst: "w".into(),
            }],
        };
        let pg = crate::leavitt::path_groupoid(&a2).unwrap();
        let pair2 = FiniteGroupoid::pair_groupoid(2).unwrap();
        let cases: Vec<(FiniteGroupoid, Cocycle)> = vec![
            (pg.groupoid.clone(), pg.cocycle.clone()),
            (pair2.clone(), Cocycle::trivial(&pair2)),
        ];
        for (g, c) in cases {
            let (elems, sg, _) = bisections(&g, None).unwrap();
            let (helems, hsg, _) = bisections(&g, Some(&c)).unwrap();
            let subset: Vec<usize> = helems
                .iter()
                .map(|h| elems.iter().position(|e| e == h).unwrap())
                .collect();
            assert!(sg.is_full_inverse_subsemigroup(&subset));
            if !sg.is_distributive() || !hsg.is_distributive() {
                continue;
            }
            let inset: std::collections::BTreeSet<usize> = subset.iter().copied().collect();
            for (i, &si) in subset.iter().enumerate() {
                for &sj in &subset[i..] {
                    if sg.is_compatible(si, sj) {
                        let join = sg.join(si, sj).unwrap().expect("joins exist in Γc");
                        assert!(inset.contains(&join), "join escaped the subsemigroup");
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn bisection_semigroup_laws(n in 1usize..4) {
            let g = FiniteGroupoid::pair_groupoid(n).unwrap();
            let (elements, sg, _) = bisections(&g, None).unwrap();
            for i in 0..sg.size {
                let star = sg.star[i];
                prop_assert_eq!(&elements[star], &g.set_inverse(&elements[i]));
                // U·U⁻¹·U = U
                let uu = sg.mul(sg.mul(i, star), i);
                prop_assert_eq!(uu, i);
                for j in 0..sg.size {
                    // (UV)⁻¹ = V⁻¹U⁻¹
                    prop_assert_eq!(sg.star[sg.mul(i, j)], sg.mul(sg.star[j], sg.star[i]));
                }
            }
        }
    }
}
