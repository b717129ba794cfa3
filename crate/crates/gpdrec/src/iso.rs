//! Backtracking search for grade-preserving groupoid isomorphisms.
//!
//! Cheap complete invariants (object/arrow counts, grade multiset, per-object
//! isotropy and degree signatures) prune most non-isomorphic pairs before the
//! search starts.  The search itself assigns arrows one at a time and
//! propagates all forced consequences (inverses, units, composites with
//! already-assigned arrows), so the branching factor stays small.

use crate::error::{Error, Result};
use crate::group::GradeElem;
use crate::groupoid::{Cocycle, FiniteGroupoid};
use std::collections::BTreeMap;

pub const DEFAULT_ISO_NODE_CAP: u64 = 1_000_000;

/// A bijective functor: object and arrow bijections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidIso {
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl GroupoidIso {
    /// Full functor check: bijectivity, endpoints, composition, grades.
    pub fn verify(
        &self,
        g1: &FiniteGroupoid,
        c1: &Cocycle,
        g2: &FiniteGroupoid,
        c2: &Cocycle,
    ) -> Result<()> {
        if g1.n_objects != g2.n_objects || g1.n_arrows() != g2.n_arrows() {
            return Err(Error::PropertyFailed("iso size mismatch".into()));
        }
        let mut seen_obj = vec![false; g2.n_objects];
        for &y in &self.object_map {
            if y >= g2.n_objects || seen_obj[y] {
                return Err(Error::PropertyFailed("object map not a bijection".into()));
            }
            seen_obj[y] = true;
        }
        let mut seen_arr = vec![false; g2.n_arrows()];
        for &b in &self.arrow_map {
            if b >= g2.n_arrows() || seen_arr[b] {
                return Err(Error::PropertyFailed("arrow map not a bijection".into()));
            }
            seen_arr[b] = true;
        }
        for a in 0..g1.n_arrows() {
            let b = self.arrow_map[a];
            if self.object_map[g1.arrows[a].dom] != g2.arrows[b].dom
                || self.object_map[g1.arrows[a].cod] != g2.arrows[b].cod
            {
                return Err(Error::PropertyFailed(format!(
                    "endpoints not preserved at arrow {a}"
                )));
            }
            if c1.grades[a] != c2.grades[b] {
                return Err(Error::PropertyFailed(format!(
                    "grade not preserved at arrow {a}"
                )));
            }
            for a2 in 0..g1.n_arrows() {
                let lhs = g1.compose(a, a2).map(|c| self.arrow_map[c]);
                let rhs = g2.compose(b, self.arrow_map[a2]);
                if lhs != rhs {
                    return Err(Error::PropertyFailed(format!(
                        "composition not preserved at ({a},{a2})"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn grade_multiset(c: &Cocycle) -> Vec<GradeElem> {
    let mut v = c.grades.clone();
    v.sort();
    v
}

/// Per-object invariant: orbit size, then for each grade the counts of
/// outgoing, incoming and isotropy arrows.
type ObjectSig = (usize, Vec<(GradeElem, usize, usize, usize)>);

fn object_signatures(g: &FiniteGroupoid, c: &Cocycle) -> Vec<ObjectSig> {
    let mut orbit_size = vec![0usize; g.n_objects];
    for orbit in g.orbits() {
        for &x in &orbit {
            orbit_size[x] = orbit.len();
        }
    }
    (0..g.n_objects)
        .map(|x| {
            let mut per_grade: BTreeMap<GradeElem, (usize, usize, usize)> = BTreeMap::new();
            for (a, arr) in g.arrows.iter().enumerate() {
                let e = per_grade.entry(c.grades[a]).or_default();
                if arr.dom == x {
                    e.0 += 1;
                }
                if arr.cod == x {
                    e.1 += 1;
                }
                if arr.dom == x && arr.cod == x {
                    e.2 += 1;
                }
            }
            (
                orbit_size[x],
                per_grade
                    .into_iter()
                    .map(|(g, (o, i, s))| (g, o, i, s))
                    .collect(),
            )
        })
        .collect()
}

struct SearchState<'a> {
    g1: &'a FiniteGroupoid,
    c1: &'a Cocycle,
    g2: &'a FiniteGroupoid,
    c2: &'a Cocycle,
    sig1: Vec<ObjectSig>,
    sig2: Vec<ObjectSig>,
    amap: Vec<Option<usize>>,
    omap: Vec<Option<usize>>,
    arrow_used: Vec<bool>,
    object_used: Vec<bool>,
    nodes: u64,
    node_cap: u64,
}

enum Assign {
    Ok(Vec<usize>),
    Conflict,
}

impl<'a> SearchState<'a> {
    /// Assign arrow a -> b together with everything it forces; returns the
    /// list of newly assigned g1 arrows for undo, or a conflict.
    fn assign(&mut self, a: usize, b: usize) -> Assign {
        let mut trail = Vec::new();
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            if let Some(existing) = self.amap[a] {
                if existing == b {
                    continue;
                }
                self.undo(&trail);
                return Assign::Conflict;
            }
            if self.arrow_used[b] || !self.compatible(a, b) {
                self.undo(&trail);
                return Assign::Conflict;
            }
            self.amap[a] = Some(b);
            self.arrow_used[b] = true;
            trail.push(a);
            for (x, y) in [
                (self.g1.arrows[a].dom, self.g2.arrows[b].dom),
                (self.g1.arrows[a].cod, self.g2.arrows[b].cod),
            ] {
                match self.omap[x] {
                    None => {
                        self.omap[x] = Some(y);
                        self.object_used[y] = true;
                        queue.push((self.g1.unit[x], self.g2.unit[y]));
                    }
                    Some(z) if z == y => {}
                    Some(_) => {
                        self.undo(&trail);
                        return Assign::Conflict;
                    }
                }
            }
            queue.push((self.g1.inv[a], self.g2.inv[b]));
            // composites with already-assigned arrows are forced
            for a2 in 0..self.g1.n_arrows() {
                let Some(b2) = self.amap[a2] else { continue };
                for ((p, q), (pi, qi)) in [((a, a2), (b, b2)), ((a2, a), (b2, b))] {
                    match (self.g1.compose(p, q), self.g2.compose(pi, qi)) {
                        (None, None) => {}
                        (Some(c), Some(d)) => queue.push((c, d)),
                        _ => {
                            self.undo(&trail);
                            return Assign::Conflict;
                        }
                    }
                }
            }
        }
        Assign::Ok(trail)
    }

    fn compatible(&self, a: usize, b: usize) -> bool {
        if self.c1.grades[a] != self.c2.grades[b] {
            return false;
        }
        let (a1, a2) = (self.g1.arrows[a], self.g2.arrows[b]);
        if self.g1.is_unit_arrow(a) != self.g2.is_unit_arrow(b) {
            return false;
        }
        for (x, y) in [(a1.dom, a2.dom), (a1.cod, a2.cod)] {
            match self.omap[x] {
                Some(z) if z != y => return false,
                None if self.object_used[y] => return false,
                None if self.sig1[x] != self.sig2[y] => return false,
                _ => {}
            }
        }
        true
    }

    fn undo(&mut self, trail: &[usize]) {
        for &a in trail {
            let b = self.amap[a].take().expect("trail entry was assigned");
            self.arrow_used[b] = false;
        }
        // rebuild object usage from scratch; object assignments are cheap to
        // recompute and tricky to trail through shared endpoints
        self.omap = vec![None; self.g1.n_objects];
        self.object_used = vec![false; self.g2.n_objects];
        for a in 0..self.g1.n_arrows() {
            if let Some(b) = self.amap[a] {
                for (x, y) in [
                    (self.g1.arrows[a].dom, self.g2.arrows[b].dom),
                    (self.g1.arrows[a].cod, self.g2.arrows[b].cod),
                ] {
                    self.omap[x] = Some(y);
                    self.object_used[y] = true;
                }
            }
        }
    }

    fn search(&mut self) -> Result<bool> {
        let Some(a) = (0..self.g1.n_arrows()).find(|&a| self.amap[a].is_none()) else {
            return Ok(true);
        };
        for b in 0..self.g2.n_arrows() {
            if self.arrow_used[b] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_cap {
                return Err(Error::Inconclusive(format!(
                    "isomorphism search exceeded {} nodes",
                    self.node_cap
                )));
            }
            match self.assign(a, b) {
                Assign::Conflict => {}
                Assign::Ok(trail) => {
                    if self.search()? {
                        return Ok(true);
                    }
                    self.undo(&trail);
                }
            }
        }
        Ok(false)
    }
}

/// Search for a grade-preserving isomorphism.  `Ok(None)` means definitely
/// none exists; a node-cap overflow surfaces as `Error::Inconclusive`.
pub fn graded_iso_search(
    g1: &FiniteGroupoid,
    c1: &Cocycle,
    g2: &FiniteGroupoid,
    c2: &Cocycle,
    node_cap: u64,
) -> Result<Option<GroupoidIso>> {
    if c1.group != c2.group {
        return Ok(None);
    }
    if g1.n_objects != g2.n_objects || g1.n_arrows() != g2.n_arrows() {
        return Ok(None);
    }
    if grade_multiset(c1) != grade_multiset(c2) {
        return Ok(None);
    }
    let sig1 = object_signatures(g1, c1);
    let sig2 = object_signatures(g2, c2);
    let mut s1 = sig1.clone();
    let mut s2 = sig2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    let mut state = SearchState {
        g1,
        c1,
        g2,
        c2,
        sig1,
        sig2,
        amap: vec![None; g1.n_arrows()],
        omap: vec![None; g1.n_objects],
        arrow_used: vec![false; g2.n_arrows()],
        object_used: vec![false; g2.n_objects],
        nodes: 0,
        node_cap,
    };
    if !state.search()? {
        return Ok(None);
    }
    let iso = GroupoidIso {
        object_map: state
            .omap
            .iter()
            .map(|o| o.expect("complete object map"))
            .collect(),
        arrow_map: state
            .amap
            .iter()
            .map(|a| a.expect("complete arrow map"))
            .collect(),
    };
    iso.verify(g1, c1, g2, c2)?;
    Ok(Some(iso))
}

/// The identity automorphism, handy as a verified φ for scrambling.
pub fn identity_iso(g: &FiniteGroupoid) -> GroupoidIso {
    GroupoidIso {
        object_map: (0..g.n_objects).collect(),
        arrow_map: (0..g.n_arrows()).collect(),
    }
}

/// Ungraded isomorphism search: both sides get the trivial grading.
pub fn iso_search_ungraded(
    g1: &FiniteGroupoid,
    g2: &FiniteGroupoid,
    node_cap: u64,
) -> Result<Option<GroupoidIso>> {
    graded_iso_search(
        g1,
        &Cocycle::trivial(g1),
        g2,
        &Cocycle::trivial(g2),
        node_cap,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GradingGroup};
    use crate::groupoid::Arrow;

    fn degree_cocycle(g: &FiniteGroupoid) -> Cocycle {
        let grades = g
            .arrows
            .iter()
            .map(|&Arrow { dom, cod }| GradeElem::Int(cod as i64 - dom as i64))
            .collect();
        Cocycle {
            group: GradingGroup::Integers,
            grades,
        }
    }

    #[test]
    fn identity_iso_found() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let c = Cocycle::trivial(&g);
        let iso = graded_iso_search(&g, &c, &g, &c, DEFAULT_ISO_NODE_CAP)
            .unwrap()
            .unwrap();
        iso.verify(&g, &c, &g, &c).unwrap();
    }

    #[test]
    fn arrow_count_mismatch_is_absent() {
        let pair = FiniteGroupoid::pair_groupoid(2).unwrap();
        let units = FiniteGroupoid::group_bundle(&[FiniteGroup::trivial(), FiniteGroup::trivial()])
            .unwrap();
        assert!(iso_search_ungraded(&pair, &units, DEFAULT_ISO_NODE_CAP)
            .unwrap()
            .is_none());
    }

    #[test]
    fn grading_distinguishes_otherwise_isomorphic() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroupoid::group_as_groupoid(&c2).unwrap();
        let trivial = Cocycle::trivial(&g);
        let graded = Cocycle {
            group: GradingGroup::Finite(FiniteGroup::cyclic(2).unwrap()),
            grades: vec![GradeElem::Fin(0), GradeElem::Fin(1)],
        };
        graded.validate(&g).unwrap();
        // different grading groups: absent as graded
        assert!(
            graded_iso_search(&g, &graded, &g, &trivial, DEFAULT_ISO_NODE_CAP)
                .unwrap()
                .is_none()
        );
        // same groupoid ungraded: found
        assert!(iso_search_ungraded(&g, &g, DEFAULT_ISO_NODE_CAP)
            .unwrap()
            .is_some());
        // same grading group, different grade multiset: absent
        let all_identity = Cocycle {
            group: GradingGroup::Finite(FiniteGroup::cyclic(2).unwrap()),
            grades: vec![GradeElem::Fin(0), GradeElem::Fin(0)],
        };
        assert!(
            graded_iso_search(&g, &graded, &g, &all_identity, DEFAULT_ISO_NODE_CAP)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn graded_pair_vs_relabelled_copy() {
        let g1 = FiniteGroupoid::pair_groupoid(2).unwrap();
        let c1 = degree_cocycle(&g1);
        // same groupoid with objects swapped: still isomorphic, grades negate
        let g2 = g1.clone();
        let grades2 = g2
            .arrows
            .iter()
            .map(|&Arrow { dom, cod }| GradeElem::Int(dom as i64 - cod as i64))
            .collect();
        let c2 = Cocycle {
            group: GradingGroup::Integers,
            grades: grades2,
        };
        let iso = graded_iso_search(&g1, &c1, &g2, &c2, DEFAULT_ISO_NODE_CAP)
            .unwrap()
            .unwrap();
        iso.verify(&g1, &c1, &g2, &c2).unwrap();
    }

    #[test]
    fn tiny_node_cap_is_inconclusive_not_absent() {
        let g = FiniteGroupoid::pair_groupoid(3).unwrap();
        let c = Cocycle::trivial(&g);
        match graded_iso_search(&g, &c, &g, &c, 1) {
            Err(crate::error::Error::Inconclusive(_)) => {}
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn symmetric_on_small_corpus() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let corpus = vec![
            FiniteGroupoid::pair_groupoid(2).unwrap(),
            FiniteGroupoid::pair_groupoid(3).unwrap(),
            FiniteGroupoid::group_as_groupoid(&c2).unwrap(),
            FiniteGroupoid::group_as_groupoid(&c3).unwrap(),
            FiniteGroupoid::group_bundle(&[c2.clone(), FiniteGroup::trivial()]).unwrap(),
            FiniteGroupoid::group_bundle(&[c2.clone(), c2.clone()]).unwrap(),
        ];
        for a in &corpus {
            for b in &corpus {
                let ab = iso_search_ungraded(a, b, DEFAULT_ISO_NODE_CAP)
                    .unwrap()
                    .is_some();
                let ba = iso_search_ungraded(b, a, DEFAULT_ISO_NODE_CAP)
                    .unwrap()
                    .is_some();
                assert_eq!(ab, ba);
            }
        }
    }
}
