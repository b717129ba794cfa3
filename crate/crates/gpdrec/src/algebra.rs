//! The groupoid convolution algebra R𝒢: functions on arrows under
//! convolution, the diagonal subalgebra of functions on units, centralizers,
//! graded components, structure-constant presentation export, and the
//! diagonal-preserving scrambler that hides the groupoid behind an opaque
//! basis.

use crate::error::{Error, Result};
use crate::group::{GradeElem, GradingGroup};
use crate::groupoid::{Cocycle, FiniteGroupoid};
use crate::iso::GroupoidIso;
use crate::linalg;
use crate::ring::Ring;
use rand_core::RngCore;
use std::collections::BTreeSet;

pub const BRUTE_CENTRALIZER_CAP: u128 = 1_000_000;

/// Coefficient vector of an algebra element, dense over the basis.
pub type Coeffs = Vec<u64>;

pub fn support(x: &Coeffs) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, _)| i)
        .collect()
}

pub fn char_fn(dim: usize, set: &[usize], ring: &Ring) -> Coeffs {
    let mut v = vec![0u64; dim];
    for &i in set {
        v[i] = ring.one();
    }
    v
}

/// Convolution on a groupoid: f∗g(γ) = Σ_{d(α)=d(γ)} f(γα⁻¹) g(α), evaluated
/// through the composition table.
pub fn convolve(gpd: &FiniteGroupoid, ring: &Ring, f: &Coeffs, g: &Coeffs) -> Coeffs {
    let n = gpd.n_arrows();
    let mut out = vec![0u64; n];
    for (a, &ca) in f.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (b, &cb) in g.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            if let Some(c) = gpd.compose(a, b) {
                out[c] = ring.add(out[c], ring.mul(ca, cb));
            }
        }
    }
    out
}

/// Description of the diagonal subalgebra D(𝒢): the span of the unit-arrow
/// characteristic functions, with pointwise product.
#[derive(Debug, Clone)]
pub struct DiagonalInfo {
    pub basis_indices: Vec<usize>,
    pub size: u128,
}

pub fn diagonal(gpd: &FiniteGroupoid, ring: &Ring) -> DiagonalInfo {
    let basis_indices: Vec<usize> = gpd.unit.clone();
    let size = (ring.size() as u128).pow(basis_indices.len() as u32);
    DiagonalInfo {
        basis_indices,
        size,
    }
}

/// A finite-rank associative algebra presented by structure constants over a
/// finite ring, with a distinguished diagonal and a grading of the basis.
/// This is the reconstruction pipeline's only input.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub ring: Ring,
    pub dim: usize,
    pub labels: Vec<String>,
    /// sc[i][j] = sparse coefficient vector of e_i ∗ e_j.
    pub sc: Vec<Vec<Vec<(usize, u64)>>>,
    pub diagonal: Vec<usize>,
    pub grading_group: GradingGroup,
    pub grades: Vec<GradeElem>,
}

impl Presentation {
    pub fn mul(&self, x: &Coeffs, y: &Coeffs) -> Coeffs {
        let mut out = vec![0u64; self.dim];
        for (i, &ci) in x.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &cj) in y.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                let c = self.ring.mul(ci, cj);
                for &(k, s) in &self.sc[i][j] {
                    out[k] = self.ring.add(out[k], self.ring.mul(c, s));
                }
            }
        }
        out
    }

    pub fn basis_elem(&self, i: usize) -> Coeffs {
        let mut v = vec![0u64; self.dim];
        v[i] = self.ring.one();
        v
    }

    pub fn is_diagonal_supported(&self, x: &Coeffs) -> bool {
        let diag: BTreeSet<usize> = self.diagonal.iter().copied().collect();
        support(x).iter().all(|i| diag.contains(i))
    }

    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.dim
            || self.sc.len() != self.dim
            || self.sc.iter().any(|r| r.len() != self.dim)
            || self.grades.len() != self.dim
        {
            return Err(Error::invalid("presentation component length mismatch"));
        }
        for row in &self.sc {
            for cell in row {
                for &(k, c) in cell {
                    if k >= self.dim || c >= self.ring.size() {
                        return Err(Error::invalid("structure constant out of range"));
                    }
                }
            }
        }
        let mut seen = vec![false; self.dim];
        for &d in &self.diagonal {
            if d >= self.dim || seen[d] {
                return Err(Error::invalid("diagonal index list invalid"));
            }
            seen[d] = true;
        }
        for g in &self.grades {
            if !self.grading_group.contains(*g) {
                return Err(Error::invalid("basis grade outside the grading group"));
            }
        }
        // associativity over basis triples
        for i in 0..self.dim {
            let ei = self.basis_elem(i);
            for j in 0..self.dim {
                let ej = self.basis_elem(j);
                let eij = self.mul(&ei, &ej);
                for k in 0..self.dim {
                    let ek = self.basis_elem(k);
                    let left = self.mul(&eij, &ek);
                    let right = self.mul(&ei, &self.mul(&ej, &ek));
                    if left != right {
                        return Err(Error::invalid(format!(
                            "presentation not associative at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // the diagonal span is closed under product and commutative
        let diag: BTreeSet<usize> = self.diagonal.iter().copied().collect();
        for &i in &self.diagonal {
            for &j in &self.diagonal {
                let prod = self.mul(&self.basis_elem(i), &self.basis_elem(j));
                if !support(&prod).iter().all(|k| diag.contains(k)) {
                    return Err(Error::invalid("diagonal span not closed under product"));
                }
                let back = self.mul(&self.basis_elem(j), &self.basis_elem(i));
                if prod != back {
                    return Err(Error::invalid("diagonal span not commutative"));
                }
            }
        }
        // products of homogeneous basis elements are homogeneous
        for i in 0..self.dim {
            for j in 0..self.dim {
                let g = self.grading_group.mul(self.grades[i], self.grades[j])?;
                for &(k, _) in &self.sc[i][j] {
                    if self.grades[k] != g {
                        return Err(Error::invalid(format!(
                            "product of basis ({i},{j}) not homogeneous"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Recover domain/range data from the structure constants: for each basis
    /// index i there must be exactly one diagonal index u with e_i·e_u = e_i
    /// (its domain) and one with e_u·e_i = e_i (its range), everything else
    /// vanishing.  Presentations exported from groupoid algebras always have
    /// this shape.
    pub fn arrow_structure(&self) -> Result<ArrowStructure> {
        let mut dom = vec![usize::MAX; self.dim];
        let mut cod = vec![usize::MAX; self.dim];
        for i in 0..self.dim {
            let ei = self.basis_elem(i);
            for &u in &self.diagonal {
                let eu = self.basis_elem(u);
                let right = self.mul(&ei, &eu);
                if right == ei {
                    if dom[i] != usize::MAX {
                        return Err(Error::invalid(format!(
                            "basis {i} has two right units; presentation is not arrow-like"
                        )));
                    }
                    dom[i] = u;
                } else if right.iter().any(|&c| c != 0) {
                    return Err(Error::invalid(format!(
                        "basis {i} times diagonal {u} is neither 0 nor itself"
                    )));
                }
                let left = self.mul(&eu, &ei);
                if left == ei {
                    if cod[i] != usize::MAX {
                        return Err(Error::invalid(format!(
                            "basis {i} has two left units; presentation is not arrow-like"
                        )));
                    }
                    cod[i] = u;
                } else if left.iter().any(|&c| c != 0) {
                    return Err(Error::invalid(format!(
                        "diagonal {u} times basis {i} is neither 0 nor itself"
                    )));
                }
            }
            if dom[i] == usize::MAX || cod[i] == usize::MAX {
                return Err(Error::invalid(format!("basis {i} has no unit action")));
            }
        }
        Ok(ArrowStructure { dom, cod })
    }

    /// Supports whose domain (equivalently range) labels repeat are the
    /// non-bisection witnesses downstream.
    pub fn support_is_bisection(&self, st: &ArrowStructure, x: &Coeffs) -> bool {
        let supp = support(x);
        let mut doms = BTreeSet::new();
        let mut cods = BTreeSet::new();
        for &i in &supp {
            if !doms.insert(st.dom[i]) || !cods.insert(st.cod[i]) {
                return false;
            }
        }
        true
    }
}

/// Domain and range of each basis index, as diagonal basis indices.
#[derive(Debug, Clone)]
pub struct ArrowStructure {
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
}

/// Structure constants of R𝒢 on the arrow basis, with the arrows relabelled
/// opaquely.  The diagonal is the set of unit arrows and the grading comes
/// from the cocycle.
pub fn export_presentation(gpd: &FiniteGroupoid, c: &Cocycle, ring: &Ring) -> Result<Presentation> {
    c.validate(gpd)?;
    let dim = gpd.n_arrows();
    let mut sc = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if let Some(k) = gpd.compose(i, j) {
                sc[i][j] = vec![(k, ring.one())];
            }
        }
    }
    let mut diagonal = gpd.unit.clone();
    diagonal.sort_unstable();
    let p = Presentation {
        ring: ring.clone(),
        dim,
        labels: (0..dim).map(|i| format!("b{i}")).collect(),
        sc,
        diagonal,
        grading_group: c.group.clone(),
        grades: c.grades.clone(),
    };
    p.validate()?;
    Ok(p)
}

/// Centralizer of the diagonal, computed two ways and compared.
#[derive(Debug, Clone)]
pub struct CentralizerReport {
    /// Basis indices on which centralizing elements may be supported,
    /// according to the exact linear path.
    pub free_indices: Vec<usize>,
    /// Expected description: the isotropy-supported span.
    pub isotropy_indices: Vec<usize>,
    pub equals_isotropy_span: bool,
    /// Brute-force element count, when the brute path ran.
    pub brute_count: Option<u128>,
    pub brute_matches: Option<bool>,
}

fn centralizer_rows(p: &Presentation, factor: usize) -> Vec<Vec<u64>> {
    // rows of the homogeneous system "f commutes with every diagonal basis
    // element", per output coordinate, projected to one ring factor
    let mut rows = Vec::new();
    for &u in &p.diagonal {
        // coefficient of e_k in e_i*e_u - e_u*e_i, as a function of i
        for k in 0..p.dim {
            let mut row = vec![0u64; p.dim];
            let m = p.ring.moduli()[factor];
            for (i, r) in row.iter_mut().enumerate() {
                let mut v: i128 = 0;
                for &(kk, c) in &p.sc[i][u] {
                    if kk == k {
                        v += p.ring.component(c, factor) as i128;
                    }
                }
                for &(kk, c) in &p.sc[u][i] {
                    if kk == k {
                        v -= p.ring.component(c, factor) as i128;
                    }
                }
                *r = v.rem_euclid(m as i128) as u64;
            }
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Indices where some centralizing element is nonzero, found by the exact
/// linear path (per prime factor, consistency of the system with the
/// coordinate pinned to each nonzero value).
pub fn centralizer_free_indices(p: &Presentation) -> Vec<usize> {
    let mut free = Vec::new();
    for coord in 0..p.dim {
        let mut can_be_nonzero = false;
        'factors: for factor in 0..p.ring.moduli().len() {
            let m = p.ring.moduli()[factor];
            let rows = centralizer_rows(p, factor);
            for c in 1..m {
                let mut a = rows.clone();
                let mut pin = vec![0u64; p.dim];
                pin[coord] = 1;
                a.push(pin);
                let mut b = vec![0u64; a.len()];
                *b.last_mut().unwrap() = c;
                if linalg::solve_mod(&a, &b, m).is_some() {
                    can_be_nonzero = true;
                    break 'factors;
                }
            }
        }
        if can_be_nonzero {
            free.push(coord);
        }
    }
    free
}

/// Centralizer of D(𝒢) in R𝒢: must coincide with R𝓗 for 𝓗 the isotropy
/// interior.  The brute path enumerates all elements when the algebra is
/// small enough; the linear path always runs.
pub fn centralizer_of_diagonal(
    gpd: &FiniteGroupoid,
    ring: &Ring,
    brute_cap: u128,
) -> Result<CentralizerReport> {
    let c = Cocycle::trivial(gpd);
    let p = export_presentation(gpd, &c, ring)?;
    let free = centralizer_free_indices(&p);
    let isotropy = gpd.isotropy_interior();
    let equals = free == isotropy;

    let total = (ring.size() as u128).checked_pow(gpd.n_arrows() as u32);
    let (brute_count, brute_matches) = match total {
        Some(t) if t <= brute_cap => {
            let dim = gpd.n_arrows();
            let diag_chars: Vec<Coeffs> =
                gpd.unit.iter().map(|&u| char_fn(dim, &[u], ring)).collect();
            let mut count: u128 = 0;
            let mut all_supported = true;
            let iso_set: BTreeSet<usize> = isotropy.iter().copied().collect();
            for code in 0..t {
                let mut f = vec![0u64; dim];
                let mut cc = code;
                for x in f.iter_mut() {
                    *x = (cc % ring.size() as u128) as u64;
                    cc /= ring.size() as u128;
                }
                let commutes = diag_chars
                    .iter()
                    .all(|chi| convolve(gpd, ring, &f, chi) == convolve(gpd, ring, chi, &f));
                if commutes {
                    count += 1;
                    if !support(&f).iter().all(|i| iso_set.contains(i)) {
                        all_supported = false;
                    }
                }
            }
            let expected = (ring.size() as u128).pow(isotropy.len() as u32);
            (Some(count), Some(all_supported && count == expected))
        }
        _ => (None, None),
    };
    Ok(CentralizerReport {
        free_indices: free,
        isotropy_indices: isotropy,
        equals_isotropy_span: equals,
        brute_count,
        brute_matches,
    })
}

/// True iff the centralizer of the diagonal is the diagonal itself; this is
/// the algebraic detector of effectiveness.
pub fn is_diag_maximal_commutative(gpd: &FiniteGroupoid, ring: &Ring) -> Result<bool> {
    let rep = centralizer_of_diagonal(gpd, ring, BRUTE_CENTRALIZER_CAP)?;
    let mut diag = gpd.unit.clone();
    diag.sort_unstable();
    Ok(rep.free_indices == diag)
}

/// Presentation-level effectiveness detector, for scrambled inputs.
pub fn presentation_diag_maximal_commutative(p: &Presentation) -> bool {
    let mut diag = p.diagonal.clone();
    diag.sort_unstable();
    let mut free = centralizer_free_indices(p);
    free.sort_unstable();
    // diagonal elements always centralize; the detector is whether anything
    // else does
    free == diag
}

/// Restriction of an algebra element to the full subgroupoid over a closed
/// invariant object set.  Verified multiplicative on the instance.
pub fn restrict_to_invariant(
    gpd: &FiniteGroupoid,
    ring: &Ring,
    f: &Coeffs,
    objects: &[usize],
) -> Result<(FiniteGroupoid, Coeffs)> {
    let inx: BTreeSet<usize> = objects.iter().copied().collect();
    for a in &gpd.arrows {
        if inx.contains(&a.dom) != inx.contains(&a.cod) {
            return Err(Error::invalid("object set is not invariant"));
        }
    }
    let keep: Vec<usize> = (0..gpd.n_arrows())
        .filter(|&a| inx.contains(&gpd.arrows[a].dom) && inx.contains(&gpd.arrows[a].cod))
        .collect();
    let restricted = restrict_groupoid(gpd, objects, &keep)?;
    let rf: Coeffs = keep.iter().map(|&a| f[a]).collect();
    // multiplicativity of the restriction map on the basis
    for (i, &a) in keep.iter().enumerate() {
        for (j, &b) in keep.iter().enumerate() {
            let full = convolve(
                gpd,
                ring,
                &char_fn(gpd.n_arrows(), &[a], ring),
                &char_fn(gpd.n_arrows(), &[b], ring),
            );
            let full_restricted: Coeffs = keep.iter().map(|&x| full[x]).collect();
            let small = convolve(
                &restricted,
                ring,
                &char_fn(keep.len(), &[i], ring),
                &char_fn(keep.len(), &[j], ring),
            );
            if full_restricted != small {
                return Err(Error::PropertyFailed(
                    "restriction is not multiplicative".into(),
                ));
            }
        }
    }
    Ok((restricted, rf))
}

fn restrict_groupoid(
    gpd: &FiniteGroupoid,
    objects: &[usize],
    keep: &[usize],
) -> Result<FiniteGroupoid> {
    let obj_pos: std::collections::BTreeMap<usize, usize> =
        objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let arr_pos: std::collections::BTreeMap<usize, usize> =
        keep.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let arrows: Vec<crate::groupoid::Arrow> = keep
        .iter()
        .map(|&a| crate::groupoid::Arrow {
            dom: obj_pos[&gpd.arrows[a].dom],
            cod: obj_pos[&gpd.arrows[a].cod],
        })
        .collect();
    let m = arrows.len();
    let mut compose = vec![None; m * m];
    for (i, &a) in keep.iter().enumerate() {
        for (j, &b) in keep.iter().enumerate() {
            if let Some(c) = gpd.compose(a, b) {
                compose[i * m + j] = Some(arr_pos[&c]);
            }
        }
    }
    let inv = keep.iter().map(|&a| arr_pos[&gpd.inv[a]]).collect();
    let unit = objects.iter().map(|&x| arr_pos[&gpd.unit[x]]).collect();
    let labels = keep.iter().map(|&a| gpd.arrow_labels[a].clone()).collect();
    let obj_labels = objects
        .iter()
        .map(|&x| gpd.object_labels[x].clone())
        .collect();
    FiniteGroupoid::from_parts(
        objects.len(),
        Some(obj_labels),
        arrows,
        Some(labels),
        compose,
        inv,
        unit,
    )
}

/// A unit-valued cocycle on arrows: σ(αβ) = σ(α)σ(β) on composable pairs.
pub fn validate_sigma(gpd: &FiniteGroupoid, ring: &Ring, sigma: &[u64]) -> Result<()> {
    if sigma.len() != gpd.n_arrows() {
        return Err(Error::invalid("sigma length mismatch"));
    }
    for &s in sigma {
        if !ring.is_unit(s) {
            return Err(Error::invalid("sigma value is not a ring unit"));
        }
    }
    for a in 0..gpd.n_arrows() {
        for b in 0..gpd.n_arrows() {
            if let Some(c) = gpd.compose(a, b) {
                if sigma[c] != ring.mul(sigma[a], sigma[b]) {
                    return Err(Error::invalid(format!(
                        "sigma is not a cocycle at the composable pair ({}, {})",
                        gpd.arrow_labels[a], gpd.arrow_labels[b]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Sample a unit-valued cocycle: random units on a spanning forest of the
/// orbits, a unit character on each cyclic isotropy group, completed by the
/// cocycle law.
pub fn sample_sigma(gpd: &FiniteGroupoid, ring: &Ring, rng: &mut impl RngCore) -> Result<Vec<u64>> {
    let units: Vec<u64> = ring.units().iter().map(|&(u, _)| u).collect();
    let pick = |options: &[u64], rng: &mut dyn RngCore| -> u64 {
        options[(rng.next_u64() % options.len() as u64) as usize]
    };
    let mut sigma = vec![ring.one(); gpd.n_arrows()];
    for orbit in gpd.orbits() {
        let base = orbit[0];
        // tree arrows base -> y and a random unit scale per object
        let mut tree = vec![usize::MAX; gpd.n_objects];
        let mut scale = vec![ring.one(); gpd.n_objects];
        for &y in &orbit {
            tree[y] = (0..gpd.n_arrows())
                .find(|&a| gpd.arrows[a].dom == base && gpd.arrows[a].cod == y)
                .expect("orbit objects are connected by an arrow");
            scale[y] = pick(&units, rng);
        }
        // character of the base isotropy group, when cyclic; otherwise 1
        let (iso, iso_arrows) = gpd.isotropy_group(base)?;
        let mut character = vec![ring.one(); iso.size];
        if let Some(gen) = iso.is_cyclic() {
            let order = iso.element_order(gen) as u64;
            let roots: Vec<u64> = units
                .iter()
                .copied()
                .filter(|&u| ring.pow(u, order) == ring.one())
                .collect();
            let root = pick(&roots, rng);
            let mut acc = iso.identity;
            let mut val = ring.one();
            for _ in 0..iso.size {
                character[acc] = val;
                acc = iso.mul(acc, gen);
                val = ring.mul(val, root);
            }
        }
        let mut char_of_arrow = vec![ring.one(); gpd.n_arrows()];
        for (i, &a) in iso_arrows.iter().enumerate() {
            char_of_arrow[a] = character[i];
        }
        // sigma(γ: y -> z) = scale(z) · character(t_z⁻¹ γ t_y) · scale(y)⁻¹
        for a in 0..gpd.n_arrows() {
            let crate::groupoid::Arrow { dom: y, cod: z } = gpd.arrows[a];
            if tree[y] == usize::MAX || tree[z] == usize::MAX {
                continue;
            }
            let h = gpd
                .compose(gpd.inv[tree[z]], gpd.compose(a, tree[y]).unwrap())
                .expect("h lands in the base isotropy");
            sigma[a] = ring.mul(
                scale[z],
                ring.mul(char_of_arrow[h], ring.inverse(scale[y]).unwrap()),
            );
        }
    }
    validate_sigma(gpd, ring, &sigma)?;
    Ok(sigma)
}

/// Seeded permutation of 0..n.
pub fn sample_permutation(n: usize, rng: &mut impl RngCore) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Outcome of scrambling: the new presentation plus the witnessing
/// isomorphism data (old basis index -> (new index, unit factor)).
#[derive(Debug, Clone)]
pub struct Scrambled {
    pub presentation: Presentation,
    pub image_index: Vec<usize>,
    pub image_unit: Vec<u64>,
}

/// Scramble a groupoid-algebra presentation by a verified graded
/// automorphism φ, a unit-valued cocycle σ, and a seeded basis relabelling.
/// The new basis is the image of χ_γ ↦ σ(γ)·χ_{φ(γ)} in shuffled order; the
/// output is verified to be a diagonal-preserving graded algebra isomorphism
/// by re-deriving its structure constants.
pub fn scramble(
    gpd: &FiniteGroupoid,
    c: &Cocycle,
    ring: &Ring,
    phi: &GroupoidIso,
    sigma: &[u64],
    perm: &[usize],
) -> Result<Scrambled> {
    phi.verify(gpd, c, gpd, c)?;
    validate_sigma(gpd, ring, sigma)?;
    let p = export_presentation(gpd, c, ring)?;
    let dim = p.dim;
    if perm.len() != dim {
        return Err(Error::invalid("relabelling permutation length mismatch"));
    }
    // new basis position of the image of old basis γ: b_{perm[γ]} = σ(γ)·χ_{φ(γ)}
    let slot_of_old: Vec<usize> = perm.to_vec();
    // structure constants of the new basis: b_i b_j = σ_i σ_j χ_{φi} χ_{φj}
    //                                              = σ_i σ_j σ_{ij}⁻¹ b_{slot(ij)}
    let mut sc = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if let Some(k) = gpd.compose(phi.arrow_map[i], phi.arrow_map[j]) {
                // k = φ(i∘j) since φ is a functor
                let old_k = gpd.compose(i, j).expect("φ reflects composability");
                debug_assert_eq!(phi.arrow_map[old_k], k);
                let coeff = ring.mul(
                    ring.mul(sigma[i], sigma[j]),
                    ring.inverse(sigma[old_k]).unwrap(),
                );
                sc[slot_of_old[i]][slot_of_old[j]] = vec![(slot_of_old[old_k], coeff)];
            }
        }
    }
    let mut diagonal: Vec<usize> = gpd.unit.iter().map(|&u| slot_of_old[u]).collect();
    diagonal.sort_unstable();
    let mut grades = vec![GradeElem::Unit; dim];
    for old in 0..dim {
        grades[slot_of_old[old]] = c.grades[old];
    }
    let out = Presentation {
        ring: ring.clone(),
        dim,
        labels: (0..dim).map(|i| format!("c{i}")).collect(),
        sc,
        diagonal,
        grading_group: c.group.clone(),
        grades,
    };
    out.validate()?;
    // verify the scramble map is an algebra isomorphism: Φ(e_i) has
    // coefficient σ(i) on slot_of_old[φ(i)]... the map sends χ_γ to
    // σ(γ)·(new basis at slot_of_old[γ](!)), and multiplicativity must hold
    // against the re-derived constants.
    let image = |x: &Coeffs| -> Coeffs {
        let mut v = vec![0u64; dim];
        for (i, &ci) in x.iter().enumerate() {
            if ci != 0 {
                v[slot_of_old[i]] = ring.add(v[slot_of_old[i]], ring.mul(ci, sigma[i]));
            }
        }
        v
    };
    for i in 0..dim {
        let ei = p.basis_elem(i);
        for j in 0..dim {
            let ej = p.basis_elem(j);
            let lhs = image(&p.mul(&ei, &ej));
            let rhs = out.mul(&image(&ei), &image(&ej));
            if lhs != rhs {
                return Err(Error::PropertyFailed(format!(
                    "scramble map not multiplicative at ({i},{j})"
                )));
            }
        }
    }
    // diagonal-preserving and graded by construction; assert anyway
    let old_diag: BTreeSet<usize> = p.diagonal.iter().copied().collect();
    let new_diag: BTreeSet<usize> = out.diagonal.iter().copied().collect();
    let mapped: BTreeSet<usize> = old_diag.iter().map(|&u| slot_of_old[u]).collect();
    if mapped != new_diag {
        return Err(Error::PropertyFailed(
            "scramble does not preserve the diagonal".into(),
        ));
    }
    for old in 0..dim {
        if out.grades[slot_of_old[old]] != p.grades[old] {
            return Err(Error::PropertyFailed(
                "scramble does not preserve grades".into(),
            ));
        }
    }
    let image_unit = (0..dim).map(|i| sigma[i]).collect();
    Ok(Scrambled {
        presentation: out,
        image_index: slot_of_old,
        image_unit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::iso::iso_search_ungraded;
    use rand_chacha::ChaCha12Rng;
    use rand_core::SeedableRng;

    fn z(n: u64) -> Ring {
        Ring::modular(n).unwrap()
    }

    #[test]
    fn convolution_matches_group_ring_on_one_object() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroupoid::group_as_groupoid(&c2).unwrap();
        let z6 = z(6);
        // (3+4g)*(3+4g) = 1
        let f = vec![3u64, 4];
        let p = convolve(&g, &z6, &f, &f);
        assert_eq!(p, vec![1, 0]);
    }

    #[test]
    fn characteristic_functions_multiply_as_bisections() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let z2 = z(2);
        let (elements, _, _) = crate::groupoid::bisections(&g, None).unwrap();
        for u in &elements {
            for v in &elements {
                let cu = char_fn(g.n_arrows(), u, &z2);
                let cv = char_fn(g.n_arrows(), v, &z2);
                let uv = g.set_product(u, v);
                assert_eq!(convolve(&g, &z2, &cu, &cv), char_fn(g.n_arrows(), &uv, &z2));
            }
        }
    }

    #[test]
    fn unit_of_algebra_is_unit_space_char() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let z6 = z(6);
        let one = char_fn(g.n_arrows(), &g.unit, &z6);
        for code in 0..36u64 {
            let f = vec![code % 6, (code / 6) % 6, 3, 5];
            assert_eq!(convolve(&g, &z6, &f, &one), f);
            assert_eq!(convolve(&g, &z6, &one, &f), f);
        }
    }

    #[test]
    fn diagonal_descriptions() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let d = diagonal(&g, &z(2));
        assert_eq!(d.basis_indices.len(), 2);
        assert_eq!(d.size, 4);
        // group case: the diagonal is the scalar multiples of the identity
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let gg = FiniteGroupoid::group_as_groupoid(&c2).unwrap();
        let d = diagonal(&gg, &z(6));
        assert_eq!((d.basis_indices.len(), d.size), (1, 6));
        // unit groupoid: the whole algebra
        let u = FiniteGroupoid::group_bundle(&[
            FiniteGroup::trivial(),
            FiniteGroup::trivial(),
            FiniteGroup::trivial(),
        ])
        .unwrap();
        let d = diagonal(&u, &z(2));
        assert_eq!(d.basis_indices.len(), u.n_arrows());
    }

    #[test]
    fn centralizer_pair2_is_diagonal() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let rep = centralizer_of_diagonal(&g, &z(2), BRUTE_CENTRALIZER_CAP).unwrap();
        assert!(rep.equals_isotropy_span);
        assert_eq!(rep.brute_count, Some(4));
        assert_eq!(rep.brute_matches, Some(true));
        assert!(is_diag_maximal_commutative(&g, &z(2)).unwrap());
    }

    #[test]
    fn centralizer_c2_is_whole_algebra() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroupoid::group_as_groupoid(&c2).unwrap();
        let rep = centralizer_of_diagonal(&g, &z(4), BRUTE_CENTRALIZER_CAP).unwrap();
        assert!(rep.equals_isotropy_span);
        assert_eq!(rep.free_indices.len(), 2);
        assert!(!is_diag_maximal_commutative(&g, &z(4)).unwrap());
    }

    #[test]
    fn centralizer_bundle_rank3() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroupoid::group_bundle(&[c2, FiniteGroup::trivial()]).unwrap();
        let rep = centralizer_of_diagonal(&g, &z(2), BRUTE_CENTRALIZER_CAP).unwrap();
        assert!(rep.equals_isotropy_span);
        assert_eq!(rep.free_indices.len(), 3);
        assert_eq!(rep.brute_count, Some(8));
    }

    #[test]
    fn restriction_to_isotropy_block() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroupoid::group_bundle(&[c2, FiniteGroup::trivial()]).unwrap();
        let z4 = z(4);
        // a·id_x + b·g_x + c·id_y with the C2 fiber first
        let f = vec![1u64, 2, 3];
        let (restricted, rf) = restrict_to_invariant(&g, &z4, &f, &[0]).unwrap();
        assert_eq!(restricted.n_arrows(), 2);
        assert_eq!(rf, vec![1, 2]);
        assert!(restrict_to_invariant(&g, &z4, &f, &[])
            .unwrap()
            .1
            .is_empty());
    }

    #[test]
    fn export_shapes() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let p = export_presentation(&g, &Cocycle::trivial(&g), &z(2)).unwrap();
        assert_eq!((p.dim, p.diagonal.len()), (4, 2));
        let st = p.arrow_structure().unwrap();
        assert_eq!(st.dom.len(), 4);

        let c2 = FiniteGroup::cyclic(2).unwrap();
        let gg = FiniteGroupoid::group_as_groupoid(&c2).unwrap();
        let pp = export_presentation(&gg, &Cocycle::trivial(&gg), &z(4)).unwrap();
        assert_eq!((pp.dim, pp.diagonal.len()), (2, 1));
    }

    #[test]
    fn scramble_roundtrip_properties() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let c = Cocycle::trivial(&g);
        let z6 = z(6);
        // σ: identities ↦ 1, cross arrows ↦ 5 (5·5 = 1 matches (1→2)∘(2→1) = id)
        let sigma: Vec<u64> = (0..4)
            .map(|a| if g.is_unit_arrow(a) { 1 } else { 5 })
            .collect();
        validate_sigma(&g, &z6, &sigma).unwrap();
        let phi = iso_search_ungraded(&g, &g, 1 << 20).unwrap().unwrap();
        let perm = vec![2, 0, 3, 1];
        let s = scramble(&g, &c, &z6, &phi, &sigma, &perm).unwrap();
        s.presentation.validate().unwrap();
        assert_eq!(s.presentation.diagonal.len(), 2);

        // a non-cocycle sigma is rejected with the failing pair
        let bad = vec![1u64, 5, 1, 1];
        assert!(validate_sigma(&g, &z6, &bad).is_err());
    }

    #[test]
    fn sampled_sigma_is_always_a_cocycle() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroupoid::group_bundle(&[c2.clone(), FiniteGroup::trivial()]).unwrap();
        let u =
            FiniteGroupoid::disjoint_union(&g, &FiniteGroupoid::pair_groupoid(2).unwrap()).unwrap();
        for seed in 0..20 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            for ring in [z(2), z(4), z(6)] {
                let sigma = sample_sigma(&u, &ring, &mut rng).unwrap();
                validate_sigma(&u, &ring, &sigma).unwrap();
            }
        }
    }

    #[test]
    fn scrambled_identity_component_centralizer_is_isotropy_algebra() {
        // restricting a scrambled presentation to the grade-identity basis
        // and taking the centralizer of the diagonal there recovers exactly
        // the image of the isotropy bundle of 𝒢₁
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let bundle = FiniteGroupoid::group_bundle(&[c2, FiniteGroup::trivial()]).unwrap();
        let cases: Vec<(FiniteGroupoid, Ring)> = vec![
            (bundle, z(4)),
            (FiniteGroupoid::pair_groupoid(2).unwrap(), z(2)),
        ];
        for (g, ring) in cases {
            let c = Cocycle::trivial(&g);
            let mut rng = ChaCha12Rng::seed_from_u64(3);
            let sigma = sample_sigma(&g, &ring, &mut rng).unwrap();
            let perm = sample_permutation(g.n_arrows(), &mut rng);
            let phi = iso_search_ungraded(&g, &g, 1 << 20).unwrap().unwrap();
            let s = scramble(&g, &c, &ring, &phi, &sigma, &perm).unwrap();
            // trivial grading: the identity component is everything; an
            // automorphism preserves the isotropy arrow set, so the expected
            // indices are just the relabelled isotropy slots
            let free = centralizer_free_indices(&s.presentation);
            let mut expected: Vec<usize> = g
                .isotropy_interior()
                .iter()
                .map(|&a| s.image_index[a])
                .collect();
            expected.sort_unstable();
            assert_eq!(free, expected);
        }
    }

    #[test]
    fn scrambled_presentation_preserves_effectiveness_detector() {
        let z4 = z(4);
        let pair = FiniteGroupoid::pair_groupoid(2).unwrap();
        let c = Cocycle::trivial(&pair);
        let phi = iso_search_ungraded(&pair, &pair, 1 << 20).unwrap().unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let sigma = sample_sigma(&pair, &z4, &mut rng).unwrap();
        let perm = sample_permutation(4, &mut rng);
        let s = scramble(&pair, &c, &z4, &phi, &sigma, &perm).unwrap();
        assert!(presentation_diag_maximal_commutative(&s.presentation));

        let c2 = FiniteGroup::cyclic(2).unwrap();
        let gg = FiniteGroupoid::group_as_groupoid(&c2).unwrap();
        let cg = Cocycle::trivial(&gg);
        let phig = iso_search_ungraded(&gg, &gg, 1 << 20).unwrap().unwrap();
        let sigmag = sample_sigma(&gg, &z4, &mut rng).unwrap();
        let s2 = scramble(&gg, &cg, &z4, &phig, &sigmag, &[1, 0]).unwrap();
        assert!(!presentation_diag_maximal_commutative(&s2.presentation));
    }
}
