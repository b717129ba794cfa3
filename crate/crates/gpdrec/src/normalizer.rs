//! The graded normalizer N of the diagonal subalgebra: elements m with a
//! partner m' such that mm'm = m, m'mm' = m', and mDm' ∪ m'Dm ⊆ D, one grade
//! fiber at a time.
//!
//! Two engines are provided.  The brute engine enumerates candidate m over a
//! grade fiber and solves for the partner m' as a linear system per
//! idempotent target — for a valid pair, m'm is forced to be the
//! characteristic function of the domain support, which is what makes the
//! solve-per-target pruning complete.  The generated engine writes down
//! {f·χ_U : U a homogeneous bisection, f unit-valued on r(U)} directly from
//! the groupoid; the two agree exactly when the local bisection hypothesis
//! holds, and the suite checks that equality.

use crate::algebra::{char_fn, support, ArrowStructure, Coeffs, Presentation};
use crate::error::{Error, Result};
use crate::group::GradeElem;
use crate::groupoid::{bisections, Cocycle, FiniteGroupoid};
use crate::invsemi::{congruence_from_kernel, quotient, InvSemigroup, SemigroupGrading};
use crate::linalg;
use crate::ring::Ring;
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub const DEFAULT_FIBER_CAP: u128 = 10_000;

#[derive(Debug, Clone, Copy)]
pub struct NormalizerCaps {
    /// Max |R|^(fiber dim) enumerated per grade fiber.
    pub fiber_cap: u128,
    /// Max number of idempotent targets per element.
    pub idempotent_cap: u128,
}

impl Default for NormalizerCaps {
    fn default() -> Self {
        NormalizerCaps {
            fiber_cap: DEFAULT_FIBER_CAP,
            idempotent_cap: 4096,
        }
    }
}

/// The computed normalizer: elements in canonical order (zero first, then
/// fibers by grade, lexicographic coefficient order within a fiber), the
/// chosen partner of each element, and the inverse semigroup structure under
/// convolution.
#[derive(Debug, Clone)]
pub struct Normalizer {
    pub elements: Vec<Coeffs>,
    pub partner: Vec<Coeffs>,
    pub grades: Vec<Option<GradeElem>>,
    pub semigroup: InvSemigroup,
    pub grading: SemigroupGrading,
    /// Indices of K = N ∩ D.
    pub kernel: Vec<usize>,
    pub arrow_structure: ArrowStructure,
}

/// Check the defining conditions of a normalizer pair of homogeneous grade g.
pub fn is_normalizer_pair(
    p: &Presentation,
    m: &Coeffs,
    m_prime: &Coeffs,
    g: GradeElem,
) -> Result<bool> {
    let ginv = p.grading_group.inv(g)?;
    for (i, &c) in m.iter().enumerate() {
        if c != 0 && p.grades[i] != g {
            return Err(Error::invalid("m is not homogeneous of the stated grade"));
        }
    }
    for (i, &c) in m_prime.iter().enumerate() {
        if c != 0 && p.grades[i] != ginv {
            return Err(Error::invalid("m' is not homogeneous of the inverse grade"));
        }
    }
    let mm = p.mul(m, &p.mul(m_prime, m));
    if &mm != m {
        return Ok(false);
    }
    let pp = p.mul(m_prime, &p.mul(m, m_prime));
    if &pp != m_prime {
        return Ok(false);
    }
    for &u in &p.diagonal {
        let eu = p.basis_elem(u);
        if !p.is_diagonal_supported(&p.mul(&p.mul(m, &eu), m_prime)) {
            return Ok(false);
        }
        if !p.is_diagonal_supported(&p.mul(&p.mul(m_prime, &eu), m)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerate idempotent-valued diagonal vectors e with m·e = m, in
/// lexicographic order.  These are the only possible values of m'·m.
fn idempotent_targets(p: &Presentation, m: &Coeffs, cap: u128) -> Result<Vec<Coeffs>> {
    let idems = p.ring.idempotents();
    let k = p.diagonal.len() as u32;
    let total = (idems.len() as u128)
        .checked_pow(k)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::capacity("idempotent targets", u128::MAX, cap))?;
    let mut out = Vec::new();
    for code in 0..total {
        let mut e = vec![0u64; p.dim];
        let mut c = code;
        for &d in p.diagonal.iter().rev() {
            e[d] = idems[(c % idems.len() as u128) as usize];
            c /= idems.len() as u128;
        }
        if p.mul(m, &e) == *m {
            out.push(e);
        }
    }
    Ok(out)
}

/// Decode enumeration code -> fiber coefficients, basis index 0 most
/// significant so that code order is lexicographic order on vectors.
fn decode_fiber(code: u128, fiber: &[usize], dim: usize, rsize: u64) -> Coeffs {
    let mut v = vec![0u64; dim];
    let mut c = code;
    for &i in fiber.iter().rev() {
        v[i] = (c % rsize as u128) as u64;
        c /= rsize as u128;
    }
    v
}

/// Solve for the partner m' of m with m'·m = e and e·m' = m', subject to the
/// diagonal conditions; all constraints are linear in m' once e is fixed.
/// Returns the lexicographically least solution over the inverse-grade fiber.
fn solve_partner(
    p: &Presentation,
    m: &Coeffs,
    e: &Coeffs,
    fiber_inv: &[usize],
) -> Result<Option<Coeffs>> {
    let dim = p.dim;
    let diag_set: BTreeSet<usize> = p.diagonal.iter().copied().collect();
    // columns: coefficients of m' on fiber_inv
    // precompute per-column effect vectors
    let cols_mprime_m: Vec<Coeffs> = fiber_inv
        .iter()
        .map(|&j| p.mul(&p.basis_elem(j), m))
        .collect();
    let cols_e_mprime: Vec<Coeffs> = fiber_inv
        .iter()
        .map(|&j| {
            let mut v = p.mul(e, &p.basis_elem(j));
            v[j] = p.ring.sub(v[j], p.ring.one());
            v
        })
        .collect();
    let diag_right: Vec<Vec<Coeffs>> = p
        .diagonal
        .iter()
        .map(|&u| {
            let meu = p.mul(m, &p.basis_elem(u));
            fiber_inv
                .iter()
                .map(|&j| p.mul(&meu, &p.basis_elem(j)))
                .collect()
        })
        .collect();
    let diag_left: Vec<Vec<Coeffs>> = p
        .diagonal
        .iter()
        .map(|&u| {
            let eum = p.mul(&p.basis_elem(u), m);
            fiber_inv
                .iter()
                .map(|&j| p.mul(&p.basis_elem(j), &eum))
                .collect()
        })
        .collect();

    let mut solution_per_factor: Vec<Vec<u64>> = Vec::new();
    for factor in 0..p.ring.moduli().len() {
        let modulus = p.ring.moduli()[factor];
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs: Vec<u64> = Vec::new();
        // m'·m = e
        for k in 0..dim {
            rows.push(
                cols_mprime_m
                    .iter()
                    .map(|v| p.ring.component(v[k], factor))
                    .collect(),
            );
            rhs.push(p.ring.component(e[k], factor));
        }
        // e·m' - m' = 0
        for k in 0..dim {
            rows.push(
                cols_e_mprime
                    .iter()
                    .map(|v| p.ring.component(v[k], factor))
                    .collect(),
            );
            rhs.push(0);
        }
        // diagonal conditions: off-diagonal coordinates vanish
        for block in [&diag_right, &diag_left] {
            for cols in block.iter() {
                for k in 0..dim {
                    if diag_set.contains(&k) {
                        continue;
                    }
                    rows.push(
                        cols.iter()
                            .map(|v| p.ring.component(v[k], factor))
                            .collect(),
                    );
                    rhs.push(0);
                }
            }
        }
        match linalg::solve_lex_min(&rows, &rhs, modulus)? {
            None => return Ok(None),
            Some(x) => solution_per_factor.push(x),
        }
    }
    let mut mp = vec![0u64; dim];
    for (idx, &j) in fiber_inv.iter().enumerate() {
        let comps: Vec<u64> = solution_per_factor.iter().map(|s| s[idx]).collect();
        mp[j] = p.ring.from_components(&comps);
    }
    Ok(Some(mp))
}

/// Exhaustive graded normalizer of the diagonal, from the presentation alone.
pub fn compute_n_bruteforce(p: &Presentation, caps: &NormalizerCaps) -> Result<Normalizer> {
    p.validate()?;
    let st = p.arrow_structure()?;
    let dim = p.dim;
    let rsize = p.ring.size();

    let mut fibers: BTreeMap<GradeElem, Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        fibers.entry(p.grades[i]).or_default().push(i);
    }

    let mut elements: Vec<Coeffs> = vec![vec![0u64; dim]];
    let mut partner: Vec<Coeffs> = vec![vec![0u64; dim]];
    let mut grades: Vec<Option<GradeElem>> = vec![None];

    for (&g, fiber) in &fibers {
        let ginv = p.grading_group.inv(g)?;
        let fiber_inv: Vec<usize> = fibers.get(&ginv).cloned().unwrap_or_default();
        let total = (rsize as u128)
            .checked_pow(fiber.len() as u32)
            .filter(|&t| t <= caps.fiber_cap)
            .ok_or_else(|| {
                Error::capacity(
                    format!("normalizer fiber {}", p.grading_group.display(g)),
                    (rsize as u128).saturating_pow(fiber.len() as u32),
                    caps.fiber_cap,
                )
            })?;
        for code in 1..total {
            let m = decode_fiber(code, fiber, dim, rsize);
            if fiber_inv.is_empty() {
                continue;
            }
            let mut found = None;
            for e in idempotent_targets(p, &m, caps.idempotent_cap)? {
                if let Some(mp) = solve_partner(p, &m, &e, &fiber_inv)? {
                    found = Some(mp);
                    break;
                }
            }
            if let Some(mp) = found {
                debug_assert!(is_normalizer_pair(p, &m, &mp, g)?);
                elements.push(m);
                partner.push(mp);
                grades.push(Some(g));
            }
        }
    }
    assemble(p, st, elements, partner, grades)
}

/// The generated engine: {f·χ_U : U ∈ Γc^h(𝒢) nonempty, f unit-valued on
/// r(U)} ∪ {0}, read off the groupoid.  Requires an indecomposable ring.
pub fn compute_n_generated(gpd: &FiniteGroupoid, c: &Cocycle, ring: &Ring) -> Result<Normalizer> {
    if !ring.is_indecomposable() {
        return Err(Error::invalid(
            "generated normalizer engine needs an indecomposable ring",
        ));
    }
    let p = crate::algebra::export_presentation(gpd, c, ring)?;
    let st = p.arrow_structure()?;
    let (bis, _, _) = bisections(gpd, Some(c))?;
    let units: Vec<u64> = ring.units().iter().map(|&(u, _)| u).collect();
    let dim = p.dim;

    let mut elems: BTreeSet<Coeffs> = BTreeSet::new();
    elems.insert(vec![0u64; dim]);
    for u_set in bis.iter().filter(|b| !b.is_empty()) {
        let k = u_set.len();
        let total = (units.len() as u128).pow(k as u32);
        for code in 0..total {
            let mut m = vec![0u64; dim];
            let mut cc = code;
            for &a in u_set {
                m[a] = units[(cc % units.len() as u128) as usize];
                cc /= units.len() as u128;
            }
            elems.insert(m);
        }
    }
    // partner of f·χ_U: f⁻¹ transported along U⁻¹
    let mut elements: Vec<Coeffs> = Vec::new();
    let mut partner: Vec<Coeffs> = Vec::new();
    let mut grades: Vec<Option<GradeElem>> = Vec::new();
    // canonical order: zero, then grade, then lexicographic
    let mut sorted: Vec<Coeffs> = elems.into_iter().collect();
    sorted.sort_by_key(|m| {
        let grade = support(m).first().map(|&i| p.grades[i]);
        (grade.is_some(), grade, m.clone())
    });
    for m in sorted {
        let supp = support(&m);
        if supp.is_empty() {
            elements.push(m.clone());
            partner.push(m);
            grades.push(None);
            continue;
        }
        let mut mp = vec![0u64; dim];
        for &a in &supp {
            let ai = gpd.inv[a];
            mp[ai] = ring
                .inverse(m[a])
                .expect("generated elements have unit values");
        }
        debug_assert!(is_normalizer_pair(&p, &m, &mp, p.grades[supp[0]])?);
        elements.push(m);
        partner.push(mp);
        grades.push(Some(p.grades[supp[0]]));
    }
    assemble(&p, st, elements, partner, grades)
}

fn assemble(
    p: &Presentation,
    st: ArrowStructure,
    elements: Vec<Coeffs>,
    partner: Vec<Coeffs>,
    grades: Vec<Option<GradeElem>>,
) -> Result<Normalizer> {
    let index: HashMap<Coeffs, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = p.mul(&elements[i], &elements[j]);
            let Some(&k) = index.get(&prod) else {
                return Err(Error::PropertyFailed(format!(
                    "normalizer is not closed under convolution at ({i},{j})"
                )));
            };
            table[i][j] = k;
        }
    }
    let labels: Vec<String> = elements.iter().map(|m| display_coeffs(p, m)).collect();
    let semigroup = InvSemigroup::from_table(table, Some(0), Some(labels))?;
    // the stored partner must be the semigroup inverse
    for i in 0..n {
        let &j = index
            .get(&partner[i])
            .ok_or_else(|| Error::PropertyFailed("stored partner escaped the normalizer".into()))?;
        if semigroup.star[i] != j {
            return Err(Error::PropertyFailed(format!(
                "stored partner of element {i} is not its semigroup inverse"
            )));
        }
    }
    let kernel: Vec<usize> = (0..n)
        .filter(|&i| p.is_diagonal_supported(&elements[i]))
        .collect();
    let grading = SemigroupGrading {
        group: p.grading_group.clone(),
        grades: grades.clone(),
    };
    Ok(Normalizer {
        elements,
        partner,
        grades,
        semigroup,
        grading,
        kernel,
        arrow_structure: st,
    })
}

pub fn display_coeffs(p: &Presentation, m: &Coeffs) -> String {
    let terms: Vec<String> = support(m)
        .iter()
        .map(|&i| {
            if m[i] == p.ring.one() {
                p.labels[i].clone()
            } else {
                format!("{}·{}", p.ring.display(m[i]), p.labels[i])
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Per-statement results of the normalizer structure suite, each verified
/// exhaustively over N.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub partners_give_diagonal_idempotents: bool,
    pub idempotents_are_diagonal_chars: bool,
    pub partner_products_are_support_chars: bool,
    pub support_fibers_match: bool,
    pub supports_land_in_isotropy: bool,
    pub kernel_closed_under_partner: bool,
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.partners_give_diagonal_idempotents
            && self.idempotents_are_diagonal_chars
            && self.partner_products_are_support_chars
            && self.support_fibers_match
            && self.supports_land_in_isotropy
            && self.kernel_closed_under_partner
    }
}

pub fn structure_checks(p: &Presentation, nz: &Normalizer) -> Result<StructureReport> {
    if !p.ring.is_indecomposable() {
        return Err(Error::invalid(
            "structure checks need an indecomposable ring",
        ));
    }
    let st = &nz.arrow_structure;
    let mut failures = Vec::new();

    let mut are_idem = true;
    for (i, m) in nz.elements.iter().enumerate() {
        for prod in [p.mul(&nz.partner[i], m), p.mul(m, &nz.partner[i])] {
            if p.mul(&prod, &prod) != prod || !p.is_diagonal_supported(&prod) {
                are_idem = false;
                failures.push(format!("m'm or mm' not a diagonal idempotent at {i}"));
            }
        }
    }

    // E(N) = {χ_U : U ⊆ diagonal}
    let mut idems_are_chars = true;
    for (i, m) in nz.elements.iter().enumerate() {
        if nz.semigroup.is_idempotent(i) {
            let ok = p.is_diagonal_supported(m) && m.iter().all(|&c| c == 0 || c == p.ring.one());
            if !ok {
                idems_are_chars = false;
                failures.push(format!(
                    "idempotent {i} is not a diagonal characteristic vector"
                ));
            }
        }
    }
    let diag_subsets = 1u128 << p.diagonal.len();
    for mask in 0..diag_subsets {
        let set: Vec<usize> = p
            .diagonal
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &d)| d)
            .collect();
        let chi = char_fn(p.dim, &set, &p.ring);
        if !nz.elements.contains(&chi) {
            idems_are_chars = false;
            failures.push(format!(
                "diagonal characteristic vector {mask:#b} missing from N"
            ));
        }
    }

    // m'm = χ_{d(supp m)}, mm' = χ_{r(supp m)}
    let mut support_chars = true;
    for (i, m) in nz.elements.iter().enumerate() {
        let supp = support(m);
        let dset: BTreeSet<usize> = supp.iter().map(|&a| st.dom[a]).collect();
        let rset: BTreeSet<usize> = supp.iter().map(|&a| st.cod[a]).collect();
        let dchr = char_fn(p.dim, &dset.iter().copied().collect::<Vec<_>>(), &p.ring);
        let rchr = char_fn(p.dim, &rset.iter().copied().collect::<Vec<_>>(), &p.ring);
        if p.mul(&nz.partner[i], m) != dchr || p.mul(m, &nz.partner[i]) != rchr {
            support_chars = false;
            failures.push(format!(
                "partner products of {i} are not the support characteristics"
            ));
        }
    }

    // d-fibers and r-fibers of supports coincide
    let mut fibers_match = true;
    for m in &nz.elements {
        let supp = support(m);
        for &a in &supp {
            for &b in &supp {
                if (st.dom[a] == st.dom[b]) != (st.cod[a] == st.cod[b]) {
                    fibers_match = false;
                    failures.push("support d/r fiber equivalence failed".into());
                }
            }
        }
    }

    // supp(m)⁻¹supp(m) ∪ supp(m)supp(m)⁻¹ ⊆ 𝓗: whenever two support arrows
    // share a range they share a domain (and conversely), the composite is
    // isotropy in the identity component
    let supports_iso = fibers_match;

    let mut kernel_closed = true;
    for &i in &nz.kernel {
        if !p.is_diagonal_supported(&nz.partner[i]) {
            kernel_closed = false;
            failures.push(format!("kernel element {i} has a non-kernel partner"));
        }
    }
    if !nz.semigroup.is_full_inverse_subsemigroup(&nz.kernel)
        || !nz.semigroup.is_order_ideal(&nz.kernel)
    {
        kernel_closed = false;
        failures.push("kernel is not a full order-ideal subsemigroup".into());
    }

    Ok(StructureReport {
        partners_give_diagonal_idempotents: are_idem,
        idempotents_are_diagonal_chars: idems_are_chars,
        partner_products_are_support_chars: support_chars,
        support_fibers_match: fibers_match,
        supports_land_in_isotropy: supports_iso,
        kernel_closed_under_partner: kernel_closed,
        failures,
    })
}

/// Local bisection hypothesis verdict with the first failing element in
/// canonical order as witness.
#[derive(Debug, Clone)]
pub enum LbhVerdict {
    Holds,
    Fails {
        index: usize,
        m: Coeffs,
        m_prime: Coeffs,
        grade: GradeElem,
    },
}

impl LbhVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LbhVerdict::Holds)
    }
}

pub fn lbh_check(p: &Presentation, nz: &Normalizer) -> LbhVerdict {
    for (i, m) in nz.elements.iter().enumerate() {
        if !p.support_is_bisection(&nz.arrow_structure, m) {
            return LbhVerdict::Fails {
                index: i,
                m: m.clone(),
                m_prime: nz.partner[i].clone(),
                grade: nz.grades[i].expect("zero support is a bisection"),
            };
        }
    }
    LbhVerdict::Holds
}

/// Isotropy route to the same verdict: every object is isolated at finite
/// scale, so the hypothesis holds iff every isotropy group ring of the
/// grade-identity component has only trivial units.
#[derive(Debug, Clone)]
pub struct IsotropyLbh {
    pub holds: bool,
    /// Failing objects with a nontrivial unit witness from the census.
    pub failures: Vec<(usize, String)>,
}

pub fn lbh_via_isotropy(
    gpd: &FiniteGroupoid,
    c: &Cocycle,
    ring: &Ring,
    census_cap: u128,
) -> Result<IsotropyLbh> {
    if !ring.is_indecomposable() {
        return Err(Error::invalid(
            "isotropy LBH route needs an indecomposable ring",
        ));
    }
    let (g1, _) = gpd.grade_identity_subgroupoid(c)?;
    let mut failures = Vec::new();
    for x in 0..g1.n_objects {
        let (iso, _) = g1.isotropy_group(x)?;
        let census = crate::group::unit_census(ring, &iso, census_cap)?;
        if census.nontrivial_count > 0 {
            let (w, _) = &census.nontrivial_witnesses[0];
            failures.push((x, w.display(ring, &iso)));
        }
    }
    Ok(IsotropyLbh {
        holds: failures.is_empty(),
        failures,
    })
}

/// The Remark witness: for a nonzero nilpotent n and a bisection U inside the
/// isotropy bundle of the identity component, off the units,
/// m = χ_{d(U)} - n·χ_U normalizes the diagonal but its support
/// {d(U)} ∪ U is not a local bisection.
pub fn nilpotent_nonbisection_witness(
    gpd: &FiniteGroupoid,
    c: &Cocycle,
    ring: &Ring,
    u_set: &[usize],
    n: u64,
) -> Result<(Coeffs, Coeffs, bool)> {
    if n == 0 || !ring.nilpotents().contains(&n) {
        return Err(Error::invalid("witness needs a nonzero nilpotent"));
    }
    if u_set.is_empty() || !gpd.is_local_bisection(u_set) {
        return Err(Error::invalid("U must be a nonempty local bisection"));
    }
    let id = c.group.identity();
    for &a in u_set {
        if gpd.arrows[a].dom != gpd.arrows[a].cod {
            return Err(Error::invalid("U must lie in the isotropy bundle"));
        }
        if c.grades[a] != id {
            return Err(Error::invalid("U must lie in the grade-identity component"));
        }
        if gpd.is_unit_arrow(a) {
            return Err(Error::invalid("U must avoid the unit space"));
        }
    }
    let p = crate::algebra::export_presentation(gpd, c, ring)?;
    let dunits: Vec<usize> = gpd.dom_set(u_set).iter().map(|&x| gpd.unit[x]).collect();
    let chi_d = char_fn(p.dim, &dunits, ring);
    let mut m = chi_d.clone();
    for &a in u_set {
        m[a] = ring.sub(m[a], n);
    }
    let k = ring.nilpotency_degree(n).expect("n is nilpotent");
    let mut m_prime = chi_d.clone();
    let mut power_set: Vec<usize> = u_set.to_vec();
    let mut coeff = n;
    for _ in 1..k {
        for &a in &power_set {
            m_prime[a] = ring.add(m_prime[a], coeff);
        }
        power_set = gpd.set_product(&power_set, u_set);
        coeff = ring.mul(coeff, n);
    }
    if !is_normalizer_pair(&p, &m, &m_prime, id)? {
        return Err(Error::PropertyFailed(
            "remark witness failed the pair axioms".into(),
        ));
    }
    let st = p.arrow_structure()?;
    let is_bisection = p.support_is_bisection(&st, &m);
    Ok((m, m_prime, is_bisection))
}

/// Quotient of N by the idempotent-separating congruence with kernel
/// K = N ∩ D, with the grading carried down.
#[derive(Debug, Clone)]
pub struct NormalizerQuotient {
    pub semigroup: InvSemigroup,
    pub grading: SemigroupGrading,
    pub projection: Vec<usize>,
    pub kernel_size: usize,
}

pub fn quotient_n(nz: &Normalizer) -> Result<NormalizerQuotient> {
    let cong = congruence_from_kernel(&nz.semigroup, &nz.kernel)?;
    let (q, projection, grading) = quotient(&nz.semigroup, &cong, Some(&nz.grading))?;
    let grading = grading
        .ok_or_else(|| Error::PropertyFailed("congruence does not respect the grading".into()))?;
    Ok(NormalizerQuotient {
        semigroup: q,
        grading,
        projection,
        kernel_size: nz.kernel.len(),
    })
}

/// ψ: Γc^h(𝒢) → N/∼, U ↦ [χ_U].  Injectivity always holds; surjectivity is
/// exactly the local bisection hypothesis.
#[derive(Debug, Clone)]
pub struct PsiReport {
    pub injective: bool,
    pub surjective: bool,
    pub bisection_count: usize,
    pub class_count: usize,
}

pub fn psi_check(
    gpd: &FiniteGroupoid,
    c: &Cocycle,
    ring: &Ring,
    caps: &NormalizerCaps,
) -> Result<PsiReport> {
    let p = crate::algebra::export_presentation(gpd, c, ring)?;
    let nz = compute_n_bruteforce(&p, caps)?;
    let q = quotient_n(&nz)?;
    let (bis, _, _) = bisections(gpd, Some(c))?;
    let elem_index: HashMap<Coeffs, usize> = nz
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let mut image = BTreeSet::new();
    for u_set in &bis {
        let chi = char_fn(p.dim, u_set, ring);
        let &i = elem_index
            .get(&chi)
            .ok_or_else(|| Error::PropertyFailed("bisection characteristic not in N".into()))?;
        image.insert(q.projection[i]);
    }
    let injective = image.len() == bis.len();
    let surjective = image.len() == q.semigroup.size;
    Ok(PsiReport {
        injective,
        surjective,
        bisection_count: bis.len(),
        class_count: q.semigroup.size,
    })
}

pub fn normalizer_from_groupoid(
    gpd: &FiniteGroupoid,
    c: &Cocycle,
    ring: &Ring,
    caps: &NormalizerCaps,
) -> Result<Normalizer> {
    let p = crate::algebra::export_presentation(gpd, c, ring)?;
    compute_n_bruteforce(&p, caps)
}

/// Set equality of the two engines' element lists.
pub fn engines_agree(brute: &Normalizer, generated: &Normalizer) -> bool {
    let a: BTreeSet<&Coeffs> = brute.elements.iter().collect();
    let b: BTreeSet<&Coeffs> = generated.elements.iter().collect();
    a == b
}
