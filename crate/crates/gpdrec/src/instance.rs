//! Instance files, presentation files, semigroup/action files, and the
//! deterministic report type the CLI emits.
//!
//! Machine-format reports are canonical JSON of the `Report` struct and are
//! byte-identical across runs with the same inputs, seed and version; wall
//! clock timings go to stderr only.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GradeElem, GradingGroup};
use crate::groupoid::{Arrow, Cocycle, FiniteGroupoid};
use crate::invsemi::{InvSemigroup, SemigroupGrading};
use crate::leavitt::DirectedGraph;
use crate::ring::{Ring, RingSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic(usize),
    Table(Vec<Vec<usize>>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone(), None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingGroupSpec {
    Trivial,
    Integers,
    Cyclic(usize),
    Table(Vec<Vec<usize>>),
}

impl GradingGroupSpec {
    pub fn build(&self) -> Result<GradingGroup> {
        Ok(match self {
            GradingGroupSpec::Trivial => GradingGroup::Trivial,
            GradingGroupSpec::Integers => GradingGroup::Integers,
            GradingGroupSpec::Cyclic(n) => GradingGroup::Finite(FiniteGroup::cyclic(*n)?),
            GradingGroupSpec::Table(t) => {
                GradingGroup::Finite(FiniteGroup::from_table(t.clone(), None)?)
            }
        })
    }

    pub fn of(group: &GradingGroup) -> GradingGroupSpec {
        match group {
            GradingGroup::Trivial => GradingGroupSpec::Trivial,
            GradingGroup::Integers => GradingGroupSpec::Integers,
            GradingGroup::Finite(g) => GradingGroupSpec::Table(g.table.clone()),
        }
    }
}

/// Grade values in files are plain integers, read in the context of the
/// grading group: the value itself for the integers, an element index for a
/// finite group, ignored for the trivial group.
pub fn grade_from_file(group: &GradingGroup, v: i64) -> Result<GradeElem> {
    Ok(match group {
        GradingGroup::Trivial => GradeElem::Unit,
        GradingGroup::Integers => GradeElem::Int(v),
        GradingGroup::Finite(g) => {
            let idx = usize::try_from(v)
                .ok()
                .filter(|&i| i < g.size)
                .ok_or_else(|| {
                    Error::invalid(format!("grade index {v} outside the grading group"))
                })?;
            GradeElem::Fin(idx)
        }
    })
}

pub fn grade_to_file(g: GradeElem) -> i64 {
    match g {
        GradeElem::Unit => 0,
        GradeElem::Int(k) => k,
        GradeElem::Fin(i) => i as i64,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplicitArrow {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplicitGroupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<ExplicitArrow>,
    /// compose[a][b] = index of a∘b, null when not composable
    pub compose: Vec<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading_group: Option<GradingGroupSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupoidSpec {
    Pair(usize),
    Group(GroupSpec),
    Bundle(Vec<GroupSpec>),
    Leavitt(DirectedGraph),
    Union(Vec<GroupoidSpec>),
    Product(Vec<GroupoidSpec>),
    Explicit(ExplicitGroupoid),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradingSpec {
    pub group: GradingGroupSpec,
    /// arrow label -> grade value; unmapped arrows take the identity grade
    #[serde(default)]
    pub map: BTreeMap<String, i64>,
}

/// A parsed, validated instance: everything a command needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<GroupoidSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<DirectedGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
}

fn build_explicit(e: &ExplicitGroupoid) -> Result<(FiniteGroupoid, Cocycle)> {
    let n = e.arrows.len();
    let arrows: Vec<Arrow> = e
        .arrows
        .iter()
        .map(|a| Arrow {
            dom: a.dom,
            cod: a.cod,
        })
        .collect();
    if e.compose.len() != n || e.compose.iter().any(|r| r.len() != n) {
        return Err(Error::invalid(
            "explicit compose table must be arrows x arrows",
        ));
    }
    let compose: Vec<Option<usize>> = e.compose.iter().flatten().copied().collect();
    // derive units: for each object the arrow acting as a two-sided identity
    let mut unit = vec![usize::MAX; e.objects.len()];
    for x in 0..e.objects.len() {
        for (a, arr) in arrows.iter().enumerate() {
            if arr.dom == x && arr.cod == x {
                let is_unit = (0..n).all(|b| {
                    (arrows[b].cod != x || compose[a * n + b] == Some(b))
                        && (arrows[b].dom != x || compose[b * n + a] == Some(b))
                });
                if is_unit {
                    unit[x] = a;
                    break;
                }
            }
        }
        if unit[x] == usize::MAX {
            return Err(Error::invalid(format!("object {x} has no identity arrow")));
        }
    }
    // derive inverses
    let mut inv = vec![usize::MAX; n];
    for a in 0..n {
        inv[a] = (0..n)
            .find(|&b| {
                compose[a * n + b] == Some(unit[arrows[a].cod])
                    && compose[b * n + a] == Some(unit[arrows[a].dom])
            })
            .ok_or_else(|| Error::invalid(format!("arrow {a} has no inverse")))?;
    }
    let labels = e.arrows.iter().map(|a| a.name.clone()).collect();
    let gpd = FiniteGroupoid::from_parts(
        e.objects.len(),
        Some(e.objects.clone()),
        arrows,
        Some(labels),
        compose,
        inv,
        unit,
    )?;
    let group = e
        .grading_group
        .as_ref()
        .map(|g| g.build())
        .transpose()?
        .unwrap_or(GradingGroup::Trivial);
    let grades: Vec<GradeElem> = e
        .arrows
        .iter()
        .map(|a| match a.grade {
            None => Ok(group.identity()),
            Some(v) => grade_from_file(&group, v),
        })
        .collect::<Result<_>>()?;
    let c = Cocycle { group, grades };
    c.validate(&gpd)?;
    Ok((gpd, c))
}

pub fn build_groupoid(spec: &GroupoidSpec) -> Result<(FiniteGroupoid, Cocycle)> {
    match spec {
        GroupoidSpec::Pair(n) => {
            let g = FiniteGroupoid::pair_groupoid(*n)?;
            let c = Cocycle::trivial(&g);
            Ok((g, c))
        }
        GroupoidSpec::Group(gs) => {
            let g = FiniteGroupoid::group_as_groupoid(&gs.build()?)?;
            let c = Cocycle::trivial(&g);
            Ok((g, c))
        }
        GroupoidSpec::Bundle(gs) => {
            let groups: Vec<FiniteGroup> = gs.iter().map(|g| g.build()).collect::<Result<_>>()?;
            let g = FiniteGroupoid::group_bundle(&groups)?;
            let c = Cocycle::trivial(&g);
            Ok((g, c))
        }
        GroupoidSpec::Leavitt(graph) => {
            let pg = crate::leavitt::path_groupoid(graph)?;
            Ok((pg.groupoid, pg.cocycle))
        }
        GroupoidSpec::Union(parts) => {
            if parts.is_empty() {
                return Err(Error::invalid("union needs at least one part"));
            }
            let built: Vec<(FiniteGroupoid, Cocycle)> =
                parts.iter().map(build_groupoid).collect::<Result<_>>()?;
            let mut acc = built[0].clone();
            for (g, c) in &built[1..] {
                if acc.1.group != c.group {
                    return Err(Error::invalid("union parts must share a grading group"));
                }
                let merged = FiniteGroupoid::disjoint_union(&acc.0, g)?;
                let mut grades = acc.1.grades.clone();
                grades.extend(c.grades.iter().copied());
                acc = (
                    merged,
                    Cocycle {
                        group: c.group.clone(),
                        grades,
                    },
                );
            }
            acc.1.validate(&acc.0)?;
            Ok(acc)
        }
        GroupoidSpec::Product(parts) => {
            if parts.len() != 2 {
                return Err(Error::invalid("product takes exactly two parts"));
            }
            let (g1, c1) = build_groupoid(&parts[0])?;
            let (g2, c2) = build_groupoid(&parts[1])?;
            if !c1.is_trivial() || !c2.is_trivial() {
                return Err(Error::invalid(
                    "product of graded groupoids is not supported",
                ));
            }
            let g = FiniteGroupoid::product(&g1, &g2)?;
            let c = Cocycle::trivial(&g);
            Ok((g, c))
        }
        GroupoidSpec::Explicit(e) => build_explicit(e),
    }
}

/// Fully built instance: ring (when present) and groupoid/graph with grading.
pub struct Instance {
    pub ring: Option<Ring>,
    pub groupoid: Option<(FiniteGroupoid, Cocycle)>,
    pub graph: Option<DirectedGraph>,
    pub seed: Option<u64>,
    pub cap: Option<u64>,
}

pub fn parse_instance(text: &str) -> Result<(InstanceFile, Instance)> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| Error::invalid(format!("instance parse error: {e}")))?;
    let ring = file.ring.as_ref().map(Ring::from_spec).transpose()?;
    let mut groupoid = file.groupoid.as_ref().map(build_groupoid).transpose()?;
    if let Some(gspec) = &file.grading {
        let Some((g, c0)) = groupoid.take() else {
            return Err(Error::invalid("grading given without a groupoid"));
        };
        if !c0.is_trivial() {
            return Err(Error::invalid(
                "grading override on an already graded groupoid",
            ));
        }
        let group = gspec.group.build()?;
        let mut grades = vec![group.identity(); g.n_arrows()];
        for (label, &v) in &gspec.map {
            let a = g
                .arrow_labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::invalid(format!("grading names unknown arrow {label}")))?;
            grades[a] = grade_from_file(&group, v)?;
        }
        let c = Cocycle { group, grades };
        c.validate(&g)?;
        groupoid = Some((g, c));
    }
    if let Some(graph) = &file.graph {
        graph.validate()?;
    }
    Ok((
        file.clone(),
        Instance {
            ring,
            groupoid,
            graph: file.graph.clone(),
            seed: file.seed,
            cap: file.cap,
        },
    ))
}

/// Shorthand ring specs for the command line: "mod6", "product2x3", or JSON.
pub fn parse_ring_arg(arg: &str) -> Result<Ring> {
    if let Some(n) = arg.strip_prefix("mod") {
        let n: u64 = n
            .parse()
            .map_err(|_| Error::invalid(format!("bad ring modulus in {arg}")))?;
        return Ring::modular(n);
    }
    if let Some(fs) = arg.strip_prefix("product") {
        let parts: Vec<u64> = fs
            .split('x')
            .map(|p| {
                p.parse()
                    .map_err(|_| Error::invalid(format!("bad ring factor in {arg}")))
            })
            .collect::<Result<_>>()?;
        return Ring::product(&parts);
    }
    let spec: RingSpec = serde_json::from_str(arg)
        .map_err(|e| Error::invalid(format!("ring spec parse error: {e}")))?;
    Ring::from_spec(&spec)
}

/// Shorthand group specs: "cyclic3" or JSON.
pub fn parse_group_arg(arg: &str) -> Result<FiniteGroup> {
    if let Some(n) = arg.strip_prefix("cyclic") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::invalid(format!("bad cyclic order in {arg}")))?;
        return FiniteGroup::cyclic(n);
    }
    let spec: GroupSpec = serde_json::from_str(arg)
        .map_err(|e| Error::invalid(format!("group spec parse error: {e}")))?;
    spec.build()
}

/// On-disk presentation format: sparse structure constants (i, j, k, coeff),
/// diagonal index list, grade list.  Round-trips byte-exactly through
/// `write_presentation` / `parse_presentation`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub ring: RingSpec,
    pub dim: usize,
    pub basis: Vec<String>,
    pub sc: Vec<(usize, usize, usize, u64)>,
    pub diagonal: Vec<usize>,
    pub grading_group: GradingGroupSpec,
    pub grades: Vec<i64>,
}

pub fn presentation_to_file(p: &crate::algebra::Presentation) -> PresentationFile {
    let mut sc = Vec::new();
    for i in 0..p.dim {
        for j in 0..p.dim {
            for &(k, c) in &p.sc[i][j] {
                sc.push((i, j, k, c));
            }
        }
    }
    PresentationFile {
        ring: p.ring.spec().clone(),
        dim: p.dim,
        basis: p.labels.clone(),
        sc,
        diagonal: p.diagonal.clone(),
        grading_group: GradingGroupSpec::of(&p.grading_group),
        grades: p.grades.iter().map(|&g| grade_to_file(g)).collect(),
    }
}

pub fn presentation_from_file(f: &PresentationFile) -> Result<crate::algebra::Presentation> {
    let ring = Ring::from_spec(&f.ring)?;
    if f.basis.len() != f.dim || f.grades.len() != f.dim {
        return Err(Error::invalid("presentation file length mismatch"));
    }
    let group = f.grading_group.build()?;
    let grades = f
        .grades
        .iter()
        .map(|&v| grade_from_file(&group, v))
        .collect::<Result<Vec<_>>>()?;
    let mut sc = vec![vec![Vec::new(); f.dim]; f.dim];
    for &(i, j, k, c) in &f.sc {
        if i >= f.dim || j >= f.dim || k >= f.dim {
            return Err(Error::invalid("structure constant index out of range"));
        }
        sc[i][j].push((k, c));
    }
    let p = crate::algebra::Presentation {
        ring,
        dim: f.dim,
        labels: f.basis.clone(),
        sc,
        diagonal: f.diagonal.clone(),
        grading_group: group,
        grades,
    };
    p.validate()?;
    Ok(p)
}

pub fn write_presentation(p: &crate::algebra::Presentation) -> String {
    let f = presentation_to_file(p);
    serde_json::to_string_pretty(&f).expect("presentation serializes")
}

pub fn parse_presentation(text: &str) -> Result<crate::algebra::Presentation> {
    let f: PresentationFile = serde_json::from_str(text)
        .map_err(|e| Error::invalid(format!("presentation parse error: {e}")))?;
    presentation_from_file(&f)
}

/// Semigroup spec file: element names, table rows, optional star map,
/// optional zero, optional grading assignment.  The involution is uniquely
/// determined by the table, so a supplied star map is cross-checked against
/// the derived one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemigroupFile {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading_group: Option<GradingGroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grades: Option<Vec<i64>>,
}

pub fn parse_semigroup(text: &str) -> Result<(InvSemigroup, Option<SemigroupGrading>)> {
    let f: SemigroupFile = serde_json::from_str(text)
        .map_err(|e| Error::invalid(format!("semigroup parse error: {e}")))?;
    let sg = InvSemigroup::from_table(f.table.clone(), f.zero, Some(f.elements.clone()))?;
    if let Some(star) = &f.star {
        if *star != sg.star {
            return Err(Error::invalid(
                "declared star map disagrees with the involution derived from the table",
            ));
        }
    }
    let grading = match (&f.grading_group, &f.grades) {
        (None, None) => None,
        (Some(gg), Some(vals)) => {
            if vals.len() != sg.size {
                return Err(Error::invalid("semigroup grading length mismatch"));
            }
            let group = gg.build()?;
            let grades = (0..sg.size)
                .map(|s| {
                    if Some(s) == sg.zero {
                        Ok(None)
                    } else {
                        grade_from_file(&group, vals[s]).map(Some)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let theta = SemigroupGrading { group, grades };
            if !crate::invsemi::check_partial_hom(&sg, &theta)? {
                return Err(Error::invalid("grading is not a partial homomorphism"));
            }
            Some(theta)
        }
        _ => {
            return Err(Error::invalid(
                "grading_group and grades must come together",
            ))
        }
    };
    Ok((sg, grading))
}

/// Action file: space point names plus one partial map per semigroup
/// element (null = undefined).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionFile {
    pub space: Vec<String>,
    pub maps: Vec<Vec<Option<usize>>>,
}

pub fn parse_action(text: &str, sg: &InvSemigroup) -> Result<crate::germ::Action> {
    let f: ActionFile = serde_json::from_str(text)
        .map_err(|e| Error::invalid(format!("action parse error: {e}")))?;
    let action = crate::germ::Action {
        space: f.space.len(),
        maps: f.maps,
    };
    action.validate(sg)?;
    Ok(action)
}

/// Render a built groupoid back into the explicit file form, so pipeline
/// outputs can be consumed as instances again.
pub fn groupoid_to_explicit(g: &FiniteGroupoid, c: &Cocycle) -> ExplicitGroupoid {
    let n = g.n_arrows();
    let arrows = (0..n)
        .map(|a| ExplicitArrow {
            name: g.arrow_labels[a].clone(),
            dom: g.arrows[a].dom,
            cod: g.arrows[a].cod,
            grade: if c.is_trivial() {
                None
            } else {
                Some(grade_to_file(c.grades[a]))
            },
        })
        .collect();
    let compose = (0..n)
        .map(|a| (0..n).map(|b| g.compose(a, b)).collect())
        .collect();
    ExplicitGroupoid {
        objects: g.object_labels.clone(),
        arrows,
        compose,
        grading_group: if c.is_trivial() {
            None
        } else {
            Some(GradingGroupSpec::of(&c.group))
        },
    }
}

/// Machine-checkable witnesses attached to failing reports; the
/// `verify-witness` subcommand re-validates them from scratch.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    LbhViolation {
        presentation: PresentationFile,
        m: Vec<u64>,
        m_prime: Vec<u64>,
        grade: i64,
    },
    NontrivialUnit {
        ring: RingSpec,
        group: GroupSpec,
        element: Vec<u64>,
        inverse: Vec<u64>,
    },
    RoundtripMismatch {
        presentation: PresentationFile,
        seed: u64,
    },
    CkFailure {
        graph: DirectedGraph,
        ring: RingSpec,
        failures: Vec<String>,
    },
}

/// Deterministic command report.  Exit codes: 0 all asserted properties
/// hold, 1 a property failed (witness attached), 2 invalid input,
/// 3 capacity exceeded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub inputs_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdicts: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, digest: String) -> Report {
        Report {
            command: command.to_string(),
            version: crate::VERSION.to_string(),
            inputs_digest: digest,
            seed: None,
            verdicts: Vec::new(),
            witness: None,
            exit_code: 0,
        }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.verdicts.push((key.to_string(), value.to_string()));
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} (v{})\n", self.command, self.version));
        out.push_str(&format!("inputs: {}\n", self.inputs_digest));
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        for (k, v) in &self.verdicts {
            out.push_str(&format!("{k}: {v}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!(
                "witness: {}\n",
                serde_json::to_string(w).expect("witness serializes")
            ));
        }
        out.push_str(&format!("exit: {}\n", self.exit_code));
        out
    }
}

pub fn digest_inputs(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
