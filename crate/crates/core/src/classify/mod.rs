//! Pattern-level classification of perfect non-simple evolution algebras.
//!
//! A family is an orbit of support patterns under the permutation group a
//! case allows. Cases are built from blocks `(W U; 0 Y)` or from plain
//! pattern constraints; see [`cases`] for the registry.

pub mod cases;
pub mod corpus;
pub mod verify;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ideals::{has_exchangeable_index, maximal_ideal_dimension, satisfies_condition_323};
use crate::pattern::{enumerate_patterns, Fingerprint, PatternConstraints, PatternError, PatternPredicate, SupportPattern};
use crate::perm::PermSubgroup;

pub use cases::{case_spec, classify_label, registry_labels, Classification};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("unknown case label `{0}`")]
    UnknownCase(String),
    #[error("inconsistent case specification: {0}")]
    InconsistentSpec(String),
    #[error("malformed grid cell: {0}")]
    MalformedCell(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// Where the raw patterns of a case come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternSource {
    /// `(W U; 0 Y)` with `W` and `Y` from the lists and `U` any block with
    /// one of the given numbers of nonzero entries.
    Blocks { split: usize, w: Vec<SupportPattern>, u_nonzeros: Vec<usize>, y: Vec<SupportPattern> },
    Constrained(PatternConstraints),
    /// Direct sums `A ⊕ B` for each listed pair of summand lists.
    DirectSums(Vec<(Vec<SupportPattern>, Vec<SupportPattern>)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admission {
    All,
    /// Drop patterns that fail the requirements.
    Filter { irreducible: bool, ideal_dim: usize, reject_323: bool },
    /// Keep every orbit; those that are reducible or have another maximal
    /// ideal dimension are listed as anomalies.
    Annotate { ideal_dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSpec {
    pub label: String,
    pub title: String,
    pub source: PatternSource,
    pub group: PermSubgroup,
    pub admission: Admission,
    /// Family count stated in the text, when there is one.
    pub stated_count: Option<usize>,
    /// Corpus case labels whose tables list this case's families.
    pub corpus_cases: Vec<String>,
}

impl CaseSpec {
    pub fn dim(&self) -> usize {
        match &self.source {
            PatternSource::Blocks { split, y, .. } => split + y.first().map_or(0, SupportPattern::dim),
            PatternSource::Constrained(c) => c.n,
            PatternSource::DirectSums(parts) => {
                parts.first().map_or(0, |(a, b)| a.first().map_or(0, SupportPattern::dim) + b.first().map_or(0, SupportPattern::dim))
            }
        }
    }

    fn validate(&self) -> Result<(), ClassifyError> {
        let bad = |msg: String| Err(ClassifyError::InconsistentSpec(format!("{}: {msg}", self.label)));
        let n = self.dim();
        if self.group.degree() != n {
            return bad(format!("group acts on {} points but patterns have dimension {n}", self.group.degree()));
        }
        match &self.source {
            PatternSource::Blocks { split, w, u_nonzeros, y } => {
                if w.is_empty() || y.is_empty() {
                    return bad("empty block list".into());
                }
                if w.iter().any(|p| p.dim() != *split) || y.iter().any(|p| p.dim() != n - split) {
                    return bad("block sizes disagree with the split".into());
                }
                if u_nonzeros.iter().any(|&k| k > split * (n - split)) {
                    return bad("more U nonzeros than U cells".into());
                }
                let head: Vec<usize> = (0..*split).collect();
                if self.group.iter().any(|s| head.iter().any(|&i| s.apply(i) >= *split)) {
                    return bad("group does not preserve the zero block".into());
                }
            }
            PatternSource::Constrained(_) => {}
            PatternSource::DirectSums(parts) => {
                for (a, b) in parts {
                    let sizes: Vec<usize> = a.iter().chain(b).map(SupportPattern::dim).collect();
                    if a.is_empty() || b.is_empty() || a.iter().chain(b).any(|p| a[0].dim() + b[0].dim() != n || p.dim() == 0) {
                        return bad(format!("summand sizes {sizes:?} do not add up to {n}"));
                    }
                    if a.iter().any(|p| p.dim() != a[0].dim()) || b.iter().any(|p| p.dim() != b[0].dim()) {
                        return bad("summands of one list differ in size".into());
                    }
                }
            }
        }
        Ok(())
    }

    fn raw_patterns(&self) -> Result<Vec<SupportPattern>, ClassifyError> {
        match &self.source {
            PatternSource::Blocks { split, w, u_nonzeros, y } => {
                let rows = *split;
                let cols = y[0].dim();
                let mut out = Vec::new();
                for bits in 0u32..(1 << (rows * cols)) {
                    if !u_nonzeros.contains(&(bits.count_ones() as usize)) {
                        continue;
                    }
                    // first U cell is the most significant bit, row-major
                    let u: Vec<Vec<bool>> = (0..rows)
                        .map(|r| (0..cols).map(|c| bits >> (rows * cols - 1 - (r * cols + c)) & 1 == 1).collect())
                        .collect();
                    for wp in w {
                        for yp in y {
                            out.push(SupportPattern::from_blocks(wp, &u, yp)?);
                        }
                    }
                }
                Ok(out)
            }
            PatternSource::Constrained(c) => Ok(enumerate_patterns(c)?.collect()),
            PatternSource::DirectSums(parts) => {
                let mut out = Vec::new();
                for (a, b) in parts {
                    for pa in a {
                        for pb in b {
                            out.push(pa.direct_sum(pb)?);
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

/// One orbit of a case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Family {
    pub representative: SupportPattern,
    pub fingerprint: Fingerprint,
    pub irreducible: bool,
    pub ideal_dim: Option<usize>,
    /// Raw patterns of the case that fall in this orbit.
    pub raw_members: usize,
    pub anomaly: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySet {
    pub label: String,
    pub title: String,
    pub raw_patterns: usize,
    pub families: Vec<Family>,
    pub stated_count: Option<usize>,
}

impl FamilySet {
    pub fn count(&self) -> usize {
        self.families.len()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &SupportPattern> {
        self.families.iter().map(|f| &f.representative)
    }

    pub fn anomalies(&self) -> impl Iterator<Item = &Family> {
        self.families.iter().filter(|f| f.anomaly.is_some())
    }
}

fn admitted(p: &SupportPattern, admission: Admission) -> bool {
    match admission {
        Admission::All | Admission::Annotate { .. } => true,
        Admission::Filter { irreducible, ideal_dim, reject_323 } => {
            p.generically_perfect()
                && (!irreducible || p.graph().is_connected())
                && maximal_ideal_dimension(p) == Some(ideal_dim)
                && !(reject_323 && satisfies_condition_323(p).is_some())
        }
    }
}

pub fn classify_case(spec: &CaseSpec) -> Result<FamilySet, ClassifyError> {
    spec.validate()?;
    let raw = spec.raw_patterns()?;
    let mut orbits: BTreeMap<SupportPattern, usize> = BTreeMap::new();
    for p in raw.iter().filter(|p| admitted(p, spec.admission)) {
        *orbits.entry(p.canonical(&spec.group)).or_default() += 1;
    }
    let families = orbits
        .into_iter()
        .map(|(rep, raw_members)| {
            let irreducible = rep.graph().is_connected();
            let ideal_dim = maximal_ideal_dimension(&rep);
            let anomaly = match spec.admission {
                Admission::Annotate { .. } if !irreducible => Some("reducible".to_owned()),
                Admission::Annotate { ideal_dim: want } if ideal_dim != Some(want) => {
                    Some(format!("maximal basic ideal dimension {}", ideal_dim.map_or("none".into(), |d| d.to_string())))
                }
                _ => None,
            };
            Family { fingerprint: rep.fingerprint(), representative: rep, irreducible, ideal_dim, raw_members, anomaly }
        })
        .collect();
    Ok(FamilySet {
        label: spec.label.clone(),
        title: spec.title.clone(),
        raw_patterns: raw.len(),
        families,
        stated_count: spec.stated_count,
    })
}

fn symmetric_orbits(constraints: PatternConstraints) -> Vec<SupportPattern> {
    let group = PermSubgroup::symmetric(constraints.n);
    let mut reps: Vec<SupportPattern> = enumerate_patterns(&constraints)
        .expect("valid dimension")
        .map(|p| p.canonical(&group))
        .collect();
    reps.sort();
    reps.dedup();
    reps
}

/// Orbit representatives of generically perfect `n x n` patterns under `S_n`.
pub fn perfect_orbits(n: usize) -> Vec<SupportPattern> {
    symmetric_orbits(PatternConstraints::new(n).require(PatternPredicate::GenericallyPerfect))
}

pub fn classify_dim2_perfect() -> FamilySet {
    classify_case(&case_spec("dim2").expect("registered")).expect("registered specs are consistent")
}

pub fn classify_dim3_simple() -> FamilySet {
    classify_case(&case_spec("dim3-simple").expect("registered")).expect("registered specs are consistent")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GridLabel {
    Reducible,
    Irreducible,
    IrreducibleStar,
}

impl GridLabel {
    /// `R`, `I` or `I*`, as in corpus manifests.
    pub fn short(self) -> &'static str {
        match self {
            GridLabel::Reducible => "R",
            GridLabel::Irreducible => "I",
            GridLabel::IrreducibleStar => "I*",
        }
    }

    pub fn from_short(s: &str) -> Option<Self> {
        match s {
            "R" => Some(GridLabel::Reducible),
            "I" => Some(GridLabel::Irreducible),
            "I*" => Some(GridLabel::IrreducibleStar),
            _ => None,
        }
    }
}

impl fmt::Display for GridLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridLabel::Reducible => "Reducible",
            GridLabel::Irreducible => "Irreducible",
            GridLabel::IrreducibleStar => "Irreducible*",
        })
    }
}

/// Grid columns: the nonzero entries of `U`.
pub const GRID_COLUMNS: [[bool; 3]; 7] = [
    [true, false, false],
    [false, true, false],
    [false, false, true],
    [true, true, false],
    [true, false, true],
    [false, true, true],
    [true, true, true],
];

pub fn column_name(u: &[bool]) -> String {
    u.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// The perfect `3 x 3` patterns with third row `(0, 0, *)`, in lexicographic order.
pub fn grid_w_blocks() -> Vec<SupportPattern> {
    let c = PatternConstraints::new(3).zero(2, 0).zero(2, 1).nonzero(2, 2).require(PatternPredicate::GenericallyPerfect);
    enumerate_patterns(&c).expect("valid dimension").collect()
}

/// `M = (W U; 0 1)`.
pub fn grid_cell_pattern(w: &SupportPattern, u: &[bool]) -> Result<SupportPattern, ClassifyError> {
    if w.dim() != 3 || u.len() != 3 {
        return Err(ClassifyError::MalformedCell(format!("W is {0}x{0} and U has {1} entries; need 3x3 and 3", w.dim(), u.len())));
    }
    if w.get(2, 0) || w.get(2, 1) || !w.get(2, 2) {
        return Err(ClassifyError::MalformedCell(format!("third row of W is {}, not (0, 0, *)", w.row_strings()[2])));
    }
    let one = SupportPattern::parse_rows(&["1"]).expect("literal");
    let u_block: Vec<Vec<bool>> = u.iter().map(|&b| vec![b]).collect();
    Ok(SupportPattern::from_blocks(w, &u_block, &one)?)
}

pub fn label_pattern(m: &SupportPattern) -> GridLabel {
    if !m.graph().is_connected() {
        GridLabel::Reducible
    } else if satisfies_condition_323(m).is_none() {
        GridLabel::IrreducibleStar
    } else {
        GridLabel::Irreducible
    }
}

pub fn label_case5_cell(w: &SupportPattern, u: &[bool]) -> Result<GridLabel, ClassifyError> {
    grid_cell_pattern(w, u).map(|m| label_pattern(&m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub w: SupportPattern,
    pub column: usize,
    pub pattern: SupportPattern,
    pub label: GridLabel,
    /// Some index below 4 occurs in no other `D^1(j)`, so it can trade places with index 4.
    pub exchangeable: bool,
}

impl GridCell {
    pub fn new(w: &SupportPattern, column: usize) -> Result<Self, ClassifyError> {
        let u = GRID_COLUMNS.get(column).ok_or_else(|| ClassifyError::MalformedCell(format!("column {column}")))?;
        let pattern = grid_cell_pattern(w, u)?;
        let exchangeable = has_exchangeable_index(&pattern).expect("grid cells are in last-column form");
        Ok(GridCell { w: *w, column, pattern, label: label_pattern(&pattern), exchangeable })
    }

    /// For irreducible cells the star should mean that index 4 cannot be exchanged.
    pub fn observation_agrees(&self) -> bool {
        match self.label {
            GridLabel::Reducible => true,
            GridLabel::Irreducible => self.exchangeable,
            GridLabel::IrreducibleStar => !self.exchangeable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSummary {
    pub cells: Vec<GridCell>,
    pub stars: usize,
    pub stated_stars: Option<usize>,
}

impl GridSummary {
    pub fn from_rows(ws: &[SupportPattern]) -> Result<Self, ClassifyError> {
        let mut cells = Vec::with_capacity(ws.len() * GRID_COLUMNS.len());
        for w in ws {
            for column in 0..GRID_COLUMNS.len() {
                cells.push(GridCell::new(w, column)?);
            }
        }
        let stars = cells.iter().filter(|c| c.label == GridLabel::IrreducibleStar).count();
        Ok(GridSummary { cells, stars, stated_stars: None })
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &GridCell> {
        self.cells.iter().filter(|c| !c.observation_agrees())
    }
}

/// Every cell over all grid rows.
pub fn classify_grid() -> GridSummary {
    GridSummary { stated_stars: cases::STATED_GRID_STARS, ..GridSummary::from_rows(&grid_w_blocks()).expect("grid rows are well formed") }
}

/// Patterns grouped by fingerprint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FingerprintClasses {
    pub patterns: Vec<SupportPattern>,
    /// Index into `classes` for each pattern.
    pub class_of: Vec<usize>,
    pub classes: Vec<Fingerprint>,
    /// Orbits of the patterns under the full symmetric group.
    pub orbit_count: usize,
    pub stated_count: Option<usize>,
}

impl FingerprintClasses {
    pub fn new(patterns: Vec<SupportPattern>, stated_count: Option<usize>) -> Self {
        let prints: Vec<Fingerprint> = patterns.iter().map(SupportPattern::fingerprint).collect();
        let mut classes = prints.clone();
        classes.sort();
        classes.dedup();
        let class_of = prints.iter().map(|f| classes.binary_search(f).expect("present")).collect();
        let mut orbits: Vec<SupportPattern> = patterns
            .iter()
            .map(|p| p.canonical(&PermSubgroup::symmetric(p.dim())))
            .collect();
        orbits.sort();
        orbits.dedup();
        FingerprintClasses { patterns, class_of, classes, orbit_count: orbits.len(), stated_count }
    }

    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

/// Irreducible grid cells that satisfy the (3,2,3) condition.
pub fn condition_323_patterns() -> Vec<SupportPattern> {
    classify_grid().cells.into_iter().filter(|c| c.label == GridLabel::Irreducible).map(|c| c.pattern).collect()
}

pub fn classify_condition_323() -> FingerprintClasses {
    FingerprintClasses::new(condition_323_patterns(), cases::STATED_CONDITION_323_TYPES)
}
