//! Built-in case registry.

use serde::Serialize;

use super::{
    classify_case, classify_condition_323, classify_grid, perfect_orbits, Admission, CaseSpec, ClassifyError,
    FamilySet, FingerprintClasses, GridSummary, PatternSource,
};
use crate::ideals::is_closed;
use crate::index_set::IndexSet;
use crate::pattern::{enumerate_patterns, PatternConstraints, PatternPredicate, SupportPattern};
use crate::perm::PermSubgroup;

pub const STATED_GRID_STARS: Option<usize> = Some(93);
pub const STATED_CONDITION_323_TYPES: Option<usize> = Some(24);

/// Family counts for `4.k.j`, `k` indexing the `W` block and `j` the number
/// of nonzero entries of `U`.
pub const STATED_TWO_DIM_COUNTS: [[usize; 4]; 5] = [[4, 10, 4, 3], [8, 14, 8, 3], [4, 10, 4, 3], [4, 10, 4, 3], [8, 14, 8, 3]];

/// The five perfect `2 x 2` shapes used as `W`, in the order the cases number them.
pub const TWO_DIM_W: [[&str; 2]; 5] = [["10", "01"], ["10", "11"], ["11", "11"], ["01", "10"], ["01", "11"]];

pub fn registry_labels() -> Vec<String> {
    let mut labels: Vec<String> = ["dim2", "dim3-simple", "3.1", "3.2", "3.3"].map(String::from).to_vec();
    for k in 1..=5 {
        for j in 1..=4 {
            labels.push(format!("4.{k}.{j}"));
        }
    }
    labels.extend(["5.1.1", "5.1.2", "5.2", "5.2.1", "5.2.2", "5.2.3", "grid", "reducible"].map(String::from));
    labels
}

fn pat(rows: &[&str]) -> SupportPattern {
    SupportPattern::parse_rows(rows).expect("literal pattern")
}

fn strongly_connected_perfect(n: usize) -> Vec<SupportPattern> {
    let c = PatternConstraints::new(n)
        .require(PatternPredicate::GenericallyPerfect)
        .require(PatternPredicate::StronglyConnected);
    enumerate_patterns(&c).expect("valid dimension").collect()
}

fn has_closed_pair(w: &SupportPattern) -> bool {
    (0..w.dim()).any(|a| (a + 1..w.dim()).any(|b| is_closed(w, [a, b].into_iter().collect::<IndexSet>())))
}

fn perfect_three(with_closed_pair: bool) -> Vec<SupportPattern> {
    let c = PatternConstraints::new(3).require(PatternPredicate::GenericallyPerfect);
    enumerate_patterns(&c).expect("valid dimension").filter(|w| has_closed_pair(w) == with_closed_pair).collect()
}

fn spec(label: &str, title: &str, source: PatternSource, group: PermSubgroup, admission: Admission) -> CaseSpec {
    CaseSpec {
        label: label.to_owned(),
        title: title.to_owned(),
        source,
        group,
        admission,
        stated_count: None,
        corpus_cases: Vec::new(),
    }
}

pub fn case_spec(label: &str) -> Result<CaseSpec, ClassifyError> {
    let unknown = || ClassifyError::UnknownCase(label.to_owned());
    let s = match label {
        "dim2" => CaseSpec {
            stated_count: Some(5),
            ..spec(
                label,
                "perfect two-dimensional patterns",
                PatternSource::Constrained(PatternConstraints::new(2).require(PatternPredicate::GenericallyPerfect)),
                PermSubgroup::symmetric(2),
                Admission::All,
            )
        },
        "dim3-simple" => spec(
            label,
            "simple three-dimensional patterns",
            PatternSource::Constrained(
                PatternConstraints::new(3)
                    .require(PatternPredicate::GenericallyPerfect)
                    .require(PatternPredicate::StronglyConnected),
            ),
            PermSubgroup::symmetric(3),
            Admission::All,
        ),
        "3.1" | "3.2" | "3.3" => {
            let nonzeros = match label {
                "3.1" => 1,
                "3.2" => 2,
                _ => 3,
            };
            CaseSpec {
                corpus_cases: vec![label.to_owned()],
                ..spec(
                    label,
                    &format!("one-dimensional maximal basic ideal, U with {} zeros", 3 - nonzeros),
                    PatternSource::Blocks {
                        split: 1,
                        w: vec![pat(&["1"])],
                        u_nonzeros: vec![nonzeros],
                        y: strongly_connected_perfect(3),
                    },
                    PermSubgroup::fixing(4, &[0]),
                    Admission::Filter { irreducible: true, ideal_dim: 1, reject_323: false },
                )
            }
        }
        "5.1.2" => CaseSpec {
            corpus_cases: vec![label.to_owned()],
            ..spec(
                label,
                "three-dimensional maximal basic ideal, W with a closed pair, no (3,2,3)",
                PatternSource::Blocks { split: 3, w: perfect_three(true), u_nonzeros: vec![1, 2, 3], y: vec![pat(&["1"])] },
                PermSubgroup::fixing(4, &[3]),
                Admission::Filter { irreducible: true, ideal_dim: 3, reject_323: true },
            )
        },
        "5.2" | "5.2.1" | "5.2.2" | "5.2.3" => {
            let (u_nonzeros, corpus_cases) = match label {
                "5.2.1" => (vec![1], vec![label.to_owned()]),
                "5.2.2" => (vec![2], vec![label.to_owned()]),
                "5.2.3" => (vec![3], vec![label.to_owned()]),
                _ => (vec![1, 2, 3], vec!["5.2.1".into(), "5.2.2".into(), "5.2.3".into()]),
            };
            CaseSpec {
                corpus_cases,
                ..spec(
                    label,
                    "three-dimensional maximal basic ideal, W without a closed pair",
                    PatternSource::Blocks { split: 3, w: perfect_three(false), u_nonzeros, y: vec![pat(&["1"])] },
                    PermSubgroup::fixing(4, &[3]),
                    Admission::Filter { irreducible: true, ideal_dim: 3, reject_323: false },
                )
            }
        }
        "reducible" => {
            let (one, two, three) = (perfect_orbits(1), perfect_orbits(2), perfect_orbits(3));
            spec(
                label,
                "reducible perfect four-dimensional patterns as direct sums",
                PatternSource::DirectSums(vec![(one, three), (two.clone(), two)]),
                PermSubgroup::symmetric(4),
                Admission::All,
            )
        }
        _ => {
            let rest = label.strip_prefix("4.").ok_or_else(unknown)?;
            let (k, j) = rest.split_once('.').ok_or_else(unknown)?;
            let (k, j): (usize, usize) = (k.parse().map_err(|_| unknown())?, j.parse().map_err(|_| unknown())?);
            if !(1..=5).contains(&k) || !(1..=4).contains(&j) {
                return Err(unknown());
            }
            CaseSpec {
                stated_count: Some(STATED_TWO_DIM_COUNTS[k - 1][j - 1]),
                ..spec(
                    label,
                    &format!("two-dimensional maximal basic ideal, W shape {k}, U with {} zeros", 4 - j),
                    PatternSource::Blocks {
                        split: 2,
                        w: vec![pat(&TWO_DIM_W[k - 1])],
                        u_nonzeros: vec![j],
                        y: strongly_connected_perfect(2),
                    },
                    PermSubgroup::stabilizing_set(4, &[0, 1]),
                    Admission::Annotate { ideal_dim: 2 },
                )
            }
        }
    };
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Families(FamilySet),
    Grid(GridSummary),
    Fingerprints(FingerprintClasses),
}

impl Classification {
    /// Families, starred cells or fingerprint classes.
    pub fn count(&self) -> usize {
        match self {
            Classification::Families(f) => f.count(),
            Classification::Grid(g) => g.stars,
            Classification::Fingerprints(f) => f.count(),
        }
    }

    pub fn stated_count(&self) -> Option<usize> {
        match self {
            Classification::Families(f) => f.stated_count,
            Classification::Grid(g) => g.stated_stars,
            Classification::Fingerprints(f) => f.stated_count,
        }
    }
}

pub fn classify_label(label: &str) -> Result<Classification, ClassifyError> {
    match label {
        "grid" => Ok(Classification::Grid(classify_grid())),
        "5.1.1" => Ok(Classification::Fingerprints(classify_condition_323())),
        _ => classify_case(&case_spec(label)?).map(Classification::Families),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_label_resolves() {
        for label in registry_labels() {
            assert!(classify_label(&label).is_ok(), "{label}");
        }
        assert_eq!(case_spec("4.6.1"), Err(ClassifyError::UnknownCase("4.6.1".into())));
        assert!(case_spec("4.1").is_err());
        assert!(case_spec("nope").is_err());
    }

    #[test]
    fn block_lists() {
        assert_eq!(strongly_connected_perfect(2).len(), 4);
        assert_eq!(strongly_connected_perfect(3).len(), 138);
        assert_eq!(perfect_three(true).len() + perfect_three(false).len(), 247);
    }
}
