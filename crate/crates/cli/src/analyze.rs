use std::fmt;

use serde::Serialize;

use evoalg::field::{Field, FieldSpec};
use evoalg::ideals::{ideal_report, is_irreducible, maximal_basic_ideals, satisfies_condition_323, IdealReport, Irreducibility};
use evoalg::{DirectedGraph, EvolutionAlgebra, IndexSet, SupportPattern};

/// Everything `analyze` prints. Key names are stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    /// `matrix`, or `pattern` when only the support is known.
    pub level: &'static str,
    pub dim: usize,
    pub field: String,
    pub matrix: Option<Vec<Vec<String>>>,
    /// For patterns: generically perfect.
    pub perfect: bool,
    pub simple: bool,
    pub basic_simple: bool,
    pub irreducible: Irreducibility,
    pub zero_count: usize,
    pub diag_zero_count: usize,
    /// `(out, in)` degree of each vertex of the associated graph.
    pub degree_profile: Vec<(usize, usize)>,
    pub basic_ideals: Vec<IndexSet>,
    pub maximal_basic_ideals: Vec<IndexSet>,
    pub basis_independent: bool,
    pub condition_323: Option<[IndexSet; 2]>,
    pub graph: DirectedGraph,
}

fn build(level: &'static str, field: FieldSpec, matrix: Option<Vec<Vec<String>>>, p: &SupportPattern, perfect: bool, ideals: IdealReport) -> AnalysisReport {
    let graph = p.graph();
    let irreducible = match (perfect, graph.is_connected()) {
        (false, graph_connected) => Irreducibility::Unproven { graph_connected },
        (true, true) => Irreducibility::Irreducible,
        (true, false) => Irreducibility::Reducible,
    };
    AnalysisReport {
        level,
        dim: p.dim(),
        field: field.to_string(),
        matrix,
        perfect,
        simple: perfect && graph.is_strongly_connected(),
        basic_simple: ideals.is_basic_simple,
        irreducible,
        zero_count: p.zero_count(),
        diag_zero_count: p.diag_zero_count(),
        degree_profile: graph.degree_profile(),
        basic_ideals: ideals.all_closed_proper_sets,
        maximal_basic_ideals: ideals.maximal_basic_ideals,
        basis_independent: ideals.basis_independent,
        condition_323: satisfies_condition_323(p).map(|(s, t)| [s, t]),
        graph,
    }
}

pub fn pattern_report(p: &SupportPattern, field: FieldSpec) -> AnalysisReport {
    build("pattern", field, None, p, p.generically_perfect(), maximal_basic_ideals(p))
}

pub fn algebra_report<F: Field>(a: &EvolutionAlgebra<F>) -> AnalysisReport {
    let report = build("matrix", a.field().spec(), Some(a.row_strings()), &a.support(), a.is_perfect(), ideal_report(a));
    debug_assert_eq!(report.irreducible, is_irreducible(a));
    report
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn sets(list: &[IndexSet]) -> String {
    if list.is_empty() {
        return "none".into();
    }
    list.iter().map(IndexSet::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension {} over {} ({} level)", self.dim, self.field, self.level)?;
        if let Some(rows) = &self.matrix {
            let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
            for row in rows {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                writeln!(f, "  {}", cells.join(" "))?;
            }
        }
        let perfect = if self.level == "pattern" { "generically perfect" } else { "perfect" };
        writeln!(f, "{perfect}: {}", yes_no(self.perfect))?;
        writeln!(f, "simple: {}", yes_no(self.simple))?;
        writeln!(f, "basic simple: {}", yes_no(self.basic_simple))?;
        let irreducible = match self.irreducible {
            Irreducibility::Irreducible => "yes".to_owned(),
            Irreducibility::Reducible => "no".to_owned(),
            Irreducibility::Unproven { graph_connected } => {
                format!("undecided (not perfect; graph {})", if graph_connected { "connected" } else { "disconnected" })
            }
        };
        writeln!(f, "irreducible: {irreducible}")?;
        writeln!(f, "zeros: {} (diagonal {})", self.zero_count, self.diag_zero_count)?;
        let degrees: Vec<String> = self.degree_profile.iter().map(|(o, i)| format!("({o},{i})")).collect();
        writeln!(f, "degrees (out,in): {}", degrees.join(""))?;
        writeln!(f, "basic ideals: {}", sets(&self.basic_ideals))?;
        let dim = self.maximal_basic_ideals.first().map_or(String::new(), |s| format!(" (dimension {})", s.len()));
        writeln!(f, "maximal basic ideals: {}{dim}", sets(&self.maximal_basic_ideals))?;
        if !self.basis_independent {
            writeln!(f, "note: not perfect, so these ideals depend on the chosen natural basis")?;
        }
        match &self.condition_323 {
            Some([s, t]) => writeln!(f, "condition (3,2,3): holds with {s} and {t}")?,
            None => writeln!(f, "condition (3,2,3): fails")?,
        }
        writeln!(f, "graph (row i lists the out-edges of vertex i):")?;
        for row in self.graph.to_string().lines() {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}
