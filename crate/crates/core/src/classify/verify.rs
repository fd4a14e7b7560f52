//! Mechanical verification of the table corpus against the enumerations.
//!
//! Mismatches become report items, never errors. Item ids look like
//! `c3.1-t1/r04:pattern` for rows and `case:3.1:coverage` for whole cases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::corpus::{Corpus, Figure, FigureBody, FingerprintRow, GridRow, PairedRow, Pairing, Role};
use super::{case_spec, classify_case, condition_323_patterns, grid_w_blocks, GridCell, GridLabel, GRID_COLUMNS};
use crate::algebra::MonomialMap;
use crate::field::{Field, Rationals};
use crate::format::PatternTemplate;
use crate::isotest::find_isomorphism;
use crate::pattern::SupportPattern;
use crate::perm::{PermSubgroup, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    /// A failure listed in the errata allowlist.
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportItem {
    pub id: String,
    pub status: Status,
    pub detail: String,
    /// Justification from the allowlist, for `Warn` items.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erratum: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub items: Vec<ReportItem>,
    /// Allowlisted ids that did not fail.
    pub unused_errata: Vec<String>,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.items.iter().filter(|i| i.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| i.status == Status::Fail)
    }

    pub fn errata(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| i.status == Status::Warn)
    }

    pub fn item(&self, id: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.id == id)
    }

    /// Items whose id starts with `prefix`.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a ReportItem> + 'a {
        self.items.iter().filter(move |i| i.id.starts_with(prefix))
    }

    /// True when nothing failed outside the allowlist.
    pub fn is_clean(&self) -> bool {
        self.failures().next().is_none()
    }
}

struct Items(Vec<ReportItem>);

impl Items {
    fn push(&mut self, id: String, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.0.push(ReportItem { id, status, detail: detail.into(), erratum: None });
    }
}

fn one_line(p: &SupportPattern) -> String {
    p.row_strings().join(" ")
}

/// Distinct primes `2, 3, 5, ...`, one per parameter name in sorted order.
fn prime_assignment(templates: &[&PatternTemplate]) -> BTreeMap<String, i64> {
    let names: BTreeSet<String> = templates.iter().flat_map(|t| t.parameters()).collect();
    let primes = (2i64..).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0));
    names.into_iter().zip(primes).collect()
}

/// Instantiates the left side with distinct primes and checks that the
/// relabeled matrix is an instance of the right side. Failing that, the
/// right side gets the same primes by name and the oracle decides.
pub fn check_instance(row: &PairedRow, sigma: Option<&Permutation>) -> (bool, String) {
    let field = Rationals;
    let primes = prime_assignment(&[&row.left, &row.right]);
    let value = |name: &str| primes.get(name).map(|&v| field.from_i64(v));
    let (left, right) = match (row.left.instantiate(field, value), row.right.instantiate(field, value)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return (false, format!("cannot instantiate: {e}")),
    };
    if let Some(sigma) = sigma {
        let map = MonomialMap::permutation(&field, sigma.inverse());
        if let Ok(image) = left.apply_monomial(&map) {
            if image == right {
                return (true, format!("relabeling by {sigma} reproduces the partner exactly"));
            }
            if row.right.bind(&image).is_some() {
                return (true, format!("relabeling by {sigma} reproduces the partner with its parameters renamed"));
            }
        }
    }
    match find_isomorphism(&left, &right) {
        Ok(outcome) if outcome.is_isomorphic() => {
            let map = outcome.map().expect("isomorphic outcome has a map");
            (true, format!("isomorphic via sigma = {} with scales {}", map.sigma, format_scales(&field, &map.scales)))
        }
        Ok(outcome) => (false, outcome.to_string()),
        Err(e) => (false, e.to_string()),
    }
}

fn format_scales(field: &Rationals, scales: &[<Rationals as Field>::Elem]) -> String {
    let parts: Vec<String> = scales.iter().map(|s| field.format(s)).collect();
    format!("({})", parts.join(", "))
}

fn pairing_permutation(pairing: &Pairing, group: &PermSubgroup, left: &SupportPattern, right: &SupportPattern) -> Option<Permutation> {
    match pairing {
        Pairing::Fixed(s) => (left.permute(s) == *right).then(|| s.clone()),
        Pairing::Any => group.iter().find(|s| left.permute(s) == *right).cloned(),
    }
}

/// Enumerated orbit representatives per corpus case, under the case's group.
struct Enumerations {
    cases: BTreeMap<String, Option<(PermSubgroup, BTreeSet<SupportPattern>)>>,
}

impl Enumerations {
    fn new(corpus: &Corpus) -> Self {
        let cases = corpus
            .cases()
            .into_iter()
            .map(|case| {
                let set = case_spec(case).ok().and_then(|spec| {
                    let families = classify_case(&spec).ok()?;
                    Some((spec.group.clone(), families.representatives().copied().collect()))
                });
                (case.to_owned(), set)
            })
            .collect();
        Enumerations { cases }
    }

    fn get(&self, case: &str) -> Option<&(PermSubgroup, BTreeSet<SupportPattern>)> {
        self.cases.get(case).and_then(Option::as_ref)
    }

    fn member(&self, case: &str, p: &SupportPattern) -> Option<bool> {
        self.get(case).map(|(g, reps)| reps.contains(&p.canonical(g)))
    }
}

fn verify_paired(items: &mut Items, fig: &Figure, pairing: &Pairing, role: Role, rows: &[PairedRow], en: &Enumerations) {
    for row in rows {
        let id = format!("{}/{}", fig.name, row.id);
        let (left, right) = (row.left.support(), row.right.support());
        let sigma = pairing_permutation(pairing, &fig.group, &left, &right);
        let detail = match (&sigma, pairing) {
            (Some(s), _) => format!("{s} maps the left support to the right"),
            (None, Pairing::Fixed(s)) => format!("{s} maps [{}] to [{}], not [{}]", one_line(&left), one_line(&left.permute(s)), one_line(&right)),
            (None, Pairing::Any) => format!("no element of the figure group maps [{}] to [{}]", one_line(&left), one_line(&right)),
        };
        items.push(format!("{id}:pattern"), sigma.is_some(), detail);
        let (ok, detail) = check_instance(row, sigma.as_ref());
        items.push(format!("{id}:instance"), ok, detail);
        if role == Role::Identifications {
            for (side, p) in [("a", &left), ("b", &right)] {
                if let Some(ok) = en.member(&fig.case, p) {
                    let detail = if ok { "in the enumerated set".to_owned() } else { format!("[{}] is not an enumerated family", one_line(p)) };
                    items.push(format!("{id}:member-{side}"), ok, detail);
                }
            }
        }
    }
}

/// Distinctness and membership of every family row of one case, in figure order.
fn verify_case_rows(items: &mut Items, corpus: &Corpus, case: &str, en: &Enumerations) {
    let figures: Vec<&Figure> = corpus.figures_of(case).filter(|f| f.lists_families()).collect();
    if figures.is_empty() {
        return;
    }
    let group = en.get(case).map_or_else(|| figures[0].group.clone(), |(g, _)| g.clone());
    let mut seen: BTreeMap<SupportPattern, String> = BTreeMap::new();
    for fig in &figures {
        for (row, p) in fig.family_rows() {
            let id = format!("{}/{row}", fig.name);
            let canon = p.canonical(&group);
            match seen.get(&canon) {
                Some(first) => items.push(format!("{id}:distinct"), false, format!("same orbit as {first}")),
                None => {
                    items.push(format!("{id}:distinct"), true, "new orbit");
                    seen.insert(canon, id.clone());
                }
            }
            if let Some(ok) = en.member(case, &p) {
                let detail = if ok { "in the enumerated set".to_owned() } else { format!("[{}] is not an enumerated family", one_line(&p)) };
                items.push(format!("{id}:member"), ok, detail);
            }
        }
    }
    if let Some((_, reps)) = en.get(case) {
        let missing: Vec<String> = reps.iter().filter(|r| !seen.contains_key(r)).map(|r| format!("[{}]", one_line(r))).collect();
        let detail = if missing.is_empty() {
            format!("all {} enumerated families appear", reps.len())
        } else {
            format!("{} of {} enumerated families missing: {}", missing.len(), reps.len(), missing.join(", "))
        };
        items.push(format!("case:{case}:coverage"), missing.is_empty(), detail);
    }
}

fn verify_grid_rows(items: &mut Items, fig: &Figure, rows: &[GridRow], stated_stars: Option<usize>) -> usize {
    let mut stars = 0;
    for row in rows {
        let id = format!("{}/{}", fig.name, row.id);
        let cells: Result<Vec<GridCell>, _> = (0..GRID_COLUMNS.len()).map(|c| GridCell::new(&row.w, c)).collect();
        let cells = match cells {
            Ok(cells) => cells,
            Err(e) => {
                items.push(format!("{id}:labels"), false, e.to_string());
                continue;
            }
        };
        stars += cells.iter().filter(|c| c.label == GridLabel::IrreducibleStar).count();
        let wrong: Vec<String> = cells
            .iter()
            .zip(&row.labels)
            .filter(|(c, printed)| c.label != **printed)
            .map(|(c, printed)| format!("column {} printed {} computed {}", super::column_name(&GRID_COLUMNS[c.column]), printed.short(), c.label.short()))
            .collect();
        let detail = if wrong.is_empty() { "all 7 labels agree".to_owned() } else { wrong.join("; ") };
        items.push(format!("{id}:labels"), wrong.is_empty(), detail);
        let disagree: Vec<String> = cells
            .iter()
            .filter(|c| !c.observation_agrees())
            .map(|c| super::column_name(&GRID_COLUMNS[c.column]))
            .collect();
        let detail = if disagree.is_empty() {
            "star marks exactly the irreducible cells without an exchangeable index".to_owned()
        } else {
            format!("star and exchangeability disagree in columns {}", disagree.join(" "))
        };
        items.push(format!("{id}:observation"), disagree.is_empty(), detail);
    }
    if let Some(stated) = stated_stars {
        items.push(format!("{}:stars", fig.name), stars == stated, format!("{stars} starred cells, stated {stated}"));
    }
    stars
}

fn verify_grid_case(items: &mut Items, corpus: &Corpus) {
    let figures: Vec<&Figure> = corpus.figures.iter().filter(|f| matches!(f.body, FigureBody::Grid { .. })).collect();
    if figures.is_empty() {
        return;
    }
    let mut stars = 0;
    let mut stated_total = None;
    let mut ws: Vec<SupportPattern> = Vec::new();
    for fig in &figures {
        if let FigureBody::Grid { stated_stars, stated_total_stars, rows } = &fig.body {
            stars += verify_grid_rows(items, fig, rows, *stated_stars);
            stated_total = stated_total.or(*stated_total_stars);
            ws.extend(rows.iter().map(|r| r.w));
        }
    }
    if let Some(stated) = stated_total {
        items.push("case:grid:stars".into(), stars == stated, format!("{stars} starred cells in total, stated {stated}"));
    }
    let printed: BTreeSet<SupportPattern> = ws.iter().copied().collect();
    let expected: BTreeSet<SupportPattern> = grid_w_blocks().into_iter().collect();
    let ok = printed == expected && ws.len() == expected.len();
    let detail = format!(
        "{} rows, {} distinct W blocks, {} missing, {} unexpected",
        ws.len(),
        printed.len(),
        expected.difference(&printed).count(),
        printed.difference(&expected).count()
    );
    items.push("case:grid:rows".into(), ok, detail);
}

fn fingerprint_row_problems(row: &FingerprintRow) -> Vec<String> {
    let p = &row.pattern;
    let graph = p.graph();
    let mut problems = Vec::new();
    if row.zeros != p.zero_count() {
        problems.push(format!("printed {} zeros, matrix has {}", row.zeros, p.zero_count()));
    }
    if row.diag_zeros != p.diag_zero_count() {
        problems.push(format!("printed {} diagonal zeros, matrix has {}", row.diag_zeros, p.diag_zero_count()));
    }
    if row.degrees != graph.degree_profile() {
        problems.push(format!("printed degrees {:?} differ from the matrix degrees {:?}", row.degrees, graph.degree_profile()));
    }
    if !row.graph.is_isomorphic(&graph) {
        problems.push("drawn graph is not isomorphic to the associated graph".to_owned());
    }
    problems
}

fn verify_fingerprints(items: &mut Items, corpus: &Corpus) {
    let figures: Vec<&Figure> = corpus.figures.iter().filter(|f| matches!(f.body, FigureBody::Fingerprints { .. })).collect();
    let Some(first) = figures.first() else {
        return;
    };
    let case = first.case.clone();
    let mut stated = None;
    let mut rows: Vec<(String, &FingerprintRow)> = Vec::new();
    for fig in &figures {
        if let FigureBody::Fingerprints { stated_types, rows: fig_rows } = &fig.body {
            stated = stated.or(*stated_types);
            for row in fig_rows {
                let id = format!("{}/{}", fig.name, row.id);
                let problems = fingerprint_row_problems(row);
                let detail = if problems.is_empty() { "matches the matrix".to_owned() } else { problems.join("; ") };
                items.push(format!("{id}:fingerprint"), problems.is_empty(), detail);
                rows.push((id, row));
            }
        }
    }

    let mut by_type: BTreeMap<&str, Vec<(&str, SupportPattern)>> = BTreeMap::new();
    for (id, row) in &rows {
        by_type.entry(row.type_label.as_str()).or_default().push((id.as_str(), row.pattern));
    }
    let mut types: Vec<&str> = by_type.keys().copied().collect();
    types.sort_by_key(|t| (t.parse::<u64>().unwrap_or(u64::MAX), t.to_string()));
    for t in &types {
        let members = &by_type[t];
        if members.len() < 2 {
            continue;
        }
        let prints: BTreeSet<_> = members.iter().map(|(_, p)| p.fingerprint()).collect();
        let detail = format!("{} rows, {} distinct fingerprints", members.len(), prints.len());
        items.push(format!("case:{case}:collision:{t}"), prints.len() == 1, detail);
    }
    let mut separated = true;
    for (a, ta) in types.iter().enumerate() {
        for tb in &types[a + 1..] {
            let pa: BTreeSet<_> = by_type[ta].iter().map(|(_, p)| p.fingerprint()).collect();
            let shared = by_type[tb].iter().find(|(_, p)| pa.contains(&p.fingerprint()));
            if let Some((id, _)) = shared {
                separated = false;
                items.push(format!("case:{case}:separation:{ta}-{tb}"), false, format!("{id} has the fingerprint of a Type {ta} row"));
            }
        }
    }
    if separated {
        items.push(format!("case:{case}:separation"), true, "distinct types have distinct fingerprints");
    }

    let classes: BTreeSet<_> = rows.iter().map(|(_, r)| r.pattern.fingerprint()).collect();
    if let Some(stated) = stated {
        let detail = format!("{} printed types, {} fingerprint classes, stated {stated}", types.len(), classes.len());
        items.push(format!("case:{case}:count"), classes.len() == stated, detail);
    }

    let s4 = PermSubgroup::symmetric(super::corpus::CORPUS_DIM);
    let printed: BTreeSet<SupportPattern> = rows.iter().map(|(_, r)| r.pattern.canonical(&s4)).collect();
    let expected: BTreeSet<SupportPattern> = condition_323_patterns().iter().map(|p| p.canonical(&s4)).collect();
    let detail = format!(
        "{} rows in {} orbits; enumeration has {} orbits, {} missing, {} unexpected",
        rows.len(),
        printed.len(),
        expected.len(),
        expected.difference(&printed).count(),
        printed.difference(&expected).count()
    );
    items.push(format!("case:{case}:rows"), printed == expected, detail);
}

/// Runs every check; allowlisted failures become warnings.
pub fn verify_tables(corpus: &Corpus) -> Report {
    let en = Enumerations::new(corpus);
    let mut items = Items(Vec::new());
    for fig in &corpus.figures {
        if let FigureBody::Paired { role, pairing, rows } = &fig.body {
            verify_paired(&mut items, fig, pairing, *role, rows, &en);
        }
    }
    for case in corpus.cases() {
        verify_case_rows(&mut items, corpus, case, &en);
    }
    verify_grid_case(&mut items, corpus);
    verify_fingerprints(&mut items, corpus);

    let mut items = items.0;
    let mut used = BTreeSet::new();
    for item in &mut items {
        if let Some(why) = corpus.errata.justification(&item.id) {
            if item.status == Status::Fail {
                item.status = Status::Warn;
                item.erratum = Some(why.to_owned());
                used.insert(item.id.clone());
            }
        }
    }
    let unused_errata = corpus.errata.entries.keys().filter(|id| !used.contains(*id)).cloned().collect();
    Report { items, unused_errata }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::corpus::{default_corpus_dir, Errata};

    fn template(rows: &str) -> PatternTemplate {
        PatternTemplate::parse(rows).unwrap()
    }

    #[test]
    fn primes_are_distinct_per_name() {
        let a = template("dim 2\nw11 b\n0 w22\n");
        let b = template("dim 2\nw22 0\nb w11\n");
        let p = prime_assignment(&[&a, &b]);
        assert_eq!(p.len(), 3);
        assert_eq!(p.values().copied().collect::<BTreeSet<_>>(), BTreeSet::from([2, 3, 5]));
    }

    #[test]
    fn instance_check_follows_the_pairing() {
        let row = PairedRow {
            id: "r01".into(),
            left: template("dim 2\na 1\n0 b\n"),
            right: template("dim 2\nb 0\n1 a\n"),
        };
        let swap = Permutation::from_cycles("(1,2)", 2).unwrap();
        assert_eq!(pairing_permutation(&Pairing::Fixed(swap.clone()), &PermSubgroup::symmetric(2), &row.left.support(), &row.right.support()), Some(swap.clone()));
        let (ok, detail) = check_instance(&row, Some(&swap));
        assert!(ok, "{detail}");
        assert!(detail.contains("exactly"));
        // the supports still pair up, but no scaling matches the parameters
        let bad = PairedRow { right: template("dim 2\nb 0\n1 b\n"), ..row };
        let (ok, detail) = check_instance(&bad, Some(&swap));
        assert!(!ok, "{detail}");
    }

    #[test]
    fn shipped_corpus_is_clean_modulo_errata() {
        let corpus = Corpus::load(&default_corpus_dir()).unwrap();
        let report = verify_tables(&corpus);
        let fails: Vec<String> = report.failures().map(|i| format!("{}: {}", i.id, i.detail)).collect();
        assert!(fails.is_empty(), "{}", fails.join("\n"));
        assert!(report.unused_errata.is_empty(), "{:?}", report.unused_errata);
    }

    #[test]
    fn allowlist_turns_fail_into_warn() {
        let mut corpus = Corpus::load(&default_corpus_dir()).unwrap();
        corpus.figures.retain(|f| f.name == "c3.1-t1");
        if let FigureBody::Paired { rows, .. } = &mut corpus.figures[0].body {
            let (head, tail) = rows.split_at_mut(1);
            std::mem::swap(&mut head[0].left, &mut tail[0].left);
        }
        corpus.errata = Errata::parse("c3.1-t1/r01:pattern injected\nnot/an:item unused\n");
        let report = verify_tables(&corpus);
        assert_eq!(report.item("c3.1-t1/r01:pattern").map(|i| i.status), Some(Status::Warn));
        assert_eq!(report.item("c3.1-t1/r02:pattern").map(|i| i.status), Some(Status::Fail));
        assert_eq!(report.unused_errata, vec!["not/an:item".to_owned()]);
    }
}
