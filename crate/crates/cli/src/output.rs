use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use evoalg::classify::verify::{Report, Status};
use evoalg::classify::{column_name, Classification, GRID_COLUMNS};
use evoalg::field::Field;
use evoalg::isotest::IsoOutcome;
use evoalg::SupportPattern;

pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report types serialize"));
}

fn one_line(p: &SupportPattern) -> String {
    p.row_strings().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedCheck {
    /// `stated`, `tables` or `none`.
    pub against: &'static str,
    pub computed: Option<usize>,
    pub expected: Option<usize>,
    pub matches: Option<bool>,
    /// Orbits enumerated but absent from the tables.
    pub missing: Vec<SupportPattern>,
    /// Orbits in the tables but not enumerated.
    pub unexpected: Vec<SupportPattern>,
}

impl ExpectedCheck {
    pub fn stated(computed: usize, stated: usize) -> Self {
        ExpectedCheck {
            against: "stated",
            computed: Some(computed),
            expected: Some(stated),
            matches: Some(computed == stated),
            missing: Vec::new(),
            unexpected: Vec::new(),
        }
    }

    pub fn tables(enumerated: BTreeSet<SupportPattern>, printed: BTreeSet<SupportPattern>) -> Self {
        let missing: Vec<_> = enumerated.difference(&printed).copied().collect();
        let unexpected: Vec<_> = printed.difference(&enumerated).copied().collect();
        ExpectedCheck {
            against: "tables",
            computed: Some(enumerated.len()),
            expected: Some(printed.len()),
            matches: Some(missing.is_empty() && unexpected.is_empty()),
            missing,
            unexpected,
        }
    }

    pub fn none() -> Self {
        ExpectedCheck { against: "none", computed: None, expected: None, matches: None, missing: Vec::new(), unexpected: Vec::new() }
    }
}

#[derive(Serialize)]
struct ClassifyJson<'a> {
    count: usize,
    stated_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<&'a ExpectedCheck>,
    classification: &'a Classification,
}

pub fn print_classification(c: &Classification, check: Option<&ExpectedCheck>, json: bool) {
    if json {
        print_json(&ClassifyJson { count: c.count(), stated_count: c.stated_count(), expected: check, classification: c });
        return;
    }
    match c {
        Classification::Families(set) => {
            println!("case {}: {}", set.label, set.title);
            println!("raw patterns: {}", set.raw_patterns);
            for (k, fam) in set.families.iter().enumerate() {
                let note = fam.anomaly.as_ref().map_or(String::new(), |a| format!("  [{a}]"));
                println!("{:>3}. {}{note}", k + 1, one_line(&fam.representative));
            }
            println!("families: {}", set.count());
        }
        Classification::Grid(grid) => {
            let header: Vec<String> = GRID_COLUMNS.iter().map(|c| format!("{:<3}", column_name(c))).collect();
            println!("{:<12} {}", "W", header.join(" "));
            for row in grid.cells.chunks(GRID_COLUMNS.len()) {
                let labels: Vec<String> = row.iter().map(|c| format!("{:<3}", c.label.short())).collect();
                println!("{:<12} {}", one_line(&row[0].w), labels.join(" ").trim_end());
            }
            println!("starred cells: {}", grid.stars);
            println!("star/exchangeability disagreements: {}", grid.disagreements().count());
        }
        Classification::Fingerprints(fp) => {
            let mut sizes = vec![0usize; fp.classes.len()];
            for &k in &fp.class_of {
                sizes[k] += 1;
            }
            for (k, (print, size)) in fp.classes.iter().zip(&sizes).enumerate() {
                let degrees: Vec<String> = print.degree_multiset.iter().map(|(o, i)| format!("({o},{i})")).collect();
                println!(
                    "{:>3}. zeros {} diagonal {} degrees {} graph {}  ({size} patterns)",
                    k + 1,
                    print.zero_count,
                    print.diag_zero_count,
                    degrees.join(""),
                    print.graph_class.to_string().replace('\n', " ")
                );
            }
            println!("patterns: {} in {} orbits", fp.patterns.len(), fp.orbit_count);
            println!("fingerprint classes: {}", fp.count());
        }
    }
    if let Some(stated) = c.stated_count() {
        println!("stated: {stated}");
    }
    if let Some(check) = check {
        match (check.against, check.matches) {
            ("none", _) => println!("expected: no stated count"),
            ("stated", Some(ok)) => println!("expected: {}", if ok { "match" } else { "MISMATCH" }),
            (_, ok) => {
                println!("expected: {} against the bundled tables", if ok == Some(true) { "match" } else { "MISMATCH" });
                for p in &check.missing {
                    println!("  missing from tables: {}", one_line(p));
                }
                for p in &check.unexpected {
                    println!("  not enumerated: {}", one_line(p));
                }
            }
        }
    }
}

#[derive(Serialize)]
struct IsoJson {
    isomorphic: bool,
    /// `isomorphic`, `support_obstruction` or `no_base_field_scaling`.
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scales: Option<Vec<String>>,
}

pub fn print_iso<F: Field>(outcome: &IsoOutcome<F::Elem>, field: &F, json: bool) {
    let out = match outcome {
        IsoOutcome::Isomorphic { map } => IsoJson {
            isomorphic: true,
            outcome: "isomorphic",
            reason: None,
            sigma: Some(map.sigma.to_string()),
            scales: Some(map.scales.iter().map(|s| field.format(s)).collect()),
        },
        IsoOutcome::SupportObstruction { reason } => IsoJson {
            isomorphic: false,
            outcome: "support_obstruction",
            reason: Some(reason.clone()),
            sigma: None,
            scales: None,
        },
        IsoOutcome::NoBaseFieldScaling => IsoJson {
            isomorphic: false,
            outcome: "no_base_field_scaling",
            reason: Some(format!("supports match but no scaling exists over {}", field.spec())),
            sigma: None,
            scales: None,
        },
    };
    if json {
        print_json(&out);
        return;
    }
    match (&out.sigma, &out.scales, &out.reason) {
        (Some(sigma), Some(scales), _) => {
            println!("isomorphic");
            println!("sigma: {sigma}");
            println!("scales: ({})", scales.join(", "));
        }
        (_, _, Some(reason)) => println!("not isomorphic: {reason}"),
        _ => println!("not isomorphic"),
    }
}

/// `case:3.1:coverage` groups under `case:3.1`, `c3.1-t1/r01:pattern` under `c3.1-t1`.
fn group_of(id: &str) -> &str {
    if let Some(rest) = id.strip_prefix("case:") {
        let end = rest.find(':').map_or(id.len(), |k| k + 5);
        return &id[..end];
    }
    let end = id.find(['/', ':']).unwrap_or(id.len());
    &id[..end]
}

pub fn print_report(report: &Report, json: bool) {
    if json {
        print_json(report);
        return;
    }
    let mut groups: Vec<(&str, Vec<Status>)> = Vec::new();
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for item in &report.items {
        let g = group_of(&item.id);
        let k = *index.entry(g).or_insert_with(|| {
            groups.push((g, Vec::new()));
            groups.len() - 1
        });
        groups[k].1.push(item.status);
    }
    let width = groups.iter().map(|(g, _)| g.len()).max().unwrap_or(0);
    for (g, statuses) in &groups {
        let worst = statuses.iter().max().copied().unwrap_or(Status::Pass);
        println!("{g:<width$}  {worst}  ({} checks)", statuses.len());
    }
    let errata: Vec<_> = report.errata().collect();
    if !errata.is_empty() {
        println!();
        println!("errata (allowlisted):");
        for item in errata {
            println!("  {}: {}", item.id, item.detail);
            println!("    {}", item.erratum.as_deref().unwrap_or(""));
        }
    }
    let failures: Vec<_> = report.failures().collect();
    if !failures.is_empty() {
        println!();
        println!("failures:");
        for item in failures {
            println!("  {}: {}", item.id, item.detail);
        }
    }
    if !report.unused_errata.is_empty() {
        println!();
        println!("allowlisted but not failing: {}", report.unused_errata.join(", "));
    }
    println!();
    println!(
        "summary: {} checks, {} PASS, {} WARN, {} FAIL",
        report.items.len(),
        report.count(Status::Pass),
        report.count(Status::Warn),
        report.count(Status::Fail)
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_groups() {
        assert_eq!(group_of("case:5.1.1:separation:4-16"), "case:5.1.1");
        assert_eq!(group_of("case:grid"), "case:grid");
        assert_eq!(group_of("c3.1-t1/r01:pattern"), "c3.1-t1");
        assert_eq!(group_of("grid-a:stars"), "grid-a");
    }
}
