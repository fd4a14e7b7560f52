//! Acceptance criteria 1-12. Runs without the libtest harness so every
//! criterion prints exactly one line; exits nonzero if any is red.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evoalg::classify::corpus::{default_corpus_dir, Corpus, FigureBody, Pairing, PairedRow};
use evoalg::classify::verify::{verify_tables, Report, Status};
use evoalg::classify::{classify_condition_323, classify_dim2_perfect, classify_label, GridCell, GridLabel, GRID_COLUMNS};
use evoalg::field::{Field, PrimeField, Rationals};
use evoalg::format::{MatrixFile, PatternTemplate};
use evoalg::ideals::{has_complementary_ideal_pair, has_exchangeable_index, is_basic_simple, maximal_basic_ideals};
use evoalg::isotest::{find_isomorphism, verify_isomorphism};
use evoalg::matrix::mul;
use evoalg::{EvolutionAlgebra, MonomialMap, PermSubgroup, Permutation, SupportPattern};

const P: u64 = 10007;
const SEED: u64 = 0x5eed_ac0e;

type Gf = PrimeField;
type Map = MonomialMap<<Gf as Field>::Elem>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn gf() -> Gf {
    PrimeField::new(P).expect("10007 is prime")
}

fn corpus_dir() -> PathBuf {
    std::env::var_os("EVOALG_CORPUS").map_or_else(default_corpus_dir, PathBuf::from)
}

fn random_algebra(rng: &mut ChaCha8Rng, n: usize, zero_rate: f64) -> EvolutionAlgebra<Gf> {
    let f = gf();
    let rows = (0..n)
        .map(|_| (0..n).map(|_| if rng.gen_bool(zero_rate) { f.zero() } else { f.random_nonzero(rng) }).collect())
        .collect();
    EvolutionAlgebra::from_rows(f, rows).expect("square")
}

fn random_perfect(rng: &mut ChaCha8Rng, n: usize) -> EvolutionAlgebra<Gf> {
    loop {
        let a = random_algebra(rng, n, 0.4);
        if a.is_perfect() {
            return a;
        }
    }
}

fn random_map(rng: &mut ChaCha8Rng, n: usize) -> Map {
    let f = gf();
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    let scales = (0..n).map(|_| f.random_nonzero(rng)).collect();
    MonomialMap::new(&f, Permutation::from_images(images).expect("shuffle"), scales).expect("nonzero scales")
}

fn read_matrix(name: &str) -> EvolutionAlgebra<Rationals> {
    let path = corpus_dir().join("examples").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    MatrixFile::parse(&text).and_then(|m| m.to_algebra(Rationals)).expect("example parses")
}

fn c01_monomial_pair() -> Outcome {
    let m = read_matrix("monomial-pair-a.mat");
    let target = read_matrix("monomial-pair-b.mat");
    let sigma = Permutation::from_cycles("(1,2,4,3)", 4).expect("cycle");
    let start = Instant::now();
    let image = m.apply_monomial(&MonomialMap::permutation(&Rationals, sigma)).expect("dimensions agree");
    let took = start.elapsed();
    let ok = image == target && took < Duration::from_millis(1);
    Outcome::new(ok, format!("I_(1,2,4,3) . M {} M' exactly, {took:?}", if image == target { "equals" } else { "differs from" }))
}

fn c02_action_invariants() -> Outcome {
    let f = gf();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for k in 0..1000 {
        let n = rng.gen_range(1..=5);
        let a = random_algebra(&mut rng, n, 0.35);
        let p = random_map(&mut rng, n);
        let q = random_map(&mut rng, n);
        let b = a.apply_monomial(&p).expect("dims");
        let invariants = b.zero_count() == a.zero_count() && b.diag_zero_count() == a.diag_zero_count() && b.rank() == a.rank();
        let pq = p.compose(&q, &f);
        let composes = a.apply_monomial(&pq).expect("dims") == a.apply_monomial(&q).and_then(|x| x.apply_monomial(&p)).expect("dims")
            && pq.to_matrix(&f) == mul(&f, &q.to_matrix(&f), &p.to_matrix(&f)).expect("dims");
        if !(invariants && composes) {
            bad.push(k);
        }
    }
    Outcome::new(bad.is_empty(), format!("1000 pairs over GF({P}), {} violations {bad:?}", bad.len()))
}

fn c03_basic_simple_exhaustive() -> Outcome {
    let mut simple = 0;
    let mut bad = 0;
    for bits in 0u32..1 << 16 {
        let p = SupportPattern::from_fn(4, |k, i| bits >> (4 * k + i) & 1 == 1).expect("dim 4");
        let by_reach = is_basic_simple(&p);
        let by_graph = p.graph().is_strongly_connected();
        let by_closed_sets = maximal_basic_ideals(&p).is_basic_simple;
        simple += usize::from(by_graph);
        bad += usize::from(by_reach != by_graph || by_closed_sets != by_graph);
    }
    Outcome::new(bad == 0, format!("65536 patterns, {simple} strongly connected, {bad} disagreements"))
}

fn c04_quotients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bad = 0;
    let mut quotients = 0;
    let mut found = 0;
    while found < 500 {
        let a = random_perfect(&mut rng, 4);
        let report = maximal_basic_ideals(&a.support());
        let Some(d) = report.maximal_dimension() else { continue };
        found += 1;
        *by_dim.entry(d).or_default() += 1;
        for ideal in report.maximal_basic_ideals {
            let q = a.quotient(ideal).expect("closed set");
            quotients += 1;
            bad += usize::from(!(q.is_perfect() && is_basic_simple(&q.support())));
        }
    }
    let covered = (1..=3).all(|d| by_dim.contains_key(&d));
    Outcome::new(bad == 0 && covered, format!("500 algebras by ideal dimension {by_dim:?}, {quotients} quotients, {bad} not perfect and basic simple"))
}

fn c05_observation() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for bits in 0u32..1 << 12 {
        // Rows 1-3 free, last row (0 0 0 1).
        let p = SupportPattern::from_fn(4, |k, i| if k == 3 { i == 3 } else { bits >> (4 * k + i) & 1 == 1 }).expect("dim 4");
        let left = has_exchangeable_index(&p).expect("last-column form");
        let right = has_complementary_ideal_pair(&p).expect("last-column form");
        checked += 1;
        if left != right {
            bad.push(p);
        }
    }
    let first = bad.first().map_or(String::new(), |p| format!(", first {}", p.row_strings().join(" ")));
    Outcome::new(bad.is_empty(), format!("{checked} patterns, {} exceptions{first}", bad.len()))
}

fn c06_grid(corpus: &Corpus, report: &Report) -> Outcome {
    let mut stars = Vec::new();
    let mut cells = 0;
    for fig in &corpus.figures {
        if let FigureBody::Grid { rows, .. } = &fig.body {
            let mut s = 0;
            for row in rows {
                for c in 0..GRID_COLUMNS.len() {
                    s += usize::from(GridCell::new(&row.w, c).expect("grid row").label == GridLabel::IrreducibleStar);
                    cells += 1;
                }
            }
            stars.push(s);
        }
    }
    let labels: Vec<_> = report.items.iter().filter(|i| i.id.starts_with("grid-") && i.id.ends_with(":labels")).collect();
    let failed = labels.iter().filter(|i| i.status == Status::Fail).count();
    let warned = labels.iter().filter(|i| i.status == Status::Warn).count();
    let ok = cells == 196 && failed == 0 && stars == [37, 56];
    Outcome::new(ok, format!("{cells} cells, {failed} label rows wrong, {warned} allowlisted, stars {stars:?} (sum {})", stars.iter().sum::<usize>()))
}

fn c07_fingerprints(report: &Report) -> Outcome {
    let rows: Vec<_> = report.items.iter().filter(|i| i.id.ends_with(":fingerprint")).collect();
    let rows_bad = rows.iter().filter(|i| i.status == Status::Fail).count();
    let rows_warned = rows.iter().filter(|i| i.status == Status::Warn).count();
    let collide_bad = report.with_prefix("case:5.1.1:collision:").filter(|i| i.status != Status::Pass).count();
    let classes = classify_condition_323();
    let ok = rows_bad == 0 && collide_bad == 0 && classes.count() == 24;
    Outcome::new(
        ok,
        format!(
            "{} rows, {rows_bad} mismatched, {rows_warned} allowlisted, {collide_bad} types not colliding, {} distinct types (need 24) from {} patterns in {} orbits",
            rows.len(),
            classes.count(),
            classes.patterns.len(),
            classes.orbit_count
        ),
    )
}

fn c08_two_dim_counts() -> Outcome {
    let expected = [[4, 10, 4, 3], [8, 14, 8, 3], [4, 10, 4, 3], [4, 10, 4, 3], [8, 14, 8, 3]];
    let mut wrong = Vec::new();
    for (k, counts) in expected.iter().enumerate() {
        for (j, &want) in counts.iter().enumerate() {
            let label = format!("4.{}.{}", k + 1, j + 1);
            let got = classify_label(&label).map(|c| c.count());
            if got.as_ref().ok() != Some(&want) {
                wrong.push(format!("{label}: {got:?} want {want}"));
            }
        }
    }
    Outcome::new(wrong.is_empty(), format!("20 cases, {} wrong {}", wrong.len(), wrong.join("; ")))
}

fn c09_dim2() -> Outcome {
    let set = classify_dim2_perfect();
    let s2 = PermSubgroup::symmetric(2);
    let gamma: BTreeSet<SupportPattern> = [["10", "01"], ["10", "11"], ["11", "11"], ["01", "10"], ["01", "11"]]
        .iter()
        .map(|rows| SupportPattern::parse_rows(rows).expect("literal").canonical(&s2))
        .collect();
    let got: BTreeSet<SupportPattern> = set.representatives().map(|p| p.canonical(&s2)).collect();
    Outcome::new(set.count() == 5 && got == gamma, format!("{} orbits, {} match the five listed shapes", set.count(), got.intersection(&gamma).count()))
}

/// Distinct primes per parameter name on the left; the right side takes
/// the values its pattern binds to on the relabeled image, or the same
/// primes by name if it does not bind.
fn prime_instances(row: &PairedRow, sigma: &Permutation) -> Option<(EvolutionAlgebra<Rationals>, EvolutionAlgebra<Rationals>)> {
    let q = Rationals;
    let names: BTreeSet<String> = row.left.parameters().into_iter().chain(row.right.parameters()).collect();
    let primes: BTreeMap<String, i64> = names.into_iter().zip((2i64..).filter(|&k| (2..k).all(|d| k % d != 0))).collect();
    let left = row.left.instantiate(q, |name| primes.get(name).map(|&v| q.from_i64(v))).ok()?;
    let image = left.apply_monomial(&MonomialMap::permutation(&q, sigma.inverse())).ok()?;
    let right = match row.right.bind(&image) {
        Some(values) => instantiate_with(&row.right, &values)?,
        None => row.right.instantiate(q, |name| primes.get(name).map(|&v| q.from_i64(v))).ok()?,
    };
    Some((left, right))
}

fn instantiate_with(t: &PatternTemplate, values: &BTreeMap<String, <Rationals as Field>::Elem>) -> Option<EvolutionAlgebra<Rationals>> {
    t.instantiate(Rationals, |name| values.get(name).cloned()).ok()
}

fn c10_pairings(corpus: &Corpus, report: &Report) -> Outcome {
    let patterns: Vec<_> = report.items.iter().filter(|i| i.id.ends_with(":pattern")).collect();
    let failed = patterns.iter().filter(|i| i.status == Status::Fail).count();
    let warned = patterns.iter().filter(|i| i.status == Status::Warn).count();

    let mut candidates = Vec::new();
    for fig in &corpus.figures {
        if let FigureBody::Paired { pairing: Pairing::Fixed(sigma), rows, .. } = &fig.body {
            for row in rows {
                let id = format!("{}/{}:instance", fig.name, row.id);
                if corpus.errata.justification(&id).is_none() {
                    candidates.push((id, row, sigma));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let sample: Vec<_> = candidates.choose_multiple(&mut rng, 50).collect();
    let mut iso_bad = Vec::new();
    for (id, row, sigma) in &sample {
        let verified = prime_instances(row, sigma).is_some_and(|(l, r)| match find_isomorphism(&l, &r) {
            Ok(outcome) => outcome.map().is_some_and(|m| verify_isomorphism(m, &l, &r)),
            Err(_) => false,
        });
        if !verified {
            iso_bad.push(id.as_str());
        }
    }
    let ok = !patterns.is_empty() && failed == 0 && sample.len() == 50 && iso_bad.is_empty();
    Outcome::new(
        ok,
        format!(
            "{} pattern checks, {failed} failed, {warned} allowlisted; {} sampled instances, {} not verified {iso_bad:?}",
            patterns.len(),
            sample.len(),
            iso_bad.len()
        ),
    )
}

fn c11_oracle_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let mut bad = Vec::new();
    for k in 0..500 {
        let n = rng.gen_range(1..=5);
        let m = random_perfect(&mut rng, n);
        let target = m.apply_monomial(&random_map(&mut rng, n)).expect("dims");
        let ok = match find_isomorphism(&m, &target) {
            Ok(outcome) => outcome.map().is_some_and(|map| m.apply_monomial(map).is_ok_and(|img| img == target)),
            Err(_) => false,
        };
        if !ok {
            bad.push(k);
        }
    }
    Outcome::new(bad.is_empty(), format!("500 pairs over GF({P}), {} failures {bad:?}", bad.len()))
}

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Duration,
    outcome: Outcome,
    took: Duration,
}

fn timed(number: u32, name: &'static str, limit_secs: u64, f: impl FnOnce() -> Outcome) -> Criterion {
    let start = Instant::now();
    let outcome = f();
    Criterion { number, name, limit: Duration::from_secs(limit_secs), outcome, took: start.elapsed() }
}

fn seeded_digest() -> String {
    [c02_action_invariants(), c04_quotients(), c11_oracle_round_trip()].iter().map(|o| o.detail.clone()).collect::<Vec<_>>().join("|")
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = match Corpus::load(&corpus_dir()) {
        Ok(c) => c,
        Err(e) => {
            println!("cannot load corpus: {e}");
            return ExitCode::FAILURE;
        }
    };
    let report = verify_tables(&corpus);

    let mut results = vec![
        timed(1, "monomial pair identity", 1, c01_monomial_pair),
        timed(2, "action invariants", 10, c02_action_invariants),
        timed(3, "basic simple iff strongly connected", 30, c03_basic_simple_exhaustive),
        timed(4, "maximal ideal quotients", 30, c04_quotients),
        timed(5, "exchangeable index iff complementary ideals", 60, c05_observation),
        timed(6, "grid labels and stars", 10, || c06_grid(&corpus, &report)),
        timed(7, "condition (3,2,3) fingerprints", 5, || c07_fingerprints(&report)),
        timed(8, "two-dimensional ideal family counts", 30, c08_two_dim_counts),
        timed(9, "dimension two", 10, c09_dim2),
        timed(10, "table pairings", 60, || c10_pairings(&corpus, &report)),
        timed(11, "isomorphism oracle round trip", 60, c11_oracle_round_trip),
    ];
    let first = results.iter().map(|c| c.outcome.detail.clone()).collect::<Vec<_>>();
    let repeat = seeded_digest();
    let deterministic = repeat == [&first[1], &first[3], &first[10]].map(String::as_str).join("|");
    let total = start.elapsed();
    results.push(Criterion {
        number: 12,
        name: "whole suite",
        limit: Duration::from_secs(300),
        outcome: Outcome::new(deterministic, format!("{} on rerun with fixed seeds", if deterministic { "identical" } else { "different" })),
        took: total,
    });

    let mut red = 0;
    for c in &results {
        let pass = c.outcome.pass && c.took <= c.limit;
        red += usize::from(!pass);
        let over = if c.took > c.limit { format!(", over the {:?} limit", c.limit) } else { String::new() };
        println!(
            "criterion {:>2} {}  {}  [{:.2?}{over}]  {}",
            c.number,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            c.took,
            c.outcome.detail
        );
    }
    println!("{} of {} criteria pass", results.len() - red, results.len());
    if red == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
