//! The bundled table corpus: one directory per figure holding a `manifest`
//! of `key = value` lines and the figure's patterns, plus an errata allowlist.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{GridLabel, GRID_COLUMNS};
use crate::format::{FormatError, PatternTemplate};
use crate::graph::DirectedGraph;
use crate::pattern::SupportPattern;
use crate::perm::{PermSubgroup, Permutation};

pub const MANIFEST_FILE: &str = "manifest";
pub const ERRATA_FILE: &str = "errata.txt";
/// Every table in the corpus lists four-dimensional patterns.
pub const CORPUS_DIM: usize = 4;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Pattern { path: PathBuf, source: FormatError },
    #[error("no figures found under {0}")]
    Empty(PathBuf),
}

/// `EVOALG_CORPUS` if set, else the corpus shipped with the workspace.
pub fn default_corpus_dir() -> PathBuf {
    std::env::var_os("EVOALG_CORPUS")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Each row is a family; rows should be pairwise inequivalent.
    Families,
    /// Rows only record identifications between members of a case.
    Identifications,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pairing {
    Fixed(Permutation),
    /// No permutation is printed; any element of the figure's group may do.
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedRow {
    pub id: String,
    pub left: PatternTemplate,
    pub right: PatternTemplate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListRow {
    pub id: String,
    pub template: PatternTemplate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRow {
    pub id: String,
    pub w: SupportPattern,
    /// Printed label for each grid column.
    pub labels: Vec<GridLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FingerprintRow {
    pub id: String,
    pub pattern: SupportPattern,
    pub zeros: usize,
    pub diag_zeros: usize,
    /// Printed `(out, in)` degrees in basis order.
    pub degrees: Vec<(usize, usize)>,
    pub graph: DirectedGraph,
    pub type_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FigureBody {
    Paired { role: Role, pairing: Pairing, rows: Vec<PairedRow> },
    List { rows: Vec<ListRow> },
    Grid { stated_stars: Option<usize>, stated_total_stars: Option<usize>, rows: Vec<GridRow> },
    Fingerprints { stated_types: Option<usize>, rows: Vec<FingerprintRow> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Figure {
    pub name: String,
    pub case: String,
    pub group: PermSubgroup,
    pub body: FigureBody,
}

impl Figure {
    /// Whether the figure's rows count as families of its case.
    pub fn lists_families(&self) -> bool {
        matches!(self.body, FigureBody::List { .. } | FigureBody::Paired { role: Role::Families, .. })
    }

    /// `(row id, pattern)` for every family row, left side for paired rows.
    pub fn family_rows(&self) -> Vec<(&str, SupportPattern)> {
        match &self.body {
            FigureBody::Paired { role: Role::Families, rows, .. } => rows.iter().map(|r| (r.id.as_str(), r.left.support())).collect(),
            FigureBody::List { rows } => rows.iter().map(|r| (r.id.as_str(), r.template.support())).collect(),
            _ => Vec::new(),
        }
    }
}

/// Known table slips: item id to a one-line justification.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Errata {
    pub entries: BTreeMap<String, String>,
}

impl Errata {
    /// One `item-id justification` per line; `#` lines and blank lines are skipped.
    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| match l.split_once(char::is_whitespace) {
                Some((id, why)) => (id.to_owned(), why.trim().to_owned()),
                None => (l.to_owned(), String::new()),
            })
            .collect();
        Errata { entries }
    }

    pub fn justification(&self, id: &str) -> Option<&str> {
        self.entries.get(id).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub root: PathBuf,
    pub figures: Vec<Figure>,
    pub errata: Errata,
}

/// Orders `c5.2.1-t2` before `c5.2.1-t10`.
fn natural_key(name: &str) -> Vec<(u64, String)> {
    let mut key = Vec::new();
    let mut rest = name;
    while !rest.is_empty() {
        let digits = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if digits > 0 {
            key.push((rest[..digits].parse().unwrap_or(u64::MAX), String::new()));
            rest = &rest[digits..];
        } else {
            let text = rest.find(|c: char| c.is_ascii_digit()).unwrap_or(rest.len());
            key.push((0, rest[..text].to_owned()));
            rest = &rest[text..];
        }
    }
    key
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_owned(), source })
}

struct Manifest {
    path: PathBuf,
    values: BTreeMap<String, String>,
}

impl Manifest {
    fn parse(path: PathBuf, text: &str) -> Result<Self, CorpusError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CorpusError::Manifest { path, message: format!("line {}: expected `key = value`", n + 1) });
            };
            values.insert(k.trim().to_owned(), v.trim().to_owned());
        }
        Ok(Manifest { path, values })
    }

    fn error(&self, message: String) -> CorpusError {
        CorpusError::Manifest { path: self.path.clone(), message }
    }

    fn get(&self, key: &str) -> Result<&str, CorpusError> {
        self.values.get(key).map(String::as_str).ok_or_else(|| self.error(format!("missing key `{key}`")))
    }

    fn number(&self, key: &str) -> Result<usize, CorpusError> {
        let v = self.get(key)?;
        v.parse().map_err(|_| self.error(format!("`{key}` is not a number: `{v}`")))
    }

    fn optional_number(&self, key: &str) -> Result<Option<usize>, CorpusError> {
        match self.values.contains_key(key) {
            true => self.number(key).map(Some),
            false => Ok(None),
        }
    }
}

/// `all` or `fix i j ...` with 1-based points.
pub fn parse_group(text: &str, n: usize) -> Option<PermSubgroup> {
    let mut words = text.split_whitespace();
    match words.next()? {
        "all" if words.next().is_none() => Some(PermSubgroup::symmetric(n)),
        "fix" => {
            let points = words
                .map(|w| w.parse::<usize>().ok().filter(|&p| (1..=n).contains(&p)).map(|p| p - 1))
                .collect::<Option<Vec<_>>>()?;
            Some(PermSubgroup::fixing(n, &points))
        }
        _ => None,
    }
}

pub fn parse_pairing(text: &str, n: usize) -> Option<Pairing> {
    match text {
        "any" => Some(Pairing::Any),
        _ => Permutation::from_cycles(text, n).ok().map(Pairing::Fixed),
    }
}

fn parse_degrees(text: &str) -> Option<Vec<(usize, usize)>> {
    let body = text.trim().strip_prefix('(')?.strip_suffix(')')?;
    body.split(")(")
        .map(|pair| {
            let (a, b) = pair.split_once(',')?;
            Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
        })
        .collect()
}

fn row_ids(m: &Manifest) -> Result<Vec<String>, CorpusError> {
    Ok((1..=m.number("rows")?).map(|r| format!("r{r:02}")).collect())
}

fn load_template(path: PathBuf) -> Result<PatternTemplate, CorpusError> {
    let text = read(&path)?;
    PatternTemplate::parse(&text).map_err(|source| CorpusError::Pattern { path, source })
}

fn load_figure(dir: &Path, name: String) -> Result<Figure, CorpusError> {
    let m = Manifest::parse(dir.join(MANIFEST_FILE), &read(&dir.join(MANIFEST_FILE))?)?;
    let case = m.get("case")?.to_owned();
    let group = parse_group(m.get("group")?, CORPUS_DIM).ok_or_else(|| m.error(format!("bad group `{}`", m.values["group"])))?;
    let ids = row_ids(&m)?;
    let body = match m.get("kind")? {
        "paired" => {
            let role = match m.get("role")? {
                "families" => Role::Families,
                "identifications" => Role::Identifications,
                other => return Err(m.error(format!("unknown role `{other}`"))),
            };
            let text = m.get("pairing")?;
            let pairing = parse_pairing(text, CORPUS_DIM).ok_or_else(|| m.error(format!("bad pairing `{text}`")))?;
            let rows = ids
                .into_iter()
                .map(|id| {
                    let left = load_template(dir.join(format!("{id}a.pat")))?;
                    let right = load_template(dir.join(format!("{id}b.pat")))?;
                    Ok(PairedRow { id, left, right })
                })
                .collect::<Result<_, CorpusError>>()?;
            FigureBody::Paired { role, pairing, rows }
        }
        "list" => {
            let rows = ids
                .into_iter()
                .map(|id| Ok(ListRow { template: load_template(dir.join(format!("{id}.pat")))?, id }))
                .collect::<Result<_, CorpusError>>()?;
            FigureBody::List { rows }
        }
        "grid" => {
            let columns: Vec<&str> = m.get("columns")?.split_whitespace().collect();
            let expected: Vec<String> = GRID_COLUMNS.iter().map(|c| super::column_name(c)).collect();
            if columns != expected {
                return Err(m.error(format!("grid columns must be {}", expected.join(" "))));
            }
            let rows = ids
                .into_iter()
                .map(|id| {
                    let w = load_template(dir.join(format!("{id}.pat")))?.support();
                    let text = m.get(&format!("cells.{id}"))?;
                    let labels = text
                        .split_whitespace()
                        .map(GridLabel::from_short)
                        .collect::<Option<Vec<_>>>()
                        .filter(|l| l.len() == GRID_COLUMNS.len())
                        .ok_or_else(|| m.error(format!("bad cell labels for {id}: `{text}`")))?;
                    Ok(GridRow { id, w, labels })
                })
                .collect::<Result<_, CorpusError>>()?;
            FigureBody::Grid {
                stated_stars: m.optional_number("stated_stars")?,
                stated_total_stars: m.optional_number("stated_total_stars")?,
                rows,
            }
        }
        "fingerprints" => {
            let rows = ids
                .into_iter()
                .map(|id| {
                    let pattern = load_template(dir.join(format!("{id}.pat")))?.support();
                    let degrees_text = m.get(&format!("degrees.{id}"))?;
                    let degrees = parse_degrees(degrees_text).ok_or_else(|| m.error(format!("bad degrees for {id}")))?;
                    let graph_rows: Vec<&str> = m.get(&format!("graph.{id}"))?.split_whitespace().collect();
                    let graph = DirectedGraph::parse_rows(&graph_rows).map_err(|e| m.error(format!("bad graph for {id}: {e}")))?;
                    Ok(FingerprintRow {
                        zeros: m.number(&format!("zeros.{id}"))?,
                        diag_zeros: m.number(&format!("diag_zeros.{id}"))?,
                        type_label: m.get(&format!("type.{id}"))?.to_owned(),
                        id,
                        pattern,
                        degrees,
                        graph,
                    })
                })
                .collect::<Result<_, CorpusError>>()?;
            FigureBody::Fingerprints { stated_types: m.optional_number("stated_types")?, rows }
        }
        other => return Err(m.error(format!("unknown kind `{other}`"))),
    };
    Ok(Figure { name, case, group, body })
}

impl Corpus {
    /// Loads every subdirectory that has a manifest, in natural name order.
    pub fn load(root: &Path) -> Result<Self, CorpusError> {
        let entries = fs::read_dir(root).map_err(|source| CorpusError::Io { path: root.to_owned(), source })?;
        let mut dirs = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|source| CorpusError::Io { path: root.to_owned(), source })?;
            let path = entry.path();
            if path.join(MANIFEST_FILE).is_file() {
                dirs.push((entry.file_name().to_string_lossy().into_owned(), path));
            }
        }
        if dirs.is_empty() {
            return Err(CorpusError::Empty(root.to_owned()));
        }
        dirs.sort_by_cached_key(|(name, _)| natural_key(name));
        let figures = dirs.into_iter().map(|(name, path)| load_figure(&path, name)).collect::<Result<_, _>>()?;
        let errata_path = root.join(ERRATA_FILE);
        let errata = match errata_path.is_file() {
            true => Errata::parse(&read(&errata_path)?),
            false => Errata::default(),
        };
        Ok(Corpus { root: root.to_owned(), figures, errata })
    }

    pub fn cases(&self) -> BTreeSet<&str> {
        self.figures.iter().map(|f| f.case.as_str()).collect()
    }

    pub fn figures_of<'a>(&'a self, case: &'a str) -> impl Iterator<Item = &'a Figure> + 'a {
        self.figures.iter().filter(move |f| f.case == case)
    }

    /// Canonical forms under `group` of every family row of the given cases.
    pub fn case_orbits(&self, cases: &[String], group: &PermSubgroup) -> BTreeSet<SupportPattern> {
        self.figures
            .iter()
            .filter(|f| cases.contains(&f.case))
            .flat_map(|f| f.family_rows())
            .map(|(_, p)| p.canonical(group))
            .collect()
    }
}
