//! Text formats for structure matrices and support-pattern templates.
//!
//! Matrix files:
//!
//! ```text
//! # comment
//! dim 2 field F7
//! 0 1
//! 3 -1/2
//! ```
//!
//! Pattern files start with `dim <n>`; each cell is `0`, `*` (a free nonzero
//! parameter), a named parameter such as `w24` or `mu`, or a nonzero constant.
//! Lines `pin k i v` (1-based) replace cell `(k, i)` by the constant `v`.
//! A name used in several cells stands for one shared value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, EvolutionAlgebra};
use crate::bits::MAX_DIM;
use crate::field::{Field, FieldError, FieldSpec};
use crate::pattern::SupportPattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `dim` header")]
    MissingHeader,
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("a pattern file has no field; got `field` in the header")]
    FieldInPattern,
    #[error("constant `{text}` in cell ({k}, {i}): {source}")]
    Constant { k: usize, i: usize, text: String, source: FieldError },
    #[error("constant in cell ({k}, {i}) is zero")]
    ZeroConstant { k: usize, i: usize },
    #[error("parameter `{0}` has no value")]
    Unbound(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    })
}

struct Header {
    dim: usize,
    field: Option<FieldSpec>,
}

fn parse_header(line_no: usize, line: &str) -> Result<Header, FormatError> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let dim = match words.as_slice() {
        ["dim", n, ..] => n.parse::<usize>().map_err(|_| syntax(line_no, format!("bad dimension `{n}`")))?,
        _ => return Err(FormatError::MissingHeader),
    };
    if dim == 0 || dim > MAX_DIM {
        return Err(syntax(line_no, format!("dimension {dim} is outside 1..={MAX_DIM}")));
    }
    let field = match &words[2..] {
        [] => None,
        ["field", spec] => Some(spec.parse::<FieldSpec>()?),
        rest => return Err(syntax(line_no, format!("unexpected `{}` after the dimension", rest.join(" ")))),
    };
    Ok(Header { dim, field })
}

/// A structure matrix as written, before choosing a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub dim: usize,
    pub field: Option<FieldSpec>,
    pub rows: Vec<Vec<String>>,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = content_lines(text);
        let (no, first) = lines.next().ok_or(FormatError::MissingHeader)?;
        let header = parse_header(no, first)?;
        let mut rows = Vec::with_capacity(header.dim);
        for (no, line) in lines {
            let cells: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
            if cells.len() != header.dim {
                return Err(syntax(no, format!("expected {} entries, found {}", header.dim, cells.len())));
            }
            rows.push(cells);
        }
        if rows.len() != header.dim {
            return Err(FormatError::RowCount { expected: header.dim, found: rows.len() });
        }
        Ok(MatrixFile { dim: header.dim, field: header.field, rows })
    }

    pub fn to_algebra<F: Field>(&self, field: F) -> Result<EvolutionAlgebra<F>, FormatError> {
        Ok(EvolutionAlgebra::parse_rows(field, &self.rows)?)
    }
}

pub fn write_matrix<F: Field>(a: &EvolutionAlgebra<F>) -> String {
    let mut out = format!("dim {} field {}\n", a.dim(), a.field().spec());
    for row in a.row_strings() {
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    Zero,
    Free,
    Param(String),
    Const(String),
}

impl Cell {
    fn parse(token: &str) -> Cell {
        if token == "0" {
            Cell::Zero
        } else if token == "*" {
            Cell::Free
        } else if token.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            Cell::Param(token.to_owned())
        } else {
            Cell::Const(token.to_owned())
        }
    }

    pub fn is_nonzero(&self) -> bool {
        !matches!(self, Cell::Zero)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Zero => write!(f, "0"),
            Cell::Free => write!(f, "*"),
            Cell::Param(s) | Cell::Const(s) => write!(f, "{s}"),
        }
    }
}

/// A support pattern whose nonzero cells carry parameter names or constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTemplate {
    cells: Vec<Vec<Cell>>,
}

impl PatternTemplate {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = content_lines(text);
        let (no, first) = lines.next().ok_or(FormatError::MissingHeader)?;
        let header = parse_header(no, first)?;
        if header.field.is_some() {
            return Err(FormatError::FieldInPattern);
        }
        let n = header.dim;
        let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(n);
        let mut pins = Vec::new();
        for (no, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            if words[0] == "pin" {
                pins.push((no, words));
                continue;
            }
            if words.len() != n {
                return Err(syntax(no, format!("expected {n} cells, found {}", words.len())));
            }
            if cells.len() == n {
                return Err(syntax(no, "too many rows"));
            }
            cells.push(words.into_iter().map(Cell::parse).collect());
        }
        if cells.len() != n {
            return Err(FormatError::RowCount { expected: n, found: cells.len() });
        }
        for (no, words) in pins {
            let [_, k, i, v] = words.as_slice() else {
                return Err(syntax(no, "expected `pin k i value`"));
            };
            let index = |s: &str| match s.parse::<usize>() {
                Ok(x) if (1..=n).contains(&x) => Ok(x - 1),
                _ => Err(syntax(no, format!("index `{s}` outside 1..={n}"))),
            };
            let (k, i) = (index(k)?, index(i)?);
            if !matches!(Cell::parse(v), Cell::Const(_)) {
                return Err(syntax(no, format!("pinned value `{v}` is not a nonzero constant")));
            }
            if !cells[k][i].is_nonzero() {
                return Err(syntax(no, format!("cell ({}, {}) is zero and cannot be pinned", k + 1, i + 1)));
            }
            cells[k][i] = Cell::Const((*v).to_owned());
        }
        Ok(PatternTemplate { cells })
    }

    pub fn from_cells(cells: Vec<Vec<Cell>>) -> Result<Self, FormatError> {
        let n = cells.len();
        if n == 0 {
            return Err(FormatError::MissingHeader);
        }
        if let Some(k) = cells.iter().position(|r| r.len() != n) {
            return Err(syntax(k + 1, format!("expected {n} cells")));
        }
        Ok(PatternTemplate { cells })
    }

    /// Every nonzero cell a free parameter.
    pub fn generic(p: &SupportPattern) -> Self {
        let n = p.dim();
        let cells = (0..n)
            .map(|k| (0..n).map(|i| if p.get(k, i) { Cell::Free } else { Cell::Zero }).collect())
            .collect();
        PatternTemplate { cells }
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, k: usize, i: usize) -> &Cell {
        &self.cells[k][i]
    }

    pub fn support(&self) -> SupportPattern {
        SupportPattern::from_fn(self.dim(), |k, i| self.cells[k][i].is_nonzero()).expect("dimension checked on parse")
    }

    /// Name used for cell `(k, i)`: its parameter name, or `w<k><i>` (1-based) for `*`.
    pub fn parameter(&self, k: usize, i: usize) -> Option<String> {
        match &self.cells[k][i] {
            Cell::Param(name) => Some(name.clone()),
            Cell::Free => Some(format!("w{}{}", k + 1, i + 1)),
            Cell::Zero | Cell::Const(_) => None,
        }
    }

    pub fn parameters(&self) -> BTreeSet<String> {
        let n = self.dim();
        (0..n).flat_map(|k| (0..n).filter_map(move |i| self.parameter(k, i))).collect()
    }

    /// Substitutes `value(name)` for each parameter. Constants are parsed in `field`.
    pub fn instantiate<F: Field>(
        &self,
        field: F,
        mut value: impl FnMut(&str) -> Option<F::Elem>,
    ) -> Result<EvolutionAlgebra<F>, FormatError> {
        let n = self.dim();
        let mut rows = Vec::with_capacity(n);
        for k in 0..n {
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let entry = match &self.cells[k][i] {
                    Cell::Zero => field.zero(),
                    Cell::Const(text) => {
                        let c = field.parse(text).map_err(|source| FormatError::Constant {
                            k: k + 1,
                            i: i + 1,
                            text: text.clone(),
                            source,
                        })?;
                        if field.is_zero(&c) {
                            return Err(FormatError::ZeroConstant { k: k + 1, i: i + 1 });
                        }
                        c
                    }
                    Cell::Free | Cell::Param(_) => {
                        let name = self.parameter(k, i).expect("nonzero cell has a name");
                        value(&name).ok_or(FormatError::Unbound(name))?
                    }
                };
                row.push(entry);
            }
            rows.push(row);
        }
        Ok(EvolutionAlgebra::from_rows(field, rows)?)
    }

    /// Parameter values that make this template instantiate to `a`, if any.
    /// Zero cells must be zero, constants must match and a repeated name
    /// must take one value throughout.
    pub fn bind<F: Field>(&self, a: &EvolutionAlgebra<F>) -> Option<BTreeMap<String, F::Elem>> {
        let n = self.dim();
        if a.dim() != n {
            return None;
        }
        let field = a.field();
        let mut values: BTreeMap<String, F::Elem> = BTreeMap::new();
        for k in 0..n {
            for i in 0..n {
                let x = a.entry(k, i);
                match &self.cells[k][i] {
                    Cell::Zero if field.is_zero(x) => {}
                    Cell::Zero => return None,
                    Cell::Const(text) => {
                        if field.parse(text).ok().as_ref() != Some(x) {
                            return None;
                        }
                    }
                    Cell::Free | Cell::Param(_) => {
                        if field.is_zero(x) {
                            return None;
                        }
                        let name = self.parameter(k, i).expect("nonzero cell has a name");
                        if values.entry(name).or_insert_with(|| x.clone()) != x {
                            return None;
                        }
                    }
                }
            }
        }
        Some(values)
    }
}

impl fmt::Display for PatternTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.cells.iter().flatten().map(|c| c.to_string().len()).max().unwrap_or(1);
        write!(f, "dim {}", self.dim())?;
        for row in &self.cells {
            let cells: Vec<String> = row.iter().map(|c| format!("{:>width$}", c.to_string())).collect();
            write!(f, "\n{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Either kind of input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Matrix(MatrixFile),
    Pattern(PatternTemplate),
}

impl Document {
    /// A file is a pattern when it has `*`, named cells or `pin` lines and no field in its header.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let header_has_field = content_lines(text).next().is_some_and(|(_, l)| l.split_whitespace().any(|w| w == "field"));
        if header_has_field {
            return MatrixFile::parse(text).map(Document::Matrix);
        }
        let template = PatternTemplate::parse(text)?;
        let symbolic = content_lines(text).skip(1).any(|(_, l)| {
            l.starts_with("pin") || l.split_whitespace().any(|w| !matches!(Cell::parse(w), Cell::Zero | Cell::Const(_)))
        });
        if symbolic {
            Ok(Document::Pattern(template))
        } else {
            MatrixFile::parse(text).map(Document::Matrix)
        }
    }
}
