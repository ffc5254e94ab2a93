//! The line-oriented definition format for algebras and algebroids.
//!
//! ```text
//! # the Frobenius algebra k_5
//! algebra k5
//! basis e
//! unit e
//! mul e e = 1 e
//! form e e = 5
//! ```
//!
//! An `algebra` file declares `basis`, `unit`, any number of `mul a b = <comb>`
//! and `form a b = <rational>` lines. Products and form entries are symmetric:
//! `mul a b` also defines `mul b a`, and stating both is a duplicate entry.
//! Entries not given are zero.
//!
//! An `algebroid` file optionally declares a base algebra with `base`,
//! `base-unit` and `base-mul` (the default base is the rationals, one basis
//! element `k`), then `basis` for the module and `op1`, `op0t`, `form` tables.
//! `op1` and `form` are symmetric, `op0t` is not. Module-valued right-hand sides
//! are sums of terms `[coeff] [a*]x` with `a` a base label (default: the base
//! unit); `form` right-hand sides are base-valued sums `[coeff] a`.
//!
//! Rationals are written `p/q` or as integers, and `#` starts a comment.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebroid::{ground_field, VirasoroAlgebroid};
use crate::frobenius::{CommutativeAlgebra, FrobeniusAlgebra, ShapeError};
use crate::scalar::{format_scalar, is_negative, parse_rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    Lexical(char),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("undeclared label `{0}`")]
    UndeclaredLabel(String),
    #[error("duplicate entry: {0}")]
    DuplicateEntry(String),
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("{0}")]
    Syntax(String),
    #[error("missing `{0}` directive")]
    Missing(&'static str),
}

/// Parsed contents of an `algebra` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub labels: Vec<String>,
    /// Nonzero products, keyed by `(i, j)` with `i <= j`.
    pub products: BTreeMap<(usize, usize), Vec<Scalar>>,
    pub unit: Vec<Scalar>,
    /// Nonzero form entries, keyed by `(i, j)` with `i <= j`.
    pub form: BTreeMap<(usize, usize), Scalar>,
}

/// Parsed contents of an `algebroid` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebroidSpec {
    pub name: String,
    pub base_labels: Vec<String>,
    pub base_unit: Vec<Scalar>,
    /// Nonzero base products, keyed by `(i, j)` with `i <= j`.
    pub base_products: BTreeMap<(usize, usize), Vec<Scalar>>,
    pub labels: Vec<String>,
    /// Keyed by `(i, j)` with `i <= j`; values in module coordinates.
    pub op1: BTreeMap<(usize, usize), Vec<Scalar>>,
    /// Keyed by ordered `(i, j)`.
    pub op0t: BTreeMap<(usize, usize), Vec<Scalar>>,
    /// Keyed by `(i, j)` with `i <= j`; values in base coordinates.
    pub form: BTreeMap<(usize, usize), Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definition {
    Algebra(AlgebraSpec),
    Algebroid(AlgebroidSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot be written in the definition format: {0}")]
pub struct NotRepresentable(&'static str);

impl AlgebraSpec {
    pub fn to_algebra(&self) -> Result<FrobeniusAlgebra, ShapeError> {
        let d = self.labels.len();
        let mut mult = vec![vec![vec![Scalar::zero(); d]; d]; d];
        for (&(i, j), v) in &self.products {
            mult[i][j] = v.clone();
            mult[j][i] = v.clone();
        }
        let mut form = vec![vec![Scalar::zero(); d]; d];
        for (&(i, j), v) in &self.form {
            form[i][j] = v.clone();
            form[j][i] = v.clone();
        }
        FrobeniusAlgebra::new(self.labels.clone(), mult, self.unit.clone(), form)
    }

    /// Requires a commutative product table and a symmetric form.
    pub fn from_algebra(name: &str, f: &FrobeniusAlgebra) -> Result<Self, NotRepresentable> {
        let d = f.dim();
        let mut products = BTreeMap::new();
        let mut form = BTreeMap::new();
        for i in 0..d {
            for j in 0..d {
                if f.basis_product(i, j) != f.basis_product(j, i) {
                    return Err(NotRepresentable("product is not commutative"));
                }
                if f.form(i, j) != f.form(j, i) {
                    return Err(NotRepresentable("form is not symmetric"));
                }
                if i > j {
                    continue;
                }
                let p = f.basis_product(i, j);
                if p.iter().any(|c| !c.is_zero()) {
                    products.insert((i, j), p.to_vec());
                }
                if !f.form(i, j).is_zero() {
                    form.insert((i, j), f.form(i, j).clone());
                }
            }
        }
        Ok(AlgebraSpec {
            name: name.to_string(),
            labels: f.labels().to_vec(),
            products,
            unit: f.unit().to_vec(),
            form,
        })
    }
}

impl AlgebroidSpec {
    pub fn to_algebroid(&self) -> Result<VirasoroAlgebroid, ShapeError> {
        let da = self.base_labels.len();
        let r = self.labels.len();
        let mut base_mult = vec![vec![vec![Scalar::zero(); da]; da]; da];
        for (&(i, j), v) in &self.base_products {
            base_mult[i][j] = v.clone();
            base_mult[j][i] = v.clone();
        }
        let base = CommutativeAlgebra::new(self.base_labels.clone(), base_mult, self.base_unit.clone())?;
        let table = |map: &BTreeMap<(usize, usize), Vec<Scalar>>, len: usize, symmetric: bool| {
            let mut t = vec![vec![vec![Scalar::zero(); len]; r]; r];
            for (&(i, j), v) in map {
                t[i][j] = v.clone();
                if symmetric {
                    t[j][i] = v.clone();
                }
            }
            t
        };
        VirasoroAlgebroid::new(
            base,
            self.labels.clone(),
            table(&self.op1, r * da, true),
            table(&self.op0t, r * da, false),
            table(&self.form, da, true),
        )
    }

    /// Requires a commutative base and symmetric `op1` and `form` tables.
    pub fn from_algebroid(name: &str, a: &VirasoroAlgebroid) -> Result<Self, NotRepresentable> {
        let base = a.base();
        let da = base.dim();
        let r = a.rank();
        let nonzero = |v: &[Scalar]| v.iter().any(|c| !c.is_zero());
        let mut base_products = BTreeMap::new();
        for i in 0..da {
            for j in 0..da {
                if base.basis_product(i, j) != base.basis_product(j, i) {
                    return Err(NotRepresentable("base product is not commutative"));
                }
                if i <= j && nonzero(base.basis_product(i, j)) {
                    base_products.insert((i, j), base.basis_product(i, j).to_vec());
                }
            }
        }
        let (mut op1, mut op0t, mut form) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
        for i in 0..r {
            for j in 0..r {
                if a.op1_entry(i, j) != a.op1_entry(j, i) {
                    return Err(NotRepresentable("op1 is not symmetric"));
                }
                if a.form_entry(i, j) != a.form_entry(j, i) {
                    return Err(NotRepresentable("form is not symmetric"));
                }
                if nonzero(a.op0t_entry(i, j)) {
                    op0t.insert((i, j), a.op0t_entry(i, j).to_vec());
                }
                if i > j {
                    continue;
                }
                if nonzero(a.op1_entry(i, j)) {
                    op1.insert((i, j), a.op1_entry(i, j).to_vec());
                }
                if nonzero(a.form_entry(i, j)) {
                    form.insert((i, j), a.form_entry(i, j).to_vec());
                }
            }
        }
        Ok(AlgebroidSpec {
            name: name.to_string(),
            base_labels: base.labels().to_vec(),
            base_unit: base.unit().to_vec(),
            base_products,
            labels: a.labels().to_vec(),
            op1,
            op0t,
            form,
        })
    }
}

// ---------------------------------------------------------------------------
// Printing

/// Writes `sum_i c_i label_i`, or `0` if every coefficient vanishes.
fn write_comb(out: &mut String, coeffs: &[Scalar], label: impl Fn(usize) -> String) {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let magnitude = if is_negative(c) { -c.clone() } else { c.clone() };
        let sign = match (first, is_negative(c)) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(&format!("{sign}{} {}", format_scalar(&magnitude), label(i)));
        first = false;
    }
    if first {
        out.push('0');
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |i: usize| self.labels[i].clone();
        writeln!(f, "algebra {}", self.name)?;
        writeln!(f, "basis {}", self.labels.join(" "))?;
        let mut unit = String::new();
        write_comb(&mut unit, &self.unit, label);
        writeln!(f, "unit {unit}")?;
        for (&(i, j), v) in &self.products {
            let mut rhs = String::new();
            write_comb(&mut rhs, v, label);
            writeln!(f, "mul {} {} = {rhs}", self.labels[i], self.labels[j])?;
        }
        for (&(i, j), v) in &self.form {
            writeln!(f, "form {} {} = {}", self.labels[i], self.labels[j], format_scalar(v))?;
        }
        Ok(())
    }
}

impl fmt::Display for AlgebroidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let da = self.base_labels.len();
        let base_label = |i: usize| self.base_labels[i].clone();
        let module_label = |p: usize| format!("{}*{}", self.base_labels[p % da], self.labels[p / da]);
        writeln!(f, "algebroid {}", self.name)?;
        writeln!(f, "base {}", self.base_labels.join(" "))?;
        let mut unit = String::new();
        write_comb(&mut unit, &self.base_unit, base_label);
        writeln!(f, "base-unit {unit}")?;
        for (&(i, j), v) in &self.base_products {
            let mut rhs = String::new();
            write_comb(&mut rhs, v, base_label);
            writeln!(f, "base-mul {} {} = {rhs}", self.base_labels[i], self.base_labels[j])?;
        }
        writeln!(f, "basis {}", self.labels.join(" "))?;
        for (directive, table) in [("op1", &self.op1), ("op0t", &self.op0t)] {
            for (&(i, j), v) in table {
                let mut rhs = String::new();
                write_comb(&mut rhs, v, module_label);
                writeln!(f, "{directive} {} {} = {rhs}", self.labels[i], self.labels[j])?;
            }
        }
        for (&(i, j), v) in &self.form {
            let mut rhs = String::new();
            write_comb(&mut rhs, v, base_label);
            writeln!(f, "form {} {} = {rhs}", self.labels[i], self.labels[j])?;
        }
        Ok(())
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Definition::Algebra(a) => a.fmt(f),
            Definition::Algebroid(a) => a.fmt(f),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(Scalar),
    Equals,
    Plus,
    Minus,
    Star,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut pos = 0;
    let err = |column: usize, kind| ParseError {
        line: line_no,
        column,
        kind,
    };
    while pos < chars.len() {
        let c = chars[pos];
        let column = pos + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        let single = match c {
            '=' => Some(Tok::Equals),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(tok) = single {
            tokens.push(Token { tok, column });
            pos += 1;
        } else if is_ident_start(c) {
            let start = pos;
            // Directives such as `base-unit` are the only words with hyphens.
            let leading = tokens.is_empty();
            while pos < chars.len() && (is_ident_char(chars[pos]) || (leading && chars[pos] == '-')) {
                pos += 1;
            }
            tokens.push(Token {
                tok: Tok::Ident(chars[start..pos].iter().collect()),
                column,
            });
        } else if c.is_ascii_digit() {
            let start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || matches!(chars[pos], '/' | '.' | '_')) {
                pos += 1;
            }
            let text: String = chars[start..pos].iter().collect();
            let value = parse_rational(&text)
                .ok_or_else(|| err(column, ParseErrorKind::MalformedRational(text.clone())))?;
            tokens.push(Token {
                tok: Tok::Number(value),
                column,
            });
        } else {
            return Err(err(column, ParseErrorKind::Lexical(c)));
        }
    }
    Ok(tokens)
}

// ---------------------------------------------------------------------------
// Parsing

struct Line {
    number: usize,
    tokens: Vec<Token>,
    end_column: usize,
}

impl Line {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.number,
            column,
            kind,
        }
    }

    fn column(&self, pos: usize) -> usize {
        self.tokens.get(pos).map_or(self.end_column, |t| t.column)
    }

    fn syntax(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        self.err(self.column(pos), ParseErrorKind::Syntax(msg.into()))
    }

    fn ident(&self, pos: usize, what: &str) -> Result<&str, ParseError> {
        match self.tokens.get(pos) {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => Ok(s),
            _ => Err(self.syntax(pos, format!("expected {what}"))),
        }
    }

    fn expect_end(&self, pos: usize) -> Result<(), ParseError> {
        if pos < self.tokens.len() {
            Err(self.syntax(pos, "unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

/// A label namespace: ordered labels with lookup.
struct Labels<'a> {
    names: &'a [String],
}

impl Labels<'_> {
    fn resolve(&self, line: &Line, pos: usize) -> Result<usize, ParseError> {
        let name = line.ident(pos, "a basis label")?;
        self.names
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| line.err(line.column(pos), ParseErrorKind::UndeclaredLabel(name.to_string())))
    }
}

/// Parses `[sign] term (sign term)*` from `pos` to the end of the line, or a
/// lone `0`. `term` parses one term starting after an optional coefficient and
/// returns the coordinate it contributes to plus the position after it.
fn parse_comb<F>(line: &Line, mut pos: usize, len: usize, term: F) -> Result<Vec<Scalar>, ParseError>
where
    F: Fn(&Line, usize) -> Result<(usize, Scalar, usize), ParseError>,
{
    let mut out = vec![Scalar::zero(); len];
    if let [Token {
        tok: Tok::Number(n), ..
    }] = &line.tokens[pos..]
    {
        if n.is_zero() {
            return Ok(out);
        }
    }
    if pos >= line.tokens.len() {
        return Err(line.syntax(pos, "expected a right-hand side"));
    }
    let mut first = true;
    while pos < line.tokens.len() {
        let mut sign = Scalar::one();
        match line.tokens[pos].tok {
            Tok::Plus if !first => pos += 1,
            Tok::Minus => {
                sign = -sign;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(line.syntax(pos, "expected `+` or `-`")),
        }
        let coeff = match line.tokens.get(pos) {
            Some(Token {
                tok: Tok::Number(n), ..
            }) => {
                pos += 1;
                n.clone()
            }
            _ => Scalar::one(),
        };
        let (index, inner, next) = term(line, pos)?;
        out[index] += sign * coeff * inner;
        pos = next;
        first = false;
    }
    Ok(out)
}

fn parse_rational_rhs(line: &Line, pos: usize) -> Result<Scalar, ParseError> {
    let (negative, pos) = match line.tokens.get(pos).map(|t| &t.tok) {
        Some(Tok::Minus) => (true, pos + 1),
        _ => (false, pos),
    };
    match line.tokens.get(pos).map(|t| &t.tok) {
        Some(Tok::Number(n)) => {
            line.expect_end(pos + 1)?;
            Ok(if negative { -n.clone() } else { n.clone() })
        }
        _ => Err(line.syntax(pos, "expected a rational number")),
    }
}

/// `<directive> a b =`; returns the two label indices and the position after `=`.
fn parse_pair(line: &Line, labels: &Labels) -> Result<(usize, usize, usize), ParseError> {
    let i = labels.resolve(line, 1)?;
    let j = labels.resolve(line, 2)?;
    match line.tokens.get(3).map(|t| &t.tok) {
        Some(Tok::Equals) => Ok((i, j, 4)),
        _ => Err(line.syntax(3, "expected `=`")),
    }
}

fn declare_labels(line: &Line) -> Result<Vec<String>, ParseError> {
    let mut names = Vec::new();
    let mut seen = HashSet::new();
    for pos in 1..line.tokens.len() {
        let name = line.ident(pos, "a basis label")?.to_string();
        if !seen.insert(name.clone()) {
            return Err(line.err(line.column(pos), ParseErrorKind::DuplicateEntry(format!("label `{name}`"))));
        }
        names.push(name);
    }
    if names.is_empty() {
        return Err(line.syntax(1, "expected at least one basis label"));
    }
    Ok(names)
}

fn insert_once<V>(
    map: &mut BTreeMap<(usize, usize), V>,
    seen: &mut HashSet<(usize, usize)>,
    key: (usize, usize),
    value: V,
    nonzero: bool,
    line: &Line,
    what: String,
) -> Result<(), ParseError> {
    if !seen.insert(key) {
        return Err(line.err(line.column(1), ParseErrorKind::DuplicateEntry(what)));
    }
    if nonzero {
        map.insert(key, value);
    }
    Ok(())
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

fn nonzero(v: &[Scalar]) -> bool {
    v.iter().any(|c| !c.is_zero())
}

/// Parses one definition (`algebra` or `algebroid` block) from source text.
pub fn parse(source: &str) -> Result<Definition, ParseError> {
    // The header is read as raw words: names may contain characters outside
    // the token grammar, e.g. `direct_sum(k_1,k_2)`.
    let mut header = None;
    let mut lines = Vec::new();
    for (idx, text) in source.lines().enumerate() {
        let content = text.split('#').next().unwrap_or_default();
        if header.is_none() {
            if !content.trim().is_empty() {
                header = Some((idx + 1, content));
            }
            continue;
        }
        let tokens = lex(text, idx + 1)?;
        if !tokens.is_empty() {
            lines.push(Line {
                number: idx + 1,
                tokens,
                end_column: text.chars().count() + 1,
            });
        }
    }
    let Some((header_line, content)) = header else {
        return Err(ParseError {
            line: 1,
            column: 1,
            kind: ParseErrorKind::Missing("algebra"),
        });
    };
    let words: Vec<(usize, &str)> = content
        .split_whitespace()
        .map(|w| (w.as_ptr() as usize - content.as_ptr() as usize + 1, w))
        .collect();
    let header_err = |column: usize, kind| ParseError {
        line: header_line,
        column,
        kind,
    };
    let (kind, name) = match words.as_slice() {
        [(_, kind), (_, name)] => (*kind, name.to_string()),
        [(_, _)] => {
            let column = content.trim_end().chars().count() + 1;
            return Err(header_err(column, ParseErrorKind::Syntax("expected a name".into())));
        }
        [_, _, (column, _), ..] => {
            return Err(header_err(*column, ParseErrorKind::Syntax("name must be a single word".into())))
        }
        [] => unreachable!("header line is non-empty"),
    };
    let lines = &lines[..];
    match kind {
        "algebra" => parse_algebra(name, lines).map(Definition::Algebra),
        "algebroid" => parse_algebroid(name, lines).map(Definition::Algebroid),
        other => Err(header_err(
            words[0].0,
            ParseErrorKind::UnknownDirective(other.to_string()),
        )),
    }
}

fn parse_algebra(name: String, lines: &[Line]) -> Result<AlgebraSpec, ParseError> {
    let mut labels: Option<Vec<String>> = None;
    let mut unit = None;
    let mut products = BTreeMap::new();
    let mut form = BTreeMap::new();
    let (mut seen_mul, mut seen_form) = (HashSet::new(), HashSet::new());
    let no_basis = |line: &Line| line.err(line.column(0), ParseErrorKind::Syntax("`basis` must come first".into()));
    for line in lines {
        let directive = line.ident(0, "a directive")?;
        if directive == "basis" {
            if labels.is_some() {
                return Err(line.err(line.column(0), ParseErrorKind::DuplicateEntry("basis".into())));
            }
            labels = Some(declare_labels(line)?);
            continue;
        }
        if !matches!(directive, "unit" | "mul" | "form") {
            return Err(line.err(line.column(0), ParseErrorKind::UnknownDirective(directive.to_string())));
        }
        let names = labels.as_deref().ok_or_else(|| no_basis(line))?;
        let space = Labels { names };
        let d = names.len();
        let term = |line: &Line, pos: usize| Ok((space.resolve(line, pos)?, Scalar::one(), pos + 1));
        match directive {
            "unit" => {
                if unit.is_some() {
                    return Err(line.err(line.column(0), ParseErrorKind::DuplicateEntry("unit".into())));
                }
                unit = Some(parse_comb(line, 1, d, term)?);
            }
            "mul" => {
                let (i, j, pos) = parse_pair(line, &space)?;
                let value = parse_comb(line, pos, d, term)?;
                let nz = nonzero(&value);
                let what = format!("mul {} {}", names[i], names[j]);
                insert_once(&mut products, &mut seen_mul, ordered(i, j), value, nz, line, what)?;
            }
            _ => {
                let (i, j, pos) = parse_pair(line, &space)?;
                let value = parse_rational_rhs(line, pos)?;
                let nz = !value.is_zero();
                let what = format!("form {} {}", names[i], names[j]);
                insert_once(&mut form, &mut seen_form, ordered(i, j), value, nz, line, what)?;
            }
        }
    }
    let end = lines.last().map_or(1, |l| l.number);
    let missing = |what| ParseError {
        line: end,
        column: 1,
        kind: ParseErrorKind::Missing(what),
    };
    Ok(AlgebraSpec {
        name,
        labels: labels.ok_or_else(|| missing("basis"))?,
        products,
        unit: unit.ok_or_else(|| missing("unit"))?,
        form,
    })
}

fn parse_algebroid(name: String, lines: &[Line]) -> Result<AlgebroidSpec, ParseError> {
    let mut base_labels: Option<Vec<String>> = None;
    let mut base_unit = None;
    let mut base_products = BTreeMap::new();
    let mut labels: Option<Vec<String>> = None;
    let (mut op1, mut op0t, mut form) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    let mut seen: [HashSet<(usize, usize)>; 4] = Default::default();
    let ground = ground_field();
    for line in lines {
        let directive = line.ident(0, "a directive")?;
        match directive {
            "base" => {
                if base_labels.is_some() || labels.is_some() {
                    return Err(line.syntax(0, "`base` must come first and only once"));
                }
                base_labels = Some(declare_labels(line)?);
                continue;
            }
            "basis" => {
                if labels.is_some() {
                    return Err(line.err(line.column(0), ParseErrorKind::DuplicateEntry("basis".into())));
                }
                labels = Some(declare_labels(line)?);
                if base_labels.is_none() {
                    base_labels = Some(ground.labels().to_vec());
                    base_unit = Some(ground.unit().to_vec());
                    base_products.insert((0, 0), ground.basis_product(0, 0).to_vec());
                }
                continue;
            }
            "base-unit" | "base-mul" | "op1" | "op0t" | "form" => {}
            other => return Err(line.err(line.column(0), ParseErrorKind::UnknownDirective(other.to_string()))),
        }
        let base_names = base_labels
            .as_deref()
            .ok_or_else(|| line.syntax(0, "`base` or `basis` must come first"))?;
        let base_space = Labels { names: base_names };
        let da = base_names.len();
        let base_term = |line: &Line, pos: usize| Ok((base_space.resolve(line, pos)?, Scalar::one(), pos + 1));
        if directive.starts_with("base-") {
            if labels.is_some() {
                return Err(line.syntax(0, "base directives must precede `basis`"));
            }
            if directive == "base-unit" {
                if base_unit.is_some() {
                    return Err(line.err(line.column(0), ParseErrorKind::DuplicateEntry("base-unit".into())));
                }
                base_unit = Some(parse_comb(line, 1, da, base_term)?);
            } else {
                let (i, j, pos) = parse_pair(line, &base_space)?;
                let value = parse_comb(line, pos, da, base_term)?;
                let nz = nonzero(&value);
                let what = format!("base-mul {} {}", base_names[i], base_names[j]);
                insert_once(&mut base_products, &mut seen[0], ordered(i, j), value, nz, line, what)?;
            }
            continue;
        }
        let names = labels
            .as_deref()
            .ok_or_else(|| line.syntax(0, "`basis` must precede operation tables"))?;
        let space = Labels { names };
        let r = names.len();
        let base_unit_now = base_unit.clone();
        // Explicit `a*x` terms fill coordinates `x*da + a`; bare `x` terms go to
        // `r*da + x` and are multiplied by the base unit afterwards.
        let module_term = |line: &Line, pos: usize| {
            if matches!(line.tokens.get(pos + 1).map(|t| &t.tok), Some(Tok::Star)) {
                let a = base_space.resolve(line, pos)?;
                let x = space.resolve(line, pos + 2)?;
                Ok((x * da + a, Scalar::one(), pos + 3))
            } else {
                Ok((r * da + space.resolve(line, pos)?, Scalar::one(), pos + 1))
            }
        };
        let module_comb = |line: &Line, pos: usize| -> Result<Vec<Scalar>, ParseError> {
            let mut out = parse_comb(line, pos, r * da + r, module_term)?;
            let bare = out.split_off(r * da);
            if nonzero(&bare) {
                let unit = base_unit_now
                    .as_ref()
                    .ok_or_else(|| line.err(line.column(0), ParseErrorKind::Missing("base-unit")))?;
                for (x, c) in bare.iter().enumerate() {
                    for (a, u) in unit.iter().enumerate() {
                        out[x * da + a] += c * u;
                    }
                }
            }
            Ok(out)
        };
        let (i, j, pos) = parse_pair(line, &space)?;
        let what = format!("{directive} {} {}", names[i], names[j]);
        match directive {
            "op1" => {
                let value = module_comb(line, pos)?;
                let nz = nonzero(&value);
                insert_once(&mut op1, &mut seen[1], ordered(i, j), value, nz, line, what)?;
            }
            "op0t" => {
                let value = module_comb(line, pos)?;
                let nz = nonzero(&value);
                insert_once(&mut op0t, &mut seen[2], (i, j), value, nz, line, what)?;
            }
            _ => {
                let value = parse_comb(line, pos, da, base_term)?;
                let nz = nonzero(&value);
                insert_once(&mut form, &mut seen[3], ordered(i, j), value, nz, line, what)?;
            }
        }
    }
    let end = lines.last().map_or(1, |l| l.number);
    let missing = |what| ParseError {
        line: end,
        column: 1,
        kind: ParseErrorKind::Missing(what),
    };
    Ok(AlgebroidSpec {
        name,
        base_labels: base_labels.ok_or_else(|| missing("basis"))?,
        base_unit: base_unit.ok_or_else(|| missing("base-unit"))?,
        base_products,
        labels: labels.ok_or_else(|| missing("basis"))?,
        op1,
        op0t,
        form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{dual_numbers, k_c, Builtin};
    use crate::scalar::{int, ratio};

    fn algebra(src: &str) -> AlgebraSpec {
        match parse(src).unwrap() {
            Definition::Algebra(a) => a,
            other => panic!("expected an algebra, got {other:?}"),
        }
    }

    #[test]
    fn parses_k5() {
        let spec = algebra("algebra kc\nbasis e\nunit e\nmul e e = 1 e\nform e e = 5");
        assert_eq!(spec.to_algebra().unwrap(), k_c(int(5)));
        assert_eq!(spec.name, "kc");
    }

    #[test]
    fn undeclared_label_reports_line() {
        let err = parse("algebra kc\nbasis e\nunit e\nmul e e = 1 f\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert_eq!(err.column, 13);
        assert_eq!(err.kind, ParseErrorKind::UndeclaredLabel("f".into()));
    }

    #[test]
    fn omitted_products_default_to_zero() {
        let src = "\
# dual numbers
algebra dual
basis one t
unit one
mul one one = one
mul one t = 1 t     # t*t left out
form one t = 1
";
        let f = algebra(src).to_algebra().unwrap();
        assert!(f.validate().is_valid());
        assert_eq!(f, dual_numbers(int(0)));
    }

    #[test]
    fn error_kinds() {
        type Case = (&'static str, usize, fn(&ParseErrorKind) -> bool);
        let cases: &[Case] = &[
            ("algebra a\nbasis e\nunit e\nfrob e e = 1", 4, |k| matches!(k, ParseErrorKind::UnknownDirective(d) if d == "frob")),
            ("algebra a\nbasis e\nunit e\nform e e = 1/0", 4, |k| matches!(k, ParseErrorKind::MalformedRational(_))),
            ("algebra a\nbasis e\nunit e\nform e e = 1/x", 4, |k| matches!(k, ParseErrorKind::MalformedRational(_))),
            ("algebra a\nbasis e f\nunit e\nmul e f = e\nmul f e = f", 5, |k| matches!(k, ParseErrorKind::DuplicateEntry(_))),
            ("algebra a\nbasis e\nunit e\nform e e = 1.5", 4, |k| matches!(k, ParseErrorKind::MalformedRational(_))),
            ("algebra a\nbasis e\nunit e\nform e e = $", 4, |k| matches!(k, ParseErrorKind::Lexical('$'))),
            ("algebra a\nbasis e e", 2, |k| matches!(k, ParseErrorKind::DuplicateEntry(_))),
            ("algebra a\nunit e", 2, |k| matches!(k, ParseErrorKind::Syntax(_))),
            ("algebra a\nbasis e", 2, |k| matches!(k, ParseErrorKind::Missing("unit"))),
            ("algebra a\nbasis e\nunit e\nmul e e 1 e", 4, |k| matches!(k, ParseErrorKind::Syntax(_))),
            ("algebra a\nbasis e\nunit e\nmul e e = 1 e e", 4, |k| matches!(k, ParseErrorKind::Syntax(_))),
            ("group x", 1, |k| matches!(k, ParseErrorKind::UnknownDirective(_))),
        ];
        for (src, line, check) in cases {
            let err = parse(src).unwrap_err();
            assert_eq!(err.line, *line, "{src:?}: {err}");
            assert!(check(&err.kind), "{src:?}: {err}");
        }
    }

    #[test]
    fn signed_combinations() {
        let spec = algebra("algebra a\nbasis u v\nunit 1/2 u - v\nmul u v = -2/3 u + 4 v\nform v v = -1");
        assert_eq!(spec.unit, vec![ratio(1, 2), int(-1)]);
        assert_eq!(spec.products[&(0, 1)], vec![ratio(-2, 3), int(4)]);
        assert_eq!(spec.form[&(1, 1)], int(-1));
    }

    #[test]
    fn builtins_round_trip() {
        for b in Builtin::standard() {
            let spec = AlgebraSpec::from_algebra(&b.to_string(), &b.build()).unwrap();
            let text = spec.to_string();
            assert_eq!(algebra(&text), spec, "{text}");
            assert_eq!(spec.to_algebra().unwrap(), b.build());
        }
    }

    #[test]
    fn algebroid_round_trip_and_defaults() {
        let a = VirasoroAlgebroid::from_frobenius(&dual_numbers(int(2))).unwrap();
        let spec = AlgebroidSpec::from_algebroid("vir_dual", &a).unwrap();
        let text = spec.to_string();
        let back = match parse(&text).unwrap() {
            Definition::Algebroid(s) => s,
            other => panic!("{other:?}"),
        };
        assert_eq!(back, spec);
        assert_eq!(back.to_algebroid().unwrap(), a);

        let src = "algebroid vk\nbasis e\nop1 e e = 2 e\nop0t e e = e\nform e e = 3 k\n";
        let parsed = match parse(src).unwrap() {
            Definition::Algebroid(s) => s.to_algebroid().unwrap(),
            other => panic!("{other:?}"),
        };
        assert_eq!(parsed, VirasoroAlgebroid::from_frobenius(&k_c(int(3))).unwrap());
    }

    #[test]
    fn algebroid_over_nontrivial_base() {
        let src = "\
algebroid over_dual
base one s
base-unit one
base-mul one one = one
base-mul one s = s
basis v
op1 v v = 2 one*v
op0t v v = v
form v v = 1 one + 1 s
";
        let a = match parse(src).unwrap() {
            Definition::Algebroid(s) => s.to_algebroid().unwrap(),
            other => panic!("{other:?}"),
        };
        assert_eq!(a.base().dim(), 2);
        assert_eq!(a.op0t_entry(0, 0), [int(1), int(0)]);
        assert!(a.check_axioms().unwrap().is_valid());
        let err = parse("algebroid x\nbasis v\nop1 v v = 2 q*v").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UndeclaredLabel("q".into()));
    }
}
