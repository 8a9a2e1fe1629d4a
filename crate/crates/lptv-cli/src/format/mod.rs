//! Line-oriented text format for systems and factor pairs.
//!
//! A document is a sequence of bracketed sections:
//!
//! ```text
//! [system]
//! name 4-4:H
//! n 2
//! harmonics 1
//! omega-degree 1
//!
//! [params]
//! a0 -1
//!
//! [A]
//! term 0 0 cos
//! -1 2
//! 1/2 1
//! term 1 1 sin
//! 0 1
//! -1 0
//! ```
//!
//! Series sections (`A`, `P`, `psi1`, and `B`, `C`, `D` with an explicit
//! `rows`x`cols` shape) hold `term r l cos|sin` blocks, the coefficient of
//! `ωʳ cos(lωt)` or `ωʳ sin(lωt)` written row by row. `R` holds `power r`
//! blocks. Entries are integers, `p/q` rationals or decimals and are read
//! exactly. Lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lptv::{Mat, OmegaPoly, OmegaPolyMatrix, Parity, Rational, Scalar, TrigMatrix};
use num::{BigInt, Zero};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// Scalars the emitter can write.
pub trait Entry: Scalar {
    fn render(&self) -> String;
}

impl Entry for Rational {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Entry for f64 {
    fn render(&self) -> String {
        fmt_f64(*self)
    }
}

/// Seventeen significant digits with a signed exponent, `-0` printed as `0`.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

const SYSTEM_KEYS: [&str; 6] = ["name", "description", "n", "harmonics", "omega-degree", "omega"];
const TRANSFORM_KEYS: [&str; 3] = ["frequency-divisor", "identity-at-zero", "canonicalized"];
const REPORT_KEYS: [&str; 3] = ["residual-norm", "harmonics", "det-p"];
const IO_SECTIONS: [&str; 3] = ["B", "C", "D"];

#[derive(Clone, Debug, PartialEq, Default)]
pub struct TransformRecord {
    pub frequency_divisor: usize,
    pub identity_at_zero: bool,
    pub canonicalized: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document<T: Scalar> {
    pub name: String,
    pub description: Option<String>,
    pub n: usize,
    /// Fixed frequency, when the system is only meaningful at one ω.
    pub omega: Option<Rational>,
    pub params: BTreeMap<String, Rational>,
    pub a: Option<TrigMatrix<T>>,
    /// Input, output and feedthrough series by section name.
    pub io: BTreeMap<String, TrigMatrix<T>>,
    pub p: Option<TrigMatrix<T>>,
    pub r: Option<OmegaPolyMatrix<T>>,
    pub psi0: Option<OmegaPoly<T>>,
    pub psi1: Option<TrigMatrix<T>>,
    pub transforms: Option<TransformRecord>,
    pub report: Vec<(String, String)>,
}

impl<T: Scalar> Document<T> {
    pub fn new(name: &str, n: usize) -> Self {
        Document {
            name: name.to_string(),
            description: None,
            n,
            omega: None,
            params: BTreeMap::new(),
            a: None,
            io: BTreeMap::new(),
            p: None,
            r: None,
            psi0: None,
            psi1: None,
            transforms: None,
            report: Vec::new(),
        }
    }
}

impl<T: Entry> Document<T> {
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str("[system]\n");
        let _ = writeln!(out, "name {}", self.name);
        if let Some(d) = &self.description {
            let _ = writeln!(out, "description {d}");
        }
        let _ = writeln!(out, "n {}", self.n);
        if let Some(a) = &self.a {
            let _ = writeln!(out, "harmonics {}", a.harmonic_bound());
            let _ = writeln!(out, "omega-degree {}", a.omega_degree());
        }
        if let Some(w) = &self.omega {
            let _ = writeln!(out, "omega {w}");
        }
        if !self.params.is_empty() {
            out.push_str("\n[params]\n");
            for (k, v) in &self.params {
                let _ = writeln!(out, "{k} {v}");
            }
        }
        if let Some(a) = &self.a {
            emit_series(&mut out, "[A]", a);
        }
        for (name, m) in &self.io {
            emit_series(&mut out, &format!("[{name} {}x{}]", m.rows(), m.cols()), m);
        }
        if let Some(p) = &self.p {
            emit_series(&mut out, "[P]", p);
        }
        if let Some(r) = &self.r {
            out.push_str("\n[R]\n");
            let mut any = false;
            for (k, s) in r.slices().iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                any = true;
                let _ = writeln!(out, "power {k}");
                emit_mat(&mut out, s);
            }
            if !any {
                out.push_str("power 0\n");
                emit_mat(&mut out, &Mat::<T>::zeros(r.n(), r.n()));
            }
        }
        if let Some(psi0) = &self.psi0 {
            out.push_str("\n[psi0]\n");
            let coeffs: Vec<String> = if psi0.is_zero() { vec!["0".into()] } else { psi0.coeffs().iter().map(Entry::render).collect() };
            let _ = writeln!(out, "{}", coeffs.join(" "));
        }
        if let Some(psi1) = &self.psi1 {
            emit_series(&mut out, "[psi1]", psi1);
        }
        if let Some(t) = &self.transforms {
            out.push_str("\n[transforms]\n");
            let _ = writeln!(out, "frequency-divisor {}", t.frequency_divisor);
            let _ = writeln!(out, "identity-at-zero {}", t.identity_at_zero);
            let _ = writeln!(out, "canonicalized {}", t.canonicalized);
        }
        if !self.report.is_empty() {
            out.push_str("\n[report]\n");
            for (k, v) in &self.report {
                let _ = writeln!(out, "{k} {v}");
            }
        }
        out
    }
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Cos => "cos",
        Parity::Sin => "sin",
    }
}

fn emit_mat<T: Entry>(out: &mut String, m: &Mat<T>) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].render()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn emit_series<T: Entry>(out: &mut String, header: &str, m: &TrigMatrix<T>) {
    let _ = write!(out, "\n{header}\n");
    let mut terms: Vec<_> = m.terms().filter(|(_, _, _, c)| !c.is_zero()).collect();
    terms.sort_by_key(|&(r, l, p, _)| (r, l, p == Parity::Sin));
    for (r, l, p, c) in terms {
        let _ = writeln!(out, "term {r} {l} {}", parity_name(p));
        emit_mat(out, c);
    }
}

/// Exact value of an integer, `p/q` or decimal literal.
pub fn parse_number(s: &str) -> Option<Rational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        Rational::from_integer(all * num::pow(ten, shift as usize))
    } else {
        Rational::new(all, num::pow(ten, (-shift) as usize))
    };
    Some(if sign < 0 { -value } else { value })
}

struct Line<'a> {
    no: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl Line<'_> {
    fn err(&self, tok: usize, msg: impl Into<String>) -> ParseError {
        let col = self.tokens.get(tok).map_or(1, |t| t.0);
        ParseError { line: self.no, col, msg: msg.into() }
    }

    fn col(&self, tok: usize) -> usize {
        self.tokens.get(tok).map_or(1, |t| t.0)
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (ci, (bi, ch)) in raw.char_indices().enumerate() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some((ci + 1, bi)),
                (true, Some((col, b))) => {
                    tokens.push((col, &raw[b..bi]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some((col, b)) = start {
            tokens.push((col, &raw[b..]));
        }
        out.push(Line { no: i + 1, tokens });
    }
    out
}

struct Section<'a> {
    name: String,
    shape: Option<(usize, usize)>,
    header: &'a Line<'a>,
    body: Vec<&'a Line<'a>>,
}

fn parse_usize(line: &Line, tok: usize, what: &str) -> Result<usize, ParseError> {
    let s = line.tokens.get(tok).ok_or_else(|| line.err(tok, format!("missing {what}")))?.1;
    s.parse().map_err(|_| line.err(tok, format!("invalid {what} `{s}`")))
}

fn parse_bool(line: &Line, tok: usize) -> Result<bool, ParseError> {
    match line.tokens.get(tok).map(|t| t.1) {
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        _ => Err(line.err(tok, "expected `true` or `false`")),
    }
}

fn value_of(line: &Line) -> Result<String, ParseError> {
    if line.tokens.len() < 2 {
        return Err(ParseError { line: line.no, col: line.col(0) + line.tokens[0].1.chars().count(), msg: "missing value".into() });
    }
    Ok(line.tokens[1..].iter().map(|t| t.1).collect::<Vec<_>>().join(" "))
}

fn single_value(line: &Line) -> Result<(), ParseError> {
    if line.tokens.len() > 2 {
        return Err(line.err(2, "unexpected trailing token"));
    }
    Ok(())
}

fn parse_entry(line: &Line, tok: usize) -> Result<Rational, ParseError> {
    let s = line.tokens[tok].1;
    parse_number(s).ok_or_else(|| line.err(tok, format!("invalid number `{s}`")))
}

fn parse_row(line: &Line, cols: usize) -> Result<Vec<Rational>, ParseError> {
    if line.tokens.len() != cols {
        let tok = line.tokens.len().min(cols);
        return Err(line.err(tok, format!("expected {cols} entries, found {}", line.tokens.len())));
    }
    (0..cols).map(|k| parse_entry(line, k)).collect()
}

fn parse_block<'a>(lines: &[&'a Line<'a>], at: &mut usize, header: &Line, rows: usize, cols: usize) -> Result<Mat<Rational>, ParseError> {
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let line = lines.get(*at).ok_or_else(|| header.err(0, format!("block needs {rows} rows")))?;
        if line.tokens[0].1 == "term" || line.tokens[0].1 == "power" {
            return Err(line.err(0, format!("block needs {rows} rows")));
        }
        data.push(parse_row(line, cols)?);
        *at += 1;
    }
    Ok(Mat::from_rows(data))
}

fn parse_series(sec: &Section, rows: usize, cols: usize) -> Result<TrigMatrix<Rational>, ParseError> {
    let mut m = TrigMatrix::zeros(rows, cols);
    let mut seen = std::collections::BTreeSet::new();
    let mut at = 0;
    while at < sec.body.len() {
        let line = sec.body[at];
        if line.tokens[0].1 != "term" {
            return Err(line.err(0, "expected `term r l cos|sin`"));
        }
        if line.tokens.len() != 4 {
            return Err(line.err(line.tokens.len().min(4), "expected `term r l cos|sin`"));
        }
        let r = parse_usize(line, 1, "ω power")?;
        let l = parse_usize(line, 2, "harmonic")?;
        let parity = match line.tokens[3].1 {
            "cos" => Parity::Cos,
            "sin" if l > 0 => Parity::Sin,
            "sin" => return Err(line.err(3, "sin term with harmonic 0")),
            other => return Err(line.err(3, format!("unknown parity `{other}`"))),
        };
        if !seen.insert((r, l, parity == Parity::Sin)) {
            return Err(line.err(0, "duplicate term"));
        }
        at += 1;
        let c = parse_block(&sec.body, &mut at, line, rows, cols)?;
        m.add_term(r, l, parity, &c);
    }
    Ok(m)
}

fn parse_r(sec: &Section, n: usize) -> Result<OmegaPolyMatrix<Rational>, ParseError> {
    let mut slices: BTreeMap<usize, Mat<Rational>> = BTreeMap::new();
    let mut at = 0;
    while at < sec.body.len() {
        let line = sec.body[at];
        if line.tokens[0].1 != "power" || line.tokens.len() != 2 {
            return Err(line.err(0, "expected `power r`"));
        }
        let r = parse_usize(line, 1, "ω power")?;
        if slices.contains_key(&r) {
            return Err(line.err(1, "duplicate power"));
        }
        at += 1;
        slices.insert(r, parse_block(&sec.body, &mut at, line, n, n)?);
    }
    let deg = slices.keys().next_back().map_or(0, |k| *k);
    let all = (0..=deg).map(|k| slices.remove(&k).unwrap_or_else(|| Mat::zeros(n, n))).collect();
    Ok(OmegaPolyMatrix::from_slices(n, all))
}

fn split_sections<'a>(lines: &'a [Line<'a>]) -> Result<Vec<Section<'a>>, ParseError> {
    let mut out: Vec<Section> = Vec::new();
    for line in lines {
        let first = line.tokens[0].1;
        if first.starts_with('[') {
            let joined: Vec<&str> = line.tokens.iter().map(|t| t.1).collect();
            let joined = joined.join(" ");
            let inner = joined[1..].strip_suffix(']').ok_or_else(|| line.err(line.tokens.len() - 1, "unterminated section header"))?;
            let mut parts = inner.split_whitespace();
            let name = parts.next().ok_or_else(|| line.err(0, "empty section header"))?.to_string();
            let shape = match parts.next() {
                None => None,
                Some(s) => {
                    let bad = || line.err(1, format!("invalid shape `{s}`"));
                    let (r, c) = s.split_once('x').ok_or_else(bad)?;
                    Some((r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?))
                }
            };
            if parts.next().is_some() {
                return Err(line.err(2, "unexpected token in section header"));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(line.err(0, format!("duplicate section [{name}]")));
            }
            out.push(Section { name, shape, header: line, body: Vec::new() });
        } else {
            let sec = out.last_mut().ok_or_else(|| line.err(0, "content before the first section"))?;
            sec.body.push(line);
        }
    }
    Ok(out)
}

/// Reads a document, checking shapes and header counts against the data.
pub fn parse(text: &str) -> Result<Document<Rational>, ParseError> {
    let lines = tokenize(text);
    let sections = split_sections(&lines)?;
    let eof = ParseError { line: text.lines().count().max(1), col: 1, msg: "missing [system] section".into() };
    let system = sections.iter().find(|s| s.name == "system").ok_or(eof)?;

    let mut name = None;
    let mut description = None;
    let mut n = None;
    let mut harmonics = None;
    let mut degree = None;
    let mut omega = None;
    for line in &system.body {
        let key = line.tokens[0].1;
        match key {
            "name" => name = Some(value_of(line)?),
            "description" => description = Some(value_of(line)?),
            "n" => {
                single_value(line)?;
                n = Some((parse_usize(line, 1, "dimension")?, line.no));
            }
            "harmonics" => {
                single_value(line)?;
                harmonics = Some((parse_usize(line, 1, "harmonic count")?, line));
            }
            "omega-degree" => {
                single_value(line)?;
                degree = Some((parse_usize(line, 1, "ω degree")?, line));
            }
            "omega" => {
                value_of(line)?;
                single_value(line)?;
                omega = Some(parse_entry(line, 1)?);
            }
            _ => return Err(line.err(0, format!("unknown key `{key}`; expected one of {}", SYSTEM_KEYS.join(", ")))),
        }
    }
    let name = name.ok_or_else(|| system.header.err(0, "missing `name`"))?;
    let (n, _) = n.ok_or_else(|| system.header.err(0, "missing `n`"))?;
    if n == 0 {
        return Err(system.header.err(0, "`n` must be positive"));
    }

    let mut doc = Document::new(&name, n);
    doc.description = description;
    doc.omega = omega;
    for sec in &sections {
        if sec.shape.is_some() && !IO_SECTIONS.contains(&sec.name.as_str()) {
            return Err(sec.header.err(1, format!("section [{}] takes no shape", sec.name)));
        }
        match sec.name.as_str() {
            "system" => {}
            "params" => {
                for line in &sec.body {
                    value_of(line)?;
                    single_value(line)?;
                    let key = line.tokens[0].1.to_string();
                    if doc.params.insert(key, parse_entry(line, 1)?).is_some() {
                        return Err(line.err(0, "duplicate parameter"));
                    }
                }
            }
            "A" => doc.a = Some(parse_series(sec, n, n)?),
            "P" => doc.p = Some(parse_series(sec, n, n)?),
            "psi1" => doc.psi1 = Some(parse_series(sec, 1, 1)?),
            "R" => doc.r = Some(parse_r(sec, n)?),
            "psi0" => {
                let [line] = sec.body.as_slice() else {
                    return Err(sec.header.err(0, "[psi0] holds one line of coefficients"));
                };
                let coeffs = (0..line.tokens.len()).map(|k| parse_entry(line, k)).collect::<Result<Vec<_>, _>>()?;
                doc.psi0 = Some(OmegaPoly::new(coeffs));
            }
            "B" | "C" | "D" => {
                let (rows, cols) = sec.shape.ok_or_else(|| sec.header.err(0, format!("section [{}] needs a `rows`x`cols` shape", sec.name)))?;
                let (want_rows, want_cols) = match sec.name.as_str() {
                    "B" => (Some(n), None),
                    "C" => (None, Some(n)),
                    _ => (None, None),
                };
                if want_rows.is_some_and(|r| r != rows) || want_cols.is_some_and(|c| c != cols) {
                    return Err(sec.header.err(1, format!("shape {rows}x{cols} does not fit n = {n}")));
                }
                doc.io.insert(sec.name.clone(), parse_series(sec, rows, cols)?);
            }
            "transforms" => {
                let mut t = TransformRecord { frequency_divisor: 1, ..Default::default() };
                for line in &sec.body {
                    single_value(line)?;
                    match line.tokens[0].1 {
                        "frequency-divisor" => t.frequency_divisor = parse_usize(line, 1, "divisor")?.max(1),
                        "identity-at-zero" => t.identity_at_zero = parse_bool(line, 1)?,
                        "canonicalized" => t.canonicalized = parse_bool(line, 1)?,
                        key => return Err(line.err(0, format!("unknown key `{key}`; expected one of {}", TRANSFORM_KEYS.join(", ")))),
                    }
                }
                doc.transforms = Some(t);
            }
            "report" => {
                for line in &sec.body {
                    let key = line.tokens[0].1;
                    if !REPORT_KEYS.contains(&key) {
                        return Err(line.err(0, format!("unknown key `{key}`; expected one of {}", REPORT_KEYS.join(", "))));
                    }
                    doc.report.push((key.to_string(), value_of(line)?));
                }
            }
            other => return Err(sec.header.err(0, format!("unknown section [{other}]"))),
        }
    }

    if let (Some(b), Some(c), Some(d)) = (doc.io.get("B"), doc.io.get("C"), doc.io.get("D")) {
        if d.rows() != c.rows() || d.cols() != b.cols() {
            let sec = sections.iter().find(|s| s.name == "D").expect("parsed");
            return Err(sec.header.err(1, "[D] shape must be (rows of C)x(cols of B)"));
        }
    }
    match (&doc.a, harmonics, degree) {
        (Some(a), Some((h, hl)), Some((d, dl))) => {
            if a.harmonic_bound() != h {
                return Err(hl.err(1, format!("declared {h} harmonics, data has {}", a.harmonic_bound())));
            }
            if a.omega_degree() != d {
                return Err(dl.err(1, format!("declared ω degree {d}, data has {}", a.omega_degree())));
            }
        }
        (Some(_), _, _) => return Err(system.header.err(0, "[A] present but `harmonics` or `omega-degree` missing")),
        (None, Some((_, l)), _) | (None, _, Some((_, l))) => return Err(l.err(0, "`harmonics`/`omega-degree` given without [A]")),
        (None, None, None) => {}
    }
    Ok(doc)
}

#[cfg(test)]
mod tests;
