//! Line-oriented text formats. Blank lines and `#` comments are ignored;
//! every error carries the 1-based line it refers to.
//!
//! Scalars are integers or `a/b`; λ-expressions are sums like
//! `9*l^-3 + 3*l^-2 - l` (`λ` is accepted for `l`).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::exactalg::{unit_vector, LaurentMatrix, LaurentPoly, Matrix, Poly};
use crate::filtration::NondegenerateFiltration;
use crate::formal::{FormalSaito, Frame, LocalizedFormalFrobenius, TruncatedSeries, VarKind};
use crate::geom::{BundleData, CohomologyModel, GWDataset, GwRecord};
use crate::mfa::LocalizedMetric;
use crate::scalar::{RationalScalar, Scalar};

/// Hex SHA-256 of a text.
pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// (line number, keyword, rest) for each meaningful line.
fn directives(text: &str) -> Vec<(usize, &str, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                return None;
            }
            let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            Some((i + 1, kw, rest.trim()))
        })
        .collect()
}

pub fn parse_scalar<S: RationalScalar>(tok: &str, line: usize) -> Result<S> {
    match tok.trim().parse::<BigRational>() {
        Ok(q) => Ok(S::from_rational(&q)),
        Err(_) => err(line, format!("expected a rational number, found `{tok}`")),
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.trim().parse().or_else(|_| err(line, format!("expected {what}, found `{tok}`")))
}

fn parse_i64(tok: &str, line: usize, what: &str) -> Result<i64> {
    tok.trim().parse().or_else(|_| err(line, format!("expected {what}, found `{tok}`")))
}

fn parse_vector<S: RationalScalar>(rest: &str, n: usize, line: usize) -> Result<Vec<S>> {
    let v = rest.split_whitespace().map(|t| parse_scalar(t, line)).collect::<Result<Vec<S>>>()?;
    if v.len() != n {
        return err(line, format!("expected {n} coordinates, found {}", v.len()));
    }
    Ok(v)
}

/// A λ-Laurent expression such as `9*l^-3 + 3/2*l - 1`.
pub fn parse_laurent<S: RationalScalar>(expr: &str, line: usize) -> Result<LaurentPoly<S>> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).map(|c| if c == 'λ' { 'l' } else { c }).collect();
    if s.is_empty() {
        return err(line, "empty expression");
    }
    // split before each sign that is not an exponent sign
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut prev = ' ';
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && prev != '^' && prev != '+' && prev != '-' {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
        prev = ch;
    }
    terms.push(cur);
    let mut out = LaurentPoly::zero();
    for t in terms {
        let t = t.strip_prefix('+').unwrap_or(&t);
        let (neg, t) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t),
        };
        let (neg, t) = match t.strip_prefix('-') {
            Some(r) => (!neg, r),
            None => (neg, t.strip_prefix('+').unwrap_or(t)),
        };
        let (coef, exp) = match t.split_once('l') {
            None => (parse_scalar::<S>(t, line)?, 0),
            Some((c, e)) => {
                let c = c.strip_suffix('*').unwrap_or(c);
                let c = if c.is_empty() { S::one() } else { parse_scalar(c, line)? };
                let e = match e.strip_prefix('^') {
                    None if e.is_empty() => 1,
                    None => return err(line, format!("unexpected `{e}` after l")),
                    Some(k) => parse_i64(k, line, "an exponent")?,
                };
                (c, e)
            }
        };
        let coef = if neg { -coef } else { coef };
        out = out + LaurentPoly::monomial(coef, exp);
    }
    Ok(out)
}

pub fn parse_poly<S: RationalScalar>(expr: &str, line: usize) -> Result<Poly<S>> {
    match parse_laurent::<S>(expr, line)?.to_poly() {
        Some(p) => Ok(p),
        None => err(line, format!("`{expr}` has negative powers of λ")),
    }
}

pub fn write_laurent<S: Scalar>(f: &LaurentPoly<S>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = f
        .terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| match e {
            0 => format!("{c}"),
            1 => format!("{c}*l"),
            _ => format!("{c}*l^{e}"),
        })
        .collect();
    parts.join(" + ")
}

/// ```text
/// size 2
/// row l^-1, 0
/// row 0, l
/// ```
pub fn parse_laurent_matrix<S: RationalScalar>(text: &str) -> Result<LaurentMatrix<S>> {
    let mut size = None;
    let mut rows: Vec<Vec<LaurentPoly<S>>> = Vec::new();
    let mut last = 0;
    for (line, kw, rest) in directives(text) {
        last = line;
        match kw {
            "size" if size.is_none() => size = Some(parse_usize(rest, line, "a matrix size")?),
            "row" => {
                let Some(n) = size else { return err(line, "`row` before `size`") };
                let row = rest.split(',').map(|e| parse_laurent(e, line)).collect::<Result<Vec<_>>>()?;
                if row.len() != n {
                    return err(line, format!("row has {} entries, expected {n}", row.len()));
                }
                if rows.len() == n {
                    return err(line, format!("more than {n} rows"));
                }
                rows.push(row);
            }
            _ => return err(line, format!("unexpected `{kw}`")),
        }
    }
    let Some(n) = size else { return err(last.max(1), "missing `size`") };
    if rows.len() != n {
        return err(last.max(1), format!("expected {n} rows, found {}", rows.len()));
    }
    Ok(Matrix::from_rows(rows))
}

pub fn write_laurent_matrix<S: Scalar>(m: &LaurentMatrix<S>) -> String {
    let mut out = format!("size {}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(write_laurent).collect();
        let _ = writeln!(out, "row {}", row.join(", "));
    }
    out
}

/// Filtration blocks: `jump k`, then its `rep` vectors and `gram` rows;
/// `charge k D` lines attach charges.
struct FiltrationBlock<S> {
    jumps: Vec<(usize, i64, Vec<Vec<S>>, Vec<Vec<S>>)>,
    charges: BTreeMap<i64, S>,
}

impl<S: RationalScalar> FiltrationBlock<S> {
    fn new() -> Self {
        FiltrationBlock { jumps: Vec::new(), charges: BTreeMap::new() }
    }

    fn accept(&mut self, line: usize, kw: &str, rest: &str, n: Option<usize>) -> Result<bool> {
        match kw {
            "jump" => {
                let k = parse_i64(rest, line, "a jump index")?;
                if self.jumps.last().is_some_and(|j| j.1 >= k) {
                    return err(line, "jumps must be strictly increasing");
                }
                self.jumps.push((line, k, Vec::new(), Vec::new()));
            }
            "rep" | "gram" => {
                let Some(n) = n else { return err(line, "dimension must be declared first") };
                let Some(j) = self.jumps.last_mut() else { return err(line, format!("`{kw}` before any `jump`")) };
                if kw == "rep" {
                    j.2.push(parse_vector(rest, n, line)?);
                } else {
                    let row = rest.split_whitespace().map(|t| parse_scalar(t, line)).collect::<Result<Vec<S>>>()?;
                    j.3.push(row);
                }
            }
            "charge" if rest.split_whitespace().count() == 2 => {
                let mut it = rest.split_whitespace();
                let k = parse_i64(it.next().unwrap(), line, "a jump index")?;
                let d = parse_scalar(it.next().unwrap(), line)?;
                self.charges.insert(k, d);
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn build(self, n: usize) -> Result<Option<NondegenerateFiltration<S>>> {
        if self.jumps.is_empty() {
            return Ok(None);
        }
        let mut jumps = Vec::new();
        for (line, k, reps, gram) in self.jumps {
            if gram.len() != reps.len() || gram.iter().any(|r| r.len() != reps.len()) {
                return err(line, format!("jump {k}: gram must be {0}×{0}", reps.len()));
            }
            jumps.push((k, reps, Matrix::from_rows(gram)));
        }
        NondegenerateFiltration::new(n, jumps).map(Some)
    }
}

/// An algebra with optional Frobenius data.
///
/// ```text
/// dim 3
/// names 1 x x^2          # optional
/// degrees 0 1 2          # optional
/// unit 1 0 0
/// mul 1 1: 0 0 1         # e_1·e_1 = e_2; symmetric entries and products
///                        # with a basis-vector unit are implied
/// functional 0 0 1       # or: N `metric` rows
/// nilpotent 0 1 0        # n_1, n_2, … in order
/// jump 0                 # filtration blocks, see below
/// rep 1 0 0
/// gram 1
/// charge 0 2
/// ```
#[derive(Clone, Debug)]
pub struct AlgebraFile<S: Scalar> {
    pub algebra: FiniteAlgebra<S>,
    pub metric: Option<Matrix<S>>,
    pub nilpotents: Vec<Vec<S>>,
    pub filtration: Option<NondegenerateFiltration<S>>,
    pub charges: Option<BTreeMap<i64, S>>,
}

struct RingBlock<S> {
    n: Option<usize>,
    names: Option<Vec<String>>,
    degrees: Option<Vec<i64>>,
    unit: Option<Vec<S>>,
    mul: BTreeMap<(usize, usize), Vec<S>>,
    first_line: usize,
}

impl<S: RationalScalar> RingBlock<S> {
    fn new() -> Self {
        RingBlock { n: None, names: None, degrees: None, unit: None, mul: BTreeMap::new(), first_line: 1 }
    }

    fn dim(&self, line: usize) -> Result<usize> {
        self.n.map_or_else(|| err(line, "`dim` must come first"), Ok)
    }

    fn accept(&mut self, line: usize, kw: &str, rest: &str) -> Result<bool> {
        match kw {
            "dim" => {
                if self.n.is_some() {
                    return err(line, "duplicate `dim`");
                }
                self.n = Some(parse_usize(rest, line, "a dimension")?);
                self.first_line = line;
            }
            "names" => {
                let n = self.dim(line)?;
                let v: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if v.len() != n {
                    return err(line, format!("expected {n} names"));
                }
                self.names = Some(v);
            }
            "degrees" => {
                let n = self.dim(line)?;
                let v = rest.split_whitespace().map(|t| parse_i64(t, line, "a degree")).collect::<Result<Vec<_>>>()?;
                if v.len() != n {
                    return err(line, format!("expected {n} degrees"));
                }
                self.degrees = Some(v);
            }
            "unit" => self.unit = Some(parse_vector(rest, self.dim(line)?, line)?),
            "mul" => {
                let n = self.dim(line)?;
                let Some((ij, v)) = rest.split_once(':') else { return err(line, "expected `mul i j: coordinates`") };
                let idx: Vec<usize> = ij.split_whitespace().map(|t| parse_usize(t, line, "a basis index")).collect::<Result<_>>()?;
                let [i, j] = idx[..] else { return err(line, "expected two basis indices") };
                if i >= n || j >= n {
                    return err(line, format!("basis index out of range 0..{n}"));
                }
                let v = parse_vector(v, n, line)?;
                for key in [(i, j), (j, i)] {
                    if let Some(old) = self.mul.get(&key) {
                        if *old != v {
                            return err(line, format!("e_{i}·e_{j} given twice with different values"));
                        }
                    }
                    self.mul.insert(key, v.clone());
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn build(self) -> Result<FiniteAlgebra<S>> {
        let line = self.first_line;
        let n = self.dim(line)?;
        let Some(unit) = self.unit else { return err(line, "missing `unit`") };
        let mut table = vec![vec![vec![S::zero(); n]; n]; n];
        // a unit that is a basis vector e_u fixes e_u·e_j = e_j
        if let Some(u) = (0..n).find(|&u| unit == unit_vector::<S>(n, u)) {
            for j in 0..n {
                table[u][j] = unit_vector(n, j);
                table[j][u] = unit_vector(n, j);
            }
        }
        for ((i, j), v) in self.mul {
            table[i][j] = v;
        }
        let names = self.names.unwrap_or_else(|| (0..n).map(|i| format!("e{i}")).collect());
        FiniteAlgebra::new(names, table, unit, self.degrees).map_err(|e| Error::Parse { line, msg: e.to_string() })
    }
}

pub fn parse_algebra_file<S: RationalScalar>(text: &str) -> Result<AlgebraFile<S>> {
    let mut ring = RingBlock::new();
    let mut functional = None;
    let mut metric_rows: Vec<Vec<S>> = Vec::new();
    let mut nilpotents = Vec::new();
    let mut filt = FiltrationBlock::new();
    let mut metric_line = 0;
    for (line, kw, rest) in directives(text) {
        if ring.accept(line, kw, rest)? || filt.accept(line, kw, rest, ring.n)? {
            continue;
        }
        let n = ring.dim(line)?;
        match kw {
            "functional" => functional = Some(parse_vector::<S>(rest, n, line)?),
            "metric" => {
                metric_line = line;
                metric_rows.push(parse_vector(rest, n, line)?);
            }
            "nilpotent" => nilpotents.push(parse_vector(rest, n, line)?),
            _ => return err(line, format!("unexpected `{kw}`")),
        }
    }
    let n = ring.dim(1)?;
    let algebra = ring.build()?;
    let metric = match (functional, metric_rows.is_empty()) {
        (Some(phi), true) => Some(algebra.pairing_from_functional(&phi)),
        (None, false) if metric_rows.len() == n => Some(Matrix::from_rows(metric_rows)),
        (None, false) => return err(metric_line, format!("expected {n} metric rows")),
        (Some(_), false) => return err(metric_line, "give either `functional` or `metric` rows, not both"),
        (None, true) => None,
    };
    let charges = (!filt.charges.is_empty()).then(|| filt.charges.clone());
    let filtration = filt.build(n)?;
    Ok(AlgebraFile { algebra, metric, nilpotents, filtration, charges })
}

/// ```text
/// dim_x 2
/// dim 3
/// names 1 h h^2
/// degrees 0 1 2
/// mul 1 1: 0 0 1
/// integral 0 0 1
/// c1 0 3 0
/// rank 1
/// chern 1: 0 -3 0
/// ```
pub fn parse_geometry<S: RationalScalar>(text: &str) -> Result<(CohomologyModel<S>, BundleData<S>)> {
    let mut ring = RingBlock::new();
    let mut dim_x = None;
    let mut integral = None;
    let mut c1 = None;
    let mut rank = None;
    let mut chern: BTreeMap<usize, (usize, Vec<S>)> = BTreeMap::new();
    let mut last = 1;
    for (line, kw, rest) in directives(text) {
        last = line;
        if ring.accept(line, kw, rest)? {
            continue;
        }
        match kw {
            "dim_x" => dim_x = Some(parse_usize(rest, line, "a dimension")?),
            "integral" => integral = Some(parse_vector::<S>(rest, ring.dim(line)?, line)?),
            "c1" => c1 = Some(parse_vector::<S>(rest, ring.dim(line)?, line)?),
            "rank" => rank = Some(parse_usize(rest, line, "a rank")?),
            "chern" => {
                let Some((i, v)) = rest.split_once(':') else { return err(line, "expected `chern i: coordinates`") };
                let i = parse_usize(i, line, "a Chern class index")?;
                chern.insert(i, (line, parse_vector(v, ring.dim(line)?, line)?));
            }
            _ => return err(line, format!("unexpected `{kw}`")),
        }
    }
    let n = ring.dim(last)?;
    let ring_line = ring.first_line;
    let algebra = ring.build()?;
    let (Some(dim_x), Some(integral), Some(rank)) = (dim_x, integral, rank) else {
        return err(last, "`dim_x`, `integral` and `rank` are required");
    };
    if rank == 0 {
        return err(last, "bundle rank must be at least 1");
    }
    if let Some((&i, &(line, _))) = chern.iter().find(|(&i, _)| i == 0 || i > rank) {
        return err(line, format!("chern index {i} outside 1..={rank}"));
    }
    let model = CohomologyModel::new(algebra, integral, c1.unwrap_or_else(|| vec![S::zero(); n]), dim_x)
        .map_err(|e| Error::Parse { line: ring_line, msg: e.to_string() })?;
    let classes = (1..=rank).map(|i| chern.get(&i).map(|c| c.1.clone()).unwrap_or_else(|| vec![S::zero(); n])).collect();
    let bundle = BundleData::new(&model, classes).map_err(|e| Error::Parse { line: last, msg: e.to_string() })?;
    Ok((model, bundle))
}

/// ```text
/// max_degree 3
/// lambda_bound 2
/// record 1 | 1 1 1 | 3      # degree vector | insertions | value in λ
/// ```
pub fn parse_gw_dataset<S: RationalScalar>(text: &str) -> Result<GWDataset<S>> {
    let mut max_degree = None;
    let mut bound = None;
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for (line, kw, rest) in directives(text) {
        match kw {
            "max_degree" => {
                max_degree = Some(rest.split_whitespace().map(|t| parse_usize(t, line, "a degree").map(|d| d as u32)).collect::<Result<Vec<_>>>()?)
            }
            "lambda_bound" => bound = Some(parse_usize(rest, line, "a λ-degree bound")?),
            "record" => {
                let parts: Vec<&str> = rest.split('|').collect();
                let [d, ins, v] = parts[..] else { return err(line, "expected `record d… | insertions… | value`") };
                let degree = d.split_whitespace().map(|t| parse_usize(t, line, "a degree").map(|x| x as u32)).collect::<Result<Vec<_>>>()?;
                let insertions = ins.split_whitespace().map(|t| parse_usize(t, line, "an insertion index")).collect::<Result<Vec<_>>>()?;
                records.push(GwRecord { degree, insertions, value: parse_poly(v, line)? });
                lines.push(line);
            }
            _ => return err(line, format!("unexpected `{kw}`")),
        }
    }
    let (Some(max_degree), Some(bound)) = (max_degree, bound) else {
        return err(1, "header needs `max_degree` and `lambda_bound`");
    };
    // report the offending record's line
    GWDataset::new(max_degree, bound, records).map_err(|e| match &e {
        Error::InvalidDataset(m) => {
            let idx = m.strip_prefix("record ").and_then(|r| r.split(':').next()).and_then(|k| k.parse::<usize>().ok());
            match idx.and_then(|k| lines.get(k - 1)) {
                Some(&line) => Error::Parse { line, msg: m.clone() },
                None => e,
            }
        }
        _ => e,
    })
}

pub fn write_gw_dataset<S: Scalar>(gw: &GWDataset<S>) -> String {
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("max_degree {}\nlambda_bound {}\n", join(gw.max_degree()), gw.lambda_bound());
    for (d, ins, v) in gw.records() {
        let ins: Vec<String> = ins.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "record {} | {} | {}", join(d), ins.join(" "), write_laurent(&LaurentPoly::from_poly(v)));
    }
    out
}

/// Structure constants, Euler field and optional metric data over a frame.
///
/// ```text
/// vars t0:t q1:q t2:t
/// order 4
/// unit 1 0 0
/// C 1 1 2: 0 1 0 = -3      # term of C_(1,1)^2 at monomial q1 (λ allowed)
/// E 0: 1 0 0 = 1
/// metric 9*l^-3, 3*l^-2, l^-1   # N rows: a localized structure
/// charge 3
/// jump 0 …                   # or a filtration: a formal MFS
/// ```
/// A term given for C_(a,b)^g with none for C_(b,a)^g is copied there.
#[derive(Clone, Debug)]
pub struct StructureFile<S: Scalar> {
    pub frame: Frame,
    pub order: usize,
    pub unit: Vec<S>,
    pub table: Vec<Vec<Vec<TruncatedSeries<LaurentPoly<S>>>>>,
    pub euler: Vec<TruncatedSeries<LaurentPoly<S>>>,
    pub metric: Option<LaurentMatrix<S>>,
    pub charge: Option<S>,
    pub filtration: Option<NondegenerateFiltration<S>>,
    pub charges: BTreeMap<i64, S>,
    lambda_line: Option<usize>,
}

pub fn parse_structure<S: RationalScalar>(text: &str) -> Result<StructureFile<S>> {
    let mut frame: Option<Frame> = None;
    let mut order = 4;
    let mut unit = None;
    let mut c_terms: BTreeMap<(usize, usize, usize), Vec<(Vec<u32>, LaurentPoly<S>)>> = BTreeMap::new();
    let mut e_terms: Vec<(usize, Vec<u32>, LaurentPoly<S>)> = Vec::new();
    let mut metric_rows = Vec::new();
    let mut metric_line = 0;
    let mut charge = None;
    let mut filt = FiltrationBlock::new();
    let mut lambda_line = None;
    let mut last = 1;
    for (line, kw, rest) in directives(text) {
        last = line;
        let n = frame.as_ref().map(Frame::len);
        if filt.accept(line, kw, rest, n)? {
            continue;
        }
        if kw == "vars" {
            let mut names = Vec::new();
            let mut kinds = Vec::new();
            for v in rest.split_whitespace() {
                let Some((name, kind)) = v.split_once(':') else { return err(line, format!("`{v}`: expected name:t or name:q")) };
                names.push(name.to_string());
                kinds.push(match kind {
                    "t" => VarKind::T,
                    "q" => VarKind::Q,
                    _ => return err(line, format!("unknown variable kind `{kind}`")),
                });
            }
            frame = Some(Frame::new(names, kinds));
            continue;
        }
        let Some(n) = n else { return err(line, "`vars` must come first") };
        match kw {
            "order" => order = parse_usize(rest, line, "a truncation order")?,
            "unit" => unit = Some(parse_vector::<S>(rest, n, line)?),
            "charge" => charge = Some(parse_scalar::<S>(rest, line)?),
            "metric" => {
                metric_line = line;
                let row = rest.split(',').map(|e| parse_laurent(e, line)).collect::<Result<Vec<_>>>()?;
                if row.len() != n {
                    return err(line, format!("metric row has {} entries, expected {n}", row.len()));
                }
                metric_rows.push(row);
            }
            "C" | "E" => {
                let Some((head, body)) = rest.split_once(':') else { return err(line, format!("expected `{kw} indices: exponents = coefficient`")) };
                let Some((exps, coeff)) = body.split_once('=') else { return err(line, "missing `= coefficient`") };
                let idx = head.split_whitespace().map(|t| parse_usize(t, line, "an index")).collect::<Result<Vec<_>>>()?;
                if idx.iter().any(|&i| i >= n) {
                    return err(line, format!("index out of range 0..{n}"));
                }
                let e = exps.split_whitespace().map(|t| parse_usize(t, line, "an exponent").map(|x| x as u32)).collect::<Result<Vec<_>>>()?;
                if e.len() != n {
                    return err(line, format!("expected {n} exponents"));
                }
                let c = parse_laurent::<S>(coeff, line)?;
                if lambda_line.is_none() && !(c.is_zero() || c.min_exponent() == Some(0) && c.max_exponent() == Some(0)) {
                    lambda_line = Some(line);
                }
                match (kw, &idx[..]) {
                    ("C", &[a, b, g]) => c_terms.entry((a, b, g)).or_default().push((e, c)),
                    ("E", &[g]) => e_terms.push((g, e, c)),
                    _ => return err(line, "wrong number of indices"),
                }
            }
            _ => return err(line, format!("unexpected `{kw}`")),
        }
    }
    let Some(frame) = frame else { return err(last, "missing `vars`") };
    let n = frame.len();
    let Some(unit) = unit else { return err(last, "missing `unit`") };
    let mut table = vec![vec![vec![TruncatedSeries::zero(n, order); n]; n]; n];
    for (&(a, b, g), terms) in &c_terms {
        for (e, c) in terms {
            table[a][b][g].add_term(e.clone(), c.clone());
            if a != b && !c_terms.contains_key(&(b, a, g)) {
                table[b][a][g].add_term(e.clone(), c.clone());
            }
        }
    }
    let mut euler = vec![TruncatedSeries::zero(n, order); n];
    for (g, e, c) in e_terms {
        euler[g].add_term(e, c);
    }
    let metric = match metric_rows.len() {
        0 => None,
        k if k == n => Some(Matrix::from_rows(metric_rows)),
        k => return err(metric_line, format!("expected {n} metric rows, found {k}")),
    };
    let charges = filt.charges.clone();
    let filtration = filt.build(n)?;
    Ok(StructureFile { frame, order, unit, table, euler, metric, charge, filtration, charges, lambda_line })
}

impl<S: Scalar> StructureFile<S> {
    /// The structure over K; fails if any coefficient involves λ.
    pub fn scalar_saito(&self) -> Result<FormalSaito<S>> {
        if let Some(line) = self.lambda_line {
            return err(line, "λ-dependent coefficient in a structure over K (add `metric` rows for a localized structure)");
        }
        let drop = |s: &TruncatedSeries<LaurentPoly<S>>| s.map(|c| c.value_at_zero().unwrap_or_else(S::zero));
        let table = self.table.iter().map(|r| r.iter().map(|v| v.iter().map(drop).collect()).collect()).collect();
        let euler = self.euler.iter().map(drop).collect();
        FormalSaito::new(self.frame.clone(), self.order, table, self.unit.clone(), euler)
    }

    pub fn localized(&self) -> Result<LocalizedFormalFrobenius<S>> {
        let Some(m) = &self.metric else { return err(1, "a localized structure needs `metric` rows") };
        let Some(charge) = &self.charge else { return err(1, "a localized structure needs `charge`") };
        let saito = FormalSaito::new(self.frame.clone(), self.order, self.table.clone(), self.unit.clone(), self.euler.clone())?;
        Ok(LocalizedFormalFrobenius { saito, metric: LocalizedMetric::new(m.clone())?, charge: charge.clone() })
    }
}
