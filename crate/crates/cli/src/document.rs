//! Line-oriented input documents.
//!
//! ```text
//! # lower-triangular 2x2 integer matrices
//! base Z
//! rank 3
//! mult 0 0 = [1 0 0]
//! mult 1 0 = [0 1 0]
//! mult 2 1 = [0 1 0]
//! mult 2 2 = [0 0 1]
//! one = [1 0 1]
//! central two = [2 0 2]
//!
//! module S2
//!   gens 1
//!   action 0 = [1]
//!   action 1 = [0]
//!   action 2 = [0]
//! end
//! ```
//!
//! Vectors are `[a b c]`, matrices `[a b; c d]` (rows separated by `;`).
//! Unlisted `mult` entries are zero. `relations` matrices hold one relation
//! per column. A `certificate NAME for MODULE` block lists `stage MODULE copies K`
//! lines, each followed by its `map`, `section` and `retraction` matrices.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use tiltbase_core::algebra::{validate_algebra, AlgModule, Algebra, CentralElement};
use tiltbase_core::linalg::{BaseRing, Elem, FgModule, Matrix};
use tiltbase_core::tilting::{verify_coresolution, AddCertificate, CoresolutionCertificate, Stage};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, field `{field}`: {message}")]
pub struct ParseError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub name: String,
    pub gens: usize,
    pub relations: Matrix,
    pub actions: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageSpec {
    pub module: String,
    pub copies: usize,
    pub map: Matrix,
    pub section: Matrix,
    pub retraction: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateSpec {
    pub name: String,
    pub module: String,
    pub stages: Vec<StageSpec>,
}

/// A parsed document: shapes are checked, algebraic identities are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub base: BaseRing,
    pub rank: usize,
    pub relations: Matrix,
    /// `mult[i][j]` = coordinates of `e_i e_j`.
    pub mult: Vec<Vec<Vec<Elem>>>,
    pub one: Vec<Elem>,
    pub centrals: Vec<(String, Vec<Elem>)>,
    pub modules: Vec<ModuleSpec>,
    pub certificates: Vec<CertificateSpec>,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn err(line: usize, field: &str, message: impl Into<String>) -> ParseError {
    ParseError { line, field: field.to_string(), message: message.into() }
}

fn parse_usize(line: usize, field: &str, s: &str) -> Result<usize, ParseError> {
    s.trim().parse().map_err(|_| err(line, field, format!("expected a non-negative integer, found `{}`", s.trim())))
}

fn parse_rows(base: &BaseRing, line: usize, field: &str, s: &str) -> Result<Vec<Vec<Elem>>, ParseError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err(line, field, format!("expected a bracketed literal, found `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| base.parse_elem(tok).map_err(|e| err(line, field, e.to_string())))
                .collect()
        })
        .collect()
}

fn parse_vector(base: &BaseRing, line: usize, field: &str, s: &str, len: usize) -> Result<Vec<Elem>, ParseError> {
    let rows = parse_rows(base, line, field, s)?;
    let v = match rows.len() {
        0 => Vec::new(),
        1 => rows.into_iter().next().unwrap_or_default(),
        _ => return Err(err(line, field, "expected a vector, found a matrix")),
    };
    if v.len() != len {
        return Err(err(line, field, format!("expected {len} entries, found {}", v.len())));
    }
    Ok(v)
}

/// `rows` is always enforced; `cols` only when given.
fn parse_matrix(
    base: &BaseRing,
    line: usize,
    field: &str,
    s: &str,
    rows: usize,
    cols: Option<usize>,
) -> Result<Matrix, ParseError> {
    let data = parse_rows(base, line, field, s)?;
    if data.is_empty() {
        return match cols {
            Some(c) if rows == 0 || c == 0 => Ok(Matrix::zeros(base, rows, c)),
            None if rows == 0 => Ok(Matrix::zeros(base, 0, 0)),
            _ => Err(err(line, field, format!("empty literal where {rows} rows are expected"))),
        };
    }
    if data.len() != rows {
        return Err(err(line, field, format!("expected {rows} rows, found {}", data.len())));
    }
    let c = data[0].len();
    if data.iter().any(|r| r.len() != c) {
        return Err(err(line, field, "rows have different lengths"));
    }
    if let Some(want) = cols {
        if want != c {
            return Err(err(line, field, format!("expected {want} columns, found {c}")));
        }
    }
    Ok(Matrix::from_elems(base, rows, c, data.into_iter().flatten().collect()))
}

fn valid_name(line: usize, field: &str, s: &str) -> Result<String, ParseError> {
    let ok = !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '\'');
    if ok {
        Ok(s.to_string())
    } else {
        Err(err(line, field, format!("invalid name `{s}`")))
    }
}

/// `key rest` split at the first whitespace.
fn head(text: &str) -> (&str, &str) {
    match text.split_once(char::is_whitespace) {
        Some((k, r)) => (k, r.trim()),
        None => (text, ""),
    }
}

fn after_eq<'a>(line: usize, field: &str, s: &'a str) -> Result<&'a str, ParseError> {
    s.trim().strip_prefix('=').map(str::trim).ok_or_else(|| err(line, field, "expected `=`"))
}

struct Parser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Option<&Line<'a>> {
        let l = self.lines.get(self.pos);
        self.pos += 1;
        l
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(0, |l| l.no)
    }
}

pub fn parse(src: &str) -> Result<Document, ParseError> {
    let lines = src
        .lines()
        .enumerate()
        .map(|(i, raw)| Line { no: i + 1, text: raw.split('#').next().unwrap_or("").trim() })
        .filter(|l| !l.text.is_empty())
        .collect();
    let mut p = Parser { lines, pos: 0 };

    let mut base = None;
    let mut rank = None;
    let mut relations: Option<Matrix> = None;
    let mut mult: Vec<Vec<Option<Vec<Elem>>>> = Vec::new();
    let mut one = None;
    let mut centrals: Vec<(String, Vec<Elem>)> = Vec::new();
    let mut modules: Vec<ModuleSpec> = Vec::new();
    let mut certificates: Vec<CertificateSpec> = Vec::new();

    while let Some(l) = p.next() {
        let (no, (key, rest)) = (l.no, head(l.text));
        let need_base = |base: &Option<BaseRing>| base.clone().ok_or_else(|| err(no, key, "`base` must come first"));
        let need_rank = |rank: Option<usize>| rank.ok_or_else(|| err(no, key, "`rank` must come before this line"));
        match key {
            "base" => {
                if base.is_some() {
                    return Err(err(no, key, "duplicate `base`"));
                }
                base = Some(BaseRing::parse(rest).map_err(|e| err(no, key, e.to_string()))?);
            }
            "rank" => {
                need_base(&base)?;
                if rank.is_some() {
                    return Err(err(no, key, "duplicate `rank`"));
                }
                let g = parse_usize(no, key, rest)?;
                if g == 0 {
                    return Err(err(no, key, "rank must be positive"));
                }
                rank = Some(g);
                mult = vec![vec![None; g]; g];
            }
            "relations" => {
                let (b, g) = (need_base(&base)?, need_rank(rank)?);
                relations = Some(parse_matrix(&b, no, key, rest, g, None)?);
            }
            "mult" => {
                let (b, g) = (need_base(&base)?, need_rank(rank)?);
                let (ij, v) = rest.split_once('=').ok_or_else(|| err(no, key, "expected `mult i j = [..]`"))?;
                let idx: Vec<&str> = ij.split_whitespace().collect();
                if idx.len() != 2 {
                    return Err(err(no, key, "expected two indices"));
                }
                let (i, j) = (parse_usize(no, key, idx[0])?, parse_usize(no, key, idx[1])?);
                if i >= g || j >= g {
                    return Err(err(no, key, format!("index out of range for rank {g}")));
                }
                if mult[i][j].is_some() {
                    return Err(err(no, key, format!("duplicate entry ({i}, {j})")));
                }
                mult[i][j] = Some(parse_vector(&b, no, key, v, g)?);
            }
            "one" => {
                let (b, g) = (need_base(&base)?, need_rank(rank)?);
                one = Some(parse_vector(&b, no, key, after_eq(no, key, rest)?, g)?);
            }
            "central" => {
                let (b, g) = (need_base(&base)?, need_rank(rank)?);
                let (name, v) = rest.split_once('=').ok_or_else(|| err(no, key, "expected `central NAME = [..]`"))?;
                let name = valid_name(no, key, name.trim())?;
                if centrals.iter().any(|(n, _)| *n == name) {
                    return Err(err(no, key, format!("duplicate central element `{name}`")));
                }
                centrals.push((name, parse_vector(&b, no, key, v, g)?));
            }
            "module" => {
                let (b, g) = (need_base(&base)?, need_rank(rank)?);
                let name = valid_name(no, key, rest)?;
                if modules.iter().any(|m| m.name == name) {
                    return Err(err(no, key, format!("duplicate module `{name}`")));
                }
                modules.push(parse_module(&mut p, &b, g, name, no)?);
            }
            "certificate" => {
                let b = need_base(&base)?;
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[1] != "for" {
                    return Err(err(no, key, "expected `certificate NAME for MODULE`"));
                }
                let name = valid_name(no, key, parts[0])?;
                let module = valid_name(no, key, parts[2])?;
                certificates.push(parse_certificate(&mut p, &b, need_rank(rank)?, &modules, name, module, no)?);
            }
            other => return Err(err(no, other, "unknown keyword")),
        }
    }

    let end = p.last_line();
    let base = base.ok_or_else(|| err(end, "base", "missing `base`"))?;
    let rank = rank.ok_or_else(|| err(end, "rank", "missing `rank`"))?;
    let one = one.ok_or_else(|| err(end, "one", "missing `one`"))?;
    let mult = mult
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.unwrap_or_else(|| vec![base.zero(); rank])).collect())
        .collect();
    let relations = relations.unwrap_or_else(|| Matrix::zeros(&base, rank, 0));
    Ok(Document { base, rank, relations, mult, one, centrals, modules, certificates })
}

fn parse_module(p: &mut Parser, b: &BaseRing, g: usize, name: String, start: usize) -> Result<ModuleSpec, ParseError> {
    let mut gens = None;
    let mut relations = None;
    let mut actions: Vec<Option<Matrix>> = vec![None; g];
    loop {
        let Some(l) = p.next() else {
            return Err(err(start, "module", format!("module `{name}` is missing `end`")));
        };
        let (no, (key, rest)) = (l.no, head(l.text));
        match key {
            "end" => break,
            "gens" => gens = Some(parse_usize(no, key, rest)?),
            "relations" => {
                let k = gens.ok_or_else(|| err(no, key, "`gens` must come first"))?;
                relations = Some(parse_matrix(b, no, key, rest, k, None)?);
            }
            "action" => {
                let k = gens.ok_or_else(|| err(no, key, "`gens` must come first"))?;
                let (i, m) = rest.split_once('=').ok_or_else(|| err(no, key, "expected `action i = [..]`"))?;
                let i = parse_usize(no, key, i)?;
                if i >= g {
                    return Err(err(no, key, format!("index out of range for rank {g}")));
                }
                if actions[i].is_some() {
                    return Err(err(no, key, format!("duplicate action {i}")));
                }
                actions[i] = Some(parse_matrix(b, no, key, m, k, Some(k))?);
            }
            other => return Err(err(no, other, "unknown keyword inside `module`")),
        }
    }
    let gens = gens.ok_or_else(|| err(start, "gens", format!("module `{name}` has no `gens`")))?;
    let relations = relations.unwrap_or_else(|| Matrix::zeros(b, gens, 0));
    let actions = actions
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.ok_or_else(|| err(start, "action", format!("module `{name}` is missing action {i}"))))
        .collect::<Result<_, _>>()?;
    Ok(ModuleSpec { name, gens, relations, actions })
}

fn parse_certificate(
    p: &mut Parser,
    b: &BaseRing,
    g: usize,
    modules: &[ModuleSpec],
    name: String,
    module: String,
    start: usize,
) -> Result<CertificateSpec, ParseError> {
    let gens_of = |no: usize, field: &str, m: &str| {
        modules
            .iter()
            .find(|s| s.name == m)
            .map(|s| s.gens)
            .ok_or_else(|| err(no, field, format!("unknown module `{m}`")))
    };
    let t_gens = gens_of(start, "certificate", &module)?;
    let mut stages: Vec<(usize, String, usize, Option<Matrix>, Option<Matrix>, Option<Matrix>)> = Vec::new();
    loop {
        let Some(l) = p.next() else {
            return Err(err(start, "certificate", format!("certificate `{name}` is missing `end`")));
        };
        let (no, (key, rest)) = (l.no, head(l.text));
        match key {
            "end" => break,
            "stage" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[1] != "copies" {
                    return Err(err(no, key, "expected `stage MODULE copies K`"));
                }
                gens_of(no, key, parts[0])?;
                stages.push((no, parts[0].to_string(), parse_usize(no, key, parts[2])?, None, None, None));
            }
            "map" | "section" | "retraction" => {
                if stages.is_empty() {
                    return Err(err(no, key, "no `stage` line before this"));
                }
                let src_gens = if stages.len() == 1 {
                    g
                } else {
                    gens_of(no, key, &stages[stages.len() - 2].1)?
                };
                let st = stages.last_mut().expect("nonempty");
                let here = gens_of(no, key, &st.1)?;
                let text = after_eq(no, key, rest)?;
                let (rows, cols, slot) = match key {
                    "map" => (here, src_gens, &mut st.3),
                    "section" => (st.2 * t_gens, here, &mut st.4),
                    _ => (here, st.2 * t_gens, &mut st.5),
                };
                if slot.is_some() {
                    return Err(err(no, key, "duplicate entry for this stage"));
                }
                *slot = Some(parse_matrix(b, no, key, text, rows, Some(cols))?);
            }
            other => return Err(err(no, other, "unknown keyword inside `certificate`")),
        }
    }
    if stages.is_empty() {
        return Err(err(start, "certificate", format!("certificate `{name}` has no stages")));
    }
    let stages = stages
        .into_iter()
        .map(|(no, module, copies, map, section, retraction)| {
            let need = |m: Option<Matrix>, f: &str| m.ok_or_else(|| err(no, f, "missing for this stage"));
            Ok(StageSpec {
                module,
                copies,
                map: need(map, "map")?,
                section: need(section, "section")?,
                retraction: need(retraction, "retraction")?,
            })
        })
        .collect::<Result<_, ParseError>>()?;
    Ok(CertificateSpec { name, module, stages })
}

fn write_vector(out: &mut String, b: &BaseRing, v: &[Elem]) {
    out.push('[');
    for (i, e) in v.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{}", b.display(e));
    }
    out.push(']');
}

fn write_matrix(out: &mut String, m: &Matrix) {
    out.push('[');
    for i in 0..m.rows() {
        if i > 0 {
            out.push_str("; ");
        }
        let row = m.row(i);
        for (j, e) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", m.base().display(e));
        }
    }
    out.push(']');
}

impl fmt::Display for Document {
    /// The canonical text form; [`parse`] reads it back to an equal document.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.base;
        let mut out = String::new();
        let _ = writeln!(out, "base {b}");
        let _ = writeln!(out, "rank {}", self.rank);
        if self.relations.cols() > 0 {
            out.push_str("relations ");
            write_matrix(&mut out, &self.relations);
            out.push('\n');
        }
        for (i, row) in self.mult.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.iter().any(|e| !e.is_zero()) {
                    let _ = write!(out, "mult {i} {j} = ");
                    write_vector(&mut out, b, v);
                    out.push('\n');
                }
            }
        }
        out.push_str("one = ");
        write_vector(&mut out, b, &self.one);
        out.push('\n');
        for (name, v) in &self.centrals {
            let _ = write!(out, "central {name} = ");
            write_vector(&mut out, b, v);
            out.push('\n');
        }
        for m in &self.modules {
            let _ = writeln!(out, "\nmodule {}", m.name);
            let _ = writeln!(out, "  gens {}", m.gens);
            if m.relations.cols() > 0 {
                out.push_str("  relations ");
                write_matrix(&mut out, &m.relations);
                out.push('\n');
            }
            for (i, a) in m.actions.iter().enumerate() {
                let _ = write!(out, "  action {i} = ");
                write_matrix(&mut out, a);
                out.push('\n');
            }
            out.push_str("end\n");
        }
        for c in &self.certificates {
            let _ = writeln!(out, "\ncertificate {} for {}", c.name, c.module);
            for s in &c.stages {
                let _ = writeln!(out, "  stage {} copies {}", s.module, s.copies);
                for (label, m) in [("map", &s.map), ("section", &s.section), ("retraction", &s.retraction)] {
                    let _ = write!(out, "    {label} = ");
                    write_matrix(&mut out, m);
                    out.push('\n');
                }
            }
            out.push_str("end\n");
        }
        f.write_str(&out)
    }
}

/// Validation failures, each naming what is violated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Violations(pub Vec<String>);

impl Violations {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl ModuleSpec {
    pub fn from_module(name: impl Into<String>, m: &AlgModule) -> Self {
        ModuleSpec { name: name.into(), gens: m.gens(), relations: m.relations().clone(), actions: m.actions().to_vec() }
    }
}

impl Document {
    /// A document for `a` with no central elements, modules or certificates.
    pub fn for_algebra(a: &Algebra) -> Self {
        Document {
            base: a.base().clone(),
            rank: a.rank(),
            relations: a.relations().clone(),
            mult: a.table().to_vec(),
            one: a.one().to_vec(),
            centrals: Vec::new(),
            modules: Vec::new(),
            certificates: Vec::new(),
        }
    }

    /// The algebra with shapes checked (identities are checked by [`Document::validate`]).
    pub fn algebra(&self) -> Arc<Algebra> {
        let u = FgModule::new(self.relations.clone());
        Arc::new(Algebra::new(u, self.mult.clone(), self.one.clone()).expect("shapes checked by the parser"))
    }

    pub fn module_spec(&self, name: &str) -> Option<&ModuleSpec> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn module(&self, a: &Arc<Algebra>, name: &str) -> Option<AlgModule> {
        let s = self.module_spec(name)?;
        let u = FgModule::new(s.relations.clone());
        Some(AlgModule::new(a, u, s.actions.clone()).expect("shapes checked by the parser"))
    }

    pub fn central(&self, name: &str) -> Option<&[Elem]> {
        self.centrals.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    /// `Err` carries the reason the named element is not central.
    pub fn central_element(&self, a: &Arc<Algebra>, name: &str) -> Option<tiltbase_core::Result<CentralElement>> {
        self.central(name).map(|v| CentralElement::new(a, v.to_vec()))
    }

    pub fn certificate(&self, a: &Arc<Algebra>, spec: &CertificateSpec) -> CoresolutionCertificate {
        let stages = spec
            .stages
            .iter()
            .map(|s| Stage {
                module: self.module(a, &s.module).expect("stage modules checked by the parser"),
                map: s.map.clone(),
                add: AddCertificate { copies: s.copies, section: s.section.clone(), retraction: s.retraction.clone() },
            })
            .collect();
        CoresolutionCertificate { stages }
    }

    /// Algebra identities, module axioms, centrality and certificates.
    pub fn validate(&self) -> Violations {
        let mut out = Vec::new();
        let a = self.algebra();
        for v in validate_algebra(&a) {
            out.push(format!("algebra: {v}"));
        }
        if !out.is_empty() {
            // module and centrality checks presuppose an algebra
            return Violations(out);
        }
        for (name, v) in &self.centrals {
            match tiltbase_core::algebra::is_central(v, &a) {
                Ok(true) => {}
                Ok(false) => out.push(format!("central `{name}`: not central")),
                Err(e) => out.push(format!("central `{name}`: {e}")),
            }
        }
        let mut bad_modules = Vec::new();
        for s in &self.modules {
            let m = self.module(&a, &s.name).expect("listed");
            let vs = m.validate();
            if !vs.is_empty() {
                bad_modules.push(s.name.clone());
            }
            for v in vs {
                out.push(format!("module `{}`: {v}", s.name));
            }
        }
        for c in &self.certificates {
            if bad_modules.contains(&c.module) || c.stages.iter().any(|s| bad_modules.contains(&s.module)) {
                out.push(format!("certificate `{}`: refers to an invalid module", c.name));
                continue;
            }
            let t = self.module(&a, &c.module).expect("checked by the parser");
            match verify_coresolution(&t, &self.certificate(&a, c)) {
                Ok(check) => {
                    for s in check.spots.iter().filter(|s| !s.ok) {
                        out.push(format!("certificate `{}` at {}: {}", c.name, s.spot, s.detail));
                    }
                }
                Err(e) => out.push(format!("certificate `{}`: {e}", c.name)),
            }
        }
        Violations(out)
    }
}
