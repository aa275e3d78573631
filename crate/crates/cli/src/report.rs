//! Reports: a fixed JSON envelope for machines, plain text for people.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use tiltbase_core::basechange::{LemmaReport, Verdict};
use tiltbase_core::tilting::{MainStatus, MainTheoremReport, T3Status, TiltingReport};

pub const TOOL: &str = "tiltbase";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The process exit status; every path ends in exactly one of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    Precondition = 2,
    Input = 3,
    Inconclusive = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    d.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub status: Exit,
    pub exit_code: i32,
    pub body: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, input: &[u8], status: Exit, body: Value) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.into(),
            input_digest: digest(input),
            status,
            exit_code: status.code(),
            body,
        }
    }

    pub fn machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// What a command produced: the report, its human rendering, and any
/// diagnostics destined for the error stream.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit: Exit,
    pub report: Option<Report>,
    pub human: String,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    pub fn error(exit: Exit, message: impl Into<String>) -> Self {
        Outcome { exit, report: None, human: String::new(), diagnostics: vec![message.into()] }
    }
}

fn line(out: &mut String, indent: usize, s: impl AsRef<str>) {
    let _ = writeln!(out, "{:indent$}{}", "", s.as_ref());
}

pub fn render_tilting(out: &mut String, name: &str, r: &TiltingReport, indent: usize) {
    line(out, indent, format!("{name} over {} with n = {}", r.base, r.n));
    let i = indent + 2;
    if let Some(pd) = &r.pd_lambda {
        line(out, i, format!("over Λ: {pd}"));
    }
    for e in &r.ext_lambda {
        line(out, i, format!("Ext^{}_Λ(T, T) = {}", e.degree, e.group));
    }
    if let Some(g) = &r.end_group {
        line(out, i, format!("End_Λ(T) = {g} as a group"));
    }
    if let Some(rho) = &r.rho {
        let state = match (rho.injective, rho.surjective) {
            (true, true) => "bijective".to_string(),
            _ => format!("kernel {}, cokernel {}", rho.kernel, rho.cokernel),
        };
        line(out, i, format!("Λ -> End_Γ(T): {state}"));
    }
    if let Some(pd) = &r.pd_end {
        line(out, i, format!("over the tilted ring: {pd}"));
    }
    for e in &r.ext_end {
        line(out, i, format!("Ext^{}_Γ(T, T) = {}", e.degree, e.group));
    }
    match &r.t3 {
        T3Status::Certified { length, copies } => {
            line(out, i, format!("coresolution of Λ: length {length}, copies {copies:?}"));
        }
        T3Status::NotFound => line(out, i, "coresolution of Λ: none within bounds"),
        T3Status::NotSearched => {}
    }
    line(out, i, format!("verdict: {}", r.overall));
}

pub fn render_lemma(out: &mut String, r: &LemmaReport, indent: usize) {
    let v = match &r.verdict {
        Verdict::Holds => "holds".to_string(),
        Verdict::Fails(d) => format!("FAILS: {d}"),
        Verdict::Inapplicable(d) => format!("inapplicable: {d}"),
    };
    line(out, indent, format!("{}: {v}", r.lemma));
    for c in &r.comparisons {
        line(out, indent + 2, format!("{}: {} | {}", c.label, c.lhs, c.rhs));
    }
}

pub fn render_main(out: &mut String, r: &MainTheoremReport, indent: usize) {
    line(out, indent, format!("x = {}, n = {}", r.x, r.n));
    let i = indent + 2;
    line(out, i, format!("x regular on T: {}, on Λ: {}", r.regular_on_t, r.regular_on_lambda));
    for (name, leg) in [("Λ", &r.upstairs), ("Λ_x", &r.localized), ("Λ/xΛ", &r.quotient)] {
        if let Some(t) = leg {
            render_tilting(out, name, t, i);
        }
    }
    for l in &r.identifications {
        render_lemma(out, l, i);
    }
    let status = match &r.status {
        MainStatus::Consistent => "consistent".to_string(),
        MainStatus::Inconsistent(why) => format!("INCONSISTENT: {}", why.join("; ")),
        MainStatus::Inapplicable(why) => format!("inapplicable: {why}"),
        MainStatus::Inconclusive => "inconclusive (a leg is unknown)".to_string(),
    };
    line(out, i, format!("status: {status}"));
    for n in &r.notes {
        line(out, i, format!("note: {n}"));
    }
}
