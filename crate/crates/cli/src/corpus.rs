//! Built-in corpus: small algebras with known answers, stored as documents
//! and run against their expected verdicts.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};
use tiltbase_core::algebra::{AlgModule, Algebra, CentralElement};
use tiltbase_core::basechange::{
    check_end_localization_iso, check_end_mod_x_iso, check_ext_localization_iso, check_ext_quotient_iso,
    check_pd_max_formula, check_self_orthogonality_descent, LemmaReport,
};
use tiltbase_core::par::Exec;
use tiltbase_core::tilting::{
    check_main_theorem, derive_upstairs, is_classical_tilting, is_classical_tilting_auto, MainStatus, Overall,
    TiltingOptions,
};

use crate::document::{parse, Document};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Yes,
    No,
    Unknown,
}

impl Expect {
    pub fn of(o: &Overall) -> Self {
        match o {
            Overall::Yes => Expect::Yes,
            Overall::No { .. } => Expect::No,
            Overall::Unknown { .. } => Expect::Unknown,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Check {
    /// `n = None` searches `0..=n_max`.
    Tilting { module: &'static str, n: Option<usize>, expect: Expect },
    /// Consistent, with the upstairs / localized / quotient verdicts given.
    Main { module: &'static str, x: &'static str, n: usize, legs: [Expect; 3] },
    /// The upstairs verdict derived from the two base changes alone.
    Derived { module: &'static str, x: &'static str, n: usize, expect: Expect },
    /// Every base-change lemma on `M` (with `T = M`): none may fail.
    Lemmas { module: &'static str, x: &'static str },
}

pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
    pub checks: Vec<Check>,
}

impl Entry {
    pub fn document(&self) -> Document {
        parse(self.source).expect("corpus documents parse")
    }
}

pub fn entries() -> Vec<Entry> {
    use Check::*;
    use Expect::*;
    vec![
        Entry {
            name: "dual-numbers",
            summary: "Z[ε]/(ε²), x = 2; T = Λ ⊕ Z is not tilting on either side",
            source: include_str!("../corpus/dual-numbers.tb"),
            checks: vec![
                Tilting { module: "T", n: Some(1), expect: No },
                Tilting { module: "Lambda", n: Some(0), expect: Yes },
                Main { module: "T", x: "two", n: 1, legs: [No, No, No] },
                Derived { module: "T", x: "two", n: 1, expect: No },
                Lemmas { module: "Lambda", x: "two" },
                Lemmas { module: "Z", x: "two" },
            ],
        },
        Entry {
            name: "group-ring-c2",
            summary: "Z[C_2], x = 2; T = Λ, with the trivial module as a negative lemma instance",
            source: include_str!("../corpus/group-ring-c2.tb"),
            checks: vec![
                Tilting { module: "Lambda", n: Some(0), expect: Yes },
                Main { module: "Lambda", x: "two", n: 0, legs: [Yes, Yes, Yes] },
                Tilting { module: "Ztriv", n: None, expect: Unknown },
                Lemmas { module: "Lambda", x: "two" },
                Lemmas { module: "Ztriv", x: "two" },
                Lemmas { module: "Ztriv", x: "three" },
                Lemmas { module: "Zsign", x: "two" },
            ],
        },
        Entry {
            name: "integers",
            summary: "Z, x = 2; T = Z and T = Z²",
            source: include_str!("../corpus/integers.tb"),
            checks: vec![
                Tilting { module: "Lambda", n: Some(0), expect: Yes },
                Tilting { module: "Z2", n: Some(0), expect: Yes },
                Tilting { module: "Z_Z4", n: None, expect: No },
                Main { module: "Lambda", x: "two", n: 0, legs: [Yes, Yes, Yes] },
                Main { module: "Z2", x: "two", n: 0, legs: [Yes, Yes, Yes] },
                Lemmas { module: "Lambda", x: "two" },
                Lemmas { module: "Z2", x: "two" },
                Lemmas { module: "Z_Z4", x: "two" },
                Lemmas { module: "Z_Z4", x: "three" },
            ],
        },
        Entry {
            name: "triangular",
            summary: "lower-triangular 2x2 over Z, x = 2; T = P2 ⊕ P2/P1 is 1-tilting",
            source: include_str!("../corpus/triangular.tb"),
            checks: vec![
                Tilting { module: "T", n: Some(1), expect: Yes },
                Tilting { module: "T", n: None, expect: Yes },
                Tilting { module: "S2", n: Some(1), expect: No },
                Main { module: "T", x: "two", n: 1, legs: [Yes, Yes, Yes] },
                Main { module: "T", x: "three", n: 1, legs: [Yes, Yes, Yes] },
                Derived { module: "T", x: "two", n: 1, expect: Yes },
                Lemmas { module: "T", x: "two" },
                Lemmas { module: "P1", x: "two" },
                Lemmas { module: "S2", x: "two" },
            ],
        },
    ]
}

pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

pub fn find(name: &str) -> Option<Entry> {
    entries().into_iter().find(|e| e.name == name)
}

/// Bounds shared by every command.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub n: Option<usize>,
    pub n_max: usize,
    pub i_max: usize,
    pub max_len: Option<usize>,
    pub max_width: Option<usize>,
    pub exec: Exec,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { n: None, n_max: 6, i_max: 4, max_len: None, max_width: None, exec: Exec::default() }
    }
}

impl Bounds {
    pub fn tilting(&self) -> TiltingOptions {
        TiltingOptions { max_len: self.max_len, max_width: self.max_width, skip_coresolution: false, exec: self.exec }
    }
}

/// All base-change lemma checks on `M` with test module `T`, for central `x`.
pub fn lemma_suite(x: &CentralElement, m: &AlgModule, t: &AlgModule, n: usize, b: &Bounds) -> tiltbase_core::Result<Vec<LemmaReport>> {
    // a test module killed by x, for the quotient-side Ext comparison
    let tbar = t.quotient_by(&t.act(x.coords())).simplify();
    let degrees: Vec<usize> = (1..=n.max(1)).collect();
    let mut out = vec![
        check_ext_quotient_iso(x, m, &tbar, b.i_max)?,
        check_ext_localization_iso(x, m, t, b.i_max)?,
        check_end_mod_x_iso(x, m)?,
        check_end_localization_iso(x, m)?,
    ];
    for d in degrees {
        out.push(check_self_orthogonality_descent(x, m, t, d)?);
    }
    out.push(check_pd_max_formula(x, m, b.n_max)?);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub expected: Value,
    pub observed: Value,
    pub met: bool,
    pub report: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub summary: String,
    pub document_digest: String,
    pub checks: Vec<CheckResult>,
    pub met: bool,
}

fn lookup(doc: &Document, a: &Arc<Algebra>, module: &str, x: Option<&str>) -> (AlgModule, Option<CentralElement>) {
    let m = doc.module(a, module).expect("corpus module exists");
    let x = x.map(|x| doc.central_element(a, x).expect("corpus central exists").expect("corpus element is central"));
    (m, x)
}

fn legs_of(r: &tiltbase_core::tilting::MainTheoremReport) -> Vec<Option<Expect>> {
    [&r.upstairs, &r.localized, &r.quotient].iter().map(|o| o.as_ref().map(|t| Expect::of(&t.overall))).collect()
}

fn run_check(doc: &Document, a: &Arc<Algebra>, c: &Check, b: &Bounds) -> tiltbase_core::Result<CheckResult> {
    let opts = b.tilting();
    Ok(match c {
        Check::Tilting { module, n, expect } => {
            let (t, _) = lookup(doc, a, module, None);
            let rep = match n {
                Some(n) => is_classical_tilting(&t, *n, &opts)?,
                None => is_classical_tilting_auto(&t, b.n_max, &opts)?,
            };
            let got = Expect::of(&rep.overall);
            let n_text = n.map_or(format!("n <= {}", b.n_max), |n| format!("n = {n}"));
            CheckResult {
                check: format!("tilting {module} ({n_text})"),
                expected: json!(expect),
                observed: json!(got),
                met: got == *expect,
                report: serde_json::to_value(&rep).expect("serializable"),
            }
        }
        Check::Main { module, x, n, legs } => {
            let (t, x_el) = lookup(doc, a, module, Some(x));
            let rep = check_main_theorem(&t, x_el.as_ref().expect("given"), *n, &opts)?;
            let got = legs_of(&rep);
            let met = rep.status == MainStatus::Consistent && got.iter().zip(legs).all(|(g, e)| *g == Some(*e));
            CheckResult {
                check: format!("base change {module} at {x} (n = {n})"),
                expected: json!({ "status": MainStatus::Consistent, "legs": legs }),
                observed: json!({ "status": rep.status, "legs": got }),
                met,
                report: serde_json::to_value(&rep).expect("serializable"),
            }
        }
        Check::Derived { module, x, n, expect } => {
            let (t, x_el) = lookup(doc, a, module, Some(x));
            let rep = derive_upstairs(&t, x_el.as_ref().expect("given"), *n, &opts)?;
            let got = Expect::of(&rep.derived);
            CheckResult {
                check: format!("derived verdict {module} at {x} (n = {n})"),
                expected: json!(expect),
                observed: json!(got),
                met: got == *expect,
                report: serde_json::to_value(&rep).expect("serializable"),
            }
        }
        Check::Lemmas { module, x } => {
            let (m, x_el) = lookup(doc, a, module, Some(x));
            let reps = lemma_suite(x_el.as_ref().expect("given"), &m, &m, 1, b)?;
            let failed: Vec<&str> = reps.iter().filter(|r| r.fails()).map(|r| r.lemma).collect();
            CheckResult {
                check: format!("lemmas on {module} at {x}"),
                expected: json!({ "fails": [] }),
                observed: json!({ "fails": failed }),
                met: failed.is_empty(),
                report: serde_json::to_value(&reps).expect("serializable"),
            }
        }
    })
}

pub fn run_entry(e: &Entry, b: &Bounds) -> tiltbase_core::Result<EntryResult> {
    let doc = e.document();
    let a = doc.algebra();
    let checks = b.exec.map(&e.checks, |c| run_check(&doc, &a, c, b)).into_iter().collect::<tiltbase_core::Result<Vec<_>>>()?;
    let met = checks.iter().all(|c| c.met);
    Ok(EntryResult {
        name: e.name.to_string(),
        summary: e.summary.to_string(),
        document_digest: crate::report::digest(e.source.as_bytes()),
        checks,
        met,
    })
}
