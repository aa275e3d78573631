//! The four commands. Each returns an [`Outcome`]; nothing here touches the
//! process (printing and exiting live in the binary).

use std::fmt::Write as _;

use serde_json::json;
use tiltbase_core::algebra::{is_regular_on, Regularity};
use tiltbase_core::tilting::{check_main_theorem, is_classical_tilting, is_classical_tilting_auto, MainStatus, Overall};
use tiltbase_core::Error;

use crate::corpus::{self, lemma_suite, Bounds};
use crate::document::{parse, Document};
use crate::report::{render_lemma, render_main, render_tilting, Exit, Outcome, Report};

fn load(src: &str) -> Result<Document, Outcome> {
    parse(src).map_err(|e| Outcome::error(Exit::Input, format!("parse error: {e}")))
}

/// Validation failures end the command with exit 2.
fn validated(src: &str) -> Result<Document, Outcome> {
    let doc = load(src)?;
    let v = doc.validate();
    if v.is_empty() {
        Ok(doc)
    } else {
        let mut o = Outcome::error(Exit::Precondition, "document fails validation");
        o.diagnostics.extend(v.0);
        Err(o)
    }
}

fn internal(e: Error) -> Outcome {
    let exit = match e {
        Error::NotCentral | Error::NotRegular(_) | Error::Unsupported(_) | Error::UnitElement => Exit::Precondition,
        _ => Exit::Input,
    };
    Outcome::error(exit, e.to_string())
}

pub fn check(src: &str) -> Outcome {
    let doc = match load(src) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let v = doc.validate();
    let exit = if v.is_empty() { Exit::Pass } else { Exit::Precondition };
    let mut human = String::new();
    let _ = writeln!(human, "algebra of rank {} over {}", doc.rank, doc.base);
    for (name, _) in &doc.centrals {
        let _ = writeln!(human, "  central {name}");
    }
    for m in &doc.modules {
        let _ = writeln!(human, "  module {} ({} generators)", m.name, m.gens);
    }
    for c in &doc.certificates {
        let _ = writeln!(human, "  certificate {} for {} ({} stages)", c.name, c.module, c.stages.len());
    }
    if v.is_empty() {
        human.push_str("valid\n");
    } else {
        for s in &v.0 {
            let _ = writeln!(human, "violation: {s}");
        }
    }
    let body = json!({
        "base": doc.base.to_string(),
        "rank": doc.rank,
        "centrals": doc.centrals.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        "modules": doc.modules.iter().map(|m| &m.name).collect::<Vec<_>>(),
        "certificates": doc.certificates.iter().map(|c| &c.name).collect::<Vec<_>>(),
        "violations": v.0,
    });
    let diagnostics = v.0.iter().map(|s| format!("violation: {s}")).collect();
    Outcome { exit, report: Some(Report::new("check", src.as_bytes(), exit, body)), human, diagnostics }
}

pub fn tilting(src: &str, module: &str, b: &Bounds) -> Outcome {
    let doc = match validated(src) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let a = doc.algebra();
    let Some(t) = doc.module(&a, module) else {
        return Outcome::error(Exit::Input, format!("no module named `{module}`"));
    };
    let opts = b.tilting();
    let rep = match b.n {
        Some(n) => is_classical_tilting(&t, n, &opts),
        None => is_classical_tilting_auto(&t, b.n_max, &opts),
    };
    let rep = match rep {
        Ok(r) => r,
        Err(e) => return internal(e),
    };
    let exit = match rep.overall {
        Overall::Yes => Exit::Pass,
        Overall::No { .. } => Exit::Fail,
        Overall::Unknown { .. } => Exit::Inconclusive,
    };
    let mut human = String::new();
    render_tilting(&mut human, module, &rep, 0);
    let body = json!({ "module": module, "n_given": b.n, "n_max": b.n_max, "tilting": rep });
    Outcome { exit, report: Some(Report::new("tilting", src.as_bytes(), exit, body)), human, diagnostics: Vec::new() }
}

pub fn basechange(src: &str, module: &str, central: &str, b: &Bounds) -> Outcome {
    let doc = match validated(src) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let a = doc.algebra();
    let Some(t) = doc.module(&a, module) else {
        return Outcome::error(Exit::Input, format!("no module named `{module}`"));
    };
    let x = match doc.central_element(&a, central) {
        None => return Outcome::error(Exit::Input, format!("no central element named `{central}`")),
        Some(Err(e)) => return Outcome::error(Exit::Precondition, format!("`{central}`: {e}")),
        Some(Ok(x)) => x,
    };
    let opts = b.tilting();
    let (n, n_source) = match b.n {
        Some(n) => (n, "given"),
        None => match is_classical_tilting_auto(&t, b.n_max, &opts) {
            Ok(r) => (r.n, "searched"),
            Err(e) => return internal(e),
        },
    };
    let main = match check_main_theorem(&t, &x, n, &opts) {
        Ok(m) => m,
        Err(e) => return internal(e),
    };
    let regular = matches!(is_regular_on(&x, &t), Ok(Regularity::Regular));
    let lemmas = if regular {
        match lemma_suite(&x, &t, &t, n, b) {
            Ok(l) => l,
            Err(e) => return internal(e),
        }
    } else {
        Vec::new()
    };
    let any_fails = lemmas.iter().any(|l| l.fails());
    let exit = match &main.status {
        MainStatus::Inconsistent(_) => Exit::Fail,
        _ if any_fails => Exit::Fail,
        MainStatus::Inapplicable(_) => Exit::Precondition,
        MainStatus::Inconclusive => Exit::Inconclusive,
        MainStatus::Consistent => Exit::Pass,
    };
    let mut human = String::new();
    let _ = writeln!(human, "base change of {module} at {central} (n {n_source})");
    render_main(&mut human, &main, 2);
    if !lemmas.is_empty() {
        human.push_str("  lemmas:\n");
        for l in &lemmas {
            render_lemma(&mut human, l, 4);
        }
    }
    let body = json!({
        "module": module,
        "central": central,
        "n": n,
        "n_source": n_source,
        "main": main,
        "lemmas": lemmas,
    });
    Outcome { exit, report: Some(Report::new("basechange", src.as_bytes(), exit, body)), human, diagnostics: Vec::new() }
}

pub fn corpus_list() -> Outcome {
    let mut human = String::new();
    let mut list = Vec::new();
    for e in corpus::entries() {
        let _ = writeln!(human, "{:<14} {}", e.name, e.summary);
        list.push(json!({ "name": e.name, "summary": e.summary, "checks": e.checks.len() }));
    }
    let names = corpus::names().join("\n");
    let report = Report::new("corpus --list", names.as_bytes(), Exit::Pass, json!({ "entries": list }));
    Outcome { exit: Exit::Pass, report: Some(report), human, diagnostics: Vec::new() }
}

/// `name` is an entry name or `all`.
pub fn corpus_run(name: &str, b: &Bounds) -> Outcome {
    let selected: Vec<_> = if name == "all" {
        corpus::entries()
    } else {
        match corpus::find(name) {
            Some(e) => vec![e],
            None => {
                return Outcome::error(
                    Exit::Input,
                    format!("unknown corpus entry `{name}` (known: {})", corpus::names().join(", ")),
                )
            }
        }
    };
    // entries are already sorted by name, and Exec::map keeps input order
    let results = b.exec.map(&selected, |e| corpus::run_entry(e, b));
    let mut ok = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(r) => ok.push(r),
            Err(e) => return internal(e),
        }
    }
    let met = ok.iter().all(|r| r.met);
    let exit = if met { Exit::Pass } else { Exit::Fail };
    let mut human = String::new();
    for r in &ok {
        let _ = writeln!(human, "{} — {}", r.name, r.summary);
        for c in &r.checks {
            let mark = if c.met { "ok  " } else { "FAIL" };
            let _ = writeln!(human, "  {mark} {}: expected {}, observed {}", c.check, c.expected, c.observed);
        }
    }
    let _ = writeln!(human, "{}", if met { "all expectations met" } else { "some expectations NOT met" });
    let input: String = selected.iter().map(|e| e.source).collect();
    let report = Report::new(format!("corpus --run {name}"), input.as_bytes(), exit, json!({ "entries": ok }));
    Outcome { exit, report: Some(report), human, diagnostics: Vec::new() }
}
