//! The fixture manifest: command lines with expected reports.
//!
//! `fixtures/manifest.json` lists `{"name", "args", "snapshot"}` entries.
//! Paths inside `args` are relative to the fixture directory. Snapshots
//! ending in `.svg` are compared as text, others as reports.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::commands::Outcome;
use crate::config::CurveConfigFile;
use crate::error::{CliError, CliResult};
use crate::ingest::reverify;
use crate::report::ReportFile;
use crate::run_in;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub name: String,
    pub args: Vec<String>,
    pub snapshot: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub fixtures: Vec<FixtureEntry>,
}

impl Manifest {
    pub fn load(dir: &Path) -> CliResult<Self> {
        let path = dir.join("manifest.json");
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureResult {
    pub name: String,
    pub pass: bool,
    pub exit_code: i32,
    pub detail: String,
}

fn flag_value<'a>(args: &'a [String], flag: &str) -> Option<&'a str> {
    args.iter().position(|a| a == flag).and_then(|i| args.get(i + 1)).map(String::as_str)
}

fn config_arg(args: &[String]) -> Option<&str> {
    flag_value(args, "--config")
}

/// Runs one fixture and compares (or rewrites) its snapshot.
pub fn check_one(dir: &Path, f: &FixtureEntry, bless: bool) -> CliResult<FixtureResult> {
    let exec = run_in(&f.args, Some(dir));
    let snap = dir.join(&f.snapshot);
    let res = |pass: bool, detail: String| FixtureResult { name: f.name.clone(), pass, exit_code: exec.exit_code, detail };
    if bless {
        if let Some(p) = snap.parent() {
            std::fs::create_dir_all(p)?;
        }
        std::fs::write(&snap, &exec.stdout)?;
        return Ok(res(true, "blessed".into()));
    }
    let expected = std::fs::read_to_string(&snap)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", snap.display())))?;
    if f.snapshot.ends_with(".svg") {
        let same = expected == exec.stdout;
        return Ok(res(same, if same { "svg matches".into() } else { "svg differs".into() }));
    }
    let report = ReportFile::from_json(&exec.stdout)?;
    if Some(&report) != exec.report.as_ref() {
        return Ok(res(false, "report does not round-trip through JSON".into()));
    }
    let want = ReportFile::from_json(&expected)?;
    if report != want {
        return Ok(res(false, format!("report differs from {}", f.snapshot)));
    }
    let mut detail = "report matches".to_string();
    let certs = crate::ingest::certificates(&report).len();
    if let Some(cfg) = config_arg(&f.args).filter(|_| certs > 0) {
        let budget = match flag_value(&f.args, "--budget-degree").and_then(|v| v.parse().ok()) {
            Some(n) => hypertan::Budget { factor_degree: n, field_degree: n },
            None => hypertan::Budget::default(),
        };
        let ws = CurveConfigFile::load(&dir.join(cfg))?.build(None, &budget)?;
        let (ok, total) = reverify(&report, &ws, &budget)?;
        if ok != total {
            return Ok(res(false, format!("{ok} of {total} certificates re-verify")));
        }
        if total > 0 {
            detail = format!("report matches, {total} certificate(s) re-verified");
        }
    }
    Ok(res(true, detail))
}

pub fn verify(dir: &Path, bless: bool) -> CliResult<Outcome> {
    let m = Manifest::load(dir)?;
    let mut summary = Vec::new();
    let mut list = Vec::new();
    let mut failed = 0;
    for f in &m.fixtures {
        let r = check_one(dir, f, bless).unwrap_or_else(|e| FixtureResult {
            name: f.name.clone(),
            pass: false,
            exit_code: e.exit_code(),
            detail: e.to_string(),
        });
        if !r.pass {
            failed += 1;
        }
        summary.push(format!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail));
        list.push(json!({ "name": r.name, "pass": r.pass, "exit_code": r.exit_code, "detail": r.detail }));
    }
    summary.push(format!("{} of {} fixtures pass", m.fixtures.len() - failed, m.fixtures.len()));
    Ok(Outcome { negative: failed > 0, summary, result: json!({ "fixtures": list, "failed": failed }) })
}
