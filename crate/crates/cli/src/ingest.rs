//! Re-ingestion of reports: every certificate must verify again from its
//! serialized form alone.

use hypertan::search3c::{validate_configuration, HypCertificate};
use hypertan::Budget;
use serde_json::Value;

use crate::config::Workspace;
use crate::error::{CliError, CliResult};
use crate::report::{Decoder, ReportFile};

/// Certificate objects anywhere in a report's result.
pub fn certificates(report: &ReportFile) -> Vec<&Value> {
    let mut out = Vec::new();
    if let Some(v) = report.result.get("certificates").and_then(Value::as_array) {
        out.extend(v.iter());
    }
    out
}

/// Decodes each certificate's curve and verifies it against the
/// configuration of `ws`. Returns `(verified, total)`.
pub fn reverify(report: &ReportFile, ws: &Workspace, budget: &Budget) -> CliResult<(usize, usize)> {
    let certs = certificates(report);
    if certs.is_empty() {
        return Ok((0, 0));
    }
    let dec = Decoder::new(&report.fields, budget)?;
    let cfg = validate_configuration(&ws.component_curves()?, budget)?;
    let mut ok = 0;
    for c in &certs {
        let curve = dec.curve(c.get("curve").ok_or_else(|| CliError::input("certificate without curve"))?)?;
        let origin = c.get("origin").and_then(Value::as_str).unwrap_or("reingest");
        if let Some(v) = HypCertificate::verify(&curve, &cfg, origin, budget)? {
            let size = c.get("orbit_size").and_then(Value::as_u64).unwrap_or(0) as usize;
            if v.orbit_size == size && v.report.hyper_bitangent {
                ok += 1;
            }
        }
    }
    Ok((ok, certs.len()))
}
