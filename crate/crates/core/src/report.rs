//! Flat CSV summaries of certificates for plotting.
//!
//! The first line is a comment naming the format version; the second is the
//! column header [`CSV_COLUMNS`]. Eigenvalues are ascending and separated by
//! `;`. Empty cells mean the stage stopped before producing the value.

use crate::verify::{DiscEvidence, MobiusEvidence, UniquenessCertificate};
use crate::{Error, Result};

pub const CSV_VERSION_LINE: &str = "# polypick certificate csv v1";
pub const CSV_COLUMNS: [&str; 7] = ["stage", "disc", "node_count", "restricted_degree", "eigenvalues", "residual", "passed"];

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn eigen_cell(spectrum: Option<&[f64]>) -> String {
    spectrum
        .map(|s| s.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(";"))
        .unwrap_or_default()
}

fn disc_row(stage: &str, d: &DiscEvidence) -> [String; 7] {
    [
        stage.to_string(),
        d.disc.to_string(),
        d.node_count.to_string(),
        opt(d.restricted_degree),
        eigen_cell(d.verdict.as_ref().map(|v| v.spectrum.as_slice())),
        opt(d.reconstruction_residual.map(|r| format!("{r:e}"))),
        d.passed.to_string(),
    ]
}

fn mobius_row(stage: &str, j: usize, m: &MobiusEvidence) -> [String; 7] {
    [
        stage.to_string(),
        j.to_string(),
        m.intersections.len().to_string(),
        opt(m.restricted_degree),
        eigen_cell(m.verdict.as_ref().map(|v| v.spectrum.as_slice())),
        opt(m.reconstruction_residual.map(|r| format!("{r:e}"))),
        m.passed.to_string(),
    ]
}

/// One row per flat disc and per Möbius check, in certificate order.
pub fn certificate_csv(cert: &UniquenessCertificate) -> Result<String> {
    let mut rows = Vec::new();
    rows.extend(cert.per_disc.iter().map(|d| disc_row("flat", d)));
    rows.extend(cert.mobius.iter().enumerate().map(|(j, m)| mobius_row("mobius", j, m)));
    for (k, fib) in cert.fibers.iter().enumerate() {
        let stage = format!("slice{k}/mobius");
        rows.extend(fib.mobius.iter().enumerate().map(|(j, m)| mobius_row(&stage, j, m)));
    }
    for (k, r) in cert.rho_sweep.iter().enumerate() {
        rows.extend(r.per_disc.iter().map(|d| disc_row(&format!("rho{k}/flat"), d)));
        rows.extend(r.mobius.iter().enumerate().map(|(j, m)| mobius_row(&format!("rho{k}/mobius"), j, m)));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Configuration(format!("csv: {e}"));
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for row in &rows {
        w.write_record(row).map_err(io)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Configuration(format!("csv: {e}")))?)
        .expect("csv output is utf-8");
    Ok(format!("{CSV_VERSION_LINE}\n{body}"))
}
