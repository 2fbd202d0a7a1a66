//! Report emission: frozen CSV column layouts, JSON headers carrying the
//! resolved configuration, the library version, and a content hash of the
//! inputs so outputs can be diffed bit for bit.
//!
//! The thread count is deliberately excluded from the embedded config:
//! results are exact and independent of the worker partitioning, and the
//! emitted bytes must not change with it.

use serde::Serialize;

use crate::counter::TernaryCountReport;
use crate::divstat::HooleyReport;
use crate::expsum::ScanResult;
use crate::model::ComparisonReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// FNV-1a 64-bit content hash, rendered as fixed-width hex.
pub fn fnv64_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// The `# ...` header line embedded at the top of every CSV report.
pub fn header_comment<T: Serialize>(command: &str, config: &T) -> String {
    let cfg = serde_json::to_string(config).expect("config serializes");
    format!(
        "# linnikbench v{VERSION} command={command} config={cfg} hash={}",
        fnv64_hex(cfg.as_bytes())
    )
}

/// Counting rows: N,plain_count,gamma_fixed,gamma_scale_bits,weight_mode,X,c,mu
pub fn count_csv<T: Serialize>(command: &str, config: &T, rows: &[TernaryCountReport]) -> String {
    let mut out = String::new();
    out.push_str(&header_comment(command, config));
    out.push('\n');
    out.push_str("N,plain_count,gamma_fixed,gamma_scale_bits,weight_mode,X,c,mu\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.plain_count,
            r.gamma_fixed,
            r.scale_bits,
            r.mode.as_str(),
            r.x,
            r.c,
            r.mu
        ));
    }
    out
}

/// Comparison rows plus a trailing summary comment.
pub fn compare_csv<T: Serialize>(command: &str, config: &T, rep: &ComparisonReport) -> String {
    let mut out = String::new();
    out.push_str(&header_comment(command, config));
    out.push('\n');
    for note in &rep.notes {
        out.push_str(&format!("# note: {note}\n"));
    }
    out.push_str(
        "N,plain_count,gamma_fixed,gamma_scale_bits,counted,predicted,ratio,flag,weight_mode,c,mu\n",
    );
    for r in &rep.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.plain_count,
            r.gamma_fixed,
            r.scale_bits,
            r.counted,
            r.predicted,
            r.ratio,
            r.flag,
            rep.mode.as_str(),
            rep.c,
            rep.mu
        ));
    }
    out.push_str(&format!(
        "# summary mean={} stddev={} min={} max={} rows={}\n",
        rep.mean,
        rep.stddev,
        rep.min,
        rep.max,
        rep.rows.len()
    ));
    out
}

/// Scan rows with the parameter set echoed in a JSON header comment.
pub fn scan_csv<T: Serialize>(command: &str, config: &T, scan: &ScanResult) -> String {
    let mut out = String::new();
    out.push_str(&header_comment(command, config));
    out.push('\n');
    let params = serde_json::to_string(&scan).expect("scan header serializes");
    out.push_str(&format!("# params: {params}\n"));
    out.push_str("t,abs_s,re,im\n");
    for r in &scan.rows {
        out.push_str(&format!("{},{},{},{}\n", r.t, r.abs, r.re, r.im));
    }
    out
}

/// Divisor-statistics line: X,omega,hooley_sum1,hooley_F,ratio_sum1,ratio_F,theta0
pub fn hooley_csv<T: Serialize>(command: &str, config: &T, reps: &[HooleyReport]) -> String {
    let mut out = String::new();
    out.push_str(&header_comment(command, config));
    out.push('\n');
    out.push_str("X,omega,hooley_sum1,hooley_F,ratio_sum1,ratio_F,theta0\n");
    for r in reps {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.x,
            r.omega,
            r.sum_squares,
            r.divisor_count,
            r.sum_squares_ratio,
            r.divisor_count_ratio,
            r.theta0
        ));
    }
    out
}
