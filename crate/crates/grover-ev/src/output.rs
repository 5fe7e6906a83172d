//! Serialization of results: stable CSV with fixed column order and
//! 12-significant-digit floats, and JSON mirroring the record fields.

use crate::driver::{SearchResult, SweepRow};
use crate::error::Result;

/// Fixed sweep CSV header.
pub const SWEEP_CSV_HEADER: &str = "L,M,N,r,epsilon,m_stand,m_trunc_planned,m_min_measured,ratio_predicted,ratio_measured,classical_queries,success_rate";

/// Formats a float with 12 significant digits, stable across runs.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = 11 - exponent;
    if (0..=17).contains(&decimals) {
        format!("{:.*}", decimals as usize, x)
    } else {
        format!("{:.11e}", x)
    }
}

pub fn sweep_row_csv(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        row.l,
        row.m,
        row.n,
        fmt_sig12(row.r),
        fmt_sig12(row.epsilon),
        row.m_stand,
        row.m_trunc_planned,
        row.m_min_measured,
        fmt_sig12(row.ratio_predicted),
        fmt_sig12(row.ratio_measured),
        fmt_sig12(row.classical_queries),
        fmt_sig12(row.success_rate),
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&sweep_row_csv(row));
        out.push('\n');
    }
    out
}

pub const RESULT_CSV_HEADER: &str = "version,num_qubits,num_marked,seed,iterations_used,runs_used,oracle_queries,found,success,attenuation,confident";

pub fn result_csv(result: &SearchResult) -> String {
    let version = match result.version {
        crate::driver::Version::Pm => "pm",
        crate::driver::Version::EvStandard => "ev_standard",
        crate::driver::Version::EvTruncated => "ev_truncated",
    };
    format!(
        "{RESULT_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{}\n",
        version,
        result.num_qubits,
        result.num_marked,
        result.seed,
        result.iterations_used,
        result.runs_used,
        result.oracle_queries,
        result
            .found
            .map(|x| x.to_string())
            .unwrap_or_else(|| "".to_string()),
        result.success,
        fmt_sig12(result.attenuation),
        result.confident,
    )
}

pub fn result_json(result: &SearchResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}
