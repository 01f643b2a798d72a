//! CSV rendering. `.` decimals, `,` separators, LF line endings.

use std::fmt::Write as _;

use tclgate::ObservableRecord;

pub const RECORD_HEADER: &str =
    "t,tbar,s1,s2,gate_fidelity,gate_purity,state_fidelity,state_purity,entropy_bits,trace_error,herm_error";
pub const SUMMARY_HEADER: &str = "value,s1_at_taus,gate_fidelity_at_taus,gate_purity_at_taus,entropy_at_taus";
pub const KERNEL_HEADER: &str = "u,gamma,delta";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn records_csv(records: &[ObservableRecord]) -> String {
    let mut out = String::with_capacity(256 * (records.len() + 1));
    out.push_str(RECORD_HEADER);
    out.push('\n');
    for r in records {
        let fields = [
            num(r.t),
            num(r.tbar),
            num(r.s1),
            num(r.s2),
            num(r.gate_fidelity),
            num(r.gate_purity),
            r.state_fidelity.map(num).unwrap_or_default(),
            num(r.state_purity),
            num(r.entropy_bits),
            num(r.trace_error),
            num(r.herm_error),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn summary_csv(rows: &[(f64, ObservableRecord)]) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for (value, r) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(*value),
            num(r.s1),
            num(r.gate_fidelity),
            num(r.gate_purity),
            num(r.entropy_bits)
        );
    }
    out
}

pub fn kernel_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::new();
    out.push_str(KERNEL_HEADER);
    out.push('\n');
    for &(u, g, d) in rows {
        let _ = writeln!(out, "{},{},{}", num(u), num(g), num(d));
    }
    out
}
