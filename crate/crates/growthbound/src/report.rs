//! Rendering of certification reports: human-readable text, flat
//! machine-readable key-value records, and CSV profiles for plotting.

use crate::certify::{CertReport, Cmp, Profile};
use crate::numeric::format_f64;

/// One PASS/FAIL line per record, then the constants block.
pub fn render_text(report: &CertReport) -> String {
    let mut out = String::new();
    for r in &report.records {
        let op = match r.cmp {
            Cmp::Ge => ">=",
            Cmp::Le => "<=",
        };
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        let tag = if r.informational { " (info)" } else { "" };
        let loc = match r.location {
            Some((k, delta, angle)) => {
                format!(" at k={k} delta={delta:.6e} angle_turns={angle}")
            }
            None => String::new(),
        };
        out.push_str(&format!(
            "{verdict}{tag} {name}: {value:.12e} {op} {thr:.12e}{loc}\n",
            name = r.name,
            value = r.value,
            thr = r.threshold,
        ));
    }
    out.push_str("constants:\n");
    for (name, value) in &report.constants {
        out.push_str(&format!("  {name} = {value:.12e}\n"));
    }
    out.push_str(&format!(
        "overall: {}\n",
        if report.passed() { "PASS" } else { "FAIL" }
    ));
    out
}

/// Flat `key=value` records, full precision, sorted for byte-determinism.
pub fn render_kv(report: &CertReport) -> String {
    let mut lines = Vec::new();
    for r in &report.records {
        let base = format!("cert.{}", r.name);
        lines.push(format!("{base}.value={}", format_f64(r.value)));
        lines.push(format!("{base}.threshold={}", format_f64(r.threshold)));
        lines.push(format!(
            "{base}.cmp={}",
            match r.cmp {
                Cmp::Ge => "ge",
                Cmp::Le => "le",
            }
        ));
        lines.push(format!("{base}.pass={}", r.pass));
        lines.push(format!("{base}.informational={}", r.informational));
        if let Some((k, delta, angle)) = r.location {
            lines.push(format!("{base}.argmin.k={k}"));
            lines.push(format!("{base}.argmin.delta={}", format_f64(delta)));
            lines.push(format!("{base}.argmin.angle_turns={angle}"));
        }
    }
    for (name, value) in &report.constants {
        lines.push(format!("const.{name}={}", format_f64(*value)));
    }
    lines.push(format!("overall.pass={}", report.passed()));
    lines.sort();
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

/// CSV of the pointwise comparison profile. Moduli and targets are logged
/// because growth-space values overflow doubles long before the certified
/// radii run out; the ratio column is the plain certified ratio.
pub fn render_profile_csv(report: &CertReport) -> String {
    let mut out = String::from("delta,ln_target,ln_abs_f,ln_abs_g,ratio\n");
    for row in &report.profile_rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_f64(row.delta),
            format_f64(row.ln_target),
            format_f64(row.ln_abs_f),
            format_f64(row.ln_abs_g),
            format_f64(row.ratio)
        ));
    }
    out
}

/// CSV of a little-o decay profile.
pub fn render_decay_profile_csv(profile: &Profile) -> String {
    let mut out = String::from("delta,m_value\n");
    for &(delta, m) in &profile.rows {
        out.push_str(&format!("{},{}\n", format_f64(delta), format_f64(m)));
    }
    out.push_str(&format!(
        "# little_o={} decay_ratio={}\n",
        profile.little_o,
        format_f64(profile.decay_ratio)
    ));
    out
}
