use serde::Serialize;
use serde_json::{json, Value};

use qri::estimation::{DecompositionEstimate, QriEstimate};

/// JSON envelope shared by every subcommand.
pub fn envelope(command: &str, config: Value, result: impl Serialize) -> String {
    let doc = json!({
        "tool": "qri",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable output");
    text.push('\n');
    text
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

fn estimate_row(label: &str, weight: Option<f64>, e: &QriEstimate) -> String {
    let (lo, hi) = e.ci.map_or((None, None), |c| (Some(c.low), Some(c.high)));
    format!(
        "{label:<6} {:>8} {:>8.4} {:>8} {:>8} {:>8}\n",
        opt(weight),
        e.value,
        opt(e.se),
        opt(lo),
        opt(hi)
    )
}

pub fn decomposition_table(d: &DecompositionEstimate, n: usize) -> String {
    let mut out = format!("n = {n}, method = {:?}", d.method).to_lowercase();
    if let Some(j) = d.total.grid.or(d.components.first().and_then(|c| c.grid)) {
        out.push_str(&format!(", J = {j}"));
    }
    if d.total.se.is_some() {
        out.push_str(&format!(", {:.0}% intervals", 100.0 * (1.0 - d.total.alpha)));
    }
    if d.components.iter().any(|c| c.se_borrowed) {
        out.push_str(", se from grid");
    }
    out.push('\n');
    out.push_str(&format!(
        "{:<6} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
        "", "weight", "value", "se", "low", "high"
    ));
    if d.components.len() > 1 {
        for (k, (c, w)) in d.components.iter().zip(&d.weights).enumerate() {
            out.push_str(&estimate_row(&format!("I_{}", k + 1), Some(*w), c));
        }
    }
    out.push_str(&estimate_row("I", None, &d.total));
    let clamped: u32 = d
        .components
        .iter()
        .chain(std::iter::once(&d.total))
        .map(|c| c.diagnostics.clamped_variances)
        .sum();
    if clamped > 0 {
        out.push_str(&format!("note: {clamped} negative variance estimate(s) clamped to 0\n"));
    }
    out
}

pub fn values_line(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(", ")
}
