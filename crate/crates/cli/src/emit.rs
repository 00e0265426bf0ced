use std::path::Path;

use crate::config::Format;
use crate::record::ResultRecord;
use crate::{HarnessError, Result};

pub const CSV_HEADER: [&str; 12] = [
    "experiment",
    "param_key",
    "param_value",
    "quantity",
    "check",
    "measured",
    "reference",
    "tolerance",
    "abs_err",
    "rel_err",
    "pass",
    "wall_ms",
];

/// 17 significant digits, dot decimal.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_csv(records: &[ResultRecord]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| HarnessError::Io(e.to_string());
    writer.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        let keys: Vec<&str> = r.parameters.keys().map(String::as_str).collect();
        let values: Vec<String> = r.parameters.values().map(|v| format_float(*v)).collect();
        writer
            .write_record([
                r.experiment.clone(),
                keys.join(";"),
                values.join(";"),
                r.quantity.clone(),
                r.check.as_str().to_string(),
                format_float(r.measured),
                format_float(r.reference),
                format_float(r.tolerance),
                format_float(r.abs_err),
                format_float(r.rel_err),
                r.pass.to_string(),
                r.wall_ms.to_string(),
            ])
            .map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Io(e.to_string()))
}

pub fn render_json(records: &[ResultRecord]) -> Result<String> {
    let mut out = serde_json::to_string_pretty(records).map_err(|e| HarnessError::Io(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

pub fn render(records: &[ResultRecord], format: Format) -> Result<String> {
    match format {
        Format::Csv => render_csv(records),
        Format::Json => render_json(records),
    }
}

/// Writes `records` to `path` in `format`.
pub fn emit_results(records: &[ResultRecord], format: Format, path: &Path) -> Result<()> {
    let text = render(records, format)?;
    std::fs::write(path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(render_csv(&[]).unwrap(), format!("{}\n", CSV_HEADER.join(",")));
    }

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(4.0), "4.0000000000000000e0");
        let x = 1.0 / 3.0;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }
}
