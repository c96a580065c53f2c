//! Text output shared by the tables the crate emits.

/// Round-trippable float text with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header plus rows, comma separated, one row per line.
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
