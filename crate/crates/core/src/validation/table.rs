//! Text renderings of a validation table and its run manifest.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{GridOptions, TableId, ValidationRow, ValidationTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableFormat {
    #[default]
    Markdown,
    Csv,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(Self::Markdown),
            "csv" => Ok(Self::Csv),
            other => Err(format!("expected `markdown` or `csv`, got `{other}`")),
        }
    }
}

pub const CSV_HEADER: [&str; 6] = [
    "sigma_d",
    "q",
    "model_beta_pct",
    "sim_mean_pct",
    "sim_std_pct",
    "matches",
];

/// Fraction to percent, rounded half-up to one decimal.
pub fn to_pct(fraction: f64) -> f64 {
    // Round through a decimal string so 57.25 is not seen as 57.2499…
    let tenths: f64 = format!("{:.6}", fraction * 1000.0).parse().unwrap_or(f64::NAN);
    (tenths + 0.5).floor() / 10.0
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

pub fn emit_table(table: &ValidationTable, format: TableFormat) -> String {
    match format {
        TableFormat::Markdown => emit_markdown(table),
        TableFormat::Csv => emit_csv(table),
    }
}

fn emit_markdown(table: &ValidationTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "### {} ({})", table.table_id, table.table_id.mode());
    out.push('\n');
    out.push_str("| σ_D | Q | Model β (%) | Sim mean β (%) | Sim std β (%) | Matches |\n");
    out.push_str("|---:|---:|---:|---:|---:|:---:|\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {:.1} | {:.1} | {:.1} | {} |",
            row.sigma_d,
            row.q,
            to_pct(row.model_beta),
            to_pct(row.sim_mean_beta),
            to_pct(row.sim_std_beta),
            yes_no(row.matches)
        );
    }
    out
}

fn emit_csv(table: &ValidationTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing to a Vec cannot fail.
    w.write_record(CSV_HEADER).expect("in-memory csv");
    for row in &table.rows {
        w.write_record([
            format!("{}", row.sigma_d),
            format!("{}", row.q),
            format!("{:.1}", to_pct(row.model_beta)),
            format!("{:.1}", to_pct(row.sim_mean_beta)),
            format!("{:.1}", to_pct(row.sim_std_beta)),
            yes_no(row.matches).to_string(),
        ])
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    sigma_d: f64,
    q: f64,
    model_beta_pct: f64,
    sim_mean_pct: f64,
    sim_std_pct: f64,
    matches: String,
}

/// Inverse of the CSV rendering; fractions come back at 0.1 pp resolution.
pub fn parse_csv(table_id: TableId, text: &str) -> Result<ValidationTable, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(CSV_HEADER) {
        return Err(format!("unexpected header: {header:?}"));
    }
    let rows = reader
        .deserialize::<CsvRow>()
        .map(|r| {
            let r = r.map_err(|e| e.to_string())?;
            let matches = match r.matches.as_str() {
                "Yes" => true,
                "No" => false,
                other => return Err(format!("bad matches value `{other}`")),
            };
            Ok(ValidationRow {
                sigma_d: r.sigma_d,
                q: r.q,
                model_beta: r.model_beta_pct / 100.0,
                sim_mean_beta: r.sim_mean_pct / 100.0,
                sim_std_beta: r.sim_std_pct / 100.0,
                matches,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(ValidationTable { table_id, rows })
}

/// Everything needed to regenerate an emitted table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub table: TableId,
    pub options: GridOptions,
    pub code_version: String,
    pub flag_flips: Vec<(f64, f64)>,
}

impl RunManifest {
    pub fn new(table: &ValidationTable, options: &GridOptions) -> Self {
        Self {
            table: table.table_id,
            options: options.clone(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            flag_flips: super::grid::flag_flips(table),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest is plain data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validation::grid::grid_cells;

    fn sample() -> ValidationTable {
        let rows = grid_cells()
            .enumerate()
            .map(|(i, (sigma_d, q))| ValidationRow {
                sigma_d,
                q,
                model_beta: 0.572 + i as f64 * 0.01,
                sim_mean_beta: 0.893,
                sim_std_beta: 0.027,
                matches: i % 3 == 0,
            })
            .collect();
        ValidationTable {
            table_id: TableId::ConvBackorder,
            rows,
        }
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(to_pct(0.57249), 57.2);
        assert_eq!(to_pct(0.5725), 57.3);
        assert_eq!(to_pct(-1.0832), -108.3);
        assert_eq!(to_pct(-0.4345), -43.4);
    }

    #[test]
    fn csv_shape_and_round_trip() {
        let t = sample();
        let text = emit_table(&t, TableFormat::Csv);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 13);
        assert_eq!(lines[0], "sigma_d,q,model_beta_pct,sim_mean_pct,sim_std_pct,matches");
        assert_eq!(lines[1], "200,1000,57.2,89.3,2.7,Yes");
        let back = parse_csv(TableId::ConvBackorder, &text).unwrap();
        assert_eq!(back.rows.len(), 12);
        for (a, b) in t.rows.iter().zip(&back.rows) {
            assert_eq!((a.sigma_d, a.q, a.matches), (b.sigma_d, b.q, b.matches));
            assert!((a.model_beta - b.model_beta).abs() <= 5e-4 + 1e-12);
            assert!((a.sim_std_beta - b.sim_std_beta).abs() <= 5e-4 + 1e-12);
        }
    }

    #[test]
    fn markdown_shape() {
        let text = emit_table(&sample(), TableFormat::Markdown);
        let data: Vec<_> = text.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| σ")).collect();
        assert_eq!(data.len(), 12);
        assert!(data[0].contains("57.2"));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(parse_csv(TableId::ConvBackorder, "a,b\n1,2\n").is_err());
        let bad = "sigma_d,q,model_beta_pct,sim_mean_pct,sim_std_pct,matches\n200,1000,1,2,3,maybe\n";
        assert!(parse_csv(TableId::ConvBackorder, bad).is_err());
    }
}
