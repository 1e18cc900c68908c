//! Text rendering for tables and reports.

use std::fmt::Write as _;

use xxzge::scan::{BetaScan, ScanTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

pub const SCAN_HEADER: [&str; 7] = [
    "gamma",
    "e_g",
    "lambda1_sq",
    "lambda2_sq",
    "lambda3_sq",
    "lambda_max_sq",
    "e_log2",
];

pub const BETA_HEADER: [&str; 2] = ["beta", "lambda_sq"];

/// `printf("%.*g")`-style rendering with `sig` significant digits.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn num(x: f64) -> String {
    fmt_sig(x, 12)
}

fn write_rows<'a>(
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>> + 'a,
    format: Format,
) -> String {
    let d = format.delimiter().to_string();
    let mut out = header.join(&d);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(num).collect();
        out.push_str(&cells.join(&d));
        out.push('\n');
    }
    out
}

pub fn scan_table(table: &ScanTable, format: Format) -> String {
    let rows = table.rows().iter().map(|r| {
        vec![
            r.gamma,
            r.e_g,
            r.lambda1_sq,
            r.lambda2_sq,
            r.lambda3_sq,
            r.lambda_max_sq,
            r.e_log2,
        ]
    });
    write_rows(&SCAN_HEADER, rows, format)
}

pub fn beta_table(scan: &BetaScan, format: Format) -> String {
    let rows = scan.points.iter().map(|p| vec![p.beta, p.lambda_sq]);
    write_rows(&BETA_HEADER, rows, format)
}

/// `key: value` lines.
#[derive(Debug, Default)]
pub struct Report(String);

impl Report {
    pub fn line(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        writeln!(self.0, "{key}: {value}").expect("writing to a String");
        self
    }

    pub fn into_string(self) -> String {
        self.0
    }
}
