//! Long-format plot data `curve,t,value` from trajectory CSV files.

use std::io::Write;
use std::str::FromStr;

use crate::error::{LandauError, Result};
use crate::solver::fmt_num;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curve {
    M,
    H,
    H1,
    Envelope,
}

pub const ALL_CURVES: [Curve; 4] = [Curve::M, Curve::H, Curve::H1, Curve::Envelope];

impl Curve {
    pub fn name(&self) -> &'static str {
        match self {
            Curve::M => "M",
            Curve::H => "H",
            Curve::H1 => "h1",
            Curve::Envelope => "envelope",
        }
    }
}

impl FromStr for Curve {
    type Err = LandauError;
    fn from_str(s: &str) -> Result<Self> {
        ALL_CURVES
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| LandauError::Input(format!("unknown curve {s:?}; expected M, H, h1 or envelope")))
    }
}

/// Parsed numeric CSV with a header row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn parse_cell(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

impl Table {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| LandauError::Input("empty CSV".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<f64> = line
                .split(',')
                .map(|c| parse_cell(c).ok_or_else(|| LandauError::Input(format!("row {}: bad number {c:?}", i + 1))))
                .collect::<Result<_>>()?;
            if row.len() != header.len() {
                return Err(LandauError::Input(format!(
                    "row {} has {} cells, header has {}",
                    i + 1,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Table { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// Values of `curve` per row. Solver trajectories carry `h1_h` and `env_upper`;
/// scalar ODE trajectories carry `X2` (h1 = √X2) and use `rhs` as the envelope.
fn curve_values(table: &Table, curve: Curve) -> Result<Vec<f64>> {
    let missing = || LandauError::Input(format!("trajectory has no column for curve {}", curve.name()));
    match curve {
        Curve::M => table.column("M").ok_or_else(missing),
        Curve::H => table.column("H").ok_or_else(missing),
        Curve::H1 => table
            .column("h1_h")
            .or_else(|| table.column("X2").map(|x| x.iter().map(|v| v.sqrt()).collect()))
            .ok_or_else(missing),
        Curve::Envelope => table.column("env_upper").or_else(|| table.column("rhs")).ok_or_else(missing),
    }
}

/// Writes one row per (curve, sample); returns the row count.
pub fn write_plotdata<W: Write>(table: &Table, curves: &[Curve], mut w: W) -> Result<usize> {
    let t = table
        .column("t")
        .ok_or_else(|| LandauError::Input("trajectory has no t column".into()))?;
    writeln!(w, "curve,t,value")?;
    let mut rows = 0;
    for c in curves {
        let vals = curve_values(table, *c)?;
        for (ti, v) in t.iter().zip(&vals) {
            writeln!(w, "{},{},{}", c.name(), fmt_num(*ti), fmt_num(*v))?;
            rows += 1;
        }
    }
    Ok(rows)
}
