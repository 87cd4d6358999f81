//! Golden values as printed in the published tables, shipped as a
//! versioned plain-text data file.
//!
//! Format: `#` starts a comment; the first data line is `version <n>`;
//! every following line is
//! `<table> <label> <present1_ev> <present2_ev> <reference_ev> <reference_alt_ev>`
//! with `-` for a missing value. Table I labels are element symbols, the
//! others are state labels. Table II carries the singlet reference in
//! `reference_ev` and the triplet in `reference_alt_ev`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const GOLDEN_DATA: &str = include_str!("../data/reference_tables.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    I,
    II,
    III,
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::I => "I",
            TableId::II => "II",
            TableId::III => "III",
        })
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(TableId::I),
            "II" => Ok(TableId::II),
            "III" => Ok(TableId::III),
            other => Err(Error::Reference(format!("unknown table id `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRecord {
    pub table: TableId,
    pub label: String,
    pub present1_ev: f64,
    pub present2_ev: f64,
    pub reference_ev: Option<f64>,
    pub reference_alt_ev: Option<f64>,
}

fn parse_value(s: &str, line: usize) -> Result<Option<f64>> {
    if s == "-" {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::Reference(format!("line {line}: `{s}` is not a number")))
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x}"))
}

pub fn parse_records(text: &str) -> Result<Vec<ReferenceRecord>> {
    let mut version = None;
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if version.is_none() {
            match fields.as_slice() {
                ["version", v] => {
                    let v: u32 = v.parse().map_err(|_| Error::Reference(format!("line {line_no}: bad version")))?;
                    if v != FORMAT_VERSION {
                        return Err(Error::Reference(format!("unsupported data version {v}")));
                    }
                    version = Some(v);
                    continue;
                }
                _ => return Err(Error::Reference(format!("line {line_no}: expected `version <n>` first"))),
            }
        }
        if fields.len() != 6 {
            return Err(Error::Reference(format!("line {line_no}: expected 6 fields, found {}", fields.len())));
        }
        let required = |s: &str| {
            parse_value(s, line_no)?.ok_or_else(|| Error::Reference(format!("line {line_no}: missing required value")))
        };
        records.push(ReferenceRecord {
            table: fields[0].parse()?,
            label: fields[1].to_string(),
            present1_ev: required(fields[2])?,
            present2_ev: required(fields[3])?,
            reference_ev: parse_value(fields[4], line_no)?,
            reference_alt_ev: parse_value(fields[5], line_no)?,
        });
    }
    if version.is_none() {
        return Err(Error::Reference("no version line".into()));
    }
    Ok(records)
}

pub fn format_records(records: &[ReferenceRecord]) -> String {
    let mut out = format!("version {FORMAT_VERSION}\n");
    for r in records {
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            r.table,
            r.label,
            r.present1_ev,
            r.present2_ev,
            fmt_value(r.reference_ev),
            fmt_value(r.reference_alt_ev)
        ));
    }
    out
}

/// All shipped golden records, parsed once.
pub fn golden() -> &'static [ReferenceRecord] {
    static CELL: OnceLock<Vec<ReferenceRecord>> = OnceLock::new();
    CELL.get_or_init(|| parse_records(GOLDEN_DATA).expect("shipped reference data parses"))
}

/// Golden rows of one table, in file order.
pub fn golden_table(table: TableId) -> Vec<ReferenceRecord> {
    golden().iter().filter(|r| r.table == table).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_data() {
        let t1 = golden_table(TableId::I);
        assert_eq!(t1.len(), 11);
        assert_eq!(t1[1].label, "Li");
        assert_eq!(t1[1].present1_ev, 5.50);
        assert_eq!(t1[0].present2_ev, 35.21);
        assert_eq!(t1[10].reference_ev, Some(7.65));
        let t2 = golden_table(TableId::II);
        assert_eq!(t2.len(), 6);
        assert_eq!(t2[0].present1_ev, 79.161);
        assert_eq!(t2[0].reference_alt_ev, None);
        assert_eq!(t2[1].reference_alt_ev, Some(59.19));
        let t3 = golden_table(TableId::III);
        assert_eq!(t3.len(), 9);
        assert_eq!(t3[8].label, "4f");
        assert_eq!(t3[8].present1_ev, -0.834);
        assert_eq!(t3[0].present2_ev, -4.977);
    }

    #[test]
    fn malformed_input() {
        assert!(parse_records("").is_err());
        assert!(parse_records("I He 1 2 3 4\n").is_err());
        assert!(parse_records("version 2\n").is_err());
        assert!(parse_records("version 1\nI He 1 2 3\n").is_err());
        assert!(parse_records("version 1\nIV He 1 2 3 4\n").is_err());
        assert!(parse_records("version 1\nI He x 2 3 4\n").is_err());
        assert!(parse_records("version 1\nI He - 2 3 4\n").is_err());
        assert_eq!(parse_records("# only\nversion 1 # trailing\n").unwrap().len(), 0);
    }
}
