//! Recomputes embedding rate and efficiency for tabulated `[n, k, rho]`
//! code families and flags printed values that disagree.

use std::fmt;
use std::io::{Read, Write};

use serde::Deserialize;

use crate::codec::compute_metrics;
use crate::error::{Error, Result};

/// The bundled comparison table.
pub const PUBLISHED_TABLE: &str = include_str!("../data/code_families.csv");

/// Allowed gap between a recomputed ratio and its printed value.
pub const TOLERANCE: f64 = 0.01;

/// A value printed either alone or as a `lo-hi` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Copy> Span<T> {
    fn endpoints(&self) -> [T; 2] {
        [self.lo, self.hi]
    }
}

impl<T: Copy + PartialEq + fmt::Display> fmt::Display for Span<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}-{}", self.lo, self.hi)
        }
    }
}

fn parse_span<T: std::str::FromStr + Copy>(s: &str, what: &str) -> Result<Span<T>> {
    let parse = |x: &str| {
        x.trim()
            .parse::<T>()
            .map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
    };
    match s.split_once('-') {
        Some((a, b)) => Ok(Span {
            lo: parse(a)?,
            hi: parse(b)?,
        }),
        None => {
            let v = parse(s)?;
            Ok(Span { lo: v, hi: v })
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawRow {
    n: usize,
    d: Option<usize>,
    family: String,
    k: usize,
    rho: String,
    er: f64,
    ef: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub d: Option<usize>,
    pub family: String,
    pub k: usize,
    pub rho: Span<usize>,
    pub printed_er: f64,
    /// Printed efficiency for `rho.lo` and `rho.hi` respectively.
    pub printed_ef: Span<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowCheck {
    pub row: TableRow,
    pub er: f64,
    pub ef: Span<f64>,
    pub er_ok: bool,
    pub ef_ok: [bool; 2],
}

impl RowCheck {
    pub fn ok(&self) -> bool {
        self.er_ok && self.ef_ok.iter().all(|&b| b)
    }
}

pub fn parse_rows(reader: impl Read) -> Result<Vec<TableRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<RawRow>().enumerate() {
        let raw = rec.map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
        let rho = parse_span::<usize>(&raw.rho, "rho")?;
        let printed_ef = parse_span::<f64>(&raw.ef, "ef")?;
        if rho.lo == 0 || rho.hi < rho.lo {
            return Err(Error::Parse(format!("row {}: invalid rho {}", i + 1, raw.rho)));
        }
        if rho.lo == rho.hi && printed_ef.lo != printed_ef.hi {
            return Err(Error::Parse(format!(
                "row {}: efficiency range {} without a rho range",
                i + 1,
                raw.ef
            )));
        }
        rows.push(TableRow {
            n: raw.n,
            d: raw.d,
            family: raw.family,
            k: raw.k,
            rho,
            printed_er: raw.er,
            printed_ef,
        });
    }
    Ok(rows)
}

pub fn published_rows() -> Vec<TableRow> {
    parse_rows(PUBLISHED_TABLE.as_bytes()).expect("bundled table parses")
}

fn within(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOLERANCE + 1e-9
}

pub fn check_row(row: &TableRow) -> Result<RowCheck> {
    let lo = compute_metrics(row.n, row.k, row.rho.lo)?;
    let hi = compute_metrics(row.n, row.k, row.rho.hi)?;
    let ef = Span {
        lo: lo.embedding_efficiency,
        hi: hi.embedding_efficiency,
    };
    let printed = row.printed_ef.endpoints();
    let computed = ef.endpoints();
    Ok(RowCheck {
        row: row.clone(),
        er: lo.embedding_rate,
        er_ok: within(lo.embedding_rate, row.printed_er),
        ef_ok: [within(computed[0], printed[0]), within(computed[1], printed[1])],
        ef,
    })
}

pub fn check_rows(rows: &[TableRow]) -> Result<Vec<RowCheck>> {
    rows.iter().map(check_row).collect()
}

/// CSV report, one line per row.
pub fn write_csv(checks: &[RowCheck], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record([
        "n", "family", "k", "rho", "er", "er_printed", "ef", "ef_printed", "status",
    ])
    .map_err(io)?;
    for c in checks {
        let ef = if c.row.rho.lo == c.row.rho.hi {
            format!("{:.2}", c.ef.lo)
        } else {
            format!("{:.2}-{:.2}", c.ef.lo, c.ef.hi)
        };
        w.write_record([
            c.row.n.to_string(),
            c.row.family.clone(),
            c.row.k.to_string(),
            c.row.rho.to_string(),
            format!("{:.3}", c.er),
            c.row.printed_er.to_string(),
            ef,
            c.row.printed_ef.to_string(),
            if c.ok() { "ok" } else { "MISMATCH" }.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(rows: &[TableRow], n: usize, family: &str, k: usize) -> TableRow {
        rows.iter()
            .find(|r| r.n == n && r.family == family && r.k == k)
            .cloned()
            .unwrap()
    }

    #[test]
    fn bundled_table_shape() {
        let rows = published_rows();
        assert_eq!(rows.len(), 48);
        let r = find(&rows, 35, "C", 18);
        assert_eq!(r.rho, Span { lo: 5, hi: 6 });
        assert_eq!(r.printed_ef, Span { lo: 3.6, hi: 3.0 });
    }

    #[test]
    fn named_rows_recompute() {
        let rows = published_rows();
        for (n, fam, k, er, ef) in [(15, "C", 5, 0.33, 2.5), (31, "B", 5, 0.16, 5.0), (63, "A", 8, 0.13, 4.0)] {
            let c = check_row(&find(&rows, n, fam, k)).unwrap();
            assert!(c.ok());
            assert!((c.er - er).abs() <= TOLERANCE);
            assert!((c.ef.lo - ef).abs() <= TOLERANCE);
        }
    }

    #[test]
    fn range_checked_at_both_ends() {
        let row = TableRow {
            n: 35,
            d: None,
            family: "B".into(),
            k: 15,
            rho: Span { lo: 4, hi: 5 },
            printed_er: 0.43,
            printed_ef: Span { lo: 3.75, hi: 2.9 },
        };
        let c = check_row(&row).unwrap();
        assert!(c.er_ok);
        assert_eq!(c.ef_ok, [true, false]);
    }

    #[test]
    fn bundled_mismatches_are_pinned() {
        let bad: Vec<_> = check_rows(&published_rows())
            .unwrap()
            .into_iter()
            .filter(|c| !c.ok())
            .map(|c| (c.row.n, c.row.family.clone(), c.row.k, c.er_ok, c.ef_ok))
            .collect();
        assert_eq!(
            bad,
            vec![
                (21, "A".to_string(), 11, true, [false, false]),
                (31, "C".to_string(), 8, false, [true, true]),
            ]
        );
    }

    #[test]
    fn malformed_rows() {
        let hdr = "n,d,family,k,rho,er,ef\n";
        for body in ["15,3,C,5,x,0.33,2.5\n", "15,3,C,5,0,0.33,2.5\n", "15,3,C,5,2,0.33,2.5-2\n", "15,3,C\n"] {
            assert!(parse_rows(format!("{hdr}{body}").as_bytes()).is_err(), "{body}");
        }
    }

    #[test]
    fn csv_output() {
        let rows = published_rows();
        let checks = check_rows(&rows[..2]).unwrap();
        let mut buf = Vec::new();
        write_csv(&checks, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,family,k,rho,er,er_printed,ef,ef_printed,status\n"));
        assert!(text.contains("15,C,5,2,0.333,0.33,2.50,2.5,ok"));
    }
}
