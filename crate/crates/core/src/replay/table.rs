use std::io::Read;
use std::path::Path;

use crate::replay::{MetricsReport, ReplayError, SideMetrics};

pub const TABLE_COLUMNS: [&str; 11] = [
    "id", "e_a", "e_p", "a_a", "a_p", "co_a", "ao_a", "ncr_a", "co_p", "ao_p", "ncr_p",
];

/// One transcribed replay row. `report` is `None` when the row's cells are '-'.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub id: String,
    pub matchup: String,
    pub report: Option<MetricsReport>,
}

pub fn ingest_table_csv(path: &Path) -> Result<Vec<TableRow>, ReplayError> {
    let file = std::fs::File::open(path).map_err(|e| ReplayError::Io(format!("{}: {e}", path.display())))?;
    ingest_table_reader(file)
}

/// Parses the replay-table CSV (lines starting with '#' are comments).
pub fn ingest_table_reader<R: Read>(reader: R) -> Result<Vec<TableRow>, ReplayError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| ReplayError::Format {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let mut idx = [0usize; 11];
    for (slot, col) in idx.iter_mut().zip(TABLE_COLUMNS) {
        *slot = headers.iter().position(|h| h == col).ok_or_else(|| ReplayError::Format {
            line: 1,
            message: format!("missing required column '{col}'"),
        })?;
    }
    let matchup_idx = headers.iter().position(|h| h == "type");

    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| ReplayError::Format {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let cell = |i: usize| rec.get(idx[i]).unwrap_or("");
        let id = cell(0).to_string();
        let incomplete = (1..11).any(|i| cell(i) == "-");
        let report = if incomplete {
            None
        } else {
            let mut v = [0f64; 11];
            for (i, slot) in v.iter_mut().enumerate().skip(1) {
                *slot = cell(i).parse().map_err(|_| ReplayError::Format {
                    line,
                    message: format!("column '{}' is not numeric: '{}'", TABLE_COLUMNS[i], cell(i)),
                })?;
            }
            Some(MetricsReport {
                label: id.clone(),
                agent: Some(SideMetrics::from_columns(v[3], v[1], v[5], v[6], v[7])),
                player: Some(SideMetrics::from_columns(v[4], v[2], v[8], v[9], v[10])),
            })
        };
        rows.push(TableRow {
            id,
            matchup: matchup_idx.and_then(|i| rec.get(i)).unwrap_or("").to_string(),
            report,
        });
    }
    if rows.is_empty() {
        return Err(ReplayError::DegenerateInput("table has no rows".into()));
    }
    Ok(rows)
}

pub fn reports(rows: &[TableRow]) -> Vec<Option<MetricsReport>> {
    rows.iter().map(|r| r.report.clone()).collect()
}
