use std::fmt;
use std::path::Path;

use crate::replay::{
    aggregate, apm_epm_ratio, ingest_table_csv, ingest_table_reader, ncr_from_counts, non_camera_epm, reports, ReplayError, Side,
    SideMetrics, TableRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Race {
    Protoss,
    Terran,
    Zerg,
}

impl Race {
    pub const ALL: [Race; 3] = [Race::Protoss, Race::Terran, Race::Zerg];

    pub fn file_name(self) -> &'static str {
        match self {
            Race::Protoss => "protoss.csv",
            Race::Terran => "terran.csv",
            Race::Zerg => "zerg.csv",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Race::Protoss => "protoss",
            Race::Terran => "terran",
            Race::Zerg => "zerg",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSet {
    pub protoss: Vec<TableRow>,
    pub terran: Vec<TableRow>,
    pub zerg: Vec<TableRow>,
}

impl TableSet {
    pub fn load(dir: &Path) -> Result<Self, ReplayError> {
        Ok(Self {
            protoss: ingest_table_csv(&dir.join(Race::Protoss.file_name()))?,
            terran: ingest_table_csv(&dir.join(Race::Terran.file_name()))?,
            zerg: ingest_table_csv(&dir.join(Race::Zerg.file_name()))?,
        })
    }

    /// The transcribed tables compiled into the library.
    pub fn embedded() -> Result<Self, ReplayError> {
        Ok(Self {
            protoss: ingest_table_reader(include_str!("../../data/tables/protoss.csv").as_bytes())?,
            terran: ingest_table_reader(include_str!("../../data/tables/terran.csv").as_bytes())?,
            zerg: ingest_table_reader(include_str!("../../data/tables/zerg.csv").as_bytes())?,
        })
    }

    pub fn rows(&self, race: Race) -> &[TableRow] {
        match race {
            Race::Protoss => &self.protoss,
            Race::Terran => &self.terran,
            Race::Zerg => &self.zerg,
        }
    }
}

/// One computed-versus-expected comparison. Without a tolerance it is informational only.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
}

impl Check {
    fn new(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            computed,
            expected: Some(expected),
            tolerance: Some(tolerance),
        }
    }

    fn info(name: impl Into<String>, computed: f64) -> Self {
        Self {
            name: name.into(),
            computed,
            expected: None,
            tolerance: None,
        }
    }

    /// `None` for informational lines.
    pub fn passed(&self) -> Option<bool> {
        Some((self.computed - self.expected?).abs() <= self.tolerance?)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.passed(), self.expected, self.tolerance) {
            (Some(ok), Some(e), Some(t)) => write!(
                f,
                "{} {}: computed {:.4} expected {} (±{})",
                if ok { "PASS" } else { "FAIL" },
                self.name,
                self.computed,
                e,
                t
            ),
            _ => write!(f, "INFO {}: {:.4}", self.name, self.computed),
        }
    }
}

const RATE_TOL: f64 = 0.5;
const COUNT_TOL: f64 = 0.5;
const NCR_TOL: f64 = 0.001;
const NC_EPM_TOL: f64 = 0.1;

struct Targets {
    rates: [f64; 4],
    counts: Option<[f64; 4]>,
    ncr: [f64; 2],
}

fn targets(race: Race) -> Targets {
    match race {
        Race::Protoss => Targets {
            rates: [182.10, 154.17, 200.17, 247.28],
            counts: Some([322.79, 969.55, 859.13, 1747.41]),
            ncr: [0.6823, 0.5088],
        },
        Race::Terran => Targets {
            rates: [176.0, 179.0, 193.0, 292.0],
            counts: None,
            ncr: [0.635, 0.529],
        },
        Race::Zerg => Targets {
            rates: [202.0, 166.0, 248.0, 242.0],
            counts: None,
            ncr: [0.627, 0.537],
        },
    }
}

/// Every table target: per-race means, non-camera EPM, per-row NCR, and the ratio estimators.
pub fn verify_tables(set: &TableSet) -> Result<Vec<Check>, ReplayError> {
    let mut out = Vec::new();
    for race in Race::ALL {
        let rows = set.rows(race);
        let reps = reports(rows);
        let agg = aggregate(&reps)?;
        let r = race.name();
        let a: SideMetrics = agg.mean.agent.expect("table rows carry both sides");
        let p: SideMetrics = agg.mean.player.expect("table rows carry both sides");
        let t = targets(race);
        out.push(Check::new(format!("{r} mean EPM^A"), a.epm, t.rates[0], RATE_TOL));
        out.push(Check::new(format!("{r} mean EPM^P"), p.epm, t.rates[1], RATE_TOL));
        out.push(Check::new(format!("{r} mean APM^A"), a.apm, t.rates[2], RATE_TOL));
        out.push(Check::new(format!("{r} mean APM^P"), p.apm, t.rates[3], RATE_TOL));
        if let Some(c) = t.counts {
            out.push(Check::new(format!("{r} mean CO^A"), a.co, c[0], COUNT_TOL));
            out.push(Check::new(format!("{r} mean AO^A"), a.ao, c[1], COUNT_TOL));
            out.push(Check::new(format!("{r} mean CO^P"), p.co, c[2], COUNT_TOL));
            out.push(Check::new(format!("{r} mean AO^P"), p.ao, c[3], COUNT_TOL));
        }
        out.push(Check::new(format!("{r} mean NCR^A"), a.ncr, t.ncr[0], NCR_TOL));
        out.push(Check::new(format!("{r} mean NCR^P"), p.ncr, t.ncr[1], NCR_TOL));
        if race == Race::Protoss {
            out.push(Check::new(format!("{r} non-camera EPM^A"), non_camera_epm(&a), 124.2, NC_EPM_TOL));
            out.push(Check::new(format!("{r} non-camera EPM^P"), non_camera_epm(&p), 78.4, NC_EPM_TOL));
        }
        for row in rows {
            let Some(rep) = &row.report else { continue };
            for (side, m) in [("A", rep.agent.unwrap()), ("P", rep.player.unwrap())] {
                out.push(Check::new(
                    format!("{r} row {} NCR^{side} = 1 - CO/AO", row.id),
                    ncr_from_counts(m.co, m.ao),
                    m.ncr,
                    NCR_TOL,
                ));
            }
        }
        out.push(Check::info(format!("{r} incomplete rows excluded"), agg.excluded as f64));
        for side in Side::ALL {
            let e = apm_epm_ratio(&reps, side)?;
            let s = if side == Side::Agent { "A" } else { "P" };
            out.push(Check::info(format!("{r} APM/EPM^{s} ratio of means"), e.ratio_of_means));
            out.push(Check::info(format!("{r} APM/EPM^{s} mean of ratios"), e.mean_of_ratios));
        }
    }
    Ok(out)
}

pub fn verify_table_dir(dir: &Path) -> Result<Vec<Check>, ReplayError> {
    verify_tables(&TableSet::load(dir)?)
}
