//! Report assembly and rendering. Every format is a pure function of the
//! report, so identical configurations give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rrvoa_core::principal::ExactnessCell;
use rrvoa_core::{Bidegree, BivariateSeries, Check, Error, Result};
use serde::Serialize;

use crate::run::{Command, Format, RunConfig};

/// The configuration as echoed in the report. Scheduling and storage
/// options (`jobs`, `out`, `cache_dir`) are left out since they never
/// change the result.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub module: &'static str,
    pub max_charge: u32,
    pub max_weight: u32,
    pub operator_weight: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub status: &'static str,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimRow {
    pub label: &'static str,
    pub charge2: i64,
    pub weight4: i64,
    pub dim: usize,
}

/// One checked bidegree of the exact sequence.
#[derive(Clone, Debug, Serialize)]
pub struct CellRow {
    pub middle: Bidegree,
    pub source: Bidegree,
    pub target: Bidegree,
    pub dim_source: usize,
    pub dim_middle: usize,
    pub dim_target: usize,
    pub rank_e: usize,
    pub rank_o: usize,
    pub passed: bool,
}

impl From<&ExactnessCell> for CellRow {
    fn from(c: &ExactnessCell) -> Self {
        CellRow {
            middle: c.middle,
            source: c.source,
            target: c.target,
            dim_source: c.dim_source,
            dim_middle: c.dim_middle,
            dim_target: c.dim_target,
            rank_e: c.rank_e(),
            rank_o: c.rank_o(),
            passed: c.passed(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Command,
    pub config: ConfigEcho,
    pub checks: Vec<CheckRow>,
    pub series: BTreeMap<String, BivariateSeries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<CellRow>>,
    pub elapsed_ms: Option<u64>,
    pub version: &'static str,
    #[serde(skip)]
    pub dimensions: Vec<DimRow>,
}

impl Report {
    pub fn new(
        cfg: &RunConfig,
        checks: Vec<Check>,
        series: Vec<(String, BivariateSeries)>,
        dimensions: Vec<DimRow>,
        cells: Option<Vec<CellRow>>,
    ) -> Self {
        Report {
            command: cfg.command,
            config: ConfigEcho {
                module: cfg.label().name(),
                max_charge: cfg.max_charge,
                max_weight: cfg.max_weight,
                operator_weight: (cfg.operator_cap4() / 4) as u32,
            },
            checks: checks
                .into_iter()
                .map(|c| CheckRow {
                    name: c.name,
                    status: if c.passed { "pass" } else { "fail" },
                    counterexample: c.counterexample,
                })
                .collect(),
            series: series.into_iter().collect(),
            cells,
            elapsed_ms: None,
            version: rrvoa_core::CODE_VERSION,
            dimensions,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == "pass")
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.render_csv(),
            Format::Text => Ok(self.render_text()),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label", "charge2", "weight4", "dim"])
            .map_err(|e| Error::Parse(e.to_string()))?;
        for d in &self.dimensions {
            w.serialize((d.label, d.charge2, d.weight4, d.dim))
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(
            s,
            "{} module={} max_charge={} max_weight={} operator_weight={} (version {})",
            self.command.name(),
            c.module,
            c.max_charge,
            c.max_weight,
            c.operator_weight,
            self.version
        );
        for check in &self.checks {
            match &check.counterexample {
                None => {
                    let _ = writeln!(s, "{} {}", check.status.to_uppercase(), check.name);
                }
                Some(bad) => {
                    let _ = writeln!(s, "{} {}: {bad}", check.status.to_uppercase(), check.name);
                }
            }
        }
        if let Some(cells) = &self.cells {
            let _ = writeln!(s, "{} bidegrees checked", cells.len());
        }
        for (name, series) in &self.series {
            let _ = writeln!(s, "{name} = {series}");
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed {ms} ms");
        }
        let _ = writeln!(s, "{}", if self.passed() { "pass" } else { "fail" });
        s
    }
}
