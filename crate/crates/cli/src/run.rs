use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rrvoa_core::principal::{self, ExactnessReport};
use rrvoa_core::{ideal, identities, Bidegree, Check, ComponentProvider, Label, Result};
use serde::Serialize;

use crate::report::{CellRow, DimRow, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Character of one principal subspace against the sum side.
    Character,
    /// The exact sequence at every bidegree up to the weight cap.
    Exactness,
    /// Recursion residual of the sum side.
    Recursion,
    /// Hilbert series of the ideal quotient against the character.
    Hilbert,
    /// Rogers-Ramanujan identities and the vertex operator identities.
    Identities,
    /// Every verifier above.
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Character => "character",
            Command::Exactness => "exactness",
            Command::Recursion => "recursion",
            Command::Hilbert => "hilbert",
            Command::Identities => "identities",
            Command::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Module {
    Vacuum,
    Charged,
}

impl From<Module> for Label {
    fn from(m: Module) -> Label {
        match m {
            Module::Vacuum => Label::Vacuum,
            Module::Charged => Label::Charged,
        }
    }
}

/// Verify the principal subspace character formulas by exact computation.
#[derive(Clone, Debug, Parser)]
#[command(name = "rrvoa", version)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "vacuum")]
    pub module: Module,
    #[arg(long, default_value_t = 4)]
    pub max_charge: u32,
    /// Weight cap in whole q-units.
    #[arg(long, default_value_t = 12)]
    pub max_weight: u32,
    /// Weight cap for the operator identities (default: min(max-weight, 6)).
    #[arg(long)]
    pub operator_weight: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    /// Record wall-clock time in the report (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

impl RunConfig {
    pub fn label(&self) -> Label {
        self.module.into()
    }

    pub fn cap4(&self) -> i64 {
        4 * i64::from(self.max_weight)
    }

    pub fn operator_cap4(&self) -> i64 {
        4 * i64::from(self.operator_weight.unwrap_or(self.max_weight.min(6)))
    }
}

/// Everything gathered while running the verifiers, before rendering.
#[derive(Default)]
struct Collected {
    checks: Vec<Check>,
    series: Vec<(String, rrvoa_core::BivariateSeries)>,
    components: BTreeSet<(Label, Bidegree)>,
    cells: Option<Vec<CellRow>>,
}

impl Collected {
    fn character_cells(&mut self, label: Label, max_charge: u32, cap4: i64) {
        for at in principal::cells(label, max_charge, cap4) {
            self.components.insert((label, at));
        }
    }
}

fn character<P: ComponentProvider>(
    p: &P,
    cfg: &RunConfig,
    label: Label,
    out: &mut Collected,
) -> Result<()> {
    let (max_charge, cap4) = (cfg.max_charge, cfg.cap4());
    let chi = principal::character(p, label, max_charge, cap4)?;
    let want = principal::expected_character(label, max_charge, cap4)?;
    out.checks.push(Check::series_equal(
        format!("character_{}", label.name()),
        &chi,
        &want,
    ));
    out.checks
        .push(principal::verify_oracle(p, label, max_charge, cap4)?);
    out.character_cells(label, max_charge, cap4);
    out.series
        .push((format!("character_{}", label.name()), chi));
    Ok(())
}

fn relations<P: ComponentProvider>(p: &P, cfg: &RunConfig, out: &mut Collected) -> Result<()> {
    let (max_charge, cap4) = (cfg.max_charge, cfg.cap4());
    out.checks
        .push(principal::verify_shift_relation(p, max_charge, cap4)?);
    out.checks
        .extend(principal::verify_euler(p, max_charge, cap4)?.checks);
    out.character_cells(Label::Vacuum, max_charge, cap4);
    out.character_cells(Label::Charged, max_charge, cap4 + 1);
    Ok(())
}

fn exactness<P: ComponentProvider>(p: &P, cfg: &RunConfig, out: &mut Collected) -> Result<()> {
    let ExactnessReport { cells, checks } = principal::verify_exactness(p, cfg.cap4())?;
    out.checks.extend(checks);
    for c in &cells {
        out.components.insert((Label::Charged, c.source));
        out.components.insert((Label::Vacuum, c.middle));
        out.components.insert((Label::Charged, c.target));
    }
    out.cells = Some(cells.iter().map(CellRow::from).collect());
    Ok(())
}

fn hilbert<P: ComponentProvider>(p: &P, cfg: &RunConfig, out: &mut Collected) -> Result<()> {
    let (max_charge, cap4) = (cfg.max_charge, cfg.cap4());
    out.checks
        .push(ideal::cross_check_hilbert(p, max_charge, cap4)?);
    out.checks
        .extend(ideal::verify_s_stability(max_charge, cap4)?);
    out.character_cells(Label::Vacuum, max_charge, cap4);
    out.series
        .push(("hilbert".into(), ideal::hilbert_series(max_charge, cap4)));
    Ok(())
}

fn identities_(cfg: &RunConfig, out: &mut Collected) -> Result<()> {
    out.checks
        .extend(identities::verify_rr_identities(cfg.cap4())?);
    out.checks
        .extend(identities::verify_operator_identities(cfg.operator_cap4())?);
    Ok(())
}

/// Runs the configured verifiers against `provider` on the current rayon pool.
pub fn run<P: ComponentProvider>(cfg: &RunConfig, provider: &P) -> Result<Report> {
    let mut out = Collected::default();
    match cfg.command {
        Command::Character => {
            character(provider, cfg, cfg.label(), &mut out)?;
            relations(provider, cfg, &mut out)?;
        }
        Command::Exactness => exactness(provider, cfg, &mut out)?,
        Command::Recursion => out.checks.push(identities::verify_recursion(cfg.cap4())?),
        Command::Hilbert => hilbert(provider, cfg, &mut out)?,
        Command::Identities => identities_(cfg, &mut out)?,
        Command::All => {
            character(provider, cfg, Label::Vacuum, &mut out)?;
            character(provider, cfg, Label::Charged, &mut out)?;
            relations(provider, cfg, &mut out)?;
            exactness(provider, cfg, &mut out)?;
            out.checks.push(identities::verify_recursion(cfg.cap4())?);
            hilbert(provider, cfg, &mut out)?;
            identities_(cfg, &mut out)?;
        }
    }

    let dims = out
        .components
        .iter()
        .map(|&(label, at)| {
            Ok(DimRow {
                label: label.name(),
                charge2: at.charge2,
                weight4: at.weight4,
                dim: provider.component(label, at)?.dim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(cfg, out.checks, out.series, dims, out.cells))
}
