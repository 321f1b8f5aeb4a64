//! Command-line front end. Every command produces flat [`Row`]s written as
//! JSON or CSV; rows carrying a `pass` flag are checks.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::code::{
    codewords, equivalent_mod, excitation_number, export_codeword, logical_ops, stabilizers, x_stabilizers,
    z_stabilizers, CodeSpec, Excitation, PauliString,
};
use crate::decoder::{build_table, Backend, CircuitOptions};
use crate::error::{Error, Result};
use crate::qla::{bits_of_index, inner};
use crate::reference::{codeword_terms, LOGICALS_12_2, X_STABILIZERS_12_2, Z_STABILIZERS_12_2};
use crate::report::{Report, Row, Value};
use crate::repro;
use crate::verify::ce::{ce_certify, compare_cc_ad, CE_TOL, DEFAULT_DT};
use crate::verify::fidelity::FIT_GRID;
use crate::verify::overlap::{overlap_matrix, residual_scaling, validate_grid, DEFAULT_GRID};
use crate::verify::trajectories::{sample_fidelity, MIN_SHOTS};
use crate::verify::{fidelity_sweep, fit_infidelity, probes, FidelityConfig};

/// Default qubit limit, overridable through `ADSHOR_MAX_QUBITS`.
pub const DEFAULT_MAX_QUBITS: usize = 20;

pub const MAX_QUBITS_ENV: &str = "ADSHOR_MAX_QUBITS";

/// Step-1 and step-2 overlaps count as zero below this.
pub const ZERO_TOL: f64 = 1e-12;

/// Slope tolerance around `w + 1`.
pub const SLOPE_TOL: f64 = 0.15;

/// Largest `|b| / c` accepted from the infidelity fit.
pub const LINEAR_RATIO_TOL: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "adshor", version, about = "Amplitude-damping Shor codes: build, simulate, decode, verify")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum TableId {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    #[value(name = "IV")]
    IV,
    #[value(name = "V")]
    V,
    #[value(name = "VI")]
    VI,
    #[value(name = "VII")]
    VII,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Codeword amplitudes, Gram matrix and excitation numbers.
    Codewords,
    /// Stabilizer generators and logical operators.
    Stabilizers,
    /// Syndrome lookup table for weight `<= w` damping.
    Table,
    /// Overlap-matrix checks and residual scaling over the gamma grid.
    VerifyAqec,
    /// Worst-case fidelity sweep with optional Monte Carlo cross-check.
    Fidelity,
    /// Rate comparison tables.
    Rates,
    /// Recompute one of the tabulated results.
    Repro {
        #[arg(value_enum)]
        table: TableId,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    #[arg(long, global = true, default_value_t = 1)]
    pub w: usize,
    #[arg(long = "K", global = true, default_value_t = 1)]
    pub k: usize,
    #[arg(long, global = true)]
    pub dual_rail: bool,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Comma-separated gamma values.
    #[arg(long, global = true, value_delimiter = ',')]
    pub gamma_grid: Option<Vec<f64>>,
    #[arg(long, global = true, default_value_t = -1.0, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "projector")]
    pub decoder: DecoderArg,
    /// Largest damping weight enumerated.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo samples per gamma (0 disables).
    #[arg(long, global = true, default_value_t = 0)]
    pub trajectories: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub rounds: usize,
    /// Use full-strength artificial damping on every circuit path.
    #[arg(long, global = true)]
    pub equalize: bool,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Projector,
    Circuit,
}

/// Validated settings for one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub spec: CodeSpec,
    pub gamma: Option<f64>,
    pub gamma_grid: Option<Vec<f64>>,
    pub g: f64,
    pub dt: Option<f64>,
    pub decoder: Backend,
    pub cutoff: Option<usize>,
    pub seed: Option<u64>,
    pub trajectories: usize,
    pub rounds: usize,
    pub equalize: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Codewords => "codewords".into(),
        Command::Stabilizers => "stabilizers".into(),
        Command::Table => "table".into(),
        Command::VerifyAqec => "verify-aqec".into(),
        Command::Fidelity => "fidelity".into(),
        Command::Rates => "rates".into(),
        Command::Repro { table } => format!("repro {table:?}"),
    }
}

/// Qubit limit from the environment, or the default.
pub fn max_qubits() -> Result<usize> {
    match std::env::var(MAX_QUBITS_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("{MAX_QUBITS_ENV}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_MAX_QUBITS),
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        Self::new(&cli.command, &cli.opts, max_qubits()?)
    }

    pub fn new(command: &Command, o: &Options, max_qubits: usize) -> Result<Self> {
        let spec = CodeSpec::new(o.w, o.k)?.with_dual_rail(o.dual_rail);
        if spec.n_qubits() > max_qubits {
            return Err(Error::InvalidConfig(format!(
                "{spec} needs {} qubits; the limit is {max_qubits} (set {MAX_QUBITS_ENV} to raise it)",
                spec.n_qubits()
            )));
        }
        if let Some(grid) = &o.gamma_grid {
            if grid.is_empty() {
                return Err(Error::InvalidGrid("empty gamma grid".into()));
            }
        }
        for g in o.gamma.iter().chain(o.gamma_grid.iter().flatten()) {
            if !(0.0..=1.0).contains(g) {
                return Err(Error::OutOfRange { name: "gamma", value: *g });
            }
        }
        if let Some(c) = o.cutoff {
            if c > spec.n_qubits() {
                return Err(Error::InvalidConfig(format!(
                    "cutoff {c} exceeds the {} qubits of {spec}",
                    spec.n_qubits()
                )));
            }
        }
        if o.trajectories > 0 {
            if o.seed.is_none() {
                return Err(Error::InvalidConfig("--trajectories needs --seed".into()));
            }
            if o.trajectories < MIN_SHOTS {
                return Err(Error::InvalidConfig(format!("--trajectories must be at least {MIN_SHOTS}")));
            }
        }
        if o.rounds == 0 {
            return Err(Error::InvalidConfig("--rounds must be at least 1".into()));
        }
        Ok(Self {
            command: command_name(command),
            spec,
            gamma: o.gamma,
            gamma_grid: o.gamma_grid.clone(),
            g: o.g,
            dt: o.dt,
            decoder: match o.decoder {
                DecoderArg::Projector => Backend::Projector,
                DecoderArg::Circuit => Backend::Circuit,
            },
            cutoff: o.cutoff,
            seed: o.seed,
            trajectories: o.trajectories,
            rounds: o.rounds,
            equalize: o.equalize,
            out: o.out.clone(),
            format: o.format,
        })
    }

    /// `--gamma-grid`, else `--gamma`, else `default`.
    fn grid(&self, default: &[f64]) -> Vec<f64> {
        self.gamma_grid
            .clone()
            .or_else(|| self.gamma.map(|g| vec![g]))
            .unwrap_or_else(|| default.to_vec())
    }

    fn circuit(&self) -> CircuitOptions {
        CircuitOptions { equalize: self.equalize }
    }
}

pub fn run(cli: &Cli) -> Result<Report<RunConfig>> {
    let cfg = RunConfig::from_cli(cli)?;
    execute(&cli.command, cfg)
}

pub fn execute(command: &Command, cfg: RunConfig) -> Result<Report<RunConfig>> {
    let rows = match command {
        Command::Codewords => cmd_codewords(&cfg)?,
        Command::Stabilizers => cmd_stabilizers(&cfg)?,
        Command::Table => cmd_table(&cfg)?,
        Command::VerifyAqec => cmd_verify_aqec(&cfg)?,
        Command::Fidelity => cmd_fidelity(&cfg)?,
        Command::Rates => cmd_rates(&cfg),
        Command::Repro { table } => cmd_repro(&cfg, *table)?,
    };
    Ok(Report::new(cfg.command.clone(), cfg, rows))
}

pub fn cmd_codewords(cfg: &RunConfig) -> Result<Vec<Row>> {
    let spec = cfg.spec;
    let label = spec.label();
    let mut rows = Vec::new();
    for i in 0..spec.logical_dim() {
        let export = export_codeword(&spec, i)?;
        let bits = bits_of_index(spec.k, i);
        for (x, re, im) in &export.amplitudes {
            let phys = bits_of_index(spec.n_qubits(), *x);
            rows.push(Row::info(&label, None, format!("i={bits} |{phys}> re"), *re));
            if *im != 0.0 {
                rows.push(Row::info(&label, None, format!("i={bits} |{phys}> im"), *im));
            }
        }
    }
    let words = codewords(&spec)?;
    let mut gram: f64 = 0.0;
    for (a, x) in words.iter().enumerate() {
        for (b, y) in words.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            gram = gram.max((inner(x, y)? - target).norm());
        }
    }
    rows.push(Row::at_most(&label, None, "gram_identity_defect", gram, ZERO_TOL));
    for (i, w) in words.iter().enumerate() {
        let value: Value = match excitation_number(w) {
            Excitation::Constant(m) => (m as usize).into(),
            Excitation::NotConstant => "mixed".into(),
        };
        rows.push(Row::info(&label, None, format!("excitation i={}", bits_of_index(spec.k, i)), value));
    }
    if !spec.dual_rail && spec.w <= 2 {
        let mut worst: f64 = 0.0;
        for (i, word) in words.iter().enumerate() {
            let terms = codeword_terms(&spec, &bits_of_index(spec.k, i)).expect("w <= 2");
            let mut expected = vec![0.0; word.dim()];
            for (b, a) in terms {
                expected[usize::from_str_radix(&b, 2).expect("binary")] = a;
            }
            for (x, a) in word.amps().iter().enumerate() {
                worst = worst.max((a.re - expected[x]).abs() + a.im.abs());
            }
        }
        rows.push(Row::at_most(&label, None, "closed_form_defect", worst, ZERO_TOL));
    }
    Ok(rows)
}

fn pauli_rows(rows: &mut Vec<Row>, label: &str, name: &str, ops: &[PauliString]) {
    for (j, p) in ops.iter().enumerate() {
        rows.push(Row::info(label, None, format!("{name}[{j}]"), p.to_string()));
    }
}

pub fn cmd_stabilizers(cfg: &RunConfig) -> Result<Vec<Row>> {
    let spec = cfg.spec.outer();
    let label = spec.label();
    let n = spec.n_outer();
    let mut rows = Vec::new();
    let (zs, xs) = (z_stabilizers(&spec), x_stabilizers(&spec));
    let logicals = logical_ops(&spec);
    pauli_rows(&mut rows, &label, "z_stabilizer", &zs);
    pauli_rows(&mut rows, &label, "x_stabilizer", &xs);
    pauli_rows(&mut rows, &label, "logical_z", &logicals.z);
    pauli_rows(&mut rows, &label, "logical_x", &logicals.x);
    rows.push(Row::info(&label, None, "logical_x_all", logicals.x_all.to_string()));

    let all = stabilizers(&spec);
    let noncommuting = all
        .iter()
        .enumerate()
        .flat_map(|(a, p)| all[a + 1..].iter().map(move |q| (p, q)))
        .filter(|(p, q)| !p.commutes_with(q))
        .count();
    rows.push(Row::check(&label, None, "noncommuting_generator_pairs", noncommuting, None, noncommuting == 0));

    let words = codewords(&spec)?;
    let mut defect: f64 = 0.0;
    for s in &all {
        for w in &words {
            defect = defect.max((s.expectation(w)? - 1.0).norm());
        }
    }
    rows.push(Row::at_most(&label, None, "stabilizer_expectation_defect", defect, ZERO_TOL));

    let mut violations = 0;
    for (a, z) in logicals.z.iter().enumerate() {
        for (b, x) in logicals.x.iter().enumerate() {
            if z.commutes_with(x) == (a == b) {
                violations += 1;
            }
        }
        violations += all.iter().filter(|s| !s.commutes_with(z)).count();
    }
    for x in &logicals.x {
        violations += all.iter().filter(|s| !s.commutes_with(x)).count();
    }
    rows.push(Row::check(&label, None, "logical_algebra_violations", violations, None, violations == 0));

    if spec.w == 2 && spec.k == 2 {
        let parse = |t: &str| PauliString::parse(n, t);
        let mut mismatches = 0;
        for t in Z_STABILIZERS_12_2 {
            if !zs.contains(&parse(t)?) {
                mismatches += 1;
            }
        }
        for t in X_STABILIZERS_12_2 {
            if !equivalent_mod(&parse(t)?, &PauliString::identity(n), &xs) {
                mismatches += 1;
            }
        }
        let expected = [&logicals.z[0], &logicals.z[1], &logicals.x[0], &logicals.x[1]];
        for (t, ours) in LOGICALS_12_2.iter().zip(expected) {
            if !equivalent_mod(&parse(t)?, ours, &all) {
                mismatches += 1;
            }
        }
        rows.push(Row::check(&label, None, "reference_mismatches", mismatches, None, mismatches == 0));
    }
    Ok(rows)
}

pub fn cmd_table(cfg: &RunConfig) -> Result<Vec<Row>> {
    let table = build_table(&cfg.spec.outer())?;
    let label = table.spec.label();
    let mut rows = Vec::new();
    for e in table.entries.values() {
        let positions = e.positions.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("+");
        let value = if positions.is_empty() { "none".to_string() } else { positions };
        rows.push(Row::info(&label, None, format!("syndrome {}", e.syndrome), value));
        if e.is_collision() {
            rows.push(Row::info(&label, None, format!("candidates {}", e.syndrome), e.candidates.len()));
        }
    }
    rows.push(Row::info(&label, None, "entries", table.len()));
    rows.push(Row::info(&label, None, "collisions", table.collisions().count()));
    Ok(rows)
}

pub fn cmd_verify_aqec(cfg: &RunConfig) -> Result<Vec<Row>> {
    let spec = cfg.spec;
    let label = spec.label();
    let grid = cfg.grid(&DEFAULT_GRID);
    let mut rows = Vec::new();
    for &gamma in &grid {
        let r = overlap_matrix(&spec, gamma, spec.w)?;
        let g = Some(gamma);
        rows.push(Row::info(&label, g, "residual", r.residual));
        rows.push(Row::at_most(&label, g, "step1_max", r.step1_max, ZERO_TOL));
        rows.push(Row::at_most(&label, g, "step2_max", r.step2_max, ZERO_TOL));
        rows.push(Row::info(&label, g, "diag_spread", r.diag_spread));
        rows.push(Row::at_most(&label, g, "hermiticity", r.hermiticity, ZERO_TOL));
        for i in 0..spec.logical_dim() {
            let (zeros, total) = r.off_diagonal_zeros(i, ZERO_TOL);
            rows.push(Row::check(
                &label,
                g,
                format!("offdiag_zero_pairs i={}", bits_of_index(spec.k, i)),
                zeros,
                None,
                zeros == total,
            ));
        }
    }
    if grid.len() > 1 {
        validate_grid(&grid, 4)?;
        let fit = residual_scaling(&spec, &grid)?;
        let expected = (spec.w + 1) as f64;
        let value: Value = match fit.slope {
            Some(s) => s.into(),
            None => "exact".into(),
        };
        rows.push(Row::check(&label, None, format!("slope (expect {expected})"), value, Some(SLOPE_TOL), fit.meets(expected, SLOPE_TOL)));
    }
    if spec.dual_rail {
        let dts = cfg.dt.map(|d| vec![d]).unwrap_or_else(|| DEFAULT_DT.to_vec());
        let ce = ce_certify(&spec, cfg.g, &dts)?;
        for r in &ce.rows {
            let metric = format!("g*dt={}", r.g * r.dt);
            rows.push(Row::at_most(&label, None, format!("{metric} modulus_defect"), r.modulus_defect, CE_TOL));
            rows.push(Row::at_most(&label, None, format!("{metric} phase_spread"), r.phase_spread, CE_TOL));
        }
        rows.push(Row::check(&label, None, "constant_excitation", ce.pass, None, ce.pass));
        for &gamma in &grid {
            let mut worst: f64 = 0.0;
            for word in codewords(&spec)? {
                for &dt in &dts {
                    worst = worst.max(compare_cc_ad(&word, gamma, cfg.g, dt, cfg.cutoff)?.max_branch_diff);
                }
            }
            rows.push(Row::at_most(&label, Some(gamma), "cc_ad_vs_ad_branch_diff", worst, CE_TOL));
        }
    }
    Ok(rows)
}

pub fn cmd_fidelity(cfg: &RunConfig) -> Result<Vec<Row>> {
    let spec = cfg.spec;
    let label = spec.label();
    let grid = cfg.grid(&FIT_GRID);
    let fc = FidelityConfig {
        backend: cfg.decoder,
        rounds: cfg.rounds,
        cutoff: cfg.cutoff,
        seed: cfg.seed.unwrap_or(0),
        circuit: cfg.circuit(),
        g: cfg.g,
        dt: cfg.dt.unwrap_or(0.0),
        ..FidelityConfig::default()
    };
    let records = fidelity_sweep(&spec, &grid, &fc)?;
    let mut rows = Vec::new();
    for r in &records {
        let g = Some(r.gamma);
        rows.push(Row::info(&label, g, "fidelity_termwise", r.termwise));
        rows.push(Row::info(&label, g, "fidelity_exact_worst", r.exact_worst));
        if let Some(l) = r.literal {
            rows.push(Row::info(&label, g, "fidelity_literal", l));
        }
        rows.push(Row::at_most(&label, g, "truncation_bound", r.truncation_bound, fc.truncation_tolerance));
    }
    let positive: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.gamma > 0.0)
        .map(|r| (r.gamma, 1.0 - r.termwise))
        .collect();
    if positive.len() >= 2 {
        let fit = fit_infidelity(&positive)?;
        rows.push(Row::info(&label, None, "infidelity_coefficient", fit.coefficient));
        rows.push(Row::info(&label, None, "infidelity_quadratic", fit.quadratic));
        rows.push(Row::at_most(&label, None, "infidelity_linear_ratio", fit.linear_ratio, LINEAR_RATIO_TOL));
    }
    if cfg.trajectories > 0 {
        let states = probes(&spec, fc.n_haar, fc.seed);
        // |+> for one logical qubit, a Haar state otherwise
        let probe = if spec.k == 1 { &states[2] } else { states.last().expect("nonempty") };
        for &gamma in &grid {
            let est = sample_fidelity(&spec, gamma, &fc, probe, cfg.trajectories, cfg.seed.expect("validated"))?;
            let g = Some(gamma);
            rows.push(Row::info(&label, g, "trajectory_mean", est.mean));
            rows.push(Row::info(&label, g, "trajectory_exact", est.exact));
            rows.push(Row::at_most(&label, g, "trajectory_z_score", est.z_score, 3.0));
        }
    }
    Ok(rows)
}

pub fn cmd_rates(cfg: &RunConfig) -> Vec<Row> {
    let mut rows = repro::table_i(cfg.spec.w, cfg.spec.k);
    rows.extend(repro::table_ii());
    rows
}

pub fn cmd_repro(cfg: &RunConfig, table: TableId) -> Result<Vec<Row>> {
    let gamma = cfg.gamma.unwrap_or(0.1);
    Ok(match table {
        TableId::I => repro::table_i(cfg.spec.w, cfg.spec.k),
        TableId::II => repro::table_ii(),
        TableId::III => repro::table_iii()?,
        TableId::IV => repro::table_iv(cfg.spec.k)?,
        TableId::V => repro::table_v(gamma)?,
        TableId::VI => repro::table_vi(gamma)?,
        TableId::VII => repro::table_vii(gamma, cfg.circuit())?,
    })
}

/// Writes the report to `--out` or stdout in the chosen format.
pub fn write_report(report: &Report<RunConfig>) -> Result<()> {
    let mut buf = Vec::new();
    match report.config.format {
        Format::Json => report.write_json(&mut buf)?,
        Format::Csv => report.write_csv(&mut buf)?,
    }
    match &report.config.out {
        Some(path) => std::fs::write(path, buf)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&buf)?;
        }
    }
    Ok(())
}
