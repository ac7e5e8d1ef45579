//! Scenario execution.

use std::path::{Path, PathBuf};

use pairsim::dynamics::{self, LindbladGenerator};
use pairsim::observables::{self, CORRELATION_SPECS};
use pairsim::{dressed, DensityMatrix, ModelParams};

use crate::config::{InitialState, Scenario, SimulationConfig, SweepPoint};
use crate::error::CliError;
use crate::output::{Artifact, Cell};

/// Simulation subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evolve,
    Spectrum,
    Correlations,
    Eigens,
}

impl Command {
    pub fn label(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Spectrum => "spectrum",
            Command::Correlations => "correlations",
            Command::Eigens => "eigens",
        }
    }

    /// Scenario run by this subcommand, checked against the config's own choice.
    pub fn resolve(self, requested: Option<Scenario>) -> Result<Scenario, CliError> {
        let default = match self {
            Command::Evolve => Scenario::Evolve,
            Command::Spectrum => Scenario::Spectrum,
            Command::Correlations => Scenario::Correlations,
            Command::Eigens => Scenario::EigensSweep,
        };
        match requested {
            None => Ok(default),
            Some(s) if subcommand_for(s) == self.label() => Ok(s),
            Some(s) => Err(CliError::config(
                "scenario",
                format!("`{}` runs under the `{}` subcommand, not `{}`", s.label(), subcommand_for(s), self.label()),
            )),
        }
    }
}

pub fn subcommand_for(scenario: Scenario) -> &'static str {
    match scenario {
        Scenario::Evolve | Scenario::PrepareCompare => "evolve",
        Scenario::Spectrum => "spectrum",
        Scenario::Correlations => "correlations",
        Scenario::EigensSweep => "eigens",
    }
}

/// Runs `config` under `command` and writes every artifact into `out`.
pub fn run(command: Command, config: &SimulationConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let artifacts = artifacts(command, config)?;
    std::fs::create_dir_all(out).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
    artifacts.iter().map(|a| a.write_to(out)).collect()
}

/// Computes the artifacts of a run without touching the filesystem.
pub fn artifacts(command: Command, config: &SimulationConfig) -> Result<Vec<Artifact>, CliError> {
    config.validate()?;
    let scenario = command.resolve(config.scenario)?;
    let mut resolved = config.clone();
    resolved.scenario = Some(scenario);
    let ctx = Context { config: &resolved, scenario };
    match scenario {
        Scenario::EigensSweep => ctx.eigens(),
        _ => {
            let mut all = Vec::new();
            for point in resolved.sweep_points() {
                let params = resolved.params_at(&point)?;
                let mut produced = match scenario {
                    Scenario::Evolve => ctx.evolve(&params, &point)?,
                    Scenario::PrepareCompare => ctx.prepare_compare(&params, &point)?,
                    Scenario::Spectrum => ctx.spectrum(&params, &point)?,
                    Scenario::Correlations => ctx.correlations(&params, &point)?,
                    Scenario::EigensSweep => unreachable!(),
                };
                all.append(&mut produced);
            }
            Ok(all)
        }
    }
}

struct Context<'a> {
    config: &'a SimulationConfig,
    scenario: Scenario,
}

struct Start {
    state: DensityMatrix,
    t0: f64,
    notes: Vec<String>,
}

impl Context<'_> {
    fn stem(&self, default: &str) -> String {
        self.config.output_path.clone().unwrap_or_else(|| default.to_string())
    }

    fn header(&self, point: &SweepPoint, notes: &[String]) -> Vec<String> {
        let mut lines = vec![
            format!("usc-pairsim {}", env!("CARGO_PKG_VERSION")),
            format!("scenario = {}", self.scenario.label()),
        ];
        if !point.assignments.is_empty() {
            let sweep: Vec<String> = point.assignments.iter().map(|(n, v)| format!("{n} = {v}")).collect();
            lines.push(format!("sweep point: {}", sweep.join(", ")));
        }
        lines.extend(notes.iter().cloned());
        lines.push("resolved config:".into());
        lines.extend(self.config.to_toml().lines().map(str::to_string));
        lines
    }

    fn horizon(&self, params: &ModelParams) -> Result<f64, CliError> {
        match self.config.t_max {
            Some(t) => Ok(t),
            None => dynamics::default_horizon(params)
                .ok_or_else(|| CliError::config("t_max", "all decay rates vanish; set t_max explicitly")),
        }
    }

    fn grid(&self, t0: f64, t_max: f64) -> Vec<f64> {
        let n = (t_max / self.config.t_step).round().max(1.0) as usize;
        (0..=n).map(|i| t0 + i as f64 * self.config.t_step).collect()
    }

    fn start(&self, gen: &LindbladGenerator) -> Result<Start, CliError> {
        let basis = gen.basis();
        Ok(match self.config.initial_state {
            InitialState::Tilde0 => Start { state: dynamics::eigenstate_projector(basis, basis.index_tilde0()), t0: 0.0, notes: Vec::new() },
            InitialState::Ground => Start { state: dynamics::eigenstate_projector(basis, 0), t0: 0.0, notes: Vec::new() },
            InitialState::PiPulse => {
                let prep = dynamics::prepare_tilde0(gen, &self.config.drive.unwrap_or_default())?;
                let notes = pulse_notes(&prep);
                Start { state: prep.state, t0: prep.t_end, notes }
            }
        })
    }

    fn flux_artifact(&self, name: String, series: &observables::FluxSeries, point: &SweepPoint, notes: &[String]) -> Artifact {
        let mut a = Artifact::new(name, &["gamma_t", "mean_na", "mean_nb", "flux_a", "flux_b", "pop_tilde0"]);
        a.metadata = self.header(point, notes);
        for i in 0..series.times.len() {
            a.rows.push(
                [series.gamma_t[i], series.mean_na[i], series.mean_nb[i], series.flux_a[i], series.flux_b[i], series.pop_tilde0[i]]
                    .map(Cell::from)
                    .to_vec(),
            );
        }
        a
    }

    fn evolve(&self, params: &ModelParams, point: &SweepPoint) -> Result<Vec<Artifact>, CliError> {
        let gen = LindbladGenerator::from_model(params, self.config.dims)?;
        let start = self.start(&gen)?;
        let grid = self.grid(start.t0, self.horizon(params)?);
        let traj = dynamics::evolve(&gen, &start.state, &grid)?;
        let series = observables::flux_series(&traj, gen.basis(), params, self.config.gamma_ref);
        let mut notes = start.notes;
        notes.push(format!("initial_state = {}", initial_label(self.config.initial_state)));
        let name = format!("{}{}.csv", self.stem("flux"), point.suffix());
        Ok(vec![self.flux_artifact(name, &series, point, &notes)])
    }

    /// Flux from the pulse-prepared state after the pulse window, and from `|0̃⟩`
    /// released at the pulse centre, on a common clock.
    fn prepare_compare(&self, params: &ModelParams, point: &SweepPoint) -> Result<Vec<Artifact>, CliError> {
        let gen = LindbladGenerator::from_model(params, self.config.dims)?;
        let basis = gen.basis();
        let prep = dynamics::prepare_tilde0(&gen, &self.config.drive.unwrap_or_default())?;
        let t_max = self.horizon(params)?;
        let notes = pulse_notes(&prep);
        let stem = self.stem("flux");

        let traj = dynamics::evolve(&gen, &prep.state, &self.grid(prep.t_end, t_max))?;
        let prepared = observables::flux_series(&traj, basis, params, self.config.gamma_ref);

        let tc = prep.pulse.t_center;
        let relative = self.grid(0.0, t_max + prep.t_end - tc);
        let traj = dynamics::evolve(&gen, &dynamics::eigenstate_projector(basis, basis.index_tilde0()), &relative)?;
        let mut reference = observables::flux_series(&traj, basis, params, self.config.gamma_ref);
        reference.gamma_t = relative.iter().map(|t| self.config.gamma_ref * (t + tc)).collect();

        let mut ref_notes = notes.clone();
        ref_notes.push(format!("|0~> released at t_center = {tc}"));
        Ok(vec![
            self.flux_artifact(format!("{stem}_prepared{}.csv", point.suffix()), &prepared, point, &notes),
            self.flux_artifact(format!("{stem}_tilde0{}.csv", point.suffix()), &reference, point, &ref_notes),
        ])
    }

    fn spectrum(&self, params: &ModelParams, point: &SweepPoint) -> Result<Vec<Artifact>, CliError> {
        let gen = LindbladGenerator::from_model(params, self.config.dims)?;
        let start = self.start(&gen)?;
        let result = observables::emission_spectrum(&gen, params, &start.state, &self.config.spectrum)?;
        let mut notes = start.notes;
        notes.push(format!("initial_state = {}", initial_label(self.config.initial_state)));
        notes.push(format!("window = {}", result.window));
        notes.push(format!("tail_ratio = {}", result.tail_ratio));
        for p in &result.peaks {
            notes.push(format!("peak omega = {}, S = {}", p.omega, p.height));
        }
        let mut a = Artifact::new(format!("{}{}.csv", self.stem("spectrum"), point.suffix()), &["omega_over_omega0", "S"]);
        a.metadata = self.header(point, &notes);
        for (w, s) in result.omega_grid.iter().zip(&result.s) {
            a.rows.push(vec![Cell::Num(*w), Cell::Num(*s)]);
        }
        Ok(vec![a])
    }

    fn correlations(&self, params: &ModelParams, point: &SweepPoint) -> Result<Vec<Artifact>, CliError> {
        let gen = LindbladGenerator::from_model(params, self.config.dims)?;
        let start = self.start(&gen)?;
        let grid = self.grid(start.t0, self.horizon(params)?);
        let traj = dynamics::evolve(&gen, &start.state, &grid)?;
        let ordering = self.config.correlations.ordering;
        let specs: Vec<_> = CORRELATION_SPECS
            .iter()
            .filter(|(name, _)| self.config.correlations.columns.as_ref().map_or(true, |c| c.iter().any(|x| x == name)))
            .collect();
        let series = specs
            .iter()
            .map(|(_, modes)| observables::correlation_series(&traj, gen.basis(), modes, ordering))
            .collect::<Result<Vec<_>, _>>()?;

        let mut notes = start.notes;
        notes.push(format!("initial_state = {}", initial_label(self.config.initial_state)));
        notes.push(format!("ordering = {}", ordering.label()));
        notes.push(format!("undefined below denominator {:e} is left empty", observables::DENOMINATOR_FLOOR));
        let mut columns = vec!["gamma_t"];
        columns.extend(specs.iter().map(|(name, _)| *name));
        let mut a = Artifact::new(format!("{}{}.csv", self.stem("correlations"), point.suffix()), &columns);
        a.metadata = self.header(point, &notes);
        for (i, t) in grid.iter().enumerate() {
            let mut row = vec![Cell::Num(self.config.gamma_ref * t)];
            row.extend(series.iter().map(|s| Cell::from(s.g_n[i])));
            a.rows.push(row);
        }
        Ok(vec![a])
    }

    fn eigens(&self) -> Result<Vec<Artifact>, CliError> {
        let points = self.config.sweep_points();
        let names: Vec<String> = points[0].assignments.iter().map(|(n, _)| n.clone()).collect();
        let mut columns: Vec<&str> = names.iter().map(String::as_str).collect();
        columns.extend(["eigenindex", "energy", "parity", "sector"]);
        let mut a = Artifact::new(format!("{}.csv", self.stem("eigens")), &columns);
        a.metadata = self.header(&SweepPoint { assignments: Vec::new() }, &["sector: l = |l> sector, h1 = interacting sector".to_string()]);
        for point in &points {
            let params = self.config.params_at(point)?;
            let basis = dressed::diagonalize_model(&params, self.config.dims)?;
            let t0 = basis.index_tilde0();
            for j in 0..basis.dim() {
                let mut row: Vec<Cell> = point.assignments.iter().map(|(_, v)| Cell::Num(*v)).collect();
                let sector = if basis.l_weight(j) > 0.5 { "l" } else if j == t0 { "h1 tilde0" } else { "h1" };
                row.extend([Cell::Int(j as i64), Cell::Num(basis.energies()[j]), Cell::Int(basis.parity()[j] as i64), Cell::Text(sector.into())]);
                a.rows.push(row);
            }
        }
        Ok(vec![a])
    }
}

fn initial_label(s: InitialState) -> &'static str {
    match s {
        InitialState::Tilde0 => "tilde0",
        InitialState::Ground => "ground",
        InitialState::PiPulse => "pi-pulse",
    }
}

fn pulse_notes(prep: &dynamics::Preparation) -> Vec<String> {
    let p = prep.pulse;
    vec![
        format!("pulse sigma = {}, omega_s = {}, amplitude = {}, t_center = {}", p.sigma, p.omega_s, p.amplitude, p.t_center),
        format!("pulse window ends at t = {}; <0~|rho|0~> there = {}", prep.t_end, prep.fidelity),
    ]
}
