//! Acceptance suite: one PASS/FAIL line per criterion, every tolerance pinned here.
//!
//! Runs with `cargo test -p usc-pairsim-core --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use pairsim::dressed::{self, ChannelId, DressedBasis};
use pairsim::dynamics::{self, LindbladGenerator, Trajectory};
use pairsim::hilbert::{self, DensityMatrix, SpaceDims};
use pairsim::observables::{self, FluxSeries, Ordering, SpectrumSettings, CORRELATION_SPECS};
use pairsim::{linalg, model, DriveParams, ModelParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Criterion 1.
const PEAK_TOL: f64 = 0.02;
const BLUE_PEAKS: [f64; 4] = [3.307, 1.008, 1.260, 1.512];
const BLACK_PEAKS: [f64; 4] = [3.08, 0.782, 1.033, 1.286];
// Criterion 2.
const FLUX_MAX_TARGET: f64 = 0.09;
const FLUX_MAX_TOL: f64 = 0.02;
// Criterion 3.
const PLATEAU_SPREAD: f64 = 0.01;
// Criterion 4.
const PLATEAU_SLACK: f64 = 1e-3;
// Criterion 5.
const G2_MIN: f64 = 10.0;
const G3_BOSON_MAX: f64 = 1.0;
const G3_ATOM_MIN: f64 = 10.0;
// Criterion 6.
const ORACLE_TOL: f64 = 1e-6;
const ORACLE_DRAWS: usize = 10;
// Criterion 7.
const COMMUTATOR_TOL: f64 = 1e-10;
const SELECTION_TOL: f64 = 1e-9;
const ANNIHILATION_TOL: f64 = 1e-10;
const PARITY_DRAWS: usize = 20;
// Invariants along every trajectory.
const TRACE_TOL: f64 = 1e-8;
const HERMITIAN_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-8;
// Criterion 8.
const PREPARED_TOL: f64 = 0.05;

/// Sampling step of flux trajectories (1/ω₀).
const GRID_STEP: f64 = 0.5;
const GAMMA_REF: f64 = 0.02;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: pairsim::Error) -> String {
    e.to_string()
}

fn params(edit: impl FnOnce(&mut ModelParams)) -> ModelParams {
    let mut p = ModelParams::default();
    edit(&mut p);
    p
}

fn grid(t_max: f64, step: f64) -> Vec<f64> {
    let n = (t_max / step).round() as usize;
    (0..=n).map(|i| i as f64 * step).collect()
}

fn tilde0(basis: &DressedBasis) -> DensityMatrix {
    dynamics::eigenstate_projector(basis, basis.index_tilde0())
}

/// Trace, Hermiticity and positivity of every snapshot.
fn trajectory_invariants(traj: &Trajectory) -> Result<(), String> {
    for (i, t) in traj.times().iter().enumerate() {
        let rho = traj.state(i);
        let tr = rho.trace();
        check((tr - 1.0).abs() < TRACE_TOL, format!("trace {tr} at t={t}"))?;
        let herm = linalg::hermitian_deviation(rho.matrix());
        check(herm < HERMITIAN_TOL, format!("hermiticity {herm:e} at t={t}"))?;
        let min = linalg::min_eigenvalue(traj.frame_state(i)).map_err(err)?;
        check(min > -POSITIVITY_TOL, format!("eigenvalue {min:e} at t={t}"))?;
    }
    Ok(())
}

struct FluxRun {
    series: FluxSeries,
}

/// Flux observables from `|0̃⟩` over the default horizon.
fn flux_run(p: &ModelParams) -> Result<FluxRun, String> {
    let gen = LindbladGenerator::from_model(p, SpaceDims::default()).map_err(err)?;
    let horizon = dynamics::default_horizon(p).ok_or("no decay channel")?;
    let traj = dynamics::evolve(&gen, &tilde0(gen.basis()), &grid(horizon, GRID_STEP)).map_err(err)?;
    trajectory_invariants(&traj)?;
    let series = observables::flux_series(&traj, gen.basis(), p, GAMMA_REF);
    Ok(FluxRun { series })
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn strictly(values: &[f64], increasing: bool) -> bool {
    values.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

/// First time the series reaches half its maximum, linearly interpolated.
fn time_to_half_max(times: &[f64], v: &[f64]) -> f64 {
    let half = 0.5 * max_of(v);
    for i in 1..v.len() {
        if v[i] >= half {
            let f = (half - v[i - 1]) / (v[i] - v[i - 1]);
            return times[i - 1] + f * (times[i] - times[i - 1]);
        }
    }
    f64::INFINITY
}

fn criterion_1() -> Outcome {
    let cases: [(&str, f64, f64, &[f64]); 3] = [("a", 0.0, 0.0, &[3.5]), ("b", 0.6, 0.0, &BLUE_PEAKS), ("c", 0.6, 0.6, &BLACK_PEAKS)];
    let settings = SpectrumSettings::default();
    let mut report = Vec::new();
    for (label, g1, g2, expected) in cases {
        let start = Instant::now();
        let p = params(|p| {
            p.g1 = g1;
            p.g2 = g2;
        });
        let gen = LindbladGenerator::from_model(&p, SpaceDims::default()).map_err(err)?;
        let basis = gen.basis();
        let spec = observables::emission_spectrum(&gen, &p, &tilde0(basis), &settings).map_err(err)?;
        let found: Vec<f64> = spec.peaks.iter().map(|pk| pk.omega).collect();
        let tol = if label == "a" { settings.omega_step } else { PEAK_TOL };
        if label == "a" {
            check(found.len() == 1, format!("case a: expected a single peak, found {found:.4?}"))?;
        }
        for e in expected {
            check(found.iter().any(|f| (f - e).abs() <= tol), format!("case {label}: no peak within {tol} of {e}; found {found:.4?}"))?;
        }
        for f in &found {
            check(expected.iter().any(|e| (f - e).abs() <= tol), format!("case {label}: unexpected peak at {f:.4}; found {found:.4?}"))?;
        }
        let e = basis.energies();
        let t0 = basis.index_tilde0();
        for f in &found {
            let matched = (0..t0).any(|m| (e[t0] - e[m] - f).abs() <= PEAK_TOL);
            check(matched, format!("case {label}: peak {f:.4} matches no E(0~) - E(m)"))?;
        }
        let elapsed = start.elapsed();
        check(elapsed < Duration::from_secs(600), format!("case {label} took {elapsed:?}"))?;
        report.push(format!("{label}: {found:.4?} ({:.1}s)", elapsed.as_secs_f64()));
    }
    Ok(report.join("; "))
}

fn criterion_2() -> Outcome {
    let run = flux_run(&params(|p| {
        p.g1 = 0.8;
        p.g2 = 0.8;
    }))?;
    let (na, nb) = run.series.peaks();
    for (name, v) in [("a", na), ("b", nb)] {
        check((v - FLUX_MAX_TARGET).abs() <= FLUX_MAX_TOL, format!("max <X-X+>_{name} = {v:.4}"))?;
    }
    Ok(format!("max <X-X+>_a = {na:.4}, _b = {nb:.4}"))
}

fn criterion_3() -> Outcome {
    let sweep = |edit: &dyn Fn(&mut ModelParams, f64), values: &[f64]| -> Result<Vec<(f64, f64)>, String> {
        values
            .iter()
            .map(|&v| {
                let run = flux_run(&params(|p| edit(p, v)))?;
                Ok(run.series.peaks())
            })
            .collect()
    };
    let mut report = Vec::new();
    let couplings = [0.4, 0.6, 0.8];

    let joint = sweep(&|p, v| {
        p.g1 = v;
        p.g2 = v;
    }, &couplings)?;
    let g2 = sweep(&|p, v| p.g2 = v, &couplings)?;
    let wp = sweep(&|p, v| p.omega_p = v, &[0.25, 0.4, 0.8])?;
    for (name, rows, increasing) in [("g1=g2", &joint, true), ("g2", &g2, true), ("omega_p", &wp, false)] {
        let a: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let b: Vec<f64> = rows.iter().map(|r| r.1).collect();
        check(strictly(&a, increasing) && strictly(&b, increasing), format!("{name}: a {a:.4?}, b {b:.4?} not monotone"))?;
        report.push(format!("{name}: a {a:.4?}"));
    }

    let rates = [0.01, 0.015, 0.03, 0.04];
    let mut maxima = Vec::new();
    let mut half_times = Vec::new();
    for &g in &rates {
        let run = flux_run(&params(|p| {
            p.gamma_a = 0.0;
            p.gamma_b = 0.0;
            p.gamma_gl = g;
        }))?;
        maxima.push(run.series.peaks());
        half_times.push(time_to_half_max(&run.series.times, &run.series.mean_na));
    }
    for (name, vals) in [("a", maxima.iter().map(|m| m.0).collect::<Vec<_>>()), ("b", maxima.iter().map(|m| m.1).collect())] {
        let (lo, hi) = (vals.iter().copied().fold(f64::INFINITY, f64::min), max_of(&vals));
        check((hi - lo) / hi < PLATEAU_SPREAD, format!("gamma_gl sweep: max <X-X+>_{name} {vals:.5?} spread {:.3}%", 100.0 * (hi - lo) / hi))?;
    }
    check(strictly(&half_times, false), format!("time to half max not decreasing: {half_times:.2?}"))?;
    report.push(format!("gamma_gl maxima a {:.5?}, t_half {half_times:.1?}", maxima.iter().map(|m| m.0).collect::<Vec<_>>()));
    Ok(report.join("; "))
}

fn criterion_4() -> Outcome {
    let mut peaks = Vec::new();
    for &g in &[0.0, 0.01, 0.02] {
        let run = flux_run(&params(|p| {
            p.gamma_a = g;
            p.gamma_b = g;
        }))?;
        if g == 0.0 {
            for (name, v) in [("a", &run.series.mean_na), ("b", &run.series.mean_nb)] {
                let worst = v.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
                check(worst <= PLATEAU_SLACK, format!("lossless <X-X+>_{name} drops by {worst:e}"))?;
            }
        }
        peaks.push(run.series.peaks());
    }
    let a: Vec<f64> = peaks.iter().map(|p| p.0).collect();
    let b: Vec<f64> = peaks.iter().map(|p| p.1).collect();
    let non_increasing = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0]);
    check(non_increasing(&a) && non_increasing(&b), format!("peaks not non-increasing: a {a:.4?}, b {b:.4?}"))?;
    Ok(format!("peak <X-X+>_a {a:.4?}, _b {b:.4?}"))
}

fn criterion_5() -> Outcome {
    let p = ModelParams::default();
    let gen = LindbladGenerator::from_model(&p, SpaceDims::default()).map_err(err)?;
    let basis = gen.basis();
    let horizon = dynamics::default_horizon(&p).ok_or("no decay")?;
    let traj = dynamics::evolve(&gen, &tilde0(basis), &grid(horizon, GRID_STEP)).map_err(err)?;
    trajectory_invariants(&traj)?;

    // Emission window: while |0̃⟩ still holds at least 1/e of its population.
    let pop = traj.population(basis.index_tilde0());
    let t_end = traj.times()[pop.iter().position(|&x| x < (-1.0f64).exp()).unwrap_or(pop.len() - 1)];
    let mut failures = Vec::new();
    let mut report = Vec::new();
    for (name, modes) in CORRELATION_SPECS {
        let res = observables::correlation_series(&traj, basis, modes, Ordering::Normal).map_err(err)?;
        let values: Vec<f64> =
            res.times.iter().zip(&res.g_n).filter(|(t, _)| **t <= t_end).filter_map(|(_, g)| *g).collect();
        if values.is_empty() {
            failures.push(format!("{name}: undefined throughout the window"));
            continue;
        }
        let (lo, hi) = (values.iter().copied().fold(f64::INFINITY, f64::min), max_of(&values));
        let ok = match name {
            n if n.starts_with("g2") => lo > G2_MIN,
            n if n.starts_with("g3_s") => lo > G3_ATOM_MIN,
            _ => hi < G3_BOSON_MAX,
        };
        report.push(format!("{name} [{lo:.3e}, {hi:.3e}]"));
        if !ok {
            failures.push(format!("{name} range [{lo:.3}, {hi:.3}]"));
        }
    }
    let summary = format!("window gamma*t <= {:.2}: {}", GAMMA_REF * t_end, report.join(", "));
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    ModelParams {
        g1: rng.gen_range(0.0..1.0),
        g2: rng.gen_range(0.0..1.0),
        omega_p: rng.gen_range(0.0..0.8),
        gamma_a: rng.gen_range(0.005..0.04),
        gamma_b: rng.gen_range(0.005..0.04),
        gamma_eg: rng.gen_range(0.005..0.04),
        gamma_gl: rng.gen_range(0.005..0.04),
        ..ModelParams::default()
    }
}

fn random_pure_state(rng: &mut ChaCha8Rng, dims: SpaceDims) -> DensityMatrix {
    let amps: Vec<C64> = (0..dims.dim()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    hilbert::StateVector::from_amplitudes(dims, amps).expect("length matches").projector()
}

fn criterion_6() -> Outcome {
    let dims = SpaceDims::new(3, 3).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for draw in 0..ORACLE_DRAWS {
        let p = if draw == 0 { ModelParams::default() } else { random_params(&mut rng) };
        let gen = LindbladGenerator::from_model(&p, dims).map_err(err)?;
        let rho0 = random_pure_state(&mut rng, dims);
        let t_max = 2.0 / p.min_positive_rate().ok_or("no decay")?;
        let times = [0.0, 0.25 * t_max, 0.5 * t_max, t_max];
        let traj = dynamics::evolve(&gen, &rho0, &times).map_err(err)?;
        trajectory_invariants(&traj)?;
        for (i, &t) in times.iter().enumerate() {
            let reference = dynamics::superop_oracle(&gen, &rho0, t).map_err(err)?;
            let diff = linalg::max_abs(&(traj.state(i).matrix() - reference.matrix()));
            worst = worst.max(diff);
            check(diff < ORACLE_TOL, format!("draw {draw}: deviation {diff:e} at t={t:.1}"))?;
        }
    }
    Ok(format!("{ORACLE_DRAWS} draws, worst max-norm deviation {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let dims = SpaceDims::default();
    let parity = hilbert::parity_operator(dims);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..PARITY_DRAWS {
        let p = ModelParams { omega_b: rng.gen_range(0.5..1.5), ..random_params(&mut rng) };
        let h = model::build_hamiltonian(&p, dims);
        let ratio = h.commutator(&parity).max_abs() / h.max_abs();
        worst = worst.max(ratio);
        check(ratio < COMMUTATOR_TOL, format!("[H, Pi] relative norm {ratio:e}"))?;
    }

    let p = ModelParams::default();
    let gen = LindbladGenerator::from_model(&p, dims).map_err(err)?;
    let basis = gen.basis();
    let labels = basis.parity();
    for c in [ChannelId::A, ChannelId::B, ChannelId::Eg] {
        let m = basis.to_frame(&c.system_operator(dims));
        for j in 0..basis.dim() {
            for k in 0..basis.dim() {
                if labels[j] == labels[k] {
                    check(m[(j, k)].norm() < SELECTION_TOL, format!("{c}: same-parity element <{j}|.|{k}> = {:e}", m[(j, k)].norm()))?;
                }
            }
        }
    }
    for c in [ChannelId::A, ChannelId::B, ChannelId::Eg] {
        let xp = dressed::dressed_positive(basis, &c.system_operator(dims));
        for (name, j) in [("ground", 0), ("tilde0", basis.index_tilde0())] {
            let out = xp.apply(&basis.state(j)).map_err(err)?;
            check(out.norm() < ANNIHILATION_TOL, format!("X+_{c}|{name}> has norm {:e}", out.norm()))?;
        }
    }
    for ch in gen.channels() {
        check(labels[ch.j] != labels[ch.k] || ch.channel_id == ChannelId::Gl, format!("channel {ch:?} connects equal parities"))?;
    }
    let traj = dynamics::evolve(&gen, &tilde0(basis), &grid(400.0, 2.0)).map_err(err)?;
    trajectory_invariants(&traj)?;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mixed = random_pure_state(&mut rng, dims);
    let traj = dynamics::evolve(&gen, &mixed, &grid(100.0, 5.0)).map_err(err)?;
    trajectory_invariants(&traj)?;
    Ok(format!("worst |[H,Pi]|/|H| = {worst:.1e}; selection rules, X+ annihilation and trajectory invariants hold"))
}

fn criterion_8() -> Outcome {
    let p = ModelParams::default();
    let dims = SpaceDims::default();
    let gen = LindbladGenerator::from_model(&p, dims).map_err(err)?;
    let basis = gen.basis().clone();
    let prep = dynamics::prepare_tilde0(&gen, &DriveParams::default()).map_err(err)?;
    let horizon = dynamics::default_horizon(&p).ok_or("no decay")?;
    let tc = prep.pulse.t_center;

    // Prepared curve on absolute time t ≥ t_end; reference curve from |0̃⟩ started at t_c.
    let after: Vec<f64> = grid(horizon, GRID_STEP).into_iter().map(|s| prep.t_end + s).collect();
    let traj = dynamics::evolve(&gen, &prep.state, &after).map_err(err)?;
    trajectory_invariants(&traj)?;
    let prepared = observables::flux_series(&traj, &basis, &p, GAMMA_REF);
    let shifted: Vec<f64> = after.iter().map(|t| t - tc).collect();
    let rtraj = dynamics::evolve(&gen, &tilde0(&basis), &[&[0.0][..], &shifted[..]].concat()).map_err(err)?;
    let reference = observables::flux_series(&rtraj, &basis, &p, GAMMA_REF);

    let mut report = vec![format!("post-pulse <0~|rho|0~> = {:.3}", prep.fidelity)];
    for (name, a, b) in [("a", &prepared.flux_a, &reference.flux_a), ("b", &prepared.flux_b, &reference.flux_b)] {
        let peak = max_of(&b[1..]);
        let dev = a.iter().zip(&b[1..]).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / peak;
        report.push(format!("flux_{name} max deviation {:.2}% of peak", 100.0 * dev));
        check(dev < PREPARED_TOL, report.join("; "))?;
    }
    Ok(report.join("; "))
}

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 spectral lines", criterion_1),
        ("2 flux maximum", criterion_2),
        ("3 monotonicity", criterion_3),
        ("4 loss dependence", criterion_4),
        ("5 pair statistics", criterion_5),
        ("6 oracle equivalence", criterion_6),
        ("7 structural invariants", criterion_7),
        ("8 pi-pulse preparation", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {name} ({secs:.1}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
