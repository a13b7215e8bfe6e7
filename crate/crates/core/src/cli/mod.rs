//! Command-line front end.

pub mod config;
pub mod report;

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bogoliubov::ZMatrix;
use crate::error::{Error, Result};
use crate::flow::{
    circular_distance, instantaneous_trajectory, propagator, squeeze_of_vacuum, wrap_phase,
    FrequencyProfile,
};
use crate::geometry::{
    default_step, fd_check, gaussian_curvature_disk_fd, hermitian_form,
    hermitian_form_via_u, TangentPair,
};
use crate::linalg::{operator_norm, CMat};
use crate::matio::read_matrix;
use crate::squeezed::{fidelity, occupation_probs};
use crate::weber::asymptotic_squeeze;

pub use config::{CommonArgs, Format, ScenarioConfig};
pub use report::{fmt_e15, AbsErrors, RunReport};

/// Residual bounds applied by `geometry-check`.
pub const FD_RESIDUAL_BOUND: f64 = 1e-6;
pub const ROUTE_DIFF_BOUND: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "squeezeflow", version, about = "Squeezing of a driven oscillator through a spectral collapse")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate the vacuum over [t_start, t_end] and report squeezing, fidelity and occupations
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Instantaneous squeezing z(t) and w(t) = e^{iαt²} z(t) on a time grid
    Trajectory {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Levels E_n(t) = (n + 1/2) ω_t on a time grid
    SpectrumFan {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of levels [default: 5]
        #[arg(long)]
        n_levels: Option<usize>,
    },
    /// Measured 1 - p0 against ½e^{-πδ²} and the Landau-Zener law over a δ² grid
    LzCompare {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated δ² values [default: 0,0.5,1,2,3]
        #[arg(long, value_delimiter = ',')]
        delta_sq: Option<Vec<f64>>,
    },
    /// Finite-difference and two-route checks of the Hermitian structure
    GeometryCheck {
        #[command(flatten)]
        common: CommonArgs,
        /// Base point Z read from a matrix file instead of random points
        #[arg(long)]
        z_file: Option<PathBuf>,
        /// Seed of the random base points [default: 0]
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random base points [default: 50]
        #[arg(long)]
        points: Option<usize>,
    },
}

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Parse { .. } => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} worker threads: {e}")))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))?;
            stdout.flush().map_err(|e| Error::Io(e.to_string()))
        }
    }
}

fn profile_of(cfg: &ScenarioConfig) -> Result<FrequencyProfile> {
    FrequencyProfile::new(cfg.alpha, cfg.g).map_err(|e| Error::Config(e.to_string()))
}

/// Measured squeezing of the vacuum prepared at `t_start`, with closed forms.
pub fn simulate(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let profile = profile_of(cfg)?;
    let (w1, w2) = (profile.omega(cfg.t_start), profile.omega(cfg.t_end));
    for (t, w) in [(cfg.t_start, w1), (cfg.t_end, w2)] {
        if !(w > 0.0) {
            return Err(Error::Config(format!(
                "the frequency vanishes at the endpoint t = {t}; the ground state is undefined there"
            )));
        }
    }
    let phi = propagator(&profile, cfg.t_start, cfg.t_end, w1, w2, cfg.tol)?;
    let sq = squeeze_of_vacuum(&phi)?;

    let delta_sq = profile.delta_sq();
    let (cf_tanh, offset) = asymptotic_squeeze(delta_sq);
    let t_scaled = cfg.alpha.sqrt() * cfg.t_end.abs();
    let log_term = if delta_sq == 0.0 { 0.0 } else { delta_sq * t_scaled.ln() };
    let cf_theta = wrap_phase(-t_scaled * t_scaled - log_term + offset);
    let cf_fid = (1.0 + (-PI * delta_sq).exp()).powf(-0.5);

    let spectrum = occupation_probs(&sq, cfg.n_max);
    let fid = fidelity(&sq);
    Ok(RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        tanh_r: sq.tanh_r(),
        theta: sq.theta,
        fidelity: fid,
        closed_form_tanh_r: cf_tanh,
        closed_form_theta: cf_theta,
        closed_form_fidelity: cf_fid,
        abs_errors: AbsErrors {
            tanh_r: (sq.tanh_r() - cf_tanh).abs(),
            theta: circular_distance(sq.theta, cf_theta),
            fidelity: (fid - cf_fid).abs(),
        },
        probabilities: spectrum.probs,
        tail_bound: spectrum.tail_bound,
    })
}

pub const TRAJECTORY_HEADER: [&str; 6] = ["t", "re_z", "im_z", "re_w", "im_w", "tanh_r"];

pub fn trajectory_rows(cfg: &ScenarioConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let profile = profile_of(cfg)?;
    let points = instantaneous_trajectory(&profile, &cfg.time_grid(), cfg.tol)?;
    Ok(points
        .iter()
        .map(|p| vec![p.t, p.z.re, p.z.im, p.w.re, p.w.im, p.tanh_r()])
        .collect())
}

pub const SPECTRUM_HEADER: [&str; 3] = ["t", "n", "energy"];

pub fn spectrum_rows(cfg: &ScenarioConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let profile = profile_of(cfg)?;
    let mut rows = Vec::with_capacity(cfg.grid * cfg.n_levels);
    for t in cfg.time_grid() {
        let w = profile.omega(t);
        for n in 0..cfg.n_levels {
            rows.push(vec![t, n as f64, (n as f64 + 0.5) * w]);
        }
    }
    Ok(rows)
}

pub const LZ_HEADER: [&str; 5] =
    ["delta_sq", "one_minus_p0", "asymptote", "landau_zener", "ratio_to_asymptote"];

/// One row per δ² (ascending), computed in parallel on `jobs` threads.
pub fn lz_rows(cfg: &ScenarioConfig, jobs: usize) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let mut grid = cfg.delta_sq.clone();
    grid.sort_by(f64::total_cmp);
    let results: Vec<Result<Vec<f64>>> = pool(jobs)?.install(|| {
        grid.par_iter()
            .map(|&d| {
                let run = ScenarioConfig { g: (d * cfg.alpha).sqrt(), ..cfg.clone() };
                let report = simulate(&run)?;
                let measured = 1.0 - report.fidelity;
                let asymptote = 0.5 * (-PI * d).exp();
                let lz = (-PI * d / 2.0).exp();
                Ok(vec![d, measured, asymptote, lz, measured / asymptote])
            })
            .collect()
    });
    results.into_iter().collect()
}

pub const GEOMETRY_HEADER: [&str; 6] = ["point", "n", "norm_z", "fd_residual", "route_diff", "curvature"];

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let a = DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&a + a.transpose()) * C64::new(0.5, 0.0)
}

fn geometry_row(index: usize, tp: &TangentPair) -> Result<Vec<f64>> {
    let n = tp.z.dim();
    let residual = fd_check(tp, default_step(tp))?;
    let h = hermitian_form(tp)?;
    let route = (h - hermitian_form_via_u(tp, None)?).norm() / h.norm().max(1.0);
    let curvature = if n == 1 {
        let z = tp.z.z()[(0, 0)];
        let step = 1e-3 * (1.0 - z.norm());
        gaussian_curvature_disk_fd(z, step)?
    } else {
        f64::NAN
    };
    Ok(vec![index as f64, n as f64, operator_norm(tp.z.z()), residual, route, curvature])
}

/// Tangent pairs either over the symmetric basis at a given base point, or
/// at seeded random base points with `N ≤ 3`.
pub fn geometry_rows(cfg: &ScenarioConfig, z_file: Option<&PathBuf>, jobs: usize) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let pairs: Vec<TangentPair> = match z_file {
        Some(path) => {
            let z = ZMatrix::new(read_matrix(path)?)?;
            let conditioning = z.conditioning();
            if conditioning < 1e-10 {
                eprintln!("warning: Z is within {conditioning:e} of the disk boundary; results are ill-conditioned");
            }
            let n = z.dim();
            let mut basis = Vec::new();
            for i in 0..n {
                for j in i..n {
                    let mut e = CMat::zeros(n, n);
                    e[(i, j)] = C64::new(1.0, 0.0);
                    e[(j, i)] = C64::new(1.0, 0.0);
                    basis.push(e);
                }
            }
            let mut out = Vec::new();
            for a in &basis {
                for b in &basis {
                    out.push(TangentPair::new(z.clone(), a.clone(), b.clone())?);
                }
            }
            out
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.points)
                .map(|_| {
                    let n = rng.gen_range(1..=3);
                    let s = random_symmetric(n, &mut rng);
                    let norm = operator_norm(&s);
                    let target = rng.gen_range(0.0..0.8);
                    let z = ZMatrix::new(s * C64::new(target / norm, 0.0))?;
                    let t1 = random_symmetric(n, &mut rng);
                    let t2 = random_symmetric(n, &mut rng);
                    TangentPair::new(z, t1, t2)
                })
                .collect::<Result<_>>()?
        }
    };
    let results: Vec<Result<Vec<f64>>> = pool(jobs)?.install(|| {
        pairs.par_iter().enumerate().map(|(i, tp)| geometry_row(i, tp)).collect()
    });
    results.into_iter().collect()
}

fn render(header: &[&str], rows: &[Vec<f64>], cfg: &ScenarioConfig) -> String {
    match cfg.format {
        Format::Csv => report::csv_table(header, rows),
        Format::Json => report::json_table(header, rows, cfg),
    }
}

/// Runs one subcommand; the caller maps errors to exit codes.
pub fn run(cli: Cli) -> Result<()> {
    let started = Instant::now();
    let name;
    match cli.command {
        Command::Simulate { common } => {
            name = "simulate";
            let cfg = ScenarioConfig::resolve(&common)?;
            let report = simulate(&cfg)?;
            let text = match cfg.format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            emit(&common.out, &text)?;
        }
        Command::Trajectory { common } => {
            name = "trajectory";
            let cfg = ScenarioConfig::resolve(&common)?;
            let rows = trajectory_rows(&cfg)?;
            emit(&common.out, &render(&TRAJECTORY_HEADER, &rows, &cfg))?;
        }
        Command::SpectrumFan { common, n_levels } => {
            name = "spectrum-fan";
            let mut cfg = ScenarioConfig::resolve(&common)?;
            cfg.n_levels = n_levels.unwrap_or(cfg.n_levels);
            let rows = spectrum_rows(&cfg)?;
            emit(&common.out, &render(&SPECTRUM_HEADER, &rows, &cfg))?;
        }
        Command::LzCompare { common, delta_sq } => {
            name = "lz-compare";
            let mut cfg = ScenarioConfig::resolve(&common)?;
            if let Some(d) = delta_sq {
                cfg.delta_sq = d;
            }
            let rows = lz_rows(&cfg, common.jobs)?;
            emit(&common.out, &render(&LZ_HEADER, &rows, &cfg))?;
        }
        Command::GeometryCheck { common, z_file, seed, points } => {
            name = "geometry-check";
            let mut cfg = ScenarioConfig::resolve(&common)?;
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.points = points.unwrap_or(cfg.points);
            let rows = geometry_rows(&cfg, z_file.as_ref(), common.jobs)?;
            emit(&common.out, &render(&GEOMETRY_HEADER, &rows, &cfg))?;
            let worst_fd = rows.iter().map(|r| r[3]).fold(0.0, f64::max);
            let worst_route = rows.iter().map(|r| r[4]).fold(0.0, f64::max);
            eprintln!("geometry-check: max fd residual {worst_fd:e}, max two-route difference {worst_route:e}");
            if !(worst_fd <= FD_RESIDUAL_BOUND && worst_route <= ROUTE_DIFF_BOUND) {
                return Err(Error::Evaluation(format!(
                    "residuals exceed bounds ({FD_RESIDUAL_BOUND:e}, {ROUTE_DIFF_BOUND:e})"
                )));
            }
        }
    }
    eprintln!("{name}: wall time {:.3} s", started.elapsed().as_secs_f64());
    Ok(())
}
