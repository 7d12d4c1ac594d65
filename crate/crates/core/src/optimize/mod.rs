//! Minimization of badness over the full knot vector or a symmetric reduced space.
//!
//! Only topology-preserving iterates are accepted as results, and the result
//! is checked again after the search.

mod bfgs;
mod gradient;
mod nelder_mead;
mod tracker;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::badness::{
    evaluate, fingerprint, normalize, BadnessWeights, Breakdown, TopologyFingerprint, SENTINEL,
};
use crate::error::{Error, Result};
use crate::knot::{KnotVec, MinObj};
use crate::symmetry::{SymmetryGroup, SymmetrySpec};

pub use gradient::finite_diff_gradient;
pub use tracker::{CheckpointFn, Objective, Tracker};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[default]
    NelderMead,
    BfgsFd,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nelder-mead" | "nm" => Ok(Algorithm::NelderMead),
            "bfgs-fd" | "bfgs" => Ok(Algorithm::BfgsFd),
            _ => Err(Error::Config(format!(
                "unknown algorithm '{s}' (expected nelder-mead or bfgs-fd)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::NelderMead => "nelder-mead",
            Algorithm::BfgsFd => "bfgs-fd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeOptions {
    pub algorithm: Algorithm,
    pub max_evals: usize,
    /// Relative change in badness below which the search has converged.
    pub ftol: f64,
    /// Coordinate change below which the search has converged, as a fraction of arc length.
    pub xtol: f64,
    /// Evaluations between progress reports; 0 disables them.
    pub checkpoint_every: usize,
    pub seed: u64,
    /// Extra simplex restarts around the best point after convergence.
    pub restart_count: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            algorithm: Algorithm::NelderMead,
            max_evals: 200_000,
            ftol: 1e-10,
            xtol: 1e-8,
            checkpoint_every: 10_000,
            seed: 0,
            restart_count: 2,
        }
    }
}

impl OptimizeOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_evals == 0 {
            return Err(Error::Config("max_evals must be positive".into()));
        }
        if !(self.ftol > 0.0) || !(self.xtol > 0.0) {
            return Err(Error::Config("ftol and xtol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Number of free parameters searched.
    pub dimension: usize,
    pub initial_badness: f64,
    pub final_badness: f64,
    pub evals: usize,
    pub converged: bool,
    pub initial_breakdown: Breakdown,
    pub final_breakdown: Breakdown,
    /// Best badness so far, sampled at progress reports.
    pub trajectory: Vec<(usize, f64)>,
    /// Set when the best iterate failed the final topology check and the start was returned.
    pub topology_rejected: bool,
    /// Largest symmetry error over every evaluated iterate, when a symmetry was imposed.
    pub max_symmetry_error: Option<f64>,
}

/// Sees every evaluated knot with its badness; may run on several threads.
pub type Observer<'a> = &'a (dyn Fn(&MinObj, f64) + Sync);

/// Receives the evaluation count, the best knot and its badness.
pub type Progress<'a> = &'a mut dyn FnMut(usize, &MinObj, f64);

/// Observer and progress callbacks.
#[derive(Default)]
pub struct Hooks<'a> {
    /// Sees every evaluated knot with its badness; may run on several threads.
    pub observer: Option<Observer<'a>>,
    /// Called every `checkpoint_every` evaluations with the count, the best knot and its badness.
    pub progress: Option<Progress<'a>>,
}

/// Runs the configured algorithm on an arbitrary objective. Returns the best
/// point, its value, the evaluation count and whether the search converged.
pub fn minimize_fn(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    x0: &[f64],
    step: &[f64],
    opts: &OptimizeOptions,
) -> Result<(Vec<f64>, f64, usize, bool)> {
    opts.validate()?;
    let obj = |x: &[f64]| {
        let v = f(x);
        (v, v.is_finite())
    };
    let mut t = Tracker::new(&obj, opts.max_evals, 0, None);
    let converged = run(&mut t, x0, step, opts, opts.xtol);
    t.finish();
    Ok((t.best_x, t.best_f, t.evals, converged))
}

fn run(t: &mut Tracker, x0: &[f64], step: &[f64], opts: &OptimizeOptions, xtol: f64) -> bool {
    match opts.algorithm {
        Algorithm::NelderMead => {
            nelder_mead::minimize(t, x0, step, opts.ftol, xtol, opts.restart_count)
        }
        Algorithm::BfgsFd => {
            let scale = step.iter().fold(0.0f64, |m, s| m.max(s.abs()));
            bfgs::minimize(t, x0, scale, scale * 5e-5, opts.ftol, xtol)
        }
    }
}

/// Free parameters of a knot and the map back to knots.
enum Space {
    Full,
    Reduced(SymmetryGroup),
}

impl Space {
    fn decode(&self, x: &[f64]) -> Result<MinObj> {
        match self {
            Space::Full => MinObj::from_slice(x),
            Space::Reduced(g) => g.expand_slice(x),
        }
    }
}

fn score(m: &MinObj, w: &BadnessWeights, reference: &TopologyFingerprint) -> Option<Breakdown> {
    if !m.is_finite() {
        return None;
    }
    evaluate(&m.to_controlpoints(), w, reference).ok()
}

/// Crossing structure of the knot as seen by the objective.
pub fn reference_fingerprint(m: &MinObj) -> Result<TopologyFingerprint> {
    fingerprint(&normalize(&m.to_controlpoints())?.0)
}

/// Minimizes badness from `start`. With a symmetry spec the search runs over
/// the spec's free parameters; the start is projected onto the symmetric
/// knots first, about the origin, so callers center it beforehand.
pub fn minimize(
    start: &MinObj,
    w: &BadnessWeights,
    sym: Option<&SymmetrySpec>,
    opts: &OptimizeOptions,
    hooks: Hooks,
) -> Result<(MinObj, OptimizeReport)> {
    opts.validate()?;
    w.validate()?;
    if !start.is_finite() {
        return Err(Error::NonFiniteStart);
    }
    let space = match sym {
        Some(s) if !s.is_trivial() => Space::Reduced(SymmetryGroup::new(s, start.len())?),
        _ => Space::Full,
    };
    let x0 = match &space {
        Space::Full => start.to_knotvec().into_values(),
        Space::Reduced(g) => g.reduce(start)?.values,
    };
    let start = space.decode(&x0)?;
    let reference = reference_fingerprint(&start).map_err(|_| Error::NonFiniteStart)?;
    let initial = score(&start, w, &reference).ok_or(Error::NonFiniteStart)?;

    let length = start.to_controlpoints().arc_length();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let step: Vec<f64> = (0..x0.len())
        .map(|_| {
            let mag = 0.02 * length * rng.gen_range(0.8..1.2);
            if rng.gen::<bool>() {
                mag
            } else {
                -mag
            }
        })
        .collect();

    let sym_err = AtomicU64::new(0);
    let observer = hooks.observer;
    let obj = |x: &[f64]| -> (f64, bool) {
        let Ok(m) = space.decode(x) else {
            return (SENTINEL, false);
        };
        if let Space::Reduced(g) = &space {
            if let Ok(e) = g.symmetry_error(&m) {
                sym_err.fetch_max(e.to_bits(), Ordering::Relaxed);
            }
        }
        let (v, ok) = match score(&m, w, &reference) {
            Some(b) => (b.total, b.topology == 0.0),
            None => (SENTINEL, false),
        };
        if let Some(o) = observer {
            o(&m, v);
        }
        (v, ok)
    };
    let mut progress = hooks.progress;
    let mut cb = |evals: usize, x: &[f64], f: f64| {
        if let (Some(p), Ok(m)) = (progress.as_mut(), space.decode(x)) {
            p(evals, &m, f);
        }
    };
    let mut t = Tracker::new(&obj, opts.max_evals, opts.checkpoint_every, Some(&mut cb));
    let converged = run(&mut t, &x0, &step, opts, opts.xtol * length);
    t.finish();
    let evals = t.evals;
    let trajectory = std::mem::take(&mut t.trajectory);
    let best_x = std::mem::take(&mut t.best_x);
    drop(t);

    let mut result = space.decode(&best_x)?;
    let mut final_b = score(&result, w, &reference).ok_or(Error::NonFiniteStart)?;
    let mut topology_rejected = false;
    let same = reference_fingerprint(&result)
        .map(|fp| fp.discrepancies(&reference) == 0)
        .unwrap_or(false);
    if !same || final_b.total > initial.total {
        log::warn!("best iterate failed the final check; returning the start");
        topology_rejected = true;
        result = start.clone();
        final_b = initial;
    }
    let max_symmetry_error = match space {
        Space::Reduced(_) => Some(f64::from_bits(sym_err.load(Ordering::Relaxed))),
        Space::Full => None,
    };
    let report = OptimizeReport {
        algorithm: opts.algorithm,
        seed: opts.seed,
        dimension: x0.len(),
        initial_badness: initial.total,
        final_badness: final_b.total,
        evals,
        converged,
        initial_breakdown: initial,
        final_breakdown: final_b,
        trajectory,
        topology_rejected,
        max_symmetry_error,
    };
    Ok((result, report))
}

/// Where an optimization run left off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub evals: usize,
    pub badness: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
}

/// Path of the JSON sidecar written next to a checkpoint knot file.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes the knot as knot-vector text and its metadata as a JSON sidecar.
pub fn write_checkpoint(path: &Path, knot: &MinObj, meta: &CheckpointMeta) -> Result<()> {
    knot.to_knotvec().write(path)?;
    let json = serde_json::to_string_pretty(meta).map_err(|e| Error::Config(e.to_string()))?;
    let side = sidecar_path(path);
    std::fs::write(&side, json + "\n").map_err(|e| Error::io(side, e))
}

pub fn read_checkpoint(path: &Path) -> Result<(MinObj, CheckpointMeta)> {
    let knot = MinObj::from_knotvec(&KnotVec::read(path)?)?;
    let side = sidecar_path(path);
    let text = std::fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let meta = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", side.display())))?;
    Ok((knot, meta))
}
