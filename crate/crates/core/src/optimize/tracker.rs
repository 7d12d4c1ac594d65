use rayon::prelude::*;

/// The objective seen by the minimizers: value and whether the point is acceptable as a result.
pub type Objective<'a> = dyn Fn(&[f64]) -> (f64, bool) + Sync + 'a;

/// Progress callback: evaluations so far, best point and its value.
pub type CheckpointFn<'a> = dyn FnMut(usize, &[f64], f64) + 'a;

/// Counts evaluations, remembers the best acceptable point and reports progress.
pub struct Tracker<'a, 'b> {
    f: &'a Objective<'a>,
    pub evals: usize,
    pub max_evals: usize,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    every: usize,
    pub trajectory: Vec<(usize, f64)>,
    on_checkpoint: Option<&'b mut CheckpointFn<'a>>,
}

impl<'a, 'b> Tracker<'a, 'b> {
    pub fn new(
        f: &'a Objective<'a>,
        max_evals: usize,
        every: usize,
        on_checkpoint: Option<&'b mut CheckpointFn<'a>>,
    ) -> Self {
        Tracker {
            f,
            evals: 0,
            max_evals,
            best_x: Vec::new(),
            best_f: f64::INFINITY,
            every,
            trajectory: Vec::new(),
            on_checkpoint,
        }
    }

    pub fn remaining(&self) -> usize {
        self.max_evals.saturating_sub(self.evals)
    }

    pub fn exhausted(&self) -> bool {
        self.evals >= self.max_evals
    }

    fn record(&mut self, x: &[f64], value: f64, feasible: bool) {
        self.evals += 1;
        // the first point is kept whatever it is, so the result is never worse than the start
        if self.best_x.is_empty() || (feasible && value < self.best_f) {
            self.best_x = x.to_vec();
            self.best_f = value;
        }
        if self.evals == 1 || (self.every > 0 && self.evals.is_multiple_of(self.every)) {
            self.trajectory.push((self.evals, self.best_f));
            if let Some(cb) = self.on_checkpoint.as_mut() {
                cb(self.evals, &self.best_x, self.best_f);
            }
        }
    }

    /// Evaluates one point; `None` once the budget is spent.
    pub fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.exhausted() {
            return None;
        }
        let (v, ok) = (self.f)(x);
        self.record(x, v, ok);
        Some(v)
    }

    /// Evaluates points in parallel and records them in order. Points beyond
    /// the budget are not evaluated; the returned vector is shorter.
    pub fn eval_batch(&mut self, xs: &[Vec<f64>]) -> Vec<f64> {
        let take = xs.len().min(self.remaining());
        let f = self.f;
        let results: Vec<(f64, bool)> = xs[..take].par_iter().map(|x| f(x)).collect();
        results
            .into_iter()
            .zip(xs)
            .map(|((v, ok), x)| {
                self.record(x, v, ok);
                v
            })
            .collect()
    }

    pub fn finish(&mut self) {
        if self.trajectory.last().map(|t| t.0) != Some(self.evals) {
            self.trajectory.push((self.evals, self.best_f));
        }
    }
}
