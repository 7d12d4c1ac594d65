use super::tracker::Tracker;

/// Reflection, expansion, contraction and shrink coefficients scaled with
/// the dimension, which keeps the simplex from collapsing in high dimensions.
fn coefficients(n: usize) -> (f64, f64, f64, f64) {
    if n < 2 {
        return (1.0, 2.0, 0.5, 0.5);
    }
    let n = n as f64;
    (1.0, 1.0 + 2.0 / n, 0.75 - 1.0 / (2.0 * n), 1.0 - 1.0 / n)
}

/// Nelder–Mead from `x0` with initial edge lengths `step`, restarted around
/// the best point after each convergence. Returns whether the last run converged.
pub fn minimize(
    t: &mut Tracker,
    x0: &[f64],
    step: &[f64],
    ftol: f64,
    xtol: f64,
    restarts: usize,
) -> bool {
    let mut start = x0.to_vec();
    let mut scale = 1.0;
    let mut converged = false;
    for attempt in 0..=restarts {
        let before = t.best_f;
        converged = run(t, &start, step, scale, ftol, xtol);
        if t.exhausted() || !converged {
            break;
        }
        if attempt > 0 && !(t.best_f < before - ftol * (1.0 + before.abs())) {
            break;
        }
        start = t.best_x.clone();
        scale *= 0.5;
    }
    converged
}

fn run(t: &mut Tracker, start: &[f64], step: &[f64], scale: f64, ftol: f64, xtol: f64) -> bool {
    let n = start.len();
    let (alpha, beta, gamma, delta) = coefficients(n);
    let mut pts = vec![start.to_vec()];
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += step[i] * scale;
        pts.push(p);
    }
    let vals = t.eval_batch(&pts);
    if vals.len() < pts.len() {
        return false;
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = pts.into_iter().zip(vals).collect();
    let mut centroid = vec![0.0; n];
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_best = simplex[0].1;
        let f_worst = simplex[n].1;
        let f_spread = f_worst - f_best;
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= ftol * (1.0 + f_best.abs()) && x_spread <= xtol {
            return true;
        }
        if t.exhausted() {
            return false;
        }
        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);
        let along = |coef: f64, towards: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(towards)
                .map(|(c, w)| c + coef * (w - c))
                .collect()
        };
        let worst = simplex[n].0.clone();
        let xr = along(-alpha, &worst);
        let Some(fr) = t.eval(&xr) else { return false };
        if fr < f_best {
            let xe = along(-alpha * beta, &worst);
            let Some(fe) = t.eval(&xe) else { return false };
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc, accept) = if fr < f_worst {
            let xc = along(-alpha * gamma, &worst);
            let Some(fc) = t.eval(&xc) else { return false };
            (xc, fc, fc <= fr)
        } else {
            let xc = along(gamma, &worst);
            let Some(fc) = t.eval(&xc) else { return false };
            (xc, fc, fc < f_worst)
        };
        if accept {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        let shrunk: Vec<Vec<f64>> = simplex[1..]
            .iter()
            .map(|(x, _)| {
                best.iter()
                    .zip(x)
                    .map(|(b, v)| b + delta * (v - b))
                    .collect()
            })
            .collect();
        let vals = t.eval_batch(&shrunk);
        let complete = vals.len() == shrunk.len();
        for (k, (x, v)) in shrunk.into_iter().zip(vals).enumerate() {
            simplex[k + 1] = (x, v);
        }
        if !complete {
            return false;
        }
    }
}
