use super::tracker::Tracker;

/// Quasi-Newton descent with central-difference gradients and a
/// backtracking Armijo line search. `step` sets the length of the first trial
/// step and `h` the difference increment. Returns whether it converged.
pub fn minimize(t: &mut Tracker, x0: &[f64], step: f64, h: f64, ftol: f64, xtol: f64) -> bool {
    let n = x0.len();
    let mut x = x0.to_vec();
    let Some(mut fx) = t.eval(&x) else {
        return false;
    };
    let Some(mut g) = gradient(t, &x, h) else {
        return false;
    };
    let mut hinv = identity(n, 1.0);
    let mut first = true;
    loop {
        let gnorm = norm(&g);
        if gnorm == 0.0 {
            return true;
        }
        if first {
            hinv = identity(n, step / gnorm);
            first = false;
        }
        let mut dir: Vec<f64> = hinv.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            hinv = identity(n, step / gnorm);
            dir = g.iter().map(|v| -v * step / gnorm).collect();
            slope = dot(&g, &dir);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + alpha * d).collect();
            let Some(ft) = t.eval(&trial) else {
                return false;
            };
            if ft <= fx + 1e-4 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew)) = accepted else {
            return true;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let Some(gn) = gradient(t, &xn, h) else {
            return false;
        };
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let small_f = (fx - fnew).abs() <= ftol * (1.0 + fx.abs());
        let small_x = s.iter().fold(0.0f64, |m, v| m.max(v.abs())) <= xtol;
        x = xn;
        fx = fnew;
        g = gn;
        if small_f && small_x {
            return true;
        }
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            update(&mut hinv, &s, &y, sy);
        } else {
            first = true;
        }
    }
}

fn gradient(t: &mut Tracker, x: &[f64], h: f64) -> Option<Vec<f64>> {
    let n = x.len();
    let probes: Vec<Vec<f64>> = (0..2 * n)
        .map(|k| {
            let mut p = x.to_vec();
            p[k / 2] += if k % 2 == 0 { h } else { -h };
            p
        })
        .collect();
    let vals = t.eval_batch(&probes);
    if vals.len() < probes.len() {
        return None;
    }
    Some(
        (0..n)
            .map(|i| (vals[2 * i] - vals[2 * i + 1]) / (2.0 * h))
            .collect(),
    )
}

fn identity(n: usize, s: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { s } else { 0.0 }).collect())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Inverse-Hessian BFGS update `H ← (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ`.
fn update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = h.iter().map(|row| dot(row, y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}
