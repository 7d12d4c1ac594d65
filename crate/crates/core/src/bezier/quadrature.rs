//! Gauss–Legendre quadrature on the unit interval.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

/// Order of the base rule used for arc length and bending energy.
pub const BASE_ORDER: usize = 24;

/// Successive composite rules are accepted once they agree to this relative tolerance.
pub const REL_TOL: f64 = 1e-8;

/// Upper bound on interval splits per integral.
const MAX_SPLITS: usize = 256;

/// Nodes and weights of the n-point rule mapped to [0, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn base_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(BASE_ORDER))
}

/// Composite rule with `panels` equal subintervals of [a, b].
pub fn composite<F, E>(f: &mut F, a: f64, b: f64, panels: usize) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (nodes, weights) = base_rule();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            s += w * f(lo + h * x)?;
        }
        total += s * h;
    }
    Ok(total)
}

struct Piece {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Piece {
    fn new<F, E>(f: &mut F, a: f64, b: f64, whole: f64) -> Result<Piece, E>
    where
        F: FnMut(f64) -> Result<f64, E>,
    {
        let m = 0.5 * (a + b);
        let left = composite(f, a, m, 1)?;
        let right = composite(f, m, b, 1)?;
        Ok(Piece {
            a,
            b,
            left,
            right,
            err: (left + right - whole).abs(),
        })
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err.total_cmp(&o.err).is_eq()
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Integrate over [a, b]. Each piece carries the gap between its one-panel
/// and two-panel estimates; the piece with the largest gap is bisected until
/// the gaps sum to `REL_TOL` of the integral, reach rounding level, or the
/// split budget runs out.
pub fn integrate<F, E>(mut f: F, a: f64, b: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let whole = composite(&mut f, a, b, 1)?;
    let mut heap = BinaryHeap::new();
    heap.push(Piece::new(&mut f, a, b, whole)?);
    for _ in 0..MAX_SPLITS {
        let (total, err, size) = heap.iter().fold((0.0, 0.0, 0.0), |(t, e, s), p: &Piece| {
            (t + p.value(), e + p.err, s + p.left.abs() + p.right.abs())
        });
        if err <= REL_TOL * total.abs() || err <= 64.0 * f64::EPSILON * size {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        heap.push(Piece::new(&mut f, worst.a, m, worst.left)?);
        heap.push(Piece::new(&mut f, m, worst.b, worst.right)?);
    }
    let mut pieces: Vec<Piece> = heap.into_vec();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(pieces.iter().map(Piece::value).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 2, 5, 24, 48] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let (x, w) = gauss_legendre(BASE_ORDER);
        for k in [0, 1, 7, 30, 47] {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = 1.0 / (k as f64 + 1.0);
            assert!((q - exact).abs() < 1e-14, "k={k}: {q} vs {exact}");
        }
    }

    #[test]
    fn nodes_are_sorted_and_interior() {
        let (x, _) = gauss_legendre(BASE_ORDER);
        assert!(x.windows(2).all(|w| w[0] < w[1]));
        assert!(x[0] > 0.0 && x[BASE_ORDER - 1] < 1.0);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // ∫_0^1 1/(1e-4 + (x-0.3)^2) dx
        let e: f64 = 1e-4;
        let f = |x: f64| -> Result<f64, ()> { Ok(1.0 / (e + (x - 0.3).powi(2))) };
        let q = integrate(f, 0.0, 1.0).unwrap();
        let exact = ((0.7 / e.sqrt()).atan() + (0.3 / e.sqrt()).atan()) / e.sqrt();
        assert!((q - exact).abs() / exact < 1e-6, "{q} vs {exact}");
    }
}
