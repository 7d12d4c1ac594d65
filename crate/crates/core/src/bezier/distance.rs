use crate::point::Point2;

use super::CubicSegment;

#[derive(Debug, Clone, Copy)]
pub struct DistanceOptions {
    /// Pieces are replaced by their chords once flat to within this distance.
    pub tol: f64,
    /// Only distances below this are of interest; larger ones are not computed exactly.
    pub cutoff: f64,
}

/// Closest approach between two segments: (distance, t_a, t_b).
///
/// Returns `None` when the segments are certainly at least `opts.cutoff`
/// apart. Branch and bound over subdivided pieces finds the basin of the
/// global minimum to chord accuracy; a bound-constrained Newton iteration then
/// refines it on the exact curves.
pub fn min_distance(
    a: &CubicSegment,
    b: &CubicSegment,
    opts: &DistanceOptions,
) -> Option<(f64, f64, f64)> {
    if a.bbox().distance(&b.bbox()) >= opts.cutoff {
        return None;
    }
    let mut best = opts.cutoff;
    let mut best_params = None;
    for (ta, pa) in [(0.0, a.p0), (1.0, a.p3)] {
        for (tb, pb) in [(0.0, b.p0), (1.0, b.p3)] {
            let d = pa.distance(pb);
            if d < best {
                best = d;
                best_params = Some((ta, tb));
            }
        }
    }
    let mut stack = vec![(*a, 0.0, 1.0, *b, 0.0, 1.0)];
    let mut budget = 100_000usize;
    while let Some((sa, a0, a1, sb, b0, b1)) = stack.pop() {
        budget -= 1;
        if budget == 0 {
            break;
        }
        if sa.bbox().distance(&sb.bbox()) >= best {
            continue;
        }
        let fa = sa.flatness() <= opts.tol;
        let fb = sb.flatness() <= opts.tol;
        if fa && fb {
            let (d, u, v) = segment_segment(sa.p0, sa.p3, sb.p0, sb.p3);
            if d < best {
                best = d;
                best_params = Some((a0 + u * (a1 - a0), b0 + v * (b1 - b0)));
            }
            continue;
        }
        let split_a = !fa && (fb || sa.bbox().diagonal() >= sb.bbox().diagonal());
        if split_a {
            let (l, r) = sa.split(0.5);
            let m = 0.5 * (a0 + a1);
            stack.push((l, a0, m, sb, b0, b1));
            stack.push((r, m, a1, sb, b0, b1));
        } else {
            let (l, r) = sb.split(0.5);
            let m = 0.5 * (b0 + b1);
            stack.push((sa, a0, a1, l, b0, m));
            stack.push((sa, a0, a1, r, m, b1));
        }
    }
    let (t0, s0) = best_params?;
    let (d, t, s) = polish(a, b, t0, s0);
    if d <= best + 2.0 * opts.tol {
        if d >= opts.cutoff {
            return None;
        }
        Some((d, t, s))
    } else {
        Some((best, t0, s0))
    }
}

/// Newton iteration on the squared distance, with the parameters kept in [0, 1].
fn polish(a: &CubicSegment, b: &CubicSegment, mut t: f64, mut s: f64) -> (f64, f64, f64) {
    for _ in 0..40 {
        let r = a.eval(t) - b.eval(s);
        let (a1, a2) = a.derivatives(t);
        let (b1, b2) = b.derivatives(s);
        let gt = r.dot(a1);
        let gs = -r.dot(b1);
        let htt = a1.dot(a1) + r.dot(a2);
        let hss = b1.dot(b1) - r.dot(b2);
        let hts = -a1.dot(b1);
        let free_t = !((t <= 0.0 && gt > 0.0) || (t >= 1.0 && gt < 0.0));
        let free_s = !((s <= 0.0 && gs > 0.0) || (s >= 1.0 && gs < 0.0));
        let (dt, ds) = match (free_t, free_s) {
            (true, true) => {
                let det = htt * hss - hts * hts;
                if det > 0.0 && htt > 0.0 {
                    ((-gt * hss + gs * hts) / det, (-gs * htt + gt * hts) / det)
                } else {
                    (descent(gt, htt), descent(gs, hss))
                }
            }
            (true, false) => (descent(gt, htt), 0.0),
            (false, true) => (0.0, descent(gs, hss)),
            (false, false) => break,
        };
        let nt = (t + dt).clamp(0.0, 1.0);
        let ns = (s + ds).clamp(0.0, 1.0);
        let moved = (nt - t).abs().max((ns - s).abs());
        t = nt;
        s = ns;
        if moved < 1e-15 {
            break;
        }
    }
    (a.eval(t).distance(b.eval(s)), t, s)
}

fn descent(g: f64, h: f64) -> f64 {
    if h > 0.0 {
        -g / h
    } else {
        0.0
    }
}

pub(crate) fn point_segment(p: Point2, a: Point2, b: Point2) -> (f64, f64) {
    let d = b - a;
    let l2 = d.norm_squared();
    let u = if l2 > 0.0 {
        ((p - a).dot(d) / l2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ((a + d * u).distance(p), u)
}

/// Distance between segments [a0,a1] and [b0,b1] with the closest parameters.
pub(crate) fn segment_segment(a0: Point2, a1: Point2, b0: Point2, b1: Point2) -> (f64, f64, f64) {
    let da = a1 - a0;
    let db = b1 - b0;
    let den = da.cross(db);
    if den != 0.0 {
        let w = b0 - a0;
        let u = w.cross(db) / den;
        let v = w.cross(da) / den;
        if (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) {
            return (0.0, u, v);
        }
    }
    let mut best = {
        let (d, v) = point_segment(a0, b0, b1);
        (d, 0.0, v)
    };
    let cands = [
        {
            let (d, v) = point_segment(a1, b0, b1);
            (d, 1.0, v)
        },
        {
            let (d, u) = point_segment(b0, a0, a1);
            (d, u, 0.0)
        },
        {
            let (d, u) = point_segment(b1, a0, a1);
            (d, u, 1.0)
        },
    ];
    for c in cands {
        if c.0 < best.0 {
            best = c;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn opts(cutoff: f64) -> DistanceOptions {
        DistanceOptions { tol: 1e-4, cutoff }
    }

    #[test]
    fn parallel_lines() {
        let a = CubicSegment::line(p(0.0, 0.0), p(1.0, 0.0));
        let b = CubicSegment::line(p(0.0, 0.3), p(1.0, 0.3));
        let (d, _, _) = min_distance(&a, &b, &opts(1.0)).unwrap();
        assert!((d - 0.3).abs() < 1e-12);
        assert!(min_distance(&a, &b, &opts(0.2)).is_none());
    }

    #[test]
    fn arc_over_line_matches_apex() {
        let a = CubicSegment::new(p(-1.0, 1.0), p(-0.3, 0.1), p(0.3, 0.1), p(1.0, 1.0));
        let b = CubicSegment::line(p(-2.0, -0.1), p(2.0, -0.1));
        let (d, t, _) = min_distance(&a, &b, &opts(1.0)).unwrap();
        let apex = a.eval(0.5).y;
        assert!((t - 0.5).abs() < 1e-9);
        assert!((d - (apex + 0.1)).abs() < 1e-12, "{d}");
    }

    #[test]
    fn dense_sampling_agrees() {
        let a = CubicSegment::new(p(0.0, 0.0), p(1.0, 2.0), p(2.0, -1.0), p(3.0, 0.5));
        let b = CubicSegment::new(p(0.5, 1.6), p(1.5, 3.0), p(2.0, 1.0), p(3.5, 2.0));
        let (d, _, _) = min_distance(&a, &b, &opts(10.0)).unwrap();
        let n = 2000;
        let pa: Vec<_> = (0..=n).map(|i| a.eval(i as f64 / n as f64)).collect();
        let pb: Vec<_> = (0..=n).map(|i| b.eval(i as f64 / n as f64)).collect();
        let mut brute = f64::INFINITY;
        for x in &pa {
            for y in &pb {
                brute = brute.min(x.distance(*y));
            }
        }
        assert!(d <= brute + 1e-12 && brute - d < 1e-5, "{d} vs {brute}");
    }

    #[test]
    fn segment_segment_cases() {
        let (d, _, _) = segment_segment(p(0.0, 0.0), p(2.0, 2.0), p(0.0, 2.0), p(2.0, 0.0));
        assert_eq!(d, 0.0);
        let (d, u, v) = segment_segment(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 1.0), p(3.0, 1.0));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((u, v), (1.0, 0.0));
    }
}
