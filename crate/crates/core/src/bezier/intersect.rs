use crate::error::{Error, Result};
use crate::point::Point2;

use super::CubicSegment;

#[derive(Debug, Clone, Copy)]
pub struct IntersectOptions {
    /// Subdivision stops once both parameter intervals are narrower than this.
    pub param_tol: f64,
    /// Intersections closer than this (in parameter) to an endpoint shared by
    /// both segments are the shared node, not a crossing.
    pub endpoint_exclusion: f64,
    /// Crossings whose acute angle is below this (radians) are tangential contacts.
    pub tangent_tol: f64,
    /// Subdivision budget; exceeding it means the curves overlap or touch along an arc.
    pub max_pairs: usize,
}

impl Default for IntersectOptions {
    fn default() -> Self {
        IntersectOptions {
            param_tol: 1e-10,
            endpoint_exclusion: 1e-6,
            tangent_tol: 1e-6,
            max_pairs: 20_000,
        }
    }
}

/// A transversal intersection of two segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intersection {
    pub t_a: f64,
    pub t_b: f64,
    pub point: Point2,
    /// Acute angle between the tangents, in (0, π/2].
    pub angle: f64,
}

/// Acute angle between two directions, in [0, π/2].
pub fn acute_angle(u: Point2, v: Point2) -> f64 {
    u.cross(v).abs().atan2(u.dot(v).abs())
}

#[derive(Clone, Copy)]
struct Piece {
    seg: CubicSegment,
    t0: f64,
    t1: f64,
}

impl Piece {
    fn halves(&self) -> [Piece; 2] {
        let (l, r) = self.seg.split(0.5);
        let tm = 0.5 * (self.t0 + self.t1);
        [
            Piece {
                seg: l,
                t0: self.t0,
                t1: tm,
            },
            Piece {
                seg: r,
                t0: tm,
                t1: self.t1,
            },
        ]
    }

    fn width(&self) -> f64 {
        self.t1 - self.t0
    }
}

/// All transversal intersections of `a` and `b`, sorted by `t_a`.
///
/// Bounding-box subdivision isolates each intersection, the chords of the
/// flattened pieces give a starting point, and Newton's method on
/// `a(t) - b(s) = 0` polishes it.
pub fn intersect(
    a: &CubicSegment,
    b: &CubicSegment,
    opts: &IntersectOptions,
) -> Result<Vec<Intersection>> {
    let (ba, bb) = (a.bbox(), b.bbox());
    if !ba.overlaps(&bb) {
        return Ok(Vec::new());
    }
    let scale = ba.diagonal().max(bb.diagonal()).max(f64::MIN_POSITIVE);
    let flat_tol = 1e-7 * scale;

    // endpoints shared by both segments, as (t_a, t_b)
    let mut shared = Vec::new();
    for (ta, pa) in [(0.0, a.p0), (1.0, a.p3)] {
        for (tb, pb) in [(0.0, b.p0), (1.0, b.p3)] {
            if pa.distance(pb) <= 1e-12 * scale {
                shared.push((ta, tb));
            }
        }
    }
    let excl = opts.endpoint_exclusion;
    let near_shared = |ta0: f64, ta1: f64, tb0: f64, tb1: f64| {
        shared.iter().any(|&(ea, eb)| {
            (ta0 - ea).abs().max((ta1 - ea).abs()) <= excl
                && (tb0 - eb).abs().max((tb1 - eb).abs()) <= excl
        })
    };

    let mut candidates: Vec<(f64, f64)> = Vec::new();
    let mut stack = vec![(
        Piece {
            seg: *a,
            t0: 0.0,
            t1: 1.0,
        },
        Piece {
            seg: *b,
            t0: 0.0,
            t1: 1.0,
        },
    )];
    let mut visited = 0usize;
    while let Some((pa, pb)) = stack.pop() {
        visited += 1;
        if visited > opts.max_pairs {
            let point = pa.seg.eval(0.5);
            return Err(Error::TangentialContact { point, angle: 0.0 });
        }
        if !pa.seg.bbox().overlaps(&pb.seg.bbox()) {
            continue;
        }
        if near_shared(pa.t0, pa.t1, pb.t0, pb.t1) {
            continue;
        }
        let flat = pa.seg.flatness() <= flat_tol && pb.seg.flatness() <= flat_tol;
        let tiny = pa.width() <= opts.param_tol && pb.width() <= opts.param_tol;
        if flat || tiny {
            if let Some((u, v)) = chord_intersection(&pa.seg, &pb.seg) {
                candidates.push((pa.t0 + u * pa.width(), pb.t0 + v * pb.width()));
                continue;
            }
            if tiny {
                // parallel chords that still touch at parameter resolution
                let point = pa.seg.eval(0.5);
                let angle = acute_angle(a.tangent(pa.t0), b.tangent(pb.t0));
                return Err(Error::TangentialContact { point, angle });
            }
        }
        // split the longer piece; both when comparable
        let la = pa.seg.bbox().diagonal();
        let lb = pb.seg.bbox().diagonal();
        if pa.width() > opts.param_tol && (la >= 0.5 * lb || pb.width() <= opts.param_tol) {
            let [a0, a1] = pa.halves();
            if pb.width() > opts.param_tol && lb >= 0.5 * la {
                let [b0, b1] = pb.halves();
                stack.push((a0, b0));
                stack.push((a0, b1));
                stack.push((a1, b0));
                stack.push((a1, b1));
            } else {
                stack.push((a0, pb));
                stack.push((a1, pb));
            }
        } else {
            let [b0, b1] = pb.halves();
            stack.push((pa, b0));
            stack.push((pa, b1));
        }
    }

    let mut out: Vec<Intersection> = Vec::new();
    for (t0, s0) in candidates {
        let Some((t, s)) = newton_polish(a, b, t0, s0, scale) else {
            continue;
        };
        if shared
            .iter()
            .any(|&(ea, eb)| (t - ea).abs() <= excl && (s - eb).abs() <= excl)
        {
            continue;
        }
        if out
            .iter()
            .any(|o| (o.t_a - t).abs() < 1e-7 && (o.t_b - s).abs() < 1e-7)
        {
            continue;
        }
        let point = a.eval(t);
        let angle = acute_angle(a.tangent(t), b.tangent(s));
        if !(angle >= opts.tangent_tol) {
            return Err(Error::TangentialContact { point, angle });
        }
        out.push(Intersection {
            t_a: t,
            t_b: s,
            point,
            angle,
        });
    }
    out.sort_by(|x, y| x.t_a.total_cmp(&y.t_a));
    Ok(out)
}

/// Intersection of the two chords in local parameters, allowing a small overshoot.
fn chord_intersection(a: &CubicSegment, b: &CubicSegment) -> Option<(f64, f64)> {
    let da = a.p3 - a.p0;
    let db = b.p3 - b.p0;
    let den = da.cross(db);
    if den.abs() <= 1e-12 * da.norm() * db.norm() || den == 0.0 {
        return None;
    }
    let w = b.p0 - a.p0;
    let u = w.cross(db) / den;
    let v = w.cross(da) / den;
    const SLACK: f64 = 0.05;
    if (-SLACK..=1.0 + SLACK).contains(&u) && (-SLACK..=1.0 + SLACK).contains(&v) {
        Some((u, v))
    } else {
        None
    }
}

fn newton_polish(
    a: &CubicSegment,
    b: &CubicSegment,
    mut t: f64,
    mut s: f64,
    scale: f64,
) -> Option<(f64, f64)> {
    t = t.clamp(0.0, 1.0);
    s = s.clamp(0.0, 1.0);
    for _ in 0..30 {
        let f = a.eval(t) - b.eval(s);
        let ja = a.tangent(t);
        let jb = b.tangent(s);
        // solve [ja, -jb] [dt, ds]^T = -f
        let det = -ja.cross(jb);
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dt = -(f.x * -jb.y - -jb.x * f.y) / det;
        let ds = -(ja.x * f.y - ja.y * f.x) / det;
        let nt = t + dt;
        let ns = s + ds;
        if !(-1e-3..=1.0 + 1e-3).contains(&nt) || !(-1e-3..=1.0 + 1e-3).contains(&ns) {
            return None;
        }
        t = nt;
        s = ns;
        if dt.abs() < 1e-15 && ds.abs() < 1e-15 {
            break;
        }
    }
    const EDGE: f64 = 1e-12;
    if !(-EDGE..=1.0 + EDGE).contains(&t) || !(-EDGE..=1.0 + EDGE).contains(&s) {
        return None;
    }
    let (t, s) = (t.clamp(0.0, 1.0), s.clamp(0.0, 1.0));
    if a.eval(t).distance(b.eval(s)) > 1e-9 * scale {
        return None;
    }
    Some((t, s))
}
