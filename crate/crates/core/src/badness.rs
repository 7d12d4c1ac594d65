//! The objective: a weighted sum of visual defects of a knot diagram.
//!
//! Scale-dependent components are evaluated on the normalized knot (total arc
//! length 1, node centroid at the origin), so the total is invariant under
//! rigid motions and uniform scaling.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bezier::{min_distance, CubicSegment, DistanceOptions, IntersectOptions};
use crate::error::{Error, Result};
use crate::knot::{ControlPoints, Crossing, MinObj};
use crate::point::Point2;

/// Returned instead of an error when the geometry cannot be scored.
pub const SENTINEL: f64 = 1e12;

/// Chord tolerance of the closest-approach search on the normalized knot.
pub const DISTANCE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BadnessWeights {
    pub w_angle: f64,
    pub w_bend: f64,
    pub w_cross_sep: f64,
    pub w_repel: f64,
    pub w_topology: f64,
    /// Clearance below which non-crossing strands repel, as a fraction of total length.
    pub repel_radius: f64,
    /// Distance below which crossings repel each other, as a fraction of total length.
    pub cross_sep_radius: f64,
    /// Penalty per added or lost crossing.
    pub b_topo: f64,
}

impl Default for BadnessWeights {
    fn default() -> Self {
        BadnessWeights {
            w_angle: 5.0,
            w_bend: 1.0,
            w_cross_sep: 2.0,
            w_repel: 2.0,
            w_topology: 1.0,
            repel_radius: 0.03,
            cross_sep_radius: 0.05,
            b_topo: 100.0,
        }
    }
}

impl BadnessWeights {
    pub const KEYS: [&'static str; 8] = [
        "w_angle",
        "w_bend",
        "w_cross_sep",
        "w_repel",
        "w_topology",
        "repel_radius",
        "cross_sep_radius",
        "b_topo",
    ];

    pub fn validate(&self) -> Result<()> {
        for key in Self::KEYS {
            let v = self.get(key).unwrap();
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "weight {key} must be a nonnegative number, got {v}"
                )));
            }
        }
        let w = [
            self.w_angle,
            self.w_bend,
            self.w_cross_sep,
            self.w_repel,
            self.w_topology,
        ];
        if w.iter().all(|&x| x == 0.0) {
            return Err(Error::Config("at least one weight must be positive".into()));
        }
        if self.repel_radius == 0.0 || self.cross_sep_radius == 0.0 {
            return Err(Error::Config(
                "repel_radius and cross_sep_radius must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let w: BadnessWeights =
            toml::from_str(text).map_err(|e| Error::Config(format!("weights: {e}")))?;
        w.validate()?;
        Ok(w)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("weights serialize")
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "w_angle" => self.w_angle,
            "w_bend" => self.w_bend,
            "w_cross_sep" => self.w_cross_sep,
            "w_repel" => self.w_repel,
            "w_topology" => self.w_topology,
            "repel_radius" => self.repel_radius,
            "cross_sep_radius" => self.cross_sep_radius,
            "b_topo" => self.b_topo,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "w_angle" => &mut self.w_angle,
            "w_bend" => &mut self.w_bend,
            "w_cross_sep" => &mut self.w_cross_sep,
            "w_repel" => &mut self.w_repel,
            "w_topology" => &mut self.w_topology,
            "repel_radius" => &mut self.repel_radius,
            "cross_sep_radius" => &mut self.cross_sep_radius,
            "b_topo" => &mut self.b_topo,
            _ => {
                return Err(Error::Config(format!(
                    "unknown weight '{key}'; expected one of {}",
                    Self::KEYS.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got '{kv}'")))?;
        let v: f64 = v.trim().parse().map_err(|_| {
            Error::Config(format!(
                "weight {}: '{}' is not a number",
                k.trim(),
                v.trim()
            ))
        })?;
        self.set(k.trim(), v)
    }
}

/// Crossing structure used to detect topology changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyFingerprint {
    pub crossing_count: usize,
    /// Distinct crossing segment pairs, sorted.
    pub crossing_pairs: Vec<(usize, usize)>,
}

impl TopologyFingerprint {
    pub fn from_crossings(crossings: &[Crossing]) -> Self {
        let mut pairs: Vec<(usize, usize)> = crossings.iter().map(|c| (c.seg_a, c.seg_b)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        TopologyFingerprint {
            crossing_count: crossings.len(),
            crossing_pairs: pairs,
        }
    }

    /// Number of crossing pairs gained or lost relative to `reference`.
    pub fn discrepancies(&self, reference: &TopologyFingerprint) -> usize {
        let a = &self.crossing_pairs;
        let b = &reference.crossing_pairs;
        let only_a = a.iter().filter(|p| b.binary_search(p).is_err()).count();
        let only_b = b.iter().filter(|p| a.binary_search(p).is_err()).count();
        (only_a + only_b).max(self.crossing_count.abs_diff(reference.crossing_count))
    }
}

pub fn fingerprint(c: &ControlPoints) -> Result<TopologyFingerprint> {
    Ok(TopologyFingerprint::from_crossings(
        &c.crossings(&IntersectOptions::default())?,
    ))
}

/// Scales and translates so that the total arc length is 1 and the node
/// centroid is at the origin. Returns the knot and the scale factor applied.
pub fn normalize(c: &ControlPoints) -> Result<(ControlPoints, f64)> {
    let len = c.arc_length();
    let extent = c.bbox().diagonal();
    if !(len > 1e-12 * extent.max(f64::MIN_POSITIVE)) || !len.is_finite() || len == 0.0 {
        return Err(Error::DegenerateKnot(format!(
            "total arc length {len} is too small to normalize"
        )));
    }
    let n = c.len() as f64;
    let centroid = c.segments().iter().fold(Point2::ZERO, |a, s| a + s.p0) / n;
    let scale = 1.0 / len;
    Ok((c.map(|p| (p - centroid) * scale), scale))
}

/// Σ cos²θ over crossings; zero exactly when every crossing is at a right angle.
pub fn total_crossing_angles(c: &ControlPoints) -> Result<f64> {
    Ok(angle_badness(&c.crossings(&IntersectOptions::default())?))
}

pub fn angle_badness(crossings: &[Crossing]) -> f64 {
    crossings
        .iter()
        .map(|x| x.angle.cos().powi(2))
        .fold(0.0, |a, v| a + v)
}

/// ∫κ²ds of the normalized knot.
pub fn total_bending_energy(c: &ControlPoints) -> Result<f64> {
    let (norm, _) = normalize(c)?;
    bending(&norm)
}

fn bending(c: &ControlPoints) -> Result<f64> {
    let mut total = 0.0;
    for seg in c.segments() {
        total += seg.bending_energy()?;
    }
    Ok(total)
}

fn hinge(d: f64, radius: f64) -> f64 {
    let u = 1.0 - d / radius;
    if u > 0.0 {
        u * u
    } else {
        0.0
    }
}

/// Σ over pairs of crossings of max(0, 1 − d/radius)², in the knot's own units.
pub fn crossing_separation_badness(crossings: &[Crossing], radius: f64) -> f64 {
    let mut total = 0.0;
    for (i, a) in crossings.iter().enumerate() {
        for b in &crossings[i + 1..] {
            total += hinge(a.point.distance(b.point), radius);
        }
    }
    total
}

/// Penalty for one pair of segments approaching closer than `radius`.
pub fn segment_repel(a: &CubicSegment, b: &CubicSegment, radius: f64) -> f64 {
    let opts = DistanceOptions {
        tol: DISTANCE_TOL.min(0.01 * radius),
        cutoff: radius,
    };
    match min_distance(a, b, &opts) {
        Some((d, _, _)) => hinge(d, radius),
        None => 0.0,
    }
}

/// Σ over non-adjacent segment pairs that do not cross of the clearance
/// hinge, in the knot's own units.
pub fn repel_badness(c: &ControlPoints, crossings: &[Crossing], radius: f64) -> f64 {
    let n = c.len();
    let segs = c.segments();
    let mut crossing_pairs: Vec<(usize, usize)> = crossings
        .iter()
        .map(|x| (x.seg_a - 1, x.seg_b - 1))
        .collect();
    crossing_pairs.sort_unstable();
    let boxes: Vec<_> = segs.iter().map(|s| s.bbox()).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if c.adjacent(i, j)
                || boxes[i].distance(&boxes[j]) >= radius
                || crossing_pairs.binary_search(&(i, j)).is_ok()
            {
                continue;
            }
            total += segment_repel(&segs[i], &segs[j], radius);
        }
    }
    total
}

pub fn topology_badness(
    current: &TopologyFingerprint,
    reference: &TopologyFingerprint,
    b_topo: f64,
) -> f64 {
    b_topo * current.discrepancies(reference) as f64
}

/// Unweighted components and the weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Breakdown {
    pub angles: f64,
    pub bend: f64,
    pub cross_sep: f64,
    pub repel: f64,
    pub topology: f64,
    pub total: f64,
    pub crossings: usize,
}

impl Breakdown {
    pub fn weighted_total(&self, w: &BadnessWeights) -> f64 {
        w.w_angle * self.angles
            + w.w_bend * self.bend
            + w.w_cross_sep * self.cross_sep
            + w.w_repel * self.repel
            + w.w_topology * self.topology
    }

    pub fn components(&self) -> [(&'static str, f64); 5] {
        [
            ("angles", self.angles),
            ("bend", self.bend),
            ("cross_sep", self.cross_sep),
            ("repel", self.repel),
            ("topology", self.topology),
        ]
    }
}

/// All components of the normalized knot. Errors on degenerate geometry
/// or tangential contacts.
pub fn evaluate(
    c: &ControlPoints,
    w: &BadnessWeights,
    reference: &TopologyFingerprint,
) -> Result<Breakdown> {
    let (norm, _) = normalize(c)?;
    let crossings = norm.crossings(&IntersectOptions::default())?;
    let fp = TopologyFingerprint::from_crossings(&crossings);
    let mut b = Breakdown {
        angles: angle_badness(&crossings),
        bend: if w.w_bend != 0.0 {
            bending(&norm)?
        } else {
            0.0
        },
        cross_sep: crossing_separation_badness(&crossings, w.cross_sep_radius),
        repel: if w.w_repel != 0.0 {
            repel_badness(&norm, &crossings, w.repel_radius)
        } else {
            0.0
        },
        topology: topology_badness(&fp, reference, w.b_topo),
        total: 0.0,
        crossings: crossings.len(),
    };
    b.total = b.weighted_total(w);
    if !b.total.is_finite() {
        return Err(Error::DegenerateKnot("badness is not finite".into()));
    }
    Ok(b)
}

/// The objective. Never fails: degenerate geometry scores [`SENTINEL`].
pub fn badness(c: &ControlPoints, w: &BadnessWeights, reference: &TopologyFingerprint) -> f64 {
    evaluate(c, w, reference)
        .map(|b| b.total)
        .unwrap_or(SENTINEL)
}

/// [`badness`] of a flat knot vector.
pub fn badness_vec(v: &[f64], w: &BadnessWeights, reference: &TopologyFingerprint) -> f64 {
    match MinObj::from_slice(v) {
        Ok(m) if m.is_finite() => badness(&m.to_controlpoints(), w, reference),
        _ => SENTINEL,
    }
}
