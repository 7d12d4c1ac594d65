//! Interchangeable representations of one closed Bezier knot path.
//!
//! * [`InkscapePath`]: the raw control sequence `[n0, h0+, h1-, n1, h1+, h2-, ..., h0-, n0]`
//!   as read from an SVG file, with the first node repeated at the end.
//! * [`MinObj`]: one node and one forward handle per node; the backward handle
//!   is always the reflection `2·n − h`.
//! * [`ControlPoints`]: the closed chain of cubic segments.
//! * [`KnotVec`]: flat coordinates for the optimizer, all node coordinates
//!   first (`x1, y1, x2, y2, ...`) followed by all handle coordinates.
//!
//! Node and segment labels are 1-based wherever they are user facing;
//! segment `i` runs from node `i` to node `i + 1`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bezier::{intersect, CubicSegment, IntersectOptions};
use crate::error::{Error, Result};
use crate::point::{Point2, Rect};

/// Handle asymmetry and closure tolerance on ingestion, relative to the
/// path's bounding-box diagonal.
pub const INGEST_TOL_REL: f64 = 0.005;

#[derive(Debug, Clone, PartialEq)]
pub struct InkscapePath {
    points: Vec<Point2>,
}

impl InkscapePath {
    /// Checks the structural invariants: length ≡ 1 (mod 3), at least three
    /// nodes, finite coordinates and a closed loop. The final point is snapped
    /// onto the first.
    pub fn new(mut points: Vec<Point2>) -> Result<Self> {
        if points.len() < 10 || points.len() % 3 != 1 {
            return Err(Error::MalformedPath(format!(
                "{} control points; expected 3n+1 with n >= 3",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::MalformedPath(format!(
                "non-finite control point {}",
                i + 1
            )));
        }
        let diag = Rect::from_points(points.iter().copied())
            .map(|r| r.diagonal())
            .unwrap_or(0.0);
        let gap = points[0].distance(*points.last().unwrap());
        if gap > INGEST_TOL_REL * diag {
            return Err(Error::MalformedPath(format!(
                "path does not close: last node is {gap} from the first"
            )));
        }
        let first = points[0];
        *points.last_mut().unwrap() = first;
        Ok(InkscapePath { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn node_count(&self) -> usize {
        (self.points.len() - 1) / 3
    }

    pub fn bbox(&self) -> Rect {
        Rect::from_points(self.points.iter().copied()).expect("non-empty")
    }

    fn forward(&self, k: usize) -> Point2 {
        self.points[3 * k + 1]
    }

    fn backward(&self, k: usize) -> Point2 {
        if k == 0 {
            self.points[self.points.len() - 2]
        } else {
            self.points[3 * k - 1]
        }
    }

    /// Largest distance between a forward handle and the reflection of the
    /// matching backward handle through its node.
    pub fn handle_asymmetry(&self) -> f64 {
        (0..self.node_count())
            .map(|k| {
                let n = self.points[3 * k];
                self.forward(k).distance(n * 2.0 - self.backward(k))
            })
            .fold(0.0, f64::max)
    }

    /// Handle symmetry within the ingestion tolerance.
    pub fn check_handle_symmetry(&self) -> Result<()> {
        let tol = INGEST_TOL_REL * self.bbox().diagonal();
        for k in 0..self.node_count() {
            let n = self.points[3 * k];
            let err = self.forward(k).distance(n * 2.0 - self.backward(k));
            if err > tol {
                return Err(Error::MalformedPath(format!(
                    "handles of node {} are not symmetric about it (off by {err:.6}, tolerance {tol:.6})",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    pub fn to_minobj(&self) -> Result<MinObj> {
        self.check_handle_symmetry()?;
        let n = self.node_count();
        let mut nodes = Vec::with_capacity(n);
        let mut handles = Vec::with_capacity(n);
        for k in 0..n {
            let node = self.points[3 * k];
            let fwd = self.forward(k);
            let mirrored = node * 2.0 - self.backward(k);
            nodes.push(node);
            handles.push(if fwd == mirrored {
                fwd
            } else {
                (fwd + mirrored) * 0.5
            });
        }
        MinObj::new(nodes, handles)
    }

    /// The segments exactly as drawn, backward handles included.
    pub fn segments(&self) -> Vec<CubicSegment> {
        self.points
            .chunks(3)
            .take(self.node_count())
            .enumerate()
            .map(|(k, c)| CubicSegment::new(c[0], c[1], c[2], self.points[3 * k + 3]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinObj {
    nodes: Vec<Point2>,
    handles: Vec<Point2>,
}

impl MinObj {
    pub fn new(nodes: Vec<Point2>, handles: Vec<Point2>) -> Result<Self> {
        if nodes.len() != handles.len() {
            return Err(Error::MalformedPath(format!(
                "{} nodes but {} handles",
                nodes.len(),
                handles.len()
            )));
        }
        if nodes.len() < 3 {
            return Err(Error::MalformedPath(format!(
                "{} nodes; a knot needs at least 3",
                nodes.len()
            )));
        }
        Ok(MinObj { nodes, handles })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    pub fn handles(&self) -> &[Point2] {
        &self.handles
    }

    pub fn nodes_mut(&mut self) -> &mut [Point2] {
        &mut self.nodes
    }

    pub fn handles_mut(&mut self) -> &mut [Point2] {
        &mut self.handles
    }

    pub fn backward_handle(&self, i: usize) -> Point2 {
        self.nodes[i] * 2.0 - self.handles[i]
    }

    pub fn is_finite(&self) -> bool {
        self.nodes
            .iter()
            .chain(&self.handles)
            .all(|p| p.is_finite())
    }

    /// Apply `f` to every node and handle.
    pub fn map(&self, mut f: impl FnMut(Point2) -> Point2) -> MinObj {
        MinObj {
            nodes: self.nodes.iter().map(|&p| f(p)).collect(),
            handles: self.handles.iter().map(|&p| f(p)).collect(),
        }
    }

    pub fn node_centroid(&self) -> Point2 {
        let s = self.nodes.iter().fold(Point2::ZERO, |acc, &p| acc + p);
        s / self.nodes.len() as f64
    }

    pub fn to_controlpoints(&self) -> ControlPoints {
        let n = self.nodes.len();
        let segments = (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                CubicSegment::new(
                    self.nodes[i],
                    self.handles[i],
                    self.backward_handle(j),
                    self.nodes[j],
                )
            })
            .collect();
        ControlPoints { segments }
    }

    pub fn to_inkscape(&self) -> InkscapePath {
        let n = self.nodes.len();
        let mut points = Vec::with_capacity(3 * n + 1);
        points.push(self.nodes[0]);
        for i in 0..n {
            let j = (i + 1) % n;
            points.push(self.handles[i]);
            points.push(self.backward_handle(j));
            points.push(self.nodes[j]);
        }
        InkscapePath { points }
    }

    pub fn to_knotvec(&self) -> KnotVec {
        let mut values = Vec::with_capacity(4 * self.nodes.len());
        for p in self.nodes.iter().chain(&self.handles) {
            values.push(p.x);
            values.push(p.y);
        }
        KnotVec { values }
    }

    pub fn from_knotvec(v: &KnotVec) -> Result<MinObj> {
        MinObj::from_slice(&v.values)
    }

    pub fn from_slice(values: &[f64]) -> Result<MinObj> {
        if values.is_empty() || !values.len().is_multiple_of(4) {
            return Err(Error::BadLength { len: values.len() });
        }
        let n = values.len() / 4;
        let pt = |k: usize| Point2::new(values[2 * k], values[2 * k + 1]);
        let nodes = (0..n).map(pt).collect();
        let handles = (n..2 * n).map(pt).collect();
        MinObj::new(nodes, handles)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlPoints {
    segments: Vec<CubicSegment>,
}

/// A detected crossing between two segments of a knot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// 1-based label of the first segment; always `seg_a < seg_b`.
    pub seg_a: usize,
    pub t_a: f64,
    pub seg_b: usize,
    pub t_b: f64,
    pub point: Point2,
    /// Acute angle between tangents, radians in (0, π/2].
    pub angle: f64,
}

impl ControlPoints {
    /// Builds a chain, checking closure: each segment must end where the next starts.
    pub fn new(segments: Vec<CubicSegment>) -> Result<Self> {
        if segments.len() < 3 {
            return Err(Error::MalformedPath(format!(
                "{} segments; a knot needs at least 3",
                segments.len()
            )));
        }
        let n = segments.len();
        for i in 0..n {
            if segments[i].p3 != segments[(i + 1) % n].p0 {
                return Err(Error::MalformedPath(format!(
                    "segment {} does not end where segment {} starts",
                    i + 1,
                    (i + 1) % n + 1
                )));
            }
        }
        Ok(ControlPoints { segments })
    }

    pub fn segments(&self) -> &[CubicSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// 1-based segment access.
    pub fn segment(&self, label: usize) -> Result<&CubicSegment> {
        let idx = segment_number(self, label)?;
        Ok(&self.segments[idx - 1])
    }

    pub fn map(&self, mut f: impl FnMut(Point2) -> Point2) -> ControlPoints {
        ControlPoints {
            segments: self.segments.iter().map(|s| s.map(&mut f)).collect(),
        }
    }

    pub fn to_minobj(&self) -> MinObj {
        MinObj {
            nodes: self.segments.iter().map(|s| s.p0).collect(),
            handles: self.segments.iter().map(|s| s.p1).collect(),
        }
    }

    pub fn bbox(&self) -> Rect {
        Rect::from_points(self.segments.iter().flat_map(|s| s.points())).expect("non-empty")
    }

    pub fn arc_length(&self) -> f64 {
        self.segments.iter().map(|s| s.arc_length()).sum()
    }

    /// Largest angle between the incoming and outgoing directions at any node.
    pub fn max_kink(&self) -> f64 {
        let n = self.segments.len();
        (0..n)
            .map(|i| {
                let a = self.segments[i];
                let b = self.segments[(i + 1) % n];
                let u = a.p3 - a.p2;
                let v = b.p1 - b.p0;
                u.cross(v).abs().atan2(u.dot(v))
            })
            .fold(0.0, f64::max)
    }

    /// Whether segments `i` and `j` (0-based) share a node.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.segments.len();
        let d = (i + n - j) % n;
        d == 0 || d == 1 || d == n - 1
    }

    /// All crossings between distinct segments, ordered by (seg_a, t_a).
    pub fn crossings(&self, opts: &IntersectOptions) -> Result<Vec<Crossing>> {
        let n = self.segments.len();
        let boxes: Vec<Rect> = self.segments.iter().map(|s| s.bbox()).collect();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !boxes[i].overlaps(&boxes[j]) {
                    continue;
                }
                for x in intersect(&self.segments[i], &self.segments[j], opts)? {
                    out.push(Crossing {
                        seg_a: i + 1,
                        t_a: x.t_a,
                        seg_b: j + 1,
                        t_b: x.t_b,
                        point: x.point,
                        angle: x.angle,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Validates and returns the 1-based label of a segment. Labels follow path
/// order and are the ones drawn by the renderer.
pub fn segment_number(c: &ControlPoints, seg_index: usize) -> Result<usize> {
    if seg_index == 0 || seg_index > c.len() {
        return Err(Error::OutOfRange {
            index: seg_index,
            n: c.len(),
        });
    }
    Ok(seg_index)
}

/// Flat optimizer vector; see the module docs for the layout.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVec {
    values: Vec<f64>,
}

impl KnotVec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(4) {
            return Err(Error::BadLength { len: values.len() });
        }
        Ok(KnotVec { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn node_count(&self) -> usize {
        self.values.len() / 4
    }

    /// Text form: a `knotvec n=<n>` header, then one value per line.
    /// Values use the shortest representation that round-trips exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(24 * self.values.len() + 16);
        writeln!(s, "knotvec n={}", self.node_count()).unwrap();
        for v in &self.values {
            writeln!(s, "{v:?}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty knotvec file".into()))?;
        let n: usize = header
            .strip_prefix("knotvec n=")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| Error::Config(format!("bad knotvec header '{header}'")))?;
        let values = lines
            .enumerate()
            .map(|(i, l)| {
                l.parse::<f64>()
                    .map_err(|e| Error::Config(format!("knotvec value {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != 4 * n {
            return Err(Error::BadLength { len: values.len() });
        }
        KnotVec::new(values)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        KnotVec::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}
