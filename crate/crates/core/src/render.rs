//! Diagram construction: construction plots with handles and curvature
//! glyphs, and finished knot diagrams with breaks in the understrands.
//!
//! Coordinates stay in the input's SVG user units (y down), so a rendered
//! document overlays the drawing it came from.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bezier::{CubicSegment, IntersectOptions};
use crate::error::{Error, Result};
use crate::knot::{ControlPoints, Crossing};
use crate::point::{Point2, Rect};

/// One row per crossing: `(over, under)` as 1-based segment labels.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OverUnderSpec {
    pub rows: Vec<(usize, usize)>,
}

impl OverUnderSpec {
    pub fn new(rows: Vec<(usize, usize)>) -> Self {
        OverUnderSpec { rows }
    }

    /// One `over under` pair per line, separated by whitespace or a comma;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            let parsed: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
            match parsed.as_deref() {
                Some([o, u]) => rows.push((*o, *u)),
                _ => {
                    return Err(Error::Config(format!(
                        "over/under line {}: expected two segment labels, got '{line}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(OverUnderSpec { rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        OverUnderSpec::parse(&text)
    }

    pub fn to_text(&self) -> String {
        self.rows
            .iter()
            .map(|(o, u)| format!("{o} {u}\n"))
            .collect()
    }
}

/// A crossing paired with the row that declares its overstrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedCrossing {
    pub row: usize,
    pub over: usize,
    pub under: usize,
    pub crossing: Crossing,
}

impl MatchedCrossing {
    /// Parameter of the crossing on the under segment.
    pub fn t_under(&self) -> f64 {
        if self.under == self.crossing.seg_a {
            self.crossing.t_a
        } else {
            self.crossing.t_b
        }
    }

    pub fn t_over(&self) -> f64 {
        if self.over == self.crossing.seg_a {
            self.crossing.t_a
        } else {
            self.crossing.t_b
        }
    }
}

/// Pairs every detected crossing with exactly one row. Rows naming the same
/// segment pair take that pair's crossings in order along the row's first
/// segment. Every problem found is listed in the error.
pub fn match_overunder(
    crossings: &[Crossing],
    ou: &OverUnderSpec,
    n: usize,
) -> Result<Vec<MatchedCrossing>> {
    let mut problems = Vec::new();
    let mut used = vec![false; crossings.len()];
    let mut out = Vec::new();
    for (k, &(over, under)) in ou.rows.iter().enumerate() {
        let row = k + 1;
        if over == 0 || over > n || under == 0 || under > n {
            problems.push(format!(
                "row {row} ({over} over {under}): segment labels must lie in 1..{n}"
            ));
            continue;
        }
        if over == under {
            problems.push(format!(
                "row {row} ({over} over {under}): a segment cannot cross itself"
            ));
            continue;
        }
        let key = (over.min(under), over.max(under));
        let along_over = |c: &Crossing| if over == c.seg_a { c.t_a } else { c.t_b };
        let pick = crossings
            .iter()
            .enumerate()
            .filter(|(i, c)| !used[*i] && (c.seg_a, c.seg_b) == key)
            .min_by(|(_, x), (_, y)| along_over(x).total_cmp(&along_over(y)));
        match pick {
            Some((i, c)) => {
                used[i] = true;
                out.push(MatchedCrossing {
                    row: k,
                    over,
                    under,
                    crossing: *c,
                });
            }
            None => {
                let exists = crossings.iter().any(|c| (c.seg_a, c.seg_b) == key);
                if exists {
                    problems.push(format!("row {row} ({over} over {under}): every crossing of segments {over} and {under} already has a row"));
                } else {
                    problems.push(format!(
                        "row {row} ({over} over {under}): segments {over} and {under} do not cross"
                    ));
                }
            }
        }
    }
    for (c, _) in crossings.iter().zip(&used).filter(|(_, u)| !**u) {
        problems.push(format!(
            "crossing of segments {} and {} at ({:.3}, {:.3}) has no over/under row",
            c.seg_a, c.seg_b, c.point.x, c.point.y
        ));
    }
    if problems.is_empty() {
        Ok(out)
    } else {
        Err(Error::OverUnderMismatch(problems))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderOptions {
    /// Half-length of each understrand break, in display units.
    pub gap: f64,
    pub show_nodes: bool,
    pub show_handles: bool,
    pub show_curvature: bool,
    /// Glyph radius per unit curvature.
    pub curvature_scale: f64,
    /// Curvature glyphs per segment; they are spread evenly in arc length over the whole knot.
    pub curvature_samples: usize,
    pub show_labels: bool,
    pub label_size: f64,
    pub label_offset: f64,
    pub rainbow: bool,
    pub stroke_width: f64,
    pub color: String,
    pub background: Option<String>,
    pub margin: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            gap: 10.0,
            show_nodes: false,
            show_handles: false,
            show_curvature: false,
            curvature_scale: 200.0,
            curvature_samples: 6,
            show_labels: false,
            label_size: 14.0,
            label_offset: 16.0,
            rainbow: false,
            stroke_width: 4.0,
            color: "black".into(),
            background: Some("white".into()),
            margin: 20.0,
        }
    }
}

impl RenderOptions {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let o: RenderOptions =
            toml::from_str(text).map_err(|e| Error::Config(format!("render options: {e}")))?;
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap >= 0.0) || !self.gap.is_finite() {
            return Err(Error::Config(format!(
                "gap must be a nonnegative number, got {}",
                self.gap
            )));
        }
        if !(self.stroke_width >= 0.0) || !(self.curvature_scale >= 0.0) {
            return Err(Error::Config(
                "stroke_width and curvature_scale must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Style {
    pub stroke: Option<String>,
    pub stroke_width: f64,
    pub fill: Option<String>,
}

impl Style {
    pub fn stroke(color: &str, width: f64) -> Style {
        Style {
            stroke: Some(color.into()),
            stroke_width: width,
            fill: None,
        }
    }

    pub fn filled(color: &str) -> Style {
        Style {
            stroke: None,
            stroke_width: 0.0,
            fill: Some(color.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Path {
        segments: Vec<CubicSegment>,
        closed: bool,
    },
    Circle {
        center: Point2,
        radius: f64,
    },
    Line {
        from: Point2,
        to: Point2,
    },
    Text {
        at: Point2,
        text: String,
        size: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Primitive {
    pub shape: Shape,
    /// Role of the primitive (`strand`, `handle`, `label`, ...), written as the SVG class.
    pub class: String,
    pub style: Style,
    pub id: Option<String>,
}

/// An interruption of the under segment at one crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Break {
    pub under: usize,
    pub over: usize,
    pub point: Point2,
    /// Crossing parameter on the under segment.
    pub t: f64,
    /// Parameter interval removed from the under segment.
    pub t_range: (f64, f64),
    /// The same interval in arc length from the segment's start.
    pub s_range: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderDoc {
    pub background: Option<String>,
    pub margin: f64,
    pub primitives: Vec<Primitive>,
    pub breaks: Vec<Break>,
}

impl Default for RenderDoc {
    fn default() -> Self {
        RenderDoc {
            background: None,
            margin: 0.0,
            primitives: Vec::new(),
            breaks: Vec::new(),
        }
    }
}

impl RenderDoc {
    /// Extent of all primitives, or `None` for an empty document.
    pub fn bounds(&self) -> Option<Rect> {
        self.primitives
            .iter()
            .filter_map(primitive_bounds)
            .reduce(|a, b| a.union(&b))
    }

    pub fn count_class(&self, class: &str) -> usize {
        self.primitives.iter().filter(|p| p.class == class).count()
    }

    /// Apply `f` to every coordinate; radii and sizes are kept.
    pub fn map_points(&self, mut f: impl FnMut(Point2) -> Point2) -> RenderDoc {
        let primitives = self
            .primitives
            .iter()
            .map(|p| {
                let shape = match &p.shape {
                    Shape::Path { segments, closed } => Shape::Path {
                        segments: segments.iter().map(|s| s.map(&mut f)).collect(),
                        closed: *closed,
                    },
                    Shape::Circle { center, radius } => Shape::Circle {
                        center: f(*center),
                        radius: *radius,
                    },
                    Shape::Line { from, to } => Shape::Line {
                        from: f(*from),
                        to: f(*to),
                    },
                    Shape::Text { at, text, size } => Shape::Text {
                        at: f(*at),
                        text: text.clone(),
                        size: *size,
                    },
                };
                Primitive { shape, ..p.clone() }
            })
            .collect();
        let breaks = self
            .breaks
            .iter()
            .map(|b| Break {
                point: f(b.point),
                ..*b
            })
            .collect();
        RenderDoc {
            primitives,
            breaks,
            ..self.clone()
        }
    }
}

fn primitive_bounds(p: &Primitive) -> Option<Rect> {
    let half = 0.5
        * p.style
            .stroke
            .as_ref()
            .map_or(0.0, |_| p.style.stroke_width);
    let r = match &p.shape {
        Shape::Path { segments, .. } => segments
            .iter()
            .map(|s| s.bbox())
            .reduce(|a, b| a.union(&b))?,
        Shape::Circle { center, radius } => Rect {
            min: *center,
            max: *center,
        }
        .inflate(*radius),
        Shape::Line { from, to } => Rect::from_points([*from, *to])?,
        Shape::Text { at, size, .. } => Rect { min: *at, max: *at }.inflate(*size),
    };
    Some(r.inflate(half))
}

fn path(segments: Vec<CubicSegment>, closed: bool, class: &str, style: Style) -> Primitive {
    Primitive {
        shape: Shape::Path { segments, closed },
        class: class.into(),
        style,
        id: None,
    }
}

fn new_doc(opts: &RenderOptions) -> RenderDoc {
    RenderDoc {
        background: opts.background.clone(),
        margin: opts.margin,
        ..RenderDoc::default()
    }
}

/// The unbroken closed path, invisible, first in the document so that the
/// diagram can be read back as a knot.
fn centerline(c: &ControlPoints) -> Primitive {
    Primitive {
        id: Some("knot".into()),
        ..path(c.segments().to_vec(), true, "centerline", Style::default())
    }
}

/// Construction plot: the closed path plus optional handles, node markers,
/// curvature glyphs and segment labels.
pub fn knotplot2(c: &ControlPoints, opts: &RenderOptions) -> RenderDoc {
    let mut doc = new_doc(opts);
    let n = c.len();
    if opts.rainbow {
        doc.primitives.push(centerline(c));
        for (i, seg) in c.segments().iter().enumerate() {
            let color = hue_color(i as f64 / n as f64);
            doc.primitives.push(path(
                vec![*seg],
                false,
                "strand",
                Style::stroke(&color, opts.stroke_width),
            ));
        }
    } else {
        let mut knot = path(
            c.segments().to_vec(),
            true,
            "knot",
            Style::stroke(&opts.color, opts.stroke_width),
        );
        knot.id = Some("knot".into());
        doc.primitives.push(knot);
    }
    overlays(&mut doc, c, opts);
    doc
}

/// Finished diagram: every crossing's under segment is interrupted over an
/// arc-length interval of `2·gap` centered on the crossing.
pub fn knotplot(c: &ControlPoints, ou: &OverUnderSpec, opts: &RenderOptions) -> Result<RenderDoc> {
    opts.validate()?;
    let crossings = c.crossings(&IntersectOptions::default())?;
    let matched = match_overunder(&crossings, ou, c.len())?;
    let breaks = compute_breaks(c, &matched, opts.gap);

    let mut doc = new_doc(opts);
    doc.primitives.push(centerline(c));
    let style = Style::stroke(&opts.color, opts.stroke_width);
    for run in strand_runs(c, &breaks) {
        doc.primitives
            .push(path(run.segments, run.closed, "strand", style.clone()));
    }
    doc.breaks = breaks;
    overlays(&mut doc, c, opts);
    Ok(doc)
}

/// Break intervals in arc length, kept clear of the segment's end nodes and
/// of each other.
pub fn compute_breaks(c: &ControlPoints, matched: &[MatchedCrossing], gap: f64) -> Vec<Break> {
    let mut breaks = Vec::with_capacity(matched.len());
    for m in matched {
        let seg = &c.segments()[m.under - 1];
        let t = m.t_under();
        let s = seg.arc_length_to(t);
        breaks.push(Break {
            under: m.under,
            over: m.over,
            point: m.crossing.point,
            t,
            t_range: (t, t),
            s_range: (s - gap, s + gap),
        });
    }
    for label in 1..=c.len() {
        let seg = &c.segments()[label - 1];
        let mut idx: Vec<usize> = (0..breaks.len())
            .filter(|&i| breaks[i].under == label)
            .collect();
        if idx.is_empty() {
            continue;
        }
        let len = seg.arc_length();
        let clear = 0.02 * len;
        idx.sort_by(|&a, &b| breaks[a].t.total_cmp(&breaks[b].t));
        let centers: Vec<f64> = idx
            .iter()
            .map(|&i| seg.arc_length_to(breaks[i].t))
            .collect();
        for (k, &i) in idx.iter().enumerate() {
            let sc = centers[k];
            let mut lo = breaks[i].s_range.0.max(clear.min(sc));
            let mut hi = breaks[i].s_range.1.min((len - clear).max(sc));
            if k > 0 {
                let mid = 0.5 * (centers[k - 1] + sc);
                lo = lo.max((mid + 0.5 * clear).min(sc));
            }
            if k + 1 < idx.len() {
                let mid = 0.5 * (sc + centers[k + 1]);
                hi = hi.min((mid - 0.5 * clear).max(sc));
            }
            let b = &mut breaks[i];
            b.s_range = (lo, hi);
            b.t_range = if hi > lo {
                (seg.param_at_length(lo), seg.param_at_length(hi))
            } else {
                (b.t, b.t)
            };
        }
    }
    breaks
}

struct Run {
    segments: Vec<CubicSegment>,
    closed: bool,
}

/// Visible pieces of the knot between breaks, in path order.
fn strand_runs(c: &ControlPoints, breaks: &[Break]) -> Vec<Run> {
    let n = c.len();
    let mut cuts: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
    for b in breaks {
        if b.t_range.1 > b.t_range.0 {
            cuts[b.under - 1].push(b.t_range);
        }
    }
    if cuts.iter().all(Vec::is_empty) {
        return vec![Run {
            segments: c.segments().to_vec(),
            closed: true,
        }];
    }
    for v in &mut cuts {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    // start just after the first cut so that every run ends at a cut
    let first = cuts.iter().position(|v| !v.is_empty()).unwrap();
    let fc = &cuts[first];
    let mut spans = Vec::new();
    let mut t = fc[0].1;
    for &(a, b) in &fc[1..] {
        spans.push((first, t, a, true));
        t = b;
    }
    spans.push((first, t, 1.0, false));
    for step in 1..n {
        let i = (first + step) % n;
        let mut t = 0.0;
        for &(a, b) in &cuts[i] {
            spans.push((i, t, a, true));
            t = b;
        }
        spans.push((i, t, 1.0, false));
    }
    spans.push((first, 0.0, fc[0].0, true));

    let mut runs = Vec::new();
    let mut current = Vec::new();
    for (i, t0, t1, cut_after) in spans {
        let seg = &c.segments()[i];
        if t1 > t0 {
            current.push(if t0 == 0.0 && t1 == 1.0 {
                *seg
            } else {
                seg.subsegment(t0, t1)
            });
        }
        if cut_after && !current.is_empty() {
            runs.push(Run {
                segments: std::mem::take(&mut current),
                closed: false,
            });
        }
    }
    runs
}

fn overlays(doc: &mut RenderDoc, c: &ControlPoints, opts: &RenderOptions) {
    let n = c.len();
    let thin = (0.25 * opts.stroke_width).max(0.5);
    if opts.show_handles {
        let dot = (0.75 * opts.stroke_width).max(1.5);
        for i in 0..n {
            let node = c.segments()[i].p0;
            let fwd = c.segments()[i].p1;
            let back = c.segments()[(i + n - 1) % n].p2;
            for h in [back, fwd] {
                doc.primitives.push(Primitive {
                    shape: Shape::Line { from: node, to: h },
                    class: "handle-stick".into(),
                    style: Style::stroke("gray", thin),
                    id: None,
                });
                doc.primitives.push(Primitive {
                    shape: Shape::Circle {
                        center: h,
                        radius: dot,
                    },
                    class: "handle".into(),
                    style: Style::stroke("gray", thin),
                    id: None,
                });
            }
        }
    }
    if opts.show_nodes {
        let r = (1.0 * opts.stroke_width).max(2.0);
        for seg in c.segments() {
            doc.primitives.push(Primitive {
                shape: Shape::Circle {
                    center: seg.p0,
                    radius: r,
                },
                class: "node".into(),
                style: Style::filled("red"),
                id: None,
            });
        }
    }
    if opts.show_curvature && opts.curvature_samples > 0 {
        for (p, k) in curvature_samples(c, opts.curvature_samples * n) {
            doc.primitives.push(Primitive {
                shape: Shape::Circle {
                    center: p,
                    radius: opts.curvature_scale * k,
                },
                class: "curvature".into(),
                style: Style::stroke("steelblue", thin),
                id: None,
            });
        }
    }
    if opts.show_labels {
        let centroid = c.segments().iter().fold(Point2::ZERO, |a, s| a + s.p0) / n as f64;
        for (i, seg) in c.segments().iter().enumerate() {
            let at = seg.eval(0.5);
            let tan = seg.tangent(0.5);
            let len = tan.norm();
            let mut normal = if len > 0.0 {
                tan.perp() / len
            } else {
                Point2::new(0.0, -1.0)
            };
            if normal.dot(at - centroid) < 0.0 {
                normal = -normal;
            }
            doc.primitives.push(Primitive {
                shape: Shape::Text {
                    at: at + normal * opts.label_offset,
                    text: (i + 1).to_string(),
                    size: opts.label_size,
                },
                class: "label".into(),
                style: Style::filled("blue"),
                id: None,
            });
        }
    }
}

/// Points spaced evenly in arc length around the knot with their curvature.
/// Points where the curvature is undefined are skipped.
pub fn curvature_samples(c: &ControlPoints, count: usize) -> Vec<(Point2, f64)> {
    let lengths: Vec<f64> = c.segments().iter().map(|s| s.arc_length()).collect();
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    let mut start = 0.0;
    for j in 0..count {
        let s = total * (j as f64 + 0.5) / count as f64;
        while seg + 1 < lengths.len() && start + lengths[seg] < s {
            start += lengths[seg];
            seg += 1;
        }
        let piece = &c.segments()[seg];
        let t = piece.param_at_length((s - start).clamp(0.0, lengths[seg]));
        if let Ok(k) = piece.curvature(t) {
            out.push((piece.eval(t), k));
        }
    }
    out
}

/// `#rrggbb` for a hue in [0, 1) at fixed saturation and value.
pub fn hue_color(h: f64) -> String {
    let (s, v) = (0.9, 0.85);
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let c = v * s;
    let x = c * (1.0 - (h6 % 2.0 - 1.0).abs());
    let (r, g, b) = match h6 as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let to = |u: f64| ((u + m) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", to(r), to(g), to(b))
}
