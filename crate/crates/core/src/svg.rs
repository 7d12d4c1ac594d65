//! Reading a knot path from SVG and writing rendered documents.

use std::fmt::Write as _;
use std::path::Path;

use svgtypes::{PathParser, PathSegment};

use crate::error::{Error, Result};
use crate::format::g6;
use crate::knot::{InkscapePath, INGEST_TOL_REL};
use crate::point::{Point2, Rect};
use crate::render::{Primitive, RenderDoc, Shape};

/// Affine map `(x, y) -> (a x + c y + e, b x + d y + f)`, SVG's matrix order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
        e: 0.0,
        f: 0.0,
    };

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.a * p.x + self.c * p.y + self.e,
            self.b * p.x + self.d * p.y + self.f,
        )
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn then_inner(&self, inner: &Affine) -> Affine {
        Affine {
            a: self.a * inner.a + self.c * inner.b,
            b: self.b * inner.a + self.d * inner.b,
            c: self.a * inner.c + self.c * inner.d,
            d: self.b * inner.c + self.d * inner.d,
            e: self.a * inner.e + self.c * inner.f + self.e,
            f: self.b * inner.e + self.d * inner.f + self.f,
        }
    }

    pub fn parse(s: &str) -> Result<Affine> {
        let t: svgtypes::Transform = s
            .parse()
            .map_err(|e| Error::Svg(format!("bad transform '{s}': {e}")))?;
        Ok(Affine {
            a: t.a,
            b: t.b,
            c: t.c,
            d: t.d,
            e: t.e,
            f: t.f,
        })
    }
}

/// Path data together with the accumulated transform of its element.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgPathSpec {
    pub d: String,
    pub transform: Affine,
}

/// Reads the first path element of the file, or the one with the given id.
pub fn read_svg(path: &Path, id: Option<&str>) -> Result<InkscapePath> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_svg(&text, id)
}

pub fn parse_svg(text: &str, id: Option<&str>) -> Result<InkscapePath> {
    let spec = find_path(text, id)?;
    parse_path_data(&spec.d, &spec.transform)
}

/// Locates the knot path and composes the transforms of its ancestors.
pub fn find_path(text: &str, id: Option<&str>) -> Result<SvgPathSpec> {
    let doc = roxmltree::Document::parse(text).map_err(|e| {
        let pos = e.pos();
        Error::Svg(format!("line {} column {}: {e}", pos.row, pos.col))
    })?;
    let node = doc
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "path")
        .find(|n| id.is_none_or(|want| n.attribute("id") == Some(want)))
        .ok_or_else(|| Error::NoPathFound {
            id: id.map(str::to_string),
        })?;
    let mut transform = Affine::IDENTITY;
    for el in node.ancestors().filter(|n| n.is_element()) {
        if el.attribute("clip-path").is_some() || el.attribute("mask").is_some() {
            log::warn!("ignoring clip-path/mask on <{}>", el.tag_name().name());
        }
        if let Some(t) = el.attribute("transform") {
            transform = Affine::parse(t)?.then_inner(&transform);
        }
    }
    let d = node
        .attribute("d")
        .ok_or_else(|| Error::Svg("path element has no 'd' attribute".into()))?;
    Ok(SvgPathSpec {
        d: d.to_string(),
        transform,
    })
}

/// Parses a single closed subpath of M/C/L/H/V/Z commands (either case).
/// Straight pieces become cubics with handles at one and two thirds.
pub fn parse_path_data(d: &str, transform: &Affine) -> Result<InkscapePath> {
    let mut pts: Vec<Point2> = Vec::new();
    let mut current = Point2::ZERO;
    let mut start = Point2::ZERO;
    let mut closed = false;
    for seg in PathParser::from(d) {
        let seg = seg.map_err(|e| Error::MalformedPath(format!("path data: {e}")))?;
        if closed {
            return Err(Error::MalformedPath(
                "path has more than one subpath".into(),
            ));
        }
        let rel = |abs: bool, x: f64, y: f64, cur: Point2| {
            if abs {
                Point2::new(x, y)
            } else {
                cur + Point2::new(x, y)
            }
        };
        match seg {
            PathSegment::MoveTo { abs, x, y } => {
                if !pts.is_empty() {
                    return Err(Error::MalformedPath(
                        "path has more than one subpath".into(),
                    ));
                }
                current = rel(abs, x, y, current);
                start = current;
                pts.push(current);
            }
            PathSegment::CurveTo {
                abs,
                x1,
                y1,
                x2,
                y2,
                x,
                y,
            } => {
                need_start(&pts)?;
                let h1 = rel(abs, x1, y1, current);
                let h2 = rel(abs, x2, y2, current);
                current = rel(abs, x, y, current);
                pts.extend([h1, h2, current]);
            }
            PathSegment::LineTo { abs, x, y } => {
                need_start(&pts)?;
                let to = rel(abs, x, y, current);
                push_line(&mut pts, current, to);
                current = to;
            }
            PathSegment::HorizontalLineTo { abs, x } => {
                need_start(&pts)?;
                let to = Point2::new(if abs { x } else { current.x + x }, current.y);
                push_line(&mut pts, current, to);
                current = to;
            }
            PathSegment::VerticalLineTo { abs, y } => {
                need_start(&pts)?;
                let to = Point2::new(current.x, if abs { y } else { current.y + y });
                push_line(&mut pts, current, to);
                current = to;
            }
            PathSegment::ClosePath { .. } => {
                need_start(&pts)?;
                closed = true;
            }
            PathSegment::SmoothCurveTo { abs, .. } => {
                return Err(Error::UnsupportedCommand(cmd('S', abs)))
            }
            PathSegment::Quadratic { abs, .. } => {
                return Err(Error::UnsupportedCommand(cmd('Q', abs)))
            }
            PathSegment::SmoothQuadratic { abs, .. } => {
                return Err(Error::UnsupportedCommand(cmd('T', abs)))
            }
            PathSegment::EllipticalArc { abs, .. } => {
                return Err(Error::UnsupportedCommand(cmd('A', abs)))
            }
        }
    }
    need_start(&pts)?;
    let diag = Rect::from_points(pts.iter().copied())
        .map(|r| r.diagonal())
        .unwrap_or(0.0);
    let gap = current.distance(start);
    let tol = INGEST_TOL_REL * diag;
    if gap > tol {
        if !closed {
            return Err(Error::OpenPath { gap });
        }
        push_line(&mut pts, current, start);
    } else {
        *pts.last_mut().unwrap() = start;
    }
    let pts = pts.into_iter().map(|p| transform.apply(p)).collect();
    InkscapePath::new(pts)
}

fn cmd(c: char, abs: bool) -> char {
    if abs {
        c
    } else {
        c.to_ascii_lowercase()
    }
}

fn need_start(pts: &[Point2]) -> Result<()> {
    if pts.is_empty() {
        Err(Error::MalformedPath(
            "path data must start with a moveto".into(),
        ))
    } else {
        Ok(())
    }
}

fn push_line(pts: &mut Vec<Point2>, from: Point2, to: Point2) {
    pts.extend([from.lerp(to, 1.0 / 3.0), from.lerp(to, 2.0 / 3.0), to]);
}

/// Serializes a document as standalone SVG 1.1. The output depends only on
/// the document, so equal documents give equal bytes.
pub fn to_svg_string(doc: &RenderDoc) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let Some(bounds) = doc.bounds() else {
        s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"/>\n");
        return s;
    };
    let view = bounds.inflate(doc.margin);
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        g6(view.width()),
        g6(view.height()),
        g6(view.min.x),
        g6(view.min.y),
        g6(view.width()),
        g6(view.height())
    )
    .unwrap();
    if let Some(bg) = &doc.background {
        writeln!(
            s,
            "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            g6(view.min.x),
            g6(view.min.y),
            g6(view.width()),
            g6(view.height()),
            escape(bg)
        )
        .unwrap();
    }
    for p in &doc.primitives {
        write_primitive(&mut s, p);
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(doc: &RenderDoc, path: &Path) -> Result<()> {
    std::fs::write(path, to_svg_string(doc)).map_err(|e| Error::io(path, e))
}

fn write_primitive(s: &mut String, p: &Primitive) {
    let mut attrs = String::new();
    if let Some(id) = &p.id {
        write!(attrs, " id=\"{}\"", escape(id)).unwrap();
    }
    if !p.class.is_empty() {
        write!(attrs, " class=\"{}\"", escape(&p.class)).unwrap();
    }
    let st = &p.style;
    write!(
        attrs,
        " fill=\"{}\"",
        escape(st.fill.as_deref().unwrap_or("none"))
    )
    .unwrap();
    if let Some(stroke) = &st.stroke {
        write!(
            attrs,
            " stroke=\"{}\" stroke-width=\"{}\"",
            escape(stroke),
            g6(st.stroke_width)
        )
        .unwrap();
    }
    match &p.shape {
        Shape::Path { segments, closed } => {
            let mut d = String::new();
            if let Some(first) = segments.first() {
                write!(d, "M {},{}", g6(first.p0.x), g6(first.p0.y)).unwrap();
                for seg in segments {
                    write!(
                        d,
                        " C {},{} {},{} {},{}",
                        g6(seg.p1.x),
                        g6(seg.p1.y),
                        g6(seg.p2.x),
                        g6(seg.p2.y),
                        g6(seg.p3.x),
                        g6(seg.p3.y)
                    )
                    .unwrap();
                }
                if *closed {
                    d.push_str(" Z");
                }
            }
            writeln!(s, "  <path{attrs} stroke-linecap=\"butt\" d=\"{d}\"/>").unwrap();
        }
        Shape::Circle { center, radius } => {
            writeln!(
                s,
                "  <circle{attrs} cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                g6(center.x),
                g6(center.y),
                g6(*radius)
            )
            .unwrap();
        }
        Shape::Line { from, to } => {
            writeln!(
                s,
                "  <line{attrs} x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                g6(from.x),
                g6(from.y),
                g6(to.x),
                g6(to.y)
            )
            .unwrap();
        }
        Shape::Text { at, text, size } => {
            writeln!(
                s,
                "  <text{attrs} x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"sans-serif\" text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>",
                g6(at.x),
                g6(at.y),
                g6(*size),
                escape(text)
            )
            .unwrap();
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
