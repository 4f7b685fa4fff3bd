//! Deterministic SVG rendering of planar base diagrams.

use std::fmt::Write;

use num_traits::Zero;
use thiserror::Error;

use crate::atf::AtfDiagram;
use crate::polytope::{chambers_2d, vertices_2d, Point2, PolytopeError};
use crate::rational::{to_decimal, Rational};

/// Fractional digits of every emitted coordinate.
pub const DIGITS: usize = 20;

const MARGIN: i64 = 20;
const CROSS: i64 = 5;
const CHAMBER_FILLS: [&str; 4] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("diagram is unbounded")]
    Unbounded,
    #[error("image dimensions must be positive")]
    BadSize,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub chambers: bool,
    pub nodes: bool,
    pub vertex_labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { width: 400, height: 400, chambers: false, nodes: true, vertex_labels: false }
    }
}

struct Frame {
    min: Point2,
    max_y: Rational,
    scale: Rational,
    margin: Rational,
}

impl Frame {
    fn new(points: &[Point2], opts: &RenderOptions) -> Frame {
        let min_x = points.iter().map(|p| &p[0]).min().expect("nonempty").clone();
        let max_x = points.iter().map(|p| &p[0]).max().expect("nonempty").clone();
        let min_y = points.iter().map(|p| &p[1]).min().expect("nonempty").clone();
        let max_y = points.iter().map(|p| &p[1]).max().expect("nonempty").clone();
        let margin = Rational::from_integer(MARGIN.into());
        let avail = |px: u32| Rational::from_integer(px.into()) - &margin * Rational::from_integer(2.into());
        let fit = |avail: Rational, span: Rational| if span.is_zero() { None } else { Some(avail / span) };
        let sx = fit(avail(opts.width), &max_x - &min_x);
        let sy = fit(avail(opts.height), &max_y - &min_y);
        let scale = match (sx, sy) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => Rational::from_integer(1.into()),
        };
        Frame { min: [min_x, min_y], max_y, scale, margin }
    }

    fn map(&self, p: &Point2) -> Point2 {
        [&self.margin + (&p[0] - &self.min[0]) * &self.scale, &self.margin + (&self.max_y - &p[1]) * &self.scale]
    }
}

fn num(q: &Rational) -> String {
    to_decimal(q, DIGITS)
}

fn points_attr(frame: &Frame, pts: &[Point2]) -> String {
    pts.iter()
        .map(|p| {
            let s = frame.map(p);
            format!("{},{}", num(&s[0]), num(&s[1]))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Outline polygon, one cross per node, a dashed segment per branch cut and,
/// optionally, the chamber triangles.
pub fn render_svg(d: &AtfDiagram, opts: &RenderOptions) -> Result<String, SvgError> {
    if opts.width == 0 || opts.height == 0 {
        return Err(SvgError::BadSize);
    }
    if !d.polytope().is_bounded() {
        return Err(SvgError::Unbounded);
    }
    let poly = vertices_2d(d.polytope())?;
    let frame = Frame::new(poly.vertices(), opts);
    let (w, h) = (opts.width, opts.height);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    if opts.chambers {
        for (i, tri) in chambers_2d(d.polytope())? {
            let fill = CHAMBER_FILLS[i % CHAMBER_FILLS.len()];
            let _ = writeln!(
                out,
                "<polygon class=\"chamber\" data-facet=\"{i}\" points=\"{}\" fill=\"{fill}\" fill-opacity=\"0.3\" stroke=\"none\"/>",
                points_attr(&frame, &tri)
            );
        }
    }
    let _ = writeln!(
        out,
        "<polygon class=\"outline\" points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
        points_attr(&frame, poly.vertices())
    );
    if opts.nodes {
        for i in 0..d.nodes().len() {
            let [a, b] = d.cut_segment(i);
            let (a, b) = (frame.map(&a), frame.map(&b));
            let _ = writeln!(
                out,
                "<line class=\"cut\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>",
                num(&a[0]),
                num(&a[1]),
                num(&b[0]),
                num(&b[1])
            );
        }
        let c = Rational::from_integer(CROSS.into());
        for n in d.nodes() {
            let p = frame.map(&n.position);
            let (x0, x1) = (num(&(&p[0] - &c)), num(&(&p[0] + &c)));
            let (y0, y1) = (num(&(&p[1] - &c)), num(&(&p[1] + &c)));
            let _ = writeln!(
                out,
                "<path class=\"node\" d=\"M {x0} {y0} L {x1} {y1} M {x0} {y1} L {x1} {y0}\" stroke=\"black\" stroke-width=\"2\"/>"
            );
        }
    }
    if opts.vertex_labels {
        for (i, v) in poly.vertices().iter().enumerate() {
            let p = frame.map(v);
            let _ = writeln!(
                out,
                "<text class=\"vertex-label\" x=\"{}\" y=\"{}\" font-size=\"12\">V{i}</text>",
                num(&p[0]),
                num(&p[1])
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
