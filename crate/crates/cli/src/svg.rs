//! SVG 1.1 figures of planar bodies.
//!
//! The region is intersected with the window exactly (H-representation of the
//! body, cut by the window box, vertices enumerated), so every drawn point is
//! an exact rational before it is formatted by [`decimal`]. Edges where the
//! window cuts the body off are drawn with a hatched stroke.

use std::fmt::Write;

use nobodies::poly::{enumerate_v_rep, project_onto, Constraint, HPolyhedron, VPolyhedron, VRepOutcome};
use nobodies::{Rational, Scalar};
use num_traits::{One, Signed, Zero};

use crate::error::{CliError, Result};
use crate::exact::{decimal, format_rational};
use crate::job::Window;
use crate::run::Figure;

const WIDTH: i64 = 640;
const HEIGHT: i64 = 480;
const MARGIN: i64 = 48;

type Point = [Rational; 2];

pub fn render_svg(figure: &Figure, window: &Window) -> Result<String> {
    if window.is_empty() {
        return Err(CliError::WindowEmpty(format!(
            "[{}, {}] × [{}, {}]",
            window.x.0, window.x.1, window.y.0, window.y.1
        )));
    }
    let (region, labels) = match figure {
        Figure::Body(b) => (
            Some(b.to_v_polyhedron()),
            b.boundary().breakpoints().iter().map(|(t, y)| [t.clone(), y.clone()]).collect(),
        ),
        Figure::Polygon(v) => (Some(v.clone()), v.vertices().iter().map(|p| [p[0].clone(), p[1].clone()]).collect()),
        Figure::Empty => (None, Vec::new()),
    };
    let canvas = Canvas::new(window);
    let mut out = String::new();
    canvas.header(&mut out);
    if let Some(v) = region {
        if v.dimension() != 2 {
            return Err(CliError::schema("figure", format!("cannot draw a {}-dimensional body", v.dimension())));
        }
        let h = h_representation(&v)?;
        let clipped = clip(&h, window)?;
        canvas.region(&mut out, &clipped, &h);
    }
    canvas.axes(&mut out);
    canvas.labels(&mut out, &labels);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Default window: the labelled points and the origin, padded by 1.
pub fn default_window(figure: &Figure) -> Window {
    let pts: Vec<Point> = match figure {
        Figure::Body(b) => b.to_v_polyhedron().vertices().iter().map(|p| [p[0].clone(), p[1].clone()]).collect(),
        Figure::Polygon(v) => v.vertices().iter().map(|p| [p[0].clone(), p[1].clone()]).collect(),
        Figure::Empty => Vec::new(),
    };
    let zero = Rational::zero();
    let lo = |i: usize| pts.iter().map(|p| p[i].clone()).fold(zero.clone(), |a, b| a.min(b)).floor() - Rational::one();
    let hi = |i: usize| pts.iter().map(|p| p[i].clone()).fold(zero.clone(), |a, b| a.max(b)).ceil() + Rational::from_i64(2);
    Window::new(lo(0), hi(0), lo(1), hi(1))
}

/// `{(x, y)}` of `conv(V) + cone(R)` by projecting the coefficient polyhedron.
fn h_representation(v: &VPolyhedron<Rational>) -> Result<HPolyhedron<Rational>> {
    let (k, r) = (v.vertices().len(), v.rays().len());
    let n = 2 + k + r;
    let mut p = HPolyhedron::universe(n);
    for j in 2..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        p.push(Constraint::new(e, Rational::zero()))?;
    }
    let mut sum = vec![Rational::zero(); n];
    for s in &mut sum[2..2 + k] {
        *s = Rational::one();
    }
    p.push_equality(sum, Rational::one())?;
    for axis in 0..2 {
        let mut row = vec![Rational::zero(); n];
        row[axis] = -Rational::one();
        for (j, x) in v.vertices().iter().chain(v.rays()).enumerate() {
            row[2 + j] = x[axis].clone();
        }
        p.push_equality(row, Rational::zero())?;
    }
    Ok(project_onto(&p, &[0, 1])?)
}

/// Vertices of `h ∩ window`, counter-clockwise.
fn clip(h: &HPolyhedron<Rational>, w: &Window) -> Result<Vec<Point>> {
    let boxed = h.intersect(&HPolyhedron::cube(
        &[w.x.0.clone(), w.y.0.clone()],
        &[w.x.1.clone(), w.y.1.clone()],
    ))?;
    let pts: Vec<Point> = match enumerate_v_rep(&boxed)? {
        VRepOutcome::Empty { .. } => return Ok(Vec::new()),
        VRepOutcome::Polyhedron(v) => v.vertices().iter().map(|p| [p[0].clone(), p[1].clone()]).collect(),
    };
    Ok(counter_clockwise(pts))
}

fn counter_clockwise(mut pts: Vec<Point>) -> Vec<Point> {
    if pts.len() < 3 {
        return pts;
    }
    let n = Rational::from_i64(pts.len() as i64);
    let c = [
        pts.iter().fold(Rational::zero(), |s, p| s + &p[0]) / &n,
        pts.iter().fold(Rational::zero(), |s, p| s + &p[1]) / &n,
    ];
    let half = |d: &Point| d[1].is_negative() || (d[1].is_zero() && d[0].is_negative());
    pts.sort_by(|a, b| {
        let da = [a[0].clone() - &c[0], a[1].clone() - &c[1]];
        let db = [b[0].clone() - &c[0], b[1].clone() - &c[1]];
        half(&da).cmp(&half(&db)).then_with(|| {
            let cross = da[0].clone() * &db[1] - da[1].clone() * &db[0];
            Rational::zero().cmp(&cross)
        })
    });
    pts
}

struct Canvas<'a> {
    w: &'a Window,
}

impl<'a> Canvas<'a> {
    fn new(w: &'a Window) -> Self {
        Canvas { w }
    }

    fn px(&self, x: &Rational) -> Rational {
        Rational::from_i64(MARGIN) + (x.clone() - &self.w.x.0) * Rational::from_i64(WIDTH) / (self.w.x.1.clone() - &self.w.x.0)
    }

    fn py(&self, y: &Rational) -> Rational {
        Rational::from_i64(MARGIN) + (self.w.y.1.clone() - y) * Rational::from_i64(HEIGHT) / (self.w.y.1.clone() - &self.w.y.0)
    }

    fn xy(&self, p: &Point) -> String {
        format!("{},{}", decimal(&self.px(&p[0])), decimal(&self.py(&p[1])))
    }

    fn inside(&self, p: &Point) -> bool {
        self.w.x.0 <= p[0] && p[0] <= self.w.x.1 && self.w.y.0 <= p[1] && p[1] <= self.w.y.1
    }

    fn header(&self, out: &mut String) {
        let (w, h) = (WIDTH + 2 * MARGIN, HEIGHT + 2 * MARGIN);
        let _ = write!(
            out,
            concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
                "  <defs>\n",
                "    <pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\" patternTransform=\"rotate(45)\">\n",
                "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#1f4e79\" stroke-width=\"2\"/>\n",
                "    </pattern>\n",
                "  </defs>\n",
                "  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            ),
            w = w,
            h = h
        );
    }

    /// Filled polygon, solid edges on the body's boundary, hatched edges where the window truncates it.
    fn region(&self, out: &mut String, poly: &[Point], body: &HPolyhedron<Rational>) {
        if poly.is_empty() {
            return;
        }
        let pts: Vec<String> = poly.iter().map(|p| self.xy(p)).collect();
        let _ = writeln!(
            out,
            "  <polygon points=\"{}\" fill=\"#9dc3e6\" fill-opacity=\"0.6\" stroke=\"none\"/>",
            pts.join(" ")
        );
        if poly.len() < 2 {
            return;
        }
        for i in 0..poly.len() {
            let (a, b) = (&poly[i], &poly[(i + 1) % poly.len()]);
            if poly.len() == 2 && i == 1 {
                break;
            }
            let style = if self.truncated(a, b, body) {
                "stroke=\"url(#hatch)\" stroke-width=\"8\""
            } else {
                "stroke=\"#1f4e79\" stroke-width=\"2\""
            };
            let _ = writeln!(
                out,
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {style}/>",
                decimal(&self.px(&a[0])),
                decimal(&self.py(&a[1])),
                decimal(&self.px(&b[0])),
                decimal(&self.py(&b[1]))
            );
        }
    }

    /// An edge on a window side across which the body continues.
    fn truncated(&self, a: &Point, b: &Point, body: &HPolyhedron<Rational>) -> bool {
        let w = self.w;
        let step = |lo: &Rational, hi: &Rational| (hi.clone() - lo) / Rational::from_i64(1_000_000_000);
        let mid = [(a[0].clone() + &b[0]) / Rational::from_i64(2), (a[1].clone() + &b[1]) / Rational::from_i64(2)];
        let sides = [
            (a[0] == w.x.0 && b[0] == w.x.0, [-step(&w.x.0, &w.x.1), Rational::zero()]),
            (a[0] == w.x.1 && b[0] == w.x.1, [step(&w.x.0, &w.x.1), Rational::zero()]),
            (a[1] == w.y.0 && b[1] == w.y.0, [Rational::zero(), -step(&w.y.0, &w.y.1)]),
            (a[1] == w.y.1 && b[1] == w.y.1, [Rational::zero(), step(&w.y.0, &w.y.1)]),
        ];
        sides.iter().any(|(on, d)| {
            *on && body.contains(&[mid[0].clone() + &d[0], mid[1].clone() + &d[1]])
        })
    }

    /// Coordinate axes through the origin (or along the window edge when the
    /// origin is outside), with the window bounds as tick labels.
    fn axes(&self, out: &mut String) {
        let w = self.w;
        let clamp = |v: Rational, lo: &Rational, hi: &Rational| v.max(lo.clone()).min(hi.clone());
        let x_axis_y = clamp(Rational::zero(), &w.y.0, &w.y.1);
        let y_axis_x = clamp(Rational::zero(), &w.x.0, &w.x.1);
        let (ay, ax) = (decimal(&self.py(&x_axis_y)), decimal(&self.px(&y_axis_x)));
        let (l, r) = (decimal(&self.px(&w.x.0)), decimal(&self.px(&w.x.1)));
        let (b, t) = (decimal(&self.py(&w.y.0)), decimal(&self.py(&w.y.1)));
        let _ = writeln!(out, "  <g stroke=\"black\" stroke-width=\"1\">");
        let _ = writeln!(out, "    <line x1=\"{l}\" y1=\"{ay}\" x2=\"{r}\" y2=\"{ay}\"/>");
        let _ = writeln!(out, "    <line x1=\"{ax}\" y1=\"{b}\" x2=\"{ax}\" y2=\"{t}\"/>");
        let _ = writeln!(out, "  </g>");
        let _ = writeln!(out, "  <g font-family=\"monospace\" font-size=\"11\" fill=\"black\">");
        let ticks = [
            (&l, &ay, "start", &w.x.0),
            (&r, &ay, "end", &w.x.1),
        ];
        for (x, y, anchor, v) in ticks {
            let _ = writeln!(
                out,
                "    <text x=\"{x}\" y=\"{y}\" dy=\"14\" text-anchor=\"{anchor}\">{}</text>",
                escape(&format_rational(v))
            );
        }
        for (y, v) in [(&b, &w.y.0), (&t, &w.y.1)] {
            let _ = writeln!(
                out,
                "    <text x=\"{ax}\" y=\"{y}\" dx=\"-4\" text-anchor=\"end\">{}</text>",
                escape(&format_rational(v))
            );
        }
        let _ = writeln!(out, "  </g>");
    }

    /// Breakpoints inside the window, marked and labelled `(p/q, p/q)`.
    fn labels(&self, out: &mut String, points: &[Point]) {
        let visible: Vec<&Point> = points.iter().filter(|p| self.inside(p)).collect();
        if visible.is_empty() {
            return;
        }
        let _ = writeln!(out, "  <g font-family=\"monospace\" font-size=\"12\" fill=\"#c00000\">");
        for p in visible {
            let (x, y) = (decimal(&self.px(&p[0])), decimal(&self.py(&p[1])));
            let label = format!("({}, {})", format_rational(&p[0]), format_rational(&p[1]));
            let _ = writeln!(out, "    <circle cx=\"{x}\" cy=\"{y}\" r=\"3\"/>");
            let _ = writeln!(out, "    <text x=\"{x}\" y=\"{y}\" dx=\"6\" dy=\"-6\">{}</text>", escape(&label));
        }
        let _ = writeln!(out, "  </g>");
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
