//! Static SVG figure of a decomposition: the input body with its
//! triangulation on a dotted lattice, and below it the signed atoms of the
//! normal form.

use std::fmt::Write;

use crate::geometry::{LatticeBody, LatticePoint};
use crate::pipeline::DecompositionReport;

/// Pixels per lattice unit.
pub const UNIT: i64 = 32;
const MARGIN: i64 = 24;
const LABEL_W: i64 = 56;
const DOT_R: f64 = 2.5;

struct Frame {
    origin_x: i64,
    origin_y: i64,
    lo: LatticePoint,
    hi: LatticePoint,
}

impl Frame {
    fn map(&self, p: LatticePoint) -> (i64, i64) {
        (self.origin_x + (p.x - self.lo.x) * UNIT, self.origin_y + (self.hi.y - p.y) * UNIT)
    }

    fn width(&self) -> i64 {
        (self.hi.x - self.lo.x) * UNIT
    }

    fn height(&self) -> i64 {
        (self.hi.y - self.lo.y) * UNIT
    }
}

fn points_attr(frame: &Frame, pts: &[LatticePoint]) -> String {
    pts.iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x},{y}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn dots(out: &mut String, frame: &Frame) {
    for y in (frame.lo.y..=frame.hi.y).rev() {
        for x in frame.lo.x..=frame.hi.x {
            let (cx, cy) = frame.map(LatticePoint::new(x, y));
            let _ = writeln!(out, r##"<circle class="lattice" cx="{cx}" cy="{cy}" r="{DOT_R}" fill="#000"/>"##);
        }
    }
}

fn shape(out: &mut String, frame: &Frame, body: &LatticeBody, class: &str, fill: &str) {
    let pts = points_attr(frame, body.vertices());
    match body.vertices().len() {
        1 => {
            let (cx, cy) = frame.map(body.vertices()[0]);
            let _ = writeln!(out, r##"<circle class="{class}" cx="{cx}" cy="{cy}" r="4" fill="#000"/>"##);
        }
        2 => {
            let _ = writeln!(
                out,
                r##"<polyline class="{class}" points="{pts}" fill="none" stroke="#000" stroke-width="3"/>"##
            );
        }
        _ => {
            let _ = writeln!(
                out,
                r##"<polygon class="{class}" points="{pts}" fill="{fill}" stroke="#000" stroke-width="1.5"/>"##
            );
        }
    }
}

pub fn render_svg(report: &DecompositionReport) -> String {
    let body = &report.input;
    let (mut lo, mut hi) = body.bounding_box();
    // at least one unit in each direction so degenerate bodies stay visible
    hi = LatticePoint::new(hi.x.max(lo.x + 1), hi.y.max(lo.y + 1));
    lo = LatticePoint::new(lo.x, lo.y);
    let main = Frame { origin_x: MARGIN, origin_y: MARGIN, lo, hi };

    let mut body_svg = String::new();
    dots(&mut body_svg, &main);
    let outline = points_attr(&main, body.vertices());
    let closed = if body.vertices().len() > 2 { " Z" } else { "" };
    let _ = writeln!(
        body_svg,
        r##"<path class="body" d="M {}{closed}" fill="#d9d9d9" stroke="#000" stroke-width="2"/>"##,
        outline.replace(' ', " L ")
    );
    if let Some(part) = &report.triangulation {
        for i in 0..part.cells().len() {
            shape(&mut body_svg, &main, &part.cell_body(i), "cell", "none");
        }
    }

    // atom row
    let row_top = main.origin_y + main.height() + 2 * MARGIN;
    let mut x = MARGIN;
    let mut row_h = UNIT;
    let mut row_svg = String::new();
    let nf = &report.normal_form;
    let _ = writeln!(
        row_svg,
        r#"<text class="translation" x="{x}" y="{}" font-family="sans-serif" font-size="14">t = ({}, {})</text>"#,
        row_top + 14,
        nf.t.x,
        nf.t.y
    );
    x += 2 * LABEL_W;
    for (atom, k) in nf.atoms() {
        let ab = atom.body();
        let (alo, mut ahi) = ab.bounding_box();
        ahi = LatticePoint::new(ahi.x.max(alo.x + 1), ahi.y.max(alo.y + 1));
        let sign = if k < 0 { '\u{2212}' } else { '+' };
        let label = if k.abs() == 1 { sign.to_string() } else { format!("{sign}{}", k.abs()) };
        let frame = Frame { origin_x: x + LABEL_W, origin_y: row_top, lo: alo, hi: ahi };
        let _ = writeln!(
            row_svg,
            r#"<text class="coefficient" x="{x}" y="{}" font-family="sans-serif" font-size="16">{label}</text>"#,
            row_top + frame.height() / 2 + 6
        );
        dots(&mut row_svg, &frame);
        shape(&mut row_svg, &frame, &ab, "atom", "#d9d9d9");
        row_h = row_h.max(frame.height());
        x = frame.origin_x + frame.width() + MARGIN;
    }

    let width = (main.origin_x + main.width() + MARGIN).max(x);
    let height = row_top + row_h + MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" width="{width}" height="{height}">"#
    );
    out.push_str(&body_svg);
    out.push_str(&row_svg);
    out.push_str("</svg>\n");
    out
}
