//! SVG output: one user unit per plane unit, origin at the centre, y up.

use std::fmt::Write;

use smocking::analysis::format_number;
use smocking::metric::Path;
use smocking::Pattern;

const STITCH_WIDTH: f64 = 0.18;
const HOP_WIDTH: f64 = 0.07;

pub fn svg(pattern: &Pattern, path: Option<&Path>) -> String {
    let mut half: f64 = 1.0;
    for s in pattern.stitches() {
        for p in [s.segment.start, s.segment.end] {
            half = half.max(p.x.abs()).max(p.y.abs());
        }
    }
    if let Some(path) = path {
        for s in &path.segments {
            for p in [s.start, s.end] {
                half = half.max(p.x.abs()).max(p.y.abs());
            }
        }
    }
    half = (half + 1.0).ceil();
    let n = format_number;
    let side = 2.0 * half;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        n(-half),
        n(-half),
        n(side),
        n(side),
        n(side * 20.0),
        n(side * 20.0)
    );
    out.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"4\" ",
        "markerHeight=\"4\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#c0392b\"/>",
        "</marker></defs>\n"
    ));
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    let _ = writeln!(
        out,
        r##"<line class="axis" x1="{}" y1="0" x2="{}" y2="0" stroke="#dddddd" stroke-width="0.03"/>"##,
        n(-half),
        n(half)
    );
    let _ = writeln!(
        out,
        r##"<line class="axis" x1="0" y1="{}" x2="0" y2="{}" stroke="#dddddd" stroke-width="0.03"/>"##,
        n(-half),
        n(half)
    );
    for s in pattern.stitches() {
        let _ = writeln!(
            out,
            r#"<line class="stitch" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{}" stroke-linecap="round"/>"#,
            n(s.segment.start.x),
            n(s.segment.start.y),
            n(s.segment.end.x),
            n(s.segment.end.y),
            n(STITCH_WIDTH)
        );
    }
    if let Some(path) = path {
        for s in &path.segments {
            let _ = writeln!(
                out,
                r##"<polyline class="hop" points="{},{} {},{}" fill="none" stroke="#c0392b" stroke-width="{}" marker-end="url(#arrow)"/>"##,
                n(s.start.x),
                n(s.start.y),
                n(s.end.x),
                n(s.end.y),
                n(HOP_WIDTH)
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
