//! SVG 1.1 snapshots of 2D bodies. The viewport is the fixed square
//! [-(d+0.1), d+0.1]^2 so that a whole positioned family renders in a
//! stable frame; the endpoint balls are drawn as context outlines.

use crate::bodies::ConvexBody;
use crate::distance::PositionedPair;
use crate::error::{Error, Result};

const CANVAS: f64 = 560.0;

/// Boundary polyline of a 2D body: exact vertices for polygons, sampled
/// boundary points for gauge bodies.
fn outline(body: &ConvexBody, samples: usize) -> Result<Vec<[f64; 2]>> {
    if body.dim() != 2 {
        return Err(Error::input("svg rendering is 2-dimensional"));
    }
    if let Some(p) = body.as_polygon() {
        return Ok(p.vertices_f64().to_vec());
    }
    let mut pts = Vec::with_capacity(samples);
    for k in 0..samples {
        let theta = std::f64::consts::TAU * k as f64 / samples as f64;
        let dir = [theta.cos(), theta.sin()];
        let g = body.gauge_unchecked(&dir);
        if g <= 0.0 {
            return Err(Error::input("degenerate body"));
        }
        pts.push([dir[0] / g, dir[1] / g]);
    }
    Ok(pts)
}

fn path_data(points: &[[f64; 2]], to_px: impl Fn([f64; 2]) -> (f64, f64)) -> String {
    let mut out = String::with_capacity(points.len() * 16);
    for (i, p) in points.iter().enumerate() {
        let (x, y) = to_px(*p);
        if i == 0 {
            out.push_str(&format!("M {x:.3} {y:.3}"));
        } else {
            out.push_str(&format!(" L {x:.3} {y:.3}"));
        }
    }
    out.push_str(" Z");
    out
}

/// Render `body` with the positioned pair as context. `label` is drawn in
/// the corner (typically the lambda value).
pub fn render_with_context(
    body: &ConvexBody,
    pair: Option<&PositionedPair>,
    label: &str,
) -> Result<String> {
    let d = pair.map(|p| p.d).unwrap_or(1.0);
    let half = d + 0.1;
    let to_px = |p: [f64; 2]| -> (f64, f64) {
        (
            (p[0] + half) / (2.0 * half) * CANVAS,
            (half - p[1]) / (2.0 * half) * CANVAS,
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    // Axes.
    let (ox, oy) = to_px([0.0, 0.0]);
    svg.push_str(&format!(
        "<line x1=\"0\" y1=\"{oy:.3}\" x2=\"{CANVAS}\" y2=\"{oy:.3}\" stroke=\"#dddddd\"/>\n\
         <line x1=\"{ox:.3}\" y1=\"0\" x2=\"{ox:.3}\" y2=\"{CANVAS}\" stroke=\"#dddddd\"/>\n"
    ));

    if let Some(pair) = pair {
        let pe = outline(&pair.ball_e, 256)?;
        svg.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"#2166ac\" stroke-width=\"1.4\" \
             stroke-dasharray=\"6 4\"/>\n",
            path_data(&pe, to_px)
        ));
        let pf = outline(&pair.ball_f, 256)?;
        svg.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"#7f7f7f\" stroke-width=\"1.4\" \
             stroke-dasharray=\"2 3\"/>\n",
            path_data(&pf, to_px)
        ));
    }

    let pb = outline(body, 512)?;
    svg.push_str(&format!(
        "<path d=\"{}\" fill=\"#fdb86388\" stroke=\"#d94801\" stroke-width=\"2\"/>\n",
        path_data(&pb, to_px)
    ));

    if !label.is_empty() {
        svg.push_str(&format!(
            "<text x=\"12\" y=\"24\" font-family=\"monospace\" font-size=\"16\" \
             fill=\"#333333\">{label}</text>\n"
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
