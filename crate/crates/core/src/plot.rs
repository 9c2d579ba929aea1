//! Planar pictures of three-vertex polytopes. The third coordinate is
//! `1 − ρ₁ − ρ₂`, so dropping it loses nothing.

use std::fmt::Write;

use crate::enumeration::PolytopeResult;
use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64};

fn require_three(result: &PolytopeResult) -> Result<()> {
    if result.rho0.dim() != 3 {
        return Err(Error::Precondition("planar projection needs three vertices".into()));
    }
    Ok(())
}

/// Vertex indices in counter-clockwise order around the centroid.
fn boundary_order(coords: &[(f64, f64)]) -> Vec<usize> {
    let (cx, cy) = coords.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let m = coords.len().max(1) as f64;
    let (cx, cy) = (cx / m, cy / m);
    let mut idx: Vec<usize> = (0..coords.len()).collect();
    idx.sort_by(|&a, &b| {
        let ta = (coords[a].1 - cy).atan2(coords[a].0 - cx);
        let tb = (coords[b].1 - cy).atan2(coords[b].0 - cx);
        ta.total_cmp(&tb)
    });
    idx
}

/// `rho1,rho2,sequence,kind`, vertices in boundary order.
pub fn projection_csv(result: &PolytopeResult) -> Result<String> {
    require_three(result)?;
    let coords: Vec<(f64, f64)> = result
        .vertices
        .iter()
        .map(|v| (to_f64(v.point.get(1)), to_f64(v.point.get(2))))
        .collect();
    let mut out = String::from("rho1,rho2,sequence,kind\n");
    for i in boundary_order(&coords) {
        let v = &result.vertices[i];
        let kind = v
            .kind
            .map(|k| {
                serde_json::to_value(k)
                    .expect("kind")
                    .as_str()
                    .unwrap_or_default()
                    .to_string()
            })
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            format_rational(v.point.get(1)),
            format_rational(v.point.get(2)),
            v.sequence,
            kind
        )
        .expect("string write");
    }
    Ok(out)
}

/// Filled hull in the `(ρ₁, ρ₂)` plane with labeled vertices.
pub fn hull_svg(result: &PolytopeResult) -> Result<String> {
    require_three(result)?;
    const SIZE: f64 = 420.0;
    const PAD: f64 = 40.0;
    let coords: Vec<(f64, f64)> = result
        .vertices
        .iter()
        .map(|v| (to_f64(v.point.get(1)), to_f64(v.point.get(2))))
        .collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &coords {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let map = |(x, y): (f64, f64)| -> (f64, f64) {
        (
            PAD + (x - lo_x) / span * (SIZE - 2.0 * PAD),
            SIZE - PAD - (y - lo_y) / span * (SIZE - 2.0 * PAD),
        )
    };
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
    )
    .expect("string write");
    let order = boundary_order(&coords);
    let poly: Vec<String> = order
        .iter()
        .map(|&i| {
            let (x, y) = map(coords[i]);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    writeln!(
        svg,
        r##"<polygon points="{}" fill="#cfe0f3" stroke="#1f4e79" stroke-width="1.5"/>"##,
        poly.join(" ")
    )
    .expect("string write");
    for (i, v) in result.vertices.iter().enumerate() {
        let (x, y) = map(coords[i]);
        let label = if v.sequence.is_empty() {
            "ρ₀".to_string()
        } else {
            v.sequence.to_string()
        };
        writeln!(svg, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#1f4e79"/>"##).expect("string write");
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{label}</text>"#,
            x + 6.0,
            y - 6.0
        )
        .expect("string write");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
