//! SVG, OFF and CSV output.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::embedding::{add, cross, dot, norm, normalize, scale, sub, Embedding, Vec3};
use crate::geometry::c_of_gamma;
use crate::mesh::{FaceKind, Tiling};
use crate::{Error, Result};

/// Points sampled along each geodesic edge in the SVG output.
pub const SAMPLES_PER_EDGE: usize = 32;

const SQUARE_FILL: &str = "#b3b3b3";
const RHOMBUS_FILL: &str = "#ffffff";

/// The point opposite the center of the first square, so that square lands
/// in the middle of the picture.
pub fn default_pole(e: &Embedding, t: &Tiling) -> Vec3 {
    let f = (0..t.face_count())
        .find(|&f| t.faces()[f].kind == FaceKind::Square)
        .unwrap_or(0);
    scale(e.face_center(t, f), -1.0)
}

fn slerp(a: Vec3, b: Vec3, s: f64) -> Vec3 {
    let omega = dot(a, b).clamp(-1.0, 1.0).acos();
    if omega < 1e-15 {
        return a;
    }
    let k = omega.sin();
    normalize(add(
        scale(a, ((1.0 - s) * omega).sin() / k),
        scale(b, (s * omega).sin() / k),
    ))
}

struct Projector {
    pole: Vec3,
    u: Vec3,
    v: Vec3,
}

impl Projector {
    fn new(pole: Vec3) -> Self {
        let helper = if pole[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let u = normalize(sub(helper, scale(pole, dot(helper, pole))));
        let v = cross(pole, u);
        Projector { pole, u, v }
    }

    /// Stereographic projection from the pole onto the plane through the
    /// center orthogonal to it.
    fn project(&self, p: Vec3) -> (f64, f64) {
        let d = 1.0 - dot(p, self.pole);
        (dot(p, self.u) / d, -dot(p, self.v) / d)
    }
}

/// Stereographic picture of the tiling: squares shaded, rhombi white, edges
/// drawn as sampled geodesic arcs. `pole` defaults to [`default_pole`].
pub fn export_svg(e: &Embedding, t: &Tiling, pole: Option<Vec3>) -> Result<String> {
    let pole = pole.unwrap_or_else(|| default_pole(e, t));
    if !(norm(pole) > 1e-12) || !pole.iter().all(|c| c.is_finite()) {
        return Err(Error::domain("projection pole must be a nonzero vector"));
    }
    let pole = normalize(pole);
    for (i, p) in e.coordinates.iter().enumerate() {
        if norm(sub(*p, pole)) < 1e-6 {
            return Err(Error::domain(format!(
                "projection pole coincides with vertex {i}"
            )));
        }
    }
    let proj = Projector::new(pole);
    // the face around the pole covers everything outside its boundary
    let outer = (0..t.face_count()).find(|&f| e.face_contains(t, f, pole));

    let mut paths = Vec::new();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for f in 0..t.face_count() {
        let vs = t.face_spec(f).vertices.map(|v| e.coordinates[v]);
        let mut pts = Vec::with_capacity(4 * SAMPLES_PER_EDGE);
        for k in 0..4 {
            for s in 0..SAMPLES_PER_EDGE {
                let p = slerp(vs[k], vs[(k + 1) % 4], s as f64 / SAMPLES_PER_EDGE as f64);
                pts.push(proj.project(p));
            }
        }
        for &(x, y) in &pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        paths.push((f, pts));
    }
    if let Some(o) = outer {
        // its boundary may be far away; frame the remaining faces instead
        let (mut a, mut b, mut c, mut d) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (f, pts) in &paths {
            if *f == o {
                continue;
            }
            for &(x, y) in pts {
                a = a.min(x);
                b = b.max(x);
                c = c.min(y);
                d = d.max(y);
            }
        }
        if a < b {
            (xmin, xmax, ymin, ymax) = (a, b, c, d);
        }
    }
    let pad = 0.05 * (xmax - xmin).max(ymax - ymin);
    let (x0, y0) = (xmin - pad, ymin - pad);
    let (w, h) = (xmax - xmin + 2.0 * pad, ymax - ymin + 2.0 * pad);
    let stroke = 0.002 * w.max(h);

    let fill = |f: usize| match t.faces()[f].kind {
        FaceKind::Square => SQUARE_FILL,
        FaceKind::Rhombus => RHOMBUS_FILL,
    };
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{x0:.6} {y0:.6} {w:.6} {h:.6}" width="800" height="800">"#
    )
    .unwrap();
    if let Some(o) = outer {
        writeln!(
            out,
            r#"  <rect class="{}" data-face="{o}" x="{x0:.6}" y="{y0:.6}" width="{w:.6}" height="{h:.6}" fill="{}"/>"#,
            t.faces()[o].kind,
            fill(o)
        )
        .unwrap();
    }
    for (f, pts) in &paths {
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{x:.6},{y:.6} ").unwrap();
        }
        d.push('Z');
        let fill = if Some(*f) == outer { "none" } else { fill(*f) };
        writeln!(
            out,
            r#"  <path class="{}" data-face="{f}" d="{d}" fill="{fill}" stroke="black" stroke-width="{stroke:.6}"/>"#,
            t.faces()[*f].kind
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// ASCII OFF with one flat quadrilateral per face through the embedded
/// vertices. The faceted solid is a chordal approximation of the sphere.
pub fn export_off(e: &Embedding, t: &Tiling) -> String {
    let mut out = String::new();
    writeln!(out, "OFF").unwrap();
    writeln!(
        out,
        "{} {} {}",
        t.vertex_count(),
        t.face_count(),
        t.edge_count()
    )
    .unwrap();
    for p in &e.coordinates {
        writeln!(out, "{:.12} {:.12} {:.12}", p[0], p[1], p[2]).unwrap();
    }
    for f in 0..t.face_count() {
        let v = t.face_spec(f).vertices;
        writeln!(out, "4 {} {} {} {}", v[0], v[1], v[2], v[3]).unwrap();
    }
    out
}

/// Samples of c(γ) on an even grid of γ/π from `from` to `to` inclusive.
pub fn c_gamma_samples(from: f64, to: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    if steps < 2 {
        return Err(Error::domain("need at least 2 grid steps"));
    }
    if !(from > 0.0 && from < to && to <= 0.5) {
        return Err(Error::domain(format!(
            "grid must satisfy 0 < from < to <= 0.5 (in units of π), got {from}..{to}"
        )));
    }
    (0..steps)
        .map(|i| {
            let g = if i + 1 == steps {
                to
            } else {
                from + (to - from) * i as f64 / (steps - 1) as f64
            };
            Ok((g, c_of_gamma(g * PI)?))
        })
        .collect()
}

/// CSV with header `gamma_over_pi,c_value`.
pub fn export_csv_cgamma(from: f64, to: f64, steps: usize) -> Result<String> {
    let mut out = String::from("gamma_over_pi,c_value\n");
    for (g, c) in c_gamma_samples(from, to, steps)? {
        writeln!(out, "{g:.9},{c:.12}").unwrap();
    }
    Ok(out)
}
