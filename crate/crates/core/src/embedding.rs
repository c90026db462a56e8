//! Unit-sphere coordinates for the vertices of a tiling.
//!
//! Every edge is a geodesic arc of length x and consecutive edges of a face
//! turn by the labeled corner angle, so two adjacent vertices of a face
//! determine the remaining two. Starting from a fixed pose of one face the
//! positions are propagated across edges in breadth-first order; a vertex
//! reached a second time must land where it already is.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::geometry::AngleSet;
use crate::mesh::{FaceKind, Tiling};
use crate::tolerance::Tolerances;
use crate::{Error, Result};

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn normalize(a: Vec3) -> Vec3 {
    scale(a, 1.0 / norm(a))
}

/// Unit tangent at `q` pointing along the geodesic towards `p`.
fn tangent_towards(q: Vec3, p: Vec3) -> Vec3 {
    normalize(sub(p, scale(q, dot(p, q))))
}

/// Great-circle distance between unit vectors.
pub fn arc_length(a: Vec3, b: Vec3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Interior angle at `q` of a counterclockwise loop `p → q → r`.
pub fn corner_angle(p: Vec3, q: Vec3, r: Vec3) -> f64 {
    let tp = tangent_towards(q, p);
    let tr = tangent_towards(q, r);
    let ccw = dot(cross(tp, tr), q).atan2(dot(tp, tr));
    (-ccw).rem_euclid(TAU)
}

/// Walks from `p` through `q` and turns clockwise by `theta` at `q`, then
/// travels `x` along the new geodesic.
fn step(p: Vec3, q: Vec3, theta: f64, x: f64) -> Vec3 {
    let t = tangent_towards(q, p);
    let turned = sub(scale(t, theta.cos()), scale(cross(q, t), theta.sin()));
    normalize(add(scale(q, x.cos()), scale(turned, x.sin())))
}

/// Rotation matrix, row major.
pub type Rotation = [[f64; 3]; 3];

pub fn rotate(r: &Rotation, v: Vec3) -> Vec3 {
    [dot(r[0], v), dot(r[1], v), dot(r[2], v)]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Embedding {
    /// Indexed by vertex id.
    pub coordinates: Vec<Vec3>,
    /// Largest |arc length − x| over all edges.
    pub closure_residual: f64,
    /// Largest |measured − labeled| over all corners.
    pub max_angle_residual: f64,
    /// Largest mismatch found when a vertex was reached a second time.
    pub revisit_residual: f64,
}

impl Embedding {
    /// Spherical area of every face from its measured corner angles.
    pub fn face_areas(&self, t: &Tiling) -> Vec<f64> {
        (0..t.face_count())
            .map(|f| {
                let vs = t.face_spec(f).vertices.map(|v| self.coordinates[v]);
                (0..4)
                    .map(|k| corner_angle(vs[(k + 3) % 4], vs[k], vs[(k + 1) % 4]))
                    .sum::<f64>()
                    - TAU
            })
            .collect()
    }

    /// Unit vector towards the average of the face's corners.
    pub fn face_center(&self, t: &Tiling, f: usize) -> Vec3 {
        let s = t
            .face_spec(f)
            .vertices
            .iter()
            .fold([0.0; 3], |acc, &v| add(acc, self.coordinates[v]));
        normalize(s)
    }

    /// True if `p` lies strictly inside face `f`.
    pub fn face_contains(&self, t: &Tiling, f: usize, p: Vec3) -> bool {
        let vs = t.face_spec(f).vertices.map(|v| self.coordinates[v]);
        (0..4).all(|k| dot(cross(vs[k], vs[(k + 1) % 4]), p) > 0.0)
    }
}

/// Default pose: the seed face centered on +z with its first vertex in the
/// xz-plane.
fn default_pose(t: &Tiling, angles: &AngleSet) -> (usize, Vec3, Vec3) {
    let seed = (0..t.face_count())
        .find(|&f| t.faces()[f].kind == FaceKind::Square)
        .unwrap_or(0);
    let h = t.faces()[seed].half_edge;
    let x = angles.x;
    if t.faces()[seed].kind == FaceKind::Square {
        // circumradius of the regular spherical square: cos x = cos² R
        let r = x.cos().sqrt().acos();
        (h, [r.sin(), 0.0, r.cos()], [0.0, r.sin(), r.cos()])
    } else {
        (h, [0.0, 0.0, 1.0], [x.sin(), 0.0, x.cos()])
    }
}

pub fn embed(t: &Tiling, angles: &AngleSet) -> Result<Embedding> {
    embed_with(t, angles, &Tolerances::default())
}

pub fn embed_with(t: &Tiling, angles: &AngleSet, tol: &Tolerances) -> Result<Embedding> {
    let (h, p0, p1) = default_pose(t, angles);
    embed_from_pose(t, angles, tol, h, p0, p1)
}

/// Same as [`embed_with`] with the default pose rotated by `r`.
pub fn embed_rotated(
    t: &Tiling,
    angles: &AngleSet,
    tol: &Tolerances,
    r: &Rotation,
) -> Result<Embedding> {
    let (h, p0, p1) = default_pose(t, angles);
    embed_from_pose(t, angles, tol, h, rotate(r, p0), rotate(r, p1))
}

/// Embeds with half-edge `seed` running from `p0` to `p1`.
pub fn embed_from_pose(
    t: &Tiling,
    angles: &AngleSet,
    tol: &Tolerances,
    seed: usize,
    p0: Vec3,
    p1: Vec3,
) -> Result<Embedding> {
    let x = angles.x;
    if (arc_length(p0, p1) - x).abs() > tol.embed {
        return Err(Error::domain("seed pose does not have edge length x"));
    }
    let mut pos: Vec<Option<Vec3>> = vec![None; t.vertex_count()];
    pos[t.origin(seed)] = Some(p0);
    pos[t.dest(seed)] = Some(p1);
    let mut revisit = 0.0f64;
    let mut worst_vertex = None;
    let mut face_done = vec![false; t.face_count()];
    let mut queue = VecDeque::from([seed]);
    face_done[t.face_of(seed)] = true;
    while let Some(start) = queue.pop_front() {
        // start has both endpoints placed; walk its face
        let mut e = start;
        for _ in 0..4 {
            let (p, q) = (
                pos[t.origin(e)].expect("placed"),
                pos[t.dest(e)].expect("placed"),
            );
            let n = t.next(e);
            let r = step(p, q, t.corner(n).value(angles), x);
            let w = t.dest(n);
            match pos[w] {
                Some(existing) => {
                    let d = norm(sub(existing, r));
                    if d > revisit {
                        revisit = d;
                        worst_vertex = Some(w);
                    }
                }
                None => pos[w] = Some(r),
            }
            e = n;
        }
        for e in t.face_half_edges(t.face_of(start)) {
            let tw = t.twin(e);
            let g = t.face_of(tw);
            if !face_done[g] {
                face_done[g] = true;
                queue.push_back(tw);
            }
        }
        if revisit > tol.embed {
            return Err(Error::ClosureFailure {
                residual: revisit,
                tolerance: tol.embed,
                detail: format!(
                    "vertex {} reached at two positions while walking face {}",
                    worst_vertex.unwrap_or(0),
                    t.face_of(start)
                ),
            });
        }
    }
    let coordinates: Vec<Vec3> = pos
        .into_iter()
        .map(|p| p.expect("connected mesh"))
        .collect();

    let mut closure = 0.0f64;
    let mut angle_res = 0.0f64;
    for h in 0..t.half_edges().len() {
        let (a, b) = (coordinates[t.origin(h)], coordinates[t.dest(h)]);
        closure = closure.max((arc_length(a, b) - x).abs());
        let prev = coordinates[t.origin(t.prev(h))];
        let measured = corner_angle(prev, a, b);
        angle_res = angle_res.max((measured - t.corner(h).value(angles)).abs());
    }
    let e = Embedding {
        coordinates,
        closure_residual: closure,
        max_angle_residual: angle_res,
        revisit_residual: revisit,
    };
    let worst = closure.max(angle_res);
    if worst > tol.embed {
        return Err(Error::ClosureFailure {
            residual: worst,
            tolerance: tol.embed,
            detail: "edge lengths or corner angles off after propagation".into(),
        });
    }
    Ok(e)
}

/// Rotation by `angle` about `axis` (right-hand rule).
pub fn axis_rotation(axis: Vec3, angle: f64) -> Rotation {
    let k = normalize(axis);
    let (s, c) = angle.sin_cos();
    let v = 1.0 - c;
    [
        [
            c + k[0] * k[0] * v,
            k[0] * k[1] * v - k[2] * s,
            k[0] * k[2] * v + k[1] * s,
        ],
        [
            k[1] * k[0] * v + k[2] * s,
            c + k[1] * k[1] * v,
            k[1] * k[2] * v - k[0] * s,
        ],
        [
            k[2] * k[0] * v - k[1] * s,
            k[2] * k[1] * v + k[0] * s,
            c + k[2] * k[2] * v,
        ],
    ]
}

/// Sum of face areas expected for a closed tiling.
pub const SPHERE_AREA: f64 = 4.0 * PI;
