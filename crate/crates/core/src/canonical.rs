//! Canonical codes and isomorphism of labeled tilings.
//!
//! A code is the breadth-first trace of the mesh from a starting half-edge:
//! half-edges are numbered in discovery order and each one contributes its
//! face kind, corner label and the numbers of its successor and twin. Two
//! tilings are isomorphic exactly when some pair of starting half-edges
//! produces the same trace.

use crate::mesh::{FaceKind, FaceSpec, Tiling};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Direct,
    Mirror,
}

/// Trace from `start`. In mirror orientation every face loop is read
/// backwards, so a half-edge runs from its destination to its origin and
/// carries the corner label found there.
pub fn trace(t: &Tiling, start: usize, orientation: Orientation) -> Vec<u8> {
    let n = t.half_edges().len();
    let mut number = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    number[start] = 0;
    order.push(start);
    let mut code = Vec::with_capacity(n * 9);
    let mut i = 0;
    while i < order.len() {
        let h = order[i];
        i += 1;
        let (succ, corner) = match orientation {
            Orientation::Direct => (t.next(h), t.corner(h)),
            Orientation::Mirror => (t.prev(h), t.corner(t.next(h))),
        };
        let tw = t.twin(h);
        for g in [succ, tw] {
            if number[g] == u32::MAX {
                number[g] = order.len() as u32;
                order.push(g);
            }
        }
        let kind = match t.faces()[t.face_of(h)].kind {
            FaceKind::Square => 0u8,
            FaceKind::Rhombus => 1u8,
        };
        code.push(kind * 3 + corner.index() as u8);
        code.extend_from_slice(&number[succ].to_be_bytes());
        code.extend_from_slice(&number[tw].to_be_bytes());
    }
    code
}

fn min_trace(t: &Tiling, orientations: &[Orientation]) -> (Vec<u8>, usize, Orientation) {
    let mut best: Option<(Vec<u8>, usize, Orientation)> = None;
    for &o in orientations {
        for s in 0..t.half_edges().len() {
            let c = trace(t, s, o);
            if best.as_ref().is_none_or(|b| c < b.0) {
                best = Some((c, s, o));
            }
        }
    }
    best.unwrap_or((Vec::new(), 0, Orientation::Direct))
}

fn min_code(t: &Tiling, orientations: &[Orientation]) -> Vec<u8> {
    min_trace(t, orientations).0
}

/// The tiling renumbered along its minimal trace. Isomorphic tilings have
/// identical canonical forms, half-edge ids included.
pub fn canonical_form(t: &Tiling) -> Tiling {
    let (_, start, o) = min_trace(t, &[Orientation::Direct, Orientation::Mirror]);
    let succ = |h: usize| match o {
        Orientation::Direct => t.next(h),
        Orientation::Mirror => t.prev(h),
    };
    // discovery order of the minimal trace
    let n = t.half_edges().len();
    let mut seen = vec![false; n];
    let mut order = vec![start];
    seen[start] = true;
    let mut i = 0;
    while i < order.len() {
        let h = order[i];
        i += 1;
        for g in [succ(h), t.twin(h)] {
            if !seen[g] {
                seen[g] = true;
                order.push(g);
            }
        }
    }
    let mut face_done = vec![false; t.face_count()];
    let mut vertex_id = vec![usize::MAX; t.vertex_count()];
    let mut faces = Vec::with_capacity(t.face_count());
    for &h in &order {
        let f = t.face_of(h);
        if face_done[f] {
            continue;
        }
        face_done[f] = true;
        let mut vertices = [0; 4];
        let mut corners = [crate::vertex::Corner::Alpha; 4];
        let mut e = h;
        for k in 0..4 {
            // in mirror orientation e runs from dest(e) to origin(e)
            let (v, c) = match o {
                Orientation::Direct => (t.origin(e), t.corner(e)),
                Orientation::Mirror => (t.dest(e), t.corner(t.next(e))),
            };
            if vertex_id[v] == usize::MAX {
                vertex_id[v] = faces.len() * 4 + k;
            }
            vertices[k] = v;
            corners[k] = c;
            e = succ(e);
        }
        faces.push(FaceSpec {
            kind: t.faces()[f].kind,
            vertices,
            corners,
        });
    }
    // compact vertex ids in order of first appearance
    let mut rank: Vec<(usize, usize)> =
        vertex_id.iter().enumerate().map(|(v, &k)| (k, v)).collect();
    rank.sort();
    let mut compact = vec![0; t.vertex_count()];
    for (i, &(_, v)) in rank.iter().enumerate() {
        compact[v] = i;
    }
    for f in &mut faces {
        f.vertices = f.vertices.map(|v| compact[v]);
    }
    Tiling::from_faces(&faces).expect("renumbering preserves validity")
}

/// Minimal trace over all starting half-edges and both orientations.
pub fn canonical_code(t: &Tiling) -> Vec<u8> {
    min_code(t, &[Orientation::Direct, Orientation::Mirror])
}

/// Minimal trace over all starting half-edges, orientation kept.
pub fn oriented_code(t: &Tiling) -> Vec<u8> {
    min_code(t, &[Orientation::Direct])
}

/// True if the tiling is not isomorphic to its mirror image by an
/// orientation-preserving map.
pub fn is_chiral(t: &Tiling) -> bool {
    oriented_code(t) != min_code(t, &[Orientation::Mirror])
}

pub fn is_isomorphic(t1: &Tiling, t2: &Tiling, allow_reflection: bool) -> bool {
    if t1.face_count() != t2.face_count()
        || t1.vertex_count() != t2.vertex_count()
        || t1.stats() != t2.stats()
    {
        return false;
    }
    let fixed = trace(t1, 0, Orientation::Direct);
    let orientations: &[Orientation] = if allow_reflection {
        &[Orientation::Direct, Orientation::Mirror]
    } else {
        &[Orientation::Direct]
    };
    orientations
        .iter()
        .any(|&o| (0..t2.half_edges().len()).any(|s| trace(t2, s, o) == fixed))
}

/// Short hexadecimal digest of a code for display.
pub fn code_digest(code: &[u8]) -> String {
    // FNV-1a, 64 bit
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in code {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

pub fn code_hex(code: &[u8]) -> String {
    code.iter().map(|b| format!("{b:02x}")).collect()
}
