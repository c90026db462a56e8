//! Constructors for every tiling in the classification.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::mesh::{FaceSpec, Tiling};
use crate::polyhedra::Polyhedron;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    Cube,
    EarthMap(u32),
    Fusion1,
    Fusion2,
    QuadSubdivision,
    Sporadic1,
    Sporadic2,
}

impl FamilyId {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyId::EarthMap(c) if *c < 2 => {
                Err(Error::domain(format!("earth map needs c >= 2, got {c}")))
            }
            _ => Ok(()),
        }
    }

    pub fn face_count(&self) -> u32 {
        match self {
            FamilyId::Cube => 6,
            FamilyId::EarthMap(c) => 8 * c - 2,
            FamilyId::Fusion1 | FamilyId::Fusion2 => 22,
            FamilyId::QuadSubdivision => 30,
            FamilyId::Sporadic1 | FamilyId::Sporadic2 => 14,
        }
    }

    /// (squares, rhombi)
    pub fn tile_counts(&self) -> (u32, u32) {
        match self {
            FamilyId::Cube => (2, 4),
            FamilyId::EarthMap(c) => (2, 4 * (2 * c - 1)),
            FamilyId::Fusion1 | FamilyId::Fusion2 => (6, 16),
            FamilyId::QuadSubdivision => (6, 24),
            FamilyId::Sporadic1 | FamilyId::Sporadic2 => (10, 4),
        }
    }

    /// Every catalog entry with at most `max_f` tiles.
    pub fn all_up_to(max_f: u32) -> Vec<FamilyId> {
        let mut ids = vec![
            FamilyId::Cube,
            FamilyId::Sporadic1,
            FamilyId::Sporadic2,
            FamilyId::Fusion1,
            FamilyId::Fusion2,
            FamilyId::QuadSubdivision,
        ];
        let mut c = 2;
        while 8 * c - 2 <= max_f {
            ids.push(FamilyId::EarthMap(c));
            c += 1;
        }
        ids.retain(|id| id.face_count() <= max_f);
        ids.sort();
        ids
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Cube => f.write_str("cube"),
            FamilyId::EarthMap(c) => write!(f, "earth-map:{c}"),
            FamilyId::Fusion1 => f.write_str("fusion:1"),
            FamilyId::Fusion2 => f.write_str("fusion:2"),
            FamilyId::QuadSubdivision => f.write_str("quad-subdivision"),
            FamilyId::Sporadic1 => f.write_str("sporadic:1"),
            FamilyId::Sporadic2 => f.write_str("sporadic:2"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s {
            "cube" => FamilyId::Cube,
            "fusion:1" => FamilyId::Fusion1,
            "fusion:2" => FamilyId::Fusion2,
            "quad-subdivision" => FamilyId::QuadSubdivision,
            "sporadic:1" => FamilyId::Sporadic1,
            "sporadic:2" => FamilyId::Sporadic2,
            _ => match s.strip_prefix("earth-map:") {
                Some(c) => FamilyId::EarthMap(
                    c.parse()
                        .map_err(|_| Error::domain(format!("bad earth map parameter in {s:?}")))?,
                ),
                None => return Err(Error::domain(format!("unknown family id {s:?}"))),
            },
        };
        id.validate()?;
        Ok(id)
    }
}

/// Builds the catalog tiling for `id`.
pub fn build(id: &FamilyId) -> Result<Tiling> {
    id.validate()?;
    let faces = match id {
        FamilyId::Cube => cube_faces(),
        FamilyId::EarthMap(c) => earth_map_faces(*c)?,
        FamilyId::Fusion1 => fusion_faces(&FUSION_1)?,
        FamilyId::Fusion2 => fusion_faces(&FUSION_2)?,
        FamilyId::QuadSubdivision => quad_subdivision_faces(),
        FamilyId::Sporadic1 => sporadic1_faces(),
        FamilyId::Sporadic2 => sporadic2_faces(),
    };
    Ok(Tiling::from_faces(&orient_consistently(faces)?)?)
}

/// Flips faces so that every edge is traversed once in each direction,
/// keeping the orientation of the first face.
fn orient_consistently(mut faces: Vec<FaceSpec>) -> Result<Vec<FaceSpec>> {
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for k in 0..4 {
            let (u, v) = (f.vertices[k], f.vertices[(k + 1) % 4]);
            by_edge.entry((u.min(v), u.max(v))).or_default().push(i);
        }
    }
    let directed = |f: &FaceSpec, u: usize, v: usize| {
        (0..4).any(|k| f.vertices[k] == u && f.vertices[(k + 1) % 4] == v)
    };
    let mut done = vec![false; faces.len()];
    let mut queue = VecDeque::from([0usize]);
    done[0] = true;
    while let Some(i) = queue.pop_front() {
        for k in 0..4 {
            let (u, v) = (faces[i].vertices[k], faces[i].vertices[(k + 1) % 4]);
            for &j in &by_edge[&(u.min(v), u.max(v))] {
                if j == i {
                    continue;
                }
                let same = directed(&faces[j], u, v);
                if done[j] {
                    if same {
                        return Err(Error::domain("face list is not orientable"));
                    }
                    continue;
                }
                if same {
                    faces[j] = faces[j].reversed();
                }
                done[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok(faces)
}

fn cube_faces() -> Vec<FaceSpec> {
    // top square 0..4, bottom 4..8 with 4 + i below i
    let mut faces = vec![
        FaceSpec::square([0, 1, 2, 3]),
        FaceSpec::square([7, 6, 5, 4]),
    ];
    for i in 0..4 {
        let j = (i + 1) % 4;
        faces.push(FaceSpec::rhombus([j, i, 4 + i, 4 + j]));
    }
    faces
}

/// The block of 2c − 1 rhombi between two meridians of the earth map, with
/// local vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimezoneStrip {
    pub c: u32,
    pub faces: Vec<FaceSpec>,
    pub vertex_count: usize,
    /// Pole vertex carrying γ from c rhombi of the strip.
    pub gamma_c_end: usize,
    /// Opposite end carrying γ from c − 1 rhombi of the strip.
    pub gamma_c_minus_1_end: usize,
    /// Vertex shared with the previous strip's pole.
    pub west: usize,
    /// Vertex identified with the next strip's `meridian[0]`.
    pub east: usize,
    /// Chain of vertices running from the pole side to the far end.
    pub meridian: Vec<usize>,
    /// Interior zigzag vertices between the poles.
    pub zigzag: Vec<usize>,
}

pub fn timezone_strip(c: u32) -> Result<TimezoneStrip> {
    if c < 2 {
        return Err(Error::domain(format!(
            "timezone strip needs c >= 2, got {c}"
        )));
    }
    let c = c as usize;
    let (pole, far, west, east) = (0, 1, 2, 3);
    // a_0 = west, a_c = east, a_1..a_{c-1} interior
    let a = |j: usize| match j {
        0 => west,
        j if j == c => east,
        j => 3 + j,
    };
    let m = |j: usize| 3 + c + j;
    let mut faces = Vec::with_capacity(2 * c - 1);
    for j in 0..c {
        // β at a_{j+1} and a_j, γ at the pole and m_j
        faces.push(FaceSpec::rhombus([a(j + 1), pole, a(j), m(j)]));
    }
    for j in 1..c {
        faces.push(FaceSpec::rhombus([m(j), a(j), m(j - 1), far]));
    }
    Ok(TimezoneStrip {
        c: c as u32,
        faces,
        vertex_count: 3 + 2 * c,
        gamma_c_end: pole,
        gamma_c_minus_1_end: far,
        west,
        east,
        meridian: (0..c).map(m).collect(),
        zigzag: (1..c).map(a).collect(),
    })
}

fn earth_map_faces(c: u32) -> Result<Vec<FaceSpec>> {
    let strip = timezone_strip(c)?;
    let c = c as usize;
    let per = 2 * c - 1;
    // global ids: squares' corners 0..4, then strip i owns 4 + i*per ..
    let owned = |i: usize, local: usize| -> usize {
        if let Some(j) = strip.zigzag.iter().position(|&v| v == local) {
            4 + i * per + j
        } else {
            let j = strip
                .meridian
                .iter()
                .position(|&v| v == local)
                .expect("owned vertex");
            4 + i * per + (c - 1) + j
        }
    };
    let global = |i: usize, local: usize| -> usize {
        if local == strip.gamma_c_end {
            i
        } else if local == strip.west {
            (i + 3) % 4
        } else if local == strip.east {
            owned((i + 1) % 4, strip.meridian[0])
        } else if local == strip.gamma_c_minus_1_end {
            owned((i + 3) % 4, strip.meridian[c - 1])
        } else {
            owned(i, local)
        }
    };
    let mut faces = vec![FaceSpec::square([0, 1, 2, 3])];
    for i in 0..4 {
        for f in &strip.faces {
            faces.push(FaceSpec {
                kind: f.kind,
                vertices: f.vertices.map(|v| global(i, v)),
                corners: f.corners,
            });
        }
    }
    let w = |i: usize| owned(i, strip.meridian[c - 1]);
    faces.push(FaceSpec::square([w(3), w(2), w(1), w(0)]));
    Ok(faces)
}

fn quad_subdivision_faces() -> Vec<FaceSpec> {
    let p = Polyhedron::truncated_octahedron();
    let mut faces: Vec<FaceSpec> = p
        .faces_of_size(4)
        .map(|f| FaceSpec::square([f[0], f[1], f[2], f[3]]))
        .collect();
    for (i, hex) in p.faces_of_size(6).enumerate() {
        let center = p.points.len() + i;
        // parity of the coordinate permutation alternates around a hexagon and
        // flips between the two hexagons at a vertex
        let normal_neg = {
            let s: [f64; 3] = hex.iter().fold([0.0; 3], |acc, &v| {
                [
                    acc[0] + p.points[v][0],
                    acc[1] + p.points[v][1],
                    acc[2] + p.points[v][2],
                ]
            });
            s.iter().filter(|x| **x < 0.0).count() % 2
        };
        let picked = |v: usize| perm_parity(p.points[v]) ^ normal_neg == 0;
        let start = (0..6)
            .find(|&k| picked(hex[k]))
            .expect("hexagon has picked vertices");
        let h = |k: usize| hex[(start + k) % 6];
        for k in [0, 2, 4] {
            // β at the center and at the unpicked vertex
            faces.push(FaceSpec::rhombus([center, h(k), h(k + 1), h(k + 2)]));
        }
    }
    faces
}

fn perm_parity(p: [f64; 3]) -> usize {
    let a = p.map(|x| x.abs().round() as i64);
    let mut inv = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if a[i] > a[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// Triangle pairs of the snub cube merged into rhombi, given as the shared
/// edges. Vertex ids follow [`Polyhedron::snub_cube`].
pub const FUSION_1: [(usize, usize); 16] = [
    (0, 4),
    (0, 5),
    (1, 9),
    (2, 10),
    (3, 6),
    (3, 7),
    (8, 13),
    (9, 12),
    (10, 15),
    (11, 14),
    (13, 21),
    (14, 22),
    (16, 20),
    (17, 20),
    (18, 23),
    (19, 23),
];
pub const FUSION_2: [(usize, usize); 16] = [
    (0, 4),
    (0, 5),
    (1, 6),
    (2, 10),
    (3, 7),
    (4, 9),
    (6, 11),
    (8, 13),
    (10, 15),
    (12, 17),
    (13, 21),
    (14, 19),
    (16, 20),
    (17, 22),
    (18, 23),
    (19, 23),
];

/// A second grouping of the snub cube triangles, different from
/// [`FUSION_1`] edge for edge but yielding an isomorphic tiling.
pub const FUSION_1_ALT: [(usize, usize); 16] = [
    (0, 4),
    (1, 6),
    (2, 5),
    (3, 7),
    (4, 9),
    (5, 8),
    (6, 11),
    (7, 10),
    (12, 17),
    (13, 16),
    (14, 19),
    (15, 18),
    (16, 20),
    (17, 22),
    (18, 21),
    (19, 23),
];

/// Merges the two snub cube triangles on each of `diagonals` into a rhombus
/// with β at the ends of the removed edge.
pub fn triangular_fusion(diagonals: &[(usize, usize)]) -> Result<Tiling> {
    Ok(Tiling::from_faces(&fusion_faces(diagonals)?)?)
}

fn fusion_faces(diagonals: &[(usize, usize)]) -> Result<Vec<FaceSpec>> {
    let p = Polyhedron::snub_cube();
    let mut faces: Vec<FaceSpec> = p
        .faces_of_size(4)
        .map(|f| FaceSpec::square([f[0], f[1], f[2], f[3]]))
        .collect();
    // directed edge -> apex of the triangle on its left
    let mut apex: HashMap<(usize, usize), usize> = HashMap::new();
    for t in p.faces_of_size(3) {
        for k in 0..3 {
            apex.insert((t[k], t[(k + 1) % 3]), t[(k + 2) % 3]);
        }
    }
    let mut used: HashSet<usize> = HashSet::new();
    for &(u, v) in diagonals {
        let (Some(&p1), Some(&q)) = (apex.get(&(u, v)), apex.get(&(v, u))) else {
            return Err(Error::domain(format!(
                "{u}-{v} is not an edge between two triangles"
            )));
        };
        for key in [(u, v, p1), (v, u, q)] {
            let mut tri = [key.0, key.1, key.2];
            tri.sort_unstable();
            let id = tri[0] * 576 + tri[1] * 24 + tri[2];
            if !used.insert(id) {
                return Err(Error::domain(format!("triangle {tri:?} fused twice")));
            }
        }
        faces.push(FaceSpec::rhombus([u, q, v, p1]));
    }
    if used.len() != 32 {
        return Err(Error::domain("fusion must pair up all 32 triangles"));
    }
    Ok(faces)
}

/// All ways to pair the snub cube triangles into rhombi so that every vertex
/// lies on at least one removed edge, as lists of removed edges.
pub fn snub_cube_fusions() -> Vec<Vec<(usize, usize)>> {
    let p = Polyhedron::snub_cube();
    let tris: Vec<&Vec<usize>> = p.faces_of_size(3).collect();
    let mut edge_tris: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let (u, v) = (t[k], t[(k + 1) % 3]);
            edge_tris.entry((u.min(v), u.max(v))).or_default().push(i);
        }
    }
    let mut adj: Vec<Vec<(usize, (usize, usize))>> = vec![Vec::new(); tris.len()];
    for (&e, ts) in &edge_tris {
        if let [a, b] = ts[..] {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
    }
    for list in &mut adj {
        list.sort();
    }
    let mut out = Vec::new();
    let mut matched = vec![false; tris.len()];
    let mut chosen = Vec::new();
    fn rec(
        adj: &[Vec<(usize, (usize, usize))>],
        matched: &mut Vec<bool>,
        chosen: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some(i) = matched.iter().position(|m| !m) else {
            let mut cover = [false; 24];
            for &(u, v) in chosen.iter() {
                cover[u] = true;
                cover[v] = true;
            }
            if cover.iter().all(|c| *c) {
                let mut c = chosen.clone();
                c.sort();
                out.push(c);
            }
            return;
        };
        matched[i] = true;
        for &(j, e) in &adj[i] {
            if !matched[j] {
                matched[j] = true;
                chosen.push(e);
                rec(adj, matched, chosen, out);
                chosen.pop();
                matched[j] = false;
            }
        }
        matched[i] = false;
    }
    rec(&adj, &mut matched, &mut chosen, &mut out);
    out.sort();
    out
}

/// Grid drawing of the first sporadic tiling, unit = x: a central square,
/// four arm squares, four corner rhombi, four squares along the outer sides
/// and the outer square.
fn sporadic1_faces() -> Vec<FaceSpec> {
    // vertex ids on the 4×4 grid with coordinates -3, -1, 1, 3
    let g = |i: usize, j: usize| 4 * j + i;
    let mut faces = vec![
        FaceSpec::square([g(1, 1), g(2, 1), g(2, 2), g(1, 2)]),
        // arms
        FaceSpec::square([g(2, 1), g(3, 1), g(3, 2), g(2, 2)]),
        FaceSpec::square([g(1, 2), g(2, 2), g(2, 3), g(1, 3)]),
        FaceSpec::square([g(0, 1), g(1, 1), g(1, 2), g(0, 2)]),
        FaceSpec::square([g(1, 0), g(2, 0), g(2, 1), g(1, 1)]),
        // corner rhombi, β at the two arm-tip vertices
        FaceSpec::rhombus([g(3, 2), g(3, 3), g(2, 3), g(2, 2)]),
        FaceSpec::rhombus([g(1, 3), g(0, 3), g(0, 2), g(1, 2)]),
        FaceSpec::rhombus([g(0, 1), g(0, 0), g(1, 0), g(1, 1)]),
        FaceSpec::rhombus([g(2, 0), g(3, 0), g(3, 1), g(2, 1)]),
    ];
    // outside: one square per side of the big square, then the far square
    faces.push(FaceSpec::square([g(3, 3), g(3, 2), g(3, 1), g(3, 0)]));
    faces.push(FaceSpec::square([g(0, 3), g(1, 3), g(2, 3), g(3, 3)]));
    faces.push(FaceSpec::square([g(0, 0), g(0, 1), g(0, 2), g(0, 3)]));
    faces.push(FaceSpec::square([g(3, 0), g(2, 0), g(1, 0), g(0, 0)]));
    faces.push(FaceSpec::square([g(0, 0), g(0, 3), g(3, 3), g(3, 0)]));
    faces
}

/// The second sporadic tiling; it has a half-turn symmetry exchanging the
/// primed and unprimed vertices.
fn sporadic2_faces() -> Vec<FaceSpec> {
    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;
    const E: usize = 4;
    const F: usize = 5;
    const G: usize = 6;
    const H: usize = 7;
    const I: usize = 8;
    const J: usize = 9;
    const C2: usize = 10;
    const D2: usize = 11;
    const F2: usize = 12;
    const G2: usize = 13;
    const I2: usize = 14;
    const J2: usize = 15;
    vec![
        FaceSpec::square([A, C, D, B]),
        FaceSpec::square([A, B, C2, D2]),
        FaceSpec::square([B, D, I, H]),
        FaceSpec::square([A, D2, I2, E]),
        FaceSpec::square([C, D, G, F]),
        FaceSpec::square([C2, D2, G2, F2]),
        FaceSpec::square([J2, I2, E, F]),
        FaceSpec::square([J, I, H, F2]),
        FaceSpec::square([J, G, F, J2]),
        FaceSpec::square([J2, G2, F2, J]),
        FaceSpec::rhombus([G, J, I, D]),
        FaceSpec::rhombus([G2, J2, I2, D2]),
        FaceSpec::rhombus([E, A, C, F]),
        FaceSpec::rhombus([H, B, C2, F2]),
    ]
}
