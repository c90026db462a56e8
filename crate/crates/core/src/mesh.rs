//! Labeled half-edge meshes of quadrilateral tilings of the sphere.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::AngleSet;
use crate::tolerance::Tolerances;
use crate::vertex::{enumerate_vertices, Avc, Corner, Exactness, TilingStats, VertexType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKind {
    Square,
    Rhombus,
}

impl fmt::Display for FaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceKind::Square => "square",
            FaceKind::Rhombus => "rhombus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("a closed tiling needs at least 2 faces, got {0}")]
    TooFewFaces(usize),
    #[error("face {face} has {len} corners, expected 4")]
    FaceLoopLength { face: usize, len: usize },
    #[error("half-edge {0} refers to a missing element")]
    DanglingReference(usize),
    #[error("twin is not an involution at half-edge {0}")]
    TwinNotInvolution(usize),
    #[error("twin endpoints do not match at half-edge {0}")]
    TwinMismatch(usize),
    #[error("directed edge {0} -> {1} occurs twice (inconsistent orientation)")]
    DuplicateDirectedEdge(usize, usize),
    #[error("edge {0} -> {1} has no twin (open mesh)")]
    OpenEdge(usize, usize),
    #[error("face {face} repeats vertex {vertex}")]
    RepeatedFaceVertex { face: usize, vertex: usize },
    #[error("vertices {0} and {1} are joined by more than one edge")]
    MultiEdge(usize, usize),
    #[error("vertex {vertex} has degree {degree} < 3")]
    LowDegree { vertex: usize, degree: usize },
    #[error("vertex {0} is not a single disk (non-manifold)")]
    NonManifoldVertex(usize),
    #[error("vertex {0} is not used by any face")]
    UnusedVertex(usize),
    #[error("mesh is not connected")]
    Disconnected,
    #[error("Euler characteristic V - E + F = {0}, expected 2")]
    Euler(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfEdge {
    pub twin: usize,
    /// Next half-edge counterclockwise around the face.
    pub next: usize,
    pub face: usize,
    pub origin: usize,
    /// Corner label of the face at this half-edge's origin.
    pub corner: Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Face {
    pub kind: FaceKind,
    pub half_edge: usize,
}

/// A face given by its four vertices in loop order and the corner labels at
/// those vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceSpec {
    pub kind: FaceKind,
    pub vertices: [usize; 4],
    pub corners: [Corner; 4],
}

impl FaceSpec {
    pub fn square(vertices: [usize; 4]) -> Self {
        FaceSpec {
            kind: FaceKind::Square,
            vertices,
            corners: [Corner::Alpha; 4],
        }
    }

    /// Rhombus with β at `vertices[0]` and `vertices[2]`.
    pub fn rhombus(vertices: [usize; 4]) -> Self {
        use Corner::{Beta, Gamma};
        FaceSpec {
            kind: FaceKind::Rhombus,
            vertices,
            corners: [Beta, Gamma, Beta, Gamma],
        }
    }

    /// Same face traversed the other way around.
    pub fn reversed(&self) -> Self {
        let [v0, v1, v2, v3] = self.vertices;
        let [c0, c1, c2, c3] = self.corners;
        FaceSpec {
            kind: self.kind,
            vertices: [v0, v3, v2, v1],
            corners: [c0, c3, c2, c1],
        }
    }
}

/// A closed, connected, edge-to-edge quadrilateral tiling of the sphere with
/// face kinds and corner labels. Only structurally valid meshes can be
/// constructed; label correctness is checked by [`verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    half_edges: Vec<HalfEdge>,
    faces: Vec<Face>,
    /// One outgoing half-edge per vertex.
    vertex_out: Vec<usize>,
}

impl Tiling {
    /// Builds a tiling from face loops, matching opposite directed edges as
    /// twins. Half-edge `4 * i + k` starts at `faces[i].vertices[k]`.
    pub fn from_faces(faces: &[FaceSpec]) -> Result<Tiling, StructuralError> {
        if faces.len() < 2 {
            return Err(StructuralError::TooFewFaces(faces.len()));
        }
        let vertex_count = faces
            .iter()
            .flat_map(|f| f.vertices.iter())
            .max()
            .map_or(0, |m| m + 1);
        let mut half_edges = Vec::with_capacity(4 * faces.len());
        let mut out_faces = Vec::with_capacity(faces.len());
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, spec) in faces.iter().enumerate() {
            for k in 0..4 {
                let h = 4 * i + k;
                let (u, v) = (spec.vertices[k], spec.vertices[(k + 1) % 4]);
                if directed.insert((u, v), h).is_some() {
                    return Err(StructuralError::DuplicateDirectedEdge(u, v));
                }
                half_edges.push(HalfEdge {
                    twin: usize::MAX,
                    next: 4 * i + (k + 1) % 4,
                    face: i,
                    origin: u,
                    corner: spec.corners[k],
                });
            }
            out_faces.push(Face {
                kind: spec.kind,
                half_edge: 4 * i,
            });
        }
        for (i, spec) in faces.iter().enumerate() {
            for k in 0..4 {
                let (u, v) = (spec.vertices[k], spec.vertices[(k + 1) % 4]);
                let t = *directed
                    .get(&(v, u))
                    .ok_or(StructuralError::OpenEdge(u, v))?;
                half_edges[4 * i + k].twin = t;
            }
        }
        Tiling::from_parts(half_edges, out_faces, vertex_count)
    }

    /// Builds a tiling from raw half-edge records and validates it.
    pub fn from_parts(
        half_edges: Vec<HalfEdge>,
        faces: Vec<Face>,
        vertex_count: usize,
    ) -> Result<Tiling, StructuralError> {
        let mut vertex_out = vec![usize::MAX; vertex_count];
        for (h, he) in half_edges.iter().enumerate() {
            if he.origin >= vertex_count {
                return Err(StructuralError::DanglingReference(h));
            }
            if vertex_out[he.origin] == usize::MAX {
                vertex_out[he.origin] = h;
            }
        }
        let t = Tiling {
            half_edges,
            faces,
            vertex_out,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), StructuralError> {
        let n = self.half_edges.len();
        let nf = self.faces.len();
        if nf < 2 {
            return Err(StructuralError::TooFewFaces(nf));
        }
        for (h, he) in self.half_edges.iter().enumerate() {
            if he.twin >= n || he.next >= n || he.face >= nf {
                return Err(StructuralError::DanglingReference(h));
            }
        }
        for (v, &h) in self.vertex_out.iter().enumerate() {
            if h == usize::MAX {
                return Err(StructuralError::UnusedVertex(v));
            }
        }
        // face loops
        let mut seen = vec![false; n];
        for (fi, face) in self.faces.iter().enumerate() {
            if face.half_edge >= n {
                return Err(StructuralError::DanglingReference(face.half_edge));
            }
            let mut h = face.half_edge;
            let mut len = 0;
            let mut verts = Vec::with_capacity(4);
            loop {
                if seen[h] || self.half_edges[h].face != fi || len > 4 {
                    return Err(StructuralError::FaceLoopLength {
                        face: fi,
                        len: len + 1,
                    });
                }
                seen[h] = true;
                verts.push(self.half_edges[h].origin);
                len += 1;
                h = self.half_edges[h].next;
                if h == face.half_edge {
                    break;
                }
            }
            if len != 4 {
                return Err(StructuralError::FaceLoopLength { face: fi, len });
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    if verts[i] == verts[j] {
                        return Err(StructuralError::RepeatedFaceVertex {
                            face: fi,
                            vertex: verts[i],
                        });
                    }
                }
            }
        }
        if let Some(h) = seen.iter().position(|s| !s) {
            return Err(StructuralError::DanglingReference(h));
        }
        // twins
        for (h, he) in self.half_edges.iter().enumerate() {
            let t = he.twin;
            if t == h || self.half_edges[t].twin != h {
                return Err(StructuralError::TwinNotInvolution(h));
            }
            if self.half_edges[t].origin != self.dest(h) {
                return Err(StructuralError::TwinMismatch(h));
            }
        }
        // simple graph
        let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for h in 0..n {
            let (u, v) = (self.origin(h), self.dest(h));
            let key = (u.min(v), u.max(v));
            let e = h.min(self.twin(h));
            if let Some(&prev) = pairs.get(&key) {
                if prev != e {
                    return Err(StructuralError::MultiEdge(key.0, key.1));
                }
            } else {
                pairs.insert(key, e);
            }
        }
        // vertex disks
        let mut orbit_seen = vec![false; n];
        for (v, &start) in self.vertex_out.iter().enumerate() {
            let mut h = start;
            let mut degree = 0;
            loop {
                if self.half_edges[h].origin != v || orbit_seen[h] {
                    return Err(StructuralError::NonManifoldVertex(v));
                }
                orbit_seen[h] = true;
                degree += 1;
                h = self.rotate(h);
                if h == start {
                    break;
                }
            }
            if degree < 3 {
                return Err(StructuralError::LowDegree { vertex: v, degree });
            }
        }
        if let Some(h) = orbit_seen.iter().position(|s| !s) {
            return Err(StructuralError::NonManifoldVertex(
                self.half_edges[h].origin,
            ));
        }
        // connectivity over faces
        let mut reached = vec![false; nf];
        let mut queue = VecDeque::from([0usize]);
        reached[0] = true;
        while let Some(f) = queue.pop_front() {
            for h in self.face_half_edges(f) {
                let g = self.face_of(self.twin(h));
                if !reached[g] {
                    reached[g] = true;
                    queue.push_back(g);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(StructuralError::Disconnected);
        }
        let chi = self.vertex_count() as i64 - self.edge_count() as i64 + nf as i64;
        if chi != 2 {
            return Err(StructuralError::Euler(chi));
        }
        Ok(())
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn half_edge(&self, h: usize) -> &HalfEdge {
        &self.half_edges[h]
    }

    pub fn twin(&self, h: usize) -> usize {
        self.half_edges[h].twin
    }

    pub fn next(&self, h: usize) -> usize {
        self.half_edges[h].next
    }

    pub fn prev(&self, h: usize) -> usize {
        let mut p = h;
        loop {
            let n = self.half_edges[p].next;
            if n == h {
                return p;
            }
            p = n;
        }
    }

    pub fn origin(&self, h: usize) -> usize {
        self.half_edges[h].origin
    }

    pub fn dest(&self, h: usize) -> usize {
        self.half_edges[self.half_edges[h].next].origin
    }

    pub fn face_of(&self, h: usize) -> usize {
        self.half_edges[h].face
    }

    pub fn corner(&self, h: usize) -> Corner {
        self.half_edges[h].corner
    }

    /// Next outgoing half-edge around the origin of `h`.
    pub fn rotate(&self, h: usize) -> usize {
        self.twin(self.prev(h))
    }

    pub fn face_half_edges(&self, f: usize) -> [usize; 4] {
        let h0 = self.faces[f].half_edge;
        let h1 = self.next(h0);
        let h2 = self.next(h1);
        [h0, h1, h2, self.next(h2)]
    }

    /// Outgoing half-edges of vertex `v` in rotation order.
    pub fn vertex_half_edges(&self, v: usize) -> Vec<usize> {
        let start = self.vertex_out[v];
        let mut out = vec![start];
        let mut h = self.rotate(start);
        while h != start {
            out.push(h);
            h = self.rotate(h);
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_half_edges(v).len()
    }

    pub fn vertex_type(&self, v: usize) -> VertexType {
        self.vertex_half_edges(v)
            .into_iter()
            .fold(VertexType::default(), |acc, h| acc.with(self.corner(h)))
    }

    pub fn face_spec(&self, f: usize) -> FaceSpec {
        let hs = self.face_half_edges(f);
        FaceSpec {
            kind: self.faces[f].kind,
            vertices: hs.map(|h| self.origin(h)),
            corners: hs.map(|h| self.corner(h)),
        }
    }

    pub fn face_specs(&self) -> Vec<FaceSpec> {
        (0..self.face_count()).map(|f| self.face_spec(f)).collect()
    }

    /// The mirror image: every face loop reversed.
    pub fn mirrored(&self) -> Tiling {
        let specs: Vec<FaceSpec> = self.face_specs().iter().map(FaceSpec::reversed).collect();
        Tiling::from_faces(&specs).expect("reversing a valid tiling keeps it valid")
    }

    pub fn count_kind(&self, kind: FaceKind) -> usize {
        self.faces.iter().filter(|f| f.kind == kind).count()
    }

    pub fn stats(&self) -> TilingStats {
        let mut v = BTreeMap::new();
        for vertex in 0..self.vertex_count() {
            *v.entry(self.degree(vertex) as u32).or_insert(0) += 1;
        }
        TilingStats {
            f: self.face_count() as u32,
            n_square: self.count_kind(FaceKind::Square) as u32,
            n_rhombus: self.count_kind(FaceKind::Rhombus) as u32,
            v,
        }
    }

    /// Number of vertices of each type.
    pub fn vertex_multiplicities(&self) -> BTreeMap<VertexType, u32> {
        let mut m = BTreeMap::new();
        for v in 0..self.vertex_count() {
            *m.entry(self.vertex_type(v)).or_insert(0) += 1;
        }
        m
    }

    pub fn is_monohedral(&self) -> bool {
        self.count_kind(FaceKind::Square) == 0 || self.count_kind(FaceKind::Rhombus) == 0
    }
}

/// Face and vertex counts of `t`.
pub fn stats(t: &Tiling) -> TilingStats {
    t.stats()
}

/// The set of vertex types that occur in `t`.
pub fn realized_avc(t: &Tiling) -> Avc {
    Avc::new(
        (0..t.vertex_count()).map(|v| t.vertex_type(v)),
        Exactness::Realized,
    )
}

fn labels_ok(spec: &FaceSpec) -> bool {
    use Corner::{Alpha, Beta, Gamma};
    match spec.kind {
        FaceKind::Square => spec.corners == [Alpha; 4],
        FaceKind::Rhombus => {
            spec.corners == [Beta, Gamma, Beta, Gamma] || spec.corners == [Gamma, Beta, Gamma, Beta]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{mark} {:<20} {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Checks `t` against the prototile labels and the angle values.
pub fn verify(t: &Tiling, angles: &AngleSet) -> VerificationReport {
    verify_with(t, angles, &Tolerances::default())
}

pub fn verify_with(t: &Tiling, angles: &AngleSet, tol: &Tolerances) -> VerificationReport {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| {
        checks.push(Check {
            name,
            passed,
            detail,
        })
    };

    match angles.validate(tol.eq5) {
        Ok(()) => push("angle_set", true, format!("{angles}")),
        Err(e) => push("angle_set", false, e.to_string()),
    }

    match t.validate() {
        Ok(()) => push(
            "structure",
            true,
            "closed connected quadrilateral mesh".into(),
        ),
        Err(e) => push("structure", false, e.to_string()),
    }

    let bad_faces: Vec<usize> = (0..t.face_count())
        .filter(|&f| !labels_ok(&t.face_spec(f)))
        .collect();
    push(
        "corner_labels",
        bad_faces.is_empty(),
        if bad_faces.is_empty() {
            "squares αααα, rhombi alternate βγβγ".into()
        } else {
            format!("bad corner sequence on faces {bad_faces:?}")
        },
    );

    let (v, e, f) = (t.vertex_count(), t.edge_count(), t.face_count());
    let chi = v as i64 - e as i64 + f as i64;
    push(
        "euler",
        chi == 2,
        format!("V - E + F = {v} - {e} + {f} = {chi}"),
    );

    let s = t.stats();
    let counts_ok = e == 2 * f && v == f + 2 && s.is_consistent();
    push(
        "counting_identities",
        counts_ok,
        format!(
            "E = {e}, V = {v}, f = {f}, vertex identity {}, face identity {}",
            s.satisfies_vertex_identity(),
            s.satisfies_face_identity()
        ),
    );

    let mut worst = 0.0f64;
    let mut worst_vertex = None;
    for vertex in 0..v {
        let r = (TAU - t.vertex_type(vertex).angle_sum(angles)).abs();
        if r > worst {
            worst = r;
            worst_vertex = Some(vertex);
        }
    }
    push(
        "vertex_angle_sums",
        worst < tol.vertex,
        match worst_vertex {
            Some(w) if worst >= tol.vertex => {
                format!("vertex {w} ({}) misses 2π by {worst:.3e}", t.vertex_type(w))
            }
            _ => format!("max |2π - sum| = {worst:.3e}"),
        },
    );

    let area: f64 = (0..f)
        .map(|face| {
            let spec = t.face_spec(face);
            spec.corners.iter().map(|c| c.value(angles)).sum::<f64>() - TAU
        })
        .sum();
    let area_err = (area - 4.0 * PI).abs();
    push(
        "total_area",
        area_err < tol.area,
        format!("Σ area = {:.9}π (error {area_err:.3e})", area / PI),
    );

    let allowed = enumerate_vertices(angles, None, tol.vertex);
    let realized = realized_avc(t);
    let outside: Vec<String> = realized
        .entries
        .iter()
        .filter(|v| !allowed.contains(v))
        .map(|v| v.to_string())
        .collect();
    push(
        "avc_admissible",
        outside.is_empty(),
        if outside.is_empty() {
            format!("{realized}")
        } else {
            format!("not full vertices at these angles: {}", outside.join(", "))
        },
    );

    VerificationReport { checks }
}
