//! Vertex coordinates and face loops of the two convex polyhedra the catalog
//! derives tilings from.

use std::collections::HashSet;

type P3 = [f64; 3];

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(a: P3) -> P3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// A convex polyhedron centered at the origin with all edges of equal length.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    pub points: Vec<P3>,
    /// Face loops, counterclockwise seen from outside.
    pub faces: Vec<Vec<usize>>,
}

impl Polyhedron {
    /// Builds face loops from the shortest-distance edge graph. `points` are
    /// sorted lexicographically first so vertex ids are reproducible.
    fn from_points(mut points: Vec<P3>) -> Self {
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        let n = points.len();
        let mut min_d2 = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                let d = sub(points[i], points[j]);
                min_d2 = min_d2.min(dot(d, d));
            }
        }
        let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let d = sub(points[i], points[j]);
                    if (dot(d, d) - min_d2).abs() < 1e-9 * min_d2.max(1.0) {
                        neighbors[i].push(j);
                    }
                }
            }
        }
        // counterclockwise order around each vertex, viewed from outside
        for (v, nb) in neighbors.iter_mut().enumerate() {
            let normal = normalize(points[v]);
            let first = sub(points[nb[0]], points[v]);
            let e1 = normalize(sub(first, scale(normal, dot(first, normal))));
            let e2 = cross(normal, e1);
            nb.sort_by(|&a, &b| {
                let angle = |w: usize| {
                    let d = sub(points[w], points[v]);
                    dot(d, e2).atan2(dot(d, e1))
                };
                angle(a).partial_cmp(&angle(b)).expect("finite angles")
            });
        }
        let mut used: HashSet<(usize, usize)> = HashSet::new();
        let mut faces = Vec::new();
        for u in 0..n {
            for &v in &neighbors[u] {
                if used.contains(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                loop {
                    used.insert((a, b));
                    face.push(a);
                    let nb = &neighbors[b];
                    let k = nb
                        .iter()
                        .position(|&w| w == a)
                        .expect("symmetric adjacency");
                    let w = nb[(k + nb.len() - 1) % nb.len()];
                    a = b;
                    b = w;
                    if (a, b) == (u, v) {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        Polyhedron { points, faces }
    }

    /// The truncated octahedron: all permutations of (0, ±1, ±2).
    pub fn truncated_octahedron() -> Self {
        let mut points = Vec::new();
        for perm in PERMS {
            for s1 in [-1.0, 1.0] {
                for s2 in [-1.0, 1.0] {
                    let base = [0.0, s1, 2.0 * s2];
                    points.push([base[perm[0]], base[perm[1]], base[perm[2]]]);
                }
            }
        }
        Polyhedron::from_points(points)
    }

    /// The snub cube, one of its two enantiomers.
    pub fn snub_cube() -> Self {
        // tribonacci constant
        let t = 1.839_286_755_214_161_f64;
        let base = [1.0, 1.0 / t, t];
        let mut points = Vec::new();
        for (k, perm) in PERMS.iter().enumerate() {
            let even = k < 3;
            for signs in 0..8u32 {
                let plus = (0..3).filter(|i| signs & (1 << i) == 0).count();
                if (plus % 2 == 0) != even {
                    continue;
                }
                let s = |i: usize| if signs & (1 << i) == 0 { 1.0 } else { -1.0 };
                points.push([
                    s(0) * base[perm[0]],
                    s(1) * base[perm[1]],
                    s(2) * base[perm[2]],
                ]);
            }
        }
        Polyhedron::from_points(points)
    }

    pub fn faces_of_size(&self, k: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter().filter(move |f| f.len() == k)
    }
}

fn scale(a: P3, s: f64) -> P3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Even permutations first, then odd ones.
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 2, 0],
    [2, 0, 1],
    [0, 2, 1],
    [2, 1, 0],
    [1, 0, 2],
];
