//! Discrete vertex reasoning: vertex types, admissible vertex combinations,
//! the degree-3 seed list, the counting filter and integer feasibility of
//! vertex multiplicities.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::AngleSet;
use crate::{Error, Result};

/// One of the three prototile corner angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Corner {
    #[serde(rename = "a")]
    Alpha,
    #[serde(rename = "b")]
    Beta,
    #[serde(rename = "c")]
    Gamma,
}

impl Corner {
    pub const ALL: [Corner; 3] = [Corner::Alpha, Corner::Beta, Corner::Gamma];

    pub fn value(self, angles: &AngleSet) -> f64 {
        match self {
            Corner::Alpha => angles.alpha,
            Corner::Beta => angles.beta,
            Corner::Gamma => angles.gamma,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Corner::Alpha => 'a',
            Corner::Beta => 'b',
            Corner::Gamma => 'c',
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Counts of α, β and γ meeting at a vertex.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexType {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl VertexType {
    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        VertexType { a, b, c }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c
    }

    pub fn count(&self, corner: Corner) -> u32 {
        match corner {
            Corner::Alpha => self.a,
            Corner::Beta => self.b,
            Corner::Gamma => self.c,
        }
    }

    pub fn with(mut self, corner: Corner) -> Self {
        match corner {
            Corner::Alpha => self.a += 1,
            Corner::Beta => self.b += 1,
            Corner::Gamma => self.c += 1,
        }
        self
    }

    /// Componentwise `self <= other`.
    pub fn is_sub_of(&self, other: &VertexType) -> bool {
        self.a <= other.a && self.b <= other.b && self.c <= other.c
    }

    pub fn angle_sum(&self, angles: &AngleSet) -> f64 {
        self.a as f64 * angles.alpha + self.b as f64 * angles.beta + self.c as f64 * angles.gamma
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.a as f64, self.b as f64, self.c as f64]
    }
}

impl std::ops::Add for VertexType {
    type Output = VertexType;

    fn add(self, rhs: VertexType) -> VertexType {
        VertexType::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c)
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::with_capacity(3);
        for (sym, n) in [('a', self.a), ('b', self.b), ('c', self.c)] {
            if n > 0 {
                parts.push(format!("{sym}^{n}"));
            }
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for VertexType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = VertexType::default();
        for token in s.split_whitespace() {
            let (sym, exp) = match token.split_once('^') {
                Some((sym, exp)) => {
                    let n = exp.parse::<u32>().map_err(|_| {
                        Error::domain(format!("bad exponent in vertex token {token:?}"))
                    })?;
                    (sym, n)
                }
                None => (token, 1),
            };
            match sym {
                "a" => v.a += exp,
                "b" => v.b += exp,
                "c" => v.c += exp,
                _ => {
                    return Err(Error::domain(format!(
                        "unknown angle symbol in vertex token {token:?}"
                    )))
                }
            }
        }
        Ok(v)
    }
}

impl Serialize for VertexType {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexType {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Whether an AVC is a set of admissible candidates or the set of vertices
/// that actually occur in a given tiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    ConstraintSet,
    Realized,
}

/// Anglewise vertex combination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Avc {
    pub entries: BTreeSet<VertexType>,
    pub exactness: Exactness,
}

impl Avc {
    pub fn new(entries: impl IntoIterator<Item = VertexType>, exactness: Exactness) -> Self {
        Avc {
            entries: entries.into_iter().collect(),
            exactness,
        }
    }

    pub fn constraint(entries: impl IntoIterator<Item = VertexType>) -> Self {
        Avc::new(entries, Exactness::ConstraintSet)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, v: &VertexType) -> bool {
        self.entries.contains(v)
    }

    pub fn is_subset_of(&self, other: &Avc) -> bool {
        self.entries.is_subset(&other.entries)
    }

    /// True if some entry dominates `partial` componentwise.
    pub fn admits_partial(&self, partial: &VertexType) -> bool {
        self.entries.iter().any(|e| partial.is_sub_of(e))
    }

    pub fn max_degree(&self) -> u32 {
        self.entries
            .iter()
            .map(VertexType::degree)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Avc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
        let rel = match self.exactness {
            Exactness::ConstraintSet => "=",
            Exactness::Realized => "≡",
        };
        write!(f, "AVC {rel} {{{}}}", items.join(", "))
    }
}

/// 2π minus the angle sum of `v`.
pub fn remainder(v: &VertexType, angles: &AngleSet) -> f64 {
    TAU - v.angle_sum(angles)
}

/// A degree-3 vertex type ruled out before any angle values are known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedExclusion {
    pub vertex: VertexType,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeThreeSeeds {
    pub admitted: Vec<VertexType>,
    pub excluded: Vec<SeedExclusion>,
}

/// Lists the degree-3 vertex types that can occur in a dihedral tiling.
///
/// Uses only the ordering β > α > γ and α + β + γ ≤ 2π: a degree-3 type whose
/// angles are dominated term by term by (β, α, γ), without being αβγ, has
/// angle sum strictly below α + β + γ ≤ 2π and so is never a full vertex.
pub fn enumerate_degree3_seeds() -> DegreeThreeSeeds {
    // rank: γ < α < β
    fn rank(c: Corner) -> u8 {
        match c {
            Corner::Gamma => 0,
            Corner::Alpha => 1,
            Corner::Beta => 2,
        }
    }
    let reference = [Corner::Beta, Corner::Alpha, Corner::Gamma];
    let order = [Corner::Alpha, Corner::Beta, Corner::Gamma];

    let mut admitted = Vec::new();
    let mut excluded = Vec::new();
    for a in (0..=3u32).rev() {
        for b in (0..=3 - a).rev() {
            let c = 3 - a - b;
            let v = VertexType::new(a, b, c);
            let mut corners: Vec<Corner> = order
                .iter()
                .flat_map(|&k| std::iter::repeat_n(k, v.count(k) as usize))
                .collect();
            corners.sort_by_key(|&k| std::cmp::Reverse(rank(k)));
            let dominated = corners
                .iter()
                .zip(reference.iter())
                .all(|(&x, &r)| rank(x) <= rank(r));
            if dominated && v != VertexType::new(1, 1, 1) {
                excluded.push(SeedExclusion {
                    vertex: v,
                    reason: format!(
                        "{v} has angle sum strictly below α+β+γ ≤ 2π (termwise dominated under β > α > γ)"
                    ),
                });
            } else {
                admitted.push(v);
            }
        }
    }
    DegreeThreeSeeds { admitted, excluded }
}

/// Default cap on vertex degree: at most ⌊2π/γ⌋ angles fit at a vertex.
pub fn default_max_degree(angles: &AngleSet) -> u32 {
    (TAU / angles.gamma).floor() as u32 + 1
}

/// All vertex types of degree `3..=max_degree` whose angle sum is 2π within
/// `tol_vertex`.
pub fn enumerate_vertices(angles: &AngleSet, max_degree: Option<u32>, tol_vertex: f64) -> Avc {
    let max_degree = max_degree.unwrap_or_else(|| default_max_degree(angles));
    let mut entries = BTreeSet::new();
    for a in 0..=max_degree {
        for b in 0..=max_degree - a {
            for c in 0..=max_degree - a - b {
                let v = VertexType::new(a, b, c);
                if v.degree() < 3 {
                    continue;
                }
                if remainder(&v, angles).abs() < tol_vertex {
                    entries.insert(v);
                }
            }
        }
    }
    Avc::new(entries, Exactness::ConstraintSet)
}

/// If every entry has no more β than γ, only entries with equal numbers can
/// occur in a tiling; otherwise the input is returned unchanged. Entries of
/// degree below 3 are dropped when the filter applies.
pub fn counting_lemma_filter(avc: &Avc) -> Avc {
    if avc.entries.iter().all(|v| v.b <= v.c) {
        Avc::new(
            avc.entries
                .iter()
                .copied()
                .filter(|v| v.b == v.c && v.degree() >= 3),
            avc.exactness,
        )
    } else {
        avc.clone()
    }
}

/// Face and vertex counts of a quadrilateral tiling of the sphere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingStats {
    pub f: u32,
    pub n_square: u32,
    pub n_rhombus: u32,
    /// degree → number of vertices of that degree
    pub v: BTreeMap<u32, u32>,
}

impl TilingStats {
    pub fn vertex_count(&self) -> u32 {
        self.v.values().sum()
    }

    /// Twice the edge count, read from the degree sequence.
    pub fn degree_sum(&self) -> u32 {
        self.v.iter().map(|(h, n)| h * n).sum()
    }

    pub fn edge_count(&self) -> u32 {
        self.degree_sum() / 2
    }

    /// v₃ = 8 + Σ_{h≥4} (h − 4) v_h
    pub fn satisfies_vertex_identity(&self) -> bool {
        let v3 = *self.v.get(&3).unwrap_or(&0) as i64;
        let rhs: i64 = 8 + self
            .v
            .iter()
            .filter(|(h, _)| **h >= 4)
            .map(|(h, n)| (*h as i64 - 4) * *n as i64)
            .sum::<i64>();
        v3 == rhs
    }

    /// f = 6 + Σ_{h≥4} (h − 3) v_h
    pub fn satisfies_face_identity(&self) -> bool {
        let rhs: i64 = 6 + self
            .v
            .iter()
            .filter(|(h, _)| **h >= 4)
            .map(|(h, n)| (*h as i64 - 3) * *n as i64)
            .sum::<i64>();
        self.f as i64 == rhs
    }

    pub fn satisfies_counts(&self) -> bool {
        self.n_square + self.n_rhombus == self.f
            && self.vertex_count() == self.f + 2
            && self.degree_sum() == 4 * self.f
    }

    pub fn is_consistent(&self) -> bool {
        self.satisfies_counts()
            && self.satisfies_vertex_identity()
            && self.satisfies_face_identity()
    }
}

/// One solution of the global counting equations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Multiplicities {
    pub counts: Vec<(VertexType, u32)>,
    pub stats: TilingStats,
}

impl Multiplicities {
    pub fn count_of(&self, v: &VertexType) -> u32 {
        self.counts
            .iter()
            .find(|(w, _)| w == v)
            .map_or(0, |(_, m)| *m)
    }
}

/// Every assignment of nonnegative multiplicities to the AVC entries that is
/// consistent with a dihedral tiling of `f` tiles: f + 2 vertices, four α per
/// square, two β and two γ per rhombus, at least one tile of each kind.
pub fn integer_feasibility(avc: &Avc, f: u32) -> Vec<Multiplicities> {
    let entries: Vec<VertexType> = avc
        .entries
        .iter()
        .copied()
        .filter(|v| v.degree() >= 3)
        .collect();
    let mut out = Vec::new();
    if f < 2 || entries.is_empty() {
        return out;
    }
    let mut m = vec![0u32; entries.len()];
    feasibility_rec(&entries, 0, f + 2, 4 * f, &mut m, f, &mut out);
    out
}

fn feasibility_rec(
    entries: &[VertexType],
    idx: usize,
    vertices_left: u32,
    corners_left: u32,
    m: &mut Vec<u32>,
    f: u32,
    out: &mut Vec<Multiplicities>,
) {
    if idx == entries.len() {
        if vertices_left != 0 || corners_left != 0 {
            return;
        }
        let (mut sa, mut sb, mut sc) = (0u32, 0u32, 0u32);
        for (v, &k) in entries.iter().zip(m.iter()) {
            sa += v.a * k;
            sb += v.b * k;
            sc += v.c * k;
        }
        if sa % 4 != 0 || sb != sc || sb % 2 != 0 {
            return;
        }
        let (n_square, n_rhombus) = (sa / 4, sb / 2);
        if n_square == 0 || n_rhombus == 0 || n_square + n_rhombus != f {
            return;
        }
        let mut v = BTreeMap::new();
        for (e, &k) in entries.iter().zip(m.iter()) {
            if k > 0 {
                *v.entry(e.degree()).or_insert(0) += k;
            }
        }
        let stats = TilingStats {
            f,
            n_square,
            n_rhombus,
            v,
        };
        if !stats.is_consistent() {
            return;
        }
        let counts = entries.iter().copied().zip(m.iter().copied()).collect();
        out.push(Multiplicities { counts, stats });
        return;
    }
    let rest = &entries[idx + 1..];
    let (min_rest, max_rest) = rest.iter().fold((u32::MAX, 0), |(lo, hi), v| {
        (lo.min(v.degree()), hi.max(v.degree()))
    });
    let d = entries[idx].degree();
    for k in 0..=vertices_left {
        if k * d > corners_left {
            break;
        }
        let vl = vertices_left - k;
        let cl = corners_left - k * d;
        if rest.is_empty() {
            if vl != 0 || cl != 0 {
                continue;
            }
        } else if vl * min_rest > cl || vl * max_rest < cl {
            continue;
        }
        m[idx] = k;
        feasibility_rec(entries, idx + 1, vl, cl, m, f, out);
    }
    m[idx] = 0;
}

/// All `(f, n_square)` with `6 <= f <= max_f` for which `integer_feasibility`
/// is nonempty, computed by a reachability sweep over vertex count.
pub fn feasible_counts(avc: &Avc, max_f: u32) -> BTreeSet<(u32, u32)> {
    let entries: Vec<VertexType> = avc
        .entries
        .iter()
        .copied()
        .filter(|v| v.degree() >= 3)
        .collect();
    let mut out = BTreeSet::new();
    if entries.is_empty() || max_f < 2 {
        return out;
    }
    let max_v = max_f + 2;
    let cap_a = 4 * max_f;
    let cap_bc = 2 * max_f;
    let mut level: HashSet<(u32, u32, u32)> = HashSet::new();
    level.insert((0, 0, 0));
    for v_count in 1..=max_v {
        let mut next = HashSet::with_capacity(level.len() * entries.len());
        for &(sa, sb, sc) in &level {
            for e in &entries {
                let t = (sa + e.a, sb + e.b, sc + e.c);
                // corners so far may not exceed 4f for the largest admissible f
                if t.0 <= cap_a && t.1 <= cap_bc && t.2 <= cap_bc && t.0 + t.1 + t.2 <= 4 * max_f {
                    next.insert(t);
                }
            }
        }
        level = next;
        if v_count >= 8 {
            let f = v_count - 2;
            for &(sa, sb, sc) in &level {
                if sa % 4 == 0
                    && sb == sc
                    && sb % 2 == 0
                    && sa > 0
                    && sb > 0
                    && sa / 4 + sb / 2 == f
                {
                    out.insert((f, sa / 4));
                }
            }
        }
    }
    out
}
