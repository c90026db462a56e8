//! Exhaustive patch-growing search for closed tilings with a given set of
//! admissible vertices.
//!
//! A patch is a set of tiles glued along some of their edges. Each vertex of
//! the patch is a fan of corners; an open vertex still has a gap between the
//! two boundary edges at its ends. The search repeatedly picks the open vertex
//! with the fewest ways to continue and fills the next corner of its gap,
//! either with a new tile or by gluing the boundary edge to another boundary
//! edge already in the patch. A closed patch is a candidate tiling.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use serde::Serialize;

use crate::canonical::{canonical_code, canonical_form, code_digest, code_hex, is_chiral};
use crate::catalog::{build, FamilyId};
use crate::embedding::embed_with;
use crate::geometry::{earth_map_angles, solve_vertex_system_with, AngleSet, SolutionKind};
use crate::mesh::{verify_with, FaceKind, FaceSpec, Tiling};
use crate::tolerance::Tolerances;
use crate::vertex::{
    enumerate_degree3_seeds, enumerate_vertices, feasible_counts, Avc, Corner, VertexType,
};
use crate::{Error, Result};

/// Default node cap for one search.
pub const DEFAULT_NODE_CAP: u64 = 100_000_000;

const NONE: u32 = u32::MAX;

/// Which open vertex the search extends next.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// The open vertex with the fewest candidate moves.
    #[default]
    FewestOptions,
    /// The open vertex at the end of the lowest-numbered boundary half-edge.
    FirstOpen,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyConfig {
    pub max_f: u32,
    pub selection: Selection,
    pub node_cap: u64,
    /// Worker threads; 1 runs everything on the calling thread.
    pub jobs: usize,
    pub tol: Tolerances,
}

impl ClassifyConfig {
    pub fn new(max_f: u32) -> Self {
        ClassifyConfig {
            max_f,
            selection: Selection::default(),
            node_cap: DEFAULT_NODE_CAP,
            jobs: 1,
            tol: Tolerances::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_f < 6 {
            return Err(Error::domain(format!(
                "max_f must be at least 6, got {}",
                self.max_f
            )));
        }
        if self.jobs == 0 {
            return Err(Error::domain("worker count must be at least 1"));
        }
        self.tol.validate()
    }
}

/// Prune counters by reason.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PruneCounts {
    /// A vertex collected corners that no admissible vertex contains.
    pub vertex_partial: u64,
    /// A vertex closed up with a combination that is not admissible.
    pub vertex_closed: u64,
    /// Tile budget or global square/rhombus counts ruled out completion.
    pub tile_counts: u64,
    /// Gluing would join a tile to itself, repeat an adjacency, or make a loop.
    pub adjacency: u64,
    /// Two corners of one tile would meet at a vertex.
    pub repeated_corner: u64,
    /// Two distinct edges would join the same pair of vertices.
    pub multi_edge: u64,
    /// The patch would stop being planar.
    pub genus: u64,
    /// Some open vertex had no way to continue.
    pub dead_vertex: u64,
}

impl PruneCounts {
    fn add(&mut self, o: &PruneCounts) {
        self.vertex_partial += o.vertex_partial;
        self.vertex_closed += o.vertex_closed;
        self.tile_counts += o.tile_counts;
        self.adjacency += o.adjacency;
        self.repeated_corner += o.repeated_corner;
        self.multi_edge += o.multi_edge;
        self.genus += o.genus;
        self.dead_vertex += o.dead_vertex;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: PruneCounts,
    /// Closed patches reached, before deduplication.
    pub closed_patches: u64,
    /// Closed patches rejected by the structural checks of a tiling.
    pub invalid_closed: u64,
    /// Closed tilings using a single kind of tile, discarded.
    pub monohedral: u64,
    /// Closed tilings that fail verification or do not embed.
    pub unrealizable: u64,
}

impl SearchStats {
    fn add(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.prunes.add(&o.prunes);
        self.closed_patches += o.closed_patches;
        self.invalid_closed += o.invalid_closed;
        self.monohedral += o.monohedral;
        self.unrealizable += o.unrealizable;
    }
}

/// A tiling found by the search, in canonical numbering.
#[derive(Debug, Clone)]
pub struct Found {
    pub code: Vec<u8>,
    pub tiling: Tiling,
    pub angles: AngleSet,
    pub chiral: bool,
}

#[derive(Debug, Clone)]
pub struct ClassifyOutcome {
    /// Sorted by canonical code, pairwise non-isomorphic.
    pub tilings: Vec<Found>,
    pub stats: SearchStats,
}

/// All closed dihedral tilings with at most `max_f` tiles whose vertices all
/// belong to `avc`, up to isomorphism including reflections.
pub fn classify(angles: &AngleSet, avc: &Avc, max_f: u32) -> Result<Vec<Tiling>> {
    let out = classify_with(angles, avc, &ClassifyConfig::new(max_f))?;
    Ok(out.tilings.into_iter().map(|f| f.tiling).collect())
}

pub fn classify_with(
    angles: &AngleSet,
    avc: &Avc,
    config: &ClassifyConfig,
) -> Result<ClassifyOutcome> {
    config.validate()?;
    let ctx = Ctx::new(angles, avc, config);
    let counter = AtomicU64::new(0);
    run_search(&ctx, &counter, config)
}

struct Ctx<'a> {
    angles: &'a AngleSet,
    tol: &'a Tolerances,
    entries: Vec<VertexType>,
    max_f: u32,
    selection: Selection,
    node_cap: u64,
    /// reachable[s][r]: some feasible (f, n_square) has n_square >= s and
    /// f - n_square >= r.
    reachable: Vec<Vec<bool>>,
}

impl<'a> Ctx<'a> {
    fn new(angles: &'a AngleSet, avc: &Avc, config: &'a ClassifyConfig) -> Self {
        let max_f = config.max_f;
        let n = max_f as usize + 1;
        let mut reachable = vec![vec![false; n + 1]; n + 1];
        for (f, s) in feasible_counts(avc, max_f) {
            let (f, s) = (f as usize, s as usize);
            for row in &mut reachable[..=s] {
                row[..=f - s].fill(true);
            }
        }
        Ctx {
            angles,
            tol: &config.tol,
            entries: avc
                .entries
                .iter()
                .copied()
                .filter(|v| v.degree() >= 3)
                .collect(),
            max_f,
            selection: config.selection,
            node_cap: config.node_cap,
            reachable,
        }
    }

    fn partial_ok(&self, v: &VertexType) -> bool {
        self.entries.iter().any(|e| v.is_sub_of(e))
    }

    fn closed_ok(&self, v: &VertexType) -> bool {
        self.entries.contains(v)
    }

    fn counts_ok(&self, squares: u32, rhombi: u32) -> bool {
        let (s, r) = (squares as usize, rhombi as usize);
        squares + rhombi <= self.max_f
            && s < self.reachable.len()
            && r < self.reachable[s].len()
            && self.reachable[s][r]
    }
}

fn next(h: u32) -> u32 {
    (h & !3) | ((h + 1) & 3)
}

fn prev(h: u32) -> u32 {
    (h & !3) | ((h + 3) & 3)
}

fn face(h: u32) -> u32 {
    h >> 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Tile(FaceKind, Corner),
    Glue(u32),
}

#[derive(Debug, Clone)]
struct Patch {
    kinds: Vec<FaceKind>,
    labels: Vec<Corner>,
    twin: Vec<u32>,
    vert: Vec<u32>,
    vtype: Vec<VertexType>,
    squares: u32,
    rhombi: u32,
    unmatched: u32,
    next_vertex: u32,
    live_vertices: u32,
}

enum Step {
    Closed,
    Dead,
    Children(Vec<Patch>),
}

fn tile_labels(kind: FaceKind, at_v: Corner) -> [Corner; 4] {
    use Corner::{Alpha, Beta, Gamma};
    match (kind, at_v) {
        (FaceKind::Square, _) => [Alpha; 4],
        (FaceKind::Rhombus, Beta) => [Beta, Gamma, Beta, Gamma],
        (FaceKind::Rhombus, _) => [Gamma, Beta, Gamma, Beta],
    }
}

const TILE_MOVES: [(FaceKind, Corner); 3] = [
    (FaceKind::Square, Corner::Alpha),
    (FaceKind::Rhombus, Corner::Beta),
    (FaceKind::Rhombus, Corner::Gamma),
];

impl Patch {
    fn seed() -> Patch {
        Patch {
            kinds: vec![FaceKind::Square],
            labels: vec![Corner::Alpha; 4],
            twin: vec![NONE; 4],
            vert: vec![0, 1, 2, 3],
            vtype: vec![VertexType::new(1, 0, 0); 4],
            squares: 1,
            rhombi: 0,
            unmatched: 4,
            next_vertex: 4,
            live_vertices: 4,
        }
    }

    fn new_vertex(&mut self, t: VertexType) -> u32 {
        let id = self.next_vertex;
        self.next_vertex += 1;
        self.live_vertices += 1;
        self.vtype.push(t);
        id
    }

    /// Moves worth trying at the open vertex whose gap starts after the
    /// boundary half-edge `p`, using only cheap corner-count checks.
    fn candidate_moves(&self, ctx: &Ctx, p: u32, out: &mut Vec<Move>) {
        out.clear();
        let v = self.vert[next(p) as usize];
        let u = self.vert[p as usize];
        let tv = self.vtype[v as usize];
        let tu = self.vtype[u as usize];
        for (kind, at_v) in TILE_MOVES {
            let l = tile_labels(kind, at_v);
            let (s, r) = match kind {
                FaceKind::Square => (self.squares + 1, self.rhombi),
                FaceKind::Rhombus => (self.squares, self.rhombi + 1),
            };
            if ctx.counts_ok(s, r)
                && ctx.partial_ok(&tv.with(l[0]))
                && ctx.partial_ok(&tu.with(l[1]))
            {
                out.push(Move::Tile(kind, at_v));
            }
        }
        for g in 0..self.twin.len() as u32 {
            if self.twin[g as usize] != NONE || g == p || face(g) == face(p) {
                continue;
            }
            let w = self.vert[g as usize];
            let x = self.vert[next(g) as usize];
            if w == u || x == v {
                continue;
            }
            let ok_v = if w == v {
                ctx.closed_ok(&tv)
            } else {
                ctx.partial_ok(&(tv + self.vtype[w as usize]))
            };
            let ok_u = if x == u {
                ctx.closed_ok(&tu)
            } else {
                ctx.partial_ok(&(tu + self.vtype[x as usize]))
            };
            if ok_v && ok_u {
                out.push(Move::Glue(g));
            }
        }
    }

    fn merge_vertex(&mut self, keep: u32, gone: u32) {
        if keep == gone {
            return;
        }
        for v in self.vert.iter_mut() {
            if *v == gone {
                *v = keep;
            }
        }
        let t = self.vtype[gone as usize];
        self.vtype[keep as usize] = self.vtype[keep as usize] + t;
        self.vtype[gone as usize] = VertexType::default();
        self.live_vertices -= 1;
    }

    fn apply(&self, ctx: &Ctx, p: u32, mv: Move, prunes: &mut PruneCounts) -> Option<Patch> {
        let v = self.vert[next(p) as usize];
        let u = self.vert[p as usize];
        match mv {
            Move::Tile(kind, at_v) => {
                let l = tile_labels(kind, at_v);
                let mut s = self.clone();
                match kind {
                    FaceKind::Square => s.squares += 1,
                    FaceKind::Rhombus => s.rhombi += 1,
                }
                if !ctx.counts_ok(s.squares, s.rhombi) {
                    prunes.tile_counts += 1;
                    return None;
                }
                let f = s.kinds.len() as u32;
                s.kinds.push(kind);
                s.labels.extend_from_slice(&l);
                let n2 = s.new_vertex(VertexType::default().with(l[2]));
                let n3 = s.new_vertex(VertexType::default().with(l[3]));
                s.vert.extend_from_slice(&[v, u, n2, n3]);
                s.vtype[v as usize] = s.vtype[v as usize].with(l[0]);
                s.vtype[u as usize] = s.vtype[u as usize].with(l[1]);
                for x in [v, u, n2, n3] {
                    if !ctx.partial_ok(&s.vtype[x as usize]) {
                        prunes.vertex_partial += 1;
                        return None;
                    }
                }
                let g = 4 * f;
                s.twin.extend_from_slice(&[p, NONE, NONE, NONE]);
                s.twin[p as usize] = g;
                s.unmatched += 2;
                Some(s)
            }
            Move::Glue(g) => {
                let (fp, fg) = (face(p), face(g));
                if fp == fg
                    || (0..4).any(|k| {
                        let t = self.twin[(4 * fp + k) as usize];
                        t != NONE && face(t) == fg
                    })
                {
                    prunes.adjacency += 1;
                    return None;
                }
                let w = self.vert[g as usize];
                let x = self.vert[next(g) as usize];
                if w == u || x == v {
                    prunes.adjacency += 1;
                    return None;
                }
                let mut s = self.clone();
                s.twin[p as usize] = g;
                s.twin[g as usize] = p;
                s.unmatched -= 2;
                let close_v = w == v;
                let close_u = x == u;
                s.merge_vertex(v, w);
                s.merge_vertex(u, x);
                for (vert, closed) in [(v, close_v), (u, close_u)] {
                    let t = s.vtype[vert as usize];
                    if closed {
                        if !ctx.closed_ok(&t) {
                            prunes.vertex_closed += 1;
                            return None;
                        }
                    } else if !ctx.partial_ok(&t) {
                        prunes.vertex_partial += 1;
                        return None;
                    }
                }
                if !s.faces_distinct_at(v) || !s.faces_distinct_at(u) {
                    prunes.repeated_corner += 1;
                    return None;
                }
                if !s.edges_simple_at(v) || !s.edges_simple_at(u) {
                    prunes.multi_edge += 1;
                    return None;
                }
                if !s.planar() {
                    prunes.genus += 1;
                    return None;
                }
                Some(s)
            }
        }
    }

    fn faces_distinct_at(&self, v: u32) -> bool {
        let mut seen: Vec<u32> = Vec::with_capacity(8);
        for (h, &x) in self.vert.iter().enumerate() {
            if x == v {
                let f = face(h as u32);
                if seen.contains(&f) {
                    return false;
                }
                seen.push(f);
            }
        }
        true
    }

    /// At most one edge between `v` and any other vertex, except for a pair
    /// of opposite boundary half-edges that may still be glued together.
    fn edges_simple_at(&self, v: u32) -> bool {
        // (neighbor, edge key, direction out of v, matched)
        let mut edges: Vec<(u32, u32, bool, bool)> = Vec::with_capacity(16);
        for h in 0..self.vert.len() as u32 {
            if self.vert[h as usize] != v {
                continue;
            }
            for (e, out_of_v) in [(h, true), (prev(h), false)] {
                let other = if out_of_v {
                    self.vert[next(e) as usize]
                } else {
                    self.vert[e as usize]
                };
                if other == v {
                    return false;
                }
                let t = self.twin[e as usize];
                let key = if t == NONE { e } else { e.min(t) };
                if !edges.iter().any(|&(_, k, _, _)| k == key) {
                    edges.push((other, key, out_of_v, t != NONE));
                }
            }
        }
        for i in 0..edges.len() {
            let same: Vec<&(u32, u32, bool, bool)> =
                edges.iter().filter(|e| e.0 == edges[i].0).collect();
            match same.len() {
                1 => {}
                2 => {
                    let (a, b) = (same[0], same[1]);
                    if a.3 || b.3 || a.2 == b.2 {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }

    /// Open patches must be planar: V − E + F = 2 − (boundary cycles).
    fn planar(&self) -> bool {
        let n = self.twin.len();
        let matched = n as u32 - self.unmatched;
        let e = matched / 2 + self.unmatched;
        let chi = self.live_vertices as i64 - e as i64 + self.kinds.len() as i64;
        let mut seen = vec![false; n];
        let mut cycles = 0i64;
        for start in 0..n as u32 {
            if self.twin[start as usize] != NONE || seen[start as usize] {
                continue;
            }
            cycles += 1;
            let mut p = start;
            loop {
                seen[p as usize] = true;
                // boundary successor: the gap-side edge at the far end of p
                let mut h = next(p);
                while self.twin[h as usize] != NONE {
                    h = next(self.twin[h as usize]);
                }
                p = h;
                if p == start {
                    break;
                }
                if seen[p as usize] {
                    return false;
                }
            }
        }
        chi == 2 - cycles
    }

    fn step(&self, ctx: &Ctx, stats: &mut SearchStats) -> Step {
        if self.unmatched == 0 {
            return Step::Closed;
        }
        let mut best: Option<(u32, Vec<Move>)> = None;
        let mut buf = Vec::new();
        for p in 0..self.twin.len() as u32 {
            if self.twin[p as usize] != NONE {
                continue;
            }
            self.candidate_moves(ctx, p, &mut buf);
            if buf.is_empty() {
                stats.prunes.dead_vertex += 1;
                return Step::Dead;
            }
            if best.as_ref().is_none_or(|(_, b)| buf.len() < b.len()) {
                best = Some((p, buf.clone()));
                if buf.len() == 1 || ctx.selection == Selection::FirstOpen {
                    break;
                }
            }
        }
        let (p, moves) = best.expect("patch with boundary has an open vertex");
        let children = moves
            .into_iter()
            .filter_map(|mv| self.apply(ctx, p, mv, &mut stats.prunes))
            .collect();
        Step::Children(children)
    }

    fn to_faces(&self) -> Vec<FaceSpec> {
        let mut ids: BTreeMap<u32, usize> = BTreeMap::new();
        for &v in &self.vert {
            let n = ids.len();
            ids.entry(v).or_insert(n);
        }
        (0..self.kinds.len())
            .map(|f| {
                let hs = [4 * f, 4 * f + 1, 4 * f + 2, 4 * f + 3];
                FaceSpec {
                    kind: self.kinds[f],
                    vertices: hs.map(|h| ids[&self.vert[h]]),
                    corners: hs.map(|h| self.labels[h]),
                }
            })
            .collect()
    }
}

fn tick(ctx: &Ctx, counter: &AtomicU64, stats: &mut SearchStats) -> Result<()> {
    stats.nodes += 1;
    let n = counter.fetch_add(1, Ordering::Relaxed) + 1;
    if n > ctx.node_cap {
        return Err(Error::BudgetExceeded {
            explored: n,
            cap: ctx.node_cap,
        });
    }
    Ok(())
}

/// Checks a closed patch and returns it in canonical numbering.
fn finish(ctx: &Ctx, patch: &Patch, stats: &mut SearchStats) -> Option<Found> {
    stats.closed_patches += 1;
    let Ok(t) = Tiling::from_faces(&patch.to_faces()) else {
        stats.invalid_closed += 1;
        return None;
    };
    if t.is_monohedral() {
        stats.monohedral += 1;
        return None;
    }
    if !verify_with(&t, ctx.angles, ctx.tol).all_passed()
        || embed_with(&t, ctx.angles, ctx.tol).is_err()
    {
        stats.unrealizable += 1;
        return None;
    }
    let tiling = canonical_form(&t);
    Some(Found {
        code: canonical_code(&tiling),
        chiral: is_chiral(&tiling),
        tiling,
        angles: *ctx.angles,
    })
}

fn dfs(
    ctx: &Ctx,
    counter: &AtomicU64,
    patch: Patch,
    found: &mut BTreeMap<Vec<u8>, Found>,
    stats: &mut SearchStats,
) -> Result<()> {
    tick(ctx, counter, stats)?;
    match patch.step(ctx, stats) {
        Step::Closed => {
            if let Some(f) = finish(ctx, &patch, stats) {
                found.entry(f.code.clone()).or_insert(f);
            }
        }
        Step::Dead => {}
        Step::Children(children) => {
            for c in children {
                dfs(ctx, counter, c, found, stats)?;
            }
        }
    }
    Ok(())
}

fn run_search(ctx: &Ctx, counter: &AtomicU64, config: &ClassifyConfig) -> Result<ClassifyOutcome> {
    let mut stats = SearchStats::default();
    let mut found: BTreeMap<Vec<u8>, Found> = BTreeMap::new();
    if ctx.entries.is_empty() || !ctx.counts_ok(1, 0) {
        return Ok(ClassifyOutcome {
            tilings: Vec::new(),
            stats,
        });
    }
    // breadth-first until there is enough independent work to share
    let target = 64 * config.jobs.max(1);
    let mut frontier = vec![Patch::seed()];
    for _ in 0..6 {
        if frontier.len() >= target {
            break;
        }
        let mut next_level = Vec::new();
        for patch in frontier {
            tick(ctx, counter, &mut stats)?;
            match patch.step(ctx, &mut stats) {
                Step::Closed => {
                    if let Some(f) = finish(ctx, &patch, &mut stats) {
                        found.entry(f.code.clone()).or_insert(f);
                    }
                }
                Step::Dead => {}
                Step::Children(c) => next_level.extend(c),
            }
        }
        frontier = next_level;
    }
    let results = crate::par::map_ordered(config.jobs, frontier, |patch| {
        let mut local_found = BTreeMap::new();
        let mut local_stats = SearchStats::default();
        dfs(ctx, counter, patch, &mut local_found, &mut local_stats)
            .map(|_| (local_found, local_stats))
    });
    for r in results {
        let (f, s) = r?;
        stats.add(&s);
        for (k, v) in f {
            found.entry(k).or_insert(v);
        }
    }
    Ok(ClassifyOutcome {
        tilings: found.into_values().collect(),
        stats,
    })
}

/// One angle system examined by [`classify_all`].
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    /// Vertex equations the angles were solved from.
    pub equations: Vec<VertexType>,
    pub angles: AngleSet,
    pub avc: Avc,
    pub stats: SearchStats,
    pub found: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifiedTiling {
    /// Short digest of the canonical code.
    pub digest: String,
    pub code: String,
    pub family: Option<String>,
    pub angles: AngleSet,
    pub faces: usize,
    pub squares: usize,
    pub rhombi: usize,
    pub realized_avc: Avc,
    pub chiral: bool,
    #[serde(skip)]
    pub tiling: Option<Tiling>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyAllReport {
    pub max_f: u32,
    pub tilings: Vec<ClassifiedTiling>,
    pub runs: Vec<RunSummary>,
    pub totals: SearchStats,
    /// Angle systems skipped before searching, by reason.
    pub skipped_no_alpha_beta_or_alpha_gamma: usize,
    pub skipped_infeasible_counts: usize,
    pub wall_time_ms: u128,
}

/// Angle points to examine: the generic point of the one-parameter family
/// of {αβγ}, the earth-map points with 8c − 2 ≤ `max_f`, and every
/// admissible solution of a degree-3 vertex paired with one more vertex of
/// degree at most `max_f − 3`.
pub fn candidate_angle_systems(
    max_f: u32,
    tol: &Tolerances,
) -> Result<Vec<(Vec<VertexType>, AngleSet)>> {
    let max_deg = max_f.saturating_sub(3).max(3);
    let mut out: Vec<(Vec<VertexType>, AngleSet)> = Vec::new();
    let cube = VertexType::new(1, 1, 1);
    let sol = solve_vertex_system_with(&[cube], tol)?;
    if sol.kind == SolutionKind::Curve {
        out.extend(sol.points.iter().map(|p| (vec![cube], *p)));
    }
    for c in 2..=(max_f + 2) / 8 {
        out.push((
            vec![VertexType::new(0, 2, 1), VertexType::new(1, 1, c)],
            earth_map_angles(c)?,
        ));
    }
    let seeds = enumerate_degree3_seeds().admitted;
    for s in &seeds {
        for a in 0..=max_deg {
            for b in 0..=max_deg - a {
                for c in 0..=max_deg - a - b {
                    let p = VertexType::new(a, b, c);
                    if p.degree() < 3 || p == *s {
                        continue;
                    }
                    // each unordered pair of seeds once
                    if p.degree() == 3 && seeds.contains(&p) && p < *s {
                        continue;
                    }
                    match solve_vertex_system_with(&[*s, p], tol) {
                        Ok(sol) => {
                            for pt in sol.points {
                                out.push((vec![*s, p], pt));
                            }
                        }
                        Err(Error::IllConditioned(_)) => continue,
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    // the same point may arise from several pairs; keep the first
    let mut unique: Vec<(Vec<VertexType>, AngleSet)> = Vec::new();
    for (eqs, a) in out {
        let dup = unique.iter().any(|(_, b)| {
            (a.alpha - b.alpha).abs() < 1e-9
                && (a.beta - b.beta).abs() < 1e-9
                && (a.gamma - b.gamma).abs() < 1e-9
        });
        if !dup {
            unique.push((eqs, a));
        }
    }
    Ok(unique)
}

/// Classifies every dihedral tiling with at most `max_f` tiles.
pub fn classify_all(max_f: u32) -> Result<Vec<(AngleSet, Tiling)>> {
    let report = classify_all_with(&ClassifyConfig::new(max_f))?;
    Ok(report
        .tilings
        .into_iter()
        .map(|t| (t.angles, t.tiling.expect("tiling retained")))
        .collect())
}

pub fn classify_all_with(config: &ClassifyConfig) -> Result<ClassifyAllReport> {
    config.validate()?;
    let start = Instant::now();
    let max_f = config.max_f;
    let systems = candidate_angle_systems(max_f, &config.tol)?;
    let mut skipped_lemma = 0;
    let mut skipped_counts = 0;
    let mut jobs = Vec::new();
    for (eqs, angles) in systems {
        let avc = enumerate_vertices(&angles, None, config.tol.vertex);
        let has = |f: fn(&VertexType) -> bool| avc.entries.iter().any(f);
        if !has(|v| v.a > 0 && v.b > 0) || !has(|v| v.a > 0 && v.c > 0) {
            skipped_lemma += 1;
            continue;
        }
        if feasible_counts(&avc, max_f).is_empty() {
            skipped_counts += 1;
            continue;
        }
        jobs.push((eqs, angles, avc));
    }

    let counter = AtomicU64::new(0);
    let mut runs = Vec::new();
    let mut totals = SearchStats::default();
    let mut merged: BTreeMap<Vec<u8>, Found> = BTreeMap::new();
    for (eqs, angles, avc) in jobs {
        let ctx = Ctx::new(&angles, &avc, config);
        // each system gets the full node cap
        counter.store(0, Ordering::Relaxed);
        let out = run_search(&ctx, &counter, config)?;
        totals.add(&out.stats);
        runs.push(RunSummary {
            equations: eqs,
            angles,
            avc: avc.clone(),
            stats: out.stats,
            found: out.tilings.len(),
        });
        for f in out.tilings {
            merged.entry(f.code.clone()).or_insert(f);
        }
    }

    let catalog: Vec<(Vec<u8>, FamilyId)> = FamilyId::all_up_to(max_f)
        .into_iter()
        .filter_map(|id| build(&id).ok().map(|t| (canonical_code(&t), id)))
        .collect();
    let tilings = merged
        .into_values()
        .map(|f| {
            let family = catalog
                .iter()
                .find(|(c, _)| *c == f.code)
                .map(|(_, id)| id.to_string());
            let s = f.tiling.stats();
            ClassifiedTiling {
                digest: code_digest(&f.code),
                code: code_hex(&f.code),
                family,
                angles: f.angles,
                faces: s.f as usize,
                squares: s.n_square as usize,
                rhombi: s.n_rhombus as usize,
                realized_avc: crate::mesh::realized_avc(&f.tiling),
                chiral: f.chiral,
                tiling: Some(f.tiling),
            }
        })
        .collect();
    Ok(ClassifyAllReport {
        max_f,
        tilings,
        runs,
        totals,
        skipped_no_alpha_beta_or_alpha_gamma: skipped_lemma,
        skipped_infeasible_counts: skipped_counts,
        wall_time_ms: start.elapsed().as_millis(),
    })
}
