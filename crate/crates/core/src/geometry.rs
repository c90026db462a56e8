//! Prototile angles, the compatibility equation between square and rhombus,
//! vertex angle-sum systems and the earth map existence function c(γ).

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::FamilyId;
use crate::roots::{all_sign_change_roots, bisect_secant};
use crate::tolerance::Tolerances;
use crate::vertex::VertexType;
use crate::{Error, Result};

/// Interior samples used when scanning a line of candidate angle triples.
const LINE_SAMPLES: usize = 512;
/// Candidate triples closer than this to an invariant boundary are rejected.
const STRICT_MARGIN: f64 = 1e-12;

/// Corner angles of the square (α) and rhombus (β, γ) plus the common edge
/// length x, all in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSet {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub x: f64,
}

impl AngleSet {
    /// Builds an angle set, deriving x from α. Invariants are not checked.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(AngleSet {
            alpha,
            beta,
            gamma,
            x: edge_length(alpha)?,
        })
    }

    /// Same as [`AngleSet::new`] with arguments given as multiples of π.
    pub fn from_pi(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        AngleSet::new(alpha * PI, beta * PI, gamma * PI)
    }

    pub fn eq5_residual(&self) -> f64 {
        eq5_raw(self.alpha, self.beta, self.gamma)
    }

    /// Checks every invariant, reporting the first violation.
    pub fn validate(&self, tol_eq5: f64) -> Result<()> {
        let AngleSet {
            alpha,
            beta,
            gamma,
            x,
        } = *self;
        let ok_order = 0.0 < gamma && gamma < alpha && alpha < beta && beta < PI;
        if !ok_order {
            return Err(Error::domain(format!(
                "angles must satisfy 0 < γ < α < β < π, got {self}"
            )));
        }
        if alpha <= FRAC_PI_2 || beta + gamma <= PI {
            return Err(Error::domain(format!(
                "need α > π/2 and β + γ > π, got {self}"
            )));
        }
        let r = self.eq5_residual();
        if !(r.abs() <= tol_eq5) {
            return Err(Error::domain(format!(
                "compatibility residual {r:.3e} exceeds {tol_eq5:.1e} at {self}"
            )));
        }
        let cot2 = 1.0 / (alpha / 2.0).tan().powi(2);
        if !(x > 0.0 && x < FRAC_PI_2) || (x.cos() - cot2).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "edge length {x} inconsistent with α"
            )));
        }
        Ok(())
    }

    pub fn is_valid(&self, tol_eq5: f64) -> bool {
        self.validate(tol_eq5).is_ok()
    }

    /// Spherical area of the square.
    pub fn square_area(&self) -> f64 {
        4.0 * self.alpha - TAU
    }

    /// Spherical area of the rhombus.
    pub fn rhombus_area(&self) -> f64 {
        2.0 * (self.beta + self.gamma) - TAU
    }

    pub fn in_pi(&self) -> [f64; 4] {
        [
            self.alpha / PI,
            self.beta / PI,
            self.gamma / PI,
            self.x / PI,
        ]
    }
}

impl fmt::Display for AngleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, x] = self.in_pi();
        write!(f, "α={a:.6}π β={b:.6}π γ={c:.6}π x={x:.6}π")
    }
}

/// x = arccos(cot²(α/2)).
pub fn edge_length(alpha: f64) -> Result<f64> {
    if !(alpha > FRAC_PI_2 && alpha < PI) {
        return Err(Error::domain(format!(
            "edge length needs π/2 < α < π, got α = {:.6}π",
            alpha / PI
        )));
    }
    let cot2 = 1.0 / (alpha / 2.0).tan().powi(2);
    Ok(cot2.acos())
}

fn eq5_raw(alpha: f64, beta: f64, gamma: f64) -> f64 {
    (alpha / 2.0).tan().powi(2) - (beta / 2.0).tan() * (gamma / 2.0).tan()
}

/// tan²(α/2) − tan(β/2)·tan(γ/2).
pub fn eq5_residual(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    for (name, v) in [("α", alpha), ("β", beta), ("γ", gamma)] {
        if !(v > 0.0 && v < PI) {
            return Err(Error::domain(format!("{name} = {v} outside (0, π)")));
        }
    }
    Ok(eq5_raw(alpha, beta, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    Empty,
    Point,
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeVariable {
    Alpha,
    Gamma,
}

/// A one-parameter family cut out by a single vertex equation and the
/// compatibility equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveParameterization {
    pub equation: VertexType,
    pub free: FreeVariable,
    /// Open interval of the free variable on which solutions exist.
    pub interval: (f64, f64),
}

impl CurveParameterization {
    /// Admissible angle sets with the free variable fixed to `t`.
    pub fn sample(&self, t: f64) -> Vec<AngleSet> {
        sample_curve(self.equation, self.free, t, &Tolerances::default()).unwrap_or_default()
    }
}

impl fmt::Display for CurveParameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.free {
            FreeVariable::Alpha => "α",
            FreeVariable::Gamma => "γ",
        };
        write!(
            f,
            "{} = 2π, free {name} ∈ ({:.6}π, {:.6}π)",
            self.equation,
            self.interval.0 / PI,
            self.interval.1 / PI
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub kind: SolutionKind,
    /// Solutions for `Point`; representative samples for `Curve`.
    pub points: Vec<AngleSet>,
    pub parameterization: Option<CurveParameterization>,
}

impl SolutionSet {
    pub fn empty() -> Self {
        SolutionSet {
            kind: SolutionKind::Empty,
            points: Vec::new(),
            parameterization: None,
        }
    }

    pub fn points(points: Vec<AngleSet>) -> Self {
        if points.is_empty() {
            return SolutionSet::empty();
        }
        SolutionSet {
            kind: SolutionKind::Point,
            points,
            parameterization: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.kind == SolutionKind::Empty
    }

    /// The unique point, if this is a point solution with one element.
    pub fn single_point(&self) -> Option<AngleSet> {
        match (self.kind, self.points.as_slice()) {
            (SolutionKind::Point, [p]) => Some(*p),
            _ => None,
        }
    }
}

/// Affine constraint w·(α,β,γ) + c0 > 0.
struct Constraint {
    w: [f64; 3],
    c0: f64,
}

fn invariant_constraints() -> [Constraint; 6] {
    [
        Constraint {
            w: [0.0, 0.0, 1.0],
            c0: 0.0,
        },
        Constraint {
            w: [1.0, 0.0, -1.0],
            c0: 0.0,
        },
        Constraint {
            w: [-1.0, 1.0, 0.0],
            c0: 0.0,
        },
        Constraint {
            w: [0.0, -1.0, 0.0],
            c0: PI,
        },
        Constraint {
            w: [1.0, 0.0, 0.0],
            c0: -FRAC_PI_2,
        },
        Constraint {
            w: [0.0, 1.0, 1.0],
            c0: -PI,
        },
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn at(p0: [f64; 3], d: [f64; 3], t: f64) -> [f64; 3] {
    [p0[0] + t * d[0], p0[1] + t * d[1], p0[2] + t * d[2]]
}

/// Open t-interval on which p0 + t·d satisfies every invariant inequality.
fn admissible_interval(p0: [f64; 3], d: [f64; 3]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for c in invariant_constraints() {
        let base = dot(c.w, p0) + c.c0;
        let slope = dot(c.w, d);
        if slope.abs() < 1e-15 {
            if base <= 0.0 {
                return None;
            }
        } else if slope > 0.0 {
            lo = lo.max(-base / slope);
        } else {
            hi = hi.min(-base / slope);
        }
    }
    (lo.is_finite() && hi.is_finite() && hi > lo).then_some((lo, hi))
}

fn strictly_admissible(p: [f64; 3]) -> bool {
    invariant_constraints()
        .iter()
        .all(|c| dot(c.w, p) + c.c0 > STRICT_MARGIN)
}

/// All admissible roots of the compatibility equation along p0 + t·d.
fn solve_on_line(p0: [f64; 3], d: [f64; 3], tol: &Tolerances) -> Result<Vec<AngleSet>> {
    let Some((lo, hi)) = admissible_interval(p0, d) else {
        return Ok(Vec::new());
    };
    let f = |t: f64| {
        let p = at(p0, d, t);
        eq5_raw(p[0], p[1], p[2])
    };
    let mut out: Vec<(f64, AngleSet)> = Vec::new();
    for root in all_sign_change_roots(f, lo, hi, LINE_SAMPLES, 0.0) {
        let p = at(p0, d, root.x);
        if !strictly_admissible(p) {
            continue;
        }
        let r = eq5_raw(p[0], p[1], p[2]);
        if r.abs() > 1e-6 {
            return Err(Error::IllConditioned(format!(
                "sign change at t = {} does not converge (residual {r:.3e})",
                root.x
            )));
        }
        if r.abs() > tol.eq5 {
            return Err(Error::IllConditioned(format!(
                "root at t = {} only reaches residual {r:.3e} > {:.1e}",
                root.x, tol.eq5
            )));
        }
        if out.iter().any(|(t, _)| (t - root.x).abs() < 1e-9) {
            continue;
        }
        let angles = AngleSet::new(p[0], p[1], p[2])?;
        if angles.is_valid(tol.eq5) {
            out.push((root.x, angles));
        }
    }
    Ok(out.into_iter().map(|(_, a)| a).collect())
}

fn sample_curve(
    v: VertexType,
    free: FreeVariable,
    t: f64,
    tol: &Tolerances,
) -> Result<Vec<AngleSet>> {
    let [a, b, c] = v.coefficients();
    match free {
        FreeVariable::Gamma => {
            let gamma = t;
            if b > 0.0 {
                // β = (2π − aα − cγ)/b with α free along the line
                let p0 = [0.0, (TAU - c * gamma) / b, gamma];
                solve_on_line(p0, [1.0, -a / b, 0.0], tol)
            } else if a > 0.0 {
                let alpha = (TAU - c * gamma) / a;
                solve_on_line([alpha, 0.0, gamma], [0.0, 1.0, 0.0], tol)
            } else {
                Ok(Vec::new())
            }
        }
        FreeVariable::Alpha => {
            // only reached for pure γ vertices: γ is pinned, β moves
            if c == 0.0 {
                return Ok(Vec::new());
            }
            let gamma = TAU / c;
            solve_on_line([t, 0.0, gamma], [0.0, 1.0, 0.0], tol)
        }
    }
}

fn curve_for(v: VertexType, tol: &Tolerances) -> Result<SolutionSet> {
    let free = if v.a == 0 && v.b == 0 {
        FreeVariable::Alpha
    } else {
        FreeVariable::Gamma
    };
    let has = |t: f64| {
        sample_curve(v, free, t, tol)
            .map(|s| !s.is_empty())
            .unwrap_or(false)
    };

    const GRID: usize = 2000;
    let step = PI / GRID as f64;
    let valid: Vec<usize> = (1..GRID).filter(|&i| has(i as f64 * step)).collect();
    let (Some(&first), Some(&last)) = (valid.first(), valid.last()) else {
        return Ok(SolutionSet::empty());
    };
    // sharpen both ends of the interval by bisection on existence
    let refine = |mut inside: f64, mut outside: f64| {
        for _ in 0..60 {
            let m = 0.5 * (inside + outside);
            if has(m) {
                inside = m;
            } else {
                outside = m;
            }
        }
        0.5 * (inside + outside)
    };
    let lo = refine(first as f64 * step, (first - 1) as f64 * step);
    let hi = refine(last as f64 * step, (last + 1) as f64 * step);

    let preferred = match free {
        FreeVariable::Gamma => FRAC_PI_2,
        FreeVariable::Alpha => 0.5 * (lo + hi),
    };
    let t = if preferred > lo && preferred < hi && has(preferred) {
        preferred
    } else {
        0.5 * (first + last) as f64 * step
    };
    let points = sample_curve(v, free, t, tol)?;
    Ok(SolutionSet {
        kind: SolutionKind::Curve,
        points,
        parameterization: Some(CurveParameterization {
            equation: v,
            free,
            interval: (lo, hi),
        }),
    })
}

/// Solves one or two vertex equations together with the compatibility
/// equation and all angle invariants.
pub fn solve_vertex_system(equations: &[VertexType]) -> Result<SolutionSet> {
    solve_vertex_system_with(equations, &Tolerances::default())
}

pub fn solve_vertex_system_with(equations: &[VertexType], tol: &Tolerances) -> Result<SolutionSet> {
    match equations {
        [v] => {
            if v.degree() == 0 {
                return Ok(SolutionSet::empty());
            }
            curve_for(*v, tol)
        }
        [v1, v2] => {
            if v1 == v2 {
                return solve_vertex_system_with(&[*v1], tol);
            }
            let (r1, r2) = (v1.coefficients(), v2.coefficients());
            let d = cross(r1, r2);
            let dn = dot(d, d).sqrt();
            if dn < 1e-12 {
                // parallel rows with equal right-hand sides would be identical
                return Ok(SolutionSet::empty());
            }
            let d = [d[0] / dn, d[1] / dn, d[2] / dn];
            // minimal-norm particular solution of the 2×3 system
            let g11 = dot(r1, r1);
            let g12 = dot(r1, r2);
            let g22 = dot(r2, r2);
            let det = g11 * g22 - g12 * g12;
            let y1 = TAU * (g22 - g12) / det;
            let y2 = TAU * (g11 - g12) / det;
            let p0 = [
                y1 * r1[0] + y2 * r2[0],
                y1 * r1[1] + y2 * r2[1],
                y1 * r1[2] + y2 * r2[2],
            ];
            Ok(SolutionSet::points(solve_on_line(p0, d, tol)?))
        }
        _ => Err(Error::domain(format!(
            "expected one or two vertex equations, got {}",
            equations.len()
        ))),
    }
}

/// T(γ) = arctan √(tan(γ/4) / tan(γ/2)).
pub fn t_of_gamma(gamma: f64) -> Result<f64> {
    check_gamma_domain(gamma)?;
    Ok(((gamma / 4.0).tan() / (gamma / 2.0).tan()).sqrt().atan())
}

/// c(γ) = (2/γ)·T(γ) + 1/2.
pub fn c_of_gamma(gamma: f64) -> Result<f64> {
    Ok(2.0 / gamma * t_of_gamma(gamma)? + 0.5)
}

fn check_gamma_domain(gamma: f64) -> Result<()> {
    // π/2 itself is accepted: the curve is continuous there and c(π/2) is quoted
    if !(gamma > 0.0 && gamma <= FRAC_PI_2) {
        return Err(Error::domain(format!("γ = {gamma} outside (0, π/2]")));
    }
    Ok(())
}

/// 2·tan²((2c−1)γ/4) + tan²(γ/4) − 1.
pub fn eq14_residual(gamma: f64, c: f64) -> f64 {
    2.0 * ((2.0 * c - 1.0) * gamma / 4.0).tan().powi(2) + (gamma / 4.0).tan().powi(2) - 1.0
}

/// The unique γ in (0, π/2) with c(γ) = c.
pub fn gamma_of_c(c: u32) -> Result<f64> {
    if c < 2 {
        return Err(Error::domain(format!(
            "earth map parameter c must be at least 2, got {c}"
        )));
    }
    let target = c as f64;
    let g = |gamma: f64| c_of_gamma(gamma).map(|v| v - target).unwrap_or(f64::NAN);
    // c(γ) > 2T(γ)/γ > 1.1/γ, so c(γ) > c at γ = 1/c
    let lo = 1.0 / target;
    let root = bisect_secant(g, lo, FRAC_PI_2, 0.0).ok_or_else(|| {
        Error::IllConditioned(format!("c(γ) − {c} is not bracketed on [1/c, π/2]"))
    })?;
    if root.residual.abs() >= 1e-12 {
        return Err(Error::IllConditioned(format!(
            "c(γ) = {c} solved only to {:.3e}",
            root.residual
        )));
    }
    Ok(root.x)
}

/// Angles of the earth map tiling with parameter c.
pub fn earth_map_angles(c: u32) -> Result<AngleSet> {
    let gamma = gamma_of_c(c)?;
    let alpha = PI - (c as f64 - 0.5) * gamma;
    let beta = PI - gamma / 2.0;
    AngleSet::new(alpha, beta, gamma)
}

/// Defining vertex equations of each family's angle system.
pub fn family_equations(family: &FamilyId) -> Vec<VertexType> {
    match family {
        FamilyId::Cube => vec![VertexType::new(1, 1, 1)],
        FamilyId::EarthMap(c) => vec![VertexType::new(0, 2, 1), VertexType::new(1, 1, *c)],
        FamilyId::Fusion1 | FamilyId::Fusion2 => {
            vec![VertexType::new(1, 2, 0), VertexType::new(1, 1, 2)]
        }
        FamilyId::QuadSubdivision => vec![VertexType::new(0, 3, 0), VertexType::new(1, 1, 2)],
        FamilyId::Sporadic1 | FamilyId::Sporadic2 => {
            vec![VertexType::new(2, 1, 0), VertexType::new(3, 0, 1)]
        }
    }
}

/// Solves the angle system that defines `family`.
pub fn angles_for_family(family: &FamilyId) -> Result<SolutionSet> {
    family.validate()?;
    match family {
        FamilyId::EarthMap(c) => Ok(SolutionSet::points(vec![earth_map_angles(*c)?])),
        _ => solve_vertex_system(&family_equations(family)),
    }
}

/// One concrete angle set per family: the solved point, or the γ = π/2
/// sample of the cube curve.
pub fn representative_angles(family: &FamilyId) -> Result<AngleSet> {
    let sol = angles_for_family(family)?;
    sol.points
        .first()
        .copied()
        .ok_or_else(|| Error::domain(format!("no admissible angles for {family}")))
}

/// Named angle systems accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngleCase {
    /// {β³, αβγ²}, the angles of the quadrilateral subdivision.
    Beta3,
    /// {αβ², αβγ²}.
    Fusion,
    /// {α²β, α³γ}.
    Sporadic,
    EarthMap(u32),
    /// The γ = π/2 sample of the {αβγ} curve.
    Cube,
}

impl AngleCase {
    pub fn family(&self) -> FamilyId {
        match self {
            AngleCase::Beta3 => FamilyId::QuadSubdivision,
            AngleCase::Fusion => FamilyId::Fusion1,
            AngleCase::Sporadic => FamilyId::Sporadic1,
            AngleCase::EarthMap(c) => FamilyId::EarthMap(*c),
            AngleCase::Cube => FamilyId::Cube,
        }
    }

    pub fn equations(&self) -> Vec<VertexType> {
        family_equations(&self.family())
    }

    pub fn angles(&self) -> Result<AngleSet> {
        representative_angles(&self.family())
    }
}

impl fmt::Display for AngleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleCase::Beta3 => f.write_str("beta3"),
            AngleCase::Fusion => f.write_str("fusion"),
            AngleCase::Sporadic => f.write_str("sporadic"),
            AngleCase::EarthMap(c) => write!(f, "earth-map:{c}"),
            AngleCase::Cube => f.write_str("cube"),
        }
    }
}

impl std::str::FromStr for AngleCase {
    type Err = Error;

    /// Case names, or any catalog id (which selects that family's angles).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta3" => Ok(AngleCase::Beta3),
            "fusion" => Ok(AngleCase::Fusion),
            "sporadic" => Ok(AngleCase::Sporadic),
            _ => {
                let id: FamilyId = s.parse().map_err(|e| {
                    if s.starts_with("earth-map:") {
                        e
                    } else {
                        Error::domain(format!(
                            "unknown angle case {s:?}; expected beta3, fusion, sporadic, cube, earth-map:<c> or a catalog id"
                        ))
                    }
                })?;
                Ok(match id {
                    FamilyId::Cube => AngleCase::Cube,
                    FamilyId::EarthMap(c) => AngleCase::EarthMap(c),
                    FamilyId::Fusion1 | FamilyId::Fusion2 => AngleCase::Fusion,
                    FamilyId::QuadSubdivision => AngleCase::Beta3,
                    FamilyId::Sporadic1 | FamilyId::Sporadic2 => AngleCase::Sporadic,
                })
            }
        }
    }
}
