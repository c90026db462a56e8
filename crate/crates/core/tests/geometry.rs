use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use sphtile::catalog::FamilyId;
use sphtile::geometry::*;
use sphtile::vertex::VertexType;

fn vt(s: &str) -> VertexType {
    s.parse().unwrap()
}

/// Plain bisection, independent of the library's root finder.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn compat(a: f64, b: f64, g: f64) -> f64 {
    (a / 2.0).tan().powi(2) - (b / 2.0).tan() * (g / 2.0).tan()
}

fn assert_point(eqs: &[&str], alpha: f64, beta: f64, gamma: f64) {
    let eqs: Vec<VertexType> = eqs.iter().map(|s| vt(s)).collect();
    let sol = solve_vertex_system(&eqs).unwrap();
    let p = sol.single_point().expect("single point");
    assert_abs_diff_eq!(p.alpha, alpha, epsilon = 1e-10);
    assert_abs_diff_eq!(p.beta, beta, epsilon = 1e-10);
    assert_abs_diff_eq!(p.gamma, gamma, epsilon = 1e-10);
    assert_abs_diff_eq!(
        p.x.cos(),
        1.0 / (alpha / 2.0).tan().powi(2),
        epsilon = 1e-12
    );
}

#[test]
fn beta_cubed_point_matches_oracle() {
    // β = 2π/3, α = 4π/3 − 2γ
    let beta = 2.0 * PI / 3.0;
    let g = bisect(
        |g| compat(4.0 * PI / 3.0 - 2.0 * g, beta, g),
        0.3 * PI,
        0.41 * PI,
    );
    assert_point(&["b^3", "a b c^2"], 4.0 * PI / 3.0 - 2.0 * g, beta, g);
}

#[test]
fn fusion_point_matches_oracle() {
    // α = 2π − 2β, β = 2γ
    let g = bisect(
        |g| compat(2.0 * PI - 4.0 * g, 2.0 * g, g),
        0.34 * PI,
        0.374 * PI,
    );
    assert_point(&["a b^2", "a b c^2"], 2.0 * PI - 4.0 * g, 2.0 * g, g);
}

#[test]
fn sporadic_point_matches_oracle() {
    // β = 2π − 2α, γ = 2π − 3α
    let a = bisect(
        |a| compat(a, 2.0 * PI - 2.0 * a, 2.0 * PI - 3.0 * a),
        0.56 * PI,
        0.62 * PI,
    );
    assert_point(
        &["a^2 b", "a^3 c"],
        a,
        2.0 * PI - 2.0 * a,
        2.0 * PI - 3.0 * a,
    );
}

#[test]
fn printed_values() {
    let cases = [
        (
            vec!["b^3", "a b c^2"],
            [0.53584, 2.0 / 3.0, 0.39874, 0.20590],
        ),
        (
            vec!["a b^2", "a b c^2"],
            [0.55138, 0.72431, 0.36216, 0.24273],
        ),
        (vec!["a^2 b", "a^3 c"], [0.58043, 0.83914, 0.25871, 0.29517]),
    ];
    for (eqs, expect) in cases {
        let eqs: Vec<VertexType> = eqs.iter().map(|s| vt(s)).collect();
        let p = solve_vertex_system(&eqs).unwrap().single_point().unwrap();
        for (got, want) in p.in_pi().iter().zip(expect) {
            assert!((got - want).abs() < 1e-4, "{got} vs {want}");
        }
    }
}

#[test]
fn infeasible_pairs_are_empty() {
    for eqs in [["a^3", "b^2 c"], ["a^2 b", "b^2 c"]] {
        let eqs: Vec<VertexType> = eqs.iter().map(|s| vt(s)).collect();
        assert!(solve_vertex_system(&eqs).unwrap().is_empty(), "{eqs:?}");
    }
}

#[test]
fn cube_curve() {
    let sol = solve_vertex_system(&[vt("a b c")]).unwrap();
    assert_eq!(sol.kind, SolutionKind::Curve);
    let par = sol.parameterization.unwrap();
    assert_abs_diff_eq!(par.interval.1, 2.0 * PI / 3.0, epsilon = 1e-9);
    for p in &sol.points {
        assert!(p.is_valid(1e-9));
        assert_abs_diff_eq!(p.alpha + p.beta + p.gamma, 2.0 * PI, epsilon = 1e-12);
    }
    let p = representative_angles(&FamilyId::Cube).unwrap();
    assert_abs_diff_eq!(p.gamma, FRAC_PI_2, epsilon = 1e-12);
    assert_abs_diff_eq!(p.alpha / PI, 0.6829729, epsilon = 1e-6);
}

#[test]
fn c_at_right_angle() {
    assert_abs_diff_eq!(c_of_gamma(FRAC_PI_2).unwrap(), 1.2281133, epsilon = 1e-6);
    assert_abs_diff_eq!(t_of_gamma(FRAC_PI_2).unwrap(), 0.5718589, epsilon = 1e-6);
    assert!(c_of_gamma(0.0).is_err());
    assert!(c_of_gamma(FRAC_PI_2 + 1e-9).is_err());
}

#[test]
fn gamma_c_round_trip() {
    for c in 2..=50u32 {
        let g = gamma_of_c(c).unwrap();
        assert!((c_of_gamma(g).unwrap() - c as f64).abs() < 1e-10, "c = {c}");
        assert!(eq14_residual(g, c as f64).abs() < 1e-12);
    }
    assert_abs_diff_eq!(gamma_of_c(2).unwrap() / PI, 0.2569555, epsilon = 1e-6);
    assert_abs_diff_eq!(gamma_of_c(3).unwrap() / PI, 0.1558169, epsilon = 1e-6);
    assert!(gamma_of_c(1).is_err());
}

#[test]
fn c_monotone_on_fine_grid() {
    let n = 10_000;
    let mut last = f64::INFINITY;
    for i in 1..=n {
        let g = FRAC_PI_2 * i as f64 / n as f64;
        let c = c_of_gamma(g).unwrap();
        assert!(c < last, "not decreasing at γ = {g}");
        last = c;
    }
}

#[test]
fn earth_map_angles_solve_their_vertices() {
    for c in 2..=10 {
        let a = earth_map_angles(c).unwrap();
        assert!(a.is_valid(1e-9));
        for v in [vt("b^2 c"), VertexType::new(1, 1, c)] {
            assert_abs_diff_eq!(v.angle_sum(&a), 2.0 * PI, epsilon = 1e-10);
        }
    }
}

#[test]
fn angle_set_rejects_bad_input() {
    assert!(AngleSet::new(0.4 * PI, 0.7 * PI, 0.3 * PI).is_err());
    // constructible, but off the compatibility surface
    let off = AngleSet::from_pi(0.6, 0.7, 0.3).unwrap();
    assert!(!off.is_valid(1e-9));
    let on = representative_angles(&FamilyId::Fusion1).unwrap();
    assert!(on.is_valid(1e-9));
    let swapped = AngleSet {
        beta: on.gamma,
        gamma: on.beta,
        ..on
    };
    assert!(!swapped.is_valid(1e-9));
}

fn cube_curve_par() -> &'static sphtile::geometry::CurveParameterization {
    static PAR: std::sync::OnceLock<sphtile::geometry::CurveParameterization> =
        std::sync::OnceLock::new();
    PAR.get_or_init(|| {
        sphtile::geometry::solve_vertex_system(&[vt("a b c")])
            .unwrap()
            .parameterization
            .unwrap()
    })
}

proptest! {
    #[test]
    fn c_decreasing_between_random_pairs(a in 1e-3f64..FRAC_PI_2, b in 1e-3f64..FRAC_PI_2) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(c_of_gamma(lo).unwrap() > c_of_gamma(hi).unwrap());
    }

    #[test]
    fn curve_samples_are_admissible(g in 0.05f64..0.95) {
        let par = cube_curve_par();
        let (lo, hi) = par.interval;
        for p in par.sample(lo + g * (hi - lo)) {
            prop_assert!(p.is_valid(1e-9));
            prop_assert!(p.eq5_residual().abs() < 1e-9);
        }
    }
}
