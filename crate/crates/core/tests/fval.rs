use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vallab_core::fconv::{conjugate, conjugate_max_affine, split_pair, CellShape, MaxAffineFunc, PolyhedralFunc};
use vallab_core::fval::{
    epi_homog_components, exp_integral, exp_min, function_valuation_check, functional_intrinsic, gauss_legendre,
    grad_valuation, monge_ampere, vertical_shift_check, DensityFunc, FuncFlags, FuncValuation, SteinerInput,
};
use vallab_core::geom::{hull, vector, Hyperplane, Polytope, Vector};
use vallab_core::intrinsic::{intrinsic_volumes, kappa};
use vallab_core::Error;

fn square(half: f64) -> Polytope {
    hull(&[vector(&[-half, -half]), vector(&[half, -half]), vector(&[half, half]), vector(&[-half, half])]).unwrap()
}

fn random_polygon(rng: &mut ChaCha8Rng, k: usize, center: [f64; 2]) -> Polytope {
    let pts: Vec<Vector> =
        (0..k).map(|_| vector(&[center[0] + rng.gen_range(-1.0..1.0), center[1] + rng.gen_range(-1.0..1.0)])).collect();
    hull(&pts).unwrap()
}

fn random_max_affine(rng: &mut ChaCha8Rng, k: usize) -> MaxAffineFunc {
    let pieces = (0..k)
        .map(|_| (vector(&[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]), rng.gen_range(-1.0..1.0)))
        .collect();
    MaxAffineFunc::new(pieces).unwrap()
}

fn random_function(rng: &mut ChaCha8Rng) -> PolyhedralFunc {
    conjugate_max_affine(&random_max_affine(rng, 7)).unwrap()
}

/// `∫ e^{−u}` over the cells of a bounded planar function, each cell
/// fanned into triangles and integrated with a collapsed 24×24
/// Gauss–Legendre product rule.
fn exp_integral_oracle(u: &PolyhedralFunc) -> f64 {
    let (x, w) = gauss_legendre(24);
    let mut total = 0.0;
    for c in u.cells() {
        let CellShape::Bounded(p) = &c.shape else { panic!("bounded cells only") };
        if !p.is_full_dimensional() {
            continue;
        }
        let ring = p.ccw_ring();
        for i in 1..ring.len() - 1 {
            let (a, b, d) = (&ring[0], &ring[i], &ring[i + 1]);
            let jac = ((b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0])).abs();
            for (xi, wi) in x.iter().zip(&w) {
                for (xj, wj) in x.iter().zip(&w) {
                    let s = 0.5 * (xi + 1.0);
                    let t = 0.5 * (xj + 1.0) * (1.0 - s);
                    let pt = a + (b - a) * s + (d - a) * t;
                    total += 0.25 * wi * wj * (1.0 - s) * jac * (-c.value(&pt)).exp();
                }
            }
        }
    }
    total
}

fn abs_line() -> PolyhedralFunc {
    PolyhedralFunc::gauge(&hull(&[vector(&[-1.0]), vector(&[1.0])]).unwrap()).unwrap()
}

#[test]
fn exp_min_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let k = random_polygon(&mut rng, 7, [0.2, 0.0]);
    assert_eq!(exp_min(&PolyhedralFunc::indicator(&k)).unwrap(), 1.0);
    assert_eq!(exp_min(&PolyhedralFunc::gauge(&square(0.5)).unwrap()).unwrap(), 1.0);
    let u = random_function(&mut rng);
    for t in [-1.0, 0.5, 2.0] {
        let shifted = exp_min(&u.shift(t)).unwrap();
        assert!((shifted - (-t).exp() * exp_min(&u).unwrap()).abs() < 1e-14);
    }
}

#[test]
fn exp_integral_closed_forms() {
    let k = square(0.5);
    assert!((exp_integral(&PolyhedralFunc::indicator(&k)).unwrap() - 1.0).abs() < 1e-14);
    let g = PolyhedralFunc::gauge(&k).unwrap();
    for t in [-1.0, 0.0, 1.0] {
        let got = exp_integral(&g.shift(t)).unwrap();
        assert!((got - (-t).exp() * 2.0).abs() < 1e-12, "t={t}: {got}");
    }
    let tri = hull(&[vector(&[-1.0, -0.5]), vector(&[2.0, -0.5]), vector(&[0.0, 1.5])]).unwrap();
    let got = exp_integral(&PolyhedralFunc::gauge(&tri).unwrap()).unwrap();
    assert!((got - 2.0 * tri.volume().unwrap()).abs() < 1e-12);
    let cube =
        hull(Polytope::new_box(&vector(&[-1.0, -0.5, -2.0]), &vector(&[1.0, 1.5, 0.5])).unwrap().vertices()).unwrap();
    let got = exp_integral(&PolyhedralFunc::gauge(&cube).unwrap()).unwrap();
    assert!((got - 6.0 * cube.volume().unwrap()).abs() < 1e-10, "{got}");
    assert!((exp_integral(&abs_line()).unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn exp_integral_matches_cell_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let u = random_function(&mut rng);
        let (got, want) = (exp_integral(&u).unwrap(), exp_integral_oracle(&u));
        assert!((got - want).abs() < 1e-11 * want.max(1.0), "{got} vs {want}");
        let w = u.coercivity_witness().unwrap();
        let bound = kappa(2) * (-w.b).exp() * 2.0 / (w.a * w.a);
        assert!(got >= 0.0 && got <= bound);
    }
}

#[test]
fn exp_integral_requires_coercivity() {
    let e1 = vallab_core::fconv::Cell::unbounded(
        vec![Vector::zeros(2)],
        vec![vector(&[1.0, 0.0]), vector(&[-1.0, 0.0]), vector(&[0.0, 1.0]), vector(&[0.0, -1.0])],
        vector(&[1.0, 0.0]),
        0.0,
    );
    let u = PolyhedralFunc::with_domain(vec![e1], vallab_core::fconv::Domain::Unbounded(Vec::new())).unwrap();
    assert!(matches!(exp_integral(&u), Err(Error::NotCoercive { .. })));
    assert!(matches!(exp_min(&u), Err(Error::NotCoercive { .. })));
}

#[test]
fn exp_integral_continuity_along_shifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = random_function(&mut rng);
    let base = exp_integral(&u).unwrap();
    for k in 1..=10 {
        let eps = 1.0 / k as f64;
        let diff = (exp_integral(&u.shift(eps)).unwrap() - base).abs();
        assert!(diff <= (eps.exp() - 1.0) * base + 1e-14);
    }
}

#[test]
fn density_tables() {
    let hat = DensityFunc::hat(&vector(&[0.5, -0.5]), 1.0, 2.0).unwrap();
    assert_eq!(hat.evaluate(&vector(&[0.5, -0.5])).unwrap(), 2.0);
    assert!((hat.evaluate(&vector(&[1.0, -0.5])).unwrap() - 1.0).abs() < 1e-15);
    assert!((hat.evaluate(&vector(&[1.0, 0.0])).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(hat.evaluate(&vector(&[3.0, 0.0])).unwrap(), 0.0);
    assert!(matches!(DensityFunc::grid(vec![vec![0.0, 1.0]], vec![1.0, 0.0]), Err(Error::InvalidInput(_))));
    let alpha = DensityFunc::half_line(vec![0.0, 1.0, 3.0], vec![2.0, 1.0, 0.0]).unwrap();
    assert_eq!(alpha.at(0.5), 1.5);
    assert_eq!(alpha.at(2.0), 0.5);
    assert_eq!(alpha.at(4.0), 0.0);
    assert!(DensityFunc::half_line(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
}

#[test]
fn gradient_valuation_basics() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let k = random_polygon(&mut rng, 8, [0.0, 0.3]);
    let zeta = DensityFunc::hat(&vector(&[0.3, -0.2]), 1.0, 1.5).unwrap();
    let y = vector(&[0.5, 0.1]);
    let got = grad_valuation(&PolyhedralFunc::linear_plus_indicator(&y, &k).unwrap(), &zeta).unwrap();
    assert!((got - zeta.evaluate(&y).unwrap() * k.volume().unwrap()).abs() < 1e-14);
    let got = grad_valuation(&PolyhedralFunc::indicator(&k), &zeta).unwrap();
    assert!((got - zeta.evaluate(&Vector::zeros(2)).unwrap() * k.volume().unwrap()).abs() < 1e-14);

    let bump = DensityFunc::hat(&vector(&[1.0]), 0.5, 1.0).unwrap();
    assert!(matches!(grad_valuation(&abs_line(), &bump), Err(Error::NotSuperCoercive { .. })));
    let away = DensityFunc::hat(&vector(&[3.0]), 0.5, 1.0).unwrap();
    assert_eq!(grad_valuation(&abs_line(), &away).unwrap(), 0.0);
}

#[test]
fn monge_ampere_atoms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = random_polygon(&mut rng, 9, [0.1, 0.2]);
    let h = conjugate(&PolyhedralFunc::indicator(&k)).unwrap();
    let ma = monge_ampere(&h).unwrap();
    assert_eq!(ma.atoms.len(), 1);
    assert!(ma.atoms[0].0.norm() < 1e-14);
    assert!((ma.atoms[0].1 - k.volume().unwrap()).abs() < 1e-14);

    let ramp = MaxAffineFunc::new(vec![(vector(&[0.0]), 0.0), (vector(&[1.0]), -1.0)]).unwrap();
    let ma = monge_ampere(&ramp).unwrap();
    assert_eq!(ma.atoms, vec![(vector(&[1.0]), 1.0)]);

    for _ in 0..5 {
        let v = random_max_affine(&mut rng, 9);
        let slopes: Vec<Vector> = v.pieces().iter().map(|(y, _)| y.clone()).collect();
        let total = monge_ampere(&v).unwrap().total_mass();
        assert!((total - hull(&slopes).unwrap().volume().unwrap()).abs() < 1e-12);
    }
    let three = MaxAffineFunc::new(vec![(vector(&[1.0, 0.0, 0.0]), 0.0)]).unwrap();
    assert!(matches!(monge_ampere(&three), Err(Error::Unsupported(_))));
}

#[test]
fn gradient_valuation_is_dual_to_monge_ampere() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..8 {
        let v = random_max_affine(&mut rng, 8);
        let zeta = DensityFunc::hat(&vector(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]), 1.5, 1.0).unwrap();
        let lhs = grad_valuation(&conjugate_max_affine(&v).unwrap(), &zeta).unwrap();
        let rhs = monge_ampere(&v).unwrap().integrate(&zeta).unwrap();
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }
}

#[test]
fn epi_homogeneous_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u = random_function(&mut rng);
    let z = FuncValuation::gradient(DensityFunc::hat(&vector(&[0.0, 0.0]), 2.0, 1.0).unwrap());
    let c = epi_homog_components(&z, &u).unwrap();
    let zu = z.evaluate(Some(&u)).unwrap();
    assert!(c.components[0].abs() < 1e-9 && c.components[1].abs() < 1e-9);
    assert!((c.components[2] - zu).abs() < 1e-9);
    assert!(c.polynomial);

    let c = epi_homog_components(&FuncValuation::constant(2.5), &u).unwrap();
    assert_eq!(c.components, vec![2.5, 0.0, 0.0]);

    let c = epi_homog_components(&FuncValuation::exp_min(), &u).unwrap();
    let total: f64 = c.components.iter().sum();
    assert!((total - exp_min(&u).unwrap()).abs() < 1e-12);
    assert!(!c.polynomial);
    let m = u.minimum().unwrap();
    assert!((c.values[2] - (-2.0 * m).exp()).abs() < 1e-12);
}

#[test]
fn degree_flags_are_checked() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let u = random_function(&mut rng);
    let z = FuncValuation::gradient(DensityFunc::hat(&vector(&[0.2, 0.0]), 2.0, 1.0).unwrap());
    assert!(z.degree_residual(&u, &[0.5, 2.0, 3.0]).unwrap().unwrap() < 1e-9);
    let lying = FuncValuation::new(
        "mislabelled",
        FuncFlags { epi_translation_invariant: false, degree: Some(1) },
        exp_integral,
    );
    assert!(lying.degree_residual(&u, &[0.5, 2.0]).unwrap().unwrap() > 1e-3);
    assert!(FuncValuation::exp_min().degree_residual(&u, &[2.0]).unwrap().is_none());
}

/// `(∫α, ∫tα)` for a piecewise-linear table.
fn alpha_moments(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let (mut m0, mut m1) = (0.0, 0.0);
    for i in 0..xs.len() - 1 {
        let (a, b, fa, fb) = (xs[i], xs[i + 1], ys[i], ys[i + 1]);
        let mid = 0.5 * (a + b);
        m0 += 0.5 * (fa + fb) * (b - a);
        // Simpson is exact for t·α(t), a quadratic on each segment.
        m1 += (b - a) / 6.0 * (a * fa + 4.0 * mid * 0.5 * (fa + fb) + b * fb);
    }
    (m0, m1)
}

#[test]
fn functional_steiner_for_indicators() {
    let alpha = DensityFunc::half_line(vec![0.0, 0.5, 2.0], vec![1.7, 0.4, 0.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let k2 = random_polygon(&mut rng, 8, [0.0, 0.0]);
    let pts: Vec<Vector> = (0..10)
        .map(|_| vector(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]))
        .collect();
    let k3 = hull(&pts).unwrap();
    let seg = hull(&[vector(&[0.0, 0.0]), vector(&[3.0, 4.0])]).unwrap();
    for k in [k2, k3, seg] {
        let n = k.dim();
        let nodes: Vec<f64> = (0..=n + 2).map(|i| 0.25 * i as f64).collect();
        let fit = functional_intrinsic(&SteinerInput::Indicator(k.clone()), &alpha, &nodes).unwrap();
        let v = intrinsic_volumes(&k).unwrap();
        for j in 0..=n {
            let want = 1.7 * v.get(j);
            assert!(
                (fit.components[j] - want).abs() <= 1e-8 * want.abs().max(1.0),
                "j={j}: {} vs {want}",
                fit.components[j]
            );
        }
        assert!(fit.residual < 1e-10);
    }
}

#[test]
fn functional_steiner_for_radial_quadratic() {
    let xs = vec![0.0, 0.5, 1.0, 2.5];
    let ys = vec![1.0, 0.8, 0.3, 0.0];
    let alpha = DensityFunc::half_line(xs.clone(), ys.clone()).unwrap();
    let (m0, m1) = alpha_moments(&xs, &ys);
    let nodes = [0.0, 0.5, 1.0, 1.5];
    let fit = functional_intrinsic(&SteinerInput::RadialQuadratic { dim: 2, c: 1.0 }, &alpha, &nodes).unwrap();
    for (r, got) in nodes.iter().zip(&fit.values) {
        let want = PI * r * r + 2.0 * PI * (m1 + r * m0);
        assert!((got - want).abs() < 1e-12);
    }
    assert!(fit.residual < 1e-12);
    assert!((fit.components[0] - 1.0).abs() < 1e-10);
    assert!((fit.components[1] - PI * m0).abs() < 1e-10);
    assert!((fit.components[2] - 2.0 * PI * m1).abs() < 1e-10);

    assert!(matches!(
        functional_intrinsic(&SteinerInput::RadialQuadratic { dim: 2, c: 1.0 }, &alpha, &[0.5, 0.5, 1.0, 1.0]),
        Err(Error::InsufficientNodes { needed: 3, got: 2 })
    ));
}

#[test]
fn vertical_shift_law() {
    let g = PolyhedralFunc::gauge(&square(0.5)).unwrap();
    let r = vertical_shift_check(&FuncValuation::exp_integral(), &g, &[-1.0, 0.0, 1.0]).unwrap();
    assert!(r < 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let u = random_function(&mut rng);
    let e = exp_min(&u).unwrap();
    assert!(
        vertical_shift_check(&FuncValuation::exp_min(), &u, &[-2.0, 0.5, 3.0]).unwrap()
            <= 8.0 * f64::EPSILON * e * (2.0f64).exp()
    );
    let z = FuncValuation::gradient(DensityFunc::hat(&vector(&[0.0, 0.0]), 2.0, 1.0).unwrap());
    let zu = z.evaluate(Some(&u)).unwrap();
    let r = vertical_shift_check(&z, &u, &[1.0]).unwrap();
    assert!((r - (1.0 - (-1.0f64).exp()) * zu).abs() < 1e-12);
}

#[test]
fn valuation_identity_on_split_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let k = random_polygon(&mut rng, 8, [0.0, 0.0]);
    let base = PolyhedralFunc::linear_plus_indicator(&vector(&[0.6, -0.3]), &k).unwrap();
    let h = Hyperplane::new(vector(&[1.0, 0.4]), 0.05).unwrap();
    let (u, v) = split_pair(&base, &h).unwrap();
    let (u, v) = (u.unwrap(), v.unwrap());
    assert!(function_valuation_check(&FuncValuation::exp_integral(), &u, &v).unwrap() < 1e-10);
    let zeta = DensityFunc::hat(&vector(&[0.5, -0.2]), 1.0, 1.0).unwrap();
    assert!(function_valuation_check(&FuncValuation::gradient(zeta), &u, &v).unwrap() < 1e-10);

    let square_of = FuncValuation::new("square", FuncFlags::default(), |u| Ok(exp_integral(u)?.powi(2)));
    assert!(function_valuation_check(&square_of, &u, &v).unwrap() > 1e-3);

    let w = random_function(&mut rng);
    let m_point = w.vertex_values().into_iter().min_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap().0;
    let normal = vector(&[0.3, 1.0]);
    let h = Hyperplane::new(normal.clone(), normal.dot(&m_point)).unwrap();
    let (a, b) = split_pair(&w, &h).unwrap();
    let r = function_valuation_check(&FuncValuation::exp_min(), &a.unwrap(), &b.unwrap()).unwrap();
    assert!(r <= 4.0 * f64::EPSILON * exp_min(&w).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gradient_valuation_is_epi_homogeneous(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_function(&mut rng);
        let zeta = DensityFunc::hat(&vector(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]), 1.5, 1.0).unwrap();
        let base = grad_valuation(&u, &zeta).unwrap();
        for l in [0.5, 2.0, 3.0] {
            let scaled = grad_valuation(&u.epi_scale(l).unwrap(), &zeta).unwrap();
            prop_assert!((scaled - l * l * base).abs() <= 1e-9 * base.abs().max(1e-300) + 1e-14);
        }
    }

    #[test]
    fn epi_translation_behaviour(seed in 0u64..10_000, dx in -2.0f64..2.0, dy in -2.0f64..2.0, t in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_function(&mut rng);
        let x0 = vector(&[dx, dy]);
        let moved = u.translate(&x0).unwrap().shift(t);
        let zeta = DensityFunc::hat(&vector(&[0.0, 0.0]), 2.0, 1.0).unwrap();
        let (g0, g1) = (grad_valuation(&u, &zeta).unwrap(), grad_valuation(&moved, &zeta).unwrap());
        prop_assert!((g0 - g1).abs() < 1e-12);
        let (e0, e1) = (exp_integral(&u).unwrap(), exp_integral(&moved).unwrap());
        prop_assert!((e1 - (-t).exp() * e0).abs() < 1e-10 * e0.max(1.0));
    }
}
