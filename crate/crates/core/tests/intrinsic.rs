#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vallab_core::geom::{ball_polygon, ball_polytope, binomial, hull, vector, Hyperplane, Polytope, Vector};
use vallab_core::intrinsic::{
    canonical_simplex_decomposition, cylinder_decomposition, elementary_symmetric, facet_valuation,
    homogeneous_components, intrinsic_volumes, kappa, kinematic_integral_mc, kinematic_integral_mc_window,
    kinematic_target, required_window, steiner_check, steiner_volume, valuation_check, BodyValuation, ValuationFlags,
};
use vallab_core::Error;

fn random_polygon(rng: &mut ChaCha8Rng) -> Polytope {
    let k = rng.gen_range(5..20);
    let pts: Vec<Vector> = (0..k)
        .map(|_| {
            let r = rng.gen::<f64>().sqrt();
            let t = rng.gen::<f64>() * 2.0 * PI;
            vector(&[r * t.cos(), r * t.sin()])
        })
        .collect();
    hull(&pts).unwrap()
}

/// Least-squares solve of a small dense system via normal equations.
fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let k = rows[0].len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for (row, b) in rows.iter().zip(rhs) {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += row[i] * row[j];
            }
            a[i][k] += row[i] * b;
        }
    }
    for c in 0..k {
        let p = (c..k).max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap()).unwrap();
        a.swap(c, p);
        for r in 0..k {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..=k {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    (0..k).map(|i| a[i][k] / a[i][i]).collect()
}

/// Volume of the r-neighbourhood of the box [0,s_1]×…, measured on a
/// midpoint grid with `cells` cells per axis.
fn grid_parallel_volume(sides: &[f64], r: f64, cells: usize) -> f64 {
    let n = sides.len();
    let h: Vec<f64> = sides.iter().map(|s| (s + 2.0 * r) / cells as f64).collect();
    let mut count = 0u64;
    let total = cells.pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut d2 = 0.0;
        for k in 0..n {
            let i = rem % cells;
            rem /= cells;
            let x = -r + (i as f64 + 0.5) * h[k];
            let excess = if x < 0.0 {
                -x
            } else if x > sides[k] {
                x - sides[k]
            } else {
                0.0
            };
            d2 += excess * excess;
        }
        if d2 <= r * r {
            count += 1;
        }
    }
    count as f64 * h.iter().product::<f64>()
}

/// Recovers V_0..V_{n−1} of a box from grid volumes of its parallel bodies,
/// with V_n fixed to the box volume.
fn steiner_fit(sides: &[f64], radii: &[f64], cells: usize) -> Vec<f64> {
    let n = sides.len();
    let vol: f64 = sides.iter().product();
    let rows: Vec<Vec<f64>> =
        radii.iter().map(|&r| (0..n).map(|j| r.powi((n - j) as i32) * kappa(n - j)).collect()).collect();
    let rhs: Vec<f64> = radii.iter().map(|&r| grid_parallel_volume(sides, r, cells) - vol).collect();
    least_squares(&rows, &rhs)
}

#[test]
fn square_matches_steiner_fit() {
    let v = intrinsic_volumes(&Polytope::cube(2, 1.0).unwrap()).unwrap();
    assert_eq!(v.values, vec![1.0, 2.0, 1.0]);
    let fit = steiner_fit(&[1.0, 1.0], &[0.1, 0.2, 0.3], 3000);
    assert!((fit[0] - 1.0).abs() < 0.05, "{fit:?}");
    assert!((fit[1] - 2.0).abs() < 2e-3, "{fit:?}");
}

#[test]
fn box_in_space_matches_steiner_fit() {
    let sides = [0.5, 1.0, 1.5];
    let p = Polytope::from_sides(&sides).unwrap();
    let v = intrinsic_volumes(&p).unwrap();
    assert!((v.get(1) - 3.0).abs() < 1e-14);
    assert!((v.get(2) - (0.5 + 0.75 + 1.5)).abs() < 1e-14);
    assert!((v.get(3) - 0.75).abs() < 1e-14);
    let fit = steiner_fit(&sides, &[0.1, 0.2, 0.3, 0.4], 220);
    assert!((fit[1] - 3.0).abs() < 0.05, "{fit:?}");
    assert!((fit[2] - 2.75).abs() < 0.02, "{fit:?}");

    // The face-data route agrees with the box formula.
    let general = hull(p.vertices()).unwrap();
    let w = intrinsic_volumes(&general).unwrap();
    for j in 0..4 {
        assert!((w.get(j) - v.get(j)).abs() < 1e-12, "V_{j}: {} vs {}", w.get(j), v.get(j));
    }
}

#[test]
fn segment_in_plane() {
    let l = 2.5;
    let seg = hull(&[vector(&[0.0, 0.0]), vector(&[l * 0.6, l * 0.8])]).unwrap();
    let v = intrinsic_volumes(&seg).unwrap();
    assert!((v.get(0) - 1.0).abs() < 1e-15);
    assert!((v.get(1) - l).abs() < 1e-12);
    assert_eq!(v.get(2), 0.0);
}

#[test]
fn tetrahedron_mean_width_term_matches_cube_scaling() {
    // V_1 is 1-homogeneous and the edge formula must honor it.
    let s = Polytope::standard_simplex(3, 1.0).unwrap();
    let v1 = intrinsic_volumes(&s).unwrap().get(1);
    let v2 = intrinsic_volumes(&s.dilate(2.0).unwrap()).unwrap().get(1);
    assert!((v2 - 2.0 * v1).abs() < 1e-12);
    // Three edges of length 1 at angle π/2, three of length √2 at angle
    // arccos(1/√3).
    let a = (1.0f64 / 3.0f64.sqrt()).acos();
    let expected = (3.0 * 0.5 * PI + 3.0 * 2f64.sqrt() * (PI - a)) / (2.0 * PI);
    assert!((v1 - expected).abs() < 1e-12);
}

#[test]
fn boxes_give_elementary_symmetric_polynomials() {
    assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0]), vec![1.0, 6.0, 11.0, 6.0]);
    let p = Polytope::from_sides(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let v = intrinsic_volumes(&p).unwrap();
    assert_eq!(v.values, vec![1.0, 15.0, 85.0, 225.0, 274.0, 120.0]);
    let big = Polytope::cube(7, 1.0).unwrap();
    assert!(matches!(intrinsic_volumes(&big), Err(Error::Unsupported(_))));
    let simplex4 = Polytope::standard_simplex(4, 1.0).unwrap();
    assert!(matches!(intrinsic_volumes(&simplex4), Err(Error::Unsupported(_))));
}

#[test]
fn steiner_polynomial_values() {
    let square = Polytope::cube(2, 1.0).unwrap();
    assert!((steiner_volume(&square, 1.0).unwrap() - (5.0 + PI)).abs() < 1e-14);
    assert!((steiner_volume(&square, 0.0).unwrap() - 1.0).abs() < 1e-15);
    let pt = Polytope::point(&vector(&[0.3, 0.1, 0.2]));
    assert!((steiner_volume(&pt, 2.0).unwrap() - kappa(3) * 8.0).abs() < 1e-12);
    assert!(matches!(steiner_volume(&square, -1.0), Err(Error::NegativeRadius(_))));
}

#[test]
fn square_parallel_body_by_polygon_sum() {
    // Direct oracle: square ⊕ r·(256-gon) has area 1 + 4r + (polygon area).
    let square = Polytope::cube(2, 1.0).unwrap();
    let ball = ball_polygon(256, 1.0).unwrap();
    let check = steiner_check(&square, 1.0, &ball).unwrap();
    let poly_area = 0.5 * 256.0 * (2.0 * PI / 256.0).sin();
    assert!((check.inner - (1.0 + 4.0 + poly_area)).abs() < 1e-12);
    assert!(check.holds());
    assert!(check.bound() < 1e-2);
}

#[test]
fn steiner_bracket_holds_on_random_bodies() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let disk = ball_polygon(128, 1.0).unwrap();
    let sphere = ball_polytope(3, 200, 1.0).unwrap();
    for _ in 0..10 {
        let p = random_polygon(&mut rng);
        for r in [0.1, 0.5, 1.0] {
            assert!(steiner_check(&p, r, &disk).unwrap().holds());
        }
    }
    let cube = hull(Polytope::from_sides(&[1.0, 0.7, 0.4]).unwrap().vertices()).unwrap();
    for r in [0.1, 0.5, 1.0] {
        let c = steiner_check(&cube, r, &sphere).unwrap();
        assert!(c.holds(), "{c:?}");
    }
}

#[test]
fn homogeneous_components_of_intrinsic_combination() {
    let z = BodyValuation::intrinsic_combination(vec![3.0, 2.0, 1.0]);
    let square = Polytope::cube(2, 1.0).unwrap();
    let c = homogeneous_components(&z, &square).unwrap();
    assert!((c.components[0] - 3.0).abs() < 1e-12);
    assert!((c.components[1] - 4.0).abs() < 1e-12);
    assert!((c.components[2] - 1.0).abs() < 1e-12);
    assert!((c.reconstruct(2.5) - (3.0 + 10.0 + 6.25)).abs() < 1e-11);

    let area = BodyValuation::intrinsic(2);
    let c = homogeneous_components(&area, &square.dilate(1.5).unwrap()).unwrap();
    assert!(c.components[0].abs() < 1e-9 && c.components[1].abs() < 1e-9);
    assert!((c.components[2] - 2.25).abs() < 1e-12);

    let tri = hull(&[vector(&[0.0, 0.0]), vector(&[3.0, 0.0]), vector(&[0.0, 4.0])]).unwrap();
    let c = homogeneous_components(&BodyValuation::perimeter(), &tri).unwrap();
    assert!((c.components[1] - 12.0).abs() < 1e-12);
    assert!(c.components[2].abs() < 1e-12);
}

#[test]
fn valuation_check_separates_valuations_from_non_valuations() {
    let square = Polytope::cube(2, 1.0).unwrap();
    let h = Hyperplane::new(vector(&[1.0, 0.0]), 0.25).unwrap();
    assert!(valuation_check(&BodyValuation::volume(), &square, &h).unwrap() < 1e-12);
    assert!(valuation_check(&BodyValuation::perimeter(), &square, &h).unwrap() < 1e-10);
    let squared = BodyValuation::new(|p| Ok(p.volume()?.powi(2)), ValuationFlags::default());
    let r = valuation_check(&squared, &square, &h).unwrap();
    assert!((r - 2.0 * 0.25 * 0.75).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let p = random_polygon(&mut rng);
        let t = rng.gen::<f64>() * 2.0 * PI;
        let h = Hyperplane::new(vector(&[t.cos(), t.sin()]), rng.gen_range(-0.3..0.3)).unwrap();
        for j in 0..3 {
            assert!(valuation_check(&BodyValuation::intrinsic(j), &p, &h).unwrap() < 1e-10);
        }
    }
}

fn area_of(p: &Polytope) -> f64 {
    p.volume().unwrap()
}

#[test]
fn canonical_decomposition_of_standard_triangle() {
    let v = [vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])];
    let pieces = canonical_simplex_decomposition(&v, 0.5).unwrap();
    let areas: Vec<f64> = pieces.iter().map(|p| area_of(&p.body)).collect();
    // Q_0 = ½·{p_0} + ½·S, Q_1 = ½[p_0,p_1] + ½[p_1,p_2], Q_2 = ½S + ½{p_2}.
    assert!((areas[0] - 0.125).abs() < 1e-15);
    assert!((areas[1] - 0.25).abs() < 1e-15);
    assert!((areas[2] - 0.125).abs() < 1e-15);
    assert_eq!(pieces[1].body.vertices().len(), 4);
    assert!(matches!(canonical_simplex_decomposition(&v, 0.0), Err(Error::InvalidInput(_))));
    let flat = [vector(&[0.0, 0.0]), vector(&[1.0, 1.0]), vector(&[2.0, 2.0])];
    assert!(matches!(canonical_simplex_decomposition(&flat, 0.5), Err(Error::DegenerateSimplex(_))));
}

#[test]
fn canonical_decomposition_of_3_simplex() {
    let v = [vector(&[0.0, 0.0, 0.0]), vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0]), vector(&[0.0, 0.0, 1.0])];
    let pieces = canonical_simplex_decomposition(&v, 0.7).unwrap();
    assert_eq!(pieces.len(), 4);
    let total: f64 = pieces.iter().map(|p| p.body.volume().unwrap()).sum();
    assert!((total - 1.0 / 6.0).abs() < 1e-12);
    // Piece k is a product of a k-simplex and an (n−k)-simplex:
    // volume (1−t)^k t^{n−k} / (k!(n−k)!) for the unit-step chain.
    let (t, f) = (0.7f64, [1.0, 1.0, 2.0, 6.0]);
    for (k, p) in pieces.iter().enumerate() {
        let expected = (1.0 - t).powi(k as i32) * t.powi(3 - k as i32) / (f[k] * f[3 - k]);
        assert!((p.body.volume().unwrap() - expected).abs() < 1e-14, "k={k}");
    }
}

#[test]
fn canonical_pieces_cover_without_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let v = [vector(&[0.1, -0.2]), vector(&[1.3, 0.4]), vector(&[0.2, 1.1])];
    let pieces = canonical_simplex_decomposition(&v, 0.35).unwrap();
    let simplex = hull(&v).unwrap();
    let mut inside = 0;
    for _ in 0..4000 {
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        let (a, b) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
        let x = &v[0] + (&v[1] - &v[0]) * a + (&v[2] - &v[0]) * b;
        if !simplex.contains(&x, -1e-9).unwrap() {
            continue;
        }
        inside += 1;
        let interiors = pieces.iter().filter(|p| p.body.contains(&x, -1e-9).unwrap()).count();
        let closures = pieces.iter().filter(|p| p.body.contains(&x, 1e-9).unwrap()).count();
        assert!(interiors <= 1);
        assert!(closures >= 1);
    }
    assert!(inside > 3500);
}

#[test]
fn cylinder_decomposition_multiplicities() {
    let tri = [vector(&[0.0, 0.0]), vector(&[2.0, 0.0]), vector(&[0.5, 1.0])];
    let area = hull(&tri).unwrap().volume().unwrap();
    let one = cylinder_decomposition(&tri, 1).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].multiplicity, 1);
    assert!((one[0].body.volume().unwrap() - area).abs() < 1e-15);

    let pieces = cylinder_decomposition(&tri, 3).unwrap();
    let mut labels: Vec<(Vec<usize>, u64)> = pieces.iter().map(|p| (p.label.clone(), p.multiplicity)).collect();
    labels.sort();
    // Signatures of length ℓ appear C(3, ℓ) times; lower-dimensional pieces
    // [p_0,p_1] + [p_1,p_2]... carry volume, segments alone do not.
    assert_eq!(labels, vec![(vec![1, 2], 3), (vec![2], 3)]);
    let total: f64 = pieces.iter().map(|p| p.multiplicity as f64 * p.body.volume().unwrap()).sum();
    assert!((total - 9.0 * area).abs() < 1e-12);

    let tet = [vector(&[0.0, 0.0, 0.0]), vector(&[1.0, 0.2, 0.0]), vector(&[0.3, 1.0, 0.1]), vector(&[0.2, 0.4, 1.0])];
    let vol = hull(&tet).unwrap().volume().unwrap();
    for m in 1..=5usize {
        let pieces = cylinder_decomposition(&tet, m).unwrap();
        for p in &pieces {
            assert_eq!(p.multiplicity, binomial(m, p.label.len()));
        }
        let total: f64 = pieces.iter().map(|p| p.multiplicity as f64 * p.body.volume().unwrap()).sum();
        assert!((total - (m as f64).powi(3) * vol).abs() < 1e-12 * (m as f64).powi(3), "m={m}");
    }
    assert!(matches!(cylinder_decomposition(&tet, 7), Err(Error::Unsupported(_))));
}

#[test]
fn facet_valuation_basics() {
    let square = Polytope::cube(2, 1.0).unwrap();
    assert!((facet_valuation(&square, |_| 1.0).unwrap() - 4.0).abs() < 1e-15);
    let doubled = square.dilate(2.0).unwrap();
    assert!((facet_valuation(&doubled, |_| 1.0).unwrap() - 8.0).abs() < 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let p = random_polygon(&mut rng);
        assert!(facet_valuation(&p, |u| u[0]).unwrap().abs() < 1e-12);
        let shifted = p.translate(&vector(&[3.0, -1.0])).unwrap();
        let z = |u: &Vector| (u[0] + 2.0 * u[1]).max(0.0);
        assert!((facet_valuation(&p, z).unwrap() - facet_valuation(&shifted, z).unwrap()).abs() < 1e-12);
    }
    let seg = hull(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
    assert!(matches!(facet_valuation(&seg, |_| 1.0), Err(Error::MissingFacets)));
}

#[test]
fn kinematic_targets_and_determinism() {
    let square = Polytope::cube(2, 1.0).unwrap();
    assert!((kinematic_target(&square, &square).unwrap() - (2.0 + 8.0 / PI)).abs() < 1e-14);
    let pt = Polytope::point(&vector(&[0.0, 0.0]));
    assert!((kinematic_target(&pt, &square).unwrap() - 1.0).abs() < 1e-15);

    let a = kinematic_integral_mc(&square, &square, 20_000, 7).unwrap();
    let b = kinematic_integral_mc(&square, &square, 20_000, 7).unwrap();
    assert_eq!(a, b);
    assert!((a.estimate - a.target).abs() < 4.0 * a.stderr);

    let est = kinematic_integral_mc(&pt, &square, 50_000, 1).unwrap();
    assert!((est.estimate - 1.0).abs() < 4.0 * est.stderr);

    let w = required_window(&square, &square);
    assert!(matches!(
        kinematic_integral_mc_window(&square, &square, 10, 0, 0.5 * w),
        Err(Error::WindowTooSmall { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn vandermonde_round_trip(seed in 0u64..10_000, c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polygon(&mut rng);
        let v = intrinsic_volumes(&p).unwrap();
        let z = BodyValuation::intrinsic_combination(vec![c0, c1, c2]);
        let comp = homogeneous_components(&z, &p).unwrap();
        for (j, c) in [c0, c1, c2].iter().enumerate() {
            let want = c * v.get(j);
            prop_assert!((comp.components[j] - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn intrinsic_volumes_are_motion_invariant(seed in 0u64..10_000, angle in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polygon(&mut rng);
        let (s, c) = angle.sin_cos();
        let m = nalgebra::DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let q = p.map_affine(&m, &vector(&[1.0, -2.0])).unwrap();
        let (a, b) = (intrinsic_volumes(&p).unwrap(), intrinsic_volumes(&q).unwrap());
        for j in 0..3 {
            prop_assert!((a.get(j) - b.get(j)).abs() < 1e-12);
        }
    }
}
