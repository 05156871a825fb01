use mab_core::spectrum::{
    bo_angular_multiset, bo_spectrum, build_j_block, compare_spectra, default_j_list,
    exact_spectrum, radial_spectrum, solve_block, RadialGrid,
};
use mab_core::{EffectOrder, HalfInteger, MabError, ModelParams, C64};
use nalgebra::DMatrix;

const LIN: EffectOrder = EffectOrder::LINEAR;

fn half(twice: i32) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

/// ½(p² + r²) + k(x σx + y σy) in the product oscillator basis nx + ny ≤ n_max.
fn oscillator_basis_levels(k: f64, n_max: usize, count: usize) -> Vec<f64> {
    let states: Vec<(usize, usize)> = (0..=n_max)
        .flat_map(|nx| (0..=n_max - nx).map(move |ny| (nx, ny)))
        .collect();
    let index = |nx: usize, ny: usize, s: usize| {
        states
            .iter()
            .position(|&q| q == (nx, ny))
            .map(|i| 2 * i + s)
    };
    let dim = 2 * states.len();
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    let ladder = |n: usize| ((n + 1) as f64 / 2.0).sqrt();
    for (i, &(nx, ny)) in states.iter().enumerate() {
        for s in 0..2 {
            h[(2 * i + s, 2 * i + s)] = C64::new((nx + ny + 1) as f64, 0.0);
        }
        // ⟨nx+1|x|nx⟩ couples the spin components through σx (1) and σy (∓i)
        if let Some(a) = index(nx + 1, ny, 1) {
            let v = C64::new(k * ladder(nx), 0.0);
            h[(a, 2 * i)] += v;
            h[(2 * i, a)] += v.conj();
        }
        if let Some(a) = index(nx + 1, ny, 0) {
            let v = C64::new(k * ladder(nx), 0.0);
            h[(a, 2 * i + 1)] += v;
            h[(2 * i + 1, a)] += v.conj();
        }
        if let Some(a) = index(nx, ny + 1, 1) {
            let v = C64::new(0.0, k * ladder(ny));
            h[(a, 2 * i)] += v;
            h[(2 * i, a)] += v.conj();
        }
        if let Some(a) = index(nx, ny + 1, 0) {
            let v = C64::new(0.0, -k * ladder(ny));
            h[(a, 2 * i + 1)] += v;
            h[(2 * i + 1, a)] += v.conj();
        }
    }
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.truncate(count);
    ev
}

#[test]
fn exact_levels_match_oscillator_basis() {
    let k = 1.5;
    let p = ModelParams::new(k, LIN).unwrap();
    let grid = RadialGrid::new(12.0, 1600).unwrap();
    let js: Vec<HalfInteger> = (-9..=9).filter(|t| t % 2 != 0).map(half).collect();
    let computed = exact_spectrum(&p, &js, &grid, 4).unwrap();
    let mut ours: Vec<f64> = computed.blocks.iter().flat_map(|b| b.levels.clone()).collect();
    ours.sort_by(f64::total_cmp);
    let reference = oscillator_basis_levels(k, 28, 8);
    for (a, b) in ours.iter().zip(&reference) {
        assert!((a - b).abs() < 5e-5, "{a} vs {b}");
    }
}

#[test]
fn bisection_matches_dense_solver() {
    let p = ModelParams::new(2.0, LIN).unwrap();
    let grid = RadialGrid::new_unchecked(10.0, 150).unwrap();
    for j in [half(1), half(-3), half(5)] {
        let block = build_j_block(&p, j, &grid).unwrap();
        let fast = solve_block(&block, 6).unwrap();
        let mut dense: Vec<f64> = block
            .to_dense()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        dense.sort_by(f64::total_cmp);
        for (a, b) in fast.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn uncoupled_limit_is_two_dimensional_oscillator() {
    for xi in [EffectOrder::LINEAR, EffectOrder::QUADRATIC] {
        let p = ModelParams::uncoupled(xi);
        let grid = RadialGrid::new(12.0, 2400).unwrap();
        let computed = exact_spectrum(&p, &default_j_list(xi), &grid, 4).unwrap();
        for b in &computed.blocks {
            let mut analytic: Vec<f64> = [b.j - xi.half_integer(), b.j + xi.half_integer()]
                .iter()
                .flat_map(|m| (0..4).map(move |nr| (2 * nr) as f64 + m.value().abs() + 1.0))
                .collect();
            analytic.sort_by(f64::total_cmp);
            for (e, a) in b.levels.iter().zip(&analytic) {
                assert!((e - a).abs() < 1e-4, "j = {}: {e} vs {a}", b.j);
            }
        }
    }
}

#[test]
fn reflected_blocks_are_degenerate() {
    let p = ModelParams::new(4.0, LIN).unwrap();
    let computed = exact_spectrum(&p, &default_j_list(LIN), &RadialGrid::default_for(&p), 4).unwrap();
    assert!(computed.max_reflection_asymmetry() < 1e-8);
    let (_, ground) = computed.ground(1e-8).unwrap();
    let mut ground: Vec<i32> = ground.iter().map(|j| j.twice()).collect();
    ground.sort();
    assert_eq!(ground, vec![-1, 1]);
}

#[test]
fn refinement_converges_monotonically() {
    let p = ModelParams::new(2.0, LIN).unwrap();
    let level = |n: usize| {
        let grid = RadialGrid::new_unchecked(10.0, n).unwrap();
        solve_block(&build_j_block(&p, half(1), &grid).unwrap(), 3).unwrap()
    };
    let reference = level(6400);
    let coarse: Vec<Vec<f64>> = [200, 400, 800, 1600].iter().map(|&n| level(n)).collect();
    for idx in 0..3 {
        let errs: Vec<f64> = coarse.iter().map(|l| l[idx] - reference[idx]).collect();
        for w in errs.windows(2) {
            assert!(w[1].abs() < w[0].abs());
            assert_eq!(w[0].signum(), w[1].signum());
        }
    }
}

#[test]
fn bo_levels_depend_on_shifted_angular_momentum() {
    let p = ModelParams::new(3.0, LIN).unwrap();
    let grid = RadialGrid::default_for(&p);
    let bo = bo_spectrum(&p, &[0, -1, 1, -2], &grid, true, 3).unwrap();
    assert_eq!(bo.levels[0].eigenvalues, bo.levels[1].eigenvalues);
    assert_eq!(bo.levels[2].eigenvalues, bo.levels[3].eigenvalues);
}

#[test]
fn integer_order_bo_spectrum_is_unshifted() {
    let xi = EffectOrder::QUADRATIC;
    let p = ModelParams::new(0.3, xi).unwrap();
    let grid = RadialGrid::default_for(&p);
    let shifted = bo_spectrum(&p, &(-4..=4).collect::<Vec<_>>(), &grid, false, 2).unwrap();
    let mut ours: Vec<f64> = shifted
        .levels
        .iter()
        .flat_map(|l| l.eigenvalues.clone())
        .collect();
    ours.sort_by(f64::total_cmp);

    let potential = |r: f64| 0.5 * r * r - p.coupling(r);
    let mut reference: Vec<f64> = (-5..=3)
        .flat_map(|m: i32| radial_spectrum(&grid, m as f64, potential, 2).unwrap())
        .collect();
    reference.sort_by(f64::total_cmp);
    assert_eq!(ours, reference);

    for cutoff in 0..12 {
        let c = half(cutoff);
        assert_eq!(
            bo_angular_multiset(xi.half_integer(), c),
            bo_angular_multiset(half(0), c)
        );
    }
}

#[test]
fn bo_error_shrinks_with_coupling() {
    let mut last = f64::INFINITY;
    for k in [2.0, 3.0, 4.0] {
        let p = ModelParams::new(k, LIN).unwrap();
        let grid = RadialGrid::default_for(&p);
        let exact = exact_spectrum(&p, &default_j_list(LIN), &grid, 1).unwrap();
        let bo = bo_spectrum(&p, &[0, -1, 1, -2, 2, -3], &grid, false, 1).unwrap();
        let cmp = compare_spectra(&exact, &bo).unwrap();
        assert!(cmp.max_band_relative_error < last);
        last = cmp.max_band_relative_error;
    }
}

#[test]
fn comparison_refuses_mismatched_inputs() {
    let a = ModelParams::new(2.0, LIN).unwrap();
    let b = ModelParams::new(3.0, LIN).unwrap();
    let grid = RadialGrid::new(12.0, 400).unwrap();
    let x = exact_spectrum(&a, &[half(1)], &grid, 1).unwrap();
    let y = exact_spectrum(&b, &[half(1)], &grid, 1).unwrap();
    assert!(matches!(
        compare_spectra(&x, &y),
        Err(MabError::Mismatch(_))
    ));

    let z = exact_spectrum(&a, &[half(1)], &RadialGrid::new(12.0, 500).unwrap(), 1).unwrap();
    assert!(matches!(
        compare_spectra(&x, &z),
        Err(MabError::Mismatch(_))
    ));

    let same = compare_spectra(&x, &x).unwrap();
    assert!(same.rows.iter().all(|r| r.difference == 0.0));
}
