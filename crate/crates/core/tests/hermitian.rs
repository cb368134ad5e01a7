mod common;

use isocone_lab::hermitian::{
    apply_isotone, pure_state_eval, random_hermitian, random_unitary, spec_bounds, spectrum, HermitianMatrix,
    IsotoneFunction, PureStateVector,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Closed-form eigenvalues of a real symmetric 3×3 matrix, ascending.
fn trig_eigenvalues(a: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut d = [a[0][0], a[1][1], a[2][2]];
        d.sort_by(f64::total_cmp);
        return d;
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b: Vec<Vec<f64>> = (0..3)
        .map(|i| (0..3).map(|j| (a[i][j] - if i == j { q } else { 0.0 }) / p).collect())
        .collect();
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [lo, 3.0 * q - hi - lo, hi]
}

#[test]
fn real_symmetric_3x3_matches_trigonometric_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    use rand::Rng;
    for _ in 0..500 {
        let mut a = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v = rng.gen_range(-5.0..5.0);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let h = HermitianMatrix::from_real_rows(&a.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        let got = spectrum(&h);
        let want = trig_eigenvalues(a);
        for k in 0..3 {
            assert!((got[k] - want[k]).abs() < 1e-9, "{a:?}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn diagonal_and_degenerate_spectra() {
    let h = HermitianMatrix::diagonal(&[3.0, -1.0, 3.0, 0.5]).unwrap();
    assert_eq!(spectrum(&h), vec![-1.0, 0.5, 3.0, 3.0]);
    let s = HermitianMatrix::scalar(5, 2.0).unwrap();
    assert!(spectrum(&s).iter().all(|&v| (v - 2.0).abs() < 1e-15));
}

#[test]
fn matrix_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = random_hermitian(&mut rng, 4, 2.0);
    let text = serde_json::to_string(&h.to_json()).unwrap();
    let back = HermitianMatrix::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, h);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn isotone_calculus_moves_spectral_edges(seed in any::<u64>(), dim in 1usize..=6, knots in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, dim, 3.0);
        let f = IsotoneFunction::random(&mut rng, knots, (-6.0, 6.0));
        let fh = apply_isotone(&h, &f);
        let (lo, hi) = spec_bounds(&h);
        let (flo, fhi) = spec_bounds(&fh);
        prop_assert!((fhi - f.eval(hi)).abs() <= 1e-9);
        prop_assert!((flo - f.eval(lo)).abs() <= 1e-9);
        prop_assert!((common::max_eig(&fh) - f.eval(common::max_eig(&h))).abs() <= 1e-9);
    }

    #[test]
    fn pure_state_values_lie_in_the_numerical_range(seed in any::<u64>(), dim in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, dim, 4.0);
        let xi = PureStateVector::random(&mut rng, dim);
        let v = pure_state_eval(&h, &xi).unwrap();
        let (lo, hi) = spec_bounds(&h);
        prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9, "{v} outside [{lo}, {hi}]");
    }

    #[test]
    fn spectrum_is_unitarily_invariant(seed in any::<u64>(), dim in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, dim, 3.0);
        let u = random_unitary(&mut rng, dim);
        let g = h.conjugate_by(&u).unwrap();
        for (a, b) in spectrum(&h).iter().zip(spectrum(&g)) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn spectrum_matches_bisection_oracle(seed in any::<u64>(), dim in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, dim, 2.0);
        for (k, v) in spectrum(&h).iter().enumerate() {
            prop_assert!((v - common::eigenvalue(&h, k)).abs() <= 1e-9);
        }
    }
}
