use pencil_core::forms::vector;
use pencil_core::gen::{indefinite_pair, random_hermitian, random_indefinite};
use pencil_core::oracle::{harvest_cone_points, Sign};
use pencil_core::{
    choose_theta, eig, neutral_direction, quadratic_form, Budget, Complex64, ConeWitness,
    HermitianMatrix,
};
use proptest::prelude::*;

fn cvec(parts: &[(f64, f64)]) -> Vec<Complex64> {
    parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
}

fn vec_of(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(|p| cvec(&p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn forms_are_real_and_quadratic(
        n in 2usize..8,
        seed in any::<u64>(),
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
        alpha in (-3.0f64..3.0, -3.0f64..3.0),
    ) {
        let b = random_hermitian(n, seed);
        let x = cvec(&raw[..n]);
        let bx = b.apply(&x);
        let full = vector::inner(&bx, &x);
        let scale = b.spectral_norm() * vector::norm_sqr(&x);
        prop_assert!(full.im.abs() <= 1e-10 * scale + 1e-300);
        let q = quadratic_form(&b, &x).unwrap();
        let a = Complex64::new(alpha.0, alpha.1);
        let qa = quadratic_form(&b, &vector::scale(a, &x)).unwrap();
        prop_assert!((qa - a.norm_sqr() * q).abs() <= 1e-10 * scale * a.norm_sqr().max(1.0));
    }

    #[test]
    fn eigendecomposition_round_trip(n in 1usize..9, seed in any::<u64>()) {
        let m = random_hermitian(n, seed);
        let d = eig(&m).unwrap();
        let norm = m.spectral_norm();
        let back = d.reconstruct();
        let err = back
            .entries()
            .iter()
            .zip(m.entries())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        prop_assert!(err <= 1e-9 * norm);
        for w in d.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for (k, v) in d.eigenvectors.iter().enumerate() {
            let r = vector::sub(&m.apply(v), &vector::scale(Complex64::new(d.eigenvalues[k], 0.0), v));
            prop_assert!(vector::norm(&r) <= 1e-10 * norm);
            for w in &d.eigenvectors[..k] {
                prop_assert!(vector::inner(v, w).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn neutral_direction_bounds(n in 2usize..9, seed in any::<u64>()) {
        let b = random_indefinite(n, seed).unwrap();
        let x = neutral_direction(&b).unwrap();
        let d = eig(&b).unwrap();
        let norm = b.spectral_norm();
        prop_assert!((vector::norm(&x) - 1.0).abs() <= 1e-12);
        prop_assert!(quadratic_form(&b, &x).unwrap().abs() <= 1e-10 * norm);
        let floor = 0.1 * d.min().abs().min(d.max().abs());
        prop_assert!(vector::norm(&b.apply(&x)) >= floor);
    }

    #[test]
    fn theta_kills_the_real_cross_term(
        n in 1usize..8,
        seed in any::<u64>(),
        y in vec_of(8),
        z in vec_of(8),
    ) {
        let b = random_hermitian(n, seed);
        let (y, z) = (&y[..n], &z[..n]);
        let theta = choose_theta(&b, y, z).unwrap();
        prop_assert!((0.0..std::f64::consts::PI).contains(&theta));
        let c = vector::inner(&b.apply(y), z) * Complex64::from_polar(1.0, -theta);
        prop_assert!(c.re.abs() <= 1e-12 * b.spectral_norm() * vector::norm(y) * vector::norm(z));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn neutral_segments_stay_on_the_other_cone(n in 3usize..7, seed in 0u64..1000) {
        let f = indefinite_pair(n, seed).unwrap();
        let (b1, b2) = (f.get(0), f.get(1));
        let budget = Budget::default().with_seed(seed).with_restarts(8);
        let cons = std::slice::from_ref(b2);
        let y = harvest_cone_points(b1, Sign::Minus, cons, &budget).unwrap();
        let z = harvest_cone_points(b1, Sign::Plus, cons, &budget).unwrap();
        prop_assume!(!y.is_empty() && !z.is_empty());
        let w = ConeWitness::build(b2, b1, &y[0].x, &z[0].x).unwrap();
        prop_assert!(w.t0 > 0.0 && w.t0 < 1.0);
        let n1 = b1.spectral_norm();
        let n2 = b2.spectral_norm();
        prop_assert!(quadratic_form(b1, &w.segment_point).unwrap().abs() <= 1e-9 * n1);
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            prop_assert!(quadratic_form(b2, &w.at(t)).unwrap().abs() <= 1e-9 * n2);
        }
    }
}

#[test]
fn eig_of_first_example_member() {
    let f = pencil_core::gen::example34();
    let d = eig(f.get(0)).unwrap();
    for (got, want) in d.eigenvalues.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn identity_form() {
    let x = vector::from_real(&[1.0, 0.0, 0.0, 0.0]);
    assert_eq!(quadratic_form(&HermitianMatrix::identity(4), &x).unwrap(), 1.0);
}

#[test]
fn neutral_direction_on_first_example_member() {
    let f = pencil_core::gen::example34();
    let x = neutral_direction(f.get(0)).unwrap();
    assert!(quadratic_form(f.get(0), &x).unwrap().abs() <= 1e-10);
    assert!(vector::norm(&f.get(0).apply(&x)) >= 0.1);
}
