use pencil_core::gen::{self, random_hermitian, random_indefinite};
use pencil_core::indefiniteness::{
    common_neutral_vector, hm_check, is_indefinite_set, is_strongly_indefinite,
    is_weakly_indefinite, PlaneSection,
};
use pencil_core::oracle::{harvest_cone_points, Sign};
use pencil_core::{
    quadratic_form, Budget, CertificateReport, Complex64, HermitianMatrix, PencilFamily, Verdict,
};
use proptest::prelude::*;

fn random_family(m: usize, n: usize, seed: u64) -> PencilFamily {
    let members = (0..m)
        .map(|i| random_indefinite(n, seed * 31 + i as u64).unwrap())
        .collect();
    PencilFamily::new(members).unwrap()
}

fn subsets(m: usize) -> Vec<Vec<usize>> {
    (1u32..1 << m)
        .filter(|s| s.count_ones() >= 2)
        .map(|s| (0..m).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

#[test]
fn strong_confirmation_is_inherited_by_subfamilies() {
    let budget = Budget::default();
    for (m, n, seed) in [(3, 5, 0), (4, 6, 1)] {
        let f = gen::strongly_indefinite(m, n, seed).unwrap();
        assert_eq!(is_strongly_indefinite(&f, &budget).unwrap().verdict, Verdict::Confirmed);
        for idx in subsets(m) {
            let sub = f.subfamily(&idx).unwrap();
            let r = is_strongly_indefinite(&sub, &budget).unwrap();
            assert_eq!(r.verdict, Verdict::Confirmed, "subfamily {idx:?}: {:?}", r.flags);
        }
    }
}

#[test]
fn strong_implies_indefinite_implies_weak() {
    let budget = Budget::default();
    for seed in 0..8 {
        let (m, n) = if seed % 2 == 0 { (3, 5) } else { (4, 6) };
        let f = gen::strongly_indefinite(m, n, seed).unwrap();
        let ind = is_indefinite_set(&f, &budget).unwrap();
        assert_eq!(ind.verdict, Verdict::Confirmed, "seed {seed}: {:?}", ind.flags);
        assert_ne!(is_weakly_indefinite(&f, &budget).unwrap().verdict, Verdict::Refuted);
    }
}

#[test]
fn hm_confirmation_excludes_strong_refutation() {
    let budget = Budget::default();
    let mut confirmed = 0;
    for seed in 0..6 {
        let f = if seed % 2 == 0 {
            gen::strongly_indefinite(3, 5, seed).unwrap()
        } else {
            random_family(3, 4, seed)
        };
        if hm_check(&f, &budget).unwrap().is_confirmed() {
            confirmed += 1;
            assert_ne!(is_strongly_indefinite(&f, &budget).unwrap().verdict, Verdict::Refuted);
        }
    }
    assert!(confirmed >= 3);
}

#[test]
fn weakly_indefinite_pairs_are_symmetric() {
    let budget = Budget::default().with_restarts(16);
    for seed in 0..6 {
        let f = gen::indefinite_pair(4, seed).unwrap();
        for (i, j) in [(0, 1), (1, 0)] {
            let cons = std::slice::from_ref(f.get(j));
            for sign in [Sign::Plus, Sign::Minus] {
                let pts = harvest_cone_points(f.get(i), sign, cons, &budget).unwrap();
                assert!(!pts.is_empty(), "seed {seed}: B{i} has no {sign:?} point on Q{j}");
            }
        }
        assert!(common_neutral_vector(&f, None, &budget).unwrap().is_some());
    }
}

fn assert_witnesses_recheck(r: &CertificateReport, f: &PencilFamily, a: Option<&HermitianMatrix>) {
    assert!(!r.witnesses.is_empty());
    for w in &r.witnesses {
        let again = w.recheck(f, a).unwrap();
        assert!((again - w.stored_value()).abs() <= 1e-12, "{w:?}: {again}");
    }
}

#[test]
fn refutations_recheck_from_their_witnesses() {
    let budget = Budget::default();
    let mut seen = 0;
    for seed in 0..12 {
        let f = random_family(3, 3, seed);
        for r in [
            is_weakly_indefinite(&f, &budget).unwrap(),
            is_strongly_indefinite(&f, &budget).unwrap(),
            hm_check(&f, &budget).unwrap(),
        ] {
            if r.is_refuted() {
                seen += 1;
                assert_witnesses_recheck(&r, &f, None);
            }
        }
    }
    let f = gen::example34();
    for r in [
        is_strongly_indefinite(&f, &budget).unwrap(),
        hm_check(&f, &budget).unwrap(),
    ] {
        assert!(r.is_refuted());
        assert_witnesses_recheck(&r, &f, None);
    }
    assert!(seen > 0);
}

fn unit(raw: &[(f64, f64)]) -> Vec<Complex64> {
    pencil_core::forms::vector::normalized(
        &raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect::<Vec<_>>(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn plane_sections_match_direct_evaluation(
        n in 2usize..7,
        seed in any::<u64>(),
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
    ) {
        let (a, b) = (unit(&a[..n]), unit(&b[..n]));
        let forms = [random_hermitian(n, seed), random_hermitian(n, seed ^ 1)];
        let refs: Vec<&HermitianMatrix> = forms.iter().collect();
        let Ok(s) = PlaneSection::from_span(&a, &b, &refs) else {
            return Ok(());
        };
        for (t, f) in forms.iter().enumerate() {
            for (al, be) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0)] {
                let x: Vec<Complex64> = s.u.iter().zip(&s.v).map(|(u, v)| u * al + v * be).collect();
                let direct = quadratic_form(f, &x).unwrap();
                prop_assert!((s.evaluate(t, al, be) - direct).abs() <= 1e-10 * f.spectral_norm());
            }
        }
    }
}
