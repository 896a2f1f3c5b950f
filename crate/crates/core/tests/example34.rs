use pencil_core::gen::{example34, example34_witnesses};
use pencil_core::indefiniteness::{
    common_neutral_vector, hm_check, is_indefinite_set, is_strongly_indefinite,
    is_weakly_indefinite, sufficient_weak_check, verify_sign_witness,
};
use pencil_core::oracle::{min_neutral_residual, neutral_residual};
use pencil_core::solver::neutral_cone_positivity;
use pencil_core::{quadratic_form, Budget, Field, HermitianMatrix, Verdict};

fn real() -> Budget {
    Budget::default().with_field(Field::Real)
}

#[test]
fn published_witnesses_lie_in_their_cones() {
    let f = example34();
    for w in example34_witnesses() {
        let c = verify_sign_witness(&f, w.index, w.sign, &w.x).unwrap();
        assert!(c.residual <= 1e-9, "{w:?}: {c:?}");
        assert!(c.margin >= 1e-3, "{w:?}: {c:?}");
    }
}

#[test]
fn first_witness_form_values() {
    let f = example34();
    let w = &example34_witnesses()[0];
    let q1 = quadratic_form(f.get(0), &w.x).unwrap();
    assert!((q1 - (4.0 - 4.0 * 2f64.sqrt())).abs() < 1e-12);
    assert!(quadratic_form(f.get(1), &w.x).unwrap().abs() < 1e-12);
}

#[test]
fn weakly_indefinite_at_default_budget() {
    let r = is_weakly_indefinite(&example34(), &Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Confirmed);
    assert!(r.achieved["margin_min"] > 0.5);
}

#[test]
fn indefinite_set() {
    let r = is_indefinite_set(&example34(), &Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Confirmed);
}

#[test]
fn trivial_real_intersection() {
    let f = example34();
    let r = min_neutral_residual(f.members(), &real().with_restarts(256)).unwrap();
    assert!(r.value >= 1e-3, "{}", r.value);
    assert!(common_neutral_vector(&f, None, &real()).unwrap().is_none());
}

#[test]
fn complex_intersection_is_not_trivial() {
    let f = example34();
    let x = common_neutral_vector(&f, None, &Budget::default())
        .unwrap()
        .expect("a complex common neutral vector");
    assert!(neutral_residual(f.members(), &x) < 1e-20);
}

#[test]
fn dropping_one_member_leaves_published_direction() {
    let f = example34();
    let x = common_neutral_vector(&f, Some(0), &real()).unwrap();
    assert!(x.is_some());
}

#[test]
fn sufficient_condition_inconclusive_over_reals() {
    let r = sufficient_weak_check(&example34(), &real()).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(r.has_flag("NO_COMMON_NEUTRAL_VECTOR"));
}

#[test]
fn strongly_indefinite_refuted() {
    let f = example34();
    let r = is_strongly_indefinite(&f, &Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted, "{:?}", r.achieved);
    let w = &r.witnesses[0];
    assert!((w.recheck(&f, None).unwrap() - w.stored_value()).abs() < 1e-12);
    assert!(w.stored_value() > 1e-6);
}

#[test]
fn plane_condition_refuted() {
    let f = example34();
    let r = hm_check(&f, &Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted, "{:?}", r.achieved);
    let w = &r.witnesses[0];
    assert!((w.recheck(&f, None).unwrap() - w.stored_value()).abs() < 1e-12);
    assert!(w.stored_value() < 0.0);
}

#[test]
fn neutral_cone_positivity_is_vacuous_over_reals() {
    let f = example34();
    let a = HermitianMatrix::identity(4).scaled(-1.0);
    let r = neutral_cone_positivity(&a, &f, &real()).unwrap();
    assert_eq!(r.verdict, Verdict::Confirmed);
    assert!(r.has_flag("VACUOUS"));
}
