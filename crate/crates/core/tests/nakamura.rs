//! The shipped Nakamura model against checks that do not depend on how it
//! was built.

mod common;

use ddbar::{check_metric, criteria_report, load_raw_complex, Cohomology, DoubleComplex, Form};

fn model() -> DoubleComplex {
    load_raw_complex(&common::fixture_text("nakamura/nakamura_ii.dcplx")).unwrap()
}

/// For completely solvable groups de Rham cohomology is computed by
/// invariant forms, so the Betti numbers must agree with the invariant
/// complex even though the Dolbeault numbers need not.
#[test]
fn betti_numbers_match_invariant_forms() {
    let dc = model();
    let inv = common::complex(&common::structure("nakamura/nakamura_invariant.cplx", ""));
    let (m, i) = (Cohomology::new(&dc), Cohomology::new(&inv));
    let betti: Vec<usize> = (0..=6).map(|k| m.betti(k)).collect();
    assert_eq!(betti, (0..=6).map(|k| i.betti(k)).collect::<Vec<_>>());
    assert_eq!(betti, vec![1, 2, 5, 8, 5, 2, 1]);
    assert_ne!(m.dolbeault(1, 1), i.dolbeault(1, 1), "invariant forms should not suffice for Dolbeault");
}

#[test]
fn model_is_a_strong_non_ddbar_manifold() {
    let dc = model();
    assert!(dc.has_conjugation());
    let coh = Cohomology::new(&dc);
    let r = criteria_report(&coh);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    assert_eq!(coh.betti(1), 2);
    assert_eq!((coh.bott_chern(0, 1), coh.dolbeault(0, 1), coh.aeppli(0, 1)), (1, 1, 1));
    assert_eq!(r.delta(2), 4);
    assert!(r.strong_lemma.verdict && !r.ddbar_lemma);
    assert!([3, 7, 11].contains(&coh.bott_chern(2, 2)));
}

#[test]
fn diagonal_metric_is_balanced() {
    let inv = common::complex(&common::structure("nakamura/nakamura_invariant.cplx", ""));
    let omega: Form = ddbar::SymbolicForm::parse("i/2*e(1,-1) + i/2*e(2,-2) + i/2*e(3,-3)").unwrap().eval(&Default::default()).unwrap();
    let r = check_metric(&inv, &omega).unwrap();
    assert!(r.positive && r.balanced);
}
