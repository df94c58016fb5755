mod common;

use common::unimodular_fixtures;
use ddbar::criteria::criteria_report;
use ddbar::metrics::{check_lcb, check_metric, d, find_balanced, form_from_hermitian, hermitian_matrix, is_positive_definite, power_hermitian_matrix, verify_power};
use ddbar::{BalancedSearch, Cohomology, Form, Lcb, Matrix, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9, -20i64..=20, 1i64..=9).prop_map(|(a, b, c, d)| Scalar::from_ratios(a, b, c, d))
}

fn form(n: i64, max_len: usize) -> impl Strategy<Value = Form> {
    let letter = (1..=n, any::<bool>()).prop_map(|(j, bar)| if bar { -j } else { j });
    prop::collection::vec((scalar(), prop::collection::vec(letter, 0..=max_len)), 0..4)
        .prop_map(|terms| terms.into_iter().fold(Form::zero(), |acc, (c, w)| &acc + &Form::from_word(c, &w)))
}

/// Homogeneous form of total degree `k`.
fn homogeneous(n: i64, k: usize) -> impl Strategy<Value = Form> {
    let letter = (1..=n, any::<bool>()).prop_map(|(j, bar)| if bar { -j } else { j });
    prop::collection::vec((scalar(), prop::collection::vec(letter, k)), 0..4)
        .prop_map(|terms| terms.into_iter().fold(Form::zero(), |acc, (c, w)| &acc + &Form::from_word(c, &w)))
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Scalar::zero(), a.clone());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert!((&a * &a.conj()).is_real());
    }

    #[test]
    fn scalar_display_round_trips(a in scalar()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn wedge_graded_commutative(
        (k, l, a, b) in (0usize..=3, 0usize..=3).prop_flat_map(|(k, l)| (Just(k), Just(l), homogeneous(3, k), homogeneous(3, l)))
    ) {
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        if (k * l) % 2 == 1 {
            prop_assert_eq!(ab, -&ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn wedge_associative_and_conjugation_multiplicative(a in form(3, 2), b in form(3, 2), c in form(3, 2)) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        prop_assert_eq!(a.wedge(&b).conjugate(), a.conjugate().wedge(&b.conjugate()));
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!(a.wedge(&(&b + &c)), &a.wedge(&b) + &a.wedge(&c));
    }

    #[test]
    fn form_display_round_trips(a in form(4, 3)) {
        let back = ddbar::SymbolicForm::parse(&a.to_string()).unwrap().eval(&Default::default()).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn duality_symmetry_and_numerical_inequalities() {
    let fixtures = unimodular_fixtures();
    assert!(fixtures.len() >= 30);
    for (name, s) in fixtures {
        assert!(s.validate().ok() && s.is_unimodular(), "{name}");
        let bad = common::duality_violations(&name, &s);
        assert!(bad.is_empty(), "{bad:#?}");
        assert_eq!(common::main_equivalence_discrepancy(&name, &s), None);

        let dc = common::complex(&s);
        let coh = Cohomology::new(&dc);
        let table = coh.table();
        let n = s.n();
        for p in 0..=n {
            for q in 0..=n {
                assert_eq!(table.dolbeault(p, q), table.dolbeault(n - p, n - q), "{name}: Serre duality at ({p},{q})");
            }
        }
        for k in 0..=2 * n {
            assert_eq!(table.betti(k), table.betti(2 * n - k), "{name}: Poincaré duality b{k}");
        }
        let report = criteria_report(&coh);
        assert!(report.warnings.is_empty(), "{name}: {:?}", report.warnings);
        assert_eq!(report.strong_lemma.direct, coh.natural_map_ranks(n - 1, n).bc_to_aeppli.injective, "{name}");
        if report.strong_lemma.verdict {
            assert_eq!(report.weak_lemma, Some(true), "{name}: strong implies weak");
        }
        if report.ddbar_lemma {
            assert!(report.strong_lemma.verdict, "{name}: ddbar implies strong");
        }
    }
}

#[test]
fn random_fixtures_cover_several_verdicts() {
    let mut seen = std::collections::BTreeSet::new();
    for (_, s) in common::random_fixtures(24) {
        let dc = common::complex(&s);
        let r = criteria_report(&Cohomology::new(&dc));
        seen.insert((r.sgg.verdict, r.strong_lemma.verdict));
    }
    assert!(seen.len() >= 2, "random fixtures are too uniform: {seen:?}");
}

/// Positive-definiteness through the characteristic polynomial: for a
/// Hermitian matrix all roots are real, and they are all positive iff the
/// coefficients of det(λI - H) strictly alternate in sign (Descartes).
fn charpoly_positive(h: &Matrix) -> bool {
    // Faddeev-LeVerrier: c_n = 1, M_k = H M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(H M_k)/k
    let n = h.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = h.mul(&m);
        for i in 0..n {
            next[(i, i)] = &next[(i, i)] + &coeffs[n - k + 1];
        }
        m = next;
        let hm = h.mul(&m);
        let trace = (0..n).fold(Scalar::zero(), |acc, i| &acc + &hm[(i, i)]);
        coeffs[n - k] = -&(&trace / &Scalar::from(k as i64));
    }
    (0..=n).all(|k| {
        let sign = coeffs[k].real_sign();
        let want = if (n - k).is_multiple_of(2) { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
        coeffs[k].is_real() && sign == Some(want)
    })
}

fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::from_ratios(rng.gen_range(-4..=4), rng.gen_range(1..=3), rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

/// `P D P*` with `P` random and invertible: same inertia as `D`.
fn congruent_hermitian<R: Rng>(rng: &mut R, diag: &[i64]) -> Matrix {
    let n = diag.len();
    loop {
        let p = Matrix::from_rows((0..n).map(|_| (0..n).map(|_| random_scalar(rng)).collect()).collect()).unwrap();
        if p.determinant().is_zero() {
            continue;
        }
        let mut d = Matrix::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            d[(i, i)] = Scalar::from(v);
        }
        return p.mul(&d).mul(&p.conj().transpose());
    }
}

#[test]
fn sylvester_agrees_with_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..60 {
        let n = rng.gen_range(1..=4);
        let mut diag: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
        let positive = congruent_hermitian(&mut rng, &diag);
        assert!(is_positive_definite(&positive));
        assert!(charpoly_positive(&positive));
        let flip = rng.gen_range(0..n);
        diag[flip] = -diag[flip];
        let indefinite = congruent_hermitian(&mut rng, &diag);
        assert!(!is_positive_definite(&indefinite));
        assert!(!charpoly_positive(&indefinite));
    }
    for _ in 0..60 {
        let n = rng.gen_range(1..=4);
        let a = Matrix::from_rows((0..n).map(|_| (0..n).map(|_| random_scalar(&mut rng)).collect()).collect()).unwrap();
        let h = a.add(&a.conj().transpose());
        assert_eq!(is_positive_definite(&h), charpoly_positive(&h), "{h:?}");
    }
}

#[test]
fn positive_metrics_have_positive_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let n = rng.gen_range(2..=4);
        let diag: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let h = congruent_hermitian(&mut rng, &diag);
        let omega = form_from_hermitian(&h);
        assert_eq!(hermitian_matrix(&omega, n).unwrap(), h);
        let power = omega.power(n - 1);
        assert!(verify_power(&omega, &power, n));
        assert!(is_positive_definite(&power_hermitian_matrix(&power, n).unwrap()));
    }
}

#[test]
fn metric_invariants_on_fixtures() {
    let flat = form_from_hermitian(&Matrix::identity(3));
    for (name, s) in unimodular_fixtures().into_iter().filter(|(_, s)| s.n() == 3) {
        let dc = common::complex(&s);
        let r = check_metric(&dc, &flat).unwrap();
        if r.balanced {
            assert!(r.gauduchon && r.strongly_gauduchon, "{name}");
            assert_eq!(check_lcb(&dc, &flat, &r.power).unwrap(), Lcb::Yes { theta: Form::zero() }, "{name}");
        }
        if r.strongly_gauduchon {
            assert!(r.gauduchon, "{name}");
        }
        // constant rescaling keeps the verdicts
        let scaled = check_metric(&dc, &flat.scale(&Scalar::from(3))).unwrap();
        assert_eq!((scaled.balanced, scaled.gauduchon, scaled.strongly_gauduchon), (r.balanced, r.gauduchon, r.strongly_gauduchon));
        if let BalancedSearch::Certificate { omega_power, .. } = find_balanced(&dc, 8, 1).unwrap() {
            assert!(d(&dc, &omega_power).unwrap().is_zero(), "{name}");
            assert!(is_positive_definite(&power_hermitian_matrix(&omega_power, 3).unwrap()), "{name}");
        }
    }
}

#[test]
fn balanced_search_is_deterministic() {
    let s = common::structure("iwasawa_abelian.cplx", "D=1/8");
    let dc = common::complex(&s);
    assert_eq!(find_balanced(&dc, 16, 9).unwrap(), find_balanced(&dc, 16, 9).unwrap());
    assert_eq!(find_balanced(&dc, 0, 9).unwrap(), BalancedSearch::Unknown { trials: 0 });
}
