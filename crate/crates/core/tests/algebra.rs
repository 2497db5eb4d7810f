use bosonorder::boson::NormalForm;
use bosonorder::fock::{oracle_check, Letter};
use bosonorder::poly::{Assignment, Monomial, MultiPoly};
use bosonorder::rational::{rat, Rational};
use bosonorder::series::Series;
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u32..3, 0u32..3, small_rational()), 0..5)
        .prop_map(|terms| MultiPoly::from_terms(terms.into_iter().map(|(l, x, c)| (Monomial::new(l, x), c))))
}

fn lambda_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u32..3, small_rational()), 0..3)
        .prop_map(|terms| MultiPoly::from_terms(terms.into_iter().map(|(l, c)| (Monomial::new(l, 0), c))))
}

fn normal_form() -> impl Strategy<Value = NormalForm> {
    prop::collection::vec(((0u32..3, 0u32..3), lambda_poly()), 0..4).prop_map(NormalForm::from_terms)
}

/// Series in `t` with zero constant term.
fn series_without_constant(order: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(poly(), order).prop_map(move |cs| {
        let mut coeffs = vec![MultiPoly::zero()];
        coeffs.extend(cs);
        Series::from_coeffs(coeffs)
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::A), Just(Letter::Ad), Just(Letter::ShiftedNumber)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &MultiPoly::one(), p.clone());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(), q in poly(), l in small_rational(), x in small_rational()) {
        let at = Assignment::new().with_lambda(l).with_x(x);
        let ev = |m: &MultiPoly| m.eval(&at).scalar().cloned().unwrap();
        prop_assert_eq!(ev(&(&p * &q)), ev(&p) * ev(&q));
        prop_assert_eq!(ev(&(&p + &q)), ev(&p) + ev(&q));
    }

    #[test]
    fn partial_substitution_commutes(p in poly(), l in small_rational(), x in small_rational()) {
        let both = Assignment::new().with_lambda(l.clone()).with_x(x.clone());
        let staged = p
            .substitute(&Assignment::new().with_lambda(l))
            .substitute(&Assignment::new().with_x(x));
        prop_assert_eq!(staged, p.substitute(&both));
    }

    #[test]
    fn series_exp_chain_rule(f in series_without_constant(4)) {
        let e = f.exp().unwrap();
        let lhs = e.derivative().unwrap();
        let rhs = f.derivative().unwrap().mul(&e.truncate(3));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_exp_of_sum(f in series_without_constant(3), g in series_without_constant(3)) {
        prop_assert_eq!((&f + &g).exp().unwrap(), f.exp().unwrap().mul(&g.exp().unwrap()));
    }

    #[test]
    fn normal_form_ring_laws(p in normal_form(), q in normal_form(), r in normal_form()) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&(&q + &r)), &p.mul(&q) + &p.mul(&r));
        prop_assert_eq!((&q + &r).mul(&p), &q.mul(&p) + &r.mul(&p));
        prop_assert_eq!(p.mul(&NormalForm::identity()), p.clone());
    }

    #[test]
    fn normal_form_matches_matrix_oracle(
        word in prop::collection::vec(letter(), 0..4),
        l in small_rational(),
    ) {
        let report = oracle_check(&word, &l, 24).unwrap();
        prop_assert!(report.pass, "error {}", report.max_error);
    }

    #[test]
    fn lambda_specialization_commutes_with_products(p in normal_form(), q in normal_form(), l in small_rational()) {
        let at = Assignment::new().with_lambda(l);
        prop_assert_eq!(p.mul(&q).substitute(&at), p.substitute(&at).mul(&q.substitute(&at)));
    }
}

#[test]
fn zero_series_has_unit_exponential() {
    let e = Series::zero(5).exp().unwrap();
    assert_eq!(e, Series::one(5));
    assert!(Series::constant(MultiPoly::one(), 3).exp().is_err());
    assert!(rat(0, 1).is_zero());
}
