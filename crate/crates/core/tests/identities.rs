use bosonorder::boson::NormalForm;
use bosonorder::combinatorics::{
    bell_poly, euler_operator_degenerate, falling_factorial, integer_point_expansion, StirlingTable,
};
use bosonorder::poly::{Assignment, Monomial, MultiPoly};
use bosonorder::rational::{int, rat, Rational};
use proptest::prelude::*;

fn shifted_number() -> NormalForm {
    &NormalForm::number() - &NormalForm::scalar(MultiPoly::lambda())
}

#[test]
fn number_operator_times_shifted_factorial() {
    // N (N - λ)_{k,λ} = (N - λ)_{k,λ} N = a† (N + 1 - λ)_{k,λ} a = (N)_{k+1,λ}
    let lambda = MultiPoly::lambda();
    let n = NormalForm::number();
    let raised = &n + &NormalForm::scalar(MultiPoly::one() - MultiPoly::lambda());
    for k in 0..=8 {
        let shifted = shifted_number().degenerate_power(k, &lambda);
        let left = n.mul(&shifted);
        let right = shifted.mul(&n);
        let sandwiched = NormalForm::creator()
            .mul(&raised.degenerate_power(k, &lambda))
            .mul(&NormalForm::annihilator());
        assert_eq!(left, right, "k = {k}");
        assert_eq!(left, sandwiched, "k = {k}");
        assert_eq!(left, n.degenerate_power(k + 1, &lambda), "k = {k}");
    }
}

#[test]
fn shifted_factorial_on_number_states() {
    let lambda = MultiPoly::lambda();
    for k in 0..=6u32 {
        let nf = shifted_number().degenerate_power(k, &lambda);
        for m in 0..=6u64 {
            let base = MultiPoly::from_int(m as i64) - MultiPoly::lambda();
            assert_eq!(nf.apply_number_state(m).unwrap(), falling_factorial(k, &base, &lambda));
        }
    }
}

#[test]
fn table_boundaries() {
    let table = StirlingTable::new(10);
    let one_lambda = Assignment::new().with_lambda(int(1));
    let at_one = table.substitute(&one_lambda);
    for n in 0..=10 {
        assert!(table.get(n, n).is_one());
        assert_eq!(table.get(n, 0).is_zero(), n > 0);
        assert!(table.get(n, n + 1).is_zero());
        for k in 0..=n {
            // (x)_{n,1} is the ordinary falling factorial
            assert_eq!(at_one.get(n, k).is_one(), n == k);
            assert_eq!(at_one.get(n, k).is_zero(), n != k);
        }
    }
}

#[test]
fn eigenvalue_symbolic_expansion() {
    let table = StirlingTable::new(10);
    let lambda = MultiPoly::lambda();
    for k in 0..=10 {
        for m in 0..=10u64 {
            let want = falling_factorial(k as u32, &MultiPoly::from_int(m as i64), &lambda);
            assert_eq!(integer_point_expansion(&table, k, m), want);
        }
    }
}

#[test]
fn bell_values_at_lambda_one() {
    // (x)_{n,1} expands as itself, so φ_n at λ = 1 is x^n
    let at = Assignment::new().with_lambda(int(1));
    for n in 0..=8 {
        assert_eq!(bell_poly(n).poly.substitute(&at), MultiPoly::x().pow(n as u32));
    }
}

fn x_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 0..6).prop_map(|cs| {
        MultiPoly::from_terms(
            cs.into_iter()
                .enumerate()
                .map(|(e, (n, d))| (Monomial::new(0, e as u32), rat(n, d))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_operator_agrees_with_stirling_expansion(p in x_poly(), n in 0u32..7) {
        let eval = euler_operator_degenerate(&p, n).unwrap();
        prop_assert!(eval.agree());
    }

    #[test]
    fn defining_identity_at_rational_points(n in 0usize..10, l in (-6i64..=6, 1i64..=4), x in (-6i64..=6, 1i64..=4)) {
        let table = StirlingTable::new(n);
        let l: Rational = rat(l.0, l.1);
        let x = MultiPoly::constant(rat(x.0, x.1));
        let lambda = MultiPoly::constant(l);
        let lhs: MultiPoly = (0..=n)
            .map(|k| {
                let coeff = table.get(n, k).substitute(&Assignment {
                    lambda: lambda.as_constant(),
                    x: None,
                });
                coeff * falling_factorial(k as u32, &x, &MultiPoly::one())
            })
            .sum();
        prop_assert_eq!(lhs, falling_factorial(n as u32, &x, &lambda));
    }
}
