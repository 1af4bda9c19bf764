mod common;

use common::*;
use permdiff::reduction::{expected_h_last, reduce, replay, Outcome, ReductionResult};
use permdiff::scalar::rat;
use permdiff::{annihilator_test, DiffPermPoly, PermMonomial};
use proptest::prelude::*;

fn check_result(f: &DiffPermPoly, r: &ReductionResult) -> Result<(), TestCaseError> {
    prop_assert_eq!(&r.trace[0].poly, f);
    prop_assert_eq!(replay(&r.trace).unwrap(), None);
    for pass in &r.passes {
        let expected = expected_h_last(&pass.c_n, pass.n, &pass.ts, pass.vars).unwrap();
        prop_assert_eq!(&r.trace[pass.h_last].poly, &expected, "pass on x{}", pass.k);
    }
    match r.outcome {
        Outcome::RightAnnihilator => {
            prop_assert!(annihilator_test(f));
            prop_assert!(r.consequence.is_none());
        }
        Outcome::DerivativeOnly => {
            prop_assert!(!annihilator_test(f));
            let c = r.consequence.as_ref().unwrap();
            prop_assert_eq!(c.poly.len(), 1);
            let (m, coeff) = c.poly.leading().unwrap();
            prop_assert_eq!(coeff, &c.coeff);
            prop_assert_eq!(m.degree(), c.m);
            prop_assert!(m.factors().all(|s| s.total_order() == 1));
            prop_assert_eq!(&r.trace.last().unwrap().poly, &c.poly);
        }
    }
    Ok(())
}

/// Multilinear inputs in `x1..x_d`, `d ≤ 3`, with orders up to 3.
fn input_strategy() -> impl Strategy<Value = DiffPermPoly> {
    (1u32..=3).prop_flat_map(|d| {
        let term = (
            Just((1..=d).collect::<Vec<u32>>()).prop_shuffle(),
            prop::collection::vec(0u32..=3, d as usize),
            -3i64..=3,
        );
        prop::collection::vec(term, 1..=3).prop_filter_map("zero input", |terms| {
            let p = DiffPermPoly::from_terms(
                1,
                terms.into_iter().map(|(vars, orders, c)| {
                    let word: Vec<_> = vars.iter().zip(&orders).map(|(&v, &o)| sym(v, o)).collect();
                    (PermMonomial::normalize(&word).unwrap(), rat(c))
                }),
            );
            (!p.is_zero()).then_some(p)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_invariants(f in input_strategy()) {
        let r = reduce(&f).unwrap();
        check_result(&f, &r)?;
    }
}

fn p(s: &str) -> DiffPermPoly {
    use permdiff::cli::parse_expr;
    use permdiff::identity::{eval, generator_substitution, EvalContext};
    let e = parse_expr(s).unwrap();
    let k = e.variables().last().copied().unwrap();
    eval(&e, &generator_substitution(k, 1), &EvalContext::single()).unwrap()
}

#[test]
fn named_examples() {
    let r = reduce(&p("x1 * x2 - x2 * x1")).unwrap();
    assert_eq!(r.outcome, Outcome::RightAnnihilator);
    for s in [
        "x1 * d(x2)",
        "d(x1) * x2",
        "x1 * x2''",
        "x1 * x2'''",
        "x3 * x1 * x2'' + 2 * x1' * x3 * x2",
    ] {
        let f = p(s);
        let r = reduce(&f).unwrap();
        assert_eq!(r.outcome, Outcome::DerivativeOnly, "{s}");
        check_result(&f, &r).unwrap();
    }
}

#[test]
fn rejects_zero_input() {
    assert!(reduce(&DiffPermPoly::zero(1)).is_err());
}
