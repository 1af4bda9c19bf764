mod common;

#[test]
fn closed_form_star_matches_every_factorization() {
    let (checked, bad) = common::star_oracle_sweep();
    assert!(checked > 10_000, "only {checked} factorizations");
    assert!(bad.is_empty(), "{} mismatches, first {}", bad.len(), bad[0]);
}

#[test]
fn documented_star_values() {
    use permdiff::cli::parse_expr;
    use permdiff::identity::{eval, generator_substitution, EvalContext};
    let ev = |s: &str| -> permdiff::DiffPermPoly {
        eval(
            &parse_expr(s).unwrap(),
            &generator_substitution(3, 1),
            &EvalContext::single(),
        )
        .unwrap()
    };
    assert_eq!(ev("star(x1)"), ev("x1'"));
    assert_eq!(ev("star(x1 * x2)"), ev("x1 * x2' + x2 * x1'"));
    assert_eq!(
        ev("star(x1 * x2 * x3)"),
        ev("x1 * x2 * x3' + x1 * x3 * x2' + x2 * x3 * x1'")
    );
}
