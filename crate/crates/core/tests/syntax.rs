mod common;

use permdiff::cli::{parse_expr, print_expr};
use permdiff::identity::{suite_cases, SuiteId};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(e in common::expr_strategy(true)) {
        let text = print_expr(&e);
        prop_assert_eq!(parse_expr(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn parse_print_parse_is_stable(e in common::expr_strategy(true)) {
        let once = parse_expr(&print_expr(&e)).unwrap();
        prop_assert_eq!(print_expr(&once), print_expr(&e));
    }

    #[test]
    fn whitespace_is_insignificant(e in common::expr_strategy(true)) {
        let text = print_expr(&e);
        let spaced = text.replace('(', " ( \n").replace(',', " ,\t");
        let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(parse_expr(&spaced).unwrap(), e.clone());
        prop_assert_eq!(parse_expr(&squeezed).unwrap(), e);
    }
}

#[test]
fn suite_expressions_round_trip() {
    for id in SuiteId::ALL {
        for case in suite_cases(id) {
            let text = print_expr(&case.expr);
            assert_eq!(parse_expr(&text).unwrap(), case.expr, "{}", case.name);
        }
    }
}
