//! Term trees and polynomial identity checking.

mod eval;
mod expr;
mod formal;
mod suites;

pub use eval::{
    check_identity, check_identity_delta, eval, eval_delta, expand_product, generator_substitution,
    EvalContext, LiteralCoeff, Substitution, Verdict, Witness,
};
pub use expr::{Expr, ScalarLit};
pub use formal::FormalVectorField;
pub use suites::{
    formal_leibniz_defect, formal_pre_lie_defect, run_all, run_suite, signed_permutations,
    standard_identity, suite_cases, CaseResult, IdentityCase, Mode, SuiteId, SuiteReport,
    FORMAL_ARITY,
};
