//! Built-in identity suites with their expected outcomes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::eval::{check_identity, check_identity_delta, EvalContext, Verdict, Witness};
use super::expr::Expr;
use super::formal::FormalVectorField;
use crate::algebra::{DiffPermPoly, ProductTag};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SuiteId {
    Loz,
    Bullet,
    Diamond,
    PrecPreLie,
    DeltaLeibniz,
    DeltaTransposed,
    FormalWLeibniz,
    FormalWPreLie,
}

impl SuiteId {
    pub const ALL: [SuiteId; 8] = [
        SuiteId::Loz,
        SuiteId::Bullet,
        SuiteId::Diamond,
        SuiteId::PrecPreLie,
        SuiteId::DeltaLeibniz,
        SuiteId::DeltaTransposed,
        SuiteId::FormalWLeibniz,
        SuiteId::FormalWPreLie,
    ];

    pub fn letter(self) -> char {
        (b'a' + SuiteId::ALL.iter().position(|&s| s == self).unwrap() as u8) as char
    }

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Loz => "loz",
            SuiteId::Bullet => "bullet",
            SuiteId::Diamond => "diamond",
            SuiteId::PrecPreLie => "prec-pre-lie",
            SuiteId::DeltaLeibniz => "delta-leibniz",
            SuiteId::DeltaTransposed => "delta-transposed",
            SuiteId::FormalWLeibniz => "formal-w-leibniz",
            SuiteId::FormalWPreLie => "formal-w-pre-lie",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    /// Accepts the letter `a`..`h` or the long name.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        SuiteId::ALL
            .into_iter()
            .find(|id| s == id.letter().to_string() || s == id.name())
            .ok_or(Error::UnknownSuite(s))
    }
}

/// How a suite expression is evaluated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Ordinary,
    Delta,
}

/// A named identity candidate `expr = 0` in `vars` variables.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub name: String,
    pub expr: Expr,
    pub vars: u32,
    pub product: Option<ProductTag>,
    pub mode: Mode,
    pub expected: bool,
}

impl IdentityCase {
    fn new(
        name: &str,
        expr: Expr,
        vars: u32,
        product: ProductTag,
        mode: Mode,
        expected: bool,
    ) -> Self {
        IdentityCase {
            name: name.to_string(),
            expr,
            vars,
            product: Some(product),
            mode,
            expected,
        }
    }

    pub fn context(&self) -> EvalContext {
        EvalContext {
            arity: 1,
            product: self.product,
            delta_value: None,
        }
    }

    pub fn check(&self) -> Result<Verdict> {
        match self.mode {
            Mode::Ordinary => check_identity(&self.expr, self.vars, &self.context()),
            Mode::Delta => check_identity_delta(&self.expr, self.vars, &self.context()),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub expected: bool,
    pub got: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.expected == self.got
    }
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseResult::passed)
    }
}

fn x(i: u32) -> Expr {
    Expr::var(i)
}

fn op(tag: ProductTag) -> impl Fn(Expr, Expr) -> Expr {
    move |a, b| Expr::op(tag, a, b)
}

/// Permutations of `0..n` in lexicographic order, each with its sign.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i64)>) {
        if prefix.len() == used.len() {
            let inversions = (0..prefix.len())
                .flat_map(|i| (i + 1..prefix.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| prefix[i] > prefix[j])
                .count();
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `Σ_{σ ∈ S_{n−1}} sgn(σ) x_{σ1} ∗ (x_{σ2} ∗ (⋯ ∗ (x_{σ(n−1)} ∗ x_n)))`.
pub fn standard_identity(tag: ProductTag, n: u32) -> Expr {
    let items = signed_permutations(n as usize - 1)
        .into_iter()
        .map(|(perm, sign)| {
            let nested = perm
                .iter()
                .rev()
                .fold(x(n), |acc, &v| Expr::op(tag, x(v as u32 + 1), acc));
            if sign > 0 {
                nested
            } else {
                Expr::neg(nested)
            }
        })
        .collect();
    Expr::sum(items)
}

fn loz_cases() -> Vec<IdentityCase> {
    use ProductTag::Loz;
    let l = op(Loz);
    let (a, b, c, d) = (x(1), x(2), x(3), x(4));
    let tortken = Expr::sum(vec![
        l(l(a.clone(), b.clone()), l(c.clone(), d.clone())),
        Expr::neg(l(l(a.clone(), d.clone()), l(b.clone(), c.clone()))),
        l(Expr::assoc(a.clone(), b.clone(), c.clone()), d.clone()),
        Expr::neg(l(Expr::assoc(a.clone(), d.clone(), c.clone()), b.clone())),
    ]);
    // Left-normed words ((((p q) r) s) t) over a..e with coefficients.
    const DEGREE5: [(i64, [u32; 5]); 14] = [
        (2, [2, 1, 3, 4, 5]),
        (-1, [2, 1, 3, 5, 4]),
        (-2, [2, 1, 4, 3, 5]),
        (1, [2, 1, 4, 5, 3]),
        (-1, [3, 1, 2, 4, 5]),
        (1, [3, 1, 2, 5, 4]),
        (1, [3, 1, 4, 5, 2]),
        (-1, [3, 1, 5, 2, 4]),
        (1, [4, 1, 2, 3, 5]),
        (-1, [4, 1, 2, 5, 3]),
        (-1, [4, 1, 3, 5, 2]),
        (1, [4, 1, 5, 2, 3]),
        (1, [5, 1, 2, 3, 4]),
        (-1, [5, 1, 2, 4, 3]),
    ];
    let degree5 = Expr::sum(
        DEGREE5
            .iter()
            .map(|(c, w)| {
                let word = w[1..].iter().fold(x(w[0]), |acc, &v| l(acc, x(v)));
                if *c == 1 {
                    word
                } else {
                    Expr::scale_int(*c, word)
                }
            })
            .collect(),
    );
    vec![
        IdentityCase::new(
            "loz-commutative",
            Expr::sub(l(x(1), x(2)), l(x(2), x(1))),
            2,
            Loz,
            Mode::Ordinary,
            true,
        ),
        IdentityCase::new("loz-tortken", tortken, 4, Loz, Mode::Ordinary, true),
        IdentityCase::new("loz-degree5", degree5, 5, Loz, Mode::Ordinary, true),
    ]
}

fn bullet_cases() -> Vec<IdentityCase> {
    use ProductTag::Bullet;
    let m = op(Bullet);
    let (a, b, c, d) = (x(1), x(2), x(3), x(4));
    let left_comm = Expr::sub(
        m(m(a.clone(), b.clone()), c.clone()),
        m(m(b.clone(), a.clone()), c.clone()),
    );
    let di1 = Expr::sum(vec![
        m(m(a.clone(), b.clone()), m(c.clone(), d.clone())),
        Expr::neg(m(m(c.clone(), b.clone()), m(a.clone(), d.clone()))),
        m(Expr::assoc(a.clone(), b.clone(), c.clone()), d.clone()),
        m(
            b.clone(),
            Expr::sub(
                m(a.clone(), m(c.clone(), d.clone())),
                m(c.clone(), m(a.clone(), d.clone())),
            ),
        ),
    ]);
    let di2 = Expr::sum(vec![
        m(m(a.clone(), b.clone()), m(c.clone(), d.clone())),
        Expr::neg(m(m(a.clone(), c.clone()), m(b.clone(), d.clone()))),
        Expr::neg(m(b.clone(), Expr::assoc(a.clone(), c.clone(), d.clone()))),
        m(c.clone(), Expr::assoc(a.clone(), b.clone(), d.clone())),
    ]);
    vec![
        IdentityCase::new(
            "bullet-left-comm",
            left_comm,
            3,
            Bullet,
            Mode::Ordinary,
            true,
        ),
        IdentityCase::new("bullet-tortken-di-1", di1, 4, Bullet, Mode::Ordinary, true),
        IdentityCase::new("bullet-tortken-di-2", di2, 4, Bullet, Mode::Ordinary, true),
    ]
}

fn diamond_cases() -> Vec<IdentityCase> {
    use ProductTag::Diamond;
    let m = op(Diamond);
    let (a, b, c) = (x(1), x(2), x(3));
    let jacobi = Expr::sum(vec![
        m(m(a.clone(), b.clone()), c.clone()),
        m(m(b.clone(), c.clone()), a.clone()),
        m(m(c.clone(), a.clone()), b.clone()),
    ]);
    vec![
        IdentityCase::new(
            "diamond-anticomm",
            Expr::sum(vec![m(x(1), x(2)), m(x(2), x(1))]),
            2,
            Diamond,
            Mode::Ordinary,
            true,
        ),
        IdentityCase::new("diamond-jacobi", jacobi, 3, Diamond, Mode::Ordinary, true),
        IdentityCase::new(
            "diamond-std5",
            standard_identity(Diamond, 5),
            5,
            Diamond,
            Mode::Ordinary,
            false,
        ),
        IdentityCase::new(
            "diamond-std6",
            standard_identity(Diamond, 6),
            6,
            Diamond,
            Mode::Ordinary,
            true,
        ),
    ]
}

fn prec_cases() -> Vec<IdentityCase> {
    let (a, b, c) = (x(1), x(2), x(3));
    let e = Expr::sub(
        Expr::assoc(a.clone(), b.clone(), c.clone()),
        Expr::assoc(b, a, c),
    );
    vec![IdentityCase::new(
        "prec-pre-lie",
        e,
        3,
        ProductTag::Prec,
        Mode::Ordinary,
        true,
    )]
}

fn delta_leibniz_cases() -> Vec<IdentityCase> {
    let br = |a: Expr, b: Expr| Expr::bracket(a, b);
    let (a, b, c) = (x(1), x(2), x(3));
    let e = Expr::sum(vec![
        br(br(a.clone(), b.clone()), c.clone()),
        Expr::neg(br(a.clone(), br(b.clone(), c.clone()))),
        br(b.clone(), br(a.clone(), c.clone())),
    ]);
    vec![IdentityCase::new(
        "delta-leibniz",
        e,
        3,
        ProductTag::Circ,
        Mode::Delta,
        true,
    )]
}

fn delta_transposed_cases() -> Vec<IdentityCase> {
    let br = |a: Expr, b: Expr| Expr::bracket(a, b);
    let (a, b, c) = (x(1), x(2), x(3));
    let xyz = Expr::mul(a.clone(), br(b.clone(), c.clone()));
    let e = Expr::sum(vec![
        Expr::delta_times(xyz.clone()),
        xyz,
        Expr::neg(br(Expr::mul(a.clone(), b.clone()), c.clone())),
        Expr::neg(br(b.clone(), Expr::mul(a, c))),
    ]);
    vec![IdentityCase::new(
        "delta-transposed",
        e,
        3,
        ProductTag::Circ,
        Mode::Delta,
        true,
    )]
}

/// The term-tree cases of a suite; empty for the vector-field suites.
pub fn suite_cases(id: SuiteId) -> Vec<IdentityCase> {
    match id {
        SuiteId::Loz => loz_cases(),
        SuiteId::Bullet => bullet_cases(),
        SuiteId::Diamond => diamond_cases(),
        SuiteId::PrecPreLie => prec_cases(),
        SuiteId::DeltaLeibniz => delta_leibniz_cases(),
        SuiteId::DeltaTransposed => delta_transposed_cases(),
        SuiteId::FormalWLeibniz | SuiteId::FormalWPreLie => Vec::new(),
    }
}

/// Number of commuting derivations in the vector-field suites.
pub const FORMAL_ARITY: usize = 3;

fn field_witness(f: &FormalVectorField) -> Option<Witness> {
    f.components().next().and_then(|(i, p)| {
        let mut w = Verdict::from_poly(p).witness?;
        w.direction = Some(i);
        Some(w)
    })
}

fn formal_case(
    name: &str,
    i: usize,
    j: usize,
    k: usize,
    defect: Result<FormalVectorField>,
) -> Result<CaseResult> {
    let d = defect?;
    Ok(CaseResult {
        name: format!("{name}[{i},{j},{k}]"),
        expected: true,
        got: d.is_zero(),
        witness: field_witness(&d),
    })
}

fn formal_triples() -> Vec<(usize, usize, usize)> {
    let r = 1..=FORMAL_ARITY;
    r.clone()
        .flat_map(|i| {
            r.clone()
                .flat_map(move |j| (1..=FORMAL_ARITY).map(move |k| (i, j, k)))
        })
        .collect()
}

fn formal_fields(i: usize, j: usize, k: usize) -> Result<[FormalVectorField; 3]> {
    let g = |v| DiffPermPoly::generator(v, FORMAL_ARITY);
    Ok([
        FormalVectorField::term(g(1), i)?,
        FormalVectorField::term(g(2), j)?,
        FormalVectorField::term(g(3), k)?,
    ])
}

/// `[[X,Y],Z] − [X,[Y,Z]] + [Y,[X,Z]]` for the Leibniz bracket.
pub fn formal_leibniz_defect(i: usize, j: usize, k: usize) -> Result<FormalVectorField> {
    let [x, y, z] = formal_fields(i, j, k)?;
    let lhs = x.leibniz_bracket(&y)?.leibniz_bracket(&z)?;
    let r1 = x.leibniz_bracket(&y.leibniz_bracket(&z)?)?;
    let r2 = y.leibniz_bracket(&x.leibniz_bracket(&z)?)?;
    lhs.try_sub(&r1)?.try_add(&r2)
}

/// `(X,Y,Z) − (Y,X,Z)` for the associator of `≺`.
pub fn formal_pre_lie_defect(i: usize, j: usize, k: usize) -> Result<FormalVectorField> {
    let [x, y, z] = formal_fields(i, j, k)?;
    let assoc = |a: &FormalVectorField, b: &FormalVectorField| -> Result<FormalVectorField> {
        a.prec(b)?.prec(&z)?.try_sub(&a.prec(&b.prec(&z)?)?)
    };
    assoc(&x, &y)?.try_sub(&assoc(&y, &x)?)
}

/// Runs a suite; member identities are checked concurrently and reported
/// in their fixed order.
pub fn run_suite(id: SuiteId) -> Result<SuiteReport> {
    let cases: Vec<CaseResult> = match id {
        SuiteId::FormalWLeibniz => formal_triples()
            .into_par_iter()
            .map(|(i, j, k)| {
                formal_case("formal-w-leibniz", i, j, k, formal_leibniz_defect(i, j, k))
            })
            .collect::<Result<_>>()?,
        SuiteId::FormalWPreLie => formal_triples()
            .into_par_iter()
            .map(|(i, j, k)| {
                formal_case("formal-w-pre-lie", i, j, k, formal_pre_lie_defect(i, j, k))
            })
            .collect::<Result<_>>()?,
        _ => suite_cases(id)
            .into_par_iter()
            .map(|case| {
                let v = case.check()?;
                Ok(CaseResult {
                    name: case.name,
                    expected: case.expected,
                    got: v.is_identity,
                    witness: v.witness,
                })
            })
            .collect::<Result<_>>()?,
    };
    Ok(SuiteReport {
        suite: id.to_string(),
        cases,
    })
}

/// All suites, in order `a`..`h`.
pub fn run_all() -> Result<Vec<SuiteReport>> {
    SuiteId::ALL.into_par_iter().map(run_suite).collect()
}
