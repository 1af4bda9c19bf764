use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::expr::{Expr, ScalarLit};
use crate::algebra::{DiffPermPoly, PermMonomial, ProductTag};
use crate::error::{Error, Result};
use crate::scalar::{binomial, rat, Coeff, DeltaPoly, Rational, Scalar};

/// Sums with more members than this are evaluated in parallel.
const PARALLEL_SUM: usize = 32;

/// Fixes the derivation arity, the product behind `Assoc`/`Bracket`
/// sugar, and how a `δ` literal is read in rational evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalContext {
    pub arity: usize,
    pub product: Option<ProductTag>,
    /// Value substituted for `δ` literals by [`eval`] over the rationals;
    /// `None` makes such literals an error.
    pub delta_value: Option<Rational>,
}

impl EvalContext {
    pub fn single() -> Self {
        EvalContext {
            arity: 1,
            product: None,
            delta_value: None,
        }
    }

    pub fn with_product(product: ProductTag) -> Self {
        EvalContext {
            product: Some(product),
            ..EvalContext::single()
        }
    }

    pub fn multi(arity: usize) -> Self {
        EvalContext {
            arity,
            product: None,
            delta_value: None,
        }
    }
}

/// Coefficient rings that can interpret a scalar literal.
pub trait LiteralCoeff: Coeff {
    fn from_literal(lit: &ScalarLit, ctx: &EvalContext) -> Result<Self>;
}

impl LiteralCoeff for Rational {
    fn from_literal(lit: &ScalarLit, ctx: &EvalContext) -> Result<Self> {
        match lit {
            ScalarLit::Rational(q) => Ok(q.clone()),
            ScalarLit::Delta => ctx.delta_value.clone().ok_or(Error::DeltaInRationalContext),
        }
    }
}

impl LiteralCoeff for DeltaPoly {
    fn from_literal(lit: &ScalarLit, _ctx: &EvalContext) -> Result<Self> {
        match lit {
            ScalarLit::Rational(q) => Ok(DeltaPoly::constant(q.clone())),
            ScalarLit::Delta => Ok(DeltaPoly::delta()),
        }
    }
}

pub type Substitution<C> = BTreeMap<u32, DiffPermPoly<C>>;

/// Binds `x_i` to the generator `x_i` for `i = 1..=k`.
pub fn generator_substitution<C: Coeff>(k: u32, arity: usize) -> Substitution<C> {
    (1..=k)
        .map(|i| (i, DiffPermPoly::generator(i, arity)))
        .collect()
}

fn selected(ctx: &EvalContext) -> Result<ProductTag> {
    ctx.product.ok_or(Error::NoProductSelected)
}

/// Structural evaluation with the ordinary derivation(s).
pub fn eval<C: LiteralCoeff>(
    e: &Expr,
    subst: &Substitution<C>,
    ctx: &EvalContext,
) -> Result<DiffPermPoly<C>> {
    match e {
        Expr::Var(i) => {
            let v = subst.get(i).ok_or(Error::UnboundVariable(*i))?;
            if !v.is_zero() && v.arity() != ctx.arity {
                return Err(Error::ArityMismatch {
                    left: ctx.arity,
                    right: v.arity(),
                });
            }
            Ok(v.clone())
        }
        Expr::Mul(a, b) => eval(a, subst, ctx)?.mul(&eval(b, subst, ctx)?),
        Expr::Der(j, a) => eval(a, subst, ctx)?.derive(*j),
        Expr::Op(tag, a, b) => {
            DiffPermPoly::derived_product(*tag, &eval(a, subst, ctx)?, &eval(b, subst, ctx)?)
        }
        Expr::Star(a) => eval(a, subst, ctx)?.star(),
        Expr::Scale(lit, a) => Ok(eval(a, subst, ctx)?.scale(&C::from_literal(lit, ctx)?)),
        Expr::Sum(items) => {
            let zero = DiffPermPoly::zero(ctx.arity);
            if items.len() > PARALLEL_SUM {
                items
                    .par_iter()
                    .map(|item| eval(item, subst, ctx))
                    .try_reduce(|| zero.clone(), |a, b| a.try_add(&b))
            } else {
                items
                    .iter()
                    .try_fold(zero, |acc, item| acc.try_add(&eval(item, subst, ctx)?))
            }
        }
        Expr::Assoc(a, b, c) => {
            let tag = selected(ctx)?;
            let (a, b, c) = (
                eval(a, subst, ctx)?,
                eval(b, subst, ctx)?,
                eval(c, subst, ctx)?,
            );
            let left = DiffPermPoly::derived_product(
                tag,
                &DiffPermPoly::derived_product(tag, &a, &b)?,
                &c,
            )?;
            let right = DiffPermPoly::derived_product(
                tag,
                &a,
                &DiffPermPoly::derived_product(tag, &b, &c)?,
            )?;
            left.try_sub(&right)
        }
        Expr::Bracket(a, b) => {
            let tag = selected(ctx)?;
            DiffPermPoly::derived_product(tag, &eval(a, subst, ctx)?, &eval(b, subst, ctx)?)
        }
    }
}

/// Rewrites a derived product as a tree of products and derivations.
pub fn expand_product(tag: ProductTag, a: &Expr, b: &Expr) -> Expr {
    let ab_ = || Expr::mul(a.clone(), Expr::der(b.clone()));
    let a_b = || Expr::mul(Expr::der(a.clone()), b.clone());
    let ba_ = || Expr::mul(b.clone(), Expr::der(a.clone()));
    match tag {
        ProductTag::Prec => ab_(),
        ProductTag::Succ => a_b(),
        ProductTag::Loz => Expr::sum(vec![ab_(), ba_()]),
        ProductTag::Bullet => Expr::sum(vec![a_b(), ab_()]),
        ProductTag::Diamond => Expr::sub(ab_(), ba_()),
        ProductTag::Circ => Expr::sub(a_b(), ab_()),
    }
}

/// Evaluation under a `δ`-derivation `D(xy) = δ(D(x)y + xD(y))`.
///
/// Derivations are pushed through the syntactic products of the tree; at a
/// leaf the bound value must be a combination of single generators, where
/// `D(x^{(s)}) = x^{(s+1)}`. Coefficients live in `ℚ[δ]`.
pub fn eval_delta(
    e: &Expr,
    subst: &Substitution<DeltaPoly>,
    ctx: &EvalContext,
) -> Result<DiffPermPoly<DeltaPoly>> {
    if ctx.arity != 1 {
        return Err(Error::NeedsSingleDerivation {
            op: "δ-derivation",
            arity: ctx.arity,
        });
    }
    delta_power(e, 0, subst, ctx)
}

/// `D^k(e)` under the `δ`-Leibniz rule.
fn delta_power(
    e: &Expr,
    k: u32,
    subst: &Substitution<DeltaPoly>,
    ctx: &EvalContext,
) -> Result<DiffPermPoly<DeltaPoly>> {
    match e {
        Expr::Var(i) => {
            let v = subst.get(i).ok_or(Error::UnboundVariable(*i))?;
            if k == 0 {
                return Ok(v.clone());
            }
            if let Some((m, _)) = v.terms().find(|(m, _)| m.degree() > 1) {
                return Err(Error::AmbiguousDelta(format!(
                    "x{i} is bound to a product containing {m}"
                )));
            }
            let mut out = v.clone();
            for _ in 0..k {
                out = out.derive(1)?;
            }
            Ok(out)
        }
        Expr::Mul(a, b) => {
            if k == 0 {
                return delta_power(a, 0, subst, ctx)?.mul(&delta_power(b, 0, subst, ctx)?);
            }
            let mut out = DiffPermPoly::zero(ctx.arity);
            for i in 0..=k {
                let term =
                    delta_power(a, i, subst, ctx)?.mul(&delta_power(b, k - i, subst, ctx)?)?;
                out.add_scaled(
                    &term,
                    &DeltaPoly::constant(rat(binomial(k as u64, i as u64) as i64)),
                )?;
            }
            Ok(out.scale(&DeltaPoly::pow_delta(k as usize)))
        }
        Expr::Der(j, a) => {
            if *j != 1 {
                return Err(Error::DerivationIndex {
                    index: *j,
                    arity: 1,
                });
            }
            delta_power(a, k + 1, subst, ctx)
        }
        Expr::Op(tag, a, b) => delta_power(&expand_product(*tag, a, b), k, subst, ctx),
        Expr::Star(_) => Err(Error::Unsupported("star under a δ-derivation".into())),
        Expr::Scale(lit, a) => {
            Ok(delta_power(a, k, subst, ctx)?.scale(&DeltaPoly::from_literal(lit, ctx)?))
        }
        Expr::Sum(items) => items
            .iter()
            .try_fold(DiffPermPoly::zero(ctx.arity), |acc, item| {
                acc.try_add(&delta_power(item, k, subst, ctx)?)
            }),
        Expr::Assoc(a, b, c) => {
            let tag = selected(ctx)?;
            let left = Expr::op(
                tag,
                Expr::op(tag, (**a).clone(), (**b).clone()),
                (**c).clone(),
            );
            let right = Expr::op(
                tag,
                (**a).clone(),
                Expr::op(tag, (**b).clone(), (**c).clone()),
            );
            delta_power(&Expr::sub(left, right), k, subst, ctx)
        }
        Expr::Bracket(a, b) => delta_power(
            &Expr::op(selected(ctx)?, (**a).clone(), (**b).clone()),
            k,
            subst,
            ctx,
        ),
    }
}

/// A surviving term of a nonzero expansion.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Witness {
    pub monomial: PermMonomial,
    pub coeff: Scalar,
    /// Derivation index of the surviving vector-field component, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<usize>,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Verdict {
    pub is_identity: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn from_poly<C: Coeff>(p: &DiffPermPoly<C>) -> Self {
        Verdict {
            is_identity: p.is_zero(),
            witness: p.leading().map(|(m, c)| Witness {
                monomial: m.clone(),
                coeff: c.to_scalar(),
                direction: None,
            }),
        }
    }
}

fn check_multilinear<C: Coeff>(p: &DiffPermPoly<C>, k: u32) -> Result<()> {
    let ok = |m: &PermMonomial| m.degree() == k as usize && (1..=k).all(|v| m.occurrences(v) == 1);
    match p.terms().find(|(m, _)| !ok(m)) {
        Some((m, _)) => Err(Error::NotMultilinear(format!(
            "monomial {m} is not multilinear in x1..x{k}"
        ))),
        None => Ok(()),
    }
}

fn check_bound(e: &Expr, k: u32) -> Result<()> {
    match e.variables().into_iter().find(|&v| v == 0 || v > k) {
        Some(v) => Err(Error::UnboundVariable(v)),
        None => Ok(()),
    }
}

/// Decides whether `e = 0` holds identically, by substituting distinct
/// generators for `x_1..x_k` and expanding to normal form.
pub fn check_identity(e: &Expr, k: u32, ctx: &EvalContext) -> Result<Verdict> {
    check_bound(e, k)?;
    let p = eval::<Rational>(e, &generator_substitution(k, ctx.arity), ctx)?;
    check_multilinear(&p, k)?;
    Ok(Verdict::from_poly(&p))
}

/// [`check_identity`] under a `δ`-derivation, identically in `δ`.
pub fn check_identity_delta(e: &Expr, k: u32, ctx: &EvalContext) -> Result<Verdict> {
    check_bound(e, k)?;
    let p = eval_delta(e, &generator_substitution(k, ctx.arity), ctx)?;
    check_multilinear(&p, k)?;
    Ok(Verdict::from_poly(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GeneratorSymbol;

    fn x(i: u32) -> Expr {
        Expr::var(i)
    }

    fn gens(k: u32) -> Substitution<Rational> {
        generator_substitution(k, 1)
    }

    fn word(f: &[(u32, u32)]) -> DiffPermPoly<Rational> {
        let raw: Vec<_> = f.iter().map(|&(v, o)| GeneratorSymbol::new(v, o)).collect();
        DiffPermPoly::from_factors(&raw, rat(1)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let ctx = EvalContext::single();
        let e = Expr::mul(x(1), Expr::der(x(2)));
        assert_eq!(eval(&e, &gens(2), &ctx).unwrap(), word(&[(1, 0), (2, 1)]));

        let e = Expr::sum(vec![e.clone(), Expr::neg(e)]);
        assert!(eval(&e, &gens(2), &ctx).unwrap().is_zero());

        let ctx = EvalContext::with_product(ProductTag::Loz);
        let assoc = eval(&Expr::assoc(x(1), x(2), x(3)), &gens(3), &ctx).unwrap();
        let l = eval(
            &Expr::op(ProductTag::Loz, Expr::op(ProductTag::Loz, x(1), x(2)), x(3)),
            &gens(3),
            &ctx,
        )
        .unwrap();
        let r = eval(
            &Expr::op(ProductTag::Loz, x(1), Expr::op(ProductTag::Loz, x(2), x(3))),
            &gens(3),
            &ctx,
        )
        .unwrap();
        assert_eq!(assoc, l.try_sub(&r).unwrap());
    }

    #[test]
    fn eval_errors() {
        let ctx = EvalContext::single();
        assert_eq!(eval(&x(3), &gens(2), &ctx), Err(Error::UnboundVariable(3)));
        assert_eq!(
            eval(&Expr::assoc(x(1), x(1), x(1)), &gens(1), &ctx),
            Err(Error::NoProductSelected)
        );
        assert_eq!(
            eval(&Expr::delta_times(x(1)), &gens(1), &ctx),
            Err(Error::DeltaInRationalContext)
        );
        let multi = EvalContext::multi(2);
        let subst = generator_substitution::<Rational>(1, 2);
        assert!(matches!(
            eval(&Expr::star(x(1)), &subst, &multi),
            Err(Error::NeedsSingleDerivation { .. })
        ));
    }

    #[test]
    fn delta_examples() {
        let ctx = EvalContext::single();
        let subst = generator_substitution::<DeltaPoly>(2, 1);
        let d = DeltaPoly::delta();
        let expected = |f: &[(u32, u32)], g: &[(u32, u32)], sign: i64| {
            word(f)
                .try_add(&word(g).scale(&rat(sign)))
                .unwrap()
                .map_coeffs(|c| DeltaPoly::constant(c.clone()))
                .scale(&d)
        };
        let got = eval_delta(&Expr::der(Expr::mul(x(1), x(2))), &subst, &ctx).unwrap();
        assert_eq!(got, expected(&[(1, 1), (2, 0)], &[(1, 0), (2, 1)], 1));

        let got = eval_delta(
            &Expr::der(Expr::op(ProductTag::Circ, x(1), x(2))),
            &subst,
            &ctx,
        )
        .unwrap();
        assert_eq!(got, expected(&[(1, 2), (2, 0)], &[(1, 0), (2, 2)], -1));
    }

    #[test]
    fn delta_on_flattened_product_is_ambiguous() {
        let ctx = EvalContext::single();
        let mut subst = generator_substitution::<DeltaPoly>(2, 1);
        let product = subst[&1].mul(&subst[&2]).unwrap();
        subst.insert(3, product);
        assert!(matches!(
            eval_delta(&Expr::der(x(3)), &subst, &ctx),
            Err(Error::AmbiguousDelta(_))
        ));
        assert!(eval_delta(&x(3), &subst, &ctx).is_ok());
    }

    #[test]
    fn check_identity_rejects_non_multilinear() {
        let ctx = EvalContext::single();
        let e = Expr::mul(x(1), x(1));
        assert!(matches!(
            check_identity(&e, 1, &ctx),
            Err(Error::NotMultilinear(_))
        ));
        let e = Expr::op(ProductTag::Diamond, x(1), x(2));
        let v = check_identity(&e, 2, &ctx).unwrap();
        assert!(!v.is_identity);
        assert!(v.witness.is_some());
        let anti = Expr::sum(vec![
            Expr::op(ProductTag::Diamond, x(1), x(2)),
            Expr::op(ProductTag::Diamond, x(2), x(1)),
        ]);
        assert!(check_identity(&anti, 2, &ctx).unwrap().is_identity);
    }
}
