//! From a nontrivial multilinear identity to a consequence of the form
//! `a_1′ a_2′ ⋯ a_m′ = 0`.
//!
//! Every step works on a polynomial that is a consequence of the input:
//! obtained from earlier steps only by substituting polynomials for
//! variables, multiplying by a variable, and taking linear combinations.
//! The steps are recorded in a trace that can be replayed independently.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{annihilator_test, DiffPermPoly, GeneratorSymbol, PermMonomial};
use crate::error::{Error, Result};
use crate::identity::{eval, generator_substitution, EvalContext, Expr};
use crate::scalar::{factorial, rat, serialize_rational, Rational};

/// `f = Σ_s g_s·x_k^{(s)} + Σ_s x_k^{(s)}·p_s`.
#[derive(Clone, PartialEq, Debug)]
pub struct Decomposition {
    pub k: u32,
    pub n: u32,
    pub g: Vec<DiffPermPoly>,
    pub p: Vec<DiffPermPoly>,
}

impl Decomposition {
    /// `c_s = g_s + p_s`.
    pub fn c(&self, s: usize) -> Result<DiffPermPoly> {
        self.g[s].try_add(&self.p[s])
    }

    pub fn reassemble(&self) -> Result<DiffPermPoly> {
        let mut out = DiffPermPoly::zero(1);
        for s in 0..=self.n as usize {
            let xs = DiffPermPoly::symbol(GeneratorSymbol::new(self.k, s as u32));
            out = out
                .try_add(&self.g[s].mul(&xs)?)?
                .try_add(&xs.mul(&self.p[s])?)?;
        }
        Ok(out)
    }
}

fn require_single(p: &DiffPermPoly, op: &'static str) -> Result<()> {
    if !p.is_zero() && p.arity() != 1 {
        return Err(Error::NeedsSingleDerivation {
            op,
            arity: p.arity(),
        });
    }
    Ok(())
}

/// Splits `f` by the position and order of `x_k`. Monomials ending in
/// `x_k^{(s)}` go to `g_s`; the others are rewritten with `x_k^{(s)}` in
/// front and go to `p_s`.
pub fn decompose(f: &DiffPermPoly, k: u32) -> Result<Decomposition> {
    require_single(f, "decompose")?;
    let mut g: BTreeMap<u32, Vec<(PermMonomial, Rational)>> = BTreeMap::new();
    let mut p: BTreeMap<u32, Vec<(PermMonomial, Rational)>> = BTreeMap::new();
    let mut n = 0;
    for (m, c) in f.terms() {
        let missing = || Error::MissingVariable {
            var: k,
            monomial: m.to_string(),
        };
        if m.occurrences(k) != 1 {
            return Err(if m.occurrences(k) == 0 {
                missing()
            } else {
                Error::NotMultilinear(m.to_string())
            });
        }
        if m.degree() < 2 {
            return Err(Error::DegreeTooSmall { min: 2, got: 1 });
        }
        let xk = m.factors().find(|s| s.var == k).ok_or_else(missing)?;
        let s = xk.total_order();
        n = n.max(s);
        if m.last().var == k {
            let rest = PermMonomial::normalize(m.left())?;
            g.entry(s).or_default().push((rest, c.clone()));
        } else {
            let mut skipped = false;
            let rest: Vec<GeneratorSymbol> = m
                .factors()
                .filter(|f| {
                    let hit = !skipped && f.var == k;
                    skipped |= hit;
                    !hit
                })
                .cloned()
                .collect();
            p.entry(s)
                .or_default()
                .push((PermMonomial::normalize(&rest)?, c.clone()));
        }
    }
    let collect = |map: &mut BTreeMap<u32, Vec<(PermMonomial, Rational)>>| -> Vec<DiffPermPoly> {
        (0..=n)
            .map(|s| {
                let mut out = DiffPermPoly::zero(1);
                for (m, c) in map.remove(&s).unwrap_or_default() {
                    out.add_scaled(&DiffPermPoly::monomial(m, rat(1), 1), &c)
                        .expect("single derivation");
                }
                out
            })
            .collect()
    };
    Ok(Decomposition {
        k,
        n,
        g: collect(&mut g),
        p: collect(&mut p),
    })
}

fn gen(v: u32) -> DiffPermPoly {
    DiffPermPoly::generator(v, 1)
}

fn ensure_fresh(p: &DiffPermPoly, vars: &[u32]) -> Result<()> {
    let used = p.variables();
    match vars.iter().find(|v| used.contains(v)) {
        Some(&v) => Err(Error::NotFresh(v)),
        None => Ok(()),
    }
}

/// `f(…, y)·z − f(…, z)·y` with `y`, `z` in place of `x_k`.
pub fn h0(f: &DiffPermPoly, k: u32, y: u32, z: u32) -> Result<DiffPermPoly> {
    require_single(f, "h0")?;
    ensure_fresh(f, &[y, z])?;
    if let Some((m, _)) = f.terms().find(|(m, _)| m.occurrences(k) == 0) {
        return Err(Error::MissingVariable {
            var: k,
            monomial: m.to_string(),
        });
    }
    let at = |v: u32| f.substitute(&BTreeMap::from([(k, gen(v))]));
    at(y)?.mul(&gen(z))?.try_sub(&at(z)?.mul(&gen(y))?)
}

/// Fresh variables of one lowering pass.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PassVars {
    pub y: u32,
    pub z: u32,
    pub u: u32,
}

fn swap_yz(h: &DiffPermPoly, v: PassVars) -> Result<DiffPermPoly> {
    h.substitute(&BTreeMap::from([(v.y, gen(v.z)), (v.z, gen(v.y))]))
}

fn check_shape(h: &DiffPermPoly, v: PassVars) -> Result<()> {
    if let Some((m, _)) = h
        .terms()
        .find(|(m, _)| *m.last() != GeneratorSymbol::new(v.u, 0))
    {
        return Err(Error::Shape(format!(
            "monomial {m} does not end in x{}",
            v.u
        )));
    }
    if !swap_yz(h, v)?.try_add(h)?.is_zero() {
        return Err(Error::Shape(format!(
            "not antisymmetric in x{} and x{}",
            v.y, v.z
        )));
    }
    Ok(())
}

/// `h(yt, z)u − t·h(y, z)u − h(zt, y)u + t·h(z, y)u`, where `h` already
/// carries the trailing `u`. Lowers the top derivative order of `y` by one.
pub fn h_step(h: &DiffPermPoly, v: PassVars, t: u32) -> Result<DiffPermPoly> {
    require_single(h, "h_step")?;
    ensure_fresh(h, &[t])?;
    check_shape(h, v)?;
    let yt = gen(v.y).mul(&gen(t))?;
    let zt = gen(v.z).mul(&gen(t))?;
    let sigma1 = h.substitute(&BTreeMap::from([(v.y, yt)]))?;
    let sigma2 = h.substitute(&BTreeMap::from([(v.y, zt), (v.z, gen(v.y))]))?;
    let sigma3 = swap_yz(h, v)?;
    sigma1
        .try_sub(&gen(t).mul(h)?)?
        .try_sub(&sigma2)?
        .try_add(&gen(t).mul(&sigma3)?)
}

/// `h(yt, z)u − t·h(y, z)u`.
pub fn final_step(h: &DiffPermPoly, v: PassVars, t: u32) -> Result<DiffPermPoly> {
    require_single(h, "final_step")?;
    ensure_fresh(h, &[t])?;
    check_shape(h, v)?;
    let yt = gen(v.y).mul(&gen(t))?;
    h.substitute(&BTreeMap::from([(v.y, yt)]))?
        .try_sub(&gen(t).mul(h)?)
}

/// The coefficient `c_n` of a pass: a scalar for a degree-one input,
/// otherwise an element of the algebra.
#[derive(Clone, PartialEq, Debug, Serialize)]
#[serde(untagged)]
pub enum LeadingCoeff {
    Scalar(#[serde(serialize_with = "serialize_rational")] Rational),
    Element(DiffPermPoly),
}

/// `n!·c·t_1′⋯t_{n−1}′·(y′z − yz′)·u`, the expected shape after the
/// lowering steps of a pass.
pub fn expected_h_last(c: &LeadingCoeff, n: u32, ts: &[u32], v: PassVars) -> Result<DiffPermPoly> {
    let gy = gen(v.y);
    let gz = gen(v.z);
    let mut acc = gy.derive(1)?.mul(&gz)?.try_sub(&gy.mul(&gz.derive(1)?)?)?;
    for &t in ts {
        acc = gen(t).derive(1)?.mul(&acc)?;
    }
    acc = match c {
        LeadingCoeff::Scalar(q) => acc.scale(q),
        LeadingCoeff::Element(c) => c.mul(&acc)?,
    };
    Ok(acc.mul(&gen(v.u))?.scale(&factorial(n)))
}

#[derive(Clone, PartialEq, Debug, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    Input,
    RightMultiply { var: u32 },
    H0 { k: u32, y: u32, z: u32 },
    HStep { y: u32, z: u32, u: u32, t: u32 },
    FinalStep { y: u32, z: u32, u: u32, t: u32 },
    DeriveUnderived { vars: Vec<u32> },
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TraceStep {
    #[serde(flatten)]
    pub rule: Rule,
    pub poly: DiffPermPoly,
}

/// One lowering pass on the distinguished variable `k` of top order `n`.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct PassRecord {
    pub k: u32,
    pub n: u32,
    pub c_n: LeadingCoeff,
    pub vars: PassVars,
    /// Variables of the `n − 1` lowering steps.
    pub ts: Vec<u32>,
    /// Variable of the final step.
    pub final_t: u32,
    /// Trace index of the polynomial after the last lowering step.
    pub h_last: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    DerivativeOnly,
    RightAnnihilator,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Certificate {
    pub m: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub coeff: Rational,
    pub poly: DiffPermPoly,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ReductionResult {
    pub outcome: Outcome,
    pub consequence: Option<Certificate>,
    pub trace: Vec<TraceStep>,
    pub passes: Vec<PassRecord>,
}

struct Reducer {
    next: u32,
    originals: Vec<u32>,
    trace: Vec<TraceStep>,
    passes: Vec<PassRecord>,
}

impl Reducer {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }

    fn current(&self) -> &DiffPermPoly {
        &self.trace.last().expect("trace starts with the input").poly
    }

    fn push(&mut self, rule: Rule, poly: DiffPermPoly) {
        self.trace.push(TraceStep { rule, poly });
    }

    fn right_multiply(&mut self) -> Result<u32> {
        let u = self.fresh();
        let p = self.current().times_generator(u)?;
        self.push(Rule::RightMultiply { var: u }, p);
        Ok(u)
    }

    /// Original variable of highest order in the right-multiplied image,
    /// ties to the largest index, with that order.
    fn distinguished(&self) -> Result<Option<(u32, u32)>> {
        let probe = self.current().times_generator(self.next + 1)?;
        Ok(self
            .originals
            .iter()
            .filter_map(|&v| probe.max_order_of(v).map(|o| (o, v)))
            .max()
            .filter(|&(o, _)| o >= 1)
            .map(|(o, v)| (v, o)))
    }

    fn pass(&mut self, k: u32, n: u32) -> Result<()> {
        let f = self.current().clone();
        let c_n = if f.terms().all(|(m, _)| m.degree() == 1) {
            let top = PermMonomial::single(GeneratorSymbol::new(k, n));
            LeadingCoeff::Scalar(f.coeff(&top).cloned().unwrap_or_else(|| rat(0)))
        } else {
            LeadingCoeff::Element(decompose(&f, k)?.c(n as usize)?)
        };
        let (y, z) = (self.fresh(), self.fresh());
        self.push(Rule::H0 { k, y, z }, h0(&f, k, y, z)?);
        let u = self.right_multiply()?;
        let vars = PassVars { y, z, u };
        let mut ts = Vec::new();
        for _ in 1..n {
            let t = self.fresh();
            let h = h_step(self.current(), vars, t)?;
            self.push(Rule::HStep { y, z, u, t }, h);
            ts.push(t);
        }
        let h_last = self.trace.len() - 1;
        let final_t = self.fresh();
        let p = final_step(self.current(), vars, final_t)?;
        self.push(
            Rule::FinalStep {
                y,
                z,
                u,
                t: final_t,
            },
            p,
        );
        self.originals.retain(|&v| v != k);
        self.passes.push(PassRecord {
            k,
            n,
            c_n,
            vars,
            ts,
            final_t,
            h_last,
        });
        Ok(())
    }
}

fn is_derivative_only(p: &DiffPermPoly) -> bool {
    p.len() == 1
        && p.terms()
            .all(|(m, _)| m.factors().all(|s| s.total_order() == 1))
}

fn certificate(p: &DiffPermPoly) -> Result<Certificate> {
    let (m, c) = p.leading().ok_or(Error::ZeroInput)?;
    if !is_derivative_only(p) {
        return Err(Error::Shape(format!(
            "{p} is not a single product of first derivatives"
        )));
    }
    Ok(Certificate {
        m: m.degree(),
        coeff: c.clone(),
        poly: p.clone(),
    })
}

/// Runs the reduction on a nonzero multilinear `f`.
pub fn reduce(f: &DiffPermPoly) -> Result<ReductionResult> {
    require_single(f, "reduce")?;
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !f.is_multilinear() {
        return Err(Error::NotMultilinear(f.to_string()));
    }
    let mut r = Reducer {
        next: f.max_var(),
        originals: f.variables().into_iter().collect(),
        trace: vec![TraceStep {
            rule: Rule::Input,
            poly: f.clone(),
        }],
        passes: Vec::new(),
    };
    if annihilator_test(f) {
        return Ok(ReductionResult {
            outcome: Outcome::RightAnnihilator,
            consequence: None,
            trace: r.trace,
            passes: r.passes,
        });
    }
    if !is_derivative_only(f) {
        while let Some((k, n)) = r.distinguished()? {
            r.pass(k, n)?;
        }
        if r.current().len() > 1 {
            r.right_multiply()?;
        }
        let underived: Vec<u32> = r
            .current()
            .terms()
            .flat_map(|(m, _)| {
                m.factors()
                    .filter(|s| s.total_order() == 0)
                    .map(|s| s.var)
                    .collect::<Vec<_>>()
            })
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if !underived.is_empty() {
            let images = underived
                .iter()
                .map(|&v| (v, gen(v).derive(1).expect("arity 1")))
                .collect();
            let p = r.current().substitute(&images)?;
            r.push(Rule::DeriveUnderived { vars: underived }, p);
        }
    }
    let consequence = certificate(r.current())?;
    Ok(ReductionResult {
        outcome: Outcome::DerivativeOnly,
        consequence: Some(consequence),
        trace: r.trace,
        passes: r.passes,
    })
}

/// Recomputes trace step `i ≥ 1` from step `i − 1` by building the step as
/// a term tree and evaluating it.
pub fn replay_step(trace: &[TraceStep], i: usize) -> Result<DiffPermPoly> {
    if i == 0 || i >= trace.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            n: trace.len().saturating_sub(1),
        });
    }
    let prev = Expr::from_poly(&trace[i - 1].poly);
    let v = Expr::var;
    let rename = |pairs: &[(u32, Expr)]| prev.subst_vars(&pairs.iter().cloned().collect());
    let tree = match &trace[i].rule {
        Rule::Input => return Err(Error::Shape("input step has no predecessor".into())),
        Rule::RightMultiply { var } => Expr::mul(prev.clone(), v(*var)),
        Rule::H0 { k, y, z } => Expr::sub(
            Expr::mul(rename(&[(*k, v(*y))]), v(*z)),
            Expr::mul(rename(&[(*k, v(*z))]), v(*y)),
        ),
        Rule::HStep { y, z, t, .. } => Expr::sum(vec![
            rename(&[(*y, Expr::mul(v(*y), v(*t)))]),
            Expr::neg(Expr::mul(v(*t), prev.clone())),
            Expr::neg(rename(&[(*y, Expr::mul(v(*z), v(*t))), (*z, v(*y))])),
            Expr::mul(v(*t), rename(&[(*y, v(*z)), (*z, v(*y))])),
        ]),
        Rule::FinalStep { y, t, .. } => Expr::sub(
            rename(&[(*y, Expr::mul(v(*y), v(*t)))]),
            Expr::mul(v(*t), prev.clone()),
        ),
        Rule::DeriveUnderived { vars } => rename(
            &vars
                .iter()
                .map(|&x| (x, Expr::der(v(x))))
                .collect::<Vec<_>>(),
        ),
    };
    let top = trace[i].poly.max_var().max(trace[i - 1].poly.max_var());
    eval(
        &tree,
        &generator_substitution(top, 1),
        &EvalContext::single(),
    )
}

/// Replays every step; returns the first index that does not reproduce.
pub fn replay(trace: &[TraceStep]) -> Result<Option<usize>> {
    for i in 1..trace.len() {
        if replay_step(trace, i)? != trace[i].poly {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(f: &[(u32, u32)]) -> DiffPermPoly {
        let raw: Vec<_> = f.iter().map(|&(v, o)| GeneratorSymbol::new(v, o)).collect();
        DiffPermPoly::from_factors(&raw, rat(1)).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&word(&[(1, 0), (2, 1)]), 2).unwrap();
        assert_eq!((d.n, d.g[1].clone()), (1, word(&[(1, 0)])));
        assert!(d.g[0].is_zero() && d.p.iter().all(DiffPermPoly::is_zero));

        let d = decompose(&word(&[(2, 2), (1, 0)]), 2).unwrap();
        assert_eq!((d.n, d.p[2].clone()), (2, word(&[(1, 0)])));

        let f = word(&[(1, 0), (2, 1)])
            .try_add(&word(&[(2, 1), (1, 0)]))
            .unwrap();
        let d = decompose(&f, 2).unwrap();
        assert_eq!(
            (d.g[1].clone(), d.p[1].clone()),
            (word(&[(1, 0)]), word(&[(1, 0)]))
        );
        assert_eq!(d.reassemble().unwrap(), f);

        assert!(matches!(
            decompose(&word(&[(1, 0), (3, 0)]), 2),
            Err(Error::MissingVariable { .. })
        ));
    }

    #[test]
    fn h0_example() {
        let got = h0(&word(&[(1, 0), (2, 1)]), 2, 3, 4).unwrap();
        let expected = word(&[(1, 0), (3, 1), (4, 0)])
            .try_sub(&word(&[(1, 0), (4, 1), (3, 0)]))
            .unwrap();
        assert_eq!(got, expected);
        let ann = word(&[(1, 0), (2, 0)])
            .try_sub(&word(&[(2, 0), (1, 0)]))
            .unwrap();
        assert!(h0(&ann, 2, 3, 4)
            .unwrap()
            .times_generator(5)
            .unwrap()
            .is_zero());
        assert!(matches!(
            h0(&word(&[(1, 0), (2, 1)]), 2, 1, 4),
            Err(Error::NotFresh(1))
        ));
    }

    #[test]
    fn h_step_on_second_order() {
        // c(y''z − z''y)u with c = x1; y, z, u, t = x2, x3, x4, x5.
        let v = PassVars { y: 2, z: 3, u: 4 };
        let h = word(&[(1, 0), (2, 2), (3, 0), (4, 0)])
            .try_sub(&word(&[(1, 0), (3, 2), (2, 0), (4, 0)]))
            .unwrap();
        let out = h_step(&h, v, 5).unwrap();
        let top = expected_h_last(&LeadingCoeff::Element(word(&[(1, 0)])), 2, &[5], v).unwrap();
        assert_eq!(out, top);
        assert!(h_step(&word(&[(2, 1), (3, 0)]), v, 5).is_err());
    }

    #[test]
    fn reduce_examples() {
        let ann = word(&[(1, 0), (2, 0)])
            .try_sub(&word(&[(2, 0), (1, 0)]))
            .unwrap();
        assert_eq!(reduce(&ann).unwrap().outcome, Outcome::RightAnnihilator);

        let r = reduce(&word(&[(1, 0), (2, 1)])).unwrap();
        let c = r.consequence.as_ref().unwrap();
        assert_eq!((c.m, c.coeff.clone()), (5, rat(1)));
        assert_eq!(replay(&r.trace).unwrap(), None);

        let r = reduce(&word(&[(1, 1), (2, 0)])).unwrap();
        assert_eq!(r.consequence.unwrap().m, 5);

        let already = word(&[(1, 1), (2, 1)]).scale(&rat(3));
        let r = reduce(&already).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.consequence.unwrap().poly, already);

        assert!(matches!(
            reduce(&DiffPermPoly::zero(1)),
            Err(Error::ZeroInput)
        ));
        assert!(matches!(
            reduce(&word(&[(1, 0), (1, 1)])),
            Err(Error::NotMultilinear(_))
        ));
    }

    #[test]
    fn degree_one_inputs() {
        let r = reduce(&word(&[(1, 0)])).unwrap();
        assert_eq!(r.consequence.unwrap().poly, word(&[(1, 1)]));
        let r = reduce(&word(&[(1, 2)]).scale(&rat(-2))).unwrap();
        assert_eq!(r.outcome, Outcome::DerivativeOnly);
        assert_eq!(replay(&r.trace).unwrap(), None);
    }
}
