//! The free differential perm algebra.
//!
//! A basis monomial is a word `f_1 f_2 ... f_{n-1} f_n` of differential
//! generators where the first `n - 1` factors are sorted and the last factor
//! is arbitrary. This is exactly the normal form forced by associativity and
//! the left-commutative law `abc = bac`: in any product every factor except
//! the rightmost one commutes with its neighbours.
//!
//! Generators carry a derivative multi-index, one entry per formal
//! derivation. The single-derivation setting uses arity 1, where
//! `dord = [s]` denotes `x^{(s)}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Rational};

/// Derivative multi-index of a generator.
pub type DerivOrder = SmallVec<[u32; 3]>;

/// One differential generator `x_var` with derivative orders `dord`.
///
/// Ordering is lexicographic on `(var, dord)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GeneratorSymbol {
    pub var: u32,
    pub dord: DerivOrder,
}

impl GeneratorSymbol {
    /// `x_var^{(order)}` in the single-derivation setting.
    pub fn new(var: u32, order: u32) -> Self {
        GeneratorSymbol {
            var,
            dord: smallvec![order],
        }
    }

    /// Generator with an explicit multi-index.
    pub fn with_orders(var: u32, orders: &[u32]) -> Self {
        GeneratorSymbol {
            var,
            dord: orders.iter().copied().collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.dord.len()
    }

    /// Sum of all derivative orders.
    pub fn total_order(&self) -> u32 {
        self.dord.iter().sum()
    }

    /// The generator with its `j`-th (0-based) order raised by one.
    pub fn derived(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.dord[j] += 1;
        out
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.var)?;
        match self.dord.as_slice() {
            [s] => match s {
                0 => Ok(()),
                1..=3 => write!(f, "{}", "'".repeat(*s as usize)),
                _ => write!(f, "^({s})"),
            },
            orders if orders.iter().all(|&o| o == 0) => Ok(()),
            orders => {
                let parts: Vec<String> = orders.iter().map(u32::to_string).collect();
                write!(f, "^({})", parts.join(","))
            }
        }
    }
}

/// Canonical basis monomial: sorted left factors followed by the last factor.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PermMonomial {
    left: Vec<GeneratorSymbol>,
    last: GeneratorSymbol,
}

impl PermMonomial {
    /// Brings a raw factor sequence to normal form.
    pub fn normalize(raw: &[GeneratorSymbol]) -> Result<Self> {
        let (last, rest) = raw.split_last().ok_or(Error::EmptyMonomial)?;
        let mut left = rest.to_vec();
        left.sort_unstable();
        Ok(PermMonomial {
            left,
            last: last.clone(),
        })
    }

    fn from_parts(mut left: Vec<GeneratorSymbol>, last: GeneratorSymbol) -> Self {
        left.sort_unstable();
        PermMonomial { left, last }
    }

    /// A single generator.
    pub fn single(symbol: GeneratorSymbol) -> Self {
        PermMonomial {
            left: Vec::new(),
            last: symbol,
        }
    }

    pub fn left(&self) -> &[GeneratorSymbol] {
        &self.left
    }

    pub fn last(&self) -> &GeneratorSymbol {
        &self.last
    }

    /// Factors in canonical order: left part, then the last factor.
    pub fn factors(&self) -> impl Iterator<Item = &GeneratorSymbol> + Clone {
        self.left.iter().chain(std::iter::once(&self.last))
    }

    pub fn degree(&self) -> usize {
        self.left.len() + 1
    }

    pub fn arity(&self) -> usize {
        self.last.arity()
    }

    /// Weight `(sum of derivative orders) - degree`; single derivation only.
    pub fn weight(&self) -> Result<i64> {
        if self.arity() != 1 {
            return Err(Error::NeedsSingleDerivation {
                op: "weight",
                arity: self.arity(),
            });
        }
        let orders: i64 = self.factors().map(|s| s.total_order() as i64).sum();
        Ok(orders - self.degree() as i64)
    }

    /// `(degree, weight)`.
    pub fn grade(&self) -> Result<(usize, i64)> {
        Ok((self.degree(), self.weight()?))
    }

    /// Product in the free perm algebra.
    pub fn times(&self, rhs: &PermMonomial) -> PermMonomial {
        let mut left = Vec::with_capacity(self.left.len() + rhs.left.len() + 1);
        left.extend_from_slice(&self.left);
        left.push(self.last.clone());
        left.extend_from_slice(&rhs.left);
        PermMonomial::from_parts(left, rhs.last.clone())
    }

    /// Sorted multiset of all factors; equal for monomials that differ by an
    /// element of the right annihilator.
    pub fn factor_multiset(&self) -> Vec<GeneratorSymbol> {
        let mut all: Vec<GeneratorSymbol> = self.factors().cloned().collect();
        all.sort_unstable();
        all
    }

    /// Occurrences of variable `var` among the factors.
    pub fn occurrences(&self, var: u32) -> usize {
        self.factors().filter(|s| s.var == var).count()
    }

    pub fn variables(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors().map(|s| s.var)
    }
}

impl Ord for PermMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.left.cmp(&other.left))
            .then_with(|| self.last.cmp(&other.last))
    }
}

impl PartialOrd for PermMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PermMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.left {
            write!(f, "{s} ")?;
        }
        write!(f, "{}", self.last)
    }
}

impl Serialize for PermMonomial {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The six products derived from the derivation `d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductTag {
    /// `a b'`
    Prec,
    /// `a' b`
    Succ,
    /// `a b' + b a'`
    Loz,
    /// `a' b + a b'`
    Bullet,
    /// `a b' - b a'`
    Diamond,
    /// `a' b - a b'`
    Circ,
}

impl ProductTag {
    pub const ALL: [ProductTag; 6] = [
        ProductTag::Prec,
        ProductTag::Succ,
        ProductTag::Loz,
        ProductTag::Bullet,
        ProductTag::Diamond,
        ProductTag::Circ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProductTag::Prec => "prec",
            ProductTag::Succ => "succ",
            ProductTag::Loz => "loz",
            ProductTag::Bullet => "bullet",
            ProductTag::Diamond => "diamond",
            ProductTag::Circ => "circ",
        }
    }
}

impl fmt::Display for ProductTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProductTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProductTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownProduct(s.to_string()))
    }
}

/// Element of the free differential perm algebra.
///
/// `arity` is the number of formal derivations; every generator in the
/// polynomial carries a multi-index of that length. Zero coefficients are
/// never stored, so equality of polynomials is equality of term maps.
#[derive(Clone, PartialEq, Debug)]
pub struct DiffPermPoly<C: Coeff = Rational> {
    arity: usize,
    terms: BTreeMap<PermMonomial, C>,
}

fn accumulate<C: Coeff>(terms: &mut BTreeMap<PermMonomial, C>, m: PermMonomial, c: C) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            o.get_mut().add_assign(&c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl<C: Coeff> DiffPermPoly<C> {
    pub fn zero(arity: usize) -> Self {
        DiffPermPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// The generator `x_var` with all derivative orders zero.
    pub fn generator(var: u32, arity: usize) -> Self {
        Self::symbol(GeneratorSymbol {
            var,
            dord: smallvec![0; arity],
        })
    }

    /// A single differential generator.
    pub fn symbol(symbol: GeneratorSymbol) -> Self {
        let arity = symbol.arity();
        Self::monomial(PermMonomial::single(symbol), C::one(), arity)
    }

    pub fn monomial(m: PermMonomial, c: C, arity: usize) -> Self {
        let mut out = Self::zero(arity);
        accumulate(&mut out.terms, m, c);
        out
    }

    /// Product of a raw factor sequence, normalized.
    pub fn from_factors(raw: &[GeneratorSymbol], c: C) -> Result<Self> {
        let m = PermMonomial::normalize(raw)?;
        let arity = m.arity();
        if m.factors().any(|s| s.arity() != arity) {
            return Err(Error::ArityMismatch {
                left: arity,
                right: m
                    .factors()
                    .map(GeneratorSymbol::arity)
                    .find(|&a| a != arity)
                    .unwrap_or(arity),
            });
        }
        Ok(Self::monomial(m, c, arity))
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (PermMonomial, C)>) -> Self {
        let mut out = Self::zero(arity);
        for (m, c) in terms {
            accumulate(&mut out.terms, m, c);
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PermMonomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PermMonomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// The smallest monomial under the canonical order.
    pub fn leading(&self) -> Option<(&PermMonomial, &C)> {
        self.terms.iter().next()
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &C) -> Result<()> {
        if other.is_zero() || c.is_zero() {
            return Ok(());
        }
        if self.is_zero() {
            self.arity = other.arity;
        }
        self.check_arity(other)?;
        for (m, oc) in &other.terms {
            accumulate(&mut self.terms, m.clone(), oc.mul(c));
        }
        Ok(())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        DiffPermPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        DiffPermPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.neg()))
                .collect(),
        }
    }

    /// Perm product, extended bilinearly.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.arity));
        }
        self.check_arity(other)?;
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                accumulate(&mut terms, a.times(b), ca.mul(cb));
            }
        }
        Ok(DiffPermPoly {
            arity: self.arity,
            terms,
        })
    }

    /// Applies the `j`-th derivation (1-based) by the Leibniz rule.
    pub fn derive(&self, j: usize) -> Result<Self> {
        if j == 0 || j > self.arity {
            return Err(Error::DerivationIndex {
                index: j,
                arity: self.arity,
            });
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            for pos in 0..m.degree() {
                let mut factors: Vec<GeneratorSymbol> = m.factors().cloned().collect();
                factors[pos] = factors[pos].derived(j - 1);
                let last = factors.pop().expect("degree >= 1");
                accumulate(
                    &mut terms,
                    PermMonomial::from_parts(factors, last),
                    c.clone(),
                );
            }
        }
        Ok(DiffPermPoly {
            arity: self.arity,
            terms,
        })
    }

    /// Applies `D_1^{o_1} ... D_k^{o_k}` for a multi-index `orders`.
    pub fn derive_multi(&self, orders: &[u32]) -> Result<Self> {
        let mut out = self.clone();
        for (j, &o) in orders.iter().enumerate() {
            for _ in 0..o {
                out = out.derive(j + 1)?;
            }
        }
        Ok(out)
    }

    /// The formal symmetrized derivative `(uv)* = u v* + v u*`.
    ///
    /// Computed by the closed form: for each factor, the word with that
    /// factor differentiated and moved to the last position.
    pub fn star(&self) -> Result<Self> {
        self.require_single("star")?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let factors: Vec<&GeneratorSymbol> = m.factors().collect();
            for pos in 0..factors.len() {
                let left: Vec<GeneratorSymbol> = factors
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != pos)
                    .map(|(_, s)| (*s).clone())
                    .collect();
                let last = factors[pos].derived(0);
                accumulate(&mut terms, PermMonomial::from_parts(left, last), c.clone());
            }
        }
        Ok(DiffPermPoly {
            arity: self.arity,
            terms,
        })
    }

    fn require_single(&self, op: &'static str) -> Result<()> {
        if self.arity != 1 {
            return Err(Error::NeedsSingleDerivation {
                op,
                arity: self.arity,
            });
        }
        Ok(())
    }

    /// One of the six derived products of `a` and `b`.
    pub fn derived_product(tag: ProductTag, a: &Self, b: &Self) -> Result<Self> {
        a.require_single(tag.name())?;
        b.require_single(tag.name())?;
        let da = a.derive(1)?;
        let db = b.derive(1)?;
        match tag {
            ProductTag::Prec => a.mul(&db),
            ProductTag::Succ => da.mul(b),
            ProductTag::Loz => a.mul(&db)?.try_add(&b.mul(&da)?),
            ProductTag::Bullet => da.mul(b)?.try_add(&a.mul(&db)?),
            ProductTag::Diamond => a.mul(&db)?.try_sub(&b.mul(&da)?),
            ProductTag::Circ => da.mul(b)?.try_sub(&a.mul(&db)?),
        }
    }

    /// Applies the differential endomorphism sending `x_v` to `images[v]`.
    ///
    /// Variables without an image are left fixed. A factor `x_v^{(o)}` maps
    /// to the corresponding derivative of the image.
    pub fn substitute(&self, images: &BTreeMap<u32, DiffPermPoly<C>>) -> Result<Self> {
        let mut cache: HashMap<GeneratorSymbol, DiffPermPoly<C>> = HashMap::new();
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let mut acc: Option<DiffPermPoly<C>> = None;
            for s in m.factors() {
                let image = match cache.get(s) {
                    Some(p) => p.clone(),
                    None => {
                        let base = match images.get(&s.var) {
                            Some(p) => p.derive_multi(&s.dord)?,
                            None => DiffPermPoly::symbol(s.clone()),
                        };
                        cache.insert(s.clone(), base.clone());
                        base
                    }
                };
                acc = Some(match acc {
                    None => image,
                    Some(prev) => prev.mul(&image)?,
                });
            }
            if let Some(p) = acc {
                out.add_scaled(&p, c)?;
            }
        }
        Ok(out)
    }

    /// All variable indices occurring in the polynomial.
    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.variables().collect::<Vec<_>>())
            .collect()
    }

    pub fn max_var(&self) -> u32 {
        self.variables().into_iter().max().unwrap_or(0)
    }

    /// Whether every monomial contains each variable of `vars` exactly once
    /// and no other variable.
    pub fn is_multilinear_in(&self, vars: &BTreeSet<u32>) -> bool {
        self.terms
            .keys()
            .all(|m| m.degree() == vars.len() && vars.iter().all(|&v| m.occurrences(v) == 1))
    }

    /// Multilinear in the set of its own variables.
    pub fn is_multilinear(&self) -> bool {
        self.is_multilinear_in(&self.variables())
    }

    /// Highest derivative order (summed over derivations) of `var`.
    pub fn max_order_of(&self, var: u32) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| {
                m.factors()
                    .filter(|s| s.var == var)
                    .map(GeneratorSymbol::total_order)
                    .collect::<Vec<_>>()
            })
            .max()
    }

    /// The common weight of all monomials, if the polynomial is weight-homogeneous.
    pub fn homogeneous_weight(&self) -> Result<Option<i64>> {
        let mut weight = None;
        for m in self.terms.keys() {
            let w = m.weight()?;
            match weight {
                None => weight = Some(w),
                Some(prev) if prev != w => return Ok(None),
                _ => {}
            }
        }
        Ok(weight)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> DiffPermPoly<D> {
        DiffPermPoly::from_terms(
            self.arity,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Right multiplication by the generator `x_var`.
    pub fn times_generator(&self, var: u32) -> Result<Self> {
        self.mul(&Self::generator(var, self.arity))
    }
}

impl<C: Coeff> fmt::Display for DiffPermPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ => (false, text),
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if magnitude != "1" {
                if magnitude.contains(' ') {
                    write!(f, "({magnitude}) ")?;
                } else {
                    write!(f, "{magnitude} ")?;
                }
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl<C: Coeff> Serialize for DiffPermPoly<C> {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Right-annihilator membership in the free algebra.
///
/// Multiplying by a generator that does not occur in `p` sends each monomial
/// to its sorted factor multiset followed by the fresh generator, so the
/// product vanishes exactly when `p` is a combination of differences of
/// monomials with equal factor multisets.
pub fn annihilator_test<C: Coeff>(p: &DiffPermPoly<C>) -> bool {
    if p.is_zero() {
        return true;
    }
    let fresh = p.max_var() + 1;
    p.times_generator(fresh)
        .map(|q| q.is_zero())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    type P = DiffPermPoly<Rational>;

    fn sym(v: u32, o: u32) -> GeneratorSymbol {
        GeneratorSymbol::new(v, o)
    }

    fn x(v: u32) -> P {
        P::generator(v, 1)
    }

    fn word(factors: &[(u32, u32)]) -> P {
        let raw: Vec<_> = factors.iter().map(|&(v, o)| sym(v, o)).collect();
        P::from_factors(&raw, rat(1)).unwrap()
    }

    #[test]
    fn normalize_sorts_all_but_last() {
        let m = PermMonomial::normalize(&[sym(2, 0), sym(1, 0), sym(3, 0)]).unwrap();
        assert_eq!(m.left(), &[sym(1, 0), sym(2, 0)]);
        assert_eq!(m.last(), &sym(3, 0));

        let m = PermMonomial::normalize(&[sym(1, 0)]).unwrap();
        assert!(m.left().is_empty());

        let m = PermMonomial::normalize(&[sym(1, 2), sym(1, 0), sym(2, 0)]).unwrap();
        assert_eq!(m.left(), &[sym(1, 0), sym(1, 2)]);
        assert_eq!(m.last(), &sym(2, 0));

        let again: Vec<_> = m.factors().cloned().collect();
        assert_eq!(PermMonomial::normalize(&again).unwrap(), m);

        assert_eq!(PermMonomial::normalize(&[]), Err(Error::EmptyMonomial));
    }

    #[test]
    fn products() {
        assert_eq!(x(2).mul(&x(1)).unwrap(), word(&[(2, 0), (1, 0)]));
        let x1x2 = x(1).mul(&x(2)).unwrap();
        assert_eq!(x(3).mul(&x1x2).unwrap(), word(&[(1, 0), (3, 0), (2, 0)]));
        let comm = x1x2.try_sub(&x(2).mul(&x(1)).unwrap()).unwrap();
        assert!(!comm.is_zero());
        assert!(comm.mul(&x(3)).unwrap().is_zero());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = P::generator(1, 1);
        let b = P::generator(2, 2);
        assert!(matches!(a.mul(&b), Err(Error::ArityMismatch { .. })));
        assert!(P::zero(1).mul(&b).unwrap().is_zero());
    }

    #[test]
    fn derivation() {
        let x1x2 = x(1).mul(&x(2)).unwrap();
        let d = x1x2.derive(1).unwrap();
        let expected = word(&[(1, 1), (2, 0)])
            .try_add(&word(&[(1, 0), (2, 1)]))
            .unwrap();
        assert_eq!(d, expected);
        assert_eq!(x(1).derive(1).unwrap(), word(&[(1, 1)]));

        // x1'' x2 + 2 x1' x2' + x1 x2'', expanded by hand.
        let dd = d.derive(1).unwrap();
        let mut expected = word(&[(1, 2), (2, 0)]);
        expected
            .add_scaled(&word(&[(1, 1), (2, 1)]), &rat(2))
            .unwrap();
        expected
            .add_scaled(&word(&[(1, 0), (2, 2)]), &rat(1))
            .unwrap();
        assert!(dd.try_sub(&expected).unwrap().is_zero());

        assert!(matches!(x(1).derive(2), Err(Error::DerivationIndex { .. })));
        assert!(matches!(x(1).derive(0), Err(Error::DerivationIndex { .. })));
    }

    #[test]
    fn grading() {
        let m = |f: &[(u32, u32)]| word(f).leading().unwrap().0.clone();
        assert_eq!(m(&[(1, 0)]).grade().unwrap(), (1, -1));
        assert_eq!(m(&[(1, 2), (2, 0)]).grade().unwrap(), (2, 0));
        assert_eq!(m(&[(1, 0), (2, 0), (3, 1)]).grade().unwrap(), (3, -2));
        let multi = PermMonomial::single(GeneratorSymbol::with_orders(1, &[0, 0]));
        assert!(multi.weight().is_err());
        assert_eq!(multi.degree(), 1);
    }

    #[test]
    fn star_examples() {
        assert_eq!(x(1).star().unwrap(), word(&[(1, 1)]));
        let x1x2 = x(1).mul(&x(2)).unwrap();
        let expected = word(&[(1, 0), (2, 1)])
            .try_add(&word(&[(2, 0), (1, 1)]))
            .unwrap();
        assert_eq!(x1x2.star().unwrap(), expected);

        // Recursive definition on the factorization (x1 x2) x3.
        let x3 = x(3);
        let recursive = x1x2
            .mul(&x3.star().unwrap())
            .unwrap()
            .try_add(&x3.mul(&x1x2.star().unwrap()).unwrap())
            .unwrap();
        let x1x2x3 = x1x2.mul(&x3).unwrap();
        assert_eq!(x1x2x3.star().unwrap(), recursive);
        let closed = word(&[(1, 0), (2, 0), (3, 1)])
            .try_add(&word(&[(1, 0), (3, 0), (2, 1)]))
            .unwrap()
            .try_add(&word(&[(2, 0), (3, 0), (1, 1)]))
            .unwrap();
        assert_eq!(x1x2x3.star().unwrap(), closed);

        assert!(P::generator(1, 2).star().is_err());
    }

    #[test]
    fn derived_products() {
        let loz = P::derived_product(ProductTag::Loz, &x(1), &x(2)).unwrap();
        assert_eq!(
            loz,
            word(&[(1, 0), (2, 1)])
                .try_add(&word(&[(2, 0), (1, 1)]))
                .unwrap()
        );
        let bullet = P::derived_product(ProductTag::Bullet, &x(1), &x(2)).unwrap();
        assert_eq!(bullet, x(1).mul(&x(2)).unwrap().derive(1).unwrap());
        let diamond = P::derived_product(ProductTag::Diamond, &x(1), &x(1)).unwrap();
        assert!(diamond.is_zero());
        assert_eq!("bullet".parse::<ProductTag>().unwrap(), ProductTag::Bullet);
        assert!("nope".parse::<ProductTag>().is_err());
    }

    #[test]
    fn annihilator() {
        let comm = x(1)
            .mul(&x(2))
            .unwrap()
            .try_sub(&x(2).mul(&x(1)).unwrap())
            .unwrap();
        assert!(annihilator_test(&comm));
        assert!(!annihilator_test(&x(1)));
        assert!(!annihilator_test(&word(&[(1, 1), (2, 0)])));
        assert!(annihilator_test(&P::zero(1)));
    }

    #[test]
    fn substitution_is_a_differential_endomorphism() {
        // x1' x2 with x1 -> x3 x4 gives (x3 x4)' x2.
        let p = word(&[(1, 1), (2, 0)]);
        let images = BTreeMap::from([(1, x(3).mul(&x(4)).unwrap())]);
        let got = p.substitute(&images).unwrap();
        let expected = x(3)
            .mul(&x(4))
            .unwrap()
            .derive(1)
            .unwrap()
            .mul(&x(2))
            .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn rendering() {
        assert_eq!(word(&[(1, 0), (2, 2), (3, 0)]).to_string(), "x1 x2'' x3");
        assert_eq!(word(&[(1, 5)]).to_string(), "x1^(5)");
        let p = word(&[(1, 0), (2, 1)])
            .scale(&rat(-2))
            .try_add(&x(3).scale(&crate::scalar::ratio(1, 2)))
            .unwrap();
        assert_eq!(p.to_string(), "1/2 x3 - 2 x1 x2'");
        assert_eq!(
            GeneratorSymbol::with_orders(1, &[1, 0, 2]).to_string(),
            "x1^(1,0,2)"
        );
    }
}
