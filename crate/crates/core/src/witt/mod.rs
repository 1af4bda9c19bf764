//! The perm algebra `P_n = k[x_1..x_n] ⊗ k{x_1..x_n}` and the Lie and
//! Leibniz brackets on `W_perm(n) = ⊕ P_n D_i`.
//!
//! A basis tensor `x^e × x_α` is stored as `(e, α)`; indices are 1-based.

mod tables;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{rat, serialize_rational, Rational};

pub use tables::{
    rule_transcription, structure_table, verify_tables, AffineCoeff, BlockId, EntryCheck, Kind,
    RuleCheck, RuleTerm, SkewCheck, StructureTable, TableEntry, TableRule, TableVerification,
    TermRecord, TranscribedRule, VERIFY_BOUND,
};

/// Exponent vector.
pub type Exponents = Vec<u32>;

fn accumulate<K: Ord>(terms: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    Ok(())
}

/// Element `Σ c·(x^e × x_α)` of `P_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermTensorElem {
    n: usize,
    terms: BTreeMap<(Exponents, usize), Rational>,
}

impl PermTensorElem {
    pub fn zero(n: usize) -> Self {
        PermTensorElem {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `x^e × x_alpha`.
    pub fn basis(e: &[u32], alpha: usize) -> Result<Self> {
        check_index(alpha, e.len())?;
        let mut out = PermTensorElem::zero(e.len());
        out.terms.insert((e.to_vec(), alpha), rat(1));
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, usize, &Rational)> {
        self.terms.iter().map(|((e, a), c)| (e, *a, c))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) -> Result<()> {
        self.check(other)?;
        for (k, v) in &other.terms {
            accumulate(&mut self.terms, k.clone(), v * c);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = PermTensorElem::zero(self.n);
        for (k, v) in &self.terms {
            accumulate(&mut out.terms, k.clone(), v * c);
        }
        out
    }

    /// `(x^a × x_r)·(x^b × x_s) = (x^{a+b} x_r) × x_s`.
    pub fn perm_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = PermTensorElem::zero(self.n);
        for ((a, r), ca) in &self.terms {
            for ((b, s), cb) in &other.terms {
                let mut e: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
                e[r - 1] += 1;
                accumulate(&mut out.terms, (e, *s), ca * cb);
            }
        }
        Ok(out)
    }

    /// `D_i(u × x_j) = (x_i ∂_i u) × x_j + δ_{ij} u × x_i`; on a basis
    /// tensor this is multiplication by `e_i + δ_{ij}`.
    pub fn euler_derivation(&self, i: usize) -> Result<Self> {
        check_index(i, self.n)?;
        let mut out = PermTensorElem::zero(self.n);
        for ((e, j), c) in &self.terms {
            let factor = e[i - 1] as i64 + i64::from(*j == i);
            accumulate(&mut out.terms, (e.clone(), *j), c * rat(factor));
        }
        Ok(out)
    }
}

/// `E^{α,i}_e = (x^e × x_α) D_i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct WittBasisElem {
    pub e: Exponents,
    pub alpha: usize,
    pub i: usize,
}

impl WittBasisElem {
    pub fn new(e: &[u32], alpha: usize, i: usize) -> Result<Self> {
        check_index(alpha, e.len())?;
        check_index(i, e.len())?;
        Ok(WittBasisElem {
            e: e.to_vec(),
            alpha,
            i,
        })
    }
}

/// Element of `W_perm(n)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittElement {
    n: usize,
    terms: BTreeMap<WittBasisElem, Rational>,
}

#[derive(Serialize)]
struct TermView<'a> {
    #[serde(serialize_with = "serialize_rational")]
    coeff: &'a Rational,
    basis: &'a WittBasisElem,
}

impl Serialize for WittElement {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(
            self.terms
                .iter()
                .map(|(basis, coeff)| TermView { coeff, basis }),
        )
    }
}

impl WittElement {
    pub fn zero(n: usize) -> Self {
        WittElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(b: WittBasisElem) -> Self {
        let n = b.e.len();
        WittElement {
            n,
            terms: BTreeMap::from([(b, rat(1))]),
        }
    }

    /// `a D_i`.
    pub fn field(a: &PermTensorElem, i: usize) -> Result<Self> {
        check_index(i, a.n)?;
        let mut out = WittElement::zero(a.n);
        for ((e, alpha), c) in &a.terms {
            accumulate(
                &mut out.terms,
                WittBasisElem {
                    e: e.clone(),
                    alpha: *alpha,
                    i,
                },
                c.clone(),
            );
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WittBasisElem, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &WittBasisElem) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `D_i` as an element of `P_n`.
    pub fn component(&self, i: usize) -> PermTensorElem {
        let mut out = PermTensorElem::zero(self.n);
        for (b, c) in self.terms.iter().filter(|(b, _)| b.i == i) {
            out.terms.insert((b.e.clone(), b.alpha), c.clone());
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) -> Result<()> {
        self.check(other)?;
        for (k, v) in &other.terms {
            accumulate(&mut self.terms, k.clone(), v * c);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &rat(1))?;
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &rat(-1))?;
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = WittElement::zero(self.n);
        for (k, v) in &self.terms {
            accumulate(&mut out.terms, k.clone(), v * c);
        }
        out
    }

    fn components(&self) -> BTreeMap<usize, PermTensorElem> {
        (1..=self.n)
            .map(|i| (i, self.component(i)))
            .filter(|(_, a)| !a.is_zero())
            .collect()
    }

    fn bilinear(
        &self,
        other: &Self,
        rule: impl Fn(&PermTensorElem, usize, &PermTensorElem, usize, &mut WittElement) -> Result<()>,
    ) -> Result<Self> {
        self.check(other)?;
        let (lhs, rhs) = (self.components(), other.components());
        let mut out = WittElement::zero(self.n);
        for (i, a) in &lhs {
            for (j, b) in &rhs {
                rule(a, *i, b, *j, &mut out)?;
            }
        }
        Ok(out)
    }

    /// `(aD_i) ≺ (bD_j) = (a·D_i(b)) D_j`.
    pub fn prec(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, |a, i, b, j, out| {
            out.add_scaled(
                &WittElement::field(&a.perm_product(&b.euler_derivation(i)?)?, j)?,
                &rat(1),
            )
        })
    }

    /// `[aD_i, bD_j] = a·D_i(b) D_j − b·D_j(a) D_i`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.prec(other)?.try_sub(&other.prec(self)?)
    }

    /// `[aD_i, bD_j]_∘ = D_j(a)·b D_i − a·D_i(b) D_j`.
    pub fn leibniz_bracket(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, |a, i, b, j, out| {
            out.add_scaled(
                &WittElement::field(&a.euler_derivation(j)?.perm_product(b)?, i)?,
                &rat(1),
            )?;
            out.add_scaled(
                &WittElement::field(&a.perm_product(&b.euler_derivation(i)?)?, j)?,
                &rat(-1),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m: u32, n: u32, alpha: usize, i: usize) -> WittElement {
        WittElement::basis(WittBasisElem::new(&[m, n], alpha, i).unwrap())
    }

    #[test]
    fn product_and_derivations() {
        let x = PermTensorElem::basis(&[0, 0], 1).unwrap();
        let y = PermTensorElem::basis(&[0, 0], 2).unwrap();
        assert_eq!(
            x.perm_product(&y).unwrap(),
            PermTensorElem::basis(&[1, 0], 2).unwrap()
        );

        let ex = PermTensorElem::basis(&[2, 3], 1).unwrap();
        let ey = PermTensorElem::basis(&[2, 3], 2).unwrap();
        assert_eq!(ex.euler_derivation(1).unwrap(), ex.scale(&rat(3)));
        assert_eq!(ey.euler_derivation(1).unwrap(), ey.scale(&rat(2)));
        assert!(PermTensorElem::basis(&[0, 0], 1)
            .unwrap()
            .euler_derivation(2)
            .unwrap()
            .is_zero());
        assert!(ex.euler_derivation(3).is_err());
        assert!(x
            .perm_product(&PermTensorElem::basis(&[0], 1).unwrap())
            .is_err());
    }

    #[test]
    fn bracket_examples() {
        let w1 = |m| WittElement::basis(WittBasisElem::new(&[m], 1, 1).unwrap());
        assert_eq!(w1(1).lie_bracket(&w1(3)).unwrap(), w1(5).scale(&rat(2)));
        assert_eq!(
            e(0, 0, 1, 1).lie_bracket(&e(1, 0, 1, 1)).unwrap(),
            e(2, 0, 1, 1)
        );
        let v = e(1, 2, 2, 1).try_add(&e(0, 1, 1, 2)).unwrap();
        assert!(v.lie_bracket(&v).unwrap().is_zero());

        assert_eq!(
            e(1, 0, 1, 1).leibniz_bracket(&e(0, 0, 1, 1)).unwrap(),
            e(2, 0, 1, 1)
        );
        assert_eq!(
            e(0, 0, 1, 1).leibniz_bracket(&e(0, 0, 1, 2)).unwrap(),
            e(1, 0, 1, 2).scale(&rat(-1))
        );
    }

    #[test]
    fn leibniz_square_need_not_vanish() {
        let v = e(0, 0, 1, 1).try_add(&e(0, 0, 2, 1)).unwrap();
        let expected = e(1, 0, 2, 1).try_sub(&e(0, 1, 1, 1)).unwrap();
        assert_eq!(v.leibniz_bracket(&v).unwrap(), expected);
        let b = e(2, 1, 2, 2);
        assert!(b.leibniz_bracket(&b).unwrap().is_zero());
    }
}
