use std::collections::BTreeMap;

use crate::algebra::DiffPermPoly;
use crate::error::{Error, Result};
use crate::scalar::{rat, Rational};

/// Formal vector field `Σ a_i D_i` over the free algebra with `arity`
/// commuting derivations `D_1..D_arity`.
#[derive(Clone, PartialEq, Debug)]
pub struct FormalVectorField {
    arity: usize,
    comps: BTreeMap<usize, DiffPermPoly>,
}

impl FormalVectorField {
    pub fn zero(arity: usize) -> Self {
        FormalVectorField {
            arity,
            comps: BTreeMap::new(),
        }
    }

    /// `a D_i`.
    pub fn term(a: DiffPermPoly, i: usize) -> Result<Self> {
        let mut out = FormalVectorField::zero(a.arity());
        out.add_term(&a, i, &rat(1))?;
        Ok(out)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Coefficient of `D_i`.
    pub fn component(&self, i: usize) -> DiffPermPoly {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| DiffPermPoly::zero(self.arity))
    }

    /// Nonzero components in increasing derivation index.
    pub fn components(&self) -> impl Iterator<Item = (usize, &DiffPermPoly)> {
        self.comps.iter().map(|(i, p)| (*i, p))
    }

    fn add_term(&mut self, a: &DiffPermPoly, i: usize, c: &Rational) -> Result<()> {
        if i == 0 || i > self.arity {
            return Err(Error::DerivationIndex {
                index: i,
                arity: self.arity,
            });
        }
        if !a.is_zero() && a.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: a.arity(),
            });
        }
        let slot = self
            .comps
            .entry(i)
            .or_insert_with(|| DiffPermPoly::zero(self.arity));
        slot.add_scaled(a, c)?;
        if slot.is_zero() {
            self.comps.remove(&i);
        }
        Ok(())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) -> Result<()> {
        self.check(other)?;
        for (i, a) in &other.comps {
            self.add_term(a, *i, c)?;
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

    fn bilinear(
        &self,
        other: &Self,
        rule: impl Fn(&DiffPermPoly, usize, &DiffPermPoly, usize, &mut FormalVectorField) -> Result<()>,
    ) -> Result<Self> {
        self.check(other)?;
        let mut out = FormalVectorField::zero(self.arity);
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                rule(a, *i, b, *j, &mut out)?;
            }
        }
        Ok(out)
    }

    /// `[aD_i, bD_j]_∘ = D_j(a)·b D_i − a·D_i(b) D_j`.
    pub fn leibniz_bracket(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, |a, i, b, j, out| {
            out.add_term(&a.derive(j)?.mul(b)?, i, &rat(1))?;
            out.add_term(&a.mul(&b.derive(i)?)?, j, &rat(-1))
        })
    }

    /// `(aD_i) ≺ (bD_j) = (a·D_i(b)) D_j`.
    pub fn prec(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, |a, i, b, j, out| {
            out.add_term(&a.mul(&b.derive(i)?)?, j, &rat(1))
        })
    }

    /// `[aD_i, bD_j] = a·D_i(b) D_j − b·D_j(a) D_i`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.prec(other)?.try_sub(&other.prec(self)?)
    }
}
