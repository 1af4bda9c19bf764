//! Subalgebras generated under the symmetrized products, and exact spans.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{DiffPermPoly, GeneratorSymbol, PermMonomial, ProductTag};
use crate::error::{Error, Result};
use crate::scalar::{binomial, rat, Rational};

type Row = BTreeMap<PermMonomial, Rational>;

fn to_row(p: &DiffPermPoly) -> Row {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Row-reduced basis over ℚ; each row is monic at its pivot, which is its
/// smallest monomial.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<PermMonomial, Row>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Row) -> Row {
        let mut cursor: Option<PermMonomial> = None;
        loop {
            let next = match &cursor {
                None => v.iter().find(|(m, _)| self.rows.contains_key(*m)),
                Some(c) => v
                    .range((
                        std::ops::Bound::Excluded(c.clone()),
                        std::ops::Bound::Unbounded,
                    ))
                    .find(|(m, _)| self.rows.contains_key(*m)),
            };
            let Some((m, c)) = next.map(|(m, c)| (m.clone(), c.clone())) else {
                return v;
            };
            for (rm, rc) in &self.rows[&m] {
                let entry = v.entry(rm.clone()).or_insert_with(Rational::zero);
                *entry -= &c * rc;
                if entry.is_zero() {
                    v.remove(rm);
                }
            }
            cursor = Some(m);
        }
    }

    /// The remainder of `p` after reduction; zero iff `p` lies in the span.
    pub fn remainder(&self, p: &DiffPermPoly) -> DiffPermPoly {
        DiffPermPoly::from_terms(p.arity(), self.reduce(to_row(p)))
    }

    pub fn contains(&self, p: &DiffPermPoly) -> bool {
        self.reduce(to_row(p)).is_empty()
    }

    /// Adds `p`; returns whether the rank grew.
    pub fn insert(&mut self, p: &DiffPermPoly) -> bool {
        let mut r = self.reduce(to_row(p));
        let Some((pivot, lead)) = r.iter().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            r.values_mut().for_each(|c| *c *= &inv);
        }
        self.rows.insert(pivot, r);
        true
    }
}

/// A spanning list together with its echelon form.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    pub elements: Vec<DiffPermPoly>,
    pub echelon: Echelon,
}

impl SpanBasis {
    pub fn new(elements: Vec<DiffPermPoly>) -> Result<Self> {
        check_common_arity(&elements)?;
        let mut echelon = Echelon::new();
        for e in &elements {
            echelon.insert(e);
        }
        Ok(SpanBasis { elements, echelon })
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, p: &DiffPermPoly) -> bool {
        self.echelon.contains(p)
    }
}

fn check_common_arity(elems: &[DiffPermPoly]) -> Result<()> {
    let mut arity = None;
    for e in elems.iter().filter(|e| !e.is_zero()) {
        match arity {
            None => arity = Some(e.arity()),
            Some(a) if a != e.arity() => {
                return Err(Error::ArityMismatch {
                    left: a,
                    right: e.arity(),
                })
            }
            _ => {}
        }
    }
    Ok(())
}

/// Dimension of the linear span.
pub fn rank(elems: &[DiffPermPoly]) -> Result<usize> {
    Ok(SpanBasis::new(elems.to_vec())?.rank())
}

/// Multilinear degree-`n` elements in `x_1..x_n` generated from the
/// generators by `tag` (`loz` or `bullet`).
///
/// For every subset `A` of the variables a basis of the component supported
/// on `A` is built from products of components on complementary pairs of
/// proper subsets, level by level in `|A|`.
pub fn generate_closure(tag: ProductTag, n: usize) -> Result<Vec<DiffPermPoly>> {
    if !matches!(tag, ProductTag::Loz | ProductTag::Bullet) {
        return Err(Error::Unsupported(format!("closure under {tag}")));
    }
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let full = (1usize << n) - 1;
    let mut basis: Vec<Vec<DiffPermPoly>> = vec![Vec::new(); full + 1];
    for i in 0..n {
        basis[1 << i] = vec![DiffPermPoly::generator(i as u32 + 1, 1)];
    }
    let commutative = tag == ProductTag::Loz;
    for size in 2..=n {
        let level: Vec<usize> = (1..=full)
            .filter(|a| a.count_ones() as usize == size)
            .collect();
        let built: Vec<(usize, Vec<DiffPermPoly>)> = level
            .into_par_iter()
            .map(|a| {
                let mut echelon = Echelon::new();
                let mut elems = Vec::new();
                // Proper nonempty subsets s of a, paired with their complements.
                let mut s = (a - 1) & a;
                while s > 0 {
                    let t = a & !s;
                    if !(commutative && s > t) {
                        for p in &basis[s] {
                            for q in &basis[t] {
                                let prod = DiffPermPoly::derived_product(tag, p, q)?;
                                if echelon.insert(&prod) {
                                    elems.push(prod);
                                }
                            }
                        }
                    }
                    s = (s - 1) & a;
                }
                Ok((a, elems))
            })
            .collect::<Result<_>>()?;
        for (a, elems) in built {
            basis[a] = elems;
        }
    }
    Ok(std::mem::take(&mut basis[full]))
}

/// Multilinear basis monomials in `x_1..x_n` whose derivative orders sum
/// to `order_sum`, in increasing monomial order.
pub fn multilinear_monomials(n: usize, order_sum: u32) -> Vec<PermMonomial> {
    fn compositions(parts: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == parts {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=total {
            prefix.push(k);
            compositions(parts, total - k, prefix, out);
            prefix.pop();
        }
    }
    let mut orders = Vec::new();
    if n > 0 {
        compositions(n, order_sum, &mut Vec::new(), &mut orders);
    }
    let mut out: Vec<PermMonomial> = orders
        .iter()
        .flat_map(|o| {
            (0..n).map(move |last| {
                let mut raw: Vec<GeneratorSymbol> = (0..n)
                    .filter(|&v| v != last)
                    .map(|v| GeneratorSymbol::new(v as u32 + 1, o[v]))
                    .collect();
                raw.push(GeneratorSymbol::new(last as u32 + 1, o[last]));
                PermMonomial::normalize(&raw).expect("nonempty")
            })
        })
        .collect();
    out.sort();
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Star images, generated under `loz`.
    Star,
    /// Derivatives, generated under `bullet`.
    Prime,
}

impl Variant {
    pub fn product(self) -> ProductTag {
        match self {
            Variant::Star => ProductTag::Loz,
            Variant::Prime => ProductTag::Bullet,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Star => "star",
            Variant::Prime => "prime",
        }
    }

    /// Expected multilinear dimension at degree `n ≥ 2`.
    pub fn formula(self, n: usize) -> usize {
        let c = binomial(2 * n as u64 - 3, n as u64 - 1) as usize;
        match self {
            Variant::Star => c,
            Variant::Prime => n * c,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Variant::Star),
            "prime" => Ok(Variant::Prime),
            _ => Err(Error::Unsupported(format!("variant `{s}`"))),
        }
    }
}

/// Images of the weight `−2` multilinear monomials of degree `n` under
/// star (deduplicated) or the derivation.
pub fn generate_s(n: usize, variant: Variant) -> Result<Vec<DiffPermPoly>> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    let mut out: Vec<DiffPermPoly> = Vec::new();
    for u in multilinear_monomials(n, n as u32 - 2) {
        let p = DiffPermPoly::monomial(u, rat(1), 1);
        let image = match variant {
            Variant::Star => p.star()?,
            Variant::Prime => p.derive(1)?,
        };
        if variant == Variant::Prime || !out.contains(&image) {
            out.push(image);
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct DimReport {
    pub n: usize,
    pub variant: Variant,
    pub formula: usize,
    pub rank_closure: usize,
    #[serde(rename = "rank_S")]
    pub rank_s: usize,
    #[serde(rename = "size_S")]
    pub size_s: usize,
    /// Every element of the generating set lies in the closure.
    pub s_in_closure: bool,
    /// Every closure element lies in the span of the generating set.
    pub closure_in_s: bool,
    pub ok: bool,
    /// An element violating a containment, rendered as text.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

pub fn verify_dimension(n: usize, variant: Variant) -> Result<DimReport> {
    let s = generate_s(n, variant)?;
    let closure = generate_closure(variant.product(), n)?;
    let (closure_span, s_span) = rayon::join(
        || SpanBasis::new(closure.clone()),
        || SpanBasis::new(s.clone()),
    );
    let (closure_span, s_span) = (closure_span?, s_span?);
    let mut witness = None;
    let s_in_closure = match s.iter().find(|e| !closure_span.contains(e)) {
        Some(e) => {
            witness = Some(e.to_string());
            false
        }
        None => true,
    };
    let closure_in_s = match closure.iter().find(|e| !s_span.contains(e)) {
        Some(e) => {
            witness.get_or_insert_with(|| e.to_string());
            false
        }
        None => true,
    };
    let formula = variant.formula(n);
    let ok = closure_span.rank() == formula
        && s_span.rank() == formula
        && s.len() == formula
        && s_in_closure
        && closure_in_s;
    Ok(DimReport {
        n,
        variant,
        formula,
        rank_closure: closure_span.rank(),
        rank_s: s_span.rank(),
        size_s: s.len(),
        s_in_closure,
        closure_in_s,
        ok,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: u32) -> DiffPermPoly {
        DiffPermPoly::generator(i, 1)
    }

    #[test]
    fn small_ranks() {
        let p = DiffPermPoly::derived_product(ProductTag::Loz, &g(1), &g(2)).unwrap();
        let q = DiffPermPoly::derived_product(ProductTag::Diamond, &g(1), &g(2)).unwrap();
        assert_eq!(rank(&[p.clone(), q]).unwrap(), 2);
        assert_eq!(rank(&[p.clone(), p.scale(&rat(2))]).unwrap(), 1);
        assert_eq!(rank(&[]).unwrap(), 0);
        assert!(rank(&[g(1), DiffPermPoly::generator(1, 2)]).is_err());
    }

    #[test]
    fn echelon_remainder() {
        let mut e = Echelon::new();
        let p = g(1).mul(&g(2)).unwrap();
        assert!(e.insert(&p));
        assert!(!e.insert(&p.scale(&rat(-3))));
        let q = g(2).mul(&g(1)).unwrap();
        assert_eq!(e.remainder(&p.try_add(&q).unwrap()), q);
    }

    #[test]
    fn closure_small() {
        assert_eq!(generate_closure(ProductTag::Loz, 1).unwrap(), vec![g(1)]);
        let c = generate_closure(ProductTag::Loz, 2).unwrap();
        assert_eq!(
            c,
            vec![DiffPermPoly::derived_product(ProductTag::Loz, &g(1), &g(2)).unwrap()]
        );
        assert_eq!(
            rank(&generate_closure(ProductTag::Bullet, 2).unwrap()).unwrap(),
            2
        );
        assert!(generate_closure(ProductTag::Prec, 2).is_err());
    }

    #[test]
    fn generating_sets() {
        assert_eq!(generate_s(2, Variant::Star).unwrap().len(), 1);
        assert_eq!(generate_s(3, Variant::Star).unwrap().len(), 3);
        assert_eq!(generate_s(3, Variant::Prime).unwrap().len(), 9);
        assert_eq!(rank(&generate_s(4, Variant::Star).unwrap()).unwrap(), 10);
        assert!(generate_s(1, Variant::Star).is_err());
        assert_eq!(multilinear_monomials(4, 2).len(), 4 * 10);
    }

    #[test]
    fn dimensions_small() {
        for (n, v, d) in [
            (2, Variant::Star, 1),
            (3, Variant::Star, 3),
            (2, Variant::Prime, 2),
            (3, Variant::Prime, 9),
        ] {
            let r = verify_dimension(n, v).unwrap();
            assert!(r.ok, "{r:?}");
            assert_eq!(r.formula, d);
        }
    }
}
