use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::algebra::{DiffPermPoly, GeneratorSymbol, ProductTag};
use crate::scalar::{rat, Rational};

/// Scalar literal appearing in a term tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ScalarLit {
    Rational(Rational),
    /// The formal parameter `δ`.
    Delta,
}

/// Term tree over variables `x_1, x_2, ...`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Var(u32),
    Mul(Box<Expr>, Box<Expr>),
    /// `j`-th derivation (1-based).
    Der(usize, Box<Expr>),
    Op(ProductTag, Box<Expr>, Box<Expr>),
    Star(Box<Expr>),
    Scale(ScalarLit, Box<Expr>),
    Sum(Vec<Expr>),
    /// Associator `(a*b)*c - a*(b*c)` of the selected product.
    Assoc(Box<Expr>, Box<Expr>, Box<Expr>),
    /// The selected product applied to two arguments.
    Bracket(Box<Expr>, Box<Expr>),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn var(i: u32) -> Expr {
        Expr::Var(i)
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn der(e: Expr) -> Expr {
        Expr::Der(1, Box::new(e))
    }

    pub fn der_j(j: usize, e: Expr) -> Expr {
        Expr::Der(j, Box::new(e))
    }

    pub fn op(tag: ProductTag, a: Expr, b: Expr) -> Expr {
        Expr::Op(tag, Box::new(a), Box::new(b))
    }

    pub fn star(e: Expr) -> Expr {
        Expr::Star(Box::new(e))
    }

    pub fn scale(q: Rational, e: Expr) -> Expr {
        Expr::Scale(ScalarLit::Rational(q), Box::new(e))
    }

    pub fn scale_int(n: i64, e: Expr) -> Expr {
        Expr::scale(rat(n), e)
    }

    pub fn delta_times(e: Expr) -> Expr {
        Expr::Scale(ScalarLit::Delta, Box::new(e))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::scale_int(-1, e)
    }

    pub fn sum(items: Vec<Expr>) -> Expr {
        Expr::Sum(items)
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sum(vec![a, Expr::neg(b)])
    }

    pub fn assoc(a: Expr, b: Expr, c: Expr) -> Expr {
        Expr::Assoc(Box::new(a), Box::new(b), Box::new(c))
    }

    pub fn bracket(a: Expr, b: Expr) -> Expr {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    /// Variable indices occurring in the tree.
    pub fn variables(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Expr::Var(i) => {
                out.insert(*i);
            }
            Expr::Mul(a, b) | Expr::Op(_, a, b) | Expr::Bracket(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Der(_, a) | Expr::Star(a) | Expr::Scale(_, a) => a.collect_vars(out),
            Expr::Sum(items) => items.iter().for_each(|e| e.collect_vars(out)),
            Expr::Assoc(a, b, c) => {
                a.collect_vars(out);
                b.collect_vars(out);
                c.collect_vars(out);
            }
        }
    }

    /// Depth of the tree; a variable has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Mul(a, b) | Expr::Op(_, a, b) | Expr::Bracket(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Expr::Der(_, a) | Expr::Star(a) | Expr::Scale(_, a) => 1 + a.depth(),
            Expr::Sum(items) => 1 + items.iter().map(Expr::depth).max().unwrap_or(0),
            Expr::Assoc(a, b, c) => 1 + a.depth().max(b.depth()).max(c.depth()),
        }
    }

    /// Renames variables by `f`.
    pub fn map_vars(&self, f: &impl Fn(u32) -> u32) -> Expr {
        let b = |e: &Expr| Box::new(e.map_vars(f));
        match self {
            Expr::Var(i) => Expr::Var(f(*i)),
            Expr::Mul(x, y) => Expr::Mul(b(x), b(y)),
            Expr::Der(j, x) => Expr::Der(*j, b(x)),
            Expr::Op(t, x, y) => Expr::Op(*t, b(x), b(y)),
            Expr::Star(x) => Expr::Star(b(x)),
            Expr::Scale(s, x) => Expr::Scale(s.clone(), b(x)),
            Expr::Sum(items) => Expr::Sum(items.iter().map(|e| e.map_vars(f)).collect()),
            Expr::Assoc(x, y, z) => Expr::Assoc(b(x), b(y), b(z)),
            Expr::Bracket(x, y) => Expr::Bracket(b(x), b(y)),
        }
    }

    /// Replaces each `Var(i)` bound in `images` by its image tree.
    pub fn subst_vars(&self, images: &BTreeMap<u32, Expr>) -> Expr {
        let b = |e: &Expr| Box::new(e.subst_vars(images));
        match self {
            Expr::Var(i) => images.get(i).cloned().unwrap_or(Expr::Var(*i)),
            Expr::Mul(x, y) => Expr::Mul(b(x), b(y)),
            Expr::Der(j, x) => Expr::Der(*j, b(x)),
            Expr::Op(t, x, y) => Expr::Op(*t, b(x), b(y)),
            Expr::Star(x) => Expr::Star(b(x)),
            Expr::Scale(s, x) => Expr::Scale(s.clone(), b(x)),
            Expr::Sum(items) => Expr::Sum(items.iter().map(|e| e.subst_vars(images)).collect()),
            Expr::Assoc(x, y, z) => Expr::Assoc(b(x), b(y), b(z)),
            Expr::Bracket(x, y) => Expr::Bracket(b(x), b(y)),
        }
    }

    /// A tree evaluating to `p`: a sum of scaled left-normed products of
    /// derived variables, factors in normal-form order.
    pub fn from_poly(p: &DiffPermPoly) -> Expr {
        let symbol = |s: &GeneratorSymbol| {
            let mut e = Expr::Var(s.var);
            for (j, &k) in s.dord.iter().enumerate() {
                for _ in 0..k {
                    e = Expr::der_j(j + 1, e);
                }
            }
            e
        };
        Expr::Sum(
            p.terms()
                .map(|(m, c)| {
                    let mut factors = m.factors();
                    let first = symbol(factors.next().expect("nonempty monomial"));
                    let word = factors.fold(first, |acc, s| Expr::mul(acc, symbol(s)));
                    if c.is_one() {
                        word
                    } else {
                        Expr::scale(c.clone(), word)
                    }
                })
                .collect(),
        )
    }
}
