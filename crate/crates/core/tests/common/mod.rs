#![allow(dead_code)]

use std::collections::BTreeMap;

use permdiff::identity::{Expr, ScalarLit};
use permdiff::scalar::rat;
use permdiff::{DiffPermPoly, GeneratorSymbol, PermMonomial, ProductTag};
use proptest::prelude::*;

pub fn sym(var: u32, order: u32) -> GeneratorSymbol {
    GeneratorSymbol::new(var, order)
}

/// Left-normed product of a word of generators.
pub fn word_product(word: &[GeneratorSymbol]) -> DiffPermPoly {
    let mut it = word.iter();
    let first = DiffPermPoly::symbol(it.next().expect("nonempty word").clone());
    it.fold(first, |acc, s| {
        acc.mul(&DiffPermPoly::symbol(s.clone())).unwrap()
    })
}

/// Star of the left-normed product of `word`, by `(uv)* = u v* + v u*` with
/// `u` the first `k-1` letters and `v` the last.
pub fn recursive_star_word(word: &[GeneratorSymbol]) -> DiffPermPoly {
    match word {
        [] => unreachable!("empty word"),
        [s] => DiffPermPoly::symbol(s.derived(0)),
        [init @ .., last] => {
            let u = word_product(init);
            let v = DiffPermPoly::symbol(last.clone());
            let v_star = DiffPermPoly::symbol(last.derived(0));
            u.mul(&v_star)
                .unwrap()
                .try_add(&v.mul(&recursive_star_word(init)).unwrap())
                .unwrap()
        }
    }
}

fn mono(m: &PermMonomial) -> DiffPermPoly {
    DiffPermPoly::monomial(m.clone(), rat(1), m.arity())
}

/// Star of a monomial by peeling its first left factor:
/// `m = g·v` gives `m* = g·v* + v·g'`.
pub fn recursive_star(
    m: &PermMonomial,
    memo: &mut BTreeMap<PermMonomial, DiffPermPoly>,
) -> DiffPermPoly {
    if let Some(p) = memo.get(m) {
        return p.clone();
    }
    let out = if m.degree() == 1 {
        DiffPermPoly::symbol(m.last().derived(0))
    } else {
        let g = m.left()[0].clone();
        let v = PermMonomial::normalize(&m.factors().skip(1).cloned().collect::<Vec<_>>()).unwrap();
        let gp = DiffPermPoly::symbol(g.clone());
        gp.mul(&recursive_star(&v, memo))
            .unwrap()
            .try_add(&mono(&v).mul(&DiffPermPoly::symbol(g.derived(0))).unwrap())
            .unwrap()
    };
    memo.insert(m.clone(), out.clone());
    out
}

/// Every pair `(u, v)` of monomials with `u·v = m`.
pub fn factorizations(m: &PermMonomial) -> Vec<(PermMonomial, PermMonomial)> {
    let left = m.left();
    let k = left.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let chosen: Vec<GeneratorSymbol> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| left[i].clone())
            .collect();
        let rest: Vec<GeneratorSymbol> = (0..k)
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| left[i].clone())
            .collect();
        let mut v_raw = rest;
        v_raw.push(m.last().clone());
        let v = PermMonomial::normalize(&v_raw).unwrap();
        for j in 0..chosen.len() {
            let mut u_raw: Vec<GeneratorSymbol> = chosen
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, s)| s.clone())
                .collect();
            u_raw.push(chosen[j].clone());
            let u = PermMonomial::normalize(&u_raw).unwrap();
            assert_eq!(u.times(&v), *m);
            if !out.contains(&(u.clone(), v.clone())) {
                out.push((u, v.clone()));
            }
        }
    }
    out
}

pub fn as_poly(m: &PermMonomial) -> DiffPermPoly {
    mono(m)
}

pub fn symbol_strategy(vars: u32, max_order: u32) -> impl Strategy<Value = GeneratorSymbol> {
    (1..=vars, 0..=max_order).prop_map(|(v, o)| sym(v, o))
}

pub fn word_strategy(max_len: usize) -> impl Strategy<Value = Vec<GeneratorSymbol>> {
    prop::collection::vec(symbol_strategy(4, 2), 1..=max_len)
}

pub fn monomial_strategy(max_deg: usize) -> impl Strategy<Value = PermMonomial> {
    word_strategy(max_deg).prop_map(|w| PermMonomial::normalize(&w).unwrap())
}

pub fn poly_strategy() -> impl Strategy<Value = DiffPermPoly> {
    prop::collection::vec((monomial_strategy(3), -3i64..=3), 0..=3)
        .prop_map(|terms| DiffPermPoly::from_terms(1, terms.into_iter().map(|(m, c)| (m, rat(c)))))
}

pub fn tag_strategy() -> impl Strategy<Value = ProductTag> {
    prop::sample::select(ProductTag::ALL.to_vec())
}

fn scalar_strategy() -> impl Strategy<Value = ScalarLit> {
    prop_oneof![
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| ScalarLit::Rational(permdiff::scalar::ratio(n, d))),
        Just(ScalarLit::Delta),
    ]
}

/// Term trees over `x1..x3`; `with_star` admits `Star` nodes.
pub fn expr_strategy(with_star: bool) -> impl Strategy<Value = Expr> {
    let leaf = (1u32..=3).prop_map(Expr::Var);
    leaf.prop_recursive(4, 24, 3, move |inner| {
        let mut options: Vec<BoxedStrategy<Expr>> = vec![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::mul(a, b))
                .boxed(),
            inner.clone().prop_map(Expr::der).boxed(),
            (tag_strategy(), inner.clone(), inner.clone())
                .prop_map(|(t, a, b)| Expr::op(t, a, b))
                .boxed(),
            (scalar_strategy(), inner.clone())
                .prop_map(|(s, a)| Expr::Scale(s, Box::new(a)))
                .boxed(),
            prop::collection::vec(inner.clone(), 0..=3)
                .prop_map(Expr::Sum)
                .boxed(),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(a, b, c)| Expr::assoc(a, b, c))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::bracket(a, b))
                .boxed(),
        ];
        if with_star {
            options.push(inner.prop_map(Expr::star).boxed());
        }
        prop::strategy::Union::new(options)
    })
}

/// Monomials of degree `1..=max_deg` in `x1..x_vars` with derivative orders
/// up to `max_order`.
pub fn all_monomials(vars: u32, max_order: u32, max_deg: usize) -> Vec<PermMonomial> {
    use itertools::Itertools;
    let symbols: Vec<GeneratorSymbol> = (1..=vars)
        .flat_map(|v| (0..=max_order).map(move |o| sym(v, o)))
        .collect();
    let mut out = Vec::new();
    for d in 1..=max_deg {
        for left in symbols.iter().cloned().combinations_with_replacement(d - 1) {
            for last in &symbols {
                let mut raw = left.clone();
                raw.push(last.clone());
                out.push(PermMonomial::normalize(&raw).unwrap());
            }
        }
    }
    out
}

/// Compares the closed-form star with `u·v* + v·u*` over every binary
/// factorization of every monomial of degree `≤ 5` in three variables.
/// Returns `(factorizations checked, mismatches)`.
pub fn star_oracle_sweep() -> (usize, Vec<String>) {
    let mut memo = BTreeMap::new();
    let mut checked = 0;
    let mut bad = Vec::new();
    for m in all_monomials(3, 1, 5) {
        let closed = as_poly(&m).star().unwrap();
        if recursive_star(&m, &mut memo) != closed {
            bad.push(format!("{m}: peeled recursion differs"));
        }
        for (u, v) in factorizations(&m) {
            checked += 1;
            let us = recursive_star(&u, &mut memo);
            let vs = recursive_star(&v, &mut memo);
            let via = as_poly(&u)
                .mul(&vs)
                .unwrap()
                .try_add(&as_poly(&v).mul(&us).unwrap())
                .unwrap();
            if via != closed {
                bad.push(format!("{m} = ({u})({v})"));
            }
        }
    }
    (checked, bad)
}

/// Basis of `W_perm(n)` with exponents in `0..=bound`.
pub fn witt_box(n: usize, bound: u32) -> Vec<permdiff::witt::WittElement> {
    use itertools::Itertools;
    use permdiff::witt::{WittBasisElem, WittElement};
    let exps: Vec<Vec<u32>> = (0..n)
        .map(|_| 0..=bound)
        .multi_cartesian_product()
        .collect();
    let mut out = Vec::new();
    for e in &exps {
        for alpha in 1..=n {
            for i in 1..=n {
                out.push(WittElement::basis(WittBasisElem::new(e, alpha, i).unwrap()));
            }
        }
    }
    out
}

/// Triples of basis elements breaking the Jacobi identity for the Lie
/// bracket or the left Leibniz identity for the Leibniz bracket.
pub fn witt_counterexamples(n: usize, bound: u32) -> (usize, usize, usize) {
    use rayon::prelude::*;
    let basis = witt_box(n, bound);
    let triples = basis.len().pow(3);
    let (jacobi, leibniz) = basis
        .par_iter()
        .map(|x| {
            let (mut j, mut l) = (0, 0);
            for y in &basis {
                let xy = x.lie_bracket(y).unwrap();
                let lxy = x.leibniz_bracket(y).unwrap();
                for z in &basis {
                    let yz = y.lie_bracket(z).unwrap();
                    let zx = z.lie_bracket(x).unwrap();
                    let cyc = xy
                        .lie_bracket(z)
                        .unwrap()
                        .try_add(&yz.lie_bracket(x).unwrap())
                        .unwrap()
                        .try_add(&zx.lie_bracket(y).unwrap())
                        .unwrap();
                    j += usize::from(!cyc.is_zero());
                    // [x,[y,z]] = [[x,y],z] + [y,[x,z]]
                    let lhs = x.leibniz_bracket(&y.leibniz_bracket(z).unwrap()).unwrap();
                    let rhs = lxy
                        .leibniz_bracket(z)
                        .unwrap()
                        .try_add(&y.leibniz_bracket(&x.leibniz_bracket(z).unwrap()).unwrap())
                        .unwrap();
                    l += usize::from(lhs != rhs);
                }
            }
            (j, l)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    (triples, jacobi, leibniz)
}
