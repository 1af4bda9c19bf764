//! Structure constants of `W_perm(1)` and `W_perm(2)`, and the reference
//! tables they are checked against.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{WittBasisElem, WittElement};
use crate::error::{Error, Result};
use crate::scalar::{rat, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lie,
    Leibniz,
}

impl Kind {
    pub fn bracket(self, a: &WittElement, b: &WittElement) -> Result<WittElement> {
        match self {
            Kind::Lie => a.lie_bracket(b),
            Kind::Leibniz => a.leibniz_bracket(b),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Lie => "lie",
            Kind::Leibniz => "leibniz",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lie" => Ok(Kind::Lie),
            "leibniz" => Ok(Kind::Leibniz),
            _ => Err(Error::Unsupported(format!("bracket kind `{s}`"))),
        }
    }
}

/// `c[0] + c[1]·m + c[2]·n + c[3]·p + c[4]·q`, where `(m, n)` is the left
/// exponent and `(p, q)` the right one. In one variable only `m` and `p`
/// are used; they are printed as `m` and `n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AffineCoeff(pub [i64; 5]);

impl AffineCoeff {
    pub fn eval(&self, params: [i64; 4]) -> i64 {
        self.0[0] + (0..4).map(|v| self.0[v + 1] * params[v]).sum::<i64>()
    }

    /// Exchanges the roles of the left and right exponents.
    pub fn swapped(&self) -> Self {
        let c = self.0;
        AffineCoeff([c[0], c[3], c[4], c[1], c[2]])
    }

    pub fn negated(&self) -> Self {
        AffineCoeff(self.0.map(|c| -c))
    }

    pub fn render(&self, dim: usize) -> String {
        let names = if dim == 1 {
            ["m", "", "n", ""]
        } else {
            ["m", "n", "p", "q"]
        };
        let mut parts: Vec<(i64, String)> = (0..4)
            .filter(|&v| self.0[v + 1] != 0)
            .map(|v| (self.0[v + 1], names[v].to_string()))
            .collect();
        parts.sort_by_key(|(c, _)| *c < 0);
        if self.0[0] != 0 {
            parts.push((self.0[0], String::new()));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (c, name)) in parts.iter().enumerate() {
            let mag = c.abs();
            match (k, *c < 0) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if name.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if mag != 1 {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(name);
            }
        }
        out
    }
}

/// One term `coeff · E^{alpha,i}_{(m,n)+(p,q)+shift}` of a rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleTerm {
    pub coeff: AffineCoeff,
    pub alpha: usize,
    pub i: usize,
    pub shift: Vec<u32>,
}

/// A coefficient rule `[E^{left}_{m,n}, E^{right}_{p,q}] = Σ terms`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TranscribedRule {
    pub name: String,
    pub kind: Kind,
    pub dim: usize,
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub terms: Vec<RuleTerm>,
}

fn letter(dim: usize, v: usize) -> &'static str {
    match (dim, v) {
        (2, 1) => "x",
        (2, 2) => "y",
        _ => "1",
    }
}

fn render_basis(dim: usize, (alpha, i): (usize, usize), sub: &str) -> String {
    if dim == 1 {
        format!("E_{{{sub}}}")
    } else {
        format!("E^{{{},{}}}_{{{sub}}}", letter(dim, alpha), letter(dim, i))
    }
}

fn render_shift(dim: usize, shift: &[u32]) -> String {
    let plus = |base: &str, s: u32| {
        if s == 0 {
            base.to_string()
        } else {
            format!("{base}+{s}")
        }
    };
    if dim == 1 {
        plus("m+n", shift[0])
    } else {
        format!("{},{}", plus("m+p", shift[0]), plus("n+q", shift[1]))
    }
}

fn render_terms(dim: usize, terms: &[RuleTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let neg = t.coeff.render(dim).starts_with('-');
            let c = if neg { t.coeff.negated() } else { t.coeff }.render(dim);
            let needs_parens = c.contains(' ');
            let c = if needs_parens { format!("({c})") } else { c };
            let sign = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let coeff = if c == "1" {
                String::new()
            } else {
                format!("{c} ")
            };
            format!(
                "{sign}{coeff}{}",
                render_basis(dim, (t.alpha, t.i), &render_shift(dim, &t.shift))
            )
        })
        .collect()
}

impl TranscribedRule {
    pub fn formula(&self) -> String {
        let (l, r) = if self.dim == 1 {
            ("m", "n")
        } else {
            ("m,n", "p,q")
        };
        let suffix = if self.kind == Kind::Leibniz { "_o" } else { "" };
        format!(
            "[{}, {}]{suffix} = {}",
            render_basis(self.dim, self.left, l),
            render_basis(self.dim, self.right, r),
            render_terms(self.dim, &self.terms)
        )
    }

    fn operands(&self, params: [u32; 4]) -> Result<(WittElement, WittElement)> {
        let (le, re) = self.exponents(params);
        Ok((
            WittElement::basis(WittBasisElem::new(&le, self.left.0, self.left.1)?),
            WittElement::basis(WittBasisElem::new(&re, self.right.0, self.right.1)?),
        ))
    }

    fn exponents(&self, params: [u32; 4]) -> (Vec<u32>, Vec<u32>) {
        if self.dim == 1 {
            (vec![params[0]], vec![params[2]])
        } else {
            (vec![params[0], params[1]], vec![params[2], params[3]])
        }
    }

    /// The right-hand side at the given `(m, n, p, q)`.
    pub fn instantiate(&self, params: [u32; 4]) -> Result<WittElement> {
        let (le, re) = self.exponents(params);
        let p = params.map(i64::from);
        let mut out = WittElement::zero(self.dim);
        for t in &self.terms {
            let e: Vec<u32> = (0..self.dim).map(|v| le[v] + re[v] + t.shift[v]).collect();
            let c = t.coeff.eval(p);
            out.add_scaled(
                &WittElement::basis(WittBasisElem::new(&e, t.alpha, t.i)?),
                &rat(c),
            )?;
        }
        Ok(out)
    }

    fn skew_partner(&self, name: String) -> TranscribedRule {
        TranscribedRule {
            name,
            kind: self.kind,
            dim: self.dim,
            left: self.right,
            right: self.left,
            terms: self
                .terms
                .iter()
                .map(|t| RuleTerm {
                    coeff: t.coeff.swapped().negated(),
                    ..t.clone()
                })
                .collect(),
        }
    }
}

const X: usize = 1;
const Y: usize = 2;
/// Target `E_{m+p+1,n+q}`.
const SX: [u32; 2] = [1, 0];
/// Target `E_{m+p,n+q+1}`.
const SY: [u32; 2] = [0, 1];

/// Coefficient `c0 + cm·m + cn·n + cp·p + cq·q`.
const fn a(c0: i64, cm: i64, cn: i64, cp: i64, cq: i64) -> AffineCoeff {
    AffineCoeff([c0, cm, cn, cp, cq])
}

type Row = (
    &'static str,
    (usize, usize),
    (usize, usize),
    &'static [(AffineCoeff, (usize, usize), [u32; 2])],
);

/// Lie rules of `W_perm(2)`; the first superscript is the tensor direction, the
/// second the derivation.
const LIE: [Row; 12] = [
    ("lie-i1", (X, X), (X, X), &[(a(0, -1, 0, 1, 0), (X, X), SX)]),
    (
        "lie-i2",
        (X, X),
        (Y, X),
        &[
            (a(0, 0, 0, 1, 0), (Y, X), SX),
            (a(-1, -1, 0, 0, 0), (X, X), SY),
        ],
    ),
    (
        "lie-i3",
        (Y, X),
        (X, X),
        &[
            (a(1, 0, 0, 1, 0), (Y, X), SY),
            (a(0, -1, 0, 0, 0), (Y, X), SX),
        ],
    ),
    ("lie-i4", (Y, X), (Y, X), &[(a(0, -1, 0, 1, 0), (Y, X), SY)]),
    (
        "lie-ii1",
        (X, Y),
        (X, Y),
        &[(a(0, 0, -1, 0, 1), (X, Y), SX)],
    ),
    (
        "lie-ii2",
        (X, Y),
        (Y, Y),
        &[
            (a(1, 0, 0, 0, 1), (Y, Y), SX),
            (a(0, 0, -1, 0, 0), (X, Y), SY),
        ],
    ),
    (
        "lie-ii3",
        (Y, Y),
        (X, Y),
        &[
            (a(0, 0, 0, 0, 1), (Y, Y), SY),
            (a(-1, 0, -1, 0, 0), (Y, Y), SX),
        ],
    ),
    (
        "lie-ii4",
        (Y, Y),
        (Y, Y),
        &[(a(0, 0, -1, 0, 1), (Y, Y), SY)],
    ),
    (
        "lie-iii1",
        (X, X),
        (X, Y),
        &[
            (a(1, 0, 0, 1, 0), (X, Y), SX),
            (a(0, 0, -1, 0, 0), (X, X), SX),
        ],
    ),
    (
        "lie-iii2",
        (X, X),
        (Y, Y),
        &[
            (a(0, 0, 0, 1, 0), (Y, Y), SX),
            (a(0, 0, -1, 0, 0), (X, X), SY),
        ],
    ),
    (
        "lie-iii3",
        (Y, X),
        (X, Y),
        &[
            (a(1, 0, 0, 1, 0), (X, Y), SY),
            (a(-1, 0, -1, 0, 0), (Y, X), SX),
        ],
    ),
    (
        "lie-iii4",
        (Y, X),
        (Y, Y),
        &[
            (a(0, 0, 0, 1, 0), (Y, Y), SY),
            (a(-1, 0, -1, 0, 0), (Y, X), SY),
        ],
    ),
];

const LEIBNIZ: [Row; 16] = [
    (
        "leibniz-a1",
        (X, X),
        (X, X),
        &[(a(0, 1, 0, -1, 0), (X, X), SX)],
    ),
    (
        "leibniz-a2",
        (X, X),
        (X, Y),
        &[
            (a(0, 0, 1, 0, 0), (X, X), SX),
            (a(-1, 0, 0, -1, 0), (X, Y), SX),
        ],
    ),
    (
        "leibniz-a3",
        (X, Y),
        (X, X),
        &[
            (a(1, 1, 0, 0, 0), (X, Y), SX),
            (a(0, 0, 0, 0, -1), (X, X), SX),
        ],
    ),
    (
        "leibniz-a4",
        (X, Y),
        (X, Y),
        &[(a(0, 0, 1, 0, -1), (X, Y), SX)],
    ),
    (
        "leibniz-a5",
        (X, X),
        (Y, X),
        &[(a(1, 1, 0, -1, 0), (Y, X), SX)],
    ),
    (
        "leibniz-a6",
        (X, X),
        (Y, Y),
        &[
            (a(0, 0, 1, 0, 0), (Y, X), SX),
            (a(0, 0, 0, -1, 0), (Y, Y), SX),
        ],
    ),
    (
        "leibniz-a7",
        (X, Y),
        (Y, X),
        &[
            (a(1, 1, 0, 0, 0), (Y, Y), SX),
            (a(-1, 0, 0, 0, -1), (Y, X), SX),
        ],
    ),
    (
        "leibniz-a8",
        (X, Y),
        (Y, Y),
        &[(a(-1, 0, 1, 0, -1), (Y, Y), SX)],
    ),
    (
        "leibniz-b1",
        (Y, X),
        (X, X),
        &[(a(-1, 1, 0, -1, 0), (X, X), SY)],
    ),
    (
        "leibniz-b2",
        (Y, X),
        (X, Y),
        &[
            (a(1, 0, 1, 0, 0), (X, X), SY),
            (a(-1, 0, 0, -1, 0), (X, Y), SY),
        ],
    ),
    (
        "leibniz-b3",
        (Y, Y),
        (X, X),
        &[
            (a(0, 1, 0, 0, 0), (X, Y), SY),
            (a(0, 0, 0, 0, -1), (X, X), SY),
        ],
    ),
    (
        "leibniz-b4",
        (Y, Y),
        (X, Y),
        &[(a(1, 0, 1, 0, -1), (X, Y), SY)],
    ),
    (
        "leibniz-b5",
        (Y, X),
        (Y, X),
        &[(a(0, 1, 0, -1, 0), (Y, X), SY)],
    ),
    (
        "leibniz-b6",
        (Y, X),
        (Y, Y),
        &[
            (a(1, 0, 1, 0, 0), (Y, X), SY),
            (a(0, 0, 0, -1, 0), (Y, Y), SY),
        ],
    ),
    (
        "leibniz-b7",
        (Y, Y),
        (Y, X),
        &[
            (a(0, 1, 0, 0, 0), (Y, Y), SY),
            (a(-1, 0, 0, 0, -1), (Y, X), SY),
        ],
    ),
    (
        "leibniz-b8",
        (Y, Y),
        (Y, Y),
        &[(a(0, 0, 1, 0, -1), (Y, Y), SY)],
    ),
];

fn from_row(kind: Kind, (name, left, right, terms): &Row) -> TranscribedRule {
    TranscribedRule {
        name: name.to_string(),
        kind,
        dim: 2,
        left: *left,
        right: *right,
        terms: terms
            .iter()
            .map(|(coeff, (alpha, i), shift)| RuleTerm {
                coeff: *coeff,
                alpha: *alpha,
                i: *i,
                shift: shift.to_vec(),
            })
            .collect(),
    }
}

/// The reference rules: the one-variable rule `[E_m, E_n] = (n−m)E_{m+n+1}`,
/// the sixteen ordered Lie blocks of `W_perm(2)` (the displayed twelve plus
/// the skew completions of the mixed block) and the sixteen Leibniz blocks.
pub fn rule_transcription() -> Vec<TranscribedRule> {
    let mut out = vec![TranscribedRule {
        name: "w1".into(),
        kind: Kind::Lie,
        dim: 1,
        left: (1, 1),
        right: (1, 1),
        terms: vec![RuleTerm {
            coeff: a(0, -1, 0, 1, 0),
            alpha: 1,
            i: 1,
            shift: vec![1],
        }],
    }];
    let lie: Vec<TranscribedRule> = LIE.iter().map(|r| from_row(Kind::Lie, r)).collect();
    out.extend(lie.iter().cloned());
    for r in lie.iter().filter(|r| r.name.starts_with("lie-iii")) {
        out.push(r.skew_partner(format!("{}-skew", r.name)));
    }
    out.extend(LEIBNIZ.iter().map(|r| from_row(Kind::Leibniz, r)));
    out
}

/// Exponent range of the verification box.
pub const VERIFY_BOUND: u32 = 3;

fn params_box(dim: usize, bound: u32) -> Vec<[u32; 4]> {
    let r = 0..=bound;
    let mut out = Vec::new();
    for m in r.clone() {
        for p in r.clone() {
            if dim == 1 {
                out.push([m, 0, p, 0]);
                continue;
            }
            for n in r.clone() {
                for q in r.clone() {
                    out.push([m, n, p, q]);
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct EntryCheck {
    pub rule: String,
    /// `(m, n, p, q)`; in one variable `(m, n)`.
    pub params: Vec<u32>,
    pub ok: bool,
    pub computed: WittElement,
    pub expected: WittElement,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct RuleCheck {
    pub name: String,
    pub kind: Kind,
    pub formula: String,
    pub total: usize,
    pub passed: usize,
}

/// Whether a Lie rule and the rule for the swapped pair agree with
/// antisymmetry, as transcribed.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SkewCheck {
    pub rule: String,
    pub partner: String,
    pub consistent: bool,
    pub violations: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TableVerification {
    pub total: usize,
    pub passed: usize,
    pub all_ok: bool,
    pub rules: Vec<RuleCheck>,
    pub skew_audit: Vec<SkewCheck>,
    pub entries: Vec<EntryCheck>,
}

fn short_params(dim: usize, p: [u32; 4]) -> Vec<u32> {
    if dim == 1 {
        vec![p[0], p[2]]
    } else {
        p.to_vec()
    }
}

fn check_rule(rule: &TranscribedRule) -> Result<(RuleCheck, Vec<EntryCheck>)> {
    let entries = params_box(rule.dim, VERIFY_BOUND)
        .into_iter()
        .map(|params| {
            let (l, r) = rule.operands(params)?;
            let computed = rule.kind.bracket(&l, &r)?;
            let expected = rule.instantiate(params)?;
            Ok(EntryCheck {
                rule: rule.name.clone(),
                params: short_params(rule.dim, params),
                ok: computed == expected,
                computed,
                expected,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let check = RuleCheck {
        name: rule.name.clone(),
        kind: rule.kind,
        formula: rule.formula(),
        total: entries.len(),
        passed: entries.iter().filter(|e| e.ok).count(),
    };
    Ok((check, entries))
}

fn skew_audit(rules: &[TranscribedRule]) -> Result<Vec<SkewCheck>> {
    let lie: Vec<&TranscribedRule> = rules
        .iter()
        .filter(|r| r.kind == Kind::Lie && r.dim == 2)
        .collect();
    let mut out = Vec::new();
    for r in &lie {
        let Some(partner) = lie.iter().find(|s| s.left == r.right && s.right == r.left) else {
            continue;
        };
        let mut violations = 0;
        for [m, n, p, q] in params_box(2, VERIFY_BOUND) {
            let sum = r
                .instantiate([m, n, p, q])?
                .try_add(&partner.instantiate([p, q, m, n])?)?;
            violations += usize::from(!sum.is_zero());
        }
        out.push(SkewCheck {
            rule: r.name.clone(),
            partner: partner.name.clone(),
            consistent: violations == 0,
            violations,
        });
    }
    Ok(out)
}

/// Checks every reference rule at every `(m, n, p, q) ∈ {0..3}^4` (the
/// one-variable rule at `(m, n) ∈ {0..3}^2`) against the computed bracket.
pub fn verify_tables() -> Result<TableVerification> {
    let rules = rule_transcription();
    let checked: Vec<(RuleCheck, Vec<EntryCheck>)> =
        rules.par_iter().map(check_rule).collect::<Result<_>>()?;
    let skew_audit = skew_audit(&rules)?;
    let (rules, entries): (Vec<_>, Vec<_>) = checked.into_iter().unzip();
    let entries: Vec<EntryCheck> = entries.into_iter().flatten().collect();
    let passed = entries.iter().filter(|e| e.ok).count();
    Ok(TableVerification {
        total: entries.len(),
        passed,
        all_ok: passed == entries.len(),
        rules,
        skew_audit,
        entries,
    })
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TableEntry {
    pub left: WittBasisElem,
    pub right: WittBasisElem,
    pub result: WittElement,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TermRecord {
    pub coeff: String,
    pub alpha: usize,
    pub i: usize,
    pub shift: Vec<u32>,
}

/// An affine coefficient rule recovered from a block of computed entries.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TableRule {
    pub left: BlockId,
    pub right: BlockId,
    pub formula: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct BlockId {
    pub alpha: usize,
    pub i: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct StructureTable {
    pub n: usize,
    pub kind: Kind,
    pub bound: u32,
    pub entries: Vec<TableEntry>,
    pub rules: Vec<TableRule>,
}

fn exponent_vectors(dim: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=bound).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

fn as_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        i64::try_from(q.numer().clone()).ok()
    } else {
        None
    }
}

/// Fits an affine rule to one block; `None` when some coefficient is not
/// affine in the exponents or a target falls outside the `+0/+1` shifts.
fn detect_rule(
    dim: usize,
    left: (usize, usize),
    right: (usize, usize),
    block: &[TableEntry],
) -> Option<TableRule> {
    type Target = (usize, usize, Vec<u32>);
    let mut samples: BTreeMap<Target, BTreeMap<[i64; 4], i64>> = BTreeMap::new();
    let mut points = Vec::new();
    for entry in block {
        let mut params = [0i64; 4];
        for v in 0..dim {
            params[v] = entry.left.e[v] as i64;
            params[v + 2] = entry.right.e[v] as i64;
        }
        points.push(params);
        for (b, c) in entry.result.terms() {
            let shift: Option<Vec<u32>> = (0..dim)
                .map(|v| b.e[v].checked_sub(entry.left.e[v] + entry.right.e[v]))
                .collect();
            let shift = shift?;
            samples
                .entry((b.alpha, b.i, shift))
                .or_default()
                .insert(params, as_i64(c)?);
        }
    }
    let used: Vec<usize> = (0..dim).flat_map(|v| [v, v + 2]).collect();
    let mut terms = Vec::new();
    for ((alpha, i, shift), values) in samples {
        let at = |p: &[i64; 4]| values.get(p).copied().unwrap_or(0);
        let c0 = at(&[0; 4]);
        let mut coeff = [c0, 0, 0, 0, 0];
        for &v in &used {
            let mut unit = [0i64; 4];
            unit[v] = 1;
            if !points.contains(&unit) {
                return None;
            }
            coeff[v + 1] = at(&unit) - c0;
        }
        let affine = AffineCoeff(coeff);
        if points.iter().any(|p| affine.eval(*p) != at(p)) {
            return None;
        }
        terms.push(RuleTerm {
            coeff: affine,
            alpha,
            i,
            shift,
        });
    }
    let rule = TranscribedRule {
        name: String::new(),
        kind: Kind::Lie,
        dim,
        left,
        right,
        terms,
    };
    let formula = rule.formula();
    let formula = formula
        .split_once(" = ")
        .map(|(_, rhs)| rhs.to_string())
        .unwrap_or(formula);
    Some(TableRule {
        left: BlockId {
            alpha: left.0,
            i: left.1,
        },
        right: BlockId {
            alpha: right.0,
            i: right.1,
        },
        formula,
        terms: rule
            .terms
            .iter()
            .map(|t| TermRecord {
                coeff: t.coeff.render(dim),
                alpha: t.alpha,
                i: t.i,
                shift: t.shift.clone(),
            })
            .collect(),
    })
}

/// Brackets of all basis pairs of `W_perm(n)` with exponents `≤ bound`,
/// ordered by block `(α, i, β, j)` then by exponents, together with the
/// affine rules detected per block.
pub fn structure_table(n: usize, kind: Kind, bound: u32) -> Result<StructureTable> {
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!("structure tables for n = {n}")));
    }
    let blocks: Vec<(usize, usize)> = (1..=n)
        .flat_map(|alpha| (1..=n).map(move |i| (alpha, i)))
        .collect();
    let exps = exponent_vectors(n, bound);
    let pairs: Vec<((usize, usize), (usize, usize))> = blocks
        .iter()
        .flat_map(|&l| blocks.iter().map(move |&r| (l, r)))
        .collect();
    let per_block: Vec<(Vec<TableEntry>, Option<TableRule>)> = pairs
        .par_iter()
        .map(|&(l, r)| {
            let mut entries = Vec::new();
            for le in &exps {
                for re in &exps {
                    let left = WittBasisElem::new(le, l.0, l.1)?;
                    let right = WittBasisElem::new(re, r.0, r.1)?;
                    let result = kind.bracket(
                        &WittElement::basis(left.clone()),
                        &WittElement::basis(right.clone()),
                    )?;
                    entries.push(TableEntry {
                        left,
                        right,
                        result,
                    });
                }
            }
            let rule = if bound >= 1 {
                detect_rule(n, l, r, &entries)
            } else {
                None
            };
            Ok((entries, rule))
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    let mut rules = Vec::new();
    for (e, r) in per_block {
        entries.extend(e);
        rules.extend(r);
    }
    Ok(StructureTable {
        n,
        kind,
        bound,
        entries,
        rules,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_rendering() {
        assert_eq!(a(0, -1, 0, 1, 0).render(2), "p - m");
        assert_eq!(a(1, 1, 0, -1, 0).render(2), "m - p + 1");
        assert_eq!(a(-1, 0, 0, 0, 0).render(2), "-1");
        assert_eq!(a(0, -1, 0, 1, 0).render(1), "n - m");
        assert_eq!(a(0, 0, 0, 0, 0).render(2), "0");
    }

    #[test]
    fn formula_text() {
        let rules = rule_transcription();
        assert_eq!(rules[0].formula(), "[E_{m}, E_{n}] = (n - m) E_{m+n+1}");
        let i2 = rules.iter().find(|r| r.name == "lie-i2").unwrap();
        assert_eq!(
            i2.formula(),
            "[E^{x,x}_{m,n}, E^{y,x}_{p,q}] = p E^{y,x}_{m+p+1,n+q} - (m + 1) E^{x,x}_{m+p,n+q+1}"
        );
        assert_eq!(rules.len(), 1 + 16 + 16);
    }

    #[test]
    fn one_variable_table_matches_witt_rule() {
        let t = structure_table(1, Kind::Lie, 3).unwrap();
        assert_eq!(t.entries.len(), 16);
        for e in &t.entries {
            let (m, n) = (e.left.e[0] as i64, e.right.e[0] as i64);
            let target = WittBasisElem::new(&[e.left.e[0] + e.right.e[0] + 1], 1, 1).unwrap();
            assert_eq!(e.result, WittElement::basis(target).scale(&rat(n - m)));
        }
        assert_eq!(t.rules.len(), 1);
        assert_eq!(t.rules[0].terms[0].coeff, "n - m");
        assert!(structure_table(3, Kind::Lie, 1).is_err());
    }

    #[test]
    fn detected_rules_cover_every_block() {
        for kind in [Kind::Lie, Kind::Leibniz] {
            let t = structure_table(2, kind, 2).unwrap();
            assert_eq!(t.entries.len(), 16 * 81);
            assert_eq!(t.rules.len(), 16);
        }
    }
}
