//! Max-plus functions `max⟨P⟩ = (x, y) ↦ max_{(a,b)∈P} (a·x + b·y)` with
//! integer coefficients, expression trees over them, and factorization into
//! prime max-plus atoms through the geometric decomposer.
//!
//! A term set and its convex hull denote the same function, and evaluation at
//! `(x, y)` is the support function of the hull in that direction. Everything
//! here leans on that duality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::descent::SegmentDecomposer;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, LatticeBody, LatticePoint};
use crate::pipeline::{decompose_with, VerifyMode};
use crate::signed::{CanonicalAtom, NormalForm, UnitTriangle};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FunctionJson", into = "FunctionJson")]
pub struct MaxPlusFunction {
    terms: BTreeSet<LatticePoint>,
}

#[derive(Serialize, Deserialize)]
struct FunctionJson {
    terms: Vec<LatticePoint>,
}

impl From<MaxPlusFunction> for FunctionJson {
    fn from(f: MaxPlusFunction) -> Self {
        FunctionJson { terms: f.terms.into_iter().collect() }
    }
}

impl TryFrom<FunctionJson> for MaxPlusFunction {
    type Error = Error;

    fn try_from(raw: FunctionJson) -> Result<Self> {
        MaxPlusFunction::new(raw.terms)
    }
}

impl MaxPlusFunction {
    pub fn new(terms: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        let terms: BTreeSet<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        Ok(Self { terms })
    }

    /// The constant function 0, i.e. `max⟨{(0,0)}⟩`.
    pub fn zero() -> Self {
        Self { terms: BTreeSet::from([LatticePoint::ORIGIN]) }
    }

    pub fn linear(a: i64, b: i64) -> Self {
        Self { terms: BTreeSet::from([LatticePoint::new(a, b)]) }
    }

    pub fn from_body(body: &LatticeBody) -> Self {
        Self { terms: body.vertices().iter().copied().collect() }
    }

    pub fn terms(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.terms.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Newton polygon of the function.
    pub fn hull(&self) -> LatticeBody {
        let pts: Vec<_> = self.terms().collect();
        convex_hull(&pts).expect("term set is never empty")
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i64 {
        let d = LatticePoint::new(x, y);
        self.terms.iter().map(|p| p.dot(d)).max().expect("term set is never empty")
    }

    /// Drops every term that is not a vertex of the hull.
    pub fn simplify(&self) -> Self {
        Self::from_body(&self.hull())
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.hull() == other.hull()
    }

    pub fn combine_max(&self, other: &Self) -> Self {
        Self { terms: self.terms.union(&other.terms).copied().collect() }
    }

    /// Pointwise sum. Only hull vertices of each side can contribute hull
    /// vertices of the result, so the pairwise sums are taken over those.
    pub fn combine_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.simplify(), other.simplify());
        let mut terms = BTreeSet::new();
        for &p in &a.terms {
            for &q in &b.terms {
                terms.insert(p + q);
            }
        }
        Self { terms }
    }

    /// `k·f` for `k > 0`.
    pub fn dilate(&self, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::PositiveScalingOnly);
        }
        Ok(Self { terms: self.terms.iter().map(|&p| k * p).collect() })
    }
}

pub fn evaluate(f: &MaxPlusFunction, x: i64, y: i64) -> i64 {
    f.evaluate(x, y)
}

pub fn simplify(f: &MaxPlusFunction) -> MaxPlusFunction {
    f.simplify()
}

pub fn equivalent(f: &MaxPlusFunction, g: &MaxPlusFunction) -> bool {
    f.equivalent(g)
}

pub fn combine_max(f: &MaxPlusFunction, g: &MaxPlusFunction) -> MaxPlusFunction {
    f.combine_max(g)
}

pub fn combine_sum(f: &MaxPlusFunction, g: &MaxPlusFunction) -> MaxPlusFunction {
    f.combine_sum(g)
}

fn linear_text(a: i64, b: i64) -> String {
    fn mono(k: i64, var: char) -> String {
        match k {
            1 => var.to_string(),
            -1 => format!("-{var}"),
            _ => format!("{k}{var}"),
        }
    }
    match (a, b) {
        (0, 0) => "0".into(),
        (a, 0) => mono(a, 'x'),
        (0, b) => mono(b, 'y'),
        (a, b) if b > 0 => format!("{}+{}", mono(a, 'x'), mono(b, 'y')),
        (a, b) => format!("{}{}", mono(a, 'x'), mono(b, 'y')),
    }
}

impl fmt::Display for MaxPlusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.len() == 1 {
            let p = self.terms.iter().next().unwrap();
            return f.write_str(&linear_text(p.x, p.y));
        }
        // lowest total degree first, x before y
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|p| (p.x + p.y, -p.x));
        let parts: Vec<_> = terms.iter().map(|p| linear_text(p.x, p.y)).collect();
        write!(f, "max({})", parts.join(","))
    }
}

/// General expression over linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaxPlusExpr {
    Linear(i64, i64),
    Max(Vec<MaxPlusExpr>),
    Sum(Vec<MaxPlusExpr>),
    Negate(Box<MaxPlusExpr>),
    Scale(i64, Box<MaxPlusExpr>),
}

impl MaxPlusExpr {
    /// Sum that flattens nested sums and merges all linear summands.
    pub fn sum(children: Vec<MaxPlusExpr>) -> MaxPlusExpr {
        let mut out = Vec::new();
        let mut lin = None::<(i64, i64)>;
        let mut stack: Vec<_> = children.into_iter().rev().collect();
        while let Some(c) = stack.pop() {
            match c {
                MaxPlusExpr::Sum(inner) => stack.extend(inner.into_iter().rev()),
                MaxPlusExpr::Linear(a, b) => {
                    let (x, y) = lin.unwrap_or((0, 0));
                    lin = Some((x + a, y + b));
                }
                other => out.push(other),
            }
        }
        match lin {
            Some((a, b)) if (a, b) != (0, 0) || out.is_empty() => out.insert(0, MaxPlusExpr::Linear(a, b)),
            _ => {}
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            MaxPlusExpr::Sum(out)
        }
    }

    pub fn negate(e: MaxPlusExpr) -> MaxPlusExpr {
        match e {
            MaxPlusExpr::Linear(a, b) => MaxPlusExpr::Linear(-a, -b),
            MaxPlusExpr::Negate(inner) => *inner,
            other => MaxPlusExpr::Negate(Box::new(other)),
        }
    }

    pub fn scale(k: i64, e: MaxPlusExpr) -> MaxPlusExpr {
        match e {
            MaxPlusExpr::Linear(a, b) => MaxPlusExpr::Linear(k * a, k * b),
            other if k == 1 => other,
            other => MaxPlusExpr::Scale(k, Box::new(other)),
        }
    }

    pub fn max(children: Vec<MaxPlusExpr>) -> MaxPlusExpr {
        MaxPlusExpr::Max(children)
    }

    pub fn from_function(f: &MaxPlusFunction) -> MaxPlusExpr {
        let mut lin: Vec<_> = f.terms().map(|p| MaxPlusExpr::Linear(p.x, p.y)).collect();
        if lin.len() == 1 {
            lin.pop().unwrap()
        } else {
            MaxPlusExpr::Max(lin)
        }
    }

    /// Direct evaluation of the tree, independent of [`flatten`].
    pub fn evaluate(&self, x: i64, y: i64) -> i64 {
        match self {
            MaxPlusExpr::Linear(a, b) => a * x + b * y,
            MaxPlusExpr::Max(cs) => cs.iter().map(|c| c.evaluate(x, y)).max().unwrap_or(0),
            MaxPlusExpr::Sum(cs) => cs.iter().map(|c| c.evaluate(x, y)).sum(),
            MaxPlusExpr::Negate(c) => -c.evaluate(x, y),
            MaxPlusExpr::Scale(k, c) => k * c.evaluate(x, y),
        }
    }

    /// The function itself when the tree has no subtraction in it.
    pub fn as_function(&self) -> Option<MaxPlusFunction> {
        match flatten(self) {
            Ok((plus, minus)) if minus.terms.len() == 1 && minus.terms.contains(&LatticePoint::ORIGIN) => Some(plus),
            _ => None,
        }
    }
}

impl fmt::Display for MaxPlusExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxPlusExpr::Linear(a, b) => f.write_str(&linear_text(*a, *b)),
            MaxPlusExpr::Max(cs) => {
                let parts: Vec<_> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "max({})", parts.join(","))
            }
            MaxPlusExpr::Sum(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    match c {
                        MaxPlusExpr::Negate(inner) => write!(f, "{}({inner})", if i == 0 { "-" } else { " - " })?,
                        other if i == 0 => write!(f, "({other})")?,
                        other => write!(f, " + ({other})")?,
                    }
                }
                Ok(())
            }
            MaxPlusExpr::Negate(c) => write!(f, "-({c})"),
            MaxPlusExpr::Scale(k, c) => write!(f, "{k}*({c})"),
        }
    }
}

/// Rewrites an expression tree as `plus − minus` with both sides plain
/// max-plus functions.
///
/// Works bottom-up on pairs `(A, B)` meaning `A − B`:
/// negation swaps the pair, sums add componentwise, positive scaling dilates,
/// and `max_i(A_i − B_i) = max_i(A_i + Σ_{j≠i} B_j) − Σ_j B_j`.
pub fn flatten(e: &MaxPlusExpr) -> Result<(MaxPlusFunction, MaxPlusFunction)> {
    Ok(match e {
        MaxPlusExpr::Linear(a, b) => (MaxPlusFunction::linear(*a, *b), MaxPlusFunction::zero()),
        MaxPlusExpr::Negate(c) => {
            let (p, m) = flatten(c)?;
            (m, p)
        }
        MaxPlusExpr::Scale(k, c) => {
            if *k <= 0 {
                return Err(Error::PositiveScalingOnly);
            }
            let (p, m) = flatten(c)?;
            (p.dilate(*k)?, m.dilate(*k)?)
        }
        MaxPlusExpr::Sum(cs) => {
            let mut acc = (MaxPlusFunction::zero(), MaxPlusFunction::zero());
            for c in cs {
                let (p, m) = flatten(c)?;
                acc = (acc.0.combine_sum(&p), acc.1.combine_sum(&m));
            }
            acc
        }
        MaxPlusExpr::Max(cs) => {
            if cs.is_empty() {
                return Err(Error::EmptyPointSet);
            }
            let parts = cs.iter().map(flatten).collect::<Result<Vec<_>>>()?;
            let n = parts.len();
            // suffix[i] = Σ_{j≥i} B_j, so Σ_{j≠i} B_j = prefix + suffix[i+1]
            let mut suffix = vec![MaxPlusFunction::zero(); n + 1];
            for i in (0..n).rev() {
                suffix[i] = suffix[i + 1].combine_sum(&parts[i].1);
            }
            let mut prefix = MaxPlusFunction::zero();
            let mut plus: Option<MaxPlusFunction> = None;
            for (i, (a, b)) in parts.iter().enumerate() {
                let others = prefix.combine_sum(&suffix[i + 1]);
                let term = a.combine_sum(&others);
                plus = Some(match plus {
                    None => term,
                    Some(p) => p.combine_max(&term),
                });
                prefix = prefix.combine_sum(b);
            }
            (plus.unwrap(), suffix[0].clone())
        }
    })
    .map(|(p, m)| (p.simplify(), m.simplify()))
}

/// `a0·x + b0·y + kx·max(0,x) + ky·max(0,y) + Σ k_T·max⟨v(T)⟩`.
///
/// This is a [`NormalForm`] read as a function: the translation becomes the
/// linear part and every body its support function.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FactorizationJson", into = "FactorizationJson")]
pub struct MaxPlusFactorization {
    nf: NormalForm,
}

#[derive(Serialize, Deserialize)]
struct TriangleTermJson {
    v: [LatticePoint; 3],
    k: i64,
}

#[derive(Serialize, Deserialize)]
struct FactorizationJson {
    a0: i64,
    b0: i64,
    kx: i64,
    ky: i64,
    triangles: Vec<TriangleTermJson>,
}

impl From<MaxPlusFactorization> for FactorizationJson {
    fn from(f: MaxPlusFactorization) -> Self {
        FactorizationJson {
            a0: f.nf.t.x,
            b0: f.nf.t.y,
            kx: f.nf.kx,
            ky: f.nf.ky,
            triangles: f.nf.triangles().map(|(t, k)| TriangleTermJson { v: t.vertices(), k }).collect(),
        }
    }
}

impl TryFrom<FactorizationJson> for MaxPlusFactorization {
    type Error = Error;

    fn try_from(raw: FactorizationJson) -> Result<Self> {
        let mut nf = NormalForm::translation(LatticePoint::new(raw.a0, raw.b0));
        nf.kx = raw.kx;
        nf.ky = raw.ky;
        for t in raw.triangles {
            nf.add_atom(CanonicalAtom::Triangle(UnitTriangle::new(t.v)?), t.k);
        }
        Ok(Self { nf })
    }
}

impl MaxPlusFactorization {
    pub fn from_normal_form(nf: NormalForm) -> Self {
        Self { nf }
    }

    pub fn normal_form(&self) -> &NormalForm {
        &self.nf
    }

    pub fn a0(&self) -> i64 {
        self.nf.t.x
    }

    pub fn b0(&self) -> i64 {
        self.nf.t.y
    }

    pub fn kx(&self) -> i64 {
        self.nf.kx
    }

    pub fn ky(&self) -> i64 {
        self.nf.ky
    }

    pub fn triangles(&self) -> BTreeMap<UnitTriangle, i64> {
        self.nf.triangles().map(|(t, k)| (*t, k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.nf.is_zero()
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i64 {
        let mut v = self.nf.t.x * x + self.nf.t.y * y + self.nf.kx * x.max(0) + self.nf.ky * y.max(0);
        for (t, k) in self.nf.triangles() {
            let d = LatticePoint::new(x, y);
            let m = t.vertices().iter().map(|p| p.dot(d)).max().unwrap();
            v += k * m;
        }
        v
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self { nf: self.nf.add(&other.nf.negate()) }
    }

    /// Canonical text such as `x - 2y + max(0,x) - 3*max(0,x,x+y)` that the
    /// expression parser reads back.
    pub fn to_expression_string(&self) -> String {
        let mut items: Vec<(i64, String)> = Vec::new();
        if self.nf.t.x != 0 {
            items.push((self.nf.t.x, "x".into()));
        }
        if self.nf.t.y != 0 {
            items.push((self.nf.t.y, "y".into()));
        }
        for (atom, k) in self.nf.atoms() {
            let f = MaxPlusFunction::from_body(&atom.body());
            items.push((k, format!("*{f}")));
        }
        if items.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, text)) in items.iter().enumerate() {
            match (i, *k < 0) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let (coef, body) = match text.strip_prefix('*') {
                Some(atom) => (format!("{}*", k.abs()), atom),
                None => (k.abs().to_string(), text.as_str()),
            };
            if k.abs() != 1 {
                out.push_str(&coef);
            }
            out.push_str(body);
        }
        out
    }
}

impl fmt::Display for MaxPlusFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expression_string())
    }
}

pub fn factorize(f: &MaxPlusFunction) -> Result<MaxPlusFactorization> {
    factorize_with(f, &mut SegmentDecomposer::new())
}

/// Factorization reusing a segment memo. The underlying decomposition is
/// checked against the Newton polygon by the exact hull oracle.
pub fn factorize_with(f: &MaxPlusFunction, segments: &mut SegmentDecomposer) -> Result<MaxPlusFactorization> {
    let report = decompose_with(&f.hull(), VerifyMode::Full, segments)?;
    Ok(MaxPlusFactorization { nf: report.normal_form })
}

/// Factorization of `f − g`; needs no Minkowski difference of the hulls.
pub fn factorize_difference(f: &MaxPlusFunction, g: &MaxPlusFunction) -> Result<MaxPlusFactorization> {
    let mut segments = SegmentDecomposer::new();
    let a = factorize_with(f, &mut segments)?;
    let b = factorize_with(g, &mut segments)?;
    Ok(a.difference(&b))
}

pub fn to_expression_string(fact: &MaxPlusFactorization) -> String {
    fact.to_expression_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(terms: &[(i64, i64)]) -> MaxPlusFunction {
        MaxPlusFunction::new(terms.iter().map(|&p| p.into())).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(mp(&[(0, 0), (2, 0), (0, 1)]).evaluate(1, 3), 3);
        assert_eq!(MaxPlusFunction::zero().evaluate(-17, 4), 0);
        assert_eq!(mp(&[(0, 0), (1, 0), (1, 1)]).evaluate(2, -1), 2);
    }

    #[test]
    fn simplify_drops_non_vertices() {
        assert_eq!(mp(&[(0, 0), (1, 0), (2, 0), (0, 1)]).simplify(), mp(&[(0, 0), (2, 0), (0, 1)]));
        let s = mp(&[(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]).simplify();
        assert!(!s.terms().any(|p| p == LatticePoint::new(1, 1)));
        assert_eq!(s.simplify(), s);
    }

    #[test]
    fn equivalence_examples() {
        assert!(mp(&[(0, 0), (2, 0), (0, 1)]).equivalent(&mp(&[(0, 0), (1, 0), (2, 0), (0, 1)])));
        assert!(!mp(&[(0, 0), (1, 0)]).equivalent(&mp(&[(0, 0), (0, 1)])));
    }

    #[test]
    fn union_and_sum_examples() {
        let u = mp(&[(0, 0), (1, 1), (1, 2)]).combine_max(&mp(&[(0, 0), (1, 1), (2, 0)]));
        assert_eq!(u, mp(&[(0, 0), (1, 1), (2, 0), (1, 2)]));
        let s = mp(&[(0, 0), (1, 0), (1, 1)]).combine_sum(&mp(&[(0, 0), (0, 1), (1, 1)]));
        assert!(s.equivalent(&mp(&[(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)])));
        let f = mp(&[(0, 0), (3, 1)]);
        assert_eq!(f.combine_sum(&MaxPlusFunction::zero()), f);
    }

    #[test]
    fn flatten_examples() {
        use MaxPlusExpr::*;
        let e = Max(vec![MaxPlusExpr::negate(Max(vec![Linear(1, 0), Linear(0, 1)])), Linear(0, 0)]);
        let (p, m) = flatten(&e).unwrap();
        assert_eq!(p, mp(&[(0, 0), (1, 0), (0, 1)]));
        assert_eq!(m, mp(&[(1, 0), (0, 1)]));

        let (p, m) = flatten(&Max(vec![Linear(0, 0), Linear(1, 0)])).unwrap();
        assert_eq!((p, m), (mp(&[(0, 0), (1, 0)]), MaxPlusFunction::zero()));

        let e = MaxPlusExpr::sum(vec![
            Max(vec![Linear(0, 0), Linear(1, 0)]),
            MaxPlusExpr::negate(Max(vec![Linear(0, 0), Linear(0, 1)])),
        ]);
        let (p, m) = flatten(&e).unwrap();
        assert_eq!((p, m), (mp(&[(0, 0), (1, 0)]), mp(&[(0, 0), (0, 1)])));
    }

    #[test]
    fn nonpositive_scale_rejected() {
        let e = MaxPlusExpr::Scale(0, Box::new(MaxPlusExpr::Max(vec![MaxPlusExpr::Linear(0, 0)])));
        assert_eq!(flatten(&e), Err(Error::PositiveScalingOnly));
    }

    #[test]
    fn factorize_max_0_x() {
        let f = factorize(&mp(&[(0, 0), (1, 0)])).unwrap();
        assert_eq!((f.a0(), f.b0(), f.kx(), f.ky()), (0, 0, 1, 0));
        assert!(f.triangles().is_empty());
        assert_eq!(f.to_expression_string(), "max(0,x)");
    }

    #[test]
    fn factorize_skinny_triangle() {
        let f = mp(&[(0, 0), (1, 1), (3, 0)]);
        let fact = factorize(&f).unwrap();
        for x in -5..=5 {
            for y in -5..=5 {
                assert_eq!(fact.evaluate(x, y), f.evaluate(x, y));
            }
        }
    }

    #[test]
    fn difference_of_equal_is_zero() {
        let f = mp(&[(0, 0), (2, 0), (0, 1)]);
        let d = factorize_difference(&f, &f).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.to_expression_string(), "0");
    }

    #[test]
    fn json_shapes() {
        let f = mp(&[(0, 0), (2, 0), (0, 1)]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"terms":[[0,0],[0,1],[2,0]]}"#);
        let back: MaxPlusFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<MaxPlusFunction>(r#"{"terms":[]}"#).is_err());

        let fact = factorize(&f).unwrap();
        let text = serde_json::to_string(&fact).unwrap();
        assert!(text.starts_with(r#"{"a0":"#));
        let back: MaxPlusFactorization = serde_json::from_str(&text).unwrap();
        assert_eq!(back, fact);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
