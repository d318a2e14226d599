//! Exact sparse multivariate polynomials over the rationals.
//!
//! [`AffinePoly`] is the general sparse container; [`HomogeneousPoly`] wraps it
//! with a fixed projective dimension `n` (so `n + 1` variables `x0..xn`) and a
//! degree `d` that every stored monomial must have.

mod matrix;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{rat, Rational};

pub use matrix::{integer_rank, RationalMatrix};
pub use parse::{parse_poly, parse_poly_file, parse_poly_inferred};

/// Exponents `(i_0, ..., i_n)` of a monomial.
///
/// Ordered graded-lexicographically with `x0 > x1 > ... > xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }

    pub fn zero(len: usize) -> Self {
        ExponentVector(vec![0; len])
    }

    pub fn unit(len: usize, j: usize) -> Self {
        let mut e = vec![0; len];
        e[j] = 1;
        ExponentVector(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    fn product(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

/// Sparse polynomial in `vars` variables, not necessarily homogeneous.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffinePoly {
    vars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl AffinePoly {
    pub fn zero(vars: usize) -> Self {
        AffinePoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        Self::from_terms(vars, [(ExponentVector::zero(vars), c)])
            .expect("constant term has the right length")
    }

    pub fn variable(vars: usize, j: usize) -> Self {
        let mut p = Self::zero(vars);
        p.terms.insert(ExponentVector::unit(vars, j), Rational::one());
        p
    }

    /// Builds a polynomial from possibly repeated terms, summing coefficients.
    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::DimensionMismatch { expected: vars, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Linear form `sum coeffs[k] * x_k`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let vars = coeffs.len();
        let mut p = Self::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(ExponentVector::unit(vars, k), c.clone());
        }
        p
    }

    fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::degree).max()
    }

    /// Smallest total degree of a term (order of vanishing at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::degree).min()
    }

    pub fn homogeneous_part(&self, k: u32) -> AffinePoly {
        AffinePoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(ExponentVector::degree);
        match degs.next() {
            Some(first) => degs.all(|d| d == first),
            None => true,
        }
    }

    pub fn scale(&self, s: &Rational) -> AffinePoly {
        if s.is_zero() {
            return Self::zero(self.vars);
        }
        AffinePoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn add(&self, other: &AffinePoly) -> AffinePoly {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AffinePoly) -> AffinePoly {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &AffinePoly) -> AffinePoly {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.product(eb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> AffinePoly {
        let mut acc = Self::constant(self.vars, Rational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_derivative(&self, j: usize) -> Result<AffinePoly> {
        if j >= self.vars {
            return Err(Error::VariableOutOfRange { index: j, n: self.vars.saturating_sub(1) });
        }
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let k = e.get(j);
            if k == 0 {
                continue;
            }
            let mut exps = e.0.clone();
            exps[j] -= 1;
            out.add_term(ExponentVector(exps), c * rat(i64::from(k)));
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars {
            return Err(Error::DimensionMismatch { expected: self.vars, found: point.len() });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e.exps()) {
                if k > 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes `x_j -> images[j]` (all images in a common ring).
    pub fn compose(&self, images: &[AffinePoly]) -> Result<AffinePoly> {
        if images.len() != self.vars {
            return Err(Error::DimensionMismatch { expected: self.vars, found: images.len() });
        }
        let target = images.first().map_or(0, AffinePoly::num_vars);
        if images.iter().any(|p| p.num_vars() != target) {
            return Err(Error::InvalidArgument("substitution images live in different rings".into()));
        }
        let mut cache: HashMap<(usize, u32), AffinePoly> = HashMap::new();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (j, &k) in e.exps().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let power = cache
                    .entry((j, k))
                    .or_insert_with(|| images[j].pow(k))
                    .clone();
                term = term.mul(&power);
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

impl fmt::Display for AffinePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().rev())
    }
}

fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a ExponentVector, &'a Rational)>,
{
    let mut first = true;
    for (e, c) in terms {
        let negative = c.is_negative();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { '-' } else { '+' })?;
        }
        first = false;
        let mag = c.abs();
        let factors: Vec<String> = e
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| if k == 1 { format!("x{j}") } else { format!("x{j}^{k}") })
            .collect();
        if factors.is_empty() {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", factors.join("*"))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// A degree-`d` form in `x0, ..., xn` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousPoly {
    n: usize,
    d: u32,
    body: AffinePoly,
}

impl HomogeneousPoly {
    pub fn zero(n: usize, d: u32) -> Self {
        HomogeneousPoly { n, d, body: AffinePoly::zero(n + 1) }
    }

    pub fn new<I>(n: usize, d: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut body = AffinePoly::zero(n + 1);
        for (e, c) in terms {
            if e.len() != n + 1 {
                return Err(Error::DimensionMismatch { expected: n + 1, found: e.len() });
            }
            if e.degree() != d {
                return Err(Error::Inhomogeneous { expected: d, found: e.degree() });
            }
            body.add_term(e, c);
        }
        Ok(HomogeneousPoly { n, d, body })
    }

    /// Convenience constructor from `(exponents, integer coefficient)` pairs.
    pub fn from_int_terms(n: usize, d: u32, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::new(
            n,
            d,
            terms.iter().map(|(e, c)| (ExponentVector::new(e.to_vec()), rat(*c))),
        )
    }

    /// Wraps an affine polynomial that is already homogeneous of degree `d`.
    pub fn from_affine(d: u32, body: AffinePoly) -> Result<Self> {
        if body.num_vars() == 0 {
            return Err(Error::InvalidArgument("a form needs at least one variable".into()));
        }
        if let Some(bad) = body.terms.keys().find(|e| e.degree() != d) {
            return Err(Error::Inhomogeneous { expected: d, found: bad.degree() });
        }
        Ok(HomogeneousPoly { n: body.num_vars() - 1, d, body })
    }

    /// Homogenizes a chart polynomial in `n` variables with the new last variable `xn`.
    pub fn rehomogenize(chart: &AffinePoly, d: u32) -> Result<Self> {
        let n = chart.num_vars();
        let mut terms = Vec::with_capacity(chart.num_terms());
        for (e, c) in chart.terms() {
            let deg = e.degree();
            if deg > d {
                return Err(Error::Inhomogeneous { expected: d, found: deg });
            }
            let mut exps = e.exps().to_vec();
            exps.push(d - deg);
            terms.push((ExponentVector(exps), c.clone()));
        }
        Self::new(n, d, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn num_vars(&self) -> usize {
        self.n + 1
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.body.num_terms()
    }

    pub fn as_affine(&self) -> &AffinePoly {
        &self.body
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.body.terms()
    }

    /// Support monomials in ascending graded-lex order.
    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.body.terms.keys()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.body.coefficient(e)
    }

    pub fn add(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        self.check_same_space(other)?;
        Ok(HomogeneousPoly { n: self.n, d: self.d, body: self.body.add(&other.body) })
    }

    pub fn scale(&self, s: &Rational) -> HomogeneousPoly {
        HomogeneousPoly { n: self.n, d: self.d, body: self.body.scale(s) }
    }

    fn check_same_space(&self, other: &HomogeneousPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n + 1, found: other.n + 1 });
        }
        if self.d != other.d {
            return Err(Error::Inhomogeneous { expected: self.d, found: other.d });
        }
        Ok(())
    }

    pub fn partial_derivative(&self, j: usize) -> Result<HomogeneousPoly> {
        if j > self.n {
            return Err(Error::VariableOutOfRange { index: j, n: self.n });
        }
        Ok(HomogeneousPoly {
            n: self.n,
            d: self.d.saturating_sub(1),
            body: self.body.partial_derivative(j)?,
        })
    }

    pub fn gradient(&self) -> Vec<HomogeneousPoly> {
        (0..=self.n)
            .map(|j| self.partial_derivative(j).expect("index in range"))
            .collect()
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        self.body.evaluate(point)
    }

    /// Returns `sigma f`: the substitution `x_j -> sum_k sigma[k][j] x_k`.
    ///
    /// This is a left action: `(sigma * tau) f = sigma (tau f)`.
    pub fn apply_linear_change(&self, sigma: &RationalMatrix) -> Result<HomogeneousPoly> {
        let size = self.n + 1;
        if sigma.rows() != size || sigma.cols() != size {
            return Err(Error::DimensionMismatch { expected: size, found: sigma.rows().max(sigma.cols()) });
        }
        if !sigma.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        let images: Vec<AffinePoly> = (0..size).map(|j| AffinePoly::linear_form(&sigma.column(j))).collect();
        let body = self.body.compose(&images)?;
        Ok(HomogeneousPoly { n: self.n, d: self.d, body })
    }

    /// Sets `xn = 1`; the degree-`j` part of the result is the coefficient
    /// of `xn^(d-j)` in `f`.
    pub fn dehomogenize_at_last(&self) -> AffinePoly {
        let mut out = AffinePoly::zero(self.n);
        for (e, c) in self.body.terms() {
            let exps = e.exps()[..self.n].to_vec();
            out.add_term(ExponentVector(exps), c.clone());
        }
        out
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

/// All exponent vectors of total degree `d` in `vars` variables, descending graded-lex.
pub fn monomials_of_degree(vars: usize, d: u32) -> Vec<ExponentVector> {
    fn rec(vars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == vars {
            prefix.push(left);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(vars, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars == 0 {
        return out;
    }
    rec(vars, d, &mut Vec::with_capacity(vars), &mut out);
    out
}
