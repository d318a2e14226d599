//! Local invariants of `V(f)` at rational points: multiplicity, tangent cone,
//! Hessian rank, and a heuristic scan for singular points.
//!
//! Every local computation moves the point to `Q = [0:...:0:1]` with an
//! integer matrix and reads off the chart `f(x_0, ..., x_{n-1}, 1)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hilbert_mumford::WeightVector;
use crate::num::{primitive_integer_vector, rat, Rational};
use crate::poly::{monomials_of_degree, AffinePoly, HomogeneousPoly, RationalMatrix};

/// A point of `P^n(Q)` in canonical form: coprime integers, first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<BigInt>,
}

impl ProjectivePoint {
    pub fn new(coords: &[Rational]) -> Result<Self> {
        if coords.is_empty() || coords.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArgument("a projective point needs a nonzero coordinate".into()));
        }
        let mut ints = primitive_integer_vector(coords);
        if ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            for c in &mut ints {
                *c = -&*c;
            }
        }
        Ok(ProjectivePoint { coords: ints })
    }

    pub fn from_integers(coords: &[i64]) -> Result<Self> {
        Self::new(&coords.iter().map(|&c| rat(c)).collect::<Vec<_>>())
    }

    /// `[0:...:0:1]` in `P^n`.
    pub fn last_coordinate_point(n: usize) -> Self {
        let mut coords = vec![BigInt::zero(); n + 1];
        coords[n] = BigInt::one();
        ProjectivePoint { coords }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }

    /// Integer matrix `sigma` with `(sigma f)` near `Q` equal to `f` near `self`.
    ///
    /// `(sigma f)(x) = f(sigma^T x)`, so row `n` of `sigma` is the point itself.
    pub fn move_to_last(&self) -> RationalMatrix {
        let size = self.coords.len();
        let k = self.coords.iter().rposition(|c| !c.is_zero()).expect("nonzero point");
        let mut sigma = RationalMatrix::zeros(size, size);
        let others = (0..size).filter(|&i| i != k);
        for (row, i) in others.enumerate() {
            sigma.set(row, i, rat(1));
        }
        for (j, c) in self.coords.iter().enumerate() {
            sigma.set(size - 1, j, Rational::from_integer(c.clone()));
        }
        sigma
    }

    /// Lexicographic order with larger coordinates first.
    pub fn cmp_descending(&self, other: &Self) -> Ordering {
        other.coords.cmp(&self.coords)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let strings = Vec::<String>::deserialize(d)?;
        let coords = strings
            .iter()
            .map(|s| s.trim().parse::<BigInt>().map(Rational::from_integer))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| D::Error::custom(format!("bad coordinate: {e}")))?;
        ProjectivePoint::new(&coords).map_err(D::Error::custom)
    }
}

fn check_point(f: &HomogeneousPoly, p: &ProjectivePoint) -> Result<()> {
    if p.coords.len() != f.num_vars() {
        return Err(Error::DimensionMismatch { expected: f.num_vars(), found: p.coords.len() });
    }
    Ok(())
}

/// The affine chart of `f` centered at `p`, in `n` variables.
pub fn chart_at(f: &HomogeneousPoly, p: &ProjectivePoint) -> Result<AffinePoly> {
    check_point(f, p)?;
    Ok(f.apply_linear_change(&p.move_to_last())?.dehomogenize_at_last())
}

/// Order of vanishing of `f` at `p`; `0` when `p` is not on `V(f)`.
pub fn multiplicity_at(f: &HomogeneousPoly, p: &ProjectivePoint) -> Result<u32> {
    check_point(f, p)?;
    if !f.evaluate(&p.to_rationals())?.is_zero() {
        return Ok(0);
    }
    let chart = chart_at(f, p)?;
    // f(p) = 0 with f nonzero, so the chart has no constant term and is nonzero
    chart
        .order()
        .ok_or_else(|| Error::Internal(format!("chart of {f} at {p} vanishes identically")))
}

/// Symmetric matrix `A` with `q(x) = x^T A x` for a quadratic form `q`.
pub fn quadratic_form_matrix(q: &AffinePoly) -> Result<RationalMatrix> {
    let m = q.num_vars();
    let mut a = RationalMatrix::zeros(m, m);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for (e, c) in q.terms() {
        if e.degree() != 2 {
            return Err(Error::InvalidArgument(format!("{q} is not a quadratic form")));
        }
        let idx: Vec<usize> = (0..m).flat_map(|j| std::iter::repeat_n(j, e.get(j) as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            a.set(i, i, c.clone());
        } else {
            let v = c * &half;
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
    }
    Ok(a)
}

fn quadratic_rank(q: &AffinePoly) -> usize {
    quadratic_form_matrix(q).expect("degree-two part").rank()
}

/// Rank and corank (`n - rank`) of the chart Hessian at a double point.
pub fn hessian_rank_at(f: &HomogeneousPoly, p: &ProjectivePoint) -> Result<(usize, usize)> {
    let m = multiplicity_at(f, p)?;
    if m != 2 {
        return Err(Error::Precondition(format!("multiplicity at {p} is {m}, not 2")));
    }
    let rank = quadratic_rank(&chart_at(f, p)?.homogeneous_part(2));
    Ok((rank, f.n() - rank))
}

/// Rank of `q`, the coefficient of `x_n^(d-2)` in `f`.
pub fn rank_of_q(f: &HomogeneousPoly) -> usize {
    quadratic_rank(&f.dehomogenize_at_last().homogeneous_part(2))
}

/// `1 + max { j in [1, d-1] : j r_0 + (d-j) r_n < 0 }` (`<= 0` for `M_{>0}`), or 1.
pub fn mult_lower_bound_from_weights(r: &WeightVector, d: u32, strict: bool) -> Result<u32> {
    if !r.is_sorted() {
        return Err(Error::Precondition(format!("{r} is not sorted descending")));
    }
    let (r0, rn) = (r.max() as i128, r.min() as i128);
    let fires = |j: u32| {
        let v = j as i128 * r0 + (d - j) as i128 * rn;
        if strict {
            v <= 0
        } else {
            v < 0
        }
    };
    Ok(1 + (1..d).rev().find(|&j| fires(j)).unwrap_or(0))
}

/// Least integer `m` with `m > 2(n+1)/d - 1` (with `strict = false`: `m >= ...`).
///
/// The strict inequality goes with `M_{>=0}`, the weak one with `M_{>0}`.
pub fn m0_threshold(n: usize, d: u32, strict: bool) -> Result<i64> {
    if n < 2 || d < 3 {
        return Err(Error::InvalidArgument(format!("need n >= 2 and d >= 3, got n = {n}, d = {d}")));
    }
    let x = Rational::new(BigInt::from(2 * (n + 1)), BigInt::from(d)) - rat(1);
    let m = if strict { x.floor() + rat(1) } else { x.ceil() };
    Ok(m.to_integer().to_i64().expect("small threshold"))
}

/// Dimension of the span of the first partials of a nonzero form.
///
/// The form is a cone over a hypersurface in a hyperplane iff this is less
/// than the number of variables.
pub fn essential_variable_count(h: &AffinePoly) -> Result<usize> {
    let deg = h.total_degree().ok_or(Error::ZeroPolynomial)?;
    if !h.is_homogeneous() {
        return Err(Error::InvalidArgument(format!("{h} is not homogeneous")));
    }
    if deg == 0 {
        return Ok(0);
    }
    let m = h.num_vars();
    let basis = monomials_of_degree(m, deg - 1);
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|j| {
            let dj = h.partial_derivative(j).expect("index in range");
            basis.iter().map(|e| dj.coefficient(e)).collect()
        })
        .collect();
    Ok(RationalMatrix::from_rows(rows)?.rank())
}

/// Multiplicity, tangent cone and Hessian data at a point of `V(f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalData {
    pub point: ProjectivePoint,
    pub multiplicity: u32,
    #[serde(serialize_with = "serialize_display")]
    pub tangent_cone: AffinePoly,
    pub hessian_rank: Option<usize>,
    pub hessian_corank: Option<usize>,
}

fn serialize_display<T: fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl LocalData {
    pub fn is_singular(&self) -> bool {
        self.multiplicity >= 2
    }

    /// Whether the projective tangent cone is not a cone over a hyperplane section.
    pub fn tangent_cone_is_cone_free(&self) -> bool {
        essential_variable_count(&self.tangent_cone).expect("tangent cone is nonzero")
            == self.tangent_cone.num_vars()
    }
}

pub fn local_data(f: &HomogeneousPoly, p: &ProjectivePoint) -> Result<LocalData> {
    let multiplicity = multiplicity_at(f, p)?;
    if multiplicity == 0 {
        return Err(Error::Precondition(format!("{p} is not on V(f)")));
    }
    let chart = chart_at(f, p)?;
    let tangent_cone = chart.homogeneous_part(multiplicity);
    let (hessian_rank, hessian_corank) = if multiplicity == 2 {
        let rank = quadratic_rank(&tangent_cone);
        (Some(rank), Some(f.n() - rank))
    } else {
        (None, None)
    };
    Ok(LocalData { point: p.clone(), multiplicity, tangent_cone, hessian_rank, hessian_corank })
}

/// Count of singular points of the reduction mod `p`, or why it was skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteFieldCount {
    pub prime: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_points: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// Output of [`scan_singular_points`]. Only `points` is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularScan {
    pub height_bound: u64,
    pub points: Vec<ProjectivePoint>,
    pub finite_field_counts: Vec<FiniteFieldCount>,
    /// Guess at the singular-locus dimension (`-1` = smooth).
    pub estimated_dimension: i64,
    pub heuristic: bool,
}

pub const DEFAULT_PRIMES: [u64; 4] = [5, 7, 11, 13];

const MAX_FIELD_POINTS: u128 = 200_000;

/// Integer gradient: `f` scaled to primitive integer coefficients, then differentiated.
fn integer_gradient(f: &HomogeneousPoly) -> Vec<Vec<(Vec<u32>, BigInt)>> {
    let coeffs: Vec<Rational> = f.terms().map(|(_, c)| c.clone()).collect();
    let ints = primitive_integer_vector(&coeffs);
    let scaled: Vec<(Vec<u32>, BigInt)> = f.terms().zip(ints).map(|((e, _), c)| (e.exps().to_vec(), c)).collect();
    (0..f.num_vars())
        .map(|j| {
            scaled
                .iter()
                .filter(|(e, _)| e[j] > 0)
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[j] -= 1;
                    (e2, c * BigInt::from(e[j]))
                })
                .collect()
        })
        .collect()
}

/// Evaluates an integer polynomial at a small integer point; `None` on overflow.
fn eval_i128(poly: &[(Vec<u32>, i128)], x: &[i128]) -> Option<i128> {
    let mut acc: i128 = 0;
    for (e, c) in poly {
        let mut t = *c;
        for (xi, &k) in x.iter().zip(e) {
            for _ in 0..k {
                t = t.checked_mul(*xi)?;
            }
        }
        acc = acc.checked_add(t)?;
    }
    Some(acc)
}

fn eval_big(poly: &[(Vec<u32>, BigInt)], x: &[BigInt]) -> BigInt {
    poly.iter()
        .map(|(e, c)| {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                t *= num_traits::pow(xi.clone(), k as usize);
            }
            t
        })
        .sum()
}

/// Calls `visit` on every canonical representative in `{-h..h}^(n+1)`.
fn for_each_projective_point(vars: usize, h: i64, mut visit: impl FnMut(&[i64])) {
    let mut x = vec![-h; vars];
    loop {
        let lead = x.iter().find(|&&c| c != 0);
        if lead.is_some_and(|&c| c > 0) && x.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1 {
            visit(&x);
        }
        let mut k = vars;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if x[k] < h {
                x[k] += 1;
                break;
            }
            x[k] = -h;
        }
    }
}

fn count_mod_p(grad: &[Vec<(Vec<u32>, BigInt)>], vars: usize, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let reduced: Vec<Vec<(Vec<u32>, u64)>> = grad
        .iter()
        .map(|g| {
            g.iter()
                .filter_map(|(e, c)| {
                    let r = c.mod_floor(&pb).to_u64().expect("residue fits");
                    (r != 0).then(|| (e.clone(), r))
                })
                .collect()
        })
        .collect();
    let eval = |poly: &[(Vec<u32>, u64)], x: &[u64]| -> u64 {
        poly.iter().fold(0, |acc, (e, c)| {
            let t = x.iter().zip(e).fold(*c, |t, (xi, &k)| (0..k).fold(t, |t, _| t * xi % p));
            (acc + t) % p
        })
    };
    // points with first nonzero coordinate equal to 1
    let mut count = 0;
    for lead in 0..vars {
        let free = vars - lead - 1;
        let mut x = vec![0u64; vars];
        x[lead] = 1;
        let mut tail = vec![0u64; free];
        loop {
            x[lead + 1..].copy_from_slice(&tail);
            if reduced.iter().all(|g| eval(g, &x) == 0) {
                count += 1;
            }
            let mut k = free;
            let mut done = true;
            while k > 0 {
                k -= 1;
                if tail[k] + 1 < p {
                    tail[k] += 1;
                    done = false;
                    break;
                }
                tail[k] = 0;
            }
            if done {
                break;
            }
        }
    }
    count
}

fn field_points(vars: usize, p: u64) -> u128 {
    (0..vars as u32).map(|k| (p as u128).pow(k)).sum()
}

/// Rational singular points of height `<= height_bound`, plus mod-`p` counts.
///
/// The rational list is exact and complete for the given height; the
/// dimension estimate derived from the finite-field counts is heuristic.
pub fn scan_singular_points(f: &HomogeneousPoly, height_bound: u64, primes: &[u64]) -> Result<SingularScan> {
    if height_bound == 0 {
        return Err(Error::InvalidArgument("height bound must be at least 1".into()));
    }
    let h = i64::try_from(height_bound).map_err(|_| Error::InvalidArgument("height bound too large".into()))?;
    let vars = f.num_vars();
    let grad = integer_gradient(f);
    let small: Option<Vec<Vec<(Vec<u32>, i128)>>> = grad
        .iter()
        .map(|g| g.iter().map(|(e, c)| c.to_i128().map(|c| (e.clone(), c))).collect())
        .collect();

    let mut points = Vec::new();
    for_each_projective_point(vars, h, |x| {
        let singular = grad.iter().enumerate().all(|(j, g)| {
            let fast = small.as_ref().and_then(|s| {
                let xi: Vec<i128> = x.iter().map(|&c| c as i128).collect();
                eval_i128(&s[j], &xi)
            });
            match fast {
                Some(v) => v == 0,
                None => {
                    let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
                    eval_big(g, &xb).is_zero()
                }
            }
        });
        if singular {
            points.push(ProjectivePoint::from_integers(x).expect("nonzero representative"));
        }
    });
    points.sort_by(ProjectivePoint::cmp_descending);

    let content_denominators: Vec<BigInt> = f.terms().map(|(_, c)| c.denom().clone()).collect();
    let mut counts = Vec::new();
    for &p in primes {
        let pb = BigInt::from(p);
        let skipped = if p <= f.d() as u64 {
            Some(format!("characteristic {p} does not exceed the degree"))
        } else if content_denominators.iter().any(|q| q.is_multiple_of(&pb)) {
            Some(format!("{p} divides a coefficient denominator"))
        } else if field_points(vars, p) > MAX_FIELD_POINTS {
            Some(format!("P^{}(F_{p}) is too large to enumerate", vars - 1))
        } else {
            None
        };
        let singular_points = skipped.is_none().then(|| count_mod_p(&grad, vars, p));
        counts.push(FiniteFieldCount { prime: p, singular_points, skipped });
    }

    // per prime, count ~ C p^s; take the largest exponent so that a prime
    // where a singular component is not defined cannot hide it
    let counted: Vec<(u64, u64)> =
        counts.iter().filter_map(|c| c.singular_points.map(|k| (c.prime, k))).collect();
    let large: Vec<(u64, u64)> = counted.iter().copied().filter(|&(p, _)| p >= 7).collect();
    let basis = if large.is_empty() { &counted } else { &large };
    let estimate = basis
        .iter()
        .map(|&(p, k)| if k == 0 { -1 } else { ((k as f64).ln() / (p as f64).ln() + 0.25).floor() as i64 })
        .max();
    let floor = if points.is_empty() { -1 } else { 0 };
    let estimated_dimension = estimate.unwrap_or(floor).max(floor).min(f.n() as i64 - 1);
    Ok(SingularScan { height_bound, points, finite_field_counts: counts, estimated_dimension, heuristic: true })
}

/// Largest height whose rational scan stays under `budget` candidate vectors.
pub fn default_scan_height(n: usize, budget: u64) -> u64 {
    let vars = n as u32 + 1;
    let mut h = 1;
    while (2 * (h + 1) + 1u64).checked_pow(vars).is_some_and(|c| c <= budget) && h < 4 {
        h += 1;
    }
    h
}
