//! Destabilization by the diagonal torus in fixed coordinates.
//!
//! Write `c = (d/(n+1), ..., d/(n+1))`. On the hyperplane `sum r_j = 0` the
//! weight of a monomial `i` equals `r . (i - c)`, so:
//!
//! * strict: some `r` has `r . i > 0` on the support iff `c` is not in the
//!   convex hull of the support;
//! * non-strict: some nonzero `r` has `r . i >= 0` on the support iff `c` is
//!   not a strictly positive combination of the support, or the vectors
//!   `i - c` fail to span the hyperplane.
//!
//! Feasibility is decided by exact LP; infeasibility comes with the convex
//! weights `lambda_i` as a certificate. Both outcomes are re-verified.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{filter::weight_inequality_filter, membership, weight_of, WeightVector};
use crate::error::{Error, Result};
use crate::lp::{Constraint, FeasibilityProblem, Relation};
use crate::num::{primitive_integer_vector, rat, serde_rational, Rational};
use crate::poly::{ExponentVector, HomogeneousPoly, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarycentricWeight {
    pub monomial: ExponentVector,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusDecision {
    pub strict: bool,
    pub feasible: bool,
    pub witness: Option<WeightVector>,
    pub infeasibility_certificate: Option<Vec<BarycentricWeight>>,
}

impl TorusDecision {
    /// Re-checks the decision against `f` from scratch.
    pub fn verify(&self, f: &HomogeneousPoly) -> std::result::Result<(), String> {
        if self.feasible {
            let w = self.witness.as_ref().ok_or("feasible decision without witness")?;
            if !membership(f, w, self.strict) {
                return Err(format!("witness {w} does not satisfy the weight conditions"));
            }
            return Ok(());
        }
        let cert = self
            .infeasibility_certificate
            .as_ref()
            .ok_or("infeasible decision without certificate")?;
        check_barycentric(f, cert, self.strict)
    }
}

fn centroid(f: &HomogeneousPoly) -> Vec<Rational> {
    let c = Rational::new(BigInt::from(f.d()), BigInt::from(f.num_vars()));
    vec![c; f.num_vars()]
}

fn check_barycentric(f: &HomogeneousPoly, cert: &[BarycentricWeight], strict: bool) -> std::result::Result<(), String> {
    let vars = f.num_vars();
    let support: Vec<&ExponentVector> = f.support().collect();
    if cert.iter().any(|b| !support.contains(&&b.monomial)) {
        return Err("certificate uses a monomial outside the support".into());
    }
    if cert.iter().any(|b| b.lambda.is_negative()) {
        return Err("negative convex weight".into());
    }
    if !strict && (cert.len() != support.len() || cert.iter().any(|b| !b.lambda.is_positive())) {
        return Err("non-strict certificate needs a positive weight on every support monomial".into());
    }
    let total: Rational = cert.iter().map(|b| b.lambda.clone()).sum();
    if !total.is_one() {
        return Err(format!("convex weights sum to {total}"));
    }
    let c = centroid(f);
    for (j, cj) in c.iter().enumerate() {
        let coord: Rational = cert.iter().map(|b| &b.lambda * rat(i64::from(b.monomial.get(j)))).sum();
        if &coord != cj {
            return Err(format!("barycenter coordinate {j} is {coord}, expected {cj}"));
        }
    }
    if !strict {
        let rows: Vec<Vec<Rational>> = support
            .iter()
            .map(|m| (0..vars).map(|j| rat(i64::from(m.get(j))) - &c[j]).collect())
            .collect();
        let rank = RationalMatrix::from_rows(rows).map_err(|e| e.to_string())?.rank();
        if rank != vars - 1 {
            return Err(format!("support directions span rank {rank}, need {}", vars - 1));
        }
    }
    Ok(())
}

/// Coefficient row of `r . m` in the reduced variables `r_0..r_{n-1}`
/// (with `r_n = -(r_0 + ... + r_{n-1})`).
fn reduced_row(m: &ExponentVector) -> Vec<Rational> {
    let n = m.len() - 1;
    let last = i64::from(m.get(n));
    (0..n).map(|j| rat(i64::from(m.get(j)) - last)).collect()
}

fn full_weights(reduced: &[Rational]) -> Vec<Rational> {
    let mut r = reduced.to_vec();
    let s: Rational = reduced.iter().sum();
    r.push(-s);
    r
}

fn integer_witness(reduced: &[Rational]) -> Result<WeightVector> {
    let ints = primitive_integer_vector(&full_weights(reduced));
    WeightVector::from_bigints(&ints)
}

fn strict_problem(f: &HomogeneousPoly) -> FeasibilityProblem {
    let mut p = FeasibilityProblem::all_free(f.n());
    for m in f.support() {
        p.push(Constraint::new(reduced_row(m), Relation::Ge, Rational::one()));
    }
    p
}

fn probe_problem(f: &HomogeneousPoly, k: usize, sign: i64) -> FeasibilityProblem {
    let n = f.n();
    let mut p = FeasibilityProblem::all_free(n);
    for m in f.support() {
        p.push(Constraint::new(reduced_row(m), Relation::Ge, Rational::zero()));
    }
    let pin = if k < n {
        let mut row = vec![Rational::zero(); n];
        row[k] = Rational::one();
        Constraint::new(row, Relation::Eq, rat(sign))
    } else {
        Constraint::new(vec![Rational::one(); n], Relation::Eq, rat(-sign))
    };
    p.push(pin);
    p
}

fn strict_certificate(f: &HomogeneousPoly) -> Option<Vec<BarycentricWeight>> {
    let support: Vec<&ExponentVector> = f.support().collect();
    let c = centroid(f);
    let mut p = FeasibilityProblem::all_nonnegative(support.len());
    p.push(Constraint::new(vec![Rational::one(); support.len()], Relation::Eq, Rational::one()));
    for (j, cj) in c.iter().enumerate() {
        let row = support.iter().map(|m| rat(i64::from(m.get(j)))).collect();
        p.push(Constraint::new(row, Relation::Eq, cj.clone()));
    }
    let lambda = p.solve()?;
    Some(
        support
            .into_iter()
            .zip(lambda)
            .filter(|(_, l)| !l.is_zero())
            .map(|(m, l)| BarycentricWeight { monomial: m.clone(), lambda: l })
            .collect(),
    )
}

fn nonstrict_certificate(f: &HomogeneousPoly) -> Option<Vec<BarycentricWeight>> {
    // mu_i = 1 + nu_i with nu >= 0 and sum_i mu_i (i - c) = 0
    let support: Vec<&ExponentVector> = f.support().collect();
    let c = centroid(f);
    let dirs: Vec<Vec<Rational>> = support
        .iter()
        .map(|m| (0..f.num_vars()).map(|j| rat(i64::from(m.get(j))) - &c[j]).collect())
        .collect();
    let mut p = FeasibilityProblem::all_nonnegative(support.len());
    for j in 0..f.num_vars() {
        let row: Vec<Rational> = dirs.iter().map(|v| v[j].clone()).collect();
        let rhs: Rational = -row.iter().sum::<Rational>();
        p.push(Constraint::new(row, Relation::Eq, rhs));
    }
    let nu = p.solve()?;
    let mu: Vec<Rational> = nu.into_iter().map(|x| x + Rational::one()).collect();
    let total: Rational = mu.iter().sum();
    Some(
        support
            .into_iter()
            .zip(mu)
            .map(|(m, x)| BarycentricWeight { monomial: m.clone(), lambda: x / &total })
            .collect(),
    )
}

/// Decides whether some weight vector puts `f` in `M_{>0}` (strict) or
/// `M_{>=0}` (non-strict) without changing coordinates.
///
/// Errors only with [`Error::Internal`] if neither the certificate LP nor the
/// primal LP succeeds, which would indicate a bug.
pub fn torus_destabilize(f: &HomogeneousPoly, strict: bool) -> Result<TorusDecision> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // The certificate LP has only n + 2 rows, so it is tried first.
    let cert = if strict { strict_certificate(f) } else { nonstrict_certificate(f) };
    let cert = cert.filter(|c| check_barycentric(f, c, strict).is_ok());
    let decision = match cert {
        Some(cert) => TorusDecision { strict, feasible: false, witness: None, infeasibility_certificate: Some(cert) },
        None => {
            let x = if strict {
                strict_problem(f).solve()
            } else {
                (0..f.num_vars())
                    .flat_map(|k| [(k, 1), (k, -1)])
                    .find_map(|(k, sign)| probe_problem(f, k, sign).solve())
            };
            let x = x.ok_or_else(|| {
                Error::Internal(format!("torus LP infeasible but no barycentric certificate exists for {f}"))
            })?;
            TorusDecision { strict, feasible: true, witness: Some(integer_witness(&x)?), infeasibility_certificate: None }
        }
    };
    decision
        .verify(f)
        .map_err(|e| Error::Internal(format!("torus decision failed re-verification: {e}")))?;
    Ok(decision)
}

/// Brute force: scans integer `r` with `|r_j| <= bound`, `sum r_j = 0`,
/// `r != 0` in ascending lexicographic order and returns the first one that
/// satisfies the weight conditions.
pub fn enumerate_weight_oracle(f: &HomogeneousPoly, bound: i64, strict: bool) -> Option<WeightVector> {
    scan(f, bound, strict, None)
}

/// As [`enumerate_weight_oracle`], skipping candidates whose sorted form fails
/// [`weight_inequality_filter`] for singular-locus dimension `assume_s`.
pub fn enumerate_weight_oracle_pruned(
    f: &HomogeneousPoly,
    bound: i64,
    strict: bool,
    assume_s: usize,
) -> Option<WeightVector> {
    scan(f, bound, strict, Some(assume_s))
}

fn scan(f: &HomogeneousPoly, bound: i64, strict: bool, assume_s: Option<usize>) -> Option<WeightVector> {
    if bound < 1 || f.is_zero() {
        return None;
    }
    let vars = f.num_vars();
    let support: Vec<&ExponentVector> = f.support().collect();
    let mut r = vec![-bound; vars];
    loop {
        let head: i64 = r[..vars - 1].iter().sum();
        let last = -head;
        if last.abs() <= bound {
            r[vars - 1] = last;
            if r.iter().any(|&x| x != 0) {
                let w = WeightVector::new(r.clone()).expect("sum is zero");
                let ok = support.iter().all(|m| {
                    let v = weight_of(&w, m).expect("same length");
                    if strict {
                        v > 0
                    } else {
                        v >= 0
                    }
                });
                let keep = match assume_s {
                    Some(s) => {
                        let (sorted, _) = w.sorted();
                        weight_inequality_filter(&sorted, s, f.d(), strict).unwrap_or(true)
                    }
                    None => true,
                };
                if ok && keep {
                    return Some(w);
                }
            }
        }
        // odometer over r_0..r_{n-1}
        let mut k = vars - 1;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if r[k] < bound {
                r[k] += 1;
                for x in r.iter_mut().take(vars - 1).skip(k + 1) {
                    *x = -bound;
                }
                break;
            }
        }
    }
}
