//! One-parameter subgroups acting on forms.
//!
//! A weight vector `r` (integers, summing to zero, not all zero) gives the
//! monomial `x^i` the weight `sum_j r_j i_j`. A form lies in `M_{>=0}(r)`
//! (resp. `M_{>0}(r)`) when every support monomial has non-negative (resp.
//! positive) weight. If `sigma f` lies in one of these sets for some
//! invertible `sigma`, then `V(f)` is not stable (resp. not semi-stable).

mod cubic;
mod filter;
mod torus;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ExponentVector, HomogeneousPoly, RationalMatrix};
use crate::verdict::Status;

pub use cubic::{check_boundary_weights, normalize_cubic_certificate};
pub use filter::weight_inequality_filter;
pub use torus::{
    enumerate_weight_oracle, enumerate_weight_oracle_pruned, torus_destabilize, BarycentricWeight,
    TorusDecision,
};

/// Integer weights of a one-parameter subgroup `diag(t^{r_0}, ..., t^{r_n})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(r: Vec<i64>) -> Result<Self> {
        if r.len() < 2 {
            return Err(Error::InvalidWeight("need at least two coordinates".into()));
        }
        if r.iter().all(|&x| x == 0) {
            return Err(Error::InvalidWeight("weights must not all vanish".into()));
        }
        let sum: i128 = r.iter().map(|&x| i128::from(x)).sum();
        if sum != 0 {
            return Err(Error::InvalidWeight(format!("weights sum to {sum}, not 0")));
        }
        Ok(WeightVector(r))
    }

    pub fn from_bigints(r: &[BigInt]) -> Result<Self> {
        let ints = r
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::InvalidWeight(format!("weight {x} exceeds 64 bits"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ints)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Projective dimension `n` (the vector has `n + 1` entries).
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn max(&self) -> i64 {
        *self.0.iter().max().expect("non-empty")
    }

    pub fn min(&self) -> i64 {
        *self.0.iter().min().expect("non-empty")
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Descending rearrangement together with `perm`, where `sorted[k] = r[perm[k]]`.
    pub fn sorted(&self) -> (WeightVector, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.0.len()).collect();
        // stable, so equal weights keep their relative order
        perm.sort_by(|&a, &b| self.0[b].cmp(&self.0[a]));
        let sorted = perm.iter().map(|&k| self.0[k]).collect();
        (WeightVector(sorted), perm)
    }

    /// The coordinate change that renames `x_{perm[k]}` to `x_k`, so that
    /// `f in M(r)` iff `sigma f in M(sorted r)`.
    pub fn sorting_matrix(perm: &[usize]) -> RationalMatrix {
        let mut inv = vec![0; perm.len()];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        RationalMatrix::permutation(&inv)
    }

    /// Divides out the gcd of the entries.
    pub fn normalized(&self) -> WeightVector {
        let g = self.0.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g <= 1 {
            return self.clone();
        }
        WeightVector(self.0.iter().map(|&x| x / g).collect())
    }

    /// For sorted `r`: the largest `t` with `r_t >= 0` (`> 0` when `strict`).
    pub fn last_nonnegative_index(&self, strict: bool) -> Option<usize> {
        self.0.iter().rposition(|&x| if strict { x > 0 } else { x >= 0 })
    }
}

impl TryFrom<Vec<i64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<i64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `sum_j r_j m_j`.
pub fn weight_of(r: &WeightVector, m: &ExponentVector) -> Result<i128> {
    if r.len() != m.len() {
        return Err(Error::DimensionMismatch { expected: r.len(), found: m.len() });
    }
    Ok(r.0.iter().zip(m.exps()).map(|(&a, &b)| i128::from(a) * i128::from(b)).sum())
}

fn admissible(weight: i128, strict: bool) -> bool {
    if strict {
        weight > 0
    } else {
        weight >= 0
    }
}

/// First support monomial (in descending order) whose weight is too small.
pub fn first_violation(f: &HomogeneousPoly, r: &WeightVector, strict: bool) -> Result<Option<(ExponentVector, i128)>> {
    if r.len() != f.num_vars() {
        return Err(Error::DimensionMismatch { expected: f.num_vars(), found: r.len() });
    }
    for (m, _) in f.terms().rev() {
        let w = weight_of(r, m)?;
        if !admissible(w, strict) {
            return Ok(Some((m.clone(), w)));
        }
    }
    Ok(None)
}

/// `f in M_{>0}(r)` when `strict`, else `f in M_{>=0}(r)`.
pub fn membership(f: &HomogeneousPoly, r: &WeightVector, strict: bool) -> bool {
    f.num_vars() == r.len()
        && f.support().all(|m| admissible(weight_of(r, m).expect("lengths checked"), strict))
}

/// A claimed destabilization: `sigma f in M_{>0}(r)` (strict) or `M_{>=0}(r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub sigma: RationalMatrix,
    pub r: WeightVector,
    pub strict: bool,
}

impl Certificate {
    pub fn identity(r: WeightVector, strict: bool) -> Self {
        Certificate { sigma: RationalMatrix::identity(r.len()), r, strict }
    }

    /// The status this certificate proves if it verifies.
    pub fn claimed_status(&self) -> Status {
        if self.strict {
            Status::NotSemiStable
        } else {
            Status::NotStable
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CertificateCheck {
    Verified { status: Status },
    Rejected { monomial: ExponentVector, weight: i128 },
}

impl CertificateCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, CertificateCheck::Verified { .. })
    }
}

/// Exact check of a certificate against `f`.
pub fn verify_certificate(f: &HomogeneousPoly, cert: &Certificate) -> Result<CertificateCheck> {
    let size = f.num_vars();
    if cert.r.len() != size {
        return Err(Error::DimensionMismatch { expected: size, found: cert.r.len() });
    }
    let g = f.apply_linear_change(&cert.sigma)?;
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(match first_violation(&g, &cert.r, cert.strict)? {
        None => CertificateCheck::Verified { status: cert.claimed_status() },
        Some((monomial, weight)) => CertificateCheck::Rejected { monomial, weight },
    })
}
