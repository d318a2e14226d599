//! Normal form for non-stability certificates of cubics with isolated singularities.
//!
//! Given `f in M_{>=0}(r)` with `d = 3`, produce `(sigma, r')` with
//! `sigma f in M_{>=0}(r')` and `r'_0 + 2 r'_n < 0`, so that `[0:...:0:1]`
//! is a singular point of `V(sigma f)`.

use num_traits::{Signed, Zero};

use super::{membership, WeightVector};
use crate::error::{Error, Result};
use crate::num::{rat, Rational};
use crate::poly::{ExponentVector, HomogeneousPoly, RationalMatrix};

/// Shape forced on a sorted `r` with `r_0 + 2 r_n >= 0` when `n >= 3`:
/// `r_{n-1} < 0`, `r_{n-2} <= 0`, and `r_{n-2} = 0` forces `r_1 = ... = r_{n-2} = 0`.
///
/// For `n = 2` the index `n - 2` is `0`; the only such vectors are multiples
/// of `(2, -1, -1)` and only `r_1 < 0` is checked.
pub fn check_boundary_weights(r: &WeightVector) -> Result<()> {
    let e = r.entries();
    let n = r.n();
    if !r.is_sorted() {
        return Err(Error::Precondition(format!("weight vector {r} is not sorted descending")));
    }
    if e[0] + 2 * e[n] < 0 {
        return Err(Error::Precondition(format!("{r} already has r_0 + 2 r_n < 0")));
    }
    if e[n - 1] >= 0 {
        return Err(Error::Structural(format!("{r}: expected r_(n-1) < 0")));
    }
    if n >= 3 {
        if e[n - 2] > 0 {
            return Err(Error::Structural(format!("{r}: expected r_(n-2) <= 0")));
        }
        if e[n - 2] == 0 && e[1..=n - 2].iter().any(|&x| x != 0) {
            return Err(Error::Structural(format!("{r}: r_(n-2) = 0 must force r_1 = ... = r_(n-2) = 0")));
        }
    }
    Ok(())
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (p, q) = (x.numer(), x.denom());
    let (sp, sq) = (p.sqrt(), q.sqrt());
    if &(&sp * &sp) == p && &(&sq * &sq) == q {
        Some(Rational::new(sp, sq))
    } else {
        None
    }
}

fn mono(vars: usize, entries: &[(usize, u32)]) -> ExponentVector {
    let mut e = vec![0; vars];
    for &(j, k) in entries {
        e[j] += k;
    }
    ExponentVector::new(e)
}

/// Coordinate change on `(x_{n-1}, x_n)` killing the `x0 x_n^2` coefficient.
fn kill_square_term(g: &HomogeneousPoly) -> Result<RationalMatrix> {
    let n = g.n();
    let vars = n + 1;
    let a = g.coefficient(&mono(vars, &[(0, 1), (n - 1, 2)]));
    let b = g.coefficient(&mono(vars, &[(0, 1), (n - 1, 1), (n, 1)]));
    let e = g.coefficient(&mono(vars, &[(0, 1), (n, 2)]));
    // isotropic direction (u, v) of q = a u^2 + b u v + e v^2
    let (u, v) = if e.is_zero() {
        return Ok(RationalMatrix::identity(vars));
    } else if a.is_zero() {
        (rat(1), rat(0))
    } else {
        let disc = &b * &b - rat(4) * &a * &e;
        let root = rational_sqrt(&disc).ok_or_else(|| {
            Error::Structural(format!(
                "quadratic part in (x{}, x{n}) has no rational isotropic direction (discriminant {disc}); \
                 the normal form needs a field extension",
                n - 1
            ))
        })?;
        ((-&b + root) / (rat(2) * &a), rat(1))
    };
    // old coordinates are sigma^T applied to the new ones, so the new x_n
    // direction is row n of sigma
    let mut sigma = RationalMatrix::identity(vars);
    sigma.set(n, n - 1, u);
    if v.is_zero() {
        sigma.set(n - 1, n - 1, rat(0));
        sigma.set(n - 1, n, rat(1));
    }
    sigma.set(n, n, v);
    Ok(sigma)
}

/// Linear form `l` with `g = x_n x_0 l(x_0..x_{n-1}) + c(x_0..x_{n-1})`.
fn split_off_last_variable(g: &HomogeneousPoly) -> Result<Vec<Rational>> {
    let n = g.n();
    let mut l = vec![Rational::zero(); n];
    for (m, coef) in g.terms() {
        match m.get(n) {
            0 => {}
            1 if m.get(0) >= 1 => {
                let mut rest = m.exps().to_vec();
                rest[0] -= 1;
                rest[n] -= 1;
                let k = rest.iter().position(|&x| x == 1).expect("degree-one remainder");
                l[k] += coef;
            }
            _ => {
                return Err(Error::Structural(format!(
                    "monomial {m:?} does not fit x_n * x_0 * l + c; the singular locus is not finite"
                )))
            }
        }
    }
    Ok(l)
}

/// Change of coordinates fixing `x_0` and `x_n` that turns `l` into `x_1`.
fn straighten(l: &[Rational], vars: usize) -> Result<RationalMatrix> {
    let n = vars - 1;
    let Some(p) = (1..n).find(|&k| !l[k].is_zero()) else {
        // l is a multiple of x_0: x_n x_0^2 already has weight 0
        return Ok(RationalMatrix::identity(vars));
    };
    let mut t = RationalMatrix::identity(vars);
    for (k, a) in l.iter().enumerate() {
        t.set(1, k, a.clone());
    }
    if p != 1 {
        for k in 0..vars {
            t.set(p, k, if k == 1 { rat(1) } else { rat(0) });
        }
    }
    // new coordinates y = T x; sigma g (y) = g(T^{-1} y), i.e. sigma^T = T^{-1}
    Ok(t.inverse()?.transpose())
}

/// Returns `(sigma, r')` with `sigma f in M_{>=0}(r')` and `r'_0 + 2 r'_n < 0`.
///
/// Requires `d = 3` and `f in M_{>=0}(r)`; `r` is sorted first (the sorting
/// permutation is folded into `sigma`). The caller asserts that `V(f)` has
/// finite singular locus; when that fails the structure checks report
/// [`Error::Structural`].
pub fn normalize_cubic_certificate(f: &HomogeneousPoly, r: &WeightVector) -> Result<(RationalMatrix, WeightVector)> {
    if f.d() != 3 {
        return Err(Error::Precondition(format!("degree {} is not 3", f.d())));
    }
    if r.len() != f.num_vars() {
        return Err(Error::DimensionMismatch { expected: f.num_vars(), found: r.len() });
    }
    if f.n() < 2 {
        return Err(Error::Precondition("need n >= 2".into()));
    }
    if !membership(f, r, false) {
        return Err(Error::Precondition(format!("f is not in M_(>=0)({r})")));
    }
    let n = f.n();
    let vars = n + 1;
    let (sorted, perm) = r.sorted();
    let sort = WeightVector::sorting_matrix(&perm);
    let e = sorted.entries();
    if e[0] + 2 * e[n] < 0 {
        return Ok((sort, sorted));
    }
    check_boundary_weights(&sorted)?;
    if n >= 3 && e[n - 2] < 0 {
        return Err(Error::Structural(format!(
            "{sorted}: r_(n-2) < 0 cannot occur with finite singular locus"
        )));
    }

    let g0 = f.apply_linear_change(&sort)?;
    let s1 = kill_square_term(&g0)?;
    let g1 = g0.apply_linear_change(&s1)?;
    let l = split_off_last_variable(&g1)?;
    let s2 = straighten(&l, vars)?;

    let sigma = s2.mul(&s1)?.mul(&sort)?;
    let mut target = vec![0i64; vars];
    target[0] = 1;
    target[1] = 1;
    target[n] = -2;
    let r_new = WeightVector::new(target)?;

    let h = f.apply_linear_change(&sigma)?;
    if !membership(&h, &r_new, false) {
        return Err(Error::Internal(format!("normalized form {h} is not in M_(>=0)({r_new})")));
    }
    Ok((sigma, r_new))
}
