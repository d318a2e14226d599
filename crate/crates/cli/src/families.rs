//! The two example families of non-semistable hypersurfaces and their certificates.
//!
//! * `f_n = x0^2 xn + x1^3 + ... + x_{n-1}^3`, `r = (3(n-1), 1, ..., 1, -4(n-1))`
//! * `g_n = x0^2 xn^2 + x0 x_{n-1}^3 + x1^4 + ... + x_{n-2}^4`, `r = (3n+2, 1, ..., 1, -n, -3n)`

use std::fmt;

use clap::ValueEnum;
use gitstab_core::hilbert_mumford::{Certificate, WeightVector};
use gitstab_core::{parse_poly, HomogeneousPoly};
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub const MAX_N: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Fn,
    Gn,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Fn => "fn",
            Family::Gn => "gn",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub family: Family,
    pub n: usize,
    pub poly: HomogeneousPoly,
    pub certificate: Certificate,
    pub edge_case: Option<String>,
}

pub fn family_member(family: Family, n: usize) -> CliResult<FamilyMember> {
    if !(2..=MAX_N).contains(&n) {
        return Err(CliError::input(format!("{family}: n = {n} outside [2, {MAX_N}]")));
    }
    let (text, r, edge_case) = match family {
        Family::Fn => {
            let mut terms = vec![format!("x0^2*x{n}")];
            terms.extend((1..n).map(|j| format!("x{j}^3")));
            let k = 3 * (n as i64 - 1);
            let mut r = vec![k];
            r.extend(std::iter::repeat_n(1, n - 1));
            r.push(-4 * (n as i64 - 1));
            (terms.join(" + "), r, None)
        }
        Family::Gn => {
            let mut terms = vec![format!("x0^2*x{n}^2"), format!("x0*x{}^3", n - 1)];
            terms.extend((1..n - 1).map(|j| format!("x{j}^4")));
            let n_i = n as i64;
            let mut r = vec![3 * n_i + 2];
            r.extend(std::iter::repeat_n(1, n - 2));
            r.push(-n_i);
            r.push(-3 * n_i);
            let edge = (n == 2).then(|| "n = 2 has no x_j^4 block; g_2 = x0^2*x2^2 + x0*x1^3".to_string());
            (terms.join(" + "), r, edge)
        }
    };
    let poly = parse_poly(&text, n)?;
    let r = WeightVector::new(r)?;
    Ok(FamilyMember { family, n, poly, certificate: Certificate::identity(r, true), edge_case })
}
