//! Exact tools for deciding or bounding the GIT stability of projective hypersurfaces.
//!
//! * [`poly`]: sparse forms over Q, parsing, coordinate changes, charts.
//! * [`hilbert_mumford`]: weight vectors, `M_{>=0}` / `M_{>0}` membership,
//!   certificate checking, the torus destabilization LP and its brute-force oracle.
//! * [`singularity`]: multiplicity, tangent cones, Hessian rank, rational singular points.
//! * [`criteria`]: closed-form sufficient conditions for (semi-)stability.

pub mod criteria;
pub mod error;
pub mod hilbert_mumford;
pub mod literature;
pub mod lp;
pub mod num;
pub mod poly;
pub mod singularity;
pub mod verdict;

pub use error::{Error, Result};
pub use num::Rational;
pub use poly::{parse_poly, parse_poly_file, AffinePoly, ExponentVector, HomogeneousPoly, RationalMatrix};
