//! Exact enumeration of constrained lattice walks.
//!
//! Generating functions are truncated power series in `t` with sparse
//! Laurent-polynomial coefficients in `x`, `y` and a mark variable. Walk
//! classes are obtained by factoring these series as
//! `h = h_minus * h_zero * h_plus` with respect to the grading induced by a
//! homomorphism on a free monoid of paths, and every identity can be checked
//! against brute-force counts from [`oracle`].
//!
//! ```
//! use gessel_core::laurent::rat;
//! use gessel_core::{walks, StepSet};
//!
//! let square: StepSet = "0,1;0,-1;1,0;-1,0".parse()?;
//! let slit = walks::slitplane(&square, 7);
//! assert_eq!(slit.s0.coeff(1, 0, 3)?, rat(5));
//! assert!(slit.bilateral_identity());
//! # Ok::<(), gessel_core::Error>(())
//! ```

pub mod error;
pub mod factorize;
pub mod kernel;
pub mod laurent;
pub mod monoid;
pub mod oracle;
pub mod series;
pub mod verify;
pub mod walks;

pub use error::{Error, Result};
pub use factorize::{unique_factorization, Factors};
pub use laurent::{ExponentKey, Grading, LaurentPoly, Rational};
pub use monoid::{GesselPair, MonoidFamily, Path, PathClass, Rho, Step, StepSet};
pub use oracle::{Census, CountTable};
pub use series::{Part, TSeries};
pub use walks::Constraint;
