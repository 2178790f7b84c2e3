//! Power series in `t`, truncated at an inclusive order `N`, whose
//! coefficients are Laurent polynomials in `x`, `y` and the mark.
//!
//! Every operation is exact modulo `t^(N+1)`. Binary operations work at the
//! smaller of the two truncation orders.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{rat, ExponentKey, Grading, LaurentPoly, Rational};

/// Which part of a graded series to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    /// Grade zero (`CT`).
    Constant,
    /// Grade at least zero (`PT`).
    Nonnegative,
    /// Grade below zero (`NT`).
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<LaurentPoly>,
}

impl TSeries {
    pub fn zero(trunc: usize) -> Self {
        TSeries {
            coeffs: vec![LaurentPoly::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(LaurentPoly::one(), trunc)
    }

    pub fn constant(p: LaurentPoly, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = p;
        s
    }

    /// `p * t^n`, or zero if `n` exceeds the truncation.
    pub fn term(p: LaurentPoly, n: usize, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if n <= trunc {
            s.coeffs[n] = p;
        }
        s
    }

    /// The series `t`.
    pub fn t(trunc: usize) -> Self {
        Self::term(LaurentPoly::one(), 1, trunc)
    }

    /// Builds a series from its coefficients; truncation is `len - 1`.
    ///
    /// Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<LaurentPoly>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least the t^0 coefficient"
        );
        TSeries { coeffs }
    }

    /// Series with rational constant coefficients `c_0 + c_1 t + ...`.
    pub fn from_rationals<I: IntoIterator<Item = Rational>>(cs: I) -> Self {
        Self::from_coeffs(cs.into_iter().map(LaurentPoly::constant).collect())
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// The `t^n` coefficient; zero past the truncation.
    pub fn get(&self, n: usize) -> &LaurentPoly {
        static ZERO: std::sync::OnceLock<LaurentPoly> = std::sync::OnceLock::new();
        self.coeffs
            .get(n)
            .unwrap_or_else(|| ZERO.get_or_init(LaurentPoly::zero))
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(trunc + 1).cloned().collect();
        coeffs.resize(trunc + 1, LaurentPoly::zero());
        TSeries { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    /// Equality up to the smaller truncation order.
    pub fn agrees(&self, other: &TSeries) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }

    /// Applies a map to every coefficient.
    pub fn map<F: Fn(&LaurentPoly) -> LaurentPoly>(&self, f: F) -> Self {
        TSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Multiplies every coefficient by a Laurent polynomial.
    pub fn scale_poly(&self, q: &LaurentPoly) -> Self {
        self.map(|p| p * q)
    }

    pub fn forget_mark(&self) -> Self {
        self.map(LaurentPoly::forget_mark)
    }

    /// Number of walks of length `n` ending at `(i, j)`, summed over marks.
    pub fn coeff(&self, i: i32, j: i32, n: usize) -> Result<Rational> {
        if n > self.trunc() {
            return Err(Error::BeyondTruncation {
                n,
                trunc: self.trunc(),
            });
        }
        Ok(self.coeffs[n].coeff_xy(i, j))
    }

    /// `CT`, `PT` or `NT` with respect to a grading, applied to every
    /// coefficient.
    pub fn project(&self, which: Part, g: Grading) -> Self {
        self.map(|p| match which {
            Part::Constant => p.filter(|k| g.grade(k) == 0),
            Part::Nonnegative => p.filter(|k| g.grade(k) >= 0),
            Part::Negative => p.filter(|k| g.grade(k) < 0),
        })
    }

    /// Splits every coefficient into its negative, zero and positive parts.
    pub fn split(&self, g: Grading) -> (TSeries, TSeries, TSeries) {
        let mut parts = (Vec::new(), Vec::new(), Vec::new());
        for p in &self.coeffs {
            let (n, z, q) = p.split(g);
            parts.0.push(n);
            parts.1.push(z);
            parts.2.push(q);
        }
        (
            TSeries::from_coeffs(parts.0),
            TSeries::from_coeffs(parts.1),
            TSeries::from_coeffs(parts.2),
        )
    }

    fn require_unit_constant(&self) -> Result<()> {
        if self.coeffs[0].is_one() {
            Ok(())
        } else {
            Err(Error::NonUnitConstant(self.coeffs[0].to_string()))
        }
    }

    fn require_zero_constant(&self) -> Result<()> {
        if self.coeffs[0].is_zero() {
            Ok(())
        } else {
            Err(Error::NonZeroConstant(self.coeffs[0].to_string()))
        }
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inv(&self) -> Result<Self> {
        self.require_unit_constant()?;
        let n_max = self.trunc();
        let mut out = vec![LaurentPoly::zero(); n_max + 1];
        out[0] = LaurentPoly::one();
        for n in 1..=n_max {
            let mut acc = LaurentPoly::zero();
            for k in 1..=n {
                let f = &self.coeffs[k];
                if f.is_zero() || out[n - k].is_zero() {
                    continue;
                }
                acc += &(f * &out[n - k]);
            }
            out[n] = -acc;
        }
        Ok(TSeries { coeffs: out })
    }

    /// `log f` for `f` with constant term 1, via `n L_n = n f_n - sum k L_k f_(n-k)`.
    pub fn log(&self) -> Result<Self> {
        self.require_unit_constant()?;
        let n_max = self.trunc();
        let mut out = vec![LaurentPoly::zero(); n_max + 1];
        for n in 1..=n_max {
            let mut acc = LaurentPoly::zero();
            for (k, l) in out.iter().enumerate().take(n).skip(1) {
                let f = &self.coeffs[n - k];
                if f.is_zero() || l.is_zero() {
                    continue;
                }
                acc += &(l * f).scale(&rat(k as i64));
            }
            out[n] = &self.coeffs[n] - &acc.scale(&one_over(n as i64));
        }
        Ok(TSeries { coeffs: out })
    }

    /// `exp u` for `u` with constant term 0, via `n g_n = sum k u_k g_(n-k)`.
    pub fn exp(&self) -> Result<Self> {
        self.require_zero_constant()?;
        let n_max = self.trunc();
        let mut out = vec![LaurentPoly::zero(); n_max + 1];
        out[0] = LaurentPoly::one();
        for n in 1..=n_max {
            let mut acc = LaurentPoly::zero();
            for k in 1..=n {
                let u = &self.coeffs[k];
                if u.is_zero() || out[n - k].is_zero() {
                    continue;
                }
                acc += &(u * &out[n - k]).scale(&rat(k as i64));
            }
            out[n] = acc.scale(&one_over(n as i64));
        }
        Ok(TSeries { coeffs: out })
    }

    /// Termwise `d/dt`; the truncation drops by one (stays 0 at order 0).
    pub fn deriv_t(&self) -> Self {
        if self.trunc() == 0 {
            return TSeries::zero(0);
        }
        TSeries {
            coeffs: (1..=self.trunc())
                .map(|n| self.coeffs[n].scale(&rat(n as i64)))
                .collect(),
        }
    }

    /// Termwise integral with zero constant; the truncation rises by one.
    pub fn integrate_t(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(LaurentPoly::zero());
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&one_over(n as i64 + 1)));
        }
        TSeries { coeffs }
    }

    /// Evaluates `sum c_k * arg^k` for an argument of positive order.
    pub fn poly_eval(coeffs: &[TSeries], arg: &TSeries) -> Result<Self> {
        arg.require_zero_constant()?;
        let trunc = coeffs
            .iter()
            .map(TSeries::trunc)
            .fold(arg.trunc(), usize::min);
        // Horner from the top coefficient down.
        let mut acc = TSeries::zero(trunc);
        for c in coeffs.iter().rev() {
            acc = &(&acc * arg) + c;
        }
        Ok(acc.truncate(trunc))
    }

    /// True when every coefficient counts paths.
    pub fn is_counting(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_counting)
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*t^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.trunc() + 1)
    }
}

impl<'a> Add<&'a TSeries> for &'a TSeries {
    type Output = TSeries;

    fn add(self, o: &TSeries) -> TSeries {
        TSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a TSeries> for &'a TSeries {
    type Output = TSeries;

    fn sub(self, o: &TSeries) -> TSeries {
        TSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &TSeries {
    type Output = TSeries;

    fn neg(self) -> TSeries {
        self.map(|p| -p)
    }
}

impl<'a> Mul<&'a TSeries> for &'a TSeries {
    type Output = TSeries;

    fn mul(self, o: &TSeries) -> TSeries {
        let trunc = self.trunc().min(o.trunc());
        let mut coeffs = vec![LaurentPoly::zero(); trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(trunc + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += &(a * b);
            }
        }
        TSeries { coeffs }
    }
}

impl Add for TSeries {
    type Output = TSeries;

    fn add(self, o: TSeries) -> TSeries {
        &self + &o
    }
}

impl Sub for TSeries {
    type Output = TSeries;

    fn sub(self, o: TSeries) -> TSeries {
        &self - &o
    }
}

impl Mul for TSeries {
    type Output = TSeries;

    fn mul(self, o: TSeries) -> TSeries {
        &self * &o
    }
}

/// Coefficients of a series whose terms are all constants, e.g. after
/// summing out `x` and `y`.
pub fn constant_coefficients(s: &TSeries) -> Vec<Rational> {
    s.coeffs()
        .iter()
        .map(|p| p.coeff(&ExponentKey::ZERO))
        .collect()
}

/// `sum_n c_n t^n` with every coefficient summed over all monomials.
pub fn total_counts(s: &TSeries) -> Vec<Rational> {
    s.coeffs()
        .iter()
        .map(|p| p.terms().fold(Rational::zero(), |acc, (_, c)| acc + c))
        .collect()
}

fn one_over(n: i64) -> Rational {
    Rational::one() / rat(n)
}
