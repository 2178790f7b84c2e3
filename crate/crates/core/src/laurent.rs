//! Sparse Laurent polynomials in `x`, `y` and a mark variable over exact rationals.
//!
//! The mark slot records the value of a monoid homomorphism `rho` on a path;
//! when `rho` is an endpoint functional the slot is usually left at zero and
//! the grading is read off `x` and `y` directly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact arbitrary-precision rational number. Always kept in lowest terms
/// with a positive denominator.
pub type Rational = BigRational;

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `num/den`, reduced.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exponent of a monomial `x^ex y^ey m^em`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentKey {
    pub ex: i32,
    pub ey: i32,
    pub em: i32,
}

impl ExponentKey {
    pub const ZERO: ExponentKey = ExponentKey {
        ex: 0,
        ey: 0,
        em: 0,
    };

    pub const fn new(ex: i32, ey: i32, em: i32) -> Self {
        ExponentKey { ex, ey, em }
    }

    pub const fn xy(ex: i32, ey: i32) -> Self {
        ExponentKey { ex, ey, em: 0 }
    }
}

impl Add for ExponentKey {
    type Output = ExponentKey;

    fn add(self, o: ExponentKey) -> ExponentKey {
        ExponentKey::new(self.ex + o.ex, self.ey + o.ey, self.em + o.em)
    }
}

/// The integer grading used to split monomials into negative, zero and
/// positive parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    X,
    Y,
    Mark,
    /// `alpha * ex + beta * ey`.
    Functional(i32, i32),
}

impl Grading {
    pub fn grade(&self, k: &ExponentKey) -> i64 {
        match *self {
            Grading::X => k.ex as i64,
            Grading::Y => k.ey as i64,
            Grading::Mark => k.em as i64,
            Grading::Functional(a, b) => a as i64 * k.ex as i64 + b as i64 * k.ey as i64,
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grading::X => write!(f, "x"),
            Grading::Y => write!(f, "y"),
            Grading::Mark => write!(f, "mark"),
            Grading::Functional(a, b) => write!(f, "{a},{b}"),
        }
    }
}

impl FromStr for Grading {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "x" => Ok(Grading::X),
            "y" => Ok(Grading::Y),
            "mark" => Ok(Grading::Mark),
            _ => {
                let bad = || crate::Error::InvalidGrading(s.to_string());
                let (a, b) = t.split_once(',').ok_or_else(bad)?;
                Ok(Grading::Functional(
                    a.parse().map_err(|_| bad())?,
                    b.parse().map_err(|_| bad())?,
                ))
            }
        }
    }
}

/// A finite sum of monomials with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<ExponentKey, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(ExponentKey::ZERO, c)
    }

    pub fn monomial(k: ExponentKey, c: Rational) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(k, c);
        p
    }

    /// `x^ex y^ey` with coefficient one.
    pub fn xy(ex: i32, ey: i32) -> Self {
        Self::monomial(ExponentKey::xy(ex, ey), Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (ExponentKey, Rational)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    /// Adds `c * key` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, k: ExponentKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&ExponentKey::ZERO)
                .is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentKey, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial, zero when absent.
    pub fn coeff(&self, k: &ExponentKey) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `x^i y^j`, summed over the mark slot.
    pub fn coeff_xy(&self, i: i32, j: i32) -> Rational {
        self.terms
            .range(ExponentKey::new(i, j, i32::MIN)..=ExponentKey::new(i, j, i32::MAX))
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }

    /// The constant coefficient if the polynomial is a pure constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&ExponentKey::ZERO).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies every term by the monomial `key`.
    pub fn shift(&self, by: ExponentKey) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k + by, v.clone()))
                .collect(),
        }
    }

    /// Splits into strictly negative, zero and strictly positive grade parts.
    pub fn split(&self, g: Grading) -> (LaurentPoly, LaurentPoly, LaurentPoly) {
        let (mut neg, mut zero, mut pos) = (
            LaurentPoly::zero(),
            LaurentPoly::zero(),
            LaurentPoly::zero(),
        );
        for (k, c) in &self.terms {
            let part = match g.grade(k).signum() {
                -1 => &mut neg,
                0 => &mut zero,
                _ => &mut pos,
            };
            part.terms.insert(*k, c.clone());
        }
        (neg, zero, pos)
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter<F: Fn(&ExponentKey) -> bool>(&self, keep: F) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Applies an exponent map, adding coefficients that collide.
    pub fn map_keys<F: Fn(&ExponentKey) -> ExponentKey>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (f(k), c.clone())))
    }

    /// Sets the mark variable to one.
    pub fn forget_mark(&self) -> Self {
        self.map_keys(|k| ExponentKey::new(k.ex, k.ey, 0))
    }

    /// Sets `x` to one.
    pub fn forget_x(&self) -> Self {
        self.map_keys(|k| ExponentKey::new(0, k.ey, k.em))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// True when every coefficient is a nonnegative integer.
    pub fn is_counting(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (name, e) in [("x", k.ex), ("y", k.ey), ("m", k.em)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(mut self, o: LaurentPoly) -> LaurentPoly {
        self += &o;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, o: &LaurentPoly) {
        for (k, c) in &o.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, -c);
        }
        r
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut acc: BTreeMap<ExponentKey, Rational> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                *acc.entry(*ka + *kb).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: acc }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}
