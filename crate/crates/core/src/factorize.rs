//! Unique factorization `h = h_minus * h_zero * h_plus` of a series with
//! constant term 1 with respect to a grading, computed as the exponentials
//! of the three graded parts of `log h`.

use crate::error::Result;
use crate::laurent::Grading;
use crate::series::TSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factors {
    pub minus: TSeries,
    pub zero: TSeries,
    pub plus: TSeries,
}

impl Factors {
    pub fn product(&self) -> TSeries {
        &(&self.minus * &self.zero) * &self.plus
    }
}

pub fn unique_factorization(h: &TSeries, grading: Grading) -> Result<Factors> {
    let (neg, zero, pos) = h.log()?.split(grading);
    Ok(Factors {
        minus: neg.exp()?,
        zero: zero.exp()?,
        plus: pos.exp()?,
    })
}
