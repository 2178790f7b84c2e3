//! Kernel-method tools: the unique root of positive order of a polynomial
//! kernel `G(y, t)`, the residue evaluation
//! `CT_y [y F(y,t) / G(y,t)] = F(Y) / G_y(Y)`, and the explicit model with
//! steps `(1,0), (-1,0), (0,2), (0,-1)`.
//!
//! In the explicit model `b = x + 1/x` and `Y` solves `Y = t (Y^3 + b Y + 1)`.

use num_bigint::{BigInt, BigUint};
use num_integer::{binomial, multinomial};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{format_rational, rat, ratio, ExponentKey, Grading, LaurentPoly, Rational};
use crate::series::{Part, TSeries};

/// `G(y, t) = sum_k c_k(t) y^k` with `G(y, 0) = a y + (higher powers of y)`,
/// `a` a nonzero rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPoly {
    coeffs: Vec<TSeries>,
    lead: Rational,
}

impl KernelPoly {
    pub fn new(coeffs: Vec<TSeries>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidKernel(
                "degree in y must be at least 1".into(),
            ));
        }
        if !coeffs[0].get(0).is_zero() {
            return Err(Error::InvalidKernel(format!(
                "G(0, 0) must vanish, found {}",
                coeffs[0].get(0)
            )));
        }
        let lead = coeffs[1]
            .get(0)
            .as_constant()
            .filter(|a| !a.is_zero())
            .ok_or_else(|| {
                Error::InvalidKernel(format!(
                    "coefficient of y in G(y, 0) must be a nonzero constant, found {}",
                    coeffs[1].get(0)
                ))
            })?;
        if coeffs
            .iter()
            .flat_map(|c| c.coeffs())
            .any(|p| p.terms().any(|(k, _)| k.ey != 0))
        {
            return Err(Error::InvalidKernel(
                "coefficients must not involve the kernel variable y".into(),
            ));
        }
        Ok(KernelPoly { coeffs, lead })
    }

    pub fn coeffs(&self) -> &[TSeries] {
        &self.coeffs
    }

    /// The coefficient `a` of `y` in `G(y, 0)`.
    pub fn lead(&self) -> &Rational {
        &self.lead
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `G(arg, t)` for `arg` of positive order.
    pub fn eval(&self, arg: &TSeries) -> Result<TSeries> {
        TSeries::poly_eval(&self.coeffs, arg)
    }

    /// Coefficients of `dG/dy`.
    pub fn derivative(&self) -> Vec<TSeries> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&rat(k as i64)))
            .collect()
    }
}

/// The unique `Y` in `t K[[t]]` with `G(Y, t) = 0`, by iterating
/// `Y <- Y - G(Y)/a`; each pass fixes one more order.
pub fn solve_positive_root(g: &KernelPoly, n: usize) -> Result<TSeries> {
    let inv_a = Rational::one() / g.lead();
    let mut y = TSeries::zero(n);
    for _ in 0..=n {
        let next = &y - &g.eval(&y)?.truncate(n).scale(&inv_a);
        if next == y {
            break;
        }
        y = next;
    }
    Ok(y)
}

/// `F(Y, t) / G_y(Y, t)` where `Y` is the root of positive order of `G`.
pub fn ct_residue(f: &[TSeries], g: &KernelPoly, n: usize) -> Result<TSeries> {
    let y = solve_positive_root(g, n)?;
    let inv_a = Rational::one() / g.lead();
    let dg = TSeries::poly_eval(&g.derivative(), &y)?
        .truncate(n)
        .scale(&inv_a);
    let num = TSeries::poly_eval(f, &y)?.truncate(n);
    Ok((&num * &dg.inv()?).scale(&inv_a))
}

/// `CT_y [y F(y,t) / G(y,t)]` by expanding `1/G` as a series in `t` with
/// Laurent-polynomial coefficients in `y`.
///
/// Needs `G(y, 0) = a y` exactly, so that `y/G` has such an expansion.
pub fn ct_direct(f: &[TSeries], g: &KernelPoly, n: usize) -> Result<TSeries> {
    for (k, c) in g.coeffs().iter().enumerate() {
        if k != 1 && !c.get(0).is_zero() {
            return Err(Error::InvalidKernel(format!(
                "direct expansion needs G(y,0) = a*y, but y^{k} has t^0 coefficient {}",
                c.get(0)
            )));
        }
    }
    let inv_a = Rational::one() / g.lead();
    // y/G = (1/a) / (1 + U), U = (G - a y) / (a y)
    let mut one_plus_u = TSeries::one(n);
    for (k, c) in g.coeffs().iter().enumerate() {
        let mut c = c.truncate(n);
        if k == 1 {
            c = &c - &TSeries::constant(LaurentPoly::constant(g.lead().clone()), n);
        }
        let shifted = c.map(|p| p.shift(ExponentKey::xy(0, k as i32 - 1)));
        one_plus_u = &one_plus_u + &shifted.scale(&inv_a);
    }
    let y_over_g = one_plus_u.inv()?.scale(&inv_a);
    let mut fy = TSeries::zero(n);
    for (k, c) in f.iter().enumerate() {
        fy = &fy + &c.truncate(n).map(|p| p.shift(ExponentKey::xy(0, k as i32)));
    }
    Ok((&y_over_g * &fy).project(Part::Constant, Grading::Y))
}

/// `b = x + 1/x`.
pub fn b_poly() -> LaurentPoly {
    &LaurentPoly::xy(1, 0) + &LaurentPoly::xy(-1, 0)
}

/// Expands `sum_k c_k b^k` as a Laurent polynomial in `x`.
pub fn expand_in_b(cs: &[Rational]) -> LaurentPoly {
    let b = b_poly();
    let mut acc = LaurentPoly::zero();
    let mut pow = LaurentPoly::one();
    for c in cs {
        acc += &pow.scale(c);
        pow = &pow * &b;
    }
    acc
}

/// `y - t (y^3 + b y + 1)`.
pub fn q2_kernel(n: usize) -> KernelPoly {
    let t = TSeries::t(n);
    let one = TSeries::one(n);
    let bt = TSeries::term(b_poly(), 1, n);
    KernelPoly::new(vec![-&t, &one - &bt, TSeries::zero(n), -&t])
        .expect("q2 kernel satisfies the root hypothesis")
}

/// `S_x = 1 / (1 - t b - 3 t Y^2)` via the residue formula.
pub fn q2_bilateral(n: usize) -> Result<TSeries> {
    ct_residue(&[TSeries::one(n)], &q2_kernel(n), n)
}

/// `d/dt log S_x` assembled as
/// `((4b^3+27) t^2 - 8 t b^2 + 4 b + 9 t Y) / (4 (1 - b t)^3 - 27 t^3)`.
pub fn q2_logderiv(n: usize) -> Result<TSeries> {
    let y = solve_positive_root(&q2_kernel(n), n)?;
    let b = b_poly();
    let b2 = &b * &b;
    let b3 = &b2 * &b;
    let numer = TSeries::from_coeffs(vec![
        b.scale(&rat(4)),
        b2.scale(&rat(-8)),
        &b3.scale(&rat(4)) + &LaurentPoly::constant(rat(27)),
    ])
    .truncate(n);
    let numer = &numer + &(&TSeries::t(n) * &y).scale(&rat(9));
    let one_minus_bt = &TSeries::one(n) - &TSeries::term(b, 1, n);
    let cube = &(&one_minus_bt * &one_minus_bt) * &one_minus_bt;
    // 4 (1 - b t)^3 - 27 t^3 = 4 * denom
    let denom = &cube - &TSeries::term(LaurentPoly::constant(ratio(27, 4)), 3, n);
    Ok((&numer * &denom.inv()?).scale(&(Rational::one() / rat(4))))
}

/// `S_{1,0}(t) = [x] log S_x`, with `log S_x` obtained by integrating
/// [`q2_logderiv`] from `log S_x(x, 0) = 0`.
pub fn q2_s10(n: usize) -> Result<TSeries> {
    if n == 0 {
        return Ok(TSeries::zero(0));
    }
    let log = q2_logderiv(n - 1)?.integrate_t();
    Ok(log.map(|c| LaurentPoly::constant(c.coeff(&ExponentKey::xy(1, 0)))))
}

/// Coefficients in powers of `b` of `[t^n] Y` by Lagrange inversion,
/// `(1/n) [y^(n-1)] (1 + b y + y^3)^n`.
pub fn lagrange_y_coeff_b(n: usize) -> Vec<Rational> {
    let mut v = printed_y_coeff_b(n);
    let inv = Rational::one() / rat(n as i64);
    for c in &mut v {
        *c *= &inv;
    }
    v
}

/// `[t^n] Y` as a Laurent polynomial in `x`.
pub fn lagrange_y_coeff(n: usize) -> LaurentPoly {
    expand_in_b(&lagrange_y_coeff_b(n))
}

/// `sum_k multinomial(n; k, 2k+1, n-3k-1) b^(n-3k-1)`, the printed
/// expansion without the `1/n` factor.
pub fn printed_y_coeff_b(n: usize) -> Vec<Rational> {
    assert!(n >= 1, "Y has no constant term");
    let mut v = vec![Rational::zero(); n];
    for k in 0..=(n - 1) / 3 {
        let m = multinomial::<BigUint>(&[
            BigUint::from(k),
            BigUint::from(2 * k + 1),
            BigUint::from(n - 3 * k - 1),
        ]);
        v[n - 3 * k - 1] += big(m);
    }
    v
}

fn big(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `C(top, bottom)`, zero outside `0 <= bottom <= top`.
fn binom(top: i64, bottom: i64) -> Rational {
    if top < 0 || bottom < 0 || bottom > top {
        return Rational::zero();
    }
    big(binomial(
        BigUint::from(top as u64),
        BigUint::from(bottom as u64),
    ))
}

/// `C(top, half_bottom / 2)`, zero when the lower index is a half-integer.
fn binom_half(top: i64, half_bottom: i64) -> Rational {
    if half_bottom.rem_euclid(2) != 0 {
        return Rational::zero();
    }
    binom(top, half_bottom / 2)
}

fn pow_ratio(base: i64, e: u32, den_base: i64, den_e: u32) -> Rational {
    Rational::new(BigInt::from(base).pow(e), BigInt::from(den_base).pow(den_e))
}

/// Literal evaluation of the printed three-part closed form for walks of
/// length `big_n` ending at `(1, 0)`.
pub fn closed_form_a10(big_n: usize) -> Rational {
    assert!(big_n >= 1);
    let nn = big_n as i64;
    let mut total = binom_half(nn, nn - 1);
    for n in 1..=nn / 3 {
        let c = pow_ratio(3, (3 * n - 1) as u32, 2, (2 * n) as u32) / rat(n);
        total += c * binom(nn - 1, 3 * n - 1) * binom_half(nn - 3 * n, nn - 3 * n);
    }
    for n in 1..=nn {
        if nn - n - 2 < 0 {
            continue;
        }
        for m in 0..=(nn - n - 2) / 3 {
            for k in 0..=(n - 1) / 3 {
                let c = pow_ratio(3, (3 * m + 2) as u32, 2, (2 * m + 2) as u32) / rat(n * nn);
                let multi = big(multinomial::<BigUint>(&[
                    BigUint::from(k as u64),
                    BigUint::from((2 * k + 1) as u64),
                    BigUint::from((n - 3 * k - 1) as u64),
                ]));
                total += c
                    * multi
                    * binom(nn - n, 3 * m + 2)
                    * binom_half(nn - 3 * m - 3 * k - 3, nn - 3 * m - 3 * k - 4);
            }
        }
    }
    total
}

/// `closed_form_a10(N)` for `N = 1..=n_max`.
pub fn closed_form_a10_table(n_max: usize) -> Vec<Rational> {
    (1..=n_max).map(closed_form_a10).collect()
}

/// A formula value that disagrees with the verified pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub name: &'static str,
    pub n: usize,
    pub literal: String,
    pub verified: String,
}

/// Orders where the literal closed form differs from the pipeline counts.
pub fn closed_form_mismatches(n: usize) -> Result<Vec<Mismatch>> {
    let s10 = q2_s10(n)?;
    Ok((1..=n)
        .filter_map(|k| {
            let lit = closed_form_a10(k);
            let ver = s10.get(k).coeff(&ExponentKey::ZERO);
            (lit != ver).then(|| Mismatch {
                name: "closed-form-a10",
                n: k,
                literal: format_rational(&lit),
                verified: format_rational(&ver),
            })
        })
        .collect())
}

/// Orders where the printed expansion of `Y` differs from the root found by
/// iteration.
pub fn y_expansion_mismatches(n: usize) -> Result<Vec<Mismatch>> {
    let y = solve_positive_root(&q2_kernel(n), n)?;
    Ok((1..=n)
        .filter_map(|k| {
            let lit = expand_in_b(&printed_y_coeff_b(k));
            let ver = y.get(k);
            (lit != *ver).then(|| Mismatch {
                name: "printed-y-expansion",
                n: k,
                literal: render_b(&printed_y_coeff_b(k)),
                verified: render_b(&lagrange_y_coeff_b(k)),
            })
        })
        .collect())
}

/// `sum c_k b^k` as text.
pub fn render_b(cs: &[Rational]) -> String {
    let parts: Vec<String> = cs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => format_rational(c),
            1 => format!("{}*b", format_rational(c)),
            _ => format!("{}*b^{k}", format_rational(c)),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
