//! Walk-counting pipelines built from generating functions and Gessel-pair
//! factorizations: free and constrained walks, bilateral walks, the slit
//! plane, the half plane avoiding the negative half line, strips, and the
//! r-ary tree family.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::factorize::{unique_factorization, Factors};
use crate::laurent::{rat, ExponentKey, Grading, LaurentPoly, Rational};
use crate::monoid::StepSet;
use crate::oracle;
use crate::series::{Part, TSeries};

/// A restriction on every position a walk visits after its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Never touch `(-k, 0)` for any `k >= 0`.
    AvoidHalfLine,
    /// Never go below `y = -d`.
    LowerY(i32),
    /// Never go above `y = f`.
    UpperY(i32),
    /// Never reach `y < 0`.
    UpperHalfPlane,
}

impl Constraint {
    pub fn allows(&self, x: i32, y: i32) -> bool {
        match *self {
            Constraint::AvoidHalfLine => !(y == 0 && x <= 0),
            Constraint::LowerY(d) => y >= -d,
            Constraint::UpperY(f) => y <= f,
            Constraint::UpperHalfPlane => y >= 0,
        }
    }

    /// Horizontal translates of allowed positions stay allowed.
    pub fn is_translation_invariant(&self) -> bool {
        !matches!(self, Constraint::AvoidHalfLine)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::AvoidHalfLine => write!(f, "avoid-halfline"),
            Constraint::LowerY(d) => write!(f, "lower-y={d}"),
            Constraint::UpperY(u) => write!(f, "upper-y={u}"),
            Constraint::UpperHalfPlane => write!(f, "upper-halfplane"),
        }
    }
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |v: &str| {
            v.trim()
                .parse::<i32>()
                .ok()
                .filter(|n| *n >= 0)
                .ok_or_else(|| Error::InvalidConstraint(s.to_string()))
        };
        match s {
            "avoid-halfline" => Ok(Constraint::AvoidHalfLine),
            "upper-halfplane" => Ok(Constraint::UpperHalfPlane),
            _ => {
                if let Some(v) = s.strip_prefix("lower-y=") {
                    Ok(Constraint::LowerY(num(v)?))
                } else if let Some(v) = s.strip_prefix("upper-y=") {
                    Ok(Constraint::UpperY(num(v)?))
                } else {
                    Err(Error::InvalidConstraint(s.to_string()))
                }
            }
        }
    }
}

/// `Gamma(S*) = 1 / (1 - t Gamma(S))`, truncated at `t^n`.
pub fn gf_free(steps: &StepSet, n: usize) -> TSeries {
    let kernel = &TSeries::one(n) - &TSeries::term(steps.weight(), 1, n);
    kernel.inv().expect("1 - t*Gamma(S) has constant term 1")
}

/// Generating function of the walks whose positions after the start obey
/// every constraint, by extending the frontier one step per order in `t`.
pub fn gf_constrained(steps: &StepSet, cons: &[Constraint], n: usize) -> TSeries {
    let weight = steps.weight();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut frontier = LaurentPoly::one();
    for k in 0..=n {
        if k > 0 {
            frontier =
                (&frontier * &weight).filter(|key| cons.iter().all(|c| c.allows(key.ex, key.ey)));
        }
        coeffs.push(frontier.clone());
    }
    TSeries::from_coeffs(coeffs)
}

/// Walks ending on the x-axis: `CT_y Gamma(S*)`.
pub fn bilateral(steps: &StepSet, n: usize) -> TSeries {
    gf_free(steps, n).project(Part::Constant, Grading::Y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlitPlaneResult {
    /// Slit-plane walks ending on the x-axis.
    pub s0: TSeries,
    /// `1 / (1 - B(1/x, t))`: walks whose last visit to the half line is
    /// their end point.
    pub binv: TSeries,
    /// All slit-plane walks.
    pub sxyt: TSeries,
    /// Bilateral walks.
    pub sx: TSeries,
}

impl SlitPlaneResult {
    /// `S0 * Binv == Sx`.
    pub fn bilateral_identity(&self) -> bool {
        (&self.s0 * &self.binv).agrees(&self.sx)
    }
}

pub fn slitplane(steps: &StepSet, n: usize) -> SlitPlaneResult {
    let sx = bilateral(steps, n);
    let f = unique_factorization(&sx, Grading::X).expect("bilateral series starts with 1");
    let binv = &f.zero * &f.minus;
    let kernel = &TSeries::one(n) - &TSeries::term(steps.weight(), 1, n);
    let sxyt = (&kernel * &binv)
        .inv()
        .expect("product of series with constant term 1");
    SlitPlaneResult {
        s0: f.plus,
        binv,
        sxyt,
        sx,
    }
}

/// One row of the `n * restricted = unrestricted` comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlaneRow {
    pub n: usize,
    /// Half-plane walks avoiding the half line, ending at `(p, 0)`.
    pub restricted: Rational,
    /// All walks ending at `(p, 0)`.
    pub unrestricted: Rational,
}

impl HalfPlaneRow {
    pub fn holds(&self) -> bool {
        rat(self.n as i64) * &self.restricted == self.unrestricted
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlaneResult {
    /// Smallest `p > 0` reached by some walk ending on `(p, 0)`.
    pub p: i32,
    /// Upper-half-plane walks ending on the x-axis.
    pub h0: TSeries,
    /// Loops of `h0` under the x-grading.
    pub j0: TSeries,
    /// Half-plane walks avoiding the half line, ending on the x-axis.
    pub jplus: TSeries,
    /// Whether `h0` computed by the constrained recurrence equals the zero
    /// factor of `Gamma(S*)` under the y-grading.
    pub h0_routes_agree: bool,
    pub rows: Vec<HalfPlaneRow>,
}

impl HalfPlaneResult {
    pub fn all_hold(&self) -> bool {
        self.h0_routes_agree && self.rows.iter().all(HalfPlaneRow::holds)
    }
}

pub fn halfplane_halfline(steps: &StepSet, n: usize) -> Result<HalfPlaneResult> {
    let p = oracle::minimal_positive_endpoint(&oracle::enumerate(steps, &[], n).on_axis())
        .ok_or(Error::NoPositiveEndpoint { trunc: n })?;
    let free = gf_free(steps, n);
    let h0 =
        gf_constrained(steps, &[Constraint::UpperHalfPlane], n).project(Part::Constant, Grading::Y);
    let by_factor = unique_factorization(&free, Grading::Y)?.zero;
    let j = unique_factorization(&h0, Grading::X)?;
    let rows = (1..=n)
        .map(|k| {
            Ok(HalfPlaneRow {
                n: k,
                restricted: j.plus.coeff(p, 0, k)?,
                unrestricted: free.coeff(p, 0, k)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HalfPlaneResult {
        p,
        h0_routes_agree: by_factor == h0,
        h0,
        j0: j.zero,
        jplus: j.plus,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripResult {
    /// Walks ending on the x-axis that stay inside the strip.
    pub gamma_h: TSeries,
    /// Its factorization under the x-grading.
    pub factors: Factors,
}

/// Axis-ending walks that never go below `y = -d` nor, when given, above
/// `y = f`.
pub fn strip_models(steps: &StepSet, d: i32, f: Option<i32>, n: usize) -> Result<StripResult> {
    let gamma_h =
        gf_constrained(steps, &strip_constraints(d, f), n).project(Part::Constant, Grading::Y);
    let factors = unique_factorization(&gamma_h, Grading::X)?;
    Ok(StripResult { gamma_h, factors })
}

pub fn strip_constraints(d: i32, f: Option<i32>) -> Vec<Constraint> {
    let mut cons = vec![Constraint::LowerY(d)];
    cons.extend(f.map(Constraint::UpperY));
    cons
}

/// `F(t)` for steps `(1, r)` and `(1, -1)`: paths that stay weakly above
/// the axis and end on it. Satisfies `F = 1 + t^(r+1) F^(r+1)`.
pub fn rary_family(r: u32, n: usize) -> TSeries {
    let steps = StepSet::from_pairs(&[(1, r as i32), (1, -1)]).expect("two distinct steps");
    let h = gf_free(&steps, n).map(LaurentPoly::forget_x);
    unique_factorization(&h, Grading::Y)
        .expect("constant term 1")
        .zero
}

/// `F - 1 - t^(r+1) F^(r+1)`.
pub fn rary_residual(f: &TSeries, r: u32) -> TSeries {
    let n = f.trunc();
    let mut pow = TSeries::one(n);
    for _ in 0..=r {
        pow = &pow * f;
    }
    let shifted = &TSeries::term(LaurentPoly::one(), r as usize + 1, n) * &pow;
    &(f - &TSeries::one(n)) - &shifted
}

/// Smallest `p > 0` such that a slit-plane walk of length at most `n` ends
/// at `(p, 0)`.
pub fn minimal_slit_endpoint(steps: &StepSet, n: usize) -> Option<i32> {
    oracle::minimal_positive_endpoint(&oracle::enumerate(steps, &[Constraint::AvoidHalfLine], n))
}

/// `[x^p] log S_x(x; t)`: slit-plane walks ending at `(p, 0)` when `p` is the
/// smallest such positive abscissa.
pub fn sp0(steps: &StepSet, p: i32, n: usize) -> Result<TSeries> {
    if let Some(found) = minimal_slit_endpoint(steps, n) {
        if found < p {
            return Err(Error::SmallerEndpoint {
                found,
                requested: p,
            });
        }
    }
    let log = bilateral(steps, n).forget_mark().log()?;
    Ok(log.map(|c| LaurentPoly::constant(c.coeff(&ExponentKey::xy(p, 0)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{GesselPair, MonoidFamily, Rho, Step};
    use crate::oracle::{enumerate, factor_census, CountTable};
    use crate::series::constant_coefficients;
    use num_bigint::BigInt;

    fn matches_table(s: &TSeries, t: &CountTable) -> bool {
        (0..=s.trunc().min(t.n_max())).all(|n| {
            let c = s.get(n).forget_mark();
            let from_series = c
                .terms()
                .all(|(k, v)| Rational::from_integer(BigInt::from(t.get(k.ex, k.ey, n))) == *v);
            let from_table = t.iter().filter(|e| e.2 == n).all(|(i, j, _, v)| {
                c.coeff_xy(i, j) == Rational::from_integer(BigInt::from(v.clone()))
            });
            from_series && from_table
        })
    }

    fn q2_steps() -> StepSet {
        StepSet::from_pairs(&[(1, 0), (-1, 0), (0, 2), (0, -1)]).unwrap()
    }

    #[test]
    fn parse_constraints() {
        assert_eq!("avoid-halfline".parse(), Ok(Constraint::AvoidHalfLine));
        assert_eq!("lower-y=2".parse(), Ok(Constraint::LowerY(2)));
        assert_eq!("upper-y=0".parse(), Ok(Constraint::UpperY(0)));
        assert_eq!("upper-halfplane".parse(), Ok(Constraint::UpperHalfPlane));
        assert!("lower-y=-1".parse::<Constraint>().is_err());
        assert!("sideways".parse::<Constraint>().is_err());
        for c in [
            Constraint::AvoidHalfLine,
            Constraint::LowerY(3),
            Constraint::UpperY(1),
        ] {
            assert_eq!(c.to_string().parse(), Ok(c));
        }
    }

    #[test]
    fn free_walk_spot_values() {
        let f = gf_free(&StepSet::square(), 3);
        assert_eq!(f.coeff(0, 0, 2).unwrap(), rat(4));
        assert!(f.get(0).is_one());
        let diag = StepSet::from_pairs(&[(1, 1), (1, -1)]).unwrap();
        let g = gf_free(&diag, 3);
        assert_eq!(g.get(3), &diag.weight().pow(3));
    }

    #[test]
    fn constrained_spot_values() {
        let sq = StepSet::square();
        let h = gf_constrained(&sq, &[Constraint::UpperHalfPlane], 3);
        assert_eq!(h.coeff(0, 0, 2).unwrap(), rat(3));
        assert_eq!(gf_constrained(&sq, &[], 6), gf_free(&sq, 6));
        let s = gf_constrained(&sq, &[Constraint::AvoidHalfLine], 3);
        assert_eq!(s.coeff(1, 0, 3).unwrap(), rat(5));
    }

    #[test]
    fn constrained_matches_oracle() {
        let sets = [
            StepSet::square(),
            q2_steps(),
            StepSet::from_pairs(&[(2, 1), (-1, 1), (0, -1)]).unwrap(),
        ];
        let families: Vec<Vec<Constraint>> = vec![
            vec![],
            vec![Constraint::AvoidHalfLine],
            vec![Constraint::UpperHalfPlane],
            vec![Constraint::AvoidHalfLine, Constraint::UpperHalfPlane],
            vec![Constraint::LowerY(1), Constraint::UpperY(2)],
        ];
        for s in &sets {
            for cons in &families {
                let gf = gf_constrained(s, cons, 8);
                assert!(matches_table(&gf, &enumerate(s, cons, 8)), "{s} {cons:?}");
            }
        }
    }

    #[test]
    fn bilateral_spot_values() {
        let b = bilateral(&StepSet::square(), 4);
        let expect = LaurentPoly::from_terms([
            (ExponentKey::xy(2, 0), rat(1)),
            (ExponentKey::ZERO, rat(4)),
            (ExponentKey::xy(-2, 0), rat(1)),
        ]);
        assert_eq!(b.get(2), &expect);
        assert!(b.get(0).is_one());
        let diag = StepSet::from_pairs(&[(1, 1), (1, -1)]).unwrap();
        let b = bilateral(&diag, 8);
        let central = [1, 2, 6, 20, 70];
        for (k, c) in central.iter().enumerate() {
            assert_eq!(b.coeff(2 * k as i32, 0, 2 * k).unwrap(), rat(*c));
        }
    }

    #[test]
    fn slit_plane_square_lattice() {
        let r = slitplane(&StepSet::square(), 7);
        assert_eq!(r.s0.coeff(1, 0, 1).unwrap(), rat(1));
        assert_eq!(r.s0.coeff(1, 0, 3).unwrap(), rat(5));
        assert_eq!(r.binv.coeff(-1, 0, 1).unwrap(), rat(1));
        assert!(r.bilateral_identity());
        let oracle = enumerate(&StepSet::square(), &[Constraint::AvoidHalfLine], 7);
        assert!(matches_table(&r.sxyt, &oracle));
        assert!(matches_table(&r.s0, &oracle.on_axis()));
    }

    #[test]
    fn slit_plane_q2_model() {
        let s = q2_steps();
        let r = slitplane(&s, 7);
        assert!(r.bilateral_identity());
        let oracle = enumerate(&s, &[Constraint::AvoidHalfLine], 7);
        assert!(matches_table(&r.sxyt, &oracle));
    }

    #[test]
    fn half_plane_square_lattice() {
        let r = halfplane_halfline(&StepSet::square(), 6).unwrap();
        assert_eq!(r.p, 1);
        assert!(r.h0_routes_agree);
        assert_eq!(r.rows[0].restricted, rat(1));
        assert_eq!(r.rows[0].unrestricted, rat(1));
        assert_eq!(r.rows[2].restricted, rat(3));
        assert_eq!(r.rows[2].unrestricted, rat(9));
        assert!(r.all_hold());
        // even lengths cannot reach (1, 0)
        assert_eq!(r.rows[1].restricted, rat(0));
        assert_eq!(r.rows[1].unrestricted, rat(0));
        let cons = [Constraint::UpperHalfPlane, Constraint::AvoidHalfLine];
        let oracle = enumerate(&StepSet::square(), &cons, 6).on_axis();
        assert!(matches_table(&r.jplus, &oracle));
    }

    #[test]
    fn half_plane_without_positive_endpoint() {
        let s = StepSet::from_pairs(&[(-1, 0), (0, 1)]).unwrap();
        assert!(matches!(
            halfplane_halfline(&s, 4),
            Err(Error::NoPositiveEndpoint { .. })
        ));
    }

    #[test]
    fn strips() {
        let sq = StepSet::square();
        let loose = strip_models(&sq, 10, None, 6).unwrap();
        assert_eq!(loose.gamma_h, bilateral(&sq, 6));

        let collapsed = strip_models(&sq, 0, Some(0), 6).unwrap();
        let horizontal = &LaurentPoly::xy(1, 0) + &LaurentPoly::xy(-1, 0);
        let expect = (&TSeries::one(6) - &TSeries::term(horizontal, 1, 6))
            .inv()
            .unwrap();
        assert_eq!(collapsed.gamma_h, expect);

        for (d, f) in [(0, None), (1, None), (1, Some(1)), (0, Some(2))] {
            let r = strip_models(&sq, d, f, 6).unwrap();
            let gp = GesselPair::new(
                sq.clone(),
                MonoidFamily::AxisReturns(strip_constraints(d, f)),
                Rho::X,
            )
            .unwrap();
            let census = factor_census(&gp, 6);
            assert!(matches_table(&r.factors.minus, &census.minus));
            assert!(matches_table(&r.factors.zero, &census.zero));
            assert!(matches_table(&r.factors.plus, &census.plus));
            assert!(matches_table(&r.gamma_h, &census.all));
        }
        let r = strip_models(&sq, 0, None, 2).unwrap();
        assert_eq!(r.factors.zero.coeff(0, 0, 2).unwrap(), rat(2));
    }

    #[test]
    fn rary_trees() {
        let f = rary_family(1, 8);
        assert_eq!(
            constant_coefficients(&f),
            [1, 0, 1, 0, 2, 0, 5, 0, 14].map(rat).to_vec()
        );
        assert!(rary_residual(&f, 1).is_zero());
        let f = rary_family(2, 9);
        assert_eq!(
            constant_coefficients(&f),
            [1, 0, 0, 1, 0, 0, 3, 0, 0, 12].map(rat).to_vec()
        );
        assert!(rary_residual(&f, 2).is_zero());
        for r in 1..=4 {
            assert!(rary_family(r, 5).get(0).is_one());
        }
    }

    #[test]
    fn marked_diagonal_walks_match_rary_family() {
        // rho(1,1) = r, rho(1,-1) = -1 reproduces the (1,r),(1,-1) model
        for r in 1..=3 {
            let s = StepSet::new(vec![Step::marked(1, 1, r), Step::marked(1, -1, -1)]).unwrap();
            let h = gf_free(&s, 8).map(|p| p.map_keys(|k| ExponentKey::new(0, 0, k.em)));
            let zero = unique_factorization(&h, Grading::Mark).unwrap().zero;
            assert_eq!(zero, rary_family(r as u32, 8));
        }
    }

    #[test]
    fn sp0_matches_slit_plane() {
        let s = sp0(&StepSet::square(), 1, 7).unwrap();
        let cs = constant_coefficients(&s);
        assert_eq!(cs[1], rat(1));
        assert_eq!(cs[3], rat(5));
        for n in (0..=7).step_by(2) {
            assert_eq!(cs[n], rat(0));
        }
        let r = slitplane(&StepSet::square(), 7);
        for (n, c) in cs.iter().enumerate() {
            assert_eq!(*c, r.s0.coeff(1, 0, n).unwrap());
        }
        let q = constant_coefficients(&sp0(&q2_steps(), 1, 3).unwrap());
        assert_eq!(&q[1..], &[rat(1), rat(0), rat(1)]);
    }

    #[test]
    fn sp0_rejects_non_minimal_p() {
        assert!(matches!(
            sp0(&StepSet::square(), 2, 5),
            Err(Error::SmallerEndpoint {
                found: 1,
                requested: 2
            })
        ));
    }

    #[test]
    fn pipeline_counts_are_integral() {
        let r = slitplane(&StepSet::square(), 6);
        for s in [&r.s0, &r.binv, &r.sxyt, &r.sx] {
            assert!(s.is_counting());
        }
        assert!(!r.sx.log().unwrap().is_counting());
    }
}
