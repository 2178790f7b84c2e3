//! Self-check harness: recomputes every identity the library relies on at a
//! chosen truncation order and compares against the brute-force oracle.
//!
//! Two printed formulas are known to disagree with the verified counts; they
//! are reported as expected mismatches rather than failures.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::factorize::unique_factorization;
use crate::kernel::{self, KernelPoly};
use crate::laurent::{rat, ExponentKey, Grading, LaurentPoly, Rational};
use crate::monoid::{for_each_path, GesselPair, MonoidFamily, Rho, Step, StepSet};
use crate::oracle::{self, CountTable};
use crate::series::{constant_coefficients, TSeries};
use crate::walks::{self, Constraint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A documented disagreement between a printed formula and the
    /// verified pipeline.
    KnownMismatch,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::KnownMismatch => "KNOWN-MISMATCH",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub trunc: usize,
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.status == Status::Fail)
    }

    fn check<F: FnOnce() -> Result<(bool, String)>>(&mut self, name: &str, f: F) {
        let start = Instant::now();
        let (status, detail) = match f() {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        self.outcomes.push(Outcome {
            name: name.to_string(),
            status,
            detail,
            millis: start.elapsed().as_millis(),
        });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(
                f,
                "{:<15} {:<34} {} ({} ms)",
                o.status, o.name, o.detail, o.millis
            )?;
        }
        let fails = self.failures().count();
        let known = self
            .outcomes
            .iter()
            .filter(|o| o.status == Status::KnownMismatch)
            .count();
        write!(
            f,
            "{} checks at N = {}: {} failed, {} known mismatches",
            self.outcomes.len(),
            self.trunc,
            fails,
            known
        )
    }
}

/// Step sets used throughout the harness.
pub fn square() -> StepSet {
    StepSet::square()
}

/// `(1,0), (-1,0), (0,2), (0,-1)`.
pub fn q2_steps() -> StepSet {
    StepSet::from_pairs(&[(1, 0), (-1, 0), (0, 2), (0, -1)]).unwrap()
}

/// `(2,1), (-1,1), (0,-1)`.
pub fn skew_steps() -> StepSet {
    StepSet::from_pairs(&[(2, 1), (-1, 1), (0, -1)]).unwrap()
}

pub fn east_west() -> StepSet {
    StepSet::new(vec![Step::new(1, 0), Step::new(-1, 0)]).unwrap()
}

/// Exact agreement of a series (summed over marks) with a count table,
/// in both directions, for lengths up to the smaller bound.
pub fn series_matches_table(s: &TSeries, t: &CountTable) -> bool {
    (0..=s.trunc().min(t.n_max())).all(|n| {
        let c = s.get(n).forget_mark();
        c.terms()
            .all(|(k, v)| k.em == 0 && *v == big(t.get(k.ex, k.ey, n)))
            && t.iter()
                .filter(|e| e.2 == n)
                .all(|(i, j, _, v)| c.coeff_xy(i, j) == big(v.clone()))
    })
}

fn big(n: num_bigint::BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn small_poly<R: Rng>(rng: &mut R, max_terms: usize) -> LaurentPoly {
    let k = rng.gen_range(0..=max_terms);
    LaurentPoly::from_terms((0..k).map(|_| {
        (
            ExponentKey::new(
                rng.gen_range(-1..=1),
                rng.gen_range(-1..=1),
                rng.gen_range(-1..=1),
            ),
            rat(rng.gen_range(-2..=2)),
        )
    }))
}

/// `1 + sum_{k=1..3} p_k t^k` with small random Laurent coefficients.
pub fn random_unit_series<R: Rng>(rng: &mut R, n: usize) -> TSeries {
    let mut coeffs = vec![LaurentPoly::zero(); n + 1];
    coeffs[0] = LaurentPoly::one();
    for c in coeffs.iter_mut().skip(1).take(3) {
        *c = small_poly(rng, 2);
    }
    TSeries::from_coeffs(coeffs)
}

pub fn random_grading<R: Rng>(rng: &mut R) -> Grading {
    match rng.gen_range(0..4) {
        0 => Grading::X,
        1 => Grading::Y,
        2 => Grading::Mark,
        _ => Grading::Functional(rng.gen_range(-2..=2), rng.gen_range(-2..=2)),
    }
}

fn x_only_poly<R: Rng>(rng: &mut R) -> LaurentPoly {
    let k = rng.gen_range(0..=2);
    LaurentPoly::from_terms((0..k).map(|_| {
        (
            ExponentKey::xy(rng.gen_range(-1..=1), 0),
            rat(rng.gen_range(-2..=2)),
        )
    }))
}

/// A random `(F, G)` pair with `G(y, 0) = a y`, `G` of degree 1 to 4 in `y`
/// and `F` of degree at most 4, with small integer coefficients that may
/// involve `x`.
pub fn random_kernel_instance<R: Rng>(rng: &mut R, n: usize) -> (Vec<TSeries>, KernelPoly) {
    let low_order = |rng: &mut R, from: usize| {
        let mut coeffs = vec![LaurentPoly::zero(); n + 1];
        for c in coeffs.iter_mut().skip(from).take(2) {
            *c = x_only_poly(rng);
        }
        TSeries::from_coeffs(coeffs)
    };
    let deg = rng.gen_range(1..=4);
    let mut g = Vec::with_capacity(deg + 1);
    let mut c0 = low_order(rng, 1);
    if c0.is_zero() {
        c0 = -&TSeries::t(n);
    }
    g.push(c0);
    let a = [1, -1, 2, 3][rng.gen_range(0..4)];
    g.push(&TSeries::constant(LaurentPoly::constant(rat(a)), n) + &low_order(rng, 1));
    for _ in 2..=deg {
        g.push(low_order(rng, 1));
    }
    let f_deg = rng.gen_range(0..=4);
    let f = (0..=f_deg).map(|_| low_order(rng, 0)).collect();
    (
        f,
        KernelPoly::new(g).expect("generated kernel is admissible"),
    )
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn all_ok<I: IntoIterator<Item = bool>>(it: I) -> bool {
    it.into_iter().all(|b| b)
}

/// Runs every check at truncation order `n`. Brute-force censuses are capped
/// at length 8 and path bijection sweeps at length 6.
pub fn run(n: usize) -> Report {
    let mut r = Report {
        trunc: n,
        outcomes: Vec::new(),
    };
    let census_n = n.min(8);

    r.check("laurent-ring-axioms", || {
        let mut g = rng(1);
        let mut ok = true;
        for _ in 0..50 {
            let (p, q, s) = (
                small_poly(&mut g, 4),
                small_poly(&mut g, 4),
                small_poly(&mut g, 4),
            );
            ok &= &(&p * &q) * &s == &p * &(&q * &s);
            ok &= &p * &q == &q * &p;
            ok &= &p * &(&q + &s) == &(&p * &q) + &(&p * &s);
            let gr = random_grading(&mut g);
            let (a, b, c) = p.split(gr);
            ok &= &(&a + &b) + &c == p;
        }
        Ok((ok, "50 random triples".into()))
    });

    r.check("series-inverse-exp-log", || {
        let f = walks::gf_free(&square(), n);
        let h = walks::bilateral(&q2_steps(), n);
        let ok = &f * &f.inv()? == TSeries::one(n)
            && f.log()?.exp()? == f
            && (&f * &h).log()? == &f.log()? + &h.log()?
            && f.is_counting();
        Ok((ok, "Gamma(S*) square lattice, bilateral q=2".into()))
    });

    r.check("unique-factorization", || {
        let mut g = rng(2);
        let mut ok = true;
        for _ in 0..25 {
            let h = random_unit_series(&mut g, n);
            let gr = random_grading(&mut g);
            let f = unique_factorization(&h, gr)?;
            ok &= f.product() == h;
            for (part, sign) in [(&f.minus, -1), (&f.zero, 0), (&f.plus, 1)] {
                ok &= part.coeffs()[1..]
                    .iter()
                    .all(|c| c.terms().all(|(k, _)| gr.grade(k).signum() == sign));
            }
            let again = unique_factorization(&(&f.zero * &f.plus), gr)?;
            ok &= again.minus == TSeries::one(n) && again.zero == f.zero && again.plus == f.plus;
        }
        Ok((ok, "25 random series".into()))
    });

    r.check("constrained-vs-oracle", || {
        let families: [&[Constraint]; 5] = [
            &[],
            &[Constraint::AvoidHalfLine],
            &[Constraint::UpperHalfPlane],
            &[Constraint::AvoidHalfLine, Constraint::UpperHalfPlane],
            &[Constraint::LowerY(1), Constraint::UpperY(2)],
        ];
        let ok = all_ok([square(), q2_steps(), skew_steps()].iter().flat_map(|s| {
            families.iter().map(move |c| {
                series_matches_table(&walks::gf_constrained(s, c, n), &oracle::enumerate(s, c, n))
            })
        }));
        Ok((ok, "3 step sets x 5 constraint families".into()))
    });

    for (name, s) in [("square", square()), ("q2", q2_steps())] {
        r.check(&format!("slit-plane-identities[{name}]"), || {
            let res = walks::slitplane(&s, n);
            let kernel = &TSeries::one(n) - &TSeries::term(s.weight(), 1, n);
            let f = unique_factorization(&res.sx, Grading::X)?;
            let closes = &(&(&res.sxyt * &kernel) * &f.zero) * &f.minus == TSeries::one(n);
            let oracle = oracle::enumerate(&s, &[Constraint::AvoidHalfLine], n);
            let ok = res.bilateral_identity()
                && closes
                && series_matches_table(&res.sxyt, &oracle)
                && series_matches_table(&res.s0, &oracle.on_axis());
            Ok((
                ok,
                "S0*Binv = Sx, Sxyt*(1-Gamma)*zero*minus = 1, oracle".into(),
            ))
        });
    }

    for (name, s) in [
        ("square", square()),
        ("q2", q2_steps()),
        ("skew", skew_steps()),
    ] {
        r.check(&format!("half-plane-1/n[{name}]"), || {
            let h = walks::halfplane_halfline(&s, n)?;
            let oracle = oracle::enumerate(
                &s,
                &[Constraint::UpperHalfPlane, Constraint::AvoidHalfLine],
                n,
            )
            .on_axis();
            let ok = h.all_hold() && series_matches_table(&h.jplus, &oracle);
            Ok((ok, format!("p = {}, n <= {n}", h.p)))
        });
    }

    r.check("census-vs-factors", || {
        let mut ok = true;
        for s in [east_west(), square()] {
            for gp in [
                GesselPair::free(s.clone(), Rho::X),
                GesselPair::axis_returns(s.clone(), Rho::X),
            ] {
                let census = oracle::factor_census(&gp, census_n);
                let h = match gp.family() {
                    MonoidFamily::Free => walks::gf_free(&s, census_n),
                    MonoidFamily::AxisReturns(_) => walks::bilateral(&s, census_n),
                };
                let f = unique_factorization(&h, Grading::X)?;
                ok &= census.minus.convolve(&census.zero).convolve(&census.plus) == census.all;
                ok &= series_matches_table(&h, &census.all);
                ok &= series_matches_table(&f.minus, &census.minus);
                ok &= series_matches_table(&f.zero, &census.zero);
                ok &= series_matches_table(&f.plus, &census.plus);
            }
        }
        Ok((
            ok,
            format!("{{E,W}} and square lattice under rho_x, n <= {census_n}"),
        ))
    });

    r.check("path-factorization-bijection", || {
        let mut ok = true;
        let sweep = n.min(6);
        for gp in [
            GesselPair::free(square(), Rho::X),
            GesselPair::axis_returns(square(), Rho::Functional(1, 1)),
        ] {
            let mut seen = std::collections::HashSet::new();
            for_each_path(gp.steps(), sweep, |pi| {
                if let Ok(f) = gp.factorize(pi) {
                    ok &= f.minus.concat(&f.zero).concat(&f.plus) == *pi;
                    ok &= seen.insert((f.minus, f.zero, f.plus));
                }
            });
        }
        Ok((ok, format!("all paths of length <= {sweep}")))
    });

    r.check("rary-family", || {
        let ok = (1..=3).all(|k| walks::rary_residual(&walks::rary_family(k, n), k).is_zero());
        Ok((ok, "F = 1 + t^(r+1) F^(r+1) for r = 1, 2, 3".into()))
    });

    r.check("sp0-vs-slit-plane", || {
        let mut ok = true;
        for s in [square(), q2_steps()] {
            let p = walks::minimal_slit_endpoint(&s, n).unwrap_or(1);
            let sp = walks::sp0(&s, p, n)?;
            let s0 = walks::slitplane(&s, n).s0;
            ok &=
                (0..=n).all(|k| sp.get(k).coeff(&ExponentKey::ZERO) == s0.coeff(p, 0, k).unwrap());
        }
        Ok((ok, "square and q2 at minimal p".into()))
    });

    r.check("kernel-residue", || {
        let mut g = rng(3);
        let mut ok = true;
        for _ in 0..20 {
            let (f, k) = random_kernel_instance(&mut g, n);
            let y = kernel::solve_positive_root(&k, n)?;
            ok &= k.eval(&y)?.truncate(n).is_zero();
            ok &= kernel::ct_residue(&f, &k, n)? == kernel::ct_direct(&f, &k, n)?;
        }
        Ok((ok, "20 random (F, G)".into()))
    });

    r.check("q2-logderiv", || {
        let sx = walks::bilateral(&q2_steps(), n);
        let lhs = kernel::q2_logderiv(n.saturating_sub(1))?;
        let ok = sx.log()?.deriv_t() == lhs && kernel::q2_bilateral(n)? == sx;
        Ok((ok, "d/dt log S_x and S_x = 1/(1 - tb - 3tY^2)".into()))
    });

    r.check("q2-s10", || {
        let s10 = constant_coefficients(&kernel::q2_s10(n)?);
        let sp = constant_coefficients(&walks::sp0(&q2_steps(), 1, n)?);
        let oracle = oracle::enumerate(&q2_steps(), &[Constraint::AvoidHalfLine], n);
        let ok = s10 == sp && (0..=n).all(|k| s10[k] == big(oracle.get(1, 0, k)));
        let shown: Vec<String> = s10.iter().take(8).map(|c| c.to_string()).collect();
        Ok((ok, format!("S_10 = {} ...", shown.join(", "))))
    });

    r.check("lagrange-inversion", || {
        let y = kernel::solve_positive_root(&kernel::q2_kernel(n), n)?;
        let ok = (1..=n).all(|k| kernel::lagrange_y_coeff(k) == *y.get(k));
        Ok((ok, "(1/n)[y^(n-1)](1+by+y^3)^n = [t^n]Y".into()))
    });

    for (name, mismatches) in [
        ("closed-form-a10", kernel::closed_form_mismatches(n)),
        ("printed-y-expansion", kernel::y_expansion_mismatches(n)),
    ] {
        let start = Instant::now();
        let (status, detail) = match mismatches {
            Ok(m) if m.is_empty() => (Status::Pass, "literal formula agrees".to_string()),
            Ok(m) => {
                let first = &m[0];
                (
                    Status::KnownMismatch,
                    format!(
                        "first at n = {}: literal {} vs verified {} ({} orders differ)",
                        first.n,
                        first.literal,
                        first.verified,
                        m.len()
                    ),
                )
            }
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        r.outcomes.push(Outcome {
            name: name.to_string(),
            status,
            detail,
            millis: start.elapsed().as_millis(),
        });
    }

    r
}
