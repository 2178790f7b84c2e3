//! Paths as elements of free monoids, and their factorization with respect to
//! a homomorphism `rho` into minus, zero and plus parts.
//!
//! Two monoid families are supported: `S*` itself, whose primes are single
//! steps, and the paths ending on the x-axis (optionally kept inside a
//! horizontal strip), whose primes are the paths that return to the axis
//! only at their end point.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::laurent::{ExponentKey, Grading, LaurentPoly, Rational};
use crate::walks::Constraint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub dx: i32,
    pub dy: i32,
    /// Value of `rho` on this step when `rho` is given by step marks.
    pub mark: i32,
}

impl Step {
    /// A step with mark 0.
    pub const fn new(dx: i32, dy: i32) -> Self {
        Step { dx, dy, mark: 0 }
    }

    pub const fn marked(dx: i32, dy: i32, mark: i32) -> Self {
        Step { dx, dy, mark }
    }

    pub fn key(&self) -> ExponentKey {
        ExponentKey::new(self.dx, self.dy, self.mark)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mark == 0 {
            write!(f, "{},{}", self.dx, self.dy)
        } else {
            write!(f, "{},{}:{}", self.dx, self.dy, self.mark)
        }
    }
}

/// A finite, nonempty set of distinct steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSet {
    steps: Vec<Step>,
}

impl StepSet {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidSteps("step set is empty".into()));
        }
        for (i, s) in steps.iter().enumerate() {
            if steps[..i].contains(s) {
                return Err(Error::InvalidSteps(format!("duplicate step {s}")));
            }
        }
        Ok(StepSet { steps })
    }

    /// Unmarked steps from `(dx, dy)` pairs.
    pub fn from_pairs(pairs: &[(i32, i32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(a, b)| Step::new(a, b)).collect())
    }

    /// North, south, east and west unit steps.
    pub fn square() -> Self {
        Self::from_pairs(&[(0, 1), (0, -1), (1, 0), (-1, 0)]).unwrap()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn contains(&self, s: &Step) -> bool {
        self.steps.contains(s)
    }

    /// `Gamma(S)` without the factor `t`: the sum of `x^dx y^dy m^mark`.
    pub fn weight(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.steps
                .iter()
                .map(|s| (s.key(), Rational::from_integer(1.into()))),
        )
    }

    /// Parses a path literal of comma-separated step indices.
    pub fn parse_path(&self, s: &str) -> Result<Path> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Ok(Path::empty());
        }
        let steps = s
            .split(',')
            .map(|tok| {
                let i: usize = tok
                    .parse()
                    .map_err(|_| Error::InvalidSteps(format!("bad step index {tok:?}")))?;
                self.steps
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::InvalidSteps(format!("step index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Path::new(steps))
    }
}

impl FromStr for StepSet {
    type Err = Error;

    /// Semicolon-separated `dx,dy` pairs with an optional `:mark`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut steps = Vec::new();
        for item in s.split(';').filter(|t| !t.is_empty()) {
            let bad = || Error::InvalidSteps(format!("cannot parse step {item:?}"));
            let (pair, mark) = match item.split_once(':') {
                Some((p, m)) => (p, m.parse::<i32>().map_err(|_| bad())?),
                None => (item, 0),
            };
            let (a, b) = pair.split_once(',').ok_or_else(bad)?;
            steps.push(Step::marked(
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
                mark,
            ));
        }
        StepSet::new(steps)
    }
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(Step::to_string).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// A finite sequence of steps starting at the origin; the empty path is the
/// unit of concatenation.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    steps: Vec<Step>,
}

impl Path {
    pub fn new(steps: Vec<Step>) -> Self {
        Path { steps }
    }

    pub fn empty() -> Self {
        Path::default()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Path { steps }
    }

    /// Points visited after the start, in order.
    pub fn positions(&self) -> Vec<(i32, i32)> {
        let (mut x, mut y) = (0, 0);
        self.steps
            .iter()
            .map(|s| {
                x += s.dx;
                y += s.dy;
                (x, y)
            })
            .collect()
    }

    pub fn end(&self) -> (i32, i32) {
        self.steps
            .iter()
            .fold((0, 0), |(x, y), s| (x + s.dx, y + s.dy))
    }

    pub fn head(&self, len: usize) -> Path {
        Path::new(self.steps[..len].to_vec())
    }

    pub fn tail(&self, from: usize) -> Path {
        Path::new(self.steps[from..].to_vec())
    }

    pub fn reversed(&self) -> Path {
        Path::new(self.steps.iter().rev().copied().collect())
    }

    /// The weight monomial `x^i y^j m^(sum of marks)`.
    pub fn key(&self) -> ExponentKey {
        let (x, y) = self.end();
        ExponentKey::new(x, y, self.steps.iter().map(|s| s.mark).sum())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.steps.iter().map(|s| format!("({s})")).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// A homomorphism from the monoid to the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rho {
    /// Sum of the marks of the steps.
    StepMarks,
    /// `alpha * x + beta * y` of the end point.
    Functional(i32, i32),
}

impl Rho {
    pub const X: Rho = Rho::Functional(1, 0);
    pub const Y: Rho = Rho::Functional(0, 1);

    pub fn eval(&self, p: &Path) -> i64 {
        match *self {
            Rho::StepMarks => p.steps.iter().map(|s| s.mark as i64).sum(),
            Rho::Functional(a, b) => {
                let (x, y) = p.end();
                a as i64 * x as i64 + b as i64 * y as i64
            }
        }
    }

    /// The grading of weight monomials matching this homomorphism.
    pub fn grading(&self) -> Grading {
        match *self {
            Rho::StepMarks => Grading::Mark,
            Rho::Functional(1, 0) => Grading::X,
            Rho::Functional(0, 1) => Grading::Y,
            Rho::Functional(a, b) => Grading::Functional(a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidFamily {
    /// All of `S*`; primes are the steps.
    Free,
    /// Paths ending on the x-axis whose every position after the start
    /// satisfies the constraints; primes return to the axis only at the end.
    AxisReturns(Vec<Constraint>),
}

/// A free monoid of paths paired with a homomorphism to the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GesselPair {
    steps: StepSet,
    family: MonoidFamily,
    rho: Rho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathClass {
    /// The empty path, which lies in all three classes.
    Unit,
    Minus,
    Zero,
    Plus,
    /// In none of the three classes.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: PathClass,
    pub is_minus: bool,
    pub is_zero: bool,
    pub is_plus: bool,
    pub prime_minus: bool,
    pub prime_zero: bool,
    pub prime_plus: bool,
}

/// The factorization `pi = minus * zero * plus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFactors {
    pub minus: Path,
    pub zero: Path,
    pub plus: Path,
}

impl GesselPair {
    pub fn new(steps: StepSet, family: MonoidFamily, rho: Rho) -> Result<Self> {
        if let MonoidFamily::AxisReturns(cons) = &family {
            if let Some(c) = cons.iter().find(|c| !c.is_translation_invariant()) {
                return Err(Error::InvalidConstraint(format!(
                    "{c} does not define a submonoid of axis-ending paths"
                )));
            }
        }
        Ok(GesselPair { steps, family, rho })
    }

    /// `(S*, rho)`.
    pub fn free(steps: StepSet, rho: Rho) -> Self {
        GesselPair {
            steps,
            family: MonoidFamily::Free,
            rho,
        }
    }

    /// Paths ending on the x-axis with no other restriction.
    pub fn axis_returns(steps: StepSet, rho: Rho) -> Self {
        GesselPair {
            steps,
            family: MonoidFamily::AxisReturns(Vec::new()),
            rho,
        }
    }

    pub fn steps(&self) -> &StepSet {
        &self.steps
    }

    pub fn family(&self) -> &MonoidFamily {
        &self.family
    }

    pub fn rho(&self) -> Rho {
        self.rho
    }

    pub fn contains(&self, pi: &Path) -> bool {
        self.check_member(pi).is_ok()
    }

    fn check_member(&self, pi: &Path) -> Result<()> {
        if let Some(s) = pi.steps().iter().find(|s| !self.steps.contains(s)) {
            return Err(Error::NotInMonoid(format!(
                "step {s} is not in the step set"
            )));
        }
        if let MonoidFamily::AxisReturns(cons) = &self.family {
            if pi.end().1 != 0 {
                return Err(Error::NotInMonoid(format!(
                    "{pi} does not end on the x-axis"
                )));
            }
            for (x, y) in pi.positions() {
                if let Some(c) = cons.iter().find(|c| !c.allows(x, y)) {
                    return Err(Error::NotInMonoid(format!(
                        "{pi} violates {c} at ({x},{y})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Lengths of the H-heads of `pi`, shortest (the empty head) first.
    /// Assumes membership.
    fn head_lengths(&self, pi: &Path) -> Vec<usize> {
        match &self.family {
            MonoidFamily::Free => (0..=pi.len()).collect(),
            MonoidFamily::AxisReturns(_) => std::iter::once(0)
                .chain(
                    pi.positions()
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.1 == 0)
                        .map(|(i, _)| i + 1),
                )
                .collect(),
        }
    }

    /// The H-heads `h_1 ... h_i` for `i = 0..m`.
    pub fn h_heads(&self, pi: &Path) -> Result<Vec<Path>> {
        self.check_member(pi)?;
        Ok(self
            .head_lengths(pi)
            .into_iter()
            .map(|l| pi.head(l))
            .collect())
    }

    /// Prime factors of `pi` in H.
    pub fn primes(&self, pi: &Path) -> Result<Vec<Path>> {
        self.check_member(pi)?;
        let lens = self.head_lengths(pi);
        Ok(lens
            .windows(2)
            .map(|w| Path::new(pi.steps()[w[0]..w[1]].to_vec()))
            .collect())
    }

    /// `rho` of every H-head, in head order.
    fn head_values(&self, pi: &Path) -> Vec<(usize, i64)> {
        self.head_lengths(pi)
            .into_iter()
            .map(|l| (l, self.rho.eval(&pi.head(l))))
            .collect()
    }

    pub fn rho_of(&self, pi: &Path) -> i64 {
        self.rho.eval(pi)
    }

    /// Splits `pi` as (shortest head of minimal rho) * (up to the longest
    /// head of minimal rho) * rest.
    pub fn factorize(&self, pi: &Path) -> Result<PathFactors> {
        self.check_member(pi)?;
        let heads = self.head_values(pi);
        let min = heads.iter().map(|&(_, v)| v).min().unwrap_or(0);
        let first = heads.iter().find(|&&(_, v)| v == min).map_or(0, |h| h.0);
        let last = heads
            .iter()
            .rev()
            .find(|&&(_, v)| v == min)
            .map_or(0, |h| h.0);
        Ok(PathFactors {
            minus: pi.head(first),
            zero: Path::new(pi.steps()[first..last].to_vec()),
            plus: pi.tail(last),
        })
    }

    pub fn classify(&self, pi: &Path) -> Result<Classification> {
        self.check_member(pi)?;
        let vals: Vec<i64> = self.head_values(pi).into_iter().map(|h| h.1).collect();
        let is_minus = class_holds(&vals, PathClass::Minus);
        let is_zero = class_holds(&vals, PathClass::Zero);
        let is_plus = class_holds(&vals, PathClass::Plus);
        let class = if pi.is_empty() {
            PathClass::Unit
        } else if is_minus {
            PathClass::Minus
        } else if is_zero {
            PathClass::Zero
        } else if is_plus {
            PathClass::Plus
        } else {
            PathClass::Mixed
        };
        Ok(Classification {
            class,
            is_minus,
            is_zero,
            is_plus,
            prime_minus: is_prime(&vals, PathClass::Minus),
            prime_zero: is_prime(&vals, PathClass::Zero),
            prime_plus: is_prime(&vals, PathClass::Plus),
        })
    }
}

/// Class predicate on the rho values of the H-heads (first entry is the
/// empty head).
fn class_holds(vals: &[i64], class: PathClass) -> bool {
    let total = *vals.last().unwrap_or(&0);
    let m = vals.len() - 1;
    if m == 0 {
        return true;
    }
    match class {
        PathClass::Minus => total < 0 && vals[..m].iter().all(|&v| total < v),
        PathClass::Zero => total == 0 && vals.iter().all(|&v| v >= 0),
        PathClass::Plus => vals[1..].iter().all(|&v| v > 0),
        PathClass::Unit | PathClass::Mixed => false,
    }
}

/// A nonempty member of the class that cannot be cut at an inner H-head into
/// two nonempty members of the same class.
fn is_prime(vals: &[i64], class: PathClass) -> bool {
    let m = vals.len() - 1;
    if m == 0 || !class_holds(vals, class) {
        return false;
    }
    (1..m).all(|cut| {
        let tail: Vec<i64> = vals[cut..].iter().map(|v| v - vals[cut]).collect();
        !(class_holds(&vals[..=cut], class) && class_holds(&tail, class))
    })
}

/// Calls `f` on every path of length `0..=n_max` over the step set, in
/// lexicographic order of step indices.
pub fn for_each_path<F: FnMut(&Path)>(steps: &StepSet, n_max: usize, mut f: F) {
    fn go<F: FnMut(&Path)>(steps: &StepSet, n_max: usize, cur: &mut Vec<Step>, f: &mut F) {
        f(&Path::new(cur.clone()));
        if cur.len() == n_max {
            return;
        }
        for s in steps.steps() {
            cur.push(*s);
            go(steps, n_max, cur, f);
            cur.pop();
        }
    }
    go(steps, n_max, &mut Vec::new(), &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E: Step = Step::new(1, 0);
    const W: Step = Step::new(-1, 0);
    const N: Step = Step::new(0, 1);
    const S: Step = Step::new(0, -1);

    fn ew() -> GesselPair {
        GesselPair::free(StepSet::new(vec![E, W]).unwrap(), Rho::X)
    }

    fn p(steps: &[Step]) -> Path {
        Path::new(steps.to_vec())
    }

    #[test]
    fn parse_step_sets() {
        let s: StepSet = "0,1; 0,-1;1,0;-1,0".parse().unwrap();
        assert_eq!(s, StepSet::square());
        let m: StepSet = "1,1:3;1,-1:-1".parse().unwrap();
        assert_eq!(m.steps()[0], Step::marked(1, 1, 3));
        assert!("1,1;1,1".parse::<StepSet>().is_err());
        assert!("1;2".parse::<StepSet>().is_err());
        assert!("".parse::<StepSet>().is_err());
        assert_eq!(s.parse_path("2,3").unwrap(), p(&[E, W]));
        assert!(s.parse_path("2,9").is_err());
    }

    #[test]
    fn heads_in_free_and_axis_monoids() {
        assert_eq!(ew().h_heads(&Path::empty()).unwrap(), vec![Path::empty()]);
        assert_eq!(
            ew().h_heads(&p(&[E, W])).unwrap(),
            vec![Path::empty(), p(&[E]), p(&[E, W])]
        );
        let nse = StepSet::new(vec![N, S, E]).unwrap();
        let gp = GesselPair::axis_returns(nse, Rho::X);
        assert_eq!(
            gp.h_heads(&p(&[N, S, E])).unwrap(),
            vec![Path::empty(), p(&[N, S]), p(&[N, S, E])]
        );
        assert_eq!(
            gp.primes(&p(&[N, S, E])).unwrap(),
            vec![p(&[N, S]), p(&[E])]
        );
        assert!(matches!(gp.h_heads(&p(&[N])), Err(Error::NotInMonoid(_))));
    }

    #[test]
    fn factorization_examples() {
        let gp = ew();
        let f = gp.factorize(&Path::empty()).unwrap();
        assert!(f.minus.is_empty() && f.zero.is_empty() && f.plus.is_empty());
        let f = gp.factorize(&p(&[W, E, E])).unwrap();
        assert_eq!(
            (f.minus, f.zero, f.plus),
            (p(&[W]), Path::empty(), p(&[E, E]))
        );
        let f = gp.factorize(&p(&[E, W])).unwrap();
        assert_eq!(
            (f.minus, f.zero, f.plus),
            (Path::empty(), p(&[E, W]), Path::empty())
        );
    }

    #[test]
    fn classification_examples() {
        let gp = ew();
        let c = gp.classify(&p(&[E])).unwrap();
        assert_eq!(c.class, PathClass::Plus);
        assert!(c.prime_plus && !c.prime_minus);
        assert_eq!(gp.classify(&p(&[E, W])).unwrap().class, PathClass::Zero);
        // heads 1, 0, -1: the total -1 is below every other head value
        let c = gp.classify(&p(&[E, W, W])).unwrap();
        assert_eq!(c.class, PathClass::Minus);
        assert!(c.prime_minus);
        let c = gp.classify(&p(&[W, E, E])).unwrap();
        assert_eq!(c.class, PathClass::Mixed);
        let c = gp.classify(&Path::empty()).unwrap();
        assert_eq!(c.class, PathClass::Unit);
        assert!(c.is_minus && c.is_zero && c.is_plus);
        assert!(!c.prime_minus && !c.prime_zero && !c.prime_plus);
        // EE is plus but factors as E * E
        let c = gp.classify(&p(&[E, E])).unwrap();
        assert!(c.is_plus && !c.prime_plus);
    }

    #[test]
    fn marks_define_rho() {
        let s = StepSet::new(vec![Step::marked(1, 1, 2), Step::marked(1, -1, -1)]).unwrap();
        let gp = GesselPair::free(s.clone(), Rho::StepMarks);
        let up = s.steps()[0];
        let down = s.steps()[1];
        assert_eq!(gp.rho_of(&p(&[up, down, down])), 0);
        assert_eq!(
            gp.classify(&p(&[up, down, down])).unwrap().class,
            PathClass::Zero
        );
        assert_eq!(
            gp.classify(&p(&[down, up, down])).unwrap().class,
            PathClass::Mixed
        );
    }

    #[test]
    fn strip_family_rejects_half_line() {
        let r = GesselPair::new(
            StepSet::square(),
            MonoidFamily::AxisReturns(vec![Constraint::AvoidHalfLine]),
            Rho::X,
        );
        assert!(matches!(r, Err(Error::InvalidConstraint(_))));
        let gp = GesselPair::new(
            StepSet::square(),
            MonoidFamily::AxisReturns(vec![Constraint::LowerY(0)]),
            Rho::X,
        )
        .unwrap();
        assert!(gp.contains(&p(&[N, S])));
        assert!(!gp.contains(&p(&[S, N])));
    }

    /// Prime criterion for H_- stated directly: negative total, every other
    /// head nonnegative.
    #[test]
    fn minus_primes_match_direct_criterion() {
        for gp in [
            ew(),
            GesselPair::axis_returns(StepSet::square(), Rho::X),
            GesselPair::free(StepSet::square(), Rho::Functional(1, 1)),
        ] {
            for_each_path(gp.steps(), 6, |pi| {
                if !gp.contains(pi) || pi.is_empty() {
                    return;
                }
                let vals: Vec<i64> = gp
                    .h_heads(pi)
                    .unwrap()
                    .iter()
                    .map(|h| gp.rho_of(h))
                    .collect();
                let m = vals.len() - 1;
                let direct = vals[m] < 0 && vals[..m].iter().all(|&v| v >= 0);
                assert_eq!(gp.classify(pi).unwrap().prime_minus, direct, "{pi}");
            });
        }
    }

    #[test]
    fn factorization_is_a_bijection() {
        use std::collections::HashSet;
        for gp in [ew(), GesselPair::axis_returns(StepSet::square(), Rho::X)] {
            let mut seen = HashSet::new();
            for_each_path(gp.steps(), 8, |pi| {
                if !gp.contains(pi) {
                    return;
                }
                let f = gp.factorize(pi).unwrap();
                assert_eq!(f.minus.concat(&f.zero).concat(&f.plus), *pi);
                assert!(gp.classify(&f.minus).unwrap().is_minus);
                assert!(gp.classify(&f.zero).unwrap().is_zero);
                assert!(gp.classify(&f.plus).unwrap().is_plus);
                assert!(seen.insert((f.minus, f.zero, f.plus)));
            });
        }
    }

    fn arb_ew_path() -> impl Strategy<Value = Path> {
        prop::collection::vec(prop::bool::ANY, 0..12)
            .prop_map(|bs| Path::new(bs.into_iter().map(|b| if b { E } else { W }).collect()))
    }

    proptest! {
        #[test]
        fn reversal_duality(pi in arb_ew_path()) {
            // reversing a path turns the heads into tails, so the sign of rho flips
            let gp = ew();
            let flipped = GesselPair::free(gp.steps().clone(), Rho::Functional(-1, 0));
            let c = gp.classify(&pi).unwrap();
            let r = flipped.classify(&pi.reversed()).unwrap();
            prop_assert_eq!(c.is_minus, r.is_plus);
            prop_assert_eq!(c.is_plus, r.is_minus);
        }

        #[test]
        fn rho_is_additive(a in arb_ew_path(), b in arb_ew_path(), fa in -3i32..=3, fb in -3i32..=3) {
            for rho in [Rho::X, Rho::StepMarks, Rho::Functional(fa, fb)] {
                prop_assert_eq!(rho.eval(&a.concat(&b)), rho.eval(&a) + rho.eval(&b));
            }
        }
    }
}
