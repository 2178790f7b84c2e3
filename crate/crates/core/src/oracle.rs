//! Brute-force ground truth: exact walk counts by integer dynamic
//! programming over positions, and censuses of minus/zero/plus paths by
//! classifying every path one at a time.
//!
//! Nothing here touches Laurent polynomials or series arithmetic.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::monoid::{for_each_path, GesselPair, StepSet};
use crate::walks::Constraint;

/// Exact counts keyed by end point and length. Absent entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountTable {
    n_max: usize,
    /// Keyed `(n, i, j)` so iteration follows output order.
    entries: BTreeMap<(usize, i32, i32), BigUint>,
}

impl CountTable {
    pub fn new(n_max: usize) -> Self {
        CountTable {
            n_max,
            entries: BTreeMap::new(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, i: i32, j: i32, n: usize) -> BigUint {
        self.entries
            .get(&(n, i, j))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn add(&mut self, i: i32, j: i32, n: usize, c: &BigUint) {
        assert!(
            n <= self.n_max,
            "length {n} beyond table bound {}",
            self.n_max
        );
        if c.is_zero() {
            return;
        }
        *self.entries.entry((n, i, j)).or_default() += c;
    }

    /// Nonzero entries as `(i, j, n, count)`, sorted by `(n, i, j)`.
    pub fn iter(&self) -> impl Iterator<Item = (i32, i32, usize, &BigUint)> {
        self.entries.iter().map(|(&(n, i, j), c)| (i, j, n, c))
    }

    /// Total number of paths of length `n`.
    pub fn total(&self, n: usize) -> BigUint {
        self.entries
            .range((n, i32::MIN, i32::MIN)..=(n, i32::MAX, i32::MAX))
            .map(|(_, c)| c)
            .sum()
    }

    /// Count table of concatenations: end points and lengths add.
    pub fn convolve(&self, other: &CountTable) -> CountTable {
        let n_max = self.n_max.min(other.n_max);
        let mut out = CountTable::new(n_max);
        for (&(n1, i1, j1), c1) in &self.entries {
            for (&(n2, i2, j2), c2) in &other.entries {
                if n1 + n2 <= n_max {
                    out.add(i1 + i2, j1 + j2, n1 + n2, &(c1 * c2));
                }
            }
        }
        out
    }

    /// Keeps only entries ending on the x-axis.
    pub fn on_axis(&self) -> CountTable {
        CountTable {
            n_max: self.n_max,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| k.2 == 0)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }
}

/// Counts every walk of length `0..=n_max` from the origin whose positions
/// after the start satisfy all constraints.
pub fn enumerate(steps: &StepSet, cons: &[Constraint], n_max: usize) -> CountTable {
    let mut table = CountTable::new(n_max);
    let mut layer: HashMap<(i32, i32), BigUint> = HashMap::new();
    layer.insert((0, 0), BigUint::from(1u32));
    for n in 0..=n_max {
        for (&(i, j), c) in &layer {
            table.add(i, j, n, c);
        }
        if n == n_max {
            break;
        }
        let mut next: HashMap<(i32, i32), BigUint> = HashMap::new();
        for (&(i, j), c) in &layer {
            for s in steps.steps() {
                let (a, b) = (i + s.dx, j + s.dy);
                if cons.iter().all(|k| k.allows(a, b)) {
                    *next.entry((a, b)).or_default() += c;
                }
            }
        }
        layer = next;
    }
    table
}

/// Smallest `p` in `1..` such that some counted walk of length at most
/// `n_max` ends at `(p, 0)`.
pub fn minimal_positive_endpoint(table: &CountTable) -> Option<i32> {
    table
        .iter()
        .filter(|&(i, j, _, _)| j == 0 && i > 0)
        .map(|(i, _, _, _)| i)
        .min()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub minus: CountTable,
    pub zero: CountTable,
    pub plus: CountTable,
    /// Every member of H, for the bijection check.
    pub all: CountTable,
}

/// Classifies every member of H of length at most `n_max` and tallies the
/// minus-, zero- and plus-paths by end point.
pub fn factor_census(gp: &GesselPair, n_max: usize) -> Census {
    let mut census = Census {
        minus: CountTable::new(n_max),
        zero: CountTable::new(n_max),
        plus: CountTable::new(n_max),
        all: CountTable::new(n_max),
    };
    let one = BigUint::from(1u32);
    for_each_path(gp.steps(), n_max, |pi| {
        let Ok(c) = gp.classify(pi) else {
            return;
        };
        let (i, j) = pi.end();
        let n = pi.len();
        census.all.add(i, j, n, &one);
        if c.is_minus {
            census.minus.add(i, j, n, &one);
        }
        if c.is_zero {
            census.zero.add(i, j, n, &one);
        }
        if c.is_plus {
            census.plus.add(i, j, n, &one);
        }
    });
    census
}
