//! Inverting `B(t, p)` in either argument.
//!
//! `B` is nondecreasing in `p` and strictly decreasing in `t` (for `p >= 2`),
//! so both inverses are found by bracketing and bisection.

use crate::collision::{pair_count, EvalMethod, Evaluator};
use crate::error::{Error, Result};
use crate::space::{Population, SpaceSize, MAX_SPACE};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// World population used for `Γ_x` unless overridden.
pub const DEFAULT_WORLD_POPULATION: u64 = 8_200_000_000;

const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveTarget {
    target_prob: f64,
    tolerance: f64,
}

impl SolveTarget {
    pub fn new(target_prob: f64) -> Result<Self> {
        Self::with_tolerance(target_prob, DEFAULT_TOLERANCE)
    }

    /// `tolerance` is on the probability for population solves and relative
    /// on `t` for space solves.
    pub fn with_tolerance(target_prob: f64, tolerance: f64) -> Result<Self> {
        if !(target_prob > 0.0 && target_prob < 1.0) {
            return Err(Error::InvalidTarget(target_prob));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidTolerance(tolerance));
        }
        Ok(Self {
            target_prob,
            tolerance,
        })
    }

    pub fn target_prob(&self) -> f64 {
        self.target_prob
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// The population `φ` against which `Γ_x` is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorldPopulation {
    phi: Population,
}

impl WorldPopulation {
    pub fn new(phi: Population) -> Result<Self> {
        if phi.get() < 1 {
            return Err(Error::InvalidPopulation(phi.to_string()));
        }
        Ok(Self { phi })
    }

    pub fn phi(&self) -> Population {
        self.phi
    }
}

impl Default for WorldPopulation {
    fn default() -> Self {
        Self {
            phi: Population(DEFAULT_WORLD_POPULATION),
        }
    }
}

fn prob(ev: &Evaluator, t: SpaceSize, p: Population) -> Result<f64> {
    Ok(ev
        .collision_probability(t, p, EvalMethod::Auto)?
        .probability)
}

/// Smallest `p` with `B(t, p) >= target`.
pub fn solve_population(t: SpaceSize, target: SolveTarget) -> Result<Population> {
    solve_population_with(&Evaluator::default(), t, target)
}

pub fn solve_population_with(
    ev: &Evaluator,
    t: SpaceSize,
    target: SolveTarget,
) -> Result<Population> {
    if t.value() < 2.0 {
        return Err(Error::Precondition("solve_population", "t >= 2"));
    }
    let goal = target.target_prob();
    // B(t, ceil(t) + 1) = 1 by pigeonhole, which caps the search.
    let cap = t.value().ceil() as u64 + 1;
    let reaches = |n: u64| prob(ev, t, Population(n)).map(|b| b >= goal);

    // Invariant: B(lo) < goal <= B(hi).
    let mut lo = 1u64;
    let mut hi = 2u64;
    while !reaches(hi)? {
        lo = hi;
        hi = hi.saturating_mul(2).min(cap);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Population(hi))
}

/// Closed-form first guess for the space size: `pairs / -ln(1 - target)`.
pub fn space_seed(p: Population, target: SolveTarget) -> f64 {
    pair_count(p) as f64 / -(-target.target_prob()).ln_1p()
}

/// Real `t` with `B(t, p) = target`, found by bisection on `ln t`.
pub fn solve_space(p: Population, target: SolveTarget) -> Result<SpaceSize> {
    solve_space_with(&Evaluator::default(), p, target)
}

pub fn solve_space_with(ev: &Evaluator, p: Population, target: SolveTarget) -> Result<SpaceSize> {
    if p.get() < 2 {
        return Err(Error::Precondition("solve_space", "p >= 2"));
    }
    let goal = target.target_prob();
    let out_of_range = || Error::RootOutOfRange {
        population: p.get(),
        target: goal,
    };
    // B(t, p) = 1 for every t <= p - 1.
    let floor = ((p.get() - 1) as f64).max(1.0);
    let above = |tv: f64| -> Result<bool> { Ok(prob(ev, SpaceSize::new(tv)?, p)? > goal) };

    let seed = space_seed(p, target);
    let mut lo = (seed / 4.0).clamp(floor, MAX_SPACE);
    let mut hi = (seed * 4.0).clamp(floor, MAX_SPACE);
    while lo > floor && !above(lo)? {
        lo = (lo / 4.0).max(floor);
    }
    while above(hi)? {
        if hi >= MAX_SPACE {
            return Err(out_of_range());
        }
        hi = (hi * 4.0).min(MAX_SPACE);
    }

    // Invariant: B(lo) > goal >= B(hi).
    let (mut a, mut b) = (lo.ln(), hi.ln());
    for _ in 0..MAX_BISECTIONS {
        if (b - a).exp_m1() <= target.tolerance() {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if above(mid.exp())? {
            a = mid;
        } else {
            b = mid;
        }
    }
    let root = (0.5 * (a + b)).exp().clamp(lo, hi);
    SpaceSize::new(root)
}

/// `Γ_x`: the space size giving the world population an `x` percent chance
/// of containing a repeat.
pub fn gamma_x(x_percent: f64, world: WorldPopulation) -> Result<SpaceSize> {
    if !(x_percent > 0.0 && x_percent < 100.0) {
        return Err(Error::InvalidTarget(x_percent / 100.0));
    }
    solve_space(world.phi(), SolveTarget::new(x_percent / 100.0)?)
}
