//! Birthday-problem collision probability `B(t, p)`.
//!
//! `B(t, p) = 1 - prod_{n=0}^{p-1} (t - n) / t` is the probability that `p`
//! uniform draws with replacement from `t` items contain a repeat. Everything
//! here works with the log of the survival probability `1 - B`, which keeps
//! values near `B = 1` distinguishable.
//!
//! Three evaluation routes are available:
//!
//! * the exact product, summed as `log1p(-n/t)` terms with compensated
//!   summation over fixed chunks (deterministic under parallelism);
//! * a truncated power series in `1/t` whose coefficients are closed-form
//!   power sums, with a certified geometric tail bound;
//! * a log-gamma difference, used only when the product is over budget and
//!   the series is not certified (the survival probability then underflows).

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::faulhaber;
use crate::space::{Population, SpaceSize};
use crate::summation::NeumaierSum;

pub const DEFAULT_ITERATION_BUDGET: u64 = 100_000_000;
pub const DEFAULT_AUTO_TOLERANCE: f64 = 1e-12;
pub const MAX_SERIES_ORDER: u32 = faulhaber::MAX_POWER - 1;

const CHUNK: u64 = 1 << 16;
const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    ExactProduct,
    TruncatedSeries {
        order: u32,
    },
    /// `lnΓ(t) - lnΓ(t-p+1) - (p-1) ln t`; only sensible deep in saturation.
    LogGamma,
    Auto,
}

impl EvalMethod {
    pub fn name(self) -> &'static str {
        match self {
            EvalMethod::ExactProduct => "exact",
            EvalMethod::TruncatedSeries { .. } => "series",
            EvalMethod::LogGamma => "loggamma",
            EvalMethod::Auto => "auto",
        }
    }

    pub fn order(self) -> Option<u32> {
        match self {
            EvalMethod::TruncatedSeries { order } => Some(order),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    /// `B(t, p)`.
    pub probability: f64,
    /// `ln(1 - B)`; `-inf` when a collision is certain.
    pub log_survival: f64,
    /// The concrete route taken (never `Auto`).
    pub method_used: EvalMethod,
    /// Bound on `|probability - B(t, p)|`. Zero for the exact product.
    pub abs_error_bound: f64,
}

impl EvalResult {
    fn from_log(log_survival: f64, method_used: EvalMethod, abs_error_bound: f64) -> Self {
        Self {
            probability: 0.0 - log_survival.exp_m1(),
            log_survival,
            method_used,
            abs_error_bound,
        }
    }

    fn exact(log_survival: f64) -> Self {
        Self::from_log(log_survival, EvalMethod::ExactProduct, 0.0)
    }

    pub fn survival(&self) -> f64 {
        self.log_survival.exp()
    }
}

/// Truncated series value with the bound on its omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    pub abs_error_bound: f64,
}

/// `n(n-1)/2`, exact for every `u64`.
pub fn pair_count(n: Population) -> u128 {
    let n = n.get() as u128;
    if n < 2 {
        return 0;
    }
    n * (n - 1) / 2
}

/// True when `p >= t + 1`, i.e. a repeat is certain.
pub fn is_pigeonhole(t: SpaceSize, p: Population) -> bool {
    p.get() >= 1 && (p.get() - 1) as f64 >= t.value()
}

/// Evaluation settings. The free functions in this module use [`Evaluator::default`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluator {
    /// Largest `p` the exact product will iterate over.
    pub iteration_budget: u64,
    /// Bound on the series tail relative to `|ln(1 - B)|` required before
    /// `Auto` picks the series.
    pub auto_tolerance: f64,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self {
            iteration_budget: DEFAULT_ITERATION_BUDGET,
            auto_tolerance: DEFAULT_AUTO_TOLERANCE,
        }
    }
}

impl Evaluator {
    pub fn collision_probability(
        &self,
        t: SpaceSize,
        p: Population,
        method: EvalMethod,
    ) -> Result<EvalResult> {
        if let EvalMethod::TruncatedSeries { order } = method {
            check_order(order)?;
        }
        if p.get() <= 1 {
            return Ok(EvalResult::exact(0.0));
        }
        if is_pigeonhole(t, p) {
            return Ok(EvalResult::exact(f64::NEG_INFINITY));
        }
        match method {
            EvalMethod::ExactProduct => self.survival_log_exact(t, p).map(EvalResult::exact),
            EvalMethod::TruncatedSeries { order } => series_result(t, p, order),
            EvalMethod::LogGamma => Ok(log_gamma_result(t, p)),
            EvalMethod::Auto => self.auto(t, p),
        }
    }

    fn auto(&self, t: SpaceSize, p: Population) -> Result<EvalResult> {
        if let Some(order) = self.certified_order(t, p) {
            return series_result(t, p, order);
        }
        if p.get() <= self.iteration_budget {
            return self.survival_log_exact(t, p).map(EvalResult::exact);
        }
        Ok(log_gamma_result(t, p))
    }

    /// Smallest series order whose tail meets `auto_tolerance`, if any.
    fn certified_order(&self, t: SpaceSize, p: Population) -> Option<u32> {
        let ratio = p.as_f64() / t.value();
        if ratio >= 0.5 {
            return None;
        }
        let m = p.get() - 1;
        let geometric = 1.0 / (1.0 - ratio);
        let leading = pair_count(p) as f64 / t.value();
        let allowed = self.auto_tolerance * leading;
        (2..=MAX_SERIES_ORDER).find(|&order| {
            let next = order + 1;
            faulhaber::scaled_power_sum(next, m, t.value()) / f64::from(next) * geometric <= allowed
        })
    }

    /// `sum_{n=1}^{p-1} ln(1 - n/t)`.
    pub fn survival_log_exact(&self, t: SpaceSize, p: Population) -> Result<f64> {
        if p.get() > self.iteration_budget {
            return Err(Error::BudgetExceeded {
                population: p.get(),
                budget: self.iteration_budget,
            });
        }
        if p.get() <= 1 {
            return Ok(0.0);
        }
        if is_pigeonhole(t, p) {
            return Ok(f64::NEG_INFINITY);
        }
        let t = t.value();
        let last = p.get() - 1;
        let chunk_sum = |lo: u64, hi: u64| -> NeumaierSum {
            (lo..=hi).map(|n| (-(n as f64) / t).ln_1p()).collect()
        };
        if last <= CHUNK {
            return Ok(chunk_sum(1, last).total());
        }
        let chunks = last.div_ceil(CHUNK);
        let partials: Vec<NeumaierSum> = (0..chunks)
            .into_par_iter()
            .map(|c| chunk_sum(c * CHUNK + 1, ((c + 1) * CHUNK).min(last)))
            .collect();
        Ok(partials
            .into_iter()
            .fold(NeumaierSum::new(), |acc, s| acc + s)
            .total())
    }
}

pub fn collision_probability(
    t: SpaceSize,
    p: Population,
    method: EvalMethod,
) -> Result<EvalResult> {
    Evaluator::default().collision_probability(t, p, method)
}

pub fn survival_log_exact(t: SpaceSize, p: Population) -> Result<f64> {
    Evaluator::default().survival_log_exact(t, p)
}

/// `-sum_{k=1}^{order} S_k(p-1) / (k t^k)` with the tail bound
/// `S_{order+1}(p-1) / ((order+1) t^(order+1)) / (1 - p/t)`.
///
/// Each term shrinks by at least a factor `(p-1)/t`, so the omitted tail is
/// dominated by a geometric series. Requires `p/t < 1/2`.
pub fn survival_log_series(t: SpaceSize, p: Population, order: u32) -> Result<SeriesEstimate> {
    check_order(order)?;
    let ratio = p.as_f64() / t.value();
    if ratio >= 0.5 {
        return Err(Error::SeriesNotCertified { ratio });
    }
    if p.get() <= 1 {
        return Ok(SeriesEstimate {
            value: 0.0,
            abs_error_bound: 0.0,
        });
    }
    let m = p.get() - 1;
    let tv = t.value();
    let term = |k: u32| {
        if k == 1 {
            pair_count(p) as f64 / tv
        } else {
            faulhaber::scaled_power_sum(k, m, tv) / f64::from(k)
        }
    };
    // smallest terms first
    let sum: NeumaierSum = (1..=order).rev().map(term).collect();
    Ok(SeriesEstimate {
        value: -sum.total(),
        abs_error_bound: term(order + 1) / (1.0 - ratio),
    })
}

fn check_order(order: u32) -> Result<()> {
    if (2..=MAX_SERIES_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidOrder(order))
    }
}

/// Converts a bound `delta` on the log-survival into a bound on the
/// probability, `|e^a - e^b| <= e^max(a,b) |a - b|`, plus the rounding of
/// `expm1` on both sides.
fn probability_bound(log_survival: f64, probability: f64, delta: f64) -> f64 {
    (log_survival + delta).exp().min(1.0) * delta + 4.0 * EPS * probability
}

fn series_result(t: SpaceSize, p: Population, order: u32) -> Result<EvalResult> {
    let est = survival_log_series(t, p, order)?;
    let leading = pair_count(p) as f64 / t.value();
    // Rounding in the terms, plus Bernoulli cancellation in the higher orders.
    let rounding = EPS * (64.0 * est.value.abs() + 1e4 * (est.value.abs() - leading).abs());
    let delta = est.abs_error_bound + rounding;
    let mut r = EvalResult::from_log(est.value, EvalMethod::TruncatedSeries { order }, 0.0);
    r.abs_error_bound = probability_bound(r.log_survival, r.probability, delta);
    Ok(r)
}

fn log_gamma_result(t: SpaceSize, p: Population) -> EvalResult {
    let t = t.value();
    let m = (p.get() - 1) as f64;
    let a = ln_gamma(t);
    let b = ln_gamma(t - m);
    let c = m * t.ln();
    let value = (a - b - c).min(0.0);
    let delta = 256.0 * EPS * (a.abs() + b.abs() + c.abs());
    let mut r = EvalResult::from_log(value, EvalMethod::LogGamma, 0.0);
    r.abs_error_bound = probability_bound(r.log_survival, r.probability, delta);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: f64) -> SpaceSize {
        SpaceSize::new(v).unwrap()
    }

    fn p(n: u64) -> Population {
        Population(n)
    }

    const EXACT: EvalMethod = EvalMethod::ExactProduct;

    #[test]
    fn classic_birthday() {
        let r = collision_probability(t(365.0), p(23), EXACT).unwrap();
        assert!((r.probability - 0.507_297_234_323_985_4).abs() < 1e-13);
        assert_eq!(r.abs_error_bound, 0.0);
        assert_eq!(r.method_used, EXACT);
    }

    #[test]
    fn trivial_populations_are_zero() {
        for method in [
            EXACT,
            EvalMethod::Auto,
            EvalMethod::TruncatedSeries { order: 4 },
        ] {
            for n in [0, 1] {
                let r = collision_probability(t(1e20), p(n), method).unwrap();
                assert_eq!(r.probability, 0.0);
                assert_eq!(r.log_survival, 0.0);
            }
        }
    }

    #[test]
    fn pigeonhole_short_circuit() {
        for method in [
            EXACT,
            EvalMethod::Auto,
            EvalMethod::TruncatedSeries { order: 6 },
        ] {
            let r = collision_probability(t(10.0), p(11), method).unwrap();
            assert_eq!(r.probability, 1.0);
            assert_eq!(r.log_survival, f64::NEG_INFINITY);
            assert_eq!(r.abs_error_bound, 0.0);
        }
        // No iteration happens, so the budget does not apply.
        let tight = Evaluator {
            iteration_budget: 5,
            ..Evaluator::default()
        };
        let r = tight
            .collision_probability(t(10.0), p(1_000_000), EXACT)
            .unwrap();
        assert_eq!(r.probability, 1.0);
        // p = t is not certain.
        let r = collision_probability(t(10.0), p(10), EXACT).unwrap();
        assert!(r.probability < 1.0);
        // real t: p - 1 >= t
        assert!(is_pigeonhole(t(10.5), p(12)));
        assert!(!is_pigeonhole(t(10.5), p(11)));
    }

    #[test]
    fn exact_two_terms() {
        let v = survival_log_exact(t(365.0), p(3)).unwrap();
        let want = (364.0f64 / 365.0).ln() + (363.0f64 / 365.0).ln();
        assert!((v - want).abs() < 1e-16);
        assert!((v - -0.008_238_1).abs() < 1e-7);
        let v = survival_log_exact(t(1e6), p(2)).unwrap();
        assert_eq!(v, (-1e-6f64).ln_1p());
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Evaluator {
            iteration_budget: 100,
            ..Evaluator::default()
        };
        assert_eq!(
            tight.survival_log_exact(t(1e9), p(101)),
            Err(Error::BudgetExceeded {
                population: 101,
                budget: 100
            })
        );
        assert!(tight.survival_log_exact(t(1e9), p(100)).is_ok());
    }

    #[test]
    fn chunked_sum_matches_serial() {
        let space = t(2f64.powi(36));
        let pop = p(3 * CHUNK + 17);
        let parallel = survival_log_exact(space, pop).unwrap();
        let serial: NeumaierSum = (1..pop.get())
            .map(|n| (-(n as f64) / space.value()).ln_1p())
            .collect();
        assert!((parallel - serial.total()).abs() <= 4.0 * EPS * parallel.abs());
        // deterministic
        assert_eq!(parallel, survival_log_exact(space, pop).unwrap());
    }

    #[test]
    fn series_first_term_is_pair_count() {
        let space = t(2f64.powi(36));
        let miami = p(467_963);
        let pairs = pair_count(miami) as f64;
        let est = survival_log_series(space, miami, 2).unwrap();
        let first = -pairs / space.value();
        assert!((first - -1.5934).abs() < 1e-4);
        assert!((-first.exp_m1() - 0.7968).abs() < 5e-5);
        assert!((est.value - first).abs() < 1e-5);
    }

    #[test]
    fn series_matches_mercator_for_two_draws() {
        let space = t(1000.0);
        let est = survival_log_series(space, p(2), 8).unwrap();
        assert!((est.value - (-1e-3f64).ln_1p()).abs() < 1e-18);
        let mercator: f64 = -(1..=8).map(|k| 1e-3f64.powi(k) / f64::from(k)).sum::<f64>();
        assert!((est.value - mercator).abs() < 1e-18);
    }

    #[test]
    fn series_within_bound_of_exact() {
        let exact = survival_log_exact(t(365.0), p(23)).unwrap();
        let est = survival_log_series(t(365.0), p(23), 6).unwrap();
        assert!((exact - est.value).abs() <= est.abs_error_bound);
        assert!(est.abs_error_bound < 1e-7);
    }

    #[test]
    fn series_preconditions() {
        assert_eq!(
            survival_log_series(t(100.0), p(50), 4),
            Err(Error::SeriesNotCertified { ratio: 0.5 })
        );
        assert_eq!(
            survival_log_series(t(100.0), p(5), 1),
            Err(Error::InvalidOrder(1))
        );
        assert!(
            collision_probability(t(100.0), p(5), EvalMethod::TruncatedSeries { order: 99 })
                .is_err()
        );
    }

    #[test]
    fn series_survives_huge_powers() {
        // t^k overflows f64 at k = 16 for t = 1e20
        let est = survival_log_series(t(1e20), p(8_200_000_000), MAX_SERIES_ORDER).unwrap();
        assert!(est.value.is_finite() && est.abs_error_bound.is_finite());
    }

    #[test]
    fn auto_picks_series_when_certified() {
        let r = collision_probability(t(2f64.powi(47)), p(14_000_000), EvalMethod::Auto).unwrap();
        assert!(matches!(r.method_used, EvalMethod::TruncatedSeries { .. }));
        assert!(r.abs_error_bound < 1e-12);
        assert!((r.probability - 0.5016).abs() < 1e-3);
        let r = collision_probability(t(100.0), p(60), EvalMethod::Auto).unwrap();
        assert_eq!(r.method_used, EXACT);
    }

    #[test]
    fn auto_falls_back_to_log_gamma() {
        let ev = Evaluator {
            iteration_budget: 1_000,
            ..Evaluator::default()
        };
        let space = t(3000.0);
        let pop = p(2000);
        let r = ev
            .collision_probability(space, pop, EvalMethod::Auto)
            .unwrap();
        assert_eq!(r.method_used, EvalMethod::LogGamma);
        let exact = survival_log_exact(space, pop).unwrap();
        assert!((r.log_survival - exact).abs() <= 1e-9 * exact.abs());
    }

    #[test]
    fn log_gamma_agrees_with_product() {
        for (tv, n) in [(1e6, 500_000u64), (5e4, 40_000), (1e7, 9_000_000)] {
            let r = collision_probability(t(tv), p(n), EvalMethod::LogGamma).unwrap();
            let exact = survival_log_exact(t(tv), p(n)).unwrap();
            let rel = ((r.log_survival - exact) / exact).abs();
            assert!(rel < 1e-10, "t={tv} p={n}: rel {rel:e}");
        }
    }

    #[test]
    fn result_invariants() {
        let r = collision_probability(t(1e12), p(123_456), EvalMethod::Auto).unwrap();
        assert_eq!(r.probability, -r.log_survival.exp_m1());
        assert!((0.0..=1.0).contains(&r.probability));
        assert!(r.log_survival <= 0.0);
    }

    #[test]
    fn pair_counts() {
        assert_eq!(pair_count(p(23)), 253);
        assert_eq!(pair_count(p(0)), 0);
        assert_eq!(pair_count(p(1)), 0);
        assert_eq!(pair_count(p(8_200_000_000)), 33_619_999_995_900_000_000);
        assert_eq!(
            pair_count(p(u64::MAX)),
            u128::from(u64::MAX) * u128::from(u64::MAX - 1) / 2
        );
    }
}
