use overlap_core::{
    collision_probability, dataset, pair_count, solve_population, solve_space, EvalMethod,
    LoadOptions, Population, PopulationRecord, SolveTarget, SpaceSize,
};
use proptest::prelude::*;

const EPS: f64 = f64::EPSILON;

fn b(t: f64, p: u64) -> f64 {
    collision_probability(SpaceSize::new(t).unwrap(), Population(p), EvalMethod::Auto)
        .unwrap()
        .probability
}

fn log_space() -> impl Strategy<Value = f64> {
    (0.0f64..30.0).prop_map(|e| 10f64.powf(e).max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn monotone_in_population(t in log_space(), frac in 0.0f64..1.0) {
        let p = ((t.min(1e7) * frac) as u64).max(1);
        prop_assert!(b(t, p + 1) >= b(t, p));
    }

    #[test]
    fn monotone_in_space(t in log_space(), grow in 1.0f64..4.0, p in 2u64..5_000_000) {
        let t2 = (t * grow).min(1e30);
        prop_assert!(b(t, p) >= b(t2, p));
    }

    #[test]
    fn sandwich(t in log_space(), frac in 0.0f64..1.0) {
        let p = ((t.min(1e7) * frac) as u64).max(2);
        let r = collision_probability(SpaceSize::new(t).unwrap(), Population(p), EvalMethod::Auto).unwrap();
        let ratio = pair_count(Population(p)) as f64 / t;
        let slack = r.abs_error_bound + 8.0 * EPS * r.probability.max(ratio.min(1.0));
        prop_assert!((0.0..=1.0).contains(&r.probability));
        if (p as f64) <= t {
            prop_assert!(-(-ratio).exp_m1() <= r.probability + slack);
            prop_assert!(r.probability <= ratio + slack);
        }
    }

    #[test]
    fn exact_and_series_agree(t in 1e3f64..1e9, frac in 0.0f64..0.45, order in 2u32..=12) {
        let p = ((t * frac) as u64).clamp(2, 200_000);
        let space = SpaceSize::new(t).unwrap();
        let exact = collision_probability(space, Population(p), EvalMethod::ExactProduct).unwrap();
        let series = collision_probability(space, Population(p), EvalMethod::TruncatedSeries { order }).unwrap();
        prop_assert!((exact.probability - series.probability).abs() <= series.abs_error_bound);
        prop_assert!(series.abs_error_bound > 0.0);
    }

    #[test]
    fn population_solver_brackets(t in 2f64..1e16, x in 0.01f64..0.99) {
        let space = SpaceSize::new(t).unwrap();
        let p = solve_population(space, SolveTarget::new(x).unwrap()).unwrap().get();
        prop_assert!(b(t, p) >= x);
        prop_assert!(p <= 1 || b(t, p - 1) < x);
    }

    #[test]
    fn space_solver_round_trips(p in 2u64..10_000_000_000_000, x in 0.01f64..0.99) {
        let t = solve_space(Population(p), SolveTarget::new(x).unwrap()).unwrap();
        prop_assert!((b(t.value(), p) - x).abs() <= 1e-6);
    }

    #[test]
    fn ingestion_round_trip(pops in proptest::collection::vec(0u64..10_000_000_000, 1..20)) {
        let records: Vec<_> = pops
            .iter()
            .enumerate()
            .map(|(i, &n)| PopulationRecord::new(format!("city {i}"), n))
            .collect();
        // write with grouped digits, read back, write plain
        let grouped: String = std::iter::once("name;population".to_owned())
            .chain(records.iter().map(|r| format!("{};{}", r.name, group(r.population.get()))))
            .collect::<Vec<_>>()
            .join("\n");
        let loaded = dataset::load_populations(&grouped, LoadOptions::default()).unwrap();
        prop_assert_eq!(&loaded, &records);
        let mut buf = Vec::new();
        dataset::write_populations(&loaded, &mut buf, b',').unwrap();
        let again = dataset::load_populations(std::str::from_utf8(&buf).unwrap(), LoadOptions::default()).unwrap();
        prop_assert_eq!(again, records);
    }
}

fn group(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(' ');
        }
        out.push(c);
    }
    out
}

#[test]
fn pigeonhole_is_exact() {
    for t in [1u64, 2, 10, 365, 1000] {
        for extra in [1u64, 2, 100] {
            let r = collision_probability(
                SpaceSize::new(t as f64).unwrap(),
                Population(t + extra),
                EvalMethod::Auto,
            )
            .unwrap();
            assert_eq!(r.probability, 1.0);
            assert_eq!(r.log_survival, f64::NEG_INFINITY);
        }
    }
}
