use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use overlap_core::{
    collision_probability, dataset, display_probability, gamma_x, is_pigeonhole, pair_count,
    rop_table, solve_population, solve_space, EvalMethod, EvalResult, LoadOptions, Population,
    SpaceSize, WorldPopulation, DEFAULT_WORLD_POPULATION,
};
use serde_json::{json, Value};

mod error;
mod expr;
mod render;

use error::CliError;
use render::{Format, Table};

/// Birthday-problem collision probabilities for very large spaces.
#[derive(Parser)]
#[command(name = "overlap", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Series,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Probability that POPULATION draws from SPACE items contain a repeat.
    Prob {
        #[arg(short = 't', long = "space", allow_hyphen_values = true)]
        space: String,
        #[arg(short = 'p', long = "population", allow_hyphen_values = true)]
        population: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Series order for `--method series`.
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Smallest population whose collision probability reaches the target.
    SolveP {
        #[arg(short = 't', long = "space", allow_hyphen_values = true)]
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Space size at which the population collides with the target probability.
    SolveT {
        /// Defaults to the world population (`--phi`).
        #[arg(short = 'p', long = "population", allow_hyphen_values = true)]
        population: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
    /// Space size giving the world population an X percent collision chance.
    Gamma {
        #[arg(short = 'x', long = "percent", allow_hyphen_values = true)]
        percent: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
    /// Random overlap probability for each group in a population dataset.
    RopTable {
        /// Dataset file, or the name of a bundled dataset.
        #[arg(long, default_value = "us_cities")]
        dataset: String,
        #[arg(
            short = 't',
            long = "space",
            default_value = "2^36",
            allow_hyphen_values = true
        )]
        space: String,
        /// Column delimiter; detected from the header when omitted.
        #[arg(long)]
        delimiter: Option<String>,
    },
    /// Evenly spaced (population, probability) samples for plotting.
    Curve {
        #[arg(short = 't', long = "space", allow_hyphen_values = true)]
        space: String,
        #[arg(long = "p-max", allow_hyphen_values = true)]
        p_max: String,
        #[arg(long, default_value_t = 101)]
        samples: u64,
    },
    /// Number of distinct pairs in a group.
    Pairs {
        #[arg(short = 'p', long = "population", allow_hyphen_values = true)]
        population: String,
    },
}

fn method(arg: MethodArg, order: u32) -> EvalMethod {
    match arg {
        MethodArg::Exact => EvalMethod::ExactProduct,
        MethodArg::Series => EvalMethod::TruncatedSeries { order },
        MethodArg::Auto => EvalMethod::Auto,
    }
}

fn world(phi: Option<&str>) -> Result<WorldPopulation, CliError> {
    let phi = match phi {
        Some(s) => expr::parse_population(s)?,
        None => Population(DEFAULT_WORLD_POPULATION),
    };
    Ok(WorldPopulation::new(phi)?)
}

fn result_json(t: SpaceSize, p: Population, r: &EvalResult) -> Value {
    json!({
        "space": t.value(),
        "population": p.get(),
        "probability": r.probability,
        "log_survival": r.log_survival,
        "method": r.method_used.name(),
        "order": r.method_used.order(),
        "error_bound": r.abs_error_bound,
        "pigeonhole": is_pigeonhole(t, p),
    })
}

fn cmd_prob(
    format: Format,
    t: SpaceSize,
    p: Population,
    method: EvalMethod,
) -> Result<String, CliError> {
    let r = collision_probability(t, p, method)?;
    Ok(match format {
        Format::Json => render::json(&result_json(t, p, &r)),
        Format::Csv => {
            let mut table = Table::new([
                "probability",
                "log_survival",
                "method",
                "order",
                "error_bound",
            ]);
            table.row([
                r.probability.to_string(),
                r.log_survival.to_string(),
                r.method_used.name().to_owned(),
                r.method_used
                    .order()
                    .map(|o| o.to_string())
                    .unwrap_or_default(),
                r.abs_error_bound.to_string(),
            ]);
            table.csv()
        }
        Format::Text => {
            let percent = if is_pigeonhole(t, p) {
                "100% exactly, pigeonhole".to_owned()
            } else {
                display_probability(r.probability)
            };
            let method = match r.method_used.order() {
                Some(order) => format!("{} (order {order})", r.method_used.name()),
                None => r.method_used.name().to_owned(),
            };
            render::fields(&[
                ("B(t, p)", format!("{}  ({percent})", r.probability)),
                ("ln(1 - B)", r.log_survival.to_string()),
                ("method", method),
                (
                    "error bound",
                    if r.abs_error_bound == 0.0 {
                        "0".to_owned()
                    } else {
                        format!("{:e}", r.abs_error_bound)
                    },
                ),
            ])
        }
    })
}

fn cmd_solve_p(
    format: Format,
    t: SpaceSize,
    target: overlap_core::SolveTarget,
) -> Result<String, CliError> {
    let p = solve_population(t, target)?;
    let r = collision_probability(t, p, EvalMethod::Auto)?;
    Ok(match format {
        Format::Json => render::json(&json!({
            "space": t.value(),
            "target": target.target_prob(),
            "population": p.get(),
            "probability": r.probability,
        })),
        Format::Csv => {
            let mut table = Table::new(["population", "probability"]);
            table.row([p.to_string(), r.probability.to_string()]);
            table.csv()
        }
        Format::Text => render::fields(&[
            ("population", render::grouped(p.get())),
            ("B(t, p)", r.probability.to_string()),
        ]),
    })
}

fn render_space(
    format: Format,
    p: Population,
    target: f64,
    t: SpaceSize,
) -> Result<String, CliError> {
    let check = collision_probability(t, p, EvalMethod::Auto)?;
    Ok(match format {
        Format::Json => render::json(&json!({
            "population": p.get(),
            "target": target,
            "space": t.value(),
            "probability": check.probability,
        })),
        Format::Csv => {
            let mut table = Table::new(["space", "probability"]);
            table.row([t.value().to_string(), check.probability.to_string()]);
            table.csv()
        }
        Format::Text => render::fields(&[
            ("space", format!("{:.5e}", t.value())),
            ("B(t, p)", check.probability.to_string()),
        ]),
    })
}

fn load_dataset(
    source: &str,
    delimiter: Option<u8>,
) -> Result<Vec<overlap_core::PopulationRecord>, CliError> {
    let options = LoadOptions { delimiter };
    let path = Path::new(source);
    if path.exists() {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{source}: {e}")))?;
        return Ok(dataset::load_populations(&text, options)?);
    }
    match dataset::bundled(source) {
        Some(text) => Ok(dataset::load_populations(text, options)?),
        None => Err(CliError::Data(format!(
            "{source}: no such file or bundled dataset"
        ))),
    }
}

fn cmd_rop_table(
    format: Format,
    source: &str,
    t: SpaceSize,
    delimiter: Option<u8>,
) -> Result<String, CliError> {
    let records = load_dataset(source, delimiter)?;
    let rows = rop_table(&records, t)?;
    Ok(match format {
        Format::Json => render::json(&Value::Array(
            rows.iter()
                .map(|e| {
                    json!({
                        "name": e.record.name,
                        "population": e.record.population.get(),
                        "probability": e.rop.probability,
                        "log_survival": e.rop.log_survival,
                        "method": e.rop.method_used.name(),
                        "error_bound": e.rop.abs_error_bound,
                        "display": e.display,
                    })
                })
                .collect(),
        )),
        Format::Csv => {
            let mut table = Table::new([
                "name",
                "population",
                "probability",
                "log_survival",
                "display",
            ]);
            for e in &rows {
                table.row([
                    e.record.name.clone(),
                    e.record.population.to_string(),
                    e.rop.probability.to_string(),
                    e.rop.log_survival.to_string(),
                    e.display.clone(),
                ]);
            }
            table.csv()
        }
        Format::Text => {
            let mut table = Table::new(["Name", "Population", "Random Overlap Probability"]);
            for e in &rows {
                table.row([
                    e.record.name.clone(),
                    render::grouped(e.record.population.get()),
                    e.display.clone(),
                ]);
            }
            table.text()
        }
    })
}

/// `samples` populations spread evenly over `[0, p_max]`, rounded to nearest.
fn curve_points(p_max: u64, samples: u64) -> impl Iterator<Item = u64> {
    let span = u128::from(samples - 1);
    (0..samples).map(move |i| {
        let num = 2 * u128::from(i) * u128::from(p_max) + span;
        (num / (2 * span)) as u64
    })
}

fn cmd_curve(
    format: Format,
    t: SpaceSize,
    p_max: Population,
    samples: u64,
) -> Result<String, CliError> {
    if samples < 2 {
        return Err(CliError::Domain(overlap_core::Error::Precondition(
            "curve",
            "samples >= 2",
        )));
    }
    if p_max.get() < 1 {
        return Err(CliError::Domain(overlap_core::Error::Precondition(
            "curve",
            "p-max >= 1",
        )));
    }
    let points = curve_points(p_max.get(), samples)
        .map(|p| collision_probability(t, Population(p), EvalMethod::Auto).map(|r| (p, r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match format {
        Format::Json => render::json(&Value::Array(
            points
                .iter()
                .map(|(p, r)| json!({ "population": p, "probability": r.probability, "log_survival": r.log_survival }))
                .collect(),
        )),
        Format::Csv | Format::Text => {
            let mut table = Table::new(["population", "probability"]);
            for (p, r) in &points {
                table.row([p.to_string(), r.probability.to_string()]);
            }
            if matches!(format, Format::Csv) {
                table.csv()
            } else {
                table.text()
            }
        }
    })
}

fn cmd_pairs(format: Format, p: Population) -> String {
    let pairs = pair_count(p);
    match format {
        Format::Json => render::json(&json!({ "population": p.get(), "pairs": pairs.to_string() })),
        Format::Csv => format!("population,pairs\n{p},{pairs}\n"),
        Format::Text => format!("{pairs}\n"),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Prob {
            space,
            population,
            method: m,
            order,
        } => {
            let t = expr::parse_space(&space)?;
            let p = expr::parse_population(&population)?;
            cmd_prob(format, t, p, method(m, order))
        }
        Command::SolveP { space, target } => cmd_solve_p(
            format,
            expr::parse_space(&space)?,
            expr::parse_target(&target)?,
        ),
        Command::SolveT {
            population,
            target,
            phi,
        } => {
            let p = match population {
                Some(s) => expr::parse_population(&s)?,
                None => world(phi.as_deref())?.phi(),
            };
            let target = expr::parse_target(&target)?;
            let t = solve_space(p, target)?;
            render_space(format, p, target.target_prob(), t)
        }
        Command::Gamma { percent, phi } => {
            let x = expr::parse_percent(&percent)?;
            let world = world(phi.as_deref())?;
            let t = gamma_x(x, world)?;
            render_space(format, world.phi(), x / 100.0, t)
        }
        Command::RopTable {
            dataset,
            space,
            delimiter,
        } => {
            let delimiter = delimiter
                .as_deref()
                .map(expr::parse_delimiter)
                .transpose()?;
            cmd_rop_table(format, &dataset, expr::parse_space(&space)?, delimiter)
        }
        Command::Curve {
            space,
            p_max,
            samples,
        } => cmd_curve(
            format,
            expr::parse_space(&space)?,
            expr::parse_population(&p_max)?,
            samples,
        ),
        Command::Pairs { population } => {
            Ok(cmd_pairs(format, expr::parse_population(&population)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("overlap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_points_cover_the_range() {
        let pts: Vec<_> = curve_points(40_000_000, 5).collect();
        assert_eq!(pts, [0, 10_000_000, 20_000_000, 30_000_000, 40_000_000]);
        let pts: Vec<_> = curve_points(10, 4).collect();
        assert_eq!(pts, [0, 3, 7, 10]);
        assert!(curve_points(3, 50)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[0] <= w[1]));
    }
}
