//! `coxwalk`: command-line access to the walk, the chain on W, the Shi graph
//! and random n-cores.

mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxwalk::linalg::{fmt_rational, to_f64};
use coxwalk::ncore::{
    boundary_profile, boundary_with_scale, expected_first_row, first_row_asymptotics, limit_curve,
    limit_curve_status, profile_distance, random_core_stream, random_cores, type_a,
};
use coxwalk::shi::{absorption_probabilities, build_gamma, region_hitting_probabilities};
use coxwalk::walker::{
    angle_degrees, chamber_frequencies, mean_direction, simulate, simulate_endpoints, Variant,
};
use coxwalk::wchain::{
    build_chain, chain_report, chamber_probabilities, conjecture_probes, psi, radial_speed,
    stationary_distribution, WeightScheme,
};
use coxwalk::weyl::word_string;
use coxwalk::{CartanType, CoxError, RootSystem};
use serde_json::json;

/// Seed used when neither `--seed` nor `COXWALK_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "coxwalk", version, about = "Reduced random walks in affine Weyl groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for Monte Carlo runs.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Clone)]
struct Seeded {
    /// Base seed; trial k uses stream k.
    #[arg(long, env = "COXWALK_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run the walk and print the trajectory (or endpoints, with --trials).
    Simulate {
        #[arg(long = "type", default_value = "A2")]
        cartan: CartanType,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value = "free")]
        variant: Variant,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[command(flatten)]
        seed: Seeded,
        #[command(flatten)]
        common: Common,
    },
    /// Exact stationary distribution of the chain on W.
    Stationary {
        #[arg(long = "type", default_value = "A2")]
        cartan: CartanType,
        #[arg(long, default_value = "uniform")]
        weights: WeightScheme,
        /// Also run the integrality and chamber-ratio probes.
        #[arg(long)]
        probes: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Limit direction ψ and radial speed.
    Psi {
        #[arg(long = "type", default_value = "A2")]
        cartan: CartanType,
        #[arg(long, default_value = "uniform")]
        weights: WeightScheme,
        #[command(flatten)]
        common: Common,
    },
    /// Exact chamber probabilities, optionally against Monte Carlo.
    Chambers {
        #[arg(long = "type", default_value = "A2")]
        cartan: CartanType,
        #[arg(long, default_value = "uniform")]
        weights: WeightScheme,
        /// Monte Carlo walks to compare against (0 = exact only).
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[command(flatten)]
        seed: Seeded,
        #[command(flatten)]
        common: Common,
    },
    /// Shi regions, the graph Γ and its absorption probabilities (rank <= 3).
    Shi {
        #[arg(long = "type", default_value = "A2")]
        cartan: CartanType,
        /// Print the probability of entering each region.
        #[arg(long)]
        regions: bool,
        /// Print Γ itself.
        #[arg(long)]
        graph: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Random n-cores grown by the Grassmannian walk.
    Cores {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Degree of the core (number of walk steps).
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Report distance to the limit curve and first-row statistics.
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        seed: Seeded,
        #[command(flatten)]
        common: Common,
    },
    /// Run the exact invariant suite; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Compute(CoxError),
    Io(std::io::Error),
}

impl From<CoxError> for Failure {
    fn from(e: CoxError) -> Self {
        Failure::Compute(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn root_system(t: CartanType) -> Outcome<RootSystem> {
    Ok(RootSystem::new(t)?)
}

fn pick_format(common: &Common, allowed: &[Format]) -> Outcome<Format> {
    let f = common.format.unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let name = f.to_possible_value().unwrap().get_name().to_string();
        Err(Failure::Usage(format!("--format {name} is not available for this subcommand")))
    }
}

fn emit(common: &Common, text: String) -> Outcome<()> {
    let text = if text.ends_with('\n') { text } else { text + "\n" };
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn run(cli: Cli) -> Outcome<bool> {
    let common = match &cli.command {
        Command::Simulate { common, .. }
        | Command::Stationary { common, .. }
        | Command::Psi { common, .. }
        | Command::Chambers { common, .. }
        | Command::Shi { common, .. }
        | Command::Cores { common, .. }
        | Command::Verify { common } => common.clone(),
    };
    if let Some(k) = common.threads {
        if k == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Simulate { cartan, steps, variant, trials, seed, common } => {
            let rs = root_system(cartan)?;
            let format = pick_format(&common, &[Format::Json, Format::Csv])?;
            if trials <= 1 {
                let t = simulate(&rs, steps, variant, seed.seed);
                let text = match format {
                    Format::Csv => t.to_csv(&rs),
                    _ => pretty(&t.to_json(&rs)),
                };
                emit(&common, text)?;
            } else {
                let ends = simulate_endpoints(&rs, steps, variant, trials, seed.seed);
                let text = match format {
                    Format::Csv => {
                        let mut s = String::from("trial,word,type,lambda,length\n");
                        for (k, x) in ends.iter().enumerate() {
                            let r = x.record(&rs);
                            let lambda: Vec<String> = r.lambda.iter().map(|v| v.to_string()).collect();
                            s += &format!(
                                "{k},{},{},{},{}\n",
                                word_string(&r.word),
                                r.type_word,
                                lambda.join(" "),
                                x.length(&rs)
                            );
                        }
                        s
                    }
                    _ => pretty(&json!({
                        "type": rs.cartan_type().to_string(),
                        "seed": seed.seed,
                        "variant": variant,
                        "steps": steps,
                        "endpoints": ends.iter().map(|x| x.record(&rs)).collect::<Vec<_>>(),
                    })),
                };
                emit(&common, text)?;
            }
        }
        Command::Stationary { cartan, weights, probes, common } => {
            let rs = root_system(cartan)?;
            let format = pick_format(&common, &[Format::Json, Format::Csv])?;
            let chain = build_chain(&rs, weights)?;
            let text = match format {
                Format::Csv => {
                    let zeta = stationary_distribution(&chain)?;
                    let g = chain.group();
                    let mut s = String::from("word,zeta\n");
                    for k in 0..g.len() {
                        s += &format!("{},{}\n", word_string(g.word(k)), fmt_rational(zeta.value(k)));
                    }
                    s
                }
                _ => {
                    let report = if probes { Some(conjecture_probes(&rs)?) } else { None };
                    pretty(&chain_report(&chain, report.as_ref())?)
                }
            };
            emit(&common, text)?;
        }
        Command::Psi { cartan, weights, common } => {
            let rs = root_system(cartan)?;
            pick_format(&common, &[Format::Json])?;
            let chain = build_chain(&rs, weights)?;
            let zeta = stationary_distribution(&chain)?;
            let dir = psi(&chain, &zeta)?;
            let speed = radial_speed(&rs, &dir);
            emit(
                &common,
                pretty(&json!({
                    "type": rs.cartan_type().to_string(),
                    "weights": weights,
                    "psi": dir.coords.0,
                    "unit": dir.unit,
                    "parallel_to_rho_vee": dir.is_parallel_to(&rs.two_rho_vee().0),
                    "radial_speed": speed.value,
                    "radial_speed_squared": fmt_rational(&speed.squared),
                })),
            )?;
        }
        Command::Chambers { cartan, weights, trials, steps, seed, common } => {
            let rs = root_system(cartan)?;
            let format = pick_format(&common, &[Format::Json, Format::Csv])?;
            let chain = build_chain(&rs, weights)?;
            let zeta = stationary_distribution(&chain)?;
            let exact = chamber_probabilities(&chain, &zeta);
            let g = chain.group();
            let ends = (trials > 0).then(|| simulate_endpoints(&rs, steps, Variant::Free, trials, seed.seed));
            let freq = ends.as_ref().map(|e| chamber_frequencies(&rs, e));
            let rows: Vec<(String, String, Option<f64>)> = (0..g.len())
                .map(|k| {
                    let observed = freq.as_ref().map(|f| f.frequency(g.element(k)));
                    (word_string(g.word(k)), fmt_rational(exact.value(k)), observed)
                })
                .collect();
            let text = match format {
                Format::Csv => {
                    let mut s = String::from("chamber,exact,exact_float,empirical\n");
                    for (k, (w, p, o)) in rows.iter().enumerate() {
                        let o = o.map(|v| v.to_string()).unwrap_or_default();
                        s += &format!("{w},{p},{},{o}\n", to_f64(exact.value(k)));
                    }
                    s
                }
                _ => {
                    let mut v = json!({
                        "type": rs.cartan_type().to_string(),
                        "weights": weights,
                        "chambers": rows.iter().map(|(w, p, o)| json!({"chamber": w, "exact": p, "empirical": o})).collect::<Vec<_>>(),
                    });
                    if let (Some(f), Some(e)) = (&freq, &ends) {
                        let dir = psi(&chain, &zeta)?;
                        v["monte_carlo"] = json!({
                            "seed": seed.seed,
                            "steps": steps,
                            "trials": trials,
                            "undecided": f.undecided,
                            "angle_to_psi_degrees": angle_degrees(&rs, &mean_direction(&rs, e), &dir.unit),
                        });
                    }
                    pretty(&v)
                }
            };
            emit(&common, text)?;
        }
        Command::Shi { cartan, regions, graph, common } => {
            let rs = root_system(cartan)?;
            pick_format(&common, &[Format::Json])?;
            let gamma = build_gamma(&rs)?;
            let mut v = json!({
                "type": rs.cartan_type().to_string(),
                "region_count": gamma.regions().len(),
                "vertex_count": gamma.vertex_count(),
            });
            let absorbed = absorption_probabilities(&gamma)?;
            let mut chambers: Vec<(Vec<usize>, String)> =
                absorbed.iter().map(|(w, p)| (w.reduced_word(&rs), fmt_rational(p))).collect();
            chambers.sort();
            v["absorption"] = chambers
                .iter()
                .map(|(w, p)| json!({"chamber": word_string(w), "probability": p}))
                .collect();
            if regions {
                let h = region_hitting_probabilities(&gamma)?;
                v["regions"] = gamma
                    .regions()
                    .iter()
                    .zip(&h)
                    .map(|(r, p)| {
                        json!({
                            "signs": r.signs(),
                            "chamber": r.chamber.as_ref().map(|w| word_string(&w.reduced_word(&rs))),
                            "probability": fmt_rational(p),
                        })
                    })
                    .collect();
            }
            if graph {
                v["graph"] = gamma.to_json();
            }
            emit(&common, pretty(&v))?;
        }
        Command::Cores { n, steps, trials, stats, seed, common } => {
            type_a(n).map_err(|e| Failure::Usage(e.to_string()))?;
            let format = pick_format(&common, &[Format::Json, Format::Csv, Format::Svg])?;
            let cores = if trials <= 1 {
                vec![random_core_stream(n, steps, seed.seed, 0)?]
            } else {
                random_cores(n, steps, trials, seed.seed)?
            };
            let text = match format {
                Format::Json if stats => {
                    let status = limit_curve_status(n)?;
                    let curve = limit_curve(n);
                    let entries: Vec<_> = cores
                        .iter()
                        .map(|c| {
                            let distance = (steps > 0)
                                .then(|| profile_distance(&boundary_with_scale(c, steps as f64), &curve));
                            json!({
                                "rows": c.rows(),
                                "boxes": c.boxes(),
                                "first_row": c.first_row(),
                                "distance_to_limit": distance,
                            })
                        })
                        .collect();
                    pretty(&json!({
                        "n": n,
                        "degree": steps,
                        "seed": seed.seed,
                        "limit_curve": status,
                        "predicted": first_row_asymptotics(n, status),
                        "expected_first_row": expected_first_row(n, steps),
                        "cores": entries,
                    }))
                }
                Format::Json if trials <= 1 => serde_json::to_string(cores[0].rows()).unwrap(),
                Format::Json => serde_json::to_string(&cores.iter().map(|c| c.rows()).collect::<Vec<_>>()).unwrap(),
                Format::Csv => {
                    let mut s = String::from("curve,x,y\n");
                    let profile = boundary_profile(&cores[0])?;
                    for line in profile.to_csv().lines().skip(1) {
                        s += &format!("core,{line}\n");
                    }
                    for line in limit_curve(n).to_csv().lines().skip(1) {
                        s += &format!("limit,{line}\n");
                    }
                    s
                }
                Format::Svg => boundary_profile(&cores[0])?.to_svg(&[&limit_curve(n)]),
            };
            emit(&common, text)?;
        }
        Command::Verify { common } => {
            let as_json = match common.format {
                None => false,
                Some(Format::Json) => true,
                Some(_) => return Err(Failure::Usage("verify prints text or --format json".into())),
            };
            let (ok, report) = verify::run_all(as_json);
            emit(&common, report)?;
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
