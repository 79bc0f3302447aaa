//! `monodromy`: command-line driver for the verification toolkit.
//!
//! Every subcommand builds one JSON report. With `--json-out PATH` the report
//! is written there and a short human-readable summary goes to stdout;
//! otherwise the report itself is printed. Exit status: 0 when every check
//! passes, 1 on a failed check or a computation error, 2 on a usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use monodromy_core::arrangement::{field_of_order, random_arrangement, Arrangement, PointsOnLine};
use monodromy_core::monodromy::{
    certify_generation, frobenius_distribution, hyperelliptic_consistency, predict_group, shear_survey,
    survey_irreducibility, verify_case_split, DistributionParams, Family,
};
use monodromy_core::zeta::{
    count_points, frobenius_charpoly_with, irreducible_over_z, CountMode, MAX_DEGREE,
};

#[derive(Parser, Debug)]
#[command(name = "monodromy", version, about = "Exact checks for mod-ℓ monodromy of double covers branched along hyperplane arrangements")]
struct Cli {
    /// Root seed; every random subtask derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for point counting (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    /// Arrangement file for `count` and `zeta`.
    #[arg(long, global = true, value_name = "FILE")]
    arrangement: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predicted monodromy group for dimension n and prime ℓ.
    Predict {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'l', long = "ell")]
        ell: u32,
    },
    /// Spinor-norm case split of the Picard-Lefschetz reflection over a grid.
    CaseSplit {
        /// Even dimensions n.
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10")]
        ns: Vec<u32>,
        /// Primes ℓ >= 5.
        #[arg(long, value_delimiter = ',', default_value = "5,7,11,13,17")]
        ells: Vec<u32>,
        /// Use m = n + offset.
        #[arg(long, default_value_t = 4)]
        m_offset: u32,
    },
    /// Certify the order of a symplectic or orthogonal group by Schreier-Sims.
    Certify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        dim: usize,
        #[arg(short = 'l', long = "ell")]
        ell: u32,
        /// Square class of the Gram determinant for O: 1 or -1.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        disc: i8,
    },
    /// Point counts N_i of the double cover over F_{q^i}.
    Count {
        #[command(flatten)]
        source: Source,
        /// Highest extension degree.
        #[arg(long, default_value_t = 1)]
        levels: u32,
    },
    /// Frobenius characteristic polynomial, Weil checks and irreducibility.
    Zeta {
        #[command(flatten)]
        source: Source,
        /// Count only half the tower and complete it with the functional equation (n odd).
        #[arg(long)]
        half: bool,
    },
    /// Check that wedge powers of transvections are isotropic shears.
    WedgeCheck {
        /// Dimension of the symplectic space.
        #[arg(long)]
        dim: usize,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'l', long = "ell", default_value_t = 5)]
        ell: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Compare the n-dimensional cover with the n-th wedge of the curve.
    HyperellipticCompare {
        #[arg(short = 'q')]
        q: u64,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Fraction of irreducible Frobenius polynomials along a tower of fields.
    Survey {
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'q')]
        q: u64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        levels: Vec<u32>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Allowed drop between consecutive levels.
        #[arg(long, default_value_t = 0.1)]
        tolerance: f64,
    },
    /// Frobenius classes mod ℓ against the predicted group.
    Distribution {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'q')]
        q: u64,
        #[arg(short = 'l', long = "ell")]
        ell: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 200_000)]
        group_samples: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Sp,
    O,
}

/// Where `count` and `zeta` get their arrangement: `--arrangement FILE` or a
/// seeded random one of the given shape.
#[derive(Args, Debug)]
struct Source {
    #[arg(short = 'n')]
    n: Option<usize>,
    #[arg(short = 'm')]
    m: Option<usize>,
    #[arg(short = 'q')]
    q: Option<u64>,
}

struct Outcome {
    command: &'static str,
    pass: bool,
    summary: String,
    report: Value,
}

fn load_arrangement(cli: &Cli, source: &Source) -> Result<Arrangement> {
    if let Some(path) = &cli.arrangement {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(Arrangement::parse(&text)?);
    }
    let (Some(n), Some(m), Some(q)) = (source.n, source.m, source.q) else {
        bail!(UsageError("either --arrangement FILE or all of -n, -m, -q is required".into()));
    };
    let field = field_of_order(q)?;
    Ok(random_arrangement(n, m, &field, cli.seed)?)
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Predict { n, ell } => {
            let p = predict_group(*n, *ell)?;
            Outcome {
                command: "predict",
                pass: true,
                summary: format!("n = {n}, ℓ = {ell}: {} by clause {}", p.label.as_str(), serde_json::to_value(p.reason)?),
                report: serde_json::to_value(p)?,
            }
        }
        Command::CaseSplit { ns, ells, m_offset } => {
            let grid: Vec<(u32, u32, u32)> =
                ns.iter().flat_map(|&n| ells.iter().map(move |&l| (n, n + m_offset, l))).collect();
            let r = verify_case_split(&grid, seed)?;
            let mut summary = String::from("  n   m   ℓ  predicted        θ  det  match  -id\n");
            for row in &r.rows {
                summary += &format!(
                    "{:>3} {:>3} {:>3}  {:<15} {:>2} {:>4}  {:<5}  {}\n",
                    row.n,
                    row.m,
                    row.ell,
                    row.prediction.label.as_str(),
                    row.reflection.theta,
                    row.reflection.det,
                    row.reflection_matches,
                    row.minus_identity_in_prediction
                );
            }
            Outcome { command: "case-split", pass: r.reflections_match, summary, report: serde_json::to_value(&r)? }
        }
        Command::Certify { family, dim, ell, disc } => {
            let fam = match family {
                FamilyArg::Sp => Family::Sp,
                FamilyArg::O => Family::O,
            };
            let r = certify_generation(fam, *dim, *ell, *disc, seed)?;
            let mut summary = format!("certified order {} (expected {})\n", r.certified_order, r.expected_order);
            for s in &r.subgroups {
                summary += &format!("  {:<16} index {:?} (expected {})\n", s.label.as_str(), s.certified_index, s.expected_index);
            }
            Outcome { command: "certify", pass: r.pass(), summary, report: serde_json::to_value(&r)? }
        }
        Command::Count { source, levels } => {
            let arr = load_arrangement(cli, source)?;
            let counts = (1..=*levels).map(|i| count_points(&arr, i)).collect::<Result<Vec<_>, _>>()?;
            let summary = counts.iter().enumerate().map(|(i, c)| format!("N_{} = {c}\n", i + 1)).collect();
            Outcome {
                command: "count",
                pass: true,
                summary,
                report: json!({"n": arr.n(), "m": arr.m(), "q": arr.q(), "counts": counts}),
            }
        }
        Command::Zeta { source, half } => {
            let arr = load_arrangement(cli, source)?;
            let mode = if *half { CountMode::HalfFunctionalEquation } else { CountMode::Full };
            let rec = frobenius_charpoly_with(&arr, mode)?;
            let mut report = rec.to_json();
            let degree = rec.degree();
            if degree <= MAX_DEGREE {
                report["irreducibility"] = irreducible_over_z(&rec.poly)?.to_json();
            }
            Outcome {
                command: "zeta",
                pass: rec.checks.all_pass(),
                summary: format!("P(T) = {}\nchecks: {:?}\n", rec.poly, rec.checks),
                report,
            }
        }
        Command::WedgeCheck { dim, n, ell, samples } => {
            let r = shear_survey(*dim, *n, *ell, *samples, seed)?;
            Outcome {
                command: "wedge-check",
                pass: r.pass(),
                summary: format!("{}/{} lifted transvections are isotropic shears\n", r.holding, r.samples),
                report: serde_json::to_value(&r)?,
            }
        }
        Command::HyperellipticCompare { q, m, n } => {
            let field = field_of_order(*q)?;
            let pts = if field.order() + 1 == *m as u64 {
                PointsOnLine::all(field)
            } else {
                PointsOnLine::random(field, *m, seed)?
            };
            let r = hyperelliptic_consistency(&pts, *n)?;
            Outcome {
                command: "hyperelliptic-compare",
                pass: r.equal,
                summary: format!(
                    "P_C = {}\nP_X = {}\n∧^{n} P_C = {}\nequal: {}\n",
                    r.curve_poly, r.cover_poly, r.wedge_poly, r.equal
                ),
                report: serde_json::to_value(&r)?,
            }
        }
        Command::Survey { n, m, q, levels, samples, tolerance } => {
            let r = survey_irreducibility(*n, *m, *q, levels, *samples, seed)?;
            let summary = r
                .levels
                .iter()
                .map(|l| format!("level {}: {}/{} irreducible\n", l.level, l.irreducible, l.samples))
                .collect();
            Outcome {
                command: "survey",
                pass: r.non_decreasing_within(*tolerance),
                summary,
                report: serde_json::to_value(&r)?,
            }
        }
        Command::Distribution { n, m, q, ell, samples, group_samples } => {
            let r = frobenius_distribution(DistributionParams {
                n: *n,
                m: *m,
                q: *q,
                ell: *ell,
                samples: *samples,
                group_samples: *group_samples,
                seed,
            })?;
            Outcome {
                command: "distribution",
                pass: r.contained,
                summary: format!(
                    "{} Frobenius classes, contained: {}, TV distance {:.3} (diagnostic threshold {})\n",
                    r.frobenius_histogram.len(),
                    r.contained,
                    r.tv_distance,
                    r.tv_threshold
                ),
                report: serde_json::to_value(&r)?,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return if e.is::<UsageError>() { ExitCode::from(2) } else { ExitCode::from(1) };
        }
    };
    let doc = json!({"command": outcome.command, "pass": outcome.pass, "report": outcome.report});
    let text = serde_json::to_string_pretty(&doc).expect("reports serialize");
    match &cli.json_out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(1);
            }
            print!("{}", outcome.summary);
            if !outcome.summary.ends_with('\n') {
                println!();
            }
        }
        None => println!("{text}"),
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
