//! Command-line front end: exact probabilities, closed-form bounds,
//! certificates, matrix splitting, experiments and edge statistics.
//!
//! Exit codes: 0 success, 2 inconclusive verdict, 1 error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qlo_core::bounds;
use qlo_core::engine::{self, EnumOptions};
use qlo_core::error::Error;
use qlo_core::experiments::{self, sweep};
use qlo_core::jsonio;
use qlo_core::num::{parse_rational, Rational};
use qlo_core::rank;

#[derive(Parser)]
#[command(name = "qlo", about = "exact anticoncentration laboratory for quadratic sign polynomials", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct IoArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format where both make sense.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Exact event probabilities of a quadratic polynomial.
    Prob {
        /// Polynomial JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Optional linear constraint {"m": matrix, "w": [..]}.
        #[arg(long)]
        constraint: Option<PathBuf>,
        /// Point z: report Pr[Q = z] (default: the full histogram and sup).
        #[arg(long)]
        z: Option<String>,
        /// Product distribution JSON (general finite-support variables).
        #[arg(long)]
        dist: Option<PathBuf>,
        /// Estimate by sampling instead of enumerating.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumeration cap on the number of sign variables.
        #[arg(long, default_value_t = 26)]
        cap: usize,
        /// Partition the walk across threads (identical output).
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Closed-form bound values in log2 space.
    Bound {
        /// One of: erdos_lo, odlyzko, halasz_fjz, halasz_sub, geometric,
        /// low_rank, hamming_ball, rank_inheritance, closed_form, main_bound,
        /// sum_identity.
        name: String,
        /// Comma-separated parameters, e.g. k=2,t=4 or s=2^65536.
        #[arg(long, default_value = "")]
        params: String,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Produce and verify robustness certificates.
    Certify {
        #[command(subcommand)]
        what: CertifyCommand,
    },
    /// Constructive index-set splitting for a matrix pair (M, A).
    Split {
        /// Constraint matrix M (k x n) JSON.
        #[arg(long)]
        input: PathBuf,
        /// Symmetric matrix A (n x n) JSON.
        #[arg(long)]
        quad: PathBuf,
        /// Robustness parameter s (rational).
        #[arg(long)]
        s: String,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Reproducible experiment harness.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentCommand,
    },
    /// Induced edge statistics N_G(k, l) of a graph.
    Edgestats {
        /// Edge-list text file, one "u v" pair per line, 0-indexed.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Optional explicit vertex count.
        #[arg(long)]
        n: Option<usize>,
        /// Cap on C(n, k).
        #[arg(long, default_value_t = 100_000_000)]
        cap: u64,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Halasz-class membership of a k x n matrix.
    Halasz {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = rank::DEFAULT_EXACT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// M_r-class membership of a triple (T, U, A).
    Mclass {
        /// A (n x m) JSON.
        #[arg(long)]
        input: PathBuf,
        /// T (k x m) JSON.
        #[arg(long)]
        t: PathBuf,
        /// U (k x n) JSON.
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Family sweep with exact probabilities and structural metrics (CSV).
    Sweep {
        /// squared_sum, bilinear_split, random_dense or random_matching.
        #[arg(long)]
        family: String,
        /// Instance sizes, e.g. 2,4,6,8.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 22)]
        cap: usize,
        #[arg(long, default_value_t = 13)]
        fixing_cap: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Exact decoupling verification for the event Q = 0.
    Decoupling {
        /// Polynomial JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated index set I, e.g. 0,1,2.
        #[arg(long)]
        i_set: String,
        /// Cap on n + |I|.
        #[arg(long, default_value_t = 30)]
        cap: usize,
        #[command(flatten)]
        io: IoArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(io: &IoArgs, text: &str) -> qlo_core::Result<()> {
    match &io.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            let result = out
                .write_all(text.as_bytes())
                .and_then(|_| out.write_all(b"\n"));
            if let Err(e) = result {
                // a closed downstream pipe (head, grep -q) is not our error
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                return Err(e.into());
            }
        }
    }
    Ok(())
}

fn read(path: &PathBuf) -> qlo_core::Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Accepts "p/q" or "2^e" (the bound grids live at astronomical s).
fn parse_rational_or_pow2(text: &str) -> qlo_core::Result<Rational> {
    if let Some(exp) = text.strip_prefix("2^") {
        let e: i64 = exp
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?;
        return Ok(qlo_core::num::pow2(e));
    }
    parse_rational(text)
}

struct Params(Vec<(String, String)>);

impl Params {
    fn parse(text: &str) -> qlo_core::Result<Params> {
        let mut out = Vec::new();
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Params(out))
    }

    fn get(&self, key: &str) -> qlo_core::Result<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key}")))
    }

    fn usize(&self, key: &str) -> qlo_core::Result<usize> {
        self.get(key)?
            .parse()
            .map_err(|_| Error::Parse(format!("parameter {key} must be an integer")))
    }

    fn u64(&self, key: &str) -> qlo_core::Result<u64> {
        self.get(key)?
            .parse()
            .map_err(|_| Error::Parse(format!("parameter {key} must be an integer")))
    }

    fn rational(&self, key: &str) -> qlo_core::Result<Rational> {
        parse_rational_or_pow2(self.get(key)?)
    }
}

fn run(cli: Cli) -> qlo_core::Result<ExitCode> {
    match cli.command {
        Command::Prob {
            input,
            constraint,
            z,
            dist,
            samples,
            seed,
            cap,
            parallel,
            io,
        } => {
            let q = jsonio::poly_from_json(&read(&input)?)?;
            let z_val = z.as_deref().map(parse_rational).transpose()?;
            if let Some(samples) = samples {
                let z_val = z_val.ok_or_else(|| {
                    Error::InvalidParameter("sampling needs --z <value>".into())
                })?;
                let report = match dist {
                    Some(path) => {
                        let d = jsonio::product_dist_from_json(&read(&path)?)?;
                        engine::monte_carlo(&q, &d, &z_val, samples, seed)?
                    }
                    None => engine::monte_carlo_rademacher(&q, &z_val, samples, seed)?,
                };
                let result = serde_json::json!({
                    "event": format!("Q = {z_val}"),
                    "hits": report.hits,
                    "samples": report.samples,
                    "estimate": qlo_core::num::format_rational(&report.estimate),
                    "wilson_center": qlo_core::num::format_rational(&report.wilson_center),
                    "wilson_95_halfwidth": qlo_core::num::format_rational(&report.wilson_halfwidth),
                    "seed": seed,
                });
                emit(&io, &serde_json::to_string_pretty(&result)?)?;
                return Ok(ExitCode::SUCCESS);
            }
            if let Some(path) = dist {
                let d = jsonio::product_dist_from_json(&read(&path)?)?;
                let z_val = z_val.ok_or_else(|| {
                    Error::InvalidParameter("general distributions need --z <value>".into())
                })?;
                let p = engine::general_point_prob(&q, &d, &z_val, engine::general::DEFAULT_GENERAL_CAP)?;
                let result = serde_json::json!({
                    "event": format!("Q = {z_val}"),
                    "prob": qlo_core::num::format_rational(&p),
                });
                emit(&io, &serde_json::to_string_pretty(&result)?)?;
                return Ok(ExitCode::SUCCESS);
            }
            let cons = constraint
                .map(|path| jsonio::constraint_from_json(&read(&path)?))
                .transpose()?;
            let opts = EnumOptions::serial(cap).with_parallel(parallel);
            let hist = engine::histogram(&q, cons.as_ref(), &opts)?;
            let text = match z_val {
                Some(zv) => {
                    let p = hist.point_prob(&zv);
                    let event = match &cons {
                        Some(_) => format!("Q = {zv} and M xi = w"),
                        None => format!("Q = {zv}"),
                    };
                    serde_json::to_string_pretty(&jsonio::event_result(&event, &p))?
                }
                None => {
                    let (sup_z, sup_p) = hist.sup_point_prob().expect("nonempty histogram");
                    let mut value = serde_json::to_value(jsonio::histogram_to_dto(
                        "distribution of Q",
                        &hist,
                    ))?;
                    value["sup_z"] =
                        serde_json::Value::String(qlo_core::num::format_rational(&sup_z));
                    value["sup_prob"] =
                        serde_json::Value::String(qlo_core::num::format_rational(
                            &sup_p.to_rational(),
                        ));
                    serde_json::to_string_pretty(&value)?
                }
            };
            emit(&io, &text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Bound { name, params, io } => {
            let p = Params::parse(&params)?;
            let bound = match name.as_str() {
                "erdos_lo" => bounds::erdos_lo(p.usize("n")?)?,
                "odlyzko" => bounds::odlyzko(p.usize("k")?),
                "halasz_fjz" => bounds::halasz_fjz(p.usize("k")?, p.u64("t")?)?,
                "halasz_sub" => bounds::halasz_sub(p.usize("k")?, &p.rational("s")?)?,
                "geometric" => bounds::geometric(p.usize("d")?, p.usize("r")?, p.u64("t")?)?,
                "low_rank" => bounds::low_rank(p.usize("k")?, &p.rational("s")?, p.usize("r")?)?,
                "hamming_ball" => {
                    bounds::hamming_ball(p.usize("k")?, p.usize("r")?, &p.rational("s")?)?
                }
                "rank_inheritance" => bounds::rank_inheritance(p.usize("k")?, &p.rational("s")?)?,
                "closed_form" => bounds::closed_form(
                    p.usize("k")? as u32,
                    p.usize("ell")? as u32,
                    &p.rational("s")?,
                )?,
                "main_bound" => {
                    let mb = bounds::main_bound(&p.rational("s")?)?;
                    let result = serde_json::json!({
                        "name": "main_bound",
                        "log2": format!("{:.20}", mb.bound.log2_f64_upper()),
                        "clamped": mb.bound.clamped(),
                        "ell": mb.ell,
                        "bracket_log2_lo": format!("{}", mb.bracket_log2.lo),
                        "c1_log2": format!("{:.20}", rational_f64(&mb.c1_log2.hi)),
                    });
                    emit(&io, &serde_json::to_string_pretty(&result)?)?;
                    return Ok(ExitCode::SUCCESS);
                }
                "sum_identity" => {
                    let v = bounds::sum_identity(p.usize("k")? as u32, p.usize("i")? as u32)?;
                    let result = serde_json::json!({
                        "name": "sum_identity",
                        "value": qlo_core::num::format_rational(&v),
                    });
                    emit(&io, &serde_json::to_string_pretty(&result)?)?;
                    return Ok(ExitCode::SUCCESS);
                }
                other => {
                    return Err(Error::InvalidParameter(format!("unknown bound {other:?}")))
                }
            };
            let text = serde_json::to_string_pretty(&jsonio::bound_to_dto(&name, &bound))?;
            emit(&io, &text)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Certify { what } => match what {
            CertifyCommand::Halasz {
                input,
                s,
                budget,
                io,
            } => {
                let m = jsonio::matrix_from_json(&read(&input)?)?;
                let cert = rank::halasz_membership(&m, s, budget);
                let verified = rank::verify_halasz_cert(&m, &cert)?;
                let mut value = serde_json::to_value(&cert)?;
                value["verified"] = serde_json::Value::Bool(verified);
                emit(&io, &serde_json::to_string_pretty(&value)?)?;
                Ok(match cert.verdict {
                    rank::Verdict::Inconclusive => ExitCode::from(2),
                    _ => ExitCode::SUCCESS,
                })
            }
            CertifyCommand::Mclass {
                input,
                t,
                u,
                r,
                s,
                io,
            } => {
                let a = jsonio::matrix_from_json(&read(&input)?)?;
                let t = jsonio::matrix_from_json(&read(&t)?)?;
                let u = jsonio::matrix_from_json(&read(&u)?)?;
                match rank::m_membership(&t, &u, &a, r, s)? {
                    Some(cert) => {
                        let verified = rank::verify_m_cert(&t, &u, &a, &cert)?;
                        let mut value = serde_json::to_value(&cert)?;
                        value["verified"] = serde_json::Value::Bool(verified);
                        emit(&io, &serde_json::to_string_pretty(&value)?)?;
                        Ok(ExitCode::SUCCESS)
                    }
                    None => {
                        emit(
                            &io,
                            &serde_json::to_string_pretty(&serde_json::json!({
                                "verdict": "not_found",
                                "note": "greedy frontier exhausted; sound for membership only",
                            }))?,
                        )?;
                        Ok(ExitCode::from(2))
                    }
                }
            }
        },

        Command::Split { input, quad, s, io } => {
            let m = jsonio::matrix_from_json(&read(&input)?)?;
            let a = jsonio::matrix_from_json(&read(&quad)?)?;
            let s = parse_rational_or_pow2(&s)?;
            let result = rank::matrix_split(&m, &a, &s)?;
            let verified = result.verify(&m, &a)?;
            let mut value = serde_json::to_value(&result)?;
            value["verified"] = serde_json::Value::Bool(verified);
            emit(&io, &serde_json::to_string_pretty(&value)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Experiment { kind } => match kind {
            ExperimentCommand::Sweep {
                family,
                sizes,
                seed,
                cap,
                fixing_cap,
                io,
            } => {
                let sizes: Vec<usize> = sizes
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| {
                        p.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad size {p:?}")))
                    })
                    .collect::<qlo_core::Result<_>>()?;
                let spec = sweep::SweepSpec {
                    family: sweep::Family::parse(&family)?,
                    sizes,
                    seed,
                    enumeration_cap: cap,
                    fixing_cap,
                };
                let csv = sweep::run_sweep(&spec)?;
                emit(&io, &csv)?;
                Ok(ExitCode::SUCCESS)
            }
            ExperimentCommand::Decoupling {
                input,
                i_set,
                cap,
                io,
            } => {
                let q = jsonio::poly_from_json(&read(&input)?)?;
                let i_set: Vec<usize> = i_set
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| {
                        p.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad index {p:?}")))
                    })
                    .collect::<qlo_core::Result<_>>()?;
                let report = experiments::verify_decoupling(&q, &i_set, cap)?;
                let result = serde_json::json!({
                    "lhs_squared": qlo_core::num::format_rational(&report.lhs_squared),
                    "rhs": qlo_core::num::format_rational(&report.rhs),
                    "pass": report.pass,
                });
                emit(&io, &serde_json::to_string_pretty(&result)?)?;
                Ok(ExitCode::SUCCESS)
            }
        },

        Command::Edgestats {
            input,
            k,
            n,
            cap,
            io,
        } => {
            let g = experiments::Graph::parse_edge_list(&read(&input)?, n)?;
            let counts = experiments::edge_stats(&g, k, cap)?;
            if io.format == "csv" {
                let mut text = String::from("# qlo-edgestats-v1: l,count,ratio,shape\n");
                for (l, c) in &counts {
                    let ratio = experiments::edgestats::normalized_ratio(&g, k, *c);
                    let shape = experiments::inducibility_shape(k, *l)
                        .map_or("n/a".into(), |v| format!("{v:.6}"));
                    text.push_str(&format!(
                        "{l},{c},{},{shape}\n",
                        qlo_core::num::format_rational(&ratio)
                    ));
                }
                emit(&io, &text)?;
            } else {
                let rows: Vec<serde_json::Value> = counts
                    .iter()
                    .map(|(l, c)| {
                        let ratio = experiments::edgestats::normalized_ratio(&g, k, *c);
                        serde_json::json!({
                            "l": l,
                            "count": c.to_string(),
                            "ratio": qlo_core::num::format_rational(&ratio),
                            "shape": experiments::inducibility_shape(k, *l),
                        })
                    })
                    .collect();
                let result = serde_json::json!({
                    "n": g.n(),
                    "k": k,
                    "counts": rows,
                });
                emit(&io, &serde_json::to_string_pretty(&result)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn rational_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
