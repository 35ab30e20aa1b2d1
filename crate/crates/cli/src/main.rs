//! `quadmap`: sampling, bijections, scheme censuses and Monte Carlo runs
//! from the command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad usage or input.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadmap::cvs::sample_quadrangulation;
use quadmap::encodings::{contour_of_tree, sample_labeled_tree};
use quadmap::experiments::{
    column_means, fit_exponent, fit_log_log, replica_rng, run_covering, run_scaling, run_star_events, star_records,
    verify_census, write_golden, write_output, ExperimentConfig, ExperimentKind, STAR_HEADER,
};
use quadmap::metric::{discrete_pseudo_metrics, Graph, PSEUDO_METRIC_BOUND};
use quadmap::multipoint::{phi_reverse, LabeledMap, RootChoice};
use quadmap::planar_map::{HalfEdgeMap, MapJson};
use quadmap::schemes::{census_json, enumerate_schemes};

#[derive(Parser)]
#[command(name = "quadmap", version, about = "Random quadrangulations, bijections and geodesic-star experiments")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for replica loops.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// `key = value` config file, applied before the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a uniform rooted quadrangulation and print it as JSON.
    Sample {
        /// Number of faces.
        #[arg(long)]
        n: usize,
        /// Print `vertex,distance` from the pointed vertex instead.
        #[arg(long)]
        profile: bool,
    },
    /// Run the reverse construction on a labeled map (JSON file or `-`).
    PhiReverse {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Choice::Plus)]
        choice: Choice,
    },
    /// Enumerate schemes with k + 1 faces and print them as JSON.
    SchemeCensus {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dominant: bool,
        #[arg(long)]
        planted: bool,
        /// Regenerate the golden census files into this directory.
        #[arg(long)]
        write_golden: Option<PathBuf>,
    },
    /// Distances from one vertex of a map (JSON file or `-`), as CSV.
    Metrics {
        input: PathBuf,
        /// Source vertex; defaults to the origin of the root.
        #[arg(long)]
        source: Option<usize>,
    },
    /// D° and D* from a label minimum on a random labeled tree, as CSV;
    /// exits 1 if they disagree with the labels.
    Dstar {
        /// Tree edges (the contour has 2n steps).
        #[arg(long)]
        n: usize,
    },
    /// Distances in sampled quadrangulations, one row per replica.
    Scaling(RunArgs),
    /// Star-event frequencies with Wilson intervals.
    Stars {
        #[command(flatten)]
        run: RunArgs,
        /// Print per-replica counts instead of pooled frequencies.
        #[arg(long)]
        records: bool,
    },
    /// Cover sizes of geodesic star points.
    Covering(RunArgs),
    /// Exact census checks; exits 1 on any failure.
    Verify {
        #[arg(long)]
        max_quad_n: Option<usize>,
        #[arg(long)]
        max_lm_n: Option<usize>,
        #[arg(long)]
        census_k: Option<usize>,
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
    /// Least-squares slope of log y against log x from a CSV file.
    Fit {
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Average y per distinct x before fitting.
        #[arg(long)]
        means: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Face counts, e.g. `1024,4096` or `2^10..2^16`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    replicas: Option<usize>,
    /// Comma-separated ε grid.
    #[arg(long)]
    eps: Option<String>,
    /// Comma-separated β grid.
    #[arg(long)]
    beta: Option<String>,
    /// Vertex tuples per sampled map.
    #[arg(long)]
    tuples: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Choice {
    Plus,
    Minus,
}

enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(usage)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn config(cli: &Cli, kind: ExperimentKind) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::for_kind(kind);
    if let Some(p) = &cli.config {
        cfg.apply(&read_input(p)?).map_err(usage)?;
        cfg.kind = kind;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    Ok(cfg)
}

fn apply_run_args(cfg: &mut ExperimentConfig, a: &RunArgs) -> Result<(), Failure> {
    let mut set = |k: &str, v: Option<String>| match v {
        Some(v) => cfg.set(k, &v).map_err(usage),
        None => Ok(()),
    };
    set("n", a.n.clone())?;
    set("replicas", a.replicas.map(|x| x.to_string()))?;
    set("eps", a.eps.clone())?;
    set("beta", a.beta.clone())?;
    set("tuples", a.tuples.map(|x| x.to_string()))?;
    cfg.validate().map_err(usage)
}

fn emit(cfg: &ExperimentConfig, text: &str) -> Outcome {
    write_output(cfg.out.as_deref(), text).map_err(usage)
}

fn run(cli: &Cli) -> Outcome {
    let seed = cli.seed.unwrap_or(0);
    let out = |text: String| write_output(cli.out.as_deref(), &text).map_err(usage);
    match &cli.cmd {
        Command::Sample { n, profile } => {
            if *n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let pq = sample_quadrangulation(*n, &mut replica_rng(seed, *n, 0));
            if *profile {
                let mut s = String::from("vertex,distance\n");
                for (v, d) in pq.distance_profile().iter().enumerate() {
                    s.push_str(&format!("{v},{d}\n"));
                }
                out(s)
            } else {
                out(pq.q.map().to_json() + "\n")
            }
        }
        Command::PhiReverse { input, choice } => {
            let lm = LabeledMap::from_json(&read_input(input)?).map_err(usage)?;
            let choice = match choice {
                Choice::Plus => RootChoice::Plus,
                Choice::Minus => RootChoice::Minus,
            };
            let r = phi_reverse(&lm, choice).map_err(usage)?;
            let d = &r.delayed;
            let j = serde_json::json!({
                "map": MapJson::from(d.q.map()),
                "sources": d.v,
                "delays": d.tau.tau,
                "labels": r.labels,
            });
            out(j.to_string() + "\n")
        }
        Command::SchemeCensus {
            k,
            dominant,
            planted,
            write_golden: golden,
        } => {
            if let Some(dir) = golden {
                let names = write_golden(dir, *k).map_err(usage)?;
                eprintln!("wrote {}", names.join(", "));
                return Ok(());
            }
            let ss = enumerate_schemes(*k, *dominant, *planted).map_err(usage)?;
            out(census_json(*k, *dominant, *planted, &ss))
        }
        Command::Metrics { input, source } => {
            let m = HalfEdgeMap::from_json(&read_input(input)?).map_err(usage)?;
            let src = source.unwrap_or_else(|| m.vertex(m.root()));
            if src >= m.num_vertices() {
                return Err(usage(format!("source {src} out of range")));
            }
            let mut s = String::from("vertex,distance\n");
            for (v, d) in Graph::from_map(&m).bfs(src).dist.iter().enumerate() {
                s.push_str(&format!("{v},{d}\n"));
            }
            out(s)
        }
        Command::Dstar { n } => {
            if *n == 0 || 2 * n > PSEUDO_METRIC_BOUND {
                return Err(usage(format!("--n must lie in 1..={}", PSEUDO_METRIC_BOUND / 2)));
            }
            let t = sample_labeled_tree(*n, &mut replica_rng(seed, *n, 0));
            let pm = discrete_pseudo_metrics(&contour_of_tree(&t)).map_err(usage)?;
            let s0 = pm.s_star;
            let min = pm.labels[s0];
            let mut s = String::from("t,label,d_circ,d_star\n");
            let mut bad = None;
            for t in 0..pm.d_circ.len() {
                let (dc, ds) = (pm.d_circ[s0][t], pm.d_star_times(s0, t));
                if dc != pm.labels[t] - min || ds != dc {
                    bad.get_or_insert(t);
                }
                s.push_str(&format!("{t},{},{dc},{ds}\n", pm.labels[t]));
            }
            out(s)?;
            match bad {
                Some(t) => Err(Failure::Check(format!("identity fails at time {t}"))),
                None => Ok(()),
            }
        }
        Command::Scaling(a) => {
            let mut cfg = config(cli, ExperimentKind::Scaling)?;
            apply_run_args(&mut cfg, a)?;
            emit(&cfg, &run_scaling(&cfg).map_err(usage)?)
        }
        Command::Stars { run, records } => {
            let mut cfg = config(cli, ExperimentKind::Stars)?;
            apply_run_args(&mut cfg, run)?;
            let text = if *records {
                let mut s = format!("{STAR_HEADER}\n");
                for r in star_records(&cfg).map_err(usage)? {
                    s.push_str(&r.csv_row());
                    s.push('\n');
                }
                s
            } else {
                run_star_events(&cfg).map_err(usage)?
            };
            emit(&cfg, &text)
        }
        Command::Covering(a) => {
            let mut cfg = config(cli, ExperimentKind::Covering)?;
            apply_run_args(&mut cfg, a)?;
            emit(&cfg, &run_covering(&cfg).map_err(usage)?)
        }
        Command::Verify {
            max_quad_n,
            max_lm_n,
            census_k,
            golden_dir,
        } => {
            let mut cfg = config(cli, ExperimentKind::Verify)?;
            for (k, v) in [("max_quad_n", max_quad_n), ("max_lm_n", max_lm_n), ("census_k", census_k)] {
                if let Some(v) = v {
                    cfg.set(k, &v.to_string()).map_err(usage)?;
                }
            }
            if let Some(d) = golden_dir {
                cfg.golden_dir = d.clone();
            }
            cfg.validate().map_err(usage)?;
            let rep = verify_census(&cfg);
            emit(&cfg, &rep.to_text())?;
            if rep.all_passed() {
                Ok(())
            } else {
                Err(Failure::Check(format!("{} check(s) failed", rep.failures().count())))
            }
        }
        Command::Fit { input, x, y, means } => {
            let text = read_input(input)?;
            let fit = if *means {
                let ms = column_means(&text, x, y).map_err(usage)?;
                let xs: Vec<f64> = ms.iter().map(|m| m.x).collect();
                let ys: Vec<f64> = ms.iter().map(|m| m.mean).collect();
                fit_log_log(&xs, &ys)
            } else {
                fit_exponent(&text, x, y)
            }
            .map_err(usage)?;
            out(format!(
                "slope,intercept,ci_lo,ci_hi,points\n{:?},{:?},{:?},{:?},{}\n",
                fit.slope, fit.intercept, fit.slope_ci.0, fit.slope_ci.1, fit.points
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
