use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gpp_core::bounds::{enumerate_optimum, heuristic_upper_bound, ENUMERATION_LIMIT};
use gpp_core::driver::{solve, BoundReport, SolveConfig};
use gpp_core::graph::{
    gen_gnp_degree, gen_spinglass, gen_unit_disk, read_edge_list, write_edge_list, GraphInstance, PartitionSpec,
};
use gpp_core::relaxation::Problem;

const THREADS_ENV: &str = "GPP_THREADS";

#[derive(Parser)]
#[command(name = "gpp-bound", version, about = "Lower bounds for graph equipartition and bisection")]
struct Cli {
    /// Worker threads (defaults to $GPP_THREADS, then to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a certified lower bound.
    Solve(SolveArgs),
    /// Write a generated instance as an edge list.
    Gen(GenArgs),
    /// Exhaustive optimum and heuristic upper bound for a small instance.
    Oracle(OracleArgs),
    /// Check lb ≤ optimum ≤ ub on random small instances.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Gnp,
    Udg,
    Spinglass2pm,
    Spinglass3pm,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    /// Expected degree for `gnp`.
    #[arg(long)]
    degree: Option<f64>,
    /// Connection radius for `udg`.
    #[arg(long)]
    radius: Option<f64>,
    /// Side length of the spin glass torus.
    #[arg(long)]
    nr: Option<usize>,
    /// Fraction of negative spin glass couplings.
    #[arg(long, default_value_t = 0.5)]
    neg_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    /// Edge-list file: header `n m`, then 1-based `u v w` lines.
    #[arg(long, conflicts_with = "family")]
    file: Option<PathBuf>,
    /// Generate the instance instead of reading it.
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    degree: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    nr: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    neg_fraction: f64,
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
}

#[derive(Args)]
struct PartitionArgs {
    /// Equal parts; requires --k.
    #[arg(long, conflicts_with = "bisection")]
    equipartition: bool,
    #[arg(long)]
    k: Option<usize>,
    /// Two parts of sizes m1 and n − m1; requires --m1.
    #[arg(long)]
    bisection: bool,
    #[arg(long)]
    m1: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    partition: PartitionArgs,
    /// Known upper bound; otherwise a local search bound is computed.
    #[arg(long)]
    ub: Option<f64>,
    #[arg(long, default_value_t = 20)]
    ub_restarts: usize,
    #[arg(long)]
    max_outer: Option<usize>,
    #[arg(long)]
    num_cuts: Option<usize>,
    /// Time limit in seconds.
    #[arg(long)]
    max_time: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one JSON record per line to this path (`-` for stdout).
    #[arg(long)]
    jsonl: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    partition: PartitionArgs,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn generate(
    family: Family,
    n: Option<usize>,
    degree: Option<f64>,
    radius: Option<f64>,
    nr: Option<usize>,
    neg_fraction: f64,
    seed: u64,
) -> Result<GraphInstance> {
    let need_n = || n.context("--n is required for this family");
    let need_nr = || nr.context("--nr is required for spin glass families");
    let g = match family {
        Family::Gnp => gen_gnp_degree(need_n()?, degree.context("--degree is required for gnp")?, seed)?,
        Family::Udg => gen_unit_disk(need_n()?, radius.context("--radius is required for udg")?, seed)?,
        Family::Spinglass2pm => gen_spinglass(2, need_nr()?, neg_fraction, seed)?,
        Family::Spinglass3pm => gen_spinglass(3, need_nr()?, neg_fraction, seed)?,
    };
    Ok(g)
}

impl InstanceArgs {
    fn load(&self) -> Result<GraphInstance> {
        match (&self.file, self.family) {
            (Some(path), _) => read_edge_list(path).with_context(|| format!("reading {}", path.display())),
            (None, Some(f)) => generate(f, self.n, self.degree, self.radius, self.nr, self.neg_fraction, self.gen_seed),
            (None, None) => bail!("give an instance with --file or --family"),
        }
    }
}

impl PartitionArgs {
    fn spec(&self, n: usize) -> Result<PartitionSpec> {
        match (self.equipartition, self.bisection) {
            (true, false) => Ok(PartitionSpec::equipartition(n, self.k.context("--equipartition needs --k")?)?),
            (false, true) => Ok(PartitionSpec::bisection(n, self.m1.context("--bisection needs --m1")?)?),
            _ => match (self.k, self.m1) {
                (Some(k), None) => Ok(PartitionSpec::equipartition(n, k)?),
                (None, Some(m1)) => Ok(PartitionSpec::bisection(n, m1)?),
                _ => bail!("choose --equipartition --k K or --bisection --m1 M"),
            },
        }
    }
}

fn problem_of(spec: &PartitionSpec) -> Problem {
    match spec.kind {
        gpp_core::graph::PartitionKind::Equipartition => Problem::Ep,
        gpp_core::graph::PartitionKind::Bisection => Problem::Bp,
    }
}

fn print_table(r: &BoundReport, out: &mut impl Write) -> io::Result<()> {
    let ub = r.ub.map_or("-".to_string(), |u| format!("{u}"));
    writeln!(
        out,
        "{:<24} {:>6} {:>4} {:>10} {:>12} {:>9} {:>7} {:>8} {:>6}",
        "graph", "n", "k", "ub", "lb", "time", "#cuts", "#iter", "#outer"
    )?;
    writeln!(
        out,
        "{:<24} {:>6} {:>4} {:>10} {:>12.4} {:>9.2} {:>7} {:>8} {:>6}",
        r.graph, r.n, r.k, ub, r.lb, r.wall_time, r.total_cuts, r.inner_iterations, r.outer_loops
    )?;
    writeln!(out, "stop: {:?}", r.stop)?;
    if let Some(rounded) = r.lb_rounded {
        writeln!(out, "rounded lb: {rounded}")?;
    }
    Ok(())
}

fn run_solve(a: &SolveArgs) -> Result<()> {
    let g = a.instance.load()?;
    let spec = a.partition.spec(g.n())?;
    let mut cfg = SolveConfig::defaults(g.n(), problem_of(&spec));
    cfg.seed = a.seed;
    cfg.ub = match a.ub {
        Some(u) => Some(u),
        None => Some(heuristic_upper_bound(&g, &spec, a.seed, a.ub_restarts)?.0),
    };
    if let Some(v) = a.max_outer {
        cfg.max_outer_loops = v;
    }
    if let Some(v) = a.num_cuts {
        cfg.num_cuts = v;
    }
    if let Some(t) = a.max_time {
        if !(t >= 0.0 && t.is_finite()) {
            bail!("--max-time must be a non-negative number of seconds");
        }
        cfg.max_time = Duration::from_secs_f64(t);
    }
    let report = solve(&g, &spec, &cfg)?;
    let stdout = io::stdout();
    match &a.jsonl {
        Some(p) if p.as_os_str() == "-" => report.write_jsonl(stdout.lock())?,
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(f);
            report.write_jsonl(&mut w)?;
            w.flush()?;
            print_table(&report, &mut stdout.lock())?;
        }
        None => print_table(&report, &mut stdout.lock())?,
    }
    Ok(())
}

fn run_gen(a: &GenArgs) -> Result<()> {
    let g = generate(a.family, a.n, a.degree, a.radius, a.nr, a.neg_fraction, a.seed)?;
    match &a.output {
        Some(p) => write_edge_list(&g, p).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", gpp_core::graph::format_edge_list(&g)),
    }
    Ok(())
}

fn run_oracle(a: &OracleArgs) -> Result<()> {
    let g = a.instance.load()?;
    let spec = a.partition.spec(g.n())?;
    let (ub, _) = heuristic_upper_bound(&g, &spec, a.seed, a.restarts)?;
    println!("heuristic ub: {ub}");
    if g.n() <= ENUMERATION_LIMIT {
        let (opt, part) = enumerate_optimum(&g, &spec)?;
        println!("optimum: {opt}");
        let parts: Vec<String> = part.iter().map(|p| (p + 1).to_string()).collect();
        println!("partition: {}", parts.join(" "));
    } else {
        println!("optimum: skipped (n = {} exceeds {ENUMERATION_LIMIT})", g.n());
    }
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Result<bool> {
    let mut ok = true;
    for t in 0..a.instances {
        let seed = a.seed + t as u64;
        let n = [6, 8, 9, 10, 12][t % 5];
        let g = gen_gnp_degree(n, (n as f64 / 2.0).min((n - 1) as f64), seed)?;
        let spec = match t % 3 {
            0 if n % 2 == 0 => PartitionSpec::equipartition(n, 2)?,
            1 if n % 3 == 0 => PartitionSpec::equipartition(n, 3)?,
            _ => PartitionSpec::bisection(n, (0.6 * n as f64).ceil() as usize)?,
        };
        let (opt, _) = enumerate_optimum(&g, &spec)?;
        let (ub, _) = heuristic_upper_bound(&g, &spec, seed, 10)?;
        let mut cfg = SolveConfig::defaults(n, problem_of(&spec));
        cfg.ub = Some(ub);
        cfg.seed = seed;
        let r = solve(&g, &spec, &cfg)?;
        let lb_ok = r.lb_rounded.map_or(r.lb <= opt + 1e-9, |c| c as f64 <= opt);
        let pass = lb_ok && opt <= ub + 1e-9;
        ok &= pass;
        println!(
            "{} {:<24} m={:?} lb={:.4} opt={opt} ub={ub}",
            if pass { "PASS" } else { "FAIL" },
            g.name(),
            spec.m,
            r.lb
        );
    }
    Ok(ok)
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().with_context(|| format!("{THREADS_ENV}={v} is not a thread count"))?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|()| match &cli.command {
        Command::Solve(a) => run_solve(a).map(|()| true),
        Command::Gen(a) => run_gen(a).map(|()| true),
        Command::Oracle(a) => run_oracle(a).map(|()| true),
        Command::Verify(a) => run_verify(a),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
