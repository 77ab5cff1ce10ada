//! `relcomp`: run, verify and time modular composition algorithms.

mod check;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use relcomp::compose::ceil_sqrt;
use relcomp::error::Error;
use relcomp::instance::{parse_coeffs, Instance, SplitMix64};
use relcomp::relations::{mm_basis, nmu_basis, RelationBasis, TruncatedPowerTable};

use report::{digest, loglog_slope, Row};
use run::{algo_name, run_bivariate, run_compose, run_mpe, small_field_warning, verify_compose, Algo, BivAlgo, ComposeAlgo, Outcome};

const EXIT_USAGE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "relcomp", version, about = "Modular composition over prime fields: run, verify, time")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Debug)]
struct InstanceArgs {
    /// Prime modulus
    #[arg(long, default_value_t = 998244353)]
    p: u64,
    /// Degree of the modulus for random instances
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Read p, f, a, g from a key=value file instead
    #[arg(long, conflicts_with_all = ["f", "a", "g"])]
    instance: Option<PathBuf>,
    /// Modulus coefficients, low to high (overrides the random one)
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    g: Option<String>,
    /// Skip the oracle re-check
    #[arg(long)]
    no_verify: bool,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance, String> {
        if let Some(path) = &self.instance {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            return Instance::parse(&text).map_err(|e| format!("{}: {e}", path.display()));
        }
        let n = match &self.f {
            Some(f) => parse_coeffs(f)?.len().saturating_sub(1),
            None => self.n,
        };
        let mut inst = Instance::random(self.p, n, self.seed).map_err(|e| e.to_string())?;
        if self.f.is_none() && self.a.is_none() && self.g.is_none() {
            return Ok(inst);
        }
        let text = |p: &relcomp::poly::Poly| p.coeffs().iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let pick = |o: &Option<String>, p: &relcomp::poly::Poly| o.clone().unwrap_or_else(|| text(p));
        inst = Instance::parse(&format!(
            "p={}\nf={}\na={}\ng={}\n",
            self.p,
            pick(&self.f, &inst.f),
            pick(&self.a, &inst.a),
            pick(&self.g, &inst.g)
        ))
        .map_err(|e| e.to_string())?;
        Ok(inst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Module {
    #[value(name = "N")]
    N,
    #[value(name = "M")]
    M,
}

#[derive(Subcommand)]
enum Command {
    /// g(a) rem f
    Compose {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_enum, default_value = "relmat")]
        algo: ComposeAlgo,
        /// Print the result coefficients
        #[arg(long)]
        print: bool,
    },
    /// G(x, a) rem f for a seeded random G
    Bivcompose {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_enum, default_value = "kronecker")]
        algo: BivAlgo,
        /// y-bound of G (default n)
        #[arg(long)]
        d: Option<usize>,
        /// Block size (default: smallest mu with mu^3 >= d)
        #[arg(long)]
        mu: Option<usize>,
        #[arg(long)]
        print: bool,
    },
    /// Evaluate a random G at n points with distinct abscissae
    Mpe {
        #[arg(long, default_value_t = 998244353)]
        p: u64,
        /// Number of points, also the x-bound of G
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// y-bound of G (default n)
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        no_verify: bool,
        #[arg(long)]
        print: bool,
    },
    /// Print a relation basis with its degrees and certification
    Basis {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_enum, ignore_case = true)]
        module: Module,
        /// Block size (default ceil(sqrt n))
        #[arg(long)]
        mu: Option<usize>,
    },
    /// Run the property suite on seeded instances
    Check {
        #[arg(long, default_value_t = 998244353)]
        p: u64,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        sizes: Vec<usize>,
        /// Instances per size
        #[arg(long, default_value_t = 5)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Size sweep with CSV/JSON output
    Bench {
        #[arg(long, default_value_t = 998244353)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "brent-kung,relmat")]
        algo: Vec<Algo>,
        /// y-bound of G for bivariate algorithms (default n)
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also emit one row per pipeline phase
        #[arg(long)]
        phases: bool,
        #[arg(long)]
        no_verify: bool,
        /// Perturb this algorithm's output before verification (exercises the abort path)
        #[arg(long, value_enum, hide = true)]
        corrupt: Option<Algo>,
    },
}

fn coeff_list(c: &[u64]) -> String {
    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn print_outcome(o: &Outcome, print: bool) -> ExitCode {
    for w in &o.warnings {
        eprintln!("{w}");
    }
    let p = o.params;
    let verified = o.verified.map_or("skipped".to_string(), |v| v.to_string());
    println!(
        "algo={} n={} m={} d={} mu={} delta={} generic={} verified={} digest={}",
        o.algo,
        p.n,
        p.m,
        p.d,
        p.mu,
        p.delta,
        o.generic,
        verified,
        digest(&o.output)
    );
    for (ph, t) in &o.phases {
        println!("phase={ph} millis={}", report::millis(*t));
    }
    println!("phase=total millis={}", report::millis(o.total));
    if print {
        println!("result={}", coeff_list(&o.output));
    }
    if o.verified == Some(false) {
        eprintln!("error: result differs from the reference oracle");
        return ExitCode::from(EXIT_MISMATCH);
    }
    ExitCode::SUCCESS
}

fn warn_field(field: &relcomp::field::Field, n: usize) {
    if let Some(w) = small_field_warning(field, n) {
        eprintln!("{w}");
    }
}

fn print_basis(b: &RelationBasis, n: usize, label: &str) {
    let expected = n.div_ceil(b.mu);
    println!(
        "module={label} n={n} mu={} degree={} expected={expected} generic={} certified=true",
        b.mu, b.delta, b.generic
    );
    println!("column_degrees={}", coeff_list(&b.column_degrees().iter().map(|&c| c as u64).collect::<Vec<_>>()));
    let m = &b.matrix;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            println!("entry[{i}][{j}]={}", coeff_list(m.get(i, j).coeffs()));
        }
    }
}

fn threads() -> usize {
    std::env::var("RELCOMP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn bench_one(
    algo: Algo,
    p: u64,
    n: usize,
    d: Option<usize>,
    seed: u64,
    verify: bool,
    corrupt: bool,
) -> relcomp::error::Result<Outcome> {
    let inst = Instance::random(p, n, seed)?;
    let compose = |a: ComposeAlgo| {
        if !corrupt {
            return run_compose(a, &inst, verify);
        }
        let mut o = run_compose(a, &inst, false)?;
        match o.output.first_mut() {
            Some(c) => *c = inst.field.add(*c, 1),
            None => o.output.push(1),
        }
        o.verified = Some(verify_compose(&inst, &o.output)?);
        Ok(o)
    };
    let biv = |a: BivAlgo| {
        let g = SplitMix64::new(seed.wrapping_add(1)).bipoly(inst.field, n, d.unwrap_or(n).max(1));
        run_bivariate(a, &inst.f, &inst.a, &g, None, verify)
    };
    match algo {
        Algo::Horner => compose(ComposeAlgo::Horner),
        Algo::BrentKung => compose(ComposeAlgo::BrentKung),
        Algo::Relmat => compose(ComposeAlgo::Relmat),
        Algo::Charpoly => compose(ComposeAlgo::Charpoly),
        Algo::Nz => biv(BivAlgo::Nz),
        Algo::Kronecker => biv(BivAlgo::Kronecker),
    }
}

fn write_reports(rows: &[Row], csv: &Option<PathBuf>, json: &Option<PathBuf>) -> Result<(), String> {
    if let Some(path) = csv {
        report::write_csv(path, rows).map_err(|e| format!("{}: {e}", path.display()))?;
        eprintln!("wrote {} rows to {}", rows.len(), path.display());
    }
    if let Some(path) = json {
        report::write_json(path, rows).map_err(|e| format!("{}: {e}", path.display()))?;
        eprintln!("wrote {} rows to {}", rows.len(), path.display());
    }
    if csv.is_none() && json.is_none() {
        print!("{}", report::csv_string(rows));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let lib = |e: Error| e.to_string();
    match cli.cmd {
        Command::Compose { inst, algo, print } => {
            let i = inst.load()?;
            warn_field(&i.field, i.n());
            let o = run_compose(algo, &i, !inst.no_verify).map_err(lib)?;
            Ok(print_outcome(&o, print))
        }
        Command::Bivcompose { inst, algo, d, mu, print } => {
            let i = inst.load()?;
            let n = i.n();
            warn_field(&i.field, n);
            let g = SplitMix64::new(inst.seed.wrapping_add(1)).bipoly(i.field, n, d.unwrap_or(n).max(1));
            let o = run_bivariate(algo, &i.f, &i.a, &g, mu, !inst.no_verify).map_err(lib)?;
            Ok(print_outcome(&o, print))
        }
        Command::Mpe { p, n, d, seed, no_verify, print } => {
            let field = relcomp::field::Field::new(p).map_err(lib)?;
            warn_field(&field, n);
            let mut rng = SplitMix64::new(seed);
            let g = rng.bipoly(field, n.max(1), d.unwrap_or(n).max(1));
            let pts = rng.points(&field, n).map_err(lib)?;
            let o = run_mpe(&g, &pts, !no_verify).map_err(lib)?;
            Ok(print_outcome(&o, print))
        }
        Command::Basis { inst, module, mu } => {
            let i = inst.load()?;
            let n = i.n();
            warn_field(&i.field, n);
            let mu = mu.unwrap_or_else(|| ceil_sqrt(n)).max(1);
            match module {
                Module::N => print_basis(&nmu_basis(&i.f, &i.a, mu).map_err(lib)?, n, "N"),
                Module::M => {
                    let b = TruncatedPowerTable::direct(&i.f, &i.a, mu, 2 * n.div_ceil(mu))
                        .and_then(|t| mm_basis(&i.f, &i.a, mu, &t));
                    match b {
                        Ok(b) => print_basis(&b, n, "M"),
                        Err(e @ (Error::NonGeneric(_) | Error::NotInvertibleModF { .. })) => {
                            println!("module=M n={n} mu={mu} generic=false certified=false reason=\"{e}\"");
                        }
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { p, sizes, count, seed } => {
            let mut failed = false;
            for &n in &sizes {
                warn_field(&relcomp::field::Field::new(p).map_err(lib)?, n);
                for prop in check::PROPERTIES {
                    let mut t = check::Tally::default();
                    for k in 0..count {
                        match check::check_one(prop, p, n, seed.wrapping_add(k)) {
                            Ok(s) => t.add(s),
                            Err(e) => {
                                eprintln!("error: {prop} n={n} seed={}: {e}", seed.wrapping_add(k));
                                t.add(check::Status::Fail);
                            }
                        }
                    }
                    failed |= t.fail > 0;
                    println!(
                        "check {prop} n={n} pass={} nongeneric={} skipped={} fail={}",
                        t.pass, t.nongeneric, t.skipped, t.fail
                    );
                }
            }
            Ok(if failed { ExitCode::from(EXIT_MISMATCH) } else { ExitCode::SUCCESS })
        }
        Command::Bench { p, mut sizes, mut algo, d, seed, csv, json, phases, no_verify, corrupt } => {
            sizes.sort_unstable();
            sizes.dedup();
            algo.sort_unstable_by_key(|&a| algo_name(a));
            algo.dedup();
            let field = relcomp::field::Field::new(p).map_err(lib)?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads()).build().map_err(|e| e.to_string())?;
            let mut rows = Vec::new();
            for &n in &sizes {
                warn_field(&field, n);
                let outs: Vec<_> =
                    pool.install(|| algo.par_iter().map(|&a| bench_one(a, p, n, d, seed, !no_verify, corrupt == Some(a))).collect());
                let mut bad = None;
                for (o, &a) in outs.into_iter().zip(&algo) {
                    let o = o.map_err(|e| format!("{} n={n}: {e}", algo_name(a)))?;
                    for w in &o.warnings {
                        eprintln!("{w}");
                    }
                    if !no_verify && o.verified != Some(true) {
                        bad.get_or_insert(o.algo.clone());
                    }
                    rows.extend(o.rows(phases));
                }
                if let Some(a) = bad {
                    write_reports(&rows, &csv, &json)?;
                    eprintln!("error: {a} n={n} failed verification; sweep aborted");
                    return Ok(ExitCode::from(EXIT_MISMATCH));
                }
            }
            write_reports(&rows, &csv, &json)?;
            for &a in &algo {
                let name = algo_name(a);
                let pts: Vec<(usize, f64)> =
                    rows.iter().filter(|r| r.algo == name && r.phase == "total").map(|r| (r.n, r.millis)).collect();
                if let Some(s) = loglog_slope(&pts) {
                    eprintln!("slope algo={name} exponent={s:.3}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
