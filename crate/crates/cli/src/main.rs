//! Command-line front end: translate LTL or HOA input to parity automata,
//! cross-validate the constructions, generate random automata and run the
//! benchmark families.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ltl2dpa::automata::{
    dpa_to_dot, eliminate_jumps, emit_dpa, emit_ldba, ldba_to_dot, parse_hoa, Automaton, Dpa, Ldba,
};
use ltl2dpa::pipeline::{
    bench_families, crossvalidate, determinize_ldba, parse_formula, rand_ldba, translate_pipeline, Artifacts,
    CheckBounds, Family, PipelineConfig, RandomLdba, Stats,
};

const USAGE: u8 = 1;
const FAILURE: u8 = 2;
const COUNTEREXAMPLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ltl2dpa",
    version,
    about = "LTL to deterministic parity automata via limit-deterministic Büchi automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a formula or an LDBA to a parity automaton.
    Translate(TranslateArgs),
    /// Cross-validate every construction stage on lasso words.
    Check(CheckArgs),
    /// Print a random limit-deterministic automaton.
    RandLdba(RandArgs),
    /// Translate members of the benchmark families and report sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// LTL formula, e.g. "F G a | F G b".
    #[arg(short, long)]
    formula: Option<String>,
    /// LDBA in HOA format.
    #[arg(long, value_name = "PATH")]
    input_hoa: Option<PathBuf>,
}

#[derive(Args)]
struct Construction {
    /// Build the plain automaton without oracle-based reduction.
    #[arg(long)]
    no_reduce: bool,
    /// Never remove the first ranked state.
    #[arg(long)]
    keep_smallest: bool,
    /// Maximal number of states per automaton.
    #[arg(long, value_name = "N")]
    budget: Option<usize>,
    /// Use a random order on the deterministic part drawn from this seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

impl Construction {
    fn config(&self) -> PipelineConfig {
        let mut cfg = PipelineConfig {
            reduce: !self.no_reduce,
            keep_smallest: self.keep_smallest,
            seed: self.seed,
            ..Default::default()
        };
        if let Some(n) = self.budget {
            cfg.max_ldba_states = n;
            cfg.max_dpa_states = n;
        }
        cfg
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Hoa,
    Dot,
    Json,
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    construction: Construction,
    /// Print the intermediate limit-deterministic automaton instead.
    #[arg(long)]
    ldba: bool,
    /// Keep the colors as constructed.
    #[arg(long)]
    no_compress: bool,
    /// Also translate the negation and keep the smaller result.
    #[arg(long)]
    race: bool,
    #[arg(long, value_enum, default_value = "hoa")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    construction: Construction,
    #[arg(long, default_value_t = 3)]
    max_prefix: usize,
    #[arg(long, default_value_t = 3)]
    max_period: usize,
    /// Check this many random lassos instead of all of them.
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
}

#[derive(Args)]
struct RandArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    states: usize,
    #[arg(long, default_value_t = 2)]
    letters: usize,
    /// Probability of each transition outside the deterministic part.
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    /// Probability that a transition of the deterministic part accepts.
    #[arg(long, default_value_t = 0.3)]
    acc_density: f64,
    #[arg(long, value_enum, default_value = "hoa")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    /// One of r, g, f, theta; all families when omitted.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 2)]
    n_max: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(flatten)]
    construction: Construction,
}

/// A failure with its exit code.
struct Failure(u8, String);

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure(USAGE, msg.into())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> Failure {
    Failure(FAILURE, e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Translate(args) => translate(args),
        Command::Check(args) => check(args),
        Command::RandLdba(args) => rand(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read_ldba(path: &PathBuf) -> Result<Ldba, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    match parse_hoa(&text).map_err(fail)? {
        Automaton::Ldba(a) => Ok(a),
        Automaton::Dpa(_) => Err(Failure::usage("expected a Büchi automaton, got a parity automaton")),
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| fail(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(fail),
    }
}

fn render_ldba(a: &Ldba, name: Option<&str>, format: Format) -> Result<String, Failure> {
    let a = eliminate_jumps(a).map_err(fail)?;
    Ok(match format {
        Format::Hoa => emit_ldba(&a, name).map_err(fail)?,
        Format::Dot => ldba_to_dot(&a),
        Format::Json => {
            let hoa = emit_ldba(&a, name).map_err(fail)?;
            let v = json!({ "states": a.num_states(), "qd_states": a.qd_count(), "hoa": hoa });
            format!("{v:#}\n")
        }
    })
}

fn render_dpa(d: &Dpa, name: Option<&str>, stats: &Stats, format: Format) -> String {
    match format {
        Format::Hoa => emit_dpa(d, name),
        Format::Dot => dpa_to_dot(d),
        Format::Json => {
            let v = json!({ "formula": name, "stats": stats, "hoa": emit_dpa(d, name) });
            format!("{v:#}\n")
        }
    }
}

fn translate(args: TranslateArgs) -> Result<(), Failure> {
    let mut cfg = args.construction.config();
    cfg.compress = !args.no_compress;
    cfg.race = args.race;
    let out = match (&args.source.formula, &args.source.input_hoa) {
        (Some(text), _) => {
            if args.ldba {
                let (f, aps) = parse_formula(text).map_err(fail)?;
                let t = ltl2dpa::ltl2ldba::translate_with_cap(
                    &f,
                    &aps,
                    cfg.max_aps,
                    &ltl2dpa::budget::Budget::new(cfg.max_ldba_states),
                )
                .map_err(fail)?;
                render_ldba(&t.ldba, Some(text), args.format)?
            } else {
                let out = translate_pipeline(text, &cfg).map_err(fail)?;
                render_dpa(&out.dpa, Some(text), &out.stats, args.format)
            }
        }
        (None, Some(path)) => {
            let a = read_ldba(path)?;
            if args.ldba {
                render_ldba(&a, None, args.format)?
            } else {
                let (d, stats) = determinize_ldba(&a, &cfg).map_err(fail)?;
                render_dpa(&d, None, &stats, args.format)
            }
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    write_out(args.output.as_ref(), &out)
}

fn check(args: CheckArgs) -> Result<(), Failure> {
    let cfg = args.construction.config();
    let art = match (&args.source.formula, &args.source.input_hoa) {
        (Some(text), _) => {
            let (f, aps) = parse_formula(text).map_err(fail)?;
            Artifacts::from_formula(&f, &aps, &cfg).map_err(fail)?
        }
        (None, Some(path)) => Artifacts::from_ldba(&read_ldba(path)?, &cfg).map_err(fail)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    let bounds = CheckBounds {
        max_prefix: args.max_prefix,
        max_period: args.max_period,
        samples: args.samples,
        seed: args.construction.seed.unwrap_or(0),
    };
    if bounds.max_period == 0 {
        return Err(Failure::usage("--max-period must be at least 1"));
    }
    let report = crossvalidate(&art, &bounds);
    println!("{:#}", json!(report));
    match report.counterexample {
        None => Ok(()),
        Some(c) => Err(Failure(COUNTEREXAMPLE, format!("oracles disagree on {}", c.word))),
    }
}

fn rand(args: RandArgs) -> Result<(), Failure> {
    if args.states < 2 || args.letters == 0 {
        return Err(Failure::usage("need at least 2 states and 1 letter"));
    }
    for (name, p) in [("density", args.density), ("acc-density", args.acc_density)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Failure::usage(format!("--{name} must lie in [0, 1]")));
        }
    }
    let p = RandomLdba {
        states: args.states,
        letters: args.letters,
        density: args.density,
        acc_density: args.acc_density,
    };
    let a = rand_ldba(args.seed, &p);
    let name = format!("random seed {}", args.seed);
    write_out(None, &render_ldba(&a, Some(&name), args.format)?)
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(Failure::usage("need 1 <= --n-min <= --n-max"));
    }
    let cfg = args.construction.config();
    let families = match args.family {
        Some(f) => vec![f],
        None => Family::ALL.to_vec(),
    };
    let sink: Box<dyn Write> = match &args.csv {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| fail(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout()),
    };
    let mut csv = csv::Writer::from_writer(sink);
    for family in families {
        for record in bench_families(family, args.n_min..=args.n_max, &cfg).map_err(fail)? {
            csv.serialize(&record).map_err(fail)?;
            csv.flush().map_err(fail)?;
        }
    }
    Ok(())
}
