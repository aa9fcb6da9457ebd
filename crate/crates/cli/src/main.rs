//! `ltlmon`: command-line front end.

use std::fs;
use std::io::{self, BufRead, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;

use ltlmon::alphabet::Alphabet;
use ltlmon::automata::{
    ltl_to_dra, parse_hoa, print_hoa, AutomatonError, RabinAutomaton, StateClass, DEFAULT_STATE_CAP,
};
use ltlmon::experiments::{self, ExperimentConfig, FamilyParams};
use ltlmon::ltl::{lasso_models, parse_ltl, random_formula, random_lasso, Formula};
use ltlmon::markov::{format_prob, parse_prob, product, sample_run, MarkovChain, Prob, ProductChain};
use ltlmon::monitor::{format_step, Monitor, PMin, Property};
use ltlmon::online::{format_online_step, OnlineMonitor};

#[derive(Parser)]
#[command(name = "ltlmon", version, about = "Runtime monitoring of LTL properties over unknown Markov chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate an LTL formula into a deterministic Rabin automaton (HOA).
    Translate {
        formula: String,
        /// Extra atomic propositions to include in the alphabet.
        #[arg(long = "ap", value_delimiter = ',')]
        aps: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: usize,
    },
    /// Print the empty/universal/other class of every automaton state.
    Classify {
        /// HOA file; standard input if omitted.
        hoa: Option<PathBuf>,
    },
    /// Build the product of an automaton and a chain.
    Product(PropertyArgs),
    /// Sample a run of a chain and print its states, one per line.
    Simulate {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        steps: usize,
    },
    /// Monitor a state stream from standard input with the full-memory monitor.
    Monitor(MonitorArgs),
    /// Monitor a state stream with the memory-saving monitor.
    OnlineMonitor(MonitorArgs),
    /// Exact probability that a run of a product chain is accepted.
    Solve {
        /// Product chain file as written by `product`.
        #[arg(long, conflicts_with_all = ["chain", "formula", "dra"])]
        product: Option<PathBuf>,
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long, conflicts_with = "dra")]
        formula: Option<String>,
        #[arg(long)]
        dra: Option<PathBuf>,
        /// Iterative floating-point solve instead of exact elimination.
        #[arg(long)]
        float: bool,
    },
    /// Compare fixed-length and confidence-based estimation on the chain family.
    Experiment(ExperimentArgs),
    /// Write a chain of the experiment family.
    Family(FamilyArgs),
    /// Cross-check the automaton pipeline against direct lasso evaluation.
    OracleCheck {
        /// Check only this formula instead of random ones.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, default_value_t = 200)]
        formulas: usize,
        #[arg(long, default_value_t = 50)]
        lassos: usize,
        #[arg(long, default_value_t = 10)]
        max_size: usize,
        #[arg(long, default_value_t = 2)]
        aps: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        cap: usize,
    },
}

#[derive(Args)]
struct PropertyArgs {
    #[arg(long)]
    chain: PathBuf,
    #[arg(long, required_unless_present = "dra", conflicts_with = "dra")]
    formula: Option<String>,
    /// Deterministic Rabin automaton in HOA format.
    #[arg(long)]
    dra: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: usize,
}

#[derive(Args)]
struct MonitorArgs {
    #[command(flatten)]
    property: PropertyArgs,
    /// Lower bound on positive transition probabilities.
    #[arg(long)]
    pmin: String,
    /// Read states from this file instead of standard input.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, default_value_t = 4)]
    l: usize,
    #[arg(long, default_value_t = 6)]
    r_len: usize,
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value = "0.5")]
    p: String,
    #[arg(long, default_value = "0.45")]
    q: String,
    #[arg(long, default_value = "0.08")]
    s: String,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 4)]
    l: usize,
    #[arg(long, default_value_t = 6)]
    r_len: usize,
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30")]
    n: Vec<usize>,
    #[arg(long, default_value = "0.5")]
    p: String,
    #[arg(long, default_value = "0.45")]
    q: String,
    #[arg(long, default_value = "0.08")]
    s: String,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000,10000000")]
    quotas: Vec<u64>,
    #[arg(long, default_value_t = 100.0)]
    threshold: f64,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    /// Override the family's smallest transition probability.
    #[arg(long)]
    pmin: Option<String>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const INPUT: u8 = 2;
const CAP: u8 = 3;
const DISAGREEMENT: u8 = 4;

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure {
        code: INPUT,
        error: e.into(),
    }
}

fn automaton(e: AutomatonError) -> Failure {
    let code = if matches!(e, AutomatonError::StateCap(_)) { CAP } else { INPUT };
    Failure {
        code,
        error: e.into(),
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(input)
}

fn read_chain(path: &Path) -> Res<MarkovChain> {
    let c = MarkovChain::parse(&read(path)?)
        .with_context(|| path.display().to_string())
        .map_err(input)?;
    let problems = c.validate(None);
    if !problems.is_empty() {
        return Err(input(anyhow!(
            "{}: not a Markov chain:\n  {}",
            path.display(),
            problems.join("\n  ")
        )));
    }
    Ok(c)
}

fn read_hoa(path: Option<&Path>) -> Res<RabinAutomaton> {
    let text = match path {
        Some(p) => read(p)?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(input)?;
            s
        }
    };
    parse_hoa(&text).map_err(input)
}

fn parse_formula(text: &str) -> Res<Formula> {
    parse_ltl(text).map_err(input)
}

fn prob_arg(name: &str, s: &str) -> Res<Prob> {
    parse_prob(s).ok_or_else(|| input(anyhow!("--{name}: malformed probability '{s}'")))
}

/// The automaton from `--formula` or `--dra`, with a warning for
/// propositions the chain never sets.
fn load_property(args: &PropertyArgs, chain: &MarkovChain) -> Res<RabinAutomaton> {
    let dra = match (&args.formula, &args.dra) {
        (_, Some(path)) => read_hoa(Some(path))?,
        (Some(f), None) => ltl_to_dra(&parse_formula(f)?, &[], args.cap).map_err(automaton)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    for ap in dra.alphabet().names() {
        if !chain.aps().contains(ap) {
            eprintln!("warning: proposition '{ap}' holds in no state of the chain");
        }
    }
    Ok(dra)
}

fn family_params(l: usize, r_len: usize, m: usize, n: usize, p: &str, q: &str, s: &str) -> Res<FamilyParams> {
    let fp = FamilyParams {
        l,
        r_len,
        m,
        n,
        p: prob_arg("p", p)?,
        q: prob_arg("q", q)?,
        s: prob_arg("s", s)?,
    };
    fp.check().map_err(|e| input(anyhow!(e)))?;
    Ok(fp)
}

fn class_name(c: StateClass) -> &'static str {
    match c {
        StateClass::Empty => "empty",
        StateClass::Universal => "universal",
        StateClass::Other => "other",
    }
}

fn monitor_stream(args: &MonitorArgs, online: bool, out: &mut dyn Write) -> Res<()> {
    let chain = read_chain(&args.property.chain)?;
    let dra = load_property(&args.property, &chain)?;
    let pmin = PMin::new(prob_arg("pmin", &args.pmin)?).map_err(|e| input(anyhow!(e)))?;
    let prop = Arc::new(Property::new(dra));
    let letters: Vec<_> = (0..chain.num_states())
        .map(|s| chain.letter(s, prop.dra().alphabet()))
        .collect();
    let reader: Box<dyn BufRead> = match &args.input {
        Some(p) => Box::new(io::BufReader::new(
            fs::File::open(p)
                .with_context(|| format!("cannot open {}", p.display()))
                .map_err(input)?,
        )),
        None => Box::new(io::stdin().lock()),
    };
    let mut full = Monitor::new(prop.clone(), pmin.clone());
    let mut lean = OnlineMonitor::new(prop, pmin);
    let mut step = 0u64;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(input)?;
        let name = line.trim();
        if name.is_empty() || name.starts_with('#') {
            continue;
        }
        let s = chain
            .state(name)
            .ok_or_else(|| input(anyhow!("line {}: unknown state '{name}'", i + 1)))?;
        let row = if online {
            lean.observe(s, letters[s]);
            format_online_step(step, lean.verdict(), &lean.confidence(), lean.scc_size())
        } else {
            full.observe(s, letters[s]);
            format_step(step, full.verdict(), &full.confidence())
        };
        writeln!(out, "{row}").map_err(input)?;
        step += 1;
    }
    Ok(())
}

fn run(cli: Cli, out: &mut dyn Write) -> Res<()> {
    let w = |out: &mut dyn Write, s: &str| out.write_all(s.as_bytes()).map_err(input);
    match cli.command {
        Command::Translate { formula, aps, cap } => {
            let f = parse_formula(&formula)?;
            let dra = ltl_to_dra(&f, &aps, cap).map_err(automaton)?;
            w(out, &print_hoa(&dra))
        }
        Command::Classify { hoa } => {
            let dra = read_hoa(hoa.as_deref())?;
            let mut s = String::new();
            for (q, c) in dra.classify_states().into_iter().enumerate() {
                s.push_str(&format!("{q}\t{}\n", class_name(c)));
            }
            w(out, &s)
        }
        Command::Product(args) => {
            let chain = read_chain(&args.chain)?;
            let dra = load_property(&args, &chain)?;
            w(out, &product(&dra, &chain).chain.to_text())
        }
        Command::Simulate { chain, seed, steps } => {
            let c = read_chain(&chain)?;
            let run = sample_run(&c, seed, steps).map_err(|e| input(anyhow!(e)))?;
            let mut s = String::new();
            for st in run {
                s.push_str(c.name(st));
                s.push('\n');
            }
            w(out, &s)
        }
        Command::Monitor(args) => monitor_stream(&args, false, out),
        Command::OnlineMonitor(args) => monitor_stream(&args, true, out),
        Command::Solve {
            product: pfile,
            chain,
            formula,
            dra,
            float,
        } => {
            let pc = match (pfile, chain) {
                (Some(p), _) => {
                    let c = MarkovChain::parse(&read(&p)?).map_err(input)?;
                    let problems = c.validate(None);
                    if !problems.is_empty() {
                        return Err(input(anyhow!("not a Markov chain:\n  {}", problems.join("\n  "))));
                    }
                    ProductChain::from_marked_chain(c)
                }
                (None, Some(chain)) => {
                    let args = PropertyArgs {
                        chain,
                        formula,
                        dra,
                        cap: DEFAULT_STATE_CAP,
                    };
                    if args.formula.is_none() && args.dra.is_none() {
                        return Err(Failure {
                            code: 1,
                            error: anyhow!("--chain needs --formula or --dra"),
                        });
                    }
                    let c = read_chain(&args.chain)?;
                    let a = load_property(&args, &c)?;
                    product(&a, &c)
                }
                (None, None) => {
                    return Err(Failure {
                        code: 1,
                        error: anyhow!("give --product, or --chain with --formula or --dra"),
                    })
                }
            };
            if float {
                w(out, &format!("{:.12}\n", pc.sat_probability_f64(1e-14)))
            } else {
                let p = pc.sat_probability();
                let d = num_traits::ToPrimitive::to_f64(&p).unwrap_or(f64::NAN);
                w(out, &format!("{} {d:.12}\n", format_prob(&p)))
            }
        }
        Command::Family(a) => {
            let fp = family_params(a.l, a.r_len, a.m, a.n, &a.p, &a.q, &a.s)?;
            let c = experiments::build_family(&fp).map_err(|e| input(anyhow!(e)))?;
            w(out, &c.to_text())
        }
        Command::Experiment(a) => {
            let base = family_params(a.l, a.r_len, a.m, a.n.first().copied().unwrap_or(1), &a.p, &a.q, &a.s)?;
            let pmin = a.pmin.as_deref().map(|s| prob_arg("pmin", s)).transpose()?;
            if a.threshold < 1.0 {
                return Err(input(anyhow!("--threshold must be at least 1")));
            }
            let cfg = ExperimentConfig {
                base,
                ns: a.n,
                quotas: a.quotas,
                seeds: a.seeds,
                runs: a.runs,
                threshold: a.threshold,
                pmin,
            };
            let rows = experiments::run_experiment(&cfg).map_err(|e| input(anyhow!(e)))?;
            for r in rows.iter().filter(|r| r.exhausted) {
                eprintln!(
                    "warning: {} n={} quota={} seed={}: no run reached the threshold",
                    r.method, r.n, r.quota, r.seed
                );
            }
            let csv = experiments::to_csv(&rows);
            match a.out {
                Some(p) => fs::write(&p, csv)
                    .with_context(|| format!("cannot write {}", p.display()))
                    .map_err(input),
                None => w(out, &csv),
            }
        }
        Command::OracleCheck {
            formula,
            formulas,
            lassos,
            max_size,
            aps,
            max_len,
            seed,
            cap,
        } => {
            let atoms: Vec<String> = (0..aps.max(1)).map(|i| format!("p{i}")).collect();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let fixed = formula.as_deref().map(parse_formula).transpose()?;
            let count = if fixed.is_some() { 1 } else { formulas };
            let (mut checked, mut bad, mut skipped) = (0usize, 0usize, 0usize);
            let mut report = String::new();
            for _ in 0..count {
                let f = match &fixed {
                    Some(f) => f.clone(),
                    None => random_formula(&mut rng, max_size, &atoms),
                };
                let dra = match ltl_to_dra(&f, &atoms, cap) {
                    Ok(d) => d,
                    // Random formulas that blow past the cap are skipped and
                    // counted; a formula given explicitly must translate.
                    Err(AutomatonError::StateCap(_)) if fixed.is_none() => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(automaton(e)),
                };
                let ab: &Alphabet = dra.alphabet();
                for _ in 0..lassos {
                    let w = random_lasso(&mut rng, ab.len(), max_len, max_len);
                    let expected = lasso_models(&w, &f, ab).map_err(input)?;
                    checked += 1;
                    if dra.accepts_lasso(&w) != expected {
                        bad += 1;
                        let show = |ls: &[ltlmon::alphabet::Letter]| {
                            ls.iter().map(|&l| ab.display(l).to_string()).collect::<Vec<_>>().join(" ")
                        };
                        report.push_str(&format!(
                            "disagreement\t{f}\t{}\t({})^w\toracle={expected}\n",
                            show(&w.prefix),
                            show(&w.cycle)
                        ));
                    }
                }
            }
            report.push_str(&format!(
                "checked {checked} pairs, {bad} disagreements, {skipped} formulas skipped at the state cap\n"
            ));
            w(out, &report)?;
            if bad > 0 {
                return Err(Failure {
                    code: DISAGREEMENT,
                    error: anyhow!("{bad} disagreements"),
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(INPUT),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
