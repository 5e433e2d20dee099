use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use freeqm::autom::{find_noninner_witness, is_inner, Automorphism, WitnessSearch};
use freeqm::binorm::binorm;
use freeqm::coarse_lab::{self, Format};
use freeqm::comm::{cl_bounds, in_commutator_subgroup, ClConfig};
use freeqm::qm::CountingQM;
use freeqm::syntax::{parse_word, GRAMMAR};
use freeqm::words::{are_commensurable, are_strongly_commensurable, reduced_words, Word};

const USAGE_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "freeqm", version, about = "Quasimorphisms, bi-invariant norms and commutator length on free groups")]
#[command(after_help = format!("Word syntax:\n{GRAMMAR}"))]
struct Cli {
    /// Rank of the free group (2..=26)
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=26))]
    rank: u8,

    /// Report format for tabular output
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for sampled word sets
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Jsonl,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Jsonl => Format::Jsonl,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bi-invariant word norm: `word,bw[,certificate]`
    Norm {
        /// A word, or a file with one word per line
        #[arg(long)]
        input: String,
        /// Append the `s^h` factors, separated by `;`
        #[arg(long)]
        certificate: bool,
    },
    /// Commutator length bounds
    Cl {
        #[arg(long)]
        input: String,
        /// Entry length budget for the two-commutator search
        #[arg(long, default_value_t = 3, value_parser = positive)]
        budget: usize,
    },
    /// Counting quasimorphisms
    Qm {
        #[command(subcommand)]
        command: QmCommand,
    },
    /// Commensurability of two words, printed as `n,m,x` with `x gⁿ x⁻¹ = hᵐ`
    Commensurable {
        g: String,
        h: String,
        /// Strong commensurability, printed as `n,x` with `x gⁿ x⁻¹ = hⁿ`
        #[arg(long)]
        strong: bool,
    },
    /// Automorphisms given by generator images
    Aut {
        #[command(subcommand)]
        command: AutCommand,
    },
    /// Norm against commutator length over [F,F] conjugacy classes
    Sweep(LabArgs),
    /// Classes whose square is a single commutator
    SearchSquares(LabArgs),
    /// Suprema of homogeneous quasimorphisms over a word set
    QmBound {
        /// Words to bound over; defaults to sampled commutators
        #[arg(long)]
        input: Option<String>,
        #[arg(long, value_delimiter = ',')]
        patterns: Option<Vec<String>>,
        /// Longest pattern when `--patterns` is not given
        #[arg(long, default_value_t = 2, value_parser = positive)]
        pattern_max: usize,
        /// Number of sampled commutators
        #[arg(long, default_value_t = 200, value_parser = positive)]
        samples: usize,
        /// Longest entry of a sampled commutator
        #[arg(long, default_value_t = 5, value_parser = positive)]
        max_len: usize,
    },
}

#[derive(Subcommand, Debug)]
enum QmCommand {
    /// One value per input word, rendered as `p/q`
    Eval {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        input: String,
        /// Exact homogenization instead of the raw count
        #[arg(long, conflicts_with = "numeric_n")]
        homogeneous: bool,
        /// q(gⁿ)/n instead of the raw count
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        numeric_n: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct AutArgs {
    /// Images of the generators, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    images: Vec<String>,
    /// Images of the generators under the inverse, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    inverse: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum AutCommand {
    /// Prints a conjugator `w` with φ(x) = w x w⁻¹, or `non-inner`
    CheckInner(AutArgs),
    /// Prints a quasimorphism certificate of non-innerness as JSON
    Witness {
        #[command(flatten)]
        aut: AutArgs,
        /// Require ψ(φg) = 0 and an additivity violation of ψ - ψ∘φ
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        pattern_max: usize,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        g_max: usize,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        pair_budget: usize,
    },
}

#[derive(Args, Debug)]
struct LabArgs {
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Entry length budget for the two-commutator search
    #[arg(long, default_value_t = 3, value_parser = positive)]
    budget: usize,
    /// Patterns for the ψ columns, comma separated
    #[arg(long, value_delimiter = ',', default_value = "a,b,aa,ab,aB")]
    patterns: Vec<String>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Failures split by exit code: bad input is a usage error, anything
/// else is a failure to compute.
enum Failure {
    Usage(String),
    Compute(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl ToString) -> Failure {
    Failure::Compute(e.to_string())
}

fn word(text: &str, rank: u8) -> Result<Word, Failure> {
    parse_word(text, rank).map_err(|e| usage(format!("cannot parse {text:?}: {e}")))
}

/// `--input` is either a path to a word list or a word itself.
fn input_words(input: &str, rank: u8) -> Result<Vec<Word>, Failure> {
    let path = Path::new(input);
    if !path.is_file() {
        return Ok(vec![word(input, rank)?]);
    }
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{input}: {e}")))?;
    let mut words = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let w = parse_word(line, rank).map_err(|e| usage(format!("{input}:{}: {e}", i + 1)))?;
        words.push(w);
    }
    Ok(words)
}

fn patterns(texts: &[String], rank: u8) -> Result<Vec<CountingQM>, Failure> {
    texts
        .iter()
        .map(|t| CountingQM::new(word(t, rank)?).map_err(usage))
        .collect()
}

fn automorphism(args: &AutArgs, rank: u8) -> Result<Automorphism, Failure> {
    let parse = |v: &[String]| v.iter().map(|t| word(t, rank)).collect::<Result<Vec<_>, _>>();
    Automorphism::new(parse(&args.images)?, parse(&args.inverse)?).map_err(usage)
}

fn lines(rows: impl IntoIterator<Item = String>) -> String {
    rows.into_iter().map(|r| r + "\n").collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn norm(input: &str, certificate: bool, rank: u8) -> Outcome {
    let words = input_words(input, rank)?;
    Ok(lines(freeqm::binorm::binorm_batch(&words).iter().zip(&words).map(
        |(c, w)| {
            if certificate {
                format!("{w},{},{}", c.k, c.render_factors())
            } else {
                format!("{w},{}", c.k)
            }
        },
    )))
}

fn cl(input: &str, budget: usize, rank: u8) -> Outcome {
    let words = input_words(input, rank)?;
    let config = ClConfig::new(budget);
    let mut out = String::from("word,in_commutator_subgroup,cl_lower,cl_upper,cl_exact,ab_length,bw\n");
    for w in &words {
        let bw = binorm(w).k;
        if !in_commutator_subgroup(w) {
            out += &format!("{w},false,,,,,{bw}\n");
            continue;
        }
        let b = cl_bounds(w, &config).map_err(compute)?;
        out += &format!(
            "{w},true,{},{},{},{},{bw}\n",
            b.lower,
            b.upper,
            opt(b.exact),
            opt(b.exact)
        );
    }
    Ok(out)
}

fn qm_eval(
    pattern: &str,
    input: &str,
    homogeneous: bool,
    numeric_n: Option<u32>,
    rank: u8,
) -> Outcome {
    let q = CountingQM::new(word(pattern, rank)?).map_err(usage)?;
    let words = input_words(input, rank)?;
    let values = words
        .iter()
        .map(|g| {
            let v = match (homogeneous, numeric_n) {
                (true, _) => q.homogenize_exact(g),
                (false, Some(n)) => q.homogenize_numeric(g, n),
                (false, None) => q.evaluate(g),
            };
            v.map(|v| v.to_string()).map_err(compute)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(lines(values))
}

fn commensurable(g: &str, h: &str, strong: bool, rank: u8) -> Outcome {
    let (g, h) = (word(g, rank)?, word(h, rank)?);
    let line = if strong {
        are_strongly_commensurable(&g, &h)
            .map_err(usage)?
            .map(|c| format!("{},{}", c.n, c.conjugator))
    } else {
        are_commensurable(&g, &h)
            .map_err(usage)?
            .map(|c| format!("{},{},{}", c.n, c.m, c.conjugator))
    };
    Ok(line.unwrap_or_else(|| "absent".into()) + "\n")
}

fn aut(command: &AutCommand, rank: u8) -> Outcome {
    match command {
        AutCommand::CheckInner(args) => {
            let phi = automorphism(args, rank)?;
            Ok(match is_inner(&phi) {
                Some(w) => format!("{}\n", w.conjugator),
                None => "non-inner\n".into(),
            })
        }
        AutCommand::Witness {
            aut,
            strict,
            pattern_max,
            g_max,
            pair_budget,
        } => {
            let phi = automorphism(aut, rank)?;
            let search = WitnessSearch {
                pattern_max_len: *pattern_max,
                g_max_len: *g_max,
                pair_budget: *pair_budget,
                strict: *strict,
            };
            if let Some(w) = is_inner(&phi) {
                return Ok(format!("{}\n", serde_json::json!({ "inner": w.conjugator.to_string() })));
            }
            let found = find_noninner_witness(&phi, search).map_err(compute)?;
            let value = match found {
                Some(cert) => cert.to_json(),
                None => serde_json::json!({ "certificate": null }),
            };
            Ok(format!("{value}\n"))
        }
    }
}

fn lab_config(args: &LabArgs, rank: u8) -> Result<ClConfig, Failure> {
    if args.max_len > coarse_lab::MAX_LEN_CAP {
        return Err(usage(format!(
            "--max-len {} exceeds the cap {}",
            args.max_len,
            coarse_lab::MAX_LEN_CAP
        )));
    }
    Ok(ClConfig::new(args.budget).with_patterns(patterns(&args.patterns, rank)?))
}

fn sweep(args: &LabArgs, rank: u8, format: Format) -> Outcome {
    let config = lab_config(args, rank)?;
    let rows = coarse_lab::inequality_sweep(rank, args.max_len, &config).map_err(compute)?;
    Ok(coarse_lab::render_sweep(&rows, &config.patterns, format))
}

fn search_squares(args: &LabArgs, rank: u8, format: Format) -> Outcome {
    let config = lab_config(args, rank)?;
    let hits = coarse_lab::square_commutator_search(rank, args.max_len, &config).map_err(compute)?;
    Ok(coarse_lab::render_squares(&hits, &config.patterns, format))
}

fn sampled_commutators(rank: u8, max_len: usize, samples: usize, seed: u64) -> Vec<Word> {
    let pool = reduced_words(rank, max_len);
    let mut rng = StdRng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let u = &pool[rng.gen_range(0..pool.len())];
            let v = &pool[rng.gen_range(0..pool.len())];
            freeqm::words::commutator(u, v).expect("same rank")
        })
        .collect()
}

fn run(cli: Cli) -> Outcome {
    let rank = cli.rank;
    let format = Format::from(cli.format);
    match &cli.command {
        Command::Norm { input, certificate } => norm(input, *certificate, rank),
        Command::Cl { input, budget } => cl(input, *budget, rank),
        Command::Qm {
            command:
                QmCommand::Eval {
                    pattern,
                    input,
                    homogeneous,
                    numeric_n,
                },
        } => qm_eval(pattern, input, *homogeneous, *numeric_n, rank),
        Command::Commensurable { g, h, strong } => commensurable(g, h, *strong, rank),
        Command::Aut { command } => aut(command, rank),
        Command::Sweep(args) => sweep(args, rank, format),
        Command::SearchSquares(args) => search_squares(args, rank, format),
        Command::QmBound {
            input,
            patterns: texts,
            pattern_max,
            samples,
            max_len,
        } => {
            let qs = match texts {
                Some(t) => patterns(t, rank)?,
                None => reduced_words(rank, *pattern_max)
                    .into_iter()
                    .skip(1)
                    .map(|w| CountingQM::new(w).map_err(usage))
                    .collect::<Result<_, _>>()?,
            };
            let words = match input {
                Some(i) => input_words(i, rank)?,
                None => sampled_commutators(rank, *max_len, *samples, cli.seed),
            };
            Ok(coarse_lab::render_bounds(
                &coarse_lab::qm_boundedness_report(&qs, &words),
                format,
            ))
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out = cli.out.clone();
    match run(cli) {
        Ok(text) => match emit(&text, out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
