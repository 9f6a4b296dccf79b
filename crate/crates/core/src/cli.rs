//! The `ecn` command line.
//!
//! Exit codes: 0 success, 1 rejected input or failed operation, 2 usage
//! error, 3 evaluation budget or step cap exhausted. Approximations are
//! printed as an exact rational and its error bound separated by a tab;
//! `--decimal D` adds a certified decimal enclosure `[lo, hi]`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::construct::{self, ConstructError};
use crate::gcn::{self, Gcn, GcnError, Machine, MachineSource};
use crate::numbers::{self, compare_tol, Class, Comparison, Number, Rcn, Sprcn, Validation};
use crate::numeric::Rational;
use crate::prf::{enumerate, EvalBudget, EvalError};

#[derive(Parser, Debug)]
#[command(
    name = "ecn",
    version,
    about = "Decidable computed real numbers",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Approximation order n (error bound 2^-n).
    #[arg(long, global = true, default_value_t = 16)]
    bits: u64,
    /// Evaluation steps allowed per operation.
    #[arg(long, global = true, default_value_t = 50_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Machine steps allowed per program or per output.
    #[arg(long = "step-cap", global = true, default_value_t = 10_000)]
    step_cap: u64,
    /// Number of items to produce.
    #[arg(long, global = true, default_value_t = 8)]
    count: u64,
    /// Also print a decimal enclosure with this many fractional digits.
    #[arg(long, global = true)]
    decimal: Option<usize>,
    /// Class the input must belong to (validate), in either case.
    #[arg(long, global = true, value_parser = parse_class)]
    class: Option<Class>,
    /// Write the resulting `.ecn` file here instead of stdout.
    #[arg(short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Specker machines: `demo`, or a file of numbered machine listings
    /// separated by blank lines. Defaults to the machine enumeration.
    #[arg(long, global = true)]
    fixtures: Option<String>,
    /// First index for `enumerate`.
    #[arg(long, global = true, default_value_t = 0)]
    start: u64,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Decide whether a file is a well-formed number.
    Validate {
        file: PathBuf,
    },
    /// Approximate a number (file or constant name: pi, e, sqrt2, goldbach).
    Eval {
        input: String,
    },
    /// Print the first digits of a number.
    Digits {
        input: String,
    },
    Add {
        x: String,
        y: String,
    },
    Sub {
        x: String,
        y: String,
    },
    Mul {
        x: String,
        y: String,
    },
    Neg {
        x: String,
    },
    /// Compare at order --bits; only separations beyond both tails are reported.
    Compare {
        x: String,
        y: String,
    },
    /// List expressions or toy machines of the fixed enumeration.
    Enumerate {
        #[arg(value_enum, default_value_t = Kind::Exprs)]
        kind: Kind,
    },
    /// The first --count elements of the Specker sequence.
    Specker,
    /// An interval of width 4^-count missing the first --count enumerated numbers.
    Diagonalize,
    /// The signed-digit prefix built from the first --count enumerated programs.
    Theorem3,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Exprs,
    Machines,
}

#[derive(Debug)]
enum Failure {
    Rejected(String),
    Usage(String),
    Exhausted(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Exhausted(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Rejected(m) | Failure::Usage(m) | Failure::Exhausted(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Rejected(e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        match e {
            EvalError::BudgetExceeded { .. } => Failure::Exhausted(e.to_string()),
            _ => Failure::Rejected(e.to_string()),
        }
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Failure {
        match e {
            ConstructError::Eval(e) => e.into(),
            ConstructError::StepCapExceeded { .. } => Failure::Exhausted(e.to_string()),
            _ => Failure::Rejected(e.to_string()),
        }
    }
}

impl From<GcnError> for Failure {
    fn from(e: GcnError) -> Failure {
        match e {
            GcnError::BudgetExceeded { .. } => Failure::Exhausted(e.to_string()),
            GcnError::Jump(e) => e.into(),
            GcnError::Invalid(_) => Failure::Rejected(e.to_string()),
        }
    }
}

/// Runs one command line (`args[0]` is the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "ecn: {}", f.message());
            f.code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let budget = EvalBudget::new(cli.budget);
    match &cli.verb {
        Verb::Validate { file } => {
            let text = fs::read(file)?;
            let text = String::from_utf8(text).map_err(|_| Failure::Rejected("file is not UTF-8".into()))?;
            match numbers::validate(&text) {
                Validation::Accept(class, _) => match cli.class {
                    Some(want) if want != class => Err(Failure::Rejected(format!("expected {want}, found {class}"))),
                    _ => Ok(writeln!(out, "accept\t{class}")?),
                },
                Validation::Reject(r) => {
                    writeln!(out, "reject\t{r}")?;
                    Err(Failure::Rejected(r.to_string()))
                }
            }
        }
        Verb::Eval { input } => match load(input)? {
            Number::Ngcn(x) => {
                let v = gcn::ngcn_partial(&x, cli.bits, budget)?;
                Ok(writeln!(out, "{v}\tunmodulated")?)
            }
            Number::Gcn(g) => stream(cli, &g, out),
            Number::Rcn(_) => Err(Failure::Rejected(
                "an RCN has no approximation with an error bound; use `digits`".into(),
            )),
            other => {
                let x = to_sprcn(other, budget)?;
                let a = x.approx(cli.bits, budget)?;
                write!(out, "{}\t{}", a.value, a.error_bound)?;
                if let Some(d) = cli.decimal {
                    write!(
                        out,
                        "\t[{}, {}]",
                        a.lower().to_decimal(d, false),
                        a.upper().to_decimal(d, true)
                    )?;
                }
                Ok(writeln!(out)?)
            }
        },
        Verb::Digits { input } => {
            let n = cli.bits;
            let (int, digits): (String, Vec<String>) = match load(input)? {
                Number::Prcn(x) => (x.int_part.to_string(), strings(x.digits(n, budget)?)),
                Number::Ngcn(x) => (x.int_part.to_string(), strings(x.digits(n, budget)?)),
                Number::Rcn(x) => (x.int_part.to_string(), rcn_digits(&x, n, cli.step_cap)),
                Number::Gcn(_) => return Err(Failure::Rejected("a GCN has no digits; use `eval`".into())),
                other => {
                    let x = to_sprcn(other, budget)?;
                    (x.int_part.to_string(), strings(x.digits(n, budget)?))
                }
            };
            Ok(writeln!(out, "{int}\t{}", digits.join(" "))?)
        }
        Verb::Add { x, y } | Verb::Sub { x, y } | Verb::Mul { x, y } => {
            let (x, y) = (load(x)?, load(y)?);
            if let (Number::Gcn(a), Number::Gcn(b)) = (&x, &y) {
                let g = match &cli.verb {
                    Verb::Add { .. } => gcn::gcn_add(a, b),
                    Verb::Sub { .. } => gcn::gcn_add(a, &gcn::gcn_neg(b)),
                    _ => gcn::gcn_mul(a, b),
                };
                return stream(cli, &g, out);
            }
            let (x, y) = (to_sprcn(x, budget)?, to_sprcn(y, budget)?);
            let z = match &cli.verb {
                Verb::Add { .. } => construct::sprcn_add(&x, &y, budget)?,
                Verb::Sub { .. } => construct::sprcn_sub(&x, &y, budget)?,
                _ => construct::sprcn_mul(&x, &y, budget)?,
            };
            emit(cli, &Number::Sprcn(z), out)
        }
        Verb::Neg { x } => match load(x)? {
            Number::Gcn(g) => stream(cli, &gcn::gcn_neg(&g), out),
            other => {
                let z = construct::sprcn_neg(&to_sprcn(other, budget)?);
                emit(cli, &Number::Sprcn(z), out)
            }
        },
        Verb::Compare { x, y } => {
            let (x, y) = (to_sprcn(load(x)?, budget)?, to_sprcn(load(y)?, budget)?);
            let verdict = match compare_tol(&x, &y, cli.bits, budget)? {
                Comparison::ApartBelow => "below",
                Comparison::ApartAbove => "above",
                Comparison::WithinTolerance => "within-tolerance",
            };
            Ok(writeln!(out, "{verdict}\t{}", Rational::pow2(1 - cli.bits as i64))?)
        }
        Verb::Enumerate { kind } => {
            for i in cli.start..cli.start.saturating_add(cli.count) {
                match kind {
                    Kind::Exprs => writeln!(out, "{i}\t{}", enumerate(i))?,
                    Kind::Machines => writeln!(out, "{i}\t{}", gcn::enumerate_machines(i))?,
                }
            }
            Ok(())
        }
        Verb::Specker => {
            let machines = match cli.fixtures.as_deref() {
                None => MachineSource::Enumeration,
                Some("demo") => gcn::demo_fixtures(),
                Some(path) => MachineSource::Fixed(read_machines(path)?.into()),
            };
            let seq =
                gcn::specker(cli.count, cli.step_cap, &machines).map_err(|e| Failure::Exhausted(e.to_string()))?;
            for s in seq {
                writeln!(out, "{s}")?;
            }
            Ok(())
        }
        Verb::Diagonalize => {
            if cli.count == 0 {
                return Err(Failure::Usage("diagonalize needs --count >= 1".into()));
            }
            let (lo, hi) = construct::diagonalize(cli.count, budget)?;
            Ok(writeln!(out, "{lo}\t{hi}")?)
        }
        Verb::Theorem3 => {
            let digits = construct::theorem3_prefix(cli.count, cli.step_cap)?;
            Ok(writeln!(out, "{}", strings(digits).join(" "))?)
        }
    }
}

fn parse_class(s: &str) -> Result<Class, String> {
    s.to_ascii_uppercase().parse()
}

fn strings<T: ToString>(v: Vec<T>) -> Vec<String> {
    v.into_iter().map(|d| d.to_string()).collect()
}

fn rcn_digits(x: &Rcn, n: u64, cap: u64) -> Vec<String> {
    x.sample(n, cap)
        .into_iter()
        .map(|d| d.map_or("?".to_string(), |b| b.to_string()))
        .collect()
}

/// A constant name or an `.ecn` file.
fn load(input: &str) -> Result<Number, Failure> {
    if let Some(x) = construct::constant(input) {
        return Ok(Number::Sprcn(x));
    }
    let text = fs::read_to_string(input).map_err(|e| Failure::Rejected(format!("{input}: {e}")))?;
    numbers::deserialize(&text).map_err(|r| Failure::Rejected(format!("{input}: {r}")))
}

fn to_sprcn(x: Number, budget: EvalBudget) -> Result<Sprcn, Failure> {
    match x {
        Number::Sprcn(x) => Ok(x),
        Number::Prcn(x) => Ok(x.to_sprcn()),
        Number::PrSeq(s) => Ok(construct::to_sprcn(&s, budget)?),
        other => Err(Failure::Rejected(format!(
            "{} is not a modulated class; expected PRCN, SPRCN or PRSEQ",
            other.class()
        ))),
    }
}

/// Writes a result to `-o` or stdout.
fn emit(cli: &Cli, x: &Number, out: &mut dyn Write) -> Result<(), Failure> {
    let text = numbers::serialize(x).map_err(|e| Failure::Rejected(e.to_string()))?;
    match &cli.output {
        Some(path) => Ok(fs::write(path, text)?),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Accepted outputs of a GCN, one per line as they are produced.
fn stream(cli: &Cli, g: &Gcn, out: &mut dyn Write) -> Result<(), Failure> {
    let mut runner = g.runner();
    for _ in 0..cli.count {
        let q = runner.next(cli.step_cap)?;
        writeln!(out, "{q}")?;
    }
    Ok(())
}

fn read_machines(path: &str) -> Result<Vec<Machine>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Rejected(format!("{path}: {e}")))?;
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    lines
        .split(|(_, l)| l.trim().is_empty())
        .filter(|block| !block.is_empty())
        .map(|block| Machine::parse_lines(block.iter().copied()).map_err(|e| Failure::Rejected(format!("{path}: {e}"))))
        .collect()
}
