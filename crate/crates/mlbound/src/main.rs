use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use markov_lagrange::cover::{builtin_case, ArgMax, min_admissible_s, verify_case, verify_case_at, BranchCase, Certificate};
use markov_lagrange::decimal::{format_decimal, parse_decimal, Rounding};
use markov_lagrange::interval::bits_for_digits;
use markov_lagrange::jp::{default_order, estimate_dimension, pressure_bracket, GaussSystem};
use markov_lagrange::report::{assemble, Mode, Options};
use markov_lagrange::symbolic::catalog::parse_real;
use markov_lagrange::symbolic::{
    builtin_spec, extremal_value, gap_cases, gap_constant, markov_value, Extreme, PeriodicSeq, SftSpec,
};
use markov_lagrange::{approx, Error, Word};

#[derive(Parser)]
#[command(name = "mlbound", version, about = "Exact and certified bounds around the Markov and Lagrange spectra")]
struct Cli {
    /// Decimal digits of working precision.
    #[arg(long, global = true, default_value_t = 50)]
    precision: u32,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Markov value of the periodic sequence with the given period.
    MarkovValue {
        /// Period digits, e.g. `2`, `1122` or `10,1`.
        period: String,
    },
    /// Extremal continued fraction `[0; x]` over a shift.
    Extremal(ExtremalArgs),
    /// Gap constant c(B, C) of an inner and an outer shift, or a catalog case.
    GapConstant {
        /// Inner shift (file or builtin), or a catalog gap case.
        inner: String,
        /// Outer shift (file or builtin); omit for a catalog case.
        outer: Option<String>,
        /// Check c(B, C) < BELOW, e.g. `sqrt(10)` or `3.84`.
        #[arg(long)]
        below: Option<String>,
    },
    /// Covering certificate for a branch case.
    VerifyCover {
        /// Builtin case name or case file.
        case: String,
        /// Also search for the smallest exponent that contracts.
        #[arg(long)]
        find_s: bool,
        /// Exponent to test instead of the one stored with the case.
        #[arg(long)]
        s: Option<String>,
    },
    /// Periodic-orbit dimension estimate of a letter shift.
    Dim {
        /// Shift file or builtin name.
        spec: String,
        /// Truncation order; defaults to 8 up to three letters, else 6.
        #[arg(long)]
        order: Option<usize>,
        /// Word length for the certified pressure bracket.
        #[arg(long)]
        oracle_depth: Option<usize>,
    },
    /// Piecewise global bound.
    Report {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Use periodic-orbit estimates in place of imported dimensions.
        #[arg(long)]
        substitute_jp: bool,
    },
    /// List builtin shifts, cases and gap cases.
    List,
}

#[derive(Args)]
struct ExtremalArgs {
    /// Shift file or builtin name.
    spec: String,
    #[arg(long, conflicts_with = "max", required_unless_present = "max")]
    min: bool,
    #[arg(long)]
    max: bool,
    /// Required leading digits.
    #[arg(long)]
    prefix: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rigorous,
    Heuristic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_spec(arg: &str) -> Result<SftSpec, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::UnknownEntry(format!("{arg}: {e}")))?;
        SftSpec::parse(&text)
    } else {
        builtin_spec(arg)
    }
}

fn load_case(arg: &str) -> Result<BranchCase, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::UnknownEntry(format!("{arg}: {e}")))?;
        BranchCase::parse(&text)
    } else {
        builtin_case(arg)
    }
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let digits = cli.precision;
    let bits = bits_for_digits(digits);
    match &cli.command {
        Command::MarkovValue { period } => {
            let w: Word = period.parse()?;
            let m = markov_value(&PeriodicSeq::new(w.clone())?)?;
            println!("m(({w})^Z) = {}", m.value);
            println!("  enclosure {}", approx(&m.value, digits));
            println!("  attained at index {} of the period", m.position);
            Ok(true)
        }
        Command::Extremal(a) => {
            let spec = load_spec(&a.spec)?;
            let which = if a.min { Extreme::Min } else { Extreme::Max };
            let prefix = match &a.prefix {
                Some(p) => p.parse()?,
                None => Word::empty(),
            };
            let e = extremal_value(&spec, which, &prefix)?;
            println!("{} over {}: {}", if a.min { "min" } else { "max" }, spec.name, e.expansion());
            println!("  value {}", e.value);
            println!("  enclosure {}", approx(&e.value, digits));
            Ok(true)
        }
        Command::GapConstant { inner, outer, below } => {
            let (b, c, threshold) = match outer {
                Some(o) => (load_spec(inner)?, load_spec(o)?, below.clone()),
                None => {
                    let case = gap_cases()
                        .into_iter()
                        .find(|g| g.label == inner)
                        .ok_or_else(|| Error::UnknownEntry(inner.clone()))?;
                    let t = below.clone().unwrap_or_else(|| case.threshold_text.to_string());
                    (builtin_spec(case.inner)?, builtin_spec(case.outer)?, Some(t))
                }
            };
            let g = gap_constant(&b, &c)?;
            println!("c({}, {}) = {}", b.name, c.name, g.value);
            println!("  enclosure {}", approx(&g.value, digits));
            println!("  inner min {} with leading letter {}", g.inner_min.expansion(), g.letter);
            println!("  outer min {}", g.outer_min.expansion());
            match threshold {
                Some(t) => {
                    let t_val = parse_real(&t)?;
                    let ok = g.value < t_val.into();
                    println!("  c < {t}: {}", verdict_word(ok));
                    Ok(ok)
                }
                None => Ok(true),
            }
        }
        Command::VerifyCover { case, find_s, s } => {
            let c = load_case(case)?;
            let cert = match s {
                Some(text) => {
                    let v = parse_decimal(text)
                        .ok_or_else(|| Error::UnknownEntry(format!("`{text}` is not a decimal")))?;
                    verify_case_at(&c, &v, bits)?
                }
                None => verify_case(&c, bits)?,
            };
            print_certificate(&cert);
            if *find_s {
                let tol = num_rational::BigRational::new(1.into(), 1_000_000_000.into());
                let s_min = min_admissible_s(&c.rules, &tol, bits)?;
                println!("  smallest contracting s <= {}", format_decimal(&s_min, 9, Rounding::Up));
            }
            Ok(cert.verdict && cert.meets_margin)
        }
        Command::Dim {
            spec,
            order,
            oracle_depth,
        } => {
            let sys = GaussSystem::new(&load_spec(spec)?)?;
            let n = order.unwrap_or_else(|| default_order(&sys));
            let e = estimate_dimension(&sys, n, 1e-12)?;
            println!("dim {} ~ {:.10} [{}]", e.set, e.value, e.label);
            println!("  order {n}, root bracket {}", e.bracket);
            if let Some(r) = e.residual {
                println!("  residual |s_N - s_(N-1)| = {r:.3e}");
            }
            match oracle_depth {
                Some(d) => {
                    let b = pressure_bracket(&sys, *d)?;
                    let ok = b.lower() <= e.bracket.lower() && e.bracket.upper() <= b.upper();
                    println!("  pressure bracket at depth {d}: {} [{}]", b.bracket, b.label);
                    println!("  estimate inside bracket: {}", verdict_word(ok));
                    Ok(ok)
                }
                None => Ok(true),
            }
        }
        Command::Report {
            mode,
            format,
            substitute_jp,
        } => {
            let opts = Options {
                mode: match mode {
                    ModeArg::Rigorous => Mode::Rigorous,
                    ModeArg::Heuristic => Mode::Heuristic,
                },
                substitute_estimates: *substitute_jp,
                precision: digits,
            };
            let r = assemble(&opts)?;
            match format {
                Format::Text => print!("{}", r.to_text()),
                Format::Structured => println!("{}", r.to_structured()),
            }
            Ok(r.verdict)
        }
        Command::List => {
            println!("shifts:");
            for n in markov_lagrange::symbolic::builtin_spec_names() {
                println!("  {n}");
            }
            println!("cover cases:");
            for c in markov_lagrange::cover::builtin_cases() {
                println!("  {} (s = {})", c.name, c.s_text);
            }
            println!("gap cases:");
            for g in gap_cases() {
                println!("  {}: c({}, {}) < {}", g.label, g.inner, g.outer, g.threshold_text);
            }
            Ok(true)
        }
    }
}

fn print_certificate(c: &Certificate) {
    println!("case {}: s = {}, margin {}", c.case, c.s, c.margin);
    for (i, r) in c.rules.iter().enumerate() {
        println!("  rule {}: sum {}", i + 1, r.sum);
        for t in &r.terms {
            println!(
                "    {:<6} {}  max {} at {} ~ {}",
                t.extension.to_token(),
                t.ratio,
                t.max,
                match t.location {
                    ArgMax::Zero => "r = 0",
                    ArgMax::One => "r = 1",
                    ArgMax::Interior => "interior r",
                },
                t.max_decimal.hi
            );
        }
    }
    println!("  largest sum {}", c.max_sum);
    println!(
        "  {}: every sum below 1: {}, below margin: {}",
        verdict_word(c.verdict && c.meets_margin),
        c.verdict,
        c.meets_margin
    );
}
