//! Command-line front end. Exit codes: 0 on success (including negative
//! answers such as "not Loeschian"), 1 on input errors, 2 when a bounded
//! search ends without a decision.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::atkin_lehner::{self, AtkinLehnerElement};
use crate::bezout::{self, Mode};
use crate::classify::{self, ConjectureStatus, GMembership, PellCriterion, SweepConfig, ThirdCaseStatus};
use crate::eisenstein::{self, LoeschianClass};
use crate::error::Error;
use crate::order3::{self, Conjugacy, Order3Element};
use crate::qforms;
use crate::quaternion::OrderElement;
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Any,
    NoThree,
    ExactOne,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Any => Mode::Any,
            ModeArg::NoThree => Mode::NoThree,
            ModeArg::ExactOne => Mode::ExactOne,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "loeschian", version, about = "Loeschian numbers, quaternion orders and order-3 conjugacy classes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify N and represent it as a² − ab + b².
    Loeschian { n: u128 },
    /// Solve d'u − d''v = ±1 with u, v Loeschian.
    Bezout {
        d_prime: u64,
        d_dprime: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Any)]
        mode: ModeArg,
        #[arg(long, default_value_t = bezout::DEFAULT_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// Build the Atkin–Lehner element for a Hall divisor d' of d.
    AtkinLehner {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        dprime: u64,
        #[arg(long, default_value_t = bezout::DEFAULT_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// Enumerate order-3 elements with −1 − B ≤ x1 ≤ B.
    Order3 {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        bound: u32,
    },
    /// Decide conjugacy of two order-3 elements given as x1,x2,x3,x4.
    Conjugate {
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
    },
    /// Count conjugacy classes of order-3 elements with representatives.
    Count {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = classify::DEFAULT_SEARCH_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// Search u − 3d*·v = 1 with u, v Loeschian and 3 ∤ uv over a range of d*.
    VerifyConj2 {
        #[arg(long)]
        dstar_min: u64,
        #[arg(long)]
        dstar_max: u64,
        #[arg(long, env = "LOESCHIAN_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
        #[arg(long, default_value_t = classify::DEFAULT_SEARCH_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        /// Resume file holding the last completed d*.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
        chunk: u64,
    },
    /// Pell criterion for 9 | d, or the minimal Pell solution for --n.
    Pell {
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        d: Option<u64>,
        #[arg(long)]
        n: Option<u128>,
    },
    /// Decide whether the order-3 class count for d takes its larger value.
    GMembership {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = classify::DEFAULT_SEARCH_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
}

/// Outcome of a subcommand, before it is rendered.
enum Outcome {
    Done,
    Undecided(String),
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Undecided(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Exhausted { .. } | Error::FactorizationTimeout { .. } | Error::PellPeriodExceeded { .. } => {
                Failure::Undecided(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Input(format!("write failed: {e}"))
    }
}

type CliResult = std::result::Result<Outcome, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    1
                }
            };
        }
    };
    let mut file;
    let sink: &mut dyn Write = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = io::BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(err, "error: cannot create {}: {e}", path.display());
                return 1;
            }
        },
        None => out,
    };
    let result = dispatch(&cli, sink).and_then(|o| {
        sink.flush()?;
        Ok(o)
    });
    match result {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::Undecided(msg)) | Err(Failure::Undecided(msg)) => {
            let _ = writeln!(err, "undecided: {msg}");
            2
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))
}

fn coords_text(e: &OrderElement) -> String {
    e.c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_coords(d: u64, s: &str) -> std::result::Result<Order3Element, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Failure::Input(format!("expected four comma-separated integers, got {s:?}")));
    }
    let mut c: [BigInt; 4] = Default::default();
    for (slot, p) in c.iter_mut().zip(&parts) {
        *slot = p
            .parse()
            .map_err(|_| Failure::Input(format!("not an integer: {p:?}")))?;
    }
    Ok(Order3Element::from_element(OrderElement::new(d, c))?)
}

fn unverified(what: &str) -> Failure {
    Failure::Input(format!("internal check failed: {what} did not re-verify"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let fmt = cli.format;
    match &cli.command {
        Command::Loeschian { n } => {
            let class = eisenstein::classify_loeschian(*n)?;
            let rep = match &class {
                LoeschianClass::Loeschian(f) => Some(eisenstein::represent_factored(f)?),
                LoeschianClass::NotLoeschian { .. } => None,
            };
            if let Some(x) = &rep {
                if x.norm()? != *n {
                    return Err(unverified("representation"));
                }
            }
            match fmt {
                Format::Json => emit_json(out, &report::loeschian(*n, &class, rep.as_ref()))?,
                Format::Csv => {
                    writeln!(out, "n,loeschian,a,b")?;
                    let (a, b) = rep.map_or((String::new(), String::new()), |x| (x.a.to_string(), x.b.to_string()));
                    writeln!(out, "{n},{},{a},{b}", class.is_loeschian())?;
                }
                Format::Text => match (&class, rep) {
                    (_, Some(x)) => writeln!(out, "{n} is Loeschian: {n} = N({x}) with a = {}, b = {}", x.a, x.b)?,
                    (LoeschianClass::NotLoeschian { prime, exponent }, None) => writeln!(
                        out,
                        "{n} is not Loeschian: {prime} ≡ 2 (mod 3) divides it to the odd power {exponent}"
                    )?,
                    _ => unreachable!(),
                },
            }
        }
        Command::Bezout { d_prime, d_dprime, mode, bound } => {
            let cert = bezout::solve(*d_prime, *d_dprime, (*mode).into(), *bound)?;
            if !cert.verify() {
                return Err(unverified("certificate"));
            }
            match fmt {
                Format::Json => emit_json(out, &report::certificate(&cert))?,
                Format::Csv => {
                    writeln!(out, "d_prime,d_dprime,swapped,epsilon,u,v,x_a,x_b,y_a,y_b")?;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{}",
                        cert.d_prime, cert.d_dprime, cert.swapped, cert.epsilon, cert.u, cert.v, cert.x.a, cert.x.b, cert.y.a, cert.y.b
                    )?;
                }
                Format::Text => {
                    let (p, q) = if cert.swapped { (cert.d_dprime, cert.d_prime) } else { (cert.d_prime, cert.d_dprime) };
                    let sign = if cert.epsilon == 1 { "1" } else { "-1" };
                    writeln!(out, "{p}·{} − {q}·{} = {sign}", cert.u, cert.v)?;
                    writeln!(out, "u = N({}), v = N({}){}", cert.x, cert.y, if cert.swapped { " (swapped)" } else { "" })?;
                }
            }
        }
        Command::AtkinLehner { d, dprime, bound } => {
            let w = AtkinLehnerElement::build(*d, *dprime, *bound)?;
            let normalizes = atkin_lehner::check_normalizes(&w.w);
            let again = AtkinLehnerElement::from_element(w.d_prime, w.w.clone())?;
            if again != w || !normalizes {
                return Err(unverified("Atkin–Lehner element"));
            }
            match fmt {
                Format::Json => emit_json(out, &report::atkin_lehner(&w, normalizes))?,
                Format::Csv => {
                    writeln!(out, "d,d_prime,epsilon,w1,w2,w3,w4,q1,q2,q3,q4")?;
                    writeln!(out, "{},{},{},{},{}", w.d, w.d_prime, w.epsilon, coords_text(&w.w), coords_text(&w.q))?;
                }
                Format::Text => {
                    writeln!(out, "w = {}", w.w)?;
                    writeln!(out, "Nr(w) = {}", w.w.nr())?;
                    writeln!(out, "w² = {}·({})", w.d_prime, w.q)?;
                    writeln!(out, "normalizes O: {normalizes}")?;
                }
            }
        }
        Command::Order3 { d, bound } => {
            let elems = order3::enumerate(*d, *bound as i64)?;
            match fmt {
                Format::Json => emit_json(out, &Value::Array(elems.iter().map(report::order3).collect()))?,
                Format::Csv | Format::Text => {
                    let sep = if fmt == Format::Csv { "," } else { "\t" };
                    writeln!(out, "{}", ["x1", "x2", "x3", "x4", "d_prime", "d_dprime", "case"].join(sep))?;
                    for xi in &elems {
                        let mut row: Vec<String> = xi.elem.c.iter().map(|c| c.to_string()).collect();
                        row.extend([xi.d_prime_inv.to_string(), xi.d_dprime_inv.to_string(), xi.case.to_string()]);
                        writeln!(out, "{}", row.join(sep))?;
                    }
                }
            }
        }
        Command::Conjugate { d, xi, eta } => {
            let xi = parse_coords(*d, xi)?;
            let eta = parse_coords(*d, eta)?;
            let c = order3::conjugacy_witness(&xi, &eta)?;
            if let Conjugacy::Conjugate(w) = &c {
                if !order3::verify_witness(&xi.elem, &eta.elem, &w.alpha) {
                    return Err(unverified("conjugacy witness"));
                }
            }
            match fmt {
                Format::Json => emit_json(out, &report::conjugacy(&c))?,
                Format::Csv => {
                    writeln!(out, "conjugate,a1,a2,a3,a4")?;
                    match &c {
                        Conjugacy::Conjugate(w) => writeln!(out, "true,{}", coords_text(&w.alpha))?,
                        Conjugacy::NotConjugate => writeln!(out, "false,,,,")?,
                    }
                }
                Format::Text => match &c {
                    Conjugacy::Conjugate(w) => writeln!(out, "conjugate via α = {} (Nr = {})", w.alpha, w.alpha.nr())?,
                    Conjugacy::NotConjugate => writeln!(out, "not conjugate")?,
                },
            }
        }
        Command::Count { d, bound } => {
            let r = classify::count_classes(*d, *bound)?;
            for rep in &r.representatives {
                if Order3Element::from_element(rep.element.elem.clone())? != rep.element {
                    return Err(unverified("representative"));
                }
            }
            match fmt {
                Format::Json => emit_json(out, &report::class_report(&r))?,
                Format::Csv => {
                    writeln!(out, "{}", report::CLASS_CSV_HEADER)?;
                    writeln!(out, "{}", report::class_report_csv(&r))?;
                }
                Format::Text => {
                    let c = r.c_d.map_or("unknown".to_string(), |c| c.to_string());
                    writeln!(out, "d = {}, r = {}, case {}: C_d = {c}", r.d, r.r, r.case)?;
                    for rep in &r.representatives {
                        writeln!(out, "  {}{}", rep.element, if rep.star { " *" } else { "" })?;
                    }
                }
            }
            if let ThirdCaseStatus::Unknown { bound } = r.third_case_status {
                return Ok(Outcome::Undecided(format!("third stratum of d = {d} unresolved within bound {bound}")));
            }
        }
        Command::VerifyConj2 { dstar_min, dstar_max, jobs, bound, checkpoint, chunk } => {
            if dstar_min > dstar_max {
                return Err(Failure::Input("--dstar-min exceeds --dstar-max".into()));
            }
            let cfg = SweepConfig {
                dstar_min: *dstar_min,
                dstar_max: *dstar_max,
                jobs: *jobs as usize,
                bound: *bound,
                checkpoint: checkpoint.clone(),
                chunk: *chunk as usize,
            };
            if fmt == Format::Csv {
                writeln!(out, "{}", report::CONJECTURE_CSV_HEADER)?;
            }
            let summary = classify::sweep_conjecture2(&cfg, |statuses: &[ConjectureStatus]| {
                for st in statuses {
                    if let Some((u, v)) = st.witness {
                        if !classify::check_conjecture2_witness(st.d_star, u, v)? {
                            return Err(Error::EquationViolated(format!("witness for d* = {}", st.d_star)));
                        }
                    }
                    let line = match fmt {
                        Format::Json => serde_json::to_string(&report::conjecture_status(st)).expect("serializable"),
                        Format::Csv => report::conjecture_status_csv(st),
                        Format::Text if !st.verified => format!("d* = {}: unknown within bound {}", st.d_star, st.bound),
                        Format::Text => continue,
                    };
                    writeln!(out, "{line}").map_err(|e| Error::InvalidInput(format!("write failed: {e}")))?;
                }
                Ok(())
            })?;
            match fmt {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({ "summary": {
                        "checked": summary.checked.to_string(),
                        "verified": summary.verified.to_string(),
                        "unknown": summary.unknown.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                        "resumed_after": summary.resumed_after.map(|d| d.to_string()),
                        "last_completed": summary.last_completed.map(|d| d.to_string()),
                    }})
                )?,
                Format::Csv => {}
                Format::Text => writeln!(
                    out,
                    "checked {} values of d*, verified {}, unknown {}",
                    summary.checked,
                    summary.verified,
                    summary.unknown.len()
                )?,
            }
            if !summary.unknown.is_empty() {
                return Ok(Outcome::Undecided(format!("{} values of d* without a witness", summary.unknown.len())));
            }
        }
        Command::Pell { d, n } => match (d, n) {
            (Some(d), _) => {
                let c = classify::pell_criterion(*d)?;
                if let PellCriterion::Holds(sol) = &c {
                    check_pell(sol)?;
                }
                match fmt {
                    Format::Json => emit_json(out, &report::pell_criterion(*d, &c))?,
                    Format::Csv => {
                        writeln!(out, "d,criterion,x0,y0")?;
                        match &c {
                            PellCriterion::Holds(s) => writeln!(out, "{d},True,{},{}", s.x0, s.y0)?,
                            PellCriterion::Inapplicable => writeln!(out, "{d},Inapplicable,,")?,
                        }
                    }
                    Format::Text => match &c {
                        PellCriterion::Holds(s) => writeln!(out, "d = {d}: True, x0 = {}, y0 = {} (n = {})", s.x0, s.y0, s.n)?,
                        PellCriterion::Inapplicable => writeln!(out, "d = {d}: Inapplicable")?,
                    },
                }
            }
            (None, Some(n)) => {
                let sol = qforms::pell_min_solution(*n)?;
                check_pell(&sol)?;
                match fmt {
                    Format::Json => emit_json(out, &report::pell(&sol))?,
                    Format::Csv => {
                        writeln!(out, "n,x0,y0")?;
                        writeln!(out, "{},{},{}", sol.n, sol.x0, sol.y0)?;
                    }
                    Format::Text => writeln!(out, "x² − {}y² = 1: x0 = {}, y0 = {}", sol.n, sol.x0, sol.y0)?,
                }
            }
            (None, None) => return Err(Failure::Input("pass --d or --n".into())),
        },
        Command::GMembership { d, bound } => {
            let g = classify::g_membership(*d, *bound)?;
            match fmt {
                Format::Json => emit_json(out, &report::g_membership(*d, &g))?,
                Format::Csv => {
                    writeln!(out, "d,membership")?;
                    let m = if matches!(g, GMembership::InG(_)) { "InG" } else { "Unknown" };
                    writeln!(out, "{d},{m}")?;
                }
                Format::Text => writeln!(out, "{}", report::g_membership(*d, &g))?,
            }
            if let GMembership::Unknown { bound } = g {
                return Ok(Outcome::Undecided(format!("d = {d} unresolved within bound {bound}")));
            }
        }
    }
    Ok(Outcome::Done)
}

fn check_pell(sol: &qforms::PellSolution) -> std::result::Result<(), Failure> {
    let lhs = &sol.x0 * &sol.x0 - BigInt::from(sol.n) * &sol.y0 * &sol.y0;
    if lhs.is_one() {
        Ok(())
    } else {
        Err(unverified("Pell solution"))
    }
}
