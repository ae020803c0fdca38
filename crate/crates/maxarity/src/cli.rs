//! Command-line front end: parse expression files, run analyses, and emit
//! human-readable or JSON output.
//!
//! Exit codes: 0 success, 1 semantic negative (inequality found, arity check
//! false), 2 parse error, 3 dimension mismatch, 4 internal verification
//! failure.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::{One, Zero};

use crate::arity::minimal_arity_of_field;
use crate::decompose::decompose;
use crate::delta::{Flag, GradientField};
use crate::expr::{equivalent, CpwlExpr, Equivalence};
use crate::json;
use crate::rat::{format_rat, parse_rat, QVec, Rat};
use crate::report::report;
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "maxarity",
    about = "Exact analysis of continuous piecewise-linear functions: \
             minimal max-arity certification, delta functions, decomposition, \
             and equivalence checking"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct JsonFlag {
    /// Emit machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the expression at a point, e.g. `eval f.json 2,-1`.
    Eval {
        input: PathBuf,
        /// Comma-separated rational coordinates, e.g. "2,-1" or "1/2,3".
        point: String,
    },
    /// Certify the minimal max-arity k* of the expression.
    Arity {
        input: PathBuf,
        /// Instead of certifying, decide whether arity `k` suffices
        /// (exit code 1 when it does not).
        #[arg(long)]
        check: Option<usize>,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Rewrite the expression with max terms of at most k* arguments
    /// (k* <= 3); prints the result expression as JSON.
    Decompose {
        input: PathBuf,
        /// Include the peel steps in the output.
        #[arg(long)]
        trace: bool,
        /// Write the result to a file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide exact equality of two expressions; prints EQUAL or a witness
    /// point (exit code 1 on inequality).
    Equal { lhs: PathBuf, rhs: PathBuf },
    /// Tabulate the delta function of the gradient field along a flag.
    Delta {
        input: PathBuf,
        /// Flag as semicolon-separated equations, innermost last,
        /// e.g. "x-y=0; x+y=0". Each equation must cut one more dimension.
        #[arg(long)]
        flag: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Summary statistics: affine pieces, linear regions, k*, depth bound.
    Report {
        input: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
}

/// Runs a parsed command line, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::InvalidFlag(_) => 2,
                Error::DimensionMismatch { .. } => 3,
                Error::NonGeneric | Error::InternalVerification(_) => 4,
            }
        }
    }
}

fn load(path: &PathBuf) -> Result<CpwlExpr> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    json::expr_from_str(&text)
}

fn parse_point(s: &str) -> Result<QVec> {
    s.split(',').map(|c| parse_rat(c.trim())).collect()
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Eval { input, point } => {
            let f = load(&input)?;
            let x = parse_point(&point)?;
            println!("{}", format_rat(&f.eval(&x)?));
            Ok(0)
        }
        Command::Arity { input, check, json: j } => {
            let f = load(&input)?;
            let field = GradientField::new(f);
            let cert = minimal_arity_of_field(&field)?;
            if let Some(k) = check {
                let ok = k >= cert.k_star;
                println!(
                    "arity {} is {} (k* = {})",
                    k,
                    if ok { "sufficient" } else { "insufficient" },
                    cert.k_star
                );
                return Ok(if ok { 0 } else { 1 });
            }
            if j.json {
                let dto = json::certificate_json(&field, &cert)?;
                println!("{}", serde_json::to_string_pretty(&dto).unwrap());
            } else {
                println!("k* = {}", cert.k_star);
                println!("depth bound = {}", cert.depth_bound);
                if let Some((flag, a, b)) = &cert.lower_bound_witness {
                    println!(
                        "arity {} refuted: the flag of length {} below separates ({}) and ({})",
                        cert.k_star - 1,
                        flag.len(),
                        fmt_point(a),
                        fmt_point(b)
                    );
                    for (i, h) in flag.spaces().iter().enumerate() {
                        println!("  member {}: {}", i + 1, fmt_member(h));
                    }
                }
            }
            Ok(0)
        }
        Command::Decompose { input, trace, output } => {
            let f = load(&input)?;
            let d = decompose(&f)?;
            let dto = json::decomposition_json(&d, trace);
            let text = serde_json::to_string_pretty(&dto).unwrap();
            match output {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            Ok(if d.synthesized { 0 } else { 1 })
        }
        Command::Equal { lhs, rhs } => {
            let a = load(&lhs)?;
            let b = load(&rhs)?;
            match equivalent(&a, &b)? {
                Equivalence::Equal => {
                    println!("EQUAL");
                    Ok(0)
                }
                Equivalence::Differs { witness, lhs, rhs } => {
                    println!(
                        "DIFFER at ({}): {} vs {}",
                        fmt_point(&witness),
                        format_rat(&lhs),
                        format_rat(&rhs)
                    );
                    Ok(1)
                }
            }
        }
        Command::Delta { input, flag, json: j } => {
            let f = load(&input)?;
            let n = f.dimension();
            let parsed = parse_flag_spec(&flag, n)?;
            let field = GradientField::new(f);
            let d = field.delta(&parsed)?;
            if j.json {
                let dto = json::delta_table_json(&d);
                println!("{}", serde_json::to_string_pretty(&dto).unwrap());
            } else {
                for (cell, value) in d.family.full_cells().zip(&d.values) {
                    println!("at ({}): ({})", fmt_point(&cell.sample), fmt_point(value));
                }
                println!("constant: {}", d.is_constant());
                println!("zero: {}", d.is_zero());
            }
            Ok(0)
        }
        Command::Report { input, json: j } => {
            let f = load(&input)?;
            let started = Instant::now();
            let r = report(&f)?;
            let ms = started.elapsed().as_millis();
            if j.json {
                let dto = json::report_json(&r, ms);
                println!("{}", serde_json::to_string_pretty(&dto).unwrap());
            } else {
                println!("dimension = {}", r.dimension);
                println!("terms = {}, arity as written = {}", r.term_count, r.arity);
                println!("affine pieces (p) = {}", r.affine_pieces);
                println!("linear regions (q) = {}", r.linear_regions);
                println!("k* = {}, depth bound = {}", r.k_star, r.depth_bound);
            }
            Ok(0)
        }
    }
}

fn fmt_point(x: &[Rat]) -> String {
    x.iter().map(format_rat).collect::<Vec<_>>().join(", ")
}

fn fmt_member(h: &crate::linalg::AffineSubspace) -> String {
    let n = h.ambient();
    h.equations()
        .iter()
        .map(|row| {
            format!(
                "[{}] . x = {}",
                row[..n].iter().map(format_rat).collect::<Vec<_>>().join(", "),
                format_rat(&row[n])
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parses a flag given as semicolon-separated linear equations, e.g.
/// `"x-y=0; x+y=0"`. Variables are `x, y, z, w` or `x1..xn`. Each equation
/// must cut exactly one more dimension.
pub fn parse_flag_spec(spec: &str, dimension: usize) -> Result<Flag> {
    let mut eqs = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        eqs.push(parse_equation(part, dimension)?);
    }
    Flag::from_equations(dimension, &eqs)
}

fn var_index(name: &str, dimension: usize) -> Result<usize> {
    let idx = match name {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        "w" => 3,
        _ => {
            let rest = name
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
            let i: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("unknown variable '{name}'")))?;
            if i == 0 {
                return Err(Error::Parse("variables are numbered from x1".into()));
            }
            i - 1
        }
    };
    if idx >= dimension {
        return Err(Error::DimensionMismatch { expected: dimension, found: idx + 1 });
    }
    Ok(idx)
}

/// Parses one side of an equation into coefficients and a constant.
fn parse_linear(side: &str, dimension: usize) -> Result<(QVec, Rat)> {
    let mut coeffs = vec![Rat::zero(); dimension];
    let mut constant = Rat::zero();
    let chars: Vec<char> = side.chars().collect();
    let mut i = 0;
    let mut any = false;
    while i < chars.len() {
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        if i >= chars.len() {
            break;
        }
        let mut negative = false;
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                negative = !negative;
            }
            i += 1;
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
            i += 1;
        }
        let num: String = chars[start..i].iter().collect();
        while i < chars.len() && (chars[i].is_whitespace() || chars[i] == '*') {
            i += 1;
        }
        let vstart = i;
        while i < chars.len() && (chars[i].is_alphanumeric()) {
            i += 1;
        }
        let var: String = chars[vstart..i].iter().collect();
        if num.is_empty() && var.is_empty() {
            return Err(Error::Parse(format!("cannot parse term in '{side}'")));
        }
        let mut value = if num.is_empty() { Rat::one() } else { parse_rat(&num)? };
        if negative {
            value = -value;
        }
        if var.is_empty() {
            constant += value;
        } else {
            coeffs[var_index(&var, dimension)?] += value;
        }
        any = true;
    }
    if !any {
        return Err(Error::Parse(format!("empty expression in '{side}'")));
    }
    Ok((coeffs, constant))
}

fn parse_equation(eq: &str, dimension: usize) -> Result<(QVec, Rat)> {
    let (lhs, rhs) = eq
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("equation '{eq}' has no '='")))?;
    let (la, lb) = parse_linear(lhs, dimension)?;
    let (ra, rb) = parse_linear(rhs, dimension)?;
    // a . x + b = a' . x + b'  =>  (a - a') . x = b' - b
    let a = crate::rat::vsub(&la, &ra);
    Ok((a, rb - lb))
}
