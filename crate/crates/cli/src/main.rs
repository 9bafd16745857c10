use std::io::Read;
use std::process::ExitCode;

use boolweyl::crosscheck::{self, CheckConfig};
use boolweyl::lang::{self, Expr, LitKind, VarContext};
use boolweyl::{Error, OpBasis, OpCoeffs, RingBasis, Strategy};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "boolweyl", version, about = "Boolean functions and Boolean differential operators over GF(2)")]
struct Cli {
    /// Number of variables (default: smallest n covering the input)
    #[arg(short = 'n', long = "n", global = true, value_parser = clap::value_parser!(u8).range(1..=16))]
    n: Option<u8>,

    /// Output basis: M, X, W for functions; MY, XY, WY, MS, XS, WS for operators
    #[arg(long, global = true)]
    basis: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for sampling commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Random cases per dimension for sampling commands
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,

    /// Print an entailment witness
    #[arg(long, global = true)]
    witness: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression to a function or an operator
    Eval { expr: String },
    /// Multiply two operators
    Mul { lhs: String, rhs: String },
    /// Rewrite an expression in the basis given by --basis
    Convert { expr: String },
    /// Decide whether P entails Q
    Entail { p: String, q: String },
    /// Decide whether two expressions denote the same operator
    Equiv { p: String, q: String },
    /// Print the operator matrix on truth tables
    Matrix { expr: String },
    /// Print the operator matrix as a Graphviz graph
    Dot { expr: String },
    /// Run the invariant battery
    Crosscheck {
        /// Use one thread
        #[arg(long)]
        sequential: bool,
    },
}

type Outcome = Result<ExitCode, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Eval { expr } => eval(cli, expr, false),
        Cmd::Convert { expr } => eval(cli, expr, true),
        Cmd::Mul { lhs, rhs } => mul(cli, lhs, rhs),
        Cmd::Entail { p, q } => entail(cli, p, q),
        Cmd::Equiv { p, q } => equiv(cli, p, q),
        Cmd::Matrix { expr } => matrix(cli, expr, cli.format),
        Cmd::Dot { expr } => matrix(cli, expr, Format::Dot),
        Cmd::Crosscheck { sequential } => check(cli, *sequential),
    }
}

/// Reads `-` from stdin, otherwise returns the argument.
fn source(arg: &str) -> Result<String, Error> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Error::Format(format!("reading stdin: {e}")))?;
    Ok(s.trim().to_string())
}

fn parse_all(cli: &Cli, args: &[&str]) -> Result<(Vec<Expr>, VarContext), Error> {
    let exprs = args
        .iter()
        .map(|a| lang::parse(&source(a)?))
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&Expr> = exprs.iter().collect();
    let ctx = VarContext::infer(&refs, cli.n.map(usize::from))?;
    Ok((exprs, ctx))
}

fn literal_kinds(e: &Expr, out: &mut Vec<LitKind>) {
    match e {
        Expr::Literal(k, _) => out.push(*k),
        Expr::Sum(xs) | Expr::Prod(xs) => xs.iter().for_each(|x| literal_kinds(x, out)),
        _ => {}
    }
}

/// `--basis`, or the basis suggested by the literals used in the input.
fn op_basis(cli: &Cli, exprs: &[Expr]) -> Result<OpBasis, Error> {
    if let Some(b) = &cli.basis {
        return b.parse();
    }
    let mut kinds = Vec::new();
    exprs.iter().for_each(|e| literal_kinds(e, &mut kinds));
    let left = kinds
        .iter()
        .find_map(|k| match k {
            LitKind::M => Some(RingBasis::M),
            LitKind::X => Some(RingBasis::X),
            LitKind::W => Some(RingBasis::W),
            _ => None,
        })
        .unwrap_or(RingBasis::X);
    let right = if kinds.contains(&LitKind::S) && !kinds.contains(&LitKind::Y) {
        boolweyl::RightKind::S
    } else {
        boolweyl::RightKind::Y
    };
    Ok(OpBasis::from_parts(left, right))
}

fn ring_basis(cli: &Cli, exprs: &[Expr]) -> Result<RingBasis, Error> {
    match &cli.basis {
        Some(b) => b.parse(),
        None => Ok(op_basis(cli, exprs)?.left()),
    }
}

fn print_op(cli: &Cli, op: &OpCoeffs) -> Result<(), Error> {
    match cli.format {
        Format::Json => println!("{}", to_json(op)?),
        Format::Dot => println!("{}", op.to_matrix().to_dot("operator")),
        Format::Text => println!("{op}"),
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Error> {
    serde_json::to_string(v).map_err(|e| Error::Format(e.to_string()))
}

fn eval(cli: &Cli, src: &str, require_basis: bool) -> Outcome {
    if require_basis && cli.basis.is_none() {
        return Err(Error::Format("convert needs --basis".into()));
    }
    let (exprs, ctx) = parse_all(cli, &[src])?;
    let e = &exprs[0];
    let function_basis = cli
        .basis
        .as_deref()
        .map(|b| b.parse::<RingBasis>().is_ok())
        .unwrap_or(true);
    if !e.is_operator() && function_basis && cli.format != Format::Dot {
        let f = lang::eval_classical(e, &ctx)?.convert(ring_basis(cli, &exprs)?);
        match cli.format {
            Format::Json => println!("{}", to_json(&f)?),
            _ => println!("{f}"),
        }
    } else {
        let op = lang::eval_quantum(e, &ctx)?.convert(op_basis(cli, &exprs)?);
        print_op(cli, &op)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn mul(cli: &Cli, lhs: &str, rhs: &str) -> Outcome {
    let (exprs, ctx) = parse_all(cli, &[lhs, rhs])?;
    let basis = op_basis(cli, &exprs)?;
    let f = lang::eval_quantum(&exprs[0], &ctx)?.convert(basis);
    let g = lang::eval_quantum(&exprs[1], &ctx)?.convert(basis);
    print_op(cli, &f.mul(&g)?)?;
    Ok(ExitCode::SUCCESS)
}

fn verdict(cli: &Cli, yes: bool) -> Result<ExitCode, Error> {
    if cli.format == Format::Json {
        println!("{}", serde_json::json!({ "verdict": yes }));
    } else {
        println!("{}", if yes { "yes" } else { "no" });
    }
    Ok(if yes { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn entail(cli: &Cli, p: &str, q: &str) -> Outcome {
    let (exprs, ctx) = parse_all(cli, &[p, q])?;
    let (p, q) = (&exprs[0], &exprs[1]);
    if !p.is_operator() && !q.is_operator() {
        let yes = lang::entails_classical(p, q, &ctx)?;
        let code = verdict(cli, yes)?;
        if yes && cli.witness {
            // p = q p whenever p <= q
            println!("r = {}", lang::normalize(p, &ctx)?);
        }
        return Ok(code);
    }
    let w = lang::entailment_witness(p, q, &ctx)?;
    let code = verdict(cli, w.is_some())?;
    if let (Some(w), true) = (w, cli.witness) {
        match cli.format {
            Format::Json => println!(
                "{}",
                serde_json::json!({ "n": ctx.n(), "rows": grid_rows(&w.matrix), "r": lang::render_xy(&w.op, &ctx).to_string() })
            ),
            _ => {
                println!("R =\n{}", w.matrix.to_grid());
                println!("r = {}", lang::render_xy(&w.op, &ctx));
            }
        }
    }
    Ok(code)
}

fn equiv(cli: &Cli, p: &str, q: &str) -> Outcome {
    let (exprs, ctx) = parse_all(cli, &[p, q])?;
    verdict(cli, lang::equivalent(&exprs[0], &exprs[1], &ctx)?)
}

fn grid_rows(m: &boolweyl::Gf2Matrix) -> Vec<String> {
    m.to_grid().lines().map(str::to_string).collect()
}

fn matrix(cli: &Cli, src: &str, format: Format) -> Outcome {
    let (exprs, ctx) = parse_all(cli, &[src])?;
    let m = lang::eval_quantum(&exprs[0], &ctx)?.to_matrix();
    match format {
        Format::Text => println!("{}", m.to_grid()),
        Format::Json => println!("{}", serde_json::json!({ "n": ctx.n(), "rows": grid_rows(&m) })),
        Format::Dot => print!("{}", m.to_dot("operator")),
    }
    Ok(ExitCode::SUCCESS)
}

fn check(cli: &Cli, sequential: bool) -> Outcome {
    let config = CheckConfig {
        n_max: cli.n.map_or(3, usize::from),
        samples: cli.samples,
        seed: cli.seed,
        strategy: if sequential {
            Strategy::Sequential
        } else {
            Strategy::Parallel
        },
    };
    let report = crosscheck::run(&config);
    match cli.format {
        Format::Json => println!("{}", to_json(&report)?),
        _ => println!("{report}"),
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
