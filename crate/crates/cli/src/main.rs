//! `gcalc` — exact ultrametric calculus on truncated asymptotic
//! expansions from the command line: expression evaluation, sharp
//! norms, difference-quotient derivatives, Riemann integration with
//! generalized endpoints, power series, generalized points, sampled
//! nets, named verification suites, and canonical formatting.
//!
//! Exit codes: 0 success, 1 contract failure, 2 parse error.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gcalc_core::calculus::{self, DerivOptions};
use gcalc_core::expr::Expr;
use gcalc_core::json;
use gcalc_core::net;
use gcalc_core::parse;
use gcalc_core::points;
use gcalc_core::series;
use gcalc_core::verify;
use gcalc_core::{Coef, Error, GenNum, Grid, PowerSeries, Trunc, DEFAULT_TRUNC};

#[derive(Parser)]
#[command(name = "gcalc", version, about = "ultrametric calculus on asymptotic expansions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Clone)]
struct Global {
    /// Working truncation exponent (rational), or "inf".
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNC.to_string())]
    trunc: String,
    /// Coefficient field mode.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Real)]
    mode: Mode,
    /// Seed for randomized commands (hex with 0x prefix, or decimal).
    #[arg(long, global = true, default_value = "0x5EED")]
    seed: String,
    /// Sampling grid as base,kmin,kmax.
    #[arg(long, global = true, default_value = "0.5,6,24")]
    grid: String,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Out::Text)]
    out: Out,
    /// Shorthand for --out json.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    Real,
    Complex,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Out {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed expression to a canonical literal.
    Eval { expr: String },
    /// Sharp norm and valuation of a generalized number.
    Norm { value: String },
    /// Sharp derivative of an expression at a base point.
    Derive {
        expr: String,
        /// Base point: comma-separated generalized-number literals.
        #[arg(long)]
        at: String,
        /// Coordinate to differentiate (1-based); all when omitted.
        #[arg(long)]
        wrt: Option<usize>,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        #[arg(long, default_value_t = 9.0)]
        tau: f64,
    },
    /// Integrate a polynomial expression in t between generalized
    /// endpoints.
    Integrate {
        integrand: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Cross-check on the sampled net backend and print the CSV.
        #[arg(long)]
        net: bool,
    },
    /// Power-series operations.
    Series {
        /// Series literal `series(center=..; a0=.., ...)` or a family
        /// name: geometric | expfam.
        series: String,
        /// Attach a coefficient rule: geometric | expfam | custom:FILE.
        #[arg(long)]
        rule: Option<String>,
        /// Evaluate the partial sum at this point.
        #[arg(long)]
        eval_at: Option<String>,
        /// Partial-sum order for --eval-at.
        #[arg(long, default_value_t = 16)]
        order: usize,
        /// Test convergence at this point.
        #[arg(long)]
        converges_at: Option<String>,
        /// Term-wise derivative order to apply first.
        #[arg(long, default_value_t = 0)]
        derivative: u32,
    },
    /// Build a compactly supported generalized point and report it.
    Point {
        /// Comma-separated component literals.
        components: String,
        #[arg(long)]
        domain: String,
        /// Also run the sharp-ball geometry check.
        #[arg(long)]
        geometry: bool,
        #[arg(long, default_value_t = 50)]
        trials: u32,
    },
    /// Randomized zero probe of an expression on a domain.
    Probe {
        expr: String,
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 100)]
        trials: u32,
    },
    /// Sampled-net operations (CSV format: eps,re,im).
    #[command(subcommand)]
    Net(NetCommand),
    /// Run named verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Canonicalize a literal or JSON form.
    Fmt { input: String },
}

#[derive(Subcommand)]
enum NetCommand {
    /// Sample a classical expression of eps on the grid; prints CSV.
    Sample { expr: String },
    /// Estimate the valuation of a CSV net (file path or - for stdin).
    Estimate { file: String },
    /// Classify a CSV net as moderate/negligible/neither.
    Classify {
        file: String,
        #[arg(long, default_value_t = net::DEFAULT_NEGLIGIBILITY_SLOPE)]
        threshold: f64,
    },
    /// Evaluate a generalized-number literal on the grid; prints CSV.
    FromGennum { value: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_seed(s: &str) -> Result<u64, Error> {
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|_| Error::Parse {
        offset: 0,
        message: format!("invalid seed {s:?}"),
    })
}

fn parse_trunc(s: &str) -> Result<Trunc, Error> {
    s.parse().map_err(|m: String| Error::Parse {
        offset: 0,
        message: m,
    })
}

fn parse_grid(s: &str) -> Result<Grid, Error> {
    s.parse().map_err(|m: String| Error::Parse {
        offset: 0,
        message: m,
    })
}

/// Real mode rejects complex coefficients and the conjugation family.
fn check_mode_value(mode: Mode, x: &GenNum) -> Result<(), Error> {
    if mode == Mode::Real && !x.is_real() {
        return Err(Error::GrammarUnsupported {
            detail: "complex coefficients need --mode complex".into(),
        });
    }
    Ok(())
}

fn out_kind(global: &Global) -> Out {
    if global.json {
        Out::Json
    } else {
        global.out
    }
}

fn print_gennum(x: &GenNum, out: Out) {
    match out {
        Out::Text => println!("{x}"),
        Out::Json => println!("{}", json::gennum_to_json_string(x)),
    }
}

fn split_literals(s: &str) -> Result<Vec<GenNum>, Error> {
    s.split(';')
        .flat_map(|part| part.split(','))
        .map(|part| parse::parse_gennum(part.trim()))
        .collect()
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let g = &cli.global;
    let work = parse_trunc(&g.trunc)?;
    let seed = parse_seed(&g.seed)?;
    let grid = parse_grid(&g.grid)?;
    let out = out_kind(g);

    match &cli.command {
        Command::Eval { expr } => {
            let v = parse::parse_value(expr, &work)?;
            check_mode_value(g.mode, &v)?;
            print_gennum(&v, out);
        }
        Command::Norm { value } => {
            let v = parse::parse_value(value, &work)?;
            let n = v.sharp_norm();
            match out {
                Out::Text => println!("{n}"),
                Out::Json => println!(
                    "{}",
                    serde_json::json!({
                        "norm": n.norm(),
                        "valuation": n.valuation().to_string(),
                        "bound_only": n.bound_only(),
                    })
                ),
            }
        }
        Command::Derive {
            expr,
            at,
            wrt,
            depth,
            tau,
        } => {
            let f = parse::parse_genfunc(expr)?;
            let point = split_literals(at)?;
            let opts = DerivOptions {
                depth: *depth,
                tau: *tau,
                work_trunc: work.clone(),
            };
            let report = |r: &calculus::DerivativeResult, label: &str| match out {
                Out::Text => {
                    if label.is_empty() {
                        println!("{}", r.value);
                    } else {
                        println!("{label}: {}", r.value);
                    }
                }
                Out::Json => println!(
                    "{}",
                    serde_json::json!({
                        "wrt": label,
                        "value": json::gennum_to_json(&r.value),
                        "depth_used": r.depth_used,
                        "remainder_valuations": r.remainder_valuations
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>(),
                    })
                ),
            };
            match wrt {
                Some(i) => {
                    if *i == 0 || *i > f.arity() {
                        return Err(Error::ArityMismatch {
                            expected: f.arity(),
                            got: *i,
                        });
                    }
                    let r = calculus::partial(&f, &point, i - 1, &opts)?;
                    report(&r, "");
                }
                None if f.arity() == 1 => {
                    let r = calculus::derivative(&f, &point[0], &opts)?;
                    report(&r, "");
                }
                None => {
                    for i in 0..f.arity() {
                        let r = calculus::partial(&f, &point, i, &opts)?;
                        report(&r, &format!("x{}", i + 1));
                    }
                }
            }
        }
        Command::Integrate {
            integrand,
            from,
            to,
            net: with_net,
        } => {
            let f = parse::parse_integrand(integrand)?;
            let a = parse::parse_value(from, &work)?;
            let b = parse::parse_value(to, &work)?;
            let v = calculus::integrate(&f, &a, &b, &work)?;
            print_gennum(&v, out);
            if *with_net {
                let coeffs = calculus::poly_coeffs(&f, &work)?;
                let lower = net::from_gennum(&a, &grid);
                let upper = net::from_gennum(&b, &grid);
                let sampled = calculus::integrate_net(
                    |eps, t| {
                        coeffs
                            .iter()
                            .enumerate()
                            .map(|(k, c)| net::eval_gennum_at(c, eps).re * t.powi(k as i32))
                            .sum()
                    },
                    &lower,
                    &upper,
                )?;
                print!("{}", sampled.to_csv());
            }
        }
        Command::Series {
            series: literal,
            rule,
            eval_at,
            order,
            converges_at,
            derivative,
        } => {
            let mut s = match literal.as_str() {
                "geometric" => PowerSeries::geometric(GenNum::zero()),
                "expfam" => PowerSeries::exponential(GenNum::zero()),
                other => parse::parse_series(other)?,
            };
            if let Some(rule) = rule {
                let r = match rule.as_str() {
                    "geometric" => series::CoeffRule::Geometric,
                    "expfam" => series::CoeffRule::ExpFamily,
                    custom => {
                        let path = custom.strip_prefix("custom:").ok_or_else(|| {
                            Error::Parse {
                                offset: 0,
                                message: format!("unknown rule {custom:?}"),
                            }
                        })?;
                        let text =
                            std::fs::read_to_string(path).map_err(|e| Error::Parse {
                                offset: 0,
                                message: format!("cannot read {path}: {e}"),
                            })?;
                        json::rule_from_json_str(&text)?
                    }
                };
                s = PowerSeries::with_rule(s.center().clone(), s.explicit_coeffs().to_vec(), r);
            }
            if *derivative > 0 {
                s = s.derivative(*derivative);
            }
            if let Some(z) = converges_at {
                let z = parse::parse_value(z, &work)?;
                let (ok, slope) = series::converges_at(&s, &z)?;
                match out {
                    Out::Text => println!(
                        "{} (slope {slope:.6})",
                        if ok { "converges" } else { "diverges" }
                    ),
                    Out::Json => println!(
                        "{}",
                        serde_json::json!({"converges": ok, "slope": slope})
                    ),
                }
            }
            if let Some(z) = eval_at {
                let z = parse::parse_value(z, &work)?;
                let (v, tail) = series::eval_series(&s, &z, *order)?;
                match out {
                    Out::Text => println!("{v} (tail valuation >= {tail})"),
                    Out::Json => println!(
                        "{}",
                        serde_json::json!({
                            "value": json::gennum_to_json(&v),
                            "tail_valuation": tail.to_string(),
                        })
                    ),
                }
            }
            if eval_at.is_none() && converges_at.is_none() {
                // No action: print the explicit coefficients.
                for (n, c) in s.explicit_coeffs().iter().enumerate() {
                    println!("a{n} = {c}");
                }
            }
        }
        Command::Point {
            components,
            domain,
            geometry,
            trials,
        } => {
            let comps = split_literals(components)?;
            for c in &comps {
                check_mode_value(g.mode, c)?;
            }
            let dom = parse::parse_domain(domain)?;
            let p = points::make_point(comps, &dom)?;
            match out {
                Out::Text => println!(
                    "point {p}: shadow ({}), support margin {}",
                    p.shadow_point()
                        .iter()
                        .map(|c| format_coef(c))
                        .collect::<Vec<_>>()
                        .join("; "),
                    p.support_margin()
                ),
                Out::Json => println!(
                    "{}",
                    serde_json::json!({
                        "components": p.components().iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "shadow": p.shadow_point().iter().map(|c| c.re).collect::<Vec<_>>(),
                        "support_margin": p.support_margin(),
                    })
                ),
            }
            if *geometry {
                let r = points::ball_geometry(&p, &dom, *trials, seed);
                match out {
                    Out::Text => println!(
                        "geometry: {} (norm {}, {} trials, seed {seed:#x})",
                        r.verdict,
                        r.valuation.as_deref().unwrap_or("-"),
                        r.trials
                    ),
                    Out::Json => println!("{}", serde_json::to_string(&r).expect("serializable")),
                }
            }
        }
        Command::Probe {
            expr,
            domain,
            trials,
        } => {
            let f = parse::parse_genfunc(expr)?;
            let dom = parse::parse_domain(domain)?;
            let u = points::GenFuncOnDomain::new(f, dom);
            let r = points::zero_probe(&u, *trials, seed, &work);
            match out {
                Out::Text => {
                    println!("verdict: {}", r.verdict);
                    if let (Some(w), Some(v)) = (&r.witness, &r.valuation) {
                        println!("witness: {w} (pointvalue valuation {v})");
                    }
                    println!("trials: {}, seed: {seed:#x}", r.trials);
                }
                Out::Json => println!("{}", serde_json::to_string(&r).expect("serializable")),
            }
        }
        Command::Net(cmd) => run_net(cmd, &grid, &work)?,
        Command::Verify { suite } => {
            let outcomes = if suite == "all" {
                verify::run_all(seed)
            } else {
                match verify::run_suite(suite, seed) {
                    Some(o) => vec![o],
                    None => {
                        return Err(Error::Parse {
                            offset: 0,
                            message: format!(
                                "unknown suite {suite:?}; available: {} or all",
                                verify::SUITE_NAMES.join(", ")
                            ),
                        })
                    }
                }
            };
            let mut all_ok = true;
            for o in &outcomes {
                all_ok &= o.passed();
                match out {
                    Out::Text => {
                        println!(
                            "{} {} — {} cases, {} failures, {:.3}s",
                            if o.passed() { "PASS" } else { "FAIL" },
                            o.name,
                            o.cases,
                            o.failures.len(),
                            o.wall.as_secs_f64()
                        );
                        for f in o.failures.iter().take(10) {
                            println!("    {f}");
                        }
                    }
                    Out::Json => println!(
                        "{}",
                        serde_json::json!({
                            "suite": o.name,
                            "passed": o.passed(),
                            "cases": o.cases,
                            "failures": o.failures,
                            "wall_seconds": o.wall.as_secs_f64(),
                        })
                    ),
                }
            }
            if !all_ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Fmt { input } => {
            let trimmed = input.trim();
            let x = if trimmed.starts_with('{') {
                json::gennum_from_json_str(trimmed)?
            } else {
                parse::parse_gennum(trimmed)?
            };
            print_gennum(&x, out);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn format_coef(c: &Coef) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

fn read_net(file: &str) -> Result<net::Net, Error> {
    let text = if file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse {
                offset: 0,
                message: format!("stdin: {e}"),
            })?;
        buf
    } else {
        std::fs::read_to_string(file).map_err(|e| Error::Parse {
            offset: 0,
            message: format!("cannot read {file}: {e}"),
        })?
    };
    net::Net::from_csv(&text)
}

/// Evaluate a classical expression of `eps` at a float sample.
fn eval_classical(e: &Expr, eps: f64) -> Result<f64, Error> {
    Ok(match e {
        Expr::Var(_) => {
            return Err(Error::GrammarUnsupported {
                detail: "net sampling takes an expression of eps only".into(),
            })
        }
        Expr::Const(c) => net::eval_gennum_at(c, eps).re,
        Expr::Add(a, b) => eval_classical(a, eps)? + eval_classical(b, eps)?,
        Expr::Sub(a, b) => eval_classical(a, eps)? - eval_classical(b, eps)?,
        Expr::Mul(a, b) => eval_classical(a, eps)? * eval_classical(b, eps)?,
        Expr::Div { num, den, .. } => eval_classical(num, eps)? / eval_classical(den, eps)?,
        Expr::Neg(a) => -eval_classical(a, eps)?,
        Expr::Pow(a, k) => eval_classical(a, eps)?.powi(*k),
        Expr::Call(b, a) => {
            let v = eval_classical(a, eps)?;
            match b {
                gcalc_core::Builtin::Exp => v.exp(),
                gcalc_core::Builtin::Log => v.ln(),
                gcalc_core::Builtin::Sin => v.sin(),
                gcalc_core::Builtin::Cos => v.cos(),
                gcalc_core::Builtin::Sqrt => v.sqrt(),
                gcalc_core::Builtin::Conj | gcalc_core::Builtin::Re => v,
                gcalc_core::Builtin::Im => 0.0,
            }
        }
        Expr::BetaNormSq(_) | Expr::Integral { .. } => {
            return Err(Error::GrammarUnsupported {
                detail: "node not supported in net sampling".into(),
            })
        }
    })
}

fn run_net(cmd: &NetCommand, grid: &Grid, _work: &Trunc) -> Result<(), Error> {
    match cmd {
        NetCommand::Sample { expr } => {
            let f = parse::parse_genfunc(expr)?;
            if f.arity() > 1 {
                return Err(Error::GrammarUnsupported {
                    detail: "net sampling takes an expression of eps only".into(),
                });
            }
            let body = f.body().clone();
            let sampled = net::sample(
                |eps| Coef::new(eval_classical(&body, eps).unwrap_or(f64::NAN), 0.0),
                grid,
            )?;
            print!("{}", sampled.to_csv());
        }
        NetCommand::Estimate { file } => {
            let n = read_net(file)?;
            let v = net::estimate_valuation(&n)?;
            println!("estimated valuation: {v:.6}");
        }
        NetCommand::Classify { file, threshold } => {
            let n = read_net(file)?;
            println!("{}", net::classify(&n, *threshold));
        }
        NetCommand::FromGennum { value } => {
            let x = parse::parse_gennum(value)?;
            print!("{}", net::from_gennum(&x, grid).to_csv());
        }
    }
    Ok(())
}
