//! Command-line front-end: evaluate the library functions, run zero
//! censuses and audits, and emit deterministic CSV/JSON artifacts.

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Float;
use std::io::Write;
use std::process::ExitCode;

use output::{fmt_real, Table};
use zeta2::asymptotics::{build_census, main_term_nk, window_rhs};
use zeta2::audit::{audit, measure_arg_profile, ConditionId};
use zeta2::census::{arg_continuous, count_nk, locate_zeros, CensusTarget, Rect};
use zeta2::funceq;
use zeta2::special;
use zeta2::zeta::{log_deriv_ratio, zeta_deriv, DerivOrder, RatioKind};
use zeta2::{ComplexValue, EvalError, PrecisionContext};

#[derive(Parser)]
#[command(name = "zeta2", version, about = "Zero census and formula checks for the second derivative of the Riemann zeta function", disable_help_subcommand = true)]
struct Cli {
    /// Working precision in bits (>= 129 with the default guard policy).
    #[arg(long, global = true, default_value_t = 192)]
    precision_bits: u32,

    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFn {
    Zeta,
    Zeta1,
    Zeta2,
    Gamma,
    Digamma,
    Trigamma,
    Log,
    F,
    Flogd,
    F2f,
    F2f1,
    G2,
    Remainder,
    ZpZ,
    ZppZp,
    ZppZ,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Zeta,
    Zeta2,
    G2,
    G2z,
}

impl TargetArg {
    fn census(self) -> CensusTarget {
        match self {
            TargetArg::Zeta => CensusTarget::Zeta,
            TargetArg::Zeta2 => CensusTarget::ZetaSecond,
            TargetArg::G2 => CensusTarget::G2,
            TargetArg::G2z => CensusTarget::G2OverZeta,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point.
    Eval {
        #[arg(long = "fn", value_enum)]
        function: EvalFn,
        /// Complex point, e.g. "2+0i", "-3+12.5i", "0.5-14i".
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Localize all zeros of a target inside a rectangle.
    Zeros {
        #[arg(long, value_enum)]
        target: TargetArg,
        /// Rectangle "smin,smax,tmin,tmax".
        #[arg(long, allow_hyphen_values = true)]
        rect: String,
    },
    /// Count zeros up to height T (winding-based), with the counting-formula
    /// main term and residual.
    Count {
        #[arg(long)]
        k: u32,
        #[arg(long = "T")]
        t: f64,
    },
    /// Full census over a T grid: counts, displacement sums, right-hand
    /// sides, residuals and the two critical-line arguments.
    Census {
        /// Comma-separated ascending ordinates, each above 4π.
        #[arg(long)]
        grid: String,
    },
    /// Grid audit of one of the working inequalities.
    Audit {
        #[arg(long)]
        condition: String,
        /// Rectangle "smin,smax,tmin,tmax".
        #[arg(long, allow_hyphen_values = true)]
        rect: String,
        #[arg(long)]
        step: f64,
    },
    /// Continuous-argument trace along a horizontal segment.
    Args {
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 0.5)]
        sigma_stop: f64,
    },
    /// Measured argument profile against the bound shapes.
    Profile {
        #[arg(long = "T")]
        t: f64,
        /// Comma-separated abscissas in [1/2, 3/4].
        #[arg(long)]
        sigmas: String,
    },
    /// Displacement-sum window: sum over (T, T+U] against the window main
    /// terms.
    Window {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "U")]
        u: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Usage problems exit 1 (clap's default would be 2, which is
            // reserved for domain errors here).
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot build thread pool: {e}");
            return ExitCode::from(1);
        }
    };

    let ctx = match PrecisionContext::with_bits(cli.precision_bits) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let result = pool.install(|| run(&ctx, &cli.command));
    match result {
        Ok(table) => {
            let body = match cli.format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(),
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, body) {
                        eprintln!("error: cannot write {path}: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    if stdout.write_all(body.as_bytes()).is_err() {
                        return ExitCode::from(1);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn parse_complex(ctx: &PrecisionContext, s: &str) -> Result<ComplexValue, EvalError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact.trim_end_matches('i');
    // Split at the last '+' or '-' that is not an exponent sign or leading.
    let bytes = inner.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && bytes[i - 1] as char != 'e' && bytes[i - 1] as char != 'E' {
            split = Some(i);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(i) if compact.ends_with('i') => (&inner[..i], &inner[i..]),
        _ if compact.ends_with('i') => ("0", inner),
        _ => (inner, "0"),
    };
    let re: f64 = re_str
        .parse()
        .map_err(|_| EvalError::Domain(format!("cannot parse real part of '{s}'")))?;
    let im_str = if im_str == "+" || im_str.is_empty() {
        "1"
    } else if im_str == "-" {
        "-1"
    } else {
        im_str
    };
    let im: f64 = im_str
        .parse()
        .map_err(|_| EvalError::Domain(format!("cannot parse imaginary part of '{s}'")))?;
    ComplexValue::new(ctx, re, im)
}

fn parse_rect(spec: &str) -> Result<Rect, EvalError> {
    let parts: Vec<f64> = spec
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| EvalError::Domain(format!("cannot parse rectangle '{spec}'")))?;
    if parts.len() != 4 {
        return Err(EvalError::Domain(format!(
            "rectangle needs four comma-separated numbers, got '{spec}'"
        )));
    }
    Rect::new(parts[0], parts[1], parts[2], parts[3])
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, EvalError> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| EvalError::Domain(format!("cannot parse grid entry '{p}'")))
        })
        .collect()
}

fn run(ctx: &PrecisionContext, cmd: &Command) -> Result<Table, EvalError> {
    match cmd {
        Command::Eval { function, s } => {
            let point = parse_complex(ctx, s)?;
            let value = match function {
                EvalFn::Zeta => zeta_deriv(ctx, DerivOrder::ZETA, &point)?,
                EvalFn::Zeta1 => zeta_deriv(ctx, DerivOrder::FIRST, &point)?,
                EvalFn::Zeta2 => zeta_deriv(ctx, DerivOrder::SECOND, &point)?,
                EvalFn::Gamma => special::gamma(ctx, &point)?,
                EvalFn::Digamma => special::digamma(ctx, &point)?,
                EvalFn::Trigamma => special::trigamma(ctx, &point)?,
                EvalFn::Log => special::log_principal(ctx, &point)?,
                EvalFn::F => funceq::f_factor(ctx, &point)?,
                EvalFn::Flogd => funceq::f_log_deriv(ctx, &point)?,
                EvalFn::F2f => funceq::f2_over_f(ctx, &point)?,
                EvalFn::F2f1 => funceq::f2_over_f1(ctx, &point)?,
                EvalFn::G2 => funceq::g2(ctx, &point)?,
                EvalFn::Remainder => funceq::remainder_term(ctx, &point)?,
                EvalFn::ZpZ => log_deriv_ratio(ctx, RatioKind::ZpOverZ, &point)?,
                EvalFn::ZppZp => log_deriv_ratio(ctx, RatioKind::ZppOverZp, &point)?,
                EvalFn::ZppZ => log_deriv_ratio(ctx, RatioKind::ZppOverZ, &point)?,
            };
            Ok(Table {
                header: vec!["re", "im"],
                rows: vec![vec![fmt_real(value.re()), fmt_real(value.im())]],
            })
        }
        Command::Zeros { target, rect } => {
            let rect = parse_rect(rect)?;
            let zeros = locate_zeros(ctx, target.census(), &rect)?;
            Ok(Table {
                header: vec!["target", "re", "im", "multiplicity", "residual"],
                rows: zeros
                    .iter()
                    .map(|z| {
                        vec![
                            z.target.label().to_string(),
                            fmt_real(z.position.re()),
                            fmt_real(z.position.im()),
                            z.multiplicity.to_string(),
                            fmt_real(&z.residual),
                        ]
                    })
                    .collect(),
            })
        }
        Command::Count { k, t } => {
            let outcome = count_nk(ctx, *k, *t)?;
            let main = main_term_nk(ctx, *t)?;
            let resid = Float::with_val(ctx.mantissa_bits(), outcome.count) - &main;
            let flags = if outcome.perturbed { "t_perturbed" } else { "" };
            Ok(Table {
                header: vec!["T", "count", "main", "residual", "flags"],
                rows: vec![vec![
                    fmt_real(&ctx.float(*t)),
                    outcome.count.to_string(),
                    fmt_real(&main),
                    fmt_real(&resid),
                    flags.to_string(),
                ]],
            })
        }
        Command::Census { grid } => {
            let grid = parse_grid(grid)?;
            let rows = build_census(ctx, &grid)?;
            Ok(Table {
                header: vec![
                    "T",
                    "N2",
                    "N2_main",
                    "N2_resid",
                    "S2",
                    "S2_rhs",
                    "S2_resid",
                    "arg_zeta_half",
                    "arg_G2_half",
                    "flags",
                ],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            fmt_real(&ctx.float(r.t)),
                            r.n2_count.to_string(),
                            fmt_real(&r.n2_main),
                            fmt_real(&r.n2_residual),
                            fmt_real(&r.s2_sum),
                            fmt_real(&r.s2_rhs),
                            fmt_real(&r.s2_residual),
                            fmt_real(&r.arg_zeta_half),
                            fmt_real(&r.arg_g2_half),
                            r.flags.clone(),
                        ]
                    })
                    .collect(),
            })
        }
        Command::Audit {
            condition,
            rect,
            step,
        } => {
            let id = ConditionId::parse(condition).ok_or_else(|| {
                EvalError::Domain(format!("unknown condition '{condition}'"))
            })?;
            let rect = parse_rect(rect)?;
            let report = audit(ctx, id, &rect, *step)?;
            Ok(Table {
                header: vec![
                    "condition",
                    "sigma_min",
                    "sigma_max",
                    "t_min",
                    "t_max",
                    "step",
                    "worst_sigma",
                    "worst_t",
                    "worst_margin",
                    "pass",
                ],
                rows: vec![vec![
                    report.condition_id.label().to_string(),
                    fmt_real(&ctx.float(report.region.sigma_min)),
                    fmt_real(&ctx.float(report.region.sigma_max)),
                    fmt_real(&ctx.float(report.region.t_min)),
                    fmt_real(&ctx.float(report.region.t_max)),
                    fmt_real(&ctx.float(report.grid_step)),
                    fmt_real(report.worst_point.re()),
                    fmt_real(report.worst_point.im()),
                    fmt_real(&ctx.float(report.worst_margin)),
                    report.pass.to_string(),
                ]],
            })
        }
        Command::Args {
            target,
            t,
            sigma_stop,
        } => {
            let trace = arg_continuous(ctx, target.census(), *t, *sigma_stop)?;
            Ok(Table {
                header: vec!["sigma", "arg"],
                rows: trace
                    .samples
                    .iter()
                    .map(|(s, a)| vec![fmt_real(s), fmt_real(a)])
                    .collect(),
            })
        }
        Command::Profile { t, sigmas } => {
            let sigmas = parse_grid(sigmas)?;
            let rows = measure_arg_profile(ctx, *t, &sigmas)?;
            Ok(Table {
                header: vec!["sigma", "arg_g2", "arg_zeta", "bound_l25", "bound_zeta"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            fmt_real(&ctx.float(r.sigma)),
                            fmt_real(&ctx.float(r.arg_g2)),
                            fmt_real(&ctx.float(r.arg_zeta)),
                            fmt_real(&ctx.float(r.bound_l25)),
                            fmt_real(&ctx.float(r.bound_zeta)),
                        ]
                    })
                    .collect(),
            })
        }
        Command::Window { t, u } => {
            let rhs = window_rhs(ctx, *t, *u)?;
            let zeros = zeta2::census::locate_zeta2_upto(ctx, *t + *u)?;
            let (hi, _, _) = zeta2::census::sum_partial(ctx, &zeros, &ctx.float(*t + *u));
            let (lo, _, _) = zeta2::census::sum_partial(ctx, &zeros, &ctx.float(*t));
            let sum = Float::with_val(ctx.mantissa_bits(), &hi - &lo);
            let resid = Float::with_val(ctx.mantissa_bits(), &sum - &rhs);
            Ok(Table {
                header: vec!["T", "U", "window_sum", "window_rhs", "residual"],
                rows: vec![vec![
                    fmt_real(&ctx.float(*t)),
                    fmt_real(&ctx.float(*u)),
                    fmt_real(&sum),
                    fmt_real(&rhs),
                    fmt_real(&resid),
                ]],
            })
        }
    }
}
