use std::fmt::Write as _;
use std::process::ExitCode;

use nexp_core::bounds::{good_bracket, jarnik_bracket, solve_implicit_s, DimensionBracket};
use nexp_core::pressure::{
    default_depth, estimate_dim_collocation, estimate_dim_words, sandwich_check, AlphabetSpec, DimensionEstimate,
    SandwichReport,
};
use nexp_core::{check_determinant, convergents, digits_of, ConvergentPair, DigitWord, NParam};
use serde::Serialize;

use crate::failure::{usage, Failure};
use crate::{BoundsCommand, DigitsArgs, EstimateArgs, Format, MethodChoice};

const IMPLICIT_TOL: f64 = 1e-13;

pub fn emit<T: Serialize>(value: &T, format: Format, text: impl FnOnce(&T) -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable report")),
        Format::Text => print!("{}", text(value)),
    }
}

#[derive(Serialize)]
struct DigitsReport {
    #[serde(flatten)]
    word: DigitWord,
    x: String,
    convergents: Vec<ConvergentPair>,
    determinant_holds: bool,
}

pub fn digits(args: &DigitsArgs, format: Format) -> Result<ExitCode, Failure> {
    let n = NParam::new(args.n)?;
    let word = digits_of(n, &args.x, args.max)?;
    let pairs = convergents(&word);
    let report = DigitsReport {
        determinant_holds: check_determinant(&pairs, n),
        x: format!("{}/{}", args.x.numer(), args.x.denom()),
        convergents: pairs,
        word,
    };
    emit(&report, format, |r| {
        let mut out = String::new();
        let state = if r.word.terminated() { "terminated" } else { "truncated" };
        let _ = writeln!(out, "N = {}, x = {}", r.word.n(), r.x);
        let _ = writeln!(out, "digits = {:?} ({state})", r.word.digits());
        let _ = writeln!(out, "{:>4} {:>8} {:>20} {:>20}", "k", "e_k", "p_k", "q_k");
        for c in &r.convergents {
            let e = match c.index {
                0 => "-".to_string(),
                k => r.word.digits()[k - 1].to_string(),
            };
            let _ = writeln!(out, "{:>4} {:>8} {:>20} {:>20}", c.index, e, c.p, c.q);
        }
        let verdict = if r.determinant_holds { "holds" } else { "FAILS" };
        let _ = writeln!(out, "determinant identity: {verdict}");
        out
    });
    Ok(if report.determinant_holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct BoundsReport {
    family: &'static str,
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(flatten)]
    bracket: DimensionBracket,
    #[serde(skip_serializing_if = "Option::is_none")]
    implicit_s: Option<f64>,
}

pub fn bounds(cmd: &BoundsCommand, format: Format) -> Result<ExitCode, Failure> {
    let report = match *cmd {
        BoundsCommand::Jarnik { n, m } => BoundsReport {
            family: "JARNIK",
            n,
            m: Some(m),
            alpha: None,
            bracket: jarnik_bracket(NParam::new(n)?, m)?,
            implicit_s: None,
        },
        BoundsCommand::Good {
            n,
            alpha,
            solve_implicit,
        } => {
            let np = NParam::new(n)?;
            let bracket = good_bracket(np, alpha)?;
            let implicit_s = match solve_implicit {
                true => Some(solve_implicit_s(np, alpha, IMPLICIT_TOL)?),
                false => None,
            };
            BoundsReport {
                family: "GOOD",
                n,
                m: None,
                alpha: Some(alpha),
                bracket,
                implicit_s,
            }
        }
    };
    emit(&report, format, |r| {
        let mut out = String::new();
        let param = match (r.m, r.alpha) {
            (Some(m), _) => format!("M = {m}"),
            (_, Some(a)) => format!("alpha = {a}"),
            _ => String::new(),
        };
        let _ = writeln!(out, "{} N = {} {param}", r.family.to_lowercase(), r.n);
        let side = |name: &str, v: Option<f64>, raw: Option<f64>, valid: bool| {
            let show = |x: Option<f64>| x.map_or("-".to_string(), |x| x.to_string());
            let validity = if valid { "valid" } else { "hypothesis fails" };
            format!("{name} {} (raw {}, {validity})\n", show(v), show(raw))
        };
        let b = &r.bracket;
        out += &side("lower", b.lower, b.raw_lower, b.lower_valid);
        out += &side("upper", b.upper, b.raw_upper, b.upper_valid);
        if let Some(s) = r.implicit_s {
            let _ = writeln!(out, "implicit s {s}");
        }
        out
    });
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Agreement {
    difference: f64,
    tolerance: f64,
    agree: bool,
}

#[derive(Serialize)]
struct EstimateReport {
    alphabet: AlphabetSpec,
    estimates: Vec<DimensionEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<Agreement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sandwich: Option<SandwichReport>,
}

pub fn run_estimates(
    spec: &AlphabetSpec,
    method: MethodChoice,
    grid: usize,
    depth: Option<usize>,
    tol: f64,
) -> Result<Vec<DimensionEstimate>, Failure> {
    let mut out = Vec::new();
    if matches!(method, MethodChoice::Collocation | MethodChoice::Both) {
        out.push(estimate_dim_collocation(spec, grid, tol)?);
    }
    if matches!(method, MethodChoice::Words | MethodChoice::Both) {
        let depth = depth.unwrap_or_else(|| default_depth(spec));
        out.push(estimate_dim_words(spec, depth, tol)?);
    }
    Ok(out)
}

pub fn estimate(args: &EstimateArgs, format: Format) -> Result<ExitCode, Failure> {
    let n = NParam::new(args.n)?;
    let min_digit = args.min_digit.unwrap_or(args.n);
    let spec = AlphabetSpec::new(n, min_digit, args.max_digit)?;
    if args.sandwich && min_digit != args.n {
        return Err(usage(
            "--sandwich needs the alphabet {N, ..., max-digit}, so --min-digit must equal --N",
        ));
    }
    let estimates = run_estimates(&spec, args.method, args.grid, args.depth, args.tol)?;
    let agreement = match estimates.as_slice() {
        [a, b] => {
            let difference = (a.value - b.value).abs();
            let tolerance = a.tolerance + b.tolerance;
            Some(Agreement {
                difference,
                tolerance,
                agree: difference <= tolerance,
            })
        }
        _ => None,
    };
    let sandwich = match args.sandwich {
        true => Some(sandwich_check(n, args.max_digit, &estimates)?),
        false => None,
    };
    let report = EstimateReport {
        alphabet: spec,
        estimates,
        agreement,
        sandwich,
    };
    emit(&report, format, |r| {
        let mut out = String::new();
        let a = &r.alphabet;
        let _ = writeln!(out, "N = {}, digits {}..={}", a.n, a.min_digit, a.max_digit);
        for e in &r.estimates {
            let d = &e.diagnostics;
            let setting = match (d.grid, d.depth) {
                (Some(g), _) => format!("grid {g}"),
                (_, Some(k)) => format!("depth {k}"),
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "{} {:.12} +/- {:.1e} ({setting}, {} iterations)",
                e.method.as_str(),
                e.value,
                e.tolerance,
                d.iterations
            );
        }
        if let Some(g) = &r.agreement {
            let verdict = if g.agree { "agree" } else { "DISAGREE" };
            let _ = writeln!(
                out,
                "methods {verdict}: difference {:.1e}, allowed {:.1e}",
                g.difference, g.tolerance
            );
        }
        if let Some(s) = &r.sandwich {
            let side = |checked: bool, ok: bool| match (checked, ok) {
                (false, _) => "not tested",
                (true, true) => "ok",
                (true, false) => "VIOLATED",
            };
            let _ = writeln!(
                out,
                "bracket [{:.9}, {:.9}] for M = {}: lower {}, upper {}: {}",
                s.lower.value,
                s.upper.value,
                s.m,
                side(s.lower_checked, s.lower_ok),
                side(s.upper_checked, s.upper_ok),
                if s.pass { "PASS" } else { "FAIL" }
            );
        }
        out
    });
    let failed = report.sandwich.as_ref().is_some_and(|s| !s.pass);
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
