use std::process::ExitCode;

use nexp_core::bounds::{good_bracket, jarnik_bracket, DimensionBracket};
use nexp_core::pressure::{AlphabetSpec, DEFAULT_GRID};
use nexp_core::NParam;
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{emit, run_estimates};
use crate::failure::{usage, Failure};
use crate::{Family, Format, SweepArgs};

pub const HEADER: &str = "family,N,param,lower,upper,estimate,method,tolerance,valid_lower,valid_upper";

/// Parses an inclusive range `a..b` with `a <= b`.
pub fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {text:?}"))?;
    let parse = |v: &str| v.trim().parse::<u64>().map_err(|e| format!("{v:?}: {e}"));
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// `v` to 15 significant digits, trailing zeros dropped, exponent form only
/// outside `[1e-5, 1e15)`.
pub fn sig15(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        trim_zeros(format!("{v:.*}", (14 - exp) as usize))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        let keep = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(keep);
    }
    s
}

struct Row {
    family: &'static str,
    n: u64,
    param: String,
    lower: Option<f64>,
    upper: Option<f64>,
    estimate: Option<f64>,
    method: &'static str,
    tolerance: f64,
    valid_lower: bool,
    valid_upper: bool,
}

impl Row {
    fn bounds(family: &'static str, n: u64, param: String, b: &DimensionBracket) -> Self {
        Row {
            family,
            n,
            param,
            lower: b.lower,
            upper: b.upper,
            estimate: None,
            method: "CLOSED_FORM",
            tolerance: 0.0,
            valid_lower: b.lower_valid,
            valid_upper: b.upper_valid,
        }
    }

    fn line(&self) -> String {
        let cell = |v: Option<f64>| v.map(sig15).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            self.family,
            self.n,
            self.param,
            cell(self.lower),
            cell(self.upper),
            cell(self.estimate),
            self.method,
            sig15(self.tolerance),
            self.valid_lower,
            self.valid_upper
        )
    }
}

fn rows(args: &SweepArgs, n: NParam) -> Result<Vec<Row>, Failure> {
    let m_range = || {
        args.m_range
            .ok_or_else(|| usage("this family sweeps over M; pass --M-range a..b"))
    };
    let grouped: Vec<Vec<Row>> = match args.family {
        Family::Jarnik => {
            let (a, b) = m_range()?;
            (a..=b)
                .into_par_iter()
                .map(|m| {
                    Ok(vec![Row::bounds(
                        "JARNIK",
                        n.get(),
                        m.to_string(),
                        &jarnik_bracket(n, m)?,
                    )])
                })
                .collect::<Result<_, Failure>>()?
        }
        Family::Good => {
            let mut alphas = args
                .alpha_list
                .clone()
                .ok_or_else(|| usage("the good family sweeps over alpha; pass --alpha-list"))?;
            alphas.sort_by(f64::total_cmp);
            alphas
                .into_par_iter()
                .map(|a| Ok(vec![Row::bounds("GOOD", n.get(), sig15(a), &good_bracket(n, a)?)]))
                .collect::<Result<_, Failure>>()?
        }
        Family::Estimate => {
            let (a, b) = m_range()?;
            (a..=b)
                .into_par_iter()
                .map(|m| {
                    let spec = AlphabetSpec::bounded(n, m)?;
                    let bracket = jarnik_bracket(n, m)?;
                    let estimates = run_estimates(&spec, args.method, DEFAULT_GRID, None, args.tol)?;
                    Ok(estimates
                        .iter()
                        .map(|e| Row {
                            estimate: Some(e.value),
                            method: e.method.as_str(),
                            tolerance: e.tolerance,
                            ..Row::bounds("ESTIMATE", n.get(), m.to_string(), &bracket)
                        })
                        .collect())
                })
                .collect::<Result<_, Failure>>()?
        }
    };
    Ok(grouped.into_iter().flatten().collect())
}

/// The CSV document for `rows`, header included.
fn render(rows: &[Row]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out += &r.line();
    }
    out
}

#[derive(Serialize)]
struct Written {
    out: String,
    rows: usize,
}

pub fn run(args: &SweepArgs, format: Format) -> Result<ExitCode, Failure> {
    let n = NParam::new(args.n)?;
    let rows = rows(args, n)?;
    std::fs::write(&args.out, render(&rows))
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", args.out.display())))?;
    let written = Written {
        out: args.out.display().to_string(),
        rows: rows.len(),
    };
    emit(&written, format, |w| format!("wrote {} rows to {}\n", w.rows, w.out));
    Ok(ExitCode::SUCCESS)
}
