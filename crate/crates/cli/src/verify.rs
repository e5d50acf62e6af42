use std::fmt::Write as _;
use std::process::ExitCode;

use nexp_core::bounds::{good_bracket, jarnik_lower, jarnik_upper};
use nexp_core::verify::{
    default_depth, verify_covering, verify_good_children, verify_growth, verify_mass_distribution, verify_sufficiency,
    verify_telescoping, ConditionCertificate, ConditionId,
};
use nexp_core::{Error, NParam};
use serde::Serialize;

use crate::commands::emit;
use crate::failure::{usage, Failure};
use crate::{Format, Suite, VerifyArgs};

const GROWTH_DEPTH: usize = 6;
const GOOD_DEPTH: usize = 2;

/// Emitted in place of a certificate when a comparison falls inside the
/// precision margin.
#[derive(Debug, Serialize)]
struct Abstention {
    condition_id: ConditionId,
    status: &'static str,
    word: Vec<u64>,
    precision_bits: usize,
    message: String,
}

#[derive(Debug, Serialize)]
struct Skipped {
    condition_id: ConditionId,
    reason: String,
}

#[derive(Debug, Serialize)]
struct Aggregate {
    suite: &'static str,
    status: &'static str,
    certificates: Vec<ConditionCertificate>,
    abstentions: Vec<Abstention>,
    skipped: Vec<Skipped>,
}

enum Outcome {
    Certificate(ConditionCertificate),
    Abstained(Abstention),
    Skipped(Skipped),
}

fn settle(id: ConditionId, result: nexp_core::Result<ConditionCertificate>) -> Result<Outcome, Failure> {
    let e = match result {
        Ok(c) => return Ok(Outcome::Certificate(c)),
        Err(e) => e,
    };
    match &e {
        Error::PrecisionInsufficient { word, bits } => Ok(Outcome::Abstained(Abstention {
            condition_id: id,
            status: "ABSTAIN",
            word: word.clone(),
            precision_bits: *bits,
            message: e.to_string(),
        })),
        _ => Err(e.into()),
    }
}

struct Plan<'a> {
    args: &'a VerifyArgs,
    n: NParam,
    /// In the aggregate suite, conditions that lack a usable parameter are
    /// skipped rather than reported as errors.
    lenient: bool,
}

impl Plan<'_> {
    fn m(&self, id: ConditionId) -> Result<u64, Failure> {
        self.args.m.ok_or_else(|| usage(format!("{} needs --M", name(id))))
    }

    fn depth(&self, m: u64) -> usize {
        self.args
            .depth
            .unwrap_or_else(|| default_depth(m.saturating_sub(self.n.get()) + 1))
    }

    /// `--s`, or the closed-form bound the condition is meant to hold at.
    fn s(&self, id: ConditionId, m: u64, upper: bool) -> Result<Result<f64, Skipped>, Failure> {
        if let Some(s) = self.args.s {
            return Ok(Ok(s));
        }
        let bound = match upper {
            true => jarnik_upper(self.n, m)?,
            false => jarnik_lower(self.n, m)?,
        };
        if bound.valid && bound.value > 0.0 && bound.value < 1.0 {
            return Ok(Ok(bound.value));
        }
        let reason = format!(
            "no default s: the closed-form bound {} is not usable at M = {m}; pass --s",
            bound.value
        );
        match self.lenient {
            true => Ok(Err(Skipped {
                condition_id: id,
                reason,
            })),
            false => Err(usage(reason)),
        }
    }

    fn children(&self, id: ConditionId, upper: bool) -> Result<Outcome, Failure> {
        let m = self.m(id)?;
        let s = match self.s(id, m, upper)? {
            Ok(s) => s,
            Err(skip) => return Ok(Outcome::Skipped(skip)),
        };
        let depth = self.depth(m);
        let result = match id {
            ConditionId::MassDistribution => verify_mass_distribution(self.n, m, s, depth),
            ConditionId::Covering => verify_covering(self.n, m, s, depth),
            _ => verify_sufficiency(self.n, m, s, depth),
        };
        settle(id, result)
    }

    fn condition(&self, id: ConditionId) -> Result<Outcome, Failure> {
        let a = self.args;
        match id {
            ConditionId::Growth => {
                let max_digit = a.max_digit.or(a.m).unwrap_or(self.n.get() + 4);
                let depth = a.depth.unwrap_or(GROWTH_DEPTH);
                settle(id, verify_growth(self.n, depth, max_digit))
            }
            ConditionId::MassDistribution | ConditionId::Sufficiency => self.children(id, false),
            ConditionId::Covering => self.children(id, true),
            ConditionId::Telescoping => {
                let m = self.m(id)?;
                settle(id, verify_telescoping(self.n, m, self.depth(m)))
            }
            ConditionId::GoodChildren => {
                let alpha = a.alpha.ok_or_else(|| usage("the good suite needs --alpha"))?;
                let s = match a.s {
                    Some(s) => s,
                    None => good_bracket(self.n, alpha as f64)?
                        .upper
                        .ok_or_else(|| usage("no default s for alpha <= 2; pass --s"))?,
                };
                let depth = a.depth.unwrap_or(GOOD_DEPTH);
                settle(id, verify_good_children(self.n, alpha, s, depth, a.cutoff, a.span))
            }
        }
    }
}

fn name(id: ConditionId) -> &'static str {
    match id {
        ConditionId::MassDistribution => "MASS_DISTRIBUTION",
        ConditionId::Covering => "COVERING",
        ConditionId::Sufficiency => "SUFFICIENCY",
        ConditionId::Telescoping => "TELESCOPING",
        ConditionId::GoodChildren => "GOOD_CHILDREN",
        ConditionId::Growth => "GROWTH",
    }
}

fn status(c: &ConditionCertificate) -> &'static str {
    if c.passed() {
        "PASS"
    } else {
        "FAIL"
    }
}

fn certificate_line(c: &ConditionCertificate) -> String {
    let mut line = format!(
        "{} {} ({} words, {} bits)",
        name(c.condition_id),
        status(c),
        c.words_checked,
        c.precision_bits
    );
    if let Some(w) = &c.witness_digits {
        let _ = write!(line, " witness {w:?}");
    }
    line
}

fn abstention_line(a: &Abstention) -> String {
    format!("{} ABSTAIN: {}", name(a.condition_id), a.message)
}

pub fn run(args: &VerifyArgs, format: Format) -> Result<ExitCode, Failure> {
    let n = NParam::new(args.n)?;
    let single = match args.suite {
        Suite::All => None,
        Suite::Growth => Some(ConditionId::Growth),
        Suite::Mass => Some(ConditionId::MassDistribution),
        Suite::Cover => Some(ConditionId::Covering),
        Suite::Sufficiency => Some(ConditionId::Sufficiency),
        Suite::Telescope => Some(ConditionId::Telescoping),
        Suite::Good => Some(ConditionId::GoodChildren),
    };
    let plan = Plan {
        args,
        n,
        lenient: single.is_none(),
    };

    if let Some(id) = single {
        return Ok(match plan.condition(id)? {
            Outcome::Certificate(c) => {
                emit(&c, format, |c| certificate_line(c) + "\n");
                if c.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Outcome::Abstained(a) => {
                emit(&a, format, |a| abstention_line(a) + "\n");
                ExitCode::from(5)
            }
            Outcome::Skipped(_) => unreachable!("single conditions are never skipped"),
        });
    }

    let mut ids = vec![ConditionId::Growth];
    if args.m.is_some() {
        ids.extend([
            ConditionId::MassDistribution,
            ConditionId::Covering,
            ConditionId::Sufficiency,
            ConditionId::Telescoping,
        ]);
    }
    if args.alpha.is_some() {
        ids.push(ConditionId::GoodChildren);
    }
    let mut report = Aggregate {
        suite: "ALL",
        status: "PASS",
        certificates: Vec::new(),
        abstentions: Vec::new(),
        skipped: Vec::new(),
    };
    for id in ids {
        match plan.condition(id)? {
            Outcome::Certificate(c) => report.certificates.push(c),
            Outcome::Abstained(a) => report.abstentions.push(a),
            Outcome::Skipped(s) => report.skipped.push(s),
        }
    }
    let failed = report.certificates.iter().any(|c| !c.passed());
    let code = if !report.abstentions.is_empty() {
        report.status = "ABSTAIN";
        5
    } else if failed {
        report.status = "FAIL";
        1
    } else {
        0
    };
    emit(&report, format, |r| {
        let mut out = String::new();
        for c in &r.certificates {
            let _ = writeln!(out, "{}", certificate_line(c));
        }
        for a in &r.abstentions {
            let _ = writeln!(out, "{}", abstention_line(a));
        }
        for s in &r.skipped {
            let _ = writeln!(out, "{} SKIPPED: {}", name(s.condition_id), s.reason);
        }
        let _ = writeln!(out, "suite {}", r.status);
        out
    });
    Ok(ExitCode::from(code))
}
