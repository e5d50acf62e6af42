//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use astro_float::BigFloat;
use nexp_core::bounds::{
    good_bracket, implicit_lhs, jarnik_lower, jarnik_upper, search_good_beta, solve_implicit_s, DEFAULT_BETA_CAP,
};
use nexp_core::hp::{to_f64, Hp};
use nexp_core::pressure::{
    default_depth, estimate_dim_collocation, estimate_dim_words, sandwich_check, AlphabetSpec, DimensionEstimate,
};
use nexp_core::verify::{verify_covering, verify_good_children, verify_growth, verify_mass_distribution};
use nexp_core::{
    check_determinant, check_ratio_bounds, check_two_sided_bounds, convergents, fundamental_interval, interval_length,
    telescoping_sum, DigitWord, ExactRational, NParam,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn np(n: u64) -> NParam {
    NParam::new(n).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_word(rng: &mut ChaCha8Rng, n: u64, spread: u64, len: usize) -> DigitWord {
    let digits = (0..len).map(|_| rng.gen_range(n..=n + spread)).collect();
    DigitWord::new(np(n), digits).unwrap()
}

fn exact_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for i in 0..10_000 {
        let n = rng.gen_range(1..=4);
        let len = rng.gen_range(1..=10);
        let w = random_word(&mut rng, n, 20, len);
        let pairs = convergents(&w);
        ensure(
            check_determinant(&pairs, w.n()),
            format!("determinant fails on {:?}", w.digits()),
        )?;
        let q = &pairs[len].q;
        let q_prev = &pairs[len - 1].q;
        let formula = ExactRational::new(num_traits::pow(BigInt::from(n), len), q * (q + q_prev));
        let interval = fundamental_interval(&w).map_err(|e| e.to_string())?;
        ensure(
            interval.length == formula && interval_length(&w) == formula,
            format!("length formula fails on word {i}: {:?}", w.digits()),
        )?;
    }
    Ok("10000 random words, exact".into())
}

fn growth_suite() -> Outcome {
    let mut total = 0;
    for n in 1..=3 {
        let c = verify_growth(np(n), 6, n + 4).map_err(|e| e.to_string())?;
        ensure(c.passed(), format!("N={n}: witness {:?}", c.witness_digits))?;
        total += c.words_checked;
    }
    Ok(format!("{total} words, N in 1..=3, depth 6"))
}

/// Every word of length `1..=depth` over `n..=n+spread`.
fn all_words(n: u64, spread: u64, depth: usize) -> Vec<DigitWord> {
    let mut out = Vec::new();
    let mut frontier = vec![DigitWord::empty(np(n))];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for k in n..=n + spread {
                next.push(w.child(k).unwrap());
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn interval_geometry() -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        for w in all_words(n, 4, 6) {
            ensure(
                check_two_sided_bounds(&w).unwrap(),
                format!("two-sided bounds fail on {:?}", w.digits()),
            )?;
            checked += 1;
        }
        let mut parents = all_words(n, 4, 5);
        parents.push(DigitWord::empty(np(n)));
        for p in parents {
            for k in n..=n + 4 {
                ensure(
                    check_ratio_bounds(&p, k).unwrap(),
                    format!("ratio bounds fail on {:?}, {k}", p.digits()),
                )?;
                checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let len = rng.gen_range(0..=8);
        let w = random_word(&mut rng, n, 20, len);
        let m = n + rng.gen_range(0..=30);
        let t = telescoping_sum(&w, m).map_err(|e| e.to_string())?;
        ensure(t.summed == t.closed_form, "telescoping mismatch")?;
    }
    Ok(format!("{checked} exhaustive checks, 1000 telescoping prefixes"))
}

fn rel_close(got: f64, want: &BigFloat, rel: f64) -> bool {
    let want = to_f64(want);
    ((got - want) / want).abs() <= rel
}

fn closed_forms() -> Outcome {
    // independent oracle at 256 bits
    let mut h = Hp::new(256);
    let one = h.int(1);
    let half = h.div(&one, &h.int(2));
    let ln = |h: &mut Hp, v: u64| {
        let x = h.int(v);
        h.ln(&x)
    };
    let ln2 = ln(&mut h, 2);
    let lower = h.sub(&one, &h.div(&h.int(4), &h.mul(&h.int(101), &ln2)));
    let ln10201 = ln(&mut h, 10201);
    let upper = h.sub(&one, &h.div(&one, &h.mul(&h.int(101), &ln10201)));
    let ln2002 = ln(&mut h, 2002);
    let good_lo = h.add(&half, &h.div(&one, &h.mul(&h.int(2), &ln2002)));
    let ln1999 = ln(&mut h, 1999);
    let lnln = h.ln(&ln1999);
    let good_hi = h.add(&half, &h.div(&lnln, &h.mul(&h.int(2), &ln1999)));

    let jl = jarnik_lower(np(1), 100).unwrap().value;
    let ju = jarnik_upper(np(1), 100).unwrap().value;
    let g = good_bracket(np(1), 2000.0).unwrap();
    let rel = 1e-12;
    ensure(rel_close(jl, &lower, rel), format!("jarnik lower {jl}"))?;
    ensure(rel_close(ju, &upper, rel), format!("jarnik upper {ju}"))?;
    ensure(rel_close(g.lower.unwrap(), &good_lo, rel), "good lower")?;
    ensure(rel_close(g.upper.unwrap(), &good_hi, rel), "good upper")?;
    Ok(format!(
        "jarnik(1,100) = ({jl:.15}, {ju:.15}), good(1,2000) = ({:.15}, {:.15})",
        g.lower.unwrap(),
        g.upper.unwrap()
    ))
}

fn implicit_root() -> Outcome {
    let samples: [(u64, &[f64]); 2] = [
        (1, &[1700.0, 2000.0, 5000.0, 1e4, 1e5, 1e6, 1e8, 1e12]),
        (2, &[6e8, 1e9, 1e10, 1e12, 1e15]),
    ];
    let mut worst: f64 = 0.0;
    for (n, alphas) in samples {
        for &alpha in alphas {
            let b = good_bracket(np(n), alpha).unwrap();
            ensure(b.upper_valid, format!("alpha {alpha} outside the hypothesis"))?;
            let s = solve_implicit_s(np(n), alpha, 1e-13).map_err(|e| e.to_string())?;
            let residual = (implicit_lhs(alpha, s) - (1.0 + n as f64)).abs();
            worst = worst.max(residual);
            ensure(residual < 1e-8, format!("residual {residual} at N={n}, alpha={alpha}"))?;
            ensure(
                s < b.upper.unwrap(),
                format!("s={s} not below the upper bound at alpha={alpha}"),
            )?;
        }
    }
    Ok(format!("13 samples, max residual {worst:.1e}"))
}

fn both_estimates(spec: &AlphabetSpec) -> Result<(DimensionEstimate, DimensionEstimate), String> {
    let c = estimate_dim_collocation(spec, 32, 1e-10).map_err(|e| e.to_string())?;
    let w = estimate_dim_words(spec, default_depth(spec), 1e-10).map_err(|e| e.to_string())?;
    Ok((c, w))
}

fn sandwich() -> Outcome {
    let cases = [
        (1, 4),
        (1, 6),
        (1, 8),
        (1, 12),
        (1, 16),
        (1, 20),
        (2, 6),
        (2, 8),
        (2, 12),
    ];
    let mut worst: f64 = 0.0;
    for (n, m) in cases {
        let spec = AlphabetSpec::bounded(np(n), m).unwrap();
        let (c, w) = both_estimates(&spec)?;
        let gap = (c.value - w.value).abs();
        worst = worst.max(gap);
        ensure(gap <= 1e-5, format!("N={n} M={m}: methods differ by {gap:.2e}"))?;
        let r = sandwich_check(np(n), m, &[c, w]).unwrap();
        ensure(
            r.pass && r.upper_checked,
            format!(
                "N={n} M={m}: {} outside [{}, {}]",
                r.estimate, r.lower.value, r.upper.value
            ),
        )?;
        // the estimate must sit strictly inside, not only within tolerance
        ensure(r.estimate < r.upper.value, "estimate above upper bound")?;
        if r.lower_checked {
            ensure(r.lower.value < r.estimate, "estimate below lower bound")?;
        }
    }
    Ok(format!("9 alphabets, max method gap {worst:.1e}"))
}

fn cross_validation() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=3 {
        for m in n..=n + 5 {
            let spec = AlphabetSpec::bounded(np(n), m).unwrap();
            let (c, w) = both_estimates(&spec)?;
            if m == n {
                ensure(c.value == 0.0 && w.value == 0.0, format!("degenerate N={n} not zero"))?;
                continue;
            }
            let gap = (c.value - w.value).abs();
            worst = worst.max(gap);
            count += 1;
            ensure(gap <= 1e-5, format!("N={n} M={m}: {} vs {}", c.value, w.value))?;
        }
    }
    Ok(format!("{count} alphabets plus 3 degenerate, max gap {worst:.1e}"))
}

fn certificates() -> Outcome {
    for (n, m) in [(1, 10), (1, 50), (2, 6)] {
        let lo = jarnik_lower(np(n), m).unwrap().value;
        let hi = jarnik_upper(np(n), m).unwrap().value;
        let mass = verify_mass_distribution(np(n), m, lo, 4).map_err(|e| e.to_string())?;
        ensure(mass.passed(), format!("mass N={n} M={m}: {:?}", mass.witness_digits))?;
        let cover = verify_covering(np(n), m, hi, 4).map_err(|e| e.to_string())?;
        ensure(
            cover.passed(),
            format!("covering N={n} M={m}: {:?}", cover.witness_digits),
        )?;
    }
    let s = good_bracket(np(1), 2000.0).unwrap().upper.unwrap();
    let good = verify_good_children(np(1), 2000, s, 2, 100_000, 3).map_err(|e| e.to_string())?;
    ensure(good.passed(), format!("good children: {:?}", good.witness_digits))?;
    Ok("mass and covering at (1,10), (1,50), (2,6) depth 4; good children depth 2".into())
}

fn good_regime() -> Outcome {
    let alpha = 2000;
    let search = search_good_beta(np(1), alpha, DEFAULT_BETA_CAP).map_err(|e| e.to_string())?;
    let spec = AlphabetSpec::new(np(1), alpha, search.beta).unwrap();
    let e = estimate_dim_collocation(&spec, 32, 1e-10).map_err(|e| e.to_string())?;
    let b = good_bracket(np(1), alpha as f64).unwrap();
    let (lo, hi) = (b.lower.unwrap(), b.upper.unwrap());
    ensure(e.value > lo - 1e-6, format!("estimate {} below lower {lo}", e.value))?;
    ensure(e.value < hi + 1e-6, format!("estimate {} above upper {hi}", e.value))?;
    Ok(format!(
        "beta = {}, estimate {:.9} in ({lo:.9}, {hi:.9})",
        search.beta, e.value
    ))
}

fn limit_behaviour() -> Outcome {
    let brackets: Vec<_> = [1e4, 1e6, 1e8]
        .iter()
        .map(|&a| good_bracket(np(1), a).unwrap())
        .collect();
    for pair in brackets.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (al, au, bl, bu) = (a.lower.unwrap(), a.upper.unwrap(), b.lower.unwrap(), b.upper.unwrap());
        ensure(bl < al && bu < au, "bounds not decreasing")?;
        ensure(bu - bl < au - al, "bracket width not decreasing")?;
        ensure(bl > 0.5, "lower bound crossed 1/2")?;
    }
    let last = brackets.last().unwrap();
    Ok(format!(
        "alpha = 1e8 gives ({:.6}, {:.6})",
        last.lower.unwrap(),
        last.upper.unwrap()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact identities", exact_identities),
        ("growth suite", growth_suite),
        ("interval geometry", interval_geometry),
        ("closed-form reproduction", closed_forms),
        ("implicit-root dominance", implicit_root),
        ("sandwich validation", sandwich),
        ("estimator cross-validation", cross_validation),
        ("proof-condition certificates", certificates),
        ("good-regime bracket", good_regime),
        ("limit behaviour", limit_behaviour),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
