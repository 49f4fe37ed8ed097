//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails or overruns its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rrvoa_core::fock;
use rrvoa_core::principal::{self, Check, Label, MemoProvider};
use rrvoa_core::{ideal, identities, series, Result, YMonomial};

const MAX_CHARGE: u32 = 4;
const CAP4_CHARACTER: i64 = 4 * 20;
const CAP4_EXACTNESS: i64 = 4 * 12;
const CAP4_OPERATORS: i64 = 4 * 6;

struct Outcome {
    checks: Vec<Check>,
    budget: Option<Duration>,
}

fn outcome(checks: Vec<Check>) -> Outcome {
    Outcome {
        checks,
        budget: None,
    }
}

fn within(secs: u64, checks: Vec<Check>) -> Outcome {
    Outcome {
        checks,
        budget: Some(Duration::from_secs(secs)),
    }
}

fn c1() -> Result<Outcome> {
    let provider = MemoProvider::new();
    let got = principal::character(&provider, Label::Vacuum, MAX_CHARGE, CAP4_CHARACTER)?;
    let want = series::rr_sum(0, CAP4_CHARACTER, Some(MAX_CHARGE))?;
    Ok(within(
        60,
        vec![Check::series_equal("character_vacuum", &got, &want)],
    ))
}

fn c2() -> Result<Outcome> {
    let provider = MemoProvider::new();
    let got = principal::character(&provider, Label::Charged, MAX_CHARGE, CAP4_CHARACTER)?;
    let want = series::rr_sum(1, CAP4_CHARACTER, Some(MAX_CHARGE))?
        .shift(Label::Charged.base())
        .restrict_charge(Label::Charged.bidegree(MAX_CHARGE, 0).charge2);
    Ok(outcome(vec![Check::series_equal(
        "character_charged",
        &got,
        &want,
    )]))
}

fn c3(p: &MemoProvider) -> Result<Outcome> {
    Ok(outcome(vec![principal::verify_shift_relation(
        p,
        MAX_CHARGE,
        CAP4_CHARACTER,
    )?]))
}

fn c4() -> Result<Outcome> {
    let provider = MemoProvider::new();
    let report = principal::verify_exactness(&provider, CAP4_EXACTNESS)?;
    let mut checks = report.checks;
    if report.cells.is_empty() {
        checks.push(Check::fail("cells_checked", "no bidegrees"));
    }
    Ok(within(120, checks))
}

fn c5(p: &MemoProvider) -> Result<Outcome> {
    Ok(outcome(
        principal::verify_euler(p, MAX_CHARGE, CAP4_CHARACTER)?.checks,
    ))
}

fn c6() -> Result<Outcome> {
    Ok(within(5, vec![identities::verify_recursion(4 * 100)?]))
}

fn c7() -> Result<Outcome> {
    Ok(within(10, identities::verify_rr_identities(4 * 200)?))
}

fn c8(p: &MemoProvider) -> Result<Outcome> {
    Ok(outcome(vec![ideal::cross_check_hilbert(
        p,
        MAX_CHARGE,
        CAP4_CHARACTER,
    )?]))
}

fn c9() -> Result<Outcome> {
    let mut checks = identities::verify_operator_identities(CAP4_OPERATORS)?;
    // a non-basis sample: x_α(-4) x_α(-2) 1
    let v = principal::realize(Label::Vacuum, &YMonomial::new(vec![4, 2])?);
    let sample_ok = (-5..=2).all(|m| {
        fock::o_operator(&fock::x_alpha(m, &v)).ok()
            == fock::o_operator(&v).ok().map(|ov| fock::x_alpha(m, &ov))
    });
    checks.push(if sample_ok {
        Check::pass("o_commutes_on_sample")
    } else {
        Check::fail("o_commutes_on_sample", "x_α(-4)x_α(-2)1")
    });
    Ok(outcome(checks))
}

fn c10(p: &MemoProvider) -> Result<Outcome> {
    Ok(outcome(vec![
        principal::verify_oracle(p, Label::Vacuum, MAX_CHARGE, CAP4_CHARACTER)?,
        principal::verify_oracle(p, Label::Charged, MAX_CHARGE, CAP4_CHARACTER)?,
    ]))
}

fn main() -> ExitCode {
    let shared = MemoProvider::new();
    type Runner<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;
    let criteria: Vec<(&str, Runner)> = vec![
        ("character of W(Λ0) matches the sum side", Box::new(c1)),
        (
            "character of W(Λ1) matches the offset sum side",
            Box::new(c2),
        ),
        (
            "dimension shift between W(Λ0) and W(Λ1)",
            Box::new(|| c3(&shared)),
        ),
        (
            "exact sequence through e^{α/2} and o(e^{α/2})",
            Box::new(c4),
        ),
        (
            "Euler identity and recursion on computed characters",
            Box::new(|| c5(&shared)),
        ),
        (
            "recursion residual of the sum side up to q^100",
            Box::new(c6),
        ),
        ("Rogers-Ramanujan identities up to q^200", Box::new(c7)),
        (
            "Hilbert series of the ideal quotient",
            Box::new(|| c8(&shared)),
        ),
        ("vertex operator identities", Box::new(c9)),
        (
            "component dimensions agree with partition counts",
            Box::new(|| c10(&shared)),
        ),
    ];

    let mut all_ok = true;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Err(e) => (false, format!("error: {e}")),
            Ok(o) => {
                let failed: Vec<String> = o
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| {
                        format!(
                            "{} ({})",
                            c.name,
                            c.counterexample.as_deref().unwrap_or("-")
                        )
                    })
                    .collect();
                let slow = o.budget.filter(|b| took > *b);
                match (failed.is_empty(), slow) {
                    (true, None) => (
                        true,
                        o.checks
                            .iter()
                            .map(|c| c.name.as_str())
                            .collect::<Vec<_>>()
                            .join(", "),
                    ),
                    (true, Some(b)) => (false, format!("over budget of {}s", b.as_secs())),
                    (false, _) => (false, failed.join("; ")),
                }
            }
        };
        all_ok &= ok;
        println!(
            "criterion {:>2}: {} {title} [{detail}] {:.2}s",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
