//! Built-in invariant suites behind `tailperm selftest`.
//!
//! quick: fixture-level checks, under a minute in any build.
//! full: exhaustive construction validity, oracle optimality, the randomized
//! model-equivalence suites, decoder soundness, and tensor round trips.

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};

use tailperm::channel::{
    end_to_end_ttpc, exact_outcomes, CompositeDesign, ErrorSpec, Fraction, Outcome, ReadProcess,
    Weight, WeightRule, DEFAULT_ENUMERATION_BUDGET,
};
use tailperm::check::{
    counterexample_fixtures, equivalence_suite, max_code_oracle, Capability, TailCode,
};
use tailperm::construct::{
    build_cor_family_member, build_det_code, build_optimal_cor_code, cor_size, det_size,
    CorDecoder,
};
use tailperm::outer::OuterFamily;
use tailperm::perm::{factorial, universe_size, PartialPermutation, PermUniverse};
use tailperm::tail::{
    delete_tail, deletion_ball, indel_ball, indel_shells, insertion_ball, insertion_sphere,
    sphere_size, ErrorModel,
};
use tailperm::tensor::{
    apply_vector_deletions, PermVector, TailTensorCorrecting, TailTensorDetecting,
};
use tailperm::ExactWeight;

type Check = (&'static str, fn() -> Result<String, String>);

pub fn run(level: &str) -> Result<ExitCode> {
    let full = match level {
        "quick" => false,
        "full" => true,
        other => bail!("unknown --level {other:?} (expected quick|full)"),
    };

    let quick_checks: Vec<Check> = vec![
        ("counting identity (q<=6)", || counting_identity(6)),
        ("ball fixtures", ball_fixtures),
        ("sphere size formula (q<=4)", sphere_formula),
        ("model separation fixtures", separation_fixtures),
        ("construction validity (q<=5)", || construction_validity(5, 5)),
        ("decoder round trip (q<=4)", || decoder_roundtrip(4)),
        ("read outcome table", outcome_table),
        ("two-symbol tail sums", tail_sums),
        ("tensor code round trip (small)", tensor_small),
    ];
    let full_checks: Vec<Check> = vec![
        ("counting identity (q<=8)", || counting_identity(8)),
        ("detecting construction (q<=8, t<=3)", || {
            construction_validity(8, 0)
        }),
        ("correcting construction (q<=7, t<=3)", || {
            construction_validity(0, 7)
        }),
        ("family disjointness (q<=6, t=2)", family_disjointness),
        ("oracle optimality (q<=4)", || oracle_optimality(4, u64::MAX)),
        ("oracle best effort (q=5)", oracle_q5),
        ("model size chain (q<=5)", || size_chain(5)),
        ("equivalence suites (q<=5, t<=2)", equivalence_all),
        ("decoder soundness (q<=6, t<=2)", || decoder_roundtrip(6)),
        ("tensor census (q=4, t=2, n=2)", tensor_census),
        ("tensor correcting trials (q=6, t=2, n=7)", tensor_trials),
        ("tensor detection (q=4, t=1, n=4)", tensor_detection),
        ("channel end to end", channel_end_to_end),
    ];

    let mut checks = quick_checks;
    if full {
        checks.extend(full_checks);
    }

    let mut failures = 0usize;
    let started = Instant::now();
    for (name, check) in checks {
        let t0 = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {name} [{:.2}s] {detail}", t0.elapsed().as_secs_f64()),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name} [{:.2}s] {detail}", t0.elapsed().as_secs_f64());
            }
        }
    }
    println!(
        "selftest {level}: {} in {:.2}s",
        if failures == 0 {
            "all checks passed".to_string()
        } else {
            format!("{failures} check(s) FAILED")
        },
        started.elapsed().as_secs_f64()
    );
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn p(text: &str, q: u8) -> PartialPermutation {
    PartialPermutation::parse(text, q).expect("fixture parses")
}

fn counting_identity(max_q: u8) -> Result<String, String> {
    for q in 1..=max_q {
        let formula = universe_size(q);
        let enumerated = PermUniverse::new(q).expect("q >= 1").all().len() as u128;
        if formula != enumerated {
            return Err(format!("q={q}: formula {formula} != enumerated {enumerated}"));
        }
    }
    Ok(format!("sizes match; q={max_q} has {}", universe_size(max_q)))
}

fn ball_fixtures() -> Result<String, String> {
    let checks: Vec<(bool, &str)> = vec![
        (
            delete_tail(&p("2341", 4), 2) == p("41", 4),
            "delete 2 from 2341",
        ),
        (delete_tail(&p("41", 4), 2) == p("1", 4), "saturating delete"),
        (
            deletion_ball(&p("3245", 6), 2)
                == [p("3245", 6), p("245", 6), p("45", 6)].into_iter().collect(),
            "deletion ball radius 2",
        ),
        (
            insertion_sphere(&p("41", 4), 2) == vec![p("2341", 4), p("3241", 4)],
            "ordered insertion sphere",
        ),
        (insertion_sphere(&p("1", 4), 2).len() == 6, "sphere size 6"),
        (
            insertion_ball(&p("3245", 6), 1)
                == [p("3245", 6), p("13245", 6), p("63245", 6)].into_iter().collect(),
            "insertion ball radius 1",
        ),
        (
            insertion_ball(&p("341", 4), 2) == [p("341", 4), p("2341", 4)].into_iter().collect(),
            "alphabet-capped insertion ball",
        ),
        (
            indel_shells(&p("3245", 6), 1)[1]
                == [p("245", 6), p("13245", 6), p("63245", 6)].into_iter().collect(),
            "indel shell radius 1",
        ),
        (
            indel_ball(&p("3245", 6), 4).contains(&p("2345", 6))
                && indel_ball(&p("3245", 6), 4).contains(&p("3645", 6)),
            "deep indel reachability",
        ),
    ];
    for (ok, what) in checks {
        if !ok {
            return Err(what.to_string());
        }
    }
    Ok("9 fixtures".to_string())
}

fn sphere_formula() -> Result<String, String> {
    let mut count = 0u64;
    for q in 1..=4u8 {
        for pi in PermUniverse::new(q).expect("q >= 1").all() {
            for t in 0..=3usize {
                if insertion_sphere(&pi, t).len() as u128 != sphere_size(q, pi.len(), t) {
                    return Err(format!("q={q} pi={pi} t={t}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} sphere sizes match"))
}

fn separation_fixtures() -> Result<String, String> {
    let fixtures = counterexample_fixtures();
    for fixture in &fixtures {
        if !fixture.passed {
            return Err(format!("{}: {}", fixture.name, fixture.detail));
        }
    }
    Ok(format!("{} fixtures", fixtures.len()))
}

fn construction_validity(det_max_q: u8, cor_max_q: u8) -> Result<String, String> {
    let mut checked = 0u64;
    for q in 2..=det_max_q {
        for t in 1..q as usize {
            let code = build_det_code(q, t).map_err(|e| e.to_string())?;
            if code.len() as u128 != det_size(q, t) {
                return Err(format!("det size mismatch q={q} t={t}"));
            }
            if !code.is_detecting(ErrorModel::Deletion, t).holds() {
                return Err(format!("det code fails q={q} t={t}"));
            }
            checked += 1;
        }
    }
    for q in 2..=cor_max_q {
        for t in 1..(q as usize).min(4) {
            for j in 1..=factorial(t as u64) {
                let code = build_cor_family_member(q, t, j).map_err(|e| e.to_string())?;
                if !code.is_correcting(ErrorModel::Deletion, t).holds() {
                    return Err(format!("family member fails q={q} t={t} j={j}"));
                }
                checked += 1;
            }
            let optimal = build_optimal_cor_code(q, t).map_err(|e| e.to_string())?;
            if optimal.len() as u128 != cor_size(q, t) {
                return Err(format!("cor size mismatch q={q} t={t}"));
            }
            if !optimal.is_correcting(ErrorModel::Deletion, t).holds() {
                return Err(format!("optimal cor code fails q={q} t={t}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} codes verified"))
}

fn family_disjointness() -> Result<String, String> {
    for q in 3..=6u8 {
        let t = 2;
        let family: Vec<TailCode> = (1..=2u128)
            .map(|j| build_cor_family_member(q, t, j).expect("parameters in range"))
            .collect();
        if family[0].len() != family[1].len() {
            return Err(format!("q={q}: family member sizes differ"));
        }
        if !family[0].is_disjoint(&family[1]) {
            return Err(format!("q={q}: family members overlap"));
        }
    }
    Ok("t!=2 members disjoint and equal-sized for q=3..6".to_string())
}

fn oracle_optimality(max_q: u8, budget: u64) -> Result<String, String> {
    let budget = budget.min(1 << 26);
    let mut checked = 0u64;
    for q in 2..=max_q {
        for t in 1..q as usize {
            let det = max_code_oracle(q, t, ErrorModel::Deletion, Capability::Detect, budget);
            if !det.exact {
                return Err(format!("det oracle q={q} t={t}: budget exhausted"));
            }
            if det.size as u128 != det_size(q, t) {
                return Err(format!(
                    "det optimality q={q} t={t}: oracle {} != formula {}",
                    det.size,
                    det_size(q, t)
                ));
            }
            let cor = max_code_oracle(q, t, ErrorModel::Deletion, Capability::Correct, budget);
            if !cor.exact {
                return Err(format!("cor oracle q={q} t={t}: budget exhausted"));
            }
            if cor.size as u128 != cor_size(q, t) {
                return Err(format!(
                    "cor optimality q={q} t={t}: oracle {} != formula {}",
                    cor.size,
                    cor_size(q, t)
                ));
            }
            checked += 2;
        }
    }
    Ok(format!("{checked} oracle runs match the formulas"))
}

fn oracle_q5() -> Result<String, String> {
    let budget = 200_000_000u64;
    let mut notes = Vec::new();
    for t in 1..=2usize {
        let det = max_code_oracle(5, t, ErrorModel::Deletion, Capability::Detect, budget);
        if det.exact && det.size as u128 != det_size(5, t) {
            return Err(format!("det q=5 t={t}: oracle {} != formula {}", det.size, det_size(5, t)));
        }
        notes.push(format!(
            "det t={t}:{}{}",
            det.size,
            if det.exact { "" } else { "?(budget)" }
        ));
        let cor = max_code_oracle(5, t, ErrorModel::Deletion, Capability::Correct, budget);
        if cor.exact && cor.size as u128 != cor_size(5, t) {
            return Err(format!("cor q=5 t={t}: oracle {} != formula {}", cor.size, cor_size(5, t)));
        }
        notes.push(format!(
            "cor t={t}:{}{}",
            cor.size,
            if cor.exact { "" } else { "?(budget)" }
        ));
    }
    Ok(notes.join(" "))
}

fn size_chain(max_q: u8) -> Result<String, String> {
    let budget = 1 << 26;
    for q in 2..=max_q {
        for t in 1..=2usize.min(q as usize - 1) {
            let size = |model, capability, radius| {
                let r = max_code_oracle(q, radius, model, capability, budget);
                r.exact.then_some(r.size)
            };
            let del_det = size(ErrorModel::Deletion, Capability::Detect, t);
            let ins_det = size(ErrorModel::Insertion, Capability::Detect, t);
            let ins_cor = size(ErrorModel::Insertion, Capability::Correct, t);
            let del_cor = size(ErrorModel::Deletion, Capability::Correct, t);
            let indel_det = size(ErrorModel::Indel, Capability::Detect, t);
            let indel_cor = size(ErrorModel::Indel, Capability::Correct, t);
            let del_cor_2t = size(ErrorModel::Deletion, Capability::Correct, 2 * t);
            let all = [del_det, ins_det, ins_cor, del_cor, indel_det, indel_cor, del_cor_2t];
            if all.iter().any(|v| v.is_none()) {
                return Err(format!("q={q} t={t}: an oracle run hit the budget"));
            }
            let (del_det, ins_det, ins_cor, del_cor, indel_det, indel_cor, del_cor_2t) = (
                del_det.unwrap(),
                ins_det.unwrap(),
                ins_cor.unwrap(),
                del_cor.unwrap(),
                indel_det.unwrap(),
                indel_cor.unwrap(),
                del_cor_2t.unwrap(),
            );
            let ok = indel_det <= del_det
                && del_det == ins_det
                && ins_det == ins_cor
                && del_cor <= ins_cor
                && del_cor_2t <= indel_cor
                && indel_cor <= del_cor;
            if !ok {
                return Err(format!(
                    "q={q} t={t}: chain violated (del_det={del_det} ins_det={ins_det} \
                     ins_cor={ins_cor} del_cor={del_cor} indel_det={indel_det} \
                     indel_cor={indel_cor} del_cor_2t={del_cor_2t})"
                ));
            }
        }
    }
    Ok("size relations hold".to_string())
}

fn equivalence_all() -> Result<String, String> {
    let mut total = 0u64;
    for q in 2..=5u8 {
        for t in 1..=2usize.min(q as usize - 1) {
            let report = equivalence_suite(q, t, 10_000, 0x5EED ^ ((q as u64) << 8) ^ t as u64);
            if !report.passed() {
                return Err(format!(
                    "q={q} t={t}: {} violations, first: {}",
                    report.violations.len(),
                    report.violations.first().cloned().unwrap_or_default()
                ));
            }
            total += report.codes_checked;
        }
    }
    Ok(format!("{total} random codes, zero violations"))
}

fn decoder_roundtrip(max_q: u8) -> Result<String, String> {
    let mut checked = 0u64;
    for q in 2..=max_q {
        for t in 1..=2usize.min(q as usize - 1) {
            for j in 1..=factorial(t as u64) {
                let decoder = CorDecoder::for_family(q, t, j).map_err(|e| e.to_string())?;
                for c in decoder.code().iter() {
                    for k in 0..=t {
                        if decoder.decode(&delete_tail(c, k)).as_ref() != Ok(c) {
                            return Err(format!("family q={q} t={t} j={j} c={c} k={k}"));
                        }
                        checked += 1;
                    }
                }
            }
            let decoder = CorDecoder::for_optimal(q, t).map_err(|e| e.to_string())?;
            for c in decoder.code().iter() {
                for k in 0..=t {
                    if decoder.decode(&delete_tail(c, k)).as_ref() != Ok(c) {
                        return Err(format!("optimal q={q} t={t} c={c} k={k}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} decodes returned the original"))
}

fn outcome_table() -> Result<String, String> {
    let design = CompositeDesign::new(
        PartialPermutation::new(vec![0, 1], 4).expect("AC"),
        10,
        ErrorSpec::Designated {
            symbol: 3,
            eps: Fraction::new(1, 100),
        },
    )
    .expect("reference design");
    let dist =
        exact_outcomes::<ExactWeight>(&design, DEFAULT_ENUMERATION_BUDGET).map_err(|e| e.to_string())?;
    let rows = [
        (Outcome::Ranking(vec![0, 1]), 0.695949),
        (Outcome::Ranking(vec![1, 0]), 0.069227),
        (Outcome::Ranking(vec![3, 0, 1]), 0.066184),
        (Outcome::Ranking(vec![1]), 0.015683),
        (Outcome::Ranking(vec![3, 1, 0]), 0.013427),
    ];
    for (outcome, expected) in rows {
        let got = dist.probability(&outcome).as_f64();
        if (got - expected).abs() > 1e-6 {
            return Err(format!("{outcome:?}: got {got}, reference {expected}"));
        }
    }
    Ok("five rows within 1e-6".to_string())
}

fn tail_sums() -> Result<String, String> {
    let design = CompositeDesign::new(
        PartialPermutation::new(vec![0, 1], 4).expect("AC"),
        10,
        ErrorSpec::None,
    )
    .expect("two-symbol design");
    let dist =
        exact_outcomes::<ExactWeight>(&design, DEFAULT_ENUMERATION_BUDGET).map_err(|e| e.to_string())?;
    let below = dist.probability(&Outcome::Ranking(vec![0, 1]))
        + dist.probability(&Outcome::Ranking(vec![1]));
    let rest = ExactWeight::ratio(1, 1) - below.clone();
    if (below.as_f64() - 0.787).abs() > 5e-4 || (rest.as_f64() - 0.213).abs() > 5e-4 {
        return Err(format!("got {} / {}", below.as_f64(), rest.as_f64()));
    }
    Ok(format!("{:.4} / {:.4}", below.as_f64(), rest.as_f64()))
}

fn tensor_small() -> Result<String, String> {
    let code =
        TailTensorCorrecting::new(4, 2, 3, 1, OuterFamily::Repetition).map_err(|e| e.to_string())?;
    let space = code.message_space().map_err(|e| e.to_string())?;
    let mut checked = 0u64;
    for message in 0..space {
        let sent = code.encode(message).map_err(|e| e.to_string())?;
        for coordinate in 0..3 {
            for k in 0..=2usize {
                let mut pattern = vec![0usize; 3];
                pattern[coordinate] = k;
                let received = apply_vector_deletions(&sent, &pattern).map_err(|e| e.to_string())?;
                match code.decode(&received) {
                    Ok(decoded) if decoded == sent => checked += 1,
                    other => {
                        return Err(format!(
                            "message {message} pattern {pattern:?}: {other:?}"
                        ))
                    }
                }
            }
        }
    }
    Ok(format!("{checked} pattern decodes"))
}

fn tensor_census() -> Result<String, String> {
    let code =
        TailTensorCorrecting::new(4, 2, 2, 0, OuterFamily::Auto).map_err(|e| e.to_string())?;
    let universe = PermUniverse::new(4).expect("q=4").all();
    let mut census = 0u128;
    for a in &universe {
        for b in &universe {
            let v = PermVector::new(vec![a.clone(), b.clone()]).expect("pair");
            if code.membership(&v) {
                census += 1;
            }
        }
    }
    let bound = code.message_space().map_err(|e| e.to_string())?;
    if census < bound {
        return Err(format!("census {census} below bound {bound}"));
    }
    Ok(format!("census {census} >= bound {bound}"))
}

fn tensor_trials() -> Result<String, String> {
    use rand::Rng;
    use rand::SeedableRng;
    let code =
        TailTensorCorrecting::new(6, 2, 7, 1, OuterFamily::Auto).map_err(|e| e.to_string())?;
    let space = code.message_space().map_err(|e| e.to_string())?;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0xACCE55);
    let trials = 100_000u64;
    for _ in 0..trials {
        let message = rng.random_range(0..space);
        let sent = code.encode(message).map_err(|e| e.to_string())?;
        let coordinate = rng.random_range(0..7usize);
        let deletions = rng.random_range(0..=2usize);
        let mut pattern = vec![0usize; 7];
        pattern[coordinate] = deletions;
        let received = apply_vector_deletions(&sent, &pattern).map_err(|e| e.to_string())?;
        match code.decode(&received) {
            Ok(decoded) if decoded == sent => {}
            other => return Err(format!("message {message} pattern {pattern:?}: {other:?}")),
        }
    }
    Ok(format!("{trials} random (codeword, pattern) trials decoded"))
}

fn tensor_detection() -> Result<String, String> {
    let code =
        TailTensorDetecting::new(4, 1, 4, 1, OuterFamily::Auto).map_err(|e| e.to_string())?;
    let space = code.message_space().map_err(|e| e.to_string())?;
    let step = (space / 1000).max(1);
    let mut message = 0u128;
    let mut checked = 0u64;
    while message < space {
        let sent = code.encode(message).map_err(|e| e.to_string())?;
        if !code.detect(&sent) {
            return Err(format!("codeword of message {message} rejected"));
        }
        for coordinate in 0..4usize {
            let mut pattern = vec![0usize; 4];
            pattern[coordinate] = 1;
            let received = apply_vector_deletions(&sent, &pattern).map_err(|e| e.to_string())?;
            if received == sent {
                continue;
            }
            if code.detect(&received) {
                return Err(format!(
                    "silent acceptance: message {message} coordinate {coordinate}"
                ));
            }
            checked += 1;
        }
        message += step;
    }
    Ok(format!("{checked} deletion patterns all detected"))
}

fn channel_end_to_end() -> Result<String, String> {
    let code =
        TailTensorCorrecting::new(6, 2, 4, 1, OuterFamily::Auto).map_err(|e| e.to_string())?;
    let process = ReadProcess::Multinomial {
        reads: 400,
        eps: Fraction::new(1, 100),
        rule: WeightRule::Geometric {
            ratio: Fraction::new(3, 1),
        },
    };
    let report = end_to_end_ttpc(&code, process, 2000, 0xE2E);
    if report.in_model_successes != report.in_model {
        return Err(format!(
            "{} of {} in-model trials failed",
            report.in_model - report.in_model_successes,
            report.in_model
        ));
    }
    if report.in_model == 0 {
        return Err("no in-model trials observed".to_string());
    }
    Ok(format!(
        "{} trials: {} in-model (all decoded, {} with deletions), {} out-of-model",
        report.trials, report.in_model, report.in_model_with_deletions, report.out_of_model
    ))
}
