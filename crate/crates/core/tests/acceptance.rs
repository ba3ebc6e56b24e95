//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use framesplit::gen::{self, GenConfig};
use framesplit::inequalities::{
    dual_resolution, operator_breakdown, resolution_margin, scalar_breakdown, verify_alternate_dual_identity,
    verify_canonical_identity, verify_dual_inequality, verify_family, verify_parseval_identity, verify_scalar_family,
    verify_weighted_dual_inequality, LambdaFamily,
};
use framesplit::linalg::PSD_TOLERANCE;
use framesplit::rng::{self, streams};
use framesplit::splitting::{check_lemma_part, split_from_subset, LemmaOutcome};
use framesplit::{
    CVector, ComplexMatrix, Frame, HermitianOperator, IndexSubset, QuadraticCertificate, RelationId, SplitPair, C64,
};
use nalgebra::DMatrix;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| format!("{err:?}"))
}

/// d ∈ [2, 8], m ∈ [d, 2d], drawn from the seed.
fn frame_instance(seed: u64) -> (Frame, IndexSubset, CVector, f64) {
    let mut r = rng::stream(seed, streams::DERIVE + 99);
    let d = 2 + (rng::uniform(&mut r, 0.0, 7.0) as usize).min(6);
    let m = d + (rng::uniform(&mut r, 0.0, d as f64 + 1.0) as usize).min(d);
    let lambda = rng::uniform(&mut r, -2.0, 3.0);
    let fr = gen::random_frame(&GenConfig::new(d, m, seed).unwrap()).unwrap();
    let j = gen::random_subset(m, seed).unwrap();
    let f = gen::random_unit_vector(d, seed);
    (fr, j, f, lambda)
}

fn direct_split(seed: u64) -> SplitPair {
    let d = 2 + (seed % 7) as usize;
    gen::random_split_pair(d, seed).unwrap()
}

fn min_eig(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// `S − S₂ − S₁S⁻¹S₁` through an LU inverse, independent of the spectral path.
fn complement_upper_oracle(sp: &SplitPair) -> f64 {
    let s = sp.total().as_inner();
    let s1 = sp.part1().as_inner();
    let s2 = sp.part2().as_inner();
    let inv = s.clone().try_inverse().unwrap();
    min_eig(&(s - s2 - s1 * inv * s1))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = f64::INFINITY;
    let mut worst_dev: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    for k in 0..1000u64 {
        let sp = if k < 500 {
            let (fr, j, _, _) = frame_instance(k);
            e(split_from_subset(&fr, &j))?
        } else {
            direct_split(k)
        };
        let scale = sp.scale();
        for part in 1..=4u8 {
            let report = match e(check_lemma_part(&sp, part, None, None, PSD_TOLERANCE))? {
                LemmaOutcome::Checked(r) => r,
                other => return Err(format!("part {part} not checked: {other:?}")),
            };
            if part == 4 {
                ensure(report.deviation() <= 1e-9 * scale, || {
                    format!("instance {k}: swap deviation {}", report.deviation())
                })?;
                worst_dev = worst_dev.max(report.deviation() / scale);
            } else {
                ensure(report.margin >= -1e-9 * scale, || {
                    format!("instance {k} part {part}: margin {}", report.margin)
                })?;
                worst = worst.min(report.margin / scale);
            }
            if part == 2 && k % 10 == 0 {
                oracle_gap = oracle_gap.max((report.margin - complement_upper_oracle(&sp)).abs() / scale);
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(oracle_gap <= 1e-8, || format!("LU oracle disagrees by {oracle_gap:e}"))?;
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "1000 splits, worst margin/scale {worst:.3e}, worst swap deviation/scale {worst_dev:.3e}, oracle gap {oracle_gap:.1e}, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = f64::INFINITY;
    for k in 0..1000u64 {
        let (sp, lambda) = if k % 2 == 0 {
            let (fr, j, _, lambda) = frame_instance(10_000 + k);
            (e(split_from_subset(&fr, &j))?, lambda)
        } else {
            (direct_split(10_000 + k), gen::random_in_range(k, -2.0, 3.0))
        };
        for family in LambdaFamily::ALL {
            let r = e(verify_family(&sp, family, lambda, PSD_TOLERANCE))?;
            // (a − λ/2)² = a² − λ·a + λ²/4
            let c = r.certificate;
            let expected = [1.0, -lambda, lambda * lambda / 4.0];
            let got = [c.c2, c.c1, c.c0];
            for (g, x) in got.iter().zip(expected) {
                ensure((g - x).abs() <= 1e-12 * (1.0 + x.abs()), || {
                    format!("{family:?} at λ={lambda}: certificate {c:?} is not (a − λ/2)²")
                })?;
            }
            ensure(r.certificate_nonneg, || {
                format!("{family:?} at λ={lambda}: checker rejected {c:?}")
            })?;
            for rep in &r.reports {
                ensure(rep.margin >= -1e-9 * rep.scale, || {
                    format!("{family:?} λ={lambda}: {rep:?}")
                })?;
                worst = worst.min(rep.margin / rep.scale);
            }
        }
    }
    Ok(format!(
        "3000 family checks, worst margin/scale {worst:.3e}, all certificates (a − λ/2)² and nonnegative"
    ))
}

fn criterion_3() -> Outcome {
    let sp = e(SplitPair::new(
        HermitianOperator::scaled_identity(3, 2.0),
        HermitianOperator::identity(3),
        HermitianOperator::identity(3),
    ))?;
    let cases = [
        (LambdaFamily::ComplementQuadratic, RelationId::ComplementQuadraticLower),
        (LambdaFamily::Defect, RelationId::DefectUpper),
        (LambdaFamily::QuadraticSum, RelationId::QuadraticSumLower),
    ];
    let mut text = Vec::new();
    for (family, id) in cases {
        let r = e(verify_family(&sp, family, 1.0, PSD_TOLERANCE))?;
        let margin = r.report(id).ok_or("missing report")?.margin;
        ensure(margin.abs() <= 1e-10, || format!("{id}: margin {margin}"))?;
        text.push(format!("{id} {margin:.1e}"));
    }
    Ok(format!("(2I, I, I) at λ = 1: {}", text.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..100u64 {
        let (fr, j, f, _) = frame_instance(20_000 + k);
        let scalar = e(verify_scalar_family(
            &fr,
            &j,
            &f,
            LambdaFamily::ComplementQuadratic,
            1.0,
            PSD_TOLERANCE,
        ))?;
        let general = e(verify_canonical_identity(&fr, &j, &f, PSD_TOLERANCE))?;
        let lower = scalar.check(RelationId::EnergyComplementLower).ok_or("missing lower")?;
        let identity = scalar
            .check(RelationId::EnergyComplementIdentity)
            .ok_or("missing identity")?;
        let scale = scalar.breakdown.scale();
        // Scalar lower side = (3/4)·Σ_I; the identity's two sides are the
        // canonical-dual right and left sides.
        let gaps = [
            (lower.lhs - general.bound).abs(),
            (identity.lhs - general.right).abs(),
            (identity.rhs - general.left).abs(),
        ];
        for g in gaps {
            ensure(g <= 1e-10 * scale, || format!("instance {k}: gap {g:e}"))?;
            worst = worst.max(g / scale);
        }
    }

    // λ = 1/2: coefficients (3/4, 3/4), so the right side is (3/4)‖f‖².
    let mut worst_half: f64 = 0.0;
    for k in 0..100u64 {
        let (fr, j, f, _) = frame_instance(21_000 + k);
        let pair = e(fr.random_alternate_dual(k, 1.0))?;
        let t = e(verify_dual_inequality(&pair, &j, &f, 0.5, PSD_TOLERANCE))?;
        let classical = e(verify_alternate_dual_identity(&pair, &j, &f, PSD_TOLERANCE))?;
        let norm_sq = f.norm_squared();
        let gap = (t.rhs - 0.75 * norm_sq).abs().max((t.lhs - classical.left).abs());
        ensure(gap <= 1e-10 * norm_sq.max(1.0), || {
            format!("λ = 1/2 instance {k}: gap {gap:e}")
        })?;
        ensure(t.report.passed && classical.bound_check.passed, || {
            format!("λ = 1/2 instance {k} failed")
        })?;
        worst_half = worst_half.max(gap);
    }
    Ok(format!(
        "λ = 1 gap/scale {worst:.1e} over 100; λ = 1/2 gap {worst_half:.1e} over 100"
    ))
}

fn parseval_oracle(fr: &Frame, j: &IndexSubset, f: &CVector) -> (f64, f64) {
    let d = fr.dim();
    let mut sum_j = 0.0;
    let mut sum_jc = 0.0;
    let mut part_j = vec![C64::new(0.0, 0.0); d];
    let mut part_jc = vec![C64::new(0.0, 0.0); d];
    for i in 0..fr.count() {
        let v = fr.vector(i);
        let c: C64 = (0..d).map(|k| f[k] * v[k].conj()).sum();
        let (sum, part) = if j.contains(i) {
            (&mut sum_j, &mut part_j)
        } else {
            (&mut sum_jc, &mut part_jc)
        };
        *sum += c.norm_sqr();
        for k in 0..d {
            part[k] += c * v[k];
        }
    }
    let norm = |p: &[C64]| p.iter().map(|z| z.norm_sqr()).sum::<f64>();
    (sum_j + norm(&part_jc), sum_jc + norm(&part_j))
}

fn criterion_5() -> Outcome {
    let mut worst_dev: f64 = 0.0;
    let mut worst_ratio = f64::INFINITY;
    for k in 0..200u64 {
        let (fr, j, _, _) = frame_instance(30_000 + k);
        let p = e(fr.to_parseval())?;
        let f = gen::random_unit_vector(p.dim(), k).scale(1.0 + (k % 5) as f64);
        let r = e(verify_parseval_identity(&p, &j, &f, PSD_TOLERANCE))?;
        let (ol, or) = parseval_oracle(&p, &j, &f);
        let norm_sq = f.norm_squared();
        let dev = (r.left - r.right).abs();
        ensure(dev <= 1e-10 * norm_sq.max(1.0), || {
            format!("instance {k}: deviation {dev:e}")
        })?;
        ensure(
            (r.left - ol).abs() <= 1e-10 * norm_sq && (r.right - or).abs() <= 1e-10 * norm_sq,
            || format!("instance {k}: oracle ({ol}, {or}) vs ({}, {})", r.left, r.right),
        )?;
        ensure(r.left.min(r.right) >= (0.75 - 1e-10) * norm_sq, || {
            format!("instance {k}: bound")
        })?;
        worst_dev = worst_dev.max(dev / norm_sq);
        worst_ratio = worst_ratio.min(r.left.min(r.right) / norm_sq);
    }

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let vec2 = |a: f64, b: f64| CVector::from_vec(vec![C64::new(a, 0.0), C64::new(b, 0.0)]);
    let witnesses = [
        ("mb3", vec![0usize], vec2(1.0, 0.0), 1.0),
        ("onb2", vec![0], vec2(s, s), 1.0),
        ("mb3", vec![0, 1, 2], vec2(0.6, 0.8), 1.0),
    ];
    for (name, members, f, expected) in witnesses {
        let fr = e(gen::named_frame(name))?;
        let j = e(IndexSubset::new(fr.count(), members))?;
        let r = e(verify_parseval_identity(&fr, &j, &f, PSD_TOLERANCE))?;
        ensure(
            (r.left - expected).abs() <= 1e-12 && (r.right - expected).abs() <= 1e-12,
            || format!("{name}: sides ({}, {}) expected {expected}", r.left, r.right),
        )?;
    }
    Ok(format!("200 Parseval instances, worst deviation/‖f‖² {worst_dev:.1e}, smallest side/‖f‖² {worst_ratio:.4}; 3 witnesses exact"))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..200u64 {
        let (fr, j, f, _) = frame_instance(40_000 + k);
        let sp = e(split_from_subset(&fr, &j))?;
        let s = e(scalar_breakdown(&fr, &j, &f))?;
        let o = e(operator_breakdown(&sp, &f))?;
        let scale = sp.scale().max(s.scale());
        // Direct coefficient sum as a third route for Σ_J.
        let direct: f64 = j
            .members()
            .iter()
            .map(|&i| {
                fr.vector(i)
                    .iter()
                    .zip(f.iter())
                    .map(|(v, x)| x * v.conj())
                    .sum::<C64>()
                    .norm_sqr()
            })
            .sum();
        let gap = s.max_abs_difference(&o).max((direct - s.sum_j).abs());
        ensure(gap <= 1e-8 * scale, || format!("instance {k}: gap {gap:e}"))?;
        worst = worst.max(gap / scale);
    }
    Ok(format!("200 instances, worst scalar/operator gap/scale {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut r = rng::stream(7, streams::DERIVE + 7);
    let mut disagreements = 0usize;
    let mut accepted = 0usize;
    for k in 0..10_000 {
        let q = if k % 4 == 0 {
            // Shifted squares whose minimum sits at or near zero.
            let root = rng::uniform(&mut r, -0.5, 1.5);
            let c = rng::uniform(&mut r, 0.1, 3.0);
            let shift = rng::uniform(&mut r, -1e-6, 1e-6);
            QuadraticCertificate::new(c, -2.0 * c * root, c * root * root + shift)
        } else {
            QuadraticCertificate::new(
                rng::uniform(&mut r, -2.0, 2.0),
                rng::uniform(&mut r, -2.0, 2.0),
                rng::uniform(&mut r, -1.0, 1.0),
            )
        };
        let sampled = (0..=10_000)
            .map(|i| q.eval(i as f64 / 10_000.0))
            .fold(f64::INFINITY, f64::min);
        let claimed = framesplit::splitting::certificate_nonneg(&q);
        accepted += claimed as usize;
        if claimed != (sampled >= 0.0) {
            disagreements += 1;
            let exact = q.min_on_unit_interval();
            ensure(exact.abs() <= 1e-9, || {
                format!("{q:?}: checker {claimed}, sampled min {sampled:e}, exact min {exact:e}")
            })?;
        }
    }
    Ok(format!(
        "10000 quadratics, {accepted} accepted, {disagreements} disagreements, each within 1e-9 of a zero minimum"
    ))
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = f64::INFINITY;
    let mut oracle_gap: f64 = 0.0;
    for k in 0..300u64 {
        let d = 2 + (k % 6) as usize;
        let u = gen::random_square(d, k);
        let v = e(ComplexMatrix::identity(d).sub(&u))?;
        let lambda = gen::random_in_range(k, -3.0, 3.0);
        let rep = e(resolution_margin(&u, &v, lambda, PSD_TOLERANCE))?;
        ensure(rep.margin >= -1e-9, || format!("triple {k}: margin {}", rep.margin))?;
        // U*U + λ(V* + V) − λ(2 − λ)I = (U − λI)*(U − λI) whenever U + V = I.
        let shifted = u.as_inner() - DMatrix::<C64>::identity(d, d) * C64::new(lambda, 0.0);
        let oracle = min_eig(&(shifted.adjoint() * &shifted));
        oracle_gap = oracle_gap.max((oracle - rep.margin).abs() / rep.scale);
        worst = worst.min(rep.margin);
    }
    ensure(oracle_gap <= 1e-10, || format!("oracle gap {oracle_gap:e}"))?;

    for lambda in [-1.5, 0.0, 0.5, 1.0, 2.0, 2.75] {
        let u = ComplexMatrix::identity(3).scale(C64::new(lambda, 0.0));
        let v = e(ComplexMatrix::identity(3).sub(&u))?;
        let margin = e(resolution_margin(&u, &v, lambda, PSD_TOLERANCE))?.margin;
        ensure(margin.abs() <= 1e-12, || {
            format!("U = λI at λ={lambda}: margin {margin:e}")
        })?;
    }

    let mut worst_ind: f64 = 0.0;
    for k in 0..300u64 {
        let (fr, j, f, lambda) = frame_instance(50_000 + k);
        let pair = e(fr.random_alternate_dual(k, gen::random_in_range(k + 1, 0.0, 2.0)))?;
        let t = e(verify_dual_inequality(&pair, &j, &f, lambda, PSD_TOLERANCE))?;
        ensure(t.report.passed, || {
            format!("dual inequality instance {k}: {:?}", t.report)
        })?;
        let weights = gen::random_weights(fr.count(), k);
        let w = e(verify_weighted_dual_inequality(
            &pair,
            &weights,
            &f,
            lambda,
            PSD_TOLERANCE,
        ))?;
        ensure(w.report.passed, || format!("weighted instance {k}: {:?}", w.report))?;
        let indicator: Vec<C64> = j
            .complement()
            .indicator()
            .into_iter()
            .map(|x| C64::new(x, 0.0))
            .collect();
        let wi = e(verify_weighted_dual_inequality(
            &pair,
            &indicator,
            &f,
            lambda,
            PSD_TOLERANCE,
        ))?;
        let gap = wi
            .quantities
            .max_abs_difference(&t.quantities)
            .max((wi.lhs - t.lhs).abs())
            .max((wi.rhs - t.rhs).abs());
        ensure(gap <= 1e-12, || format!("indicator weights instance {k}: gap {gap:e}"))?;
        worst_ind = worst_ind.max(gap);
        let (u, v) = e(dual_resolution(&pair, &j))?;
        ensure(e(resolution_margin(&u, &v, lambda, PSD_TOLERANCE))?.passed, || {
            format!("dual resolution {k}")
        })?;
    }
    Ok(format!(
        "300 triples worst margin {worst:.3e} (oracle gap {oracle_gap:.1e}), U = λI exact, 300 dual instances, indicator gap {worst_ind:.1e}"
    ))
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_framesplit"))
        .args(args)
        .env_remove("FRAMESPLIT_TOL")
        .output()
        .map_err(|err| err.to_string())?;
    let code = out.status.code().ok_or("killed by signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn criterion_9() -> Outcome {
    let expect = |args: &[&str], code: i32| -> Result<String, String> {
        let (got, out) = run_cli(args)?;
        ensure(got == code, || {
            format!("`{}` exited {got}, expected {code}", args.join(" "))
        })?;
        Ok(out)
    };
    let out = expect(
        &[
            "verify",
            "named:onb2",
            "--subset",
            "0",
            "--lambda",
            "1",
            "--relations",
            "t22",
        ],
        0,
    )?;
    ensure(out.lines().count() == 3, || {
        format!("t22 verify printed {} reports", out.lines().count())
    })?;
    expect(&["verify", "named:mb3", "--subset", "0", "--relations", "parseval"], 0)?;
    expect(
        &["verify", "random:2,4,42", "--subset-seed", "1", "--lambda", "0,1,2"],
        0,
    )?;
    let csv = expect(
        &[
            "sweep",
            "named:double_onb2",
            "--subset",
            "0,1",
            "--relation",
            "t22",
            "--lambda-min",
            "0",
            "--lambda-max",
            "2",
            "--steps",
            "201",
        ],
        0,
    )?;
    let (argmin, min) = csv
        .lines()
        .skip(1)
        .filter_map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            Some((c.first()?.parse::<f64>().ok()?, c.get(1)?.parse::<f64>().ok()?))
        })
        .fold((f64::NAN, f64::INFINITY), |a, (l, m)| if m < a.1 { (l, m) } else { a });
    ensure((argmin - 1.0).abs() < 1e-12 && min.abs() < 1e-12, || {
        format!("sweep minimum {min} at λ = {argmin}")
    })?;
    expect(&["sweep", "named:onb2", "--relation", "parseval"], 2)?;
    expect(
        &[
            "sweep",
            "named:onb2",
            "--subset",
            "0",
            "--relation",
            "t27",
            "--lambda-min",
            "1",
            "--lambda-max",
            "3",
        ],
        0,
    )?;
    let show = expect(&["show", "named:weighted_onb"], 0)?;
    ensure(show.contains("lower=1.0 upper=2.0"), || format!("show output: {show}"))?;
    expect(&["show", "named:mb3"], 0)?;

    let start = Instant::now();
    let manifest = expect(&["fuzz", "--trials", "1000", "--mode", "frame", "--seed", "7"], 0)?;
    let elapsed = start.elapsed();
    let m: serde_json::Value = serde_json::from_str(&manifest).map_err(|err| err.to_string())?;
    let failed = m["outcome_counts"]["failed"].as_u64().ok_or("no failed count")?;
    ensure(failed == 0, || format!("fuzz reported {failed} failures"))?;
    ensure(elapsed < Duration::from_secs(120), || format!("fuzz took {elapsed:?}"))?;
    Ok(format!(
        "worked examples exit as stated; fuzz 1000 trials, 0 failures, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("splitting lemma parts 1-4", criterion_1),
        ("lambda families and certificates", criterion_2),
        ("equality witnesses", criterion_3),
        ("classical reductions", criterion_4),
        ("parseval identity", criterion_5),
        ("scalar/operator translation", criterion_6),
        ("certificate oracle", criterion_7),
        ("alternate-dual chain", criterion_8),
        ("cli contract", criterion_9),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {} ({name}): {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
