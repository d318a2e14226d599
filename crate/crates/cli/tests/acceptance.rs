//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use gitstab_cli::analyze::{analyze, AnalyzeOptions};
use gitstab_cli::commands::run_example;
use gitstab_cli::families::{family_member, Family};
use gitstab_cli::search::{FrameSource, SearchConfig, Strategy};
use gitstab_core::criteria::{
    combined_verdict, compare_bounds, evaluate_thm1_d_form, evaluate_thm1_delta_form, SingularityProfile,
    DELTA_FORM, HESSIAN_RANK,
};
use gitstab_core::hilbert_mumford::{
    enumerate_weight_oracle, membership, normalize_cubic_certificate, torus_destabilize, verify_certificate,
    Certificate, WeightVector,
};
use gitstab_core::num::{frac, rat};
use gitstab_core::poly::monomials_of_degree;
use gitstab_core::singularity::{
    m0_threshold, mult_lower_bound_from_weights, multiplicity_at, rank_of_q, ProjectivePoint,
};
use gitstab_core::verdict::Status;
use gitstab_core::{parse_poly, parse_poly_file, ExponentVector, HomogeneousPoly, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLE_TIME_LIMIT: Duration = Duration::from_secs(1);
const SHARPNESS_BUDGET: u64 = 10;
const NODAL_BUDGET: u64 = 1000;
const SEED: u64 = 1;
const ORACLE_BOUND_N2: i64 = 200;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero_coef(g: &mut ChaCha8Rng) -> Rational {
    let mut c = 0;
    while c == 0 {
        c = g.gen_range(-5..=5);
    }
    rat(c)
}

fn random_sorted_weights(g: &mut ChaCha8Rng, n: usize, range: i64) -> WeightVector {
    loop {
        let mut r: Vec<i64> = (0..n).map(|_| g.gen_range(-range..=range)).collect();
        r.push(-r.iter().sum::<i64>());
        r.sort_unstable_by(|a, b| b.cmp(a));
        if let Ok(w) = WeightVector::new(r) {
            return w;
        }
    }
}

fn random_from(g: &mut ChaCha8Rng, n: usize, d: u32, monos: &[ExponentVector]) -> HomogeneousPoly {
    loop {
        let keep = g.gen_range(1..=monos.len().min(8));
        let chosen: Vec<_> = monos.choose_multiple(g, keep).cloned().collect();
        let f = HomogeneousPoly::new(n, d, chosen.into_iter().map(|m| (m, nonzero_coef(g)))).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_member(g: &mut ChaCha8Rng, r: &WeightVector, d: u32, strict: bool) -> HomogeneousPoly {
    let admissible: Vec<_> = monomials_of_degree(r.len(), d)
        .into_iter()
        .filter(|m| {
            let w: i64 = r.entries().iter().zip(m.exps()).map(|(a, &b)| a * b as i64).sum();
            if strict {
                w > 0
            } else {
                w >= 0
            }
        })
        .collect();
    random_from(g, r.n(), d, &admissible)
}

fn corpus() -> Vec<(String, HomogeneousPoly)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "poly"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let f = parse_poly_file(&text, None).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, f)
        })
        .collect()
}

fn quiet_options(budget: u64) -> AnalyzeOptions {
    AnalyzeOptions {
        search: SearchConfig { budget, seed: SEED, ..SearchConfig::default() },
        timestamp: false,
        ..AnalyzeOptions::default()
    }
}

fn ac1_paper_certificates() -> Check {
    let mut slowest = Duration::ZERO;
    let mut runs = 0;
    for (family, range) in [(Family::Fn, 2..=6), (Family::Gn, 3..=6)] {
        for n in range {
            let start = Instant::now();
            let report = run_example(family, n).map_err(|e| format!("{family} n={n}: {e}"))?;
            let elapsed = start.elapsed();
            slowest = slowest.max(elapsed);
            runs += 1;
            let expected: Vec<i64> = match family {
                Family::Fn => {
                    let k = n as i64 - 1;
                    [vec![3 * k], vec![1; n - 1], vec![-4 * k]].concat()
                }
                Family::Gn => {
                    let m = n as i64;
                    [vec![3 * m + 2], vec![1; n - 2], vec![-m, -3 * m]].concat()
                }
            };
            ensure(report.certificate.r.entries() == expected.as_slice(), || {
                format!("{family} n={n}: r = {} differs from the stated weights", report.certificate.r)
            })?;
            let f = parse_poly(&report.input.polynomial, n).map_err(|e| e.to_string())?;
            let check = verify_certificate(&f, &report.certificate).map_err(|e| e.to_string())?;
            ensure(check.is_verified() && report.certificate.strict, || format!("{family} n={n}: {check:?}"))?;
            ensure(elapsed < EXAMPLE_TIME_LIMIT, || format!("{family} n={n} took {elapsed:?}"))?;
        }
    }
    Ok(format!("{runs} certificates verify NotSemiStable, slowest run {slowest:?}"))
}

fn ac2_corollary_grid() -> Check {
    let mut stable = 0;
    for d in 5..=9u32 {
        for n in 2..=6usize {
            let p = SingularityProfile::new(n, d, 0, 2, None).map_err(|e| e.to_string())?;
            let v = combined_verdict(&p, None, None).map_err(|e| e.to_string())?;
            ensure(v.status == Status::Stable, || format!("n={n} d={d}: {}", v.status))?;
            let bound = frac((d * (d - 2)) as i64, (2 * d - 3) as i64);
            let want = format!("2 < {bound}");
            let margin = v.reasons.iter().find(|r| r.criterion == DELTA_FORM).and_then(|r| r.margin.clone());
            ensure(margin.as_deref() == Some(want.as_str()), || format!("n={n} d={d}: margin {margin:?}, want {want}"))?;
            stable += 1;
        }
    }
    for d in 3..=4u32 {
        for n in 2..=6usize {
            let p = SingularityProfile::new(n, d, 0, 2, None).map_err(|e| e.to_string())?;
            let v = combined_verdict(&p, None, None).map_err(|e| e.to_string())?;
            ensure(v.status == Status::Inconclusive, || format!("n={n} d={d}: {} without Hessian data", v.status))?;
        }
    }
    Ok(format!("{stable} profiles stable with exact margins; d in {{3,4}} inconclusive"))
}

fn ac3_sharpness_witnesses() -> Check {
    let mut proven = 0;
    for (family, d) in [(Family::Fn, 3), (Family::Gn, 4)] {
        for n in 2..=6 {
            let m = family_member(family, n).map_err(|e| e.to_string())?;
            ensure(m.poly.d() == d, || format!("{family} n={n} has degree {}", m.poly.d()))?;
            let report = analyze(&m.poly, &quiet_options(SHARPNESS_BUDGET)).map_err(|e| format!("{family} n={n}: {e}"))?;
            let cert = report.search.strict.as_ref().ok_or_else(|| format!("{family} n={n}: no strict certificate"))?;
            ensure(cert.source == FrameSource::Strategy(Strategy::SingularPointToQ), || {
                format!("{family} n={n}: found by {}", cert.source)
            })?;
            ensure(report.verdict.status == Status::NotSemiStable, || format!("{family} n={n}: {}", report.verdict.status))?;
            proven += 1;
        }
    }
    Ok(format!("{proven} members proven NotSemiStable by analyze (budget {SHARPNESS_BUDGET}, seed {SEED})"))
}

fn ac4_form_equivalence() -> Check {
    let mut checked = 0;
    for d in 3..=30u32 {
        for delta in 1..=10u32.min(d) {
            for s in 0..=8i64 {
                for n in (s as usize + 1).max(2)..=12 {
                    let p = SingularityProfile::new(n, d, s, delta, None).map_err(|e| e.to_string())?;
                    let a = evaluate_thm1_delta_form(&p).map_err(|e| e.to_string())?;
                    let b = evaluate_thm1_d_form(&p).map_err(|e| e.to_string())?;
                    ensure(a.status == b.status, || format!("{p:?}: {} vs {}", a.status, b.status))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} profiles, 0 disagreements"))
}

fn ac5_bound_dominance() -> Check {
    let mut checked = 0;
    for delta in 2..=10u32 {
        for s in 0..=8i64 {
            let c = compare_bounds(delta, s).map_err(|e| e.to_string())?;
            ensure(c.strictly_better, || {
                format!("delta={delta} s={s}: {} vs {}", c.new_threshold_description(), c.mordant_threshold)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (delta, s) pairs strictly better"))
}

fn ac6_hessian_table() -> Check {
    // (n, d, rank, expected)
    let rows = [
        (2, 3, 2, Status::SemiStable),
        (3, 3, 3, Status::Stable),
        (3, 4, 2, Status::SemiStable),
        (4, 4, 3, Status::Stable),
        (8, 3, 8 - 2, Status::SemiStable),
        (9, 3, 9 - 2, Status::Stable),
        (5, 4, 5 - 2, Status::SemiStable),
        (6, 4, 6 - 2, Status::Stable),
    ];
    for (n, d, rank, want) in rows {
        let p = SingularityProfile::new(n, d, 0, 2, Some(rank)).map_err(|e| e.to_string())?;
        let v = combined_verdict(&p, None, None).map_err(|e| e.to_string())?;
        ensure(v.status == want, || format!("n={n} d={d} rank={rank}: {} (want {want})", v.status))?;
    }
    Ok(format!("{} rows match", rows.len()))
}

fn ac7_rank_of_q() -> Check {
    let mut g = rng(7);
    let mut checked = 0;
    for strict in [false, true] {
        for n in 2..=5usize {
            for d in [3u32, 4] {
                for _ in 0..200 {
                    let r = random_sorted_weights(&mut g, n, 5);
                    let f = random_member(&mut g, &r, d, strict);
                    // M_{>=0} pairs with the strict threshold m > 2(n+1)/d - 1
                    let m0 = m0_threshold(n, d, !strict).map_err(|e| e.to_string())?;
                    let rank = rank_of_q(&f) as i64;
                    ensure(rank <= m0, || format!("rank(q) = {rank} > {m0} for {f}, r = {r}, strict = {strict}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} instances, 0 violations"))
}

fn ac8_multiplicity_bound() -> Check {
    let mut g = rng(8);
    let mut checked = 0;
    for strict in [false, true] {
        for _ in 0..200 {
            let n = g.gen_range(2..=4);
            let d = g.gen_range(3..=5);
            let r = random_sorted_weights(&mut g, n, 6);
            let f = random_member(&mut g, &r, d, strict);
            let bound = mult_lower_bound_from_weights(&r, d, strict).map_err(|e| e.to_string())?;
            let m = multiplicity_at(&f, &ProjectivePoint::last_coordinate_point(n)).map_err(|e| e.to_string())?;
            ensure(m >= bound, || format!("multiplicity {m} < {bound} for {f}, r = {r}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} instances, 0 violations"))
}

/// Smaller bounds keep the brute force tractable beyond the plane.
fn oracle_bound(n: usize) -> i64 {
    match n {
        2 => ORACLE_BOUND_N2,
        3 => 12,
        _ => 4,
    }
}

fn oracle_agrees(name: &str, f: &HomogeneousPoly, strict: bool) -> Result<(), String> {
    let bound = oracle_bound(f.n());
    let lp = torus_destabilize(f, strict).map_err(|e| format!("{name}: {e}"))?;
    lp.verify(f).map_err(|e| format!("{name}: LP decision: {e}"))?;
    let oracle = enumerate_weight_oracle(f, bound, strict);
    if let Some(w) = &oracle {
        ensure(membership(f, w, strict), || format!("{name}: oracle witness {w} fails"))?;
    }
    match (&lp.witness, &oracle) {
        (Some(_), Some(_)) | (None, None) => Ok(()),
        (None, Some(w)) => Err(format!("{name} strict={strict}: LP infeasible, oracle found {w}")),
        (Some(w), None) => {
            let size = w.normalized().entries().iter().map(|x| x.abs()).max().unwrap_or(0);
            ensure(size > bound, || format!("{name} strict={strict}: LP witness {w} within bound {bound}, oracle none"))
        }
    }
}

fn ac9_lp_oracle() -> Check {
    let mut g = rng(9);
    let mut feasible = 0;
    let mut total = 0;
    for i in 0..100 {
        let d = if i % 2 == 0 { 3 } else { 4 };
        let f = random_from(&mut g, 2, d, &monomials_of_degree(3, d));
        for strict in [true, false] {
            oracle_agrees(&format!("random #{i} ({f})"), &f, strict)?;
            feasible += usize::from(torus_destabilize(&f, strict).map_err(|e| e.to_string())?.feasible);
            total += 1;
        }
    }
    let files = corpus();
    for (name, f) in &files {
        for strict in [true, false] {
            oracle_agrees(name, f, strict)?;
            total += 1;
        }
    }
    Ok(format!(
        "{total} decisions agree (100 random plane supports, {} corpus files; {feasible} random feasible)",
        files.len()
    ))
}

fn ac10_cubic_normalizer() -> Check {
    let mut g = rng(10);
    let mut done = 0;
    let mut attempts = 0;
    while done < 50 {
        attempts += 1;
        if attempts > 500 {
            return Err(format!("only {done} instances constructed"));
        }
        let n = 3 + done % 3;
        let mut r = vec![0i64; n + 1];
        r[0] = 2;
        r[n - 1] = -1;
        r[n] = -1;
        let r = WeightVector::new(r).unwrap();
        let f = random_member(&mut g, &r, 3, false);
        // q = x0 (a x_{n-1} + b x_n)(c x_{n-1} + e x_n): rational isotropic lines
        let mut lin = || (rat(g.gen_range(-2..=2)), rat(g.gen_range(-2..=2)));
        let ((a, b), (c, e)) = (lin(), lin());
        let mono = |i1: u32, i2: u32| {
            let mut v = vec![0u32; n + 1];
            v[0] = 1;
            v[n - 1] = i1;
            v[n] = i2;
            ExponentVector::new(v)
        };
        let q_monos = [mono(2, 0), mono(1, 1), mono(0, 2)];
        let q = [&a * &c, &a * &e + &b * &c, &b * &e];
        let rest = f.terms().filter(|(k, _)| !q_monos.contains(k)).map(|(k, v)| (k.clone(), v.clone()));
        let terms = rest.chain(q_monos.iter().cloned().zip(q));
        let f = HomogeneousPoly::new(n, 3, terms).unwrap();
        if f.is_zero() || !membership(&f, &r, false) {
            continue;
        }
        let (sigma, r2) = normalize_cubic_certificate(&f, &r).map_err(|e| format!("{f}: {e}"))?;
        let e2 = r2.entries();
        ensure(e2[0] + 2 * e2[n] < 0, || format!("{f}: r' = {r2}"))?;
        let cert = Certificate { sigma, r: r2.clone(), strict: false };
        let check = verify_certificate(&f, &cert).map_err(|e| e.to_string())?;
        ensure(check.is_verified(), || format!("{f}: normalized certificate rejected: {check:?}"))?;
        done += 1;
    }
    Ok(format!("{done} instances normalized and verified"))
}

fn ac11_nodal_cubic() -> Check {
    let f = parse_poly("x1^2*x2 - x0^2*x2 - x0^3", 2).unwrap();
    let report = analyze(&f, &quiet_options(NODAL_BUDGET)).map_err(|e| e.to_string())?;
    let pts: Vec<String> = report.singular_points.iter().map(|l| l.point.to_string()).collect();
    ensure(pts == ["[0:0:1]"], || format!("singular points {pts:?}"))?;
    let l = &report.singular_points[0];
    ensure(l.multiplicity == 2 && l.hessian_rank == Some(2), || {
        format!("multiplicity {}, Hessian rank {:?}", l.multiplicity, l.hessian_rank)
    })?;
    ensure(report.verdict.status == Status::SemiStable, || format!("verdict {}", report.verdict.status))?;
    let reason = report
        .verdict
        .reasons
        .iter()
        .find(|r| r.criterion == HESSIAN_RANK)
        .ok_or("no Hessian rank reason")?;
    ensure(reason.note.contains("equality"), || format!("Hessian reason note {:?}", reason.note))?;
    ensure(report.search.strict.is_none(), || "a strict certificate was found".into())?;
    ensure(report.search.frames_tried == NODAL_BUDGET, || format!("{} frames tried", report.search.frames_tried))?;
    Ok(format!(
        "[0:0:1], multiplicity 2, rank 2, SemiStable ({} {}), no strict certificate in {NODAL_BUDGET} frames",
        reason.criterion,
        reason.margin.as_deref().unwrap_or("")
    ))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Check); 11] = [
        ("AC1", "example certificates reproduce", ac1_paper_certificates),
        ("AC2", "multiplicity criterion grid", ac2_corollary_grid),
        ("AC3", "sharpness witnesses via analyze", ac3_sharpness_witnesses),
        ("AC4", "delta-form and degree-form agree", ac4_form_equivalence),
        ("AC5", "new bound beats the baseline", ac5_bound_dominance),
        ("AC6", "Hessian rank and corank table", ac6_hessian_table),
        ("AC7", "rank of q bounded by m0", ac7_rank_of_q),
        ("AC8", "weights force multiplicity at Q", ac8_multiplicity_bound),
        ("AC9", "torus LP agrees with brute force", ac9_lp_oracle),
        ("AC10", "cubic certificate normal form", ac10_cubic_normalizer),
        ("AC11", "nodal cubic end to end", ac11_nodal_cubic),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
