//! Acceptance suite: one PASS/FAIL line per criterion with its runtime.
//! Runs without the libtest harness so the lines reach stdout directly.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use segrekit_core::bounds::{lemma_2_8_trials, verify_lemma_2_8, DiskPoly};
use segrekit_core::embed::{remark_212_map, verify_identity, verify_symbolic, TARGET};
use segrekit_core::field::{frac, ComplexRational, Field};
use segrekit_core::hypersurface::{kohn_nirenberg_limit, make_family, HypersurfaceParams};
use segrekit_core::mapdeg::{
    base_locus, cramer_reconstruct, degree_bound, eval_zw, generic_degree_check, make_map, restrict_to_segre,
    CRField,
};
use segrekit_core::monodromy::sqrt_w_demo;
use segrekit_core::poly::{HoloPoly, Var};
use segrekit_core::segre::{segre_suite, SegreCheck};

const SEED: u64 = 42;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn criterion(n: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let dt = t.elapsed();
    let in_time = limit.is_none_or(|l| dt < l);
    let ok = o.passed && in_time;
    let budget = limit.map_or(String::new(), |l| format!(" of {:.0}s", l.as_secs_f64()));
    let late = if in_time { "" } else { "; over time budget" };
    println!(
        "criterion {n}: {} {name} ({:.2}s{budget}; {}{late})",
        if ok { "PASS" } else { "FAIL" },
        dt.as_secs_f64(),
        o.detail
    );
    ok
}

fn embedding_identity() -> Outcome {
    let canonical = verify_identity(&HypersurfaceParams::canonical()).expect("canonical coefficients are rational");
    let symbolic = verify_symbolic();
    outcome(
        canonical.passed && symbolic.passed,
        format!(
            "residual terms: canonical {}, symbolic {}",
            canonical.residual_terms, symbolic.residual_terms
        ),
    )
}

fn segre_checks() -> Outcome {
    let h = make_family(&HypersurfaceParams::canonical());
    let rep = segre_suite(&h, 100, SEED).expect("suite runs");
    let failed: usize = rep.failures.values().map(Vec::len).sum();
    outcome(
        rep.passed && rep.cases == 100 && rep.failures.len() == SegreCheck::ALL.len(),
        format!("{} checks x {} cases, {failed} failures", rep.failures.len(), rep.cases),
    )
}

fn cr_tangency() -> Outcome {
    let mut all = true;
    let sets = [
        HypersurfaceParams::canonical(),
        HypersurfaceParams::new(frac(1, 7), frac(11, 5), frac(0, 1)).unwrap(),
        HypersurfaceParams::new(frac(3, 1000), frac(17, 8), frac(9, 10)).unwrap(),
    ];
    for p in &sets {
        let h = make_family(p);
        let field = CRField::family(p);
        all &= field.apply(h.complexified()).is_zero();
        all &= field == CRField::of(&h);
    }
    outcome(all, format!("L(rho) = 0 for {} parameter sets", sets.len()))
}

fn cramer_vs_restriction() -> Outcome {
    let params = HypersurfaceParams::canonical();
    let h = make_family(&params);
    let f = remark_212_map(&params).unwrap();
    let bound = degree_bound(6).unwrap();
    let pts = h.random_exact_points(5, SEED, "acceptance_cramer").unwrap();
    let mut agree = 0;
    let mut worst = 0;
    let mut within = true;
    for p0 in &pts {
        let (g, cert) = cramer_reconstruct(&f, &h, &TARGET, p0, SEED).unwrap();
        let direct = restrict_to_segre(&f, &params, p0).unwrap();
        if g == direct && cert.matches_restriction {
            agree += 1;
        }
        worst = worst.max(cert.raw_degree.max(g.degree()));
        within &= cert.within_bound && (g.degree() as u64) <= bound;
    }
    outcome(
        agree == pts.len() && within,
        format!("{agree}/{} base points agree, largest degree {worst} <= {bound}", pts.len()),
    )
}

fn base_locus_mechanics() -> Outcome {
    let c = |n: i64| HoloPoly::constant(ComplexRational::from_ints(n, 0));
    let z = HoloPoly::var(Var::Z);
    let w = HoloPoly::var(Var::W);
    let fixtures = [
        (vec![z.clone(), w.clone()], &c(1) + &z, 0usize),
        (vec![&z * &z, &z * &w], w.clone(), 1),
        (vec![&z - &c(1), &w - &c(1)], &c(2) - &(&z + &w), 1),
    ];
    let mut ok = true;
    for (nums, den, expected) in fixtures {
        let f = make_map(nums.clone(), den.clone(), SEED).unwrap();
        let a = base_locus(&f).unwrap();
        ok &= a.is_finite() && a.points.len() == expected;
        for b in &a.points {
            let Some(e) = &b.exact else {
                ok = false;
                continue;
            };
            ok &= nums.iter().chain([&den]).all(|p| eval_zw(p, e).is_zero());
        }
    }
    let params = HypersurfaceParams::canonical();
    let h = make_family(&params);
    let f = remark_212_map(&params).unwrap();
    let rep = generic_degree_check(&f, &h, 20, SEED).unwrap();
    ok &= rep.samples.len() == 20 && rep.stable_degree.is_some() && rep.total_le_restricted;
    outcome(
        ok,
        format!(
            "3 fixtures back-substituted exactly; restricted degree {:?} on {} samples",
            rep.stable_degree,
            rep.samples.len()
        ),
    )
}

fn coefficient_bounds() -> Outcome {
    let mut ok = true;
    for m in 1..=16 {
        let rep = verify_lemma_2_8(&DiskPoly::extremal(m).unwrap()).unwrap();
        ok &= rep.attains_c_m && rep.passed();
    }
    let (mut trials, mut violations, mut ambiguous) = (0, 0, 0);
    for m in 1..=16u32 {
        let rep = lemma_2_8_trials(m, 625, SEED).unwrap();
        trials += rep.trials;
        violations += rep.violations.len();
        ambiguous += rep.ambiguous;
    }
    ok &= trials == 10_000 && violations == 0;
    outcome(
        ok,
        format!("extremal attains C_m for m <= 16; {trials} random polys, {violations} violations, {ambiguous} boundary-ambiguous"),
    )
}

#[derive(Serialize, Deserialize)]
struct LeviBaseline {
    samples: usize,
    seed: u64,
    min_levi: f64,
    min_grad_norm: f64,
    eps_zero_min_levi: f64,
}

fn within_tolerance(now: f64, base: f64) -> bool {
    (now - base).abs() <= 0.1 * base.abs() + 1e-12
}

fn levi_scan(baseline_path: &Path) -> Outcome {
    let params = HypersurfaceParams::canonical();
    let scan = make_family(&params).scan(10_000, SEED).unwrap();
    let limit = kohn_nirenberg_limit(&params).scan(10_000, SEED).unwrap();
    let now = LeviBaseline {
        samples: scan.n_samples,
        seed: SEED,
        min_levi: scan.min_levi,
        min_grad_norm: scan.min_grad_norm,
        eps_zero_min_levi: limit.min_levi,
    };
    let strict = scan.n_samples == 10_000
        && scan.min_levi > 0.0
        && scan.min_grad_norm > 0.0
        && limit.min_levi < scan.min_levi;
    let (regression_ok, note) = match fs::read_to_string(baseline_path) {
        Ok(text) => {
            let base: LeviBaseline = serde_json::from_str(&text).expect("baseline file parses");
            let ok = base.samples == now.samples
                && base.seed == now.seed
                && within_tolerance(now.min_levi, base.min_levi)
                && within_tolerance(now.min_grad_norm, base.min_grad_norm)
                && within_tolerance(now.eps_zero_min_levi, base.eps_zero_min_levi);
            (ok, "within 10% of baseline")
        }
        Err(_) => {
            fs::create_dir_all(baseline_path.parent().unwrap()).unwrap();
            fs::write(baseline_path, serde_json::to_string_pretty(&now).unwrap() + "\n").unwrap();
            (true, "baseline recorded")
        }
    };
    outcome(
        strict && regression_ok,
        format!(
            "min Levi {:.6}, min |grad| {:.6}, eps = 0 min Levi {:.6}; {note}",
            now.min_levi, now.min_grad_norm, now.eps_zero_min_levi
        ),
    )
}

fn monodromy() -> Outcome {
    let d = sqrt_w_demo().unwrap();
    outcome(
        d.passed && d.branch_swap && d.double_loop && d.restrictions.iter().all(|r| r.matches_expected),
        format!("swap end {:?}, double loop end {:?}", d.swap_end, d.double_loop_end),
    )
}

fn run_cli(dir: &Path, tag: &str, args: &[&str]) -> (i32, Vec<u8>, Option<Vec<u8>>) {
    fs::create_dir_all(dir).unwrap();
    let out = dir.join(format!("{tag}.json"));
    let status = Command::new(env!("CARGO_BIN_EXE_segrekit"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .status()
        .expect("binary runs");
    let grid = fs::read(out.with_extension("grid.csv")).ok();
    (status.code().unwrap_or(-1), fs::read(&out).unwrap_or_default(), grid)
}

fn determinism(dir: &Path) -> Outcome {
    fs::create_dir_all(dir).unwrap();
    let failing = dir.join("eps0.json");
    fs::write(&failing, r#"{"eps0": "1/100", "c": "9/4", "eps": "0", "seed": 5}"#).unwrap();
    let failing_report = dir.join("failing.json");
    let status = Command::new(env!("CARGO_BIN_EXE_segrekit"))
        .args(["levi-scan", "--samples", "500", "--config"])
        .arg(&failing)
        .arg("--out")
        .arg(&failing_report)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let failing_arg = failing_report.to_str().unwrap().to_string();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("verify-embedding", vec!["verify-embedding"]),
        ("levi-scan", vec!["levi-scan", "--samples", "2000", "--seed", "1", "--grid", "24"]),
        ("segre", vec!["segre", "--samples", "40"]),
        ("degree-check", vec!["degree-check", "--samples", "5"]),
        ("bounds", vec!["bounds", "--m", "5", "--trials", "50"]),
        ("monodromy-demo", vec!["monodromy-demo"]),
        ("recheck", vec!["recheck", "--report", &failing_arg]),
    ];
    let mut same = 0;
    let mut names = Vec::new();
    for (name, args) in &cases {
        let a = run_cli(&dir.join("a"), name, args);
        let b = run_cli(&dir.join("b"), name, args);
        if a.0 == 0 && a == b && !a.1.is_empty() {
            same += 1;
        } else {
            names.push(*name);
        }
    }
    outcome(
        same == cases.len(),
        if names.is_empty() {
            format!("{same}/{} subcommands byte-identical across two runs", cases.len())
        } else {
            format!("differing or failing: {names:?}")
        },
    )
}

fn main() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let baseline = manifest.join("tests").join("baselines").join("levi_scan.json");
    let scratch = std::env::temp_dir().join(format!("segrekit-acceptance-{}", std::process::id()));
    let s = |x: u64| Some(Duration::from_secs(x));
    let results = [
        criterion(1, "embedding identity", s(1), embedding_identity),
        criterion(2, "Segre suite", s(5), segre_checks),
        criterion(3, "CR field tangency", s(1), cr_tangency),
        criterion(4, "Cramer reconstruction", s(60), cramer_vs_restriction),
        criterion(5, "base locus and generic degree", s(30), base_locus_mechanics),
        criterion(6, "disk coefficient bounds", s(30), coefficient_bounds),
        criterion(7, "Levi scan", s(30), || levi_scan(&baseline)),
        criterion(8, "monodromy demo", s(5), monodromy),
        criterion(9, "determinism", None, || determinism(&scratch)),
    ];
    let _ = fs::remove_dir_all(&scratch);
    let passed = results.iter().filter(|r| **r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
