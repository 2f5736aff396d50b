use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::json;

use segrekit_core::bounds::{c_m_constant, certify_radius, lemma_2_8_trials, verify_lemma_2_8, DiskPoly};
use segrekit_core::embed::{
    identity_difference, immersion_check, quarter_difference, remark_212_map, verify_identity, verify_symbolic,
    TARGET,
};
use segrekit_core::field::frac;
use segrekit_core::hypersurface::{kohn_nirenberg_limit, make_family, Hypersurface};
use segrekit_core::mapdeg::{
    base_locus, cramer_reconstruct, degree_bound, generic_degree_check, MapJson, RationalMap, Signature,
};
use segrekit_core::monodromy::{sqrt_w_demo, SqrtDemoReport};
use segrekit_core::segre::{segre_suite, SegreCheck};
use segrekit_core::{rng, Error};

use crate::{recheck, Command, Report, RunConfig, Witness};

pub const DEFAULT_LEVI_SAMPLES: usize = 10_000;
pub const DEFAULT_SEGRE_CASES: usize = 100;
pub const DEFAULT_DEGREE_SAMPLES: usize = 20;
pub const DEFAULT_IMMERSION_SAMPLES: usize = 500;
/// Witnesses kept per report; the metrics carry the full counts.
const MAX_WITNESSES: usize = 32;

type Outcome = segrekit_core::Result<Report>;

/// Runs one subcommand. Errors from the checks become error reports.
pub fn run(cmd: &Command, cfg: &RunConfig) -> Report {
    let outcome = match cmd {
        Command::VerifyEmbedding => verify_embedding(cfg),
        Command::LeviScan { grid } => levi_scan(cfg, *grid),
        Command::Segre => segre(cfg),
        Command::DegreeCheck { map, points } => degree_check(cfg, map.as_deref(), *points),
        Command::Bounds { m, trials } => bounds(cfg, *m, *trials),
        Command::MonodromyDemo => monodromy_demo(cfg),
        Command::Recheck { report } => recheck::recheck(cfg, report),
    };
    outcome.unwrap_or_else(|e| Report::error(cmd.name(), Some(cfg.params.to_json()), cfg.seed, &e.to_string()))
}

fn new_report(name: &str, cfg: &RunConfig) -> Report {
    Report::new(name, Some(cfg.params.to_json()), cfg.seed)
}

fn verify_embedding(cfg: &RunConfig) -> Outcome {
    let mut r = new_report("verify-embedding", cfg);
    let symbolic = verify_symbolic();
    let numeric = match verify_identity(&cfg.params) {
        Ok(rep) => Some(rep),
        Err(Error::Irrational(msg)) => {
            r.metric("numeric_identity_skipped", msg);
            None
        }
        Err(e) => return Err(e),
    };
    let quarter = quarter_difference().is_zero();
    let samples = cfg.samples.unwrap_or(DEFAULT_IMMERSION_SAMPLES);
    let imm = immersion_check(&cfg.params, samples, cfg.seed)?;
    for (is_symbolic, rep) in [(true, Some(&symbolic)), (false, numeric.as_ref())] {
        if let Some(rep) = rep.filter(|rep| !rep.passed) {
            r.witnesses.push(Witness::IdentityResidual {
                symbolic: is_symbolic,
                residual_terms: rep.residual_terms,
                terms: rep.residual.clone(),
            });
        }
    }
    let immersed = imm.rank_ok && imm.collisions == 0;
    if let (false, Some(point)) = (immersed, imm.witness) {
        r.witnesses.push(Witness::Immersion {
            point,
            min_max_minor: imm.min_max_minor,
            collisions: imm.collisions,
        });
    }
    let passed = symbolic.passed && numeric.as_ref().is_none_or(|n| n.passed) && quarter && immersed;
    r.metric("symbolic_identity", &symbolic);
    r.metric("numeric_identity", &numeric);
    r.metric("quarter_identity", quarter);
    r.metric("immersion_samples", samples);
    r.metric("immersion", &imm);
    Ok(r.conclude(passed))
}

fn levi_scan(cfg: &RunConfig, grid: Option<usize>) -> Outcome {
    let mut r = new_report("levi-scan", cfg);
    let samples = cfg.samples.unwrap_or(DEFAULT_LEVI_SAMPLES);
    let h = make_family(&cfg.params);
    let scan = h.scan(samples, cfg.seed)?;
    let limit = kohn_nirenberg_limit(&cfg.params).scan(samples, cfg.seed)?;
    let levi_ok = scan.min_levi > 0.0;
    let grad_ok = scan.min_grad_norm > 0.0;
    let witness_at = |p: [f64; 4]| -> Witness {
        let pc = segrekit_core::hypersurface::Point::from_array(p);
        Witness::LeviPoint {
            point: p,
            levi: h.levi_scalar(&pc).unwrap_or(0.0),
            grad_norm: h.grad_norm(&pc),
        }
    };
    if !levi_ok {
        r.witnesses.push(witness_at(scan.argmin_levi));
    }
    if !grad_ok {
        r.witnesses.push(witness_at(scan.argmin_grad));
    }
    r.metric("n_samples", scan.n_samples);
    r.metric("min_levi", scan.min_levi);
    r.metric("min_grad_norm", scan.min_grad_norm);
    r.metric("scan", &scan);
    r.metric("eps_zero_min_levi", limit.min_levi);
    r.metric("eps_zero_below", limit.min_levi < scan.min_levi);
    r.metric("eps_zero_scan", &limit);
    r.metric("certification", "sample resolution only");
    if let Some(n) = grid {
        let path = cfg.side_path("grid.csv", "levi_grid.csv");
        let rows = h.levi_grid(n);
        write_grid(&path, &rows).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
        let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        r.metric("grid_csv", name);
        r.metric("grid_columns", "z_re,z_im,levi");
        r.metric("grid_points", rows.len());
    }
    Ok(r.conclude(levi_ok && grad_ok))
}

fn write_grid(path: &Path, rows: &[(f64, f64, f64)]) -> std::io::Result<()> {
    let mut out = String::from("z_re,z_im,levi\n");
    for (x, y, l) in rows {
        out.push_str(&format!("{x},{y},{l}\n"));
    }
    fs::write(path, out)
}

fn segre(cfg: &RunConfig) -> Outcome {
    let mut r = new_report("segre", cfg);
    let h = make_family(&cfg.params);
    let cases = cfg.samples.unwrap_or(DEFAULT_SEGRE_CASES);
    let suite = segre_suite(&h, cases, cfg.seed)?;
    let failures: Vec<(String, usize)> = suite
        .failures
        .iter()
        .flat_map(|(name, idx)| idx.iter().map(move |i| (name.clone(), *i)))
        .collect();
    r.witnesses = failures
        .iter()
        .take(MAX_WITNESSES)
        .map(|(check, index)| Witness::SegreCase { check: check.clone(), index: *index })
        .collect();
    r.metric("cases_per_check", cases);
    r.metric("checks", SegreCheck::ALL.iter().map(|c| c.name()).collect::<Vec<_>>());
    r.metric("failure_count", failures.len());
    r.metric("failures", &suite.failures);
    Ok(r.conclude(suite.passed))
}

/// The map under test and the target signature.
pub(crate) fn load_map(cfg: &RunConfig, path: Option<&Path>) -> segrekit_core::Result<(RationalMap, Signature)> {
    match path {
        None => Ok((remark_212_map(&cfg.params)?, TARGET)),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?;
            let mj: MapJson = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("map file: {e}")))?;
            let f = mj.to_map(rng::derive(cfg.seed, "map_normalization"))?;
            let sig = mj.signature.unwrap_or(Signature::sphere(mj.n));
            Ok((f, sig))
        }
    }
}

/// Degree findings for `f`; shared with `recheck`, which replays them.
pub(crate) struct DegreeFindings {
    pub report: Report,
    pub passed: bool,
}

pub(crate) fn degree_findings(
    cfg: &RunConfig,
    f: &RationalMap,
    sig: &Signature,
    samples: usize,
    points: usize,
) -> segrekit_core::Result<DegreeFindings> {
    let mut r = new_report("degree-check", cfg);
    let h = make_family(&cfg.params);
    let bound = degree_bound(f.n() as i64)?;
    let locus = base_locus(f)?;
    let locus_json: Vec<_> = locus
        .points
        .iter()
        .map(|b| json!({ "point": b.approx.to_array(), "exact": b.exact.is_some() }))
        .collect();
    let generic = generic_degree_check(f, &h, samples, cfg.seed)?;
    let mut passed = generic.stable_degree.is_some() && generic.total_le_restricted;
    for s in &generic.samples {
        let reason = if (f.degree() as usize) > s.restricted_degree {
            "restricted degree below total degree"
        } else if generic.stable_degree.is_none() && Some(s.restricted_degree) != generic.samples.first().map(|x| x.restricted_degree) {
            "restricted degree differs from the first sample"
        } else {
            continue;
        };
        r.witnesses.push(Witness::DegreeSample {
            point: s.point,
            restricted_degree: s.restricted_degree,
            total_degree: f.degree(),
            reason: reason.to_string(),
        });
    }
    r.witnesses.truncate(MAX_WITNESSES);

    let maps_into_target = identity_difference(f, sig, h.rho()).map(|d| d.poly().is_zero()).unwrap_or(false);
    let mut certs = Vec::new();
    if maps_into_target {
        let bases = h.random_exact_points(points, cfg.seed, "degree_cramer")?;
        for (i, p0) in bases.iter().enumerate() {
            let (_, cert) = cramer_reconstruct(f, &h, sig, p0, rng::derive(cfg.seed, "cramer"))?;
            let ok = cert.matches_restriction && cert.within_bound;
            if !ok {
                passed = false;
                r.witnesses.push(Witness::Cramer {
                    base_index: i,
                    point: p0.to_c64().to_array(),
                    reason: format!(
                        "matches_restriction = {}, within_bound = {}",
                        cert.matches_restriction, cert.within_bound
                    ),
                });
            }
            certs.push(json!({ "point": p0.to_c64().to_array(), "certificate": cert }));
        }
        r.metric("cramer", certs);
    } else {
        r.metric("cramer", json!({ "skipped": "map does not send the surface into the target" }));
    }
    r.metric("map", f.to_json(Some(*sig)));
    r.metric("N", f.n());
    r.metric("total_degree", f.degree());
    r.metric("degree_bound", bound);
    r.metric("normalization", f.certificate());
    r.metric("base_locus", json!({ "finite": locus.is_finite(), "points": locus_json }));
    r.metric("samples", samples);
    r.metric("points", points);
    r.metric("generic", &generic);
    Ok(DegreeFindings { report: r, passed })
}

fn degree_check(cfg: &RunConfig, map: Option<&Path>, points: usize) -> Outcome {
    let (f, sig) = load_map(cfg, map)?;
    let samples = cfg.samples.unwrap_or(DEFAULT_DEGREE_SAMPLES);
    let d = degree_findings(cfg, &f, &sig, samples, points)?;
    Ok(d.report.conclude(d.passed))
}

fn bounds(cfg: &RunConfig, m: i64, trials: usize) -> Outcome {
    let mut r = new_report("bounds", cfg);
    let c = c_m_constant(m)?;
    let m = c.m;
    let extremal = verify_lemma_2_8(&DiskPoly::extremal(m)?)?;
    let rep = lemma_2_8_trials(m, trials, cfg.seed)?;
    let radius = certify_radius(&cfg.params, &frac(1, 2))?;
    let extremal_ok = extremal.passed() && extremal.attains_c_m;
    if !extremal_ok {
        r.witnesses.push(Witness::BoundsExtremal { m });
    }
    r.witnesses.extend(rep.violations.iter().take(MAX_WITNESSES).map(|v| Witness::BoundsTrial {
        m,
        trial: v.trial,
        coeffs: v.coeffs.clone(),
        reason: v.reason.clone(),
    }));
    r.metric("m", m);
    r.metric("c_m", c.c_m.to_string());
    r.metric("sup_bound", extremal.sup_bound.clone());
    r.metric("extremal", &extremal);
    r.metric("trials", &rep);
    r.metric("radius_certificate", &radius);
    Ok(r.conclude(extremal_ok && rep.violations.is_empty()))
}

/// Quantities of the demo that exceed their limits.
pub(crate) fn monodromy_failures(d: &SqrtDemoReport) -> Vec<Witness> {
    let start = Complex64::new(d.swap_start[0], d.swap_start[1]);
    let c = |a: [f64; 2]| Complex64::new(a[0], a[1]);
    let mut q = vec![
        ("branch_swap_error", (c(d.swap_end) + start).norm(), 1e-9),
        ("double_loop_error", (c(d.double_loop_end) - start).norm(), 1e-9),
        ("reversal_error", d.reversal_error, 1e-9),
        ("step_halving_change", d.step_halving_change, 1e-8),
    ];
    for (i, rc) in d.restrictions.iter().enumerate() {
        let name: &'static str = if i == 0 { "restriction_0_mismatch" } else { "restriction_1_mismatch" };
        q.push((name, if rc.matches_expected { 0.0 } else { 1.0 }, 0.5));
    }
    let expected_degrees = [Some(0), Some(1)];
    for (i, (rc, want)) in d.restrictions.iter().zip(expected_degrees).enumerate() {
        let name: &'static str = if i == 0 { "restriction_0_degree" } else { "restriction_1_degree" };
        q.push((name, if rc.g_degree == want { 0.0 } else { 1.0 }, 0.5));
    }
    q.into_iter()
        .filter(|(_, v, limit)| v.partial_cmp(limit) != Some(std::cmp::Ordering::Less))
        .map(|(quantity, value, limit)| Witness::Monodromy { quantity: quantity.to_string(), value, limit })
        .collect()
}

fn monodromy_demo(cfg: &RunConfig) -> Outcome {
    let mut r = new_report("monodromy-demo", cfg);
    let d = sqrt_w_demo()?;
    r.witnesses = monodromy_failures(&d);
    let passed = d.passed && r.witnesses.is_empty();
    r.metric("demo", &d);
    Ok(r.conclude(passed))
}

/// Surface for the params echoed in a report.
pub(crate) fn family(cfg: &RunConfig) -> Hypersurface {
    make_family(&cfg.params)
}
