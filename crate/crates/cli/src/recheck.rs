use std::fs;
use std::path::Path;

use serde_json::Value;

use segrekit_core::bounds::{nonvanishing_on_disk, trial_poly, verify_lemma_2_8, DiskPoly, DiskStatus};
use segrekit_core::embed::{immersion_check, jacobian_c64, max_minor, verify_identity, verify_symbolic};
use segrekit_core::field::parse_rational;
use segrekit_core::hypersurface::{HypersurfaceParams, Point};
use segrekit_core::mapdeg::MapJson;
use segrekit_core::monodromy::sqrt_w_demo;
use segrekit_core::segre::{segre_case, SegreCheck};
use segrekit_core::{rng, Error, Result};

use crate::commands::{degree_findings, family, monodromy_failures, DEFAULT_IMMERSION_SAMPLES};
use crate::{Report, RunConfig, Witness};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

fn metric_usize(r: &Report, key: &str) -> Option<usize> {
    r.metrics.get(key).and_then(Value::as_u64).map(|v| v as usize)
}

/// Loads a saved report and re-verifies each witness under the params and
/// seed recorded in it. Passes when every witness is reproduced.
pub fn recheck(cfg: &RunConfig, path: &Path) -> Result<Report> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let orig: Report = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("malformed report: {e}")))?;
    let params = match &orig.params {
        Some(p) => HypersurfaceParams::new(parse_rational(&p.eps0)?, parse_rational(&p.c)?, parse_rational(&p.eps)?)?,
        None => cfg.params.clone(),
    };
    let replay = RunConfig { params, seed: orig.seed, samples: None, out_path: None };
    let mut r = Report::new("recheck", Some(replay.params.to_json()), orig.seed);
    let mut confirmed = 0;
    for (i, w) in orig.witnesses.iter().enumerate() {
        match confirm(&replay, &orig, w) {
            Ok(true) => confirmed += 1,
            Ok(false) => r.witnesses.push(Witness::Unconfirmed { index: i, detail: "not reproduced".into() }),
            Err(e) => r.witnesses.push(Witness::Unconfirmed { index: i, detail: e.to_string() }),
        }
    }
    r.metric("original_check", &orig.check_name);
    r.metric("original_status", orig.status);
    r.metric("witnesses", orig.witnesses.len());
    r.metric("confirmed", confirmed);
    let passed = confirmed == orig.witnesses.len();
    Ok(r.conclude(passed))
}

fn confirm(cfg: &RunConfig, orig: &Report, w: &Witness) -> Result<bool> {
    match w {
        Witness::IdentityResidual { symbolic, residual_terms, .. } => {
            let rep = if *symbolic { verify_symbolic() } else { verify_identity(&cfg.params)? };
            Ok(!rep.passed && rep.residual_terms == *residual_terms)
        }
        Witness::Immersion { point, min_max_minor, collisions } => {
            let minor = max_minor(&jacobian_c64(&cfg.params, &Point::from_array(*point)));
            if !close(minor, *min_max_minor, 1e-9) {
                return Ok(false);
            }
            if *collisions == 0 {
                return Ok(minor <= 1e-12);
            }
            let samples = metric_usize(orig, "immersion_samples").unwrap_or(DEFAULT_IMMERSION_SAMPLES);
            Ok(immersion_check(&cfg.params, samples, cfg.seed)?.collisions == *collisions)
        }
        Witness::LeviPoint { point, levi, grad_norm } => {
            let h = family(cfg);
            let p = Point::from_array(*point);
            let g = h.grad_norm(&p);
            let l = h.levi_scalar(&p).unwrap_or(0.0);
            Ok(close(g, *grad_norm, 1e-9) && close(l, *levi, 1e-9) && (l <= 0.0 || g <= 0.0))
        }
        Witness::SegreCase { check, index } => {
            let check = SegreCheck::from_name(check)?;
            Ok(!segre_case(&family(cfg), check, cfg.seed, *index)?)
        }
        Witness::DegreeSample { .. } | Witness::Cramer { .. } => {
            let mj: MapJson = orig
                .metrics
                .get("map")
                .cloned()
                .ok_or_else(|| Error::Parse("report lacks the map".into()))
                .and_then(|v| serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string())))?;
            let f = mj.to_map(rng::derive(cfg.seed, "map_normalization"))?;
            let sig = mj.signature.ok_or_else(|| Error::Parse("map lacks its signature".into()))?;
            let samples = metric_usize(orig, "samples").ok_or_else(|| Error::Parse("report lacks samples".into()))?;
            let points = metric_usize(orig, "points").ok_or_else(|| Error::Parse("report lacks points".into()))?;
            let again = degree_findings(cfg, &f, &sig, samples, points)?;
            Ok(!again.passed && again.report.witnesses.contains(w))
        }
        Witness::BoundsTrial { m, trial, coeffs, .. } => {
            let p = trial_poly(*m, cfg.seed, *trial);
            let same: Vec<String> = p.coeffs().iter().map(|a| a.to_string()).collect();
            if &same != coeffs {
                return Ok(false);
            }
            Ok(match verify_lemma_2_8(&p) {
                Ok(rep) => !rep.passed(),
                Err(_) => !matches!(nonvanishing_on_disk(&p), DiskStatus::BoundaryAmbiguous { .. }),
            })
        }
        Witness::BoundsExtremal { m } => {
            let rep = verify_lemma_2_8(&DiskPoly::extremal(*m)?)?;
            Ok(!(rep.passed() && rep.attains_c_m))
        }
        Witness::Monodromy { .. } => Ok(monodromy_failures(&sqrt_w_demo()?).contains(w)),
        Witness::Unconfirmed { .. } => Ok(false),
    }
}
