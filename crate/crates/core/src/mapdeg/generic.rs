use serde::{Deserialize, Serialize};

use super::{base_locus, restrict_to_segre, small_gaussian, BaseLocus, RationalMap};
use crate::error::{Error, Result};
use crate::field::{Field, Surd};
use crate::hypersurface::{Hypersurface, Point};
use crate::poly::Var;
use crate::rng;
use crate::segre::{on_segre, segre_graph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeSample {
    pub point: [f64; 4],
    pub restricted_degree: usize,
}

/// A base point `p` whose Segre variety passes through a point of the base
/// locus, with the degree found there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exhibit {
    pub locus_point: [f64; 4],
    pub base_point: [f64; 4],
    pub on_surface: bool,
    pub restricted_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericDegreeReport {
    pub total_degree: u32,
    pub samples: Vec<DegreeSample>,
    pub rejected_samples: usize,
    /// Common restricted degree when all samples agree.
    pub stable_degree: Option<usize>,
    pub total_le_restricted: bool,
    pub base_locus_size: usize,
    pub exhibit: Option<Exhibit>,
}

fn arr(p: &Point<Surd>) -> [f64; 4] {
    p.to_c64().to_array()
}

/// `Q_p` meets the base locus. Exact for exactly recovered locus points;
/// approximate ones count as met unless clearly separated.
fn meets_locus(h: &Hypersurface, p: &Point<Surd>, a: &BaseLocus) -> bool {
    a.points.iter().any(|b| match &b.exact {
        Some(e) => on_segre(h, p, &Point::new(Surd::from_gaussian(&e.z), Surd::from_gaussian(&e.w))),
        None => {
            let pc = p.to_c64();
            let v = h.complexified().eval_c64(&[
                (Var::Z, b.approx.z),
                (Var::W, b.approx.w),
                (Var::XiBar, pc.z.conj()),
                (Var::EtaBar, pc.w.conj()),
            ]);
            v.norm() < 1e-6
        }
    })
}

/// Restricted degrees of `F` on `Q_p` for seeded exact `p` in `M_eps` whose
/// Segre varieties avoid the base locus, plus one base point whose Segre
/// variety passes through it when that is possible.
pub fn generic_degree_check(
    f: &RationalMap,
    h: &Hypersurface,
    n_samples: usize,
    seed: u64,
) -> Result<GenericDegreeReport> {
    let params = h
        .params()
        .ok_or_else(|| Error::Domain("degree check needs the M_eps family".into()))?
        .clone();
    let a = base_locus(f)?;
    if !a.is_finite() {
        return Err(Error::Domain("base locus is not finite".into()));
    }
    let max_tries = 20 * n_samples + 20;
    let candidates = h.random_exact_points(max_tries, seed, "degree_check")?;
    let mut samples = Vec::new();
    let mut rejected = 0;
    for p in candidates {
        if samples.len() == n_samples {
            break;
        }
        if meets_locus(h, &p, &a) {
            rejected += 1;
            continue;
        }
        let r = restrict_to_segre(f, &params, &p)?;
        samples.push(DegreeSample {
            point: arr(&p),
            restricted_degree: r.degree(),
        });
    }
    if samples.len() < n_samples {
        return Err(Error::Sampling(format!(
            "only {} of {n_samples} samples avoid the base locus ({rejected} rejected)",
            samples.len()
        )));
    }
    let first = samples.first().map(|s| s.restricted_degree);
    let stable = first.filter(|d| samples.iter().all(|s| s.restricted_degree == *d));
    let total_le = samples.iter().all(|s| f.degree() as usize <= s.restricted_degree);

    let mut exhibit = None;
    let mut rng = rng::stream(seed, "degree_exhibit");
    'outer: for b in a.points.iter().filter_map(|b| b.exact.as_ref()) {
        if b.w.is_zero() {
            continue;
        }
        // p on Q_b is equivalent to b on Q_p
        for _ in 0..16 {
            let xi = small_gaussian(&mut rng);
            let phi = segre_graph(&params, b)?;
            let p = Point::new(xi.clone(), phi.eval(&xi));
            if p.w.is_zero() {
                continue;
            }
            let ps = Point::new(Surd::from_gaussian(&p.z), Surd::from_gaussian(&p.w));
            let Ok(r) = restrict_to_segre(f, &params, &p) else {
                continue;
            };
            exhibit = Some(Exhibit {
                locus_point: b.to_c64().to_array(),
                base_point: p.to_c64().to_array(),
                on_surface: h.eval(&ps)?.is_zero(),
                restricted_degree: r.degree(),
            });
            break 'outer;
        }
    }
    Ok(GenericDegreeReport {
        total_degree: f.degree(),
        samples,
        rejected_samples: rejected,
        stable_degree: stable,
        total_le_restricted: total_le,
        base_locus_size: a.points.len(),
        exhibit,
    })
}

#[cfg(test)]
mod tests {
    use super::super::make_map;
    use super::*;
    use crate::embed::remark_212_map;
    use crate::field::ComplexRational;
    use crate::hypersurface::{make_family, HypersurfaceParams};
    use crate::poly::HoloPoly;

    fn canon() -> (HypersurfaceParams, Hypersurface) {
        let p = HypersurfaceParams::canonical();
        let h = make_family(&p);
        (p, h)
    }

    #[test]
    fn coordinate_map_records_both_degrees() {
        let (_, h) = canon();
        let f = make_map(vec![HoloPoly::var(Var::Z), HoloPoly::var(Var::W)], HoloPoly::one(), 1).unwrap();
        let r = generic_degree_check(&f, &h, 5, 1).unwrap();
        assert_eq!(r.total_degree, 1);
        assert_eq!(r.stable_degree, Some(7));
        assert!(r.total_le_restricted);
        let f = make_map(vec![HoloPoly::var(Var::Z), HoloPoly::zero()], HoloPoly::one(), 1).unwrap();
        let r = generic_degree_check(&f, &h, 5, 1).unwrap();
        assert_eq!(r.stable_degree, Some(1));
    }

    #[test]
    fn embedding_degree_is_stable() {
        let (params, h) = canon();
        let f = remark_212_map(&params).unwrap();
        let r = generic_degree_check(&f, &h, 20, 3).unwrap();
        assert_eq!(r.stable_degree, Some(7));
        assert!(r.exhibit.is_none());
    }

    #[test]
    fn degree_drops_through_the_base_locus() {
        let (_, h) = canon();
        let c = |n| HoloPoly::constant(ComplexRational::from_ints(n, 0));
        let z = HoloPoly::var(Var::Z);
        let w = HoloPoly::var(Var::W);
        let f = make_map(vec![&z - &c(1), &w - &c(1)], &c(2) - &(&z + &w), 1).unwrap();
        let r = generic_degree_check(&f, &h, 5, 2).unwrap();
        assert_eq!(r.base_locus_size, 1);
        assert_eq!(r.stable_degree, Some(7));
        let e = r.exhibit.unwrap();
        assert_eq!(e.restricted_degree, 6);
    }
}
