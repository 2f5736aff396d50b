//! Segre varieties `Q_p = {Z : rho(Z, conj p) = 0}`: implicit form, graph
//! form `eta = phi(xi)`, the reflection map and the sphere Segre hyperplane.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ComplexRational, Field};
use crate::hypersurface::{Hypersurface, HypersurfaceParams, Point};
use crate::poly::{Poly, Var};
use crate::rng;
use crate::unipoly::UniPoly;

/// `rho(z, w, conj p)` as a polynomial in `z, w`.
pub fn segre_implicit<K: Field>(h: &Hypersurface, p: &Point<K>) -> Poly<K> {
    h.complexified()
        .map_coeffs(K::from_gaussian)
        .compose(&[
            (Var::XiBar, Poly::constant(p.z.conj())),
            (Var::EtaBar, Poly::constant(p.w.conj())),
        ])
}

/// Whether `q` lies on `Q_p`, decided exactly.
pub fn on_segre<K: Field>(h: &Hypersurface, p: &Point<K>, q: &Point<K>) -> bool {
    let (pz, pw) = (p.z.conj(), p.w.conj());
    h.complexified()
        .map_coeffs(K::from_gaussian)
        .eval_with(|v| match v {
            Var::Z => Some(q.z.clone()),
            Var::W => Some(q.w.clone()),
            Var::XiBar => Some(pz.clone()),
            Var::EtaBar => Some(pw.clone()),
            _ => None,
        })
        .expect("complexified rho uses z, w, xibar, etabar")
        .is_zero()
}

/// `q in Q_p`; for Hermitian `rho` this agrees with `p in Q_q`.
pub fn segre_symmetry_check<K: Field>(h: &Hypersurface, p: &Point<K>, q: &Point<K>) -> bool {
    on_segre(h, p, q)
}

/// Graph form derived from the implicit form, for any surface whose Segre
/// varieties are `A w + B(z) = 0` with `A` constant: `phi = -B / A`.
pub fn graph_of<K: Field>(h: &Hypersurface, p: &Point<K>) -> Result<UniPoly<K>> {
    let imp = segre_implicit(h, p);
    let by_w = imp.coefficients_in(Var::W);
    if by_w.keys().any(|&e| e > 1) {
        return Err(Error::Domain("Segre variety is not a graph over z".into()));
    }
    let a = by_w
        .get(&1)
        .map(|c| c.as_constant().ok_or_else(|| Error::Domain("w-coefficient is not constant".into())))
        .transpose()?
        .unwrap_or_else(K::zero);
    let inv = a.recip().ok_or(Error::GraphUnavailable)?;
    let b = by_w.get(&0).cloned().unwrap_or_else(Poly::zero);
    let b = b
        .to_unipoly(Var::Z)
        .ok_or_else(|| Error::Domain("Segre variety is not a graph over z".into()))?;
    Ok(b.scale(&inv.negated()))
}

/// The Segre graph of `M_eps` at `p`:
///
/// ```text
/// phi(xi) = -(eps0 (xi^4 zb^4 + (c/2)(xi^7 zb + xi zb^7)) + xi^5 zb^5 + eps xi zb - 1) / wb
/// ```
///
/// with `zb = conj(z_p)`, `wb = conj(w_p)`.
pub fn segre_graph<K: Field>(params: &HypersurfaceParams, p: &Point<K>) -> Result<UniPoly<K>> {
    let wb = p.w.conj();
    let inv = wb.recip().ok_or(Error::GraphUnavailable)?;
    let zb = p.z.conj();
    let e0 = K::from_rational(params.eps0());
    let half_c = K::from_rational(&(params.c() / crate::field::int(2)));
    let eps = K::from_rational(params.eps());
    let mut c = vec![K::zero(); 8];
    c[0] = K::one().negated();
    c[1] = e0.times(&half_c).times(&zb.pow(7)).plus(&eps.times(&zb));
    c[4] = e0.times(&zb.pow(4));
    c[5] = zb.pow(5);
    c[7] = e0.times(&half_c).times(&zb);
    Ok(UniPoly::new(c).scale(&inv.negated()))
}

/// `R_xi(p) = (xi, phi_p(xi))`, a point of `Q_p`.
pub fn reflection<K: Field>(params: &HypersurfaceParams, xi: &K, p: &Point<K>) -> Result<Point<K>> {
    let phi = segre_graph(params, p)?;
    Ok(Point::new(xi.clone(), phi.eval(xi)))
}

/// Image of a discretized path under `R_xi`, pointwise.
pub fn reflect_path<K: Field>(
    params: &HypersurfaceParams,
    xi: &K,
    path: &[Point<K>],
) -> Result<Vec<Point<K>>> {
    path.iter().map(|p| reflection(params, xi, p)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereSegreReport {
    pub n: usize,
    pub trials: usize,
    /// `max |<Z, q>|` over random unit `Z`; at most one.
    pub max_inner: f64,
    /// `min (1 - |<Z, q>|)`.
    pub min_gap: f64,
    /// On the hyperplane `<Z, q> = 1`, `|Z|^2 = 1 + |Z - q|^2`; worst residual.
    pub max_pythagoras_residual: f64,
    /// Worst `|Z - q|` over projected points that land on the unit sphere.
    pub max_reconstruction_error: f64,
    pub unit_solutions_found: usize,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Checks on random samples that the unit sphere meets the Segre
/// hyperplane `{<Z, q> = 1}` only at `q`.
pub fn sphere_segre_unique_intersection(
    q: &[Complex64],
    trials: usize,
    seed: u64,
) -> Result<SphereSegreReport> {
    if q.is_empty() || (norm(q) - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("|q| = {} is not 1", norm(q))));
    }
    let n = q.len();
    let mut rng = rng::stream(seed, "sphere_segre");
    let mut max_inner: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut max_res: f64 = 0.0;
    let mut max_err: f64 = 0.0;
    let mut found = 0;
    for t in 0..trials {
        let mut z: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
            })
            .collect();
        if t == 0 {
            z = q.to_vec();
        }
        let nz = norm(&z);
        z.iter_mut().for_each(|x| *x /= nz);
        let ip = inner(&z, q).norm();
        max_inner = max_inner.max(ip);
        min_gap = min_gap.min(1.0 - ip);
        // force <Z, q> = 1
        let shift = Complex64::new(1.0, 0.0) - inner(&z, q);
        let proj: Vec<Complex64> = z.iter().zip(q).map(|(x, y)| x + shift * y).collect();
        let diff: Vec<Complex64> = proj.iter().zip(q).map(|(x, y)| x - y).collect();
        let lhs = norm(&proj).powi(2);
        let rhs = 1.0 + norm(&diff).powi(2);
        max_res = max_res.max((lhs - rhs).abs() / rhs);
        if (lhs - 1.0).abs() < 1e-12 {
            found += 1;
            max_err = max_err.max(norm(&diff));
        }
    }
    Ok(SphereSegreReport {
        n,
        trials,
        max_inner,
        min_gap,
        max_pythagoras_residual: max_res,
        max_reconstruction_error: max_err,
        unit_solutions_found: found,
    })
}

/// Whether two Segre graphs differ as polynomials.
pub fn graphs_distinct<K: Field>(a: &UniPoly<K>, b: &UniPoly<K>) -> bool {
    !(a - b).is_zero()
}

/// Exact Gaussian rational of small height, for sampling `xi`.
pub fn random_gaussian<R: Rng>(rng: &mut R, max_den: i64) -> ComplexRational {
    let q = rng.gen_range(1..=max_den);
    ComplexRational::from_fracs((rng.gen_range(-2 * q..=2 * q), q), (rng.gen_range(-2 * q..=2 * q), q))
}

/// Checks run by [`segre_suite`]; each case draws its points from its own
/// named stream so single cases can be replayed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegreCheck {
    /// `p in Q_p` iff `rho(p) = 0`, for a surface point and a shifted copy.
    SelfMembership,
    /// `q in Q_p` iff `p in Q_q`, for a reflected point and an unrelated one.
    Symmetry,
    /// The graph substituted into the implicit form vanishes identically.
    GraphConsistency,
    /// `R_(z_p)(p) = p` on the surface.
    FixedPoint,
    /// Different base points with `w != 0` give different graphs.
    Distinct,
}

impl SegreCheck {
    pub const ALL: [SegreCheck; 5] = [
        SegreCheck::SelfMembership,
        SegreCheck::Symmetry,
        SegreCheck::GraphConsistency,
        SegreCheck::FixedPoint,
        SegreCheck::Distinct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SegreCheck::SelfMembership => "self_membership",
            SegreCheck::Symmetry => "symmetry",
            SegreCheck::GraphConsistency => "graph_consistency",
            SegreCheck::FixedPoint => "fixed_point",
            SegreCheck::Distinct => "distinct",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown Segre check {s}")))
    }
}

fn nonzero_gaussian<R: Rng>(rng: &mut R) -> ComplexRational {
    loop {
        let g = random_gaussian(rng, 6);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Runs case `index` of `check` on the `M_eps` surface `h`, exactly.
pub fn segre_case(h: &Hypersurface, check: SegreCheck, seed: u64, index: usize) -> Result<bool> {
    use crate::field::Surd;
    let params = h
        .params()
        .ok_or_else(|| Error::Domain("Segre suite needs the M_eps family".into()))?
        .clone();
    let name = format!("segre/{}/{index}", check.name());
    let p = h.random_exact_points(1, seed, &name)?.pop().expect("one point");
    let mut r = rng::stream(seed, &format!("{name}/aux"));
    Ok(match check {
        SegreCheck::SelfMembership => {
            let shifted = Point::new(p.z.clone(), p.w.plus(&Surd::from_gaussian(&nonzero_gaussian(&mut r))));
            on_segre(h, &p, &p) && h.eval(&p)?.is_zero() && on_segre(h, &shifted, &shifted) == h.eval(&shifted)?.is_zero()
        }
        SegreCheck::Symmetry => {
            let xi = Surd::from_gaussian(&random_gaussian(&mut r, 6));
            let q = reflection(&params, &xi, &p)?;
            // off the surface too: one pair built on Q_a, one unrelated pair
            let a = Point::new(random_gaussian(&mut r, 6), nonzero_gaussian(&mut r));
            let b = reflection(&params, &random_gaussian(&mut r, 6), &a)?;
            let c = Point::new(random_gaussian(&mut r, 6), random_gaussian(&mut r, 6));
            on_segre(h, &p, &q)
                && on_segre(h, &q, &p)
                && on_segre(h, &b, &a)
                && on_segre(h, &a, &c) == on_segre(h, &c, &a)
        }
        SegreCheck::GraphConsistency => {
            let phi = graph_of(h, &p)?;
            segre_implicit(h, &p).substitute(Var::W, &Poly::from_unipoly(Var::Z, &phi)).is_zero()
                && phi == segre_graph(&params, &p)?
        }
        SegreCheck::FixedPoint => reflection(&params, &p.z, &p)? == p,
        SegreCheck::Distinct => {
            let a = Point::new(random_gaussian(&mut r, 6), nonzero_gaussian(&mut r));
            let mut b = Point::new(random_gaussian(&mut r, 6), nonzero_gaussian(&mut r));
            if b == a {
                b.w = b.w.plus(&ComplexRational::one());
            }
            b.w.is_zero() || graphs_distinct(&segre_graph(&params, &a)?, &segre_graph(&params, &b)?)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegreSuiteReport {
    pub cases: usize,
    /// Failing case indices per check.
    pub failures: std::collections::BTreeMap<String, Vec<usize>>,
    pub passed: bool,
}

/// `cases` seeded cases of every [`SegreCheck`].
pub fn segre_suite(h: &Hypersurface, cases: usize, seed: u64) -> Result<SegreSuiteReport> {
    use rayon::prelude::*;
    let jobs: Vec<(SegreCheck, usize)> = SegreCheck::ALL
        .into_iter()
        .flat_map(|c| (0..cases).map(move |i| (c, i)))
        .collect();
    let results: Vec<Result<bool>> = jobs.par_iter().map(|(c, i)| segre_case(h, *c, seed, *i)).collect();
    let mut failures: std::collections::BTreeMap<String, Vec<usize>> =
        SegreCheck::ALL.iter().map(|c| (c.name().to_string(), Vec::new())).collect();
    for ((c, i), r) in jobs.iter().zip(results) {
        if !r? {
            failures.get_mut(c.name()).expect("all checks listed").push(*i);
        }
    }
    let passed = failures.values().all(|v| v.is_empty());
    Ok(SegreSuiteReport { cases, failures, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Surd;
    use crate::hypersurface::make_family;

    fn canon() -> (HypersurfaceParams, Hypersurface) {
        let p = HypersurfaceParams::canonical();
        let h = make_family(&p);
        (p, h)
    }

    fn q(re: (i64, i64), im: (i64, i64)) -> ComplexRational {
        ComplexRational::from_fracs(re, im)
    }

    fn g(z: ComplexRational) -> Surd {
        Surd::from_gaussian(&z)
    }

    #[test]
    fn suite_passes_and_cases_replay() {
        let (_, h) = canon();
        let r = segre_suite(&h, 10, 3).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.failures.len(), 5);
        for c in SegreCheck::ALL {
            assert_eq!(SegreCheck::from_name(c.name()).unwrap(), c);
            assert!(segre_case(&h, c, 3, 4).unwrap());
        }
        assert!(segre_suite(&Hypersurface::unit_sphere(), 1, 0).is_err());
    }

    #[test]
    fn graph_at_zero_one_is_constant() {
        let (params, _) = canon();
        let p = Point::new(ComplexRational::zero(), ComplexRational::one());
        assert_eq!(segre_graph(&params, &p).unwrap(), UniPoly::one());
        let p0 = Point::new(ComplexRational::one(), ComplexRational::zero());
        assert!(matches!(segre_graph(&params, &p0), Err(Error::GraphUnavailable)));
        assert!(reflection(&params, &ComplexRational::one(), &p0).is_err());
    }

    #[test]
    fn implicit_examples() {
        let (_, h) = canon();
        let p = Point::new(ComplexRational::zero(), ComplexRational::one());
        let expect = &Poly::var(Var::W) - &Poly::one();
        assert_eq!(segre_implicit(&h, &p), expect);
        let s = Hypersurface::unit_sphere();
        let (a, b) = (q((1, 2), (1, 3)), q((-2, 5), (1, 7)));
        let p = Point::new(a.clone(), b.clone());
        let expect = &(&Poly::var(Var::Z).scale(&a.conj()) + &Poly::var(Var::W).scale(&b.conj()))
            - &Poly::one();
        assert_eq!(segre_implicit(&s, &p), expect);
    }

    #[test]
    fn explicit_graph_matches_implicit_derivation() {
        let (params, h) = canon();
        for p in h.random_exact_points(10, 1, "graph").unwrap() {
            let a = segre_graph(&params, &p).unwrap();
            assert_eq!(a, graph_of(&h, &p).unwrap());
            assert_eq!(a.degree(), Some(7));
            // self-membership
            assert_eq!(a.eval(&p.z), p.w);
        }
    }

    #[test]
    fn graph_substitution_cancels() {
        let (params, h) = canon();
        let p = h.random_exact_points(1, 9, "cancel").unwrap().remove(0);
        let phi = segre_graph(&params, &p).unwrap();
        let imp = segre_implicit(&h, &p);
        let sub = imp.compose(&[
            (Var::Z, Poly::var(Var::Xi)),
            (Var::W, Poly::from_unipoly(Var::Xi, &phi)),
        ]);
        assert!(sub.is_zero());
    }

    #[test]
    fn reflection_fixes_base_point() {
        let (params, h) = canon();
        let p = Point::new(ComplexRational::zero(), ComplexRational::one());
        assert_eq!(reflection(&params, &ComplexRational::zero(), &p).unwrap(), p);
        for p in h.random_exact_points(20, 2, "fix").unwrap() {
            assert_eq!(reflection(&params, &p.z, &p).unwrap(), p);
        }
    }

    #[test]
    fn symmetry_on_reflected_pairs() {
        let (params, h) = canon();
        let mut rng = rng::stream(3, "sym");
        for p in h.random_exact_points(10, 3, "sym-pts").unwrap() {
            let xi = g(random_gaussian(&mut rng, 5));
            let r = reflection(&params, &xi, &p).unwrap();
            assert!(on_segre(&h, &p, &r));
            assert!(on_segre(&h, &r, &p));
        }
        let origin = Point::new(g(ComplexRational::zero()), g(ComplexRational::zero()));
        let one = Point::new(g(ComplexRational::zero()), g(ComplexRational::one()));
        assert!(segre_symmetry_check(&h, &one, &one));
        assert!(!segre_symmetry_check(&h, &one, &origin));
    }

    #[test]
    fn distinct_base_points_give_distinct_graphs() {
        let (params, h) = canon();
        let pts = h.random_exact_points(6, 4, "distinct").unwrap();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                if pts[i] == pts[j] {
                    continue;
                }
                // different radicands: compare numerically
                let a = segre_graph(&params, &pts[i]).unwrap().map(|c| ComplexRational::approx_f64(c.to_c64(), 60));
                let b = segre_graph(&params, &pts[j]).unwrap().map(|c| ComplexRational::approx_f64(c.to_c64(), 60));
                assert!(graphs_distinct(&a, &b));
            }
        }
    }

    #[test]
    fn sphere_segre_examples() {
        let one = [Complex64::new(1.0, 0.0)];
        let r = sphere_segre_unique_intersection(&one, 100, 1).unwrap();
        assert!(r.max_inner <= 1.0 + 1e-15);
        assert!(r.max_reconstruction_error < 1e-12);
        let q = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let z = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(inner(&z, &q), Complex64::new(0.0, 0.0));
        let r = sphere_segre_unique_intersection(&q, 10_000, 7).unwrap();
        assert!(r.max_inner <= 1.0 + 1e-12);
        assert!(r.max_pythagoras_residual < 1e-12);
        assert!(r.max_reconstruction_error < 1e-12);
        assert!(r.unit_solutions_found >= 1);
        assert!(sphere_segre_unique_intersection(&[Complex64::new(2.0, 0.0)], 1, 1).is_err());
    }
}
