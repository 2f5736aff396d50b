//! Rational maps `(P_1, ..., P_N) / R` from `C^2`, their degree, restriction
//! to Segre varieties, base loci, the CR field `L` and the Cramer
//! reconstruction of restricted maps.

mod cr;
mod cramer;
mod generic;
mod locus;

pub use cr::{apply_l, CRField};
pub use cramer::{cramer_reconstruct, v_matrix, CramerCertificate, VMatrix};
pub use generic::{generic_degree_check, DegreeSample, Exhibit, GenericDegreeReport};
pub use locus::{base_locus, resultant, BaseLocus, BasePoint};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ComplexRational, Field};
use crate::hypersurface::{Hypersurface, HypersurfaceParams, Point};
use crate::poly::{HoloPoly, PolyJson, Var};
use crate::rng;
use crate::segre::{graph_of, random_gaussian, segre_graph};
use crate::unipoly::UniPoly;

/// Number of random lines used by the common-factor detector.
pub const NORMALIZATION_LINES: usize = 32;

/// Hermitian form `sum_{j <= plus} |Z_j|^2 - sum_{j > plus} |Z_j|^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
}

impl Signature {
    pub fn sphere(n: usize) -> Self {
        Self { plus: n, minus: 0 }
    }

    pub fn dim(&self) -> usize {
        self.plus + self.minus
    }

    /// `+1` or `-1` for coordinate `j`.
    pub fn sign(&self, j: usize) -> i64 {
        if j < self.plus {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationCertificate {
    pub lines: usize,
    /// Lines on which all components share a nontrivial univariate gcd.
    pub hits: usize,
    /// Exactly one hit: inconclusive, accepted with a warning.
    pub warning: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    numerators: Vec<HoloPoly>,
    denominator: HoloPoly,
    degree: u32,
    certificate: NormalizationCertificate,
}

/// Builds `(P_1, ..., P_N) / R`, rejecting maps whose components visibly
/// share a factor.
pub fn make_map(numerators: Vec<HoloPoly>, denominator: HoloPoly, seed: u64) -> Result<RationalMap> {
    if numerators.is_empty() {
        return Err(Error::Domain("map needs at least one component".into()));
    }
    if denominator.is_zero() {
        return Err(Error::Domain("denominator is the zero polynomial".into()));
    }
    for p in numerators.iter().chain(std::iter::once(&denominator)) {
        if let Some(v) = p.vars_used().into_iter().find(|v| !matches!(v, Var::Z | Var::W)) {
            return Err(Error::Domain(format!("map components may only use z and w (found {v})")));
        }
    }
    let certificate = normalization_check(&numerators, &denominator, seed);
    if certificate.hits >= 2 {
        return Err(Error::NotNormalized {
            hits: certificate.hits,
            lines: certificate.lines,
        });
    }
    let degree = numerators
        .iter()
        .chain(std::iter::once(&denominator))
        .map(|p| p.total_degree())
        .max()
        .unwrap_or(0);
    Ok(RationalMap {
        numerators,
        denominator,
        degree,
        certificate,
    })
}

fn normalization_check(nums: &[HoloPoly], den: &HoloPoly, seed: u64) -> NormalizationCertificate {
    let mut rng = rng::stream(seed, "normalization");
    let mut hits = 0;
    for _ in 0..NORMALIZATION_LINES {
        let mut line = |_: ()| {
            let a = random_gaussian(&mut rng, 7);
            let b = random_gaussian(&mut rng, 7);
            &HoloPoly::constant(a) + &HoloPoly::var(Var::Xi).scale(&b)
        };
        let z = line(());
        let w = line(());
        let restricted: Vec<UniPoly<ComplexRational>> = nums
            .iter()
            .chain(std::iter::once(den))
            .map(|p| {
                p.compose(&[(Var::Z, z.clone()), (Var::W, w.clone())])
                    .to_unipoly(Var::Xi)
                    .expect("univariate after substitution")
            })
            .collect();
        if UniPoly::gcd_all(&restricted).is_some_and(|g| g.degree_or_zero() > 0) {
            hits += 1;
        }
    }
    NormalizationCertificate {
        lines: NORMALIZATION_LINES,
        hits,
        warning: hits == 1,
    }
}

impl RationalMap {
    pub fn n(&self) -> usize {
        self.numerators.len()
    }

    pub fn numerators(&self) -> &[HoloPoly] {
        &self.numerators
    }

    pub fn denominator(&self) -> &HoloPoly {
        &self.denominator
    }

    /// `max(deg P_j, deg R)`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn certificate(&self) -> &NormalizationCertificate {
        &self.certificate
    }

    /// Exact value; `Err` at a pole.
    pub fn eval<K: Field>(&self, p: &Point<K>) -> Result<Vec<K>> {
        let r = eval_zw(&self.denominator, p);
        let inv = r
            .recip()
            .ok_or_else(|| Error::Domain("point lies on the pole set".into()))?;
        Ok(self.numerators.iter().map(|n| eval_zw(n, p).times(&inv)).collect())
    }

    pub fn eval_c64(&self, p: &Point<Complex64>) -> Vec<Complex64> {
        let pt = [(Var::Z, p.z), (Var::W, p.w)];
        let r = self.denominator.eval_c64(&pt);
        self.numerators.iter().map(|n| n.eval_c64(&pt) / r).collect()
    }

    pub fn to_json(&self, signature: Option<Signature>) -> MapJson {
        MapJson {
            n: self.n(),
            numerators: self.numerators.iter().map(PolyJson::from).collect(),
            denominator: PolyJson::from(&self.denominator),
            signature,
        }
    }
}

/// Value of a polynomial in `z, w` at `p`.
pub fn eval_zw<K: Field>(p: &HoloPoly, pt: &Point<K>) -> K {
    p.map_coeffs(K::from_gaussian)
        .eval_with(|v| match v {
            Var::Z => Some(pt.z.clone()),
            Var::W => Some(pt.w.clone()),
            _ => None,
        })
        .expect("map components use only z and w")
}

/// Map file format. `signature` is optional; without it the target is
/// taken to be the unit sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub numerators: Vec<PolyJson>,
    pub denominator: PolyJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Signature>,
}

impl MapJson {
    pub fn to_map(&self, seed: u64) -> Result<RationalMap> {
        if self.numerators.len() != self.n {
            return Err(Error::Parse(format!(
                "N = {} but {} numerators given",
                self.n,
                self.numerators.len()
            )));
        }
        if let Some(s) = self.signature {
            if s.dim() != self.n {
                return Err(Error::Parse(format!("signature dimension {} != N = {}", s.dim(), self.n)));
            }
        }
        let nums = self
            .numerators
            .iter()
            .map(HoloPoly::try_from)
            .collect::<Result<Vec<_>>>()?;
        make_map(nums, HoloPoly::try_from(&self.denominator)?, seed)
    }
}

/// A map of one variable `(p_1, ..., p_N) / r`, kept reduced: the
/// components have no common factor and `r` is monic.
#[derive(Clone, Debug, PartialEq)]
pub struct UniRationalMap<K: Field> {
    numerators: Vec<UniPoly<K>>,
    denominator: UniPoly<K>,
}

impl<K: Field> UniRationalMap<K> {
    pub fn reduced(numerators: Vec<UniPoly<K>>, denominator: UniPoly<K>) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InsidePoleSet);
        }
        let g = UniPoly::gcd_all(numerators.iter().chain(std::iter::once(&denominator)))
            .expect("denominator is nonzero");
        let den = denominator.exact_div(&g)?;
        let lead_inv = den.leading().expect("nonzero").recip().expect("nonzero");
        let numerators = numerators
            .iter()
            .map(|p| Ok(p.exact_div(&g)?.scale(&lead_inv)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            numerators,
            denominator: den.scale(&lead_inv),
        })
    }

    pub fn numerators(&self) -> &[UniPoly<K>] {
        &self.numerators
    }

    pub fn denominator(&self) -> &UniPoly<K> {
        &self.denominator
    }

    /// Maximum degree over numerators and denominator.
    pub fn degree(&self) -> usize {
        self.numerators
            .iter()
            .chain(std::iter::once(&self.denominator))
            .map(|p| p.degree_or_zero())
            .max()
            .unwrap_or(0)
    }

    /// Conjugates every coefficient.
    pub fn conj(&self) -> Self {
        Self {
            numerators: self.numerators.iter().map(|p| p.conj()).collect(),
            denominator: self.denominator.conj(),
        }
    }

    pub fn to_c64(&self) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
        let f = |p: &UniPoly<K>| p.coeffs().iter().map(|c| c.to_c64()).collect::<Vec<_>>();
        (self.numerators.iter().map(f).collect(), f(&self.denominator))
    }
}

/// `P(xi, phi(xi))` for `P` in `z, w`.
pub fn restrict_poly<K: Field>(p: &HoloPoly, phi: &UniPoly<K>) -> UniPoly<K> {
    let wdeg = p.degree(&[Var::W]) as usize;
    let mut phi_pows = vec![UniPoly::one()];
    for i in 1..=wdeg {
        let next = &phi_pows[i - 1] * phi;
        phi_pows.push(next);
    }
    let mut acc = UniPoly::zero();
    for (m, c) in p.terms() {
        let mono = UniPoly::monomial(K::from_gaussian(c), m.exp(Var::Z) as usize);
        acc = &acc + &(&mono * &phi_pows[m.exp(Var::W) as usize]);
    }
    acc
}

/// `F(xi, phi(xi))`, reduced.
pub fn restrict_to_graph<K: Field>(f: &RationalMap, phi: &UniPoly<K>) -> Result<UniRationalMap<K>> {
    let nums = f.numerators.iter().map(|p| restrict_poly(p, phi)).collect();
    UniRationalMap::reduced(nums, restrict_poly(&f.denominator, phi))
}

/// `F` restricted to the Segre variety `Q_p` of `M_eps`.
pub fn restrict_to_segre<K: Field>(
    f: &RationalMap,
    params: &HypersurfaceParams,
    p: &Point<K>,
) -> Result<UniRationalMap<K>> {
    restrict_to_graph(f, &segre_graph(params, p)?)
}

/// `F` restricted to `Q_p` for any surface whose Segre varieties are graphs.
pub fn restrict_on<K: Field>(f: &RationalMap, h: &Hypersurface, p: &Point<K>) -> Result<UniRationalMap<K>> {
    restrict_to_graph(f, &graph_of(h, p)?)
}

/// `7 N (N + 1) / 2`.
pub fn degree_bound(n: i64) -> Result<u64> {
    if n <= 0 {
        return Err(Error::Domain(format!("N must be positive (got {n})")));
    }
    let n = n as u64;
    Ok(7 * n * (n + 1) / 2)
}

/// Random Gaussian rational of small height.
pub(crate) fn small_gaussian<R: Rng>(rng: &mut R) -> ComplexRational {
    random_gaussian(rng, 5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::remark_212_map;
    use crate::hypersurface::make_family;

    fn z() -> HoloPoly {
        HoloPoly::var(Var::Z)
    }
    fn w() -> HoloPoly {
        HoloPoly::var(Var::W)
    }
    fn up(v: &[(i64, i64)]) -> UniPoly<ComplexRational> {
        UniPoly::new(v.iter().map(|&(n, d)| ComplexRational::from_fracs((n, d), (0, 1))).collect())
    }

    #[test]
    fn degree_bound_values() {
        assert_eq!(degree_bound(1).unwrap(), 7);
        assert_eq!(degree_bound(2).unwrap(), 21);
        assert_eq!(degree_bound(6).unwrap(), 147);
        assert!(degree_bound(0).is_err());
    }

    #[test]
    fn make_map_examples() {
        let f = make_map(vec![z(), w()], HoloPoly::one(), 1).unwrap();
        assert_eq!(f.degree(), 1);
        assert_eq!(f.certificate().hits, 0);
        let f = make_map(vec![&z() * &z(), &z() * &w()], w(), 1).unwrap();
        assert_eq!(f.degree(), 2);
        assert!(!f.certificate().warning);
        let g = make_map(vec![&z() * &z(), &z() * &w()], z(), 1);
        assert!(matches!(g, Err(Error::NotNormalized { .. })));
        assert!(make_map(vec![z()], HoloPoly::zero(), 1).is_err());
        let f = remark_212_map(&HypersurfaceParams::canonical()).unwrap();
        assert_eq!(f.degree(), 7);
    }

    #[test]
    fn restrictions_at_zero_one() {
        let params = HypersurfaceParams::canonical();
        let p = Point::new(ComplexRational::zero(), ComplexRational::one());
        let f = make_map(vec![z(), w()], HoloPoly::one(), 1).unwrap();
        let r = restrict_to_segre(&f, &params, &p).unwrap();
        assert_eq!(r.numerators(), &[up(&[(0, 1), (1, 1)]), up(&[(1, 1)])]);
        assert_eq!(r.degree(), 1);

        let f = remark_212_map(&params).unwrap();
        let r = restrict_to_segre(&f, &params, &p).unwrap();
        let expect = vec![
            up(&[(0, 1), (0, 1), (0, 1), (0, 1), (1, 10)]),
            up(&[(0, 1), (3, 40), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (3, 40)]),
            up(&[(1, 1)]),
            up(&[(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)]),
            up(&[(0, 1), (1, 2)]),
            up(&[(0, 1), (-3, 40), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (3, 40)]),
        ];
        assert_eq!(r.numerators(), &expect[..]);
        assert_eq!(r.denominator(), &UniPoly::one());
        assert_eq!(r.degree(), 7);
    }

    #[test]
    fn restriction_keeps_or_cancels_denominator() {
        let h = Hypersurface::unit_sphere();
        let f = make_map(vec![z(), w()], &z() + &HoloPoly::one(), 1).unwrap();
        let p = Point::new(ComplexRational::zero(), ComplexRational::one());
        let r = restrict_on(&f, &h, &p).unwrap();
        assert_eq!(r.denominator(), &up(&[(1, 1), (1, 1)]));
        let g = make_map(vec![&z() * &z(), &z() * &w()], w(), 2).unwrap();
        // on the sphere at (0, 1) the Segre variety is w = 1
        let r = restrict_on(&g, &h, &p).unwrap();
        assert_eq!(r.numerators(), &[up(&[(0, 1), (0, 1), (1, 1)]), up(&[(0, 1), (1, 1)])]);
        let pole = make_map(vec![z()], &w() - &HoloPoly::one(), 1).unwrap();
        assert!(matches!(restrict_on(&pole, &h, &p), Err(Error::InsidePoleSet)));
    }

    #[test]
    fn generic_restricted_degree_of_embedding() {
        let params = HypersurfaceParams::canonical();
        let h = make_family(&params);
        let f = remark_212_map(&params).unwrap();
        for p in h.random_exact_points(5, 8, "deg").unwrap() {
            let r = restrict_to_segre(&f, &params, &p).unwrap();
            assert!(r.degree() as u32 <= 7 * f.degree());
            assert_eq!(r.degree(), 7);
        }
    }

    #[test]
    fn map_json_roundtrip_shape() {
        let f = make_map(vec![z(), w()], HoloPoly::one(), 1).unwrap();
        let j = serde_json::to_string(&f.to_json(None)).unwrap();
        assert!(j.starts_with("{\"N\":2,"));
        let back: MapJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_map(1).unwrap(), f);
    }
}
