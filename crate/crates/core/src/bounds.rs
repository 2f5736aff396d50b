//! Coefficient and sup bounds for polynomials without zeros in the unit
//! disk or ball, and Cauchy-estimate coefficient bounds.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{approx_rational, int, rat_to_f64, ComplexRational, Field};
use crate::hypersurface::HypersurfaceParams;
use crate::rng;
use crate::roots::{rationalize, roots_c64};
use crate::unipoly::UniPoly;

/// Root modulus margin around the unit circle.
pub const MARGIN: f64 = 1e-10;
/// Boundary points used for sup estimates.
pub const BOUNDARY_POINTS: usize = 2048;
const MAX_DEN: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundConstant {
    pub m: u32,
    #[serde(with = "rational_string")]
    pub c_m: BigRational,
}

mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        crate::field::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `C_m = max_j binom(m, j)`, the central binomial coefficient.
pub fn c_m_constant(m: i64) -> Result<BoundConstant> {
    if m <= 0 {
        return Err(Error::Domain(format!("C_m needs m >= 1 (got {m})")));
    }
    let m = m as u32;
    Ok(BoundConstant {
        m,
        c_m: BigRational::from_integer(binomial(m, m / 2)),
    })
}

/// `1 + a_1 z + ... + a_m z^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskPoly {
    coeffs: Vec<ComplexRational>,
    m: u32,
}

impl DiskPoly {
    /// `coeffs` are `a_1, ..., a_k` with `k <= m`.
    pub fn new(coeffs: Vec<ComplexRational>, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("degree bound must be at least 1".into()));
        }
        if coeffs.len() > m as usize {
            return Err(Error::Domain(format!("{} coefficients exceed degree bound {m}", coeffs.len())));
        }
        Ok(Self { coeffs, m })
    }

    /// From a polynomial with constant term 1, with `m` its degree (at least 1).
    pub fn from_unipoly(p: &UniPoly<ComplexRational>) -> Result<Self> {
        if !p.coeff(0).is_one() {
            return Err(Error::Domain("constant term must be 1".into()));
        }
        let m = p.degree_or_zero().max(1) as u32;
        Self::new(p.coeffs()[1..].to_vec(), m)
    }

    /// `prod (1 - z / r)` over the given nonzero roots.
    pub fn from_roots(roots: &[ComplexRational]) -> Result<Self> {
        let mut p = UniPoly::one();
        for r in roots {
            let inv = r.recip().ok_or_else(|| Error::Domain("root at the origin".into()))?;
            p = &p * &UniPoly::new(vec![ComplexRational::one(), inv.negated()]);
        }
        Self::from_unipoly(&p)
    }

    /// `(1 + z)^m`.
    pub fn extremal(m: u32) -> Result<Self> {
        let p = UniPoly::new(vec![ComplexRational::one(), ComplexRational::one()]).pow(m);
        Self::from_unipoly(&p)
    }

    pub fn coeffs(&self) -> &[ComplexRational] {
        &self.coeffs
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn to_unipoly(&self) -> UniPoly<ComplexRational> {
        let mut c = vec![ComplexRational::one()];
        c.extend(self.coeffs.iter().cloned());
        UniPoly::new(c)
    }

    fn coeffs_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|a| a.to_c64()).collect()
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs_c64(), z)
    }

    /// Largest `|p|` over [`BOUNDARY_POINTS`] equally spaced points of the unit circle.
    pub fn boundary_sup(&self) -> f64 {
        let c = self.coeffs_c64();
        (0..BOUNDARY_POINTS)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / BOUNDARY_POINTS as f64;
                horner(&c, Complex64::from_polar(1.0, t)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `1 + a_1 z + ... + a_k z^k` from `a_1, ..., a_k`.
fn horner(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| (acc + a) * z) + 1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DiskStatus {
    Nonvanishing,
    /// A root in the open disk.
    Vanishes { root: [f64; 2] },
    /// A root within [`MARGIN`] of the circle that could not be placed exactly.
    BoundaryAmbiguous { root: [f64; 2] },
}

impl DiskStatus {
    pub fn is_nonvanishing(&self) -> bool {
        matches!(self, DiskStatus::Nonvanishing)
    }
}

enum Place {
    Inside,
    Outside,
    Ambiguous,
}

fn place_root(p: &UniPoly<ComplexRational>, r: Complex64) -> Place {
    let m = r.norm();
    if m > 1.0 + MARGIN {
        return Place::Outside;
    }
    if m < 1.0 - MARGIN {
        return Place::Inside;
    }
    let q = rationalize(r, MAX_DEN);
    if !p.eval(&q).is_zero() {
        return Place::Ambiguous;
    }
    if q.abs_sqr() < BigRational::one() {
        Place::Inside
    } else {
        Place::Outside
    }
}

fn classify(p: &UniPoly<ComplexRational>, roots: &[Complex64]) -> DiskStatus {
    let mut ambiguous = None;
    for &r in roots {
        match place_root(p, r) {
            Place::Inside => return DiskStatus::Vanishes { root: [r.re, r.im] },
            Place::Ambiguous => ambiguous = ambiguous.or(Some([r.re, r.im])),
            Place::Outside => {}
        }
    }
    match ambiguous {
        Some(root) => DiskStatus::BoundaryAmbiguous { root },
        None => DiskStatus::Nonvanishing,
    }
}

/// Every computed root sits clearly on one side of the circle: its distance
/// to it exceeds [`MARGIN`] and 100 times the forward error estimate
/// `n u sum |a_i| |r|^i / |p'(r)|`. Near a multiple root the estimate is of
/// the order of the cluster radius, so clusters straddling the circle fail.
fn clearly_placed(c: &[Complex64], roots: &[Complex64]) -> bool {
    let n = c.len() as f64;
    roots.iter().all(|&r| {
        let (mut p, mut dp, mut size) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
        for a in c.iter().rev() {
            dp = dp * r + p;
            p = p * r + a;
            size = size * r.norm() + a.norm();
        }
        let err = n * f64::EPSILON * size / dp.norm();
        (r.norm() - 1.0).abs() > MARGIN.max(100.0 * err)
    })
}

/// Whether `p` has no zero in the open unit disk. Roots that are not clearly
/// placed are recomputed from the exact square-free part; roots within
/// [`MARGIN`] of the circle are then placed by exact evaluation at a
/// rational reconstruction.
pub fn nonvanishing_on_disk(p: &DiskPoly) -> DiskStatus {
    let u = p.to_unipoly();
    let c: Vec<Complex64> = u.coeffs().iter().map(|a| a.to_c64()).collect();
    let roots = roots_c64(&c);
    if clearly_placed(&c, &roots) {
        return classify(&u, &roots);
    }
    let sf = u.squarefree().expect("nonzero polynomial");
    let c: Vec<Complex64> = sf.coeffs().iter().map(|a| a.to_c64()).collect();
    classify(&sf, &roots_c64(&c))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma28Report {
    pub m: u32,
    pub c_m: String,
    pub coeff_abs: Vec<f64>,
    /// `|a_i| <= C_m` for every `i`, decided exactly.
    pub coeff_ok: bool,
    /// Some `|a_i|` equals `C_m` exactly.
    pub attains_c_m: bool,
    pub sup_boundary: f64,
    /// `m C_m + 1`.
    pub sup_bound: String,
    pub sup_ok: bool,
}

impl Lemma28Report {
    pub fn passed(&self) -> bool {
        self.coeff_ok && self.sup_ok
    }
}

/// Checks the coefficient bound `C_m` and the sup bound `m C_m + 1` for a
/// polynomial certified to have no zeros in the disk.
pub fn verify_lemma_2_8(p: &DiskPoly) -> Result<Lemma28Report> {
    match nonvanishing_on_disk(p) {
        DiskStatus::Nonvanishing => {}
        DiskStatus::Vanishes { root } => {
            return Err(Error::Domain(format!("polynomial vanishes in the disk at {root:?}")))
        }
        DiskStatus::BoundaryAmbiguous { root } => {
            return Err(Error::Domain(format!("boundary-ambiguous root near {root:?}")))
        }
    }
    let c = c_m_constant(p.m as i64)?.c_m;
    let c_sq = &c * &c;
    let coeff_ok = p.coeffs.iter().all(|a| a.abs_sqr() <= c_sq);
    let attains = p.coeffs.iter().any(|a| a.abs_sqr() == c_sq);
    let bound = &c * int(p.m as i64) + BigRational::one();
    let sup = p.boundary_sup();
    Ok(Lemma28Report {
        m: p.m,
        c_m: c.to_string(),
        coeff_abs: p.coeffs.iter().map(|a| a.to_c64().norm()).collect(),
        coeff_ok,
        attains_c_m: attains,
        sup_boundary: sup,
        sup_bound: bound.to_string(),
        sup_ok: sup <= rat_to_f64(&bound) * (1.0 + 1e-12),
    })
}

const INV_ROOT_BITS: u32 = 12;

/// Gaussian integer `g` with `1/3 <= |g| / 2^12 <= 1`: `g / 2^12` is the
/// reciprocal of a root of modulus in `[1, 3]`.
fn random_inverse_root(rng: &mut impl Rng) -> (i64, i64) {
    let d = (1i64 << INV_ROOT_BITS) as f64;
    loop {
        let modulus: f64 = rng.gen_range(1.0..3.0);
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let s = Complex64::from_polar(d / modulus, angle);
        let (x, y) = (s.re.round() as i64, s.im.round() as i64);
        let n = x * x + y * y;
        let d2 = 1i64 << (2 * INV_ROOT_BITS);
        if 9 * n >= d2 && n <= d2 {
            return (x, y);
        }
    }
}

/// `prod (1 - s_k z)`: `m` seeded roots `1/s_k` of modulus in `[1, 3]`.
/// Expanded over the Gaussian integers as `prod (D - g_k z) / D^m`.
pub fn random_root_poly(m: u32, rng: &mut impl Rng) -> DiskPoly {
    let d = BigInt::one() << INV_ROOT_BITS as usize;
    let mut q: Vec<(BigInt, BigInt)> = vec![(BigInt::one(), BigInt::zero())];
    for _ in 0..m {
        let (x, y) = random_inverse_root(rng);
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        let mut next = vec![(BigInt::zero(), BigInt::zero()); q.len() + 1];
        for (i, (re, im)) in q.iter().enumerate() {
            next[i].0 += &d * re;
            next[i].1 += &d * im;
            next[i + 1].0 -= &x * re - &y * im;
            next[i + 1].1 -= &x * im + &y * re;
        }
        q = next;
    }
    let den = BigInt::one() << (INV_ROOT_BITS * m) as usize;
    let coeffs = q[1..]
        .iter()
        .map(|(re, im)| {
            ComplexRational::new(BigRational::new(re.clone(), den.clone()), BigRational::new(im.clone(), den.clone()))
        })
        .collect();
    DiskPoly::new(coeffs, m).expect("m coefficients")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: usize,
    pub coeffs: Vec<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialsReport {
    pub m: u32,
    pub c_m: String,
    pub trials: usize,
    pub certified: usize,
    pub ambiguous: usize,
    pub violations: Vec<Violation>,
    /// Largest `|a_i| / C_m` seen.
    pub max_coeff_ratio: f64,
    /// Largest `sup / (m C_m + 1)` seen.
    pub max_sup_ratio: f64,
    /// `C_m - max |a_i|` for `(1 + z)^m`.
    pub extremal_gap: String,
}

/// The polynomial used by trial `t` of [`lemma_2_8_trials`].
pub fn trial_poly(m: u32, seed: u64, t: usize) -> DiskPoly {
    random_root_poly(m, &mut rng::stream(seed, &format!("bounds/{m}/{t}")))
}

/// Seeded random-root polynomials of degree `m`, each certified and checked.
pub fn lemma_2_8_trials(m: u32, trials: usize, seed: u64) -> Result<TrialsReport> {
    let c = c_m_constant(m as i64)?;
    let c_f = rat_to_f64(&c.c_m);
    let bound_f = c_f * m as f64 + 1.0;
    let results: Vec<(usize, DiskPoly, Result<Lemma28Report>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let p = trial_poly(m, seed, t);
            let rep = verify_lemma_2_8(&p);
            (t, p, rep)
        })
        .collect();
    let mut certified = 0;
    let mut ambiguous = 0;
    let mut violations = Vec::new();
    let mut max_coeff: f64 = 0.0;
    let mut max_sup: f64 = 0.0;
    for (t, p, rep) in results {
        let coeffs = || p.coeffs.iter().map(|a| a.to_string()).collect();
        match rep {
            Ok(r) => {
                certified += 1;
                max_coeff = max_coeff.max(r.coeff_abs.iter().fold(0.0f64, |a, b| a.max(*b)) / c_f);
                max_sup = max_sup.max(r.sup_boundary / bound_f);
                if !r.passed() {
                    violations.push(Violation {
                        trial: t,
                        coeffs: coeffs(),
                        reason: format!("coeff_ok = {}, sup_ok = {}", r.coeff_ok, r.sup_ok),
                    });
                }
            }
            Err(e) => match nonvanishing_on_disk(&p) {
                DiskStatus::BoundaryAmbiguous { .. } => ambiguous += 1,
                _ => violations.push(Violation {
                    trial: t,
                    coeffs: coeffs(),
                    reason: e.to_string(),
                }),
            },
        }
    }
    let ext = DiskPoly::extremal(m)?;
    let top = ext.coeffs.iter().map(|a| a.re.clone()).fold(BigRational::zero(), |a, b| a.max(b));
    Ok(TrialsReport {
        m,
        c_m: c.c_m.to_string(),
        trials,
        certified,
        ambiguous,
        violations,
        max_coeff_ratio: max_coeff,
        max_sup_ratio: max_sup,
        extremal_gap: (&c.c_m - top).to_string(),
    })
}

/// Polynomial in `N` complex variables, keyed by exponent vector.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, ComplexRational>,
}

impl BallPoly {
    pub fn new<I: IntoIterator<Item = (Vec<u32>, ComplexRational)>>(n: usize, terms: I) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, ComplexRational> = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(Error::Domain(format!("exponent {alpha:?} has the wrong length for N = {n}")));
            }
            let e = map.entry(alpha).or_insert_with(ComplexRational::zero);
            *e = e.plus(&c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { n, terms: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, ComplexRational> {
        &self.terms
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> ComplexRational {
        self.terms.get(&vec![0; self.n]).cloned().unwrap_or_else(ComplexRational::zero)
    }

    /// `xi -> p(xi u)`.
    pub fn slice(&self, u: &[ComplexRational]) -> UniPoly<ComplexRational> {
        let mut c = vec![ComplexRational::zero(); self.total_degree() as usize + 1];
        for (alpha, a) in &self.terms {
            let k: u32 = alpha.iter().sum();
            let mono = alpha.iter().zip(u).fold(a.clone(), |acc, (e, x)| acc.times(&x.pow(*e)));
            c[k as usize] = c[k as usize].plus(&mono);
        }
        UniPoly::new(c)
    }
}

/// Exact unit vector in `C^n` by inverse stereographic projection of a
/// random dyadic point of `R^(2n-1)`.
pub fn rational_unit_vector(n: usize, rng: &mut impl Rng) -> Vec<ComplexRational> {
    let t: Vec<BigRational> = (0..2 * n - 1)
        .map(|_| approx_rational(rng.gen_range(-2.0..2.0), 8))
        .collect();
    let s: BigRational = t.iter().map(|x| x * x).sum();
    let den = &s + BigRational::one();
    let mut x: Vec<BigRational> = t.iter().map(|v| v * int(2) / &den).collect();
    x.push((&s - BigRational::one()) / &den);
    x.chunks(2).map(|c| ComplexRational::new(c[0].clone(), c[1].clone())).collect()
}

fn axis(n: usize, k: usize) -> Vec<ComplexRational> {
    (0..n)
        .map(|j| if j == k { ComplexRational::one() } else { ComplexRational::zero() })
        .collect()
}

fn show_vec(u: &[ComplexRational]) -> String {
    let parts: Vec<String> = u.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBound {
    pub multi_index: Vec<u32>,
    pub abs: f64,
    /// `(m C_m + 1) N^(|alpha|/2)`.
    pub bound: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma29Report {
    pub n: usize,
    pub m: u32,
    pub c_m: String,
    pub sup_bound: String,
    pub directions: usize,
    pub ambiguous_directions: usize,
    pub max_slice_sup: f64,
    pub slices_ok: bool,
    pub coefficient_bounds: Vec<CoefficientBound>,
    pub passed: bool,
}

/// Slices `p` along the coordinate axes and seeded exact unit directions,
/// applies [`verify_lemma_2_8`] to each slice and checks the
/// polydisc Cauchy bound `(m C_m + 1) N^(|alpha|/2)` on every coefficient.
pub fn verify_lemma_2_9(p: &BallPoly, n_directions: usize, seed: u64) -> Result<Lemma29Report> {
    if !p.constant_term().is_one() {
        return Err(Error::Domain("p(0) must be 1".into()));
    }
    let n = p.n;
    let m = p.total_degree().max(1);
    let mut r = rng::stream(seed, "lemma_2_9");
    let dirs: Vec<Vec<ComplexRational>> = (0..n_directions)
        .map(|k| if k < n { axis(n, k) } else { rational_unit_vector(n, &mut r) })
        .collect();
    let results: Vec<(DiskStatus, Option<Lemma28Report>)> = dirs
        .par_iter()
        .map(|u| {
            let d = DiskPoly::new(p.slice(u).coeffs()[1..].to_vec(), m).expect("degree at most m");
            let status = nonvanishing_on_disk(&d);
            let rep = status.is_nonvanishing().then(|| verify_lemma_2_8(&d).expect("certified"));
            (status, rep)
        })
        .collect();
    let mut ambiguous = 0;
    let mut max_sup: f64 = 0.0;
    let mut slices_ok = true;
    for (u, (status, rep)) in dirs.iter().zip(results) {
        match status {
            DiskStatus::Vanishes { .. } => return Err(Error::HypothesisViolated(show_vec(u))),
            DiskStatus::BoundaryAmbiguous { .. } => ambiguous += 1,
            DiskStatus::Nonvanishing => {
                let rep = rep.expect("computed for certified slices");
                max_sup = max_sup.max(rep.sup_boundary);
                slices_ok &= rep.passed();
            }
        }
    }
    let c = c_m_constant(m as i64)?.c_m;
    let sup_bound = &c * int(m as i64) + BigRational::one();
    let bounds: Vec<CoefficientBound> = p
        .terms
        .iter()
        .map(|(alpha, a)| {
            let k: u32 = alpha.iter().sum();
            // |a|^2 <= S^2 N^k, exactly
            let rhs = &sup_bound * &sup_bound * int(n as i64).pow(k as i32);
            CoefficientBound {
                multi_index: alpha.clone(),
                abs: a.to_c64().norm(),
                bound: rat_to_f64(&sup_bound) * (n as f64).powf(k as f64 / 2.0),
                ok: a.abs_sqr() <= rhs,
            }
        })
        .collect();
    let passed = slices_ok && bounds.iter().all(|b| b.ok);
    Ok(Lemma29Report {
        n,
        m,
        c_m: c.to_string(),
        sup_bound: sup_bound.to_string(),
        directions: dirs.len(),
        ambiguous_directions: ambiguous,
        max_slice_sup: max_sup,
        slices_ok,
        coefficient_bounds: bounds,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyBound {
    pub i: u32,
    pub j: u32,
    pub bound: f64,
}

/// `|a_ij| <= sup / s^(i+j)` with `s = r / sqrt 2`, for all `i + j <= d`,
/// for a function bounded by `sup` on the ball of radius `r` in `C^2`.
pub fn cauchy_coeff_bound(sup_bound: f64, r: f64, d: u32) -> Result<Vec<CauchyBound>> {
    if !(sup_bound >= 0.0) || !(r > 0.0) {
        return Err(Error::Domain(format!("need sup >= 0 and r > 0 (got {sup_bound}, {r})")));
    }
    let s = r / std::f64::consts::SQRT_2;
    let mut out = Vec::new();
    for k in 0..=d {
        for i in 0..=k {
            out.push(CauchyBound {
                i,
                j: k - i,
                bound: sup_bound / s.powi(k as i32),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusCertificate {
    pub r: String,
    /// `eps0 (1 + c) r^8 + 2 r^2 + r^10 - 1`.
    pub majorant: String,
    pub certified: bool,
}

/// Exact check that the ball of radius `r` lies inside every `D_eps`,
/// `0 <= eps < 1`, through the majorant of `rho_eps` on `|z|, |w| <= r`.
pub fn certify_radius(params: &HypersurfaceParams, r: &BigRational) -> Result<RadiusCertificate> {
    if !r.is_positive() {
        return Err(Error::Domain("radius must be positive".into()));
    }
    let r2 = r * r;
    let r8 = r2.pow(4);
    let maj = params.eps0() * (BigRational::one() + params.c()) * &r8 + int(2) * &r2 + &r8 * &r2
        - BigRational::one();
    Ok(RadiusCertificate {
        r: r.to_string(),
        majorant: maj.to_string(),
        certified: maj.is_negative(),
    })
}
