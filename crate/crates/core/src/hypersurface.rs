//! The `M_eps` family
//!
//! ```text
//! rho = eps0 (|z|^8 + c Re(|z|^2 z^6)) + |w|^2 + |z|^10 + eps |z|^2 - 1
//! ```
//!
//! with point classification, gradients, the scalar Levi form and the
//! sampled smoothness / pseudoconvexity scan.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{format_rational, frac, int, ComplexRational, Field, Surd};
use crate::poly::{HermPoly, HoloPoly, Monomial, Var};
use crate::rng;

/// A point `(z, w)` of `C^2` over any scalar type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Point<T> {
    pub z: T,
    pub w: T,
}

impl<T> Point<T> {
    pub fn new(z: T, w: T) -> Self {
        Self { z, w }
    }
}

impl<K: Field> Point<K> {
    pub fn to_c64(&self) -> Point<Complex64> {
        Point::new(self.z.to_c64(), self.w.to_c64())
    }

    pub fn conj(&self) -> Point<K> {
        Point::new(self.z.conj(), self.w.conj())
    }
}

impl Point<Complex64> {
    pub fn to_array(&self) -> [f64; 4] {
        [self.z.re, self.z.im, self.w.re, self.w.im]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Point::new(Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3]))
    }
}

/// `(eps0, c, eps)` with `eps0 > 0`, `2 < c < 16/7`, `0 <= eps < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceParams {
    eps0: BigRational,
    c: BigRational,
    eps: BigRational,
}

impl HypersurfaceParams {
    pub fn new(eps0: BigRational, c: BigRational, eps: BigRational) -> Result<Self> {
        if !eps0.is_positive() {
            return Err(Error::Params(format!("eps0 > 0 (got {eps0})")));
        }
        if c <= int(2) {
            return Err(Error::Params(format!("c > 2 (got {c})")));
        }
        if c >= frac(16, 7) {
            return Err(Error::Params(format!("c < 16/7 (got {c})")));
        }
        if eps.is_negative() {
            return Err(Error::Params(format!("eps >= 0 (got {eps})")));
        }
        if eps >= BigRational::one() {
            return Err(Error::Params(format!("eps < 1 (got {eps})")));
        }
        Ok(Self { eps0, c, eps })
    }

    /// `eps0 = 1/100, c = 9/4, eps = 1/4`. The square roots needed by the
    /// hyperquadric embedding are then `1/10, 3/40, 1/2`.
    pub fn canonical() -> Self {
        Self::new(frac(1, 100), frac(9, 4), frac(1, 4)).expect("canonical params are admissible")
    }

    pub fn with_eps(&self, eps: BigRational) -> Result<Self> {
        Self::new(self.eps0.clone(), self.c.clone(), eps)
    }

    pub fn eps0(&self) -> &BigRational {
        &self.eps0
    }
    pub fn c(&self) -> &BigRational {
        &self.c
    }
    pub fn eps(&self) -> &BigRational {
        &self.eps
    }

    pub fn to_json(&self) -> ParamsJson {
        ParamsJson {
            eps0: format_rational(&self.eps0),
            c: format_rational(&self.c),
            eps: format_rational(&self.eps),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub eps0: String,
    pub c: String,
    pub eps: String,
}

/// Which side of the hypersurface a point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    On,
    Inside,
    Outside,
}

/// Floating copy of a polynomial in `z, w, zbar, wbar`, for scans.
#[derive(Clone, Debug)]
struct FloatPoly {
    terms: Vec<([u16; 4], Complex64)>,
    max_exp: usize,
}

impl FloatPoly {
    fn new(p: &HoloPoly) -> Self {
        let vars = [Var::Z, Var::W, Var::ZBar, Var::WBar];
        let terms: Vec<([u16; 4], Complex64)> = p
            .terms()
            .map(|(m, c)| {
                let e = [m.exp(vars[0]), m.exp(vars[1]), m.exp(vars[2]), m.exp(vars[3])];
                (e, c.to_c64())
            })
            .collect();
        let max_exp = terms
            .iter()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        Self { terms, max_exp }
    }

    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let base = [z, w, z.conj(), w.conj()];
        let mut pows = vec![[Complex64::new(1.0, 0.0); 4]; self.max_exp + 1];
        for k in 1..=self.max_exp {
            for v in 0..4 {
                pows[k][v] = pows[k - 1][v] * base[v];
            }
        }
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (e, c)| {
            acc + c
                * pows[e[0] as usize][0]
                * pows[e[1] as usize][1]
                * pows[e[2] as usize][2]
                * pows[e[3] as usize][3]
        })
    }
}

/// Derivatives of `rho` used by the gradient and the Levi form.
#[derive(Clone, Debug)]
struct Derivs {
    rho_z: HoloPoly,
    rho_w: HoloPoly,
    rho_zzb: HoloPoly,
    rho_zwb: HoloPoly,
    rho_wwb: HoloPoly,
}

#[derive(Clone, Debug)]
struct FloatDerivs {
    rho: FloatPoly,
    rho_z: FloatPoly,
    rho_w: FloatPoly,
    rho_zzb: FloatPoly,
    rho_zwb: FloatPoly,
    rho_wwb: FloatPoly,
}

/// A real hypersurface `{rho = 0}` in `C^2`.
#[derive(Clone, Debug)]
pub struct Hypersurface {
    rho: HermPoly,
    complexified: HoloPoly,
    params: Option<HypersurfaceParams>,
    d: Derivs,
    f: FloatDerivs,
}

fn zq(k: u16) -> Monomial {
    Monomial::from_pairs(&[(Var::Z, k)])
}

impl Hypersurface {
    /// Any real defining function in `z, w, zbar, wbar`.
    pub fn from_rho(rho: HermPoly) -> Result<Self> {
        if let Some(v) = rho
            .poly()
            .vars_used()
            .into_iter()
            .find(|v| ![Var::Z, Var::W, Var::ZBar, Var::WBar].contains(v))
        {
            return Err(Error::Domain(format!(
                "defining function may only use z, w and conjugates (found {v})"
            )));
        }
        let p = rho.poly();
        let rho_z = p.derivative(Var::Z);
        let rho_w = p.derivative(Var::W);
        let d = Derivs {
            rho_zzb: rho_z.derivative(Var::ZBar),
            rho_zwb: rho_z.derivative(Var::WBar),
            rho_wwb: rho_w.derivative(Var::WBar),
            rho_z,
            rho_w,
        };
        let f = FloatDerivs {
            rho: FloatPoly::new(p),
            rho_z: FloatPoly::new(&d.rho_z),
            rho_w: FloatPoly::new(&d.rho_w),
            rho_zzb: FloatPoly::new(&d.rho_zzb),
            rho_zwb: FloatPoly::new(&d.rho_zwb),
            rho_wwb: FloatPoly::new(&d.rho_wwb),
        };
        Ok(Self {
            complexified: rho.complexify(),
            rho,
            params: None,
            d,
            f,
        })
    }

    /// `|z|^2 + |w|^2 - 1`.
    pub fn unit_sphere() -> Self {
        let rho = &(&HermPoly::abs_sqr(&HoloPoly::var(Var::Z))
            + &HermPoly::abs_sqr(&HoloPoly::var(Var::W)))
            - &HermPoly::constant(&int(1));
        Self::from_rho(rho).expect("sphere is valid")
    }

    pub fn rho(&self) -> &HermPoly {
        &self.rho
    }

    pub fn params(&self) -> Option<&HypersurfaceParams> {
        self.params.as_ref()
    }

    /// `rho(Z, W)` with `zbar -> xibar`, `wbar -> etabar`.
    pub fn complexified(&self) -> &HoloPoly {
        &self.complexified
    }

    /// `s(z) = |w|^2 - rho`, defined when `rho` is `|w|^2` plus a function of `z` alone.
    fn w_free_part(&self) -> Result<HoloPoly> {
        let ww = HermPoly::abs_sqr(&HoloPoly::var(Var::W));
        let rest = self.rho.poly() - ww.poly();
        if rest.uses(Var::W) || rest.uses(Var::WBar) {
            return Err(Error::Domain("defining function is not of the form |w|^2 - s(z)".into()));
        }
        Ok(-&rest)
    }

    /// The exact point `(z0, phase * sqrt(s(z0)))`, for surfaces `|w|^2 = s(z)`.
    /// `phase` must have modulus one.
    pub fn exact_point(&self, z0: &ComplexRational, phase: &ComplexRational) -> Result<Point<Surd>> {
        if phase.abs_sqr() != BigRational::one() {
            return Err(Error::Domain(format!("phase {phase} is not unimodular")));
        }
        let s = self.w_free_part()?;
        let sz = s.eval_with(|v| match v {
            Var::Z => Some(z0.clone()),
            Var::ZBar => Some(z0.conj()),
            _ => None,
        })?;
        if !sz.im.is_zero() || !sz.re.is_positive() {
            return Err(Error::Domain(format!("s(z0) = {sz} is not positive")));
        }
        let root = Surd::sqrt_of(&sz.re)?;
        Ok(Point::new(Surd::from_gaussian(z0), root.times(&Surd::from_gaussian(phase))))
    }

    /// Seeded exact points on `|w|^2 = s(z)` with `w != 0`, `z` a Gaussian
    /// rational of small height and a Pythagorean phase on `w`.
    pub fn random_exact_points(&self, n: usize, seed: u64, stream: &str) -> Result<Vec<Point<Surd>>> {
        let mut rng = rng::stream(seed, stream);
        let mut out = Vec::with_capacity(n);
        let mut tries = 0;
        while out.len() < n {
            tries += 1;
            if tries > 100 * n + 100 {
                return Err(Error::Sampling(format!("found {} of {n} exact points", out.len())));
            }
            let q: i64 = rng.gen_range(2..=12);
            let z0 = ComplexRational::from_fracs((rng.gen_range(-q..=q), q), (rng.gen_range(-q..=q), q));
            let phase = random_phase(&mut rng);
            if let Ok(p) = self.exact_point(&z0, &phase) {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Exact value of `rho` at `p`.
    pub fn eval<K: Field>(&self, p: &Point<K>) -> Result<K> {
        self.rho.eval_at(&p.z, &p.w)
    }

    pub fn eval_c64(&self, p: &Point<Complex64>) -> f64 {
        self.f.rho.eval(p.z, p.w).re
    }

    /// Sign of `rho(p)` decided exactly.
    pub fn classify_exact<K: Field>(&self, p: &Point<K>) -> Result<Side> {
        Ok(match self.eval(p)?.re_sign() {
            Ordering::Less => Side::Inside,
            Ordering::Equal => Side::On,
            Ordering::Greater => Side::Outside,
        })
    }

    /// Sign of `rho(p)` with a tolerance band `|rho| <= tol` counted as on.
    pub fn classify(&self, p: &Point<Complex64>, tol: f64) -> Side {
        let v = self.eval_c64(p);
        if v.abs() <= tol {
            Side::On
        } else if v < 0.0 {
            Side::Inside
        } else {
            Side::Outside
        }
    }

    fn eval_exact<K: Field>(&self, poly: &HoloPoly, p: &Point<K>) -> K {
        HermLike(poly).eval_at(p)
    }

    /// `(rho_z, rho_w)` evaluated exactly with `Zbar := conj(p)`.
    pub fn gradient_exact<K: Field>(&self, p: &Point<K>) -> (K, K) {
        (self.eval_exact(&self.d.rho_z, p), self.eval_exact(&self.d.rho_w, p))
    }

    pub fn gradient(&self, p: &Point<Complex64>) -> (Complex64, Complex64) {
        (self.f.rho_z.eval(p.z, p.w), self.f.rho_w.eval(p.z, p.w))
    }

    /// `sqrt(|rho_z|^2 + |rho_w|^2)`.
    pub fn grad_norm(&self, p: &Point<Complex64>) -> f64 {
        let (a, b) = self.gradient(p);
        (a.norm_sqr() + b.norm_sqr()).sqrt()
    }

    /// Levi form on the (unnormalized) complex tangent vector
    /// `(rho_w, -rho_z)`, computed exactly. Only its sign is invariant.
    pub fn levi_exact<K: Field>(&self, p: &Point<K>) -> Result<K> {
        let (rz, rw) = self.gradient_exact(p);
        if rz.is_zero() && rw.is_zero() {
            return Err(Error::NotSmooth(format!("{p:?}")));
        }
        let zzb = self.eval_exact(&self.d.rho_zzb, p);
        let zwb = self.eval_exact(&self.d.rho_zwb, p);
        let wwb = self.eval_exact(&self.d.rho_wwb, p);
        let cross = zwb.times(&rw).times(&rz.conj());
        let two_re = cross.plus(&cross.conj());
        Ok(zzb
            .times(&rw.norm_sqr())
            .minus(&two_re)
            .plus(&wwb.times(&rz.norm_sqr())))
    }

    pub fn levi_scalar(&self, p: &Point<Complex64>) -> Result<f64> {
        let (rz, rw) = self.gradient(p);
        if rz.norm_sqr() + rw.norm_sqr() == 0.0 {
            return Err(Error::NotSmooth(format!("{p:?}")));
        }
        let zzb = self.f.rho_zzb.eval(p.z, p.w).re;
        let zwb = self.f.rho_zwb.eval(p.z, p.w);
        let wwb = self.f.rho_wwb.eval(p.z, p.w).re;
        Ok(zzb * rw.norm_sqr() - 2.0 * (zwb * rw * rz.conj()).re + wwb * rz.norm_sqr())
    }

    /// `s(z) = -rho(z, 0)`; for the family `rho = |w|^2 - s(z)`.
    fn s_of(&self, z: Complex64) -> f64 {
        -self.f.rho.eval(z, Complex64::new(0.0, 0.0)).re
    }

    /// First `r > 0` along direction `theta` where `s` changes sign.
    pub fn admissible_radius(&self, theta: f64) -> f64 {
        let dir = Complex64::from_polar(1.0, theta);
        let mut hi = 1.0;
        while self.s_of(dir * hi) >= 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return hi;
            }
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.s_of(dir * mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Points of `M_eps`: a jittered sunflower grid of `z` over the disk
    /// `{s(z) >= 0}`, each lifted to 16 points `w = sqrt(s(z)) e^{2 pi i k/16}`.
    /// The first `z` node is `z = 0`.
    pub fn sample_surface(&self, count: usize, seed: u64) -> Result<Vec<Point<Complex64>>> {
        if self.params.is_none() {
            return Err(Error::Sampling("surface sampling needs the M_eps family".into()));
        }
        if count == 0 {
            return Err(Error::Sampling("count must be positive".into()));
        }
        const PHASES: usize = 16;
        let nodes = count.div_ceil(PHASES);
        let mut rng = rng::stream(seed, "sample_surface");
        let golden = PI * (3.0 - 5f64.sqrt());
        let mut out = Vec::with_capacity(nodes * PHASES);
        for i in 0..nodes {
            let z = if i == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                let jitter_t: f64 = rng.gen();
                let jitter_a: f64 = rng.gen_range(-0.5..0.5);
                let theta = i as f64 * golden + jitter_a * 2.0 * PI / nodes as f64;
                let t = if nodes > 1 {
                    (((i - 1) as f64 + jitter_t) / (nodes - 1) as f64).sqrt().min(1.0)
                } else {
                    0.0
                };
                let mut r = t * self.admissible_radius(theta);
                let mut z = Complex64::from_polar(r, theta);
                while self.s_of(z) < 0.0 {
                    r *= 0.5;
                    z = Complex64::from_polar(r, theta);
                }
                z
            };
            let modulus = self.s_of(z).max(0.0).sqrt();
            for k in 0..PHASES {
                let w = Complex64::from_polar(modulus, 2.0 * PI * k as f64 / PHASES as f64);
                out.push(Point::new(z, w));
            }
        }
        out.truncate(count);
        Ok(out)
    }

    /// Minimum gradient norm and Levi value over [`Hypersurface::sample_surface`].
    ///
    /// Certification is at sample resolution only.
    pub fn scan(&self, count: usize, seed: u64) -> Result<ScanReport> {
        let pts = self.sample_surface(count, seed)?;
        let evals: Vec<(usize, f64, Option<f64>, f64)> = pts
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let g = self.grad_norm(p);
                let l = self.levi_scalar(p).ok();
                (i, g, l, self.eval_c64(p).abs())
            })
            .collect();
        let by_grad = evals
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("nonempty sample");
        let by_levi = evals
            .iter()
            .filter_map(|e| e.2.map(|l| (e.0, l)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        let singular = evals.iter().filter(|e| e.2.is_none()).count();
        let max_residual = evals.iter().map(|e| e.3).fold(0.0, f64::max);
        Ok(ScanReport {
            n_samples: pts.len(),
            seed,
            min_grad_norm: by_grad.1,
            argmin_grad: pts[by_grad.0].to_array(),
            min_levi: by_levi.map_or(f64::NAN, |x| x.1),
            argmin_levi: by_levi.map_or([f64::NAN; 4], |x| pts[x.0].to_array()),
            singular_points: singular,
            max_residual,
        })
    }

    /// Levi values on an `n x n` grid of `z` covering the admissible disk,
    /// lifted with `w = sqrt(s(z)) > 0`. Points outside the disk are skipped.
    pub fn levi_grid(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let radius = (0..64)
            .map(|k| self.admissible_radius(2.0 * PI * k as f64 / 64.0))
            .fold(0.0, f64::max);
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let step = |k: usize| {
                    if n == 1 {
                        0.0
                    } else {
                        -radius + 2.0 * radius * k as f64 / (n - 1) as f64
                    }
                };
                let z = Complex64::new(step(i), step(j));
                let s = self.s_of(z);
                if s < 0.0 {
                    continue;
                }
                let p = Point::new(z, Complex64::new(s.sqrt(), 0.0));
                if let Ok(l) = self.levi_scalar(&p) {
                    out.push((z.re, z.im, l));
                }
            }
        }
        out
    }
}

/// A unimodular Gaussian rational from a random Pythagorean triple.
pub fn random_phase<R: Rng>(rng: &mut R) -> ComplexRational {
    let m: i64 = rng.gen_range(1..=6);
    let n: i64 = rng.gen_range(0..=6);
    let d = m * m + n * n;
    let u = ComplexRational::from_fracs((m * m - n * n, d), (2 * m * n, d));
    match rng.gen_range(0..4) {
        0 => u,
        1 => u.times(&ComplexRational::i()),
        2 => u.negated(),
        _ => u.times(&ComplexRational::i()).negated(),
    }
}

/// Evaluates a polynomial in `z, w, zbar, wbar` with barred slots conjugated.
struct HermLike<'a>(&'a HoloPoly);

impl HermLike<'_> {
    fn eval_at<K: Field>(&self, p: &Point<K>) -> K {
        let (zb, wb) = (p.z.conj(), p.w.conj());
        self.0
            .map_coeffs(K::from_gaussian)
            .eval_with(|v| match v {
                Var::Z => Some(p.z.clone()),
                Var::W => Some(p.w.clone()),
                Var::ZBar => Some(zb.clone()),
                Var::WBar => Some(wb.clone()),
                _ => None,
            })
            .expect("polynomial only uses z, w and conjugates")
    }
}

/// Builds `rho_eps` exactly; `Re(|z|^2 z^6)` is encoded as
/// `(z^7 zbar + z zbar^7)/2`.
pub fn make_family(params: &HypersurfaceParams) -> Hypersurface {
    let mut h = Hypersurface::from_rho(family_rho(params)).expect("family rho is Hermitian");
    h.params = Some(params.clone());
    h
}

pub fn family_rho(params: &HypersurfaceParams) -> HermPoly {
    let q = |r: &BigRational| ComplexRational::real(r.clone());
    let zb = |k: u16| Monomial::from_pairs(&[(Var::ZBar, k)]);
    let mut p = HoloPoly::zero();
    let e0 = q(&params.eps0);
    let half_c_e0 = q(&(&params.eps0 * &params.c / int(2)));
    p.add_term(zq(4).mul(&zb(4)), e0);
    p.add_term(zq(7).mul(&zb(1)), half_c_e0.clone());
    p.add_term(zq(1).mul(&zb(7)), half_c_e0);
    p.add_term(
        Monomial::from_pairs(&[(Var::W, 1), (Var::WBar, 1)]),
        ComplexRational::one(),
    );
    p.add_term(zq(5).mul(&zb(5)), ComplexRational::one());
    if !params.eps.is_zero() {
        p.add_term(zq(1).mul(&zb(1)), q(&params.eps));
    }
    p.add_term(Monomial::one(), ComplexRational::from_ints(-1, 0));
    HermPoly::new(p).expect("family rho is Hermitian")
}

/// `M_0`, the `eps = 0` member.
pub fn kohn_nirenberg_limit(params: &HypersurfaceParams) -> Hypersurface {
    make_family(&params.with_eps(BigRational::zero()).expect("eps = 0 is admissible"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n_samples: usize,
    pub seed: u64,
    pub min_grad_norm: f64,
    pub argmin_grad: [f64; 4],
    pub min_levi: f64,
    pub argmin_levi: [f64; 4],
    pub singular_points: usize,
    pub max_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(re: (i64, i64), im: (i64, i64)) -> ComplexRational {
        ComplexRational::from_fracs(re, im)
    }

    fn canon() -> Hypersurface {
        make_family(&HypersurfaceParams::canonical())
    }

    #[test]
    fn param_bounds_are_named() {
        let e = HypersurfaceParams::new(frac(1, 100), frac(2, 1), frac(1, 4)).unwrap_err();
        assert!(e.to_string().contains("c > 2"));
        let e = HypersurfaceParams::new(frac(1, 100), frac(16, 7), frac(1, 4)).unwrap_err();
        assert!(e.to_string().contains("c < 16/7"));
        let e = HypersurfaceParams::new(frac(0, 1), frac(9, 4), frac(1, 4)).unwrap_err();
        assert!(e.to_string().contains("eps0 > 0"));
        let e = HypersurfaceParams::new(frac(1, 100), frac(9, 4), frac(1, 1)).unwrap_err();
        assert!(e.to_string().contains("eps < 1"));
        assert!(HypersurfaceParams::new(frac(1, 100), frac(9, 4), frac(-1, 4)).is_err());
        assert!(HypersurfaceParams::new(frac(1, 100), frac(9, 4), frac(0, 1)).is_ok());
    }

    #[test]
    fn family_coefficients() {
        let h = canon();
        assert_eq!(h.rho().coeff([0, 1], [0, 1]), ComplexRational::one());
        assert_eq!(h.rho().coeff([0, 0], [0, 0]), ComplexRational::from_ints(-1, 0));
        assert_eq!(h.rho().coeff([7, 0], [1, 0]), q((9, 800), (0, 1)));
        assert_eq!(h.rho().coeff([1, 0], [7, 0]), q((9, 800), (0, 1)));
        assert_eq!(h.rho().coeff([4, 0], [4, 0]), q((1, 100), (0, 1)));
    }

    #[test]
    fn deformation_difference_is_eps_abs_z_sq() {
        let p = HypersurfaceParams::canonical();
        let diff = &family_rho(&p) - &family_rho(&p.with_eps(BigRational::zero()).unwrap());
        let expect = HermPoly::abs_sqr(&HoloPoly::var(Var::Z)).scale_real(&frac(1, 4));
        assert_eq!(diff, expect);
    }

    #[test]
    fn classify_examples() {
        let h = canon();
        let p = |w: i64| Point::new(ComplexRational::zero(), ComplexRational::from_ints(w, 0));
        assert_eq!(h.classify_exact(&p(1)).unwrap(), Side::On);
        assert_eq!(h.classify_exact(&p(0)).unwrap(), Side::Inside);
        assert_eq!(h.classify_exact(&p(2)).unwrap(), Side::Outside);
        assert_eq!(h.eval(&p(2)).unwrap(), ComplexRational::from_ints(3, 0));
        assert_eq!(h.eval(&p(0)).unwrap(), ComplexRational::from_ints(-1, 0));
    }

    #[test]
    fn gradient_examples() {
        let h = canon();
        let p = Point::new(ComplexRational::zero(), ComplexRational::one());
        assert_eq!(h.gradient_exact(&p), (ComplexRational::zero(), ComplexRational::one()));
        let s = Hypersurface::unit_sphere();
        let p = Point::new(ComplexRational::one(), ComplexRational::zero());
        assert_eq!(s.gradient_exact(&p), (ComplexRational::one(), ComplexRational::zero()));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // rho_z = (rho_x - i rho_y)/2, rho_w likewise, by central differences
        let h = canon();
        let pt = Point::new(q((3, 10), (-1, 5)), q((1, 2), (2, 5)));
        let (gz, gw) = h.gradient_exact(&pt);
        let pf = pt.to_c64();
        let f = |dz: Complex64, dw: Complex64| h.eval_c64(&Point::new(pf.z + dz, pf.w + dw));
        let hstep = 1e-5;
        let d = |dz: Complex64, dw: Complex64| (f(dz, dw) - f(-dz, -dw)) / (2.0 * hstep);
        let re = Complex64::new(hstep, 0.0);
        let im = Complex64::new(0.0, hstep);
        let zero = Complex64::new(0.0, 0.0);
        let fd_z = Complex64::new(d(re, zero), -d(im, zero)) * 0.5;
        let fd_w = Complex64::new(d(zero, re), -d(zero, im)) * 0.5;
        assert!((fd_z - gz.to_c64()).norm() / gz.to_c64().norm() < 1e-8);
        assert!((fd_w - gw.to_c64()).norm() / gw.to_c64().norm() < 1e-8);
    }

    #[test]
    fn levi_examples() {
        let s = Hypersurface::unit_sphere();
        let p = Point::new(ComplexRational::zero(), ComplexRational::one());
        assert_eq!(s.levi_exact(&p).unwrap(), ComplexRational::one());
        // only eps |rho_w|^2 survives at z = 0
        let h = canon();
        assert_eq!(h.levi_exact(&p).unwrap(), q((1, 4), (0, 1)));
        let origin = Point::new(ComplexRational::zero(), ComplexRational::zero());
        assert!(matches!(s.levi_exact(&origin), Err(Error::NotSmooth(_))));
    }

    #[test]
    fn levi_is_cubic_in_rho() {
        let h = canon();
        let h2 = Hypersurface::from_rho(h.rho().scale_real(&int(2))).unwrap();
        let pt = Point::new(q((1, 3), (1, 7)), q((2, 3), (-1, 9)));
        let l1 = h.levi_exact(&pt).unwrap();
        let l2 = h2.levi_exact(&pt).unwrap();
        assert_eq!(l2, l1.times(&ComplexRational::from_ints(8, 0)));
    }

    #[test]
    fn sphere_levi_is_one_on_surface() {
        let s = Hypersurface::unit_sphere();
        for k in 0..10 {
            // rational points on the 3-sphere via two Pythagorean pairs
            let t = k as i64 + 1;
            let a = q((1 - t * t, 1 + t * t), (2 * t, 1 + t * t));
            let zero = ComplexRational::zero();
            for pt in [Point::new(a.clone(), zero.clone()), Point::new(zero.clone(), a.clone())] {
                assert_eq!(s.classify_exact(&pt).unwrap(), Side::On);
                assert_eq!(s.levi_exact(&pt).unwrap(), ComplexRational::one());
            }
        }
    }

    #[test]
    fn exact_points_lie_on_surface() {
        let h = canon();
        let pts = h.random_exact_points(30, 5, "t").unwrap();
        for p in &pts {
            assert_eq!(h.classify_exact(p).unwrap(), Side::On);
            assert!(!p.w.is_zero());
        }
        // s(1/2) = 1 - (1/100)(1/256)(1 + 9/4) - 1/1024 - 1/16
        let p = h
            .exact_point(&q((1, 2), (0, 1)), &ComplexRational::one())
            .unwrap();
        assert_eq!(h.classify_exact(&p).unwrap(), Side::On);
        let s = Hypersurface::unit_sphere();
        let p = s.exact_point(&q((3, 5), (0, 1)), &ComplexRational::one()).unwrap();
        assert_eq!(p.w, Surd::from_gaussian(&q((4, 5), (0, 1))));
        assert!(s.exact_point(&q((2, 1), (0, 1)), &ComplexRational::one()).is_err());
    }

    #[test]
    fn z_zero_slice() {
        let h = canon();
        let pts = h.sample_surface(16, 3).unwrap();
        assert_eq!(pts.len(), 16);
        for p in &pts {
            assert_eq!(p.z, Complex64::new(0.0, 0.0));
            assert!((p.w.norm() - 1.0).abs() < 1e-15);
        }
        assert!(h.sample_surface(0, 1).is_err());
        assert!(Hypersurface::unit_sphere().sample_surface(10, 1).is_err());
    }

    #[test]
    fn samples_lie_on_surface_and_are_reproducible() {
        let h = canon();
        let a = h.sample_surface(2000, 11).unwrap();
        let b = h.sample_surface(2000, 11).unwrap();
        assert_eq!(a, b);
        for p in &a {
            assert!(h.eval_c64(p).abs() < 1e-12);
            assert_eq!(h.classify(p, 1e-10), Side::On);
        }
        assert_ne!(a, h.sample_surface(2000, 12).unwrap());
    }
}
