//! The explicit polynomial map
//!
//! ```text
//! F = (s1 z^4, s2 (z^7 + z), w, z^5, s3 z, s2 (z^7 - z)),
//! s1 = sqrt(eps0), s2 = sqrt(eps0 c) / 2, s3 = sqrt(eps)
//! ```
//!
//! sending `M_eps` into the hyperquadric `|Z_1|^2 + ... + |Z_5|^2 - |Z_6|^2 = 1`,
//! with exact and sampled checks.

use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{int, rat_to_f64, rational_sqrt, ComplexRational, Field};
use crate::hypersurface::{make_family, HypersurfaceParams, Point};
use crate::mapdeg::{make_map, RationalMap, Signature};
use crate::poly::{HermPoly, HoloPoly, Monomial, Var};

pub type HyperquadricSignature = Signature;

/// Signature `(5, 1)` of the target in `C^6`.
pub const TARGET: HyperquadricSignature = Signature { plus: 5, minus: 1 };

/// `(sqrt(eps0), sqrt(eps0 c)/2, sqrt(eps))`, when all are rational.
pub fn embedding_coefficients(params: &HypersurfaceParams) -> Result<[BigRational; 3]> {
    let need = |name: &str, value: BigRational| {
        rational_sqrt(&value).ok_or_else(|| Error::Irrational(format!("sqrt({name}) with {name} = {value}")))
    };
    Ok([
        need("eps0", params.eps0().clone())?,
        need("eps0*c/4", params.eps0() * params.c() / int(4))?,
        need("eps", params.eps().clone())?,
    ])
}

fn components(s: [HoloPoly; 3]) -> Vec<HoloPoly> {
    let z = |k: u16| HoloPoly::term(Monomial::var(Var::Z, k), ComplexRational::one());
    let [s1, s2, s3] = s;
    vec![
        &s1 * &z(4),
        &s2 * &(&z(7) + &z(1)),
        HoloPoly::var(Var::W),
        z(5),
        &s3 * &z(1),
        &s2 * &(&z(7) - &z(1)),
    ]
}

/// The map with exact rational coefficients.
pub fn remark_212_map(params: &HypersurfaceParams) -> Result<RationalMap> {
    let [a, b, c] = embedding_coefficients(params)?;
    make_map(
        components([HoloPoly::rational(&a), HoloPoly::rational(&b), HoloPoly::rational(&c)]),
        HoloPoly::one(),
        0,
    )
}

/// `sum_j sig_j |F_j|^2 - 1 - rho` for a polynomial map (denominator 1).
pub fn identity_difference(f: &RationalMap, sig: &Signature, rho: &HermPoly) -> Result<HermPoly> {
    if f.denominator() != &HoloPoly::one() {
        return Err(Error::Domain("identity check needs a polynomial map".into()));
    }
    let mut acc = HermPoly::constant(&int(-1));
    for (j, p) in f.numerators().iter().enumerate() {
        let sq = HermPoly::abs_sqr(p).scale_real(&int(sig.sign(j)));
        acc = &acc + &sq;
    }
    Ok(&acc - rho)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub passed: bool,
    /// Terms left in the difference polynomial.
    pub residual_terms: usize,
    pub residual: Vec<String>,
}

fn report(diff: &HoloPoly) -> IdentityReport {
    IdentityReport {
        passed: diff.is_zero(),
        residual_terms: diff.len(),
        residual: diff
            .terms()
            .take(8)
            .map(|(m, c)| format!("{c} * {m:?}"))
            .collect(),
    }
}

/// Exact check of `sum_{1..5} |F_j|^2 - |F_6|^2 - 1 = rho_eps`.
pub fn verify_identity(params: &HypersurfaceParams) -> Result<IdentityReport> {
    let f = remark_212_map(params)?;
    let rho = make_family(params).rho().clone();
    Ok(report(identity_difference(&f, &TARGET, &rho)?.poly()))
}

/// `(|z^7 + z|^2 - |z^7 - z|^2) / 4 - (z^7 zbar + z zbar^7) / 2`.
pub fn quarter_difference() -> HoloPoly {
    let z = |k: u16| HoloPoly::term(Monomial::var(Var::Z, k), ComplexRational::one());
    let plus = HermPoly::abs_sqr(&(&z(7) + &z(1)));
    let minus = HermPoly::abs_sqr(&(&z(7) - &z(1)));
    let quarter = (&plus - &minus).scale_real(&crate::field::frac(1, 4));
    let zb = |k: u16| Monomial::var(Var::ZBar, k);
    let mut re = HoloPoly::zero();
    re.add_term(Monomial::var(Var::Z, 7).mul(&zb(1)), ComplexRational::from_fracs((1, 2), (0, 1)));
    re.add_term(Monomial::var(Var::Z, 1).mul(&zb(7)), ComplexRational::from_fracs((1, 2), (0, 1)));
    quarter.poly() - &re
}

/// The identity with `eps0, c, eps` and the three square roots left as
/// symbols, reduced by `s1^2 = eps0`, `s2^2 = eps0 c / 4`, `s3^2 = eps`.
pub fn symbolic_difference() -> HoloPoly {
    let v = HoloPoly::var;
    let f = components([v(Var::S1), v(Var::S2), v(Var::S3)]);
    let mut acc = -&HoloPoly::one();
    for (j, p) in f.iter().enumerate() {
        let sq = p * &p.conjugate();
        acc = if TARGET.sign(j) > 0 { &acc + &sq } else { &acc - &sq };
    }
    let zz = |a: u16, b: u16| HoloPoly::term(Monomial::from_pairs(&[(Var::Z, a), (Var::ZBar, b)]), ComplexRational::one());
    let half = HoloPoly::constant(ComplexRational::from_fracs((1, 2), (0, 1)));
    let re_part = &half * &(&zz(7, 1) + &zz(1, 7));
    let rho = &(&(&(&v(Var::Eps0) * &(&zz(4, 4) + &(&v(Var::C) * &re_part)))
        + &(&v(Var::W) * &v(Var::WBar)))
        + &(&zz(5, 5) + &(&v(Var::Eps) * &zz(1, 1))))
        - &HoloPoly::one();
    let quarter = HoloPoly::constant(ComplexRational::from_fracs((1, 4), (0, 1)));
    (&acc - &rho)
        .reduce_square(Var::S1, &v(Var::Eps0))
        .reduce_square(Var::S2, &(&quarter * &(&v(Var::Eps0) * &v(Var::C))))
        .reduce_square(Var::S3, &v(Var::Eps))
}

pub fn verify_symbolic() -> IdentityReport {
    report(&symbolic_difference())
}

/// Floating values of the map, for any admissible params.
pub fn embedding_c64(params: &HypersurfaceParams, p: &Point<Complex64>) -> [Complex64; 6] {
    let e0 = rat_to_f64(params.eps0());
    let c = rat_to_f64(params.c());
    let eps = rat_to_f64(params.eps());
    let (s1, s2, s3) = (e0.sqrt(), (e0 * c).sqrt() / 2.0, eps.sqrt());
    let z = p.z;
    let z7 = z.powu(7);
    [s1 * z.powu(4), s2 * (z7 + z), p.w, z.powu(5), s3 * z, s2 * (z7 - z)]
}

/// `dF` at `p`: rows are components, columns `d/dz, d/dw`.
pub fn jacobian_c64(params: &HypersurfaceParams, p: &Point<Complex64>) -> [[Complex64; 2]; 6] {
    let e0 = rat_to_f64(params.eps0());
    let c = rat_to_f64(params.c());
    let eps = rat_to_f64(params.eps());
    let (s1, s2, s3) = (e0.sqrt(), (e0 * c).sqrt() / 2.0, eps.sqrt());
    let z = p.z;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let z6 = z.powu(6);
    [
        [4.0 * s1 * z.powu(3), zero],
        [s2 * (7.0 * z6 + 1.0), zero],
        [zero, one],
        [5.0 * z.powu(4), zero],
        [s3 * one, zero],
        [s2 * (7.0 * z6 - 1.0), zero],
    ]
}

/// Largest `2 x 2` minor of the Jacobian.
pub fn max_minor(j: &[[Complex64; 2]; 6]) -> f64 {
    let mut best: f64 = 0.0;
    for a in 0..6 {
        for b in (a + 1)..6 {
            best = best.max((j[a][0] * j[b][1] - j[a][1] * j[b][0]).norm());
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImmersionReport {
    pub samples: usize,
    pub pairs_checked: usize,
    /// Smallest over samples of the largest `2 x 2` Jacobian minor.
    pub min_max_minor: f64,
    pub rank_ok: bool,
    /// Smallest `|F(p) - F(q)|` over distinct sampled pairs.
    pub min_image_separation: f64,
    pub collisions: usize,
    /// Worst `|sum sig_j |F_j|^2 - 1|` on the samples.
    pub max_target_residual: f64,
    pub witness: Option<[f64; 4]>,
}

/// Rank of `dF` and pairwise injectivity of `F` on sampled points of `M_eps`.
pub fn immersion_check(params: &HypersurfaceParams, n_samples: usize, seed: u64) -> Result<ImmersionReport> {
    let h = make_family(params);
    let pts = h.sample_surface(n_samples, seed)?;
    let per_point: Vec<(f64, f64, [Complex64; 6])> = pts
        .par_iter()
        .map(|p| {
            let f = embedding_c64(params, p);
            let q: f64 = f
                .iter()
                .enumerate()
                .map(|(j, v)| TARGET.sign(j) as f64 * v.norm_sqr())
                .sum();
            (max_minor(&jacobian_c64(params, p)), (q - 1.0).abs(), f)
        })
        .collect();
    let (mut min_minor, mut witness) = (f64::INFINITY, None);
    for (p, (m, _, _)) in pts.iter().zip(&per_point) {
        if *m < min_minor {
            min_minor = *m;
            witness = Some(p.to_array());
        }
    }
    let max_res = per_point.iter().map(|x| x.1).fold(0.0, f64::max);
    let dist = |a: &[Complex64; 6], b: &[Complex64; 6]| {
        a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    };
    let (sep, collisions, pairs) = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut sep = f64::INFINITY;
            let mut col = 0;
            let mut pairs = 0;
            for j in (i + 1)..pts.len() {
                let d_src = ((pts[i].z - pts[j].z).norm_sqr() + (pts[i].w - pts[j].w).norm_sqr()).sqrt();
                if d_src < 1e-9 {
                    continue;
                }
                pairs += 1;
                let d = dist(&per_point[i].2, &per_point[j].2);
                sep = sep.min(d);
                if d < 1e-12 {
                    col += 1;
                }
            }
            (sep, col, pairs)
        })
        .reduce(|| (f64::INFINITY, 0, 0), |a, b| (a.0.min(b.0), a.1 + b.1, a.2 + b.2));
    let rank_ok = min_minor > 1e-12;
    Ok(ImmersionReport {
        samples: pts.len(),
        pairs_checked: pairs,
        min_max_minor: min_minor,
        rank_ok,
        min_image_separation: sep,
        collisions,
        max_target_residual: max_res,
        witness: if rank_ok && collisions == 0 { None } else { witness },
    })
}
