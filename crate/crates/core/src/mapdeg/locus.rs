use num_complex::Complex64;

use super::{eval_zw, RationalMap};
use crate::error::{Error, Result};
use crate::field::{ComplexRational, Field};
use crate::hypersurface::Point;
use crate::linalg::poly_det;
use crate::poly::{HoloPoly, Var};
use crate::roots::{distinct_roots, rationalize};
use crate::unipoly::UniPoly;

/// Largest denominator tried when recovering exact coordinates.
const MAX_DEN: u64 = 1 << 20;

/// A common zero of all components of a map.
#[derive(Clone, Debug, PartialEq)]
pub struct BasePoint {
    pub approx: Point<Complex64>,
    /// Present when the point was recovered and checked in exact arithmetic.
    pub exact: Option<Point<ComplexRational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaseLocus {
    pub points: Vec<BasePoint>,
    /// The components share a curve of zeros.
    pub non_finite: bool,
}

impl BaseLocus {
    pub fn is_finite(&self) -> bool {
        !self.non_finite
    }

    pub fn all_exact(&self) -> bool {
        self.points.iter().all(|p| p.exact.is_some())
    }
}

fn other(v: Var) -> Result<Var> {
    match v {
        Var::Z => Ok(Var::W),
        Var::W => Ok(Var::Z),
        _ => Err(Error::Domain(format!("resultant variable must be z or w (got {v})"))),
    }
}

fn coeffs_in(p: &HoloPoly, elim: Var, keep: Var) -> Vec<UniPoly<ComplexRational>> {
    let by = p.coefficients_in(elim);
    let deg = by.keys().copied().max().unwrap_or(0) as usize;
    (0..=deg)
        .map(|k| {
            by.get(&(k as u16))
                .map(|c| c.to_unipoly(keep).expect("bivariate in z, w"))
                .unwrap_or_else(UniPoly::zero)
        })
        .collect()
}

/// Sylvester resultant of `p` and `q` with respect to `elim`, as a
/// polynomial in the other of `z, w`. Both must have positive degree in `elim`.
pub fn resultant(p: &HoloPoly, q: &HoloPoly, elim: Var) -> Result<UniPoly<ComplexRational>> {
    let keep = other(elim)?;
    let a = coeffs_in(p, elim, keep);
    let b = coeffs_in(q, elim, keep);
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 || n == 0 {
        return Err(Error::Domain("resultant needs positive degree in both inputs".into()));
    }
    let size = m + n;
    let mut mat = vec![vec![UniPoly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    poly_det(&mat)
}

/// gcd of everything that must vanish at the `keep`-coordinate of a common
/// zero. `None` when all of it vanishes identically.
fn elimination_poly(polys: &[&HoloPoly], elim: Var, keep: Var) -> Result<Option<UniPoly<ComplexRational>>> {
    let mut items = Vec::new();
    let positive: Vec<&HoloPoly> = polys.iter().copied().filter(|p| p.degree(&[elim]) > 0).collect();
    for p in polys.iter().filter(|p| p.degree(&[elim]) == 0) {
        items.push(p.to_unipoly(keep).expect("bivariate in z, w"));
    }
    for i in 0..positive.len() {
        for j in (i + 1)..positive.len() {
            items.push(resultant(positive[i], positive[j], elim)?);
        }
    }
    Ok(UniPoly::gcd_all(&items))
}

fn vanishes_exactly(polys: &[&HoloPoly], pt: &Point<ComplexRational>) -> bool {
    polys.iter().all(|p| eval_zw(p, pt).is_zero())
}

fn vanishes_approx(polys: &[&HoloPoly], pt: &Point<Complex64>) -> bool {
    let v = [(Var::Z, pt.z), (Var::W, pt.w)];
    let scale = 1.0 + pt.z.norm().max(pt.w.norm());
    polys.iter().all(|p| {
        let size: f64 = p.terms().map(|(_, c)| c.to_c64().norm()).sum();
        p.eval_c64(&v).norm() <= 1e-8 * size * scale.powi(p.total_degree() as i32)
    })
}

/// Common zeros of `P_1, ..., P_N, R` by resultants in both directions.
/// A point is exact when its rational reconstruction zeroes every
/// component in exact arithmetic.
pub fn base_locus(f: &RationalMap) -> Result<BaseLocus> {
    let polys: Vec<&HoloPoly> = f
        .numerators()
        .iter()
        .chain(std::iter::once(f.denominator()))
        .filter(|p| !p.is_zero())
        .collect();
    if polys.iter().any(|p| p.as_constant().is_some()) {
        return Ok(BaseLocus {
            points: Vec::new(),
            non_finite: false,
        });
    }
    let gw = elimination_poly(&polys, Var::Z, Var::W)?;
    let gz = elimination_poly(&polys, Var::W, Var::Z)?;
    let (Some(gw), Some(gz)) = (gw, gz) else {
        return Ok(BaseLocus {
            points: Vec::new(),
            non_finite: true,
        });
    };
    let mut points: Vec<BasePoint> = Vec::new();
    for w in distinct_roots(&gw) {
        for z in distinct_roots(&gz) {
            let approx = Point::new(z, w);
            let cand = Point::new(rationalize(z, MAX_DEN), rationalize(w, MAX_DEN));
            let exact = vanishes_exactly(&polys, &cand).then_some(cand);
            if exact.is_none() && !vanishes_approx(&polys, &approx) {
                continue;
            }
            let dup = points.iter().any(|q| {
                (q.approx.z - z).norm() < 1e-9 && (q.approx.w - w).norm() < 1e-9
            });
            if !dup {
                points.push(BasePoint { approx, exact });
            }
        }
    }
    Ok(BaseLocus {
        points,
        non_finite: false,
    })
}

#[cfg(test)]
mod tests {
    use super::super::make_map;
    use super::*;

    fn z() -> HoloPoly {
        HoloPoly::var(Var::Z)
    }
    fn w() -> HoloPoly {
        HoloPoly::var(Var::W)
    }
    fn one() -> HoloPoly {
        HoloPoly::one()
    }
    fn origin() -> Point<ComplexRational> {
        Point::new(ComplexRational::zero(), ComplexRational::zero())
    }

    #[test]
    fn resultant_of_lines() {
        // Res_z(z - w, z + w - 2) = +-(2w - 2)
        let r = resultant(&(&z() - &w()), &(&(&z() + &w()) - &HoloPoly::constant(ComplexRational::from_ints(2, 0))), Var::Z)
            .unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!(r.eval(&ComplexRational::one()).is_zero());
        assert!(resultant(&w(), &z(), Var::Z).is_err());
    }

    #[test]
    fn resultant_matches_product_of_differences() {
        // Res_z((z-1)(z-2), z - w) = (1 - w)(2 - w) up to sign
        let c = |n| HoloPoly::constant(ComplexRational::from_ints(n, 0));
        let p = &(&z() - &c(1)) * &(&z() - &c(2));
        let r = resultant(&p, &(&z() - &w()), Var::Z).unwrap();
        let expect = UniPoly::new(vec![
            ComplexRational::from_ints(2, 0),
            ComplexRational::from_ints(-3, 0),
            ComplexRational::from_ints(1, 0),
        ]);
        assert!(r == expect || r == -&expect);
    }

    #[test]
    fn fixtures() {
        // the constant denominator never vanishes
        let f = make_map(vec![z(), w()], one(), 1).unwrap();
        let a = base_locus(&f).unwrap();
        assert!(a.is_finite() && a.points.is_empty());

        let f = make_map(vec![z(), w()], &one() + &z(), 1).unwrap();
        let a = base_locus(&f).unwrap();
        assert!(a.is_finite() && a.points.is_empty());

        let f = make_map(vec![&z() * &z(), &z() * &w()], w(), 1).unwrap();
        let a = base_locus(&f).unwrap();
        assert!(a.is_finite());
        assert_eq!(a.points.len(), 1);
        assert_eq!(a.points[0].exact, Some(origin()));

        let c = |n| HoloPoly::constant(ComplexRational::from_ints(n, 0));
        let f = make_map(vec![&z() - &c(1), &w() - &c(1)], &c(2) - &(&z() + &w()), 1).unwrap();
        let a = base_locus(&f).unwrap();
        assert_eq!(a.points.len(), 1);
        let one_one = Point::new(ComplexRational::one(), ComplexRational::one());
        assert_eq!(a.points[0].exact, Some(one_one));
    }

    #[test]
    fn curve_of_zeros_is_flagged() {
        let f = make_map(vec![w(), &w() * &z()], &one() + &w(), 1).unwrap();
        // components share nothing: w, wz, 1 + w
        assert!(base_locus(&f).unwrap().points.is_empty());
        let two = HoloPoly::constant(ComplexRational::from_ints(2, 0));
        let f = RationalMap {
            numerators: vec![w(), &w() * &z()],
            denominator: &w() * &two,
            degree: 2,
            certificate: super::super::NormalizationCertificate { lines: 0, hits: 0, warning: false },
        };
        assert!(!base_locus(&f).unwrap().is_finite());
    }

    #[test]
    fn irrational_points_are_approximate() {
        // z^2 = 2, w = z
        let two = HoloPoly::constant(ComplexRational::from_ints(2, 0));
        let f = make_map(vec![&(&z() * &z()) - &two, &w() - &z()], &(&w() * &w()) - &two, 1).unwrap();
        let a = base_locus(&f).unwrap();
        assert_eq!(a.points.len(), 2);
        assert!(a.points.iter().all(|p| p.exact.is_none()));
        for p in &a.points {
            assert!((p.approx.z - p.approx.w).norm() < 1e-12);
            assert!((p.approx.z.norm() - 2f64.sqrt()).abs() < 1e-12);
        }
    }
}
