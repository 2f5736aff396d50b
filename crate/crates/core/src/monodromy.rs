//! Numerical continuation of algebraic functions `P(z, w, F) = 0` along
//! closed loops, and the `sqrt(w)` example: a function that is not
//! rational although its restriction to every Segre variety of
//! `|w|^2 = (1 + |z|^2)^2` is.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ComplexRational, Field};
use crate::hypersurface::{Hypersurface, Point};
use crate::poly::{HermPoly, HoloPoly, Var};
use crate::roots::roots_c64;
use crate::segre::graph_of;
use crate::unipoly::UniPoly;

pub const NEWTON_TOL: f64 = 1e-12;
/// Roots closer than this count as collided.
pub const COLLISION: f64 = 10.0 * NEWTON_TOL;
pub const MIN_NODES: usize = 256;
const MAX_NEWTON: usize = 60;

/// A branch of the algebraic function defined by `P(z, w, F) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicFunction {
    defining: HoloPoly,
    /// Coefficients of `F^k` as polynomials in `z, w`.
    by_power: Vec<HoloPoly>,
    base: Point<Complex64>,
    branch_value: Complex64,
}

impl AlgebraicFunction {
    pub fn new(defining: HoloPoly, base: Point<Complex64>, branch_value: Complex64) -> Result<Self> {
        if let Some(v) = defining.vars_used().into_iter().find(|v| ![Var::Z, Var::W, Var::F].contains(v)) {
            return Err(Error::Domain(format!("defining polynomial may only use z, w, F (found {v})")));
        }
        let deg = defining.degree(&[Var::F]) as usize;
        if deg == 0 {
            return Err(Error::Domain("defining polynomial must involve F".into()));
        }
        let mut by_power = vec![HoloPoly::zero(); deg + 1];
        for (k, c) in defining.coefficients_in(Var::F) {
            by_power[k as usize] = c;
        }
        let f = Self {
            defining,
            by_power,
            base,
            branch_value,
        };
        let r = f.residual(&base, branch_value);
        if r >= NEWTON_TOL {
            return Err(Error::Domain(format!("|P(base, value)| = {r:e} is not below {NEWTON_TOL:e}")));
        }
        Ok(f)
    }

    /// `F = sqrt(w)` with value `value` at `(z, w)`.
    pub fn sqrt_w(base: Point<Complex64>, value: Complex64) -> Result<Self> {
        let p = &HoloPoly::var(Var::F).pow(2) - &HoloPoly::var(Var::W);
        Self::new(p, base, value)
    }

    pub fn defining(&self) -> &HoloPoly {
        &self.defining
    }

    pub fn base(&self) -> Point<Complex64> {
        self.base
    }

    pub fn branch_value(&self) -> Complex64 {
        self.branch_value
    }

    fn coeffs_at(&self, p: &Point<Complex64>) -> Vec<Complex64> {
        let at = [(Var::Z, p.z), (Var::W, p.w)];
        self.by_power.iter().map(|c| c.eval_c64(&at)).collect()
    }

    fn residual(&self, p: &Point<Complex64>, v: Complex64) -> f64 {
        horner(&self.coeffs_at(p), v).0.norm()
    }
}

fn horner(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// A discretized closed path; the first and last nodes coincide.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    points: Vec<Point<Complex64>>,
}

impl Loop {
    pub fn new(points: Vec<Point<Complex64>>) -> Result<Self> {
        if points.len() < MIN_NODES {
            return Err(Error::Domain(format!("loop needs at least {MIN_NODES} nodes (got {})", points.len())));
        }
        let (a, b) = (points[0], points[points.len() - 1]);
        if (a.z - b.z).norm() > 1e-12 || (a.w - b.w).norm() > 1e-12 {
            return Err(Error::Domain("loop is not closed".into()));
        }
        Ok(Self { points })
    }

    /// `w = center + radius e^(i t)`, `t` from 0 to `2 pi turns`, at fixed `z`.
    pub fn w_circle(z: Complex64, center: Complex64, radius: f64, nodes: usize, turns: u32) -> Result<Self> {
        let total = nodes * turns as usize;
        let mut pts: Vec<Point<Complex64>> = (0..total)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / nodes as f64;
                Point::new(z, center + Complex64::from_polar(radius, t))
            })
            .collect();
        pts.push(pts[0]);
        Self::new(pts)
    }

    pub fn base(&self) -> Point<Complex64> {
        self.points[0]
    }

    pub fn points(&self) -> &[Point<Complex64>] {
        &self.points
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.points.clone();
        p.reverse();
        Self { points: p }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackReport {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub steps: usize,
    pub max_residual: f64,
    pub final_residual: f64,
    /// Smallest distance between two roots of `P` at any node.
    pub min_root_separation: f64,
}

impl TrackReport {
    pub fn end_value(&self) -> Complex64 {
        Complex64::new(self.end[0], self.end[1])
    }
}

fn newton(c: &[Complex64], mut x: Complex64) -> Option<Complex64> {
    for _ in 0..MAX_NEWTON {
        let (p, dp) = horner(c, x);
        if dp.norm() == 0.0 {
            return None;
        }
        let step = p / dp;
        x -= step;
        if !x.re.is_finite() || !x.im.is_finite() {
            return None;
        }
        if step.norm() <= NEWTON_TOL * (1.0 + x.norm()) {
            return Some(x);
        }
    }
    None
}

/// Continues `f` along `lp` by linear prediction and Newton correction.
/// Fails when Newton diverges, two roots collide, or a step could have
/// jumped to another sheet.
pub fn track_branch(f: &AlgebraicFunction, lp: &Loop) -> Result<TrackReport> {
    let b = lp.base();
    if (b.z - f.base.z).norm() > 1e-12 || (b.w - f.base.w).norm() > 1e-12 {
        return Err(Error::Domain("loop does not start at the base point".into()));
    }
    let mut v = f.branch_value;
    let mut prev: Option<Complex64> = None;
    let mut max_res: f64 = 0.0;
    let mut min_sep = f64::INFINITY;
    for (k, node) in lp.points.iter().enumerate().skip(1) {
        let c = f.coeffs_at(node);
        let guess = prev.map_or(v, |p| v + (v - p));
        let next = newton(&c, guess).ok_or_else(|| Error::RefineLoop(format!("Newton diverged at node {k}")))?;
        let roots = roots_c64(&c);
        for (i, a) in roots.iter().enumerate() {
            for r in &roots[i + 1..] {
                min_sep = min_sep.min((a - r).norm());
            }
        }
        if min_sep < COLLISION {
            return Err(Error::RefineLoop(format!("branches collide at node {k}")));
        }
        // the corrected value must be the sheet nearest the previous value,
        // with a clear gap to the others
        let moved = (next - v).norm();
        let nearest_other = roots
            .iter()
            .filter(|r| (*r - next).norm() > 1e3 * NEWTON_TOL * (1.0 + next.norm()))
            .map(|r| (r - v).norm())
            .fold(f64::INFINITY, f64::min);
        if nearest_other <= 2.0 * moved {
            return Err(Error::RefineLoop(format!("step to node {k} may change sheets")));
        }
        max_res = max_res.max(horner(&c, next).0.norm());
        prev = Some(v);
        v = next;
    }
    let final_residual = f.residual(&b, v);
    if final_residual >= 1e-9 {
        return Err(Error::RefineLoop(format!("final residual {final_residual:e}")));
    }
    Ok(TrackReport {
        start: [f.branch_value.re, f.branch_value.im],
        end: [v.re, v.im],
        steps: lp.points.len() - 1,
        max_residual: max_res,
        final_residual,
        min_root_separation: min_sep,
    })
}

/// `|w|^2 = (1 + |z|^2)^2`.
pub fn squared_sphere() -> Hypersurface {
    let zz = &HoloPoly::var(Var::Z) * &HoloPoly::var(Var::ZBar);
    let inner = &HoloPoly::one() + &zz;
    let rho = &(&HoloPoly::var(Var::W) * &HoloPoly::var(Var::WBar)) - &inner.pow(2);
    Hypersurface::from_rho(HermPoly::new(rho).expect("Hermitian")).expect("valid defining function")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionCheck {
    pub base: [String; 2],
    /// Restriction of `w = g^2` to the Segre variety, as a polynomial in `xi`.
    pub g_squared: String,
    /// Equals `(1 + zbar xi)^2 / wbar`.
    pub matches_expected: bool,
    /// Degree in `xi` of `g` restricted, when `g^2` is a square there.
    pub g_degree: Option<usize>,
}

/// Segre restriction of `g = sqrt(w)` on the squared sphere at `(z, w)`.
pub fn restriction_check(base: &Point<ComplexRational>) -> Result<RestrictionCheck> {
    let h = squared_sphere();
    let phi = graph_of(&h, base)?;
    let wb_inv = base.w.conj().recip().ok_or(Error::GraphUnavailable)?;
    let expected = UniPoly::new(vec![ComplexRational::one(), base.z.conj()]).pow(2).scale(&wb_inv);
    let g = phi.monic().sqrt_with(|_| Some(ComplexRational::one()));
    Ok(RestrictionCheck {
        base: [base.z.to_string(), base.w.to_string()],
        g_squared: format!("{phi:?}"),
        matches_expected: phi == expected,
        g_degree: g.map(|q| q.degree_or_zero()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqrtDemoReport {
    pub branch_swap: bool,
    pub swap_start: [f64; 2],
    pub swap_end: [f64; 2],
    pub double_loop: bool,
    pub double_loop_end: [f64; 2],
    /// `|track(reversed, track(loop)) - start|`.
    pub reversal_error: f64,
    /// Endpoint change when the step is halved.
    pub step_halving_change: f64,
    pub max_residual: f64,
    pub restrictions: Vec<RestrictionCheck>,
    pub segre_restriction_degree: Option<usize>,
    pub passed: bool,
}

/// Branch swap of `sqrt(w)` around `w = 0` on `|w| = 4` from the value 2,
/// the double loop, loop reversal, and the Segre restrictions at `(0, 1)`
/// and `(1, 4)`.
pub fn sqrt_w_demo() -> Result<SqrtDemoReport> {
    let zero = Complex64::new(0.0, 0.0);
    let base = Point::new(zero, Complex64::new(4.0, 0.0));
    let start = Complex64::new(2.0, 0.0);
    let f = AlgebraicFunction::sqrt_w(base, start)?;
    let once = Loop::w_circle(zero, zero, 4.0, 512, 1)?;
    let swap = track_branch(&f, &once)?;
    let twice = track_branch(&f, &Loop::w_circle(zero, zero, 4.0, 512, 2)?)?;
    let back = AlgebraicFunction::sqrt_w(base, swap.end_value())?;
    let rev = track_branch(&back, &once.reversed())?;
    let fine = track_branch(&f, &Loop::w_circle(zero, zero, 4.0, 1024, 1)?)?;

    let q = |re: i64| ComplexRational::from_ints(re, 0);
    let restrictions = vec![
        restriction_check(&Point::new(q(0), q(1)))?,
        restriction_check(&Point::new(q(1), q(4)))?,
    ];
    let swap_ok = (swap.end_value() + start).norm() < 1e-9;
    let double_ok = (twice.end_value() - start).norm() < 1e-9;
    let reversal = (rev.end_value() - start).norm();
    let halving = (fine.end_value() - swap.end_value()).norm();
    let degree = restrictions[1].g_degree;
    let passed = swap_ok
        && double_ok
        && reversal < 1e-9
        && halving < 1e-8
        && restrictions.iter().all(|r| r.matches_expected)
        && restrictions[0].g_degree == Some(0)
        && degree == Some(1);
    Ok(SqrtDemoReport {
        branch_swap: swap_ok,
        swap_start: swap.start,
        swap_end: swap.end,
        double_loop: double_ok,
        double_loop_end: twice.end,
        reversal_error: reversal,
        step_halving_change: halving,
        max_residual: [swap.max_residual, twice.max_residual, rev.max_residual].into_iter().fold(0.0, f64::max),
        restrictions,
        segre_restriction_degree: degree,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sqrt_swaps_sheets_on_unit_circle() {
        let base = Point::new(c(0.0), c(1.0));
        let f = AlgebraicFunction::sqrt_w(base, c(1.0)).unwrap();
        let lp = Loop::w_circle(c(0.0), c(0.0), 1.0, 256, 1).unwrap();
        let r = track_branch(&f, &lp).unwrap();
        assert!((r.end_value() + 1.0).norm() < 1e-9);
        let r2 = track_branch(&f, &Loop::w_circle(c(0.0), c(0.0), 1.0, 256, 2).unwrap()).unwrap();
        assert!((r2.end_value() - 1.0).norm() < 1e-9);
    }

    #[test]
    fn loop_not_enclosing_branch_point_is_trivial() {
        let base = Point::new(c(0.0), c(3.0));
        let f = AlgebraicFunction::sqrt_w(base, c(3f64.sqrt())).unwrap();
        let lp = Loop::w_circle(c(0.0), c(2.0), 1.0, 300, 1).unwrap();
        let r = track_branch(&f, &lp).unwrap();
        assert!((r.end_value() - 3f64.sqrt()).norm() < 1e-9);
    }

    #[test]
    fn constant_function_is_unchanged() {
        let k = HoloPoly::constant(ComplexRational::from_fracs((3, 2), (-1, 1)));
        let p = &HoloPoly::var(Var::F) - &k;
        let base = Point::new(c(0.5), c(1.0));
        let f = AlgebraicFunction::new(p, base, Complex64::new(1.5, -1.0)).unwrap();
        let pts: Vec<Point<Complex64>> = (0..=400)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 400.0;
                Point::new(c(0.5) + Complex64::from_polar(0.3, t) - 0.3, c(1.0) + Complex64::new(0.0, t.sin()))
            })
            .collect();
        let lp = Loop::new(pts).unwrap();
        let r = track_branch(&f, &lp).unwrap();
        assert!((r.end_value() - Complex64::new(1.5, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn input_validation() {
        let base = Point::new(c(0.0), c(4.0));
        assert!(AlgebraicFunction::sqrt_w(base, c(2.1)).is_err());
        assert!(AlgebraicFunction::new(HoloPoly::var(Var::W), base, c(0.0)).is_err());
        assert!(Loop::w_circle(c(0.0), c(0.0), 1.0, 100, 1).is_err());
        let f = AlgebraicFunction::sqrt_w(base, c(2.0)).unwrap();
        let lp = Loop::w_circle(c(0.0), c(0.0), 1.0, 256, 1).unwrap();
        assert!(track_branch(&f, &lp).is_err());
    }

    #[test]
    fn coarse_loop_near_branch_point_is_refused() {
        // a loop passing 1e-14 from the branch point
        let w0 = 2.0 - 1e-14;
        let base = Point::new(c(0.0), c(w0));
        let f = AlgebraicFunction::sqrt_w(base, c(w0.sqrt())).unwrap();
        let lp = Loop::w_circle(c(0.0), c(1.0 - 1e-14), 1.0, 256, 1).unwrap();
        assert!(matches!(track_branch(&f, &lp), Err(Error::RefineLoop(_))));
    }

    #[test]
    fn demo_passes() {
        let r = sqrt_w_demo().unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.segre_restriction_degree, Some(1));
        assert!((r.swap_end[0] + 2.0).abs() < 1e-9);
        assert_eq!(r.restrictions[1].g_squared, restriction_check(&Point::new(
            ComplexRational::from_ints(1, 0),
            ComplexRational::from_ints(4, 0),
        ))
        .unwrap()
        .g_squared);
    }

    #[test]
    fn restriction_is_a_square_at_generic_base() {
        // (1 + zbar xi)^2 / wbar is always a square up to its leading constant
        let p = Point::new(ComplexRational::from_fracs((1, 3), (2, 5)), ComplexRational::from_ints(-2, 7));
        let r = restriction_check(&p).unwrap();
        assert!(r.matches_expected);
        assert_eq!(r.g_degree, Some(1));
    }
}
