//! Numerical roots of univariate polynomials (companion-matrix eigenvalues
//! with Newton polishing) and rational reconstruction of approximate roots.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::field::{ComplexRational, Field};
use crate::unipoly::UniPoly;

/// All complex roots of `sum c[i] x^i`, with multiplicity, unordered.
/// Leading zeros are ignored; a constant has no roots.
pub fn roots_c64(c: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = c.to_vec();
    while c.last().is_some_and(|x| *x == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    let n = match c.len() {
        0 | 1 => return Vec::new(),
        l => l - 1,
    };
    // roots at the origin split off exactly
    let zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    let c = &c[zeros..];
    let m = n - zeros;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if m == 0 {
        return out;
    }
    let lead = c[m];
    let comp = DMatrix::from_fn(m, m, |i, j| {
        if i == 0 {
            -c[m - 1 - j] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = comp
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    for z in eig.iter() {
        out.push(polish(c, *z));
    }
    out
}

/// A few Newton steps; keeps the input if Newton does not improve it.
pub fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    let eval = |z: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    };
    for _ in 0..8 {
        let (p, dp) = eval(z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if !next.re.is_finite() || !next.im.is_finite() || eval(next).0.norm() > p.norm() {
            break;
        }
        z = next;
    }
    z
}

/// Distinct roots of an exact polynomial: square-free part first, then
/// eigenvalues.
pub fn distinct_roots<K: Field>(p: &UniPoly<K>) -> Vec<Complex64> {
    match p.squarefree() {
        Ok(q) => roots_c64(&q.coeffs().iter().map(|a| a.to_c64()).collect::<Vec<_>>()),
        Err(_) => Vec::new(),
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued fractions).
pub fn simplest_rational(x: f64, max_den: u64) -> BigRational {
    if !x.is_finite() {
        return BigRational::from_integer(BigInt::from(0));
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return BigRational::from_integer(BigInt::from(x.round() as i128));
    }
    BigRational::new(BigInt::from(h1), BigInt::from(k1))
}

/// Gaussian rational near `z`, componentwise by [`simplest_rational`].
pub fn rationalize(z: Complex64, max_den: u64) -> ComplexRational {
    ComplexRational::new(simplest_rational(z.re, max_den), simplest_rational(z.im, max_den))
}
