//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;

/// `c[0] + c[1] x + ...`, trailing zeros trimmed (zero polynomial is empty).
#[derive(Clone, PartialEq)]
pub struct UniPoly<K: Field> {
    c: Vec<K>,
}

impl<K: Field> UniPoly<K> {
    pub fn new(mut c: Vec<K>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(k: K) -> Self {
        Self::new(vec![k])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::new(vec![K::zero(), K::one()])
    }

    pub fn monomial(k: K, e: usize) -> Self {
        let mut c = vec![K::zero(); e + 1];
        c[e] = k;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> K {
        self.c.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = 0`.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&K> {
        self.c.last()
    }

    pub fn scale(&self, k: &K) -> Self {
        Self::new(self.c.iter().map(|a| a.times(k)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip().expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for a in self.c.iter().rev() {
            acc = acc.times(x).plus(a);
        }
        acc
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in self.c.iter().rev() {
            acc = acc * x + a.to_c64();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.times(&K::from_i64(i as i64)))
                .collect(),
        )
    }

    /// Conjugates the coefficients: `x |-> conj(p(conj x))`.
    pub fn conj(&self) -> Self {
        Self::new(self.c.iter().map(|a| a.conj()).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(a.clone());
        }
        acc
    }

    pub fn map<L: Field, F: Fn(&K) -> L>(&self, f: F) -> UniPoly<L> {
        UniPoly::new(self.c.iter().map(f).collect())
    }

    /// Euclidean division; `Err` on division by zero.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::Domain("division by zero polynomial".into()))?;
        let inv = d.leading().expect("nonzero").recip().expect("nonzero");
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![K::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = rem[i + dd].times(&inv);
            if coef.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                rem[i + j] = rem[i + j].minus(&coef.times(b));
            }
            q[i] = coef;
        }
        rem.truncate(dd);
        Ok((Self::new(q), Self::new(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Domain("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd; `gcd(0, 0)` is an error.
    pub fn gcd(&self, o: &Self) -> Result<Self> {
        if self.is_zero() && o.is_zero() {
            return Err(Error::Domain("gcd(0, 0) is undefined".into()));
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            // keep remainders monic to slow coefficient growth
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Monic gcd of a list, skipping zero entries. `None` if all are zero.
    pub fn gcd_all<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Option<Self>
    where
        K: 'a,
    {
        let mut g: Option<Self> = None;
        for p in items {
            if p.is_zero() {
                continue;
            }
            g = Some(match g {
                None => p.monic(),
                Some(g) => g.gcd(p).expect("nonzero operand"),
            });
            if g.as_ref().is_some_and(|g| g.degree() == Some(0)) {
                break;
            }
        }
        g
    }

    /// Square-free part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("square-free part of zero".into()));
        }
        if self.degree() == Some(0) {
            return Ok(Self::one());
        }
        let g = self.gcd(&self.derivative())?;
        Ok(self.exact_div(&g)?.monic())
    }

    /// Exact square root, if `self = q^2` with `q` having a leading
    /// coefficient produced by `sqrt_lead`.
    pub fn sqrt_with<F: Fn(&K) -> Option<K>>(&self, sqrt_lead: F) -> Option<Self> {
        let n = self.degree()?;
        if n % 2 == 1 {
            return None;
        }
        let m = n / 2;
        let lead = sqrt_lead(self.leading()?)?;
        let two_lead_inv = lead.plus(&lead).recip()?;
        // coefficients of q from the top down
        let mut q = vec![K::zero(); m + 1];
        q[m] = lead;
        for k in (0..m).rev() {
            // coefficient of x^{m+k} in q^2 must equal self.c[m+k]
            let mut s = K::zero();
            for i in (k + 1)..=m {
                let j = m + k - i;
                if j > k && j <= m {
                    s = s.plus(&q[i].times(&q[j]));
                }
            }
            q[k] = self.c[m + k].minus(&s).times(&two_lead_inv);
        }
        let q = Self::new(q);
        if &q * &q == *self {
            Some(q)
        } else {
            None
        }
    }
}

impl<K: Field> fmt::Debug for UniPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match i {
                0 => format!("{a:?}"),
                1 => format!("{a:?}*x"),
                _ => format!("{a:?}*x^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<'a, K: Field> Add<&'a UniPoly<K>> for &'a UniPoly<K> {
    type Output = UniPoly<K>;
    fn add(self, o: &UniPoly<K>) -> UniPoly<K> {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect())
    }
}

impl<'a, K: Field> Sub<&'a UniPoly<K>> for &'a UniPoly<K> {
    type Output = UniPoly<K>;
    fn sub(self, o: &UniPoly<K>) -> UniPoly<K> {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect())
    }
}

impl<'a, K: Field> Mul<&'a UniPoly<K>> for &'a UniPoly<K> {
    type Output = UniPoly<K>;
    fn mul(self, o: &UniPoly<K>) -> UniPoly<K> {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![K::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].plus(&a.times(b));
            }
        }
        UniPoly::new(c)
    }
}

impl<K: Field> Neg for &UniPoly<K> {
    type Output = UniPoly<K>;
    fn neg(self) -> UniPoly<K> {
        UniPoly::new(self.c.iter().map(|a| a.negated()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ComplexRational as Q;

    fn up(v: &[i64]) -> UniPoly<Q> {
        UniPoly::new(v.iter().map(|&x| Q::from_ints(x, 0)).collect())
    }

    #[test]
    fn gcd_example() {
        let g = up(&[-1, 0, 1]).gcd(&up(&[-1, 1])).unwrap();
        assert_eq!(g, up(&[-1, 1]));
        assert!(UniPoly::<Q>::zero().gcd(&UniPoly::zero()).is_err());
    }

    #[test]
    fn division_roundtrip() {
        let a = up(&[3, 0, 2, 5, 1]);
        let b = up(&[1, 2]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree_or_zero() < 1);
    }

    #[test]
    fn squarefree_of_cube() {
        let p = up(&[1, 1]).pow(3);
        assert_eq!(p.squarefree().unwrap(), up(&[1, 1]));
    }

    #[test]
    fn sqrt_exact() {
        let q = up(&[1, 1]).scale(&Q::from_fracs((1, 2), (0, 1)));
        let p = &q * &q;
        let r = p
            .sqrt_with(|l| {
                // 1/4 -> 1/2
                crate::field::rational_sqrt(&l.re).map(Q::real)
            })
            .unwrap();
        assert_eq!(r, q);
        assert!(up(&[1, 0, 2]).sqrt_with(|_| Some(Q::one())).is_none());
    }

    #[test]
    fn compose_shift() {
        // (x+1)^2 composed with (x - 1) is x^2
        let p = up(&[1, 2, 1]);
        assert_eq!(p.compose(&up(&[-1, 1])), up(&[0, 0, 1]));
    }
}
