//! Sparse multivariate polynomials with exact coefficients.
//!
//! A [`Poly`] is a map from [`Monomial`] to coefficient, kept free of zero
//! coefficients and ordered graded-lexicographically so iteration (and
//! therefore serialization) is deterministic. [`HoloPoly`] is the Gaussian
//! rational instance; [`HermPoly`] wraps one in the real variables
//! `(z, w, zbar, wbar)` and enforces Hermitian symmetry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, ComplexRational, Field};
use crate::unipoly::UniPoly;

pub const NVARS: usize = 15;

/// Every variable the toolkit knows about.
///
/// `Xi`/`Eta` name points of a Segre variety (or the holomorphic slots of a
/// complexification), `XiBar`/`EtaBar` the anti-holomorphic ones. `F` is the
/// unknown of an algebraic function. The remaining ids are real symbols:
/// square-root symbols for quadratic-extension checks and the three family
/// parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Z = 0,
    W,
    ZBar,
    WBar,
    Xi,
    Eta,
    XiBar,
    EtaBar,
    F,
    S1,
    S2,
    S3,
    Eps0,
    C,
    Eps,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::Z,
        Var::W,
        Var::ZBar,
        Var::WBar,
        Var::Xi,
        Var::Eta,
        Var::XiBar,
        Var::EtaBar,
        Var::F,
        Var::S1,
        Var::S2,
        Var::S3,
        Var::Eps0,
        Var::C,
        Var::Eps,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::W => "w",
            Var::ZBar => "zbar",
            Var::WBar => "wbar",
            Var::Xi => "xi",
            Var::Eta => "eta",
            Var::XiBar => "xibar",
            Var::EtaBar => "etabar",
            Var::F => "f",
            Var::S1 => "s1",
            Var::S2 => "s2",
            Var::S3 => "s3",
            Var::Eps0 => "eps0",
            Var::C => "c",
            Var::Eps => "eps",
        }
    }

    pub fn from_name(s: &str) -> Result<Var> {
        Var::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown variable {s:?}")))
    }

    /// Partner under complex conjugation; real symbols map to themselves.
    pub fn conj(self) -> Var {
        match self {
            Var::Z => Var::ZBar,
            Var::ZBar => Var::Z,
            Var::W => Var::WBar,
            Var::WBar => Var::W,
            Var::Xi => Var::XiBar,
            Var::XiBar => Var::Xi,
            Var::Eta => Var::EtaBar,
            Var::EtaBar => Var::Eta,
            v => v,
        }
    }

    pub fn is_real_symbol(self) -> bool {
        self.conj() == self && self != Var::F
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector. Zero exponents are implicit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; NVARS],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var, e: u16) -> Self {
        let mut m = Self::one();
        m.exps[v.index()] = e;
        m
    }

    pub fn from_pairs(pairs: &[(Var, u16)]) -> Self {
        let mut m = Self::one();
        for &(v, e) in pairs {
            m.exps[v.index()] += e;
        }
        m
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.exps[v.index()]
    }

    pub fn with_exp(mut self, v: Var, e: u16) -> Self {
        self.exps[v.index()] = e;
        self
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, vars: &[Var]) -> u32 {
        vars.iter().map(|v| self.exp(*v) as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(o.exps.iter()) {
            *a += *b;
        }
        m
    }

    pub fn conj(&self) -> Monomial {
        let mut m = Monomial::one();
        for v in Var::ALL {
            m.exps[v.conj().index()] = self.exp(v);
        }
        m
    }

    /// Non-zero `(var, exponent)` pairs in variable order.
    pub fn pairs(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        Var::ALL
            .iter()
            .filter(|v| self.exp(**v) > 0)
            .map(|v| (*v, self.exp(*v)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total_degree()
            .cmp(&o.total_degree())
            .then_with(|| o.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.pairs() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse polynomial over an exact field.
#[derive(Clone, PartialEq)]
pub struct Poly<K: Field> {
    terms: BTreeMap<Monomial, K>,
}

/// Polynomial with Gaussian-rational coefficients.
pub type HoloPoly = Poly<ComplexRational>;

impl<K: Field> Default for Poly<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Field> Poly<K> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: K) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), K::one())
    }

    pub fn term(m: Monomial, c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, K)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                let s = cur.plus(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn constant_term(&self) -> K {
        self.coeff(&Monomial::one())
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Max over stored monomials of the total degree in `vars`.
    pub fn degree(&self, vars: &[Var]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(vars)).max().unwrap_or(0)
    }

    pub fn vars_used(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .copied()
            .filter(|v| self.terms.keys().any(|m| m.exp(*v) > 0))
            .collect()
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.times(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a.clone())).collect(),
        }
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

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            out.add_term(m.with_exp(v, e - 1), c.times(&K::from_i64(e as i64)));
        }
        out
    }

    /// Swaps every variable with its conjugate partner and conjugates
    /// coefficients. Real symbols are left alone.
    pub fn conjugate(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.conj(), c.conj())))
    }

    /// Exact composition `p(var := expr)`.
    pub fn substitute(&self, var: Var, expr: &Poly<K>) -> Self {
        let mut by_power: BTreeMap<u16, Poly<K>> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_power
                .entry(m.exp(var))
                .or_default()
                .add_term(m.with_exp(var, 0), c.clone());
        }
        let mut out = Self::zero();
        let mut pow = Self::one();
        let mut cur = 0u16;
        for (e, rest) in by_power {
            while cur < e {
                pow = &pow * expr;
                cur += 1;
            }
            out = &out + &(&rest * &pow);
        }
        out
    }

    /// Simultaneous substitution: every variable with an entry in `subs`
    /// is replaced, all others are kept.
    pub fn compose(&self, subs: &[(Var, Poly<K>)]) -> Self {
        let mut powers: Vec<Vec<Poly<K>>> = vec![Vec::new(); subs.len()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut keep = *m;
            let mut t = Self::one();
            for (i, (v, e)) in subs.iter().enumerate() {
                let k = m.exp(*v) as usize;
                keep = keep.with_exp(*v, 0);
                if k == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(Self::one());
                }
                while cache.len() <= k {
                    let next = &cache[cache.len() - 1] * e;
                    cache.push(next);
                }
                t = &t * &cache[k];
            }
            out = &out + &t.mul_monomial(&keep).scale(c);
        }
        out
    }

    /// Evaluates at field values; variables not covered by `value` are an
    /// error.
    pub fn eval_with<F: Fn(Var) -> Option<K>>(&self, value: F) -> Result<K> {
        let mut vals: [Option<K>; NVARS] = Default::default();
        let mut acc = K::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                let slot = &mut vals[v.index()];
                if slot.is_none() {
                    *slot = Some(value(v).ok_or_else(|| {
                        Error::Domain(format!("no value supplied for variable {v}"))
                    })?);
                }
                t = t.times(&slot.as_ref().expect("set above").pow(e as u32));
            }
            acc = acc.plus(&t);
        }
        Ok(acc)
    }

    /// Evaluates at an explicit assignment list.
    pub fn eval(&self, point: &[(Var, K)]) -> Result<K> {
        self.eval_with(|v| point.iter().find(|(w, _)| *w == v).map(|(_, x)| x.clone()))
    }

    /// Floating evaluation; meant for cross-checks, not the exact layer.
    pub fn eval_c64(&self, point: &[(Var, Complex64)]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_c64();
            for (v, e) in m.pairs() {
                let x = point
                    .iter()
                    .find(|(w, _)| *w == v)
                    .map(|(_, x)| *x)
                    .unwrap_or_else(|| panic!("no value for {v}"));
                t *= x.powu(e as u32);
            }
            acc += t;
        }
        acc
    }

    /// Rewrites `var^2 -> square`, so the result is at most linear in `var`.
    /// This is arithmetic in `K[..][var]/(var^2 - square)`; `square` must not
    /// mention `var`.
    pub fn reduce_square(&self, var: Var, square: &Poly<K>) -> Self {
        let mut sq_pows: Vec<Poly<K>> = vec![Self::one()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            let half = (e / 2) as usize;
            while sq_pows.len() <= half {
                let next = &sq_pows[sq_pows.len() - 1] * square;
                sq_pows.push(next);
            }
            let base = Self::term(m.with_exp(var, e % 2), c.clone());
            out = &out + &(&base * &sq_pows[half]);
        }
        out
    }

    pub fn map_coeffs<L: Field, F: Fn(&K) -> L>(&self, f: F) -> Poly<L> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Dense univariate view, if only `v` occurs.
    pub fn to_unipoly(&self, v: Var) -> Option<UniPoly<K>> {
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            if m.with_exp(v, 0) != Monomial::one() {
                return None;
            }
            let e = m.exp(v) as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, K::zero());
            }
            coeffs[e] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn from_unipoly(v: Var, u: &UniPoly<K>) -> Self {
        Self::from_terms(
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(e, c)| (Monomial::var(v, e as u16), c.clone())),
        )
    }

    /// Collects coefficients of powers of `v`: `p = sum_e c_e * v^e`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u16, Poly<K>> {
        let mut out: BTreeMap<u16, Poly<K>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(v))
                .or_default()
                .add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c:?}*{m:?}")?;
        }
        Ok(())
    }
}

impl<'a, K: Field> Add<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn add(self, o: &Poly<K>) -> Poly<K> {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, K: Field> Sub<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn sub(self, o: &Poly<K>) -> Poly<K> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.negated());
        }
        out
    }
}

impl<'a, K: Field> Mul<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn mul(self, o: &Poly<K>) -> Poly<K> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.times(c2));
            }
        }
        out
    }
}

impl<K: Field> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.negated())).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<K: Field> $tr for Poly<K> {
            type Output = Poly<K>;
            fn $f(self, o: Poly<K>) -> Poly<K> {
                (&self).$f(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<K: Field> Neg for Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        -&self
    }
}

impl HoloPoly {
    /// Shorthand for a rational-coefficient constant.
    pub fn rational(r: &BigRational) -> HoloPoly {
        HoloPoly::constant(ComplexRational::real(r.clone()))
    }
}

/// Real-valued polynomial `sum c_{ab} Z^a Zbar^b` with `c_{ab} = conj(c_{ba})`.
///
/// Stored as a polynomial in `z, w, zbar, wbar` (plus optional real
/// symbols for parameters). Hermitian symmetry is exactly the statement
/// that [`Poly::conjugate`] leaves the polynomial unchanged.
#[derive(Clone, PartialEq, Debug)]
pub struct HermPoly {
    poly: HoloPoly,
}

const HERM_ALLOWED: [Var; 4] = [Var::Z, Var::W, Var::ZBar, Var::WBar];

impl HermPoly {
    pub fn new(poly: HoloPoly) -> Result<Self> {
        if let Some(v) = poly
            .vars_used()
            .into_iter()
            .find(|v| !HERM_ALLOWED.contains(v) && !v.is_real_symbol())
        {
            return Err(Error::NotHermitian(format!(
                "variable {v} is not allowed in a real defining function"
            )));
        }
        if poly.conjugate() != poly {
            let diff = &poly - &poly.conjugate();
            let (m, c) = diff.terms().next().expect("nonzero difference");
            return Err(Error::NotHermitian(format!(
                "coefficient mismatch at {m:?} (difference {c})"
            )));
        }
        Ok(Self { poly })
    }

    /// `|g|^2 = g * conj(g)` for a holomorphic polynomial in `z, w`.
    pub fn abs_sqr(g: &HoloPoly) -> Self {
        Self {
            poly: g * &g.conjugate(),
        }
    }

    pub fn constant(r: &BigRational) -> Self {
        Self {
            poly: HoloPoly::rational(r),
        }
    }

    pub fn poly(&self) -> &HoloPoly {
        &self.poly
    }

    pub fn into_poly(self) -> HoloPoly {
        self.poly
    }

    /// `c_{ab}` for holomorphic exponents `alpha = (a_z, a_w)` and
    /// anti-holomorphic exponents `beta = (b_z, b_w)`.
    pub fn coeff(&self, alpha: [u16; 2], beta: [u16; 2]) -> ComplexRational {
        self.poly.coeff(&Monomial::from_pairs(&[
            (Var::Z, alpha[0]),
            (Var::W, alpha[1]),
            (Var::ZBar, beta[0]),
            (Var::WBar, beta[1]),
        ]))
    }

    pub fn scale_real(&self, r: &BigRational) -> Self {
        Self {
            poly: self.poly.scale(&ComplexRational::real(r.clone())),
        }
    }

    /// Scaling by a non-real constant breaks Hermitian symmetry.
    pub fn scale(&self, c: &ComplexRational) -> Result<Self> {
        if !c.is_real_exact() {
            return Err(Error::NotHermitian(format!("scaling by non-real {c}")));
        }
        Ok(self.scale_real(&c.re))
    }

    /// Replaces `zbar, wbar` by the independent variables `xibar, etabar`.
    pub fn complexify(&self) -> HoloPoly {
        self.poly.compose(&[
            (Var::ZBar, HoloPoly::var(Var::XiBar)),
            (Var::WBar, HoloPoly::var(Var::EtaBar)),
        ])
    }

    /// Inverse of [`HermPoly::complexify`]: sets `xibar := zbar`,
    /// `etabar := wbar` and checks the result is Hermitian.
    pub fn restrict_diagonal(p: &HoloPoly) -> Result<Self> {
        Self::new(p.compose(&[
            (Var::XiBar, HoloPoly::var(Var::ZBar)),
            (Var::EtaBar, HoloPoly::var(Var::WBar)),
        ]))
    }

    /// Value at `(z, w)` with the barred slots set to conjugates.
    pub fn eval_at<K: Field>(&self, z: &K, w: &K) -> Result<K> {
        let (zb, wb) = (z.conj(), w.conj());
        self.poly.map_coeffs(K::from_gaussian).eval_with(|v| match v {
            Var::Z => Some(z.clone()),
            Var::W => Some(w.clone()),
            Var::ZBar => Some(zb.clone()),
            Var::WBar => Some(wb.clone()),
            _ => None,
        })
    }
}

impl<'a> Add<&'a HermPoly> for &'a HermPoly {
    type Output = HermPoly;
    fn add(self, o: &HermPoly) -> HermPoly {
        HermPoly {
            poly: &self.poly + &o.poly,
        }
    }
}

impl<'a> Sub<&'a HermPoly> for &'a HermPoly {
    type Output = HermPoly;
    fn sub(self, o: &HermPoly) -> HermPoly {
        HermPoly {
            poly: &self.poly - &o.poly,
        }
    }
}

impl<'a> Mul<&'a HermPoly> for &'a HermPoly {
    type Output = HermPoly;
    fn mul(self, o: &HermPoly) -> HermPoly {
        HermPoly {
            poly: &self.poly * &o.poly,
        }
    }
}

/// `{"terms": [{"exps": {"z": 1}, "re": "p/q", "im": "p/q"}]}`
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermJson {
    pub exps: BTreeMap<String, u16>,
    pub re: String,
    pub im: String,
}

impl From<&HoloPoly> for PolyJson {
    fn from(p: &HoloPoly) -> Self {
        PolyJson {
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    exps: m.pairs().map(|(v, e)| (v.name().to_string(), e)).collect(),
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for HoloPoly {
    type Error = Error;
    fn try_from(j: &PolyJson) -> Result<HoloPoly> {
        let mut p = HoloPoly::zero();
        for t in &j.terms {
            let mut m = Monomial::one();
            for (name, e) in &t.exps {
                let v = Var::from_name(name)?;
                m = m.with_exp(v, m.exp(v) + e);
            }
            let c = ComplexRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            p.add_term(m, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    fn z() -> HoloPoly {
        HoloPoly::var(Var::Z)
    }
    fn w() -> HoloPoly {
        HoloPoly::var(Var::W)
    }

    #[test]
    fn cancellation() {
        let a = &z() + &w();
        let b = &z() - &w();
        assert_eq!(&a + &b, z().scale(&ComplexRational::from_ints(2, 0)));
    }

    #[test]
    fn hermitian_product() {
        let zz = HermPoly::abs_sqr(&z());
        let z4 = &zz * &zz;
        assert_eq!(z4.coeff([2, 0], [2, 0]), ComplexRational::one());
        assert_eq!(z4.poly().len(), 1);
    }

    #[test]
    fn substitution_examples() {
        let xi = HoloPoly::var(Var::Xi);
        let shifted = &xi + &HoloPoly::one();
        let p = w().pow(2).substitute(Var::W, &shifted);
        let expect = &(&xi.pow(2) + &xi.scale(&ComplexRational::from_ints(2, 0))) + &HoloPoly::one();
        assert_eq!(p, expect);
        assert_eq!((&z() * &w()).substitute(Var::W, &HoloPoly::one()), z());
    }

    #[test]
    fn conjugate_i_z() {
        let p = z().scale(&ComplexRational::i());
        let q = HoloPoly::var(Var::ZBar).scale(&ComplexRational::from_ints(0, -1));
        assert_eq!(p.conjugate(), q);
    }

    #[test]
    fn complexify_w_abs() {
        let rho = &HermPoly::abs_sqr(&w()) - &HermPoly::constant(&int(1));
        let expect = &(&w() * &HoloPoly::var(Var::EtaBar)) - &HoloPoly::one();
        assert_eq!(rho.complexify(), expect);
        assert_eq!(HermPoly::restrict_diagonal(&rho.complexify()).unwrap(), rho);
    }

    #[test]
    fn complexify_rejects_non_hermitian() {
        let p = &z() * &HoloPoly::var(Var::ZBar).scale(&ComplexRational::i());
        assert!(matches!(HermPoly::new(p), Err(Error::NotHermitian(_))));
        let rho = HermPoly::abs_sqr(&z());
        assert!(rho.scale(&ComplexRational::i()).is_err());
        assert!(rho.scale(&ComplexRational::from_ints(3, 0)).is_ok());
    }

    #[test]
    fn degree_restricted() {
        let p = z().pow(5) * HoloPoly::var(Var::XiBar).pow(5);
        assert_eq!(p.degree(&[Var::Z]), 5);
        assert_eq!(p.total_degree(), 10);
    }

    #[test]
    fn reduce_square_rule() {
        // (1 + s)^3 with s^2 = 2  ->  7 + 5 s
        let s = HoloPoly::var(Var::S1);
        let p = (&HoloPoly::one() + &s).pow(3);
        let r = p.reduce_square(Var::S1, &HoloPoly::rational(&int(2)));
        let expect = &HoloPoly::rational(&int(7)) + &s.scale(&ComplexRational::from_ints(5, 0));
        assert_eq!(r, expect);
    }

    #[test]
    fn json_shape() {
        let p = &z().scale(&ComplexRational::from_fracs((1, 2), (0, 1))) + &HoloPoly::one();
        let j = PolyJson::from(&p);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"terms":[{"exps":{},"re":"1/1","im":"0/1"},{"exps":{"z":1},"re":"1/2","im":"0/1"}]}"#
        );
        let back = HoloPoly::try_from(&j).unwrap();
        assert_eq!(back, p);
        let bad = PolyJson {
            terms: vec![TermJson {
                exps: [("q".to_string(), 1)].into_iter().collect(),
                re: "1".into(),
                im: "0".into(),
            }],
        };
        assert!(HoloPoly::try_from(&bad).is_err());
    }
}
