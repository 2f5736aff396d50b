use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{degree_bound, restrict_on, CRField, RationalMap, Signature, UniRationalMap};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hypersurface::{Hypersurface, Point, Side};
use crate::linalg::{function_field_rank, nullspace, row_degree_sum, solve_rational};
use crate::poly::{HoloPoly, Var};
use crate::rng;
use crate::segre::graph_of;
use crate::unipoly::UniPoly;

/// Rows `V_alpha = (L^alpha F_1, ..., L^alpha F_N)(p0)` as polynomials in
/// `xibar`, with `etabar = conj(phi(xi))` along `Q_p0`. Each row is scaled by
/// the nonzero constant `R(p0)^(alpha + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VMatrix<K: Field> {
    pub rows: Vec<Vec<UniPoly<K>>>,
    pub orders: Vec<usize>,
}

impl<K: Field> VMatrix<K> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Highest `xibar`-degree in each row.
    pub fn row_degrees(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.degree_or_zero()).max().unwrap_or(0))
            .collect()
    }
}

/// Evaluates a polynomial in `z, w, xibar, etabar` at `z = z0, w = w0,
/// etabar = eta_bar(xibar)`, leaving `xibar` free.
fn specialize<K: Field>(p: &HoloPoly, p0: &Point<K>, eta_bar: &UniPoly<K>) -> UniPoly<K> {
    let mut eta_pows = vec![UniPoly::one()];
    let mut acc = UniPoly::zero();
    for (m, c) in p.terms() {
        let d = m.exp(Var::EtaBar) as usize;
        while eta_pows.len() <= d {
            let next = &eta_pows[eta_pows.len() - 1] * eta_bar;
            eta_pows.push(next);
        }
        let k = K::from_gaussian(c)
            .times(&p0.z.pow(m.exp(Var::Z) as u32))
            .times(&p0.w.pow(m.exp(Var::W) as u32));
        let mono = UniPoly::monomial(k, m.exp(Var::XiBar) as usize);
        acc = &acc + &(&mono * &eta_pows[d]);
    }
    acc
}

/// Builds `V_1, V_2, ...` until a row is dependent on the earlier ones over
/// `K(xibar)` or `N` rows are reached.
pub fn v_matrix<K: Field>(f: &RationalMap, h: &Hypersurface, p0: &Point<K>) -> Result<VMatrix<K>> {
    let phi = graph_of(h, p0)?;
    let eta_bar = phi.conj();
    let l = CRField::of(h);
    let den = f.denominator();
    let den_const = den.as_constant().is_some();
    let l_den = l.apply(den);
    let mut current: Vec<HoloPoly> = f.numerators().to_vec();
    let mut rows: Vec<Vec<UniPoly<K>>> = Vec::new();
    let mut orders = Vec::new();
    for alpha in 1..=f.n() {
        current = current
            .iter()
            .map(|p| {
                if den_const {
                    l.apply(p)
                } else {
                    // L(P / R^m) = (L(P) R - m P L(R)) / R^(m+1), m = alpha
                    let m = HoloPoly::constant(crate::field::ComplexRational::from_ints(alpha as i64, 0));
                    &(&l.apply(p) * den) - &(&(p * &m) * &l_den)
                }
            })
            .collect();
        let row: Vec<UniPoly<K>> = current.iter().map(|p| specialize(p, p0, &eta_bar)).collect();
        let mut trial = rows.clone();
        trial.push(row);
        if function_field_rank(&trial) < trial.len() {
            break;
        }
        rows = trial;
        orders.push(alpha);
    }
    Ok(VMatrix { rows, orders })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CramerCertificate {
    /// Rank of the `V_alpha` over the rational functions in `xibar`.
    pub k: usize,
    pub orders: Vec<usize>,
    pub row_degrees: Vec<usize>,
    /// Constant rows added when `k < N - 1`.
    pub completion_vectors: usize,
    pub completion_verified: bool,
    pub attempts: usize,
    /// Degree bound for the Cramer determinants before cancellation.
    pub raw_degree: usize,
    pub reduced_degree: usize,
    pub bound: u64,
    pub within_bound: bool,
    pub matches_restriction: bool,
}

/// Solves the polarized target identity and its `L`-derivatives on
/// `Q_p0` by Cramer's rule, returning `F` restricted to `Q_p0` together
/// with a certificate comparing it to direct substitution.
///
/// `sig` is the Hermitian form of the target; the map must send the surface
/// into `{sum sig_j |Z_j|^2 = 1}` for the reconstruction to agree.
pub fn cramer_reconstruct<K: Field>(
    f: &RationalMap,
    h: &Hypersurface,
    sig: &Signature,
    p0: &Point<K>,
    seed: u64,
) -> Result<(UniRationalMap<K>, CramerCertificate)> {
    let n = f.n();
    if sig.dim() != n {
        return Err(Error::Domain(format!("signature dimension {} != N = {n}", sig.dim())));
    }
    if h.classify_exact(p0)? != Side::On {
        return Err(Error::Domain("base point is not on the surface".into()));
    }
    let f_p0 = f.eval(p0)?;
    let vm = v_matrix(f, h, p0)?;
    let k = vm.rank();
    if k + 1 > n {
        return Err(Error::Degenerate(format!("rank {k} leaves no room for the normalization row")));
    }
    let sign = |j: usize| K::from_i64(sig.sign(j));
    let mut base: Vec<Vec<UniPoly<K>>> = Vec::with_capacity(n);
    let mut rhs: Vec<K> = Vec::with_capacity(n);
    base.push((0..n).map(|j| UniPoly::constant(sign(j).times(&f_p0[j]))).collect());
    rhs.push(K::one());
    for row in &vm.rows {
        base.push(row.iter().enumerate().map(|(j, e)| e.scale(&sign(j))).collect());
        rhs.push(K::zero());
    }
    let missing = n - 1 - k;
    let restricted = restrict_on(f, h, p0)?;
    let mut attempts = 0;
    // numerators, denominator, determinant degree bound, completion verified
    let mut solved: Option<(Vec<UniPoly<K>>, UniPoly<K>, usize, bool)> = None;
    if missing == 0 {
        attempts = 1;
        if let Some((nums, d)) = solve_rational(&base, &rhs)? {
            solved = Some((nums, d, row_degree_sum(&base), true));
        }
    } else {
        // constant vectors annihilating conj(F|Q - F(p0)): conjugates of
        // the null space of the V rows at xibar = conj(z0)
        let at_p0: Vec<Vec<K>> = vm
            .rows
            .iter()
            .map(|r| r.iter().map(|e| e.eval(&p0.z.conj())).collect())
            .collect();
        let null = nullspace(&at_p0, n);
        if null.len() < missing {
            return Err(Error::Degenerate(format!(
                "null space of dimension {} cannot supply {missing} completion rows",
                null.len()
            )));
        }
        let mut rng = rng::stream(seed, "cramer_completion");
        for _ in 0..8 {
            attempts += 1;
            let mut m = base.clone();
            let mut r = rhs.clone();
            let mut verified = true;
            for _ in 0..missing {
                let mut v = vec![K::zero(); n];
                for b in &null {
                    let c = K::from_i64(rng.gen_range(-3..=3));
                    for (vj, bj) in v.iter_mut().zip(b) {
                        *vj = vj.plus(&c.times(bj));
                    }
                }
                let v: Vec<K> = v.iter().map(|x| x.conj()).collect();
                verified &= annihilates(&v, &restricted, &f_p0);
                r.push(v.iter().zip(&f_p0).fold(K::zero(), |a, (x, y)| a.plus(&x.times(&y.conj()))));
                m.push(v.into_iter().map(UniPoly::constant).collect());
            }
            if let Some((nums, d)) = solve_rational(&m, &r)? {
                solved = Some((nums, d, row_degree_sum(&m), verified));
                break;
            }
        }
    }
    let Some((nums, d, raw_degree, verified)) = solved else {
        return Err(Error::Degenerate(format!("singular Cramer system after {attempts} attempts")));
    };
    let conj_solution = UniRationalMap::reduced(nums, d)?;
    let solution = conj_solution.conj();
    let bound = degree_bound(n as i64)?;
    let cert = CramerCertificate {
        k,
        orders: vm.orders.clone(),
        row_degrees: vm.row_degrees(),
        completion_vectors: missing,
        completion_verified: verified,
        attempts,
        raw_degree,
        reduced_degree: solution.degree(),
        bound,
        within_bound: raw_degree as u64 <= bound,
        matches_restriction: solution == restricted,
    };
    Ok((solution, cert))
}

/// `v . conj(F|Q - F(p0))` vanishes identically in `xibar`.
fn annihilates<K: Field>(v: &[K], restricted: &UniRationalMap<K>, f_p0: &[K]) -> bool {
    let den = restricted.denominator().conj();
    let mut acc = UniPoly::zero();
    for ((vj, num), fj) in v.iter().zip(restricted.numerators()).zip(f_p0) {
        let term = &num.conj() - &den.scale(&fj.conj());
        acc = &acc + &term.scale(vj);
    }
    acc.is_zero()
}
