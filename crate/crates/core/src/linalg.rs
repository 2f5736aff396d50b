//! Exact linear algebra: fraction-free elimination over `K[x]` and plain
//! Gaussian elimination over `K`.

use crate::error::Result;
use crate::field::Field;
use crate::unipoly::UniPoly;

/// Fraction-free (Bareiss) forward elimination on a rectangular matrix over
/// `K[x]`. Returns the rank and the pivot columns. Every division is exact,
/// so no rational functions ever appear.
pub fn poly_rank<K: Field>(rows: &[Vec<UniPoly<K>>]) -> Result<(usize, Vec<usize>)> {
    let mut m: Vec<Vec<UniPoly<K>>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut prev = UniPoly::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| m[i][col].degree_or_zero())
        else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..nrows {
            for j in (col + 1)..ncols {
                let t = &(&m[r][col] * &m[i][j]) - &(&m[i][col] * &m[r][j]);
                m[i][j] = t.exact_div(&prev)?;
            }
            m[i][col] = UniPoly::zero();
        }
        prev = m[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    Ok((r, pivots))
}

/// Determinant of a square matrix over `K[x]` by Bareiss elimination.
pub fn poly_det<K: Field>(mat: &[Vec<UniPoly<K>>]) -> Result<UniPoly<K>> {
    let n = mat.len();
    assert!(mat.iter().all(|r| r.len() == n), "square matrix required");
    if n == 0 {
        return Ok(UniPoly::one());
    }
    let mut m: Vec<Vec<UniPoly<K>>> = mat.to_vec();
    let mut prev = UniPoly::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n)
            .filter(|&i| !m[i][k].is_zero())
            .min_by_key(|&i| m[i][k].degree_or_zero())
        else {
            return Ok(UniPoly::zero());
        };
        if p != k {
            m.swap(k, p);
            negate = !negate;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.exact_div(&prev)?;
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

/// Reduced row echelon form over `K`; returns (rref rows, pivot columns).
pub fn rref<K: Field>(rows: &[Vec<K>]) -> (Vec<Vec<K>>, Vec<usize>) {
    let mut m: Vec<Vec<K>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip().expect("nonzero pivot");
        for j in col..ncols {
            m[r][j] = m[r][j].times(&inv);
        }
        for i in 0..nrows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..ncols {
                    let t = f.times(&m[r][j]);
                    m[i][j] = m[i][j].minus(&t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<K: Field>(rows: &[Vec<K>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{v : rows . v = 0}`.
pub fn nullspace<K: Field>(rows: &[Vec<K>], ncols: usize) -> Vec<Vec<K>> {
    let (r, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(); ncols];
            v[f] = K::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = row[f].negated();
            }
            v
        })
        .collect()
}

/// `n` distinct Gaussian integers of small modulus, ordered by modulus.
pub fn sample_points<K: Field>(n: usize) -> Vec<K> {
    let mut pts: Vec<(i64, i64)> = Vec::new();
    let mut r = 0i64;
    while pts.len() < n {
        let mut ring: Vec<(i64, i64)> = (-r..=r)
            .flat_map(|a| (-r..=r).map(move |b| (a, b)))
            .filter(|(a, b)| a.abs().max(b.abs()) == r)
            .collect();
        ring.sort_by_key(|(a, b)| (a * a + b * b, *a, *b));
        pts.extend(ring);
        r += 1;
    }
    pts.truncate(n);
    pts.into_iter()
        .map(|(a, b)| K::from_gaussian(&crate::field::ComplexRational::from_ints(a, b)))
        .collect()
}

pub fn eval_matrix<K: Field>(m: &[Vec<UniPoly<K>>], x: &K) -> Vec<Vec<K>> {
    m.iter().map(|r| r.iter().map(|e| e.eval(x)).collect()).collect()
}

/// Sum over rows of the largest entry degree; bounds the degree of every minor.
pub fn row_degree_sum<K: Field>(m: &[Vec<UniPoly<K>>]) -> usize {
    m.iter()
        .map(|r| r.iter().map(|e| e.degree_or_zero()).max().unwrap_or(0))
        .sum()
}

/// Rank over the rational functions `K(x)`: the largest rank of `m(x)` over
/// `D + 1` sample points, `D` = [`row_degree_sum`]. A nonzero minor has at
/// most `D` roots, so some sample point sees it.
pub fn function_field_rank<K: Field>(m: &[Vec<UniPoly<K>>]) -> usize {
    let full = m.len().min(m.first().map_or(0, |r| r.len()));
    let mut best = 0;
    for x in sample_points::<K>(row_degree_sum(m) + 1) {
        best = best.max(rank(&eval_matrix(m, &x)));
        if best == full {
            break;
        }
    }
    best
}

/// Determinant of a square matrix over `K` by Gaussian elimination.
pub fn det<K: Field>(mut m: Vec<Vec<K>>) -> K {
    let n = m.len();
    let mut acc = K::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return K::zero();
        };
        if p != k {
            m.swap(k, p);
            acc = acc.negated();
        }
        acc = acc.times(&m[k][k]);
        let inv = m[k][k].recip().expect("nonzero pivot");
        for i in (k + 1)..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].times(&inv);
            for j in (k + 1)..n {
                let t = f.times(&m[k][j]);
                m[i][j] = m[i][j].minus(&t);
            }
        }
    }
    acc
}

/// `(det m, m^-1 rhs)` for nonsingular `m`.
fn solve_with_det<K: Field>(mut m: Vec<Vec<K>>, rhs: &[K]) -> Option<(K, Vec<K>)> {
    let n = m.len();
    for (row, r) in m.iter_mut().zip(rhs) {
        row.push(r.clone());
    }
    let mut d = K::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        if p != k {
            m.swap(k, p);
            d = d.negated();
        }
        d = d.times(&m[k][k]);
        let inv = m[k][k].recip().expect("nonzero pivot");
        for j in k..=n {
            m[k][j] = m[k][j].times(&inv);
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in k..=n {
                let t = f.times(&m[k][j]);
                m[i][j] = m[i][j].minus(&t);
            }
        }
    }
    Some((d, m.into_iter().map(|r| r[n].clone()).collect()))
}

/// Newton interpolation through `(xs[i], ys[i])` at distinct nodes.
pub fn interpolate<K: Field>(xs: &[K], ys: &[K]) -> UniPoly<K> {
    let n = xs.len();
    let mut dd: Vec<K> = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            let den = xs[i].minus(&xs[i - k]).recip().expect("distinct nodes");
            dd[i] = dd[i].minus(&dd[i - 1]).times(&den);
        }
    }
    let mut p = UniPoly::zero();
    for k in (0..n).rev() {
        let lin = UniPoly::new(vec![xs[k].negated(), K::one()]);
        p = &(&p * &lin) + &UniPoly::constant(dd[k].clone());
    }
    p
}

/// `det m(x)` and `det m(x) * (m(x)^-1 rhs)_j` for every `j`; the latter are
/// the determinants of `m(x)` with column `j` replaced by `rhs`.
fn cramer_values<K: Field>(m: &[Vec<UniPoly<K>>], rhs: &[K], x: &K) -> (K, Vec<K>) {
    let mx = eval_matrix(m, x);
    match solve_with_det(mx.clone(), rhs) {
        Some((dx, y)) => {
            let nums = y.iter().map(|yj| dx.times(yj)).collect();
            (dx, nums)
        }
        None => {
            let nums = (0..m.len())
                .map(|j| {
                    let mut mj = mx.clone();
                    for (row, r) in mj.iter_mut().zip(rhs) {
                        row[j] = r.clone();
                    }
                    det(mj)
                })
                .collect();
            (K::zero(), nums)
        }
    }
}

/// `p / q` with `deg p, deg q <= e` agreeing with `ys` at the `2e + 1` nodes.
fn rational_fit<K: Field>(xs: &[K], ys: &[K], e: usize) -> Option<(UniPoly<K>, UniPoly<K>)> {
    let rows: Vec<Vec<K>> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let pows: Vec<K> = (0..=e as u32).map(|k| x.pow(k)).collect();
            pows.iter()
                .cloned()
                .chain(pows.iter().map(|p| p.times(y).negated()))
                .collect()
        })
        .collect();
    let v = nullspace(&rows, 2 * e + 2).into_iter().next()?;
    let p = UniPoly::new(v[..=e].to_vec());
    let q = UniPoly::new(v[e + 1..].to_vec());
    (!q.is_zero()).then_some((p, q))
}

/// Determinants of `m` and of `m` with column `j` replaced by `rhs`, sampled
/// at enough points to pin down polynomials of degree [`row_degree_sum`].
pub struct CramerSamples<K: Field> {
    m: Vec<Vec<UniPoly<K>>>,
    rhs: Vec<K>,
    pub xs: Vec<K>,
    pub det: Vec<K>,
    pub nums: Vec<Vec<K>>,
}

impl<K: Field> CramerSamples<K> {
    pub fn new(m: &[Vec<UniPoly<K>>], rhs: &[K]) -> Self {
        let mut s = Self {
            m: m.to_vec(),
            rhs: rhs.to_vec(),
            xs: Vec::new(),
            det: Vec::new(),
            nums: vec![Vec::new(); m.len()],
        };
        s.extend_to(row_degree_sum(m) + 1);
        s
    }

    pub fn degree_bound(&self) -> usize {
        row_degree_sum(&self.m)
    }

    fn extend_to(&mut self, count: usize) {
        if count <= self.xs.len() {
            return;
        }
        let pts = sample_points::<K>(count);
        for x in &pts[self.xs.len()..] {
            let (d, nums) = cramer_values(&self.m, &self.rhs, x);
            self.det.push(d);
            for (col, v) in self.nums.iter_mut().zip(nums) {
                col.push(v);
            }
        }
        self.xs = pts;
    }

    /// `det m` vanishes identically.
    pub fn singular(&self) -> bool {
        self.det.iter().all(|d| d.is_zero())
    }

    /// Component `j` of `m^-1 rhs` as `p / q` of lowest fitting degree. The
    /// identity `p det = q num_j` has degree at most `D + e` and is checked
    /// at `D + e + 1` points, so it holds in `K[x]`.
    fn component(&mut self, j: usize) -> (UniPoly<K>, UniPoly<K>) {
        let bound = self.degree_bound();
        for e in 0..=bound {
            let need = 2 * e + 1;
            while self.det.iter().filter(|d| !d.is_zero()).count() < need {
                let next = self.xs.len() + need;
                self.extend_to(next);
            }
            let (fx, fy): (Vec<K>, Vec<K>) = self
                .xs
                .iter()
                .zip(&self.det)
                .zip(&self.nums[j])
                .filter(|((_, d), _)| !d.is_zero())
                .take(need)
                .map(|((x, d), n)| (x.clone(), n.times(&d.recip().expect("nonzero"))))
                .unzip();
            let Some((p, q)) = rational_fit(&fx, &fy, e) else {
                continue;
            };
            self.extend_to(bound + e + 1);
            let ok = self
                .xs
                .iter()
                .zip(&self.det)
                .zip(&self.nums[j])
                .all(|((x, d), n)| p.eval(x).times(d) == q.eval(x).times(n));
            if ok {
                return (p, q);
            }
        }
        unreachable!("a fit of degree D always verifies")
    }
}

/// `m^-1 rhs` over `K(x)` as numerators over a common denominator, with each
/// component already in lowest terms; `None` when `det m` vanishes.
pub fn solve_rational<K: Field>(m: &[Vec<UniPoly<K>>], rhs: &[K]) -> Result<Option<(Vec<UniPoly<K>>, UniPoly<K>)>> {
    let mut s = CramerSamples::new(m, rhs);
    if s.singular() {
        return Ok(None);
    }
    let parts: Vec<(UniPoly<K>, UniPoly<K>)> = (0..m.len()).map(|j| s.component(j)).collect();
    let mut den = UniPoly::one();
    for (_, q) in &parts {
        let g = den.gcd(q)?;
        den = &den * &q.exact_div(&g)?;
    }
    let nums = parts
        .iter()
        .map(|(p, q)| Ok(p * &den.exact_div(q)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((nums, den)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ComplexRational as Q;

    fn c(n: i64) -> Q {
        Q::from_ints(n, 0)
    }

    fn up(v: &[i64]) -> UniPoly<Q> {
        UniPoly::new(v.iter().map(|&x| c(x)).collect())
    }

    /// Leibniz expansion, used as an independent oracle for Bareiss.
    fn leibniz(m: &[Vec<UniPoly<Q>>]) -> UniPoly<Q> {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = UniPoly::zero();
        for j in 0..n {
            let minor: Vec<Vec<UniPoly<Q>>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &m[0][j] * &leibniz(&minor);
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![
            vec![up(&[0, 1]), up(&[2]), up(&[1, 0, 1])],
            vec![up(&[1]), up(&[0, 0, 3]), up(&[4, 1])],
            vec![up(&[0]), up(&[5, 1]), up(&[2, 2])],
        ];
        assert_eq!(poly_det(&m).unwrap(), leibniz(&m));
        // row swap path
        let m2 = vec![
            vec![up(&[0]), up(&[1])],
            vec![up(&[1]), up(&[0, 1])],
        ];
        assert_eq!(poly_det(&m2).unwrap(), up(&[-1]));
    }

    #[test]
    fn rank_over_function_field() {
        // second row is x times the first
        let rows = vec![
            vec![up(&[1]), up(&[0, 1])],
            vec![up(&[0, 1]), up(&[0, 0, 1])],
            vec![up(&[2]), up(&[3])],
        ];
        assert_eq!(poly_rank(&rows[..2]).unwrap().0, 1);
        assert_eq!(poly_rank(&rows).unwrap().0, 2);
    }

    #[test]
    fn evaluation_methods_match_bareiss() {
        let m = vec![
            vec![up(&[0, 1]), up(&[2]), up(&[1, 0, 1])],
            vec![up(&[1]), up(&[0, 0, 3]), up(&[4, 1])],
            vec![up(&[0]), up(&[5, 1]), up(&[2, 2])],
        ];
        let rhs = [c(1), c(-2), c(3)];
        let s = CramerSamples::new(&m, &rhs);
        let d = poly_det(&m).unwrap();
        let mut dens = Vec::new();
        for (j, vals) in s.nums.iter().enumerate() {
            let mj: Vec<Vec<UniPoly<Q>>> = m
                .iter()
                .zip(&rhs)
                .map(|(r, b)| {
                    let mut r = r.clone();
                    r[j] = UniPoly::constant(b.clone());
                    r
                })
                .collect();
            let nj = poly_det(&mj).unwrap();
            for ((x, dx), v) in s.xs.iter().zip(&s.det).zip(vals) {
                assert_eq!(*dx, d.eval(x));
                assert_eq!(*v, nj.eval(x));
            }
            dens.push(nj);
        }
        let (nums, den) = solve_rational(&m, &rhs).unwrap().unwrap();
        for (n, nj) in nums.iter().zip(&dens) {
            assert_eq!(&(n * &d), &(nj * &den));
        }
        assert!(den.degree_or_zero() <= d.degree_or_zero());
        let singular = vec![vec![up(&[0, 1]), up(&[0, 2])], vec![up(&[1]), up(&[2])]];
        assert!(solve_rational(&singular, &[c(1), c(0)]).unwrap().is_none());
        let rows = vec![
            vec![up(&[1]), up(&[0, 1])],
            vec![up(&[0, 1]), up(&[0, 0, 1])],
            vec![up(&[2]), up(&[3])],
        ];
        assert_eq!(function_field_rank(&rows[..2]), 1);
        assert_eq!(function_field_rank(&rows), 2);
        // x - 1 vanishes at the first nonzero sample point
        let rows = vec![vec![up(&[-1, 1]), up(&[0])]];
        assert_eq!(function_field_rank(&rows), 1);
        let pts = sample_points::<Q>(30);
        for (i, a) in pts.iter().enumerate() {
            assert!(pts[i + 1..].iter().all(|b| a != b));
        }
        let xs = sample_points::<Q>(4);
        let p = up(&[3, 0, -1, 2]);
        let ys: Vec<Q> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }

    #[test]
    fn nullspace_basis() {
        let rows = vec![vec![c(1), c(2), c(3)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = rows[0].iter().zip(v).fold(Q::zero(), |a, (x, y)| a.plus(&x.times(y)));
            assert!(dot.is_zero());
        }
        assert_eq!(rank(&[vec![c(1), c(2)], vec![c(2), c(4)]]), 1);
    }
}
