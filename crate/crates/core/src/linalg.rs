//! Exact linear algebra: Smith normal form over ℤ (big integers) and over ℤ/e,
//! integral homology, and subquotients of finite abelian groups in coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

type BigMatrix = Vec<Vec<BigInt>>;

/// Sparse integer matrix in wire form `{"rows","cols","entries":[[i,j,v]]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Builds from dense rows, keeping nonzero entries in row-major order.
    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<i64>]) -> Self {
        let mut entries = Vec::new();
        for (i, row) in dense.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    entries.push((i, j, v));
                }
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0i64; self.cols]; self.rows];
        for &(i, j, v) in &self.entries {
            d[i][j] += v;
        }
        d
    }

    /// `self · other` as dense product.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let b = other.to_dense();
        let mut out = vec![vec![0i64; other.cols]; self.rows];
        for &(i, k, v) in &self.entries {
            for (j, &w) in b[k].iter().enumerate() {
                if w != 0 {
                    out[i][j] += v * w;
                }
            }
        }
        IntMatrix::from_dense(self.rows, other.cols, &out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.2 == 0)
    }
}

/// Result of a Smith reduction `P·A·Q = D` over ℤ.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries `d₀ | d₁ | …`, nonnegative, length `min(rows, cols)`.
    pub diag: Vec<BigInt>,
    pub rank: usize,
    /// `Q`, so that row `x` of `Q` gives new coordinates of the unit vector `e_x`.
    pub col_transform: Vec<Vec<BigInt>>,
    /// `Q⁻¹`.
    pub col_inverse: Vec<Vec<BigInt>>,
}

struct Reducer {
    a: Vec<Vec<BigInt>>,
    q: Option<(BigMatrix, BigMatrix)>,
    cols: usize,
}

impl Reducer {
    fn col_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        // column dst -= k * column src
        for row in self.a.iter_mut() {
            if !row[src].is_zero() {
                let t = &row[src] * k;
                row[dst] -= t;
            }
        }
        if let Some((q, qi)) = &mut self.q {
            for row in q.iter_mut() {
                if !row[src].is_zero() {
                    let t = &row[src] * k;
                    row[dst] -= t;
                }
            }
            let (rd, rs) = two_rows(qi, dst, src);
            for (s, d) in rs.iter_mut().zip(rd.iter()) {
                if !d.is_zero() {
                    *s += d * k;
                }
            }
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some((q, qi)) = &mut self.q {
            for row in q.iter_mut() {
                row.swap(i, j);
            }
            qi.swap(i, j);
        }
    }

    fn row_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        let (rd, rs) = two_rows(&mut self.a, dst, src);
        for (d, s) in rd.iter_mut().zip(rs.iter()) {
            if !s.is_zero() {
                *d -= s * k;
            }
        }
    }

    fn reduce(mut self) -> SmithForm {
        let rows = self.a.len();
        let cols = self.cols;
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = min_abs(&self.a, t, t) else { break };
            self.a.swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let p = self.a[t][t].clone();
                let mut dirty = false;
                for i in t + 1..rows {
                    if !self.a[i][t].is_zero() {
                        let k = self.a[i][t].div_floor(&p);
                        self.row_axpy(i, t, &k);
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a[t][j].is_zero() {
                        let k = self.a[t][j].div_floor(&p);
                        self.col_axpy(j, t, &k);
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    let mut best: Option<(usize, usize)> = None;
                    let mut best_abs = p.abs();
                    for i in t + 1..rows {
                        let v = self.a[i][t].abs();
                        if !v.is_zero() && v < best_abs {
                            best_abs = v;
                            best = Some((i, t));
                        }
                    }
                    for j in t + 1..cols {
                        let v = self.a[t][j].abs();
                        if !v.is_zero() && v < best_abs {
                            best_abs = v;
                            best = Some((t, j));
                        }
                    }
                    if let Some((i, j)) = best {
                        self.a.swap(t, i);
                        self.col_swap(t, j);
                    }
                    continue;
                }
                // Row and column cleared; enforce divisibility of the rest.
                let mut offender = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !self.a[i][j].is_zero() && !self.a[i][j].is_multiple_of(&p) {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        self.row_axpy(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                for v in self.a[t].iter_mut() {
                    *v = -v.clone();
                }
            }
            t += 1;
        }
        let n = rows.min(cols);
        let diag: Vec<BigInt> = (0..n).map(|k| self.a[k][k].clone()).collect();
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let (col_transform, col_inverse) = self.q.unwrap_or_default();
        SmithForm {
            diag,
            rank,
            col_transform,
            col_inverse,
        }
    }
}

fn two_rows<T>(m: &mut [Vec<T>], a: usize, b: usize) -> (&mut Vec<T>, &mut Vec<T>) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = m.split_at_mut(b);
        (&mut lo[a], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(a);
        (&mut hi[0], &mut lo[b])
    }
}

fn min_abs(a: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, v) in row.iter().enumerate().skip(c0) {
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best.as_ref().is_none_or(|b| av < b.2) {
                let one = av.is_one();
                best = Some((i, j, av));
                if one {
                    return best.map(|b| (b.0, b.1));
                }
            }
        }
    }
    best.map(|b| (b.0, b.1))
}

fn identity_big(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form with the column transform and its inverse.
pub fn smith_with_transforms(rows: &[Vec<BigInt>], ncols: usize) -> SmithForm {
    Reducer {
        a: rows.to_vec(),
        q: Some((identity_big(ncols), identity_big(ncols))),
        cols: ncols,
    }
    .reduce()
}

/// Smith normal form, diagonal only.
pub fn smith_diagonal(rows: &[Vec<BigInt>], ncols: usize) -> SmithForm {
    Reducer {
        a: rows.to_vec(),
        q: None,
        cols: ncols,
    }
    .reduce()
}

pub fn to_big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

/// Homology at a spot `C_{n+1} → C_n → C_{n-1}` given the two boundary matrices
/// (`d_n` is `dim C_{n-1} × dim C_n`). Returns torsion factors (>1) in divisibility
/// order followed by a `0` for each free summand.
pub fn homology_factors(d_n: &IntMatrix, d_n1: &IntMatrix) -> Vec<u64> {
    let dim = d_n.cols;
    assert_eq!(d_n1.rows, dim, "boundary matrices are not composable");
    let rank_n = if d_n.rows == 0 || dim == 0 {
        0
    } else {
        smith_diagonal(&to_big(d_n), dim).rank
    };
    let snf = if d_n1.cols == 0 || dim == 0 {
        None
    } else {
        Some(smith_diagonal(&to_big(d_n1), d_n1.cols))
    };
    let rank_n1 = snf.as_ref().map_or(0, |s| s.rank);
    let mut out: Vec<u64> = snf
        .map(|s| {
            s.diag
                .iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .map(|d| d.to_u64().expect("torsion factor fits in u64"))
                .collect()
        })
        .unwrap_or_default();
    let free = dim - rank_n - rank_n1;
    out.extend(std::iter::repeat_n(0, free));
    out
}

/// An integer solution of `A·y = t`, by unimodular column reduction of `A`.
pub fn solve_integer(rows: &[Vec<i64>], ncols: usize, t: &[i64]) -> Option<Vec<i64>> {
    let m = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut v = identity_big(ncols);
    let col_op = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, k: &BigInt| {
        for r in a.iter_mut().chain(v.iter_mut()) {
            let x = &r[src] * k;
            r[dst] -= x;
        }
    };
    let swap = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for r in a.iter_mut().chain(v.iter_mut()) {
            r.swap(i, j);
        }
    };
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut piv = 0;
    for r in 0..m {
        if piv == ncols {
            break;
        }
        loop {
            let best = (piv..ncols)
                .filter(|&c| !a[r][c].is_zero())
                .min_by_key(|&c| a[r][c].abs());
            let Some(b) = best else { break };
            swap(&mut a, &mut v, piv, b);
            let mut done = true;
            for c in piv + 1..ncols {
                if !a[r][c].is_zero() {
                    let k = a[r][c].div_floor(&a[r][piv]);
                    col_op(&mut a, &mut v, c, piv, &k);
                    done &= a[r][c].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if !a[r][piv].is_zero() {
            pivots.push((r, piv));
            piv += 1;
        }
    }
    let mut z = vec![BigInt::zero(); ncols];
    let mut next = pivots.iter().peekable();
    for r in 0..m {
        let acc: BigInt = (0..ncols).map(|c| &a[r][c] * &z[c]).sum();
        let rest = BigInt::from(t[r]) - acc;
        match next.peek() {
            Some(&&(pr, pc)) if pr == r => {
                let (q, rem) = rest.div_rem(&a[r][pc]);
                if !rem.is_zero() {
                    return None;
                }
                z[pc] = q;
                next.next();
            }
            _ => {
                if !rest.is_zero() {
                    return None;
                }
            }
        }
    }
    (0..ncols)
        .map(|i| (0..ncols).map(|c| &v[i][c] * &z[c]).sum::<BigInt>().to_i64())
        .collect()
}

/// Order of a finite abelian group given by invariant factors (`None` if infinite).
pub fn group_order(factors: &[u64]) -> Option<u64> {
    factors.iter().try_fold(1u64, |acc, &d| (d != 0).then(|| acc * d))
}

/// Canonical invariant factors: drop 1s, then rebuild the divisibility chain.
pub fn normalize_factors(factors: &[u64]) -> Vec<u64> {
    let free = factors.iter().filter(|&&d| d == 0).count();
    let mut prime_powers: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for &d in factors.iter().filter(|&&d| d > 1) {
        let mut n = d;
        let mut p = 2;
        while n > 1 {
            if n % p == 0 {
                let mut q = 1;
                while n % p == 0 {
                    n /= p;
                    q *= p;
                }
                prime_powers.entry(p).or_default().push(q);
            }
            p += 1;
        }
    }
    let len = prime_powers.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for pows in prime_powers.values_mut() {
        pows.sort_unstable();
        let off = len - pows.len();
        for (k, q) in pows.iter().enumerate() {
            out[off + k] *= q;
        }
    }
    out.extend(std::iter::repeat_n(0, free));
    out
}

/// Pivot choice for elimination over ℤ/e. Two orders give an internal cross-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    First,
    Last,
}

fn modp(v: i64, e: i64) -> i64 {
    v.rem_euclid(e)
}

/// Solves `p·w ≡ v (mod e)` when `gcd(p,e) | v`.
fn divide_mod(v: i64, p: i64, e: i64) -> i64 {
    let g = p.gcd(&e);
    let (p1, e1, v1) = (p / g, e / g, modp(v, e) / g);
    if e1 == 1 {
        return 0;
    }
    let inv = modp(p1.extended_gcd(&e1).x, e1);
    modp(v1 * inv, e1)
}

/// Column reduction data for `D x = 0` over ℤ/e: `R·D·C = S`.
struct ZnSmith {
    e: i64,
    diag: Vec<i64>,
    c: Vec<Vec<i64>>,
    cinv: Vec<Vec<i64>>,
}

fn zn_smith(mut a: Vec<Vec<i64>>, ncols: usize, e: i64, order: PivotOrder) -> ZnSmith {
    let rows = a.len();
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v = modp(*v, e);
        }
    }
    let ident = |n: usize| -> Vec<Vec<i64>> { (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() };
    let mut c = ident(ncols);
    let mut cinv = ident(ncols);
    let mut diag = vec![0i64; ncols];
    let mut t = 0;
    while t < rows.min(ncols) {
        // Pivot generating the largest ideal among the remaining entries.
        let mut best: Option<(usize, usize, i64)> = None;
        for i in t..rows {
            for j in t..ncols {
                if a[i][j] == 0 {
                    continue;
                }
                let g = a[i][j].gcd(&e);
                let better = match (best, order) {
                    (None, _) => true,
                    (Some(b), PivotOrder::First) => g < b.2,
                    (Some(b), PivotOrder::Last) => g <= b.2,
                };
                if better {
                    best = Some((i, j, g));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in c.iter_mut() {
                row.swap(t, pj);
            }
            cinv.swap(t, pj);
        }
        let p = a[t][t];
        for i in t + 1..rows {
            if a[i][t] != 0 {
                let k = divide_mod(a[i][t], p, e);
                let (ri, rt) = two_rows(&mut a, i, t);
                for (x, y) in ri.iter_mut().zip(rt.iter()) {
                    *x = modp(*x - k * y, e);
                }
            }
        }
        for j in t + 1..ncols {
            if a[t][j] != 0 {
                let k = divide_mod(a[t][j], p, e);
                for row in a.iter_mut() {
                    row[j] = modp(row[j] - k * row[t], e);
                }
                for row in c.iter_mut() {
                    row[j] = modp(row[j] - k * row[t], e);
                }
                let (rt, rj) = two_rows(&mut cinv, t, j);
                for (x, y) in rt.iter_mut().zip(rj.iter()) {
                    *x = modp(*x + k * y, e);
                }
            }
        }
        diag[t] = p;
        t += 1;
    }
    ZnSmith { e, diag, c, cinv }
}

/// `H = ker(Δ) / (im(δ) + relations)` for cochains in `⊕ ℤ/mᵢ`, with class coordinates.
///
/// Coordinates are lifted to `(ℤ/e)^N` with `e` a common multiple of all moduli.
#[derive(Clone, Debug)]
pub struct Subquotient {
    e: i64,
    moduli: Vec<i64>,
    c: Vec<Vec<i64>>,
    cinv: Vec<Vec<i64>>,
    /// Kernel factor per reduced coordinate: `y_k ∈ (e/g_k)·ℤ/e`.
    g: Vec<i64>,
    q: Vec<Vec<BigInt>>,
    qinv: Vec<Vec<BigInt>>,
    /// `(column index, invariant factor)` for every nontrivial summand.
    summands: Vec<(usize, u64)>,
}

impl Subquotient {
    /// `eqs` are `(row, modulus)` pairs expressing `Δ`; `gens` span the image of `δ`.
    pub fn new(moduli: &[i64], eqs: &[(Vec<i64>, i64)], gens: &[Vec<i64>], order: PivotOrder) -> Self {
        let n = moduli.len();
        let e = moduli
            .iter()
            .chain(eqs.iter().map(|r| &r.1))
            .fold(1i64, |acc, &m| acc.lcm(&m.max(1)));
        let scaled: Vec<Vec<i64>> = eqs
            .iter()
            .map(|(row, nj)| row.iter().map(|&v| modp(v * (e / nj), e)).collect())
            .collect();
        let zs = zn_smith(scaled, n, e, order);
        let g: Vec<i64> = zs.diag.iter().map(|&s| if s == 0 { e } else { s.gcd(&e) }).collect();
        let mut sq = Subquotient {
            e,
            moduli: moduli.to_vec(),
            c: zs.c,
            cinv: zs.cinv,
            g,
            q: Vec::new(),
            qinv: Vec::new(),
            summands: Vec::new(),
        };
        let mut rel: Vec<Vec<BigInt>> = Vec::new();
        for k in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[k] = BigInt::from(sq.g[k]);
            rel.push(r);
        }
        for i in 0..n {
            let mut x = vec![0i64; n];
            x[i] = moduli[i];
            let t = sq.t_coords(&x).expect("torsion relation lies in the kernel");
            rel.push(t.into_iter().map(BigInt::from).collect());
        }
        for gen in gens {
            let t = sq
                .t_coords(gen)
                .expect("coboundary generator must lie in the cocycle kernel");
            rel.push(t.into_iter().map(BigInt::from).collect());
        }
        let _ = zs.e;
        let snf = smith_with_transforms(&rel, n);
        sq.summands = snf
            .diag
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_one())
            .map(|(k, d)| (k, d.to_u64().expect("finite factor")))
            .collect();
        assert!(
            sq.summands.iter().all(|s| s.1 != 0),
            "cohomology of a finite complex is finite"
        );
        sq.q = snf.col_transform;
        sq.qinv = snf.col_inverse;
        sq
    }

    fn y_coords(&self, x: &[i64]) -> Vec<i64> {
        // y = C⁻¹ x
        let n = self.moduli.len();
        let mut y = vec![0i64; n];
        for (k, yk) in y.iter_mut().enumerate() {
            let mut acc = 0i64;
            for i in 0..n {
                acc = (acc + self.cinv[k][i] * modp(x[i], self.e)) % self.e;
            }
            *yk = acc;
        }
        y
    }

    /// Coordinates in the kernel `⊕ ℤ/g_k`, or `None` when `x` is not a cocycle.
    fn t_coords(&self, x: &[i64]) -> Option<Vec<i64>> {
        let y = self.y_coords(x);
        let mut t = Vec::with_capacity(y.len());
        for (k, &yk) in y.iter().enumerate() {
            let step = self.e / self.g[k];
            if yk % step != 0 {
                return None;
            }
            t.push(yk / step);
        }
        Some(t)
    }

    pub fn is_cocycle(&self, x: &[i64]) -> bool {
        self.t_coords(x).is_some()
    }

    pub fn factors(&self) -> Vec<u64> {
        self.summands.iter().map(|s| s.1).collect()
    }

    /// Class coordinates (one per invariant factor), or `None` if `x` is not a cocycle.
    pub fn class_of(&self, x: &[i64]) -> Option<Vec<u64>> {
        let t = self.t_coords(x)?;
        let out = self
            .summands
            .iter()
            .map(|&(k, d)| {
                let mut acc = BigInt::zero();
                for (i, ti) in t.iter().enumerate() {
                    if *ti != 0 {
                        acc += &self.q[i][k] * BigInt::from(*ti);
                    }
                }
                acc.mod_floor(&BigInt::from(d)).to_u64().unwrap()
            })
            .collect();
        Some(out)
    }

    /// A cocycle representing the `k`-th generator of the subquotient.
    pub fn representative(&self, k: usize) -> Vec<i64> {
        let col = self.summands[k].0;
        let n = self.moduli.len();
        let y: Vec<i64> = (0..n)
            .map(|i| {
                let t = self.qinv[col][i].mod_floor(&BigInt::from(self.g[i])).to_i64().unwrap();
                t * (self.e / self.g[i]) % self.e
            })
            .collect();
        (0..n)
            .map(|i| {
                let mut acc = 0i64;
                for (j, yj) in y.iter().enumerate() {
                    acc = (acc + self.c[i][j] * yj) % self.e;
                }
                modp(acc, self.moduli[i])
            })
            .collect()
    }

    /// Generators of the kernel, reduced modulo the coordinate moduli.
    pub fn kernel_generators(&self) -> Vec<Vec<i64>> {
        let n = self.moduli.len();
        (0..n)
            .map(|k| {
                let step = self.e / self.g[k];
                (0..n)
                    .map(|i| modp(self.c[i][k] * step % self.e, self.moduli[i]))
                    .collect::<Vec<i64>>()
            })
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn smith_of_small_matrix() {
        let m = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_with_transforms(&m, 3);
        let d: Vec<i64> = s.diag.iter().map(|d| d.to_i64().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn column_transform_inverse() {
        let m = big(&[&[3, 5, 7], &[2, 9, 4]]);
        let s = smith_with_transforms(&m, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = BigInt::zero();
                for k in 0..3 {
                    acc += &s.col_transform[i][k] * &s.col_inverse[k][j];
                }
                assert_eq!(acc, BigInt::from(i64::from(i == j)));
            }
        }
    }

    #[test]
    fn homology_of_circle() {
        // Two vertices, two edges forming a loop.
        let d1 = IntMatrix::from_dense(2, 2, &[vec![-1, 1], vec![1, -1]]);
        let d2 = IntMatrix::zeros(2, 0);
        assert_eq!(homology_factors(&d1, &d2), vec![0]);
        let d0 = IntMatrix::zeros(0, 2);
        assert_eq!(homology_factors(&d0, &d1), vec![0]);
    }

    #[test]
    fn normalize_combines_coprime() {
        assert_eq!(normalize_factors(&[2, 3]), vec![6]);
        assert_eq!(normalize_factors(&[4, 2, 1]), vec![2, 4]);
        assert_eq!(normalize_factors(&[0, 2]), vec![2, 0]);
    }

    #[test]
    fn subquotient_of_z4_by_2() {
        // Cochains ℤ/4, no equations, image generated by 2.
        let sq = Subquotient::new(&[4], &[], &[vec![2]], PivotOrder::First);
        assert_eq!(sq.factors(), vec![2]);
        assert_eq!(sq.class_of(&[1]), Some(vec![1]));
        assert_eq!(sq.class_of(&[2]), Some(vec![0]));
    }

    #[test]
    fn subquotient_kernel_condition() {
        // x ∈ ℤ/4 with 2x ≡ 0 (mod 4): kernel {0,2} ≅ ℤ/2.
        let sq = Subquotient::new(&[4], &[(vec![2], 4)], &[], PivotOrder::Last);
        assert_eq!(sq.factors(), vec![2]);
        assert!(!sq.is_cocycle(&[1]));
        assert_eq!(sq.class_of(&[2]), Some(vec![1]));
        let r = sq.representative(0);
        assert_eq!(r, vec![2]);
    }

    #[test]
    fn integer_solutions_exist_only_when_divisible() {
        let a = vec![vec![2, 4], vec![0, 6]];
        let y = solve_integer(&a, 2, &[6, 12]).unwrap();
        assert_eq!(2 * y[0] + 4 * y[1], 6);
        assert_eq!(6 * y[1], 12);
        assert_eq!(solve_integer(&a, 2, &[1, 0]), None);
        assert_eq!(solve_integer(&a, 2, &[0, 3]), None);
        let wide = vec![vec![3, 5, 7]];
        let y = solve_integer(&wide, 3, &[1]).unwrap();
        assert_eq!(3 * y[0] + 5 * y[1] + 7 * y[2], 1);
        assert_eq!(solve_integer(&[vec![0, 0]], 2, &[0]), Some(vec![0, 0]));
    }
}
