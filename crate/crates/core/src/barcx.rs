//! Finite rings and bimodules, the truncated iterated bar complexes `L²(A)`, `L³(A)`
//! with Mac Lane's product, the multiplicative bar construction up to degree 4,
//! and integral homology.

use crate::fingroup::{cyclic, AbelianCoords, FinGroup};
use crate::linalg::{homology_factors, IntMatrix};
use crate::report::Report;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// A finite, possibly non-unital ring on an abelian group written additively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinRing {
    pub add: FinGroup,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
}

impl FinRing {
    /// `ℤ/n` with its usual multiplication.
    pub fn zn(n: usize) -> Self {
        FinRing {
            add: cyclic(n),
            mul: (0..n).map(|a| (0..n).map(|b| a * b % n).collect()).collect(),
            unit: Some(1 % n),
        }
    }

    /// `ℤ/n` with zero multiplication.
    pub fn zero_mult(n: usize) -> Self {
        FinRing {
            add: cyclic(n),
            mul: vec![vec![0; n]; n],
            unit: None,
        }
    }

    pub fn order(&self) -> usize {
        self.add.order()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.add.elements()
    }

    pub fn zero(&self) -> usize {
        self.add.identity()
    }

    #[inline]
    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.add.mul(a, b)
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.add.inv(a)
    }

    #[inline]
    pub fn times(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }
}

/// Ring axioms by exhaustive scan.
pub fn validate_ring(r: &FinRing) -> Report {
    let mut rep = Report::new();
    let n = r.order();
    rep.record("add.abelian", (!r.add.is_abelian()).then(Vec::new));
    if r.mul.len() != n || r.mul.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
        rep.fail("mul.shape", vec![], "multiplication table has wrong shape");
        return rep;
    }
    let mut assoc = None;
    let mut left = None;
    let mut right = None;
    for a in r.elements() {
        for b in r.elements() {
            for c in r.elements() {
                if assoc.is_none() && r.times(r.times(a, b), c) != r.times(a, r.times(b, c)) {
                    assoc = Some(vec![a, b, c]);
                }
                if left.is_none() && r.times(a, r.plus(b, c)) != r.plus(r.times(a, b), r.times(a, c)) {
                    left = Some(vec![a, b, c]);
                }
                if right.is_none() && r.times(r.plus(a, b), c) != r.plus(r.times(a, c), r.times(b, c)) {
                    right = Some(vec![a, b, c]);
                }
            }
        }
    }
    rep.record("mul.associative", assoc);
    rep.record("mul.distributive_left", left);
    rep.record("mul.distributive_right", right);
    if let Some(u) = r.unit {
        let bad = (u >= n).then(|| vec![u]).or_else(|| {
            r.elements()
                .find(|&a| r.times(u, a) != a || r.times(a, u) != a)
                .map(|a| vec![a])
        });
        rep.record("unit", bad);
    }
    rep
}

/// An `A`-bimodule on an abelian group `M`: `left[a][m] = am`, `right[m][a] = ma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bimodule {
    #[serde(rename = "M")]
    pub m: FinGroup,
    pub left: Vec<Vec<usize>>,
    pub right: Vec<Vec<usize>>,
}

impl Bimodule {
    /// `A` acting on itself.
    pub fn regular(r: &FinRing) -> Self {
        Bimodule {
            m: r.add.clone(),
            left: r.mul.clone(),
            right: r.mul.clone(),
        }
    }

    /// Zero actions on `m`.
    pub fn zero_action(r: &FinRing, m: &FinGroup) -> Self {
        let e = m.identity();
        Bimodule {
            m: m.clone(),
            left: vec![vec![e; m.order()]; r.order()],
            right: vec![vec![e; r.order()]; m.order()],
        }
    }

    #[inline]
    pub fn lmul(&self, a: usize, x: usize) -> usize {
        self.left[a][x]
    }

    #[inline]
    pub fn rmul(&self, x: usize, a: usize) -> usize {
        self.right[x][a]
    }

    /// `l·x·r` with absent annotations acting as the identity.
    pub fn act(&self, l: Option<usize>, x: usize, r: Option<usize>) -> usize {
        let y = l.map_or(x, |a| self.lmul(a, x));
        r.map_or(y, |b| self.rmul(y, b))
    }

    pub fn is_central(&self, r: &FinRing, x: usize) -> bool {
        r.elements().all(|a| self.lmul(a, x) == self.rmul(x, a))
    }
}

/// Bimodule axioms by exhaustive scan.
pub fn validate_bimodule(r: &FinRing, m: &Bimodule) -> Report {
    let mut rep = Report::new();
    let (na, nm) = (r.order(), m.m.order());
    rep.record("module.abelian", (!m.m.is_abelian()).then(Vec::new));
    let shape_ok = m.left.len() == na
        && m.left.iter().all(|row| row.len() == nm && row.iter().all(|&v| v < nm))
        && m.right.len() == nm
        && m.right.iter().all(|row| row.len() == na && row.iter().all(|&v| v < nm));
    if !shape_ok {
        rep.fail("shape", vec![], "action tables have wrong shape");
        return rep;
    }
    let g = &m.m;
    let mut add_l = None;
    let mut add_r = None;
    for a in r.elements() {
        for b in r.elements() {
            for x in g.elements() {
                if add_l.is_none() && m.lmul(r.plus(a, b), x) != g.mul(m.lmul(a, x), m.lmul(b, x)) {
                    add_l = Some(vec![a, b, x]);
                }
                if add_r.is_none() && m.rmul(x, r.plus(a, b)) != g.mul(m.rmul(x, a), m.rmul(x, b)) {
                    add_r = Some(vec![a, b, x]);
                }
            }
        }
        for x in g.elements() {
            for y in g.elements() {
                if add_l.is_none() && m.lmul(a, g.mul(x, y)) != g.mul(m.lmul(a, x), m.lmul(a, y)) {
                    add_l = Some(vec![a, x, y]);
                }
                if add_r.is_none() && m.rmul(g.mul(x, y), a) != g.mul(m.rmul(x, a), m.rmul(y, a)) {
                    add_r = Some(vec![a, x, y]);
                }
            }
        }
    }
    rep.record("left.additive", add_l);
    rep.record("right.additive", add_r);
    let mut ll = None;
    let mut rr = None;
    let mut mid = None;
    for a in r.elements() {
        for b in r.elements() {
            for x in g.elements() {
                if ll.is_none() && m.lmul(r.times(a, b), x) != m.lmul(a, m.lmul(b, x)) {
                    ll = Some(vec![a, b, x]);
                }
                if rr.is_none() && m.rmul(x, r.times(a, b)) != m.rmul(m.rmul(x, a), b) {
                    rr = Some(vec![a, b, x]);
                }
                if mid.is_none() && m.rmul(m.lmul(a, x), b) != m.lmul(a, m.rmul(x, b)) {
                    mid = Some(vec![a, b, x]);
                }
            }
        }
    }
    rep.record("left.associative", ll);
    rep.record("right.associative", rr);
    rep.record("middle.associative", mid);
    rep
}

/// Generators of the truncated complexes `L^i(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LGen {
    /// `[a]`
    Point(usize),
    /// `[a|₁b]`
    Bar1(usize, usize),
    /// `[a|₁b|₁c]`
    Bar11(usize, usize, usize),
    /// `[a|₂b]`
    Bar2(usize, usize),
    /// `[a|₁b|₁c|₁d]`
    Bar111(usize, usize, usize, usize),
    /// `[a|₁b|₂c]`
    Bar12(usize, usize, usize),
    /// `[a|₂b|₁c]`
    Bar21(usize, usize, usize),
    /// `[a|₃b]`
    Bar3(usize, usize),
}

/// Generator shapes, in table order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Point,
    Bar1,
    Bar11,
    Bar2,
    Bar111,
    Bar12,
    Bar21,
    Bar3,
}

impl Shape {
    pub fn arity(self) -> usize {
        match self {
            Shape::Point => 1,
            Shape::Bar1 | Shape::Bar2 | Shape::Bar3 => 2,
            Shape::Bar11 | Shape::Bar12 | Shape::Bar21 => 3,
            Shape::Bar111 => 4,
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Shape::Point => 0,
            Shape::Bar1 => 1,
            Shape::Bar11 | Shape::Bar2 => 2,
            _ => 3,
        }
    }

    pub fn make(self, t: &[usize]) -> LGen {
        match self {
            Shape::Point => LGen::Point(t[0]),
            Shape::Bar1 => LGen::Bar1(t[0], t[1]),
            Shape::Bar11 => LGen::Bar11(t[0], t[1], t[2]),
            Shape::Bar2 => LGen::Bar2(t[0], t[1]),
            Shape::Bar111 => LGen::Bar111(t[0], t[1], t[2], t[3]),
            Shape::Bar12 => LGen::Bar12(t[0], t[1], t[2]),
            Shape::Bar21 => LGen::Bar21(t[0], t[1], t[2]),
            Shape::Bar3 => LGen::Bar3(t[0], t[1]),
        }
    }

    /// Shapes of `L^level` in a given degree.
    pub fn in_degree(d: usize, level: usize) -> Vec<Shape> {
        match d {
            0 => vec![Shape::Point],
            1 => vec![Shape::Bar1],
            2 => vec![Shape::Bar11, Shape::Bar2],
            3 if level >= 3 => vec![Shape::Bar111, Shape::Bar12, Shape::Bar21, Shape::Bar3],
            3 => vec![Shape::Bar111, Shape::Bar12, Shape::Bar21],
            _ => vec![],
        }
    }
}

impl LGen {
    pub fn shape(&self) -> Shape {
        match self {
            LGen::Point(..) => Shape::Point,
            LGen::Bar1(..) => Shape::Bar1,
            LGen::Bar11(..) => Shape::Bar11,
            LGen::Bar2(..) => Shape::Bar2,
            LGen::Bar111(..) => Shape::Bar111,
            LGen::Bar12(..) => Shape::Bar12,
            LGen::Bar21(..) => Shape::Bar21,
            LGen::Bar3(..) => Shape::Bar3,
        }
    }

    pub fn degree(&self) -> usize {
        self.shape().degree()
    }

    pub fn args(&self) -> Vec<usize> {
        match *self {
            LGen::Point(a) => vec![a],
            LGen::Bar1(a, b) | LGen::Bar2(a, b) | LGen::Bar3(a, b) => vec![a, b],
            LGen::Bar11(a, b, c) | LGen::Bar12(a, b, c) | LGen::Bar21(a, b, c) => vec![a, b, c],
            LGen::Bar111(a, b, c, d) => vec![a, b, c, d],
        }
    }

    /// Augmentation: `η([a]) = a`, zero in positive degree.
    pub fn eta(&self) -> Option<usize> {
        match *self {
            LGen::Point(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for LGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seps: &[&str] = match self.shape() {
            Shape::Point => &[],
            Shape::Bar1 | Shape::Bar11 | Shape::Bar111 => &["|1", "|1", "|1"],
            Shape::Bar2 => &["|2"],
            Shape::Bar3 => &["|3"],
            Shape::Bar12 => &["|1", "|2"],
            Shape::Bar21 => &["|2", "|1"],
        };
        write!(f, "[")?;
        for (i, a) in self.args().iter().enumerate() {
            if i > 0 {
                write!(f, "{}", seps[i - 1])?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Integer combination of generators.
pub type Combo<T> = Vec<(i64, T)>;

/// Internal differential of `L³(A)`; `L²(A)` simply omits `[a|₃b]`.
pub fn l_boundary(r: &FinRing, g: LGen) -> Combo<LGen> {
    use LGen::*;
    let p = |a, b| r.plus(a, b);
    match g {
        Point(_) => vec![],
        Bar1(a, b) => vec![(1, Point(b)), (-1, Point(p(a, b))), (1, Point(a))],
        Bar11(a, b, c) => vec![
            (1, Bar1(b, c)),
            (-1, Bar1(p(a, b), c)),
            (1, Bar1(a, p(b, c))),
            (-1, Bar1(a, b)),
        ],
        Bar2(a, b) => vec![(1, Bar1(a, b)), (-1, Bar1(b, a))],
        Bar111(a, b, c, d) => vec![
            (1, Bar11(b, c, d)),
            (-1, Bar11(p(a, b), c, d)),
            (1, Bar11(a, p(b, c), d)),
            (-1, Bar11(a, b, p(c, d))),
            (1, Bar11(a, b, c)),
        ],
        Bar12(a, b, c) => vec![
            (1, Bar11(a, b, c)),
            (-1, Bar11(a, c, b)),
            (1, Bar11(c, a, b)),
            (-1, Bar2(b, c)),
            (1, Bar2(p(a, b), c)),
            (-1, Bar2(a, c)),
        ],
        Bar21(a, b, c) => vec![
            (1, Bar11(a, b, c)),
            (-1, Bar11(b, a, c)),
            (1, Bar11(b, c, a)),
            (1, Bar2(a, c)),
            (-1, Bar2(a, p(b, c))),
            (1, Bar2(a, b)),
        ],
        Bar3(a, b) => vec![(1, Bar2(a, b)), (1, Bar2(b, a))],
    }
}

/// Mac Lane's product of two generators; products absent from the table are zero,
/// as are products beyond degree 3.
pub fn maclane_product(r: &FinRing, u: LGen, v: LGen) -> Combo<LGen> {
    use LGen::*;
    let m = |a, b| r.times(a, b);
    let p = |a, b| r.plus(a, b);
    match (u, v) {
        (Point(a), Point(b)) => vec![(1, Point(m(a, b)))],
        (Point(a), Bar1(b, c)) => vec![(1, Bar1(m(a, b), m(a, c)))],
        (Bar1(a, b), Point(c)) => vec![(1, Bar1(m(a, c), m(b, c)))],
        (Point(a), Bar11(b, c, d)) => vec![(1, Bar11(m(a, b), m(a, c), m(a, d)))],
        (Bar11(a, b, c), Point(d)) => vec![(1, Bar11(m(a, d), m(b, d), m(c, d)))],
        (Point(a), Bar2(b, c)) => vec![(1, Bar2(m(a, b), m(a, c)))],
        (Bar2(a, b), Point(c)) => vec![(1, Bar2(m(a, c), m(b, c)))],
        (Bar1(a, b), Bar1(c, d)) => {
            let (ac, ad, bc, bd) = (m(a, c), m(a, d), m(b, c), m(b, d));
            vec![
                (1, Bar11(ac, bc, p(ad, bd))),
                (-1, Bar11(ac, ad, p(bc, bd))),
                (1, Bar11(ad, bc, bd)),
                (-1, Bar11(bc, ad, bd)),
                (-1, Bar2(bc, ad)),
            ]
        }
        _ => vec![],
    }
}

/// Merges equal terms and drops zeros, in sorted order.
pub fn normalize<T: Ord + Clone>(c: Combo<T>) -> Combo<T> {
    let mut acc: BTreeMap<T, i64> = BTreeMap::new();
    for (n, t) in c {
        *acc.entry(t).or_default() += n;
    }
    acc.into_iter().filter(|(_, n)| *n != 0).map(|(t, n)| (n, t)).collect()
}

/// All tuples of `A`-elements of length `k`, lexicographically.
fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).map(move |mut c| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        t
    })
}

/// A finite chain complex `C_0 ← C_1 ← …` with labelled bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub degrees: (usize, usize),
    pub basis: Vec<Vec<String>>,
    /// `diff[d]: C_d → C_{d-1}` as a `dim C_{d-1} × dim C_d` matrix; `diff[0]` is `0 × dim C_0`.
    pub diff: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn rank(&self, d: usize) -> usize {
        self.basis.get(d).map_or(0, Vec::len)
    }

    /// `∂_{d-1} ∘ ∂_d = 0` in every composable degree; returns the first failing `d`.
    pub fn check_square_zero(&self) -> Option<usize> {
        (2..self.diff.len()).find(|&d| !self.diff[d - 1].mul(&self.diff[d]).is_zero())
    }
}

/// Generators of `L^level(A)` in degree `d`, by shape then tuple.
pub fn l_basis(r: &FinRing, level: usize, d: usize) -> Vec<LGen> {
    Shape::in_degree(d, level)
        .into_iter()
        .flat_map(|s| tuples(r.order(), s.arity()).map(move |t| s.make(&t)))
        .collect()
}

/// The truncated complex `L^level(A)` in degrees `0..=3`.
pub fn build_l(r: &FinRing, level: usize) -> ChainComplex {
    let bases: Vec<Vec<LGen>> = (0..=3).map(|d| l_basis(r, level, d)).collect();
    let index: Vec<HashMap<LGen, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, g)| (*g, i)).collect())
        .collect();
    let mut diff = vec![IntMatrix::zeros(0, bases[0].len())];
    for d in 1..=3 {
        let mut dense = vec![vec![0i64; bases[d].len()]; bases[d - 1].len()];
        for (j, g) in bases[d].iter().enumerate() {
            for (n, t) in l_boundary(r, *g) {
                dense[index[d - 1][&t]][j] += n;
            }
        }
        diff.push(IntMatrix::from_dense(bases[d - 1].len(), bases[d].len(), &dense));
    }
    ChainComplex {
        degrees: (0, 3),
        basis: bases
            .iter()
            .map(|b| b.iter().map(|g| g.to_string()).collect())
            .collect(),
        diff,
    }
}

/// Invariant factors of `H_n(C)`; a `0` marks a free summand.
pub fn homology(c: &ChainComplex, n: usize) -> Vec<u64> {
    let dn = c.diff.get(n).cloned().unwrap_or_else(|| IntMatrix::zeros(0, c.rank(n)));
    let dn1 = c
        .diff
        .get(n + 1)
        .cloned()
        .unwrap_or_else(|| IntMatrix::zeros(c.rank(n), 0));
    homology_factors(&dn, &dn1)
}

/// A cell `⟦u₁,…,u_n⟧` of the bar construction.
pub type Cell = Vec<LGen>;

pub fn cell_degree(c: &[LGen]) -> usize {
    c.len() + c.iter().map(LGen::degree).sum::<usize>()
}

pub fn cell_label(c: &[LGen]) -> String {
    let inner: Vec<String> = c.iter().map(|g| g.to_string()).collect();
    format!("⟦{}⟧", inner.join(","))
}

/// Cell shapes of `B̄(L^level(A))` in degree `d ≤ 4`, in table order.
pub fn bar_shapes(d: usize, level: usize) -> Vec<Vec<Shape>> {
    use Shape::*;
    match d {
        0 => vec![vec![]],
        1 => vec![vec![Point]],
        2 => vec![vec![Point, Point], vec![Bar1]],
        3 => vec![
            vec![Point, Point, Point],
            vec![Bar1, Point],
            vec![Point, Bar1],
            vec![Bar11],
            vec![Bar2],
        ],
        4 => {
            let mut v = vec![
                vec![Point, Point, Point, Point],
                vec![Bar1, Point, Point],
                vec![Point, Bar1, Point],
                vec![Point, Point, Bar1],
                vec![Bar1, Bar1],
                vec![Bar11, Point],
                vec![Bar2, Point],
                vec![Point, Bar11],
                vec![Point, Bar2],
                vec![Bar111],
                vec![Bar12],
                vec![Bar21],
            ];
            if level >= 3 {
                v.push(vec![Bar3]);
            }
            v
        }
        _ => vec![],
    }
}

/// Term `n · l·⟦…⟧·r` of the bar differential; `l`, `r` record the augmentation
/// acting from the left or right.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BarTerm {
    pub coeff: i64,
    pub left: Option<usize>,
    pub cell: usize,
    pub right: Option<usize>,
}

/// `B̄(L^level(A), η)` in degrees `0..=4` with annotated differential.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub level: usize,
    pub cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
    /// `diff[d][c]` is `∂_tot` of cell `c` of degree `d`, over cells of degree `d-1`.
    pub diff: Vec<Vec<Vec<BarTerm>>>,
}

impl BarComplex {
    pub fn index_of(&self, c: &[LGen]) -> Option<usize> {
        self.index[cell_degree(c)].get(c).copied()
    }

    /// Indices of the degree-`d` cells of the given shape.
    pub fn cells_of_shape(&self, d: usize, shape: &[Shape]) -> Vec<usize> {
        (0..self.cells[d].len())
            .filter(|&i| self.cells[d][i].iter().map(LGen::shape).eq(shape.iter().copied()))
            .collect()
    }

    /// Differential matrices with every annotation replaced by the identity
    /// (coefficients in `ℤ` with trivial actions).
    pub fn integer_matrix(&self, d: usize) -> IntMatrix {
        let rows = self.cells[d - 1].len();
        let cols = self.cells[d].len();
        let mut dense = vec![vec![0i64; cols]; rows];
        for (j, terms) in self.diff[d].iter().enumerate() {
            for t in terms {
                if t.left.is_none() && t.right.is_none() {
                    dense[t.cell][j] += t.coeff;
                }
            }
        }
        IntMatrix::from_dense(rows, cols, &dense)
    }
}

/// `∂_tot = ∂' + ∂''` on a single cell, before indexing.
pub fn bar_boundary(r: &FinRing, cell: &[LGen]) -> Combo<(Option<usize>, Cell, Option<usize>)> {
    bar_boundary_with(r, cell, &maclane_product)
}

/// [`bar_boundary`] with a caller-supplied product on `L`.
pub fn bar_boundary_with(r: &FinRing, cell: &[LGen], product: &Product) -> Combo<(Option<usize>, Cell, Option<usize>)> {
    let n = cell.len();
    let mut out = Vec::new();
    let eps = |i: usize| cell_degree(&cell[..i]) as i64;
    let sign = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    // ∂'
    for i in 0..n {
        let s = -sign(eps(i));
        for (k, t) in l_boundary(r, cell[i]) {
            let mut c = cell.to_vec();
            c[i] = t;
            out.push((s * k, (None, c, None)));
        }
    }
    // ∂''
    if n == 0 {
        return normalize(out);
    }
    if let Some(a) = cell[0].eta() {
        out.push((1, (Some(a), cell[1..].to_vec(), None)));
    }
    for i in 0..n - 1 {
        let s = sign(eps(i + 1));
        for (k, t) in product(r, cell[i], cell[i + 1]) {
            let mut c = cell[..i].to_vec();
            c.push(t);
            c.extend_from_slice(&cell[i + 2..]);
            out.push((s * k, (None, c, None)));
        }
    }
    if let Some(a) = cell[n - 1].eta() {
        out.push((sign(eps(n)), (None, cell[..n - 1].to_vec(), Some(a))));
    }
    normalize(out)
}

/// Signature of a product on generators of `L`.
pub type Product = dyn Fn(&FinRing, LGen, LGen) -> Combo<LGen>;

/// The bar construction in degrees `0..=4`.
pub fn build_bar(r: &FinRing, level: usize) -> BarComplex {
    build_bar_with(r, level, &maclane_product)
}

/// [`build_bar`] over an alternative product table.
pub fn build_bar_with(r: &FinRing, level: usize, product: &Product) -> BarComplex {
    let cells: Vec<Vec<Cell>> = (0..=4)
        .map(|d| {
            bar_shapes(d, level)
                .into_iter()
                .flat_map(|shape| {
                    let arity: usize = shape.iter().map(|s| s.arity()).sum();
                    tuples(r.order(), arity).map(move |t| {
                        let mut off = 0;
                        shape
                            .iter()
                            .map(|s| {
                                let g = s.make(&t[off..off + s.arity()]);
                                off += s.arity();
                                g
                            })
                            .collect::<Cell>()
                    })
                })
                .collect()
        })
        .collect();
    let index: Vec<HashMap<Cell, usize>> = cells
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let mut diff = vec![vec![Vec::new(); cells[0].len()]];
    for d in 1..=4 {
        let col: Vec<Vec<BarTerm>> = cells[d]
            .iter()
            .map(|c| {
                let mut terms: Vec<BarTerm> = bar_boundary_with(r, c, product)
                    .into_iter()
                    .map(|(k, (l, t, rr))| BarTerm {
                        coeff: k,
                        left: l,
                        cell: *index[d - 1].get(&t).expect("boundary stays in the truncation"),
                        right: rr,
                    })
                    .collect();
                terms.sort();
                terms
            })
            .collect();
        diff.push(col);
    }
    BarComplex {
        level,
        cells,
        index,
        diff,
    }
}

/// Evaluates a formal sum of `l·x·r` in the free bimodule on one generator over the
/// unitalization of `A`, i.e. in `ℤ ⊕ A ⊕ A ⊕ (A ⊗ A)`. Returns `true` when zero.
struct UniversalBimodule {
    coords: AbelianCoords,
    n: usize,
}

impl UniversalBimodule {
    fn new(r: &FinRing) -> Self {
        UniversalBimodule {
            coords: AbelianCoords::new(&r.add).expect("additive group is abelian"),
            n: r.order(),
        }
    }

    fn vanishes(&self, terms: &BTreeMap<(Option<usize>, Option<usize>), i64>) -> bool {
        let f = &self.coords.factors;
        let k = f.len();
        let mut z = 0i64;
        let mut left = vec![0i64; k];
        let mut right = vec![0i64; k];
        let mut both = vec![0i64; k * k];
        for (&(l, r), &c) in terms {
            match (l, r) {
                (None, None) => z += c,
                (Some(a), None) => {
                    for (i, &x) in self.coords.coords(a).iter().enumerate() {
                        left[i] += c * x as i64;
                    }
                }
                (None, Some(b)) => {
                    for (i, &x) in self.coords.coords(b).iter().enumerate() {
                        right[i] += c * x as i64;
                    }
                }
                (Some(a), Some(b)) => {
                    let (ca, cb) = (self.coords.coords(a), self.coords.coords(b));
                    for i in 0..k {
                        for j in 0..k {
                            both[i * k + j] += c * (ca[i] * cb[j]) as i64;
                        }
                    }
                }
            }
        }
        debug_assert!(self.n > 0);
        z == 0
            && left.iter().zip(f).all(|(&v, &d)| v.rem_euclid(d as i64) == 0)
            && right.iter().zip(f).all(|(&v, &d)| v.rem_euclid(d as i64) == 0)
            && (0..k * k).all(|ij| {
                let g = (f[ij / k] as i64).gcd(&(f[ij % k] as i64));
                both[ij].rem_euclid(g) == 0
            })
    }
}

/// Left and right ring annotations of a term.
type Sides = (Option<usize>, Option<usize>);

/// `∂_tot ∘ ∂_tot = 0` on every cell of degree 2, 3 and 4, with annotations composed
/// in `A` and evaluated in the universal bimodule.
pub fn check_bar_square(r: &FinRing, bar: &BarComplex) -> Report {
    let u = UniversalBimodule::new(r);
    let mut rep = Report::new();
    let compose = |x: Option<usize>, y: Option<usize>| match (x, y) {
        (None, y) => y,
        (x, None) => x,
        (Some(a), Some(b)) => Some(r.times(a, b)),
    };
    for d in 2..=4 {
        let mut bad = None;
        for (c, terms) in bar.diff[d].iter().enumerate() {
            let mut acc: BTreeMap<usize, BTreeMap<Sides, i64>> = BTreeMap::new();
            for t in terms {
                for t2 in &bar.diff[d - 1][t.cell] {
                    // l·(l₂·x·r₂)·r
                    let key = (compose(t.left, t2.left), compose(t2.right, t.right));
                    *acc.entry(t2.cell).or_default().entry(key).or_default() += t.coeff * t2.coeff;
                }
            }
            if let Some((&target, _)) = acc.iter().find(|(_, m)| !u.vanishes(m)) {
                bad = Some(vec![c, target]);
                break;
            }
        }
        rep.record(format!("square_zero.degree{d}"), bad);
    }
    rep
}
