//! Degree-3 cochains on the bar construction with bimodule coefficients: cocycle
//! conditions in three modes, the twist `β`, coboundaries and the cohomology groups.

use crate::barcx::{build_bar, BarComplex, Bimodule, FinRing, LGen, Shape};
use crate::fingroup::AbelianCoords;
use crate::linalg::{PivotOrder, Subquotient};
use crate::report::Report;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomError {
    #[error("cochain fails the cocycle condition ({0})")]
    NotACocycle(String),
    #[error("coefficient group is not abelian")]
    NonAbelianModule,
    #[error("cochain tables do not match the ring order")]
    Shape,
}

/// Left and right ring annotations of a term.
type Sides = (Option<usize>, Option<usize>);

/// Which system of degree-4 equations defines a cocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CocycleMode {
    /// Bar construction over `L²`.
    H3_2,
    /// Bar construction over `L³` (Mac Lane cohomology).
    H3_3,
    /// `δξ + β_ξ = 0` over `L²`.
    Twisted,
}

impl std::str::FromStr for CocycleMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "h3_2" => Ok(CocycleMode::H3_2),
            "h3_3" => Ok(CocycleMode::H3_3),
            "twisted" => Ok(CocycleMode::Twisted),
            _ => Err(format!("unknown mode {s}")),
        }
    }
}

type T3 = Vec<Vec<Vec<usize>>>;
type T2 = Vec<Vec<usize>>;

/// `ξ = (f, α₁, α₂, f₊, g₊)`, values in `M`; `alpha1[a][b][c] = α₁(a,b;c)`,
/// `alpha2[a][b][c] = α₂(a;b,c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain5 {
    pub f: T3,
    pub alpha1: T3,
    pub alpha2: T3,
    pub fplus: T3,
    pub gplus: T2,
}

/// `ν = (c, h)` on the cells `⟦[a],[b]⟧` and `⟦[a|₁b]⟧`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain2 {
    pub c: T2,
    pub h: T2,
}

fn t3(n: usize, v: usize) -> T3 {
    vec![vec![vec![v; n]; n]; n]
}

impl Cochain5 {
    pub fn zero(n: usize, m0: usize) -> Self {
        Cochain5 {
            f: t3(n, m0),
            alpha1: t3(n, m0),
            alpha2: t3(n, m0),
            fplus: t3(n, m0),
            gplus: vec![vec![m0; n]; n],
        }
    }

    /// Values in bar-cell order of degree 3.
    pub fn flatten(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for t in [&self.f, &self.alpha1, &self.alpha2, &self.fplus] {
            out.extend(t.iter().flatten().flatten().copied());
        }
        out.extend(self.gplus.iter().flatten().copied());
        out
    }

    pub fn from_flat(n: usize, v: &[usize]) -> Self {
        let n3 = n * n * n;
        let take3 = |k: usize| -> T3 {
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| (0..n).map(|c| v[k * n3 + (a * n + b) * n + c]).collect())
                        .collect()
                })
                .collect()
        };
        Cochain5 {
            f: take3(0),
            alpha1: take3(1),
            alpha2: take3(2),
            fplus: take3(3),
            gplus: (0..n)
                .map(|a| (0..n).map(|b| v[4 * n3 + a * n + b]).collect())
                .collect(),
        }
    }

    fn has_order(&self, n: usize) -> bool {
        let ok3 = |t: &T3| t.len() == n && t.iter().all(|x| x.len() == n && x.iter().all(|y| y.len() == n));
        ok3(&self.f)
            && ok3(&self.alpha1)
            && ok3(&self.alpha2)
            && ok3(&self.fplus)
            && self.gplus.len() == n
            && self.gplus.iter().all(|x| x.len() == n)
    }
}

impl Cochain2 {
    pub fn zero(n: usize, m0: usize) -> Self {
        Cochain2 {
            c: vec![vec![m0; n]; n],
            h: vec![vec![m0; n]; n],
        }
    }

    pub fn flatten(&self) -> Vec<usize> {
        self.c
            .iter()
            .flatten()
            .chain(self.h.iter().flatten())
            .copied()
            .collect()
    }
}

/// Human-readable names of the degree-4 cell families.
pub fn block_name(shape: &[Shape]) -> &'static str {
    use Shape::*;
    match shape {
        [Point, Point, Point, Point] => "hochschild",
        [Bar1, Point, Point] => "additivity.first",
        [Point, Bar1, Point] => "additivity.second",
        [Point, Point, Bar1] => "additivity.third",
        [Bar1, Bar1] => "interchange",
        [Bar11, Point] => "invariance.right",
        [Bar2, Point] => "braiding.right",
        [Point, Bar11] => "invariance.left",
        [Point, Bar2] => "braiding.left",
        [Bar111] => "plus.cocycle",
        [Bar12] => "plus.hexagon_first",
        [Bar21] => "plus.hexagon_second",
        [Bar3] => "plus.symmetry",
        _ => "other",
    }
}

/// Ring, bimodule and bar construction with coordinates on `M`.
pub struct CohomContext {
    pub ring: FinRing,
    pub module: Bimodule,
    pub bar: BarComplex,
    coords: AbelianCoords,
    /// `act_coords[(l, r)][k]` = coordinates of `l·gₖ·r`.
    act_coords: HashMap<Sides, Vec<Vec<i64>>>,
}

impl CohomContext {
    pub fn new(ring: &FinRing, module: &Bimodule) -> Result<Self, CohomError> {
        let coords = AbelianCoords::new(&module.m).map_err(|_| CohomError::NonAbelianModule)?;
        let bar = build_bar(ring, 3);
        let mut ctx = CohomContext {
            ring: ring.clone(),
            module: module.clone(),
            bar,
            coords,
            act_coords: HashMap::new(),
        };
        let opts: Vec<Option<usize>> = std::iter::once(None).chain(ring.elements().map(Some)).collect();
        for &l in &opts {
            for &r in &opts {
                let m: Vec<Vec<i64>> = (0..ctx.coords.rank())
                    .map(|k| {
                        let g = ctx.coords.generator(k);
                        ctx.coords
                            .coords(module.act(l, g, r))
                            .iter()
                            .map(|&v| v as i64)
                            .collect()
                    })
                    .collect();
                ctx.act_coords.insert((l, r), m);
            }
        }
        Ok(ctx)
    }

    pub fn n(&self) -> usize {
        self.ring.order()
    }

    /// Degree-4 cells taking part in `mode`.
    fn equation_cells(&self, mode: CocycleMode) -> Vec<usize> {
        (0..self.bar.cells[4].len())
            .filter(|&i| mode == CocycleMode::H3_3 || !matches!(self.bar.cells[4][i][..], [LGen::Bar3(..)]))
            .collect()
    }

    /// `n·x` in `M`.
    fn scale(&self, x: usize, n: i64) -> usize {
        self.module.m.pow(x, n)
    }

    fn plus(&self, x: usize, y: usize) -> usize {
        self.module.m.mul(x, y)
    }

    /// `(δξ)(cell)` for a cochain given on the cells of degree `d-1`.
    fn apply(&self, d: usize, values: &[usize], cell: usize) -> usize {
        let mut acc = self.module.m.identity();
        for t in &self.bar.diff[d][cell] {
            let v = self.module.act(t.left, values[t.cell], t.right);
            acc = self.plus(acc, self.scale(v, t.coeff));
        }
        acc
    }

    /// `β_ξ` on a degree-4 cell.
    fn twist(&self, xi: &Cochain5, cell: usize) -> usize {
        let r = &self.ring;
        let g = |x: usize, y: usize| xi.gplus[x][y];
        match self.bar.cells[4][cell][..] {
            [LGen::Point(a), LGen::Bar2(b, c)] => {
                let (ab, ac) = (r.times(a, b), r.times(a, c));
                self.plus(g(ab, ac), g(ac, ab))
            }
            [LGen::Bar2(a, b), LGen::Point(c)] => {
                let (ac, bc) = (r.times(a, c), r.times(b, c));
                self.plus(g(ac, bc), g(bc, ac))
            }
            _ => self.module.m.identity(),
        }
    }

    /// `δξ`, or `Dξ = δξ + β_ξ` in twisted mode, on every degree-4 cell of the mode.
    pub fn defect(&self, xi: &Cochain5, mode: CocycleMode) -> Vec<(usize, usize)> {
        let flat = xi.flatten();
        self.equation_cells(mode)
            .into_iter()
            .map(|c| {
                let mut v = self.apply(4, &flat, c);
                if mode == CocycleMode::Twisted {
                    v = self.plus(v, self.twist(xi, c));
                }
                (c, v)
            })
            .collect()
    }

    /// Builds the linear system of `mode` and the coboundary generators.
    pub fn solver(&self, mode: CocycleMode, order: PivotOrder) -> CohomologySolver {
        let rk = self.coords.rank();
        let f = &self.coords.factors;
        let n3 = self.bar.cells[3].len();
        let moduli: Vec<i64> = (0..n3).flat_map(|_| f.iter().map(|&d| d as i64)).collect();
        let mut eqs = Vec::new();
        let n = self.n();
        let gplus_var = |x: usize, y: usize| 4 * n * n * n + x * n + y;
        for c in self.equation_cells(mode) {
            let mut rows = vec![vec![0i64; n3 * rk]; rk];
            for t in &self.bar.diff[4][c] {
                let m = &self.act_coords[&(t.left, t.right)];
                for (k, img) in m.iter().enumerate() {
                    for (k2, &v) in img.iter().enumerate() {
                        rows[k2][t.cell * rk + k] += t.coeff * v;
                    }
                }
            }
            if mode == CocycleMode::Twisted {
                let r = &self.ring;
                let pair = match self.bar.cells[4][c][..] {
                    [LGen::Point(a), LGen::Bar2(b, cc)] => Some((r.times(a, b), r.times(a, cc))),
                    [LGen::Bar2(a, b), LGen::Point(cc)] => Some((r.times(a, cc), r.times(b, cc))),
                    _ => None,
                };
                if let Some((x, y)) = pair {
                    for k in 0..rk {
                        rows[k][gplus_var(x, y) * rk + k] += 1;
                        rows[k][gplus_var(y, x) * rk + k] += 1;
                    }
                }
            }
            for (k2, row) in rows.into_iter().enumerate() {
                eqs.push((row, f[k2] as i64));
            }
        }
        let n2 = self.bar.cells[2].len();
        let mut gens = Vec::new();
        for j in 0..n2 {
            for k in 0..rk {
                let mut v = vec![0i64; n3 * rk];
                for (c3, terms) in self.bar.diff[3].iter().enumerate() {
                    for t in terms.iter().filter(|t| t.cell == j) {
                        let img = &self.act_coords[&(t.left, t.right)][k];
                        for (k2, &x) in img.iter().enumerate() {
                            v[c3 * rk + k2] += t.coeff * x;
                        }
                    }
                }
                for (i, x) in v.iter_mut().enumerate() {
                    *x = x.rem_euclid(moduli[i]);
                }
                gens.push(v);
            }
        }
        let sq = Subquotient::new(&moduli, &eqs, &gens, order);
        CohomologySolver { mode, rk, n, sq }
    }

    /// Coordinates of a cochain as an integer vector.
    pub fn to_vector(&self, xi: &Cochain5) -> Vec<i64> {
        xi.flatten()
            .into_iter()
            .flat_map(|x| self.coords.coords(x).iter().map(|&v| v as i64).collect::<Vec<_>>())
            .collect()
    }

    pub fn from_vector(&self, v: &[i64]) -> Cochain5 {
        let rk = self.coords.rank();
        let flat: Vec<usize> = if rk == 0 {
            vec![self.module.m.identity(); self.bar.cells[3].len()]
        } else {
            v.chunks(rk).map(|c| self.coords.element(c)).collect()
        };
        Cochain5::from_flat(self.n(), &flat)
    }
}

/// `δ`-equations of one mode reduced to Smith form over the cochain group.
pub struct CohomologySolver {
    pub mode: CocycleMode,
    rk: usize,
    n: usize,
    sq: Subquotient,
}

impl CohomologySolver {
    pub fn factors(&self) -> Vec<u64> {
        self.sq.factors()
    }

    pub fn is_cocycle(&self, v: &[i64]) -> bool {
        self.sq.is_cocycle(v)
    }

    pub fn class_of(&self, v: &[i64]) -> Option<Vec<u64>> {
        self.sq.class_of(v)
    }

    pub fn representative(&self, k: usize) -> Vec<i64> {
        self.sq.representative(k)
    }

    /// Generators of the cocycle group.
    pub fn cocycle_generators(&self) -> Vec<Vec<i64>> {
        self.sq.kernel_generators()
    }

    pub fn variables(&self) -> usize {
        let n = self.n;
        (4 * n * n * n + n * n) * self.rk
    }
}

/// Evaluates every degree-4 equation of the blocks on `ξ`; one entry per cell family.
pub fn delta3(ring: &FinRing, module: &Bimodule, xi: &Cochain5) -> Result<Vec<(String, Vec<usize>)>, CohomError> {
    let ctx = CohomContext::new(ring, module)?;
    if !xi.has_order(ring.order()) {
        return Err(CohomError::Shape);
    }
    let flat = xi.flatten();
    let mut blocks: Vec<(String, Vec<usize>)> = Vec::new();
    for (c, cell) in ctx.bar.cells[4].iter().enumerate() {
        let shape: Vec<Shape> = cell.iter().map(LGen::shape).collect();
        let name = block_name(&shape).to_string();
        let v = ctx.apply(4, &flat, c);
        match blocks.last_mut() {
            Some((nm, vals)) if *nm == name => vals.push(v),
            _ => blocks.push((name, vec![v])),
        }
    }
    Ok(blocks)
}

/// `β_ξ` on `⟦[a],[b|₂c]⟧` (first table) and `⟦[a|₂b],[c]⟧` (second table).
pub fn beta(ring: &FinRing, module: &Bimodule, xi: &Cochain5) -> (T3, T3) {
    let n = ring.order();
    let m = &module.m;
    let g = |x: usize, y: usize| xi.gplus[x][y];
    let mut left = t3(n, m.identity());
    let mut right = t3(n, m.identity());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (ab, ac, bc) = (ring.times(a, b), ring.times(a, c), ring.times(b, c));
                left[a][b][c] = m.mul(g(ab, ac), g(ac, ab));
                right[a][b][c] = m.mul(g(ac, bc), g(bc, ac));
            }
        }
    }
    (left, right)
}

/// Per-family pass/fail of the cocycle condition of `mode`.
pub fn is_cocycle(ctx: &CohomContext, xi: &Cochain5, mode: CocycleMode) -> Report {
    let mut rep = Report::new();
    if !xi.has_order(ctx.n()) {
        rep.fail("shape", vec![], "cochain tables do not match the ring order");
        return rep;
    }
    let e = ctx.module.m.identity();
    let mut order: Vec<&'static str> = Vec::new();
    let mut first: HashMap<&'static str, Option<Vec<usize>>> = HashMap::new();
    for (c, v) in ctx.defect(xi, mode) {
        let cell = &ctx.bar.cells[4][c];
        let shape: Vec<Shape> = cell.iter().map(LGen::shape).collect();
        let name = block_name(&shape);
        let slot = first.entry(name).or_insert_with(|| {
            order.push(name);
            None
        });
        if v != e && slot.is_none() {
            *slot = Some(cell.iter().flat_map(LGen::args).collect());
        }
    }
    for name in order {
        rep.record(name, first[name].clone());
    }
    rep
}

/// `δν` on the degree-3 cells.
pub fn coboundary(ctx: &CohomContext, nu: &Cochain2) -> Cochain5 {
    let flat = nu.flatten();
    let vals: Vec<usize> = (0..ctx.bar.cells[3].len()).map(|c| ctx.apply(3, &flat, c)).collect();
    Cochain5::from_flat(ctx.n(), &vals)
}

/// Invariant factors of the cohomology of `mode` with representative cocycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyGroup {
    pub mode: CocycleMode,
    pub factors: Vec<u64>,
    pub representatives: Vec<Cochain5>,
}

pub fn cohomology_group(ring: &FinRing, module: &Bimodule, mode: CocycleMode) -> Result<CohomologyGroup, CohomError> {
    let ctx = CohomContext::new(ring, module)?;
    let s = ctx.solver(mode, PivotOrder::First);
    let factors = s.factors();
    let representatives = (0..factors.len())
        .map(|k| ctx.from_vector(&s.representative(k)))
        .collect();
    Ok(CohomologyGroup {
        mode,
        factors,
        representatives,
    })
}

/// `q(a) = g₊(a,a)` with the laws it satisfies in `mode`.
pub fn quadratic_invariant(
    ctx: &CohomContext,
    xi: &Cochain5,
    mode: CocycleMode,
) -> Result<(Vec<usize>, Report), CohomError> {
    let check = is_cocycle(ctx, xi, mode);
    if let Some(c) = check.first_failure() {
        return Err(CohomError::NotACocycle(c.id.clone()));
    }
    let r = &ctx.ring;
    let m = &ctx.module.m;
    let q: Vec<usize> = r.elements().map(|a| xi.gplus[a][a]).collect();
    let mut rep = Report::new();
    let delta = |a: usize, b: usize| m.mul(q[r.plus(a, b)], m.mul(m.inv(q[a]), m.inv(q[b])));
    match mode {
        CocycleMode::H3_3 => {
            let bad = r
                .elements()
                .flat_map(|a| r.elements().map(move |b| (a, b)))
                .find(|&(a, b)| delta(a, b) != m.identity())
                .map(|(a, b)| vec![a, b]);
            rep.record("additive", bad);
            let two = r.elements().find(|&a| m.pow(q[a], 2) != m.identity()).map(|a| vec![a]);
            rep.record("two_torsion", two);
        }
        CocycleMode::H3_2 | CocycleMode::Twisted => {
            let homog = r
                .elements()
                .flat_map(|a| (-3i64..=3).map(move |k| (a, k)))
                .find(|&(a, k)| q[r.add.pow(a, k)] != m.pow(q[a], k * k))
                .map(|(a, k)| vec![a, k.rem_euclid(r.order() as i64) as usize]);
            rep.record("homogeneous", homog);
            let mut bil = None;
            'b: for a in r.elements() {
                for b in r.elements() {
                    for c in r.elements() {
                        let lhs = delta(r.plus(a, b), c);
                        if lhs != m.mul(delta(a, c), delta(b, c)) {
                            bil = Some(vec![a, b, c]);
                            break 'b;
                        }
                    }
                }
            }
            rep.record("bilinear_defect", bil);
            if mode == CocycleMode::Twisted && r.unit.is_some() {
                let central = r.elements().find(|&a| !ctx.module.is_central(r, q[a])).map(|a| vec![a]);
                rep.record("central", central);
            }
        }
    }
    Ok((q, rep))
}
