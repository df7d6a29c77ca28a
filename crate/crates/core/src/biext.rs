//! Biextensions and butterflies in trivialized coordinates `E = H × K × G₁`.

use crate::fingroup::{cyclic, trivial, FinGroup};
use crate::report::Report;
use crate::xmod::{validate_braiding, validate_xmod, BraidedXMod, XMod};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiextError {
    #[error("points do not share the coordinate required by the {law} law")]
    CoordinateMismatch { law: u8 },
    #[error("search space of size {size} exceeds the bound {bound}")]
    SearchSpaceTooLarge { size: u128, bound: u64 },
    #[error("interchange points lie over the wrong base points")]
    BadQuadruple,
}

/// A point `(h, k, a)` of the trivialized model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub h: usize,
    pub k: usize,
    pub a: usize,
}

impl Point {
    pub fn new(h: usize, k: usize, a: usize) -> Self {
        Point { h, k, a }
    }
}

/// Cocycle data `(g₁, g₂, x)` of a biextension of `H, K` by a braided crossed module.
///
/// Tables: `g1[h][h'][k]`, `g2[h][k][k']`, `x[h][k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiextCocycle {
    #[serde(rename = "H")]
    pub h: FinGroup,
    #[serde(rename = "K")]
    pub k: FinGroup,
    pub coeff: BraidedXMod,
    pub g1: Vec<Vec<Vec<usize>>>,
    pub g2: Vec<Vec<Vec<usize>>>,
    pub x: Vec<Vec<usize>>,
}

impl BiextCocycle {
    pub fn trivial(h: &FinGroup, k: &FinGroup, coeff: &BraidedXMod) -> Self {
        let e1 = coeff.g().identity();
        let e0 = coeff.pi().identity();
        let (nh, nk) = (h.order(), k.order());
        BiextCocycle {
            h: h.clone(),
            k: k.clone(),
            coeff: coeff.clone(),
            g1: vec![vec![vec![e1; nk]; nh]; nh],
            g2: vec![vec![vec![e1; nk]; nk]; nh],
            x: vec![vec![e0; nk]; nh],
        }
    }

    fn g1g(&self) -> &FinGroup {
        &self.coeff.base.g
    }

    fn g0g(&self) -> &FinGroup {
        &self.coeff.base.pi
    }

    /// `ȷ(h,k,a) = x(h,k)·∂a`.
    pub fn j(&self, p: Point) -> usize {
        self.g0g().mul(self.x[p.h][p.k], self.coeff.base.bd(p.a))
    }

    /// `(h,k,a) ×₁ (h',k,a') = (hh', k, g₁(h,h';k)·a^{x(h',k)}·a')`.
    pub fn mul1(&self, p: Point, q: Point) -> Result<Point, BiextError> {
        if p.k != q.k {
            return Err(BiextError::CoordinateMismatch { law: 1 });
        }
        let g = self.g1g();
        let a = g.prod(&[self.g1[p.h][q.h][p.k], self.coeff.base.act(p.a, self.x[q.h][p.k]), q.a]);
        Ok(Point::new(self.h.mul(p.h, q.h), p.k, a))
    }

    /// `(h,k,b) ×₂ (h,k',b') = (h, kk', g₂(h;k,k')·b^{x(h,k')}·b')`.
    pub fn mul2(&self, p: Point, q: Point) -> Result<Point, BiextError> {
        if p.h != q.h {
            return Err(BiextError::CoordinateMismatch { law: 2 });
        }
        let g = self.g1g();
        let a = g.prod(&[self.g2[p.h][p.k][q.k], self.coeff.base.act(p.a, self.x[p.h][q.k]), q.a]);
        Ok(Point::new(p.h, self.k.mul(p.k, q.k), a))
    }

    pub fn right_act(&self, p: Point, g: usize) -> Point {
        Point::new(p.h, p.k, self.g1g().mul(p.a, g))
    }

    /// `g·p = p·g^{ȷ(p)}`.
    pub fn left_act(&self, g: usize, p: Point) -> Point {
        self.right_act(p, self.coeff.base.act(g, self.j(p)))
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        let (nh, nk, ng) = (self.h.order(), self.k.order(), self.g1g().order());
        (0..nh).flat_map(move |h| (0..nk).flat_map(move |k| (0..ng).map(move |a| Point::new(h, k, a))))
    }

    pub fn has_shape(&self) -> bool {
        let (nh, nk) = (self.h.order(), self.k.order());
        let (n1, n0) = (self.g1g().order(), self.g0g().order());
        let cube = |t: &Vec<Vec<Vec<usize>>>, a: usize, b: usize, c: usize| {
            t.len() == a
                && t.iter()
                    .all(|r| r.len() == b && r.iter().all(|s| s.len() == c && s.iter().all(|&v| v < n1)))
        };
        cube(&self.g1, nh, nh, nk)
            && cube(&self.g2, nh, nk, nk)
            && self.x.len() == nh
            && self.x.iter().all(|r| r.len() == nk && r.iter().all(|&v| v < n0))
    }
}

/// Checks the cocycle identities for `(g₁, x)`, `(g₂, x)` and the mixed one.
pub fn verify_biext(c: &BiextCocycle) -> Report {
    let mut r = Report::new();
    r.merge("coeff.", validate_braiding(&c.coeff));
    if !c.has_shape() {
        r.fail("shape", vec![], "cocycle tables have wrong shape");
        return r;
    }
    let (h, k) = (&c.h, &c.k);
    let g = &c.coeff.base.g;
    let g0 = &c.coeff.base.pi;
    let m = &c.coeff.base;
    let mut eq16 = None;
    let mut eq17 = None;
    for a in h.elements() {
        for b in h.elements() {
            for z in k.elements() {
                if eq17.is_none() && g0.mul(c.x[a][z], c.x[b][z]) != g0.mul(c.x[h.mul(a, b)][z], m.bd(c.g1[a][b][z])) {
                    eq17 = Some(vec![a, b, z]);
                }
                if eq16.is_some() {
                    continue;
                }
                for d in h.elements() {
                    let lhs = g.mul(c.g1[h.mul(a, b)][d][z], m.act(c.g1[a][b][z], c.x[d][z]));
                    let rhs = g.mul(c.g1[a][h.mul(b, d)][z], c.g1[b][d][z]);
                    if lhs != rhs {
                        eq16 = Some(vec![a, b, d, z]);
                        break;
                    }
                }
            }
        }
    }
    r.record("eq16", eq16);
    r.record("eq17", eq17);
    let mut eq18 = None;
    let mut eq19 = None;
    for a in h.elements() {
        for z in k.elements() {
            for w in k.elements() {
                if eq19.is_none() && g0.mul(c.x[a][z], c.x[a][w]) != g0.mul(c.x[a][k.mul(z, w)], m.bd(c.g2[a][z][w])) {
                    eq19 = Some(vec![a, z, w]);
                }
                if eq18.is_some() {
                    continue;
                }
                for v in k.elements() {
                    let lhs = g.mul(c.g2[a][k.mul(z, w)][v], m.act(c.g2[a][z][w], c.x[a][v]));
                    let rhs = g.mul(c.g2[a][z][k.mul(w, v)], c.g2[a][w][v]);
                    if lhs != rhs {
                        eq18 = Some(vec![a, z, w, v]);
                        break;
                    }
                }
            }
        }
    }
    r.record("eq18", eq18);
    r.record("eq19", eq19);
    let mut eq20 = None;
    'outer: for a in h.elements() {
        for b in h.elements() {
            let ab = h.mul(a, b);
            for z in k.elements() {
                for w in k.elements() {
                    let zw = k.mul(z, w);
                    let lhs = g.prod(&[c.g2[ab][z][w], m.act(c.g1[a][b][z], c.x[ab][w]), c.g1[a][b][w]]);
                    let corr = m.act_inv(c.coeff.br(c.x[b][z], c.x[a][w]), c.x[b][w]);
                    let rhs = g.prod(&[c.g1[a][b][zw], m.act(c.g2[a][z][w], c.x[b][zw]), c.g2[b][z][w], corr]);
                    if lhs != rhs {
                        eq20 = Some(vec![a, b, z, w]);
                        break 'outer;
                    }
                }
            }
        }
    }
    r.record("eq20", eq20);
    r
}

/// Product under the chosen law (`1` or `2`).
pub fn partial_products(c: &BiextCocycle, law: u8, p: Point, q: Point) -> Result<Point, BiextError> {
    match law {
        1 => c.mul1(p, q),
        _ => c.mul2(p, q),
    }
}

/// The element `d` with `(u×₁u')×₂(v×₁v') = ((u×₂v)×₁(u'×₂v'))·d`.
pub fn interchange_defect(c: &BiextCocycle, u: Point, u2: Point, v: Point, v2: Point) -> Result<usize, BiextError> {
    let ok = u.k == u2.k && v.k == v2.k && u.h == v.h && u2.h == v2.h;
    if !ok {
        return Err(BiextError::BadQuadruple);
    }
    let lhs = c.mul2(c.mul1(u, u2)?, c.mul1(v, v2)?)?;
    let rhs = c.mul1(c.mul2(u, v)?, c.mul2(u2, v2)?)?;
    debug_assert_eq!((lhs.h, lhs.k), (rhs.h, rhs.k));
    let g = &c.coeff.base.g;
    Ok(g.mul(g.inv(rhs.a), lhs.a))
}

/// `⟨ȷ(u'), ȷ(v)⟩^{-ȷ(v')}`.
pub fn interchange_closed_form(c: &BiextCocycle, u2: Point, v: Point, v2: Point) -> usize {
    c.coeff.base.act_inv(c.coeff.br(c.j(u2), c.j(v)), c.j(v2))
}

/// Size of an exhaustive search over maps `X → Y`, saturating.
pub fn search_size(codomain: usize, domain: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..domain {
        acc = acc.saturating_mul(codomain as u128);
    }
    acc
}

/// Searches for `u: H × K → G₁` trivializing the cocycle.
pub fn is_coboundary(c: &BiextCocycle, bound: u64) -> Result<Option<Vec<Vec<usize>>>, BiextError> {
    let (nh, nk) = (c.h.order(), c.k.order());
    let g = &c.coeff.base.g;
    let size = search_size(g.order(), nh * nk);
    if size > bound as u128 {
        return Err(BiextError::SearchSpaceTooLarge { size, bound });
    }
    let m = &c.coeff.base;
    let (h, k) = (&c.h, &c.k);
    let cells = nh * nk;
    let mut u = vec![usize::MAX; cells];
    let at = |u: &[usize], a: usize, z: usize| u[a * nk + z];

    fn consistent(c: &BiextCocycle, u: &[usize], nk: usize, upto: usize) -> bool {
        let (h, k) = (&c.h, &c.k);
        let g = &c.coeff.base.g;
        let get = |a: usize, z: usize| u[a * nk + z];
        let set = |a: usize, z: usize| a * nk + z <= upto;
        let (a0, z0) = (upto / nk, upto % nk);
        if c.coeff.base.bd(get(a0, z0)) != c.x[a0][z0] {
            return false;
        }
        for a in h.elements() {
            for b in h.elements() {
                for z in k.elements() {
                    let ab = h.mul(a, b);
                    if set(ab, z) && set(a, z) && set(b, z) {
                        let touches = (ab * nk + z == upto) || (a * nk + z == upto) || (b * nk + z == upto);
                        if touches && g.mul(get(ab, z), c.g1[a][b][z]) != g.mul(get(a, z), get(b, z)) {
                            return false;
                        }
                    }
                }
            }
        }
        for a in h.elements() {
            for z in k.elements() {
                for w in k.elements() {
                    let zw = k.mul(z, w);
                    if set(a, zw) && set(a, z) && set(a, w) {
                        let touches = (a * nk + zw == upto) || (a * nk + z == upto) || (a * nk + w == upto);
                        if touches && g.mul(get(a, zw), c.g2[a][z][w]) != g.mul(get(a, z), get(a, w)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn go(c: &BiextCocycle, u: &mut Vec<usize>, nk: usize, pos: usize) -> bool {
        if pos == u.len() {
            return true;
        }
        for v in c.coeff.base.g.elements() {
            u[pos] = v;
            if consistent(c, u, nk, pos) && go(c, u, nk, pos + 1) {
                return true;
            }
        }
        u[pos] = usize::MAX;
        false
    }

    let _ = (m, h, k, at);
    if go(c, &mut u, nk, 0) {
        Ok(Some(
            (0..nh).map(|a| (0..nk).map(|z| u[a * nk + z]).collect()).collect(),
        ))
    } else {
        Ok(None)
    }
}

/// The cocycle obtained from the trivial one by re-trivializing along `u`:
/// `x = ∂u`, `g₁(h,h';k) = u(hh',k)⁻¹u(h,k)u(h',k)`, and likewise for `g₂`.
pub fn coboundary_of(h: &FinGroup, k: &FinGroup, coeff: &BraidedXMod, u: &[Vec<usize>]) -> BiextCocycle {
    let t = BiextCocycle::trivial(h, k, coeff);
    retrivialize(&t, u)
}

/// Cocycle read off after replacing the canonical points `(h,k,e)` by `(h,k,u(h,k))`.
pub fn retrivialize(c: &BiextCocycle, u: &[Vec<usize>]) -> BiextCocycle {
    let g = &c.coeff.base.g;
    let (h, k) = (&c.h, &c.k);
    let sec = |a: usize, z: usize| Point::new(a, z, u[a][z]);
    let mut out = c.clone();
    for a in h.elements() {
        for z in k.elements() {
            out.x[a][z] = c.j(sec(a, z));
        }
    }
    for a in h.elements() {
        for b in h.elements() {
            for z in k.elements() {
                let p = c.mul1(sec(a, z), sec(b, z)).unwrap();
                out.g1[a][b][z] = g.mul(g.inv(u[h.mul(a, b)][z]), p.a);
            }
        }
    }
    for a in h.elements() {
        for z in k.elements() {
            for w in k.elements() {
                let p = c.mul2(sec(a, z), sec(a, w)).unwrap();
                out.g2[a][z][w] = g.mul(g.inv(u[a][k.mul(z, w)]), p.a);
            }
        }
    }
    out
}

/// Butterfly data: a biextension over `H₀ × K₀` with trivializations `u₁`, `u₂`
/// of its pullbacks along the wing boundaries. Tables `u1[h₁][z]`, `u2[y][k₁]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ButterflyCocycle {
    pub base: BiextCocycle,
    pub wing_h: XMod,
    pub wing_k: XMod,
    pub u1: Vec<Vec<usize>>,
    pub u2: Vec<Vec<usize>>,
}

impl ButterflyCocycle {
    /// Wings `1 → H₀` and `1 → K₀`; the trivializations are empty conditions.
    pub fn with_trivial_wings(base: BiextCocycle) -> Self {
        let t = trivial();
        let e = base.coeff.g().identity();
        let wing_h = XMod::zero(&t, &base.h);
        let wing_k = XMod::zero(&t, &base.k);
        let u1 = vec![vec![e; base.k.order()]];
        let u2 = vec![vec![e]; base.h.order()];
        ButterflyCocycle {
            base,
            wing_h,
            wing_k,
            u1,
            u2,
        }
    }

    /// `s₁(h,z) = (∂h, z, u₁(h,z)⁻¹)`.
    pub fn s1(&self, h: usize, z: usize) -> Point {
        Point::new(self.wing_h.bd(h), z, self.base.coeff.g().inv(self.u1[h][z]))
    }

    /// `s₂(y,k) = (y, ∂k, u₂(y,k)⁻¹)`.
    pub fn s2(&self, y: usize, k: usize) -> Point {
        Point::new(y, self.wing_k.bd(k), self.base.coeff.g().inv(self.u2[y][k]))
    }
}

/// Checks the trivialization identities, their restriction agreement and compatibility.
pub fn verify_butterfly(b: &ButterflyCocycle) -> Report {
    let mut r = Report::new();
    r.merge("base.", verify_biext(&b.base));
    r.merge("wing_h.", validate_xmod(&b.wing_h));
    r.merge("wing_k.", validate_xmod(&b.wing_k));
    if !r.passed() {
        return r;
    }
    if b.wing_h.pi != b.base.h || b.wing_k.pi != b.base.k {
        r.fail("wings", vec![], "wing targets differ from the base groups");
        return r;
    }
    let c = &b.base;
    let g = c.coeff.g();
    let g0 = c.coeff.pi();
    let m = &c.coeff.base;
    let (h1, k1) = (&b.wing_h.g, &b.wing_k.g);
    let (h0, k0) = (&c.h, &c.k);
    let (dh, dk) = (&b.wing_h, &b.wing_k);
    let mut eq29 = None;
    'a: for p in h1.elements() {
        for q in h1.elements() {
            for z in k0.elements() {
                let lhs = g.mul(b.u1[h1.mul(p, q)][z], c.g1[dh.bd(p)][dh.bd(q)][z]);
                if lhs != g.mul(b.u1[p][z], b.u1[q][z]) {
                    eq29 = Some(vec![1, p, q, z]);
                    break 'a;
                }
            }
        }
    }
    if eq29.is_none() {
        'b: for p in h1.elements() {
            for z in k0.elements() {
                if c.x[dh.bd(p)][z] != m.bd(b.u1[p][z]) {
                    eq29 = Some(vec![2, p, z]);
                    break 'b;
                }
            }
        }
    }
    if eq29.is_none() {
        'c: for y in h0.elements() {
            for p in k1.elements() {
                for q in k1.elements() {
                    let lhs = g.mul(b.u2[y][k1.mul(p, q)], c.g2[y][dk.bd(p)][dk.bd(q)]);
                    if lhs != g.mul(b.u2[y][p], b.u2[y][q]) {
                        eq29 = Some(vec![3, y, p, q]);
                        break 'c;
                    }
                }
            }
        }
    }
    if eq29.is_none() {
        'd: for y in h0.elements() {
            for p in k1.elements() {
                if c.x[y][dk.bd(p)] != m.bd(b.u2[y][p]) {
                    eq29 = Some(vec![4, y, p]);
                    break 'd;
                }
            }
        }
    }
    r.record("eq29", eq29);
    let mut restr = None;
    'r: for p in h1.elements() {
        for q in k1.elements() {
            if b.u1[p][dk.bd(q)] != b.u2[dh.bd(p)][q] {
                restr = Some(vec![p, q]);
                break 'r;
            }
        }
    }
    r.record("restriction", restr);
    let uu = |p: usize, q: usize| b.u1[p][dk.bd(q)];
    let mut eq30 = None;
    'e: for p in h1.elements() {
        for q in k1.elements() {
            if c.x[dh.bd(p)][dk.bd(q)] != m.bd(uu(p, q)) {
                eq30 = Some(vec![3, p, q]);
                break 'e;
            }
            for p2 in h1.elements() {
                let lhs = g.mul(uu(h1.mul(p, p2), q), c.g1[dh.bd(p)][dh.bd(p2)][dk.bd(q)]);
                if lhs != g.mul(uu(p, q), uu(p2, q)) {
                    eq30 = Some(vec![1, p, p2, q]);
                    break 'e;
                }
            }
            for q2 in k1.elements() {
                let lhs = g.mul(uu(p, k1.mul(q, q2)), c.g2[dh.bd(p)][dk.bd(q)][dk.bd(q2)]);
                if lhs != g.mul(uu(p, q), uu(p, q2)) {
                    eq30 = Some(vec![2, p, q, q2]);
                    break 'e;
                }
            }
        }
    }
    r.record("eq30", eq30);
    // Compatibility of the sections with the laws.
    let mut eq22 = None;
    'f: for e in c.points() {
        for p in h1.elements() {
            let lhs = c.mul1(b.s1(p, e.k), e).unwrap();
            let rhs = c.mul1(e, b.s1(dh.act(p, e.h), e.k)).unwrap();
            if lhs != rhs {
                eq22 = Some(vec![1, e.h, e.k, e.a, p]);
                break 'f;
            }
        }
        for q in k1.elements() {
            let lhs = c.mul2(b.s2(e.h, q), e).unwrap();
            let rhs = c.mul2(e, b.s2(e.h, dk.act(q, e.k))).unwrap();
            if lhs != rhs {
                eq22 = Some(vec![2, e.h, e.k, e.a, q]);
                break 'f;
            }
        }
    }
    let _ = g0;
    r.record("eq22", eq22);
    r
}

/// Exhaustive search for trivializations `u₁, u₂` turning `base` into a butterfly.
pub fn search_butterfly(
    base: &BiextCocycle,
    wing_h: &XMod,
    wing_k: &XMod,
    bound: u64,
) -> Result<Option<ButterflyCocycle>, BiextError> {
    let g = base.coeff.g();
    let (n1, n2) = (wing_h.g.order() * base.k.order(), base.h.order() * wing_k.g.order());
    let size = search_size(g.order(), n1).saturating_add(search_size(g.order(), n2));
    if size > bound as u128 {
        return Err(BiextError::SearchSpaceTooLarge { size, bound });
    }
    let enumerate = |rows: usize, cols: usize| -> Vec<Vec<Vec<usize>>> {
        let total = search_size(g.order(), rows * cols) as usize;
        (0..total)
            .map(|mut code| {
                let mut t = vec![vec![0; cols]; rows];
                for row in t.iter_mut() {
                    for v in row.iter_mut() {
                        *v = code % g.order();
                        code /= g.order();
                    }
                }
                t
            })
            .collect()
    };
    let probe = |u1: Vec<Vec<usize>>, u2: Vec<Vec<usize>>| ButterflyCocycle {
        base: base.clone(),
        wing_h: wing_h.clone(),
        wing_k: wing_k.clone(),
        u1,
        u2,
    };
    let e = g.identity();
    let id_u2 = vec![vec![e; wing_k.g.order()]; base.h.order()];
    let id_u1 = vec![vec![e; base.k.order()]; wing_h.g.order()];
    let good1: Vec<_> = enumerate(wing_h.g.order(), base.k.order())
        .into_iter()
        .filter(|u1| {
            let r = verify_butterfly(&probe(u1.clone(), id_u2.clone()));
            r.get("eq29")
                .is_some_and(|c| c.passed || c.counterexample.as_ref().is_some_and(|w| w[0] >= 3))
        })
        .collect();
    let good2: Vec<_> = enumerate(base.h.order(), wing_k.g.order())
        .into_iter()
        .filter(|u2| {
            let r = verify_butterfly(&probe(id_u1.clone(), u2.clone()));
            r.get("eq29")
                .is_some_and(|c| c.passed || c.counterexample.as_ref().is_some_and(|w| w[0] <= 2))
        })
        .collect();
    for u1 in &good1 {
        for u2 in &good2 {
            let b = probe(u1.clone(), u2.clone());
            if verify_butterfly(&b).passed() {
                return Ok(Some(b));
            }
        }
    }
    Ok(None)
}

/// Checks both braided-commutation identities on the trivialized model.
///
/// `braid_h[y][y']` is the bracket of `H₀` into `H₁`, `braid_k` likewise.
pub fn braided_butterfly_check(b: &ButterflyCocycle, braid_h: &[Vec<usize>], braid_k: &[Vec<usize>]) -> Report {
    let mut r = Report::new();
    let bh = BraidedXMod::new(b.wing_h.clone(), braid_h.to_vec());
    let bk = BraidedXMod::new(b.wing_k.clone(), braid_k.to_vec());
    r.merge("braid_h.", validate_braiding(&bh));
    r.merge("braid_k.", validate_braiding(&bk));
    if !r.passed() {
        return r;
    }
    let c = &b.base;
    let (h1, k1) = (&b.wing_h.g, &b.wing_k.g);
    let mut first = None;
    'a: for e in c.points() {
        for y2 in c.h.elements() {
            for a2 in c.coeff.g().elements() {
                let e2 = Point::new(y2, e.k, a2);
                let lhs = c.mul1(e2, e).unwrap();
                let s = b.s1(h1.inv(braid_h[y2][e.h]), e.k);
                let inner = c.mul1(c.mul1(e, e2).unwrap(), s).unwrap();
                let rhs = c.right_act(inner, c.coeff.br(c.j(e), c.j(e2)));
                if lhs != rhs {
                    first = Some(vec![e.h, e.k, e.a, y2, a2]);
                    break 'a;
                }
            }
        }
    }
    r.record("eq35.first", first);
    let mut second = None;
    'b: for e in c.points() {
        for z2 in c.k.elements() {
            for a2 in c.coeff.g().elements() {
                let e2 = Point::new(e.h, z2, a2);
                let lhs = c.mul2(e2, e).unwrap();
                let s = b.s2(e.h, k1.inv(braid_k[z2][e.k]));
                let inner = c.mul2(c.mul2(e, e2).unwrap(), s).unwrap();
                let rhs = c.right_act(inner, c.coeff.br(c.j(e), c.j(e2)));
                if lhs != rhs {
                    second = Some(vec![e.h, e.k, e.a, z2, a2]);
                    break 'b;
                }
            }
        }
    }
    r.record("eq35.second", second);
    r
}

/// Coefficient `ℤ/2 → 1` with trivial bracket.
pub fn f2_coefficient() -> BraidedXMod {
    BraidedXMod::trivial(XMod::zero(&cyclic(2), &trivial()))
}

/// `H = K = ℤ/2`, `g₁(h,h';k) = hh'k`, `g₂(h;k,k') = hkk'`, `x = 0`.
pub fn f2_trilinear() -> BiextCocycle {
    let z2 = cyclic(2);
    let mut c = BiextCocycle::trivial(&z2, &z2, &f2_coefficient());
    for a in 0..2 {
        for b in 0..2 {
            for z in 0..2 {
                c.g1[a][b][z] = a * b * z;
                c.g2[a][b][z] = a * b * z;
            }
        }
    }
    c
}

/// `Q(k) = k(k-1)/2` on the residues `0..4`.
fn tri(k: usize) -> usize {
    k * (k.saturating_sub(1)) / 2
}

/// `H = K = ℤ/4` over the `ℤ/4` multiplication bracket with `x(h,k) = hk`.
///
/// `g₁(h,h';k) = hh'Q(k)`, `g₂(h;k,k') = 2Q(h)·carry(k,k')`.
pub fn z4_bracket_biext() -> BiextCocycle {
    let z4 = cyclic(4);
    let coeff = crate::xmod::multiplication_bracket(4);
    let mut c = BiextCocycle::trivial(&z4, &z4, &coeff);
    for a in 0..4 {
        for b in 0..4 {
            c.x[a][b] = a * b % 4;
            for z in 0..4 {
                c.g1[a][b][z] = a * b * tri(z) % 4;
                let carry = usize::from(b + z >= 4);
                c.g2[a][b][z] = 2 * tri(a) * carry % 4;
            }
        }
    }
    c
}
