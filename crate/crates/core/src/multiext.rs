//! Explicit finite models of multi-extensions with trivialized pullbacks
//! (n-butterflies): a set with projection, equivariant map `ȷ`, right `G₁`-action,
//! partial products and sections. Includes juxtaposition composition,
//! isomorphism search and the contracted product.

use crate::biext::{BiextCocycle, ButterflyCocycle};
use crate::fingroup::FinGroup;
use crate::report::Report;
use crate::xmod::{is_symmetric, validate_braiding, validate_xmod, BraidedXMod, XMod};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

const UNDEF: u32 = u32::MAX;

/// Largest model the dense product tables accept.
pub const MAX_ELEMENTS: usize = 1 << 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiExtError {
    #[error("wing {slot} does not match the coefficient of the inner factor")]
    WingMismatch { slot: usize },
    #[error("coefficient crossed module fails the braiding identities")]
    NonBraidedCoefficient,
    #[error("coefficient braiding is not symmetric")]
    NotSymmetric,
    #[error("models differ in arity, wings or coefficient")]
    Incompatible,
    #[error("operation needs arity {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("search space of size {size} exceeds the bound {bound}")]
    SearchSpaceTooLarge { size: u128, bound: u64 },
    #[error("model has {0} elements, above the supported maximum")]
    TooLarge(usize),
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("no isomorphism between the two bracketings")]
    NoAssociator,
}

/// Mixed-radix encoding of base tuples, first slot most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Radix {
    sizes: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl Radix {
    fn new(sizes: Vec<usize>) -> Self {
        let mut strides = vec![1; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        let total = sizes.iter().product();
        Radix { sizes, strides, total }
    }

    fn code(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    fn tuple(&self, mut c: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let v = c / s;
                c %= s;
                v
            })
            .collect()
    }
}

/// Per-element data: base tuple and `ȷ` value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub base: Vec<usize>,
    pub j: usize,
}

/// Wire form of a model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiExtSpec {
    pub arity: usize,
    pub wings: Vec<XMod>,
    pub coeff: BraidedXMod,
    pub elements: Vec<Element>,
    /// `action[e][g] = e·g`.
    pub action: Vec<Vec<usize>>,
    /// Per law, triples `[e, f, e×f]`.
    pub products: Vec<Vec<[usize; 3]>>,
    /// Per law, pairs `[key, s(key)]`.
    pub sections: Vec<Vec<(Vec<usize>, usize)>>,
}

/// An n-butterfly given by explicit finite tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiExt {
    arity: usize,
    wings: Vec<XMod>,
    coeff: BraidedXMod,
    elems: Vec<Element>,
    act: Vec<Vec<usize>>,
    prods: Vec<Vec<u32>>,
    sections: Vec<Vec<u32>>,
    radix: Radix,
    key_radix: Vec<Radix>,
    /// Least element of each fiber, by base code.
    rep: Vec<usize>,
    /// `coord[e] = g` with `e = rep·g`.
    coord: Vec<usize>,
    code: Vec<usize>,
}

impl Serialize for MultiExt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiExt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = MultiExtSpec::deserialize(d)?;
        MultiExt::from_spec(spec).map_err(serde::de::Error::custom)
    }
}

/// Elements of `g`, identity first, then ascending.
fn identity_first(g: &FinGroup) -> Vec<usize> {
    let e = g.identity();
    std::iter::once(e).chain(g.elements().filter(|&a| a != e)).collect()
}

impl MultiExt {
    /// Assembles a model; `prod(i, e, f)` is called on every pair agreeing off slot `i`
    /// and `section(i, key)` on every key.
    pub fn from_fns(
        wings: Vec<XMod>,
        coeff: BraidedXMod,
        elems: Vec<Element>,
        act: Vec<Vec<usize>>,
        mut prod: impl FnMut(usize, usize, usize) -> usize,
        mut section: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self, MultiExtError> {
        let mut m = MultiExt::skeleton(wings, coeff, elems, act)?;
        let n = m.elems.len();
        for i in 0..m.arity {
            let rows = m.rows(i);
            for row in rows.values() {
                for &e in row {
                    for &f in row {
                        let v = prod(i, e, f);
                        if v >= n {
                            return Err(MultiExtError::Malformed(format!("product out of range in law {i}")));
                        }
                        m.prods[i][e * n + f] = v as u32;
                    }
                }
            }
            for c in 0..m.key_radix[i].total {
                let key = m.key_radix[i].tuple(c);
                let v = section(i, &key);
                if v >= n {
                    return Err(MultiExtError::Malformed(format!("section out of range in law {i}")));
                }
                m.sections[i][c] = v as u32;
            }
        }
        Ok(m)
    }

    fn skeleton(
        wings: Vec<XMod>,
        coeff: BraidedXMod,
        elems: Vec<Element>,
        act: Vec<Vec<usize>>,
    ) -> Result<Self, MultiExtError> {
        let arity = wings.len();
        if arity == 0 {
            return Err(MultiExtError::Malformed("arity must be positive".into()));
        }
        let n = elems.len();
        if n > MAX_ELEMENTS {
            return Err(MultiExtError::TooLarge(n));
        }
        let radix = Radix::new(wings.iter().map(|w| w.pi.order()).collect());
        let key_radix: Vec<Radix> = (0..arity)
            .map(|i| {
                let mut s = radix.sizes.clone();
                s[i] = wings[i].g.order();
                Radix::new(s)
            })
            .collect();
        let ng = coeff.g().order();
        for e in &elems {
            if e.base.len() != arity
                || e.base.iter().zip(&radix.sizes).any(|(a, s)| a >= s)
                || e.j >= coeff.pi().order()
            {
                return Err(MultiExtError::Malformed("element base or ȷ out of range".into()));
            }
        }
        if act.len() != n || act.iter().any(|r| r.len() != ng || r.iter().any(|&v| v >= n)) {
            return Err(MultiExtError::Malformed("action table has wrong shape".into()));
        }
        let code: Vec<usize> = elems.iter().map(|e| radix.code(&e.base)).collect();
        let mut rep = vec![usize::MAX; radix.total];
        for (e, &c) in code.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = e;
            }
        }
        let mut coord = vec![usize::MAX; n];
        for &r in rep.iter().filter(|&&r| r != usize::MAX) {
            for g in identity_first(coeff.g()) {
                let e = act[r][g];
                if coord[e] == usize::MAX {
                    coord[e] = g;
                }
            }
        }
        Ok(MultiExt {
            arity,
            prods: vec![vec![UNDEF; n * n]; arity],
            sections: key_radix.iter().map(|k| vec![UNDEF; k.total]).collect(),
            wings,
            coeff,
            elems,
            act,
            radix,
            key_radix,
            rep,
            coord,
            code,
        })
    }

    pub fn from_spec(s: MultiExtSpec) -> Result<Self, MultiExtError> {
        if s.wings.len() != s.arity {
            return Err(MultiExtError::Malformed(
                "arity differs from the number of wings".into(),
            ));
        }
        let mut m = MultiExt::skeleton(s.wings, s.coeff, s.elements, s.action)?;
        let n = m.elems.len();
        if s.products.len() != m.arity || s.sections.len() != m.arity {
            return Err(MultiExtError::Malformed(
                "one product and one section table per law".into(),
            ));
        }
        for (i, table) in s.products.iter().enumerate() {
            for &[e, f, v] in table {
                if e >= n || f >= n || v >= n {
                    return Err(MultiExtError::Malformed(format!(
                        "product index out of range in law {i}"
                    )));
                }
                m.prods[i][e * n + f] = v as u32;
            }
        }
        for (i, table) in s.sections.iter().enumerate() {
            for (key, v) in table {
                let ok = key.len() == m.arity && key.iter().zip(&m.key_radix[i].sizes).all(|(a, b)| a < b);
                if !ok || *v >= n {
                    return Err(MultiExtError::Malformed(format!(
                        "section entry out of range in law {i}"
                    )));
                }
                let c = m.key_radix[i].code(key);
                m.sections[i][c] = *v as u32;
            }
        }
        Ok(m)
    }

    pub fn to_spec(&self) -> MultiExtSpec {
        let n = self.len();
        let products = (0..self.arity)
            .map(|i| {
                let mut out = Vec::new();
                for e in 0..n {
                    for f in 0..n {
                        let v = self.prods[i][e * n + f];
                        if v != UNDEF {
                            out.push([e, f, v as usize]);
                        }
                    }
                }
                out
            })
            .collect();
        let sections = (0..self.arity)
            .map(|i| {
                (0..self.key_radix[i].total)
                    .filter(|&c| self.sections[i][c] != UNDEF)
                    .map(|c| (self.key_radix[i].tuple(c), self.sections[i][c] as usize))
                    .collect()
            })
            .collect();
        MultiExtSpec {
            arity: self.arity,
            wings: self.wings.clone(),
            coeff: self.coeff.clone(),
            elements: self.elems.clone(),
            action: self.act.clone(),
            products,
            sections,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn wings(&self) -> &[XMod] {
        &self.wings
    }

    pub fn coeff(&self) -> &BraidedXMod {
        &self.coeff
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn base(&self, e: usize) -> &[usize] {
        &self.elems[e].base
    }

    pub fn j(&self, e: usize) -> usize {
        self.elems[e].j
    }

    /// `e·g`.
    pub fn act(&self, e: usize, g: usize) -> usize {
        self.act[e][g]
    }

    /// `g·e = e·g^{ȷ(e)}`.
    pub fn left_act(&self, g: usize, e: usize) -> usize {
        self.act[e][self.coeff.base.act(g, self.j(e))]
    }

    /// `e ×_i f`, or `None` off the domain of the law.
    pub fn mul(&self, i: usize, e: usize, f: usize) -> Option<usize> {
        let v = self.prods[i][e * self.len() + f];
        (v != UNDEF).then_some(v as usize)
    }

    /// Overwrites one product entry (used to probe validators).
    pub fn set_product(&mut self, i: usize, e: usize, f: usize, v: usize) {
        let n = self.len();
        self.prods[i][e * n + f] = v as u32;
    }

    /// `s_i(key)`; slot `i` of `key` lies in `H_{i,1}`.
    pub fn section(&self, i: usize, key: &[usize]) -> Option<usize> {
        let v = self.sections[i][self.key_radix[i].code(key)];
        (v != UNDEF).then_some(v as usize)
    }

    pub fn base_count(&self) -> usize {
        self.radix.total
    }

    pub fn base_code(&self, base: &[usize]) -> usize {
        self.radix.code(base)
    }

    pub fn base_tuple(&self, code: usize) -> Vec<usize> {
        self.radix.tuple(code)
    }

    pub fn element_code(&self, e: usize) -> usize {
        self.code[e]
    }

    /// Least element over `base`.
    pub fn fiber_rep(&self, base: &[usize]) -> usize {
        self.rep[self.radix.code(base)]
    }

    /// `rep(base)·g`.
    pub fn point(&self, base: &[usize], g: usize) -> usize {
        self.act[self.fiber_rep(base)][g]
    }

    /// `g` with `e = rep·g`.
    pub fn coord(&self, e: usize) -> usize {
        self.coord[e]
    }

    /// The unique `g` with `e·g = f` for `e`, `f` in one fiber.
    pub fn divide(&self, e: usize, f: usize) -> usize {
        let g = self.coeff.g();
        g.mul(g.inv(self.coord[e]), self.coord[f])
    }

    pub fn key_count(&self, i: usize) -> usize {
        self.key_radix[i].total
    }

    pub fn key_tuple(&self, i: usize, c: usize) -> Vec<usize> {
        self.key_radix[i].tuple(c)
    }

    /// Elements grouped by their base with slot `i` erased.
    fn rows(&self, i: usize) -> BTreeMap<usize, Vec<usize>> {
        let mut rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (e, el) in self.elems.iter().enumerate() {
            let k = self.code[e] - el.base[i] * self.radix.strides[i];
            rows.entry(k).or_default().push(e);
        }
        rows
    }

    /// Base of the target of law `i` applied to `a`, `b`.
    fn mul_base(&self, i: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut out = a.to_vec();
        out[i] = self.wings[i].pi.mul(a[i], b[i]);
        out
    }

    /// The base point `∂`-image of a section key.
    pub fn key_base(&self, i: usize, key: &[usize]) -> Vec<usize> {
        let mut b = key.to_vec();
        b[i] = self.wings[i].bd(key[i]);
        b
    }

    /// Unit of law `i` over `base` (which must have `base[i] = e`): `s_i` at `h = e`.
    pub fn unit(&self, i: usize, base: &[usize]) -> Option<usize> {
        let mut key = base.to_vec();
        key[i] = self.wings[i].g.identity();
        self.section(i, &key)
    }

    /// General trivialized model on `∏ H_{i,0} × G₁`:
    /// `(b,a) ×_i (b',a') = (b·_i b', g(i, b, b'_i)·a^{x(b')}·a')` and
    /// `s_i(key) = (∂_i key, u(i, key)⁻¹)`.
    pub fn trivialized(
        wings: Vec<XMod>,
        coeff: BraidedXMod,
        x: impl Fn(&[usize]) -> usize,
        g: impl Fn(usize, &[usize], usize) -> usize,
        u: impl Fn(usize, &[usize]) -> usize,
    ) -> Result<Self, MultiExtError> {
        let radix = Radix::new(wings.iter().map(|w| w.pi.order()).collect());
        let g1 = coeff.g().clone();
        let order = identity_first(&g1);
        let mut pos = vec![0; g1.order()];
        for (p, &a) in order.iter().enumerate() {
            pos[a] = p;
        }
        let ng = g1.order();
        let idx = |c: usize, a: usize| c * ng + pos[a];
        let mut elems = Vec::with_capacity(radix.total * ng);
        let mut coords = Vec::with_capacity(radix.total * ng);
        let xs: Vec<usize> = (0..radix.total).map(|c| x(&radix.tuple(c))).collect();
        for c in 0..radix.total {
            let b = radix.tuple(c);
            for &a in &order {
                elems.push(Element {
                    base: b.clone(),
                    j: coeff.pi().mul(xs[c], coeff.base.bd(a)),
                });
                coords.push((c, a));
            }
        }
        let act: Vec<Vec<usize>> = coords
            .iter()
            .map(|&(c, a)| g1.elements().map(|h| idx(c, g1.mul(a, h))).collect())
            .collect();
        let wings2 = wings.clone();
        let coeff2 = coeff.clone();
        let prod = |i: usize, e: usize, f: usize| {
            let (c, a) = coords[e];
            let (c2, a2) = coords[f];
            let b = radix.tuple(c);
            let b2 = radix.tuple(c2);
            let mut out = b.clone();
            out[i] = wings2[i].pi.mul(b[i], b2[i]);
            let val = g1.prod(&[g(i, &b, b2[i]), coeff2.base.act(a, xs[c2]), a2]);
            idx(radix.code(&out), val)
        };
        let sec = |i: usize, key: &[usize]| {
            let mut b = key.to_vec();
            b[i] = wings[i].bd(key[i]);
            idx(radix.code(&b), g1.inv(u(i, key)))
        };
        let prod_cell = std::cell::RefCell::new(prod);
        MultiExt::from_fns(
            wings.clone(),
            coeff.clone(),
            elems,
            act,
            |i, e, f| (prod_cell.borrow_mut())(i, e, f),
            sec,
        )
    }

    /// The trivial n-butterfly over the given wings.
    pub fn trivial(wings: Vec<XMod>, coeff: BraidedXMod) -> Result<Self, MultiExtError> {
        let e0 = coeff.pi().identity();
        let e1 = coeff.g().identity();
        MultiExt::trivialized(wings, coeff, |_| e0, |_, _, _| e1, |_, _| e1)
    }

    /// The identity unary butterfly of `H• = (H₁ → H₀)`: points `(y, a)` with
    /// `ȷ = y·∂a`, product `(y,a)(y',a') = (yy', a^{y'}a')` and `s(h) = (∂h, h⁻¹)`.
    pub fn identity(h: &BraidedXMod) -> Result<Self, MultiExtError> {
        let e1 = h.g().identity();
        MultiExt::trivialized(vec![h.base.clone()], h.clone(), |b| b[0], |_, _, _| e1, |_, key| key[0])
    }

    /// The arity-2 model of a butterfly cocycle on `H₀ × K₀ × G₁`.
    pub fn from_cocycle(b: &ButterflyCocycle) -> Result<Self, MultiExtError> {
        let c = &b.base;
        MultiExt::trivialized(
            vec![b.wing_h.clone(), b.wing_k.clone()],
            c.coeff.clone(),
            |t| c.x[t[0]][t[1]],
            |i, t, w| {
                if i == 0 {
                    c.g1[t[0]][w][t[1]]
                } else {
                    c.g2[t[0]][t[1]][w]
                }
            },
            |i, key| {
                if i == 0 {
                    b.u1[key[0]][key[1]]
                } else {
                    b.u2[key[0]][key[1]]
                }
            },
        )
    }

    /// Least element of every fiber, indexed by base code.
    pub fn canonical_sections(&self) -> Vec<usize> {
        self.rep.clone()
    }
}

/// Per-invariant validation of a model.
pub fn validate_multiext(m: &MultiExt) -> Report {
    let mut r = Report::new();
    for (i, w) in m.wings.iter().enumerate() {
        r.merge(&format!("wing{i}."), validate_xmod(w));
    }
    r.merge("coeff.", validate_braiding(&m.coeff));
    if !r.passed() {
        return r;
    }
    let n = m.len();
    let g1 = m.coeff.g();
    let g0 = m.coeff.pi();
    let xm = &m.coeff.base;

    // Torsor structure.
    let mut torsor = None;
    if m.rep.contains(&usize::MAX) {
        let c = m.rep.iter().position(|&x| x == usize::MAX).unwrap();
        torsor = Some(m.radix.tuple(c));
    }
    if torsor.is_none() {
        'a: for e in 0..n {
            if m.act(e, g1.identity()) != e || m.coord[e] == usize::MAX || m.code[m.act(e, 0)] != m.code[e] {
                torsor = Some(vec![e]);
                break;
            }
            for a in g1.elements() {
                if m.code[m.act(e, a)] != m.code[e] {
                    torsor = Some(vec![e, a]);
                    break 'a;
                }
                for b in g1.elements() {
                    if m.act(m.act(e, a), b) != m.act(e, g1.mul(a, b)) {
                        torsor = Some(vec![e, a, b]);
                        break 'a;
                    }
                }
            }
        }
    }
    if torsor.is_none() {
        // free: fiber size equals |G₁| everywhere
        let mut count = vec![0usize; m.radix.total];
        for &c in &m.code {
            count[c] += 1;
        }
        if let Some(c) = count.iter().position(|&k| k != g1.order()) {
            torsor = Some(m.radix.tuple(c));
        }
    }
    r.record("torsor.free_transitive", torsor.clone());
    if torsor.is_some() {
        return r;
    }
    let jeq = (0..n)
        .flat_map(|e| g1.elements().map(move |a| (e, a)))
        .find(|&(e, a)| m.j(m.act(e, a)) != g0.mul(m.j(e), xm.bd(a)))
        .map(|(e, a)| vec![e, a]);
    r.record("torsor.j_equivariant", jeq);

    for i in 0..m.arity {
        let rows = m.rows(i);
        let mut domain = None;
        let mut fiber = None;
        let mut jhom = None;
        let mut bimod = None;
        'p: for e in 0..n {
            for f in 0..n {
                let same_row = (0..m.arity).all(|k| k == i || m.base(e)[k] == m.base(f)[k]);
                let v = m.mul(i, e, f);
                match (same_row, v) {
                    (true, None) | (false, Some(_)) => {
                        domain = Some(vec![e, f]);
                        break 'p;
                    }
                    (false, None) => {}
                    (true, Some(v)) => {
                        if fiber.is_none() && m.base(v) != m.mul_base(i, m.base(e), m.base(f)).as_slice() {
                            fiber = Some(vec![e, f]);
                        }
                        if jhom.is_none() && m.j(v) != g0.mul(m.j(e), m.j(f)) {
                            jhom = Some(vec![e, f]);
                        }
                    }
                }
            }
        }
        r.record(format!("product{i}.domain"), domain.clone());
        if domain.is_some() {
            return r;
        }
        r.record(format!("product{i}.fiber"), fiber.clone());
        r.record(format!("product{i}.j_hom"), jhom);
        if fiber.is_some() {
            return r;
        }
        // (e·a) × (f·b) = (e×f)·a^{ȷ(f)}·b, checked on fiber representatives.
        'b: for row in rows.values() {
            for &e in row.iter().filter(|&&e| m.coord[e] == g1.identity()) {
                for &f in row.iter().filter(|&&f| m.coord[f] == g1.identity()) {
                    let ef = m.mul(i, e, f).unwrap();
                    for a in g1.elements() {
                        for b in g1.elements() {
                            let lhs = m.mul(i, m.act(e, a), m.act(f, b)).unwrap();
                            let rhs = m.act(ef, g1.mul(xm.act(a, m.j(f)), b));
                            if lhs != rhs {
                                bimod = Some(vec![e, f, a, b]);
                                break 'b;
                            }
                        }
                    }
                }
            }
        }
        r.record(format!("product{i}.bimodule"), bimod);
        let mut assoc = None;
        'c: for row in rows.values() {
            for &a in row {
                for &b in row {
                    let ab = m.mul(i, a, b).unwrap();
                    for &c in row {
                        let bc = m.mul(i, b, c).unwrap();
                        if m.mul(i, ab, c) != m.mul(i, a, bc) {
                            assoc = Some(vec![a, b, c]);
                            break 'c;
                        }
                    }
                }
            }
        }
        r.record(format!("product{i}.associative"), assoc);
    }
    if !r.passed() {
        return r;
    }

    // Interchange with the bracket correction.
    for i in 0..m.arity {
        for k in i + 1..m.arity {
            let defect = interchange_scan(m, i, k);
            r.record(format!("interchange{i}{k}"), defect);
        }
    }

    // Sections.
    for i in 0..m.arity {
        let kr = &m.key_radix[i];
        let mut shape = None;
        for c in 0..kr.total {
            let key = kr.tuple(c);
            match m.section(i, &key) {
                None => {
                    shape = Some(key);
                    break;
                }
                Some(s) => {
                    if m.base(s) != m.key_base(i, &key).as_slice() || m.j(s) != g0.identity() {
                        shape = Some(key);
                        break;
                    }
                }
            }
        }
        r.record(format!("section{i}.base_and_j"), shape.clone());
        if shape.is_some() {
            continue;
        }
        // multiplicativity in every variable
        let mut mult = None;
        'm: for c in 0..kr.total {
            let key = kr.tuple(c);
            let s = m.section(i, &key).unwrap();
            for l in 0..m.arity {
                let slot_size = kr.sizes[l];
                for w in 0..slot_size {
                    let mut key2 = key.clone();
                    key2[l] = w;
                    let mut key3 = key.clone();
                    key3[l] = if l == i {
                        m.wings[i].g.mul(key[l], w)
                    } else {
                        m.wings[l].pi.mul(key[l], w)
                    };
                    let s2 = m.section(i, &key2).unwrap();
                    if m.mul(l, s, s2) != m.section(i, &key3) {
                        mult = Some(vec![l, c, w]);
                        break 'm;
                    }
                }
            }
        }
        r.record(format!("section{i}.multiplicative"), mult);
        // compatibility: s_i(h, …) ×_i e = e ×_i s_i(h^{y_i}, …)
        let mut compat = None;
        'q: for e in 0..n {
            for h in m.wings[i].g.elements() {
                let mut key = m.base(e).to_vec();
                key[i] = h;
                let mut key2 = key.clone();
                key2[i] = m.wings[i].act(h, m.base(e)[i]);
                let l = m.mul(i, m.section(i, &key).unwrap(), e);
                let rr = m.mul(i, e, m.section(i, &key2).unwrap());
                if l != rr {
                    compat = Some(vec![e, h]);
                    break 'q;
                }
            }
        }
        r.record(format!("section{i}.compatible"), compat);
        // centrality over ∂h = e
        let mut central = None;
        'z: for c in 0..kr.total {
            let key = kr.tuple(c);
            if m.wings[i].bd(key[i]) != m.wings[i].pi.identity() {
                continue;
            }
            let s = m.section(i, &key).unwrap();
            let unit = m.unit(i, m.base(s)).unwrap();
            for g in g1.elements() {
                let ig = m.act(unit, g);
                if m.mul(i, s, ig) != m.mul(i, ig, s) {
                    central = Some(vec![c, g]);
                    break 'z;
                }
            }
        }
        r.record(format!("section{i}.central"), central);
    }
    for i in 0..m.arity {
        for k in i + 1..m.arity {
            let mut restr = None;
            let mut sizes = m.radix.sizes.clone();
            sizes[i] = m.wings[i].g.order();
            sizes[k] = m.wings[k].g.order();
            let both = Radix::new(sizes);
            for c in 0..both.total {
                let t = both.tuple(c);
                let mut ki = t.clone();
                ki[k] = m.wings[k].bd(t[k]);
                let mut kk = t.clone();
                kk[i] = m.wings[i].bd(t[i]);
                if m.section(i, &ki) != m.section(k, &kk) {
                    restr = Some(t);
                    break;
                }
            }
            r.record(format!("restriction{i}{k}"), restr);
        }
    }
    // central unit over the identity base
    let ones: Vec<usize> = m.wings.iter().map(|w| w.pi.identity()).collect();
    let unit_ok = (0..m.arity)
        .map(|i| m.unit(i, &ones))
        .collect::<Option<Vec<_>>>()
        .and_then(|us| {
            let u = us[0];
            let good = us.iter().all(|&v| v == u)
                && (0..m.arity).all(|i| m.mul(i, u, u) == Some(u))
                && m.j(u) == g0.identity();
            good.then_some(u)
        });
    r.record("unit", if unit_ok.is_some() { None } else { Some(ones) });
    r
}

/// First quadruple violating `(u×_i u')×_k(v×_i v') = ((u×_k v)×_i(u'×_k v'))·⟨ȷ(u'),ȷ(v)⟩^{-ȷ(v')}`.
fn interchange_scan(m: &MultiExt, i: usize, k: usize) -> Option<Vec<usize>> {
    let g1 = m.coeff.g();
    let xm = &m.coeff.base;
    let hi = &m.wings[i].pi;
    let hk = &m.wings[k].pi;
    for u in 0..m.len() {
        let b = m.base(u).to_vec();
        for yi in hi.elements() {
            for yk in hk.elements() {
                let mut b_u2 = b.clone();
                b_u2[i] = yi;
                let mut b_v = b.clone();
                b_v[k] = yk;
                let mut b_v2 = b_u2.clone();
                b_v2[k] = yk;
                for a in g1.elements() {
                    let u2 = m.point(&b_u2, a);
                    for c in g1.elements() {
                        let v = m.point(&b_v, c);
                        for d in g1.elements() {
                            let v2 = m.point(&b_v2, d);
                            let lhs = m.mul(k, m.mul(i, u, u2)?, m.mul(i, v, v2)?)?;
                            let rhs0 = m.mul(i, m.mul(k, u, v)?, m.mul(k, u2, v2)?)?;
                            let corr = xm.act_inv(m.coeff.br(m.j(u2), m.j(v)), m.j(v2));
                            if lhs != m.act(rhs0, corr) {
                                return Some(vec![u, u2, v, v2]);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Reads off `(g₁, g₂, x; u₁, u₂)` from an arity-2 model using one chosen point per fiber.
pub fn to_cocycle(m: &MultiExt, choice: &[usize]) -> Result<ButterflyCocycle, MultiExtError> {
    if m.arity != 2 {
        return Err(MultiExtError::Arity {
            expected: 2,
            got: m.arity,
        });
    }
    if choice.len() != m.base_count() || choice.iter().enumerate().any(|(c, &e)| e >= m.len() || m.code[e] != c) {
        return Err(MultiExtError::Malformed(
            "section choice must pick one point per fiber".into(),
        ));
    }
    let h = m.wings[0].pi.clone();
    let k = m.wings[1].pi.clone();
    let g = m.coeff.g().clone();
    let sigma = |a: usize, z: usize| choice[m.radix.code(&[a, z])];
    let mut c = BiextCocycle::trivial(&h, &k, &m.coeff);
    for a in h.elements() {
        for z in k.elements() {
            c.x[a][z] = m.j(sigma(a, z));
        }
    }
    for a in h.elements() {
        for b in h.elements() {
            for z in k.elements() {
                let p = m.mul(0, sigma(a, z), sigma(b, z)).expect("law 1 defined on the row");
                c.g1[a][b][z] = m.divide(sigma(h.mul(a, b), z), p);
            }
        }
    }
    for a in h.elements() {
        for z in k.elements() {
            for w in k.elements() {
                let p = m.mul(1, sigma(a, z), sigma(a, w)).expect("law 2 defined on the column");
                c.g2[a][z][w] = m.divide(sigma(a, k.mul(z, w)), p);
            }
        }
    }
    // s = σ·u⁻¹, so u = (σ⁻¹ s)⁻¹
    let (wh, wk) = (&m.wings[0], &m.wings[1]);
    let u1 =
        wh.g.elements()
            .map(|p| {
                k.elements()
                    .map(|z| {
                        let s = m.section(0, &[p, z]).expect("section present");
                        g.inv(m.divide(sigma(wh.bd(p), z), s))
                    })
                    .collect()
            })
            .collect();
    let u2 = h
        .elements()
        .map(|y| {
            wk.g.elements()
                .map(|q| {
                    let s = m.section(1, &[y, q]).expect("section present");
                    g.inv(m.divide(sigma(y, wk.bd(q)), s))
                })
                .collect()
        })
        .collect();
    Ok(ButterflyCocycle {
        base: c,
        wing_h: wh.clone(),
        wing_k: wk.clone(),
        u1,
        u2,
    })
}

/// Orbit data of the pullback `P = (F₁×…×F_n) ×_{H₀} E` under `∏ H_{i,1}`.
struct Composer<'a> {
    e: &'a MultiExt,
    fs: &'a [&'a MultiExt],
    fsizes: Radix,
    hgroup: Radix,
    /// P-index → class index.
    class: Vec<u32>,
    /// class → least P-index.
    reps: Vec<usize>,
    ng: usize,
}

impl<'a> Composer<'a> {
    fn new(e: &'a MultiExt, fs: &'a [&'a MultiExt]) -> Result<Self, MultiExtError> {
        let fsizes = Radix::new(fs.iter().map(|f| f.len()).collect());
        let hgroup = Radix::new(e.wings.iter().map(|w| w.g.order()).collect());
        let ng = e.coeff.g().order();
        let total = fsizes.total * ng;
        if total > 1 << 22 {
            return Err(MultiExtError::TooLarge(total));
        }
        let mut c = Composer {
            e,
            fs,
            fsizes,
            hgroup,
            class: vec![UNDEF; total],
            reps: Vec::new(),
            ng,
        };
        for p in 0..total {
            if c.class[p] != UNDEF {
                continue;
            }
            let id = c.reps.len() as u32;
            c.reps.push(p);
            let (v, u) = c.unpack(p);
            for t in 0..c.hgroup.total {
                let h = c.hgroup.tuple(t);
                let (v2, u2) = c.act_h(&v, u, &h);
                let q = c.pack(&v2, u2);
                c.class[q] = id;
            }
        }
        Ok(c)
    }

    fn unpack(&self, p: usize) -> (Vec<usize>, usize) {
        let v = self.fsizes.tuple(p / self.ng);
        let y: Vec<usize> = v.iter().zip(self.fs).map(|(&vi, f)| f.j(vi)).collect();
        let u = self.e.point(&y, p % self.ng);
        (v, u)
    }

    fn pack(&self, v: &[usize], u: usize) -> usize {
        self.fsizes.code(v) * self.ng + self.e.coord(u)
    }

    /// Right action of `(h₁,…,h_n)` on `(v, u)`.
    fn act_h(&self, v: &[usize], u: usize, h: &[usize]) -> (Vec<usize>, usize) {
        let e = self.e;
        let mut y: Vec<usize> = e.base(u).to_vec();
        let mut u = u;
        let v2: Vec<usize> = v
            .iter()
            .zip(self.fs)
            .zip(h)
            .map(|((&vi, f), &hi)| f.act(vi, hi))
            .collect();
        for i in 0..h.len() {
            let mut key = y.clone();
            key[i] = h[i];
            let s = e.section(i, &key).expect("section present");
            u = e.mul(i, u, s).expect("section lies in the row");
            y[i] = e.wings[i].pi.mul(y[i], e.wings[i].bd(h[i]));
        }
        (v2, u)
    }

    fn class_of(&self, v: &[usize], u: usize) -> usize {
        self.class[self.pack(v, u)] as usize
    }

    /// Products of law `jj` of `F_i` computed from explicit representatives.
    fn product(&self, i: usize, jj: usize, (v, u): (&[usize], usize), (v2, u2): (&[usize], usize)) -> usize {
        let e = self.e;
        let mut h: Vec<usize> = self.e.wings.iter().map(|w| w.g.identity()).collect();
        for k in 0..self.fs.len() {
            if k != i {
                let f = self.fs[k];
                let hk = f.divide(v[k], v2[k]);
                h[k] = f.coeff.g().inv(hk);
            }
        }
        let (v3, u3) = self.act_h(v2, u2, &h);
        let mut out = v.to_vec();
        out[i] = self.fs[i].mul(jj, v[i], v3[i]).expect("inner product defined");
        let uu = e.mul(i, u, u3).expect("outer product defined");
        self.class_of(&out, uu)
    }
}

fn check_composable(e: &MultiExt, fs: &[&MultiExt]) -> Result<(), MultiExtError> {
    if fs.len() != e.arity {
        return Err(MultiExtError::Arity {
            expected: e.arity,
            got: fs.len(),
        });
    }
    if !validate_braiding(&e.coeff).passed() {
        return Err(MultiExtError::NonBraidedCoefficient);
    }
    for (i, f) in fs.iter().enumerate() {
        if f.coeff.base != e.wings[i] {
            return Err(MultiExtError::WingMismatch { slot: i });
        }
    }
    Ok(())
}

/// The juxtaposition product `E(F₁,…,F_n)`.
pub fn compose(e: &MultiExt, fs: &[&MultiExt]) -> Result<MultiExt, MultiExtError> {
    Composite::new(e, fs).map(|c| c.model)
}

/// A composite together with its class map on tuples `(v₁,…,v_n; u)`.
#[derive(Clone, Debug)]
pub struct Composite {
    pub model: MultiExt,
    outer: MultiExt,
    fsizes: Radix,
    ng: usize,
    class: Vec<u32>,
    reps: Vec<(Vec<usize>, usize)>,
}

impl Composite {
    pub fn new(e: &MultiExt, fs: &[&MultiExt]) -> Result<Self, MultiExtError> {
        check_composable(e, fs)?;
        let c = Composer::new(e, fs)?;
        let wings: Vec<XMod> = fs.iter().flat_map(|f| f.wings.iter().cloned()).collect();
        let offsets: Vec<usize> = fs
            .iter()
            .scan(0, |acc, f| {
                let o = *acc;
                *acc += f.arity;
                Some(o)
            })
            .collect();
        let reps: Vec<(Vec<usize>, usize)> = c.reps.iter().map(|&p| c.unpack(p)).collect();
        let elems: Vec<Element> = reps
            .iter()
            .map(|(v, u)| Element {
                base: v.iter().zip(fs).flat_map(|(&vi, f)| f.base(vi).to_vec()).collect(),
                j: e.j(*u),
            })
            .collect();
        let act: Vec<Vec<usize>> = reps
            .iter()
            .map(|(v, u)| e.coeff.g().elements().map(|g| c.class_of(v, e.act(*u, g))).collect())
            .collect();
        let locate = |global: usize| -> (usize, usize) {
            let i = offsets.iter().rposition(|&o| o <= global).unwrap();
            (i, global - offsets[i])
        };
        let prod = |law: usize, a: usize, b: usize| {
            let (i, jj) = locate(law);
            let (v, u) = &reps[a];
            let (v2, u2) = &reps[b];
            c.product(i, jj, (v, *u), (v2, *u2))
        };
        let section = |law: usize, key: &[usize]| {
            let (i, jj) = locate(law);
            let mut v = Vec::with_capacity(fs.len());
            let mut y = Vec::with_capacity(fs.len());
            for (k, f) in fs.iter().enumerate() {
                let slots = &key[offsets[k]..offsets[k] + f.arity];
                let vk = if k == i {
                    f.section(jj, slots).expect("inner section present")
                } else {
                    f.fiber_rep(slots)
                };
                y.push(f.j(vk));
                v.push(vk);
            }
            let mut ekey = y.clone();
            ekey[i] = e.wings[i].g.identity();
            let u = e.section(i, &ekey).expect("outer unit section present");
            c.class_of(&v, u)
        };
        let model = MultiExt::from_fns(wings, e.coeff.clone(), elems, act, prod, section)?;
        Ok(Composite {
            model,
            outer: e.clone(),
            fsizes: c.fsizes.clone(),
            ng: c.ng,
            class: c.class,
            reps,
        })
    }

    /// Class of the tuple `(v; u)`; `u` must lie over `(ȷ(v₁),…,ȷ(v_n))`.
    pub fn class_of(&self, v: &[usize], u: usize) -> usize {
        self.class[self.fsizes.code(v) * self.ng + self.outer.coord(u)] as usize
    }

    /// The least tuple of class `k`.
    pub fn representative(&self, k: usize) -> (&[usize], usize) {
        (&self.reps[k].0, self.reps[k].1)
    }
}

/// The model with elements relabelled by the bijection `phi` (`e ↦ phi[e]`).
pub fn transport(m: &MultiExt, phi: &[usize]) -> Result<MultiExt, MultiExtError> {
    let n = m.len();
    if phi.len() != n || phi.iter().any(|&v| v >= n) {
        return Err(MultiExtError::Malformed("relabelling has wrong size".into()));
    }
    let mut spec = m.to_spec();
    let mut elements = spec.elements.clone();
    let mut action = spec.action.clone();
    for e in 0..n {
        elements[phi[e]] = spec.elements[e].clone();
        action[phi[e]] = spec.action[e].iter().map(|&v| phi[v]).collect();
    }
    spec.elements = elements;
    spec.action = action;
    for t in spec.products.iter_mut() {
        for [e, f, v] in t.iter_mut() {
            *e = phi[*e];
            *f = phi[*f];
            *v = phi[*v];
        }
    }
    for t in spec.sections.iter_mut() {
        for (_, v) in t.iter_mut() {
            *v = phi[*v];
        }
    }
    MultiExt::from_spec(spec)
}

/// Recomputes every product of the composite from every pair of representatives
/// and reports the first pair of classes whose value depends on the choice.
pub fn scan_representative_independence(e: &MultiExt, fs: &[&MultiExt]) -> Result<Report, MultiExtError> {
    check_composable(e, fs)?;
    let c = Composer::new(e, fs)?;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); c.reps.len()];
    for (p, &k) in c.class.iter().enumerate() {
        members[k as usize].push(p);
    }
    let mut r = Report::new();
    for (i, f) in fs.iter().enumerate() {
        for jj in 0..f.arity {
            let mut bad = None;
            'outer: for a in 0..c.reps.len() {
                let (va, _) = c.unpack(c.reps[a]);
                for b in 0..c.reps.len() {
                    let (vb, _) = c.unpack(c.reps[b]);
                    let ba: Vec<Vec<usize>> = va.iter().zip(fs).map(|(&x, f)| f.base(x).to_vec()).collect();
                    let bb: Vec<Vec<usize>> = vb.iter().zip(fs).map(|(&x, f)| f.base(x).to_vec()).collect();
                    let ok = (0..fs.len()).all(|k| {
                        if k == i {
                            (0..f.arity).all(|l| l == jj || ba[k][l] == bb[k][l])
                        } else {
                            ba[k] == bb[k]
                        }
                    });
                    if !ok {
                        continue;
                    }
                    let mut seen = None;
                    for &pa in &members[a] {
                        let (v1, u1) = c.unpack(pa);
                        for &pb in &members[b] {
                            let (v2, u2) = c.unpack(pb);
                            let val = c.product(i, jj, (&v1, u1), (&v2, u2));
                            match seen {
                                None => seen = Some(val),
                                Some(s) if s != val => {
                                    bad = Some(vec![a, b]);
                                    break 'outer;
                                }
                                _ => {}
                            }
                        }
                    }
                }
            }
            r.record(format!("independence.{i}.{jj}"), bad);
        }
    }
    Ok(r)
}

fn same_shape(m1: &MultiExt, m2: &MultiExt) -> bool {
    m1.arity == m2.arity && m1.wings == m2.wings && m1.coeff == m2.coeff
}

/// Checks that `map` is an isomorphism of n-butterflies `m1 → m2`.
pub fn verify_iso(m1: &MultiExt, m2: &MultiExt, map: &[usize]) -> Report {
    let mut r = Report::new();
    let n = m1.len();
    if map.len() != n || m2.len() != n || map.iter().any(|&v| v >= n) {
        r.fail("bijection", vec![], "wrong size");
        return r;
    }
    let mut seen = vec![false; n];
    let dup = map
        .iter()
        .position(|&v| std::mem::replace(&mut seen[v], true))
        .map(|e| vec![e]);
    r.record("bijection", dup);
    let base = (0..n)
        .find(|&e| m1.base(e) != m2.base(map[e]) || m1.j(e) != m2.j(map[e]))
        .map(|e| vec![e]);
    r.record("base_and_j", base);
    let g1 = m1.coeff.g();
    let eq = (0..n)
        .flat_map(|e| g1.elements().map(move |a| (e, a)))
        .find(|&(e, a)| map[m1.act(e, a)] != m2.act(map[e], a))
        .map(|(e, a)| vec![e, a]);
    r.record("equivariant", eq);
    for i in 0..m1.arity {
        let mut bad = None;
        'p: for e in 0..n {
            for f in 0..n {
                if let Some(v) = m1.mul(i, e, f) {
                    if m2.mul(i, map[e], map[f]) != Some(map[v]) {
                        bad = Some(vec![e, f]);
                        break 'p;
                    }
                }
            }
        }
        r.record(format!("product{i}"), bad);
        let sec = (0..m1.key_count(i))
            .map(|c| m1.key_tuple(i, c))
            .find(|key| m1.section(i, key).map(|s| map[s]) != m2.section(i, key));
        r.record(format!("section{i}"), sec);
    }
    r
}

/// Extends a partial fiber assignment; `false` on contradiction.
type Propagate<'a> = dyn Fn(&mut Vec<Option<usize>>, &mut Vec<usize>, usize) -> bool + 'a;

/// Fiberwise search for an isomorphism `m1 → m2`; returns the element map.
pub fn iso_check(m1: &MultiExt, m2: &MultiExt, bound: u64) -> Result<Option<Vec<usize>>, MultiExtError> {
    if !same_shape(m1, m2) {
        return Err(MultiExtError::Incompatible);
    }
    if m1.len() != m2.len() {
        return Ok(None);
    }
    let g1 = m1.coeff.g().clone();
    let nb = m1.base_count();
    let rep1 = &m1.rep;
    let rep2 = &m2.rep;
    if rep1.iter().chain(rep2).any(|&r| r == usize::MAX) {
        return Ok(None);
    }
    let allowed: Vec<Vec<bool>> = (0..nb)
        .map(|b| {
            g1.elements()
                .map(|g| m2.j(m2.act(rep2[b], g)) == m1.j(rep1[b]))
                .collect()
        })
        .collect();
    let mut forced: Vec<Option<usize>> = vec![None; nb];
    for i in 0..m1.arity {
        for c in 0..m1.key_count(i) {
            let key = m1.key_tuple(i, c);
            let (Some(s1), Some(s2)) = (m1.section(i, &key), m2.section(i, &key)) else {
                return Ok(None);
            };
            let b = m1.code[s1];
            if m2.code[s2] != b {
                return Ok(None);
            }
            let g = g1.mul(m2.coord(s2), g1.inv(m1.coord(s1)));
            match forced[b] {
                Some(v) if v != g => return Ok(None),
                _ => forced[b] = Some(g),
            }
        }
    }
    // Constraints g_{b''} = coord₂(rep₂[b]g_b ×_i rep₂[b']g_{b'})·c⁻¹.
    struct Cons {
        law: usize,
        b: usize,
        b2: usize,
        out: usize,
        cinv: usize,
    }
    let mut cons = Vec::new();
    for i in 0..m1.arity {
        for b in 0..nb {
            let bt = m1.radix.tuple(b);
            for y in m1.wings[i].pi.elements() {
                let mut t2 = bt.clone();
                t2[i] = y;
                let b2 = m1.radix.code(&t2);
                let Some(p) = m1.mul(i, rep1[b], rep1[b2]) else {
                    return Ok(None);
                };
                cons.push(Cons {
                    law: i,
                    b,
                    b2,
                    out: m1.code[p],
                    cinv: g1.inv(m1.coord(p)),
                });
            }
        }
    }
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for (ci, c) in cons.iter().enumerate() {
        touching[c.b].push(ci);
        if c.b2 != c.b {
            touching[c.b2].push(ci);
        }
        if c.out != c.b && c.out != c.b2 {
            touching[c.out].push(ci);
        }
    }
    let required = |c: &Cons, asg: &[Option<usize>]| -> Option<usize> {
        let (ga, gb) = (asg[c.b]?, asg[c.b2]?);
        let p = m2.mul(c.law, m2.act(rep2[c.b], ga), m2.act(rep2[c.b2], gb))?;
        if m2.code[p] != c.out {
            return Some(usize::MAX);
        }
        Some(g1.mul(m2.coord(p), c.cinv))
    };
    // Propagates from `start`; returns false on conflict. Newly set variables go on `trail`.
    let propagate = |asg: &mut Vec<Option<usize>>, trail: &mut Vec<usize>, start: usize| -> bool {
        let mut queue = vec![start];
        while let Some(b) = queue.pop() {
            for &ci in &touching[b] {
                let c = &cons[ci];
                match required(c, asg) {
                    None => {}
                    Some(usize::MAX) => return false,
                    Some(g) => match asg[c.out] {
                        Some(v) if v != g => return false,
                        Some(_) => {}
                        None => {
                            if !allowed[c.out][g] {
                                return false;
                            }
                            asg[c.out] = Some(g);
                            trail.push(c.out);
                            queue.push(c.out);
                        }
                    },
                }
            }
        }
        true
    };
    let mut asg: Vec<Option<usize>> = vec![None; nb];
    let mut trail = Vec::new();
    for b in 0..nb {
        if let Some(g) = forced[b] {
            if !allowed[b][g] {
                return Ok(None);
            }
            if asg[b].is_some_and(|v| v != g) {
                return Ok(None);
            }
            if asg[b].is_none() {
                asg[b] = Some(g);
                trail.push(b);
                if !propagate(&mut asg, &mut trail, b) {
                    return Ok(None);
                }
            }
        }
    }
    let build = |asg: &[Option<usize>]| -> Vec<usize> {
        let mut map = vec![0; m1.len()];
        for b in 0..nb {
            let gb = asg[b].unwrap();
            for a in g1.elements() {
                map[m1.act(rep1[b], a)] = m2.act(rep2[b], g1.mul(gb, a));
            }
        }
        map
    };
    let mut nodes: u64 = 0;
    fn dfs(
        asg: &mut Vec<Option<usize>>,
        nodes: &mut u64,
        bound: u64,
        ng: usize,
        allowed: &[Vec<bool>],
        propagate: &Propagate,
        finish: &dyn Fn(&[Option<usize>]) -> bool,
    ) -> Result<bool, u64> {
        let Some(b) = asg.iter().position(|v| v.is_none()) else {
            return Ok(finish(asg));
        };
        for g in 0..ng {
            if !allowed[b][g] {
                continue;
            }
            *nodes += 1;
            if *nodes > bound {
                return Err(*nodes);
            }
            let mut trail = vec![b];
            asg[b] = Some(g);
            if propagate(asg, &mut trail, b) && dfs(asg, nodes, bound, ng, allowed, propagate, finish)? {
                return Ok(true);
            }
            for t in trail {
                asg[t] = None;
            }
        }
        Ok(false)
    }
    let finish = |asg: &[Option<usize>]| verify_iso(m1, m2, &build(asg)).passed();
    match dfs(&mut asg, &mut nodes, bound, g1.order(), &allowed, &propagate, &finish) {
        Ok(true) => Ok(Some(build(&asg))),
        Ok(false) => Ok(None),
        Err(n) => Err(MultiExtError::SearchSpaceTooLarge { size: n as u128, bound }),
    }
}

/// Isomorphism between `E(F…)(G…)` and `E(F₁(G₁…),…)`.
pub fn assoc_witness(
    e: &MultiExt,
    fs: &[&MultiExt],
    gs: &[Vec<&MultiExt>],
    bound: u64,
) -> Result<Vec<usize>, MultiExtError> {
    let left_inner = compose(e, fs)?;
    let flat: Vec<&MultiExt> = gs.iter().flat_map(|g| g.iter().copied()).collect();
    let left = compose(&left_inner, &flat)?;
    let inner: Vec<MultiExt> = fs
        .iter()
        .zip(gs)
        .map(|(f, g)| compose(f, g))
        .collect::<Result<_, _>>()?;
    let inner_refs: Vec<&MultiExt> = inner.iter().collect();
    let right = compose(e, &inner_refs)?;
    iso_check(&left, &right, bound)?.ok_or(MultiExtError::NoAssociator)
}

/// Fiberwise contracted product `E ∧^{G₁} F` over a symmetric coefficient.
pub fn contracted_product(m1: &MultiExt, m2: &MultiExt) -> Result<MultiExt, MultiExtError> {
    if !same_shape(m1, m2) {
        return Err(MultiExtError::Incompatible);
    }
    if !is_symmetric(&m1.coeff) {
        return Err(MultiExtError::NotSymmetric);
    }
    let g1 = m1.coeff.g().clone();
    let g0 = m1.coeff.pi().clone();
    let xm = m1.coeff.base.clone();
    let ng = g1.order();
    let nb = m1.base_count();
    // Element b·ng + g stands for rep₁[b] ∧ rep₂[b]·g.
    let class = |e: usize, f: usize| -> usize {
        let b = m1.code[e];
        let c = m1.coord(e);
        let f2 = m2.act(f, xm.act(c, m2.j(f)));
        b * ng + m2.coord(f2)
    };
    let pair = |x: usize| -> (usize, usize) {
        let b = x / ng;
        (m1.rep[b], m2.act(m2.rep[b], x % ng))
    };
    let elems: Vec<Element> = (0..nb * ng)
        .map(|x| {
            let (e, f) = pair(x);
            Element {
                base: m1.base(e).to_vec(),
                j: g0.mul(m1.j(e), m2.j(f)),
            }
        })
        .collect();
    let act: Vec<Vec<usize>> = (0..nb * ng)
        .map(|x| {
            let (e, f) = pair(x);
            g1.elements().map(|g| class(e, m2.act(f, g))).collect()
        })
        .collect();
    let prod = |i: usize, x: usize, y: usize| {
        let (e, f) = pair(x);
        let (e2, f2) = pair(y);
        let ee = m1.mul(i, e, e2).expect("first factor product");
        let ff = m2.mul(i, f, f2).expect("second factor product");
        let corr = xm.act_inv(m1.coeff.br(m2.j(f), m1.j(e2)), m2.j(f2));
        class(ee, m2.act(ff, corr))
    };
    let section = |i: usize, key: &[usize]| {
        let s1 = m1.section(i, key).expect("section present");
        let s2 = m2.section(i, key).expect("section present");
        class(s1, s2)
    };
    MultiExt::from_fns(m1.wings.clone(), m1.coeff.clone(), elems, act, prod, section)
}

/// `ℤ/2 → ℤ/2` with zero boundary and trivial action.
pub fn z2_wing() -> XMod {
    let z2 = crate::fingroup::cyclic(2);
    XMod::zero(&z2, &z2)
}

/// Valid arity-2 models over wings `ℤ/2 → ℤ/2` with polynomial cocycle data
/// `x = c₀hk`, `g₁ = c₁hh'k + c₂hh'`, `g₂ = c₃hkk' + c₄kk'`, `u₁ = c₅hz`, `u₂ = c₆yk`,
/// in order of the bit mask `c`.
pub fn z2_binary_family(coeff: &BraidedXMod) -> Vec<MultiExt> {
    let w = z2_wing();
    (0u32..128)
        .filter_map(|c| {
            let bit = |i: u32| ((c >> i) & 1) as usize;
            let m = MultiExt::trivialized(
                vec![w.clone(), w.clone()],
                coeff.clone(),
                |t| bit(0) * t[0] * t[1],
                |i, t, v| {
                    if i == 0 {
                        (bit(1) * t[0] * v * t[1] + bit(2) * t[0] * v) % 2
                    } else {
                        (bit(3) * t[0] * t[1] * v + bit(4) * t[1] * v) % 2
                    }
                },
                |i, key| bit(5 + i as u32) * key[0] * key[1],
            )
            .ok()?;
            validate_multiext(&m).passed().then_some(m)
        })
        .collect()
}

/// Valid unary models over `ℤ/2 → ℤ/2`: `x = c₀h`, `g = c₁hh'`, `u = c₂h`.
pub fn z2_unary_family(coeff: &BraidedXMod) -> Vec<MultiExt> {
    let w = z2_wing();
    (0u32..8)
        .filter_map(|c| {
            let bit = |i: u32| ((c >> i) & 1) as usize;
            let m = MultiExt::trivialized(
                vec![w.clone()],
                coeff.clone(),
                |t| bit(0) * t[0],
                |_, t, v| bit(1) * t[0] * v,
                |_, key| bit(2) * key[0],
            )
            .ok()?;
            validate_multiext(&m).passed().then_some(m)
        })
        .collect()
}
