//! Finite groups, homomorphisms and right actions stored as dense tables.

use crate::linalg::smith_with_transforms;
use crate::report::Report;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is empty or not square")]
    NotSquare,
    #[error("table entry {0} out of range")]
    OutOfRange(usize),
    #[error("not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("group is not abelian")]
    NotAbelian,
}

/// Wire form of a group: `{"order": n, "mul": [[...]], "labels": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A finite group on the index set `0..order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct FinGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl TryFrom<GroupSpec> for FinGroup {
    type Error = GroupError;
    fn try_from(s: GroupSpec) -> Result<Self, GroupError> {
        if s.mul.len() != s.order {
            return Err(GroupError::NotSquare);
        }
        let mut g = make_group(s.mul, None)?;
        g.labels = s.labels;
        Ok(g)
    }
}

impl From<FinGroup> for GroupSpec {
    fn from(g: FinGroup) -> Self {
        GroupSpec {
            order: g.order,
            mul: g.mul,
            labels: g.labels,
        }
    }
}

/// Validates a Cayley table and computes identity and inverses.
///
/// `identity_hint` is tried first; otherwise the identity is searched for.
pub fn make_group(mul: Vec<Vec<usize>>, identity_hint: Option<usize>) -> Result<FinGroup, GroupError> {
    let n = mul.len();
    if n == 0 || mul.iter().any(|r| r.len() != n) {
        return Err(GroupError::NotSquare);
    }
    for row in &mul {
        if let Some(&v) = row.iter().find(|&&v| v >= n) {
            return Err(GroupError::OutOfRange(v));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = mul[a][b];
            for c in 0..n {
                if mul[ab][c] != mul[a][mul[b][c]] {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
    }
    let is_identity = |e: usize| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a);
    let identity = match identity_hint.filter(|&e| e < n && is_identity(e)) {
        Some(e) => e,
        None => (0..n).find(|&e| is_identity(e)).ok_or(GroupError::NoIdentity)?,
    };
    let mut inv = vec![0; n];
    for a in 0..n {
        inv[a] = (0..n)
            .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
            .ok_or(GroupError::NoInverse(a))?;
    }
    Ok(FinGroup {
        order: n,
        mul,
        identity,
        inv,
        labels: None,
    })
}

impl FinGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Product of a sequence, left to right.
    pub fn prod(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.identity, |acc, &x| self.mul[acc][x])
    }

    /// `a⁻¹ b` style division helper: returns the unique `x` with `a·x = b`.
    pub fn ldiv(&self, a: usize, b: usize) -> usize {
        self.mul[self.inv[a]][b]
    }

    /// Returns the unique `x` with `x·b = a`.
    pub fn rdiv(&self, a: usize, b: usize) -> usize {
        self.mul[a][self.inv[b]]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv[a] } else { a };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul[acc][base];
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn is_central(&self, z: usize) -> bool {
        (0..self.order).all(|a| self.mul[a][z] == self.mul[z][a])
    }

    /// `x⁻¹ g x`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul[self.mul[self.inv[x]][g]][x]
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.prod(&[self.inv[a], self.inv[b], a, b])
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    /// Left cancellation and right cancellation: every row and column is a permutation.
    pub fn is_latin(&self) -> bool {
        let n = self.order;
        let perm = |vals: Vec<usize>| {
            let mut seen = vec![false; n];
            vals.into_iter().all(|v| !std::mem::replace(&mut seen[v], true))
        };
        (0..n).all(|a| perm((0..n).map(|b| self.mul[a][b]).collect()) && perm((0..n).map(|b| self.mul[b][a]).collect()))
    }
}

/// The cyclic group `ℤ/n`, element `k` standing for the residue `k`.
pub fn cyclic(n: usize) -> FinGroup {
    assert!(n >= 1, "cyclic group needs n >= 1");
    let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    make_group(mul, Some(0)).expect("cyclic table is a group")
}

pub fn trivial() -> FinGroup {
    cyclic(1)
}

/// Pair index used by [`direct_product`]: `(g, h) ↦ g·|H| + h`.
#[inline]
pub fn pair_index(g: usize, h: usize, h_order: usize) -> usize {
    g * h_order + h
}

pub fn direct_product(g: &FinGroup, h: &FinGroup) -> FinGroup {
    let (n, m) = (g.order(), h.order());
    let mut mul = vec![vec![0; n * m]; n * m];
    for a in 0..n * m {
        for b in 0..n * m {
            mul[a][b] = pair_index(g.mul(a / m, b / m), h.mul(a % m, b % m), m);
        }
    }
    make_group(mul, Some(pair_index(g.identity(), h.identity(), m))).expect("product of groups")
}

/// Brute-force isomorphism search; returns the element map when one exists.
pub fn find_isomorphism(g: &FinGroup, h: &FinGroup) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    let n = g.order();
    let gens = generating_set(g);
    let orders_h: Vec<usize> = (0..n).map(|x| h.element_order(x)).collect();
    let mut images = vec![0usize; gens.len()];

    fn extend(g: &FinGroup, h: &FinGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
        let n = g.order();
        let mut map = vec![usize::MAX; n];
        map[g.identity()] = h.identity();
        let mut frontier = vec![g.identity()];
        while let Some(x) = frontier.pop() {
            for (k, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                let fy = h.mul(map[x], imgs[k]);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    frontier.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let mut seen = vec![false; n];
        for &v in &map {
            if std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        for a in 0..n {
            for b in 0..n {
                if map[g.mul(a, b)] != h.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }

    fn search(
        k: usize,
        g: &FinGroup,
        h: &FinGroup,
        gens: &[usize],
        orders_h: &[usize],
        images: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if k == gens.len() {
            return extend(g, h, gens, images);
        }
        let want = g.element_order(gens[k]);
        for cand in 0..h.order() {
            if orders_h[cand] == want {
                images[k] = cand;
                if let Some(m) = search(k + 1, g, h, gens, orders_h, images) {
                    return Some(m);
                }
            }
        }
        None
    }

    search(0, g, h, &gens, &orders_h, &mut images)
}

/// A small generating set found greedily.
pub fn generating_set(g: &FinGroup) -> Vec<usize> {
    let n = g.order();
    let mut gens = Vec::new();
    let mut span = vec![false; n];
    span[g.identity()] = true;
    for cand in 0..n {
        if span[cand] {
            continue;
        }
        gens.push(cand);
        let mut frontier: Vec<usize> = (0..n).filter(|&x| span[x]).collect();
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = g.mul(x, s);
                if !span[y] {
                    span[y] = true;
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// A homomorphism with owned domain and codomain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub dom: FinGroup,
    pub cod: FinGroup,
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn identity(g: &FinGroup) -> Self {
        GroupHom {
            dom: g.clone(),
            cod: g.clone(),
            map: g.elements().collect(),
        }
    }
}

/// Checks that `f` is a well-formed homomorphism; reports the first bad pair.
pub fn check_hom(f: &GroupHom) -> Report {
    let mut r = Report::new();
    check_hom_tables(&mut r, &f.dom, &f.cod, &f.map, "");
    r
}

pub(crate) fn check_hom_tables(r: &mut Report, dom: &FinGroup, cod: &FinGroup, map: &[usize], prefix: &str) {
    if map.len() != dom.order() || map.iter().any(|&v| v >= cod.order()) {
        r.fail(format!("{prefix}hom.shape"), vec![], "map table has wrong shape");
        return;
    }
    let mut bad = None;
    'outer: for a in dom.elements() {
        for b in dom.elements() {
            if map[dom.mul(a, b)] != cod.mul(map[a], map[b]) {
                bad = Some(vec![a, b]);
                break 'outer;
            }
        }
    }
    r.record(format!("{prefix}hom.multiplicative"), bad);
    let unit_bad = (map[dom.identity()] != cod.identity()).then(|| vec![dom.identity()]);
    r.record(format!("{prefix}hom.unit"), unit_bad);
}

/// A right action of `group` on `space` by automorphisms; `act[g][x] = g^x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightAction {
    pub group: FinGroup,
    pub space: FinGroup,
    pub act: Vec<Vec<usize>>,
}

impl RightAction {
    pub fn trivial(group: &FinGroup, space: &FinGroup) -> Self {
        RightAction {
            group: group.clone(),
            space: space.clone(),
            act: trivial_action_table(group, space),
        }
    }
}

pub fn trivial_action_table(group: &FinGroup, space: &FinGroup) -> Vec<Vec<usize>> {
    space.elements().map(|g| vec![g; group.order()]).collect()
}

/// Conjugation table of `g` on itself: `act[a][x] = x⁻¹ a x`.
pub fn conjugation_table(g: &FinGroup) -> Vec<Vec<usize>> {
    g.elements()
        .map(|a| g.elements().map(|x| g.conj(a, x)).collect())
        .collect()
}

pub fn check_action(a: &RightAction) -> Report {
    let mut r = Report::new();
    check_action_tables(&mut r, &a.group, &a.space, &a.act, "");
    r
}

pub(crate) fn check_action_tables(r: &mut Report, pi: &FinGroup, g: &FinGroup, act: &[Vec<usize>], prefix: &str) {
    if act.len() != g.order()
        || act
            .iter()
            .any(|row| row.len() != pi.order() || row.iter().any(|&v| v >= g.order()))
    {
        r.fail(format!("{prefix}action.shape"), vec![], "action table has wrong shape");
        return;
    }
    let unit = g.elements().find(|&a| act[a][pi.identity()] != a).map(|a| vec![a]);
    r.record(format!("{prefix}action.unit"), unit);
    let mut comp = None;
    'c: for a in g.elements() {
        for x in pi.elements() {
            for y in pi.elements() {
                if act[a][pi.mul(x, y)] != act[act[a][x]][y] {
                    comp = Some(vec![a, x, y]);
                    break 'c;
                }
            }
        }
    }
    r.record(format!("{prefix}action.composition"), comp);
    let mut auto = None;
    'h: for x in pi.elements() {
        for a in g.elements() {
            for b in g.elements() {
                if act[g.mul(a, b)][x] != g.mul(act[a][x], act[b][x]) {
                    auto = Some(vec![a, b, x]);
                    break 'h;
                }
            }
        }
    }
    r.record(format!("{prefix}action.automorphism"), auto);
}

/// Coordinates of a finite abelian group along its invariant-factor decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCoords {
    /// Invariant factors `d₁ | d₂ | …`, each at least 2.
    pub factors: Vec<u64>,
    coords: Vec<Vec<u64>>,
    lookup: std::collections::HashMap<Vec<u64>, usize>,
}

impl AbelianCoords {
    pub fn new(g: &FinGroup) -> Result<Self, GroupError> {
        if !g.is_abelian() {
            return Err(GroupError::NotAbelian);
        }
        let n = g.order();
        // ℤ^G modulo [a] + [b] - [ab] is G itself.
        let mut rel = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in a..n {
                let mut row = vec![BigInt::from(0); n];
                row[a] += 1;
                row[b] += 1;
                row[g.mul(a, b)] -= 1;
                rel.push(row);
            }
        }
        let snf = smith_with_transforms(&rel, n);
        let mut keep = Vec::new();
        let mut factors = Vec::new();
        for k in 0..n {
            let d = snf.diag.get(k).cloned().unwrap_or_default();
            let d = d.to_u64().expect("finite group has finite invariant factors");
            assert!(d != 0, "relation lattice of a finite group has full rank");
            if d > 1 {
                keep.push(k);
                factors.push(d);
            }
        }
        let coords: Vec<Vec<u64>> = (0..n)
            .map(|x| {
                keep.iter()
                    .zip(&factors)
                    .map(|(&k, &d)| {
                        let v = &snf.col_transform[x][k] % BigInt::from(d);
                        let v = if v < BigInt::from(0) { v + BigInt::from(d) } else { v };
                        v.to_u64().unwrap()
                    })
                    .collect()
            })
            .collect();
        let lookup = coords
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect::<std::collections::HashMap<_, _>>();
        assert_eq!(lookup.len(), n, "coordinates must be injective");
        Ok(AbelianCoords {
            factors,
            coords,
            lookup,
        })
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn coords(&self, x: usize) -> &[u64] {
        &self.coords[x]
    }

    /// Element with the given coordinates (reduced modulo the factors).
    pub fn element(&self, c: &[i64]) -> usize {
        let red: Vec<u64> = c
            .iter()
            .zip(&self.factors)
            .map(|(&v, &d)| v.rem_euclid(d as i64) as u64)
            .collect();
        self.lookup[&red]
    }

    /// Element whose coordinates are the unit vector `k`.
    pub fn generator(&self, k: usize) -> usize {
        let mut c = vec![0i64; self.rank()];
        c[k] = 1;
        self.element(&c)
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &d| num_integer::lcm(acc, d))
    }
}
