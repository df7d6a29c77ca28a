//! Finite presentations of weak categorical rings: decomposition of a presentation with
//! biextension data into a twisted 3-cocycle, the reverse reconstruction, and the
//! perturbations that leave the class unchanged.
//!
//! Scope: `R` and `Λ` abelian (written additively), `Λ` acting trivially on `R`, a
//! normalized section `x₀ = 0`.

use crate::barcx::{validate_bimodule, Bimodule, FinRing};
use crate::cohom::{coboundary, is_cocycle, Cochain2, Cochain5, CocycleMode, CohomContext, CohomError};
use crate::fingroup::{direct_product, AbelianCoords, FinGroup};
use crate::linalg::{solve_integer, PivotOrder};
use crate::multiext::{transport, validate_multiext, verify_iso, Composite, MultiExt, MultiExtError};
use crate::report::Report;
use crate::xmod::{validate_braiding, BraidedXMod, XMod};
use serde::{Deserialize, Serialize};
use thiserror::Error;

type T3 = Vec<Vec<Vec<usize>>>;
type T2 = Vec<Vec<usize>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatRingError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("{what} at {args:?} does not lie in π₁")]
    ValueNotInPi1 { what: &'static str, args: Vec<usize> },
    #[error("monoid data does not fit the presentation: {0}")]
    FiberMismatch(String),
    #[error("μ is not defined at the base point {0:?}")]
    MuNotDefinedAtPoint(Vec<usize>),
    #[error("derived {side} action differs from the declared one at {args:?}")]
    ActionMismatch { side: &'static str, args: Vec<usize> },
    #[error("skeleton cannot carry the additive part of the cocycle")]
    InconsistentSkeleton,
    #[error("pentagon violated at {0:?}")]
    PentagonViolated(Vec<usize>),
    #[error("not a twisted cocycle (first failing block: {0})")]
    NotACocycle(String),
    #[error(transparent)]
    MultiExt(#[from] MultiExtError),
    #[error(transparent)]
    Cohom(#[from] CohomError),
}

/// `R → Λ` presenting a ring-like stack with `π₀ = A` and `π₁ = M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub rmod: BraidedXMod,
    pub ring: FinRing,
    pub module: Bimodule,
    /// `Λ → A`.
    pub q: Vec<usize>,
    /// Section `A → Λ`.
    pub x: Vec<usize>,
    /// `x_{a+b} = x_a + x_b + ∂σ_{a,b}`.
    pub sigma: T2,
    /// `M → ker ∂ ⊂ R`.
    pub pi1: Vec<usize>,
}

/// Multiplicative data: the biextension `E₂`, points `e_{a,b}` with `ȷ = x_{ab}`,
/// and `μ` at the base points, as elements of `E₂(I,E₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidData {
    pub e2: MultiExt,
    pub e_sections: T2,
    pub mu: T3,
}

/// Actions of `A` on `M` read off from the sections of `E₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleActionWitness {
    /// `left[a][m] = a·m`.
    pub left: T2,
    /// `right[m][a] = m·a`.
    pub right: T2,
}

/// Nonabelian cocycles of the partial laws at the section points and the `α` they give.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphas {
    pub alpha1: T3,
    pub alpha2: T3,
    /// Values in `R`.
    pub g1: T3,
    pub g2: T3,
}

/// Precomputed group data of a presentation.
struct Pres<'a> {
    p: &'a RingPresentation,
    r: &'a FinGroup,
    lam: &'a FinGroup,
    /// `R → M` on `ker ∂`.
    to_m: Vec<Option<usize>>,
    /// `y = x_{q(y)} + ∂ρ(y)`.
    rho: Vec<usize>,
}

impl<'a> Pres<'a> {
    fn new(p: &'a RingPresentation) -> Result<Self, CatRingError> {
        let report = validate_presentation(p);
        if let Some(c) = report.first_failure() {
            return Err(CatRingError::InvalidPresentation(c.id.clone()));
        }
        let r = p.rmod.g();
        let lam = p.rmod.pi();
        let mut to_m = vec![None; r.order()];
        for (m, &v) in p.pi1.iter().enumerate() {
            to_m[v] = Some(m);
        }
        let rho = lam
            .elements()
            .map(|y| {
                let target = lam.mul(lam.inv(p.x[p.q[y]]), y);
                if target == lam.identity() {
                    r.identity()
                } else {
                    r.elements()
                        .find(|&s| p.rmod.base.bd(s) == target)
                        .expect("validated kernel")
                }
            })
            .collect();
        Ok(Pres { p, r, lam, to_m, rho })
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.r.mul(a, b)
    }

    fn sub(&self, a: usize, b: usize) -> usize {
        self.r.mul(a, self.r.inv(b))
    }

    fn sum(&self, xs: &[usize]) -> usize {
        self.r.prod(xs)
    }

    fn m(&self, v: usize, what: &'static str, args: &[usize]) -> Result<usize, CatRingError> {
        self.to_m[v].ok_or_else(|| CatRingError::ValueNotInPi1 {
            what,
            args: args.to_vec(),
        })
    }

    fn emb(&self, m: usize) -> usize {
        self.p.pi1[m]
    }

    /// The least `r` with `∂r = y`.
    fn lift(&self, y: usize) -> usize {
        if y == self.lam.identity() {
            return self.r.identity();
        }
        self.r
            .elements()
            .find(|&s| self.p.rmod.base.bd(s) == y)
            .expect("y lies in the image of ∂")
    }

    fn sigma(&self, a: usize, b: usize) -> usize {
        self.p.sigma[a][b]
    }
}

/// Checks the standing assumptions and the defining relations of a presentation.
pub fn validate_presentation(p: &RingPresentation) -> Report {
    let mut rep = Report::new();
    let b = validate_braiding(&p.rmod);
    rep.record(
        "rmod.braiding",
        b.first_failure().map(|c| c.counterexample.clone().unwrap_or_default()),
    );
    if !b.passed() {
        return rep;
    }
    let (r, lam) = (p.rmod.g(), p.rmod.pi());
    let ab = (!r.is_abelian())
        .then(|| vec![0])
        .or_else(|| (!lam.is_abelian()).then(|| vec![1]));
    rep.record("rmod.abelian", ab);
    rep.record(
        "rmod.trivial_action",
        (!p.rmod.base.has_trivial_action()).then(Vec::new),
    );
    let rr = validate_bimodule(&p.ring, &p.module);
    rep.record(
        "module",
        rr.first_failure().map(|c| c.counterexample.clone().unwrap_or_default()),
    );
    let add = &p.ring.add;
    let shapes = p.q.len() == lam.order()
        && p.q.iter().all(|&a| a < add.order())
        && p.x.len() == add.order()
        && p.x.iter().all(|&y| y < lam.order())
        && p.sigma.len() == add.order()
        && p.sigma
            .iter()
            .all(|row| row.len() == add.order() && row.iter().all(|&s| s < r.order()))
        && p.pi1.len() == p.module.m.order()
        && p.pi1.iter().all(|&s| s < r.order());
    rep.record("shapes", (!shapes).then(Vec::new));
    if !shapes || !rep.passed() {
        return rep;
    }
    let hom = lam
        .elements()
        .flat_map(|y| lam.elements().map(move |z| (y, z)))
        .find(|&(y, z)| p.q[lam.mul(y, z)] != add.mul(p.q[y], p.q[z]))
        .map(|(y, z)| vec![y, z]);
    rep.record("q.hom", hom);
    let ker_q: Vec<usize> = lam.elements().filter(|&y| p.q[y] == add.identity()).collect();
    let im: Vec<usize> = {
        let mut v: Vec<usize> = r.elements().map(|s| p.rmod.base.bd(s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    rep.record("q.kernel", (ker_q != im).then(Vec::new));
    let sec = add.elements().find(|&a| p.q[p.x[a]] != a).map(|a| vec![a]);
    rep.record("section", sec);
    rep.record(
        "section.normalized",
        (p.x[add.identity()] != lam.identity()).then(Vec::new),
    );
    let m = &p.module.m;
    let pi1_hom = m
        .elements()
        .flat_map(|u| m.elements().map(move |v| (u, v)))
        .find(|&(u, v)| p.pi1[m.mul(u, v)] != r.mul(p.pi1[u], p.pi1[v]))
        .map(|(u, v)| vec![u, v]);
    rep.record("pi1.hom", pi1_hom);
    let ker_d: Vec<usize> = r.elements().filter(|&s| p.rmod.base.bd(s) == lam.identity()).collect();
    let mut img: Vec<usize> = p.pi1.clone();
    img.sort_unstable();
    img.dedup();
    rep.record("pi1.image", (img != ker_d || img.len() != m.order()).then(Vec::new));
    let rel = add
        .elements()
        .flat_map(|a| add.elements().map(move |b| (a, b)))
        .find(|&(a, b)| {
            let rhs = lam.prod(&[p.x[a], p.x[b], p.rmod.base.bd(p.sigma[a][b])]);
            p.x[add.mul(a, b)] != rhs
        })
        .map(|(a, b)| vec![a, b]);
    rep.record("sigma", rel);
    let factors = lam
        .elements()
        .flat_map(|y| lam.elements().map(move |z| (y, z)))
        .find(|&(y, z)| p.rmod.br(y, z) != p.rmod.br(p.x[p.q[y]], p.x[p.q[z]]))
        .map(|(y, z)| vec![y, z]);
    rep.record("bracket.factors", factors);
    rep
}

impl RingPresentation {
    /// Completes `(rmod, q, x, π₁)` with the least `σ` satisfying the section relation.
    pub fn from_section(
        rmod: BraidedXMod,
        ring: FinRing,
        module: Bimodule,
        q: Vec<usize>,
        x: Vec<usize>,
        pi1: Vec<usize>,
    ) -> Result<Self, CatRingError> {
        let (r, lam) = (rmod.g().clone(), rmod.pi().clone());
        let add = ring.add.clone();
        let mut sigma = vec![vec![r.identity(); add.order()]; add.order()];
        for a in add.elements() {
            for b in add.elements() {
                let d = lam.mul(lam.inv(lam.mul(x[a], x[b])), x[add.mul(a, b)]);
                sigma[a][b] = r
                    .elements()
                    .find(|&s| rmod.base.bd(s) == d)
                    .ok_or_else(|| CatRingError::InvalidPresentation("section".into()))?;
            }
        }
        let p = RingPresentation {
            rmod,
            ring,
            module,
            q,
            x,
            sigma,
            pi1,
        };
        if let Some(c) = validate_presentation(&p).first_failure() {
            return Err(CatRingError::InvalidPresentation(c.id.clone()));
        }
        Ok(p)
    }

    /// `R = M`, `Λ = A`, `∂ = 0`, identity section, bracket `⟨a,b⟩ = B(a,b)`.
    pub fn split(ring: &FinRing, module: &Bimodule, bracket: T2) -> Result<Self, CatRingError> {
        let m = module.m.clone();
        let add = ring.add.clone();
        let base = XMod::zero(&m, &add);
        let rmod = BraidedXMod::new(base, bracket);
        let id: Vec<usize> = add.elements().collect();
        RingPresentation::from_section(
            rmod,
            ring.clone(),
            module.clone(),
            id.clone(),
            id,
            m.elements().collect(),
        )
    }

    /// `R = M ⊕ P`, `Λ = A ⊕ P`, `∂(m,p) = (0,p)`, `x_a = (a, t_a)`, bracket `B` on
    /// the `A` parts.
    pub fn thickened(
        ring: &FinRing,
        module: &Bimodule,
        bracket: &T2,
        p: &FinGroup,
        t: &[usize],
    ) -> Result<Self, CatRingError> {
        let m = &module.m;
        let add = &ring.add;
        let (np, nm) = (p.order(), m.order());
        let r = direct_product(m, p);
        let lam = direct_product(add, p);
        let boundary: Vec<usize> = r.elements().map(|s| s % np).collect();
        let base = XMod::with_trivial_action(&r, &lam, boundary);
        let br: T2 = lam
            .elements()
            .map(|y| lam.elements().map(|z| bracket[y / np][z / np] * np).collect())
            .collect();
        let rmod = BraidedXMod::new(base, br);
        let q = lam.elements().map(|y| y / np).collect();
        let x = add.elements().map(|a| a * np + t[a]).collect();
        let pi1 = (0..nm).map(|u| u * np).collect();
        RingPresentation::from_section(rmod, ring.clone(), module.clone(), q, x, pi1)
    }

    /// All bilinear maps `A × A → M`, as candidate brackets.
    pub fn bilinear_brackets(ring: &FinRing, module: &Bimodule) -> Vec<T2> {
        let add = &ring.add;
        let m = &module.m;
        let Ok(coords) = AbelianCoords::new(add) else {
            return Vec::new();
        };
        let gens: Vec<usize> = (0..coords.rank()).map(|k| coords.generator(k)).collect();
        let k = gens.len();
        let mut out = Vec::new();
        let total = m.order().pow((k * k) as u32);
        for code in 0..total {
            let mut c = code;
            let vals: Vec<usize> = (0..k * k)
                .map(|_| {
                    let v = c % m.order();
                    c /= m.order();
                    v
                })
                .collect();
            let table: T2 = add
                .elements()
                .map(|a| {
                    add.elements()
                        .map(|b| {
                            let (ca, cb) = (coords.coords(a), coords.coords(b));
                            let mut acc = m.identity();
                            for i in 0..k {
                                for j in 0..k {
                                    acc = m.mul(acc, m.pow(vals[i * k + j], (ca[i] * cb[j]) as i64));
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let bilinear = add.elements().all(|a| {
                add.elements().all(|b| {
                    add.elements().all(|c| {
                        table[add.mul(a, b)][c] == m.mul(table[a][c], table[b][c])
                            && table[a][add.mul(b, c)] == m.mul(table[a][b], table[a][c])
                    })
                })
            });
            if bilinear && !out.contains(&table) {
                out.push(table);
            }
        }
        out
    }
}

/// `(f₊, g₊)` from the section relation and the bracket.
pub fn extract_additive_cocycle(p: &RingPresentation) -> Result<(T3, T2), CatRingError> {
    let ps = Pres::new(p)?;
    additive_part(&ps)
}

fn additive_part(ps: &Pres) -> Result<(T3, T2), CatRingError> {
    let p = ps.p;
    let add = &p.ring.add;
    let n = add.order();
    let mut fplus = vec![vec![vec![0; n]; n]; n];
    let mut gplus = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = ps.sum(&[ps.sigma(b, c), ps.sigma(a, add.mul(b, c))]);
                let rhs = ps.sum(&[ps.sigma(a, b), ps.sigma(add.mul(a, b), c)]);
                fplus[a][b][c] = ps.m(ps.sub(lhs, rhs), "f₊", &[a, b, c])?;
            }
            let v = ps.sub(ps.sub(ps.sigma(a, b), ps.sigma(b, a)), p.rmod.br(p.x[a], p.x[b]));
            gplus[a][b] = ps.m(v, "g₊", &[a, b])?;
        }
    }
    Ok((fplus, gplus))
}

fn check_fibers(ps: &Pres, m: &MonoidData) -> Result<(), CatRingError> {
    let p = ps.p;
    let e2 = &m.e2;
    let wing = &p.rmod.base;
    if e2.arity() != 2 || e2.wings() != [wing.clone(), wing.clone()] || e2.coeff() != &p.rmod {
        return Err(CatRingError::FiberMismatch(
            "E₂ is not a biextension of Λ × Λ by R → Λ".into(),
        ));
    }
    let n = p.ring.order();
    if m.e_sections.len() != n || m.e_sections.iter().any(|r| r.len() != n) {
        return Err(CatRingError::FiberMismatch("e-section table has wrong shape".into()));
    }
    for a in 0..n {
        for b in 0..n {
            let e = m.e_sections[a][b];
            if e >= e2.len() || e2.base(e) != [p.x[a], p.x[b]] || e2.j(e) != p.x[p.ring.times(a, b)] {
                return Err(CatRingError::FiberMismatch(format!("e-section at ({a},{b})")));
            }
        }
    }
    Ok(())
}

/// Left and right actions of `A` on `M` from the sections of `E₂`, checked against
/// `p.module` and for independence of the representative in `Λ_a`.
pub fn derive_bimodule(p: &RingPresentation, m: &MonoidData) -> Result<BimoduleActionWitness, CatRingError> {
    let ps = Pres::new(p)?;
    check_fibers(&ps, m)?;
    derive_actions(&ps, m)
}

fn derive_actions(ps: &Pres, m: &MonoidData) -> Result<BimoduleActionWitness, CatRingError> {
    let p = ps.p;
    let e2 = &m.e2;
    let lam = ps.lam;
    let mm = &p.module.m;
    let n = p.ring.order();
    let mut left = vec![vec![0; mm.order()]; n];
    let mut right = vec![vec![0; n]; mm.order()];
    let zero = lam.identity();
    let order = p.x.iter().copied().chain(lam.elements().filter(|y| !p.x.contains(y)));
    for y in order {
        let a = p.q[y];
        for u in mm.elements() {
            let r = ps.emb(u);
            let s = e2
                .section(0, &[r, y])
                .ok_or_else(|| CatRingError::FiberMismatch("section missing".into()))?;
            let unit = e2
                .unit(0, &[zero, y])
                .ok_or_else(|| CatRingError::FiberMismatch("unit missing".into()))?;
            let v = ps.m(ps.r.inv(e2.divide(unit, s)), "right action", &[u, y])?;
            if y == p.x[a] {
                right[u][a] = v;
            } else if right[u][a] != v {
                return Err(CatRingError::ActionMismatch {
                    side: "right (representative)",
                    args: vec![u, y],
                });
            }
            let s = e2
                .section(1, &[y, r])
                .ok_or_else(|| CatRingError::FiberMismatch("section missing".into()))?;
            let unit = e2
                .unit(1, &[y, zero])
                .ok_or_else(|| CatRingError::FiberMismatch("unit missing".into()))?;
            let v = ps.m(ps.r.inv(e2.divide(unit, s)), "left action", &[y, u])?;
            if y == p.x[a] {
                left[a][u] = v;
            } else if left[a][u] != v {
                return Err(CatRingError::ActionMismatch {
                    side: "left (representative)",
                    args: vec![y, u],
                });
            }
        }
    }
    for a in 0..n {
        for u in mm.elements() {
            if left[a][u] != p.module.left[a][u] {
                return Err(CatRingError::ActionMismatch {
                    side: "left",
                    args: vec![a, u],
                });
            }
            if right[u][a] != p.module.right[u][a] {
                return Err(CatRingError::ActionMismatch {
                    side: "right",
                    args: vec![u, a],
                });
            }
        }
    }
    Ok(BimoduleActionWitness { left, right })
}

/// `g₁`, `g₂` at the section points and `α₁ = −(g₁ + σ_{ac,bc})`, `α₂ = g₂ + σ_{ab,ac}`,
/// with the report of the two associativity defects.
pub fn extract_alphas(p: &RingPresentation, m: &MonoidData) -> Result<(Alphas, Report), CatRingError> {
    let ps = Pres::new(p)?;
    check_fibers(&ps, m)?;
    alphas(&ps, m)
}

fn alphas(ps: &Pres, m: &MonoidData) -> Result<(Alphas, Report), CatRingError> {
    let p = ps.p;
    let e2 = &m.e2;
    let ring = &p.ring;
    let n = ring.order();
    let e = &m.e_sections;
    let miss = |s: &str| CatRingError::FiberMismatch(s.to_string());
    let mut g1 = vec![vec![vec![0; n]; n]; n];
    let mut g2 = g1.clone();
    let mut alpha1 = g1.clone();
    let mut alpha2 = g1.clone();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let t = e2.mul(0, e[a][c], e[b][c]).ok_or_else(|| miss("first law"))?;
                let s = e2
                    .section(0, &[ps.sigma(a, b), p.x[c]])
                    .ok_or_else(|| miss("first section"))?;
                let t = e2.mul(0, t, s).ok_or_else(|| miss("first law"))?;
                let target = e[ring.plus(a, b)][c];
                if e2.base(t) != e2.base(target) {
                    return Err(miss("first law leaves the fiber"));
                }
                g1[a][b][c] = e2.divide(target, t);
                let (ac, bc) = (ring.times(a, c), ring.times(b, c));
                let v = ps.r.inv(ps.add(g1[a][b][c], ps.sigma(ac, bc)));
                alpha1[a][b][c] = ps.m(v, "α₁", &[a, b, c])?;

                let t = e2.mul(1, e[a][b], e[a][c]).ok_or_else(|| miss("second law"))?;
                let s = e2
                    .section(1, &[p.x[a], ps.sigma(b, c)])
                    .ok_or_else(|| miss("second section"))?;
                let t = e2.mul(1, t, s).ok_or_else(|| miss("second law"))?;
                let target = e[a][ring.plus(b, c)];
                if e2.base(t) != e2.base(target) {
                    return Err(miss("second law leaves the fiber"));
                }
                g2[a][b][c] = e2.divide(target, t);
                let (ab, ac) = (ring.times(a, b), ring.times(a, c));
                alpha2[a][b][c] = ps.m(ps.add(g2[a][b][c], ps.sigma(ab, ac)), "α₂", &[a, b, c])?;
            }
        }
    }
    let (fplus, _) = additive_part(ps)?;
    let module = &p.module;
    let mut rep = Report::new();
    let mut bad1 = None;
    let mut bad2 = None;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let lhs = ps.add(g1[ring.plus(a, b)][c][d], g1[a][b][d]);
                    let rhs = ps.sum(&[
                        g1[a][ring.plus(b, c)][d],
                        g1[b][c][d],
                        ps.emb(module.rmul(fplus[a][b][c], d)),
                    ]);
                    if lhs != rhs && bad1.is_none() {
                        bad1 = Some(vec![a, b, c, d]);
                    }
                    let lhs = ps.add(g2[a][ring.plus(b, c)][d], g2[a][b][c]);
                    let rhs = ps.sum(&[
                        g2[a][b][ring.plus(c, d)],
                        g2[a][c][d],
                        ps.emb(module.lmul(a, fplus[b][c][d])),
                    ]);
                    if lhs != rhs && bad2.is_none() {
                        bad2 = Some(vec![a, b, c, d]);
                    }
                }
            }
        }
    }
    rep.record("associativity_defect.right", bad1);
    rep.record("associativity_defect.left", bad2);
    Ok((Alphas { alpha1, alpha2, g1, g2 }, rep))
}

/// The two bracketings `E₂(E₂,I)` and `E₂(I,E₂)` with `μ` extended to every point.
pub struct MonoidMaps {
    pub left: Composite,
    pub right: Composite,
    /// Full map `E₂(E₂,I) → E₂(I,E₂)` (`None` where transport collides).
    pub mu: Vec<Option<usize>>,
}

fn identity_unit(id: &MultiExt, y: usize) -> usize {
    id.fiber_rep(&[y])
}

fn base_point(ps: &Pres, m: &MonoidData, id: &MultiExt, left: &Composite, a: usize, b: usize, c: usize) -> usize {
    let ab = ps.p.ring.times(a, b);
    left.class_of(&[m.e_sections[a][b], identity_unit(id, ps.p.x[c])], m.e_sections[ab][c])
}

fn target_point(ps: &Pres, m: &MonoidData, id: &MultiExt, right: &Composite, a: usize, b: usize, c: usize) -> usize {
    let bc = ps.p.ring.times(b, c);
    right.class_of(&[identity_unit(id, ps.p.x[a]), m.e_sections[b][c]], m.e_sections[a][bc])
}

/// Moves `pt` to the fiber over `target` along the sections of each law.
fn transport_point(ps: &Pres, model: &MultiExt, pt: usize, target: &[usize]) -> Option<usize> {
    let mut pt = pt;
    for i in 0..target.len() {
        let cur = model.base(pt).to_vec();
        let d = ps.lam.mul(ps.lam.inv(cur[i]), target[i]);
        let mut key = cur;
        key[i] = ps.lift(d);
        let s = model.section(i, &key)?;
        pt = model.mul(i, pt, s)?;
    }
    Some(pt)
}

pub fn monoid_maps(p: &RingPresentation, m: &MonoidData) -> Result<MonoidMaps, CatRingError> {
    let ps = Pres::new(p)?;
    check_fibers(&ps, m)?;
    maps(&ps, m)
}

fn maps(ps: &Pres, m: &MonoidData) -> Result<MonoidMaps, CatRingError> {
    let id = MultiExt::identity(&ps.p.rmod)?;
    let left = Composite::new(&m.e2, &[&m.e2, &id])?;
    let right = Composite::new(&m.e2, &[&id, &m.e2])?;
    let n = ps.p.ring.order();
    let mut mu = vec![None; left.model.len()];
    let rg = ps.r;
    for code in 0..left.model.base_count() {
        let target = left.model.base_tuple(code);
        let (a, b, c) = (ps.p.q[target[0]], ps.p.q[target[1]], ps.p.q[target[2]]);
        let p0 = base_point(ps, m, &id, &left, a, b, c);
        let image = m.mu[a][b][c];
        if image >= right.model.len() {
            return Err(CatRingError::MuNotDefinedAtPoint(vec![a, b, c]));
        }
        let (Some(lp), Some(rp)) = (
            transport_point(ps, &left.model, p0, &target),
            transport_point(ps, &right.model, image, &target),
        ) else {
            return Err(CatRingError::FiberMismatch("section transport failed".into()));
        };
        for g in rg.elements() {
            mu[left.model.act(lp, g)] = Some(right.model.act(rp, g));
        }
    }
    debug_assert!(n > 0);
    Ok(MonoidMaps { left, right, mu })
}

/// `E₂` validates, the `e`-sections lie in their fibers, and `μ` extends to an
/// isomorphism of tri-extensions.
pub fn validate_monoid(p: &RingPresentation, m: &MonoidData) -> Result<Report, CatRingError> {
    let ps = Pres::new(p)?;
    let mut rep = Report::new();
    let v = validate_multiext(&m.e2);
    rep.record(
        "e2",
        v.first_failure().map(|c| c.counterexample.clone().unwrap_or_default()),
    );
    if !v.passed() {
        return Ok(rep);
    }
    check_fibers(&ps, m)?;
    rep.record("e_sections", None);
    let mm = maps(&ps, m)?;
    let missing = mm.mu.iter().position(|v| v.is_none()).map(|e| vec![e]);
    rep.record("mu.total", missing.clone());
    if missing.is_none() {
        let map: Vec<usize> = mm.mu.iter().map(|v| v.unwrap()).collect();
        let iso = verify_iso(&mm.left.model, &mm.right.model, &map);
        rep.merge("mu.", iso);
    }
    Ok(rep)
}

/// `f(a,b,c)` from `μ([e_{a,b}, 0_c, e_{ab,c}]) = [0_a, e_{b,c}, e_{a,bc}] − f(a,b,c)`.
pub fn extract_f(p: &RingPresentation, m: &MonoidData) -> Result<T3, CatRingError> {
    let ps = Pres::new(p)?;
    check_fibers(&ps, m)?;
    extract_f_inner(&ps, m)
}

fn extract_f_inner(ps: &Pres, m: &MonoidData) -> Result<T3, CatRingError> {
    let id = MultiExt::identity(&ps.p.rmod)?;
    let right = Composite::new(&m.e2, &[&id, &m.e2])?;
    let n = ps.p.ring.order();
    let mut f = vec![vec![vec![0; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let q = target_point(ps, m, &id, &right, a, b, c);
                let img = m.mu[a][b][c];
                if img >= right.model.len()
                    || right.model.base(img) != right.model.base(q)
                    || right.model.j(img) != right.model.j(q)
                {
                    return Err(CatRingError::MuNotDefinedAtPoint(vec![a, b, c]));
                }
                let d = right.model.divide(q, img);
                f[a][b][c] = ps.m(ps.r.inv(d), "f", &[a, b, c])?;
            }
        }
    }
    Ok(f)
}

/// The twisted cocycle `ξ = (f, α₁, α₂, f₊, g₊)` of a decomposition.
pub fn decompose(p: &RingPresentation, m: &MonoidData) -> Result<Cochain5, CatRingError> {
    let ps = Pres::new(p)?;
    check_fibers(&ps, m)?;
    derive_actions(&ps, m)?;
    let (fplus, gplus) = additive_part(&ps)?;
    let (al, _) = alphas(&ps, m)?;
    let f = extract_f_inner(&ps, m)?;
    Ok(Cochain5 {
        f,
        alpha1: al.alpha1,
        alpha2: al.alpha2,
        fplus,
        gplus,
    })
}

/// The Hochschild identity `a f(b,c,d) − f(ab,c,d) + f(a,bc,d) − f(a,b,cd) + f(a,b,c) d = 0`.
pub fn hochschild_check(ring: &FinRing, module: &Bimodule, f: &T3) -> Result<(), CatRingError> {
    let m = &module.m;
    let n = ring.order();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = m.prod(&[
                        module.lmul(a, f[b][c][d]),
                        m.inv(f[ring.times(a, b)][c][d]),
                        f[a][ring.times(b, c)][d],
                        m.inv(f[a][b][ring.times(c, d)]),
                        module.rmul(f[a][b][c], d),
                    ]);
                    if v != m.identity() {
                        return Err(CatRingError::PentagonViolated(vec![a, b, c, d]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Pentagon condition on the `f` extracted from `μ`.
pub fn pentagon_check(p: &RingPresentation, m: &MonoidData) -> Result<Report, CatRingError> {
    let f = extract_f(p, m)?;
    let mut rep = Report::new();
    match hochschild_check(&p.ring, &p.module, &f) {
        Ok(()) => rep.record("pentagon", None),
        Err(CatRingError::PentagonViolated(q)) => rep.record("pentagon", Some(q)),
        Err(e) => return Err(e),
    }
    Ok(rep)
}

/// Invariant-factor coordinates of the twisted class of a decomposition.
pub fn class_of(p: &RingPresentation, m: &MonoidData) -> Result<Vec<u64>, CatRingError> {
    let xi = decompose(p, m)?;
    twisted_class(&p.ring, &p.module, &xi)
}

pub fn twisted_class(ring: &FinRing, module: &Bimodule, xi: &Cochain5) -> Result<Vec<u64>, CatRingError> {
    let ctx = CohomContext::new(ring, module)?;
    let s = ctx.solver(CocycleMode::Twisted, PivotOrder::First);
    s.class_of(&ctx.to_vector(xi)).ok_or_else(|| {
        let r = is_cocycle(&ctx, xi, CocycleMode::Twisted);
        CatRingError::NotACocycle(r.first_failure().map(|c| c.id.clone()).unwrap_or_default())
    })
}

/// Solves `δ(0,h)` restricted to `(f₊, g₊)` = `target`.
fn additive_gauge(ctx: &CohomContext, target: &(T3, T2)) -> Option<T2> {
    let module = &ctx.module;
    let coords = AbelianCoords::new(&module.m).ok()?;
    let rk = coords.rank();
    let n = ctx.n();
    if rk == 0 {
        return Some(vec![vec![module.m.identity(); n]; n]);
    }
    let components = |xi: &Cochain5| -> Vec<i64> {
        xi.fplus
            .iter()
            .flatten()
            .flatten()
            .chain(xi.gplus.iter().flatten())
            .flat_map(|&v| coords.coords(v).iter().map(|&c| c as i64).collect::<Vec<_>>())
            .collect()
    };
    let mut cols: Vec<Vec<i64>> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for k in 0..rk {
                let mut nu = Cochain2::zero(n, module.m.identity());
                nu.h[a][b] = coords.generator(k);
                cols.push(components(&coboundary(ctx, &nu)));
            }
        }
    }
    let rows_n = cols[0].len();
    let moduli: Vec<i64> = (0..rows_n).map(|i| coords.factors[i % rk] as i64).collect();
    let nvars = cols.len() + rows_n;
    let rows: Vec<Vec<i64>> = (0..rows_n)
        .map(|i| {
            let mut row: Vec<i64> = cols.iter().map(|c| c[i]).collect();
            row.extend((0..rows_n).map(|j| if i == j { moduli[i] } else { 0 }));
            row
        })
        .collect();
    let mut tgt = Cochain5::zero(n, module.m.identity());
    tgt.fplus = target.0.clone();
    tgt.gplus = target.1.clone();
    let t = components(&tgt);
    let y = solve_integer(&rows, nvars, &t)?;
    let mut h = vec![vec![module.m.identity(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let base = (a * n + b) * rk;
            h[a][b] = coords.element(&y[base..base + rk]);
        }
    }
    Some(h)
}

fn sub_tables3(m: &FinGroup, x: &T3, y: &T3) -> T3 {
    x.iter()
        .zip(y)
        .map(|(u, v)| {
            u.iter()
                .zip(v)
                .map(|(s, t)| s.iter().zip(t).map(|(&a, &b)| m.mul(a, m.inv(b))).collect())
                .collect()
        })
        .collect()
}

fn sub_tables2(m: &FinGroup, x: &T2, y: &T2) -> T2 {
    x.iter()
        .zip(y)
        .map(|(s, t)| s.iter().zip(t).map(|(&a, &b)| m.mul(a, m.inv(b))).collect())
        .collect()
}

/// Builds monoid data on `skeleton` whose decomposition is cohomologous to `ξ`.
/// Returns the skeleton with `σ` adjusted to carry the additive part of `ξ`.
pub fn reconstruct(xi: &Cochain5, skeleton: &RingPresentation) -> Result<(RingPresentation, MonoidData), CatRingError> {
    let ring = &skeleton.ring;
    let module = &skeleton.module;
    let ctx = CohomContext::new(ring, module)?;
    let check = is_cocycle(&ctx, xi, CocycleMode::Twisted);
    if let Some(c) = check.first_failure() {
        return Err(CatRingError::NotACocycle(c.id.clone()));
    }
    let ps0 = Pres::new(skeleton)?;
    let (fp0, gp0) = additive_part(&ps0)?;
    let mm = &module.m;
    let diff = (sub_tables3(mm, &xi.fplus, &fp0), sub_tables2(mm, &xi.gplus, &gp0));
    let h = additive_gauge(&ctx, &diff).ok_or(CatRingError::InconsistentSkeleton)?;
    let mut p = skeleton.clone();
    let r = p.rmod.g().clone();
    for (a, row) in p.sigma.iter_mut().enumerate() {
        for (b, s) in row.iter_mut().enumerate() {
            *s = r.mul(*s, r.inv(skeleton.pi1[h[a][b]]));
        }
    }
    let ps = Pres::new(&p)?;
    debug_assert!(additive_part(&ps)
        .map(|(f, g)| f == xi.fplus && g == xi.gplus)
        .unwrap_or(false));
    let e2 = reconstruct_e2(&ps, xi)?;
    let n = ring.order();
    let e_sections: T2 = (0..n)
        .map(|a| (0..n).map(|b| e2.point(&[p.x[a], p.x[b]], r.identity())).collect())
        .collect();
    let id = MultiExt::identity(&p.rmod)?;
    let right = Composite::new(&e2, &[&id, &e2])?;
    let partial = MonoidData {
        e2,
        e_sections,
        mu: Vec::new(),
    };
    let mut mu = vec![vec![vec![0; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let q = target_point(&ps, &partial, &id, &right, a, b, c);
                mu[a][b][c] = right.model.act(q, r.inv(ps.emb(xi.f[a][b][c])));
            }
        }
    }
    let data = MonoidData { mu, ..partial };
    Ok((p, data))
}

fn reconstruct_e2(ps: &Pres, xi: &Cochain5) -> Result<MultiExt, CatRingError> {
    let p = ps.p;
    let ring = &p.ring;
    let module = &p.module;
    let lam = ps.lam;
    let q = &p.q;
    let zero = ring.zero();
    let emb = |m: usize| ps.emb(m);
    let tau = |y: usize, z: usize| -> usize {
        let v = ps.sub(
            ps.sub(ps.add(ps.rho[y], ps.rho[z]), ps.sigma(q[y], q[z])),
            ps.rho[lam.mul(y, z)],
        );
        ps.to_m[v].expect("τ lies in π₁")
    };
    let nu = |r: usize| -> usize { ps.to_m[ps.sub(r, ps.rho[p.rmod.base.bd(r)])].expect("ν lies in π₁") };
    let s00 = ps.to_m[ps.sigma(zero, zero)].expect("σ₀₀ lies in π₁");
    let mm = &module.m;
    let c1 = |b: usize| -> usize {
        let v = mm.prod(&[mm.inv(xi.alpha1[zero][zero][b]), mm.inv(s00), module.rmul(s00, b)]);
        emb(v)
    };
    let c2 = |a: usize| -> usize {
        let v = mm.prod(&[xi.alpha2[a][zero][zero], mm.inv(s00), module.lmul(a, s00)]);
        emb(v)
    };
    let wing = p.rmod.base.clone();
    let x = |t: &[usize]| p.x[ring.times(q[t[0]], q[t[1]])];
    let g = |i: usize, t: &[usize], w: usize| -> usize {
        if i == 0 {
            let (a, a2, b) = (q[t[0]], q[w], q[t[1]]);
            let big =
                ps.r.inv(ps.add(emb(xi.alpha1[a][a2][b]), ps.sigma(ring.times(a, b), ring.times(a2, b))));
            ps.sub(big, emb(module.rmul(tau(t[0], w), b)))
        } else {
            let (a, b, b2) = (q[t[0]], q[t[1]], q[w]);
            let big = ps.sub(emb(xi.alpha2[a][b][b2]), ps.sigma(ring.times(a, b), ring.times(a, b2)));
            ps.sub(big, emb(module.lmul(a, tau(t[1], w))))
        }
    };
    let u = |i: usize, key: &[usize]| -> usize {
        if i == 0 {
            let b = q[key[1]];
            ps.add(emb(module.rmul(nu(key[0]), b)), c1(b))
        } else {
            let a = q[key[0]];
            ps.add(emb(module.lmul(a, nu(key[1]))), c2(a))
        }
    };
    Ok(MultiExt::trivialized(
        vec![wing.clone(), wing],
        p.rmod.clone(),
        x,
        g,
        u,
    )?)
}

/// Split skeleton carrying the additive part of `ξ`, searching over bilinear brackets.
pub fn split_skeleton_for(ring: &FinRing, module: &Bimodule, xi: &Cochain5) -> Result<RingPresentation, CatRingError> {
    let ctx = CohomContext::new(ring, module)?;
    let mm = &module.m;
    for br in RingPresentation::bilinear_brackets(ring, module) {
        let p = RingPresentation::split(ring, module, br)?;
        let (fp, gp) = extract_additive_cocycle(&p)?;
        let diff = (sub_tables3(mm, &xi.fplus, &fp), sub_tables2(mm, &xi.gplus, &gp));
        if additive_gauge(&ctx, &diff).is_some() {
            return Ok(p);
        }
    }
    Err(CatRingError::InconsistentSkeleton)
}

/// Change of section `x'_a = x_a + ∂r_a` (`r₀ = 0`), with `σ`, the `e`-sections and the
/// base points of `μ` moved accordingly.
pub fn change_section(
    p: &RingPresentation,
    m: &MonoidData,
    shift: &[usize],
) -> Result<(RingPresentation, MonoidData), CatRingError> {
    let ps = Pres::new(p)?;
    check_fibers(&ps, m)?;
    let full = maps(&ps, m)?;
    let add = &p.ring.add;
    let rg = ps.r;
    let d = |s: usize| p.rmod.base.bd(s);
    if shift.len() != add.order() || shift[add.identity()] != rg.identity() {
        return Err(CatRingError::InvalidPresentation(
            "section shift must vanish at 0".into(),
        ));
    }
    let x2: Vec<usize> = add.elements().map(|a| ps.lam.mul(p.x[a], d(shift[a]))).collect();
    let mut p2 = p.clone();
    p2.x = x2.clone();
    for a in add.elements() {
        for b in add.elements() {
            p2.sigma[a][b] = ps.sum(&[p.sigma[a][b], shift[add.mul(a, b)], rg.inv(shift[a]), rg.inv(shift[b])]);
        }
    }
    let ps2 = Pres::new(&p2)?;
    let e2 = &m.e2;
    let n = p.ring.order();
    let miss = || CatRingError::FiberMismatch("section transport failed".into());
    let mut e_sections = m.e_sections.clone();
    for a in 0..n {
        for b in 0..n {
            let t = e2
                .mul(
                    0,
                    m.e_sections[a][b],
                    e2.section(0, &[shift[a], p.x[b]]).ok_or_else(miss)?,
                )
                .ok_or_else(miss)?;
            let t = e2
                .mul(1, t, e2.section(1, &[x2[a], shift[b]]).ok_or_else(miss)?)
                .ok_or_else(miss)?;
            e_sections[a][b] = e2.act(t, shift[p.ring.times(a, b)]);
        }
    }
    let id = MultiExt::identity(&p.rmod)?;
    let partial = MonoidData {
        e2: e2.clone(),
        e_sections,
        mu: Vec::new(),
    };
    let mu = remap_mu(&ps2, &partial, &id, &full)?;
    Ok((p2, MonoidData { mu, ..partial }))
}

fn remap_mu(ps: &Pres, m: &MonoidData, id: &MultiExt, full: &MonoidMaps) -> Result<T3, CatRingError> {
    let n = ps.p.ring.order();
    let mut mu = vec![vec![vec![0; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let pt = base_point(ps, m, id, &full.left, a, b, c);
                mu[a][b][c] = full.mu[pt].ok_or(CatRingError::MuNotDefinedAtPoint(vec![a, b, c]))?;
            }
        }
    }
    Ok(mu)
}

/// `e'_{a,b} = e_{a,b}·m_{a,b}` with `m_{a,b} ∈ M`.
pub fn shift_e_sections(p: &RingPresentation, m: &MonoidData, shifts: &T2) -> Result<MonoidData, CatRingError> {
    let ps = Pres::new(p)?;
    check_fibers(&ps, m)?;
    let full = maps(&ps, m)?;
    let e_sections: T2 = m
        .e_sections
        .iter()
        .zip(shifts)
        .map(|(row, sh)| row.iter().zip(sh).map(|(&e, &s)| m.e2.act(e, ps.emb(s))).collect())
        .collect();
    let id = MultiExt::identity(&p.rmod)?;
    let partial = MonoidData {
        e2: m.e2.clone(),
        e_sections,
        mu: Vec::new(),
    };
    let mu = remap_mu(&ps, &partial, &id, &full)?;
    Ok(MonoidData { mu, ..partial })
}

/// Replaces `E₂` by the isomorphic model obtained along `φ(e) = e·k(base(e))`,
/// `k` with values in `M`, keeping the same `e`-section elements.
pub fn butterfly_iso(p: &RingPresentation, m: &MonoidData, k: &[usize]) -> Result<MonoidData, CatRingError> {
    let ps = Pres::new(p)?;
    check_fibers(&ps, m)?;
    let e2 = &m.e2;
    if k.len() != e2.base_count() {
        return Err(CatRingError::FiberMismatch("gauge has wrong size".into()));
    }
    let phi: Vec<usize> = (0..e2.len())
        .map(|e| e2.act(e, ps.emb(k[e2.element_code(e)])))
        .collect();
    let e2b = transport(e2, &phi)?;
    let full = maps(&ps, m)?;
    let id = MultiExt::identity(&p.rmod)?;
    let left2 = Composite::new(&e2b, &[&e2b, &id])?;
    let right2 = Composite::new(&e2b, &[&id, &e2b])?;
    let map_left: Vec<usize> = (0..full.left.model.len())
        .map(|c| {
            let (v, u) = full.left.representative(c);
            left2.class_of(&[phi[v[0]], v[1]], phi[u])
        })
        .collect();
    let mut inv_left = vec![usize::MAX; map_left.len()];
    for (c, &d) in map_left.iter().enumerate() {
        inv_left[d] = c;
    }
    let map_right = |c: usize| {
        let (v, u) = full.right.representative(c);
        right2.class_of(&[v[0], phi[v[1]]], phi[u])
    };
    let partial = MonoidData {
        e2: e2b,
        e_sections: m.e_sections.clone(),
        mu: Vec::new(),
    };
    let n = p.ring.order();
    let mut mu = vec![vec![vec![0; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let pt = base_point(&ps, &partial, &id, &left2, a, b, c);
                let src = inv_left[pt];
                let img = full
                    .mu
                    .get(src)
                    .copied()
                    .flatten()
                    .ok_or(CatRingError::MuNotDefinedAtPoint(vec![a, b, c]))?;
                mu[a][b][c] = map_right(img);
            }
        }
    }
    Ok(MonoidData { mu, ..partial })
}
