//! Crossed modules `∂: G → Π` with a right action of `Π` on `G`, braidings and
//! homotopy groups.

use crate::fingroup::{
    check_action_tables, check_hom_tables, conjugation_table, make_group, trivial_action_table, FinGroup, GroupHom,
};
use crate::report::Report;
use serde::{Deserialize, Serialize};

/// `∂: G → Π` together with `act[g][x] = g^x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XMod {
    #[serde(rename = "G")]
    pub g: FinGroup,
    #[serde(rename = "Pi")]
    pub pi: FinGroup,
    pub boundary: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl XMod {
    pub fn new(g: FinGroup, pi: FinGroup, boundary: Vec<usize>, action: Vec<Vec<usize>>) -> Self {
        XMod {
            g,
            pi,
            boundary,
            action,
        }
    }

    /// `id: G → G` with conjugation.
    pub fn identity(g: &FinGroup) -> Self {
        XMod::new(g.clone(), g.clone(), g.elements().collect(), conjugation_table(g))
    }

    /// The zero map `G → Π` with trivial action.
    pub fn zero(g: &FinGroup, pi: &FinGroup) -> Self {
        XMod::new(
            g.clone(),
            pi.clone(),
            vec![pi.identity(); g.order()],
            trivial_action_table(pi, g),
        )
    }

    /// A homomorphism `∂` with trivial action (valid when `G` is abelian and `im ∂` central).
    pub fn with_trivial_action(g: &FinGroup, pi: &FinGroup, boundary: Vec<usize>) -> Self {
        XMod::new(g.clone(), pi.clone(), boundary, trivial_action_table(pi, g))
    }

    #[inline]
    pub fn bd(&self, g: usize) -> usize {
        self.boundary[g]
    }

    /// `g^x`.
    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    /// `g^{-x} = (g⁻¹)^x`.
    #[inline]
    pub fn act_inv(&self, g: usize, x: usize) -> usize {
        self.action[self.g.inv(g)][x]
    }

    pub fn boundary_hom(&self) -> GroupHom {
        GroupHom {
            dom: self.g.clone(),
            cod: self.pi.clone(),
            map: self.boundary.clone(),
        }
    }

    pub fn has_trivial_action(&self) -> bool {
        self.action
            .iter()
            .enumerate()
            .all(|(g, row)| row.iter().all(|&v| v == g))
    }
}

/// Checks every crossed-module axiom by exhaustive scan.
pub fn validate_xmod(m: &XMod) -> Report {
    let mut r = Report::new();
    check_hom_tables(&mut r, &m.g, &m.pi, &m.boundary, "boundary.");
    check_action_tables(&mut r, &m.pi, &m.g, &m.action, "");
    if !r.passed() && (m.boundary.len() != m.g.order() || m.action.len() != m.g.order()) {
        return r;
    }
    let (g, pi) = (&m.g, &m.pi);
    let mut equi = None;
    'e: for a in g.elements() {
        for x in pi.elements() {
            if m.bd(m.act(a, x)) != pi.conj(m.bd(a), x) {
                equi = Some(vec![a, x]);
                break 'e;
            }
        }
    }
    r.record("equivariance", equi);
    let mut peiffer = None;
    'p: for a in g.elements() {
        for h in g.elements() {
            if m.act(a, m.bd(h)) != g.conj(a, h) {
                peiffer = Some(vec![a, h]);
                break 'p;
            }
        }
    }
    r.record("peiffer", peiffer);
    r
}

/// A crossed module with a bracket `⟨x,y⟩: Π × Π → G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidedXMod {
    #[serde(flatten)]
    pub base: XMod,
    pub bracket: Vec<Vec<usize>>,
}

impl BraidedXMod {
    pub fn new(base: XMod, bracket: Vec<Vec<usize>>) -> Self {
        BraidedXMod { base, bracket }
    }

    /// Constant bracket `e`.
    pub fn trivial(base: XMod) -> Self {
        let n = base.pi.order();
        let e = base.g.identity();
        BraidedXMod {
            base,
            bracket: vec![vec![e; n]; n],
        }
    }

    #[inline]
    pub fn br(&self, x: usize, y: usize) -> usize {
        self.bracket[x][y]
    }

    pub fn g(&self) -> &FinGroup {
        &self.base.g
    }

    pub fn pi(&self) -> &FinGroup {
        &self.base.pi
    }

    pub fn is_trivial_bracket(&self) -> bool {
        let e = self.base.g.identity();
        self.bracket.iter().all(|row| row.iter().all(|&v| v == e))
    }
}

/// Checks `∂⟨x,y⟩ = y⁻¹x⁻¹yx` and the four bracket identities.
pub fn validate_braiding(b: &BraidedXMod) -> Report {
    let mut r = validate_xmod(&b.base);
    let m = &b.base;
    let (g, pi) = (&m.g, &m.pi);
    let n = pi.order();
    if b.bracket.len() != n
        || b.bracket
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&v| v >= g.order()))
    {
        r.fail("bracket.shape", vec![], "bracket table has wrong shape");
        return r;
    }
    let first = |pred: &dyn Fn(usize, usize) -> bool| -> Option<Vec<usize>> {
        for x in pi.elements() {
            for y in pi.elements() {
                if !pred(x, y) {
                    return Some(vec![x, y]);
                }
            }
        }
        None
    };
    r.record(
        "bracket.boundary",
        first(&|x, y| m.bd(b.br(x, y)) == pi.prod(&[pi.inv(y), pi.inv(x), y, x])),
    );
    let mut right = None;
    let mut left = None;
    'outer: for x in pi.elements() {
        for y in pi.elements() {
            for z in pi.elements() {
                if right.is_none() && b.br(x, pi.mul(y, z)) != g.mul(m.act(b.br(x, y), z), b.br(x, z)) {
                    right = Some(vec![x, y, z]);
                }
                if left.is_none() && b.br(pi.mul(x, y), z) != g.mul(b.br(y, z), m.act(b.br(x, z), y)) {
                    left = Some(vec![x, y, z]);
                }
                if right.is_some() && left.is_some() {
                    break 'outer;
                }
            }
        }
    }
    r.record("bracket.multiplicative_right", right);
    r.record("bracket.multiplicative_left", left);
    let mut bd_right = None;
    let mut bd_left = None;
    for x in pi.elements() {
        for h in g.elements() {
            if bd_right.is_none() && b.br(x, m.bd(h)) != g.mul(g.inv(h), m.act(h, x)) {
                bd_right = Some(vec![x, h]);
            }
            if bd_left.is_none() && b.br(m.bd(h), x) != g.mul(m.act_inv(h, x), h) {
                bd_left = Some(vec![h, x]);
            }
        }
    }
    r.record("bracket.boundary_right", bd_right);
    r.record("bracket.boundary_left", bd_left);
    r
}

/// `⟨y,x⟩ = ⟨x,y⟩⁻¹` for all pairs.
pub fn is_symmetric(b: &BraidedXMod) -> bool {
    let g = b.g();
    b.pi()
        .elements()
        .all(|x| b.pi().elements().all(|y| b.br(y, x) == g.inv(b.br(x, y))))
}

/// Symmetric and `⟨x,x⟩ = e`.
pub fn is_picard(b: &BraidedXMod) -> bool {
    is_symmetric(b) && b.pi().elements().all(|x| b.br(x, x) == b.g().identity())
}

/// Coordinate of the braiding morphism on trivialized torsors: `⟨x,y⟩⁻¹`.
pub fn braiding_coordinate(b: &BraidedXMod, x: usize, y: usize) -> usize {
    b.g().inv(b.br(x, y))
}

/// In the strict monoidal category of a braided crossed module with `∂ = 0`,
/// trivial action and abelian `G`, compares the two composites
/// `xyzw → ywxz` through `1⊗c_{y,z}⊗1` then `c_{xz,yw}`, and through
/// `c_{x,y}⊗c_{z,w}` then `1⊗c_{x,w}⊗1`.
///
/// Returns `None` outside that setting, otherwise the first quadruple where the
/// square fails to commute (wrapped in `Some`) or `Some(None)` when it commutes.
pub fn braided_square_defect(b: &BraidedXMod) -> Option<Option<[usize; 4]>> {
    let m = &b.base;
    let (g, pi) = (&m.g, &m.pi);
    let applies =
        g.is_abelian() && pi.is_abelian() && m.has_trivial_action() && m.boundary.iter().all(|&v| v == pi.identity());
    if !applies {
        return None;
    }
    let chi = |x, y| braiding_coordinate(b, x, y);
    for x in pi.elements() {
        for y in pi.elements() {
            for z in pi.elements() {
                for w in pi.elements() {
                    let top = g.mul(chi(y, z), chi(pi.mul(x, z), pi.mul(y, w)));
                    let bottom = g.prod(&[chi(x, y), chi(z, w), chi(x, w)]);
                    if top != bottom {
                        return Some(Some([x, y, z, w]));
                    }
                }
            }
        }
    }
    Some(None)
}

/// `π₀ = Π/im ∂` and `π₁ = ker ∂` with their structure maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyData {
    pub pi0: FinGroup,
    pub pi1: FinGroup,
    pub pi0_proj: GroupHom,
    pub pi1_incl: GroupHom,
    /// Least-index coset representative of each `π₀` element.
    pub pi0_reps: Vec<usize>,
    pub pi1_central: bool,
}

pub fn homotopy(m: &XMod) -> HomotopyData {
    let (g, pi) = (&m.g, &m.pi);
    let mut image = vec![false; pi.order()];
    for a in g.elements() {
        image[m.bd(a)] = true;
    }
    let rep_of = |x: usize| {
        (0..pi.order())
            .filter(|&n| image[n])
            .map(|n| pi.mul(x, n))
            .min()
            .unwrap()
    };
    let mut reps: Vec<usize> = pi.elements().map(rep_of).collect();
    reps.sort_unstable();
    reps.dedup();
    let idx = |x: usize| reps.binary_search(&rep_of(x)).unwrap();
    let mul0 = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| idx(pi.mul(a, b))).collect())
        .collect();
    let pi0 = make_group(mul0, Some(idx(pi.identity()))).expect("quotient by a normal subgroup");
    let proj: Vec<usize> = pi.elements().map(idx).collect();

    let kernel: Vec<usize> = g.elements().filter(|&a| m.bd(a) == pi.identity()).collect();
    let kidx = |a: usize| kernel.binary_search(&a).unwrap();
    let mul1 = kernel
        .iter()
        .map(|&a| kernel.iter().map(|&b| kidx(g.mul(a, b))).collect())
        .collect();
    let pi1 = make_group(mul1, Some(kidx(g.identity()))).expect("kernel is a subgroup");
    let pi1_central = kernel.iter().all(|&z| g.is_central(z));
    HomotopyData {
        pi0_proj: GroupHom {
            dom: pi.clone(),
            cod: pi0.clone(),
            map: proj,
        },
        pi1_incl: GroupHom {
            dom: pi1.clone(),
            cod: g.clone(),
            map: kernel,
        },
        pi0,
        pi1,
        pi0_reps: reps,
        pi1_central,
    }
}

/// `G = Π = ℤ/n`, `∂ = 0`, trivial action, bracket `⟨x,y⟩ = xy mod n`.
pub fn multiplication_bracket(n: usize) -> BraidedXMod {
    let c = crate::fingroup::cyclic(n);
    let base = XMod::zero(&c, &c);
    let bracket = (0..n).map(|x| (0..n).map(|y| x * y % n).collect()).collect();
    BraidedXMod::new(base, bracket)
}
