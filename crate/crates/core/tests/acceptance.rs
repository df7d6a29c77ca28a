//! One pass/fail line per acceptance criterion. Run with `--nocapture` to see them.

use bextlab::barcx::{build_bar, build_l, check_bar_square, homology, Bimodule, FinRing};
use bextlab::biext::*;
use bextlab::catring::*;
use bextlab::cohom::{cohomology_group, is_cocycle, Cochain5, CocycleMode, CohomContext};
use bextlab::fingroup::{cyclic, direct_product};
use bextlab::linalg::PivotOrder;
use bextlab::max_search;
use bextlab::multiext::*;
use bextlab::xmod::{multiplication_bracket, BraidedXMod, XMod};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Outcome {
    let h2 = homology(&build_l(&FinRing::zn(2), 3), 2);
    let h3 = homology(&build_l(&FinRing::zn(3), 3), 2);
    ensure(h2 == vec![2], format!("Z/2 gives {h2:?}"))?;
    ensure(h3.is_empty(), format!("Z/3 gives {h3:?}"))?;
    Ok(format!("H2(L3(Z/2)) = {h2:?}, H2(L3(Z/3)) = {h3:?}"))
}

fn criterion_2() -> Outcome {
    let h = homology(&build_l(&FinRing::zn(2), 2), 2);
    let order: u64 = h.iter().product();
    ensure(!h.contains(&0) && order == 4, format!("factors {h:?}"))?;
    Ok(format!("H2(L2(Z/2)) = {h:?}, order {order}"))
}

fn criterion_3() -> Outcome {
    let mut cells = 0;
    for n in [2, 3, 4] {
        let r = FinRing::zn(n);
        for level in [2, 3] {
            let bar = build_bar(&r, level);
            let rep = check_bar_square(&r, &bar);
            ensure(rep.passed(), format!("Z/{n} level {level}: {:?}", rep.first_failure()))?;
            cells += bar.cells[4].len();
        }
    }
    Ok(format!("square zero on {cells} degree-4 cells"))
}

fn criterion_4() -> Outcome {
    let ring = FinRing::zn(2);
    let module = Bimodule::regular(&ring);
    let ctx = CohomContext::new(&ring, &module).map_err(|e| e.to_string())?;
    let tw = ctx.solver(CocycleMode::Twisted, PivotOrder::First);
    let ml = ctx.solver(CocycleMode::H3_3, PivotOrder::First);
    for g in tw.cocycle_generators() {
        ensure(ml.is_cocycle(&g), "twisted cocycle outside the H3_3 space")?;
    }
    for g in ml.cocycle_generators() {
        ensure(tw.is_cocycle(&g), "H3_3 cocycle outside the twisted space")?;
    }
    let a = cohomology_group(&ring, &module, CocycleMode::Twisted).map_err(|e| e.to_string())?;
    let b = cohomology_group(&ring, &module, CocycleMode::H3_3).map_err(|e| e.to_string())?;
    ensure(a.factors == b.factors, format!("{:?} vs {:?}", a.factors, b.factors))?;
    Ok(format!(
        "cocycle spaces coincide ({} generators), factors {:?}",
        tw.cocycle_generators().len(),
        a.factors
    ))
}

fn generators(ctx: &CohomContext) -> Vec<Cochain5> {
    let s = ctx.solver(CocycleMode::Twisted, PivotOrder::First);
    let gens = s.cocycle_generators();
    let mut out = vec![Cochain5::zero(ctx.n(), ctx.module.m.identity())];
    out.extend(gens.iter().map(|g| ctx.from_vector(g)));
    if let Some(first) = gens.first() {
        let sum: Vec<i64> = gens.iter().fold(vec![0; first.len()], |acc, g| {
            acc.iter().zip(g).map(|(a, b)| a + b).collect()
        });
        out.push(ctx.from_vector(&sum));
    }
    out
}

fn same_class(ctx: &CohomContext, x: &Cochain5, y: &Cochain5) -> bool {
    let s = ctx.solver(CocycleMode::Twisted, PivotOrder::First);
    let d: Vec<i64> = ctx
        .to_vector(x)
        .iter()
        .zip(ctx.to_vector(y))
        .map(|(a, b)| a - b)
        .collect();
    s.class_of(&d).is_some_and(|c| c.iter().all(|&v| v == 0))
}

/// `Λ = ℤ/4`, `R = ℤ/2 × ℤ/2`, `∂(m,p) = 2p`.
fn z4_over_klein(ring: &FinRing, module: &Bimodule, bracket: &[Vec<usize>]) -> Result<RingPresentation, CatRingError> {
    let r = direct_product(&cyclic(2), &cyclic(2));
    let lam = cyclic(4);
    let base = XMod::with_trivial_action(&r, &lam, (0..4).map(|s| 2 * (s % 2)).collect());
    let br = (0..4)
        .map(|y| (0..4).map(|z| 2 * bracket[y % 2][z % 2]).collect())
        .collect();
    RingPresentation::from_section(
        BraidedXMod::new(base, br),
        ring.clone(),
        module.clone(),
        vec![0, 1, 0, 1],
        vec![0, 1],
        vec![0, 2],
    )
}

fn criterion_5() -> Outcome {
    let mut instances = 0;
    let mut perturbed = 0;
    for ring in [FinRing::zn(2), FinRing::zero_mult(2)] {
        let module = Bimodule::regular(&ring);
        let ctx = CohomContext::new(&ring, &module).map_err(|e| e.to_string())?;
        let mut skeletons = Vec::new();
        for br in RingPresentation::bilinear_brackets(&ring, &module) {
            skeletons.push(RingPresentation::split(&ring, &module, br.clone()).map_err(|e| e.to_string())?);
            for t in 0..2 {
                skeletons.push(
                    RingPresentation::thickened(&ring, &module, &br, &cyclic(2), &[0, t]).map_err(|e| e.to_string())?,
                );
            }
            skeletons.push(z4_over_klein(&ring, &module, &br).map_err(|e| e.to_string())?);
        }
        for xi in generators(&ctx) {
            for skel in &skeletons {
                let Ok((p, m)) = reconstruct(&xi, skel) else { continue };
                let mut variants = vec![(p.clone(), m.clone())];
                let r = p.rmod.g();
                for s in r.elements().filter(|&s| s != r.identity()) {
                    variants.push(change_section(&p, &m, &[r.identity(), s]).map_err(|e| e.to_string())?);
                }
                let gauge: Vec<usize> = (0..m.e2.base_count()).map(|c| (c * 7 / 3) % 2).collect();
                variants.push((p.clone(), butterfly_iso(&p, &m, &gauge).map_err(|e| e.to_string())?));
                variants.push((
                    p.clone(),
                    shift_e_sections(&p, &m, &vec![vec![0, 1], vec![1, 1]]).map_err(|e| e.to_string())?,
                ));
                for (k, (p2, m2)) in variants.iter().enumerate() {
                    let rep = validate_monoid(p2, m2).map_err(|e| e.to_string())?;
                    ensure(rep.passed(), format!("monoid data invalid: {:?}", rep.first_failure()))?;
                    let d = decompose(p2, m2).map_err(|e| e.to_string())?;
                    ensure(
                        is_cocycle(&ctx, &d, CocycleMode::Twisted).passed(),
                        "decomposition is not a cocycle",
                    )?;
                    ensure(same_class(&ctx, &d, &xi), "perturbation changed the class")?;
                    if k > 0 {
                        perturbed += 1;
                    }
                }
                instances += 1;
            }
        }
    }
    ensure(instances >= 20, format!("only {instances} instances"))?;
    Ok(format!(
        "{instances} instances, {perturbed} perturbations, class invariant"
    ))
}

fn criterion_6() -> Outcome {
    let ring = FinRing::zn(2);
    let module = Bimodule::regular(&ring);
    let ctx = CohomContext::new(&ring, &module).map_err(|e| e.to_string())?;
    let group = cohomology_group(&ring, &module, CocycleMode::Twisted).map_err(|e| e.to_string())?;
    let mut all = group.representatives.clone();
    all.extend(generators(&ctx));
    for xi in &all {
        let skel = split_skeleton_for(&ring, &module, xi).map_err(|e| e.to_string())?;
        let (p, m) = reconstruct(xi, &skel).map_err(|e| e.to_string())?;
        let back = decompose(&p, &m).map_err(|e| e.to_string())?;
        ensure(same_class(&ctx, &back, xi), "round trip changed the class")?;
    }
    Ok(format!(
        "group {:?}; {} representatives plus {} cocycle generators round-trip",
        group.factors,
        group.representatives.len(),
        all.len() - group.representatives.len()
    ))
}

fn w_trivial() -> BraidedXMod {
    BraidedXMod::trivial(z2_wing())
}

fn w_mult() -> BraidedXMod {
    let mut b = multiplication_bracket(2);
    b.base = z2_wing();
    b
}

fn criterion_7() -> Outcome {
    let mut units = 0;
    for coeff in [w_trivial(), w_mult()] {
        let id = MultiExt::identity(&w_trivial()).map_err(|e| e.to_string())?;
        for e in z2_binary_family(&coeff) {
            let c = compose(&e, &[&id, &id]).map_err(|e| e.to_string())?;
            ensure(
                iso_check(&c, &e, max_search()).map_err(|e| e.to_string())?.is_some(),
                "E(I,I) not iso to E",
            )?;
            units += 1;
        }
        let outer_id = MultiExt::identity(&coeff).map_err(|e| e.to_string())?;
        for f in z2_unary_family(&coeff) {
            let c = compose(&outer_id, &[&f]).map_err(|e| e.to_string())?;
            ensure(
                iso_check(&c, &f, max_search()).map_err(|e| e.to_string())?.is_some(),
                "I(F) not iso to F",
            )?;
            units += 1;
        }
    }
    let outer = z2_binary_family(&w_mult());
    let bin = z2_binary_family(&w_trivial());
    let un = z2_unary_family(&w_trivial());
    let mut assoc = 0;
    let mut interchange = 0;
    for (n, e) in outer.iter().enumerate() {
        let f1 = &bin[(n + 1) % bin.len()];
        let f2 = &un[n % un.len()];
        let g11 = &un[(n + 1) % un.len()];
        let g12 = &un[(n + 2) % un.len()];
        let g2 = &bin[n % bin.len()];
        assoc_witness(e, &[f1, f2], &[vec![g11, g12], vec![g2]], max_search())
            .map_err(|e| format!("associator {n}: {e}"))?;
        assoc += 1;
        let c = compose(e, &[f1, f2]).map_err(|e| e.to_string())?;
        let rep = validate_multiext(&c);
        let ids: Vec<&str> = rep
            .checks
            .iter()
            .filter(|k| k.id.starts_with("interchange"))
            .map(|k| k.id.as_str())
            .collect();
        ensure(
            rep.passed() && !ids.is_empty(),
            format!("composite {n}: {:?}", rep.first_failure()),
        )?;
        interchange += ids.len();
    }
    Ok(format!(
        "{units} unit checks, {assoc} associators, {interchange} interchange scans"
    ))
}

fn criterion_8() -> Outcome {
    let mut total = 0;
    let mut nontrivial = 0;
    for c in [f2_trilinear(), z4_bracket_biext()] {
        ensure(verify_biext(&c).passed(), "fixture does not verify")?;
        let pts: Vec<Point> = c.points().collect();
        for &u in &pts {
            for &u2 in pts.iter().filter(|p| p.k == u.k) {
                for &v in pts.iter().filter(|p| p.h == u.h) {
                    for &v2 in pts.iter().filter(|p| p.h == u2.h && p.k == v.k) {
                        let d = interchange_defect(&c, u, u2, v, v2).map_err(|e| e.to_string())?;
                        ensure(
                            d == interchange_closed_form(&c, u2, v, v2),
                            format!("{u:?} {u2:?} {v:?} {v2:?}"),
                        )?;
                        total += 1;
                        nontrivial += usize::from(d != c.coeff.g().identity());
                    }
                }
            }
        }
    }
    Ok(format!("{total} quadruples, {nontrivial} with a nonzero bracket term"))
}

fn member(coeff: &BraidedXMod, c: u32) -> Option<MultiExt> {
    let w = z2_wing();
    let bit = |i: u32| ((c >> i) & 1) as usize;
    let m = MultiExt::trivialized(
        vec![w.clone(), w],
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
}

fn criterion_9() -> Outcome {
    let z4 =
        MultiExt::from_cocycle(&ButterflyCocycle::with_trivial_wings(z4_bracket_biext())).map_err(|e| e.to_string())?;
    ensure(
        contracted_product(&z4, &z4) == Err(MultiExtError::NotSymmetric),
        "non-symmetric bracket accepted",
    )?;
    let mut products = 0;
    for e in z2_binary_family(&w_mult()).iter().step_by(3) {
        let p = contracted_product(e, e).map_err(|e| e.to_string())?;
        ensure(
            validate_multiext(&p).passed(),
            "product over the symmetric bracket fails validation",
        )?;
        products += 1;
    }
    let t = MultiExt::from_cocycle(&ButterflyCocycle::with_trivial_wings(f2_trilinear())).map_err(|e| e.to_string())?;
    let tt = contracted_product(&t, &t).map_err(|e| e.to_string())?;
    let doubled = to_cocycle(&tt, &tt.canonical_sections()).map_err(|e| e.to_string())?;
    ensure(
        is_coboundary(&doubled.base, max_search())
            .map_err(|e| e.to_string())?
            .is_some(),
        "2·trilinear is not a coboundary",
    )?;
    let coeff = w_trivial();
    let valid: Vec<u32> = (0..128).filter(|&c| member(&coeff, c).is_some()).collect();
    let mut sums = 0;
    for &a in valid.iter().step_by(2) {
        for &b in valid.iter().step_by(3) {
            let p = contracted_product(&member(&coeff, a).unwrap(), &member(&coeff, b).unwrap())
                .map_err(|e| e.to_string())?;
            let sum = member(&coeff, a ^ b).ok_or("sum of cocycle data is not a model")?;
            ensure(
                iso_check(&p, &sum, max_search()).map_err(|e| e.to_string())?.is_some(),
                format!("{a} + {b}"),
            )?;
            sums += 1;
        }
    }
    Ok(format!(
        "refused Z/4 bracket; {products} symmetric products validate; {sums} sums match up to isomorphism"
    ))
}

fn criterion_10() -> Outcome {
    let c = f2_trilinear();
    let rep = verify_biext(&c);
    ensure(rep.passed(), format!("{:?}", rep.first_failure()))?;
    let candidates = search_size(c.coeff.g().order(), c.h.order() * c.k.order());
    ensure(candidates == 16, format!("{candidates} candidates"))?;
    let w = is_coboundary(&c, 16).map_err(|e| e.to_string())?;
    ensure(w.is_none(), "trivialization found")?;
    Ok(format!("verified; none of {candidates} trivializations works"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n}: PASS ({secs:.2}s) {msg}"),
            Err(msg) => {
                println!("criterion {n}: FAIL ({secs:.2}s) {msg}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
