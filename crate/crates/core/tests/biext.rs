use bextlab::biext::*;
use bextlab::max_search;

#[test]
fn trilinear_passes_and_is_nontrivial() {
    let c = f2_trilinear();
    let r = verify_biext(&c);
    assert!(r.passed(), "{r}");
    assert_eq!(is_coboundary(&c, max_search()).unwrap(), None);
}

#[test]
fn z4_bracket_fixture_verifies() {
    let c = z4_bracket_biext();
    let r = verify_biext(&c);
    assert!(r.passed(), "{r}");
}

#[test]
fn z4_interchange_matches_closed_form() {
    let c = z4_bracket_biext();
    let pts: Vec<Point> = c.points().collect();
    let mut nontrivial = 0;
    for &u in &pts {
        for &u2 in pts.iter().filter(|p| p.k == u.k) {
            for &v in pts.iter().filter(|p| p.h == u.h) {
                for &v2 in pts.iter().filter(|p| p.h == u2.h && p.k == v.k) {
                    let d = interchange_defect(&c, u, u2, v, v2).unwrap();
                    assert_eq!(d, interchange_closed_form(&c, u2, v, v2));
                    nontrivial += usize::from(d != 0);
                }
            }
        }
    }
    assert!(nontrivial > 0);
}

use proptest::prelude::*;

fn laws_hold(c: &BiextCocycle) -> bool {
    let pts: Vec<Point> = c.points().collect();
    let pi = c.coeff.pi();
    for &p in &pts {
        for &q in pts.iter().filter(|q| q.k == p.k) {
            let pq = c.mul1(p, q).unwrap();
            if c.j(pq) != pi.mul(c.j(p), c.j(q)) {
                return false;
            }
            for &r in pts.iter().filter(|r| r.k == p.k) {
                if c.mul1(pq, r).unwrap() != c.mul1(p, c.mul1(q, r).unwrap()).unwrap() {
                    return false;
                }
            }
        }
        for &q in pts.iter().filter(|q| q.h == p.h) {
            let pq = c.mul2(p, q).unwrap();
            if c.j(pq) != pi.mul(c.j(p), c.j(q)) {
                return false;
            }
            for &r in pts.iter().filter(|r| r.h == p.h) {
                if c.mul2(pq, r).unwrap() != c.mul2(p, c.mul2(q, r).unwrap()).unwrap() {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn retrivialized_trilinear_stays_verified_and_nontrivial(u in prop::collection::vec(0usize..2, 4)) {
        let u: Vec<Vec<usize>> = u.chunks(2).map(|r| r.to_vec()).collect();
        let c = retrivialize(&f2_trilinear(), &u);
        prop_assert!(verify_biext(&c).passed());
        prop_assert!(laws_hold(&c));
        prop_assert_eq!(is_coboundary(&c, max_search()).unwrap(), None);
        let b = coboundary_of(&c.h, &c.k, &c.coeff, &u);
        prop_assert!(verify_biext(&b).passed());
        let w = is_coboundary(&b, max_search()).unwrap();
        prop_assert!(w.is_some());
        prop_assert_eq!(coboundary_of(&c.h, &c.k, &c.coeff, &w.unwrap()), b);
    }

    #[test]
    fn retrivialized_bracket_fixture_keeps_the_closed_form(
        u in prop::collection::vec(0usize..4, 16),
        picks in prop::collection::vec((0usize..64, 0usize..4, 0usize..4, 0usize..4), 40),
    ) {
        let u: Vec<Vec<usize>> = u.chunks(4).map(|r| r.to_vec()).collect();
        let c = retrivialize(&z4_bracket_biext(), &u);
        prop_assert!(verify_biext(&c).passed());
        for (code, h2, k2, a2) in picks {
            let uu = Point::new(code / 16, (code / 4) % 4, code % 4);
            let u2 = Point::new(h2, uu.k, a2);
            let v = Point::new(uu.h, k2, (a2 + 1) % 4);
            let v2 = Point::new(h2, k2, (a2 + code) % 4);
            let d = interchange_defect(&c, uu, u2, v, v2).unwrap();
            prop_assert_eq!(d, interchange_closed_form(&c, u2, v, v2));
        }
    }
}

#[test]
fn partial_laws_are_associative_on_fixtures() {
    assert!(laws_hold(&f2_trilinear()));
    assert!(laws_hold(&z4_bracket_biext()));
}

#[test]
fn exhaustive_search_respects_the_bound() {
    let c = f2_trilinear();
    assert_eq!(search_size(2, 4), 16);
    assert!(is_coboundary(&c, 15).is_err());
    assert_eq!(is_coboundary(&c, 16).unwrap(), None);
}

#[test]
fn corrupted_tables_name_the_failing_equation() {
    let mut c = f2_trilinear();
    c.g2[0][1][1] ^= 1;
    let r = verify_biext(&c);
    let failing: Vec<&str> = r.checks.iter().filter(|k| !k.passed).map(|k| k.id.as_str()).collect();
    assert_eq!(failing, vec!["eq20"]);
    let mut c = f2_trilinear();
    c.g1[0][0][1] ^= 1;
    assert_eq!(verify_biext(&c).first_failure().unwrap().id, "eq16");
}
