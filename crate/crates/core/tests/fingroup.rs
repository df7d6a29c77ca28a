use bextlab::fingroup::*;
use proptest::prelude::*;

fn s3() -> FinGroup {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let mul = perms
        .iter()
        .map(|p| perms.iter().map(|q| idx([q[p[0]], q[p[1]], q[p[2]]])).collect())
        .collect();
    make_group(mul, None).unwrap()
}

fn small_group() -> impl Strategy<Value = FinGroup> {
    prop_oneof![
        (1usize..7).prop_map(cyclic),
        (1usize..4, 1usize..4).prop_map(|(a, b)| direct_product(&cyclic(a), &cyclic(b))),
        Just(s3()),
    ]
}

proptest! {
    #[test]
    fn tables_are_latin_squares(g in small_group()) {
        prop_assert!(g.is_latin());
        for a in g.elements() {
            prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
            prop_assert_eq!(g.mul(g.identity(), a), a);
        }
    }

    #[test]
    fn direct_product_is_associative_on_indices(a in small_group(), b in small_group(), c in small_group()) {
        prop_assume!(a.order() * b.order() * c.order() <= 64);
        let left = direct_product(&direct_product(&a, &b), &c);
        let right = direct_product(&a, &direct_product(&b, &c));
        prop_assert_eq!(left.table(), right.table());
    }

    #[test]
    fn abelian_coordinates_round_trip(a in 1usize..5, b in 1usize..5) {
        let g = direct_product(&cyclic(a), &cyclic(b));
        let c = AbelianCoords::new(&g).unwrap();
        prop_assert_eq!(c.factors.iter().product::<u64>(), (a * b) as u64);
        for w in c.factors.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        for x in g.elements() {
            let v: Vec<i64> = c.coords(x).iter().map(|&t| t as i64).collect();
            prop_assert_eq!(c.element(&v), x);
        }
        for x in g.elements() {
            for y in g.elements() {
                let sum: Vec<i64> = c.coords(x).iter().zip(c.coords(y)).map(|(&s, &t)| (s + t) as i64).collect();
                prop_assert_eq!(c.element(&sum), g.mul(x, y));
            }
        }
    }
}

#[test]
fn malformed_tables_are_rejected() {
    assert!(make_group(vec![vec![0, 1], vec![1, 1]], None).is_err());
    assert!(matches!(
        make_group(vec![vec![0, 2], vec![1, 0]], None),
        Err(GroupError::OutOfRange(_))
    ));
    assert!(make_group(vec![vec![0, 1]], None).is_err());
    let json = r#"{"order": 2, "mul": [[0, 1], [1, 1]]}"#;
    assert!(serde_json::from_str::<FinGroup>(json).is_err());
    let json = r#"{"order": 3, "mul": [[0, 1], [1, 0]]}"#;
    assert!(serde_json::from_str::<FinGroup>(json).is_err());
}

#[test]
fn json_round_trip_keeps_labels() {
    let g = cyclic(3).with_labels(vec!["e".into(), "r".into(), "r2".into()]);
    let s = serde_json::to_string(&g).unwrap();
    assert!(s.contains("\"order\":3"));
    let back: FinGroup = serde_json::from_str(&s).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.label(2), "r2");
}

#[test]
fn isomorphism_search() {
    let z6 = cyclic(6);
    let z23 = direct_product(&cyclic(2), &cyclic(3));
    let phi = find_isomorphism(&z6, &z23).unwrap();
    for a in z6.elements() {
        for b in z6.elements() {
            assert_eq!(phi[z6.mul(a, b)], z23.mul(phi[a], phi[b]));
        }
    }
    assert!(find_isomorphism(&cyclic(4), &direct_product(&cyclic(2), &cyclic(2))).is_none());
    assert!(find_isomorphism(&s3(), &z6).is_none());
    assert!(!s3().is_abelian());
    assert_eq!(AbelianCoords::new(&s3()).unwrap_err(), GroupError::NotAbelian);
}

#[test]
fn element_orders_and_centre() {
    let g = s3();
    let orders: Vec<usize> = g.elements().map(|a| g.element_order(a)).collect();
    assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
    assert_eq!(g.elements().filter(|&z| g.is_central(z)).count(), 1);
    let d = direct_product(&g, &cyclic(2));
    assert_eq!(d.elements().filter(|&z| d.is_central(z)).count(), 2);
}
