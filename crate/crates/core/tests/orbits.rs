use std::collections::HashSet;

use heis_mertens_core::counting::{psi_count, verify_triple};
use heis_mertens_core::heisenberg::{canonicalize, heis_inv, heis_mul, in_fundamental_domain, is_admissible, shear_int};
use heis_mertens_core::{q, Algebra, HeisPoint, Order, OrderElement, Quaternion, Triple, Q};
use proptest::prelude::*;

fn orders() -> [Order; 2] {
    [Order::hurwitz(), Order::da3()]
}

fn representatives(o: &Order) -> Vec<Triple> {
    psi_count(o, &q(3, 1), 1).triples
}

/// `(w0, w)` in `N(O)`: `w0 = n(w)·e + Σ m_k b_k` with `tr e = 1` and `b_k` pure.
fn lattice_shear(o: &Order, w: [i64; 4], m: [i64; 3]) -> (OrderElement, OrderElement) {
    let w = OrderElement::new(w);
    let b = o.im_basis();
    let mut w0 = o.trace_one_element().scale(o.norm(&w));
    for k in 0..3 {
        w0 = w0 + b[k].scale(m[k]);
    }
    (w0, w)
}

#[test]
fn representatives_are_distinct_and_canonical() {
    for o in orders() {
        let r = psi_count(&o, &q(4, 1), 1);
        assert_eq!(r.count as usize, r.triples.len());
        let set: HashSet<_> = r.triples.iter().collect();
        assert_eq!(set.len(), r.triples.len());
        for t in &r.triples {
            assert!(verify_triple(&o, t), "{t:?}");
            assert!(in_fundamental_domain(&o, t), "{t:?}");
        }
    }
}

fn rat_quat() -> impl Strategy<Value = Quaternion<Q>> {
    prop::array::uniform4((-9i64..=9, 1i64..=4))
        .prop_map(|c| Quaternion::new(q(c[0].0, c[0].1), q(c[1].0, c[1].1), q(c[2].0, c[2].1), q(c[3].0, c[3].1)))
}

/// `(ζ, v)` gives the point with `w = ζ` and `w0 = n(ζ)/2 + Im v`.
fn heis_point(alg: &Algebra, w: &Quaternion<Q>, v: &Quaternion<Q>) -> HeisPoint {
    let w0 = Quaternion::new(q(1, 2) * alg.norm(w), v.x[1].clone(), v.x[2].clone(), v.x[3].clone());
    HeisPoint::new(alg, w0, w.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shears_do_not_move_the_representative(
        which in 0usize..2, pick in any::<prop::sample::Index>(),
        w in prop::array::uniform4(-4i64..=4), m in prop::array::uniform3(-4i64..=4))
    {
        let o = &orders()[which];
        let reps = representatives(o);
        let t = reps[pick.index(reps.len())];
        let (w0, w) = lattice_shear(o, w, m);
        prop_assert_eq!(o.trace(&w0), o.norm(&w));
        let moved = shear_int(o, &w0, &w, &t);
        prop_assert!(is_admissible(o, &moved));
        prop_assert!(o.is_primitive(&[moved.a, moved.alpha, moved.c]));
        prop_assert_eq!(verify_triple(o, &moved), moved == t);
        let (back, _) = canonicalize(o, &moved).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn unit_scaling_keeps_the_emitted_set(which in 0usize..2, u in 0usize..24) {
        let o = &orders()[which];
        let reps = representatives(o);
        let set: HashSet<_> = reps.iter().copied().collect();
        let l = o.units()[u % o.units().len()];
        for t in &reps {
            let s = Triple::new(o.mul(&t.a, &l), o.mul(&t.alpha, &l), o.mul(&t.c, &l));
            let (c, _) = canonicalize(o, &s).unwrap();
            prop_assert!(set.contains(&c));
        }
    }

    #[test]
    fn heisenberg_group_laws(which in 0usize..2, p in prop::collection::vec(rat_quat(), 6)) {
        let alg = orders()[which].algebra;
        let x = heis_point(&alg, &p[0], &p[1]);
        let y = heis_point(&alg, &p[2], &p[3]);
        let z = heis_point(&alg, &p[4], &p[5]);
        let xy_z = heis_mul(&alg, &heis_mul(&alg, &x, &y).unwrap(), &z).unwrap();
        let x_yz = heis_mul(&alg, &x, &heis_mul(&alg, &y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        let inv = heis_inv(&alg, &x).unwrap();
        prop_assert_eq!(heis_mul(&alg, &x, &inv).unwrap(), HeisPoint::identity());
        prop_assert_eq!(heis_mul(&alg, &inv, &x).unwrap(), HeisPoint::identity());
    }
}
