mod common;

use proptest::prelude::*;
use rand::Rng;

use lattice_forge::bitrel::BitSet;
use lattice_forge::gen::{lattices_up_to, random_partial_lattice, rng};
use lattice_forge::partial::{
    con_lattice_capped, cong_closure, cong_join, cong_meet, ideal_closure, quotient_by_cong, Congruence, PartialLattice,
};

fn random_pairs(r: &mut impl Rng, n: usize, k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|_| (r.gen_range(0..n), r.gen_range(0..n))).collect()
}

fn closed(p: &PartialLattice, c: &Congruence) -> bool {
    Congruence::is_congruence_of(c.relation(), p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn closure_is_a_closure_operator(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let p = random_partial_lattice(&mut r, n);
        let s = random_pairs(&mut r, n, 3);
        let t: Vec<_> = s.iter().copied().chain(random_pairs(&mut r, n, 2)).collect();
        let cs = cong_closure(&p, s.iter().copied());
        let ct = cong_closure(&p, t.iter().copied());
        prop_assert!(s.iter().all(|&(a, b)| cs.le(a, b)));
        prop_assert!(cs.is_subset(&ct));
        prop_assert_eq!(&cong_closure(&p, cs.pairs()), &cs);
        prop_assert!(closed(&p, &cs));
    }

    #[test]
    fn meet_and_join_of_congruences(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let p = random_partial_lattice(&mut r, n);
        let a = cong_closure(&p, random_pairs(&mut r, n, 2));
        let b = cong_closure(&p, random_pairs(&mut r, n, 2));
        let m = cong_meet(&a, &b);
        prop_assert!(closed(&p, &m));
        prop_assert_eq!(m.relation(), &a.relation().intersection(b.relation()));
        let j = cong_join(&p, &a, &b);
        prop_assert_eq!(&j, &cong_closure(&p, a.pairs().chain(b.pairs())));
        prop_assert!(a.is_subset(&j) && b.is_subset(&j));
    }

    #[test]
    fn quotient_classes_follow_the_congruence(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let p = random_partial_lattice(&mut r, n);
        let c = cong_closure(&p, random_pairs(&mut r, n, 2));
        let (q, proj) = quotient_by_cong(&p, &c);
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(q.le(proj[x], proj[y]), c.le(x, y));
            }
        }
        // The projection is a homomorphism.
        prop_assert!(lattice_forge::partial::check_hom(&p, &q, &proj).is_ok());
    }

    #[test]
    fn intersections_of_ideals_are_ideals(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let p = random_partial_lattice(&mut r, n);
        let x = ideal_closure(&p, &[r.gen_range(0..n)]);
        let y = ideal_closure(&p, &[r.gen_range(0..n), r.gen_range(0..n)]);
        prop_assert!(p.is_ideal(&x) && p.is_ideal(&y));
        let mut z = x.clone();
        z.intersect_with(&y);
        prop_assert!(z.is_empty() || p.is_ideal(&z));
    }
}

#[test]
fn con_of_small_lattices() {
    for l in lattices_up_to(5) {
        let p = PartialLattice::from_lattice(&l);
        let con = con_lattice_capped(&p, 1000).unwrap();
        assert_eq!(con.len(), common::lattice_congruence_count(&l), "{:?}", l.poset().names());
        let cl = lattice_forge::order::DistLattice::try_from(con.lattice());
        assert!(cl.is_ok(), "Con L is distributive");
    }
}

#[test]
fn ideal_closure_is_the_least_ideal() {
    let l = common::lattice(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]);
    let p = PartialLattice::from_lattice(&l);
    let (a, b) = (l.idx("a").unwrap(), l.idx("b").unwrap());
    let i = ideal_closure(&p, &[a, b]);
    assert_eq!(i, BitSet::full(4));
    let i = ideal_closure(&p, &[a]);
    assert_eq!(i.iter().collect::<Vec<_>>(), {
        let mut v = vec![l.bot(), a];
        v.sort();
        v
    });
}

#[test]
fn the_order_is_the_least_congruence() {
    for l in lattices_up_to(5) {
        let p = PartialLattice::from_lattice(&l);
        let z = lattice_forge::partial::zero_congruence(&p);
        assert_eq!(z.relation(), l.poset().relation());
        assert!(closed(&p, &z));
        assert_eq!(cong_closure(&p, []), z);
    }
}
