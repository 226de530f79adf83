use proptest::prelude::*;
use rand::seq::SliceRandom;

use lattice_forge::amalgam::{
    check_pushout_quotient, mediating_map, pushout_measured, pushout_pl, theorem_b, verify_amalgam, VFormation,
};
use lattice_forge::gen::{dist_lattices_up_to, homomorphisms, lattices_up_to, random_formation, rng, Formation};
use lattice_forge::measured::{is_balanced, is_finitely_covering, is_isometry};
use lattice_forge::partial::{check_hom, PartialLattice};
use lattice_forge::terms::Caps;
use lattice_forge::Error;

fn formation(seed: u64, max_side: usize) -> Formation {
    let mut r = rng(seed);
    let es: Vec<_> = dist_lattices_up_to(4).into_iter().filter(|e| e.len() >= 2).collect();
    let e = es.choose(&mut r).unwrap().clone();
    random_formation(&mut r, &e, 3, max_side)
}

fn standard(fm: &Formation) -> VFormation<lattice_forge::measured::MeasuredPL> {
    let v = VFormation::new(fm.k.clone(), fm.p.clone(), fm.q.clone(), fm.f.clone(), fm.g.clone()).unwrap();
    v.standardize().unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn standardizing_keeps_maps_and_shares_only_k(seed in any::<u64>()) {
        let fm = formation(seed, 4);
        let v = standard(&fm);
        prop_assert!(v.is_standard());
        prop_assert_eq!(&v.f, &fm.f);
        prop_assert_eq!(&v.g, &fm.g);
        let push = pushout_measured(&v).unwrap();
        prop_assert_eq!(push.r.len(), fm.p.len() + fm.q.len() - fm.k.len());
    }

    #[test]
    fn pushout_tables(seed in any::<u64>()) {
        let fm = formation(seed, 4);
        let v = standard(&fm);
        let push = pushout_measured(&v).unwrap();
        let r = &push.r;
        let e = r.values();
        prop_assert!(is_isometry(&v.p, r, &push.inc_p).unwrap());
        prop_assert!(is_isometry(&v.q, r, &push.inc_q).unwrap());
        let kimg: Vec<usize> = v.f.iter().map(|&x| push.inc_p[x]).collect();
        let qimg: Vec<usize> = push.inc_q.clone();
        for x in 0..v.p.len() {
            let a = push.inc_p[x];
            for y in 0..v.q.len() {
                let b = push.inc_q[y];
                let through = e.join_all(kimg.iter().map(|&z| e.meet(r.bv_eq(a, z), r.bv_eq(z, b))));
                prop_assert_eq!(r.bv_eq(a, b), through);
            }
            prop_assert!(e.le(r.bv_in(a, &qimg).unwrap(), r.bv_in(a, &kimg).unwrap()));
        }
        for g in e.prime_filters() {
            prop_assert!(check_pushout_quotient(&v, &push, &g));
        }
    }

    #[test]
    fn covering_properties_survive_the_pushout(seed in any::<u64>()) {
        let fm = formation(seed, 4);
        let v = standard(&fm);
        let push = pushout_measured(&v).unwrap();
        if [&v.k, &v.p, &v.q].iter().all(|m| is_finitely_covering(m)) {
            prop_assert!(is_finitely_covering(&push.r));
        }
        if [&v.k, &v.p, &v.q].iter().all(|m| is_balanced(m)) {
            prop_assert!(is_balanced(&push.r));
        }
    }

    #[test]
    fn amalgams_verify(seed in any::<u64>()) {
        let fm = formation(seed, 3);
        match theorem_b(&fm.k, &fm.p, &fm.q, &fm.f, &fm.g, Caps::default()) {
            Ok(a) => prop_assert!(verify_amalgam(&fm.k, &fm.p, &fm.q, &fm.f, &fm.g, &a).is_ok()),
            Err(Error::CapExceeded(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn pushout_is_universal_on_small_formations() {
    let targets: Vec<PartialLattice> = lattices_up_to(4).iter().map(PartialLattice::from_lattice).collect();
    let mut cones = 0;
    for seed in 0..12 {
        let fm = formation(seed, 3);
        let v = VFormation::new(fm.k.pl().clone(), fm.p.pl().clone(), fm.q.pl().clone(), fm.f.clone(), fm.g.clone())
            .unwrap()
            .standardize()
            .unwrap()
            .0;
        let push = pushout_pl(&v).unwrap();
        for s in &targets {
            let hqs = homomorphisms(&v.q, s);
            for hp in homomorphisms(&v.p, s) {
                for hq in &hqs {
                    if (0..v.k.len()).any(|z| hp[v.f[z]] != hq[v.g[z]]) {
                        continue;
                    }
                    let h = mediating_map(&push, s, &hp, hq).expect("cone factors");
                    assert!(check_hom(&push.r, s, &h).is_ok());
                    assert!(push.inc_p.iter().enumerate().all(|(x, &r)| h[r] == hp[x]));
                    assert!(push.inc_q.iter().enumerate().all(|(y, &r)| h[r] == hq[y]));
                    cones += 1;
                }
            }
        }
    }
    assert!(cones > 0);
}
