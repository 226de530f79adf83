mod common;

use lattice_forge::gadgets::{
    chain3_gadget, is_congruence_preserving, is_internal, m3, m3_gadget, persp_con_figure, persp_gadget,
    persp_partial_lattice, relcomp_gadget, saturate, Application,
};
use lattice_forge::gen::{dist_lattices_up_to, lattices_up_to};
use lattice_forge::measured::{is_isometry, MeasuredPL};
use lattice_forge::order::poset_isomorphism;
use lattice_forge::partial::{con_lattice, PartialLattice};
use lattice_forge::terms::Caps;

#[test]
fn relcomp_gadgets() {
    for d in dist_lattices_up_to(4) {
        for ab in 0..d.len() {
            for bc in 0..d.len() {
                let g = relcomp_gadget(&d, ab, bc).unwrap();
                let (a, b, c) = (g.embedding[0], g.embedding[1], g.embedding[2]);
                let t = g.designated("t").unwrap();
                let pl = g.ambient.pl();
                assert_eq!(pl.meet_of(&[b, t]), Some(a));
                assert_eq!(pl.join_of(&[b, t]), Some(c));
                assert!(is_isometry(&g.base, &g.ambient, &g.embedding).unwrap());
            }
        }
    }
}

#[test]
fn chain3_and_persp_gadgets_embed() {
    for d in dist_lattices_up_to(4) {
        let n = d.len();
        for alpha in 0..n {
            for beta in 0..n {
                if d.le(alpha, beta) {
                    let g = chain3_gadget(&d, alpha, beta).unwrap();
                    assert!(is_isometry(&g.base, &g.ambient, &g.embedding).unwrap());
                }
            }
        }
        let g = persp_gadget(&d, d.bot(), d.bot(), d.top(), d.top()).unwrap();
        assert!(is_isometry(&g.base, &g.ambient, &g.embedding).unwrap());
    }
}

#[test]
fn persp_congruences() {
    let con = con_lattice(&persp_partial_lattice()).unwrap();
    assert_eq!(con.len(), 10);
    assert!(poset_isomorphism(con.poset(), &persp_con_figure()).is_some());
}

#[test]
fn m3_construction() {
    for k in lattices_up_to(5) {
        let m = m3(&k).unwrap();
        assert_eq!(m.lattice.len(), common::m3_size(&k));
        let (kp, mp) = (PartialLattice::from_lattice(&k), PartialLattice::from_lattice(&m.lattice));
        assert!(is_internal(&mp, &m.diagonal));
        if k.len() <= 4 {
            assert!(is_congruence_preserving(&kp, &mp, &m.diagonal).unwrap(), "{:?}", k.poset().names());
        }
    }
}

#[test]
fn m3_gadget_is_an_isometric_extension() {
    for k in lattices_up_to(4) {
        let base = common::indicator(PartialLattice::from_lattice(&k));
        let g = m3_gadget(&base).unwrap();
        assert!(is_isometry(&g.base, &g.ambient, &g.embedding).unwrap());
        assert!(g.ambient.is_proper());
    }
}

fn chain3() -> MeasuredPL {
    let l = common::lattice(&["o", "m", "i"], &[("o", "m"), ("m", "i")]);
    common::indicator(PartialLattice::from_lattice(&l))
}

/// The name of the top of `D`, the dual of the value lattice.
fn top_d(l: &MeasuredPL) -> String {
    l.values().name(l.values().bot()).to_string()
}

#[test]
fn chain3_with_zero_value_collapses() {
    let l = chain3();
    let bot_d = l.values().name(l.values().top()).to_string();
    let apps = [Application::Chain3 { o: "o".into(), i: "m".into(), alpha: bot_d }];
    assert!(saturate(&l, &apps, Caps::default()).is_err());
}

#[test]
fn saturation_keeps_the_old_lattice() {
    let l = chain3();
    let apps = vec![
        Application::RelComp { a: "o".into(), b: "m".into(), c: "i".into() },
        Application::Persp { o: "o".into(), a: "m".into(), b: "t1".into(), i: "i".into() },
    ];
    let (out, steps) = saturate(&l, &apps, Caps::default()).unwrap();
    assert_eq!(steps.len(), 2);
    assert!(out.is_proper());
    assert!(out.pl().is_lattice());
    let map: Vec<usize> = (0..l.len()).map(|x| out.idx(l.name(x)).unwrap()).collect();
    assert!(is_isometry(&l, &out, &map).unwrap());
    let lat = out.pl().to_lattice().unwrap();
    let (o, m, i, t) = (out.idx("o").unwrap(), out.idx("m").unwrap(), out.idx("i").unwrap(), out.idx("t1").unwrap());
    assert_eq!(lat.meet(m, t), o);
    assert_eq!(lat.join(m, t), i);
    let x = out.idx("x2").unwrap();
    for a in [m, t] {
        assert_eq!(lat.meet(x, a), o);
        assert_eq!(lat.join(x, a), i);
    }
}

#[test]
fn chain3_step_inserts_a_point() {
    let l = chain3();
    let apps = [Application::Chain3 { o: "o".into(), i: "m".into(), alpha: top_d(&l) }];
    let (out, _) = saturate(&l, &apps, Caps::default()).unwrap();
    assert!(out.is_proper());
    let lat = out.pl().to_lattice().unwrap();
    let (o, m, x) = (out.idx("o").unwrap(), out.idx("m").unwrap(), out.idx("x1").unwrap());
    assert!(lat.poset().lt(o, x) && lat.poset().lt(x, m));
}
