use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use lattice_forge::affine::{
    id_closure, is_ideal_function, is_lower, join_id, meet_lower, vbv_le, AffineFn, FnKind,
};
use lattice_forge::bitrel::nonempty_subsets;
use lattice_forge::gen::{dist_lattices_up_to, random_measured, random_partial_lattice, rng};
use lattice_forge::measured::{bv_le_join, MeasuredPL};
use lattice_forge::Error;

fn sample(r: &mut impl Rng, max_n: usize, max_e: usize) -> MeasuredPL {
    let n = r.gen_range(1..=max_n);
    let pl = random_partial_lattice(r, n);
    let es = dist_lattices_up_to(max_e);
    let e = es.choose(r).unwrap();
    random_measured(r, &pl, e)
}

fn random_lower(r: &mut impl Rng, m: &MeasuredPL, k: usize) -> AffineFn {
    let terms = (0..k).map(|_| (r.gen_range(0..m.len()), r.gen_range(0..m.values().len()))).collect();
    AffineFn::lower(m, terms).unwrap()
}

fn below(m: &MeasuredPL, f: &AffineFn, g: &AffineFn) -> bool {
    (0..m.len()).all(|x| m.values().le(f.eval(x), g.eval(x)))
}

/// Every lower function on the carrier, by enumerating value vectors.
fn all_lower(m: &MeasuredPL) -> Vec<Vec<usize>> {
    let (n, k) = (m.len(), m.values().len());
    let mut out = Vec::new();
    for code in 0..k.pow(n as u32) {
        let v: Vec<usize> = (0..n).map(|i| code / k.pow(i as u32) % k).collect();
        if is_lower(m, &v) {
            out.push(v);
        }
    }
    out
}

macro_rules! closure_or_skip {
    ($e:expr) => {
        match $e {
            Ok(f) => f,
            Err(Error::TermBlowup { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        }
    };
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn affine_functions_are_lower(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sample(&mut r, 6, 5);
        let f = random_lower(&mut r, &m, 3);
        prop_assert!(is_lower(&m, f.values()));
        for u in 0..m.len() {
            prop_assert!(is_lower(&m, AffineFn::principal_lower(&m, u).values()));
        }
        let rebuilt = AffineFn::from_values(&m, FnKind::Lower, f.values().to_vec());
        prop_assert_eq!(&rebuilt, &f);
    }

    #[test]
    fn meet_is_pointwise(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sample(&mut r, 6, 5);
        let (f, g) = (random_lower(&mut r, &m, 2), random_lower(&mut r, &m, 2));
        let h = meet_lower(&m, &f, &g);
        for x in 0..m.len() {
            prop_assert_eq!(h.eval(x), m.values().meet(f.eval(x), g.eval(x)));
        }
    }

    #[test]
    fn ideal_closure_is_a_closure(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sample(&mut r, 5, 4);
        let f = random_lower(&mut r, &m, 2);
        let mut more = f.terms().to_vec();
        more.push((r.gen_range(0..m.len()), r.gen_range(0..m.values().len())));
        let g = AffineFn::lower(&m, more).unwrap();
        let cf = closure_or_skip!(id_closure(&m, &f));
        let cg = closure_or_skip!(id_closure(&m, &g));
        prop_assert!(below(&m, &f, &cf));
        prop_assert!(below(&m, &cf, &cg));
        prop_assert!(is_ideal_function(&m, &cf));
        let ccf = closure_or_skip!(id_closure(&m, &cf));
        prop_assert_eq!(&ccf, &cf);
    }

    #[test]
    fn ideal_functions_absorb_joins(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sample(&mut r, 5, 4);
        let f = closure_or_skip!(id_closure(&m, &random_lower(&mut r, &m, 2)));
        let e = m.values();
        let all: Vec<usize> = (0..m.len()).collect();
        for xs in nonempty_subsets(&all).into_iter().filter(|xs| xs.len() <= 3) {
            let fx = e.meet_all(xs.iter().map(|&x| f.eval(x)));
            for a in 0..m.len() {
                prop_assert!(e.le(e.meet(bv_le_join(&m, a, &xs).unwrap(), fx), f.eval(a)));
            }
        }
    }

    #[test]
    fn principal_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sample(&mut r, 6, 5);
        for u in 0..m.len() {
            for v in 0..m.len() {
                let f = AffineFn::principal_upper(&m, u);
                let g = AffineFn::principal_lower(&m, v);
                prop_assert_eq!(vbv_le(&m, &f, &g), m.bv(u, v));
            }
        }
    }
}

#[test]
fn ideal_join_is_least_among_ideal_bounds() {
    let mut r = rng(7);
    let mut checked = 0;
    while checked < 40 {
        let m = sample(&mut r, 3, 3);
        let (f, g) = (random_lower(&mut r, &m, 2), random_lower(&mut r, &m, 2));
        let Ok(j) = join_id(&m, &f, &g) else { continue };
        assert!(below(&m, &f, &j) && below(&m, &g, &j));
        assert!(is_ideal_function(&m, &j));
        for v in all_lower(&m) {
            let h = AffineFn::from_values(&m, FnKind::Lower, v);
            if below(&m, &f, &h) && below(&m, &g, &h) && is_ideal_function(&m, &h) {
                assert!(below(&m, &j, &h));
            }
        }
        checked += 1;
    }
}
