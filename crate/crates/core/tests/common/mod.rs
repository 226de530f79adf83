//! Brute-force oracles shared by the integration tests and the acceptance
//! binary. Nothing here calls the library routine it is used to check.
#![allow(dead_code)]

use lattice_forge::order::{build_poset, DistLattice, Lattice};
use lattice_forge::partial::PartialLattice;
use lattice_forge::measured::MeasuredPL;
use lattice_forge::terms::Term;

/// All set partitions of `0..n`, as block labels.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn go(i: usize, blocks: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=blocks {
            cur[i] = b;
            go(i + 1, blocks.max(b + 1), cur, out);
        }
    }
    go(0, 0, &mut cur, &mut out);
    out
}

/// Number of lattice congruences, counted over all partitions.
pub fn lattice_congruence_count(l: &Lattice) -> usize {
    let n = l.len();
    partitions(n)
        .into_iter()
        .filter(|p| {
            (0..n).all(|x| {
                (0..n).all(|y| {
                    p[x] != p[y] || (0..n).all(|z| p[l.join(x, z)] == p[l.join(y, z)] && p[l.meet(x, z)] == p[l.meet(y, z)])
                })
            })
        })
        .count()
}

/// Triples of `K` with equal pairwise meets.
pub fn m3_size(l: &Lattice) -> usize {
    let n = l.len();
    let mut c = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let m = l.meet(x, y);
                if m == l.meet(x, z) && m == l.meet(y, z) {
                    c += 1;
                }
            }
        }
    }
    c
}

/// Evaluate a term with explicit tables.
pub fn eval(t: &Term, l: &Lattice) -> usize {
    match t {
        Term::Leaf(a) => *a,
        Term::Join(x, y) => l.join(eval(x, l), eval(y, l)),
        Term::Meet(x, y) => l.meet(eval(x, l), eval(y, l)),
    }
}

/// All terms over `leaves` of height at most `h`, without deduplication.
pub fn terms(leaves: usize, h: usize) -> Vec<Term> {
    let mut levels: Vec<Vec<Term>> = vec![(0..leaves).map(Term::Leaf).collect()];
    for _ in 0..h {
        let all: Vec<Term> = levels.iter().flatten().cloned().collect();
        let newest = levels.last().unwrap();
        let mut next = Vec::new();
        for x in newest {
            for y in &all {
                next.push(Term::join(x.clone(), y.clone()));
                next.push(Term::meet(x.clone(), y.clone()));
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

pub fn two_chain() -> DistLattice {
    DistLattice::chain(2)
}

pub fn lattice(names: &[&str], covers: &[(&str, &str)]) -> Lattice {
    lattice_forge::order::as_lattice(&build_poset(names, covers).unwrap()).unwrap()
}

/// The measured structure whose table is the order indicator, with
/// `E = 2`.
pub fn indicator(pl: PartialLattice) -> MeasuredPL {
    let n = pl.len();
    let e = two_chain();
    let bv = (0..n * n).map(|i| if pl.le(i / n, i % n) { e.top() } else { e.bot() }).collect();
    MeasuredPL::new(pl, e, bv).unwrap()
}
