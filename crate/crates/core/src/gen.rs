//! Small-lattice catalogs and seeded random structures for tests and the
//! self-check command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitrel::BitRel;
use crate::measured::MeasuredPL;
use crate::order::{as_lattice, poset_isomorphism, DistLattice, FinitePoset, Lattice};
use crate::partial::{check_hom, cong_closure, Congruence, PartialLattice, validate_pl};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Posets on `0..n` whose order extends the natural one, up to isomorphism
/// (every finite poset has such a labelling).
pub fn posets(n: usize) -> Vec<FinitePoset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut out: Vec<FinitePoset> = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut rel = BitRel::identity(n);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rel.set(i, j);
            }
        }
        if !rel.is_transitive() {
            continue;
        }
        let p = FinitePoset::from_relation(names.clone(), rel).expect("triangular relation");
        if !out.iter().any(|q| poset_isomorphism(q, &p).is_some()) {
            out.push(p);
        }
    }
    out
}

/// Every lattice with at most `max` elements, up to isomorphism, smallest
/// first. `max = 5` gives 10 lattices, `max = 6` gives 25.
pub fn lattices_up_to(max: usize) -> Vec<Lattice> {
    (1..=max).flat_map(|n| posets(n).into_iter().filter_map(|p| as_lattice(&p).ok())).collect()
}

pub fn lattice_catalog() -> Vec<Lattice> {
    lattices_up_to(5)
}

pub fn dist_lattices_up_to(max: usize) -> Vec<DistLattice> {
    lattices_up_to(max).into_iter().filter_map(|l| DistLattice::try_from(l).ok()).collect()
}

/// A random poset on `n` elements; each pair `i < j` is related with
/// probability `density` before closing transitively.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> FinitePoset {
    let mut rel = BitRel::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.set(i, j);
            }
        }
    }
    rel.transitive_close();
    let names = (0..n).map(|i| format!("x{i}")).collect();
    FinitePoset::from_relation(names, rel).expect("triangular relation")
}

/// A random poset with a random selection of the suprema and infima that
/// exist, over subsets of size one to three.
pub fn random_partial_lattice(rng: &mut impl Rng, n: usize) -> PartialLattice {
    let poset = random_poset(rng, n, 0.4);
    let mut keys: Vec<Vec<usize>> = Vec::new();
    for size in 1..=3.min(n) {
        keys.extend(crate::bitrel::nonempty_subsets(&(0..n).collect::<Vec<_>>()).into_iter().filter(|k| k.len() == size));
    }
    let mut joins = Vec::new();
    let mut meets = Vec::new();
    for k in &keys {
        if let Some(a) = poset.sup(k) {
            if rng.gen_bool(0.5) {
                joins.push((k.clone(), a));
            }
        }
        if let Some(a) = poset.inf(k) {
            if rng.gen_bool(0.5) {
                meets.push((k.clone(), a));
            }
        }
    }
    validate_pl(poset, joins, meets).expect("suprema and infima of the poset")
}

/// Join-irreducibles of `e`, larger elements first.
fn irreducibles_top_down(e: &DistLattice) -> Vec<usize> {
    let mut ps = e.join_irreducibles();
    ps.sort_by_key(|&p| std::cmp::Reverse(e.poset().down(p).len()));
    ps
}

fn random_pairs(rng: &mut impl Rng, n: usize, max: usize) -> Vec<(usize, usize)> {
    let k = rng.gen_range(0..=max);
    (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}

/// An antitone family of congruences indexed by the join-irreducibles of
/// `e`, each generated by a few random pairs.
pub fn random_family(rng: &mut impl Rng, pl: &PartialLattice, e: &DistLattice) -> Vec<(usize, Congruence)> {
    let mut fam: Vec<(usize, Congruence)> = Vec::new();
    for p in irreducibles_top_down(e) {
        let mut seeds = random_pairs(rng, pl.len(), 2);
        for (q, t) in &fam {
            if e.le(p, *q) {
                seeds.extend(t.pairs());
            }
        }
        fam.push((p, cong_closure(pl, seeds)));
    }
    fam
}

pub fn random_measured(rng: &mut impl Rng, pl: &PartialLattice, e: &DistLattice) -> MeasuredPL {
    let fam = random_family(rng, pl, e);
    MeasuredPL::from_congruences(pl.clone(), e.clone(), &fam).expect("antitone congruence families are valid")
}

/// All homomorphisms `src -> tgt`, by brute force.
pub fn homomorphisms(src: &PartialLattice, tgt: &PartialLattice) -> Vec<Vec<usize>> {
    let (n, m) = (src.len(), tgt.len());
    let mut out = Vec::new();
    let mut map = vec![0; n];
    loop {
        let monotone = (0..n).all(|x| (0..n).all(|y| !src.le(x, y) || tgt.le(map[x], map[y])));
        if monotone && check_hom(src, tgt, &map).is_ok() {
            out.push(map.clone());
        }
        let mut k = 0;
        while k < n {
            map[k] += 1;
            if map[k] < m {
                break;
            }
            map[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
    }
}

/// Lattice embeddings `k -> p`.
pub fn sublattice_embeddings(k: &Lattice, p: &Lattice) -> Vec<Vec<usize>> {
    let (kp, pp) = (PartialLattice::from_lattice(k), PartialLattice::from_lattice(p));
    homomorphisms(&kp, &pp)
        .into_iter()
        .filter(|f| (0..f.len()).all(|x| (0..f.len()).all(|y| k.le(x, y) == p.le(f[x], f[y]))))
        .collect()
}

/// A measured V-formation `K -> P`, `K -> Q` of lattices.
#[derive(Clone, Debug)]
pub struct Formation {
    pub k: MeasuredPL,
    pub p: MeasuredPL,
    pub q: MeasuredPL,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

fn restrict(t: &Congruence, k: &PartialLattice, f: &[usize]) -> Congruence {
    let pairs: Vec<(usize, usize)> = (0..k.len())
        .flat_map(|a| (0..k.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| t.le(f[a], f[b]))
        .collect();
    cong_closure(k, pairs)
}

fn pick_embedding(rng: &mut impl Rng, k: &Lattice, sides: &[Lattice]) -> Option<(Lattice, Vec<usize>)> {
    let p = sides.choose(rng)?.clone();
    let embs = sublattice_embeddings(k, &p);
    let f = embs.choose(rng)?.clone();
    Some((p, f))
}

/// A random formation with `|K| ≤ max_k` and sides of at most `max_side`
/// elements, all measured in `e`. `P` gets a random family; `K` the
/// restriction; `Q` a family extending `K`'s, retried until it restricts
/// back exactly.
pub fn random_formation(rng: &mut impl Rng, e: &DistLattice, max_k: usize, max_side: usize) -> Formation {
    let cat = lattices_up_to(max_side);
    let ks: Vec<Lattice> = cat.iter().filter(|l| l.len() <= max_k).cloned().collect();
    loop {
        let k = ks.choose(rng).expect("nonempty catalog").clone();
        let Some((p, f)) = pick_embedding(rng, &k, &cat) else { continue };
        let Some((q, g)) = pick_embedding(rng, &k, &cat) else { continue };
        let (kpl, ppl, qpl) =
            (PartialLattice::from_lattice(&k), PartialLattice::from_lattice(&p), PartialLattice::from_lattice(&q));
        let fam_p = random_family(rng, &ppl, e);
        let fam_k: Vec<(usize, Congruence)> = fam_p.iter().map(|(i, t)| (*i, restrict(t, &kpl, &f))).collect();
        let mut fam_q: Vec<(usize, Congruence)> = Vec::new();
        let mut ok = true;
        for (pi, tk) in &fam_k {
            let mut base: Vec<(usize, usize)> = tk.pairs().map(|(a, b)| (g[a], g[b])).collect();
            for (qi, t) in &fam_q {
                if e.le(*pi, *qi) {
                    base.extend(t.pairs());
                }
            }
            let mut seeded = base.clone();
            seeded.extend(random_pairs(rng, qpl.len(), 2));
            let found = [seeded, base]
                .into_iter()
                .map(|s| cong_closure(&qpl, s))
                .find(|t| restrict(t, &kpl, &g) == *tk);
            match found {
                Some(t) => fam_q.push((*pi, t)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let build = |pl: PartialLattice, fam: &[(usize, Congruence)]| {
            MeasuredPL::from_congruences(pl, e.clone(), fam).expect("antitone family")
        };
        return Formation { k: build(kpl, &fam_k), p: build(ppl, &fam_p), q: build(qpl, &fam_q), f, g };
    }
}
