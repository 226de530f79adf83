//! Finite partial lattices, their congruences, ideals and filters.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::bitrel::{canonical, nonempty_subsets, BitRel, BitSet};
use crate::error::{Error, Result};
use crate::order::{FinitePoset, Lattice};

/// A poset with partial join and meet operations on nonempty finite subsets.
/// Every listed join is the supremum of its arguments and every listed meet
/// the infimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialLattice {
    poset: FinitePoset,
    joins: BTreeMap<Vec<usize>, usize>,
    meets: BTreeMap<Vec<usize>, usize>,
}

/// Check that every listed join is a supremum and every listed meet an
/// infimum. Keys are deduplicated and order-insensitive.
pub fn validate_pl(
    poset: FinitePoset,
    joins: impl IntoIterator<Item = (Vec<usize>, usize)>,
    meets: impl IntoIterator<Item = (Vec<usize>, usize)>,
) -> Result<PartialLattice> {
    let names = |xs: &[usize]| xs.iter().map(|&x| poset.name(x)).collect::<Vec<_>>().join(", ");
    let mut jm = BTreeMap::new();
    for (xs, a) in joins {
        let xs = canonical(xs);
        if xs.is_empty() {
            return Err(Error::EmptyKey);
        }
        let ub = poset.upper_bounds(&xs);
        let not_above = xs.iter().copied().find(|&x| !poset.le(x, a));
        if let Some(w) = not_above.or_else(|| ub.iter().find(|&b| !poset.le(a, b))) {
            return Err(Error::NotSup { value: poset.name(a).into(), args: names(&xs), witness: poset.name(w).into() });
        }
        jm.insert(xs, a);
    }
    let mut mm = BTreeMap::new();
    for (xs, a) in meets {
        let xs = canonical(xs);
        if xs.is_empty() {
            return Err(Error::EmptyKey);
        }
        let lb = poset.lower_bounds(&xs);
        let not_below = xs.iter().copied().find(|&x| !poset.le(a, x));
        if let Some(w) = not_below.or_else(|| lb.iter().find(|&b| !poset.le(b, a))) {
            return Err(Error::NotInf { value: poset.name(a).into(), args: names(&xs), witness: poset.name(w).into() });
        }
        mm.insert(xs, a);
    }
    Ok(PartialLattice { poset, joins: jm, meets: mm })
}

/// Above this size `from_lattice` lists only binary operations.
pub const FULL_PRESENTATION_LIMIT: usize = 8;

impl PartialLattice {
    /// A poset with no joins or meets.
    pub fn discrete(poset: FinitePoset) -> Self {
        PartialLattice { poset, joins: BTreeMap::new(), meets: BTreeMap::new() }
    }

    /// A finite lattice as a partial lattice. Joins and meets are listed for
    /// every nonempty subset when the carrier is small, otherwise for
    /// singletons and pairs, which generate the same congruences and the same
    /// free lattice.
    pub fn from_lattice(l: &Lattice) -> Self {
        let n = l.len();
        let all: Vec<usize> = (0..n).collect();
        let keys: Vec<Vec<usize>> = if n <= FULL_PRESENTATION_LIMIT {
            nonempty_subsets(&all)
        } else {
            let mut ks: Vec<Vec<usize>> = all.iter().map(|&x| vec![x]).collect();
            for x in 0..n {
                for y in x + 1..n {
                    ks.push(vec![x, y]);
                }
            }
            ks
        };
        let joins = keys.iter().map(|k| (k.clone(), l.join_all(k.iter().copied()))).collect();
        let meets = keys.iter().map(|k| (k.clone(), l.meet_all(k.iter().copied()))).collect();
        PartialLattice { poset: l.poset().clone(), joins, meets }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        self.poset.name(i)
    }

    pub fn idx(&self, name: &str) -> Result<usize> {
        self.poset.idx(name)
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.poset.le(x, y)
    }

    pub fn joins(&self) -> &BTreeMap<Vec<usize>, usize> {
        &self.joins
    }

    pub fn meets(&self) -> &BTreeMap<Vec<usize>, usize> {
        &self.meets
    }

    /// The listed join of `xs`, if any.
    pub fn join_of(&self, xs: &[usize]) -> Option<usize> {
        self.joins.get(&canonical(xs.to_vec())).copied()
    }

    pub fn meet_of(&self, xs: &[usize]) -> Option<usize> {
        self.meets.get(&canonical(xs.to_vec())).copied()
    }

    /// Add `a = ⋁{a}` and `a = ⋀{a}` for every element.
    pub fn augment_singletons(&self) -> PartialLattice {
        let mut out = self.clone();
        for a in 0..self.len() {
            out.joins.insert(vec![a], a);
            out.meets.insert(vec![a], a);
        }
        out
    }

    /// Order reversed, joins and meets exchanged.
    pub fn dual(&self) -> PartialLattice {
        PartialLattice { poset: self.poset.dual(), joins: self.meets.clone(), meets: self.joins.clone() }
    }

    /// The underlying poset is a lattice and every pair has a listed join
    /// and meet.
    pub fn is_lattice(&self) -> bool {
        let n = self.len();
        n > 0 && (0..n).all(|x| (x..n).all(|y| self.join_of(&[x, y]).is_some() && self.meet_of(&[x, y]).is_some()))
    }

    /// The lattice tables, when `is_lattice` holds.
    pub fn to_lattice(&self) -> Result<Lattice> {
        if !self.is_lattice() {
            return Err(Error::NotALattice(self.name(0).into(), self.name(0).into(), "listed operations"));
        }
        crate::order::as_lattice(&self.poset)
    }

    /// Same structure, new element names.
    pub fn renamed(&self, names: Vec<String>) -> Result<PartialLattice> {
        Ok(PartialLattice { poset: self.poset.renamed(names)?, joins: self.joins.clone(), meets: self.meets.clone() })
    }

    /// Whether `set` is an ideal: a lower set closed under the listed joins
    /// of its subsets.
    pub fn is_ideal(&self, set: &BitSet) -> bool {
        let lower = set.iter().all(|x| self.poset.down(x).is_subset(set));
        lower && self.joins.iter().all(|(xs, &a)| !xs.iter().all(|&x| set.contains(x)) || set.contains(a))
    }

    pub fn is_filter(&self, set: &BitSet) -> bool {
        self.dual().is_ideal(set)
    }
}

/// `Id_n(X, U)`: start from `↓X`, then repeatedly add `↓⋁Z` for nonempty
/// `Z ⊆ U ∩ Id_k` with a listed join.
pub fn idn(p: &PartialLattice, xs: &[usize], us: &[usize], n: usize) -> BitSet {
    let mut cur = p.poset.down_set(xs.iter().copied());
    let u = BitSet::from_elems(p.len(), us.iter().copied());
    for _ in 0..n {
        let mut next = cur.clone();
        for (zs, &a) in &p.joins {
            if zs.iter().all(|&z| u.contains(z) && cur.contains(z)) {
                next.union_with(&p.poset.down(a));
            }
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

pub fn filn(p: &PartialLattice, xs: &[usize], us: &[usize], n: usize) -> BitSet {
    idn(&p.dual(), xs, us, n)
}

/// The ideal generated by `xs` (empty for empty `xs`).
pub fn ideal_closure(p: &PartialLattice, xs: &[usize]) -> BitSet {
    let all: Vec<usize> = (0..p.len()).collect();
    idn(p, xs, &all, p.len())
}

pub fn filter_closure(p: &PartialLattice, xs: &[usize]) -> BitSet {
    ideal_closure(&p.dual(), xs)
}

/// A congruence: a preorder containing `≤` under which listed joins stay
/// suprema and listed meets stay infima.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence(BitRel);

impl Congruence {
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.0.get(a, b)
    }

    pub fn equiv(&self, a: usize, b: usize) -> bool {
        self.le(a, b) && self.le(b, a)
    }

    pub fn relation(&self) -> &BitRel {
        &self.0
    }

    pub fn is_subset(&self, other: &Congruence) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.pairs()
    }

    /// Whether `rel` satisfies every congruence condition on `p`, checked
    /// directly rather than by closure.
    pub fn is_congruence_of(rel: &BitRel, p: &PartialLattice) -> bool {
        let n = p.len();
        if !p.poset.relation().is_subset(rel) || !rel.is_transitive() {
            return false;
        }
        let joins_ok = p.joins.iter().all(|(xs, &a)| (0..n).all(|b| !xs.iter().all(|&x| rel.get(x, b)) || rel.get(a, b)));
        let meets_ok = p.meets.iter().all(|(xs, &a)| (0..n).all(|b| !xs.iter().all(|&x| rel.get(b, x)) || rel.get(b, a)));
        joins_ok && meets_ok
    }
}

/// The least congruence containing `≤` and `seeds`.
pub fn cong_closure(p: &PartialLattice, seeds: impl IntoIterator<Item = (usize, usize)>) -> Congruence {
    let mut rel = p.poset.relation().clone();
    for (a, b) in seeds {
        rel.set(a, b);
    }
    close_relation(p, rel)
}

fn close_relation(p: &PartialLattice, mut rel: BitRel) -> Congruence {
    let n = p.len();
    loop {
        rel.transitive_close();
        let mut changed = false;
        for (xs, &a) in &p.joins {
            let mut common = BitSet::full(n);
            for &x in xs {
                common.intersect_with(rel.row(x));
            }
            changed |= rel.row_mut(a).union_with(&common);
        }
        let mut t = rel.transpose();
        let mut tchanged = false;
        for (xs, &a) in &p.meets {
            let mut common = BitSet::full(n);
            for &x in xs {
                common.intersect_with(t.row(x));
            }
            tchanged |= t.row_mut(a).union_with(&common);
        }
        if tchanged {
            rel = t.transpose();
            changed = true;
        }
        if !changed {
            return Congruence(rel);
        }
    }
}

/// `Θ⁺(a, b)`: the least congruence with `a ⪯ b`.
pub fn theta_plus(p: &PartialLattice, a: usize, b: usize) -> Congruence {
    cong_closure(p, [(a, b)])
}

/// `Θ(a, b)`: the least congruence identifying `a` and `b`.
pub fn theta(p: &PartialLattice, a: usize, b: usize) -> Congruence {
    cong_closure(p, [(a, b), (b, a)])
}

/// Join of congruences: closure of the union.
pub fn cong_join(p: &PartialLattice, a: &Congruence, b: &Congruence) -> Congruence {
    let mut rel = a.0.clone();
    rel.union_with(&b.0);
    close_relation(p, rel)
}

/// Meet of congruences: intersection.
pub fn cong_meet(a: &Congruence, b: &Congruence) -> Congruence {
    Congruence(a.0.intersection(&b.0))
}

pub fn zero_congruence(p: &PartialLattice) -> Congruence {
    Congruence(p.poset.relation().clone())
}

pub fn full_congruence(p: &PartialLattice) -> Congruence {
    Congruence(BitRel::full(p.len()))
}

pub const DEFAULT_CON_CAP: usize = 4096;

/// All congruences of a finite partial lattice, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct ConLattice {
    elems: Vec<Congruence>,
    index: HashMap<Congruence, usize>,
    poset: FinitePoset,
}

pub fn con_lattice(p: &PartialLattice) -> Result<ConLattice> {
    con_lattice_capped(p, DEFAULT_CON_CAP)
}

/// Generated from the principal congruences `Θ⁺(a, b)` by closing under
/// binary joins.
pub fn con_lattice_capped(p: &PartialLattice, cap: usize) -> Result<ConLattice> {
    let n = p.len();
    let mut principals: Vec<Congruence> = Vec::new();
    let mut seen_p = HashSet::new();
    for a in 0..n {
        for b in 0..n {
            let t = theta_plus(p, a, b);
            if seen_p.insert(t.clone()) {
                principals.push(t);
            }
        }
    }
    let zero = zero_congruence(p);
    let mut seen: HashSet<Congruence> = HashSet::from([zero.clone()]);
    let mut all = vec![zero];
    let mut frontier = 0;
    while frontier < all.len() {
        let cur = all[frontier].clone();
        frontier += 1;
        for g in &principals {
            if g.is_subset(&cur) {
                continue;
            }
            let j = cong_join(p, &cur, g);
            if seen.insert(j.clone()) {
                all.push(j);
                if all.len() > cap {
                    return Err(Error::SizeLimit { what: "congruence lattice", limit: cap });
                }
            }
        }
    }
    all.sort_by(|x, y| x.0.count().cmp(&y.0.count()).then_with(|| x.cmp(y)));
    let index = all.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut rel = BitRel::empty(all.len());
    for (i, x) in all.iter().enumerate() {
        for (j, y) in all.iter().enumerate() {
            if x.is_subset(y) {
                rel.set(i, j);
            }
        }
    }
    let names = (0..all.len()).map(|i| format!("c{i}")).collect();
    let poset = FinitePoset::from_relation(names, rel).expect("inclusion is a partial order");
    Ok(ConLattice { elems: all, index, poset })
}

impl ConLattice {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> &Congruence {
        &self.elems[i]
    }

    pub fn elements(&self) -> &[Congruence] {
        &self.elems
    }

    pub fn position(&self, c: &Congruence) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Index of `0_P`.
    pub fn zero(&self) -> usize {
        0
    }

    /// Index of `1_P`.
    pub fn one(&self) -> usize {
        self.elems.len() - 1
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn lattice(&self) -> Lattice {
        crate::order::as_lattice(&self.poset).expect("congruences form a lattice")
    }
}

/// A homomorphism of partial lattices: order-preserving, carrying listed
/// joins to listed joins and listed meets to listed meets.
#[derive(Clone, Debug)]
pub struct PLHom<'a> {
    pub source: &'a PartialLattice,
    pub target: &'a PartialLattice,
    pub map: Vec<usize>,
}

impl<'a> PLHom<'a> {
    pub fn new(source: &'a PartialLattice, target: &'a PartialLattice, map: Vec<usize>) -> Result<Self> {
        check_hom(source, target, &map)?;
        Ok(PLHom { source, target, map })
    }

    pub fn identity(p: &'a PartialLattice) -> Self {
        PLHom { source: p, target: p, map: (0..p.len()).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Order-reflecting as well as order-preserving.
    pub fn is_embedding(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|x| (0..n).all(|y| self.source.le(x, y) == self.target.le(self.map[x], self.map[y])))
    }
}

/// Check the homomorphism conditions for a map given by indices.
pub fn check_hom(source: &PartialLattice, target: &PartialLattice, map: &[usize]) -> Result<()> {
    if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
        return Err(Error::NotAHomomorphism("map is not a function between the carriers".into()));
    }
    for (x, y) in source.poset.relation().pairs() {
        if !target.le(map[x], map[y]) {
            return Err(Error::NotAHomomorphism(format!(
                "{} <= {} but {} </= {}",
                source.name(x),
                source.name(y),
                target.name(map[x]),
                target.name(map[y])
            )));
        }
    }
    for (xs, &a) in &source.joins {
        let img: Vec<usize> = xs.iter().map(|&x| map[x]).collect();
        if derived(&img, |k| target.join_of(k)) != Some(map[a]) {
            return Err(Error::NotAHomomorphism(format!("join {} not preserved", source.name(a))));
        }
    }
    for (xs, &a) in &source.meets {
        let img: Vec<usize> = xs.iter().map(|&x| map[x]).collect();
        if derived(&img, |k| target.meet_of(k)) != Some(map[a]) {
            return Err(Error::NotAHomomorphism(format!("meet {} not preserved", source.name(a))));
        }
    }
    Ok(())
}

/// A listed operation on `xs`, or else a fold of listed binary ones; a fold
/// of suprema is the supremum of the whole set.
fn derived(xs: &[usize], op: impl Fn(&[usize]) -> Option<usize>) -> Option<usize> {
    op(xs).or_else(|| {
        let (&first, rest) = xs.split_first()?;
        rest.iter().try_fold(first, |acc, &y| if acc == y { Some(acc) } else { op(&[acc, y]) })
    })
}

/// `Con_c f` applied to `alpha`: the congruence of the target generated by
/// the image pairs.
pub fn conc_map(f: &PLHom, alpha: &Congruence) -> Congruence {
    cong_closure(f.target, alpha.pairs().map(|(x, y)| (f.map[x], f.map[y])))
}

/// `Con_c f` as a table between indices of the two congruence lattices.
pub fn conc_table(f: &PLHom, src: &ConLattice, tgt: &ConLattice) -> Vec<usize> {
    src.elements()
        .iter()
        .map(|a| tgt.position(&conc_map(f, a)).expect("image is a congruence of the target"))
        .collect()
}

/// Quotient of `p` by a preorder that is a congruence. Classes are
/// represented by their first element in input order.
pub fn quotient_by_preorder(p: &PartialLattice, le: impl Fn(usize, usize) -> bool) -> (PartialLattice, Vec<usize>) {
    let n = p.len();
    let mut proj = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if proj[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for y in x..n {
            if proj[y] == usize::MAX && le(x, y) && le(y, x) {
                proj[y] = c;
            }
        }
    }
    let names = reps.iter().map(|&r| p.name(r).to_string()).collect();
    let mut rel = BitRel::empty(reps.len());
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            if le(a, b) {
                rel.set(i, j);
            }
        }
    }
    let poset = FinitePoset::from_relation(names, rel).expect("quotient of a preorder is a poset");
    let lift = |m: &BTreeMap<Vec<usize>, usize>| -> BTreeMap<Vec<usize>, usize> {
        m.iter().map(|(xs, &a)| (canonical(xs.iter().map(|&x| proj[x]).collect()), proj[a])).collect()
    };
    let q = PartialLattice { poset, joins: lift(&p.joins), meets: lift(&p.meets) };
    (q, proj)
}

/// `P/θ` together with the projection.
pub fn quotient_by_cong(p: &PartialLattice, theta: &Congruence) -> (PartialLattice, Vec<usize>) {
    quotient_by_preorder(p, |a, b| theta.le(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{as_lattice, build_poset};

    fn chain3() -> PartialLattice {
        let l = as_lattice(&FinitePoset::chain(&["0", "1", "2"])).unwrap();
        PartialLattice::from_lattice(&l)
    }

    fn square() -> PartialLattice {
        let p = build_poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")]).unwrap();
        validate_pl(p, [(vec![1, 2], 3)], [(vec![1, 2], 0)]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let p = FinitePoset::chain(&["0", "1", "2"]);
        assert!(validate_pl(p, [(vec![0, 1], 1)], []).is_ok());
        let v = build_poset(&["0", "a", "b"], &[("0", "a"), ("0", "b")]).unwrap();
        let e = validate_pl(v, [(vec![1, 2], 1)], []).unwrap_err();
        assert!(matches!(e, Error::NotSup { .. }));
        let v = build_poset(&["0", "a"], &[("0", "a")]).unwrap();
        assert!(matches!(validate_pl(v, [(vec![], 1)], []), Err(Error::EmptyKey)));
        assert_eq!(square().joins().len(), 1);
    }

    #[test]
    fn augment_is_idempotent_and_keeps_congruences() {
        let p = chain3();
        let a = p.augment_singletons();
        assert_eq!(a, a.augment_singletons());
        let anti = PartialLattice::discrete(build_poset(&["a", "b"], &[] as &[(&str, &str)]).unwrap());
        let aa = anti.augment_singletons();
        assert_eq!(aa.joins().len() + aa.meets().len(), 4);
        let c1 = con_lattice(&anti).unwrap();
        let c2 = con_lattice(&aa).unwrap();
        assert_eq!(c1.elements(), c2.elements());
    }

    #[test]
    fn closure_examples() {
        let p = chain3();
        assert_eq!(cong_closure(&p, []), zero_congruence(&p));
        let t = cong_closure(&p, [(1, 0)]);
        assert_eq!(t.relation().count(), 7);
        let all: Vec<(usize, usize)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        assert_eq!(cong_closure(&p, all), full_congruence(&p));
        assert_eq!(theta_plus(&p, 0, 2), zero_congruence(&p));
        let t = theta(&p, 1, 0);
        assert!(t.equiv(0, 1) && !t.le(2, 1));
    }

    #[test]
    fn con_lattice_small_cases() {
        let two = PartialLattice::from_lattice(&as_lattice(&FinitePoset::chain(&["0", "1"])).unwrap());
        assert_eq!(con_lattice(&two).unwrap().len(), 2);
        let sq = PartialLattice::from_lattice(&as_lattice(square().poset()).unwrap());
        let c = con_lattice(&sq).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.lattice().distributivity_witness().is_none());
        assert!(matches!(con_lattice_capped(&sq, 2), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn quotient_examples() {
        let p = chain3();
        let (q, proj) = quotient_by_cong(&p, &zero_congruence(&p));
        assert_eq!(q.len(), 3);
        assert_eq!(proj, vec![0, 1, 2]);
        let (q, _) = quotient_by_cong(&p, &full_congruence(&p));
        assert_eq!(q.len(), 1);
        let (q, proj) = quotient_by_cong(&p, &theta(&p, 1, 0));
        assert_eq!(q.len(), 2);
        assert_eq!(proj, vec![0, 0, 1]);
        assert!(validate_pl(q.poset().clone(), q.joins().clone(), q.meets().clone()).is_ok());
    }

    #[test]
    fn ideal_generation() {
        let sq = square();
        let all = [0, 1, 2, 3];
        assert_eq!(idn(&sq, &[1], &[], 0).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(!idn(&sq, &[1, 2], &all, 0).contains(3));
        assert!(idn(&sq, &[1, 2], &all, 1).contains(3));
        assert!(sq.is_ideal(&ideal_closure(&sq, &[1, 2])));
        assert_eq!(filter_closure(&sq, &[1, 2]).len(), 4);
    }

    #[test]
    fn conc_of_identity_is_identity() {
        let p = square().augment_singletons();
        let c = con_lattice(&p).unwrap();
        let id = PLHom::identity(&p);
        assert_eq!(conc_table(&id, &c, &c), (0..c.len()).collect::<Vec<_>>());
    }

    #[test]
    fn conc_of_constant_map_is_zero() {
        let p = square().augment_singletons();
        let one = PartialLattice::from_lattice(&as_lattice(&FinitePoset::chain(&["*"])).unwrap());
        let f = PLHom::new(&p, &one, vec![0; 4]).unwrap();
        let cp = con_lattice(&p).unwrap();
        let c1 = con_lattice(&one).unwrap();
        assert!(conc_table(&f, &cp, &c1).iter().all(|&i| i == c1.zero()));
    }

    #[test]
    fn inclusion_of_chain_into_square() {
        let sq = PartialLattice::from_lattice(&as_lattice(square().poset()).unwrap());
        let two = PartialLattice::from_lattice(&as_lattice(&FinitePoset::chain(&["0", "1"])).unwrap());
        let f = PLHom::new(&two, &sq, vec![0, 3]).unwrap();
        assert!(f.is_embedding());
        let c2 = con_lattice(&two).unwrap();
        let cs = con_lattice(&sq).unwrap();
        let t = conc_table(&f, &c2, &cs);
        assert_eq!(t[c2.zero()], cs.zero());
        assert_eq!(t[c2.one()], cs.one());
    }
}
