//! Finite posets, finite lattices and finite distributive lattices.
//!
//! Elements are addressed by their position in the input order; names are
//! kept for reporting and file output.

use std::collections::HashMap;
use std::ops::Deref;

use crate::bitrel::{BitRel, BitSet};
use crate::error::{Error, Result};

/// A finite partially ordered set with named elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    le: BitRel,
}

/// Build a poset from generating pairs. The relation is closed reflexively
/// and transitively.
pub fn build_poset<S: AsRef<str>, T: AsRef<str>>(elements: &[S], pairs: &[(T, T)]) -> Result<FinitePoset> {
    let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(Error::DuplicateElement(n.clone()));
        }
    }
    let mut rel = BitRel::empty(names.len());
    for (x, y) in pairs {
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownElement(s.to_string()));
        rel.set(lookup(x.as_ref())?, lookup(y.as_ref())?);
    }
    FinitePoset::from_relation(names, rel)
}

impl FinitePoset {
    /// Close `rel` and check antisymmetry.
    pub fn from_relation(names: Vec<String>, mut rel: BitRel) -> Result<Self> {
        assert_eq!(names.len(), rel.size());
        for i in 0..names.len() {
            rel.set(i, i);
        }
        rel.transitive_close();
        if let Some((i, j)) = rel.pairs().find(|&(i, j)| i < j && rel.get(j, i)) {
            return Err(Error::AntisymmetryViolation(names[i].clone(), names[j].clone()));
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateElement(n.clone()));
            }
        }
        Ok(FinitePoset { names, index, le: rel })
    }

    /// The chain `names[0] < names[1] < ...`.
    pub fn chain<S: AsRef<str>>(names: &[S]) -> Self {
        let pairs: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0].as_ref(), w[1].as_ref())).collect();
        build_poset(names, &pairs).expect("a chain is a poset")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn idx(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le.get(i, j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le.get(i, j)
    }

    pub fn relation(&self) -> &BitRel {
        &self.le
    }

    pub fn up(&self, i: usize) -> BitSet {
        self.le.row(i).clone()
    }

    pub fn down(&self, i: usize) -> BitSet {
        BitSet::from_elems(self.len(), (0..self.len()).filter(|&j| self.le(j, i)))
    }

    /// `↓X`
    pub fn down_set(&self, xs: impl IntoIterator<Item = usize>) -> BitSet {
        let mut out = BitSet::new(self.len());
        for x in xs {
            out.union_with(&self.down(x));
        }
        out
    }

    /// `↑X`
    pub fn up_set(&self, xs: impl IntoIterator<Item = usize>) -> BitSet {
        let mut out = BitSet::new(self.len());
        for x in xs {
            out.union_with(self.le.row(x));
        }
        out
    }

    pub fn upper_bounds(&self, xs: &[usize]) -> BitSet {
        let mut out = BitSet::full(self.len());
        for &x in xs {
            out.intersect_with(self.le.row(x));
        }
        out
    }

    pub fn lower_bounds(&self, xs: &[usize]) -> BitSet {
        let mut out = BitSet::full(self.len());
        for &x in xs {
            out.intersect_with(&self.down(x));
        }
        out
    }

    /// Least upper bound, if one exists.
    pub fn sup(&self, xs: &[usize]) -> Option<usize> {
        let ub = self.upper_bounds(xs);
        let found = ub.iter().find(|&a| ub.iter().all(|b| self.le(a, b)));
        found
    }

    pub fn inf(&self, xs: &[usize]) -> Option<usize> {
        let lb = self.lower_bounds(xs);
        let found = lb.iter().find(|&a| lb.iter().all(|b| self.le(b, a)));
        found
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn dual(&self) -> FinitePoset {
        FinitePoset { names: self.names.clone(), index: self.index.clone(), le: self.le.transpose() }
    }

    /// Number of covering steps in a longest chain.
    pub fn height(&self) -> usize {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.down(i).len());
        let mut depth = vec![0usize; n];
        for &y in &order {
            for x in 0..n {
                if self.lt(x, y) {
                    depth[y] = depth[y].max(depth[x] + 1);
                }
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// The same order on a renamed carrier.
    pub fn renamed(&self, names: Vec<String>) -> Result<FinitePoset> {
        FinitePoset::from_relation(names, self.le.clone())
    }

    /// Restriction to the given elements, in the given order.
    pub fn restrict(&self, elems: &[usize]) -> FinitePoset {
        let names = elems.iter().map(|&i| self.names[i].clone()).collect();
        let mut rel = BitRel::empty(elems.len());
        for (a, &x) in elems.iter().enumerate() {
            for (b, &y) in elems.iter().enumerate() {
                if self.le(x, y) {
                    rel.set(a, b);
                }
            }
        }
        FinitePoset::from_relation(names, rel).expect("restriction of a poset")
    }
}

/// An order isomorphism `a -> b`, if one exists. Backtracking search pruned
/// by the sizes of principal up- and down-sets.
pub fn poset_isomorphism(a: &FinitePoset, b: &FinitePoset) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() || a.relation().count() != b.relation().count() {
        return None;
    }
    let sig = |p: &FinitePoset, i: usize| (p.down(i).len(), p.up(i).len());
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        a: &FinitePoset,
        b: &FinitePoset,
        sa: &[(usize, usize)],
        sb: &[(usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == map.len() {
            return true;
        }
        for c in 0..map.len() {
            if used[c] || sa[k] != sb[c] {
                continue;
            }
            let ok = (0..k).all(|j| a.le(j, k) == b.le(map[j], c) && a.le(k, j) == b.le(c, map[j]));
            if ok {
                map[k] = c;
                used[c] = true;
                if go(k + 1, a, b, sa, sb, map, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    go(0, a, b, &sa, &sb, &mut map, &mut used).then_some(map)
}

/// A finite nonempty lattice with precomputed operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    poset: FinitePoset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bot: usize,
    top: usize,
}

/// Compute join and meet tables by sup/inf search.
pub fn as_lattice(poset: &FinitePoset) -> Result<Lattice> {
    let n = poset.len();
    if n == 0 {
        return Err(Error::EmptyArgument);
    }
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let nl = |kind| Error::NotALattice(poset.name(x).into(), poset.name(y).into(), kind);
            join[x * n + y] = poset.sup(&[x, y]).ok_or_else(|| nl("join"))?;
            meet[x * n + y] = poset.inf(&[x, y]).ok_or_else(|| nl("meet"))?;
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let bot = poset.inf(&all).expect("finite lattice has a bottom");
    let top = poset.sup(&all).expect("finite lattice has a top");
    Ok(Lattice { poset: poset.clone(), join, meet, bot, top })
}

impl Lattice {
    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
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

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Join of a finite family; the empty join is bottom.
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    /// Meet of a finite family; the empty meet is top.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// A triple violating distributivity, if any.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Elements `p != bot` with `p = x | y` only for `p` in `{x, y}`.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&p| p != self.bot)
            .filter(|&p| {
                (0..n).all(|x| (0..n).all(|y| self.join(x, y) != p || x == p || y == p))
            })
            .collect()
    }

    pub fn dual(&self) -> Lattice {
        Lattice {
            poset: self.poset.dual(),
            join: self.meet.clone(),
            meet: self.join.clone(),
            bot: self.top,
            top: self.bot,
        }
    }
}

/// A finite distributive lattice. Used as the value domain of all Boolean
/// values, in which case the top element is the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistLattice(Lattice);

impl Deref for DistLattice {
    type Target = Lattice;
    fn deref(&self) -> &Lattice {
        &self.0
    }
}

pub fn as_dist_lattice(poset: &FinitePoset) -> Result<DistLattice> {
    DistLattice::try_from(as_lattice(poset)?)
}

impl TryFrom<Lattice> for DistLattice {
    type Error = Error;
    fn try_from(l: Lattice) -> Result<Self> {
        if let Some((x, y, z)) = l.distributivity_witness() {
            return Err(Error::NotDistributive {
                x: l.name(x).into(),
                y: l.name(y).into(),
                z: l.name(z).into(),
            });
        }
        Ok(DistLattice(l))
    }
}

/// `L^d`: order reversed, operations and bounds swapped, names kept.
pub fn dualize(d: &DistLattice) -> DistLattice {
    DistLattice(d.0.dual())
}

impl DistLattice {
    /// The chain `0 < 1 < ... < n-1` with names `"0"`, `"1"`, ...
    pub fn chain(n: usize) -> DistLattice {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::named_chain(&names)
    }

    pub fn named_chain<S: AsRef<str>>(names: &[S]) -> DistLattice {
        as_dist_lattice(&FinitePoset::chain(names)).expect("chains are distributive")
    }

    pub fn lattice(&self) -> &Lattice {
        &self.0
    }

    /// The prime filters `↑p`, one per join-irreducible `p`.
    pub fn prime_filters(&self) -> Vec<PrimeFilter> {
        self.join_irreducibles()
            .into_iter()
            .map(|p| PrimeFilter { generator: p, members: self.poset().up(p) })
            .collect()
    }
}

pub fn prime_filters(d: &DistLattice) -> Vec<PrimeFilter> {
    d.prime_filters()
}

/// A proper prime filter of a distributive lattice, kept together with the
/// join-irreducible element generating it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFilter {
    generator: usize,
    members: BitSet,
}

impl PrimeFilter {
    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }
}
