//! Measured partial lattices: a partial lattice with a Boolean-value table
//! `⟦x ≤ y⟧` in a finite distributive lattice `E`.
//!
//! Values use the unit convention: `⟦x ≤ x⟧` is the top of `E`. A table
//! given in the zero convention (values `φΘ⁺(x, y)` in `D`) is read in
//! `E = D^d` by [`MeasuredPL::from_phi_table`]; both lattices share element
//! indices, so the same index is printed under both readings.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::bitrel::{canonical, nonempty_subsets, BitRel, BitSet};
use crate::error::{Error, Result};
use crate::order::{dualize, DistLattice, PrimeFilter};
use crate::partial::{
    cong_closure, cong_join, ideal_closure, idn, quotient_by_preorder, theta_plus, Congruence, PartialLattice,
};

/// Enumeration of subsets larger than this is refused.
pub const SUBSET_ENUMERATION_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasuredPL {
    pl: PartialLattice,
    values: DistLattice,
    bv: Vec<usize>,
}

impl MeasuredPL {
    /// Validate a unit-convention table (row-major, `n * n`).
    pub fn new(pl: PartialLattice, values: DistLattice, bv: Vec<usize>) -> Result<Self> {
        let m = MeasuredPL { pl, values, bv };
        m.check_axioms()?;
        Ok(m)
    }

    /// Read a zero-convention table `t(x, y) = φΘ⁺(x, y)` in `D`.
    pub fn from_phi_table(pl: PartialLattice, d: &DistLattice, t: &[usize]) -> Result<Self> {
        let n = pl.len();
        if t.len() != n * n {
            return Err(Error::AxiomViolation { clause: "shape", detail: format!("expected {} entries", n * n) });
        }
        for (x, y) in pl.poset().relation().pairs() {
            if t[x * n + y] != d.bot() {
                return Err(Error::AxiomViolation {
                    clause: "order",
                    detail: format!("{} <= {} but the table gives {}", pl.name(x), pl.name(y), d.name(t[x * n + y])),
                });
            }
        }
        MeasuredPL::new(pl, dualize(d), t.to_vec())
    }

    /// Build the table from one congruence per join-irreducible `p` of `E`:
    /// `⟦x ≤ y⟧` is the join of the `p` whose congruence contains `(x, y)`.
    /// The family must be antitone (`p ≤ q` forces `θ_q ⊆ θ_p`).
    pub fn from_congruences(pl: PartialLattice, values: DistLattice, family: &[(usize, Congruence)]) -> Result<Self> {
        for (p, tp) in family {
            for (q, tq) in family {
                if values.le(*p, *q) && !tq.is_subset(tp) {
                    return Err(Error::AxiomViolation {
                        clause: "antitone family",
                        detail: format!("{} <= {} but the congruences are not nested", values.name(*p), values.name(*q)),
                    });
                }
            }
        }
        let n = pl.len();
        let mut bv = vec![values.bot(); n * n];
        for (p, t) in family {
            for (x, y) in t.pairs() {
                bv[x * n + y] = values.join(bv[x * n + y], *p);
            }
        }
        MeasuredPL::new(pl, values, bv)
    }

    /// Zero-convention table from values on generating congruences:
    /// `φ(θ) = ⋁{d_i : θ_i ⊆ θ}`. Every principal congruence must be the
    /// join of the generators below it.
    pub fn from_generators(pl: PartialLattice, d: &DistLattice, gens: &[(Congruence, usize)]) -> Result<Self> {
        let n = pl.len();
        let mut t = vec![d.bot(); n * n];
        for x in 0..n {
            for y in 0..n {
                let th = theta_plus(&pl, x, y);
                let below: Vec<&(Congruence, usize)> = gens.iter().filter(|(g, _)| g.is_subset(&th)).collect();
                let span = below.iter().fold(crate::partial::zero_congruence(&pl), |acc, (g, _)| cong_join(&pl, &acc, g));
                if span != th {
                    return Err(Error::VerificationFailed(format!(
                        "Θ⁺({}, {}) is not a join of generators",
                        pl.name(x),
                        pl.name(y)
                    )));
                }
                t[x * n + y] = d.join_all(below.iter().map(|(_, v)| *v));
            }
        }
        MeasuredPL::from_phi_table(pl, d, &t)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.pl.len();
        let e = &self.values;
        let nm = |x: usize| self.pl.name(x).to_string();
        if self.bv.len() != n * n || self.bv.iter().any(|&v| v >= e.len()) {
            return Err(Error::AxiomViolation { clause: "shape", detail: "table size or value out of range".into() });
        }
        for (x, y) in self.pl.poset().relation().pairs() {
            if self.bv(x, y) != e.top() {
                let clause = if x == y { "reflexivity" } else { "order" };
                return Err(Error::AxiomViolation { clause, detail: format!("[{} <= {}] is not the unit", nm(x), nm(y)) });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !e.le(e.meet(self.bv(a, b), self.bv(b, c)), self.bv(a, c)) {
                        return Err(Error::AxiomViolation {
                            clause: "transitivity",
                            detail: format!("{}, {}, {}", nm(a), nm(b), nm(c)),
                        });
                    }
                }
            }
        }
        for (xs, &a) in self.pl.joins() {
            for b in 0..n {
                if self.bv(a, b) != e.meet_all(xs.iter().map(|&x| self.bv(x, b))) {
                    return Err(Error::AxiomViolation { clause: "join", detail: format!("{} = ⋁.., b = {}", nm(a), nm(b)) });
                }
            }
        }
        for (xs, &a) in self.pl.meets() {
            for b in 0..n {
                if self.bv(b, a) != e.meet_all(xs.iter().map(|&x| self.bv(b, x))) {
                    return Err(Error::AxiomViolation { clause: "meet", detail: format!("{} = ⋀.., b = {}", nm(a), nm(b)) });
                }
            }
        }
        Ok(())
    }

    pub fn pl(&self) -> &PartialLattice {
        &self.pl
    }

    /// The value lattice `E` (unit convention).
    pub fn values(&self) -> &DistLattice {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.pl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pl.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        self.pl.name(i)
    }

    pub fn idx(&self, name: &str) -> Result<usize> {
        self.pl.idx(name)
    }

    pub fn table(&self) -> &[usize] {
        &self.bv
    }

    /// `⟦x ≤ y⟧`
    pub fn bv(&self, x: usize, y: usize) -> usize {
        self.bv[x * self.pl.len() + y]
    }

    /// `⟦x = y⟧`
    pub fn bv_eq(&self, x: usize, y: usize) -> usize {
        self.values.meet(self.bv(x, y), self.bv(y, x))
    }

    /// `⟦a ∈ Y⟧`
    pub fn bv_in(&self, a: usize, ys: &[usize]) -> Result<usize> {
        nonempty(ys)?;
        Ok(self.in_(a, ys))
    }

    /// `⟦X ⊆ Y⟧`
    pub fn bv_subset(&self, xs: &[usize], ys: &[usize]) -> Result<usize> {
        nonempty(xs)?;
        nonempty(ys)?;
        Ok(self.subset_(xs, ys))
    }

    /// `⟦X = Y⟧`
    pub fn bv_seteq(&self, xs: &[usize], ys: &[usize]) -> Result<usize> {
        nonempty(xs)?;
        nonempty(ys)?;
        Ok(self.seteq_(xs, ys))
    }

    fn in_(&self, a: usize, ys: &[usize]) -> usize {
        self.values.join_all(ys.iter().map(|&y| self.bv_eq(a, y)))
    }

    fn subset_(&self, xs: &[usize], ys: &[usize]) -> usize {
        self.values.meet_all(xs.iter().map(|&x| self.in_(x, ys)))
    }

    fn seteq_(&self, xs: &[usize], ys: &[usize]) -> usize {
        self.values.meet(self.subset_(xs, ys), self.subset_(ys, xs))
    }

    /// Order reversed, joins and meets exchanged, `⟦x ≤ y⟧` read as `⟦y ≤ x⟧`.
    pub fn dual(&self) -> MeasuredPL {
        let n = self.len();
        let mut bv = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                bv[x * n + y] = self.bv(y, x);
            }
        }
        MeasuredPL { pl: self.pl.dual(), values: self.values.clone(), bv }
    }

    pub fn augment_singletons(&self) -> MeasuredPL {
        MeasuredPL { pl: self.pl.augment_singletons(), values: self.values.clone(), bv: self.bv.clone() }
    }

    /// `⟦x ≤ y⟧` is the unit exactly when `x ≤ y`.
    pub fn is_proper(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| (self.bv(x, y) == self.values.top()) == self.pl.le(x, y)))
    }

    /// `φ` of the congruence `⋁ Θ⁺(a_i, b_i)`, as an element of `D`. The
    /// index is shared with `E`; the join in `D` is the meet in `E`.
    pub fn phi_of(&self, presentation: &[(usize, usize)]) -> usize {
        self.values.meet_all(presentation.iter().map(|&(a, b)| self.bv(a, b)))
    }

    /// Same table on a renamed copy.
    pub fn renamed(&self, names: Vec<String>) -> Result<MeasuredPL> {
        Ok(MeasuredPL { pl: self.pl.renamed(names)?, values: self.values.clone(), bv: self.bv.clone() })
    }

    pub(crate) fn from_parts_unchecked(pl: PartialLattice, values: DistLattice, bv: Vec<usize>) -> MeasuredPL {
        MeasuredPL { pl, values, bv }
    }
}

fn nonempty(xs: &[usize]) -> Result<()> {
    if xs.is_empty() {
        Err(Error::EmptyArgument)
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Join,
    Meet,
}

/// A finite set of domain keys covering `target` in the sense
/// `⟦X = Y⟧ ≤ ⋁_{Z ∈ members} ⟦X = Z⟧` for every key `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub kind: Kind,
    pub target: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    Join,
    Meet,
    Idm,
    Film,
    Idj,
    Filj,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub kind: SampleKind,
    pub target: Vec<usize>,
    pub members: Vec<usize>,
    pub index: Option<usize>,
}

/// Evaluator for the derived Boolean values of one measured structure.
/// Holds per-instance caches; create one per computation.
///
/// Only the join side is implemented; meet-side values are the join-side
/// values of [`MeasuredPL::dual`], see [`Calc::dual`].
#[derive(Clone, Debug)]
pub struct Calc {
    m: MeasuredPL,
    keys: Vec<(Vec<usize>, usize)>,
    join_values: Vec<usize>,
    reach: Vec<BitSet>,
    le_join: HashMap<Vec<usize>, Rc<[usize]>>,
    in_id: HashMap<Vec<usize>, Rc<[usize]>>,
}

impl Calc {
    pub fn new(m: &MeasuredPL) -> Calc {
        let keys: Vec<(Vec<usize>, usize)> = m.pl.joins().iter().map(|(k, &v)| (k.clone(), v)).collect();
        let mut join_values: Vec<usize> = keys.iter().map(|(_, v)| *v).collect();
        join_values.sort_unstable();
        join_values.dedup();
        let n = m.len();
        let bot = m.values.bot();
        // Elements that can be ⟦=⟧-related to some argument of each key.
        let reach = keys
            .iter()
            .map(|(ys, _)| BitSet::from_elems(n, (0..n).filter(|&z| ys.iter().any(|&y| m.bv_eq(z, y) != bot))))
            .collect();
        Calc { m: m.clone(), keys, join_values, reach, le_join: HashMap::new(), in_id: HashMap::new() }
    }

    /// Evaluator for the dual structure, which computes the meet side.
    pub fn dual(&self) -> Calc {
        Calc::new(&self.m.dual())
    }

    pub fn measured(&self) -> &MeasuredPL {
        &self.m
    }

    fn e(&self) -> &DistLattice {
        &self.m.values
    }

    /// The whole join domain, which covers every subset of a finite carrier.
    pub fn cover(&self, xs: &[usize]) -> Result<Cover> {
        if self.keys.is_empty() {
            return Err(Error::EmptyDomain("join"));
        }
        Ok(Cover { kind: Kind::Join, target: xs.to_vec(), members: self.keys.iter().map(|(k, _)| k.clone()).collect() })
    }

    pub fn verify_cover(&self, xs: &[usize], members: &[Vec<usize>]) -> bool {
        let e = self.e();
        let covered = e.join_all(members.iter().map(|z| self.m.seteq_(xs, z)));
        self.keys.iter().all(|(ys, _)| e.le(self.m.seteq_(xs, ys), covered))
    }

    /// `⟦a = ⋁X⟧` over the whole join domain.
    pub fn join_eq(&self, a: usize, xs: &[usize]) -> usize {
        let e = self.e();
        e.join_all(self.keys.iter().map(|(ys, b)| e.meet(self.m.bv_eq(a, *b), self.m.seteq_(xs, ys))))
    }

    /// `⟦a = ⋁X⟧` over the given cover members.
    pub fn join_eq_over(&self, a: usize, xs: &[usize], members: &[Vec<usize>]) -> usize {
        let e = self.e();
        e.join_all(members.iter().map(|ys| {
            let b = self.m.pl.join_of(ys).expect("cover members are domain keys");
            e.meet(self.m.bv_eq(a, b), self.m.seteq_(xs, ys))
        }))
    }

    /// The values of all listed joins.
    pub fn join_sample(&self, xs: &[usize]) -> Sample {
        Sample { kind: SampleKind::Join, target: xs.to_vec(), members: self.join_values.clone(), index: None }
    }

    pub fn verify_join_sample(&self, xs: &[usize], us: &[usize]) -> bool {
        let e = self.e();
        let covered = e.join_all(us.iter().map(|&u| self.join_eq(u, xs)));
        (0..self.m.len()).all(|x| e.le(self.join_eq(x, xs), covered))
    }

    /// `⟦a ≤ ⋁Z⟧` for every `a`.
    pub fn le_join_vec(&mut self, zs: &[usize]) -> Rc<[usize]> {
        let key = canonical(zs.to_vec());
        if let Some(v) = self.le_join.get(&key) {
            return v.clone();
        }
        let us = self.join_values.clone();
        let v: Rc<[usize]> = self.le_join_with(&key, &us).into();
        self.le_join.insert(key, v.clone());
        v
    }

    /// `⟦a ≤ ⋁Z⟧` for every `a`, through the given join-sample.
    pub fn le_join_with(&self, zs: &[usize], us: &[usize]) -> Vec<usize> {
        let e = self.e();
        let coeff: Vec<(usize, usize)> =
            us.iter().map(|&u| (u, self.join_eq(u, zs))).filter(|&(_, c)| c != e.bot()).collect();
        (0..self.m.len()).map(|a| e.join_all(coeff.iter().map(|&(u, c)| e.meet(self.m.bv(a, u), c)))).collect()
    }

    pub fn le_join(&mut self, a: usize, zs: &[usize]) -> usize {
        self.le_join_vec(zs)[a]
    }

    /// Subsets `Z ⊆ U` that can contribute to the `Id_n` step: every `z`
    /// has nonzero level and `⟦Z = Y⟧` can be nonzero for some key `Y`.
    fn step_candidates(&self, us: &[usize], level: &[usize]) -> Vec<Vec<usize>> {
        let bot = self.e().bot();
        let live: Vec<usize> = us.iter().copied().filter(|&u| level[u] != bot).collect();
        let mut out = HashSet::new();
        for ((ys, _), reach) in self.keys.iter().zip(&self.reach) {
            let pool: Vec<usize> = live.iter().copied().filter(|&u| reach.contains(u)).collect();
            assert!(
                pool.len() <= SUBSET_ENUMERATION_LIMIT,
                "Id_n step would enumerate 2^{} subsets",
                pool.len()
            );
            for z in nonempty_subsets(&pool) {
                let covers_key = ys.iter().all(|&y| z.iter().any(|&w| self.m.bv_eq(w, y) != bot));
                if covers_key {
                    out.insert(z);
                }
            }
        }
        let mut v: Vec<Vec<usize>> = out.into_iter().collect();
        v.sort();
        v
    }

    /// `⟦a ∈ Id_k(X, U)⟧` for `k = 0..=n`, each as a vector over `a`.
    pub fn idn_levels(&mut self, xs: &[usize], us: &[usize], n: usize) -> Vec<Vec<usize>> {
        let m = self.m.clone();
        let e = &m.values;
        let size = m.len();
        let base: Vec<usize> = (0..size).map(|a| e.join_all(xs.iter().map(|&x| m.bv(a, x)))).collect();
        let mut levels = vec![base];
        for _ in 0..n {
            let cur = levels.last().expect("nonempty").clone();
            let mut next = cur.clone();
            for z in self.step_candidates(us, &cur) {
                let inside = e.meet_all(z.iter().map(|&w| cur[w]));
                let lj = self.le_join_vec(&z);
                for a in 0..size {
                    next[a] = e.join(next[a], e.meet(lj[a], inside));
                }
            }
            levels.push(next);
        }
        levels
    }

    /// `⟦a ∈ Id_n(X, U)⟧` for every `a`.
    pub fn idn_vec(&mut self, xs: &[usize], us: &[usize], n: usize) -> Vec<usize> {
        self.idn_levels(xs, us, n).pop().expect("nonempty")
    }

    /// `⟦a ∈ Id(X)⟧` for every `a`: the stable value with `U` the whole
    /// carrier.
    pub fn in_id_vec(&mut self, xs: &[usize]) -> Rc<[usize]> {
        let key = canonical(xs.to_vec());
        if let Some(v) = self.in_id.get(&key) {
            return v.clone();
        }
        let all: Vec<usize> = (0..self.m.len()).collect();
        let m = self.m.clone();
        let e = &m.values;
        let mut cur: Vec<usize> = (0..m.len()).map(|a| e.join_all(key.iter().map(|&x| m.bv(a, x)))).collect();
        for _ in 0..m.len() {
            let mut next = cur.clone();
            for z in self.step_candidates(&all, &cur) {
                let inside = e.meet_all(z.iter().map(|&w| cur[w]));
                let lj = self.le_join_vec(&z);
                for a in 0..m.len() {
                    next[a] = e.join(next[a], e.meet(lj[a], inside));
                }
            }
            if next == cur {
                break;
            }
            cur = next;
        }
        let v: Rc<[usize]> = cur.into();
        self.in_id.insert(key, v.clone());
        v
    }

    pub fn in_id(&mut self, a: usize, xs: &[usize]) -> usize {
        self.in_id_vec(xs)[a]
    }

    /// The whole carrier, which is an (Id∧)-sample of every subset.
    pub fn idm_sample(&self, xs: &[usize]) -> Sample {
        Sample { kind: SampleKind::Idm, target: xs.to_vec(), members: (0..self.m.len()).collect(), index: None }
    }

    /// `⋀_x ⟦a ≤ x⟧ ≤ ⋁_u ⟦a ≤ u⟧ ∧ ⋀_x ⟦u ≤ x⟧` for every `a`.
    pub fn verify_idm(&self, xs: &[usize], us: &[usize]) -> bool {
        let e = self.e();
        let below = |a: usize| e.meet_all(xs.iter().map(|&x| self.m.bv(a, x)));
        let coeff: Vec<(usize, usize)> = us.iter().map(|&u| (u, below(u))).collect();
        (0..self.m.len()).all(|a| e.le(below(a), e.join_all(coeff.iter().map(|&(u, c)| e.meet(self.m.bv(a, u), c)))))
    }

    /// The whole carrier with index `|P| - 1`.
    pub fn idj_sample(&self, xs: &[usize]) -> Sample {
        Sample {
            kind: SampleKind::Idj,
            target: xs.to_vec(),
            members: (0..self.m.len()).collect(),
            index: Some(self.m.len().saturating_sub(1)),
        }
    }

    /// `⟦a ∈ Id_n(X, U)⟧ = ⟦a ∈ Id_{n+1}(X, Y)⟧` for every `a` and every
    /// `Y ⊇ U` inside the carrier.
    pub fn verify_idj(&mut self, xs: &[usize], us: &[usize], n: usize) -> bool {
        let base = self.idn_vec(xs, us, n);
        let u = BitSet::from_elems(self.m.len(), us.iter().copied());
        let rest: Vec<usize> = (0..self.m.len()).filter(|&y| !u.contains(y)).collect();
        assert!(rest.len() <= SUBSET_ENUMERATION_LIMIT, "too many supersets to verify");
        let mut extras = nonempty_subsets(&rest);
        extras.insert(0, Vec::new());
        extras.into_iter().all(|extra| {
            let ys = canonical(us.iter().copied().chain(extra).collect());
            self.idn_vec(xs, &ys, n + 1) == base
        })
    }
}

/// Greedily drop members while `verify` keeps succeeding.
pub fn minimize_sample(members: &[usize], mut verify: impl FnMut(&[usize]) -> bool) -> Vec<usize> {
    let mut cur = members.to_vec();
    let mut i = 0;
    while i < cur.len() {
        if cur.len() == 1 {
            break;
        }
        let mut trial = cur.clone();
        trial.remove(i);
        if verify(&trial) {
            cur = trial;
        } else {
            i += 1;
        }
    }
    cur
}

pub fn covers(m: &MeasuredPL, xs: &[usize], kind: Kind) -> Result<Cover> {
    match kind {
        Kind::Join => Calc::new(m).cover(xs),
        Kind::Meet => {
            let mut c = Calc::new(&m.dual()).cover(xs).map_err(|_| Error::EmptyDomain("meet"))?;
            c.kind = Kind::Meet;
            Ok(c)
        }
    }
}

/// Both operation domains are nonempty; for a finite carrier that makes
/// the whole domains covers.
pub fn is_finitely_covering(m: &MeasuredPL) -> bool {
    !m.pl.joins().is_empty() && !m.pl.meets().is_empty()
}

pub fn bv_join_eq(m: &MeasuredPL, a: usize, xs: &[usize]) -> Result<usize> {
    nonempty(xs)?;
    Ok(Calc::new(m).join_eq(a, xs))
}

pub fn bv_meet_eq(m: &MeasuredPL, a: usize, xs: &[usize]) -> Result<usize> {
    nonempty(xs)?;
    Ok(Calc::new(&m.dual()).join_eq(a, xs))
}

pub fn join_sample(m: &MeasuredPL, xs: &[usize]) -> Sample {
    Calc::new(m).join_sample(xs)
}

pub fn meet_sample(m: &MeasuredPL, xs: &[usize]) -> Sample {
    let mut s = Calc::new(&m.dual()).join_sample(xs);
    s.kind = SampleKind::Meet;
    s
}

/// `⟦a ≤ ⋁X⟧`
pub fn bv_le_join(m: &MeasuredPL, a: usize, xs: &[usize]) -> Result<usize> {
    nonempty(xs)?;
    Ok(Calc::new(m).le_join(a, xs))
}

/// `⟦⋀X ≤ a⟧`
pub fn bv_meet_le(m: &MeasuredPL, xs: &[usize], a: usize) -> Result<usize> {
    nonempty(xs)?;
    Ok(Calc::new(&m.dual()).le_join(a, xs))
}

pub fn idm_sample(m: &MeasuredPL, xs: &[usize]) -> Sample {
    Calc::new(m).idm_sample(xs)
}

pub fn film_sample(m: &MeasuredPL, xs: &[usize]) -> Sample {
    Sample { kind: SampleKind::Film, ..Calc::new(m).idm_sample(xs) }
}

pub fn verify_idm(m: &MeasuredPL, xs: &[usize], us: &[usize]) -> bool {
    Calc::new(m).verify_idm(xs, us)
}

pub fn verify_film(m: &MeasuredPL, xs: &[usize], us: &[usize]) -> bool {
    Calc::new(&m.dual()).verify_idm(xs, us)
}

/// `⟦a ∈ Id_n(X, U)⟧`
pub fn bv_in_idn(m: &MeasuredPL, a: usize, xs: &[usize], us: &[usize], n: usize) -> Result<usize> {
    nonempty(xs)?;
    nonempty(us)?;
    Ok(Calc::new(m).idn_vec(xs, us, n)[a])
}

/// `⟦a ∈ Fil_n(X, U)⟧`
pub fn bv_in_filn(m: &MeasuredPL, a: usize, xs: &[usize], us: &[usize], n: usize) -> Result<usize> {
    nonempty(xs)?;
    nonempty(us)?;
    Ok(Calc::new(&m.dual()).idn_vec(xs, us, n)[a])
}

pub fn idj_sample(m: &MeasuredPL, xs: &[usize]) -> Sample {
    Calc::new(m).idj_sample(xs)
}

pub fn filj_sample(m: &MeasuredPL, xs: &[usize]) -> Sample {
    Sample { kind: SampleKind::Filj, ..Calc::new(m).idj_sample(xs) }
}

pub fn verify_idj(m: &MeasuredPL, xs: &[usize], us: &[usize], n: usize) -> bool {
    Calc::new(m).verify_idj(xs, us, n)
}

pub fn verify_filj(m: &MeasuredPL, xs: &[usize], us: &[usize], n: usize) -> bool {
    Calc::new(&m.dual()).verify_idj(xs, us, n)
}

/// `⟦a ∈ Id(X)⟧`
pub fn bv_in_id(m: &MeasuredPL, a: usize, xs: &[usize]) -> Result<usize> {
    nonempty(xs)?;
    Ok(Calc::new(m).in_id(a, xs))
}

/// `⟦a ∈ Fil(X)⟧`
pub fn bv_in_fil(m: &MeasuredPL, a: usize, xs: &[usize]) -> Result<usize> {
    nonempty(xs)?;
    Ok(Calc::new(&m.dual()).in_id(a, xs))
}

/// Finitely covering, and the default samples verify for every pair
/// (`Id∧`, `Fil∧`) and every nonempty subset (`Id∨`, `Fil∨`).
pub fn is_balanced(m: &MeasuredPL) -> bool {
    if !is_finitely_covering(m) {
        return false;
    }
    let n = m.len();
    let all: Vec<usize> = (0..n).collect();
    for side in [m.clone(), m.dual()] {
        let mut c = Calc::new(&side);
        for a in 0..n {
            for b in a..n {
                if !c.verify_idm(&[a, b], &all) {
                    return false;
                }
            }
        }
        for xs in nonempty_subsets(&all) {
            let s = c.idj_sample(&xs);
            if !c.verify_idj(&xs, &s.members, s.index.unwrap_or(0)) {
                return false;
            }
        }
    }
    true
}

/// `P/G` with its projection.
#[derive(Clone, Debug)]
pub struct PrimeQuotient {
    pub pl: PartialLattice,
    pub proj: Vec<usize>,
}

impl PrimeQuotient {
    pub fn classes(&self, xs: &[usize]) -> Vec<usize> {
        canonical(xs.iter().map(|&x| self.proj[x]).collect())
    }
}

/// `P/G`: classes of `≡_G`, ordered by `⟦a ≤ b⟧ ∈ G`, with the joins and
/// meets of representatives.
pub fn quotient(m: &MeasuredPL, g: &PrimeFilter) -> PrimeQuotient {
    let (pl, proj) = quotient_by_preorder(&m.pl, |a, b| g.contains(m.bv(a, b)));
    PrimeQuotient { pl, proj }
}

/// What [`check_truth_lemmas`] covers.
#[derive(Clone, Debug)]
pub struct TruthOptions {
    /// Largest subset size used for `X` and `U`.
    pub max_subset: usize,
    /// Check `Id_n` and `Fil_n` for every `U`; otherwise only `U = P`.
    pub all_u: bool,
}

impl Default for TruthOptions {
    fn default() -> Self {
        TruthOptions { max_subset: 5, all_u: true }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TruthReport {
    pub checks: usize,
    pub failure: Option<String>,
}

impl TruthReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Compare every derived Boolean value with its classical counterpart in
/// `P/G`, for every prime filter `G`. Stops at the first disagreement.
pub fn check_truth_lemmas(m: &MeasuredPL, opts: &TruthOptions) -> TruthReport {
    let mut report = TruthReport::default();
    let n = m.len();
    let all: Vec<usize> = (0..n).collect();
    let subsets: Vec<Vec<usize>> = nonempty_subsets(&all).into_iter().filter(|s| s.len() <= opts.max_subset).collect();
    let us: Vec<Vec<usize>> = if opts.all_u { subsets.clone() } else { vec![all.clone()] };
    for (side, label) in [(m.clone(), "join"), (m.dual(), "meet")] {
        let mut c = Calc::new(&side);
        let filters = side.values().prime_filters();
        for g in &filters {
            let q = quotient(&side, g);
            for xs in &subsets {
                let xg = q.classes(xs);
                let sup = q.pl.join_of(&xg);
                let le_join = c.le_join_vec(xs);
                let idv = c.in_id_vec(xs);
                let cl_id = ideal_closure(&q.pl, &xg);
                for a in 0..n {
                    let ca = q.proj[a];
                    let checks = [
                        ("a = ⋁X", g.contains(c.join_eq(a, xs)), sup == Some(ca)),
                        ("a ≤ ⋁X", g.contains(le_join[a]), sup.is_some_and(|s| q.pl.le(ca, s))),
                        ("a ∈ Id(X)", g.contains(idv[a]), cl_id.contains(ca)),
                    ];
                    for (what, dv, classical) in checks {
                        report.checks += 1;
                        if dv != classical {
                            report.failure = Some(format!(
                                "{label} side, filter ↑{}, {what} with a = {}, X = {:?}: Boolean value says {dv}, quotient says {classical}",
                                side.values().name(g.generator()),
                                side.name(a),
                                xs
                            ));
                            return report;
                        }
                    }
                }
                for u in &us {
                    let levels = c.idn_levels(xs, u, n);
                    let ug = q.classes(u);
                    for (k, level) in levels.iter().enumerate() {
                        let classical = idn(&q.pl, &xg, &ug, k);
                        for a in 0..n {
                            report.checks += 1;
                            if g.contains(level[a]) != classical.contains(q.proj[a]) {
                                report.failure = Some(format!(
                                    "{label} side, filter ↑{}, a ∈ Id_{k}(X, U) with a = {}, X = {:?}, U = {:?}",
                                    side.values().name(g.generator()),
                                    side.name(a),
                                    xs,
                                    u
                                ));
                                return report;
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// The kernel `{(x, y) : ⟦x ≤ y⟧ = 1}` as a congruence.
pub fn kernel(m: &MeasuredPL) -> Congruence {
    let n = m.len();
    let top = m.values.top();
    let mut rel = BitRel::empty(n);
    for x in 0..n {
        for y in 0..n {
            if m.bv(x, y) == top {
                rel.set(x, y);
            }
        }
    }
    let c = cong_closure(&m.pl, rel.pairs().collect::<Vec<_>>());
    debug_assert_eq!(c.relation(), &rel, "the kernel of a valid table is already closed");
    c
}

/// Quotient by the kernel, with the induced table. The result is proper.
pub fn kernel_projection(m: &MeasuredPL) -> (MeasuredPL, Vec<usize>) {
    let k = kernel(m);
    let (pl, proj) = crate::partial::quotient_by_cong(&m.pl, &k);
    let reps: Vec<usize> = (0..pl.len()).map(|c| proj.iter().position(|&p| p == c).expect("class rep")).collect();
    let q = pl.len();
    let bv = (0..q * q).map(|i| m.bv(reps[i / q], reps[i % q])).collect();
    (MeasuredPL::from_parts_unchecked(pl, m.values.clone(), bv), proj)
}

fn same_values(a: &MeasuredPL, b: &MeasuredPL) -> Result<()> {
    if a.values != b.values {
        return Err(Error::ValueLatticeMismatch);
    }
    Ok(())
}

/// `⟦x ≤ y⟧ ≤ ⟦f(x) ≤ f(y)⟧` for all pairs.
pub fn is_uniform(src: &MeasuredPL, tgt: &MeasuredPL, map: &[usize]) -> Result<bool> {
    same_values(src, tgt)?;
    let e = &src.values;
    let n = src.len();
    Ok((0..n).all(|x| (0..n).all(|y| e.le(src.bv(x, y), tgt.bv(map[x], map[y])))))
}

/// An order embedding that preserves Boolean values exactly.
pub fn is_isometry(src: &MeasuredPL, tgt: &MeasuredPL, map: &[usize]) -> Result<bool> {
    same_values(src, tgt)?;
    let n = src.len();
    Ok((0..n).all(|x| {
        (0..n).all(|y| src.bv(x, y) == tgt.bv(map[x], map[y]) && src.pl.le(x, y) == tgt.pl.le(map[x], map[y]))
    }))
}

/// The map `P/G -> Q/G` induced by a uniform map.
pub fn induced_map(f: &[usize], src: &PrimeQuotient, tgt: &PrimeQuotient) -> Vec<usize> {
    (0..src.pl.len())
        .map(|c| {
            let x = src.proj.iter().position(|&p| p == c).expect("class rep");
            tgt.proj[f[x]]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{as_lattice, build_poset, FinitePoset};
    use crate::partial::validate_pl;

    fn d3() -> DistLattice {
        DistLattice::named_chain(&["0", "m", "1"])
    }

    /// 2-chain o < i over D = {0, m, 1} with φΘ⁺(i, o) = m.
    fn measured_two_chain() -> MeasuredPL {
        let pl = PartialLattice::from_lattice(&as_lattice(&FinitePoset::chain(&["o", "i"])).unwrap());
        MeasuredPL::from_phi_table(pl, &d3(), &[0, 0, 1, 0]).unwrap()
    }

    #[test]
    fn zero_table_is_valid() {
        let pl = PartialLattice::from_lattice(&as_lattice(&FinitePoset::chain(&["o", "x", "i"])).unwrap());
        let m = MeasuredPL::from_phi_table(pl, &d3(), &[0; 9]).unwrap();
        assert!((0..3).all(|x| (0..3).all(|y| m.bv(x, y) == m.values().top())));
    }

    #[test]
    fn measured_two_chain_values() {
        let m = measured_two_chain();
        assert_eq!(m.bv_eq(0, 1), 1);
        assert!(m.is_proper());
        assert_eq!(m.phi_of(&[]), m.values().top());
        assert_eq!(m.phi_of(&[(1, 0)]), 1);
    }

    #[test]
    fn join_clause_is_enforced() {
        let p = build_poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")]).unwrap();
        let pl = validate_pl(p, [(vec![1, 2], 3)], []).unwrap();
        let d = d3();
        let mut t = vec![0; 16];
        // φΘ⁺(1, 0) = m but φΘ⁺(p, 0) = φΘ⁺(q, 0) = 1.
        t[3 * 4] = 1;
        t[4] = 2;
        t[2 * 4] = 2;
        t[4 + 2] = 2;
        t[2 * 4 + 1] = 2;
        t[3 * 4 + 1] = 2;
        t[3 * 4 + 2] = 2;
        let e = MeasuredPL::from_phi_table(pl, &d, &t).unwrap_err();
        assert!(matches!(e, Error::AxiomViolation { .. }), "{e}");
    }

    #[test]
    fn derived_values_need_nonempty_arguments() {
        let m = measured_two_chain();
        assert!(matches!(m.bv_in(0, &[]), Err(Error::EmptyArgument)));
        assert_eq!(m.bv_subset(&[0, 1], &[0, 1]).unwrap(), m.values().top());
        assert!(matches!(bv_le_join(&m, 0, &[]), Err(Error::EmptyArgument)));
    }

    #[test]
    fn quotients_of_the_two_chain() {
        let m = measured_two_chain();
        let fs = m.values().prime_filters();
        // E = {1 > m > 0} reversed: E-order is 1 < m < 0 in D names, so
        // the generators are m (index 1) and 0 (index 0).
        let by_gen = |g: usize| fs.iter().find(|f| f.generator() == g).unwrap();
        assert_eq!(quotient(&m, by_gen(1)).pl.len(), 1);
        assert_eq!(quotient(&m, by_gen(0)).pl.len(), 2);
    }

    #[test]
    fn kernel_of_proper_and_trivial_tables() {
        let m = measured_two_chain();
        let (k, proj) = kernel_projection(&m);
        assert_eq!(proj, vec![0, 1]);
        assert_eq!(k.table(), m.table());
        let pl = m.pl().clone();
        let z = MeasuredPL::from_phi_table(pl, &d3(), &[0; 4]).unwrap();
        assert_eq!(kernel_projection(&z).0.len(), 1);
        assert!(is_uniform(&z, &kernel_projection(&z).0, &[0, 0]).unwrap());
    }

    #[test]
    fn lattice_samples() {
        let m = measured_two_chain();
        let mut c = Calc::new(&m);
        assert_eq!(c.join_eq(1, &[0, 1]), m.values().top());
        assert_eq!(c.le_join(0, &[0, 1]), m.bv(0, 1));
        assert!(c.verify_idm(&[0, 1], &[0]));
        assert!(c.verify_idj(&[0, 1], &[0, 1], 1));
        assert!(is_balanced(&m));
        let anti = PartialLattice::discrete(build_poset(&["a", "b"], &[] as &[(&str, &str)]).unwrap());
        let d = DistLattice::chain(2);
        let bare = MeasuredPL::from_phi_table(anti, &d, &[0, 1, 1, 0]).unwrap();
        assert!(!is_balanced(&bare));
        assert!(is_balanced(&bare.augment_singletons()));
    }

    #[test]
    fn truth_lemmas_on_the_two_chain() {
        let r = check_truth_lemmas(&measured_two_chain(), &TruthOptions::default());
        assert!(r.passed(), "{:?}", r.failure);
        assert!(r.checks > 0);
    }

    #[test]
    fn minimize_keeps_a_verified_sample() {
        let m = measured_two_chain();
        let c = Calc::new(&m);
        let u = minimize_sample(&[0, 1], |u| c.verify_idm(&[0, 1], u));
        assert_eq!(u, vec![0]);
    }
}
