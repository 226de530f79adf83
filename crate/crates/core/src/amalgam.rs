//! V-formations `K -> P, K -> Q`, their pushouts `P ⨿_K Q`, sample transfer
//! into the pushout, and the amalgamation pipeline built on the term
//! quotient.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::bitrel::{canonical, nonempty_subsets, BitRel};
use crate::error::{Error, Result};
use crate::measured::{is_isometry, kernel_projection, quotient, Calc, MeasuredPL, Sample, SampleKind};
use crate::order::{as_lattice, FinitePoset, PrimeFilter};
use crate::partial::{check_hom, validate_pl, PLHom, PartialLattice};
use crate::terms::{theorem_a, Caps, TermQuotient};

/// What a V-formation can be built from.
pub trait Structure: Clone {
    fn pl(&self) -> &PartialLattice;
    fn renamed(&self, names: Vec<String>) -> Result<Self>;
    /// The map must be an embedding (an isometry for measured structures).
    fn check_embedding(src: &Self, tgt: &Self, map: &[usize]) -> Result<()>;
}

fn check_pl_embedding(src: &PartialLattice, tgt: &PartialLattice, map: &[usize]) -> Result<()> {
    let h = PLHom::new(src, tgt, map.to_vec())?;
    if !h.is_embedding() {
        return Err(Error::NotAnEmbedding("the map does not reflect the order".into()));
    }
    Ok(())
}

impl Structure for PartialLattice {
    fn pl(&self) -> &PartialLattice {
        self
    }

    fn renamed(&self, names: Vec<String>) -> Result<Self> {
        PartialLattice::renamed(self, names)
    }

    fn check_embedding(src: &Self, tgt: &Self, map: &[usize]) -> Result<()> {
        check_pl_embedding(src, tgt, map)
    }
}

impl Structure for MeasuredPL {
    fn pl(&self) -> &PartialLattice {
        MeasuredPL::pl(self)
    }

    fn renamed(&self, names: Vec<String>) -> Result<Self> {
        MeasuredPL::renamed(self, names)
    }

    fn check_embedding(src: &Self, tgt: &Self, map: &[usize]) -> Result<()> {
        check_pl_embedding(src.pl(), tgt.pl(), map)?;
        if !is_isometry(src, tgt, map)? {
            return Err(Error::IsometryViolation("Boolean values are not preserved".into()));
        }
        Ok(())
    }
}

/// `f: K -> P`, `g: K -> Q` with `K` a lattice, given by index maps.
#[derive(Clone, Debug)]
pub struct VFormation<S> {
    pub k: S,
    pub p: S,
    pub q: S,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

/// New names for the elements of `P` and `Q`, by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    pub p: Vec<String>,
    pub q: Vec<String>,
}

impl<S: Structure> VFormation<S> {
    pub fn new(k: S, p: S, q: S, f: Vec<usize>, g: Vec<usize>) -> Result<Self> {
        as_lattice(k.pl().poset())?;
        S::check_embedding(&k, &p, &f)?;
        S::check_embedding(&k, &q, &g)?;
        Ok(VFormation { k, p, q, f, g })
    }

    /// `f` and `g` keep names and the only names `P` and `Q` share are
    /// those of `K`.
    pub fn is_standard(&self) -> bool {
        let (k, p, q) = (self.k.pl(), self.p.pl(), self.q.pl());
        let kept = (0..k.len()).all(|i| p.name(self.f[i]) == k.name(i) && q.name(self.g[i]) == k.name(i));
        let knames: HashSet<&str> = (0..k.len()).map(|i| k.name(i)).collect();
        let pnames: HashSet<&str> = (0..p.len()).map(|i| p.name(i)).collect();
        kept && (0..q.len()).map(|i| q.name(i)).filter(|n| pnames.contains(n)).all(|n| knames.contains(n))
    }

    /// Rename so that `K = P ∩ Q` by names: images of `K` take `K`'s
    /// names, and any other name that `P` and `Q` share, or that collides
    /// with a name of `K`, gets `_p` (in `P`) or `_q` (in `Q`) appended.
    pub fn standardize(&self) -> Result<(VFormation<S>, Renaming)> {
        let (k, p, q) = (self.k.pl(), self.p.pl(), self.q.pl());
        let knames: HashSet<String> = (0..k.len()).map(|i| k.name(i).to_string()).collect();
        let img = |map: &[usize], len: usize| {
            let mut v = vec![None; len];
            for (i, &x) in map.iter().enumerate() {
                v[x] = Some(i);
            }
            v
        };
        let (fi, gi) = (img(&self.f, p.len()), img(&self.g, q.len()));
        let other_names = |s: &PartialLattice, inv: &[Option<usize>]| -> HashSet<String> {
            (0..s.len()).filter(|&x| inv[x].is_none()).map(|x| s.name(x).to_string()).collect()
        };
        let (p_own, q_own) = (other_names(p, &fi), other_names(q, &gi));
        let mut used: HashSet<String> = knames.clone();
        let fresh = |base: &str, clash: bool, suffix: &str, used: &mut HashSet<String>| {
            let mut name = base.to_string();
            if clash {
                name.push_str(suffix);
            }
            while used.contains(&name) {
                name.push_str(suffix);
            }
            used.insert(name.clone());
            name
        };
        let mut pn = Vec::with_capacity(p.len());
        for x in 0..p.len() {
            pn.push(match fi[x] {
                Some(i) => k.name(i).to_string(),
                None => {
                    let n = p.name(x);
                    fresh(n, knames.contains(n) || q_own.contains(n), "_p", &mut used)
                }
            });
        }
        let mut qn = Vec::with_capacity(q.len());
        for y in 0..q.len() {
            qn.push(match gi[y] {
                Some(i) => k.name(i).to_string(),
                None => {
                    let n = q.name(y);
                    fresh(n, knames.contains(n) || p_own.contains(n), "_q", &mut used)
                }
            });
        }
        let v = VFormation {
            k: self.k.clone(),
            p: self.p.renamed(pn.clone())?,
            q: self.q.renamed(qn.clone())?,
            f: self.f.clone(),
            g: self.g.clone(),
        };
        debug_assert!(v.is_standard());
        Ok((v, Renaming { p: pn, q: qn }))
    }

    fn require_standard(&self) -> Result<()> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(Error::VerificationFailed("V-formation is not standard; standardize it first".into()))
        }
    }
}

/// `R = P ∪ Q` with the inclusions of `P` and `Q`.
#[derive(Clone, Debug)]
pub struct Pushout<S> {
    pub r: S,
    pub inc_p: Vec<usize>,
    pub inc_q: Vec<usize>,
}

impl<S> Pushout<S> {
    /// The element of `P` at `x`, if `x` comes from `P`.
    pub fn from_p(&self, x: usize) -> Option<usize> {
        self.inc_p.iter().position(|&r| r == x)
    }

    pub fn from_q(&self, x: usize) -> Option<usize> {
        self.inc_q.iter().position(|&r| r == x)
    }
}

/// Carrier `P` followed by `Q \ K`; `inc_q` sends `K` through `P`.
fn union_carrier(p: &PartialLattice, q: &PartialLattice, f: &[usize], g: &[usize]) -> (Vec<String>, Vec<usize>, Vec<usize>) {
    let inc_p: Vec<usize> = (0..p.len()).collect();
    let mut inc_q = vec![usize::MAX; q.len()];
    for (i, &y) in g.iter().enumerate() {
        inc_q[y] = f[i];
    }
    let mut names: Vec<String> = p.poset().names().to_vec();
    for (y, slot) in inc_q.iter_mut().enumerate() {
        if *slot == usize::MAX {
            *slot = names.len();
            names.push(q.name(y).to_string());
        }
    }
    (names, inc_p, inc_q)
}

fn pushout_parts<S: Structure>(v: &VFormation<S>) -> Result<Pushout<PartialLattice>> {
    v.require_standard()?;
    let (k, p, q) = (v.k.pl(), v.p.pl(), v.q.pl());
    let (names, inc_p, inc_q) = union_carrier(p, q, &v.f, &v.g);
    let n = names.len();
    let from_p: Vec<Option<usize>> = {
        let mut w = vec![None; n];
        for (x, &r) in inc_p.iter().enumerate() {
            w[r] = Some(x);
        }
        w
    };
    let from_q: Vec<Option<usize>> = {
        let mut w = vec![None; n];
        for (y, &r) in inc_q.iter().enumerate() {
            w[r] = Some(y);
        }
        w
    };
    let mut rel = BitRel::empty(n);
    for a in 0..n {
        for b in 0..n {
            let le = match ((from_p[a], from_q[a]), (from_p[b], from_q[b])) {
                ((Some(x), _), (Some(y), _)) if p.le(x, y) => true,
                ((_, Some(x)), (_, Some(y))) if q.le(x, y) => true,
                ((Some(x), _), (_, Some(y))) => (0..k.len()).any(|z| p.le(x, v.f[z]) && q.le(v.g[z], y)),
                ((_, Some(x)), (Some(y), _)) => (0..k.len()).any(|z| q.le(x, v.g[z]) && p.le(v.f[z], y)),
                _ => false,
            };
            if le {
                rel.set(a, b);
            }
        }
    }
    let poset = FinitePoset::from_relation(names, rel)?;
    let lift = |src: &BTreeMap<Vec<usize>, usize>, inc: &[usize]| -> Vec<(Vec<usize>, usize)> {
        src.iter().map(|(xs, &a)| (xs.iter().map(|&x| inc[x]).collect(), inc[a])).collect()
    };
    let joins = lift(p.joins(), &inc_p).into_iter().chain(lift(q.joins(), &inc_q));
    let meets = lift(p.meets(), &inc_p).into_iter().chain(lift(q.meets(), &inc_q));
    let r = validate_pl(poset, joins, meets)?;
    Ok(Pushout { r, inc_p, inc_q })
}

/// `P ⨿_K Q` for a standard V-formation of partial lattices.
pub fn pushout_pl(v: &VFormation<PartialLattice>) -> Result<Pushout<PartialLattice>> {
    pushout_parts(v)
}

/// `P ⨿_K Q` for a standard V-formation of measured partial lattices, with
/// `⟦x ≤ y⟧ = ⋁_{z ∈ K} ⟦x ≤ z⟧ ∧ ⟦z ≤ y⟧` across the two sides.
pub fn pushout_measured(v: &VFormation<MeasuredPL>) -> Result<Pushout<MeasuredPL>> {
    if v.p.values() != v.k.values() || v.q.values() != v.k.values() {
        return Err(Error::ValueLatticeMismatch);
    }
    MeasuredPL::check_embedding(&v.k, &v.p, &v.f)?;
    MeasuredPL::check_embedding(&v.k, &v.q, &v.g)?;
    let Pushout { r, inc_p, inc_q } = pushout_parts(v)?;
    let n = r.len();
    let e = v.k.values();
    let mut from_p = vec![None; n];
    let mut from_q = vec![None; n];
    for (x, &i) in inc_p.iter().enumerate() {
        from_p[i] = Some(x);
    }
    for (y, &i) in inc_q.iter().enumerate() {
        from_q[i] = Some(y);
    }
    let kz = v.k.len();
    let mut bv = vec![e.bot(); n * n];
    for a in 0..n {
        for b in 0..n {
            bv[a * n + b] = match ((from_p[a], from_q[a]), (from_p[b], from_q[b])) {
                ((Some(x), _), (Some(y), _)) => v.p.bv(x, y),
                ((_, Some(x)), (_, Some(y))) => v.q.bv(x, y),
                ((Some(x), _), (_, Some(y))) => {
                    e.join_all((0..kz).map(|z| e.meet(v.p.bv(x, v.f[z]), v.q.bv(v.g[z], y))))
                }
                ((_, Some(x)), (Some(y), _)) => {
                    e.join_all((0..kz).map(|z| e.meet(v.q.bv(x, v.g[z]), v.p.bv(v.f[z], y))))
                }
                _ => unreachable!("every element comes from P or Q"),
            };
        }
    }
    let r = MeasuredPL::new(r, e.clone(), bv)?;
    Ok(Pushout { r, inc_p, inc_q })
}

/// The unique map `R -> S` restricting to `hp` on `P` and `hq` on `Q`, if
/// it is a homomorphism of partial lattices.
pub fn mediating_map(push: &Pushout<PartialLattice>, s: &PartialLattice, hp: &[usize], hq: &[usize]) -> Option<Vec<usize>> {
    let mut h = vec![usize::MAX; push.r.len()];
    for (x, &r) in push.inc_p.iter().enumerate() {
        h[r] = hp[x];
    }
    for (y, &r) in push.inc_q.iter().enumerate() {
        if h[r] != usize::MAX && h[r] != hq[y] {
            return None;
        }
        h[r] = hq[y];
    }
    check_hom(&push.r, s, &h).ok().map(|_| h)
}

/// Whether `f` is an isomorphism of partial lattices, order and
/// operations included.
fn is_pl_isomorphism(a: &PartialLattice, b: &PartialLattice, f: &[usize]) -> bool {
    let n = a.len();
    if b.len() != n || f.iter().collect::<BTreeSet<_>>().len() != n || f.iter().any(|&y| y >= n) {
        return false;
    }
    if !(0..n).all(|x| (0..n).all(|y| a.le(x, y) == b.le(f[x], f[y]))) {
        return false;
    }
    let image = |m: &BTreeMap<Vec<usize>, usize>| -> BTreeMap<Vec<usize>, usize> {
        m.iter().map(|(xs, &v)| (canonical(xs.iter().map(|&x| f[x]).collect()), f[v])).collect()
    };
    &image(a.joins()) == b.joins() && &image(a.meets()) == b.meets()
}

/// `R/G ≅ P/G ⨿_{K/G} Q/G` through the natural map.
pub fn check_pushout_quotient(v: &VFormation<MeasuredPL>, push: &Pushout<MeasuredPL>, g: &PrimeFilter) -> bool {
    let (kq, pq, qq, rq) = (quotient(&v.k, g), quotient(&v.p, g), quotient(&v.q, g), quotient(&push.r, g));
    let induced = |map: &[usize], src: &crate::measured::PrimeQuotient, tgt: &crate::measured::PrimeQuotient| {
        crate::measured::induced_map(map, src, tgt)
    };
    let Ok(vg) = VFormation::new(kq.pl.clone(), pq.pl.clone(), qq.pl.clone(), induced(&v.f, &kq, &pq), induced(&v.g, &kq, &qq))
    else {
        return false;
    };
    let Ok((vs, _)) = vg.standardize() else { return false };
    let Ok(small) = pushout_pl(&vs) else { return false };
    let to_r_p = induced(&push.inc_p, &pq, &rq);
    let to_r_q = induced(&push.inc_q, &qq, &rq);
    let mut nat = vec![usize::MAX; small.r.len()];
    for (x, &i) in small.inc_p.iter().enumerate() {
        nat[i] = to_r_p[x];
    }
    for (y, &i) in small.inc_q.iter().enumerate() {
        if nat[i] != usize::MAX && nat[i] != to_r_q[y] {
            return false;
        }
        nat[i] = to_r_q[y];
    }
    is_pl_isomorphism(&small.r, &rq.pl, &nat)
}

/// A sample found by transfer; `fell_back` marks the (never expected) case
/// where the constructed sample failed verification and the whole carrier
/// was returned instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub sample: Sample,
    pub fell_back: bool,
    /// For (Id∨)/(Fil∨) transfers, the common index `m` on the two sides.
    pub common_index: Option<usize>,
}

/// One side of a measured V-formation and its pushout, possibly dualized.
struct Sides {
    k: MeasuredPL,
    p: MeasuredPL,
    q: MeasuredPL,
    r: MeasuredPL,
    f: Vec<usize>,
    g: Vec<usize>,
    inc_p: Vec<usize>,
    inc_q: Vec<usize>,
}

impl Sides {
    fn new(v: &VFormation<MeasuredPL>, push: &Pushout<MeasuredPL>, dual: bool) -> Sides {
        let d = |m: &MeasuredPL| if dual { m.dual() } else { m.clone() };
        Sides {
            k: d(&v.k),
            p: d(&v.p),
            q: d(&v.q),
            r: d(&push.r),
            f: v.f.clone(),
            g: v.g.clone(),
            inc_p: push.inc_p.clone(),
            inc_q: push.inc_q.clone(),
        }
    }

    fn pre(inc: &[usize], x: usize) -> Option<usize> {
        inc.iter().position(|&r| r == x)
    }

    /// A small (Id∧)-sample of `xs` in `m`.
    fn idm_in(m: &MeasuredPL, xs: &[usize]) -> Vec<usize> {
        let c = Calc::new(m);
        let all: Vec<usize> = (0..m.len()).collect();
        crate::measured::minimize_sample(&all, |us| c.verify_idm(xs, us))
    }

    fn idm(&self, a: usize, b: usize) -> Vec<usize> {
        let (pa, pb) = (Self::pre(&self.inc_p, a), Self::pre(&self.inc_p, b));
        let (qa, qb) = (Self::pre(&self.inc_q, a), Self::pre(&self.inc_q, b));
        let map = |inc: &[usize], us: Vec<usize>| -> Vec<usize> { us.into_iter().map(|u| inc[u]).collect() };
        let cross = |x: usize, y: usize| -> Vec<usize> {
            // x from P, y from Q: common samples of {x, z} and {y, z}, z ∈ K.
            let mut w = BTreeSet::new();
            for z in 0..self.k.len() {
                w.extend(map(&self.inc_p, Self::idm_in(&self.p, &canonical(vec![x, self.f[z]]))));
                w.extend(map(&self.inc_q, Self::idm_in(&self.q, &canonical(vec![y, self.g[z]]))));
            }
            w.into_iter().collect()
        };
        match (pa, pb, qa, qb) {
            (Some(x), Some(y), _, _) => map(&self.inc_p, Self::idm_in(&self.p, &canonical(vec![x, y]))),
            (_, _, Some(x), Some(y)) => map(&self.inc_q, Self::idm_in(&self.q, &canonical(vec![x, y]))),
            (Some(x), None, None, Some(y)) => cross(x, y),
            (None, Some(y), Some(x), None) => cross(y, x),
            _ => unreachable!("every element comes from P or Q"),
        }
    }

    /// A common (Id∨)-sample of all nonempty subsets of `xs ∪ K` in `m`
    /// (`kimg` is the image of `K`) and the least index that works for all.
    fn common_idj(m: &MeasuredPL, xs: &[usize], kimg: &[usize]) -> (Vec<usize>, usize) {
        let base = canonical(xs.iter().chain(kimg).copied().collect());
        let family = nonempty_subsets(&base);
        let mut c = Calc::new(m);
        let top_index = m.len().saturating_sub(1);
        let all: Vec<usize> = (0..m.len()).collect();
        let members =
            crate::measured::minimize_sample(&all, |us| family.iter().all(|s| c.verify_idj(s, us, top_index)));
        let index = (0..=top_index).find(|&n| family.iter().all(|s| c.verify_idj(s, &members, n))).unwrap_or(top_index);
        (members, index)
    }

    fn idj(&self, zs: &[usize]) -> (Vec<usize>, usize, usize) {
        let xs: Vec<usize> = zs.iter().filter_map(|&z| Self::pre(&self.inc_p, z)).collect();
        let ys: Vec<usize> = zs.iter().filter_map(|&z| Self::pre(&self.inc_q, z)).collect();
        let (xstar, mp) = Self::common_idj(&self.p, &xs, &self.f);
        let (ystar, mq) = Self::common_idj(&self.q, &ys, &self.g);
        let mut c = Calc::new(&self.p);
        let mut d = Calc::new(&self.q);
        let fam_p = nonempty_subsets(&canonical(xs.iter().chain(&self.f).copied().collect()));
        let fam_q = nonempty_subsets(&canonical(ys.iter().chain(&self.g).copied().collect()));
        let limit = self.p.len().max(self.q.len());
        let m = (mp.max(mq)..=limit)
            .find(|&n| {
                fam_p.iter().all(|s| c.verify_idj(s, &xstar, n)) && fam_q.iter().all(|s| d.verify_idj(s, &ystar, n))
            })
            .unwrap_or(limit);
        let h = self.k.pl().poset().height();
        let zstar: BTreeSet<usize> =
            xstar.iter().map(|&x| self.inc_p[x]).chain(ystar.iter().map(|&y| self.inc_q[y])).collect();
        (zstar.into_iter().collect(), (h + 2) * m + h + 1, m)
    }
}

fn transfer_idm_side(v: &VFormation<MeasuredPL>, push: &Pushout<MeasuredPL>, a: usize, b: usize, dual: bool) -> Transfer {
    let s = Sides::new(v, push, dual);
    let target = canonical(vec![a, b]);
    let members = s.idm(a, b);
    let kind = if dual { SampleKind::Film } else { SampleKind::Idm };
    let c = Calc::new(&s.r);
    if c.verify_idm(&target, &members) {
        Transfer { sample: Sample { kind, target, members, index: None }, fell_back: false, common_index: None }
    } else {
        let members = (0..s.r.len()).collect();
        Transfer { sample: Sample { kind, target, members, index: None }, fell_back: true, common_index: None }
    }
}

fn transfer_idj_side(v: &VFormation<MeasuredPL>, push: &Pushout<MeasuredPL>, zs: &[usize], dual: bool) -> Result<Transfer> {
    if zs.is_empty() {
        return Err(Error::EmptyArgument);
    }
    let s = Sides::new(v, push, dual);
    let target = canonical(zs.to_vec());
    let (members, k, m) = s.idj(&target);
    let kind = if dual { SampleKind::Filj } else { SampleKind::Idj };
    let mut c = Calc::new(&s.r);
    if c.verify_idj(&target, &members, k) {
        Ok(Transfer { sample: Sample { kind, target, members, index: Some(k) }, fell_back: false, common_index: Some(m) })
    } else {
        let fallback = c.idj_sample(&target);
        Ok(Transfer { sample: Sample { kind, ..fallback }, fell_back: true, common_index: Some(m) })
    }
}

/// An (Id∧)-sample of `{a, b}` in the pushout: a sample from `P` or `Q` if
/// both lie on one side, otherwise the union of common samples of
/// `{a, z}` in `P` and `{b, z}` in `Q` over `z ∈ K`.
pub fn transfer_idm_sample(v: &VFormation<MeasuredPL>, push: &Pushout<MeasuredPL>, a: usize, b: usize) -> Transfer {
    transfer_idm_side(v, push, a, b, false)
}

pub fn transfer_film_sample(v: &VFormation<MeasuredPL>, push: &Pushout<MeasuredPL>, a: usize, b: usize) -> Transfer {
    transfer_idm_side(v, push, a, b, true)
}

/// An (Id∨)-sample of `Z` in the pushout: `X* ∪ Y*`, where `X*` (`Y*`) is a
/// common sample in `P` (`Q`) of all subsets of `(Z ∩ P) ∪ K`
/// (`(Z ∩ Q) ∪ K`) with common index `m`, and index `(h+2)m + h + 1` for
/// `h` the height of `K`.
pub fn transfer_idj_sample(v: &VFormation<MeasuredPL>, push: &Pushout<MeasuredPL>, zs: &[usize]) -> Result<Transfer> {
    transfer_idj_side(v, push, zs, false)
}

pub fn transfer_filj_sample(v: &VFormation<MeasuredPL>, push: &Pushout<MeasuredPL>, zs: &[usize]) -> Result<Transfer> {
    transfer_idj_side(v, push, zs, true)
}

/// The amalgam: a proper measured lattice with maps from `P` and `Q`.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub lattice: TermQuotient,
    /// `P -> L` and `Q -> L`, as class indices.
    pub map_p: Vec<usize>,
    pub map_q: Vec<usize>,
    /// The pushout of the kernel-projected, standardized formation.
    pub pushout: Pushout<MeasuredPL>,
}

fn check_measured_hom(src: &MeasuredPL, tgt: &MeasuredPL, map: &[usize], what: &str) -> Result<()> {
    check_hom(src.pl(), tgt.pl(), map).map_err(|e| Error::NotAHomomorphism(format!("{what}: {e}")))?;
    if src.values() != tgt.values() {
        return Err(Error::ValueLatticeMismatch);
    }
    let n = src.len();
    for x in 0..n {
        for y in 0..n {
            if src.bv(x, y) != tgt.bv(map[x], map[y]) {
                return Err(Error::NotAHomomorphism(format!(
                    "{what}: ⟦{} ≤ {}⟧ is not preserved",
                    src.name(x),
                    src.name(y)
                )));
            }
        }
    }
    Ok(())
}

/// Amalgamate `f: K -> P` and `g: K -> Q` (homomorphisms of measured
/// partial lattices, `K` a finite lattice) into a proper measured lattice:
/// kernel-project all three, standardize, take the pushout and build its
/// term quotient.
pub fn theorem_b(k: &MeasuredPL, p: &MeasuredPL, q: &MeasuredPL, f: &[usize], g: &[usize], caps: Caps) -> Result<Amalgam> {
    if !k.pl().is_lattice() {
        let l = as_lattice(k.pl().poset())?;
        let n = l.len();
        let (x, y) = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| k.pl().join_of(&[x, y]).is_none() || k.pl().meet_of(&[x, y]).is_none())
            .expect("some pair lacks a listed operation");
        return Err(Error::NotALattice(k.name(x).into(), k.name(y).into(), "listed join and meet"));
    }
    check_measured_hom(k, p, f, "f")?;
    check_measured_hom(k, q, g, "g")?;
    let (k1, hk) = kernel_projection(k);
    let (p1, hp) = kernel_projection(p);
    let (q1, hq) = kernel_projection(q);
    let induced = |h_src: &[usize], h_tgt: &[usize], map: &[usize], len: usize| -> Vec<usize> {
        let mut out = vec![usize::MAX; len];
        for (a, &c) in h_src.iter().enumerate() {
            out[c] = h_tgt[map[a]];
        }
        out
    };
    let f1 = induced(&hk, &hp, f, k1.len());
    let g1 = induced(&hk, &hq, g, k1.len());
    let (v, _) = VFormation::new(k1, p1, q1, f1, g1)?.standardize()?;
    let push = pushout_measured(&v)?;
    let lattice = theorem_a(&push.r, caps)?;
    let map_p: Vec<usize> = hp.iter().map(|&c| lattice.leaf_class(push.inc_p[c])).collect();
    let map_q: Vec<usize> = hq.iter().map(|&c| lattice.leaf_class(push.inc_q[c])).collect();
    let out = Amalgam { lattice, map_p, map_q, pushout: push };
    verify_amalgam(k, p, q, f, g, &out)?;
    Ok(out)
}

/// Properness, `f̄ ∘ f = ḡ ∘ g`, and `ψ` restricting to the input tables.
pub fn verify_amalgam(k: &MeasuredPL, p: &MeasuredPL, q: &MeasuredPL, f: &[usize], g: &[usize], a: &Amalgam) -> Result<()> {
    let l = &a.lattice;
    if !l.is_proper() {
        return Err(Error::VerificationFailed("ψ does not isolate the order".into()));
    }
    if (0..k.len()).any(|z| a.map_p[f[z]] != a.map_q[g[z]]) {
        return Err(Error::VerificationFailed("the square does not commute".into()));
    }
    for (m, map, side) in [(p, &a.map_p, "P"), (q, &a.map_q, "Q")] {
        for x in 0..m.len() {
            for y in 0..m.len() {
                if l.psi(map[x], map[y]) != m.bv(x, y) {
                    return Err(Error::VerificationFailed(format!(
                        "ψ differs from the table of {side} at ({}, {})",
                        m.name(x),
                        m.name(y)
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{build_poset, DistLattice};

    fn lattice_pl(names: &[&str], covers: &[(&str, &str)]) -> PartialLattice {
        PartialLattice::from_lattice(&as_lattice(&build_poset(names, covers).unwrap()).unwrap())
    }

    fn indicator(pl: PartialLattice) -> MeasuredPL {
        let n = pl.len();
        let t: Vec<usize> = (0..n * n).map(|i| usize::from(!pl.le(i / n, i % n))).collect();
        MeasuredPL::from_phi_table(pl, &DistLattice::chain(2), &t).unwrap()
    }

    fn two_chain() -> PartialLattice {
        lattice_pl(&["0", "1"], &[("0", "1")])
    }

    fn three_chain(mid: &str) -> PartialLattice {
        lattice_pl(&["0", mid, "1"], &[("0", mid), (mid, "1")])
    }

    #[test]
    fn single_point_formation() {
        let k = lattice_pl(&["k"], &[]);
        let p = lattice_pl(&["k", "p"], &[("k", "p")]);
        let q = lattice_pl(&["k", "q"], &[("k", "q")]);
        let v = VFormation::new(k, p, q, vec![0], vec![0]).unwrap();
        assert!(v.is_standard());
        let r = pushout_pl(&v).unwrap();
        assert_eq!(r.r.len(), 3);
        let (pi, qi) = (r.r.idx("p").unwrap(), r.r.idx("q").unwrap());
        assert!(!r.r.le(pi, qi) && !r.r.le(qi, pi));
    }

    #[test]
    fn three_chains_over_two_chain() {
        let v = VFormation::new(two_chain(), three_chain("p"), three_chain("q"), vec![0, 2], vec![0, 2]).unwrap();
        let r = pushout_pl(&v).unwrap().r;
        assert_eq!(r.len(), 4);
        let (p, q) = (r.idx("p").unwrap(), r.idx("q").unwrap());
        assert!(!r.le(p, q) && !r.le(q, p));
        assert!(r.le(r.idx("0").unwrap(), q) && r.le(p, r.idx("1").unwrap()));
    }

    #[test]
    fn standardize_renames_clashes() {
        let k = lattice_pl(&["k"], &[]);
        let p = lattice_pl(&["a", "x"], &[("a", "x")]);
        let q = lattice_pl(&["b", "x"], &[("b", "x")]);
        let v = VFormation::new(k, p, q, vec![0], vec![0]).unwrap();
        assert!(!v.is_standard());
        let (s, ren) = v.standardize().unwrap();
        assert!(s.is_standard());
        assert_eq!(ren.p, vec!["k", "x_p"]);
        assert_eq!(ren.q, vec!["k", "x_q"]);
        let (again, ren2) = s.standardize().unwrap();
        assert_eq!(ren2.p, vec!["k", "x_p"]);
        assert!(again.is_standard());
    }

    #[test]
    fn pushout_of_identical_sides_is_k() {
        let k = indicator(three_chain("m"));
        let v = VFormation::new(k.clone(), k.clone(), k.clone(), vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        let r = pushout_measured(&v).unwrap();
        assert_eq!(r.r.len(), 3);
        assert_eq!(r.r.table(), k.table());
    }

    #[test]
    fn measured_pushout_is_indicator_of_order() {
        let v = VFormation::new(
            indicator(two_chain()),
            indicator(three_chain("p")),
            indicator(three_chain("q")),
            vec![0, 2],
            vec![0, 2],
        )
        .unwrap();
        let push = pushout_measured(&v).unwrap();
        let plain = pushout_parts(&v).unwrap().r;
        let n = plain.len();
        for x in 0..n {
            for y in 0..n {
                assert_eq!(push.r.bv(x, y) == 0, plain.le(x, y));
            }
        }
        for g in push.r.values().prime_filters() {
            assert!(check_pushout_quotient(&v, &push, &g));
        }
        let t = transfer_idm_sample(&v, &push, push.r.idx("p").unwrap(), push.r.idx("q").unwrap());
        assert!(!t.fell_back);
        let z = [push.r.idx("p").unwrap(), push.r.idx("q").unwrap()];
        let t = transfer_idj_sample(&v, &push, &z).unwrap();
        assert!(!t.fell_back);
        let t = transfer_filj_sample(&v, &push, &z).unwrap();
        assert!(!t.fell_back);
    }

    #[test]
    fn amalgam_of_two_three_chains() {
        let k = indicator(two_chain());
        let p = indicator(three_chain("p"));
        let q = indicator(three_chain("q"));
        let a = theorem_b(&k, &p, &q, &[0, 2], &[0, 2], Caps::default()).unwrap();
        // 0 < p ∧ q < p, q < p ∨ q < 1: neither operation is defined in R.
        assert_eq!(a.lattice.len(), 6);
    }

    #[test]
    fn theorem_b_rejects_non_homomorphisms() {
        let k = indicator(two_chain());
        let p = indicator(three_chain("p"));
        assert!(matches!(
            theorem_b(&k, &p, &p, &[2, 0], &[0, 2], Caps::default()),
            Err(Error::NotAHomomorphism(_))
        ));
    }
}
