//! Small measured partial lattices `K ↪ P` that add one missing element
//! (a relative complement, a perspectivity witness, an intermediate point),
//! `M₃[K]`, and single saturation steps that glue a gadget onto a lattice.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::measured::{is_isometry, MeasuredPL};
use crate::order::{as_lattice, build_poset, dualize, DistLattice, FinitePoset, Lattice};
use crate::partial::{
    check_hom, con_lattice, conc_table, theta, theta_plus, validate_pl, Congruence, PLHom, PartialLattice,
};
use crate::amalgam::{theorem_b, Amalgam};
use crate::terms::{Caps, TermQuotient};

/// A relation a gadget guarantees, in ambient indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Promise {
    Join(usize, usize, usize),
    Meet(usize, usize, usize),
    Below(usize, usize),
}

impl Promise {
    fn holds(&self, map: &[usize], l: &TermQuotient) -> bool {
        match *self {
            Promise::Join(x, y, z) => l.join(map[x], map[y]) == Some(map[z]),
            Promise::Meet(x, y, z) => l.meet(map[x], map[y]) == Some(map[z]),
            Promise::Below(x, y) => map[x] != map[y] && l.le(map[x], map[y]),
        }
    }

    fn describe(&self, m: &MeasuredPL) -> String {
        match *self {
            Promise::Join(x, y, z) => format!("{} ∨ {} = {}", m.name(x), m.name(y), m.name(z)),
            Promise::Meet(x, y, z) => format!("{} ∧ {} = {}", m.name(x), m.name(y), m.name(z)),
            Promise::Below(x, y) => format!("{} < {}", m.name(x), m.name(y)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Gadget {
    pub name: &'static str,
    /// The measured lattice `K`.
    pub base: MeasuredPL,
    /// The measured partial lattice `P`.
    pub ambient: MeasuredPL,
    /// `K -> P`.
    pub embedding: Vec<usize>,
    /// New elements of `P`, by name.
    pub designated: Vec<(String, usize)>,
    pub promises: Vec<Promise>,
}

impl Gadget {
    /// `K` gets the values pulled back from `P`, so the embedding is an
    /// isometry by construction; the homomorphism conditions are checked.
    fn new(
        name: &'static str,
        k: &Lattice,
        ambient: MeasuredPL,
        embedding: Vec<usize>,
        designated: &[&str],
        promises: Vec<Promise>,
    ) -> Result<Gadget> {
        let kpl = PartialLattice::from_lattice(k);
        check_hom(&kpl, ambient.pl(), &embedding)?;
        let n = k.len();
        let table = (0..n * n).map(|i| ambient.bv(embedding[i / n], embedding[i % n])).collect();
        let base = MeasuredPL::new(kpl, ambient.values().clone(), table)?;
        if !is_isometry(&base, &ambient, &embedding)? {
            return Err(Error::NotAnEmbedding("gadget base".into()));
        }
        let designated = designated
            .iter()
            .map(|s| Ok((s.to_string(), ambient.idx(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Gadget { name, base, ambient, embedding, designated, promises })
    }

    pub fn designated(&self, name: &str) -> Option<usize> {
        self.designated.iter().find(|(n, _)| n == name).map(|&(_, i)| i)
    }
}

fn check_value(d: &DistLattice, v: usize) -> Result<()> {
    if v >= d.len() {
        return Err(Error::UnknownElement(format!("value #{v}")));
    }
    Ok(())
}

fn lattice(names: &[&str], covers: &[(&str, &str)]) -> Lattice {
    as_lattice(&build_poset(names, covers).expect("fixed order")).expect("fixed lattice")
}

fn chain(names: &[&str]) -> Lattice {
    as_lattice(&FinitePoset::chain(names)).expect("chain")
}

/// `K = {a < b < c}` inside the square `P` with atoms `b, t`:
/// `μΘ(a,b) = μΘ(t,c) = ab`, `μΘ(a,t) = μΘ(b,c) = bc`.
pub fn relcomp_gadget(d: &DistLattice, ab: usize, bc: usize) -> Result<Gadget> {
    check_value(d, ab)?;
    check_value(d, bc)?;
    let p = lattice(&["a", "b", "c", "t"], &[("a", "b"), ("b", "c"), ("a", "t"), ("t", "c")]);
    let pl = PartialLattice::from_lattice(&p);
    let gens = vec![(theta(&pl, 0, 1), ab), (theta(&pl, 0, 3), bc)];
    let ambient = MeasuredPL::from_generators(pl, d, &gens)?;
    let promises = vec![Promise::Meet(1, 3, 0), Promise::Join(1, 3, 2)];
    Gadget::new("relcomp", &chain(&["a", "b", "c"]), ambient, vec![0, 1, 2], &["t"], promises)
}

/// The six-element lattice `0 < w < u, v < s < 1` with `w = u ∧ v` and
/// `s = u ∨ v`.
pub fn persp_base() -> Lattice {
    lattice(
        &["0", "w", "u", "v", "s", "1"],
        &[("0", "w"), ("w", "u"), ("w", "v"), ("u", "s"), ("v", "s"), ("s", "1")],
    )
}

/// `K ∪ {x}` with `0 < x < 1`, `x ∨ u = x ∨ v = 1`, `x ∧ u = x ∧ v = 0`.
pub fn persp_partial_lattice() -> PartialLattice {
    let k = persp_base();
    let kp = PartialLattice::from_lattice(&k);
    let mut names: Vec<&str> = k.poset().names().iter().map(String::as_str).collect();
    names.push("x");
    let mut le: Vec<(&str, &str)> = k.poset().covers().iter().map(|&(a, b)| (k.name(a), k.name(b))).collect();
    le.extend([("0", "x"), ("x", "1")]);
    let poset = build_poset(&names, &le).expect("fixed order");
    let (z, u, v, one, x) = (0, 2, 3, 5, 6);
    let joins = kp.joins().clone().into_iter().chain([(vec![x], x), (vec![x, u], one), (vec![x, v], one)]);
    let meets = kp.meets().clone().into_iter().chain([(vec![x], x), (vec![x, u], z), (vec![x, v], z)]);
    validate_pl(poset, joins, meets).expect("fixed partial lattice")
}

/// The generating congruences `ξ = Θ(0,w)`, `η = Θ(s,1)`, `α = Θ⁺(u,v)`,
/// `β = Θ⁺(v,u)` of the perspectivity partial lattice.
pub fn persp_generators(pl: &PartialLattice) -> [Congruence; 4] {
    [theta(pl, 0, 1), theta(pl, 4, 5), theta_plus(pl, 2, 3), theta_plus(pl, 3, 2)]
}

/// The perspectivity gadget. The four values must satisfy
/// `ξ ∨ α = ξ ∨ β` and `η ∨ α = η ∨ β` in `d`.
pub fn persp_gadget(d: &DistLattice, xi: usize, eta: usize, alpha: usize, beta: usize) -> Result<Gadget> {
    for v in [xi, eta, alpha, beta] {
        check_value(d, v)?;
    }
    if d.join(xi, alpha) != d.join(xi, beta) {
        return Err(Error::RelationViolation("ξ ∨ α ≠ ξ ∨ β".into()));
    }
    if d.join(eta, alpha) != d.join(eta, beta) {
        return Err(Error::RelationViolation("η ∨ α ≠ η ∨ β".into()));
    }
    let pl = persp_partial_lattice();
    let gens: Vec<(Congruence, usize)> = persp_generators(&pl).into_iter().zip([xi, eta, alpha, beta]).collect();
    let ambient = MeasuredPL::from_generators(pl, d, &gens)?;
    let (z, u, v, one, x) = (0, 2, 3, 5, 6);
    let promises = vec![
        Promise::Meet(x, u, z),
        Promise::Meet(x, v, z),
        Promise::Join(x, u, one),
        Promise::Join(x, v, one),
    ];
    Gadget::new("persp", &persp_base(), ambient, (0..6).collect(), &["x"], promises)
}

/// The congruence lattice of the perspectivity partial lattice as drawn:
/// `α, β < α∨β`, `ξ, α∨β < ξ̄`, `η, α∨β < η̄`, `ξ, η < ξ∨η`.
pub fn persp_con_figure() -> FinitePoset {
    build_poset(
        &["0", "alpha", "beta", "xi", "eta", "alpha_beta", "xi_bar", "eta_bar", "xi_eta", "1"],
        &[
            ("0", "alpha"),
            ("0", "beta"),
            ("0", "xi"),
            ("0", "eta"),
            ("alpha", "alpha_beta"),
            ("beta", "alpha_beta"),
            ("alpha_beta", "xi_bar"),
            ("alpha_beta", "eta_bar"),
            ("xi", "xi_bar"),
            ("xi", "xi_eta"),
            ("eta", "eta_bar"),
            ("eta", "xi_eta"),
            ("xi_bar", "1"),
            ("eta_bar", "1"),
            ("xi_eta", "1"),
        ],
    )
    .expect("fixed figure")
}

/// `P = {o < x < i}` with `μΘ(o,x) = alpha`, `μΘ(x,i) = beta`, over
/// `K = {o < i}` (whose value is `alpha ∨ beta`).
pub fn chain3_gadget(d: &DistLattice, alpha: usize, beta: usize) -> Result<Gadget> {
    check_value(d, alpha)?;
    check_value(d, beta)?;
    let pl = PartialLattice::from_lattice(&chain(&["o", "x", "i"]));
    let gens = vec![(theta(&pl, 0, 1), alpha), (theta(&pl, 1, 2), beta)];
    let ambient = MeasuredPL::from_generators(pl, d, &gens)?;
    let promises = vec![Promise::Below(0, 1), Promise::Below(1, 2)];
    Gadget::new("chain3", &chain(&["o", "i"]), ambient, vec![0, 2], &["x"], promises)
}

/// `M₃[K]`: triples whose pairwise meets agree, ordered componentwise.
#[derive(Clone, Debug)]
pub struct M3 {
    pub lattice: Lattice,
    pub triples: Vec<[usize; 3]>,
    /// `x ↦ ⟨x, x, x⟩`.
    pub diagonal: Vec<usize>,
}

impl M3 {
    pub fn index_of(&self, t: [usize; 3]) -> Option<usize> {
        self.triples.iter().position(|&s| s == t)
    }
}

pub fn m3(k: &Lattice) -> Result<M3> {
    let n = k.len();
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let m = k.meet(x, y);
                if m == k.meet(x, z) && m == k.meet(y, z) {
                    triples.push([x, y, z]);
                }
            }
        }
    }
    let names: Vec<String> =
        triples.iter().map(|t| format!("{}_{}_{}", k.name(t[0]), k.name(t[1]), k.name(t[2]))).collect();
    let mut rel = crate::bitrel::BitRel::empty(triples.len());
    for (i, s) in triples.iter().enumerate() {
        for (j, t) in triples.iter().enumerate() {
            if (0..3).all(|c| k.le(s[c], t[c])) {
                rel.set(i, j);
            }
        }
    }
    let lattice = as_lattice(&FinitePoset::from_relation(names, rel)?)?;
    let diagonal = (0..n)
        .map(|x| triples.iter().position(|&t| t == [x, x, x]).expect("diagonal triple"))
        .collect();
    Ok(M3 { lattice, triples, diagonal })
}

/// Whether `Con_c f` is an isomorphism.
pub fn is_congruence_preserving(src: &PartialLattice, tgt: &PartialLattice, map: &[usize]) -> Result<bool> {
    let f = PLHom::new(src, tgt, map.to_vec())?;
    let (cs, ct) = (con_lattice(src)?, con_lattice(tgt)?);
    if cs.len() != ct.len() {
        return Ok(false);
    }
    let t = conc_table(&f, &cs, &ct);
    let distinct: HashSet<usize> = t.iter().copied().collect();
    let reflects = (0..cs.len())
        .all(|i| (0..cs.len()).all(|j| ct.poset().le(t[i], t[j]) == cs.poset().le(i, j)));
    Ok(distinct.len() == t.len() && reflects)
}

/// Every element of the target lies between two elements of the image.
pub fn is_internal(tgt: &PartialLattice, map: &[usize]) -> bool {
    (0..tgt.len()).all(|y| map.iter().any(|&a| tgt.le(a, y)) && map.iter().any(|&b| tgt.le(y, b)))
}

/// `M₃[K]` measured by `λ ∘ (Con_c j)⁻¹`, `j` the diagonal.
pub fn m3_gadget(k: &MeasuredPL) -> Result<Gadget> {
    let kl = k.pl().to_lattice()?;
    let m = m3(&kl)?;
    let ppl = PartialLattice::from_lattice(&m.lattice);
    let d = dualize(k.values());
    let (n, np) = (k.len(), m.lattice.len());
    let mut t = vec![d.bot(); np * np];
    for x in 0..np {
        for y in 0..np {
            let th = theta_plus(&ppl, x, y);
            let pulled = (0..n * n).filter(|&i| th.le(m.diagonal[i / n], m.diagonal[i % n]));
            t[x * np + y] = d.join_all(pulled.map(|i| k.bv(i / n, i % n)));
        }
    }
    let ambient = MeasuredPL::from_phi_table(ppl, &d, &t)?;
    Gadget::new("m3", &kl, ambient, m.diagonal, &[], Vec::new())
}

/// `a₀ = ⟨a,o,o⟩`, `a₁ = ⟨o,a,o⟩`, `b₀ = ⟨b,o,o⟩`, `b₁ = ⟨o,b,o⟩`, with the
/// decomposition properties checked in `M₃[K]`:
/// `j(a) = a₀ ⊕ a₁`, `j(b) = b₀ ⊕ b₁`, `Θ(o,a₀) = Θ(o,a₁) = Θ(o,a)` (and for
/// `b`), and `Θ(a_l ∨ b_l, a ∨ b) = Θ(o, a ∨ b)`.
pub fn decomp_elements(m: &M3, k: &Lattice, o: usize, i: usize, a: usize, b: usize) -> Result<[usize; 4]> {
    if !(k.le(o, a) && k.le(o, b) && k.le(a, i) && k.le(b, i)) {
        return Err(Error::VerificationFailed("need o ≤ a, b ≤ i".into()));
    }
    let at = |t: [usize; 3]| m.index_of(t).ok_or_else(|| Error::VerificationFailed("triple outside M₃[K]".into()));
    let out = [at([a, o, o])?, at([o, a, o])?, at([b, o, o])?, at([o, b, o])?];
    let l = &m.lattice;
    let pl = PartialLattice::from_lattice(l);
    let j = &m.diagonal;
    let fail = |what: &str| Err(Error::VerificationFailed(format!("decomposition: {what}")));
    for (x0, x1, x) in [(out[0], out[1], a), (out[2], out[3], b)] {
        if l.meet(x0, x1) != j[o] || l.join(x0, x1) != j[x] {
            return fail("not a direct sum");
        }
        let whole = theta(&pl, j[o], j[x]);
        if theta(&pl, j[o], x0) != whole || theta(&pl, j[o], x1) != whole {
            return fail("summand congruences differ");
        }
    }
    let ab = k.join(a, b);
    let whole = theta(&pl, j[o], j[ab]);
    for (x, y) in [(out[0], out[2]), (out[1], out[3])] {
        if theta(&pl, l.join(x, y), j[ab]) != whole {
            return fail("upper interval congruence differs");
        }
    }
    Ok(out)
}

/// The result of gluing a gadget onto `L`.
#[derive(Clone, Debug)]
pub struct Step {
    pub amalgam: Amalgam,
    /// Classes of the gadget's designated elements.
    pub designated: Vec<(String, usize)>,
}

impl Step {
    pub fn lattice(&self) -> &TermQuotient {
        &self.amalgam.lattice
    }

    /// The extension as a measured lattice. Old elements keep their names,
    /// designated elements get `suffix` appended, the rest are `n<suffix>_<k>`.
    pub fn extension(&self, l: &MeasuredPL, suffix: &str) -> Result<MeasuredPL> {
        let q = &self.amalgam.lattice;
        let mut names: Vec<Option<String>> = vec![None; q.len()];
        for x in 0..l.len() {
            names[self.amalgam.map_q[x]] = Some(l.name(x).to_string());
        }
        let mut used: HashSet<String> = names.iter().flatten().cloned().collect();
        let fresh = |base: String, used: &mut HashSet<String>| {
            let mut s = base;
            while used.contains(&s) {
                s.push('_');
            }
            used.insert(s.clone());
            s
        };
        for (n, c) in &self.designated {
            if names[*c].is_none() {
                names[*c] = Some(fresh(format!("{n}{suffix}"), &mut used));
            }
        }
        let mut k = 0;
        for slot in names.iter_mut().filter(|s| s.is_none()) {
            *slot = Some(fresh(format!("n{suffix}_{k}"), &mut used));
            k += 1;
        }
        q.to_measured()?.renamed(names.into_iter().flatten().collect())
    }
}

/// One amalgamation of `K -> P` (the gadget) with `f: K -> L`, followed by a
/// check of the gadget's promises and of the `L`-side isometry.
pub fn saturation_step(l: &MeasuredPL, g: &Gadget, f: &[usize], caps: Caps) -> Result<Step> {
    if !l.pl().is_lattice() {
        return Err(Error::VerificationFailed("L must be a lattice".into()));
    }
    if !l.is_proper() {
        return Err(Error::VerificationFailed("L must be proper".into()));
    }
    let amalgam = theorem_b(&g.base, &g.ambient, l, &g.embedding, f, caps)?;
    let lat = &amalgam.lattice;
    for p in &g.promises {
        if !p.holds(&amalgam.map_p, lat) {
            return Err(Error::VerificationFailed(format!("{} gadget: {} fails", g.name, p.describe(&g.ambient))));
        }
    }
    let n = l.len();
    for x in 0..n {
        for y in 0..n {
            let (a, b) = (amalgam.map_q[x], amalgam.map_q[y]);
            if lat.psi(a, b) != l.bv(x, y) || lat.le(a, b) != l.pl().le(x, y) {
                return Err(Error::IsometryViolation(format!("{} -> {}", l.name(x), l.name(y))));
            }
        }
    }
    let designated = g.designated.iter().map(|(s, i)| (s.clone(), amalgam.map_p[*i])).collect();
    Ok(Step { amalgam, designated })
}

/// A gadget application for the bounded driver, by element names of the
/// current lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Application {
    /// A relative complement of `b` in `[a, c]`.
    RelComp { a: String, b: String, c: String },
    /// A witness that `a` and `b` are perspective in `[o, i]`.
    Persp { o: String, a: String, b: String, i: String },
    /// A point strictly between `o < i` with lower value `alpha` (an element
    /// name of `D`).
    Chain3 { o: String, i: String, alpha: String },
}

/// Instantiate an application against `L`: the gadget and the map `K -> L`.
pub fn instantiate(l: &MeasuredPL, app: &Application) -> Result<(Gadget, Vec<usize>)> {
    let d = dualize(l.values());
    let lat = l.pl().to_lattice()?;
    match app {
        Application::RelComp { a, b, c } => {
            let (a, b, c) = (l.idx(a)?, l.idx(b)?, l.idx(c)?);
            if !(lat.le(a, b) && lat.le(b, c)) {
                return Err(Error::VerificationFailed("need a ≤ b ≤ c".into()));
            }
            Ok((relcomp_gadget(&d, l.bv(b, a), l.bv(c, b))?, vec![a, b, c]))
        }
        Application::Persp { o, a, b, i } => {
            let (o, a, b, i) = (l.idx(o)?, l.idx(a)?, l.idx(b)?, l.idx(i)?);
            if !(lat.le(o, a) && lat.le(o, b) && lat.le(a, i) && lat.le(b, i)) {
                return Err(Error::VerificationFailed("need o ≤ a, b ≤ i".into()));
            }
            let (w, s) = (lat.meet(a, b), lat.join(a, b));
            let g = persp_gadget(&d, l.bv(w, o), l.bv(i, s), l.bv(a, b), l.bv(b, a))?;
            Ok((g, vec![o, w, a, b, s, i]))
        }
        Application::Chain3 { o, i, alpha } => {
            let (o, i) = (l.idx(o)?, l.idx(i)?);
            let alpha = d.idx(alpha)?;
            let beta = l.bv(i, o);
            if !lat.le(o, i) || !d.le(alpha, beta) {
                return Err(Error::VerificationFailed("need o ≤ i and alpha ≤ φΘ(o, i)".into()));
            }
            Ok((chain3_gadget(&d, alpha, beta)?, vec![o, i]))
        }
    }
}

/// Apply a list of gadgets in order; step `k` (from 1) names its new
/// elements with suffix `k`.
pub fn saturate(l: &MeasuredPL, apps: &[Application], caps: Caps) -> Result<(MeasuredPL, Vec<Step>)> {
    let mut cur = l.clone();
    let mut steps = Vec::new();
    for (k, app) in apps.iter().enumerate() {
        let (g, f) = instantiate(&cur, app)?;
        let step = saturation_step(&cur, &g, &f, caps)?;
        cur = step.extension(&cur, &(k + 1).to_string())?;
        steps.push(step);
    }
    Ok((cur, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::poset_isomorphism;

    fn d2() -> DistLattice {
        DistLattice::chain(2)
    }

    fn square_d() -> DistLattice {
        let p = build_poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")]).unwrap();
        crate::order::as_dist_lattice(&p).unwrap()
    }

    #[test]
    fn relcomp_shape() {
        let g = relcomp_gadget(&d2(), 1, 1).unwrap();
        assert_eq!(con_lattice(g.ambient.pl()).unwrap().len(), 4);
        assert!(is_internal(g.ambient.pl(), &g.embedding));
        assert!(g.ambient.is_proper());
        assert!(!relcomp_gadget(&d2(), 0, 1).unwrap().ambient.is_proper());
    }

    #[test]
    fn persp_congruences_match_figure() {
        let pl = persp_partial_lattice();
        let con = con_lattice(&pl).unwrap();
        assert_eq!(con.len(), 10);
        assert!(poset_isomorphism(con.poset(), &persp_con_figure()).is_some());
        let (u, v, s, one, x) = (2, 3, 4, 5, 6);
        assert_eq!(theta_plus(&pl, x, u), theta(&pl, u, one));
        assert_eq!(theta(&pl, u, one), theta(&pl, v, one));
        assert_eq!(theta_plus(&pl, x, s), theta(&pl, s, one));
    }

    #[test]
    fn persp_conc_surjective() {
        let pl = persp_partial_lattice();
        let k = PartialLattice::from_lattice(&persp_base());
        let j = PLHom::new(&k, &pl, (0..6).collect()).unwrap();
        let (ck, cp) = (con_lattice(&k).unwrap(), con_lattice(&pl).unwrap());
        let image: HashSet<usize> = conc_table(&j, &ck, &cp).into_iter().collect();
        assert_eq!(image.len(), cp.len());
    }

    #[test]
    fn persp_relations_checked() {
        let d = square_d();
        let (p, q, one) = (1, 2, 3);
        assert!(matches!(persp_gadget(&d, 0, 0, p, q), Err(Error::RelationViolation(_))));
        let g = persp_gadget(&d, one, one, p, q).unwrap();
        assert_eq!((g.ambient.bv(2, 3), g.ambient.bv(3, 2)), (p, q));
        assert_eq!(g.base.bv(2, 1), p);
        persp_gadget(&d, 0, 0, p, p).unwrap();
    }

    #[test]
    fn m3_of_two_chain_is_diamond() {
        let k = chain(&["0", "1"]);
        let m = m3(&k).unwrap();
        assert_eq!(m.lattice.len(), 5);
        let kp = PartialLattice::from_lattice(&k);
        let mp = PartialLattice::from_lattice(&m.lattice);
        assert!(is_congruence_preserving(&kp, &mp, &m.diagonal).unwrap());
        assert!(is_internal(&mp, &m.diagonal));
        assert_eq!(m3(&chain(&["z"])).unwrap().lattice.len(), 1);
    }

    #[test]
    fn m3_three_chain_and_decomposition() {
        let k = chain(&["o", "a", "i"]);
        let m = m3(&k).unwrap();
        let kp = PartialLattice::from_lattice(&k);
        let mp = PartialLattice::from_lattice(&m.lattice);
        assert!(is_congruence_preserving(&kp, &mp, &m.diagonal).unwrap());
        let [a0, a1, _, _] = decomp_elements(&m, &k, 0, 2, 1, 1).unwrap();
        assert_eq!(m.lattice.join(a0, a1), m.diagonal[1]);
    }

    #[test]
    fn chain3_values() {
        let d = DistLattice::chain(3);
        let g = chain3_gadget(&d, 1, 2).unwrap();
        let (o, x, i) = (0, 1, 2);
        assert_eq!(g.ambient.bv(x, o), 1);
        assert_eq!(g.ambient.bv(i, x), 2);
        assert_eq!(g.base.bv(1, 0), 2);
        assert!(g.ambient.is_proper());
        assert!(!chain3_gadget(&d, 0, 2).unwrap().ambient.is_proper());
    }

    fn measured_chain3() -> MeasuredPL {
        let pl = PartialLattice::from_lattice(&chain(&["a", "b", "c"]));
        let t = [0, 0, 0, 1, 0, 0, 1, 1, 0];
        MeasuredPL::from_phi_table(pl, &d2(), &t).unwrap()
    }

    #[test]
    fn relcomp_step_adds_complement() {
        let l = measured_chain3();
        let app = Application::RelComp { a: "a".into(), b: "b".into(), c: "c".into() };
        let (ext, steps) = saturate(&l, &[app], Caps::default()).unwrap();
        let t = ext.idx("t1").unwrap();
        let lat = ext.pl().to_lattice().unwrap();
        let (a, b, c) = (ext.idx("a").unwrap(), ext.idx("b").unwrap(), ext.idx("c").unwrap());
        assert_eq!(lat.meet(b, t), a);
        assert_eq!(lat.join(b, t), c);
        assert!(steps[0].lattice().is_proper());
    }

    #[test]
    fn chain3_step_inserts_point() {
        let d = DistLattice::chain(3);
        let pl = PartialLattice::from_lattice(&chain(&["o", "i"]));
        let l = MeasuredPL::from_phi_table(pl, &d, &[0, 0, 2, 0]).unwrap();
        let dual = dualize(l.values());
        let app = Application::Chain3 { o: "o".into(), i: "i".into(), alpha: dual.name(1).into() };
        let (ext, _) = saturate(&l, &[app], Caps::default()).unwrap();
        assert_eq!(ext.len(), 3);
        let (o, x, i) = (ext.idx("o").unwrap(), ext.idx("x1").unwrap(), ext.idx("i").unwrap());
        assert_eq!((ext.bv(x, o), ext.bv(i, x)), (1, 2));
        assert!(ext.pl().le(o, x) && ext.pl().le(x, i));
    }
}
