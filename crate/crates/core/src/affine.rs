//! Affine lower and upper functions `P -> E`.
//!
//! A lower function is `f(x) = ⋁_i ⟦x ≤ u_i⟧ ∧ α_i`, an upper function
//! `f(x) = ⋁_i ⟦u_i ≤ x⟧ ∧ α_i`. Upper functions on `P` are lower functions
//! on the dual structure, and the filter-side operations are implemented
//! that way.

use std::collections::BTreeMap;

use crate::bitrel::{canonical, BitSet};
use crate::error::{Error, Result};
use crate::measured::{Calc, MeasuredPL, PrimeQuotient};
use crate::order::PrimeFilter;

/// Largest term list accepted by [`id_closure`].
pub const DEFAULT_TERM_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FnKind {
    Lower,
    Upper,
}

impl FnKind {
    fn flip(self) -> FnKind {
        match self {
            FnKind::Lower => FnKind::Upper,
            FnKind::Upper => FnKind::Lower,
        }
    }
}

/// An affine function with its term list and cached values.
#[derive(Clone, Debug)]
pub struct AffineFn {
    kind: FnKind,
    terms: Vec<(usize, usize)>,
    values: Vec<usize>,
}

impl PartialEq for AffineFn {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.values == other.values
    }
}

impl Eq for AffineFn {}

fn evaluate(m: &MeasuredPL, kind: FnKind, terms: &[(usize, usize)]) -> Vec<usize> {
    let e = m.values();
    (0..m.len())
        .map(|x| {
            e.join_all(terms.iter().map(|&(u, a)| {
                let b = match kind {
                    FnKind::Lower => m.bv(x, u),
                    FnKind::Upper => m.bv(u, x),
                };
                e.meet(b, a)
            }))
        })
        .collect()
}

/// Drop terms one at a time as long as the values do not change.
fn prune(m: &MeasuredPL, kind: FnKind, mut terms: Vec<(usize, usize)>, values: &[usize]) -> Vec<(usize, usize)> {
    let bot = m.values().bot();
    terms.retain(|&(_, a)| a != bot);
    let mut merged: BTreeMap<usize, usize> = BTreeMap::new();
    for (u, a) in terms {
        let slot = merged.entry(u).or_insert(bot);
        *slot = m.values().join(*slot, a);
    }
    let mut terms: Vec<(usize, usize)> = merged.into_iter().collect();
    let mut i = 0;
    while i < terms.len() {
        let mut trial = terms.clone();
        trial.remove(i);
        if !trial.is_empty() && evaluate(m, kind, &trial) == values {
            terms = trial;
        } else {
            i += 1;
        }
    }
    if terms.is_empty() {
        terms.push((0, bot));
    }
    terms
}

impl AffineFn {
    fn build(m: &MeasuredPL, kind: FnKind, terms: Vec<(usize, usize)>) -> Result<AffineFn> {
        if terms.is_empty() {
            return Err(Error::EmptyArgument);
        }
        if terms.iter().any(|&(u, a)| u >= m.len() || a >= m.values().len()) {
            return Err(Error::UnknownElement("anchor or coefficient out of range".into()));
        }
        let values = evaluate(m, kind, &terms);
        Ok(AffineFn { kind, terms, values })
    }

    pub fn lower(m: &MeasuredPL, terms: Vec<(usize, usize)>) -> Result<AffineFn> {
        Self::build(m, FnKind::Lower, terms)
    }

    pub fn upper(m: &MeasuredPL, terms: Vec<(usize, usize)>) -> Result<AffineFn> {
        Self::build(m, FnKind::Upper, terms)
    }

    /// `x ↦ ⟦x ≤ u⟧`
    pub fn principal_lower(m: &MeasuredPL, u: usize) -> AffineFn {
        Self::lower(m, vec![(u, m.values().top())]).expect("anchor in range")
    }

    /// `x ↦ ⟦u ≤ x⟧`
    pub fn principal_upper(m: &MeasuredPL, u: usize) -> AffineFn {
        Self::upper(m, vec![(u, m.values().top())]).expect("anchor in range")
    }

    /// The constant function with value `a`, anchored at every element.
    pub fn constant(m: &MeasuredPL, kind: FnKind, a: usize) -> AffineFn {
        Self::build(m, kind, (0..m.len()).map(|u| (u, a)).collect()).expect("anchors in range")
    }

    /// The function with the given values, which must be lower (resp.
    /// upper). Every such function on a finite carrier is affine, with one
    /// term per element; redundant terms are pruned.
    pub fn from_values(m: &MeasuredPL, kind: FnKind, values: Vec<usize>) -> AffineFn {
        let terms = (0..m.len()).map(|u| (u, values[u])).collect();
        let terms = prune(m, kind, terms, &values);
        debug_assert_eq!(evaluate(m, kind, &terms), values, "values are not {kind:?}");
        AffineFn { kind, terms, values }
    }

    pub fn kind(&self) -> FnKind {
        self.kind
    }

    pub fn terms(&self) -> &[(usize, usize)] {
        &self.terms
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn eval(&self, x: usize) -> usize {
        self.values[x]
    }

    /// The same values read on the dual structure.
    fn flipped(&self) -> AffineFn {
        AffineFn { kind: self.kind.flip(), terms: self.terms.clone(), values: self.values.clone() }
    }
}

pub fn eval(f: &AffineFn, x: usize) -> usize {
    f.eval(x)
}

/// `f(y) ∧ ⟦x ≤ y⟧ ≤ f(x)` for all `x, y` (dually for upper functions).
pub fn is_lower(m: &MeasuredPL, values: &[usize]) -> bool {
    let e = m.values();
    let n = m.len();
    (0..n).all(|x| (0..n).all(|y| e.le(e.meet(values[y], m.bv(x, y)), values[x])))
}

/// Evaluators for both sides of one structure, with their caches.
#[derive(Clone, Debug)]
pub struct AffineCalc {
    lower: Calc,
    upper: Calc,
    pub term_cap: usize,
}

impl AffineCalc {
    pub fn new(m: &MeasuredPL) -> AffineCalc {
        let lower = Calc::new(m);
        let upper = lower.dual();
        AffineCalc { lower, upper, term_cap: DEFAULT_TERM_CAP }
    }

    pub fn measured(&self) -> &MeasuredPL {
        self.lower.measured()
    }

    fn side(&mut self, kind: FnKind) -> &mut Calc {
        match kind {
            FnKind::Lower => &mut self.lower,
            FnKind::Upper => &mut self.upper,
        }
    }

    /// Meet of two lower functions (or two upper functions), anchored on
    /// the whole carrier, which is an (Id∧)-sample of every pair.
    pub fn meet(&mut self, f: &AffineFn, g: &AffineFn) -> AffineFn {
        assert_eq!(f.kind, g.kind, "meet of a lower and an upper function");
        let side = match f.kind {
            FnKind::Lower => self.lower.measured(),
            FnKind::Upper => self.upper.measured(),
        };
        let e = side.values();
        let mut terms = Vec::with_capacity(side.len());
        for w in 0..side.len() {
            let mut c = e.bot();
            for &(u, a) in &f.terms {
                for &(v, b) in &g.terms {
                    let t = e.meet(e.meet(side.bv(w, u), side.bv(w, v)), e.meet(a, b));
                    c = e.join(c, t);
                }
            }
            terms.push((w, c));
        }
        let values = evaluate(side, FnKind::Lower, &terms);
        let terms = prune(side, FnKind::Lower, terms, &values);
        AffineFn { kind: f.kind, terms, values }
    }

    /// `f^Id` (or `f^Fil` for an upper `f`):
    /// `a ↦ ⋁_{∅≠I} ⟦a ∈ Id(u^(I))⟧ ∧ α_(I)`.
    pub fn closure(&mut self, f: &AffineFn) -> Result<AffineFn> {
        if f.terms.len() > self.term_cap {
            return Err(Error::TermBlowup { terms: f.terms.len(), cap: self.term_cap });
        }
        let kind = f.kind;
        let calc = self.side(kind);
        let m = calc.measured().clone();
        let e = m.values();
        let k = f.terms.len();
        let mut by_anchor_set: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for mask in 1u32..(1 << k) {
            let picked: Vec<&(usize, usize)> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &f.terms[i]).collect();
            let coeff = e.meet_all(picked.iter().map(|t| t.1));
            if coeff == e.bot() {
                continue;
            }
            let xs = canonical(picked.iter().map(|t| t.0).collect());
            let slot = by_anchor_set.entry(xs).or_insert(e.bot());
            *slot = e.join(*slot, coeff);
        }
        let mut values = vec![e.bot(); m.len()];
        for (xs, coeff) in by_anchor_set {
            let member = calc.in_id_vec(&xs);
            for a in 0..m.len() {
                values[a] = e.join(values[a], e.meet(member[a], coeff));
            }
        }
        let terms = (0..m.len()).map(|u| (u, values[u])).collect();
        let terms = prune(&m, FnKind::Lower, terms, &values);
        Ok(AffineFn { kind, terms, values })
    }

    /// `f ∨^Id g` (or `f ∨^Fil g`): the closure of the concatenated terms.
    pub fn join(&mut self, f: &AffineFn, g: &AffineFn) -> Result<AffineFn> {
        assert_eq!(f.kind, g.kind, "join of a lower and an upper function");
        let terms = f.terms.iter().chain(&g.terms).copied().collect();
        let values: Vec<usize> =
            f.values.iter().zip(&g.values).map(|(&a, &b)| self.measured().values().join(a, b)).collect();
        self.closure(&AffineFn { kind: f.kind, terms, values })
    }

    pub fn ideal_function_witness(&mut self, f: &AffineFn) -> Option<String> {
        let calc = self.side(f.kind);
        ideal_witness(calc, &f.values)
    }
}

fn ideal_witness(calc: &Calc, values: &[usize]) -> Option<String> {
    let m = calc.measured();
    let e = m.values();
    if !is_lower(m, values) {
        return Some("not monotone with respect to the Boolean order".into());
    }
    for a in 0..m.len() {
        for xs in m.pl().joins().keys() {
            let lhs = e.meet(calc.join_eq(a, xs), e.meet_all(xs.iter().map(|&x| values[x])));
            if !e.le(lhs, values[a]) {
                return Some(format!("a = {}, X = {:?}", m.name(a), xs));
            }
        }
    }
    None
}

pub fn meet_lower(m: &MeasuredPL, f: &AffineFn, g: &AffineFn) -> AffineFn {
    AffineCalc::new(m).meet(f, g)
}

pub fn meet_upper(m: &MeasuredPL, f: &AffineFn, g: &AffineFn) -> AffineFn {
    AffineCalc::new(m).meet(f, g)
}

pub fn id_closure(m: &MeasuredPL, f: &AffineFn) -> Result<AffineFn> {
    debug_assert_eq!(f.kind, FnKind::Lower);
    AffineCalc::new(m).closure(f)
}

pub fn fil_closure(m: &MeasuredPL, f: &AffineFn) -> Result<AffineFn> {
    debug_assert_eq!(f.kind, FnKind::Upper);
    AffineCalc::new(m).closure(f)
}

pub fn join_id(m: &MeasuredPL, f: &AffineFn, g: &AffineFn) -> Result<AffineFn> {
    AffineCalc::new(m).join(f, g)
}

pub fn join_fil(m: &MeasuredPL, f: &AffineFn, g: &AffineFn) -> Result<AffineFn> {
    AffineCalc::new(m).join(f, g)
}

/// Lower, and `⟦a = ⋁X⟧ ∧ ⋀_{x ∈ X} f(x) ≤ f(a)` for every listed `X`.
pub fn is_ideal_function(m: &MeasuredPL, f: &AffineFn) -> bool {
    ideal_witness(&Calc::new(m), &f.values).is_none() && f.kind == FnKind::Lower
}

pub fn is_filter_function(m: &MeasuredPL, f: &AffineFn) -> bool {
    f.kind == FnKind::Upper && ideal_witness(&Calc::new(&m.dual()), &f.flipped().values).is_none()
}

/// `⟦f ≤ g⟧ = ⋁_{i,j} α_i ∧ β_j ∧ ⟦u_i ≤ v_j⟧` for upper `f`, lower `g`.
pub fn vbv_le(m: &MeasuredPL, f: &AffineFn, g: &AffineFn) -> usize {
    assert!(f.kind == FnKind::Upper && g.kind == FnKind::Lower, "⟦f ≤ g⟧ needs an upper f and a lower g");
    let e = m.values();
    e.join_all(
        f.terms
            .iter()
            .flat_map(|&(u, a)| g.terms.iter().map(move |&(v, b)| e.meet(e.meet(a, b), m.bv(u, v)))),
    )
}

/// `π_G(f) = f⁻¹G / G` as a set of classes.
pub fn pi_g(f: &AffineFn, g: &PrimeFilter, q: &PrimeQuotient) -> BitSet {
    BitSet::from_elems(q.pl.len(), (0..f.values.len()).filter(|&x| g.contains(f.values[x])).map(|x| q.proj[x]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{as_lattice, build_poset, DistLattice};
    use crate::partial::PartialLattice;

    fn measured_square() -> MeasuredPL {
        let p = build_poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")]).unwrap();
        let pl = PartialLattice::from_lattice(&as_lattice(&p).unwrap());
        let d = DistLattice::chain(2);
        // φ(Θ⁺(x, y)) = 1 exactly when x </= y.
        let t: Vec<usize> = (0..16).map(|i| usize::from(!pl.le(i / 4, i % 4))).collect();
        MeasuredPL::from_phi_table(pl, &d, &t).unwrap()
    }

    #[test]
    fn principal_lower_values() {
        let m = measured_square();
        let f = AffineFn::principal_lower(&m, 1);
        assert_eq!(f.values(), &[m.bv(0, 1), m.bv(1, 1), m.bv(2, 1), m.bv(3, 1)]);
        let g = AffineFn::lower(&m, vec![(2, 0)]).unwrap();
        assert_eq!(g.eval(2), 0);
    }

    #[test]
    fn meet_of_principals_is_principal_at_the_meet() {
        let m = measured_square();
        let f = AffineFn::principal_lower(&m, 1);
        let g = AffineFn::principal_lower(&m, 2);
        assert_eq!(meet_lower(&m, &f, &g), AffineFn::principal_lower(&m, 0));
        assert_eq!(meet_lower(&m, &f, &f), f);
    }

    #[test]
    fn closure_of_principal_is_itself() {
        let m = measured_square();
        let f = AffineFn::principal_lower(&m, 1);
        assert_eq!(id_closure(&m, &f).unwrap(), f);
        assert!(is_ideal_function(&m, &f));
    }

    #[test]
    fn join_escapes_in_the_square() {
        let m = measured_square();
        let f = AffineFn::principal_lower(&m, 1);
        let g = AffineFn::principal_lower(&m, 2);
        let max = AffineFn::lower(&m, vec![(1, 0), (2, 0)]).unwrap();
        assert!(!is_ideal_function(&m, &max));
        assert_eq!(join_id(&m, &f, &g).unwrap(), AffineFn::principal_lower(&m, 3));
    }

    #[test]
    fn constants_are_ideal_and_filter_functions() {
        let m = measured_square();
        let c = AffineFn::constant(&m, FnKind::Lower, 0);
        assert!(is_ideal_function(&m, &c));
        let c = AffineFn::constant(&m, FnKind::Upper, 0);
        assert!(is_filter_function(&m, &c));
    }

    #[test]
    fn vbv_of_principals() {
        let m = measured_square();
        let f = AffineFn::principal_upper(&m, 1);
        let g = AffineFn::principal_lower(&m, 2);
        assert_eq!(vbv_le(&m, &f, &g), m.bv(1, 2));
    }

    #[test]
    fn term_cap_is_enforced() {
        let m = measured_square();
        let mut c = AffineCalc::new(&m);
        c.term_cap = 1;
        let f = AffineFn::lower(&m, vec![(1, 0), (2, 0)]).unwrap();
        assert!(matches!(c.closure(&f), Err(Error::TermBlowup { .. })));
    }

    #[test]
    fn from_values_recovers_principal() {
        let m = measured_square();
        let f = AffineFn::principal_lower(&m, 3);
        let g = AffineFn::from_values(&m, FnKind::Lower, f.values().to_vec());
        assert_eq!(g.terms(), &[(3, 0)]);
    }
}
