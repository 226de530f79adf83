//! Lattice terms over a partial lattice, their classical ideals and filters,
//! the relations `≪` and `⪯`, the valued `⟦ẋ ≤ ẏ⟧`, and the term quotient.
//!
//! Terms are interned in a [`TermArena`] so both engines memoize on pairs
//! of small integer ids.

use std::collections::HashMap;
use std::fmt;

use crate::affine::{vbv_le, AffineCalc, AffineFn};
use crate::bitrel::BitSet;
use crate::error::{Error, Result};
use crate::measured::MeasuredPL;
use crate::order::{as_lattice, DistLattice, FinitePoset, Lattice};
use crate::partial::{filter_closure, ideal_closure, PartialLattice};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Leaf(usize),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
}

impl Term {
    pub fn leaf(a: usize) -> Term {
        Term::Leaf(a)
    }

    pub fn join(x: Term, y: Term) -> Term {
        Term::Join(Box::new(x), Box::new(y))
    }

    pub fn meet(x: Term, y: Term) -> Term {
        Term::Meet(Box::new(x), Box::new(y))
    }

    /// `hgt(a) = 0`, `hgt(ẋ ∘ ẏ) = hgt(ẋ) + hgt(ẏ) + 1`.
    pub fn height(&self) -> usize {
        match self {
            Term::Leaf(_) => 0,
            Term::Join(x, y) | Term::Meet(x, y) => x.height() + y.height() + 1,
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Term::Leaf(a) => out.push(*a),
            Term::Join(x, y) | Term::Meet(x, y) => {
                x.collect_leaves(out);
                y.collect_leaves(out);
            }
        }
    }

    pub fn map_leaves(&self, f: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Leaf(a) => Term::Leaf(f(*a)),
            Term::Join(x, y) => Term::join(x.map_leaves(f), y.map_leaves(f)),
            Term::Meet(x, y) => Term::meet(x.map_leaves(f), y.map_leaves(f)),
        }
    }

    /// Evaluate in a total lattice whose elements are the leaves' indices.
    pub fn eval(&self, l: &Lattice) -> usize {
        match self {
            Term::Leaf(a) => *a,
            Term::Join(x, y) => l.join(x.eval(l), y.eval(l)),
            Term::Meet(x, y) => l.meet(x.eval(l), y.eval(l)),
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> TermDisplay<'a> {
        TermDisplay { term: self, names }
    }
}

/// Writes a term with the fewest parentheses the grammar needs.
pub struct TermDisplay<'a> {
    term: &'a Term,
    names: &'a [String],
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.term, self.names)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, names: &[String]) -> fmt::Result {
    let wrap = |f: &mut fmt::Formatter<'_>, t: &Term, parens: bool| -> fmt::Result {
        if parens {
            write!(f, "(")?;
            write_term(f, t, names)?;
            write!(f, ")")
        } else {
            write_term(f, t, names)
        }
    };
    match t {
        Term::Leaf(a) => write!(f, "{}", names[*a]),
        Term::Join(x, y) => {
            wrap(f, x, false)?;
            write!(f, " | ")?;
            wrap(f, y, matches!(**y, Term::Join(..)))
        }
        Term::Meet(x, y) => {
            wrap(f, x, matches!(**x, Term::Join(..)))?;
            write!(f, " & ")?;
            wrap(f, y, !matches!(**y, Term::Leaf(_)))
        }
    }
}

/// Parse `a & b | c` style terms; `&` binds tighter than `|`, both
/// associate to the left.
pub fn parse_term(input: &str, p: &FinitePoset) -> Result<Term> {
    let mut parser = Parser { src: input.as_bytes(), pos: 0, p };
    let t = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    p: &'a FinitePoset,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::TermParse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let mut t = self.meet_expr()?;
        while self.eat(b'|') {
            t = Term::join(t, self.meet_expr()?);
        }
        Ok(t)
    }

    fn meet_expr(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.eat(b'&') {
            t = Term::meet(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        if self.eat(b'(') {
            let t = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(t);
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an element name or `(`"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        self.p.idx(name).map(Term::Leaf)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(usize),
    Join(TermId, TermId),
    Meet(TermId, TermId),
}

/// Hash-consed terms: structurally equal terms share one id.
#[derive(Clone, Debug, Default)]
pub struct TermArena {
    nodes: Vec<Node>,
    heights: Vec<usize>,
    index: HashMap<Node, TermId>,
}

impl TermArena {
    pub fn new() -> TermArena {
        TermArena::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn add(&mut self, node: Node) -> TermId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let h = match node {
            Node::Leaf(_) => 0,
            Node::Join(x, y) | Node::Meet(x, y) => self.height(x) + self.height(y) + 1,
        };
        let id = TermId(u32::try_from(self.nodes.len()).expect("arena overflow"));
        self.nodes.push(node);
        self.heights.push(h);
        self.index.insert(node, id);
        id
    }

    pub fn leaf(&mut self, a: usize) -> TermId {
        self.add(Node::Leaf(a))
    }

    pub fn join(&mut self, x: TermId, y: TermId) -> TermId {
        self.add(Node::Join(x, y))
    }

    pub fn meet(&mut self, x: TermId, y: TermId) -> TermId {
        self.add(Node::Meet(x, y))
    }

    pub fn node(&self, id: TermId) -> Node {
        self.nodes[id.index()]
    }

    pub fn height(&self, id: TermId) -> usize {
        self.heights[id.index()]
    }

    pub fn intern(&mut self, t: &Term) -> TermId {
        match t {
            Term::Leaf(a) => self.leaf(*a),
            Term::Join(x, y) => {
                let (x, y) = (self.intern(x), self.intern(y));
                self.join(x, y)
            }
            Term::Meet(x, y) => {
                let (x, y) = (self.intern(x), self.intern(y));
                self.meet(x, y)
            }
        }
    }

    pub fn term(&self, id: TermId) -> Term {
        match self.node(id) {
            Node::Leaf(a) => Term::Leaf(a),
            Node::Join(x, y) => Term::join(self.term(x), self.term(y)),
            Node::Meet(x, y) => Term::meet(self.term(x), self.term(y)),
        }
    }
}

/// All terms of height at most `max_height` over `leaves` generators, with
/// the children of each `∨`/`∧` in one fixed order (commuted duplicates
/// dropped). Sorted by height, then by construction order.
pub fn enumerate_terms(arena: &mut TermArena, leaves: usize, max_height: usize) -> Vec<TermId> {
    let mut by_height: Vec<Vec<TermId>> = vec![(0..leaves).map(|a| arena.leaf(a)).collect()];
    for h in 1..=max_height {
        let mut level = Vec::new();
        for hx in 0..h {
            let hy = h - 1 - hx;
            if hx > hy {
                continue;
            }
            for (i, &x) in by_height[hx].iter().enumerate() {
                let ys = if hx == hy { &by_height[hy][i..] } else { &by_height[hy][..] };
                for &y in ys {
                    level.push(arena.join(x, y));
                    level.push(arena.meet(x, y));
                }
            }
        }
        by_height.push(level);
    }
    by_height.concat()
}

/// Pair table indexed by term ids, grown on demand.
#[derive(Clone, Debug)]
struct PairMemo<T> {
    rows: Vec<Vec<T>>,
    none: T,
}

impl<T: Copy + PartialEq> PairMemo<T> {
    fn new(none: T) -> Self {
        PairMemo { rows: Vec::new(), none }
    }

    fn get(&self, x: TermId, y: TermId) -> Option<T> {
        let v = *self.rows.get(x.index())?.get(y.index())?;
        (v != self.none).then_some(v)
    }

    fn set(&mut self, x: TermId, y: TermId, v: T) {
        let (x, y) = (x.index(), y.index());
        if self.rows.len() <= x {
            self.rows.resize_with(x + 1, Vec::new);
        }
        let row = &mut self.rows[x];
        if row.len() <= y {
            row.resize(y + 1, self.none);
        }
        row[y] = v;
    }
}

/// Classical `ẋ⁻`, `ẋ⁺`, `≪` and `⪯` over a partial lattice.
#[derive(Clone, Debug)]
pub struct ClassicalTerms {
    pl: PartialLattice,
    arena: TermArena,
    lower: Vec<Option<BitSet>>,
    upper: Vec<Option<BitSet>>,
    peq: PairMemo<u8>,
}

impl ClassicalTerms {
    pub fn new(pl: &PartialLattice) -> ClassicalTerms {
        ClassicalTerms {
            pl: pl.clone(),
            arena: TermArena::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            peq: PairMemo::new(0),
        }
    }

    pub fn arena(&self) -> &TermArena {
        &self.arena
    }

    pub fn arena_mut(&mut self) -> &mut TermArena {
        &mut self.arena
    }

    pub fn intern(&mut self, t: &Term) -> TermId {
        self.arena.intern(t)
    }

    fn ensure(&mut self, id: TermId) {
        let i = id.index();
        if self.lower.len() <= i {
            self.lower.resize(self.arena.len(), None);
            self.upper.resize(self.arena.len(), None);
        }
        if self.lower[i].is_some() {
            return;
        }
        let (lo, up) = match self.arena.node(id) {
            Node::Leaf(a) => (self.pl.poset().down(a), self.pl.poset().up(a)),
            Node::Join(x, y) => {
                self.ensure(x);
                self.ensure(y);
                let (lx, ly) = (self.lower[x.index()].as_ref().unwrap(), self.lower[y.index()].as_ref().unwrap());
                let gens: Vec<usize> = lx.iter().chain(ly.iter()).collect();
                let mut up = self.upper[x.index()].clone().unwrap();
                up.intersect_with(self.upper[y.index()].as_ref().unwrap());
                (ideal_closure(&self.pl, &gens), up)
            }
            Node::Meet(x, y) => {
                self.ensure(x);
                self.ensure(y);
                let (ux, uy) = (self.upper[x.index()].as_ref().unwrap(), self.upper[y.index()].as_ref().unwrap());
                let gens: Vec<usize> = ux.iter().chain(uy.iter()).collect();
                let mut lo = self.lower[x.index()].clone().unwrap();
                lo.intersect_with(self.lower[y.index()].as_ref().unwrap());
                (lo, filter_closure(&self.pl, &gens))
            }
        };
        self.lower[i] = Some(lo);
        self.upper[i] = Some(up);
    }

    /// `ẋ⁻`
    pub fn lower(&mut self, id: TermId) -> &BitSet {
        self.ensure(id);
        self.lower[id.index()].as_ref().unwrap()
    }

    /// `ẋ⁺`
    pub fn upper(&mut self, id: TermId) -> &BitSet {
        self.ensure(id);
        self.upper[id.index()].as_ref().unwrap()
    }

    /// `ẋ⁺ ∩ ẏ⁻ ≠ ∅`
    pub fn ll(&mut self, x: TermId, y: TermId) -> bool {
        self.ensure(x);
        self.ensure(y);
        self.upper[x.index()].as_ref().unwrap().intersects(self.lower[y.index()].as_ref().unwrap())
    }

    pub fn peq(&mut self, x: TermId, y: TermId) -> bool {
        if let Some(v) = self.peq.get(x, y) {
            return v == 2;
        }
        let r = match (self.arena.node(x), self.arena.node(y)) {
            (Node::Leaf(_), _) | (_, Node::Leaf(_)) => self.ll(x, y),
            (Node::Join(x0, x1), Node::Meet(y0, y1)) => {
                self.peq(x0, y0) && self.peq(x0, y1) && self.peq(x1, y0) && self.peq(x1, y1)
            }
            (Node::Join(x0, x1), Node::Join(..)) => self.peq(x0, y) && self.peq(x1, y),
            (Node::Meet(..), Node::Meet(y0, y1)) => self.peq(x, y0) && self.peq(x, y1),
            (Node::Meet(x0, x1), Node::Join(y0, y1)) => {
                // Dean's clause: also `ẋ_i ⪯ ẏ` or `ẋ ⪯ ẏ_j`; with only
                // `ẋ_i ⪯ ẏ_j` the relation is not reflexive.
                self.ll(x, y) || self.peq(x0, y) || self.peq(x1, y) || self.peq(x, y0) || self.peq(x, y1)
            }
        };
        self.peq.set(x, y, if r { 2 } else { 1 });
        r
    }
}

pub fn term_lower(p: &PartialLattice, t: &Term) -> BitSet {
    let mut c = ClassicalTerms::new(p);
    let id = c.intern(t);
    c.lower(id).clone()
}

pub fn term_upper(p: &PartialLattice, t: &Term) -> BitSet {
    let mut c = ClassicalTerms::new(p);
    let id = c.intern(t);
    c.upper(id).clone()
}

pub fn term_ll(p: &PartialLattice, x: &Term, y: &Term) -> bool {
    let mut c = ClassicalTerms::new(p);
    let (x, y) = (c.intern(x), c.intern(y));
    c.ll(x, y)
}

pub fn term_peq(p: &PartialLattice, x: &Term, y: &Term) -> bool {
    let mut c = ClassicalTerms::new(p);
    let (x, y) = (c.intern(x), c.intern(y));
    c.peq(x, y)
}

/// Valued `ẋ⁻`, `ẋ⁺`, `⟦ẋ ≪ ẏ⟧` and `⟦ẋ ≤ ẏ⟧` over a measured partial
/// lattice. The structure must be balanced; every finite one with nonempty
/// join and meet domains is.
#[derive(Clone, Debug)]
pub struct TermEngine {
    aff: AffineCalc,
    e: DistLattice,
    arena: TermArena,
    minus: Vec<Option<AffineFn>>,
    plus: Vec<Option<AffineFn>>,
    le: PairMemo<u32>,
}

impl TermEngine {
    pub fn new(m: &MeasuredPL) -> TermEngine {
        TermEngine {
            aff: AffineCalc::new(m),
            e: m.values().clone(),
            arena: TermArena::new(),
            minus: Vec::new(),
            plus: Vec::new(),
            le: PairMemo::new(u32::MAX),
        }
    }

    pub fn measured(&self) -> &MeasuredPL {
        self.aff.measured()
    }

    pub fn arena(&self) -> &TermArena {
        &self.arena
    }

    pub fn arena_mut(&mut self) -> &mut TermArena {
        &mut self.arena
    }

    pub fn intern(&mut self, t: &Term) -> TermId {
        self.arena.intern(t)
    }

    /// Set the term-list cap for `∨^Id`/`∨^Fil` closures.
    pub fn set_term_cap(&mut self, cap: usize) {
        self.aff.term_cap = cap;
    }

    fn ensure(&mut self, id: TermId) -> Result<()> {
        let i = id.index();
        if self.minus.len() <= i {
            self.minus.resize(self.arena.len(), None);
            self.plus.resize(self.arena.len(), None);
        }
        if self.minus[i].is_some() {
            return Ok(());
        }
        let (lo, up) = match self.arena.node(id) {
            Node::Leaf(a) => {
                let m = self.aff.measured();
                (AffineFn::principal_lower(m, a), AffineFn::principal_upper(m, a))
            }
            Node::Join(x, y) => {
                self.ensure(x)?;
                self.ensure(y)?;
                let (x, y) = (x.index(), y.index());
                let lo = self.aff.join(self.minus[x].as_ref().unwrap(), self.minus[y].as_ref().unwrap())?;
                let up = self.aff.meet(self.plus[x].as_ref().unwrap(), self.plus[y].as_ref().unwrap());
                (lo, up)
            }
            Node::Meet(x, y) => {
                self.ensure(x)?;
                self.ensure(y)?;
                let (x, y) = (x.index(), y.index());
                let lo = self.aff.meet(self.minus[x].as_ref().unwrap(), self.minus[y].as_ref().unwrap());
                let up = self.aff.join(self.plus[x].as_ref().unwrap(), self.plus[y].as_ref().unwrap())?;
                (lo, up)
            }
        };
        self.minus[i] = Some(lo);
        self.plus[i] = Some(up);
        Ok(())
    }

    /// `ẋ⁻`, an affine ideal function.
    pub fn minus(&mut self, id: TermId) -> Result<&AffineFn> {
        self.ensure(id)?;
        Ok(self.minus[id.index()].as_ref().unwrap())
    }

    /// `ẋ⁺`, an affine filter function.
    pub fn plus(&mut self, id: TermId) -> Result<&AffineFn> {
        self.ensure(id)?;
        Ok(self.plus[id.index()].as_ref().unwrap())
    }

    /// `⟦ẋ ≪ ẏ⟧ = ⟦ẋ⁺ ≤ ẏ⁻⟧`
    pub fn ll(&mut self, x: TermId, y: TermId) -> Result<usize> {
        self.ensure(x)?;
        self.ensure(y)?;
        let f = self.plus[x.index()].as_ref().unwrap();
        let g = self.minus[y.index()].as_ref().unwrap();
        Ok(vbv_le(self.aff.measured(), f, g))
    }

    pub fn le(&mut self, x: TermId, y: TermId) -> Result<usize> {
        if let Some(v) = self.le.get(x, y) {
            return Ok(v as usize);
        }
        let v = match (self.arena.node(x), self.arena.node(y)) {
            (Node::Leaf(_), _) | (_, Node::Leaf(_)) => self.ll(x, y)?,
            (Node::Join(x0, x1), Node::Meet(y0, y1)) => {
                let mut v = self.e.top();
                for (a, b) in [(x0, y0), (x0, y1), (x1, y0), (x1, y1)] {
                    let w = self.le(a, b)?;
                    v = self.e.meet(v, w);
                }
                v
            }
            (Node::Join(x0, x1), Node::Join(..)) => {
                let a = self.le(x0, y)?;
                let b = self.le(x1, y)?;
                self.e.meet(a, b)
            }
            (Node::Meet(..), Node::Meet(y0, y1)) => {
                let a = self.le(x, y0)?;
                let b = self.le(x, y1)?;
                self.e.meet(a, b)
            }
            (Node::Meet(x0, x1), Node::Join(y0, y1)) => {
                let mut v = self.ll(x, y)?;
                for (a, b) in [(x0, y), (x1, y), (x, y0), (x, y1)] {
                    let w = self.le(a, b)?;
                    v = self.e.join(v, w);
                }
                v
            }
        };
        self.le.set(x, y, v as u32);
        Ok(v)
    }

    /// `⟦ẋ = ẏ⟧ = ⟦ẋ ≤ ẏ⟧ ∧ ⟦ẏ ≤ ẋ⟧`
    pub fn eq(&mut self, x: TermId, y: TermId) -> Result<usize> {
        let a = self.le(x, y)?;
        let b = self.le(y, x)?;
        Ok(self.e.meet(a, b))
    }

    /// The values of `ẋ⁻` and `ẋ⁺`; terms with `⟦ẋ = ẏ⟧ = 1` share it.
    pub fn profile(&mut self, id: TermId) -> Result<(Vec<usize>, Vec<usize>)> {
        self.ensure(id)?;
        Ok((self.minus[id.index()].as_ref().unwrap().values().to_vec(), self.plus[id.index()].as_ref().unwrap().values().to_vec()))
    }
}

pub fn term_minus(m: &MeasuredPL, t: &Term) -> Result<AffineFn> {
    let mut eng = TermEngine::new(m);
    let id = eng.intern(t);
    eng.minus(id).cloned()
}

pub fn term_plus(m: &MeasuredPL, t: &Term) -> Result<AffineFn> {
    let mut eng = TermEngine::new(m);
    let id = eng.intern(t);
    eng.plus(id).cloned()
}

pub fn bv_ll(m: &MeasuredPL, x: &Term, y: &Term) -> Result<usize> {
    let mut eng = TermEngine::new(m);
    let (x, y) = (eng.intern(x), eng.intern(y));
    eng.ll(x, y)
}

pub fn bv_le_terms(m: &MeasuredPL, x: &Term, y: &Term) -> Result<usize> {
    let mut eng = TermEngine::new(m);
    let (x, y) = (eng.intern(x), eng.intern(y));
    eng.le(x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Terms higher than this are not built.
    pub height: usize,
    /// Stop once this many classes exist.
    pub size: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { height: 4, size: 20_000 }
    }
}

/// The lattice `W(P)/≡*` (or the part of it found within the caps) with
/// `ψ(x, y) = ⟦x ≤ y⟧` on its classes.
#[derive(Clone, Debug)]
pub struct TermQuotient {
    base: MeasuredPL,
    reps: Vec<Term>,
    psi: Vec<usize>,
    leaf_class: Vec<usize>,
    join: Vec<Option<usize>>,
    meet: Vec<Option<usize>>,
    closed: bool,
}

impl TermQuotient {
    pub fn base(&self) -> &MeasuredPL {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// True when every join and meet of two classes is a known class.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn reps(&self) -> &[Term] {
        &self.reps
    }

    pub fn rep_name(&self, i: usize) -> String {
        self.reps[i].display(self.base.pl().poset().names()).to_string()
    }

    pub fn psi(&self, x: usize, y: usize) -> usize {
        self.psi[x * self.len() + y]
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.psi(x, y) == self.base.values().top()
    }

    /// The class of the leaf `a`.
    pub fn leaf_class(&self, a: usize) -> usize {
        self.leaf_class[a]
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        self.join[x * self.len() + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        self.meet[x * self.len() + y]
    }

    /// `ψ(x, y) = 1` exactly when `x ∨ y = y`.
    pub fn is_proper(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| self.join(x, y).map_or(true, |j| self.le(x, y) == (j == y))))
    }

    /// A fresh engine over the base structure for further term queries.
    pub fn oracle(&self) -> TermEngine {
        TermEngine::new(&self.base)
    }

    /// The class of an arbitrary term, if it is one of the known classes.
    pub fn classify(&self, t: &Term) -> Result<Option<usize>> {
        let mut eng = self.oracle();
        let id = eng.intern(t);
        for (c, r) in self.reps.iter().enumerate() {
            let r = eng.intern(r);
            if eng.eq(id, r)? == self.base.values().top() {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    fn class_poset(&self) -> Result<FinitePoset> {
        let n = self.len();
        let names: Vec<String> = (0..n).map(|i| self.rep_name(i)).collect();
        let mut rel = crate::bitrel::BitRel::empty(n);
        for x in 0..n {
            for y in 0..n {
                if self.le(x, y) {
                    rel.set(x, y);
                }
            }
        }
        FinitePoset::from_relation(names, rel)
    }

    /// The quotient as a lattice; needs a closed quotient.
    pub fn to_lattice(&self) -> Result<Lattice> {
        if !self.closed {
            return Err(Error::VerificationFailed("term quotient is not closed".into()));
        }
        as_lattice(&self.class_poset()?)
    }

    /// The quotient lattice measured by `ψ`.
    pub fn to_measured(&self) -> Result<MeasuredPL> {
        let l = self.to_lattice()?;
        MeasuredPL::new(PartialLattice::from_lattice(&l), self.base.values().clone(), self.psi.clone())
    }
}

struct Builder {
    eng: TermEngine,
    top: usize,
    reps: Vec<TermId>,
    buckets: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>>,
}

impl Builder {
    fn add(&mut self, t: TermId) -> Result<usize> {
        let key = self.eng.profile(t)?;
        if let Some(cands) = self.buckets.get(&key) {
            for &c in cands.clone().iter() {
                if self.eng.eq(t, self.reps[c])? == self.top {
                    return Ok(c);
                }
            }
        }
        let c = self.reps.len();
        self.reps.push(t);
        self.buckets.entry(key).or_default().push(c);
        Ok(c)
    }
}

/// Build `W(P)/≡*` breadth-first: start from the leaves and combine
/// classes with `∨` and `∧` until a round adds nothing. Representatives
/// are the first terms found in each class.
pub fn theorem_a(m: &MeasuredPL, caps: Caps) -> Result<TermQuotient> {
    let mut b = Builder { eng: TermEngine::new(m), top: m.values().top(), reps: Vec::new(), buckets: HashMap::new() };
    let mut leaf_class = Vec::with_capacity(m.len());
    for a in 0..m.len() {
        let t = b.eng.arena.leaf(a);
        leaf_class.push(b.add(t)?);
    }
    let mut join: HashMap<(usize, usize), usize> = HashMap::new();
    let mut meet: HashMap<(usize, usize), usize> = HashMap::new();
    let mut closed = false;
    let mut over_size = false;
    'rounds: loop {
        let n = b.reps.len();
        let mut truncated = false;
        for i in 0..n {
            for j in i..n {
                if join.contains_key(&(i, j)) {
                    continue;
                }
                let (x, y) = (b.reps[i], b.reps[j]);
                if b.eng.arena.height(x) + b.eng.arena.height(y) + 1 > caps.height {
                    truncated = true;
                    continue;
                }
                let tj = b.eng.arena.join(x, y);
                let cj = b.add(tj)?;
                let tm = b.eng.arena.meet(x, y);
                let cm = b.add(tm)?;
                for key in [(i, j), (j, i)] {
                    join.insert(key, cj);
                    meet.insert(key, cm);
                }
                if b.reps.len() > caps.size {
                    over_size = true;
                    break 'rounds;
                }
            }
        }
        if b.reps.len() == n {
            closed = !truncated;
            break;
        }
    }
    let k = b.reps.len();
    let mut psi = vec![0; k * k];
    for x in 0..k {
        for y in 0..k {
            psi[x * k + y] = b.eng.le(b.reps[x], b.reps[y])?;
        }
    }
    let table = |t: &HashMap<(usize, usize), usize>| -> Vec<Option<usize>> {
        (0..k * k).map(|i| t.get(&(i / k, i % k)).copied()).collect()
    };
    let q = TermQuotient {
        base: m.clone(),
        reps: b.reps.iter().map(|&r| b.eng.arena.term(r)).collect(),
        psi,
        leaf_class,
        join: table(&join),
        meet: table(&meet),
        closed: closed && !over_size,
    };
    if q.closed {
        Ok(q)
    } else {
        Err(Error::CapExceeded(Box::new(q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{build_poset, DistLattice};

    fn antichain() -> PartialLattice {
        PartialLattice::discrete(build_poset(&["a", "b"], &[] as &[(&str, &str)]).unwrap())
    }

    fn square() -> PartialLattice {
        let p = build_poset(&["0", "p", "q", "1"], &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")]).unwrap();
        PartialLattice::from_lattice(&as_lattice(&p).unwrap())
    }

    /// Strict order on `P` as a 2-valued table: `⟦x ≤ y⟧ = 1` iff `x ≤ y`.
    fn indicator(pl: PartialLattice) -> MeasuredPL {
        let n = pl.len();
        let t: Vec<usize> = (0..n * n).map(|i| usize::from(!pl.le(i / n, i % n))).collect();
        MeasuredPL::from_phi_table(pl, &DistLattice::chain(2), &t).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let p = square();
        let t = parse_term("p & q | 1", p.poset()).unwrap();
        assert_eq!(t, Term::join(Term::meet(Term::leaf(1), Term::leaf(2)), Term::leaf(3)));
        assert_eq!(t.display(p.poset().names()).to_string(), "p & q | 1");
        let u = parse_term("p & (q | 1)", p.poset()).unwrap();
        assert_eq!(u.display(p.poset().names()).to_string(), "p & (q | 1)");
        let v = parse_term("p | (q | 1)", p.poset()).unwrap();
        assert_eq!(parse_term(&v.display(p.poset().names()).to_string(), p.poset()).unwrap(), v);
        assert_eq!(u.height(), 2);
        assert!(matches!(parse_term("p & ", p.poset()), Err(Error::TermParse { .. })));
        assert!(matches!(parse_term("p & z", p.poset()), Err(Error::UnknownElement(_))));
        assert!(matches!(parse_term("(p", p.poset()), Err(Error::TermParse { .. })));
    }

    #[test]
    fn classical_sets() {
        let p = antichain();
        let ab = Term::join(Term::leaf(0), Term::leaf(1));
        assert_eq!(term_lower(&p, &ab).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(term_upper(&p, &ab).is_empty());
        let sq = square();
        let pq = Term::join(Term::leaf(1), Term::leaf(2));
        assert_eq!(term_lower(&sq, &pq).len(), 4);
        assert!(term_ll(&p, &Term::meet(Term::leaf(0), Term::leaf(1)), &ab));
        assert!(!term_ll(&p, &Term::leaf(0), &Term::leaf(1)));
    }

    #[test]
    fn antichain_has_four_classes() {
        let p = antichain();
        let mut c = ClassicalTerms::new(&p);
        let terms = enumerate_terms(c.arena_mut(), 2, 3);
        let mut reps: Vec<TermId> = Vec::new();
        for &t in &terms {
            if !reps.iter().any(|&r| c.peq(t, r) && c.peq(r, t)) {
                reps.push(t);
            }
        }
        assert_eq!(reps.len(), 4);
    }

    #[test]
    fn enumeration_counts() {
        let mut a = TermArena::new();
        assert_eq!(enumerate_terms(&mut a, 5, 3).len(), 4265);
    }

    #[test]
    fn valued_leaves_match_table() {
        let m = indicator(square());
        let mut eng = TermEngine::new(&m);
        for a in 0..4 {
            for b in 0..4 {
                let (x, y) = (eng.arena_mut().leaf(a), eng.arena_mut().leaf(b));
                assert_eq!(eng.le(x, y).unwrap(), m.bv(a, b));
            }
        }
    }

    #[test]
    fn commuted_children_give_the_same_values() {
        let m = indicator(antichain());
        let mut eng = TermEngine::new(&m);
        let terms = enumerate_terms(eng.arena_mut(), 2, 2);
        for &x in &terms {
            for &y in &terms {
                let swap = |eng: &mut TermEngine, t: TermId| match eng.arena().node(t) {
                    Node::Join(a, b) => eng.arena_mut().join(b, a),
                    Node::Meet(a, b) => eng.arena_mut().meet(b, a),
                    Node::Leaf(_) => t,
                };
                let (sx, sy) = (swap(&mut eng, x), swap(&mut eng, y));
                assert_eq!(eng.le(x, y).unwrap(), eng.le(sx, sy).unwrap());
            }
        }
    }

    #[test]
    fn theorem_a_on_the_antichain() {
        let q = theorem_a(&indicator(antichain()), Caps::default()).unwrap();
        assert_eq!(q.len(), 4);
        assert!(q.is_proper());
        assert_eq!(q.to_lattice().unwrap().len(), 4);
    }

    #[test]
    fn theorem_a_on_a_lattice_returns_it() {
        let m = indicator(square());
        let q = theorem_a(&m, Caps::default()).unwrap();
        assert_eq!(q.len(), 4);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(q.psi(q.leaf_class(a), q.leaf_class(b)), m.bv(a, b));
            }
        }
    }

    #[test]
    fn theorem_a_reports_caps() {
        let p = PartialLattice::discrete(build_poset(&["a", "b", "c"], &[] as &[(&str, &str)]).unwrap());
        match theorem_a(&indicator(p), Caps { height: 3, size: 20_000 }) {
            Err(Error::CapExceeded(q)) => assert!(!q.is_closed() && q.len() > 3),
            other => panic!("expected a cap error, got {other:?}"),
        }
    }
}
