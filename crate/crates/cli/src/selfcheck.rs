//! The invariant suites behind `selfcheck`: run on the given files, then on
//! seeded random structures and formations.

use std::fmt::Write;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use lattice_forge::amalgam::{check_pushout_quotient, pushout_measured, theorem_b, verify_amalgam, VFormation};
use lattice_forge::gen::{dist_lattices_up_to, random_formation, random_measured, random_partial_lattice, rng};
use lattice_forge::measured::{check_truth_lemmas, quotient, MeasuredPL, TruthOptions};
use lattice_forge::partial::{con_lattice_capped, cong_closure, PartialLattice};
use lattice_forge::terms::{enumerate_terms, Caps, ClassicalTerms, TermEngine};
use lattice_forge::Error;

use crate::commands::Output;
use crate::workspace::load;
use crate::CliError;

#[derive(Default)]
struct Tally {
    structures: usize,
    checks: usize,
    /// Congruence lattices over the cap, left unchecked.
    large_con: usize,
}

/// Random presentations with few operations can have thousands of
/// congruences; past this many the `Con P` checks are skipped.
const CON_CAP: usize = 300;

fn violation(what: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Violation(format!("{what}: {msg}"))
}

/// Congruences are closed and `Con P` is a lattice.
fn check_pl(pl: &PartialLattice, what: &str, t: &mut Tally) -> Result<(), CliError> {
    let con = match con_lattice_capped(pl, CON_CAP) {
        Ok(c) => c,
        Err(Error::SizeLimit { .. }) => {
            t.large_con += 1;
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    for c in con.elements() {
        t.checks += 1;
        if cong_closure(pl, c.pairs()) != *c {
            return Err(violation(what, "a congruence is not closed"));
        }
    }
    t.checks += 1;
    lattice_forge::order::as_lattice(con.poset()).map_err(|e| violation(what, format!("Con P: {e}")))?;
    Ok(())
}

fn check_measured(m: &MeasuredPL, what: &str, r: &mut impl Rng, t: &mut Tally) -> Result<(), CliError> {
    let rep = check_truth_lemmas(m, &TruthOptions { max_subset: 4, all_u: true });
    t.checks += rep.checks;
    if let Some(f) = rep.failure {
        return Err(violation(what, f));
    }
    let e = m.values();
    let mut eng = TermEngine::new(m);
    let ids = enumerate_terms(eng.arena_mut(), m.len(), 2);
    let ids: Vec<_> = ids.into_iter().take(150).collect();
    for &x in &ids {
        t.checks += 1;
        if eng.le(x, x)? != e.top() {
            return Err(violation(what, "[[x <= x]] is not the top"));
        }
    }
    for _ in 0..300 {
        let (x, y, z) = (*ids.choose(r).unwrap(), *ids.choose(r).unwrap(), *ids.choose(r).unwrap());
        t.checks += 1;
        if !e.le(e.meet(eng.le(x, y)?, eng.le(y, z)?), eng.le(x, z)?) {
            return Err(violation(what, "[[x <= y]] & [[y <= z]] is not below [[x <= z]]"));
        }
    }
    // Each prime quotient orders the terms classically.
    for g in e.prime_filters() {
        let q = quotient(m, &g);
        let mut ct = ClassicalTerms::new(&q.pl);
        let cid: Vec<_> = ids
            .iter()
            .map(|&i| {
                let term = eng.arena().term(i).map_leaves(&|a| q.proj[a]);
                ct.intern(&term)
            })
            .collect();
        for _ in 0..300 {
            let (i, j) = (r.gen_range(0..ids.len()), r.gen_range(0..ids.len()));
            t.checks += 1;
            if g.contains(eng.le(ids[i], ids[j])?) != ct.peq(cid[i], cid[j]) {
                return Err(violation(what, "term order disagrees with a prime quotient"));
            }
        }
    }
    Ok(())
}

fn check_formation(r: &mut impl Rng, e: &lattice_forge::order::DistLattice, t: &mut Tally) -> Result<bool, CliError> {
    let fm = random_formation(r, e, 3, 4);
    let v = VFormation::new(fm.k.clone(), fm.p.clone(), fm.q.clone(), fm.f.clone(), fm.g.clone())?;
    let (v, _) = v.standardize()?;
    let push = pushout_measured(&v)?;
    for g in e.prime_filters() {
        t.checks += 1;
        if !check_pushout_quotient(&v, &push, &g) {
            return Err(violation("random formation", "pushout does not commute with a prime quotient"));
        }
    }
    match theorem_b(&fm.k, &fm.p, &fm.q, &fm.f, &fm.g, Caps::default()) {
        Ok(a) => {
            t.checks += 1;
            verify_amalgam(&fm.k, &fm.p, &fm.q, &fm.f, &fm.g, &a).map_err(|e| violation("random formation", e))?;
            Ok(true)
        }
        Err(Error::CapExceeded(_)) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

pub fn selfcheck(files: &[PathBuf], seed: u64, cases: usize) -> Result<Output, CliError> {
    let mut r = rng(seed);
    let mut report = String::new();
    let mut t = Tally::default();
    for f in files {
        let ws = load(f)?;
        let what = f.display().to_string();
        check_pl(&ws.pl, &what, &mut t)?;
        if let Some(m) = &ws.measured {
            check_measured(m, &what, &mut r, &mut t)?;
        }
        t.structures += 1;
    }
    writeln!(report, "files: {} checked", files.len()).unwrap();
    let es = dist_lattices_up_to(5);
    for case in 0..cases {
        let n = r.gen_range(1..=5);
        let pl = random_partial_lattice(&mut r, n);
        let e = es.choose(&mut r).unwrap();
        let m = random_measured(&mut r, &pl, e);
        let what = format!("random case {case} (seed {seed})");
        check_pl(&pl, &what, &mut t)?;
        check_measured(&m, &what, &mut r, &mut t)?;
        t.structures += 1;
    }
    writeln!(report, "random structures: {cases}").unwrap();
    let formations = cases.div_ceil(10);
    let es: Vec<_> = es.into_iter().filter(|e| e.len() >= 2 && e.len() <= 4).collect();
    let mut closed = 0;
    for _ in 0..formations {
        let e = es.choose(&mut r).unwrap().clone();
        closed += usize::from(check_formation(&mut r, &e, &mut t)?);
    }
    writeln!(report, "random formations: {formations} ({closed} amalgams closed within the caps and verified)").unwrap();
    if t.large_con > 0 {
        writeln!(report, "Con P checks skipped on {} structures with more than {CON_CAP} congruences", t.large_con).unwrap();
    }
    writeln!(report, "{} structures, {} checks, 0 violations", t.structures, t.checks).unwrap();
    Ok(Output { report, ..Output::default() })
}
