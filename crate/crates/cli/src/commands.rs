//! One function per subcommand. Each returns a text report and, where the
//! command builds a structure, its JSON file and Hasse diagram.

use std::fmt::Write;
use std::path::Path;

use lattice_forge::amalgam::{pushout_measured, pushout_pl, theorem_b, verify_amalgam, VFormation};
use lattice_forge::gadgets::{
    chain3_gadget, m3, m3_gadget, persp_gadget, persp_partial_lattice, relcomp_gadget, saturate, Application, Gadget,
};
use lattice_forge::measured::{quotient as prime_quotient, MeasuredPL};
use lattice_forge::order::{dualize, DistLattice, FinitePoset, Lattice};
use lattice_forge::partial::{con_lattice, PartialLattice};
use lattice_forge::terms::{bv_le_terms, parse_term, term_ll, term_peq, theorem_a, Caps, Term};

use crate::dot::hasse;
use crate::workspace::{load, load_d, Workspace};
use crate::CliError;

pub type CmdResult = Result<Output, CliError>;

#[derive(Clone, Debug, Default)]
pub struct Output {
    pub report: String,
    /// The structure produced, as a workspace file.
    pub json: Option<String>,
    pub dot: Option<String>,
}

impl Output {
    fn with(report: String, ws: &Workspace, title: &str) -> Output {
        Output { report, json: Some(ws.to_json()), dot: Some(hasse(ws.pl.poset(), title)) }
    }
}

fn summary(ws: &Workspace) -> String {
    let pl = &ws.pl;
    let mut s = format!("P: {} elements, {} joins, {} meets", pl.len(), pl.joins().len(), pl.meets().len());
    if let Some(m) = &ws.measured {
        write!(s, "; D: {} elements", m.values().len()).unwrap();
    }
    s
}

pub fn validate(path: &Path) -> CmdResult {
    let ws = load(path)?;
    Ok(Output { report: format!("OK\n{}\n", summary(&ws)), json: None, dot: Some(hasse(ws.pl.poset(), "P")) })
}

pub fn con(path: &Path) -> CmdResult {
    let ws = load(path)?;
    let pl = &ws.pl;
    let con = con_lattice(pl)?;
    let mut r = format!("|Con P| = {}\n", con.len());
    for (i, c) in con.elements().iter().enumerate() {
        let extra: Vec<String> = c
            .pairs()
            .filter(|&(x, y)| !pl.le(x, y))
            .map(|(x, y)| format!("{} <= {}", pl.name(x), pl.name(y)))
            .collect();
        writeln!(r, "c{i}: {{{}}}", extra.join(", ")).unwrap();
    }
    let p = con.poset();
    r.push_str("covers:\n");
    for (a, b) in p.covers() {
        writeln!(r, "  {} < {}", p.name(a), p.name(b)).unwrap();
    }
    Ok(Output { report: r, json: None, dot: Some(hasse(p, "Con P")) })
}

fn term(s: &str, p: &FinitePoset) -> Result<Term, CliError> {
    parse_term(s, p).map_err(|e| CliError::Parse(format!("term `{s}`: {e}")))
}

fn tag(l: &Lattice, x: usize) -> &'static str {
    if x == l.top() {
        ", top"
    } else if x == l.bot() {
        ", bottom"
    } else {
        ""
    }
}

pub fn bval(path: &Path, t1: &str, t2: &str) -> CmdResult {
    let ws = load(path)?;
    let m = ws.measured()?;
    let (x, y) = (term(t1, ws.pl.poset())?, term(t2, ws.pl.poset())?);
    let v = bv_le_terms(m, &x, &y)?;
    let (e, d) = (m.values(), dualize(m.values()));
    let report = format!(
        "[[{t1} <= {t2}]] = {} (E element {v}{})\nD reading: {} (D element {v}{})\n",
        e.name(v),
        tag(e, v),
        d.name(v),
        tag(&d, v)
    );
    Ok(Output { report, ..Output::default() })
}

pub fn freecmp(path: &Path, t1: &str, t2: &str) -> CmdResult {
    let ws = load(path)?;
    let p = &ws.pl;
    let (x, y) = (term(t1, p.poset())?, term(t2, p.poset())?);
    let mut r = String::new();
    writeln!(r, "{t1} <= {t2}: {}", term_peq(p, &x, &y)).unwrap();
    writeln!(r, "{t2} <= {t1}: {}", term_peq(p, &y, &x)).unwrap();
    writeln!(r, "{t1} << {t2}: {}", term_ll(p, &x, &y)).unwrap();
    writeln!(r, "{t2} << {t1}: {}", term_ll(p, &y, &x)).unwrap();
    if let Some(m) = &ws.measured {
        let e = m.values();
        writeln!(r, "[[{t1} <= {t2}]] = {}", e.name(bv_le_terms(m, &x, &y)?)).unwrap();
        writeln!(r, "[[{t2} <= {t1}]] = {}", e.name(bv_le_terms(m, &y, &x)?)).unwrap();
    }
    Ok(Output { report: r, ..Output::default() })
}

pub fn quotient(path: &Path, filter: &str) -> CmdResult {
    let ws = load(path)?;
    let m = ws.measured()?;
    let e = m.values();
    let filters = e.prime_filters();
    let g = filters.iter().find(|g| e.name(g.generator()) == filter).ok_or_else(|| {
        let names: Vec<&str> = filters.iter().map(|g| e.name(g.generator())).collect();
        CliError::Validation(format!("`{filter}` does not generate a prime filter of E (choose from {})", names.join(", ")))
    })?;
    let q = prime_quotient(m, g);
    let mut r = format!("P/G for G = up({filter}): {} classes\n", q.pl.len());
    for c in 0..q.pl.len() {
        let members: Vec<&str> = (0..m.len()).filter(|&x| q.proj[x] == c).map(|x| m.name(x)).collect();
        writeln!(r, "  {}: {}", q.pl.name(c), members.join(" ")).unwrap();
    }
    Ok(Output::with(r, &Workspace::from_pl(q.pl), "P/G"))
}

/// `k=p,k2=p2`, or by matching names when absent.
pub fn parse_map(spec: Option<&str>, k: &PartialLattice, p: &PartialLattice) -> Result<Vec<usize>, CliError> {
    let Some(spec) = spec else {
        return (0..k.len()).map(|i| Ok(p.idx(k.name(i))?)).collect();
    };
    let mut map = vec![None; k.len()];
    for pair in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = pair.split_once('=').ok_or_else(|| CliError::Parse(format!("map entry `{pair}` is not `x=y`")))?;
        map[k.idx(a.trim())?] = Some(p.idx(b.trim())?);
    }
    map.iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| CliError::Validation(format!("map does not send `{}` anywhere", k.name(i)))))
        .collect()
}

pub struct Formation {
    pub k: Workspace,
    pub p: Workspace,
    pub q: Workspace,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

pub fn load_formation(k: &Path, p: &Path, q: &Path, f: Option<&str>, g: Option<&str>) -> Result<Formation, CliError> {
    let (k, p, q) = (load(k)?, load(p)?, load(q)?);
    let f = parse_map(f, &k.pl, &p.pl)?;
    let g = parse_map(g, &k.pl, &q.pl)?;
    Ok(Formation { k, p, q, f, g })
}

fn map_lines(r: &mut String, label: &str, src: &PartialLattice, tgt: &dyn Fn(usize) -> String, map: &[usize]) {
    let parts: Vec<String> = (0..src.len()).map(|x| format!("{} -> {}", src.name(x), tgt(map[x]))).collect();
    writeln!(r, "{label}: {}", parts.join(", ")).unwrap();
}

pub fn pushout(fm: &Formation) -> CmdResult {
    let measured = [&fm.k, &fm.p, &fm.q].iter().all(|w| w.measured.is_some());
    let (ws, renamed_p, renamed_q, inc_p, inc_q) = if measured {
        let v = VFormation::new(
            fm.k.measured()?.clone(),
            fm.p.measured()?.clone(),
            fm.q.measured()?.clone(),
            fm.f.clone(),
            fm.g.clone(),
        )?;
        let (v, _) = v.standardize()?;
        let push = pushout_measured(&v)?;
        (Workspace::from_measured(push.r), v.p.pl().clone(), v.q.pl().clone(), push.inc_p, push.inc_q)
    } else {
        let v = VFormation::new(fm.k.pl.clone(), fm.p.pl.clone(), fm.q.pl.clone(), fm.f.clone(), fm.g.clone())?;
        let (v, _) = v.standardize()?;
        let push = pushout_pl(&v)?;
        (Workspace::from_pl(push.r), v.p, v.q, push.inc_p, push.inc_q)
    };
    let mut r = format!("|R| = {}\n", ws.pl.len());
    let name = |x: usize| ws.pl.name(x).to_string();
    map_lines(&mut r, "P -> R", &renamed_p, &name, &inc_p);
    map_lines(&mut r, "Q -> R", &renamed_q, &name, &inc_q);
    Ok(Output::with(r, &ws, "R"))
}

pub fn theorem_a_cmd(path: &Path, caps: Caps) -> CmdResult {
    let ws = load(path)?;
    let m = ws.measured()?;
    let q = match theorem_a(m, caps) {
        Ok(q) => q,
        Err(lattice_forge::Error::CapExceeded(q)) => {
            return Err(CliError::Validation(format!(
                "term quotient not closed within height {} and {} classes ({} classes found)",
                caps.height,
                caps.size,
                q.len()
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let mut r = format!("{} classes, closed, proper: {}\n", q.len(), q.is_proper());
    let leaf = |a: usize| q.rep_name(q.leaf_class(a));
    map_lines(&mut r, "P -> L", &ws.pl, &leaf, &(0..m.len()).collect::<Vec<_>>());
    let l = Workspace::from_measured(q.to_measured()?);
    Ok(Output::with(r, &l, "L"))
}

pub fn theorem_b_cmd(fm: &Formation, caps: Caps) -> CmdResult {
    let (k, p, q) = (fm.k.measured()?, fm.p.measured()?, fm.q.measured()?);
    let a = match theorem_b(k, p, q, &fm.f, &fm.g, caps) {
        Ok(a) => a,
        Err(lattice_forge::Error::CapExceeded(q)) => {
            return Err(CliError::Validation(format!(
                "amalgam not closed within height {} and {} classes ({} classes found)",
                caps.height,
                caps.size,
                q.len()
            )))
        }
        Err(e) => return Err(e.into()),
    };
    verify_amalgam(k, p, q, &fm.f, &fm.g, &a).map_err(|e| CliError::Violation(e.to_string()))?;
    let l = &a.lattice;
    let mut r = format!("{} classes, proper, both maps are homomorphic isometries\n", l.len());
    let name = |c: usize| l.rep_name(c);
    map_lines(&mut r, "P -> L", p.pl(), &name, &a.map_p);
    map_lines(&mut r, "Q -> L", q.pl(), &name, &a.map_q);
    Ok(Output::with(r, &Workspace::from_measured(l.to_measured()?), "L"))
}

/// What `gadget` builds.
#[derive(Clone, Debug)]
pub enum GadgetSpec {
    /// `M3[K]` for a lattice file or `<n>chain`.
    M3(String),
    /// The bare perspectivity partial lattice, or the measured gadget.
    Persp(Option<(String, [String; 4])>),
    RelComp { d: String, ab: String, bc: String },
    Chain3 { d: String, alpha: String, beta: String },
    /// Apply `relcomp:a,b,c`, `persp:o,a,b,i` or `chain3:o,i,alpha` steps
    /// in order.
    Saturate { file: String, steps: Vec<String> },
}

fn builtin_chain(s: &str) -> Option<Lattice> {
    let n: usize = s.strip_suffix("chain")?.parse().ok()?;
    (n >= 1).then(|| DistLattice::chain(n).lattice().clone())
}

fn d_value(d: &DistLattice, name: &str) -> Result<usize, CliError> {
    Ok(d.idx(name)?)
}

fn gadget_report(g: &Gadget) -> String {
    let a = &g.ambient;
    let names: Vec<String> = g.embedding.iter().map(|&x| a.name(x).to_string()).collect();
    let mut r = format!("{} gadget: |P| = {}, K embedded as {}\n", g.name, a.len(), names.join(" "));
    for (n, x) in &g.designated {
        writeln!(r, "  {n} = {}", a.name(*x)).unwrap();
    }
    r
}

fn parse_step(s: &str) -> Result<Application, CliError> {
    let (kind, args) = s.split_once(':').ok_or_else(|| CliError::Parse(format!("step `{s}` is not `kind:args`")))?;
    let args: Vec<String> = args.split(',').map(|a| a.trim().to_string()).collect();
    let bad = || CliError::Parse(format!("step `{s}`: wrong number of arguments"));
    match (kind, args.as_slice()) {
        ("relcomp", [a, b, c]) => Ok(Application::RelComp { a: a.clone(), b: b.clone(), c: c.clone() }),
        ("persp", [o, a, b, i]) => Ok(Application::Persp { o: o.clone(), a: a.clone(), b: b.clone(), i: i.clone() }),
        ("chain3", [o, i, alpha]) => Ok(Application::Chain3 { o: o.clone(), i: i.clone(), alpha: alpha.clone() }),
        ("relcomp" | "persp" | "chain3", _) => Err(bad()),
        _ => Err(CliError::Parse(format!("unknown step kind `{kind}`"))),
    }
}

pub fn gadget(spec: &GadgetSpec, caps: Caps) -> CmdResult {
    match spec {
        GadgetSpec::M3(src) => {
            let (k, measured): (Lattice, Option<MeasuredPL>) = match builtin_chain(src) {
                Some(l) => (l, None),
                None => {
                    let ws = load(Path::new(src))?;
                    (ws.pl.to_lattice()?, ws.measured)
                }
            };
            if let Some(km) = measured {
                let g = m3_gadget(&km)?;
                return Ok(Output::with(gadget_report(&g), &Workspace::from_measured(g.ambient), "M3[K]"));
            }
            let m = m3(&k)?;
            let diag: Vec<&str> = m.diagonal.iter().map(|&x| m.lattice.name(x)).collect();
            let r = format!("M3[K]: {} elements, diagonal {}\n", m.lattice.len(), diag.join(" "));
            Ok(Output::with(r, &Workspace::from_pl(PartialLattice::from_lattice(&m.lattice)), "M3[K]"))
        }
        GadgetSpec::Persp(None) => {
            let pl = persp_partial_lattice();
            let r = format!("perspectivity partial lattice: {} elements\n", pl.len());
            Ok(Output::with(r, &Workspace::from_pl(pl), "P"))
        }
        GadgetSpec::Persp(Some((d, [xi, eta, alpha, beta]))) => {
            let d = load_d(Path::new(d))?;
            let v = |s: &str| d_value(&d, s);
            let g = persp_gadget(&d, v(xi)?, v(eta)?, v(alpha)?, v(beta)?)?;
            Ok(Output::with(gadget_report(&g), &Workspace::from_measured(g.ambient.clone()), "P"))
        }
        GadgetSpec::RelComp { d, ab, bc } => {
            let d = load_d(Path::new(d))?;
            let g = relcomp_gadget(&d, d_value(&d, ab)?, d_value(&d, bc)?)?;
            Ok(Output::with(gadget_report(&g), &Workspace::from_measured(g.ambient.clone()), "P"))
        }
        GadgetSpec::Chain3 { d, alpha, beta } => {
            let d = load_d(Path::new(d))?;
            let g = chain3_gadget(&d, d_value(&d, alpha)?, d_value(&d, beta)?)?;
            Ok(Output::with(gadget_report(&g), &Workspace::from_measured(g.ambient.clone()), "P"))
        }
        GadgetSpec::Saturate { file, steps } => {
            let ws = load(Path::new(file))?;
            let l = ws.measured()?;
            let apps = steps.iter().map(|s| parse_step(s)).collect::<Result<Vec<_>, _>>()?;
            let (ext, done) = saturate(l, &apps, caps)?;
            let mut r = format!("{} steps, {} -> {} elements\n", done.len(), l.len(), ext.len());
            for (k, (s, step)) in steps.iter().zip(&done).enumerate() {
                let names: Vec<String> = step.designated.iter().map(|(n, _)| format!("{n}{}", k + 1)).collect();
                writeln!(r, "  {}. {s}: designated {}", k + 1, names.join(" ")).unwrap();
            }
            Ok(Output::with(r, &Workspace::from_measured(ext), "L"))
        }
    }
}
