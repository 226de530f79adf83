//! The JSON file format.
//!
//! ```json
//! {
//!   "lattice_D": { "elements": ["0", "1"], "le": [["0", "1"]] },
//!   "partial_lattice": {
//!     "elements": ["a", "b"],
//!     "le": [],
//!     "joins": [{ "args": ["a"], "value": "a" }],
//!     "meets": []
//!   },
//!   "phi": [["a", "b", "1"], ["b", "a", "1"]]
//! }
//! ```
//!
//! `phi` lists `φΘ⁺(x, y)` in `D`. Pairs with `x ≤ y` may be left out (they
//! read as the bottom of `D`); every other pair must be present.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use lattice_forge::measured::MeasuredPL;
use lattice_forge::order::{as_dist_lattice, build_poset, dualize, DistLattice, FinitePoset};
use lattice_forge::partial::{validate_pl, PartialLattice};
use lattice_forge::Error;

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct File {
    #[serde(rename = "lattice_D", default, skip_serializing_if = "Option::is_none")]
    pub lattice_d: Option<OrderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_lattice: Option<PlSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<(String, String, String)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub le: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub le: Vec<(String, String)>,
    #[serde(default)]
    pub joins: Vec<OpSpec>,
    #[serde(default)]
    pub meets: Vec<OpSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpSpec {
    pub args: Vec<String>,
    pub value: String,
}

/// A parsed and validated file: `P`, and the measured structure when the
/// file carries `D` and `φ`.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub pl: PartialLattice,
    pub measured: Option<MeasuredPL>,
}

impl Workspace {
    pub fn measured(&self) -> Result<&MeasuredPL, CliError> {
        self.measured.as_ref().ok_or_else(|| CliError::Validation("this command needs `lattice_D` and `phi`".into()))
    }

    pub fn from_pl(pl: PartialLattice) -> Self {
        Workspace { pl, measured: None }
    }

    pub fn from_measured(m: MeasuredPL) -> Self {
        Workspace { pl: m.pl().clone(), measured: Some(m) }
    }

    pub fn to_file(&self) -> File {
        match &self.measured {
            Some(m) => measured_file(m),
            None => File { partial_lattice: Some(pl_spec(&self.pl)), ..File::default() },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("plain data serializes");
        s.push('\n');
        s
    }
}

pub fn parse_file(text: &str) -> Result<File, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn read_file(path: &Path) -> Result<File, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_file(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn load(path: &Path) -> Result<Workspace, CliError> {
    build(&read_file(path)?)
}

pub fn parse(text: &str) -> Result<Workspace, CliError> {
    build(&parse_file(text)?)
}

/// Just `D` from a file.
pub fn load_d(path: &Path) -> Result<DistLattice, CliError> {
    let f = read_file(path)?;
    let d = f.lattice_d.as_ref().ok_or_else(|| CliError::Validation(format!("{}: no `lattice_D`", path.display())))?;
    Ok(dist_lattice(d)?)
}

fn poset(elements: &[String], le: &[(String, String)]) -> lattice_forge::Result<FinitePoset> {
    build_poset(elements, le)
}

pub fn dist_lattice(spec: &OrderSpec) -> lattice_forge::Result<DistLattice> {
    as_dist_lattice(&poset(&spec.elements, &spec.le)?)
}

fn ops(p: &FinitePoset, specs: &[OpSpec]) -> lattice_forge::Result<Vec<(Vec<usize>, usize)>> {
    specs
        .iter()
        .map(|o| Ok((o.args.iter().map(|a| p.idx(a)).collect::<lattice_forge::Result<_>>()?, p.idx(&o.value)?)))
        .collect()
}

pub fn partial_lattice(spec: &PlSpec) -> lattice_forge::Result<PartialLattice> {
    let p = poset(&spec.elements, &spec.le)?;
    let (joins, meets) = (ops(&p, &spec.joins)?, ops(&p, &spec.meets)?);
    validate_pl(p, joins, meets)
}

/// Validate in the order poset, `D`, `P`, table.
pub fn build(f: &File) -> Result<Workspace, CliError> {
    let spec = f.partial_lattice.as_ref().ok_or_else(|| CliError::Validation("no `partial_lattice`".into()))?;
    let p = poset(&spec.elements, &spec.le)?;
    let d = f.lattice_d.as_ref().map(dist_lattice).transpose()?;
    let (joins, meets) = (ops(&p, &spec.joins)?, ops(&p, &spec.meets)?);
    let pl = validate_pl(p, joins, meets)?;
    let Some(d) = d else {
        if f.phi.is_some() {
            return Err(CliError::Validation("`phi` given without `lattice_D`".into()));
        }
        return Ok(Workspace::from_pl(pl));
    };
    let n = pl.len();
    let mut table: Vec<Option<usize>> = vec![None; n * n];
    for (x, y, v) in f.phi.iter().flatten() {
        let (x, y) = (pl.idx(x)?, pl.idx(y)?);
        table[x * n + y] = Some(d.idx(v)?);
    }
    let mut t = Vec::with_capacity(n * n);
    for (i, v) in table.into_iter().enumerate() {
        let (x, y) = (i / n, i % n);
        match v {
            Some(v) => t.push(v),
            None if pl.le(x, y) => t.push(d.bot()),
            None => return Err(Error::TableNotTotal(pl.name(x).into(), pl.name(y).into()).into()),
        }
    }
    let m = MeasuredPL::from_phi_table(pl, &d, &t)?;
    Ok(Workspace::from_measured(m))
}

fn covers(p: &FinitePoset) -> Vec<(String, String)> {
    p.covers().into_iter().map(|(a, b)| (p.name(a).to_string(), p.name(b).to_string())).collect()
}

fn op_specs(p: &FinitePoset, ops: &BTreeMap<Vec<usize>, usize>) -> Vec<OpSpec> {
    ops.iter()
        .map(|(k, &v)| OpSpec { args: k.iter().map(|&a| p.name(a).to_string()).collect(), value: p.name(v).to_string() })
        .collect()
}

pub fn pl_spec(pl: &PartialLattice) -> PlSpec {
    let p = pl.poset();
    PlSpec {
        elements: p.names().to_vec(),
        le: covers(p),
        joins: op_specs(p, pl.joins()),
        meets: op_specs(p, pl.meets()),
    }
}

pub fn order_spec(p: &FinitePoset) -> OrderSpec {
    OrderSpec { elements: p.names().to_vec(), le: covers(p) }
}

fn measured_file(m: &MeasuredPL) -> File {
    // The stored table is in `E = D^∂`; the same index names the value in
    // `D`.
    let d = dualize(m.values());
    let n = m.len();
    let phi = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| !m.pl().le(x, y))
        .map(|(x, y)| (m.name(x).to_string(), m.name(y).to_string(), d.name(m.bv(x, y)).to_string()))
        .collect();
    File { lattice_d: Some(order_spec(d.poset())), partial_lattice: Some(pl_spec(m.pl())), phi: Some(phi) }
}
