//! Versioned JSON input files and exact output rendering.
//!
//! Both input schemas carry `"format": 1`. A group file is either
//! `{"format":1,"builtin":"dihedral:8"}` or a full multiplication table
//! `{"format":1,"order":n,"table":[...],"generators":[...]}` (row-major,
//! `table[a*n+b] = a*b`, optional label and generators). A module file is
//! `{"format":1,"p":q,"group":<spec>,"dim":d,"matrices":[...]}` where
//! `group` is a builtin spec string or an inline table object, and each
//! generator matrix is a flat row-major list of d*d entries mod p.
//!
//! Outputs never use floats: counts are decimal strings when they can
//! exceed machine range, rationals are always `"a/b"` strings.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fpgmod::FpGModule;
use crate::fplin::FpMatrix;
use crate::gscert::{rational_string, Rational};
use crate::growth::{BoundReport, Sense};
use crate::pgroups::FiniteGroup;

use super::spec::build_group;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupTableFile {
    pub format: u32,
    #[serde(default)]
    pub label: Option<String>,
    pub order: usize,
    pub table: Vec<u32>,
    #[serde(default)]
    pub generators: Option<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupBuiltinFile {
    format: u32,
    builtin: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupDoc {
    Builtin(GroupBuiltinFile),
    Table(GroupTableFile),
}

/// How a module file names its group: a builtin spec string or an inline
/// table object.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Builtin(String),
    Table(GroupTableFile),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub format: u32,
    pub p: u64,
    pub group: GroupSpec,
    pub dim: usize,
    pub matrices: Vec<Vec<u64>>,
}

fn check_format(format: u32) -> Result<()> {
    if format != 1 {
        return Err(Error::domain(format!(
            "unsupported format {format}; this build reads format 1"
        )));
    }
    Ok(())
}

fn realize_table(f: &GroupTableFile, caps: &Caps) -> Result<FiniteGroup> {
    check_format(f.format)?;
    FiniteGroup::from_table_with(
        f.label.clone().unwrap_or_else(|| "file".to_string()),
        f.order,
        f.table.clone(),
        f.generators.clone(),
        BTreeMap::new(),
        caps,
    )
}

pub fn load_group_file(path: &Path, caps: &Caps) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    let doc: GroupDoc = serde_json::from_str(&text)?;
    match doc {
        GroupDoc::Builtin(b) => {
            check_format(b.format)?;
            build_group(&b.builtin, caps)
        }
        GroupDoc::Table(t) => realize_table(&t, caps),
    }
}

pub fn load_module_file(path: &Path, caps: &Caps) -> Result<FpGModule> {
    let text = std::fs::read_to_string(path)?;
    let f: ModuleFile = serde_json::from_str(&text)?;
    check_format(f.format)?;
    let group = match &f.group {
        GroupSpec::Builtin(s) => build_group(s, caps)?,
        GroupSpec::Table(t) => realize_table(t, caps)?,
    };
    if f.matrices.len() != group.generators().len() {
        return Err(Error::domain(format!(
            "{} matrices for {} generator(s) of {}",
            f.matrices.len(),
            group.generators().len(),
            group.label()
        )));
    }
    let mut action = Vec::with_capacity(f.matrices.len());
    for flat in &f.matrices {
        if flat.len() != f.dim * f.dim {
            return Err(Error::domain(format!(
                "a generator matrix has {} entries, expected dim^2 = {}",
                flat.len(),
                f.dim * f.dim
            )));
        }
        let rows: Vec<Vec<u64>> = if f.dim == 0 {
            Vec::new()
        } else {
            flat.chunks(f.dim).map(|c| c.to_vec()).collect()
        };
        action.push(FpMatrix::from_rows(f.p, f.dim, &rows));
    }
    FpGModule::new(f.p, group, f.dim, action, caps)
}

/// `a/b`, `a`, or either with a leading minus sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let (ns, ds) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let bad = |part: &str| Error::domain(format!("`{part}` is not an integer in rational `{s}`"));
    let n: BigInt = ns.trim().parse().map_err(|_| bad(ns))?;
    let d: BigInt = ds.trim().parse().map_err(|_| bad(ds))?;
    if d.is_zero() {
        return Err(Error::domain(format!("zero denominator in rational `{s}`")));
    }
    Ok(Rational::new(n, d))
}

pub fn sense_symbol(s: Sense) -> &'static str {
    match s {
        Sense::Le => "<=",
        Sense::Ge => ">=",
        Sense::Gt => ">",
    }
}

fn rat(r: &Rational) -> Value {
    Value::String(rational_string(r))
}

/// The JSON body shared by every checker command.
pub fn report_value(echo: &str, group_label: Option<&str>, rep: &BoundReport) -> Value {
    let mut m = Map::new();
    m.insert("format".into(), json!(1));
    m.insert("command".into(), json!(echo));
    if let Some(label) = group_label {
        m.insert("group".into(), json!(label));
    }
    m.insert("name".into(), json!(rep.name));
    m.insert("holds".into(), json!(rep.holds));
    m.insert("vacuous".into(), json!(rep.vacuous));
    m.insert("left".into(), rat(&rep.left));
    m.insert("sense".into(), json!(sense_symbol(rep.sense)));
    m.insert("right".into(), rat(&rep.right));
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "at": r.at,
                "left": rational_string(&r.left),
                "sense": sense_symbol(r.sense),
                "right": rational_string(&r.right),
                "holds": r.holds,
            })
        })
        .collect();
    m.insert("rows".into(), Value::Array(rows));
    let wits: Vec<Value> = rep.witnesses.iter().map(|h| json!(h.elements())).collect();
    m.insert("witnesses".into(), Value::Array(wits));
    Value::Object(m)
}
