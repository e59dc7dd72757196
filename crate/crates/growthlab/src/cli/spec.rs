//! Builtin group specs and subgroup selectors.
//!
//! A spec is `name` or `name:args`, with `x` joining direct factors:
//! `dihedral:8`, `elementary:2,3`, `sym3xcyclic:2`. Selectors pick a
//! subgroup of a constructed group by role (`whole`, `trivial`, `center`,
//! `frattini`, a marked name like `base`), by element order (`cyclic4`),
//! or explicitly (`gen:1,4`, `elems:0,2`).

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::pgroups::{
    cyclic, dihedral, direct_product, elementary_abelian, frattini_p, free_cmea, klein_four,
    lamplighter_quotient, subgroup_generated, sym3, trivial, FiniteGroup, SubgroupHandle,
};

pub fn build_group(spec: &str, caps: &Caps) -> Result<FiniteGroup> {
    let mut acc: Option<FiniteGroup> = None;
    for part in spec.split('x') {
        let g = build_atom(part.trim(), caps)?;
        acc = Some(match acc {
            None => g,
            Some(f) => direct_product(&f, &g, caps)?,
        });
    }
    acc.ok_or_else(|| Error::domain("empty group spec"))
}

fn small(v: u64, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::domain(format!("{what} {v} is out of range")))
}

fn nums(args: Option<&str>, want: usize, spec: &str) -> Result<Vec<u64>> {
    let vals: Vec<u64> = match args {
        None => Vec::new(),
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::domain(format!("bad number `{}` in `{spec}`", t.trim())))
            })
            .collect::<Result<_>>()?,
    };
    if vals.len() != want {
        return Err(Error::domain(format!(
            "`{spec}` takes {want} argument(s), got {}",
            vals.len()
        )));
    }
    Ok(vals)
}

fn build_atom(part: &str, caps: &Caps) -> Result<FiniteGroup> {
    if part.is_empty() {
        return Err(Error::domain("empty group spec component"));
    }
    let (name, args) = match part.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (part, None),
    };
    match name {
        "cyclic" => {
            let v = nums(args, 1, part)?;
            cyclic(v[0], caps)
        }
        "elementary" => {
            let v = nums(args, 2, part)?;
            elementary_abelian(v[0], small(v[1], "rank")?, caps)
        }
        "dihedral" => {
            let v = nums(args, 1, part)?;
            dihedral(v[0], caps)
        }
        "cmea" => {
            let v = nums(args, 2, part)?;
            free_cmea(small(v[0], "rank")?, v[1], caps)
        }
        "lamplighter" => {
            let v = nums(args, 2, part)?;
            lamplighter_quotient(v[0], small(v[1], "exponent")?, caps)
        }
        "sym3" => {
            nums(args, 0, part)?;
            sym3(caps)
        }
        "klein4" => {
            nums(args, 0, part)?;
            klein_four(caps)
        }
        "trivial" => {
            nums(args, 0, part)?;
            trivial(caps)
        }
        other => Err(Error::domain(format!(
            "unknown builtin `{other}`; known: cyclic:N, elementary:P,R, dihedral:N, \
             cmea:D,P, lamplighter:P,K, sym3, klein4, trivial"
        ))),
    }
}

pub fn select_subgroup(g: &FiniteGroup, sel: &str, caps: &Caps) -> Result<SubgroupHandle> {
    let _ = caps;
    match sel {
        "trivial" => Ok(SubgroupHandle::trivial()),
        "whole" => Ok(SubgroupHandle::whole(g)),
        "center" => Ok(center(g)),
        "frattini" => frattini_p(g),
        _ => {
            if let Some(h) = g.marked_subgroup(sel) {
                return Ok(h);
            }
            if let Some(rest) = sel.strip_prefix("gen:") {
                return subgroup_generated(g, &parse_elems(rest)?);
            }
            if let Some(rest) = sel.strip_prefix("elems:") {
                return SubgroupHandle::from_elements(g, &parse_elems(rest)?);
            }
            if let Some(rest) = sel.strip_prefix("cyclic") {
                if let Ok(n) = rest.parse::<usize>() {
                    let x = (0..g.order() as u32)
                        .find(|&x| g.elem_order(x) == n)
                        .ok_or_else(|| {
                            Error::domain(format!("no element of order {n} in {}", g.label()))
                        })?;
                    return subgroup_generated(g, &[x]);
                }
            }
            Err(Error::domain(format!(
                "unknown subgroup selector `{sel}`; try whole, trivial, center, frattini, \
                 a marked name, cyclicN, gen:a,b, or elems:a,b"
            )))
        }
    }
}

fn parse_elems(list: &str) -> Result<Vec<u32>> {
    list.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad element index `{}`", t.trim())))
        })
        .collect()
}

fn center(g: &FiniteGroup) -> SubgroupHandle {
    let n = g.order() as u32;
    let elems: Vec<u32> = (0..n)
        .filter(|&x| (0..n).all(|y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    SubgroupHandle::from_elements(g, &elems).expect("the center is a subgroup")
}
