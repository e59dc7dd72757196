//! Command-line surface.
//!
//! One process, one command, exact output: JSON with sorted keys by
//! default, CSV where the command has a tabular form. Exit codes: 0 the
//! computation succeeded (and any checked property holds), 1 a negative
//! outcome (no certificate, a bound fails, a section does not verify),
//! 2 usage or parse errors, 3 a resource cap was hit. Timing goes to
//! stderr so stdout is byte-identical across reruns.

mod pres;
mod schema;
mod spec;

pub use pres::{parse_presentation, parse_word, serialize_presentation, word_string};
pub use schema::{load_group_file, load_module_file, parse_rational, report_value};
pub use spec::{build_group, select_subgroup};

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fpgmod::{count_submodules, isotypic_section, socle};
use crate::freealg::{magnus_degree, relator_hilbert_terms};
use crate::growth::{
    chain_upper_bound, growth_table, index_transfer_check, prop14_arithmetic_check,
    subspace_lower_bound, theorem1_check, virtual_transfer_check, BoundReport,
};
use crate::gscert::{ggs_search, ggs_value, rational_string, SearchOutcome};
use crate::pgroups::{characteristic_subgroups, cmea_rank, normal_subgroups, FiniteGroup};

#[derive(Parser)]
#[command(
    name = "growthlab",
    version,
    about = "Exact tools for subgroup growth: certificates, degrees, lattices, modules, bound checkers"
)]
struct Cli {
    /// Scale every resource cap by this factor.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Recorded in the command echo; the commands here are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV where available (the growth table).
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GroupSource {
    /// Builtin spec such as `dihedral:8` or `sym3xcyclic:2`.
    #[arg(long, value_name = "SPEC")]
    builtin: Option<String>,
    /// A `.group.json` file; or use --builtin instead.
    #[arg(value_name = "GROUP_FILE")]
    file: Option<PathBuf>,
}

impl GroupSource {
    fn load(&self, caps: &Caps) -> Result<FiniteGroup> {
        match (&self.builtin, &self.file) {
            (Some(s), None) => spec::build_group(s, caps),
            (None, Some(p)) => schema::load_group_file(p, caps),
            (Some(_), Some(_)) => Err(Error::domain("give either --builtin or a group file, not both")),
            (None, None) => Err(Error::domain("a group is required: --builtin SPEC or a group file")),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Golod-Shafarevich certificates over a presentation file.
    #[command(subcommand)]
    Ggs(GgsCmd),
    /// Weighted Magnus degrees of the relators, or of one --word.
    Degree {
        /// A `.pres` file.
        file: PathBuf,
        /// Measure this word instead of the file's relators.
        #[arg(long)]
        word: Option<String>,
        /// Truncation ceiling (default: the degree cap).
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// Minimal generators of a p-group plus its relation dimension.
    CmeaRank {
        #[command(flatten)]
        group: GroupSource,
    },
    /// Normal (and optionally characteristic) subgroup counts by index.
    Growth {
        #[command(flatten)]
        group: GroupSource,
        /// Also count characteristic subgroups.
        #[arg(long)]
        characteristic: bool,
    },
    /// Enumerate a subgroup lattice.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Socle, isotypic section, or submodule count of a module file.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Inequality checkers; exit 1 when the checked bound fails.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand)]
enum GgsCmd {
    /// Evaluate 1 - H_X(t0) + H_R(t0); exit 0 exactly when negative.
    Check {
        file: PathBuf,
        /// Evaluation point in (0,1), as `a/b`.
        #[arg(long)]
        t0: String,
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// Scan weights and grid points for a certificate.
    Search {
        file: PathBuf,
        /// Largest generator weight scanned.
        #[arg(long = "weights-max", default_value_t = 2)]
        weights_max: u32,
        /// Grid denominator: t0 ranges over a/GRID.
        #[arg(long, default_value_t = 16)]
        grid: u32,
        #[arg(long)]
        nmax: Option<u32>,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// All normal subgroups.
    Normal {
        #[command(flatten)]
        group: GroupSource,
    },
    /// All characteristic subgroups.
    Characteristic {
        #[command(flatten)]
        group: GroupSource,
    },
}

#[derive(Subcommand)]
enum ModuleCmd {
    /// Socle basis.
    Socle { file: PathBuf },
    /// Isotypic section with verified witnesses; exit 1 if unverified.
    Section { file: PathBuf },
    /// Exact submodule count.
    Count { file: PathBuf },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Per-index chain upper bound on normal subgroup counts (p-groups).
    Lemma21 {
        #[command(flatten)]
        group: GroupSource,
    },
    /// Subspace lower bound under the rank hypothesis.
    Lemma22 {
        #[command(flatten)]
        group: GroupSource,
        /// Selector for the normal subgroup N.
        #[arg(long)]
        sub: String,
        /// The constant, as `a/b`.
        #[arg(long)]
        c: String,
    },
    /// Rank transfer through the largest p-quotient of a normal subgroup.
    Thm13 {
        #[command(flatten)]
        group: GroupSource,
        /// Selector for the normal subgroup D.
        #[arg(long)]
        sub: String,
        #[arg(long)]
        p: u64,
    },
    /// Growth transfer into a subgroup, or with --normal the virtual
    /// rank transfer d_G(N) >= d_H(N)/(G:H).
    Transfer {
        #[command(flatten)]
        group: GroupSource,
        /// Selector for the subgroup (D, or H with --normal).
        #[arg(long)]
        sub: String,
        /// Selector for N; switches to the virtual rank transfer.
        #[arg(long)]
        normal: Option<String>,
    },
    /// Free-product rank arithmetic at (d, p, k).
    Prop14 {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
}

enum Rendered {
    Json(Value),
    Text(String),
}

pub fn run() -> i32 {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let echo = echo.join(" ");
    let cli = Cli::parse();
    let caps = Caps::scaled(cli.cap);
    let started = Instant::now();
    let code = match execute(&cli, &caps, &echo) {
        Ok((rendered, code)) => {
            match rendered {
                Rendered::Json(v) => {
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializable output"))
                }
                Rendered::Text(t) => print!("{t}"),
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    eprintln!("# elapsed: {} ms", started.elapsed().as_millis());
    code
}

fn report_out(echo: &str, label: Option<&str>, rep: &BoundReport) -> (Rendered, i32) {
    let code = if rep.holds { 0 } else { 1 };
    (Rendered::Json(schema::report_value(echo, label, rep)), code)
}

fn execute(cli: &Cli, caps: &Caps, echo: &str) -> Result<(Rendered, i32)> {
    debug_assert!(!(cli.json && cli.csv), "clap rejects --json with --csv");
    let _ = cli.seed; // interface stability; nothing here draws randomness
    if cli.csv && !matches!(cli.cmd, Cmd::Growth { .. }) {
        return Err(Error::domain("--csv is only available for `growth`"));
    }
    match &cli.cmd {
        Cmd::Ggs(GgsCmd::Check { file, t0, nmax }) => {
            let text = std::fs::read_to_string(file)?;
            let p = pres::parse_presentation(&text)?;
            let t0 = schema::parse_rational(t0)?;
            let value = ggs_value(&p, p.default_weights(), &t0, nmax.unwrap_or(caps.degree))?;
            let negative = value.is_negative();
            let mut body = json!({
                "format": 1,
                "command": echo,
                "t0": rational_string(&t0),
                "value": rational_string(&value),
                "certificate": negative,
            });
            if negative {
                body["delta"] = Value::String(rational_string(&-value));
            }
            Ok((Rendered::Json(body), if negative { 0 } else { 1 }))
        }
        Cmd::Ggs(GgsCmd::Search { file, weights_max, grid, nmax }) => {
            let text = std::fs::read_to_string(file)?;
            let p = pres::parse_presentation(&text)?;
            match ggs_search(&p, *weights_max, *grid, nmax.unwrap_or(caps.degree))? {
                SearchOutcome::Found(c) => {
                    let body = json!({
                        "format": 1,
                        "command": echo,
                        "found": true,
                        "weights": c.weights.weights(),
                        "t0": rational_string(&c.t0),
                        "value": rational_string(&c.value),
                        "delta": rational_string(&c.delta),
                    });
                    Ok((Rendered::Json(body), 0))
                }
                SearchOutcome::NotFound(r) => {
                    let min = match &r.min_value {
                        Some((v, w, t)) => json!({
                            "value": rational_string(v),
                            "weights": w.weights(),
                            "t0": rational_string(t),
                        }),
                        None => Value::Null,
                    };
                    let body = json!({
                        "format": 1,
                        "command": echo,
                        "found": false,
                        "weight_bound": r.weight_bound,
                        "grid": r.grid,
                        "maps_scanned": r.maps_scanned,
                        "maps_pruned": r.maps_pruned,
                        "min": min,
                    });
                    Ok((Rendered::Json(body), 1))
                }
            }
        }
        Cmd::Degree { file, word, nmax } => {
            let text = std::fs::read_to_string(file)?;
            let p = pres::parse_presentation(&text)?;
            let n_max = nmax.unwrap_or(caps.degree);
            let body = match word {
                Some(ws) => {
                    let w = pres::parse_word(ws, p.alphabet())?;
                    let d = magnus_degree(p.alphabet(), p.default_weights(), &w, n_max)?;
                    json!({
                        "format": 1,
                        "command": echo,
                        "word": pres::word_string(&w, p.alphabet()),
                        "degree": d,
                    })
                }
                None => {
                    let ds = relator_hilbert_terms(p.alphabet(), p.default_weights(), p.relators(), n_max)?;
                    json!({
                        "format": 1,
                        "command": echo,
                        "degrees": ds,
                    })
                }
            };
            Ok((Rendered::Json(body), 0))
        }
        Cmd::CmeaRank { group } => {
            let g = group.load(caps)?;
            let r = cmea_rank(&g)?;
            let body = json!({
                "format": 1,
                "command": echo,
                "group": g.label(),
                "cmea_rank": r,
            });
            Ok((Rendered::Json(body), 0))
        }
        Cmd::Growth { group, characteristic } => {
            let g = group.load(caps)?;
            let t = growth_table(&g, *characteristic, caps)?;
            if cli.csv {
                return Ok((Rendered::Text(t.to_csv()), 0));
            }
            let total_char = match t.s_characteristic(u64::MAX) {
                Some(c) => json!(c),
                None => Value::Null,
            };
            let body = json!({
                "format": 1,
                "command": echo,
                "group": t.label(),
                "table": t.to_json(),
                "total_normal": t.s_normal(u64::MAX),
                "total_characteristic": total_char,
            });
            Ok((Rendered::Json(body), 0))
        }
        Cmd::Lattice(lc) => {
            let (kind, group) = match lc {
                LatticeCmd::Normal { group } => ("normal", group),
                LatticeCmd::Characteristic { group } => ("characteristic", group),
            };
            let g = group.load(caps)?;
            let subs = match lc {
                LatticeCmd::Normal { .. } => normal_subgroups(&g, caps)?,
                LatticeCmd::Characteristic { .. } => characteristic_subgroups(&g, caps)?,
            };
            let rows: Vec<Value> = subs
                .iter()
                .map(|h| {
                    json!({
                        "order": h.order(),
                        "index": h.index_in(&g),
                        "elements": h.elements(),
                    })
                })
                .collect();
            let body = json!({
                "format": 1,
                "command": echo,
                "group": g.label(),
                "kind": kind,
                "count": subs.len(),
                "subgroups": rows,
            });
            Ok((Rendered::Json(body), 0))
        }
        Cmd::Module(mc) => match mc {
            ModuleCmd::Socle { file } => {
                let m = schema::load_module_file(file, caps)?;
                let s = socle(&m, caps)?;
                let body = json!({
                    "format": 1,
                    "command": echo,
                    "group": m.group().label(),
                    "p": m.p(),
                    "dim": m.dim(),
                    "socle_dim": s.dim(),
                    "socle_basis": s.space().basis(),
                });
                Ok((Rendered::Json(body), 0))
            }
            ModuleCmd::Section { file } => {
                let m = schema::load_module_file(file, caps)?;
                let sec = isotypic_section(&m, caps)?;
                let ok = sec.verify(caps)?;
                let body = json!({
                    "format": 1,
                    "command": echo,
                    "group": m.group().label(),
                    "p": m.p(),
                    "dim": m.dim(),
                    "simple_dim": sec.simple().dim(),
                    "multiplicity": sec.multiplicity(),
                    "depth": sec.depth(),
                    "m1_dim": sec.m1().dim(),
                    "m2_dim": sec.m2().dim(),
                    "witnesses": sec.witnesses(),
                    "verified": ok,
                });
                Ok((Rendered::Json(body), if ok { 0 } else { 1 }))
            }
            ModuleCmd::Count { file } => {
                let m = schema::load_module_file(file, caps)?;
                let c = count_submodules(&m, caps)?;
                let body = json!({
                    "format": 1,
                    "command": echo,
                    "group": m.group().label(),
                    "p": m.p(),
                    "dim": m.dim(),
                    "count": c.to_string(),
                });
                Ok((Rendered::Json(body), 0))
            }
        },
        Cmd::Check(cc) => match cc {
            CheckCmd::Lemma21 { group } => {
                let g = group.load(caps)?;
                let rep = chain_upper_bound(&g, caps)?;
                Ok(report_out(echo, Some(g.label()), &rep))
            }
            CheckCmd::Lemma22 { group, sub, c } => {
                let g = group.load(caps)?;
                let n = spec::select_subgroup(&g, sub, caps)?;
                let c = schema::parse_rational(c)?;
                let rep = subspace_lower_bound(&g, &n, &c, caps)?;
                Ok(report_out(echo, Some(g.label()), &rep))
            }
            CheckCmd::Thm13 { group, sub, p } => {
                let g = group.load(caps)?;
                let d = spec::select_subgroup(&g, sub, caps)?;
                let rep = theorem1_check(&g, &d, *p, caps)?;
                Ok(report_out(echo, Some(g.label()), &rep))
            }
            CheckCmd::Transfer { group, sub, normal } => {
                let g = group.load(caps)?;
                let h = spec::select_subgroup(&g, sub, caps)?;
                let rep = match normal {
                    None => index_transfer_check(&g, &h, caps)?,
                    Some(nsel) => {
                        let n = spec::select_subgroup(&g, nsel, caps)?;
                        virtual_transfer_check(&g, &h, &n, caps)?
                    }
                };
                Ok(report_out(echo, Some(g.label()), &rep))
            }
            CheckCmd::Prop14 { d, p, k } => {
                let rep = prop14_arithmetic_check(*d, *p, *k)?;
                Ok(report_out(echo, None, &rep))
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_command_tree_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn csv_is_growth_only() {
        let caps = Caps::default();
        let cli = Cli::try_parse_from(["growthlab", "--csv", "cmea-rank", "--builtin", "cyclic:4"]).unwrap();
        assert!(matches!(execute(&cli, &caps, ""), Err(Error::Domain(_))));
        let cli = Cli::try_parse_from(["growthlab", "--csv", "growth", "--builtin", "cyclic:4"]).unwrap();
        let (r, code) = execute(&cli, &caps, "").unwrap();
        assert_eq!(code, 0);
        match r {
            Rendered::Text(t) => assert!(t.starts_with("index,normal")),
            Rendered::Json(_) => panic!("expected CSV"),
        }
    }

    #[test]
    fn group_source_needs_exactly_one() {
        let caps = Caps::default();
        let none = GroupSource { builtin: None, file: None };
        assert!(none.load(&caps).is_err());
        let both = GroupSource {
            builtin: Some("sym3".into()),
            file: Some(PathBuf::from("x.group.json")),
        };
        assert!(both.load(&caps).is_err());
    }
}
