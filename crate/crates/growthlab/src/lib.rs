//! Exact computational tools for normal and characteristic subgroup growth.
//!
//! Everything here works over exact arithmetic: residues mod a prime,
//! arbitrary-precision counts, and rationals. No floats, anywhere.
//!
//! The crate is organized bottom-up:
//!
//! * [`fplin`] - dense linear algebra over F_p and subspace enumeration,
//! * [`freealg`] - truncated series in the free noncommutative F_p-algebra
//!   and the Magnus embedding, giving weighted relator degrees,
//! * [`gscert`] - Golod-Shafarevich certificates from Hilbert series data,
//! * [`pgroups`] - finite groups as multiplication tables, with the
//!   constructors, Frattini machinery, and lattice walks the growth
//!   estimates need,
//! * [`fpgmod`] - modules over F_p[G] with socle and isotypic-section
//!   extraction,
//! * [`growth`] - the growth tables and the inequality checkers that tie
//!   the layers together.
//!
//! The `growthlab` binary exposes the same operations on presentation
//! files and serialized groups; see [`cli`].

pub mod caps;
pub mod cli;
pub mod error;
pub mod fpgmod;
pub mod fplin;
pub mod freealg;
pub mod growth;
pub mod gscert;
pub mod pgroups;

pub use caps::Caps;
pub use error::{Error, Result};
