//! Resource caps.
//!
//! Every brute-force walk in the crate is guarded by one of these limits
//! so that a desk-scale query stays desk-scale. Exceeding a cap is a
//! reportable error, never silent truncation of an answer.

/// Limits enforced by the various modules. `Default` gives the documented
/// desk-scale values; [`Caps::scaled`] multiplies them uniformly.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Largest group order a constructor will materialize as a table.
    pub order: u64,
    /// Largest group order for full normal/characteristic lattice walks.
    pub lattice: u64,
    /// Largest group order for automorphism-group enumeration.
    pub aut: u64,
    /// Candidate-vector budget for brute-force subspace/submodule walks,
    /// the matrix-entry budget when validating a module action over a
    /// whole group, and the per-series stored-term budget in the free
    /// algebra.
    pub enumeration: u64,
    /// Default truncation ceiling for weighted Magnus degrees.
    pub degree: u32,
    /// Node budget for backtracking searches (minimal generating sets,
    /// automorphism images, normal-generator sets).
    pub work: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order: 4096,
            lattice: 512,
            aut: 128,
            enumeration: 1 << 20,
            degree: 24,
            work: 20_000_000,
        }
    }
}

impl Caps {
    /// Uniformly scale every cap by `factor` (the CLI's global `--cap`).
    pub fn scaled(factor: u64) -> Self {
        let base = Caps::default();
        Caps {
            order: base.order.saturating_mul(factor),
            lattice: base.lattice.saturating_mul(factor),
            aut: base.aut.saturating_mul(factor),
            enumeration: base.enumeration.saturating_mul(factor),
            degree: (base.degree as u64).saturating_mul(factor).min(u32::MAX as u64) as u32,
            work: base.work.saturating_mul(factor),
        }
    }
}
