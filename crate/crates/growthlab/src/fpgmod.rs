//! Modules over a group algebra F_p[G]: spin closures, socles, isotypic
//! sections with explicit witnesses, and exact submodule counts.
//!
//! A module is stored as one invertible matrix per chosen group generator.
//! The constructor walks the whole Cayley graph once, so a value of type
//! [`FpGModule`] is always an honest representation, not just a tuple of
//! matrices. Submodule computations are brute-force vector sweeps guarded
//! by the enumeration cap; within that budget they are exact.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fplin::{fp, is_prime, BigCount, FpMatrix, Subspace};
use crate::pgroups::FiniteGroup;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use std::collections::BTreeSet;

/// A finite-dimensional F_p[G]-module: the images of the group's chosen
/// generators under a matrix representation, acting on column vectors.
#[derive(Clone)]
pub struct FpGModule {
    p: u64,
    group: FiniteGroup,
    dim: usize,
    /// One matrix per group generator, in the group's generator order.
    action: Vec<FpMatrix>,
}

impl std::fmt::Debug for FpGModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FpGModule(dim {} over F_{}[{}])", self.dim, self.p, self.group.label())
    }
}

impl PartialEq for FpGModule {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.dim == other.dim
            && self.group == other.group
            && self.group.generators() == other.group.generators()
            && self.action == other.action
    }
}

impl Eq for FpGModule {}

impl FpGModule {
    /// Validate generator matrices as a representation of `group`.
    ///
    /// Checks shape, invertibility, and then single-valuedness of the
    /// induced map on every element by multiplying along every edge of the
    /// Cayley graph. That last check is what makes relation violations
    /// (a matrix of the wrong order, a broken commutation pattern)
    /// impossible to smuggle in.
    pub fn new(
        p: u64,
        group: FiniteGroup,
        dim: usize,
        action: Vec<FpMatrix>,
        caps: &Caps,
    ) -> Result<FpGModule> {
        if !is_prime(p) {
            return Err(Error::domain(format!("modulus {p} is not prime")));
        }
        let gens = group.generators().to_vec();
        if action.len() != gens.len() {
            return Err(Error::domain(format!(
                "{} action matrices for {} generators",
                action.len(),
                gens.len()
            )));
        }
        for (j, a) in action.iter().enumerate() {
            if a.p() != p {
                return Err(Error::domain(format!("action matrix {j} is not over F_{p}")));
            }
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::domain(format!(
                    "action matrix {j} is {}x{}, expected {dim}x{dim}",
                    a.rows(),
                    a.cols()
                )));
            }
            if a.invert().is_none() {
                return Err(Error::domain(format!("action matrix {j} is singular")));
            }
        }
        let order = group.order();
        let entries = (order as u128) * (dim as u128) * (dim as u128);
        if entries > caps.enumeration as u128 {
            return Err(Error::Cap {
                cap: "enumeration",
                limit: caps.enumeration as u128,
                needed: entries,
            });
        }
        let mut rho: Vec<Option<FpMatrix>> = vec![None; order];
        rho[0] = Some(FpMatrix::identity(p, dim));
        let mut queue = vec![0u32];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let rx = rho[x as usize].clone().expect("queued element has an image");
            for (j, &g) in gens.iter().enumerate() {
                let y = group.mul(x, g) as usize;
                let cand = rx.mul(&action[j]);
                match &rho[y] {
                    None => {
                        rho[y] = Some(cand);
                        queue.push(y as u32);
                    }
                    Some(m) if *m == cand => {}
                    Some(_) => {
                        return Err(Error::domain(
                            "action matrices violate the group's relations",
                        ))
                    }
                }
            }
        }
        // Generators generate, so the walk covered everything.
        debug_assert!(rho.iter().all(|r| r.is_some()));
        Ok(FpGModule { p, group, dim, action })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn action(&self) -> &[FpMatrix] {
        &self.action
    }
}

/// The module on which every generator acts as the identity.
pub fn trivial_module(group: &FiniteGroup, p: u64, n: usize, caps: &Caps) -> Result<FpGModule> {
    let action = group.generators().iter().map(|_| FpMatrix::identity(p, n)).collect();
    FpGModule::new(p, group.clone(), n, action, caps)
}

/// One-dimensional module from a scalar per generator.
pub fn one_dim_module(
    group: &FiniteGroup,
    p: u64,
    scalars: &[u64],
    caps: &Caps,
) -> Result<FpGModule> {
    if scalars.len() != group.generators().len() {
        return Err(Error::domain(format!(
            "{} scalars for {} generators",
            scalars.len(),
            group.generators().len()
        )));
    }
    let action = scalars.iter().map(|&s| FpMatrix::from_rows(p, 1, &[vec![s]])).collect();
    FpGModule::new(p, group.clone(), 1, action, caps)
}

/// The group algebra acting on itself by left multiplication: basis vector
/// e_x for each group element, g sending e_x to e_{gx}.
pub fn regular_module(group: &FiniteGroup, p: u64, caps: &Caps) -> Result<FpGModule> {
    let n = group.order();
    let mut action = Vec::with_capacity(group.generators().len());
    for &g in group.generators() {
        let mut m = FpMatrix::zero(p, n, n);
        for x in 0..n {
            m.set(group.mul(g, x as u32) as usize, x, 1);
        }
        action.push(m);
    }
    FpGModule::new(p, group.clone(), n, action, caps)
}

/// n-fold direct sum of `m` with itself, block diagonal. n = 0 gives the
/// zero module.
pub fn power_module(m: &FpGModule, n: usize, caps: &Caps) -> Result<FpGModule> {
    let d = m.dim * n;
    let mut action = Vec::with_capacity(m.action.len());
    for a in &m.action {
        let mut b = FpMatrix::zero(m.p, d, d);
        for block in 0..n {
            let off = block * m.dim;
            for r in 0..m.dim {
                for c in 0..m.dim {
                    b.set(off + r, off + c, a.get(r, c));
                }
            }
        }
        action.push(b);
    }
    FpGModule::new(m.p, m.group.clone(), d, action, caps)
}

/// Does every generator map `space` into itself?
pub fn is_invariant(m: &FpGModule, space: &Subspace) -> bool {
    space.ambient() == m.dim
        && space.p() == m.p
        && space
            .basis()
            .iter()
            .all(|b| m.action.iter().all(|a| space.contains_vec(&a.mul_vec(b))))
}

/// An invariant subspace of a module.
#[derive(Debug, Clone)]
pub struct Submodule {
    parent: FpGModule,
    space: Subspace,
}

impl Submodule {
    pub fn zero(parent: &FpGModule) -> Submodule {
        Submodule { parent: parent.clone(), space: Subspace::zero(parent.p, parent.dim) }
    }

    pub fn whole(parent: &FpGModule) -> Submodule {
        Submodule { parent: parent.clone(), space: Subspace::full(parent.p, parent.dim) }
    }

    /// Wrap a subspace, rejecting it unless it is invariant.
    pub fn from_space(parent: &FpGModule, space: Subspace) -> Result<Submodule> {
        if space.ambient() != parent.dim || space.p() != parent.p {
            return Err(Error::domain("subspace does not live in the module"));
        }
        if !is_invariant(parent, &space) {
            return Err(Error::domain("subspace is not invariant under the action"));
        }
        Ok(Submodule { parent: parent.clone(), space })
    }

    pub fn parent(&self) -> &FpGModule {
        &self.parent
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Smallest submodule containing the given vectors: close the span under
/// the generator action. Generators act invertibly, so forward images
/// suffice.
pub fn spin(m: &FpGModule, vectors: &[Vec<u64>]) -> Submodule {
    for v in vectors {
        assert_eq!(v.len(), m.dim, "spin vector has wrong length");
    }
    let mut space = Subspace::from_rows(m.p, m.dim, vectors);
    loop {
        let mut add: Vec<Vec<u64>> = Vec::new();
        for b in space.basis() {
            for a in &m.action {
                let w = a.mul_vec(b);
                if !space.contains_vec(&w) {
                    add.push(w);
                }
            }
        }
        if add.is_empty() {
            break;
        }
        let mut rows = space.basis().to_vec();
        rows.extend(add);
        space = Subspace::from_rows(m.p, m.dim, &rows);
    }
    Submodule { parent: m.clone(), space }
}

fn enum_guard(p: u64, dim: usize, caps: &Caps) -> Result<()> {
    let needed = (p as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if needed > caps.enumeration as u128 {
        return Err(Error::Cap { cap: "enumeration", limit: caps.enumeration as u128, needed });
    }
    Ok(())
}

/// Every distinct cyclic submodule spin(M, {v}), v nonzero, in canonical
/// order. The p^dim sweep is the enumeration-capped step.
fn cyclic_spins(m: &FpGModule, caps: &Caps) -> Result<Vec<Subspace>> {
    enum_guard(m.p, m.dim, caps)?;
    let full = Subspace::full(m.p, m.dim);
    let mut set: BTreeSet<Subspace> = BTreeSet::new();
    for v in full.vectors() {
        if v.iter().any(|&x| x != 0) {
            set.insert(spin(m, std::slice::from_ref(&v)).space);
        }
    }
    Ok(set.into_iter().collect())
}

/// Socle plus a greedy direct-sum decomposition of it into minimal
/// submodules.
///
/// A cyclic submodule is minimal exactly when no lower-dimensional cyclic
/// submodule sits inside it (any proper nonzero submodule would contain
/// one), so one containment sweep over the cyclic inventory settles
/// minimality for all of them. The greedy pass then picks a direct
/// spanning subfamily: whenever a minimal W meets the running sum it lies
/// inside it, so a single pass reaches the whole socle.
fn socle_summands(m: &FpGModule, caps: &Caps) -> Result<(Subspace, Vec<Subspace>)> {
    let mut cyclics = cyclic_spins(m, caps)?;
    cyclics.sort_by_key(|s| s.dim());
    let mut minimals: Vec<Subspace> = Vec::new();
    for w in &cyclics {
        if !minimals.iter().any(|u| u.dim() < w.dim() && w.contains(u)) {
            minimals.push(w.clone());
        }
    }
    let mut soc = Subspace::zero(m.p, m.dim);
    for w in &minimals {
        soc = soc.join(w);
    }
    let mut chosen: Vec<Subspace> = Vec::new();
    let mut sum = Subspace::zero(m.p, m.dim);
    for w in &minimals {
        let j = sum.join(w);
        if j.dim() == sum.dim() + w.dim() {
            chosen.push(w.clone());
            sum = j;
        }
    }
    debug_assert_eq!(sum, soc);
    Ok((soc, chosen))
}

/// Sum of all minimal nonzero submodules.
pub fn socle(m: &FpGModule, caps: &Caps) -> Result<Submodule> {
    let (soc, _) = socle_summands(m, caps)?;
    Ok(Submodule { parent: m.clone(), space: soc })
}

/// The action restricted to an invariant subspace, in the coordinates of
/// its canonical basis.
pub fn restriction(sub: &Submodule, caps: &Caps) -> Result<FpGModule> {
    restrict_space(&sub.parent, &sub.space, caps)
}

fn restrict_space(m: &FpGModule, w: &Subspace, caps: &Caps) -> Result<FpGModule> {
    let k = w.dim();
    let basis = w.basis();
    // RREF basis: the coefficient of basis row r in any member vector is
    // just its entry at r's pivot column.
    let pivots: Vec<usize> = basis
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("no zero basis rows"))
        .collect();
    let mut mats = Vec::with_capacity(m.action.len());
    for a in &m.action {
        let mut c = FpMatrix::zero(m.p, k, k);
        for col in 0..k {
            let img = a.mul_vec(&basis[col]);
            debug_assert!(w.contains_vec(&img), "restriction of a non-invariant subspace");
            for r in 0..k {
                c.set(r, col, img[pivots[r]]);
            }
        }
        mats.push(c);
    }
    FpGModule::new(m.p, m.group.clone(), k, mats, caps)
}

/// Quotient of a module by a submodule, with the maps between the two
/// coordinate systems.
pub struct QuotientModule {
    module: FpGModule,
    parent: FpGModule,
    sub: Subspace,
    /// Coset representatives: ambient vectors whose classes form the
    /// quotient's basis.
    reps: Vec<Vec<u64>>,
    /// Reads (submodule coordinates, quotient coordinates) off an ambient
    /// vector.
    tinv: FpMatrix,
    k: usize,
}

pub fn quotient_module(n: &Submodule, caps: &Caps) -> Result<QuotientModule> {
    let m = &n.parent;
    let (p, d, k) = (m.p, m.dim, n.space.dim());
    let mut rows: Vec<Vec<u64>> = n.space.basis().to_vec();
    let mut cur = n.space.clone();
    for i in 0..d {
        if rows.len() == d {
            break;
        }
        let mut e = vec![0u64; d];
        e[i] = 1;
        if !cur.contains_vec(&e) {
            rows.push(e.clone());
            cur = cur.join(&Subspace::from_rows(p, d, &[e]));
        }
    }
    let t = FpMatrix::from_rows(p, d, &rows).transpose();
    let tinv = t.invert().expect("completed basis is invertible");
    let reps: Vec<Vec<u64>> = rows[k..].to_vec();
    let qd = d - k;
    let mut mats = Vec::with_capacity(m.action.len());
    for a in &m.action {
        let mut q = FpMatrix::zero(p, qd, qd);
        for c in 0..qd {
            let x = tinv.mul_vec(&a.mul_vec(&reps[c]));
            for r in 0..qd {
                q.set(r, c, x[k + r]);
            }
        }
        mats.push(q);
    }
    let module = FpGModule::new(p, m.group.clone(), qd, mats, caps)?;
    Ok(QuotientModule { module, parent: m.clone(), sub: n.space.clone(), reps, tinv, k })
}

impl QuotientModule {
    pub fn module(&self) -> &FpGModule {
        &self.module
    }

    pub fn parent(&self) -> &FpGModule {
        &self.parent
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    /// Class of an ambient vector, in quotient coordinates.
    pub fn project(&self, v: &[u64]) -> Vec<u64> {
        self.tinv.mul_vec(v)[self.k..].to_vec()
    }

    /// The chosen representative of a quotient vector's class.
    pub fn lift(&self, q: &[u64]) -> Vec<u64> {
        assert_eq!(q.len(), self.module.dim, "quotient vector has wrong length");
        let p = self.parent.p;
        let mut v = vec![0u64; self.parent.dim];
        for (c, &coef) in q.iter().enumerate() {
            if coef != 0 {
                for (j, &r) in self.reps[c].iter().enumerate() {
                    v[j] = fp::add(p, v[j], fp::mul(p, coef, r));
                }
            }
        }
        v
    }

    /// Full preimage of a quotient subspace, as an ambient subspace.
    pub fn preimage(&self, s: &Subspace) -> Subspace {
        let mut rows = self.sub.basis().to_vec();
        rows.extend(s.basis().iter().map(|b| self.lift(b)));
        Subspace::from_rows(self.parent.p, self.parent.dim, &rows)
    }
}

/// Basis of the space of intertwiners X with X a_j = b_j X for every
/// generator, as dim(t) x dim(s) matrices.
fn hom_basis(s: &FpGModule, t: &FpGModule) -> Vec<FpMatrix> {
    let p = s.p;
    let (ds, dt) = (s.dim, t.dim);
    let unknowns = dt * ds;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(s.action.len() * unknowns);
    for (a, b) in s.action.iter().zip(&t.action) {
        for r in 0..dt {
            for c in 0..ds {
                let mut row = vec![0u64; unknowns];
                for k in 0..ds {
                    let i = r * ds + k;
                    row[i] = fp::add(p, row[i], a.get(k, c));
                }
                for k in 0..dt {
                    let i = k * ds + c;
                    row[i] = fp::sub(p, row[i], b.get(r, k));
                }
                rows.push(row);
            }
        }
    }
    let system = FpMatrix::from_rows(p, unknowns, &rows);
    system
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let mut x = FpMatrix::zero(p, dt, ds);
            for r in 0..dt {
                for c in 0..ds {
                    x.set(r, c, v[r * ds + c]);
                }
            }
            x
        })
        .collect()
}

/// Invertible intertwiner between two modules over the same group algebra,
/// if one exists. Solves for the hom space, then sweeps its p^h elements
/// for an invertible one.
pub fn module_iso(s: &FpGModule, t: &FpGModule, caps: &Caps) -> Result<Option<FpMatrix>> {
    if s.p != t.p || s.group != t.group || s.group.generators() != t.group.generators() {
        return Err(Error::domain("modules live over different group algebras"));
    }
    if s.dim != t.dim {
        return Ok(None);
    }
    if s.action == t.action {
        return Ok(Some(FpMatrix::identity(s.p, s.dim)));
    }
    let basis = hom_basis(s, t);
    if basis.is_empty() {
        return Ok(None);
    }
    let h = basis.len();
    enum_guard(s.p, h, caps)?;
    let (p, d) = (s.p, s.dim);
    let mut digits = vec![0u64; h];
    loop {
        // Odometer over coefficient tuples, skipping the all-zero start.
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
            if i == h {
                return Ok(None);
            }
        }
        let mut x = FpMatrix::zero(p, d, d);
        for (b, &coef) in basis.iter().zip(&digits) {
            if coef != 0 {
                for r in 0..d {
                    for c in 0..d {
                        x.set(r, c, fp::add(p, x.get(r, c), fp::mul(p, coef, b.get(r, c))));
                    }
                }
            }
        }
        if x.invert().is_some() {
            debug_assert!(s
                .action
                .iter()
                .zip(&t.action)
                .all(|(a, b)| x.mul(a) == b.mul(&x)));
            return Ok(Some(x));
        }
    }
}

/// |End(S)| = p^(dim of the endomorphism space). For a simple module this
/// is the size of a finite field.
pub fn endomorphism_count(s: &FpGModule) -> BigCount {
    let h = hom_basis(s, s).len();
    BigUint::from(s.p).pow(h as u32)
}

/// Group the summand spaces by isomorphism class of their restriction.
/// Returns the class representatives (first seen) and, per class, the
/// member indices with an intertwiner from the representative.
fn classify_summands(
    m: &FpGModule,
    summands: &[Subspace],
    caps: &Caps,
) -> Result<(Vec<FpGModule>, Vec<Vec<(usize, FpMatrix)>>)> {
    let mut reps: Vec<FpGModule> = Vec::new();
    let mut members: Vec<Vec<(usize, FpMatrix)>> = Vec::new();
    'outer: for (i, w) in summands.iter().enumerate() {
        let st = restrict_space(m, w, caps)?;
        for c in 0..reps.len() {
            if reps[c].dim() == st.dim() {
                if let Some(x) = module_iso(&reps[c], &st, caps)? {
                    members[c].push((i, x));
                    continue 'outer;
                }
            }
        }
        let id = FpMatrix::identity(m.p, st.dim());
        reps.push(st);
        members.push(vec![(i, id)]);
    }
    Ok((reps, members))
}

/// A section M1 < M2 of a module whose quotient is a direct sum of
/// `multiplicity` copies of one simple module, realized by explicit
/// witness vectors.
#[derive(Debug)]
pub struct IsotypicSection {
    m1: Submodule,
    m2: Submodule,
    simple: FpGModule,
    multiplicity: usize,
    /// witnesses[i][k] is an ambient vector; modulo M1, block i carries
    /// the simple module in its own coordinates: applying generator j to
    /// witness k lands on column k of the simple's j-th matrix.
    witnesses: Vec<Vec<Vec<u64>>>,
    /// Layers used to find the section: 1 for a semisimple module, plus
    /// one for discarding the complement of a majority socle, plus one per
    /// quotient recursion.
    depth: usize,
}

impl IsotypicSection {
    pub fn m1(&self) -> &Submodule {
        &self.m1
    }

    pub fn m2(&self) -> &Submodule {
        &self.m2
    }

    pub fn simple(&self) -> &FpGModule {
        &self.simple
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn witnesses(&self) -> &[Vec<Vec<u64>>] {
        &self.witnesses
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Re-check everything the section claims: M1 < M2 invariant, the
    /// witnesses span M2 over M1 independently, each block transforms by
    /// the simple's matrices modulo M1, and the simple factor really is
    /// simple. Errors only from the enumeration guard on that last sweep.
    pub fn verify(&self, caps: &Caps) -> Result<bool> {
        let m = &self.m1.parent;
        let p = m.p;
        let sdim = self.simple.dim;
        let shape_ok = self.m2.parent == *m
            && self.simple.group == m.group
            && self.m2.space.contains(&self.m1.space)
            && self.m1.dim() < self.m2.dim()
            && is_invariant(m, &self.m1.space)
            && is_invariant(m, &self.m2.space)
            && self.multiplicity * sdim == self.m2.dim() - self.m1.dim()
            && self.witnesses.len() == self.multiplicity;
        if !shape_ok {
            return Ok(false);
        }
        for blk in &self.witnesses {
            if blk.len() != sdim {
                return Ok(false);
            }
            for w in blk {
                if w.len() != m.dim || !self.m2.space.contains_vec(w) {
                    return Ok(false);
                }
            }
        }
        let mut rows = self.m1.space.basis().to_vec();
        for blk in &self.witnesses {
            rows.extend(blk.iter().cloned());
        }
        let span = Subspace::from_rows(p, m.dim, &rows);
        if span != self.m2.space || span.dim() != self.m1.dim() + self.multiplicity * sdim {
            return Ok(false);
        }
        for (j, a) in m.action.iter().enumerate() {
            let s = &self.simple.action[j];
            for blk in &self.witnesses {
                for k in 0..sdim {
                    let mut diff = a.mul_vec(&blk[k]);
                    for l in 0..sdim {
                        let coef = s.get(l, k);
                        if coef != 0 {
                            for (t, &bt) in blk[l].iter().enumerate() {
                                diff[t] = fp::sub(p, diff[t], fp::mul(p, coef, bt));
                            }
                        }
                    }
                    if !self.m1.space.contains_vec(&diff) {
                        return Ok(false);
                    }
                }
            }
        }
        enum_guard(p, sdim, caps)?;
        if sdim == 0 {
            return Ok(false);
        }
        for v in Subspace::full(p, sdim).vectors() {
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            if spin(&self.simple, std::slice::from_ref(&v)).space.dim() != sdim {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Find a section M1 < M2 whose quotient is isotypic, with multiplicity at
/// least gerdau_constant(G, p, depth) times dim M for the depth returned.
///
/// Semisimple modules are one layer: the largest isotypic class of the
/// socle decomposition, M1 = 0. A socle holding more than half the
/// dimension costs one extra layer for the discarded complement.
/// Otherwise the quotient by the socle keeps the majority of the
/// dimension; recurse there and pull the answer back.
pub fn isotypic_section(m: &FpGModule, caps: &Caps) -> Result<IsotypicSection> {
    if m.dim == 0 {
        return Err(Error::domain("the zero module has no isotypic section"));
    }
    let (soc, summands) = socle_summands(m, caps)?;
    if 2 * soc.dim() > m.dim {
        let (reps, members) = classify_summands(m, &summands, caps)?;
        let mut best = 0;
        for c in 1..reps.len() {
            if members[c].len() > members[best].len() {
                best = c;
            }
        }
        let simple = reps[best].clone();
        let sdim = simple.dim;
        let mut m2 = Subspace::zero(m.p, m.dim);
        let mut witnesses = Vec::new();
        for (idx, x) in &members[best] {
            let w = &summands[*idx];
            m2 = m2.join(w);
            let b = w.basis();
            // Straighten the summand through the intertwiner so the block
            // carries the representative's matrices verbatim.
            let block: Vec<Vec<u64>> = (0..sdim)
                .map(|k| {
                    let mut v = vec![0u64; m.dim];
                    for l in 0..sdim {
                        let coef = x.get(l, k);
                        if coef != 0 {
                            for (j, &bj) in b[l].iter().enumerate() {
                                v[j] = fp::add(m.p, v[j], fp::mul(m.p, coef, bj));
                            }
                        }
                    }
                    v
                })
                .collect();
            witnesses.push(block);
        }
        let depth = if soc.dim() == m.dim { 1 } else { 2 };
        Ok(IsotypicSection {
            m1: Submodule::zero(m),
            m2: Submodule { parent: m.clone(), space: m2 },
            simple,
            multiplicity: members[best].len(),
            witnesses,
            depth,
        })
    } else {
        let q = quotient_module(&Submodule { parent: m.clone(), space: soc }, caps)?;
        let inner = isotypic_section(q.module(), caps)?;
        let witnesses = inner
            .witnesses
            .iter()
            .map(|blk| blk.iter().map(|w| q.lift(w)).collect())
            .collect();
        Ok(IsotypicSection {
            m1: Submodule { parent: m.clone(), space: q.preimage(&inner.m1.space) },
            m2: Submodule { parent: m.clone(), space: q.preimage(&inner.m2.space) },
            simple: inner.simple,
            multiplicity: inner.multiplicity,
            witnesses,
            depth: inner.depth + 1,
        })
    }
}

/// The per-depth isotypic-section constant for F_p[G]: 1 over the sum of
/// the dimensions of the simple modules, halved for every extra layer.
/// The simple inventory comes from the composition factors of the regular
/// module, which works whether or not p divides |G|.
pub fn gerdau_constant(group: &FiniteGroup, p: u64, ell: u32, caps: &Caps) -> Result<BigRational> {
    if ell == 0 {
        return Err(Error::domain("depth index starts at 1"));
    }
    let mut classes: Vec<FpGModule> = Vec::new();
    let mut cur = regular_module(group, p, caps)?;
    while cur.dim() > 0 {
        let (soc, summands) = socle_summands(&cur, caps)?;
        for w in &summands {
            let st = restrict_space(&cur, w, caps)?;
            let mut known = false;
            for c in &classes {
                if c.dim() == st.dim() && module_iso(c, &st, caps)?.is_some() {
                    known = true;
                    break;
                }
            }
            if !known {
                classes.push(st);
            }
        }
        let q = quotient_module(&Submodule { parent: cur.clone(), space: soc }, caps)?;
        cur = q.module().clone();
    }
    let total: usize = classes.iter().map(|c| c.dim()).sum();
    let den = BigInt::from(total as u64) * (BigInt::from(1u8) << (ell - 1) as usize);
    Ok(BigRational::new(BigInt::from(1u8), den))
}

/// Exact number of submodules, the zero module and the whole module
/// included. Every submodule is a join of cyclic ones, so closing the
/// distinct cyclic spins under join enumerates the full lattice.
pub fn count_submodules(m: &FpGModule, caps: &Caps) -> Result<BigCount> {
    let cyclics = cyclic_spins(m, caps)?;
    let zero = Subspace::zero(m.p, m.dim);
    let mut all: BTreeSet<Subspace> = BTreeSet::new();
    all.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(a) = frontier.pop() {
        for c in &cyclics {
            let j = a.join(c);
            if all.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    Ok(BigUint::from(all.len() as u64))
}
