//! Finite groups as verified multiplication tables, with the subgroup,
//! quotient, and Frattini machinery that subgroup-growth bounds consume.
//!
//! Element 0 is always the identity. Every table is validated on
//! construction: shape, identity, Latin-square property, inverses, and
//! associativity (in full up to order 256, by a fixed-seed sample of
//! 10^5 triples above that). Groups are cheap to clone; the table is
//! shared behind an `Arc`.

mod aut;
mod build;
mod lattice;
mod ops;

pub use aut::{automorphisms, characteristic_subgroups, AutGroup};
pub use build::{
    cyclic, dihedral, direct_product, elementary_abelian, free_cmea, klein_four,
    lamplighter_quotient, sym3, trivial,
};
pub use lattice::{all_subgroups, normal_subgroups};
pub use ops::{
    cmea_rank, d_min, d_normal, frattini_p, max_p_quotient, min_generators,
    minimal_generating_set, phi_sub, quotient, GroupHom,
};

use crate::caps::Caps;
use crate::error::{Error, Result};
use rand::Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

struct Inner {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    label: String,
    /// A generating set (verified at construction).
    gens: Vec<u32>,
    /// Distinguished subgroups some constructors expose by name.
    marked: BTreeMap<String, Vec<u32>>,
}

/// A finite group given by its full multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<Inner>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.inner.label, self.inner.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.inner.order == other.inner.order && self.inner.table == other.inner.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validate and wrap a multiplication table. `gens` may be supplied by
    /// a constructor that knows one; otherwise a generating set is found
    /// greedily.
    pub(crate) fn from_table_with(
        label: String,
        order: usize,
        table: Vec<u32>,
        gens: Option<Vec<u32>>,
        marked: BTreeMap<String, Vec<u32>>,
        caps: &Caps,
    ) -> Result<FiniteGroup> {
        if order == 0 {
            return Err(Error::domain("a group has at least the identity"));
        }
        if order as u64 > caps.order {
            return Err(Error::Cap { cap: "order", limit: caps.order as u128, needed: order as u128 });
        }
        if table.len() != order * order {
            return Err(Error::domain(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
            return Err(Error::domain(format!("table entry {bad} out of range")));
        }
        // Identity must be element 0.
        for a in 0..order {
            if table[a * order] as usize != a || table[a] as usize != a {
                return Err(Error::domain("element 0 is not a two-sided identity"));
            }
        }
        // Latin square: each row and column is a permutation.
        let mut seen = vec![false; order];
        for a in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..order {
                let v = table[a * order + b] as usize;
                if seen[v] {
                    return Err(Error::domain(format!("row {a} repeats entry {v}")));
                }
                seen[v] = true;
            }
        }
        for b in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..order {
                let v = table[a * order + b] as usize;
                if seen[v] {
                    return Err(Error::domain(format!("column {b} repeats entry {v}")));
                }
                seen[v] = true;
            }
        }
        // Two-sided inverses.
        let mut inv = vec![0u32; order];
        for a in 0..order {
            let Some(b) = (0..order).find(|&b| table[a * order + b] == 0) else {
                return Err(Error::domain(format!("element {a} has no right inverse")));
            };
            if table[b * order + a] != 0 {
                return Err(Error::domain(format!("element {a} has no two-sided inverse")));
            }
            inv[a] = b as u32;
        }
        // Associativity: full check at small orders, fixed-seed sample above.
        let mul = |a: usize, b: usize| table[a * order + b] as usize;
        if order <= 256 {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul(a, b);
                    for c in 0..order {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            return Err(Error::domain(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x6c61_7474);
            for _ in 0..100_000 {
                let a = rng.gen_range(0..order);
                let b = rng.gen_range(0..order);
                let c = rng.gen_range(0..order);
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(Error::domain(format!("associativity fails at ({a}, {b}, {c})")));
                }
            }
        }

        let mut g = FiniteGroup {
            inner: Arc::new(Inner { order, table, inv, label, gens: Vec::new(), marked }),
        };
        let gens = match gens {
            Some(gs) => {
                if gs.iter().any(|&x| x as usize >= order) {
                    return Err(Error::domain("generator index out of range"));
                }
                let cl = g.closure_of(&gs);
                if cl.order() != order {
                    return Err(Error::domain("declared generators do not generate"));
                }
                gs
            }
            None => g.greedy_generators(),
        };
        Arc::get_mut(&mut g.inner).expect("sole owner").gens = gens;
        Ok(g)
    }

    /// Validate and wrap a multiplication table.
    pub fn from_table(label: impl Into<String>, order: usize, table: Vec<u32>, caps: &Caps) -> Result<FiniteGroup> {
        FiniteGroup::from_table_with(label.into(), order, table, None, BTreeMap::new(), caps)
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn relabel(&self, label: impl Into<String>) -> FiniteGroup {
        let inner = Inner {
            order: self.inner.order,
            table: self.inner.table.clone(),
            inv: self.inner.inv.clone(),
            label: label.into(),
            gens: self.inner.gens.clone(),
            marked: self.inner.marked.clone(),
        };
        FiniteGroup { inner: Arc::new(inner) }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.inner.table[a as usize * self.inner.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inner.inv[a as usize]
    }

    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        let (mut base, mut e) = if e < 0 { (self.inv(a), (-e) as u64) } else { (a, e as u64) };
        let mut acc = 0u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elem_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> &[u32] {
        &self.inner.gens
    }

    pub fn marked_subgroup(&self, name: &str) -> Option<SubgroupHandle> {
        self.inner.marked.get(name).map(|v| SubgroupHandle { elems: v.clone() })
    }

    pub fn marked_names(&self) -> Vec<&str> {
        self.inner.marked.keys().map(|s| s.as_str()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.inner.order;
        (0..n as u32).all(|a| (0..n as u32).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// (p, k) with |G| = p^k, k >= 1, if the order is a prime power.
    pub fn prime_power_order(&self) -> Option<(u64, u32)> {
        crate::fplin::prime_power(self.inner.order as u64)
    }

    fn greedy_generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut have = self.closure_of(&gens);
        for x in 1..self.inner.order as u32 {
            if have.order() == self.inner.order {
                break;
            }
            if !have.contains(x) {
                gens.push(x);
                have = self.closure_of(&gens);
            }
        }
        gens
    }

    /// Subgroup generated by `seeds` (assumed in range).
    pub(crate) fn closure_of(&self, seeds: &[u32]) -> SubgroupHandle {
        let n = self.inner.order;
        let mut member = vec![false; n];
        member[0] = true;
        let mut list = vec![0u32];
        let mut head = 0;
        // In a finite group, closing under right multiplication by the
        // seeds reaches inverses too.
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &s in seeds {
                let y = self.mul(x, s);
                if !member[y as usize] {
                    member[y as usize] = true;
                    list.push(y);
                }
            }
        }
        list.sort_unstable();
        SubgroupHandle { elems: list }
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let n = self.inner.order;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n as u32 {
            if seen[x as usize] {
                continue;
            }
            let mut class = Vec::new();
            for g in 0..n as u32 {
                let y = self.conj(g, x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    class.push(y);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    pub fn center(&self) -> SubgroupHandle {
        let n = self.inner.order as u32;
        let elems: Vec<u32> =
            (0..n).filter(|&x| (0..n).all(|g| self.mul(x, g) == self.mul(g, x))).collect();
        SubgroupHandle { elems }
    }

    /// The subgroup as a standalone group, with the map back to parent
    /// element indices (new index -> old index).
    pub fn subgroup_as_group(&self, h: &SubgroupHandle) -> Result<(FiniteGroup, Vec<u32>)> {
        let elems = h.elements().to_vec();
        let m = elems.len();
        let mut pos = vec![u32::MAX; self.inner.order];
        for (i, &e) in elems.iter().enumerate() {
            pos[e as usize] = i as u32;
        }
        let mut table = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                let v = pos[self.mul(elems[i], elems[j]) as usize];
                if v == u32::MAX {
                    return Err(Error::domain("subgroup handle is not closed"));
                }
                table[i * m + j] = v;
            }
        }
        let label = format!("{}[{}]", self.inner.label, m);
        // The parent already satisfies the group axioms; the subgroup table
        // still goes through full validation (it is cheap at these sizes).
        let caps = Caps { order: self.inner.order as u64, ..Caps::default() };
        let g = FiniteGroup::from_table_with(label, m, table, None, BTreeMap::new(), &caps)?;
        Ok((g, elems))
    }
}

/// Sorted element list of a verified subgroup.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubgroupHandle {
    elems: Vec<u32>,
}

impl SubgroupHandle {
    pub fn trivial() -> Self {
        SubgroupHandle { elems: vec![0] }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        SubgroupHandle { elems: (0..g.order() as u32).collect() }
    }

    /// Wrap an element list, checking closure under the group law.
    pub fn from_elements(g: &FiniteGroup, elems: &[u32]) -> Result<Self> {
        let mut v: Vec<u32> = elems.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.iter().any(|&x| (x as usize) >= g.order()) {
            return Err(Error::domain("subgroup element out of range"));
        }
        let h = SubgroupHandle { elems: v };
        if !h.contains(0) {
            return Err(Error::domain("subgroup must contain the identity"));
        }
        for &a in &h.elems {
            for &b in &h.elems {
                if !h.contains(g.mul(a, b)) {
                    return Err(Error::domain(format!("not closed: {a} * {b} escapes")));
                }
            }
        }
        Ok(h)
    }

    pub(crate) fn from_sorted_unchecked(elems: Vec<u32>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        SubgroupHandle { elems }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn contains_all(&self, other: &SubgroupHandle) -> bool {
        other.elems.iter().all(|&x| self.contains(x))
    }

    pub fn is_whole(&self, g: &FiniteGroup) -> bool {
        self.elems.len() == g.order()
    }

    pub fn index_in(&self, g: &FiniteGroup) -> usize {
        g.order() / self.elems.len()
    }
}

/// Subgroup generated by the given elements.
pub fn subgroup_generated(g: &FiniteGroup, seeds: &[u32]) -> Result<SubgroupHandle> {
    if seeds.iter().any(|&x| (x as usize) >= g.order()) {
        return Err(Error::domain("generator index out of range"));
    }
    Ok(g.closure_of(seeds))
}

/// Least normal subgroup containing the given elements.
pub fn normal_closure(g: &FiniteGroup, seeds: &[u32]) -> Result<SubgroupHandle> {
    if seeds.iter().any(|&x| (x as usize) >= g.order()) {
        return Err(Error::domain("element index out of range"));
    }
    // Saturate under conjugation first; the closure of a conjugation-closed
    // set is normal.
    let n = g.order() as u32;
    let mut conj_set = vec![false; g.order()];
    let mut sat = Vec::new();
    for &s in seeds {
        for t in 0..n {
            let c = g.conj(t, s);
            if !conj_set[c as usize] {
                conj_set[c as usize] = true;
                sat.push(c);
            }
        }
    }
    Ok(g.closure_of(&sat))
}

pub fn is_normal(g: &FiniteGroup, h: &SubgroupHandle) -> bool {
    // Conjugating by a generating set suffices.
    g.generators().iter().all(|&t| h.elems.iter().all(|&x| h.contains(g.conj(t, x))))
}

pub(crate) fn exact_log(p: u64, mut m: u64) -> Option<u32> {
    let mut k = 0;
    while m > 1 {
        if m % p != 0 {
            return None;
        }
        m /= p;
        k += 1;
    }
    Some(k)
}
