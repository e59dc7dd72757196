//! Exhaustive subgroup and normal-subgroup enumeration for small groups.
//!
//! Both walks are join-closures: start at the trivial subgroup and keep
//! adjoining atoms (single generators, or whole conjugacy classes for the
//! normal walk). Every subgroup is reachable one generator at a time, and
//! every normal subgroup is the join of the class closures it contains.

use super::{normal_closure, FiniteGroup, SubgroupHandle};
use crate::caps::Caps;
use crate::error::{Error, Result};
use std::collections::BTreeSet;

struct Walk {
    visited: BTreeSet<Vec<u32>>,
    queue: Vec<(SubgroupHandle, Vec<u32>)>,
    work: u64,
}

impl Walk {
    fn new() -> Walk {
        let trivial = SubgroupHandle::trivial();
        let mut visited = BTreeSet::new();
        visited.insert(trivial.elements().to_vec());
        Walk { visited, queue: vec![(trivial, Vec::new())], work: 0 }
    }

    /// Charge one closure call against the budget.
    fn charge(&mut self, caps: &Caps, context: &'static str, atom_count: usize) -> Result<()> {
        self.work += 1;
        if self.work > caps.work {
            let upper = 1u64.checked_shl(atom_count as u32).unwrap_or(u64::MAX);
            return Err(Error::WorkCap {
                context,
                lower: self.visited.len() as u64,
                upper,
            });
        }
        Ok(())
    }

    fn finish(self) -> Vec<SubgroupHandle> {
        let mut out: Vec<SubgroupHandle> = self
            .visited
            .into_iter()
            .map(SubgroupHandle::from_sorted_unchecked)
            .collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
        out
    }
}

/// All subgroups, sorted by order then element list. Bounded by the
/// lattice cap on the group order and the work budget on closure calls.
pub fn all_subgroups(g: &FiniteGroup, caps: &Caps) -> Result<Vec<SubgroupHandle>> {
    if g.order() as u64 > caps.lattice {
        return Err(Error::Cap {
            cap: "lattice",
            limit: caps.lattice as u128,
            needed: g.order() as u128,
        });
    }
    let n = g.order() as u32;
    let mut walk = Walk::new();
    let mut head = 0;
    while head < walk.queue.len() {
        let (h, gens) = walk.queue[head].clone();
        head += 1;
        for x in 1..n {
            if h.contains(x) {
                continue;
            }
            walk.charge(caps, "subgroup enumeration", n as usize)?;
            let mut seeds = gens.clone();
            seeds.push(x);
            let bigger = g.closure_of(&seeds);
            if walk.visited.insert(bigger.elements().to_vec()) {
                walk.queue.push((bigger, seeds));
            }
        }
    }
    Ok(walk.finish())
}

/// All normal subgroups, sorted by order then element list.
pub fn normal_subgroups(g: &FiniteGroup, caps: &Caps) -> Result<Vec<SubgroupHandle>> {
    if g.order() as u64 > caps.lattice {
        return Err(Error::Cap {
            cap: "lattice",
            limit: caps.lattice as u128,
            needed: g.order() as u128,
        });
    }
    // Atoms: normal closures of single classes, deduplicated, each with a
    // small plain generating set for cheap joins.
    let mut atoms: Vec<(SubgroupHandle, Vec<u32>)> = Vec::new();
    for class in g.conjugacy_classes() {
        if class[0] == 0 {
            continue;
        }
        let cl = normal_closure(g, &[class[0]])?;
        if atoms.iter().any(|(a, _)| a == &cl) {
            continue;
        }
        let gens = super::ops::greedy_gens_of_subgroup(g, &cl);
        atoms.push((cl, gens));
    }

    let mut walk = Walk::new();
    let mut head = 0;
    while head < walk.queue.len() {
        let (h, gens) = walk.queue[head].clone();
        head += 1;
        for (atom, atom_gens) in &atoms {
            if h.contains_all(atom) {
                continue;
            }
            walk.charge(caps, "normal subgroup enumeration", atoms.len())?;
            // The join of normal subgroups is their plain closure.
            let mut seeds = gens.clone();
            seeds.extend_from_slice(atom_gens);
            let join = g.closure_of(&seeds);
            if walk.visited.insert(join.elements().to_vec()) {
                walk.queue.push((join, seeds));
            }
        }
    }
    Ok(walk.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::{
        cyclic, dihedral, elementary_abelian, is_normal, lamplighter_quotient, sym3,
    };

    fn caps() -> Caps {
        Caps::default()
    }

    /// Every subgroup of a tiny group, by testing all element subsets.
    fn brute_subgroups(g: &FiniteGroup) -> Vec<Vec<u32>> {
        let n = g.order();
        assert!(n <= 16);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<u32> = (0..n as u32).filter(|&x| mask >> x & 1 == 1).collect();
            let closed = elems
                .iter()
                .all(|&a| elems.iter().all(|&b| elems.binary_search(&g.mul(a, b)).is_ok()));
            if closed {
                out.push(elems);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn subgroups_match_subset_oracle() {
        for g in [
            cyclic(6, &caps()).unwrap(),
            sym3(&caps()).unwrap(),
            dihedral(8, &caps()).unwrap(),
            elementary_abelian(2, 2, &caps()).unwrap(),
            cyclic(12, &caps()).unwrap(),
        ] {
            let walked: Vec<Vec<u32>> = all_subgroups(&g, &caps())
                .unwrap()
                .into_iter()
                .map(|h| h.elements().to_vec())
                .collect();
            assert_eq!(walked, brute_subgroups(&g), "{}", g.label());
        }
    }

    #[test]
    fn normals_are_the_normal_subgroups()  {
        for g in [
            dihedral(8, &caps()).unwrap(),
            sym3(&caps()).unwrap(),
            cyclic(12, &caps()).unwrap(),
            lamplighter_quotient(2, 1, &caps()).unwrap(),
        ] {
            let expected: Vec<SubgroupHandle> = all_subgroups(&g, &caps())
                .unwrap()
                .into_iter()
                .filter(|h| is_normal(&g, h))
                .collect();
            assert_eq!(normal_subgroups(&g, &caps()).unwrap(), expected, "{}", g.label());
        }
    }

    #[test]
    fn frozen_lattice_counts() {
        let counts = |g: &FiniteGroup| {
            (
                all_subgroups(g, &caps()).unwrap().len(),
                normal_subgroups(g, &caps()).unwrap().len(),
            )
        };
        assert_eq!(counts(&elementary_abelian(2, 2, &caps()).unwrap()), (5, 5));
        assert_eq!(counts(&dihedral(8, &caps()).unwrap()), (10, 6));
        assert_eq!(counts(&sym3(&caps()).unwrap()), (6, 3));
        assert_eq!(counts(&cyclic(12, &caps()).unwrap()), (6, 6));
    }

    #[test]
    fn elementary_abelian_lattices_count_subspaces() {
        // Subgroups of E(p^r) are exactly the subspaces of F_p^r.
        let e8 = elementary_abelian(2, 3, &caps()).unwrap();
        let want = crate::fplin::count_all_subspaces(3, 2).unwrap();
        assert_eq!(
            normal_subgroups(&e8, &caps()).unwrap().len().to_string(),
            want.to_string()
        );
        let e16 = elementary_abelian(2, 4, &caps()).unwrap();
        let want = crate::fplin::count_all_subspaces(4, 2).unwrap();
        assert_eq!(all_subgroups(&e16, &caps()).unwrap().len().to_string(), want.to_string());
    }

    #[test]
    fn walks_respect_caps() {
        let big = cyclic(1024, &caps()).unwrap();
        assert!(matches!(
            normal_subgroups(&big, &caps()),
            Err(Error::Cap { cap: "lattice", .. })
        ));
        assert!(matches!(all_subgroups(&big, &caps()), Err(Error::Cap { cap: "lattice", .. })));
        let tiny = Caps { work: 5, ..Caps::default() };
        match all_subgroups(&elementary_abelian(2, 4, &caps()).unwrap(), &tiny) {
            Err(Error::WorkCap { lower, upper, .. }) => assert!(lower <= upper),
            other => panic!("expected work cap, got {other:?}"),
        }
    }

    #[test]
    fn normals_closed_under_meet_and_join() {
        for g in [
            dihedral(8, &caps()).unwrap(),
            sym3(&caps()).unwrap(),
            lamplighter_quotient(2, 1, &caps()).unwrap(),
            elementary_abelian(2, 3, &caps()).unwrap(),
            dihedral(12, &caps()).unwrap(),
        ] {
            let normals = normal_subgroups(&g, &caps()).unwrap();
            for a in &normals {
                for b in &normals {
                    let meet: Vec<u32> = a
                        .elements()
                        .iter()
                        .copied()
                        .filter(|&x| b.contains(x))
                        .collect();
                    assert!(
                        normals.iter().any(|n| n.elements() == meet.as_slice()),
                        "{}: meet escapes",
                        g.label()
                    );
                    let mut seeds = a.elements().to_vec();
                    seeds.extend_from_slice(b.elements());
                    let join = g.closure_of(&seeds);
                    assert!(normals.contains(&join), "{}: join escapes", g.label());
                }
            }
        }
    }

    #[test]
    fn handles_come_back_sorted_and_closed() {
        let g = dihedral(12, &caps()).unwrap();
        let subs = all_subgroups(&g, &caps()).unwrap();
        for w in subs.windows(2) {
            assert!(
                w[0].order() < w[1].order()
                    || (w[0].order() == w[1].order() && w[0].elements() < w[1].elements())
            );
        }
        for h in &subs {
            assert!(SubgroupHandle::from_elements(&g, h.elements()).is_ok());
        }
        // Lagrange: orders divide the group order.
        assert!(subs.iter().all(|h| g.order() % h.order() == 0));
    }
}
