//! Automorphism group by backtracking over generator images, and the
//! characteristic-subgroup filter built on it.

use super::{minimal_generating_set, normal_subgroups, FiniteGroup, SubgroupHandle};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// The full automorphism group, each element stored as its image vector.
#[derive(Debug)]
pub struct AutGroup {
    group: FiniteGroup,
    maps: Vec<Vec<u32>>,
}

impl AutGroup {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn count(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Vec<u32>] {
        &self.maps
    }

    /// Automorphism `k` as a verified homomorphism.
    pub fn hom(&self, k: usize) -> crate::pgroups::GroupHom {
        crate::pgroups::GroupHom::new(self.group.clone(), self.group.clone(), self.maps[k].clone())
            .expect("stored maps are automorphisms")
    }

    /// Setwise image of a subgroup under automorphism `k`.
    pub fn image_of(&self, k: usize, h: &SubgroupHandle) -> SubgroupHandle {
        let mut v: Vec<u32> = h.elements().iter().map(|&x| self.maps[k][x as usize]).collect();
        v.sort_unstable();
        SubgroupHandle::from_sorted_unchecked(v)
    }
}

/// Extend generator images g_j -> y_j (j <= i) over the subgroup the
/// generators span, checking every Cayley-graph edge. Returns the partial
/// map on success. Edge consistency over all of H x {g_j} forces full
/// multiplicativity, because every element is a word in the g_j.
fn grow_partial(
    g: &FiniteGroup,
    gens: &[u32],
    images: &[u32],
    work: &mut u64,
    caps: &Caps,
) -> Result<Option<Vec<u32>>> {
    let n = g.order();
    let mut phi = vec![u32::MAX; n];
    phi[0] = 0;
    let mut list = vec![0u32];
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        head += 1;
        for (j, &gj) in gens.iter().enumerate() {
            *work += 1;
            if *work > caps.work {
                return Err(Error::WorkCap {
                    context: "automorphism search",
                    lower: 0,
                    upper: u64::MAX,
                });
            }
            let z = g.mul(x, gj);
            let fz = g.mul(phi[x as usize], images[j]);
            if phi[z as usize] == u32::MAX {
                phi[z as usize] = fz;
                list.push(z);
            } else if phi[z as usize] != fz {
                return Ok(None);
            }
        }
    }
    Ok(Some(phi))
}

/// All automorphisms, found by assigning images to a minimal generating
/// set. Candidates must match element orders; partial assignments are
/// checked for multiplicative consistency as they grow. Maps come out
/// sorted by image vector.
pub fn automorphisms(g: &FiniteGroup, caps: &Caps) -> Result<AutGroup> {
    if g.order() as u64 > caps.aut {
        return Err(Error::Cap { cap: "aut", limit: caps.aut as u128, needed: g.order() as u128 });
    }
    if g.order() == 1 {
        return Ok(AutGroup { group: g.clone(), maps: vec![vec![0]] });
    }
    let gens = minimal_generating_set(g, caps)?;
    let orders: Vec<usize> = (0..g.order() as u32).map(|x| g.elem_order(x)).collect();
    let candidates: Vec<Vec<u32>> = gens
        .iter()
        .map(|&gj| {
            (0..g.order() as u32).filter(|&y| orders[y as usize] == orders[gj as usize]).collect()
        })
        .collect();

    let mut maps = Vec::new();
    let mut images: Vec<u32> = Vec::new();
    let mut work = 0u64;
    let res = backtrack(g, &gens, &candidates, &mut images, &mut work, caps, &mut maps);
    if let Err(Error::WorkCap { context, .. }) = res {
        // Bracket the count: maps found so far up to all candidate tuples.
        let upper = candidates
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
            .unwrap_or(u64::MAX);
        return Err(Error::WorkCap { context, lower: maps.len() as u64, upper });
    }
    res?;
    maps.sort_unstable();
    Ok(AutGroup { group: g.clone(), maps })
}

fn backtrack(
    g: &FiniteGroup,
    gens: &[u32],
    candidates: &[Vec<u32>],
    images: &mut Vec<u32>,
    work: &mut u64,
    caps: &Caps,
    out: &mut Vec<Vec<u32>>,
) -> Result<()> {
    let i = images.len();
    for &y in &candidates[i] {
        images.push(y);
        // Consistency of the partial span prunes most branches early.
        if let Some(phi) = grow_partial(g, &gens[..=i], images, work, caps)? {
            if images.len() == gens.len() {
                // The generators span G, so phi is total; bijectivity is
                // all that is left to check.
                debug_assert!(!phi.contains(&u32::MAX));
                let mut seen = vec![false; g.order()];
                let mut distinct = 0usize;
                for &v in &phi {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        distinct += 1;
                    }
                }
                if distinct == g.order() {
                    out.push(phi);
                }
            } else {
                backtrack(g, gens, candidates, images, work, caps, out)?;
            }
        }
        images.pop();
    }
    Ok(())
}

/// Normal subgroups fixed setwise by every automorphism.
pub fn characteristic_subgroups(g: &FiniteGroup, caps: &Caps) -> Result<Vec<SubgroupHandle>> {
    let normals = normal_subgroups(g, caps)?;
    let auts = automorphisms(g, caps)?;
    Ok(normals
        .into_iter()
        .filter(|n| (0..auts.count()).all(|k| &auts.image_of(k, n) == n))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::pgroups::{cyclic, dihedral, elementary_abelian, lamplighter_quotient, sym3, trivial};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn counts_for_cyclic_groups_are_totients() {
        for (n, want) in [(5u64, 4usize), (7, 6), (8, 4), (12, 4)] {
            let g = cyclic(n, &caps()).unwrap();
            assert_eq!(automorphisms(&g, &caps()).unwrap().count(), want, "C{n}");
        }
        assert_eq!(automorphisms(&trivial(&caps()).unwrap(), &caps()).unwrap().count(), 1);
    }

    #[test]
    fn counts_for_vector_groups_are_gl_orders() {
        // |GL(r, p)| = prod (p^r - p^i)
        let gl = |r: u32, p: u64| -> u64 {
            let pr = p.pow(r);
            (0..r).map(|i| pr - p.pow(i)).product()
        };
        assert_eq!(gl(2, 2), 6);
        let e4 = elementary_abelian(2, 2, &caps()).unwrap();
        assert_eq!(automorphisms(&e4, &caps()).unwrap().count() as u64, gl(2, 2));
        let e9 = elementary_abelian(3, 2, &caps()).unwrap();
        assert_eq!(automorphisms(&e9, &caps()).unwrap().count() as u64, gl(2, 3));
        let e16 = elementary_abelian(2, 4, &caps()).unwrap();
        assert_eq!(automorphisms(&e16, &caps()).unwrap().count() as u64, gl(4, 2));
        let e27 = elementary_abelian(3, 3, &caps()).unwrap();
        assert_eq!(automorphisms(&e27, &caps()).unwrap().count() as u64, gl(3, 3));
    }

    #[test]
    fn dihedral_and_friends() {
        let d8 = dihedral(8, &caps()).unwrap();
        assert_eq!(automorphisms(&d8, &caps()).unwrap().count(), 8);
        let s3 = sym3(&caps()).unwrap();
        assert_eq!(automorphisms(&s3, &caps()).unwrap().count(), 6);
        let lamp = lamplighter_quotient(2, 1, &caps()).unwrap();
        assert_eq!(automorphisms(&lamp, &caps()).unwrap().count(), 8);
    }

    #[test]
    fn maps_are_verified_group_automorphisms() {
        let g = dihedral(8, &caps()).unwrap();
        let auts = automorphisms(&g, &caps()).unwrap();
        let identity: Vec<u32> = (0..8).collect();
        assert!(auts.maps().contains(&identity));
        assert_eq!(auts.group(), &g);
        for k in 0..auts.count() {
            assert!(auts.hom(k).is_isomorphism());
        }
    }

    #[test]
    fn maps_are_closed_under_composition() {
        for g in [elementary_abelian(2, 2, &caps()).unwrap(), dihedral(8, &caps()).unwrap()] {
            let auts = automorphisms(&g, &caps()).unwrap();
            let maps = auts.maps();
            for a in maps {
                for b in maps {
                    let composed: Vec<u32> = (0..g.order()).map(|x| a[b[x] as usize]).collect();
                    assert!(maps.binary_search(&composed).is_ok());
                }
            }
        }
    }

    #[test]
    fn aut_cap_and_work_cap() {
        let big = elementary_abelian(3, 5, &caps()).unwrap();
        assert!(matches!(automorphisms(&big, &caps()), Err(Error::Cap { cap: "aut", .. })));
        let tiny = Caps { work: 10, ..Caps::default() };
        match automorphisms(&dihedral(8, &caps()).unwrap(), &tiny) {
            Err(Error::WorkCap { lower, upper, .. }) => assert!(lower <= upper),
            other => panic!("expected work cap, got {other:?}"),
        }
    }

    #[test]
    fn characteristic_subgroup_filters() {
        // Klein four: the three involutions are interchangeable.
        let e4 = elementary_abelian(2, 2, &caps()).unwrap();
        let ch = characteristic_subgroups(&e4, &caps()).unwrap();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch[0].order(), 1);
        assert_eq!(ch[1].order(), 4);
        // Dihedral of order 8: the two Klein subgroups swap, the cyclic
        // rotation subgroup and the center stay put.
        let d8 = dihedral(8, &caps()).unwrap();
        let ch = characteristic_subgroups(&d8, &caps()).unwrap();
        assert_eq!(ch.len(), 4);
        let orders: Vec<usize> = ch.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 4, 8]);
        assert!(ch.iter().any(|h| h == &d8.marked_subgroup("rotations").unwrap()));
        // Every subgroup of a cyclic group is characteristic.
        let c12 = cyclic(12, &caps()).unwrap();
        assert_eq!(characteristic_subgroups(&c12, &caps()).unwrap().len(), 6);
        // Inner automorphisms fix every normal subgroup, and Aut(S3) is
        // all inner.
        let s3 = sym3(&caps()).unwrap();
        assert_eq!(characteristic_subgroups(&s3, &caps()).unwrap().len(), 3);
    }

    #[test]
    fn lamplighter_base_is_normal_not_characteristic() {
        let lamp = lamplighter_quotient(2, 1, &caps()).unwrap();
        let base = lamp.marked_subgroup("base").unwrap();
        assert!(crate::pgroups::is_normal(&lamp, &base));
        let ch = characteristic_subgroups(&lamp, &caps()).unwrap();
        assert!(!ch.contains(&base));
        assert!(crate::pgroups::normal_subgroups(&lamp, &caps()).unwrap().contains(&base));
    }
}
