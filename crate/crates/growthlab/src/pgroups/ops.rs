//! Quotients, homomorphisms, Frattini-style subgroups, and exact
//! generator-count computations.

use super::{is_normal, normal_closure, subgroup_generated, FiniteGroup, SubgroupHandle};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::pgroups::exact_log;
use std::collections::BTreeMap;

/// A verified homomorphism between two table groups, stored as the full
/// image vector.
#[derive(Clone)]
pub struct GroupHom {
    domain: FiniteGroup,
    codomain: FiniteGroup,
    image: Vec<u32>,
}

impl GroupHom {
    /// Check the defining property on every pair.
    pub fn new(domain: FiniteGroup, codomain: FiniteGroup, image: Vec<u32>) -> Result<GroupHom> {
        if image.len() != domain.order() {
            return Err(Error::domain("homomorphism image vector has wrong length"));
        }
        if image.iter().any(|&y| (y as usize) >= codomain.order()) {
            return Err(Error::domain("homomorphism image out of range"));
        }
        let n = domain.order() as u32;
        for a in 0..n {
            for b in 0..n {
                let lhs = image[domain.mul(a, b) as usize];
                let rhs = codomain.mul(image[a as usize], image[b as usize]);
                if lhs != rhs {
                    return Err(Error::domain(format!("map is not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom { domain, codomain, image })
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.image[x as usize]
    }

    pub fn domain(&self) -> &FiniteGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroup {
        &self.codomain
    }

    pub fn kernel(&self) -> SubgroupHandle {
        let elems: Vec<u32> =
            (0..self.domain.order() as u32).filter(|&x| self.image[x as usize] == 0).collect();
        SubgroupHandle::from_sorted_unchecked(elems)
    }

    pub fn image_subgroup(&self) -> SubgroupHandle {
        let mut v = self.image.clone();
        v.sort_unstable();
        v.dedup();
        SubgroupHandle::from_sorted_unchecked(v)
    }

    /// Preimage of a subgroup of the codomain.
    pub fn preimage(&self, h: &SubgroupHandle) -> SubgroupHandle {
        let elems: Vec<u32> =
            (0..self.domain.order() as u32).filter(|&x| h.contains(self.image[x as usize])).collect();
        SubgroupHandle::from_sorted_unchecked(elems)
    }

    pub fn is_isomorphism(&self) -> bool {
        if self.domain.order() != self.codomain.order() {
            return false;
        }
        self.image_subgroup().order() == self.codomain.order()
    }
}

/// Quotient by a normal subgroup. Coset i is represented by its least
/// element, cosets numbered in order of least element, so the identity
/// coset is 0. Returns the quotient and the projection.
pub fn quotient(
    g: &FiniteGroup,
    n: &SubgroupHandle,
    caps: &Caps,
) -> Result<(FiniteGroup, GroupHom)> {
    if n.elements().iter().any(|&x| (x as usize) >= g.order()) {
        return Err(Error::domain("subgroup element out of range"));
    }
    if !is_normal(g, n) {
        return Err(Error::domain("quotient needs a normal subgroup"));
    }
    let order = g.order();
    let mut coset_id = vec![u32::MAX; order];
    let mut reps: Vec<u32> = Vec::new();
    for x in 0..order as u32 {
        if coset_id[x as usize] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &h in n.elements() {
            coset_id[g.mul(x, h) as usize] = id;
        }
    }
    let m = reps.len();
    let mut table = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = coset_id[g.mul(reps[i], reps[j]) as usize];
        }
    }
    let mut gens: Vec<u32> = g.generators().iter().map(|&x| coset_id[x as usize]).collect();
    gens.sort_unstable();
    gens.dedup();
    gens.retain(|&x| x != 0);
    let label = format!("{}/N{}", g.label(), n.order());
    let q = FiniteGroup::from_table_with(label, m, table, Some(gens), BTreeMap::new(), caps)?;
    let hom = GroupHom::new(g.clone(), q.clone(), coset_id)?;
    Ok((q, hom))
}

/// Frattini subgroup of a p-group: the normal closure of the p-th powers
/// and pairwise commutators of any generating set.
pub fn frattini_p(g: &FiniteGroup) -> Result<SubgroupHandle> {
    if g.order() == 1 {
        return Ok(SubgroupHandle::trivial());
    }
    let Some((p, _)) = g.prime_power_order() else {
        return Err(Error::domain("Frattini machinery here expects a p-group"));
    };
    let gens = g.generators();
    let mut seeds = Vec::new();
    for &a in gens {
        seeds.push(g.pow(a, p as i64));
    }
    for (i, &a) in gens.iter().enumerate() {
        for &b in gens.iter().skip(i + 1) {
            seeds.push(g.commutator(a, b));
        }
    }
    normal_closure(g, &seeds)
}

pub(crate) fn greedy_gens_of_subgroup(g: &FiniteGroup, h: &SubgroupHandle) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut have = g.closure_of(&gens);
    for &x in h.elements() {
        if have.order() == h.order() {
            break;
        }
        if !have.contains(x) {
            gens.push(x);
            have = g.closure_of(&gens);
        }
    }
    gens
}

/// N^p [N, G] for N normal of p-power order: the smallest subgroup K,
/// normal in the ambient group, with N/K elementary abelian and central
/// in G/K.
pub fn phi_sub(g: &FiniteGroup, n: &SubgroupHandle) -> Result<SubgroupHandle> {
    if !is_normal(g, n) {
        return Err(Error::domain("phi_sub needs a normal subgroup"));
    }
    if n.order() == 1 {
        return Ok(SubgroupHandle::trivial());
    }
    let Some((p, _)) = crate::fplin::prime_power(n.order() as u64) else {
        return Err(Error::domain("phi_sub expects a subgroup of p-power order"));
    };
    let sn = greedy_gens_of_subgroup(g, n);
    let mut seeds = Vec::new();
    for &s in &sn {
        seeds.push(g.pow(s, p as i64));
    }
    for &s in &sn {
        for &t in g.generators() {
            seeds.push(g.commutator(s, t));
        }
    }
    let out = normal_closure(g, &seeds)?;
    debug_assert!(n.contains_all(&out));
    Ok(out)
}

/// Minimal number of generators of a p-group: the F_p-dimension of
/// G / Frattini(G).
pub fn d_min(g: &FiniteGroup) -> Result<u32> {
    if g.order() == 1 {
        return Ok(0);
    }
    let Some((p, _)) = g.prime_power_order() else {
        return Err(Error::domain("d_min expects a p-group; use min_generators instead"));
    };
    let phi = frattini_p(g)?;
    let index = (g.order() / phi.order()) as u64;
    Ok(exact_log(p, index).expect("index of Frattini subgroup is a p-power"))
}

/// Minimal size of a subset of N whose normal closure in G is all of N.
///
/// For a p-group ambient this is exactly log_p (N : N^p[N,G]): the
/// G-invariant maximal subgroups of N all contain N^p[N,G], so normal
/// generation passes to the quotient F_p-space with the usual basis
/// argument. Otherwise a direct search over conjugacy classes runs, with
/// the work budget from `caps`.
pub fn d_normal(g: &FiniteGroup, n: &SubgroupHandle, caps: &Caps) -> Result<u32> {
    if !is_normal(g, n) {
        return Err(Error::domain("d_normal needs a normal subgroup"));
    }
    if n.order() == 1 {
        return Ok(0);
    }
    if g.prime_power_order().is_some() {
        let (p, _) = crate::fplin::prime_power(n.order() as u64).expect("Lagrange");
        let l = phi_sub(g, n)?;
        let index = (n.order() / l.order()) as u64;
        return Ok(exact_log(p, index).expect("index of phi_sub is a p-power"));
    }

    // General case: N is the join of the G-classes it contains, and the
    // normal closure of a subset is the join of its per-class closures.
    let mut closures: Vec<SubgroupHandle> = Vec::new();
    for class in g.conjugacy_classes() {
        let rep = class[0];
        if rep == 0 || !n.contains(rep) {
            continue;
        }
        let cl = normal_closure(g, &[rep])?;
        if !closures.contains(&cl) {
            closures.push(cl);
        }
    }
    let k = closures.len();
    debug_assert!({
        let mut all: Vec<u32> = Vec::new();
        for c in &closures {
            all.extend_from_slice(c.elements());
        }
        subgroup_generated(g, &all).map(|j| j.order() == n.order()).unwrap_or(false)
    });

    let mut work = 0u64;
    for m in 1..=k {
        let mut stack: Vec<(usize, SubgroupHandle, usize)> =
            vec![(0, SubgroupHandle::trivial(), 0)];
        while let Some((start, join, used)) = stack.pop() {
            if join.order() == n.order() {
                return Ok(used as u32);
            }
            if used == m {
                continue;
            }
            for i in (start..k).rev() {
                let c = &closures[i];
                if join.contains_all(c) {
                    continue;
                }
                let mut seeds: Vec<u32> = join.elements().to_vec();
                seeds.extend_from_slice(c.elements());
                let bigger = subgroup_generated(g, &seeds)?;
                work += bigger.order() as u64;
                if work > caps.work {
                    return Err(Error::WorkCap {
                        context: "normal generator search",
                        lower: m as u64,
                        upper: k as u64,
                    });
                }
                stack.push((i + 1, bigger, used + 1));
            }
        }
    }
    // The join of all classes is N, so the loop cannot fall through.
    unreachable!("normal closure of all of N is N");
}

/// log_p of the index of Phi_G(Phi(G)); the quotient by that subgroup is
/// the group's largest quotient that is a central extension of elementary
/// abelians with central p-th powers and commutators.
pub fn cmea_rank(g: &FiniteGroup) -> Result<u32> {
    if g.order() == 1 {
        return Ok(0);
    }
    let Some((p, _)) = g.prime_power_order() else {
        return Err(Error::domain("cmea_rank expects a p-group"));
    };
    let phi = frattini_p(g)?;
    let l = phi_sub(g, &phi)?;
    let index = (g.order() / l.order()) as u64;
    Ok(exact_log(p, index).expect("index is a p-power"))
}

/// Largest quotient of p-power order: quotient by the subgroup generated
/// by all elements of order coprime to p (a normal subgroup, since the
/// generating set is closed under conjugation).
pub fn max_p_quotient(
    g: &FiniteGroup,
    p: u64,
    caps: &Caps,
) -> Result<(FiniteGroup, GroupHom)> {
    if !crate::fplin::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let seeds: Vec<u32> =
        (0..g.order() as u32).filter(|&x| g.elem_order(x) as u64 % p != 0).collect();
    let k = subgroup_generated(g, &seeds)?;
    debug_assert!(is_normal(g, &k));
    let (q, hom) = quotient(g, &k, caps)?;
    debug_assert!(q.order() == 1 || q.prime_power_order().map(|(pp, _)| pp) == Some(p));
    Ok((q, hom))
}

/// An actual minimal generating set (possibly empty for the trivial
/// group). For p-groups the Frattini quotient drives a greedy pick; the
/// general case is an exact search, smallest size first.
pub fn minimal_generating_set(g: &FiniteGroup, caps: &Caps) -> Result<Vec<u32>> {
    if g.order() == 1 {
        return Ok(Vec::new());
    }
    if g.prime_power_order().is_some() {
        let d = d_min(g)?;
        let phi = frattini_p(g)?;
        let phi_gens = greedy_gens_of_subgroup(g, &phi);
        let mut chosen: Vec<u32> = Vec::new();
        let mut seeds = phi_gens.clone();
        let mut current = g.closure_of(&seeds);
        for x in 1..g.order() as u32 {
            if chosen.len() == d as usize {
                break;
            }
            if !current.contains(x) {
                chosen.push(x);
                seeds.push(x);
                current = g.closure_of(&seeds);
            }
        }
        // Each pick leaves the span of the previous picks mod Frattini, so
        // d picks span the Frattini quotient and generate outright.
        debug_assert!(g.closure_of(&chosen).order() == g.order());
        return Ok(chosen);
    }

    // Any generating set is conjugate to one whose least element is the
    // least member of its conjugacy class, so the first choice ranges
    // over class minima only.
    let mut is_class_min = vec![false; g.order()];
    for class in g.conjugacy_classes() {
        is_class_min[class[0] as usize] = true;
    }
    let hard_upper = (usize::BITS - (g.order() - 1).leading_zeros()) as u64;
    let mut work = 0u64;
    // A strictly ascending subgroup chain at least doubles at each step,
    // so some generating set of size <= log2 |G| exists; the search below
    // sees a conjugate of a minimal one, hence terminates in range.
    for m in 1..=hard_upper as usize {
        let mut stack: Vec<(Vec<u32>, SubgroupHandle)> = vec![(Vec::new(), SubgroupHandle::trivial())];
        while let Some((chosen, current)) = stack.pop() {
            if current.is_whole(g) {
                return Ok(chosen);
            }
            if chosen.len() == m {
                continue;
            }
            let from = chosen.last().map(|&x| x + 1).unwrap_or(1);
            for x in (from..g.order() as u32).rev() {
                if chosen.is_empty() && !is_class_min[x as usize] {
                    continue;
                }
                if current.contains(x) {
                    continue;
                }
                let mut seeds = chosen.clone();
                seeds.push(x);
                let bigger = g.closure_of(&seeds);
                work += bigger.order() as u64;
                if work > caps.work {
                    return Err(Error::WorkCap {
                        context: "generator search",
                        lower: m as u64,
                        upper: hard_upper,
                    });
                }
                stack.push((seeds, bigger));
            }
        }
    }
    unreachable!("a generating set of size log2 |G| always exists")
}

/// Exact minimal number of generators.
pub fn min_generators(g: &FiniteGroup, caps: &Caps) -> Result<u32> {
    Ok(minimal_generating_set(g, caps)?.len() as u32)
}
