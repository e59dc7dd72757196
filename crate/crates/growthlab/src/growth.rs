//! Normal-subgroup growth tables and the inequality checkers built on
//! them: chain upper bounds, subspace lower bounds, index-transfer
//! comparisons, the finite rank-transfer check, rank-gradient ratios, and
//! the free-rank arithmetic.
//!
//! Checkers recompute both sides of their inequality from scratch through
//! independent operations, so a failed report isolates a bug rather than
//! silently repairing one. Every report records the exact sides it
//! compared.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fplin::{gaussian_binomial, prime_power};
use crate::pgroups::{
    all_subgroups, characteristic_subgroups, cmea_rank, d_normal, exact_log, frattini_p,
    is_normal, max_p_quotient, min_generators, normal_subgroups, FiniteGroup, SubgroupHandle,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Map, Value};

/// Per-index normal (and optionally characteristic) subgroup counts.
#[derive(Debug, Clone)]
pub struct GrowthRow {
    pub index: u64,
    pub normal: u64,
    pub characteristic: Option<u64>,
    /// Number of normal subgroups of index at most `index`.
    pub cumulative_normal: u64,
    pub cumulative_characteristic: Option<u64>,
}

/// Exact growth table of a finite group, one row per divisor of the
/// order.
#[derive(Debug, Clone)]
pub struct GrowthTable {
    label: String,
    rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rows(&self) -> &[GrowthRow] {
        &self.rows
    }

    /// s_n: the number of normal subgroups of index at most n. Constant
    /// between divisors of the order.
    pub fn s_normal(&self, n: u64) -> u64 {
        self.rows
            .iter()
            .take_while(|r| r.index <= n)
            .last()
            .map(|r| r.cumulative_normal)
            .unwrap_or(0)
    }

    /// Characteristic variant of [`GrowthTable::s_normal`], when counted.
    pub fn s_characteristic(&self, n: u64) -> Option<u64> {
        self.rows
            .iter()
            .take_while(|r| r.index <= n)
            .last()
            .map(|r| r.cumulative_characteristic)
            .unwrap_or(Some(0))
    }

    /// {index: {normal, characteristic}} with a null characteristic when
    /// the count was not requested.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for r in &self.rows {
            let c = match r.characteristic {
                Some(c) => json!(c),
                None => Value::Null,
            };
            map.insert(r.index.to_string(), json!({ "normal": r.normal, "characteristic": c }));
        }
        Value::Object(map)
    }

    /// index,normal,characteristic rows; the third column is empty when
    /// the count was not requested.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,normal,characteristic\n");
        for r in &self.rows {
            let c = r.characteristic.map(|c| c.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", r.index, r.normal, c));
        }
        out
    }
}

/// Exact per-index and cumulative counts from the enumerated lattices.
pub fn growth_table(
    g: &FiniteGroup,
    with_characteristic: bool,
    caps: &Caps,
) -> Result<GrowthTable> {
    let normals = normal_subgroups(g, caps)?;
    let chars = if with_characteristic { Some(characteristic_subgroups(g, caps)?) } else { None };
    let order = g.order() as u64;
    let mut rows = Vec::new();
    let mut cum_n = 0u64;
    let mut cum_c = 0u64;
    for index in 1..=order {
        if order % index != 0 {
            continue;
        }
        let normal =
            normals.iter().filter(|h| h.index_in(g) as u64 == index).count() as u64;
        cum_n += normal;
        let characteristic = chars.as_ref().map(|cs| {
            cs.iter().filter(|h| h.index_in(g) as u64 == index).count() as u64
        });
        if let Some(c) = characteristic {
            cum_c += c;
        }
        rows.push(GrowthRow {
            index,
            normal,
            characteristic,
            cumulative_normal: cum_n,
            cumulative_characteristic: characteristic.map(|_| cum_c),
        });
    }
    Ok(GrowthTable { label: g.label().to_string(), rows })
}

/// Direction of a checked inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Gt,
}

fn cmp(sense: Sense, left: &BigRational, right: &BigRational) -> bool {
    match sense {
        Sense::Le => left <= right,
        Sense::Ge => left >= right,
        Sense::Gt => left > right,
    }
}

/// One recorded comparison of a multi-part bound, keyed by an index or a
/// step number.
#[derive(Debug, Clone)]
pub struct BoundRow {
    pub at: u64,
    pub left: BigRational,
    pub sense: Sense,
    pub right: BigRational,
    pub holds: bool,
}

impl BoundRow {
    fn new(at: u64, left: BigRational, sense: Sense, right: BigRational) -> BoundRow {
        let holds = cmp(sense, &left, &right);
        BoundRow { at, left, sense, right, holds }
    }
}

/// Outcome of one inequality checker. The headline sides are the bound's
/// own comparison (for per-index bounds, its tightest row); `holds` also
/// folds in every row. A vacuous report records an unsatisfied hypothesis
/// and claims nothing.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: &'static str,
    pub left: BigRational,
    pub sense: Sense,
    pub right: BigRational,
    pub holds: bool,
    pub vacuous: bool,
    pub witnesses: Vec<SubgroupHandle>,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    fn single(
        name: &'static str,
        left: BigRational,
        sense: Sense,
        right: BigRational,
        witnesses: Vec<SubgroupHandle>,
    ) -> BoundReport {
        let holds = cmp(sense, &left, &right);
        BoundReport { name, left, sense, right, holds, vacuous: false, witnesses, rows: vec![] }
    }

    fn vacuous(
        name: &'static str,
        left: BigRational,
        sense: Sense,
        right: BigRational,
        witnesses: Vec<SubgroupHandle>,
    ) -> BoundReport {
        BoundReport { name, left, sense, right, holds: true, vacuous: true, witnesses, rows: vec![] }
    }

    fn composite(
        name: &'static str,
        left: BigRational,
        sense: Sense,
        right: BigRational,
        rows: Vec<BoundRow>,
        witnesses: Vec<SubgroupHandle>,
    ) -> BoundReport {
        let holds = cmp(sense, &left, &right) && rows.iter().all(|r| r.holds);
        BoundReport { name, left, sense, right, holds, vacuous: false, witnesses, rows }
    }

    /// Headline from the tightest row (largest violation margin), `holds`
    /// from all of them. Rows must share one sense and be nonempty.
    fn tabled(
        name: &'static str,
        rows: Vec<BoundRow>,
        witnesses: Vec<SubgroupHandle>,
    ) -> BoundReport {
        let worst = rows
            .iter()
            .max_by(|a, b| {
                let ma = margin(a);
                let mb = margin(b);
                ma.cmp(&mb)
            })
            .expect("tabled reports carry at least one row");
        let (left, sense, right) = (worst.left.clone(), worst.sense, worst.right.clone());
        BoundReport::composite(name, left, sense, right, rows, witnesses)
    }

    /// holds must equal the recorded comparisons (always true for reports
    /// built here; exposed so sweeps can assert it).
    pub fn consistent(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.holds == cmp(r.sense, &r.left, &r.right));
        if self.vacuous {
            self.holds && rows_ok
        } else {
            rows_ok
                && self.holds
                    == (cmp(self.sense, &self.left, &self.right)
                        && self.rows.iter().all(|r| r.holds))
        }
    }
}

/// How close a row is to failing: left - right for upper bounds,
/// right - left for lower bounds.
fn margin(r: &BoundRow) -> BigRational {
    match r.sense {
        Sense::Le => &r.left - &r.right,
        Sense::Ge | Sense::Gt => &r.right - &r.left,
    }
}

fn intq(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn uintq(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// Per-index chain bound for a p-group: the number of normal subgroups of
/// index p^n is at most the number of chains G = N_0 > ... > N_n with
/// every step of index p and every term normal, and each step from N has
/// at most (p^d_G(N) - 1)/(p - 1) continuations (the hyperplanes of
/// N / Phi_G(N)). The bound is formed as that product, with f(v) the
/// largest d_G over the index-p^v layer, and checked against the exact
/// counts.
pub fn chain_upper_bound(g: &FiniteGroup, caps: &Caps) -> Result<BoundReport> {
    if g.order() == 1 {
        return Ok(BoundReport::vacuous(
            "chain_upper_bound",
            BigRational::one(),
            Sense::Le,
            BigRational::one(),
            vec![],
        ));
    }
    let Some((p, k)) = g.prime_power_order() else {
        return Err(Error::domain("chain bound expects a p-group"));
    };
    let normals = normal_subgroups(g, caps)?;
    let mut f = vec![0u32; k as usize];
    let mut attaining: Vec<Option<SubgroupHandle>> = vec![None; k as usize];
    let mut counts = vec![0u64; k as usize + 1];
    for h in &normals {
        let nu = exact_log(p, h.index_in(g) as u64).expect("Lagrange in a p-group");
        counts[nu as usize] += 1;
        if nu < k {
            let d = d_normal(g, h, caps)?;
            if attaining[nu as usize].is_none() || d > f[nu as usize] {
                f[nu as usize] = d;
                attaining[nu as usize] = Some(h.clone());
            }
        }
    }
    // Normal subgroups of every layer exist in a p-group.
    debug_assert!(attaining.iter().all(|w| w.is_some()));
    let pb = BigUint::from(p);
    let mut bound = BigUint::one();
    let mut rows = Vec::new();
    for n in 1..=k {
        let step = (pb.pow(f[(n - 1) as usize]) - 1u32) / (p - 1);
        bound *= step;
        rows.push(BoundRow::new(
            p.pow(n),
            intq(counts[n as usize]),
            Sense::Le,
            uintq(&bound),
        ));
    }
    let witnesses = attaining.into_iter().flatten().collect();
    Ok(BoundReport::tabled("chain_upper_bound", rows, witnesses))
}

/// Lower bound on subspace counts under the rank hypothesis: when
/// m = dim N/Phi_G(N) exceeds c * log_p(G:N), the subspaces of
/// codimension floor((c/2) log_p(G:N)) number at least
/// p^((c^2/4) log_p(G:N)^2). Both sides are recorded raised to the
/// 4*denom(c)^2 power, which keeps them integers and preserves the order.
/// An unsatisfied hypothesis yields a vacuous report carrying m and
/// c * log_p(G:N) as its sides.
pub fn subspace_lower_bound(
    g: &FiniteGroup,
    n: &SubgroupHandle,
    c: &BigRational,
    caps: &Caps,
) -> Result<BoundReport> {
    let Some((p, _)) = g.prime_power_order() else {
        return Err(Error::domain("subspace bound expects a nontrivial p-group"));
    };
    if !c.is_positive() {
        return Err(Error::domain("the constant c must be positive"));
    }
    let m = d_normal(g, n, caps)?;
    let k = exact_log(p, n.index_in(g) as u64).expect("Lagrange in a p-group");
    let ck = c * intq(k);
    if intq(m) <= ck {
        return Ok(BoundReport::vacuous(
            "subspace_lower_bound",
            intq(m),
            Sense::Gt,
            ck,
            vec![n.clone()],
        ));
    }
    let d = (&ck / intq(2)).floor().to_integer().to_u32().expect("codimension is small");
    debug_assert!(d < m);
    let count = gaussian_binomial(m, m - d, p)?;
    let a = c.numer().to_u64().ok_or_else(|| Error::domain("numerator of c is too large"))?;
    let b = c.denom().to_u64().ok_or_else(|| Error::domain("denominator of c is too large"))?;
    let e_left = 4u128 * (b as u128) * (b as u128);
    let e_right = (a as u128) * (a as u128) * (k as u128) * (k as u128);
    let bits = (count.bits() as u128)
        .saturating_mul(e_left)
        .max((64 - p.leading_zeros()) as u128 * e_right);
    if bits > caps.enumeration as u128 {
        return Err(Error::Cap { cap: "enumeration", limit: caps.enumeration as u128, needed: bits });
    }
    let left = count.pow(e_left as u32);
    let right = BigUint::from(p).pow(e_right as u32);
    Ok(BoundReport::single(
        "subspace_lower_bound",
        uintq(&left),
        Sense::Ge,
        uintq(&right),
        vec![n.clone()],
    ))
}

/// s_n(G) <= s_n(D) * n^(G:D) for every n up to |G|, with D counted as an
/// abstract group. Rows are recorded at the divisors of |G|; between
/// divisors the left side is constant while the right side grows, so
/// those rows are the binding ones.
pub fn index_transfer_check(
    g: &FiniteGroup,
    d: &SubgroupHandle,
    caps: &Caps,
) -> Result<BoundReport> {
    let (dg, _) = g.subgroup_as_group(d)?;
    let idx = d.index_in(g) as u32;
    let tg = growth_table(g, false, caps)?;
    let td = growth_table(&dg, false, caps)?;
    let order = g.order() as u64;
    let mut rows = Vec::new();
    for n in 1..=order {
        if order % n != 0 {
            continue;
        }
        let lhs = intq(tg.s_normal(n));
        let rhs = intq(td.s_normal(n)) * uintq(&BigUint::from(n).pow(idx));
        rows.push(BoundRow::new(n, lhs, Sense::Le, rhs));
    }
    Ok(BoundReport::tabled("index_transfer", rows, vec![d.clone()]))
}

/// d_G(N) >= d_H(N) / (G:H) for N inside a normal p-subgroup H, both
/// sides through independent normal-generator computations (H counted as
/// an abstract group).
pub fn virtual_transfer_check(
    g: &FiniteGroup,
    h: &SubgroupHandle,
    n: &SubgroupHandle,
    caps: &Caps,
) -> Result<BoundReport> {
    if !is_normal(g, h) {
        return Err(Error::domain("H must be normal in the ambient group"));
    }
    if h.order() > 1 && prime_power(h.order() as u64).is_none() {
        return Err(Error::domain("H must have p-power order"));
    }
    if !h.contains_all(n) {
        return Err(Error::domain("N must sit inside H"));
    }
    let dg_n = d_normal(g, n, caps)?;
    let (hg, embed) = g.subgroup_as_group(h)?;
    let mut pos = vec![u32::MAX; g.order()];
    for (i, &e) in embed.iter().enumerate() {
        pos[e as usize] = i as u32;
    }
    let elems: Vec<u32> = n.elements().iter().map(|&e| pos[e as usize]).collect();
    let n_in_h = SubgroupHandle::from_elements(&hg, &elems)?;
    let dh_n = d_normal(&hg, &n_in_h, caps)?;
    let idx = h.index_in(g) as u64;
    Ok(BoundReport::single(
        "virtual_transfer",
        intq(dg_n),
        Sense::Ge,
        BigRational::new(BigInt::from(dh_n), BigInt::from(idx)),
        vec![h.clone(), n.clone()],
    ))
}

/// With H the largest p-quotient of a normal subgroup D and Psi the
/// preimage in D of H's Frattini subgroup: checks
/// d_G(Psi) >= rk_cm(H)/(G:D) - d(G), all quantities recomputed exactly.
pub fn theorem1_check(
    g: &FiniteGroup,
    d: &SubgroupHandle,
    p: u64,
    caps: &Caps,
) -> Result<BoundReport> {
    if !is_normal(g, d) {
        return Err(Error::domain("D must be normal in the ambient group"));
    }
    let (dg, embed) = g.subgroup_as_group(d)?;
    let (hq, hom) = max_p_quotient(&dg, p, caps)?;
    let phi = frattini_p(&hq)?;
    let psi_in_d = hom.preimage(&phi);
    let psi_elems: Vec<u32> =
        psi_in_d.elements().iter().map(|&i| embed[i as usize]).collect();
    // Psi is characteristic in D, hence normal in G; d_normal re-checks.
    let psi = SubgroupHandle::from_elements(g, &psi_elems)?;
    let lhs = d_normal(g, &psi, caps)?;
    let rk = cmea_rank(&hq)?;
    let dmin = min_generators(g, caps)?;
    let idx = d.index_in(g) as u64;
    let rhs = BigRational::new(BigInt::from(rk), BigInt::from(idx)) - intq(dmin);
    Ok(BoundReport::single("theorem1", intq(lhs), Sense::Ge, rhs, vec![d.clone(), psi]))
}

/// The ratios d(U_i) / (G:U_i) along a descending chain of subgroups,
/// with d computed by exact search on each U_i as an abstract group.
pub fn rank_gradient_chain(
    g: &FiniteGroup,
    chain: &[SubgroupHandle],
    caps: &Caps,
) -> Result<Vec<BigRational>> {
    for w in chain.windows(2) {
        if !w[0].contains_all(&w[1]) {
            return Err(Error::domain("chain is not descending"));
        }
    }
    chain
        .iter()
        .map(|u| {
            let (ug, _) = g.subgroup_as_group(u)?;
            let rank = min_generators(&ug, caps)?;
            Ok(BigRational::new(BigInt::from(rank), BigInt::from(u.index_in(g) as u64)))
        })
        .collect()
}

/// Rank of an index-`index` subgroup of a free group of rank `d`:
/// index * (d - 1) + 1.
pub fn free_subgroup_rank(d: u64, index: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::domain("free rank must be at least 1"));
    }
    if index == 0 {
        return Err(Error::domain("index must be at least 1"));
    }
    index
        .checked_mul(d - 1)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::domain("subgroup rank overflows"))
}

/// The arithmetic chain behind the free-product rank estimate: with
/// d1 = free_subgroup_rank(d, p^k), first d1 + binom(d1+1, 2) > d1^2 / 2
/// (both sides doubled to stay integral), then d1^2 >= (d-1)^2 p^(2k).
pub fn prop14_arithmetic_check(d: u64, p: u64, k: u32) -> Result<BoundReport> {
    if d == 0 {
        return Err(Error::domain("free rank must be at least 1"));
    }
    if p < 2 {
        return Err(Error::domain("p must be at least 2"));
    }
    let pk = BigUint::from(p).pow(k);
    let d1 = &pk * BigUint::from(d - 1) + 1u32;
    let pairs = &d1 * (&d1 + 1u32) / 2u32;
    let left1 = (&d1 + &pairs) * 2u32;
    let right1 = &d1 * &d1;
    let right2 = BigUint::from(d - 1).pow(2) * &pk * &pk;
    let rows = vec![
        BoundRow::new(1, uintq(&left1), Sense::Gt, uintq(&right1)),
        BoundRow::new(2, uintq(&right1), Sense::Ge, uintq(&right2)),
    ];
    Ok(BoundReport::composite(
        "prop14_arithmetic",
        uintq(&left1),
        Sense::Gt,
        uintq(&right1),
        rows,
        vec![],
    ))
}

/// Subgroup counts per index, for the lattice-vs-normal-vs-characteristic
/// comparison sweeps.
pub fn subgroup_counts_by_index(g: &FiniteGroup, caps: &Caps) -> Result<Vec<(u64, u64)>> {
    let subs = all_subgroups(g, caps)?;
    let order = g.order() as u64;
    let mut out = Vec::new();
    for index in 1..=order {
        if order % index != 0 {
            continue;
        }
        let count = subs.iter().filter(|h| h.index_in(g) as u64 == index).count() as u64;
        out.push((index, count));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::{
        cyclic, dihedral, elementary_abelian, free_cmea, lamplighter_quotient, subgroup_generated,
        sym3, trivial,
    };

    fn caps() -> Caps {
        Caps::default()
    }

    fn q(n: i64) -> BigRational {
        intq(n)
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn growth_table_frozen_counts() {
        let v4 = elementary_abelian(2, 2, &caps()).unwrap();
        let t = growth_table(&v4, true, &caps()).unwrap();
        let rows: Vec<(u64, u64, Option<u64>)> =
            t.rows().iter().map(|r| (r.index, r.normal, r.characteristic)).collect();
        assert_eq!(rows, vec![(1, 1, Some(1)), (2, 3, Some(0)), (4, 1, Some(1))]);
        assert_eq!(t.s_normal(1), 1);
        assert_eq!(t.s_normal(3), 4);
        assert_eq!(t.s_normal(4), 5);
        assert_eq!(t.s_characteristic(4), Some(2));

        let c8 = cyclic(8, &caps()).unwrap();
        let t = growth_table(&c8, true, &caps()).unwrap();
        for r in t.rows() {
            assert_eq!(r.normal, 1);
            assert_eq!(r.characteristic, Some(1));
        }
        assert_eq!(t.rows().len(), 4);

        let d8 = dihedral(8, &caps()).unwrap();
        let t = growth_table(&d8, false, &caps()).unwrap();
        let rows: Vec<(u64, u64)> = t.rows().iter().map(|r| (r.index, r.normal)).collect();
        assert_eq!(rows, vec![(1, 1), (2, 3), (4, 1), (8, 1)]);
        assert_eq!(t.s_normal(8), 6);
        assert_eq!(t.rows().last().unwrap().characteristic, None);
        assert_eq!(t.s_characteristic(8), None);
    }

    #[test]
    fn growth_table_emission_formats() {
        let v4 = elementary_abelian(2, 2, &caps()).unwrap();
        let t = growth_table(&v4, true, &caps()).unwrap();
        assert_eq!(
            t.to_json(),
            json!({
                "1": {"normal": 1, "characteristic": 1},
                "2": {"normal": 3, "characteristic": 0},
                "4": {"normal": 1, "characteristic": 1},
            })
        );
        assert_eq!(t.to_csv(), "index,normal,characteristic\n1,1,1\n2,3,0\n4,1,1\n");
        let d8 = dihedral(8, &caps()).unwrap();
        let t = growth_table(&d8, false, &caps()).unwrap();
        assert_eq!(t.to_csv(), "index,normal,characteristic\n1,1,\n2,3,\n4,1,\n8,1,\n");
        assert_eq!(t.to_json()["2"], json!({"normal": 3, "characteristic": null}));
    }

    #[test]
    fn growth_table_cumulatives_are_monotone_and_start_at_the_whole_group() {
        let roster: Vec<FiniteGroup> = vec![
            sym3(&caps()).unwrap(),
            dihedral(8, &caps()).unwrap(),
            elementary_abelian(2, 3, &caps()).unwrap(),
            cyclic(12, &caps()).unwrap(),
            lamplighter_quotient(2, 1, &caps()).unwrap(),
        ];
        for g in &roster {
            let t = growth_table(g, true, &caps()).unwrap();
            let first = &t.rows()[0];
            assert_eq!((first.index, first.normal, first.characteristic), (1, 1, Some(1)));
            let mut prev_n = 0;
            let mut prev_c = 0;
            for r in t.rows() {
                assert!(r.cumulative_normal >= prev_n);
                prev_n = r.cumulative_normal;
                let c = r.cumulative_characteristic.unwrap();
                assert!(c >= prev_c);
                prev_c = c;
            }
        }
    }

    #[test]
    fn characteristic_at_most_normal_at_most_all_subgroups() {
        let roster: Vec<FiniteGroup> = vec![
            sym3(&caps()).unwrap(),
            dihedral(8, &caps()).unwrap(),
            elementary_abelian(2, 2, &caps()).unwrap(),
            cyclic(8, &caps()).unwrap(),
        ];
        for g in &roster {
            let t = growth_table(g, true, &caps()).unwrap();
            let subs = subgroup_counts_by_index(g, &caps()).unwrap();
            for (r, (idx, total)) in t.rows().iter().zip(subs) {
                assert_eq!(r.index, idx);
                assert!(r.characteristic.unwrap() <= r.normal);
                assert!(r.normal <= total);
            }
        }
    }

    #[test]
    fn chain_upper_bound_frozen_values() {
        let v4 = elementary_abelian(2, 2, &caps()).unwrap();
        let rep = chain_upper_bound(&v4, &caps()).unwrap();
        assert!(rep.holds && rep.consistent());
        let rows: Vec<(u64, BigRational, BigRational)> =
            rep.rows.iter().map(|r| (r.at, r.left.clone(), r.right.clone())).collect();
        assert_eq!(rows, vec![(2, q(3), q(3)), (4, q(1), q(3))]);

        let c8 = cyclic(8, &caps()).unwrap();
        let rep = chain_upper_bound(&c8, &caps()).unwrap();
        assert!(rep.holds);
        for r in &rep.rows {
            // One subgroup per layer against a bound of one chain.
            assert_eq!(r.left, q(1));
            assert_eq!(r.right, q(1));
        }

        let t = trivial(&caps()).unwrap();
        let rep = chain_upper_bound(&t, &caps()).unwrap();
        assert!(rep.holds && rep.vacuous);

        assert!(matches!(
            chain_upper_bound(&sym3(&caps()).unwrap(), &caps()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            chain_upper_bound(&cyclic(12, &caps()).unwrap(), &caps()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn chain_upper_bound_holds_across_p_groups() {
        let roster: Vec<FiniteGroup> = vec![
            dihedral(8, &caps()).unwrap(),
            dihedral(16, &caps()).unwrap(),
            cyclic(16, &caps()).unwrap(),
            elementary_abelian(2, 3, &caps()).unwrap(),
            elementary_abelian(3, 2, &caps()).unwrap(),
            free_cmea(2, 2, &caps()).unwrap(),
            lamplighter_quotient(2, 1, &caps()).unwrap(),
        ];
        for g in &roster {
            let rep = chain_upper_bound(g, &caps()).unwrap();
            assert!(rep.holds, "chain bound fails on {}", g.label());
            assert!(rep.consistent());
            assert!(!rep.witnesses.is_empty());
        }
    }

    #[test]
    fn subspace_lower_bound_worked_example() {
        let g = free_cmea(2, 2, &caps()).unwrap();
        let n = frattini_p(&g).unwrap();
        assert_eq!(d_normal(&g, &n, &caps()).unwrap(), 3);
        let rep = subspace_lower_bound(&g, &n, &BigRational::one(), &caps()).unwrap();
        assert!(rep.holds && !rep.vacuous && rep.consistent());
        // count = 7 subspaces of codimension 1 in F_2^3; sides enter
        // raised to the 4th power: 7^4 against 2^(1*4).
        assert_eq!(rep.left, q(2401));
        assert_eq!(rep.right, q(16));
    }

    #[test]
    fn subspace_lower_bound_vacuous_cases() {
        // dim N/Phi_G(N) = 1 beats nothing: hypothesis fails.
        let c8 = cyclic(8, &caps()).unwrap();
        let n = subgroup_generated(&c8, &[4]).unwrap();
        let rep = subspace_lower_bound(&c8, &n, &BigRational::one(), &caps()).unwrap();
        assert!(rep.vacuous && rep.holds && rep.consistent());
        assert_eq!(rep.left, q(1));
        assert_eq!(rep.right, q(2));
        // c = 2 pushes the worked example below its hypothesis too.
        let g = free_cmea(2, 2, &caps()).unwrap();
        let n = frattini_p(&g).unwrap();
        let rep = subspace_lower_bound(&g, &n, &q(2), &caps()).unwrap();
        assert!(rep.vacuous);
        // N = G makes the codimension zero and both sides one.
        let whole = SubgroupHandle::whole(&g);
        let rep = subspace_lower_bound(&g, &whole, &BigRational::one(), &caps()).unwrap();
        assert!(!rep.vacuous && rep.holds);
        assert_eq!(rep.left, q(1));
        assert_eq!(rep.right, q(1));
        assert!(subspace_lower_bound(&g, &n, &q(0), &caps()).is_err());
        assert!(subspace_lower_bound(&sym3(&caps()).unwrap(), &n, &q(1), &caps()).is_err());
    }

    #[test]
    fn subspace_lower_bound_scan_is_consistent() {
        let roster: Vec<FiniteGroup> = vec![
            elementary_abelian(2, 2, &caps()).unwrap(),
            elementary_abelian(2, 3, &caps()).unwrap(),
            elementary_abelian(3, 2, &caps()).unwrap(),
            cyclic(8, &caps()).unwrap(),
            dihedral(8, &caps()).unwrap(),
            free_cmea(2, 2, &caps()).unwrap(),
        ];
        let cs = [qr(1, 2), q(1), q(2)];
        for g in &roster {
            for n in normal_subgroups(g, &caps()).unwrap() {
                for c in &cs {
                    let rep = subspace_lower_bound(g, &n, c, &caps()).unwrap();
                    assert!(rep.consistent());
                }
            }
        }
    }

    #[test]
    fn index_transfer_frozen_and_swept() {
        let d8 = dihedral(8, &caps()).unwrap();
        let c4 = subgroup_generated(&d8, &[1]).unwrap();
        let rep = index_transfer_check(&d8, &c4, &caps()).unwrap();
        assert!(rep.holds && rep.consistent());
        let whole = SubgroupHandle::whole(&d8);
        assert!(index_transfer_check(&d8, &whole, &caps()).unwrap().holds);
        let lamp = lamplighter_quotient(2, 2, &caps()).unwrap();
        let base = lamp.marked_subgroup("base").unwrap();
        assert!(index_transfer_check(&lamp, &base, &caps()).unwrap().holds);

        let roster: Vec<FiniteGroup> = vec![
            sym3(&caps()).unwrap(),
            dihedral(8, &caps()).unwrap(),
            elementary_abelian(2, 3, &caps()).unwrap(),
            cyclic(12, &caps()).unwrap(),
        ];
        for g in &roster {
            for d in all_subgroups(g, &caps()).unwrap() {
                let rep = index_transfer_check(g, &d, &caps()).unwrap();
                assert!(rep.holds, "transfer fails on {} at index {}", g.label(), d.index_in(g));
                assert!(rep.consistent());
            }
        }
    }

    #[test]
    fn virtual_transfer_frozen_and_swept() {
        let lamp = lamplighter_quotient(2, 1, &caps()).unwrap();
        let base = lamp.marked_subgroup("base").unwrap();
        let rep = virtual_transfer_check(&lamp, &base, &base, &caps()).unwrap();
        assert!(rep.holds && rep.consistent());
        assert_eq!(rep.left, q(1));
        assert_eq!(rep.right, q(1));
        // H = G: both sides coincide structurally.
        let whole = SubgroupHandle::whole(&lamp);
        let rep = virtual_transfer_check(&lamp, &whole, &base, &caps()).unwrap();
        assert!(rep.holds);

        let d8 = dihedral(8, &caps()).unwrap();
        let refl = subgroup_generated(&d8, &[4]).unwrap();
        assert!(matches!(
            virtual_transfer_check(&d8, &refl, &refl, &caps()),
            Err(Error::Domain(_))
        ));
        let s3 = sym3(&caps()).unwrap();
        let whole3 = SubgroupHandle::whole(&s3);
        assert!(matches!(
            virtual_transfer_check(&s3, &whole3, &whole3, &caps()),
            Err(Error::Domain(_))
        ));

        let roster: Vec<FiniteGroup> = vec![
            dihedral(8, &caps()).unwrap(),
            elementary_abelian(2, 3, &caps()).unwrap(),
            lamplighter_quotient(2, 1, &caps()).unwrap(),
            cyclic(16, &caps()).unwrap(),
            free_cmea(2, 2, &caps()).unwrap(),
        ];
        for g in &roster {
            let normals = normal_subgroups(g, &caps()).unwrap();
            for h in &normals {
                if h.order() > 1 && prime_power(h.order() as u64).is_none() {
                    continue;
                }
                for n in &normals {
                    if !h.contains_all(n) {
                        continue;
                    }
                    let rep = virtual_transfer_check(g, h, n, &caps()).unwrap();
                    assert!(
                        rep.holds,
                        "virtual transfer fails on {} with |H| = {}, |N| = {}",
                        g.label(),
                        h.order(),
                        n.order()
                    );
                }
            }
        }
    }

    #[test]
    fn theorem1_frozen_values() {
        let d8 = dihedral(8, &caps()).unwrap();
        let c4 = subgroup_generated(&d8, &[1]).unwrap();
        let rep = theorem1_check(&d8, &c4, 2, &caps()).unwrap();
        assert!(rep.holds && rep.consistent());
        assert_eq!(rep.left, q(1));
        assert_eq!(rep.right, q(-1));
        // The attained subgroup comes back as a witness.
        assert_eq!(rep.witnesses.len(), 2);
        assert_eq!(rep.witnesses[1].order(), 2);

        let t = trivial(&caps()).unwrap();
        let whole = SubgroupHandle::whole(&t);
        let rep = theorem1_check(&t, &whole, 2, &caps()).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.left, q(0));
        assert_eq!(rep.right, q(0));

        // D = G on the free instance: equality 3 >= 5/1 - 2.
        let g = free_cmea(2, 2, &caps()).unwrap();
        let whole = SubgroupHandle::whole(&g);
        let rep = theorem1_check(&g, &whole, 2, &caps()).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.left, q(3));
        assert_eq!(rep.right, q(3));

        let s3 = sym3(&caps()).unwrap();
        let refl = subgroup_generated(&s3, &[3]).unwrap();
        assert!(matches!(theorem1_check(&s3, &refl, 2, &caps()), Err(Error::Domain(_))));
    }

    #[test]
    fn theorem1_holds_across_a_sweep() {
        let roster: Vec<FiniteGroup> = vec![
            sym3(&caps()).unwrap(),
            dihedral(8, &caps()).unwrap(),
            elementary_abelian(2, 3, &caps()).unwrap(),
            cyclic(12, &caps()).unwrap(),
            lamplighter_quotient(2, 1, &caps()).unwrap(),
            free_cmea(2, 2, &caps()).unwrap(),
        ];
        for g in &roster {
            for d in normal_subgroups(g, &caps()).unwrap() {
                let mut rest = d.order() as u64;
                let mut ps = Vec::new();
                let mut f = 2;
                while f * f <= rest {
                    if rest % f == 0 {
                        ps.push(f);
                        while rest % f == 0 {
                            rest /= f;
                        }
                    }
                    f += 1;
                }
                if rest > 1 {
                    ps.push(rest);
                }
                for p in ps {
                    let rep = theorem1_check(g, &d, p, &caps()).unwrap();
                    assert!(
                        rep.holds,
                        "rank transfer fails on {} with |D| = {}, p = {}",
                        g.label(),
                        d.order(),
                        p
                    );
                    assert!(rep.consistent());
                }
            }
        }
    }

    #[test]
    fn rank_gradient_ratios() {
        let lamp = lamplighter_quotient(2, 2, &caps()).unwrap();
        let base = lamp.marked_subgroup("base").unwrap();
        let whole = SubgroupHandle::whole(&lamp);
        let ratios = rank_gradient_chain(&lamp, &[whole, base], &caps()).unwrap();
        assert_eq!(ratios, vec![q(2), q(1)]);

        let s3 = sym3(&caps()).unwrap();
        let ratios = rank_gradient_chain(&s3, &[SubgroupHandle::whole(&s3)], &caps()).unwrap();
        assert_eq!(ratios, vec![q(2)]);

        // A full flag in E(2^4): ratios dim / 2^(4 - dim).
        let e = elementary_abelian(2, 4, &caps()).unwrap();
        let span = |k: u32| subgroup_generated(&e, &(0..k).map(|i| 1 << i).collect::<Vec<_>>());
        let chain = vec![
            span(4).unwrap(),
            span(3).unwrap(),
            span(2).unwrap(),
            span(1).unwrap(),
        ];
        let ratios = rank_gradient_chain(&e, &chain, &caps()).unwrap();
        assert_eq!(ratios, vec![q(4), qr(3, 2), qr(2, 4), qr(1, 8)]);

        // Not descending.
        let bad = vec![span(2).unwrap(), span(3).unwrap()];
        assert!(matches!(rank_gradient_chain(&e, &bad, &caps()), Err(Error::Domain(_))));
    }

    #[test]
    fn free_subgroup_rank_formula() {
        assert_eq!(free_subgroup_rank(2, 2).unwrap(), 3);
        assert_eq!(free_subgroup_rank(3, 4).unwrap(), 9);
        for d in 1..6 {
            assert_eq!(free_subgroup_rank(d, 1).unwrap(), d);
        }
        assert!(free_subgroup_rank(0, 2).is_err());
        assert!(free_subgroup_rank(2, 0).is_err());
    }

    #[test]
    fn prop14_arithmetic_cases() {
        let rep = prop14_arithmetic_check(2, 2, 1).unwrap();
        assert!(rep.holds && rep.consistent());
        assert_eq!(rep.rows[0].left, q(18));
        assert_eq!(rep.rows[0].right, q(9));
        assert_eq!(rep.rows[1].left, q(9));
        assert_eq!(rep.rows[1].right, q(4));

        let rep = prop14_arithmetic_check(2, 2, 3).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.rows[0].left, q(108));
        assert_eq!(rep.rows[1].right, q(64));

        // Degenerate free rank 1.
        let rep = prop14_arithmetic_check(1, 7, 5).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.rows[0].left, q(4));
        assert_eq!(rep.rows[0].right, q(1));
        assert_eq!(rep.rows[1].right, q(0));

        assert!(prop14_arithmetic_check(0, 2, 1).is_err());
        assert!(prop14_arithmetic_check(2, 1, 1).is_err());
    }
}
