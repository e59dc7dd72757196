//! Truncated series in the free noncommutative algebra F_p<X>, and the
//! Magnus map of free-group words.
//!
//! A series is stored as a finite map from monomials (words in the
//! generators) to nonzero coefficients mod p, keeping only monomials of
//! weighted degree strictly below the truncation. The Magnus map sends a
//! generator x to 1 + x and x^-1 to the geometric series inverse; the
//! weighted degree of a group word w is the valuation of magnus(w) - 1,
//! i.e. the least weighted degree of a surviving monomial. The valuation
//! is found by recomputing at increasing truncations, so a word whose
//! expansion vanishes below the cap is reported as a cap error rather
//! than looping.

use crate::error::{Error, Result};
use crate::fplin::is_prime;
use std::collections::BTreeMap;

/// Generator names plus the coefficient prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    p: u64,
}

impl Alphabet {
    pub fn new(names: Vec<String>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("p = {p} must be prime")));
        }
        if names.is_empty() {
            return Err(Error::domain("alphabet needs at least one generator"));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::domain("generator names must be nonempty"));
            }
            if names[..i].contains(n) {
                return Err(Error::domain(format!("duplicate generator name {n:?}")));
            }
        }
        Ok(Alphabet { names, p })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Positive integer weight per generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DegreeMap {
    weights: Vec<u32>,
}

impl DegreeMap {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::domain("degree weights must be >= 1"));
        }
        Ok(DegreeMap { weights })
    }

    pub fn unit(n: usize) -> Self {
        DegreeMap { weights: vec![1; n] }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, gen: usize) -> u32 {
        self.weights[gen]
    }
}

/// Free-group word: a sequence of (generator index, nonzero exponent)
/// factors. Construction does not reduce; call [`Word::reduced`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Word {
    factors: Vec<(usize, i64)>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn gen(g: usize) -> Self {
        Word { factors: vec![(g, 1)] }
    }

    pub fn power(g: usize, e: i64) -> Self {
        if e == 0 {
            Word::empty()
        } else {
            Word { factors: vec![(g, e)] }
        }
    }

    pub fn from_factors(factors: Vec<(usize, i64)>) -> Self {
        Word { factors: factors.into_iter().filter(|&(_, e)| e != 0).collect() }
    }

    pub fn factors(&self) -> &[(usize, i64)] {
        &self.factors
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        Word { factors: f }
    }

    pub fn inverse(&self) -> Word {
        Word { factors: self.factors.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// [u, v] = u v u^-1 v^-1.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// Freely reduced form: adjacent factors on the same generator merge,
    /// zero exponents drop, cascading.
    pub fn reduced(&self) -> Word {
        let mut stack: Vec<(usize, i64)> = Vec::new();
        for &(g, e) in &self.factors {
            if e == 0 {
                continue;
            }
            match stack.last_mut() {
                Some(top) if top.0 == g => {
                    top.1 += e;
                    if top.1 == 0 {
                        stack.pop();
                    }
                }
                _ => stack.push((g, e)),
            }
        }
        Word { factors: stack }
    }

    pub fn is_trivial(&self) -> bool {
        self.reduced().factors.is_empty()
    }
}

type Monomial = Vec<u16>;

fn weighted_degree(weights: &[u32], m: &[u16]) -> u32 {
    m.iter().map(|&g| weights[g as usize]).sum()
}

/// Truncated element of F_p<X>: monomials of weighted degree < `trunc`
/// with nonzero coefficients mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcSeries {
    p: u64,
    weights: Vec<u32>,
    trunc: u32,
    terms: BTreeMap<Monomial, u64>,
}

/// Stored-term budget per series; keeps dense two-generator expansions at
/// high truncation from exhausting memory.
pub const DEFAULT_TERM_CAP: u64 = 1 << 20;

impl NcSeries {
    /// The series 1.
    pub fn one(p: u64, weights: &DegreeMap, trunc: u32) -> Self {
        let mut terms = BTreeMap::new();
        if trunc > 0 {
            terms.insert(Vec::new(), 1 % p);
        }
        NcSeries { p, weights: weights.weights().to_vec(), trunc, terms }
    }

    pub fn zero(p: u64, weights: &DegreeMap, trunc: u32) -> Self {
        NcSeries { p, weights: weights.weights().to_vec(), trunc, terms: BTreeMap::new() }
    }

    /// The single generator monomial x_g (absent if its weight >= trunc).
    pub fn gen(p: u64, weights: &DegreeMap, trunc: u32, g: usize) -> Self {
        let mut s = NcSeries::zero(p, weights, trunc);
        if weights.weight(g) < trunc {
            s.terms.insert(vec![g as u16], 1 % p);
        }
        s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Vec::new()).copied() == Some(1)
    }

    fn check_compatible(&self, other: &NcSeries) -> Result<()> {
        if self.p != other.p || self.weights != other.weights || self.trunc != other.trunc {
            return Err(Error::domain(
                "series parameters differ (prime, weights, or truncation)",
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &NcSeries) -> Result<NcSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            let e = out.terms.entry(m.clone()).or_insert(0);
            *e = (*e + c) % self.p;
            if *e == 0 {
                out.terms.remove(m);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> NcSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.p - *c;
        }
        out
    }

    pub fn sub(&self, other: &NcSeries) -> Result<NcSeries> {
        self.add(&other.neg())
    }

    /// Truncated product, guarded by the stored-term budget.
    pub fn mul_capped(&self, other: &NcSeries, term_cap: u64) -> Result<NcSeries> {
        self.check_compatible(other)?;
        let mut out = NcSeries {
            p: self.p,
            weights: self.weights.clone(),
            trunc: self.trunc,
            terms: BTreeMap::new(),
        };
        let b_degs: Vec<(u32, &Monomial, u64)> = other
            .terms
            .iter()
            .map(|(m, &c)| (weighted_degree(&other.weights, m), m, c))
            .collect();
        for (ma, &ca) in &self.terms {
            let da = weighted_degree(&self.weights, ma);
            for &(db, mb, cb) in &b_degs {
                if da + db >= self.trunc {
                    continue;
                }
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                let e = out.terms.entry(m.clone()).or_insert(0);
                *e = (*e + ca * cb % self.p) % self.p;
                if *e == 0 {
                    out.terms.remove(&m);
                }
            }
            if out.terms.len() as u64 > term_cap {
                return Err(Error::Cap {
                    cap: "series-terms",
                    limit: term_cap as u128,
                    needed: out.terms.len() as u128,
                });
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &NcSeries) -> Result<NcSeries> {
        self.mul_capped(other, DEFAULT_TERM_CAP)
    }

    fn pow_capped(&self, e: u64, term_cap: u64) -> Result<NcSeries> {
        let weights = DegreeMap { weights: self.weights.clone() };
        let mut acc = NcSeries::one(self.p, &weights, self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_capped(&base, term_cap)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_capped(&base, term_cap)?;
            }
        }
        Ok(acc)
    }

    /// Least weighted degree of a stored monomial, if any.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| weighted_degree(&self.weights, m)).min()
    }
}

/// Inverse of 1 + u for u with zero constant term, by the geometric
/// series; terminates because u's valuation is at least 1.
pub fn inverse_of_one_plus(u: &NcSeries, term_cap: u64) -> Result<NcSeries> {
    if u.terms.contains_key(&Vec::new()) {
        return Err(Error::domain("inverse_of_one_plus needs a zero constant term"));
    }
    let weights = DegreeMap { weights: u.weights.clone() };
    let mut result = NcSeries::one(u.p, &weights, u.trunc);
    let neg_u = u.neg();
    let mut power = NcSeries::one(u.p, &weights, u.trunc);
    loop {
        power = power.mul_capped(&neg_u, term_cap)?;
        if power.is_zero() {
            break;
        }
        result = result.add(&power)?;
    }
    Ok(result)
}

/// Magnus map: x |-> 1 + x, x^-1 |-> (1 + x)^-1, extended over the word
/// multiplicatively, all mod p and truncated.
pub fn magnus(alphabet: &Alphabet, deg: &DegreeMap, w: &Word, trunc: u32) -> Result<NcSeries> {
    magnus_capped(alphabet, deg, w, trunc, DEFAULT_TERM_CAP)
}

pub fn magnus_capped(
    alphabet: &Alphabet,
    deg: &DegreeMap,
    w: &Word,
    trunc: u32,
    term_cap: u64,
) -> Result<NcSeries> {
    if deg.weights().len() != alphabet.len() {
        return Err(Error::domain("degree map does not match the alphabet"));
    }
    let p = alphabet.p();
    let mut acc = NcSeries::one(p, deg, trunc);
    for &(g, e) in w.factors() {
        if g >= alphabet.len() {
            return Err(Error::domain(format!("generator index {g} out of range")));
        }
        let base = {
            let one_plus = NcSeries::one(p, deg, trunc).add(&NcSeries::gen(p, deg, trunc, g))?;
            if e > 0 {
                one_plus
            } else {
                inverse_of_one_plus(&NcSeries::gen(p, deg, trunc, g), term_cap)?
            }
        };
        acc = acc.mul_capped(&base.pow_capped(e.unsigned_abs(), term_cap)?, term_cap)?;
    }
    Ok(acc)
}

/// Weighted degree of a nontrivial word: the valuation of magnus(w) - 1,
/// found by recomputing at increasing truncations up to `n_max`.
///
/// The freely trivial word is rejected (its expansion is exactly 1), and
/// a word whose expansion vanishes below the cap gives a cap error: it is
/// either of very high degree or trivial modulo p-power torsion effects.
pub fn magnus_degree(alphabet: &Alphabet, deg: &DegreeMap, w: &Word, n_max: u32) -> Result<u32> {
    magnus_degree_capped(alphabet, deg, w, n_max, DEFAULT_TERM_CAP)
}

pub fn magnus_degree_capped(
    alphabet: &Alphabet,
    deg: &DegreeMap,
    w: &Word,
    n_max: u32,
    term_cap: u64,
) -> Result<u32> {
    let reduced = w.reduced();
    if reduced.factors().is_empty() {
        return Err(Error::domain("word freely reduces to the identity; degree undefined"));
    }
    let final_trunc = n_max.saturating_add(1);
    let mut trunc = final_trunc.min(8);
    loop {
        let series = magnus_capped(alphabet, deg, &reduced, trunc, term_cap)?;
        let one = NcSeries::one(alphabet.p(), deg, trunc);
        let diff = series.sub(&one)?;
        if let Some(v) = diff.valuation() {
            return Ok(v);
        }
        if trunc >= final_trunc {
            return Err(Error::DegreeCap { cap: n_max });
        }
        trunc = (trunc * 2).min(final_trunc);
    }
}

/// Weighted degree of each relator, with the failing relator identified.
pub fn relator_hilbert_terms(
    alphabet: &Alphabet,
    deg: &DegreeMap,
    relators: &[Word],
    n_max: u32,
) -> Result<Vec<u32>> {
    relator_hilbert_terms_capped(alphabet, deg, relators, n_max, DEFAULT_TERM_CAP)
}

pub fn relator_hilbert_terms_capped(
    alphabet: &Alphabet,
    deg: &DegreeMap,
    relators: &[Word],
    n_max: u32,
    term_cap: u64,
) -> Result<Vec<u32>> {
    relators
        .iter()
        .enumerate()
        .map(|(i, r)| {
            magnus_degree_capped(alphabet, deg, r, n_max, term_cap).map_err(|e| match e {
                Error::Domain(msg) => Error::Domain(format!("relator {}: {msg}", i + 1)),
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn setup(p: u64) -> (Alphabet, DegreeMap) {
        let a = Alphabet::new(vec!["x".into(), "y".into()], p).unwrap();
        let d = DegreeMap::unit(2);
        (a, d)
    }

    fn random_word(rng: &mut StdRng, gens: usize, max_len: usize) -> Word {
        let len = rng.gen_range(1..=max_len);
        let factors = (0..len)
            .map(|_| {
                let g = rng.gen_range(0..gens);
                let e = loop {
                    let e = rng.gen_range(-3i64..=3);
                    if e != 0 {
                        break e;
                    }
                };
                (g, e)
            })
            .collect();
        Word::from_factors(factors)
    }

    #[test]
    fn generator_degree_is_its_weight() {
        let (a, d) = setup(2);
        assert_eq!(magnus_degree(&a, &d, &Word::gen(0), 24).unwrap(), 1);
        let d2 = DegreeMap::new(vec![2, 1]).unwrap();
        assert_eq!(magnus_degree(&a, &d2, &Word::gen(0), 24).unwrap(), 2);
    }

    #[test]
    fn commutator_degree_adds_weights() {
        for p in [2u64, 3] {
            let (a, _) = setup(p);
            for (wx, wy) in [(1u32, 1u32), (1, 2), (2, 1), (2, 2)] {
                let d = DegreeMap::new(vec![wx, wy]).unwrap();
                let c = Word::commutator(&Word::gen(0), &Word::gen(1));
                assert_eq!(
                    magnus_degree(&a, &d, &c, 24).unwrap(),
                    wx + wy,
                    "p={p} weights=({wx},{wy})"
                );
            }
        }
    }

    #[test]
    fn p_th_power_degree_scales_by_p() {
        for p in [2u64, 3, 5] {
            let a = Alphabet::new(vec!["x".into()], p).unwrap();
            for wx in [1u32, 2] {
                let d = DegreeMap::new(vec![wx]).unwrap();
                let w = Word::power(0, p as i64);
                assert_eq!(magnus_degree(&a, &d, &w, 24).unwrap(), p as u32 * wx);
            }
        }
    }

    #[test]
    fn trivial_word_maps_to_one_and_degree_rejects_it() {
        let (a, d) = setup(3);
        let w = Word::from_factors(vec![(0, -1), (0, 1)]);
        let s = magnus(&a, &d, &w, 12).unwrap();
        assert!(s.is_one(), "magnus of x^-1 x must be exactly 1");
        assert!(matches!(magnus_degree(&a, &d, &w, 24), Err(Error::Domain(_))));
    }

    #[test]
    fn degree_cap_reported_for_high_valuation() {
        // Over F_2, x^(2^5) expands to 1 + x^32, above the default cap 24.
        let a = Alphabet::new(vec!["x".into()], 2).unwrap();
        let d = DegreeMap::unit(1);
        let w = Word::power(0, 32);
        match magnus_degree(&a, &d, &w, 24) {
            Err(Error::DegreeCap { cap }) => assert_eq!(cap, 24),
            other => panic!("expected degree cap error, got {other:?}"),
        }
        assert_eq!(magnus_degree(&a, &d, &w, 40).unwrap(), 32);
    }

    #[test]
    fn magnus_is_a_homomorphism() {
        let mut rng = StdRng::seed_from_u64(23);
        for p in [2u64, 3] {
            let (a, d) = setup(p);
            for _ in 0..40 {
                let u = random_word(&mut rng, 2, 5);
                let v = random_word(&mut rng, 2, 5);
                let lhs = magnus(&a, &d, &u.mul(&v), 8).unwrap();
                let rhs = magnus(&a, &d, &u, 8).unwrap().mul(&magnus(&a, &d, &v, 8).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn magnus_of_inverse_is_series_inverse() {
        let mut rng = StdRng::seed_from_u64(29);
        let (a, d) = setup(2);
        for _ in 0..30 {
            let u = random_word(&mut rng, 2, 5);
            let prod = magnus(&a, &d, &u.mul(&u.inverse()), 8).unwrap();
            assert!(prod.is_one());
        }
    }

    #[test]
    fn valuation_properties_on_random_words() {
        let mut rng = StdRng::seed_from_u64(31);
        let (a, d) = setup(2);
        let cap = 24;
        let deg = |w: &Word| -> Option<u32> {
            match magnus_degree(&a, &d, w, cap) {
                Ok(v) => Some(v),
                Err(Error::DegreeCap { .. }) => None, // above cap
                Err(e) => panic!("unexpected error {e:?}"),
            }
        };
        for _ in 0..60 {
            let u = random_word(&mut rng, 2, 4);
            let v = random_word(&mut rng, 2, 4);
            if u.is_trivial() || v.is_trivial() {
                continue;
            }
            let du = deg(&u).expect("short word degree under cap");
            let dv = deg(&v).expect("short word degree under cap");
            assert_eq!(deg(&u.inverse()), Some(du), "degree of inverse");
            let uv = u.mul(&v);
            if !uv.is_trivial() {
                if let Some(duv) = deg(&uv) {
                    assert!(duv >= du.min(dv), "d(uv) >= min(d(u), d(v))");
                }
            }
            let c = Word::commutator(&u, &v);
            if !c.is_trivial() && du + dv <= cap {
                match deg(&c) {
                    Some(dc) => assert!(dc >= du + dv, "d([u,v]) >= d(u) + d(v)"),
                    None => {} // exceeds the cap, hence certainly >= du + dv
                }
            }
        }
    }

    #[test]
    fn nested_commutators_reach_their_depth() {
        let (a, d) = setup(2);
        let x = Word::gen(0);
        let y = Word::gen(1);
        let mut c = x.clone();
        let mut other = &y;
        for depth in 2..=4u32 {
            c = Word::commutator(&c, other);
            other = if depth % 2 == 0 { &x } else { &y };
            let dc = magnus_degree(&a, &d, &c, 24).unwrap();
            assert!(dc >= depth, "depth {depth} commutator has degree {dc}");
        }
    }

    #[test]
    fn relator_degrees_of_standard_surface_like_set() {
        let (a, d) = setup(2);
        let rels = vec![
            Word::power(0, 2),
            Word::power(1, 2),
            Word::commutator(&Word::gen(0), &Word::gen(1)),
        ];
        assert_eq!(relator_hilbert_terms(&a, &d, &rels, 24).unwrap(), vec![2, 2, 2]);
    }

    #[test]
    fn relator_errors_identify_the_relator() {
        let (a, d) = setup(2);
        let rels = vec![Word::power(0, 2), Word::from_factors(vec![(1, 1), (1, -1)])];
        match relator_hilbert_terms(&a, &d, &rels, 24) {
            Err(Error::Domain(msg)) => assert!(msg.contains("relator 2"), "got {msg}"),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn series_ops_respect_ring_axioms() {
        let mut rng = StdRng::seed_from_u64(37);
        let (a, d) = setup(3);
        for _ in 0..20 {
            let u = magnus(&a, &d, &random_word(&mut rng, 2, 4), 7).unwrap();
            let v = magnus(&a, &d, &random_word(&mut rng, 2, 4), 7).unwrap();
            let w = magnus(&a, &d, &random_word(&mut rng, 2, 4), 7).unwrap();
            let assoc_l = u.mul(&v).unwrap().mul(&w).unwrap();
            let assoc_r = u.mul(&v.mul(&w).unwrap()).unwrap();
            assert_eq!(assoc_l, assoc_r);
            let dist_l = u.mul(&v.add(&w).unwrap()).unwrap();
            let dist_r = u.mul(&v).unwrap().add(&u.mul(&w).unwrap()).unwrap();
            assert_eq!(dist_l, dist_r);
        }
    }

    #[test]
    fn mismatched_series_parameters_are_domain_errors() {
        let (_a, d) = setup(2);
        let d2 = DegreeMap::new(vec![2, 1]).unwrap();
        let s1 = NcSeries::one(2, &d, 8);
        let s2 = NcSeries::one(2, &d2, 8);
        assert!(s1.add(&s2).is_err());
        let s3 = NcSeries::one(2, &d, 9);
        assert!(s1.mul(&s3).is_err());
    }

    #[test]
    fn geometric_inverse_cancels_exactly() {
        let (a, d) = setup(5);
        let x = NcSeries::gen(5, &d, 10, 0);
        let inv = inverse_of_one_plus(&x, DEFAULT_TERM_CAP).unwrap();
        let one_plus = NcSeries::one(5, &d, 10).add(&x).unwrap();
        assert!(one_plus.mul(&inv).unwrap().is_one());
        let _ = a;
    }

    #[test]
    fn alphabet_rejects_duplicates_and_bad_primes() {
        assert!(Alphabet::new(vec!["x".into(), "x".into()], 2).is_err());
        assert!(Alphabet::new(vec!["x".into()], 4).is_err());
        assert!(DegreeMap::new(vec![0]).is_err());
    }
}
