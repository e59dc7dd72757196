//! Golod-Shafarevich certificates from exact Hilbert series data.
//!
//! For a presentation with generator degrees d_x and relator degrees d_r
//! (weighted Magnus degrees), the test function at a rational t in (0,1)
//! is  1 - sum_x t^{d_x} + sum_r t^{d_r}.  A strictly negative value at
//! some t is a certificate; its margin delta = -value feeds the generator
//! growth bound  floor(delta * t^-n) + 1.
//!
//! All arithmetic is exact rational; the grid search scans degree maps in
//! lexicographic order and grid points in increasing order, so results
//! are deterministic.

use crate::error::{Error, Result};
use crate::fplin::BigCount;
use crate::freealg::{relator_hilbert_terms_capped, Alphabet, DegreeMap, Word, DEFAULT_TERM_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Exact rational carrier used throughout the certificate layer.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_pow(r: &Rational, e: u32) -> Rational {
    BigRational::new(r.numer().pow(e), r.denom().pow(e))
}

/// Render as "a/b" unconditionally (the denominator is kept even when 1,
/// so serialized values are uniform).
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Finitely presented group data: generators with a coefficient prime,
/// freely reduced nonempty relators, and default generator weights.
#[derive(Debug, Clone)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
    default_weights: DegreeMap,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>, default_weights: DegreeMap) -> Result<Self> {
        if default_weights.weights().len() != alphabet.len() {
            return Err(Error::domain("default weights do not match the alphabet"));
        }
        let mut reduced = Vec::with_capacity(relators.len());
        for (i, r) in relators.iter().enumerate() {
            let rr = r.reduced();
            if rr.factors().is_empty() {
                return Err(Error::domain(format!(
                    "relator {} freely reduces to the identity",
                    i + 1
                )));
            }
            for &(g, _) in rr.factors() {
                if g >= alphabet.len() {
                    return Err(Error::domain(format!("relator {} uses unknown generator", i + 1)));
                }
            }
            reduced.push(rr);
        }
        Ok(Presentation { alphabet, relators: reduced, default_weights })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn default_weights(&self) -> &DegreeMap {
        &self.default_weights
    }
}

/// Polynomial with nonnegative integer coefficients, sparse by exponent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HilbertPoly {
    coeffs: BTreeMap<u32, u64>,
}

impl HilbertPoly {
    pub fn zero() -> Self {
        HilbertPoly::default()
    }

    pub fn add_term(&mut self, exp: u32) {
        *self.coeffs.entry(exp).or_insert(0) += 1;
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, u64> {
        &self.coeffs
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&e, &c) in &self.coeffs {
            acc += rational_pow(t, e) * BigRational::from_integer(BigInt::from(c));
        }
        acc
    }
}

/// H_X(t) = sum over generators of t^{weight}.
pub fn hilbert_of_generators(deg: &DegreeMap) -> HilbertPoly {
    let mut h = HilbertPoly::zero();
    for &w in deg.weights() {
        h.add_term(w);
    }
    h
}

/// H_R(t) = sum over relators of t^{weighted degree}; degree-cap errors
/// from any relator propagate.
pub fn hilbert_of_relators(pres: &Presentation, deg: &DegreeMap, n_max: u32) -> Result<HilbertPoly> {
    let degrees =
        relator_hilbert_terms_capped(pres.alphabet(), deg, pres.relators(), n_max, DEFAULT_TERM_CAP)?;
    let mut h = HilbertPoly::zero();
    for d in degrees {
        h.add_term(d);
    }
    Ok(h)
}

/// A witnessed negative value of the test function.
#[derive(Debug, Clone)]
pub struct GsCertificate {
    pub weights: DegreeMap,
    pub t0: Rational,
    pub value: Rational,
    pub delta: Rational,
}

impl GsCertificate {
    fn new(weights: DegreeMap, t0: Rational, value: Rational) -> Self {
        debug_assert!(value.is_negative(), "certificate value must be negative");
        let delta = -value.clone();
        GsCertificate { weights, t0, value, delta }
    }
}

fn check_t0(t0: &Rational) -> Result<()> {
    if !(t0.is_positive() && *t0 < Rational::one()) {
        return Err(Error::domain(format!("t0 = {} must lie strictly in (0,1)", rational_string(t0))));
    }
    Ok(())
}

/// Exact value 1 - H_X(t0) + H_R(t0).
pub fn ggs_value(pres: &Presentation, deg: &DegreeMap, t0: &Rational, n_max: u32) -> Result<Rational> {
    check_t0(t0)?;
    if deg.weights().len() != pres.alphabet().len() {
        return Err(Error::domain("degree map does not match the presentation"));
    }
    let hx = hilbert_of_generators(deg);
    let hr = hilbert_of_relators(pres, deg, n_max)?;
    Ok(Rational::one() - hx.eval(t0) + hr.eval(t0))
}

/// Search diagnostics when no certificate exists on the scanned grid.
#[derive(Debug, Clone)]
pub struct SearchReport {
    /// Least value over evaluated (degree map, t0) pairs, with its witness;
    /// None when every degree map was pruned before evaluation.
    pub min_value: Option<(Rational, DegreeMap, Rational)>,
    pub weight_bound: u32,
    pub grid: u32,
    pub maps_scanned: u64,
    pub maps_pruned: u64,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(GsCertificate),
    NotFound(SearchReport),
}

/// Scan degree maps with weights in [1, weight_bound] (lexicographic) and
/// t0 in {1/grid, ..., (grid-1)/grid} (increasing); return the first
/// certificate. A degree map whose generator series alone keeps
/// 1 - H_X(t) positive on the whole grid is pruned without computing
/// relator degrees.
pub fn ggs_search(
    pres: &Presentation,
    weight_bound: u32,
    grid: u32,
    n_max: u32,
) -> Result<SearchOutcome> {
    if weight_bound < 1 {
        return Err(Error::domain("weight bound must be >= 1"));
    }
    if grid < 2 {
        return Err(Error::domain("grid denominator must be >= 2"));
    }
    let nx = pres.alphabet().len();
    let grid_points: Vec<Rational> = (1..grid).map(|a| rational(a as i64, grid as i64)).collect();

    let mut report = SearchReport {
        min_value: None,
        weight_bound,
        grid,
        maps_scanned: 0,
        maps_pruned: 0,
    };

    let mut weights = vec![1u32; nx];
    loop {
        report.maps_scanned += 1;
        let deg = DegreeMap::new(weights.clone()).expect("weights >= 1");
        let hx = hilbert_of_generators(&deg);
        let pruned = grid_points.iter().all(|t| (Rational::one() - hx.eval(t)).is_positive());
        if pruned {
            report.maps_pruned += 1;
        } else {
            let hr = hilbert_of_relators(pres, &deg, n_max)?;
            for t in &grid_points {
                let value = Rational::one() - hx.eval(t) + hr.eval(t);
                if value.is_negative() {
                    return Ok(SearchOutcome::Found(GsCertificate::new(deg, t.clone(), value)));
                }
                let better = match &report.min_value {
                    None => true,
                    Some((best, _, _)) => value < *best,
                };
                if better {
                    report.min_value = Some((value, deg.clone(), t.clone()));
                }
            }
        }

        // Next weight vector in lexicographic order.
        let mut i = nx;
        loop {
            if i == 0 {
                return Ok(SearchOutcome::NotFound(report));
            }
            i -= 1;
            if weights[i] < weight_bound {
                weights[i] += 1;
                for w in &mut weights[i + 1..] {
                    *w = 1;
                }
                break;
            }
        }
    }
}

/// Generator growth bound floor(delta * t0^-n) + 1 from a certificate.
pub fn gs_generator_bound(cert: &GsCertificate, n: u32) -> BigCount {
    let scaled = &cert.delta * rational_pow(&cert.t0, n).recip();
    let floored = scaled.floor().to_integer();
    let v = floored.to_biguint().expect("delta and t0 are positive");
    v + BigCount::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_presentation(gens: &[&str], p: u64) -> Presentation {
        let a = Alphabet::new(gens.iter().map(|s| s.to_string()).collect(), p).unwrap();
        let n = a.len();
        Presentation::new(a, vec![], DegreeMap::unit(n)).unwrap()
    }

    /// d generators over F_2 with r distinct relators of weighted degree 2:
    /// squares of odd powers of the first generator.
    fn degree_two_presentation(d: usize, r: usize) -> Presentation {
        let names: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
        let a = Alphabet::new(names, 2).unwrap();
        let rels: Vec<Word> = (0..r).map(|j| Word::power(0, (4 * j + 2) as i64)).collect();
        Presentation::new(a, rels, DegreeMap::unit(d)).unwrap()
    }

    #[test]
    fn free_two_generator_value() {
        let pres = free_presentation(&["x", "y"], 2);
        let v = ggs_value(&pres, pres.default_weights(), &rational(2, 3), 24).unwrap();
        assert_eq!(v, rational(-1, 3));
    }

    #[test]
    fn one_generator_never_certifies() {
        let pres = free_presentation(&["x"], 2);
        for (a, b) in [(1, 2), (2, 3), (9, 10), (1, 100)] {
            let v = ggs_value(&pres, pres.default_weights(), &rational(a, b), 24).unwrap();
            assert!(v.is_positive(), "1 - t0 must stay positive");
        }
        match ggs_search(&pres, 2, 16, 24).unwrap() {
            SearchOutcome::NotFound(rep) => {
                assert!(rep.min_value.is_none(), "every map should be pruned");
                assert_eq!(rep.maps_pruned, rep.maps_scanned);
            }
            SearchOutcome::Found(_) => panic!("single free generator cannot certify"),
        }
    }

    #[test]
    fn four_generators_three_quadratic_relators() {
        let pres = degree_two_presentation(4, 3);
        let v = ggs_value(&pres, pres.default_weights(), &rational(1, 2), 24).unwrap();
        assert_eq!(v, rational(-1, 4));
        // Any grid containing 1/2 reaches the same certificate.
        match ggs_search(&pres, 1, 2, 24).unwrap() {
            SearchOutcome::Found(cert) => {
                assert_eq!(cert.t0, rational(1, 2));
                assert_eq!(cert.value, rational(-1, 4));
                assert_eq!(cert.delta, rational(1, 4));
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn perfect_square_presentation_reports_not_found() {
        // 2 generators, one degree-2 relator: 1 - 2t + t^2 = (1-t)^2 >= 0.
        let pres = degree_two_presentation(2, 1);
        match ggs_search(&pres, 1, 64, 24).unwrap() {
            SearchOutcome::NotFound(rep) => {
                let (min, _, t0) = rep.min_value.expect("grid evaluated");
                assert_eq!(min, rational(1, 4096), "minimum at t = 63/64 is (1/64)^2");
                assert_eq!(t0, rational(63, 64));
                assert!(!min.is_negative());
            }
            SearchOutcome::Found(c) => panic!("impossible certificate {c:?}"),
        }
    }

    #[test]
    fn free_group_search_finds_first_grid_point() {
        let pres = free_presentation(&["x", "y"], 2);
        match ggs_search(&pres, 1, 4, 24).unwrap() {
            SearchOutcome::Found(cert) => {
                // First t0 with 1 - 2t < 0 on {1/4, 2/4, 3/4} is 3/4.
                assert_eq!(cert.t0, rational(3, 4));
                assert_eq!(cert.value, rational(-1, 2));
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_threshold_matches_discriminant() {
        // With r degree-2 relators on d generators the test function is
        // 1 - d t + r t^2; a certificate exists iff d^2 > 4r.
        for d in 1..=6usize {
            for r in 1..=9usize {
                let pres = degree_two_presentation(d, r);
                let found = matches!(ggs_search(&pres, 1, 64, 24).unwrap(), SearchOutcome::Found(_));
                assert_eq!(found, d * d > 4 * r, "threshold mismatch at d={d} r={r}");
            }
        }
    }

    #[test]
    fn certificates_reverify() {
        for (d, r) in [(3usize, 1usize), (4, 3), (5, 4), (6, 8)] {
            let pres = degree_two_presentation(d, r);
            if let SearchOutcome::Found(cert) = ggs_search(&pres, 2, 32, 24).unwrap() {
                let v = ggs_value(&pres, &cert.weights, &cert.t0, 24).unwrap();
                assert_eq!(v, cert.value);
                assert!(v.is_negative());
                assert_eq!(cert.delta, -v);
            } else {
                panic!("expected certificate at d={d} r={r}");
            }
        }
    }

    #[test]
    fn adding_relators_never_decreases_value() {
        for r in 1..8usize {
            let smaller = degree_two_presentation(4, r);
            let larger = degree_two_presentation(4, r + 1);
            for (a, b) in [(1, 4), (1, 2), (3, 4)] {
                let t0 = rational(a, b);
                let v1 = ggs_value(&smaller, smaller.default_weights(), &t0, 24).unwrap();
                let v2 = ggs_value(&larger, larger.default_weights(), &t0, 24).unwrap();
                assert!(v2 >= v1, "value dropped when a relator was added");
            }
        }
    }

    #[test]
    fn generator_bound_examples() {
        let cert = GsCertificate::new(DegreeMap::unit(2), rational(2, 3), rational(-1, 3));
        assert_eq!(gs_generator_bound(&cert, 3), BigCount::from(2u32));
        assert_eq!(gs_generator_bound(&cert, 1), BigCount::from(1u32));
    }

    #[test]
    fn t0_outside_open_interval_is_rejected() {
        let pres = free_presentation(&["x", "y"], 2);
        for (a, b) in [(0, 1), (1, 1), (3, 2), (-1, 2)] {
            let r = BigRational::new(BigInt::from(a), BigInt::from(b));
            assert!(ggs_value(&pres, pres.default_weights(), &r, 24).is_err(), "t0 = {a}/{b}");
        }
    }

    #[test]
    fn search_propagates_relator_degree_caps() {
        // Two generators (so the unit map is not pruned) and a relator
        // x^32 over F_2, whose degree 32 exceeds the cap 24.
        let a = Alphabet::new(vec!["x".into(), "y".into()], 2).unwrap();
        let pres = Presentation::new(a, vec![Word::power(0, 32)], DegreeMap::unit(2)).unwrap();
        match ggs_search(&pres, 1, 8, 24) {
            Err(Error::DegreeCap { cap }) => assert_eq!(cap, 24),
            other => panic!("expected degree cap, got {other:?}"),
        }
    }

    #[test]
    fn presentation_rejects_trivial_relators() {
        let a = Alphabet::new(vec!["x".into()], 2).unwrap();
        let trivial = Word::from_factors(vec![(0, 1), (0, -1)]);
        assert!(Presentation::new(a, vec![trivial], DegreeMap::unit(1)).is_err());
    }

    #[test]
    fn hilbert_poly_eval_is_exact() {
        let mut h = HilbertPoly::zero();
        h.add_term(1);
        h.add_term(1);
        h.add_term(3);
        // 2t + t^3 at 2/3: 4/3 + 8/27 = 44/27.
        assert_eq!(h.eval(&rational(2, 3)), rational(44, 27));
    }
}
