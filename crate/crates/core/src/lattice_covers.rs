//! Census of connected étale covers of an elliptic curve.
//!
//! A connected degree-`d` cover of a torus is an index-`d` subgroup of
//! `π_1 = Z²`. Every such subgroup is normal, so each cover has `d` deck
//! transformations and is weighted `1/d`. The normal bundle of the fiber
//! is a torsion character on `Z²`; it pulls back trivially exactly when
//! the character vanishes on the sublattice, and then `h⁰(f*N) = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{divisors, gcd, sigma, sigma_at_half, Rational};

/// Largest degree for which the census enumerates sublattices.
pub const MAX_CENSUS_DEGREE: u64 = 100_000;

/// The sublattice spanned by `(a, 0)` and `(b, c)`, with `0 <= b < a`.
/// This is the Hermite normal form, so distinct triples are distinct
/// sublattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HnfSublattice {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl HnfSublattice {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if a == 0 || c == 0 || b >= a {
            return Err(Error::Domain(format!("({a}, {b}, {c}) is not in Hermite normal form")));
        }
        Ok(HnfSublattice { a, b, c })
    }

    pub fn index(&self) -> u64 {
        self.a * self.c
    }

    pub fn generators(&self) -> [(u64, u64); 2] {
        [(self.a, 0), (self.b, self.c)]
    }

    /// Membership test, used by tests to compare lattices as sets.
    pub fn contains(&self, x: i64, y: i64) -> bool {
        let (a, b, c) = (self.a as i64, self.b as i64, self.c as i64);
        if y.rem_euclid(c) != 0 {
            return false;
        }
        let k = y / c;
        (x - k * b).rem_euclid(a) == 0
    }
}

/// A character `Z² → Z/m`, `(x, y) ↦ v·(x, y) mod m`, of exact order `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TorsionCharacter {
    pub m: u64,
    pub v: (u64, u64),
}

impl TorsionCharacter {
    pub fn new(m: u64, v: (u64, u64)) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("character order must be positive".into()));
        }
        let v = (v.0 % m, v.1 % m);
        if m == 1 {
            return Ok(TorsionCharacter { m, v: (0, 0) });
        }
        if gcd(gcd(v.0, v.1), m) != 1 {
            return Err(Error::Domain(format!("{v:?} does not have order {m} in (Z/{m})²")));
        }
        Ok(TorsionCharacter { m, v })
    }

    pub fn trivial() -> Self {
        TorsionCharacter { m: 1, v: (0, 0) }
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        ((self.v.0 as u128 * x as u128 + self.v.1 as u128 * y as u128) % self.m as u128) as u64
    }
}

/// Every character of exact order `m`.
pub fn order_m_characters(m: u64) -> Result<Vec<TorsionCharacter>> {
    if m == 0 {
        return Err(Error::Domain("character order must be positive".into()));
    }
    if m == 1 {
        return Ok(vec![TorsionCharacter::trivial()]);
    }
    let mut out = Vec::new();
    for x in 0..m {
        for y in 0..m {
            if gcd(gcd(x, y), m) == 1 {
                out.push(TorsionCharacter { m, v: (x, y) });
            }
        }
    }
    Ok(out)
}

fn check_degree(d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    if d > MAX_CENSUS_DEGREE {
        return Err(Error::Capacity(format!("census degree {d} exceeds {MAX_CENSUS_DEGREE}")));
    }
    Ok(())
}

/// All index-`d` sublattices of `Z²`.
pub fn enumerate_sublattices(d: u64) -> Result<Vec<HnfSublattice>> {
    check_degree(d)?;
    let mut out = Vec::with_capacity(sigma(d)? as usize);
    for a in divisors(d)? {
        let c = d / a;
        out.extend((0..a).map(|b| HnfSublattice { a, b, c }));
    }
    Ok(out)
}

pub fn pullback_is_trivial(l: &HnfSublattice, nu: &TorsionCharacter) -> bool {
    l.generators().iter().all(|&(x, y)| nu.eval(x, y) == 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverCensus {
    pub degree: u64,
    pub covers: u64,
    pub trivial_pullbacks: u64,
    pub signed_sum: Rational,
}

pub fn cover_census(d: u64, nu: &TorsionCharacter) -> Result<CoverCensus> {
    let lattices = enumerate_sublattices(d)?;
    let covers = lattices.len() as u64;
    let trivial = lattices.iter().filter(|l| pullback_is_trivial(l, nu)).count() as u64;
    // trivial pullback: h⁰ = 1, sign -1; otherwise h⁰ = 0, sign +1
    let signed = covers as i64 - 2 * trivial as i64;
    Ok(CoverCensus { degree: d, covers, trivial_pullbacks: trivial, signed_sum: Rational::ratio(signed, d as i64) })
}

/// Signed étale contribution `Σ_L (1/d)(-1)^{h⁰(f*N)}` in degree `d`.
pub fn signed_torus_cover_sum(d: u64, nu: &TorsionCharacter) -> Result<Rational> {
    Ok(cover_census(d, nu)?.signed_sum)
}

/// `-σ(d)/d`.
pub fn regular_fiber_coefficient(d: u64) -> Result<Rational> {
    Ok(Rational::ratio(-(sigma(d)? as i64), d as i64))
}

/// `(σ(d) - 2σ(d/2))/d`, with the second term absent for odd `d`.
pub fn f2_fiber_coefficient(d: u64) -> Result<Rational> {
    let num = sigma(d)? as i64 - 2 * sigma_at_half(d)? as i64;
    Ok(Rational::ratio(num, d as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn hnf(a: u64, b: u64, c: u64) -> HnfSublattice {
        HnfSublattice::new(a, b, c).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_sublattices(1).unwrap(), vec![hnf(1, 0, 1)]);
        assert_eq!(enumerate_sublattices(2).unwrap(), vec![hnf(1, 0, 2), hnf(2, 0, 1), hnf(2, 1, 1)]);
        assert_eq!(enumerate_sublattices(4).unwrap().len(), 7);
        assert!(enumerate_sublattices(0).is_err());
        assert!(matches!(enumerate_sublattices(MAX_CENSUS_DEGREE + 1), Err(Error::Capacity(_))));
    }

    /// Sublattices compared as point sets inside a box containing a
    /// fundamental domain, so the HNF uniqueness claim is checked rather
    /// than assumed.
    #[test]
    fn distinct_triples_are_distinct_lattices() {
        for d in 1..=12u64 {
            let r = d as i64;
            let sets: BTreeSet<Vec<(i64, i64)>> = enumerate_sublattices(d)
                .unwrap()
                .iter()
                .map(|l| {
                    let mut pts = Vec::new();
                    for x in 0..=r {
                        for y in 0..=r {
                            if l.contains(x, y) {
                                pts.push((x, y));
                            }
                        }
                    }
                    pts
                })
                .collect();
            assert_eq!(sets.len() as u64, sigma(d).unwrap(), "d={d}");
        }
    }

    #[test]
    fn count_matches_sigma() {
        for d in 1..=500 {
            assert_eq!(enumerate_sublattices(d).unwrap().len() as u64, sigma(d).unwrap());
        }
    }

    #[test]
    fn pullback_examples() {
        let any = hnf(3, 1, 2);
        assert!(pullback_is_trivial(&any, &TorsionCharacter::trivial()));
        let nu = TorsionCharacter::new(2, (1, 0)).unwrap();
        assert!(pullback_is_trivial(&hnf(2, 0, 1), &nu));
        assert!(!pullback_is_trivial(&hnf(1, 0, 2), &nu));
    }

    #[test]
    fn character_validation() {
        assert!(TorsionCharacter::new(2, (0, 0)).is_err());
        assert!(TorsionCharacter::new(4, (2, 2)).is_err());
        assert!(TorsionCharacter::new(4, (2, 1)).is_ok());
        assert_eq!(TorsionCharacter::new(1, (5, 3)).unwrap().v, (0, 0));
        assert_eq!(order_m_characters(2).unwrap().len(), 3);
        // number of order-p elements of (Z/p)² is p² - 1
        assert_eq!(order_m_characters(5).unwrap().len(), 24);
    }

    #[test]
    fn signed_sum_examples() {
        let triv = TorsionCharacter::trivial();
        assert_eq!(signed_torus_cover_sum(2, &triv).unwrap(), Rational::ratio(-3, 2));
        let two = TorsionCharacter::new(2, (1, 0)).unwrap();
        assert_eq!(signed_torus_cover_sum(2, &two).unwrap(), Rational::ratio(1, 2));
        let three = TorsionCharacter::new(3, (1, 0)).unwrap();
        assert_eq!(signed_torus_cover_sum(2, &three).unwrap(), Rational::ratio(3, 2));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(regular_fiber_coefficient(1).unwrap(), Rational::from(-1));
        assert_eq!(regular_fiber_coefficient(2).unwrap(), Rational::ratio(-3, 2));
        assert_eq!(regular_fiber_coefficient(6).unwrap(), Rational::from(-2));
        assert_eq!(f2_fiber_coefficient(1).unwrap(), Rational::one());
        assert_eq!(f2_fiber_coefficient(2).unwrap(), Rational::ratio(1, 2));
        assert_eq!(f2_fiber_coefficient(4).unwrap(), Rational::ratio(1, 4));
    }

    #[test]
    fn regular_census_matches_closed_form() {
        let triv = TorsionCharacter::trivial();
        for d in 1..=200 {
            let census = cover_census(d, &triv).unwrap();
            assert_eq!(census.trivial_pullbacks, census.covers);
            assert!(census.signed_sum.is_negative());
            assert_eq!(census.signed_sum, regular_fiber_coefficient(d).unwrap());
        }
    }

    #[test]
    fn order_two_census_matches_closed_form() {
        for nu in order_m_characters(2).unwrap() {
            for d in 1..=200 {
                assert_eq!(signed_torus_cover_sum(d, &nu).unwrap(), f2_fiber_coefficient(d).unwrap());
            }
        }
    }

    #[test]
    fn higher_order_degree_two_is_three_halves() {
        for m in 3..=12 {
            for nu in order_m_characters(m).unwrap() {
                assert_eq!(signed_torus_cover_sum(2, &nu).unwrap(), Rational::ratio(3, 2));
            }
        }
    }
}
