//! Theta characteristics modeled as quadratic refinements of the standard
//! symplectic form on `F_2^{2h}`.
//!
//! Vectors are bitmasks: bit `2i` is the coordinate along `a_{i+1}` and bit
//! `2i + 1` the coordinate along `b_{i+1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::Rational;

/// Largest genus for which we enumerate all `2^{2h}` refinements.
pub const MAX_EXHAUSTIVE_GENUS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of an integer.
    pub fn of(n: i64) -> Self {
        Parity::from_bit(n.rem_euclid(2) as u8)
    }

    pub fn sign(self) -> &'static str {
        match self {
            Parity::Even => "+",
            Parity::Odd => "-",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaClass {
    pub h: u32,
    pub parity: Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticF2Space {
    h: u32,
}

impl SymplecticF2Space {
    pub fn new(h: u32) -> Result<Self> {
        if h == 0 || h > 31 {
            return Err(Error::Domain(format!("genus must be in 1..=31, got {h}")));
        }
        Ok(SymplecticF2Space { h })
    }

    pub fn genus(&self) -> u32 {
        self.h
    }

    pub fn dimension(&self) -> u32 {
        2 * self.h
    }

    /// Number of vectors, `2^{2h}`.
    pub fn size(&self) -> u64 {
        1u64 << self.dimension()
    }

    fn a_mask(&self) -> u64 {
        let mut m = 0;
        for i in 0..self.h {
            m |= 1 << (2 * i);
        }
        m
    }

    /// `<x, y> = Σ x_{a_i} y_{b_i} + x_{b_i} y_{a_i}` mod 2.
    pub fn pairing(&self, x: u64, y: u64) -> u8 {
        let a = self.a_mask();
        let ab = x & (y >> 1) & a;
        let ba = (x >> 1) & y & a;
        ((ab.count_ones() + ba.count_ones()) & 1) as u8
    }

    /// `Σ x_{a_i} x_{b_i}` mod 2, the diagonal part of the form.
    fn self_cross(&self, x: u64) -> u8 {
        let a = self.a_mask();
        ((x & a & (x >> 1)).count_ones() & 1) as u8
    }

    fn mask_of(&self, bits: &[bool]) -> Result<u64> {
        if bits.len() != self.dimension() as usize {
            return Err(Error::Domain(format!("vector has length {}, expected {}", bits.len(), self.dimension())));
        }
        Ok(bits.iter().enumerate().fold(0, |m, (i, &b)| m | ((b as u64) << i)))
    }
}

/// A function `q: F_2^{2h} → F_2` with `q(x + y) = q(x) + q(y) + <x, y>`,
/// stored by its values on the standard basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticRefinement {
    space: SymplecticF2Space,
    basis_values: u64,
}

impl QuadraticRefinement {
    /// `basis_values` lists `q(a_1), q(b_1), ..., q(a_h), q(b_h)`.
    pub fn new(h: u32, basis_values: &[bool]) -> Result<Self> {
        let space = SymplecticF2Space::new(h)?;
        let basis_values = space.mask_of(basis_values)?;
        Ok(QuadraticRefinement { space, basis_values })
    }

    pub fn from_mask(space: SymplecticF2Space, basis_values: u64) -> Self {
        QuadraticRefinement { space, basis_values: basis_values & (space.size() - 1) }
    }

    pub fn space(&self) -> SymplecticF2Space {
        self.space
    }

    pub fn eval_mask(&self, x: u64) -> u8 {
        // q(Σ x_i e_i) = Σ x_i q(e_i) + Σ_{i<j} x_i x_j <e_i, e_j>
        let linear = ((x & self.basis_values).count_ones() & 1) as u8;
        linear ^ self.space.self_cross(x)
    }

    pub fn eval_q(&self, x: &[bool]) -> Result<u8> {
        Ok(self.eval_mask(self.space.mask_of(x)?))
    }

    /// Number of vectors on which `q` vanishes.
    pub fn zero_count(&self) -> u64 {
        (0..self.space.size()).filter(|&x| self.eval_mask(x) == 0).count() as u64
    }

    /// Arf invariant by the majority rule: 0 iff `q` vanishes on more than
    /// half of all vectors.
    pub fn arf(&self) -> u8 {
        (2 * self.zero_count() <= self.space.size()) as u8
    }

    /// Arf invariant as `Σ q(a_i) q(b_i)`.
    pub fn arf_product_form(&self) -> u8 {
        self.space.self_cross(self.basis_values)
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.arf())
    }

    /// The refinement of the twisted theta characteristic `N ⊗ L`, i.e.
    /// `x ↦ q(x) + <ℓ, x>`.
    pub fn twist(&self, l: u64) -> QuadraticRefinement {
        let mut values = 0u64;
        for i in 0..self.space.dimension() {
            let e = 1u64 << i;
            let v = self.eval_mask(e) ^ self.space.pairing(l, e);
            values |= (v as u64) << i;
        }
        QuadraticRefinement { space: self.space, basis_values: values }
    }
}

fn exhaustive_space(h: u32) -> Result<SymplecticF2Space> {
    if h > MAX_EXHAUSTIVE_GENUS {
        return Err(Error::Capacity(format!(
            "exhaustive enumeration over 2^{} refinements refused (h ≤ {MAX_EXHAUSTIVE_GENUS})",
            2 * h
        )));
    }
    SymplecticF2Space::new(h)
}

/// All `2^{2h}` refinements of the genus-`h` form.
pub fn all_refinements(h: u32) -> Result<impl Iterator<Item = QuadraticRefinement>> {
    let space = exhaustive_space(h)?;
    Ok((0..space.size()).map(move |m| QuadraticRefinement::from_mask(space, m)))
}

/// Counts even and odd refinements by exhaustive enumeration.
pub fn count_parities(h: u32) -> Result<(u64, u64)> {
    let mut even = 0;
    let mut odd = 0;
    for q in all_refinements(h)? {
        if q.arf() == 0 {
            even += 1;
        } else {
            odd += 1;
        }
    }
    Ok((even, odd))
}

/// `(2^{h-1}(2^h + 1), 2^{h-1}(2^h - 1))`.
pub fn closed_form_parity_counts(h: u32) -> (u64, u64) {
    let half = 1u64 << (h - 1);
    let full = 1u64 << h;
    (half * (full + 1), half * (full - 1))
}

pub fn representative(h: u32, parity: Parity) -> Result<QuadraticRefinement> {
    all_refinements(h)?
        .find(|q| q.parity() == parity)
        .ok_or_else(|| Error::Internal(format!("no refinement of genus {h} with parity {parity}")))
}

/// Signed, automorphism-weighted count of connected étale double covers
/// `f: C_L → D` for the theta characteristic represented by `q`.
///
/// Each nonzero `L` gives a connected cover with `h⁰(f*N) = h⁰(N) +
/// h⁰(N L⁻¹)`; the twisted characteristic has parity `arf(q) + q(L)`.
/// Every cover has automorphism group `Z/2` and contributes `±1/2`.
pub fn signed_double_cover_sum_for(q: &QuadraticRefinement) -> Rational {
    let parity_bit = q.arf() as u64;
    let mut signed: i64 = 0;
    for l in 1..q.space().size() {
        let twisted = parity_bit ^ q.eval_mask(l) as u64;
        let h0_pullback = parity_bit + twisted;
        signed += if h0_pullback.is_multiple_of(2) { 1 } else { -1 };
    }
    Rational::ratio(signed, 2)
}

pub fn signed_double_cover_sum(h: u32, parity: Parity) -> Result<Rational> {
    let q = representative(h, parity)?;
    Ok(signed_double_cover_sum_for(&q))
}

/// `½[(-1)^{h⁰(N)} 2^h - 1]`.
pub fn closed_form_double_cover(h: u32, parity: Parity) -> Rational {
    let power = Rational::from(num_bigint::BigInt::from(2u8).pow(h));
    let signed_power = Rational::sign_power(parity.bit() as u64) * power;
    (signed_power - Rational::one()) * Rational::ratio(1, 2)
}
