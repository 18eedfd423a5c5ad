//! Biquaternions `H_C = C ⊗ H` realized as 2×2 complex matrices.
//!
//! The embedding is fixed once: `e0 ↦ 1` and `e_k ↦ -i σ_k` with the Pauli
//! matrices `σ_k`. In matrix entries this reads
//!
//! ```text
//! z11 = z0 - i z3     z12 = -z2 - i z1
//! z21 = z2 - i z1     z22 = z0 + i z3
//! ```
//!
//! so `N(Z) = det Z = z0² + z1² + z2² + z3²`. Everything downstream that talks
//! about `x⁰..x³` goes through [`EBasisCoords`] and this dictionary.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

type Q = GaussianRational;

/// Coefficients of `e0..e3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EBasisCoords(pub [Q; 4]);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Biquaternion {
    /// Row-major matrix entries `[[z11, z12], [z21, z22]]`.
    pub m: [[Q; 2]; 2],
}

impl Biquaternion {
    pub fn new(z11: Q, z12: Q, z21: Q, z22: Q) -> Self {
        Self {
            m: [[z11, z12], [z21, z22]],
        }
    }

    pub fn zero() -> Self {
        Self::new(Q::zero(), Q::zero(), Q::zero(), Q::zero())
    }

    pub fn one() -> Self {
        Self::scalar(Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        Self::new(c.clone(), Q::zero(), Q::zero(), c)
    }

    /// The unit `e_k`, `k = 0..=3`.
    pub fn e(k: usize) -> Self {
        let mut c = [Q::zero(), Q::zero(), Q::zero(), Q::zero()];
        c[k] = Q::one();
        Self::from_coords(&EBasisCoords(c))
    }

    /// Elementary matrix with a single `1` at `(r, c)` (0-based).
    pub fn unit(r: usize, c: usize) -> Self {
        let mut z = Self::zero();
        z.m[r][c] = Q::one();
        z
    }

    pub fn from_coords(c: &EBasisCoords) -> Self {
        let [z0, z1, z2, z3] = &c.0;
        Self::new(
            z0 - &z3.mul_i(),
            -(z2 + &z1.mul_i()),
            z2 - &z1.mul_i(),
            z0 + &z3.mul_i(),
        )
    }

    pub fn to_coords(&self) -> EBasisCoords {
        let half = Q::from_ratio(1, 2);
        let [[z11, z12], [z21, z22]] = &self.m;
        EBasisCoords([
            &(z11 + z22) * &half,
            &(z12 + z21).mul_i() * &half,
            &(z21 - z12) * &half,
            &(z11 - z22).mul_i() * &half,
        ])
    }

    pub fn entry(&self, r: usize, c: usize) -> &Q {
        &self.m[r][c]
    }

    /// `Z⁺ = z0 e0 - z1 e1 - z2 e2 - z3 e3`, the adjugate matrix.
    pub fn conj_plus(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self::new(d.clone(), -b, -c, a.clone())
    }

    /// Quadratic norm `N(Z) = Z⁺Z = det Z`.
    pub fn norm(&self) -> Q {
        let [[a, b], [c, d]] = &self.m;
        &(a * d) - &(b * c)
    }

    pub fn is_invertible(&self) -> bool {
        !self.norm().is_zero()
    }

    pub fn invert(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::NonInvertible);
        }
        let inv = n.checked_inv()?;
        Ok(self.conj_plus().scale(&inv))
    }

    /// Complex conjugation relative to `H`: fixes real quaternions.
    pub fn bar(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self::new(d.conj(), -c.conj(), -b.conj(), a.conj())
    }

    /// Matrix adjoint `Z* = (bar Z)⁺`.
    pub fn star(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self::new(a.clone(), c.clone(), b.clone(), d.clone())
    }

    pub fn trace(&self) -> Q {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn scale(&self, s: &Q) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self::new(a * s, b * s, c * s, d * s)
    }

    /// True iff all four e-basis coordinates are real.
    pub fn is_real_quaternion(&self) -> bool {
        self.to_coords().0.iter().all(Q::is_real)
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(Q::is_zero)
    }
}

impl fmt::Debug for Biquaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl<'a> Mul<&'a Biquaternion> for &'a Biquaternion {
    type Output = Biquaternion;
    fn mul(self, o: &Biquaternion) -> Biquaternion {
        let e = |r: usize, c: usize| &(&self.m[r][0] * &o.m[0][c]) + &(&self.m[r][1] * &o.m[1][c]);
        Biquaternion::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl<'a> Add<&'a Biquaternion> for &'a Biquaternion {
    type Output = Biquaternion;
    fn add(self, o: &Biquaternion) -> Biquaternion {
        let e = |r: usize, c: usize| &self.m[r][c] + &o.m[r][c];
        Biquaternion::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl<'a> Sub<&'a Biquaternion> for &'a Biquaternion {
    type Output = Biquaternion;
    fn sub(self, o: &Biquaternion) -> Biquaternion {
        let e = |r: usize, c: usize| &self.m[r][c] - &o.m[r][c];
        Biquaternion::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Neg for &Biquaternion {
    type Output = Biquaternion;
    fn neg(self) -> Biquaternion {
        let [[a, b], [c, d]] = &self.m;
        Biquaternion::new(-a, -b, -c, -d)
    }
}
