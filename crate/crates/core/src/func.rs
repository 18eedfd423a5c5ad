//! The Laurent class `P(z11, z12, z21, z22) · N(Z)^{-k}` and tensor-valued
//! functions built from it.

use std::ops::Add;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{Exps, Poly};
use crate::quat::{Biquaternion, EBasisCoords};
use crate::scalar::GaussianRational;
use crate::tensor::{is_symmetric_array, Side, SpinorTensor, TensorRank};

type Q = GaussianRational;

/// `N^j`, memoized.
pub fn norm_pow(j: u32) -> Poly {
    static CACHE: OnceLock<RwLock<Vec<Poly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(vec![Poly::one()]));
    if let Some(p) = cache.read().unwrap().get(j as usize) {
        return p.clone();
    }
    let mut w = cache.write().unwrap();
    while w.len() <= j as usize {
        let next = w.last().unwrap().mul(&Poly::norm());
        w.push(next);
    }
    w[j as usize].clone()
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentFn {
    num: Poly,
    k: u32,
}

impl LaurentFn {
    /// `num · N^{-k}`, reduced so that `N ∤ num` whenever `k > 0`.
    pub fn new(num: Poly, k: u32) -> Self {
        let mut f = Self { num, k };
        f.canonicalize();
        f
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.div_norm() {
                Some(q) => {
                    self.num = q;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn poly(p: Poly) -> Self {
        Self { num: p, k: 0 }
    }

    pub fn constant(c: Q) -> Self {
        Self::poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn z(r: usize, c: usize) -> Self {
        Self::poly(Poly::z(r, c))
    }

    /// `N(Z)^e` for any integer `e`.
    pub fn norm_power(e: i32) -> Self {
        if e >= 0 {
            Self::poly(norm_pow(e as u32))
        } else {
            Self {
                num: Poly::one(),
                k: (-e) as u32,
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denom_power(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.k == 0
    }

    /// Numerator over the common denominator `N^k`, `k ≥ self.k`.
    fn lifted(&self, k: u32) -> Poly {
        self.num.mul(&norm_pow(k - self.k))
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let k = self.k.max(o.k);
        Self::new(self.lifted(k).add(&o.lifted(k)), k)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            k: self.k,
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.num.scale(s), self.k)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.k + o.k)
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        Self::new(self.num.mul(p), self.k)
    }

    /// `∂/∂z_{r+1, c+1}` by the quotient rule.
    pub fn partial(&self, r: usize, c: usize) -> Self {
        let v = crate::poly::var(r, c);
        if self.k == 0 {
            return Self::poly(self.num.derivative(v));
        }
        let dn = Poly::norm().derivative(v);
        let top = Poly::norm()
            .mul(&self.num.derivative(v))
            .sub(&self.num.mul(&dn).scale(&Q::from_int(self.k as i64)));
        // N ∤ num implies N ∤ top, so the result is already reduced
        Self {
            num: top,
            k: self.k + 1,
        }
        .canonical_checked()
    }

    fn canonical_checked(mut self) -> Self {
        if self.num.is_zero() {
            self.k = 0;
        }
        self
    }

    /// Sorted homogeneity degrees present (`exponent sum − 2k`).
    pub fn degrees(&self) -> Vec<i64> {
        self.num
            .degrees()
            .into_iter()
            .map(|d| d as i64 - 2 * self.k as i64)
            .collect()
    }

    /// `Some(d)` when the function is homogeneous of degree `d` and nonzero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn homogeneous_split(&self) -> Vec<(i64, LaurentFn)> {
        self.num
            .degrees()
            .into_iter()
            .map(|d| {
                (
                    d as i64 - 2 * self.k as i64,
                    Self::new(self.num.homogeneous_part(d), self.k),
                )
            })
            .collect()
    }

    /// Multiplies each homogeneous piece of degree `d` by `f(d)`.
    pub fn map_by_degree(&self, f: impl Fn(i64) -> Result<Q>) -> Result<Self> {
        let mut factors = std::collections::BTreeMap::new();
        for d in self.num.degrees() {
            factors.insert(d, f(d as i64 - 2 * self.k as i64)?);
        }
        Ok(Self::new(
            self.num.map_by_degree(|d| factors[&d].clone()),
            self.k,
        ))
    }

    /// Euler operator `Σ z_ij ∂_ij`, equal to `deg` in the x-coordinates.
    pub fn deg(&self) -> Self {
        let k = self.k as i64;
        Self::new(
            self.num.map_by_degree(|d| Q::from_int(d as i64 - 2 * k)),
            self.k,
        )
    }

    pub fn evaluate(&self, z: &Biquaternion) -> Result<Q> {
        let p = self.num.evaluate(z);
        if self.k == 0 {
            return Ok(p);
        }
        let n = z.norm();
        if n.is_zero() {
            return Err(Error::PoleAtNullCone);
        }
        p.checked_div(&n.pow(self.k))
    }

    /// Restriction to the real unit sphere as a polynomial in `x⁰..x³`,
    /// in the normal form where `x⁰` appears to power at most one.
    pub fn to_real_sphere_poly(&self) -> Poly {
        let forms = real_coordinate_forms();
        reduce_on_sphere(&self.num.substitute(&forms))
    }

    /// `σ` on scalar components: `conj(f(Z*))`.
    pub fn sigma(&self) -> Self {
        let p = self
            .num
            .permute_vars([0, 2, 1, 3], [1; 4])
            .map_coeffs(Q::conj);
        Self { num: p, k: self.k }
    }

    /// A function agreeing with `conj(f)` at every real quaternion.
    pub fn conj_on_real(&self) -> Self {
        // on H: conj z11 = z22, conj z12 = -z21, conj z21 = -z12
        let p = self
            .num
            .permute_vars([3, 2, 1, 0], [1, -1, -1, 1])
            .map_coeffs(Q::conj);
        Self { num: p, k: self.k }
    }

    /// `f(Z⁻¹)`, using `Z⁻¹ = Z⁺/N` and `N(Z⁻¹) = N⁻¹`.
    pub fn compose_inverse(&self) -> Self {
        let adj = self.num.permute_vars([3, 1, 2, 0], [1, -1, -1, 1]);
        self.num
            .degrees()
            .into_iter()
            .map(|d| {
                let piece = adj.homogeneous_part(d);
                // P_d(Z⁺) N^{-d} · N^{k}
                let e = self.k as i64 - d as i64;
                if e >= 0 {
                    Self::new(piece.mul(&norm_pow(e as u32)), 0)
                } else {
                    Self::new(piece, (-e) as u32)
                }
            })
            .fold(Self::zero(), |acc, t| acc.add(&t))
    }

    /// `f(Z ↦ each entry replaced by a polynomial)` where `N` pulls back to
    /// `norm_factor · N`; used for affine-linear substitutions.
    pub fn substitute(&self, forms: &[Poly; 4], norm_factor: &Q) -> Result<Self> {
        let p = self.num.substitute(forms);
        if self.k == 0 {
            return Ok(Self::poly(p));
        }
        let inv = norm_factor
            .checked_inv()
            .map_err(|_| Error::NonInvertible)?;
        Ok(Self::new(p.scale(&inv.pow(self.k)), self.k))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .num
            .terms()
            .map(|(e, c)| json!([e.to_vec(), c.to_string()]))
            .collect();
        json!({ "denom_power": self.k, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("malformed Laurent function".into());
        let k = v["denom_power"].as_u64().ok_or_else(bad)? as u32;
        let mut p = Poly::zero();
        for t in v["terms"].as_array().ok_or_else(bad)? {
            let e = t[0].as_array().ok_or_else(bad)?;
            if e.len() != 4 {
                return Err(bad());
            }
            let mut ex: Exps = [0; 4];
            for (slot, x) in ex.iter_mut().zip(e) {
                *slot = x.as_u64().ok_or_else(bad)? as u32;
            }
            let c: Q = t[1].as_str().ok_or_else(bad)?.parse()?;
            p.add_term(ex, &c);
        }
        Ok(Self::new(p, k))
    }
}

impl std::fmt::Debug for LaurentFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.k == 0 {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "[{:?}] * N^-{}", self.num, self.k)
        }
    }
}

impl Zero for LaurentFn {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for LaurentFn {
    type Output = LaurentFn;
    fn add(self, o: LaurentFn) -> LaurentFn {
        LaurentFn::add(&self, &o)
    }
}

impl Add<&LaurentFn> for LaurentFn {
    type Output = LaurentFn;
    fn add(self, o: &LaurentFn) -> LaurentFn {
        LaurentFn::add(&self, o)
    }
}

/// `z_v` as linear forms in `x⁰..x³`, read off the embedding.
pub fn real_coordinate_forms() -> [Poly; 4] {
    let mut forms: [Poly; 4] = Default::default();
    for k in 0..4 {
        let e = Biquaternion::e(k);
        let mut ex = [0; 4];
        ex[k] = 1;
        for r in 0..2 {
            for c in 0..2 {
                forms[crate::poly::var(r, c)].add_term(ex, e.entry(r, c));
            }
        }
    }
    forms
}

/// Reduces `x⁰² ↦ 1 − x¹² − x²² − x³²` until `x⁰` has power ≤ 1.
pub fn reduce_on_sphere(p: &Poly) -> Poly {
    let s = Poly::from_terms([
        ([0, 2, 0, 0], Q::one()),
        ([0, 0, 2, 0], Q::one()),
        ([0, 0, 0, 2], Q::one()),
    ]);
    let one_minus_s = Poly::one().sub(&s);
    let mut out = Poly::zero();
    for (e, c) in p.terms() {
        let (q, r) = (e[0] / 2, e[0] % 2);
        let rest = Poly::monomial([r, e[1], e[2], e[3]], c.clone());
        out.add_assign(&rest.mul(&one_minus_s.pow(q)));
    }
    out
}

/// Evaluates an x-coordinate polynomial at `EBasisCoords`.
pub fn evaluate_real(p: &Poly, x: &EBasisCoords) -> Q {
    let z = Biquaternion::new(
        x.0[0].clone(),
        x.0[1].clone(),
        x.0[2].clone(),
        x.0[3].clone(),
    );
    p.evaluate(&z)
}

/// An `S^{⊗n}`- or `S′^{⊗n}`-valued function of the Laurent class.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TensorFn {
    pub side: Side,
    pub rank: TensorRank,
    pub comps: Vec<LaurentFn>,
}

/// A homogeneous summand of a tensor function.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousPiece {
    pub degree: i64,
    pub f: TensorFn,
}

impl TensorFn {
    pub fn new(side: Side, rank: TensorRank, comps: Vec<LaurentFn>) -> Result<Self> {
        if comps.len() != rank.dim() {
            return Err(Error::RankMismatch {
                left: rank.dim(),
                right: comps.len(),
            });
        }
        Ok(Self { side, rank, comps })
    }

    pub fn zero(side: Side, rank: TensorRank) -> Self {
        Self {
            side,
            rank,
            comps: vec![LaurentFn::zero(); rank.dim()],
        }
    }

    pub fn constant(t: &SpinorTensor) -> Self {
        Self {
            side: t.side,
            rank: t.rank,
            comps: t.data.iter().cloned().map(LaurentFn::constant).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rank.get()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(LaurentFn::is_zero)
    }

    pub fn map(&self, f: impl Fn(&LaurentFn) -> LaurentFn) -> Self {
        Self {
            comps: self.comps.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn try_map(&self, f: impl Fn(&LaurentFn) -> Result<LaurentFn>) -> Result<Self> {
        Ok(Self {
            comps: self.comps.iter().map(f).collect::<Result<_>>()?,
            ..self.clone()
        })
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.rank != o.rank {
            return Err(Error::RankMismatch {
                left: self.n(),
                right: o.n(),
            });
        }
        if self.side != o.side {
            return Err(Error::SideMismatch {
                expected: self.side.name(),
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(Self {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(Self {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Q) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn mul_scalar_fn(&self, g: &LaurentFn) -> Self {
        self.map(|c| c.mul(g))
    }

    pub fn evaluate(&self, z: &Biquaternion) -> Result<SpinorTensor> {
        let data = self
            .comps
            .iter()
            .map(|c| c.evaluate(z))
            .collect::<Result<_>>()?;
        SpinorTensor::from_data(self.side, self.rank, data)
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.comps.iter().flat_map(LaurentFn::degrees).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn homogeneous_degree(&self) -> Option<i64> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn homogeneous_split(&self) -> Vec<HomogeneousPiece> {
        self.degrees()
            .into_iter()
            .map(|d| HomogeneousPiece {
                degree: d,
                f: self.map(|c| {
                    c.homogeneous_split()
                        .into_iter()
                        .find(|(e, _)| *e == d)
                        .map(|(_, p)| p)
                        .unwrap_or_default()
                }),
            })
            .collect()
    }

    pub fn map_by_degree(&self, f: impl Fn(i64) -> Result<Q> + Copy) -> Result<Self> {
        self.try_map(|c| c.map_by_degree(f))
    }

    /// True when the component array is invariant under slot permutations.
    pub fn is_symmetric(&self) -> bool {
        is_symmetric_array(&self.comps, self.n())
    }

    /// `σ(f)(Z) = f⁺(Z*)`: conjugate, transpose to the other side.
    pub fn conj_dagger(&self) -> Self {
        Self {
            side: self.side.flip(),
            rank: self.rank,
            comps: self.comps.iter().map(LaurentFn::sigma).collect(),
        }
    }

    /// Left (columns) or right (rows) multiplication by a matrix of scalar
    /// functions at one slot.
    pub fn slot_mul(&self, m: &[[LaurentFn; 2]; 2], slot: usize) -> Result<Self> {
        crate::tensor::check_slot(slot, self.n())?;
        Ok(Self {
            comps: crate::tensor::slot_map(&self.comps, slot, self.side, |r, c, x| m[r][c].mul(x)),
            ..self.clone()
        })
    }

    /// Multiplies by `M` in every slot.
    pub fn all_slots_mul(&self, m: &[[LaurentFn; 2]; 2]) -> Self {
        (1..=self.n()).fold(self.clone(), |t, k| {
            t.slot_mul(m, k).expect("slot in range")
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "side": self.side.name(),
            "rank": self.n(),
            "components": self.comps.iter().map(LaurentFn::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Entry matrix of `Z` as scalar functions.
pub fn z_matrix() -> [[LaurentFn; 2]; 2] {
    [
        [LaurentFn::z(0, 0), LaurentFn::z(0, 1)],
        [LaurentFn::z(1, 0), LaurentFn::z(1, 1)],
    ]
}

/// Entry matrix of a constant biquaternion.
pub fn const_matrix(a: &Biquaternion) -> [[LaurentFn; 2]; 2] {
    let e = |r: usize, c: usize| LaurentFn::constant(a.entry(r, c).clone());
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Polynomial matrix product of two function matrices.
pub fn matrix_mul(a: &[[LaurentFn; 2]; 2], b: &[[LaurentFn; 2]; 2]) -> [[LaurentFn; 2]; 2] {
    let e = |r: usize, c: usize| a[r][0].mul(&b[0][c]).add(&a[r][1].mul(&b[1][c]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn small_laurent() -> impl Strategy<Value = LaurentFn> {
        (
            prop::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -3i64..4), 0..5),
            0u32..3,
        )
            .prop_map(|(ts, k)| {
                LaurentFn::new(
                    Poly::from_terms(ts.into_iter().map(|((a, b, c, d), x)| ([a, b, c, d], q(x)))),
                    k,
                )
            })
    }

    #[test]
    fn evaluation() {
        let r1 = TensorRank::new(1).unwrap();
        let c = SpinorTensor::from_data(Side::Column, r1, vec![q(3), Q::i()]).unwrap();
        let z = Biquaternion::from_coords(&EBasisCoords([q(1), q(2), q(0), q(-1)]));
        assert_eq!(TensorFn::constant(&c).evaluate(&z).unwrap(), c);
        let two = Biquaternion::scalar(q(2));
        assert_eq!(
            LaurentFn::norm_power(-1).evaluate(&two).unwrap(),
            Q::from_ratio(1, 4)
        );
        let null = Biquaternion::new(q(1), q(1), Q::i(), Q::i());
        assert_eq!(
            LaurentFn::norm_power(-1).evaluate(&null),
            Err(Error::PoleAtNullCone)
        );
    }

    #[test]
    fn canonical_form() {
        let f = LaurentFn::new(norm_pow(2).mul(&Poly::z(0, 0)), 3);
        assert_eq!(f.denom_power(), 1);
        assert_eq!(f.numerator(), &Poly::z(0, 0));
        let g = f
            .mul(&LaurentFn::norm_power(1))
            .mul(&LaurentFn::norm_power(-1));
        assert_eq!(g, f);
        assert_eq!(LaurentFn::new(Poly::zero(), 4), LaurentFn::zero());
        assert_eq!(LaurentFn::zero().denom_power(), 0);
    }

    #[test]
    fn splitting() {
        let f = LaurentFn::z(0, 0).add(&LaurentFn::z(0, 0).mul(&LaurentFn::z(1, 1)));
        let pieces = f.homogeneous_split();
        assert_eq!(pieces.iter().map(|p| p.0).collect::<Vec<_>>(), vec![1, 2]);
        let g = LaurentFn::z(0, 0).mul(&LaurentFn::norm_power(-1));
        assert_eq!(g.homogeneous_degree(), Some(-1));
    }

    #[test]
    fn sphere_restriction() {
        assert_eq!(LaurentFn::norm_power(1).to_real_sphere_poly(), Poly::one());
        for k in 0..3 {
            assert_eq!(
                LaurentFn::new(Poly::one(), k).to_real_sphere_poly(),
                Poly::one()
            );
        }
        // N + z11 = 1 + x0 - i x3 on the sphere
        let f = LaurentFn::norm_power(1).add(&LaurentFn::z(0, 0));
        let expected = Poly::from_terms([
            ([0, 0, 0, 0], q(1)),
            ([1, 0, 0, 0], q(1)),
            ([0, 0, 0, 1], -Q::i()),
        ]);
        assert_eq!(f.to_real_sphere_poly(), expected);
    }

    #[test]
    fn sigma_map() {
        let r1 = TensorRank::new(1).unwrap();
        let c = SpinorTensor::from_data(Side::Column, r1, vec![q(1), q(0)]).unwrap();
        let s = TensorFn::constant(&c).conj_dagger();
        assert_eq!(s.side, Side::Row);
        assert_eq!(s.comps[0], LaurentFn::one());
        let f = TensorFn::new(
            Side::Column,
            r1,
            vec![LaurentFn::z(0, 1).scale(&Q::i()), LaurentFn::norm_power(-2)],
        )
        .unwrap();
        assert_eq!(f.conj_dagger().conj_dagger(), f);
        // σ(i z12) = -i z21
        assert_eq!(f.conj_dagger().comps[0], LaurentFn::z(1, 0).scale(&-Q::i()));
    }

    #[test]
    fn json_round_trip() {
        let f = LaurentFn::new(Poly::z(0, 1).scale(&Q::from_parts((1, 2), (-3, 1))), 2);
        assert_eq!(LaurentFn::from_json(&f.to_json()).unwrap(), f);
        let s = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(s, r#"{"denom_power":2,"terms":[[[0,1,0,0],"1/2-3*i"]]}"#);
    }

    proptest! {
        #[test]
        fn euler_identity(f in small_laurent()) {
            for (d, p) in f.homogeneous_split() {
                let mut euler = LaurentFn::zero();
                for r in 0..2 {
                    for c in 0..2 {
                        euler = euler.add(&LaurentFn::z(r, c).mul(&p.partial(r, c)));
                    }
                }
                prop_assert_eq!(euler, p.scale(&q(d)));
            }
        }

        #[test]
        fn pieces_sum_back(f in small_laurent()) {
            let sum = f.homogeneous_split().into_iter().fold(LaurentFn::zero(), |a, (_, p)| a.add(&p));
            prop_assert_eq!(sum, f);
        }

        #[test]
        fn sphere_form_ignores_norm_factors(f in small_laurent()) {
            let g = f.mul(&LaurentFn::norm_power(1));
            prop_assert_eq!(g.to_real_sphere_poly(), f.to_real_sphere_poly());
        }

        #[test]
        fn canonicalization_is_confluent(f in small_laurent()) {
            let g = f.mul(&LaurentFn::norm_power(1)).mul(&LaurentFn::norm_power(-1));
            prop_assert_eq!(g, f.clone());
            prop_assert_eq!(LaurentFn::add(&f, &LaurentFn::norm_power(-1)).sub(&LaurentFn::norm_power(-1)), f);
        }

        #[test]
        fn compose_inverse_matches_pointwise(f in small_laurent(), a in 1i64..4, b in -2i64..3) {
            let z = Biquaternion::from_coords(&EBasisCoords([q(a), q(b), q(1), q(0)]));
            let lhs = f.compose_inverse().evaluate(&z).unwrap();
            let rhs = f.evaluate(&z.invert().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conj_on_real_points(f in small_laurent(), a in -2i64..3, b in -2i64..3) {
            let x = Biquaternion::from_coords(&EBasisCoords([q(1), q(a), q(b), q(2)]));
            prop_assert_eq!(f.conj_on_real().evaluate(&x).unwrap(), f.evaluate(&x).unwrap().conj());
        }
    }
}
