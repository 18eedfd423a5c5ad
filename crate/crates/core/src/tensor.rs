//! n-fold tensor powers of `S` (columns) and `S′` (rows).
//!
//! A rank-n tensor is a dense array of length `2ⁿ`. The multi-index
//! `(b₁, …, b_n)`, `b_k ∈ {0, 1}`, is packed little-endian: slot `k`
//! (1-based, as in the slot notation `1 ⊗ ⋯ ⊗ A ⊗ ⋯ ⊗ 1`) is bit `k - 1`.
//! Slot operators are then pure bit arithmetic, and the same helpers drive
//! both scalar tensors and tensor-valued functions.

use std::ops::Add;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quat::Biquaternion;
use crate::scalar::GaussianRational;

type Q = GaussianRational;

pub const MAX_RANK: usize = 4;

/// Which module the tensor lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `S ⊗ ⋯ ⊗ S`, acted on from the left.
    Column,
    /// `S′ ⊗ ⋯ ⊗ S′`, acted on from the right.
    Row,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Column => Side::Row,
            Side::Row => Side::Column,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Column => "column",
            Side::Row => "row",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorRank(usize);

impl TensorRank {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_max(n, MAX_RANK)
    }

    pub fn with_max(n: usize, max: usize) -> Result<Self> {
        if n == 0 || n > max {
            return Err(Error::RankOutOfRange(n));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn dim(self) -> usize {
        1 << self.0
    }
}

/// Bit of `index` belonging to 1-based `slot`.
#[inline]
pub fn slot_bit(index: usize, slot: usize) -> usize {
    (index >> (slot - 1)) & 1
}

#[inline]
pub fn with_slot_bit(index: usize, slot: usize, b: usize) -> usize {
    (index & !(1 << (slot - 1))) | (b << (slot - 1))
}

pub(crate) fn check_slot(slot: usize, rank: usize) -> Result<()> {
    if slot == 0 || slot > rank {
        return Err(Error::SlotOutOfRange { slot, rank });
    }
    Ok(())
}

/// Applies a 2×2 operator at one slot of a dense `2ⁿ` array.
///
/// `entry(r, c, x)` returns the operator entry at `(r, c)` applied to the
/// component `x`. Columns get `out[I] = Σ_c entry(I_k, c, t[I|k←c])`, rows get
/// `out[J] = Σ_r entry(r, J_k, t[J|k←r])`.
pub fn slot_map<T, F>(data: &[T], slot: usize, side: Side, entry: F) -> Vec<T>
where
    T: Clone + Zero + for<'a> Add<&'a T, Output = T>,
    F: Fn(usize, usize, &T) -> T,
{
    (0..data.len())
        .map(|idx| {
            let own = slot_bit(idx, slot);
            (0..2).fold(T::zero(), |acc, other| {
                let src = &data[with_slot_bit(idx, slot, other)];
                let term = match side {
                    Side::Column => entry(own, other, src),
                    Side::Row => entry(other, own, src),
                };
                acc + &term
            })
        })
        .collect()
}

/// Index permutation induced by a permutation of slots: slot `k` of the
/// output reads slot `perm[k]` of the input (both 0-based here).
pub fn permute_index(index: usize, perm: &[usize]) -> usize {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (k, &src)| acc | (((index >> src) & 1) << k))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// True when the array is invariant under every slot permutation.
pub fn is_symmetric_array<T: PartialEq>(data: &[T], rank: usize) -> bool {
    // adjacent transpositions generate the symmetric group
    (0..rank.saturating_sub(1)).all(|k| {
        let mut perm: Vec<usize> = (0..rank).collect();
        perm.swap(k, k + 1);
        (0..data.len()).all(|i| data[i] == data[permute_index(i, &perm)])
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinorTensor {
    pub side: Side,
    pub rank: TensorRank,
    pub data: Vec<Q>,
}

impl SpinorTensor {
    pub fn zero(side: Side, rank: TensorRank) -> Self {
        Self {
            side,
            rank,
            data: vec![Q::zero(); rank.dim()],
        }
    }

    pub fn from_data(side: Side, rank: TensorRank, data: Vec<Q>) -> Result<Self> {
        if data.len() != rank.dim() {
            return Err(Error::RankMismatch {
                left: rank.dim(),
                right: data.len(),
            });
        }
        Ok(Self { side, rank, data })
    }

    /// The basis tensor with a single `1` at the packed multi-index.
    pub fn basis(side: Side, rank: TensorRank, index: usize) -> Self {
        let mut t = Self::zero(side, rank);
        t.data[index] = Q::one();
        t
    }

    /// Basis tensor from 1-based per-slot indices `(b₁, …, b_n)`, `b_k ∈ {1, 2}`.
    pub fn basis_from_slots(side: Side, slots: &[usize]) -> Result<Self> {
        let rank = TensorRank::new(slots.len())?;
        if let Some(b) = slots.iter().find(|&&b| b != 1 && b != 2) {
            return Err(Error::IndexOutOfRange(format!(
                "spinor index {b}, expected 1 or 2"
            )));
        }
        let index = slots
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &b)| acc | ((b - 1) << k));
        Ok(Self::basis(side, rank, index))
    }

    pub fn n(&self) -> usize {
        self.rank.get()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
            ..self.clone()
        })
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        if self.side != other.side {
            return Err(Error::SideMismatch {
                expected: self.side.name(),
            });
        }
        Ok(())
    }

    /// `(1 ⊗ ⋯ ⊗ A ⊗ ⋯ ⊗ 1)t` for columns, `t(1 ⊗ ⋯ ⊗ A ⊗ ⋯ ⊗ 1)` for rows.
    pub fn slot_apply(&self, a: &Biquaternion, slot: usize) -> Result<Self> {
        check_slot(slot, self.n())?;
        Ok(Self {
            data: slot_map(&self.data, slot, self.side, |r, c, x| a.entry(r, c) * x),
            ..self.clone()
        })
    }

    /// Applies `A` in every slot: `(A ⊗ ⋯ ⊗ A)t`.
    pub fn apply_all_slots(&self, a: &Biquaternion) -> Self {
        (1..=self.n()).fold(self.clone(), |t, k| {
            t.slot_apply(a, k).expect("slot in range")
        })
    }

    pub fn permute_slots(&self, perm: &[usize]) -> Self {
        let mut data = vec![Q::zero(); self.data.len()];
        for (i, x) in self.data.iter().enumerate() {
            data[permute_index(i, perm)] = x.clone();
        }
        Self {
            data,
            ..self.clone()
        }
    }

    /// Average over all `n!` slot permutations; an exact projection.
    pub fn symmetrize(&self) -> Self {
        let perms = permutations(self.n());
        let weight = Q::from_ratio(1, perms.len() as i64);
        let mut acc = Self::zero(self.side, self.rank);
        for p in &perms {
            acc = acc.add(&self.permute_slots(p)).expect("same shape");
        }
        acc.scale(&weight)
    }

    pub fn is_symmetric(&self) -> bool {
        is_symmetric_array(&self.data, self.n())
    }

    /// `Σ_{i=0}^{3} (⋯ e_i at j ⋯ e_i at k ⋯) t`.
    pub fn casimir_slot_sum(&self, j: usize, k: usize) -> Result<Self> {
        check_slot(j, self.n())?;
        check_slot(k, self.n())?;
        if j == k {
            return Err(Error::RepeatedSlot(j));
        }
        let mut acc = Self::zero(self.side, self.rank);
        for i in 0..4 {
            let e = Biquaternion::e(i);
            let term = self.slot_apply(&e, k)?.slot_apply(&e, j)?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// The pairing `(S′)^{⊗n} × S^{⊗n} → C`: sum of products of matching components.
pub fn contract(row: &SpinorTensor, col: &SpinorTensor) -> Result<Q> {
    if row.side != Side::Row {
        return Err(Error::SideMismatch { expected: "row" });
    }
    if col.side != Side::Column {
        return Err(Error::SideMismatch { expected: "column" });
    }
    if row.rank != col.rank {
        return Err(Error::RankMismatch {
            left: row.n(),
            right: col.n(),
        });
    }
    Ok(row
        .data
        .iter()
        .zip(&col.data)
        .fold(Q::zero(), |acc, (a, b)| &acc + &(a * b)))
}

/// Rank of a list of vectors over `Q(i)` by exact Gaussian elimination.
pub fn rank_of(vectors: &[Vec<Q>]) -> usize {
    let mut rows: Vec<Vec<Q>> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].checked_inv().expect("nonzero pivot");
        let pivot: Vec<Q> = rows[rank].iter().map(|x| x * &inv).collect();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for c in col..width {
                let d = &pivot[c] * &f;
                rows[r][c] -= &d;
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::EBasisCoords;

    fn r(n: usize) -> TensorRank {
        TensorRank::new(n).unwrap()
    }

    fn sample(side: Side, n: usize, seed: i64) -> SpinorTensor {
        let data = (0..1usize << n)
            .map(|i| {
                Q::from_parts(
                    ((i as i64 * 7 + seed) % 5 - 2, 1),
                    ((i as i64 + seed) % 3 - 1, 2),
                )
            })
            .collect();
        SpinorTensor::from_data(side, r(n), data).unwrap()
    }

    #[test]
    fn rank_guard() {
        assert!(TensorRank::new(0).is_err());
        assert!(TensorRank::new(5).is_err());
        assert_eq!(TensorRank::new(4).unwrap().dim(), 16);
    }

    #[test]
    fn slot_apply_basics() {
        let t = sample(Side::Column, 3, 1);
        for k in 1..=3 {
            assert_eq!(t.slot_apply(&Biquaternion::one(), k).unwrap(), t);
        }
        assert!(matches!(
            t.slot_apply(&Biquaternion::one(), 4),
            Err(Error::SlotOutOfRange { slot: 4, rank: 3 })
        ));
        let t2 = sample(Side::Column, 2, 3);
        let (e1, e2) = (Biquaternion::e(1), Biquaternion::e(2));
        assert_eq!(
            t2.slot_apply(&e2, 2).unwrap().slot_apply(&e1, 1).unwrap(),
            t2.slot_apply(&e1, 1).unwrap().slot_apply(&e2, 2).unwrap()
        );
        // n = 1 is the matrix-vector product
        let a = Biquaternion::from_coords(&EBasisCoords([1, 2, 3, 4].map(Q::from_int)));
        let s = sample(Side::Column, 1, 0);
        let mv: Vec<Q> = (0..2)
            .map(|i| &(a.entry(i, 0) * &s.data[0]) + &(a.entry(i, 1) * &s.data[1]))
            .collect();
        assert_eq!(s.slot_apply(&a, 1).unwrap().data, mv);
        let row = sample(Side::Row, 1, 0);
        let vm: Vec<Q> = (0..2)
            .map(|j| &(&row.data[0] * a.entry(0, j)) + &(&row.data[1] * a.entry(1, j)))
            .collect();
        assert_eq!(row.slot_apply(&a, 1).unwrap().data, vm);
    }

    #[test]
    fn symmetrization() {
        let t = SpinorTensor::basis_from_slots(Side::Column, &[1, 2]).unwrap();
        let s = t.symmetrize();
        let half = Q::from_ratio(1, 2);
        let expected = SpinorTensor::basis_from_slots(Side::Column, &[1, 2])
            .unwrap()
            .add(&SpinorTensor::basis_from_slots(Side::Column, &[2, 1]).unwrap())
            .unwrap()
            .scale(&half);
        assert_eq!(s, expected);
        let u = sample(Side::Row, 3, 2);
        assert_eq!(u.symmetrize().symmetrize(), u.symmetrize());
        assert!(u.symmetrize().is_symmetric());
        for n in 1..=4 {
            let images: Vec<Vec<Q>> = (0..1 << n)
                .map(|i| SpinorTensor::basis(Side::Column, r(n), i).symmetrize().data)
                .collect();
            assert_eq!(rank_of(&images), n + 1);
        }
    }

    #[test]
    fn contraction() {
        let row = SpinorTensor::basis_from_slots(Side::Row, &[1]).unwrap();
        let col = SpinorTensor::basis_from_slots(Side::Column, &[1]).unwrap();
        assert_eq!(contract(&row, &col).unwrap(), Q::one());
        let row = SpinorTensor::basis_from_slots(Side::Row, &[1, 2]).unwrap();
        let c12 = SpinorTensor::basis_from_slots(Side::Column, &[1, 2]).unwrap();
        let c21 = SpinorTensor::basis_from_slots(Side::Column, &[2, 1]).unwrap();
        assert_eq!(contract(&row, &c12).unwrap(), Q::one());
        assert_eq!(contract(&row, &c21).unwrap(), Q::zero());
        let c3 = sample(Side::Column, 3, 0);
        assert!(matches!(
            contract(&row, &c3),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn casimir_sum() {
        let sym = SpinorTensor::basis_from_slots(Side::Column, &[1, 2])
            .unwrap()
            .symmetrize();
        assert!(sym.casimir_slot_sum(1, 2).unwrap().is_zero());
        let anti = SpinorTensor::basis_from_slots(Side::Column, &[1, 2])
            .unwrap()
            .sub(&SpinorTensor::basis_from_slots(Side::Column, &[2, 1]).unwrap())
            .unwrap();
        // e0⊗e0 gives 1, and -Σ σ_k⊗σ_k gives 3 on the singlet
        assert_eq!(
            anti.casimir_slot_sum(1, 2).unwrap(),
            anti.scale(&Q::from_int(4))
        );
        assert_eq!(anti.casimir_slot_sum(2, 2), Err(Error::RepeatedSlot(2)));
        let sym3 = sample(Side::Row, 3, 4).symmetrize();
        for (j, k) in [(1, 2), (1, 3), (2, 3), (3, 1)] {
            assert!(sym3.casimir_slot_sum(j, k).unwrap().is_zero());
        }
    }
}
