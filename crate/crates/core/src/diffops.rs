//! Differential operators on the Laurent class.
//!
//! With `∂ = (∂11 ∂21; ∂12 ∂22)` (entry `(r, c)` is `∂/∂z_{cr}`) and
//! `∂⁺ = (∂22 −∂21; −∂12 ∂11)`, the Fueter operators are `∇ = 2∂` and
//! `∇⁺ = 2∂⁺`. The x-coordinate forms are kept as [`nabla_plus_slot_x`] and
//! [`nabla_slot_x`] so the translation can be tested instead of trusted.
//!
//! `(deg+m)⁻¹` acts spectrally: a homogeneous piece of degree `d` is divided
//! by `d+m`. On polynomials this is `∫₀¹ t^{m−1} φ(tZ) dt` (substitute the
//! piece, `∫ t^{d+m−1} dt = 1/(d+m)`); on functions decaying at infinity it is
//! `−∫₁^∞ t^{m−1} φ(tZ) dt`, which gives the same `1/(d+m)` when `d+m < 0`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::func::{LaurentFn, TensorFn};
use crate::quat::Biquaternion;
use crate::scalar::GaussianRational;
use crate::tensor::{check_slot, slot_map, Side};

type Q = GaussianRational;

/// `∂_ij f` with 1-based `i, j`.
pub fn partial(f: &LaurentFn, i: usize, j: usize) -> LaurentFn {
    f.partial(i - 1, j - 1)
}

/// Entry `(r, c)` of `∂` applied to `f`.
pub fn d_entry(f: &LaurentFn, r: usize, c: usize) -> LaurentFn {
    f.partial(c, r)
}

/// Entry `(r, c)` of `∂⁺` applied to `f`.
pub fn d_plus_entry(f: &LaurentFn, r: usize, c: usize) -> LaurentFn {
    match (r, c) {
        (0, 0) => f.partial(1, 1),
        (0, 1) => f.partial(1, 0).neg(),
        (1, 0) => f.partial(0, 1).neg(),
        _ => f.partial(0, 0),
    }
}

/// `∂/∂x^i` through the chain rule `∂/∂x^i = Σ (e_i)_{rc} ∂_{rc}`.
pub fn partial_x(f: &LaurentFn, i: usize) -> LaurentFn {
    let e = Biquaternion::e(i);
    let mut acc = LaurentFn::zero();
    for r in 0..2 {
        for c in 0..2 {
            let a = e.entry(r, c);
            if !a.is_zero() {
                acc = acc.add(&f.partial(r, c).scale(a));
            }
        }
    }
    acc
}

fn slot_op(
    f: &TensorFn,
    slot: usize,
    entry: impl Fn(&LaurentFn, usize, usize) -> LaurentFn,
) -> Result<TensorFn> {
    check_slot(slot, f.n())?;
    Ok(TensorFn {
        comps: slot_map(&f.comps, slot, f.side, |r, c, x| entry(x, r, c)),
        ..f.clone()
    })
}

/// `∇` at `slot`: on the left for columns, on the right for rows.
pub fn nabla_slot(f: &TensorFn, slot: usize) -> Result<TensorFn> {
    let two = Q::from_int(2);
    slot_op(f, slot, |x, r, c| d_entry(x, r, c).scale(&two))
}

/// `∇⁺` at `slot`: on the left for columns, on the right for rows.
pub fn nabla_plus_slot(f: &TensorFn, slot: usize) -> Result<TensorFn> {
    let two = Q::from_int(2);
    slot_op(f, slot, |x, r, c| d_plus_entry(x, r, c).scale(&two))
}

fn x_form(f: &TensorFn, slot: usize, signs: [i64; 4]) -> Result<TensorFn> {
    check_slot(slot, f.n())?;
    let mut acc = TensorFn::zero(f.side, f.rank);
    for (i, s) in signs.iter().enumerate() {
        let e = crate::func::const_matrix(&Biquaternion::e(i));
        let d = f.map(|c| partial_x(c, i)).slot_mul(&e, slot)?;
        acc = acc.add(&d.scale(&Q::from_int(*s)))?;
    }
    Ok(acc)
}

/// `∇⁺ = Σ e_i ∂/∂x^i` at `slot`, computed in x-coordinates.
pub fn nabla_plus_slot_x(f: &TensorFn, slot: usize) -> Result<TensorFn> {
    x_form(f, slot, [1, 1, 1, 1])
}

/// `∇ = e_0 ∂/∂x⁰ − Σ e_i ∂/∂x^i` at `slot`, computed in x-coordinates.
pub fn nabla_slot_x(f: &TensorFn, slot: usize) -> Result<TensorFn> {
    x_form(f, slot, [1, -1, -1, -1])
}

/// `□ = 4(∂11∂22 − ∂12∂21)`.
pub fn laplacian(f: &LaurentFn) -> LaurentFn {
    let a = f.partial(0, 0).partial(1, 1);
    let b = f.partial(0, 1).partial(1, 0);
    a.sub(&b).scale(&Q::from_int(4))
}

/// `Σ (∂/∂x^i)²`, the x-coordinate Laplacian.
pub fn laplacian_x(f: &LaurentFn) -> LaurentFn {
    (0..4).fold(LaurentFn::zero(), |acc, i| {
        acc.add(&partial_x(&partial_x(f, i), i))
    })
}

pub fn deg_op(f: &TensorFn) -> TensorFn {
    f.map(LaurentFn::deg)
}

/// `(deg + m) f`.
pub fn deg_shift(f: &TensorFn, m: i64) -> TensorFn {
    deg_op(f)
        .add(&f.scale(&Q::from_int(m)))
        .expect("same shape")
}

/// `(deg + m)⁻¹ f`; fails when a piece of degree `−m` is present.
pub fn deg_shift_inverse(f: &TensorFn, m: i64) -> Result<TensorFn> {
    f.map_by_degree(|d| {
        if d + m == 0 {
            Err(Error::ResonantDegree {
                degree: d,
                shift: m,
            })
        } else {
            Ok(Q::from_ratio(1, d + m))
        }
    })
}

/// `∏_{m=2}^{n} (d + m)`, the eigenvalue of `D_n` on degree `d`.
pub fn dn_eigenvalue(n: usize, d: i64) -> i64 {
    (2..=n as i64).map(|m| d + m).product()
}

/// `D_n = (deg+n)⋯(deg+2)`; `D_1` is the identity.
pub fn dn(f: &TensorFn) -> TensorFn {
    let n = f.n();
    f.map_by_degree(|d| Ok(Q::from_int(dn_eigenvalue(n, d))))
        .expect("no error path")
}

pub fn dn_inverse(f: &TensorFn) -> Result<TensorFn> {
    let n = f.n();
    f.map_by_degree(|d| {
        for m in 2..=n as i64 {
            if d + m == 0 {
                return Err(Error::ResonantDegree {
                    degree: d,
                    shift: m,
                });
            }
        }
        Ok(Q::from_ratio(1, dn_eigenvalue(n, d)))
    })
}

/// Outcome of the regularity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    pub symmetric: bool,
    /// First slot whose `∇⁺` remainder is nonzero, with that remainder.
    pub witness: Option<(usize, TensorFn)>,
}

/// Left n-regular for columns (`∇⁺_k f = 0`), right n-regular for rows
/// (`g ∇⁺_k = 0`), for every slot `k`.
pub fn is_n_regular(f: &TensorFn) -> Regularity {
    let mut witness = None;
    for k in 1..=f.n() {
        let r = nabla_plus_slot(f, k).expect("slot in range");
        if !r.is_zero() {
            witness = Some((k, r));
            break;
        }
    }
    Regularity {
        regular: witness.is_none(),
        symmetric: f.is_symmetric(),
        witness,
    }
}

/// Checks the side and reports regularity; a column function asked for as
/// right-regular (or vice versa) is a side mismatch.
pub fn is_n_regular_on(f: &TensorFn, side: Side) -> Result<Regularity> {
    if f.side != side {
        return Err(Error::SideMismatch {
            expected: side.name(),
        });
    }
    Ok(is_n_regular(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::z_matrix;
    use crate::poly::Poly;
    use crate::tensor::TensorRank;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn z(r: usize, c: usize) -> LaurentFn {
        LaurentFn::z(r, c)
    }

    fn col(a: LaurentFn, b: LaurentFn) -> TensorFn {
        TensorFn::new(Side::Column, TensorRank::new(1).unwrap(), vec![a, b]).unwrap()
    }

    #[test]
    fn partials() {
        assert_eq!(partial(&z(0, 0).mul(&z(0, 0)), 1, 1), z(0, 0).scale(&q(2)));
        let expected = z(1, 1).neg().mul(&LaurentFn::norm_power(-2));
        assert_eq!(partial(&LaurentFn::norm_power(-1), 1, 1), expected);
        assert!(partial(&z(0, 0), 1, 2).is_zero());
    }

    #[test]
    fn nabla_plus_examples() {
        assert!(
            nabla_plus_slot(&col(LaurentFn::one(), LaurentFn::zero()), 1)
                .unwrap()
                .is_zero()
        );
        assert!(nabla_plus_slot(&col(z(0, 0), z(0, 1)), 1)
            .unwrap()
            .is_zero());
        assert!(!nabla_plus_slot(&col(z(1, 1), LaurentFn::zero()), 1)
            .unwrap()
            .is_zero());
        assert!(!is_n_regular(&col(z(1, 0).mul(&z(0, 0)), z(1, 1).mul(&z(0, 0)))).regular);
        assert!(matches!(
            nabla_plus_slot(&col(z(0, 0), z(0, 1)), 2),
            Err(Error::SlotOutOfRange { slot: 2, rank: 1 })
        ));
    }

    #[test]
    fn laplacian_examples() {
        // □(z11 z22) = 4
        assert_eq!(laplacian(&z(0, 0).mul(&z(1, 1))), LaurentFn::constant(q(4)));
        assert!(laplacian(&LaurentFn::norm_power(-1)).is_zero());
        assert_eq!(
            laplacian(&LaurentFn::norm_power(1)),
            LaurentFn::constant(q(8))
        );
    }

    #[test]
    fn degree_operators() {
        let r1 = TensorRank::new(1).unwrap();
        let s = |f: LaurentFn| TensorFn::new(Side::Column, r1, vec![f, LaurentFn::zero()]).unwrap();
        assert_eq!(
            deg_op(&s(z(0, 0).mul(&z(0, 0)))),
            s(z(0, 0).mul(&z(0, 0)).scale(&q(2)))
        );
        assert_eq!(
            deg_op(&s(LaurentFn::norm_power(-1))),
            s(LaurentFn::norm_power(-1).scale(&q(-2)))
        );
        assert!(deg_shift(&s(LaurentFn::norm_power(-1)), 2).is_zero());
        assert_eq!(
            deg_shift_inverse(&s(z(0, 0)), 2).unwrap(),
            s(z(0, 0).scale(&Q::from_ratio(1, 3)))
        );
        assert_eq!(
            deg_shift_inverse(&s(LaurentFn::norm_power(-1)), 2),
            Err(Error::ResonantDegree {
                degree: -2,
                shift: 2
            })
        );
        assert_eq!(
            deg_shift_inverse(&s(LaurentFn::norm_power(-2)), 2).unwrap(),
            s(LaurentFn::norm_power(-2).scale(&Q::from_ratio(-1, 2)))
        );
        let f = s(z(0, 0).add(&LaurentFn::norm_power(-3)));
        assert_eq!(dn(&f), f);
    }

    /// Monomials `z^a N^{-k}` of homogeneity degree in `-4..=4`, sampled.
    fn spanning_monomials() -> Vec<LaurentFn> {
        let mut out = Vec::new();
        for k in 0..=3u32 {
            for a in 0..=2u32 {
                for b in 0..=2u32 {
                    for c in 0..=1u32 {
                        for d in 0..=2u32 {
                            let deg = (a + b + c + d) as i64 - 2 * k as i64;
                            if deg.abs() <= 4 && (a + b + c + d) <= 5 {
                                out.push(LaurentFn::new(Poly::monomial([a, b, c, d], q(1)), k));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn z_form_matches_x_form() {
        let r1 = TensorRank::new(1).unwrap();
        for f in spanning_monomials().iter().step_by(3) {
            for side in [Side::Column, Side::Row] {
                let t = TensorFn::new(side, r1, vec![f.clone(), f.partial(0, 0)]).unwrap();
                assert_eq!(
                    nabla_plus_slot(&t, 1).unwrap(),
                    nabla_plus_slot_x(&t, 1).unwrap()
                );
                assert_eq!(nabla_slot(&t, 1).unwrap(), nabla_slot_x(&t, 1).unwrap());
            }
            assert_eq!(laplacian(f), laplacian_x(f));
        }
    }

    #[test]
    fn operator_identities_on_monomials() {
        let zm = z_matrix();
        let zp = {
            let [[a, b], [c, d]] = &zm;
            [[d.clone(), b.neg()], [c.neg(), a.clone()]]
        };
        let two = q(2);
        let mons = spanning_monomials();
        for (i, f) in mons.iter().enumerate() {
            let g = &mons[(i * 7 + 3) % mons.len()];
            let t = col(f.clone(), g.clone());
            let lhs = deg_shift(&t, 2).scale(&two);
            let a = nabla_plus_slot(&t, 1).unwrap().slot_mul(&zp, 1).unwrap();
            let b = nabla_slot(&t.slot_mul(&zm, 1).unwrap(), 1).unwrap();
            assert_eq!(a.add(&b).unwrap(), lhs);
            let c = nabla_plus_slot(&t.slot_mul(&zp, 1).unwrap(), 1).unwrap();
            let d = nabla_slot(&t, 1).unwrap().slot_mul(&zm, 1).unwrap();
            assert_eq!(c.add(&d).unwrap(), lhs);
            let lap = t.map(laplacian);
            assert_eq!(
                nabla_plus_slot(&nabla_slot(&t, 1).unwrap(), 1).unwrap(),
                lap
            );
            assert_eq!(
                nabla_slot(&nabla_plus_slot(&t, 1).unwrap(), 1).unwrap(),
                lap
            );
        }
    }

    proptest! {
        #[test]
        fn nabla_plus_lowers_degree(a in 0u32..3, b in 0u32..3, c in 0u32..3, d in 0u32..3, k in 0u32..3) {
            let f = LaurentFn::new(Poly::monomial([a, b, c, d], q(1)), k);
            let t = col(f.clone(), f.partial(1, 1));
            let lhs = nabla_plus_slot(&deg_op(&t), 1).unwrap();
            let rhs = deg_shift(&nabla_plus_slot(&t, 1).unwrap(), 1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dn_inverse_round_trip(a in 0u32..3, b in 0u32..3, k in 0u32..2, n in 1usize..4) {
            let f = LaurentFn::new(Poly::monomial([a, b, 1, 0], q(1)), k);
            let r = TensorRank::new(n).unwrap();
            let mut comps = vec![LaurentFn::zero(); r.dim()];
            comps[0] = f;
            let t = TensorFn::new(Side::Column, r, comps).unwrap();
            match dn_inverse(&t) {
                Ok(inv) => {
                    prop_assert_eq!(dn(&inv), t.clone());
                    prop_assert_eq!(dn_inverse(&dn(&t)).unwrap(), t);
                }
                Err(Error::ResonantDegree { degree, .. }) => prop_assert!((-(n as i64)..=-2).contains(&degree)),
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
