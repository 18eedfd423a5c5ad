use nregular_core::basis::{basis, f_basis, g_basis, gp_basis, members, Family};
use nregular_core::lie::*;
use nregular_core::{Biquaternion, GaussianRational as Q, TensorFn};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn generators_preserve_regularity() {
    for (name, x) in one_block_generators().into_iter().chain(u22_generators()) {
        for fam in [Family::F, Family::Fp, Family::G, Family::Gp] {
            for idx in members(fam, 2, 1) {
                let f = basis(&idx).unwrap();
                assert!(
                    regularity_preservation_check(&x, &f).unwrap(),
                    "{name} on {idx}"
                );
            }
        }
    }
}

#[test]
fn b_block_lowers_g_degree() {
    let g = g_basis(2, 1, 1, 1).unwrap();
    for r in 0..2 {
        for c in 0..2 {
            let x = GlElement::block(Block::B, Biquaternion::unit(r, c));
            let img = act_algebra_right(&x, &g).unwrap();
            assert!(img.is_zero() || img.degrees() == vec![0], "{r}{c}");
        }
    }
}

#[test]
fn invariance_on_complementary_pairs() {
    // deg f + deg g + shift = -(n+2); C raises the degree of f by one.
    let f = f_basis(1, 1, 0, 1).unwrap();
    for (name, x) in one_block_generators() {
        for idx in members(Family::Gp, 1, 3) {
            let g = basis(&idx).unwrap();
            assert!(
                pairing_invariance_check(&x, &f, &g).unwrap(),
                "{name} {idx}"
            );
        }
    }
}

#[test]
fn sigma_intertwines_off_diagonal_blocks() {
    for blk in [Block::B, Block::C] {
        for r in 0..2 {
            for c in 0..2 {
                let x = GlElement::block(blk, Biquaternion::unit(r, c));
                for idx in members(Family::F, 2, 1)
                    .into_iter()
                    .chain(members(Family::Fp, 2, 1))
                {
                    let f = basis(&idx).unwrap();
                    assert!(
                        sigma_intertwine_check(&x, &f).unwrap(),
                        "{} {idx}",
                        blk.name()
                    );
                }
            }
        }
    }
    let x = GlElement::block(Block::A, Biquaternion::one());
    assert!(sigma_intertwine_check(&x, &f_basis(1, 0, 1, 0).unwrap()).is_err());
}

#[test]
fn sigma_is_an_involution_swapping_sides() {
    let f = f_basis(2, 1, -1, 1).unwrap();
    let s = sigma(&f);
    assert_ne!(s.side, f.side);
    assert_eq!(sigma(&s), *f);
}

#[test]
fn census_examples() {
    let c = ktype_census(Space::FPlus, 2, 2).unwrap();
    assert!(c.ok());
    let row = c.rows.iter().find(|r| r.degree == 2).unwrap();
    assert_eq!(row.expected_dim, 15);
    assert_eq!(row.span_dim, 15);
    assert_eq!(row.kernel_dim, Some(15));

    let c = ktype_census(Space::GPlus, 3, 1).unwrap();
    assert!(c.ok());
    let row = c.rows.iter().find(|r| r.degree == 0).unwrap();
    assert_eq!(row.expected_dim, 4);

    let c = ktype_census(Space::FMinus, 1, 2).unwrap();
    assert!(c.ok());
    assert!(c.rows.iter().all(|r| r.degree <= -3));
    assert!(c.gap_degrees_empty);
}

#[test]
fn regular_polynomial_counts() {
    for n in 1..=3usize {
        for d in 0..=2u32 {
            let l2 = d as usize;
            let want = (l2 + 1) * (l2 + n + 1);
            assert_eq!(
                regular_polynomial_dimension(nregular_core::Side::Column, n, d).unwrap(),
                want
            );
            assert_eq!(
                regular_polynomial_dimension(nregular_core::Side::Row, n, d).unwrap(),
                want
            );
        }
    }
}

#[test]
fn generation_examples() {
    for (space, n, d) in [
        (Space::FPlus, 1, 1),
        (Space::FMinus, 2, -5),
        (Space::GPlus, 1, 0),
    ] {
        let r = generation_check(space, n, d).unwrap();
        assert!(r.ok(), "{} n={n} d={d}: {r:?}", space.name());
    }
}

#[test]
fn torus_weights() {
    let lambda = torus_parameter();
    assert_eq!(
        lambda.norm_sqr(),
        num_rational::BigRational::from_integer(1.into())
    );
    let h = torus_element(&lambda).unwrap();
    for idx in members(Family::F, 1, 2) {
        let f = basis(&idx).unwrap();
        let img = act_group_left(&h, &f).unwrap();
        let e = idx.mu.twice();
        let w = if e <= 0 {
            lambda.pow((-e) as u32)
        } else {
            lambda.conj().pow(e as u32)
        };
        assert_eq!(img, f.scale(&w), "{idx}");
    }
}

#[test]
fn unitarity_signs() {
    for n in 1..=2usize {
        for space in [Space::FPlus, Space::FMinus, Space::GPlus, Space::GMinus] {
            let r = unitarity_check(space, n, 2).unwrap();
            assert!(r.ok(), "{} n={n}", space.name());
            let want = if space.is_plus() || n % 2 == 1 { 1 } else { -1 };
            assert_eq!(r.predicted_sign, want);
        }
    }
}

#[test]
fn inner_product_matches_pairing_route() {
    let fs: Vec<_> = members(Family::F, 1, 2)
        .iter()
        .map(|i| basis(i).unwrap())
        .collect();
    for a in &fs {
        for b in &fs {
            assert_eq!(
                inner_product(a, b).unwrap(),
                inner_product_via_pairing(a, b).unwrap()
            );
        }
    }
}

#[test]
fn group_inversions_are_involutions() {
    for f in [f_basis(2, 1, 1, -1).unwrap(), gp_basis(2, 0, 0, 0).unwrap()] {
        let once = act_group(&GroupElement::Inversion, &f).unwrap();
        assert_eq!(act_group(&GroupElement::Inversion, &once).unwrap(), *f);
    }
}

fn small_q() -> impl Strategy<Value = Q> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| Q::from_parts((a, 1), (b, 1)))
}

fn gl_element() -> impl Strategy<Value = GlElement> {
    proptest::collection::vec(small_q(), 16).prop_map(|v| {
        let m = |k: usize| {
            Biquaternion::new(
                v[k].clone(),
                v[k + 1].clone(),
                v[k + 2].clone(),
                v[k + 3].clone(),
            )
        };
        GlElement {
            a: m(0),
            b: m(4),
            c: m(8),
            d: m(12),
        }
    })
}

fn bracket_defect(x: &GlElement, y: &GlElement, f: &TensorFn) -> TensorFn {
    let xy = act_algebra(x, &act_algebra(y, f).unwrap()).unwrap();
    let yx = act_algebra(y, &act_algebra(x, f).unwrap()).unwrap();
    xy.sub(&yx)
        .unwrap()
        .sub(&act_algebra(&x.bracket(y), f).unwrap())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn actions_are_homomorphisms(x in gl_element(), y in gl_element(), k in 0usize..6) {
        let fs = members(Family::F, 1, 1);
        let gs = members(Family::G, 1, 1);
        let f = basis(&fs[k % fs.len()]).unwrap();
        let g = basis(&gs[k % gs.len()]).unwrap();
        prop_assert!(bracket_defect(&x, &y, &f).is_zero());
        prop_assert!(bracket_defect(&x, &y, &g).is_zero());
    }

    #[test]
    fn random_elements_preserve_regularity(x in gl_element(), k in 0usize..12) {
        let fs = members(Family::Fp, 2, 1);
        let f = basis(&fs[k % fs.len()]).unwrap();
        prop_assert!(regularity_preservation_check(&x, &f).unwrap());
    }

    #[test]
    fn linear_in_the_algebra(x in gl_element(), y in gl_element(), s in small_q()) {
        let f = basis(&members(Family::F, 1, 1)[0]).unwrap();
        let lhs = act_algebra(&x.add(&y.scale(&s)), &f).unwrap();
        let rhs = act_algebra(&x, &f).unwrap().add(&act_algebra(&y, &f).unwrap().scale(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn inner_product_is_hermitian() {
    let a = f_basis(2, 1, 1, 1)
        .unwrap()
        .add(&f_basis(2, 1, -1, -1).unwrap().scale(&Q::i()))
        .unwrap();
    let b = f_basis(2, 1, 1, 1)
        .unwrap()
        .scale(&Q::from_parts((2, 1), (1, 1)));
    assert_eq!(
        inner_product(&a, &b).unwrap(),
        inner_product(&b, &a).unwrap().conj()
    );
    assert!(!inner_product(&a, &a).unwrap().is_zero());
}
