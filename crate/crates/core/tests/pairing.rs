use nregular_core::basis::{basis, members, BasisIndex, Family};
use nregular_core::kernel::*;
use nregular_core::{Biquaternion, GaussianRational as Q};
use num_traits::{One, Zero};

fn expected(f: &BasisIndex, g: &BasisIndex) -> Q {
    let same = f.l == g.l && f.mu == g.mu && f.nu == g.nu;
    if !same {
        return Q::zero();
    }
    match (f.family, g.family) {
        (Family::F, Family::Gp) => Q::one(),
        (Family::Fp, Family::G) if f.n % 2 == 1 => Q::one(),
        (Family::Fp, Family::G) => -Q::one(),
        _ => Q::zero(),
    }
}

#[test]
fn orthogonality_low_ranks() {
    for n in 1..=2 {
        for fam_f in [Family::F, Family::Fp] {
            for fam_g in [Family::G, Family::Gp] {
                for f in members(fam_f, n, 2) {
                    for g in members(fam_g, n, 2) {
                        let got = member_pairing(&f, &g).unwrap();
                        assert_eq!(got, expected(&f, &g), "<{f}, {g}>");
                    }
                }
            }
        }
    }
}

#[test]
fn reproducing_formula_n1() {
    let w = Biquaternion::e(0).scale(&Q::from_ratio(1, 3));
    for idx in members(Family::F, 1, 2) {
        let f = basis(&idx).unwrap();
        let want = dn_at(&f, &w).unwrap();
        for form in [ExpansionForm::FGp, ExpansionForm::FpG] {
            let got = cauchy_fueter_apply_with(&f, &w, 2, form).unwrap();
            assert_eq!(got, want, "{idx} {form:?}");
        }
    }
}

#[test]
fn expansion_matches_taylor() {
    for n in 1..=2 {
        let k = kernel(n).unwrap();
        for d in 0..=2u32 {
            let t = kernel_taylor(&k, d);
            for form in [ExpansionForm::FGp, ExpansionForm::FpG] {
                let lvl = expansion_level(n, d as i64, form).unwrap();
                assert_eq!(lvl.coeffs, t, "n={n} d={d} {form:?}");
            }
        }
    }
}

fn f1(l2: i64, mu2: i64, nu2: i64) -> std::sync::Arc<nregular_core::TensorFn> {
    nregular_core::basis::f_basis(1, l2, mu2, nu2).unwrap()
}

#[test]
fn pairing_examples() {
    use nregular_core::basis::{fp_basis, g_basis, gp_basis};
    let f = f1(0, -1, 0);
    let g = gp_basis(1, 0, -1, 0).unwrap();
    assert_eq!(bilinear_pairing(&f, &g).unwrap(), Q::one());
    let fp = fp_basis(2, 1, 1, -1).unwrap();
    let g2 = g_basis(2, 1, 1, -1).unwrap();
    assert_eq!(bilinear_pairing(&fp, &g2).unwrap(), -Q::one());
    assert!(
        bilinear_pairing(&f1(1, 0, 1), &g_basis(1, 1, 0, 1).unwrap())
            .unwrap()
            .is_zero()
    );
}

#[test]
fn deg_switch_identity() {
    use nregular_core::basis::gp_basis;
    for n in 1..=2usize {
        let l2_max = if n == 1 { 3 } else { 2 };
        for f in members(Family::F, n, l2_max) {
            let g = gp_basis(n, f.l.0, f.mu.0, f.nu.0).unwrap();
            assert!(deg_switch_check(&basis(&f).unwrap(), &g).unwrap(), "{f}");
        }
    }
    // a mixed pair of complementary degrees
    let f = basis(&BasisIndex::new(Family::Fp, 2, 1, 1, 1).unwrap())
        .unwrap()
        .add(
            &basis(&BasisIndex::new(Family::F, 2, 1, -1, 1).unwrap())
                .unwrap()
                .scale(&Q::from_int(3)),
        )
        .unwrap();
    let g = basis(&BasisIndex::new(Family::G, 2, 1, 1, 1).unwrap())
        .unwrap()
        .add(
            &basis(&BasisIndex::new(Family::Gp, 2, 1, -1, 1).unwrap())
                .unwrap()
                .scale(&Q::i()),
        )
        .unwrap();
    assert!(deg_switch_check(&f, &g).unwrap());
}

#[test]
fn cauchy_theorem_on_polynomial_pairs() {
    for n in 1..=2usize {
        let l2_max = if n == 1 { 2 } else { 0 };
        for f in members(Family::F, n, l2_max) {
            for g in members(Family::G, n, l2_max) {
                for k in 1..=n {
                    let ok =
                        cauchy_theorem_check(&basis(&f).unwrap(), &basis(&g).unwrap(), k).unwrap();
                    assert!(ok, "{f} {g} slot {k}");
                }
            }
        }
    }
}

#[test]
fn reproducing_examples() {
    let w = Biquaternion::e(0).scale(&Q::from_ratio(1, 3));
    for (mu2, nu2) in nregular_core::basis::index_pairs(1, 1) {
        let f = f1(1, mu2, nu2);
        assert_eq!(
            cauchy_fueter_apply(&f, &w, 1).unwrap(),
            dn_at(&f, &w).unwrap()
        );
    }
    let w = (&Biquaternion::e(0) + &Biquaternion::e(2)).scale(&Q::from_ratio(1, 4));
    for (mu2, nu2) in nregular_core::basis::index_pairs(2, 2) {
        let f = nregular_core::basis::f_basis(2, 2, mu2, nu2).unwrap();
        assert_eq!(
            cauchy_fueter_apply(&f, &w, 2).unwrap(),
            dn_at(&f, &w).unwrap()
        );
    }
    let outside = Biquaternion::e(1).scale(&Q::from_int(3));
    assert!(cauchy_fueter_apply(&f1(2, 1, 0), &outside, 2)
        .unwrap()
        .is_zero());
}

#[test]
fn reproducing_errors() {
    use nregular_core::Error;
    let f = f1(2, 1, 0);
    let w = Biquaternion::e(0).scale(&Q::from_ratio(1, 2));
    assert!(matches!(
        cauchy_fueter_apply(&f, &w, 1),
        Err(Error::TruncationInsufficient {
            degree: 2,
            twice_lmax: 1
        })
    ));
    assert!(matches!(
        cauchy_fueter_apply(&f, &Biquaternion::e(3), 2),
        Err(Error::BadPoint(_))
    ));
    let complex = Biquaternion::e(0).scale(&Q::from_parts((0, 1), (1, 2)));
    assert!(matches!(
        cauchy_fueter_apply(&f, &complex, 2),
        Err(Error::BadPoint(_))
    ));
}

#[test]
fn expansion_term_counts() {
    for n in 1..=3usize {
        let e = truncated_expansion(n, 2, ExpansionForm::FGp).unwrap();
        for lvl in &e.levels {
            let l2 = lvl.l.twice() as usize;
            assert_eq!(lvl.term_count, (l2 + 1) * (l2 + n + 1));
        }
    }
    let z = Biquaternion::e(0).scale(&Q::from_int(2));
    let w = Biquaternion::e(1).scale(&Q::from_ratio(1, 2));
    let errs = expansion_spot_check(2, 6, ExpansionForm::FpG, &z, &w).unwrap();
    assert!(errs.windows(2).all(|p| p[1] < p[0]), "{errs:?}");
}

#[test]
fn laurent_coefficient_examples() {
    use nregular_core::basis::{f_basis, fp_basis, gp_basis};
    let f = f_basis(1, 1, 2, -1).unwrap();
    let c = laurent_coefficients(&f, 2).unwrap();
    assert!(c.minus.is_empty());
    assert_eq!(c.plus.len(), 1);
    assert_eq!(
        c.plus[&BasisIndex::new(Family::F, 1, 1, 2, -1).unwrap()],
        Q::one()
    );

    let f = f_basis(2, 0, 2, 0)
        .unwrap()
        .scale(&Q::from_int(3))
        .add(&fp_basis(2, 1, -1, 1).unwrap().scale(&Q::from_int(5)))
        .unwrap();
    let c = laurent_coefficients(&f, 2).unwrap();
    assert_eq!(
        c.plus[&BasisIndex::new(Family::F, 2, 0, 2, 0).unwrap()],
        Q::from_int(3)
    );
    assert_eq!(
        c.minus[&BasisIndex::new(Family::Fp, 2, 1, -1, 1).unwrap()],
        Q::from_int(5)
    );
    assert_eq!(c.reconstruct().unwrap(), f);

    let g = gp_basis(1, 1, 0, 1).unwrap();
    let c = laurent_coefficients(&g, 2).unwrap();
    assert!(c.plus.is_empty());
    assert_eq!(
        c.minus[&BasisIndex::new(Family::Gp, 1, 1, 0, 1).unwrap()],
        Q::one()
    );
}

#[test]
fn inner_product_examples() {
    let a = f1(0, -1, 0);
    let b = f1(0, 1, 0);
    let aa = inner_product_f(&a, &a).unwrap();
    assert!(aa.is_real() && aa.re > num_rational::BigRational::zero());
    assert!(inner_product_f(&a, &b).unwrap().is_zero());
    let x = nregular_core::basis::f_basis(2, 1, 1, 1)
        .unwrap()
        .add(
            &nregular_core::basis::f_basis(2, 1, -1, 1)
                .unwrap()
                .scale(&Q::from_parts((1, 1), (2, 1))),
        )
        .unwrap();
    let y = nregular_core::basis::f_basis(2, 1, 1, 1)
        .unwrap()
        .scale(&Q::from_parts((0, 1), (3, 1)));
    assert_eq!(
        inner_product_f(&x, &y).unwrap(),
        inner_product_f(&y, &x).unwrap().conj()
    );
}
