use nregular_core::basis::{
    explicit_n1, f_basis, f_direct, g_basis, g_direct, index_pairs, members, recursion_check,
    t_coeff, t_coeff_inverted, Family,
};
use nregular_core::diffops::{is_n_regular, laplacian};
use nregular_core::poly::Poly;
use nregular_core::LaurentFn;

#[test]
fn matrix_coefficient_examples() {
    assert_eq!(t_coeff(0, 0, 0), Poly::one());
    let mut got: Vec<Poly> = [(-1, -1), (-1, 1), (1, -1), (1, 1)]
        .into_iter()
        .map(|(nu2, mu2)| t_coeff(1, nu2, mu2))
        .collect();
    let mut want: Vec<Poly> = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(r, c)| Poly::z(r, c))
        .collect();
    got.sort_by_key(|p| format!("{p:?}"));
    want.sort_by_key(|p| format!("{p:?}"));
    assert_eq!(got, want);

    let mid = Poly::z(0, 0)
        .mul(&Poly::z(1, 1))
        .add(&Poly::z(0, 1).mul(&Poly::z(1, 0)));
    assert_eq!(t_coeff(2, 0, 0), mid);
    assert_eq!(t_coeff_inverted(0, 0, 0), LaurentFn::norm_power(-1));

    for l2 in 0..=4 {
        for nu2 in (-l2..=l2).step_by(2) {
            for mu2 in (-l2..=l2).step_by(2) {
                let t = LaurentFn::poly(t_coeff(l2, nu2, mu2));
                assert!(laplacian(&t).is_zero());
                assert!(laplacian(&t_coeff_inverted(l2, nu2, mu2)).is_zero());
            }
        }
    }
}

#[test]
fn direct_forms_agree_with_basis() {
    for n in 1..=2 {
        for (mu2, nu2) in index_pairs(n, 2) {
            let f = f_basis(n, 2, mu2, nu2).unwrap();
            assert_eq!(*f, f_direct(n, 2, mu2, nu2), "F n={n} mu2={mu2} nu2={nu2}");
            assert!(is_n_regular(&f).regular);
        }
    }
    for (mu2, nu2) in index_pairs(1, 1) {
        assert_eq!(
            *f_basis(1, 1, mu2, nu2).unwrap(),
            explicit_n1(Family::F, 1, mu2, nu2)
        );
        assert_eq!(
            *g_basis(1, 1, mu2, nu2).unwrap(),
            explicit_n1(Family::G, 1, mu2, nu2)
        );
        assert_eq!(*g_basis(1, 1, mu2, nu2).unwrap(), g_direct(1, 1, mu2, nu2));
    }
}

#[test]
fn member_counts_and_recursions() {
    // (2l + 1)(2l + n + 1) members at each level
    for n in 1..=3 {
        for l2 in 0..=2 {
            let count = index_pairs(n, l2).len() as i64;
            assert_eq!(count, (l2 + 1) * (l2 + n as i64 + 1), "n={n} l2={l2}");
        }
    }
    assert_eq!(members(Family::F, 1, 0).len(), 2);
    for fam in Family::ALL {
        assert!(recursion_check(fam, 1, 2).unwrap().ok());
    }
}
