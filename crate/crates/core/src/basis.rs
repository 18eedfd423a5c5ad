//! Matrix coefficients `t^l_{ν,μ}` and the families `F, G, F′, G′`.
//!
//! All half-integers are stored doubled. `F` and `G` come from their direct
//! differentiated definitions; `F′` and `G′` are built by recursion in `n`
//! from the explicit `n = 1` forms. A new tensor slot produced by a
//! recursion step is the most significant bit of the multi-index.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::func::{LaurentFn, TensorFn};
use crate::poly::Poly;
use crate::scalar::GaussianRational;
use crate::tensor::{Side, TensorRank};

type Q = GaussianRational;

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn twice(self) -> i64 {
        self.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid half-integer {s:?}"));
        match s.trim().split_once('/') {
            Some((p, "2")) => Ok(HalfInt(p.trim().parse().map_err(|_| bad())?)),
            Some(_) => Err(bad()),
            None => Ok(HalfInt(2 * s.trim().parse::<i64>().map_err(|_| bad())?)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    F,
    G,
    Fp,
    Gp,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::F, Family::G, Family::Fp, Family::Gp];

    pub fn side(self) -> Side {
        match self {
            Family::F | Family::Fp => Side::Column,
            Family::G | Family::Gp => Side::Row,
        }
    }

    pub fn is_primed(self) -> bool {
        matches!(self, Family::Fp | Family::Gp)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::F => "F",
            Family::G => "G",
            Family::Fp => "F'",
            Family::Gp => "G'",
        }
    }
}

/// `(family, n, 2l, 2μ, 2ν)` with the range and parity invariants enforced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub family: Family,
    pub n: usize,
    pub l: HalfInt,
    pub mu: HalfInt,
    pub nu: HalfInt,
}

impl BasisIndex {
    pub fn new(family: Family, n: usize, l2: i64, mu2: i64, nu2: i64) -> Result<Self> {
        TensorRank::new(n)?;
        let n2 = n as i64;
        let ok = l2 >= 0
            && nu2.abs() <= l2
            && mu2.abs() <= l2 + n2
            && (l2 - nu2) % 2 == 0
            && (l2 + n2 - mu2) % 2 == 0;
        if !ok {
            return Err(Error::IndexOutOfRange(format!(
                "{}^({n}) with 2l={l2}, 2mu={mu2}, 2nu={nu2}",
                family.name()
            )));
        }
        Ok(Self {
            family,
            n,
            l: HalfInt(l2),
            mu: HalfInt(mu2),
            nu: HalfInt(nu2),
        })
    }

    /// Homogeneity degree: `2l` for `F, G`, `−(2l+n+2)` for `F′, G′`.
    pub fn degree(&self) -> i64 {
        if self.family.is_primed() {
            -(self.l.0 + self.n as i64 + 2)
        } else {
            self.l.0
        }
    }

    pub fn with_family(&self, family: Family) -> Self {
        Self { family, ..*self }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}^({})[l={}, mu={}, nu={}]",
            self.family.name(),
            self.n,
            self.l,
            self.mu,
            self.nu
        )
    }
}

/// All `(2μ, 2ν)` at level `2l` for rank `n`; there are `(2l+1)(2l+n+1)`.
pub fn index_pairs(n: usize, l2: i64) -> Vec<(i64, i64)> {
    let m = l2 + n as i64;
    let mut out = Vec::new();
    for mu2 in (-m..=m).step_by(2) {
        for nu2 in (-l2..=l2).step_by(2) {
            out.push((mu2, nu2));
        }
    }
    out
}

/// Members of `family` with `2l ≤ l2_max`, in index order.
pub fn members(family: Family, n: usize, l2_max: i64) -> Vec<BasisIndex> {
    (0..=l2_max)
        .flat_map(|l2| {
            index_pairs(n, l2)
                .into_iter()
                .map(move |(mu2, nu2)| BasisIndex::new(family, n, l2, mu2, nu2).expect("in range"))
        })
        .collect()
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k as i64).fold(1i64, |acc, i| acc * (n as i64 - i) / (i + 1))
}

/// `t^l_{ν,μ}`: coefficient of `s^{l−ν}` in `(s z11 + z21)^{l−μ} (s z12 + z22)^{l+μ}`.
/// Zero outside `|ν|, |μ| ≤ l`.
pub fn t_coeff(l2: i64, nu2: i64, mu2: i64) -> Poly {
    if l2 < 0 || nu2.abs() > l2 || mu2.abs() > l2 || (l2 - nu2) % 2 != 0 || (l2 - mu2) % 2 != 0 {
        return Poly::zero();
    }
    type Cache = RwLock<HashMap<(i64, i64, i64), Poly>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&(l2, nu2, mu2)) {
        return p.clone();
    }
    let a_pow = ((l2 - mu2) / 2) as u32;
    let b_pow = ((l2 + mu2) / 2) as u32;
    let target = ((l2 - nu2) / 2) as u32;
    let mut p = Poly::zero();
    for a in target.saturating_sub(b_pow)..=a_pow.min(target) {
        let b = target - a;
        let c = binomial(a_pow, a) * binomial(b_pow, b);
        p.add_term([a, b, a_pow - a, b_pow - b], &Q::from_int(c));
    }
    cache.write().unwrap().insert((l2, nu2, mu2), p.clone());
    p
}

/// `N(Z)⁻¹ · t^l_{ν,μ}(Z⁻¹) = t^l_{ν,μ}(Z⁺) · N^{−(2l+1)}`.
pub fn t_coeff_inverted(l2: i64, nu2: i64, mu2: i64) -> LaurentFn {
    let t = t_coeff(l2, nu2, mu2);
    if t.is_zero() {
        return LaurentFn::zero();
    }
    LaurentFn::new(
        t.permute_vars([3, 1, 2, 0], [1, -1, -1, 1]),
        (l2 + 1) as u32,
    )
}

fn rank(n: usize) -> TensorRank {
    TensorRank::new(n).expect("rank validated by BasisIndex")
}

/// Applies `∂_{a}^{n−j} ∂_{b}^{j}` to `t` for `j = 0..=n`.
fn mixed_partials(t: &LaurentFn, n: usize, a: (usize, usize), b: (usize, usize)) -> Vec<LaurentFn> {
    (0..=n)
        .map(|j| {
            let mut f = t.clone();
            for _ in 0..(n - j) {
                f = f.partial(a.0, a.1);
            }
            for _ in 0..j {
                f = f.partial(b.0, b.1);
            }
            f
        })
        .collect()
}

/// Component `I` of a symmetric tensor whose value depends on the number of
/// `1`-bits of `I` only.
fn by_popcount(side: Side, n: usize, vals: &[LaurentFn]) -> TensorFn {
    let comps = (0..1usize << n)
        .map(|i| vals[i.count_ones() as usize].clone())
        .collect();
    TensorFn::new(side, rank(n), comps).expect("length 2^n")
}

/// First displayed form of `F`: `∂11`/`∂12` per slot on `t^{l+n/2}_{ν−n/2, μ}`.
pub fn f_direct(n: usize, l2: i64, mu2: i64, nu2: i64) -> TensorFn {
    let n2 = n as i64;
    let t = LaurentFn::poly(t_coeff(l2 + n2, nu2 - n2, mu2));
    by_popcount(Side::Column, n, &mixed_partials(&t, n, (0, 0), (0, 1)))
}

/// Second displayed form of `F`: `∂21`/`∂22` per slot on `t^{l+n/2}_{ν+n/2, μ}`.
pub fn f_direct_alt(n: usize, l2: i64, mu2: i64, nu2: i64) -> TensorFn {
    let n2 = n as i64;
    let t = LaurentFn::poly(t_coeff(l2 + n2, nu2 + n2, mu2));
    by_popcount(Side::Column, n, &mixed_partials(&t, n, (1, 0), (1, 1)))
}

fn factorial_ratio(lo: i64, n: i64) -> Q {
    // lo! / (lo + n)!
    let den: i64 = (lo + 1..=lo + n).product();
    Q::from_ratio(1, den)
}

/// `G` from its direct definition with the `(l−ν)!/(l−ν+n)!` prefactor.
pub fn g_direct(n: usize, l2: i64, mu2: i64, nu2: i64) -> TensorFn {
    let n2 = n as i64;
    let t = LaurentFn::poly(t_coeff(l2 + n2, mu2, nu2 - n2));
    let pre = factorial_ratio((l2 - nu2) / 2, n2);
    let vals: Vec<LaurentFn> = mixed_partials(&t, n, (0, 0), (1, 0))
        .iter()
        .map(|f| f.scale(&pre))
        .collect();
    by_popcount(Side::Row, n, &vals)
}

/// The explicit `n = 1` forms.
pub fn explicit_n1(family: Family, l2: i64, mu2: i64, nu2: i64) -> TensorFn {
    let t = |l2, a, b| LaurentFn::poly(t_coeff(l2, a, b));
    let ti = t_coeff_inverted;
    let half = |x: i64| Q::from_ratio(x, 2);
    let comps = match family {
        Family::F => vec![
            t(l2, nu2, mu2 + 1).scale(&half(l2 - mu2 + 1)),
            t(l2, nu2, mu2 - 1).scale(&half(l2 + mu2 + 1)),
        ],
        Family::G => vec![t(l2, mu2 + 1, nu2), t(l2, mu2 - 1, nu2)],
        Family::Fp => vec![
            ti(l2 + 1, nu2 - 1, mu2).scale(&half(l2 - nu2 + 2)),
            ti(l2 + 1, nu2 + 1, mu2).scale(&half(l2 + nu2 + 2)),
        ],
        Family::Gp => vec![ti(l2 + 1, mu2, nu2 - 1), ti(l2 + 1, mu2, nu2 + 1)],
    };
    TensorFn::new(family.side(), rank(1), comps).expect("two components")
}

/// Stacks two rank-`n` functions as the low/high halves of a rank-`n+1` one.
fn stack(lo: &TensorFn, hi: &TensorFn) -> TensorFn {
    let mut comps = lo.comps.clone();
    comps.extend(hi.comps.iter().cloned());
    TensorFn::new(lo.side, rank(lo.n() + 1), comps).expect("doubled length")
}

fn stack_partials(f: &TensorFn, lo: (usize, usize), hi: (usize, usize), sign: &Q) -> TensorFn {
    stack(
        &f.map(|c| c.partial(lo.0, lo.1).scale(sign)),
        &f.map(|c| c.partial(hi.0, hi.1).scale(sign)),
    )
}

fn member_or_zero(family: Family, n: usize, l2: i64, mu2: i64, nu2: i64) -> Result<Arc<TensorFn>> {
    match BasisIndex::new(family, n, l2, mu2, nu2) {
        Ok(idx) => basis(&idx),
        Err(_) => Ok(Arc::new(TensorFn::zero(family.side(), rank(n)))),
    }
}

/// `F′^{(n)}` from `F′^{(n−1)}`: the `(∂11, ∂12)` branch shifts `μ` by `+½`,
/// the `(∂21, ∂22)` branch by `−½`; `None` when the source is out of range.
pub fn fp_from_branch(idx: &BasisIndex, upper: bool) -> Result<Option<TensorFn>> {
    let (n, l2, mu2, nu2) = (idx.n, idx.l.0, idx.mu.0, idx.nu.0);
    let src_mu = if upper { mu2 + 1 } else { mu2 - 1 };
    let Ok(src) = BasisIndex::new(Family::Fp, n - 1, l2, src_mu, nu2) else {
        return Ok(None);
    };
    let prev = basis(&src)?;
    let minus = Q::from_int(-1);
    Ok(Some(if upper {
        stack_partials(&prev, (0, 0), (0, 1), &minus)
    } else {
        stack_partials(&prev, (1, 0), (1, 1), &minus)
    }))
}

fn build(idx: &BasisIndex) -> Result<TensorFn> {
    let (n, l2, mu2, nu2) = (idx.n, idx.l.0, idx.mu.0, idx.nu.0);
    Ok(match idx.family {
        Family::F => f_direct(n, l2, mu2, nu2),
        Family::G => g_direct(n, l2, mu2, nu2),
        Family::Fp if n == 1 => explicit_n1(Family::Fp, l2, mu2, nu2),
        Family::Gp if n == 1 => explicit_n1(Family::Gp, l2, mu2, nu2),
        Family::Fp => match fp_from_branch(idx, true)? {
            Some(f) => f,
            None => fp_from_branch(idx, false)?.expect("one branch is always in range"),
        },
        Family::Gp => {
            let lo = basis(&BasisIndex::new(Family::Gp, n - 1, l2 + 1, mu2, nu2 - 1)?)?;
            let hi = basis(&BasisIndex::new(Family::Gp, n - 1, l2 + 1, mu2, nu2 + 1)?)?;
            stack(&lo, &hi)
        }
    })
}

/// The family member at `idx`, memoized.
pub fn basis(idx: &BasisIndex) -> Result<Arc<TensorFn>> {
    type Cache = RwLock<HashMap<BasisIndex, Arc<TensorFn>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.read().unwrap().get(idx) {
        return Ok(f.clone());
    }
    let f = Arc::new(build(idx)?);
    cache
        .write()
        .unwrap()
        .entry(*idx)
        .or_insert_with(|| f.clone());
    Ok(f)
}

pub fn f_basis(n: usize, l2: i64, mu2: i64, nu2: i64) -> Result<Arc<TensorFn>> {
    basis(&BasisIndex::new(Family::F, n, l2, mu2, nu2)?)
}

pub fn g_basis(n: usize, l2: i64, mu2: i64, nu2: i64) -> Result<Arc<TensorFn>> {
    basis(&BasisIndex::new(Family::G, n, l2, mu2, nu2)?)
}

pub fn fp_basis(n: usize, l2: i64, mu2: i64, nu2: i64) -> Result<Arc<TensorFn>> {
    basis(&BasisIndex::new(Family::Fp, n, l2, mu2, nu2)?)
}

pub fn gp_basis(n: usize, l2: i64, mu2: i64, nu2: i64) -> Result<Arc<TensorFn>> {
    basis(&BasisIndex::new(Family::Gp, n, l2, mu2, nu2)?)
}

/// One recursion comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionMismatch {
    pub index: BasisIndex,
    pub what: &'static str,
    pub expected: TensorFn,
    pub got: TensorFn,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecursionReport {
    pub checked: usize,
    pub mismatches: Vec<RecursionMismatch>,
}

impl RecursionReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn compare(
        &mut self,
        index: BasisIndex,
        what: &'static str,
        expected: &TensorFn,
        got: TensorFn,
    ) {
        self.checked += 1;
        if *expected != got {
            self.mismatches.push(RecursionMismatch {
                index,
                what,
                expected: expected.clone(),
                got,
            });
        }
    }
}

/// Compares the `n → n+1` recursions with the rank-`n+1` members, `2l ≤ l2_max`.
///
/// For `F` and `G` the recursion is checked against the direct definition
/// (for `F` both recursion variants and both direct forms). `F′` and `G′` are
/// defined by recursion, so for `F′` the two branches are compared wherever
/// both apply and for `G′` the rank-1 base is compared with the explicit forms.
pub fn recursion_check(family: Family, n: usize, l2_max: i64) -> Result<RecursionReport> {
    let mut rep = RecursionReport::default();
    let up = n + 1;
    TensorRank::new(up)?;
    for idx in members(family, up, l2_max) {
        let (l2, mu2, nu2) = (idx.l.0, idx.mu.0, idx.nu.0);
        let target = basis(&idx)?;
        match family {
            Family::F => {
                let one = Q::from_int(1);
                let a = f_basis(n, l2 + 1, mu2, nu2 - 1)?;
                rep.compare(
                    idx,
                    "(d11, d12) recursion",
                    &target,
                    stack_partials(&a, (0, 0), (0, 1), &one),
                );
                let b = f_basis(n, l2 + 1, mu2, nu2 + 1)?;
                rep.compare(
                    idx,
                    "(d21, d22) recursion",
                    &target,
                    stack_partials(&b, (1, 0), (1, 1), &one),
                );
                rep.compare(
                    idx,
                    "second direct form",
                    &target,
                    f_direct_alt(up, l2, mu2, nu2),
                );
            }
            Family::G => {
                let a = member_or_zero(Family::G, n, l2, mu2 + 1, nu2)?;
                let b = member_or_zero(Family::G, n, l2, mu2 - 1, nu2)?;
                rep.compare(idx, "concatenation recursion", &target, stack(&a, &b));
            }
            Family::Fp => {
                if let (Some(a), Some(b)) =
                    (fp_from_branch(&idx, true)?, fp_from_branch(&idx, false)?)
                {
                    rep.compare(idx, "branch agreement", &a, b);
                }
            }
            Family::Gp => {
                let a = basis(&BasisIndex::new(Family::Gp, n, l2 + 1, mu2, nu2 - 1)?)?;
                let b = basis(&BasisIndex::new(Family::Gp, n, l2 + 1, mu2, nu2 + 1)?)?;
                rep.compare(idx, "concatenation recursion", &target, stack(&a, &b));
            }
        }
    }
    if n == 1 {
        for idx in members(family, 1, l2_max) {
            let e = explicit_n1(family, idx.l.0, idx.mu.0, idx.nu.0);
            rep.compare(idx, "explicit rank-one form", &e, (*basis(&idx)?).clone());
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffops::{is_n_regular, laplacian};

    fn z(r: usize, c: usize) -> Poly {
        Poly::z(r, c)
    }

    #[test]
    fn matrix_coefficients() {
        assert_eq!(t_coeff(0, 0, 0), Poly::one());
        assert_eq!(t_coeff(1, -1, -1), z(0, 0));
        assert_eq!(t_coeff(1, -1, 1), z(0, 1));
        assert_eq!(t_coeff(1, 1, -1), z(1, 0));
        assert_eq!(t_coeff(1, 1, 1), z(1, 1));
        assert_eq!(
            t_coeff(2, 0, 0),
            z(0, 0).mul(&z(1, 1)).add(&z(0, 1).mul(&z(1, 0)))
        );
        assert!(t_coeff(2, 4, 0).is_zero());
    }

    #[test]
    fn harmonic_coefficients() {
        for l2 in 0..=4 {
            for nu2 in (-l2..=l2).step_by(2) {
                for mu2 in (-l2..=l2).step_by(2) {
                    let t = LaurentFn::poly(t_coeff(l2, nu2, mu2));
                    assert!(laplacian(&t).is_zero());
                    assert_eq!(t.homogeneous_degree(), Some(l2));
                    let ti = t_coeff_inverted(l2, nu2, mu2);
                    assert!(laplacian(&ti).is_zero());
                    assert_eq!(ti.homogeneous_degree(), Some(-l2 - 2));
                }
            }
        }
        assert_eq!(t_coeff_inverted(0, 0, 0), LaurentFn::norm_power(-1));
        assert_eq!(
            t_coeff_inverted(1, -1, -1),
            LaurentFn::z(1, 1).mul(&LaurentFn::norm_power(-2))
        );
    }

    #[test]
    fn index_ranges() {
        for n in 1..=3 {
            for l2 in 0..=3 {
                let count = index_pairs(n, l2).len() as i64;
                assert_eq!(count, (l2 + 1) * (l2 + n as i64 + 1));
            }
        }
        assert!(BasisIndex::new(Family::F, 1, 0, 1, 0).is_ok());
        assert!(BasisIndex::new(Family::F, 1, 0, 0, 0).is_err());
        assert!(BasisIndex::new(Family::F, 1, 0, 3, 0).is_err());
        assert!(BasisIndex::new(Family::F, 5, 0, 1, 0).is_err());
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt(3));
        assert_eq!("2".parse::<HalfInt>().unwrap(), HalfInt(4));
        assert_eq!(HalfInt(-3).to_string(), "-3/2");
    }

    #[test]
    fn low_members() {
        let f = f_basis(1, 0, -1, 0).unwrap();
        assert_eq!(f.comps, vec![LaurentFn::one(), LaurentFn::zero()]);
        let g0 = g_basis(1, 0, -1, 0).unwrap();
        let g1 = g_basis(1, 0, 1, 0).unwrap();
        assert_eq!(g0.comps, vec![LaurentFn::one(), LaurentFn::zero()]);
        assert_eq!(g1.comps, vec![LaurentFn::zero(), LaurentFn::one()]);
        // n = 2, l = 0: constant symmetric tensors spanning three dimensions
        let consts: Vec<Vec<Q>> = index_pairs(2, 0)
            .into_iter()
            .map(|(mu2, nu2)| {
                let f = f_basis(2, 0, mu2, nu2).unwrap();
                assert!(f.is_symmetric());
                f.comps
                    .iter()
                    .map(|c| {
                        assert!(c.degrees().iter().all(|&d| d == 0));
                        c.numerator().coeff(&[0; 4])
                    })
                    .collect()
            })
            .collect();
        assert_eq!(crate::tensor::rank_of(&consts), 3);
        let fp = fp_basis(2, 0, 0, 0).unwrap();
        // -(2l + n + 2) at l = 0, n = 2
        assert_eq!(fp.homogeneous_degree(), Some(-4));
    }

    #[test]
    fn recursions() {
        for fam in Family::ALL {
            let r = recursion_check(fam, 1, 3).unwrap();
            assert!(
                r.ok(),
                "{fam:?}: {:?}",
                r.mismatches.first().map(|m| (m.index, m.what))
            );
            assert!(r.checked > 0);
        }
        for fam in [Family::F, Family::G, Family::Fp, Family::Gp] {
            let r = recursion_check(fam, 2, 1).unwrap();
            assert!(
                r.ok(),
                "{fam:?}: {:?}",
                r.mismatches.first().map(|m| (m.index, m.what))
            );
        }
    }

    #[test]
    fn rank_two_members_are_regular() {
        for fam in Family::ALL {
            for idx in members(fam, 2, 2) {
                let f = basis(&idx).unwrap();
                let r = is_n_regular(&f);
                assert!(r.regular && r.symmetric, "{idx}");
                assert_eq!(f.homogeneous_degree(), Some(idx.degree()), "{idx}");
            }
        }
    }
}
