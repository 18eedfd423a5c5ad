//! Actions of `gl(2, H_C)` and of a few group elements on the Laurent
//! class, the conjugation `σ`, and the representation-theoretic checks.
//!
//! A Lie algebra element is a block matrix `(A B; C D)` of biquaternions.
//! Group elements `h` are written as in the action formulas, with
//! `h⁻¹ = (a b; c d)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::basis::{basis, index_pairs, BasisIndex, Family, HalfInt};
use crate::diffops::{is_n_regular, nabla_plus_slot};
use crate::error::{Error, Result};
use crate::func::{const_matrix, matrix_mul, norm_pow, z_matrix, LaurentFn, TensorFn};
use crate::kernel::{
    bilinear_pairing, inner_product_f, inner_product_g, integrate_contraction, left_data,
    right_data,
};
use crate::poly::{var, Exps, Poly};
use crate::quat::Biquaternion;
use crate::scalar::GaussianRational;
use crate::tensor::{rank_of, Side, TensorRank};

type Q = GaussianRational;
type FnMatrix = [[LaurentFn; 2]; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlElement {
    pub a: Biquaternion,
    pub b: Biquaternion,
    pub c: Biquaternion,
    pub d: Biquaternion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    A,
    B,
    C,
    D,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::A, Block::B, Block::C, Block::D];

    pub fn name(self) -> &'static str {
        match self {
            Block::A => "A",
            Block::B => "B",
            Block::C => "C",
            Block::D => "D",
        }
    }
}

impl GlElement {
    pub fn zero() -> Self {
        let z = Biquaternion::zero();
        Self {
            a: z.clone(),
            b: z.clone(),
            c: z.clone(),
            d: z,
        }
    }

    /// The element with `m` in one block and zeros elsewhere.
    pub fn block(which: Block, m: Biquaternion) -> Self {
        let mut x = Self::zero();
        match which {
            Block::A => x.a = m,
            Block::B => x.b = m,
            Block::C => x.c = m,
            Block::D => x.d = m,
        }
        x
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            a: self.a.scale(s),
            b: self.b.scale(s),
            c: self.c.scale(s),
            d: self.d.scale(s),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let p = |x: &Biquaternion, y: &Biquaternion, u: &Biquaternion, v: &Biquaternion| {
            &(x * y) + &(u * v)
        };
        Self {
            a: p(&self.a, &o.a, &self.b, &o.c),
            b: p(&self.a, &o.b, &self.b, &o.d),
            c: p(&self.c, &o.a, &self.d, &o.c),
            d: p(&self.c, &o.b, &self.d, &o.d),
        }
    }

    /// `[X, Y] = XY − YX`.
    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self).scale(&-Q::one()))
    }

    /// `(A B; B* D)` with `A = −A*`, `D = −D*`.
    pub fn is_u22(&self) -> bool {
        let skew = |m: &Biquaternion| (m + &m.star()).is_zero();
        skew(&self.a) && skew(&self.d) && self.c == self.b.star()
    }
}

/// The 16 generators: each block filled with one matrix unit `E_rc`.
pub fn one_block_generators() -> Vec<(String, GlElement)> {
    let mut out = Vec::new();
    for b in Block::ALL {
        for r in 0..2 {
            for c in 0..2 {
                out.push((
                    format!("{}[E{}{}]", b.name(), r + 1, c + 1),
                    GlElement::block(b, Biquaternion::unit(r, c)),
                ));
            }
        }
    }
    out
}

/// A real basis of `u(2,2)`: skew-Hermitian `A` and `D` (spanned by
/// `i·e0, e1, e2, e3`) and `(0 B; B* 0)` with `B ∈ {e_k, i·e_k}`.
pub fn u22_generators() -> Vec<(String, GlElement)> {
    let mut skew = vec![("i*e0".to_string(), Biquaternion::e(0).scale(&Q::i()))];
    for k in 1..4 {
        skew.push((format!("e{k}"), Biquaternion::e(k)));
    }
    let mut out = Vec::new();
    for (name, m) in &skew {
        out.push((format!("A[{name}]"), GlElement::block(Block::A, m.clone())));
        out.push((format!("D[{name}]"), GlElement::block(Block::D, m.clone())));
    }
    for k in 0..4 {
        for (tag, s) in [("", Q::one()), ("i*", Q::i())] {
            let b = Biquaternion::e(k).scale(&s);
            let x = GlElement {
                c: b.star(),
                b,
                ..GlElement::zero()
            };
            out.push((format!("B[{tag}e{k}]"), x));
        }
    }
    out
}

// ------------------------------------------------------------ algebra action

/// `Σ_ij M_ij ∂_ij f`, i.e. `Tr(M∂) f`.
fn trace_d(m: &FnMatrix, f: &LaurentFn) -> LaurentFn {
    let mut acc = LaurentFn::zero();
    for (r, row) in m.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            if !e.is_zero() {
                acc = acc.add(&e.mul(&f.partial(r, c)));
            }
        }
    }
    acc
}

fn fn_trace(m: &FnMatrix) -> LaurentFn {
    m[0][0].add(&m[1][1])
}

fn vector_field(f: &TensorFn, m: &FnMatrix) -> TensorFn {
    f.map(|c| trace_d(m, c))
}

fn slot_sum(f: &TensorFn, m: &FnMatrix) -> TensorFn {
    (1..=f.n()).fold(TensorFn::zero(f.side, f.rank), |acc, k| {
        acc.add(&f.slot_mul(m, k).expect("slot in range"))
            .expect("same shape")
    })
}

fn sum(parts: Vec<TensorFn>) -> TensorFn {
    let mut it = parts.into_iter();
    let first = it.next().expect("nonempty");
    it.fold(first, |acc, p| acc.add(&p).expect("same shape"))
}

/// `π_nl(X) f` for a column function.
pub fn act_algebra_left(x: &GlElement, f: &TensorFn) -> Result<TensorFn> {
    if f.side != Side::Column {
        return Err(Error::SideMismatch { expected: "column" });
    }
    let z = z_matrix();
    let neg = -Q::one();
    let mut parts = Vec::new();
    if !x.a.is_zero() {
        let az = matrix_mul(&const_matrix(&x.a), &z);
        parts.push(vector_field(f, &az).scale(&neg));
    }
    if !x.b.is_zero() {
        parts.push(vector_field(f, &const_matrix(&x.b)).scale(&neg));
    }
    if !x.c.is_zero() {
        let cz = matrix_mul(&const_matrix(&x.c), &z);
        let zcz = matrix_mul(&z, &cz);
        parts.push(vector_field(f, &zcz));
        parts.push(f.mul_scalar_fn(&fn_trace(&cz)));
        parts.push(slot_sum(f, &cz));
    }
    if !x.d.is_zero() {
        let dm = const_matrix(&x.d);
        parts.push(vector_field(f, &matrix_mul(&z, &dm)));
        parts.push(f.scale(&x.d.trace()));
        parts.push(slot_sum(f, &dm));
    }
    Ok(if parts.is_empty() {
        TensorFn::zero(f.side, f.rank)
    } else {
        sum(parts)
    })
}

/// `π_nr(X) g` for a row function.
pub fn act_algebra_right(x: &GlElement, g: &TensorFn) -> Result<TensorFn> {
    if g.side != Side::Row {
        return Err(Error::SideMismatch { expected: "row" });
    }
    let z = z_matrix();
    let neg = -Q::one();
    let mut parts = Vec::new();
    if !x.a.is_zero() {
        let am = const_matrix(&x.a);
        let az = matrix_mul(&am, &z);
        parts.push(vector_field(g, &az).scale(&neg));
        parts.push(g.scale(&-x.a.trace()));
        parts.push(slot_sum(g, &am).scale(&neg));
    }
    if !x.b.is_zero() {
        parts.push(vector_field(g, &const_matrix(&x.b)).scale(&neg));
    }
    if !x.c.is_zero() {
        let zc = matrix_mul(&z, &const_matrix(&x.c));
        let zcz = matrix_mul(&zc, &z);
        parts.push(vector_field(g, &zcz));
        parts.push(g.mul_scalar_fn(&fn_trace(&zc)));
        parts.push(slot_sum(g, &zc));
    }
    if !x.d.is_zero() {
        parts.push(vector_field(g, &matrix_mul(&z, &const_matrix(&x.d))));
    }
    Ok(if parts.is_empty() {
        TensorFn::zero(g.side, g.rank)
    } else {
        sum(parts)
    })
}

/// `π(X)` on the side the function lives on.
pub fn act_algebra(x: &GlElement, f: &TensorFn) -> Result<TensorFn> {
    match f.side {
        Side::Column => act_algebra_left(x, f),
        Side::Row => act_algebra_right(x, f),
    }
}

// --------------------------------------------------------------- group action

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    /// `h = diag(a′, d′)`
    Diagonal(Biquaternion, Biquaternion),
    /// `h = (1 b′; 0 1)`
    Translation(Biquaternion),
    /// `h = (0 1; 1 0)`
    Inversion,
}

/// Linear forms of the entries of `aZb`, as polynomials in `Z`.
fn sandwich_forms(a: &Biquaternion, b: &Biquaternion) -> [Poly; 4] {
    let mut forms: [Poly; 4] = Default::default();
    for r in 0..2 {
        for c in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    let coef = a.entry(r, p) * b.entry(q, c);
                    let mut e: Exps = [0; 4];
                    e[var(p, q)] = 1;
                    forms[var(r, c)].add_term(e, &coef);
                }
            }
        }
    }
    forms
}

fn substitute_sandwich(f: &TensorFn, a: &Biquaternion, b: &Biquaternion) -> Result<TensorFn> {
    let forms = sandwich_forms(a, b);
    let nf = &a.norm() * &b.norm();
    f.try_map(|c| c.substitute(&forms, &nf))
}

fn translate(f: &TensorFn, b: &Biquaternion) -> Result<TensorFn> {
    if f.comps.iter().any(|c| !c.is_polynomial()) {
        return Err(Error::NotLaurentClass(
            "translations are applied to polynomial functions only".into(),
        ));
    }
    let mut forms: [Poly; 4] = Default::default();
    for r in 0..2 {
        for c in 0..2 {
            forms[var(r, c)] = Poly::z(r, c).sub(&Poly::constant(b.entry(r, c).clone()));
        }
    }
    f.try_map(|c| c.substitute(&forms, &Q::one()))
}

/// `Z⁻¹` as a matrix of Laurent functions.
fn inverse_matrix() -> FnMatrix {
    let inv = LaurentFn::norm_power(-1);
    let e = |r, c, s: i64| LaurentFn::z(r, c).mul(&inv).scale(&Q::from_int(s));
    [[e(1, 1, 1), e(0, 1, -1)], [e(1, 0, -1), e(0, 0, 1)]]
}

/// `π_nl(h) f`.
pub fn act_group_left(h: &GroupElement, f: &TensorFn) -> Result<TensorFn> {
    if f.side != Side::Column {
        return Err(Error::SideMismatch { expected: "column" });
    }
    match h {
        GroupElement::Diagonal(a1, d1) => {
            // d′^{⊗n} N(d′) f(a′⁻¹ Z d′)
            let moved = substitute_sandwich(f, &a1.invert()?, d1)?;
            if !d1.is_invertible() {
                return Err(Error::NonInvertible);
            }
            Ok(moved.all_slots_mul(&const_matrix(d1)).scale(&d1.norm()))
        }
        GroupElement::Translation(b) => translate(f, b),
        GroupElement::Inversion => {
            // Z^{-1⊗n} N(Z)⁻¹ f(Z⁻¹)
            let moved = f.map(LaurentFn::compose_inverse);
            Ok(moved
                .all_slots_mul(&inverse_matrix())
                .mul_scalar_fn(&LaurentFn::norm_power(-1)))
        }
    }
}

/// `π_nr(h) g`.
pub fn act_group_right(h: &GroupElement, g: &TensorFn) -> Result<TensorFn> {
    if g.side != Side::Row {
        return Err(Error::SideMismatch { expected: "row" });
    }
    match h {
        GroupElement::Diagonal(a1, d1) => {
            // g(a′⁻¹ Z d′) a′^{-1⊗n} / N(a′)
            let a_inv = a1.invert()?;
            if !d1.is_invertible() {
                return Err(Error::NonInvertible);
            }
            let moved = substitute_sandwich(g, &a_inv, d1)?;
            let s = a1.norm().checked_inv()?;
            Ok(moved.all_slots_mul(&const_matrix(&a_inv)).scale(&s))
        }
        GroupElement::Translation(b) => translate(g, b),
        GroupElement::Inversion => {
            // (−1)ⁿ g(Z⁻¹) Z^{-1⊗n} N(Z)⁻¹
            let moved = g.map(LaurentFn::compose_inverse);
            let sign = if g.n().is_multiple_of(2) {
                Q::one()
            } else {
                -Q::one()
            };
            Ok(moved
                .all_slots_mul(&inverse_matrix())
                .mul_scalar_fn(&LaurentFn::norm_power(-1))
                .scale(&sign))
        }
    }
}

pub fn act_group(h: &GroupElement, f: &TensorFn) -> Result<TensorFn> {
    match f.side {
        Side::Column => act_group_left(h, f),
        Side::Row => act_group_right(h, f),
    }
}

/// `σ(f)(Z) = f⁺(Z*)`, exchanging column and row functions.
pub fn sigma(f: &TensorFn) -> TensorFn {
    f.conj_dagger()
}

// ------------------------------------------------------------------- checks

/// `π(X) f` is still n-regular on its side.
pub fn regularity_preservation_check(x: &GlElement, f: &TensorFn) -> Result<bool> {
    Ok(is_n_regular(&act_algebra(x, f)?).regular)
}

/// `⟨π_nl(X) f, g⟩ + ⟨f, π_nr(X) g⟩ = 0`.
pub fn pairing_invariance_check(x: &GlElement, f: &TensorFn, g: &TensorFn) -> Result<bool> {
    let lhs = bilinear_pairing(&act_algebra_left(x, f)?, g)?;
    let rhs = bilinear_pairing(f, &act_algebra_right(x, g)?)?;
    Ok((&lhs + &rhs).is_zero())
}

/// `σ ∘ π_nl(X) = π_nr(X̃) ∘ σ` for `X` supported on the `B` or `C` block,
/// where `X̃` carries the adjoint of that block.
pub fn sigma_intertwine_check(x: &GlElement, f: &TensorFn) -> Result<bool> {
    if !x.a.is_zero() || !x.d.is_zero() || (!x.b.is_zero() && !x.c.is_zero()) {
        return Err(Error::IndexOutOfRange(
            "expected an element supported on the B or C block".into(),
        ));
    }
    let adj = GlElement {
        b: x.b.star(),
        c: x.c.star(),
        ..GlElement::zero()
    };
    Ok(sigma(&act_algebra_left(x, f)?) == act_algebra_right(&adj, &sigma(f))?)
}

// ------------------------------------------------------------------- spaces

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    FPlus,
    FMinus,
    GPlus,
    GMinus,
}

impl Space {
    pub const ALL: [Space; 4] = [Space::FPlus, Space::FMinus, Space::GPlus, Space::GMinus];

    pub fn name(self) -> &'static str {
        match self {
            Space::FPlus => "F+",
            Space::FMinus => "F-",
            Space::GPlus => "G+",
            Space::GMinus => "G-",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Space::FPlus => Family::F,
            Space::FMinus => Family::Fp,
            Space::GPlus => Family::G,
            Space::GMinus => Family::Gp,
        }
    }

    pub fn side(self) -> Side {
        self.family().side()
    }

    pub fn is_plus(self) -> bool {
        matches!(self, Space::FPlus | Space::GPlus)
    }

    /// Degree of the block at level `2l = l2`.
    pub fn degree(self, n: usize, l2: i64) -> i64 {
        if self.is_plus() {
            l2
        } else {
            -l2 - n as i64 - 2
        }
    }

    /// Level of a degree, `None` when the degree is outside the space.
    pub fn level(self, n: usize, d: i64) -> Option<i64> {
        let l2 = if self.is_plus() { d } else { -d - n as i64 - 2 };
        (l2 >= 0).then_some(l2)
    }
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Space::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown space {s:?}")))
    }
}

/// Basis vectors of the degree block at level `l2`.
pub fn block_members(space: Space, n: usize, l2: i64) -> Result<Vec<BasisIndex>> {
    index_pairs(n, l2)
        .into_iter()
        .map(|(mu2, nu2)| BasisIndex::new(space.family(), n, l2, mu2, nu2))
        .collect()
}

/// Coefficient vectors over a shared monomial list, after clearing
/// denominators with a common power of `N`.
fn coefficient_vectors(fs: &[&[LaurentFn]]) -> Vec<Vec<Q>> {
    let k = fs
        .iter()
        .flat_map(|f| f.iter().map(LaurentFn::denom_power))
        .max()
        .unwrap_or(0);
    let cleared: Vec<Vec<Poly>> = fs
        .iter()
        .map(|f| {
            f.iter()
                .map(|c| c.numerator().mul(&norm_pow(k - c.denom_power())))
                .collect()
        })
        .collect();
    let mut keys: BTreeMap<(usize, Exps), usize> = BTreeMap::new();
    for f in &cleared {
        for (i, p) in f.iter().enumerate() {
            for (e, _) in p.terms() {
                let next = keys.len();
                keys.entry((i, *e)).or_insert(next);
            }
        }
    }
    cleared
        .iter()
        .map(|f| {
            let mut v = vec![Q::zero(); keys.len()];
            for (i, p) in f.iter().enumerate() {
                for (e, c) in p.terms() {
                    v[keys[&(i, *e)]] = c.clone();
                }
            }
            v
        })
        .collect()
}

pub fn span_dimension(fs: &[TensorFn]) -> usize {
    let comps: Vec<&[LaurentFn]> = fs.iter().map(|f| f.comps.as_slice()).collect();
    rank_of(&coefficient_vectors(&comps))
}

/// Dimension of the space of homogeneous degree-`d` polynomial functions
/// with symmetric values that are n-regular on `side`, computed directly as a
/// kernel of `∇⁺` without reference to any basis.
pub fn regular_polynomial_dimension(side: Side, n: usize, d: u32) -> Result<usize> {
    let rank = TensorRank::new(n)?;
    let monos: Vec<Exps> = all_monomials(d);
    // a symmetric tensor is determined by its entry at each weight 0..=n
    let mut unknowns = Vec::new();
    for w in 0..=n {
        for e in &monos {
            let mut f = TensorFn::zero(side, rank);
            for (idx, c) in f.comps.iter_mut().enumerate() {
                if idx.count_ones() as usize == w {
                    *c = LaurentFn::poly(Poly::monomial(*e, Q::one()));
                }
            }
            unknowns.push(f);
        }
    }
    // columns of the linear map: ∇⁺ in every slot applied to each unknown
    let images: Vec<Vec<LaurentFn>> = unknowns
        .iter()
        .map(|u| {
            (1..=n)
                .flat_map(|k| nabla_plus_slot(u, k).expect("slot in range").comps)
                .collect()
        })
        .collect();
    let refs: Vec<&[LaurentFn]> = images.iter().map(Vec::as_slice).collect();
    let vecs = coefficient_vectors(&refs);
    Ok(unknowns.len() - rank_of(&vecs))
}

fn all_monomials(d: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            for c in 0..=d - a - b {
                out.push([a, b, c, d - a - b - c]);
            }
        }
    }
    out
}

/// `λ = 3/5 + 4/5 i` on the unit circle.
pub fn torus_parameter() -> Q {
    Q::from_parts((3, 5), (4, 5))
}

/// `diag(1, diag(λ, λ⁻¹))`.
pub fn torus_element(lambda: &Q) -> Result<GroupElement> {
    let inv = lambda.checked_inv()?;
    Ok(GroupElement::Diagonal(
        Biquaternion::one(),
        Biquaternion::new(lambda.clone(), Q::zero(), Q::zero(), inv),
    ))
}

/// One row of the K-type census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTypeRow {
    pub space: Space,
    pub n: usize,
    pub degree: i64,
    pub l: HalfInt,
    pub expected_dim: usize,
    pub span_dim: usize,
    /// Basis-free dimension, available for the polynomial spaces.
    pub kernel_dim: Option<usize>,
    /// Members regular, of the right degree, and `F` members torus weight vectors.
    pub members_ok: bool,
    /// The torus element acts on the lowest-`μ` vectors by `λ^{2l+n}`.
    pub lowest_weight_ok: Option<bool>,
}

impl KTypeRow {
    pub fn ok(&self) -> bool {
        self.span_dim == self.expected_dim
            && self.kernel_dim.is_none_or(|k| k == self.expected_dim)
            && self.members_ok
            && self.lowest_weight_ok != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTypeCensus {
    pub space: Space,
    pub n: usize,
    pub rows: Vec<KTypeRow>,
    /// Degrees between the two supports at which a direct computation found
    /// no regular polynomial functions (negative degrees are empty by
    /// construction of the polynomial class).
    pub gap_degrees_empty: bool,
}

impl KTypeCensus {
    pub fn ok(&self) -> bool {
        self.gap_degrees_empty && self.rows.iter().all(KTypeRow::ok)
    }
}

pub fn ktype_census(space: Space, n: usize, l2_max: i64) -> Result<KTypeCensus> {
    let lambda = torus_parameter();
    let torus = torus_element(&lambda)?;
    let mut rows = Vec::new();
    for l2 in 0..=l2_max {
        let idxs = block_members(space, n, l2)?;
        let fs: Vec<TensorFn> = idxs
            .iter()
            .map(|i| basis(i).map(|f| (*f).clone()))
            .collect::<Result<_>>()?;
        let degree = space.degree(n, l2);
        let mut members_ok = true;
        for (idx, f) in idxs.iter().zip(&fs) {
            members_ok &= f.homogeneous_degree() == Some(degree)
                && is_n_regular(f).regular
                && f.is_symmetric();
            if space == Space::FPlus {
                // weight λ^{−2μ}
                let w = weight_power(&lambda, -idx.mu.0);
                members_ok &= act_group_left(&torus, f)? == f.scale(&w);
            }
        }
        let lowest_weight_ok = if space == Space::FPlus {
            let mut ok = true;
            for (idx, f) in idxs.iter().zip(&fs) {
                if idx.mu.0 == -(l2 + n as i64) {
                    let w = weight_power(&lambda, l2 + n as i64);
                    ok &= act_group_left(&torus, f)? == f.scale(&w);
                }
            }
            Some(ok)
        } else {
            None
        };
        let kernel_dim = if space.is_plus() {
            Some(regular_polynomial_dimension(space.side(), n, l2 as u32)?)
        } else {
            None
        };
        rows.push(KTypeRow {
            space,
            n,
            degree,
            l: HalfInt(l2),
            expected_dim: ((l2 + 1) * (l2 + n as i64 + 1)) as usize,
            span_dim: span_dimension(&fs),
            kernel_dim,
            members_ok,
            lowest_weight_ok,
        });
    }
    let gap_degrees_empty = if space.is_plus() {
        true
    } else {
        // the minus spaces are the inversion images of the plus spaces, whose
        // image degrees −(n+2) − d leave −1 … −(n+1) empty
        let plus = if space == Space::FMinus {
            Space::FPlus
        } else {
            Space::GPlus
        };
        let mut ok = true;
        for l2 in 0..=l2_max.min(2) {
            let fs: Vec<TensorFn> = block_members(plus, n, l2)?
                .iter()
                .map(|i| basis(i).and_then(|f| act_group(&GroupElement::Inversion, &f)))
                .collect::<Result<_>>()?;
            let own: Vec<TensorFn> = block_members(space, n, l2)?
                .iter()
                .map(|i| basis(i).map(|f| (*f).clone()))
                .collect::<Result<_>>()?;
            let mut both = fs.clone();
            both.extend(own.iter().cloned());
            let degree = space.degree(n, l2);
            ok &= fs
                .iter()
                .all(|f| f.is_zero() || f.homogeneous_degree() == Some(degree))
                && span_dimension(&fs) == own.len()
                && span_dimension(&both) == own.len();
        }
        ok
    };
    Ok(KTypeCensus {
        space,
        n,
        rows,
        gap_degrees_empty,
    })
}

fn weight_power(lambda: &Q, e: i64) -> Q {
    if e >= 0 {
        lambda.pow(e as u32)
    } else {
        lambda.checked_inv().expect("unit").pow((-e) as u32)
    }
}

/// Outcome of the generation check on one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationReport {
    pub space: Space,
    pub n: usize,
    pub degree: i64,
    pub down_required: bool,
    pub up_required: bool,
    /// Members with no nonzero image in the lower (resp. upper) degree.
    pub down_failures: Vec<BasisIndex>,
    pub up_failures: Vec<BasisIndex>,
    /// Images that left the space (wrong degree or not regular).
    pub stray_images: usize,
}

impl GenerationReport {
    pub fn ok(&self) -> bool {
        self.down_failures.is_empty() && self.up_failures.is_empty() && self.stray_images == 0
    }
}

/// Every basis vector of degree `d` reaches degree `d − 1` through some
/// `B`-block generator and degree `d + 1` through some `C`-block generator,
/// whenever those degrees belong to the space.
pub fn generation_check(space: Space, n: usize, d: i64) -> Result<GenerationReport> {
    let l2 = space
        .level(n, d)
        .ok_or_else(|| Error::IndexOutOfRange(format!("degree {d} is outside {}", space.name())))?;
    let down_required = space.level(n, d - 1).is_some();
    let up_required = space.level(n, d + 1).is_some();
    let mut report = GenerationReport {
        space,
        n,
        degree: d,
        down_required,
        up_required,
        down_failures: Vec::new(),
        up_failures: Vec::new(),
        stray_images: 0,
    };
    for idx in block_members(space, n, l2)? {
        let f = basis(&idx)?;
        for (block, required, target, fails) in [
            (Block::B, down_required, d - 1, &mut report.down_failures),
            (Block::C, up_required, d + 1, &mut report.up_failures),
        ] {
            let mut reached = false;
            for r in 0..2 {
                for c in 0..2 {
                    let img = act_algebra(&GlElement::block(block, Biquaternion::unit(r, c)), &f)?;
                    if img.is_zero() {
                        continue;
                    }
                    if img.homogeneous_degree() != Some(target)
                        || space.level(n, target).is_none()
                        || !is_n_regular(&img).regular
                    {
                        report.stray_images += 1;
                    } else {
                        reached = true;
                    }
                }
            }
            if required && !reached {
                fails.push(idx);
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------- unitarity

/// Inner product on the space a function belongs to.
pub fn inner_product(f1: &TensorFn, f2: &TensorFn) -> Result<Q> {
    match f1.side {
        Side::Column => inner_product_f(f1, f2),
        Side::Row => inner_product_g(f1, f2),
    }
}

/// `+1` / `−1` when the Hermitian matrix is positive / negative definite,
/// `None` otherwise; decided by exact elimination pivots.
pub fn definiteness(m: &[Vec<Q>]) -> Option<i32> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut sign = 0;
    for k in 0..n {
        let p = a[k][k].clone();
        if !p.is_real() || p.is_zero() {
            return None;
        }
        let s = if p.re > BigRational::zero() { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if sign != s {
            return None;
        }
        let inv = p.checked_inv().ok()?;
        for i in k + 1..n {
            let f = &a[i][k] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= &d;
            }
        }
    }
    Some(if n == 0 { 1 } else { sign })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramBlock {
    pub degree: i64,
    pub size: usize,
    pub hermitian: bool,
    pub sign: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitarityReport {
    pub space: Space,
    pub n: usize,
    pub blocks: Vec<GramBlock>,
    /// Sign of `∏_{m=2}^{n} (d + m)` on the space's degrees.
    pub predicted_sign: i32,
    pub invariance_checked: usize,
    pub invariance_failures: Vec<String>,
}

impl UnitarityReport {
    pub fn ok(&self) -> bool {
        self.invariance_failures.is_empty()
            && self
                .blocks
                .iter()
                .all(|b| b.hermitian && b.sign == Some(self.predicted_sign))
    }
}

pub fn predicted_sign(space: Space, n: usize) -> i32 {
    if space.is_plus() || n % 2 == 1 {
        1
    } else {
        -1
    }
}

/// Gram blocks through level `l2_max`, and `u(2,2)` skew-invariance
/// `(π(X) f₁, f₂) + (f₁, π(X) f₂) = 0` over all member pairs.
pub fn unitarity_check(space: Space, n: usize, l2_max: i64) -> Result<UnitarityReport> {
    let mut blocks = Vec::new();
    let mut all = Vec::new();
    for l2 in 0..=l2_max {
        let fs: Vec<TensorFn> = block_members(space, n, l2)?
            .iter()
            .map(|i| basis(i).map(|f| (*f).clone()))
            .collect::<Result<_>>()?;
        let mut gram = vec![vec![Q::zero(); fs.len()]; fs.len()];
        for i in 0..fs.len() {
            for j in 0..fs.len() {
                gram[i][j] = inner_product(&fs[i], &fs[j])?;
            }
        }
        let hermitian =
            (0..fs.len()).all(|i| (0..fs.len()).all(|j| gram[i][j] == gram[j][i].conj()));
        blocks.push(GramBlock {
            degree: space.degree(n, l2),
            size: fs.len(),
            hermitian,
            sign: definiteness(&gram),
        });
        all.extend(block_members(space, n, l2)?.into_iter().zip(fs));
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    for (name, x) in u22_generators() {
        debug_assert!(x.is_u22());
        let moved: Vec<TensorFn> = all
            .iter()
            .map(|(_, f)| act_algebra(&x, f))
            .collect::<Result<_>>()?;
        for (i, (ia, fa)) in all.iter().enumerate() {
            for (j, (ib, fb)) in all.iter().enumerate() {
                let s = &inner_product(&moved[i], fb)? + &inner_product(fa, &moved[j])?;
                checked += 1;
                if !s.is_zero() {
                    failures.push(format!("{name} on ({ia}, {ib}): {s}"));
                }
            }
        }
    }
    Ok(UnitarityReport {
        space,
        n,
        blocks,
        predicted_sign: predicted_sign(space, n),
        invariance_checked: checked,
        invariance_failures: failures,
    })
}

/// `(f₁, f₂) = ⟨f₁, σ(π_nl(J) f₂)⟩` with `J = (0 1; 1 0)`.
pub fn inner_product_via_pairing(f1: &TensorFn, f2: &TensorFn) -> Result<Q> {
    let g = sigma(&act_group_left(&GroupElement::Inversion, f2)?);
    integrate_contraction(&left_data(f1, true)?, &right_data(&g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{f_basis, fp_basis, g_basis, members};

    #[test]
    fn b_block_kills_constants_and_d_block_scales_them() {
        let f = f_basis(2, 0, 0, 0).unwrap();
        for (_, x) in one_block_generators() {
            let img = act_algebra_left(&x, &f).unwrap();
            if !x.b.is_zero() {
                assert!(img.is_zero());
            }
        }
        let dm = Biquaternion::e(0);
        let img = act_algebra_left(&GlElement::block(Block::D, dm), &f).unwrap();
        // Tr(e0) + n = 2 + 2
        assert_eq!(img, f.scale(&Q::from_int(4)));
    }

    #[test]
    fn c_block_raises_degree() {
        for idx in members(Family::F, 1, 2) {
            let f = basis(&idx).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    let x = GlElement::block(Block::C, Biquaternion::unit(r, c));
                    let img = act_algebra_left(&x, &f).unwrap();
                    if !img.is_zero() {
                        assert_eq!(img.homogeneous_degree(), Some(idx.degree() + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_compatibility() {
        let gens = one_block_generators();
        let fs = [f_basis(1, 1, 0, 1).unwrap(), fp_basis(1, 0, 1, 0).unwrap()];
        let gs = [g_basis(1, 1, 2, -1).unwrap()];
        for (_, x) in &gens {
            for (_, y) in &gens {
                let xy = x.bracket(y);
                for f in fs.iter().chain(&gs) {
                    let lhs = act_algebra(&xy, f).unwrap();
                    let a = act_algebra(x, &act_algebra(y, f).unwrap()).unwrap();
                    let b = act_algebra(y, &act_algebra(x, f).unwrap()).unwrap();
                    assert_eq!(lhs, a.sub(&b).unwrap());
                }
            }
        }
    }

    #[test]
    fn inversion_is_an_involution_between_plus_and_minus() {
        let f = f_basis(1, 0, -1, 0).unwrap();
        let img = act_group_left(&GroupElement::Inversion, &f).unwrap();
        assert_eq!(img.homogeneous_degree(), Some(-3));
        assert!(is_n_regular(&img).regular);
        assert_eq!(act_group_left(&GroupElement::Inversion, &img).unwrap(), *f);
        let g = g_basis(2, 1, 1, 1).unwrap();
        let img = act_group_right(&GroupElement::Inversion, &g).unwrap();
        assert!(is_n_regular(&img).regular);
        assert_eq!(act_group_right(&GroupElement::Inversion, &img).unwrap(), *g);
    }

    #[test]
    fn identity_diagonal_is_identity() {
        let h = GroupElement::Diagonal(Biquaternion::one(), Biquaternion::one());
        let f = f_basis(2, 1, 1, 1).unwrap();
        assert_eq!(act_group_left(&h, &f).unwrap(), *f);
    }

    #[test]
    fn definiteness_by_pivots() {
        let q = |a: i64| Q::from_int(a);
        assert_eq!(definiteness(&[vec![q(2), q(1)], vec![q(1), q(2)]]), Some(1));
        assert_eq!(
            definiteness(&[vec![q(-2), q(1)], vec![q(1), q(-2)]]),
            Some(-1)
        );
        assert_eq!(definiteness(&[vec![q(1), q(2)], vec![q(2), q(1)]]), None);
    }
}
