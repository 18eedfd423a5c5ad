//! Sphere integration, the Cauchy-Fueter kernel, its expansions, the
//! bilinear pairing and everything computed from it.
//!
//! Every surface integral is taken over the unit sphere `S³ ⊂ H` and divided
//! by its volume `2π²`, so the constant function integrates to 1. On the unit
//! sphere `N = 1`, which lets a Laurent function be integrated through its
//! numerator alone.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::basis::{basis, members, BasisIndex, Family, HalfInt};
use crate::diffops::{dn, dn_inverse};
use crate::error::{Error, Result};
use crate::func::{z_matrix, LaurentFn, TensorFn};
use crate::poly::{add_exps, total, Exps, Poly};
use crate::quat::Biquaternion;
use crate::scalar::GaussianRational;
use crate::tensor::{slot_bit, Side, SpinorTensor, TensorRank};

type Q = GaussianRational;

// ---------------------------------------------------------------- moments

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn double_factorial_odd(b: u32) -> BigInt {
    // (2b − 1)!!
    (1..=b).fold(BigInt::one(), |acc, k| acc * (2 * k - 1))
}

/// `(1/2π²) ∫_{S³} (x⁰)^a (x¹)^b (x²)^c (x³)^d dS`.
///
/// With `x = g/|g|` for a standard Gaussian `g ∈ R⁴`, the Gaussian moment
/// factors into a radial part and the sphere part. For `e = 2β` this gives
/// `∏ (2β_i − 1)!! / 2^{β_i}` over `(|β| + 1)!`, and 0 for any odd exponent.
pub fn sphere_moment(e: Exps) -> BigRational {
    if e.iter().any(|k| k % 2 == 1) {
        return BigRational::zero();
    }
    let beta: Vec<u32> = e.iter().map(|k| k / 2).collect();
    let s: u32 = beta.iter().sum();
    let num: BigInt = beta.iter().map(|&b| double_factorial_odd(b)).product();
    let den = factorial(s + 1) * (BigInt::one() << s as usize);
    BigRational::new(num, den)
}

/// An exact sphere moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereMoment {
    pub exponents: Exps,
    pub value: BigRational,
}

/// All moments of total degree `≤ max_degree`, in lexicographic order.
pub fn moment_table(max_degree: u32) -> Vec<SphereMoment> {
    all_exponents(max_degree)
        .into_iter()
        .map(|e| SphereMoment {
            exponents: e,
            value: sphere_moment(e),
        })
        .collect()
}

fn all_exponents(max_degree: u32) -> Vec<Exps> {
    let m = max_degree;
    let mut out = Vec::new();
    for a in 0..=m {
        for b in 0..=m - a {
            for c in 0..=m - a - b {
                for d in 0..=m - a - b - c {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// `a! b! / (a + b + 1)!`, the sphere average of `|u|^{2a} |v|^{2b}` with
/// `(u, v) ∈ C²`, memoized.
fn uv_moment(a: u32, b: u32) -> BigRational {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32), BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(&(a, b)) {
        return v.clone();
    }
    let v = BigRational::new(factorial(a) * factorial(b), factorial(a + b + 1));
    cache.write().unwrap().insert((a, b), v.clone());
    v
}

/// Sphere moment of `z11^a z12^b z21^c z22^d`.
///
/// On `H`, `z22 = conj(z11)` and `z21 = −conj(z12)`, so only `a = d, b = c`
/// survives and then the value is `(−1)^b a! b! / (a + b + 1)!`.
pub fn z_moment(e: Exps) -> BigRational {
    if e[0] != e[3] || e[1] != e[2] {
        return BigRational::zero();
    }
    let v = uv_moment(e[0], e[1]);
    if e[1] % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Normalized sphere integral of a Laurent function, through the real
/// coordinates and `sphere_moment`.
pub fn integrate_s3(f: &LaurentFn) -> Q {
    let mut acc = Q::zero();
    for (e, c) in f.to_real_sphere_poly().terms() {
        let m = sphere_moment(*e);
        if !m.is_zero() {
            acc += &c.scale(&m);
        }
    }
    acc
}

/// The same integral computed directly in the matrix entries.
pub fn integrate_s3_z(f: &LaurentFn) -> Q {
    let mut acc = Q::zero();
    for (e, c) in f.numerator().terms() {
        let m = z_moment(*e);
        if !m.is_zero() {
            acc += &c.scale(&m);
        }
    }
    acc
}

/// Monte-Carlo estimate of one moment.
#[derive(Clone, Debug)]
pub struct MomentEstimate {
    pub exponents: Exps,
    pub exact: f64,
    pub mean: f64,
    pub std_err: f64,
}

impl MomentEstimate {
    /// `|mean − exact| ≤ k · std_err`.
    pub fn within(&self, k: f64) -> bool {
        (self.mean - self.exact).abs() <= k * self.std_err
    }
}

/// Estimates every moment of total degree `≤ max_degree` from `samples`
/// uniform points on `S³` (normalized Gaussian vectors).
pub fn monte_carlo_moments(max_degree: u32, samples: usize, seed: u64) -> Vec<MomentEstimate> {
    let exps = all_exponents(max_degree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = vec![0.0f64; exps.len()];
    let mut sum_sq = vec![0.0f64; exps.len()];
    let width = max_degree as usize + 1;
    let mut pw = vec![[1.0f64; 4]; width];
    for _ in 0..samples {
        let mut g = [0.0f64; 4];
        for x in g.iter_mut() {
            *x = StandardNormal.sample(&mut rng);
        }
        let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        for k in 1..width {
            for i in 0..4 {
                pw[k][i] = pw[k - 1][i] * g[i] / r;
            }
        }
        for (j, e) in exps.iter().enumerate() {
            let v = pw[e[0] as usize][0]
                * pw[e[1] as usize][1]
                * pw[e[2] as usize][2]
                * pw[e[3] as usize][3];
            sum[j] += v;
            sum_sq[j] += v * v;
        }
    }
    let n = samples as f64;
    exps.iter()
        .enumerate()
        .map(|(j, e)| {
            let mean = sum[j] / n;
            let var = (sum_sq[j] / n - mean * mean).max(0.0);
            let exact = sphere_moment(*e);
            MomentEstimate {
                exponents: *e,
                exact: ratio_to_f64(&exact),
                mean,
                std_err: (var / n).sqrt(),
            }
        })
        .collect()
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    Q::real(r.clone()).to_f64_pair().0
}

// ------------------------------------------------- products on the sphere

/// A polynomial with its terms bucketed by charge `(a − d, b − c)`; only
/// opposite charges can meet in a nonzero sphere integral.
#[derive(Clone, Debug, Default)]
pub struct ChargedPoly(HashMap<(i64, i64), Vec<(Exps, Q)>>);

fn charge(e: &Exps) -> (i64, i64) {
    (e[0] as i64 - e[3] as i64, e[1] as i64 - e[2] as i64)
}

impl ChargedPoly {
    pub fn new(p: &Poly) -> Self {
        let mut m: HashMap<(i64, i64), Vec<(Exps, Q)>> = HashMap::new();
        for (e, c) in p.terms() {
            m.entry(charge(e)).or_default().push((*e, c.clone()));
        }
        Self(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// `∫ p·q dS` without expanding the product.
pub fn integrate_charged(p: &ChargedPoly, q: &ChargedPoly) -> Q {
    let mut by_moment: HashMap<(u32, u32), Q> = HashMap::new();
    for (ch, tp) in &p.0 {
        let Some(tq) = q.0.get(&(-ch.0, -ch.1)) else {
            continue;
        };
        for (ep, cp) in tp {
            for (eq, cq) in tq {
                let e = add_exps(ep, eq);
                let key = (e[0], e[1]);
                let prod = cp * cq;
                match by_moment.get_mut(&key) {
                    Some(acc) => *acc += &prod,
                    None => {
                        by_moment.insert(key, prod);
                    }
                }
            }
        }
    }
    let mut acc = Q::zero();
    for ((a, b), c) in by_moment {
        acc += &c.scale(&z_moment([a, b, b, a]));
    }
    acc
}

pub fn integrate_product(p: &Poly, q: &Poly) -> Q {
    integrate_charged(&ChargedPoly::new(p), &ChargedPoly::new(q))
}

/// Component numerators of a tensor function, ready for sphere pairing.
#[derive(Clone, Debug)]
pub struct SphereData {
    pub side: Side,
    pub rank: TensorRank,
    comps: Vec<ChargedPoly>,
}

impl SphereData {
    pub fn new(f: &TensorFn) -> Self {
        Self {
            side: f.side,
            rank: f.rank,
            comps: f
                .comps
                .iter()
                .map(|c| ChargedPoly::new(c.numerator()))
                .collect(),
        }
    }
}

/// `Σ_I ∫ a_I b_I dS`.
pub fn integrate_contraction(a: &SphereData, b: &SphereData) -> Result<Q> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch {
            left: a.rank.get(),
            right: b.rank.get(),
        });
    }
    let mut acc = Q::zero();
    for (x, y) in a.comps.iter().zip(&b.comps) {
        if !x.is_zero() && !y.is_zero() {
            acc += &integrate_charged(x, y);
        }
    }
    Ok(acc)
}

fn expect_side(f: &TensorFn, side: Side) -> Result<()> {
    if f.side != side {
        return Err(Error::SideMismatch {
            expected: side.name(),
        });
    }
    Ok(())
}

/// `Z^{⊗n} · D_n⁻¹ f` (or `Z^{⊗n} f`) for a column function, as sphere data.
pub fn left_data(f: &TensorFn, invert_dn: bool) -> Result<SphereData> {
    expect_side(f, Side::Column)?;
    let h = if invert_dn { dn_inverse(f)? } else { f.clone() };
    Ok(SphereData::new(&h.all_slots_mul(&z_matrix())))
}

pub fn right_data(g: &TensorFn) -> Result<SphereData> {
    expect_side(g, Side::Row)?;
    Ok(SphereData::new(g))
}

/// Sphere data of a basis member: `Z^{⊗n} D_n⁻¹ F` for the column families,
/// the plain components for the row families. Cached.
pub fn member_data(idx: &BasisIndex) -> Result<Arc<SphereData>> {
    static CACHE: OnceLock<RwLock<HashMap<BasisIndex, Arc<SphereData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.read().unwrap().get(idx) {
        return Ok(d.clone());
    }
    let f = basis(idx)?;
    let d = Arc::new(match idx.family.side() {
        Side::Column => left_data(&f, true)?,
        Side::Row => right_data(&f)?,
    });
    cache.write().unwrap().insert(*idx, d.clone());
    Ok(d)
}

/// `⟨f, g⟩ = (1/2π²) ∫_{S³} g · Z^{⊗n} · D_n⁻¹ f dS`.
pub fn bilinear_pairing(f: &TensorFn, g: &TensorFn) -> Result<Q> {
    integrate_contraction(&left_data(f, true)?, &right_data(g)?)
}

/// Pairing of two basis members through the cache.
pub fn member_pairing(f: &BasisIndex, g: &BasisIndex) -> Result<Q> {
    integrate_contraction(&*member_data(f)?, &*member_data(g)?)
}

/// `⟨f, g⟩ = (−1)^{n−1} (1/2π²) ∫ (D_n⁻¹ g) · Z^{⊗n} · f dS`.
pub fn deg_switch_check(f: &TensorFn, g: &TensorFn) -> Result<bool> {
    let lhs = bilinear_pairing(f, g)?;
    let rhs = integrate_contraction(&left_data(f, false)?, &right_data(&dn_inverse(g)?)?)?;
    let sign = if f.n() % 2 == 1 { Q::one() } else { -Q::one() };
    Ok(lhs == &sign * &rhs)
}

/// `∫ g · (Z ⊗ ⋯ ⊗ Z) · f dS = 0`, with the surface element carried by `slot`.
pub fn cauchy_theorem_check(f: &TensorFn, g: &TensorFn, slot: usize) -> Result<bool> {
    expect_side(f, Side::Column)?;
    expect_side(g, Side::Row)?;
    crate::tensor::check_slot(slot, f.n())?;
    let z = z_matrix();
    let mut h = f.clone();
    for k in (1..=f.n()).filter(|&k| k != slot) {
        h = h.slot_mul(&z, k)?;
    }
    // on the unit sphere the surface element at `slot` is `Z dS`
    h = h.slot_mul(&z, slot)?;
    Ok(integrate_contraction(&SphereData::new(&h), &right_data(g)?)?.is_zero())
}

// ------------------------------------------------------------------ kernel

/// `k_{n/2}(Y)` as a `2ⁿ × 2ⁿ` array; entry `(I, J)` sits at `I·2ⁿ + J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelFn {
    pub n: usize,
    pub comps: Vec<LaurentFn>,
}

impl KernelFn {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentFn {
        &self.comps[i * self.dim() + j]
    }

    pub fn evaluate(&self, y: &Biquaternion) -> Result<Vec<Q>> {
        self.comps.iter().map(|c| c.evaluate(y)).collect()
    }

    /// `k(−Y)`.
    pub fn reflect(&self) -> Self {
        Self {
            n: self.n,
            comps: self
                .comps
                .iter()
                .map(|c| {
                    LaurentFn::new(
                        c.numerator().permute_vars([0, 1, 2, 3], [-1; 4]),
                        c.denom_power(),
                    )
                })
                .collect(),
        }
    }
}

/// `k_{n/2}(Z − W) = 2^{−n} (∇_W ⊗ ⋯ ⊗ ∇_W) N(Z − W)⁻¹`, written in `Y = Z − W`.
///
/// Since `∇` has entries `2∂_{cr}` and `∇_W = −∇_Y`, entry `(I, J)` is
/// `(−1)ⁿ ∏_s ∂_{J_s I_s} N(Y)⁻¹`.
pub fn kernel(n: usize) -> Result<KernelFn> {
    let rank = TensorRank::new(n)?;
    let dim = rank.dim();
    let inv = LaurentFn::norm_power(-1);
    let sign = if n.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    };
    let mut comps = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut f = inv.clone();
            for s in 1..=n {
                f = f.partial(slot_bit(j, s), slot_bit(i, s));
            }
            comps.push(f.scale(&sign));
        }
    }
    Ok(KernelFn { n, comps })
}

// -------------------------------------------------------------- expansions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionForm {
    /// `Σ F(W) · G′(Z)`
    FGp,
    /// `Σ F′(Z) · G(W)`
    FpG,
}

/// `W`-monomial ↦ `2ⁿ × 2ⁿ` array of functions of `Z`.
pub type Bivariate = BTreeMap<Exps, Vec<LaurentFn>>;

#[derive(Clone, Debug)]
pub struct ExpansionLevel {
    pub l: HalfInt,
    pub term_count: usize,
    pub coeffs: Bivariate,
}

#[derive(Clone, Debug)]
pub struct TruncatedExpansion {
    pub n: usize,
    pub l_max: HalfInt,
    pub form: ExpansionForm,
    pub levels: Vec<ExpansionLevel>,
}

fn add_into(map: &mut Bivariate, e: Exps, slot: usize, len: usize, f: LaurentFn) {
    let v = map.entry(e).or_insert_with(|| vec![LaurentFn::zero(); len]);
    v[slot] = v[slot].add(&f);
}

fn prune(map: &mut Bivariate) {
    map.retain(|_, v| v.iter().any(|c| !c.is_zero()));
}

/// One level `2l = l2` of the expansion.
pub fn expansion_level(n: usize, l2: i64, form: ExpansionForm) -> Result<ExpansionLevel> {
    let dim = TensorRank::new(n)?.dim();
    let mut coeffs = Bivariate::new();
    let pairs = crate::basis::index_pairs(n, l2);
    for &(mu2, nu2) in &pairs {
        let (w_fam, z_fam) = match form {
            ExpansionForm::FGp => (Family::F, Family::Gp),
            ExpansionForm::FpG => (Family::G, Family::Fp),
        };
        let w_part = basis(&BasisIndex::new(w_fam, n, l2, mu2, nu2)?)?;
        let z_part = basis(&BasisIndex::new(z_fam, n, l2, mu2, nu2)?)?;
        for (a, wa) in w_part.comps.iter().enumerate() {
            for (e, c) in wa.numerator().terms() {
                for (b, zb) in z_part.comps.iter().enumerate() {
                    if zb.is_zero() {
                        continue;
                    }
                    // the column factor carries I, the row factor J
                    let (i, j) = match form {
                        ExpansionForm::FGp => (a, b),
                        ExpansionForm::FpG => (b, a),
                    };
                    add_into(&mut coeffs, *e, i * dim + j, dim * dim, zb.scale(c));
                }
            }
        }
    }
    prune(&mut coeffs);
    Ok(ExpansionLevel {
        l: HalfInt(l2),
        term_count: pairs.len(),
        coeffs,
    })
}

pub fn truncated_expansion(
    n: usize,
    l2_max: i64,
    form: ExpansionForm,
) -> Result<TruncatedExpansion> {
    let levels = (0..=l2_max)
        .map(|l2| expansion_level(n, l2, form))
        .collect::<Result<_>>()?;
    Ok(TruncatedExpansion {
        n,
        l_max: HalfInt(l2_max),
        form,
        levels,
    })
}

/// Degree-`d` part of the Taylor expansion of `k(Z − W)` in `W` about 0:
/// `Σ_{|α| = d} (−1)^d w^α / α! · ∂^α k(Z)`.
pub fn kernel_taylor(k: &KernelFn, d: u32) -> Bivariate {
    let mut out = Bivariate::new();
    for e in all_exponents(d).into_iter().filter(|e| total(e) == d) {
        let mut fact = BigInt::one();
        for &x in &e {
            fact *= factorial(x);
        }
        let mut s = Q::real(BigRational::new(BigInt::one(), fact));
        if d % 2 == 1 {
            s = -s;
        }
        let v: Vec<LaurentFn> = k
            .comps
            .iter()
            .map(|c| {
                let mut f = c.clone();
                for (var, &times) in e.iter().enumerate() {
                    for _ in 0..times {
                        f = f.partial(var / 2, var % 2);
                    }
                }
                f.scale(&s)
            })
            .collect();
        out.insert(e, v);
    }
    prune(&mut out);
    out
}

fn eval_bivariate(b: &Bivariate, z: &Biquaternion, w: &Biquaternion) -> Result<Vec<Q>> {
    let mut acc: Vec<Q> = Vec::new();
    for (e, v) in b {
        let wm = Poly::monomial(*e, Q::one()).evaluate(w);
        if acc.is_empty() {
            acc = vec![Q::zero(); v.len()];
        }
        for (a, c) in acc.iter_mut().zip(v) {
            if !c.is_zero() {
                *a += &(&wm * &c.evaluate(z)?);
            }
        }
    }
    Ok(acc)
}

fn frobenius(v: &[Q]) -> f64 {
    v.iter()
        .map(|c| {
            let (re, im) = c.to_f64_pair();
            re * re + im * im
        })
        .sum::<f64>()
        .sqrt()
}

/// Relative error of the partial sums through each level against the kernel
/// evaluated at `Z − W`; entry `l2` covers levels `0..=l2`.
pub fn expansion_spot_check(
    n: usize,
    l2_max: i64,
    form: ExpansionForm,
    z: &Biquaternion,
    w: &Biquaternion,
) -> Result<Vec<f64>> {
    let exact = kernel(n)?.evaluate(&(z - w))?;
    let scale = frobenius(&exact);
    let mut partial = vec![Q::zero(); exact.len()];
    let mut errors = Vec::new();
    for l2 in 0..=l2_max {
        let level = expansion_level(n, l2, form)?;
        let v = eval_bivariate(&level.coeffs, z, w)?;
        for (p, x) in partial.iter_mut().zip(&v) {
            *p += x;
        }
        let diff: Vec<Q> = partial.iter().zip(&exact).map(|(a, b)| a - b).collect();
        errors.push(frobenius(&diff) / scale);
    }
    Ok(errors)
}

// -------------------------------------------------- reproducing formula

fn check_point(w: &Biquaternion) -> Result<bool> {
    if !w.is_real_quaternion() {
        return Err(Error::BadPoint(format!("{w:?} is not a real quaternion")));
    }
    let nw = w.norm();
    if nw == Q::one() {
        return Err(Error::BadPoint("point lies on the unit sphere".into()));
    }
    Ok(nw.re < BigRational::one())
}

/// `(1/2π²) ∫_{S³} k_{n/2}(Z − W) · Z^{⊗n} · f(Z) dS` for a polynomial left
/// n-regular `f`, with the kernel replaced by its expansion in the `F′G` form.
///
/// Inside the sphere this equals `D_n f(W)`, outside it vanishes.
pub fn cauchy_fueter_apply(f: &TensorFn, w: &Biquaternion, l2_max: i64) -> Result<SpinorTensor> {
    cauchy_fueter_apply_with(f, w, l2_max, ExpansionForm::FpG)
}

pub fn cauchy_fueter_apply_with(
    f: &TensorFn,
    w: &Biquaternion,
    l2_max: i64,
    form: ExpansionForm,
) -> Result<SpinorTensor> {
    expect_side(f, Side::Column)?;
    if f.comps.iter().any(|c| !c.is_polynomial()) {
        return Err(Error::NotLaurentClass(
            "expected a polynomial function".into(),
        ));
    }
    let top = f.degrees().last().copied().unwrap_or(0);
    if top > l2_max {
        return Err(Error::TruncationInsufficient {
            degree: top,
            twice_lmax: l2_max,
        });
    }
    let interior = check_point(w)?;
    let n = f.n();
    let dim = f.rank.dim();
    let zf = f.all_slots_mul(&z_matrix());
    let zf_data = SphereData::new(&zf);
    let mut out = vec![Q::zero(); dim];
    for l2 in 0..=l2_max {
        for (mu2, nu2) in crate::basis::index_pairs(n, l2) {
            let at = |fam| BasisIndex::new(fam, n, l2, mu2, nu2);
            if !interior {
                // k(Z − W) = (−1)ⁿ Σ F′(W) G(Z) for |Z| < |W|
                let c = integrate_contraction(&zf_data, &*member_data(&at(Family::G)?)?)?;
                if c.is_zero() {
                    continue;
                }
                let fw = basis(&at(Family::Fp)?)?.evaluate(w)?;
                let c = if n % 2 == 1 { -c } else { c };
                for (o, x) in out.iter_mut().zip(&fw.data) {
                    *o += &(x * &c);
                }
                continue;
            }
            match form {
                ExpansionForm::FGp => {
                    let c = integrate_contraction(&zf_data, &*member_data(&at(Family::Gp)?)?)?;
                    if c.is_zero() {
                        continue;
                    }
                    let fw = basis(&at(Family::F)?)?.evaluate(w)?;
                    for (o, x) in out.iter_mut().zip(&fw.data) {
                        *o += &(x * &c);
                    }
                }
                ExpansionForm::FpG => {
                    let gw = basis(&at(Family::G)?)?.evaluate(w)?;
                    let s = zf
                        .comps
                        .iter()
                        .zip(&gw.data)
                        .fold(LaurentFn::zero(), |acc, (c, x)| acc.add(&c.scale(x)));
                    if s.is_zero() {
                        continue;
                    }
                    let s = ChargedPoly::new(s.numerator());
                    let fp = basis(&at(Family::Fp)?)?;
                    for (o, c) in out.iter_mut().zip(&fp.comps) {
                        *o += &integrate_charged(&ChargedPoly::new(c.numerator()), &s);
                    }
                }
            }
        }
    }
    SpinorTensor::from_data(Side::Column, f.rank, out)
}

// ------------------------------------------------- Laurent coefficients

/// Coefficients of an n-regular Laurent-class function against the basis:
/// `plus` on the polynomial family, `minus` on the primed family. Only
/// nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentCoefficients {
    pub n: usize,
    pub side: Side,
    pub l_max: HalfInt,
    pub plus: BTreeMap<BasisIndex, Q>,
    pub minus: BTreeMap<BasisIndex, Q>,
}

impl LaurentCoefficients {
    /// `Σ plus · F + Σ minus · F′` (resp. `G`, `G′`).
    pub fn reconstruct(&self) -> Result<TensorFn> {
        let rank = TensorRank::new(self.n)?;
        let mut acc = TensorFn::zero(self.side, rank);
        for (idx, c) in self.plus.iter().chain(&self.minus) {
            acc = acc.add(&basis(idx)?.scale(c))?;
        }
        Ok(acc)
    }
}

fn check_degrees(f: &TensorFn, l2_max: i64) -> Result<()> {
    let n = f.n() as i64;
    for d in f.degrees() {
        let l2 = if d >= 0 { d } else { -d - n - 2 };
        if l2 > l2_max {
            return Err(Error::TruncationInsufficient {
                degree: d,
                twice_lmax: l2_max,
            });
        }
        if l2 < 0 {
            return Err(Error::NotLaurentClass(format!(
                "no regular functions of degree {d}"
            )));
        }
    }
    Ok(())
}

/// Left side: `a = ⟨f, G′⟩` on `F`, `b = (−1)^{n−1}⟨f, G⟩` on `F′`.
/// Right side: `d = ⟨F, g⟩` on `G′`, `c = (−1)^{n−1}⟨F′, g⟩` on `G`.
pub fn laurent_coefficients(f: &TensorFn, l2_max: i64) -> Result<LaurentCoefficients> {
    check_degrees(f, l2_max)?;
    let n = f.n();
    let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
    let mut plus = BTreeMap::new();
    let mut minus = BTreeMap::new();
    match f.side {
        Side::Column => {
            let fd = left_data(f, true)?;
            for idx in members(Family::F, n, l2_max) {
                let a = integrate_contraction(&fd, &*member_data(&idx.with_family(Family::Gp))?)?;
                if !a.is_zero() {
                    plus.insert(idx, a);
                }
                let b = integrate_contraction(&fd, &*member_data(&idx.with_family(Family::G))?)?;
                if !b.is_zero() {
                    minus.insert(idx.with_family(Family::Fp), &sign * &b);
                }
            }
        }
        Side::Row => {
            let gd = right_data(f)?;
            for idx in members(Family::G, n, l2_max) {
                let c = integrate_contraction(&*member_data(&idx.with_family(Family::Fp))?, &gd)?;
                if !c.is_zero() {
                    plus.insert(idx, &sign * &c);
                }
                let d = integrate_contraction(&*member_data(&idx.with_family(Family::F))?, &gd)?;
                if !d.is_zero() {
                    minus.insert(idx.with_family(Family::Gp), d);
                }
            }
        }
    }
    Ok(LaurentCoefficients {
        n,
        side: f.side,
        l_max: HalfInt(l2_max),
        plus,
        minus,
    })
}

// ---------------------------------------------------------- inner products

fn conj_data(f: &TensorFn) -> SphereData {
    SphereData::new(&f.map(LaurentFn::conj_on_real))
}

/// `(f₁, f₂) = (1/2π²) ∫ f₂⁺ · D_n⁻¹ f₁ dS`; conjugate-linear in `f₂`.
pub fn inner_product_f(f1: &TensorFn, f2: &TensorFn) -> Result<Q> {
    expect_side(f1, Side::Column)?;
    expect_side(f2, Side::Column)?;
    integrate_contraction(&SphereData::new(&dn_inverse(f1)?), &conj_data(f2))
}

/// `(g₁, g₂) = (1/2π²) ∫ D_n⁻¹ g₁ · g₂⁺ dS`; conjugate-linear in `g₂`.
pub fn inner_product_g(g1: &TensorFn, g2: &TensorFn) -> Result<Q> {
    expect_side(g1, Side::Row)?;
    expect_side(g2, Side::Row)?;
    integrate_contraction(&SphereData::new(&dn_inverse(g1)?), &conj_data(g2))
}

/// `D_n f(W)`, the value the reproducing formula must return.
pub fn dn_at(f: &TensorFn, w: &Biquaternion) -> Result<SpinorTensor> {
    dn(f).evaluate(w)
}

/// Sign of a nonzero rational, for reporting.
pub fn sign_of(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}
