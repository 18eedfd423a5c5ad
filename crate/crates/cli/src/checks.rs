//! The check catalogue: ids, statements, and the code that runs each one.

use std::collections::HashMap;
use std::fmt::Display;

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use nregular_core::basis::{basis, members, recursion_check, BasisIndex, Family, HalfInt};
use nregular_core::diffops::{
    deg_shift, dn, dn_inverse, is_n_regular_on, laplacian, nabla_plus_slot, nabla_slot,
};
use nregular_core::func::z_matrix;
use nregular_core::kernel::{
    cauchy_fueter_apply, cauchy_fueter_apply_with, cauchy_theorem_check, deg_switch_check, dn_at,
    expansion_level, integrate_contraction, integrate_s3, integrate_s3_z, kernel, kernel_taylor,
    laurent_coefficients, left_data, member_data, member_pairing, moment_table, right_data,
    sphere_moment, ExpansionForm, SphereData,
};
use nregular_core::lie::{
    act_algebra, act_algebra_left, act_algebra_right, generation_check, ktype_census,
    one_block_generators, regularity_preservation_check, sigma_intertwine_check, u22_generators,
    unitarity_check, Block, GlElement, Space,
};
use nregular_core::poly::Poly;
use nregular_core::tensor::{Side, SpinorTensor, TensorRank};
use nregular_core::{Biquaternion, EBasisCoords, GaussianRational as Q, LaurentFn, TensorFn};

use crate::config::{Suite, SuiteConfig, MAX_N};

/// Number of cases examined, or a witness of the first failure.
pub type Outcome = Result<usize, Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    AlgebraEmbedding,
    AlgebraNorm,
    TensorCasimir { n: usize },
    TensorSlots { n: usize },
    DiffopsIdentities,
    DiffopsDn { n: usize },
    BasisRegular { n: usize, l: HalfInt },
    BasisRecursion { family: Family, n: usize },
    KernelMoments,
    KernelSymbol { n: usize },
    KernelExpansion { n: usize, l: HalfInt },
    Orthogonality { n: usize },
    DegSwitch { n: usize },
    CauchyTheorem { n: usize },
    Laurent { n: usize },
    Reproduce { n: usize, l: HalfInt },
    LieRegularity { n: usize },
    LieInvariance { n: usize },
    LieSigma { n: usize },
    LieBracket { n: usize },
    Ktypes { space: Space, n: usize },
    Generation { space: Space, n: usize, l: HalfInt },
    Unitary { space: Space, n: usize },
}

fn family_token(f: Family) -> &'static str {
    match f {
        Family::F => "f",
        Family::G => "g",
        Family::Fp => "fp",
        Family::Gp => "gp",
    }
}

fn space_token(s: Space) -> &'static str {
    match s {
        Space::FPlus => "fplus",
        Space::FMinus => "fminus",
        Space::GPlus => "gplus",
        Space::GMinus => "gminus",
    }
}

fn parse_n(s: &str) -> Option<usize> {
    let n: usize = s.strip_prefix('n')?.parse().ok()?;
    (1..=MAX_N).contains(&n).then_some(n)
}

fn parse_l(s: &str) -> Option<HalfInt> {
    let l: HalfInt = s.strip_prefix('l')?.parse().ok()?;
    (l.twice() >= 0).then_some(l)
}

fn levels(l_max: HalfInt) -> impl Iterator<Item = HalfInt> {
    (0..=l_max.twice()).map(HalfInt)
}

impl Check {
    pub fn suite(&self) -> Suite {
        use Check::*;
        match self {
            AlgebraEmbedding | AlgebraNorm => Suite::Algebra,
            TensorCasimir { .. } | TensorSlots { .. } => Suite::Tensor,
            DiffopsIdentities | DiffopsDn { .. } => Suite::Diffops,
            BasisRegular { .. } | BasisRecursion { .. } => Suite::Basis,
            KernelMoments | KernelSymbol { .. } | KernelExpansion { .. } => Suite::Kernel,
            Orthogonality { .. } | DegSwitch { .. } | CauchyTheorem { .. } | Laurent { .. } => {
                Suite::Pairing
            }
            Reproduce { .. } => Suite::Reproduce,
            LieRegularity { .. } | LieInvariance { .. } | LieSigma { .. } | LieBracket { .. } => {
                Suite::Lie
            }
            Ktypes { .. } | Generation { .. } => Suite::Ktypes,
            Unitary { .. } => Suite::Unitary,
        }
    }

    pub fn id(&self) -> String {
        use Check::*;
        match *self {
            AlgebraEmbedding => "algebra.embedding".into(),
            AlgebraNorm => "algebra.norm".into(),
            TensorCasimir { n } => format!("tensor.casimir.n{n}"),
            TensorSlots { n } => format!("tensor.slots.n{n}"),
            DiffopsIdentities => "diffops.identities".into(),
            DiffopsDn { n } => format!("diffops.dn.n{n}"),
            BasisRegular { n, l } => format!("basis.regular.n{n}.l{l}"),
            BasisRecursion { family, n } => {
                format!("basis.recursion.{}.n{n}", family_token(family))
            }
            KernelMoments => "kernel.moments".into(),
            KernelSymbol { n } => format!("kernel.symbol.n{n}"),
            KernelExpansion { n, l } => format!("kernel.expansion.n{n}.l{l}"),
            Orthogonality { n } => format!("orthogonality.n{n}"),
            DegSwitch { n } => format!("pairing.deg_switch.n{n}"),
            CauchyTheorem { n } => format!("pairing.cauchy.n{n}"),
            Laurent { n } => format!("laurent.n{n}"),
            Reproduce { n, l } => format!("reproduce.n{n}.l{l}"),
            LieRegularity { n } => format!("lie.regularity.n{n}"),
            LieInvariance { n } => format!("lie.invariance.n{n}"),
            LieSigma { n } => format!("lie.sigma.n{n}"),
            LieBracket { n } => format!("lie.bracket.n{n}"),
            Ktypes { space, n } => format!("ktypes.{}.n{n}", space_token(space)),
            Generation { space, n, l } => format!("generation.{}.n{n}.l{l}", space_token(space)),
            Unitary { space, n } => format!("unitary.{}.n{n}", space_token(space)),
        }
    }

    pub fn parse(id: &str) -> Option<Check> {
        use Check::*;
        let parts: Vec<&str> = id.split('.').collect();
        let family = |s: &str| Family::ALL.into_iter().find(|&f| family_token(f) == s);
        let space = |s: &str| Space::ALL.into_iter().find(|&x| space_token(x) == s);
        let check = match parts.as_slice() {
            ["algebra", "embedding"] => AlgebraEmbedding,
            ["algebra", "norm"] => AlgebraNorm,
            ["tensor", "casimir", n] => TensorCasimir { n: parse_n(n)? },
            ["tensor", "slots", n] => TensorSlots { n: parse_n(n)? },
            ["diffops", "identities"] => DiffopsIdentities,
            ["diffops", "dn", n] => DiffopsDn { n: parse_n(n)? },
            ["basis", "regular", n, l] => BasisRegular {
                n: parse_n(n)?,
                l: parse_l(l)?,
            },
            ["basis", "recursion", f, n] => {
                let n = parse_n(n)?;
                if n < 2 {
                    return None;
                }
                BasisRecursion {
                    family: family(f)?,
                    n,
                }
            }
            ["kernel", "moments"] => KernelMoments,
            ["kernel", "symbol", n] => KernelSymbol { n: parse_n(n)? },
            ["kernel", "expansion", n, l] => KernelExpansion {
                n: parse_n(n)?,
                l: parse_l(l)?,
            },
            ["orthogonality", n] => Orthogonality { n: parse_n(n)? },
            ["pairing", "deg_switch", n] => DegSwitch { n: parse_n(n)? },
            ["pairing", "cauchy", n] => CauchyTheorem { n: parse_n(n)? },
            ["laurent", n] => Laurent { n: parse_n(n)? },
            ["reproduce", n, l] => Reproduce {
                n: parse_n(n)?,
                l: parse_l(l)?,
            },
            ["lie", "regularity", n] => LieRegularity { n: parse_n(n)? },
            ["lie", "invariance", n] => LieInvariance { n: parse_n(n)? },
            ["lie", "sigma", n] => LieSigma { n: parse_n(n)? },
            ["lie", "bracket", n] => LieBracket { n: parse_n(n)? },
            ["ktypes", s, n] => Ktypes {
                space: space(s)?,
                n: parse_n(n)?,
            },
            ["generation", s, n, l] => Generation {
                space: space(s)?,
                n: parse_n(n)?,
                l: parse_l(l)?,
            },
            ["unitary", s, n] => Unitary {
                space: space(s)?,
                n: parse_n(n)?,
            },
            _ => return None,
        };
        Some(check)
    }

    /// Parameters fixed by the id itself.
    pub fn params(&self) -> Value {
        use Check::*;
        match *self {
            AlgebraEmbedding | AlgebraNorm | DiffopsIdentities | KernelMoments => json!({}),
            BasisRegular { n, l } | KernelExpansion { n, l } | Reproduce { n, l } => {
                json!({"n": n, "l": l.to_string()})
            }
            BasisRecursion { family, n } => json!({"family": family.name(), "n": n}),
            Ktypes { space, n } | Unitary { space, n } => json!({"space": space.name(), "n": n}),
            Generation { space, n, l } => {
                json!({"space": space.name(), "n": n, "l": l.to_string()})
            }
            TensorCasimir { n }
            | TensorSlots { n }
            | DiffopsDn { n }
            | KernelSymbol { n }
            | Orthogonality { n }
            | DegSwitch { n }
            | CauchyTheorem { n }
            | Laurent { n }
            | LieRegularity { n }
            | LieInvariance { n }
            | LieSigma { n }
            | LieBracket { n } => json!({"n": n}),
        }
    }

    pub fn statement(&self) -> String {
        use Check::*;
        match *self {
            AlgebraEmbedding => "The embedding e0 -> I, ek -> -i sigma_k is multiplicative: ek^2 = -1, e1 e2 = e3 \
                and cyclically, and on real quaternions the quadratic norm det Z equals the sum of squares."
                .into(),
            AlgebraNorm => "On random Gaussian-rational biquaternions: N(pq) = N(p) N(q), (pq)+ = q+ p+, \
                p p+ = N(p), and p p^-1 = p^-1 p = 1 whenever N(p) != 0."
                .into(),
            TensorCasimir { n } => format!(
                "For rank {n}, the slot sum of e_k acting in slot j times e_k acting in slot k (k = 0..3) \
                 vanishes on every symmetric tensor, for every pair of distinct slots, on both sides."
            ),
            TensorSlots { n } => format!(
                "For rank {n}, multiplications in distinct slots commute, symmetrization is idempotent, \
                 and multiplying every slot by the same element preserves symmetric tensors."
            ),
            DiffopsIdentities => "2(deg + 2) = Z+ nabla+ + nabla Z = nabla+ Z+ + Z nabla and \
                box = nabla+ nabla = nabla nabla+, exactly, on a seeded sample of the spanning functions \
                z^a N^-2 with |a| <= 8."
                .into(),
            DiffopsDn { n } => format!(
                "D_{n} = (deg + {n})...(deg + 2) composed with its inverse is the identity, both ways, on \
                 seeded combinations of rank-{n} basis functions with l <= l_max."
            ),
            BasisRegular { n, l } => format!(
                "Every F, G, F', G' basis function of rank {n} and level l = {l} is n-regular on its own \
                 side, slot-symmetric, and homogeneous of the expected degree."
            ),
            BasisRecursion { family, n } => format!(
                "The rank-{n} {} basis functions with l <= l_max agree with the recursion from rank {}.",
                family.name(),
                n - 1
            ),
            KernelMoments => "The exact moments of x^b over the unit three-sphere (total degree <= 8) give 1 \
                and 1/4 on the trivial entries, satisfy sum_i m(b + 2e_i) = m(b), and agree with the \
                complex-coordinate route."
                .into(),
            KernelSymbol { n } => format!(
                "Every entry of the rank-{n} kernel is harmonic, homogeneous of degree -{} and has parity \
                 (-1)^{n} under Z -> -Z.",
                n + 2
            ),
            KernelExpansion { n, l } => format!(
                "At level l = {l} the FG' and F'G expansions of the rank-{n} kernel both have (2l+1)(2l+n+1) \
                 terms and equal its Taylor data of W-degree 2l exactly."
            ),
            Orthogonality { n } => format!(
                "For rank {n} and all levels up to l_max: <F, G'> and <F', G> are diagonal in (l, mu, nu) \
                 with entries 1 and (-1)^(n-1), and <F, G> = <F', G'> = 0."
            ),
            DegSwitch { n } => format!(
                "For rank {n}, the pairing moves D_n^-1 from the left argument to the right up to the sign \
                 (-1)^(n-1), on complementary F/G' and F'/G pairs with l <= l_max."
            ),
            CauchyTheorem { n } => format!(
                "For rank {n}, the sphere integral of g Z^(x)n f vanishes for regular polynomial f and g, \
                 slot by slot, on a seeded sample of pairs with l <= min(l_max, 1/2)."
            ),
            Laurent { n } => format!(
                "For rank {n}, coefficients extracted through the pairing reconstruct seeded combinations \
                 of Laurent-class n-regular functions with l <= l_max exactly."
            ),
            Reproduce { n, l } => format!(
                "The Cauchy-Fueter integral of each rank-{n} F basis function at level l = {l} equals \
                 D_n f(W) at seeded interior rational points, by both expansions, and 0 at seeded \
                 exterior points."
            ),
            LieRegularity { n } => format!(
                "All 16 one-block generators of gl(2, H_C) and a basis of u(2,2) map rank-{n} regular \
                 basis functions with l <= l_max to regular functions."
            ),
            LieInvariance { n } => format!(
                "For rank {n}: <pi_nl(X) f, g> + <f, pi_nr(X) g> = 0 for every one-block generator X and \
                 every complementary pair of basis functions with l(f) <= l_max."
            ),
            LieSigma { n } => format!(
                "For rank {n}: sigma(pi_nl(X) f) = pi_nr(X~) sigma(f) for X on the B or C block, with X~ \
                 carrying the adjoint block, on F and F' basis functions with l <= l_max."
            ),
            LieBracket { n } => format!(
                "For rank {n}, both actions are Lie algebra homomorphisms: [pi(X), pi(Y)] = pi([X, Y]) for \
                 seeded random X, Y on seeded basis functions."
            ),
            Ktypes { space, n } => format!(
                "Each degree block of {}(n={n}) up to l_max has dimension (2l+1)(2l+n+1), matches the \
                 regular-polynomial count where defined, carries the expected torus weights, and other \
                 degrees are empty.",
                space.name()
            ),
            Generation { space, n, l } => format!(
                "In {}(n={n}) at level l = {l}, every basis function has a nonzero image in each \
                 neighbouring degree under the one-block generators, and no image leaves the space.",
                space.name()
            ),
            Unitary { space, n } => format!(
                "On {}(n={n}) the inner product is u(2,2)-invariant and definite on every degree block \
                 up to l_max, with the predicted sign.",
                space.name()
            ),
        }
    }
}

/// Checks selected by a configuration, sorted by id.
pub fn plan(config: &SuiteConfig) -> Vec<Check> {
    use Check::*;
    let mut out = Vec::new();
    let lm = config.l_max;
    for &suite in &config.suites {
        match suite {
            Suite::Algebra => out.extend([AlgebraEmbedding, AlgebraNorm]),
            Suite::Diffops => out.push(DiffopsIdentities),
            Suite::Kernel => out.push(KernelMoments),
            _ => {}
        }
        for &n in &config.n {
            match suite {
                Suite::Algebra => {}
                Suite::Tensor => out.extend([TensorCasimir { n }, TensorSlots { n }]),
                Suite::Diffops => out.push(DiffopsDn { n }),
                Suite::Basis => {
                    out.extend(levels(lm).map(|l| BasisRegular { n, l }));
                    if n >= 2 {
                        out.extend(Family::ALL.map(|family| BasisRecursion { family, n }));
                    }
                }
                Suite::Kernel => {
                    out.push(KernelSymbol { n });
                    out.extend(levels(lm).map(|l| KernelExpansion { n, l }));
                }
                Suite::Pairing => out.extend([
                    Orthogonality { n },
                    DegSwitch { n },
                    CauchyTheorem { n },
                    Laurent { n },
                ]),
                Suite::Reproduce => out.extend(levels(lm).map(|l| Reproduce { n, l })),
                Suite::Lie => out.extend([
                    LieRegularity { n },
                    LieInvariance { n },
                    LieSigma { n },
                    LieBracket { n },
                ]),
                Suite::Ktypes => {
                    for space in Space::ALL {
                        out.push(Ktypes { space, n });
                        out.extend(levels(lm).map(|l| Generation { space, n, l }));
                    }
                }
                Suite::Unitary => out.extend(Space::ALL.map(|space| Unitary { space, n })),
            }
        }
    }
    out.sort_by_key(Check::id);
    out.dedup();
    out
}

// ------------------------------------------------------------------ running

pub struct Ctx {
    pub l_max: HalfInt,
    pub seed: u64,
}

impl Ctx {
    /// Each check draws from its own stream, so results do not depend on scheduling.
    fn rng(&self, id: &str) -> ChaCha8Rng {
        // FNV-1a, stable across toolchains
        let stream = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
        });
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn l2(&self) -> i64 {
        self.l_max.twice()
    }
}

fn werr(e: impl Display) -> Value {
    json!({ "error": e.to_string() })
}

fn ensure(cond: bool, witness: impl FnOnce() -> Value) -> Result<(), Value> {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

fn load(idx: &BasisIndex) -> Result<std::sync::Arc<TensorFn>, Value> {
    basis(idx).map_err(|e| json!({"function": idx.to_string(), "error": e.to_string()}))
}

fn rand_q(rng: &mut ChaCha8Rng) -> Q {
    let den = rng.gen_range(1..=4);
    Q::from_parts((rng.gen_range(-5..=5), den), (rng.gen_range(-5..=5), den))
}

fn rand_quat(rng: &mut ChaCha8Rng) -> Biquaternion {
    Biquaternion::new(rand_q(rng), rand_q(rng), rand_q(rng), rand_q(rng))
}

fn real_point(rng: &mut ChaCha8Rng, num: std::ops::RangeInclusive<i64>, den: i64) -> Biquaternion {
    let c = [0; 4].map(|_| Q::from_ratio(rng.gen_range(num.clone()), den));
    Biquaternion::from_coords(&EBasisCoords(c))
}

fn sign(n: usize) -> Q {
    if n % 2 == 1 {
        Q::one()
    } else {
        -Q::one()
    }
}

fn random_combination(
    rng: &mut ChaCha8Rng,
    pool: &[BasisIndex],
    side: Side,
    n: usize,
) -> Result<TensorFn, Value> {
    let mut acc = TensorFn::zero(side, TensorRank::new(n).map_err(werr)?);
    for _ in 0..3 {
        let idx = pool[rng.gen_range(0..pool.len())];
        let c = Q::from_parts((rng.gen_range(-4..=4), 1), (rng.gen_range(-4..=4), 1));
        acc = acc.add(&load(&idx)?.scale(&c)).map_err(werr)?;
    }
    Ok(acc)
}

fn gl_random(rng: &mut ChaCha8Rng) -> GlElement {
    GlElement {
        a: rand_quat(rng),
        b: rand_quat(rng),
        c: rand_quat(rng),
        d: rand_quat(rng),
    }
}

pub fn run(check: &Check, ctx: &Ctx) -> Outcome {
    use Check::*;
    let id = check.id();
    let mut rng = ctx.rng(&id);
    let rng = &mut rng;
    match *check {
        AlgebraEmbedding => algebra_embedding(rng),
        AlgebraNorm => algebra_norm(rng),
        TensorCasimir { n } => tensor_casimir(n),
        TensorSlots { n } => tensor_slots(rng, n),
        DiffopsIdentities => diffops_identities(rng),
        DiffopsDn { n } => diffops_dn(rng, ctx, n),
        BasisRegular { n, l } => basis_regular(n, l),
        BasisRecursion { family, n } => {
            let rep = recursion_check(family, n - 1, ctx.l2()).map_err(werr)?;
            match rep.mismatches.first() {
                None => Ok(rep.checked),
                Some(m) => Err(json!({
                    "function": m.index.to_string(),
                    "relation": m.what,
                    "expected": m.expected.to_json(),
                    "got": m.got.to_json(),
                })),
            }
        }
        KernelMoments => kernel_moments(),
        KernelSymbol { n } => kernel_symbol(n),
        KernelExpansion { n, l } => kernel_expansion(n, l),
        Orthogonality { n } => orthogonality(ctx, n),
        DegSwitch { n } => deg_switch(ctx, n),
        CauchyTheorem { n } => cauchy_theorem(rng, ctx, n),
        Laurent { n } => laurent(rng, ctx, n),
        Reproduce { n, l } => reproduce(rng, n, l),
        LieRegularity { n } => lie_regularity(ctx, n),
        LieInvariance { n } => lie_invariance(ctx, n),
        LieSigma { n } => lie_sigma(rng, ctx, n),
        LieBracket { n } => lie_bracket(rng, ctx, n),
        Ktypes { space, n } => {
            let census = ktype_census(space, n, ctx.l2()).map_err(werr)?;
            if let Some(row) = census.rows.iter().find(|r| !r.ok()) {
                return Err(json!({
                    "degree": row.degree,
                    "l": row.l.to_string(),
                    "expected_dim": row.expected_dim,
                    "span_dim": row.span_dim,
                    "kernel_dim": row.kernel_dim,
                    "members_ok": row.members_ok,
                    "lowest_weight_ok": row.lowest_weight_ok,
                }));
            }
            ensure(
                census.gap_degrees_empty,
                || json!({"gap_degrees_empty": false}),
            )?;
            Ok(census.rows.len())
        }
        Generation { space, n, l } => {
            let rep = generation_check(space, n, space.degree(n, l.twice())).map_err(werr)?;
            let names = |v: &[BasisIndex]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>();
            ensure(rep.ok(), || {
                json!({
                    "degree": rep.degree,
                    "down_failures": names(&rep.down_failures),
                    "up_failures": names(&rep.up_failures),
                    "stray_images": rep.stray_images,
                })
            })?;
            Ok(1)
        }
        Unitary { space, n } => {
            let rep = unitarity_check(space, n, ctx.l2()).map_err(werr)?;
            ensure(rep.ok(), || {
                json!({
                    "predicted_sign": rep.predicted_sign,
                    "blocks": format!("{:?}", rep.blocks),
                    "invariance_failures": rep.invariance_failures.iter().take(3).map(|f| format!("{f:?}")).collect::<Vec<_>>(),
                })
            })?;
            Ok(rep.blocks.len() + rep.invariance_checked)
        }
    }
}

fn algebra_embedding(rng: &mut ChaCha8Rng) -> Outcome {
    let e = |k| Biquaternion::e(k);
    let minus_one = -&Biquaternion::one();
    let mut count = 0;
    ensure(
        e(0) == Biquaternion::one(),
        || json!({"relation": "e0 = 1"}),
    )?;
    for k in 1..=3 {
        ensure(
            &e(k) * &e(k) == minus_one,
            || json!({"relation": format!("e{k}^2 = -1")}),
        )?;
        let (a, b) = (k % 3 + 1, (k + 1) % 3 + 1);
        ensure(
            &e(a) * &e(b) == e(k),
            || json!({"relation": format!("e{a} e{b} = e{k}")}),
        )?;
        count += 2;
    }
    for _ in 0..50 {
        let x = real_point(rng, -6..=6, 5);
        let coords = x.to_coords();
        let sum = coords.0.iter().fold(Q::zero(), |s, c| &s + &(c * c));
        ensure(
            x.is_real_quaternion() && x.norm() == sum,
            || json!({"point": format!("{:?}", coords.0)}),
        )?;
        count += 1;
    }
    Ok(count)
}

fn algebra_norm(rng: &mut ChaCha8Rng) -> Outcome {
    let one = Biquaternion::one();
    for _ in 0..100 {
        let (p, q) = (rand_quat(rng), rand_quat(rng));
        let pq = &p * &q;
        let w = || json!({"p": format!("{p:?}"), "q": format!("{q:?}")});
        ensure(pq.norm() == &p.norm() * &q.norm(), w)?;
        ensure(pq.conj_plus() == &q.conj_plus() * &p.conj_plus(), w)?;
        ensure(&p * &p.conj_plus() == Biquaternion::scalar(p.norm()), w)?;
        if p.is_invertible() {
            let inv = p.invert().map_err(werr)?;
            ensure(&p * &inv == one && &inv * &p == one, w)?;
        }
    }
    Ok(100)
}

fn tensor_casimir(n: usize) -> Outcome {
    let rank = TensorRank::new(n).map_err(werr)?;
    let mut count = 0;
    for side in [Side::Column, Side::Row] {
        for index in 0..rank.dim() {
            let t = SpinorTensor::basis(side, rank, index).symmetrize();
            for j in 1..=n {
                for k in (1..=n).filter(|&k| k != j) {
                    let c = t.casimir_slot_sum(j, k).map_err(werr)?;
                    ensure(
                        c.is_zero(),
                        || json!({"side": side.name(), "index": index, "slots": [j, k]}),
                    )?;
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn tensor_slots(rng: &mut ChaCha8Rng, n: usize) -> Outcome {
    let rank = TensorRank::new(n).map_err(werr)?;
    let mut count = 0;
    for side in [Side::Column, Side::Row] {
        for _ in 0..10 {
            let data = (0..rank.dim()).map(|_| rand_q(rng)).collect();
            let t = SpinorTensor::from_data(side, rank, data).map_err(werr)?;
            let (a, b) = (rand_quat(rng), rand_quat(rng));
            let w = || json!({"side": side.name(), "tensor": format!("{t:?}")});
            for j in 1..=n {
                for k in (1..=n).filter(|&k| k != j) {
                    let ab = t
                        .slot_apply(&a, j)
                        .and_then(|x| x.slot_apply(&b, k))
                        .map_err(werr)?;
                    let ba = t
                        .slot_apply(&b, k)
                        .and_then(|x| x.slot_apply(&a, j))
                        .map_err(werr)?;
                    ensure(ab == ba, w)?;
                }
            }
            let s = t.symmetrize();
            ensure(s.symmetrize() == s, w)?;
            ensure(s.apply_all_slots(&a).is_symmetric(), w)?;
            count += 1;
        }
    }
    Ok(count)
}

fn diffops_identities(rng: &mut ChaCha8Rng) -> Outcome {
    let zm = z_matrix();
    let zp = {
        let [[a, b], [c, d]] = &zm;
        [[d.clone(), b.neg()], [c.neg(), a.clone()]]
    };
    let mut spanning = Vec::new();
    for total in 0..=8u32 {
        for a in 0..=total {
            for b in 0..=total - a {
                for c in 0..=total - a - b {
                    for slot in 0..2 {
                        spanning.push(([a, b, c, total - a - b - c], slot));
                    }
                }
            }
        }
    }
    let r1 = TensorRank::new(1).map_err(werr)?;
    let two = Q::from_int(2);
    let picks = sample(rng, spanning.len(), 64).into_vec();
    for &i in &picks {
        let (e, slot) = spanning[i];
        let mut comps = vec![LaurentFn::zero(); 2];
        comps[slot] = LaurentFn::new(Poly::monomial(e, Q::one()), 2);
        let t = TensorFn::new(Side::Column, r1, comps).map_err(werr)?;
        let w = || json!({"exponents": e, "component": slot, "denominator_power": 2});
        let lhs = deg_shift(&t, 2).scale(&two);
        let a1 = nabla_plus_slot(&t, 1)
            .and_then(|x| x.slot_mul(&zp, 1))
            .map_err(werr)?;
        let b1 = t
            .slot_mul(&zm, 1)
            .and_then(|x| nabla_slot(&x, 1))
            .map_err(werr)?;
        ensure(a1.add(&b1).map_err(werr)? == lhs, w)?;
        let a2 = t
            .slot_mul(&zp, 1)
            .and_then(|x| nabla_plus_slot(&x, 1))
            .map_err(werr)?;
        let b2 = nabla_slot(&t, 1)
            .and_then(|x| x.slot_mul(&zm, 1))
            .map_err(werr)?;
        ensure(a2.add(&b2).map_err(werr)? == lhs, w)?;
        let lap = t.map(laplacian);
        let c1 = nabla_slot(&t, 1)
            .and_then(|x| nabla_plus_slot(&x, 1))
            .map_err(werr)?;
        let c2 = nabla_plus_slot(&t, 1)
            .and_then(|x| nabla_slot(&x, 1))
            .map_err(werr)?;
        ensure(c1 == lap && c2 == lap, w)?;
    }
    Ok(picks.len())
}

fn diffops_dn(rng: &mut ChaCha8Rng, ctx: &Ctx, n: usize) -> Outcome {
    let mut count = 0;
    for fams in [[Family::F, Family::Fp], [Family::G, Family::Gp]] {
        let pool: Vec<_> = fams.iter().flat_map(|&f| members(f, n, ctx.l2())).collect();
        for _ in 0..10 {
            let f = random_combination(rng, &pool, fams[0].side(), n)?;
            let w = || json!({"function": f.to_json()});
            ensure(dn(&dn_inverse(&f).map_err(werr)?) == f, w)?;
            ensure(dn_inverse(&dn(&f)).map_err(werr)? == f, w)?;
            count += 1;
        }
    }
    Ok(count)
}

fn basis_regular(n: usize, l: HalfInt) -> Outcome {
    let mut count = 0;
    for fam in Family::ALL {
        for idx in members(fam, n, l.twice()).into_iter().filter(|i| i.l == l) {
            let f = load(&idx)?;
            let r = is_n_regular_on(&f, fam.side()).map_err(werr)?;
            ensure(r.regular && r.symmetric, || {
                json!({
                    "function": idx.to_string(),
                    "symmetric": r.symmetric,
                    "remainder": r.witness.as_ref().map(|(k, t)| json!({"slot": k, "value": t.to_json()})),
                })
            })?;
            ensure(
                f.homogeneous_degree() == Some(idx.degree()),
                || json!({"function": idx.to_string(), "expected_degree": idx.degree(), "degrees": f.degrees()}),
            )?;
            count += 1;
        }
    }
    Ok(count)
}

fn kernel_moments() -> Outcome {
    let table = moment_table(8);
    let mut count = 0;
    for t in &table {
        let e = t.exponents;
        let total: u32 = e.iter().sum();
        let w = || json!({"exponents": e, "value": t.value.to_string()});
        if total == 0 {
            ensure(t.value.is_one(), w)?;
        }
        if total == 2 && e.contains(&2) {
            ensure(
                t.value == num_rational::BigRational::new(1.into(), 4.into()),
                w,
            )?;
        }
        if total <= 6 {
            let sum = (0..4).fold(num_rational::BigRational::zero(), |s, i| {
                let mut f = e;
                f[i] += 2;
                s + sphere_moment(f)
            });
            ensure(sum == t.value, w)?;
            let m = LaurentFn::poly(Poly::monomial(e, Q::one()));
            ensure(
                integrate_s3(&m) == integrate_s3_z(&m),
                || json!({"z_exponents": e}),
            )?;
        }
        count += 1;
    }
    Ok(count)
}

fn kernel_symbol(n: usize) -> Outcome {
    let k = kernel(n).map_err(werr)?;
    let reflected = k.reflect();
    for (i, c) in k.comps.iter().enumerate() {
        let w = || json!({"entry": i, "value": c.to_json()});
        ensure(laplacian(c).is_zero(), w)?;
        ensure(
            c.is_zero() || c.homogeneous_degree() == Some(-(n as i64 + 2)),
            w,
        )?;
        ensure(reflected.comps[i] == c.scale(&sign(n + 1)), w)?;
    }
    Ok(k.comps.len())
}

fn kernel_expansion(n: usize, l: HalfInt) -> Outcome {
    let k = kernel(n).map_err(werr)?;
    let d = l.twice();
    let taylor = kernel_taylor(&k, d as u32);
    let terms = (d as usize + 1) * (d as usize + n + 1);
    for form in [ExpansionForm::FGp, ExpansionForm::FpG] {
        let lvl = expansion_level(n, d, form).map_err(werr)?;
        let w = || json!({"form": format!("{form:?}"), "terms": lvl.term_count, "expected_terms": terms});
        ensure(lvl.term_count == terms, w)?;
        ensure(lvl.coeffs == taylor, w)?;
    }
    Ok(2)
}

fn orthogonality(ctx: &Ctx, n: usize) -> Outcome {
    let mut count = 0;
    for ff in [Family::F, Family::Fp] {
        for gf in [Family::G, Family::Gp] {
            for f in members(ff, n, ctx.l2()) {
                for g in members(gf, n, ctx.l2()) {
                    let got = member_pairing(&f, &g).map_err(werr)?;
                    let same = f.l == g.l && f.mu == g.mu && f.nu == g.nu;
                    let want = match (ff, gf) {
                        (Family::F, Family::Gp) if same => Q::one(),
                        (Family::Fp, Family::G) if same => sign(n),
                        _ => Q::zero(),
                    };
                    ensure(
                        got == want,
                        || json!({"f": f.to_string(), "g": g.to_string(), "got": got.to_string(), "expected": want.to_string()}),
                    )?;
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn deg_switch(ctx: &Ctx, n: usize) -> Outcome {
    let mut count = 0;
    for (ff, gf) in [(Family::F, Family::Gp), (Family::Fp, Family::G)] {
        for f in members(ff, n, ctx.l2()) {
            let g = f.with_family(gf);
            let ok = deg_switch_check(&*load(&f)?, &*load(&g)?).map_err(werr)?;
            ensure(ok, || json!({"f": f.to_string(), "g": g.to_string()}))?;
            count += 1;
        }
    }
    Ok(count)
}

fn cauchy_theorem(rng: &mut ChaCha8Rng, ctx: &Ctx, n: usize) -> Outcome {
    let l2 = ctx.l2().min(1);
    let fs = members(Family::F, n, l2);
    let gs = members(Family::G, n, l2);
    let pairs = fs.len() * gs.len();
    let picks = sample(rng, pairs, pairs.min(12)).into_vec();
    for &p in &picks {
        let (f, g) = (fs[p / gs.len()], gs[p % gs.len()]);
        for slot in 1..=n {
            let ok = cauchy_theorem_check(&*load(&f)?, &*load(&g)?, slot).map_err(werr)?;
            ensure(
                ok,
                || json!({"f": f.to_string(), "g": g.to_string(), "slot": slot}),
            )?;
        }
    }
    Ok(picks.len() * n)
}

fn laurent(rng: &mut ChaCha8Rng, ctx: &Ctx, n: usize) -> Outcome {
    let mut count = 0;
    for fams in [[Family::F, Family::Fp], [Family::G, Family::Gp]] {
        let pool: Vec<_> = fams.iter().flat_map(|&f| members(f, n, ctx.l2())).collect();
        for _ in 0..5 {
            let f = random_combination(rng, &pool, fams[0].side(), n)?;
            let back = laurent_coefficients(&f, ctx.l2())
                .and_then(|c| c.reconstruct())
                .map_err(werr)?;
            ensure(
                back == f,
                || json!({"function": f.to_json(), "reconstructed": back.to_json()}),
            )?;
            count += 1;
        }
    }
    Ok(count)
}

fn reproduce(rng: &mut ChaCha8Rng, n: usize, l: HalfInt) -> Outcome {
    // |x|^2 <= 4 (3/8)^2 < 1 inside; exterior points are integral with |x|^2 >= 2
    let interior: Vec<_> = (0..3).map(|_| real_point(rng, -3..=3, 8)).collect();
    let mut exterior = Vec::new();
    while exterior.len() < 2 {
        let w = real_point(rng, -2..=2, 1);
        if w.norm() != Q::zero() && w.norm() != Q::one() {
            exterior.push(w);
        }
    }
    let mut count = 0;
    for idx in members(Family::F, n, l.twice())
        .into_iter()
        .filter(|i| i.l == l)
    {
        let f = load(&idx)?;
        for w in &interior {
            let want = dn_at(&f, w).map_err(werr)?;
            for form in [ExpansionForm::FpG, ExpansionForm::FGp] {
                let got = cauchy_fueter_apply_with(&f, w, l.twice(), form).map_err(werr)?;
                ensure(
                    got == want,
                    || json!({"function": idx.to_string(), "point": format!("{:?}", w.to_coords().0), "form": format!("{form:?}")}),
                )?;
            }
            count += 1;
        }
        for w in &exterior {
            let got = cauchy_fueter_apply(&f, w, l.twice()).map_err(werr)?;
            ensure(
                got.is_zero(),
                || json!({"function": idx.to_string(), "exterior_point": format!("{:?}", w.to_coords().0)}),
            )?;
            count += 1;
        }
    }
    Ok(count)
}

fn lie_regularity(ctx: &Ctx, n: usize) -> Outcome {
    let gens: Vec<_> = one_block_generators()
        .into_iter()
        .chain(u22_generators())
        .collect();
    let mut count = 0;
    for fam in Family::ALL {
        for idx in members(fam, n, ctx.l2()) {
            let f = load(&idx)?;
            for (name, x) in &gens {
                let ok = regularity_preservation_check(x, &f).map_err(werr)?;
                ensure(
                    ok,
                    || json!({"generator": name, "function": idx.to_string()}),
                )?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn block_shift(x: &GlElement) -> i64 {
    if !x.b.is_zero() {
        -1
    } else if !x.c.is_zero() {
        1
    } else {
        0
    }
}

fn lie_invariance(ctx: &Ctx, n: usize) -> Outcome {
    let fs: Vec<_> = [Family::F, Family::Fp]
        .iter()
        .flat_map(|&f| members(f, n, ctx.l2()))
        .collect();
    let gs: Vec<_> = [Family::G, Family::Gp]
        .iter()
        .flat_map(|&f| members(f, n, ctx.l2() + 1))
        .collect();
    let mut count = 0;
    for (name, x) in one_block_generators() {
        let s = block_shift(&x);
        // act once per function; only complementary pairs can be nonzero
        let mut moved_g: HashMap<BasisIndex, SphereData> = HashMap::new();
        for fi in &fs {
            let partners: Vec<_> = gs
                .iter()
                .filter(|g| fi.degree() + g.degree() + s == -(n as i64 + 2))
                .collect();
            if partners.is_empty() {
                continue;
            }
            let moved_f = act_algebra_left(&x, &*load(fi)?)
                .and_then(|f| left_data(&f, true))
                .map_err(werr)?;
            for gi in partners {
                if !moved_g.contains_key(gi) {
                    let d = act_algebra_right(&x, &*load(gi)?)
                        .and_then(|g| right_data(&g))
                        .map_err(werr)?;
                    moved_g.insert(*gi, d);
                }
                let lhs = integrate_contraction(&moved_f, &*member_data(gi).map_err(werr)?)
                    .map_err(werr)?;
                let rhs = integrate_contraction(&*member_data(fi).map_err(werr)?, &moved_g[gi])
                    .map_err(werr)?;
                ensure(
                    (&lhs + &rhs).is_zero(),
                    || json!({"generator": name, "f": fi.to_string(), "g": gi.to_string(), "sum": (&lhs + &rhs).to_string()}),
                )?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn lie_sigma(rng: &mut ChaCha8Rng, ctx: &Ctx, n: usize) -> Outcome {
    let mut blocks: Vec<Biquaternion> = (0..4).map(|k| Biquaternion::unit(k / 2, k % 2)).collect();
    blocks.push(rand_quat(rng));
    let mut count = 0;
    for idx in [Family::F, Family::Fp]
        .iter()
        .flat_map(|&f| members(f, n, ctx.l2()))
    {
        let f = load(&idx)?;
        for m in &blocks {
            for which in [Block::B, Block::C] {
                let ok = sigma_intertwine_check(&GlElement::block(which, m.clone()), &f)
                    .map_err(werr)?;
                ensure(
                    ok,
                    || json!({"block": which.name(), "matrix": format!("{m:?}"), "function": idx.to_string()}),
                )?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn lie_bracket(rng: &mut ChaCha8Rng, ctx: &Ctx, n: usize) -> Outcome {
    let mut count = 0;
    for _ in 0..4 {
        let (x, y) = (gl_random(rng), gl_random(rng));
        let xy = x.bracket(&y);
        for fam in Family::ALL {
            let pool = members(fam, n, ctx.l2());
            let idx = pool[rng.gen_range(0..pool.len())];
            let f = load(&idx)?;
            let apply = |z: &GlElement, g: &TensorFn| act_algebra(z, g).map_err(werr);
            let lhs = apply(&x, &apply(&y, &f)?)?
                .sub(&apply(&y, &apply(&x, &f)?)?)
                .map_err(werr)?;
            ensure(
                lhs == apply(&xy, &f)?,
                || json!({"x": format!("{x:?}"), "y": format!("{y:?}"), "function": idx.to_string()}),
            )?;
            count += 1;
        }
    }
    Ok(count)
}
