//! Sparse polynomials in the four matrix entries `z11, z12, z21, z22`.
//!
//! Exponent tuples are ordered lexicographically with `z11 > z12 > z21 > z22`,
//! which makes `z11·z22` the leading term of `N = z11 z22 - z12 z21` and lets
//! exact division by `N` run as plain single-divisor reduction.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::quat::Biquaternion;
use crate::scalar::GaussianRational;

type Q = GaussianRational;

pub type Exps = [u32; 4];

/// Variable index of the entry `z_{r+1, c+1}`.
#[inline]
pub const fn var(r: usize, c: usize) -> usize {
    2 * r + c
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exps, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn monomial(e: Exps, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// The coordinate function `z_{r+1, c+1}`.
    pub fn z(r: usize, c: usize) -> Self {
        let mut e = [0; 4];
        e[var(r, c)] = 1;
        Self::monomial(e, Q::one())
    }

    /// `N(Z) = z11 z22 - z12 z21`.
    pub fn norm() -> Self {
        let mut p = Self::monomial([1, 0, 0, 1], Q::one());
        p.add_term([0, 1, 1, 0], &Q::from_int(-1));
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Exps, Q)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exps) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: Exps, c: &Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            self.add_term(*e, c);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        big.add_assign(small);
        big
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(add_exps(ea, eb), &(ca * cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, e: &Exps, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(ea, ca)| (add_exps(ea, e), ca * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// `∂/∂z_v`.
    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut d = *e;
            d[v] -= 1;
            out.add_term(d, &(c * &Q::from_int(e[v] as i64)));
        }
        out
    }

    /// Sorted distinct total degrees of the terms.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(total).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Multiplies each term by `f(total degree)`.
    pub fn map_by_degree(&self, f: impl Fn(u32) -> Q) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(e, c)| (*e, c * &f(total(e)))))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Exact quotient by `N`, or `None` when `N` does not divide.
    pub fn div_norm(&self) -> Option<Poly> {
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some((&e, c)) = rem.terms.iter().next_back() {
            if e[0] == 0 || e[3] == 0 {
                return None;
            }
            let c = c.clone();
            let qe = [e[0] - 1, e[1], e[2], e[3] - 1];
            quo.add_term(qe, &c);
            rem.add_term(e, &-&c);
            rem.add_term([qe[0], qe[1] + 1, qe[2] + 1, qe[3]], &c);
        }
        Some(quo)
    }

    pub fn evaluate(&self, z: &Biquaternion) -> Q {
        let vals = [
            z.m[0][0].clone(),
            z.m[0][1].clone(),
            z.m[1][0].clone(),
            z.m[1][1].clone(),
        ];
        let mut cache: [Vec<Q>; 4] = Default::default();
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..4 {
                let k = e[v] as usize;
                while cache[v].len() <= k {
                    let next = match cache[v].last() {
                        None => Q::one(),
                        Some(p) => p * &vals[v],
                    };
                    cache[v].push(next);
                }
                t = &t * &cache[v][k];
            }
            acc += &t;
        }
        acc
    }

    /// Substitutes `z_v ↦ forms[v]`, each a polynomial.
    pub fn substitute(&self, forms: &[Poly; 4]) -> Poly {
        let mut powers: [Vec<Poly>; 4] = Default::default();
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for v in 0..4 {
                let k = e[v] as usize;
                while powers[v].len() <= k {
                    let next = match powers[v].last() {
                        None => Poly::one(),
                        Some(p) => p.mul(&forms[v]),
                    };
                    powers[v].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[v][k]);
                }
            }
            out.add_assign(&t);
        }
        out
    }

    /// Relabels variables: exponent of `z_v` moves to `perm[v]`, coefficient
    /// of each term is multiplied by `signs[v]^{e_v}`.
    pub fn permute_vars(&self, perm: [usize; 4], signs: [i8; 4]) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(e, c)| {
            let mut out = [0; 4];
            let mut neg = false;
            for v in 0..4 {
                out[perm[v]] = e[v];
                if signs[v] < 0 && e[v] % 2 == 1 {
                    neg = !neg;
                }
            }
            (out, if neg { -c } else { c.clone() })
        }))
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(mut self, o: Poly) -> Poly {
        self.add_assign(&o);
        self
    }
}

impl std::ops::Add<&Poly> for Poly {
    type Output = Poly;
    fn add(mut self, o: &Poly) -> Poly {
        self.add_assign(o);
        self
    }
}

#[inline]
pub fn total(e: &Exps) -> u32 {
    e.iter().sum()
}

#[inline]
pub fn add_exps(a: &Exps, b: &Exps) -> Exps {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["z11", "z12", "z21", "z22"];
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = (0..4)
                    .filter(|&v| e[v] > 0)
                    .map(|v| match e[v] {
                        1 => names[v].to_string(),
                        k => format!("{}^{k}", names[v]),
                    })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
