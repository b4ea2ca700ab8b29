//! Affine Weyl group elements `w·t_λ`, identified with alcoves.
//!
//! Conventions: `t_λ` acts on `V` by translation by `λ`, so `x = w t_λ` acts by
//! `v ↦ w(v + λ)` and its alcove is `A_x = x^{-1}(A°) = w^{-1}A° − λ`. A real
//! affine root `α + nδ` is the affine function `v ↦ ⟨v, α⟩ + n`; positive roots
//! are positive on the fundamental alcove `A°`. Generator 0 is
//! `s_0 = r_θ t_{−θ^∨}`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{CoxError, Result};
use crate::roots::{CorootVec, RootSystem, RootVec};
use crate::weyl::{word_string, WeylElement};

/// A real affine root `α + nδ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineRoot {
    pub alpha: RootVec,
    pub n: i64,
}

impl AffineRoot {
    pub fn new(alpha: RootVec, n: i64) -> Result<Self> {
        if alpha.is_zero() {
            return Err(CoxError::ZeroRealPart);
        }
        Ok(Self { alpha, n })
    }

    /// The simple affine root `α_i`; `α_0 = δ − θ`.
    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        if i == 0 {
            Self { alpha: rs.highest_root().neg(), n: 1 }
        } else {
            Self { alpha: rs.simple_root(i), n: 0 }
        }
    }

    pub fn is_positive(&self) -> bool {
        if self.alpha.is_positive() {
            self.n >= 0
        } else {
            self.n > 0
        }
    }
}

/// `w·t_λ` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    w: WeylElement,
    lambda: CorootVec,
}

/// JSON form of an affine element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRecord {
    pub word: Vec<usize>,
    #[serde(rename = "type")]
    pub type_word: String,
    pub lambda: Vec<i64>,
}

impl AffineElement {
    pub fn new(w: WeylElement, lambda: CorootVec) -> Result<Self> {
        if lambda.0.len() != w.rank() {
            return Err(CoxError::DimensionMismatch { expected: w.rank(), got: lambda.0.len() });
        }
        Ok(Self { w, lambda })
    }

    pub fn identity(rs: &RootSystem) -> Self {
        Self { w: WeylElement::identity(rs), lambda: CorootVec::zero(rs.rank()) }
    }

    pub fn translation(rs: &RootSystem, lambda: CorootVec) -> Result<Self> {
        Self::new(WeylElement::identity(rs), lambda)
    }

    /// The generator `s_i`, `0 ≤ i ≤ rank`.
    pub fn generator(rs: &RootSystem, i: usize) -> Result<Self> {
        if i > rs.rank() {
            return Err(CoxError::BadGenerator { index: i, rank: rs.rank() });
        }
        Ok(Self::identity(rs).left_mul_gen(rs, i).0)
    }

    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Result<Self> {
        let mut x = Self::identity(rs);
        for &i in word.iter().rev() {
            if i > rs.rank() {
                return Err(CoxError::BadGenerator { index: i, rank: rs.rank() });
            }
            x = x.left_mul_gen(rs, i).0;
        }
        Ok(x)
    }

    /// The finite part `w` (the type of the alcove).
    pub fn type_of(&self) -> &WeylElement {
        &self.w
    }

    pub fn lambda(&self) -> &CorootVec {
        &self.lambda
    }

    pub fn is_identity(&self) -> bool {
        self.w.is_identity() && self.lambda.is_zero()
    }

    /// `x · (α + nδ) = wα + (n − ⟨λ, α⟩)δ`.
    pub fn act_affine(&self, rs: &RootSystem, r: &AffineRoot) -> Result<AffineRoot> {
        if r.alpha.is_zero() {
            return Err(CoxError::ZeroRealPart);
        }
        Ok(AffineRoot {
            alpha: self.w.act_root(&r.alpha)?,
            n: r.n - rs.pair(&self.lambda, &r.alpha)?,
        })
    }

    /// `x^{-1} · (β + nδ) = w^{-1}β + (n + ⟨λ, w^{-1}β⟩)δ`.
    pub fn act_inverse(&self, rs: &RootSystem, r: &AffineRoot) -> AffineRoot {
        let beta = self.w.act_inv_root(&r.alpha);
        let n = r.n + rs.pair_unchecked(&self.lambda, &beta);
        AffineRoot { alpha: beta, n }
    }

    /// `(u t_μ)(v t_ν) = uv t_{v^{-1}μ + ν}`.
    pub fn multiply(&self, rs: &RootSystem, other: &Self) -> Result<Self> {
        let w = self.w.multiply(rs, &other.w)?;
        let lambda = other.w.act_inv_coroot(&self.lambda).add(&other.lambda);
        Ok(Self { w, lambda })
    }

    /// `(w t_λ)^{-1} = w^{-1} t_{−wλ}`.
    pub fn inverse(&self) -> Self {
        Self { w: self.w.inverse(), lambda: self.w.act_coroot_unchecked(&self.lambda).neg() }
    }

    /// Whether `s_i x > x`: the root `x^{-1} α_i` is positive.
    pub fn is_left_ascent(&self, rs: &RootSystem, i: usize) -> bool {
        self.act_inverse(rs, &AffineRoot::simple(rs, i)).is_positive()
    }

    /// `s_i · x` and whether the length went up.
    pub fn left_mul_gen(&self, rs: &RootSystem, i: usize) -> (Self, bool) {
        let up = self.is_left_ascent(rs, i);
        let next = if i == 0 {
            // s_0 w t_λ = r_θ w t_{λ − w^{-1}θ^∨}
            let r_theta = WeylElement::reflection(rs, rs.highest_root());
            let shift = self.w.act_inv_coroot(rs.highest_coroot());
            Self { w: r_theta.mul_unchecked(rs, &self.w), lambda: self.lambda.sub(&shift) }
        } else {
            Self { w: self.w.left_mul_simple(rs, i), lambda: self.lambda.clone() }
        };
        (next, up)
    }

    /// Number of positive affine roots made negative:
    /// `Σ_{α>0} |⟨λ, α⟩ + [wα < 0]|`.
    pub fn length(&self, rs: &RootSystem) -> usize {
        rs.positive_roots()
            .iter()
            .map(|a| {
                let m = rs.pair_unchecked(&self.lambda, a);
                let flip = !self.w.act_root_unchecked(a).is_positive() as i64;
                (m + flip).unsigned_abs() as usize
            })
            .sum()
    }

    /// Alcove lies in the fundamental chamber.
    pub fn is_affine_grassmannian(&self, rs: &RootSystem) -> bool {
        rs.positive_roots().iter().all(|a| {
            let m = rs.pair_unchecked(&self.lambda, a);
            if m > 0 {
                return false;
            }
            self.w.act_root_unchecked(a).is_positive() || m < 0
        })
    }

    /// Generators `i` with `s_i x > x`; never empty.
    pub fn up_moves(&self, rs: &RootSystem) -> Vec<usize> {
        (0..=rs.rank()).filter(|&i| self.is_left_ascent(rs, i)).collect()
    }

    /// Up moves whose result stays affine Grassmannian.
    pub fn grassmannian_up_moves(&self, rs: &RootSystem) -> Vec<usize> {
        (0..=rs.rank())
            .filter(|&i| {
                if !self.is_left_ascent(rs, i) {
                    return false;
                }
                self.left_mul_gen(rs, i).0.is_affine_grassmannian(rs)
            })
            .collect()
    }

    /// `λ` is regular: no root is orthogonal to it.
    pub fn is_regular(&self, rs: &RootSystem) -> bool {
        rs.positive_roots().iter().all(|a| rs.pair_unchecked(&self.lambda, a) != 0)
    }

    /// For regular `x = v t_{w^{-1}μ}` with `μ` anti-dominant, returns `w`
    /// (the alcove lies in the chamber `C_w`).
    pub fn chamber_of(&self, rs: &RootSystem) -> Option<WeylElement> {
        if !self.is_regular(rs) {
            return None;
        }
        Some(antidominant_witness(rs, &self.lambda).0)
    }

    /// Centroid of the alcove in simple-coroot coordinates.
    pub fn centroid(&self, rs: &RootSystem) -> Vec<Rational64> {
        let c = fundamental_centroid(rs);
        let moved = self.w.act_coroot_rational(&c, true);
        moved.iter().zip(&self.lambda.0).map(|(a, &l)| a - l).collect()
    }

    /// Lexicographically smallest reduced word, read left to right.
    pub fn reduced_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut x = self.clone();
        let mut word = Vec::new();
        loop {
            match (0..=rs.rank()).find(|&i| !x.is_left_ascent(rs, i)) {
                Some(i) => {
                    word.push(i);
                    x = x.left_mul_gen(rs, i).0;
                }
                None => return word,
            }
        }
    }

    /// The hyperplane crossed by `x → s_i x`, as the positive affine root
    /// `±x^{-1}α_i`.
    pub fn crossed_root(&self, rs: &RootSystem, i: usize) -> AffineRoot {
        let r = self.act_inverse(rs, &AffineRoot::simple(rs, i));
        if r.is_positive() {
            r
        } else {
            AffineRoot { alpha: r.alpha.neg(), n: -r.n }
        }
    }

    pub fn record(&self, rs: &RootSystem) -> AffineRecord {
        AffineRecord {
            word: self.reduced_word(rs),
            type_word: word_string(&self.w.reduced_word(rs)),
            lambda: self.lambda.0.clone(),
        }
    }
}

/// Centroid of `A°`: the average of `0` and `ω_i^∨ / a_i`.
pub fn fundamental_centroid(rs: &RootSystem) -> Vec<Rational64> {
    let n = rs.rank();
    let mut c = vec![Rational64::from_integer(0); n];
    for i in 1..=n {
        let w = rs.fundamental_coweight(i);
        let a = rs.marks()[i - 1];
        for k in 0..n {
            c[k] += w[k] / a;
        }
    }
    let k = Rational64::from_integer(n as i64 + 1);
    c.into_iter().map(|v| v / k).collect()
}

/// Returns `(u, μ)` with `μ = uλ` anti-dominant.
pub fn antidominant_witness(rs: &RootSystem, lambda: &CorootVec) -> (WeylElement, CorootVec) {
    let mut u = WeylElement::identity(rs);
    let mut mu = lambda.clone();
    loop {
        let p = rs.pair_simple(&mu);
        match p.iter().position(|&v| v > 0) {
            Some(k) => {
                mu = rs.reflect_coroot(k + 1, &mu);
                u = u.left_mul_simple(rs, k + 1);
            }
            None => return (u, mu),
        }
    }
}
