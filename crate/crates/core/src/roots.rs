//! Finite crystallographic root systems.
//!
//! Simple roots follow Bourbaki numbering; generator `i` (1-based) is the
//! reflection in `α_i` and index 0 is reserved for the affine generator.
//!
//! | type | diagram | highest root marks |
//! |------|---------|--------------------|
//! | A_n  | 1-2-…-n | (1, …, 1) |
//! | B_n  | 1-2-…-(n-1)=>n, α_n short | (1, 2, …, 2) |
//! | C_n  | 1-2-…-(n-1)<=n, α_n long | (2, …, 2, 1) |
//! | D_n  | 1-2-…-(n-2) with n-1 and n attached to n-2 | (1, 2, …, 2, 1, 1) |
//! | G_2  | 1≡>2, α_1 short | (3, 2) |
//! | F_4  | 1-2=>3-4, α_3, α_4 short | (2, 3, 4, 2) |
//! | E_6  | 1-3-4-5-6 with 2 attached to 4 | (1, 2, 2, 3, 2, 1) |
//!
//! The Cartan matrix entry `A[i][j]` is `⟨α_i^∨, α_j⟩`. Roots are integer
//! vectors in the simple-root basis; coweights and coroots are integer vectors
//! in the simple-coroot basis.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{CoxError, Result};

/// Largest Weyl group order accepted.
pub const MAX_GROUP_ORDER: u64 = 60_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A family and rank, such as `B3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        let t = Self { family, rank };
        if ok {
            Ok(t)
        } else {
            Err(CoxError::UnsupportedType(t.to_string()))
        }
    }

    /// |W| from the classical product formulas.
    pub fn group_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i - 1][j - 1] = -1;
            a[j - 1][i - 1] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => (1..n).for_each(|i| link(i, i + 1)),
            Family::D => {
                (1..n - 1).for_each(|i| link(i, i + 1));
                link(n - 2, n);
            }
            Family::E => {
                link(1, 3);
                (3..n).for_each(|i| link(i, i + 1));
                link(2, 4);
            }
            Family::F => (1..4).for_each(|i| link(i, i + 1)),
            Family::G => link(1, 2),
        }
        match self.family {
            Family::B => a[n - 1][n - 2] = -2,
            Family::C => a[n - 2][n - 1] = -2,
            Family::F => a[2][1] = -2,
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{}{}", c, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = CoxError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || CoxError::UnsupportedType(s.to_string());
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let digits = chars.as_str().trim_start_matches('_');
        let rank: usize = digits.parse().map_err(|_| bad())?;
        CartanType::new(family, rank)
    }
}

/// Integer coordinates in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Vec<i64>);

/// Integer coordinates in the simple-coroot basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CorootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Self(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Positive means nonzero with all coordinates nonnegative.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }
}

impl CorootVec {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Self(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|c| c * k).collect())
    }
}

/// Immutable Cartan datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    /// `d_i = |α_i|²/2` scaled so short roots have `d = 1`.
    root_scale: Vec<i64>,
    positive_roots: Vec<RootVec>,
    positive_coroots: Vec<CorootVec>,
    highest_root: RootVec,
    highest_coroot: CorootVec,
    /// `2ρ` in the root basis.
    two_rho: RootVec,
    /// `2ρ^∨` in the coroot basis.
    two_rho_vee: CorootVec,
    marks: Vec<i64>,
    comarks: Vec<i64>,
    coxeter_number: i64,
    group_order: u64,
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> Result<Self> {
        let order = cartan_type.group_order();
        if order > MAX_GROUP_ORDER {
            return Err(CoxError::RankTooLarge {
                tag: cartan_type.to_string(),
                order,
                cap: MAX_GROUP_ORDER,
            });
        }
        let n = cartan_type.rank;
        let cartan = cartan_type.cartan_matrix();
        let root_scale = symmetrizer(&cartan);
        let positive_roots = enumerate_positive_roots(&cartan);
        assert_eq!(
            positive_roots.len(),
            cartan_type.positive_root_count(),
            "root closure for {cartan_type} disagrees with the classical count"
        );
        let sym = |a: &RootVec, b: &RootVec| -> i64 {
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    s += a.0[i] * root_scale[i] * cartan[i][j] * b.0[j];
                }
            }
            s
        };
        let positive_coroots: Vec<CorootVec> = positive_roots
            .iter()
            .map(|r| {
                let half_norm = sym(r, r) / 2;
                CorootVec(
                    (0..n)
                        .map(|i| {
                            let c = r.0[i] * root_scale[i];
                            debug_assert_eq!(c % half_norm, 0);
                            c / half_norm
                        })
                        .collect(),
                )
            })
            .collect();
        let (top, highest_root) = positive_roots
            .iter()
            .enumerate()
            .max_by_key(|(_, r)| r.height())
            .map(|(i, r)| (i, r.clone()))
            .unwrap();
        let highest_coroot = positive_coroots[top].clone();
        let mut two_rho = RootVec::zero(n);
        for r in &positive_roots {
            for i in 0..n {
                two_rho.0[i] += r.0[i];
            }
        }
        let mut two_rho_vee = CorootVec::zero(n);
        for r in &positive_coroots {
            for i in 0..n {
                two_rho_vee.0[i] += r.0[i];
            }
        }
        let marks = highest_root.0.clone();
        let comarks = highest_coroot.0.clone();
        let coxeter_number = highest_root.height() + 1;
        Ok(Self {
            cartan_type,
            cartan,
            root_scale,
            positive_roots,
            positive_coroots,
            highest_root,
            highest_coroot,
            two_rho,
            two_rho_vee,
            marks,
            comarks,
            coxeter_number,
            group_order: order,
        })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[RootVec] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> &[CorootVec] {
        &self.positive_coroots
    }

    pub fn highest_root(&self) -> &RootVec {
        &self.highest_root
    }

    pub fn highest_coroot(&self) -> &CorootVec {
        &self.highest_coroot
    }

    pub fn two_rho(&self) -> &RootVec {
        &self.two_rho
    }

    pub fn two_rho_vee(&self) -> &CorootVec {
        &self.two_rho_vee
    }

    /// Marks `a_1..a_n` (the coefficients of θ); `a_0 = 1` is implicit.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    /// Comarks `a_1^∨..a_n^∨` (the coefficients of θ^∨); `a_0^∨ = 1`.
    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    pub fn coxeter_number(&self) -> i64 {
        self.coxeter_number
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn simple_root(&self, i: usize) -> RootVec {
        RootVec::unit(self.rank(), i - 1)
    }

    pub fn simple_coroot(&self, i: usize) -> CorootVec {
        CorootVec::unit(self.rank(), i - 1)
    }

    /// Canonical pairing `⟨λ, α⟩`.
    pub fn pair(&self, lambda: &CorootVec, alpha: &RootVec) -> Result<i64> {
        let n = self.rank();
        if lambda.0.len() != n {
            return Err(CoxError::DimensionMismatch { expected: n, got: lambda.0.len() });
        }
        if alpha.0.len() != n {
            return Err(CoxError::DimensionMismatch { expected: n, got: alpha.0.len() });
        }
        Ok(self.pair_unchecked(lambda, alpha))
    }

    pub(crate) fn pair_unchecked(&self, lambda: &CorootVec, alpha: &RootVec) -> i64 {
        let mut s = 0;
        for (i, &l) in lambda.0.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let row = &self.cartan[i];
            for (j, &a) in alpha.0.iter().enumerate() {
                s += l * row[j] * a;
            }
        }
        s
    }

    /// `⟨λ, α_j⟩` for every simple root.
    pub fn pair_simple(&self, lambda: &CorootVec) -> Vec<i64> {
        let n = self.rank();
        (0..n).map(|j| (0..n).map(|i| lambda.0[i] * self.cartan[i][j]).sum()).collect()
    }

    /// `s_i` acting on a root-basis vector.
    pub fn reflect_root(&self, i: usize, v: &RootVec) -> RootVec {
        let k = i - 1;
        let c: i64 = (0..self.rank()).map(|j| self.cartan[k][j] * v.0[j]).sum();
        let mut out = v.clone();
        out.0[k] -= c;
        out
    }

    /// `s_i` acting on a coroot-basis vector.
    pub fn reflect_coroot(&self, i: usize, v: &CorootVec) -> CorootVec {
        let k = i - 1;
        let c: i64 = (0..self.rank()).map(|j| v.0[j] * self.cartan[j][k]).sum();
        let mut out = v.clone();
        out.0[k] -= c;
        out
    }

    /// Coroot of a (positive or negative) root.
    pub fn coroot_of(&self, alpha: &RootVec) -> CorootVec {
        let n = self.rank();
        let mut norm = 0;
        for i in 0..n {
            for j in 0..n {
                norm += alpha.0[i] * self.root_scale[i] * self.cartan[i][j] * alpha.0[j];
            }
        }
        let half = norm / 2;
        CorootVec((0..n).map(|i| alpha.0[i] * self.root_scale[i] / half).collect())
    }

    /// Gram matrix of the simple coroots under the fixed invariant form.
    ///
    /// Entry `(i, j)` is `A[i][j] · d_max / d_j`; for simply-laced types this is
    /// the Cartan matrix itself.
    pub fn coroot_gram(&self) -> Vec<Vec<i64>> {
        let dmax = *self.root_scale.iter().max().unwrap();
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.cartan[i][j] * dmax / self.root_scale[j]).collect())
            .collect()
    }

    /// Squared norm of a rational coroot-basis vector.
    pub fn norm_sq(&self, v: &[Rational64]) -> Rational64 {
        let g = self.coroot_gram();
        let mut s = Rational64::from_integer(0);
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                s += vi * vj * g[i][j];
            }
        }
        s
    }

    /// Inner product of two float coroot-basis vectors.
    pub fn inner_f64(&self, a: &[f64], b: &[f64]) -> f64 {
        let g = self.coroot_gram();
        let mut s = 0.0;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                s += ai * bj * g[i][j] as f64;
            }
        }
        s
    }

    /// Fundamental coweight `ω_i^∨` in the coroot basis.
    pub fn fundamental_coweight(&self, i: usize) -> Vec<Rational64> {
        // Solve λ^T A = e_i, i.e. A^T λ = e_i.
        let n = self.rank();
        let mut m: Vec<Vec<Rational64>> = (0..n)
            .map(|r| {
                let mut row: Vec<Rational64> =
                    (0..n).map(|c| Rational64::from_integer(self.cartan[c][r])).collect();
                row.push(Rational64::from_integer((r + 1 == i) as i64));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| m[r][col] != Rational64::from_integer(0)).unwrap();
            m.swap(col, p);
            let inv = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v *= inv;
            }
            let pivot = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col {
                    let f = row[col];
                    for (c, pv) in pivot.iter().enumerate() {
                        row[c] -= f * pv;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[n]).collect()
    }

    /// Index of a positive root in [`Self::positive_roots`].
    pub fn root_index(&self, alpha: &RootVec) -> Option<usize> {
        self.positive_roots.iter().position(|r| r == alpha)
    }
}

fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    // d_i A_ij = d_j A_ji; propagate along the connected Dynkin diagram.
    let n = cartan.len();
    let mut d: Vec<Option<(i64, i64)>> = vec![None; n];
    d[0] = Some((1, 1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (p, q) = d[i].unwrap();
        for j in 0..n {
            if j != i && cartan[i][j] != 0 && d[j].is_none() {
                // d_j = d_i A_ij / A_ji
                d[j] = Some((p * cartan[i][j], q * cartan[j][i]));
                queue.push_back(j);
            }
        }
    }
    let fracs: Vec<Rational64> = d.iter().map(|x| {
        let (p, q) = x.unwrap();
        Rational64::new(p, q)
    }).collect();
    let min = *fracs.iter().min().unwrap();
    fracs.iter().map(|f| (f / min).to_integer()).collect()
}

fn enumerate_positive_roots(cartan: &[Vec<i64>]) -> Vec<RootVec> {
    let n = cartan.len();
    let mut seen: HashSet<RootVec> = HashSet::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<RootVec> = (0..n).map(|i| RootVec::unit(n, i)).collect();
    for r in &queue {
        seen.insert(r.clone());
    }
    while let Some(r) = queue.pop_front() {
        out.push(r.clone());
        for k in 0..n {
            let c: i64 = (0..n).map(|j| cartan[k][j] * r.0[j]).sum();
            let mut s = r.clone();
            s.0[k] -= c;
            if s.is_positive() && seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.0.cmp(&a.0)));
    out
}
