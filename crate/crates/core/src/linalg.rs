//! Exact rational linear algebra.
//!
//! Larger systems are scaled to integers and solved by p-adic (Dixon) lifting:
//! one LU factorization modulo a 31-bit prime, then one triangular solve per
//! p-adic digit, followed by rational reconstruction. Systems with large
//! entries fall back to multi-modular elimination with CRT. Either way a
//! candidate is accepted only after it satisfies the system exactly over the
//! rationals. [`solve_gauss`] is a direct fraction-based elimination used
//! for small systems and as an independent check in tests.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoxError, Result};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

/// Renders a rational as `p/q`, including integers (`1/1`).
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde adapter writing a rational as its `p/q` string.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Square matrix stored as sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, rows: vec![Vec::new(); n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: Rational) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.rows[i];
        match row.iter_mut().find(|(c, _)| *c == j) {
            Some((_, x)) => *x += v,
            None => row.push((j, v)),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                t.rows[*j].push((i, v.clone()));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, (j, v)| acc + v * &x[*j]))
            .collect()
    }

    pub fn vec_mul(&self, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n];
        for (i, row) in self.rows.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            for (j, v) in row {
                out[*j] += v * &x[i];
            }
        }
        out
    }
}

/// Solves `a · x = b` exactly.
pub fn solve(a: &SparseMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.dim();
    if b.len() != n {
        return Err(CoxError::DimensionMismatch { expected: n, got: b.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n <= 12 {
        return solve_gauss(a, b);
    }
    let system = IntegerSystem::new(a, b);
    if let Some(x) = solve_dixon(&system) {
        return Ok(x);
    }
    solve_multimodular(&system)
}

fn solve_multimodular(system: &IntegerSystem) -> Result<Vec<Rational>> {
    let n = system.n;
    let mut primes = PrimeIter::new();
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut good = 0usize;
    let mut singular_streak = 0usize;
    let mut tried = 0usize;
    loop {
        let p = primes.next().expect("prime supply exhausted");
        tried += 1;
        if tried > 4000 {
            return Err(CoxError::SingularSystem);
        }
        let Some(sol) = system.solve_mod(p) else {
            singular_streak += 1;
            if good == 0 && singular_streak >= 4 {
                return Err(CoxError::SingularSystem);
            }
            continue;
        };
        singular_streak = 0;
        let pb = BigInt::from(p);
        let inv = mod_inverse(&(&modulus % &pb).to_u64().unwrap(), p);
        for (res, s) in residues.iter_mut().zip(sol) {
            let cur = (&*res % &pb).to_u64().unwrap();
            let delta = (s + p - cur) % p * inv % p;
            *res += &modulus * delta;
        }
        modulus *= &pb;
        good += 1;
        if good < 2 {
            continue;
        }
        let candidate: Option<Vec<Rational>> = residues
            .iter()
            .map(|r| rational_reconstruct(r, &modulus))
            .collect();
        if let Some(x) = candidate {
            if system.check(&x) {
                return Ok(x);
            }
        }
    }
}

/// Dixon lifting; `None` when entries are too large or no prime factors the
/// matrix, in which case the caller falls back to CRT.
fn solve_dixon(system: &IntegerSystem) -> Option<Vec<Rational>> {
    let n = system.n;
    let rows: Vec<Vec<(usize, i64)>> = system
        .rows
        .iter()
        .map(|row| row.iter().map(|(j, v)| v.to_i64().map(|v| (*j, v))).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let row_weight = rows.iter().map(|r| r.iter().map(|(_, v)| v.unsigned_abs() as u128).sum::<u128>()).max()?;
    if row_weight > 1 << 60 {
        return None;
    }
    let mut residual: Vec<i128> = system.rhs.iter().map(|v| v.to_i128()).collect::<Option<_>>()?;
    let (p, lu) = PrimeIter::new().take(4).find_map(|p| LuMod::new(&rows, n, p).map(|lu| (p, lu)))?;
    let pi = p as i128;
    let mut digits: Vec<Vec<u64>> = Vec::new();
    let mut next_attempt = 2;
    // Enough digits for any solution with entries of ~10^6 decimal digits.
    while digits.len() < 400_000 {
        let v: Vec<u64> = residual.iter().map(|r| r.rem_euclid(pi) as u64).collect();
        let x = lu.solve(&v);
        for (r, row) in residual.iter_mut().zip(&rows) {
            let s = row.iter().fold(*r, |acc, (j, a)| acc - *a as i128 * x[*j] as i128);
            debug_assert_eq!(s.rem_euclid(pi), 0);
            *r = s / pi;
        }
        digits.push(x);
        if digits.len() == next_attempt {
            next_attempt *= 2;
            if let Some(sol) = reconstruct_padic(&digits, p, n) {
                if system.check(&sol) {
                    return Some(sol);
                }
            }
        }
    }
    None
}

/// Rebuilds the p-adic approximations and reconstructs them with a running
/// common denominator.
fn reconstruct_padic(digits: &[Vec<u64>], p: u64, n: usize) -> Option<Vec<Rational>> {
    let pb = BigInt::from(p);
    let modulus = pb.pow(digits.len() as u32);
    let mut den = BigInt::one();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = digits.iter().rev().fold(BigInt::zero(), |acc, d| acc * &pb + d[i]);
        let y = (x * &den).mod_floor(&modulus);
        let q = rational_reconstruct(&y, &modulus)?;
        let value = BigRational::new(q.numer().clone(), q.denom() * &den);
        den *= q.denom();
        out.push(value);
    }
    Some(out)
}

/// `PA = LU` modulo a prime.
struct LuMod {
    n: usize,
    p: u64,
    lu: Vec<u64>,
    perm: Vec<usize>,
    inv_diag: Vec<u64>,
}

impl LuMod {
    fn new(rows: &[Vec<(usize, i64)>], n: usize, p: u64) -> Option<Self> {
        let pi = p as i64;
        let mut m = vec![0u64; n * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row {
                let e = &mut m[i * n + j];
                *e = (*e + v.rem_euclid(pi) as u64) % p;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut inv_diag = vec![0u64; n];
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] != 0)?;
            if pivot != col {
                for c in 0..n {
                    m.swap(pivot * n + c, col * n + c);
                }
                perm.swap(pivot, col);
            }
            let inv = mod_inverse(&m[col * n + col], p);
            inv_diag[col] = inv;
            let (head, tail) = m.split_at_mut((col + 1) * n);
            let pivot_row = &head[col * n..];
            for row in tail.chunks_mut(n) {
                if row[col] == 0 {
                    continue;
                }
                let f = row[col] * inv % p;
                row[col] = f;
                let nf = p - f;
                for c in col + 1..n {
                    let pv = pivot_row[c];
                    if pv != 0 {
                        row[c] = (row[c] + nf * pv) % p;
                    }
                }
            }
        }
        Some(Self { n, p, lu: m, perm, inv_diag })
    }

    fn solve(&self, b: &[u64]) -> Vec<u64> {
        let (n, p) = (self.n, self.p);
        let mut y: Vec<u64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: u128 = row.iter().zip(&y[..i]).map(|(l, v)| *l as u128 * *v as u128).sum();
            y[i] = (y[i] + p - (s % p as u128) as u64) % p;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: u128 = row.iter().zip(&y[i + 1..]).map(|(u, v)| *u as u128 * *v as u128).sum();
            let t = (y[i] + p - (s % p as u128) as u64) % p;
            y[i] = t * self.inv_diag[i] % p;
        }
        y
    }
}

/// Fraction-based Gaussian elimination with partial pivoting on nonzero entries.
pub fn solve_gauss(a: &SparseMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.dim();
    if b.len() != n {
        return Err(CoxError::DimensionMismatch { expected: n, got: b.len() });
    }
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = vec![Rational::zero(); n + 1];
            for (j, v) in a.row(i) {
                row[*j] += v;
            }
            row[n] = b[i].clone();
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(CoxError::SingularSystem)?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col][col..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                if !pv.is_zero() {
                    row[c] -= &f * pv;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

/// The system with every row scaled to integers.
struct IntegerSystem {
    n: usize,
    rows: Vec<Vec<(usize, BigInt)>>,
    rhs: Vec<BigInt>,
}

impl IntegerSystem {
    fn new(a: &SparseMatrix, b: &[Rational]) -> Self {
        let n = a.dim();
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for i in 0..n {
            let lcm = a
                .row(i)
                .iter()
                .map(|(_, v)| v.denom().clone())
                .fold(b[i].denom().clone(), |acc, d| acc.lcm(&d));
            let row: Vec<(usize, BigInt)> = a
                .row(i)
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (*j, (v * &lcm).to_integer()))
                .collect();
            rows.push(row);
            rhs.push((&b[i] * &lcm).to_integer());
        }
        Self { n, rows, rhs }
    }

    fn solve_mod(&self, p: u64) -> Option<Vec<u64>> {
        let n = self.n;
        let w = n + 1;
        let mut m = vec![0u64; n * w];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                let e = &mut m[i * w + j];
                *e = (*e + reduce(v, p)) % p;
            }
            m[i * w + n] = reduce(&self.rhs[i], p);
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * w + col] != 0)?;
            if pivot != col {
                for c in 0..w {
                    m.swap(pivot * w + c, col * w + c);
                }
            }
            let inv = mod_inverse(&m[col * w + col], p);
            for c in col..w {
                m[col * w + c] = m[col * w + c] * inv % p;
            }
            let (head, tail) = m.split_at_mut(col * w);
            let (pivot_row, rest) = tail.split_at_mut(w);
            let eliminate = |row: &mut [u64]| {
                let f = row[col];
                if f == 0 {
                    return;
                }
                let nf = p - f;
                for c in col..w {
                    let pv = pivot_row[c];
                    if pv != 0 {
                        row[c] = (row[c] + nf * pv) % p;
                    }
                }
            };
            head.chunks_mut(w).for_each(eliminate);
            rest.chunks_mut(w).for_each(eliminate);
        }
        Some((0..n).map(|i| m[i * w + n]).collect())
    }

    fn check(&self, x: &[Rational]) -> bool {
        let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let xi: Vec<BigInt> = x.iter().map(|v| (v * &den).to_integer()).collect();
        self.rows.iter().zip(&self.rhs).all(|(row, r)| {
            let lhs = row.iter().fold(BigInt::zero(), |acc, (j, v)| acc + v * &xi[*j]);
            lhs == r * &den
        })
    }
}

fn reduce(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: &u64, p: u64) -> u64 {
    mod_pow(*a, p - 2, p)
}

/// Finds `a/b` with `a ≡ b·r (mod m)` and `|a|, b ≤ sqrt(m/2)`.
fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    if num.gcd(&den) != BigInt::one() && !num.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Descending primes below 2^31.
struct PrimeIter {
    next: u64,
}

impl PrimeIter {
    fn new() -> Self {
        Self { next: (1 << 31) - 1 }
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next > 2 {
            let c = self.next;
            self.next -= 1;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
