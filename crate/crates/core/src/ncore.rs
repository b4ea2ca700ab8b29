//! n-cores, their bijection with affine Grassmannian elements of type Ã_{n−1},
//! boundary profiles and the limit curve.
//!
//! A partition is stored by its rows. Internally a core is also described by
//! its abacus: the Maya set `M = {λ_j − j}` splits into `n` runners, each of
//! which is a down-set `{m ≡ r : m < b_r}` exactly when the partition is an
//! n-core. The charges `c_r = (b_r − r)/n` sum to zero, and adding all boxes
//! of content `≡ i (mod n)` swaps runners `i−1` and `i`. That is the action of
//! `s_i` on `x(0) = wλ` in standard coordinates, so the charges of the core of
//! `x` are `wλ`.

use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{antidominant_witness, AffineElement};
use crate::error::{CoxError, Result};
use crate::linalg::{rat, serialize_rational, Rational};
use crate::roots::{CartanType, CorootVec, Family, RootSystem};
use crate::walker::{simulate_endpoints, simulate_stream, Variant};
use crate::weyl::WeylElement;

/// Root system `A_{n−1}` for n-cores.
pub fn type_a(n: usize) -> Result<RootSystem> {
    if n < 2 {
        return Err(CoxError::UnsupportedType(format!("A{}", n as i64 - 1)));
    }
    RootSystem::new(CartanType::new(Family::A, n - 1)?)
}

fn modulus_of(rs: &RootSystem) -> Result<usize> {
    let t = rs.cartan_type();
    if t.family != Family::A {
        return Err(CoxError::UnsupportedType(format!("{t} (n-cores need type A)")));
    }
    Ok(t.rank + 1)
}

/// Coroot coordinates to standard coordinates `(v_1, ..., v_n)`, `Σ v = 0`.
pub fn to_standard(lambda: &CorootVec) -> Vec<i64> {
    let n = lambda.0.len() + 1;
    (0..n)
        .map(|k| lambda.0.get(k).copied().unwrap_or(0) - if k > 0 { lambda.0[k - 1] } else { 0 })
        .collect()
}

/// Standard coordinates to coroot coordinates (partial sums).
pub fn from_standard(v: &[i64]) -> Result<CorootVec> {
    let total: i64 = v.iter().sum();
    if total != 0 {
        return Err(CoxError::UnbalancedCoweight(total));
    }
    Ok(CorootVec(v[..v.len() - 1].iter().scan(0, |acc, x| { *acc += x; Some(*acc) }).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CorePartition {
    n: usize,
    rows: Vec<usize>,
}

impl CorePartition {
    pub fn empty(n: usize) -> Self {
        Self { n, rows: Vec::new() }
    }

    /// Validates that `rows` is a partition with no removable n-ribbon.
    pub fn new(rows: Vec<usize>, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(CoxError::InvalidPartition(format!("modulus {n} is below 2")));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(CoxError::InvalidPartition(format!("rows {rows:?} are not weakly decreasing")));
        }
        let mut rows = rows;
        while rows.last() == Some(&0) {
            rows.pop();
        }
        let core = Self { n, rows };
        core.charges()?;
        Ok(core)
    }

    /// The core with abacus charges `c` (standard coordinates of `x(0)`).
    pub fn from_charges(c: &[i64]) -> Result<Self> {
        let n = c.len();
        let total: i64 = c.iter().sum();
        if total != 0 {
            return Err(CoxError::UnbalancedCoweight(total));
        }
        let b: Vec<i64> = c.iter().enumerate().map(|(r, &cr)| r as i64 + n as i64 * cr).collect();
        let gap = *b.iter().min().unwrap();
        let top = *b.iter().max().unwrap();
        let mut rows = Vec::new();
        let mut j = 0i64;
        for m in (gap..top).rev() {
            if m < b[m.rem_euclid(n as i64) as usize] {
                j += 1;
                rows.push((m + j) as usize);
            }
        }
        Ok(Self { n, rows })
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn first_row(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }

    pub fn boxes(&self) -> usize {
        self.rows.iter().sum()
    }

    /// `λ_j − j` for `j = 1..=ℓ`, decreasing.
    fn maya(&self) -> Vec<i64> {
        self.rows.iter().enumerate().map(|(j, &r)| r as i64 - j as i64 - 1).collect()
    }

    /// Abacus charges; fails if some runner is not flush.
    pub fn charges(&self) -> Result<Vec<i64>> {
        let n = self.n as i64;
        let ell = self.rows.len() as i64;
        let mut beads = vec![false; (self.first_row() as i64 + ell + n) as usize];
        // index m + ell + n; everything below -ell is a bead
        let offset = ell + n;
        for m in -offset..-ell {
            beads[(m + offset) as usize] = true;
        }
        for m in self.maya() {
            beads[(m + offset) as usize] = true;
        }
        let mut c = vec![0i64; self.n];
        for r in 0..n {
            let start = (-offset..-offset + n).find(|m| m.rem_euclid(n) == r).unwrap();
            let mut m = start;
            while m + offset < beads.len() as i64 && beads[(m + offset) as usize] {
                m += n;
            }
            let b = m;
            let mut k = b + n;
            while k + offset < beads.len() as i64 {
                if beads[(k + offset) as usize] {
                    return Err(CoxError::InvalidPartition(format!(
                        "{:?} has a removable {}-ribbon",
                        self.rows, self.n
                    )));
                }
                k += n;
            }
            c[r as usize] = (b - r) / n;
        }
        Ok(c)
    }

    /// Box contents `c − r` of the addable (true) or removable (false) corners.
    fn corner_contents(&self, addable: bool) -> Vec<i64> {
        let ell = self.rows.len();
        let mut out = Vec::new();
        for j in 0..=ell {
            let len = self.rows.get(j).copied().unwrap_or(0);
            if addable {
                if j == 0 || self.rows[j - 1] > len {
                    out.push(len as i64 - j as i64);
                }
            } else if len > 0 && (j + 1 >= ell || self.rows[j + 1] < len) {
                out.push(len as i64 - 1 - j as i64);
            }
        }
        out
    }

    pub fn addable_residues(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.corner_contents(true).iter().map(|c| c.rem_euclid(self.n as i64) as usize).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn removable_residues(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.corner_contents(false).iter().map(|c| c.rem_euclid(self.n as i64) as usize).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    /// Degree: the length of the matching affine Grassmannian element.
    pub fn degree(&self) -> usize {
        let rs = type_a(self.n).expect("n >= 2");
        affine_from_core(&rs, self).expect("valid core").length(&rs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.rows)
    }
}

fn swap_charges(c: &mut [i64], i: usize) {
    let n = c.len();
    if i == 0 {
        let (first, last) = (c[0], c[n - 1]);
        c[0] = last + 1;
        c[n - 1] = first - 1;
    } else {
        c.swap(i - 1, i);
    }
}

/// Adds every addable box of residue `i`, or else removes every removable one.
/// Returns the new core and whether it grew.
pub fn apply_generator(core: &CorePartition, i: usize) -> Result<(CorePartition, bool)> {
    let n = core.n;
    if i >= n {
        return Err(CoxError::BadGenerator { index: i, rank: n - 1 });
    }
    let mut c = core.charges()?;
    let before = c.clone();
    let b = |c: &[i64], r: usize| r as i64 + n as i64 * c[r];
    let prev = (i + n - 1) % n;
    // Runner i−1 feeds runner i: its top bead b − n moves to b − n + 1.
    let grew = b(&before, prev) + 1 > b(&before, i);
    swap_charges(&mut c, i);
    Ok((CorePartition::from_charges(&c)?, grew))
}

/// The core of an affine Grassmannian element of type Ã_{n−1}.
pub fn core_from_affine(rs: &RootSystem, x: &AffineElement) -> Result<CorePartition> {
    modulus_of(rs)?;
    if !x.is_affine_grassmannian(rs) {
        return Err(CoxError::NotGrassmannian);
    }
    let v = x.type_of().act_coroot(x.lambda())?;
    CorePartition::from_charges(&to_standard(&v))
}

/// The affine Grassmannian element `(w, μ)` with `wμ` equal to the charges.
pub fn affine_from_core(rs: &RootSystem, core: &CorePartition) -> Result<AffineElement> {
    let n = modulus_of(rs)?;
    if core.n != n {
        return Err(CoxError::DimensionMismatch { expected: n, got: core.n });
    }
    let v = from_standard(&core.charges()?)?;
    let (u, mu) = antidominant_witness(rs, &v);
    let mut w = u.inverse();
    // Shorten w within the stabilizer of μ until it is the minimal representative.
    loop {
        let pairing = rs.pair_simple(&mu);
        let step = (1..=rs.rank()).find(|&i| pairing[i - 1] == 0 && w.has_right_descent(i));
        match step {
            Some(i) => w = w.multiply(rs, &WeylElement::simple(rs, i)?)?,
            None => break,
        }
    }
    let x = AffineElement::new(w, mu)?;
    debug_assert!(x.is_affine_grassmannian(rs));
    Ok(x)
}

/// One straight piece of the boundary of the core of `t_μ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeSegment {
    /// `Δy/Δx` along the boundary.
    #[serde(serialize_with = "serialize_rational")]
    pub slope: Rational,
    /// Diagonal interval `x + y ∈ [from, to]`.
    pub from: i64,
    pub to: i64,
}

/// The `n − 1` pieces of the boundary of the core of `t_μ`, `μ` anti-dominant
/// in standard coordinates. Piece `i` has slope `(n−i)/i` on the diagonals
/// `[nμ_i + i − 1, nμ_{i+1} + i]`.
pub fn slope_profile(mu: &[i64]) -> Result<Vec<SlopeSegment>> {
    let n = mu.len();
    if n < 2 {
        return Err(CoxError::DimensionMismatch { expected: 2, got: n });
    }
    let total: i64 = mu.iter().sum();
    if total != 0 {
        return Err(CoxError::UnbalancedCoweight(total));
    }
    if mu.windows(2).any(|w| w[0] > w[1]) {
        return Err(CoxError::NotAntiDominant);
    }
    let n64 = n as i64;
    Ok((1..n)
        .map(|i| {
            let i64_ = i as i64;
            SlopeSegment {
                slope: rat(n64 - i64_, i64_),
                from: n64 * mu[i - 1] + i64_ - 1,
                to: n64 * mu[i] + i64_,
            }
        })
        .collect())
}

/// Lattice point of the boundary on the diagonal `x + y = k`.
pub fn boundary_point(core: &CorePartition, k: i64) -> (i64, i64) {
    let ell = core.rows.len() as i64;
    if k <= -ell {
        return (0, k);
    }
    // x(k) counts horizontal steps below k, i.e. non-Maya integers in [-ell, k).
    let maya = core.maya();
    let below = maya.iter().filter(|&&m| m >= -ell && m < k).count() as i64;
    let x = (k + ell) - below;
    (x, k - x)
}

/// Slope of the boundary between the diagonals `from` and `to`.
pub fn measured_slope(core: &CorePartition, from: i64, to: i64) -> Option<Rational> {
    let (x0, y0) = boundary_point(core, from);
    let (x1, y1) = boundary_point(core, to);
    (x1 != x0).then(|| rat(y1 - y0, x1 - x0))
}

/// Piecewise-linear monotone curve from the y-axis to the x-axis, extended by
/// a vertical ray down and a horizontal ray right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryProfile {
    /// Vertices, with `x` and `y` nondecreasing; the first has `x = 0` and the
    /// last `y = 0`.
    pub vertices: Vec<(f64, f64)>,
    /// The factor every coordinate was divided by.
    pub scale: f64,
}

impl BoundaryProfile {
    /// `x` of the point on the diagonal `x + y = k`.
    pub fn x_at(&self, k: f64) -> f64 {
        let v = &self.vertices;
        let first = v[0].0 + v[0].1;
        let last = v[v.len() - 1].0 + v[v.len() - 1].1;
        if k <= first {
            return 0.0;
        }
        if k >= last {
            return k;
        }
        let idx = v.partition_point(|p| p.0 + p.1 <= k).max(1);
        let (a, b) = (v[idx - 1], v[idx]);
        let (ka, kb) = (a.0 + a.1, b.0 + b.1);
        if kb == ka {
            return a.0;
        }
        a.0 + (b.0 - a.0) * (k - ka) / (kb - ka)
    }

    fn diagonals(&self) -> impl Iterator<Item = f64> + '_ {
        self.vertices.iter().map(|p| p.0 + p.1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for (x, y) in &self.vertices {
            let _ = writeln!(out, "{},{}", fmt12(*x), fmt12(*y));
        }
        out
    }

    /// SVG path data in a frame where `y` points down.
    pub fn to_svg_path(&self) -> String {
        let mut out = String::new();
        for (k, (x, y)) in self.vertices.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            let _ = write!(out, "{}{} {} ", cmd, fmt12(*x), fmt12(-*y));
        }
        out.trim_end().to_string()
    }

    pub fn to_svg(&self, extra: &[&BoundaryProfile]) -> String {
        let mut out = String::from(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.05 -0.05 1.1 1.1\">\n",
        );
        let _ = writeln!(out, "  <path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.004\"/>", self.to_svg_path());
        for p in extra {
            let _ = writeln!(out, "  <path d=\"{}\" fill=\"none\" stroke=\"red\" stroke-width=\"0.004\"/>", p.to_svg_path());
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Fixed 12-significant-digit float formatting.
pub fn fmt12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let digits = 11 - v.abs().log10().floor() as i32;
    let s = format!("{:.*}", digits.max(0) as usize, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Lower-right boundary of the core, divided by `scale`.
pub fn boundary_with_scale(core: &CorePartition, scale: f64) -> BoundaryProfile {
    let ell = core.rows.len();
    let mut vertices = vec![(0.0, -(ell as f64) / scale)];
    // Walk rows from the bottom: up one unit per row, right to the next row length.
    let mut x = 0usize;
    for j in (0..ell).rev() {
        let len = core.rows[j];
        if len > x {
            vertices.push((x as f64 / scale, -((j + 1) as f64) / scale));
            vertices.push((len as f64 / scale, -((j + 1) as f64) / scale));
            x = len;
        }
    }
    vertices.push((x as f64 / scale, 0.0));
    vertices.dedup();
    BoundaryProfile { vertices, scale }
}

/// The boundary scaled by the degree in both directions.
pub fn boundary_profile(core: &CorePartition) -> Result<BoundaryProfile> {
    if core.is_empty() {
        return Err(CoxError::ZeroDegree);
    }
    Ok(boundary_with_scale(core, core.degree() as f64))
}

/// Supremum over the diagonals `x + y = k` of the Euclidean distance between
/// the two curves' points on that diagonal.
pub fn profile_distance(a: &BoundaryProfile, b: &BoundaryProfile) -> f64 {
    a.diagonals()
        .chain(b.diagonals())
        .map(|k| (a.x_at(k) - b.x_at(k)).abs() * std::f64::consts::SQRT_2)
        .fold(0.0, f64::max)
}

/// `α = 6/((n−1)n(n+1))`.
pub fn limit_alpha(n: usize) -> Rational {
    let n = n as i64;
    rat(6, (n - 1) * n * (n + 1))
}

/// Exact vertices `(T(k)α, −T(n−1−k)α)`, `T(k) = k(k+1)/2`, `k = 0..n−1`.
pub fn limit_vertices(n: usize) -> Vec<(Rational, Rational)> {
    let alpha = limit_alpha(n);
    let t = |k: usize| rat((k * (k + 1) / 2) as i64, 1);
    (0..n).map(|k| (t(k) * &alpha, -(t(n - 1 - k) * &alpha))).collect()
}

/// The limit curve `C_ρ` for n-cores.
pub fn limit_curve(n: usize) -> BoundaryProfile {
    let vertices = limit_vertices(n)
        .iter()
        .map(|(x, y)| (x.to_f64().unwrap(), y.to_f64().unwrap()))
        .collect();
    BoundaryProfile { vertices, scale: 1.0 }
}

/// Exact area between `C_ρ` and the axes (shoelace over the vertices).
pub fn limit_area(n: usize) -> Rational {
    let v = limit_vertices(n);
    let twice = v.windows(2).fold(rat(0, 1), |acc, w| acc + &w[0].0 * &w[1].1 - &w[1].0 * &w[0].1);
    (twice / rat(2, 1)).abs()
}

/// Whether `C_ρ` rests on an exact check of `ψ ∥ ρ^∨` or on the conjecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveStatus {
    Verified,
    /// The exact check ran and failed.
    Refuted,
    ConditionalOnConjecture,
}

/// Largest n for which the direction check is run.
pub const VERIFY_MAX_N: usize = 6;

pub fn limit_curve_status(n: usize) -> Result<CurveStatus> {
    use crate::wchain::{build_chain, psi, stationary_distribution, WeightScheme};
    if n > VERIFY_MAX_N {
        return Ok(CurveStatus::ConditionalOnConjecture);
    }
    let rs = type_a(n)?;
    let chain = build_chain(&rs, WeightScheme::Uniform)?;
    let zeta = stationary_distribution(&chain)?;
    let dir = psi(&chain, &zeta)?;
    Ok(if dir.is_parallel_to(&rs.two_rho_vee().0) { CurveStatus::Verified } else { CurveStatus::Refuted })
}

/// Predicted first-row growth under `ψ ∥ ρ^∨`.
#[derive(Debug, Clone, Serialize)]
pub struct FirstRowAsymptotics {
    pub n: usize,
    /// First row ≈ `degree_coefficient · d` for a core of degree `d`.
    #[serde(serialize_with = "serialize_rational")]
    pub degree_coefficient: Rational,
    /// First row ≈ `boxes_coefficient · √N` for a core with `N` boxes, from
    /// the exact area of `C_ρ`: `√6(n−1)/√(n²−1)`.
    pub boxes_coefficient: f64,
    /// The coefficient `√3(n−1)/√(n²−1)` obtained from the area
    /// `n²(n²−1)α²/12`, which is twice the area of `C_ρ`.
    pub stated_boxes_coefficient: f64,
    pub status: CurveStatus,
}

pub fn first_row_asymptotics(n: usize, status: CurveStatus) -> FirstRowAsymptotics {
    let nf = n as f64;
    let root = (nf * nf - 1.0).sqrt();
    FirstRowAsymptotics {
        n,
        degree_coefficient: rat(3, n as i64 + 1),
        boxes_coefficient: 6f64.sqrt() * (nf - 1.0) / root,
        stated_boxes_coefficient: 3f64.sqrt() * (nf - 1.0) / root,
        status,
    }
}

/// Expected first row for degree `d` under the prediction.
pub fn expected_first_row(n: usize, degree: usize) -> f64 {
    (rat(3, n as i64 + 1) * rat(degree as i64, 1)).to_f64().unwrap()
}

/// Monte Carlo first-row statistics over random cores.
#[derive(Debug, Clone, Serialize)]
pub struct FirstRowEstimate {
    pub n: usize,
    pub degree: usize,
    pub trials: usize,
    pub mean_first_row: f64,
    /// Mean of `first_row / degree`.
    pub per_degree: f64,
    /// Mean of `first_row / √boxes`.
    pub per_root_boxes: f64,
}

pub fn first_row_monte_carlo(n: usize, degree: usize, trials: usize, seed: u64) -> Result<FirstRowEstimate> {
    let cores = random_cores(n, degree, trials, seed)?;
    let t = trials.max(1) as f64;
    let mean_first_row = cores.iter().map(|c| c.first_row() as f64).sum::<f64>() / t;
    let per_root_boxes = cores
        .iter()
        .map(|c| if c.is_empty() { 0.0 } else { c.first_row() as f64 / (c.boxes() as f64).sqrt() })
        .sum::<f64>()
        / t;
    Ok(FirstRowEstimate {
        n,
        degree,
        trials,
        mean_first_row,
        per_degree: if degree == 0 { 0.0 } else { mean_first_row / degree as f64 },
        per_root_boxes,
    })
}

/// Core reached by `steps` steps of the Grassmannian walk; its degree is `steps`.
pub fn random_core(n: usize, steps: usize, seed: u64) -> Result<CorePartition> {
    random_core_stream(n, steps, seed, 0)
}

pub fn random_core_stream(n: usize, steps: usize, seed: u64, stream: u64) -> Result<CorePartition> {
    let rs = type_a(n)?;
    let t = simulate_stream(&rs, steps, Variant::Grassmannian, seed, stream);
    core_from_affine(&rs, t.last())
}

/// `trials` independent random cores, one stream per trial, in trial order.
pub fn random_cores(n: usize, steps: usize, trials: usize, seed: u64) -> Result<Vec<CorePartition>> {
    let rs = type_a(n)?;
    simulate_endpoints(&rs, steps, Variant::Grassmannian, trials, seed)
        .par_iter()
        .map(|x| core_from_affine(&rs, x))
        .collect()
}
