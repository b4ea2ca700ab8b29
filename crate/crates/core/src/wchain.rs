//! The Markov chain on the finite Weyl group obtained by projecting the delayed
//! walk in the fundamental chamber onto alcove types.
//!
//! From `w` the chain moves to `s_i w` when `s_i w < w` and to `r_θ w` when
//! `r_θ w > w`, each with probability `1/r`, and stays put otherwise.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::affine::antidominant_witness;
use crate::error::{CoxError, Result};
use crate::linalg::{fmt_rational, rat_int, solve, to_f64, Rational, SparseMatrix};
use crate::roots::{CorootVec, Family, RootSystem};
use crate::walker::TransitionCounts;
use crate::weyl::{word_string, WeylElement, WeylGroup};

/// Largest chain handled by the dense exact solver.
pub const STATIONARY_MAX_STATES: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightScheme {
    Uniform,
    /// Move `s_i` weighted by the mark `a_i` of the highest root, `a_0 = 1`.
    Marks,
    /// Move `s_i` weighted by the comark `a_i^∨`, `a_0^∨ = 1`.
    Comarks,
}

impl WeightScheme {
    pub const ALL: [WeightScheme; 3] = [WeightScheme::Uniform, WeightScheme::Marks, WeightScheme::Comarks];

    /// Weights of generators `0..=rank`.
    pub fn weights(self, rs: &RootSystem) -> Vec<i64> {
        let mut w = vec![1];
        match self {
            WeightScheme::Uniform => w.extend(std::iter::repeat_n(1, rs.rank())),
            WeightScheme::Marks => w.extend_from_slice(rs.marks()),
            WeightScheme::Comarks => w.extend_from_slice(rs.comarks()),
        }
        w
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightScheme::Uniform => "uniform",
            WeightScheme::Marks => "marks",
            WeightScheme::Comarks => "comarks",
        })
    }
}

impl FromStr for WeightScheme {
    type Err = CoxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(WeightScheme::Uniform),
            "marks" => Ok(WeightScheme::Marks),
            "comarks" => Ok(WeightScheme::Comarks),
            other => Err(CoxError::UnsupportedType(format!("weight scheme `{other}`"))),
        }
    }
}

/// Transition matrix indexed by the elements of [`WeylGroup`].
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    group: WeylGroup,
    scheme: WeightScheme,
    matrix: SparseMatrix,
}

impl TransitionMatrix {
    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn root_system(&self) -> &RootSystem {
        self.group.root_system()
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.group.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group.is_empty()
    }

    pub fn prob(&self, from: usize, to: usize) -> Rational {
        self.matrix.get(from, to)
    }

    /// Row `from` as `(target, probability)` with positive entries.
    pub fn row(&self, from: usize) -> &[(usize, Rational)] {
        self.matrix.row(from)
    }

    /// Whether `from → to` is an edge of the chain graph (self-loops excluded).
    pub fn is_edge(&self, from: usize, to: usize) -> bool {
        from != to && self.row(from).iter().any(|(j, p)| *j == to && p.is_positive())
    }

    fn reaches_all(&self, reverse: bool) -> usize {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for (j, p) in self.row(i) {
                if p.is_positive() {
                    if reverse {
                        adj[*j].push(i);
                    } else {
                        adj[i].push(*j);
                    }
                }
            }
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count
    }

    /// Strong connectivity by forward and backward search from the identity.
    pub fn check_irreducible(&self) -> Result<()> {
        let total = self.len();
        for reverse in [false, true] {
            let reached = self.reaches_all(reverse);
            if reached != total {
                return Err(CoxError::NotIrreducible { reached, total });
            }
        }
        Ok(())
    }

    pub fn is_aperiodic(&self) -> bool {
        (0..self.len()).any(|i| self.prob(i, i).is_positive())
    }
}

/// Builds the chain for a weight scheme.
pub fn build_chain(rs: &RootSystem, scheme: WeightScheme) -> Result<TransitionMatrix> {
    let group = WeylGroup::new(rs)?;
    let weights = scheme.weights(rs);
    let total: i64 = weights.iter().sum();
    let n = group.len();
    let mut matrix = SparseMatrix::zeros(n);
    for k in 0..n {
        let mut stay = Rational::one();
        for i in 1..=rs.rank() {
            if group.element(k).has_left_descent(i) {
                let p = Rational::new(BigInt::from(weights[i]), BigInt::from(total));
                stay -= &p;
                matrix.add(k, group.left_mul(i, k), p);
            }
        }
        if group.theta_ascent(k) {
            let p = Rational::new(BigInt::from(weights[0]), BigInt::from(total));
            stay -= &p;
            matrix.add(k, group.reflect_theta(k), p);
        }
        if stay.is_positive() {
            matrix.add(k, k, stay);
        }
    }
    Ok(TransitionMatrix { group, scheme, matrix })
}

/// A probability vector over the group, in group order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub values: Vec<Rational>,
}

impl Distribution {
    pub fn value(&self, k: usize) -> &Rational {
        &self.values[k]
    }

    pub fn get(&self, group: &WeylGroup, w: &WeylElement) -> Option<&Rational> {
        group.index_of(w).map(|k| &self.values[k])
    }

    pub fn total(&self) -> Rational {
        self.values.iter().fold(Rational::zero(), |a, b| a + b)
    }
}

/// The unique invariant distribution `ζ` with `ζP = ζ`.
pub fn stationary_distribution(chain: &TransitionMatrix) -> Result<Distribution> {
    let n = chain.len();
    if n > STATIONARY_MAX_STATES {
        return Err(CoxError::StateSpaceTooLarge(format!(
            "{} states; the exact stationary solve handles at most {STATIONARY_MAX_STATES}",
            n
        )));
    }
    chain.check_irreducible()?;
    if !chain.is_aperiodic() {
        return Err(CoxError::NotIrreducible { reached: n, total: n });
    }
    // (P − I)^T ζ = 0 with the last equation replaced by Σζ = 1.
    let last = n - 1;
    let mut a = SparseMatrix::zeros(n);
    for i in 0..n {
        for (j, p) in chain.row(i) {
            if *j != last {
                a.add(*j, i, p.clone());
            }
        }
        if i != last {
            a.add(i, i, rat_int(-1));
        }
        a.add(last, i, Rational::one());
    }
    let mut b = vec![Rational::zero(); n];
    b[last] = Rational::one();
    let zeta = solve(&a, &b)?;
    let image = chain.matrix.vec_mul(&zeta);
    assert_eq!(image, zeta, "stationary solve failed exact verification");
    assert!(zeta.iter().all(|v| v.is_positive()), "stationary vector must be strictly positive");
    Ok(Distribution { values: zeta })
}

/// Direction `d = Σ_{r_θ w > w} ζ(w) w^{-1}θ^∨`, scaled to coprime integers.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVector {
    /// Coprime integer coordinates in the simple-coroot basis.
    pub coords: CorootVec,
    /// Unit vector for the invariant form.
    pub unit: Vec<f64>,
}

impl DirectionVector {
    pub fn from_rational(rs: &RootSystem, d: &[Rational]) -> Result<Self> {
        if d.iter().all(|v| v.is_zero()) {
            return Err(CoxError::ZeroDirection);
        }
        let den = d.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = d.iter().map(|v| (v * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let coords: Vec<i64> = ints
            .iter()
            .map(|v| (v / &g).to_i64().expect("direction coordinates fit in i64"))
            .collect();
        let coords = CorootVec(coords);
        let pairing = rs.pair_simple(&coords);
        if pairing.iter().any(|&p| p < 0) {
            return Err(CoxError::NotDominant(format!("{:?} pairs to {:?}", coords.0, pairing)));
        }
        let f: Vec<f64> = coords.0.iter().map(|&v| v as f64).collect();
        let norm = rs.inner_f64(&f, &f).sqrt();
        let unit = f.iter().map(|v| v / norm).collect();
        Ok(Self { coords, unit })
    }

    /// Exact test of `self ∥ v` with a positive factor.
    pub fn is_parallel_to(&self, v: &[i64]) -> bool {
        let a = &self.coords.0;
        let same_line = (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] as i128 * v[j] as i128 == a[j] as i128 * v[i] as i128));
        same_line && a.iter().zip(v).map(|(x, y)| x * y).sum::<i64>() > 0
    }
}

/// The limit direction `ψ` of the walk in the fundamental chamber.
pub fn psi(chain: &TransitionMatrix, zeta: &Distribution) -> Result<DirectionVector> {
    let group = chain.group();
    let rs = group.root_system();
    let mut d = vec![Rational::zero(); rs.rank()];
    for k in 0..group.len() {
        if !group.theta_ascent(k) {
            continue;
        }
        let v = group.element(group.inverse(k)).act_coroot(rs.highest_coroot())?;
        for (acc, c) in d.iter_mut().zip(&v.0) {
            *acc += zeta.value(k) * BigInt::from(*c);
        }
    }
    DirectionVector::from_rational(rs, &d)
}

/// `Prob(X ∈ C_w) = ζ(w^{-1} w_0)`, in group order.
pub fn chamber_probabilities(chain: &TransitionMatrix, zeta: &Distribution) -> Distribution {
    let g = chain.group();
    let values = (0..g.len()).map(|k| zeta.value(g.multiply(g.inverse(k), g.longest())).clone()).collect();
    Distribution { values }
}

/// Long-run rate `ζ(w) p(w → u)` at which the edge `w → u` is used.
pub fn ergodic_edge_rate(chain: &TransitionMatrix, zeta: &Distribution, from: usize, to: usize) -> Result<Rational> {
    if !chain.is_edge(from, to) {
        let g = chain.group();
        return Err(CoxError::NoSuchEdge { from: word_string(g.word(from)), to: word_string(g.word(to)) });
    }
    Ok(zeta.value(from) * chain.prob(from, to))
}

/// Distance travelled per unit of length along `d`.
///
/// This is `|d| / ⟨−μ, 2ρ⟩` with `μ` the anti-dominant representative of `−d`,
/// which is not rational in general; the exact square is kept alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpeed {
    pub squared: Rational,
    pub value: f64,
}

pub fn radial_speed(rs: &RootSystem, d: &DirectionVector) -> RadialSpeed {
    let (_, mu) = antidominant_witness(rs, &d.coords.neg());
    let denom = -rs.pair(&mu, rs.two_rho()).expect("rank checked");
    let coords: Vec<Rational64> = d.coords.0.iter().map(|&v| Rational64::from_integer(v)).collect();
    let norm = rs.norm_sq(&coords);
    let squared = Rational::new(BigInt::from(*norm.numer()), BigInt::from(*norm.denom() * denom * denom));
    let value = to_f64(&squared).sqrt();
    RadialSpeed { squared, value }
}

/// Chi-square goodness of fit of observed transitions against the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

pub fn kernel_chi_square(chain: &TransitionMatrix, counts: &TransitionCounts) -> ChiSquareFit {
    let g = chain.group();
    let mut out: HashMap<usize, HashMap<usize, u64>> = HashMap::new();
    for ((from, to), &c) in &counts.counts {
        let (Some(i), Some(j)) = (g.index_of(from), g.index_of(to)) else {
            return ChiSquareFit { statistic: f64::INFINITY, dof: 0, p_value: 0.0 };
        };
        *out.entry(i).or_default().entry(j).or_insert(0) += c;
    }
    let mut statistic = 0.0;
    let mut dof = 0;
    for (i, row) in &out {
        let n: u64 = row.values().sum();
        let support = chain.row(*i);
        for j in row.keys() {
            if !support.iter().any(|(k, _)| k == j) {
                return ChiSquareFit { statistic: f64::INFINITY, dof, p_value: 0.0 };
            }
        }
        for (j, p) in support {
            let e = n as f64 * to_f64(p);
            let o = *row.get(j).unwrap_or(&0) as f64;
            statistic += (o - e).powi(2) / e;
        }
        dof += support.len() - 1;
    }
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(statistic)
    };
    ChiSquareFit { statistic, dof, p_value }
}

/// Left Perron eigenvector of `P'` (`P` with its diagonal removed),
/// normalized to sum 1, with its eigenvalue.
pub fn perron_without_loops(chain: &TransitionMatrix) -> (Vec<f64>, f64) {
    let n = chain.len();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| chain.row(i).iter().filter(|(j, _)| *j != i).map(|(j, p)| (*j, to_f64(p))).collect())
        .collect();
    // Iterate with P' + I, which has the same eigenvector and is aperiodic.
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..200_000 {
        let mut next = v.clone();
        for (i, row) in rows.iter().enumerate() {
            for (j, p) in row {
                next[*j] += v[i] * p;
            }
        }
        let s: f64 = next.iter().sum();
        lambda = s - 1.0;
        for x in next.iter_mut() {
            *x /= s;
        }
        let diff: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = next;
        if diff < 1e-15 {
            break;
        }
    }
    (v, lambda)
}

/// Observations about `ζ` for one weight scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeProbe {
    pub weights: WeightScheme,
    /// `ζ(w)/ζ(w_0)` keyed by reduced word.
    pub ratios: Vec<(String, String)>,
    pub all_integral: bool,
    pub argmax: String,
    pub max_ratio: String,
    pub identity_ratio: String,
    /// Largest over smallest chamber probability.
    pub chamber_ratio: String,
    pub chamber_ratio_is_96: bool,
    pub psi: Vec<i64>,
    pub psi_parallel_rho_vee: bool,
    pub psi_parallel_rho: bool,
}

/// Observations about the loop-free path-count weighting `P'`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathCountProbe {
    pub eigenvalue: f64,
    pub identity_ratio: f64,
    pub chamber_ratio: f64,
    pub chamber_ratio_is_96: bool,
}

/// Report of observations; nothing here is asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub schemes: Vec<SchemeProbe>,
    /// `∏_{k=0}^{n-1} C(n,k)` with `W = S_n`, type A only.
    pub binomial_product: Option<String>,
    /// `∏_{k=0}^{m-1} C(m,k)` with `m` the rank, type A only.
    pub binomial_product_by_rank: Option<String>,
    pub path_count: PathCountProbe,
    pub ninety_six_seen: bool,
}

fn binomial_product(m: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 0..m {
        let mut c = BigInt::one();
        for j in 0..k {
            c = c * BigInt::from(m - j) / BigInt::from(j + 1);
        }
        acc *= c;
    }
    acc
}

/// `ρ` carried to the coroot basis by the invariant form, as integers.
///
/// The form sends `α_i` to `(|α_i|²/2) α_i^∨`, and `|α_i|²` is inversely
/// proportional to the diagonal Gram entry `|α_i^∨|²`.
fn rho_as_coweight(rs: &RootSystem) -> Vec<i64> {
    let g = rs.coroot_gram();
    let l = (0..rs.rank()).fold(1i64, |acc, i| acc.lcm(&g[i][i]));
    rs.two_rho().0.iter().enumerate().map(|(i, c)| c * (l / g[i][i])).collect()
}

pub fn conjecture_probes(rs: &RootSystem) -> Result<ConjectureReport> {
    let mut schemes = Vec::new();
    let mut ninety_six_seen = false;
    let two_rho_vee = rs.two_rho_vee().0.clone();
    let rho = rho_as_coweight(rs);
    let ninety_six = Rational::from_integer(BigInt::from(96));
    let mut uniform_chain = None;
    for scheme in WeightScheme::ALL {
        let chain = build_chain(rs, scheme)?;
        let zeta = stationary_distribution(&chain)?;
        let g = chain.group();
        let top = zeta.value(g.longest()).clone();
        let ratios: Vec<Rational> = zeta.values.iter().map(|v| v / &top).collect();
        let (argmax, max_ratio) = ratios
            .iter()
            .enumerate()
            .fold((0, ratios[0].clone()), |(bk, bv), (k, v)| if *v > bv { (k, v.clone()) } else { (bk, bv) });
        let chambers = chamber_probabilities(&chain, &zeta);
        let cmax = chambers.values.iter().max().unwrap();
        let cmin = chambers.values.iter().min().unwrap();
        let chamber_ratio = cmax / cmin;
        let is_96 = chamber_ratio == ninety_six;
        ninety_six_seen |= is_96;
        let dir = psi(&chain, &zeta)?;
        schemes.push(SchemeProbe {
            weights: scheme,
            ratios: ratios
                .iter()
                .enumerate()
                .map(|(k, r)| (word_string(g.word(k)), fmt_rational(r)))
                .collect(),
            all_integral: ratios.iter().all(|r| r.is_integer()),
            argmax: word_string(g.word(argmax)),
            max_ratio: fmt_rational(&max_ratio),
            identity_ratio: fmt_rational(&ratios[g.identity()]),
            chamber_ratio: fmt_rational(&chamber_ratio),
            chamber_ratio_is_96: is_96,
            psi: dir.coords.0.clone(),
            psi_parallel_rho_vee: dir.is_parallel_to(&two_rho_vee),
            psi_parallel_rho: dir.is_parallel_to(&rho),
        });
        if scheme == WeightScheme::Uniform {
            uniform_chain = Some(chain);
        }
    }
    let chain = uniform_chain.expect("uniform scheme always probed");
    let (v, eigenvalue) = perron_without_loops(&chain);
    let g = chain.group();
    let chambers: Vec<f64> = (0..g.len()).map(|k| v[g.multiply(g.inverse(k), g.longest())]).collect();
    let cmax = chambers.iter().cloned().fold(f64::MIN, f64::max);
    let cmin = chambers.iter().cloned().fold(f64::MAX, f64::min);
    let path_ratio = cmax / cmin;
    let path_96 = (path_ratio - 96.0).abs() < 1e-6 * 96.0;
    ninety_six_seen |= path_96;
    let path_count = PathCountProbe {
        eigenvalue,
        identity_ratio: v[g.identity()] / v[g.longest()],
        chamber_ratio: path_ratio,
        chamber_ratio_is_96: path_96,
    };
    let is_a = rs.cartan_type().family == Family::A;
    let m = rs.rank() as u64;
    Ok(ConjectureReport {
        cartan_type: rs.cartan_type().to_string(),
        schemes,
        binomial_product: is_a.then(|| binomial_product(m + 1).to_string()),
        binomial_product_by_rank: is_a.then(|| binomial_product(m).to_string()),
        path_count,
        ninety_six_seen,
    })
}

/// Element records for JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordValue {
    pub word: String,
    pub value: String,
}

fn word_values(group: &WeylGroup, d: &Distribution) -> Vec<WordValue> {
    (0..group.len())
        .map(|k| WordValue { word: word_string(group.word(k)), value: fmt_rational(d.value(k)) })
        .collect()
}

/// The chain report: `{type, weights, zeta, psi, chambers, probes}`.
pub fn chain_report(chain: &TransitionMatrix, probes: Option<&ConjectureReport>) -> Result<serde_json::Value> {
    let zeta = stationary_distribution(chain)?;
    let dir = psi(chain, &zeta)?;
    let chambers = chamber_probabilities(chain, &zeta);
    let g = chain.group();
    let speed = radial_speed(g.root_system(), &dir);
    Ok(serde_json::json!({
        "type": g.root_system().cartan_type().to_string(),
        "weights": chain.scheme(),
        "zeta": word_values(g, &zeta),
        "psi": {
            "coords": dir.coords.0,
            "unit": dir.unit,
            "radial_speed": speed.value,
            "radial_speed_squared": fmt_rational(&speed.squared),
        },
        "chambers": word_values(g, &chambers),
        "probes": probes,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, solve_gauss};
    use crate::roots::CartanType;

    fn rs(tag: &str) -> RootSystem {
        RootSystem::new(tag.parse::<CartanType>().unwrap()).unwrap()
    }

    fn uniform(tag: &str) -> (TransitionMatrix, Distribution) {
        let chain = build_chain(&rs(tag), WeightScheme::Uniform).unwrap();
        let zeta = stationary_distribution(&chain).unwrap();
        (chain, zeta)
    }

    #[test]
    fn a2_rows() {
        let (chain, _) = uniform("A2");
        let g = chain.group();
        let w0 = g.longest();
        assert_eq!(chain.prob(0, w0), rat(1, 3));
        assert_eq!(chain.prob(0, 0), rat(2, 3));
        let s1 = g.index_of_word(&[1]).unwrap();
        let s1s2 = g.index_of_word(&[1, 2]).unwrap();
        assert_eq!(chain.prob(s1, 0), rat(1, 3));
        assert_eq!(chain.prob(s1, s1s2), rat(1, 3));
        assert_eq!(chain.prob(s1, s1), rat(1, 3));
        for i in 0..chain.len() {
            let total = chain.row(i).iter().fold(Rational::zero(), |a, (_, p)| a + p);
            assert_eq!(total, Rational::one());
        }
    }

    #[test]
    fn a2_stationary_distribution() {
        let (_, zeta) = uniform("A2");
        let expected: Vec<Rational> = [2, 1, 1, 2, 2, 1].iter().map(|&k| rat(k, 9)).collect();
        assert_eq!(zeta.values, expected);
    }

    #[test]
    fn a1_is_symmetric() {
        let (chain, zeta) = uniform("A1");
        assert_eq!(zeta.values, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(psi(&chain, &zeta).unwrap().coords.0, vec![1]);
        let c = chamber_probabilities(&chain, &zeta);
        assert_eq!(c.values, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn marks_equal_uniform_in_type_a() {
        let r = rs("A3");
        let u = build_chain(&r, WeightScheme::Uniform).unwrap();
        let m = build_chain(&r, WeightScheme::Marks).unwrap();
        assert_eq!(u.matrix, m.matrix);
    }

    #[test]
    fn stationary_vectors_are_invariant_for_all_small_types() {
        for tag in ["A1", "A2", "A3", "B2", "G2", "B3", "C3"] {
            let r = rs(tag);
            for scheme in WeightScheme::ALL {
                let chain = build_chain(&r, scheme).unwrap();
                let zeta = stationary_distribution(&chain).unwrap();
                assert_eq!(zeta.total(), Rational::one());
                assert_eq!(chain.matrix.vec_mul(&zeta.values), zeta.values);
                let dir = psi(&chain, &zeta).unwrap();
                assert!(r.pair_simple(&dir.coords).iter().all(|&p| p >= 0));
            }
        }
    }

    #[test]
    fn modular_and_fraction_solves_agree_on_b3() {
        let chain = build_chain(&rs("B3"), WeightScheme::Uniform).unwrap();
        let zeta = stationary_distribution(&chain).unwrap();
        let n = chain.len();
        let mut a = SparseMatrix::zeros(n);
        for i in 0..n {
            for (j, p) in chain.row(i) {
                if *j != n - 1 {
                    a.add(*j, i, p.clone());
                }
            }
            if i != n - 1 {
                a.add(i, i, rat_int(-1));
            }
            a.add(n - 1, i, Rational::one());
        }
        let mut b = vec![Rational::zero(); n];
        b[n - 1] = Rational::one();
        assert_eq!(solve_gauss(&a, &b).unwrap(), zeta.values);
    }

    #[test]
    fn a2_direction_and_chambers() {
        let (chain, zeta) = uniform("A2");
        let dir = psi(&chain, &zeta).unwrap();
        assert_eq!(dir.coords.0, vec![1, 1]);
        assert!(dir.is_parallel_to(&[2, 2]));
        assert!(!dir.is_parallel_to(&[-1, -1]));
        let c = chamber_probabilities(&chain, &zeta);
        assert_eq!(c.values[chain.group().longest()], rat(2, 9));
        let mut sorted = c.values.clone();
        sorted.sort();
        assert_eq!(sorted, [1, 1, 1, 2, 2, 2].iter().map(|&k| rat(k, 9)).collect::<Vec<_>>());
        // Adjacent chambers alternate: s_i C_w has the other value.
        let g = chain.group();
        for k in 0..g.len() {
            for i in 1..=2 {
                let right = g.multiply(k, g.index_of_word(&[i]).unwrap());
                assert_ne!(c.values[k], c.values[right]);
            }
        }
    }

    #[test]
    fn edge_rates() {
        let (chain, zeta) = uniform("A2");
        let g = chain.group();
        assert_eq!(ergodic_edge_rate(&chain, &zeta, 0, g.longest()).unwrap(), rat(2, 27));
        let s1 = g.index_of_word(&[1]).unwrap();
        let s1s2 = g.index_of_word(&[1, 2]).unwrap();
        assert_eq!(ergodic_edge_rate(&chain, &zeta, s1, s1s2).unwrap(), rat(1, 27));
        assert!(matches!(ergodic_edge_rate(&chain, &zeta, s1, s1), Err(CoxError::NoSuchEdge { .. })));
        assert!(matches!(ergodic_edge_rate(&chain, &zeta, 0, s1), Err(CoxError::NoSuchEdge { .. })));
    }

    #[test]
    fn radial_speed_examples() {
        let r = rs("A1");
        let d = DirectionVector::from_rational(&r, &[rat_int(1)]).unwrap();
        // |α^∨|² = 2 and ℓ(t_{α^∨}) = 2.
        assert_eq!(radial_speed(&r, &d).squared, rat(2, 4));
        let r = rs("A2");
        let d = DirectionVector::from_rational(&r, &[rat_int(1), rat_int(1)]).unwrap();
        let s = radial_speed(&r, &d);
        assert_eq!(s.squared, rat(2, 16));
        let scaled = DirectionVector::from_rational(&r, &[rat_int(5), rat_int(5)]).unwrap();
        assert_eq!(radial_speed(&r, &scaled), s);
        // The denominator is the length of the translation.
        let t = crate::affine::AffineElement::translation(&r, d.coords.neg()).unwrap();
        assert_eq!(t.length(&r), 4);
    }

    #[test]
    fn direction_errors() {
        let r = rs("A2");
        assert_eq!(
            DirectionVector::from_rational(&r, &[Rational::zero(), Rational::zero()]),
            Err(CoxError::ZeroDirection)
        );
        assert!(matches!(
            DirectionVector::from_rational(&r, &[rat_int(1), rat_int(-1)]),
            Err(CoxError::NotDominant(_))
        ));
    }

    #[test]
    fn a2_probe() {
        let report = conjecture_probes(&rs("A2")).unwrap();
        let u = &report.schemes[0];
        let values: Vec<&str> = u.ratios.iter().map(|(_, v)| v.as_str()).collect();
        assert_eq!(values, ["2/1", "1/1", "1/1", "2/1", "2/1", "1/1"]);
        assert!(u.all_integral);
        assert_eq!(u.identity_ratio, "2/1");
        assert_eq!(u.max_ratio, "2/1");
        assert!(u.psi_parallel_rho_vee && u.psi_parallel_rho);
        assert_eq!(report.binomial_product.as_deref(), Some("9"));
        assert_eq!(report.binomial_product_by_rank.as_deref(), Some("2"));
    }

    #[test]
    fn binomial_products() {
        assert_eq!(binomial_product(3), BigInt::from(9));
        assert_eq!(binomial_product(4), BigInt::from(96));
        assert_eq!(binomial_product(5), BigInt::from(2500));
    }

    #[test]
    fn rho_transfer() {
        // Simply laced: ρ and ρ^∨ agree.
        assert_eq!(rho_as_coweight(&rs("A3")), rs("A3").two_rho_vee().0);
        // B2: 2ρ = 3α_1 + 4α_2 with α_2 short, so ρ ∝ 3·2 α_1^∨ + 4 α_2^∨.
        assert_eq!(rho_as_coweight(&rs("B2")), vec![6, 4]);
    }

    #[test]
    fn json_report_shape() {
        let chain = build_chain(&rs("A2"), WeightScheme::Uniform).unwrap();
        let v = chain_report(&chain, None).unwrap();
        assert_eq!(v["type"], "A2");
        assert_eq!(v["weights"], "uniform");
        assert_eq!(v["zeta"][0]["word"], "");
        assert_eq!(v["zeta"][0]["value"], "2/9");
        assert_eq!(v["psi"]["coords"], serde_json::json!([1, 1]));
        assert_eq!(v["chambers"][5]["value"], "2/9");
    }
}
