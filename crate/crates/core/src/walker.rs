//! Reduced random walks on alcoves and their exact step-`N` laws.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{antidominant_witness, AffineElement};
use crate::error::{CoxError, Result};
use crate::linalg::{fmt_rational, rat, Rational};
use crate::roots::{CorootVec, RootSystem};
use crate::weyl::{word_string, WeylElement};

/// Largest rank and step count accepted by the exact dynamic programs.
pub const EXACT_MAX_RANK: usize = 3;
pub const EXACT_MAX_STEPS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Uniform over the covers of the current alcove.
    Free,
    /// Each of the `r` generators tried with probability `1/r`; a failed try stays put.
    Delayed,
    /// Uniform over covers that stay in the fundamental chamber.
    Grassmannian,
    /// Delayed walk constrained to the fundamental chamber.
    DelayedGrassmannian,
}

impl Variant {
    pub fn is_delayed(self) -> bool {
        matches!(self, Variant::Delayed | Variant::DelayedGrassmannian)
    }

    pub fn is_grassmannian(self) -> bool {
        matches!(self, Variant::Grassmannian | Variant::DelayedGrassmannian)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Free => "free",
            Variant::Delayed => "delayed",
            Variant::Grassmannian => "grassmannian",
            Variant::DelayedGrassmannian => "delayed-grassmannian",
        })
    }
}

impl FromStr for Variant {
    type Err = CoxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Variant::Free),
            "delayed" => Ok(Variant::Delayed),
            "grassmannian" => Ok(Variant::Grassmannian),
            "delayed-grassmannian" => Ok(Variant::DelayedGrassmannian),
            other => Err(CoxError::UnsupportedType(format!("walk variant `{other}`"))),
        }
    }
}

/// A seeded walk `X_0 = id, X_1, ..., X_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub seed: u64,
    pub variant: Variant,
    pub states: Vec<AffineElement>,
    /// Generator applied at each step, `None` when a delayed walk stayed put.
    pub moves: Vec<Option<usize>>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.moves.len()
    }

    pub fn last(&self) -> &AffineElement {
        self.states.last().expect("trajectory always holds X_0")
    }

    /// CSV with columns `step,word,lambda,length`; the word is the reduced
    /// word of `X_k` built so far (latest generator first).
    pub fn to_csv(&self, rs: &RootSystem) -> String {
        let mut out = String::from("step,word,lambda,length\n");
        let mut word: Vec<usize> = Vec::new();
        for (k, x) in self.states.iter().enumerate() {
            if k > 0 {
                if let Some(i) = self.moves[k - 1] {
                    word.insert(0, i);
                }
            }
            let lambda: Vec<String> = x.lambda().0.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!(
                "{k},{},{},{}\n",
                word_string(&word),
                lambda.join(" "),
                x.length(rs)
            ));
        }
        out
    }

    pub fn to_json(&self, rs: &RootSystem) -> serde_json::Value {
        serde_json::json!({
            "type": rs.cartan_type().to_string(),
            "seed": self.seed,
            "variant": self.variant,
            "moves": self.moves,
            "end": self.last().record(rs),
        })
    }
}

fn step_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One step of the walk; returns the generator used, if any.
fn step<R: Rng>(rs: &RootSystem, x: &mut AffineElement, variant: Variant, rng: &mut R) -> Option<usize> {
    let r = rs.rank() + 1;
    if variant.is_delayed() {
        let i = rng.random_range(0..r);
        if !x.is_left_ascent(rs, i) {
            return None;
        }
        let (y, _) = x.left_mul_gen(rs, i);
        if variant.is_grassmannian() && !y.is_affine_grassmannian(rs) {
            return None;
        }
        *x = y;
        Some(i)
    } else {
        let moves = if variant.is_grassmannian() { x.grassmannian_up_moves(rs) } else { x.up_moves(rs) };
        let i = moves[rng.random_range(0..moves.len())];
        *x = x.left_mul_gen(rs, i).0;
        Some(i)
    }
}

fn walk_endpoint(rs: &RootSystem, steps: usize, variant: Variant, seed: u64, stream: u64) -> AffineElement {
    let mut rng = step_rng(seed, stream);
    let mut x = AffineElement::identity(rs);
    for _ in 0..steps {
        step(rs, &mut x, variant, &mut rng);
    }
    x
}

/// Runs one walk of `steps` steps from the fundamental alcove.
pub fn simulate(rs: &RootSystem, steps: usize, variant: Variant, seed: u64) -> Trajectory {
    simulate_stream(rs, steps, variant, seed, 0)
}

/// As [`simulate`], on an independent stream of the same seed.
pub fn simulate_stream(rs: &RootSystem, steps: usize, variant: Variant, seed: u64, stream: u64) -> Trajectory {
    let mut rng = step_rng(seed, stream);
    let mut x = AffineElement::identity(rs);
    let mut states = Vec::with_capacity(steps + 1);
    let mut moves = Vec::with_capacity(steps);
    states.push(x.clone());
    for _ in 0..steps {
        moves.push(step(rs, &mut x, variant, &mut rng));
        states.push(x.clone());
    }
    Trajectory { seed, variant, states, moves }
}

/// Runs `trials` independent walks (stream `k` for trial `k`) in parallel and
/// returns their endpoints in trial order.
pub fn simulate_endpoints(
    rs: &RootSystem,
    steps: usize,
    variant: Variant,
    trials: usize,
    seed: u64,
) -> Vec<AffineElement> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| walk_endpoint(rs, steps, variant, seed, t))
        .collect()
}

/// Exact law of `X_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepDistribution {
    pub steps: usize,
    pub variant: Variant,
    pub probs: HashMap<AffineElement, Rational>,
}

impl StepDistribution {
    pub fn prob(&self, x: &AffineElement) -> Rational {
        self.probs.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.probs.values().fold(Rational::zero(), |a, b| a + b)
    }

    /// Entries sorted by (length, reduced word).
    pub fn sorted(&self, rs: &RootSystem) -> Vec<(Vec<usize>, &AffineElement, &Rational)> {
        let mut v: Vec<_> = self.probs.iter().map(|(x, p)| (x.reduced_word(rs), x, p)).collect();
        v.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        v
    }

    pub fn to_json(&self, rs: &RootSystem) -> serde_json::Value {
        let entries: Vec<_> = self
            .sorted(rs)
            .into_iter()
            .map(|(_, x, p)| serde_json::json!({ "element": x.record(rs), "probability": fmt_rational(p) }))
            .collect();
        serde_json::json!({
            "type": rs.cartan_type().to_string(),
            "steps": self.steps,
            "variant": self.variant,
            "distribution": entries,
        })
    }
}

fn exact_guard(rs: &RootSystem, steps: usize) -> Result<()> {
    if rs.rank() > EXACT_MAX_RANK || steps > EXACT_MAX_STEPS {
        return Err(CoxError::StateSpaceTooLarge(format!(
            "exact step laws need rank <= {EXACT_MAX_RANK} and N <= {EXACT_MAX_STEPS}, got rank {} and N = {steps}",
            rs.rank()
        )));
    }
    Ok(())
}

/// Exact law of `X_N` for the free or delayed walk.
///
/// The delayed law is the 0-Hecke power `ξ^N` with `ξ = (1/r) Σ T_i`.
pub fn exact_distribution(rs: &RootSystem, steps: usize, variant: Variant) -> Result<StepDistribution> {
    exact_guard(rs, steps)?;
    if variant.is_grassmannian() {
        return Err(CoxError::UnsupportedType(format!("exact law of the {variant} walk")));
    }
    let r = rs.rank() + 1;
    let mut probs: HashMap<AffineElement, Rational> = HashMap::new();
    probs.insert(AffineElement::identity(rs), Rational::one());
    for _ in 0..steps {
        let mut next: HashMap<AffineElement, Rational> = HashMap::new();
        for (x, p) in probs {
            if variant.is_delayed() {
                let share = &p * rat(1, r as i64);
                for i in 0..r {
                    let (y, up) = x.left_mul_gen(rs, i);
                    let target = if up { y } else { x.clone() };
                    *next.entry(target).or_insert_with(Rational::zero) += &share;
                }
            } else {
                let ups = x.up_moves(rs);
                let share = &p * rat(1, ups.len() as i64);
                for i in ups {
                    *next.entry(x.left_mul_gen(rs, i).0).or_insert_with(Rational::zero) += &share;
                }
            }
        }
        probs = next;
    }
    Ok(StepDistribution { steps, variant, probs })
}

/// Number of reduced words of each element of length `N`.
pub fn reduced_word_counts(rs: &RootSystem, steps: usize) -> Result<HashMap<AffineElement, BigUint>> {
    exact_guard(rs, steps)?;
    let mut counts: HashMap<AffineElement, BigUint> = HashMap::new();
    counts.insert(AffineElement::identity(rs), BigUint::one());
    for _ in 0..steps {
        let mut next: HashMap<AffineElement, BigUint> = HashMap::new();
        for (x, c) in &counts {
            for i in x.up_moves(rs) {
                *next.entry(x.left_mul_gen(rs, i).0).or_insert_with(BigUint::zero) += c;
            }
        }
        counts = next;
    }
    Ok(counts)
}

/// Chamber tallies of walk endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberFrequencies {
    pub trials: usize,
    /// Endpoints with a non-regular translation part.
    pub undecided: usize,
    pub counts: HashMap<WeylElement, usize>,
}

impl ChamberFrequencies {
    pub fn count(&self, w: &WeylElement) -> usize {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn frequency(&self, w: &WeylElement) -> f64 {
        self.count(w) as f64 / self.trials as f64
    }

    pub fn frequencies(&self) -> HashMap<WeylElement, f64> {
        self.counts.iter().map(|(w, &c)| (w.clone(), c as f64 / self.trials as f64)).collect()
    }
}

/// Chamber of the endpoint of `trials` free walks of length `steps`.
pub fn empirical_chamber_frequencies(rs: &RootSystem, steps: usize, trials: usize, seed: u64) -> ChamberFrequencies {
    let ends = simulate_endpoints(rs, steps, Variant::Free, trials, seed);
    chamber_frequencies(rs, &ends)
}

pub fn chamber_frequencies(rs: &RootSystem, ends: &[AffineElement]) -> ChamberFrequencies {
    let mut counts = HashMap::new();
    let mut undecided = 0;
    for x in ends {
        match x.chamber_of(rs) {
            Some(w) => *counts.entry(w).or_insert(0) += 1,
            None => undecided += 1,
        }
    }
    ChamberFrequencies { trials: ends.len(), undecided, counts }
}

/// Centroid of `A_x` folded into the fundamental chamber, as floats in the
/// simple-coroot basis.
pub fn folded_position(rs: &RootSystem, x: &AffineElement) -> Vec<f64> {
    let c = x.centroid(rs);
    // Scale to integers, fold, scale back.
    let den = c.iter().fold(1i64, |a, v| num_integer::lcm(a, *v.denom()));
    let scaled = CorootVec(c.iter().map(|v| -(v.numer() * (den / v.denom()))).collect());
    let (_, mu) = antidominant_witness(rs, &scaled);
    mu.0.iter().map(|&v| -(v as f64) / den as f64).collect()
}

/// Mean of the unit vectors pointing to the folded endpoints, normalized.
pub fn mean_direction(rs: &RootSystem, ends: &[AffineElement]) -> Vec<f64> {
    let n = rs.rank();
    let units: Vec<Vec<f64>> = ends
        .par_iter()
        .map(|x| {
            let p = folded_position(rs, x);
            let norm = rs.inner_f64(&p, &p).sqrt();
            p.into_iter().map(|v| v / norm).collect()
        })
        .collect();
    let mut sum = vec![0.0; n];
    for u in &units {
        for k in 0..n {
            sum[k] += u[k];
        }
    }
    let norm = rs.inner_f64(&sum, &sum).sqrt();
    sum.into_iter().map(|v| v / norm).collect()
}

/// Mean asymptotic direction of free walks, folded into the fundamental chamber.
pub fn empirical_direction(rs: &RootSystem, steps: usize, trials: usize, seed: u64) -> Vec<f64> {
    mean_direction(rs, &simulate_endpoints(rs, steps, Variant::Free, trials, seed))
}

/// Angle in degrees between two coroot-basis vectors.
pub fn angle_degrees(rs: &RootSystem, a: &[f64], b: &[f64]) -> f64 {
    let c = rs.inner_f64(a, b) / (rs.inner_f64(a, a) * rs.inner_f64(b, b)).sqrt();
    c.clamp(-1.0, 1.0).acos().to_degrees()
}

/// Observed `type(X_k) → type(X_{k+1})` transitions, stays included.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransitionCounts {
    pub counts: HashMap<(WeylElement, WeylElement), u64>,
}

impl TransitionCounts {
    pub fn get(&self, from: &WeylElement, to: &WeylElement) -> u64 {
        self.counts.get(&(from.clone(), to.clone())).copied().unwrap_or(0)
    }

    pub fn out_total(&self, from: &WeylElement) -> u64 {
        self.counts.iter().filter(|((f, _), _)| f == from).map(|(_, &c)| c).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Type transitions of one long walk, tallied in `batches` consecutive blocks
/// of equal length without storing the trajectory.
pub fn transition_batches(
    rs: &RootSystem,
    steps: usize,
    batches: usize,
    variant: Variant,
    seed: u64,
) -> Vec<TransitionCounts> {
    let batches = batches.max(1);
    let per = steps / batches;
    let mut rng = step_rng(seed, 0);
    let mut x = AffineElement::identity(rs);
    (0..batches)
        .map(|_| {
            let mut counts = HashMap::new();
            for _ in 0..per {
                let from = x.type_of().clone();
                step(rs, &mut x, variant, &mut rng);
                *counts.entry((from, x.type_of().clone())).or_insert(0) += 1;
            }
            TransitionCounts { counts }
        })
        .collect()
}

/// Tallies the type transitions of a trajectory.
pub fn projected_kernel(_rs: &RootSystem, sample: &Trajectory) -> TransitionCounts {
    let mut counts = HashMap::new();
    for pair in sample.states.windows(2) {
        let key = (pair[0].type_of().clone(), pair[1].type_of().clone());
        *counts.entry(key).or_insert(0) += 1;
    }
    TransitionCounts { counts }
}
