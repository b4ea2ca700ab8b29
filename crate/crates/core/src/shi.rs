//! Regions of the Shi arrangement `{H_α^0, H_α^1 : α > 0}` and the graph Γ on
//! (region, type) pairs traced out by the walk.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::affine::AffineElement;
use crate::error::{CoxError, Result};
use crate::linalg::{fmt_rational, rat, solve, Rational, SparseMatrix};
use crate::roots::RootSystem;
use crate::weyl::{word_string, WeylElement, WeylGroup};

/// Largest Weyl group accepted (every rank-3 group).
pub const SHI_MAX_GROUP_ORDER: u64 = 48;
/// Exploration length at which region enumeration gives up.
pub const SHI_MAX_LENGTH: usize = 60;

/// Position of a region relative to `H_α^0` and `H_α^1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Band {
    /// `⟨v,α⟩ < 0`
    Below,
    /// `0 < ⟨v,α⟩ < 1`
    Between,
    /// `⟨v,α⟩ > 1`
    Above,
}

impl Band {
    pub fn sign(self) -> i8 {
        match self {
            Band::Below => -1,
            Band::Between => 0,
            Band::Above => 1,
        }
    }
}

/// A region, by its band for each positive root (in root-system order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiRegion {
    pub bands: Vec<Band>,
    /// `Some(w)` when the region is `B_w`, the translate of the chamber `C_w`.
    pub chamber: Option<WeylElement>,
}

impl ShiRegion {
    /// Number of hyperplane pairs already left behind.
    pub fn rank(&self) -> usize {
        self.bands.iter().filter(|b| **b != Band::Between).count()
    }

    pub fn is_fundamental(&self) -> bool {
        self.rank() == 0
    }

    pub fn signs(&self) -> Vec<i8> {
        self.bands.iter().map(|b| b.sign()).collect()
    }
}

/// Bands of the alcove `A_x`: on it `⟨v,α⟩` ranges over `(k, k+1)` with
/// `k = −⟨λ,α⟩ − [wα < 0]`.
pub fn alcove_bands(rs: &RootSystem, x: &AffineElement) -> Vec<Band> {
    rs.positive_roots()
        .iter()
        .map(|a| {
            let flip = !x.type_of().act_root(a).expect("same rank").is_positive() as i64;
            let k = -rs.pair(x.lambda(), a).expect("same rank") - flip;
            match k {
                k if k < 0 => Band::Below,
                0 => Band::Between,
                _ => Band::Above,
            }
        })
        .collect()
}

/// Bands of `B_w`: above `H_α^1` where `wα > 0`, below `H_α^0` otherwise.
pub fn chamber_bands(rs: &RootSystem, w: &WeylElement) -> Vec<Band> {
    rs.positive_roots()
        .iter()
        .map(|a| if w.act_root(a).expect("same rank").is_positive() { Band::Above } else { Band::Below })
        .collect()
}

fn guard(rs: &RootSystem) -> Result<()> {
    let order = rs.group_order();
    if order > SHI_MAX_GROUP_ORDER {
        return Err(CoxError::RankTooLarge {
            tag: rs.cartan_type().to_string(),
            order,
            cap: SHI_MAX_GROUP_ORDER,
        });
    }
    Ok(())
}

/// Alcoves by increasing length, grown one shell at a time.
struct AlcoveBall {
    seen: HashSet<AffineElement>,
    shells: Vec<Vec<AffineElement>>,
}

impl AlcoveBall {
    fn new(rs: &RootSystem) -> Self {
        let id = AffineElement::identity(rs);
        Self { seen: HashSet::from([id.clone()]), shells: vec![vec![id]] }
    }

    fn radius(&self) -> usize {
        self.shells.len() - 1
    }

    fn grow(&mut self, rs: &RootSystem) {
        let mut next = Vec::new();
        for x in self.shells.last().unwrap() {
            for i in x.up_moves(rs) {
                let y = x.left_mul_gen(rs, i).0;
                if self.seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        self.shells.push(next);
    }

    fn alcoves(&self) -> impl Iterator<Item = &AffineElement> {
        self.shells.iter().flatten()
    }
}

fn label_regions(rs: &RootSystem, bands: HashSet<Vec<Band>>) -> Result<Vec<ShiRegion>> {
    let group = WeylGroup::new(rs)?;
    let chambers: HashMap<Vec<Band>, WeylElement> =
        group.elements().iter().map(|w| (chamber_bands(rs, w), w.clone())).collect();
    let mut regions: Vec<ShiRegion> = bands
        .into_iter()
        .map(|b| {
            let chamber = chambers.get(&b).cloned();
            ShiRegion { bands: b, chamber }
        })
        .collect();
    regions.sort_by(|a, b| (a.rank(), &a.bands).cmp(&(b.rank(), &b.bands)));
    Ok(regions)
}

fn expected_region_count(rs: &RootSystem) -> usize {
    // The classical count (h+1)^rank, used only as a completeness certificate.
    ((rs.coxeter_number() + 1) as usize).pow(rs.rank() as u32)
}

/// Grows the ball until the region count is stable over two increments and
/// matches the classical count.
fn explore(rs: &RootSystem, start: usize) -> Result<(AlcoveBall, Vec<ShiRegion>)> {
    guard(rs)?;
    let mut ball = AlcoveBall::new(rs);
    let mut bands: HashSet<Vec<Band>> = HashSet::from([alcove_bands(rs, &AffineElement::identity(rs))]);
    let mut history = Vec::new();
    let target = expected_region_count(rs);
    while ball.radius() < SHI_MAX_LENGTH {
        ball.grow(rs);
        for x in ball.shells.last().unwrap() {
            bands.insert(alcove_bands(rs, x));
        }
        history.push(bands.len());
        let stable = history.len() >= 3 && history[history.len() - 3..].iter().all(|&c| c == bands.len());
        if ball.radius() >= start && stable && bands.len() == target {
            let regions = label_regions(rs, bands)?;
            return Ok((ball, regions));
        }
    }
    Err(CoxError::NonStabilizing(SHI_MAX_LENGTH))
}

/// Regions of the Shi arrangement, exploring alcoves of length at least
/// `min_length` and growing the bound until the count is certified.
pub fn enumerate_regions(rs: &RootSystem, min_length: usize) -> Result<Vec<ShiRegion>> {
    explore(rs, min_length).map(|(_, r)| r)
}

type VertexKey = (Vec<Band>, WeylElement);
type Profile = BTreeMap<(Vec<Band>, Vec<usize>), Rational>;

/// Targets of the up moves from `x`, each with probability `1/#moves`.
fn edge_profile(rs: &RootSystem, x: &AffineElement) -> Vec<(VertexKey, AffineElement, Rational)> {
    let moves = x.up_moves(rs);
    let p = rat(1, moves.len() as i64);
    let mut out: Vec<(VertexKey, AffineElement, Rational)> = Vec::new();
    for i in moves {
        let y = x.left_mul_gen(rs, i).0;
        let key = (alcove_bands(rs, &y), y.type_of().clone());
        match out.iter_mut().find(|(k, _, _)| *k == key) {
            Some(entry) => entry.2 += &p,
            None => out.push((key, y, p.clone())),
        }
    }
    out
}

fn comparable(rs: &RootSystem, profile: &[(VertexKey, AffineElement, Rational)]) -> Profile {
    profile
        .iter()
        .map(|((b, w), _, p)| ((b.clone(), w.reduced_word(rs)), p.clone()))
        .collect()
}

/// Γ: vertices `(B, w)` reachable from `(A°, id)`, with the walk's transition
/// probabilities. Vertices in chamber translates `B_w` are absorbing.
#[derive(Debug, Clone)]
pub struct GammaGraph {
    rs: RootSystem,
    regions: Vec<ShiRegion>,
    /// `(region index, type)` per vertex.
    vertices: Vec<(usize, WeylElement)>,
    witnesses: Vec<AffineElement>,
    edges: Vec<Vec<(usize, Rational)>>,
    source: usize,
}

impl GammaGraph {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn regions(&self) -> &[ShiRegion] {
        &self.regions
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, v: usize) -> (&ShiRegion, &WeylElement) {
        let (r, w) = &self.vertices[v];
        (&self.regions[*r], w)
    }

    pub fn region_of(&self, v: usize) -> usize {
        self.vertices[v].0
    }

    pub fn witness(&self, v: usize) -> &AffineElement {
        &self.witnesses[v]
    }

    pub fn edges(&self, v: usize) -> &[(usize, Rational)] {
        &self.edges[v]
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn is_absorbing(&self, v: usize) -> bool {
        self.regions[self.vertices[v].0].chamber.is_some()
    }

    pub fn region_index(&self, bands: &[Band]) -> Option<usize> {
        self.regions.iter().position(|r| r.bands == bands)
    }

    /// Index of the region `B_w`.
    pub fn chamber_region(&self, w: &WeylElement) -> Option<usize> {
        self.regions.iter().position(|r| r.chamber.as_ref() == Some(w))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rs = &self.rs;
        let regions: Vec<_> = self
            .regions
            .iter()
            .enumerate()
            .map(|(k, r)| {
                serde_json::json!({
                    "id": k,
                    "signs": r.signs(),
                    "chamber": r.chamber.as_ref().map(|w| word_string(&w.reduced_word(rs))),
                })
            })
            .collect();
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, (r, w))| {
                serde_json::json!({
                    "id": k,
                    "region": r,
                    "type": word_string(&w.reduced_word(rs)),
                    "absorbing": self.is_absorbing(k),
                    "edges": self.edges[k].iter().map(|(t, p)| serde_json::json!({"to": t, "p": fmt_rational(p)})).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "type": rs.cartan_type().to_string(),
            "source": self.source,
            "regions": regions,
            "vertices": vertices,
        })
    }
}

/// Builds Γ from witness alcoves, checking every alcove in the explored ball
/// against the profile of its vertex.
pub fn build_gamma(rs: &RootSystem) -> Result<GammaGraph> {
    let (ball, regions) = explore(rs, 0)?;
    let region_of: HashMap<Vec<Band>, usize> = regions.iter().enumerate().map(|(k, r)| (r.bands.clone(), k)).collect();
    let id = AffineElement::identity(rs);
    let mut index: HashMap<VertexKey, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut witnesses = Vec::new();
    let mut edges: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut profiles: Vec<Profile> = Vec::new();
    let lookup = |bands: &Vec<Band>| {
        region_of
            .get(bands)
            .copied()
            .ok_or_else(|| CoxError::ProfileMismatch(format!("alcove in unlisted region {bands:?}")))
    };

    let source_key = (alcove_bands(rs, &id), id.type_of().clone());
    index.insert(source_key.clone(), 0);
    vertices.push((lookup(&source_key.0)?, source_key.1.clone()));
    witnesses.push(id);
    edges.push(Vec::new());
    profiles.push(Profile::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if regions[vertices[v].0].chamber.is_some() {
            continue;
        }
        let profile = edge_profile(rs, &witnesses[v]);
        profiles[v] = comparable(rs, &profile);
        let mut out = Vec::new();
        for (key, y, p) in profile {
            let t = match index.get(&key) {
                Some(&t) => t,
                None => {
                    let t = vertices.len();
                    vertices.push((lookup(&key.0)?, key.1.clone()));
                    index.insert(key, t);
                    witnesses.push(y);
                    edges.push(Vec::new());
                    profiles.push(Profile::new());
                    queue.push_back(t);
                    t
                }
            };
            out.push((t, p));
        }
        edges[v] = out;
    }

    // Every other alcove of a transient vertex must have the same profile.
    for x in ball.alcoves() {
        let key = (alcove_bands(rs, x), x.type_of().clone());
        if regions[lookup(&key.0)?].chamber.is_some() {
            continue;
        }
        let Some(&v) = index.get(&key) else {
            return Err(CoxError::ProfileMismatch(format!(
                "alcove {:?} maps to a vertex missing from the graph",
                x.reduced_word(rs)
            )));
        };
        if regions[vertices[v].0].chamber.is_some() {
            continue;
        }
        if comparable(rs, &edge_profile(rs, x)) != profiles[v] {
            return Err(CoxError::ProfileMismatch(format!(
                "region {:?}, type {:?}",
                regions[vertices[v].0].signs(),
                key.1.reduced_word(rs)
            )));
        }
    }
    Ok(GammaGraph { rs: rs.clone(), regions, vertices, witnesses, edges, source: 0 })
}

/// Solves for the probabilities of ever reaching `targets` from each vertex
/// in `unknown`, where `targets` and `unknown` are disjoint.
fn hitting(gamma: &GammaGraph, targets: &HashSet<usize>) -> Result<Vec<Rational>> {
    let n = gamma.vertex_count();
    // Vertices that can reach a target.
    let mut reverse = vec![Vec::new(); n];
    for v in 0..n {
        for (t, _) in gamma.edges(v) {
            reverse[*t].push(v);
        }
    }
    let mut can_reach = vec![false; n];
    let mut queue: VecDeque<usize> = targets.iter().copied().collect();
    for &t in targets {
        can_reach[t] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &u in &reverse[v] {
            if !can_reach[u] {
                can_reach[u] = true;
                queue.push_back(u);
            }
        }
    }
    let unknown: Vec<usize> = (0..n).filter(|v| can_reach[*v] && !targets.contains(v)).collect();
    let pos: HashMap<usize, usize> = unknown.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let m = unknown.len();
    let mut a = SparseMatrix::zeros(m);
    let mut b = vec![Rational::zero(); m];
    for (k, &v) in unknown.iter().enumerate() {
        a.add(k, k, Rational::one());
        for (t, p) in gamma.edges(v) {
            if targets.contains(t) {
                b[k] += p;
            } else if let Some(&j) = pos.get(t) {
                a.add(k, j, -p.clone());
            }
        }
    }
    let h = solve(&a, &b)?;
    let mut out = vec![Rational::zero(); n];
    for &t in targets {
        out[t] = Rational::one();
    }
    for (k, v) in unknown.into_iter().enumerate() {
        out[v] = h[k].clone();
    }
    Ok(out)
}

/// Expected visits to each transient vertex, from `(I − M')^T g = ε_source`.
fn expected_visits(gamma: &GammaGraph) -> Result<(Vec<usize>, Vec<Rational>)> {
    let transient: Vec<usize> = (0..gamma.vertex_count()).filter(|&v| !gamma.is_absorbing(v)).collect();
    let pos: HashMap<usize, usize> = transient.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let m = transient.len();
    let mut a = SparseMatrix::zeros(m);
    for (k, &v) in transient.iter().enumerate() {
        a.add(k, k, Rational::one());
        for (t, p) in gamma.edges(v) {
            if let Some(&j) = pos.get(t) {
                a.add(j, k, -p.clone());
            }
        }
    }
    let mut e = vec![Rational::zero(); m];
    e[pos[&gamma.source()]] = Rational::one();
    Ok((transient, solve(&a, &e)?))
}

/// Probability that the walk ends in `B_w`: `⟨(I − M')^{-T} ε_source, p^w⟩`.
pub fn absorption_probability(gamma: &GammaGraph, w: &WeylElement) -> Result<Rational> {
    Ok(absorption_probabilities(gamma)?.remove(w).unwrap_or_else(Rational::zero))
}

/// Absorption probabilities for every chamber, from a single solve.
pub fn absorption_probabilities(gamma: &GammaGraph) -> Result<HashMap<WeylElement, Rational>> {
    let (transient, g) = expected_visits(gamma)?;
    let mut out: HashMap<WeylElement, Rational> = HashMap::new();
    for r in gamma.regions() {
        if let Some(w) = &r.chamber {
            out.insert(w.clone(), Rational::zero());
        }
    }
    for (k, &v) in transient.iter().enumerate() {
        for (t, p) in gamma.edges(v) {
            if let Some(w) = &gamma.regions()[gamma.region_of(*t)].chamber {
                *out.get_mut(w).unwrap() += &g[k] * p;
            }
        }
    }
    Ok(out)
}

/// Probability that the walk ever enters each region, in region order.
pub fn region_hitting_probabilities(gamma: &GammaGraph) -> Result<Vec<Rational>> {
    (0..gamma.regions().len())
        .map(|r| {
            let targets: HashSet<usize> = (0..gamma.vertex_count()).filter(|&v| gamma.region_of(v) == r).collect();
            if targets.is_empty() {
                return Ok(Rational::zero());
            }
            Ok(hitting(gamma, &targets)?[gamma.source()].clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::CartanType;
    use crate::walker::{simulate, Variant};

    fn rs(tag: &str) -> RootSystem {
        RootSystem::new(tag.parse::<CartanType>().unwrap()).unwrap()
    }

    #[test]
    fn region_counts() {
        assert_eq!(enumerate_regions(&rs("A1"), 0).unwrap().len(), 3);
        assert_eq!(enumerate_regions(&rs("A2"), 0).unwrap().len(), 16);
        assert_eq!(enumerate_regions(&rs("B2"), 0).unwrap().len(), 25);
        assert_eq!(enumerate_regions(&rs("G2"), 0).unwrap().len(), 49);
        assert_eq!(enumerate_regions(&rs("A3"), 0).unwrap().len(), 125);
        assert_eq!(enumerate_regions(&rs("B3"), 0).unwrap().len(), 343);
    }

    #[test]
    fn fundamental_region_first_and_chambers_labelled() {
        let r = rs("A2");
        let regions = enumerate_regions(&r, 0).unwrap();
        assert!(regions[0].is_fundamental());
        assert_eq!(regions.iter().filter(|b| b.chamber.is_some()).count(), 6);
        assert!(matches!(enumerate_regions(&rs("A4"), 0), Err(CoxError::RankTooLarge { .. })));
    }

    #[test]
    fn source_has_one_edge_per_generator() {
        let gamma = build_gamma(&rs("A2")).unwrap();
        let out = gamma.edges(gamma.source());
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|(_, p)| *p == rat(1, 3)));
        for v in 0..gamma.vertex_count() {
            if gamma.is_absorbing(v) {
                assert!(gamma.edges(v).is_empty());
                continue;
            }
            let total = gamma.edges(v).iter().fold(Rational::zero(), |a, (_, p)| a + p);
            assert_eq!(total, Rational::one());
            for (t, _) in gamma.edges(v) {
                assert!(gamma.vertex(*t).0.rank() >= gamma.vertex(v).0.rank());
            }
        }
    }

    #[test]
    fn a2_absorption_values() {
        let gamma = build_gamma(&rs("A2")).unwrap();
        let probs = absorption_probabilities(&gamma).unwrap();
        let mut values: Vec<Rational> = probs.values().cloned().collect();
        values.sort();
        assert_eq!(values, [1, 1, 1, 2, 2, 2].iter().map(|&k| rat(k, 9)).collect::<Vec<_>>());
        let w0 = WeylElement::longest(&rs("A2"));
        assert_eq!(absorption_probability(&gamma, &w0).unwrap(), rat(2, 9));
    }

    #[test]
    fn absorption_equals_stationary_mass() {
        use crate::wchain::{build_chain, stationary_distribution, WeightScheme};
        for tag in ["A2", "B2", "G2", "A3", "B3"] {
            let r = rs(tag);
            let chain = build_chain(&r, WeightScheme::Uniform).unwrap();
            let zeta = stationary_distribution(&chain).unwrap();
            let gamma = build_gamma(&r).unwrap();
            let probs = absorption_probabilities(&gamma).unwrap();
            let w0 = WeylElement::longest(&r);
            assert_eq!(probs.len(), chain.group().len(), "{tag}");
            for (w, p) in &probs {
                let u = w.inverse().multiply(&r, &w0).unwrap();
                assert_eq!(zeta.get(chain.group(), &u).unwrap(), p, "{tag}");
            }
        }
    }

    #[test]
    fn a1_absorption_is_symmetric() {
        let gamma = build_gamma(&rs("A1")).unwrap();
        let probs = absorption_probabilities(&gamma).unwrap();
        assert_eq!(probs.len(), 2);
        assert!(probs.values().all(|p| *p == rat(1, 2)));
    }

    #[test]
    fn a2_region_hitting_values() {
        let gamma = build_gamma(&rs("A2")).unwrap();
        let h = region_hitting_probabilities(&gamma).unwrap();
        assert_eq!(h[0], Rational::one());
        let mut sorted = h.clone();
        sorted.sort();
        let expected: Vec<Rational> = [(1, 9); 3]
            .iter()
            .chain(&[(1, 6); 6])
            .chain(&[(2, 9); 3])
            .chain(&[(1, 3); 3])
            .chain(&[(1, 1)])
            .map(|&(p, q)| rat(p, q))
            .collect();
        assert_eq!(sorted, expected);
        // The regions adjacent to A° across the simple walls get 1/3.
        let regions = gamma.regions();
        for (k, r) in regions.iter().enumerate() {
            if r.rank() == 1 {
                assert_eq!(h[k], rat(1, 3));
            }
        }
    }

    #[test]
    fn walks_never_reenter_a_region() {
        let r = rs("B2");
        for seed in 0..20 {
            let t = simulate(&r, 40, Variant::Free, seed);
            let mut seen: Vec<Vec<Band>> = Vec::new();
            for x in &t.states {
                let b = alcove_bands(&r, x);
                if seen.last() != Some(&b) {
                    assert!(!seen.contains(&b));
                    seen.push(b);
                }
            }
        }
    }

    #[test]
    fn json_export() {
        let gamma = build_gamma(&rs("A1")).unwrap();
        let v = gamma.to_json();
        assert_eq!(v["type"], "A1");
        assert_eq!(v["regions"].as_array().unwrap().len(), 3);
        assert_eq!(v["vertices"][0]["edges"][0]["p"], "1/2");
    }
}
