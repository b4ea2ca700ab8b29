//! Finite Weyl group elements and full group enumeration.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::Rational64;

use crate::error::{CoxError, Result};
use crate::roots::{CorootVec, RootSystem, RootVec, MAX_GROUP_ORDER};

/// An element of the finite Weyl group.
///
/// The canonical form is the matrix whose columns are the images of the simple
/// roots. The coroot action and both inverses are carried alongside so that
/// every action is a single matrix-vector product.
#[derive(Clone)]
pub struct WeylElement {
    rank: usize,
    root: Box<[i64]>,
    coroot: Box<[i64]>,
    inv_root: Box<[i64]>,
    inv_coroot: Box<[i64]>,
    length: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.root.hash(state);
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<Vec<i64>> = (0..self.rank)
            .map(|c| (0..self.rank).map(|r| self.root[r * self.rank + c]).collect())
            .collect();
        f.debug_struct("WeylElement").field("images", &cols).field("length", &self.length).finish()
    }
}

fn identity_matrix(n: usize) -> Box<[i64]> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m.into_boxed_slice()
}

fn matmul(n: usize, a: &[i64], b: &[i64]) -> Box<[i64]> {
    let mut out = vec![0; n * n];
    for r in 0..n {
        for k in 0..n {
            let x = a[r * n + k];
            if x == 0 {
                continue;
            }
            for c in 0..n {
                out[r * n + c] += x * b[k * n + c];
            }
        }
    }
    out.into_boxed_slice()
}

fn matvec(n: usize, m: &[i64], v: &[i64]) -> Vec<i64> {
    (0..n).map(|r| (0..n).map(|c| m[r * n + c] * v[c]).sum()).collect()
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        let n = rs.rank();
        Self {
            rank: n,
            root: identity_matrix(n),
            coroot: identity_matrix(n),
            inv_root: identity_matrix(n),
            inv_coroot: identity_matrix(n),
            length: 0,
        }
    }

    /// The simple reflection `s_i`, `1 ≤ i ≤ rank`.
    pub fn simple(rs: &RootSystem, i: usize) -> Result<Self> {
        let n = rs.rank();
        if i == 0 || i > n {
            return Err(CoxError::BadGenerator { index: i, rank: n });
        }
        let a = rs.cartan();
        let k = i - 1;
        let mut root = identity_matrix(n);
        let mut coroot = identity_matrix(n);
        for c in 0..n {
            root[k * n + c] -= a[k][c];
            coroot[k * n + c] -= a[c][k];
        }
        Ok(Self { rank: n, inv_root: root.clone(), inv_coroot: coroot.clone(), root, coroot, length: 1 })
    }

    /// The reflection `r_α` in a root.
    pub fn reflection(rs: &RootSystem, alpha: &RootVec) -> Self {
        let n = rs.rank();
        let alpha_vee = rs.coroot_of(alpha);
        let mut root = identity_matrix(n);
        let mut coroot = identity_matrix(n);
        for c in 0..n {
            // r_α(α_c) = α_c - ⟨α^∨, α_c⟩ α
            let p = rs.pair_unchecked(&alpha_vee, &RootVec::unit(n, c));
            // r_α(α_c^∨) = α_c^∨ - ⟨α_c^∨, α⟩ α^∨
            let q = rs.pair_unchecked(&CorootVec::unit(n, c), alpha);
            for r in 0..n {
                root[r * n + c] -= p * alpha.0[r];
                coroot[r * n + c] -= q * alpha_vee.0[r];
            }
        }
        let mut out = Self {
            rank: n,
            inv_root: root.clone(),
            inv_coroot: coroot.clone(),
            root,
            coroot,
            length: 0,
        };
        out.length = out.count_inversions(rs);
        out
    }

    /// The longest element `w_0`.
    pub fn longest(rs: &RootSystem) -> Self {
        let mut w = Self::identity(rs);
        loop {
            let next = (1..=rs.rank()).find(|&i| !w.has_left_descent(i));
            match next {
                Some(i) => w = w.left_mul_simple(rs, i),
                None => return w,
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    fn count_inversions(&self, rs: &RootSystem) -> usize {
        rs.positive_roots().iter().filter(|a| !self.act_root_unchecked(a).is_positive()).count()
    }

    fn check_rank(&self, got: usize) -> Result<()> {
        if got != self.rank {
            return Err(CoxError::DimensionMismatch { expected: self.rank, got });
        }
        Ok(())
    }

    /// `self · other`.
    pub fn multiply(&self, rs: &RootSystem, other: &Self) -> Result<Self> {
        self.check_rank(other.rank)?;
        self.check_rank(rs.rank())?;
        Ok(self.mul_unchecked(rs, other))
    }

    pub(crate) fn mul_unchecked(&self, rs: &RootSystem, other: &Self) -> Self {
        let n = self.rank;
        let mut out = Self {
            rank: n,
            root: matmul(n, &self.root, &other.root),
            coroot: matmul(n, &self.coroot, &other.coroot),
            inv_root: matmul(n, &other.inv_root, &self.inv_root),
            inv_coroot: matmul(n, &other.inv_coroot, &self.inv_coroot),
            length: 0,
        };
        out.length = out.count_inversions(rs);
        out
    }

    /// `s_i · self`.
    pub fn left_mul_simple(&self, rs: &RootSystem, i: usize) -> Self {
        let up = !self.has_left_descent(i);
        let s = Self::simple(rs, i).expect("generator index in range");
        let n = self.rank;
        Self {
            rank: n,
            root: matmul(n, &s.root, &self.root),
            coroot: matmul(n, &s.coroot, &self.coroot),
            inv_root: matmul(n, &self.inv_root, &s.root),
            inv_coroot: matmul(n, &self.inv_coroot, &s.coroot),
            length: if up { self.length + 1 } else { self.length - 1 },
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            rank: self.rank,
            root: self.inv_root.clone(),
            coroot: self.inv_coroot.clone(),
            inv_root: self.root.clone(),
            inv_coroot: self.coroot.clone(),
            length: self.length,
        }
    }

    /// Linear action on a root-basis vector.
    pub fn act_root(&self, v: &RootVec) -> Result<RootVec> {
        self.check_rank(v.0.len())?;
        Ok(self.act_root_unchecked(v))
    }

    /// Linear action on a coroot-basis vector.
    pub fn act_coroot(&self, v: &CorootVec) -> Result<CorootVec> {
        self.check_rank(v.0.len())?;
        Ok(self.act_coroot_unchecked(v))
    }

    pub(crate) fn act_root_unchecked(&self, v: &RootVec) -> RootVec {
        RootVec(matvec(self.rank, &self.root, &v.0))
    }

    pub(crate) fn act_coroot_unchecked(&self, v: &CorootVec) -> CorootVec {
        CorootVec(matvec(self.rank, &self.coroot, &v.0))
    }

    /// `self^{-1}` applied to a root, without materializing the inverse.
    pub(crate) fn act_inv_root(&self, v: &RootVec) -> RootVec {
        RootVec(matvec(self.rank, &self.inv_root, &v.0))
    }

    pub(crate) fn act_inv_coroot(&self, v: &CorootVec) -> CorootVec {
        CorootVec(matvec(self.rank, &self.inv_coroot, &v.0))
    }

    /// Action on a rational coroot-basis vector; `inverse` selects `w^{-1}`.
    pub fn act_coroot_rational(&self, v: &[Rational64], inverse: bool) -> Vec<Rational64> {
        let n = self.rank;
        let m = if inverse { &self.inv_coroot } else { &self.coroot };
        (0..n)
            .map(|r| (0..n).map(|c| v[c] * m[r * n + c]).sum())
            .collect()
    }

    /// Whether `ℓ(s_i w) < ℓ(w)`, i.e. `w^{-1} α_i < 0`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let n = self.rank;
        let c = i - 1;
        (0..n).any(|r| self.inv_root[r * n + c] < 0)
    }

    /// Whether `ℓ(w s_i) < ℓ(w)`, i.e. `w α_i < 0`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        let n = self.rank;
        let c = i - 1;
        (0..n).any(|r| self.root[r * n + c] < 0)
    }

    pub fn left_descents(&self) -> Vec<usize> {
        (1..=self.rank).filter(|&i| self.has_left_descent(i)).collect()
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (1..=self.rank).filter(|&i| self.has_right_descent(i)).collect()
    }

    /// Whether `ℓ(r_θ w) > ℓ(w)`, equivalently `w^{-1} θ > 0`.
    pub fn theta_ascent(&self, rs: &RootSystem) -> bool {
        self.act_inv_root(rs.highest_root()).is_positive()
    }

    /// Lexicographically smallest reduced word, read as a product left to right.
    pub fn reduced_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(self.length);
        while let Some(i) = (1..=self.rank).find(|&i| w.has_left_descent(i)) {
            word.push(i);
            w = w.left_mul_simple(rs, i);
        }
        word
    }

    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Result<Self> {
        let mut w = Self::identity(rs);
        for &i in word.iter().rev() {
            if i == 0 || i > rs.rank() {
                return Err(CoxError::BadGenerator { index: i, rank: rs.rank() });
            }
            w = w.left_mul_simple(rs, i);
        }
        Ok(w)
    }
}

/// Formats a word as space-separated generator indices.
pub fn word_string(word: &[usize]) -> String {
    word.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

/// The whole finite Weyl group with multiplication tables.
///
/// Elements are ordered by length, then by lexicographically smallest reduced
/// word; index 0 is the identity.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rs: RootSystem,
    elements: Vec<WeylElement>,
    words: Vec<Vec<usize>>,
    index: HashMap<WeylElement, usize>,
    /// `left[i-1][w]` is the index of `s_i w`.
    left: Vec<Vec<usize>>,
    reflect_theta: Vec<usize>,
    inverse: Vec<usize>,
    theta_ascent: Vec<bool>,
    longest: usize,
}

impl WeylGroup {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let order = rs.group_order();
        if order > MAX_GROUP_ORDER {
            return Err(CoxError::RankTooLarge { tag: rs.cartan_type().to_string(), order, cap: MAX_GROUP_ORDER });
        }
        let n = rs.rank();
        let id = WeylElement::identity(rs);
        let mut found: HashMap<WeylElement, ()> = HashMap::with_capacity(order as usize);
        let mut by_length: Vec<WeylElement> = Vec::with_capacity(order as usize);
        let mut queue = VecDeque::from([id.clone()]);
        found.insert(id, ());
        while let Some(w) = queue.pop_front() {
            for i in 1..=n {
                if w.has_left_descent(i) {
                    continue;
                }
                let v = w.left_mul_simple(rs, i);
                if !found.contains_key(&v) {
                    found.insert(v.clone(), ());
                    queue.push_back(v);
                }
            }
            by_length.push(w);
        }
        assert_eq!(by_length.len() as u64, order, "enumeration of {} disagrees with |W|", rs.cartan_type());
        // Lex-min reduced words by increasing length.
        let tmp_index: HashMap<WeylElement, usize> =
            by_length.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); by_length.len()];
        for k in 1..by_length.len() {
            let w = &by_length[k];
            let i = (1..=n).find(|&i| w.has_left_descent(i)).unwrap();
            let parent = tmp_index[&w.left_mul_simple(rs, i)];
            let mut word = vec![i];
            word.extend_from_slice(&words[parent]);
            words[k] = word;
        }
        let mut order_idx: Vec<usize> = (0..by_length.len()).collect();
        order_idx.sort_by(|&a, &b| {
            by_length[a].length.cmp(&by_length[b].length).then_with(|| words[a].cmp(&words[b]))
        });
        let elements: Vec<WeylElement> = order_idx.iter().map(|&k| by_length[k].clone()).collect();
        let words: Vec<Vec<usize>> = order_idx.iter().map(|&k| words[k].clone()).collect();
        let index: HashMap<WeylElement, usize> =
            elements.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let left: Vec<Vec<usize>> = (1..=n)
            .map(|i| elements.iter().map(|w| index[&w.left_mul_simple(rs, i)]).collect())
            .collect();
        let r_theta = WeylElement::reflection(rs, rs.highest_root());
        let reflect_theta = elements.iter().map(|w| index[&r_theta.mul_unchecked(rs, w)]).collect();
        let inverse = elements.iter().map(|w| index[&w.inverse()]).collect();
        let theta_ascent = elements.iter().map(|w| w.theta_ascent(rs)).collect();
        let longest = elements.len() - 1;
        Ok(Self {
            rs: rs.clone(),
            elements,
            words,
            index,
            left,
            reflect_theta,
            inverse,
            theta_ascent,
            longest,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &WeylElement {
        &self.elements[k]
    }

    pub fn word(&self, k: usize) -> &[usize] {
        &self.words[k]
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn index_of_word(&self, word: &[usize]) -> Result<usize> {
        let w = WeylElement::from_word(&self.rs, word)?;
        Ok(self.index[&w])
    }

    pub fn left_mul(&self, i: usize, k: usize) -> usize {
        self.left[i - 1][k]
    }

    pub fn reflect_theta(&self, k: usize) -> usize {
        self.reflect_theta[k]
    }

    pub fn inverse(&self, k: usize) -> usize {
        self.inverse[k]
    }

    pub fn theta_ascent(&self, k: usize) -> bool {
        self.theta_ascent[k]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest(&self) -> usize {
        self.longest
    }

    pub fn length(&self, k: usize) -> usize {
        self.elements[k].length
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        // a·b via the reduced word of a applied to b from the right end.
        self.words[a].iter().rev().fold(b, |acc, &i| self.left_mul(i, acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::CartanType;

    fn rs(tag: &str) -> RootSystem {
        RootSystem::new(tag.parse::<CartanType>().unwrap()).unwrap()
    }

    /// Independent BFS on words: element identity via the root action on all
    /// positive roots.
    fn bfs_order(r: &RootSystem) -> (usize, usize) {
        let key = |w: &[usize]| -> Vec<RootVec> {
            r.positive_roots()
                .iter()
                .map(|a| w.iter().rev().fold(a.clone(), |v, &i| r.reflect_root(i, &v)))
                .collect()
        };
        let mut seen: HashMap<Vec<RootVec>, usize> = HashMap::new();
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        seen.insert(key(&[]), 0);
        let mut depth = 0;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for i in 1..=r.rank() {
                    let mut v = vec![i];
                    v.extend_from_slice(w);
                    let k = key(&v);
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(k) {
                        e.insert(depth + 1);
                        next.push(v);
                    }
                }
            }
            if !next.is_empty() {
                depth += 1;
            }
            frontier = next;
        }
        (seen.len(), depth)
    }

    #[test]
    fn small_group_orders() {
        let a2 = WeylGroup::new(&rs("A2")).unwrap();
        let lengths: Vec<usize> = (0..a2.len()).map(|k| a2.length(k)).collect();
        assert_eq!(lengths, vec![0, 1, 1, 2, 2, 3]);
        let b2 = WeylGroup::new(&rs("B2")).unwrap();
        assert_eq!((b2.len(), b2.length(b2.longest())), bfs_order(&rs("B2")));
        assert_eq!(b2.len(), 8);
        assert_eq!(b2.length(b2.longest()), 4);
        assert_eq!(WeylGroup::new(&rs("A3")).unwrap().len(), 24);
        assert_eq!(bfs_order(&rs("G2")), (12, 6));
    }

    #[test]
    fn enumeration_matches_group_order() {
        for tag in ["A4", "B3", "C3", "D4", "G2", "F4"] {
            let r = rs(tag);
            let g = WeylGroup::new(&r).unwrap();
            assert_eq!(g.len() as u64, r.group_order(), "{tag}");
            assert_eq!(g.length(g.longest()), r.positive_roots().len(), "{tag}");
        }
    }

    #[test]
    fn a2_words_and_descents() {
        let r = rs("A2");
        let g = WeylGroup::new(&r).unwrap();
        let words: Vec<String> = (0..g.len()).map(|k| word_string(g.word(k))).collect();
        assert_eq!(words, vec!["", "1", "2", "1 2", "2 1", "1 2 1"]);
        assert!(WeylElement::identity(&r).left_descents().is_empty());
        let w0 = WeylElement::longest(&r);
        assert_eq!(w0.length(), 3);
        assert_eq!(w0.reduced_word(&r), vec![1, 2, 1]);
        let s1 = WeylElement::simple(&r, 1).unwrap();
        assert_eq!(s1.act_coroot(r.highest_coroot()).unwrap(), r.simple_coroot(2));
    }

    #[test]
    fn theta_ascent_examples() {
        let r = rs("A2");
        let g = WeylGroup::new(&r).unwrap();
        assert!(g.theta_ascent(g.identity()));
        assert!(!g.theta_ascent(g.longest()));
        let s1 = g.index_of_word(&[1]).unwrap();
        assert!(g.theta_ascent(s1));
        assert_eq!(g.reflect_theta(s1), g.index_of_word(&[1, 2]).unwrap());
        assert_eq!(g.reflect_theta(g.identity()), g.longest());
    }

    #[test]
    fn longest_element_complements_lengths() {
        for tag in ["A3", "B3", "G2", "D4"] {
            let r = rs(tag);
            let g = WeylGroup::new(&r).unwrap();
            let w0 = g.longest();
            for k in 0..g.len() {
                assert_eq!(g.length(g.multiply(w0, k)), g.length(w0) - g.length(k));
                // r_θ is an involution and flips the θ-ascent predicate.
                let t = g.reflect_theta(k);
                assert_eq!(g.reflect_theta(t), k);
                assert!(g.theta_ascent(k) ^ g.theta_ascent(t));
                assert_eq!(g.length(t) > g.length(k), g.theta_ascent(k));
            }
        }
    }

    #[test]
    fn group_axioms_and_descents() {
        let r = rs("B3");
        let g = WeylGroup::new(&r).unwrap();
        for k in (0..g.len()).step_by(5) {
            let w = g.element(k);
            let inv = w.inverse();
            assert!(w.multiply(&r, &inv).unwrap().is_identity());
            assert_eq!(g.inverse(k), g.index_of(&inv).unwrap());
            for i in 1..=r.rank() {
                let up = g.length(g.left_mul(i, k)) > g.length(k);
                assert_eq!(!up, w.has_left_descent(i));
                let ws = w.multiply(&r, &WeylElement::simple(&r, i).unwrap()).unwrap();
                assert_eq!(ws.length() < w.length(), w.has_right_descent(i));
            }
            assert_eq!(WeylElement::from_word(&r, g.word(k)).unwrap(), *w);
            assert_eq!(w.reduced_word(&r), g.word(k));
        }
    }

    #[test]
    fn rejects_cross_rank_products() {
        let a2 = rs("A2");
        let a3 = rs("A3");
        let u = WeylElement::identity(&a2);
        let v = WeylElement::identity(&a3);
        assert_eq!(u.multiply(&a2, &v), Err(CoxError::DimensionMismatch { expected: 2, got: 3 }));
        assert!(u.act_root(&RootVec(vec![1, 0, 0])).is_err());
    }

    #[test]
    #[ignore = "enumerates all 51840 elements of E6"]
    fn e6_enumerates() {
        let g = WeylGroup::new(&rs("E6")).unwrap();
        assert_eq!(g.len(), 51_840);
    }
}
