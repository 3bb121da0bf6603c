//! Labeled forests, their contour encodings, and the random lattice paths
//! used to sample them.
//!
//! A forest with `σ` trees has a floor of `σ + 1` vertices; floor vertex `j`
//! (1-based) is the root of tree `j`, and the last floor vertex carries no
//! tree. Nodes are stored in facial (depth-first) order.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::Chooser;

/// Marker for floor nodes in the parent table.
const FLOOR: usize = usize::MAX;

/// A forest with `σ` trees and `m` edges, nodes in depth-first order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    parent: Vec<usize>,
    floor_index: Vec<usize>,
    depth: Vec<usize>,
    tree_count: usize,
}

/// A forest with integer labels on its nodes, zero on the floor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WellLabeledForest {
    pub forest: Forest,
    pub labels: Vec<i64>,
}

/// The contour function `C` and spatial contour function `L` of a labeled
/// forest, both defined on `0..=2m+σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ContourPair {
    pub contour: Vec<i64>,
    pub spatial: Vec<i64>,
}

/// A path `M(0..=σ)` with steps in `{−1, 0, 1}` and `M(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MotzkinBridge {
    pub values: Vec<i64>,
}

/// A path `S(0..=m)` with steps in `{−1, 1}` and `S(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeBridgePath {
    pub values: Vec<i64>,
}

impl MotzkinBridge {
    /// Number of steps `σ`.
    pub fn lifetime(&self) -> usize {
        self.values.len() - 1
    }

    /// The endpoint `M(σ)`.
    pub fn final_value(&self) -> i64 {
        *self.values.last().expect("bridges are nonempty")
    }

    /// The reversed partner `i ↦ M(σ − i) − M(σ)`.
    pub fn reversed(&self) -> MotzkinBridge {
        let last = self.final_value();
        MotzkinBridge { values: self.values.iter().rev().map(|&v| v - last).collect() }
    }
}

impl ContourPair {
    /// The lifetime `2m + σ`.
    pub fn lifetime(&self) -> usize {
        self.contour.len() - 1
    }

    /// Number of trees `σ = C(0)`.
    pub fn tree_count(&self) -> usize {
        self.contour[0] as usize
    }

    /// Running minimum of the contour.
    pub fn running_min(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.contour.len());
        let mut cur = i64::MAX;
        for &c in &self.contour {
            cur = cur.min(c);
            out.push(cur);
        }
        out
    }
}

impl Forest {
    /// Number of trees `σ`.
    pub fn tree_count(&self) -> usize {
        self.tree_count
    }

    /// Number of nodes, floor included.
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Number of edges `m` (floor steps excluded).
    pub fn edge_count(&self) -> usize {
        self.parent.len() - self.tree_count - 1
    }

    /// The parent of a node, `None` on the floor.
    pub fn parent(&self, v: usize) -> Option<usize> {
        (self.parent[v] != FLOOR).then_some(self.parent[v])
    }

    /// The floor vertex `a(v)` under which a node sits, 1-based.
    pub fn floor_index(&self, v: usize) -> usize {
        self.floor_index[v]
    }

    /// Word length `|v|`, equal to 1 on the floor.
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Neveu words of all nodes, in node order.
    pub fn words(&self) -> Vec<Vec<usize>> {
        let mut child_count = vec![0usize; self.node_count()];
        let mut words: Vec<Vec<usize>> = Vec::with_capacity(self.node_count());
        for v in 0..self.node_count() {
            let word = match self.parent(v) {
                None => vec![self.floor_index[v]],
                Some(p) => {
                    child_count[p] += 1;
                    let mut w = words[p].clone();
                    w.push(child_count[p]);
                    w
                }
            };
            words.push(word);
        }
        words
    }

    /// Builds a forest from its contour function.
    pub fn from_contour(contour: &[i64]) -> Result<Forest> {
        check_contour_shape(contour)?;
        let sigma = contour[0] as usize;
        let mut parent = vec![FLOOR];
        let mut floor_index = vec![1];
        let mut depth = vec![1];
        let mut cur = 0;
        for i in 0..contour.len() - 1 {
            if contour[i + 1] > contour[i] {
                parent.push(cur);
                floor_index.push(floor_index[cur]);
                depth.push(depth[cur] + 1);
                cur = parent.len() - 1;
            } else if parent[cur] == FLOOR {
                parent.push(FLOOR);
                floor_index.push(floor_index[cur] + 1);
                depth.push(1);
                cur = parent.len() - 1;
            } else {
                cur = parent[cur];
            }
        }
        Ok(Forest { parent, floor_index, depth, tree_count: sigma })
    }

    /// The facial sequence `f(0..=2m+σ)` as node ids.
    pub fn facial_sequence(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.edge_count() + self.tree_count + 1);
        // Nodes are in depth-first order, so the walk is a stack replay.
        let mut stack = vec![0usize];
        out.push(0);
        for v in 1..self.node_count() {
            let keep = match self.parent(v) {
                Some(p) => {
                    while *stack.last().expect("ancestors are on the stack") != p {
                        stack.pop();
                        out.push(*stack.last().expect("ancestors are on the stack"));
                    }
                    stack.len()
                }
                None => {
                    while stack.len() > 1 {
                        stack.pop();
                        out.push(*stack.last().expect("floor is on the stack"));
                    }
                    0
                }
            };
            stack.truncate(keep);
            out.push(v);
            stack.push(v);
        }
        out
    }
}

fn check_contour_shape(contour: &[i64]) -> Result<()> {
    if contour.is_empty() {
        return Err(Error::MalformedContour { index: 0, reason: "empty contour" });
    }
    if contour[0] < 1 {
        return Err(Error::MalformedContour { index: 0, reason: "C(0) must be at least 1" });
    }
    let last = contour.len() - 1;
    for i in 0..last {
        if (contour[i + 1] - contour[i]).abs() != 1 {
            return Err(Error::MalformedContour { index: i + 1, reason: "steps must be +1 or -1" });
        }
        if contour[i] <= 0 {
            return Err(Error::MalformedContour { index: i, reason: "contour reaches 0 before the end" });
        }
    }
    if contour[last] != 0 {
        return Err(Error::MalformedContour { index: last, reason: "contour must end at 0" });
    }
    Ok(())
}

/// Number of forests with `σ` trees and `m` edges, `σ/(2m+σ)·C(2m+σ, m)`.
///
/// With `σ = 0` the only forest is the bare sentinel, counted once when
/// `m = 0`.
pub fn count_forests(sigma: usize, m: usize) -> BigUint {
    if sigma == 0 {
        return if m == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let total = 2 * m + sigma;
    binomial(BigUint::from(total), BigUint::from(m)) * BigUint::from(sigma) / BigUint::from(total)
}

/// Number of well-labeled forests, `3^m` times [`count_forests`].
pub fn count_well_labeled_forests(sigma: usize, m: usize) -> BigUint {
    BigUint::from(3u32).pow(m as u32) * count_forests(sigma, m)
}

/// The contour pair of a labeled forest.
pub fn encode_contour(wlf: &WellLabeledForest) -> ContourPair {
    let f = &wlf.forest;
    let sigma = f.tree_count as i64;
    let seq = f.facial_sequence();
    ContourPair {
        contour: seq.iter().map(|&v| f.depth[v] as i64 + sigma - f.floor_index[v] as i64).collect(),
        spatial: seq.iter().map(|&v| wlf.labels[v]).collect(),
    }
}

/// The unique labeled forest with the given contour pair.
pub fn decode_contour(pair: &ContourPair) -> Result<WellLabeledForest> {
    if pair.spatial.len() != pair.contour.len() {
        return Err(Error::MalformedContour { index: pair.spatial.len().min(pair.contour.len()), reason: "length mismatch" });
    }
    let forest = Forest::from_contour(&pair.contour)?;
    let seq = forest.facial_sequence();
    let mut labels = vec![i64::MIN; forest.node_count()];
    for (i, &v) in seq.iter().enumerate() {
        let l = pair.spatial[i];
        if i > 0 && (l - pair.spatial[i - 1]).abs() > 1 {
            return Err(Error::MalformedContour { index: i, reason: "label step larger than 1" });
        }
        if labels[v] == i64::MIN {
            if forest.parent(v).is_none() && l != 0 {
                return Err(Error::MalformedContour { index: i, reason: "floor labels must be 0" });
            }
            labels[v] = l;
        } else if labels[v] != l {
            return Err(Error::MalformedContour { index: i, reason: "label differs between visits of a node" });
        }
    }
    Ok(WellLabeledForest { forest, labels })
}

/// Largest lifetime served by the cached Motzkin kernel.
pub const MOTZKIN_KERNEL_MAX: usize = 64;

/// Table of Motzkin path counts `N_r(d)` for `r ≤ MOTZKIN_KERNEL_MAX`.
struct MotzkinKernel {
    rows: Vec<Vec<BigUint>>,
}

impl MotzkinKernel {
    fn build(max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for r in 1..=max {
            let prev = &rows[r - 1];
            let get = |d: i64| -> BigUint {
                let idx = d + (r as i64 - 1);
                if idx < 0 || idx as usize >= prev.len() {
                    BigUint::zero()
                } else {
                    prev[idx as usize].clone()
                }
            };
            let row = (-(r as i64)..=r as i64).map(|d| get(d - 1) + get(d) + get(d + 1)).collect();
            rows.push(row);
        }
        MotzkinKernel { rows }
    }

    fn get(&self, r: usize, d: i64) -> BigUint {
        if d.unsigned_abs() as usize > r {
            BigUint::zero()
        } else {
            self.rows[r][(d + r as i64) as usize].clone()
        }
    }
}

fn kernel() -> &'static MotzkinKernel {
    static KERNEL: OnceLock<MotzkinKernel> = OnceLock::new();
    KERNEL.get_or_init(|| MotzkinKernel::build(MOTZKIN_KERNEL_MAX))
}

/// Number of Motzkin paths with `σ` steps and displacement `d`, that is
/// `3^σ · P(M_σ = d)`.
pub fn count_motzkin_bridges(sigma: usize, d: i64) -> BigUint {
    if d.unsigned_abs() as usize > sigma {
        return BigUint::zero();
    }
    if sigma <= MOTZKIN_KERNEL_MAX {
        return kernel().get(sigma, d);
    }
    let a = d.unsigned_abs() as usize;
    let mut total = BigUint::zero();
    let mut z = (sigma - a) % 2;
    while z + a <= sigma {
        let ups = (sigma - z + a) / 2;
        total += binomial(BigUint::from(sigma), BigUint::from(z)) * binomial(BigUint::from(sigma - z), BigUint::from(ups));
        z += 2;
    }
    total
}

/// A uniform Motzkin bridge with `σ` steps from 0 to `target`.
///
/// For `σ ≤ MOTZKIN_KERNEL_MAX` each step is chosen with probability
/// proportional to the number of completions, read from the cached kernel.
/// Longer bridges first draw the number of flat steps with probability
/// proportional to the number of bridges having it, then a uniform
/// arrangement of the fixed multiset of steps; both laws are exactly uniform.
pub fn sample_motzkin_bridge<C: Chooser + ?Sized>(sigma: usize, target: i64, chooser: &mut C) -> Result<MotzkinBridge> {
    if target.unsigned_abs() as usize > sigma {
        return Err(Error::UnreachableTarget { sigma, target });
    }
    let mut values = Vec::with_capacity(sigma + 1);
    values.push(0i64);
    if sigma <= MOTZKIN_KERNEL_MAX {
        let k = kernel();
        let mut x = 0i64;
        for s in 0..sigma {
            let r = sigma - s - 1;
            let w = [k.get(r, target - x + 1), k.get(r, target - x), k.get(r, target - x - 1)];
            x += chooser.pick_big(&w) as i64 - 1;
            values.push(x);
        }
    } else {
        let a = target.unsigned_abs() as usize;
        let z0 = (sigma - a) % 2;
        let mut flats = Vec::new();
        let mut weights = Vec::new();
        let mut z = z0;
        let mut w =
            binomial(BigUint::from(sigma), BigUint::from(z)) * binomial(BigUint::from(sigma - z), BigUint::from((sigma - z + a) / 2));
        while z + a <= sigma {
            flats.push(z);
            weights.push(w.clone());
            let (u, d) = ((sigma - z + a) / 2, (sigma - z - a) / 2);
            if d == 0 {
                break;
            }
            w = w * BigUint::from(u) * BigUint::from(d) / BigUint::from((z + 1) * (z + 2));
            z += 2;
        }
        let z = flats[chooser.pick_big(&weights)];
        let mut ups = (sigma - z + a) / 2;
        let mut downs = (sigma - z - a) / 2;
        if target < 0 {
            std::mem::swap(&mut ups, &mut downs);
        }
        let mut rem = [downs as u64, z as u64, ups as u64];
        let mut x = 0i64;
        for _ in 0..sigma {
            let c = chooser.pick_u64(&rem);
            rem[c] -= 1;
            x += c as i64 - 1;
            values.push(x);
        }
    }
    debug_assert_eq!(*values.last().unwrap(), target);
    Ok(MotzkinBridge { values })
}

/// A uniform path of `m` steps `±1` first hitting `−σ` at time `m`.
///
/// A uniform bridge to `−σ` is drawn by sequential conditioning on the
/// remaining numbers of up and down steps, then cyclically shifted at the
/// first time it reaches its minimum plus a uniform `ν ∈ {0, …, σ−1}`.
pub fn bcp_first_passage_bridge<C: Chooser + ?Sized>(m_steps: usize, sigma: usize, chooser: &mut C) -> Result<LatticeBridgePath> {
    if sigma == 0 || m_steps < sigma || (m_steps - sigma) % 2 != 0 {
        return Err(Error::InfeasibleParameters { steps: m_steps, sigma });
    }
    let mut rem = [((m_steps - sigma) / 2) as u64, ((m_steps + sigma) / 2) as u64];
    let mut bridge = Vec::with_capacity(m_steps + 1);
    bridge.push(0i64);
    let mut x = 0i64;
    for _ in 0..m_steps {
        let c = chooser.pick_u64(&rem);
        rem[c] -= 1;
        x += if c == 0 { 1 } else { -1 };
        bridge.push(x);
    }
    let nu = chooser.below(sigma as u64) as i64;
    let min = *bridge.iter().min().expect("nonempty");
    let r = bridge.iter().position(|&b| b == min + nu).expect("levels between the minimum and 0 are visited");
    Ok(LatticeBridgePath { values: cyclic_shift(&bridge, r) })
}

/// The cyclic shift `Θ_k` of a path on `0..=m`.
pub fn cyclic_shift(path: &[i64], k: usize) -> Vec<i64> {
    let m = path.len() - 1;
    (0..=m).map(|x| if x <= m - k { path[k + x] - path[k] } else { path[k + x - m] + path[m] - path[k] }).collect()
}

/// A uniform well-labeled forest with `σ` trees and `m` edges.
pub fn sample_well_labeled_forest<C: Chooser + ?Sized>(sigma: usize, m: usize, chooser: &mut C) -> Result<WellLabeledForest> {
    let s = bcp_first_passage_bridge(2 * m + sigma, sigma, chooser)?;
    let contour: Vec<i64> = s.values.iter().map(|&v| v + sigma as i64).collect();
    let forest = Forest::from_contour(&contour)?;
    let mut labels = vec![0i64; forest.node_count()];
    for v in 0..forest.node_count() {
        if let Some(p) = forest.parent(v) {
            labels[v] = labels[p] + chooser.below(3) as i64 - 1;
        }
    }
    Ok(WellLabeledForest { forest, labels })
}

/// The label process of a forest shifted tree by tree by a bridge:
/// `Λ(t) = L(t) + M(σ − C̲(t))` with `C̲` the running minimum of `C`.
pub fn shifted_label_process(wlf: &WellLabeledForest, bridge: &MotzkinBridge) -> Result<Vec<i64>> {
    let sigma = wlf.forest.tree_count();
    if bridge.lifetime() != sigma {
        return Err(Error::LifetimeMismatch { bridge: bridge.lifetime(), forest: sigma });
    }
    let pair = encode_contour(wlf);
    Ok(shifted_process_of_pair(&pair, bridge))
}

/// [`shifted_label_process`] on a contour pair.
pub fn shifted_process_of_pair(pair: &ContourPair, bridge: &MotzkinBridge) -> Vec<i64> {
    let sigma = pair.tree_count() as i64;
    pair.running_min().iter().zip(&pair.spatial).map(|(&rm, &l)| l + bridge.values[(sigma - rm) as usize]).collect()
}

/// The labels along the ancestral line of the node visited at time `i`:
/// `W(i, j) = L(inf{k ≥ i : C(k) = j})` for `0 ≤ j ≤ C(i)`.
///
/// For heights reached before `i` this is also `L(sup{k ≤ i : C(k) = j})`;
/// the forward form extends it to the floor levels not yet visited.
pub fn discrete_snake_path(pair: &ContourPair, i: usize) -> Result<Vec<i64>> {
    let last = pair.lifetime();
    if i > last {
        return Err(Error::IndexOutOfRange { index: i, max: last });
    }
    let top = pair.contour[i];
    let mut out = vec![0i64; top as usize + 1];
    let mut need = top;
    for k in i..=last {
        let c = pair.contour[k];
        while need >= 0 && c == need {
            out[need as usize] = pair.spatial[k];
            need -= 1;
        }
        if need < 0 {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{exhaustive_pushforward, stream_chooser};
    use num_rational::BigRational;

    /// Plane trees with `k` edges, each as the list of its root's subtrees.
    #[derive(Clone, Debug)]
    struct Tree(Vec<Tree>);

    fn trees(k: usize) -> Vec<Tree> {
        if k == 0 {
            return vec![Tree(vec![])];
        }
        // First subtree has j edges, the rest of the root keeps k - 1 - j.
        let mut out = Vec::new();
        for j in 0..k {
            for first in trees(j) {
                for rest in trees(k - 1 - j) {
                    let mut children = vec![first.clone()];
                    children.extend(rest.0.clone());
                    out.push(Tree(children));
                }
            }
        }
        out
    }

    fn forests(sigma: usize, m: usize) -> Vec<Vec<Tree>> {
        if sigma == 0 {
            return if m == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for j in 0..=m {
            for t in trees(j) {
                for mut rest in forests(sigma - 1, m - j) {
                    rest.insert(0, t.clone());
                    out.push(rest);
                }
            }
        }
        out
    }

    fn contour_of(f: &[Tree]) -> Vec<i64> {
        fn walk(t: &Tree, h: i64, out: &mut Vec<i64>) {
            for c in &t.0 {
                out.push(h + 1);
                walk(c, h + 1, out);
                out.push(h);
            }
        }
        let sigma = f.len() as i64;
        let mut out = vec![sigma];
        for (j, t) in f.iter().enumerate() {
            let h = sigma - j as i64;
            walk(t, h, &mut out);
            out.push(h - 1);
        }
        out
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_forests(1, 0), BigUint::from(1u32));
        assert_eq!(count_forests(2, 1), BigUint::from(2u32));
        assert_eq!(count_forests(1, 2), BigUint::from(2u32));
        assert_eq!(count_well_labeled_forests(1, 2), BigUint::from(18u32));
        let expect = BigUint::from(3u32).pow(20) * binomial(BigUint::from(47u32), BigUint::from(20u32)) * 7u32 / 47u32;
        assert_eq!(count_well_labeled_forests(7, 20), expect);
    }

    #[test]
    fn counts_match_brute_force_and_round_trip() {
        for total in 1..=12 {
            for sigma in 1..=total {
                if (total - sigma) % 2 != 0 {
                    continue;
                }
                let m = (total - sigma) / 2;
                let all = forests(sigma, m);
                assert_eq!(BigUint::from(all.len()), count_forests(sigma, m), "sigma={sigma} m={m}");
                for f in &all {
                    let c = contour_of(f);
                    let forest = Forest::from_contour(&c).unwrap();
                    assert_eq!(forest.edge_count(), m);
                    let wlf = WellLabeledForest { labels: vec![0; forest.node_count()], forest };
                    let pair = encode_contour(&wlf);
                    assert_eq!(pair.contour, c);
                    assert_eq!(decode_contour(&pair).unwrap(), wlf);
                }
            }
        }
    }

    #[test]
    fn neveu_words() {
        let f = Forest::from_contour(&[2, 3, 4, 3, 4, 3, 2, 1, 0]).unwrap();
        let words = f.words();
        assert_eq!(words, vec![vec![1], vec![1, 1], vec![1, 1, 1], vec![1, 1, 2], vec![2], vec![3]]);
        assert_eq!(f.edge_count(), 3);
    }

    #[test]
    fn decode_examples() {
        let one = decode_contour(&ContourPair { contour: vec![1, 0], spatial: vec![0, 0] }).unwrap();
        assert_eq!(one.forest.words(), vec![vec![1], vec![2]]);
        let two = decode_contour(&ContourPair { contour: vec![2, 1, 0], spatial: vec![0, 0, 0] }).unwrap();
        assert_eq!(two.forest.tree_count(), 2);
        assert_eq!(two.forest.edge_count(), 0);
        let bad = decode_contour(&ContourPair { contour: vec![1, 0, 1, 0], spatial: vec![0; 4] });
        assert!(matches!(bad, Err(Error::MalformedContour { index: 1, .. })));
        let bad = decode_contour(&ContourPair { contour: vec![1, 2, 1, 0], spatial: vec![0, 1, 1, 0] });
        assert!(matches!(bad, Err(Error::MalformedContour { index: 2, .. })));
    }

    #[test]
    fn motzkin_counts_agree_with_trinomial_sum() {
        for sigma in 0..=MOTZKIN_KERNEL_MAX {
            for d in -(sigma as i64)..=sigma as i64 {
                let a = d.unsigned_abs() as usize;
                let mut direct = BigUint::zero();
                let mut z = (sigma - a) % 2;
                while z + a <= sigma {
                    direct += binomial(BigUint::from(sigma), BigUint::from(z))
                        * binomial(BigUint::from(sigma - z), BigUint::from((sigma - z + a) / 2));
                    z += 2;
                }
                assert_eq!(count_motzkin_bridges(sigma, d), direct);
            }
        }
    }

    fn all_motzkin(sigma: usize, target: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let total = 3usize.pow(sigma as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = vec![0i64];
            for _ in 0..sigma {
                v.push(v.last().unwrap() + (c % 3) as i64 - 1);
                c /= 3;
            }
            if *v.last().unwrap() == target {
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn motzkin_sampler_is_exactly_uniform() {
        for sigma in 0..=8usize {
            for target in -(sigma as i64)..=sigma as i64 {
                let law = exhaustive_pushforward(|c| sample_motzkin_bridge(sigma, target, c).unwrap().values);
                let all = all_motzkin(sigma, target);
                assert_eq!(law.len(), all.len());
                let p = BigRational::new(1.into(), (all.len() as u64).into());
                for path in all {
                    assert_eq!(law[&path], p);
                }
            }
        }
    }

    #[test]
    fn long_motzkin_sampler_is_exactly_uniform() {
        // Same check on the multiset path, forced by a long lifetime with a
        // target that leaves only a few free steps.
        let sigma = MOTZKIN_KERNEL_MAX + 3;
        for target in [sigma as i64 - 3, -(sigma as i64) + 2, sigma as i64] {
            let law = exhaustive_pushforward(|c| sample_motzkin_bridge(sigma, target, c).unwrap().values);
            let n = count_motzkin_bridges(sigma, target);
            assert_eq!(BigUint::from(law.len()), n);
            let p = BigRational::new(1.into(), n.into());
            assert!(law.values().all(|q| *q == p));
        }
    }

    #[test]
    fn motzkin_examples() {
        let law = exhaustive_pushforward(|c| sample_motzkin_bridge(2, 0, c).unwrap().values);
        assert_eq!(law.len(), 3);
        let mut ch = stream_chooser(1, 0);
        assert_eq!(sample_motzkin_bridge(3, 3, &mut ch).unwrap().values, vec![0, 1, 2, 3]);
        assert!(matches!(sample_motzkin_bridge(1, 2, &mut ch), Err(Error::UnreachableTarget { .. })));
    }

    #[test]
    fn bcp_examples() {
        let law = exhaustive_pushforward(|c| bcp_first_passage_bridge(4, 2, c).unwrap().values);
        assert_eq!(law.len(), 2);
        let mut ch = stream_chooser(1, 0);
        assert_eq!(bcp_first_passage_bridge(2, 2, &mut ch).unwrap().values, vec![0, -1, -2]);
        assert!(matches!(bcp_first_passage_bridge(3, 2, &mut ch), Err(Error::InfeasibleParameters { .. })));
    }

    #[test]
    fn forest_sampler_is_exactly_uniform() {
        for (sigma, m, expected) in [(1, 0, 1u64), (1, 2, 18), (2, 1, 6), (3, 2, 81)] {
            let law = exhaustive_pushforward(|c| sample_well_labeled_forest(sigma, m, c).unwrap());
            assert_eq!(law.len() as u64, expected);
            assert_eq!(BigUint::from(expected), count_well_labeled_forests(sigma, m));
            let p = BigRational::new(1.into(), expected.into());
            assert!(law.values().all(|q| *q == p));
            for f in law.keys() {
                assert_eq!(decode_contour(&encode_contour(f)).unwrap(), *f);
            }
        }
    }

    #[test]
    fn shifted_labels() {
        let trivial = decode_contour(&ContourPair { contour: vec![1, 0], spatial: vec![0, 0] }).unwrap();
        let bridge = MotzkinBridge { values: vec![0, 1] };
        assert_eq!(shifted_label_process(&trivial, &bridge).unwrap(), vec![0, 1]);
        let mut ch = stream_chooser(5, 0);
        let f = sample_well_labeled_forest(4, 30, &mut ch).unwrap();
        let zero = MotzkinBridge { values: vec![0; 5] };
        assert_eq!(shifted_label_process(&f, &zero).unwrap(), encode_contour(&f).spatial);
        let b = sample_motzkin_bridge(4, 2, &mut ch).unwrap();
        let lam = shifted_label_process(&f, &b).unwrap();
        assert!(lam.windows(2).all(|w| (w[1] - w[0]).abs() <= 1));
        assert_eq!(*lam.last().unwrap(), 2);
        let short = MotzkinBridge { values: vec![0, 0] };
        assert!(matches!(shifted_label_process(&f, &short), Err(Error::LifetimeMismatch { .. })));
    }

    #[test]
    fn snake_paths() {
        let mut ch = stream_chooser(9, 0);
        let f = sample_well_labeled_forest(3, 25, &mut ch).unwrap();
        let pair = encode_contour(&f);
        let last = pair.lifetime();
        assert_eq!(discrete_snake_path(&pair, last).unwrap(), vec![pair.spatial[last]]);
        assert_eq!(discrete_snake_path(&pair, 0).unwrap(), vec![0; 4]);
        let seq = f.forest.facial_sequence();
        for i in 0..=last {
            let w = discrete_snake_path(&pair, i).unwrap();
            // Walk up the ancestral line of f(i) and compare heights.
            let mut v = seq[i];
            loop {
                let h = pair.contour[seq.iter().position(|&x| x == v).unwrap()];
                assert_eq!(w[h as usize], f.labels[v]);
                match f.forest.parent(v) {
                    Some(p) => v = p,
                    None => break,
                }
            }
            let floor = pair.running_min()[i] as usize;
            assert!(w[..floor].iter().all(|&x| x == 0));
        }
        assert!(matches!(discrete_snake_path(&pair, last + 1), Err(Error::IndexOutOfRange { .. })));
    }
}
