//! Schemes of g-trees and the decomposition of a well-labeled g-tree into
//! its scheme, Motzkin bridges, labeled forests and a root offset.
//!
//! A scheme is itself stored as a g-tree (a pairing of polygon sides). Its
//! half-edges correspond to the maximal chains of the pruned g-tree, numbered
//! in facial order starting from the chain that carries the root.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{decode_contour, encode_contour, ContourPair, MotzkinBridge, WellLabeledForest};
use crate::gtree::{from_pairing, validate_labels, GTree, WellLabeledGTree};

/// A rooted one-face map with every vertex of degree at least 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeRecord", into = "SchemeRecord")]
pub struct Scheme {
    tree: GTree,
    dominant: bool,
}

/// The JSON form of a scheme.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeRecord {
    pub genus: usize,
    pub pairing: Vec<usize>,
}

impl TryFrom<SchemeRecord> for Scheme {
    type Error = Error;
    fn try_from(r: SchemeRecord) -> Result<Self> {
        let s = Scheme::from_pairing(r.pairing)?;
        if s.genus() != r.genus {
            return Err(Error::InvalidGenus(r.genus));
        }
        Ok(s)
    }
}

impl From<Scheme> for SchemeRecord {
    fn from(s: Scheme) -> Self {
        SchemeRecord { genus: s.genus(), pairing: s.tree.pairing().to_vec() }
    }
}

impl PartialOrd for Scheme {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheme {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |s: &Scheme| (s.n_edges(), s.tree.pairing().to_vec());
        key(self).cmp(&key(other))
    }
}

impl Scheme {
    /// Builds a scheme from a pairing of polygon sides, checking that every
    /// vertex has degree at least 3.
    pub fn from_pairing(pairing: Vec<usize>) -> Result<Scheme> {
        let n = pairing.len() / 2;
        let tree = from_pairing(n, pairing)?;
        Scheme::from_gtree(tree)
    }

    /// Wraps a g-tree that has no vertex of degree 1 or 2.
    pub fn from_gtree(tree: GTree) -> Result<Scheme> {
        let degrees = tree.degrees();
        if degrees.iter().any(|&d| d < 3) || tree.genus() == 0 {
            return Err(Error::NoSchemeExists);
        }
        let dominant = degrees.iter().all(|&d| d == 3);
        Ok(Scheme { tree, dominant })
    }

    /// The underlying one-face map.
    pub fn tree(&self) -> &GTree {
        &self.tree
    }

    /// The pairing of half-edges.
    pub fn pairing(&self) -> &[usize] {
        self.tree.pairing()
    }

    /// Genus of the scheme.
    pub fn genus(&self) -> usize {
        self.tree.genus()
    }

    /// Number of edges.
    pub fn n_edges(&self) -> usize {
        self.tree.n_edges()
    }

    /// Number of half-edges.
    pub fn n_half_edges(&self) -> usize {
        2 * self.tree.n_edges()
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.tree.vertex_count()
    }

    /// Whether every vertex has degree exactly 3.
    pub fn is_dominant(&self) -> bool {
        self.dominant
    }

    /// The reverse half-edge `ē`.
    pub fn reverse(&self, e: usize) -> usize {
        self.tree.pairing()[e]
    }

    /// The origin vertex `e⁻`.
    pub fn origin(&self, e: usize) -> usize {
        self.tree.map().vertex_of(e)
    }

    /// The target vertex `e⁺`.
    pub fn target(&self, e: usize) -> usize {
        self.tree.map().vertex_of(self.reverse(e))
    }

    /// Whether `e` belongs to the orientation `Ě`: the half-edge of its edge
    /// that comes first in facial order from the root.
    pub fn is_oriented(&self, e: usize) -> bool {
        e < self.reverse(e)
    }

    /// The orientation `Ě`, increasing.
    pub fn orientation(&self) -> Vec<usize> {
        (0..self.n_half_edges()).filter(|&e| self.is_oriented(e)).collect()
    }

    /// The vertex at the origin of the root, whose label is fixed to 0.
    pub fn root_vertex(&self) -> usize {
        self.origin(0)
    }
}

/// How a g-tree splits into chains, recorded on facial positions.
#[derive(Debug, Clone)]
pub(crate) struct ChainSplit {
    pub scheme: Scheme,
    /// Core half-edges of each scheme half-edge, in order along the chain.
    pub chains: Vec<Vec<usize>>,
    /// First facial position of the segment of each scheme half-edge.
    pub seg_start: Vec<usize>,
    /// Length `2m + σ` of each segment.
    pub seg_len: Vec<usize>,
    /// For each g-tree vertex, the scheme vertex it becomes, if it is a node.
    pub node_map: Vec<Option<usize>>,
}

/// Marks the pruned half-edges, returning core degrees.
fn prune(tree: &GTree) -> (Vec<bool>, Vec<usize>) {
    let map = tree.map();
    let len = map.n_half_edges();
    let nv = map.vertex_count();
    let mut deg = tree.degrees();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for h in 0..len {
        at[map.vertex_of(h)].push(h);
    }
    let mut removed = vec![false; len];
    let mut queue: VecDeque<usize> = (0..nv).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = queue.pop_front() {
        if deg[v] != 1 {
            continue;
        }
        let h = *at[v].iter().find(|&&h| !removed[h]).expect("degree-1 vertex keeps one half-edge");
        removed[h] = true;
        removed[map.alpha(h)] = true;
        deg[v] = 0;
        let w = map.head(h);
        deg[w] -= 1;
        if deg[w] == 1 {
            queue.push_back(w);
        }
    }
    (removed, deg)
}

pub(crate) fn split_chains(tree: &GTree) -> Result<ChainSplit> {
    let map = tree.map();
    let len = map.n_half_edges();
    let (removed, deg) = prune(tree);
    let core: Vec<usize> = (0..len).filter(|&h| !removed[h]).collect();
    let is_start = |h: usize| deg[map.vertex_of(h)] >= 3;
    if core.is_empty() || !core.iter().any(|&h| is_start(h)) {
        return Err(Error::NoSchemeExists);
    }
    // The chain holding the first core half-edge is the root chain.
    let k = core.len();
    let mut first = 0;
    while !is_start(core[first]) {
        first = (first + k - 1) % k;
    }
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        let h = core[(first + i) % k];
        if is_start(h) {
            chains.push(Vec::new());
        }
        chains.last_mut().expect("walk starts at a chain start").push(h);
    }
    let nc = chains.len();
    let mut chain_of = vec![usize::MAX; len];
    for (j, c) in chains.iter().enumerate() {
        chain_of[c[0]] = j;
    }
    let pairing: Vec<usize> = chains.iter().map(|c| chain_of[map.alpha(*c.last().expect("chains are nonempty"))]).collect();
    let scheme = Scheme::from_pairing(pairing)?;
    let mut seg_start = Vec::with_capacity(nc);
    let mut seg_len = Vec::with_capacity(nc);
    for j in 0..nc {
        let prev_end = *chains[(j + nc - 1) % nc].last().expect("chains are nonempty");
        let start = (prev_end + 1) % len;
        let end = *chains[j].last().expect("chains are nonempty");
        seg_start.push(start);
        seg_len.push((end + len - start) % len + 1);
    }
    let mut node_map = vec![None; map.vertex_count()];
    for (j, c) in chains.iter().enumerate() {
        node_map[map.vertex_of(c[0])] = Some(scheme.origin(j));
    }
    Ok(ChainSplit { scheme, chains, seg_start, seg_len, node_map })
}

/// The scheme of a g-tree and, for each g-tree vertex, the scheme vertex it
/// becomes when it is a node.
///
/// The scheme root is the chain that contains the first core half-edge at or
/// after the g-tree root in facial order.
pub fn extract_scheme(tree: &GTree) -> Result<(Scheme, Vec<Option<usize>>)> {
    let split = split_chains(tree)?;
    Ok((split.scheme, split.node_map))
}

/// Every rooted scheme of the given genus, ordered by edge count then by
/// pairing.
pub fn enumerate_schemes(genus: usize, dominant_only: bool) -> Result<Vec<Scheme>> {
    if genus == 0 {
        return Err(Error::InvalidGenus(0));
    }
    let mut out = Vec::new();
    let max_edges = 6 * genus - 3;
    let min_edges = if dominant_only { max_edges } else { 2 * genus };
    for e in min_edges..=max_edges {
        for p in scheme_pairings(genus, e, dominant_only) {
            out.push(Scheme::from_pairing(p).expect("filtered pairings are schemes"));
        }
    }
    Ok(out)
}

/// Pairings of `2e` sides whose gluing has the vertex count of genus `g`
/// and all degrees at least 3 (exactly 3 when `cubic`), lexicographic.
fn scheme_pairings(genus: usize, e: usize, cubic: bool) -> Vec<Vec<usize>> {
    let len = 2 * e;
    if e + 1 < 2 * genus + 1 {
        return Vec::new();
    }
    let vertices = e + 1 - 2 * genus;
    if 3 * vertices > len || (cubic && 3 * vertices != len) {
        return Vec::new();
    }
    let check = |p: &[usize]| -> bool {
        let mut seen = vec![false; len];
        let mut count = 0;
        for s in 0..len {
            if seen[s] {
                continue;
            }
            count += 1;
            if count > vertices {
                return false;
            }
            let mut d = 0;
            let mut h = s;
            while !seen[h] {
                seen[h] = true;
                d += 1;
                h = p[(h + len - 1) % len];
            }
            if d < 3 || (cubic && d != 3) {
                return false;
            }
        }
        count == vertices
    };
    fn rec(p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, check: &dyn Fn(&[usize]) -> bool) {
        let Some(i) = p.iter().position(|&x| x == usize::MAX) else {
            if check(p) {
                out.push(p.clone());
            }
            return;
        };
        for j in i + 1..p.len() {
            if p[j] == usize::MAX {
                p[i] = j;
                p[j] = i;
                rec(p, out, check);
                p[i] = usize::MAX;
                p[j] = usize::MAX;
            }
        }
    }
    (1..len)
        .into_par_iter()
        .map(|j| {
            let mut p = vec![usize::MAX; len];
            p[0] = j;
            p[j] = 0;
            let mut out = Vec::new();
            rec(&mut p, &mut out, &check);
            out
        })
        .flatten()
        .collect()
}

/// A scheme with, on each of its half-edges, a Motzkin bridge and a labeled
/// forest, together with the root offset `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "QuadrupleRecord", try_from = "QuadrupleRecord")]
pub struct DecompositionQuadruple {
    pub scheme: Scheme,
    pub bridges: Vec<MotzkinBridge>,
    pub forests: Vec<WellLabeledForest>,
    pub root_offset: usize,
}

/// One half-edge entry in the JSON form of a quadruple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfEdgeRecord {
    pub half_edge: usize,
    pub sigma: usize,
    pub m: usize,
    pub l: i64,
    pub bridge: Vec<i64>,
    pub contour: Vec<i64>,
    pub spatial: Vec<i64>,
}

/// The JSON form of a quadruple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadrupleRecord {
    pub scheme: SchemeRecord,
    pub root_offset: usize,
    pub vertex_labels: Vec<i64>,
    pub half_edges: Vec<HalfEdgeRecord>,
}

impl From<DecompositionQuadruple> for QuadrupleRecord {
    fn from(q: DecompositionQuadruple) -> Self {
        let half_edges = (0..q.scheme.n_half_edges())
            .map(|e| {
                let pair = encode_contour(&q.forests[e]);
                HalfEdgeRecord {
                    half_edge: e,
                    sigma: q.sigma(e),
                    m: q.m(e),
                    l: q.l_edge(e),
                    bridge: q.bridges[e].values.clone(),
                    contour: pair.contour,
                    spatial: pair.spatial,
                }
            })
            .collect();
        QuadrupleRecord {
            vertex_labels: q.vertex_labels().unwrap_or_default(),
            scheme: q.scheme.into(),
            root_offset: q.root_offset,
            half_edges,
        }
    }
}

impl TryFrom<QuadrupleRecord> for DecompositionQuadruple {
    type Error = Error;
    fn try_from(r: QuadrupleRecord) -> Result<Self> {
        let scheme = Scheme::try_from(r.scheme)?;
        let mut entries = r.half_edges;
        entries.sort_by_key(|h| h.half_edge);
        if entries.len() != scheme.n_half_edges() || entries.iter().enumerate().any(|(i, h)| h.half_edge != i) {
            return Err(Error::IncompatibleQuadruple("one entry per scheme half-edge is required".into()));
        }
        let mut bridges = Vec::new();
        let mut forests = Vec::new();
        for h in entries {
            bridges.push(MotzkinBridge { values: h.bridge });
            forests.push(decode_contour(&ContourPair { contour: h.contour, spatial: h.spatial })?);
        }
        Ok(DecompositionQuadruple { scheme, bridges, forests, root_offset: r.root_offset })
    }
}

/// A failed compatibility condition of a quadruple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The arrays do not have one entry per scheme half-edge.
    Shape,
    /// A half-edge and its reverse carry forests of different lengths.
    LengthMismatch { half_edge: usize },
    /// A bridge is not a Motzkin path from 0 of the forest's length.
    BadBridge { half_edge: usize },
    /// A bridge is not the reversal of its partner.
    BridgeReversal { half_edge: usize },
    /// The displacements do not come from a vertex labeling.
    VertexLabels { half_edge: usize },
    /// The root offset is out of range.
    RootOffset { u: usize, bound: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape => write!(f, "expected one bridge and one forest per scheme half-edge"),
            Violation::LengthMismatch { half_edge } => {
                write!(f, "half-edge {half_edge}: forest length differs from that of the reverse half-edge")
            }
            Violation::BadBridge { half_edge } => {
                write!(f, "half-edge {half_edge}: bridge is not a Motzkin path from 0 matching the forest length")
            }
            Violation::BridgeReversal { half_edge } => {
                write!(f, "half-edge {half_edge}: bridge is not the reversal of the reverse half-edge's bridge")
            }
            Violation::VertexLabels { half_edge } => {
                write!(f, "half-edge {half_edge}: displacement is not a difference of vertex labels")
            }
            Violation::RootOffset { u, bound } => write!(f, "root offset {u} not below {bound}"),
        }
    }
}

impl DecompositionQuadruple {
    /// The forest length `σ^e`.
    pub fn sigma(&self, e: usize) -> usize {
        self.forests[e].forest.tree_count()
    }

    /// The forest size `m^e`.
    pub fn m(&self, e: usize) -> usize {
        self.forests[e].forest.edge_count()
    }

    /// The bridge displacement `l^e`.
    pub fn l_edge(&self, e: usize) -> i64 {
        self.bridges[e].final_value()
    }

    /// The number of edges `Σ (m^e + σ^e/2)` of the encoded g-tree.
    pub fn n_edges(&self) -> usize {
        (0..self.scheme.n_half_edges()).map(|e| 2 * self.m(e) + self.sigma(e)).sum::<usize>() / 2
    }

    /// The vertex labels `l^v` with the root origin at 0, if the
    /// displacements come from a vertex labeling.
    pub fn vertex_labels(&self) -> Option<Vec<i64>> {
        let s = &self.scheme;
        if self.bridges.len() != s.n_half_edges() {
            return None;
        }
        let lv = self.propagate_labels();
        (0..s.n_half_edges()).all(|e| lv[s.target(e)] - lv[s.origin(e)] == self.l_edge(e)).then_some(lv)
    }

    /// Labels obtained by following displacements from the root origin.
    fn propagate_labels(&self) -> Vec<i64> {
        let s = &self.scheme;
        let mut lv = vec![None; s.vertex_count()];
        lv[s.root_vertex()] = Some(0i64);
        let mut changed = true;
        while changed {
            changed = false;
            for e in 0..s.n_half_edges() {
                if let (Some(a), None) = (lv[s.origin(e)], lv[s.target(e)]) {
                    lv[s.target(e)] = Some(a + self.l_edge(e));
                    changed = true;
                }
            }
        }
        lv.into_iter().map(|x| x.expect("schemes are connected")).collect()
    }

    /// All failed compatibility conditions; empty when compatible.
    pub fn violations(&self) -> Vec<Violation> {
        let s = &self.scheme;
        let k = s.n_half_edges();
        if self.bridges.len() != k || self.forests.len() != k {
            return vec![Violation::Shape];
        }
        let mut out = Vec::new();
        for e in 0..k {
            let b = &self.bridges[e].values;
            if b.len() != self.sigma(e) + 1 || b[0] != 0 || b.windows(2).any(|w| (w[1] - w[0]).abs() > 1) {
                out.push(Violation::BadBridge { half_edge: e });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for e in 0..k {
            let r = s.reverse(e);
            if self.sigma(e) != self.sigma(r) {
                out.push(Violation::LengthMismatch { half_edge: e });
            } else if self.bridges[r] != self.bridges[e].reversed() {
                out.push(Violation::BridgeReversal { half_edge: e });
            }
        }
        if out.is_empty() {
            let lv = self.propagate_labels();
            for e in 0..k {
                if lv[s.target(e)] - lv[s.origin(e)] != self.l_edge(e) {
                    out.push(Violation::VertexLabels { half_edge: e });
                }
            }
        }
        let bound = 2 * self.m(0) + self.sigma(0);
        if self.root_offset >= bound {
            out.push(Violation::RootOffset { u: self.root_offset, bound });
        }
        out
    }
}

/// Checks every compatibility condition of a quadruple.
pub fn validate_compatible(quad: &DecompositionQuadruple) -> (bool, Vec<Violation>) {
    let v = quad.violations();
    (v.is_empty(), v)
}

/// Splits a well-labeled g-tree into its compatible quadruple.
pub fn decompose(wlt: &WellLabeledGTree) -> Result<DecompositionQuadruple> {
    let tree = wlt.tree();
    let split = split_chains(tree)?;
    let len = 2 * tree.n_edges();
    let map = tree.map();
    let mut is_core = vec![false; len];
    for c in &split.chains {
        for &h in c {
            is_core[h] = true;
        }
    }
    let mut bridges = Vec::with_capacity(split.chains.len());
    let mut forests = Vec::with_capacity(split.chains.len());
    for (j, chain) in split.chains.iter().enumerate() {
        let start = split.seg_start[j];
        let seg = split.seg_len[j];
        let sigma = chain.len() as i64;
        let offset = |h: usize| (h + len - start) % len;
        let mut contour = Vec::with_capacity(seg + 1);
        let mut spatial = Vec::with_capacity(seg + 1);
        let mut floor_labels = Vec::with_capacity(chain.len() + 1);
        let mut c = sigma;
        let mut run_min = sigma;
        let first_label = wlt.label_at(start);
        floor_labels.push(first_label);
        contour.push(c);
        spatial.push(0);
        for i in 0..seg {
            let h = (start + i) % len;
            if is_core[h] || offset(map.alpha(h)) < i {
                c -= 1;
            } else {
                c += 1;
            }
            let label = wlt.label_at(h + 1);
            if c < run_min {
                run_min = c;
                floor_labels.push(label);
            }
            contour.push(c);
            spatial.push(label - floor_labels[(sigma - run_min) as usize]);
        }
        debug_assert_eq!(c, 0);
        bridges.push(MotzkinBridge { values: floor_labels.iter().map(|&l| l - first_label).collect() });
        forests.push(decode_contour(&ContourPair { contour, spatial })?);
    }
    let root_offset = (len - split.seg_start[0]) % len;
    Ok(DecompositionQuadruple { scheme: split.scheme, bridges, forests, root_offset })
}

/// Rebuilds the well-labeled g-tree encoded by a compatible quadruple.
pub fn recompose(quad: &DecompositionQuadruple) -> Result<WellLabeledGTree> {
    let violations = quad.violations();
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::IncompatibleQuadruple(text.join("; ")));
    }
    let s = &quad.scheme;
    let k = s.n_half_edges();
    let lv = quad.vertex_labels().expect("compatible quadruples have vertex labels");
    let pairs: Vec<ContourPair> = quad.forests.iter().map(encode_contour).collect();
    let mut seg_start = Vec::with_capacity(k);
    let mut total = 0;
    for p in &pairs {
        seg_start.push(total);
        total += p.lifetime();
    }
    let len = total;
    let u = quad.root_offset;
    let idx = |t: usize| (t + len - u) % len;
    let mut pairing = vec![usize::MAX; len];
    let mut corner_label = vec![0i64; len];
    // Global positions of the floor steps of every half-edge.
    let mut floor_pos: Vec<Vec<usize>> = Vec::with_capacity(k);
    for (e, p) in pairs.iter().enumerate() {
        let sigma = p.tree_count() as i64;
        let base = lv[s.origin(e)];
        let bridge = &quad.bridges[e].values;
        let mut stack = Vec::new();
        let mut floors = Vec::with_capacity(sigma as usize);
        let mut run_min = sigma;
        for i in 0..p.lifetime() {
            let t = seg_start[e] + i;
            corner_label[idx(t)] = base + bridge[(sigma - run_min) as usize] + p.spatial[i];
            let (a, b) = (p.contour[i], p.contour[i + 1]);
            if b > a {
                stack.push(t);
            } else if b < run_min {
                run_min = b;
                floors.push(t);
            } else {
                let up = stack.pop().expect("contour steps are balanced");
                pairing[idx(up)] = idx(t);
                pairing[idx(t)] = idx(up);
            }
        }
        floor_pos.push(floors);
    }
    for e in 0..k {
        let r = s.reverse(e);
        let sigma = floor_pos[e].len();
        for (i, &t) in floor_pos[e].iter().enumerate() {
            pairing[idx(t)] = idx(floor_pos[r][sigma - 1 - i]);
        }
    }
    let tree = from_pairing(len / 2, pairing)?;
    let map = tree.map();
    let mut labels = vec![0i64; tree.vertex_count()];
    for h in 0..len {
        labels[map.vertex_of(h)] = corner_label[h];
    }
    let root_label = labels[map.vertex_of(0)];
    for l in &mut labels {
        *l -= root_label;
    }
    validate_labels(tree, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gtree::{enumerate_well_labeled_gtrees, for_each_pairing};
    use crate::map_core::build_map;
    use std::collections::BTreeSet;

    fn bouquet() -> GTree {
        from_pairing(2, vec![2, 3, 0, 1]).unwrap()
    }

    #[test]
    fn bouquet_is_its_own_scheme() {
        let (s, nodes) = extract_scheme(&bouquet()).unwrap();
        assert_eq!(s.pairing(), &[2, 3, 0, 1]);
        assert_eq!(nodes, vec![Some(0)]);
        let wlt = validate_labels(bouquet(), vec![0]).unwrap();
        let q = decompose(&wlt).unwrap();
        for e in 0..4 {
            assert_eq!(q.sigma(e), 1);
            assert_eq!(q.m(e), 0);
            assert_eq!(q.bridges[e].values, vec![0, 0]);
        }
        assert_eq!(q.root_offset, 0);
        assert_eq!(recompose(&q).unwrap(), wlt);
    }

    #[test]
    fn planar_tree_has_no_scheme() {
        let t = from_pairing(2, vec![3, 2, 1, 0]).unwrap();
        assert!(matches!(extract_scheme(&t), Err(Error::NoSchemeExists)));
    }

    #[test]
    fn extraction_of_pendant_and_chain() {
        // The bouquet with a pendant edge inserted into one corner, and
        // with one loop subdivided.
        for n in 3..=5 {
            for_each_pairing(n, |p| {
                let t = from_pairing(n, p.to_vec()).unwrap();
                if t.genus() != 1 {
                    return;
                }
                let (s, nodes) = extract_scheme(&t).unwrap();
                assert_eq!(s.genus(), 1);
                assert!(s.tree().degrees().iter().all(|&d| d >= 3));
                assert_eq!(nodes.iter().flatten().count(), s.vertex_count());
                let (again, ids) = extract_scheme(s.tree()).unwrap();
                assert_eq!(again, s);
                assert_eq!(ids, (0..s.vertex_count()).map(Some).collect::<Vec<_>>());
            });
        }
    }

    #[test]
    fn genus_one_schemes() {
        let all = enumerate_schemes(1, false).unwrap();
        assert_eq!(all.iter().filter(|s| s.vertex_count() == 1).count(), 1);
        let dominant = enumerate_schemes(1, true).unwrap();
        assert!(dominant.iter().all(|s| s.is_dominant() && s.n_edges() == 3));
        assert_eq!(dominant.len(), 1);
        assert_eq!(all.len(), 2);
    }

    /// Rooted one-face maps with all degrees at least 3, counted from labeled
    /// rotation systems: a connected map on `2e` labeled half-edges with a
    /// chosen root has no automorphism, so rooted maps number the labeled
    /// ones divided by `(2e − 1)!`.
    fn rotation_system_count(genus: usize, e: usize, cubic: bool) -> usize {
        let len = 2 * e;
        let mut involutions = Vec::new();
        for_each_pairing(e, |p| involutions.push(p.to_vec()));
        let mut count = 0;
        let mut perm: Vec<usize> = (0..len).collect();
        permutations(&mut perm, 0, &mut |sigma| {
            let mut deg_ok = true;
            let mut seen = vec![false; len];
            for s in 0..len {
                if seen[s] {
                    continue;
                }
                let mut d = 0;
                let mut h = s;
                while !seen[h] {
                    seen[h] = true;
                    d += 1;
                    h = sigma[h];
                }
                if d < 3 || (cubic && d != 3) {
                    deg_ok = false;
                }
            }
            if !deg_ok {
                return;
            }
            for alpha in &involutions {
                if let Ok(m) = build_map(e, alpha.clone(), sigma.to_vec(), 0) {
                    if m.face_count() == 1 && m.genus() == genus {
                        count += 1;
                    }
                }
            }
        });
        let fact: usize = (1..len).product();
        assert_eq!(count % fact, 0);
        count / fact
    }

    fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn scheme_counts_match_rotation_systems() {
        let all = enumerate_schemes(1, false).unwrap();
        for e in 2..=3 {
            let ours = all.iter().filter(|s| s.n_edges() == e).count();
            assert_eq!(ours, rotation_system_count(1, e, false), "e = {e}");
        }
        let distinct: BTreeSet<Vec<usize>> = all.iter().map(|s| s.pairing().to_vec()).collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn genus_two_dominant_count() {
        let d = enumerate_schemes(2, true).unwrap();
        assert_eq!(d.len(), 105);
        assert!(d.iter().all(|s| s.vertex_count() == 6 && s.n_edges() == 9 && s.genus() == 2));
    }

    #[test]
    fn round_trip_on_all_small_trees() {
        for n in 2..=5 {
            let all = enumerate_well_labeled_gtrees(1, n).unwrap();
            let mut seen = BTreeSet::new();
            for wlt in &all {
                let q = decompose(wlt).unwrap();
                assert!(validate_compatible(&q).0, "{:?}", q.violations());
                assert_eq!(q.n_edges(), n);
                assert_eq!(&recompose(&q).unwrap(), wlt);
                let key = serde_json::to_string(&q).unwrap();
                assert!(seen.insert(key), "decompose is injective");
            }
        }
    }

    #[test]
    fn round_trip_genus_two() {
        for wlt in enumerate_well_labeled_gtrees(2, 5).unwrap().iter().step_by(7) {
            let q = decompose(wlt).unwrap();
            assert!(q.violations().is_empty());
            assert_eq!(&recompose(&q).unwrap(), wlt);
        }
    }

    #[test]
    fn image_is_all_compatible_quadruples() {
        // Independent enumeration of compatible quadruples for n = 4: every
        // scheme, every choice of (σ, m) on half-edges with the right total,
        // every oriented bridge, every forest and every offset.
        use crate::forest::count_motzkin_bridges;
        use crate::forest::count_well_labeled_forests;
        use num_bigint::BigUint;
        for n in 2..=5 {
            let mut total = BigUint::from(0u32);
            for s in enumerate_schemes(1, false).unwrap() {
                let k = s.n_half_edges();
                let oriented = s.orientation();
                // σ on oriented half-edges, m on all half-edges.
                let mut sig = vec![1usize; k];
                loop {
                    for &e in &oriented {
                        sig[s.reverse(e)] = sig[e];
                    }
                    let used: usize = sig.iter().sum::<usize>() / 2;
                    if used <= n {
                        let rest = n - used;
                        for_each_composition(rest, k, &mut |m: &[usize]| {
                            let mut w = BigUint::from(2 * m[0] + sig[0]);
                            for e in 0..k {
                                w *= count_well_labeled_forests(sig[e], m[e]);
                            }
                            // Bridge displacements from vertex labels.
                            let v = s.vertex_count();
                            let mut lab = vec![0i64; v];
                            let bound: i64 = sig.iter().map(|&x| x as i64).sum();
                            let mut sum = BigUint::from(0u32);
                            vertex_labelings(&s, &mut lab, 0, bound, &mut |lab: &[i64]| {
                                let mut p = BigUint::from(1u32);
                                for &e in &oriented {
                                    p *= count_motzkin_bridges(sig[e], lab[s.target(e)] - lab[s.origin(e)]);
                                }
                                sum += p;
                            });
                            total += w * sum;
                        });
                    }
                    // Advance σ on oriented half-edges.
                    let mut i = 0;
                    loop {
                        if i == oriented.len() {
                            break;
                        }
                        sig[oriented[i]] += 1;
                        if sig[oriented[i]] <= n {
                            break;
                        }
                        sig[oriented[i]] = 1;
                        i += 1;
                    }
                    if i == oriented.len() {
                        break;
                    }
                }
            }
            assert_eq!(total, BigUint::from(enumerate_well_labeled_gtrees(1, n).unwrap().len()), "n = {n}");
        }
    }

    fn for_each_composition(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
        fn rec(rest: usize, cur: &mut Vec<usize>, parts: usize, f: &mut dyn FnMut(&[usize])) {
            if cur.len() + 1 == parts {
                cur.push(rest);
                f(cur);
                cur.pop();
                return;
            }
            for x in 0..=rest {
                cur.push(x);
                rec(rest - x, cur, parts, f);
                cur.pop();
            }
        }
        rec(total, &mut Vec::new(), parts, f);
    }

    fn vertex_labelings(s: &Scheme, lab: &mut Vec<i64>, v: usize, bound: i64, f: &mut dyn FnMut(&[i64])) {
        if v == lab.len() {
            f(lab);
            return;
        }
        if v == s.root_vertex() {
            lab[v] = 0;
            vertex_labelings(s, lab, v + 1, bound, f);
            return;
        }
        for x in -bound..=bound {
            lab[v] = x;
            vertex_labelings(s, lab, v + 1, bound, f);
        }
    }

    #[test]
    fn incompatible_quadruples_are_rejected() {
        let wlt = enumerate_well_labeled_gtrees(1, 4).unwrap().into_iter().nth(40).unwrap();
        let q = decompose(&wlt).unwrap();
        let mut bad = q.clone();
        bad.root_offset = 2 * q.m(0) + q.sigma(0);
        assert!(matches!(bad.violations()[..], [Violation::RootOffset { .. }]));
        assert!(matches!(recompose(&bad), Err(Error::IncompatibleQuadruple(_))));

        let bouquet = decompose(&validate_labels(bouquet(), vec![0]).unwrap()).unwrap();
        let mut bad = bouquet.clone();
        bad.bridges[0] = MotzkinBridge { values: vec![0, 1] };
        assert!(bad.violations().iter().any(|v| matches!(v, Violation::BridgeReversal { .. })));

        let mut bad = bouquet.clone();
        bad.forests[0] = decode_contour(&ContourPair { contour: vec![2, 1, 0], spatial: vec![0; 3] }).unwrap();
        bad.bridges[0] = MotzkinBridge { values: vec![0, 0, 0] };
        assert!(bad.violations().iter().any(|v| matches!(v, Violation::LengthMismatch { .. })));
    }

    #[test]
    fn quadruple_json_round_trip() {
        let wlt = enumerate_well_labeled_gtrees(1, 5).unwrap().into_iter().nth(1234).unwrap();
        let q = decompose(&wlt).unwrap();
        let text = serde_json::to_string(&q).unwrap();
        let back: DecompositionQuadruple = serde_json::from_str(&text).unwrap();
        assert_eq!(back, q);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["half_edges"].as_array().unwrap().len(), q.scheme.n_half_edges());
    }
}
