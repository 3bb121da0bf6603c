//! Graph-metric statistics of quadrangulations: breadth-first distances,
//! profiles, the global label process and contour of a decomposed g-tree,
//! the upper bound `d°` and the ancestral-lineage lower bound on distances,
//! two-point statistics and ball-growth dimension estimates.
//!
//! Indices `0..=2n` follow the re-rooted convention: index `i` denotes the
//! corner `(i − u) mod 2n` of the g-tree, where `u` is the position of the
//! root in the first forest, so that index 0 is the first corner of the
//! first forest.

use std::collections::{HashMap, VecDeque};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::cms::{cms_forward, PointedQuadrangulation};
use crate::error::{Error, Result};
use crate::forest::{encode_contour, shifted_process_of_pair};
use crate::gtree::WellLabeledGTree;
use crate::map_core::CombinatorialMap;
use crate::random::Chooser;
use crate::scheme::{decompose, DecompositionQuadruple};

/// The scaling constant `γ = (8/9)^{1/4}`.
pub fn gamma() -> f64 {
    (8.0f64 / 9.0).powf(0.25)
}

/// The distance scale `γ n^{1/4}`.
pub fn distance_scale(n: usize) -> f64 {
    gamma() * (n as f64).powf(0.25)
}

/// Marker for vertices not reached by a search.
pub const UNREACHED: u32 = u32::MAX;

/// An undirected graph in compressed adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds a graph from adjacency lists.
    pub fn from_adjacency(adj: &[Vec<usize>]) -> Graph {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in adj {
            targets.extend(list.iter().map(|&w| w as u32));
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    /// The underlying graph of a map, one arc per half-edge.
    pub fn from_map(map: &CombinatorialMap) -> Graph {
        let nv = map.vertex_count();
        let mut offsets = vec![0usize; nv + 1];
        for h in 0..map.n_half_edges() {
            offsets[map.vertex_of(h) + 1] += 1;
        }
        for v in 0..nv {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; map.n_half_edges()];
        for h in 0..map.n_half_edges() {
            let v = map.vertex_of(h);
            targets[fill[v]] = map.head(h) as u32;
            fill[v] += 1;
        }
        Graph { offsets, targets }
    }

    /// The `side × side` square grid with periodic boundary.
    pub fn torus_grid(side: usize) -> Graph {
        let id = |x: usize, y: usize| (x % side) * side + (y % side);
        let adj: Vec<Vec<usize>> = (0..side * side)
            .map(|v| {
                let (x, y) = (v / side, v % side);
                vec![id(x + 1, y), id(x + side - 1, y), id(x, y + 1), id(x, y + side - 1)]
            })
            .collect();
        Graph::from_adjacency(&adj)
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Neighbours of `v`, with multiplicity.
    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Distances from `source`; [`UNREACHED`] marks other components.
    pub fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source as u32]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            for &w in self.neighbours(v as usize) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = dv + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Exact graph distances from `source` in a connected map.
pub fn bfs_distances(map: &CombinatorialMap, source: usize) -> Vec<i64> {
    Graph::from_map(map).bfs(source).into_iter().map(|d| if d == UNREACHED { -1 } else { d as i64 }).collect()
}

/// Base point of a distance profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    /// The origin of the root half-edge.
    Root,
    /// The pointed vertex.
    Pointed,
}

/// Number of vertices at each distance from a base point, and the largest distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub histogram: Vec<usize>,
    pub radius: usize,
}

/// The distance profile and radius of a pointed quadrangulation.
pub fn profile_and_radius(pq: &PointedQuadrangulation, base: Base) -> Profile {
    let source = match base {
        Base::Root => pq.map.vertex_of(pq.map.root()),
        Base::Pointed => pq.pointed_vertex,
    };
    let dist = Graph::from_map(&pq.map).bfs(source);
    let radius = *dist.iter().max().expect("maps have vertices") as usize;
    let mut histogram = vec![0usize; radius + 1];
    for d in dist {
        histogram[d as usize] += 1;
    }
    Profile { histogram, radius }
}

/// The global label process `Λ_n` on `0..=2n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalLabelProcess {
    pub values: Vec<i64>,
}

impl GlobalLabelProcess {
    /// Lifetime `2n`.
    pub fn lifetime(&self) -> usize {
        self.values.len() - 1
    }

    /// `Λ_n(2n t) / (γ n^{1/4})` at `t ∈ [0, 1]`, linearly interpolated.
    pub fn rescaled(&self, t: f64) -> f64 {
        let len = self.lifetime();
        let x = (t * len as f64).clamp(0.0, len as f64);
        let lo = x.floor() as usize;
        let hi = (lo + 1).min(len);
        let frac = x - lo as f64;
        let v = (1.0 - frac) * self.values[lo] as f64 + frac * self.values[hi] as f64;
        v / distance_scale(len / 2)
    }
}

/// Concatenates the shifted label processes of the forests in facial order
/// of the scheme half-edges, starting at 0.
pub fn build_global_label_process(quad: &DecompositionQuadruple) -> Result<GlobalLabelProcess> {
    let violations = quad.violations();
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::IncompatibleQuadruple(text.join("; ")));
    }
    let mut values = vec![0i64];
    for (wlf, bridge) in quad.forests.iter().zip(&quad.bridges) {
        let pair = encode_contour(wlf);
        let part = shifted_process_of_pair(&pair, bridge);
        let offset = *values.last().expect("nonempty");
        values.extend(part[1..].iter().map(|&x| x + offset));
    }
    Ok(GlobalLabelProcess { values })
}

/// The contour `𝔠_n` of the forest obtained by concatenating all forests in
/// facial order: it starts at the total number of floor nodes and ends at 0.
pub fn build_global_contour(quad: &DecompositionQuadruple) -> Vec<i64> {
    let total: i64 = quad.forests.iter().map(|f| f.forest.tree_count() as i64).sum();
    let mut values = vec![total];
    for wlf in &quad.forests {
        let pair = encode_contour(wlf);
        let sigma = pair.tree_count() as i64;
        let offset = *values.last().expect("nonempty");
        values.extend(pair.contour[1..].iter().map(|&c| c - sigma + offset));
    }
    values
}

/// Sparse table answering range-minimum queries in constant time.
#[derive(Debug, Clone)]
pub struct RangeMin {
    levels: Vec<Vec<i64>>,
}

impl RangeMin {
    /// Builds the table over `values`.
    pub fn new(values: &[i64]) -> RangeMin {
        let mut levels = vec![values.to_vec()];
        let mut width = 1;
        while 2 * width <= values.len() {
            let prev = levels.last().expect("nonempty");
            let next: Vec<i64> = (0..=values.len() - 2 * width).map(|i| prev[i].min(prev[i + width])).collect();
            levels.push(next);
            width *= 2;
        }
        RangeMin { levels }
    }

    /// Minimum over the inclusive range `[a, b]`, `a ≤ b`.
    pub fn min(&self, a: usize, b: usize) -> i64 {
        let level = (usize::BITS - 1 - (b - a + 1).leading_zeros()) as usize;
        self.levels[level][a].min(self.levels[level][b + 1 - (1 << level)])
    }
}

/// The label process with its range-minimum table, answering `d°` queries.
#[derive(Debug, Clone)]
pub struct LabelBound {
    pub process: GlobalLabelProcess,
    rmq: RangeMin,
}

impl LabelBound {
    pub fn new(process: GlobalLabelProcess) -> LabelBound {
        let rmq = RangeMin::new(&process.values);
        LabelBound { process, rmq }
    }

    /// Minimum of `Λ` over the cyclic arc from `i` to `j`.
    pub fn arc_min(&self, i: usize, j: usize) -> i64 {
        if i <= j {
            self.rmq.min(i, j)
        } else {
            self.rmq.min(i, self.process.lifetime()).min(self.rmq.min(0, j))
        }
    }
}

/// `Λ(i) + Λ(j) − 2 max(min over i → j, min over j → i) + 2`.
pub fn d_circ(bound: &LabelBound, i: usize, j: usize) -> Result<i64> {
    let max = bound.process.lifetime();
    for x in [i, j] {
        if x > max {
            return Err(Error::IndexOutOfRange { index: x, max });
        }
    }
    let l = &bound.process.values;
    Ok(l[i] + l[j] - 2 * bound.arc_min(i, j).max(bound.arc_min(j, i)) + 2)
}

/// The label process together with the global contour and its running
/// minimum, answering ancestral-lineage lower-bound queries.
#[derive(Debug, Clone)]
pub struct LineageContext {
    pub labels: Vec<i64>,
    pub contour: Vec<i64>,
    running_min: Vec<i64>,
}

impl LineageContext {
    pub fn new(labels: &GlobalLabelProcess, contour: Vec<i64>) -> LineageContext {
        let mut running_min = Vec::with_capacity(contour.len());
        let mut m = i64::MAX;
        for &c in &contour {
            m = m.min(c);
            running_min.push(m);
        }
        LineageContext { labels: labels.values.clone(), contour, running_min }
    }
}

/// `Λ(i) − min Λ` over the indices `k` between `i` and `j` that lie in the
/// same tree as `i` and whose contour value is the minimum of the contour
/// between `k` and `i`.
pub fn distance_lower_bound(ctx: &LineageContext, i: usize, j: usize) -> Result<i64> {
    let max = ctx.labels.len() - 1;
    for x in [i, j] {
        if x > max {
            return Err(Error::IndexOutOfRange { index: x, max });
        }
    }
    let tree = ctx.running_min[i];
    let mut low = ctx.contour[i];
    let mut best = ctx.labels[i];
    let mut visit = |k: usize| {
        low = low.min(ctx.contour[k]);
        if ctx.contour[k] == low && ctx.running_min[k] == tree {
            best = best.min(ctx.labels[k]);
        }
    };
    if j >= i {
        (i..=j).for_each(&mut visit);
    } else {
        (j..=i).rev().for_each(&mut visit);
    }
    Ok(ctx.labels[i] - best)
}

/// Quadrangulation distances between re-rooted corner indices.
#[derive(Debug)]
pub struct DistanceProcess {
    graph: Graph,
    /// Map vertex of each re-rooted index `0..=2n`.
    vertex: Vec<usize>,
    n: usize,
    cache: Mutex<HashMap<usize, std::sync::Arc<Vec<u32>>>>,
}

/// Number of breadth-first searches kept in memory by a distance process.
pub const DISTANCE_CACHE: usize = 32;

impl DistanceProcess {
    /// Distances of `pq` read through the re-rooting by `root_offset`.
    pub fn new(pq: &PointedQuadrangulation, root_offset: usize) -> DistanceProcess {
        let len = pq.correspondence.len() - 1;
        let vertex = (0..=len).map(|i| pq.correspondence[(i + len - root_offset % len) % len]).collect();
        DistanceProcess { graph: Graph::from_map(&pq.map), vertex, n: len / 2, cache: Mutex::new(HashMap::new()) }
    }

    /// Number of faces.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Map vertex of the re-rooted index `i`.
    pub fn vertex(&self, i: usize) -> usize {
        self.vertex[i]
    }

    /// The underlying graph.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Distances from the vertex of index `i` to every map vertex.
    pub fn distances_from(&self, i: usize) -> std::sync::Arc<Vec<u32>> {
        let v = self.vertex[i];
        let mut cache = self.cache.lock().expect("cache lock");
        if let Some(d) = cache.get(&v) {
            return d.clone();
        }
        if cache.len() >= DISTANCE_CACHE {
            cache.clear();
        }
        let d = std::sync::Arc::new(self.graph.bfs(v));
        cache.insert(v, d.clone());
        d
    }

    /// `d_n(i, j)` on integer indices.
    pub fn d_n(&self, i: usize, j: usize) -> Result<u32> {
        let max = 2 * self.n;
        for x in [i, j] {
            if x > max {
                return Err(Error::IndexOutOfRange { index: x, max });
            }
        }
        Ok(self.distances_from(i)[self.vertex[j]])
    }

    /// `d_n` extended bilinearly to real arguments in `[0, 2n]`.
    pub fn d_n_real(&self, s: f64, t: f64) -> Result<f64> {
        let max = 2 * self.n;
        let split = |x: f64| -> Result<(usize, usize, f64)> {
            if !(0.0..=max as f64).contains(&x) {
                return Err(Error::IndexOutOfRange { index: x.max(0.0) as usize, max });
            }
            let lo = x.floor() as usize;
            Ok((lo, (lo + 1).min(max), x - lo as f64))
        };
        let (s0, s1, fs) = split(s)?;
        let (t0, t1, ft) = split(t)?;
        let d = |a, b| self.d_n(a, b).map(|x| x as f64);
        Ok(fs * ft * d(s1, t1)? + fs * (1.0 - ft) * d(s1, t0)? + (1.0 - fs) * ft * d(s0, t1)? + (1.0 - fs) * (1.0 - ft) * d(s0, t0)?)
    }
}

/// `d_n(2ns, 2nt) / (γ n^{1/4})` for `s, t ∈ [0, 1]`.
pub fn rescaled_distance(dproc: &DistanceProcess, s: f64, t: f64) -> Result<f64> {
    let len = 2.0 * dproc.n as f64;
    Ok(dproc.d_n_real(len * s, len * t)? / distance_scale(dproc.n))
}

/// Everything the metric statistics need about one sample.
#[derive(Debug)]
pub struct MetricSample {
    pub tree: WellLabeledGTree,
    pub quadruple: DecompositionQuadruple,
    pub quadrangulation: PointedQuadrangulation,
    pub bound: LabelBound,
    pub lineage: LineageContext,
    pub distances: DistanceProcess,
}

impl MetricSample {
    /// Decomposes the tree, applies the bijection and builds the processes.
    pub fn new(tree: WellLabeledGTree, epsilon: i8) -> Result<MetricSample> {
        let quadruple = decompose(&tree)?;
        let quadrangulation = cms_forward(&tree, epsilon);
        let labels = build_global_label_process(&quadruple)?;
        let lineage = LineageContext::new(&labels, build_global_contour(&quadruple));
        let distances = DistanceProcess::new(&quadrangulation, quadruple.root_offset);
        Ok(MetricSample { tree, quadruple, quadrangulation, bound: LabelBound::new(labels), lineage, distances })
    }

    /// Number of faces.
    pub fn n(&self) -> usize {
        self.tree.n_edges()
    }

    /// Counts of pairs violating `lower ≤ d_n ≤ d°` among `pairs`.
    pub fn sandwich_violations(&self, pairs: &[(usize, usize)]) -> Result<usize> {
        let mut sorted = pairs.to_vec();
        sorted.sort_by_key(|&(i, _)| self.distances.vertex(i));
        let mut bad = 0;
        for (i, j) in sorted {
            let d = self.distances.d_n(i, j)? as i64;
            let lo = distance_lower_bound(&self.lineage, i, j)?;
            let hi = d_circ(&self.bound, i, j)?;
            if lo > d || d > hi {
                bad += 1;
            }
        }
        Ok(bad)
    }

    /// `d_n(0, n) / (γ n^{1/4})`.
    pub fn two_point_value(&self) -> f64 {
        self.distances.d_n(0, self.n()).expect("indices in range") as f64 / distance_scale(self.n())
    }
}

/// Summary of an empirical distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPointSummary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let x = q * (sorted.len() - 1) as f64;
    let lo = x.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (x - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Summary statistics of rescaled two-point distances.
pub fn two_point_statistic(values: &[f64]) -> Result<TwoPointSummary> {
    if values.is_empty() {
        return Err(Error::ZeroSamples);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(TwoPointSummary {
        count: sorted.len(),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        min: sorted[0],
        q25: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q75: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut best) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    best
}

/// Radii at which ball volumes are measured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadiusGrid {
    /// Geometric grid of `points` radii between `V^{1/8}` and half the
    /// eccentricity of each center, where `V` is the vertex count.
    Auto { points: usize },
    /// Fixed radii.
    Explicit(Vec<usize>),
}

impl Default for RadiusGrid {
    fn default() -> Self {
        RadiusGrid::Auto { points: 8 }
    }
}

/// Ball volumes around one center and the fitted slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterGrowth {
    pub center: usize,
    pub radii: Vec<usize>,
    pub volumes: Vec<usize>,
    pub slope: f64,
}

/// Mean ball-growth slope with per-center diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub std_error: f64,
    pub centers: Vec<CenterGrowth>,
}

/// Geometric grid of distinct integer radii in `[lo, hi]`.
pub fn geometric_radii(lo: f64, hi: f64, points: usize) -> Vec<usize> {
    let points = points.max(2);
    let mut radii: Vec<usize> = (0..points)
        .map(|k| (lo * (hi / lo).powf(k as f64 / (points - 1) as f64)).round() as usize)
        .filter(|&r| r >= 1 && r as f64 <= hi.max(lo))
        .collect();
    radii.dedup();
    radii
}

/// Least-squares slope of `y` against `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Estimates the growth exponent of ball volumes around `centers` random
/// vertices by least squares of `log |B(c, r)|` against `log r`.
pub fn dimension_estimate<C: Chooser + ?Sized>(
    graph: &Graph,
    centers: usize,
    grid: &RadiusGrid,
    chooser: &mut C,
) -> Result<DimensionEstimate> {
    if centers == 0 {
        return Err(Error::ZeroSamples);
    }
    let nv = graph.vertex_count();
    let mut out = Vec::with_capacity(centers);
    for _ in 0..centers {
        let center = chooser.below(nv as u64) as usize;
        let dist = graph.bfs(center);
        let ecc = dist.iter().filter(|&&d| d != UNREACHED).max().copied().unwrap_or(0) as usize;
        let radii = match grid {
            RadiusGrid::Auto { points } => geometric_radii((nv as f64).powf(0.125), ecc as f64 / 2.0, *points),
            RadiusGrid::Explicit(r) => {
                let mut r = r.clone();
                r.sort_unstable();
                r.dedup();
                r.retain(|&x| x >= 1);
                r
            }
        };
        if radii.len() < 2 {
            return Err(Error::RadiusGridTooCoarse(radii.len()));
        }
        let mut counts = vec![0usize; ecc + 2];
        for &d in &dist {
            if d != UNREACHED {
                counts[d as usize] += 1;
            }
        }
        for r in 1..counts.len() {
            counts[r] += counts[r - 1];
        }
        let volumes: Vec<usize> = radii.iter().map(|&r| counts[r.min(ecc)]).collect();
        let x: Vec<f64> = radii.iter().map(|&r| (r as f64).ln()).collect();
        let y: Vec<f64> = volumes.iter().map(|&v| (v as f64).ln()).collect();
        out.push(CenterGrowth { center, radii, volumes, slope: ols_slope(&x, &y) });
    }
    let k = out.len() as f64;
    let slope = out.iter().map(|c| c.slope).sum::<f64>() / k;
    let var = if out.len() > 1 { out.iter().map(|c| (c.slope - slope).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
    Ok(DimensionEstimate { slope, std_error: (var / k).sqrt(), centers: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cms::distance_upper_bound;
    use crate::gtree::enumerate_well_labeled_gtrees;
    use crate::random::stream_chooser;
    use crate::sampler::{build_exact, Mode, Sampler};

    fn samples(n: usize, count: u64) -> Vec<MetricSample> {
        let table = build_exact(1, n).unwrap();
        (0..count)
            .map(|s| {
                let mut ch = stream_chooser(21, s);
                MetricSample::new(table.sample_gtree(&mut ch).unwrap(), 1).unwrap()
            })
            .collect()
    }

    #[test]
    fn bouquet_label_process_is_flat() {
        let wlt = enumerate_well_labeled_gtrees(1, 2).unwrap().pop().unwrap();
        let s = MetricSample::new(wlt, 1).unwrap();
        assert_eq!(s.bound.process.values, vec![0; 5]);
        assert_eq!(d_circ(&s.bound, 2, 2).unwrap(), 2);
        assert_eq!(distance_lower_bound(&s.lineage, 3, 3).unwrap(), 0);
    }

    #[test]
    fn label_process_matches_tree_labels() {
        for n in 2..=4 {
            for wlt in enumerate_well_labeled_gtrees(1, n).unwrap() {
                let s = MetricSample::new(wlt.clone(), 1).unwrap();
                let u = s.quadruple.root_offset;
                let len = 2 * n;
                let l = |i: usize| wlt.label_at((i + len - u) % len);
                let direct: Vec<i64> = (0..=len).map(|i| l(i) - l(0)).collect();
                assert_eq!(s.bound.process.values, direct);
                assert_eq!(*s.lineage.contour.last().unwrap(), 0);
                assert!(s.lineage.contour.windows(2).all(|w| (w[0] - w[1]).abs() == 1));
            }
        }
        for s in samples(200, 5) {
            let len = 2 * s.n();
            let u = s.quadruple.root_offset;
            let l = |i: usize| s.tree.label_at((i + len - u) % len);
            assert!((0..=len).all(|i| s.bound.process.values[i] == l(i) - l(0)));
            assert!(s.bound.process.values.windows(2).all(|w| (w[0] - w[1]).abs() <= 1));
        }
    }

    #[test]
    fn sandwich_is_exhaustive_for_small_trees() {
        for n in 2..=4 {
            for wlt in enumerate_well_labeled_gtrees(1, n).unwrap() {
                let s = MetricSample::new(wlt, -1).unwrap();
                let pairs: Vec<(usize, usize)> = (0..=2 * n).flat_map(|i| (0..=2 * n).map(move |j| (i, j))).collect();
                assert_eq!(s.sandwich_violations(&pairs).unwrap(), 0);
            }
        }
    }

    #[test]
    fn d_circ_agrees_with_corner_bound() {
        for s in samples(50, 3) {
            let len = 2 * s.n();
            let u = s.quadruple.root_offset;
            for i in (0..=len).step_by(7) {
                for j in (0..=len).step_by(5) {
                    let a = d_circ(&s.bound, i, j).unwrap();
                    let b = distance_upper_bound(&s.quadrangulation, (i + len - u) % len, (j + len - u) % len).unwrap();
                    assert_eq!(a, b, "{i} {j}");
                }
            }
        }
    }

    #[test]
    fn range_min_matches_scan() {
        let v: Vec<i64> = (0..100).map(|i| ((i * 37) % 23) as i64 - 11).collect();
        let r = RangeMin::new(&v);
        for a in 0..100 {
            for b in a..100 {
                assert_eq!(r.min(a, b), *v[a..=b].iter().min().unwrap());
            }
        }
    }

    #[test]
    fn distances_are_a_pseudometric() {
        let s = &samples(40, 1)[0];
        let d = |i, j| s.distances.d_n(i, j).unwrap();
        for i in 0..=80 {
            assert_eq!(d(i, i), 0);
            for j in 0..=80 {
                assert_eq!(d(i, j), d(j, i));
                for k in (0..=80).step_by(9) {
                    assert!(d(i, k) <= d(i, j) + d(j, k));
                }
            }
        }
        assert_eq!(d(0, 80), 0);
    }

    #[test]
    fn interpolated_distance_properties() {
        let s = &samples(40, 1)[0];
        let dp = &s.distances;
        assert_eq!(dp.d_n_real(3.0, 17.0).unwrap(), dp.d_n(3, 17).unwrap() as f64);
        let scale = distance_scale(40);
        assert!((rescaled_distance(dp, 0.25, 0.5).unwrap() - dp.d_n(20, 40).unwrap() as f64 / scale).abs() < 1e-12);
        let mut rng = crate::random::stream_rng(3, 3);
        let mut u = || rand::Rng::gen_range(&mut rng, 0.0..80.0);
        for _ in 0..500 {
            let x = u();
            assert!(dp.d_n_real(x, x).unwrap() <= 1.0 + 1e-12);
            let (a, b, c) = (u(), u(), u());
            assert!(dp.d_n_real(a, c).unwrap() <= dp.d_n_real(a, b).unwrap() + dp.d_n_real(b, c).unwrap() + 1e-9);
        }
        assert!(dp.d_n_real(80.5, 0.0).is_err());
    }

    #[test]
    fn profiles_count_vertices() {
        for s in samples(100, 3) {
            let pq = &s.quadrangulation;
            let p = profile_and_radius(pq, Base::Pointed);
            assert_eq!(p.histogram.iter().sum::<usize>(), 100);
            assert_eq!(p.histogram[0], 1);
            assert_eq!(p.histogram.len(), p.radius + 1);
            let mut from_labels = vec![0usize; p.radius + 1];
            for &l in &pq.labels_shifted {
                from_labels[l as usize] += 1;
            }
            assert_eq!(from_labels, p.histogram);
            let r = profile_and_radius(pq, Base::Root);
            assert_eq!(r.histogram.iter().sum::<usize>(), 100);
        }
    }

    #[test]
    fn summaries_and_ks() {
        let s = two_point_statistic(&[3.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!((s.min, s.median, s.max, s.mean), (1.0, 2.5, 4.0, 2.5));
        assert!(matches!(two_point_statistic(&[]), Err(Error::ZeroSamples)));
        assert_eq!(ks_statistic(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_statistic(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
    }

    #[test]
    fn grid_control_has_dimension_two() {
        let g = Graph::torus_grid(200);
        let est = dimension_estimate(&g, 5, &RadiusGrid::default(), &mut stream_chooser(1, 0)).unwrap();
        assert!((1.8..=2.2).contains(&est.slope), "{}", est.slope);
        assert_eq!(est.centers.len(), 5);
        let err = dimension_estimate(&g, 1, &RadiusGrid::Explicit(vec![4]), &mut stream_chooser(1, 0));
        assert!(matches!(err, Err(Error::RadiusGridTooCoarse(1))));
    }

    #[test]
    fn quadrangulation_growth_is_faster_than_planar_grid() {
        let wlt = Sampler::new(1, 5000, Mode::Float).unwrap().sample_gtree(&mut stream_chooser(2, 0)).unwrap();
        let pq = cms_forward(&wlt, 1);
        let est = dimension_estimate(&Graph::from_map(&pq.map), 4, &RadiusGrid::default(), &mut stream_chooser(2, 1)).unwrap();
        assert!(est.slope > 2.5, "{}", est.slope);
    }
}
