//! Exact counting and uniform sampling of well-labeled g-trees.
//!
//! A well-labeled g-tree with `n` edges decomposes into a scheme `s`, chain
//! lengths `σ`, forest sizes `m`, node labels `l` and a root offset `u`.
//! Summing the forest counts over `m` gives
//!
//! ```text
//! |T_n| = Σ_s Σ_k 3^(n−k) C(2n, n−k) H_s(k),
//! H_s(k) = Σ_{σ on Ě, Σσ = k} σ^{e*} Σ_l Π_{e ∈ Ě} N(σ^e, l^{e+} − l^{e−}),
//! ```
//!
//! where `N(σ, d)` counts Motzkin paths of `σ` steps with displacement `d`.
//! The polynomial `Σ_k H_s(k) z^k` is computed by variable elimination over
//! the node labels, one factor per oriented edge. Sampling walks the same
//! tables backwards: scheme and `k`, then node labels and `σ`, then `m`,
//! then `u`, then uniform bridges and forests, then recomposition.
//!
//! Exact mode uses big integers and is exactly uniform. Float mode divides
//! every weight by `12^n`, truncates `k` and the labels where the omitted
//! mass is below `e^(−50)`, and samples `m` from log-weights.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{sample_motzkin_bridge, sample_well_labeled_forest};
use crate::gtree::WellLabeledGTree;
use crate::random::Chooser;
use crate::scheme::{enumerate_schemes, recompose, DecompositionQuadruple, Scheme};

/// Largest `n` served by exact mode.
pub const DEFAULT_EXACT_CAP: usize = 400;

/// Largest number of coefficients kept in one joint table.
const JOINT_LIMIT: usize = 1 << 22;

/// Memory budget of the weight tables of one `(g, n)`, in bytes.
pub const TABLE_BYTES_LIMIT: usize = 3 << 30;

/// Largest `n` served by float mode.
pub const FLOAT_CAP: usize = 1_000_000;

/// Arithmetic mode of the weight tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    /// Exact mode up to [`DEFAULT_EXACT_CAP`], float mode beyond.
    pub fn auto(n: usize) -> Mode {
        if n <= DEFAULT_EXACT_CAP {
            Mode::Exact
        } else {
            Mode::Float
        }
    }
}

/// The number of well-labeled g-trees.
#[derive(Debug, Clone, PartialEq)]
pub enum GTreeCount {
    /// `|T_n|` exactly.
    Exact(BigUint),
    /// `|T_n| / 12^n`.
    Scaled(f64),
}

impl GTreeCount {
    /// `|T_n| / 12^n` as a float.
    pub fn scaled(&self, n: usize) -> f64 {
        match self {
            GTreeCount::Scaled(x) => *x,
            GTreeCount::Exact(c) => scaled_ratio(c, &BigUint::from(12u32).pow(n as u32)),
        }
    }
}

/// `a / b` as a float for arbitrarily large integers.
pub(crate) fn scaled_ratio(a: &BigUint, b: &BigUint) -> f64 {
    if Zero::is_zero(a) {
        return 0.0;
    }
    let shift = |x: &BigUint| x.bits().saturating_sub(64);
    let (sa, sb) = (shift(a), shift(b));
    let fa = (a >> sa).to_f64().expect("fits");
    let fb = (b >> sb).to_f64().expect("fits");
    fa / fb * 2f64.powi(sa as i32 - sb as i32)
}

/// The coefficients a weight table is built from.
pub trait Weight: Clone + Send + Sync + std::fmt::Debug + 'static {
    /// Approximate memory of one coefficient, in bytes.
    const COEFFICIENT_BYTES: usize;
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn from_u64(x: u64) -> Self;
    fn add_assign(&mut self, x: &Self);
    fn mul(&self, x: &Self) -> Self;
    /// Weighted choice with these weights.
    fn pick<C: Chooser + ?Sized>(chooser: &mut C, weights: &[Self]) -> usize;
    /// Motzkin kernel rows `0..=k_max`, row `σ` holding `d = −σ..=σ`.
    fn motzkin_rows(k_max: usize) -> Vec<Vec<Self>>;
    /// Factorials (exact) or log-factorials (float) of `0..=max`.
    fn factorials(max: usize) -> Vec<Self>;
    /// Weight of `k` for size `n`: `3^(n−k) C(2n, n−k)` or its value over `12^n`.
    fn size_weight(fact: &[Self], n: usize, k: usize) -> Self;
    /// Weights of `m ∈ 0..=r` for a half-edge of length `sigma` followed by
    /// forests of total length `rest`, with the root factor `2m + σ` when
    /// `marked`.
    fn forest_weights(fact: &[Self], sigma: usize, rest: usize, r: usize, marked: bool) -> Vec<Self>;
}

impl Weight for BigUint {
    const COEFFICIENT_BYTES: usize = 32;
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_u64(x: u64) -> Self {
        BigUint::from(x)
    }
    fn add_assign(&mut self, x: &Self) {
        *self += x;
    }
    fn mul(&self, x: &Self) -> Self {
        self * x
    }
    fn pick<C: Chooser + ?Sized>(chooser: &mut C, weights: &[Self]) -> usize {
        chooser.pick_big(weights)
    }
    fn motzkin_rows(k_max: usize) -> Vec<Vec<Self>> {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for s in 1..=k_max {
            let prev = &rows[s - 1];
            let row = (0..2 * s + 1)
                .map(|j| {
                    // Entry j of row s is displacement j − s.
                    let mut acc = BigUint::zero();
                    for pj in [j as i64 - 2, j as i64 - 1, j as i64] {
                        if pj >= 0 && (pj as usize) < prev.len() {
                            acc += &prev[pj as usize];
                        }
                    }
                    acc
                })
                .collect();
            rows.push(row);
        }
        rows
    }
    fn factorials(max: usize) -> Vec<Self> {
        let mut f = vec![BigUint::one()];
        for i in 1..=max {
            let next = &f[i - 1] * i;
            f.push(next);
        }
        f
    }
    fn size_weight(fact: &[Self], n: usize, k: usize) -> Self {
        BigUint::from(3u32).pow((n - k) as u32) * &fact[2 * n] / (&fact[n - k] * &fact[n + k])
    }
    fn forest_weights(fact: &[Self], sigma: usize, rest: usize, r: usize, marked: bool) -> Vec<Self> {
        let f = |s: usize, m: usize| -> BigUint {
            if s == 0 {
                return if m == 0 { BigUint::one() } else { BigUint::zero() };
            }
            &fact[2 * m + s - 1] * s / (&fact[m] * &fact[m + s])
        };
        (0..=r)
            .map(|m| {
                let w = f(sigma, m) * f(rest, r - m);
                if marked {
                    w * (2 * m + sigma)
                } else {
                    w
                }
            })
            .collect()
    }
}

impl Weight for f64 {
    const COEFFICIENT_BYTES: usize = 8;
    fn nil() -> Self {
        0.0
    }
    fn is_nil(&self) -> bool {
        *self == 0.0
    }
    fn from_u64(x: u64) -> Self {
        x as f64
    }
    fn add_assign(&mut self, x: &Self) {
        *self += x;
    }
    fn mul(&self, x: &Self) -> Self {
        self * x
    }
    fn pick<C: Chooser + ?Sized>(chooser: &mut C, weights: &[Self]) -> usize {
        chooser.pick_f64(weights)
    }
    fn motzkin_rows(k_max: usize) -> Vec<Vec<Self>> {
        let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
        for s in 1..=k_max {
            let prev = &rows[s - 1];
            let row = (0..2 * s + 1)
                .map(|j| {
                    let mut acc = 0.0;
                    for pj in [j as i64 - 2, j as i64 - 1, j as i64] {
                        if pj >= 0 && (pj as usize) < prev.len() {
                            acc += prev[pj as usize];
                        }
                    }
                    acc / 3.0
                })
                .collect();
            rows.push(row);
        }
        rows
    }
    fn factorials(max: usize) -> Vec<Self> {
        let mut f = vec![0.0];
        for i in 1..=max {
            let next = f[i - 1] + (i as f64).ln();
            f.push(next);
        }
        f
    }
    fn size_weight(fact: &[Self], n: usize, k: usize) -> Self {
        (fact[2 * n] - fact[n - k] - fact[n + k] - 2.0 * n as f64 * std::f64::consts::LN_2).exp()
    }
    fn forest_weights(fact: &[Self], sigma: usize, rest: usize, r: usize, marked: bool) -> Vec<Self> {
        let lf = |s: usize, m: usize| -> f64 {
            if s == 0 {
                return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
            }
            (s as f64).ln() + fact[2 * m + s - 1] - fact[m] - fact[m + s]
        };
        let logs: Vec<f64> = (0..=r)
            .map(|m| {
                let w = lf(sigma, m) + lf(rest, r - m);
                if marked {
                    w + ((2 * m + sigma) as f64).ln()
                } else {
                    w
                }
            })
            .collect();
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        logs.iter().map(|&x| (x - max).exp()).collect()
    }
}

type Poly<W> = Vec<W>;

/// Product of two polynomials truncated at degree `k_max`.
fn mul_trunc<W: Weight>(a: &[W], b: &[W], k_max: usize) -> Poly<W> {
    let mut out = vec![W::nil(); k_max + 1];
    let vb = b.iter().position(|x| !x.is_nil());
    let Some(vb) = vb else { return out };
    for (i, x) in a.iter().enumerate() {
        if i + vb > k_max {
            break;
        }
        if x.is_nil() {
            continue;
        }
        for j in vb..=(k_max - i).min(b.len() - 1) {
            if !b[j].is_nil() {
                out[i + j].add_assign(&x.mul(&b[j]));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
enum FactorKind<W> {
    /// The kernel of one oriented edge.
    Leaf { edge: usize },
    /// A node label summed out of the product of its children.
    /// The product of the children before summation is kept when small.
    Elim { var: usize, children: Vec<usize>, union: Vec<usize>, joint: Option<Vec<Poly<W>>> },
}

#[derive(Debug, Clone)]
struct Factor<W> {
    kind: FactorKind<W>,
    scope: Vec<usize>,
    table: Vec<Poly<W>>,
}

/// Weight tables of one scheme.
#[derive(Debug, Clone)]
pub struct SchemeTable<W> {
    pub scheme: Scheme,
    /// Coefficients of `Σ_k H_s(k) z^k` up to the truncation degree.
    pub generating: Vec<W>,
    /// Largest absolute node label kept for this scheme.
    pub l_max: usize,
    factors: Vec<Factor<W>>,
    top: Vec<usize>,
}

/// A drawn point of the structure distribution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StructureVector {
    pub scheme: Scheme,
    /// Forest size per scheme half-edge.
    pub m: Vec<usize>,
    /// Chain length per scheme half-edge.
    pub sigma: Vec<usize>,
    /// Label per scheme vertex, zero at the root origin.
    pub l: Vec<i64>,
    /// Root offset inside the root forest.
    pub u: usize,
}

/// All weight tables for one `(g, n)`.
#[derive(Debug, Clone)]
pub struct WeightTable<W> {
    pub genus: usize,
    pub n: usize,
    /// Largest `k = Σ_{Ě} σ` kept.
    pub k_max: usize,
    /// Largest absolute node label kept.
    pub l_max: usize,
    pub schemes: Vec<SchemeTable<W>>,
    /// `(scheme index, k, weight)` for every nonzero top-level weight.
    pub top: Vec<(usize, usize, W)>,
    fact: Vec<W>,
    kernels: Kernels<W>,
}

#[derive(Debug, Clone)]
struct Kernels<W> {
    l_max: usize,
    /// `Σ_{σ ≥ 1} N(σ, d) z^σ` indexed by `d + 2 l_max`.
    plain: Vec<Poly<W>>,
    /// `Σ_{σ ≥ 1} σ N(σ, d) z^σ` indexed by `d + 2 l_max`.
    marked: Vec<Poly<W>>,
}

impl<W: Weight> Kernels<W> {
    fn build(k_max: usize, l_max: usize) -> Self {
        let rows = W::motzkin_rows(k_max);
        let dmax = 2 * l_max as i64;
        let mut plain = Vec::new();
        let mut marked = Vec::new();
        for d in -dmax..=dmax {
            let mut p = vec![W::nil(); k_max + 1];
            let mut q = vec![W::nil(); k_max + 1];
            for s in 1..=k_max {
                if d.unsigned_abs() as usize <= s {
                    p[s] = rows[s][(d + s as i64) as usize].clone();
                    q[s] = p[s].mul(&W::from_u64(s as u64));
                }
            }
            plain.push(p);
            marked.push(q);
        }
        Kernels { l_max, plain, marked }
    }

    fn get(&self, d: i64, is_root: bool) -> &Poly<W> {
        let i = (d + 2 * self.l_max as i64) as usize;
        if is_root {
            &self.marked[i]
        } else {
            &self.plain[i]
        }
    }
}

fn schemes_of_genus(genus: usize) -> Result<Arc<Vec<Scheme>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Scheme>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("cache lock").get(&genus) {
        return Ok(s.clone());
    }
    let list = Arc::new(enumerate_schemes(genus, false)?);
    cache.lock().expect("cache lock").insert(genus, list.clone());
    Ok(list)
}

/// One step of variable elimination: `var` is summed out of the product of
/// the factors `children`, whose scopes cover `union`; the result has scope
/// `scope`.
#[derive(Debug, Clone)]
struct EliminationStep {
    var: usize,
    children: Vec<usize>,
    union: Vec<usize>,
    scope: Vec<usize>,
}

/// Leaf scopes (one per oriented edge, in orientation order) and the
/// elimination steps of a scheme, minimum neighborhood first.
fn elimination_plan(scheme: &Scheme) -> (Vec<Vec<usize>>, Vec<EliminationStep>, Vec<usize>) {
    let root = scheme.root_vertex();
    let mut scopes: Vec<Vec<usize>> = scheme
        .orientation()
        .into_iter()
        .map(|e| {
            let mut scope: Vec<usize> = [scheme.origin(e), scheme.target(e)].into_iter().filter(|&v| v != root).collect();
            scope.sort_unstable();
            scope.dedup();
            scope
        })
        .collect();
    let leaves = scopes.clone();
    let mut active: Vec<usize> = (0..scopes.len()).collect();
    let mut vars: Vec<usize> = (0..scheme.vertex_count()).filter(|&v| v != root).collect();
    let mut steps = Vec::new();
    let union_of = |v: usize, scopes: &[Vec<usize>], active: &[usize]| -> Vec<usize> {
        let mut u: Vec<usize> = active.iter().filter(|&&f| scopes[f].contains(&v)).flat_map(|&f| scopes[f].clone()).collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    while !vars.is_empty() {
        let (pos, var) = vars
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| (union_of(v, &scopes, &active).len(), v))
            .map(|(i, &v)| (i, v))
            .expect("vars is nonempty");
        vars.remove(pos);
        let union = union_of(var, &scopes, &active);
        let children: Vec<usize> = active.iter().copied().filter(|&f| scopes[f].contains(&var)).collect();
        active.retain(|f| !children.contains(f));
        let scope: Vec<usize> = union.iter().copied().filter(|&v| v != var).collect();
        scopes.push(scope.clone());
        active.push(scopes.len() - 1);
        steps.push(EliminationStep { var, children, union, scope });
    }
    (leaves, steps, active)
}

/// Label bound actually used for a scheme: a node label is a sum of
/// displacements along a path of at most V − 1 edges, and every other edge
/// takes at least one unit of length.
fn scheme_l_max(scheme: &Scheme, k_max: usize, l_max: usize) -> usize {
    l_max.min((k_max + scheme.vertex_count()).saturating_sub(1 + scheme.n_edges()))
}

/// Numbers of polynomial coefficients kept after building the tables of one
/// scheme and held at the peak of the build.
fn scheme_table_size(scheme: &Scheme, k_max: usize, l_max: usize) -> (usize, usize) {
    let radix = 2 * scheme_l_max(scheme, k_max, l_max) + 1;
    let (_, steps, _) = elimination_plan(scheme);
    let coeffs = k_max + 1;
    let mut kept = 0usize;
    let mut peak = 0usize;
    for step in &steps {
        let joint = radix.saturating_pow(step.union.len() as u32).saturating_mul(coeffs);
        let table = radix.saturating_pow(step.scope.len() as u32).saturating_mul(coeffs);
        peak = peak.max(kept.saturating_add(joint).saturating_add(table));
        kept = kept.saturating_add(table);
        if joint <= JOINT_LIMIT {
            kept = kept.saturating_add(joint);
        }
    }
    (kept, peak.max(kept))
}

impl<W: Weight> SchemeTable<W> {
    fn build(scheme: &Scheme, k_max: usize, l_max: usize, kernels: &Kernels<W>) -> Self {
        let l_max = scheme_l_max(scheme, k_max, l_max);
        let radix = 2 * l_max + 1;
        let (leaves, steps, active) = elimination_plan(scheme);
        let mut factors: Vec<Factor<W>> = scheme
            .orientation()
            .into_iter()
            .zip(leaves)
            .map(|(e, scope)| Factor { kind: FactorKind::Leaf { edge: e }, scope, table: Vec::new() })
            .collect();
        let mut labels = vec![0i64; scheme.vertex_count()];
        for EliminationStep { var, children, union, scope } in steps {
            let size = radix.pow(union.len() as u32);
            let mut joint = Vec::with_capacity(size);
            for idx in 0..size {
                assign(&union, idx, radix, l_max, &mut labels);
                let polys: Vec<&Poly<W>> = children.iter().map(|&c| eval(scheme, &factors[c], &labels, radix, l_max, kernels)).collect();
                let valuation: usize = polys.iter().map(|p| p.iter().position(|x| !x.is_nil()).unwrap_or(k_max + 1)).sum();
                if valuation > k_max {
                    joint.push(vec![W::nil(); k_max + 1]);
                    continue;
                }
                let mut prod: Option<Poly<W>> = None;
                for &c in &children {
                    let p = eval(scheme, &factors[c], &labels, radix, l_max, kernels);
                    prod = Some(match prod {
                        None => p.clone(),
                        Some(acc) => mul_trunc(&acc, p, k_max),
                    });
                }
                joint.push(prod.expect("every variable has a factor"));
            }
            let mut table = vec![vec![W::nil(); k_max + 1]; radix.pow(scope.len() as u32)];
            for (idx, poly) in joint.iter().enumerate() {
                assign(&union, idx, radix, l_max, &mut labels);
                let t = index_of(&scope, &labels, radix, l_max);
                for (acc, x) in table[t].iter_mut().zip(poly) {
                    acc.add_assign(x);
                }
            }
            let joint = (size * (k_max + 1) <= JOINT_LIMIT).then_some(joint);
            factors.push(Factor { kind: FactorKind::Elim { var, children, union, joint }, scope, table });
        }
        labels.iter_mut().for_each(|l| *l = 0);
        let mut generating: Option<Poly<W>> = None;
        for &f in &active {
            let p = eval(scheme, &factors[f], &labels, radix, l_max, kernels);
            generating = Some(match generating {
                None => p.clone(),
                Some(acc) => mul_trunc(&acc, p, k_max),
            });
        }
        SchemeTable { scheme: scheme.clone(), generating: generating.expect("schemes have edges"), l_max, factors, top: active }
    }
}

fn assign(vars: &[usize], mut idx: usize, radix: usize, l_max: usize, labels: &mut [i64]) {
    for &v in vars {
        labels[v] = (idx % radix) as i64 - l_max as i64;
        idx /= radix;
    }
}

fn index_of(vars: &[usize], labels: &[i64], radix: usize, l_max: usize) -> usize {
    vars.iter().rev().fold(0, |acc, &v| acc * radix + (labels[v] + l_max as i64) as usize)
}

fn eval<'a, W: Weight>(
    scheme: &Scheme,
    f: &'a Factor<W>,
    labels: &[i64],
    radix: usize,
    l_max: usize,
    kernels: &'a Kernels<W>,
) -> &'a Poly<W> {
    match &f.kind {
        FactorKind::Leaf { edge } => {
            let d = labels[scheme.target(*edge)] - labels[scheme.origin(*edge)];
            kernels.get(d, *edge == 0)
        }
        FactorKind::Elim { .. } => &f.table[index_of(&f.scope, labels, radix, l_max)],
    }
}

/// Splits `budget` among polynomials with probability proportional to the
/// product of their coefficients.
fn split_budget<W: Weight, C: Chooser + ?Sized>(polys: &[&Poly<W>], budget: usize, chooser: &mut C) -> Vec<usize> {
    let r = polys.len();
    let mut suffix: Vec<Poly<W>> = vec![Vec::new(); r];
    let mut one = vec![W::nil(); budget + 1];
    one[0] = W::from_u64(1);
    let mut acc = one;
    for i in (1..r).rev() {
        acc = mul_trunc(&acc, polys[i], budget);
        suffix[i] = acc.clone();
    }
    let mut out = Vec::with_capacity(r);
    let mut left = budget;
    for i in 0..r - 1 {
        let weights: Vec<W> = (0..=left)
            .map(|b| {
                let x = polys[i].get(b).cloned().unwrap_or_else(W::nil);
                x.mul(&suffix[i + 1][left - b])
            })
            .collect();
        let b = W::pick(chooser, &weights);
        out.push(b);
        left -= b;
    }
    out.push(left);
    out
}

impl<W: Weight> WeightTable<W> {
    /// Builds the tables for genus `genus` and size `n`, keeping `k ≤ k_max`
    /// and node labels in `[−l_max, l_max]`.
    pub fn build_truncated(genus: usize, n: usize, k_max: usize, l_max: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidGenus(0));
        }
        let schemes = schemes_of_genus(genus)?;
        let (mut kept, mut transient) = (0usize, 0usize);
        for s in schemes.iter().filter(|s| s.n_edges() <= k_max) {
            let (k, p) = scheme_table_size(s, k_max, l_max);
            kept = kept.saturating_add(k);
            transient = transient.max(p - k);
        }
        let bytes = kept.saturating_add(transient).saturating_mul(W::COEFFICIENT_BYTES);
        if bytes > TABLE_BYTES_LIMIT {
            return Err(Error::TableTooLarge { genus, n, bytes, limit: TABLE_BYTES_LIMIT });
        }
        let kernels = Kernels::build(k_max, l_max);
        let fact = W::factorials(2 * n + 1);
        let tables: Vec<SchemeTable<W>> =
            schemes.iter().filter(|s| s.n_edges() <= k_max).map(|s| SchemeTable::build(s, k_max, l_max, &kernels)).collect();
        let mut top = Vec::new();
        for (i, t) in tables.iter().enumerate() {
            for k in 0..=k_max.min(n) {
                if !t.generating[k].is_nil() {
                    top.push((i, k, W::size_weight(&fact, n, k).mul(&t.generating[k])));
                }
            }
        }
        Ok(WeightTable { genus, n, k_max, l_max, schemes: tables, top, fact, kernels })
    }

    /// Sum of all top-level weights.
    pub fn total(&self) -> W {
        let mut acc = W::nil();
        for (_, _, w) in &self.top {
            acc.add_assign(w);
        }
        acc
    }

    /// Draws a structure vector with probability proportional to its weight.
    pub fn sample_structure<C: Chooser + ?Sized>(&self, chooser: &mut C) -> Result<StructureVector> {
        if self.top.is_empty() {
            return Err(Error::EmptySupport { genus: self.genus, n: self.n });
        }
        let weights: Vec<W> = self.top.iter().map(|(_, _, w)| w.clone()).collect();
        let (si, k, _) = &self.top[W::pick(chooser, &weights)];
        let table = &self.schemes[*si];
        let scheme = &table.scheme;
        let radix = 2 * table.l_max + 1;
        let mut labels = vec![0i64; scheme.vertex_count()];
        let mut sigma = vec![0usize; scheme.n_half_edges()];
        let tops: Vec<&Poly<W>> =
            table.top.iter().map(|&f| eval(scheme, &table.factors[f], &labels, radix, table.l_max, &self.kernels)).collect();
        let budgets = split_budget(&tops, *k, chooser);
        for (&f, &b) in table.top.iter().zip(&budgets) {
            self.sample_factor(table, f, b, &mut labels, &mut sigma, chooser);
        }
        for e in scheme.orientation() {
            sigma[scheme.reverse(e)] = sigma[e];
        }
        // Forest sizes, the root half-edge first.
        let total_len: usize = sigma.iter().sum();
        let mut r = self.n - k;
        let mut rest = total_len;
        let mut m = vec![0usize; scheme.n_half_edges()];
        for e in 0..scheme.n_half_edges() {
            rest -= sigma[e];
            let w = W::forest_weights(&self.fact, sigma[e], rest, r, e == 0);
            m[e] = W::pick(chooser, &w);
            r -= m[e];
        }
        let u = chooser.below((2 * m[0] + sigma[0]) as u64) as usize;
        Ok(StructureVector { scheme: scheme.clone(), m, sigma, l: labels, u })
    }

    fn sample_factor<C: Chooser + ?Sized>(
        &self,
        table: &SchemeTable<W>,
        f: usize,
        budget: usize,
        labels: &mut [i64],
        sigma: &mut [usize],
        chooser: &mut C,
    ) {
        let l_max = table.l_max;
        let radix = 2 * l_max + 1;
        let scheme = &table.scheme;
        match &table.factors[f].kind {
            FactorKind::Leaf { edge } => {
                debug_assert!(budget >= 1);
                sigma[*edge] = budget;
            }
            FactorKind::Elim { var, children, union, joint } => {
                let weights: Vec<W> = (-(l_max as i64)..=l_max as i64)
                    .map(|x| {
                        labels[*var] = x;
                        match joint {
                            Some(j) => j[index_of(union, labels, radix, l_max)][budget].clone(),
                            None => {
                                let mut acc = vec![W::nil(); budget + 1];
                                acc[0] = W::from_u64(1);
                                for &c in children {
                                    acc = mul_trunc(&acc, eval(scheme, &table.factors[c], labels, radix, l_max, &self.kernels), budget);
                                }
                                acc[budget].clone()
                            }
                        }
                    })
                    .collect();
                labels[*var] = W::pick(chooser, &weights) as i64 - l_max as i64;
                let polys: Vec<&Poly<W>> =
                    children.iter().map(|&c| eval(scheme, &table.factors[c], labels, radix, l_max, &self.kernels)).collect();
                let budgets = split_budget(&polys, budget, chooser);
                for (&c, &b) in children.iter().zip(&budgets) {
                    self.sample_factor(table, c, b, labels, sigma, chooser);
                }
            }
        }
    }

    /// Draws a well-labeled g-tree: a structure vector, then uniform bridges
    /// and forests, then recomposition.
    pub fn sample_gtree<C: Chooser + ?Sized>(&self, chooser: &mut C) -> Result<WellLabeledGTree> {
        let sv = self.sample_structure(chooser)?;
        gtree_from_structure(&sv, chooser)
    }
}

/// Completes a structure vector into a well-labeled g-tree with uniform
/// bridges and forests.
pub fn gtree_from_structure<C: Chooser + ?Sized>(sv: &StructureVector, chooser: &mut C) -> Result<WellLabeledGTree> {
    let s = &sv.scheme;
    let k = s.n_half_edges();
    let mut bridges = vec![None; k];
    for e in s.orientation() {
        let target = sv.l[s.target(e)] - sv.l[s.origin(e)];
        let b = sample_motzkin_bridge(sv.sigma[e], target, chooser)?;
        bridges[s.reverse(e)] = Some(b.reversed());
        bridges[e] = Some(b);
    }
    let mut forests = Vec::with_capacity(k);
    for e in 0..k {
        forests.push(sample_well_labeled_forest(sv.sigma[e], sv.m[e], chooser)?);
    }
    let quad = DecompositionQuadruple {
        scheme: s.clone(),
        bridges: bridges.into_iter().map(|b| b.expect("every half-edge has a bridge")).collect(),
        forests,
        root_offset: sv.u,
    };
    recompose(&quad)
}

/// Truncation of `k` in float mode.
pub fn float_k_max(n: usize) -> usize {
    n.min((50.0 * n as f64).sqrt().ceil() as usize)
}

/// Truncation of node labels in float mode.
pub fn float_l_max(k_max: usize) -> usize {
    k_max.min((14.0 * (k_max as f64).sqrt()).ceil() as usize)
}

/// Exact tables for `(genus, n)`.
pub fn build_exact(genus: usize, n: usize) -> Result<WeightTable<BigUint>> {
    build_exact_with_cap(genus, n, DEFAULT_EXACT_CAP)
}

/// Exact tables with an explicit size cap.
pub fn build_exact_with_cap(genus: usize, n: usize, cap: usize) -> Result<WeightTable<BigUint>> {
    if n > cap {
        return Err(Error::ExactModeTooLarge { n, cap });
    }
    WeightTable::build_truncated(genus, n, n, n)
}

/// Float tables for `(genus, n)`.
pub fn build_float(genus: usize, n: usize) -> Result<WeightTable<f64>> {
    if n > FLOAT_CAP {
        return Err(Error::FloatModePrecisionLoss { n, cap: FLOAT_CAP });
    }
    let k = float_k_max(n);
    WeightTable::build_truncated(genus, n, k, float_l_max(k))
}

/// The number of well-labeled g-trees with `n` edges.
pub fn count_gtrees(genus: usize, n: usize, mode: Mode) -> Result<GTreeCount> {
    match mode {
        Mode::Exact => Ok(GTreeCount::Exact(build_exact(genus, n)?.total())),
        Mode::Float => Ok(GTreeCount::Scaled(build_float(genus, n)?.total())),
    }
}

/// Exact `|T_n|` for every `n` in `1..=n_max`, from one table build.
pub fn count_gtrees_upto(genus: usize, n_max: usize) -> Result<Vec<BigUint>> {
    let t = build_exact(genus, n_max)?;
    let fact = BigUint::factorials(2 * n_max + 1);
    Ok((1..=n_max)
        .map(|n| {
            let mut acc = BigUint::zero();
            for s in &t.schemes {
                for k in 0..=n {
                    if !Zero::is_zero(&s.generating[k]) {
                        acc += BigUint::size_weight(&fact, n, k) * &s.generating[k];
                    }
                }
            }
            acc
        })
        .collect())
}

/// The number of rooted bipartite quadrangulations of genus `genus` with `n`
/// faces, `2|T_n| / (n + 2 − 2g)`.
pub fn count_quadrangulations(genus: usize, n: usize) -> Result<BigUint> {
    if n + 2 <= 2 * genus {
        return Ok(BigUint::zero());
    }
    let GTreeCount::Exact(t) = count_gtrees(genus, n, Mode::Exact)? else { unreachable!("exact mode") };
    quadrangulations_from_gtrees(genus, n, &t)
}

/// `2|T_n| / (n + 2 − 2g)`, checking integrality.
pub fn quadrangulations_from_gtrees(genus: usize, n: usize, t: &BigUint) -> Result<BigUint> {
    if n + 2 <= 2 * genus {
        return if Zero::is_zero(t) { Ok(BigUint::zero()) } else { Err(Error::NonIntegerResult(format!("{t} trees with no vertices"))) };
    }
    let v = BigUint::from(n + 2 - 2 * genus);
    let twice = t * 2u32;
    if !Zero::is_zero(&(&twice % &v)) {
        return Err(Error::NonIntegerResult(format!("2·{t} is not divisible by {v}")));
    }
    Ok(twice / v)
}

/// Either kind of table, chosen by mode.
#[derive(Debug, Clone)]
pub enum Sampler {
    Exact(WeightTable<BigUint>),
    Float(WeightTable<f64>),
}

impl Sampler {
    /// Tables for `(genus, n)` in the given mode.
    pub fn new(genus: usize, n: usize, mode: Mode) -> Result<Sampler> {
        match mode {
            Mode::Exact => Ok(Sampler::Exact(build_exact(genus, n)?)),
            Mode::Float => Ok(Sampler::Float(build_float(genus, n)?)),
        }
    }

    /// The arithmetic mode.
    pub fn mode(&self) -> Mode {
        match self {
            Sampler::Exact(_) => Mode::Exact,
            Sampler::Float(_) => Mode::Float,
        }
    }

    /// See [`WeightTable::sample_structure`].
    pub fn sample_structure<C: Chooser + ?Sized>(&self, chooser: &mut C) -> Result<StructureVector> {
        match self {
            Sampler::Exact(t) => t.sample_structure(chooser),
            Sampler::Float(t) => t.sample_structure(chooser),
        }
    }

    /// See [`WeightTable::sample_gtree`].
    pub fn sample_gtree<C: Chooser + ?Sized>(&self, chooser: &mut C) -> Result<WellLabeledGTree> {
        let sv = self.sample_structure(chooser)?;
        gtree_from_structure(&sv, chooser)
    }
}

/// A structure vector drawn with the mode chosen by [`Mode::auto`].
pub fn sample_structure<C: Chooser + ?Sized>(genus: usize, n: usize, chooser: &mut C) -> Result<StructureVector> {
    Sampler::new(genus, n, Mode::auto(n))?.sample_structure(chooser)
}

/// A uniform well-labeled g-tree, with the mode chosen by [`Mode::auto`].
pub fn sample_gtree<C: Chooser + ?Sized>(genus: usize, n: usize, chooser: &mut C) -> Result<WellLabeledGTree> {
    Sampler::new(genus, n, Mode::auto(n))?.sample_gtree(chooser)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gtree::enumerate_well_labeled_gtrees;
    use crate::random::{exhaustive_pushforward, stream_chooser};
    use crate::scheme::decompose;
    use num_rational::BigRational;
    use std::collections::BTreeMap;

    fn exact(g: usize, n: usize) -> BigUint {
        match count_gtrees(g, n, Mode::Exact).unwrap() {
            GTreeCount::Exact(c) => c,
            _ => unreachable!(),
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(exact(1, 1), BigUint::zero());
        assert_eq!(exact(1, 2), BigUint::from(1u32));
        assert_eq!(exact(1, 3), BigUint::from(30u32));
        for n in 2..=5 {
            assert_eq!(exact(1, n), BigUint::from(enumerate_well_labeled_gtrees(1, n).unwrap().len()));
        }
        assert_eq!(count_quadrangulations(1, 2).unwrap(), BigUint::from(1u32));
        assert_eq!(count_quadrangulations(1, 3).unwrap(), BigUint::from(20u32));
        assert_eq!(count_quadrangulations(1, 1).unwrap(), BigUint::zero());
    }

    #[test]
    fn torus_and_double_torus_map_counts() {
        // Rooted maps of genus 1 with n edges: 1, 20, 307, 4280, 56914.
        let torus = [1u64, 20, 307, 4280, 56914];
        for (i, &q) in torus.iter().enumerate() {
            assert_eq!(count_quadrangulations(1, i + 2).unwrap(), BigUint::from(q));
        }
        assert_eq!(count_quadrangulations(2, 4).unwrap(), BigUint::from(21u32));
        for n in 4..=6 {
            assert_eq!(exact(2, n), BigUint::from(enumerate_well_labeled_gtrees(2, n).unwrap().len()), "n = {n}");
        }
        let upto = count_gtrees_upto(1, 6).unwrap();
        assert_eq!(upto[5], exact(1, 6));
    }

    #[test]
    fn float_agrees_with_exact() {
        for n in [5usize, 40, 150] {
            let e = GTreeCount::Exact(exact(1, n)).scaled(n);
            let GTreeCount::Scaled(f) = count_gtrees(1, n, Mode::Float).unwrap() else { unreachable!() };
            assert!(((f - e) / e).abs() < 1e-9, "n={n}: {f} vs {e}");
        }
        let e = GTreeCount::Exact(exact(2, 10)).scaled(10);
        let GTreeCount::Scaled(f) = count_gtrees(2, 10, Mode::Float).unwrap() else { unreachable!() };
        assert!(((f - e) / e).abs() < 1e-9);
    }

    #[test]
    fn sampler_is_exactly_uniform_at_three_edges() {
        let table = build_exact(1, 3).unwrap();
        let law = exhaustive_pushforward(|c| table.sample_gtree(c).unwrap());
        assert_eq!(law.len(), 30);
        let p = BigRational::new(1.into(), 30.into());
        assert!(law.values().all(|q| *q == p));
    }

    #[test]
    fn structure_marginal_matches_enumeration() {
        for n in [3usize, 4] {
            let table = build_exact(1, n).unwrap();
            let law = exhaustive_pushforward(|c| table.sample_structure(c).unwrap());
            let all = enumerate_well_labeled_gtrees(1, n).unwrap();
            let mut freq: BTreeMap<StructureVector, usize> = BTreeMap::new();
            for t in &all {
                let q = decompose(t).unwrap();
                let k = q.scheme.n_half_edges();
                let sv = StructureVector {
                    m: (0..k).map(|e| q.m(e)).collect(),
                    sigma: (0..k).map(|e| q.sigma(e)).collect(),
                    l: q.vertex_labels().unwrap(),
                    u: q.root_offset,
                    scheme: q.scheme,
                };
                *freq.entry(sv).or_default() += 1;
            }
            // Each structure carries the number of trees sharing it.
            assert_eq!(law.len(), freq.len());
            for (sv, c) in freq {
                assert_eq!(law[&sv], BigRational::new(c.into(), all.len().into()), "{sv:?}");
            }
        }
    }

    #[test]
    fn samples_are_valid_and_reproducible() {
        let s = Sampler::new(1, 1000, Mode::Exact).unwrap_or_else(|_| Sampler::new(1, 1000, Mode::Float).unwrap());
        let a = s.sample_gtree(&mut stream_chooser(3, 0)).unwrap();
        let b = s.sample_gtree(&mut stream_chooser(3, 0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_edges(), 1000);
        assert_eq!(a.genus(), 1);
        let g2 = sample_gtree(2, 10, &mut stream_chooser(4, 0)).unwrap();
        assert_eq!(g2.genus(), 2);
        assert_eq!(g2.n_edges(), 10);
        assert!(matches!(build_exact(2, 40), Err(Error::TableTooLarge { .. })));
        assert!(matches!(build_float(1, FLOAT_CAP + 1), Err(Error::FloatModePrecisionLoss { .. })));
        assert!(matches!(sample_gtree(1, 1, &mut stream_chooser(1, 0)), Err(Error::EmptySupport { .. })));
        assert!(matches!(build_exact(1, DEFAULT_EXACT_CAP + 1), Err(Error::ExactModeTooLarge { .. })));
    }
}
