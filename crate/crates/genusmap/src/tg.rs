//! The constant `t_g` of the asymptotic count of bipartite quadrangulations
//! of genus `g`, `|Q_n| ∼ t_g n^{5(g−1)/2} 12^n`, in closed form over
//! orderings of dominant schemes, with independent numerical checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::stream_rng;
use crate::sampler::{count_gtrees_upto, GTreeCount};
use crate::scheme::{enumerate_schemes, Scheme};

/// A bijection from `0..V` onto the vertices of a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    lambda: Vec<usize>,
    position: Vec<usize>,
}

impl Ordering {
    /// Validates `lambda` as a permutation of `0..lambda.len()`.
    pub fn new(lambda: Vec<usize>) -> Result<Ordering> {
        let mut position = vec![usize::MAX; lambda.len()];
        for (i, &v) in lambda.iter().enumerate() {
            if v >= lambda.len() || position[v] != usize::MAX {
                return Err(Error::InvalidOrdering(format!("{lambda:?} is not a bijection")));
            }
            position[v] = i;
        }
        Ok(Ordering { lambda, position })
    }

    /// The vertex at rank `i`.
    pub fn vertex(&self, i: usize) -> usize {
        self.lambda[i]
    }

    /// The rank of vertex `v`.
    pub fn rank(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }
}

/// `|{(a, b) : rank(a) < k ≤ rank(b)}|` over directed edges `(a, b)`.
pub fn crossing_count(half_edges: &[(usize, usize)], lambda: &Ordering, k: usize) -> usize {
    half_edges.iter().filter(|&&(a, b)| lambda.rank(a) < k && k <= lambda.rank(b)).count()
}

/// Directed edges `(e⁻, e⁺)` of every half-edge of a scheme.
pub fn scheme_half_edges(scheme: &Scheme) -> Vec<(usize, usize)> {
    (0..scheme.n_half_edges()).map(|e| (scheme.origin(e), scheme.target(e))).collect()
}

/// The number of half-edges of a dominant scheme going up across the cut
/// between ranks `k − 1` and `k` of the ordering.
pub fn d_lambda_k(scheme: &Scheme, lambda: &Ordering, k: usize) -> Result<usize> {
    if !scheme.is_dominant() {
        return Err(Error::NotDominant);
    }
    let v = scheme.vertex_count();
    if lambda.len() != v {
        return Err(Error::InvalidOrdering(format!("ordering of {} vertices for a scheme with {v}", lambda.len())));
    }
    if k == 0 || k >= v {
        return Err(Error::IndexOutOfRange { index: k, max: v - 1 });
    }
    Ok(crossing_count(&scheme_half_edges(scheme), lambda, k))
}

/// `Π_{k=1}^{V−1} d(λ, k)` computed from the label coefficients: the
/// coefficient of a vertex in `Σ |l^e|` is twice its number of lower
/// neighbours minus its degree, and `d(λ, k)` is the sum of the coefficients
/// of ranks `≥ k`.
fn product_by_coefficients(neighbours: &[Vec<usize>], position: &[usize], order: &[usize]) -> u64 {
    let mut suffix = 0i64;
    let mut product = 1u64;
    for k in (1..order.len()).rev() {
        let v = order[k];
        let below = neighbours[v].iter().filter(|&&w| position[w] < k).count() as i64;
        suffix += 2 * below - neighbours[v].len() as i64;
        product *= suffix as u64;
    }
    product
}

/// `Σ_λ Π_k 1/d(λ, k)` for one scheme, by products and multiplicities.
fn ordering_products(scheme: &Scheme) -> BTreeMap<u64, u64> {
    let v = scheme.vertex_count();
    let mut neighbours = vec![Vec::new(); v];
    for e in 0..scheme.n_half_edges() {
        neighbours[scheme.origin(e)].push(scheme.target(e));
    }
    let mut order: Vec<usize> = (0..v).collect();
    let mut position = order.clone();
    let mut out = BTreeMap::new();
    loop {
        for (i, &x) in order.iter().enumerate() {
            position[x] = i;
        }
        *out.entry(product_by_coefficients(&neighbours, &position, &order)).or_insert(0) += 1;
        if !next_permutation(&mut order) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `Σ_{s} Σ_{λ} Π_{i=1}^{4g−3} 1/d(λ, i)` over rooted dominant schemes.
pub fn ordering_sum(genus: usize) -> Result<BigRational> {
    if genus == 0 {
        return Err(Error::InvalidGenus(0));
    }
    let schemes = enumerate_schemes(genus, true)?;
    let parts: Vec<BTreeMap<u64, u64>> = schemes.par_iter().map(ordering_products).collect();
    let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
    for part in parts {
        for (p, c) in part {
            *merged.entry(p).or_insert(0) += c;
        }
    }
    let mut sum = BigRational::zero();
    for (p, c) in merged {
        sum += BigRational::new(BigInt::from(c), BigInt::from(p));
    }
    Ok(sum)
}

/// Rational factor of the prefactor and whether it is divided by `√π`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prefactor {
    #[serde(with = "rational_string")]
    pub rational: BigRational,
    pub over_sqrt_pi: bool,
}

/// `3^g / (2^{11g−7} (6g−3) Γ((5g−3)/2))`.
pub fn prefactor(genus: usize) -> Result<Prefactor> {
    if genus == 0 {
        return Err(Error::InvalidGenus(0));
    }
    let g = genus as u32;
    let fact = |k: u32| -> BigInt { (1..=k).map(BigInt::from).product() };
    let mut r = BigRational::new(BigInt::from(3u32).pow(g), BigInt::one());
    let two_pow = 11 * g as i64 - 7;
    let two = BigRational::from_integer(BigInt::from(2u32));
    r = if two_pow >= 0 { r / two.pow(two_pow as i32) } else { r * two.pow((-two_pow) as i32) };
    r /= BigRational::from_integer(BigInt::from(6 * g - 3));
    // Γ((5g−3)/2): an integer factorial for odd g, a half-integer value for even g.
    if (5 * g - 3) % 2 == 0 {
        let k = (5 * g - 3) / 2;
        r /= BigRational::from_integer(fact(k - 1));
        Ok(Prefactor { rational: r, over_sqrt_pi: false })
    } else {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!), with k + 1/2 = (5g − 3)/2.
        let k = (5 * g - 4) / 2;
        r *= BigRational::new(BigInt::from(4u32).pow(k) * fact(k), fact(2 * k));
        Ok(Prefactor { rational: r, over_sqrt_pi: true })
    }
}

/// `t_g` in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TgResult {
    pub genus: usize,
    #[serde(with = "rational_string")]
    pub rational_part: BigRational,
    pub prefactor: Prefactor,
    /// Decimal expansion truncated to the requested precision.
    pub t_g: String,
    pub precision_bits: u32,
}

impl TgResult {
    /// The value as a float.
    pub fn value(&self) -> f64 {
        self.t_g.parse().expect("decimal string")
    }
}

/// `π · 2^bits`, truncated, by Machin's formula.
pub fn pi_fixed(bits: u32) -> BigInt {
    let guard = 32;
    let one = BigInt::one() << (bits + guard);
    let arctan_inv = |x: u32| -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut term = &one / BigInt::from(x);
        let mut sum = term.clone();
        let mut k = 1u32;
        while !term.is_zero() {
            term = -term / &x2;
            sum += &term / BigInt::from(2 * k + 1);
            k += 1;
        }
        sum
    };
    (BigInt::from(16) * arctan_inv(5) - BigInt::from(4) * arctan_inv(239)) >> guard
}

/// Floor of `x · 2^bits` as a decimal string with `digits` fractional digits.
fn fixed_to_decimal(x: &BigInt, bits: u32, digits: u32) -> String {
    let scaled: BigInt = (x * BigInt::from(10u32).pow(digits)) >> bits;
    let s = scaled.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (int, frac) = s.split_at(s.len() - digits as usize);
    format!("{}{}.{}", if scaled.is_negative() { "-" } else { "" }, int, frac)
}

/// `t_g` from the sum over orderings of dominant schemes, evaluated with
/// `precision` bits.
pub fn tg_closed_form(genus: usize, precision: u32) -> Result<TgResult> {
    let rational_part = ordering_sum(genus)?;
    let pre = prefactor(genus)?;
    let q = &pre.rational * &rational_part;
    let work = precision + 64;
    let num = q.numer() << (2 * work);
    let value = if pre.over_sqrt_pi {
        let sqrt_pi = (pi_fixed(work) << work).sqrt();
        num / (q.denom() * sqrt_pi)
    } else {
        (q.numer() << work) / q.denom()
    };
    let digits = (precision as f64 * std::f64::consts::LOG10_2).floor() as u32;
    Ok(TgResult { genus, rational_part, prefactor: pre, t_g: fixed_to_decimal(&value, work, digits), precision_bits: precision })
}

/// Density of a centered Gaussian with variance `a`.
pub fn p(a: f64, x: f64) -> f64 {
    (-x * x / (2.0 * a)).exp() / (2.0 * PI * a).sqrt()
}

/// `−∂_x p_a(x)`.
pub fn minus_dp(a: f64, x: f64) -> f64 {
    x / a * p(a, x)
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature of `f` on `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut stack = vec![(a, b, tol, 0u32)];
    let mut total = 0.0;
    let mut worst = 0.0f64;
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (v, err) = kronrod(&f, lo, hi);
        if err <= t || depth >= 50 {
            if err > t {
                worst = worst.max(err);
            }
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, t / 2.0, depth + 1));
            stack.push((lo, mid, t / 2.0, depth + 1));
        }
    }
    if worst > tol {
        return Err(Error::QuadratureNonconvergence(worst));
    }
    Ok(total)
}

/// `∫₀ᵗ p_{t−m}(a) (−p'_m(b)) dm`.
pub fn lemag_integral(a: f64, b: f64, t: f64) -> Result<f64> {
    integrate(|m| if m <= 0.0 || m >= t { 0.0 } else { p(t - m, a) * minus_dp(m, b) }, 0.0, t, 1e-14)
}

/// `|∫₀ᵗ p_{t−m}(a)(−p'_m(b)) dm − p_t(a + b)|`, failing when it exceeds `tol`.
pub fn check_lemag(a: f64, b: f64, t: f64, tol: f64) -> Result<f64> {
    let r = (lemag_integral(a, b, t)? - p(t, a + b)).abs();
    if r > tol {
        return Err(Error::QuadratureNonconvergence(r));
    }
    Ok(r)
}

/// `p^{[n]}(0) = ∫₀^∞ y^{n−2}/(n−2)! p_1(y) dy` by quadrature, `n ≥ 2`.
pub fn p_bracket_zero_quadrature(n: usize) -> Result<f64> {
    let k = n.checked_sub(2).ok_or(Error::IndexOutOfRange { index: n, max: usize::MAX })?;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let upper = 12.0 + 2.0 * (k as f64).sqrt() * 3.0;
    integrate(|y| y.powi(k as i32) / fact * p(1.0, y), 0.0, upper, 1e-15)
}

/// `p^{[n]}(0)` from `p^{[2]}(0) = 1/2`, `p^{[3]}(0) = 1/√(2π)` and
/// `p^{[n]}(0) = p^{[n−2]}(0)/(n−2)`.
pub fn p_bracket_zero_recursive(n: usize) -> f64 {
    match n {
        0 | 1 => f64::NAN,
        2 => 0.5,
        3 => 1.0 / (2.0 * PI).sqrt(),
        _ => p_bracket_zero_recursive(n - 2) / (n - 2) as f64,
    }
}

/// `p^{[10g−4]}(0) = (2^{5g−2} (5g−3)!)^{−1}` as an exact rational.
pub fn p_bracket_closed_form(genus: usize) -> BigRational {
    let g = genus as u32;
    let fact: BigInt = (1..=5 * g - 3).map(BigInt::from).product();
    BigRational::new(BigInt::one(), (BigInt::one() << (5 * g - 2)) * fact)
}

/// Residual between the closed form of `p^{[10g−4]}(0)` and its quadrature.
pub fn check_p_bracket(genus: usize) -> Result<f64> {
    if genus == 0 {
        return Err(Error::InvalidGenus(0));
    }
    let closed = p_bracket_closed_form(genus).to_f64().expect("finite");
    Ok((p_bracket_zero_quadrature(10 * genus - 4)? - closed).abs())
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Samples per random stream in [`estimate_upsilon`].
pub const MC_CHUNK: u64 = 1 << 16;

struct SchemeGeometry {
    /// Oriented edge index of every half-edge.
    edge_of: Vec<usize>,
    /// Endpoints of every oriented edge.
    edges: Vec<(usize, usize)>,
    root_vertex: usize,
    vertex_count: usize,
}

impl SchemeGeometry {
    fn new(s: &Scheme) -> SchemeGeometry {
        let orient = s.orientation();
        let mut edge_of = vec![0; s.n_half_edges()];
        for (i, &e) in orient.iter().enumerate() {
            edge_of[e] = i;
            edge_of[s.reverse(e)] = i;
        }
        SchemeGeometry {
            edge_of,
            edges: orient.iter().map(|&e| (s.origin(e), s.target(e))).collect(),
            root_vertex: s.root_vertex(),
            vertex_count: s.vertex_count(),
        }
    }

    /// `∫ Π_e p_{σ_e}(l^{e⁺} − l^{e⁻}) dl` over the labels of the vertices
    /// other than the root vertex.
    fn label_integral(&self, sigma: &[f64]) -> f64 {
        let idx = |v: usize| {
            if v < self.root_vertex {
                Some(v)
            } else if v > self.root_vertex {
                Some(v - 1)
            } else {
                None
            }
        };
        let d = self.vertex_count - 1;
        let mut a = vec![vec![0.0; d]; d];
        let mut prod = 1.0;
        for (&(x, y), &s) in self.edges.iter().zip(sigma) {
            prod *= (2.0 * PI * s).sqrt();
            if x == y {
                continue;
            }
            let w = 1.0 / s;
            for (u, v) in [(x, y), (y, x)] {
                if let Some(i) = idx(u) {
                    a[i][i] += w;
                    if let Some(j) = idx(v) {
                        a[i][j] -= w;
                    }
                }
            }
        }
        (2.0 * PI).powf(d as f64 / 2.0) / determinant(a).sqrt() / prod
    }
}

fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).expect("nonempty");
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            let (pivot, rest) = a.split_at_mut(r);
            for (x, y) in rest[0][c..].iter_mut().zip(&pivot[c][c..]) {
                *x -= f * y;
            }
        }
    }
    det
}

fn ln_gamma_half_integer(x2: u32) -> f64 {
    // ln Γ(x2 / 2) for a positive integer x2.
    let mut v = if x2 % 2 == 0 { 0.0 } else { 0.5 * PI.ln() };
    let mut k = if x2 % 2 == 0 { 2 } else { 1 };
    while k < x2 {
        v += (k as f64 / 2.0).ln();
        k += 2;
    }
    v
}

/// Monte Carlo estimate of the normalisation constant `Υ` of the limiting
/// law of the structure vector.
///
/// The integral over `u` contributes `m^{e*}` and the Gaussian integral
/// over the vertex labels is evaluated exactly. The lengths are drawn as
/// `σ = S x` with `S² ∼ Gamma((5g−2)/2, 1/2)` and `x` Dirichlet(1/2, …, 1/2);
/// for every half-edge other than the root, `m^e` is drawn from the
/// first-passage density `−p'_m(σ^e)` as `(σ^e)²/Z²`, and `m^{e*}` is the
/// remaining mass, weighted by `m^{e*}(−p'_{m^{e*}}(σ^{e*}))`. Streams of
/// [`MC_CHUNK`] samples use independent seeds, so the result does not depend
/// on the number of threads.
pub fn estimate_upsilon(genus: usize, mc_samples: u64, seed: u64) -> Result<McEstimate> {
    if mc_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if genus == 0 {
        return Err(Error::InvalidGenus(0));
    }
    let schemes: Vec<SchemeGeometry> = enumerate_schemes(genus, true)?.iter().map(SchemeGeometry::new).collect();
    let k = 6 * genus - 3;
    let shape2 = (5 * genus - 2) as u32;
    let shape = shape2 as f64 / 2.0;
    let scale = 0.5f64;
    let ln_norm_gamma = ln_gamma_half_integer(shape2) + shape * scale.ln();
    let ln_dirichlet = ln_gamma_half_integer(k as u32) - k as f64 * ln_gamma_half_integer(1);
    let gamma = Gamma::new(shape, scale).expect("valid parameters");
    let half = Gamma::new(0.5, 1.0).expect("valid parameters");
    let n_schemes = schemes.len() as f64;
    let chunks = mc_samples.div_ceil(MC_CHUNK);
    let parts: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let count = MC_CHUNK.min(mc_samples - c * MC_CHUNK);
            let (mut sum, mut sum2) = (0.0, 0.0);
            let mut x = vec![0.0; k];
            let mut sigma = vec![0.0; k];
            for _ in 0..count {
                let s = &schemes[rng.gen_range(0..schemes.len())];
                let s2: f64 = gamma.sample(&mut rng);
                let total = s2.sqrt();
                let mut xs = 0.0;
                for xi in x.iter_mut() {
                    *xi = half.sample(&mut rng);
                    xs += *xi;
                }
                let mut ln_q = (shape - 1.0) * s2.ln() - s2 / scale - ln_norm_gamma + (2.0 * total).ln() + ln_dirichlet
                    - (k as f64 - 1.0) * total.ln();
                for (si, xi) in sigma.iter_mut().zip(x.iter_mut()) {
                    *xi /= xs;
                    *si = total * *xi;
                    ln_q -= 0.5 * xi.ln();
                }
                let mut rest = 1.0;
                for e in 1..s.edge_of.len() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let se = sigma[s.edge_of[e]];
                    rest -= se * se / (z * z);
                }
                let w = if rest > 0.0 {
                    let root = sigma[s.edge_of[0]];
                    n_schemes * rest * minus_dp(rest, root) * s.label_integral(&sigma) / ln_q.exp()
                } else {
                    0.0
                };
                if w.is_finite() {
                    sum += w;
                    sum2 += w * w;
                }
            }
            (sum, sum2)
        })
        .collect();
    let (mut sum, mut sum2) = (0.0, 0.0);
    for (a, b) in parts {
        sum += a;
        sum2 += b;
    }
    let n = mc_samples as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    Ok(McEstimate { estimate: mean, std_error: (var / n).sqrt(), samples: mc_samples })
}

/// `2^{(3g+1)/2} 3^g`, the factor turning `Υ` into `t_g`.
pub fn upsilon_factor(genus: usize) -> f64 {
    2f64.powf((3 * genus + 1) as f64 / 2.0) * 3f64.powi(genus as i32)
}

/// Convergence of `r(n) = |T_n| 12^{−n} n^{−(5g−3)/2}` toward `t_g / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub genus: usize,
    pub target: f64,
    pub n: Vec<usize>,
    pub ratio: Vec<f64>,
    /// `|r(n)/target − 1|` for every `n`.
    pub deviation: Vec<f64>,
    /// Whether the deviation decreases along the last three sizes.
    pub tail_decreasing: bool,
}

/// `r(n)` for every size in `n_list` from exact counts, against `t_g / 2`.
pub fn asymptotic_ratio(genus: usize, n_list: &[usize]) -> Result<RatioReport> {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::CountsUnavailable);
    }
    let target = tg_closed_form(genus, 64)?.value() / 2.0;
    let n_max = *n_list.iter().max().expect("nonempty");
    let counts = count_gtrees_upto(genus, n_max)?;
    let exponent = (5.0 * genus as f64 - 3.0) / 2.0;
    let ratio: Vec<f64> = n_list.iter().map(|&n| GTreeCount::Exact(counts[n - 1].clone()).scaled(n) / (n as f64).powf(exponent)).collect();
    let deviation: Vec<f64> = ratio.iter().map(|r| (r / target - 1.0).abs()).collect();
    let tail = &deviation[deviation.len().saturating_sub(3)..];
    let tail_decreasing = tail.windows(2).all(|w| w[1] < w[0]);
    Ok(RatioReport { genus, target, n: n_list.to_vec(), ratio, deviation, tail_decreasing })
}

/// Big integers as decimal strings, rationals as `"p/q"`.
pub mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        let (a, b) = text.split_once('/').unwrap_or((&text, "1"));
        let parse = |x: &str| x.trim().parse::<BigInt>().map_err(serde::de::Error::custom);
        let den = parse(b)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(parse(a)?, den))
    }
}
