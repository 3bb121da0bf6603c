//! Sources of randomness for the samplers.
//!
//! Every sampler draws its random decisions through the [`Chooser`] trait: a
//! decision is a choice among finitely many outcomes with nonnegative
//! weights. A seeded generator implements it by inverse transform, while
//! [`exhaustive_pushforward`] walks every branch of the decision tree and
//! returns the exact law of the output as rationals.

use std::collections::BTreeMap;

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A source of weighted finite choices.
///
/// Outcome `i` of a call must be returned with probability
/// `weights[i] / sum(weights)`. Outcomes with zero weight are never returned.
pub trait Chooser {
    /// Weighted choice with machine-integer weights.
    fn pick_u64(&mut self, weights: &[u64]) -> usize;
    /// Weighted choice with arbitrary-precision weights.
    fn pick_big(&mut self, weights: &[BigUint]) -> usize;
    /// Weighted choice with floating-point weights (float-mode sampling only).
    fn pick_f64(&mut self, weights: &[f64]) -> usize;
    /// Uniform integer in `0..n`.
    fn below(&mut self, n: u64) -> u64;
}

/// Adapter turning any [`RngCore`] into a [`Chooser`].
#[derive(Debug, Clone)]
pub struct RngChooser<R>(pub R);

impl<R: RngCore> Chooser for RngChooser<R> {
    fn pick_u64(&mut self, weights: &[u64]) -> usize {
        let total: u64 = weights.iter().sum();
        assert!(total > 0, "all weights are zero");
        let mut r = self.0.gen_range(0..total);
        for (i, &w) in weights.iter().enumerate() {
            if r < w {
                return i;
            }
            r -= w;
        }
        unreachable!("inverse transform overran the weights")
    }

    fn pick_big(&mut self, weights: &[BigUint]) -> usize {
        let total: BigUint = weights.iter().sum();
        assert!(!total.is_zero(), "all weights are zero");
        let mut r = self.0.gen_biguint_below(&total);
        for (i, w) in weights.iter().enumerate() {
            if &r < w {
                return i;
            }
            r -= w;
        }
        unreachable!("inverse transform overran the weights")
    }

    fn pick_f64(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        assert!(total > 0.0, "all weights are zero");
        let mut r = self.0.gen::<f64>() * total;
        let mut last = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                if r < w {
                    return i;
                }
                r -= w;
                last = i;
            }
        }
        last
    }

    fn below(&mut self, n: u64) -> u64 {
        self.0.gen_range(0..n)
    }
}

/// The generator used for sample `index` of a run seeded with `master`.
///
/// The derivation is counter based: the ChaCha8 key is derived from the
/// master seed and the sample index selects the ChaCha stream. Results are
/// therefore independent of how samples are scheduled across threads.
pub fn stream_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// A [`Chooser`] over [`stream_rng`].
pub fn stream_chooser(master: u64, index: u64) -> RngChooser<ChaCha8Rng> {
    RngChooser(stream_rng(master, index))
}

/// A chooser that replays a script of decisions and records the decision
/// tree, used by [`exhaustive_pushforward`].
#[derive(Debug, Default)]
pub struct ExhaustiveChooser {
    script: Vec<usize>,
    trace: Vec<(usize, Vec<BigUint>)>,
}

impl ExhaustiveChooser {
    fn decide(&mut self, weights: Vec<BigUint>) -> usize {
        let pos = self.trace.len();
        let choice = if pos < self.script.len() {
            self.script[pos]
        } else {
            weights.iter().position(|w| !w.is_zero()).expect("all weights are zero")
        };
        self.trace.push((choice, weights));
        choice
    }
}

impl Chooser for ExhaustiveChooser {
    fn pick_u64(&mut self, weights: &[u64]) -> usize {
        self.decide(weights.iter().map(|&w| BigUint::from(w)).collect())
    }

    fn pick_big(&mut self, weights: &[BigUint]) -> usize {
        self.decide(weights.to_vec())
    }

    fn pick_f64(&mut self, _weights: &[f64]) -> usize {
        panic!("exhaustive enumeration requires exact weights")
    }

    fn below(&mut self, n: u64) -> u64 {
        self.decide(vec![BigUint::one(); n as usize]) as u64
    }
}

/// Runs `f` on every branch of its decision tree and returns the exact law
/// of its output.
///
/// Each branch is weighted by the product of the probabilities of its
/// decisions. The number of branches must be small enough to enumerate.
pub fn exhaustive_pushforward<T, F>(mut f: F) -> BTreeMap<T, BigRational>
where
    T: Ord,
    F: FnMut(&mut ExhaustiveChooser) -> T,
{
    let mut law: BTreeMap<T, BigRational> = BTreeMap::new();
    let mut script: Vec<usize> = Vec::new();
    loop {
        let mut chooser = ExhaustiveChooser { script: std::mem::take(&mut script), trace: Vec::new() };
        let out = f(&mut chooser);
        let mut p = BigRational::one();
        for (choice, weights) in &chooser.trace {
            let total: BigUint = weights.iter().sum();
            p *= BigRational::new(weights[*choice].clone().into(), total.into());
        }
        *law.entry(out).or_insert_with(BigRational::zero) += p;

        // Advance to the next branch in depth-first order.
        let mut trace = chooser.trace;
        loop {
            match trace.pop() {
                None => return law,
                Some((choice, weights)) => {
                    if let Some(next) = (choice + 1..weights.len()).find(|&i| !weights[i].is_zero()) {
                        script = trace.iter().map(|(c, _)| *c).collect();
                        script.push(next);
                        break;
                    }
                }
            }
        }
    }
}
