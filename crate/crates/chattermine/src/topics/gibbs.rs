//! Collapsed Gibbs sampling for LDA.
//!
//! The sampler consumes unit-interval draws through [`UnitSource`] rather
//! than an RNG directly, so a scripted draw sequence can drive it for
//! trace-level verification while production uses seeded ChaCha8.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Source of draws uniform on `[0, 1)`.
pub trait UnitSource {
    fn next_unit(&mut self) -> f64;
}

impl UnitSource for ChaCha8Rng {
    fn next_unit(&mut self) -> f64 {
        self.random::<f64>()
    }
}

/// A fixed draw sequence; panics when exhausted.
#[derive(Debug, Clone)]
pub struct ScriptedUnits {
    draws: Vec<f64>,
    next: usize,
}

impl ScriptedUnits {
    pub fn new(draws: Vec<f64>) -> Self {
        ScriptedUnits { draws, next: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.draws.len() - self.next
    }
}

impl UnitSource for ScriptedUnits {
    fn next_unit(&mut self) -> f64 {
        let u = self.draws[self.next];
        self.next += 1;
        u
    }
}

/// Select the first index whose cumulative weight exceeds `u * total`.
fn sample_categorical(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut cum = 0.0;
    for (t, w) in weights.iter().enumerate() {
        cum += w;
        if target < cum {
            return t;
        }
    }
    weights.len() - 1
}

/// Mutable state of a collapsed Gibbs run.
#[derive(Debug, Clone)]
pub struct GibbsState {
    pub k: usize,
    pub vocab_size: usize,
    pub alpha: f64,
    pub beta: f64,
    docs: Vec<Vec<usize>>,
    z: Vec<Vec<usize>>,
    n_dk: Vec<Vec<u32>>,
    n_kw: Vec<Vec<u32>>,
    n_k: Vec<u64>,
}

impl GibbsState {
    /// Seed topic assignments uniformly from the draw source.
    pub fn init<S: UnitSource>(
        docs: Vec<Vec<usize>>,
        k: usize,
        vocab_size: usize,
        alpha: f64,
        beta: f64,
        source: &mut S,
    ) -> Self {
        let n_docs = docs.len();
        let mut state = GibbsState {
            k,
            vocab_size,
            alpha,
            beta,
            z: docs.iter().map(|d| vec![0; d.len()]).collect(),
            docs,
            n_dk: vec![vec![0; k]; n_docs],
            n_kw: vec![vec![0; vocab_size]; k],
            n_k: vec![0; k],
        };
        for d in 0..state.docs.len() {
            for i in 0..state.docs[d].len() {
                let topic = ((source.next_unit() * k as f64) as usize).min(k - 1);
                state.assign(d, i, topic);
            }
        }
        state
    }

    fn assign(&mut self, d: usize, i: usize, topic: usize) {
        let w = self.docs[d][i];
        self.z[d][i] = topic;
        self.n_dk[d][topic] += 1;
        self.n_kw[topic][w] += 1;
        self.n_k[topic] += 1;
    }

    fn unassign(&mut self, d: usize, i: usize) {
        let w = self.docs[d][i];
        let topic = self.z[d][i];
        self.n_dk[d][topic] -= 1;
        self.n_kw[topic][w] -= 1;
        self.n_k[topic] -= 1;
    }

    /// One full sweep over every token in document order.
    pub fn sweep<S: UnitSource>(&mut self, source: &mut S) {
        let v_beta = self.vocab_size as f64 * self.beta;
        let mut weights = vec![0.0; self.k];
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                self.unassign(d, i);
                let w = self.docs[d][i];
                for (t, weight) in weights.iter_mut().enumerate() {
                    *weight = (f64::from(self.n_dk[d][t]) + self.alpha)
                        * (f64::from(self.n_kw[t][w]) + self.beta)
                        / (self.n_k[t] as f64 + v_beta);
                }
                let topic = sample_categorical(&weights, source.next_unit());
                self.assign(d, i, topic);
            }
        }
    }

    /// Current topic assignments, per document.
    pub fn assignments(&self) -> &Vec<Vec<usize>> {
        &self.z
    }

    /// Smoothed topic-word distributions; each row sums to 1.
    pub fn phi(&self) -> Vec<Vec<f64>> {
        let v_beta = self.vocab_size as f64 * self.beta;
        self.n_kw
            .iter()
            .zip(&self.n_k)
            .map(|(row, &nk)| {
                row.iter()
                    .map(|&n| (f64::from(n) + self.beta) / (nk as f64 + v_beta))
                    .collect()
            })
            .collect()
    }
}

/// Fold one held-out document into a frozen topic-word model.
///
/// Gibbs sampling over the document's assignments only; returns the
/// smoothed topic proportions (sums to 1).
pub fn fold_in_doc<S: UnitSource>(
    phi: &[Vec<f64>],
    alpha: f64,
    doc: &[usize],
    iterations: usize,
    source: &mut S,
) -> Vec<f64> {
    let k = phi.len();
    let mut z = vec![0usize; doc.len()];
    let mut n_t = vec![0u32; k];
    for (i, _) in doc.iter().enumerate() {
        let topic = ((source.next_unit() * k as f64) as usize).min(k - 1);
        z[i] = topic;
        n_t[topic] += 1;
    }
    let mut weights = vec![0.0; k];
    for _ in 0..iterations {
        for (i, &w) in doc.iter().enumerate() {
            n_t[z[i]] -= 1;
            for (t, weight) in weights.iter_mut().enumerate() {
                *weight = (f64::from(n_t[t]) + alpha) * phi[t][w];
            }
            let topic = sample_categorical(&weights, source.next_unit());
            z[i] = topic;
            n_t[topic] += 1;
        }
    }
    let denom = doc.len() as f64 + k as f64 * alpha;
    n_t.iter()
        .map(|&n| (f64::from(n) + alpha) / denom)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn categorical_selection_boundaries() {
        let w = [0.1, 0.3];
        assert_eq!(sample_categorical(&w, 0.0), 0);
        assert_eq!(sample_categorical(&w, 0.24), 0);
        assert_eq!(sample_categorical(&w, 0.26), 1);
        assert_eq!(sample_categorical(&w, 0.999), 1);
    }

    #[test]
    fn counts_stay_consistent_across_sweeps() {
        let docs = vec![vec![0, 1, 2, 1], vec![2, 2, 0]];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut state = GibbsState::init(docs, 3, 3, 0.5, 0.1, &mut rng);
        for _ in 0..10 {
            state.sweep(&mut rng);
        }
        let token_total: u64 = state.n_k.iter().sum();
        assert_eq!(token_total, 7);
        for row in state.phi() {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn scripted_source_is_exact() {
        let mut s = ScriptedUnits::new(vec![0.25, 0.75]);
        assert_eq!(s.next_unit(), 0.25);
        assert_eq!(s.next_unit(), 0.75);
        assert_eq!(s.remaining(), 0);
    }

    #[test]
    fn fold_in_single_topic_is_degenerate() {
        let phi = vec![vec![0.5, 0.5]];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let theta = fold_in_doc(&phi, 0.5, &[0, 1, 0], 5, &mut rng);
        assert_eq!(theta, vec![1.0]);
    }
}
