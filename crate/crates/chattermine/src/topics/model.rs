//! Fitted topic models: training, fold-in, held-out perplexity, term
//! tables, and versioned persistence.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gibbs::{fold_in_doc, GibbsState};
use super::vocab::Vocabulary;
use super::TopicsError;
use crate::exec;
use crate::seeding::stage_seed;

/// A fitted LDA model: smoothed topic-word distributions plus everything
/// needed to reproduce them.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub k: usize,
    /// k × V topic-word probabilities; each row sums to 1 and is strictly
    /// positive (smoothed).
    pub phi: Vec<Vec<f64>>,
    pub alpha: f64,
    pub beta: f64,
    pub vocabulary: Vocabulary,
    pub seed: u64,
    pub iterations: usize,
}

/// Default document-topic concentration when none is configured.
pub fn default_alpha(k: usize) -> f64 {
    50.0 / k as f64
}

/// Default topic-word concentration.
pub const DEFAULT_BETA: f64 = 0.01;

/// Fit an LDA model by collapsed Gibbs sampling.
///
/// Runs `iterations` full sweeps from a seeded uniform assignment;
/// bit-reproducible for identical `(docs, k, alpha, beta, iterations,
/// seed)`. Single-threaded by contract.
pub fn fit_lda(
    docs: &[Vec<usize>],
    vocabulary: Vocabulary,
    k: usize,
    alpha: f64,
    beta: f64,
    iterations: usize,
    seed: u64,
) -> Result<LdaModel, TopicsError> {
    if k == 0 {
        return Err(TopicsError::ZeroTopics);
    }
    if docs.is_empty() {
        return Err(TopicsError::EmptyDocs);
    }
    let distinct: HashSet<usize> = docs.iter().flatten().copied().collect();
    if k > distinct.len() {
        return Err(TopicsError::TooManyTopics {
            k,
            distinct_terms: distinct.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = GibbsState::init(docs.to_vec(), k, vocabulary.len(), alpha, beta, &mut rng);
    for _ in 0..iterations {
        state.sweep(&mut rng);
    }
    Ok(LdaModel {
        k,
        phi: state.phi(),
        alpha,
        beta,
        vocabulary,
        seed,
        iterations,
    })
}

/// Estimate a held-out document's topic mixture with `phi` frozen.
pub fn fold_in(
    model: &LdaModel,
    doc: &[usize],
    iterations: usize,
    seed: u64,
) -> Result<Vec<f64>, TopicsError> {
    if doc.is_empty() {
        return Err(TopicsError::EmptyHeldoutDoc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(fold_in_doc(&model.phi, model.alpha, doc, iterations, &mut rng))
}

/// Held-out perplexity: `exp(−Σ ln Pr(doc) / Σ N_doc)`.
///
/// Each document's likelihood uses its fold-in mixture against the frozen
/// topic-word distributions. Per-document log-likelihoods are computed in
/// parallel but summed in document order, keeping the result bit-stable.
pub fn perplexity(model: &LdaModel, holdout: &[Vec<usize>]) -> Result<f64, TopicsError> {
    if holdout.is_empty() {
        return Err(TopicsError::EmptyHoldout);
    }
    if holdout.iter().any(|d| d.is_empty()) {
        return Err(TopicsError::EmptyHeldoutDoc);
    }
    let per_doc: Vec<f64> = exec::map_indexed(holdout, |idx, doc| {
        let seed = stage_seed(model.seed, "fold_in", idx as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = fold_in_doc(&model.phi, model.alpha, doc, model.iterations, &mut rng);
        doc.iter()
            .map(|&w| {
                let p: f64 = theta.iter().zip(&model.phi).map(|(t, row)| t * row[w]).sum();
                p.ln()
            })
            .sum()
    });
    let total_ll: f64 = per_doc.iter().sum();
    let total_tokens: usize = holdout.iter().map(Vec::len).sum();
    Ok((-total_ll / total_tokens as f64).exp())
}

/// The `n` most probable terms of one topic, ties broken lexicographically.
pub fn top_terms(
    model: &LdaModel,
    topic: usize,
    n: usize,
) -> Result<Vec<(String, f64)>, TopicsError> {
    if topic >= model.k {
        return Err(TopicsError::TopicOutOfRange { topic, k: model.k });
    }
    let mut ranked: Vec<(String, f64)> = model.phi[topic]
        .iter()
        .enumerate()
        .map(|(id, &p)| (model.vocabulary.term(id).to_string(), p))
        .collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(n);
    Ok(ranked)
}

const MODEL_MAGIC: &str = "chattermine-lda v1";

impl LdaModel {
    /// Write the model as a versioned plain-text file. Floats are printed
    /// with Rust's shortest round-trip formatting, so loading reproduces
    /// them bit-exactly.
    pub fn save(&self, path: &Path) -> Result<(), TopicsError> {
        let file = std::fs::File::create(path).map_err(|source| TopicsError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut w = BufWriter::new(file);
        let io_err = |source: std::io::Error| TopicsError::Io {
            path: path.display().to_string(),
            source,
        };
        writeln!(w, "{MODEL_MAGIC}").map_err(io_err)?;
        writeln!(w, "k {}", self.k).map_err(io_err)?;
        writeln!(w, "alpha {}", self.alpha).map_err(io_err)?;
        writeln!(w, "beta {}", self.beta).map_err(io_err)?;
        writeln!(w, "seed {}", self.seed).map_err(io_err)?;
        writeln!(w, "iterations {}", self.iterations).map_err(io_err)?;
        writeln!(w, "min_count {}", self.vocabulary.min_count).map_err(io_err)?;
        writeln!(w, "vocabulary {}", self.vocabulary.len()).map_err(io_err)?;
        for term in self.vocabulary.terms() {
            writeln!(w, "{term}").map_err(io_err)?;
        }
        writeln!(w, "phi").map_err(io_err)?;
        for row in &self.phi {
            let line = row
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(w, "{line}").map_err(io_err)?;
        }
        Ok(())
    }

    /// Load a model saved by [`LdaModel::save`].
    pub fn load(path: &Path) -> Result<LdaModel, TopicsError> {
        let file = std::fs::File::open(path).map_err(|source| TopicsError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let reader = BufReader::new(file);
        let mut lines = reader.lines().enumerate();
        let mut next_line = || -> Result<(usize, String), TopicsError> {
            match lines.next() {
                Some((idx, Ok(line))) => Ok((idx + 1, line)),
                Some((idx, Err(e))) => Err(TopicsError::ModelFormat {
                    line: idx + 1,
                    message: e.to_string(),
                }),
                None => Err(TopicsError::ModelFormat {
                    line: 0,
                    message: "unexpected end of file".to_string(),
                }),
            }
        };
        let bad = |line: usize, message: &str| TopicsError::ModelFormat {
            line,
            message: message.to_string(),
        };

        let (line, magic) = next_line()?;
        if magic != MODEL_MAGIC {
            return Err(bad(line, "unrecognized model header"));
        }
        let mut field = |name: &str| -> Result<String, TopicsError> {
            let (line, text) = next_line()?;
            text.strip_prefix(name)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(String::from)
                .ok_or_else(|| bad(line, &format!("expected `{name} <value>`")))
        };
        let k: usize = field("k")?.parse().map_err(|_| bad(2, "bad k"))?;
        let alpha: f64 = field("alpha")?.parse().map_err(|_| bad(3, "bad alpha"))?;
        let beta: f64 = field("beta")?.parse().map_err(|_| bad(4, "bad beta"))?;
        let seed: u64 = field("seed")?.parse().map_err(|_| bad(5, "bad seed"))?;
        let iterations: usize = field("iterations")?
            .parse()
            .map_err(|_| bad(6, "bad iterations"))?;
        let min_count: usize = field("min_count")?
            .parse()
            .map_err(|_| bad(7, "bad min_count"))?;
        let v: usize = field("vocabulary")?
            .parse()
            .map_err(|_| bad(8, "bad vocabulary size"))?;
        let mut terms = Vec::with_capacity(v);
        for _ in 0..v {
            terms.push(next_line()?.1);
        }
        let (line, marker) = next_line()?;
        if marker != "phi" {
            return Err(bad(line, "expected `phi` section"));
        }
        let mut phi = Vec::with_capacity(k);
        for _ in 0..k {
            let (line, row_text) = next_line()?;
            let row: Result<Vec<f64>, _> = row_text.split(' ').map(str::parse::<f64>).collect();
            let row = row.map_err(|_| bad(line, "bad phi row"))?;
            if row.len() != v {
                return Err(bad(line, "phi row length mismatch"));
            }
            phi.push(row);
        }
        Ok(LdaModel {
            k,
            phi,
            alpha,
            beta,
            vocabulary: Vocabulary::from_terms(terms, min_count),
            seed,
            iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_vocab(v: usize) -> Vocabulary {
        Vocabulary::from_terms((0..v).map(|i| format!("w{i:03}")).collect(), 1)
    }

    /// Uniform-mixture model: every token has probability exactly 1/V.
    fn uniform_model(v: usize) -> LdaModel {
        LdaModel {
            k: 1,
            phi: vec![vec![1.0 / v as f64; v]],
            alpha: 50.0,
            beta: DEFAULT_BETA,
            vocabulary: toy_vocab(v),
            seed: 0,
            iterations: 10,
        }
    }

    #[test]
    fn single_topic_phi_is_smoothed_unigram() {
        let docs = vec![vec![0, 0, 1], vec![2, 0]];
        let vocab = toy_vocab(3);
        let model = fit_lda(&docs, vocab, 1, 50.0, 0.5, 5, 7).unwrap();
        // counts: w0=3, w1=1, w2=1, N=5, V=3, beta=0.5
        let denom = 5.0 + 3.0 * 0.5;
        assert_eq!(model.phi[0], vec![3.5 / denom, 1.5 / denom, 1.5 / denom]);
    }

    #[test]
    fn fit_is_deterministic() {
        let docs = vec![vec![0, 1, 2, 3], vec![3, 2, 1], vec![0, 0, 3]];
        let vocab = toy_vocab(4);
        let a = fit_lda(&docs, vocab.clone(), 2, 25.0, 0.01, 20, 11).unwrap();
        let b = fit_lda(&docs, vocab, 2, 25.0, 0.01, 20, 11).unwrap();
        assert_eq!(a.phi, b.phi);
    }

    #[test]
    fn fit_rejects_bad_inputs() {
        let vocab = toy_vocab(2);
        assert!(matches!(
            fit_lda(&[], vocab.clone(), 1, 1.0, 0.1, 1, 0),
            Err(TopicsError::EmptyDocs)
        ));
        assert!(matches!(
            fit_lda(&[vec![0]], vocab.clone(), 0, 1.0, 0.1, 1, 0),
            Err(TopicsError::ZeroTopics)
        ));
        assert!(matches!(
            fit_lda(&[vec![0, 0, 0]], vocab, 2, 1.0, 0.1, 1, 0),
            Err(TopicsError::TooManyTopics { .. })
        ));
    }

    #[test]
    fn uniform_model_perplexity_is_vocab_size() {
        for v in [10usize, 100] {
            let model = uniform_model(v);
            let holdout = vec![vec![0, 1 % v, 2 % v], vec![3 % v]];
            let p = perplexity(&model, &holdout).unwrap();
            assert!((p - v as f64).abs() < 1e-6, "V={v}: got {p}");
        }
    }

    #[test]
    fn single_token_perplexity_inverts_probability() {
        let mut model = uniform_model(4);
        model.phi = vec![vec![0.25, 0.25, 0.25, 0.25]];
        let p = perplexity(&model, &[vec![0]]).unwrap();
        assert!((p - 4.0).abs() < 1e-9);
    }

    #[test]
    fn perplexity_rejects_empty_inputs() {
        let model = uniform_model(4);
        assert!(matches!(
            perplexity(&model, &[]),
            Err(TopicsError::EmptyHoldout)
        ));
        assert!(matches!(
            perplexity(&model, &[vec![]]),
            Err(TopicsError::EmptyHeldoutDoc)
        ));
    }

    #[test]
    fn fold_in_k1_is_certain() {
        let model = uniform_model(5);
        let theta = fold_in(&model, &[0, 1, 2], 5, 3).unwrap();
        assert_eq!(theta, vec![1.0]);
        assert!(matches!(
            fold_in(&model, &[], 5, 3),
            Err(TopicsError::EmptyHeldoutDoc)
        ));
    }

    #[test]
    fn fold_in_is_deterministic() {
        let docs = vec![vec![0, 1], vec![2, 3], vec![0, 3]];
        let model = fit_lda(&docs, toy_vocab(4), 2, 25.0, 0.01, 10, 5).unwrap();
        let a = fold_in(&model, &[0, 1, 2], 10, 9).unwrap();
        let b = fold_in(&model, &[0, 1, 2], 10, 9).unwrap();
        assert_eq!(a, b);
        let sum: f64 = a.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn top_terms_ranking_and_bounds() {
        let model = LdaModel {
            k: 1,
            phi: vec![vec![0.2, 0.5, 0.2, 0.1]],
            alpha: 1.0,
            beta: 0.1,
            vocabulary: Vocabulary::from_terms(
                vec!["beta".into(), "alpha".into(), "aaa".into(), "zzz".into()],
                1,
            ),
            seed: 0,
            iterations: 1,
        };
        let terms = top_terms(&model, 0, 3).unwrap();
        // 0.5 first; the two 0.2 terms tie and sort lexicographically.
        assert_eq!(terms[0].0, "alpha");
        assert_eq!(terms[1].0, "aaa");
        assert_eq!(terms[2].0, "beta");
        let all = top_terms(&model, 0, 99).unwrap();
        assert_eq!(all.len(), 4);
        assert!(matches!(
            top_terms(&model, 1, 3),
            Err(TopicsError::TopicOutOfRange { .. })
        ));
    }

    #[test]
    fn save_load_roundtrip_is_exact() {
        let docs = vec![vec![0, 1, 2], vec![2, 3, 0], vec![1, 1, 3]];
        let model = fit_lda(&docs, toy_vocab(4), 2, 25.0, 0.01, 15, 21).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        model.save(&path).unwrap();
        let loaded = LdaModel::load(&path).unwrap();
        assert_eq!(model, loaded);
        let holdout = vec![vec![0, 2], vec![3, 1, 1]];
        let a = perplexity(&model, &holdout).unwrap();
        let b = perplexity(&loaded, &holdout).unwrap();
        assert!((a - b).abs() <= 1e-12);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
