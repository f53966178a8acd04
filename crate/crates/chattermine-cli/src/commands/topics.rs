//! `topics`: perplexity sweep over candidate topic counts, best-model
//! persistence, and per-topic term tables.

use chattermine::corpus::split_by_author;
use chattermine::seeding::stage_seed;
use chattermine::topics::{sweep_topics, top_terms, SweepSettings};

use crate::outfmt::{f9, CsvOut};
use crate::pipeline::Context;
use crate::CliError;

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let lda = ctx
        .config
        .lda
        .as_ref()
        .ok_or_else(|| CliError::config("lda: missing [lda] section"))?;
    if lda.k_list.is_empty() {
        return Err(CliError::config("lda.k_list: must name at least one topic count"));
    }
    let (_, _, stopwords) = ctx.wordlists()?;

    let split = split_by_author(
        &ctx.posts,
        lda.holdout_fraction,
        stage_seed(ctx.config.seed, "split", 0),
    )
    .map_err(|e| CliError::runtime(e.to_string()))?;

    let settings = SweepSettings {
        alpha: lda.alpha,
        beta: lda.beta,
        iterations: lda.iterations,
        min_count: lda.min_count,
        seed: ctx.config.seed,
    };
    let outcome = sweep_topics(&split, &stopwords, &lda.k_list, &settings)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    if outcome.dropped_train > 0 || outcome.dropped_holdout > 0 {
        log::warn!(
            "dropped {} train / {} holdout post(s) with no in-vocabulary tokens",
            outcome.dropped_train,
            outcome.dropped_holdout
        );
    }

    let mut sweep = CsvOut::create(&ctx.out_dir.join("topics_sweep.csv"), &["k", "perplexity"])?;
    for (k, perplexity) in &outcome.rows {
        sweep.write([k.to_string(), f9(*perplexity)])?;
    }
    sweep.finish()?;

    let model = &outcome.best;
    model
        .save(&ctx.out_dir.join("topics_model.txt"))
        .map_err(|e| CliError::runtime(e.to_string()))?;

    let mut terms = CsvOut::create(
        &ctx.out_dir.join("topics_terms.csv"),
        &["topic", "rank", "term", "probability"],
    )?;
    for topic in 0..model.k {
        let ranked = top_terms(model, topic, lda.top_terms)
            .map_err(|e| CliError::runtime(e.to_string()))?;
        for (rank, (term, probability)) in ranked.into_iter().enumerate() {
            terms.write([
                topic.to_string(),
                (rank + 1).to_string(),
                term,
                f9(probability),
            ])?;
        }
    }
    terms.finish()
}
