//! `classify`: score every post with label probabilities and, in train
//! mode, evaluate the baseline on a held-out slice of the labeled data.

use chattermine::classify::{evaluate, train, Label, LabelDistribution};
use chattermine::seeding::{shuffled_indices, stage_seed};

use crate::outfmt::{f9, CsvOut};
use crate::pipeline::Context;
use crate::CliError;

#[derive(serde::Serialize)]
struct ScoredRow<'a> {
    id: &'a str,
    p_neutral: f64,
    p_hate: f64,
    p_counterhate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_other: Option<f64>,
    label: &'static str,
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let classifier = ctx
        .config
        .classifier
        .as_ref()
        .ok_or_else(|| CliError::config("classifier: missing [classifier] section"))?;

    if classifier.mode == "train" {
        write_eval_report(ctx)?;
    }

    let distributions = ctx.label_distributions()?;
    let mut lines = Vec::new();
    for (post, dist) in ctx.posts.iter().zip(&distributions) {
        let Some(dist) = dist else { continue };
        let row = ScoredRow {
            id: &post.id,
            p_neutral: dist.p_neutral,
            p_hate: dist.p_hate,
            p_counterhate: dist.p_counterhate,
            p_other: dist.p_other,
            label: dist.argmax().as_str(),
        };
        lines.push(
            serde_json::to_string(&row)
                .map_err(|e| CliError::runtime(format!("serializing scores: {e}")))?,
        );
    }
    crate::outfmt::write_lines(&ctx.out_dir.join("scored_posts.jsonl"), &lines)
}

/// Train on a shuffled split of the labeled file and evaluate the rest.
fn write_eval_report(ctx: &Context) -> Result<(), CliError> {
    let classifier = ctx.config.classifier.as_ref().expect("checked by caller");
    let labeled_path = classifier
        .labeled
        .as_ref()
        .ok_or_else(|| CliError::config("classifier.labeled: required in train mode"))?;
    crate::config::PipelineConfig::require_file("classifier.labeled", labeled_path)?;
    let (labeled, _) = chattermine::classify::load_labeled(labeled_path)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    if labeled.len() < 4 {
        return Err(CliError::runtime(format!(
            "labeled data too small to split: {} row(s)",
            labeled.len()
        )));
    }

    let order = shuffled_indices(labeled.len(), stage_seed(ctx.config.seed, "eval_split", 0));
    let n_eval = ((classifier.eval_fraction * labeled.len() as f64).ceil() as usize)
        .clamp(1, labeled.len() - 1);
    let eval_idx = &order[..n_eval];
    let train_idx = &order[n_eval..];
    let train_rows: Vec<(String, Label)> = train_idx.iter().map(|&i| labeled[i].clone()).collect();
    let scorer = train(&train_rows, ctx.hyper()?).map_err(|e| CliError::runtime(e.to_string()))?;

    let predictions: Vec<LabelDistribution> = eval_idx
        .iter()
        .map(|&i| scorer.predict(&labeled[i].0))
        .collect();
    let gold: Vec<Label> = eval_idx.iter().map(|&i| labeled[i].1).collect();
    let report = evaluate(&predictions, &gold).map_err(|e| CliError::runtime(e.to_string()))?;

    let mut csv = CsvOut::create(
        &ctx.out_dir.join("eval_report.csv"),
        &["class", "precision", "recall", "f1", "auroc", "support"],
    )?;
    for m in &report.per_class {
        csv.write([
            m.label.as_str().to_string(),
            f9(m.precision),
            f9(m.recall),
            f9(m.f1),
            m.auroc.map(f9).unwrap_or_default(),
            m.support.to_string(),
        ])?;
    }
    csv.write([
        "macro".to_string(),
        f9(report.macro_precision),
        f9(report.macro_recall),
        f9(report.macro_f1),
        String::new(),
        gold.len().to_string(),
    ])?;
    // Confusion block: gold rows × predicted columns.
    csv.write(std::iter::once(String::new()))?;
    let mut header = vec!["confusion_gold\\pred".to_string()];
    header.extend(report.labels.iter().map(|l| l.as_str().to_string()));
    csv.write(header)?;
    for (label, row) in report.labels.iter().zip(&report.confusion) {
        let mut cells = vec![label.as_str().to_string()];
        cells.extend(row.iter().map(usize::to_string));
        csv.write(cells)?;
    }
    csv.finish()
}
