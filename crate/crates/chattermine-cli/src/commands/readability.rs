//! `readability`: per-post scores and the monthly mean table.

use chattermine::aggregate::{monthly_summary, monthly_summary_pooled, ReadabilityAggMode};
use chattermine::exec;
use chattermine::readability::{readability_report, ReadabilityReport};

use crate::outfmt::{f9, CsvOut};
use crate::pipeline::Context;
use crate::CliError;

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let (dale, spache, _) = ctx.wordlists()?;
    let mode: ReadabilityAggMode = ctx
        .config
        .aggregate
        .as_ref()
        .map(|a| a.readability_mode.parse())
        .transpose()
        .map_err(CliError::Config)?
        .unwrap_or_default();

    let reports: Vec<Option<ReadabilityReport>> = exec::map_ordered(&ctx.posts.posts, |post| {
        readability_report(&post.text, &dale, &spache).ok()
    });

    let mut per_post = CsvOut::create(
        &ctx.out_dir.join("readability_posts.csv"),
        &[
            &["id", "region", "date"],
            ReadabilityReport::COLUMN_NAMES.as_slice(),
        ]
        .concat(),
    )?;
    let mut dated = Vec::new();
    for (post, report) in ctx.posts.iter().zip(&reports) {
        let Some(report) = report else {
            log::warn!("post {}: no scoreable words, skipping readability", post.id);
            continue;
        };
        let mut row = vec![post.id.clone(), post.region.clone(), post.date().to_string()];
        row.extend(report.as_row().map(f9));
        per_post.write(row)?;
        dated.push((post.date(), post.region.clone(), *report));
    }
    per_post.finish()?;

    let rows = match mode {
        ReadabilityAggMode::PerPost => monthly_summary(&dated, &ctx.region_filter),
        ReadabilityAggMode::Pooled => {
            let texts: Vec<_> = ctx
                .posts
                .iter()
                .map(|p| (p.date(), p.region.clone(), p.text.clone()))
                .collect();
            monthly_summary_pooled(&texts, &ctx.region_filter, &dale, &spache)
        }
    };
    let mut monthly = CsvOut::create(
        &ctx.out_dir.join("readability_monthly.csv"),
        &[
            &["month"],
            ReadabilityReport::COLUMN_NAMES.as_slice(),
            &["sample_count"],
        ]
        .concat(),
    )?;
    for row in rows {
        let mut cells = vec![format!("{:04}-{:02}", row.year, row.month)];
        cells.extend(row.scores.as_row().map(f9));
        cells.push(row.sample_count.to_string());
        monthly.write(cells)?;
    }
    monthly.finish()
}
