//! `tag`: entity spans per post plus ranked symptom frequency tables.

use chattermine::corpus::Platform;
use chattermine::rtn::{symptom_frequency_table, tag_collection, TaggedPost};

use crate::outfmt::{f9, CsvOut};
use crate::pipeline::Context;
use crate::CliError;

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let grammar = ctx.grammar()?;
    let tagged = tag_collection(&grammar, &ctx.posts);

    let lines: Result<Vec<String>, _> = tagged.iter().map(serde_json::to_string).collect();
    let lines = lines.map_err(|e| CliError::runtime(format!("serializing tagged posts: {e}")))?;
    crate::outfmt::write_lines(&ctx.out_dir.join("tagged_posts.jsonl"), &lines)?;

    write_frequency_table(ctx, "symptom_frequency_all.csv", &tagged)?;
    let twitter: Vec<TaggedPost> = tagged
        .iter()
        .filter(|t| t.post.platform == Platform::Twitter)
        .cloned()
        .collect();
    write_frequency_table(ctx, "symptom_frequency_twitter.csv", &twitter)?;
    let reddit: Vec<TaggedPost> = tagged
        .iter()
        .filter(|t| t.post.platform == Platform::Reddit)
        .cloned()
        .collect();
    write_frequency_table(ctx, "symptom_frequency_reddit.csv", &reddit)?;
    Ok(())
}

fn write_frequency_table(ctx: &Context, name: &str, tagged: &[TaggedPost]) -> Result<(), CliError> {
    let mut csv = CsvOut::create(&ctx.out_dir.join(name), &["term", "frequency"])?;
    for (term, freq) in symptom_frequency_table(tagged) {
        csv.write([term, f9(freq)])?;
    }
    csv.finish()
}
