//! Writes a small synthetic corpus to disk.
//!
//!     cargo run --example generate_corpus -- /tmp/charts 12 hard

use std::path::PathBuf;

use chartline::exchange::write_chart_sample;
use chartline::rasterize::render_chart;
use chartline::synth::{corpus_seed, generate_spec, DifficultyProfile};

fn main() -> chartline::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "charts".into()));
    let count: u64 = args.next().map_or(8, |c| c.parse().expect("count must be an integer"));
    let profile: DifficultyProfile = args.next().as_deref().unwrap_or("mixed").parse()?;
    std::fs::create_dir_all(&out)?;

    for i in 0..count {
        let spec = generate_spec(corpus_seed(2024, i), profile);
        let sample = render_chart(&spec)?;
        let path = write_chart_sample(&out, &format!("chart_{i:05}"), &sample)?;
        println!("{} {:>9} {} lines", path.display(), spec.pattern, spec.n_lines);
    }
    Ok(())
}
