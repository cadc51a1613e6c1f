//! Writes a small synthetic corpus (clear episode files plus matching SRT
//! subtitles) for trying the CLI end to end:
//!
//!   cargo run -p turnkit-synth --example demo_corpus -- /tmp/demo

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use turnkit_synth::{episode_to_srt, synth_corpus, SrtOptions, SynthOptions};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| {
        eprintln!("usage: demo_corpus <output dir>");
        std::process::exit(1);
    });
    let root = std::path::PathBuf::from(out);
    let clear = root.join("clear");
    let srt = root.join("srt");
    std::fs::create_dir_all(&clear).unwrap();
    std::fs::create_dir_all(&srt).unwrap();

    let opts = SynthOptions {
        series: "demo".into(),
        seasons: 2,
        episodes_per_season: 3,
        tokens_per_episode: (2_500, 3_500),
        vocabulary: 4_000,
        with_addressees: true,
        with_scenes: true,
        with_shots: true,
    };
    let corpus = synth_corpus(&opts, 2024);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for episode in &corpus {
        let name = format!("demo_S{:02}E{:02}", episode.season, episode.episode);
        turnkit::corpus::save_episode(&clear.join(format!("{name}.json")), episode).unwrap();
        let text = episode_to_srt(episode, &SrtOptions { markup_noise: true }, &mut rng);
        std::fs::write(srt.join(format!("{name}.srt")), text).unwrap();
    }
    println!("wrote {} episodes under {}", corpus.len(), root.display());
}
