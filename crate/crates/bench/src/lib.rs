//! Shared fixtures for the benchmarks in `benches/`.

use tacsearch::corpusgen::generate;
use tacsearch::features::TrainingSample;
use tacsearch::pipeline::{samples, RunConfig};
use tacsearch::predictor::{ModelConfig, Predictor, TrainConfig};
use tacsearch::proofscript::ScriptFile;

/// A small generated corpus.
pub fn corpus(files: usize) -> Vec<ScriptFile> {
    generate(0, files, 30)
}

pub fn training_samples(files: &[ScriptFile]) -> Vec<TrainingSample> {
    samples(files, true).expect("generated corpora linearize").0
}

/// Model sizes small enough to train inside a benchmark setup.
pub fn small_model() -> ModelConfig {
    ModelConfig {
        embed_dim: 32,
        ffn_width: 32,
        arg_dim: 16,
        ..ModelConfig::default()
    }
}

/// A predictor trained briefly on `files`.
pub fn quick_predictor(files: &[ScriptFile], epochs: usize) -> Predictor {
    let s = training_samples(files);
    let tc = TrainConfig {
        epochs,
        ..TrainConfig::default()
    };
    Predictor::train(&s, &small_model(), &tc).expect("non-empty corpus").0
}

/// Default run settings.
pub fn default_config() -> RunConfig {
    RunConfig::default()
}
