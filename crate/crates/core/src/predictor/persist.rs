use std::path::Path;

use crate::features::{FeatureVocab, Vocab};
use crate::kernel::TacticName;
use crate::neural::{load_weights, save_weights, ParamStore, WeightsFile};

use super::{ArgumentModel, ModelConfig, Predictor, PredictorError, TacticModel};

const TAC: &str = "tactic.";
const ARG: &str = "argument.";

fn config_items(c: &ModelConfig) -> Vec<String> {
    vec![
        format!("embed_dim={}", c.embed_dim),
        format!("ffn_width={}", c.ffn_width),
        format!("arg_dim={}", c.arg_dim),
        format!("token_vocab={}", c.token_vocab),
        format!("max_seq={}", c.max_seq),
    ]
}

fn parse_config(items: &[String]) -> Result<ModelConfig, PredictorError> {
    let mut c = ModelConfig::default();
    for it in items {
        let (k, v) = it
            .split_once('=')
            .ok_or_else(|| PredictorError::Layout(format!("config entry {it}")))?;
        let v: usize = v
            .parse()
            .map_err(|_| PredictorError::Layout(format!("config entry {it}")))?;
        match k {
            "embed_dim" => c.embed_dim = v,
            "ffn_width" => c.ffn_width = v,
            "arg_dim" => c.arg_dim = v,
            "token_vocab" => c.token_vocab = v,
            "max_seq" => c.max_seq = v,
            _ => return Err(PredictorError::Layout(format!("unknown config key {k}"))),
        }
    }
    Ok(c)
}

pub fn predictor_to_weights(p: &Predictor) -> WeightsFile {
    let mut params = ParamStore::new();
    for (prefix, store) in [(TAC, &p.tactic.params), (ARG, &p.argument.params)] {
        for (name, t) in store.names().iter().zip(store.tensors()) {
            params.add(&format!("{prefix}{name}"), t.clone());
        }
    }
    WeightsFile {
        vocabs: vec![
            ("config".into(), config_items(&p.config)),
            (
                "tactics".into(),
                p.tactic.tactics.iter().map(|t| t.to_string()).collect(),
            ),
            ("prev_tactic".into(), p.tactic.features.prev_tactic.items.clone()),
            ("head_token".into(), p.tactic.features.head_token.items.clone()),
            ("tokens".into(), p.argument.tokens.items.clone()),
        ],
        params,
    }
}

pub fn predictor_from_weights(w: &WeightsFile) -> Result<Predictor, PredictorError> {
    let vocab = |name: &str| {
        w.vocab(name)
            .map(<[String]>::to_vec)
            .ok_or_else(|| PredictorError::Layout(format!("missing vocabulary {name}")))
    };
    let config = parse_config(&vocab("config")?)?;
    let tactics = vocab("tactics")?
        .iter()
        .map(|s| TacticName::parse(s).ok_or_else(|| PredictorError::Layout(format!("unknown tactic {s}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let features = FeatureVocab {
        prev_tactic: Vocab::from_items(vocab("prev_tactic")?),
        head_token: Vocab::from_items(vocab("head_token")?),
    };
    let tokens = Vocab::from_items(vocab("tokens")?);
    let mut tac = ParamStore::new();
    let mut arg = ParamStore::new();
    for (name, t) in w.params.names().iter().zip(w.params.tensors()) {
        if let Some(n) = name.strip_prefix(TAC) {
            tac.add(n, t.clone());
        } else if let Some(n) = name.strip_prefix(ARG) {
            arg.add(n, t.clone());
        } else {
            return Err(PredictorError::Layout(format!("unexpected tensor {name}")));
        }
    }
    // Rebuild fresh models and compare shapes so a mismatched file cannot
    // be misread.
    let fresh_t = TacticModel::new(&config, tactics.clone(), features.clone(), 0);
    let fresh_a = ArgumentModel::new(&config, tokens.clone(), tactics.clone(), 0);
    for (fresh, got) in [(&fresh_t.params, &tac), (&fresh_a.params, &arg)] {
        let shapes = |s: &ParamStore| -> Vec<(String, (usize, usize))> {
            s.names()
                .iter()
                .cloned()
                .zip(s.tensors().iter().map(|t| t.shape()))
                .collect()
        };
        if shapes(fresh) != shapes(got) {
            return Err(PredictorError::Layout("tensor names or shapes differ".into()));
        }
    }
    let tactic = TacticModel::from_parts(tac, tactics.clone(), features)
        .ok_or_else(|| PredictorError::Layout("tactic model tensors".into()))?;
    let argument = ArgumentModel::from_parts(arg, tokens, tactics, config.max_seq)
        .ok_or_else(|| PredictorError::Layout("argument model tensors".into()))?;
    Ok(Predictor {
        config,
        tactic,
        argument,
    })
}

pub fn save_predictor(p: &Predictor, path: &Path) -> Result<(), PredictorError> {
    Ok(save_weights(&predictor_to_weights(p), path)?)
}

pub fn load_predictor(path: &Path) -> Result<Predictor, PredictorError> {
    predictor_from_weights(&load_weights(path)?)
}
