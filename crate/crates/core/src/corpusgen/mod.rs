//! Deterministic synthetic corpus of theorem files with reference proofs.

mod families;
mod io;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::kernel::parse_prop;
use crate::proofscript::{parse_file, parse_script, replays, theorem_env, ScriptFile, TheoremScript};

pub use families::{Draft, Family, FAMILIES};
pub use io::{read_corpus, write_corpus, CorpusError, Manifest, ManifestEntry};

pub const DEFAULT_FILES: usize = 40;
pub const DEFAULT_THEOREMS: usize = 30;

/// Seed of the generator for one file: files are independent of each other.
fn file_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

struct FileBuilder {
    file: ScriptFile,
    by_key: HashMap<String, String>,
}

impl FileBuilder {
    fn push(&mut self, d: &Draft, script: &str) -> String {
        let name = format!("{}_{}", d.stem, self.file.theorems.len());
        let statement =
            parse_prop(&d.statement).unwrap_or_else(|e| panic!("generator statement `{}`: {e}", d.statement));
        let ast = parse_script(script).unwrap_or_else(|e| panic!("generator script `{script}`: {e}"));
        self.file.theorems.push(TheoremScript {
            name: name.clone(),
            statement,
            script: ast,
        });
        let env = theorem_env(&self.file, self.file.theorems.len() - 1);
        let t = self.file.theorems.last().unwrap();
        assert!(
            replays(&env, &t.statement, &t.script),
            "generated proof does not replay: {t}"
        );
        if !d.key.is_empty() {
            self.by_key.entry(d.key.clone()).or_insert_with(|| name.clone());
        }
        name
    }
}

fn generate_file(seed: u64, index: usize, theorems: usize) -> ScriptFile {
    let mut rng = file_rng(seed, index);
    let atom = families::pick_atom(&mut rng);
    let header = format!("{}{}", families::DEFINITIONS, families::triv_definition(atom));
    let definitions = parse_file("defs", &header).expect("definitions parse").definitions;
    let mut b = FileBuilder {
        file: ScriptFile {
            name: format!("file{index:03}"),
            definitions,
            theorems: Vec::new(),
        },
        by_key: HashMap::new(),
    };
    while b.file.theorems.len() < theorems {
        let plan = families::pick_family(&mut rng)(&mut rng);
        let missing: Vec<&Draft> = plan.needs.iter().filter(|d| !b.by_key.contains_key(&d.key)).collect();
        if b.file.theorems.len() + missing.len() + 1 > theorems {
            // Not enough room left for the prerequisites; fall back to a
            // self-contained family.
            let plan = families::imp_refl(&mut rng);
            b.push(&plan.draft, &plan.draft.script);
            continue;
        }
        for d in missing {
            b.push(d, &d.script);
        }
        let mut script = plan.draft.script.clone();
        for (i, d) in plan.needs.iter().enumerate() {
            script = script.replace(&format!("{{{i}}}"), &b.by_key[&d.key]);
        }
        b.push(&plan.draft, &script);
    }
    b.file
}

/// `n_files` files of `thms_per_file` theorems each, determined by `seed`.
pub fn generate(seed: u64, n_files: usize, thms_per_file: usize) -> Vec<ScriptFile> {
    assert!(n_files >= 1, "need at least one file");
    (0..n_files).map(|i| generate_file(seed, i, thms_per_file)).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<ScriptFile>,
    pub test: Vec<ScriptFile>,
}

/// File-level split: shuffle files with `seed`, keep round(ratio * n) for
/// training, and drop test files without theorems.
pub fn split(corpus: &[ScriptFile], ratio: f64, seed: u64) -> Split {
    assert!(ratio > 0.0 && ratio < 1.0, "ratio must lie in (0, 1)");
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = ((ratio * corpus.len() as f64).round() as usize).min(corpus.len());
    let (tr, te) = order.split_at(n_train);
    let mut tr = tr.to_vec();
    let mut te = te.to_vec();
    tr.sort_unstable();
    te.sort_unstable();
    Split {
        train: tr.iter().map(|&i| corpus[i].clone()).collect(),
        test: te
            .iter()
            .map(|&i| corpus[i].clone())
            .filter(|f| !f.theorems.is_empty())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_theorem_replays() {
        let c = generate(7, 1, 1);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].theorems.len(), 1);
        let env = theorem_env(&c[0], 0);
        let t = &c[0].theorems[0];
        assert!(replays(&env, &t.statement, &t.script));
    }

    #[test]
    fn deterministic() {
        let a = generate(3, 3, 12);
        let b = generate(3, 3, 12);
        assert_eq!(a, b);
        assert_ne!(a, generate(4, 3, 12));
    }

    #[test]
    fn split_sizes() {
        let c = generate(0, 10, 2);
        let s = split(&c, 0.9, 0);
        assert_eq!((s.train.len(), s.test.len()), (9, 1));
        let s = split(&c[..2], 0.5, 0);
        assert_eq!((s.train.len(), s.test.len()), (1, 1));
        let s = split(&c, 0.7, 5);
        for f in &s.test {
            assert!(s.train.iter().all(|g| g.name != f.name));
        }
    }
}
