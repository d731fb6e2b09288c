//! Synthetic UD-parsed learner corpora written in the on-disk layout.

#![allow(dead_code)]

pub mod oracles;

use std::fs;
use std::path::Path;

use cefrscore::corpus::{
    write_conllu, CefrLevel, Dimension, Language, Sentence, Token, LABEL_COLUMNS,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct SyntheticSpec {
    pub per_language: Vec<(Language, usize)>,
    pub seed: u64,
    /// Sprinkle raw `0` / `1` ratings into the label table.
    pub messy_labels: bool,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            per_language: vec![(Language::De, 60), (Language::It, 45), (Language::Cz, 30)],
            seed: 7,
            messy_labels: false,
        }
    }
}

fn levels_for(lang: Language) -> &'static [CefrLevel] {
    use CefrLevel::*;
    match lang {
        Language::De => &[A1, A2, B1, B2, C1],
        Language::It => &[A2, B1],
        Language::Cz => &[A2, B1, B2],
    }
}

fn word(rng: &mut ChaCha8Rng, lang: Language) -> String {
    const SYL: [&str; 10] = ["ka", "lo", "mi", "ste", "ra", "un", "ve", "zi", "po", "ch"];
    let n = rng.gen_range(1..4);
    let mut w: String = (0..n).map(|_| SYL[rng.gen_range(0..SYL.len())]).collect();
    w.push_str(lang.code());
    w
}

/// A flat clause: subject NP, verb, optional object NP and extras whose
/// likelihood grows with the level.
fn sentence(rng: &mut ChaCha8Rng, lang: Language, level: usize) -> Sentence {
    let mut toks: Vec<(String, &str, usize, &str)> = Vec::new();
    let verb_idx = if rng.gen_bool(0.6) {
        toks.push((word(rng, lang), "DET", 2, "det"));
        toks.push((word(rng, lang), "NOUN", 3, "nsubj"));
        3
    } else {
        toks.push((word(rng, lang), "PRON", 2, "nsubj"));
        2
    };
    toks.push((word(rng, lang), "VERB", 0, "root"));
    let p_extra = 0.15 + 0.15 * level as f64;
    if rng.gen_bool(p_extra.min(0.95)) {
        toks.push((word(rng, lang), "ADV", verb_idx, "advmod"));
    }
    if rng.gen_bool(0.7) {
        let det = toks.len() + 1;
        toks.push((
            word(rng, lang),
            "DET",
            det + 1 + usize::from(level >= 2),
            "det",
        ));
        if level >= 2 {
            toks.push((word(rng, lang), "ADJ", det + 2, "amod"));
        }
        toks.push((word(rng, lang), "NOUN", verb_idx, "obj"));
    }
    if level >= 3 && rng.gen_bool(0.6) {
        let sc = toks.len() + 1;
        toks.push((word(rng, lang), "SCONJ", sc + 2, "mark"));
        toks.push((word(rng, lang), "PRON", sc + 2, "nsubj"));
        toks.push((word(rng, lang), "VERB", verb_idx, "advcl"));
    }
    toks.push((".".into(), "PUNCT", verb_idx, "punct"));
    toks.into_iter()
        .map(|(form, upos, head, deprel)| Token {
            form,
            upos: upos.to_string(),
            head,
            deprel: deprel.to_string(),
        })
        .collect()
}

/// Writes `labels.tsv` and `<lang>/<docid>.conllu` files under `root`.
pub fn write_corpus(root: &Path, spec: &SyntheticSpec) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut table = LABEL_COLUMNS.join("\t");
    table.push('\n');
    for &(lang, n) in &spec.per_language {
        let dir = root.join(lang.code());
        fs::create_dir_all(&dir).unwrap();
        let levels = levels_for(lang);
        for i in 0..n {
            let level = levels[i % levels.len()];
            let ordinal = level.ordinal();
            let n_sent = 2 + ordinal + rng.gen_range(0..4);
            let sentences: Vec<Sentence> = (0..n_sent)
                .map(|_| sentence(&mut rng, lang, ordinal))
                .collect();
            let id = format!("{}_{i:04}", lang.code());
            fs::write(dir.join(format!("{id}.conllu")), write_conllu(&sentences)).unwrap();

            let mut row = vec![id.clone(), lang.code().to_string()];
            for dim in Dimension::ALL {
                let shift: i32 = if dim == Dimension::Overall {
                    0
                } else {
                    rng.gen_range(-1..=1)
                };
                let l = (ordinal as i32 + shift).clamp(0, 5) as usize;
                let mut cell = CefrLevel::ALL[l].to_string();
                if spec.messy_labels {
                    if lang == Language::Cz
                        && dim == Dimension::SociolinguisticAppropriateness
                        && i % 2 == 0
                    {
                        cell = "0".into();
                    } else if i % 17 == 5 && dim == Dimension::VocabularyRange {
                        cell = "1".into();
                    }
                }
                row.push(cell);
            }
            table.push_str(&row.join("\t"));
            table.push('\n');
        }
    }
    fs::write(root.join("labels.tsv"), table).unwrap();
}

pub fn write_config(path: &Path, json: &str) {
    fs::write(path, json).unwrap();
}
