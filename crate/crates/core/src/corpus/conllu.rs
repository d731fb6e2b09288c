//! Minimal CoNLL-U reader keeping the columns the feature extractors need.

use std::io::{BufRead, BufReader, Read};

use crate::error::{Error, Result};

/// The seventeen Universal POS tags.
pub const UPOS_TAGS: [&str; 17] = [
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART", "PRON", "PROPN",
    "PUNCT", "SCONJ", "SYM", "VERB", "X",
];

/// Head value of the sentence root.
pub const ROOT_HEAD: usize = 0;

/// A syntactic word from a UD parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub form: String,
    pub upos: String,
    /// 1-based index of the head within the sentence, or [`ROOT_HEAD`].
    pub head: usize,
    pub deprel: String,
}

pub type Sentence = Vec<Token>;

/// Parses CoNLL-U text into sentences of syntactic words.
///
/// Multiword-token ranges (`1-2`) and empty nodes (`1.1`) are skipped.
pub fn parse_conllu<R: Read>(input: R) -> Result<Vec<Sentence>> {
    let reader = BufReader::new(input);
    let mut sentences = Vec::new();
    let mut current: Sentence = Vec::new();
    let mut sentence_start = 1;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Conllu {
            line: lineno,
            message: e.to_string(),
        })?;
        let line = line.trim_end_matches(['\r', '\n']);

        if line.trim().is_empty() {
            if !current.is_empty() {
                check_heads(&current, sentence_start)?;
                sentences.push(std::mem::take(&mut current));
            }
            sentence_start = lineno + 1;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::Conllu {
                line: lineno,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let id: usize = id.parse().map_err(|_| Error::Conllu {
            line: lineno,
            message: format!("invalid token id `{id}`"),
        })?;
        if id != current.len() + 1 {
            return Err(Error::Conllu {
                line: lineno,
                message: format!(
                    "token id {id} out of sequence (expected {})",
                    current.len() + 1
                ),
            });
        }
        let upos = cols[3];
        if !UPOS_TAGS.contains(&upos) {
            return Err(Error::Conllu {
                line: lineno,
                message: format!("`{upos}` is not a Universal POS tag"),
            });
        }
        let head: usize = cols[6].parse().map_err(|_| Error::Conllu {
            line: lineno,
            message: format!("non-integer HEAD `{}`", cols[6]),
        })?;
        current.push(Token {
            form: cols[1].to_string(),
            upos: upos.to_string(),
            head,
            deprel: cols[7].to_string(),
        });
    }
    if !current.is_empty() {
        check_heads(&current, sentence_start)?;
        sentences.push(current);
    }
    Ok(sentences)
}

fn check_heads(sentence: &[Token], start_line: usize) -> Result<()> {
    for (i, tok) in sentence.iter().enumerate() {
        if tok.head > sentence.len() {
            return Err(Error::Conllu {
                line: start_line + i,
                message: format!(
                    "HEAD {} outside sentence of {} tokens",
                    tok.head,
                    sentence.len()
                ),
            });
        }
    }
    Ok(())
}

/// Writes sentences back as CoNLL-U. Columns the reader ignores are `_`.
pub fn write_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        for (i, tok) in sentence.iter().enumerate() {
            out.push_str(&format!(
                "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_\n",
                i + 1,
                tok.form,
                tok.upos,
                tok.head,
                tok.deprel
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TWO_SENTENCES: &str = "\
# sent_id = 1
# text = Der Hund sieht die Katze
1\tDer\tder\tDET\t_\t_\t2\tdet\t_\t_
2\tHund\tHund\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tsieht\tsehen\tVERB\t_\t_\t0\troot\t_\t_
4\tdie\tder\tDET\t_\t_\t5\tdet\t_\t_
5\tKatze\tKatze\tNOUN\t_\t_\t3\tobj\t_\t_

# sent_id = 2
1\tIch\tich\tPRON\t_\t_\t2\tnsubj\t_\t_
2\tlaufe\tlaufen\tVERB\t_\t_\t0\troot\t_\t_
3\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_
";

    #[test]
    fn empty_input() {
        assert!(parse_conllu("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn two_sentences() {
        let s = parse_conllu(TWO_SENTENCES.as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].len(), 5);
        assert_eq!(s[1].len(), 3);
        assert_eq!(s.iter().map(Vec::len).sum::<usize>(), 8);
        assert_eq!(s[0][1].form, "Hund");
        assert_eq!(s[0][1].upos, "NOUN");
        assert_eq!(s[0][1].head, 3);
        assert_eq!(s[0][1].deprel, "nsubj");
    }

    #[test]
    fn multiword_ranges_and_empty_nodes_are_skipped() {
        let text = "\
1-2\tzum\t_\t_\t_\t_\t_\t_\t_\t_
1\tzu\tzu\tADP\t_\t_\t2\tcase\t_\t_
2\tdem\tder\tDET\t_\t_\t0\troot\t_\t_
2.1\tx\t_\tX\t_\t_\t_\t_\t_\t_
";
        let s = parse_conllu(text.as_bytes()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].len(), 2);
        assert_eq!(s[0][0].form, "zu");
    }

    #[test]
    fn crlf_and_missing_trailing_blank_line() {
        let text = "1\tJa\tja\tINTJ\t_\t_\t0\troot\t_\t_\r\n";
        let s = parse_conllu(text.as_bytes()).unwrap();
        assert_eq!(s[0][0].deprel, "root");
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let text = "# c\n1\tJa\tja\tINTJ\t_\t_\t0\troot\t_\n";
        match parse_conllu(text.as_bytes()) {
            Err(Error::Conllu { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_integer_head_is_an_error() {
        let text = "1\tJa\tja\tINTJ\t_\t_\tx\troot\t_\t_\n";
        assert!(matches!(
            parse_conllu(text.as_bytes()),
            Err(Error::Conllu { line: 1, .. })
        ));
    }

    #[test]
    fn head_out_of_bounds_is_an_error() {
        let text =
            "1\tJa\tja\tINTJ\t_\t_\t0\troot\t_\t_\n2\tNein\tnein\tINTJ\t_\t_\t7\tdep\t_\t_\n";
        assert!(parse_conllu(text.as_bytes()).is_err());
    }

    #[test]
    fn unknown_upos_is_an_error() {
        let text = "1\tJa\tja\tFOO\t_\t_\t0\troot\t_\t_\n";
        assert!(parse_conllu(text.as_bytes()).is_err());
    }

    fn arb_sentence() -> impl Strategy<Value = Sentence> {
        (1usize..8).prop_flat_map(|len| {
            proptest::collection::vec(
                (
                    "[A-Za-zÄÖÜäöüß,.!?0-9]{1,8}",
                    proptest::sample::select(UPOS_TAGS.to_vec()),
                    0..=len,
                    "[a-z]{2,6}(:[a-z]{2,4})?",
                ),
                len,
            )
            .prop_map(|toks| {
                toks.into_iter()
                    .map(|(form, upos, head, deprel)| Token {
                        form,
                        upos: upos.to_string(),
                        head,
                        deprel,
                    })
                    .collect()
            })
        })
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(sentences in proptest::collection::vec(arb_sentence(), 0..5)) {
            let text = write_conllu(&sentences);
            let back = parse_conllu(text.as_bytes()).unwrap();
            prop_assert_eq!(back, sentences);
        }
    }
}
