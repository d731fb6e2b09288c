use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{CefrLevel, Dimension, Document, Exclusion, Language};

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct LanguageDimensionStats {
    /// False when the dimension is dropped for the language altogether.
    pub available: bool,
    pub usable: usize,
    /// Label counts, one entry per CEFR level in scale order.
    pub histogram: BTreeMap<CefrLevel, usize>,
    pub excluded: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DimensionStats {
    pub dimension: Dimension,
    pub per_language: BTreeMap<Language, LanguageDimensionStats>,
}

impl DimensionStats {
    pub fn usable(&self) -> usize {
        self.per_language.values().map(|s| s.usable).sum()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CorpusStats {
    pub total: usize,
    pub per_language: BTreeMap<Language, usize>,
    pub dimensions: Vec<DimensionStats>,
}

pub fn corpus_stats(documents: &[Document], exclusions: &[Exclusion]) -> CorpusStats {
    let mut per_language: BTreeMap<Language, usize> =
        Language::ALL.iter().map(|&l| (l, 0)).collect();
    for doc in documents {
        *per_language.entry(doc.language).or_default() += 1;
    }

    let dimensions = Dimension::ALL
        .iter()
        .map(|&dimension| {
            let mut langs: BTreeMap<Language, LanguageDimensionStats> = Language::ALL
                .iter()
                .map(|&l| {
                    let stats = LanguageDimensionStats {
                        available: dimension.available_for(l),
                        histogram: CefrLevel::ALL.iter().map(|&c| (c, 0)).collect(),
                        ..Default::default()
                    };
                    (l, stats)
                })
                .collect();
            for doc in documents {
                if let Some(level) = doc.label(dimension) {
                    let s = langs.get_mut(&doc.language).expect("all languages present");
                    s.usable += 1;
                    *s.histogram.entry(level).or_default() += 1;
                }
            }
            for ex in exclusions.iter().filter(|e| e.dimension == dimension) {
                langs
                    .get_mut(&ex.language)
                    .expect("all languages present")
                    .excluded += 1;
            }
            DimensionStats {
                dimension,
                per_language: langs,
            }
        })
        .collect();

    CorpusStats {
        total: documents.len(),
        per_language,
        dimensions,
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "documents\t{}", self.total)?;
        for (lang, n) in &self.per_language {
            writeln!(f, "  {lang}\t{n}")?;
        }
        writeln!(f)?;
        write!(f, "dimension\tlanguage\tusable\texcluded")?;
        for level in CefrLevel::ALL {
            write!(f, "\t{level}")?;
        }
        writeln!(f)?;
        for dim in &self.dimensions {
            for (lang, s) in &dim.per_language {
                if !s.available {
                    writeln!(f, "{}\t{lang}\texcluded", dim.dimension)?;
                    continue;
                }
                write!(f, "{}\t{lang}\t{}\t{}", dim.dimension, s.usable, s.excluded)?;
                for count in s.histogram.values() {
                    write!(f, "\t{count}")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, language: Language, overall: CefrLevel) -> Document {
        Document {
            id: id.into(),
            language,
            sentences: vec![],
            labels: [(Dimension::Overall, overall)].into_iter().collect(),
        }
    }

    #[test]
    fn empty_corpus_has_zero_counts() {
        let s = corpus_stats(&[], &[]);
        assert_eq!(s.total, 0);
        assert!(s.per_language.values().all(|&n| n == 0));
        assert!(s.dimensions.iter().all(|d| d.usable() == 0));
    }

    #[test]
    fn totals_match_language_sum_and_histograms_are_ordered() {
        let docs = vec![
            doc("a", Language::De, CefrLevel::B1),
            doc("b", Language::De, CefrLevel::A1),
            doc("c", Language::It, CefrLevel::A2),
            doc("d", Language::Cz, CefrLevel::B2),
        ];
        let s = corpus_stats(&docs, &[]);
        assert_eq!(s.total, s.per_language.values().sum::<usize>());
        assert_eq!(s.per_language[&Language::De], 2);
        let overall = &s.dimensions[0];
        let de = &overall.per_language[&Language::De];
        let levels: Vec<_> = de.histogram.keys().copied().collect();
        assert_eq!(levels, CefrLevel::ALL.to_vec());
        assert_eq!(de.histogram[&CefrLevel::A1], 1);
        assert_eq!(de.histogram[&CefrLevel::B1], 1);
        let socio = &s.dimensions[6];
        assert!(!socio.per_language[&Language::Cz].available);
        let text = s.to_string();
        assert!(text.contains("sociolinguistic\tcz\texcluded"));
    }
}
