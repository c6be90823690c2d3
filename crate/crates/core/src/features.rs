//! Feature extraction: TF.IDF-weighted unigrams and bigrams, eight lexicon
//! features per lexicon, and positive/negative emoticon counts.
//!
//! Column layout of an assembled vector:
//!
//! ```text
//! [ 0 .. V )                 TF.IDF n-grams from the vocabulary
//! [ V + 8k .. V + 8k + 8 )   lexicon block k, in configured lexicon order
//! [ V + 8K, V + 8K + 1 ]     positive / negative emoticon counts
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::FeatureError;
use crate::lexicon::SentimentLexicon;
use crate::pipeline::{Token, TokenKind};

/// Number of dense features contributed by each lexicon.
pub const LEXICON_BLOCK: usize = 8;
/// Number of trailing emoticon features.
pub const EMOTICON_BLOCK: usize = 2;

const VOCAB_MAGIC: &str = "# mksent-vocab v1";

/// N-gram terms of one document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub unigrams: Vec<String>,
    /// Adjacent word pairs joined with `_`.
    pub bigrams: Vec<String>,
}

impl Document {
    /// Unigrams are the feature terms of words, hashtags, numbers and
    /// emoticons; bigrams pair consecutive surviving word tokens.
    pub fn from_tokens(tokens: &[Token]) -> Document {
        let unigrams = tokens
            .iter()
            .filter(|t| !matches!(t.kind, TokenKind::Punctuation | TokenKind::Url | TokenKind::Mention))
            .map(|t| t.feature_term().into_owned())
            .collect();
        let bigrams = tokens
            .windows(2)
            .filter(|w| w[0].is_word() && w[1].is_word())
            .map(|w| format!("{}_{}", w[0].feature_term(), w[1].feature_term()))
            .collect();
        Document { unigrams, bigrams }
    }

    /// Treats every item as an adjacent word.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Document {
        let tokens: Vec<Token> = words.iter().map(|w| Token::word(w.as_ref())).collect();
        Document::from_tokens(&tokens)
    }

    fn terms(&self, orders: NgramOrders) -> impl Iterator<Item = &str> {
        let uni = self.unigrams.iter().filter(move |_| orders.unigrams);
        let bi = self.bigrams.iter().filter(move |_| orders.bigrams);
        uni.chain(bi).map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NgramOrders {
    pub unigrams: bool,
    pub bigrams: bool,
}

impl Default for NgramOrders {
    fn default() -> Self {
        NgramOrders {
            unigrams: true,
            bigrams: true,
        }
    }
}

/// Frozen term -> column mapping with training document frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct VocabIndex {
    terms: Vec<String>,
    ids: HashMap<String, usize>,
    df: Vec<u64>,
    n_docs: u64,
    pub min_df: u64,
    pub orders: NgramOrders,
}

pub fn build_vocab(docs: &[Document], min_df: u64, orders: NgramOrders) -> Result<VocabIndex, FeatureError> {
    if docs.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }
    let mut df: BTreeMap<&str, u64> = BTreeMap::new();
    for doc in docs {
        let unique: HashSet<&str> = doc.terms(orders).collect();
        for t in unique {
            *df.entry(t).or_default() += 1;
        }
    }
    let kept: Vec<(String, u64)> = df
        .into_iter()
        .filter(|&(_, d)| d >= min_df)
        .map(|(t, d)| (t.to_string(), d))
        .collect();
    Ok(VocabIndex::from_parts(kept, docs.len() as u64, min_df, orders))
}

impl VocabIndex {
    fn from_parts(kept: Vec<(String, u64)>, n_docs: u64, min_df: u64, orders: NgramOrders) -> VocabIndex {
        let (terms, df): (Vec<String>, Vec<u64>) = kept.into_iter().unzip();
        let ids = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        VocabIndex {
            terms,
            ids,
            df,
            n_docs,
            min_df,
            orders,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.ids.get(term).copied()
    }

    pub fn term(&self, id: usize) -> Option<&str> {
        self.terms.get(id).map(String::as_str)
    }

    pub fn df(&self, id: usize) -> u64 {
        self.df[id]
    }

    /// `ln((1 + N) / (1 + df)) + 1`
    pub fn idf(&self, id: usize) -> f64 {
        ((1.0 + self.n_docs as f64) / (1.0 + self.df[id] as f64)).ln() + 1.0
    }

    pub fn to_tsv(&self) -> String {
        let orders = match (self.orders.unigrams, self.orders.bigrams) {
            (true, true) => "1,2",
            (true, false) => "1",
            (false, true) => "2",
            (false, false) => "",
        };
        let mut out = format!(
            "{VOCAB_MAGIC}\n#docs\t{}\n#min_df\t{}\n#orders\t{orders}\n",
            self.n_docs, self.min_df
        );
        for (i, t) in self.terms.iter().enumerate() {
            let _ = writeln!(out, "{}\t{i}\t{}", crate::tsv::escape(t), self.df[i]);
        }
        out
    }

    pub fn parse(text: &str) -> Result<VocabIndex, FeatureError> {
        let bad = |line: usize, message: &str| FeatureError::Format {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate();
        if lines.next().map(|(_, l)| l.trim_end()) != Some(VOCAB_MAGIC) {
            return Err(bad(1, "missing vocab header"));
        }
        let mut n_docs = None;
        let mut min_df = 1;
        let mut orders = NgramOrders::default();
        let mut kept = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            match cols[..] {
                ["#docs", v] => n_docs = Some(v.parse().map_err(|_| bad(line_no, "bad document count"))?),
                ["#min_df", v] => min_df = v.parse().map_err(|_| bad(line_no, "bad min_df"))?,
                ["#orders", v] => {
                    orders = NgramOrders {
                        unigrams: v.split(',').any(|o| o == "1"),
                        bigrams: v.split(',').any(|o| o == "2"),
                    }
                }
                [term, id, df] => {
                    let id: usize = id.parse().map_err(|_| bad(line_no, "bad id"))?;
                    if id != kept.len() {
                        return Err(bad(line_no, "ids must be dense and in order"));
                    }
                    let df: u64 = df.parse().map_err(|_| bad(line_no, "bad df"))?;
                    kept.push((crate::tsv::unescape(term), df));
                }
                _ => return Err(bad(line_no, "unrecognised row")),
            }
        }
        let n_docs = n_docs.ok_or_else(|| bad(0, "missing #docs"))?;
        Ok(VocabIndex::from_parts(kept, n_docs, min_df, orders))
    }

    pub fn save(&self, path: &Path) -> Result<(), FeatureError> {
        fs::write(path, self.to_tsv()).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<VocabIndex, FeatureError> {
        let text = fs::read_to_string(path).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        VocabIndex::parse(&text)
    }
}

/// Sparse TF.IDF weights `(column, weight)` sorted by column. Raw term counts
/// are used as TF; out-of-vocabulary terms are skipped.
pub fn tfidf_vector(doc: &Document, vocab: &VocabIndex) -> Vec<(usize, f64)> {
    let mut tf: BTreeMap<usize, u32> = BTreeMap::new();
    for term in doc.terms(vocab.orders) {
        if let Some(id) = vocab.id(term) {
            *tf.entry(id).or_default() += 1;
        }
    }
    tf.into_iter()
        .map(|(id, count)| (id, count as f64 * vocab.idf(id)))
        .collect()
}

/// Positive count, negative count, positive ratio, negative ratio, score sum,
/// positive score sum, negative score sum, matched count.
pub fn lexicon_features(tokens: &[Token], lexicon: &SentimentLexicon) -> [f64; LEXICON_BLOCK] {
    let mut pos = 0.0;
    let mut neg = 0.0;
    let mut pos_sum = 0.0;
    let mut neg_sum = 0.0;
    for score in tokens.iter().filter_map(|t| lexicon.lookup(t)) {
        if score > 0.0 {
            pos += 1.0;
            pos_sum += score;
        } else {
            neg += 1.0;
            neg_sum += score;
        }
    }
    let total = pos + neg;
    let (pos_ratio, neg_ratio) = if total > 0.0 { (pos / total, neg / total) } else { (0.0, 0.0) };
    [pos, neg, pos_ratio, neg_ratio, pos_sum + neg_sum, pos_sum, neg_sum, total]
}

/// Emoticon polarity table; surfaces are matched after lowercasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmoticonTable {
    pub positive: BTreeSet<String>,
    pub negative: BTreeSet<String>,
}

impl Default for EmoticonTable {
    fn default() -> Self {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        EmoticonTable {
            positive: set(&[":)", ":-)", ":))", ":)))", ":d", ":-d", "=)", ";)", ";-)", ":]", "(:", "<3"]),
            negative: set(&[":(", ":-(", ":((", ":(((", ":'(", ":[", "=(", "):", ":/", ":-/"]),
        }
    }
}

impl EmoticonTable {
    /// TSV `emoticon<TAB>pos|neg`.
    pub fn parse(text: &str) -> Result<EmoticonTable, FeatureError> {
        let mut table = EmoticonTable {
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
        };
        for (line, row) in crate::tsv::content_lines(text) {
            let (e, polarity) = row.split_once('\t').ok_or_else(|| FeatureError::Format {
                line,
                message: "expected emoticon<TAB>pos|neg".into(),
            })?;
            let e = e.trim().to_lowercase();
            match polarity.trim() {
                "pos" => table.positive.insert(e),
                "neg" => table.negative.insert(e),
                other => {
                    return Err(FeatureError::Format {
                        line,
                        message: format!("polarity {other:?} is not pos or neg"),
                    })
                }
            };
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<EmoticonTable, FeatureError> {
        let text = fs::read_to_string(path).map_err(|source| FeatureError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        EmoticonTable::parse(&text)
    }
}

pub fn emoticon_features(tokens: &[Token], table: &EmoticonTable) -> [f64; EMOTICON_BLOCK] {
    let mut counts = [0.0; EMOTICON_BLOCK];
    for t in tokens.iter().filter(|t| t.kind == TokenKind::Emoticon) {
        if table.positive.contains(&t.surface) {
            counts[0] += 1.0;
        } else if table.negative.contains(&t.surface) {
            counts[1] += 1.0;
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureConfig {
    pub require_lexicons: bool,
    pub emoticons: EmoticonTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// TF.IDF part, sorted by column, no stored zeros.
    pub sparse: Vec<(usize, f64)>,
    /// Lexicon blocks followed by the emoticon pair.
    pub dense: Vec<f64>,
}

impl FeatureVector {
    /// Flattened `(column, value)` pairs with dense columns offset by `vocab_len`.
    pub fn to_indexed(&self, vocab_len: usize) -> Vec<(usize, f64)> {
        self.sparse
            .iter()
            .copied()
            .chain(
                self.dense
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (vocab_len + i, v)),
            )
            .filter(|&(_, v)| v != 0.0)
            .collect()
    }
}

pub fn dense_len(n_lexicons: usize) -> usize {
    LEXICON_BLOCK * n_lexicons + EMOTICON_BLOCK
}

pub fn assemble_features(
    tokens: &[Token],
    vocab: &VocabIndex,
    lexicons: &[SentimentLexicon],
    cfg: &FeatureConfig,
) -> Result<FeatureVector, FeatureError> {
    if cfg.require_lexicons && lexicons.is_empty() {
        return Err(FeatureError::NoLexicons);
    }
    let sparse = tfidf_vector(&Document::from_tokens(tokens), vocab)
        .into_iter()
        .filter(|&(_, v)| v != 0.0)
        .collect();
    let mut dense = Vec::with_capacity(dense_len(lexicons.len()));
    for lex in lexicons {
        dense.extend(lexicon_features(tokens, lex));
    }
    dense.extend(emoticon_features(tokens, &cfg.emoticons));
    Ok(FeatureVector { sparse, dense })
}

/// Sparse matrix in `row col value` triplet text, one nonzero per line,
/// preceded by a `# rows R cols C` header.
pub fn format_triplets(rows: &[Vec<(usize, f64)>], cols: usize) -> String {
    let mut out = format!("# rows {} cols {cols}\n", rows.len());
    for (r, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            let _ = writeln!(out, "{r} {c} {v}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(ws: &[&str]) -> Document {
        Document::from_words(ws)
    }

    #[test]
    fn unigrams_and_bigrams() {
        let v = build_vocab(&[doc(&["a", "b"]), doc(&["a"])], 1, NgramOrders::default()).unwrap();
        let terms: Vec<_> = (0..v.len()).map(|i| v.term(i).unwrap()).collect();
        assert_eq!(terms, ["a", "a_b", "b"]);
        assert_eq!(v.df(v.id("a").unwrap()), 2);
    }

    #[test]
    fn min_df_threshold() {
        let v = build_vocab(&[doc(&["a", "b"]), doc(&["a"])], 2, NgramOrders::default()).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.id("a"), Some(0));
    }

    #[test]
    fn empty_corpus() {
        assert!(matches!(
            build_vocab(&[], 1, NgramOrders::default()),
            Err(FeatureError::EmptyCorpus)
        ));
    }

    #[test]
    fn single_doc_weight() {
        let d = doc(&["a", "a"]);
        let v = build_vocab(std::slice::from_ref(&d), 1, NgramOrders::default()).unwrap();
        let w = tfidf_vector(&d, &v);
        let a = v.id("a").unwrap();
        assert!(w.contains(&(a, 2.0)));
    }

    #[test]
    fn out_of_vocab_is_skipped() {
        let v = build_vocab(&[doc(&["a"])], 1, NgramOrders::default()).unwrap();
        assert!(tfidf_vector(&doc(&["z", "y"]), &v).is_empty());
    }

    #[test]
    fn bigrams_skip_non_words() {
        let tokens = crate::pipeline::tokenize("добро :) утро , ден");
        let d = Document::from_tokens(&tokens);
        assert_eq!(d.unigrams, [
            "добро", ":)", "утро", "ден"
        ]);
        assert!(d.bigrams.is_empty());
    }

    #[test]
    fn lexicon_block_arithmetic() {
        let lex = SentimentLexicon::from_entries("l", [("а", 1.0), ("б", 1.0), ("в", -2.0)]).unwrap();
        let toks: Vec<Token> = ["а", "б", "в", "г"].iter().map(|w| Token::word(*w)).collect();
        assert_eq!(lexicon_features(&toks, &lex), [2.0, 1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0, 2.0, -2.0, 3.0]);
        assert_eq!(lexicon_features(&toks[3..], &lex), [0.0; 8]);
        let lex = SentimentLexicon::from_entries("l", [("а", 0.7)]).unwrap();
        assert_eq!(lexicon_features(&toks[..1], &lex), [1.0, 0.0, 1.0, 0.0, 0.7, 0.7, 0.0, 1.0]);
    }

    #[test]
    fn emoticon_counts() {
        let t = EmoticonTable::default();
        let toks = crate::pipeline::tokenize(":) :( :)");
        assert_eq!(emoticon_features(&toks, &t), [2.0, 1.0]);
        assert_eq!(emoticon_features(&crate::pipeline::tokenize("збор"), &t), [0.0, 0.0]);
        assert_eq!(emoticon_features(&crate::pipeline::tokenize(":P"), &t), [0.0, 0.0]);
    }

    #[test]
    fn assembled_layout() {
        let tokens = crate::pipeline::tokenize("добро утро :)");
        let vocab = build_vocab(&[Document::from_tokens(&tokens)], 1, NgramOrders::default()).unwrap();
        let cfg = FeatureConfig::default();
        let fv = assemble_features(&tokens, &vocab, &[], &cfg).unwrap();
        assert_eq!(fv.dense, vec![1.0, 0.0]);

        let a = SentimentLexicon::from_entries("a", [("добро", 1.0)]).unwrap();
        let b = SentimentLexicon::from_entries("b", [("утро", -0.5)]).unwrap();
        let ab = assemble_features(&tokens, &vocab, &[a.clone(), b.clone()], &cfg).unwrap();
        assert_eq!(ab.dense.len(), 18);
        let ba = assemble_features(&tokens, &vocab, &[b, a], &cfg).unwrap();
        assert_eq!(ab.dense[..8], ba.dense[8..16]);
        assert_eq!(ab.dense[8..16], ba.dense[..8]);
        assert_eq!(ab.sparse, ba.sparse);

        let strict = FeatureConfig {
            require_lexicons: true,
            ..FeatureConfig::default()
        };
        assert!(matches!(
            assemble_features(&tokens, &vocab, &[], &strict),
            Err(FeatureError::NoLexicons)
        ));
    }

    #[test]
    fn vocab_tsv_round_trip() {
        let v = build_vocab(&[doc(&["а", "б"]), doc(&["а", "в"])], 1, NgramOrders::default()).unwrap();
        assert_eq!(VocabIndex::parse(&v.to_tsv()).unwrap(), v);
    }
}
