//! Labeled tweet datasets.
//!
//! Two on-disk formats are supported:
//!
//! * TSV, one record per line: `id<TAB>label<TAB>text`. Tabs, newlines and
//!   backslashes inside the text are escaped as `\t`, `\n` and `\\`. The label
//!   column may be empty for unlabeled data.
//! * JSONL, one object per line with keys `id`, `text` and optional `label`.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::tsv;

/// Tweet-level polarity. Neutral and objective are one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Neutral,
    Negative,
}

impl Label {
    /// Canonical class order used by the model and every report.
    pub const ALL: [Label; 3] = [Label::Positive, Label::Neutral, Label::Negative];

    pub fn index(self) -> usize {
        match self {
            Label::Positive => 0,
            Label::Neutral => 1,
            Label::Negative => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Label> {
        Label::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Neutral => "neutral",
            Label::Negative => "negative",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseLabelError(pub String);

impl fmt::Display for ParseLabelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown label {:?}", self.0)
    }
}

impl std::error::Error for ParseLabelError {}

impl FromStr for Label {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "positive" => Ok(Label::Positive),
            "negative" => Ok(Label::Negative),
            "neutral" | "objective" => Ok(Label::Neutral),
            _ => Err(ParseLabelError(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTweet {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

impl RawTweet {
    pub fn new(id: impl Into<String>, text: impl Into<String>, label: Option<Label>) -> Self {
        RawTweet {
            id: id.into(),
            text: text.into(),
            label,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Jsonl,
}

impl Format {
    /// Guesses the format from a file extension; anything but `.jsonl`/`.json` is TSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Format::Jsonl,
            _ => Format::Tsv,
        }
    }
}

impl FromStr for Format {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(Format::Tsv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(CorpusError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelCount {
    pub label: Label,
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub total: usize,
    /// `None` when any tweet is unlabeled.
    pub per_label: Option<Vec<LabelCount>>,
    pub with_emoticons: usize,
    pub with_hashtags: usize,
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total\t{}", self.total)?;
        if let Some(rows) = &self.per_label {
            for row in rows {
                writeln!(f, "{}\t{}\t{:.1}%", row.label, row.count, row.percent)?;
            }
        }
        writeln!(f, "with_emoticons\t{}", self.with_emoticons)?;
        writeln!(f, "with_hashtags\t{}", self.with_hashtags)
    }
}

pub fn load_dataset(path: &Path, format: Format) -> Result<Vec<RawTweet>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&text, format)
}

/// Parses dataset contents already in memory. Blank lines are skipped.
pub fn parse_dataset(text: &str, format: Format) -> Result<Vec<RawTweet>, CorpusError> {
    let mut tweets = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let tweet = match format {
            Format::Tsv => parse_tsv_line(line, line_no)?,
            Format::Jsonl => parse_jsonl_line(line, line_no)?,
        };
        if tweet.id.is_empty() {
            return Err(CorpusError::Malformed {
                line: line_no,
                message: "empty id".into(),
            });
        }
        if tweet.text.trim().is_empty() {
            return Err(CorpusError::Malformed {
                line: line_no,
                message: "empty text".into(),
            });
        }
        if !seen.insert(tweet.id.clone()) {
            return Err(CorpusError::DuplicateId {
                line: line_no,
                id: tweet.id,
            });
        }
        tweets.push(tweet);
    }
    Ok(tweets)
}

fn parse_label(raw: &str, line: usize) -> Result<Option<Label>, CorpusError> {
    if raw.trim().is_empty() {
        return Ok(None);
    }
    raw.parse().map(Some).map_err(|_| CorpusError::UnknownLabel {
        line,
        label: raw.to_string(),
    })
}

fn parse_tsv_line(line: &str, line_no: usize) -> Result<RawTweet, CorpusError> {
    let mut cols = line.splitn(3, '\t');
    let (Some(id), Some(label), Some(text)) = (cols.next(), cols.next(), cols.next()) else {
        return Err(CorpusError::Malformed {
            line: line_no,
            message: "expected id<TAB>label<TAB>text".into(),
        });
    };
    if text.contains('\t') {
        return Err(CorpusError::Malformed {
            line: line_no,
            message: "unescaped TAB in text column".into(),
        });
    }
    Ok(RawTweet {
        id: tsv::unescape(id),
        label: parse_label(label, line_no)?,
        text: tsv::unescape(text),
    })
}

#[derive(Deserialize)]
struct JsonTweet {
    id: serde_json::Value,
    text: String,
    #[serde(default)]
    label: Option<String>,
}

fn parse_jsonl_line(line: &str, line_no: usize) -> Result<RawTweet, CorpusError> {
    let rec: JsonTweet = serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
        line: line_no,
        message: e.to_string(),
    })?;
    let id = match rec.id {
        serde_json::Value::String(s) => s,
        serde_json::Value::Number(n) => n.to_string(),
        other => {
            return Err(CorpusError::Malformed {
                line: line_no,
                message: format!("id must be a string or number, got {other}"),
            })
        }
    };
    let label = match rec.label {
        Some(l) => parse_label(&l, line_no)?,
        None => None,
    };
    Ok(RawTweet {
        id,
        text: rec.text,
        label,
    })
}

/// Serializes a dataset; the inverse of [`parse_dataset`].
pub fn format_dataset(tweets: &[RawTweet], format: Format) -> String {
    let mut out = String::new();
    for t in tweets {
        match format {
            Format::Tsv => {
                out.push_str(&tsv::escape(&t.id));
                out.push('\t');
                if let Some(l) = t.label {
                    out.push_str(l.as_str());
                }
                out.push('\t');
                out.push_str(&tsv::escape(&t.text));
            }
            Format::Jsonl => {
                out.push_str(&serde_json::to_string(t).expect("tweet serializes"));
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(tweets: &[RawTweet], path: &Path, format: Format) -> Result<(), CorpusError> {
    fs::write(path, format_dataset(tweets, format)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn dataset_stats<E, H>(tweets: &[RawTweet], emoticon_detector: E, hashtag_detector: H) -> DatasetStats
where
    E: Fn(&str) -> bool,
    H: Fn(&str) -> bool,
{
    let total = tweets.len();
    let mut counts = [0usize; 3];
    let mut all_labeled = true;
    let mut with_emoticons = 0;
    let mut with_hashtags = 0;
    for t in tweets {
        match t.label {
            Some(l) => counts[l.index()] += 1,
            None => all_labeled = false,
        }
        if emoticon_detector(&t.text) {
            with_emoticons += 1;
        }
        if hashtag_detector(&t.text) {
            with_hashtags += 1;
        }
    }
    let per_label = all_labeled.then(|| {
        Label::ALL
            .iter()
            .map(|&label| {
                let count = counts[label.index()];
                let percent = if total == 0 {
                    0.0
                } else {
                    100.0 * count as f64 / total as f64
                };
                LabelCount {
                    label,
                    count,
                    percent,
                }
            })
            .collect()
    });
    DatasetStats {
        total,
        per_label,
        with_emoticons,
        with_hashtags,
    }
}

/// [`dataset_stats`] with the tokenizer's emoticon and hashtag patterns as detectors.
pub fn default_stats(tweets: &[RawTweet]) -> DatasetStats {
    use crate::pipeline::{tokenize, TokenKind};
    let has = |kind: TokenKind| move |text: &str| tokenize(text).iter().any(|t| t.kind == kind);
    dataset_stats(tweets, has(TokenKind::Emoticon), has(TokenKind::Hashtag))
}
