//! Checks over the files in the repository's resources/ directory.

use std::path::PathBuf;

use mksent::features::EmoticonTable;
use mksent::lexicon::SentimentLexicon;
use mksent::pipeline::{
    run_pipeline, stem, LemmaList, NegationCues, NormalizationMap, PipelineConfig, PosDictionary, Resources, StemRuleSet,
    Stopwords,
};

fn resource(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../resources").join(name)
}

fn rules() -> StemRuleSet {
    StemRuleSet::load(&resource("stem_rules.tsv")).unwrap()
}

#[test]
fn all_resources_load() {
    assert!(!Stopwords::load(&resource("stopwords.txt")).unwrap().is_empty());
    assert!(!NormalizationMap::load(&resource("normalization.tsv")).unwrap().is_empty());
    assert!(!NegationCues::load(&resource("negation.txt")).unwrap().is_empty());
    assert!(!PosDictionary::load(&resource("pos_dictionary.tsv")).unwrap().0.is_empty());
    assert!(!LemmaList::load(&resource("lemmas.txt")).unwrap().is_empty());
    assert!(!rules().is_empty());
    EmoticonTable::load(&resource("emoticons.tsv")).unwrap();
    let pos = std::fs::read_to_string(resource("manual_pos.txt")).unwrap();
    let neg = std::fs::read_to_string(resource("manual_neg.txt")).unwrap();
    assert!(!SentimentLexicon::from_polarity_lists("manual", &pos, &neg).unwrap().is_empty());
}

#[test]
fn stem_is_idempotent_over_lemmas() {
    let rules = rules();
    for w in LemmaList::load(&resource("lemmas.txt")).unwrap().iter() {
        let once = stem(w, &rules);
        assert_eq!(stem(&once, &rules), once, "{w}");
    }
}

#[test]
fn inflections_of_one_noun_share_a_stem() {
    let rules = rules();
    let forms = [
        "навреда", "навредам", "навредат", "навредата", "навредеа", "навредев", "навредевме", "навредевте",
        "навредел", "навредела", "навределе", "навредело", "навреден", "навредена",
    ];
    let stems: Vec<String> = forms.iter().map(|w| stem(w, &rules)).collect();
    assert!(stems.iter().all(|s| s == &stems[0]), "{stems:?}");
}

#[test]
fn stopwords_exclude_negation_words() {
    let sw = Stopwords::load(&resource("stopwords.txt")).unwrap();
    let cues = NegationCues::load(&resource("negation.txt")).unwrap();
    for phrase in cues.phrases() {
        if phrase.len() == 1 {
            assert!(!sw.contains(&phrase[0]), "{}", phrase[0]);
        }
    }
}

#[test]
fn seeds_do_not_overlap() {
    let read = |n| std::fs::read_to_string(resource(n)).unwrap();
    let pos = read("seeds_pos.txt");
    let neg = read("seeds_neg.txt");
    let neg_words: Vec<&str> = neg.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    assert!(pos.lines().map(str::trim).filter(|l| !l.is_empty()).all(|w| !neg_words.contains(&w)));
}

#[test]
fn negated_phrase_through_full_pipeline() {
    let resources = Resources {
        stopwords: Some(Stopwords::load(&resource("stopwords.txt")).unwrap()),
        normalization: Some(NormalizationMap::load(&resource("normalization.tsv")).unwrap()),
        negation_cues: Some(NegationCues::load(&resource("negation.txt")).unwrap()),
        stem_rules: Some(rules()),
        lemmas: Some(LemmaList::load(&resource("lemmas.txt")).unwrap()),
        ..Default::default()
    }
    .with_pos_dictionary(PosDictionary::load(&resource("pos_dictionary.tsv")).unwrap());
    let tokens = run_pipeline("не е добро :(", &PipelineConfig::all(), &resources).unwrap();
    let surfaces: Vec<String> = tokens.iter().map(|t| t.effective_surface().into_owned()).collect();
    assert_eq!(surfaces.first().map(String::as_str), Some("не"));
    assert_eq!(surfaces.last().map(String::as_str), Some(":("));
    assert!(surfaces.iter().any(|s| s.starts_with("NEG_CONTEXT_добр")), "{surfaces:?}");
}
