use colex::ingest::{self, RatingKind};
use colex_core::lexicon::RatingRange;
use colex_core::{construct_graph, derive_concept_graph, LanguageInfo, LexEntry, Mode, Pos, PronEntry, RatingRecord, SynsetId};
use proptest::prelude::*;

fn lang() -> impl Strategy<Value = String> {
    "[a-z]{2,3}"
}

fn lemma() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-zāēīōū]{1,8}",
        "[абвгдеп]{2,6}",
        "[a-z]{2,5} [a-z]{2,5}",
        Just("bābā".to_string()),
    ]
}

fn synset() -> impl Strategy<Value = SynsetId> {
    ("[a-z]{1,6}(_[A-Za-z]{1,4})?", prop::sample::select(vec![Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Satellite, Pos::Adverb]), 1u32..5)
        .prop_map(|(w, p, s)| SynsetId::new(&w, p, s).unwrap())
}

fn entries() -> impl Strategy<Value = Vec<LexEntry>> {
    prop::collection::vec((lang(), lemma(), synset()), 0..60)
        .prop_map(|v| v.into_iter().map(|(l, w, s)| LexEntry::new(&l, &w, s).unwrap()).collect())
}

fn rating() -> impl Strategy<Value = f64> {
    (100u32..=500).prop_map(|x| x as f64 / 100.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lexicon_round_trip(mut entries in entries()) {
        let mut seen = std::collections::HashSet::new();
        entries.retain(|e| seen.insert(e.clone()));
        let text = ingest::write_lexicon(&entries);
        let parsed = ingest::parse_lexicon(text.as_bytes(), Mode::Strict, false).unwrap();
        prop_assert_eq!(parsed.records, entries);
        prop_assert_eq!(parsed.duplicates, 0);
    }

    #[test]
    fn line_order_does_not_change_the_graph(entries in entries(), seed in any::<u64>()) {
        let text = ingest::write_lexicon(&entries);
        let mut lines: Vec<&str> = text.lines().skip(1).collect();
        let mut state = seed | 1;
        for i in (1..lines.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            lines.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let shuffled = lines.join("\n") + "\n";
        let a = ingest::parse_lexicon(text.as_bytes(), Mode::Strict, false).unwrap();
        let b = ingest::parse_lexicon(shuffled.as_bytes(), Mode::Strict, false).unwrap();
        let (ga, gb) = (construct_graph(&a.records), construct_graph(&b.records));
        prop_assert_eq!(ga.witness_relation(), gb.witness_relation());
        prop_assert_eq!(derive_concept_graph(&ga), derive_concept_graph(&gb));
    }

    #[test]
    fn pronunciations_round_trip(rows in prop::collection::btree_map((lang(), lemma()), prop::collection::vec("[a-zəŋʃɾ]ː?", 1..6), 0..30)) {
        let entries: Vec<PronEntry> = rows.into_iter().map(|((l, w), segs)| PronEntry::new(&l, &w, segs).unwrap()).collect();
        let text = ingest::write_pronunciations(&entries);
        let parsed = ingest::parse_pronunciations(text.as_bytes(), None, Mode::Strict, false).unwrap();
        prop_assert_eq!(parsed.records, entries);
    }

    #[test]
    fn ratings_round_trip(words in prop::collection::btree_set("[a-z]{2,8}( [a-z]{2,5})?", 1..30), values in prop::collection::vec((rating(), rating(), rating(), prop::option::of(rating())), 30)) {
        let conc: Vec<RatingRecord> = words.iter().zip(&values)
            .map(|(w, v)| RatingRecord::new(w, Some(v.0), [None; 3], RatingRange::DEFAULT_AFFECT).unwrap())
            .collect();
        let affect: Vec<RatingRecord> = words.iter().zip(&values)
            .map(|(w, v)| RatingRecord::new(w, None, [Some(v.1 + 4.0), Some(v.2), v.3], RatingRange::DEFAULT_AFFECT).unwrap())
            .collect();
        let c = ingest::parse_ratings(ingest::write_ratings(&conc, RatingKind::Concreteness).as_bytes(), RatingKind::Concreteness, RatingRange::DEFAULT_AFFECT, Mode::Strict).unwrap();
        let a = ingest::parse_ratings(ingest::write_ratings(&affect, RatingKind::Affect).as_bytes(), RatingKind::Affect, RatingRange::DEFAULT_AFFECT, Mode::Strict).unwrap();
        prop_assert_eq!(c.records, conc);
        prop_assert_eq!(a.records, affect);
    }
}

#[test]
fn feature_table_round_trip() {
    let table = colex::synth::illustrative_features();
    let text = ingest::write_feature_table(&table);
    let parsed = ingest::parse_feature_table(text.as_bytes(), Mode::Strict).unwrap();
    assert_eq!(ingest::feature_table(&parsed.records), table);
}

#[test]
fn languages_round_trip() {
    let languages = vec![
        LanguageInfo { code: "fa".into(), family: "Indo-European".into(), macroarea: Some("Eurasia".into()) },
        LanguageInfo { code: "qu".into(), family: "Quechuan, Central".into(), macroarea: None },
    ];
    let parsed = ingest::parse_languages(ingest::write_languages(&languages).as_bytes(), Mode::Strict).unwrap();
    assert_eq!(parsed.records, languages);
}

#[test]
fn crlf_and_comments_keep_line_numbers() {
    let text = "# header\r\n\r\nfa\tpāp\tdad#n#1\r\n# note\r\nfa\tpāp\tpope#x#1\r\n";
    let err = ingest::parse_lexicon(text.as_bytes(), Mode::Strict, false).unwrap_err();
    assert_eq!(err.line(), Some(5));
    let lenient = ingest::parse_lexicon(text.as_bytes(), Mode::Lenient, false).unwrap();
    assert_eq!(lenient.records.len(), 1);
    assert_eq!(lenient.issues.len(), 1);
}

#[test]
fn csv_comment_before_quoted_row() {
    let text = "word,conc_mean\n# comment\n\"santa claus\",4.17\nbad,9.5\n";
    let err = ingest::parse_ratings(text.as_bytes(), RatingKind::Concreteness, RatingRange::DEFAULT_AFFECT, Mode::Strict)
        .unwrap_err();
    assert_eq!(err.line(), Some(4));
    assert_eq!(err.code(), "E_RANGE");
}
