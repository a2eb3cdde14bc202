//! Seeded synthetic corpora: the bundled mini corpus, a dirty variant for
//! lenient-mode runs, a corpus with a planted concreteness effect, and bulk
//! lexicons for timing graph construction.
//!
//! Everything here is a pure function of the seed; the generator is ChaCha8
//! so the output does not depend on platform or `rand` defaults.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use colex_core::lexicon::RatingRange;
use colex_core::{FeatureTable, LanguageInfo, LexEntry, Pos, PronEntry, RatingRecord, SegmentFeatures, SynsetId};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Overrides;
use crate::ingest::{self, RatingKind};

pub const MINI_SEED: u64 = 20_240_501;

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub lexicon: Vec<LexEntry>,
    pub pronunciations: Vec<PronEntry>,
    pub concreteness: Vec<RatingRecord>,
    pub affect: Vec<RatingRecord>,
    pub features: FeatureTable,
    pub languages: Vec<LanguageInfo>,
}

/// Where [`Corpus::write`] put each input.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub lexicon: PathBuf,
    pub pronunciations: PathBuf,
    pub concreteness: PathBuf,
    pub affect: PathBuf,
    pub features: PathBuf,
    pub languages: PathBuf,
}

impl CorpusPaths {
    pub fn in_dir(dir: &Path) -> Self {
        CorpusPaths {
            lexicon: dir.join("lexicon.tsv"),
            pronunciations: dir.join("pron"),
            concreteness: dir.join("concreteness.csv"),
            affect: dir.join("affect.csv"),
            features: dir.join("features.csv"),
            languages: dir.join("languages.csv"),
        }
    }

    pub fn overrides(&self) -> Overrides {
        Overrides {
            lexicon: Some(self.lexicon.clone()),
            pronunciations: Some(self.pronunciations.clone()),
            concreteness: Some(self.concreteness.clone()),
            affect: Some(self.affect.clone()),
            features: Some(self.features.clone()),
            languages: Some(self.languages.clone()),
            ..Overrides::default()
        }
    }
}

impl Corpus {
    /// Writes the corpus as input files under `dir`, one pronunciation file
    /// per language.
    pub fn write(&self, dir: &Path) -> io::Result<CorpusPaths> {
        let paths = CorpusPaths::in_dir(dir);
        fs::create_dir_all(&paths.pronunciations)?;
        fs::write(&paths.lexicon, ingest::write_lexicon(&self.lexicon))?;
        let mut by_language: BTreeMap<&str, Vec<PronEntry>> = BTreeMap::new();
        for p in &self.pronunciations {
            by_language.entry(&p.language).or_default().push(p.clone());
        }
        for (language, entries) in by_language {
            let file = paths.pronunciations.join(format!("{language}.tsv"));
            fs::write(file, ingest::write_language_pronunciations(&entries))?;
        }
        fs::write(&paths.concreteness, ingest::write_ratings(&self.concreteness, RatingKind::Concreteness))?;
        fs::write(&paths.affect, ingest::write_ratings(&self.affect, RatingKind::Affect))?;
        fs::write(&paths.features, ingest::write_feature_table(&self.features))?;
        fs::write(&paths.languages, ingest::write_languages(&self.languages))?;
        Ok(paths)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Place {
    Labial,
    Alveolar,
    Postalveolar,
    Palatal,
    Velar,
    LabioVelar,
    Glottal,
}

#[derive(Clone, Copy, PartialEq)]
enum Manner {
    Stop,
    Fricative,
    Nasal,
    Lateral,
    Rhotic,
    Glide,
}

const VOWELS: [(&str, bool, bool, bool, bool); 6] = [
    // segment, high, low, back, round
    ("a", false, true, true, false),
    ("e", false, false, false, false),
    ("i", true, false, false, false),
    ("o", false, false, true, true),
    ("u", true, false, true, true),
    ("ə", false, false, false, false),
];

const CONSONANTS: [(&str, Place, Manner, bool); 19] = [
    ("p", Place::Labial, Manner::Stop, false),
    ("b", Place::Labial, Manner::Stop, true),
    ("t", Place::Alveolar, Manner::Stop, false),
    ("d", Place::Alveolar, Manner::Stop, true),
    ("k", Place::Velar, Manner::Stop, false),
    ("g", Place::Velar, Manner::Stop, true),
    ("m", Place::Labial, Manner::Nasal, true),
    ("n", Place::Alveolar, Manner::Nasal, true),
    ("ŋ", Place::Velar, Manner::Nasal, true),
    ("f", Place::Labial, Manner::Fricative, false),
    ("v", Place::Labial, Manner::Fricative, true),
    ("s", Place::Alveolar, Manner::Fricative, false),
    ("z", Place::Alveolar, Manner::Fricative, true),
    ("ʃ", Place::Postalveolar, Manner::Fricative, false),
    ("h", Place::Glottal, Manner::Fricative, false),
    ("l", Place::Alveolar, Manner::Lateral, true),
    ("r", Place::Alveolar, Manner::Rhotic, true),
    ("j", Place::Palatal, Manner::Glide, true),
    ("w", Place::LabioVelar, Manner::Glide, true),
];

fn sign(b: bool) -> i8 {
    if b {
        1
    } else {
        -1
    }
}

/// A small illustrative 24-feature table for the segments the generator
/// uses. Values follow textbook feature assignments; they are not taken from
/// any published table.
pub fn illustrative_features() -> FeatureTable {
    let mut table = FeatureTable::new();
    // syl son cons cont delrel lat nas strid voi sg cg ant cor distr lab hi lo back round velaric tense long hitone hireg
    for (segment, hi, lo, back, round) in VOWELS {
        let tense = if segment == "ə" { -1 } else { 1 };
        let values = [
            1, 1, -1, 1, -1, -1, -1, -1, 1, -1, -1, -1, -1, 0, sign(round), sign(hi), sign(lo), sign(back),
            sign(round), -1, tense, -1, 0, 0,
        ];
        table.insert(segment, SegmentFeatures::new(values).expect("ternary")).expect("unique");
    }
    for (segment, place, manner, voiced) in CONSONANTS {
        let sonorant = !matches!(manner, Manner::Stop | Manner::Fricative);
        let consonantal = !matches!(manner, Manner::Glide) && place != Place::Glottal;
        let continuant = !matches!(manner, Manner::Stop | Manner::Nasal);
        let strident = manner == Manner::Fricative && place != Place::Glottal;
        let anterior = matches!(place, Place::Labial | Place::Alveolar);
        let coronal = matches!(place, Place::Alveolar | Place::Postalveolar);
        let distributed = match place {
            Place::Postalveolar => 1,
            Place::Alveolar => -1,
            _ => 0,
        };
        let labial = matches!(place, Place::Labial | Place::LabioVelar);
        let high = matches!(place, Place::Velar | Place::Postalveolar | Place::Palatal | Place::LabioVelar);
        let back = matches!(place, Place::Velar | Place::LabioVelar);
        let values = [
            -1,
            sign(sonorant),
            sign(consonantal),
            sign(continuant),
            -1,
            sign(manner == Manner::Lateral),
            sign(manner == Manner::Nasal),
            sign(strident),
            sign(voiced),
            sign(place == Place::Glottal),
            -1,
            sign(anterior),
            sign(coronal),
            distributed,
            sign(labial),
            sign(high),
            -1,
            sign(back),
            sign(place == Place::LabioVelar),
            -1,
            0,
            -1,
            0,
            0,
        ];
        table.insert(segment, SegmentFeatures::new(values).expect("ternary")).expect("unique");
    }
    table
}

fn two_decimals(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn concept_words(rng: &mut ChaCha8Rng, count: usize) -> Vec<String> {
    const ONSETS: [&str; 14] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"];
    const NUCLEI: [&str; 5] = ["a", "e", "i", "o", "u"];
    let mut seen = BTreeSet::new();
    let mut words = Vec::with_capacity(count);
    while words.len() < count {
        let syllables = rng.random_range(2..=3);
        let mut word = String::new();
        for _ in 0..syllables {
            word.push_str(ONSETS.choose(rng).expect("non-empty"));
            word.push_str(NUCLEI.choose(rng).expect("non-empty"));
        }
        if seen.insert(word.clone()) {
            words.push(word);
        }
    }
    words
}

struct Concept {
    word: String,
    pos: Pos,
    extra_senses: u32,
    concreteness: Option<f64>,
}

impl Concept {
    fn synset(&self, sense: u32) -> SynsetId {
        SynsetId::new(&self.word, self.pos, sense).expect("generated words are valid")
    }
}

/// The bundled mini corpus: 15 languages in 5 families plus one language
/// without metadata, a few thousand lexicon entries, pronunciations for most
/// lemmas, and ratings for most concepts.
pub fn mini_corpus(seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = concept_words(&mut rng, 150);
    let concepts: Vec<Concept> = words
        .into_iter()
        .enumerate()
        .map(|(i, word)| {
            // a handful of multiword concepts
            let word = if i % 25 == 7 { format!("{word}_{}", &word[..2]) } else { word };
            Concept {
                word,
                pos: if rng.random_bool(0.8) { Pos::Noun } else { Pos::Verb },
                extra_senses: if rng.random_bool(0.3) { rng.random_range(1..=2) } else { 0 },
                concreteness: rng.random_bool(0.85).then(|| two_decimals(rng.random_range(1.0..=5.0))),
            }
        })
        .collect();

    let mut corpus = Corpus { features: illustrative_features(), ..Corpus::default() };
    for c in &concepts {
        let name = c.word.replace('_', " ");
        let affect: [Option<f64>; 3] = if rng.random_bool(0.75) {
            [(); 3].map(|_| Some(two_decimals(rng.random_range(1.0..=9.0))))
        } else {
            [None; 3]
        };
        if let Some(conc) = c.concreteness {
            corpus.concreteness.push(RatingRecord::new(&name, Some(conc), [None; 3], RatingRange::DEFAULT_AFFECT).expect("in range"));
        }
        if affect[0].is_some() {
            corpus.affect.push(RatingRecord::new(&name, None, affect, RatingRange::DEFAULT_AFFECT).expect("in range"));
        }
    }

    const FAMILIES: [(&str, &str); 5] = [
        ("Aster", "Eurasia"),
        ("Borealic", "North America"),
        ("Coral", "Papunesia"),
        ("Dunic", "Africa"),
        ("Estuarine", "South America"),
    ];
    let stops: Vec<&str> = CONSONANTS.iter().filter(|c| c.2 == Manner::Stop).map(|c| c.0).collect();
    let mut languages: Vec<(String, Option<usize>)> = Vec::new();
    for (f, _) in FAMILIES.iter().enumerate() {
        for l in 0..3 {
            languages.push((format!("{}{}", (b'a' + f as u8) as char, (b'a' + l as u8) as char), Some(f)));
        }
    }
    languages.push(("zz".into(), None));

    for (code, family) in &languages {
        if let Some(f) = family {
            let (name, area) = FAMILIES[*f];
            corpus.languages.push(LanguageInfo { code: code.clone(), family: name.into(), macroarea: Some(area.into()) });
        }
        let mut vowels: Vec<&str> = VOWELS.iter().map(|v| v.0).collect();
        vowels.shuffle(&mut rng);
        vowels.truncate(rng.random_range(3..=6));
        let mut consonants: Vec<&str> = CONSONANTS.iter().map(|c| c.0).collect();
        consonants.shuffle(&mut rng);
        consonants.truncate(rng.random_range(10..=16));
        let onset_stops: Vec<&str> = stops.iter().copied().filter(|s| consonants.contains(s)).collect();

        let lemma_count = if family.is_some() { 75 } else { 20 };
        let mut lemmas = BTreeSet::new();
        while lemmas.len() < lemma_count {
            let first = concepts.choose(&mut rng).expect("non-empty");
            // concrete concepts lean towards stop-initial words
            let stop_bias = first.concreteness.map_or(0.3, |c| c / 6.0);
            let mut segments: Vec<&str> = Vec::new();
            let syllables = rng.random_range(1..=3);
            for s in 0..syllables {
                let onset = if s == 0 && !onset_stops.is_empty() && rng.random_bool(stop_bias) {
                    onset_stops.choose(&mut rng)
                } else {
                    consonants.choose(&mut rng)
                };
                segments.push(onset.expect("non-empty"));
                segments.push(vowels.choose(&mut rng).expect("non-empty"));
                if rng.random_bool(0.2) {
                    segments.push(vowels.choose(&mut rng).expect("non-empty"));
                }
            }
            if rng.random_bool(0.4) {
                segments.push(consonants.choose(&mut rng).expect("non-empty"));
            }
            let lemma: String = segments.concat();
            if !lemmas.insert(lemma.clone()) {
                continue;
            }

            let mut synsets = vec![if first.extra_senses > 0 && rng.random_bool(0.15) {
                first.synset(2)
            } else {
                first.synset(1)
            }];
            let extra = match rng.random_range(0..100) {
                0..25 => 0,
                25..70 => 1,
                _ => 2,
            };
            for _ in 0..extra {
                // closer in concreteness is likelier to share a word
                let candidates: Vec<&Concept> = (0..4).map(|_| concepts.choose(&mut rng).expect("non-empty")).collect();
                let pick = match first.concreteness {
                    Some(c) => candidates
                        .iter()
                        .min_by(|a, b| {
                            let da = a.concreteness.map_or(2.0, |x| (x - c).abs());
                            let db = b.concreteness.map_or(2.0, |x| (x - c).abs());
                            da.total_cmp(&db)
                        })
                        .expect("non-empty"),
                    None => &candidates[0],
                };
                let sense = if pick.extra_senses > 0 && rng.random_bool(0.2) { rng.random_range(2..=pick.extra_senses + 1) } else { 1 };
                synsets.push(pick.synset(sense));
            }
            synsets.sort();
            synsets.dedup();
            for synset in synsets {
                corpus.lexicon.push(LexEntry::new(code, &lemma, synset).expect("valid entry"));
            }
            if rng.random_bool(0.92) {
                let segments = segments.iter().map(|s| s.to_string()).collect();
                corpus.pronunciations.push(PronEntry::new(code, &lemma, segments).expect("valid pronunciation"));
            }
        }
    }
    corpus
}

/// Writes the mini corpus with malformed lines mixed in: a broken synset id,
/// a short line, an empty pronunciation, an out-of-range rating and a segment
/// missing from the feature table. Strict builds reject it; lenient builds
/// skip or zero-fill the bad records.
pub fn write_dirty_corpus(dir: &Path, seed: u64) -> io::Result<CorpusPaths> {
    let paths = mini_corpus(seed).write(dir)?;
    let append = |path: &Path, extra: &str| -> io::Result<()> {
        let mut text = fs::read_to_string(path)?;
        text.push_str(extra);
        fs::write(path, text)
    };
    append(&paths.lexicon, "aa\tbroken\tnot-a-synset\naa\tshort\nab\tpokax\tfrog#x#1\n")?;
    append(&paths.pronunciations.join("aa.tsv"), "emptyword\t   \nxqa\tx q a\n")?;
    append(&paths.concreteness, "lava,7.5\nmoss,not-a-number\n")?;
    let mut lexicon = fs::read_to_string(&paths.lexicon)?;
    let first = mini_corpus(seed).lexicon.into_iter().find(|e| e.language == "aa").expect("aa has entries");
    lexicon.push_str(&format!("aa\txqa\t{}\n", first.synset));
    fs::write(&paths.lexicon, lexicon)?;
    Ok(paths)
}

/// Concept pairs colexify more often the closer their concreteness: each of
/// `languages` languages links a pair with probability `0.4·exp(-1.5·d)`.
pub fn sign_recovery_corpus(seed: u64, concept_count: usize, language_count: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = concept_words(&mut rng, concept_count);
    let mut corpus = Corpus::default();
    let ratings: Vec<f64> = words.iter().map(|_| two_decimals(rng.random_range(1.0..=5.0))).collect();
    for (w, &c) in words.iter().zip(&ratings) {
        corpus.concreteness.push(RatingRecord::new(w, Some(c), [None; 3], RatingRange::DEFAULT_AFFECT).expect("in range"));
    }
    let languages: Vec<String> = (0..language_count).map(|i| format!("s{i:02}")).collect();
    for code in &languages {
        corpus.languages.push(LanguageInfo { code: code.clone(), family: "Synthetic".into(), macroarea: None });
    }
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let p = 0.4 * (-1.5 * (ratings[i] - ratings[j]).abs()).exp();
            for code in &languages {
                if rng.random_bool(p) {
                    let lemma = format!("{}{}", &words[i][..2], &words[j][..2]) + &format!("{i}x{j}");
                    for w in [&words[i], &words[j]] {
                        let synset = SynsetId::new(w, Pos::Noun, 1).expect("valid");
                        corpus.lexicon.push(LexEntry::new(code, &lemma, synset).expect("valid"));
                    }
                }
            }
        }
    }
    corpus
}

/// `n` lexicon entries over 100 languages and 20,000 concepts, each lemma
/// expressing one to three synsets.
pub fn bulk_entries(n: usize, seed: u64) -> Vec<LexEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let languages: Vec<String> = (0..100).map(|i| format!("l{i:03}")).collect();
    let synsets: Vec<SynsetId> = (0..20_000)
        .map(|i| SynsetId::new(&format!("c{i}"), Pos::Noun, 1 + (i % 3 == 0) as u32).expect("valid"))
        .collect();
    let mut entries = Vec::with_capacity(n);
    let mut lemma = 0usize;
    while entries.len() < n {
        let language = &languages[lemma % languages.len()];
        let name = format!("w{lemma}");
        let k = rng.random_range(1..=3).min(n - entries.len());
        for _ in 0..k {
            let synset = synsets.choose(&mut rng).expect("non-empty").clone();
            entries.push(LexEntry::new(language, &name, synset).expect("valid"));
        }
        lemma += 1;
    }
    entries
}
