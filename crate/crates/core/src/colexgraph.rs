//! Colexification graph construction.
//!
//! Every lemma of a language that is attached to two or more synsets links
//! each 2-subset of those synsets; the link remembers the (lemma, language)
//! witnesses that produced it. The unweighted graph is the key set of the
//! edge map, the witness map is its values.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::lexicon::{LexEntry, Witness};
use crate::synset::SynsetId;

/// Entry count above which [`brute_force_colex`] refuses to run.
pub const ORACLE_MAX_ENTRIES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("brute-force oracle limited to {limit} entries, got {got}")]
pub struct OracleScaleExceeded {
    pub limit: usize,
    pub got: usize,
}

/// One (pair, witness) fact; `first < second`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColexTuple {
    pub first: SynsetId,
    pub second: SynsetId,
    pub witness: Witness,
}

/// Colexification graph over synsets.
///
/// Synsets and witnesses are interned into sorted tables, so index order is
/// value order and the ordered edge map iterates in canonical pair order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColexGraph {
    synsets: Vec<SynsetId>,
    witnesses: Vec<Witness>,
    edges: BTreeMap<(u32, u32), Vec<u32>>,
}

/// Borrowed view of one edge.
#[derive(Debug, Clone, Copy)]
pub struct ColexEdge<'a> {
    pub first: &'a SynsetId,
    pub second: &'a SynsetId,
    graph: &'a ColexGraph,
    witness_ids: &'a [u32],
}

impl<'a> ColexEdge<'a> {
    /// Witnesses in (lemma, language) order, without duplicates.
    pub fn witnesses(&self) -> impl Iterator<Item = &'a Witness> + 'a {
        let graph = self.graph;
        self.witness_ids.iter().map(move |&w| &graph.witnesses[w as usize])
    }

    pub fn witness_count(&self) -> usize {
        self.witness_ids.len()
    }
}

impl PartialEq for ColexEdge<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.first == other.first
            && self.second == other.second
            && self.witnesses().eq(other.witnesses())
    }
}

fn sorted_unique<T: Ord>(mut items: Vec<T>) -> Vec<T> {
    items.sort_unstable();
    items.dedup();
    items
}

fn index_of<T: Ord>(table: &[T], item: &T) -> u32 {
    table.binary_search(item).expect("interned value") as u32
}

impl ColexGraph {
    /// Builds a graph from explicit (pair, witness) facts plus extra nodes.
    pub fn from_tuples<'a>(
        nodes: impl IntoIterator<Item = &'a SynsetId>,
        tuples: impl IntoIterator<Item = &'a ColexTuple> + Clone,
    ) -> ColexGraph {
        let mut synsets: Vec<SynsetId> = nodes.into_iter().cloned().collect();
        let mut witnesses = Vec::new();
        for t in tuples.clone() {
            synsets.push(t.first.clone());
            synsets.push(t.second.clone());
            witnesses.push(t.witness.clone());
        }
        let synsets = sorted_unique(synsets);
        let witnesses = sorted_unique(witnesses);
        let mut edges: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        for t in tuples {
            let (a, b) = (index_of(&synsets, &t.first), index_of(&synsets, &t.second));
            if a == b {
                continue;
            }
            let key = if a < b { (a, b) } else { (b, a) };
            edges.entry(key).or_default().push(index_of(&witnesses, &t.witness));
        }
        for ids in edges.values_mut() {
            ids.sort_unstable();
            ids.dedup();
        }
        ColexGraph { synsets, witnesses, edges }
    }

    /// All synsets seen in the input, in canonical order. Includes synsets
    /// that take part in no colexification.
    pub fn nodes(&self) -> &[SynsetId] {
        &self.synsets
    }

    pub fn contains_node(&self, synset: &SynsetId) -> bool {
        self.synsets.binary_search(synset).is_ok()
    }

    /// Number of colexified synset pairs.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of witness counts over all edges.
    pub fn witness_total(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }

    /// Looks up the edge between two synsets in either argument order.
    pub fn edge(&self, a: &SynsetId, b: &SynsetId) -> Option<ColexEdge<'_>> {
        let ia = self.synsets.binary_search(a).ok()? as u32;
        let ib = self.synsets.binary_search(b).ok()? as u32;
        let key = if ia < ib { (ia, ib) } else { (ib, ia) };
        self.edges.get(&key).map(|ids| self.view(key, ids))
    }

    /// Edges in canonical pair order.
    pub fn edges(&self) -> impl Iterator<Item = ColexEdge<'_>> + '_ {
        self.edges.iter().map(|(&key, ids)| self.view(key, ids))
    }

    fn view<'a>(&'a self, (a, b): (u32, u32), ids: &'a [u32]) -> ColexEdge<'a> {
        ColexEdge {
            first: &self.synsets[a as usize],
            second: &self.synsets[b as usize],
            graph: self,
            witness_ids: ids,
        }
    }

    /// Flattened (pair, witness) relation.
    pub fn witness_relation(&self) -> BTreeSet<ColexTuple> {
        self.edges()
            .flat_map(|e| {
                e.witnesses().map(move |w| ColexTuple {
                    first: e.first.clone(),
                    second: e.second.clone(),
                    witness: w.clone(),
                })
            })
            .collect()
    }

    /// Union of two graphs: nodes, edges and witness sets.
    pub fn merge(&self, other: &ColexGraph) -> ColexGraph {
        let relation: Vec<ColexTuple> =
            self.witness_relation().into_iter().chain(other.witness_relation()).collect();
        ColexGraph::from_tuples(self.synsets.iter().chain(other.synsets.iter()), relation.iter())
    }
}

/// Builds the colexification graph of a lexicon.
pub fn construct_graph(entries: &[LexEntry]) -> ColexGraph {
    let synsets = sorted_unique(entries.iter().map(|e| &e.synset).collect::<Vec<_>>())
        .into_iter()
        .cloned()
        .collect::<Vec<_>>();

    // Group synsets by (language, lemma): the vocabulary V_l of every language.
    let mut keyed: Vec<(&str, &str, u32)> = entries
        .iter()
        .map(|e| (e.language.as_str(), e.lemma.as_str(), index_of(&synsets, &e.synset)))
        .collect();
    keyed.sort_unstable();
    keyed.dedup();

    let groups: Vec<&[(&str, &str, u32)]> = keyed
        .chunk_by(|a, b| a.0 == b.0 && a.1 == b.1)
        .filter(|g| g.len() >= 2)
        .collect();

    let witnesses: Vec<Witness> =
        sorted_unique(groups.iter().map(|g| (g[0].1, g[0].0)).collect::<Vec<_>>())
            .into_iter()
            .map(|(lemma, language)| Witness::new(lemma, language))
            .collect();

    let mut edges: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    for group in groups {
        let witness = Witness::new(group[0].1, group[0].0);
        let wid = index_of(&witnesses, &witness);
        // Synset indices within a group are ascending, so (i, j) is canonical.
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                edges.entry((a.2, b.2)).or_default().push(wid);
            }
        }
    }
    for ids in edges.values_mut() {
        ids.sort_unstable();
    }
    ColexGraph { synsets, witnesses, edges }
}

/// Quadratic reference implementation used to check [`construct_graph`].
pub fn brute_force_colex(entries: &[LexEntry]) -> Result<BTreeSet<ColexTuple>, OracleScaleExceeded> {
    if entries.len() > ORACLE_MAX_ENTRIES {
        return Err(OracleScaleExceeded { limit: ORACLE_MAX_ENTRIES, got: entries.len() });
    }
    let mut out = BTreeSet::new();
    for (i, x) in entries.iter().enumerate() {
        for y in &entries[i + 1..] {
            if x.language == y.language && x.lemma == y.lemma && x.synset != y.synset {
                let (first, second) = if x.synset < y.synset {
                    (x.synset.clone(), y.synset.clone())
                } else {
                    (y.synset.clone(), x.synset.clone())
                };
                out.insert(ColexTuple { first, second, witness: x.witness() });
            }
        }
    }
    Ok(out)
}

/// A colexified pair of first-sense concepts with its witnesses.
///
/// `n_colex` counts (lemma, language) witnesses, `n_lemmas` distinct lemma
/// strings and `n_languages` distinct languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptPairRecord {
    pub synset1: SynsetId,
    pub synset2: SynsetId,
    pub concept1: String,
    pub concept2: String,
    pub witnesses: Vec<Witness>,
    pub n_colex: usize,
    pub n_lemmas: usize,
    pub n_languages: usize,
}

impl ConceptPairRecord {
    pub fn new(synset1: SynsetId, synset2: SynsetId, witnesses: Vec<Witness>) -> Self {
        let witnesses = sorted_unique(witnesses);
        let n_lemmas = witnesses.iter().map(|w| &w.lemma).collect::<BTreeSet<_>>().len();
        let n_languages = witnesses.iter().map(|w| &w.language).collect::<BTreeSet<_>>().len();
        ConceptPairRecord {
            concept1: synset1.concept_name(),
            concept2: synset2.concept_name(),
            synset1,
            synset2,
            n_colex: witnesses.len(),
            witnesses,
            n_lemmas,
            n_languages,
        }
    }

    pub(crate) fn sort_key(&self) -> (&str, &str, &SynsetId, &SynsetId) {
        (&self.concept1, &self.concept2, &self.synset1, &self.synset2)
    }
}

/// Keeps edges whose endpoints are both first senses and turns them into
/// concept pairs, sorted by (concept1, concept2).
///
/// Concepts are keyed by the first-sense synset itself, i.e. (sense word, pos);
/// `dad#n#1` and `dad#v#1` stay distinct even though both display as `dad`.
pub fn derive_concept_graph(graph: &ColexGraph) -> Vec<ConceptPairRecord> {
    let mut records: Vec<ConceptPairRecord> = graph
        .edges()
        .filter(|e| e.first.is_first_sense() && e.second.is_first_sense())
        .map(|e| ConceptPairRecord::new(e.first.clone(), e.second.clone(), e.witnesses().cloned().collect()))
        .collect();
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    records
}
