//! Completions of a pre-tilting collection before and after cutting along it.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{cut_along_collection, CutError};
use crate::quiver::StringWord;
use crate::surface::{arc_from_string, DissectedSurface};
use crate::tilting::{SearchBudget, TiltingEngine};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub collection: Vec<String>,
    /// Tilting completions of the collection on the original surface.
    pub source_completions: usize,
    /// Tilting completions of the bigon arcs on the cut surface.
    pub cut_completions: usize,
    /// Completions on one side with no partner on the other.
    pub unmatched: Vec<String>,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.unmatched.is_empty() && self.source_completions == self.cut_completions
    }
}

/// Maps every completion of `collection` through the cut (each other summand
/// to its induced arc, each cut arc to its two bigon arcs) and compares with
/// the completions of the bigon arcs found directly on the cut surface.
pub fn verify_cut_transfer(
    surface: &DissectedSurface,
    collection: &[StringWord],
    budget: SearchBudget,
) -> Result<TransferReport, CutError> {
    let alg = surface.algebra();
    let arcs = collection.iter().map(|w| arc_from_string(surface, w)).collect::<Result<Vec<_>, _>>()?;
    let cut = cut_along_collection(surface, &arcs)?;
    let target = cut.surface();
    let talg = target.algebra();
    let canon: Vec<StringWord> = collection.iter().map(|w| alg.canonical(w)).collect();

    let source_sets = TiltingEngine::with_surface(surface, budget).all_completions(collection)?;
    let mut mapped: BTreeSet<Vec<String>> = BTreeSet::new();
    let bigons: Vec<StringWord> = cut.bigon_arcs.iter().map(|a| talg.canonical(&a.string)).collect();
    let mut longest = 0;
    for set in &source_sets {
        let mut image: Vec<String> = bigons.iter().map(|w| talg.format_string(w)).collect();
        for w in set.iter().filter(|w| !canon.contains(&alg.canonical(w))) {
            let a = cut.induced_arc(&arc_from_string(surface, w)?)?;
            longest = longest.max(a.string.len());
            image.push(talg.format_string(&talg.canonical(&a.string)));
        }
        image.sort();
        mapped.insert(image);
    }
    let target_budget = SearchBudget::for_algebra(talg)
        .with_max_len(budget.max_string_length.max(longest));
    let target_sets = TiltingEngine::with_surface(target, target_budget).all_completions(&bigons)?;
    let direct: BTreeSet<Vec<String>> = target_sets
        .iter()
        .map(|set| {
            let mut v: Vec<String> = set.iter().map(|w| talg.format_string(&talg.canonical(w))).collect();
            v.sort();
            v
        })
        .collect();
    let unmatched = mapped.symmetric_difference(&direct).map(|v| v.join(" + ")).collect();
    Ok(TransferReport {
        collection: collection.iter().map(|w| alg.format_string(w)).collect(),
        source_completions: source_sets.len(),
        cut_completions: direct.len(),
        unmatched,
    })
}
