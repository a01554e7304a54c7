//! Bounded searches for complements and completions of pre-tilting modules.
//!
//! All modules here are multiplicity-free direct sums of string modules, given
//! as lists of strings. Candidate summands are the strings up to a length
//! bound. When a dissected surface is attached, compatibility is decided on
//! arcs first and confirmed with the resolution oracle for every reported
//! module.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::modules::{default_cap, Oracle, ProjDim};
use crate::quiver::{GentleAlgebra, StringError, StringWord};
use crate::surface::{arc_from_string, arcs_compatible, ArcError, DissectedSurface, ZigzagArc};

/// Limits that make the searches finite and reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_string_length: usize,
    pub resolution_cap: usize,
    /// Largest number of rigid candidate strings a search may consider.
    pub candidate_cap: usize,
}

impl SearchBudget {
    pub fn for_algebra(alg: &GentleAlgebra) -> Self {
        SearchBudget {
            max_string_length: (2 * alg.dimension()).max(1),
            resolution_cap: default_cap(alg),
            candidate_cap: 100_000,
        }
    }

    pub fn with_max_len(mut self, max_len: usize) -> Self {
        self.max_string_length = max_len;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TiltingError {
    #[error("module is not pre-tilting: {0}")]
    NotPretilting(String),
    #[error("module has {size} summands, an almost-tilting module over rank {rank} needs {}", rank - 1)]
    NotAlmostTilting { size: usize, rank: usize },
    #[error("more than {cap} rigid candidates within length {max_len}")]
    BudgetExceeded { cap: usize, max_len: usize },
    #[error("geometric and algebraic compatibility disagree on {0}")]
    Disagreement(String),
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Arc(#[from] ArcError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    pub module_rank: usize,
    pub algebra_rank: usize,
    /// Complements as formatted canonical strings, in canonical order.
    pub complements: Vec<String>,
    #[serde(skip)]
    pub complement_strings: Vec<StringWord>,
    /// The search examined every string up to the bound.
    pub exhaustive_within_bound: bool,
    pub budget: SearchBudget,
    pub candidates_examined: usize,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    Found(Vec<StringWord>),
    /// No completion among strings of length at most `max_string_length`.
    /// This is not a proof of nonexistence.
    NotFoundWithinBound { max_string_length: usize, candidates: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub module: Vec<String>,
    pub complements: usize,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub algebra_rank: usize,
    pub budget: SearchBudget,
    pub rigid_candidates: usize,
    pub almost_tilting_modules: usize,
    /// Number of almost-tilting modules per complement count.
    pub histogram: BTreeMap<usize, usize>,
    pub normal_form_modules: usize,
    pub violations: Vec<BoundViolation>,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Shared state for the searches over one algebra.
pub struct TiltingEngine<'a> {
    alg: &'a GentleAlgebra,
    surface: Option<&'a DissectedSurface>,
    oracle: Oracle<'a>,
    budget: SearchBudget,
}

impl<'a> TiltingEngine<'a> {
    pub fn new(alg: &'a GentleAlgebra, budget: SearchBudget) -> Self {
        TiltingEngine { alg, surface: None, oracle: Oracle::with_cap(alg, budget.resolution_cap), budget }
    }

    pub fn with_surface(surface: &'a DissectedSurface, budget: SearchBudget) -> Self {
        let alg = surface.algebra();
        TiltingEngine { alg, surface: Some(surface), oracle: Oracle::with_cap(alg, budget.resolution_cap), budget }
    }

    pub fn algebra(&self) -> &GentleAlgebra {
        self.alg
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget
    }

    pub fn oracle(&self) -> &Oracle<'a> {
        &self.oracle
    }

    fn canonical_set(&self, m: &[StringWord]) -> Result<Vec<StringWord>, TiltingError> {
        let mut out = Vec::with_capacity(m.len());
        for w in m {
            self.alg.check_string(w)?;
            out.push(self.alg.canonical(w));
        }
        Ok(out)
    }

    /// Finite projective dimension and no self-extensions, decided algebraically.
    pub fn is_rigid_algebraic(&self, w: &StringWord) -> bool {
        matches!(self.oracle.pd(w), ProjDim::Finite(_)) && self.oracle.ext_positive_vanishes(w, w) == Some(true)
    }

    /// Ext-orthogonality in both directions, decided algebraically.
    pub fn compatible_algebraic(&self, x: &StringWord, y: &StringWord) -> bool {
        self.oracle.ext_positive_vanishes(x, y) == Some(true) && self.oracle.ext_positive_vanishes(y, x) == Some(true)
    }

    fn arc(&self, w: &StringWord) -> Option<ZigzagArc> {
        self.surface.map(|s| arc_from_string(s, w).expect("checked string"))
    }

    fn compatible_geometric(&self, x: &ZigzagArc, y: &ZigzagArc) -> bool {
        let s = self.surface.expect("surface attached");
        arcs_compatible(s, x, y).unwrap_or(false)
    }

    /// Checks that `m` is a multiplicity-free pre-tilting module.
    pub fn check_pretilting(&self, m: &[StringWord]) -> Result<Vec<StringWord>, TiltingError> {
        let m = self.canonical_set(m)?;
        for (i, x) in m.iter().enumerate() {
            if m[..i].contains(x) {
                return Err(TiltingError::NotPretilting(format!("summand {} repeats", self.alg.format_string(x))));
            }
            match self.oracle.pd(x) {
                ProjDim::Finite(_) => {}
                other => {
                    return Err(TiltingError::NotPretilting(format!(
                        "{} has projective dimension {other}",
                        self.alg.format_string(x)
                    )))
                }
            }
        }
        for x in &m {
            for y in &m {
                if self.oracle.ext_positive_vanishes(x, y) != Some(true) {
                    return Err(TiltingError::NotPretilting(format!(
                        "Ext^>0({}, {}) does not vanish",
                        self.alg.format_string(x),
                        self.alg.format_string(y)
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Rigid strings within the length bound, sorted by length and then
    /// canonically, paired with their arcs when a surface is attached.
    pub fn rigid_candidates(&self) -> Result<Vec<(StringWord, Option<ZigzagArc>)>, TiltingError> {
        let mut all = self.alg.enumerate_strings(self.budget.max_string_length);
        all.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| self.alg.compare_strings(x, y)));
        let rigid: Vec<(StringWord, Option<ZigzagArc>)> = all
            .into_par_iter()
            .filter_map(|w| {
                let arc = self.arc(&w);
                let ok = match (&arc, self.surface) {
                    (Some(a), Some(_)) => a.has_boundary_ends() && self.compatible_geometric(a, a),
                    _ => self.is_rigid_algebraic(&w),
                };
                ok.then_some((w, arc))
            })
            .collect();
        if rigid.len() > self.budget.candidate_cap {
            return Err(TiltingError::BudgetExceeded {
                cap: self.budget.candidate_cap,
                max_len: self.budget.max_string_length,
            });
        }
        Ok(rigid)
    }

    /// Candidates compatible with every summand of `m` (excluding `m` itself).
    fn compatible_with(
        &self,
        m: &[StringWord],
        candidates: &[(StringWord, Option<ZigzagArc>)],
    ) -> Vec<(StringWord, Option<ZigzagArc>)> {
        let m_arcs: Vec<Option<ZigzagArc>> = m.iter().map(|w| self.arc(w)).collect();
        candidates
            .par_iter()
            .filter(|(w, arc)| {
                !m.contains(w)
                    && m.iter().zip(&m_arcs).all(|(x, xa)| match (arc, xa) {
                        (Some(a), Some(b)) => self.compatible_geometric(a, b),
                        _ => self.compatible_algebraic(w, x),
                    })
            })
            .cloned()
            .collect()
    }

    /// All complements of an almost-tilting module among strings within the bound.
    pub fn find_complements(&self, m: &[StringWord]) -> Result<ComplementReport, TiltingError> {
        let start = Instant::now();
        let n = self.alg.rank();
        let m = self.check_pretilting(m)?;
        if m.len() + 1 != n {
            return Err(TiltingError::NotAlmostTilting { size: m.len(), rank: n });
        }
        let candidates = self.rigid_candidates()?;
        let found = self.compatible_with(&m, &candidates);
        // algebraic confirmation of every reported complement
        for (x, _) in &found {
            let ok = self.is_rigid_algebraic(x) && m.iter().all(|y| self.compatible_algebraic(x, y));
            if !ok {
                return Err(TiltingError::Disagreement(self.alg.format_string(x)));
            }
        }
        let mut strings: Vec<StringWord> = found.into_iter().map(|(w, _)| w).collect();
        strings.sort_by(|x, y| self.alg.compare_strings(x, y));
        Ok(ComplementReport {
            module_rank: m.len(),
            algebra_rank: n,
            complements: strings.iter().map(|w| self.alg.format_string(w)).collect(),
            complement_strings: strings,
            exhaustive_within_bound: true,
            budget: self.budget,
            candidates_examined: candidates.len(),
            elapsed_ms: start.elapsed().as_millis(),
        })
    }

    /// Extends a pre-tilting module to a tilting module by backtracking over
    /// the compatible candidates.
    pub fn complete_pretilting(&self, m: &[StringWord]) -> Result<Completion, TiltingError> {
        let n = self.alg.rank();
        let m = self.check_pretilting(m)?;
        if m.len() > n {
            return Err(TiltingError::NotPretilting(format!("{} summands exceed the rank {n}", m.len())));
        }
        let candidates = self.rigid_candidates()?;
        let pool = self.compatible_with(&m, &candidates);
        let adj = self.adjacency(&pool);
        let mut chosen = Vec::new();
        let all: Vec<usize> = (0..pool.len()).collect();
        if extend_clique(&adj, &all, n - m.len(), &mut chosen) {
            let mut out = m.clone();
            out.extend(chosen.iter().map(|&i| pool[i].0.clone()));
            for (i, x) in out.iter().enumerate() {
                for y in &out[i..] {
                    if !self.compatible_algebraic(x, y) {
                        return Err(TiltingError::Disagreement(format!(
                            "{} and {}",
                            self.alg.format_string(x),
                            self.alg.format_string(y)
                        )));
                    }
                }
            }
            Ok(Completion::Found(out))
        } else {
            Ok(Completion::NotFoundWithinBound {
                max_string_length: self.budget.max_string_length,
                candidates: candidates.len(),
            })
        }
    }

    /// Every tilting module containing `m` whose other summands lie within the bound.
    pub fn all_completions(&self, m: &[StringWord]) -> Result<Vec<Vec<StringWord>>, TiltingError> {
        let n = self.alg.rank();
        let m = self.check_pretilting(m)?;
        if m.len() > n {
            return Err(TiltingError::NotPretilting(format!("{} summands exceed the rank {n}", m.len())));
        }
        let candidates = self.rigid_candidates()?;
        let pool = self.compatible_with(&m, &candidates);
        let adj = self.adjacency(&pool);
        let mut cliques = Vec::new();
        collect_cliques(&adj, &BitSet::full(pool.len()), n - m.len(), &mut Vec::new(), &mut cliques);
        Ok(cliques
            .into_iter()
            .map(|c| {
                let mut out = m.clone();
                out.extend(c.into_iter().map(|i| pool[i].0.clone()));
                out
            })
            .collect())
    }

    fn adjacency(&self, pool: &[(StringWord, Option<ZigzagArc>)]) -> Vec<BitSet> {
        let rows: Vec<Vec<usize>> = (0..pool.len())
            .into_par_iter()
            .map(|i| {
                (0..pool.len())
                    .filter(|&j| {
                        j != i
                            && match (&pool[i].1, &pool[j].1) {
                                (Some(a), Some(b)) => self.compatible_geometric(a, b),
                                _ => self.compatible_algebraic(&pool[i].0, &pool[j].0),
                            }
                    })
                    .collect()
            })
            .collect();
        rows.into_iter()
            .map(|r| {
                let mut b = BitSet::new(pool.len());
                r.into_iter().for_each(|j| b.insert(j));
                b
            })
            .collect()
    }

    /// Enumerates every almost-tilting module built from candidates within the
    /// bound and checks its complement count against `[1, 2n]`, and against
    /// `[1, n + 1]` when all summands are arcs cutting off a single boundary
    /// point.
    pub fn verify_complement_bound(&self) -> Result<BoundReport, TiltingError> {
        self.verify_complement_bound_within(self.budget.max_string_length)
    }

    /// As [`Self::verify_complement_bound`], but the almost-tilting modules
    /// are built only from strings of length at most `module_len`, while
    /// complements are still sought up to the budget's length bound.
    pub fn verify_complement_bound_within(&self, module_len: usize) -> Result<BoundReport, TiltingError> {
        let n = self.alg.rank();
        let candidates = self.rigid_candidates()?;
        let adj = self.adjacency(&candidates);
        let bigon: Vec<bool> = candidates
            .iter()
            .map(|(_, a)| match (a, self.surface) {
                (Some(a), Some(s)) => is_bigon_arc(s, a),
                _ => false,
            })
            .collect();
        let mut cliques = Vec::new();
        let mut short = BitSet::new(candidates.len());
        for (i, (w, _)) in candidates.iter().enumerate() {
            if w.len() <= module_len {
                short.insert(i);
            }
        }
        collect_cliques(&adj, &short, n - 1, &mut Vec::new(), &mut cliques);
        let counts: Vec<usize> = cliques
            .par_iter()
            .map(|c: &Vec<usize>| {
                let mut common = BitSet::full(candidates.len());
                for &i in c {
                    common.intersect(&adj[i]);
                }
                common.count()
            })
            .collect();
        let mut histogram = BTreeMap::new();
        let mut violations = Vec::new();
        let mut normal = 0;
        for (c, &k) in cliques.iter().zip(&counts) {
            *histogram.entry(k).or_insert(0) += 1;
            let in_normal_form = !c.is_empty() && c.iter().all(|&i| bigon[i]);
            normal += in_normal_form as usize;
            let bound = if in_normal_form { n + 1 } else { 2 * n };
            if k < 1 || k > bound {
                violations.push(BoundViolation {
                    module: c.iter().map(|&i| self.alg.format_string(&candidates[i].0)).collect(),
                    complements: k,
                    bound,
                });
            }
        }
        Ok(BoundReport {
            algebra_rank: n,
            budget: self.budget,
            rigid_candidates: candidates.len(),
            almost_tilting_modules: cliques.len(),
            histogram,
            normal_form_modules: normal,
            violations,
        })
    }
}

/// True if the arc runs once around a single boundary marked point, crossing
/// exactly the arcs of its fan.
pub fn is_bigon_arc(surface: &DissectedSurface, arc: &ZigzagArc) -> bool {
    let rev = arc.reversed(surface);
    (0..surface.bullet_count()).any(|p| {
        let fan = surface.fan(p);
        fan == arc.from_sides || fan == rev.from_sides
    })
}

pub fn find_complements(
    alg: &GentleAlgebra,
    m: &[StringWord],
    budget: SearchBudget,
) -> Result<ComplementReport, TiltingError> {
    TiltingEngine::new(alg, budget).find_complements(m)
}

pub fn complete_pretilting(alg: &GentleAlgebra, m: &[StringWord], budget: SearchBudget) -> Result<Completion, TiltingError> {
    TiltingEngine::new(alg, budget).complete_pretilting(m)
}

pub fn verify_complement_bound(alg: &GentleAlgebra, budget: SearchBudget) -> Result<BoundReport, TiltingError> {
    TiltingEngine::new(alg, budget).verify_complement_bound()
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }
    fn full(len: usize) -> Self {
        let mut b = BitSet::new(len);
        (0..len).for_each(|i| b.insert(i));
        b
    }
    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    fn intersect(&mut self, other: &BitSet) {
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
    }
    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn iter_from(&self, start: usize) -> impl Iterator<Item = usize> + '_ {
        (start..self.len).filter(|&i| self.contains(i))
    }
}

/// Picks `need` pairwise adjacent vertices among `allowed`, in index order.
fn extend_clique(adj: &[BitSet], allowed: &[usize], need: usize, chosen: &mut Vec<usize>) -> bool {
    if need == 0 {
        return true;
    }
    for (k, &v) in allowed.iter().enumerate() {
        if allowed.len() - k < need {
            break;
        }
        let next: Vec<usize> = allowed[k + 1..].iter().copied().filter(|&u| adj[v].contains(u)).collect();
        chosen.push(v);
        if extend_clique(adj, &next, need - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn collect_cliques(adj: &[BitSet], allowed: &BitSet, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().map_or(0, |&v| v + 1);
    for v in allowed.iter_from(start) {
        let mut next = allowed.clone();
        next.intersect(&adj[v]);
        cur.push(v);
        collect_cliques(adj, &next, size, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{surface_from_spec, PolygonKind::*};

    fn linear() -> GentleAlgebra {
        GentleAlgebra::from_names(&["1", "2"], &[("a", "1", "2")], &[]).unwrap()
    }

    #[test]
    fn linear_quiver_complements() {
        let alg = linear();
        let budget = SearchBudget::for_algebra(&alg);
        let p1 = alg.parse_string("a").unwrap();
        let rep = find_complements(&alg, &[p1], budget).unwrap();
        assert_eq!(rep.complements.len(), 2);
        assert!(rep.complements.contains(&"1_2".to_string()));
        assert!(rep.complements.contains(&"1_1".to_string()));
        let bound = verify_complement_bound(&alg, budget).unwrap();
        assert!(bound.holds());
        assert_eq!(bound.almost_tilting_modules, 3);
    }

    #[test]
    fn empty_module_completes() {
        let alg = linear();
        match complete_pretilting(&alg, &[], SearchBudget::for_algebra(&alg)).unwrap() {
            Completion::Found(t) => assert_eq!(t.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_almost_tilting_is_rejected() {
        let alg = linear();
        let err = find_complements(&alg, &[], SearchBudget::for_algebra(&alg)).unwrap_err();
        assert!(matches!(err, TiltingError::NotAlmostTilting { .. }));
    }

    #[test]
    fn geometric_and_algebraic_engines_agree() {
        let s = surface_from_spec(
            &["1", "2", "3"],
            &[
                (Boundary, &[("1", true), ("2", true), ("3", true), ("1", false), ("2", false)]),
                (Boundary, &[("3", false)]),
            ],
        )
        .unwrap();
        let budget = SearchBudget::for_algebra(s.algebra()).with_max_len(6);
        let geo = TiltingEngine::with_surface(&s, budget).verify_complement_bound().unwrap();
        let alg = verify_complement_bound(s.algebra(), budget).unwrap();
        assert_eq!(geo.histogram, alg.histogram);
        assert_eq!(geo.rigid_candidates, alg.rigid_candidates);
    }

    #[test]
    fn bigon_arcs_are_detected() {
        let s = surface_from_spec(
            &["1", "2"],
            &[(Boundary, &[("1", true), ("2", true)]), (Boundary, &[("1", false)]), (Boundary, &[("2", false)])],
        )
        .unwrap();
        let count = s
            .algebra()
            .enumerate_strings(3)
            .iter()
            .filter(|w| is_bigon_arc(&s, &arc_from_string(&s, w).unwrap()))
            .count();
        assert_eq!(count, s.bullet_count());
    }
}
