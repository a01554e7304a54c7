//! Verification suites over the bundled corpus and seeded random instances.
//!
//! Each check is numbered and reports whether it held, a one-line summary
//! and how long it took compared with its time limit. The command-line
//! `verify` subcommand and the acceptance harness both run these.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus;
use crate::cutting::{appendix_cut_algebra, cut_along_string, cut_order_independent, cut_surface, EndpointCase};
use crate::modules::{Oracle, ProjDim};
use crate::quiver::quiver_isomorphic;
use crate::random::{random_disk, random_gluing, random_pretilting, simple_arcs};
use crate::surface::{arc_from_string, ext_dims_geometric, interior_crossing_count, is_zigzag, CrossingData};
use crate::tilting::{Completion, SearchBudget, TiltingEngine};

/// Corpus entries that carry a surface, used by the Ext and pd checks.
pub const SURFACE_ENTRIES: [&str; 7] = ["rank1-disk", "rank2-disk", "fig1", "fig2", "fig10-n4", "fig11", "fig12-n3"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ExtEquivalence,
    PdWeights,
    CutInvariants,
    ComplementBounds,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "ext-equivalence" => Suite::ExtEquivalence,
            "pd-weights" => Suite::PdWeights,
            "cut-invariants" => Suite::CutInvariants,
            "complement-bounds" => Suite::ComplementBounds,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn checks(self) -> Vec<u8> {
        match self {
            Suite::ExtEquivalence => vec![1],
            Suite::PdWeights => vec![2],
            Suite::CutInvariants => vec![3, 4, 10],
            Suite::ComplementBounds => vec![5, 6, 7, 8, 9],
            Suite::All => (1..=10).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl CheckReport {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {} ({} ms of {} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms,
            self.limit_ms,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    SuiteReport { seed, checks: suite.checks().into_iter().map(|id| run_check(id, seed)).collect() }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "geometric Ext equals the resolution oracle",
        2 => "pd equals the largest endpoint weight",
        3 => "annulus algebra and its cut",
        4 => "direct cut algebra agrees with surgery",
        5 => "annulus module with 2n-1 complements",
        6 => "radial module with n+1 complements",
        7 => "torus module has no completion within the bound",
        8 => "complement counts lie in [1, 2n]",
        9 => "pre-tilting collections on disks complete",
        10 => "random cut invariants",
        _ => "unknown check",
    }
}

fn limit(id: u8) -> Duration {
    Duration::from_secs(match id {
        1 => 60,
        2 => 30,
        3 => 5,
        4 => 10,
        5 => 60,
        6 => 120,
        7 => 300,
        8 => 600,
        9 | 10 => 300,
        _ => 0,
    })
}

pub fn run_check(id: u8, seed: u64) -> CheckReport {
    let start = Instant::now();
    let outcome = match id {
        1 => ext_equivalence(),
        2 => pd_weights(),
        3 => annulus_cut(),
        4 => appendix_agreement(),
        5 => expected_complements("fig11", "gamma"),
        6 => expected_complements("fig10-n4", "solid"),
        7 => bounded_nonexistence(),
        8 => complement_bounds(),
        9 => disk_completions(seed),
        10 => random_cuts(seed),
        _ => Err(format!("no check numbered {id}")),
    };
    let elapsed = start.elapsed();
    let within = elapsed <= limit(id);
    let (passed, mut detail) = match outcome {
        Ok(d) => (within, d),
        Err(d) => (false, d),
    };
    if !within {
        detail.push_str("; over the time limit");
    }
    CheckReport {
        id,
        title: title(id).to_string(),
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit(id).as_millis(),
    }
}

type Outcome = Result<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ext_equivalence() -> Outcome {
    let mut pairs = 0usize;
    for id in SURFACE_ENTRIES {
        let s = corpus::load(id).map_err(err)?.surface().map_err(err)?;
        let alg = s.algebra();
        let oracle = Oracle::new(alg);
        let arcs: Vec<_> = alg
            .enumerate_strings(6)
            .into_iter()
            .filter_map(|w| arc_from_string(&s, &w).ok())
            .filter(|a| a.has_boundary_ends())
            .collect();
        let bad: Vec<String> = arcs
            .par_iter()
            .flat_map_iter(|x| arcs.iter().map(move |y| (x, y)))
            .filter_map(|(x, y)| {
                let geo = ext_dims_geometric(&s, x, y).ok()?;
                let top = geo.len().max(x.predicted_pd().unwrap_or(0) + 2);
                let algebraic = oracle.ext(&x.string, &y.string, top);
                let agree = (0..=top).all(|d| algebraic[d] == Some(geo.get(d).copied().unwrap_or(0)));
                (!agree).then(|| format!("{id}: Ext({}, {})", alg.format_string(&x.string), alg.format_string(&y.string)))
            })
            .collect();
        if let Some(first) = bad.first() {
            return Err(format!("{} disagreements, first {first}", bad.len()));
        }
        pairs += arcs.len() * arcs.len();
    }
    Ok(format!("{pairs} ordered pairs on {} surfaces agree in every degree", SURFACE_ENTRIES.len()))
}

fn pd_weights() -> Outcome {
    let (mut finite, mut infinite) = (0, 0);
    let mut mismatches: Vec<String> = Vec::new();
    // the corpus has no punctures, so seeded punctured gluings join it
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut surfaces: Vec<(String, crate::surface::DissectedSurface, usize)> = Vec::new();
    for id in SURFACE_ENTRIES {
        surfaces.push((id.to_string(), corpus::load(id).map_err(err)?.surface().map_err(err)?, 6));
    }
    while surfaces.len() < SURFACE_ENTRIES.len() + 20 {
        let s = random_gluing(&mut rng, 3, 0.5);
        if s.puncture_count() > 0 {
            surfaces.push((format!("punctured gluing {:?}", s.data()), s, 4));
        }
    }
    for (id, s, max_len) in &surfaces {
        let alg = s.algebra();
        let oracle = Oracle::new(alg);
        let strings = alg.enumerate_strings(*max_len);
        let results: Vec<Result<(bool, Option<String>), String>> = strings
            .par_iter()
            .map(|w| {
                let arc = arc_from_string(s, w).map_err(err)?;
                let expected = match arc.predicted_pd() {
                    Some(d) => ProjDim::Finite(d),
                    None => ProjDim::Infinite,
                };
                let got = oracle.pd(w);
                let bad = (got != expected)
                    .then(|| format!("{id}: pd {} is {got}, weights give {expected}", alg.format_string(w)));
                Ok((arc.has_boundary_ends(), bad))
            })
            .collect();
        for r in results {
            let (boundary, bad) = r?;
            if boundary {
                finite += 1;
            } else {
                infinite += 1;
            }
            mismatches.extend(bad);
        }
    }
    if mismatches.is_empty() {
        Ok(format!("{finite} finite and {infinite} infinite projective dimensions match"))
    } else {
        Err(format!(
            "{} of {} strings disagree ({} of {} with punctured ends), e.g. {}",
            mismatches.len(),
            finite + infinite,
            mismatches.iter().filter(|m| m.contains("weights give infinite")).count(),
            infinite,
            mismatches.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ))
    }
}

fn annulus_cut() -> Outcome {
    let e = corpus::load("fig2").map_err(err)?;
    let s = e.surface().map_err(err)?;
    if quiver_isomorphic(s.algebra(), &e.expected_algebra().map_err(err)?).is_none() {
        return Err("surface algebra differs from the expected six-vertex algebra".into());
    }
    let gamma = e.arc_string(s.algebra(), "gamma").map_err(err)?;
    let cut = cut_along_string(&s, &gamma).map_err(err)?;
    let expected = corpus::load("fig9").map_err(err)?.expected_algebra().map_err(err)?;
    if quiver_isomorphic(cut.surface.algebra(), &expected).is_none() {
        return Err("cut algebra differs from the expected seven-vertex algebra".into());
    }
    let (q, qc) = (s.algebra().quiver(), cut.surface.algebra().quiver());
    if qc.vertex_count() != q.vertex_count() + 1 || qc.arrow_count() != q.arrow_count() {
        return Err(format!(
            "counts {}/{} become {}/{}",
            q.vertex_count(),
            q.arrow_count(),
            qc.vertex_count(),
            qc.arrow_count()
        ));
    }
    Ok(format!(
        "{} vertices and {} arrows become {} and {}, both algebras as expected",
        q.vertex_count(),
        q.arrow_count(),
        qc.vertex_count(),
        qc.arrow_count()
    ))
}

fn appendix_agreement() -> Outcome {
    let e = corpus::load("appendix").map_err(err)?;
    let s = e.surface().map_err(err)?;
    let omega = e.arc_string(s.algebra(), "omega").map_err(err)?;
    let direct = appendix_cut_algebra(s.algebra(), &omega).map_err(err)?;
    let cut = cut_along_string(&s, &omega).map_err(err)?;
    if quiver_isomorphic(&direct, cut.surface.algebra()).is_none() {
        return Err("direct construction and surgery give different algebras".into());
    }
    Ok(format!("both give {} vertices and {} arrows", direct.rank(), direct.quiver().arrow_count()))
}

fn expected_complements(id: &str, module: &str) -> Outcome {
    let e = corpus::load(id).map_err(err)?;
    let s = e.surface().map_err(err)?;
    let m = e.module(s.algebra(), module).map_err(err)?;
    let want = e.expected.complements.get(module).copied().ok_or("no expected count")?;
    let max_len = e.expected.max_len.unwrap_or(12);
    let budget = SearchBudget::for_algebra(s.algebra()).with_max_len(max_len);
    let report = TiltingEngine::with_surface(&s, budget).find_complements(&m).map_err(err)?;
    let got = report.complement_strings.len();
    let text = format!("{got} complements within length {max_len}: {}", report.complements.join(", "));
    if got == want {
        Ok(text)
    } else {
        Err(format!("{text}; expected {want}"))
    }
}

fn bounded_nonexistence() -> Outcome {
    let e = corpus::load("fig12-n3").map_err(err)?;
    let s = e.surface().map_err(err)?;
    let m = e.module(s.algebra(), "gamma1").map_err(err)?;
    let budget = SearchBudget::for_algebra(s.algebra()).with_max_len(20);
    match TiltingEngine::with_surface(&s, budget).complete_pretilting(&m).map_err(err)? {
        Completion::NotFoundWithinBound { max_string_length, candidates } => Ok(format!(
            "no completion among {candidates} rigid candidates of length at most {max_string_length}"
        )),
        Completion::Found(t) => Err(format!("found a completion with {} summands", t.len())),
    }
}

fn complement_bounds() -> Outcome {
    let mut summary = Vec::new();
    for id in corpus::ids() {
        let e = corpus::load(id).map_err(err)?;
        let alg = e.expected_algebra().map_err(err)?;
        if alg.rank() > 4 {
            continue;
        }
        // modules from strings of length at most 8, complements up to twice that
        let budget = SearchBudget::for_algebra(&alg).with_max_len(16);
        let report = match e.surface() {
            Ok(s) => TiltingEngine::with_surface(&s, budget).verify_complement_bound_within(8),
            Err(_) => TiltingEngine::new(&alg, budget).verify_complement_bound_within(8),
        }
        .map_err(|x| format!("{id}: {x}"))?;
        if let Some(v) = report.violations.first() {
            return Err(format!(
                "{id}: {} violations, first {} with {} complements (bound {})",
                report.violations.len(),
                v.module.join(" + "),
                v.complements,
                v.bound
            ));
        }
        summary.push(format!("{id} {}", report.almost_tilting_modules));
    }
    Ok(format!("almost-tilting modules checked: {}", summary.join(", ")))
}

fn disk_completions(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sizes = [0usize; 6];
    for trial in 0..50 {
        let rank = rng.gen_range(1..=5);
        let s = random_disk(&mut rng, rank);
        let size = rng.gen_range(0..=rank);
        let m = random_pretilting(&mut rng, &s, 2 * rank, size);
        let budget = SearchBudget::for_algebra(s.algebra());
        match TiltingEngine::with_surface(&s, budget).complete_pretilting(&m).map_err(err)? {
            Completion::Found(t) if t.len() == rank => sizes[m.len()] += 1,
            other => {
                return Err(format!(
                    "disk {trial} (rank {rank}, {:?}): {} summands did not complete: {other:?}",
                    s.data(),
                    m.len()
                ))
            }
        }
    }
    Ok(format!("50 collections completed; by size {:?}", sizes))
}

fn random_cuts(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut double_checked = 0;
    for (k, case) in EndpointCase::ALL.iter().cycle().take(100).enumerate() {
        let punct = match case {
            EndpointCase::DistinctBoundary | EndpointCase::BoundaryLoop => 0.2,
            _ => 0.5,
        };
        let mut attempts = 0;
        let (s, gamma) = loop {
            attempts += 1;
            if attempts > 10_000 {
                return Err(format!("no arc of case {} found", case.label()));
            }
            let s = random_gluing(&mut rng, 4, punct);
            let pool: Vec<_> = simple_arcs(&s, 5).into_iter().filter(|a| EndpointCase::of(a) == *case).collect();
            if let Some(a) = pool.choose(&mut rng) {
                break (s.clone(), a.clone());
            }
        };
        let describe = || format!("cut {k} (case {}) of {:?} along {}", case.label(), s.data(), s.algebra().format_string(&gamma.string));
        let cut = cut_surface(&s, &gamma).map_err(|e| format!("{}: {e}", describe()))?;
        if !cut.census().holds() {
            return Err(format!("{}: census {:?}", describe(), cut.census()));
        }
        for b in [&cut.gamma1, &cut.gamma2] {
            if !is_zigzag(&cut.surface, &CrossingData::of(b)) || interior_crossing_count(&cut.surface, b, b) != 0 {
                return Err(format!("{}: bigon arc {} is not a simple zigzag", describe(), cut.surface.algebra().format_string(&b.string)));
            }
        }
        let others: Vec<_> = simple_arcs(&s, 4)
            .into_iter()
            .filter(|a| s.algebra().canonical(&a.string) != s.algebra().canonical(&gamma.string))
            .filter(|a| interior_crossing_count(&s, a, &gamma) == 0)
            .collect();
        if let Some(other) = others.choose(&mut rng) {
            let pair = [gamma.clone(), other.clone()];
            if !cut_order_independent(&s, &pair, &[1, 0]).map_err(|e| format!("{}: {e}", describe()))? {
                return Err(format!("{}: double cut depends on the order", describe()));
            }
            double_checked += 1;
        }
    }
    Ok(format!("100 cuts, 20 per endpoint case; {double_checked} double cuts commute"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse_and_cover_every_check() {
        assert_eq!(Suite::parse("all"), Some(Suite::All));
        assert_eq!(Suite::parse("nope"), None);
        let mut ids: Vec<u8> = [Suite::ExtEquivalence, Suite::PdWeights, Suite::CutInvariants, Suite::ComplementBounds]
            .iter()
            .flat_map(|s| s.checks())
            .collect();
        ids.sort();
        assert_eq!(ids, Suite::All.checks());
    }

    #[test]
    fn quick_checks_pass() {
        for id in [3, 4, 5] {
            let r = run_check(id, 0);
            assert!(r.passed, "{}", r.line());
        }
    }
}
