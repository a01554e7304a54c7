use super::*;
use crate::corpus;
use crate::surface::{surface_from_spec, PolygonKind::*};

fn corpus_cut(id: &str, arc: &str) -> CutResult {
    let e = corpus::load(id).unwrap();
    let s = e.surface().unwrap();
    let w = e.arc_string(s.algebra(), arc).unwrap();
    cut_along_string(&s, &w).unwrap()
}

fn assert_bigons_sound(cut: &CutResult) {
    for g in [&cut.gamma1, &cut.gamma2] {
        assert!(crate::surface::is_zigzag(&cut.surface, &CrossingData::of(g)));
        assert_eq!(interior_crossing_count(&cut.surface, g, g), 0);
    }
}

#[test]
fn rank_one_disk_falls_apart() {
    let s = crate::surface::tests::rank1_disk();
    let gamma = arc_from_string(&s, &StringWord::trivial(0)).unwrap();
    let cut = cut_surface(&s, &gamma).unwrap();
    assert_eq!(cut.case, EndpointCase::DistinctBoundary);
    assert_eq!(cut.surface.rank(), 2);
    assert_eq!(cut.surface.connected_components(), 2);
    assert_eq!(cut.surface.algebra().quiver().arrow_count(), 0);
    assert!(cut.census().holds());
    assert_bigons_sound(&cut);
    // each bigon arc is the single arc of its disk
    assert_ne!(cut.gamma1.string.start, cut.gamma2.string.start);
}

#[test]
fn annulus_cut_gives_the_seven_vertex_algebra() {
    let cut = corpus_cut("fig2", "gamma");
    let expected = corpus::load("fig9").unwrap().expected_algebra().unwrap();
    assert!(quiver_isomorphic(cut.surface.algebra(), &expected).is_some());
    assert_eq!(cut.surface.genus(), 0);
    assert_eq!(cut.surface.boundary_components(), 1);
    assert_bigons_sound(&cut);
}

#[test]
fn torus_cut_gives_the_annulus_algebra() {
    let cut = corpus_cut("fig12-n3", "gamma1");
    let expected = corpus::load("fig13-n4").unwrap().expected_algebra().unwrap();
    assert!(quiver_isomorphic(cut.surface.algebra(), &expected).is_some());
    assert_eq!(cut.surface.genus(), 0);
    assert_eq!(cut.surface.boundary_components(), 2);
    assert_bigons_sound(&cut);
}

#[test]
fn cut_to_a_puncture() {
    let s = surface_from_spec(&["l"], &[(Puncture, &[("l", true)]), (Boundary, &[("l", false)])]).unwrap();
    let gamma = arc_from_string(&s, &StringWord::trivial(0)).unwrap();
    let cut = cut_surface(&s, &gamma).unwrap();
    assert_eq!(cut.case, EndpointCase::BoundaryAndPuncture);
    assert_eq!(cut.surface.puncture_count(), 0);
    assert!(cut.census().holds());
    assert_bigons_sound(&cut);
}

#[test]
fn appendix_construction_agrees_with_surgery() {
    let cut = corpus_cut("appendix", "omega");
    let e = corpus::load("appendix").unwrap();
    let s = e.surface().unwrap();
    let omega = e.arc_string(s.algebra(), "omega").unwrap();
    let direct = appendix_cut_algebra(s.algebra(), &omega).unwrap();
    assert_eq!(direct.rank(), s.rank() + 1);
    assert_eq!(direct.quiver().arrow_count(), s.algebra().quiver().arrow_count());
    assert!(quiver_isomorphic(cut.surface.algebra(), &direct).is_some());
}

#[test]
fn appendix_rejects_other_patterns() {
    let e = corpus::load("fig2").unwrap();
    let s = e.surface().unwrap();
    let w = s.algebra().parse_string("a").unwrap();
    assert!(matches!(appendix_cut_algebra(s.algebra(), &w), Err(AppendixError::PatternUnsupported(_))));
}

#[test]
fn arcs_away_from_the_cut_keep_their_strings() {
    let cut = corpus_cut("fig2", "gamma");
    let map = cut.arc_map(3);
    assert!(!map.is_empty());
    for (w, img) in &map {
        let src = cut.source.algebra().parse_string(w).unwrap();
        let arc = arc_from_string(&cut.source, &src).unwrap();
        let image = cut.induced_arc(&arc).unwrap();
        assert_eq!(cut.surface.algebra().format_string(&cut.surface.algebra().canonical(&image.string)), *img);
        assert_eq!(
            interior_crossing_count(&cut.surface, &image, &image),
            interior_crossing_count(&cut.source, &arc, &arc)
        );
    }
}

#[test]
fn induced_arc_refuses_the_cut_and_crossing_arcs() {
    let cut = corpus_cut("fig2", "gamma");
    assert!(matches!(cut.induced_arc(&cut.gamma), Err(CutError::ArcIsGamma(_))));
}

#[test]
fn empty_and_single_collections() {
    let e = corpus::load("fig2").unwrap();
    let s = e.surface().unwrap();
    let none = cut_along_collection(&s, &[]).unwrap();
    assert_eq!(none.surface().rank(), s.rank());
    let g = arc_from_string(&s, &e.arc_string(s.algebra(), "gamma").unwrap()).unwrap();
    let one = cut_along_collection(&s, std::slice::from_ref(&g)).unwrap();
    let direct = cut_surface(&s, &g).unwrap();
    assert!(quiver_isomorphic(one.surface().algebra(), direct.surface.algebra()).is_some());
}

#[test]
fn cut_json_round_trips() {
    let cut = corpus_cut("fig2", "gamma");
    let j = cut.to_json(2);
    let text = serde_json::to_string(&j).unwrap();
    let back: CutJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, j);
    let surface = back.surface.to_surface().unwrap();
    assert_eq!(surface.rank(), 7);
}

#[test]
fn transfer_on_the_rank_two_disk() {
    let e = corpus::load("rank2-disk").unwrap();
    let s = e.surface().unwrap();
    let m = e.module(s.algebra(), "p1").unwrap();
    let report = verify_cut_transfer(&s, &m, crate::tilting::SearchBudget::for_algebra(s.algebra())).unwrap();
    assert!(report.holds(), "{report:?}");
    assert_eq!(report.source_completions, 2);
}

#[test]
fn transfer_through_the_annulus_cut() {
    let e = corpus::load("fig2").unwrap();
    let s = e.surface().unwrap();
    let m = e.module(s.algebra(), "gamma").unwrap();
    let budget = crate::tilting::SearchBudget::for_algebra(s.algebra()).with_max_len(14);
    let report = verify_cut_transfer(&s, &m, budget).unwrap();
    assert!(report.source_completions > 0);
    assert!(report.holds(), "{report:?}");
}

#[test]
fn random_cuts_keep_the_census() {
    use crate::random::{random_gluing, simple_arcs};
    use rand::{seq::SliceRandom, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut per_case = std::collections::BTreeMap::new();
    for _ in 0..300 {
        let s = random_gluing(&mut rng, 4, 0.35);
        let arcs = simple_arcs(&s, 5);
        let Some(g) = arcs.choose(&mut rng) else { continue };
        let cut = cut_surface(&s, g).unwrap_or_else(|e| panic!("{e}: {:?} along {}", s.data(), s.algebra().format_string(&g.string)));
        assert!(cut.census().holds());
        assert_bigons_sound(&cut);
        *per_case.entry(cut.case).or_insert(0) += 1;
    }
    assert_eq!(per_case.len(), 5, "{per_case:?}");
}

#[test]
fn double_cuts_commute() {
    use crate::random::{random_gluing, simple_arcs};
    use rand::{seq::SliceRandom, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    for _ in 0..200 {
        let s = random_gluing(&mut rng, 4, 0.3);
        let arcs = simple_arcs(&s, 4);
        let pairs: Vec<(usize, usize)> = (0..arcs.len())
            .flat_map(|i| (i + 1..arcs.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| interior_crossing_count(&s, &arcs[i], &arcs[j]) == 0)
            .collect();
        let Some(&(i, j)) = pairs.choose(&mut rng) else { continue };
        let pair = [arcs[i].clone(), arcs[j].clone()];
        let both = cut_along_collection(&s, &pair).unwrap();
        assert_eq!(both.surface().rank(), s.rank() + 2);
        assert!(cut_order_independent(&s, &pair, &[1, 0]).unwrap());
        checked += 1;
    }
    assert!(checked > 50, "{checked}");
}
