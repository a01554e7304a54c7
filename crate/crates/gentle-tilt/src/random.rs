//! Seeded generators for surfaces, arcs and pre-tilting collections.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cutting::EndpointCase;
use crate::quiver::StringWord;
use crate::surface::{
    arc_from_string, arcs_compatible, interior_crossing_count, DissectedSurface, Edge, Polygon, PolygonKind,
    SurfaceData, ZigzagArc,
};

/// A random gluing of polygons with `1..=max_rank` arcs. Each polygon is a
/// puncture with probability `puncture_prob`. Gluings that fail validation are
/// redrawn.
pub fn random_gluing<R: Rng>(rng: &mut R, max_rank: usize, puncture_prob: f64) -> DissectedSurface {
    loop {
        let n = rng.gen_range(1..=max_rank.max(1));
        let mut sides: Vec<Edge> =
            (0..n).flat_map(|a| [Edge { arc: a, fwd: true }, Edge { arc: a, fwd: false }]).collect();
        sides.shuffle(rng);
        let mut polygons = Vec::new();
        let mut rest = &sides[..];
        while !rest.is_empty() {
            let k = rng.gen_range(1..=rest.len());
            let kind = if rng.gen_bool(puncture_prob) { PolygonKind::Puncture } else { PolygonKind::Boundary };
            polygons.push(Polygon { kind, edges: rest[..k].to_vec(), arrow_names: None });
            rest = &rest[k..];
        }
        let data = SurfaceData { arcs: (1..=n).map(|a| a.to_string()).collect(), polygons };
        if let Ok(s) = DissectedSurface::new(data) {
            return s;
        }
    }
}

/// A random dissection of a disk by `rank` arcs.
///
/// The polygons of a disk dissection are the nodes of a tree whose edges are
/// the arcs. Any tree, with any order of the arcs around each polygon, glues
/// to a disk, so the generator draws a random labelled tree and random orders.
pub fn random_disk<R: Rng>(rng: &mut R, rank: usize) -> DissectedSurface {
    let nodes = rank + 1;
    let mut incident: Vec<Vec<Edge>> = vec![Vec::new(); nodes];
    for arc in 0..rank {
        let child = arc + 1;
        let parent = rng.gen_range(0..child);
        let fwd_at_parent = rng.gen_bool(0.5);
        incident[parent].push(Edge { arc, fwd: fwd_at_parent });
        incident[child].push(Edge { arc, fwd: !fwd_at_parent });
    }
    let polygons = incident
        .into_iter()
        .filter(|edges| !edges.is_empty())
        .map(|mut edges| {
            edges.shuffle(rng);
            Polygon { kind: PolygonKind::Boundary, edges, arrow_names: None }
        })
        .collect();
    let data = SurfaceData { arcs: (1..=rank).map(|a| a.to_string()).collect(), polygons };
    DissectedSurface::new(data).expect("tree gluings are disks")
}

/// Arcs without interior self-crossings whose strings have length at most
/// `max_len`, one per string up to inversion.
pub fn simple_arcs(surface: &DissectedSurface, max_len: usize) -> Vec<ZigzagArc> {
    let alg = surface.algebra();
    let mut seen = std::collections::BTreeSet::new();
    alg.enumerate_strings(max_len)
        .into_iter()
        .filter(|w| seen.insert(alg.canonical(w)))
        .filter_map(|w| arc_from_string(surface, &w).ok())
        .filter(|a| interior_crossing_count(surface, a, a) == 0)
        .collect()
}

/// A uniformly chosen simple arc with the given endpoint case, if one exists
/// within the length bound.
pub fn random_simple_arc<R: Rng>(
    rng: &mut R,
    surface: &DissectedSurface,
    max_len: usize,
    case: Option<EndpointCase>,
) -> Option<ZigzagArc> {
    let pool: Vec<ZigzagArc> = simple_arcs(surface, max_len)
        .into_iter()
        .filter(|a| case.is_none_or(|c| EndpointCase::of(a) == c))
        .collect();
    pool.choose(rng).cloned()
}

/// A random pre-tilting collection of `size` arcs with boundary endpoints,
/// built greedily from a shuffled pool of rigid arcs. Returns fewer arcs when
/// the greedy choice gets stuck.
pub fn random_pretilting<R: Rng>(
    rng: &mut R,
    surface: &DissectedSurface,
    max_len: usize,
    size: usize,
) -> Vec<StringWord> {
    let mut pool: Vec<ZigzagArc> = simple_arcs(surface, max_len)
        .into_iter()
        .filter(|a| a.has_boundary_ends() && arcs_compatible(surface, a, a).unwrap_or(false))
        .collect();
    pool.shuffle(rng);
    let mut chosen: Vec<ZigzagArc> = Vec::new();
    for a in pool {
        if chosen.len() == size {
            break;
        }
        if chosen.iter().all(|b| arcs_compatible(surface, &a, b).unwrap_or(false)) {
            chosen.push(a);
        }
    }
    chosen.into_iter().map(|a| a.string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_disks_are_disks() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for rank in 1..=6 {
            for _ in 0..20 {
                let s = random_disk(&mut rng, rank);
                assert_eq!(s.rank(), rank);
                assert_eq!(s.genus(), 0);
                assert_eq!(s.boundary_components(), 1);
                assert_eq!(s.puncture_count(), 0);
                assert_eq!(s.connected_components(), 1);
            }
        }
    }

    #[test]
    fn gluings_are_seed_deterministic() {
        let a = random_gluing(&mut ChaCha8Rng::seed_from_u64(9), 4, 0.3).data();
        let b = random_gluing(&mut ChaCha8Rng::seed_from_u64(9), 4, 0.3).data();
        assert_eq!(a, b);
    }

    #[test]
    fn pretilting_draws_are_compatible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_disk(&mut rng, 4);
        let m = random_pretilting(&mut rng, &s, 6, 3);
        assert_eq!(m.len(), 3);
        let arcs: Vec<_> = m.iter().map(|w| arc_from_string(&s, w).unwrap()).collect();
        assert!(crate::surface::is_pretilting_collection(&s, &arcs));
    }

    #[test]
    fn every_endpoint_case_occurs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..400 {
            let s = random_gluing(&mut rng, 4, 0.4);
            for a in simple_arcs(&s, 4) {
                seen.insert(EndpointCase::of(&a));
            }
            if seen.len() == 5 {
                break;
            }
        }
        assert_eq!(seen.len(), 5, "{seen:?}");
    }
}
