//! Oriented intersections of zigzag arcs and the extension groups they compute.
//!
//! Arcs are kept in minimal position implicitly: two strands running through
//! the same sequence of polygons are ordered left to right by the first place
//! where they part, and they cross exactly when that order flips between the
//! two ends of a shared run.

use std::cmp::Ordering;

use super::{arc_from_string, ArcError, DissectedSurface, PolygonKind, Turn, ZigzagArc};
use crate::quiver::StringWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    Exit { edge: usize, turn: Turn },
    Terminate,
}

fn forward_action(arc: &ZigzagArc, crossing: usize) -> Action {
    match arc.passages.get(crossing) {
        Some(p) => Action::Exit { edge: p.exit, turn: p.turn },
        None => Action::Terminate,
    }
}

fn backward_action(arc: &ZigzagArc, crossing: usize) -> Action {
    if crossing == 0 {
        Action::Terminate
    } else {
        let p = arc.passages[crossing - 1];
        Action::Exit { edge: p.enter, turn: p.turn.flip() }
    }
}

/// Position of an action seen from the entry edge; smaller keys lie further left.
fn action_key(surface: &DissectedSurface, polygon: usize, enter: usize, action: Action) -> (u8, i64) {
    let poly = surface.polygon(polygon);
    let m = poly.len() as i64;
    let e = enter as i64;
    match (poly.kind, action) {
        (PolygonKind::Boundary, Action::Exit { edge, .. }) => (0, 2 * (edge as i64 - e).rem_euclid(m)),
        (PolygonKind::Boundary, Action::Terminate) => (0, 2 * (m - 1 - e) + 1),
        (PolygonKind::Puncture, Action::Terminate) => (1, 0),
        (PolygonKind::Puncture, Action::Exit { edge, turn: Turn::Left }) => {
            let d = (edge as i64 - e).rem_euclid(m);
            (0, if d == 0 { m } else { d })
        }
        (PolygonKind::Puncture, Action::Exit { edge, turn: Turn::Right }) => {
            let d = (e - edge as i64).rem_euclid(m);
            (2, -(if d == 0 { m } else { d }))
        }
    }
}

/// Outcome of following two strands from a common crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parting {
    /// The first strand leaves on the left.
    FirstLeft,
    SecondLeft,
    /// Both strands reach the same endpoint through the same germ.
    SharedEnd,
}

/// Follows `a` from crossing `i` and `b` from crossing `j`, which must cross
/// the same arc side in the same direction, until they part.
pub fn compare_strands(surface: &DissectedSurface, a: &ZigzagArc, i: usize, b: &ZigzagArc, j: usize) -> Parting {
    debug_assert_eq!(a.to_sides[i], b.to_sides[j]);
    let (mut i, mut j) = (i, j);
    loop {
        let (x, y) = (forward_action(a, i), forward_action(b, j));
        if x == y {
            if x == Action::Terminate {
                return Parting::SharedEnd;
            }
            i += 1;
            j += 1;
            continue;
        }
        let side = a.to_sides[i];
        let kx = action_key(surface, side.polygon, side.edge, x);
        let ky = action_key(surface, side.polygon, side.edge, y);
        return match kx.cmp(&ky) {
            Ordering::Less => Parting::FirstLeft,
            Ordering::Greater => Parting::SecondLeft,
            Ordering::Equal => unreachable!("distinct actions share a key"),
        };
    }
}

/// An intersection seen as a morphism from one arc to the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientedIntersection {
    /// True when the intersection starts at the first arc.
    pub from_first: bool,
    pub weight: usize,
    /// Polygon of the shared boundary marked point, or `None` for an interior crossing.
    pub boundary_polygon: Option<usize>,
}

struct Prepared<'a> {
    fwd: &'a ZigzagArc,
    rev: ZigzagArc,
}

/// Interior crossings between `a` and `b` as pairs of crossing indices of `a`
/// and a flag telling whether `a` is the left strand. For `a == b` every
/// self-crossing shows up twice.
fn interior_runs(surface: &DissectedSurface, a: &Prepared, b: &Prepared, same: bool) -> Vec<bool> {
    let mut out = Vec::new();
    let ka = a.fwd.len() - 1;
    for (b_arc, b_is_fwd) in [(b.fwd, true), (&b.rev, false)] {
        let kb = b_arc.len() - 1;
        for i in 0..=ka {
            for j in 0..=kb {
                if a.fwd.to_sides[i] != b_arc.to_sides[j] {
                    continue;
                }
                if same && b_is_fwd && i == j {
                    continue;
                }
                let back_a = backward_action(a.fwd, i);
                if back_a != Action::Terminate && back_a == backward_action(b_arc, j) {
                    continue;
                }
                let front = compare_strands(surface, a.fwd, i, b_arc, j);
                let b_rev = if b_is_fwd { &b.rev } else { b.fwd };
                let back = compare_strands(surface, &a.rev, ka - i, b_rev, kb - j);
                match (front, back) {
                    (Parting::SharedEnd, _) | (_, Parting::SharedEnd) => {}
                    (f, k) if f == k => out.push(f == Parting::FirstLeft),
                    _ => {}
                }
            }
        }
    }
    out
}

/// Number of transversal interior crossings of two distinct arcs.
pub fn interior_crossing_count(surface: &DissectedSurface, a: &ZigzagArc, b: &ZigzagArc) -> usize {
    let same = same_arc(surface, a, b);
    let pa = Prepared { fwd: a, rev: a.reversed(surface) };
    let pb = Prepared { fwd: b, rev: b.reversed(surface) };
    let n = interior_runs(surface, &pa, &pb, same).len();
    if same {
        n / 2
    } else {
        n
    }
}

fn same_arc(surface: &DissectedSurface, a: &ZigzagArc, b: &ZigzagArc) -> bool {
    let alg = surface.algebra();
    alg.canonical(&a.string) == alg.canonical(&b.string)
}

/// Germs of an arc at boundary points: the arc oriented to start there.
fn germs<'a>(p: &'a Prepared<'a>) -> [&'a ZigzagArc; 2] {
    [p.fwd, &p.rev]
}

/// All oriented intersections between `a` and `b`, interior and at shared
/// boundary marked points. Endpoints at punctures are rejected. When `a` and
/// `b` are the same arc the identity is included once at weight zero.
pub fn oriented_intersections(
    surface: &DissectedSurface,
    a: &ZigzagArc,
    b: &ZigzagArc,
) -> Result<Vec<OrientedIntersection>, ArcError> {
    if !a.has_boundary_ends() || !b.has_boundary_ends() {
        return Err(ArcError::PuncturedEndpoint);
    }
    let same = same_arc(surface, a, b);
    let pa = Prepared { fwd: a, rev: a.reversed(surface) };
    let pb = Prepared { fwd: b, rev: b.reversed(surface) };
    let mut out = Vec::new();

    let runs = interior_runs(surface, &pa, &pb, same);
    // a self-crossing is seen once from each strand
    let runs = if same { runs[..runs.len() / 2].to_vec() } else { runs };
    for first_left in runs {
        out.push(OrientedIntersection { from_first: first_left, weight: 0, boundary_polygon: None });
        out.push(OrientedIntersection { from_first: !first_left, weight: 1, boundary_polygon: None });
    }

    let ga = germs(&pa);
    let gb = germs(&pb);
    for (ia, x) in ga.iter().enumerate() {
        for (ib, y) in gb.iter().enumerate() {
            if same && ib <= ia {
                continue;
            }
            if x.start.polygon != y.start.polygon {
                continue;
            }
            let (kx, ky) = (x.start.first_edge, y.start.first_edge);
            let poly = Some(x.start.polygon);
            match kx.cmp(&ky) {
                Ordering::Less => out.push(OrientedIntersection { from_first: true, weight: ky - kx, boundary_polygon: poly }),
                Ordering::Greater => out.push(OrientedIntersection { from_first: false, weight: kx - ky, boundary_polygon: poly }),
                Ordering::Equal => {
                    let parting = compare_strands(surface, x, 0, y, 0);
                    let from_first = match parting {
                        Parting::FirstLeft => true,
                        Parting::SecondLeft => false,
                        Parting::SharedEnd => continue,
                    };
                    out.push(OrientedIntersection { from_first, weight: 0, boundary_polygon: poly });
                }
            }
        }
    }
    if same {
        out.push(OrientedIntersection { from_first: true, weight: 0, boundary_polygon: None });
    }
    Ok(out)
}

/// Dimensions of `Ext^d(M(a), M(b))` read off from oriented intersections,
/// indexed by degree. The vector always has at least one entry.
pub fn ext_dims_geometric(surface: &DissectedSurface, a: &ZigzagArc, b: &ZigzagArc) -> Result<Vec<usize>, ArcError> {
    let same = same_arc(surface, a, b);
    let mut dims = vec![0usize];
    for it in oriented_intersections(surface, a, b)? {
        if it.from_first || same {
            if dims.len() <= it.weight {
                dims.resize(it.weight + 1, 0);
            }
            dims[it.weight] += 1;
        }
    }
    Ok(dims)
}

/// Same as [`ext_dims_geometric`] but starting from strings.
pub fn ext_dims_of_strings(surface: &DissectedSurface, x: &StringWord, y: &StringWord) -> Result<Vec<usize>, ArcError> {
    let a = arc_from_string(surface, x)?;
    let b = arc_from_string(surface, y)?;
    ext_dims_geometric(surface, &a, &b)
}

/// True if no positive-degree intersection runs from `a` to `b` or back.
pub fn arcs_compatible(surface: &DissectedSurface, a: &ZigzagArc, b: &ZigzagArc) -> Result<bool, ArcError> {
    Ok(oriented_intersections(surface, a, b)?.iter().all(|it| it.weight == 0))
}

/// Pairwise and self compatibility of a collection with boundary endpoints.
pub fn is_pretilting_collection(surface: &DissectedSurface, arcs: &[ZigzagArc]) -> bool {
    for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i..] {
            match arcs_compatible(surface, a, b) {
                Ok(true) => {}
                _ => return false,
            }
        }
    }
    true
}

/// A pre-tilting collection of pairwise distinct arcs whose size equals the rank.
pub fn is_tilting_dissection(surface: &DissectedSurface, arcs: &[ZigzagArc]) -> bool {
    let alg = surface.algebra();
    let mut keys: Vec<StringWord> = arcs.iter().map(|a| alg.canonical(&a.string)).collect();
    keys.sort_by(|x, y| alg.compare_strings(x, y));
    keys.dedup();
    keys.len() == arcs.len() && arcs.len() == surface.rank() && is_pretilting_collection(surface, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::Oracle;
    use crate::surface::{surface_from_spec, PolygonKind::*};

    fn check_against_oracle(s: &DissectedSurface, max_len: usize) {
        let alg = s.algebra();
        let oracle = Oracle::new(alg);
        let strings: Vec<_> = alg
            .enumerate_strings(max_len)
            .into_iter()
            .filter(|w| arc_from_string(s, w).unwrap().has_boundary_ends())
            .collect();
        assert!(!strings.is_empty());
        for x in &strings {
            for y in &strings {
                let geo = ext_dims_of_strings(s, x, y).unwrap();
                let top = geo.len().max(4);
                let alg_dims = oracle.ext(x, y, top);
                for d in 0..=top {
                    let g = geo.get(d).copied().unwrap_or(0);
                    assert_eq!(
                        alg_dims[d],
                        Some(g),
                        "Ext^{d}({}, {}) geometric {:?}",
                        alg.format_string(x),
                        alg.format_string(y),
                        geo
                    );
                }
            }
        }
    }

    #[test]
    fn a2_disk_matches_oracle() {
        let s = surface_from_spec(
            &["1", "2"],
            &[(Boundary, &[("1", true), ("2", true)]), (Boundary, &[("1", false)]), (Boundary, &[("2", false)])],
        )
        .unwrap();
        check_against_oracle(&s, 4);
    }

    #[test]
    fn a3_linear_with_relation_matches_oracle() {
        let s = surface_from_spec(
            &["1", "2", "3"],
            &[
                (Boundary, &[("1", true), ("2", true), ("3", true)]),
                (Boundary, &[("1", false)]),
                (Boundary, &[("2", false)]),
                (Boundary, &[("3", false)]),
            ],
        )
        .unwrap();
        check_against_oracle(&s, 4);
    }

    #[test]
    fn punctured_disk_matches_oracle() {
        let s = surface_from_spec(&["l"], &[(Puncture, &[("l", true)]), (Boundary, &[("l", false)])]).unwrap();
        check_against_oracle(&s, 4);
    }

    #[test]
    fn torus_with_one_boundary_matches_oracle() {
        let s = surface_from_spec(
            &["1", "2", "3"],
            &[
                (Boundary, &[("1", true), ("2", true), ("3", true), ("1", false), ("2", false)]),
                (Boundary, &[("3", false)]),
            ],
        )
        .unwrap();
        assert_eq!(s.genus(), 1);
        check_against_oracle(&s, 6);
    }

    /// Random gluings of polygons must agree with the algebraic computation.
    #[test]
    fn random_gluings_match_oracle() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..80 {
            let s = crate::random::random_gluing(&mut rng, 4, 0.3);
            check_against_oracle(&s, if s.rank() < 3 { 5 } else { 3 });
        }
    }
}
