//! Zigzag arcs and their strings.

use super::{DissectedSurface, PolygonKind, SideRef};
use crate::quiver::{Letter, StringError, StringWord};

/// Which side of the arc the cut corner lies on while passing through a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Turn {
    /// Exit through the clockwise neighbour of the entry edge (a direct letter).
    Left,
    /// Exit through the counterclockwise neighbour (an inverse letter).
    Right,
}

impl Turn {
    pub fn flip(self) -> Turn {
        match self {
            Turn::Left => Turn::Right,
            Turn::Right => Turn::Left,
        }
    }
}

/// Passage of an arc through one polygon between two consecutive crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Passage {
    pub polygon: usize,
    pub enter: usize,
    pub exit: usize,
    pub turn: Turn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndKind {
    Boundary { weight: usize },
    Puncture,
}

/// Endpoint of an arc: the polygon containing the marked point and the edge
/// through which the arc leaves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArcEnd {
    pub polygon: usize,
    pub first_edge: usize,
    pub kind: EndKind,
}

impl ArcEnd {
    pub fn weight(&self) -> Option<usize> {
        match self.kind {
            EndKind::Boundary { weight } => Some(weight),
            EndKind::Puncture => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichEnd {
    Start,
    End,
}

/// A zigzag arc in minimal position with respect to the coordinate arcs.
///
/// Crossing `i` passes through coordinate arc `crossings[i]` from the side
/// `from_sides[i]` to `to_sides[i]`; passage `i` runs through polygon
/// `to_sides[i].polygon` to `from_sides[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZigzagArc {
    pub string: StringWord,
    pub crossings: Vec<usize>,
    pub from_sides: Vec<SideRef>,
    pub to_sides: Vec<SideRef>,
    pub passages: Vec<Passage>,
    pub start: ArcEnd,
    pub end: ArcEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArcError {
    #[error(transparent)]
    NotAString(#[from] StringError),
    #[error("crossing sequence is not zigzag: {0}")]
    NotZigzag(String),
    #[error("endpoint lies at a puncture")]
    EndpointIsPuncture,
    #[error("arc has an endpoint at a puncture")]
    PuncturedEndpoint,
}

fn end_at(surface: &DissectedSurface, side: SideRef) -> ArcEnd {
    let p = surface.polygon(side.polygon);
    let kind = match p.kind {
        PolygonKind::Boundary => EndKind::Boundary { weight: p.len() - 1 - side.edge },
        PolygonKind::Puncture => EndKind::Puncture,
    };
    ArcEnd { polygon: side.polygon, first_edge: side.edge, kind }
}

impl ZigzagArc {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }
    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn has_boundary_ends(&self) -> bool {
        self.start.weight().is_some() && self.end.weight().is_some()
    }

    pub fn end(&self, which: WhichEnd) -> ArcEnd {
        match which {
            WhichEnd::Start => self.start,
            WhichEnd::End => self.end,
        }
    }

    /// The same arc walked backwards.
    pub fn reversed(&self, surface: &DissectedSurface) -> ZigzagArc {
        let alg = surface.algebra();
        ZigzagArc {
            string: alg.inverse(&self.string),
            crossings: self.crossings.iter().rev().copied().collect(),
            from_sides: self.to_sides.iter().rev().copied().collect(),
            to_sides: self.from_sides.iter().rev().copied().collect(),
            passages: self
                .passages
                .iter()
                .rev()
                .map(|p| Passage { polygon: p.polygon, enter: p.exit, exit: p.enter, turn: p.turn.flip() })
                .collect(),
            start: self.end,
            end: self.start,
        }
    }

    /// Projective dimension predicted by the endpoint weights.
    pub fn predicted_pd(&self) -> Option<usize> {
        Some(self.start.weight()?.max(self.end.weight()?))
    }
}

/// The zigzag arc of a string. A trivial string crosses its arc from the
/// forward side to the reverse side.
pub fn arc_from_string(surface: &DissectedSurface, w: &StringWord) -> Result<ZigzagArc, ArcError> {
    let alg = surface.algebra();
    alg.check_string(w)?;
    if w.letters.is_empty() {
        let [f, r] = surface.sides(w.start);
        return Ok(ZigzagArc {
            string: w.clone(),
            crossings: vec![w.start],
            from_sides: vec![f],
            to_sides: vec![r],
            passages: vec![],
            start: end_at(surface, f),
            end: end_at(surface, r),
        });
    }
    let mut passages = Vec::with_capacity(w.letters.len());
    for l in &w.letters {
        let (p, j) = surface.arrow_corner(l.arrow);
        let poly = surface.polygon(p);
        let nj = (j + 1) % poly.len();
        passages.push(if l.inverse {
            Passage { polygon: p, enter: nj, exit: j, turn: Turn::Right }
        } else {
            Passage { polygon: p, enter: j, exit: nj, turn: Turn::Left }
        });
    }
    let k = passages.len();
    let mut to_sides = Vec::with_capacity(k + 1);
    let mut from_sides = Vec::with_capacity(k + 1);
    for (i, p) in passages.iter().enumerate() {
        let entry = SideRef { polygon: p.polygon, edge: p.enter };
        if i > 0 {
            let prev_exit = from_sides[i];
            if surface.twin(prev_exit) != entry {
                return Err(ArcError::NotZigzag(format!("letters {} and {} do not share a crossing", i - 1, i)));
            }
        } else {
            from_sides.push(surface.twin(entry));
        }
        to_sides.push(entry);
        from_sides.push(SideRef { polygon: p.polygon, edge: p.exit });
    }
    to_sides.push(surface.twin(from_sides[k]));
    let crossings = to_sides.iter().map(|s| surface.edge(*s).arc).collect();
    Ok(ZigzagArc {
        string: w.clone(),
        crossings,
        start: end_at(surface, from_sides[0]),
        end: end_at(surface, to_sides[k]),
        from_sides,
        to_sides,
        passages,
    })
}

/// Crossing data of an arc: the side of the first crossed arc in the starting
/// polygon, then for each further polygon the exit edge and turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingData {
    pub first: SideRef,
    pub steps: Vec<(usize, Turn)>,
}

impl CrossingData {
    pub fn of(arc: &ZigzagArc) -> CrossingData {
        CrossingData { first: arc.from_sides[0], steps: arc.passages.iter().map(|p| (p.exit, p.turn)).collect() }
    }
}

/// Reads the string of an arc from its crossing data, checking the zigzag
/// condition at every polygon.
pub fn string_from_arc(surface: &DissectedSurface, data: &CrossingData) -> Result<StringWord, ArcError> {
    let mut cur = surface.twin(data.first);
    let start_vertex = surface.edge(cur).arc;
    let mut letters = Vec::new();
    for (i, &(exit, turn)) in data.steps.iter().enumerate() {
        let poly = surface.polygon(cur.polygon);
        if exit >= poly.len() {
            return Err(ArcError::NotZigzag(format!("step {i}: no edge {exit}")));
        }
        let letter = match turn {
            Turn::Left if poly.next_edge(cur.edge) == Some(exit) => {
                Letter::direct(surface.corner_arrow(cur.polygon, cur.edge))
            }
            Turn::Right if poly.prev_edge(cur.edge) == Some(exit) => {
                Letter::inv(surface.corner_arrow(cur.polygon, exit))
            }
            _ => {
                return Err(ArcError::NotZigzag(format!(
                    "step {i}: edges {} and {exit} of polygon {} are not a corner on the {:?}",
                    cur.edge, cur.polygon, turn
                )))
            }
        };
        letters.push(letter);
        cur = surface.twin(crate::surface::SideRef { polygon: cur.polygon, edge: exit });
    }
    let w = StringWord { start: start_vertex, letters };
    surface.algebra().check_string(&w)?;
    Ok(w)
}

pub fn is_zigzag(surface: &DissectedSurface, data: &CrossingData) -> bool {
    string_from_arc(surface, data).is_ok()
}

pub fn weight_at_endpoint(arc: &ZigzagArc, which: WhichEnd) -> Result<usize, ArcError> {
    arc.end(which).weight().ok_or(ArcError::EndpointIsPuncture)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{surface_from_spec, PolygonKind::*};

    fn a2() -> DissectedSurface {
        surface_from_spec(
            &["1", "2"],
            &[(Boundary, &[("1", true), ("2", true)]), (Boundary, &[("1", false)]), (Boundary, &[("2", false)])],
        )
        .unwrap()
    }

    #[test]
    fn trivial_arc_on_rank_one_disk() {
        let s = surface_from_spec(&["l"], &[(Boundary, &[("l", true)]), (Boundary, &[("l", false)])]).unwrap();
        let arc = arc_from_string(&s, &StringWord::trivial(0)).unwrap();
        assert_eq!(arc.crossings, vec![0]);
        assert_eq!(arc.predicted_pd(), Some(0));
    }

    #[test]
    fn weights_on_a2() {
        let s = a2();
        let alg = s.algebra();
        let s1 = arc_from_string(&s, &StringWord::trivial(0)).unwrap();
        assert_eq!((s1.start.weight(), s1.end.weight()), (Some(1), Some(0)));
        let p1 = arc_from_string(&s, &alg.parse_string("p0c0").unwrap()).unwrap();
        assert_eq!(p1.predicted_pd(), Some(0));
    }

    #[test]
    fn round_trip_strings() {
        let s = a2();
        for w in s.algebra().enumerate_strings(4) {
            let arc = arc_from_string(&s, &w).unwrap();
            assert_eq!(string_from_arc(&s, &CrossingData::of(&arc)).unwrap(), w);
            let rev = arc.reversed(&s);
            assert_eq!(s.algebra().canonical(&rev.string), w);
        }
    }

    #[test]
    fn zigzag_checks() {
        let sq = surface_from_spec(
            &["a", "b", "c", "d"],
            &[
                (Boundary, &[("a", true), ("b", true), ("c", true), ("d", true)]),
                (Boundary, &[("a", false)]),
                (Boundary, &[("b", false)]),
                (Boundary, &[("c", false)]),
                (Boundary, &[("d", false)]),
            ],
        )
        .unwrap();
        let first = SideRef { polygon: 1, edge: 0 };
        assert!(is_zigzag(&sq, &CrossingData { first, steps: vec![] }));
        assert!(is_zigzag(&sq, &CrossingData { first, steps: vec![(1, Turn::Left)] }));
        assert!(!is_zigzag(&sq, &CrossingData { first, steps: vec![(2, Turn::Left)] }));
        // a punctured triangle: going the long way round is not a corner
        let pt = surface_from_spec(
            &["x", "y", "z"],
            &[
                (Puncture, &[("x", true), ("y", true), ("z", true)]),
                (Boundary, &[("x", false)]),
                (Boundary, &[("y", false)]),
                (Boundary, &[("z", false)]),
            ],
        );
        // three boundary 1-gons around a punctured triangle is a valid annulus-like surface
        if let Ok(pt) = pt {
            let first = SideRef { polygon: 1, edge: 0 };
            assert!(is_zigzag(&pt, &CrossingData { first, steps: vec![(1, Turn::Left)] }));
            assert!(!is_zigzag(&pt, &CrossingData { first, steps: vec![(1, Turn::Right)] }));
            assert!(is_zigzag(&pt, &CrossingData { first, steps: vec![(2, Turn::Right)] }));
        } else {
            panic!("punctured triangle should validate: {:?}", pt.err());
        }
    }
}
