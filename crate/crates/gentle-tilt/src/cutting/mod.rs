//! Cutting a dissected surface along a simple zigzag arc.
//!
//! The cut is computed polygon by polygon. Every coordinate arc crossed by the
//! cut is split into pieces at the crossing points, and each polygon the cut
//! runs through is sliced by its chords into faces. A face that still holds a
//! boundary marked point (or the puncture) becomes a polygon of the cut
//! surface. A face holding none is a thin triangle or quadrilateral between two
//! pieces; contracting it identifies those pieces, so they become one arc.
//! Crossing points on the two copies of the cut all slide to one new marked
//! point per copy, so a chord between two pieces becomes a corner there.
//!
//! Corner arrows keep their names. An arrow whose corner is cut off by the
//! cut reappears at the new marked point, which is the arrow bijection of the
//! rank count.

mod appendix;

pub use appendix::{appendix_cut_algebra, AppendixError};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::io::SurfaceJson;
use crate::quiver::{quiver_isomorphic, StringWord};
use crate::surface::{
    arc_from_string, compare_strands, interior_crossing_count, string_from_arc, ArcError, CrossingData,
    DissectedSurface, Edge, Parting, Polygon, PolygonKind, SideRef, SurfaceData, SurfaceError, Turn, ZigzagArc,
};

/// Where the two endpoints of the cut lie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EndpointCase {
    /// Two different boundary marked points.
    DistinctBoundary,
    /// A loop at one boundary marked point.
    BoundaryLoop,
    /// One boundary marked point and one puncture.
    BoundaryAndPuncture,
    /// Two different punctures.
    DistinctPunctures,
    /// A loop at one puncture.
    PunctureLoop,
}

impl EndpointCase {
    pub const ALL: [EndpointCase; 5] = [
        EndpointCase::DistinctBoundary,
        EndpointCase::BoundaryLoop,
        EndpointCase::BoundaryAndPuncture,
        EndpointCase::DistinctPunctures,
        EndpointCase::PunctureLoop,
    ];

    pub fn of(arc: &ZigzagArc) -> EndpointCase {
        let same = arc.start.polygon == arc.end.polygon;
        match (arc.start.weight().is_some(), arc.end.weight().is_some(), same) {
            (true, true, false) => EndpointCase::DistinctBoundary,
            (true, true, true) => EndpointCase::BoundaryLoop,
            (false, false, false) => EndpointCase::DistinctPunctures,
            (false, false, true) => EndpointCase::PunctureLoop,
            _ => EndpointCase::BoundaryAndPuncture,
        }
    }

    /// Roman numeral used in reports.
    pub fn label(self) -> &'static str {
        match self {
            EndpointCase::DistinctBoundary => "I",
            EndpointCase::BoundaryLoop => "II",
            EndpointCase::BoundaryAndPuncture => "III",
            EndpointCase::DistinctPunctures => "IV",
            EndpointCase::PunctureLoop => "V",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CutError {
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error("the arc `{0}` crosses itself")]
    NotSimple(String),
    #[error("the arc `{0}` crosses the cut")]
    ArcCrossesCut(String),
    #[error("the arc `{0}` is the cut itself; use the bigon arcs")]
    ArcIsGamma(String),
    #[error("arcs `{0}` and `{1}` of the collection cross")]
    CollectionCrossing(String, String),
    #[error("the cut surface is invalid: {0}")]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Tilting(#[from] crate::tilting::TiltingError),
    #[error("inconsistent cut: {0}")]
    Internal(String),
}

/// A point on a polygon boundary where the cut meets it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Port {
    /// Crossing `i` of the cut, on its entry side (`to_side`) or exit side.
    Cross { i: usize, to_side: bool },
    /// The start or end germ of the cut at its marked point.
    Germ { start: bool },
}

impl Port {
    /// The other end of the chord of the cut leaving this port.
    fn partner(self, last: usize) -> Port {
        match self {
            Port::Germ { start: true } => Port::Cross { i: 0, to_side: false },
            Port::Germ { start: false } => Port::Cross { i: last, to_side: true },
            Port::Cross { i, to_side: true } if i == last => Port::Germ { start: false },
            Port::Cross { i, to_side: true } => Port::Cross { i: i + 1, to_side: false },
            Port::Cross { i: 0, to_side: false } => Port::Germ { start: true },
            Port::Cross { i, to_side: false } => Port::Cross { i: i - 1, to_side: true },
        }
    }
}

/// Boundary element of a sliced polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Elem {
    Piece { piece: usize, fwd: bool },
    Corner(usize),
    Port(Port),
    /// A stretch of boundary carrying one copy of a marked point.
    Stretch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FaceElem {
    Piece { piece: usize, fwd: bool },
    Corner(usize),
    Chord { from: Port, to: Port },
    Stretch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FaceKind {
    Boundary,
    Puncture,
    Collapsed,
}

#[derive(Debug, Clone)]
struct Face {
    polygon: usize,
    elems: Vec<FaceElem>,
    kind: FaceKind,
}

/// Where a side of an arc piece ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Loc {
    Kept(SideRef),
    Collapsed(usize),
}

/// An arc together with its reverse, to address strands in either direction.
struct Strands<'a> {
    fwd: &'a ZigzagArc,
    rev: ZigzagArc,
}

impl<'a> Strands<'a> {
    fn new(surface: &DissectedSurface, arc: &'a ZigzagArc) -> Self {
        Strands { fwd: arc, rev: arc.reversed(surface) }
    }
    fn get(&self, reversed: bool) -> &ZigzagArc {
        if reversed {
            &self.rev
        } else {
            self.fwd
        }
    }
    fn last(&self) -> usize {
        self.fwd.len() - 1
    }
    /// Crossing `i` oriented to pass from the forward side to the reverse side
    /// of the crossed arc.
    fn normalized(&self, surface: &DissectedSurface, i: usize) -> (bool, usize) {
        if self.fwd.from_sides[i] == surface.sides(self.fwd.crossings[i])[0] {
            (false, i)
        } else {
            (true, self.last() - i)
        }
    }
    fn back(&self, (r, j): (bool, usize)) -> (bool, usize) {
        (!r, self.last() - j)
    }
}

/// Order of two normalized strands along the crossed arc, from `e0` to `e1`.
fn strand_order(
    surface: &DissectedSurface,
    a: &Strands,
    x: (bool, usize),
    b: &Strands,
    y: (bool, usize),
) -> Ordering {
    // crossing from the forward side, "left" points towards e0
    match compare_strands(surface, a.get(x.0), x.1, b.get(y.0), y.1) {
        Parting::FirstLeft => Ordering::Less,
        Parting::SecondLeft => Ordering::Greater,
        Parting::SharedEnd => {
            let (xb, yb) = (a.back(x), b.back(y));
            match compare_strands(surface, a.get(xb.0), xb.1, b.get(yb.0), yb.1) {
                Parting::FirstLeft => Ordering::Greater,
                Parting::SecondLeft => Ordering::Less,
                Parting::SharedEnd => Ordering::Equal,
            }
        }
    }
}

/// Union-find that also tracks whether two pieces are glued with opposite orientations.
struct ParityUnion {
    parent: Vec<usize>,
    flip: Vec<bool>,
}

impl ParityUnion {
    fn new(n: usize) -> Self {
        ParityUnion { parent: (0..n).collect(), flip: vec![false; n] }
    }
    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, f) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.flip[x] ^= f;
        (root, self.flip[x])
    }
    fn union(&mut self, a: usize, b: usize, flip: bool) -> Result<(), CutError> {
        let (ra, fa) = self.find(a);
        let (rb, fb) = self.find(b);
        if ra == rb {
            return if fa ^ fb == flip { Ok(()) } else { Err(CutError::Internal("piece orientations clash".into())) };
        }
        self.parent[rb] = ra;
        self.flip[rb] = fa ^ fb ^ flip;
        Ok(())
    }
}

/// Counts before and after a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutCensus {
    pub circles: (usize, usize),
    pub bullets: (usize, usize),
    pub rank: (usize, usize),
    pub arrows: (usize, usize),
}

impl CutCensus {
    /// Two more marked points of each colour, one more arc, the same arrows.
    pub fn holds(&self) -> bool {
        self.circles.1 == self.circles.0 + 2
            && self.bullets.1 == self.bullets.0 + 2
            && self.rank.1 == self.rank.0 + 1
            && self.arrows.1 == self.arrows.0
    }
}

/// The surface obtained by cutting along a simple zigzag arc, with the maps
/// relating arcs before and after.
#[derive(Debug, Clone)]
pub struct CutResult {
    pub source: DissectedSurface,
    pub gamma: ZigzagArc,
    pub surface: DissectedSurface,
    pub case: EndpointCase,
    /// New boundary marked point on the copy of the cut to its left.
    pub q_prime: usize,
    /// New boundary marked point on the copy to its right.
    pub q_double_prime: usize,
    /// Arcs cutting off `q_prime` and `q_double_prime`.
    pub gamma1: ZigzagArc,
    pub gamma2: ZigzagArc,
    /// New polygons holding a copy of an endpoint of the cut.
    pub endpoint_copies: Vec<usize>,
    /// Arrows whose corner was cut off; they now sit at `q_prime` or `q_double_prime`.
    pub moved_arrows: Vec<String>,
    /// Crossings of the cut on each arc, ordered from `e0` to `e1`.
    order: Vec<Vec<usize>>,
    piece_offset: Vec<usize>,
    /// New arc of each piece and whether it is reversed there.
    piece_arc: Vec<(usize, bool)>,
    side_loc: HashMap<(usize, bool), Loc>,
}

/// Cuts `surface` along the simple zigzag arc `gamma`.
pub fn cut_surface(surface: &DissectedSurface, gamma: &ZigzagArc) -> Result<CutResult, CutError> {
    let alg = surface.algebra();
    if interior_crossing_count(surface, gamma, gamma) > 0 {
        return Err(CutError::NotSimple(alg.format_string(&gamma.string)));
    }
    Cutter::new(surface, gamma).run()
}

/// Cuts along the arc of a string.
pub fn cut_along_string(surface: &DissectedSurface, w: &StringWord) -> Result<CutResult, CutError> {
    cut_surface(surface, &arc_from_string(surface, w)?)
}

struct Cutter<'a> {
    s: &'a DissectedSurface,
    gamma: &'a ZigzagArc,
    order: Vec<Vec<usize>>,
    ordinal: Vec<usize>,
    piece_offset: Vec<usize>,
}

impl<'a> Cutter<'a> {
    fn new(s: &'a DissectedSurface, gamma: &'a ZigzagArc) -> Self {
        let g = Strands::new(s, gamma);
        let mut order = vec![Vec::new(); s.rank()];
        for (i, &arc) in gamma.crossings.iter().enumerate() {
            order[arc].push(i);
        }
        for list in &mut order {
            list.sort_by(|&x, &y| strand_order(s, &g, g.normalized(s, x), &g, g.normalized(s, y)));
        }
        let mut ordinal = vec![0; gamma.len()];
        for list in &order {
            for (t, &i) in list.iter().enumerate() {
                ordinal[i] = t;
            }
        }
        let mut piece_offset = Vec::with_capacity(s.rank() + 1);
        let mut acc = 0;
        for list in &order {
            piece_offset.push(acc);
            acc += list.len() + 1;
        }
        piece_offset.push(acc);
        Cutter { s, gamma, order, ordinal, piece_offset }
    }

    fn last(&self) -> usize {
        self.gamma.len() - 1
    }

    fn germs_in(&self, polygon: usize) -> Vec<Port> {
        let mut out = Vec::new();
        if self.gamma.start.polygon == polygon {
            out.push(Port::Germ { start: true });
        }
        if self.gamma.end.polygon == polygon {
            out.push(Port::Germ { start: false });
        }
        out
    }

    /// Boundary cycles of a polygon sliced by the cut: the outer cycle, and
    /// for a puncture reached by the cut, the small circle around it.
    fn cycles(&self, pi: usize) -> Vec<Vec<Elem>> {
        let poly = self.s.polygon(pi);
        let mut outer = Vec::new();
        for (j, e) in poly.edges.iter().enumerate() {
            let side = SideRef { polygon: pi, edge: j };
            let list = &self.order[e.arc];
            let r = list.len();
            for idx in 0..=r {
                let t = if e.fwd { idx } else { r - idx };
                outer.push(Elem::Piece { piece: self.piece_offset[e.arc] + t, fwd: e.fwd });
                if idx < r {
                    let i = if e.fwd { list[t] } else { list[t - 1] };
                    outer.push(Elem::Port(Port::Cross { i, to_side: self.gamma.to_sides[i] == side }));
                }
            }
            if poly.next_edge(j).is_some() {
                outer.push(Elem::Corner(j));
            }
        }
        let germs = self.germs_in(pi);
        // germs ordered by where their chords land, latest first
        let mut sorted: Vec<(usize, Port)> = germs
            .iter()
            .map(|&g| {
                let partner = Elem::Port(g.partner(self.last()));
                (outer.iter().position(|x| *x == partner).expect("germ chord lands on the polygon"), g)
            })
            .collect();
        sorted.sort_by(|a, b| b.0.cmp(&a.0));
        match poly.kind {
            PolygonKind::Boundary => {
                outer.push(Elem::Stretch);
                for &(_, g) in &sorted {
                    outer.push(Elem::Port(g));
                    outer.push(Elem::Stretch);
                }
                vec![outer]
            }
            PolygonKind::Puncture if sorted.is_empty() => vec![outer],
            PolygonKind::Puncture => {
                let inner = sorted.iter().flat_map(|&(_, g)| [Elem::Port(g), Elem::Stretch]).collect();
                vec![outer, inner]
            }
        }
    }

    /// Chords that cut off a corner, as (port on the edge before the corner,
    /// port on the edge after it) with the corner index.
    fn corner_chords(&self, pi: usize) -> Vec<(Port, Port, usize)> {
        self.gamma
            .passages
            .iter()
            .enumerate()
            .filter(|(_, p)| p.polygon == pi)
            .map(|(i, p)| {
                let entry = Port::Cross { i, to_side: true };
                let exit = Port::Cross { i: i + 1, to_side: false };
                match p.turn {
                    Turn::Left => (entry, exit, p.enter),
                    Turn::Right => (exit, entry, p.exit),
                }
            })
            .collect()
    }

    fn faces_of(&self, pi: usize) -> Result<Vec<Face>, CutError> {
        let cycles = self.cycles(pi);
        let mut loc = HashMap::new();
        for (c, cyc) in cycles.iter().enumerate() {
            for (x, e) in cyc.iter().enumerate() {
                if let Elem::Port(p) = e {
                    loc.insert(*p, (c, x));
                }
            }
        }
        let mut visited: Vec<Vec<bool>> = cycles.iter().map(|c| vec![false; c.len()]).collect();
        let mut faces = Vec::new();
        for c0 in 0..cycles.len() {
            for x0 in 0..cycles[c0].len() {
                if visited[c0][x0] || matches!(cycles[c0][x0], Elem::Port(_)) {
                    continue;
                }
                let mut elems = Vec::new();
                let (mut c, mut x) = (c0, x0);
                loop {
                    visited[c][x] = true;
                    elems.push(match cycles[c][x] {
                        Elem::Piece { piece, fwd } => FaceElem::Piece { piece, fwd },
                        Elem::Corner(j) => FaceElem::Corner(j),
                        Elem::Stretch => FaceElem::Stretch,
                        Elem::Port(_) => unreachable!("ports are never visited"),
                    });
                    let nx = (x + 1) % cycles[c].len();
                    (c, x) = match cycles[c][nx] {
                        Elem::Port(p) => {
                            let q = p.partner(self.last());
                            let &(qc, qx) =
                                loc.get(&q).ok_or_else(|| CutError::Internal(format!("chord end {q:?} missing")))?;
                            elems.push(FaceElem::Chord { from: p, to: q });
                            (qc, (qx + 1) % cycles[qc].len())
                        }
                        _ => (c, nx),
                    };
                    if (c, x) == (c0, x0) {
                        break;
                    }
                    if elems.len() > 4 * cycles.iter().map(Vec::len).sum::<usize>() {
                        return Err(CutError::Internal("face tracing does not close".into()));
                    }
                }
                faces.push(Face { polygon: pi, elems, kind: FaceKind::Collapsed });
            }
        }
        // classify
        let poly = self.s.polygon(pi);
        let central_candidate = poly.kind == PolygonKind::Puncture && self.germs_in(pi).is_empty();
        let corner_dirs: Vec<(Port, Port)> = self.corner_chords(pi).iter().map(|&(u, v, _)| (v, u)).collect();
        let mut central = 0;
        for f in &mut faces {
            let stretches = f.elems.iter().filter(|e| **e == FaceElem::Stretch).count();
            f.kind = if stretches > 1 {
                return Err(CutError::Internal(format!("face of polygon {pi} holds {stretches} marked points")));
            } else if stretches == 1 {
                FaceKind::Boundary
            } else if central_candidate
                && !f.elems.iter().any(|e| matches!(e, FaceElem::Chord { from, to } if corner_dirs.contains(&(*from, *to))))
            {
                central += 1;
                FaceKind::Puncture
            } else {
                FaceKind::Collapsed
            };
        }
        if central_candidate && central != 1 {
            return Err(CutError::Internal(format!("polygon {pi} keeps its puncture in {central} faces")));
        }
        Ok(faces)
    }

    fn run(self) -> Result<CutResult, CutError> {
        let s = self.s;
        let alg = s.algebra();
        let mut faces = Vec::new();
        for pi in 0..s.polygons().len() {
            faces.extend(self.faces_of(pi)?);
        }
        let piece_count = *self.piece_offset.last().unwrap();
        let piece_owner: Vec<usize> =
            (0..s.rank()).flat_map(|a| std::iter::repeat(a).take(self.order[a].len() + 1)).collect();

        // contract the faces without a marked point
        let mut pu = ParityUnion::new(piece_count);
        for f in faces.iter().filter(|f| f.kind == FaceKind::Collapsed) {
            let pieces: Vec<(usize, bool)> = f
                .elems
                .iter()
                .filter_map(|e| match e {
                    FaceElem::Piece { piece, fwd } => Some((*piece, *fwd)),
                    _ => None,
                })
                .collect();
            if pieces.len() != 2 {
                return Err(CutError::Internal(format!(
                    "face without marked point in polygon {} has {} pieces",
                    f.polygon,
                    pieces.len()
                )));
            }
            // walked along the face, the two pieces are the same curve in
            // opposite directions
            let (a, b) = (pieces[0], pieces[1]);
            pu.union(a.0, b.0, a.1 == b.1)?;
        }

        // name the new arcs
        let mut root_arc: BTreeMap<usize, usize> = BTreeMap::new();
        let mut names: Vec<String> = Vec::new();
        let mut piece_arc = Vec::with_capacity(piece_count);
        for p in 0..piece_count {
            let (root, flip) = pu.find(p);
            let next = root_arc.len();
            let arc = *root_arc.entry(root).or_insert_with(|| {
                let mut name = s.arc_names()[piece_owner[p]].clone();
                while names.contains(&name) || (name != s.arc_names()[piece_owner[p]] && s.arc_index(&name).is_some()) {
                    name.push('\'');
                }
                names.push(name);
                next
            });
            piece_arc.push((arc, flip));
        }

        // build the polygons
        let arrow_name = |pi: usize, c: usize| alg.arrow_name(s.corner_arrow(pi, c)).to_string();
        let mut polygons = Vec::new();
        let mut side_loc = HashMap::new();
        let mut endpoint_copies = Vec::new();
        let mut moved_arrows = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            if f.kind == FaceKind::Collapsed {
                for e in &f.elems {
                    if let FaceElem::Piece { piece, fwd } = e {
                        side_loc.insert((*piece, *fwd), Loc::Collapsed(fi));
                    }
                }
                continue;
            }
            let start = match f.kind {
                FaceKind::Boundary => f.elems.iter().position(|e| *e == FaceElem::Stretch).unwrap() + 1,
                _ => f.elems.iter().position(|e| matches!(e, FaceElem::Piece { .. })).unwrap_or(0),
            };
            let len = f.elems.len();
            let walk: Vec<FaceElem> = (0..len).map(|k| f.elems[(start + k) % len]).filter(|e| *e != FaceElem::Stretch).collect();
            let chords_to_corner: HashMap<(Port, Port), usize> = self
                .corner_chords(f.polygon)
                .into_iter()
                .flat_map(|(u, v, c)| [((u, v), c), ((v, u), c)])
                .collect();
            let np = polygons.len();
            let mut edges = Vec::new();
            let mut arrows = Vec::new();
            let mut between: Vec<FaceElem> = Vec::new();
            let corner_name = |between: &[FaceElem], moved: &mut Vec<String>| -> Result<String, CutError> {
                match between {
                    [FaceElem::Corner(j)] => Ok(arrow_name(f.polygon, *j)),
                    [FaceElem::Chord { from, to }] => {
                        let c = chords_to_corner
                            .get(&(*from, *to))
                            .ok_or_else(|| CutError::Internal("chord between pieces is not a corner chord".into()))?;
                        let name = arrow_name(f.polygon, *c);
                        moved.push(name.clone());
                        Ok(name)
                    }
                    other => Err(CutError::Internal(format!("unexpected corner {other:?}"))),
                }
            };
            for e in &walk {
                match *e {
                    FaceElem::Piece { piece, fwd } => {
                        if !edges.is_empty() {
                            arrows.push(corner_name(&between, &mut moved_arrows)?);
                        }
                        between.clear();
                        let (arc, flip) = piece_arc[piece];
                        side_loc.insert((piece, fwd), Loc::Kept(SideRef { polygon: np, edge: edges.len() }));
                        edges.push(Edge { arc, fwd: fwd ^ flip });
                    }
                    other => between.push(other),
                }
            }
            let kind = match f.kind {
                FaceKind::Boundary => {
                    let germ_here = f.elems.iter().any(|e| {
                        matches!(e, FaceElem::Chord { from: Port::Germ { .. }, .. } | FaceElem::Chord { to: Port::Germ { .. }, .. })
                    });
                    if germ_here {
                        endpoint_copies.push(np);
                    }
                    PolygonKind::Boundary
                }
                _ => {
                    // wrap-around corner
                    if edges.len() > 0 {
                        arrows.push(corner_name(&between, &mut moved_arrows)?);
                    }
                    PolygonKind::Puncture
                }
            };
            if edges.is_empty() {
                return Err(CutError::Internal(format!("empty polygon from polygon {}", f.polygon)));
            }
            polygons.push(Polygon { kind, edges, arrow_names: Some(arrows) });
        }
        moved_arrows.sort();
        let surface = DissectedSurface::new(SurfaceData { arcs: names, polygons })?;

        // the two new marked points
        let gamma = self.gamma;
        let mut q = [None, None];
        for (i, &arc) in gamma.crossings.iter().enumerate() {
            let t = self.ordinal[i];
            let base = self.piece_offset[arc];
            let from_fwd = gamma.from_sides[i] == s.sides(arc)[0];
            // piece before the crossing point ends there (slot 1), the one after starts there (slot 0)
            let (left, right) = if from_fwd { ((base + t, 1), (base + t + 1, 0)) } else { ((base + t + 1, 0), (base + t, 1)) };
            for (k, (piece, slot)) in [left, right].into_iter().enumerate() {
                let (new_arc, flip) = piece_arc[piece];
                let point = surface.slot_point(new_arc, slot ^ usize::from(flip));
                match q[k] {
                    None => q[k] = Some(point),
                    Some(p) if p == point => {}
                    Some(_) => return Err(CutError::Internal("crossing points do not meet in one marked point".into())),
                }
            }
        }
        let (q_prime, q_double_prime) = (q[0].unwrap(), q[1].unwrap());
        let gamma1 = bigon_arc_at(&surface, q_prime)?;
        let gamma2 = bigon_arc_at(&surface, q_double_prime)?;
        let result = CutResult {
            source: s.clone(),
            gamma: gamma.clone(),
            case: EndpointCase::of(gamma),
            surface,
            q_prime,
            q_double_prime,
            gamma1,
            gamma2,
            endpoint_copies,
            moved_arrows,
            order: self.order,
            piece_offset: self.piece_offset,
            piece_arc,
            side_loc,
        };
        let census = result.census();
        if !census.holds() {
            return Err(CutError::Internal(format!("census {census:?}")));
        }
        Ok(result)
    }
}

/// The arc running once around a boundary marked point, crossing every arc
/// of its fan.
pub fn bigon_arc_at(surface: &DissectedSurface, point: usize) -> Result<ZigzagArc, CutError> {
    let fan = surface.fan(point);
    let data = CrossingData { first: fan[0], steps: fan[1..].iter().map(|s| (s.edge, Turn::Left)).collect() };
    let w = string_from_arc(surface, &data)?;
    Ok(arc_from_string(surface, &w)?)
}

/// The bigon arcs of a cut.
pub fn bigon_arcs(cut: &CutResult) -> (ZigzagArc, ZigzagArc) {
    (cut.gamma1.clone(), cut.gamma2.clone())
}

/// The image of an arc that does not cross the cut.
pub fn induced_arc(cut: &CutResult, alpha: &ZigzagArc) -> Result<ZigzagArc, CutError> {
    cut.induced_arc(alpha)
}

impl CutResult {
    pub fn census(&self) -> CutCensus {
        let (a, b) = (&self.source, &self.surface);
        CutCensus {
            circles: (a.circle_count(), b.circle_count()),
            bullets: (a.bullet_count(), b.bullet_count()),
            rank: (a.rank(), b.rank()),
            arrows: (a.algebra().quiver().arrow_count(), b.algebra().quiver().arrow_count()),
        }
    }

    /// New arcs that the pieces of an old arc became, in order from `e0`.
    pub fn piece_arcs(&self, arc: usize) -> Vec<usize> {
        (self.piece_offset[arc]..self.piece_offset[arc + 1]).map(|p| self.piece_arc[p].0).collect()
    }

    fn piece_of(&self, alpha: &Strands, i: usize) -> Result<usize, CutError> {
        let s = &self.source;
        let g = Strands::new(s, &self.gamma);
        let arc = alpha.fwd.crossings[i];
        let x = alpha.normalized(s, i);
        let mut t = 0;
        for &j in &self.order[arc] {
            match strand_order(s, alpha, x, &g, g.normalized(s, j)) {
                Ordering::Greater => t += 1,
                Ordering::Less => {}
                Ordering::Equal => return Err(CutError::ArcIsGamma(s.algebra().format_string(&alpha.fwd.string))),
            }
        }
        Ok(self.piece_offset[arc] + t)
    }

    /// The arc `alpha` seen on the cut surface.
    pub fn induced_arc(&self, alpha: &ZigzagArc) -> Result<ZigzagArc, CutError> {
        let s = &self.source;
        let alg = s.algebra();
        let name = || alg.format_string(&alpha.string);
        if alg.canonical(&alpha.string) == alg.canonical(&self.gamma.string) {
            return Err(CutError::ArcIsGamma(name()));
        }
        if interior_crossing_count(s, alpha, &self.gamma) > 0 {
            return Err(CutError::ArcCrossesCut(name()));
        }
        let strands = Strands::new(s, alpha);
        let mut merged: Vec<(SideRef, SideRef, usize)> = Vec::new();
        let mut open: Option<SideRef> = None;
        let mut pending: Option<usize> = None;
        for i in 0..alpha.len() {
            let piece = self.piece_of(&strands, i)?;
            let from_fwd = alpha.from_sides[i] == s.sides(alpha.crossings[i])[0];
            let from = self.side_loc[&(piece, from_fwd)];
            let to = self.side_loc[&(piece, !from_fwd)];
            match (from, pending.take()) {
                (Loc::Kept(side), None) if open.is_none() => open = Some(side),
                (Loc::Collapsed(f), Some(g)) if f == g => {}
                _ => return Err(CutError::Internal(format!("arc {} loses track at crossing {i}", name()))),
            }
            match to {
                Loc::Kept(side) => merged.push((open.take().unwrap(), side, i)),
                Loc::Collapsed(f) => pending = Some(f),
            }
        }
        if pending.is_some() || open.is_some() {
            return Err(CutError::Internal(format!("arc {} ends inside a contracted face", name())));
        }
        let t = &self.surface;
        let mut steps = Vec::with_capacity(merged.len().saturating_sub(1));
        for w in merged.windows(2) {
            let ((_, to, i), (from, _, _)) = (w[0], w[1]);
            if to.polygon != from.polygon {
                return Err(CutError::Internal(format!("arc {} jumps between polygons", name())));
            }
            steps.push((from.edge, alpha.passages[i].turn));
        }
        for &(from, to, _) in &merged {
            if t.twin(from) != to {
                return Err(CutError::Internal(format!("arc {} crosses a split arc", name())));
            }
        }
        let data = CrossingData { first: merged[0].0, steps };
        let w = string_from_arc(t, &data)?;
        Ok(arc_from_string(t, &w)?)
    }

    /// Induced string of a string on the source surface.
    pub fn induced_string(&self, w: &StringWord) -> Result<StringWord, CutError> {
        let arc = arc_from_string(&self.source, w)?;
        let image = self.induced_arc(&arc)?;
        Ok(self.surface.algebra().canonical(&image.string))
    }

    /// Canonical strings up to `max_len` that avoid the cut, with their images.
    pub fn arc_map(&self, max_len: usize) -> BTreeMap<String, String> {
        let (a, b) = (self.source.algebra(), self.surface.algebra());
        let mut out = BTreeMap::new();
        for w in a.enumerate_strings(max_len) {
            if let Ok(img) = self.induced_string(&w) {
                out.insert(a.format_string(&w), b.format_string(&img));
            }
        }
        out
    }

    /// Serializable summary: the cut surface plus a `cut` stanza.
    pub fn to_json(&self, arc_map_len: usize) -> CutJson {
        let t = &self.surface;
        let fan_names = |q: usize| {
            let mut v: Vec<String> = t.fan(q).iter().map(|s| t.arc_names()[t.edge(*s).arc].clone()).collect();
            v.dedup();
            v
        };
        let src = self.source.algebra();
        let dst = t.algebra();
        CutJson {
            surface: SurfaceJson::from_surface(t),
            cut: CutStanza {
                gamma: src.format_string(&self.gamma.string),
                case: self.case.label().to_string(),
                gamma_prime: BoundaryCopy { q: self.q_prime, fan: fan_names(self.q_prime), bigon_arc: dst.format_string(&self.gamma1.string) },
                gamma_double_prime: BoundaryCopy {
                    q: self.q_double_prime,
                    fan: fan_names(self.q_double_prime),
                    bigon_arc: dst.format_string(&self.gamma2.string),
                },
                endpoint_polygons: self.endpoint_copies.clone(),
                pieces: (0..self.source.rank())
                    .map(|a| {
                        (self.source.arc_names()[a].clone(), self.piece_arcs(a).iter().map(|&x| t.arc_names()[x].clone()).collect())
                    })
                    .collect(),
                moved_arrows: self.moved_arrows.clone(),
                census: self.census(),
                arc_map: self.arc_map(arc_map_len),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCopy {
    /// Index of the new boundary marked point on this copy of the cut.
    pub q: usize,
    /// Arcs ending at that point, in fan order.
    pub fan: Vec<String>,
    pub bigon_arc: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutStanza {
    pub gamma: String,
    pub case: String,
    pub gamma_prime: BoundaryCopy,
    pub gamma_double_prime: BoundaryCopy,
    /// Polygons of the cut surface carrying a copy of an endpoint of the cut.
    pub endpoint_polygons: Vec<usize>,
    pub pieces: BTreeMap<String, Vec<String>>,
    pub moved_arrows: Vec<String>,
    pub census: CutCensus,
    pub arc_map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutJson {
    #[serde(flatten)]
    pub surface: SurfaceJson,
    pub cut: CutStanza,
}

/// Result of cutting along several arcs one after another.
#[derive(Debug, Clone)]
pub struct CollectionCut {
    pub source: DissectedSurface,
    pub steps: Vec<CutResult>,
    /// Bigon arcs of every cut, carried to the final surface.
    pub bigon_arcs: Vec<ZigzagArc>,
}

impl CollectionCut {
    pub fn surface(&self) -> &DissectedSurface {
        self.steps.last().map_or(&self.source, |c| &c.surface)
    }

    /// Image on the final surface of an arc avoiding every cut.
    pub fn induced_arc(&self, alpha: &ZigzagArc) -> Result<ZigzagArc, CutError> {
        let mut cur = alpha.clone();
        for step in &self.steps {
            cur = step.induced_arc(&cur)?;
        }
        Ok(cur)
    }
}

/// Cuts along a collection of pairwise non-crossing simple arcs, in order.
pub fn cut_along_collection(surface: &DissectedSurface, arcs: &[ZigzagArc]) -> Result<CollectionCut, CutError> {
    let alg = surface.algebra();
    for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i + 1..] {
            if interior_crossing_count(surface, a, b) > 0 {
                return Err(CutError::CollectionCrossing(alg.format_string(&a.string), alg.format_string(&b.string)));
            }
        }
    }
    let mut steps: Vec<CutResult> = Vec::new();
    let mut pending: Vec<ZigzagArc> = arcs.to_vec();
    let mut bigons: Vec<ZigzagArc> = Vec::new();
    while !pending.is_empty() {
        let gamma = pending.remove(0);
        let cur = steps.last().map_or(surface, |c| &c.surface);
        let cut = cut_surface(cur, &gamma)?;
        pending = pending.iter().map(|a| cut.induced_arc(a)).collect::<Result<_, _>>()?;
        bigons = bigons.iter().map(|a| cut.induced_arc(a)).collect::<Result<_, _>>()?;
        bigons.push(cut.gamma1.clone());
        bigons.push(cut.gamma2.clone());
        steps.push(cut);
    }
    Ok(CollectionCut { source: surface.clone(), steps, bigon_arcs: bigons })
}

/// Cuts along `arcs` in the given order and in `permutation` order and checks
/// that the resulting algebras agree.
pub fn cut_order_independent(
    surface: &DissectedSurface,
    arcs: &[ZigzagArc],
    permutation: &[usize],
) -> Result<bool, CutError> {
    let first = cut_along_collection(surface, arcs)?;
    let permuted: Vec<ZigzagArc> = permutation.iter().map(|&i| arcs[i].clone()).collect();
    let second = cut_along_collection(surface, &permuted)?;
    Ok(quiver_isomorphic(first.surface().algebra(), second.surface().algebra()).is_some())
}

mod transfer;
pub use transfer::{verify_cut_transfer, TransferReport};

#[cfg(test)]
mod tests;
