//! Dissected marked surfaces stored as polygon complexes.
//!
//! Every coordinate arc has two endpoint slots `e0`, `e1` and two sides. A
//! polygon lists its edges clockwise; each edge is one side of an arc, walked
//! either from `e0` to `e1` (`fwd`) or backwards. A boundary polygon carries a
//! single boundary marked point in the gap between its last and first edge; a
//! puncture polygon wraps around and surrounds a puncture.

mod arcs;
mod intersect;

pub use arcs::*;
pub use intersect::*;

use crate::quiver::{GentleAlgebra, GentleError, Quiver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolygonKind {
    Boundary,
    Puncture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub arc: usize,
    pub fwd: bool,
}

impl Edge {
    /// Slot (0 or 1) of the arc at which this edge starts, walking clockwise.
    pub fn start_slot(&self) -> usize {
        if self.fwd {
            0
        } else {
            1
        }
    }
    pub fn end_slot(&self) -> usize {
        1 - self.start_slot()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub kind: PolygonKind,
    pub edges: Vec<Edge>,
    /// Optional names for the corner arrows, in corner order.
    pub arrow_names: Option<Vec<String>>,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.edges.len()
    }
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
    pub fn corner_count(&self) -> usize {
        match self.kind {
            PolygonKind::Boundary => self.edges.len().saturating_sub(1),
            PolygonKind::Puncture => self.edges.len(),
        }
    }
    /// Edge following `j` clockwise, if the polygon continues past it.
    pub fn next_edge(&self, j: usize) -> Option<usize> {
        match self.kind {
            PolygonKind::Boundary => (j + 1 < self.edges.len()).then_some(j + 1),
            PolygonKind::Puncture => Some((j + 1) % self.edges.len()),
        }
    }
    pub fn prev_edge(&self, j: usize) -> Option<usize> {
        match self.kind {
            PolygonKind::Boundary => j.checked_sub(1),
            PolygonKind::Puncture => Some((j + self.edges.len() - 1) % self.edges.len()),
        }
    }
}

/// One side of a coordinate arc: an edge position inside a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideRef {
    pub polygon: usize,
    pub edge: usize,
}

/// Raw polygon data before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceData {
    pub arcs: Vec<String>,
    pub polygons: Vec<Polygon>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("polygon {polygon} refers to unknown arc `{arc}`")]
    UnknownArc { polygon: usize, arc: String },
    #[error("duplicate arc id `{0}`")]
    DuplicateArc(String),
    #[error("a side of arc `{0}` is not used by any polygon")]
    UnusedArcSide(String),
    #[error("arc `{0}` is used by more than two polygon edges")]
    DoubleUsedArcSide(String),
    #[error("both sides of arc `{0}` run in the same direction")]
    OrientationMismatch(String),
    #[error("polygon {0} has no edges")]
    EmptyPolygon(usize),
    #[error("the surface has no boundary marked point")]
    EmptyBoundaryComponent,
    #[error("arc endpoint slots {0} glue into an interior point")]
    InteriorBulletPoint(String),
    #[error("boundary walk breaks at the point containing {0}")]
    BrokenBoundaryWalk(String),
    #[error("rank mismatch: {arcs} arcs but |M_o| - chi = {expected}")]
    RankMismatch { arcs: usize, expected: i64 },
    #[error("polygon {polygon} names {names} arrows but has {corners} corners")]
    ArrowNameCount { polygon: usize, names: usize, corners: usize },
    #[error("inconsistent topology: {0}")]
    Topology(String),
    #[error(transparent)]
    Gentle(#[from] GentleError),
}

/// Validated dissection with derived marked points, counts and algebra.
#[derive(Debug, Clone)]
pub struct DissectedSurface {
    arcs: Vec<String>,
    polygons: Vec<Polygon>,
    /// `sides[arc] = [fwd side, rev side]`.
    sides: Vec<[SideRef; 2]>,
    /// Boundary marked point (•) containing each arc slot.
    slot_point: Vec<[usize; 2]>,
    bullet_count: usize,
    boundary_components: usize,
    components: usize,
    genus: i64,
    /// Arrow index of each corner: `corner_arrow[polygon][corner]`.
    corner_arrow: Vec<Vec<usize>>,
    /// `(polygon, corner)` of each arrow.
    arrow_corner: Vec<(usize, usize)>,
    algebra: GentleAlgebra,
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    pub(crate) fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}


impl DissectedSurface {
    pub fn new(data: SurfaceData) -> Result<Self, SurfaceError> {
        let SurfaceData { arcs, polygons } = data;
        let n = arcs.len();
        let mut seen = std::collections::HashSet::new();
        for a in &arcs {
            if !seen.insert(a) {
                return Err(SurfaceError::DuplicateArc(a.clone()));
            }
        }
        let mut uses: Vec<Vec<(SideRef, bool)>> = vec![Vec::new(); n];
        for (pi, p) in polygons.iter().enumerate() {
            if p.edges.is_empty() {
                return Err(SurfaceError::EmptyPolygon(pi));
            }
            for (ei, e) in p.edges.iter().enumerate() {
                if e.arc >= n {
                    return Err(SurfaceError::UnknownArc { polygon: pi, arc: format!("#{}", e.arc) });
                }
                uses[e.arc].push((SideRef { polygon: pi, edge: ei }, e.fwd));
            }
            if let Some(names) = &p.arrow_names {
                if names.len() != p.corner_count() {
                    return Err(SurfaceError::ArrowNameCount {
                        polygon: pi,
                        names: names.len(),
                        corners: p.corner_count(),
                    });
                }
            }
        }
        let mut sides = Vec::with_capacity(n);
        for (a, u) in uses.iter().enumerate() {
            match u.len() {
                0 | 1 => return Err(SurfaceError::UnusedArcSide(arcs[a].clone())),
                2 => {}
                _ => return Err(SurfaceError::DoubleUsedArcSide(arcs[a].clone())),
            }
            if u[0].1 == u[1].1 {
                return Err(SurfaceError::OrientationMismatch(arcs[a].clone()));
            }
            let (f, r) = if u[0].1 { (u[0].0, u[1].0) } else { (u[1].0, u[0].0) };
            sides.push([f, r]);
        }
        if !polygons.iter().any(|p| p.kind == PolygonKind::Boundary) {
            return Err(SurfaceError::EmptyBoundaryComponent);
        }
        let slot = |e: &Edge, s: usize| 2 * e.arc + s;
        let mut uf = UnionFind::new(2 * n);
        for p in &polygons {
            for j in 0..p.corner_count() {
                let (x, y) = (&p.edges[j], &p.edges[(j + 1) % p.len()]);
                uf.union(slot(x, x.end_slot()), slot(y, y.start_slot()));
            }
        }
        let mut root_id = std::collections::HashMap::new();
        let mut slot_point = vec![[0usize; 2]; n];
        for a in 0..n {
            for s in 0..2 {
                let r = uf.find(2 * a + s);
                let next = root_id.len();
                slot_point[a][s] = *root_id.entry(r).or_insert(next);
            }
        }
        let bullet_count = root_id.len();
        let slot_name = |a: usize, s: usize| format!("{}.e{}", arcs[a], s);
        // every point must see exactly one gap arriving and one leaving
        let mut gap_after = vec![Vec::new(); bullet_count];
        let mut gap_before = vec![Vec::new(); bullet_count];
        for (pi, p) in polygons.iter().enumerate() {
            if p.kind != PolygonKind::Boundary {
                continue;
            }
            let last = p.edges.last().unwrap();
            let first = &p.edges[0];
            gap_after[slot_point[last.arc][last.end_slot()]].push(pi);
            gap_before[slot_point[first.arc][first.start_slot()]].push(pi);
        }
        for b in 0..bullet_count {
            let example = (0..n)
                .flat_map(|a| (0..2).map(move |s| (a, s)))
                .find(|&(a, s)| slot_point[a][s] == b)
                .map(|(a, s)| slot_name(a, s))
                .unwrap_or_default();
            match (gap_after[b].len(), gap_before[b].len()) {
                (1, 1) => {}
                (0, 0) => return Err(SurfaceError::InteriorBulletPoint(example)),
                _ => return Err(SurfaceError::BrokenBoundaryWalk(example)),
            }
        }
        // boundary components: follow gap -> point -> next gap
        let mut next_poly = vec![usize::MAX; polygons.len()];
        for b in 0..bullet_count {
            next_poly[gap_before[b][0]] = gap_after[b][0];
        }
        let mut visited = vec![false; polygons.len()];
        let mut boundary_components = 0;
        for (pi, p) in polygons.iter().enumerate() {
            if p.kind != PolygonKind::Boundary || visited[pi] {
                continue;
            }
            boundary_components += 1;
            let mut x = pi;
            while !visited[x] {
                visited[x] = true;
                x = next_poly[x];
            }
        }
        let mut pu = UnionFind::new(polygons.len());
        for s in &sides {
            pu.union(s[0].polygon, s[1].polygon);
        }
        let components = (0..polygons.len()).filter(|&p| pu.find(p) == p).count();
        let boundary_polys = polygons.iter().filter(|p| p.kind == PolygonKind::Boundary).count();
        let punctures = polygons.len() - boundary_polys;
        let chi = bullet_count as i64 - n as i64;
        let expected = boundary_polys as i64 - chi;
        if expected != n as i64 {
            return Err(SurfaceError::RankMismatch { arcs: n, expected });
        }
        let twice_genus = 2 * components as i64 - boundary_components as i64 - punctures as i64 - chi;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(SurfaceError::Topology(format!("2g = {twice_genus}")));
        }
        // algebra: one arrow per corner
        let mut arrows = Vec::new();
        let mut corner_arrow = Vec::new();
        let mut arrow_corner = Vec::new();
        for (pi, p) in polygons.iter().enumerate() {
            let mut ca = Vec::new();
            for j in 0..p.corner_count() {
                let name = match &p.arrow_names {
                    Some(names) => names[j].clone(),
                    None => format!("p{pi}c{j}"),
                };
                let (x, y) = (p.edges[j].arc, p.edges[(j + 1) % p.len()].arc);
                ca.push(arrows.len());
                arrow_corner.push((pi, j));
                arrows.push((name, arcs[x].clone(), arcs[y].clone()));
            }
            corner_arrow.push(ca);
        }
        let quiver = Quiver::new(&arcs, &arrows).map_err(GentleError::from)?;
        let mut relations = Vec::new();
        for (x, &(px, jx)) in arrow_corner.iter().enumerate() {
            let tside = polygons[px].edges[(jx + 1) % polygons[px].len()];
            for (y, &(py, jy)) in arrow_corner.iter().enumerate() {
                let sside = polygons[py].edges[jy];
                if sside.arc == tside.arc && tside.start_slot() != sside.end_slot() {
                    relations.push((x, y));
                }
            }
        }
        let algebra = GentleAlgebra::new(quiver, &relations)?;
        Ok(DissectedSurface {
            arcs,
            polygons,
            sides,
            slot_point,
            bullet_count,
            boundary_components,
            components,
            genus: twice_genus / 2,
            corner_arrow,
            arrow_corner,
            algebra,
        })
    }

    pub fn data(&self) -> SurfaceData {
        SurfaceData { arcs: self.arcs.clone(), polygons: self.polygons.clone() }
    }
    pub fn arc_names(&self) -> &[String] {
        &self.arcs
    }
    pub fn arc_index(&self, name: &str) -> Option<usize> {
        self.arcs.iter().position(|a| a == name)
    }
    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }
    pub fn polygon(&self, p: usize) -> &Polygon {
        &self.polygons[p]
    }
    pub fn rank(&self) -> usize {
        self.arcs.len()
    }
    /// `[fwd side, rev side]` of an arc.
    pub fn sides(&self, arc: usize) -> [SideRef; 2] {
        self.sides[arc]
    }
    pub fn edge(&self, s: SideRef) -> Edge {
        self.polygons[s.polygon].edges[s.edge]
    }
    /// The other side of the arc carrying `s`.
    pub fn twin(&self, s: SideRef) -> SideRef {
        let e = self.edge(s);
        let [f, r] = self.sides[e.arc];
        if f == s {
            r
        } else {
            f
        }
    }
    pub fn slot_point(&self, arc: usize, slot: usize) -> usize {
        self.slot_point[arc][slot]
    }
    pub fn bullet_count(&self) -> usize {
        self.bullet_count
    }
    pub fn circle_count(&self) -> usize {
        self.polygons.iter().filter(|p| p.kind == PolygonKind::Boundary).count()
    }
    pub fn puncture_count(&self) -> usize {
        self.polygons.len() - self.circle_count()
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.bullet_count as i64 - self.arcs.len() as i64
    }
    pub fn boundary_components(&self) -> usize {
        self.boundary_components
    }
    pub fn connected_components(&self) -> usize {
        self.components
    }
    pub fn genus(&self) -> i64 {
        self.genus
    }
    pub fn algebra(&self) -> &GentleAlgebra {
        &self.algebra
    }
    pub fn corner_arrow(&self, polygon: usize, corner: usize) -> usize {
        self.corner_arrow[polygon][corner]
    }
    pub fn arrow_corner(&self, arrow: usize) -> (usize, usize) {
        self.arrow_corner[arrow]
    }
    /// Boundary marked point at the corner between edges `j` and `j + 1`.
    pub fn corner_point(&self, polygon: usize, corner: usize) -> usize {
        let e = self.polygons[polygon].edges[corner];
        self.slot_point[e.arc][e.end_slot()]
    }

    /// The fan of a boundary marked point: the polygon sides at that point in
    /// clockwise order, starting with the first edge of the boundary polygon
    /// whose gap ends at it.
    pub fn fan(&self, point: usize) -> Vec<SideRef> {
        let start = self
            .polygons
            .iter()
            .enumerate()
            .filter(|(_, p)| p.kind == PolygonKind::Boundary)
            .find(|(_, p)| {
                let e = p.edges[0];
                self.slot_point[e.arc][e.start_slot()] == point
            })
            .map(|(pi, _)| SideRef { polygon: pi, edge: 0 })
            .expect("every point has an arriving gap");
        // turning around the point: from a side whose start is at the point,
        // cross the arc to its twin (whose end is at the point), then step to
        // the next edge of that polygon if a corner continues there.
        let mut out = vec![start];
        let mut cur = start;
        loop {
            let t = self.twin(cur);
            match self.polygons[t.polygon].next_edge(t.edge) {
                Some(nx) => {
                    cur = SideRef { polygon: t.polygon, edge: nx };
                    out.push(cur);
                }
                None => break,
            }
        }
        out
    }
}

/// Derives the algebra of a validated dissection (kept as a free function for API symmetry).
pub fn algebra_from_dissection(surface: &DissectedSurface) -> GentleAlgebra {
    surface.algebra().clone()
}

pub fn validate_surface(data: SurfaceData) -> Result<DissectedSurface, SurfaceError> {
    DissectedSurface::new(data)
}

/// Terse constructor used by tests and the corpus: polygons as
/// `(kind, [(arc, fwd)])` with arcs named.
pub fn surface_from_spec(arcs: &[&str], polys: &[(PolygonKind, &[(&str, bool)])]) -> Result<DissectedSurface, SurfaceError> {
    let arcs_v: Vec<String> = arcs.iter().map(|s| s.to_string()).collect();
    let mut polygons = Vec::new();
    for (pi, (kind, edges)) in polys.iter().enumerate() {
        let mut es = Vec::new();
        for (a, fwd) in edges.iter() {
            let arc = arcs_v
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| SurfaceError::UnknownArc { polygon: pi, arc: a.to_string() })?;
            es.push(Edge { arc, fwd: *fwd });
        }
        polygons.push(Polygon { kind: *kind, edges: es, arrow_names: None });
    }
    DissectedSurface::new(SurfaceData { arcs: arcs_v, polygons })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use PolygonKind::*;

    pub(crate) fn rank1_disk() -> DissectedSurface {
        surface_from_spec(&["l"], &[(Boundary, &[("l", true)]), (Boundary, &[("l", false)])]).unwrap()
    }

    pub(crate) fn punctured_disk() -> DissectedSurface {
        surface_from_spec(&["l"], &[(Puncture, &[("l", true)]), (Boundary, &[("l", false)])]).unwrap()
    }

    #[test]
    fn rank_one_surfaces() {
        let d = rank1_disk();
        assert_eq!((d.rank(), d.circle_count(), d.bullet_count(), d.euler_characteristic()), (1, 2, 2, 1));
        assert_eq!(d.algebra().quiver().arrow_count(), 0);
        let p = punctured_disk();
        assert_eq!((p.circle_count(), p.bullet_count(), p.puncture_count(), p.euler_characteristic()), (1, 1, 1, 0));
        assert_eq!(p.algebra().relations().len(), 1);
        assert_eq!(p.genus(), 0);
    }

    #[test]
    fn invalid_surfaces() {
        let unused = surface_from_spec(&["l", "m"], &[(Boundary, &[("l", true)]), (Boundary, &[("l", false), ("m", true)])]);
        assert!(matches!(unused, Err(SurfaceError::UnusedArcSide(_))));
        let triple = surface_from_spec(
            &["l"],
            &[(Boundary, &[("l", true)]), (Boundary, &[("l", false)]), (Boundary, &[("l", true)])],
        );
        assert!(matches!(triple, Err(SurfaceError::DoubleUsedArcSide(_))));
        let twisted = surface_from_spec(&["l"], &[(Boundary, &[("l", true)]), (Boundary, &[("l", true)])]);
        assert!(matches!(twisted, Err(SurfaceError::OrientationMismatch(_))));
        let closed = surface_from_spec(&["l"], &[(Puncture, &[("l", true)]), (Puncture, &[("l", false)])]);
        assert!(matches!(closed, Err(SurfaceError::EmptyBoundaryComponent)));
    }

    #[test]
    fn arrow_census() {
        for s in [rank1_disk(), punctured_disk()] {
            let chi = s.euler_characteristic();
            assert_eq!(s.algebra().quiver().arrow_count() as i64, s.circle_count() as i64 - 2 * chi);
            assert_eq!(s.rank() as i64, s.circle_count() as i64 - chi);
        }
    }

    #[test]
    fn fans_cover_every_side_once() {
        let s = punctured_disk();
        let mut all: Vec<SideRef> = (0..s.bullet_count()).flat_map(|b| s.fan(b)).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 2);
    }
}
