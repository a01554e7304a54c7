//! JSON formats for algebras and surfaces.

use serde::{Deserialize, Serialize};

use crate::quiver::{GentleAlgebra, GentleError};
use crate::surface::{DissectedSurface, Edge, Polygon, PolygonKind, SurfaceData, SurfaceError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub relations: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindJson {
    Boundary,
    Puncture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirJson {
    Fwd,
    Rev,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub arc: String,
    pub dir: DirJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub kind: KindJson,
    pub edges: Vec<EdgeJson>,
    /// Optional corner arrow names, one per corner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub arcs: Vec<String>,
    pub polygons: Vec<PolygonJson>,
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Gentle(#[from] GentleError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl AlgebraJson {
    pub fn from_algebra(alg: &GentleAlgebra) -> Self {
        let q = alg.quiver();
        AlgebraJson {
            vertices: (0..q.vertex_count()).map(|v| q.vertex_name(v).to_string()).collect(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowJson {
                    id: a.id.clone(),
                    source: q.vertex_name(a.source).to_string(),
                    target: q.vertex_name(a.target).to_string(),
                })
                .collect(),
            relations: alg
                .relations_in_order()
                .iter()
                .map(|&(x, y)| [q.arrow(x).id.clone(), q.arrow(y).id.clone()])
                .collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<GentleAlgebra, GentleError> {
        let vs: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str)> =
            self.arrows.iter().map(|a| (a.id.as_str(), a.source.as_str(), a.target.as_str())).collect();
        let rels: Vec<(&str, &str)> = self.relations.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        GentleAlgebra::from_names(&vs, &arrows, &rels)
    }
}

impl SurfaceJson {
    pub fn from_data(data: &SurfaceData) -> Self {
        SurfaceJson {
            arcs: data.arcs.clone(),
            polygons: data
                .polygons
                .iter()
                .map(|p| PolygonJson {
                    kind: match p.kind {
                        PolygonKind::Boundary => KindJson::Boundary,
                        PolygonKind::Puncture => KindJson::Puncture,
                    },
                    edges: p
                        .edges
                        .iter()
                        .map(|e| EdgeJson {
                            arc: data.arcs[e.arc].clone(),
                            dir: if e.fwd { DirJson::Fwd } else { DirJson::Rev },
                        })
                        .collect(),
                    arrows: p.arrow_names.clone(),
                })
                .collect(),
        }
    }

    pub fn from_surface(s: &DissectedSurface) -> Self {
        Self::from_data(&s.data())
    }

    pub fn to_data(&self) -> Result<SurfaceData, SurfaceError> {
        let mut polygons = Vec::with_capacity(self.polygons.len());
        for (pi, p) in self.polygons.iter().enumerate() {
            let mut edges = Vec::with_capacity(p.edges.len());
            for e in &p.edges {
                let arc = self
                    .arcs
                    .iter()
                    .position(|a| *a == e.arc)
                    .ok_or_else(|| SurfaceError::UnknownArc { polygon: pi, arc: e.arc.clone() })?;
                edges.push(Edge { arc, fwd: e.dir == DirJson::Fwd });
            }
            polygons.push(Polygon {
                kind: match p.kind {
                    KindJson::Boundary => PolygonKind::Boundary,
                    KindJson::Puncture => PolygonKind::Puncture,
                },
                edges,
                arrow_names: p.arrows.clone(),
            });
        }
        Ok(SurfaceData { arcs: self.arcs.clone(), polygons })
    }

    pub fn to_surface(&self) -> Result<DissectedSurface, SurfaceError> {
        DissectedSurface::new(self.to_data()?)
    }
}

pub fn algebra_from_json(text: &str) -> Result<GentleAlgebra, IoError> {
    let j: AlgebraJson = serde_json::from_str(text)?;
    Ok(j.to_algebra()?)
}

pub fn algebra_to_json(alg: &GentleAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraJson::from_algebra(alg)).expect("serialisable")
}

pub fn surface_from_json(text: &str) -> Result<DissectedSurface, IoError> {
    let j: SurfaceJson = serde_json::from_str(text)?;
    Ok(j.to_surface()?)
}

pub fn surface_to_json(s: &DissectedSurface) -> String {
    serde_json::to_string_pretty(&SurfaceJson::from_surface(s)).expect("serialisable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const A3: &str = r#"{"vertices":["1","2","3"],
        "arrows":[{"id":"a","source":"1","target":"2"},{"id":"b","source":"1","target":"2"},
                  {"id":"c","source":"2","target":"3"},{"id":"d","source":"3","target":"1"}],
        "relations":[["a","c"],["c","d"],["d","b"]]}"#;

    #[test]
    fn algebra_round_trip() {
        let alg = algebra_from_json(A3).unwrap();
        let again: serde_json::Value = serde_json::from_str(&algebra_to_json(&alg)).unwrap();
        let orig: serde_json::Value = serde_json::from_str(A3).unwrap();
        assert_eq!(again, orig);
    }

    #[test]
    fn surface_round_trip_and_arrow_names() {
        let text = r#"{"arcs":["1","2","3"],"polygons":[
            {"kind":"boundary","edges":[{"arc":"1","dir":"fwd"},{"arc":"2","dir":"fwd"},{"arc":"3","dir":"fwd"},
                {"arc":"1","dir":"rev"},{"arc":"2","dir":"rev"}],"arrows":["a","c","d","b"]},
            {"kind":"boundary","edges":[{"arc":"3","dir":"rev"}]}]}"#;
        let s = surface_from_json(text).unwrap();
        let alg = algebra_from_json(A3).unwrap();
        assert!(crate::quiver::quiver_isomorphic(s.algebra(), &alg).is_some());
        assert_eq!(s.algebra().quiver().arrow(0).id, "a");
        let back: serde_json::Value = serde_json::from_str(&surface_to_json(&s)).unwrap();
        assert_eq!(back, serde_json::from_str::<serde_json::Value>(text).unwrap());
    }

    #[test]
    fn bad_direction_is_an_input_error() {
        let text = r#"{"arcs":["l"],"polygons":[{"kind":"boundary","edges":[{"arc":"l","dir":"sideways"}]}]}"#;
        assert!(matches!(surface_from_json(text), Err(IoError::Json(_))));
    }
}
