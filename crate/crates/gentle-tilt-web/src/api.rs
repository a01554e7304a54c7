use gentle_tilt::corpus;
use gentle_tilt::cutting::cut_along_string;
use gentle_tilt::emit::algebra_to_dot;
use gentle_tilt::io::{algebra_to_json, surface_from_json, surface_to_json};
use gentle_tilt::modules::{Oracle, ProjDim};
use gentle_tilt::surface::{arc_from_string, ext_dims_geometric, DissectedSurface};
use serde_json::json;

/// Strings longer than this are not listed in a cut's arc map.
const ARC_MAP_LEN: usize = 3;

fn surface(text: &str) -> Result<DissectedSurface, String> {
    surface_from_json(text).map_err(|e| e.to_string())
}

pub fn corpus_ids() -> String {
    json!(corpus::ids()).to_string()
}

pub fn corpus_surface(id: &str) -> Result<String, String> {
    let entry = corpus::load(id).map_err(|e| e.to_string())?;
    Ok(surface_to_json(&entry.surface().map_err(|e| e.to_string())?))
}

pub fn algebra_of_surface(text: &str) -> Result<String, String> {
    Ok(algebra_to_json(surface(text)?.algebra()))
}

pub fn ext(text: &str, x: &str, y: &str) -> Result<String, String> {
    let s = surface(text)?;
    let alg = s.algebra();
    let wx = alg.parse_string(x).map_err(|e| e.to_string())?;
    let wy = alg.parse_string(y).map_err(|e| e.to_string())?;
    let oracle = Oracle::new(alg);
    let top = match oracle.pd(&wx) {
        ProjDim::Finite(d) => d,
        _ => alg.rank() + 2,
    };
    let dims = oracle.ext(&wx, &wy, top);
    let (ax, ay) = (arc_from_string(&s, &wx).map_err(|e| e.to_string())?, arc_from_string(&s, &wy).map_err(|e| e.to_string())?);
    let geometric = if ax.has_boundary_ends() && ay.has_boundary_ends() {
        Some(ext_dims_geometric(&s, &ax, &ay).map_err(|e| e.to_string())?)
    } else {
        None
    };
    Ok(json!({ "x": alg.format_string(&wx), "y": alg.format_string(&wy), "ext": dims, "geometric": geometric }).to_string())
}

pub fn cut(text: &str, arc: &str) -> Result<String, String> {
    let s = surface(text)?;
    let w = s.algebra().parse_string(arc).map_err(|e| e.to_string())?;
    let result = cut_along_string(&s, &w).map_err(|e| e.to_string())?;
    serde_json::to_string(&result.to_json(ARC_MAP_LEN)).map_err(|e| e.to_string())
}

pub fn emit_dot(text: &str) -> Result<String, String> {
    Ok(algebra_to_dot(surface(text)?.algebra()))
}
