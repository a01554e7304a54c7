use gentle_tilt_web::api;
use serde_json::Value;

fn parse(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn corpus_surfaces_load() {
    let ids = parse(&api::corpus_ids());
    assert!(ids.as_array().unwrap().iter().any(|v| v == "fig2"));
    let s = api::corpus_surface("fig2").unwrap();
    let alg = parse(&api::algebra_of_surface(&s).unwrap());
    assert_eq!(alg["vertices"].as_array().unwrap().len(), 6);
    assert!(api::corpus_surface("nonexistent").is_err());
}

#[test]
fn ext_agrees_on_a_disk() {
    let s = api::corpus_surface("rank2-disk").unwrap();
    let v = parse(&api::ext(&s, "1_1", "1_2").unwrap());
    let ext: Vec<u64> = v["ext"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect();
    let geo: Vec<u64> = v["geometric"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect();
    assert_eq!(&ext[..geo.len()], &geo[..]);
    assert!(api::ext(&s, "nope", "1_2").is_err());
}

#[test]
fn cut_returns_surface_and_stanza() {
    let s = api::corpus_surface("fig2").unwrap();
    let entry: Value = serde_json::from_str(&gentle_tilt::corpus::entry_text("fig2").unwrap()).unwrap();
    let gamma = entry["arcs"]["gamma"].as_str().unwrap();
    let v = parse(&api::cut(&s, gamma).unwrap());
    assert!(v["polygons"].is_array());
    assert_eq!(v["cut"]["case"], "I");
    assert!(api::emit_dot(&s).unwrap().starts_with("digraph"));
}

#[test]
fn malformed_surface_is_an_error() {
    assert!(api::algebra_of_surface("{").is_err());
    assert!(api::cut("{\"arcs\":[],\"polygons\":[]}", "x").is_err());
}
