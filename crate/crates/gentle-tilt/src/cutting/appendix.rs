//! Direct construction of the cut algebra from the string of the cut, for
//! cuts that cross every coordinate arc at most once and alternate between
//! inverse and direct runs, starting with an inverse run.

use std::collections::BTreeSet;

use crate::quiver::{GentleAlgebra, GentleError, StringWord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AppendixError {
    #[error("not a string: {0}")]
    NotAString(String),
    #[error("the cut crosses arc `{0}` more than once")]
    CrossesArcTwice(String),
    #[error("pattern not covered by the direct construction: {0}")]
    PatternUnsupported(String),
    #[error("the constructed quiver is not gentle: {0}")]
    NotGentle(#[from] GentleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Kept,
    /// Arrows composing with a run at a turning vertex.
    Composing,
    /// First or last arrows of a run.
    RunEnd,
}

struct NewArrow {
    name: String,
    source: String,
    target: String,
    origin: usize,
    family: Family,
}

/// Builds the quiver with relations of the algebra obtained by cutting along
/// the arc with string `omega`.
pub fn appendix_cut_algebra(alg: &GentleAlgebra, omega: &StringWord) -> Result<GentleAlgebra, AppendixError> {
    alg.check_string(omega).map_err(|e| AppendixError::NotAString(e.to_string()))?;
    let q = alg.quiver();
    let verts = alg.string_vertices(omega);
    let mut seen = BTreeSet::new();
    for &v in &verts {
        if !seen.insert(v) {
            return Err(AppendixError::CrossesArcTwice(q.vertex_name(v).to_string()));
        }
    }
    // maximal runs, each stored as a direct path
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut turning = vec![omega.start];
    let mut prev_inverse = None;
    for (k, l) in omega.letters.iter().enumerate() {
        if prev_inverse != Some(l.inverse) {
            if prev_inverse.is_some() {
                turning.push(verts[k]);
            }
            runs.push(Vec::new());
            prev_inverse = Some(l.inverse);
        }
        runs.last_mut().unwrap().push(l.arrow);
    }
    turning.push(*verts.last().unwrap());
    let m = runs.len();
    if m < 2 || m % 2 != 0 || !omega.letters[0].inverse {
        return Err(AppendixError::PatternUnsupported(format!(
            "{m} runs starting with a {} letter; the construction needs an even number starting with an inverse one",
            if omega.letters.first().is_some_and(|l| l.inverse) { "inverse" } else { "direct" }
        )));
    }
    for (i, run) in runs.iter_mut().enumerate() {
        if i % 2 == 0 {
            run.reverse();
        }
    }
    // runs[i - 1] is u_i; turning[j] is x_j
    let u = |i: usize| &runs[i - 1];
    let x = |j: usize| turning[j];
    let removed: BTreeSet<usize> = (1..m).map(x).collect();
    let name = |v: usize| q.vertex_name(v).to_string();
    let hat = |j: usize| format!("{}^", q.vertex_name(x(j)));
    let src = |a: usize| q.arrow(a).source;
    let tgt = |a: usize| q.arrow(a).target;
    // path u followed by arrow a is non-zero, and the other way round
    let then = |run: &[usize], a: usize| tgt(*run.last().unwrap()) == src(a) && !alg.is_relation(*run.last().unwrap(), a);
    let before = |a: usize, run: &[usize]| tgt(a) == src(run[0]) && !alg.is_relation(a, run[0]);
    let plain = |v: usize| -> Result<String, AppendixError> {
        if removed.contains(&v) {
            Err(AppendixError::PatternUnsupported(format!("a moved arrow would end at the removed vertex {}", name(v))))
        } else {
            Ok(name(v))
        }
    };

    let mut vertices: Vec<String> = (0..q.vertex_count()).filter(|v| !removed.contains(v)).map(name).collect();
    vertices.extend((1..=m).map(hat));

    let mut arrows: Vec<NewArrow> = Vec::new();
    for a in 0..q.arrow_count() {
        let touches = removed.contains(&src(a)) || removed.contains(&tgt(a));
        if !touches && !then(u(1), a) && !then(u(m), a) {
            arrows.push(NewArrow {
                name: q.arrow(a).id.clone(),
                source: name(src(a)),
                target: name(tgt(a)),
                origin: a,
                family: Family::Kept,
            });
        }
    }
    let mut push = |a: usize, source: String, target: String, family: Family| {
        arrows.push(NewArrow { name: format!("{}^", q.arrow(a).id), source, target, origin: a, family });
    };
    for i in (1..m).step_by(2) {
        for a in 0..q.arrow_count() {
            if tgt(a) == x(i) && before(a, u(i + 1)) {
                push(a, plain(src(a))?, hat(i + 1), Family::Composing);
            }
            if src(a) == x(i + 1) && then(u(i + 1), a) {
                push(a, hat(i + 1), plain(tgt(a))?, Family::Composing);
            }
            if tgt(a) == x(i) && before(a, u(i)) {
                push(a, plain(src(a))?, hat(i), Family::Composing);
            }
            if src(a) == x(i - 1) && then(u(i), a) {
                push(a, hat(i), plain(tgt(a))?, Family::Composing);
            }
        }
        let b = u(i)[0];
        push(b, hat(i + 1), plain(tgt(b))?, Family::RunEnd);
        let b = u(i + 1)[0];
        push(b, hat(i), plain(tgt(b))?, Family::RunEnd);
        if i + 2 <= m {
            let b = *u(i + 1).last().unwrap();
            push(b, plain(src(b))?, hat(i + 2), Family::RunEnd);
            let b = *u(i + 2).last().unwrap();
            push(b, plain(src(b))?, hat(i + 1), Family::RunEnd);
        }
    }
    // distinct names for repeated hats
    let mut used = BTreeSet::new();
    for a in &mut arrows {
        while !used.insert(a.name.clone()) {
            a.name.push('^');
        }
    }

    let mut relations = Vec::new();
    for x_arrow in &arrows {
        for y_arrow in &arrows {
            let allowed = !matches!(
                (x_arrow.family, y_arrow.family),
                (Family::Composing, Family::Composing) | (Family::RunEnd, Family::RunEnd)
            );
            if allowed && x_arrow.target == y_arrow.source && alg.is_relation(x_arrow.origin, y_arrow.origin) {
                relations.push((x_arrow.name.as_str(), y_arrow.name.as_str()));
            }
        }
    }
    let arrow_triples: Vec<(&str, &str, &str)> =
        arrows.iter().map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str())).collect();
    let vertex_refs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    Ok(GentleAlgebra::from_names(&vertex_refs, &arrow_triples, &relations)?)
}
