//! Quivers, gentle relation sets, strings and quiver-with-relations isomorphism.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver with named vertices and arrows. Indices are positions in
/// the declaration order.
#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` refers to undeclared vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("relation refers to undeclared arrow `{0}`")]
    UnknownArrow(String),
}

impl Quiver {
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self, QuiverError> {
        let mut vertex_index = HashMap::new();
        let mut vs = Vec::new();
        for v in vertices {
            let v = v.as_ref().to_string();
            if vertex_index.insert(v.clone(), vs.len()).is_some() {
                return Err(QuiverError::DuplicateVertex(v));
            }
            vs.push(v);
        }
        let mut arrow_index = HashMap::new();
        let mut arr = Vec::new();
        for (id, s, t) in arrows {
            let id = id.as_ref().to_string();
            let look = |v: &S| {
                vertex_index.get(v.as_ref()).copied().ok_or_else(|| QuiverError::UnknownVertex {
                    arrow: id.clone(),
                    vertex: v.as_ref().to_string(),
                })
            };
            let (source, target) = (look(s)?, look(t)?);
            if arrow_index.insert(id.clone(), arr.len()).is_some() {
                return Err(QuiverError::DuplicateArrow(id));
            }
            arr.push(Arrow { id, source, target });
        }
        Ok(Quiver { vertices: vs, arrows: arr, vertex_index, arrow_index })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }
    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }
    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }
    pub fn arrow_by_id(&self, id: &str) -> Option<usize> {
        self.arrow_index.get(id).copied()
    }
    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.source == v).map(|(i, _)| i)
    }
    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.target == v).map(|(i, _)| i)
    }
}

/// Which clause of the gentleness definition failed, and where.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GentleError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("clause (1): vertex `{vertex}` has {direction}-degree {degree} > 2")]
    DegreeViolation { vertex: String, direction: &'static str, degree: usize },
    #[error("clause (2): arrow `{arrow}` {detail}")]
    FanningViolation { arrow: String, detail: String },
    #[error("clause (3): {0}")]
    NonQuadraticRelation(String),
    #[error("infinite dimensional: relation-free oriented cycle {}", cycle.join(" "))]
    InfiniteDimensional { cycle: Vec<String> },
}

/// A path of the algebra: a start vertex and a (possibly empty) arrow sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

/// `kQ/I` for a gentle pair `(Q, I)` with its finite path basis.
#[derive(Debug, Clone)]
pub struct GentleAlgebra {
    quiver: Quiver,
    relations: BTreeSet<(usize, usize)>,
    /// Relations in the order they were given, for stable serialisation.
    relation_order: Vec<(usize, usize)>,
    paths: Vec<Path>,
    path_index: HashMap<Path, usize>,
    arrow_rank: Vec<usize>,
}

impl GentleAlgebra {
    /// Checks the gentleness axioms and computes the path basis.
    pub fn new(quiver: Quiver, relations: &[(usize, usize)]) -> Result<Self, GentleError> {
        let n_arrows = quiver.arrow_count();
        for v in 0..quiver.vertex_count() {
            for (direction, degree) in [("out", quiver.out_arrows(v).count()), ("in", quiver.in_arrows(v).count())] {
                if degree > 2 {
                    return Err(GentleError::DegreeViolation {
                        vertex: quiver.vertex_name(v).to_string(),
                        direction,
                        degree,
                    });
                }
            }
        }
        let mut rel = BTreeSet::new();
        for &(a, b) in relations {
            if a >= n_arrows || b >= n_arrows {
                return Err(QuiverError::UnknownArrow(format!("#{}", a.max(b))).into());
            }
            if quiver.arrow(a).target != quiver.arrow(b).source {
                return Err(GentleError::NonQuadraticRelation(format!(
                    "`{}` `{}` is not a path",
                    quiver.arrow(a).id,
                    quiver.arrow(b).id
                )));
            }
            rel.insert((a, b));
        }
        for a in 0..n_arrows {
            let t = quiver.arrow(a).target;
            let s = quiver.arrow(a).source;
            let id = &quiver.arrow(a).id;
            let after: Vec<usize> = quiver.out_arrows(t).collect();
            let before: Vec<usize> = quiver.in_arrows(s).collect();
            let checks = [
                (after.iter().filter(|&&b| rel.contains(&(a, b))).count(), "is followed by two relations"),
                (before.iter().filter(|&&c| rel.contains(&(c, a))).count(), "is preceded by two relations"),
                (after.iter().filter(|&&b| !rel.contains(&(a, b))).count(), "has two nonzero continuations"),
                (before.iter().filter(|&&c| !rel.contains(&(c, a))).count(), "has two nonzero predecessors"),
            ];
            for (count, detail) in checks {
                if count > 1 {
                    return Err(GentleError::FanningViolation { arrow: id.clone(), detail: detail.to_string() });
                }
            }
        }
        // Relation-free continuation is a partial function on arrows, so an
        // infinite path basis shows up as a cycle of that function.
        let next: Vec<Option<usize>> = (0..n_arrows)
            .map(|a| quiver.out_arrows(quiver.arrow(a).target).find(|&b| !rel.contains(&(a, b))))
            .collect();
        for a0 in 0..n_arrows {
            let mut seen = vec![false; n_arrows];
            let mut a = a0;
            loop {
                if seen[a] {
                    if a == a0 {
                        let mut cycle = vec![quiver.arrow(a0).id.clone()];
                        let mut b = next[a0].unwrap();
                        while b != a0 {
                            cycle.push(quiver.arrow(b).id.clone());
                            b = next[b].unwrap();
                        }
                        return Err(GentleError::InfiniteDimensional { cycle });
                    }
                    break;
                }
                seen[a] = true;
                match next[a] {
                    Some(b) => a = b,
                    None => break,
                }
            }
        }
        let cap = (n_arrows.max(1)) * quiver.vertex_count().max(1) * 64;
        let mut paths = Vec::new();
        let mut queue: VecDeque<Path> = (0..quiver.vertex_count()).map(|v| Path { start: v, arrows: vec![] }).collect();
        while let Some(p) = queue.pop_front() {
            if paths.len() >= cap {
                return Err(GentleError::InfiniteDimensional { cycle: vec![] });
            }
            let end = p.arrows.last().map(|&a| quiver.arrow(a).target).unwrap_or(p.start);
            for b in quiver.out_arrows(end) {
                if let Some(&a) = p.arrows.last() {
                    if rel.contains(&(a, b)) {
                        continue;
                    }
                }
                let mut q = p.clone();
                q.arrows.push(b);
                queue.push_back(q);
            }
            paths.push(p);
        }
        paths.sort_by(|x, y| (x.start, x.arrows.len(), &x.arrows).cmp(&(y.start, y.arrows.len(), &y.arrows)));
        let path_index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut order: Vec<usize> = (0..n_arrows).collect();
        order.sort_by(|&x, &y| {
            let (ax, ay) = (quiver.arrow(x), quiver.arrow(y));
            (quiver.vertex_name(ax.source), quiver.vertex_name(ax.target), &ax.id).cmp(&(
                quiver.vertex_name(ay.source),
                quiver.vertex_name(ay.target),
                &ay.id,
            ))
        });
        let mut arrow_rank = vec![0; n_arrows];
        for (r, &a) in order.iter().enumerate() {
            arrow_rank[a] = r;
        }
        let mut relation_order = Vec::with_capacity(rel.len());
        for &r in relations {
            if !relation_order.contains(&r) {
                relation_order.push(r);
            }
        }
        Ok(GentleAlgebra { quiver, relations: rel, relation_order, paths, path_index, arrow_rank })
    }

    /// Convenience constructor from string ids.
    pub fn from_names<S: AsRef<str>>(
        vertices: &[S],
        arrows: &[(S, S, S)],
        relations: &[(S, S)],
    ) -> Result<Self, GentleError> {
        let q = Quiver::new(vertices, arrows)?;
        let mut rel = Vec::new();
        for (a, b) in relations {
            let look = |x: &S| q.arrow_by_id(x.as_ref()).ok_or_else(|| QuiverError::UnknownArrow(x.as_ref().to_string()));
            rel.push((look(a)?, look(b)?));
        }
        GentleAlgebra::new(q, &rel)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn rank(&self) -> usize {
        self.quiver.vertex_count()
    }
    pub fn dimension(&self) -> usize {
        self.paths.len()
    }
    pub fn relations(&self) -> &BTreeSet<(usize, usize)> {
        &self.relations
    }
    /// The relations in input order.
    pub fn relations_in_order(&self) -> &[(usize, usize)] {
        &self.relation_order
    }
    pub fn is_relation(&self, a: usize, b: usize) -> bool {
        self.relations.contains(&(a, b))
    }
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }
    pub fn path_id(&self, p: &Path) -> Option<usize> {
        self.path_index.get(p).copied()
    }
    pub fn path_end(&self, p: &Path) -> usize {
        p.arrows.last().map(|&a| self.quiver.arrow(a).target).unwrap_or(p.start)
    }
    pub fn paths_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.paths.iter().enumerate().filter(move |(_, p)| p.start == v).map(|(i, _)| i)
    }
    /// `p * a` when it is a nonzero path.
    pub fn extend_path(&self, p: &Path, a: usize) -> Option<Path> {
        if self.path_end(p) != self.quiver.arrow(a).source {
            return None;
        }
        if let Some(&last) = p.arrows.last() {
            if self.is_relation(last, a) {
                return None;
            }
        }
        let mut q = p.clone();
        q.arrows.push(a);
        Some(q)
    }
    pub fn arrow_rank(&self, a: usize) -> usize {
        self.arrow_rank[a]
    }
    pub fn arrow_name(&self, a: usize) -> &str {
        &self.quiver.arrow(a).id
    }
    pub fn vertex_name(&self, v: usize) -> &str {
        self.quiver.vertex_name(v)
    }

    // ----- strings -----

    pub fn letter_source(&self, l: Letter) -> usize {
        let a = self.quiver.arrow(l.arrow);
        if l.inverse {
            a.target
        } else {
            a.source
        }
    }
    pub fn letter_target(&self, l: Letter) -> usize {
        let a = self.quiver.arrow(l.arrow);
        if l.inverse {
            a.source
        } else {
            a.target
        }
    }

    /// Whether `next` may follow `prev` in a string.
    pub fn letters_compose(&self, prev: Letter, next: Letter) -> bool {
        if self.letter_target(prev) != self.letter_source(next) {
            return false;
        }
        if prev.arrow == next.arrow && prev.inverse != next.inverse {
            return false;
        }
        match (prev.inverse, next.inverse) {
            (false, false) => !self.is_relation(prev.arrow, next.arrow),
            (true, true) => !self.is_relation(next.arrow, prev.arrow),
            _ => true,
        }
    }

    pub fn check_string(&self, w: &StringWord) -> Result<(), StringError> {
        if w.start >= self.rank() {
            return Err(StringError::NotAString("unknown anchor vertex".into()));
        }
        if let Some(&first) = w.letters.first() {
            if first.arrow >= self.quiver.arrow_count() {
                return Err(StringError::NotAString("unknown arrow".into()));
            }
            if self.letter_source(first) != w.start {
                return Err(StringError::NotAString("anchor does not match first letter".into()));
            }
        }
        for pair in w.letters.windows(2) {
            if pair[1].arrow >= self.quiver.arrow_count() {
                return Err(StringError::NotAString("unknown arrow".into()));
            }
            if !self.letters_compose(pair[0], pair[1]) {
                return Err(StringError::NotAString(format!(
                    "`{}` cannot follow `{}`",
                    self.format_letter(pair[1]),
                    self.format_letter(pair[0])
                )));
            }
        }
        Ok(())
    }

    pub fn string_end(&self, w: &StringWord) -> usize {
        w.letters.last().map(|&l| self.letter_target(l)).unwrap_or(w.start)
    }

    /// Vertex sequence visited by the walk (length = letters + 1).
    pub fn string_vertices(&self, w: &StringWord) -> Vec<usize> {
        let mut v = vec![w.start];
        v.extend(w.letters.iter().map(|&l| self.letter_target(l)));
        v
    }

    pub fn inverse(&self, w: &StringWord) -> StringWord {
        StringWord {
            start: self.string_end(w),
            letters: w.letters.iter().rev().map(|l| Letter { arrow: l.arrow, inverse: !l.inverse }).collect(),
        }
    }

    fn word_key(&self, w: &StringWord) -> Vec<(usize, bool)> {
        w.letters.iter().map(|l| (self.arrow_rank[l.arrow], l.inverse)).collect()
    }

    /// Total order used for canonical forms and sorted outputs.
    pub fn compare_strings(&self, x: &StringWord, y: &StringWord) -> Ordering {
        x.letters
            .len()
            .cmp(&y.letters.len())
            .then_with(|| self.word_key(x).cmp(&self.word_key(y)))
            .then_with(|| self.vertex_name(x.start).cmp(self.vertex_name(y.start)))
    }

    pub fn canonical(&self, w: &StringWord) -> StringWord {
        if w.letters.is_empty() {
            return w.clone();
        }
        let inv = self.inverse(w);
        if self.word_key(&inv) < self.word_key(w) {
            inv
        } else {
            w.clone()
        }
    }

    pub fn is_canonical(&self, w: &StringWord) -> bool {
        w.letters.is_empty() || self.word_key(w) <= self.word_key(&self.inverse(w))
    }

    pub fn format_letter(&self, l: Letter) -> String {
        if l.inverse {
            format!("{}^-1", self.arrow_name(l.arrow))
        } else {
            self.arrow_name(l.arrow).to_string()
        }
    }

    pub fn format_string(&self, w: &StringWord) -> String {
        if w.letters.is_empty() {
            format!("1_{}", self.vertex_name(w.start))
        } else {
            w.letters.iter().map(|&l| self.format_letter(l)).collect::<Vec<_>>().join(" ")
        }
    }

    /// Parses `1_v` or whitespace-separated letters `a`, `b^-1` (also `b⁻¹`, `b-`).
    pub fn parse_string(&self, s: &str) -> Result<StringWord, StringError> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix("1_").or_else(|| s.strip_prefix("e_")) {
            let v = self.quiver.vertex(v).ok_or_else(|| StringError::Parse(format!("unknown vertex `{v}`")))?;
            return Ok(StringWord::trivial(v));
        }
        let mut letters = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '·' || c == '*').filter(|t| !t.is_empty()) {
            let (name, inverse) = if let Some(n) = tok.strip_suffix("^-1").or_else(|| tok.strip_suffix("⁻¹")) {
                (n, true)
            } else if let Some(n) = tok.strip_suffix('-') {
                (n, true)
            } else {
                (tok, false)
            };
            let arrow = self.quiver.arrow_by_id(name).ok_or_else(|| StringError::Parse(format!("unknown arrow `{name}`")))?;
            letters.push(Letter { arrow, inverse });
        }
        if letters.is_empty() {
            return Err(StringError::Parse("empty string".into()));
        }
        let w = StringWord { start: self.letter_source(letters[0]), letters };
        self.check_string(&w)?;
        Ok(w)
    }

    /// Letters that may extend a walk ending at `end` whose last letter is `last`.
    pub fn extensions(&self, end: usize, last: Option<Letter>) -> Vec<Letter> {
        let mut out = Vec::new();
        for a in self.quiver.out_arrows(end) {
            out.push(Letter { arrow: a, inverse: false });
        }
        for a in self.quiver.in_arrows(end) {
            out.push(Letter { arrow: a, inverse: true });
        }
        if let Some(p) = last {
            out.retain(|&l| self.letters_compose(p, l));
        }
        out
    }

    /// All strings of length ≤ `max_length`, one canonical representative per
    /// inverse class, sorted by `compare_strings`.
    pub fn enumerate_strings(&self, max_length: usize) -> Vec<StringWord> {
        let mut out = Vec::new();
        for v in 0..self.rank() {
            out.push(StringWord::trivial(v));
            let mut stack: Vec<StringWord> = Vec::new();
            if max_length > 0 {
                for l in self.extensions(v, None) {
                    stack.push(StringWord { start: v, letters: vec![l] });
                }
            }
            while let Some(w) = stack.pop() {
                if w.letters.len() < max_length {
                    let end = self.string_end(&w);
                    for l in self.extensions(end, w.letters.last().copied()) {
                        let mut x = w.clone();
                        x.letters.push(l);
                        stack.push(x);
                    }
                }
                if self.is_canonical(&w) {
                    out.push(w);
                }
            }
        }
        out.sort_by(|x, y| self.compare_strings(x, y));
        out
    }

    pub fn dimension_vector(&self, w: &StringWord) -> Vec<usize> {
        let mut d = vec![0; self.rank()];
        for v in self.string_vertices(w) {
            d[v] += 1;
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn direct(arrow: usize) -> Self {
        Letter { arrow, inverse: false }
    }
    pub fn inv(arrow: usize) -> Self {
        Letter { arrow, inverse: true }
    }
}

/// A walk in the quiver; the anchor `start` matters only for trivial strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringWord {
    pub start: usize,
    pub letters: Vec<Letter>,
}

impl StringWord {
    pub fn trivial(v: usize) -> Self {
        StringWord { start: v, letters: vec![] }
    }
    pub fn len(&self) -> usize {
        self.letters.len()
    }
    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StringError {
    #[error("not a string: {0}")]
    NotAString(String),
    #[error("cannot parse string: {0}")]
    Parse(String),
}

/// A structure-preserving bijection between two algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl fmt::Display for Isomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices {:?}, arrows {:?}", self.vertex_map, self.arrow_map)
    }
}

fn vertex_signature(alg: &GentleAlgebra, v: usize) -> (usize, usize, usize, usize, usize) {
    let q = alg.quiver();
    let loops = q.out_arrows(v).filter(|&a| q.arrow(a).target == v).count();
    let through = alg.relations().iter().filter(|&&(a, _)| q.arrow(a).target == v).count();
    let paths = alg.paths_from(v).count();
    (q.in_arrows(v).count(), q.out_arrows(v).count(), loops, through, paths)
}

struct IsoSearch<'a> {
    a: &'a GentleAlgebra,
    b: &'a GentleAlgebra,
    order: Vec<usize>,
    sig_a: Vec<(usize, usize, usize, usize, usize)>,
    sig_b: Vec<(usize, usize, usize, usize, usize)>,
    vmap: Vec<Option<usize>>,
    vused: Vec<bool>,
    amap: Vec<Option<usize>>,
    aused: Vec<bool>,
}

impl IsoSearch<'_> {
    fn bind_vertex(&mut self, u: usize, w: usize, bound: &mut Vec<usize>) -> bool {
        match self.vmap[u] {
            Some(x) => x == w,
            None => {
                if self.vused[w] || self.sig_a[u] != self.sig_b[w] {
                    return false;
                }
                self.vmap[u] = Some(w);
                self.vused[w] = true;
                bound.push(u);
                true
            }
        }
    }

    fn relations_consistent(&self, x: usize) -> bool {
        let qa = self.a.quiver();
        let y = self.amap[x].unwrap();
        for other in 0..qa.arrow_count() {
            let Some(oy) = self.amap[other] else { continue };
            if qa.arrow(x).target == qa.arrow(other).source && self.a.is_relation(x, other) != self.b.is_relation(y, oy) {
                return false;
            }
            if qa.arrow(other).target == qa.arrow(x).source && self.a.is_relation(other, x) != self.b.is_relation(oy, y) {
                return false;
            }
        }
        true
    }

    fn search(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let x = self.order[depth];
        let (s, t) = (self.a.quiver().arrow(x).source, self.a.quiver().arrow(x).target);
        for y in 0..self.b.quiver().arrow_count() {
            if self.aused[y] {
                continue;
            }
            let (bs, bt) = (self.b.quiver().arrow(y).source, self.b.quiver().arrow(y).target);
            if (s == t) != (bs == bt) {
                continue;
            }
            let mut bound = Vec::new();
            let ok = self.bind_vertex(s, bs, &mut bound) && self.bind_vertex(t, bt, &mut bound);
            if ok {
                self.amap[x] = Some(y);
                self.aused[y] = true;
                if self.relations_consistent(x) && self.search(depth + 1) {
                    return true;
                }
                self.amap[x] = None;
                self.aused[y] = false;
            }
            for u in bound {
                let w = self.vmap[u].take().unwrap();
                self.vused[w] = false;
            }
        }
        false
    }
}

/// Searches for a bijection of vertices and arrows preserving incidence and
/// relations. Deterministic: arrows are matched in breadth-first order.
pub fn quiver_isomorphic(a: &GentleAlgebra, b: &GentleAlgebra) -> Option<Isomorphism> {
    let (qa, qb) = (a.quiver(), b.quiver());
    if qa.vertex_count() != qb.vertex_count()
        || qa.arrow_count() != qb.arrow_count()
        || a.relations().len() != b.relations().len()
    {
        return None;
    }
    let sig_a: Vec<_> = (0..qa.vertex_count()).map(|v| vertex_signature(a, v)).collect();
    let sig_b: Vec<_> = (0..qb.vertex_count()).map(|v| vertex_signature(b, v)).collect();
    let (mut sa, mut sb) = (sig_a.clone(), sig_b.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let mut order = Vec::new();
    let mut placed = vec![false; qa.arrow_count()];
    for root in 0..qa.arrow_count() {
        if placed[root] {
            continue;
        }
        let mut queue = VecDeque::from([root]);
        placed[root] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let ends = [qa.arrow(x).source, qa.arrow(x).target];
            for y in 0..qa.arrow_count() {
                let touches = ends.contains(&qa.arrow(y).source) || ends.contains(&qa.arrow(y).target);
                if !placed[y] && touches {
                    placed[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let mut st = IsoSearch {
        a,
        b,
        order,
        sig_a,
        sig_b,
        vmap: vec![None; qa.vertex_count()],
        vused: vec![false; qb.vertex_count()],
        amap: vec![None; qa.arrow_count()],
        aused: vec![false; qb.arrow_count()],
    };
    if !st.search(0) {
        return None;
    }
    // Remaining vertices are isolated on both sides.
    let mut free_b = (0..qb.vertex_count()).filter(|&w| !st.vused[w]);
    let mut vertex_map = Vec::with_capacity(qa.vertex_count());
    for u in 0..qa.vertex_count() {
        match st.vmap[u] {
            Some(w) => vertex_map.push(w),
            None => vertex_map.push(free_b.next()?),
        }
    }
    Some(Isomorphism { vertex_map, arrow_map: st.amap.into_iter().map(|x| x.unwrap()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn a3(names: [&str; 3]) -> GentleAlgebra {
        let [x, y, z] = names;
        GentleAlgebra::from_names(
            &[x, y, z],
            &[("a", x, y), ("b", x, y), ("c", y, z), ("d", z, x)],
            &[("a", "c"), ("c", "d"), ("d", "b")],
        )
        .unwrap()
    }

    fn linear() -> GentleAlgebra {
        GentleAlgebra::from_names(&["1", "2"], &[("a", "1", "2")], &[]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let k = GentleAlgebra::from_names::<&str>(&["v"], &[], &[]).unwrap();
        assert_eq!(k.dimension(), 1);
        let three_loops = GentleAlgebra::from_names(
            &["v"],
            &[("x", "v", "v"), ("y", "v", "v"), ("z", "v", "v")],
            &[],
        );
        assert!(matches!(three_loops, Err(GentleError::DegreeViolation { .. })));
        let a = a3(["1", "2", "3"]);
        // paths: 3 trivial, 4 arrows, da, bc
        assert_eq!(a.dimension(), 9);
    }

    #[test]
    fn fanning_and_cycles_are_rejected() {
        let fan = GentleAlgebra::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "2", "3")], &[]);
        assert!(matches!(fan, Err(GentleError::FanningViolation { .. })));
        let cyc = GentleAlgebra::from_names(&["1"], &[("e", "1", "1")], &[]);
        assert!(matches!(cyc, Err(GentleError::InfiniteDimensional { .. })));
        let bad = GentleAlgebra::from_names(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")], &[("a", "b")]);
        assert!(matches!(bad, Err(GentleError::NonQuadraticRelation(_))));
    }

    #[test]
    fn enumeration_examples() {
        let l = linear();
        let s: Vec<String> = l.enumerate_strings(1).iter().map(|w| l.format_string(w)).collect();
        assert_eq!(s, vec!["1_1", "1_2", "a"]);
        assert_eq!(a3(["1", "2", "3"]).enumerate_strings(0).len(), 3);
    }

    fn brute_force_count(alg: &GentleAlgebra, max_len: usize) -> usize {
        // every sequence of letters, validated afterwards, counted up to inversion
        let letters: Vec<Letter> =
            (0..alg.quiver().arrow_count()).flat_map(|a| [Letter::direct(a), Letter::inv(a)]).collect();
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        let mut classes = std::collections::BTreeSet::new();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &words {
                for &l in &letters {
                    let mut x = w.clone();
                    x.push(l);
                    let sw = StringWord { start: alg.letter_source(x[0]), letters: x.clone() };
                    if alg.check_string(&sw).is_ok() {
                        classes.insert(alg.canonical(&sw));
                    }
                    next.push(x);
                }
            }
            words = next;
        }
        classes.len() + alg.rank()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let a = a3(["1", "2", "3"]);
        for len in 0..=3 {
            assert_eq!(a.enumerate_strings(len).len(), brute_force_count(&a, len));
        }
    }

    #[test]
    fn parse_and_format_round_trip() {
        let a = a3(["1", "2", "3"]);
        let w = a.parse_string("a d^-1").unwrap_err();
        assert!(matches!(w, StringError::NotAString(_)));
        let w = a.parse_string("b^-1 a").unwrap();
        assert_eq!(a.format_string(&w), "b^-1 a");
        assert_eq!(a.parse_string("1_2").unwrap(), StringWord::trivial(1));
    }

    #[test]
    fn isomorphism_examples() {
        let a = a3(["1", "2", "3"]);
        let iso = quiver_isomorphic(&a, &a).unwrap();
        assert_eq!(iso.vertex_map, vec![0, 1, 2]);
        // relabel 1↦3, 2↦1, 3↦2: declare vertices in a different order
        let b = a3(["3", "1", "2"]);
        assert!(quiver_isomorphic(&a, &b).is_some());
        let other = GentleAlgebra::from_names(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3"), ("d", "3", "1")],
            &[("b", "c"), ("c", "d"), ("d", "b")],
        )
        .unwrap();
        assert!(quiver_isomorphic(&a, &other).is_none());
    }

    proptest! {
        #[test]
        fn canonical_is_inverse_invariant(len in 0usize..6) {
            let a = a3(["1", "2", "3"]);
            for w in a.enumerate_strings(len) {
                prop_assert_eq!(a.canonical(&w), a.canonical(&a.inverse(&w)));
                prop_assert_eq!(a.canonical(&w), w.clone());
            }
            prop_assert!(a.enumerate_strings(len).len() <= a.enumerate_strings(len + 1).len());
        }
    }
}
