//! The algebraic oracle: representations, minimal projective resolutions,
//! Hom and Ext over a gentle algebra.
//!
//! Modules are right modules written as covariant representations: the map of
//! an arrow `a: s -> t` is a `dim s x dim t` matrix acting on row vectors.

use crate::linalg::{self, rat, RationalMatrix};
use crate::quiver::{GentleAlgebra, Path, StringWord};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepTag {
    String(StringWord),
    Projective(usize),
    Syzygy(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRep {
    pub dims: Vec<usize>,
    pub maps: Vec<RationalMatrix>,
    pub tag: Option<RepTag>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error(transparent)]
    NotAString(#[from] crate::quiver::StringError),
    #[error("representation does not satisfy the relation ({0}, {1})")]
    RelationViolated(String, String),
    #[error("matrix for arrow `{0}` has the wrong shape")]
    BadShape(String),
    #[error("could not split a summand off a {0}-dimensional representation")]
    Undecomposable(usize),
    #[error("resolution capped before the requested degree")]
    UndeterminedAtCap,
}

impl QuiverRep {
    pub fn zero(alg: &GentleAlgebra) -> Self {
        let q = alg.quiver();
        QuiverRep {
            dims: vec![0; q.vertex_count()],
            maps: q.arrows().iter().map(|_| RationalMatrix::zeros(0, 0)).collect(),
            tag: None,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Checks shapes and that every relation acts as zero.
    pub fn validate(&self, alg: &GentleAlgebra) -> Result<(), ModuleError> {
        let q = alg.quiver();
        for (i, a) in q.arrows().iter().enumerate() {
            let m = &self.maps[i];
            if m.rows() != self.dims[a.source] || m.cols() != self.dims[a.target] {
                return Err(ModuleError::BadShape(a.id.clone()));
            }
        }
        for &(a, b) in alg.relations() {
            if !self.maps[a].mul(&self.maps[b]).is_zero() {
                return Err(ModuleError::RelationViolated(alg.arrow_name(a).into(), alg.arrow_name(b).into()));
            }
        }
        Ok(())
    }

    /// The action of a path, as a `dim start x dim end` matrix.
    pub fn path_map(&self, alg: &GentleAlgebra, p: &Path) -> RationalMatrix {
        let mut m = RationalMatrix::identity(self.dims[p.start]);
        for &a in &p.arrows {
            m = m.mul(&self.maps[a]);
        }
        let _ = alg;
        m
    }
}

/// `M(w)`: a copy of the field at every vertex of the walk, identity maps along letters.
pub fn string_module(alg: &GentleAlgebra, w: &StringWord) -> Result<QuiverRep, ModuleError> {
    alg.check_string(w)?;
    let q = alg.quiver();
    let verts = alg.string_vertices(w);
    let mut dims = vec![0; q.vertex_count()];
    let local: Vec<usize> = verts
        .iter()
        .map(|&v| {
            dims[v] += 1;
            dims[v] - 1
        })
        .collect();
    let mut maps: Vec<RationalMatrix> =
        q.arrows().iter().map(|a| RationalMatrix::zeros(dims[a.source], dims[a.target])).collect();
    for (i, l) in w.letters.iter().enumerate() {
        let (from, to) = if l.inverse { (i + 1, i) } else { (i, i + 1) };
        maps[l.arrow].set(local[from], local[to], BigRational::one());
    }
    Ok(QuiverRep { dims, maps, tag: Some(RepTag::String(w.clone())) })
}

/// Basis elements of `P_v` at each vertex: the nonzero paths from `v`, by path id.
fn projective_basis(alg: &GentleAlgebra, v: usize) -> Vec<Vec<usize>> {
    let mut at = vec![Vec::new(); alg.rank()];
    for pid in alg.paths_from(v) {
        at[alg.path_end(&alg.paths()[pid])].push(pid);
    }
    at
}

pub fn projective(alg: &GentleAlgebra, v: usize) -> QuiverRep {
    let q = alg.quiver();
    let basis = projective_basis(alg, v);
    let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();
    let mut maps = Vec::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        let mut m = RationalMatrix::zeros(dims[a.source], dims[a.target]);
        for (i, &pid) in basis[a.source].iter().enumerate() {
            if let Some(ext) = alg.extend_path(&alg.paths()[pid], ai) {
                let j = basis[a.target].iter().position(|&x| x == alg.path_id(&ext).unwrap()).unwrap();
                m.set(i, j, BigRational::one());
            }
        }
        maps.push(m);
    }
    QuiverRep { dims, maps, tag: Some(RepTag::Projective(v)) }
}

/// The string of the indecomposable projective `P_v`: the two maximal paths
/// leaving `v`, glued at `v`.
pub fn projective_string(alg: &GentleAlgebra, v: usize) -> StringWord {
    let q = alg.quiver();
    let maximal = |first: usize| {
        let mut p = Path { start: v, arrows: vec![first] };
        loop {
            let end = alg.path_end(&p);
            let next = q.out_arrows(end).find(|&b| alg.extend_path(&p, b).is_some());
            match next {
                Some(b) => p.arrows.push(b),
                None => return p.arrows,
            }
        }
    };
    let outs: Vec<usize> = q.out_arrows(v).collect();
    let mut letters = Vec::new();
    if outs.len() == 2 {
        for &a in maximal(outs[0]).iter().rev() {
            letters.push(crate::quiver::Letter::inv(a));
        }
    }
    if let Some(&a) = outs.last() {
        letters.extend(maximal(a).into_iter().map(crate::quiver::Letter::direct));
    }
    let start = letters.first().map(|&l| alg.letter_source(l)).unwrap_or(v);
    alg.canonical(&StringWord { start, letters })
}

/// Basis of `Hom(M, N)`: each element is a family of `dim M_v x dim N_v` matrices.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<Vec<RationalMatrix>>,
}

pub fn hom_space(alg: &GentleAlgebra, m: &QuiverRep, n: &QuiverRep) -> HomSpace {
    let q = alg.quiver();
    let nv = q.vertex_count();
    let mut offset = vec![0; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + m.dims[v] * n.dims[v];
    }
    let unknowns = offset[nv];
    let var = |v: usize, i: usize, j: usize| offset[v] + i * n.dims[v] + j;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ma, na) = (&m.maps[ai], &n.maps[ai]);
        // M_a F_t - F_s N_a = 0, entry (i, j) with i in M_s, j in N_t
        for i in 0..m.dims[s] {
            for j in 0..n.dims[t] {
                let mut row = vec![BigRational::zero(); unknowns];
                let mut nonzero = false;
                for k in 0..m.dims[t] {
                    let c = ma.get(i, k);
                    if !c.is_zero() {
                        row[var(t, k, j)] += c;
                        nonzero = true;
                    }
                }
                for k in 0..n.dims[s] {
                    let c = na.get(k, j);
                    if !c.is_zero() {
                        row[var(s, i, k)] -= c;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let sys = RationalMatrix::from_rows(unknowns, rows).expect("rows have uniform width");
    let ker = linalg::kernel_basis(&sys);
    let basis = (0..ker.cols())
        .map(|c| {
            (0..nv)
                .map(|v| {
                    let mut f = RationalMatrix::zeros(m.dims[v], n.dims[v]);
                    for i in 0..m.dims[v] {
                        for j in 0..n.dims[v] {
                            f.set(i, j, ker.get(var(v, i, j), c).clone());
                        }
                    }
                    f
                })
                .collect()
        })
        .collect();
    HomSpace { dim: ker.cols(), basis }
}

/// Expresses the rows of `v` in terms of the (independent) rows of `basis`.
fn express_rows(basis: &RationalMatrix, v: &RationalMatrix) -> RationalMatrix {
    if basis.rows() == 0 {
        return RationalMatrix::zeros(v.rows(), 0);
    }
    linalg::solve(&basis.transpose(), &v.transpose()).expect("vector lies in the subspace").transpose()
}

/// The subrepresentation spanned at each vertex by the rows of `sub[v]`.
pub fn subrepresentation(alg: &GentleAlgebra, x: &QuiverRep, sub: &[RationalMatrix]) -> QuiverRep {
    let q = alg.quiver();
    let dims: Vec<usize> = sub.iter().map(|b| b.rows()).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let img = sub[a.source].mul(&x.maps[ai]);
            express_rows(&sub[a.target], &img)
        })
        .collect();
    QuiverRep { dims, maps, tag: None }
}

/// Generators of the top of `x`: per vertex, standard basis vectors completing
/// the radical to the whole space.
fn top_generators(alg: &GentleAlgebra, x: &QuiverRep) -> Vec<(usize, Vec<BigRational>)> {
    let q = alg.quiver();
    let mut gens = Vec::new();
    for v in 0..q.vertex_count() {
        let d = x.dims[v];
        if d == 0 {
            continue;
        }
        let parts: Vec<&RationalMatrix> = q.in_arrows(v).map(|a| &x.maps[a]).collect();
        let mut acc = RationalMatrix::vstack(d, &parts);
        let mut r = linalg::rank(&acc);
        for k in 0..d {
            if r == d {
                break;
            }
            let mut e = RationalMatrix::zeros(1, d);
            e.set(0, k, BigRational::one());
            let cand = RationalMatrix::vstack(d, &[&acc, &e]);
            let rk = linalg::rank(&cand);
            if rk > r {
                r = rk;
                acc = cand;
                gens.push((v, e.row(0).to_vec()));
            }
        }
    }
    gens
}

pub fn top_dims(alg: &GentleAlgebra, x: &QuiverRep) -> Vec<usize> {
    let mut t = vec![0; alg.rank()];
    for (v, _) in top_generators(alg, x) {
        t[v] += 1;
    }
    t
}

pub fn socle_dims(alg: &GentleAlgebra, x: &QuiverRep) -> Vec<usize> {
    let q = alg.quiver();
    (0..q.vertex_count())
        .map(|v| {
            let d = x.dims[v];
            let outs: Vec<usize> = q.out_arrows(v).collect();
            if outs.is_empty() || d == 0 {
                return d;
            }
            let total: usize = outs.iter().map(|&a| x.maps[a].cols()).sum();
            let mut m = RationalMatrix::zeros(d, total);
            let mut c0 = 0;
            for &a in &outs {
                for i in 0..d {
                    for j in 0..x.maps[a].cols() {
                        m.set(i, c0 + j, x.maps[a].get(i, j).clone());
                    }
                }
                c0 += x.maps[a].cols();
            }
            d - linalg::rank(&m)
        })
        .collect()
}

fn string_top_socle(alg: &GentleAlgebra, w: &StringWord) -> (Vec<usize>, Vec<usize>) {
    // position i is a peak if no letter maps into it, a deep if no letter maps out of it
    let n = w.letters.len();
    let verts = alg.string_vertices(w);
    let mut top = vec![0; alg.rank()];
    let mut soc = vec![0; alg.rank()];
    for i in 0..=n {
        let left_in = i > 0 && !w.letters[i - 1].inverse;
        let right_in = i < n && w.letters[i].inverse;
        let left_out = i > 0 && w.letters[i - 1].inverse;
        let right_out = i < n && !w.letters[i].inverse;
        if !left_in && !right_in {
            top[verts[i]] += 1;
        }
        if !left_out && !right_out {
            soc[verts[i]] += 1;
        }
    }
    (top, soc)
}

/// One step of a minimal projective resolution.
#[derive(Debug, Clone)]
pub struct Generator {
    pub vertex: usize,
}

/// Image of one generator of `P_{i+1}` in `P_i`: triples (generator of `P_i`, path id, coefficient).
pub type Combination = Vec<(usize, usize, BigRational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionStatus {
    Terminated,
    /// `Omega^first` and `Omega^repeat` have the same string decomposition.
    Periodic { first: usize, repeat: usize },
    Capped,
}

#[derive(Debug, Clone)]
pub struct Resolution {
    /// Generator vertices of `P_0, P_1, ...`.
    pub terms: Vec<Vec<usize>>,
    /// `differentials[i][g]`: image of generator `g` of `P_{i+1}` in `P_i`.
    pub differentials: Vec<Vec<Combination>>,
    pub status: ResolutionStatus,
    /// String decompositions of `Omega^1, Omega^2, ...` where computed.
    pub syzygies: Vec<Vec<StringWord>>,
}

impl Resolution {
    pub fn multiplicities(&self, alg: &GentleAlgebra, i: usize) -> Vec<usize> {
        let mut m = vec![0; alg.rank()];
        for &v in &self.terms[i] {
            m[v] += 1;
        }
        m
    }

    pub fn projective_dimension(&self) -> ProjDim {
        match self.status {
            ResolutionStatus::Terminated => ProjDim::Finite(self.terms.len() - 1),
            ResolutionStatus::Periodic { .. } => ProjDim::Infinite,
            ResolutionStatus::Capped => ProjDim::Undetermined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjDim {
    Finite(usize),
    Infinite,
    Undetermined,
}

impl std::fmt::Display for ProjDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProjDim::Finite(d) => write!(f, "{d}"),
            ProjDim::Infinite => write!(f, "infinite"),
            ProjDim::Undetermined => write!(f, "undetermined"),
        }
    }
}

/// Resolution options: how many steps to take, and whether to look for
/// repeating syzygies.
#[derive(Debug, Clone, Copy)]
pub struct ResolveOptions {
    pub cap: usize,
    pub detect_period: bool,
}

pub fn default_cap(alg: &GentleAlgebra) -> usize {
    4 * alg.rank().max(1)
}

pub fn projective_resolution(alg: &GentleAlgebra, m: &QuiverRep, cap: usize) -> Resolution {
    resolve(alg, m, ResolveOptions { cap, detect_period: true })
}

pub fn resolve(alg: &GentleAlgebra, m: &QuiverRep, opts: ResolveOptions) -> Resolution {
    let q = alg.quiver();
    let nv = q.vertex_count();
    let mut x = m.clone();
    // rows: basis of the current syzygy inside the previous projective
    let mut embedding: Option<Vec<RationalMatrix>> = None;
    let mut prev_basis: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut terms = Vec::new();
    let mut differentials = Vec::new();
    let mut syzygies: Vec<Vec<StringWord>> = Vec::new();
    let mut step = 0;
    loop {
        let gens = top_generators(alg, &x);
        if let Some(emb) = &embedding {
            let comb = gens
                .iter()
                .map(|(v, g)| {
                    let gv = RationalMatrix::from_rows(g.len(), vec![g.clone()]).unwrap().mul(&emb[*v]);
                    let mut c = Combination::new();
                    for (k, &(gen, pid)) in prev_basis[*v].iter().enumerate() {
                        let val = gv.get(0, k);
                        if !val.is_zero() {
                            c.push((gen, pid, val.clone()));
                        }
                    }
                    c
                })
                .collect();
            differentials.push(comb);
        }
        terms.push(gens.iter().map(|(v, _)| *v).collect::<Vec<_>>());
        // basis of the projective cover at each vertex: (generator, path)
        let mut basis: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for (gi, (v, _)) in gens.iter().enumerate() {
            for pid in alg.paths_from(*v) {
                basis[alg.path_end(&alg.paths()[pid])].push((gi, pid));
            }
        }
        let mut kernel = Vec::with_capacity(nv);
        let mut empty = true;
        for w in 0..nv {
            let mut pi = RationalMatrix::zeros(basis[w].len(), x.dims[w]);
            for (r, &(gi, pid)) in basis[w].iter().enumerate() {
                let (v, g) = &gens[gi];
                let row = RationalMatrix::from_rows(x.dims[*v], vec![g.clone()]).unwrap();
                let img = row.mul(&x.path_map(alg, &alg.paths()[pid]));
                for j in 0..x.dims[w] {
                    pi.set(r, j, img.get(0, j).clone());
                }
            }
            let k = linalg::left_kernel_basis(&pi);
            if k.rows() > 0 {
                empty = false;
            }
            kernel.push(k);
        }
        if empty {
            return Resolution { terms, differentials, status: ResolutionStatus::Terminated, syzygies };
        }
        // the projective cover as a representation in the (generator, path) basis
        let cover_maps: Vec<RationalMatrix> = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut mat = RationalMatrix::zeros(basis[a.source].len(), basis[a.target].len());
                for (r, &(gi, pid)) in basis[a.source].iter().enumerate() {
                    if let Some(ext) = alg.extend_path(&alg.paths()[pid], ai) {
                        let eid = alg.path_id(&ext).unwrap();
                        let c = basis[a.target].iter().position(|&b| b == (gi, eid)).unwrap();
                        mat.set(r, c, BigRational::one());
                    }
                }
                mat
            })
            .collect();
        let cover = QuiverRep { dims: basis.iter().map(|b| b.len()).collect(), maps: cover_maps, tag: None };
        let mut syz = subrepresentation(alg, &cover, &kernel);
        step += 1;
        syz.tag = Some(RepTag::Syzygy(step));
        if opts.detect_period {
            if let Ok(mut parts) = decompose(alg, &syz) {
                parts.sort_by(|a, b| alg.compare_strings(a, b));
                if let Some(first) = syzygies.iter().position(|s| *s == parts) {
                    syzygies.push(parts);
                    return Resolution {
                        terms,
                        differentials,
                        status: ResolutionStatus::Periodic { first: first + 1, repeat: step },
                        syzygies,
                    };
                }
                syzygies.push(parts);
            }
        }
        if step > opts.cap {
            return Resolution { terms, differentials, status: ResolutionStatus::Capped, syzygies };
        }
        x = syz;
        embedding = Some(kernel);
        prev_basis = basis;
    }
}

/// Splits `x` into string modules. Candidates are strings whose dimension
/// vector, top and socle fit inside those of `x`; a candidate `M(w)` is a
/// summand when a random `f: M(w) -> x`, `g: x -> M(w)` compose to an
/// automorphism, verified exactly, and then `x = im f + ker g`.
pub fn decompose(alg: &GentleAlgebra, x: &QuiverRep) -> Result<Vec<StringWord>, ModuleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e74_6c65);
    let mut rest = x.clone();
    let mut out = Vec::new();
    let mut attempts = 0;
    while rest.total_dim() > 0 {
        let top = top_dims(alg, &rest);
        let soc = socle_dims(alg, &rest);
        let mut cands = strings_fitting(alg, &rest.dims);
        cands.retain(|w| {
            let (t, s) = string_top_socle(alg, w);
            t.iter().zip(&top).all(|(a, b)| a <= b) && s.iter().zip(&soc).all(|(a, b)| a <= b)
        });
        cands.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| alg.compare_strings(a, b)));
        let mut found = None;
        for w in cands {
            let mw = string_module(alg, &w)?;
            let hf = hom_space(alg, &mw, &rest);
            if hf.dim == 0 {
                continue;
            }
            let hg = hom_space(alg, &rest, &mw);
            if hg.dim == 0 {
                continue;
            }
            let f = random_combination(&hf, &mut rng);
            let g = random_combination(&hg, &mut rng);
            let invertible = (0..alg.rank()).all(|v| f[v].mul(&g[v]).is_square_invertible());
            if invertible {
                found = Some((w, g));
                break;
            }
        }
        match found {
            Some((w, g)) => {
                let ker: Vec<RationalMatrix> = g.iter().map(linalg::left_kernel_basis).collect();
                rest = subrepresentation(alg, &rest, &ker);
                out.push(w);
            }
            None => {
                attempts += 1;
                if attempts > 3 {
                    return Err(ModuleError::Undecomposable(rest.total_dim()));
                }
            }
        }
    }
    Ok(out)
}

fn random_combination(h: &HomSpace, rng: &mut ChaCha8Rng) -> Vec<RationalMatrix> {
    let mut acc: Option<Vec<RationalMatrix>> = None;
    for b in &h.basis {
        let c = rat(rng.gen_range(-7i64..=7));
        let term: Vec<RationalMatrix> = b.iter().map(|m| m.scale(&c)).collect();
        acc = Some(match acc {
            None => term,
            Some(a) => a.iter().zip(&term).map(|(x, y)| x.add(y)).collect(),
        });
    }
    acc.expect("nonzero hom space")
}

/// Canonical strings whose dimension vector is bounded by `dims`.
pub fn strings_fitting(alg: &GentleAlgebra, dims: &[usize]) -> Vec<StringWord> {
    let mut out = Vec::new();
    let mut used = vec![0usize; dims.len()];
    fn grow(alg: &GentleAlgebra, dims: &[usize], used: &mut Vec<usize>, w: &mut StringWord, out: &mut Vec<StringWord>) {
        if alg.is_canonical(w) {
            out.push(w.clone());
        }
        let end = alg.string_end(w);
        for l in alg.extensions(end, w.letters.last().copied()) {
            let t = alg.letter_target(l);
            if used[t] < dims[t] {
                used[t] += 1;
                w.letters.push(l);
                grow(alg, dims, used, w, out);
                w.letters.pop();
                used[t] -= 1;
            }
        }
    }
    for v in 0..alg.rank() {
        if dims[v] == 0 {
            continue;
        }
        used[v] += 1;
        let mut w = StringWord::trivial(v);
        grow(alg, dims, &mut used, &mut w, &mut out);
        used[v] -= 1;
    }
    out
}

/// The cochain complex `Hom(P_., N)` in column convention.
fn ext_complex(alg: &GentleAlgebra, res: &Resolution, n: &QuiverRep, upto: usize) -> Vec<RationalMatrix> {
    let offsets = |gens: &Vec<usize>| {
        let mut o = vec![0];
        for &v in gens {
            o.push(o.last().unwrap() + n.dims[v]);
        }
        o
    };
    let mut complex = Vec::new();
    for i in 0..upto.min(res.differentials.len()) {
        let (src, dst) = (&res.terms[i], &res.terms[i + 1]);
        let (os, od) = (offsets(src), offsets(dst));
        let mut d = RationalMatrix::zeros(*od.last().unwrap(), *os.last().unwrap());
        for (g2, comb) in res.differentials[i].iter().enumerate() {
            for (g1, pid, c) in comb {
                let np = n.path_map(alg, &alg.paths()[*pid]);
                // (delta phi)_{g2} += c * phi_{g1} N(p); column form uses N(p)^T
                for r in 0..np.cols() {
                    for s in 0..np.rows() {
                        let e = np.get(s, r);
                        if e.is_zero() {
                            continue;
                        }
                        let (row, col) = (od[g2] + r, os[*g1] + s);
                        let cur = d.get(row, col) + c * e;
                        d.set(row, col, cur);
                    }
                }
            }
        }
        complex.push(d);
    }
    complex
}

/// `dim Ext^i(M, N)` for `i = 0..=max_degree`, or `None` entries past the
/// computed part of an unfinished resolution.
pub fn ext_dims_from_resolution(
    alg: &GentleAlgebra,
    res: &Resolution,
    n: &QuiverRep,
    max_degree: usize,
) -> Vec<Option<usize>> {
    let terminated = res.status == ResolutionStatus::Terminated;
    let cdim = |i: usize| -> usize { res.terms[i].iter().map(|&v| n.dims[v]).sum() };
    let complex = ext_complex(alg, res, n, max_degree + 1);
    let ranks: Vec<usize> = complex.iter().map(linalg::rank).collect();
    (0..=max_degree)
        .map(|i| {
            if i >= res.terms.len() {
                return if terminated { Some(0) } else { None };
            }
            let outgoing = if i < ranks.len() {
                ranks[i]
            } else if i + 1 >= res.terms.len() && terminated {
                0
            } else {
                return None;
            };
            let incoming = if i > 0 { ranks[i - 1] } else { 0 };
            Some(cdim(i) - outgoing - incoming)
        })
        .collect()
}

pub fn ext_dim(alg: &GentleAlgebra, m: &QuiverRep, n: &QuiverRep, i: usize, cap: usize) -> Option<usize> {
    let res = resolve(alg, m, ResolveOptions { cap: cap.max(i + 1), detect_period: false });
    ext_dims_from_resolution(alg, &res, n, i)[i]
}

pub fn proj_dimension(alg: &GentleAlgebra, m: &QuiverRep, cap: usize) -> ProjDim {
    projective_resolution(alg, m, cap).projective_dimension()
}

/// Why a family of modules fails to be pre-tilting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PretiltingWitness {
    InfiniteProjectiveDimension { index: usize },
    Undetermined { index: usize },
    Extension { from: usize, to: usize, degree: usize, dim: usize },
    Isomorphic { first: usize, second: usize },
}

/// Random-endomorphism test for `x ≅ y`; exact when it answers yes.
pub fn reps_isomorphic(alg: &GentleAlgebra, x: &QuiverRep, y: &QuiverRep) -> bool {
    if x.dims != y.dims {
        return false;
    }
    if let (Some(RepTag::String(a)), Some(RepTag::String(b))) = (&x.tag, &y.tag) {
        return alg.canonical(a) == alg.canonical(b);
    }
    let h = hom_space(alg, x, y);
    if h.dim == 0 {
        return x.total_dim() == 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let f = random_combination(&h, &mut rng);
    f.iter().all(|m| m.is_square_invertible())
}

pub fn is_pretilting_algebraic(
    alg: &GentleAlgebra,
    modules: &[QuiverRep],
    cap: usize,
) -> Result<(), PretiltingWitness> {
    for i in 0..modules.len() {
        for j in i + 1..modules.len() {
            if reps_isomorphic(alg, &modules[i], &modules[j]) {
                return Err(PretiltingWitness::Isomorphic { first: i, second: j });
            }
        }
    }
    let mut resolutions = Vec::new();
    for (i, m) in modules.iter().enumerate() {
        let r = projective_resolution(alg, m, cap);
        match r.projective_dimension() {
            ProjDim::Finite(_) => resolutions.push(r),
            ProjDim::Infinite => return Err(PretiltingWitness::InfiniteProjectiveDimension { index: i }),
            ProjDim::Undetermined => return Err(PretiltingWitness::Undetermined { index: i }),
        }
    }
    for (i, r) in resolutions.iter().enumerate() {
        let pd = r.terms.len() - 1;
        for (j, n) in modules.iter().enumerate() {
            let dims = ext_dims_from_resolution(alg, r, n, pd);
            for (deg, d) in dims.iter().enumerate().skip(1) {
                let d = d.expect("terminated resolution");
                if d > 0 {
                    return Err(PretiltingWitness::Extension { from: i, to: j, degree: deg, dim: d });
                }
            }
        }
    }
    Ok(())
}

pub fn is_tilting_algebraic(alg: &GentleAlgebra, modules: &[QuiverRep], cap: usize) -> Result<bool, PretiltingWitness> {
    is_pretilting_algebraic(alg, modules, cap)?;
    Ok(modules.len() == alg.rank())
}

/// Memoising front end for string modules: resolutions and Ext tables are
/// computed once per string and shared between threads.
pub struct Oracle<'a> {
    alg: &'a GentleAlgebra,
    cap: usize,
    modules: Mutex<HashMap<StringWord, Arc<QuiverRep>>>,
    resolutions: Mutex<HashMap<StringWord, Arc<Resolution>>>,
}

impl<'a> Oracle<'a> {
    pub fn new(alg: &'a GentleAlgebra) -> Self {
        Self::with_cap(alg, default_cap(alg))
    }

    pub fn with_cap(alg: &'a GentleAlgebra, cap: usize) -> Self {
        Oracle { alg, cap, modules: Mutex::default(), resolutions: Mutex::default() }
    }

    pub fn algebra(&self) -> &GentleAlgebra {
        self.alg
    }

    pub fn module(&self, w: &StringWord) -> Arc<QuiverRep> {
        let key = self.alg.canonical(w);
        if let Some(m) = self.modules.lock().unwrap().get(&key) {
            return m.clone();
        }
        let m = Arc::new(string_module(self.alg, &key).expect("valid string"));
        self.modules.lock().unwrap().insert(key, m.clone());
        m
    }

    pub fn resolution(&self, w: &StringWord) -> Arc<Resolution> {
        let key = self.alg.canonical(w);
        if let Some(r) = self.resolutions.lock().unwrap().get(&key) {
            return r.clone();
        }
        let r = Arc::new(projective_resolution(self.alg, &self.module(&key), self.cap));
        self.resolutions.lock().unwrap().insert(key, r.clone());
        r
    }

    pub fn pd(&self, w: &StringWord) -> ProjDim {
        self.resolution(w).projective_dimension()
    }

    /// `dim Ext^i(M(x), M(y))` for `i = 0..=max_degree` (`None` where undetermined).
    pub fn ext(&self, x: &StringWord, y: &StringWord, max_degree: usize) -> Vec<Option<usize>> {
        let res = self.resolution(x);
        if res.status != ResolutionStatus::Terminated && res.terms.len() <= max_degree + 1 {
            let longer = resolve(
                self.alg,
                &self.module(x),
                ResolveOptions { cap: max_degree + 1, detect_period: false },
            );
            return ext_dims_from_resolution(self.alg, &longer, &self.module(y), max_degree);
        }
        ext_dims_from_resolution(self.alg, &res, &self.module(y), max_degree)
    }

    /// Ext^i(M(x), M(y)) for all i ≥ 1 vanish (requires finite pd of x).
    pub fn ext_positive_vanishes(&self, x: &StringWord, y: &StringWord) -> Option<bool> {
        match self.pd(x) {
            ProjDim::Finite(0) => Some(true),
            ProjDim::Finite(d) => Some(self.ext(x, y, d).iter().skip(1).all(|e| *e == Some(0))),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear() -> GentleAlgebra {
        GentleAlgebra::from_names(&["1", "2"], &[("a", "1", "2")], &[]).unwrap()
    }

    fn one_loop() -> GentleAlgebra {
        GentleAlgebra::from_names(&["1"], &[("e", "1", "1")], &[("e", "e")]).unwrap()
    }

    fn a3() -> GentleAlgebra {
        GentleAlgebra::from_names(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3"), ("d", "3", "1")],
            &[("a", "c"), ("c", "d"), ("d", "b")],
        )
        .unwrap()
    }

    fn sm(alg: &GentleAlgebra, s: &str) -> QuiverRep {
        string_module(alg, &alg.parse_string(s).unwrap()).unwrap()
    }

    #[test]
    fn string_modules_basic() {
        let l = linear();
        let s1 = sm(&l, "1_1");
        assert_eq!(s1.dims, vec![1, 0]);
        let a = sm(&l, "a");
        assert_eq!(a.dims, vec![1, 1]);
        assert_eq!(a.maps[0], RationalMatrix::from_i64(1, 1, &[1]));
        let alg = a3();
        let d = sm(&alg, "d");
        assert_eq!(d.dims, vec![1, 0, 1]);
        assert!(hom_space(&alg, &projective(&alg, 2), &d).dim > 0);
        assert_eq!(top_dims(&alg, &d), vec![0, 0, 1]);
    }

    #[test]
    fn projectives_and_their_strings() {
        let alg = a3();
        for v in 0..3 {
            let p = projective(&alg, v);
            p.validate(&alg).unwrap();
            assert_eq!(p.total_dim(), alg.paths_from(v).count());
            let w = projective_string(&alg, v);
            assert!(reps_isomorphic(&alg, &p, &string_module(&alg, &w).unwrap()));
        }
        assert_eq!(projective(&linear(), 0).dims, vec![1, 1]);
    }

    #[test]
    fn hom_examples() {
        let l = linear();
        let (p1, s1, s2) = (projective(&l, 0), sm(&l, "1_1"), sm(&l, "1_2"));
        assert_eq!(hom_space(&l, &s1, &s1).dim, 1);
        assert_eq!(hom_space(&l, &p1, &s1).dim, 1);
        assert_eq!(hom_space(&l, &p1, &s2).dim, 0);
        assert_eq!(hom_space(&l, &s1, &p1).dim, 0);
    }

    #[test]
    fn resolutions_and_ext() {
        let l = linear();
        let s1 = sm(&l, "1_1");
        let r = projective_resolution(&l, &s1, 8);
        assert_eq!(r.status, ResolutionStatus::Terminated);
        assert_eq!(r.terms, vec![vec![0], vec![1]]);
        assert_eq!(ext_dim(&l, &s1, &sm(&l, "1_2"), 1, 8), Some(1));
        assert_eq!(ext_dim(&l, &s1, &s1, 1, 8), Some(0));
        assert_eq!(proj_dimension(&l, &projective(&l, 0), 8), ProjDim::Finite(0));
        let e = one_loop();
        let s = sm(&e, "1_1");
        let r = projective_resolution(&e, &s, 8);
        assert_eq!(r.status, ResolutionStatus::Periodic { first: 1, repeat: 2 });
        assert_eq!(proj_dimension(&e, &s, 8), ProjDim::Infinite);
    }

    #[test]
    fn tilting_examples() {
        let l = linear();
        let (p1, p2, s1) = (projective(&l, 0), projective(&l, 1), sm(&l, "1_1"));
        assert_eq!(is_tilting_algebraic(&l, &[p1.clone(), p2], 8), Ok(true));
        assert_eq!(is_tilting_algebraic(&l, &[p1.clone()], 8), Ok(false));
        assert_eq!(is_tilting_algebraic(&l, &[p1, s1], 8), Ok(true));
        let e = one_loop();
        assert!(matches!(
            is_pretilting_algebraic(&e, &[sm(&e, "1_1")], 8),
            Err(PretiltingWitness::InfiniteProjectiveDimension { .. })
        ));
    }

    #[test]
    fn decomposition_of_direct_sum() {
        let alg = a3();
        let x = sm(&alg, "b c");
        let y = sm(&alg, "1_1");
        let sum = QuiverRep {
            dims: x.dims.iter().zip(&y.dims).map(|(a, b)| a + b).collect(),
            maps: x
                .maps
                .iter()
                .zip(&y.maps)
                .map(|(a, b)| {
                    let mut m = RationalMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                    for i in 0..a.rows() {
                        for j in 0..a.cols() {
                            m.set(i, j, a.get(i, j).clone());
                        }
                    }
                    for i in 0..b.rows() {
                        for j in 0..b.cols() {
                            m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
                        }
                    }
                    m
                })
                .collect(),
            tag: None,
        };
        let mut parts = decompose(&alg, &sum).unwrap();
        parts.sort();
        let mut expect = vec![alg.parse_string("b c").unwrap(), alg.parse_string("1_1").unwrap()];
        expect.sort();
        assert_eq!(parts, expect);
    }

    #[test]
    fn euler_form_matches_cartan_data() {
        // sum (-1)^i dim Ext^i(M,N) = <dim M, dim N> computed from the projective resolution's
        // multiplicities against dim Hom(P_v, N) = dim N_v
        let alg = a3();
        let oracle = Oracle::new(&alg);
        for x in alg.enumerate_strings(3) {
            let ProjDim::Finite(pd) = oracle.pd(&x) else { continue };
            let res = oracle.resolution(&x);
            for y in alg.enumerate_strings(3) {
                let ny = oracle.module(&y);
                let ext: i64 = oracle
                    .ext(&x, &y, pd)
                    .iter()
                    .enumerate()
                    .map(|(i, d)| if i % 2 == 0 { d.unwrap() as i64 } else { -(d.unwrap() as i64) })
                    .sum();
                let form: i64 = (0..=pd)
                    .map(|i| {
                        let s: i64 = res.terms[i].iter().map(|&v| ny.dims[v] as i64).sum();
                        if i % 2 == 0 {
                            s
                        } else {
                            -s
                        }
                    })
                    .sum();
                assert_eq!(ext, form);
                assert!(oracle.ext(&x, &y, pd + 2)[pd + 1..].iter().all(|d| *d == Some(0)));
            }
        }
    }
}
