//! Bigraded chain complexes built from the cube, a sign assignment and a
//! chronological Frobenius system.
//!
//! Chain groups are tensor powers of the rank-2 algebra, one leg per circle
//! in the canonical order of each resolution. An edge map permutes the
//! touched legs together (braiding factors), applies μ or Δ with the
//! positioning factor λ(op degree, prefix degree), permutes back to the
//! target's canonical order and scales by ε.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde_json::json;
use thiserror::Error;

use crate::coeff::{Specialization, UnitMonomial};
use crate::cube::{CircleImage, CobKind, EdgeCobordism, ResolutionCube, SignAssignment, Vertex};
use crate::frobenius::{DotScalar, FrobeniusSystem, Lin, Word, V};
use crate::matrix::{Ring, SparseMat};
use crate::poly::LaurentPoly;

#[derive(Error, Debug)]
pub enum ComplexError {
    #[error("not a chain map: block at degree {0} does not commute")]
    NotChainMap(i64),
    #[error("entries are not Λ-valued (dotted scalars present)")]
    NotLambda,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub vertex: Vertex,
    pub word: Word,
    /// Quantum degree before the global orientation shift.
    pub q_raw: i64,
    /// Quantum degree after shifts.
    pub q: i64,
}

impl Generator {
    pub fn word_string(&self) -> String {
        self.word.iter().map(|v| v.symbol()).collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct ChainGroup {
    /// Homological degree after shifts.
    pub degree: i64,
    /// Cube weight before the shift, kept for debugging.
    pub weight: i64,
    pub gens: Vec<Generator>,
}

/// A finite chain complex with consecutive homological degrees.
#[derive(Clone, Debug)]
pub struct ChainComplex<R: Ring> {
    pub ring: String,
    pub groups: Vec<ChainGroup>,
    /// `diffs[k]` maps `groups[k]` to `groups[k+1]`.
    pub diffs: Vec<SparseMat<R>>,
}

/// Push one basis word through an edge cobordism; the result is expressed in
/// the target resolution's canonical leg order.
pub fn edge_pushforward(sys: &FrobeniusSystem, edge: &EdgeCobordism, word: &[V]) -> Lin {
    let mut lin = Lin::from_word(word.to_vec());
    let (lin, ids) = match edge.kind {
        CobKind::Merge { tail, head, .. } => {
            let p0 = tail.min(head);
            if head > tail {
                let mut p = head;
                while p > tail + 1 {
                    lin = sys.swap(&lin, p - 1);
                    p -= 1;
                }
            } else {
                let mut p = tail;
                while p > head {
                    lin = sys.swap(&lin, p - 1);
                    p -= 1;
                }
            }
            let lin = sys.apply_mu(&lin, p0);
            // Leg order after the merge: untouched circles in their original
            // order with the merged output at position p0.
            let mut rest = Vec::with_capacity(word.len() - 2);
            for (s, img) in edge.images.iter().enumerate() {
                if s == tail || s == head {
                    continue;
                }
                match img {
                    CircleImage::Same(t) => rest.push(*t),
                    _ => unreachable!(),
                }
            }
            let out = match edge.images[tail] {
                CircleImage::MergedInto(t) => t,
                _ => unreachable!(),
            };
            let mut ordered = Vec::with_capacity(word.len() - 1);
            ordered.extend_from_slice(&rest[..p0]);
            ordered.push(out);
            ordered.extend_from_slice(&rest[p0..]);
            (lin, ordered)
        }
        CobKind::Split { input, left_out, right_out } => {
            let lin = sys.apply_delta(&lin, input);
            let mut ids = Vec::with_capacity(word.len() + 1);
            for (s, img) in edge.images.iter().enumerate() {
                match img {
                    CircleImage::Same(t) => ids.push(*t),
                    CircleImage::SplitInto { .. } => {
                        debug_assert_eq!(s, input);
                        ids.push(left_out);
                        ids.push(right_out);
                    }
                    CircleImage::MergedInto(_) => unreachable!(),
                }
            }
            (lin, ids)
        }
    };
    reorder(sys, &lin, &ids)
}

/// Permute legs so that leg `i` lands at position `ids[i]`, inserting the
/// braiding factor λ(deg mᵢ, deg mⱼ) for every inversion.
fn reorder(sys: &FrobeniusSystem, lin: &Lin, ids: &[usize]) -> Lin {
    let mut out = Lin::zero();
    for (w, s) in lin.terms() {
        debug_assert_eq!(w.len(), ids.len());
        let mut factor = UnitMonomial::ONE;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if ids[i] > ids[j] {
                    factor = factor.mul(sys.lam(w[i].deg(), w[j].deg()));
                }
            }
        }
        let mut new_word = vec![V::P; w.len()];
        for (i, &v) in w.iter().enumerate() {
            new_word[ids[i]] = v;
        }
        out.add_term(new_word, s.scale_unit(factor));
    }
    out
}

/// Assemble the complex with the given global shifts; entries stay in the
/// dotted scalar ring and can be mapped afterwards.
pub fn build_master(
    cube: &ResolutionCube,
    eps: &SignAssignment,
    sys: &FrobeniusSystem,
    hom_shift: i64,
    q_shift: i64,
) -> ChainComplex<DotScalar> {
    let n = cube.n();
    let mut groups: Vec<ChainGroup> = Vec::with_capacity(n + 1);
    let mut index: Vec<HashMap<(u32, Word), usize>> = Vec::with_capacity(n + 1);
    for w in 0..=n as i64 {
        let mut gens = Vec::new();
        let mut idx = HashMap::new();
        for v in 0..1u32 << n {
            if Vertex(v).weight() as i64 != w {
                continue;
            }
            let circles = cube.resolution(Vertex(v)).circles.len();
            for word in crate::frobenius::all_words(circles) {
                let delta: i64 = word.iter().map(|x| if *x == V::P { 1 } else { -1 }).sum();
                let q_raw = delta + w;
                idx.insert((v, word.clone()), gens.len());
                gens.push(Generator { vertex: Vertex(v), word, q_raw, q: q_raw + q_shift });
            }
        }
        groups.push(ChainGroup { degree: w + hom_shift, weight: w, gens });
        index.push(idx);
    }
    let mut diffs = Vec::with_capacity(n);
    for w in 0..n {
        let mut mat = SparseMat::new(groups[w + 1].gens.len(), groups[w].gens.len());
        for (col, gen) in groups[w].gens.iter().enumerate() {
            let v = gen.vertex;
            for c in 0..n {
                if v.bit(c) {
                    continue;
                }
                let edge = cube.edge(v, c);
                let eps_img = sys
                    .hom
                    .apply_unit_mono(eps.get(v.0, c))
                    .as_lambda()
                    .and_then(|c| c.as_unit())
                    .expect("ε maps to a unit");
                let lin = edge_pushforward(sys, edge, &gen.word).scale_unit(eps_img);
                for (tword, s) in lin.terms() {
                    let row = index[w + 1][&(edge.target.0, tword.clone())];
                    mat.add_to(row, col, s.clone());
                }
            }
        }
        diffs.push(mat);
    }
    ChainComplex { ring: "dotted".into(), groups, diffs }
}

/// The generalized Khovanov complex: bracket shifted by `[-n₋]{n₊−2n₋}`.
pub fn build_complex(
    cube: &ResolutionCube,
    eps: &SignAssignment,
    sys: &FrobeniusSystem,
) -> ChainComplex<DotScalar> {
    let d = &cube.diagram;
    build_master(cube, eps, sys, -(d.n_minus as i64), d.n_plus as i64 - 2 * d.n_minus as i64)
}

/// The bracket with no orientation shifts.
pub fn build_bracket(
    cube: &ResolutionCube,
    eps: &SignAssignment,
    sys: &FrobeniusSystem,
) -> ChainComplex<DotScalar> {
    build_master(cube, eps, sys, 0, 0)
}

impl<R: Ring> ChainComplex<R> {
    pub fn min_degree(&self) -> i64 {
        self.groups.first().map_or(0, |g| g.degree)
    }

    pub fn group_at(&self, degree: i64) -> Option<&ChainGroup> {
        let min = self.min_degree();
        if degree < min {
            return None;
        }
        self.groups.get((degree - min) as usize)
    }

    /// Differential leaving the given homological degree.
    pub fn diff_at(&self, degree: i64) -> Option<&SparseMat<R>> {
        let min = self.min_degree();
        if degree < min {
            return None;
        }
        self.diffs.get((degree - min) as usize)
    }

    pub fn map_entries<S: Ring>(&self, ring: &str, f: impl Fn(&R) -> S) -> ChainComplex<S> {
        ChainComplex {
            ring: ring.into(),
            groups: self.groups.clone(),
            diffs: self.diffs.iter().map(|d| d.map(&f)).collect(),
        }
    }

    /// All nonzero entries of d∘d, reported as (source degree, row, col).
    pub fn verify_d_squared(&self) -> Vec<(i64, usize, usize)> {
        let mut bad = Vec::new();
        for k in 0..self.diffs.len().saturating_sub(1) {
            let prod = self.diffs[k + 1].compose(&self.diffs[k]);
            for (&(i, j), _) in prod.iter() {
                bad.push((self.groups[k].degree, i, j));
            }
        }
        bad
    }

    /// Every nonzero differential entry must be homogeneous of quantum
    /// degree 0 after shifts; returns offending (degree, row, col).
    pub fn verify_homogeneity(&self) -> Vec<(i64, usize, usize)> {
        let mut bad = Vec::new();
        for k in 0..self.diffs.len() {
            for (&(i, j), _) in self.diffs[k].iter() {
                if self.groups[k + 1].gens[i].q != self.groups[k].gens[j].q {
                    bad.push((self.groups[k].degree, i, j));
                }
            }
        }
        bad
    }

    /// Graded Euler characteristic `Σ_i (−1)^i Σ_gen q^{qdeg}`.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for g in &self.groups {
            let sign = if g.degree.rem_euclid(2) == 0 { 1 } else { -1 };
            for gen in &g.gens {
                out.add_term(gen.q, BigInt::from(sign));
            }
        }
        out
    }

    /// Chain ranks per bidegree (degree, q).
    pub fn rank_table(&self) -> std::collections::BTreeMap<(i64, i64), usize> {
        let mut out = std::collections::BTreeMap::new();
        for g in &self.groups {
            for gen in &g.gens {
                *out.entry((g.degree, gen.q)).or_insert(0) += 1;
            }
        }
        out
    }

    /// Drop empty groups at both ends.
    pub fn trim(&mut self) {
        while self.groups.last().is_some_and(|g| g.gens.is_empty()) {
            self.groups.pop();
            self.diffs.pop();
        }
        while self.groups.first().is_some_and(|g| g.gens.is_empty()) {
            self.groups.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
        }
    }

    /// Shift `[k]{m}`: homological degrees move by `k` (odd `k` negates the
    /// differential), quantum degrees by `m`.
    pub fn shifted(&self, k: i64, m: i64) -> ChainComplex<R> {
        let mut out = self.clone();
        for g in &mut out.groups {
            g.degree += k;
            for gen in &mut g.gens {
                gen.q += m;
            }
        }
        if k.rem_euclid(2) == 1 {
            out.diffs = out.diffs.iter().map(|d| d.negated()).collect();
        }
        out
    }

    /// Dual complex: transposed differentials, both gradings negated.
    pub fn dual(&self) -> ChainComplex<R> {
        let m = self.groups.len();
        let groups: Vec<ChainGroup> = (0..m)
            .map(|k| {
                let old = &self.groups[m - 1 - k];
                ChainGroup {
                    degree: -old.degree,
                    weight: -old.weight,
                    gens: old
                        .gens
                        .iter()
                        .map(|g| Generator {
                            vertex: g.vertex,
                            word: g.word.clone(),
                            q_raw: -g.q_raw,
                            q: -g.q,
                        })
                        .collect(),
                }
            })
            .collect();
        let diffs: Vec<SparseMat<R>> =
            (0..m.saturating_sub(1)).map(|k| self.diffs[m - 2 - k].transpose()).collect();
        ChainComplex { ring: self.ring.clone(), groups, diffs }
    }

    pub fn to_json(&self) -> serde_json::Value {
        // Width of the vertex bit strings: the homological span of a full
        // bracket equals the crossing count; never truncate a set bit.
        let mut width = self.groups.len().saturating_sub(1);
        for g in &self.groups {
            for gen in &g.gens {
                width = width.max(32 - gen.vertex.0.leading_zeros() as usize);
            }
        }
        let groups: Vec<_> = self
            .groups
            .iter()
            .map(|g| {
                json!({
                    "i": g.degree,
                    "gens": g.gens.iter().map(|x| json!({
                        "v": x.vertex.bits_string(width),
                        "word": x.word_string(),
                        "q": x.q,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        let diffs: Vec<_> = (0..self.diffs.len())
            .map(|k| {
                json!({
                    "from": self.groups[k].degree,
                    "entries": self.diffs[k]
                        .iter()
                        .map(|(&(r, c), v)| json!([r, c, v.to_string()]))
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "schema": "chrono-kh/1", "ring": self.ring, "groups": groups, "diffs": diffs })
    }
}

impl ChainComplex<DotScalar> {
    /// Entrywise specialization to integers.
    pub fn specialize(&self, spec: &Specialization) -> ChainComplex<BigInt> {
        self.map_entries(spec.name, |s| s.specialize(spec))
    }

    /// Entrywise reduction to the two-element field.
    pub fn mod2_complex(&self) -> ChainComplex<crate::matrix::F2> {
        let spec = Specialization::mod2();
        self.map_entries("mod2", |s| {
            crate::matrix::F2(s.specialize(&spec) == BigInt::from(1))
        })
    }

    /// Entrywise restriction to Λ; fails if dotted scalars are present.
    pub fn over_lambda(&self) -> Result<ChainComplex<crate::coeff::CoeffElement>, ComplexError> {
        for d in &self.diffs {
            for (_, v) in d.iter() {
                if v.as_lambda().is_none() {
                    return Err(ComplexError::NotLambda);
                }
            }
        }
        Ok(self.map_entries("lambda", |s| s.as_lambda().unwrap()))
    }
}

/// A degree-0 chain map, stored with owned source and target complexes.
pub struct ChainMap<R: Ring> {
    pub source: ChainComplex<R>,
    pub target: ChainComplex<R>,
    /// `mats[k]` maps `source.groups[k]` into the target group of the same
    /// homological degree.
    pub mats: Vec<SparseMat<R>>,
}

impl<R: Ring> ChainMap<R> {
    /// Check d_target ∘ f = f ∘ d_source degreewise.
    pub fn verify(&self) -> Result<(), ComplexError> {
        for k in 0..self.source.groups.len() {
            let deg = self.source.groups[k].degree;
            let f_k = &self.mats[k];
            let d_src = self.source.diffs.get(k);
            let tgt_k = self.target.group_at(deg).map(|_| ());
            if tgt_k.is_none() && !f_k.is_zero() {
                return Err(ComplexError::NotChainMap(deg));
            }
            // f_{k+1} ∘ d_src == d_tgt ∘ f_k
            let lhs = match (self.mats.get(k + 1), d_src) {
                (Some(f_next), Some(d)) => Some(f_next.compose(d)),
                _ => None,
            };
            let min_t = self.target.min_degree();
            let d_tgt = if deg >= min_t { self.target.diffs.get((deg - min_t) as usize) } else { None };
            let rhs = d_tgt.map(|d| d.compose(f_k));
            match (lhs, rhs) {
                (Some(a), Some(b)) => {
                    if a != b {
                        return Err(ComplexError::NotChainMap(deg));
                    }
                }
                (Some(a), None) => {
                    if !a.is_zero() {
                        return Err(ComplexError::NotChainMap(deg));
                    }
                }
                (None, Some(b)) => {
                    if !b.is_zero() {
                        return Err(ComplexError::NotChainMap(deg));
                    }
                }
                (None, None) => {}
            }
        }
        Ok(())
    }
}

/// Mapping cone: `cone(f)^i = C^{i+1} ⊕ D^i` with differential
/// `[[−d_C, 0], [f, d_D]]`.
pub fn cone<R: Ring>(f: &ChainMap<R>) -> Result<ChainComplex<R>, ComplexError> {
    f.verify()?;
    let c = &f.source;
    let d = &f.target;
    let lo = (c.min_degree() - 1).min(d.min_degree());
    let hi = (c.min_degree() + c.groups.len() as i64 - 2).max(d.min_degree() + d.groups.len() as i64 - 1);
    let empty = ChainGroup::default();
    let c_part = |i: i64| c.group_at(i + 1).unwrap_or(&empty);
    let d_part = |i: i64| d.group_at(i).unwrap_or(&empty);
    let mut groups = Vec::new();
    for i in lo..=hi {
        let mut gens = c_part(i).gens.clone();
        gens.extend(d_part(i).gens.iter().cloned());
        groups.push(ChainGroup { degree: i, weight: i, gens });
    }
    let mut diffs = Vec::new();
    for i in lo..hi {
        let (c_rows, c_cols) = (c_part(i + 1).gens.len(), c_part(i).gens.len());
        let (d_rows, d_cols) = (d_part(i + 1).gens.len(), d_part(i).gens.len());
        let mut mat = SparseMat::new(c_rows + d_rows, c_cols + d_cols);
        // −d_C block.
        if let Some(dc) = c.diff_at(i + 1) {
            if c_cols > 0 && c_rows > 0 {
                for (&(r, col), v) in dc.iter() {
                    mat.add_to(r, col, v.neg());
                }
            }
        }
        // f block: C^{i+1} → D^{i+1}.
        let min_c = c.min_degree();
        if i + 1 >= min_c {
            if let Some(fm) = f.mats.get((i + 1 - min_c) as usize) {
                for (&(r, col), v) in fm.iter() {
                    mat.add_to(c_rows + r, col, v.clone());
                }
            }
        }
        // d_D block.
        if let Some(dd) = d.diff_at(i) {
            for (&(r, col), v) in dd.iter() {
                mat.add_to(c_rows + r, c_cols + col, v.clone());
            }
        }
        diffs.push(mat);
    }
    let mut out = ChainComplex { ring: c.ring.clone(), groups, diffs };
    out.trim();
    Ok(out)
}

/// Slice the full bracket along one crossing: returns the two restricted
/// bracket complexes (the 1-side carrying its `{1}` shift) and the saddle
/// chain map `ψ_i = (−1)^i · Σ ε(ζ)·D_ζ` between them.
pub fn bracket_parts(
    cube: &ResolutionCube,
    eps: &SignAssignment,
    sys: &FrobeniusSystem,
    crossing: usize,
) -> (ChainComplex<DotScalar>, ChainComplex<DotScalar>, Vec<SparseMat<DotScalar>>) {
    let full = build_bracket(cube, eps, sys);
    // Generator indices on each side of the crossing, aligned with the full
    // weight grading.
    let keep = |bit: bool| -> Vec<Vec<usize>> {
        full.groups
            .iter()
            .map(|g| {
                g.gens
                    .iter()
                    .enumerate()
                    .filter(|(_, gen)| gen.vertex.bit(crossing) == bit)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    };
    let keep0 = keep(false);
    let keep1 = keep(true);
    let pick_gens = |keep: &[Vec<usize>], w: usize| -> Vec<Generator> {
        keep[w].iter().map(|&i| full.groups[w].gens[i].clone()).collect()
    };
    let m = full.groups.len();
    // The 0-side occupies weights 0..m-1, the 1-side weights 1..m.
    let c0 = ChainComplex {
        ring: full.ring.clone(),
        groups: (0..m - 1)
            .map(|w| ChainGroup {
                degree: w as i64,
                weight: w as i64,
                gens: pick_gens(&keep0, w),
            })
            .collect(),
        diffs: (0..m.saturating_sub(2))
            .map(|w| full.diffs[w].submatrix(&keep0[w + 1], &keep0[w]))
            .collect(),
    };
    // The 1-side already carries its {1}: weight w sits in degree w−1 and the
    // quantum labels of the full bracket are the shifted ones.
    let c1 = ChainComplex {
        ring: full.ring.clone(),
        groups: (1..m)
            .map(|w| ChainGroup {
                degree: w as i64 - 1,
                weight: w as i64,
                gens: pick_gens(&keep1, w),
            })
            .collect(),
        diffs: (1..m.saturating_sub(1))
            .map(|w| full.diffs[w].submatrix(&keep1[w + 1], &keep1[w]))
            .collect(),
    };
    // ψ_k: weight-k bit-0 generators → weight-(k+1) bit-1 generators, with
    // the (−1)^k twist that turns the anticommuting vertical bundle into an
    // honest chain map.
    let mats: Vec<SparseMat<DotScalar>> = (0..m - 1)
        .map(|k| {
            let sub = full.diffs[k].submatrix(&keep1[k + 1], &keep0[k]);
            if k % 2 == 1 {
                sub.negated()
            } else {
                sub
            }
        })
        .collect();
    (c0, c1, mats)
}
