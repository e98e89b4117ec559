//! Integral homology of finite free complexes via Smith normal form, sliced
//! by quantum degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::complex::ChainComplex;
use crate::matrix::SparseMat;
use crate::poly::LaurentPoly;

/// Invariant factors d₁ | d₂ | … (positive, including the trivial 1s) and the
/// rank of the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

/// Smith normal form of an integer matrix. Unit pivots are eliminated first
/// on the sparse representation; the small residue goes through the classical
/// dense algorithm with minimal-absolute-value pivoting.
pub fn smith_normal_form(m: &SparseMat<BigInt>) -> Snf {
    // Sparse phase: rows as maps col -> value.
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    for (&(i, j), v) in m.iter() {
        rows[i].insert(j, v.clone());
    }
    let mut live_rows: Vec<bool> = vec![true; m.rows];
    let mut live_cols: Vec<bool> = vec![true; m.cols];
    let mut cols_to_rows: Vec<std::collections::BTreeSet<usize>> =
        vec![std::collections::BTreeSet::new(); m.cols];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            cols_to_rows[j].insert(i);
        }
    }
    let mut unit_rank = 0usize;
    loop {
        // Pick a ±1 pivot minimizing fill (shortest row, then column).
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..rows.len() {
            if !live_rows[i] {
                continue;
            }
            for (&j, v) in &rows[i] {
                if v.magnitude().is_one() {
                    let cost = (rows[i].len() - 1) * (cols_to_rows[j].len() - 1);
                    if best.is_none_or(|(_, _, c)| cost < c) {
                        best = Some((i, j, cost));
                    }
                    if cost == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((pi, pj, _)) = best else { break };
        let pivot_row = rows[pi].clone();
        let pivot_val = pivot_row[&pj].clone();
        let users: Vec<usize> = cols_to_rows[pj].iter().copied().filter(|&r| r != pi).collect();
        for r in users {
            if !live_rows[r] {
                continue;
            }
            let factor = &rows[r][&pj] / &pivot_val; // pivot is ±1
            for (&j, v) in &pivot_row {
                if !live_cols[j] {
                    continue;
                }
                let entry = rows[r].entry(j).or_insert_with(BigInt::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[r].remove(&j);
                    cols_to_rows[j].remove(&r);
                } else {
                    cols_to_rows[j].insert(r);
                }
            }
        }
        // Retire the pivot row and column.
        live_rows[pi] = false;
        live_cols[pj] = false;
        for &j in pivot_row.keys() {
            cols_to_rows[j].remove(&pi);
        }
        for &r in cols_to_rows[pj].clone().iter() {
            rows[r].remove(&pj);
        }
        cols_to_rows[pj].clear();
        unit_rank += 1;
    }
    // Dense residue.
    let live_col_ids: Vec<usize> = (0..m.cols).filter(|&j| live_cols[j]).collect();
    let col_pos: BTreeMap<usize, usize> =
        live_col_ids.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let mut dense: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..rows.len() {
        if !live_rows[i] || rows[i].is_empty() {
            continue;
        }
        let mut row = vec![BigInt::zero(); live_col_ids.len()];
        for (&j, v) in &rows[i] {
            row[col_pos[&j]] = v.clone();
        }
        dense.push(row);
    }
    let mut factors = vec![BigInt::one(); unit_rank];
    factors.extend(dense_snf(dense));
    let rank = factors.len();
    Snf { factors, rank }
}

/// Classical SNF on a dense matrix; returns the nontrivial diagonal.
fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut k = 0usize;
    while k < rows.min(cols) {
        // Find the minimal nonzero entry in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].magnitude() < a[pi][pj].magnitude())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        // Reduce row and column against the pivot until clean.
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = div_round(&a[i][k], &a[k][k]);
                if !q.is_zero() {
                    for j in k..cols {
                        let sub = &q * &a[k][j];
                        a[i][j] -= sub;
                    }
                }
                if !a[i][k].is_zero() {
                    // Remainder smaller than pivot: swap rows and restart.
                    a.swap(k, i);
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = div_round(&a[k][j], &a[k][k]);
                if !q.is_zero() {
                    for i in k..rows {
                        let sub = &q * &a[i][k];
                        a[i][j] -= sub;
                    }
                }
                if !a[k][j].is_zero() {
                    for i in k..rows {
                        let tmp = a[i][k].clone();
                        a[i][k] = a[i][j].clone();
                        a[i][j] = tmp;
                    }
                    dirty = true;
                }
            }
            let row_clean = (k + 1..rows).all(|i| a[i][k].is_zero());
            let col_clean = (k + 1..cols).all(|j| a[k][j].is_zero());
            if row_clean && col_clean && !dirty {
                break;
            }
        }
        // Divisibility: the pivot must divide every remaining entry.
        let mut fixed = false;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(&a[i][j] % &a[k][k]).is_zero() {
                    for jj in k..cols {
                        let add = a[i][jj].clone();
                        a[k][jj] += add;
                    }
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue;
        }
        out.push(a[k][k].abs());
        k += 1;
    }
    out
}

/// Quotient minimizing the remainder's absolute value.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a / b;
    let r = a - &q * b;
    if r.magnitude() * 2u32 > b.magnitude().clone() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Free rank and invariant-factor torsion per bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyEntry {
    pub free: usize,
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologyTable {
    pub theory: String,
    pub entries: BTreeMap<(i64, i64), HomologyEntry>,
}

impl HomologyTable {
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(i, j), e) in &self.entries {
            let sign = if i.rem_euclid(2) == 0 { 1i64 } else { -1 };
            out.add_term(j, BigInt::from(sign * e.free as i64));
        }
        out
    }

    /// Total free rank over all bidegrees.
    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|e| e.free).sum()
    }

    /// All torsion orders with multiplicity.
    pub fn all_torsion(&self) -> Vec<BigInt> {
        let mut out: Vec<BigInt> =
            self.entries.values().flat_map(|e| e.torsion.iter().cloned()).collect();
        out.sort();
        out
    }

    /// Mod-2 dimensions per bidegree via universal coefficients:
    /// dim_F₂ H^{i,j} = free^{i,j} + #2tor^{i,j} + #2tor^{i+1,j}.
    pub fn mod2_dimensions(&self) -> BTreeMap<(i64, i64), usize> {
        let two = BigInt::from(2);
        let count2 = |e: Option<&HomologyEntry>| -> usize {
            e.map_or(0, |e| e.torsion.iter().filter(|t| (*t % &two).is_zero()).count())
        };
        let mut keys: std::collections::BTreeSet<(i64, i64)> = std::collections::BTreeSet::new();
        for &(i, j) in self.entries.keys() {
            keys.insert((i, j));
            keys.insert((i - 1, j));
        }
        let mut out = BTreeMap::new();
        for (i, j) in keys {
            let dim = self.entries.get(&(i, j)).map_or(0, |e| e.free)
                + count2(self.entries.get(&(i, j)))
                + count2(self.entries.get(&(i + 1, j)));
            if dim > 0 {
                out.insert((i, j), dim);
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|(&(i, j), e)| {
                json!({
                    "i": i,
                    "j": j,
                    "free": e.free,
                    "torsion": e.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "schema": "chrono-kh/1", "theory": self.theory, "entries": entries })
    }

    /// Plain-text grid: rows are quantum degrees, columns homological ones.
    pub fn render_grid(&self) -> String {
        if self.entries.is_empty() {
            return "(trivial)\n".into();
        }
        let imin = self.entries.keys().map(|k| k.0).min().unwrap();
        let imax = self.entries.keys().map(|k| k.0).max().unwrap();
        let jmin = self.entries.keys().map(|k| k.1).min().unwrap();
        let jmax = self.entries.keys().map(|k| k.1).max().unwrap();
        let cell = |i: i64, j: i64| -> String {
            match self.entries.get(&(i, j)) {
                None => String::new(),
                Some(e) => {
                    let mut s = String::new();
                    if e.free > 0 {
                        s.push_str(&format!("Z^{}", e.free));
                    }
                    for t in &e.torsion {
                        if !s.is_empty() {
                            s.push('+');
                        }
                        s.push_str(&format!("Z/{t}"));
                    }
                    s
                }
            }
        };
        let width = 2 + (imin..=imax)
            .flat_map(|i| (jmin..=jmax).map(move |j| cell(i, j).len()))
            .max()
            .unwrap_or(2)
            .max(4);
        let mut out = String::new();
        out.push_str(&format!("{:>6} |", "q\\i"));
        for i in imin..=imax {
            out.push_str(&format!("{i:>width$}"));
        }
        out.push('\n');
        for j in (jmin..=jmax).rev() {
            if (j - jmax).rem_euclid(1) != 0 {
                continue;
            }
            let row_used = (imin..=imax).any(|i| self.entries.contains_key(&(i, j)));
            if !row_used {
                continue;
            }
            out.push_str(&format!("{j:>6} |"));
            for i in imin..=imax {
                out.push_str(&format!("{:>width$}", cell(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

/// Homology of an integral complex, sliced by quantum degree. Differentials
/// preserve q, so each slice is an independent finite complex.
pub fn homology(c: &ChainComplex<BigInt>, theory: &str) -> HomologyTable {
    let qs: std::collections::BTreeSet<i64> =
        c.groups.iter().flat_map(|g| g.gens.iter().map(|x| x.q)).collect();
    let slices: Vec<i64> = qs.into_iter().collect();
    let results: Vec<BTreeMap<(i64, i64), HomologyEntry>> = maybe_par_map(&slices, |&q| {
        let mut out = BTreeMap::new();
        // Indices with the given q per degree.
        let picks: Vec<Vec<usize>> = c
            .groups
            .iter()
            .map(|g| {
                g.gens
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.q == q)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let snfs: Vec<Snf> = (0..c.diffs.len())
            .map(|k| smith_normal_form(&c.diffs[k].submatrix(&picks[k + 1], &picks[k])))
            .collect();
        for (k, g) in c.groups.iter().enumerate() {
            let dim = picks[k].len();
            if dim == 0 {
                continue;
            }
            let rank_out = if k < snfs.len() { snfs[k].rank } else { 0 };
            let (rank_in, torsion) = if k > 0 {
                let snf = &snfs[k - 1];
                let torsion: Vec<BigInt> =
                    snf.factors.iter().filter(|f| !f.is_one()).cloned().collect();
                (snf.rank, torsion)
            } else {
                (0, Vec::new())
            };
            let free = dim - rank_out - rank_in;
            if free > 0 || !torsion.is_empty() {
                out.insert((g.degree, q), HomologyEntry { free, torsion });
            }
        }
        out
    });
    let mut entries = BTreeMap::new();
    for part in results {
        entries.extend(part);
    }
    HomologyTable { theory: theory.into(), entries }
}

/// Homology without quantum slicing, for specializations whose differential
/// is only filtered (the dotted t-deformations). Entries are keyed (i, 0).
pub fn homology_ungraded(c: &ChainComplex<BigInt>, theory: &str) -> HomologyTable {
    let snfs: Vec<Snf> = c.diffs.iter().map(smith_normal_form).collect();
    let mut entries = BTreeMap::new();
    for (k, g) in c.groups.iter().enumerate() {
        let dim = g.gens.len();
        if dim == 0 {
            continue;
        }
        let rank_out = if k < snfs.len() { snfs[k].rank } else { 0 };
        let (rank_in, torsion) = if k > 0 {
            let snf = &snfs[k - 1];
            let torsion: Vec<BigInt> = snf.factors.iter().filter(|f| !f.is_one()).cloned().collect();
            (snf.rank, torsion)
        } else {
            (0, Vec::new())
        };
        let free = dim - rank_out - rank_in;
        if free > 0 || !torsion.is_empty() {
            entries.insert((g.degree, 0), HomologyEntry { free, torsion });
        }
    }
    HomologyTable { theory: theory.into(), entries }
}

/// Mod-2 homology dimensions computed directly from F₂ ranks.
pub fn mod2_homology(c: &ChainComplex<BigInt>) -> BTreeMap<(i64, i64), usize> {
    let qs: std::collections::BTreeSet<i64> =
        c.groups.iter().flat_map(|g| g.gens.iter().map(|x| x.q)).collect();
    let mut out = BTreeMap::new();
    for q in qs {
        let picks: Vec<Vec<usize>> = c
            .groups
            .iter()
            .map(|g| {
                g.gens
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.q == q)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let ranks: Vec<usize> = (0..c.diffs.len())
            .map(|k| rank_mod2(&c.diffs[k].submatrix(&picks[k + 1], &picks[k])))
            .collect();
        for (k, g) in c.groups.iter().enumerate() {
            let dim = picks[k].len();
            if dim == 0 {
                continue;
            }
            let rank_out = if k < ranks.len() { ranks[k] } else { 0 };
            let rank_in = if k > 0 { ranks[k - 1] } else { 0 };
            let d = dim - rank_out - rank_in;
            if d > 0 {
                out.insert((g.degree, q), d);
            }
        }
    }
    out
}

/// Rank over F₂ by Gaussian elimination on bitsets.
fn rank_mod2(m: &SparseMat<BigInt>) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let two = BigInt::from(2);
    let mut current: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (&(i, j), v) in m.iter() {
        if (v % &two).is_zero() {
            continue;
        }
        current.entry(i).or_insert_with(|| vec![0u64; words])[j / 64] ^= 1u64 << (j % 64);
    }
    rows.extend(current.into_values());
    let mut rank = 0usize;
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    for mut row in rows {
        loop {
            let lead = row.iter().enumerate().find_map(|(w, &x)| {
                if x != 0 {
                    Some(w * 64 + x.trailing_zeros() as usize)
                } else {
                    None
                }
            });
            let Some(lead) = lead else { break };
            if let Some((_, p)) = pivots.iter().find(|(l, _)| *l == lead) {
                for (a, b) in row.iter_mut().zip(p) {
                    *a ^= b;
                }
            } else {
                pivots.push((lead, row));
                rank += 1;
                break;
            }
        }
    }
    rank
}

/// Run slice computations, in parallel when a rayon pool is configured.
fn maybe_par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Transformations for table comparison.
#[derive(Clone, Copy, Debug)]
pub enum TableTransform {
    Identity,
    /// (i,j) → (−i,−j) on free ranks only (torsion shifts under duality).
    MirrorRanks,
    /// (i,j) → (i + di, j + dj).
    Shift { di: i64, dj: i64 },
}

/// Compare two tables after a transform; returns mismatch descriptions.
pub fn compare_tables(a: &HomologyTable, b: &HomologyTable, t: TableTransform) -> Vec<String> {
    let mut bad = Vec::new();
    match t {
        TableTransform::Identity => {
            if a.entries != b.entries {
                let keys: std::collections::BTreeSet<_> =
                    a.entries.keys().chain(b.entries.keys()).collect();
                for k in keys {
                    if a.entries.get(k) != b.entries.get(k) {
                        bad.push(format!("mismatch at {k:?}"));
                    }
                }
            }
        }
        TableTransform::MirrorRanks => {
            let ranks = |t: &HomologyTable| -> BTreeMap<(i64, i64), usize> {
                t.entries
                    .iter()
                    .filter(|(_, e)| e.free > 0)
                    .map(|(&(i, j), e)| ((i, j), e.free))
                    .collect()
            };
            let ra = ranks(a);
            let rb: BTreeMap<(i64, i64), usize> =
                ranks(b).into_iter().map(|((i, j), r)| ((-i, -j), r)).collect();
            if ra != rb {
                bad.push("free ranks do not mirror".into());
            }
        }
        TableTransform::Shift { di, dj } => {
            let shifted: BTreeMap<(i64, i64), HomologyEntry> =
                a.entries.iter().map(|(&(i, j), e)| ((i + di, j + dj), e.clone())).collect();
            if shifted != b.entries {
                bad.push(format!("tables differ after shift ({di},{dj})"));
            }
        }
    }
    bad
}
