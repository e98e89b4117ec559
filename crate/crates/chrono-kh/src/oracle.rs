//! Kauffman-style state sum for the graded Euler characteristic.
//!
//! This is the independent cross-check for the cube and for homology: circle
//! counting here goes through a plain union-find over edge labels and shares
//! no code with the cube's circle tracer.


use crate::diagram::LinkDiagram;
use crate::poly::LaurentPoly;

/// `(−1)^{n₋} q^{n₊−2n₋} · Σ_ξ (−q)^{‖ξ‖} (q+q^{−1})^{|circles(ξ)|}`.
pub fn state_sum(d: &LinkDiagram) -> LaurentPoly {
    let n = d.n();
    let q0 = LaurentPoly::q_plus_q_inv();
    let mut body = LaurentPoly::zero();
    for state in 0u32..(1u32 << n) {
        let c = circle_count(d, state);
        let w = state.count_ones() as i64;
        let sign = if w % 2 == 0 { 1 } else { -1 };
        let term = &LaurentPoly::monomial(w, sign) * &q0.pow(c);
        body = &body + &term;
    }
    let shift = d.n_plus as i64 - 2 * (d.n_minus as i64);
    let sign = if d.n_minus.is_multiple_of(2) { 1 } else { -1 };
    &LaurentPoly::monomial(shift, sign) * &body
}

/// Circles of a full smoothing, by union-find over edge labels. Bit i of
/// `state` picks the resolution of crossing i: 0 joins slot pairs (0,1),(2,3)
/// and 1 joins (1,2),(3,0).
fn circle_count(d: &LinkDiagram, state: u32) -> usize {
    let labels: Vec<u32> = d.pd.incidences().keys().copied().collect();
    if labels.is_empty() {
        return d.pd.free_circles;
    }
    let index: std::collections::HashMap<u32, usize> =
        labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let union = |parent: &mut [usize], a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for (c, tuple) in d.pd.crossings.iter().enumerate() {
        let pairs: [(usize, usize); 2] =
            if state >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(1, 2), (3, 0)] };
        for (a, b) in pairs {
            union(&mut parent, index[&tuple[a]], index[&tuple[b]]);
        }
    }
    let mut roots = std::collections::HashSet::new();
    for i in 0..labels.len() {
        roots.insert(find(&mut parent, i));
    }
    roots.len() + d.pd.free_circles
}

/// Circle count oracle exposed for cube cross-validation.
pub fn circle_count_oracle(d: &LinkDiagram, state: u32) -> usize {
    circle_count(d, state)
}
