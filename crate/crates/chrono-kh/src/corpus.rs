//! Named test diagrams, braid closures, Reidemeister pairs and seeded random
//! PD codes used by the verification suites and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Edge, LinkDiagram, PdCode};

/// Close a braid word on `strands` strands. Letters are `+i`/`-i` for the
/// positive/negative generator between positions `i` and `i+1` (1-based).
pub fn braid_closure(strands: usize, word: &[i32]) -> LinkDiagram {
    assert!(strands >= 1);
    // Provisional labels, merged at closure.
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let init: Vec<usize> = (0..strands).map(|_| fresh()).collect();
    let mut cur = init.clone();
    let mut touched = vec![false; strands];
    let mut crossings: Vec<[usize; 4]> = Vec::new();
    for &letter in word {
        let i = (letter.unsigned_abs() as usize) - 1;
        assert!(i + 1 < strands, "braid letter out of range");
        let (a, b) = (cur[i], cur[i + 1]);
        let t = fresh();
        let u = fresh();
        if letter > 0 {
            // Under-strand runs bottom-right to top-left.
            crossings.push([b, u, t, a]);
        } else {
            crossings.push([a, b, u, t]);
        }
        cur[i] = t;
        cur[i + 1] = u;
        touched[i] = true;
        touched[i + 1] = true;
    }
    // Identify each strand's final label with its initial one.
    let mut parent: Vec<usize> = (0..next).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for j in 0..strands {
        let (a, b) = (init[j], cur[j]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut names: std::collections::HashMap<usize, Edge> = std::collections::HashMap::new();
    let take = |parent: &mut [usize], names: &mut std::collections::HashMap<usize, Edge>, x: usize| -> Edge {
        let r = find(parent, x);
        let n = names.len() as Edge + 1;
        *names.entry(r).or_insert(n)
    };
    let tuples: Vec<[Edge; 4]> = crossings
        .iter()
        .map(|t| {
            let mut out = [0; 4];
            for (k, &x) in t.iter().enumerate() {
                out[k] = take(&mut parent, &mut names, x);
            }
            out
        })
        .collect();
    let free = touched.iter().filter(|&&t| !t).count();
    LinkDiagram::new(PdCode::with_free_circles(tuples, free), None)
        .expect("braid closures are valid diagrams")
}

/// Crossingless unknot.
pub fn unknot_0() -> LinkDiagram {
    LinkDiagram::new(PdCode::with_free_circles(vec![], 1), None).unwrap()
}

/// Unknot with a positive kink.
pub fn unknot_kink_positive() -> LinkDiagram {
    LinkDiagram::new(PdCode::new(vec![[2, 2, 1, 1]]), None).unwrap()
}

/// Unknot with a negative kink.
pub fn unknot_kink_negative() -> LinkDiagram {
    LinkDiagram::new(PdCode::new(vec![[1, 2, 2, 1]]), None).unwrap()
}

/// A 3-crossing unknot diagram.
pub fn unknot_3() -> LinkDiagram {
    braid_closure(2, &[1, 1, -1])
}

/// Left-handed trefoil: three negative crossings.
pub fn left_trefoil() -> LinkDiagram {
    LinkDiagram::new(PdCode::new(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]), None).unwrap()
}

/// Right-handed trefoil: three positive crossings.
pub fn right_trefoil() -> LinkDiagram {
    LinkDiagram::new(PdCode::new(vec![[4, 2, 5, 1], [6, 4, 1, 3], [2, 6, 3, 5]]), None).unwrap()
}

/// Hopf link with two positive crossings.
pub fn hopf_link_positive() -> LinkDiagram {
    LinkDiagram::new(PdCode::new(vec![[1, 3, 2, 4], [3, 1, 4, 2]]), None).unwrap()
}

/// Hopf link with two negative crossings.
pub fn hopf_link_negative() -> LinkDiagram {
    LinkDiagram::new(PdCode::new(vec![[4, 1, 3, 2], [2, 3, 1, 4]]), None).unwrap()
}

/// Figure-eight knot (4 crossings, amphichiral).
pub fn figure_eight() -> LinkDiagram {
    LinkDiagram::new(
        PdCode::new(vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]),
        None,
    )
    .unwrap()
}

/// A six-crossing knot (closure of a 3-strand braid).
pub fn six_crossing_knot() -> LinkDiagram {
    let d = braid_closure(3, &[1, 1, 1, -2, 1, -2]);
    debug_assert_eq!(d.components.len(), 1);
    d
}

/// Two-component crossingless unlink.
pub fn unlink_2() -> LinkDiagram {
    LinkDiagram::new(PdCode::with_free_circles(vec![], 2), None).unwrap()
}

/// Pairs of diagrams related by a single Reidemeister move, two per move type.
pub fn reidemeister_pairs() -> Vec<(&'static str, LinkDiagram, LinkDiagram)> {
    vec![
        ("R1 unknot", unknot_0(), unknot_kink_positive()),
        ("R1 trefoil", braid_closure(2, &[-1, -1, -1]), braid_closure(3, &[-1, -1, -1, 2])),
        ("R2 unlink", unlink_2(), unlink_r2()),
        ("R2 trefoil", braid_closure(2, &[-1, -1, -1]), braid_closure(2, &[-1, -1, -1, 1, -1])),
        ("R3 link", braid_closure(3, &[1, 2, 1]), braid_closure(3, &[2, 1, 2])),
        ("R3 mixed", braid_closure(3, &[-1, 2, 1]), braid_closure(3, &[2, 1, -2])),
    ]
}

/// Two-component unlink drawn with one R2 clasp.
pub fn unlink_r2() -> LinkDiagram {
    braid_closure(2, &[1, -1])
}

/// Seeded random braid-closure diagrams with at most 8 crossings.
pub fn random_diagrams(seed: u64, count: usize) -> Vec<LinkDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let strands = rng.gen_range(2..=4usize);
        let len = rng.gen_range(4..=8usize);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let pos = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    pos
                } else {
                    -pos
                }
            })
            .collect();
        out.push(braid_closure(strands, &word));
    }
    out
}

/// The desk-scale corpus: small unknots, both trefoils, figure-eight, both
/// Hopf links and one six-crossing knot.
pub fn desk_corpus() -> Vec<(&'static str, LinkDiagram)> {
    vec![
        ("unknot-0", unknot_0()),
        ("unknot-kink+", unknot_kink_positive()),
        ("unknot-kink-", unknot_kink_negative()),
        ("unlink-r2", unlink_r2()),
        ("unknot-3", unknot_3()),
        ("trefoil-left", left_trefoil()),
        ("trefoil-right", right_trefoil()),
        ("figure-eight", figure_eight()),
        ("hopf+", hopf_link_positive()),
        ("hopf-", hopf_link_negative()),
        ("knot-6", six_crossing_knot()),
    ]
}
