//! Structural properties of the construction that go beyond the acceptance
//! gate: on-the-nose duality for mirrors, the skein-type exact sequence as a
//! rank identity, and the drawn trefoil's sign assignment as a golden file.

use std::collections::{BTreeMap, HashMap};

use chrono_kh::complex::{build_bracket, build_complex, ChainComplex, Generator};
use chrono_kh::coeff::Specialization;
use chrono_kh::corpus;
use chrono_kh::cube::{ResolutionCube, SignAssignment};
use chrono_kh::diagram::{LinkDiagram, PdCode};
use chrono_kh::frobenius::{covering_system, V};
use chrono_kh::{CoeffElement, UnitMonomial};

/// The duality functor on coefficients: X ↔ Y, Z ↦ Z⁻¹.
fn flip_ring(c: &CoeffElement) -> CoeffElement {
    let mut out = CoeffElement::zero();
    for (&(x, y, k), n) in c.terms() {
        let u = UnitMonomial { sign: 1, ex: y, ey: x, k: -k };
        out = &out + &(&CoeffElement::from_unit(u) * &CoeffElement::from_int(n.clone()));
    }
    out
}

/// The mirror bracket equals the relabeled dual of the bracket, under the
/// generator bijection (complement the vertex, flip every letter) and a unit
/// rescaling of generators.
fn assert_mirror_duality(d: LinkDiagram) {
    let n = d.n();
    let m = d.mirror();
    let sys = covering_system();
    let cube = ResolutionCube::build(d);
    let eps = cube.sign_assignment().unwrap();
    let c = build_bracket(&cube, &eps, &sys).over_lambda().unwrap();
    let cube_m = ResolutionCube::build(m);
    let eps_m = cube_m.sign_assignment().unwrap();
    let cm = build_bracket(&cube_m, &eps_m, &sys).over_lambda().unwrap();
    let dual = c.dual().map_entries("flipped", flip_ring).shifted(n as i64, 0);

    let mask = (1u32 << n) - 1;
    let midx: Vec<HashMap<(u32, Vec<V>), usize>> = cm
        .groups
        .iter()
        .map(|g| {
            g.gens
                .iter()
                .enumerate()
                .map(|(i, gen)| ((gen.vertex.0, gen.word.clone()), i))
                .collect()
        })
        .collect();
    let map_gen = |gen: &Generator| -> (u32, Vec<V>) {
        let w: Vec<V> = gen.word.iter().map(|v| if *v == V::P { V::M } else { V::P }).collect();
        ((!gen.vertex.0) & mask, w)
    };

    // Solve for a unit diagonal making the two complexes literally equal,
    // then verify every constraint.
    let mut offset = vec![0usize];
    for g in &dual.groups {
        offset.push(offset.last().unwrap() + g.gens.len());
    }
    let total = *offset.last().unwrap();
    let mut adj: Vec<Vec<(usize, UnitMonomial)>> = vec![Vec::new(); total];
    for (k, mat) in dual.diffs.iter().enumerate() {
        assert_eq!(mat.nnz(), cm.diffs[k].nnz(), "sparsity patterns differ");
        for (&(r, c_), v) in mat.iter() {
            let vu = v.as_unit().expect("bracket entries are units");
            let gr = &dual.groups[k + 1].gens[r];
            let gc = &dual.groups[k].gens[c_];
            let mr = midx[k + 1][&map_gen(gr)];
            let mc = midx[k][&map_gen(gc)];
            let mu = cm.diffs[k].get(mr, mc).as_unit().expect("mirror entry present");
            let ratio = mu.mul(vu.inverse());
            let (a, b) = (offset[k + 1] + r, offset[k] + c_);
            adj[a].push((b, ratio));
            adj[b].push((a, ratio.inverse()));
        }
    }
    let mut val: Vec<Option<UnitMonomial>> = vec![None; total];
    for s in 0..total {
        if val[s].is_some() {
            continue;
        }
        val[s] = Some(UnitMonomial::ONE);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let vx = val[x].unwrap();
            for &(y, r) in &adj[x] {
                let want = r.mul(vx);
                match val[y] {
                    None => {
                        val[y] = Some(want);
                        stack.push(y);
                    }
                    Some(have) => assert_eq!(have, want, "no consistent unit diagonal"),
                }
            }
        }
    }
}

#[test]
fn mirror_bracket_is_relabelled_dual() {
    assert_mirror_duality(corpus::unknot_kink_positive());
    assert_mirror_duality(corpus::hopf_link_positive());
    assert_mirror_duality(corpus::left_trefoil());
    assert_mirror_duality(corpus::figure_eight());
}

fn rank_table(c: &ChainComplex<num_bigint::BigInt>) -> BTreeMap<(i64, i64), i64> {
    c.rank_table().into_iter().map(|(k, v)| (k, v as i64)).collect()
}

/// The four-term exact sequence of complexes, tested as a chain-rank
/// identity on a 2-crossing instance: at each bidegree the alternating sum
/// of ranks of KhCom(or)[2]{1}, KhCom(D₋)[2]{2}, KhCom(D₊){−2}, KhCom(or){−1}
/// vanishes.
#[test]
fn skein_exact_sequence_rank_identity() {
    let d_plus = corpus::hopf_link_positive();
    // Switch the first crossing: re-root its tuple at the over-strand.
    let d_minus = LinkDiagram::new(PdCode::new(vec![[4, 1, 3, 2], [3, 1, 4, 2]]), None).unwrap();
    assert_eq!(d_minus.signs, vec![-1, 1]);
    // Oriented resolution of the first crossing: edges 1~3, 2~4 merge.
    let d_or = LinkDiagram::new(PdCode::new(vec![[1, 1, 2, 2]]), None).unwrap();
    assert_eq!(d_or.signs, vec![1]);

    let sys = covering_system();
    let complex_of = |d: &LinkDiagram| {
        let cube = ResolutionCube::build(d.clone());
        let eps = cube.sign_assignment().unwrap();
        build_complex(&cube, &eps, &sys).specialize(&Specialization::even())
    };
    let a = rank_table(&complex_of(&d_or).shifted(2, 1));
    let b = rank_table(&complex_of(&d_minus).shifted(2, 2));
    let c = rank_table(&complex_of(&d_plus).shifted(0, -2));
    let d = rank_table(&complex_of(&d_or).shifted(0, -1));
    let mut keys: std::collections::BTreeSet<(i64, i64)> = std::collections::BTreeSet::new();
    keys.extend(a.keys().chain(b.keys()).chain(c.keys()).chain(d.keys()));
    for k in keys {
        let get = |t: &BTreeMap<(i64, i64), i64>| t.get(&k).copied().unwrap_or(0);
        assert_eq!(
            get(&a) - get(&b) + get(&c) - get(&d),
            0,
            "alternating rank sum nonzero at {k:?}"
        );
    }
}

/// The drawn example cube's sign assignment (edges *10, 01*, *01, 1*1
/// carrying −X, edge *11 carrying −Y, all others 1) satisfies dε = −ψ for
/// the left trefoil once the arrow of the first crossing is flipped.
#[test]
fn drawn_trefoil_assignment_is_valid() {
    let d = corpus::left_trefoil().with_arrow_flipped(0);
    let cube = ResolutionCube::build(d);
    let mut table = BTreeMap::new();
    for v in 0..8u32 {
        for c in 0..3usize {
            if v >> c & 1 == 0 {
                table.insert((v, c), UnitMonomial::ONE);
            }
        }
    }
    let neg_x = UnitMonomial::X.neg();
    table.insert((0b010, 0), neg_x); // *10
    table.insert((0b010, 2), neg_x); // 01*
    table.insert((0b100, 0), neg_x); // *01
    table.insert((0b101, 1), neg_x); // 1*1
    table.insert((0b110, 0), UnitMonomial::Y.neg()); // *11
    let eps = SignAssignment::from_table(table);
    assert!(cube.check_faces(&eps).is_none(), "drawn assignment violates a face");
    // It induces the same homology as the canonical one.
    let sys = covering_system();
    let canonical = cube.sign_assignment().unwrap();
    for spec in [Specialization::even(), Specialization::odd()] {
        let t1 = chrono_kh::homology::homology(
            &build_complex(&cube, &eps, &sys).specialize(&spec),
            spec.name,
        );
        let t2 = chrono_kh::homology::homology(
            &build_complex(&cube, &canonical, &sys).specialize(&spec),
            spec.name,
        );
        assert_eq!(t1.entries, t2.entries);
    }
}

/// Six-crossing knot: integral tables are mirror-dual between the knot and
/// its mirror, at the level of free ranks over Q.
#[test]
fn six_crossing_mirror_ranks() {
    let d = corpus::six_crossing_knot();
    let m = d.mirror();
    for theory in [chrono_kh::Theory::Even, chrono_kh::Theory::Odd] {
        let a = chrono_kh::khovanov_homology(d.clone(), theory).unwrap();
        let b = chrono_kh::khovanov_homology(m.clone(), theory).unwrap();
        let bad = chrono_kh::homology::compare_tables(
            &b,
            &a,
            chrono_kh::homology::TableTransform::MirrorRanks,
        );
        assert!(bad.is_empty(), "{bad:?}");
    }
}

/// Full orientation reversal preserves the complex: tables agree on the nose
/// for a knot and for the Hopf link with both components reversed.
#[test]
fn full_orientation_reversal_preserves_tables() {
    let knot = corpus::left_trefoil();
    let reversed = knot.reverse_component(0).unwrap();
    let hopf = corpus::hopf_link_positive();
    let hopf_rev = hopf.reverse_component(0).unwrap().reverse_component(1).unwrap();
    for (a, b) in [(knot, reversed), (hopf, hopf_rev)] {
        for theory in [chrono_kh::Theory::Even, chrono_kh::Theory::Odd] {
            let ta = chrono_kh::khovanov_homology(a.clone(), theory).unwrap();
            let tb = chrono_kh::khovanov_homology(b.clone(), theory).unwrap();
            assert_eq!(ta.entries, tb.entries);
        }
    }
}
