//! Property tests for the algebraic invariants of the ground ring and the
//! braiding.

use proptest::prelude::*;

use chrono_kh::coeff::{lambda, Bidegree, CoeffElement, Specialization, UnitMonomial};
use chrono_kh::frobenius::{swap_at, Lin, V};

fn bidegree() -> impl Strategy<Value = Bidegree> {
    (-5i64..=5, -5i64..=5).prop_map(|(a, b)| Bidegree::new(a, b))
}

fn unit_monomial() -> impl Strategy<Value = UnitMonomial> {
    (any::<bool>(), 0i64..2, 0i64..2, -3i64..=3)
        .prop_map(|(s, x, y, k)| UnitMonomial::new(if s { 1 } else { -1 }, x, y, k))
}

fn coeff_element() -> impl Strategy<Value = CoeffElement> {
    prop::collection::vec((unit_monomial(), -4i64..=4), 0..5).prop_map(|terms| {
        let mut acc = CoeffElement::zero();
        for (u, c) in terms {
            let t = &CoeffElement::from_unit(u) * &CoeffElement::from_int(c);
            acc = &acc + &t;
        }
        acc
    })
}

proptest! {
    #[test]
    fn lambda_antisymmetric(d1 in bidegree(), d2 in bidegree()) {
        prop_assert_eq!(lambda(d1, d2).mul(lambda(d2, d1)), UnitMonomial::ONE);
    }

    #[test]
    fn lambda_homomorphism_each_argument(d1 in bidegree(), d1p in bidegree(), d2 in bidegree()) {
        prop_assert_eq!(lambda(d1 + d1p, d2), lambda(d1, d2).mul(lambda(d1p, d2)));
        prop_assert_eq!(lambda(d2, d1 + d1p), lambda(d2, d1).mul(lambda(d2, d1p)));
    }

    #[test]
    fn ring_is_commutative_and_associative(
        a in coeff_element(),
        b in coeff_element(),
        c in coeff_element(),
    ) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn unit_monomials_invert(u in unit_monomial()) {
        prop_assert_eq!(u.mul(u.inverse()), UnitMonomial::ONE);
        let as_elem = CoeffElement::from_unit(u);
        let inv = CoeffElement::from_unit(u.inverse());
        prop_assert_eq!(&as_elem * &inv, CoeffElement::one());
    }

    #[test]
    fn specialize_is_ring_homomorphism(a in coeff_element(), b in coeff_element()) {
        for spec in [Specialization::even(), Specialization::odd()] {
            let lhs = (&a * &b).specialize(&spec);
            let rhs = a.specialize(&spec) * b.specialize(&spec);
            prop_assert_eq!(lhs, rhs);
            let lhs = (&a + &b).specialize(&spec);
            let rhs = a.specialize(&spec) + b.specialize(&spec);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn braiding_squares_to_identity(bits in prop::collection::vec(any::<bool>(), 2..6), pos in 0usize..4) {
        let word: Vec<V> = bits.iter().map(|&b| if b { V::P } else { V::M }).collect();
        prop_assume!(pos + 1 < word.len());
        let lin = Lin::from_word(word);
        prop_assert_eq!(swap_at(&swap_at(&lin, pos), pos), lin);
    }

    #[test]
    fn scale_unit_respects_products(a in coeff_element(), u in unit_monomial(), v in unit_monomial()) {
        prop_assert_eq!(
            a.scale_unit(u).scale_unit(v),
            a.scale_unit(u.mul(v))
        );
    }
}
