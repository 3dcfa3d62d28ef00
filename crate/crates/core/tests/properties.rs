use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use tn_core::freegroup::{reduce, GeneratorName, MarkedAutomorphism};
use tn_core::graphs::{canonical_key, validate, IdealEdge};
use tn_core::lattice::{smith_normal_form, IntMatrix, RoseCoset};
use tn_core::morse::{is_descending, is_descending_oracle};
use tn_core::toymodel::{config_to_graph, GridPoint, ToyConfiguration};

fn word(n: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=n as i32, any::<bool>()).prop_map(|(x, s)| if s { x } else { -x }), 0..8)
}

fn generator(n: usize) -> impl Strategy<Value = (GeneratorName, i8)> {
    let names = prop_oneof![
        (1..=n, 1..=n).prop_filter("distinct", |(i, k)| i != k).prop_map(|(i, k)| GeneratorName::K2 { i, k }),
        (1..=n, 1..=n, 1..=n)
            .prop_filter("distinct", |(i, k, l)| i != k && k != l && i != l)
            .prop_map(|(i, k, l)| GeneratorName::K3 { i, k, l }),
        Just(GeneratorName::Delta12),
        Just(GeneratorName::Omega1),
        (1..n).prop_map(|i| GeneratorName::Pi { i }),
    ];
    (names, prop_oneof![Just(1i8), Just(-1i8)])
}

fn automorphism(n: usize) -> impl Strategy<Value = MarkedAutomorphism> {
    prop::collection::vec(generator(n), 0..5).prop_map(move |gs| {
        gs.into_iter().fold(MarkedAutomorphism::identity(n), |acc, (g, e)| {
            MarkedAutomorphism::from_generator(g, e, n).unwrap().compose(&acc).unwrap()
        })
    })
}

/// Unimodular matrices as products of elementary row operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -1i64..=1), 0..6).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n);
        for (a, b, f) in ops {
            if a != b {
                m.add_row_multiple(a, b, &BigInt::from(f));
            }
        }
        m
    })
}

fn grid_point() -> impl Strategy<Value = GridPoint> {
    (-2i64..=2, -2i64..=2, 0i64..4, any::<bool>()).prop_map(|(a, b, k, horizontal)| {
        let t = Rational64::new(k, 4);
        let (x, y) = if horizontal {
            (Rational64::from_integer(a) + t, Rational64::from_integer(b))
        } else {
            (Rational64::from_integer(a), Rational64::from_integer(b) + t)
        };
        GridPoint::new(x, y).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_idempotent(raw in word(3)) {
        let w = reduce(3, &raw).unwrap();
        prop_assert_eq!(reduce(3, w.letters()).unwrap(), w.clone());
        prop_assert!(w.concat(&w.inverse()).unwrap().is_empty());
    }

    #[test]
    fn composition_is_associative(a in automorphism(3), b in automorphism(3), c in automorphism(3)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left.images(), right.images());
    }

    #[test]
    fn inverse_cancels(a in automorphism(4), raw in word(4)) {
        let w = reduce(4, &raw).unwrap();
        let back = a.invert().unwrap();
        prop_assert_eq!(back.apply(&a.apply(&w).unwrap()).unwrap(), w);
    }

    #[test]
    fn abelianization_is_multiplicative(a in automorphism(3), b in automorphism(3)) {
        let ab = a.compose(&b).unwrap().abelianize();
        let prod = a.abelianize().mul(&b.abelianize()).unwrap();
        let swapped = b.abelianize().mul(&a.abelianize()).unwrap();
        prop_assert!(ab == prod || ab == swapped);
    }

    #[test]
    fn inner_automorphisms_are_out_trivial(raw in word(3)) {
        let w = reduce(3, &raw).unwrap();
        let inner = MarkedAutomorphism::inner(&w).unwrap();
        prop_assert!(inner.out_equal(&MarkedAutomorphism::identity(3)).unwrap());
        prop_assert!(inner.is_inner().is_some());
    }

    #[test]
    fn coset_ignores_signed_permutations(
        m in unimodular(3),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        signs in prop::collection::vec(any::<bool>(), 3),
    ) {
        let rows = m.to_rows();
        let mut moved: Vec<Vec<BigInt>> = perm.iter().map(|&i| rows[i].clone()).collect();
        for (r, &s) in moved.iter_mut().zip(&signs) {
            if s {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
        }
        let a = RoseCoset::new(&m).unwrap();
        let b = RoseCoset::new(&IntMatrix::from_rows(moved).unwrap()).unwrap();
        prop_assert_eq!(a.norm(), b.norm());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn fast_path_matches_oracle(m in unimodular(3), code in 0usize..27) {
        let rho = RoseCoset::new(&m).unwrap();
        let mut c = code;
        let coeffs: Vec<i8> = (0..3).map(|_| { let d = (c % 3) as i8 - 1; c /= 3; d }).collect();
        prop_assume!(coeffs.iter().filter(|&&x| x != 0).count() >= 2);
        let e = IdealEdge::new(&coeffs).unwrap();
        prop_assert_eq!(is_descending(&rho, &e).unwrap(), is_descending_oracle(&rho, &e).unwrap());
    }

    #[test]
    fn smith_form_is_diagonal(entries in prop::collection::vec(-6i64..=6, 12)) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(<[i64]>::to_vec).collect();
        let a = IntMatrix::from_i64(&rows);
        let s = smith_normal_form(&a);
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        for w in s.diagonal.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
    }

    #[test]
    fn toy_graphs_are_valid_and_translation_invariant(
        z in grid_point(),
        w in grid_point(),
        dx in -2i64..=2,
        dy in -2i64..=2,
    ) {
        prop_assume!(z != w);
        let c = ToyConfiguration::new(3, vec![(z, w)]).unwrap();
        let g = config_to_graph(&c).unwrap();
        prop_assert!(validate(&g).violation.is_none());
        let moved = config_to_graph(&c.translate_pair(0, dx, dy).unwrap()).unwrap();
        prop_assert_eq!(canonical_key(&g), canonical_key(&moved));
    }
}
