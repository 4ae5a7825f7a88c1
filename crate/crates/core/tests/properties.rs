use proptest::prelude::*;

use jordan_schemes::iso::canonical_certificate;
use jordan_schemes::jordan::{JAlgElement, JordanAlgebra};
use jordan_schemes::rational::ratio;
use jordan_schemes::scheme::{read_scheme_json, write_scheme_json, JordanScheme};
use jordan_schemes::search::{enumerate_admissible, EnumerationMode};
use jordan_schemes::signs::{examples, normalize_signs, SignMatrix};
use jordan_schemes::{admissible, build_scheme, verify_jordan_scheme, ExactMatrix, MatrixSpan};

fn scheme(rank: u32) -> JordanScheme {
    build_scheme(&examples::by_rank(rank).unwrap()).unwrap()
}

fn element(d: usize) -> impl Strategy<Value = JAlgElement> {
    prop::collection::vec((-4i64..=4, 1i64..=3), d)
        .prop_map(|v| JAlgElement(v.into_iter().map(|(p, q)| ratio(p, q)).collect()))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn any_sign_matrix(rank: u32) -> impl Strategy<Value = SignMatrix> {
    let n = 1usize << rank;
    prop::collection::vec(prop::bool::ANY, n * n).prop_map(move |bits| {
        let rows: Vec<Vec<i64>> = bits.chunks(n).map(|r| r.iter().map(|&b| if b { -1 } else { 1 }).collect()).collect();
        SignMatrix::from_rows(&rows).unwrap()
    })
}

#[test]
fn transposes_of_enumerated_matrices_are_admissible() {
    for rank in 1..=2 {
        for m in enumerate_admissible(rank, EnumerationMode::All).unwrap() {
            assert!(admissible(&m.transpose()), "transpose fails for\n{}", m.to_text());
        }
    }
}

#[test]
fn all_equals_normalized_times_orbit() {
    for (rank, orbit) in [(1u32, 8usize), (2, 128)] {
        let all = enumerate_admissible(rank, EnumerationMode::All).unwrap();
        let normalized = enumerate_admissible(rank, EnumerationMode::Normalized).unwrap();
        assert_eq!(all.len(), normalized.len() * orbit);
        for m in &all {
            assert!(normalized.contains(&normalize_signs(m)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jordan_identity_j8(a in element(7), b in element(7)) {
        let s = scheme(1);
        let algebra = JordanAlgebra::new(verify_jordan_scheme(&s).unwrap());
        prop_assert!(algebra.satisfies_jordan_identity(&a, &b));
    }

    #[test]
    fn jordan_identity_j16(a in element(13), b in element(13)) {
        let s = scheme(2);
        let algebra = JordanAlgebra::new(verify_jordan_scheme(&s).unwrap());
        prop_assert!(algebra.satisfies_jordan_identity(&a, &b));
    }

    #[test]
    fn switching_preserves_admissibility(m in any_sign_matrix(2), r in 0u64..16, c in 0u64..16) {
        prop_assert_eq!(admissible(&m.switched(r, c)), admissible(&m));
    }

    #[test]
    fn switching_preserves_the_scheme(r in 0u64..256, c in 0u64..256) {
        let m = examples::order8();
        let switched = m.switched(r, c);
        prop_assert!(admissible(&switched));
        let a = canonical_certificate(&build_scheme(&m).unwrap());
        let b = canonical_certificate(&build_scheme(&switched).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normalization_matches_admissibility(m in any_sign_matrix(2)) {
        let n = normalize_signs(&m);
        prop_assert!(n.is_normalized());
        prop_assert_eq!(admissible(&n), admissible(&m));
    }

    #[test]
    fn text_round_trip(m in any_sign_matrix(3)) {
        prop_assert_eq!(SignMatrix::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn span_is_canonical(order in permutation(13), coeffs in prop::collection::vec(-3i64..=3, 13)) {
        // the same space from reordered generators plus a redundant combination
        let s = scheme(2);
        let classes = s.class_matrices();
        let n = s.order();
        let mut combo = ExactMatrix::zeros(n);
        for (m, &c) in classes.iter().zip(&coeffs) {
            combo.add_scaled(&ratio(c, 1), m).unwrap();
        }
        let reordered: Vec<&ExactMatrix> = order.iter().map(|&i| &classes[i]).chain(std::iter::once(&combo)).collect();
        let a = MatrixSpan::from_matrices(n, classes.iter()).unwrap();
        let b = MatrixSpan::from_matrices(n, reordered).unwrap();
        prop_assert_eq!(a.dim(), 13);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn certificate_invariant_and_json_round_trip(perm in permutation(32), classes in permutation(24)) {
        let s = scheme(3);
        let class_perm: Vec<usize> = std::iter::once(0).chain(classes.into_iter().map(|c| c + 1)).collect();
        let t = s.relabeled(&perm, &class_perm);
        verify_jordan_scheme(&t).unwrap();
        prop_assert_eq!(canonical_certificate(&t), canonical_certificate(&s));
        prop_assert_eq!(read_scheme_json(&write_scheme_json(&t)).unwrap(), t);
    }
}
