mod common;

use bbsym::{Error, Pauli, PauliString, Phase};
use common::*;
use proptest::prelude::*;

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(ops, ph)| {
        let ops: Vec<Pauli> = ops.into_iter().map(|k| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][k as usize]).collect();
        PauliString::from_ops(&ops).with_phase(Phase::from_exponent(ph as i64))
    })
}

fn triple() -> impl Strategy<Value = (PauliString, PauliString, PauliString)> {
    (1usize..=8).prop_flat_map(|n| (pauli_strategy(n), pauli_strategy(n), pauli_strategy(n)))
}

fn pair() -> impl Strategy<Value = (PauliString, PauliString)> {
    (1usize..=8).prop_flat_map(|n| (pauli_strategy(n), pauli_strategy(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn multiplication_is_associative((a, b, c) in triple()) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn commutation_sign((a, b) in pair()) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        if a.commutes(&b).unwrap() {
            prop_assert_eq!(ab, ba);
        } else {
            prop_assert_eq!(ab, ba.negate());
        }
    }

    #[test]
    fn hermitian_squares_to_identity(a in (1usize..=8).prop_flat_map(pauli_strategy)) {
        let a = a.phaseless();
        let sq = a.multiply(&a).unwrap();
        prop_assert!(sq.is_identity());
        prop_assert_eq!(sq.phase(), Phase::ONE);
    }

    #[test]
    fn product_matches_dense((a, b) in (1usize..=3).prop_flat_map(|n| (pauli_strategy(n), pauli_strategy(n)))) {
        let prod = a.multiply(&b).unwrap();
        let expect = matmul(&dense_pauli(&a), &dense_pauli(&b));
        prop_assert!(max_diff(&dense_pauli(&prod), &expect) < 1e-12);
    }

    #[test]
    fn text_round_trip(a in (1usize..=12).prop_flat_map(pauli_strategy)) {
        prop_assert_eq!(a.to_string().parse::<PauliString>().unwrap(), a);
    }

    #[test]
    fn adjoint_is_inverse(a in (1usize..=6).prop_flat_map(pauli_strategy)) {
        let id = a.multiply(&a.adjoint()).unwrap();
        prop_assert!(id.is_identity());
        prop_assert_eq!(id.phase(), Phase::ONE);
    }
}

#[test]
fn all_two_qubit_pairs_match_dense_matrices() {
    let ops = ['I', 'X', 'Y', 'Z'];
    let labels: Vec<String> = ops.iter().flat_map(|a| ops.iter().map(move |b| format!("{a}{b}"))).collect();
    let mut checked = 0;
    for a in &labels {
        for b in &labels {
            let (pa, pb) = (p(a), p(b));
            let prod = pa.multiply(&pb).unwrap();
            let expect = matmul(&dense(a), &dense(b));
            assert!(max_diff(&dense_pauli(&prod), &expect) < 1e-15, "{a}·{b}");
            let ab = matmul(&dense(a), &dense(b));
            let ba = matmul(&dense(b), &dense(a));
            assert_eq!(pa.commutes(&pb).unwrap(), max_diff(&ab, &ba) < 1e-15, "{a},{b}");
            checked += 1;
        }
    }
    assert_eq!(checked, 256);
}

#[test]
fn spec_products() {
    assert_eq!(p("X").multiply(&p("Y")).unwrap().to_string(), "iZ");
    assert_eq!(p("XZ").multiply(&p("ZX")).unwrap().to_string(), "YY");
    assert_eq!(p("XI").multiply(&p("ZI")).unwrap().to_string(), "-iYI");
    assert!(matches!(p("XX").multiply(&p("X")), Err(Error::DimensionMismatch { .. })));
}
