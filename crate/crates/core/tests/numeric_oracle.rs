mod common;

use bbsym::bath::{build_bilinear_nn, build_hnn, build_linear, rational, restrict_mqe_example, MqeExample};
use bbsym::numeric::{self, BathModel, SlopeFit, DEFAULT_CAP};
use bbsym::pulse;
use bbsym::sequence::{seq_mqe16_qx, seq_mqe8};
use bbsym::{
    BathVector, BuiltinSequence, ErrorGroup, Event, InteractionTerm, Pauli, PauliString, Pulse, SBHamiltonian, Sequence,
};
use common::*;
use nalgebra::{DMatrix, DVector};

fn corpus(n: usize) -> Vec<(&'static str, SBHamiltonian)> {
    let mut v = vec![
        ("linear", build_linear(n).unwrap()),
        ("bilinear", build_bilinear_nn(n).unwrap()),
        ("hnn", build_hnn(n).unwrap()),
        ("zz_chain", restrict_mqe_example(MqeExample::ZzChain, n).unwrap()),
    ];
    if n.is_multiple_of(2) {
        v.push(("pairwise_isotropic", restrict_mqe_example(MqeExample::PairwiseIsotropic, n).unwrap()));
    }
    v
}

fn builtins() -> Vec<Sequence> {
    BuiltinSequence::ALL
        .iter()
        .map(|b| b.build(if *b == BuiltinSequence::Collective14 { 3 } else { 4 }).unwrap())
        .collect()
}

fn check_pulse(pl: &Pulse) {
    let n = pl.n_qubits();
    let u = numeric::realize_pulse(pl, 1, DEFAULT_CAP).unwrap();
    assert!(op_diff(&(u.adjoint() * &u), &DMatrix::identity(u.nrows(), u.nrows())) < 1e-10);
    for q in 0..n {
        for a in Pauli::AXES {
            let g = PauliString::single(n, q, a);
            let lhs = u.adjoint() * numeric::pauli_matrix(&g) * &u;
            let rhs = numeric::pauli_matrix(&pl.conjugate_pauli(&g).unwrap());
            assert!(op_diff(&lhs, &rhs) < 1e-10, "pulse {} on {}", pl.name(), g);
        }
    }
}

#[test]
fn pulse_unitaries_match_tableaus() {
    for n in 2..=4 {
        // builders reject sizes they do not support; keep whatever exists at this n
        let pulses: Vec<Pulse> = [
            pulse::collective(Pauli::X, n),
            pulse::collective(Pauli::Y, n),
            pulse::collective_odd(Pauli::Z, n),
            pulse::collective_odd_odd(Pauli::X, n),
            pulse::z_pair(n),
            pulse::o_pairs(n),
            pulse::o_o(n),
            pulse::exchange(0, n - 1, n),
            pulse::product(Pauli::Y, 0, 1, n),
            pulse::collective_from_products(Pauli::Z, n),
            pulse::collective_odd_from_products(Pauli::X, n),
            pulse::swap_decomposed(0, n),
        ]
        .into_iter()
        .filter_map(Result::ok)
        .collect();
        let daggers: Vec<Pulse> = pulses.iter().map(Pulse::dagger).collect();
        for pl in pulses.iter().chain(&daggers) {
            check_pulse(pl);
        }
    }
    for seq in builtins() {
        for e in seq.events() {
            if let Event::Apply(pl) = e {
                check_pulse(pl);
            }
        }
    }
}

#[test]
fn custom_tableaus_are_synthesized() {
    let n = 3;
    let a = pulse::exchange(0, 1, n).unwrap();
    let b = pulse::single(Pauli::X, 2, n).unwrap();
    let c = pulse::swap_decomposed(0, n).unwrap().dagger();
    let composite = a.times(&b).unwrap().times(&c).unwrap();
    let custom = Pulse::from_tableau("custom", composite.tableau().clone());
    check_pulse(&custom);
    let u1 = numeric::realize_pulse(&composite, 1, DEFAULT_CAP).unwrap();
    let u2 = numeric::realize_pulse(&custom, 1, DEFAULT_CAP).unwrap();
    let phase = (u2.adjoint() * &u1).trace() / C::new(8.0, 0.0);
    assert!((phase.norm() - 1.0).abs() < 1e-10);
    assert!(op_diff(&u1, &(u2 * phase)) < 1e-10);
}

#[test]
fn cycles_are_unitary() {
    for seq in builtins() {
        let h = build_hnn(seq.n_qubits()).unwrap();
        let bm = BathModel::random_for(&h, 2, 5);
        let u = numeric::simulate_cycle(&seq, &h, &bm, 0.05, DEFAULT_CAP).unwrap();
        let id = DMatrix::identity(u.nrows(), u.nrows());
        assert!(op_diff(&(u.adjoint() * &u), &id) < 1e-10, "{}", seq.name());
    }
}

#[test]
fn free_cycle_is_plain_propagator() {
    let h = build_linear(2).unwrap();
    let bm = BathModel::random_for(&h, 2, 1);
    let u = numeric::simulate_cycle(&Sequence::free(2), &h, &bm, 0.3, DEFAULT_CAP).unwrap();
    let hm = numeric::realize(&h, &bm, DEFAULT_CAP).unwrap();
    assert!(op_diff(&u, &numeric::expm_hermitian(&hm, 0.3).unwrap()) < 1e-12);
    assert!(numeric::simulate_cycle(&Sequence::free(2), &h, &bm, 0.0, DEFAULT_CAP).is_err());
}

#[test]
fn parity_kick_on_z_is_exact() {
    let h = SBHamiltonian::canonicalize([InteractionTerm::new(p("ZI"), BathVector::label("B"))], 2).unwrap();
    let seq = Sequence::parity_kick(&pulse::single(Pauli::X, 0, 2).unwrap()).unwrap();
    let bm = BathModel::random_for(&h, 2, 9);
    for tau in [0.5, 0.1, 0.01] {
        let u = numeric::simulate_cycle(&seq, &h, &bm, tau, DEFAULT_CAP).unwrap();
        let ph = u.trace() / C::new(u.nrows() as f64, 0.0);
        assert!(op_diff(&u, &(DMatrix::identity(8, 8) * ph)) < 1e-12);
    }
}

#[test]
fn error_classification_controls() {
    let taus = numeric::default_taus();
    // all baths equal and diagonal: every term commutes, BCH truncation is exact
    let h = build_linear(2).unwrap();
    let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![C::new(1.0, 0.0), C::new(-0.5, 0.0)]));
    let bm = BathModel::uniform(h.labels(), diag).unwrap();
    let seq = BuiltinSequence::LinearElim4.build(2).unwrap();
    let zz = restrict_mqe_example(MqeExample::ZzChain, 2).unwrap();
    let bm_zz = BathModel::uniform(
        zz.labels(),
        DMatrix::from_diagonal(&DVector::from_vec(vec![C::new(1.0, 0.0), C::new(0.3, 0.0)])),
    )
    .unwrap();
    let e = numeric::effective_error(&seq, &zz, &bm_zz, &taus, DEFAULT_CAP).unwrap();
    assert_eq!(e.fit, SlopeFit::Exact, "{:?}", e.points);
    // free evolution against H̄ = H
    let e = numeric::effective_error(&Sequence::free(2), &h, &bm, &taus, DEFAULT_CAP).unwrap();
    assert!(e.points.iter().all(|&(_, err)| err == 0.0));
    assert_eq!(e.fit, SlopeFit::Exact);
    let bm = BathModel::random_for(&h, 2, 11);
    let e = numeric::effective_error(&seq, &h, &bm, &taus, DEFAULT_CAP).unwrap();
    let s = e.fit.slope().unwrap();
    assert!((1.8..=2.2).contains(&s), "{s}");
    assert!(numeric::effective_error(&seq, &h, &bm, &taus[..3], DEFAULT_CAP).is_err());
    let mut rev = taus.clone();
    rev.reverse();
    assert!(numeric::effective_error(&seq, &h, &bm, &rev, DEFAULT_CAP).is_err());
}

#[test]
fn symbolic_average_matches_dense_frames() {
    for seq in builtins() {
        for (name, h) in corpus(seq.n_qubits()) {
            let bm = BathModel::random_for(&h, 2, 3);
            let symbolic = numeric::realize(&seq.average_hamiltonian(&h).unwrap(), &bm, DEFAULT_CAP).unwrap();
            let dense = dense_frame_average(&seq, &h, &bm);
            assert!(op_diff(&symbolic, &dense) < 1e-10, "{} on {name}", seq.name());
        }
    }
}

#[test]
fn corpus_slopes_are_second_order() {
    let taus = numeric::default_taus();
    for seq in builtins() {
        for (name, h) in corpus(seq.n_qubits()) {
            let bm = BathModel::random_for(&h, 2, 21);
            let e = numeric::effective_error(&seq, &h, &bm, &taus, DEFAULT_CAP).unwrap();
            let ok = match e.fit {
                SlopeFit::Exact => true,
                SlopeFit::Slope { slope } => (1.8..=2.2).contains(&slope),
            };
            assert!(ok, "{} on {name}: {:?} {:?}", seq.name(), e.fit, e.points);
        }
    }
}

#[test]
fn dfs_bases_are_annihilated() {
    for (n, dim) in [(2, 1), (3, 0), (4, 2), (6, 5)] {
        let b = numeric::collective_dfs_basis(n).unwrap();
        assert_eq!(b.dim(), dim, "n={n}");
        let s = numeric::collective_operators(n);
        for k in 0..b.dim() {
            let v = b.state(k);
            for m in &s {
                assert!((m * &v).norm() < 1e-10);
            }
        }
        let total: usize = b.sectors.iter().map(|s| s.dim).sum();
        assert_eq!(total, 1 << n);
        let v = &b.vectors;
        assert!(op_diff(&(v.adjoint() * v), &DMatrix::identity(dim, dim)) < 1e-10);
    }
    let s3 = numeric::collective_dfs_basis(3).unwrap();
    assert_eq!(s3.sector(1).unwrap().multiplicity, 2);
}

#[test]
fn group_dfs_matches_joint_eigenspace() {
    let mut cases: Vec<SBHamiltonian> = Vec::new();
    for n in [4, 6] {
        let h = build_hnn(n).unwrap();
        cases.push(seq_mqe8(n).unwrap().average_hamiltonian(&h).unwrap());
        cases.push(seq_mqe16_qx(n).unwrap().average_hamiltonian(&h).unwrap());
    }
    cases.push(restrict_mqe_example(MqeExample::ZzChain, 5).unwrap());
    for h in cases {
        let g = ErrorGroup::from_hamiltonian(&h);
        let d = g.dfs_dimension().unwrap().unwrap() as usize;
        assert_eq!(d, numeric::max_joint_eigenspace_dim(h.n_qubits(), g.generators()).unwrap());
        assert_eq!(d << g.order_log2().unwrap(), 1 << h.n_qubits());
    }
}

#[test]
fn collective_hamiltonian_does_not_leak() {
    for n in [2, 4] {
        let h = collective_hamiltonian(n);
        let b = numeric::collective_dfs_basis(n).unwrap();
        let bm = BathModel::random_for(&h, 2, 4);
        for tau in [1.0, 0.1, 0.01] {
            for k in 0..b.dim() {
                let l = numeric::leakage(&Sequence::free(n), &h, &bm, tau, 3, &b.vectors, &b.state(k), DEFAULT_CAP)
                    .unwrap();
                assert!(l <= 1e-10, "n={n} tau={tau} leak={l}");
            }
        }
    }
}

#[test]
fn leakage_shrinks_with_tau() {
    let h = build_linear(4).unwrap();
    let seq = BuiltinSequence::Collective6.build(4).unwrap();
    let b = numeric::collective_dfs_basis(4).unwrap();
    let bm = BathModel::random_for(&h, 2, 8);
    let l: Vec<f64> = numeric::default_taus()
        .iter()
        .map(|&t| numeric::leakage(&seq, &h, &bm, t, 1, &b.vectors, &b.state(0), DEFAULT_CAP).unwrap())
        .collect();
    assert!(l.windows(2).all(|w| w[1] < w[0]), "{l:?}");
    assert!(l.iter().all(|x| (0.0..=1.0).contains(x)));
    let short = DVector::from_element(3, C::new(1.0, 0.0));
    assert!(numeric::leakage(&seq, &h, &bm, 0.1, 1, &b.vectors, &short, DEFAULT_CAP).is_err());
}

#[test]
fn sweep_is_reproducible_and_ordered() {
    let h = build_linear(4).unwrap();
    let seq = BuiltinSequence::Collective6.build(4).unwrap();
    let taus = numeric::default_taus();
    let a = numeric::sweep(&seq, &h, 2, 100, 3, &taus, DEFAULT_CAP).unwrap();
    let b = numeric::sweep(&seq, &h, 2, 100, 3, &taus, DEFAULT_CAP).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 15);
    assert_eq!(a.iter().map(|r| r.seed).collect::<Vec<_>>()[..6], [100, 100, 100, 100, 100, 101]);
    let _ = rational(1, 1);
}

#[test]
fn cap_is_enforced() {
    let h = build_linear(4).unwrap();
    let bm = BathModel::random_for(&h, 4, 0);
    assert!(matches!(numeric::realize(&h, &bm, 32), Err(bbsym::Error::DimensionCap { dim: 64, cap: 32 })));
}
