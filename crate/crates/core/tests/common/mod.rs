#![allow(dead_code)]

use bbsym::bath::rational;
use bbsym::numeric::{self, BathModel, DenseOperator};
use bbsym::{BathVector, Event, InteractionTerm, Pauli, PauliString, SBHamiltonian, Sequence};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C = Complex64;

pub fn p(s: &str) -> PauliString {
    s.parse().unwrap()
}

pub fn p_n(s: &str, n: usize) -> PauliString {
    PauliString::parse(s, n).unwrap()
}

pub fn textbook(op: char) -> [[C; 2]; 2] {
    let (o, l, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    match op {
        'I' => [[l, o], [o, l]],
        'X' => [[o, l], [l, o]],
        'Y' => [[o, -i], [i, o]],
        'Z' => [[l, o], [o, -l]],
        _ => panic!("bad op {op}"),
    }
}

/// Hand-rolled Kronecker product, independent of the library's bit tricks.
pub fn kron(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![C::new(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn scale(a: &[Vec<C>], s: C) -> Vec<Vec<C>> {
    a.iter().map(|r| r.iter().map(|z| z * s).collect()).collect()
}

pub fn max_diff(a: &[Vec<C>], b: &[Vec<C>]) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

/// Dense matrix of a phaseless symbol string like `"XYZ"`.
pub fn dense(symbols: &str) -> Vec<Vec<C>> {
    let mut acc = vec![vec![C::new(1.0, 0.0)]];
    for ch in symbols.chars() {
        let m: Vec<Vec<C>> = textbook(ch).iter().map(|r| r.to_vec()).collect();
        acc = kron(&acc, &m);
    }
    acc
}

pub fn phase_value(p: &PauliString) -> C {
    [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)][p.phase().exponent() as usize]
}

/// Full dense matrix of a Pauli string including its phase.
pub fn dense_pauli(p: &PauliString) -> Vec<Vec<C>> {
    scale(&dense(&p.symbols()), phase_value(p))
}

pub fn to_nalgebra(a: &[Vec<C>]) -> DenseOperator {
    DMatrix::from_fn(a.len(), a.len(), |i, j| a[i][j])
}

pub fn op_diff(a: &DenseOperator, b: &DenseOperator) -> f64 {
    numeric::op_norm(&(a - b))
}

/// `Σ_α S^α ⊗ B_α`: every qubit couples to the same three bath operators.
pub fn collective_hamiltonian(n: usize) -> SBHamiltonian {
    let mut terms = Vec::new();
    for q in 0..n {
        for a in Pauli::AXES {
            terms.push(InteractionTerm::new(
                PauliString::single(n, q, a),
                BathVector::label(format!("S{}", a.axis_name())),
            ));
        }
    }
    SBHamiltonian::canonicalize(terms, n).unwrap()
}

/// Toggling-frame average computed from realized unitaries rather than
/// tableaus: `Σ_k w_k F_k† H F_k / W`, with `F_k` the product of every pulse
/// preceding segment `k` in time.
pub fn dense_frame_average(seq: &Sequence, h: &SBHamiltonian, bm: &BathModel) -> DenseOperator {
    let hm = numeric::realize(h, bm, numeric::DEFAULT_CAP).unwrap();
    let dim = hm.nrows();
    let mut frame = DMatrix::<C>::identity(dim, dim);
    let mut acc = DMatrix::<C>::zeros(dim, dim);
    let mut total = 0.0;
    for e in seq.time_order() {
        match e {
            Event::Apply(pl) => {
                frame = numeric::realize_pulse(pl, bm.bath_dim(), numeric::DEFAULT_CAP).unwrap() * frame;
            }
            Event::Evolve(w) => {
                let w = numeric::rational_to_f64(w);
                acc += (frame.adjoint() * &hm * &frame) * C::new(w, 0.0);
                total += w;
            }
        }
    }
    acc / C::new(total, 0.0)
}

pub fn one() -> bbsym::Rational {
    rational(1, 1)
}
