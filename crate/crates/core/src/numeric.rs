//! Dense-matrix oracle for the symbolic engine.
//!
//! Formal bath labels are instantiated as Hermitian matrices on one shared
//! bath space, pulses as their generating unitaries, and a full cycle is
//! simulated exactly. Comparing against `exp(-i W τ H̄)` measures how well
//! the first-order average describes the real propagator.
//!
//! Basis convention: qubit 1 is the most significant tensor factor, and the
//! bath is the last factor (`system ⊗ bath`).

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_PI_4;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::bath::{BathVector, Rational, SBHamiltonian};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::pulse::{Gate, Pulse, Tableau};
use crate::sequence::{Event, Sequence};

pub type DenseOperator = DMatrix<Complex64>;

/// Default cap on the total Hilbert-space dimension (`2^N · bath_dim`).
pub const DEFAULT_CAP: usize = 4096;
/// Sweep points with error below this are treated as numerical noise.
pub const ERROR_FLOOR: f64 = 1e-12;
/// Leakage is a probability (squared amplitude), so its floor is squared.
pub const LEAKAGE_FLOOR: f64 = ERROR_FLOOR * ERROR_FLOOR;
const HERMITIAN_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

fn system_dim(n: usize) -> Result<usize> {
    if n >= 31 {
        return Err(Error::DimensionCap { dim: usize::MAX, cap: DEFAULT_CAP });
    }
    Ok(1usize << n)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Dense matrix of a Pauli string (no cap check; callers bound `n`).
pub fn pauli_matrix(p: &PauliString) -> DenseOperator {
    let n = p.n_qubits();
    let dim = 1usize << n;
    let (mut xm, mut zm) = (0usize, 0usize);
    for q in 0..n {
        let b = 1usize << (n - 1 - q);
        if p.x_bit(q) {
            xm |= b;
        }
        if p.z_bit(q) {
            zm |= b;
        }
    }
    let e = (p.phase().exponent() as u32 + (xm & zm).count_ones()) % 4;
    let base = [c(1.0), Complex64::i(), c(-1.0), -Complex64::i()][e as usize];
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let s = if (zm & col).count_ones() % 2 == 1 { -base } else { base };
        m[(col ^ xm, col)] = s;
    }
    m
}

pub fn hermiticity_defect(a: &DenseOperator) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn op_norm(a: &DenseOperator) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// Eigendecomposition of a Hermitian matrix.
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: DenseOperator,
}

impl HermitianEigen {
    pub fn new(a: &DenseOperator) -> Result<Self> {
        let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let defect = hermiticity_defect(a);
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(defect));
        }
        let sym = (a + a.adjoint()) * c(0.5);
        let eig = SymmetricEigen::new(sym);
        Ok(HermitianEigen { values: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    /// `exp(-i t A)`.
    pub fn propagator(&self, t: f64) -> DenseOperator {
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, -lam * t);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= ph;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// `exp(-i t A)` for Hermitian `A`.
pub fn expm_hermitian(a: &DenseOperator, t: f64) -> Result<DenseOperator> {
    Ok(HermitianEigen::new(a)?.propagator(t))
}

/// Concrete Hermitian matrices for the formal bath labels, all acting on a
/// single shared bath space.
#[derive(Clone, Debug)]
pub struct BathModel {
    bath_dim: usize,
    assignment: BTreeMap<String, DenseOperator>,
    seed: Option<u64>,
}

impl BathModel {
    /// Independent random Hermitian matrices: standard complex normal
    /// entries, symmetrized, scaled to unit operator norm. Labels are drawn
    /// in sorted order so the result depends only on the label set and seed.
    pub fn random<I, S>(labels: I, bath_dim: usize, seed: u64) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
        let mut assignment = BTreeMap::new();
        for l in labels {
            let m = DMatrix::from_fn(bath_dim, bath_dim, |_, _| {
                Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
            });
            let mut h = (&m + m.adjoint()) * c(0.5);
            let norm = op_norm(&h);
            if norm > 0.0 {
                h *= c(1.0 / norm);
            }
            assignment.insert(l, h);
        }
        BathModel { bath_dim, assignment, seed: Some(seed) }
    }

    pub fn random_for(h: &SBHamiltonian, bath_dim: usize, seed: u64) -> Self {
        Self::random(h.labels(), bath_dim, seed)
    }

    /// Explicit matrices, symmetrized on the way in.
    pub fn from_matrices(bath_dim: usize, matrices: BTreeMap<String, DenseOperator>) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for (k, m) in matrices {
            if m.nrows() != bath_dim || m.ncols() != bath_dim {
                return Err(Error::InvalidArgument(format!(
                    "bath matrix {k} is {}x{}, expected {bath_dim}x{bath_dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            assignment.insert(k, (&m + m.adjoint()) * c(0.5));
        }
        Ok(BathModel { bath_dim, assignment, seed: None })
    }

    /// Every label mapped to the same matrix.
    pub fn uniform<I, S>(labels: I, matrix: DenseOperator) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let d = matrix.nrows();
        Self::from_matrices(d, labels.into_iter().map(|l| (l.into(), matrix.clone())).collect())
    }

    pub fn bath_dim(&self) -> usize {
        self.bath_dim
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn get(&self, label: &str) -> Option<&DenseOperator> {
        self.assignment.get(label)
    }

    pub fn combine(&self, v: &BathVector) -> Result<DenseOperator> {
        let mut acc = DMatrix::zeros(self.bath_dim, self.bath_dim);
        for (label, coeff) in v.iter() {
            let m = self.assignment.get(label).ok_or_else(|| Error::MissingBathLabel(label.clone()))?;
            acc += m * c(rational_to_f64(coeff));
        }
        Ok(acc)
    }
}

/// `Σ_terms P ⊗ (Σ_labels c · B_label)`.
pub fn realize(h: &SBHamiltonian, bm: &BathModel, cap: usize) -> Result<DenseOperator> {
    let dim =
        system_dim(h.n_qubits())?.checked_mul(bm.bath_dim()).ok_or(Error::DimensionCap { dim: usize::MAX, cap })?;
    check_cap(dim, cap)?;
    let mut acc = DMatrix::zeros(dim, dim);
    for (p, b) in h.terms() {
        let bath = bm.combine(b)?;
        acc += pauli_matrix(p).kronecker(&bath);
    }
    Ok(acc)
}

/// `Σ_α σ_i^α σ_j^α` on `n` qubits.
pub fn exchange_hamiltonian(i: usize, j: usize, n: usize) -> DenseOperator {
    let dim = 1usize << n;
    let mut acc = DMatrix::zeros(dim, dim);
    for a in Pauli::AXES {
        acc += pauli_matrix(&PauliString::on_qubits(n, [i, j], a));
    }
    acc
}

/// A unitary whose conjugation action `U† A U` matches the tableau. Built
/// column by column: `U†|a⟩ = T(X^a) φ` with `φ` the joint +1 eigenvector of
/// every `T(Z_q)`.
pub fn synthesize_clifford(t: &Tableau) -> Result<DenseOperator> {
    let n = t.n_qubits();
    let dim = system_dim(n)?;
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut proj = id.clone();
    for q in 0..n {
        proj = proj * (&id + pauli_matrix(t.z_image(q))) * c(0.5);
    }
    let (best, _) = (0..dim).map(|k| (k, proj.column(k).norm())).fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
    let phi = proj.column(best).into_owned();
    let phi = &phi / c(phi.norm());
    let x_imgs: Vec<DenseOperator> = (0..n).map(|q| pauli_matrix(t.x_image(q))).collect();
    let mut v = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        let mut col = phi.clone();
        for (q, xm) in x_imgs.iter().enumerate() {
            if a >> (n - 1 - q) & 1 == 1 {
                col = xm * col;
            }
        }
        v.set_column(a, &col);
    }
    Ok(v.adjoint())
}

/// System unitary of one gate.
pub fn realize_gate(g: &Gate, n: usize) -> Result<DenseOperator> {
    match g {
        Gate::Pauli(p) => Ok(pauli_matrix(p)),
        Gate::Exchange { i, j, dagger } => {
            let t = if *dagger { -FRAC_PI_4 } else { FRAC_PI_4 };
            expm_hermitian(&exchange_hamiltonian(*i, *j, n), t)
        }
        Gate::Custom(t) => synthesize_clifford(t),
    }
}

/// `U_pulse ⊗ I_bath`.
pub fn realize_pulse(p: &Pulse, bath_dim: usize, cap: usize) -> Result<DenseOperator> {
    let n = p.n_qubits();
    let sdim = system_dim(n)?;
    check_cap(sdim * bath_dim, cap)?;
    let mut u = DMatrix::<Complex64>::identity(sdim, sdim);
    for g in p.gates() {
        u *= realize_gate(g, n)?;
    }
    if bath_dim == 1 {
        Ok(u)
    } else {
        Ok(u.kronecker(&DMatrix::identity(bath_dim, bath_dim)))
    }
}

/// Cached pieces for repeated cycle simulation at different τ.
pub struct CycleSimulator {
    steps: Vec<Step>,
    eigen: HermitianEigen,
    effective: HermitianEigen,
    total_weight: f64,
    pulse_phase: Complex64,
    dim: usize,
}

enum Step {
    Pulse(DenseOperator),
    Evolve(f64),
}

impl CycleSimulator {
    pub fn new(seq: &Sequence, h: &SBHamiltonian, bm: &BathModel, cap: usize) -> Result<Self> {
        if seq.n_qubits() != h.n_qubits() {
            return Err(Error::DimensionMismatch { left: seq.n_qubits(), right: h.n_qubits() });
        }
        let hm = realize(h, bm, cap)?;
        let dim = hm.nrows();
        let hbar = seq.average_hamiltonian(h)?;
        let effective = HermitianEigen::new(&realize(&hbar, bm, cap)?)?;
        let mut steps = Vec::new();
        let sdim = system_dim(seq.n_qubits())?;
        let mut pulse_product = DMatrix::<Complex64>::identity(sdim, sdim);
        for e in seq.time_order() {
            match e {
                Event::Apply(p) => {
                    let sys = realize_pulse(p, 1, cap)?;
                    pulse_product = &sys * pulse_product;
                    steps.push(Step::Pulse(if bm.bath_dim() == 1 {
                        sys
                    } else {
                        sys.kronecker(&DMatrix::identity(bm.bath_dim(), bm.bath_dim()))
                    }));
                }
                Event::Evolve(w) => steps.push(Step::Evolve(rational_to_f64(w))),
            }
        }
        let pulse_phase = pulse_product.trace() / c(sdim as f64);
        Ok(CycleSimulator {
            steps,
            eigen: HermitianEigen::new(&hm)?,
            effective,
            total_weight: rational_to_f64(&seq.total_weight()),
            pulse_phase,
            dim,
        })
    }

    /// Global phase `c` with `Π pulses = c · I`.
    pub fn pulse_phase(&self) -> Complex64 {
        self.pulse_phase
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Exact ordered product of pulse unitaries and segment propagators.
    pub fn raw_cycle(&self, tau: f64) -> DenseOperator {
        let mut u = DMatrix::<Complex64>::identity(self.dim, self.dim);
        for s in &self.steps {
            u = match s {
                Step::Pulse(p) => p * u,
                Step::Evolve(w) => self.eigen.propagator(w * tau) * u,
            };
        }
        u
    }

    /// Cycle propagator with the pulses' global phase divided out.
    pub fn cycle(&self, tau: f64) -> DenseOperator {
        self.raw_cycle(tau) / self.pulse_phase
    }

    /// `exp(-i W τ H̄)`.
    pub fn effective(&self, tau: f64) -> DenseOperator {
        self.effective.propagator(self.total_weight * tau)
    }

    /// Free evolution under the unsymmetrized Hamiltonian for the cycle
    /// duration `W τ`.
    pub fn free(&self, tau: f64) -> DenseOperator {
        self.eigen.propagator(self.total_weight * tau)
    }

    pub fn norm_error(&self, tau: f64) -> f64 {
        op_norm(&(self.cycle(tau) - self.effective(tau)))
    }
}

pub fn simulate_cycle(
    seq: &Sequence,
    h: &SBHamiltonian,
    bm: &BathModel,
    tau: f64,
    cap: usize,
) -> Result<DenseOperator> {
    if tau.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    Ok(CycleSimulator::new(seq, h, bm, cap)?.raw_cycle(tau))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SlopeFit {
    Slope { slope: f64 },
    Exact,
}

impl SlopeFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            SlopeFit::Slope { slope } => Some(*slope),
            SlopeFit::Exact => None,
        }
    }
}

/// Least-squares slope of `log y` against `log x` over points with
/// `y >= floor`; `None` when fewer than two remain.
pub fn fit_loglog_slope(points: &[(f64, f64)], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(_, y)| *y >= floor).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn classify(points: &[(f64, f64)], floor: f64) -> SlopeFit {
    match fit_loglog_slope(points, floor) {
        Some(slope) => SlopeFit::Slope { slope },
        None => SlopeFit::Exact,
    }
}

fn check_taus(taus: &[f64]) -> Result<()> {
    if taus.len() < 4 {
        return Err(Error::InvalidArgument("need at least 4 tau values".into()));
    }
    if taus.iter().any(|t| t.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater))
        || taus.windows(2).any(|w| w[0] <= w[1])
    {
        return Err(Error::InvalidArgument("tau values must be positive and strictly descending".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffectiveError {
    pub points: Vec<(f64, f64)>,
    pub fit: SlopeFit,
}

/// `‖U_cycle(τ) − exp(−i W τ H̄)‖` over a descending τ list, with fitted
/// log-log slope.
pub fn effective_error(
    seq: &Sequence,
    h: &SBHamiltonian,
    bm: &BathModel,
    taus: &[f64],
    cap: usize,
) -> Result<EffectiveError> {
    check_taus(taus)?;
    let sim = CycleSimulator::new(seq, h, bm, cap)?;
    let points: Vec<(f64, f64)> = taus.par_iter().map(|&t| (t, sim.norm_error(t))).collect();
    let fit = classify(&points, ERROR_FLOOR);
    Ok(EffectiveError { points, fit })
}

/// `10^-1, 10^-1.5, ..., 10^-3`.
pub fn default_taus() -> Vec<f64> {
    (0..5).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect()
}

/// Collective spin operators `S^α = Σ_q σ_q^α`.
pub fn collective_operators(n: usize) -> [DenseOperator; 3] {
    Pauli::AXES.map(|a| {
        let dim = 1usize << n;
        let mut acc = DMatrix::zeros(dim, dim);
        for q in 0..n {
            acc += pauli_matrix(&PauliString::single(n, q, a));
        }
        acc
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinSector {
    /// `2s`
    pub twice_spin: usize,
    /// Dimension of the eigenspace of total `S²` with spin `s`.
    pub dim: usize,
    /// Number of spin-`s` irreps, `dim / (2s + 1)`.
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct DfsBasis {
    pub n: usize,
    /// Orthonormal columns spanning the joint null space of `S^x, S^y, S^z`.
    pub vectors: DenseOperator,
    pub sectors: Vec<SpinSector>,
}

impl DfsBasis {
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn sector(&self, twice_spin: usize) -> Option<&SpinSector> {
        self.sectors.iter().find(|s| s.twice_spin == twice_spin)
    }

    pub fn state(&self, k: usize) -> DVector<Complex64> {
        self.vectors.column(k).into_owned()
    }
}

/// Joint null space of the collective spin operators, plus the total-spin
/// sector decomposition (which exposes noiseless subsystems for odd `n`).
pub fn collective_dfs_basis(n: usize) -> Result<DfsBasis> {
    if n < 2 {
        return Err(Error::InvalidArgument("collective DFS needs n >= 2".into()));
    }
    check_cap(system_dim(n)?, DEFAULT_CAP)?;
    let s = collective_operators(n);
    let s2 = s.iter().map(|m| m * m).fold(DMatrix::zeros(1 << n, 1 << n), |a, b| a + b);
    let eig = HermitianEigen::new(&s2)?;
    // S² eigenvalues are 4 s (s + 1) in Pauli units.
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut null_cols = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        let s = (-1.0 + (1.0 + lam.max(0.0)).sqrt()) / 2.0;
        let twice = (2.0 * s).round() as usize;
        *counts.entry(twice).or_default() += 1;
        if twice == 0 {
            null_cols.push(eig.vectors.column(k).into_owned());
        }
    }
    let vectors = if null_cols.is_empty() { DMatrix::zeros(1 << n, 0) } else { DMatrix::from_columns(&null_cols) };
    let sectors = counts
        .into_iter()
        .map(|(twice_spin, dim)| SpinSector { twice_spin, dim, multiplicity: dim / (twice_spin + 1) })
        .collect();
    Ok(DfsBasis { n, vectors, sectors })
}

/// Tensor product of per-block collective DFS bases.
pub fn block_dfs_basis(n: usize, block: usize) -> Result<DenseOperator> {
    if block < 2 || !n.is_multiple_of(block) {
        return Err(Error::InvalidArgument(format!("{n} qubits do not split into blocks of {block}")));
    }
    let b = collective_dfs_basis(block)?.vectors;
    let mut acc = DMatrix::from_element(1, 1, c(1.0));
    for _ in 0..n / block {
        acc = acc.kronecker(&b);
    }
    Ok(acc)
}

/// Probability of leaving span(`basis`) ⊗ bath after applying `u` to
/// `state ⊗ |0⟩_bath`.
pub fn leakage_of(u: &DenseOperator, basis: &DenseOperator, state: &DVector<Complex64>) -> Result<f64> {
    let sdim = basis.nrows();
    if state.len() != sdim || !u.nrows().is_multiple_of(sdim) {
        return Err(Error::InvalidArgument("state, basis and propagator dimensions disagree".into()));
    }
    let bdim = u.nrows() / sdim;
    let mut bath0 = DVector::zeros(bdim);
    bath0[0] = c(1.0);
    let psi0 = state.kronecker(&bath0);
    let psi = u * psi0;
    // row-major reshape: index = s * bdim + b
    let m = DMatrix::from_fn(sdim, bdim, |s, b| psi[s * bdim + b]);
    let inside = basis * (basis.adjoint() * &m);
    Ok((m - inside).norm_squared())
}

/// Leakage out of the DFS after `n_cycles` repetitions of the cycle.
#[allow(clippy::too_many_arguments)]
pub fn leakage(
    seq: &Sequence,
    h: &SBHamiltonian,
    bm: &BathModel,
    tau: f64,
    n_cycles: usize,
    basis: &DenseOperator,
    state: &DVector<Complex64>,
    cap: usize,
) -> Result<f64> {
    let sim = CycleSimulator::new(seq, h, bm, cap)?;
    let one = sim.cycle(tau);
    let mut u = DMatrix::identity(one.nrows(), one.ncols());
    for _ in 0..n_cycles {
        u = &one * u;
    }
    leakage_of(&u, basis, state)
}

/// Largest joint eigenspace of commuting Pauli generators, by dense
/// projectors `Π_k (I + s_k G_k)/2` over every sign pattern.
pub fn max_joint_eigenspace_dim(n: usize, generators: &[PauliString]) -> Result<usize> {
    let dim = system_dim(n)?;
    check_cap(dim, DEFAULT_CAP)?;
    let mats: Vec<DenseOperator> = generators.iter().map(|g| pauli_matrix(&g.phaseless())).collect();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut best = 0usize;
    for signs in 0..(1usize << mats.len()) {
        let mut proj = id.clone();
        for (k, m) in mats.iter().enumerate() {
            let s = if signs >> k & 1 == 1 { -1.0 } else { 1.0 };
            proj = proj * (&id + m * c(s)) * c(0.5);
        }
        best = best.max(proj.trace().re.round() as usize);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub tau: f64,
    pub norm_error: f64,
    pub leakage_sym: f64,
    pub leakage_unsym: f64,
    pub seed: u64,
}

/// DFS used for sweep leakage: blocks of four when `n` allows, otherwise the
/// global collective null space, otherwise none.
pub fn sweep_dfs(n: usize) -> Option<DenseOperator> {
    if n.is_multiple_of(4) && n > 0 {
        return block_dfs_basis(n, 4).ok();
    }
    collective_dfs_basis(n).ok().map(|b| b.vectors).filter(|v| v.ncols() > 0)
}

/// τ sweep over `replicas` random baths with seeds `base_seed + r`. Rows are
/// ordered by replica, then τ.
pub fn sweep(
    seq: &Sequence,
    h: &SBHamiltonian,
    bath_dim: usize,
    base_seed: u64,
    replicas: usize,
    taus: &[f64],
    cap: usize,
) -> Result<Vec<SweepRow>> {
    check_taus(taus)?;
    let dfs = sweep_dfs(seq.n_qubits());
    let per_replica: Vec<Vec<SweepRow>> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let seed = base_seed + r;
            let bm = BathModel::random_for(h, bath_dim, seed);
            let sim = CycleSimulator::new(seq, h, &bm, cap)?;
            taus.iter()
                .map(|&tau| {
                    let (ls, lu) = match &dfs {
                        Some(v) => {
                            let st = v.column(0).into_owned();
                            (leakage_of(&sim.cycle(tau), v, &st)?, leakage_of(&sim.free(tau), v, &st)?)
                        }
                        None => (f64::NAN, f64::NAN),
                    };
                    Ok(SweepRow { tau, norm_error: sim.norm_error(tau), leakage_sym: ls, leakage_unsym: lu, seed })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_replica.into_iter().flatten().collect())
}

/// Slopes of `norm_error`, `leakage_sym` and `leakage_unsym` per seed.
pub fn sweep_fits(rows: &[SweepRow]) -> BTreeMap<u64, [SlopeFit; 3]> {
    let mut by_seed: BTreeMap<u64, Vec<&SweepRow>> = BTreeMap::new();
    for r in rows {
        by_seed.entry(r.seed).or_default().push(r);
    }
    by_seed
        .into_iter()
        .map(|(seed, rs)| {
            let pts = |f: fn(&SweepRow) -> f64| -> Vec<(f64, f64)> {
                rs.iter().map(|r| (r.tau, f(r))).filter(|p| p.1.is_finite()).collect()
            };
            (
                seed,
                [
                    classify(&pts(|r| r.norm_error), ERROR_FLOOR),
                    classify(&pts(|r| r.leakage_sym), LEAKAGE_FLOOR),
                    classify(&pts(|r| r.leakage_unsym), LEAKAGE_FLOOR),
                ],
            )
        })
        .collect()
}
