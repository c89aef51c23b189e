//! Pulse sequences and first-order (toggling-frame) average Hamiltonians.
//!
//! Events are stored in bracket notation: the LAST element acts FIRST, so
//! `[τ, X, τ, X]` means "pulse X, wait τ, pulse X, wait τ". A free-evolution
//! segment preceded (in time) by pulses with cumulative operator `F` evolves
//! under `F† H F`, and the average Hamiltonian is the weight-averaged sum of
//! those frame Hamiltonians.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::bath::{Rational, SBHamiltonian};
use crate::error::{Error, Result};
use crate::pauli::Pauli;
use crate::pulse::{self, conjugate_by_tableau, Pulse, Tableau};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Apply(Pulse),
    Evolve(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub tableau: Tableau,
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    name: String,
    n: usize,
    events: Vec<Event>,
}

impl Sequence {
    /// Validates pulse sizes, weights and cycle closure.
    pub fn new(name: impl Into<String>, n: usize, events: Vec<Event>) -> Result<Sequence> {
        let s = Sequence { name: name.into(), n, events };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        for e in &self.events {
            match e {
                Event::Apply(p) if p.n_qubits() != self.n => {
                    return Err(Error::DimensionMismatch { left: self.n, right: p.n_qubits() })
                }
                Event::Evolve(w) if !w.is_positive() => return Err(Error::NonPositiveWeight),
                _ => {}
            }
        }
        if !self.total_weight().is_positive() {
            return Err(Error::NonPositiveWeight);
        }
        let residual = self.net_action()?;
        if !residual.is_identity() {
            return Err(Error::CycleNotClosed { residual: residual.describe_nontrivial() });
        }
        Ok(())
    }

    /// A single free-evolution segment of unit weight.
    pub fn free(n: usize) -> Sequence {
        Sequence { name: "free".into(), n, events: vec![Event::Evolve(Rational::one())] }
    }

    /// Parity-kick cycle `[τ, P, τ, P]` for a self-inverse pulse.
    pub fn parity_kick(p: &Pulse) -> Result<Sequence> {
        if !p.is_involution() {
            return Err(Error::NotInvolution(p.name().to_string()));
        }
        Sequence::new(
            format!("parity_kick({})", p.name()),
            p.n_qubits(),
            vec![
                Event::Evolve(Rational::one()),
                Event::Apply(p.clone()),
                Event::Evolve(Rational::one()),
                Event::Apply(p.clone()),
            ],
        )
    }

    /// `U_inner · P† · U_inner · P`, with adjacent Pauli pulses merged into
    /// one pulse.
    pub fn nest(&self, p: &Pulse) -> Result<Sequence> {
        if p.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p.n_qubits() });
        }
        let mut events = self.events.clone();
        events.push(Event::Apply(p.dagger()));
        events.extend(self.events.iter().cloned());
        events.push(Event::Apply(p.clone()));
        Sequence::new(self.name.clone(), self.n, merge_pauli_neighbors(events)?)
    }

    /// Operator product `self · rhs`: `rhs` runs first.
    pub fn then_before(&self, rhs: &Sequence) -> Result<Sequence> {
        let mut events = self.events.clone();
        events.extend(rhs.events.iter().cloned());
        Sequence::new(self.name.clone(), self.n, events)
    }

    pub fn with_weights_scaled(&self, s: &Rational) -> Result<Sequence> {
        let events = self
            .events
            .iter()
            .map(|e| match e {
                Event::Evolve(w) => Event::Evolve(w * s),
                other => other.clone(),
            })
            .collect();
        Sequence::new(self.name.clone(), self.n, events)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Sequence {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Events in bracket order (last acts first).
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Events in operational time order.
    pub fn time_order(&self) -> impl Iterator<Item = &Event> {
        self.events.iter().rev()
    }

    pub fn pulse_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Apply(_))).count()
    }

    pub fn evolve_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Evolve(_))).count()
    }

    pub fn total_weight(&self) -> Rational {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Evolve(w) => Some(w.clone()),
                _ => None,
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Conjugation action of the product of all pulses.
    pub fn net_action(&self) -> Result<Tableau> {
        let mut f = Tableau::identity(self.n);
        for e in self.time_order() {
            if let Event::Apply(p) = e {
                f = p.tableau().then_before(&f)?;
            }
        }
        Ok(f)
    }

    /// Cumulative frame for every free-evolution segment, listed in bracket
    /// order.
    pub fn toggling_frames(&self) -> Result<Vec<Frame>> {
        let mut f = Tableau::identity(self.n);
        let mut frames = Vec::with_capacity(self.evolve_count());
        for e in self.time_order() {
            match e {
                Event::Apply(p) => f = p.tableau().then_before(&f)?,
                Event::Evolve(w) => frames.push(Frame { tableau: f.clone(), weight: w.clone() }),
            }
        }
        if !f.is_identity() {
            return Err(Error::CycleNotClosed { residual: f.describe_nontrivial() });
        }
        frames.reverse();
        Ok(frames)
    }

    /// `H̄ = Σ_k w_k F_k† H F_k / Σ_k w_k`.
    pub fn average_hamiltonian(&self, h: &SBHamiltonian) -> Result<SBHamiltonian> {
        if h.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: h.n_qubits() });
        }
        let frames = self.toggling_frames()?;
        let total = self.total_weight();
        let parts: Vec<SBHamiltonian> = frames
            .par_iter()
            .map(|fr| conjugate_by_tableau(&fr.tableau, h).map(|c| c.scaled(&(&fr.weight / &total))))
            .collect::<Result<_>>()?;
        let mut acc = SBHamiltonian::empty(self.n);
        for part in &parts {
            acc = acc.sum(part)?;
        }
        Ok(acc)
    }

    /// Pulse list in bracket order, e.g. `[τ, X, τ, X]`.
    pub fn notation(&self) -> String {
        let items: Vec<String> = self
            .events
            .iter()
            .map(|e| match e {
                Event::Apply(p) => p.name().to_string(),
                Event::Evolve(w) if w.is_one() => "τ".to_string(),
                Event::Evolve(w) => format!("{w}τ"),
            })
            .collect();
        format!("[{}]", items.join(", "))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name, self.notation())
    }
}

fn merge_pauli_neighbors(events: Vec<Event>) -> Result<Vec<Event>> {
    let mut out: Vec<Event> = Vec::with_capacity(events.len());
    for e in events {
        if let (Some(Event::Apply(prev)), Event::Apply(next)) = (out.last(), &e) {
            if prev.as_pauli().is_some() && next.as_pauli().is_some() {
                let merged = prev.times(next)?;
                *out.last_mut().expect("nonempty") = Event::Apply(merged);
                continue;
            }
        }
        out.push(e);
    }
    Ok(out)
}

/// `(H + P† H P) / 2` for a self-inverse pulse.
pub fn parity_kick(h: &SBHamiltonian, p: &Pulse) -> Result<SBHamiltonian> {
    if !p.is_involution() {
        return Err(Error::NotInvolution(p.name().to_string()));
    }
    let half = Rational::new(1.into(), 2.into());
    h.sum(&p.conjugate(h)?).map(|s| s.scaled(&half))
}

/// Which first-order identity each built-in sequence targets.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BuiltinSequence {
    LinearElim4,
    Mqe8,
    Mqe16Qx,
    FullElim16,
    Collective6,
    Collective14,
}

impl BuiltinSequence {
    pub const ALL: [BuiltinSequence; 6] = [
        BuiltinSequence::LinearElim4,
        BuiltinSequence::Mqe8,
        BuiltinSequence::Mqe16Qx,
        BuiltinSequence::FullElim16,
        BuiltinSequence::Collective6,
        BuiltinSequence::Collective14,
    ];

    pub fn key(self) -> &'static str {
        match self {
            BuiltinSequence::LinearElim4 => "linear_elim4",
            BuiltinSequence::Mqe8 => "mqe8",
            BuiltinSequence::Mqe16Qx => "mqe16_qx",
            BuiltinSequence::FullElim16 => "full_elim16",
            BuiltinSequence::Collective6 => "collective6",
            BuiltinSequence::Collective14 => "collective14",
        }
    }

    pub fn from_key(s: &str) -> Option<BuiltinSequence> {
        BuiltinSequence::ALL.into_iter().find(|b| b.key() == s)
    }

    pub fn expected_pulses(self) -> usize {
        match self {
            BuiltinSequence::LinearElim4 => 4,
            BuiltinSequence::Mqe8 => 8,
            BuiltinSequence::Mqe16Qx | BuiltinSequence::FullElim16 => 16,
            BuiltinSequence::Collective6 => 6,
            BuiltinSequence::Collective14 => 14,
        }
    }

    /// Hamiltonian builder the sequence is designed for (`linear` or `hnn`).
    pub fn target_hamiltonian(self) -> &'static str {
        match self {
            BuiltinSequence::LinearElim4 | BuiltinSequence::Collective6 | BuiltinSequence::Collective14 => "linear",
            _ => "hnn",
        }
    }

    pub fn build(self, n: usize) -> Result<Sequence> {
        match self {
            BuiltinSequence::LinearElim4 => seq_linear_elim4(n),
            BuiltinSequence::Mqe8 => seq_mqe8(n),
            BuiltinSequence::Mqe16Qx => seq_mqe16_qx(n),
            BuiltinSequence::FullElim16 => seq_full_elim16(n),
            BuiltinSequence::Collective6 => seq_collective6(n),
            BuiltinSequence::Collective14 => {
                if n != 3 {
                    return Err(Error::InvalidArgument(format!("collective14 acts on exactly 3 qubits, got {n}")));
                }
                seq_collective14_block3()
            }
        }
    }
}

fn even(n: usize, what: &str) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("{what} needs an even qubit count >= 2, got {n}")));
    }
    Ok(())
}

/// `U'' = U'(Z U' Z)` with `U' = U(X U X)`, merged to `[τ, X, τ, Y, τ, X, τ, Y]`:
/// removes every linear term.
pub fn seq_linear_elim4(n: usize) -> Result<Sequence> {
    Ok(Sequence::free(n)
        .nest(&pulse::collective(Pauli::X, n)?)?
        .nest(&pulse::collective(Pauli::Z, n)?)?
        .renamed("linear_elim4"))
}

/// `U''' = U''(X_O U'' X_O)`: leaves only `X_j X_{j+1}` of a nearest-neighbor
/// Hamiltonian.
pub fn seq_mqe8(n: usize) -> Result<Sequence> {
    even(n, "mqe8")?;
    Ok(seq_linear_elim4(n)?.nest(&pulse::collective_odd(Pauli::X, n)?)?.renamed("mqe8"))
}

/// `U'''` nested with `Z_3 Z_4 Z_7 Z_8 ...`: leaves the group generated by
/// `X_{2j-1} X_{2j}`.
pub fn seq_mqe16_qx(n: usize) -> Result<Sequence> {
    even(n, "mqe16_qx")?;
    Ok(seq_mqe8(n)?.nest(&pulse::z_pair(n)?)?.renamed("mqe16_qx"))
}

/// `U'''(Z_O U''' Z_O)`: removes all linear and nearest-neighbor bilinear terms.
pub fn seq_full_elim16(n: usize) -> Result<Sequence> {
    even(n, "full_elim16")?;
    Ok(seq_mqe8(n)?.nest(&pulse::collective_odd(Pauli::Z, n)?)?.renamed("full_elim16"))
}

/// `U_1 = U O† U O`, then `U_1 O_O† U_1 O_O`: six exchange pulses and four
/// free-evolution segments, leaving block-collective coupling on every
/// block of four qubits.
pub fn seq_collective6(n: usize) -> Result<Sequence> {
    even(n, "collective6")?;
    Ok(Sequence::free(n).nest(&pulse::o_pairs(n)?)?.nest(&pulse::o_o(n)?)?.renamed("collective6"))
}

/// Three-qubit scheme: `U_1(τ) = U O_12† U O_12`,
/// `U_2(τ) = U_1(τ/2) O_23† U_1(τ) O_23`, then `U_2 O_12† U_2 O_12`.
pub fn seq_collective14_block3() -> Result<Sequence> {
    let n = 3;
    let o12 = pulse::exchange(0, 1, n)?;
    let o23 = pulse::exchange(1, 2, n)?;
    let u1 = Sequence::free(n).nest(&o12)?;
    let half = Rational::new(1.into(), 2.into());
    let mut events = u1.with_weights_scaled(&half)?.events;
    events.push(Event::Apply(o23.dagger()));
    events.extend(u1.events.iter().cloned());
    events.push(Event::Apply(o23));
    let u2 = Sequence::new("u2", n, events)?;
    Ok(u2.nest(&o12)?.renamed("collective14"))
}

/// Nests [`seq_collective6`] with `O_OO`, giving collective coupling on
/// blocks of eight qubits.
pub fn seq_collective_block8(n: usize) -> Result<Sequence> {
    Ok(seq_collective6(n)?.nest(&pulse::o_oo(n)?)?.renamed("collective_block8"))
}
