//! JSON documents for Hamiltonians and sequences, and the named-pulse
//! grammar used inside sequence files.
//!
//! Hamiltonian: `{"n_qubits": 4, "terms": [{"pauli": "XIII", "bath": {"B1x": "1"}}]}`
//!
//! Sequence: `{"events": [{"pulse": "O_O"}, {"evolve": "1"},
//! {"pulse_tableau": {"X1": "+ZII", "Z1": "-XII"}}]}`. Events are listed in
//! bracket notation (the last one acts first), the same order the symbolic
//! engine and [`Sequence::notation`] use.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bath::{parse_rational, BathVector, InteractionTerm, SBHamiltonian};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::pulse::{self, Pulse, Tableau};
use crate::sequence::{Event, Sequence};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub pauli: String,
    pub bath: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianDoc {
    pub n_qubits: usize,
    pub terms: Vec<TermDoc>,
}

pub fn bath_doc(b: &BathVector) -> BTreeMap<String, String> {
    b.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

impl HamiltonianDoc {
    pub fn from_hamiltonian(h: &SBHamiltonian) -> Self {
        HamiltonianDoc {
            n_qubits: h.n_qubits(),
            terms: h.terms().map(|(p, b)| TermDoc { pauli: p.to_string(), bath: bath_doc(b) }).collect(),
        }
    }

    pub fn to_hamiltonian(&self) -> Result<SBHamiltonian> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let system = PauliString::parse(&t.pauli, self.n_qubits)?;
            let mut bath = BathVector::new();
            for (label, coeff) in &t.bath {
                bath.add_entry(label.clone(), parse_rational(coeff)?);
            }
            terms.push(InteractionTerm::new(system, bath));
        }
        SBHamiltonian::canonicalize(terms, self.n_qubits)
    }
}

pub fn hamiltonian_from_json(text: &str) -> Result<SBHamiltonian> {
    let doc: HamiltonianDoc = serde_json::from_str(text)?;
    doc.to_hamiltonian()
}

pub fn hamiltonian_to_json(h: &SBHamiltonian) -> String {
    serde_json::to_string_pretty(&HamiltonianDoc::from_hamiltonian(h)).expect("plain data serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EventDoc {
    Pulse(String),
    PulseTableau(BTreeMap<String, String>),
    Evolve(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    pub events: Vec<EventDoc>,
}

fn axis_of(c: char) -> Option<Pauli> {
    match c {
        'X' => Some(Pauli::X),
        'Y' => Some(Pauli::Y),
        'Z' => Some(Pauli::Z),
        _ => None,
    }
}

fn parse_index(s: &str, n: usize, whole: &str) -> Result<usize> {
    let k: usize =
        s.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad qubit index in pulse {whole:?}")))?;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("qubit index {k} out of range in pulse {whole:?}")));
    }
    Ok(k - 1)
}

/// Resolve a pulse name on `n` qubits.
///
/// Accepted: `I`; `X`, `Y`, `Z` (collective); `X_O`, `X_OO` and the same for
/// `Y`, `Z`; `Z_PAIR`; `O`, `O_O`, `O_OO`; `O(i,j)`; `O(i,j)[local]`;
/// single-qubit `X3`; `pauli:XIZI` or `[XIZI]`. A trailing `†` or `^dag`
/// takes the adjoint, and `A·B` is the operator product.
pub fn named_pulse(name: &str, n: usize) -> Result<Pulse> {
    let name = name.trim();
    if name.contains('·') {
        let mut parts = name.split('·');
        let first = named_pulse(parts.next().unwrap_or_default(), n)?;
        return parts.try_fold(first, |acc, part| acc.times(&named_pulse(part, n)?));
    }
    if let Some(base) = name.strip_suffix('†').or_else(|| name.strip_suffix("^dag")) {
        return Ok(named_pulse(base, n)?.dagger());
    }
    let unknown = || Error::InvalidArgument(format!("unknown pulse {name:?}"));
    match name {
        "I" => return Ok(Pulse::identity(n)),
        "O" => return pulse::o_pairs(n),
        "O_O" => return pulse::o_o(n),
        "O_OO" => return pulse::o_oo(n),
        "Z_PAIR" => return pulse::z_pair(n),
        _ => {}
    }
    if let Some(syms) = name.strip_prefix("pauli:").or_else(|| name.strip_prefix('[').and_then(|s| s.strip_suffix(']')))
    {
        let p = PauliString::parse(syms, n)?;
        if !p.is_hermitian() {
            return Err(Error::ImaginaryPhase { pauli: p.to_string() });
        }
        return Ok(Pulse::pauli(&p));
    }
    if let Some(rest) = name.strip_prefix("O(") {
        let (inner, local) = match rest.strip_suffix(")[local]") {
            Some(inner) => (inner, true),
            None => (rest.strip_suffix(')').ok_or_else(unknown)?, false),
        };
        let (a, b) = inner.split_once(',').ok_or_else(unknown)?;
        let (i, j) = (parse_index(a, n, name)?, parse_index(b, n, name)?);
        if i == j {
            return Err(Error::InvalidArgument(format!("exchange {name:?} needs two distinct qubits")));
        }
        if local {
            if j != i + 2 {
                return Err(Error::InvalidArgument(format!("{name:?}: local decomposition is for O(i,i+2)")));
            }
            return pulse::swap_decomposed(i, n);
        }
        return pulse::exchange(i, j, n);
    }
    let mut chars = name.chars();
    let axis = chars.next().and_then(axis_of).ok_or_else(unknown)?;
    match chars.as_str() {
        "" => pulse::collective(axis, n),
        "_O" => pulse::collective_odd(axis, n),
        "_OO" => pulse::collective_odd_odd(axis, n),
        digits if digits.chars().all(|c| c.is_ascii_digit()) => pulse::single(axis, parse_index(digits, n, name)?, n),
        _ => Err(unknown()),
    }
}

/// Tableau from `{"X1": "+ZII", "Z1": "-XII", ...}`; absent generators map
/// to themselves.
pub fn tableau_from_images(images: &BTreeMap<String, String>, n: usize) -> Result<Tableau> {
    let id = Tableau::identity(n);
    let mut x: Vec<PauliString> = (0..n).map(|q| id.x_image(q).clone()).collect();
    let mut z: Vec<PauliString> = (0..n).map(|q| id.z_image(q).clone()).collect();
    for (key, value) in images {
        let bad = || Error::InvalidTableau(format!("bad generator key {key:?}"));
        let mut chars = key.chars();
        let slot = match chars.next() {
            Some('X') => &mut x,
            Some('Z') => &mut z,
            _ => return Err(bad()),
        };
        let q: usize = chars.as_str().parse().map_err(|_| bad())?;
        if q == 0 || q > n {
            return Err(bad());
        }
        slot[q - 1] = PauliString::parse(value, n)?;
    }
    Tableau::from_images(x, z)
}

pub fn tableau_images(t: &Tableau) -> BTreeMap<String, String> {
    let id = Tableau::identity(t.n_qubits());
    let mut out = BTreeMap::new();
    let signed = |p: &PauliString| match p.phase().sign() {
        Some(-1) => p.to_string(),
        _ => format!("+{p}"),
    };
    for q in 0..t.n_qubits() {
        if t.x_image(q) != id.x_image(q) {
            out.insert(format!("X{}", q + 1), signed(t.x_image(q)));
        }
        if t.z_image(q) != id.z_image(q) {
            out.insert(format!("Z{}", q + 1), signed(t.z_image(q)));
        }
    }
    out
}

fn infer_n(doc: &SequenceDoc) -> Option<usize> {
    doc.events.iter().find_map(|e| match e {
        EventDoc::PulseTableau(m) => m.values().next().map(|v| v.trim_start_matches(['+', '-', 'i']).len()),
        _ => None,
    })
}

impl SequenceDoc {
    /// Build the sequence. `n` is taken from the document, then the caller,
    /// then the width of the first inline tableau.
    pub fn to_sequence(&self, n: Option<usize>) -> Result<Sequence> {
        let n = match (self.n_qubits, n) {
            (Some(a), Some(b)) if a != b => return Err(Error::DimensionMismatch { left: a, right: b }),
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => infer_n(self)
                .ok_or_else(|| Error::InvalidArgument("sequence file does not fix the qubit count".into()))?,
        };
        let mut events = Vec::with_capacity(self.events.len());
        for e in &self.events {
            events.push(match e {
                EventDoc::Pulse(name) => Event::Apply(named_pulse(name, n)?),
                EventDoc::PulseTableau(images) => {
                    Event::Apply(Pulse::from_tableau("custom", tableau_from_images(images, n)?))
                }
                EventDoc::Evolve(w) => Event::Evolve(parse_rational(w)?),
            });
        }
        Sequence::new(self.name.clone().unwrap_or_else(|| "custom".into()), n, events)
    }

    /// Pulses whose names resolve to the same action are written by name;
    /// anything else is written as an inline tableau.
    pub fn from_sequence(seq: &Sequence) -> Self {
        let n = seq.n_qubits();
        let events = seq
            .events()
            .iter()
            .map(|e| match e {
                Event::Evolve(w) => EventDoc::Evolve(w.to_string()),
                Event::Apply(p) => match named_pulse(p.name(), n) {
                    Ok(q) if q.tableau() == p.tableau() => EventDoc::Pulse(p.name().to_string()),
                    _ => EventDoc::PulseTableau(tableau_images(p.tableau())),
                },
            })
            .collect();
        SequenceDoc { name: Some(seq.name().to_string()), n_qubits: Some(n), events }
    }
}

pub fn sequence_from_json(text: &str, n: Option<usize>) -> Result<Sequence> {
    let doc: SequenceDoc = serde_json::from_str(text)?;
    doc.to_sequence(n)
}

pub fn sequence_to_json(seq: &Sequence) -> String {
    serde_json::to_string_pretty(&SequenceDoc::from_sequence(seq)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{build_bilinear_nn, build_hnn};
    use crate::sequence::BuiltinSequence;

    #[test]
    fn hamiltonian_round_trip() {
        let h = build_hnn(4).unwrap();
        let back = hamiltonian_from_json(&hamiltonian_to_json(&h)).unwrap();
        assert_eq!(back, h);
        let h = build_bilinear_nn(2).unwrap();
        assert_eq!(hamiltonian_from_json(&hamiltonian_to_json(&h)).unwrap(), h);
    }

    #[test]
    fn hamiltonian_schema() {
        let h = hamiltonian_from_json(
            r#"{"n_qubits": 2, "terms": [{"pauli": "XI", "bath": {"A": "1/2"}}, {"pauli": "-XI", "bath": {"A": "1", "B": "3"}}]}"#,
        )
        .unwrap();
        assert_eq!(h.len(), 1);
        let b = h.bath_of(&"XI".parse().unwrap()).unwrap();
        assert_eq!(b.to_string(), "-(1/2)A - 3B");
        assert!(hamiltonian_from_json(r#"{"n_qubits": 2, "terms": [{"pauli": "iXI", "bath": {"A": "1"}}]}"#).is_err());
        assert!(hamiltonian_from_json(r#"{"n_qubits": 2, "terms": [{"pauli": "XI", "bath": {"A": "x"}}]}"#).is_err());
        assert!(hamiltonian_from_json(r#"{"n_qubits": 2, "terms": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn named_pulses() {
        assert_eq!(named_pulse("X", 4).unwrap(), pulse::collective(Pauli::X, 4).unwrap());
        assert_eq!(named_pulse("Y_O", 4).unwrap(), pulse::collective_odd(Pauli::Y, 4).unwrap());
        assert_eq!(named_pulse("O(1,3)", 4).unwrap(), pulse::exchange(0, 2, 4).unwrap());
        assert_eq!(named_pulse("Z2", 3).unwrap(), pulse::single(Pauli::Z, 1, 3).unwrap());
        assert_eq!(named_pulse("O_O†", 4).unwrap().tableau(), pulse::o_o(4).unwrap().dagger().tableau());
        assert_eq!(named_pulse("O^dag", 2).unwrap().tableau(), pulse::o_pairs(2).unwrap().dagger().tableau());
        assert_eq!(named_pulse("[XIZ]", 3).unwrap().as_pauli().unwrap().symbols(), "XIZ");
        assert!(named_pulse("O(1,5)", 4).is_err());
        assert!(named_pulse("W", 4).is_err());
        assert!(named_pulse("pauli:iXX", 2).is_err());
    }

    #[test]
    fn builtin_sequences_round_trip() {
        for b in BuiltinSequence::ALL {
            let n = if b == BuiltinSequence::Collective14 { 3 } else { 4 };
            let seq = b.build(n).unwrap();
            let back = sequence_from_json(&sequence_to_json(&seq), None).unwrap();
            assert_eq!(back.notation(), seq.notation());
            let h = crate::bath::build_linear(n).unwrap();
            assert_eq!(back.average_hamiltonian(&h).unwrap(), seq.average_hamiltonian(&h).unwrap());
        }
    }

    #[test]
    fn inline_tableau() {
        let text = r#"{"events": [{"evolve": "1"}, {"pulse_tableau": {"X1": "+ZI", "Z1": "+XI"}}, {"evolve": "1"}, {"pulse_tableau": {"X1": "+ZI", "Z1": "+XI"}}]}"#;
        let seq = sequence_from_json(text, None).unwrap();
        assert_eq!(seq.n_qubits(), 2);
        assert_eq!(seq.pulse_count(), 2);
        let open = r#"{"n_qubits": 1, "events": [{"evolve": "1"}, {"pulse_tableau": {"X1": "+Z", "Z1": "+X"}}, {"evolve": "1"}]}"#;
        assert!(matches!(sequence_from_json(open, None), Err(Error::CycleNotClosed { .. })));
        let bad = r#"{"n_qubits": 1, "events": [{"pulse_tableau": {"X1": "+X", "Z1": "+X"}}]}"#;
        assert!(matches!(sequence_from_json(bad, None), Err(Error::InvalidTableau(_))));
        assert!(sequence_from_json(r#"{"events": [{"pulse": "X"}]}"#, None).is_err());
        assert!(matches!(
            sequence_from_json(r#"{"n_qubits": 2, "events": [{"evolve": "1"}]}"#, Some(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
