//! Error-group analysis over GF(2).
//!
//! Surviving system operators generate a Pauli subgroup. Modulo global
//! phase each element is a vector in GF(2)^{2N} (x-bits ∥ z-bits), so an
//! Abelian group with rank-`M` generator matrix has order `2^M` and supports
//! a decoherence-free subspace of dimension `2^N / 2^M`.

use serde::Serialize;

use crate::bath::SBHamiltonian;
use crate::error::{Error, Result};
use crate::pauli::{PauliKey, PauliString};

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl Gf2Matrix {
    pub fn new(cols: usize) -> Self {
        Gf2Matrix { cols, rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<u64>) {
        debug_assert_eq!(row.len(), self.cols.div_ceil(64).max(1));
        self.rows.push(row);
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    /// Rank by Gaussian elimination, one XOR per lane.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let (lane, bit) = (c / 64, 1u64 << (c % 64));
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][lane] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pr = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[lane] & bit != 0 {
                    row.iter_mut().zip(&pr).for_each(|(a, b)| *a ^= b);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

fn symplectic_row(p: &PauliString) -> Vec<u64> {
    let n = p.n_qubits();
    let mut row = vec![0u64; (2 * n).div_ceil(64).max(1)];
    for q in 0..n {
        if p.x_bit(q) {
            row[q / 64] |= 1 << (q % 64);
        }
        if p.z_bit(q) {
            let c = n + q;
            row[c / 64] |= 1 << (c % 64);
        }
    }
    row
}

#[derive(Clone, Debug)]
pub struct ErrorGroup {
    n: usize,
    generators: Vec<PauliString>,
    matrix: Gf2Matrix,
}

impl ErrorGroup {
    /// Deduplicated phaseless generators; identities dropped.
    pub fn from_generators(n: usize, gens: impl IntoIterator<Item = PauliString>) -> Result<Self> {
        let mut keys: Vec<PauliKey> = Vec::new();
        for g in gens {
            if g.n_qubits() != n {
                return Err(Error::DimensionMismatch { left: n, right: g.n_qubits() });
            }
            if g.is_identity() {
                continue;
            }
            let k = PauliKey::new(&g);
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        keys.sort();
        let generators: Vec<PauliString> = keys.into_iter().map(PauliKey::into_pauli).collect();
        let mut matrix = Gf2Matrix::new(2 * n);
        for g in &generators {
            matrix.push_row(symplectic_row(g));
        }
        Ok(ErrorGroup { n, generators, matrix })
    }

    /// Group generated by the system operators of `h`.
    pub fn from_hamiltonian(h: &SBHamiltonian) -> Self {
        Self::from_generators(h.n_qubits(), h.system_operators()).expect("operators share n")
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn gf2_matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| !a.anticommutes_unchecked(b)))
    }

    /// `log2 |G|` modulo phase; errors for non-Abelian groups.
    pub fn order_log2(&self) -> Result<usize> {
        if !self.is_abelian() {
            return Err(Error::NonAbelian);
        }
        Ok(self.rank())
    }

    /// `|G|` as an integer; `None` past `u128`.
    pub fn order(&self) -> Result<Option<u128>> {
        let m = self.order_log2()?;
        Ok((m < 128).then(|| 1u128 << m))
    }

    pub fn dfs_dimension_log2(&self) -> Result<usize> {
        Ok(self.n - self.order_log2()?)
    }

    pub fn dfs_dimension(&self) -> Result<Option<u128>> {
        let d = self.dfs_dimension_log2()?;
        Ok((d < 128).then(|| 1u128 << d))
    }

    pub fn report(&self) -> GroupReport {
        let abelian = self.is_abelian();
        GroupReport {
            abelian,
            order_log2: abelian.then(|| self.rank()),
            dfs_dim_log2: abelian.then(|| self.n - self.rank()),
            generators: self.generators.iter().map(|g| g.symbols()).collect(),
            phases_discarded: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub abelian: bool,
    pub order_log2: Option<usize>,
    pub dfs_dim_log2: Option<usize>,
    pub generators: Vec<String>,
    pub phases_discarded: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn g(n: usize, strs: &[&str]) -> ErrorGroup {
        ErrorGroup::from_generators(n, strs.iter().map(|s| PauliString::parse(s, n).unwrap())).unwrap()
    }

    // Multiplicative closure modulo phase.
    fn closure_size(group: &ErrorGroup) -> usize {
        let n = group.n_qubits();
        let mut seen: HashSet<(Vec<u64>, Vec<u64>)> = HashSet::new();
        let id = PauliString::identity(n);
        seen.insert((id.x_lanes().to_vec(), id.z_lanes().to_vec()));
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for gen in group.generators() {
                let p = e.multiply(gen).unwrap();
                if seen.insert((p.x_lanes().to_vec(), p.z_lanes().to_vec())) {
                    frontier.push(p);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn abelian_examples() {
        assert!(g(4, &["XXII", "IIXX"]).is_abelian());
        assert!(!g(1, &["X", "Z"]).is_abelian());
        assert!(g(3, &["XXI", "IXX"]).is_abelian());
        assert!(matches!(g(1, &["X", "Z"]).order_log2(), Err(Error::NonAbelian)));
    }

    #[test]
    fn q2x_and_qx_orders() {
        let q2x = g(4, &["XXII", "IXXI", "IIXX"]);
        assert_eq!(q2x.order().unwrap(), Some(8));
        assert_eq!(q2x.dfs_dimension().unwrap(), Some(2));
        let qx = g(6, &["XXIIII", "IIXXII", "IIIIXX"]);
        assert_eq!(qx.order().unwrap(), Some(8));
        let qx4 = g(4, &["XXII", "IIXX"]);
        assert_eq!(qx4.dfs_dimension().unwrap(), Some(4));
    }

    #[test]
    fn dependent_generators_and_dedup() {
        let grp = g(3, &["XXI", "IXX", "XIX", "-XXI", "III"]);
        assert_eq!(grp.generators().len(), 3);
        assert_eq!(grp.order_log2().unwrap(), 2);
        assert_eq!(closure_size(&grp), 4);
    }

    #[test]
    fn trivial_group() {
        let grp = ErrorGroup::from_hamiltonian(&SBHamiltonian::empty(3));
        assert_eq!(grp.order().unwrap(), Some(1));
        assert_eq!(grp.dfs_dimension().unwrap(), Some(8));
    }

    #[test]
    fn rank_matches_closure() {
        let cases: &[(usize, &[&str])] = &[
            (4, &["ZZII", "IZZI", "IIZZ", "XXXX"]),
            (5, &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]),
            (3, &["ZII", "IZI", "IIZ"]),
            (6, &["XXIIII", "IXXIII", "IIXXII", "IIIXXI", "IIIIXX"]),
        ];
        for (n, strs) in cases {
            let grp = g(*n, strs);
            assert!(grp.is_abelian());
            assert_eq!(1usize << grp.order_log2().unwrap(), closure_size(&grp));
        }
    }

    #[test]
    fn wide_rank() {
        let n = 100;
        let gens = (0..n - 1).map(|q| {
            let mut p = PauliString::identity(n);
            p.set(q, crate::pauli::Pauli::X);
            p.set(q + 1, crate::pauli::Pauli::X);
            p
        });
        let grp = ErrorGroup::from_generators(n, gens).unwrap();
        assert_eq!(grp.order_log2().unwrap(), n - 1);
        assert_eq!(grp.dfs_dimension_log2().unwrap(), 1);
    }

    #[test]
    fn report_shape() {
        let r = g(4, &["XXII", "IIXX"]).report();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"abelian":true,"order_log2":2,"dfs_dim_log2":2,"generators":["XXII","IIXX"],"phases_discarded":true}"#
        );
    }
}
