//! Spin networks and their single-excitation Hamiltonians.
//!
//! A network is an undirected weighted graph of n spins with optional on-site
//! bias fields. In the single-excitation sector the XX Hamiltonian is the
//! coupling matrix itself: `H_ij = J_ij` for `i != j` plus the bias on the
//! diagonal. The Heisenberg model adds the excitation-number-conserving
//! diagonal `H_ii += (1/2) sum_j J_ij`, which for a uniform ring is a global
//! shift and for a chain lowers the two end sites by half a coupling.
//!
//! Nodes are 1-based in the public API; storage is 0-based.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Exchange model for the spin couplings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingKind {
    Xx,
    Heisenberg,
}

/// Declared wiring of the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Ring,
    Chain,
    Custom,
}

/// What the Hamiltonian's structure permits downstream.
///
/// `CirculantRing` and `ToeplitzChain` mark uniform unbiased networks whose
/// spectra are known in closed form; everything else is diagonalized
/// numerically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StructureTag {
    CirculantRing { n: usize, coupling: f64, heisenberg: bool },
    ToeplitzChain { n: usize, coupling: f64, heisenberg: bool },
    General,
}

/// A spin network: couplings, model kind, and bias fields.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinNetwork {
    n: usize,
    kind: CouplingKind,
    topology: Topology,
    couplings: DMatrix<f64>,
    bias: DVector<f64>,
}

/// Single-excitation block of the Hamiltonian.
#[derive(Clone, Debug)]
pub struct SingleExcitationHamiltonian {
    pub matrix: DMatrix<f64>,
    pub tag: StructureTag,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl SpinNetwork {
    /// Uniform ring of `n >= 3` spins with unit couplings.
    pub fn ring(n: usize, kind: CouplingKind) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidNetwork(format!("ring needs n >= 3, got {n}")));
        }
        let mut j = DMatrix::zeros(n, n);
        for i in 0..n {
            let next = (i + 1) % n;
            j[(i, next)] = 1.0;
            j[(next, i)] = 1.0;
        }
        Ok(SpinNetwork {
            n,
            kind,
            topology: Topology::Ring,
            couplings: j,
            bias: DVector::zeros(n),
        })
    }

    /// Uniform open chain of `n >= 2` spins with unit couplings.
    pub fn chain(n: usize, kind: CouplingKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidNetwork(format!("chain needs n >= 2, got {n}")));
        }
        let mut j = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            j[(i, i + 1)] = 1.0;
            j[(i + 1, i)] = 1.0;
        }
        Ok(SpinNetwork {
            n,
            kind,
            topology: Topology::Chain,
            couplings: j,
            bias: DVector::zeros(n),
        })
    }

    /// Arbitrary symmetric coupling matrix with zero diagonal.
    pub fn custom(couplings: DMatrix<f64>, kind: CouplingKind) -> Result<Self> {
        let n = couplings.nrows();
        if n == 0 || couplings.ncols() != n {
            return Err(Error::InvalidNetwork(format!(
                "coupling matrix must be square and nonempty, got {}x{}",
                couplings.nrows(),
                couplings.ncols()
            )));
        }
        let scale = couplings.amax().max(1.0);
        for i in 0..n {
            if couplings[(i, i)] != 0.0 {
                return Err(Error::InvalidNetwork(format!(
                    "coupling diagonal must be zero (site {}); use bias for on-site terms",
                    i + 1
                )));
            }
            for jx in (i + 1)..n {
                let dev = (couplings[(i, jx)] - couplings[(jx, i)]).abs();
                if dev > SYMMETRY_TOL * scale {
                    return Err(Error::NotSymmetric { i: i + 1, j: jx + 1, dev });
                }
            }
        }
        Ok(SpinNetwork {
            n,
            kind,
            topology: Topology::Custom,
            couplings,
            bias: DVector::zeros(n),
        })
    }

    /// Sets the bias field on a node (1-based), returning the network.
    pub fn with_bias(mut self, node: usize, zeta: f64) -> Result<Self> {
        if node == 0 || node > self.n {
            return Err(Error::NodeOutOfRange { index: node, n: self.n });
        }
        if !zeta.is_finite() {
            return Err(Error::InvalidNetwork(format!("bias on node {node} must be finite")));
        }
        self.bias[node - 1] = zeta;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn couplings(&self) -> &DMatrix<f64> {
        &self.couplings
    }

    pub fn bias(&self) -> &DVector<f64> {
        &self.bias
    }

    pub fn is_biased(&self) -> bool {
        self.bias.iter().any(|&b| b != 0.0)
    }

    /// The single coupling constant if the declared topology is uniform.
    pub fn uniform_coupling(&self) -> Option<f64> {
        let edges: Vec<(usize, usize)> = match self.topology {
            Topology::Ring => (0..self.n).map(|i| (i, (i + 1) % self.n)).collect(),
            Topology::Chain => (0..self.n - 1).map(|i| (i, i + 1)).collect(),
            Topology::Custom => return None,
        };
        let j0 = self.couplings[edges[0]];
        if j0 <= 0.0 {
            return None;
        }
        let mut expected = DMatrix::zeros(self.n, self.n);
        for &(a, b) in &edges {
            if (self.couplings[(a, b)] - j0).abs() > SYMMETRY_TOL * j0 {
                return None;
            }
            expected[(a, b)] = self.couplings[(a, b)];
            expected[(b, a)] = self.couplings[(b, a)];
        }
        if (&self.couplings - expected).amax() > SYMMETRY_TOL * j0 {
            return None;
        }
        Some(j0)
    }

    /// Builds the single-excitation block and classifies its structure.
    pub fn hamiltonian(&self) -> SingleExcitationHamiltonian {
        let mut h = self.couplings.clone();
        for i in 0..self.n {
            let mut diag = self.bias[i];
            if self.kind == CouplingKind::Heisenberg {
                diag += 0.5 * self.couplings.row(i).sum();
            }
            h[(i, i)] = diag;
        }
        let tag = if self.is_biased() {
            StructureTag::General
        } else {
            match (self.topology, self.uniform_coupling()) {
                (Topology::Ring, Some(j)) => StructureTag::CirculantRing {
                    n: self.n,
                    coupling: j,
                    heisenberg: self.kind == CouplingKind::Heisenberg,
                },
                (Topology::Chain, Some(j)) => StructureTag::ToeplitzChain {
                    n: self.n,
                    coupling: j,
                    heisenberg: self.kind == CouplingKind::Heisenberg,
                },
                _ => StructureTag::General,
            }
        };
        SingleExcitationHamiltonian { matrix: h, tag }
    }

    /// Reads a network from the JSON schema used by the CLI.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(s)?;
        file.into_network()
    }

    pub fn from_json_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json_str(&s)
    }

    pub fn to_json_string(&self) -> String {
        let rows: Vec<Vec<f64>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.couplings[(i, j)]).collect())
            .collect();
        let bias: Option<Vec<f64>> = if self.is_biased() {
            Some(self.bias.iter().copied().collect())
        } else {
            None
        };
        let file = NetworkFile {
            n: self.n,
            kind: self.kind,
            topology: self.topology,
            couplings: Some(rows),
            bias,
        };
        serde_json::to_string_pretty(&file).expect("network serialization")
    }
}

/// On-disk schema: `couplings` may be omitted for ring/chain (uniform unit
/// couplings are implied), `bias` may be omitted when all-zero.
#[derive(Serialize, Deserialize)]
struct NetworkFile {
    n: usize,
    kind: CouplingKind,
    topology: Topology,
    #[serde(skip_serializing_if = "Option::is_none")]
    couplings: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bias: Option<Vec<f64>>,
}

impl NetworkFile {
    fn into_network(self) -> Result<SpinNetwork> {
        let mut net = match (self.topology, &self.couplings) {
            (Topology::Ring, None) => SpinNetwork::ring(self.n, self.kind)?,
            (Topology::Chain, None) => SpinNetwork::chain(self.n, self.kind)?,
            (Topology::Custom, None) => {
                return Err(Error::InvalidNetwork(
                    "custom topology requires an explicit coupling matrix".into(),
                ))
            }
            (topology, Some(rows)) => {
                if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                    return Err(Error::InvalidNetwork(format!(
                        "coupling matrix must be {0}x{0}",
                        self.n
                    )));
                }
                let m = DMatrix::from_fn(self.n, self.n, |i, j| rows[i][j]);
                let mut net = SpinNetwork::custom(m, self.kind)?;
                net.topology = topology;
                net
            }
        };
        if let Some(bias) = self.bias {
            if bias.len() != net.n {
                return Err(Error::InvalidNetwork(format!(
                    "bias vector must have length {}",
                    net.n
                )));
            }
            for (i, b) in bias.iter().enumerate() {
                net = net.with_bias(i + 1, *b)?;
            }
        }
        Ok(net)
    }
}
