//! Fermion-to-qubit encodings: Jordan-Wigner, Verstraete-Cirac and the
//! compact encoding with qubits on vertices and odd faces.

mod algebra;
mod dk;
mod dump;
mod hubbard;
mod jw;
mod vc;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::majorana::{MajoranaKind, MajoranaMonomial};
use crate::pauli::PauliOp;

pub(crate) use algebra::fermion_vector;
pub use algebra::{Decomposition, LogicalAlgebra};
pub use dk::build_dk;
pub use dump::{EncodingDump, GeneratorEntry, LayoutEntry};
pub use hubbard::{encode_hubbard_term, HubbardTerm, Spin, WeightedPauli};
pub use jw::build_jw;
pub use vc::{aux_pair_stabilizer, build_vc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EncodingKind {
    Jw,
    Vc,
    Dk,
}

/// What a physical qubit stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum QubitRole {
    Mode { mode: usize },
    Primary { site: usize },
    Auxiliary { site: usize },
    Vertex { site: usize },
    Face { face: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantFlags {
    pub vc_first_pair_swapped: bool,
    pub dk_corner_shaved: bool,
    pub parity_stabilizer_included: bool,
}

/// A fermionic operator together with its qubit image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalGenerator {
    pub label: String,
    pub fermion: MajoranaMonomial,
    pub pauli: PauliOp,
}

/// Image of the edge operator `E_{tail,head} = -i c_tail c_head`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeImage {
    pub edge: usize,
    pub tail: usize,
    pub head: usize,
    pub pauli: PauliOp,
}

/// Two auxiliary Majoranas whose scaled product is a stabilizer.
/// Each side is `(site, kind)`; `first` comes earlier in the ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxPair {
    pub first: (usize, MajoranaKind),
    pub second: (usize, MajoranaKind),
}

#[derive(Clone, Debug)]
pub struct Encoding {
    pub(crate) kind: EncodingKind,
    pub(crate) lattice: Option<Lattice>,
    pub(crate) n_qubits: usize,
    pub(crate) n_modes: usize,
    pub(crate) layout: Vec<QubitRole>,
    pub(crate) stabilizers: Vec<PauliOp>,
    pub(crate) stabilizer_labels: Vec<String>,
    pub(crate) majorana_images: BTreeMap<(usize, MajoranaKind), PauliOp>,
    pub(crate) aux_images: BTreeMap<(usize, MajoranaKind), PauliOp>,
    pub(crate) aux_pairs: Vec<AuxPair>,
    pub(crate) jw_order: Vec<usize>,
    pub(crate) edge_images: Vec<EdgeImage>,
    pub(crate) vertex_images: Vec<PauliOp>,
    pub(crate) corner_generators: Vec<LogicalGenerator>,
    pub(crate) flags: VariantFlags,
    pub(crate) parity_redundant: bool,
}

impl Encoding {
    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_primary_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_encoded_qubits(&self) -> usize {
        self.n_qubits - self.stabilizers.len()
    }

    pub fn qubit_layout(&self) -> &[QubitRole] {
        &self.layout
    }

    pub fn qubit_of(&self, role: QubitRole) -> Option<usize> {
        self.layout.iter().position(|r| *r == role)
    }

    pub fn stabilizer_generators(&self) -> &[PauliOp] {
        &self.stabilizers
    }

    pub fn stabilizer_labels(&self) -> &[String] {
        &self.stabilizer_labels
    }

    pub fn majorana_image(&self, mode: usize, kind: MajoranaKind) -> Option<&PauliOp> {
        self.majorana_images.get(&(mode, kind))
    }

    pub fn majorana_images(&self) -> &BTreeMap<(usize, MajoranaKind), PauliOp> {
        &self.majorana_images
    }

    /// VC only: images of the auxiliary Majoranas.
    pub fn aux_image(&self, site: usize, kind: MajoranaKind) -> Option<&PauliOp> {
        self.aux_images.get(&(site, kind))
    }

    pub fn aux_pairs(&self) -> &[AuxPair] {
        &self.aux_pairs
    }

    /// Site order used for the Jordan-Wigner strings (JW, VC).
    pub fn jw_order(&self) -> &[usize] {
        &self.jw_order
    }

    pub fn edge_images(&self) -> &[EdgeImage] {
        &self.edge_images
    }

    /// `Ẽ_{a,b}` for adjacent sites in either direction.
    pub fn edge_image(&self, a: usize, b: usize) -> Result<PauliOp> {
        let img = self
            .edge_images
            .iter()
            .find(|e| (e.tail, e.head) == (a, b) || (e.tail, e.head) == (b, a))
            .ok_or(Error::NotAdjacent(a, b))?;
        Ok(if img.tail == a { img.pauli.clone() } else { img.pauli.clone().negated() })
    }

    pub fn vertex_images(&self) -> &[PauliOp] {
        &self.vertex_images
    }

    pub fn corner_generators(&self) -> &[LogicalGenerator] {
        &self.corner_generators
    }

    pub fn variant_flags(&self) -> VariantFlags {
        self.flags
    }

    /// True when a parity stabilizer was requested but already lies in the
    /// stabilizer group, so it was not appended.
    pub fn parity_stabilizer_redundant(&self) -> bool {
        self.parity_redundant
    }

    /// Generating set of the encoded fermionic algebra.
    pub fn logical_generators(&self) -> Vec<LogicalGenerator> {
        let m = self.n_modes;
        let mut out = Vec::new();
        for (&(mode, kind), pauli) in &self.majorana_images {
            out.push(LogicalGenerator {
                label: format!("g{mode}{}", if kind == MajoranaKind::CPrime { "'" } else { "" }),
                fermion: MajoranaMonomial::single(m, mode, kind),
                pauli: pauli.clone(),
            });
        }
        for e in &self.edge_images {
            out.push(LogicalGenerator {
                label: format!("E{},{}", e.tail, e.head),
                fermion: MajoranaMonomial::edge(m, e.tail, e.head),
                pauli: e.pauli.clone(),
            });
        }
        for (v, p) in self.vertex_images.iter().enumerate() {
            out.push(LogicalGenerator {
                label: format!("V{v}"),
                fermion: MajoranaMonomial::dephasing(m, v),
                pauli: p.clone(),
            });
        }
        out.extend(self.corner_generators.iter().cloned());
        out
    }

    pub fn algebra(&self) -> LogicalAlgebra {
        LogicalAlgebra::new(self)
    }

    /// Qubit image of a fermionic monomial, or `None` if it lies outside the
    /// encoded algebra (e.g. odd operators of a fixed-parity code).
    pub fn encode_monomial(&self, m: &MajoranaMonomial) -> Result<Option<PauliOp>> {
        if m.n_modes() != self.n_modes {
            return Err(Error::DimensionMismatch { left: m.n_modes(), right: self.n_modes });
        }
        Ok(self.algebra().fermion_to_pauli(m))
    }

    /// Image of `-i c_j c'_j`.
    pub fn dephasing_image(&self, mode: usize) -> PauliOp {
        if let Some(v) = self.vertex_images.get(mode) {
            return v.clone();
        }
        let c = &self.majorana_images[&(mode, MajoranaKind::C)];
        let cp = &self.majorana_images[&(mode, MajoranaKind::CPrime)];
        (c * cp).times_i_pow(3)
    }
}

/// Phase exponent `k` with `i^k p` of phase 0; `p` must have odd phase.
pub(crate) fn hermitian_scale(p: &PauliOp) -> u8 {
    (4 - p.phase()) % 4
}
