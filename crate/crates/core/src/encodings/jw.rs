use std::collections::BTreeMap;

use crate::majorana::MajoranaKind;
use crate::pauli::{Letter, PauliOp};

use super::{Encoding, EncodingKind, QubitRole, VariantFlags};

/// `Z_0 … Z_{q-1}` followed by `X_q` (for `c`) or `Y_q` (for `c'`).
pub(crate) fn jw_string(n_qubits: usize, q: usize, kind: MajoranaKind) -> PauliOp {
    let mut p = PauliOp::z_string(n_qubits, 0..q);
    p.set(q, if kind == MajoranaKind::C { Letter::X } else { Letter::Y });
    p
}

pub fn build_jw(n_modes: usize) -> Encoding {
    assert!(n_modes >= 1, "need at least one mode");
    let mut majorana_images = BTreeMap::new();
    for j in 0..n_modes {
        for kind in [MajoranaKind::C, MajoranaKind::CPrime] {
            majorana_images.insert((j, kind), jw_string(n_modes, j, kind));
        }
    }
    Encoding {
        kind: EncodingKind::Jw,
        lattice: None,
        n_qubits: n_modes,
        n_modes,
        layout: (0..n_modes).map(|mode| QubitRole::Mode { mode }).collect(),
        stabilizers: vec![],
        stabilizer_labels: vec![],
        majorana_images,
        aux_images: BTreeMap::new(),
        aux_pairs: vec![],
        jw_order: (0..n_modes).collect(),
        edge_images: vec![],
        vertex_images: vec![],
        corner_generators: vec![],
        flags: VariantFlags::default(),
        parity_redundant: false,
    }
}
