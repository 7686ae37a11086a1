use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeSpec};
use crate::majorana::{MajoranaKind, MajoranaMonomial};
use crate::pauli::PauliOp;

use super::{build_dk, build_jw, build_vc, AuxPair, Encoding, EncodingKind, QubitRole, VariantFlags};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub qubit: usize,
    #[serde(flatten)]
    pub role: QubitRole,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fermion: Option<String>,
    pub pauli: String,
}

/// Plain-data form of an [`Encoding`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingDump {
    pub kind: EncodingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    pub n_qubits: usize,
    pub n_primary_modes: usize,
    pub flags: VariantFlags,
    pub parity_stabilizer_redundant: bool,
    pub layout: Vec<LayoutEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub jw_order: Vec<usize>,
    pub stabilizers: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_pairs: Vec<AuxPair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub majorana_images: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_images: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edge_images: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertex_images: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corner_generators: Vec<GeneratorEntry>,
}

fn majorana_label(mode: usize, kind: MajoranaKind) -> String {
    format!("g{mode}{}", if kind == MajoranaKind::CPrime { "'" } else { "" })
}

fn parse_majorana_label(s: &str) -> Result<(usize, MajoranaKind)> {
    let bad = || Error::Parse(format!("bad Majorana label {s:?}"));
    let body = s.strip_prefix('g').ok_or_else(bad)?;
    let (digits, kind) = match body.strip_suffix('\'') {
        Some(d) => (d, MajoranaKind::CPrime),
        None => (body, MajoranaKind::C),
    };
    Ok((digits.parse().map_err(|_| bad())?, kind))
}

fn images(map: &BTreeMap<(usize, MajoranaKind), PauliOp>) -> Vec<GeneratorEntry> {
    map.iter()
        .map(|(&(m, k), p)| GeneratorEntry { label: majorana_label(m, k), fermion: None, pauli: p.to_string() })
        .collect()
}

impl Encoding {
    pub fn to_dump(&self) -> EncodingDump {
        EncodingDump {
            kind: self.kind,
            lattice: self.lattice.as_ref().map(|l| l.spec().clone()),
            n_qubits: self.n_qubits,
            n_primary_modes: self.n_modes,
            flags: self.flags,
            parity_stabilizer_redundant: self.parity_redundant,
            layout: self.layout.iter().enumerate().map(|(qubit, &role)| LayoutEntry { qubit, role }).collect(),
            jw_order: self.jw_order.clone(),
            stabilizers: self
                .stabilizers
                .iter()
                .zip(&self.stabilizer_labels)
                .map(|(p, l)| GeneratorEntry { label: l.clone(), fermion: None, pauli: p.to_string() })
                .collect(),
            aux_pairs: self.aux_pairs.clone(),
            majorana_images: images(&self.majorana_images),
            aux_images: images(&self.aux_images),
            edge_images: self
                .edge_images
                .iter()
                .map(|e| GeneratorEntry {
                    label: format!("E{},{}", e.tail, e.head),
                    fermion: None,
                    pauli: e.pauli.to_string(),
                })
                .collect(),
            vertex_images: self
                .vertex_images
                .iter()
                .enumerate()
                .map(|(v, p)| GeneratorEntry { label: format!("V{v}"), fermion: None, pauli: p.to_string() })
                .collect(),
            corner_generators: self
                .corner_generators
                .iter()
                .map(|g| GeneratorEntry {
                    label: g.label.clone(),
                    fermion: Some(g.fermion.to_string()),
                    pauli: g.pauli.to_string(),
                })
                .collect(),
        }
    }

    /// Builds the encoding the dump describes from scratch.
    pub fn rebuild(dump: &EncodingDump) -> Result<Encoding> {
        match dump.kind {
            EncodingKind::Jw => Ok(build_jw(dump.n_primary_modes)),
            EncodingKind::Vc | EncodingKind::Dk => {
                let spec = dump
                    .lattice
                    .clone()
                    .ok_or_else(|| Error::Parse("lattice missing from dump".into()))?;
                let lattice = Lattice::new(spec)?;
                if dump.kind == EncodingKind::Vc {
                    build_vc(&lattice, dump.flags.vc_first_pair_swapped)
                } else {
                    build_dk(&lattice, dump.flags.parity_stabilizer_included)
                }
            }
        }
    }

    /// Takes operators verbatim from the dump on top of the rebuilt
    /// structure, so a tampered dump yields a tampered encoding.
    pub fn from_dump(dump: &EncodingDump) -> Result<Encoding> {
        let mut enc = Self::rebuild(dump)?;
        if dump.n_qubits != enc.n_qubits {
            return Err(Error::DimensionMismatch { left: dump.n_qubits, right: enc.n_qubits });
        }
        let n = enc.n_qubits;
        enc.stabilizers = dump.stabilizers.iter().map(|g| PauliOp::parse(&g.pauli, n)).collect::<Result<_>>()?;
        enc.stabilizer_labels = dump.stabilizers.iter().map(|g| g.label.clone()).collect();
        let parse_map = |entries: &[GeneratorEntry]| -> Result<BTreeMap<(usize, MajoranaKind), PauliOp>> {
            entries.iter().map(|g| Ok((parse_majorana_label(&g.label)?, PauliOp::parse(&g.pauli, n)?))).collect()
        };
        enc.majorana_images = parse_map(&dump.majorana_images)?;
        enc.aux_images = parse_map(&dump.aux_images)?;
        if dump.edge_images.len() != enc.edge_images.len() {
            return Err(Error::Parse("edge image count does not match the lattice".into()));
        }
        for (e, g) in enc.edge_images.iter_mut().zip(&dump.edge_images) {
            e.pauli = PauliOp::parse(&g.pauli, n)?;
        }
        enc.vertex_images =
            dump.vertex_images.iter().map(|g| PauliOp::parse(&g.pauli, n)).collect::<Result<_>>()?;
        for (c, g) in enc.corner_generators.iter_mut().zip(&dump.corner_generators) {
            c.pauli = PauliOp::parse(&g.pauli, n)?;
            if let Some(f) = &g.fermion {
                c.fermion = MajoranaMonomial::parse(f, enc.n_modes)?;
            }
        }
        Ok(enc)
    }
}
