use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{default_jw_order, Boundary, Lattice};
use crate::majorana::MajoranaKind::{self, C, CPrime};
use crate::pauli::PauliOp;

use super::jw::jw_string;
use super::{hermitian_scale, AuxPair, Encoding, EncodingKind, QubitRole, VariantFlags};

/// Auxiliary pairing on a full open grid.
///
/// Every column carries vertical pairs `(d_r, d'_{r+1})`. The leftover `d'`
/// on row 0 and `d` on the last row are closed up horizontally in column
/// pairs `(0,1), (2,3), …`. With an odd column count the last column pairs
/// rows `(r, r+1)` for odd `r` twice, crosswise, and any site left over pairs
/// its two auxiliary Majoranas with each other.
pub(crate) fn vc_pairs(lattice: &Lattice) -> Vec<AuxPair> {
    let (rows, cols) = (lattice.rows(), lattice.cols());
    let id = |r: usize, c: usize| lattice.site_id(r, c).expect("full grid");
    let paired_cols = if cols % 2 == 0 { cols } else { cols - 1 };
    let mut pairs = Vec::new();
    for c in 0..paired_cols {
        for r in 0..rows - 1 {
            pairs.push(AuxPair { first: (id(r, c), C), second: (id(r + 1, c), CPrime) });
        }
    }
    for c in (0..paired_cols).step_by(2) {
        pairs.push(AuxPair { first: (id(0, c), CPrime), second: (id(0, c + 1), CPrime) });
        pairs.push(AuxPair { first: (id(rows - 1, c), C), second: (id(rows - 1, c + 1), C) });
    }
    if cols % 2 == 1 {
        let c = cols - 1;
        let mut used = vec![false; rows];
        for r in (1..rows.saturating_sub(1)).step_by(2) {
            pairs.push(AuxPair { first: (id(r, c), C), second: (id(r + 1, c), CPrime) });
            pairs.push(AuxPair { first: (id(r, c), CPrime), second: (id(r + 1, c), C) });
            used[r] = true;
            used[r + 1] = true;
        }
        for r in (0..rows).filter(|&r| !used[r]) {
            pairs.push(AuxPair { first: (id(r, c), C), second: (id(r, c), CPrime) });
        }
    }
    pairs
}

pub fn build_vc(lattice: &Lattice, swap_first_pair: bool) -> Result<Encoding> {
    if lattice.boundary() == Boundary::Periodic {
        return Err(Error::Unsupported("periodic boundary for VC".into()));
    }
    if !lattice.shaved_corners().is_empty() {
        return Err(Error::Unsupported("shaved corners for VC".into()));
    }
    if lattice.max_degree() > 4 {
        return Err(Error::InvalidLattice("VC needs maximum degree 4".into()));
    }
    let order = default_jw_order(lattice)?;
    let m = lattice.n_sites();
    let n = 2 * m;
    let mut layout = vec![QubitRole::Mode { mode: 0 }; n];
    let mut primary_q = vec![0; m];
    let mut aux_q = vec![0; m];
    for (pos, &site) in order.iter().enumerate() {
        let (p, a) = if swap_first_pair && pos == 0 { (1, 0) } else { (2 * pos, 2 * pos + 1) };
        primary_q[site] = p;
        aux_q[site] = a;
        layout[p] = QubitRole::Primary { site };
        layout[a] = QubitRole::Auxiliary { site };
    }
    let mut majorana_images = BTreeMap::new();
    let mut aux_images = BTreeMap::new();
    for site in 0..m {
        for kind in [C, CPrime] {
            majorana_images.insert((site, kind), jw_string(n, primary_q[site], kind));
            aux_images.insert((site, kind), jw_string(n, aux_q[site], kind));
        }
    }
    let pairs: Vec<AuxPair> = vc_pairs(lattice)
        .into_iter()
        .map(|p| {
            let key = |(s, k): (usize, MajoranaKind)| (aux_q[s], k);
            if key(p.first) <= key(p.second) { p } else { AuxPair { first: p.second, second: p.first } }
        })
        .collect();

    let mut enc = Encoding {
        kind: EncodingKind::Vc,
        lattice: Some(lattice.clone()),
        n_qubits: n,
        n_modes: m,
        layout,
        stabilizers: vec![],
        stabilizer_labels: vec![],
        majorana_images,
        aux_images,
        aux_pairs: vec![],
        jw_order: order,
        edge_images: vec![],
        vertex_images: vec![],
        corner_generators: vec![],
        flags: VariantFlags { vc_first_pair_swapped: swap_first_pair, ..Default::default() },
        parity_redundant: false,
    };
    for p in &pairs {
        enc.stabilizers.push(aux_pair_stabilizer(&enc, p.first, p.second)?);
        enc.stabilizer_labels.push(format!("aux {} {}", label(p.first), label(p.second)));
    }
    enc.aux_pairs = pairs;
    Ok(enc)
}

fn label((site, kind): (usize, MajoranaKind)) -> String {
    format!("g{site}{}", if kind == CPrime { "'" } else { "" })
}

/// `±i` times the product of two auxiliary Majorana images (earlier one
/// first), with the sign fixed so the result is Hermitian with phase `+1`.
pub fn aux_pair_stabilizer(
    enc: &Encoding,
    a: (usize, MajoranaKind),
    b: (usize, MajoranaKind),
) -> Result<PauliOp> {
    if a == b {
        return Err(Error::InvalidArgument("a Majorana cannot pair with itself".into()));
    }
    let img = |(s, k): (usize, MajoranaKind)| {
        enc.aux_images
            .get(&(s, k))
            .ok_or_else(|| Error::InvalidArgument(format!("no auxiliary Majorana on site {s}")))
    };
    let (pa, pb) = (img(a)?, img(b)?);
    let (first, second) = if pa.support().last() <= pb.support().last() { (pa, pb) } else { (pb, pa) };
    let p = first * second;
    Ok(p.clone().times_i_pow(hermitian_scale(&p)))
}
