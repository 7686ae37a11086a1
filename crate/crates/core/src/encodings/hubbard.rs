use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorana::MajoranaKind::{C, CPrime};
use crate::majorana::MajoranaMonomial;
use crate::pauli::PauliOp;

use super::{Encoding, EncodingKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

/// Terms of the Hubbard Hamiltonian. With a spin, the operator acts on two
/// stacked copies of the encoding: spin up on qubits `0..N`, spin down on
/// `N..2N`. Without one it acts on a single copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "term", rename_all = "lowercase")]
pub enum HubbardTerm {
    /// `a†_i a_k + a†_k a_i`
    Hopping { i: usize, k: usize, spin: Option<Spin> },
    /// `n_j`
    Number { j: usize, spin: Option<Spin> },
    /// `n_{j↑} n_{j↓}`
    Onsite { j: usize },
}

/// `coeff * pauli`, with `pauli` carrying phase `+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPauli {
    pub coeff: Complex64,
    pub pauli: PauliOp,
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn push(out: &mut Vec<WeightedPauli>, coeff: Complex64, p: PauliOp) {
    let coeff = coeff * i_pow(p.phase());
    let pauli = p.with_phase(0);
    match out.iter_mut().find(|w| w.pauli == pauli) {
        Some(w) => w.coeff += coeff,
        None => out.push(WeightedPauli { coeff, pauli }),
    }
}

fn finish(mut out: Vec<WeightedPauli>) -> Vec<WeightedPauli> {
    out.retain(|w| w.coeff.norm() > 1e-12);
    out
}

fn check_mode(enc: &Encoding, j: usize) -> Result<()> {
    if j >= enc.n_modes {
        return Err(Error::InvalidArgument(format!("mode {j} out of range")));
    }
    Ok(())
}

fn hopping(enc: &Encoding, i: usize, k: usize) -> Result<Vec<WeightedPauli>> {
    check_mode(enc, i)?;
    check_mode(enc, k)?;
    if i == k {
        return Err(Error::NotAdjacent(i, k));
    }
    if let Some(lat) = &enc.lattice {
        lat.edge_between(i, k).ok_or(Error::NotAdjacent(i, k))?;
    }
    let m = enc.n_modes;
    let half = 0.5;
    let terms = [
        (Complex64::new(0.0, half), MajoranaMonomial::from_product(m, &[(i, C), (k, CPrime)])),
        (Complex64::new(0.0, -half), MajoranaMonomial::from_product(m, &[(i, CPrime), (k, C)])),
    ];
    let alg = enc.algebra();
    let mut images = Vec::new();
    for (coeff, mono) in terms {
        let p = alg
            .fermion_to_pauli(&mono)
            .ok_or_else(|| Error::Inconsistent(format!("{mono} is not encoded")))?;
        images.push((coeff, p));
    }
    if enc.kind == EncodingKind::Vc {
        images = localize_vc(enc, i, k, images);
    }
    let mut out = Vec::new();
    for (c, p) in images {
        push(&mut out, c, p);
    }
    Ok(finish(out))
}

/// Multiplies a string-form hopping by the auxiliary-pair stabilizer joining
/// the two sites, which cancels the string when the sites are not
/// consecutive in the ordering.
fn localize_vc(enc: &Encoding, i: usize, k: usize, images: Vec<(Complex64, PauliOp)>) -> Vec<(Complex64, PauliOp)> {
    let pos = |s: usize| enc.jw_order.iter().position(|&x| x == s).unwrap();
    if pos(i).abs_diff(pos(k)) == 1 {
        return images;
    }
    let weight = |imgs: &[(Complex64, PauliOp)]| imgs.iter().map(|(_, p)| p.weight()).max().unwrap_or(0);
    let mut best = images.clone();
    for (p, s) in enc.aux_pairs.iter().zip(&enc.stabilizers) {
        let sites = (p.first.0.min(p.second.0), p.first.0.max(p.second.0));
        if sites != (i.min(k), i.max(k)) {
            continue;
        }
        let cand: Vec<(Complex64, PauliOp)> = images.iter().map(|(c, q)| (*c, q * s)).collect();
        if weight(&cand) < weight(&best) {
            best = cand;
        }
    }
    best
}

fn number(enc: &Encoding, j: usize) -> Result<Vec<WeightedPauli>> {
    check_mode(enc, j)?;
    let n = enc.n_qubits;
    let mut out = Vec::new();
    push(&mut out, Complex64::new(0.5, 0.0), PauliOp::identity(n));
    push(&mut out, Complex64::new(-0.5, 0.0), enc.dephasing_image(j));
    Ok(finish(out))
}

fn embed(terms: Vec<WeightedPauli>, n: usize, spin: Spin) -> Vec<WeightedPauli> {
    let offset = if spin == Spin::Up { 0 } else { n };
    terms.into_iter().map(|w| WeightedPauli { coeff: w.coeff, pauli: w.pauli.embed(2 * n, offset) }).collect()
}

pub fn encode_hubbard_term(enc: &Encoding, term: HubbardTerm) -> Result<Vec<WeightedPauli>> {
    let n = enc.n_qubits;
    match term {
        HubbardTerm::Hopping { i, k, spin } => {
            let t = hopping(enc, i, k)?;
            Ok(match spin {
                Some(s) => embed(t, n, s),
                None => t,
            })
        }
        HubbardTerm::Number { j, spin } => {
            let t = number(enc, j)?;
            Ok(match spin {
                Some(s) => embed(t, n, s),
                None => t,
            })
        }
        HubbardTerm::Onsite { j } => {
            let up = embed(number(enc, j)?, n, Spin::Up);
            let down = embed(number(enc, j)?, n, Spin::Down);
            let mut out = Vec::new();
            for a in &up {
                for b in &down {
                    push(&mut out, a.coeff * b.coeff, &a.pauli * &b.pauli);
                }
            }
            Ok(finish(out))
        }
    }
}
