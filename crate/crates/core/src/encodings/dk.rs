use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Basis, Insert};
use crate::lattice::{EdgeClass, Lattice};
use crate::majorana::MajoranaMonomial;
use crate::pauli::{Letter, PauliOp};

use super::algebra::fermion_vector;
use super::{EdgeImage, Encoding, EncodingKind, LogicalAlgebra, LogicalGenerator, QubitRole, VariantFlags};

/// `i^L Ẽ_{p0 p1} Ẽ_{p1 p2} … Ẽ_{p(L-1) p0}` for a closed site cycle.
pub(crate) fn loop_operator(enc: &Encoding, cycle: &[usize]) -> Result<PauliOp> {
    let mut acc = PauliOp::identity(enc.n_qubits);
    for k in 0..cycle.len() {
        acc = &acc * &enc.edge_image(cycle[k], cycle[(k + 1) % cycle.len()])?;
    }
    Ok(acc.times_i_pow((cycle.len() % 4) as u8))
}

fn straight_edge_image(n: usize, class: EdgeClass, tail: usize, head: usize, face_q: Option<usize>) -> PauliOp {
    let mut p = PauliOp::from_letters(n, &[(tail, Letter::X), (head, Letter::Y)]);
    if let Some(q) = face_q {
        p.set(q, if class == EdgeClass::Horizontal { Letter::Y } else { Letter::X });
    }
    if class == EdgeClass::VerticalUp {
        p = p.negated();
    }
    p
}

pub fn build_dk(lattice: &Lattice, parity_stabilizer: bool) -> Result<Encoding> {
    let m = lattice.n_sites();
    let mut face_q = BTreeMap::new();
    let mut layout: Vec<QubitRole> = (0..m).map(|site| QubitRole::Vertex { site }).collect();
    for (f, _) in lattice.odd_faces() {
        face_q.insert(f, layout.len());
        layout.push(QubitRole::Face { face: f });
    }
    let n = layout.len();

    let mut enc = Encoding {
        kind: EncodingKind::Dk,
        lattice: Some(lattice.clone()),
        n_qubits: n,
        n_modes: m,
        layout,
        stabilizers: vec![],
        stabilizer_labels: vec![],
        majorana_images: BTreeMap::new(),
        aux_images: BTreeMap::new(),
        aux_pairs: vec![],
        jw_order: vec![],
        edge_images: vec![],
        vertex_images: (0..m).map(|v| PauliOp::single(n, v, Letter::Z)).collect(),
        corner_generators: vec![],
        flags: VariantFlags {
            dk_corner_shaved: !lattice.shaved_corners().is_empty(),
            parity_stabilizer_included: parity_stabilizer,
            ..Default::default()
        },
        parity_redundant: false,
    };

    for (k, e) in lattice.edges().iter().enumerate() {
        let pauli = if e.class == EdgeClass::DiagonalCorner {
            PauliOp::identity(n)
        } else {
            straight_edge_image(n, e.class, e.tail(), e.head(), e.odd_face.map(|f| face_q[&f]))
        };
        enc.edge_images.push(EdgeImage { edge: k, tail: e.tail(), head: e.head(), pauli });
    }
    for (k, e) in lattice.edges().iter().enumerate() {
        if e.class != EdgeClass::DiagonalCorner {
            continue;
        }
        let f = e.odd_face.ok_or_else(|| Error::Inconsistent("diagonal edge without face".into()))?;
        let cycle = lattice.faces()[f].cycle.clone();
        let (u, w) = e.endpoints;
        let x = *cycle.iter().find(|&&s| s != u && s != w).expect("triangle");
        let letter_at = |a: usize| enc.edge_image(a, x).map(|p| p.letter(a));
        let p = PauliOp::from_letters(n, &[(u, letter_at(u)?), (w, letter_at(w)?), (face_q[&f], Letter::Z)]);
        enc.edge_images[k].pauli = p;
        let lp = loop_operator(&enc, &cycle)?;
        if !lp.is_identity_up_to_phase() || lp.phase() % 2 == 1 {
            return Err(Error::Inconsistent(format!("corner triangle gives {lp}")));
        }
        if lp.phase() == 2 {
            let neg = enc.edge_images[k].pauli.clone().negated();
            enc.edge_images[k].pauli = neg;
        }
    }

    let mut stab_basis = Gf2Basis::new(2 * n, n);
    for (f, face) in lattice.even_faces() {
        let s = loop_operator(&enc, &face.cycle)?;
        if let Insert::Added(_) = stab_basis.insert(&s.symplectic_vector()) {
            enc.stabilizers.push(s);
            enc.stabilizer_labels.push(format!("face {},{}", lattice.faces()[f].row, lattice.faces()[f].col));
        }
    }
    add_cycle_stabilizers(&mut enc, &mut stab_basis)?;

    if parity_stabilizer {
        let p = PauliOp::z_string(n, 0..m);
        if stab_basis.solve(&p.symplectic_vector()).is_some() {
            enc.parity_redundant = true;
        } else {
            stab_basis.insert(&p.symplectic_vector());
            enc.stabilizers.push(p);
            enc.stabilizer_labels.push("parity".into());
        }
    }

    if enc.n_encoded_qubits() >= m {
        enc.corner_generators = corner_majoranas(&enc);
    }
    Ok(enc)
}

/// Closed edge cycles that the faces do not generate (the torus has two)
/// still multiply to a scalar on the fermion side; their qubit images are
/// added as stabilizers so the relation holds on the code space.
fn add_cycle_stabilizers(enc: &mut Encoding, stab_basis: &mut Gf2Basis) -> Result<()> {
    let m = enc.n_modes;
    let edges: Vec<(MajoranaMonomial, PauliOp)> = enc
        .edge_images
        .iter()
        .map(|e| (MajoranaMonomial::edge(m, e.tail, e.head), e.pauli.clone()))
        .collect();
    let mut basis = Gf2Basis::new(2 * m, edges.len().max(1));
    let mut items = Vec::new();
    for (e, (f, q)) in edges.iter().enumerate() {
        let Insert::Dependent(slots) = basis.insert(&fermion_vector(f)) else {
            items.push(e);
            continue;
        };
        let mut fp = MajoranaMonomial::identity(m);
        let mut qp = PauliOp::identity(enc.n_qubits);
        for &s in &slots {
            fp = &fp * &edges[items[s]].0;
            qp = &qp * &edges[items[s]].1;
        }
        // f = i^k fp, so (i^k qp)^-1 q must act as +1
        let k = (f.phase() + 4 - fp.phase()) % 4;
        let rel = &qp.times_i_pow(k).inverse() * q;
        let v = rel.symplectic_vector();
        if v.is_zero() {
            if rel.phase() != 0 {
                return Err(Error::Inconsistent(format!("edge cycle through edge {e} gives {rel}")));
            }
            continue;
        }
        if let Some(slots) = stab_basis.solve(&v) {
            let s = slots
                .iter()
                .fold(PauliOp::identity(enc.n_qubits), |acc, &i| &acc * &enc.stabilizers[i]);
            if (rel.phase() + 4 - s.phase()) % 4 != 0 {
                return Err(Error::Inconsistent(format!("edge cycle through edge {e} contradicts faces")));
            }
            continue;
        }
        if rel.phase() % 2 == 1 {
            return Err(Error::Inconsistent(format!("edge cycle through edge {e} is not Hermitian")));
        }
        stab_basis.insert(&v);
        enc.stabilizers.push(rel);
        enc.stabilizer_labels.push(format!("cycle {e}"));
    }
    Ok(())
}

/// Low-weight qubit operators that behave like a single Majorana on one
/// site: they anticommute with that site's vertex and edge images, commute
/// with every other generator and with the stabilizers. The first one found
/// is taken as `c` on its site; later ones are kept only when the generators
/// so far already express them, with the image they imply.
fn corner_majoranas(enc: &Encoding) -> Vec<LogicalGenerator> {
    let lattice = enc.lattice.as_ref().expect("DK has a lattice");
    let m = enc.n_modes;
    let mut gens = enc.logical_generators();
    let mut out: Vec<LogicalGenerator> = Vec::new();
    // Anchor on a shaved triangle when there is one, so its Majorana stays local.
    let mut order: Vec<usize> = lattice
        .edges()
        .iter()
        .filter(|e| e.class == EdgeClass::DiagonalCorner)
        .flat_map(|e| [e.tail(), e.head()])
        .collect();
    let rest: Vec<usize> = (0..m).filter(|v| !order.contains(v)).collect();
    order.extend(rest);
    for v in order {
        let Some(q) = single_majorana_search(enc, lattice, v) else { continue };
        if out.is_empty() {
            let g = LogicalGenerator { label: format!("corner g{v}"), fermion: MajoranaMonomial::c(m, v), pauli: q };
            gens.push(g.clone());
            out.push(g);
            continue;
        }
        let alg = LogicalAlgebra::from_parts(enc.n_qubits, m, enc.stabilizers.clone(), gens.clone());
        if let Some(d) = alg.pauli_to_fermion(&q) {
            out.push(LogicalGenerator { label: format!("corner g{v}"), fermion: d.fermion, pauli: q });
        }
    }
    out
}

fn single_majorana_search(enc: &Encoding, lattice: &Lattice, v: usize) -> Option<PauliOp> {
    let n = enc.n_qubits;
    let mut qubits = vec![v];
    for f in lattice.faces_of(v) {
        if let Some(q) = enc.qubit_of(QubitRole::Face { face: f }) {
            qubits.push(q);
        }
    }
    let incident: Vec<bool> = enc.edge_images.iter().map(|e| e.tail == v || e.head == v).collect();
    let ok = |p: &PauliOp| {
        enc.stabilizers.iter().all(|s| p.symplectic_product(s) == 0)
            && enc
                .vertex_images
                .iter()
                .enumerate()
                .all(|(u, z)| (p.symplectic_product(z) == 1) == (u == v))
            && enc
                .edge_images
                .iter()
                .zip(&incident)
                .all(|(e, &inc)| (p.symplectic_product(&e.pauli) == 1) == inc)
    };
    for lv in Letter::NON_IDENTITY {
        let p = PauliOp::single(n, v, lv);
        if ok(&p) {
            return Some(p);
        }
    }
    for lv in Letter::NON_IDENTITY {
        for &q in &qubits[1..] {
            for lq in Letter::NON_IDENTITY {
                let p = PauliOp::from_letters(n, &[(v, lv), (q, lq)]);
                if ok(&p) {
                    return Some(p);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, Boundary, Corner};

    fn dk(rows: usize, cols: usize, offset: u8) -> Encoding {
        build_dk(&build_lattice(rows, cols, Boundary::Open, offset).unwrap(), false).unwrap()
    }

    #[test]
    fn three_by_three_layout() {
        let enc = dk(3, 3, 0);
        assert_eq!(enc.n_qubits(), 11);
        assert_eq!(enc.stabilizer_generators().len(), 2);
        assert_eq!(enc.n_encoded_qubits(), 9);
        assert_eq!(enc.vertex_images()[4].to_string(), "+Z4");
    }

    #[test]
    fn downward_edge_rule() {
        let enc = dk(3, 3, 0);
        let lat = enc.lattice().unwrap();
        let e = enc
            .edge_images()
            .iter()
            .find(|e| lat.edges()[e.edge].class == EdgeClass::VerticalDown && lat.edges()[e.edge].odd_face.is_some())
            .unwrap();
        let f = enc.qubit_of(QubitRole::Face { face: lat.edges()[e.edge].odd_face.unwrap() }).unwrap();
        let want = PauliOp::from_letters(11, &[(e.tail, Letter::X), (e.head, Letter::Y), (f, Letter::X)]);
        assert_eq!(e.pauli, want);
        assert_eq!(enc.edge_image(e.head, e.tail).unwrap(), want.negated());
    }

    #[test]
    fn interior_even_face_stabilizer_form() {
        // 4x4 with offset 1 has the central face (1,1) even
        let enc = dk(4, 4, 1);
        let lat = enc.lattice().unwrap();
        let (fid, face) = lat.even_faces().find(|(_, f)| (f.row, f.col) == (1, 1)).unwrap();
        let k = enc.stabilizer_labels().iter().position(|l| l == "face 1,1").unwrap();
        let s = &enc.stabilizer_generators()[k];
        assert_eq!(s.phase(), 0);
        for &v in &face.cycle {
            assert_eq!(s.letter(v), Letter::Z);
        }
        // top, right, bottom, left neighbours carry Y, X, Y, X
        let want = [Letter::Y, Letter::X, Letter::Y, Letter::X];
        for (k, &e) in face.edges.iter().enumerate() {
            let f = lat.edges()[e].odd_face.unwrap();
            assert_ne!(f, fid);
            assert_eq!(s.letter(enc.qubit_of(QubitRole::Face { face: f }).unwrap()), want[k]);
        }
        assert_eq!(s.weight(), 8);
    }

    #[test]
    fn odd_face_loops_are_identity() {
        for (r, c, o) in [(3, 3, 0), (4, 4, 0), (4, 4, 1), (3, 4, 1), (5, 5, 0)] {
            let enc = dk(r, c, o);
            for (_, f) in enc.lattice().unwrap().odd_faces() {
                let lp = loop_operator(&enc, &f.cycle).unwrap();
                assert!(lp.is_identity(), "{r}x{c}: {lp}");
            }
        }
    }

    #[test]
    fn relations_hold_on_open_lattices() {
        for (r, c, o) in [(2, 2, 0), (3, 3, 0), (3, 3, 1), (4, 4, 0), (4, 4, 1), (3, 4, 0), (5, 4, 1)] {
            let enc = dk(r, c, o);
            let alg = enc.algebra();
            assert!(alg.violations().is_empty(), "{r}x{c}/{o}: {:?}", alg.violations());
            assert_eq!(alg.stabilizer_rank(), enc.stabilizer_generators().len());
            assert!(enc.stabilizer_labels().iter().all(|l| l.starts_with("face")));
        }
    }

    #[test]
    fn shaved_corner_majorana_is_weight_two() {
        let lat = build_lattice(3, 3, Boundary::Open, 0).unwrap().shave_corner(Corner::TopRight).unwrap();
        let enc = build_dk(&lat, false).unwrap();
        assert!(enc.variant_flags().dk_corner_shaved);
        assert!(enc.algebra().violations().is_empty());
        let diag = lat.edges().iter().position(|e| e.class == EdgeClass::DiagonalCorner).unwrap();
        let tri = lat.edges()[diag].odd_face.unwrap();
        let lp = loop_operator(&enc, &lat.faces()[tri].cycle).unwrap();
        assert!(lp.is_identity());
        let (u, w) = lat.edges()[diag].endpoints;
        let near: Vec<_> = enc.corner_generators().iter().filter(|g| g.pauli.letter(u) != Letter::I || g.pauli.letter(w) != Letter::I).collect();
        assert!(!near.is_empty());
        assert!(near.iter().all(|g| g.pauli.weight() == 2));
    }
}
