//! Named invariant checks over an encoding, symbolic first and then on the
//! dense oracle when the qubit count allows it.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::dense_oracle::{
    code_isometry, code_projector_rank, random_code_vectors, relation_error, verify_with_isometry, LogicalCheck,
    DEFAULT_CAP,
};
use crate::encodings::{Encoding, EncodingKind};
use crate::error::Result;
use crate::error_analysis::{enumerate_errors, Category};
use crate::gf2;
use crate::pauli::PauliOp;

pub const RELATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "SKIP",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name, outcome: if ok { Outcome::Pass } else { Outcome::Fail }, detail: detail.into() }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Oracle checks beyond the cap fail instead of being skipped.
    pub strict: bool,
    pub oracle: bool,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { strict: false, oracle: true, seed: 7 }
    }
}

/// Runs every applicable check. `reference` is a fresh construction to
/// compare against, typically when `enc` came from a dump file.
pub fn run_checks(enc: &Encoding, reference: Option<&Encoding>, opts: VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    if let Some(r) = reference {
        out.push(dump_matches(enc, r));
    }
    out.extend(symbolic_checks(enc)?);
    if !opts.oracle {
        return Ok(out);
    }
    if enc.n_qubits() > DEFAULT_CAP {
        let outcome = if opts.strict { Outcome::Fail } else { Outcome::Skipped };
        out.push(CheckResult {
            name: "dense oracle",
            outcome,
            detail: format!("{} qubits exceed the oracle cap of {DEFAULT_CAP}", enc.n_qubits()),
        });
        return Ok(out);
    }
    out.extend(oracle_checks(enc, opts.seed)?);
    Ok(out)
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.outcome != Outcome::Fail)
}

fn dump_matches(enc: &Encoding, reference: &Encoding) -> CheckResult {
    let (a, b) = (enc.to_dump(), reference.to_dump());
    let mut diffs = Vec::new();
    let sections = [
        ("stabilizers", &a.stabilizers, &b.stabilizers),
        ("majorana images", &a.majorana_images, &b.majorana_images),
        ("aux images", &a.aux_images, &b.aux_images),
        ("edge images", &a.edge_images, &b.edge_images),
        ("vertex images", &a.vertex_images, &b.vertex_images),
        ("corner generators", &a.corner_generators, &b.corner_generators),
    ];
    for (name, x, y) in sections {
        if x != y {
            let first = x.iter().zip(y.iter()).find(|(p, q)| p != q).map(|(p, _)| p.label.clone());
            diffs.push(match first {
                Some(l) => format!("{name} ({l})"),
                None => name.to_string(),
            });
        }
    }
    if a.layout != b.layout || a.n_qubits != b.n_qubits {
        diffs.push("layout".into());
    }
    if diffs.is_empty() {
        check("dump matches construction", true, "identical")
    } else {
        check("dump matches construction", false, format!("differs in {}", diffs.join(", ")))
    }
}

fn symbolic_checks(enc: &Encoding) -> Result<Vec<CheckResult>> {
    let stabs = enc.stabilizer_generators();
    let mut out = Vec::new();

    let mut bad = None;
    'outer: for (i, a) in stabs.iter().enumerate() {
        for b in &stabs[i + 1..] {
            if !a.try_commutes(b)? {
                bad = Some(format!("{a} and {b} anticommute"));
                break 'outer;
            }
        }
    }
    out.push(check("stabilizers commute", bad.is_none(), bad.unwrap_or_else(|| format!("{} generators", stabs.len()))));

    let hermitian = stabs.iter().all(|s| s.is_hermitian() && !s.is_identity_up_to_phase());
    out.push(check("stabilizers hermitian", hermitian, "each squares to +I"));

    let rank = gf2::rank(&stabs.iter().map(|s| s.symplectic_vector()).collect::<Vec<_>>());
    out.push(check("stabilizers independent", rank == stabs.len(), format!("rank {rank} of {}", stabs.len())));

    let gens = enc.logical_generators();
    let clash = gens.iter().find_map(|g| {
        stabs.iter().find(|s| s.symplectic_product(&g.pauli) == 1).map(|s| format!("{} vs {s}", g.label))
    });
    out.push(check(
        "generators commute with stabilizers",
        clash.is_none(),
        clash.unwrap_or_else(|| format!("{} generators", gens.len())),
    ));

    let alg = enc.algebra();
    let v = alg.violations();
    out.push(check(
        "generator relations",
        v.is_empty(),
        if v.is_empty() { "all pairwise relations hold".to_string() } else { v[0].clone() },
    ));

    if enc.kind() == EncodingKind::Dk {
        out.push(loop_condition(enc)?);
    }
    Ok(out)
}

/// Every face loop `i^L ∏ Ẽ` must be `+I` on the code space: the identity
/// for odd faces, a stabilizer with sign `+1` for even faces.
fn loop_condition(enc: &Encoding) -> Result<CheckResult> {
    let Some(lat) = enc.lattice() else { return Ok(check("loop condition", true, "no lattice")) };
    let alg = enc.algebra();
    for face in lat.faces() {
        let l = face_loop(enc, &face.cycle)?;
        if alg.stabilizer_phase(&l) != Some(0) {
            return Ok(check("loop condition", false, format!("face {},{} gives {l}", face.row, face.col)));
        }
    }
    Ok(check("loop condition", true, format!("{} faces", lat.faces().len())))
}

fn face_loop(enc: &Encoding, cycle: &[usize]) -> Result<PauliOp> {
    let mut acc = PauliOp::identity(enc.n_qubits());
    for k in 0..cycle.len() {
        acc = &acc * &enc.edge_image(cycle[k], cycle[(k + 1) % cycle.len()])?;
    }
    Ok(acc.times_i_pow((cycle.len() % 4) as u8))
}

fn sign(k: u8) -> Complex64 {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
        [(k % 4) as usize]
}

fn oracle_checks(enc: &Encoding, seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let n = enc.n_qubits();
    let s = enc.stabilizer_generators().len();
    let rank = code_projector_rank(enc)?;
    out.push(check("code projector rank", rank == 1 << (n - s), format!("{rank} (expected 2^{})", n - s)));

    let vectors = random_code_vectors(enc, 3, seed)?;
    let gens = enc.logical_generators();
    let mut worst: f64 = 0.0;
    let mut worst_pair = String::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            let ab = a.fermion.try_mul(&b.fermion)?;
            let err = if std::ptr::eq(a, b) {
                // F² is a scalar.
                relation_error(&[&a.pauli, &a.pauli], &[&PauliOp::identity(n)], sign(ab.phase()), &vectors)
            } else {
                let ba = b.fermion.try_mul(&a.fermion)?;
                let k = (4 + ba.phase() - ab.phase()) % 4;
                relation_error(&[&a.pauli, &b.pauli], &[&b.pauli, &a.pauli], sign(k), &vectors)
            };
            if err > worst {
                worst = err;
                worst_pair = format!("{} with {}", a.label, b.label);
            }
        }
    }
    out.push(check(
        "generator relations on code space",
        worst <= RELATION_TOL,
        format!("{} generators, max error {worst:.1e}{}", gens.len(), if worst_pair.is_empty() { String::new() } else { format!(" ({worst_pair})") }),
    ));

    if enc.kind() == EncodingKind::Dk {
        if let Some(lat) = enc.lattice() {
            let id = PauliOp::identity(n);
            let mut worst: f64 = 0.0;
            for face in lat.faces() {
                let l = face_loop(enc, &face.cycle)?;
                worst = worst.max(relation_error(&[&l], &[&id], sign(0), &vectors));
            }
            out.push(check("loop operators on code space", worst <= RELATION_TOL, format!("max error {worst:.1e}")));
        }
    }

    let iso = code_isometry(enc)?;
    let m = enc.n_primary_modes();
    // Fixed-parity codes are covered by one parity sector.
    if iso.occupations.len() != 1 << enc.n_encoded_qubits() {
        out.push(CheckResult {
            name: "weight-1 logical actions",
            outcome: Outcome::Skipped,
            detail: format!(
                "{} encoded qubits for {m} modes; isometry covers {} occupations",
                enc.n_encoded_qubits(),
                iso.occupations.len()
            ),
        });
        return Ok(out);
    }
    let ortho = iso.orthonormality_error();
    out.push(check("encoded basis orthonormal", ortho < 1e-9, format!("max Gram error {ortho:.1e}")));
    let e = enumerate_errors(enc, 1)?;
    let mut checked = 0;
    let mut failures = Vec::new();
    for r in e.reports.iter().filter(|r| r.category == Category::Logical) {
        let Some(f) = &r.fermionic_image else { continue };
        checked += 1;
        match verify_with_isometry(&iso, &r.error, f)? {
            LogicalCheck::Match { phase: 0 } => {}
            other => failures.push(format!("{} -> {f}: {other:?}", r.error)),
        }
    }
    out.push(check(
        "weight-1 logical actions",
        failures.is_empty(),
        match failures.first() {
            None => format!("{checked} logical errors match their images"),
            Some(f) => format!("{} of {checked} mismatch, first {f}", failures.len()),
        },
    ));
    Ok(out)
}
