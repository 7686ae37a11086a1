//! Syndromes and classification of Pauli errors against an encoding.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::encodings::{Encoding, LogicalAlgebra, QubitRole};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Basis};
use crate::majorana::{MajoranaMonomial, Parity};
use crate::pauli::{Letter, PauliOp};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome(BitVec);

impl Syndrome {
    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Generators that anticommute with the error.
    pub fn flagged(&self) -> Vec<usize> {
        self.0.ones().collect()
    }

    pub fn to_hex(&self) -> String {
        self.0.to_hex()
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Detectable,
    Stabilizer,
    Logical,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Detectable => "detectable",
            Category::Stabilizer => "stabilizer",
            Category::Logical => "logical",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorReport {
    pub error: PauliOp,
    pub syndrome: Syndrome,
    pub category: Category,
    pub fermionic_image: Option<MajoranaMonomial>,
    pub parity_switching: bool,
    pub mode_weight: Option<usize>,
    /// The image is pinned down only up to logical qubits that the fermionic
    /// generators do not reach; the phase of such an image is nominal.
    pub beyond_fermionic: bool,
}

impl ErrorReport {
    /// True when the image is a product of dephasing operators.
    pub fn is_phase_noise(&self) -> bool {
        self.fermionic_image.as_ref().is_some_and(is_dephasing_product)
    }
}

pub fn is_dephasing_product(m: &MajoranaMonomial) -> bool {
    let f = m.factors();
    f.len() % 2 == 0 && f.chunks(2).all(|p| p[0].0 == p[1].0)
}

pub fn syndrome_of(enc: &Encoding, error: &PauliOp) -> Result<Syndrome> {
    if error.n_qubits() != enc.n_qubits() {
        return Err(Error::DimensionMismatch { left: error.n_qubits(), right: enc.n_qubits() });
    }
    Ok(Syndrome(enc.stabilizer_generators().iter().map(|s| error.symplectic_product(s) == 1).collect()))
}

/// Classifier with the linear algebra for one encoding set up once.
pub struct Classifier<'a> {
    enc: &'a Encoding,
    alg: LogicalAlgebra,
    // columns of the commutation system, one per Majorana
    pattern: Gf2Basis,
    pattern_cols: Vec<usize>,
}

impl<'a> Classifier<'a> {
    pub fn new(enc: &'a Encoding) -> Self {
        let alg = enc.algebra();
        let m = enc.n_primary_modes();
        let gens = alg.generators();
        let mut pattern = Gf2Basis::new(gens.len().max(1), 2 * m);
        let mut pattern_cols = Vec::new();
        for j in 0..2 * m {
            // monomial F anticommutes with g iff |F||g| + |F ∩ g| is odd
            let col: BitVec = gens
                .iter()
                .map(|g| {
                    let fv = crate::encodings::fermion_vector(&g.fermion);
                    fv.get(j) ^ (g.fermion.factors().len() % 2 == 1)
                })
                .collect();
            if let crate::gf2::Insert::Added(_) = pattern.insert(&col) {
                pattern_cols.push(j);
            }
        }
        Classifier { enc, alg, pattern, pattern_cols }
    }

    pub fn algebra(&self) -> &LogicalAlgebra {
        &self.alg
    }

    pub fn classify(&self, error: &PauliOp) -> Result<ErrorReport> {
        let syndrome = syndrome_of(self.enc, error)?;
        let mut report = ErrorReport {
            error: error.clone(),
            syndrome,
            category: Category::Detectable,
            fermionic_image: None,
            parity_switching: false,
            mode_weight: None,
            beyond_fermionic: false,
        };
        if !report.syndrome.is_zero() {
            return Ok(report);
        }
        let image = match self.alg.pauli_to_fermion(error) {
            Some(d) if d.generators.is_empty() => {
                report.category = Category::Stabilizer;
                return Ok(report);
            }
            Some(d) => self.lighter(d.fermion),
            None => {
                report.beyond_fermionic = true;
                self.by_commutation(error)?
            }
        };
        report.category = Category::Logical;
        report.parity_switching = image.parity_sector() == Parity::Odd;
        report.mode_weight = Some(image.mode_weight());
        report.fermionic_image = Some(image);
        Ok(report)
    }

    /// With fixed parity `F` and `F P i^-p` act alike; keep the one on fewer
    /// modes, `F` on ties.
    fn lighter(&self, f: MajoranaMonomial) -> MajoranaMonomial {
        let Some(p) = self.alg.fixed_parity() else { return f };
        let alt = (&f * &MajoranaMonomial::parity_operator(f.n_modes())).times_i_pow((4 - p) % 4);
        if alt.mode_weight() < f.mode_weight() { alt } else { f }
    }

    /// Fallback for zero-syndrome operators outside the span of the
    /// generators: the monomial with the same commutation pattern against
    /// every generator, Hermitian with a `+` sign.
    fn by_commutation(&self, error: &PauliOp) -> Result<MajoranaMonomial> {
        let m = self.enc.n_primary_modes();
        let rhs: BitVec =
            self.alg.generators().iter().map(|g| error.symplectic_product(&g.pauli) == 1).collect();
        let slots = self.pattern.solve(&rhs).ok_or_else(|| {
            Error::Inconsistent(format!("zero-syndrome {error} has no fermionic counterpart"))
        })?;
        let mut bits = vec![false; 2 * m];
        for s in slots {
            bits[self.pattern_cols[s]] = true;
        }
        let factors: Vec<_> = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| (j / 2, if j % 2 == 0 { crate::MajoranaKind::C } else { crate::MajoranaKind::CPrime }))
            .collect();
        let f = MajoranaMonomial::from_product(m, &factors).with_phase(0);
        let f = if f.is_hermitian() { f } else { f.with_phase(1) };
        let alt = (&f * &MajoranaMonomial::parity_operator(m)).with_phase(0);
        let alt = if alt.is_hermitian() { alt } else { alt.with_phase(1) };
        Ok(if alt.mode_weight() < f.mode_weight() { alt } else { f })
    }
}

pub fn classify(enc: &Encoding, error: &PauliOp) -> Result<ErrorReport> {
    Classifier::new(enc).classify(error)
}

/// Key of a summary cell: weight, category, parity switching, mode weight.
pub type SummaryKey = (usize, Category, bool, Option<usize>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub reports: Vec<ErrorReport>,
    pub summary: BTreeMap<SummaryKey, usize>,
}

impl Enumeration {
    /// Undetectable non-phase-noise errors touching a boundary site or face
    /// at weight two and above; empty on periodic lattices.
    pub fn boundary_section<'b>(&'b self, enc: &Encoding) -> Vec<&'b ErrorReport> {
        let Some(lat) = enc.lattice() else { return vec![] };
        if lat.boundary() == crate::lattice::Boundary::Periodic {
            return vec![];
        }
        let on_boundary = |q: usize| match enc.qubit_layout()[q] {
            QubitRole::Primary { site } | QubitRole::Auxiliary { site } | QubitRole::Vertex { site } => {
                lat.neighbors(site).len() < 4
            }
            QubitRole::Face { face } => {
                let f = &lat.faces()[face];
                f.cycle.iter().any(|&s| lat.neighbors(s).len() < 4)
            }
            QubitRole::Mode { .. } => false,
        };
        self.reports
            .iter()
            .filter(|r| {
                r.error.weight() >= 2
                    && r.category == Category::Logical
                    && !r.is_phase_noise()
                    && r.error.support().into_iter().any(on_boundary)
            })
            .collect()
    }
}

/// All Paulis of weight `1..=max_weight`, qubit sets in lexicographic order
/// and letters X < Y < Z within each set.
pub fn paulis_up_to_weight(n: usize, max_weight: usize) -> Vec<PauliOp> {
    fn rec(n: usize, start: usize, left: usize, cur: &mut Vec<(usize, Letter)>, out: &mut Vec<PauliOp>) {
        if left == 0 {
            out.push(PauliOp::from_letters(n, cur));
            return;
        }
        for q in start..n {
            for l in Letter::NON_IDENTITY {
                cur.push((q, l));
                rec(n, q + 1, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for w in 1..=max_weight {
        rec(n, 0, w, &mut Vec::new(), &mut out);
    }
    out
}

pub fn enumerate_errors(enc: &Encoding, max_weight: usize) -> Result<Enumeration> {
    let classifier = Classifier::new(enc);
    let mut reports = Vec::new();
    let mut summary = BTreeMap::new();
    for p in paulis_up_to_weight(enc.n_qubits(), max_weight) {
        let r = classifier.classify(&p)?;
        *summary.entry((p.weight(), r.category, r.parity_switching, r.mode_weight)).or_insert(0) += 1;
        reports.push(r);
    }
    Ok(Enumeration { reports, summary })
}

/// Physical qubit carrying the occupation of a mode, if the layout has one.
fn primary_qubit(enc: &Encoding, q: usize) -> bool {
    matches!(
        enc.qubit_layout()[q],
        QubitRole::Primary { .. } | QubitRole::Vertex { .. } | QubitRole::Mode { .. }
    )
}

/// Applies `X_j` (coin 0) or `Y_j` (coin 1) after a detected single-qubit X
/// or Y error on a primary qubit and classifies what is left.
pub fn random_xy_correction(enc: &Encoding, detected: &ErrorReport, coin: u8) -> Result<ErrorReport> {
    let support = detected.error.support();
    let ok = detected.category == Category::Detectable
        && support.len() == 1
        && matches!(detected.error.letter(support[0]), Letter::X | Letter::Y)
        && primary_qubit(enc, support[0]);
    if !ok || coin > 1 {
        return Err(Error::InvalidArgument(format!(
            "{} is not a detected X/Y error on a primary qubit",
            detected.error
        )));
    }
    let q = support[0];
    let fix = PauliOp::single(enc.n_qubits(), q, if coin == 0 { Letter::X } else { Letter::Y });
    let residual = (&fix * &detected.error).with_phase(0);
    classify(enc, &residual)
}

const CSV_HEADER: [&str; 7] =
    ["error", "weight", "syndrome", "category", "fermionic_image", "mode_weight", "parity_switching"];

fn row(r: &ErrorReport) -> [String; 7] {
    [
        r.error.to_string(),
        r.error.weight().to_string(),
        r.syndrome.to_hex(),
        r.category.to_string(),
        r.fermionic_image.as_ref().map(|m| m.to_string()).unwrap_or_default(),
        r.mode_weight.map(|w| w.to_string()).unwrap_or_default(),
        r.parity_switching.to_string(),
    ]
}

pub fn write_csv<W: Write>(reports: &[ErrorReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        w.write_record(row(r))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonRow {
    error: String,
    weight: usize,
    syndrome: String,
    category: Category,
    #[serde(skip_serializing_if = "Option::is_none")]
    fermionic_image: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode_weight: Option<usize>,
    parity_switching: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    beyond_fermionic: bool,
}

#[derive(Serialize)]
struct JsonCell {
    weight: usize,
    category: Category,
    parity_switching: bool,
    mode_weight: Option<usize>,
    count: usize,
}

fn json_row(r: &ErrorReport) -> JsonRow {
    JsonRow {
        error: r.error.to_string(),
        weight: r.error.weight(),
        syndrome: r.syndrome.to_hex(),
        category: r.category,
        fermionic_image: r.fermionic_image.as_ref().map(|m| m.to_string()),
        mode_weight: r.mode_weight,
        parity_switching: r.parity_switching,
        beyond_fermionic: r.beyond_fermionic,
    }
}

pub fn summary_rows(summary: &BTreeMap<SummaryKey, usize>) -> Vec<[String; 5]> {
    summary
        .iter()
        .map(|(&(w, c, p, m), &n)| {
            [w.to_string(), c.to_string(), p.to_string(), m.map(|m| m.to_string()).unwrap_or_default(), n.to_string()]
        })
        .collect()
}

pub fn write_summary_csv<W: Write>(summary: &BTreeMap<SummaryKey, usize>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["weight", "category", "parity_switching", "mode_weight", "count"])?;
    for r in summary_rows(summary) {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON document with the rows, the summary cells and the boundary section.
pub fn to_json(enc: &Encoding, e: &Enumeration) -> Result<String> {
    let cells: Vec<JsonCell> = e
        .summary
        .iter()
        .map(|(&(weight, category, parity_switching, mode_weight), &count)| JsonCell {
            weight,
            category,
            parity_switching,
            mode_weight,
            count,
        })
        .collect();
    let doc = serde_json::json!({
        "n_qubits": enc.n_qubits(),
        "n_stabilizers": enc.stabilizer_generators().len(),
        "rows": e.reports.iter().map(json_row).collect::<Vec<_>>(),
        "summary": cells,
        "boundary": e.boundary_section(enc).into_iter().map(json_row).collect::<Vec<_>>(),
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}
