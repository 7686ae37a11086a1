//! Dense complex linear algebra used to check the symplectic machinery.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
//! a basis index. The reference fermionic representation is Jordan-Wigner
//! with mode 0 leftmost; occupation `n_j` is bit `M-1-j` of the index.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encodings::Encoding;
use crate::error::{Error, Result};
use crate::majorana::{MajoranaKind, MajoranaMonomial};
use crate::pauli::{Letter, PauliOp};

pub const DEFAULT_CAP: usize = 14;
pub const TOL: f64 = 1e-12;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

fn i_pow(k: u8) -> C {
    [ONE, I, -ONE, -I][(k % 4) as usize]
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { needed: n, cap });
    }
    Ok(())
}

fn sigma(l: Letter) -> [[C; 2]; 2] {
    match l {
        Letter::I => [[ONE, ZERO], [ZERO, ONE]],
        Letter::X => [[ZERO, ONE], [ONE, ZERO]],
        Letter::Y => [[ZERO, -I], [I, ZERO]],
        Letter::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n_qubits: usize,
    mat: DMatrix<C>,
}

impl DenseOperator {
    pub fn identity(n_qubits: usize) -> Self {
        DenseOperator { n_qubits, mat: DMatrix::identity(1 << n_qubits, 1 << n_qubits) }
    }

    pub fn zeros(n_qubits: usize) -> Self {
        DenseOperator { n_qubits, mat: DMatrix::zeros(1 << n_qubits, 1 << n_qubits) }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.mat
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        crate::error::check_dims(self.n_qubits, other.n_qubits)?;
        Ok(DenseOperator { n_qubits: self.n_qubits, mat: &self.mat * &other.mat })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        crate::error::check_dims(self.n_qubits, other.n_qubits)?;
        Ok(DenseOperator { n_qubits: self.n_qubits, mat: &self.mat + &other.mat })
    }

    pub fn scaled(&self, c: C) -> Self {
        DenseOperator { n_qubits: self.n_qubits, mat: self.mat.map(|x| x * c) }
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator { n_qubits: self.n_qubits, mat: self.mat.adjoint() }
    }

    /// Largest entry modulus of the difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n_qubits == other.n_qubits && self.max_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn trace(&self) -> C {
        self.mat.trace()
    }
}

pub fn dense_of_pauli(p: &PauliOp) -> Result<DenseOperator> {
    dense_of_pauli_capped(p, DEFAULT_CAP)
}

pub fn dense_of_pauli_capped(p: &PauliOp, cap: usize) -> Result<DenseOperator> {
    let n = p.n_qubits();
    check_cap(n, cap)?;
    let mut mat = DMatrix::from_element(1, 1, i_pow(p.phase()));
    for q in 0..n {
        let s = sigma(p.letter(q));
        let small = DMatrix::from_fn(2, 2, |r, c| s[r][c]);
        mat = mat.kronecker(&small);
    }
    Ok(DenseOperator { n_qubits: n, mat })
}

/// Reference matrix of a single Majorana: `Z ⊗ … ⊗ Z ⊗ (X or Y) ⊗ I ⊗ …`.
fn jw_majorana(n_modes: usize, mode: usize, kind: MajoranaKind) -> DMatrix<C> {
    let mut mat = DMatrix::from_element(1, 1, ONE);
    for q in 0..n_modes {
        let l = match q.cmp(&mode) {
            std::cmp::Ordering::Less => Letter::Z,
            std::cmp::Ordering::Equal if kind == MajoranaKind::C => Letter::X,
            std::cmp::Ordering::Equal => Letter::Y,
            std::cmp::Ordering::Greater => Letter::I,
        };
        let s = sigma(l);
        mat = mat.kronecker(&DMatrix::from_fn(2, 2, |r, c| s[r][c]));
    }
    mat
}

pub fn dense_of_majorana(m: &MajoranaMonomial) -> Result<DenseOperator> {
    dense_of_majorana_capped(m, DEFAULT_CAP)
}

pub fn dense_of_majorana_capped(m: &MajoranaMonomial, cap: usize) -> Result<DenseOperator> {
    let n = m.n_modes();
    check_cap(n, cap)?;
    let mut mat = DMatrix::identity(1 << n, 1 << n).map(|x: C| x * i_pow(m.phase()));
    for &(mode, kind) in m.factors() {
        mat *= jw_majorana(n, mode, kind);
    }
    Ok(DenseOperator { n_qubits: n, mat })
}

/// Bit masks of a Pauli in basis-index order: `P|x⟩ = amp(x) |x ^ flip⟩`
/// with `amp(x) = base (-1)^{|x & sign|}`, using `Y = i X Z`.
#[derive(Clone, Copy)]
struct Action {
    flip: usize,
    sign: usize,
    base: C,
}

impl Action {
    fn of(p: &PauliOp) -> Action {
        let n = p.n_qubits();
        let (mut flip, mut sign, mut ys) = (0usize, 0usize, 0u8);
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            match p.letter(q) {
                Letter::I => {}
                Letter::X => flip |= bit,
                Letter::Y => {
                    flip |= bit;
                    sign |= bit;
                    ys += 1;
                }
                Letter::Z => sign |= bit,
            }
        }
        Action { flip, sign, base: i_pow(p.phase() + ys) }
    }

    fn on(self, x: usize) -> (C, usize) {
        let amp = if (x & self.sign).count_ones() % 2 == 1 { -self.base } else { self.base };
        (amp, x ^ self.flip)
    }
}

pub fn apply_pauli(p: &PauliOp, v: &[C]) -> Vec<C> {
    let act = Action::of(p);
    let mut out = vec![ZERO; v.len()];
    for (x, &a) in v.iter().enumerate() {
        if a != ZERO {
            let (amp, y) = act.on(x);
            out[y] += amp * a;
        }
    }
    out
}

/// `(I + P) v / 2`.
fn half_sum(p: &PauliOp, v: &[C]) -> Vec<C> {
    let pv = apply_pauli(p, v);
    v.iter().zip(pv).map(|(a, b)| (a + b) * 0.5).collect()
}

pub fn project(gens: &[PauliOp], v: &[C]) -> Vec<C> {
    gens.iter().fold(v.to_vec(), |acc, g| half_sum(g, &acc))
}

pub fn norm(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn max_abs_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Dense `∏ (I + G)/2`. Built column by column.
pub fn code_projector(enc: &Encoding) -> Result<DenseOperator> {
    code_projector_capped(enc, DEFAULT_CAP)
}

pub fn code_projector_capped(enc: &Encoding, cap: usize) -> Result<DenseOperator> {
    let n = enc.n_qubits();
    check_cap(n, cap)?;
    let dim = 1usize << n;
    let mut mat = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        for (y, a) in sparse_projection(enc.stabilizer_generators(), x) {
            mat[(y, x)] = a;
        }
    }
    Ok(DenseOperator { n_qubits: n, mat })
}

/// `Π|x⟩` kept sparse: each generator maps basis states to basis states, so
/// at most `2^d` entries are nonzero.
fn sparse_projection(gens: &[PauliOp], x: usize) -> HashMap<usize, C> {
    let mut v = HashMap::from([(x, ONE)]);
    for g in gens {
        let act = Action::of(g);
        let mut next: HashMap<usize, C> = HashMap::with_capacity(2 * v.len());
        for (&b, &a) in &v {
            *next.entry(b).or_insert(ZERO) += a * 0.5;
            let (amp, y) = act.on(b);
            *next.entry(y).or_insert(ZERO) += a * amp * 0.5;
        }
        next.retain(|_, a| a.norm() > TOL);
        v = next;
    }
    v
}

/// `tr Π`, summed over the diagonal of the sparse columns.
pub fn code_projector_rank(enc: &Encoding) -> Result<usize> {
    let n = enc.n_qubits();
    check_cap(n, DEFAULT_CAP)?;
    let mut tr = ZERO;
    for x in 0..1usize << n {
        if let Some(a) = sparse_projection(enc.stabilizer_generators(), x).get(&x) {
            tr += a;
        }
    }
    if tr.im.abs() > 1e-9 || (tr.re - tr.re.round()).abs() > 1e-9 {
        return Err(Error::Inconsistent(format!("projector trace {tr} is not an integer")));
    }
    Ok(tr.re.round() as usize)
}

/// A few pseudo-random vectors projected onto the code space. A linear
/// relation that annihilates them holds on the whole code space with
/// probability one.
pub fn random_code_vectors(enc: &Encoding, count: usize, seed: u64) -> Result<Vec<Vec<C>>> {
    let n = enc.n_qubits();
    check_cap(n, DEFAULT_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let v: Vec<C> = (0..1usize << n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let w = project(enc.stabilizer_generators(), &v);
        let nv = norm(&w);
        if nv < 1e-9 {
            return Err(Error::Inconsistent("code space is empty".into()));
        }
        out.push(w.into_iter().map(|a| a / nv).collect());
    }
    Ok(out)
}

/// Action of a monomial on a reference occupation basis state.
pub fn majorana_on_basis(m: &MajoranaMonomial, occ: usize) -> (C, usize) {
    let n = m.n_modes();
    let mut amp = i_pow(m.phase());
    let mut x = occ;
    for &(mode, kind) in m.factors().iter().rev() {
        let bit = n - 1 - mode;
        let before = (x >> (bit + 1)).count_ones();
        if before % 2 == 1 {
            amp = -amp;
        }
        if kind == MajoranaKind::CPrime {
            amp *= if (x >> bit) & 1 == 0 { I } else { -I };
        }
        x ^= 1 << bit;
    }
    (amp, x)
}

/// Occupations that map into the code space, in ascending order, with the
/// encoded basis vectors `W̃_n |Ω⟩`, where `W_n = c_{j1} c_{j2} …` over the
/// occupied modes and `|Ω⟩` has every dephasing image at `+1`.
#[derive(Clone, Debug)]
pub struct CodeIsometry {
    pub n_modes: usize,
    pub occupations: Vec<usize>,
    pub columns: Vec<Vec<C>>,
    index: HashMap<usize, usize>,
}

impl CodeIsometry {
    pub fn column(&self, occ: usize) -> Option<&[C]> {
        self.index.get(&occ).map(|&k| self.columns[k].as_slice())
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, u) in self.columns.iter().enumerate() {
            for (b, v) in self.columns.iter().enumerate() {
                let target = if a == b { ONE } else { ZERO };
                worst = worst.max((inner(u, v) - target).norm());
            }
        }
        worst
    }
}

fn occupation_word(n_modes: usize, occ: usize) -> MajoranaMonomial {
    let factors: Vec<_> =
        (0..n_modes).filter(|&j| (occ >> (n_modes - 1 - j)) & 1 == 1).map(|j| (j, MajoranaKind::C)).collect();
    MajoranaMonomial::from_product(n_modes, &factors)
}

pub fn code_isometry(enc: &Encoding) -> Result<CodeIsometry> {
    let n = enc.n_qubits();
    let m = enc.n_primary_modes();
    check_cap(n, DEFAULT_CAP)?;
    let alg = enc.algebra();
    let mut gens = enc.stabilizer_generators().to_vec();
    gens.extend((0..m).map(|j| enc.dephasing_image(j)));
    let mut vacuum = None;
    for x in 0..1usize << n {
        let mut e = vec![ZERO; 1 << n];
        e[x] = ONE;
        let v = project(&gens, &e);
        let nv = norm(&v);
        if nv > 1e-6 {
            vacuum = Some(v.into_iter().map(|a| a / nv).collect::<Vec<_>>());
            break;
        }
    }
    let vacuum = vacuum.ok_or_else(|| Error::Inconsistent("no encoded vacuum".into()))?;
    let mut occupations = Vec::new();
    let mut columns = Vec::new();
    let mut index = HashMap::new();
    for occ in 0..1usize << m {
        let Some(w) = alg.fermion_to_pauli(&occupation_word(m, occ)) else { continue };
        index.insert(occ, columns.len());
        occupations.push(occ);
        columns.push(apply_pauli(&w, &vacuum));
    }
    Ok(CodeIsometry { n_modes: m, occupations, columns, index })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicalCheck {
    /// `P V = i^phase V F` on every encoded basis state.
    Match { phase: u8 },
    /// Proportional state by state, but not with one common phase.
    MismatchPhase,
    MismatchOperator,
}

pub fn verify_logical_action(enc: &Encoding, pauli: &PauliOp, claimed: &MajoranaMonomial) -> Result<LogicalCheck> {
    let iso = code_isometry(enc)?;
    verify_with_isometry(&iso, pauli, claimed)
}

pub fn verify_with_isometry(iso: &CodeIsometry, pauli: &PauliOp, claimed: &MajoranaMonomial) -> Result<LogicalCheck> {
    crate::error::check_dims(claimed.n_modes(), iso.n_modes)?;
    let mut common: Option<C> = None;
    let mut phase_only = false;
    for (k, &occ) in iso.occupations.iter().enumerate() {
        let lhs = apply_pauli(pauli, &iso.columns[k]);
        let (amp, target) = majorana_on_basis(claimed, occ);
        let Some(col) = iso.column(target) else { return Ok(LogicalCheck::MismatchOperator) };
        let rhs: Vec<C> = col.iter().map(|a| a * amp).collect();
        let w = inner(&rhs, &lhs);
        if (w.norm() - 1.0).abs() > 1e-9 || max_abs_diff(&lhs, &rhs.iter().map(|a| a * w).collect::<Vec<_>>()) > 1e-9 {
            return Ok(LogicalCheck::MismatchOperator);
        }
        match common {
            None => common = Some(w),
            Some(c) if (c - w).norm() > 1e-9 => phase_only = true,
            _ => {}
        }
    }
    if phase_only {
        return Ok(LogicalCheck::MismatchPhase);
    }
    let w = common.unwrap_or(ONE);
    match (0..4u8).find(|&k| (i_pow(k) - w).norm() < 1e-9) {
        Some(phase) => Ok(LogicalCheck::Match { phase }),
        None => Ok(LogicalCheck::MismatchPhase),
    }
}

/// `max |(A - B) v|` over the given vectors, for `A`, `B` products of Paulis.
pub fn relation_error(lhs: &[&PauliOp], rhs: &[&PauliOp], rhs_scale: C, vectors: &[Vec<C>]) -> f64 {
    let mut worst: f64 = 0.0;
    for v in vectors {
        let a = lhs.iter().rev().fold(v.clone(), |acc, p| apply_pauli(p, &acc));
        let b = rhs.iter().rev().fold(v.clone(), |acc, p| apply_pauli(p, &acc));
        let b: Vec<C> = b.into_iter().map(|z| z * rhs_scale).collect();
        worst = worst.max(max_abs_diff(&a, &b));
    }
    worst
}
