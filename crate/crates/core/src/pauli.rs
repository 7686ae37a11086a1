//! Phase-exact n-qubit Pauli operators in symplectic form.
//!
//! An operator is stored as `i^phase * P_0 ⊗ P_1 ⊗ ...` where every single
//! qubit factor is one of `I, X, Y, Z` encoded by an `(x, z)` bit pair:
//! `X = (1,0)`, `Z = (0,1)`, `Y = (1,1)` with the convention `Y = i X Z`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// Position of a qubit in an encoding's layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitIndex(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    /// The three non-identity letters in enumeration order.
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    n_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliOp {
    pub fn identity(n_qubits: usize) -> Self {
        let w = words_for(n_qubits);
        PauliOp { n_qubits, x: vec![0; w], z: vec![0; w], phase: 0 }
    }

    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n_qubits);
        p.set(qubit, letter);
        p
    }

    /// Builds a bare (phase 0) tensor product from `(qubit, letter)` pairs.
    /// Repeated qubits are overwritten, not multiplied.
    pub fn from_letters(n_qubits: usize, letters: &[(usize, Letter)]) -> Self {
        let mut p = Self::identity(n_qubits);
        for &(q, l) in letters {
            p.set(q, l);
        }
        p
    }

    /// Identity on every qubit except for `Z` on each listed qubit.
    pub fn z_string(n_qubits: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::identity(n_qubits);
        for q in qubits {
            p.set(q, Letter::Z);
        }
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Multiplies the operator by `i^k`.
    pub fn times_i_pow(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) & 3;
        self
    }

    pub fn inverse(&self) -> Self {
        self.clone().with_phase((4 - self.phase) % 4)
    }

    pub fn negated(self) -> Self {
        self.times_i_pow(2)
    }

    pub fn set(&mut self, qubit: usize, letter: Letter) {
        assert!(qubit < self.n_qubits, "qubit {qubit} out of range for {} qubits", self.n_qubits);
        let (xb, zb) = letter.bits();
        let (w, b) = (qubit / WORD, qubit % WORD);
        let mask = 1u64 << b;
        if xb {
            self.x[w] |= mask;
        } else {
            self.x[w] &= !mask;
        }
        if zb {
            self.z[w] |= mask;
        } else {
            self.z[w] &= !mask;
        }
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        let (w, b) = (qubit / WORD, qubit % WORD);
        Letter::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn x_bits(&self) -> &[u64] {
        &self.x
    }

    pub fn z_bits(&self) -> &[u64] {
        &self.z
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| self.letter(q) != Letter::I).collect()
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_identity_up_to_phase()
    }

    fn y_count(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(x, z)| (x & z).count_ones()).sum()
    }

    /// `(i^p σ)† = i^{-p} σ` since each bare factor is Hermitian, so only the
    /// parity of the phase exponent matters.
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// Same support and letters, ignoring phase.
    pub fn same_letters(&self, other: &PauliOp) -> bool {
        self.n_qubits == other.n_qubits && self.x == other.x && self.z == other.z
    }

    pub fn try_mul(&self, other: &PauliOp) -> Result<PauliOp> {
        check_dims(self.n_qubits, other.n_qubits)?;
        // In X^x Z^z form a factor is i^{-|x∧z|} σ; moving Z^{z_a} past X^{x_b}
        // costs (-1)^{|z_a ∧ x_b|}.
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        let mut anti = 0u32;
        for k in 0..self.x.len() {
            anti += (self.z[k] & other.x[k]).count_ones();
            x.push(self.x[k] ^ other.x[k]);
            z.push(self.z[k] ^ other.z[k]);
        }
        let mut out = PauliOp { n_qubits: self.n_qubits, x, z, phase: 0 };
        let total = self.phase as u32 + other.phase as u32 + self.y_count() + other.y_count()
            + 2 * anti
            + 3 * out.y_count();
        out.phase = (total % 4) as u8;
        Ok(out)
    }

    pub fn try_commutes(&self, other: &PauliOp) -> Result<bool> {
        check_dims(self.n_qubits, other.n_qubits)?;
        Ok(self.symplectic_product(other) == 0)
    }

    /// Symplectic inner product `x_a·z_b + z_a·x_b (mod 2)`.
    pub fn symplectic_product(&self, other: &PauliOp) -> u32 {
        let mut acc = 0u32;
        for k in 0..self.x.len() {
            acc ^= ((self.x[k] & other.z[k]) ^ (self.z[k] & other.x[k])).count_ones() & 1;
        }
        acc & 1
    }

    /// Concatenated `x | z` bit words, used as a GF(2) vector of length `2n`.
    pub fn symplectic_vector(&self) -> crate::gf2::BitVec {
        let mut v = crate::gf2::BitVec::zeros(2 * self.n_qubits);
        for q in 0..self.n_qubits {
            let (xb, zb) = self.letter(q).bits();
            if xb {
                v.set(q, true);
            }
            if zb {
                v.set(self.n_qubits + q, true);
            }
        }
        v
    }

    /// Embeds this operator into a larger register, shifting qubit indices.
    pub fn embed(&self, n_qubits: usize, offset: usize) -> PauliOp {
        let mut p = PauliOp::identity(n_qubits);
        for q in self.support() {
            p.set(q + offset, self.letter(q));
        }
        p.phase = self.phase;
        p
    }

    pub fn parse(text: &str, n_qubits: usize) -> Result<PauliOp> {
        let text = text.trim();
        let mut chars = text.chars().peekable();
        let mut phase = 0u8;
        match chars.peek() {
            Some('+') => {
                chars.next();
            }
            Some('-') => {
                chars.next();
                phase = 2;
            }
            _ => {}
        }
        if chars.peek() == Some(&'i') {
            chars.next();
            phase += 1;
        }
        let rest: String = chars.collect();
        let mut p = PauliOp::identity(n_qubits);
        for token in rest.split_whitespace() {
            let mut tc = token.chars();
            let letter = tc
                .next()
                .and_then(Letter::from_char)
                .ok_or_else(|| Error::Parse(format!("bad Pauli token `{token}`")))?;
            let idx_text: String = tc.collect();
            if letter == Letter::I && idx_text.is_empty() {
                continue;
            }
            let q: usize = idx_text
                .parse()
                .map_err(|_| Error::Parse(format!("bad qubit index in `{token}`")))?;
            if q >= n_qubits {
                return Err(Error::Parse(format!("qubit {q} out of range for {n_qubits} qubits")));
            }
            if p.letter(q) != Letter::I {
                return Err(Error::Parse(format!("qubit {q} appears twice")));
            }
            p.set(q, letter);
        }
        p.phase = phase & 3;
        Ok(p)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        let support = self.support();
        if support.is_empty() {
            return f.write_str("I");
        }
        for (k, q) in support.into_iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", self.letter(q).as_char(), q)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp[{}]({})", self.n_qubits, self)
    }
}

impl std::ops::Mul for &PauliOp {
    type Output = PauliOp;

    /// Panics on a qubit-count mismatch; use [`PauliOp::try_mul`] otherwise.
    fn mul(self, rhs: &PauliOp) -> PauliOp {
        self.try_mul(rhs).expect("Pauli qubit counts differ")
    }
}

pub fn pauli_mul(a: &PauliOp, b: &PauliOp) -> Result<PauliOp> {
    a.try_mul(b)
}

pub fn commutes(a: &PauliOp, b: &PauliOp) -> Result<bool> {
    a.try_commutes(b)
}

pub fn weight(a: &PauliOp) -> usize {
    a.weight()
}

pub fn is_hermitian(a: &PauliOp) -> bool {
    a.is_hermitian()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x0() -> PauliOp {
        PauliOp::single(1, 0, Letter::X)
    }

    #[test]
    fn involution() {
        assert!((&x0() * &x0()).is_identity());
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let p = &x0() * &PauliOp::single(1, 0, Letter::Z);
        assert_eq!(p.letter(0), Letter::Y);
        assert_eq!(p.phase(), 3);
    }

    #[test]
    fn single_qubit_table() {
        use Letter::*;
        // (a, b, letter of ab, phase of ab)
        let table = [
            (X, Y, Z, 1),
            (Y, X, Z, 3),
            (Y, Z, X, 1),
            (Z, Y, X, 3),
            (Z, X, Y, 1),
            (X, Z, Y, 3),
        ];
        for (a, b, c, ph) in table {
            let p = &PauliOp::single(1, 0, a) * &PauliOp::single(1, 0, b);
            assert_eq!((p.letter(0), p.phase()), (c, ph), "{a:?}{b:?}");
        }
    }

    #[test]
    fn commutation_basics() {
        let z0 = PauliOp::single(1, 0, Letter::Z);
        assert!(!commutes(&x0(), &z0).unwrap());
        assert!(commutes(&x0(), &x0()).unwrap());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let a = PauliOp::identity(2);
        let b = PauliOp::identity(3);
        assert!(matches!(pauli_mul(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(commutes(&a, &b).is_err());
    }

    #[test]
    fn hermiticity() {
        assert!(is_hermitian(&x0()));
        assert!(!is_hermitian(&x0().times_i_pow(1)));
    }

    #[test]
    fn weight_counts_support() {
        assert_eq!(weight(&PauliOp::identity(5)), 0);
        let p = PauliOp::from_letters(70, &[(0, Letter::X), (64, Letter::Y), (69, Letter::Z)]);
        assert_eq!(p.weight(), 3);
    }

    #[test]
    fn text_form() {
        let p = PauliOp::parse("+iY0 X3 Z5", 6).unwrap();
        assert_eq!(p.phase(), 1);
        assert_eq!(p.letter(0), Letter::Y);
        assert_eq!(p.letter(3), Letter::X);
        assert_eq!(p.letter(5), Letter::Z);
        assert_eq!(p.to_string(), "+iY0 X3 Z5");
        assert_eq!(PauliOp::identity(3).negated().to_string(), "-I");
        assert_eq!(PauliOp::parse("-I", 3).unwrap(), PauliOp::identity(3).negated());
        assert!(PauliOp::parse("X9", 3).is_err());
        assert!(PauliOp::parse("X1 Z1", 3).is_err());
        assert!(PauliOp::parse("Q1", 3).is_err());
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOp> {
        (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(letters, ph)| {
            let mut p = PauliOp::identity(n);
            for (q, l) in letters.into_iter().enumerate() {
                p.set(q, [Letter::I, Letter::X, Letter::Y, Letter::Z][l as usize]);
            }
            p.with_phase(ph)
        })
    }

    proptest! {
        #[test]
        fn swapped_product_differs_by_symplectic_sign(a in arb_pauli(9), b in arb_pauli(9)) {
            let ab = &a * &b;
            let ba = &b * &a;
            prop_assert!(ab.same_letters(&ba));
            let sign = if a.symplectic_product(&b) == 1 { 2 } else { 0 };
            prop_assert_eq!((ba.phase() + sign) % 4, ab.phase());
        }

        #[test]
        fn hermitian_squares_to_identity(a in arb_pauli(7)) {
            let sq = &a * &a;
            prop_assert!(sq.is_identity_up_to_phase());
            prop_assert_eq!(sq.is_identity(), a.is_hermitian());
        }

        #[test]
        fn associativity(a in arb_pauli(5), b in arb_pauli(5), c in arb_pauli(5)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn commutation_is_symmetric_and_phase_blind(a in arb_pauli(6), b in arb_pauli(6), k in 0u8..4) {
            let c1 = commutes(&a, &b).unwrap();
            prop_assert_eq!(c1, commutes(&b, &a).unwrap());
            prop_assert_eq!(c1, commutes(&a.clone().times_i_pow(k), &b).unwrap());
        }

        #[test]
        fn render_parse_round_trip(a in arb_pauli(12)) {
            prop_assert_eq!(PauliOp::parse(&a.to_string(), 12).unwrap(), a);
        }

        #[test]
        fn product_weight_is_subadditive(a in arb_pauli(8), b in arb_pauli(8)) {
            prop_assert!((&a * &b).weight() <= a.weight() + b.weight());
        }
    }
}
