//! Products of Majorana operators kept in a canonical normal form.
//!
//! Each mode `j` carries two Majoranas, `c_j` and `c'_j`, rendered `gj` and
//! `gj'`. A monomial is `i^phase` times a strictly ascending product, where
//! ascending means by mode, then `c` before `c'`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MajoranaKind {
    /// `c_j = a_j + a_j†`
    C,
    /// `c'_j = -i (a_j - a_j†)`
    CPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeRole {
    Primary,
    Auxiliary,
}

/// A fermionic mode together with its role in an encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub id: usize,
    pub role: ModeRole,
}

pub type Factor = (usize, MajoranaKind);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MajoranaMonomial {
    n_modes: usize,
    factors: Vec<Factor>,
    phase: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl MajoranaMonomial {
    pub fn identity(n_modes: usize) -> Self {
        MajoranaMonomial { n_modes, factors: Vec::new(), phase: 0 }
    }

    pub fn single(n_modes: usize, mode: usize, kind: MajoranaKind) -> Self {
        assert!(mode < n_modes, "mode {mode} out of range for {n_modes} modes");
        MajoranaMonomial { n_modes, factors: vec![(mode, kind)], phase: 0 }
    }

    pub fn c(n_modes: usize, mode: usize) -> Self {
        Self::single(n_modes, mode, MajoranaKind::C)
    }

    pub fn c_prime(n_modes: usize, mode: usize) -> Self {
        Self::single(n_modes, mode, MajoranaKind::CPrime)
    }

    /// Ordered product of the given factors (any order, repeats allowed),
    /// brought to normal form.
    pub fn from_product(n_modes: usize, factors: &[Factor]) -> Self {
        factors.iter().fold(Self::identity(n_modes), |acc, &(m, k)| {
            acc.mul_unchecked(&Self::single(n_modes, m, k))
        })
    }

    /// The dephasing operator `-i c_j c'_j = 1 - 2 n_j`.
    pub fn dephasing(n_modes: usize, mode: usize) -> Self {
        Self::from_product(n_modes, &[(mode, MajoranaKind::C), (mode, MajoranaKind::CPrime)])
            .times_i_pow(3)
    }

    /// The edge operator `-i c_i c_j`.
    pub fn edge(n_modes: usize, i: usize, j: usize) -> Self {
        Self::from_product(n_modes, &[(i, MajoranaKind::C), (j, MajoranaKind::C)]).times_i_pow(3)
    }

    /// Total fermion parity `∏_j (-i c_j c'_j)`.
    pub fn parity_operator(n_modes: usize) -> Self {
        (0..n_modes).fold(Self::identity(n_modes), |acc, j| {
            acc.mul_unchecked(&Self::dephasing(n_modes, j))
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn times_i_pow(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) & 3;
        self
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty() && self.phase == 0
    }

    pub fn is_scalar(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn same_factors(&self, other: &Self) -> bool {
        self.n_modes == other.n_modes && self.factors == other.factors
    }

    pub fn mode_weight(&self) -> usize {
        let mut modes: Vec<usize> = self.factors.iter().map(|f| f.0).collect();
        modes.dedup();
        modes.len()
    }

    pub fn parity_sector(&self) -> Parity {
        if self.factors.len() % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Reversing `k` distinct Majoranas costs `(-1)^{k(k-1)/2}`.
    pub fn is_hermitian(&self) -> bool {
        let k = self.factors.len();
        let reversal = (k * k.saturating_sub(1) / 2) % 2;
        (self.phase as usize + reversal) % 2 == 0
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.n_modes, other.n_modes)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        // Move each factor of `other` leftwards past the larger factors of
        // `self`; equal neighbours then square to one.
        let a = &self.factors;
        let b = &other.factors;
        let mut swaps = 0usize;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                swaps += a.len() - i;
                out.push(b[j]);
                j += 1;
            } else {
                // a[i] == b[j]: b[j] passes a[i+1..], then cancels a[i]
                swaps += a.len() - i - 1;
                i += 1;
                j += 1;
            }
        }
        let phase = (self.phase as usize + other.phase as usize + 2 * (swaps % 2)) % 4;
        MajoranaMonomial { n_modes: self.n_modes, factors: out, phase: phase as u8 }
    }

    /// Renormalizes the factor list; a no-op on values built through this API.
    pub fn canonicalized(&self) -> Self {
        Self::from_product(self.n_modes, &self.factors).times_i_pow(self.phase)
    }

    pub fn parse(text: &str, n_modes: usize) -> Result<Self> {
        let text = text.trim();
        let mut rest = text;
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            phase = 2;
        }
        if let Some(r) = rest.strip_prefix('i') {
            rest = r;
            phase += 1;
        }
        let mut factors = Vec::new();
        for token in rest.split_whitespace() {
            if token == "1" {
                continue;
            }
            let body = token
                .strip_prefix('g')
                .ok_or_else(|| Error::Parse(format!("bad Majorana token `{token}`")))?;
            let (digits, kind) = match body.strip_suffix('\'') {
                Some(d) => (d, MajoranaKind::CPrime),
                None => (body, MajoranaKind::C),
            };
            let mode: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad mode index in `{token}`")))?;
            if mode >= n_modes {
                return Err(Error::Parse(format!("mode {mode} out of range for {n_modes} modes")));
            }
            factors.push((mode, kind));
        }
        Ok(Self::from_product(n_modes, &factors).times_i_pow(phase))
    }
}

impl fmt::Display for MajoranaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        if self.factors.is_empty() {
            return if self.phase % 2 == 0 { f.write_str("1") } else { Ok(()) };
        }
        for (m, k) in &self.factors {
            match k {
                MajoranaKind::C => write!(f, " g{m}")?,
                MajoranaKind::CPrime => write!(f, " g{m}'")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MajoranaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Majorana[{}]({})", self.n_modes, self)
    }
}

impl std::ops::Mul for &MajoranaMonomial {
    type Output = MajoranaMonomial;

    fn mul(self, rhs: &MajoranaMonomial) -> MajoranaMonomial {
        self.try_mul(rhs).expect("Majorana mode counts differ")
    }
}

pub fn majorana_mul(a: &MajoranaMonomial, b: &MajoranaMonomial) -> Result<MajoranaMonomial> {
    a.try_mul(b)
}

pub fn mode_weight(a: &MajoranaMonomial) -> usize {
    a.mode_weight()
}

pub fn parity_sector(a: &MajoranaMonomial) -> Parity {
    a.parity_sector()
}
