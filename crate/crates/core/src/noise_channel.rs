//! Phase noise from a fermion-boson coupling, computed exactly on a
//! truncated Fock space and compared against the dephasing channel.
//!
//! Basis order is `F↑ ⊗ F↓ ⊗ B`. Fermionic occupations use mode 0 as the
//! most significant bit; the boson register uses base `cutoff + 1` digits,
//! mode 0 most significant.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

type C = Complex64;

pub const DEFAULT_CUTOFF: usize = 4;
/// Largest total Hilbert dimension `2^M · 2^M · (cutoff+1)^M` accepted.
pub const DEFAULT_DIM_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub n_modes: usize,
    /// Maximum boson occupation per mode.
    pub boson_cutoff: usize,
    /// Inverse temperature; `f64::INFINITY` selects the vacuum bath.
    #[serde(serialize_with = "ser_beta", deserialize_with = "de_beta")]
    pub beta: f64,
    pub gamma: f64,
    /// Momentum-independent coupling constant.
    #[serde(default = "unit")]
    pub coupling: f64,
}

fn unit() -> f64 {
    1.0
}

fn ser_beta<S: Serializer>(b: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if b.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*b)
    }
}

fn de_beta<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Beta {
        Num(f64),
        Text(String),
    }
    match Beta::deserialize(d)? {
        Beta::Num(x) => Ok(x),
        Beta::Text(t) => parse_beta(&t).map_err(serde::de::Error::custom),
    }
}

/// Accepts a number or `inf`.
pub fn parse_beta(s: &str) -> std::result::Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("bad beta {s:?}: {e}")),
    }
}

impl ChannelSpec {
    pub fn new(n_modes: usize, boson_cutoff: usize, beta: f64, gamma: f64) -> Result<Self> {
        let spec = ChannelSpec { n_modes, boson_cutoff, beta, gamma, coupling: 1.0 };
        spec.validate(DEFAULT_DIM_CAP)?;
        Ok(spec)
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        ChannelSpec { gamma, ..self.clone() }
    }

    pub fn validate(&self, cap: usize) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::InvalidArgument("need at least one mode".into()));
        }
        if self.boson_cutoff < 2 {
            return Err(Error::InvalidArgument("boson cutoff must be at least 2".into()));
        }
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::InvalidArgument("beta must be non-negative".into()));
        }
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(Error::InvalidArgument("gamma must be finite and non-negative".into()));
        }
        let needed = self.total_dim();
        if needed > cap {
            return Err(Error::CapExceeded { needed, cap });
        }
        Ok(())
    }

    pub fn fermion_dim(&self) -> usize {
        1 << self.n_modes
    }

    pub fn boson_dim(&self) -> usize {
        (self.boson_cutoff + 1).saturating_pow(self.n_modes as u32)
    }

    pub fn total_dim(&self) -> usize {
        self.fermion_dim().saturating_mul(self.fermion_dim()).saturating_mul(self.boson_dim())
    }

    fn occupation(&self, state: usize, mode: usize) -> usize {
        (state >> (self.n_modes - 1 - mode)) & 1
    }

    fn boson_digit(&self, state: usize, mode: usize) -> usize {
        let base = self.boson_cutoff + 1;
        (state / base.pow((self.n_modes - 1 - mode) as u32)) % base
    }
}

/// Trace-one Hermitian positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<C>,
}

pub const DENSITY_TOL: f64 = 1e-10;

impl DensityMatrix {
    pub fn new(mat: DMatrix<C>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::InvalidArgument("density matrix must be square".into()));
        }
        if (mat.trace() - C::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!("trace {} is not 1", mat.trace())));
        }
        if max_abs(&(&mat - mat.adjoint())) > DENSITY_TOL {
            return Err(Error::InvalidArgument("density matrix is not Hermitian".into()));
        }
        let rho = DensityMatrix { mat };
        if rho.min_eigenvalue() < -DENSITY_TOL {
            return Err(Error::InvalidArgument("density matrix has a negative eigenvalue".into()));
        }
        Ok(rho)
    }

    pub fn pure(v: &[C]) -> Result<Self> {
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        let col = DMatrix::from_iterator(v.len(), 1, v.iter().map(|z| z / n));
        Self::new(&col * col.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { mat: DMatrix::identity(dim, dim) / C::new(dim as f64, 0.0) }
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.mat)
    }
}

fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn min_eigenvalue(m: &DMatrix<C>) -> f64 {
    let h = (m + m.adjoint()) * C::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Truncated `b + b†` on one boson mode.
fn displacement(cutoff: usize) -> DMatrix<C> {
    let d = cutoff + 1;
    DMatrix::from_fn(d, d, |r, c| {
        if r + 1 == c || c + 1 == r {
            C::new((r.max(c) as f64).sqrt(), 0.0)
        } else {
            C::new(0.0, 0.0)
        }
    })
}

/// `b_x + b_x†` on the full boson register.
fn bath_displacement(spec: &ChannelSpec, mode: usize) -> DMatrix<C> {
    let x = displacement(spec.boson_cutoff);
    let db = spec.boson_dim();
    let base = spec.boson_cutoff + 1;
    let stride = base.pow((spec.n_modes - 1 - mode) as u32);
    DMatrix::from_fn(db, db, |r, c| {
        let (dr, dc) = (spec.boson_digit(r, mode), spec.boson_digit(c, mode));
        if r - dr * stride == c - dc * stride {
            x[(dr, dc)]
        } else {
            C::new(0.0, 0.0)
        }
    })
}

/// Gibbs weights `e^{-β|N|}/Z` over boson Fock states, unit energy per boson.
pub fn gibbs_weights(spec: &ChannelSpec) -> Vec<f64> {
    let db = spec.boson_dim();
    let total = |s: usize| (0..spec.n_modes).map(|x| spec.boson_digit(s, x)).sum::<usize>();
    let w: Vec<f64> = if spec.beta.is_infinite() {
        (0..db).map(|s| if total(s) == 0 { 1.0 } else { 0.0 }).collect()
    } else {
        (0..db).map(|s| (-spec.beta * total(s) as f64).exp()).collect()
    };
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// `H_int = g Σ_x (N_x↑ + N_x↓)(b_x + b_x†)` as a dense matrix.
pub fn build_interaction(spec: &ChannelSpec) -> Result<DMatrix<C>> {
    spec.validate(DEFAULT_DIM_CAP)?;
    let (df, db) = (spec.fermion_dim(), spec.boson_dim());
    let dim = spec.total_dim();
    let mut h = DMatrix::zeros(dim, dim);
    for x in 0..spec.n_modes {
        let bx = bath_displacement(spec, x);
        for up in 0..df {
            for down in 0..df {
                let n = (spec.occupation(up, x) + spec.occupation(down, x)) as f64;
                if n == 0.0 {
                    continue;
                }
                let off = (up * df + down) * db;
                let mut block = h.view_mut((off, off), (db, db));
                block += &bx * C::new(n * spec.coupling, 0.0);
            }
        }
    }
    Ok(h)
}

/// Spectral form of `H_int`, reused across couplings.
pub struct Interaction {
    spec: ChannelSpec,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C>,
    env_weights: Vec<f64>,
}

impl Interaction {
    pub fn new(spec: &ChannelSpec) -> Result<Self> {
        let h = build_interaction(spec)?;
        let eig = SymmetricEigen::new(h);
        let bath = gibbs_weights(spec);
        let df = spec.fermion_dim() as f64;
        // Environment is F↓ ⊗ B; F↓ is averaged exactly over its Fock basis.
        let env_weights = (0..spec.fermion_dim()).flat_map(|_| bath.iter().map(move |w| w / df)).collect();
        Ok(Interaction {
            spec: spec.clone(),
            eigenvalues: eig.eigenvalues.iter().cloned().collect(),
            eigenvectors: eig.eigenvectors,
            env_weights,
        })
    }

    /// `exp(-iγ H_int)`.
    pub fn unitary(&self, gamma: f64) -> DMatrix<C> {
        let v = &self.eigenvectors;
        let phases: Vec<C> = self.eigenvalues.iter().map(|&l| C::new(0.0, -gamma * l).exp()).collect();
        let mut scaled = v.clone();
        for (j, p) in phases.iter().enumerate() {
            for z in scaled.column_mut(j).iter_mut() {
                *z *= p;
            }
        }
        scaled * v.adjoint()
    }

    /// Kraus operators `sqrt(w_l) <k|U|l>` on F↑, weighted by the
    /// environment state; zero-weight columns are dropped.
    pub fn kraus(&self, gamma: f64) -> Vec<DMatrix<C>> {
        let u = self.unitary(gamma);
        let df = self.spec.fermion_dim();
        let de = self.env_weights.len();
        let mut out = Vec::new();
        for (l, &w) in self.env_weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let s = w.sqrt();
            for k in 0..de {
                let op = DMatrix::from_fn(df, df, |a, b| u[(a * de + k, b * de + l)] * s);
                if max_abs(&op) > 0.0 {
                    out.push(op);
                }
            }
        }
        out
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    /// Superoperator in the basis `|a><b|`: entry `[(c,d),(a,b)]`.
    pub fn superoperator(&self, gamma: f64) -> DMatrix<C> {
        let kraus = self.kraus(gamma);
        let df = self.spec.fermion_dim();
        let mut s = DMatrix::zeros(df * df, df * df);
        for k in &kraus {
            let kc = k.map(|z| z.conj());
            for a in 0..df {
                for b in 0..df {
                    for c in 0..df {
                        for d in 0..df {
                            s[(c * df + d, a * df + b)] += k[(c, a)] * kc[(d, b)];
                        }
                    }
                }
            }
        }
        s
    }
}

fn apply_super(s: &DMatrix<C>, rho: &DMatrix<C>) -> DMatrix<C> {
    let d = rho.nrows();
    let v = DMatrix::from_fn(d * d, 1, |i, _| rho[(i / d, i % d)]);
    let out = s * v;
    DMatrix::from_fn(d, d, |r, c| out[(r * d + c, 0)])
}

/// `Tr_{B,F↓}[U (ρ ⊗ I/d ⊗ ρ_B) U†]`.
pub fn effective_channel(spec: &ChannelSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let inter = Interaction::new(spec)?;
    if rho.dim() != spec.fermion_dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: spec.fermion_dim() });
    }
    let mut out = DMatrix::zeros(rho.dim(), rho.dim());
    for k in inter.kraus(spec.gamma) {
        out += &k * rho.matrix() * k.adjoint();
    }
    DensityMatrix::new(out)
}

/// `φ_x = 1 - 2 N_x↑` on F↑.
pub fn phase_operator(spec: &ChannelSpec, mode: usize) -> DMatrix<C> {
    let df = spec.fermion_dim();
    DMatrix::from_fn(df, df, |r, c| {
        if r == c {
            C::new(1.0 - 2.0 * spec.occupation(r, mode) as f64, 0.0)
        } else {
            C::new(0.0, 0.0)
        }
    })
}

/// Superoperator of `ρ ↦ ¼ Σ_x (φ_x ρ φ_x - ρ)`.
fn dephasing_generator(spec: &ChannelSpec) -> DMatrix<C> {
    let df = spec.fermion_dim();
    DMatrix::from_fn(df * df, df * df, |i, j| {
        if i != j {
            return C::new(0.0, 0.0);
        }
        let (a, b) = (i / df, i % df);
        let flips = (0..spec.n_modes).filter(|&x| spec.occupation(a, x) != spec.occupation(b, x)).count();
        C::new(-0.5 * flips as f64, 0.0)
    })
}

/// Bath correlators `Γ_{xx'} = Tr[ρ_B X_x' X_x]` with `X = b + b†`.
pub fn bath_correlators(spec: &ChannelSpec) -> Result<DMatrix<f64>> {
    spec.validate(DEFAULT_DIM_CAP)?;
    let w = gibbs_weights(spec);
    let xs: Vec<DMatrix<C>> = (0..spec.n_modes).map(|x| bath_displacement(spec, x)).collect();
    let m = spec.n_modes;
    Ok(DMatrix::from_fn(m, m, |x, y| {
        let prod = &xs[y] * &xs[x];
        w.iter().enumerate().map(|(s, p)| p * prod[(s, s)].re).sum()
    }))
}

/// Checks on the channel as a map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelChecks {
    pub choi_min_eigenvalue: f64,
    pub trace_error: f64,
    pub unitality_error: f64,
    pub number_leakage: f64,
}

impl ChannelChecks {
    pub fn cptp(&self) -> bool {
        self.choi_min_eigenvalue >= -1e-8 && self.trace_error <= 1e-10
    }
}

pub fn channel_checks(inter: &Interaction, gamma: f64) -> ChannelChecks {
    let spec = inter.spec();
    let df = spec.fermion_dim();
    let s = inter.superoperator(gamma);
    // Choi matrix J[(a,c),(b,d)] = Λ(|a><b|)[c,d].
    let choi = DMatrix::from_fn(df * df, df * df, |i, j| {
        let (a, c) = (i / df, i % df);
        let (b, d) = (j / df, j % df);
        s[(c * df + d, a * df + b)]
    });
    let mut trace_error: f64 = 0.0;
    let mut number_leakage: f64 = 0.0;
    let count = |st: usize| (0..spec.n_modes).map(|x| spec.occupation(st, x)).sum::<usize>();
    for a in 0..df {
        for b in 0..df {
            let tr: C = (0..df).map(|c| s[(c * df + c, a * df + b)]).sum();
            let expect = if a == b { 1.0 } else { 0.0 };
            trace_error = trace_error.max((tr - C::new(expect, 0.0)).norm());
            for c in 0..df {
                for d in 0..df {
                    if count(c) != count(a) || count(d) != count(b) {
                        number_leakage = number_leakage.max(s[(c * df + d, a * df + b)].norm());
                    }
                }
            }
        }
    }
    let mixed = DensityMatrix::maximally_mixed(df);
    let unitality_error = max_abs(&(apply_super(&s, mixed.matrix()) - mixed.matrix()));
    ChannelChecks { choi_min_eigenvalue: min_eigenvalue(&choi), trace_error, unitality_error, number_leakage }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingFit {
    /// Γ(β) from least squares of `Λ - id` against the dephasing generator.
    pub gamma_fit: f64,
    /// Γ(β) from the bath correlators.
    pub gamma_correlator: f64,
    /// Log-log slope of the residual against γ.
    pub residual_exponent: f64,
    pub gammas: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Largest off-diagonal entry of the cross-site correlator matrix.
    pub correlator_offdiag: f64,
    pub correlators: Vec<Vec<f64>>,
}

fn frob(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner_re(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Least squares `y ≈ Σ_k c_k x^k`, k < degree+1.
fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Option<Vec<f64>> {
    let a = DMatrix::from_fn(xs.len(), degree + 1, |r, c| xs[r].powi(c as i32));
    let b = DMatrix::from_column_slice(ys.len(), 1, ys);
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    Some(sol.iter().cloned().collect())
}

/// Fits the channel to `(1 - γ²ΓM/4) ρ + (γ²Γ/4) Σ φ_x ρ φ_x` over the given
/// couplings. The residual is measured against the correlator value of Γ.
pub fn fit_dephasing(spec: &ChannelSpec, gammas: &[f64]) -> Result<DephasingFit> {
    if gammas.len() < 4 {
        return Err(Error::InvalidArgument("need at least 4 coupling values".into()));
    }
    let (lo, hi) = gammas.iter().fold((f64::INFINITY, 0.0_f64), |(l, h), &g| (l.min(g), h.max(g)));
    if lo <= 0.0 || hi > 0.1 || hi / lo < 10.0 * (1.0 - 1e-9) {
        return Err(Error::InvalidArgument(
            "couplings must be positive, at most 0.1 and span at least a decade".into(),
        ));
    }
    let inter = Interaction::new(spec)?;
    let df = spec.fermion_dim();
    let ident = DMatrix::<C>::identity(df * df, df * df);
    let k = dephasing_generator(spec);
    let kk = inner_re(&k, &k);
    let corr = bath_correlators(spec)?;
    let gamma_correlator = corr[(0, 0)];
    let mut per_gamma = Vec::new();
    let mut residuals = Vec::new();
    for &g in gammas {
        let dev = inter.superoperator(g) - &ident;
        per_gamma.push(inner_re(&k, &dev) / (g * g * kk));
        residuals.push(frob(&(dev - &k * C::new(g * g * gamma_correlator, 0.0))));
    }
    // Γ_fit is the γ → 0 intercept; higher orders are absorbed by the
    // linear and quadratic terms.
    let coeffs = polyfit(gammas, &per_gamma, 2)
        .ok_or_else(|| Error::InvalidArgument("ill-conditioned dephasing fit".into()))?;
    let logs: Vec<f64> = gammas.iter().map(|g| g.ln()).collect();
    let log_r: Vec<f64> = residuals.iter().map(|r| r.max(f64::MIN_POSITIVE).ln()).collect();
    let slope = polyfit(&logs, &log_r, 1)
        .ok_or_else(|| Error::InvalidArgument("ill-conditioned residual fit".into()))?[1];
    let m = spec.n_modes;
    let mut offdiag: f64 = 0.0;
    for x in 0..m {
        for y in 0..m {
            if x != y {
                offdiag = offdiag.max(corr[(x, y)].abs());
            }
        }
    }
    Ok(DephasingFit {
        gamma_fit: coeffs[0],
        gamma_correlator,
        residual_exponent: slope,
        gammas: gammas.to_vec(),
        residuals,
        correlator_offdiag: offdiag,
        correlators: (0..m).map(|x| (0..m).map(|y| corr[(x, y)]).collect()).collect(),
    })
}

/// Largest entry difference between the superoperators at two cutoffs.
pub fn cutoff_convergence(spec: &ChannelSpec, cutoff_a: usize, cutoff_b: usize, gamma: f64) -> Result<f64> {
    let a = Interaction::new(&ChannelSpec { boson_cutoff: cutoff_a, ..spec.clone() })?;
    let b = Interaction::new(&ChannelSpec { boson_cutoff: cutoff_b, ..spec.clone() })?;
    Ok(max_abs(&(a.superoperator(gamma) - b.superoperator(gamma))))
}

/// `n` couplings spaced evenly in log between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n).map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: usize, cutoff: usize, beta: f64, gamma: f64) -> ChannelSpec {
        ChannelSpec::new(m, cutoff, beta, gamma).unwrap()
    }

    #[test]
    fn interaction_small_case() {
        let s = spec(1, 2, 1.0, 0.0);
        let h = build_interaction(&s).unwrap();
        assert_eq!(h.nrows(), 12);
        assert!(max_abs(&(&h - h.adjoint())) < 1e-15);
        // Only |up=1,down=1> carries N = 2.
        let x = displacement(2);
        let block = h.view((9, 9), (3, 3)).into_owned();
        assert!(max_abs(&(block - &x * C::new(2.0, 0.0))) < 1e-15);
        assert!(max_abs(&h.view((0, 0), (3, 3)).into_owned()) == 0.0);
    }

    #[test]
    fn interaction_vanishes_on_boson_fock_diagonal() {
        let s = spec(2, 3, 1.0, 0.0);
        let h = build_interaction(&s).unwrap();
        for i in 0..h.nrows() {
            assert_eq!(h[(i, i)].norm(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ChannelSpec::new(1, 1, 1.0, 0.1).is_err());
        assert!(ChannelSpec::new(1, 4, -1.0, 0.1).is_err());
        assert!(matches!(ChannelSpec::new(4, 4, 1.0, 0.1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn zero_coupling_is_identity() {
        let s = spec(2, 4, 1.0, 0.0);
        let v: Vec<C> = (0..4).map(|k| C::new(1.0 + k as f64, 0.5 * k as f64)).collect();
        let rho = DensityMatrix::pure(&v).unwrap();
        let out = effective_channel(&s, &rho).unwrap();
        assert!(max_abs(&(out.matrix() - rho.matrix())) < 1e-13);
    }

    #[test]
    fn coherence_shrinks_diagonal_kept() {
        let s = spec(1, 4, 1.0, 0.05);
        let rho = DensityMatrix::pure(&[C::new(1.0, 0.0), C::new(1.0, 0.0)]).unwrap();
        let out = effective_channel(&s, &rho).unwrap();
        assert!(out.matrix()[(0, 1)].norm() < 0.5 - 1e-6);
        assert!((out.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((out.matrix()[(1, 1)].re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn channel_is_cptp_unital_and_number_preserving() {
        for beta in [0.5, 1.0, f64::INFINITY] {
            let inter = Interaction::new(&spec(2, 4, beta, 0.0)).unwrap();
            let c = channel_checks(&inter, 0.05);
            assert!(c.cptp(), "{c:?}");
            assert!(c.unitality_error < 1e-10);
            assert!(c.number_leakage < 1e-12);
        }
    }

    #[test]
    fn vacuum_correlator_is_one() {
        let s = spec(2, 4, f64::INFINITY, 0.0);
        let c = bath_correlators(&s).unwrap();
        assert!((c[(0, 0)] - 1.0).abs() < 1e-14);
        assert!(c[(0, 1)].abs() < 1e-14);
        let fit = fit_dephasing(&s, &log_grid(0.005, 0.05, 5)).unwrap();
        assert!((fit.gamma_fit - 1.0).abs() < 0.02, "{fit:?}");
    }

    #[test]
    fn thermal_correlator_matches_truncated_occupation() {
        // Γ = Σ_n p_n (2n+1) below the cutoff, n at the top level.
        let beta = 1.0_f64;
        let s = spec(1, 4, beta, 0.0);
        let w: Vec<f64> = (0..5).map(|n| (-beta * n as f64).exp()).collect();
        let z: f64 = w.iter().sum();
        let expect: f64 = (0..5).map(|n| w[n] / z * if n < 4 { 2.0 * n as f64 + 1.0 } else { 4.0 }).sum();
        assert!((bath_correlators(&s).unwrap()[(0, 0)] - expect).abs() < 1e-13);
    }

    #[test]
    fn phase_operators_are_involutions() {
        let s = spec(2, 2, 1.0, 0.0);
        for x in 0..2 {
            let p = phase_operator(&s, x);
            assert!(max_abs(&(&p * &p - DMatrix::identity(4, 4))) == 0.0);
        }
    }

    #[test]
    fn fit_rejects_narrow_range() {
        let s = spec(1, 4, 1.0, 0.0);
        assert!(fit_dephasing(&s, &[0.01, 0.02, 0.03, 0.04]).is_err());
        assert!(fit_dephasing(&s, &[0.01, 0.05]).is_err());
    }

    #[test]
    fn beta_round_trips_through_json() {
        let s = spec(1, 4, f64::INFINITY, 0.01);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"inf\""));
        let back: ChannelSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
