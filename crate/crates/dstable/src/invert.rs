//! Fourier inversion of lattice characteristic functions.
//!
//! A 2π-periodic characteristic function is inverted on a power-of-two grid
//! with the discrete Fourier transform. The recovered window entries are
//! aliased sums `Σ_m p_{k+mN}` of the true masses, which is recorded on the
//! window together with a decay estimate so callers can judge how much mass
//! the window may be hiding. The same transform powers the validity oracle
//! (is this function a characteristic function at all?), the minimum-λ
//! solver for the two-sided-sqrt normalizer, and the distance metrics.

use std::io::{Read, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::cf::{grid, LatticeCf, NormalizerFamily, ParamError};

/// Default grid for oracle-grade inversions.
pub const ORACLE_GRID: usize = 1 << 14;
/// Default grid for quick checks.
pub const QUICK_GRID: usize = 1 << 10;
/// Masses this far below zero still count as nonnegative (DFT rounding floor).
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum InvertError {
    #[error("grid size {0} must be a power of two, at least 8")]
    BadGrid(usize),
    #[error("imaginary residue {max:.3e} above 1e-8: not a lattice characteristic function?")]
    ImaginaryResidue { max: f64 },
    #[error("validity bracket [{lo:.6e}, {hi:.6e}] does not straddle the boundary")]
    BracketFailure { lo: f64, hi: f64 },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// A finite window of probabilities over consecutive integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfWindow {
    k_min: i64,
    masses: Vec<f64>,
    /// Entries are aliased sums `Σ_m p_{k+mN}` (true after DFT inversion or
    /// mod-N folding of samples; false for windows that are exact).
    aliased: bool,
    /// Max |mass| in the outer 10% of the window; a proxy for how much the
    /// aliasing may be hiding.
    decay_estimate: f64,
}

impl PmfWindow {
    /// Exact (non-aliased) window starting at `k_min`.
    pub fn from_masses(k_min: i64, masses: Vec<f64>) -> Self {
        assert!(!masses.is_empty());
        Self {
            k_min,
            masses,
            aliased: false,
            decay_estimate: 0.0,
        }
    }

    pub(crate) fn new_aliased(k_min: i64, masses: Vec<f64>) -> Self {
        let decay_estimate = outer_decay(&masses);
        Self {
            k_min,
            masses,
            aliased: true,
            decay_estimate,
        }
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn is_aliased(&self) -> bool {
        self.aliased
    }

    pub fn decay_estimate(&self) -> f64 {
        self.decay_estimate
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Mass at lattice point `k` (zero outside the window).
    pub fn mass_at(&self, k: i64) -> f64 {
        let idx = k - self.k_min;
        if idx < 0 || idx >= self.masses.len() as i64 {
            0.0
        } else {
            self.masses[idx as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .map(move |(j, &p)| (self.k_min + j as i64, p))
    }

    pub fn sum(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn min_mass(&self) -> f64 {
        self.masses.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Write as CSV with columns `k,mass`, masses at 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), InvertError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "mass"])?;
        for (k, p) in self.iter() {
            w.write_record([k.to_string(), format!("{p:.16e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Read a window back from `k,mass` CSV (aliasing metadata is not part
    /// of the CSV schema and resets to "exact").
    pub fn read_csv<R: Read>(input: R) -> Result<Self, InvertError> {
        let mut r = csv::Reader::from_reader(input);
        let mut k_min = None;
        let mut masses = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let k: i64 = rec[0].parse().map_err(|_| {
                InvertError::Csv(csv::Error::from(std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("bad k: {}", &rec[0]),
                )))
            })?;
            let p: f64 = rec[1].parse().map_err(|_| {
                InvertError::Csv(csv::Error::from(std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("bad mass: {}", &rec[1]),
                )))
            })?;
            if k_min.is_none() {
                k_min = Some(k);
            }
            masses.push(p);
        }
        let k_min = k_min.ok_or_else(|| {
            InvertError::Io(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "empty csv window",
            ))
        })?;
        Ok(Self::from_masses(k_min, masses))
    }
}

fn outer_decay(masses: &[f64]) -> f64 {
    let per_side = (masses.len() / 20).max(1);
    let n = masses.len();
    let mut d: f64 = 0.0;
    for j in 0..per_side.min(n) {
        d = d.max(masses[j].abs()).max(masses[n - 1 - j].abs());
    }
    d
}

fn dft_window(cf: &LatticeCf, n_grid: usize) -> Result<(PmfWindow, f64), InvertError> {
    if n_grid < 8 || !n_grid.is_power_of_two() {
        return Err(InvertError::BadGrid(n_grid));
    }
    let mut buf: Vec<Complex64> = grid(n_grid).map(|t| cf.eval(t)).collect();
    FftPlanner::new().plan_fft_forward(n_grid).process(&mut buf);
    let half = n_grid / 2;
    let scale = 1.0 / n_grid as f64;
    let mut masses = vec![0.0f64; n_grid];
    let mut max_imag: f64 = 0.0;
    for (j, mass) in masses.iter_mut().enumerate() {
        // window slot j holds lattice point k = j − N/2, stored at index k mod N
        let idx = (j + half) % n_grid;
        *mass = buf[idx].re * scale;
        max_imag = max_imag.max((buf[idx].im * scale).abs());
    }
    Ok((PmfWindow::new_aliased(-(half as i64), masses), max_imag))
}

/// Invert a lattice characteristic function to the window `k ∈ [−N/2, N/2)`.
///
/// Entry `k` is the aliased sum `Σ_m p_{k+mN}`. Imaginary parts of the
/// inverted coefficients are checked and discarded; a residue above 1e-8
/// signals a non-lattice or buggy input.
pub fn invert_to_pmf(cf: &LatticeCf, n_grid: usize) -> Result<PmfWindow, InvertError> {
    let (window, max_imag) = dft_window(cf, n_grid)?;
    if max_imag > 1e-8 {
        return Err(InvertError::ImaginaryResidue { max: max_imag });
    }
    Ok(window)
}

/// Verdict of the characteristic-function validity oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidityReport {
    pub is_valid: bool,
    /// Most negative inverted mass.
    pub min_mass: f64,
    /// max(|cf(0) − 1|, |Σ masses − 1|).
    pub normalization_error: f64,
    /// sup over the grid of |cf(−t) − conj(cf(t))|.
    pub hermitian_error: f64,
    pub decay_estimate: f64,
}

/// Check whether `cf` is a valid lattice characteristic function by
/// inverting it and testing nonnegativity, normalization and Hermitian
/// symmetry against `tolerance`.
pub fn is_valid_cf(
    cf: &LatticeCf,
    n_grid: usize,
    tolerance: f64,
) -> Result<ValidityReport, InvertError> {
    let (window, _max_imag) = dft_window(cf, n_grid)?;
    let mut hermitian_error: f64 = 0.0;
    for t in grid(n_grid) {
        hermitian_error = hermitian_error.max((cf.eval(-t) - cf.eval(t).conj()).norm());
    }
    let normalization_error = (cf.eval(0.0) - Complex64::ONE)
        .norm()
        .max((window.sum() - 1.0).abs());
    let min_mass = window.min_mass();
    Ok(ValidityReport {
        is_valid: min_mass >= -tolerance
            && normalization_error <= tolerance
            && hermitian_error <= tolerance,
        min_mass,
        normalization_error,
        hermitian_error,
        decay_estimate: window.decay_estimate(),
    })
}

fn check_two_sided_params(
    lambda1: f64,
    lambda2: f64,
    lambda: f64,
    n: u32,
) -> Result<(), ParamError> {
    let chk = |name: &'static str, v: f64| -> Result<(), ParamError> {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(ParamError {
                name,
                value: v,
                requirement: "> 0",
            })
        }
    };
    chk("lambda1", lambda1)?;
    chk("lambda2", lambda2)?;
    chk("lambda", lambda)?;
    if n == 0 {
        return Err(ParamError {
            name: "n",
            value: 0.0,
            requirement: "n >= 1",
        });
    }
    Ok(())
}

/// Closed-form PMF of the law behind the two-sided-sqrt normalizer `g_n`,
/// obtained by expanding the square in its definition. With `a = λ₁/λ`,
/// `b = λ₂/λ`:
///
/// * `p_k = 8ab / (π n² (4k² − 1))` for `|k| ≥ 2`,
/// * `p_1 = a²/n² + 8ab/(3πn²)`, `p_{−1} = b²/n² + 8ab/(3πn²)`,
/// * `p_0 = 1 − (a² + b²)/n² − 8ab/(πn²)`.
///
/// Sums to one exactly (telescoping `Σ_{k≥1} 1/(4k²−1) = 1/2`). The DFT
/// oracle confirms this expansion; see [`two_sided_sqrt_pmf_tail_formula`]
/// for the simpler expression that is only correct away from the center.
pub fn two_sided_sqrt_pmf(
    lambda1: f64,
    lambda2: f64,
    lambda: f64,
    n: u32,
    k: i64,
) -> Result<f64, ParamError> {
    check_two_sided_params(lambda1, lambda2, lambda, n)?;
    let a = lambda1 / lambda;
    let b = lambda2 / lambda;
    let n2 = (n as f64) * (n as f64);
    let pi = std::f64::consts::PI;
    Ok(match k {
        0 => 1.0 - (a * a + b * b) / n2 - 8.0 * a * b / (pi * n2),
        1 => a * a / n2 + 8.0 * a * b / (3.0 * pi * n2),
        -1 => b * b / n2 + 8.0 * a * b / (3.0 * pi * n2),
        _ => {
            let kk = k as f64;
            8.0 * a * b / (pi * n2 * (4.0 * kk * kk - 1.0))
        }
    })
}

/// The tail expression `8ab/(πn²(4k²−1))` applied to every `k ≠ 0`, with
/// `p_0 = 1 − 8ab/(πn²)`. Agrees with [`two_sided_sqrt_pmf`] for `|k| ≥ 2`
/// and misses the `a²/n²`, `b²/n²` contributions at `k ∈ {−1, 0, 1}`.
pub fn two_sided_sqrt_pmf_tail_formula(
    lambda1: f64,
    lambda2: f64,
    lambda: f64,
    n: u32,
    k: i64,
) -> Result<f64, ParamError> {
    check_two_sided_params(lambda1, lambda2, lambda, n)?;
    let a = lambda1 / lambda;
    let b = lambda2 / lambda;
    let n2 = (n as f64) * (n as f64);
    let pi = std::f64::consts::PI;
    Ok(if k == 0 {
        1.0 - 8.0 * a * b / (pi * n2)
    } else {
        let kk = k as f64;
        8.0 * a * b / (pi * n2 * (4.0 * kk * kk - 1.0))
    })
}

/// Closed-form validity boundary of the two-sided-sqrt normalizer:
/// `λ_min = √(λ₁² + λ₂² + 8λ₁λ₂/π) / n`, the root of `p_0 = 0`, which is
/// the only binding nonnegativity constraint.
pub fn two_sided_sqrt_lambda_boundary(
    lambda1: f64,
    lambda2: f64,
    n: u32,
) -> Result<f64, ParamError> {
    check_two_sided_params(lambda1, lambda2, 1.0, n)?;
    Ok(
        (lambda1 * lambda1 + lambda2 * lambda2 + 8.0 * lambda1 * lambda2 / std::f64::consts::PI)
            .sqrt()
            / n as f64,
    )
}

/// Smallest `λ` for which the two-sided-sqrt normalizer `g_n` is a valid
/// characteristic function, found by bisecting the validity oracle on
/// `[max(λ₁,λ₂)·10⁻³, (λ₁+λ₂)·10³]` to absolute tolerance `tol`.
pub fn min_valid_lambda(lambda1: f64, lambda2: f64, n: u32, tol: f64) -> Result<f64, InvertError> {
    check_two_sided_params(lambda1, lambda2, 1.0, n)?;
    let valid = |lam: f64| -> Result<bool, InvertError> {
        let fam = NormalizerFamily::two_sided_sqrt(lambda1, lambda2, lam)?;
        Ok(is_valid_cf(&fam.cf_at(n), ORACLE_GRID, MASS_TOLERANCE)?.is_valid)
    };
    let mut lo = lambda1.max(lambda2) * 1e-3;
    let mut hi = (lambda1 + lambda2) * 1e3;
    if valid(lo)? || !valid(hi)? {
        return Err(InvertError::BracketFailure { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if valid(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Total variation distance `(1/2) Σ_k |p_k − q_k|` over the union of the
/// two supports (windows are zero outside their range).
pub fn tv_distance(p: &PmfWindow, q: &PmfWindow) -> f64 {
    let mut acc = 0.0;
    for (k, pk) in p.iter() {
        acc += (pk - q.mass_at(k)).abs();
    }
    // q's entries outside p's window range
    let (lo, hi) = (p.k_min(), p.k_min() + p.len() as i64);
    for (k, qk) in q.iter() {
        if k < lo || k >= hi {
            acc += qk.abs();
        }
    }
    0.5 * acc
}

/// Sup over a uniform grid on `[0, 2π)` of `|f(t) − g(t)|`.
pub fn sup_cf_distance(f: &LatticeCf, g: &LatticeCf, grid_size: usize) -> f64 {
    grid(grid_size)
        .map(|t| (f.eval(t) - g.eval(t)).norm())
        .fold(0.0, f64::max)
}
