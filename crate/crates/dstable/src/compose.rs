//! Casual composition of lattice laws.
//!
//! A representation consists of a target characteristic function `f`, a base
//! law split into negative and nonnegative parts, and a normalizer sequence
//! `n ↦ g_n`. The composed value is
//!
//! ```text
//! ( Σ_{m≥1} p_{−m} g_n(−t)^m + Σ_{k≥0} p_k g_n(t)^k )^n
//! ```
//!
//! which equals the usual `(ĝ₁(i log g_n(−t)) + ĝ₂(−i log g_n(t)))^n` for
//! integer atoms because `e^{i(−i log w)k} = w^k`. No complex logarithm is
//! ever materialized, so the evaluation cannot trip over a branch cut when
//! `g_n(t)` winds near the negative real axis. Representations hold exactly,
//! so verification compares against tolerances near machine precision.

use num_complex::Complex64;
use serde::Serialize;

use crate::cf::{grid, LatticeCf, NormalizerFamily, ParamError, Pgf};
use crate::invert::{invert_to_pmf, is_valid_cf, tv_distance, InvertError, PmfWindow, ORACLE_GRID};

/// |g_n(t)| may exceed 1 by at most this much before composition refuses.
const DISK_TOLERANCE: f64 = 1e-9;
/// Grid and tolerance for the per-n normalizer validity oracle.
const VALIDITY_GRID: usize = 1 << 12;
const VALIDITY_TOLERANCE: f64 = 1e-10;
/// Hard cap on the truncation window for series bases.
const MAX_SERIES_GRID: usize = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum ComposeError {
    #[error("series truncation tail {achieved:.3e} above requested {requested:.3e}")]
    TailAboveTolerance { achieved: f64, requested: f64 },
    #[error("|g_n({t})| = {magnitude} exceeds the unit disk beyond rounding")]
    NormalizerOutsideDisk { t: f64, magnitude: f64 },
    #[error("window coefficient {value:.3e} at k = {k} is negative beyond rounding")]
    NegativeCoefficient { k: i64, value: f64 },
    #[error("window coefficients sum to {sum} instead of 1")]
    MassNotNormalized { sum: f64 },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Invert(#[from] InvertError),
}

#[derive(Debug, Clone)]
enum NonnegSide {
    /// Closed-form generating function for a law on the nonnegative integers.
    Closed(Pgf),
    /// Truncated coefficients `p_0, p_1, …`.
    Series(Vec<f64>),
}

/// A lattice law split into negative-support and nonnegative-support
/// coefficient sequences. The atom at zero belongs to the nonnegative part,
/// so the two sides sum to the whole law.
#[derive(Debug, Clone)]
pub struct SplitLatticePgf {
    /// `p_{−1}, p_{−2}, …`
    negative: Vec<f64>,
    nonnegative: NonnegSide,
    negative_tail: f64,
    nonnegative_tail: f64,
}

impl SplitLatticePgf {
    /// One-sided base with a closed-form generating function; the negative
    /// part is empty and both tails are zero.
    pub fn closed(pgf: Pgf) -> Self {
        Self {
            negative: Vec::new(),
            nonnegative: NonnegSide::Closed(pgf),
            negative_tail: 0.0,
            nonnegative_tail: 0.0,
        }
    }

    /// Point mass at the integer `k`.
    pub fn degenerate(k: i64) -> Self {
        let w = if k >= 0 {
            let mut m = vec![0.0; k as usize + 1];
            *m.last_mut().unwrap() = 1.0;
            PmfWindow::from_masses(0, m)
        } else {
            let mut m = vec![0.0; (-k) as usize];
            m[0] = 1.0;
            PmfWindow::from_masses(k, m)
        };
        Self::from_window(&w, 0.0).expect("degenerate window is a valid law")
    }

    /// Split an explicit window into the two coefficient sequences.
    ///
    /// `declared_tail` is the caller's bound on the mass outside the window.
    /// Coefficients below −1e-12 are rejected; tiny negatives from transform
    /// rounding are clamped to zero.
    pub fn from_window(window: &PmfWindow, declared_tail: f64) -> Result<Self, ComposeError> {
        let sum = window.sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(ComposeError::MassNotNormalized { sum });
        }
        let mut max_neg_k = 0i64;
        let mut max_pos_k = 0i64;
        for (k, p) in window.iter() {
            if p < -1e-12 {
                return Err(ComposeError::NegativeCoefficient { k, value: p });
            }
            if p != 0.0 {
                max_neg_k = max_neg_k.max(-k);
                max_pos_k = max_pos_k.max(k);
            }
        }
        let mut negative = vec![0.0; max_neg_k as usize];
        let mut nonneg = vec![0.0; max_pos_k as usize + 1];
        for (k, p) in window.iter() {
            if p == 0.0 {
                continue;
            }
            let p = p.max(0.0);
            if k < 0 {
                negative[(-k - 1) as usize] = p;
            } else {
                nonneg[k as usize] = p;
            }
        }
        // the split tail bound is not attributable per side; charge both
        Ok(Self {
            negative,
            nonnegative: NonnegSide::Series(nonneg),
            negative_tail: declared_tail,
            nonnegative_tail: declared_tail,
        })
    }

    /// Build a truncated-series base from any lattice characteristic
    /// function, growing the inversion window until the declared tail bound
    /// drops below `tail_tol` (hard cap 2^16 terms).
    pub fn from_cf(cf: &LatticeCf, tail_tol: f64) -> Result<Self, ComposeError> {
        let mut n_grid = 1usize << 10;
        loop {
            let window = invert_to_pmf(cf, n_grid)?;
            let tail = n_grid as f64 * window.decay_estimate();
            if tail <= tail_tol {
                let mut split = Self::from_window(&window, tail)?;
                split.trim(1e-16);
                return Ok(split);
            }
            if n_grid >= MAX_SERIES_GRID {
                return Err(ComposeError::TailAboveTolerance {
                    achieved: tail,
                    requested: tail_tol,
                });
            }
            n_grid *= 2;
        }
    }

    /// Drop outermost coefficients with |p| ≤ floor, charging them to the
    /// declared tails.
    fn trim(&mut self, floor: f64) {
        while let Some(&p) = self.negative.last() {
            if p.abs() <= floor {
                self.negative_tail += p.abs();
                self.negative.pop();
            } else {
                break;
            }
        }
        if let NonnegSide::Series(coeffs) = &mut self.nonnegative {
            while coeffs.len() > 1 {
                let p = *coeffs.last().unwrap();
                if p.abs() <= floor {
                    self.nonnegative_tail += p.abs();
                    coeffs.pop();
                } else {
                    break;
                }
            }
        }
    }

    pub fn negative_coefficients(&self) -> &[f64] {
        &self.negative
    }

    /// Total declared truncation tail over both sides.
    pub fn declared_tail(&self) -> f64 {
        self.negative_tail + self.nonnegative_tail
    }

    /// The law as a characteristic function (for inversion and distances).
    pub fn to_cf(&self) -> LatticeCf {
        match &self.nonnegative {
            NonnegSide::Closed(pgf) => {
                let pgf = pgf.clone();
                let negative = self.negative.clone();
                LatticeCf::from_fn(move |t| {
                    let mut acc = pgf.eval_one_minus(crate::cf::one_minus_exp_it(t));
                    let wm = Complex64::from_polar(1.0, -t);
                    let mut pow = Complex64::ONE;
                    for p in &negative {
                        pow *= wm;
                        acc += pow * *p;
                    }
                    acc
                })
            }
            NonnegSide::Series(coeffs) => {
                let mut k_min = -(self.negative.len() as i64);
                let mut masses: Vec<f64> = self.negative.iter().rev().copied().collect();
                masses.extend_from_slice(coeffs);
                if masses.is_empty() {
                    masses.push(1.0);
                    k_min = 0;
                }
                LatticeCf::PmfBacked(PmfWindow::from_masses(k_min, masses))
            }
        }
    }
}

fn horner(coeffs: &[f64], w: Complex64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for &p in coeffs.iter().rev() {
        acc = acc * w + p;
    }
    acc
}

/// The inner composed value
/// `Σ_{m≥1} p_{−m} g_n(−t)^m + Σ_{k≥0} p_k g_n(t)^k`,
/// with closed-form generating functions evaluated from the exact deficit
/// `1 − g_n(t)` instead of the subtraction.
pub fn casual_inner(
    base: &SplitLatticePgf,
    g_n: &LatticeCf,
    t: f64,
) -> Result<Complex64, ComposeError> {
    let q = g_n.deficit(t);
    let w = Complex64::ONE - q;
    let magnitude = w.norm();
    if magnitude > 1.0 + DISK_TOLERANCE {
        return Err(ComposeError::NormalizerOutsideDisk { t, magnitude });
    }
    let mut acc = match &base.nonnegative {
        NonnegSide::Closed(pgf) => pgf.eval_one_minus(q),
        NonnegSide::Series(coeffs) => horner(coeffs, w),
    };
    if !base.negative.is_empty() {
        let wm = Complex64::ONE - g_n.deficit(-t);
        let mag_m = wm.norm();
        if mag_m > 1.0 + DISK_TOLERANCE {
            return Err(ComposeError::NormalizerOutsideDisk {
                t: -t,
                magnitude: mag_m,
            });
        }
        // Σ_{m≥1} p_{−m} w⁻^m = w⁻ (p_{−1} + w⁻ (p_{−2} + …))
        acc += horner(&base.negative, wm) * wm;
    }
    Ok(acc)
}

/// `casual_inner(...)^n` by exact integer exponentiation.
pub fn casual_compose_pow(
    base: &SplitLatticePgf,
    g_n: &LatticeCf,
    n: u32,
    t: f64,
) -> Result<Complex64, ComposeError> {
    Ok(casual_inner(base, g_n, t)?.powu(n))
}

/// One full representation instance: target law, split base, and the
/// normalizer family, together with the range of `n` to verify.
#[derive(Debug, Clone)]
pub struct CasualRepresentation {
    pub target: LatticeCf,
    pub base: SplitLatticePgf,
    pub normalizers: NormalizerFamily,
    pub n_max: u32,
}

impl CasualRepresentation {
    /// Symmetric discrete stable target over the positive discrete stable
    /// base with cosine-mixture normalizers.
    pub fn symmetric_discrete_stable(
        lambda: f64,
        gamma: f64,
        n_max: u32,
    ) -> Result<Self, ParamError> {
        Ok(Self {
            target: LatticeCf::symmetric_discrete_stable(lambda, gamma)?,
            base: SplitLatticePgf::closed(Pgf::positive_discrete_stable(lambda, gamma)?),
            normalizers: NormalizerFamily::cosine_mixture(gamma)?,
            n_max,
        })
    }

    /// Two-sided α = 1/2 target over the positive discrete stable base at
    /// exponent 1/2 with the two-sided-sqrt normalizers. The normalizers are
    /// valid characteristic functions only for λ at or above the boundary of
    /// [`two_sided_sqrt_lambda_boundary`](crate::invert::two_sided_sqrt_lambda_boundary).
    pub fn two_sided_half_stable(
        lambda1: f64,
        lambda2: f64,
        lambda: f64,
        n_max: u32,
    ) -> Result<Self, ParamError> {
        Ok(Self {
            target: LatticeCf::two_sided_discrete_stable(lambda1, lambda2, 0.5)?,
            base: SplitLatticePgf::closed(Pgf::positive_discrete_stable(lambda, 0.5)?),
            normalizers: NormalizerFamily::two_sided_sqrt(lambda1, lambda2, lambda)?,
            n_max,
        })
    }

    /// Hermite target over a Poisson base with affine normalizers; needs
    /// `a ≥ a₁ + a₂` for every `g_n` to be a valid characteristic function.
    pub fn hermite(a1: f64, a2: f64, a: f64, n_max: u32) -> Result<Self, ParamError> {
        Ok(Self {
            target: LatticeCf::hermite(a1, a2)?,
            base: SplitLatticePgf::closed(Pgf::poisson(a)?),
            normalizers: NormalizerFamily::hermite_affine(a1, a2, a)?,
            n_max,
        })
    }

    /// Compound Poisson target `exp{a(h − 1)}` over a Poisson(A) base with
    /// jump-mixture normalizers; needs `A ≥ a`.
    pub fn compound_poisson(
        a: f64,
        big_a: f64,
        jump: LatticeCf,
        n_max: u32,
    ) -> Result<Self, ParamError> {
        Ok(Self {
            target: LatticeCf::compound_poisson(a, jump.clone())?,
            base: SplitLatticePgf::closed(Pgf::poisson(big_a)?),
            normalizers: NormalizerFamily::jump_mixture(a, big_a, jump)?,
            n_max,
        })
    }

    /// Positive discrete stable represented over itself, with Bernoulli
    /// mixtures as normalizers.
    pub fn positive_self(lambda: f64, gamma: f64, n_max: u32) -> Result<Self, ParamError> {
        Ok(Self {
            target: LatticeCf::positive_discrete_stable(lambda, gamma)?,
            base: SplitLatticePgf::closed(Pgf::positive_discrete_stable(lambda, gamma)?),
            normalizers: NormalizerFamily::bernoulli_mixture(gamma)?,
            n_max,
        })
    }

    /// Positive discrete stable represented over the doubled-exponent base
    /// with Sibuya mixtures; requires `γ ≤ 1/2`.
    pub fn positive_sqrt(lambda: f64, gamma: f64, n_max: u32) -> Result<Self, ParamError> {
        Ok(Self {
            target: LatticeCf::positive_discrete_stable(lambda, gamma)?,
            base: SplitLatticePgf::closed(Pgf::positive_discrete_stable(lambda, 2.0 * gamma)?),
            normalizers: NormalizerFamily::sibuya_mixture(gamma)?,
            n_max,
        })
    }
}

/// Per-`n` outcome inside a [`VerificationReport`].
#[derive(Debug, Clone, Serialize)]
pub struct VerificationRow {
    pub n: u32,
    /// sup over the grid of |target(t) − composition(t)|; infinite when the
    /// composition could not be evaluated.
    pub sup_error: f64,
    /// Verdict of the characteristic-function validity oracle on `g_n`.
    pub normalizer_valid: bool,
}

/// Outcome of verifying one representation over its `n` range.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub grid_size: usize,
    pub tolerance: f64,
    pub base_tail: f64,
    pub rows: Vec<VerificationRow>,
    pub max_error: f64,
    pub verdict: bool,
}

/// Check `target(t) = composition^n(t)` on a uniform grid for every `n` in
/// the representation's range, and run the validity oracle on each `g_n`.
/// Failures are recorded in the report, never thrown.
pub fn verify_representation(
    rep: &CasualRepresentation,
    grid_size: usize,
    tolerance: f64,
) -> VerificationReport {
    let mut rows = Vec::with_capacity(rep.n_max as usize);
    let mut max_error: f64 = 0.0;
    let mut all_valid = true;
    for n in 1..=rep.n_max {
        let g_n = rep.normalizers.cf_at(n);
        let normalizer_valid = is_valid_cf(&g_n, VALIDITY_GRID, VALIDITY_TOLERANCE)
            .map(|r| r.is_valid)
            .unwrap_or(false);
        let mut sup_error: f64 = 0.0;
        for t in grid(grid_size) {
            match casual_compose_pow(&rep.base, &g_n, n, t) {
                Ok(v) => sup_error = sup_error.max((rep.target.eval(t) - v).norm()),
                Err(_) => {
                    sup_error = f64::INFINITY;
                    break;
                }
            }
        }
        max_error = max_error.max(sup_error);
        all_valid &= normalizer_valid;
        rows.push(VerificationRow {
            n,
            sup_error,
            normalizer_valid,
        });
    }
    VerificationReport {
        grid_size,
        tolerance,
        base_tail: rep.base.declared_tail(),
        rows,
        max_error,
        verdict: max_error <= tolerance && all_valid,
    }
}

/// The two distinct representations of the same positive discrete stable
/// law, plus the total variation distance between their base laws.
#[derive(Debug, Clone, Serialize)]
pub struct NonuniquenessDemo {
    pub via_self: VerificationReport,
    pub via_sqrt: VerificationReport,
    /// TV distance between the two base laws (inverted at oracle grid).
    pub base_tv: f64,
}

/// Build and verify both representations of `exp{−λ(1−e^{it})^γ}` for
/// `γ ∈ (0, 1/2)`: once over itself, once over the doubled-exponent base.
pub fn nonuniqueness_demo(
    lambda: f64,
    gamma: f64,
    n_max: u32,
    grid_size: usize,
    tolerance: f64,
) -> Result<NonuniquenessDemo, ComposeError> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(ParamError {
            name: "gamma",
            value: gamma,
            requirement: "gamma in (0, 1/2) for the non-uniqueness construction",
        }
        .into());
    }
    let first = CasualRepresentation::positive_self(lambda, gamma, n_max)?;
    let second = CasualRepresentation::positive_sqrt(lambda, gamma, n_max)?;
    let w1 = invert_to_pmf(&first.base.to_cf(), ORACLE_GRID)?;
    let w2 = invert_to_pmf(&second.base.to_cf(), ORACLE_GRID)?;
    Ok(NonuniquenessDemo {
        via_self: verify_representation(&first, grid_size, tolerance),
        via_sqrt: verify_representation(&second, grid_size, tolerance),
        base_tv: tv_distance(&w1, &w2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::one_minus_cos;

    #[test]
    fn degenerate_bases() {
        let at_zero = SplitLatticePgf::degenerate(0);
        let at_one = SplitLatticePgf::degenerate(1);
        let g = NormalizerFamily::cosine_mixture(0.5).unwrap().cf_at(3);
        for t in grid(64) {
            assert!((casual_inner(&at_zero, &g, t).unwrap() - Complex64::ONE).norm() <= 1e-15);
            assert!((casual_inner(&at_one, &g, t).unwrap() - g.eval(t)).norm() <= 1e-14);
        }
    }

    #[test]
    fn negative_support_base_recovers_mirrored_law() {
        // base concentrated at −1: inner value must be g_n(−t)
        let base = SplitLatticePgf::degenerate(-1);
        let g = NormalizerFamily::bernoulli_mixture(0.5).unwrap().cf_at(2);
        for t in grid(64) {
            let expect = g.eval(-t);
            assert!((casual_inner(&base, &g, t).unwrap() - expect).norm() <= 1e-14);
        }
    }

    #[test]
    fn inner_closed_form_for_cosine_mixture() {
        let base = SplitLatticePgf::closed(Pgf::positive_discrete_stable(1.0, 0.5).unwrap());
        let g4 = NormalizerFamily::cosine_mixture(0.5).unwrap().cf_at(4);
        let t = std::f64::consts::PI / 3.0;
        let expect = (-(0.25) * one_minus_cos(t).sqrt()).exp();
        let got = casual_inner(&base, &g4, t).unwrap();
        assert!((got.re - expect).abs() <= 1e-13 && got.im.abs() <= 1e-13);
    }

    #[test]
    fn compose_pow_matches_targets() {
        // symmetric discrete stable
        let rep = CasualRepresentation::symmetric_discrete_stable(1.0, 0.5, 8).unwrap();
        let g8 = rep.normalizers.cf_at(8);
        let got = casual_compose_pow(&rep.base, &g8, 8, 1.0).unwrap();
        let expect = rep.target.eval(1.0);
        assert!((got - expect).norm() <= 1e-12);
        // n = 1 is the inner value itself
        let g1 = rep.normalizers.cf_at(1);
        assert_eq!(
            casual_compose_pow(&rep.base, &g1, 1, 0.7).unwrap(),
            casual_inner(&rep.base, &g1, 0.7).unwrap()
        );
        // Hermite
        let rep = CasualRepresentation::hermite(1.0, 0.5, 2.0, 5).unwrap();
        let g5 = rep.normalizers.cf_at(5);
        let got = casual_compose_pow(&rep.base, &g5, 5, 2.0).unwrap();
        assert!((got - rep.target.eval(2.0)).norm() <= 1e-12);
    }

    #[test]
    fn verify_symmetric_representation() {
        let rep = CasualRepresentation::symmetric_discrete_stable(1.0, 0.5, 64).unwrap();
        let report = verify_representation(&rep, 1 << 12, 1e-10);
        assert!(report.verdict, "max error {:.3e}", report.max_error);
        assert!(report.rows.iter().all(|r| r.normalizer_valid));
    }

    #[test]
    fn verify_compound_poisson_representation() {
        let jump = LatticeCf::PmfBacked(PmfWindow::from_masses(1, vec![2.0 / 3.0, 1.0 / 3.0]));
        let rep = CasualRepresentation::compound_poisson(1.0, 2.0, jump, 32).unwrap();
        let report = verify_representation(&rep, 1 << 10, 1e-10);
        assert!(report.verdict, "max error {:.3e}", report.max_error);
    }

    #[test]
    fn corrupted_normalizer_exponent_is_caught() {
        // cosine mixture with weight n^{−1} instead of n^{−1/γ}
        let rep = CasualRepresentation {
            target: LatticeCf::symmetric_discrete_stable(1.0, 0.5).unwrap(),
            base: SplitLatticePgf::closed(Pgf::positive_discrete_stable(1.0, 0.5).unwrap()),
            normalizers: NormalizerFamily::cosine_mixture(1.0).unwrap(),
            n_max: 8,
        };
        let report = verify_representation(&rep, 1 << 10, 1e-10);
        assert!(!report.verdict);
        assert!(
            report.max_error > 1e-3,
            "max error {:.3e}",
            report.max_error
        );
    }

    #[test]
    fn series_and_closed_paths_agree_for_light_tails() {
        let pgf = Pgf::poisson(2.0).unwrap();
        let closed = SplitLatticePgf::closed(pgf.clone());
        assert!(closed.negative_coefficients().is_empty());
        let series = SplitLatticePgf::from_cf(&closed.to_cf(), 1e-12).unwrap();
        assert!(series.negative_coefficients().is_empty());
        let g = NormalizerFamily::cosine_mixture(0.5).unwrap().cf_at(3);
        for t in grid(256) {
            let a = casual_inner(&closed, &g, t).unwrap();
            let b = casual_inner(&series, &g, t).unwrap();
            assert!((a - b).norm() <= 1e-10, "t={t}: {:?} vs {:?}", a, b);
        }
    }

    #[test]
    fn heavy_tail_refuses_truncation() {
        let cf = LatticeCf::positive_discrete_stable(1.0, 0.5).unwrap();
        match SplitLatticePgf::from_cf(&cf, 1e-12) {
            Err(ComposeError::TailAboveTolerance { achieved, .. }) => {
                assert!(achieved > 1e-12);
            }
            other => panic!("expected tail error, got {other:?}"),
        }
    }

    #[test]
    fn doubling_the_window_respects_the_tail_budget() {
        let cf = LatticeCf::poisson(3.0).unwrap();
        let target = LatticeCf::poisson(3.0).unwrap();
        let g = NormalizerFamily::bernoulli_mixture(1.0).unwrap();
        let err_of = |n_grid: usize| -> (f64, f64) {
            let w = invert_to_pmf(&cf, n_grid).unwrap();
            let tail = n_grid as f64 * w.decay_estimate();
            let base = SplitLatticePgf::from_window(&w, tail).unwrap();
            let mut worst: f64 = 0.0;
            for t in grid(256) {
                let v = casual_compose_pow(&base, &g.cf_at(4), 4, t).unwrap();
                worst = worst.max((target.eval(t) - v).norm());
            }
            (worst, tail)
        };
        let (err_small, tail_small) = err_of(64);
        let (err_big, _) = err_of(128);
        assert!(err_big <= err_small + tail_small + 1e-14);
    }

    #[test]
    fn inner_is_one_at_zero() {
        let bases = vec![
            SplitLatticePgf::closed(Pgf::positive_discrete_stable(2.0, 0.3).unwrap()),
            SplitLatticePgf::closed(Pgf::poisson(1.5).unwrap()),
            SplitLatticePgf::from_window(
                &PmfWindow::from_masses(-2, vec![0.1, 0.2, 0.4, 0.2, 0.1]),
                0.0,
            )
            .unwrap(),
        ];
        let fams = vec![
            NormalizerFamily::cosine_mixture(0.5).unwrap(),
            NormalizerFamily::bernoulli_mixture(0.25).unwrap(),
            NormalizerFamily::sibuya_mixture(0.25).unwrap(),
        ];
        for base in &bases {
            for fam in &fams {
                for n in [1u32, 2, 7] {
                    let v = casual_inner(base, &fam.cf_at(n), 0.0).unwrap();
                    assert!((v - Complex64::ONE).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn nonuniqueness_produces_two_valid_distinct_representations() {
        let demo = nonuniqueness_demo(1.0, 0.25, 16, 1 << 10, 1e-10).unwrap();
        assert!(
            demo.via_self.verdict,
            "self rep max err {:.3e}",
            demo.via_self.max_error
        );
        assert!(
            demo.via_sqrt.verdict,
            "sqrt rep max err {:.3e}",
            demo.via_sqrt.max_error
        );
        assert!(demo.base_tv > 1e-3, "tv {}", demo.base_tv);
        assert!(nonuniqueness_demo(1.0, 0.6, 4, 256, 1e-10).is_err());
        assert!(nonuniqueness_demo(1.0, 0.5, 4, 256, 1e-10).is_err());
    }

    #[test]
    fn sibuya_mixture_masses_follow_the_binomial_series() {
        // masses: 1 − c at 0 and c·b_k at k ≥ 1, where b_k are the
        // coefficients of 1 − (1−z)^{1/2}: b_1 = 1/2, b_{k+1} = b_k (2k−1)/(2k+2)
        let gamma = 0.25;
        let n = 3u32;
        let c = f64::from(n).powf(-1.0 / (2.0 * gamma));
        let fam = NormalizerFamily::sibuya_mixture(gamma).unwrap();
        let w = invert_to_pmf(&fam.cf_at(n), ORACLE_GRID).unwrap();
        // k^{−3/2} decay puts the aliasing floor near 1e-8 at this window
        assert!((w.mass_at(0) - (1.0 - c)).abs() <= 1e-6);
        let mut b = 0.5;
        for k in 1..=40i64 {
            assert!((w.mass_at(k) - c * b).abs() <= 1e-6, "k={k}");
            assert!(w.mass_at(k) >= -1e-12);
            b *= (2.0 * k as f64 - 1.0) / (2.0 * k as f64 + 2.0);
        }
        assert!(w.min_mass() >= -1e-12);
    }
}
