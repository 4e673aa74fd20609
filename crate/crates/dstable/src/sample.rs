//! Random-variate generation for the lattice laws and the triangular-array
//! row sums of the limit theorem.
//!
//! Constructions are chosen so their laws are provable from the generating
//! function algebra in [`crate::cf`], which lets the Fourier inversion module
//! act as an independent oracle for every sampler:
//!
//! * positive stable `S` (Laplace transform `e^{−u^γ}`) by the classical
//!   uniform–exponential ratio method,
//! * positive discrete stable as a Poisson mixture `N | S ~ Poisson(λ^{1/γ} S)`,
//! * compound Poisson as a random sum,
//! * limit-theorem rows as thinned random sums with row characteristic
//!   function `𝒫^n(g_n(t))`.
//!
//! All streams are seeded ChaCha8; identical seeds reproduce identical
//! batches bit for bit.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Geometric, Poisson};
use serde::{Deserialize, Serialize};

use crate::cf::{ParamError, Pgf};
use crate::invert::PmfWindow;

/// Seeded random stream; identical seeds reproduce identical draws.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// Positive stable variate with Laplace transform `E e^{−uS} = e^{−u^γ}`,
/// by the uniform–exponential ratio construction: with `U ~ Uniform(0, π)`
/// and `W ~ Exp(1)`,
///
/// ```text
/// S = sin(γU) / sin(U)^{1/γ} · ( sin((1−γ)U) / W )^{(1−γ)/γ}
/// ```
///
/// `γ = 1` is the degenerate case `S ≡ 1`.
pub fn sample_positive_stable(gamma: f64, src: &mut RandomSource) -> Result<f64, ParamError> {
    if !(gamma > 0.0 && gamma <= 1.0) || !gamma.is_finite() {
        return Err(ParamError {
            name: "gamma",
            value: gamma,
            requirement: "gamma in (0, 1]",
        });
    }
    if gamma == 1.0 {
        return Ok(1.0);
    }
    let u = loop {
        let v: f64 = src.random();
        if v > 0.0 {
            break v * std::f64::consts::PI;
        }
    };
    let w: f64 = src.sample(Exp1);
    let s = (gamma * u).sin() / u.sin().powf(1.0 / gamma)
        * (((1.0 - gamma) * u).sin() / w).powf((1.0 - gamma) / gamma);
    Ok(s)
}

fn poisson_draw(mean: f64, src: &mut RandomSource) -> u64 {
    if mean == 0.0 {
        return 0;
    }
    // Far tail of the stable mixing law: the relative Poisson fluctuation is
    // below 3e-8 here, so the rounded normal approximation is exact at the
    // resolution any finite batch can see.
    if mean > 1e15 {
        let z: f64 = rand_distr::StandardNormal.sample(src);
        return (mean + mean.sqrt() * z).round().max(0.0) as u64;
    }
    Poisson::new(mean)
        .expect("positive finite mean")
        .sample(src) as u64
}

/// Draw from the positive discrete stable law with characteristic function
/// `exp{−λ(1−e^{it})^γ}` via the Poisson mixture `N | S ~ Poisson(λ^{1/γ} S)`.
pub fn sample_positive_discrete_stable(
    lambda: f64,
    gamma: f64,
    src: &mut RandomSource,
) -> Result<u64, ParamError> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(ParamError {
            name: "lambda",
            value: lambda,
            requirement: "lambda > 0",
        });
    }
    if gamma == 1.0 {
        return Ok(poisson_draw(lambda, src));
    }
    let s = sample_positive_stable(gamma, src)?;
    Ok(poisson_draw(lambda.powf(1.0 / gamma) * s, src))
}

/// Inverse-CDF draw from a finite probability window.
pub fn sample_from_window(window: &PmfWindow, src: &mut RandomSource) -> i64 {
    let u: f64 = src.random();
    let mut acc = 0.0;
    let mut last = window.k_min();
    for (k, p) in window.iter() {
        acc += p;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

/// Compound Poisson draw `Σ_{j=1}^{K} Y_j` with `K ~ Poisson(rate)` and the
/// jumps `Y_j` drawn by `jump`.
pub fn sample_compound_poisson<F>(
    rate: f64,
    mut jump: F,
    src: &mut RandomSource,
) -> Result<i64, ParamError>
where
    F: FnMut(&mut RandomSource) -> i64,
{
    if rate <= 0.0 || !rate.is_finite() {
        return Err(ParamError {
            name: "a",
            value: rate,
            requirement: "a > 0",
        });
    }
    let k = poisson_draw(rate, src);
    let mut sum = 0i64;
    for _ in 0..k {
        sum += jump(src);
    }
    Ok(sum)
}

/// Draw a count from one of the catalogued generating functions.
pub fn sample_count(pgf: &Pgf, src: &mut RandomSource) -> Result<u64, ParamError> {
    Ok(match pgf {
        Pgf::PositiveDiscreteStable { lambda, gamma } => {
            sample_positive_discrete_stable(*lambda, *gamma, src)?
        }
        Pgf::Poisson { rate } => poisson_draw(*rate, src),
        Pgf::Hermite { a1, a2 } => {
            let x = if *a1 > 0.0 { poisson_draw(*a1, src) } else { 0 };
            let y = if *a2 > 0.0 { poisson_draw(*a2, src) } else { 0 };
            x + 2 * y
        }
        Pgf::DegenerateOne => 1,
        Pgf::ShiftedPoisson { mu } => 1 + poisson_draw(*mu, src),
        Pgf::ShiftedGeometric { p } => {
            1 + Geometric::new(*p)
                .expect("p validated on construction")
                .sample(src)
        }
    })
}

/// One row sum of the triangular array behind the limit theorem:
/// `Σ_{i=1}^{n} Σ_{j=1}^{N_i} B_{ij} Y_{ij}` with `N_i` drawn from the
/// counting law `𝒫`, `B_{ij} ~ Bernoulli(λ/n)`, and `Y_{ij}` from `jump`.
/// The row characteristic function is `𝒫^n(g_n(t))` for the thinning
/// normalizer `g_n = (1 − λ/n) + (λ/n) h`.
pub fn sample_triangular_row<F>(
    n: u32,
    lambda: f64,
    pgf: &Pgf,
    mut jump: F,
    src: &mut RandomSource,
) -> Result<i64, ParamError>
where
    F: FnMut(&mut RandomSource) -> i64,
{
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(ParamError {
            name: "lambda",
            value: lambda,
            requirement: "lambda in (0, 1)",
        });
    }
    if n == 0 {
        return Err(ParamError {
            name: "n",
            value: 0.0,
            requirement: "n >= 1",
        });
    }
    let keep = lambda / n as f64;
    let mut sum = 0i64;
    for _ in 0..n {
        let count = sample_count(pgf, src)?;
        for _ in 0..count {
            if src.random_bool(keep) {
                sum += jump(src);
            }
        }
    }
    Ok(sum)
}

/// A batch of integer draws with its law descriptor and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub law: String,
    pub seed: u64,
    pub values: Vec<i64>,
}

/// Sidecar metadata serialized next to a batch CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSidecar {
    pub law: String,
    pub seed: u64,
    pub count: usize,
}

impl SampleBatch {
    pub fn new(law: impl Into<String>, seed: u64, values: Vec<i64>) -> Self {
        Self {
            law: law.into(),
            seed,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sidecar(&self) -> BatchSidecar {
        BatchSidecar {
            law: self.law.clone(),
            seed: self.seed,
            count: self.values.len(),
        }
    }

    /// CSV with a single `value` column.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["value"])?;
        for v in &self.values {
            w.write_record([v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Normalized histogram of a batch over its sample range.
///
/// The range must be modest (≤ 2^26 lattice points); heavy-tailed batches
/// should be folded with [`empirical_pmf_folded`] instead, which mirrors the
/// aliasing of DFT inversion and stays comparable to an inverted window.
pub fn empirical_pmf(batch: &SampleBatch) -> PmfWindow {
    assert!(!batch.values.is_empty(), "empty batch has no histogram");
    let min = *batch.values.iter().min().unwrap();
    let max = *batch.values.iter().max().unwrap();
    let span = (max - min + 1) as usize;
    assert!(
        span <= 1 << 26,
        "sample range {span} too wide for a dense histogram; use empirical_pmf_folded"
    );
    let mut counts = vec![0u64; span];
    for &v in &batch.values {
        counts[(v - min) as usize] += 1;
    }
    let total = batch.values.len() as f64;
    PmfWindow::from_masses(min, counts.into_iter().map(|c| c as f64 / total).collect())
}

/// Histogram of the batch folded modulo `window` onto `[−window/2, window/2)`,
/// the empirical analogue of an aliased inverted window of the same size.
pub fn empirical_pmf_folded(batch: &SampleBatch, window: usize) -> PmfWindow {
    assert!(!batch.values.is_empty(), "empty batch has no histogram");
    assert!(window >= 8 && window.is_power_of_two());
    let w = window as i64;
    let half = w / 2;
    let mut counts = vec![0u64; window];
    for &v in &batch.values {
        let m = v.rem_euclid(w); // in [0, w)
        let r = if m >= half { m - w } else { m };
        counts[(r + half) as usize] += 1;
    }
    let total = batch.values.len() as f64;
    PmfWindow::new_aliased(
        -half,
        counts.into_iter().map(|c| c as f64 / total).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::LatticeCf;
    use crate::invert::{invert_to_pmf, tv_distance, ORACLE_GRID};

    fn laplace_check(gamma: f64, u: f64, draws: usize, seed: u64) {
        let mut src = RandomSource::new(seed);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..draws {
            let s = sample_positive_stable(gamma, &mut src).unwrap();
            let x = (-u * s).exp();
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / draws as f64;
        let var = (sumsq / draws as f64 - mean * mean).max(0.0);
        let se = (var / draws as f64).sqrt();
        let expect = (-u.powf(gamma)).exp();
        assert!(
            (mean - expect).abs() <= 3.0 * se,
            "gamma={gamma} u={u}: mean {mean:.6} expect {expect:.6} se {se:.2e}"
        );
    }

    #[test]
    fn positive_stable_laplace_transform() {
        laplace_check(0.5, 1.0, 1_000_000, 7);
        laplace_check(0.5, 4.0, 1_000_000, 8);
        laplace_check(0.8, 1.0, 1_000_000, 9);
    }

    #[test]
    fn degenerate_stable_at_gamma_one() {
        let mut src = RandomSource::new(1);
        for _ in 0..100 {
            assert_eq!(sample_positive_stable(1.0, &mut src).unwrap(), 1.0);
        }
    }

    #[test]
    fn discrete_stable_zero_probability_matches_pgf() {
        // P(N = 0) = 𝒫(0) = e^{−λ}
        let mut src = RandomSource::new(11);
        let draws = 1_000_000;
        let mut zeros = 0usize;
        for _ in 0..draws {
            if sample_positive_discrete_stable(1.0, 0.5, &mut src).unwrap() == 0 {
                zeros += 1;
            }
        }
        let p = zeros as f64 / draws as f64;
        let expect = (-1.0f64).exp();
        let se = (expect * (1.0 - expect) / draws as f64).sqrt();
        assert!((p - expect).abs() <= 3.0 * se, "p={p}");
    }

    #[test]
    fn discrete_stable_tv_against_inversion() {
        let draws = 1_000_000;
        for (gamma, seed, bound) in [(0.5, 42u64, 0.012), (0.8, 43, 0.005)] {
            let mut src = RandomSource::new(seed);
            let values: Vec<i64> = (0..draws)
                .map(|_| sample_positive_discrete_stable(1.0, gamma, &mut src).unwrap() as i64)
                .collect();
            let batch = SampleBatch::new("pds", seed, values);
            let emp = empirical_pmf_folded(&batch, ORACLE_GRID);
            let cf = LatticeCf::positive_discrete_stable(1.0, gamma).unwrap();
            let oracle = invert_to_pmf(&cf, ORACLE_GRID).unwrap();
            let tv = tv_distance(&emp, &oracle);
            assert!(tv <= bound, "gamma={gamma}: tv={tv:.5}");
        }
    }

    #[test]
    fn gamma_one_matches_direct_poisson_by_chi_square() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let draws = 1_000_000usize;
        let mut src_a = RandomSource::new(1001);
        let mut src_b = RandomSource::new(1002);
        let lambda = 1.0;
        let kmax = 9usize; // pool k >= 9 (expected count ~ 0.1% of draws)
        let mut obs_a = vec![0f64; kmax + 1];
        let mut obs_b = vec![0f64; kmax + 1];
        for _ in 0..draws {
            let a = sample_positive_discrete_stable(lambda, 1.0, &mut src_a).unwrap() as usize;
            obs_a[a.min(kmax)] += 1.0;
            let b = poisson_draw(lambda, &mut src_b) as usize;
            obs_b[b.min(kmax)] += 1.0;
        }
        let mut stat = 0.0;
        for k in 0..=kmax {
            let denom = obs_a[k] + obs_b[k];
            if denom > 0.0 {
                stat += (obs_a[k] - obs_b[k]).powi(2) / denom;
            }
        }
        let p = 1.0 - ChiSquared::new(kmax as f64).unwrap().cdf(stat);
        assert!(p > 0.001, "chi-square stat {stat:.2}, p {p:.5}");
    }

    #[test]
    fn compound_poisson_reduces_to_poisson_for_unit_jumps() {
        let draws = 1_000_000;
        let mut src = RandomSource::new(5);
        let values: Vec<i64> = (0..draws)
            .map(|_| sample_compound_poisson(2.0, |_| 1, &mut src).unwrap())
            .collect();
        let batch = SampleBatch::new("cp-unit", 5, values);
        let emp = empirical_pmf(&batch);
        let oracle = invert_to_pmf(&LatticeCf::poisson(2.0).unwrap(), 1 << 10).unwrap();
        assert!(tv_distance(&emp, &oracle) <= 0.003);
    }

    #[test]
    fn compound_poisson_hermite_jumps_match_inversion() {
        let (a1, a2) = (1.0, 0.5);
        let jump_law = PmfWindow::from_masses(1, vec![a1 / (a1 + a2), a2 / (a1 + a2)]);
        let mut src = RandomSource::new(77);
        let draws = 1_000_000;
        let values: Vec<i64> = (0..draws)
            .map(|_| {
                sample_compound_poisson(a1 + a2, |s| sample_from_window(&jump_law, s), &mut src)
                    .unwrap()
            })
            .collect();
        let batch = SampleBatch::new("hermite", 77, values);
        let emp = empirical_pmf(&batch);
        let oracle = invert_to_pmf(&LatticeCf::hermite(a1, a2).unwrap(), 1 << 10).unwrap();
        let tv = tv_distance(&emp, &oracle);
        assert!(tv <= 0.005, "tv {tv:.5}");
        // Wald identity: mean = a · E[Y]
        let mean: f64 = batch.values.iter().map(|&v| v as f64).sum::<f64>() / draws as f64;
        let expect = a1 + 2.0 * a2; // (a1+a2) · (p1 + 2 p2)
        let var_y: f64 = batch
            .values
            .iter()
            .map(|&v| (v as f64 - mean).powi(2))
            .sum::<f64>()
            / draws as f64;
        let se = (var_y / draws as f64).sqrt();
        assert!((mean - expect).abs() <= 3.0 * se);
    }

    #[test]
    fn row_sum_reduces_to_binomial() {
        let draws = 200_000;
        let (n, lambda) = (16u32, 0.5);
        let mut src = RandomSource::new(6);
        let values: Vec<i64> = (0..draws)
            .map(|_| {
                sample_triangular_row(n, lambda, &Pgf::DegenerateOne, |_| 1, &mut src).unwrap()
            })
            .collect();
        let batch = SampleBatch::new("row", 6, values);
        let emp = empirical_pmf(&batch);
        // exact Binomial(n, λ/n) masses
        let p = lambda / n as f64;
        let mut masses = Vec::new();
        let mut binom = 1.0f64;
        for k in 0..=n {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
            }
            masses.push(binom * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32));
        }
        let oracle = PmfWindow::from_masses(0, masses);
        assert!(tv_distance(&emp, &oracle) <= 0.004);
    }

    #[test]
    fn row_zero_probability_matches_pgf_at_one_minus_lambda() {
        let draws = 1_000_000;
        let lambda = 0.1;
        let pgf = Pgf::shifted_poisson(1.0).unwrap();
        let mut src = RandomSource::new(21);
        let mut zeros = 0usize;
        for _ in 0..draws {
            if sample_triangular_row(1, lambda, &pgf, |_| 1, &mut src).unwrap() == 0 {
                zeros += 1;
            }
        }
        let p = zeros as f64 / draws as f64;
        let expect = pgf
            .eval(num_complex::Complex64::new(1.0 - lambda, 0.0))
            .unwrap()
            .re;
        let se = (expect * (1.0 - expect) / draws as f64).sqrt();
        assert!((p - expect).abs() <= 3.0 * se, "p={p} expect={expect}");
    }

    #[test]
    fn row_tv_to_limit_shrinks_and_meets_the_bound() {
        // 𝒫 = 1 + Poisson(1), h = δ₁, λ = 0.5: limit Poisson(λ 𝒫'(1)) = Poisson(1)
        let pgf = Pgf::shifted_poisson(1.0).unwrap();
        let limit = invert_to_pmf(&LatticeCf::poisson(1.0).unwrap(), 1 << 10).unwrap();
        let draws = 1_000_000;
        let mut prev = f64::INFINITY;
        for (n, seed) in [(4u32, 31u64), (16, 32), (64, 33)] {
            let mut src = RandomSource::new(seed);
            let values: Vec<i64> = (0..draws)
                .map(|_| sample_triangular_row(n, 0.5, &pgf, |_| 1, &mut src).unwrap())
                .collect();
            let batch = SampleBatch::new("row", seed, values);
            let tv = tv_distance(&empirical_pmf(&batch), &limit);
            assert!(tv < prev, "n={n}: tv {tv:.5} not below {prev:.5}");
            if n == 64 {
                assert!(tv <= 0.01, "n=64 tv {tv:.5}");
            }
            prev = tv;
        }
    }

    #[test]
    fn empirical_histograms() {
        let zeros = SampleBatch::new("zeros", 0, vec![0; 100]);
        let w = empirical_pmf(&zeros);
        assert_eq!(w.mass_at(0), 1.0);
        assert_eq!(w.len(), 1);

        // concatenation invariance
        let a = SampleBatch::new("a", 0, vec![0, 1, 1, 2]);
        let b = SampleBatch::new("b", 0, vec![2, 3]);
        let ab = SampleBatch::new("ab", 0, vec![0, 1, 1, 2, 2, 3]);
        let wa = empirical_pmf(&a);
        let wb = empirical_pmf(&b);
        let wab = empirical_pmf(&ab);
        for k in 0..=3i64 {
            let mixed = (4.0 * wa.mass_at(k) + 2.0 * wb.mass_at(k)) / 6.0;
            assert!((wab.mass_at(k) - mixed).abs() <= 1e-15);
        }

        // Poisson(1) at one million draws sits within the statistical band
        let mut src = RandomSource::new(3);
        let values: Vec<i64> = (0..1_000_000)
            .map(|_| poisson_draw(1.0, &mut src) as i64)
            .collect();
        let batch = SampleBatch::new("poisson", 3, values);
        let oracle = invert_to_pmf(&LatticeCf::poisson(1.0).unwrap(), 1 << 10).unwrap();
        assert!(tv_distance(&empirical_pmf(&batch), &oracle) <= 0.003);
    }

    #[test]
    fn folding_matches_direct_reduction() {
        let batch = SampleBatch::new("fold", 0, vec![-9, -1, 0, 3, 7, 8, 17, 100]);
        let w = empirical_pmf_folded(&batch, 16);
        assert!(w.is_aliased());
        // 17 ≡ 1, 100 ≡ 4, −9 ≡ 7, 8 ≡ −8 (mod 16 into [−8, 8))
        assert!((w.mass_at(1) - 0.125).abs() <= 1e-15);
        assert!((w.mass_at(4) - 0.125).abs() <= 1e-15);
        assert!((w.mass_at(7) - 0.25).abs() <= 1e-15); // −9 and 7
        assert!((w.mass_at(-8) - 0.125).abs() <= 1e-15);
        assert!((w.sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn identical_seeds_reproduce_batches_bit_exactly() {
        let run = || {
            let mut src = RandomSource::new(99);
            (0..10_000)
                .map(|_| sample_positive_discrete_stable(1.0, 0.5, &mut src).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn parameter_domains() {
        let mut src = RandomSource::new(0);
        assert!(sample_positive_stable(0.0, &mut src).is_err());
        assert!(sample_positive_stable(1.2, &mut src).is_err());
        assert!(sample_positive_discrete_stable(-1.0, 0.5, &mut src).is_err());
        assert!(sample_triangular_row(4, 1.0, &Pgf::DegenerateOne, |_| 1, &mut src).is_err());
        assert!(sample_triangular_row(0, 0.5, &Pgf::DegenerateOne, |_| 1, &mut src).is_err());
        assert!(sample_compound_poisson(0.0, |_| 1, &mut src).is_err());
    }
}
