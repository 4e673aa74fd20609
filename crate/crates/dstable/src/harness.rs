//! Run configurations, the command entry points behind the CLI, and
//! machine-readable report emission.
//!
//! Commands return typed outputs that render deterministically to CSV and
//! JSON (17-significant-digit reals in CSV) so that identical configurations
//! and seeds produce byte-identical files. Exit-code policy: 0 when every
//! verdict passes, 1 when a verification or convergence verdict fails, 2 for
//! usage and domain errors.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cf::{LatticeCf, NormalizerFamily, ParamError, Pgf};
use crate::compose::{
    casual_compose_pow, nonuniqueness_demo, verify_representation, CasualRepresentation,
    ComposeError, NonuniquenessDemo, SplitLatticePgf, VerificationReport,
};
use crate::invert::{
    invert_to_pmf, sup_cf_distance, tv_distance, two_sided_sqrt_lambda_boundary,
    two_sided_sqrt_pmf, two_sided_sqrt_pmf_tail_formula, InvertError, PmfWindow, ORACLE_GRID,
};
use crate::sample::{
    empirical_pmf_folded, sample_compound_poisson, sample_from_window,
    sample_positive_discrete_stable, sample_triangular_row, RandomSource, SampleBatch,
};

/// Environment variable naming the default output directory for relative
/// `--out` paths.
pub const OUT_DIR_ENV: &str = "DSTABLE_OUT_DIR";

const DEFAULT_GRID: usize = 1 << 12;
const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Config(#[from] serde_json::Error),
}

impl From<ParamError> for HarnessError {
    fn from(e: ParamError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<ComposeError> for HarnessError {
    fn from(e: ComposeError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<InvertError> for HarnessError {
    fn from(e: InvertError) -> Self {
        Self::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Flag-for-flag mirror of the CLI; a JSON file with the same keys can be
/// loaded with `--config`, and explicit flags win on conflict.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub example: Option<u32>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub a: Option<f64>,
    #[serde(rename = "A")]
    pub big_a: Option<f64>,
    pub n: Option<u32>,
    pub n_max: Option<u32>,
    pub grid: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub law: Option<String>,
    pub pgf: Option<String>,
    pub jump: Option<String>,
    pub normalizer: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Overlay `flags` on top of `self`; populated fields in `flags` win.
    pub fn overlaid_with(self, flags: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($field:ident) => {
                flags.$field.or(self.$field)
            };
        }
        RunConfig {
            example: pick!(example),
            lambda: pick!(lambda),
            gamma: pick!(gamma),
            alpha: pick!(alpha),
            lambda1: pick!(lambda1),
            lambda2: pick!(lambda2),
            a1: pick!(a1),
            a2: pick!(a2),
            a: pick!(a),
            big_a: pick!(big_a),
            n: pick!(n),
            n_max: pick!(n_max),
            grid: pick!(grid),
            samples: pick!(samples),
            seed: pick!(seed),
            law: pick!(law),
            pgf: pick!(pgf),
            jump: pick!(jump),
            normalizer: pick!(normalizer),
            out: pick!(out),
            format: pick!(format),
        }
    }
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::Usage(msg.into())
}

fn grid_of(config: &RunConfig, default: usize) -> Result<usize, HarnessError> {
    let g = config.grid.unwrap_or(default);
    if g < 8 || !g.is_power_of_two() {
        return Err(usage(format!(
            "--grid {g} must be a power of two, at least 8"
        )));
    }
    Ok(g)
}

/// Parse a catalogued counting law: `one`, `poisson:RATE`,
/// `shifted-poisson:MU`, `shifted-geometric:P`, `hermite:A1,A2`.
pub fn parse_pgf(name: &str) -> Result<Pgf, HarnessError> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let one_num = |what: &str| -> Result<f64, HarnessError> {
        arg.ok_or_else(|| usage(format!("{head} needs a parameter, e.g. {head}:{what}")))?
            .parse::<f64>()
            .map_err(|_| usage(format!("bad number in pgf '{name}'")))
    };
    Ok(match head {
        "one" => Pgf::DegenerateOne,
        "poisson" => Pgf::poisson(one_num("1.0")?)?,
        "shifted-poisson" => Pgf::shifted_poisson(one_num("1.0")?)?,
        "shifted-geometric" => Pgf::shifted_geometric(one_num("0.5")?)?,
        "hermite" => {
            let arg = arg.ok_or_else(|| usage("hermite needs parameters, e.g. hermite:1,0.5"))?;
            let (s1, s2) = arg
                .split_once(',')
                .ok_or_else(|| usage("hermite takes two parameters, e.g. hermite:1,0.5"))?;
            let a1 = s1.parse::<f64>().map_err(|_| usage(format!("bad number in '{name}'")))?;
            let a2 = s2.parse::<f64>().map_err(|_| usage(format!("bad number in '{name}'")))?;
            Pgf::hermite(a1, a2)?
        }
        _ => return Err(usage(format!(
            "unknown pgf '{name}' (choose one, poisson:RATE, shifted-poisson:MU, shifted-geometric:P, hermite:A1,A2)"
        ))),
    })
}

/// Parse a catalogued jump law: `one` (point mass at 1), `two` (point mass
/// at 2), or `hermite:A1,A2` (mass a1/(a1+a2) at 1 and a2/(a1+a2) at 2).
pub fn parse_jump(name: &str) -> Result<PmfWindow, HarnessError> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    Ok(match head {
        "one" => PmfWindow::from_masses(1, vec![1.0]),
        "two" => PmfWindow::from_masses(2, vec![1.0]),
        "hermite" => {
            let arg = arg.unwrap_or("1,0.5");
            let (s1, s2) = arg
                .split_once(',')
                .ok_or_else(|| usage("hermite jump takes two parameters, e.g. hermite:1,0.5"))?;
            let a1: f64 = s1
                .parse()
                .map_err(|_| usage(format!("bad number in '{name}'")))?;
            let a2: f64 = s2
                .parse()
                .map_err(|_| usage(format!("bad number in '{name}'")))?;
            if !(a1 >= 0.0 && a2 >= 0.0 && a1 + a2 > 0.0) {
                return Err(usage("hermite jump needs a1, a2 >= 0 with a1 + a2 > 0"));
            }
            PmfWindow::from_masses(1, vec![a1 / (a1 + a2), a2 / (a1 + a2)])
        }
        _ => {
            return Err(usage(format!(
                "unknown jump '{name}' (choose one, two, hermite:A1,A2)"
            )))
        }
    })
}

fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Labeled verification output of `verify`.
#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub label: String,
    pub report: VerificationReport,
}

impl VerifyOutput {
    pub fn passed(&self) -> bool {
        self.report.verdict
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,sup_error,normalizer_valid\n");
        for row in &self.report.rows {
            s.push_str(&format!(
                "{},{},{}\n",
                row.n,
                format_real(row.sup_error),
                row.normalizer_valid
            ));
        }
        s
    }

    pub fn summary(&self) -> String {
        format!(
            "verify {}: grid {}, tolerance {:.1e}, max error {:.3e} -> {}",
            self.label,
            self.report.grid_size,
            self.report.tolerance,
            self.report.max_error,
            if self.report.verdict { "PASS" } else { "FAIL" }
        )
    }
}

/// Run one representation-identity verification selected by `--example`.
pub fn cmd_verify(config: &RunConfig) -> Result<VerifyOutput, HarnessError> {
    let example = config
        .example
        .ok_or_else(|| usage("verify needs --example 1|2|3|4"))?;
    let grid_size = grid_of(config, DEFAULT_GRID)?;
    let n_max = config.n_max.unwrap_or(64).max(1);
    let (label, rep) = match example {
        1 => {
            let lambda = config.lambda.unwrap_or(1.0);
            let gamma = config.gamma.unwrap_or(0.5);
            (
                format!("symmetric discrete stable (lambda={lambda}, gamma={gamma})"),
                CasualRepresentation::symmetric_discrete_stable(lambda, gamma, n_max)?,
            )
        }
        2 => {
            let lambda1 = config.lambda1.unwrap_or(1.0);
            let lambda2 = config.lambda2.unwrap_or(1.0);
            let lambda = match config.lambda {
                Some(l) => l,
                None => two_sided_sqrt_lambda_boundary(lambda1, lambda2, 1)?,
            };
            (
                format!("two-sided half-exponent law (lambda1={lambda1}, lambda2={lambda2}, lambda={lambda})"),
                CasualRepresentation::two_sided_half_stable(lambda1, lambda2, lambda, n_max)?,
            )
        }
        3 => {
            let a1 = config.a1.unwrap_or(1.0);
            let a2 = config.a2.unwrap_or(0.5);
            let a = config.a.unwrap_or(2.0 * (a1 + a2));
            if a < a1 + a2 {
                return Err(usage(format!(
                    "a = {a} must be at least a1 + a2 = {} for every normalizer to be a valid characteristic function",
                    a1 + a2
                )));
            }
            (
                format!("hermite (a1={a1}, a2={a2}, a={a})"),
                CasualRepresentation::hermite(a1, a2, a, n_max)?,
            )
        }
        4 => {
            let a = config.a.unwrap_or(1.0);
            let big_a = config.big_a.unwrap_or(2.0 * a);
            if big_a < a {
                return Err(usage(format!("A = {big_a} must be at least a = {a}")));
            }
            let jump_name = config.jump.as_deref().unwrap_or("hermite:1,0.5");
            let jump = LatticeCf::PmfBacked(parse_jump(jump_name)?);
            (
                format!("compound poisson (a={a}, A={big_a}, jump={jump_name})"),
                CasualRepresentation::compound_poisson(a, big_a, jump, n_max)?,
            )
        }
        other => return Err(usage(format!("--example {other} is not one of 1..4"))),
    };
    let report = verify_representation(&rep, grid_size, DEFAULT_TOLERANCE.max(1e-15));
    Ok(VerifyOutput { label, report })
}

/// Output of `nonunique`.
#[derive(Debug, Serialize)]
pub struct NonuniqueOutput {
    pub lambda: f64,
    pub gamma: f64,
    pub demo: NonuniquenessDemo,
}

impl NonuniqueOutput {
    pub fn passed(&self) -> bool {
        self.demo.via_self.verdict && self.demo.via_sqrt.verdict && self.demo.base_tv > 1e-3
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("representation,n,sup_error,normalizer_valid\n");
        for (name, rep) in [("self", &self.demo.via_self), ("sqrt", &self.demo.via_sqrt)] {
            for row in &rep.rows {
                s.push_str(&format!(
                    "{name},{},{},{}\n",
                    row.n,
                    format_real(row.sup_error),
                    row.normalizer_valid
                ));
            }
        }
        s
    }

    pub fn summary(&self) -> String {
        format!(
            "nonunique (lambda={}, gamma={}): self max error {:.3e}, sqrt max error {:.3e}, base TV {:.6} -> {}",
            self.lambda,
            self.gamma,
            self.demo.via_self.max_error,
            self.demo.via_sqrt.max_error,
            self.demo.base_tv,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Build and verify both representations of the positive discrete stable
/// law for `γ ∈ (0, 1/2)`.
pub fn cmd_nonunique(config: &RunConfig) -> Result<NonuniqueOutput, HarnessError> {
    let gamma = config
        .gamma
        .ok_or_else(|| usage("nonunique needs --gamma in (0, 1/2)"))?;
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(usage(format!("gamma = {gamma} must lie in (0, 1/2)")));
    }
    let lambda = config.lambda.unwrap_or(1.0);
    let n_max = config.n_max.unwrap_or(16).max(1);
    let grid_size = grid_of(config, DEFAULT_GRID)?;
    let demo = nonuniqueness_demo(lambda, gamma, n_max, grid_size, DEFAULT_TOLERANCE)?;
    Ok(NonuniqueOutput {
        lambda,
        gamma,
        demo,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub sup_cf_distance: f64,
    pub tv_distance: f64,
    pub n_times_tv: f64,
    /// Monte Carlo TV of a sampled row to the limit window, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo_tv: Option<f64>,
}

/// Exact (and optionally Monte Carlo) convergence study of
/// `𝒫^n(g_n(t)) → exp{λ𝒫′(1)(h(t)−1)}` along a doubling schedule.
#[derive(Debug, Serialize)]
pub struct ConvergenceReport {
    pub limit_law: String,
    pub lambda: f64,
    pub grid_size: usize,
    pub rows: Vec<ConvergenceRow>,
    pub distances_decreasing: bool,
    pub n_tv_bounded: bool,
    pub final_tv: f64,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.distances_decreasing && self.n_tv_bounded
    }

    pub fn to_csv(&self) -> String {
        let mc = self.rows.iter().any(|r| r.monte_carlo_tv.is_some());
        let mut s = if mc {
            String::from("n,sup_cf_distance,tv_distance,n_times_tv,monte_carlo_tv\n")
        } else {
            String::from("n,sup_cf_distance,tv_distance,n_times_tv\n")
        };
        for row in &self.rows {
            s.push_str(&format!(
                "{},{},{},{}",
                row.n,
                format_real(row.sup_cf_distance),
                format_real(row.tv_distance),
                format_real(row.n_times_tv)
            ));
            if mc {
                s.push(',');
                if let Some(tv) = row.monte_carlo_tv {
                    s.push_str(&format_real(tv));
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn summary(&self) -> String {
        let last = self.rows.last().expect("schedule is nonempty");
        format!(
            "converge to {}: {} rows, final n = {}, final TV {:.3e}, decreasing: {}, n*TV bounded: {} -> {}",
            self.limit_law,
            self.rows.len(),
            last.n,
            last.tv_distance,
            self.distances_decreasing,
            self.n_tv_bounded,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Run the limit-theorem study for a catalogued `(𝒫, h, λ)` triple.
pub fn cmd_converge(config: &RunConfig) -> Result<ConvergenceReport, HarnessError> {
    let lambda = config.lambda.unwrap_or(0.5);
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(usage(format!("lambda = {lambda} must lie in (0, 1)")));
    }
    let pgf = parse_pgf(config.pgf.as_deref().unwrap_or("one"))?;
    if !pgf.mean().is_finite() {
        return Err(usage("the counting law must have a finite mean"));
    }
    let jump_name = config.jump.as_deref().unwrap_or("one");
    let jump_window = parse_jump(jump_name)?;
    let jump_cf = LatticeCf::PmfBacked(jump_window.clone());
    let grid_size = grid_of(config, DEFAULT_GRID)?;
    let n_max = config.n_max.unwrap_or(256).max(2);

    let rate = lambda * pgf.mean();
    let limit = LatticeCf::compound_poisson(rate, jump_cf.clone())?;
    let limit_window = invert_to_pmf(&limit, grid_size)?;
    let base = SplitLatticePgf::closed(pgf.clone());
    let normalizers = NormalizerFamily::thinning(lambda, jump_cf)?;

    let mut rows = Vec::new();
    let mut n = 2u32;
    while n <= n_max {
        let g_n = normalizers.cf_at(n);
        let row_cf = {
            let base = base.clone();
            let g_n = g_n.clone();
            LatticeCf::from_fn(move |t| {
                casual_compose_pow(&base, &g_n, n, t)
                    .expect("thinning normalizer stays inside the unit disk")
            })
        };
        let sup = sup_cf_distance(&row_cf, &limit, grid_size);
        let tv = tv_distance(&invert_to_pmf(&row_cf, grid_size)?, &limit_window);
        let monte_carlo_tv = match config.samples {
            Some(samples) if samples > 0 => {
                let mut src = RandomSource::new(config.seed.unwrap_or(0));
                let values: Vec<i64> = (0..samples)
                    .map(|_| {
                        sample_triangular_row(
                            n,
                            lambda,
                            &pgf,
                            |s| sample_from_window(&jump_window, s),
                            &mut src,
                        )
                    })
                    .collect::<Result<_, _>>()?;
                let batch = SampleBatch::new("row", config.seed.unwrap_or(0), values);
                Some(tv_distance(
                    &empirical_pmf_folded(&batch, grid_size),
                    &limit_window,
                ))
            }
            _ => None,
        };
        rows.push(ConvergenceRow {
            n,
            sup_cf_distance: sup,
            tv_distance: tv,
            n_times_tv: n as f64 * tv,
            monte_carlo_tv,
        });
        n = n.saturating_mul(2);
    }

    let distances_decreasing = rows.windows(2).all(|w| {
        w[1].sup_cf_distance < w[0].sup_cf_distance && w[1].tv_distance < w[0].tv_distance
    });
    let reference = rows
        .iter()
        .find(|r| r.n == 16)
        .or(rows.last())
        .expect("schedule is nonempty");
    let max_ntv = rows.iter().map(|r| r.n_times_tv).fold(0.0, f64::max);
    let n_tv_bounded = max_ntv <= 2.0 * reference.n_times_tv;
    let final_tv = rows.last().expect("schedule is nonempty").tv_distance;

    Ok(ConvergenceReport {
        limit_law: format!("compound poisson (rate {rate}, jump {jump_name})"),
        lambda,
        grid_size,
        rows,
        distances_decreasing,
        n_tv_bounded,
        final_tv,
    })
}

/// Output of `invert`: a plain window, or the three-way table for the
/// two-sided-sqrt normalizer.
#[derive(Debug, Serialize)]
pub struct InvertOutput {
    pub label: String,
    pub window: PmfWindow,
    /// Closed-form masses from expanding the normalizer (two-sided-sqrt only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<Vec<f64>>,
    /// The tail-only expression extended to all k (two-sided-sqrt only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_formula: Option<Vec<f64>>,
}

impl InvertOutput {
    pub fn to_csv(&self) -> String {
        match (&self.closed_form, &self.tail_formula) {
            (Some(cf), Some(tf)) => {
                let mut s = String::from("k,mass,closed_form,tail_formula\n");
                for (j, (k, p)) in self.window.iter().enumerate() {
                    s.push_str(&format!(
                        "{k},{},{},{}\n",
                        format_real(p),
                        format_real(cf[j]),
                        format_real(tf[j])
                    ));
                }
                s
            }
            _ => {
                let mut s = String::from("k,mass\n");
                for (k, p) in self.window.iter() {
                    s.push_str(&format!("{k},{}\n", format_real(p)));
                }
                s
            }
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "invert {}: window [{}, {}), sum {:.12}, min mass {:.3e}, decay {:.3e}",
            self.label,
            self.window.k_min(),
            self.window.k_min() + self.window.len() as i64,
            self.window.sum(),
            self.window.min_mass(),
            self.window.decay_estimate()
        )
    }
}

/// Invert a selected law (or its normalizer, with `--normalizer`) to a
/// probability window.
pub fn cmd_invert(config: &RunConfig) -> Result<InvertOutput, HarnessError> {
    let example = config
        .example
        .ok_or_else(|| usage("invert needs --example 1|2|3|4"))?;
    let grid_size = grid_of(config, ORACLE_GRID)?;
    let n = config.n.unwrap_or(1).max(1);
    let want_normalizer = config.normalizer.unwrap_or(false);

    let lambda1 = config.lambda1.unwrap_or(1.0);
    let lambda2 = config.lambda2.unwrap_or(1.0);
    let a1 = config.a1.unwrap_or(1.0);
    let a2 = config.a2.unwrap_or(0.5);

    let (label, cf) = match (example, want_normalizer) {
        (1, false) => {
            let lambda = config.lambda.unwrap_or(1.0);
            let gamma = config.gamma.unwrap_or(0.5);
            (
                format!("symmetric discrete stable (lambda={lambda}, gamma={gamma})"),
                LatticeCf::symmetric_discrete_stable(lambda, gamma)?,
            )
        }
        (1, true) => {
            let gamma = config.gamma.unwrap_or(0.5);
            (
                format!("cosine-mixture normalizer (gamma={gamma}, n={n})"),
                NormalizerFamily::cosine_mixture(gamma)?.cf_at(n),
            )
        }
        (2, false) => {
            let alpha = config.alpha.unwrap_or(0.5);
            (
                format!("two-sided discrete stable (lambda1={lambda1}, lambda2={lambda2}, alpha={alpha})"),
                LatticeCf::two_sided_discrete_stable(lambda1, lambda2, alpha)?,
            )
        }
        (2, true) => {
            let lambda = match config.lambda {
                Some(l) => l,
                None => two_sided_sqrt_lambda_boundary(lambda1, lambda2, n)?,
            };
            let window = invert_to_pmf(
                &NormalizerFamily::two_sided_sqrt(lambda1, lambda2, lambda)?.cf_at(n),
                grid_size,
            )?;
            let closed: Result<Vec<f64>, ParamError> = window
                .iter()
                .map(|(k, _)| two_sided_sqrt_pmf(lambda1, lambda2, lambda, n, k))
                .collect();
            let tail: Result<Vec<f64>, ParamError> = window
                .iter()
                .map(|(k, _)| two_sided_sqrt_pmf_tail_formula(lambda1, lambda2, lambda, n, k))
                .collect();
            return Ok(InvertOutput {
                label: format!(
                    "two-sided-sqrt normalizer (lambda1={lambda1}, lambda2={lambda2}, lambda={lambda}, n={n})"
                ),
                window,
                closed_form: Some(closed?),
                tail_formula: Some(tail?),
            });
        }
        (3, false) => (
            format!("hermite (a1={a1}, a2={a2})"),
            LatticeCf::hermite(a1, a2)?,
        ),
        (3, true) => {
            let a = config.a.unwrap_or(2.0 * (a1 + a2));
            (
                format!("hermite-affine normalizer (a1={a1}, a2={a2}, a={a}, n={n})"),
                NormalizerFamily::hermite_affine(a1, a2, a)?.cf_at(n),
            )
        }
        (4, false) => {
            let a = config.a.unwrap_or(1.0);
            let jump_name = config.jump.as_deref().unwrap_or("hermite:1,0.5");
            (
                format!("compound poisson (a={a}, jump={jump_name})"),
                LatticeCf::compound_poisson(a, LatticeCf::PmfBacked(parse_jump(jump_name)?))?,
            )
        }
        (4, true) => {
            let a = config.a.unwrap_or(1.0);
            let big_a = config.big_a.unwrap_or(2.0 * a);
            let jump_name = config.jump.as_deref().unwrap_or("hermite:1,0.5");
            (
                format!("jump-mixture normalizer (a={a}, A={big_a}, jump={jump_name}, n={n})"),
                NormalizerFamily::jump_mixture(
                    a,
                    big_a,
                    LatticeCf::PmfBacked(parse_jump(jump_name)?),
                )?
                .cf_at(n),
            )
        }
        (other, _) => return Err(usage(format!("--example {other} is not one of 1..4"))),
    };
    let window = invert_to_pmf(&cf, grid_size)?;
    Ok(InvertOutput {
        label,
        window,
        closed_form: None,
        tail_formula: None,
    })
}

/// Output of `sample`: the batch plus its oracle summary.
#[derive(Debug, Serialize)]
pub struct SampleOutput {
    pub batch: SampleBatch,
    /// TV between the folded empirical window and the inversion oracle.
    pub oracle_tv: f64,
    pub oracle_grid: usize,
}

impl SampleOutput {
    pub fn summary(&self) -> String {
        format!(
            "sample {}: {} draws, seed {}, TV to inversion oracle {:.5}",
            self.batch.law,
            self.batch.len(),
            self.batch.seed,
            self.oracle_tv
        )
    }
}

/// Draw a batch from a selected law and summarize it against the inversion
/// oracle.
pub fn cmd_sample(config: &RunConfig) -> Result<SampleOutput, HarnessError> {
    let law = config
        .law
        .as_deref()
        .ok_or_else(|| usage("sample needs --law positive|compound|row"))?;
    let samples = config.samples.unwrap_or(100_000);
    if samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let seed = config.seed.unwrap_or(0);
    let mut src = RandomSource::new(seed);
    let grid_size = grid_of(config, ORACLE_GRID)?;

    let (descriptor, values, oracle_cf): (String, Vec<i64>, LatticeCf) = match law {
        "positive" => {
            let lambda = config.lambda.unwrap_or(1.0);
            let gamma = config.gamma.unwrap_or(0.5);
            let cf = LatticeCf::positive_discrete_stable(lambda, gamma)?;
            let values = (0..samples)
                .map(|_| sample_positive_discrete_stable(lambda, gamma, &mut src).map(|v| v as i64))
                .collect::<Result<_, _>>()?;
            (
                format!("positive discrete stable (lambda={lambda}, gamma={gamma})"),
                values,
                cf,
            )
        }
        "compound" => {
            let a = config.a.unwrap_or(1.5);
            let jump_name = config.jump.as_deref().unwrap_or("hermite:1,0.5");
            let jump = parse_jump(jump_name)?;
            let cf = LatticeCf::compound_poisson(a, LatticeCf::PmfBacked(jump.clone()))?;
            let values = (0..samples)
                .map(|_| sample_compound_poisson(a, |s| sample_from_window(&jump, s), &mut src))
                .collect::<Result<_, _>>()?;
            (
                format!("compound poisson (a={a}, jump={jump_name})"),
                values,
                cf,
            )
        }
        "row" => {
            let n = config.n.unwrap_or(64).max(1);
            let lambda = config.lambda.unwrap_or(0.5);
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(usage(format!("lambda = {lambda} must lie in (0, 1)")));
            }
            let pgf = parse_pgf(config.pgf.as_deref().unwrap_or("shifted-poisson:1"))?;
            let jump_name = config.jump.as_deref().unwrap_or("one");
            let jump = parse_jump(jump_name)?;
            let base = SplitLatticePgf::closed(pgf.clone());
            let g_n =
                NormalizerFamily::thinning(lambda, LatticeCf::PmfBacked(jump.clone()))?.cf_at(n);
            let cf = LatticeCf::from_fn(move |t| {
                casual_compose_pow(&base, &g_n, n, t)
                    .expect("thinning normalizer stays inside the unit disk")
            });
            let values = (0..samples)
                .map(|_| {
                    sample_triangular_row(
                        n,
                        lambda,
                        &pgf,
                        |s| sample_from_window(&jump, s),
                        &mut src,
                    )
                })
                .collect::<Result<_, _>>()?;
            (
                format!(
                    "triangular-array row (n={n}, lambda={lambda}, pgf={}, jump={jump_name})",
                    config.pgf.as_deref().unwrap_or("shifted-poisson:1")
                ),
                values,
                cf,
            )
        }
        other => {
            return Err(usage(format!(
                "unknown law '{other}' (choose positive, compound, row)"
            )))
        }
    };

    let batch = SampleBatch::new(descriptor, seed, values);
    let oracle = invert_to_pmf(&oracle_cf, grid_size)?;
    let oracle_tv = tv_distance(&empirical_pmf_folded(&batch, grid_size), &oracle);
    Ok(SampleOutput {
        batch,
        oracle_tv,
        oracle_grid: grid_size,
    })
}

/// Resolve an output path against [`OUT_DIR_ENV`] for relative paths.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) => Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

/// Write `csv` or pretty JSON to the resolved path.
pub fn write_output(
    path: &Path,
    format: OutputFormat,
    csv: &str,
    json: &impl Serialize,
) -> Result<PathBuf, HarnessError> {
    let full = resolve_out_path(path);
    if let Some(parent) = full.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    match format {
        OutputFormat::Csv => std::fs::write(&full, csv)?,
        OutputFormat::Json => {
            let mut body = serde_json::to_string_pretty(json)?;
            body.push('\n');
            std::fs::write(&full, body)?;
        }
    }
    Ok(full)
}

impl Pgf {
    /// Catalog label used in report descriptors.
    pub fn describe(&self) -> String {
        match self {
            Pgf::PositiveDiscreteStable { lambda, gamma } => {
                format!("positive-discrete-stable:{lambda},{gamma}")
            }
            Pgf::Poisson { rate } => format!("poisson:{rate}"),
            Pgf::Hermite { a1, a2 } => format!("hermite:{a1},{a2}"),
            Pgf::DegenerateOne => "one".to_string(),
            Pgf::ShiftedPoisson { mu } => format!("shifted-poisson:{mu}"),
            Pgf::ShiftedGeometric { p } => format!("shifted-geometric:{p}"),
        }
    }
}

/// The exact characteristic function of a triangular-array row:
/// `𝒫^n(g_n(t))` for the thinning normalizer with jump law `h`.
pub fn triangular_row_cf(
    n: u32,
    lambda: f64,
    pgf: &Pgf,
    jump: &PmfWindow,
) -> Result<LatticeCf, HarnessError> {
    let base = SplitLatticePgf::closed(pgf.clone());
    let g_n = NormalizerFamily::thinning(lambda, LatticeCf::PmfBacked(jump.clone()))?.cf_at(n);
    Ok(LatticeCf::from_fn(move |t| {
        casual_compose_pow(&base, &g_n, n, t)
            .expect("thinning normalizer stays inside the unit disk")
    }))
}
