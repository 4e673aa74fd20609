//! Characteristic functions of integer-lattice laws.
//!
//! Everything here is a 2π-periodic complex function `t ↦ E e^{itX}` for an
//! integer-valued random variable `X`. The module provides the closed-form
//! families (positive/symmetric/two-sided discrete stable, Hermite, compound
//! Poisson), the normalizer sequences `g_n` used by the casual-composition
//! machinery, closed-form probability generating functions, and the
//! principal-branch complex power that all fractional exponents go through.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::invert::PmfWindow;

/// Invalid scalar parameter for a family or normalizer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("parameter {name} = {value} outside its domain ({requirement})")]
pub struct ParamError {
    pub name: &'static str,
    pub value: f64,
    pub requirement: &'static str,
}

fn require(
    ok: bool,
    name: &'static str,
    value: f64,
    requirement: &'static str,
) -> Result<(), ParamError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ParamError {
            name,
            value,
            requirement,
        })
    }
}

/// Principal-branch complex power `z^gamma = exp(gamma · Log z)`, with the
/// branch cut on the negative real axis and `0^gamma = 0`.
///
/// Every fractional power in this crate is applied to `1 − w` with `|w| ≤ 1`,
/// so the argument stays in the closed right half-plane and never crosses the
/// cut.
pub fn principal_power(z: Complex64, gamma: f64) -> Complex64 {
    debug_assert!(gamma > 0.0 && gamma <= 2.0);
    if z == Complex64::ZERO {
        return Complex64::ZERO;
    }
    (z.ln() * gamma).exp()
}

/// `1 − e^{it}` evaluated as `2 sin(t/2) (sin(t/2) − i cos(t/2))`.
///
/// The direct form loses all relative accuracy near `t = 0` where the value
/// underflows to the rounding floor; the half-angle form keeps full relative
/// precision there, which the 1e-12 representation identities rely on.
pub fn one_minus_exp_it(t: f64) -> Complex64 {
    let (s, c) = (0.5 * t).sin_cos();
    Complex64::new(2.0 * s * s, -2.0 * s * c)
}

/// `1 − cos t` as `2 sin²(t/2)`, exact in relative terms near `t = 0`.
pub fn one_minus_cos(t: f64) -> f64 {
    let s = (0.5 * t).sin();
    2.0 * s * s
}

/// Uniform grid of `n` points on `[0, 2π)`.
pub fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |l| TAU * l as f64 / n as f64)
}

/// A characteristic function of an integer-valued random variable.
///
/// Values satisfy `eval(0) = 1`, `|eval(t)| ≤ 1`, Hermitian symmetry
/// `eval(−t) = conj(eval(t))` and 2π-periodicity, all up to rounding.
#[derive(Clone)]
pub enum LatticeCf {
    /// `exp{−λ (1 − e^{it})^γ}`, supported on the nonnegative integers.
    PositiveDiscreteStable { lambda: f64, gamma: f64 },
    /// `exp{−λ (1 − cos t)^γ}`, a real, even function of `t`.
    SymmetricDiscreteStable { lambda: f64, gamma: f64 },
    /// `exp{−λ₁ (1 − e^{it})^α − λ₂ (1 − e^{−it})^α}`.
    TwoSidedDiscreteStable {
        lambda1: f64,
        lambda2: f64,
        alpha: f64,
    },
    /// `exp{a₁ (e^{it} − 1) + a₂ (e^{2it} − 1)}`.
    Hermite { a1: f64, a2: f64 },
    /// `exp{rate (h(t) − 1)}` for a jump law with characteristic function `h`.
    CompoundPoisson { rate: f64, jump: Box<LatticeCf> },
    /// A member `g_n` of one of the normalizer sequences.
    Normalizer(Normalizer),
    /// Finite window of probabilities; `eval(t) = Σ_k p_k e^{ikt}`.
    PmfBacked(PmfWindow),
    /// Arbitrary callable, for ad-hoc constructions.
    Callable(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for LatticeCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PositiveDiscreteStable { lambda, gamma } => f
                .debug_struct("PositiveDiscreteStable")
                .field("lambda", lambda)
                .field("gamma", gamma)
                .finish(),
            Self::SymmetricDiscreteStable { lambda, gamma } => f
                .debug_struct("SymmetricDiscreteStable")
                .field("lambda", lambda)
                .field("gamma", gamma)
                .finish(),
            Self::TwoSidedDiscreteStable {
                lambda1,
                lambda2,
                alpha,
            } => f
                .debug_struct("TwoSidedDiscreteStable")
                .field("lambda1", lambda1)
                .field("lambda2", lambda2)
                .field("alpha", alpha)
                .finish(),
            Self::Hermite { a1, a2 } => f
                .debug_struct("Hermite")
                .field("a1", a1)
                .field("a2", a2)
                .finish(),
            Self::CompoundPoisson { rate, jump } => f
                .debug_struct("CompoundPoisson")
                .field("rate", rate)
                .field("jump", jump)
                .finish(),
            Self::Normalizer(n) => f.debug_tuple("Normalizer").field(n).finish(),
            Self::PmfBacked(w) => f
                .debug_struct("PmfBacked")
                .field("k_min", &w.k_min())
                .field("len", &w.len())
                .finish(),
            Self::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

impl LatticeCf {
    pub fn positive_discrete_stable(lambda: f64, gamma: f64) -> Result<Self, ParamError> {
        require(lambda > 0.0, "lambda", lambda, "lambda > 0")?;
        require(
            gamma > 0.0 && gamma <= 1.0,
            "gamma",
            gamma,
            "gamma in (0, 1]",
        )?;
        Ok(Self::PositiveDiscreteStable { lambda, gamma })
    }

    pub fn symmetric_discrete_stable(lambda: f64, gamma: f64) -> Result<Self, ParamError> {
        require(lambda > 0.0, "lambda", lambda, "lambda > 0")?;
        require(
            gamma > 0.0 && gamma <= 1.0,
            "gamma",
            gamma,
            "gamma in (0, 1]",
        )?;
        Ok(Self::SymmetricDiscreteStable { lambda, gamma })
    }

    pub fn two_sided_discrete_stable(
        lambda1: f64,
        lambda2: f64,
        alpha: f64,
    ) -> Result<Self, ParamError> {
        require(lambda1 > 0.0, "lambda1", lambda1, "lambda1 > 0")?;
        require(lambda2 > 0.0, "lambda2", lambda2, "lambda2 > 0")?;
        require(
            alpha > 0.0 && alpha <= 1.0,
            "alpha",
            alpha,
            "alpha in (0, 1]",
        )?;
        Ok(Self::TwoSidedDiscreteStable {
            lambda1,
            lambda2,
            alpha,
        })
    }

    pub fn hermite(a1: f64, a2: f64) -> Result<Self, ParamError> {
        require(a1 >= 0.0, "a1", a1, "a1 >= 0")?;
        require(a2 >= 0.0, "a2", a2, "a2 >= 0")?;
        require(a1 + a2 > 0.0, "a1 + a2", a1 + a2, "a1 + a2 > 0")?;
        Ok(Self::Hermite { a1, a2 })
    }

    /// Poisson(rate), i.e. the positive discrete stable family at `γ = 1`.
    pub fn poisson(rate: f64) -> Result<Self, ParamError> {
        Self::positive_discrete_stable(rate, 1.0)
    }

    pub fn compound_poisson(rate: f64, jump: LatticeCf) -> Result<Self, ParamError> {
        require(rate > 0.0, "a", rate, "a > 0")?;
        Ok(Self::CompoundPoisson {
            rate,
            jump: Box::new(jump),
        })
    }

    /// Point mass at the integer `k`, `eval(t) = e^{ikt}`.
    pub fn degenerate(k: i64) -> Self {
        Self::PmfBacked(PmfWindow::from_masses(k, vec![1.0]))
    }

    pub fn from_fn(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::Callable(Arc::new(f))
    }

    /// Characteristic function value at `t`.
    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Self::PositiveDiscreteStable { lambda, gamma } => {
                (-lambda * principal_power(one_minus_exp_it(t), *gamma)).exp()
            }
            Self::SymmetricDiscreteStable { lambda, gamma } => {
                Complex64::new((-lambda * one_minus_cos(t).powf(*gamma)).exp(), 0.0)
            }
            Self::TwoSidedDiscreteStable {
                lambda1,
                lambda2,
                alpha,
            } => {
                let d = one_minus_exp_it(t);
                (-lambda1 * principal_power(d, *alpha)
                    - lambda2 * principal_power(d.conj(), *alpha))
                .exp()
            }
            Self::Hermite { a1, a2 } => {
                (-a1 * one_minus_exp_it(t) - a2 * one_minus_exp_it(2.0 * t)).exp()
            }
            Self::CompoundPoisson { rate, jump } => (-rate * jump.deficit(t)).exp(),
            Self::Normalizer(g) => Complex64::ONE - g.deficit(t),
            Self::PmfBacked(w) => w
                .iter()
                .map(|(k, p)| Complex64::from_polar(1.0, k as f64 * t) * p)
                .sum(),
            Self::Callable(f) => f(t),
        }
    }

    /// `1 − eval(t)`, computed without the cancellation that the literal
    /// subtraction suffers near `t = 0`. Exact forms are supplied for the
    /// variants that appear inside normalizer mixtures.
    pub fn deficit(&self, t: f64) -> Complex64 {
        match self {
            Self::PmfBacked(w) => w
                .iter()
                .map(|(k, p)| one_minus_exp_it(k as f64 * t) * p)
                .sum(),
            Self::Normalizer(g) => g.deficit(t),
            _ => Complex64::ONE - self.eval(t),
        }
    }
}

/// One member `g_n` of a normalizer sequence.
#[derive(Debug, Clone)]
pub struct Normalizer {
    pub family: NormalizerFamily,
    pub n: u32,
}

impl Normalizer {
    /// `1 − g_n(t)` in cancellation-free closed form.
    pub fn deficit(&self, t: f64) -> Complex64 {
        self.family.deficit(self.n, t)
    }
}

/// The normalizer sequences `n ↦ g_n` that drive the casual representations.
///
/// Each variant is one construction; `deficit(n, t)` returns `1 − g_n(t)`.
#[derive(Debug, Clone)]
pub enum NormalizerFamily {
    /// `g_n(t) = (1 − n^{−1/γ}) + n^{−1/γ} cos t`.
    CosineMixture { gamma: f64 },
    /// `g_n(t) = 1 − (1/n²) ((λ₁/λ)√(1−e^{it}) + (λ₂/λ)√(1−e^{−it}))²`.
    TwoSidedSqrt {
        lambda1: f64,
        lambda2: f64,
        lambda: f64,
    },
    /// `g_n(t) = 1 + (a₁(e^{it}−1) + a₂(e^{2it}−1)) / (a n)`.
    HermiteAffine { a1: f64, a2: f64, a: f64 },
    /// `g_n(t) = (1 − a/(nA)) + (a/(nA)) h(t)`.
    JumpMixture {
        a: f64,
        big_a: f64,
        jump: Box<LatticeCf>,
    },
    /// `g_n(t) = (1 − n^{−1/γ}) + n^{−1/γ} e^{it}`.
    BernoulliMixture { gamma: f64 },
    /// `g_n(t) = 1 − n^{−1/(2γ)} (1 − e^{it})^{1/2}`.
    SibuyaMixture { gamma: f64 },
    /// `g_n(t) = (1 − λ/n) + (λ/n) h(t)`, the triangular-array form.
    Thinning { lambda: f64, jump: Box<LatticeCf> },
}

impl NormalizerFamily {
    pub fn cosine_mixture(gamma: f64) -> Result<Self, ParamError> {
        require(
            gamma > 0.0 && gamma <= 1.0,
            "gamma",
            gamma,
            "gamma in (0, 1]",
        )?;
        Ok(Self::CosineMixture { gamma })
    }

    pub fn two_sided_sqrt(lambda1: f64, lambda2: f64, lambda: f64) -> Result<Self, ParamError> {
        require(lambda1 > 0.0, "lambda1", lambda1, "lambda1 > 0")?;
        require(lambda2 > 0.0, "lambda2", lambda2, "lambda2 > 0")?;
        require(lambda > 0.0, "lambda", lambda, "lambda > 0")?;
        Ok(Self::TwoSidedSqrt {
            lambda1,
            lambda2,
            lambda,
        })
    }

    pub fn hermite_affine(a1: f64, a2: f64, a: f64) -> Result<Self, ParamError> {
        require(a1 >= 0.0, "a1", a1, "a1 >= 0")?;
        require(a2 >= 0.0, "a2", a2, "a2 >= 0")?;
        require(a1 + a2 > 0.0, "a1 + a2", a1 + a2, "a1 + a2 > 0")?;
        require(a > 0.0, "a", a, "a > 0")?;
        Ok(Self::HermiteAffine { a1, a2, a })
    }

    pub fn jump_mixture(a: f64, big_a: f64, jump: LatticeCf) -> Result<Self, ParamError> {
        require(a > 0.0, "a", a, "a > 0")?;
        require(big_a >= a, "A", big_a, "A >= a")?;
        Ok(Self::JumpMixture {
            a,
            big_a,
            jump: Box::new(jump),
        })
    }

    pub fn bernoulli_mixture(gamma: f64) -> Result<Self, ParamError> {
        require(
            gamma > 0.0 && gamma <= 1.0,
            "gamma",
            gamma,
            "gamma in (0, 1]",
        )?;
        Ok(Self::BernoulliMixture { gamma })
    }

    pub fn sibuya_mixture(gamma: f64) -> Result<Self, ParamError> {
        require(
            gamma > 0.0 && gamma <= 0.5,
            "gamma",
            gamma,
            "gamma in (0, 1/2]",
        )?;
        Ok(Self::SibuyaMixture { gamma })
    }

    pub fn thinning(lambda: f64, jump: LatticeCf) -> Result<Self, ParamError> {
        require(
            lambda > 0.0 && lambda < 1.0,
            "lambda",
            lambda,
            "lambda in (0, 1)",
        )?;
        Ok(Self::Thinning {
            lambda,
            jump: Box::new(jump),
        })
    }

    /// The member `g_n` as a [`LatticeCf`]. `n` must be ≥ 1.
    pub fn cf_at(&self, n: u32) -> LatticeCf {
        assert!(n >= 1, "normalizer index n must be >= 1");
        LatticeCf::Normalizer(Normalizer {
            family: self.clone(),
            n,
        })
    }

    /// `1 − g_n(t)` in closed form.
    pub fn deficit(&self, n: u32, t: f64) -> Complex64 {
        let nf = f64::from(n);
        match self {
            Self::CosineMixture { gamma } => {
                let c = nf.powf(-1.0 / gamma);
                Complex64::new(c * one_minus_cos(t), 0.0)
            }
            Self::TwoSidedSqrt {
                lambda1,
                lambda2,
                lambda,
            } => {
                let s = one_minus_exp_it(t).sqrt();
                let w = s * (lambda1 / lambda) + s.conj() * (lambda2 / lambda);
                w * w / (nf * nf)
            }
            Self::HermiteAffine { a1, a2, a } => {
                (one_minus_exp_it(t) * *a1 + one_minus_exp_it(2.0 * t) * *a2) / (a * nf)
            }
            Self::JumpMixture { a, big_a, jump } => jump.deficit(t) * (a / (nf * big_a)),
            Self::BernoulliMixture { gamma } => one_minus_exp_it(t) * nf.powf(-1.0 / gamma),
            Self::SibuyaMixture { gamma } => {
                one_minus_exp_it(t).sqrt() * nf.powf(-1.0 / (2.0 * gamma))
            }
            Self::Thinning { lambda, jump } => jump.deficit(t) * (lambda / nf),
        }
    }
}

/// Closed-form probability generating functions `𝒫(z) = E z^N` on `|z| ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Pgf {
    /// `exp{−λ (1 − z)^γ}`, the generating function behind the positive
    /// discrete stable characteristic function.
    PositiveDiscreteStable { lambda: f64, gamma: f64 },
    /// `exp{rate (z − 1)}`.
    Poisson { rate: f64 },
    /// `exp{a₁ (z − 1) + a₂ (z² − 1)}`.
    Hermite { a1: f64, a2: f64 },
    /// `𝒫(z) = z`, the law of the constant 1.
    DegenerateOne,
    /// `z e^{μ(z−1)}`: one plus a Poisson(μ) count.
    ShiftedPoisson { mu: f64 },
    /// `p z / (1 − (1−p) z)`: one plus a geometric(p) count.
    ShiftedGeometric { p: f64 },
}

impl Pgf {
    pub fn positive_discrete_stable(lambda: f64, gamma: f64) -> Result<Self, ParamError> {
        require(lambda > 0.0, "lambda", lambda, "lambda > 0")?;
        require(
            gamma > 0.0 && gamma <= 1.0,
            "gamma",
            gamma,
            "gamma in (0, 1]",
        )?;
        Ok(Self::PositiveDiscreteStable { lambda, gamma })
    }

    pub fn poisson(rate: f64) -> Result<Self, ParamError> {
        require(rate > 0.0, "rate", rate, "rate > 0")?;
        Ok(Self::Poisson { rate })
    }

    pub fn hermite(a1: f64, a2: f64) -> Result<Self, ParamError> {
        require(a1 >= 0.0, "a1", a1, "a1 >= 0")?;
        require(a2 >= 0.0, "a2", a2, "a2 >= 0")?;
        require(a1 + a2 > 0.0, "a1 + a2", a1 + a2, "a1 + a2 > 0")?;
        Ok(Self::Hermite { a1, a2 })
    }

    pub fn shifted_poisson(mu: f64) -> Result<Self, ParamError> {
        require(mu > 0.0, "mu", mu, "mu > 0")?;
        Ok(Self::ShiftedPoisson { mu })
    }

    pub fn shifted_geometric(p: f64) -> Result<Self, ParamError> {
        require(p > 0.0 && p < 1.0, "p", p, "p in (0, 1)")?;
        Ok(Self::ShiftedGeometric { p })
    }

    /// Evaluate at `z` in the closed unit disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, ParamError> {
        if z.norm() > 1.0 + 1e-9 {
            return Err(ParamError {
                name: "|z|",
                value: z.norm(),
                requirement: "|z| <= 1 (up to rounding)",
            });
        }
        Ok(self.eval_one_minus(Complex64::ONE - z))
    }

    /// Evaluate `𝒫(1 − q)` from the deficit `q = 1 − z`.
    ///
    /// Each arm is written so that no `1 − z` subtraction happens after the
    /// caller has already formed `q` exactly; this is what keeps the
    /// composition identities at the 1e-12 level.
    pub fn eval_one_minus(&self, q: Complex64) -> Complex64 {
        match self {
            Self::PositiveDiscreteStable { lambda, gamma } => {
                (-lambda * principal_power(q, *gamma)).exp()
            }
            Self::Poisson { rate } => (-rate * q).exp(),
            Self::Hermite { a1, a2 } => {
                // z² − 1 = −q (2 − q)
                (-a1 * q - a2 * q * (Complex64::new(2.0, 0.0) - q)).exp()
            }
            Self::DegenerateOne => Complex64::ONE - q,
            Self::ShiftedPoisson { mu } => (Complex64::ONE - q) * (-mu * q).exp(),
            Self::ShiftedGeometric { p } => (Complex64::ONE - q) * *p / (q * (1.0 - p) + p),
        }
    }

    /// `𝒫′(1)`, the mean of the counting law (infinite for the heavy-tailed
    /// stable case with `γ < 1`).
    pub fn mean(&self) -> f64 {
        match self {
            Self::PositiveDiscreteStable { lambda, gamma } => {
                if *gamma < 1.0 {
                    f64::INFINITY
                } else {
                    *lambda
                }
            }
            Self::Poisson { rate } => *rate,
            Self::Hermite { a1, a2 } => a1 + 2.0 * a2,
            Self::DegenerateOne => 1.0,
            Self::ShiftedPoisson { mu } => 1.0 + mu,
            Self::ShiftedGeometric { p } => 1.0 / p,
        }
    }
}
