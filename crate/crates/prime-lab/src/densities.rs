//! Closed-form densities for the transformed random variables derived from
//! the count models: the count analogs X₁ (plain normal) and X₂ (normal
//! truncated above at its mean, the regime below the Skewes number), the
//! density analog Y = X₂/x, the average-gap analog Z = 1/Y, and the tuple
//! counterparts J, G = J/x, H = 1/G.
//!
//! Every kind is parameterized by the underlying count mean and deviation
//! (a, σ) or (M_J, σ_J); the scaled and reciprocal kinds derive their
//! location and scale from those, e.g. b = a/x, scale = σ/x, c = x/a.

use crate::error::{Error, Result};
use crate::models::{self, ModelKind, ModelStats};
use crate::sieve::TuplePattern;
use crate::singular::SingularConstant;

/// log₁₀ of the first π(x) > Li(x) crossing (Skewes regime boundary),
/// 1.397·10³¹⁶. The value itself overflows f64, so it is carried as a
/// logarithm; every representable x sits below it, which is why the
/// truncated count kind is the default for gap derivations.
pub const SKEWES_LOG10: f64 = 316.145196406114;

/// True for every finite x representable in f64; kept as an explicit guard
/// so the regime assumption is visible at call sites.
pub fn below_skewes(x: f64) -> bool {
    x.is_finite() && x.log10() < SKEWES_LOG10
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    /// X₁: N(a, σ), the count analog with no truncation (x ≥ x₀ regime).
    CountNormal,
    /// X₂: density 2·φ((t−a)/σ)/σ for t ≤ a, 0 above (x < x₀ regime).
    CountTruncated,
    /// Y = X₂/x: truncated normal with b = a/x, scale = σ/x.
    DensityY,
    /// Z = 1/Y: average prime-gap analog, supported on [c, ∞), c = x/a.
    GapZ,
    /// J: N(M_J, σ_J), the tuple-count analog.
    TupleCountJ,
    /// G = J/x: tuple density analog.
    TupleDensityG,
    /// H = 1/G: average tuple-gap analog, supported on (0, ∞).
    TupleGapH,
}

impl DensityKind {
    pub fn is_tuple(self) -> bool {
        matches!(
            self,
            DensityKind::TupleCountJ | DensityKind::TupleDensityG | DensityKind::TupleGapH
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            DensityKind::CountNormal => "count-normal",
            DensityKind::CountTruncated => "count-truncated",
            DensityKind::DensityY => "density-y",
            DensityKind::GapZ => "gap-z",
            DensityKind::TupleCountJ => "tuple-count-j",
            DensityKind::TupleDensityG => "tuple-density-g",
            DensityKind::TupleGapH => "tuple-gap-h",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "count-normal" => DensityKind::CountNormal,
            "count-truncated" => DensityKind::CountTruncated,
            "density-y" => DensityKind::DensityY,
            "gap-z" => DensityKind::GapZ,
            "tuple-count-j" => DensityKind::TupleCountJ,
            "tuple-density-g" => DensityKind::TupleDensityG,
            "tuple-gap-h" => DensityKind::TupleGapH,
            other => {
                return Err(Error::Parse(format!(
                    "unknown density kind {other:?}; expected one of count-normal, \
                     count-truncated, density-y, gap-z, tuple-count-j, tuple-density-g, \
                     tuple-gap-h"
                )))
            }
        })
    }
}

/// Standard normal density and CDF; the erfc form stays accurate in the
/// far tails where Φ(z) underflows a naive erf expression.
fn phi(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// A closed-form density for one transformed variable.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDensity {
    kind: DensityKind,
    x: f64,
    count_mean: f64,
    count_sigma: f64,
}

impl GapDensity {
    /// Prime-count kinds, from model-1 statistics at x.
    pub fn for_primes(kind: DensityKind, x: f64) -> Result<Self> {
        if kind.is_tuple() {
            return Err(Error::Domain(format!(
                "kind {} needs a tuple pattern",
                kind.name()
            )));
        }
        Self::from_stats(kind, &models::model1_stats(x)?)
    }

    /// Tuple kinds for an admissible pattern.
    pub fn for_tuples(kind: DensityKind, pattern: &TuplePattern, x: f64) -> Result<Self> {
        if !kind.is_tuple() {
            return Err(Error::Domain(format!(
                "kind {} does not take a pattern",
                kind.name()
            )));
        }
        Self::from_stats(kind, &models::tuple_stats(pattern, x)?)
    }

    /// Tuple kinds with a precomputed singular constant.
    pub fn for_tuples_with_constant(
        kind: DensityKind,
        c: &SingularConstant,
        x: f64,
    ) -> Result<Self> {
        if !kind.is_tuple() {
            return Err(Error::Domain(format!(
                "kind {} does not take a pattern",
                kind.name()
            )));
        }
        Self::from_stats(kind, &models::tuple_stats_with_constant(c, x)?)
    }

    /// Build directly from count statistics; the stats' model must match the
    /// kind's family.
    pub fn from_stats(kind: DensityKind, stats: &ModelStats) -> Result<Self> {
        let tuple_stats = stats.model == ModelKind::TupleModel;
        if kind.is_tuple() != tuple_stats {
            return Err(Error::Domain(format!(
                "kind {} is incompatible with {:?} statistics",
                kind.name(),
                stats.model
            )));
        }
        if !(stats.mean > 0.0 && stats.sigma > 0.0) {
            return Err(Error::Domain("count statistics must be positive".into()));
        }
        Ok(GapDensity {
            kind,
            x: stats.x,
            count_mean: stats.mean,
            count_sigma: stats.sigma,
        })
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Location parameter: a or M_J for count kinds, b = a/x or M_G for the
    /// scaled kinds, c = x/a or M_H for the reciprocal kinds.
    pub fn location(&self) -> f64 {
        match self.kind {
            DensityKind::CountNormal | DensityKind::CountTruncated | DensityKind::TupleCountJ => {
                self.count_mean
            }
            DensityKind::DensityY | DensityKind::TupleDensityG => self.count_mean / self.x,
            DensityKind::GapZ | DensityKind::TupleGapH => self.x / self.count_mean,
        }
    }

    /// Scale parameter: σ-like for the count kinds, σ/x for the scaled and
    /// reciprocal kinds.
    pub fn scale(&self) -> f64 {
        match self.kind {
            DensityKind::CountNormal | DensityKind::CountTruncated | DensityKind::TupleCountJ => {
                self.count_sigma
            }
            _ => self.count_sigma / self.x,
        }
    }

    /// Support interval (closed at finite truncation boundaries). The tuple
    /// count and density kinds are plain normals, untruncated.
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            DensityKind::CountNormal | DensityKind::TupleCountJ | DensityKind::TupleDensityG => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            DensityKind::CountTruncated | DensityKind::DensityY => {
                (f64::NEG_INFINITY, self.location())
            }
            DensityKind::GapZ => (self.location(), f64::INFINITY),
            DensityKind::TupleGapH => (0.0, f64::INFINITY),
        }
    }

    /// Density at t; total function, zero outside the support.
    pub fn pdf(&self, t: f64) -> f64 {
        let x = self.x;
        match self.kind {
            DensityKind::CountNormal | DensityKind::TupleCountJ => {
                let (m, s) = (self.count_mean, self.count_sigma);
                phi((t - m) / s) / s
            }
            DensityKind::CountTruncated => {
                let (m, s) = (self.count_mean, self.count_sigma);
                if t <= m {
                    2.0 * phi((t - m) / s) / s
                } else {
                    0.0
                }
            }
            DensityKind::DensityY => {
                let (b, s) = (self.count_mean / x, self.count_sigma / x);
                if t <= b {
                    2.0 * phi((t - b) / s) / s
                } else {
                    0.0
                }
            }
            DensityKind::TupleDensityG => {
                let (g, s) = (self.count_mean / x, self.count_sigma / x);
                phi((t - g) / s) / s
            }
            DensityKind::GapZ => {
                let (b, s) = (self.count_mean / x, self.count_sigma / x);
                let c = x / self.count_mean;
                if t >= c {
                    2.0 * phi((1.0 / t - b) / s) / (s * t * t)
                } else {
                    0.0
                }
            }
            DensityKind::TupleGapH => {
                let (g, s) = (self.count_mean / x, self.count_sigma / x);
                if t > 0.0 {
                    phi((1.0 / t - g) / s) / (s * t * t)
                } else {
                    0.0
                }
            }
        }
    }

    /// Distribution function; error-function based, with cdf(−∞) = 0 and
    /// cdf(+∞) = 1 up to the negligible truncated mass.
    pub fn cdf(&self, t: f64) -> f64 {
        let x = self.x;
        match self.kind {
            DensityKind::CountNormal | DensityKind::TupleCountJ => {
                std_normal_cdf((t - self.count_mean) / self.count_sigma)
            }
            DensityKind::CountTruncated => {
                let (m, s) = (self.count_mean, self.count_sigma);
                if t > m {
                    1.0
                } else {
                    2.0 * std_normal_cdf((t - m) / s)
                }
            }
            DensityKind::DensityY => {
                let (b, s) = (self.count_mean / x, self.count_sigma / x);
                if t > b {
                    1.0
                } else {
                    2.0 * std_normal_cdf((t - b) / s)
                }
            }
            DensityKind::TupleDensityG => {
                let (g, s) = (self.count_mean / x, self.count_sigma / x);
                std_normal_cdf((t - g) / s)
            }
            DensityKind::GapZ => {
                // P(Z ≤ t) = P(Y ≥ 1/t) = 1 − 2Φ((1/t − b)/scale)
                let (b, s) = (self.count_mean / x, self.count_sigma / x);
                let c = x / self.count_mean;
                if t < c {
                    0.0
                } else {
                    1.0 - 2.0 * std_normal_cdf((1.0 / t - b) / s)
                }
            }
            DensityKind::TupleGapH => {
                let (g, s) = (self.count_mean / x, self.count_sigma / x);
                if t <= 0.0 {
                    0.0
                } else {
                    1.0 - std_normal_cdf((1.0 / t - g) / s)
                }
            }
        }
    }

    /// Maximum of the density: the mean for the normal kinds, the truncation
    /// boundary for the truncated kinds, c = x/a for Z, and M_H = x/M_J
    /// for H.
    pub fn mode(&self) -> f64 {
        match self.kind {
            DensityKind::CountNormal
            | DensityKind::CountTruncated
            | DensityKind::TupleCountJ => self.count_mean,
            DensityKind::DensityY | DensityKind::TupleDensityG => self.count_mean / self.x,
            DensityKind::GapZ | DensityKind::TupleGapH => self.x / self.count_mean,
        }
    }

    /// Probability that the gap variable lands in the image of the count
    /// variable's ±s·σ interval, i.e. on
    /// [x/(mean + s·σ), x/(mean − s·σ)]. Probability is preserved by the
    /// transform, so this equals 2Φ(s) − 1.
    pub fn interval_probability(&self, s: f64) -> Result<f64> {
        if !matches!(self.kind, DensityKind::GapZ | DensityKind::TupleGapH) {
            return Err(Error::Domain(format!(
                "interval probability applies to the gap kinds, not {}",
                self.kind.name()
            )));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Domain(format!("s must be positive, got {s}")));
        }
        let spread = s * self.count_sigma;
        if spread >= self.count_mean {
            return Err(Error::DegenerateInterval(format!(
                "s·σ = {spread} reaches the count mean {}",
                self.count_mean
            )));
        }
        let t_lo = self.x / (self.count_mean + spread);
        let t_hi = self.x / (self.count_mean - spread);
        Ok(self.cdf(t_hi) - self.cdf(t_lo))
    }

    /// Scale of the density analogs Y and G; tends to 0 as x grows, which is
    /// the convergence-in-probability statement for the average density.
    pub fn convergence_scale(&self) -> Result<f64> {
        match self.kind {
            DensityKind::DensityY | DensityKind::TupleDensityG => Ok(self.count_sigma / self.x),
            _ => Err(Error::Domain(format!(
                "convergence scale applies to the density kinds, not {}",
                self.kind.name()
            ))),
        }
    }
}
