//! Means and standard deviations of the three prime-count models, the
//! hypergeometric urn pmf, and the Riemann-conjecture deviation bound.
//!
//! Model 1 (draws with replacement, binomial): mean Li(x),
//! σ = √(Li(x) − Li²(x)/x). Model 2 (independent 1/ln n indicators):
//! σ₁ = √(Li(x) − Li₂(x)). The tuple model scales Li_k by the
//! singular-series constant: mean C·Li_k(x),
//! σ_J = √(C·Li_k(x) − C²·Li_{2k}(x)).

use crate::error::{Error, Result};
use crate::logint::{li, Tol};
use crate::singular::{singular_series, SingularConstant};
use crate::sieve::TuplePattern;

/// Quadrature tolerance behind the model statistics: tight enough that the
/// integer table columns are stable.
const INTERNAL_TOL: Tol = Tol::Rel(1e-10);
/// Tail tolerance for internally computed singular constants.
const CONSTANT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    BinomialModel1,
    CramerModel2,
    TupleModel,
}

/// Mean and standard deviation of a count-analog random variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelStats {
    pub x: f64,
    pub model: ModelKind,
    pub mean: f64,
    pub sigma: f64,
    pub pattern: Option<TuplePattern>,
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() || x < 3.0 {
        return Err(Error::Domain(format!(
            "model statistics require x >= 3, got {x}"
        )));
    }
    Ok(())
}

fn sigma_from_variance(variance: f64, what: &str, x: f64) -> Result<f64> {
    if variance <= 0.0 {
        return Err(Error::Domain(format!(
            "{what} variance is degenerate at x = {x}"
        )));
    }
    Ok(variance.sqrt())
}

/// Model 1 (with replacement): mean Li(x), σ = √(Li − Li²/x).
pub fn model1_stats(x: f64) -> Result<ModelStats> {
    check_x(x)?;
    let l = li(x, 1, INTERNAL_TOL)?.value;
    let sigma = sigma_from_variance(l - l * l / x, "model-1", x)?;
    Ok(ModelStats { x, model: ModelKind::BinomialModel1, mean: l, sigma, pattern: None })
}

/// Model 2 (Cramér): mean Li(x), σ₁ = √(Li − Li₂).
///
/// Li₂ exceeds Li just above x = 2; the variance only turns positive near
/// x ≈ 4.0, below which this reports a degenerate-variance domain error.
pub fn model2_stats(x: f64) -> Result<ModelStats> {
    check_x(x)?;
    let l = li(x, 1, INTERNAL_TOL)?.value;
    let l2 = li(x, 2, INTERNAL_TOL)?.value;
    let sigma = sigma_from_variance(l - l2, "model-2", x)?;
    Ok(ModelStats { x, model: ModelKind::CramerModel2, mean: l, sigma, pattern: None })
}

/// Tuple model for an admissible pattern; computes the singular constant
/// internally. Prefer [`tuple_stats_with_constant`] when evaluating several x
/// for one pattern.
pub fn tuple_stats(pattern: &TuplePattern, x: f64) -> Result<ModelStats> {
    let c = singular_series(pattern, CONSTANT_TOL)?;
    tuple_stats_with_constant(&c, x)
}

/// Tuple model with a precomputed singular constant.
pub fn tuple_stats_with_constant(c: &SingularConstant, x: f64) -> Result<ModelStats> {
    check_x(x)?;
    let k = c.pattern.k() as u32;
    let lik = li(x, k, INTERNAL_TOL)?.value;
    let li2k = li(x, 2 * k, INTERNAL_TOL)?.value;
    let mean = c.value * lik;
    let sigma = sigma_from_variance(mean - c.value * c.value * li2k, "tuple-model", x)?;
    Ok(ModelStats {
        x,
        model: ModelKind::TupleModel,
        mean,
        sigma,
        pattern: Some(c.pattern.clone()),
    })
}

/// σ² − σ₁² = Li₂(x) − Li²(x)/x, computed directly from the integrals to
/// avoid differencing the two near-equal variances.
pub fn variance_gap(x: f64) -> Result<f64> {
    check_x(x)?;
    let l = li(x, 1, INTERNAL_TOL)?.value;
    let l2 = li(x, 2, INTERNAL_TOL)?.value;
    Ok(l2 - l * l / x)
}

/// Conjectural maximum of |Li(x) − π(x)| under the Riemann hypothesis:
/// √x·ln(x)/(8π).
pub fn riemann_bound(x: f64) -> f64 {
    x.sqrt() * x.ln() / (8.0 * std::f64::consts::PI)
}

/// An urn with `m` balls, `m1` of them white, from which `n` are drawn.
///
/// `n > m` is allowed at construction so the with-replacement model can draw
/// more times than the urn holds; the without-replacement operations reject
/// it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrnSpec {
    m: u64,
    m1: u64,
    n: u64,
}

impl UrnSpec {
    pub fn new(m: u64, m1: u64, n: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("urn must contain at least one ball".into()));
        }
        if m1 > m {
            return Err(Error::Domain(format!(
                "white balls m1 = {m1} exceed urn size m = {m}"
            )));
        }
        if n == 0 {
            return Err(Error::Domain("draw count n must be at least 1".into()));
        }
        Ok(UrnSpec { m, m1, n })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn m1(&self) -> u64 {
        self.m1
    }

    pub fn m2(&self) -> u64 {
        self.m - self.m1
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Support of the without-replacement draw count:
    /// [max(0, n − m2), min(n, m1)].
    pub fn support(&self) -> (u64, u64) {
        (self.n.saturating_sub(self.m2()), self.n.min(self.m1))
    }
}

/// Kahan-summed ln C(top, k) as Σ ln((top − i)/(i + 1)).
///
/// Keeping every intermediate at the scale of single log-ratios (instead of
/// ln Γ terms of size M ln M) is what lets the pmf normalize to ~1e-13 even
/// for urns of 10⁶ balls.
fn ln_choose(top: u64, k: u64, sum: &mut f64, carry: &mut f64, sign: f64) {
    for i in 0..k {
        let term = sign * (((top - i) as f64) / ((i + 1) as f64)).ln();
        let y = term - *carry;
        let t = *sum + y;
        *carry = (t - *sum) - y;
        *sum = t;
    }
}

/// Exact hypergeometric pmf P(n₁ white) = C(M₁,n₁)·C(M₂,n₂)/C(M,n).
///
/// Impossible configurations (n₁ > M₁ or n₂ > M₂ or n₁ > n) have
/// probability 0 and are not errors.
pub fn hypergeometric_pmf(urn: &UrnSpec, n1: u64) -> Result<f64> {
    if urn.n > urn.m {
        return Err(Error::Domain(format!(
            "without-replacement draw n = {} exceeds urn size m = {}",
            urn.n, urn.m
        )));
    }
    if n1 > urn.n {
        return Ok(0.0);
    }
    let n2 = urn.n - n1;
    if n1 > urn.m1 || n2 > urn.m2() {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    let mut carry = 0.0;
    ln_choose(urn.m1, n1, &mut sum, &mut carry, 1.0);
    ln_choose(urn.m2(), n2, &mut sum, &mut carry, 1.0);
    ln_choose(urn.m, urn.n, &mut sum, &mut carry, -1.0);
    Ok(sum.exp())
}

/// Binomial pmf C(n,k)·p^k·(1−p)^{n−k}, same log-ratio evaluation.
pub fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    if k > n || !(0.0..=1.0).contains(&p) {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let mut sum = 0.0;
    let mut carry = 0.0;
    ln_choose(n, k, &mut sum, &mut carry, 1.0);
    (sum + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen high-precision references.
    const SIGMA_1E8: f64 = 2330.2742074417;
    const SIGMA1_1E8: f64 = 2329.9523897283;
    const GAP_1E6: f64 = 64.8486046388634;
    const GAP_1E8: f64 = 1499.74346771308;
    const GAP_1E9: f64 = 8649.77411263466;
    const BINOM_100_P_8: f64 = 0.145293040532863;
    const HYPER_1E6_8: f64 = 0.145300410229026;

    #[test]
    fn model1_matches_reference() {
        let s = model1_stats(1e8).unwrap();
        assert!((s.sigma - SIGMA_1E8).abs() < 1e-4, "{}", s.sigma);
        assert!((s.mean - 5_762_208.330284251).abs() < 1e-2);
        // mean lands within 1 of pi(1e8) + 754 (count-difference column)
        assert!((s.mean - (5_761_455.0 + 754.0)).abs() <= 1.0);
    }

    #[test]
    fn model2_matches_reference() {
        let s = model2_stats(1e8).unwrap();
        assert!((s.sigma - SIGMA1_1E8).abs() < 1e-4, "{}", s.sigma);
    }

    #[test]
    fn model2_sigma_below_model1_sigma() {
        for exp in [1u32, 2, 4, 6, 8] {
            let x = 10f64.powi(exp as i32).max(10.0);
            let s1 = model1_stats(x).unwrap();
            let s2 = model2_stats(x).unwrap();
            assert!(s2.sigma < s1.sigma, "x={x}");
            assert!(s1.sigma * s1.sigma < s1.mean, "x={x}");
        }
    }

    #[test]
    fn degenerate_small_x_is_domain_error() {
        assert!(matches!(model1_stats(2.5), Err(Error::Domain(_))));
        // Li2 > Li1 just above the lower limit: variance degenerate
        assert!(matches!(model2_stats(3.5), Err(Error::Domain(_))));
    }

    #[test]
    fn tuple_sigma_matches_reference() {
        // twins at 1e6: sigma_J = 90.393…, mean = C·Li_2 = 8248.03…
        let s = tuple_stats(&TuplePattern::twin(), 1e6).unwrap();
        assert!((s.sigma - 90.3930082).abs() < 1e-3, "{}", s.sigma);
        assert!((s.mean - 8248.02968983).abs() < 1e-2, "{}", s.mean);
    }

    #[test]
    fn variance_gap_matches_reference_and_both_routes() {
        for (x, expect) in [(1e6, GAP_1E6), (1e8, GAP_1E8), (1e9, GAP_1E9)] {
            let gap = variance_gap(x).unwrap();
            assert!(
                (gap - expect).abs() < expect * 1e-6,
                "gap({x}) = {gap} vs {expect}"
            );
            // same value through the sigma route, to coarser accuracy
            let s1 = model1_stats(x).unwrap().sigma;
            let s2 = model2_stats(x).unwrap().sigma;
            assert!((s1 * s1 - s2 * s2 - gap).abs() < 1e-3 * gap.max(1.0));
            assert!(gap > 0.0);
        }
    }

    #[test]
    fn riemann_bound_values() {
        // closed form at x = e²: e·2/(8π)
        let e2 = std::f64::consts::E * std::f64::consts::E;
        let expect = std::f64::consts::E * 2.0 / (8.0 * std::f64::consts::PI);
        assert!((riemann_bound(e2) - expect).abs() < 1e-14);
        // exact-π evaluation at 1e8 (reference tables use a 2-decimal π;
        // see the report module)
        assert!((riemann_bound(1e8) - 7329.35598879428).abs() < 1e-8);
    }

    #[test]
    fn riemann_bound_dominates_model_sigma() {
        for exp in 8..=12 {
            let x = 10f64.powi(exp);
            assert!(riemann_bound(x) > model1_stats(x).unwrap().sigma, "x=1e{exp}");
        }
    }

    #[test]
    fn urn_validation() {
        assert!(UrnSpec::new(0, 0, 1).is_err());
        assert!(UrnSpec::new(4, 5, 1).is_err());
        assert!(UrnSpec::new(4, 2, 0).is_err());
        // n > m allowed for the with-replacement model
        let urn = UrnSpec::new(2, 2, 3).unwrap();
        assert_eq!(urn.support(), (3, 2)); // empty without-replacement support
    }

    #[test]
    fn hypergeometric_small_exact() {
        let urn = UrnSpec::new(4, 2, 2).unwrap();
        assert!((hypergeometric_pmf(&urn, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((hypergeometric_pmf(&urn, 2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((hypergeometric_pmf(&urn, 0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn hypergeometric_impossible_configs_are_zero() {
        let urn = UrnSpec::new(10, 3, 8).unwrap();
        assert_eq!(hypergeometric_pmf(&urn, 4).unwrap(), 0.0); // n1 > m1
        assert_eq!(hypergeometric_pmf(&urn, 0).unwrap(), 0.0); // n2 > m2
        assert_eq!(hypergeometric_pmf(&urn, 9).unwrap(), 0.0); // n1 > n
        let over = UrnSpec::new(2, 2, 3).unwrap();
        assert!(hypergeometric_pmf(&over, 1).is_err()); // n > m
    }

    #[test]
    fn hypergeometric_sums_to_one_at_large_m() {
        for (m, m1, n) in [(4u64, 2u64, 2u64), (1_000, 100, 100), (1_000_000, 78_498, 100)] {
            let urn = UrnSpec::new(m, m1, n).unwrap();
            let mut sum = 0.0;
            for n1 in 0..=n {
                sum += hypergeometric_pmf(&urn, n1).unwrap();
            }
            assert!((sum - 1.0).abs() < 1e-12, "urn ({m},{m1},{n}): {sum}");
        }
    }

    #[test]
    fn hypergeometric_approaches_binomial() {
        let urn = UrnSpec::new(1_000_000, 78_498, 100).unwrap();
        let h = hypergeometric_pmf(&urn, 8).unwrap();
        assert!((h - HYPER_1E6_8).abs() < 1e-10);
        let b = binomial_pmf(100, 0.078498, 8);
        assert!((b - BINOM_100_P_8).abs() < 1e-10);
        assert!((h - b).abs() / b < 1e-3);
    }

    #[test]
    fn binomial_pmf_normalizes() {
        let sum: f64 = (0..=200).map(|k| binomial_pmf(200, 0.3, k)).sum();
        assert!((sum - 1.0).abs() < 1e-13);
        assert_eq!(binomial_pmf(10, 0.0, 0), 1.0);
        assert_eq!(binomial_pmf(10, 1.0, 10), 1.0);
    }

    #[test]
    fn tv_distance_to_binomial_decreases_with_m() {
        let tv = |m: u64| -> f64 {
            let m1 = m / 10;
            let urn = UrnSpec::new(m, m1, 100).unwrap();
            let p = m1 as f64 / m as f64;
            (0..=100)
                .map(|k| (hypergeometric_pmf(&urn, k).unwrap() - binomial_pmf(100, p, k)).abs())
                .sum::<f64>()
                / 2.0
        };
        let (a, b, c) = (tv(1_000), tv(10_000), tv(100_000));
        assert!(a > b && b > c, "{a} {b} {c}");
    }
}
