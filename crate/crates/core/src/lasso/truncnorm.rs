//! Normal distributions truncated to an interval or to its complement.
//!
//! Every probability is formed as a ratio of log-space tail masses, so the
//! CDF stays accurate when the retained region sits many standard deviations
//! from the mean.

use crate::error::{Error, Result};
use crate::normal::{log_add_exp, log_normal_cdf, log_normal_interval, log_normal_sf};

/// Smallest region mass accepted by [`TruncatedNormalSpec::new`].
const MIN_LOG_MASS: f64 = -690.7755278982137; // ln 1e-300

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationRegion {
    /// `(-∞, a] ∪ [b, ∞)`. With `a = b` this is the whole line.
    Outside { a: f64, b: f64 },
    /// `(a, b)`.
    Inside { a: f64, b: f64 },
}

impl TruncationRegion {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            TruncationRegion::Outside { a, b } | TruncationRegion::Inside { a, b } => (a, b),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            TruncationRegion::Outside { a, b } => x <= a || x >= b,
            TruncationRegion::Inside { a, b } => a < x && x < b,
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = self.bounds();
        if a.is_nan() || b.is_nan() {
            return Err(Error::contract("truncation bounds must not be NaN"));
        }
        let ok = match self {
            TruncationRegion::Outside { .. } => a <= b,
            TruncationRegion::Inside { .. } => a < b,
        };
        if !ok {
            return Err(Error::contract(format!("truncation bounds out of order: a={a}, b={b}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormalSpec {
    pub mean: f64,
    pub sd: f64,
    pub region: TruncationRegion,
}

impl TruncatedNormalSpec {
    pub fn new(mean: f64, sd: f64, region: TruncationRegion) -> Result<Self> {
        let spec = Self::unchecked(mean, sd, region)?;
        let log_mass = spec.log_mass();
        if log_mass.is_nan() || log_mass < MIN_LOG_MASS {
            return Err(Error::Numerical(format!(
                "truncation region {region:?} has probability {:e} under N({mean}, {sd}²)",
                log_mass.exp()
            )));
        }
        Ok(spec)
    }

    /// Validates the parameters but not the region mass.
    pub(crate) fn unchecked(mean: f64, sd: f64, region: TruncationRegion) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::contract(format!("mean must be finite, got {mean}")));
        }
        if !(sd > 0.0 && sd.is_finite()) {
            return Err(Error::contract(format!("sd must be positive, got {sd}")));
        }
        region.validate()?;
        Ok(TruncatedNormalSpec { mean, sd, region })
    }

    fn z(&self, x: f64) -> f64 {
        (x - self.mean) / self.sd
    }

    /// `log P(Z ∈ region)`.
    pub fn log_mass(&self) -> f64 {
        let (a, b) = self.region.bounds();
        let (za, zb) = (self.z(a), self.z(b));
        match self.region {
            TruncationRegion::Outside { .. } => log_add_exp(log_normal_cdf(za), log_normal_sf(zb)),
            TruncationRegion::Inside { .. } => log_normal_interval(za, zb),
        }
    }

    /// `(log F(x), log(1 - F(x)))` with `F` the truncated CDF.
    pub(crate) fn log_cdf_sf(&self, x: f64) -> (f64, f64) {
        let (a, b) = self.region.bounds();
        let (za, zb, zx) = (self.z(a), self.z(b), self.z(x));
        let log_m = self.log_mass();
        let (num_f, num_s) = match self.region {
            TruncationRegion::Outside { .. } => {
                if x <= a {
                    (
                        log_normal_cdf(zx),
                        log_add_exp(log_normal_interval(zx, za), log_normal_sf(zb)),
                    )
                } else if x < b {
                    (log_normal_cdf(za), log_normal_sf(zb))
                } else {
                    (
                        log_add_exp(log_normal_cdf(za), log_normal_interval(zb, zx)),
                        log_normal_sf(zx),
                    )
                }
            }
            TruncationRegion::Inside { .. } => {
                if x <= a {
                    (f64::NEG_INFINITY, log_m)
                } else if x >= b {
                    (log_m, f64::NEG_INFINITY)
                } else {
                    (log_normal_interval(za, zx), log_normal_interval(zx, zb))
                }
            }
        };
        ((num_f - log_m).min(0.0), (num_s - log_m).min(0.0))
    }
}

/// `P(Z ≤ x | Z ∈ region)` for `Z ~ N(mean, sd²)`.
pub fn truncnorm_cdf(x: f64, spec: &TruncatedNormalSpec) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::contract("truncated-normal CDF at NaN"));
    }
    Ok(spec.log_cdf_sf(x).0.exp())
}

/// `P(Z > x | Z ∈ region)`, computed directly rather than as `1 - F`.
pub fn truncnorm_sf(x: f64, spec: &TruncatedNormalSpec) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::contract("truncated-normal survival at NaN"));
    }
    Ok(spec.log_cdf_sf(x).1.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::{normal_cdf, normal_sf};
    use proptest::prelude::*;

    fn outside(a: f64, b: f64) -> TruncationRegion {
        TruncationRegion::Outside { a, b }
    }

    fn inside(a: f64, b: f64) -> TruncationRegion {
        TruncationRegion::Inside { a, b }
    }

    #[test]
    fn symmetric_examples() {
        let s = TruncatedNormalSpec::new(0.0, 1.0, outside(-1.0, 1.0)).unwrap();
        assert!((truncnorm_cdf(-1.0, &s).unwrap() - 0.5).abs() < 1e-15);
        assert!((truncnorm_cdf(1.0, &s).unwrap() - 0.5).abs() < 1e-15);
        assert!((truncnorm_cdf(0.3, &s).unwrap() - 0.5).abs() < 1e-15);
        let s = TruncatedNormalSpec::new(0.0, 1.0, inside(-1.0, 1.0)).unwrap();
        assert!((truncnorm_cdf(0.0, &s).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matches_direct_formula_in_the_bulk() {
        let s = TruncatedNormalSpec::new(0.4, 1.3, outside(-0.5, 1.2)).unwrap();
        let m = normal_cdf((-0.5 - 0.4) / 1.3) + normal_sf((1.2 - 0.4) / 1.3);
        for x in [-3.0, -0.5, 0.0, 1.2, 2.0] {
            let z = (x - 0.4) / 1.3;
            let want = if x <= -0.5 {
                normal_cdf(z) / m
            } else if x < 1.2 {
                normal_cdf((-0.5 - 0.4) / 1.3) / m
            } else {
                (normal_cdf((-0.5 - 0.4) / 1.3) + normal_cdf(z) - normal_cdf((1.2 - 0.4) / 1.3)) / m
            };
            let got = truncnorm_cdf(x, &s).unwrap();
            assert!((got - want).abs() < 1e-13, "x={x}: {got} vs {want}");
            assert!((got + truncnorm_sf(x, &s).unwrap() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn far_tail_keeps_relative_accuracy() {
        // both regions carry less than 1e-300 of the mass, below what the
        // checked constructor accepts
        // region (-∞, -40] ∪ [40, ∞) seen from mean 0: all mass sits at the
        // two edges and splits evenly
        let s = TruncatedNormalSpec::unchecked(0.0, 1.0, outside(-40.0, 40.0)).unwrap();
        assert!((truncnorm_cdf(-40.0, &s).unwrap() - 0.5).abs() < 1e-12);
        // inside a thin far interval the CDF is close to exponential
        let s = TruncatedNormalSpec::unchecked(0.0, 1.0, inside(50.0, 51.0)).unwrap();
        let f = truncnorm_cdf(50.01, &s).unwrap();
        let want = 1.0 - (-50.0f64 * 0.01 - 0.5 * 0.01 * 0.01).exp();
        assert!((f - want).abs() < 1e-3 * want, "{f} vs {want}");
    }

    #[test]
    fn empty_regions_are_reported() {
        assert!(TruncatedNormalSpec::new(0.0, 1.0, inside(60.0, 61.0)).is_err());
        assert!(TruncatedNormalSpec::new(0.0, 1.0, inside(1.0, 1.0)).is_err());
        assert!(TruncatedNormalSpec::new(0.0, 1.0, outside(2.0, 1.0)).is_err());
        assert!(TruncatedNormalSpec::new(0.0, 0.0, outside(-1.0, 1.0)).is_err());
        // a degenerate gap leaves the whole line
        let s = TruncatedNormalSpec::new(0.0, 1.0, outside(0.7, 0.7)).unwrap();
        assert!((truncnorm_cdf(1.1, &s).unwrap() - normal_cdf(1.1)).abs() < 1e-15);
        assert!((truncnorm_cdf(-0.2, &s).unwrap() - normal_cdf(-0.2)).abs() < 1e-15);
    }

    #[test]
    fn region_endpoints_map_to_zero_and_one() {
        let s = TruncatedNormalSpec::new(0.3, 2.0, inside(-1.0, 2.5)).unwrap();
        assert_eq!(truncnorm_cdf(-1.0, &s).unwrap(), 0.0);
        assert_eq!(truncnorm_cdf(2.5, &s).unwrap(), 1.0);
        let s = TruncatedNormalSpec::new(0.3, 2.0, outside(-1.0, 2.5)).unwrap();
        assert!(truncnorm_cdf(-1e6, &s).unwrap() < 1e-300);
        assert!(truncnorm_sf(1e6, &s).unwrap() < 1e-300);
    }

    proptest! {
        #[test]
        fn cdf_is_monotone(
            mean in -5.0f64..5.0,
            sd in 0.1f64..3.0,
            a in -4.0f64..4.0,
            w in 0.01f64..4.0,
            is_inside in any::<bool>(),
        ) {
            let region = if is_inside { inside(a, a + w) } else { outside(a, a + w) };
            let spec = match TruncatedNormalSpec::new(mean, sd, region) {
                Ok(s) => s,
                Err(_) => return Ok(()),
            };
            let mut prev = 0.0;
            for k in 0..=200 {
                let x = -12.0 + 24.0 * k as f64 / 200.0;
                let f = truncnorm_cdf(x, &spec).unwrap();
                prop_assert!((0.0..=1.0).contains(&f));
                prop_assert!(f >= prev - 1e-14, "x={x}: {f} < {prev}");
                prev = f;
            }
        }
    }
}
