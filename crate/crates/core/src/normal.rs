//! Standard normal density and distribution functions.
//!
//! The fill-rate models evaluate Φ through a logistic approximation
//! `e^{2y} / (1 + e^{2y})` with `y = 0.7988 z (1 + 0.04417 z²)`. An
//! erf-based evaluation is kept alongside it as a cross-check and as an
//! opt-in alternative.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

const LOGISTIC_SCALE: f64 = 0.7988;
const LOGISTIC_CUBIC: f64 = 0.04417;

/// Which evaluation of Φ the models use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CdfKind {
    /// Logistic approximation.
    #[default]
    Approx,
    /// Error-function based evaluation.
    Exact,
}

impl CdfKind {
    pub fn cdf(self, z: f64) -> f64 {
        match self {
            CdfKind::Approx => std_normal_cdf_approx(z),
            CdfKind::Exact => std_normal_cdf_exact(z),
        }
    }

    /// `1 − Φ(z)`, evaluated without cancellation in the upper tail.
    pub fn upper_tail(self, z: f64) -> f64 {
        self.cdf(-z)
    }
}

/// φ(z) = e^{−z²/2} / √(2π).
pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

pub fn std_normal_cdf_approx(z: f64) -> f64 {
    let y = LOGISTIC_SCALE * z * (1.0 + LOGISTIC_CUBIC * z * z);
    // 1 / (1 + e^{-2y}) is the same quantity and never overflows for y > 0.
    if y >= 0.0 {
        1.0 / (1.0 + (-2.0 * y).exp())
    } else {
        let e = (2.0 * y).exp();
        e / (1.0 + e)
    }
}

pub fn std_normal_cdf_exact(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pdf_values() {
        assert_abs_diff_eq!(std_normal_pdf(0.0), 0.398_942_3, epsilon = 1e-7);
        assert_abs_diff_eq!(std_normal_pdf(-0.45835), 0.35916, epsilon = 1e-5);
        assert!(std_normal_pdf(10.0) < 1e-21);
        assert!(std_normal_pdf(10.0) > 0.0);
        assert_eq!(std_normal_pdf(1.3), std_normal_pdf(-1.3));
    }

    #[test]
    fn approx_cdf_values() {
        assert_eq!(std_normal_cdf_approx(0.0), 0.5);
        assert_abs_diff_eq!(std_normal_cdf_approx(1.0), 0.8413, epsilon = 1e-3);
        for z in [0.1, 0.7, 1.5, 3.0, 8.0, 40.0] {
            let sum = std_normal_cdf_approx(z) + std_normal_cdf_approx(-z);
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-15);
        }
        assert!(std_normal_cdf_approx(-40.0) >= 0.0);
        assert_eq!(std_normal_cdf_approx(40.0), 1.0);
    }

    #[test]
    fn exact_cdf_values() {
        assert_eq!(std_normal_cdf_exact(0.0), 0.5);
        assert_abs_diff_eq!(std_normal_cdf_exact(1.959964), 0.975, epsilon = 1e-6);
        assert_abs_diff_eq!(std_normal_cdf_exact(1.0), 0.841_344_746, epsilon = 1e-9);
    }

    #[test]
    fn approx_tracks_exact_on_central_range() {
        let worst = (0..=8000)
            .map(|i| -4.0 + i as f64 * 1e-3)
            .map(|z| (std_normal_cdf_approx(z) - std_normal_cdf_exact(z)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 2e-3, "max deviation {worst}");
    }
}
