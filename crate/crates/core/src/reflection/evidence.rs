use super::{alpha_label, ReflectionError, ReflectionReport};
use crate::parse::Document;
use crate::series::{MultiIndex, TruncatedSeries};

/// Majorant data for one `u_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEvidence {
    pub alpha: MultiIndex,
    /// `ln sum |c| a^deg` over the terms of `u_alpha`.
    pub ln_majorant: f64,
    /// Least `R` with `majorant <= alpha! R^(|alpha|+1)`.
    pub radius: f64,
}

/// Numerical growth estimate for the `u_alpha`. This is evidence, not a proof
/// of convergence.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub a: f64,
    pub per_alpha: Vec<AlphaEvidence>,
    /// Fitted constant: the largest per-alpha radius.
    pub r0: f64,
    pub polynomial_flag: bool,
}

impl Evidence {
    pub(super) fn write_diagnostics(&self, d: &mut Document) {
        d.push_diagnostic("a", self.a)
            .push_diagnostic("R0", format!("{:.6}", self.r0))
            .push_diagnostic("polynomial", self.polynomial_flag);
        for e in &self.per_alpha {
            d.push_diagnostic(&format!("radius {}", alpha_label("u", &e.alpha)), format!("{:.6}", e.radius));
        }
    }
}

fn ln_factorial(alpha: &MultiIndex) -> f64 {
    alpha.exponents().iter().flat_map(|&e| 2..=e).map(|k| (k as f64).ln()).sum()
}

fn ln_majorant(u: &TruncatedSeries, ln_a: f64) -> Option<f64> {
    let logs: Vec<f64> = u.terms().map(|(m, c)| c.ln_abs() + m.degree() as f64 * ln_a).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if logs.is_empty() {
        return None;
    }
    Some(max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln())
}

/// Fits `|u_alpha|_a <= alpha! R0^(|alpha|+1)` on the report's coefficients.
pub fn convergence_evidence(report: &ReflectionReport, a: f64) -> Result<Evidence, ReflectionError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(ReflectionError::NonPositiveRadius);
    }
    let ln_a = a.ln();
    let per_alpha: Vec<AlphaEvidence> = report
        .u_alpha
        .iter()
        .filter(|(_, u)| !u.is_zero())
        .filter_map(|(alpha, u)| {
            let ln_majorant = ln_majorant(u, ln_a)?;
            let radius = ((ln_majorant - ln_factorial(alpha)) / (alpha.degree() as f64 + 1.0)).exp();
            Some(AlphaEvidence { alpha: alpha.clone(), ln_majorant, radius })
        })
        .collect();
    let r0 = per_alpha.iter().map(|e| e.radius).fold(0.0, f64::max);
    Ok(Evidence { a, per_alpha, r0, polynomial_flag: report.polynomial_flag })
}

impl ReflectionReport {
    pub fn with_evidence(mut self, a: f64) -> Result<Self, ReflectionError> {
        self.evidence = Some(convergence_evidence(&self, a)?);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::GaussRational;

    /// `u_alpha = alpha! 2^|alpha| z1` in one variable.
    fn synthetic(cutoff: u32) -> ReflectionReport {
        let u_alpha = (0..=cutoff)
            .map(|k| {
                let alpha = MultiIndex::new([k]);
                let c = &alpha.factorial() * &GaussRational::from(2).pow(k);
                (alpha, TruncatedSeries::var(1, 20, 0).scale(&c))
            })
            .collect();
        ReflectionReport {
            n: 2,
            r: TruncatedSeries::zero(3, 20),
            u_alpha,
            cutoff,
            polynomial_flag: false,
            evidence: None,
        }
    }

    #[test]
    fn recovers_geometric_growth() {
        let ev = convergence_evidence(&synthetic(12), 2.0).unwrap();
        assert!((ev.r0 - 2.0).abs() < 0.02, "{}", ev.r0);
        assert_eq!(ev.per_alpha.len(), 13);
    }

    #[test]
    fn radius_must_be_positive() {
        for a in [0.0, -1.0, f64::NAN] {
            assert_eq!(convergence_evidence(&synthetic(3), a), Err(ReflectionError::NonPositiveRadius));
        }
    }

    #[test]
    fn huge_coefficients_stay_finite() {
        let big = GaussRational::factorial(400);
        let u = TruncatedSeries::constant(1, 3, big.clone());
        assert!((ln_majorant(&u, 0.0).unwrap() - ln_factorial(&MultiIndex::new([400]))).abs() < 1e-6);
    }
}
