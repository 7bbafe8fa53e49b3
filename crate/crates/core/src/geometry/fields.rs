use super::{GeometryError, Hypersurface};
use crate::series::{SeriesError, TruncatedSeries};

/// `L_j = rho_{w_n} d/dw_j - rho_{w_j} d/dw_n`, tangent to the
/// complexified hypersurface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentField {
    /// Zero-based index `j < n - 1`.
    pub index: usize,
    n: usize,
    /// Coefficient of `d/dw_j`.
    pub along_j: TruncatedSeries,
    /// Coefficient of `d/dw_n`.
    pub along_n: TruncatedSeries,
}

impl TangentField {
    pub fn apply(&self, s: &TruncatedSeries) -> Result<TruncatedSeries, GeometryError> {
        apply_field(self, s)
    }
}

pub fn tangent_fields(h: &Hypersurface) -> Result<Vec<TangentField>, GeometryError> {
    let n = h.n();
    let rho_wn = h.rho().derive(2 * n - 1)?;
    (0..n - 1)
        .map(|j| Ok(TangentField { index: j, n, along_j: rho_wn.clone(), along_n: -h.rho().derive(n + j)? }))
        .collect()
}

pub fn apply_field(l: &TangentField, s: &TruncatedSeries) -> Result<TruncatedSeries, GeometryError> {
    let n = l.n;
    if s.nvars() != 2 * n {
        return Err(SeriesError::ArityMismatch { expected: 2 * n, got: s.nvars() }.into());
    }
    let dj = s.derive(n + l.index)?;
    let dn = s.derive(2 * n - 1)?;
    Ok(&(&l.along_j * &dj) + &(&l.along_n * &dn))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{hyp, C3, PERTURBED, SPHERE};
    use super::*;
    use crate::number::GaussRational;
    use crate::parse::parse_expr;
    use crate::vars::VarDecl;

    #[test]
    fn fields_annihilate_rho() {
        for (text, n) in [(SPHERE, 2), (C3, 3), (PERTURBED, 2)] {
            let h = hyp(text, n, 8);
            let fields = tangent_fields(&h).unwrap();
            assert_eq!(fields.len(), n - 1);
            for l in &fields {
                assert!(l.apply(h.rho()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn sphere_field_coefficients() {
        let h = hyp(SPHERE, 2, 8);
        let l = &tangent_fields(&h).unwrap()[0];
        let vars = VarDecl::parse("z:2 w:2").unwrap();
        let half_i = GaussRational::ratio(1, 2) * GaussRational::i();
        assert_eq!(l.along_j, TruncatedSeries::constant(4, 7, half_i.clone()));
        assert_eq!(l.along_n, parse_expr("z1", &vars, 7).unwrap());
        let w1 = parse_expr("w1", &vars, 8).unwrap();
        assert_eq!(l.apply(&w1).unwrap(), TruncatedSeries::constant(4, 7, half_i));
        let zs = parse_expr("z1^3 + i*z2*z1", &vars, 8).unwrap();
        assert!(l.apply(&zs).unwrap().is_zero());
        assert!(l.apply(&TruncatedSeries::one(3, 8)).is_err());
    }
}
