use super::{MultiIndex, SeriesError, SeriesMap, TruncatedSeries};

impl TruncatedSeries {
    /// Substitutes the components of `v` for the variables of `self`.
    ///
    /// `v` must be origin-preserving: every output degree then receives
    /// contributions from finitely many terms of `self`, and the result is
    /// exact to `min(self.order, v.order)`.
    pub fn compose(&self, v: &SeriesMap) -> Result<TruncatedSeries, SeriesError> {
        if v.target_nvars() != self.nvars() {
            return Err(SeriesError::ArityMismatch { expected: self.nvars(), got: v.target_nvars() });
        }
        v.check_origin_preserving()?;
        let order = self.order().min(v.order());
        let terms = self.terms().filter(|(m, _)| m.degree() <= order);
        Ok(substitute(terms, v, order))
    }

    /// Substitutes `v` treating the stored terms of `self` and of `v`'s
    /// components as exact polynomials, truncating the result at `order`.
    ///
    /// Unlike [`TruncatedSeries::compose`] this accepts maps with constant
    /// terms; the caller vouches that the polynomial reading is intended.
    pub fn compose_polynomial(&self, v: &SeriesMap, order: u32) -> Result<TruncatedSeries, SeriesError> {
        if v.target_nvars() != self.nvars() {
            return Err(SeriesError::ArityMismatch { expected: self.nvars(), got: v.target_nvars() });
        }
        Ok(substitute(self.terms(), v, order))
    }
}

fn substitute<'a>(
    terms: impl Iterator<Item = (&'a MultiIndex, &'a crate::number::GaussRational)> + Clone,
    v: &SeriesMap,
    order: u32,
) -> TruncatedSeries {
    let src = v.source_nvars();
    let comps: Vec<TruncatedSeries> = v.components().iter().map(|c| c.with_order(order)).collect();
    let mut max_exp = vec![0u32; comps.len()];
    for (m, _) in terms.clone() {
        for (k, &e) in m.exponents().iter().enumerate() {
            max_exp[k] = max_exp[k].max(e);
        }
    }
    // powers[k][e] = V_k^e truncated at `order`
    let powers: Vec<Vec<TruncatedSeries>> = comps
        .iter()
        .zip(&max_exp)
        .map(|(c, &top)| {
            let mut p = vec![TruncatedSeries::one(src, order)];
            for e in 1..=top as usize {
                let next = p[e - 1].mul_to(c, order);
                p.push(next);
            }
            p
        })
        .collect();

    let terms: Vec<(&[u32], &crate::number::GaussRational)> = terms.map(|(m, c)| (m.exponents(), c)).collect();
    nested(&terms, 0, &powers, src, order)
}

/// Horner-style evaluation grouped by the exponent of variable `var`: the
/// last variable only needs linear combinations of its powers, and every
/// other level multiplies once per distinct exponent.
fn nested(
    terms: &[(&[u32], &crate::number::GaussRational)],
    var: usize,
    powers: &[Vec<TruncatedSeries>],
    src: usize,
    order: u32,
) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(src, order);
    if var == powers.len() {
        for (_, c) in terms {
            out.accumulate(MultiIndex::zero(src), c);
        }
        return out;
    }
    let mut groups: std::collections::BTreeMap<u32, Vec<(&[u32], &crate::number::GaussRational)>> =
        std::collections::BTreeMap::new();
    for t in terms {
        groups.entry(t.0[var]).or_default().push(*t);
    }
    let last = var + 1 == powers.len();
    for (e, group) in groups {
        let power = &powers[var][e as usize];
        if power.is_zero() {
            continue;
        }
        if last {
            let c = group.iter().fold(crate::number::GaussRational::from(0), |acc, (_, c)| &acc + *c);
            for (mm, cc) in power.terms() {
                out.accumulate(mm.clone(), &(cc * &c));
            }
        } else {
            let inner = nested(&group, var + 1, powers, src, order);
            let product = if e == 0 { inner } else { inner.mul_to(power, order) };
            for (mm, cc) in product.terms() {
                out.accumulate(mm.clone(), cc);
            }
        }
    }
    out
}
