//! Base-2 Kullback-Leibler and Jensen-Shannon divergences.

use crate::error::{invalid, Error, Result};

fn check_pair(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(invalid(format!(
            "distributions have different support sizes ({} vs {})",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

/// `sum p log2(p / q)`; terms with `p = 0` contribute nothing.
///
/// Fails when some `p > 0` meets `q = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    let mut total = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return Err(Error::UndefinedDivergence { index: i, p: pi });
        }
        total += pi * (pi / qi).log2();
    }
    Ok(total)
}

/// Symmetric divergence against the midpoint mixture; lies in `[0, 1]`.
pub fn js_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    let mix: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    let a = kl_divergence(p, &mix)?;
    let b = kl_divergence(q, &mix)?;
    Ok(0.5 * a + 0.5 * b)
}
