use crate::error::{Error, Result};
use crate::logscaled::{LogReal, Sign};
use crate::specfun::RESCALE_LN;

/// `L_k^{(α)}(x)` for `x ≤ 0`, where every series term is positive.
pub fn laguerre_neg(k: usize, alpha: u32, x: f64) -> Result<LogReal> {
    Ok(laguerre_neg_pair(k, alpha, x)?.1)
}

/// `(L_{k−1}^{(α)}(x), L_k^{(α)}(x))`; the first entry is zero for `k = 0`.
pub fn laguerre_neg_pair(k: usize, alpha: u32, x: f64) -> Result<(LogReal, LogReal)> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Laguerre argument must be finite, got {x}"
        )));
    }
    if x > 0.0 {
        return Err(Error::OutOfDomain(format!(
            "Laguerre polynomials are evaluated only at x <= 0, got {x}"
        )));
    }
    let a = alpha as f64;
    if k == 0 {
        return Ok((LogReal::zero(), LogReal::one()));
    }
    let hi = RESCALE_LN.exp();
    let mut shift = 0.0;
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if cur > hi {
            prev /= cur;
            shift += cur.ln();
            cur = 1.0;
        }
    }
    Ok((
        LogReal::new(prev.ln() + shift, Sign::PLUS),
        LogReal::new(cur.ln() + shift, Sign::PLUS),
    ))
}
