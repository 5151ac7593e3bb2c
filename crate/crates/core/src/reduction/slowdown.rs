use serde::{Deserialize, Serialize};

use crate::combin::binomial;
use crate::error::{Error, Result};

/// The slowdown parameters of the counting and parity reductions, with
/// natural logarithms and an explicit constant `C`:
///
/// ```text
/// U_#   = (C / (c (1-c)) * (s ln k + s ln ln n) * ln n)^D
/// U_P,1 = (C / (c (1-c)) * s ln k * (s ln n + D ln ln D))^D
/// U_P,2 = (C s ln k)^D
/// ```
///
/// with `D = C(k, s)`. An oracle with error below `1 / U` on Erdos-Renyi
/// inputs suffices for the corresponding reduction once `C` is large enough.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlowdownParams {
    pub upsilon_sharp: f64,
    pub upsilon_p1: f64,
    pub upsilon_p2: f64,
}

pub fn compute_slowdowns(n: usize, c: f64, k: usize, s: usize, c_const: f64) -> Result<SlowdownParams> {
    if !(k >= s && s >= 2 && n >= 2) {
        return Err(Error::invalid(format!("need k >= s >= 2 and n >= 2, got n={n} k={k} s={s}")));
    }
    if !(c > 0.0 && c < 1.0) || !(c_const > 0.0) {
        return Err(Error::invalid(format!("need 0 < c < 1 and C > 0, got c={c} C={c_const}")));
    }
    let d = binomial(k as u64, s as u64) as f64;
    let (nf, kf, sf) = (n as f64, k as f64, s as f64);
    let bias = 1.0 / (c * (1.0 - c));
    let out = SlowdownParams {
        upsilon_sharp: (c_const * bias * (sf * kf.ln() + sf * nf.ln().ln()) * nf.ln()).powf(d),
        upsilon_p1: (c_const * bias * sf * kf.ln() * (sf * nf.ln() + d * d.ln().ln())).powf(d),
        upsilon_p2: (c_const * sf * kf.ln()).powf(d),
    };
    let ok = |v: f64| v.is_finite() && v > 0.0;
    if !(ok(out.upsilon_sharp) && ok(out.upsilon_p1) && ok(out.upsilon_p2)) {
        return Err(Error::invalid(format!(
            "slowdown formulas are not positive at n={n} c={c} k={k} s={s}"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parity_constant() {
        let u = compute_slowdowns(100, 0.5, 4, 2, 1.0).unwrap();
        assert_relative_eq!(u.upsilon_p2, (2.0 * 4f64.ln()).powi(6), max_relative = 1e-12);
        let v = compute_slowdowns(1000, 0.1, 4, 2, 1.0).unwrap();
        assert_eq!(u.upsilon_p2, v.upsilon_p2);
    }

    #[test]
    fn monotone_in_k_and_minimal_at_half() {
        let mut prev = 0.0;
        for k in 3..8 {
            let u = compute_slowdowns(50, 0.3, k, 2, 1.0).unwrap().upsilon_sharp;
            assert!(u > prev);
            prev = u;
        }
        let half = compute_slowdowns(50, 0.5, 4, 2, 1.0).unwrap().upsilon_sharp;
        let tenth = compute_slowdowns(50, 0.1, 4, 2, 1.0).unwrap().upsilon_sharp;
        assert!(half < tenth);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(compute_slowdowns(50, 0.5, 2, 2, 1.0).is_err());
        assert!(compute_slowdowns(50, 0.0, 4, 2, 1.0).is_err());
    }
}
