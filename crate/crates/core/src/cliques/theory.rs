use crate::combin::binomial;
use crate::error::{Error, Result};

/// Sparsity exponent `alpha = -ln c / ln n` of `G(n, c, s)` with the two
/// thresholds derived from it.
///
/// `tau` is the largest integer with `alpha * C(tau, s-1) < 1`, the point where
/// greedy extension of cliques stops having many candidates. `kappa` is the
/// largest integer `>= s` with `alpha * C(kappa, s-1) < s`; the clique number
/// is typically at most `kappa + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsityProfile {
    pub alpha: f64,
    pub tau: usize,
    pub kappa: usize,
}

impl SparsityProfile {
    pub fn new(n: usize, c: f64, s: usize) -> Result<Self> {
        if n < 2 || !(c > 0.0 && c < 1.0) {
            return Err(Error::invalid(format!("need n >= 2 and 0 < c < 1, got n={n} c={c}")));
        }
        Self::from_alpha(-c.ln() / (n as f64).ln(), s)
    }

    pub fn from_alpha(alpha: f64, s: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || s < 2 {
            return Err(Error::invalid(format!("need 0 < alpha < 1 and s >= 2, got alpha={alpha} s={s}")));
        }
        let f = |x: usize| alpha * binomial(x as u64, s as u64 - 1) as f64;
        let mut tau = s - 1;
        while f(tau + 1) < 1.0 {
            tau += 1;
        }
        // alpha < 1 gives alpha * C(s, s-1) = alpha * s < s, so kappa >= s exists.
        let mut kappa = s;
        while f(kappa + 1) < s as f64 {
            kappa += 1;
        }
        Ok(SparsityProfile { alpha, tau, kappa })
    }
}

/// `E|cl_k(G)| = C(n, k) c^C(k, s)` for `G ~ G(n, c, s)`.
pub fn expected_clique_count(n: usize, c: f64, k: usize, s: usize) -> f64 {
    binomial(n as u64, k as u64) as f64 * c.powf(binomial(k as u64, s as u64) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let p = SparsityProfile::from_alpha(0.3, 2).unwrap();
        assert_eq!(p.tau, 3);
        // 0.3 * 6 = 1.8 < 2 <= 0.3 * 7
        assert_eq!(p.kappa, 6);
        let p = SparsityProfile::from_alpha(0.5, 2).unwrap();
        assert_eq!((p.tau, p.kappa), (1, 3));
        assert!(SparsityProfile::new(10, 1.0, 2).is_err());
    }

    #[test]
    fn thresholds_are_maximal() {
        for s in 2..=4 {
            for i in 1..100 {
                let alpha = i as f64 / 100.0;
                let p = SparsityProfile::from_alpha(alpha, s).unwrap();
                let f = |x: usize| alpha * binomial(x as u64, s as u64 - 1) as f64;
                assert!(f(p.tau) < 1.0 && f(p.tau + 1) >= 1.0);
                assert!(p.kappa >= s && f(p.kappa) < s as f64 && f(p.kappa + 1) >= s as f64);
            }
        }
    }

    #[test]
    fn expectation() {
        assert_eq!(expected_clique_count(30, 0.5, 3, 2), 507.5);
        assert_eq!(expected_clique_count(9, 1.0, 4, 3), 126.0);
        assert!((expected_clique_count(4, 0.3, 4, 2) - 0.3f64.powi(6)).abs() < 1e-15);
    }
}
