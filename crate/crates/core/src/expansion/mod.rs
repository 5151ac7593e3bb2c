//! Random biased binary expansions modulo p.
//!
//! For independent `Z_i ~ Ber(q_i)`, `i = 0..=t`, the residue
//! `sum_i 2^i Z_i mod p` is close to uniform once `t` is polylogarithmic in
//! `p`. This module computes that residue distribution exactly, evaluates the
//! explicit length bounds, and samples bit vectors conditioned on a residue
//! (mod p) or a parity (mod 2). Bits are indexed `0..=t`, so an expansion has
//! `t + 1` bits.

mod bernoulli;
mod sampler;

pub use bernoulli::BernoulliWords;
pub use sampler::{
    sample_expansion_mod_2, sample_expansion_mod_p, Bits, Mod2Sampler, ModPSampler,
};

use crate::error::{Error, Result};
use crate::fields::is_prime;

/// Parameters of a binary expansion: modulus `p`, bias bound `c` and the
/// per-bit biases `qs[0..=t]`, each in `[c, 1 - c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionSpec {
    p: u64,
    c: f64,
    qs: Vec<f64>,
}

impl ExpansionSpec {
    pub fn new(p: u64, c: f64, qs: Vec<f64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("modulus {p} is not prime")));
        }
        if !(c > 0.0 && c <= 0.5) {
            return Err(Error::invalid(format!("bias bound {c} outside (0, 1/2]")));
        }
        if qs.is_empty() {
            return Err(Error::invalid("an expansion needs at least one bit"));
        }
        // A little slack so that q = 1 - c computed in floating point passes.
        if let Some(q) = qs.iter().find(|&&q| q < c - 1e-12 || q > 1.0 - c + 1e-12) {
            return Err(Error::invalid(format!("bias {q} outside [{c}, {}]", 1.0 - c)));
        }
        Ok(ExpansionSpec { p, c, qs })
    }

    /// All `t + 1` bits with bias `q`; the bias bound is `min(q, 1 - q)`.
    pub fn uniform(p: u64, q: f64, t: usize) -> Result<Self> {
        Self::new(p, q.min(1.0 - q), vec![q; t + 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Index of the highest bit; there are `t + 1` bits.
    pub fn t(&self) -> usize {
        self.qs.len() - 1
    }

    pub fn bits(&self) -> usize {
        self.qs.len()
    }

    pub fn qs(&self) -> &[f64] {
        &self.qs
    }

    /// The common bias when every bit has the same one.
    pub fn common_bias(&self) -> Option<f64> {
        let q = self.qs[0];
        self.qs.iter().all(|&x| x == q).then_some(q)
    }
}

/// Kahan-compensated sum.
pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Probability mass function of `sum_i 2^i Z_i mod p`, by one convolution
/// step per bit: `new[x] = (1 - q_i) old[x] + q_i old[x - 2^i mod p]`.
pub fn exact_distribution(spec: &ExpansionSpec) -> Vec<f64> {
    let p = spec.p as usize;
    let mut f = vec![0.0; p];
    f[0] = 1.0;
    let mut next = vec![0.0; p];
    let mut shift = 1 % p;
    for &q in &spec.qs {
        for x in 0..p {
            next[x] = (1.0 - q) * f[x] + q * f[(x + p - shift) % p];
        }
        std::mem::swap(&mut f, &mut next);
        shift = shift * 2 % p;
    }
    f
}

/// Total variation distance between a distribution on `0..p` and uniform.
pub fn tv_to_uniform(dist: &[f64]) -> f64 {
    let u = 1.0 / dist.len() as f64;
    0.5 * kahan_sum(dist.iter().map(|&f| (f - u).abs()))
}

/// Total variation to uniform of `t + 1` unbiased bits mod `p`:
/// `a (p - a) / (2^(t+1) p)` with `a = 2^(t+1) mod p`.
pub fn closed_form_tv_unbiased(p: u64, t: usize) -> f64 {
    let mut a = 1u64;
    for _ in 0..=t {
        a = a * 2 % p;
    }
    let a = a as f64;
    let p = p as f64;
    a * (p - a) / p * 2f64.powi(-(t as i32 + 1))
}

/// Explicit expansion length for total variation at most `eps` mod `p`:
/// `ceil(ln(4 eps^2 / p) / ln(1 - 3c(1-c))) * ceil(1 + log2(p / 3))`,
/// clamped at zero.
pub fn required_t_mod_p(p: u64, c: f64, eps: f64) -> Result<usize> {
    if p <= 2 || !is_prime(p) {
        return Err(Error::invalid(format!("modulus {p} must be an odd prime")));
    }
    if !(c > 0.0 && c <= 0.5) {
        return Err(Error::invalid(format!("bias bound {c} outside (0, 1/2]")));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("tolerance {eps} must be positive")));
    }
    let pf = p as f64;
    let rounds = ((4.0 * eps * eps / pf).ln() / (1.0 - 3.0 * c * (1.0 - c)).ln()).ceil();
    let span = (1.0 + (pf / 3.0).log2()).ceil();
    Ok((rounds.max(0.0) * span) as usize)
}

/// Smallest `t` for which `t + 1` bits of bias `q` have residue within `eps`
/// of uniform, by exact computation; never more than the explicit bound.
pub fn minimal_t_mod_p(p: u64, q: f64, eps: f64) -> Result<usize> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("bias {q} outside (0, 1)")));
    }
    let bound = required_t_mod_p(p, q.min(1.0 - q), eps)?;
    let pu = p as usize;
    let mut f = vec![0.0; pu];
    f[0] = 1.0;
    let mut next = vec![0.0; pu];
    let mut shift = 1;
    for t in 0..=bound {
        for x in 0..pu {
            next[x] = (1.0 - q) * f[x] + q * f[(x + pu - shift) % pu];
        }
        std::mem::swap(&mut f, &mut next);
        shift = shift * 2 % pu;
        if tv_to_uniform(&f) <= eps {
            return Ok(t);
        }
    }
    Ok(bound)
}

/// Expansion length for parity within `eps` of uniform:
/// `ceil(ln(eps / 2) / ln|1 - 2c|) + 1`. At `c = 1/2` this is the limit, 1.
pub fn required_t_mod_2(c: f64, eps: f64) -> Result<usize> {
    if !(c > 0.0 && c <= 0.5) {
        return Err(Error::invalid(format!("bias bound {c} outside (0, 1/2]")));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("tolerance {eps} must be positive")));
    }
    let base = (1.0 - 2.0 * c).abs();
    if base == 0.0 {
        return Ok(1);
    }
    Ok(((eps / 2.0).ln() / base.ln()).ceil().max(0.0) as usize + 1)
}

/// `P[sum_i Z_i = 0 mod 2] = 1/2 + prod_i (1 - 2 q_i) / 2`.
pub fn parity_even_probability(qs: &[f64]) -> f64 {
    0.5 + 0.5 * qs.iter().map(|&q| 1.0 - 2.0 * q).product::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use rand::Rng;

    /// Enumerates all 2^(t+1) bit vectors.
    fn enumerate(p: u64, qs: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; p as usize];
        for z in 0u64..1 << qs.len() {
            let mut prob = 1.0;
            let mut val = 0u64;
            for (i, &q) in qs.iter().enumerate() {
                let bit = (z >> i) & 1;
                prob *= if bit == 1 { q } else { 1.0 - q };
                val += bit << i;
            }
            f[(val % p) as usize] += prob;
        }
        f
    }

    #[test]
    fn small_distributions() {
        let spec = ExpansionSpec::uniform(3, 0.5, 0).unwrap();
        assert_eq!(exact_distribution(&spec), vec![0.5, 0.5, 0.0]);
        let spec = ExpansionSpec::uniform(5, 0.5, 3).unwrap();
        let f = exact_distribution(&spec);
        let want = [4.0 / 16.0, 3.0 / 16.0, 3.0 / 16.0, 3.0 / 16.0, 3.0 / 16.0];
        for (a, b) in f.iter().zip(&want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((tv_to_uniform(&f) - 0.05).abs() < 1e-15);
        assert!((closed_form_tv_unbiased(5, 3) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn dp_matches_enumeration() {
        let mut rng = rng_from_seed(7);
        for _ in 0..50 {
            let p = [3, 5, 7, 11, 13][rng.random_range(0..5)];
            let t = rng.random_range(0..10);
            let qs: Vec<f64> = (0..=t).map(|_| rng.random_range(0.1..0.9)).collect();
            let spec = ExpansionSpec::new(p, 0.1, qs.clone()).unwrap();
            for (a, b) in exact_distribution(&spec).iter().zip(enumerate(p, &qs)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn length_bounds() {
        assert_eq!(required_t_mod_p(5, 0.5, 0.01).unwrap(), 14);
        assert!(required_t_mod_p(5, 0.5, 0.001).unwrap() >= 14);
        assert!(required_t_mod_p(2, 0.5, 0.01).is_err());
        assert!(required_t_mod_p(5, 0.5, 0.0).is_err());
        // ceil(ln(0.025) / ln(0.4)) + 1 = ceil(4.026) + 1 = 6
        assert_eq!(required_t_mod_2(0.3, 0.05).unwrap(), 6);
        assert_eq!(required_t_mod_2(0.5, 0.05).unwrap(), 1);
    }

    #[test]
    fn minimal_length() {
        for (p, q, eps) in [(5, 0.5, 0.01), (13, 0.3, 0.001), (37, 0.1, 0.01)] {
            let t = minimal_t_mod_p(p, q, eps).unwrap();
            let tv = |t| tv_to_uniform(&exact_distribution(&ExpansionSpec::uniform(p, q, t).unwrap()));
            assert!(tv(t) <= eps);
            assert!(t == 0 || tv(t - 1) > eps);
            assert!(t <= required_t_mod_p(p, q.min(1.0 - q), eps).unwrap());
        }
        // Unbiased bits agree with the closed form.
        assert_eq!(minimal_t_mod_p(5, 0.5, 0.01).unwrap(), (0..).find(|&t| closed_form_tv_unbiased(5, t) <= 0.01).unwrap());
    }

    #[test]
    fn parity_identity() {
        let qs = [0.3; 4];
        let mut even = 0.0;
        for z in 0u32..16 {
            if z.count_ones() % 2 == 0 {
                even += (0..4)
                    .map(|i| if (z >> i) & 1 == 1 { 0.3 } else { 0.7 })
                    .product::<f64>();
            }
        }
        assert!((even - 0.5128).abs() < 1e-12);
        assert!((parity_even_probability(&qs) - even).abs() < 1e-12);
        assert_eq!(parity_even_probability(&[0.0; 3]), 1.0);
    }

    #[test]
    fn spec_validation() {
        assert!(ExpansionSpec::new(4, 0.3, vec![0.5]).is_err());
        assert!(ExpansionSpec::new(5, 0.3, vec![0.2]).is_err());
        assert!(ExpansionSpec::new(5, 0.6, vec![0.5]).is_err());
        assert!(ExpansionSpec::new(5, 0.3, vec![]).is_err());
        let s = ExpansionSpec::uniform(7, 0.8, 3).unwrap();
        assert!((s.c() - 0.2).abs() < 1e-15);
        assert_eq!(s.bits(), 4);
    }
}
