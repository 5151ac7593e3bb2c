use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{Field, PrimeField, Semiring};
use crate::combin::binomial;
use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The `count` smallest primes strictly greater than `bound`.
pub fn primes_above(bound: u64, count: usize) -> Vec<u64> {
    (bound + 1..).filter(|&q| is_prime(q)).take(count).collect()
}

/// Minimal increasing prefix of the primes above `12 * C(k, s)` whose product
/// exceeds `n^k`.
///
/// Every prime exceeds `12 D` with `D = C(k, s)`, which is what the random
/// self-reduction needs, and the product bound makes CRT recombination of
/// residues of a clique count (at most `n^k`) unique.
pub fn select_primes(n: u64, k: u64, s: u64) -> Result<Vec<u64>> {
    if !(n >= k && k >= s && s >= 2) {
        return Err(Error::invalid(format!("need n >= k >= s >= 2, got n={n} k={k} s={s}")));
    }
    let bound = 12 * binomial(k, s);
    let target = BigUint::from(n).pow(k as u32);
    let mut product = BigUint::from(1u32);
    let mut out = Vec::new();
    let mut q = bound;
    while product <= target {
        q += 1;
        while !is_prime(q) {
            q += 1;
        }
        product *= q;
        out.push(q);
    }
    Ok(out)
}

/// Residues of one integer modulo a list of distinct primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueVector {
    pub primes: Vec<u64>,
    pub residues: Vec<u64>,
}

impl ResidueVector {
    pub fn new(primes: Vec<u64>, residues: Vec<u64>) -> Result<Self> {
        if primes.len() != residues.len() {
            return Err(Error::invalid("primes and residues differ in length"));
        }
        for (i, (&p, &r)) in primes.iter().zip(&residues).enumerate() {
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            if r >= p {
                return Err(Error::invalid(format!("residue {r} not reduced mod {p}")));
            }
            if primes[..i].contains(&p) {
                return Err(Error::invalid(format!("prime {p} repeated")));
            }
        }
        Ok(ResidueVector { primes, residues })
    }

    /// Residues of `value` modulo each prime.
    pub fn of(value: &BigUint, primes: &[u64]) -> Result<Self> {
        let residues = primes
            .iter()
            .map(|&p| (value % p).try_into().expect("residue fits u64"))
            .collect();
        Self::new(primes.to_vec(), residues)
    }

    pub fn modulus(&self) -> BigUint {
        self.primes.iter().map(|&p| BigUint::from(p)).product()
    }
}

/// The unique `x` in `[0, prod primes)` with `x = residues[i] mod primes[i]`.
pub fn crt_combine(rv: &ResidueVector) -> BigUint {
    let mut x = BigUint::ZERO;
    let mut modulus = BigUint::from(1u32);
    for (&p, &r) in rv.primes.iter().zip(&rv.residues) {
        let field = PrimeField::new(p).expect("residue vector holds primes");
        let x_mod: u64 = (&x % p).try_into().expect("fits u64");
        let m_mod: u64 = (&modulus % p).try_into().expect("fits u64");
        // Lift: x + M * ((r - x) / M mod p) keeps x mod M and fixes x mod p.
        let step = field.mul(field.sub(r, x_mod), field.inv(m_mod).expect("coprime moduli"));
        x += &modulus * step;
        modulus *= p;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: scan candidate primes and stop at the first prefix
    /// whose product beats n^k.
    fn select_primes_oracle(n: u64, k: u64, s: u64) -> Vec<u64> {
        let bound = 12 * binomial(k, s);
        let target = BigUint::from(n).pow(k as u32);
        let mut out = Vec::new();
        for q in (bound + 1)..10_000 {
            if (2..q).all(|d| q % d != 0) {
                out.push(q);
                let prod: BigUint = out.iter().map(|&p| BigUint::from(p)).product();
                if prod > target {
                    return out;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn select_primes_examples() {
        assert_eq!(select_primes(10, 4, 2).unwrap(), vec![73, 79, 83]);
        assert_eq!(select_primes(2, 2, 2).unwrap(), vec![13]);
        assert_eq!(select_primes(6, 3, 3).unwrap(), vec![13, 17]);
        for (n, k, s) in [(10, 4, 2), (2, 2, 2), (6, 3, 3), (8, 4, 3), (12, 5, 2)] {
            assert_eq!(select_primes(n, k, s).unwrap(), select_primes_oracle(n, k, s));
        }
        assert!(select_primes(3, 4, 2).is_err());
    }

    #[test]
    fn crt_examples() {
        let rv = ResidueVector::new(vec![3, 5], vec![2, 3]).unwrap();
        let scan = (0u64..15).find(|x| x % 3 == 2 && x % 5 == 3).unwrap();
        assert_eq!(crt_combine(&rv), BigUint::from(scan));
        assert_eq!(scan, 8);

        let rv = ResidueVector::new(vec![7], vec![0]).unwrap();
        assert_eq!(crt_combine(&rv), BigUint::ZERO);

        let v = BigUint::from(10_000u32);
        let rv = ResidueVector::of(&v, &[73, 79, 83]).unwrap();
        assert_eq!(crt_combine(&rv), v);
    }

    #[test]
    fn residue_vector_validation() {
        assert!(ResidueVector::new(vec![3, 3], vec![1, 1]).is_err());
        assert!(ResidueVector::new(vec![3], vec![3]).is_err());
        assert!(ResidueVector::new(vec![4], vec![1]).is_err());
        assert!(ResidueVector::new(vec![3], vec![]).is_err());
    }
}
