use rand::Rng;

/// Draws 64 independent `Ber(q)` bits per call.
///
/// Each lane compares a fresh uniform 64-bit number against `q` written in
/// 64-bit fixed point, one bit position at a time starting from the most
/// significant, and stops as soon as every lane is decided. A lane is 1 when
/// its number is below `q`. The expected cost is a handful of RNG words per
/// 64 bits, and exactly one word when `q = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliWords {
    q: f64,
    threshold: u64,
    /// Bit positions (from the top) after which `threshold` has only zeros.
    significant: u32,
}

impl BernoulliWords {
    pub fn new(q: f64) -> Self {
        assert!((0.0..=1.0).contains(&q), "probability {q} outside [0, 1]");
        // q * 2^64, saturating for q = 1.
        let threshold = if q >= 1.0 { u64::MAX } else { (q * 18_446_744_073_709_551_616.0) as u64 };
        let significant = 64 - threshold.trailing_zeros().min(64);
        BernoulliWords {
            q,
            threshold,
            significant,
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn next_word<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mut undecided = u64::MAX;
        let mut ones = 0u64;
        for j in 0..self.significant {
            let r = rng.next_u64();
            if (self.threshold >> (63 - j)) & 1 == 1 {
                // Lanes drawing 0 where q has a 1 are below q.
                ones |= undecided & !r;
                undecided &= r;
            } else {
                undecided &= !r;
            }
            if undecided == 0 {
                break;
            }
        }
        if self.threshold == u64::MAX {
            // q = 1 saturates just below 1; lanes equal to the threshold are
            // still counted as ones.
            ones |= undecided;
        }
        ones
    }

    /// Fills `words` with `len` fresh bits (low bits first); bits past `len`
    /// in the last word are cleared.
    #[inline]
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, words: &mut [u64], len: usize) {
        for w in words.iter_mut() {
            *w = self.next_word(rng);
        }
        clear_tail(words, len);
    }
}

#[inline]
pub(crate) fn clear_tail(words: &mut [u64], len: usize) {
    let rem = len % 64;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// Generic per-bit Bernoulli draw, for biases that differ between positions.
pub(crate) fn fill_per_bit<R: Rng + ?Sized>(rng: &mut R, qs: &[f64], words: &mut [u64]) {
    words.iter_mut().for_each(|w| *w = 0);
    for (i, &q) in qs.iter().enumerate() {
        if rng.random_bool(q) {
            words[i / 64] |= 1 << (i % 64);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn empirical_rates() {
        let mut rng = rng_from_seed(1);
        for q in [0.5, 0.3, 0.1, 0.77, 1e-3] {
            let gen = BernoulliWords::new(q);
            let words = 20_000;
            let ones: u32 = (0..words).map(|_| gen.next_word(&mut rng).count_ones()).sum();
            let n = (words * 64) as f64;
            let sd = (q * (1.0 - q) / n).sqrt();
            assert!((ones as f64 / n - q).abs() < 5.0 * sd, "q={q}");
        }
    }

    #[test]
    fn degenerate_biases() {
        let mut rng = rng_from_seed(2);
        assert_eq!(BernoulliWords::new(0.0).next_word(&mut rng), 0);
        assert_eq!(BernoulliWords::new(1.0).next_word(&mut rng), u64::MAX);
        assert_eq!(BernoulliWords::new(0.5).significant, 1);
    }

    #[test]
    fn lanes_are_independent() {
        // Pairwise agreement rate of two lanes matches q^2 + (1-q)^2.
        let mut rng = rng_from_seed(3);
        let q = 0.3;
        let gen = BernoulliWords::new(q);
        let trials = 100_000;
        let both: u32 = (0..trials)
            .map(|_| {
                let w = gen.next_word(&mut rng);
                u32::from((w & 1 == 1) && (w >> 17) & 1 == 1)
            })
            .sum();
        let rate = both as f64 / trials as f64;
        assert!((rate - q * q).abs() < 5.0 * (q * q * (1.0 - q * q) / trials as f64).sqrt());
    }

    #[test]
    fn tail_cleared() {
        let mut rng = rng_from_seed(4);
        let mut words = [0u64; 2];
        BernoulliWords::new(1.0).fill(&mut rng, &mut words, 70);
        assert_eq!(words[1], 0b11_1111);
    }
}
