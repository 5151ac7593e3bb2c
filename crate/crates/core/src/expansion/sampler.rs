use rand::Rng;

use super::bernoulli::{clear_tail, fill_per_bit, BernoulliWords};
use super::{exact_distribution, parity_even_probability, required_t_mod_2, tv_to_uniform, ExpansionSpec};
use crate::error::{Error, Result};

/// A packed bit vector `X_0..X_t`, bit `i` in word `i / 64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut out = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            out.set(i, b);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_vec(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn parity(&self) -> u8 {
        (self.count_ones() & 1) as u8
    }

    /// `sum_i 2^i X_i mod p`.
    pub fn value_mod(&self, p: u64) -> u64 {
        let mut acc = 0u64;
        let mut pw = 1 % p;
        for i in 0..self.len {
            if self.get(i) {
                acc = (acc + pw) % p;
            }
            pw = pw * 2 % p;
        }
        acc
    }
}

/// Rejection sampler for expansions conditioned on their residue mod `p`.
///
/// Each round draws fresh bits `Z_i ~ Ber(q_i)` and accepts when
/// `sum_i 2^i Z_i = x (mod p)`. The number of rounds is capped at
/// `m = ceil(ln delta / ln(1 - 1/p + Delta))`, where `Delta` is the exact
/// total variation between the residue and uniform; every round then succeeds
/// with probability at least `1/p - Delta`, so the sampler fails with
/// probability at most `delta`.
///
/// Rounds only draw the high bits. With `r_A` the residue law of the low
/// [`LOW_BITS`] bits and `need` the residue they must supply, a round accepts
/// with probability `r_A(need) / max r_A` and then draws the low bits from
/// their law conditioned on `need`. Every accepted pattern `z` has probability
/// `P(z) / max r_A`, so the output law is exactly the conditional one, and a
/// round accepts with probability `P(residue = x) / max r_A`, never less than
/// a plain round.
#[derive(Debug, Clone)]
pub struct ModPSampler {
    spec: ExpansionSpec,
    tv: f64,
    max_rounds: u64,
    gen: Option<BernoulliWords>,
    /// `tables[j][v] = v * 2^(8j) mod p` for every byte position `j`.
    tables: Vec<[u32; 256]>,
    low: LowBlock,
}

/// Width of the block of low bits drawn exactly in [`ModPSampler`].
pub const LOW_BITS: usize = 12;

#[derive(Debug, Clone)]
struct LowBlock {
    mask: u64,
    /// `r_A(r) / max r_A` per residue.
    accept: Vec<f64>,
    /// Patterns with residue `r` are `patterns[start[r]..start[r + 1]]`, with
    /// cumulative probabilities normalized to end at 1.
    start: Vec<usize>,
    patterns: Vec<u16>,
    cdf: Vec<f64>,
}

impl LowBlock {
    fn new(p: u64, qs: &[f64]) -> Self {
        let len = qs.len().min(LOW_BITS);
        let mut by_residue: Vec<Vec<(u16, f64)>> = vec![Vec::new(); p as usize];
        for z in 0..1u32 << len {
            let pr: f64 = (0..len)
                .map(|i| if z >> i & 1 == 1 { qs[i] } else { 1.0 - qs[i] })
                .product();
            if pr > 0.0 {
                by_residue[(u64::from(z) % p) as usize].push((z as u16, pr));
            }
        }
        let mass: Vec<f64> = by_residue.iter().map(|v| v.iter().map(|e| e.1).sum()).collect();
        let top = mass.iter().copied().fold(0.0, f64::max);
        let mut start = vec![0];
        let (mut patterns, mut cdf) = (Vec::new(), Vec::new());
        for (v, &m) in by_residue.iter().zip(&mass) {
            let mut acc = 0.0;
            for &(z, pr) in v {
                acc += pr / m;
                patterns.push(z);
                cdf.push(acc);
            }
            if let Some(last) = cdf.last_mut() {
                if !v.is_empty() {
                    *last = 1.0;
                }
            }
            start.push(patterns.len());
        }
        LowBlock {
            mask: if len == 64 { u64::MAX } else { (1u64 << len) - 1 },
            accept: mass.iter().map(|m| m / top).collect(),
            start,
            patterns,
            cdf,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, need: usize, rng: &mut R) -> Option<u64> {
        let a = self.accept[need];
        if a < 1.0 && rng.random::<f64>() >= a {
            return None;
        }
        let (lo, hi) = (self.start[need], self.start[need + 1]);
        let u: f64 = rng.random();
        let i = lo + self.cdf[lo..hi].partition_point(|&c| c <= u).min(hi - lo - 1);
        Some(u64::from(self.patterns[i]))
    }
}

impl ModPSampler {
    pub fn new(spec: ExpansionSpec, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid(format!("sampler slack {delta} outside (0, 1)")));
        }
        let p = spec.p();
        let tv = tv_to_uniform(&exact_distribution(&spec));
        let pinv = 1.0 / p as f64;
        if tv >= pinv {
            return Err(Error::ExpansionTooShort { tv, p });
        }
        let max_rounds = (delta.ln() / (1.0 - pinv + tv).ln()).ceil().max(1.0) as u64;
        let bytes = spec.bits().div_ceil(64) * 8;
        let mut tables = Vec::with_capacity(bytes);
        let mut base = 1 % p;
        for _ in 0..bytes {
            let mut t = [0u32; 256];
            for (v, slot) in t.iter_mut().enumerate() {
                *slot = (v as u64 * base % p) as u32;
            }
            tables.push(t);
            base = base * 256 % p;
        }
        Ok(ModPSampler {
            low: LowBlock::new(p, spec.qs()),
            gen: spec.common_bias().map(BernoulliWords::new),
            spec,
            tv,
            max_rounds,
            tables,
        })
    }

    pub fn spec(&self) -> &ExpansionSpec {
        &self.spec
    }

    /// Exact total variation between the residue and uniform.
    pub fn tv(&self) -> f64 {
        self.tv
    }

    pub fn max_rounds(&self) -> u64 {
        self.max_rounds
    }

    #[inline]
    fn residue(&self, words: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (w, &word) in words.iter().enumerate() {
            let tables = &self.tables[w * 8..w * 8 + 8];
            for (j, t) in tables.iter().enumerate() {
                acc += u64::from(t[((word >> (8 * j)) & 0xff) as usize]);
            }
        }
        acc % self.spec.p()
    }

    #[inline]
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, words: &mut [u64]) {
        let len = self.spec.bits();
        match &self.gen {
            Some(gen) => gen.fill(rng, words, len),
            None => fill_per_bit(rng, self.spec.qs(), words),
        }
        clear_tail(words, len);
    }

    /// Unconditioned draw of `Z_0..Z_t`.
    pub fn sample_unconditioned<R: Rng + ?Sized>(&self, rng: &mut R) -> Bits {
        let mut bits = Bits::zeros(self.spec.bits());
        self.draw(rng, &mut bits.words);
        bits
    }

    /// Draws bits with `sum_i 2^i X_i = x (mod p)`, or fails after
    /// [`Self::max_rounds`] rejections.
    pub fn sample<R: Rng + ?Sized>(&self, x: u64, rng: &mut R) -> Result<Bits> {
        let p = self.spec.p();
        let x = x % p;
        let mut bits = Bits::zeros(self.spec.bits());
        for _ in 0..self.max_rounds {
            self.draw(rng, &mut bits.words);
            bits.words[0] &= !self.low.mask;
            let need = ((x + p - self.residue(&bits.words)) % p) as usize;
            if let Some(z) = self.low.draw(need, rng) {
                bits.words[0] |= z;
                return Ok(bits);
            }
        }
        Err(Error::SamplerExhausted {
            rounds: self.max_rounds,
        })
    }
}

/// One-shot form of [`ModPSampler::sample`].
pub fn sample_expansion_mod_p<R: Rng + ?Sized>(
    x: u64,
    spec: &ExpansionSpec,
    delta: f64,
    rng: &mut R,
) -> Result<Bits> {
    ModPSampler::new(spec.clone(), delta)?.sample(x, rng)
}

/// Sampler for `t + 1` bits of bias `q` conditioned on their parity.
///
/// For `q = 1/2` the first `t` bits are drawn freely and the last one fixes
/// the parity, which is exactly the conditional law. Otherwise this is
/// rejection sampling with enough rounds that failure has probability at most
/// `eps / 2`.
#[derive(Debug, Clone)]
pub struct Mod2Sampler {
    q: f64,
    bits: usize,
    gen: BernoulliWords,
    /// Round caps for parity 0 and parity 1.
    max_rounds: [u64; 2],
}

impl Mod2Sampler {
    pub fn new(q: f64, t: usize, eps: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::invalid(format!("bias {q} outside (0, 1)")));
        }
        let need = required_t_mod_2(q.min(1.0 - q), eps)?;
        if t < need {
            return Err(Error::invalid(format!("t = {t} is below the required {need}")));
        }
        let bits = t + 1;
        let even = parity_even_probability(&vec![q; bits]);
        let rounds = |accept: f64| -> u64 {
            if accept >= 1.0 {
                1
            } else {
                ((eps / 2.0).ln() / (1.0 - accept).ln()).ceil().max(1.0) as u64
            }
        };
        Ok(Mod2Sampler {
            q,
            bits,
            gen: BernoulliWords::new(q),
            max_rounds: [rounds(even), rounds(1.0 - even)],
        })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn max_rounds(&self, r: u8) -> u64 {
        self.max_rounds[usize::from(r & 1)]
    }

    pub fn sample_unconditioned<R: Rng + ?Sized>(&self, rng: &mut R) -> Bits {
        let mut out = Bits::zeros(self.bits);
        self.gen.fill(rng, &mut out.words, self.bits);
        out
    }

    pub fn sample<R: Rng + ?Sized>(&self, r: u8, rng: &mut R) -> Result<Bits> {
        let r = r & 1;
        let mut out = Bits::zeros(self.bits);
        if self.q == 0.5 {
            self.gen.fill(rng, &mut out.words, self.bits - 1);
            let fix = out.parity() != r;
            out.set(self.bits - 1, fix);
            return Ok(out);
        }
        let rounds = self.max_rounds(r);
        for _ in 0..rounds {
            self.gen.fill(rng, &mut out.words, self.bits);
            if out.parity() == r {
                return Ok(out);
            }
        }
        Err(Error::SamplerExhausted { rounds })
    }
}

/// One-shot form of [`Mod2Sampler::sample`].
pub fn sample_expansion_mod_2<R: Rng + ?Sized>(r: u8, c: f64, t: usize, eps: f64, rng: &mut R) -> Result<Bits> {
    Mod2Sampler::new(c, t, eps)?.sample(r, rng)
}
