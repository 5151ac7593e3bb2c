use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::Rng;

use super::{CliqueSet, SparsityProfile};
use crate::combin::binomial;
use crate::error::Result;
use crate::hypergraph::Hypergraph;

/// Runs `iterations` rounds of greedy random clique sampling.
///
/// Each round picks distinct vertices `v_1..v_{s-1}` uniformly at random, then
/// repeatedly picks the next vertex uniformly from the common neighbors of
/// those chosen so far. Rounds that reach `k` vertices add their clique to the
/// output; rounds that hit an empty neighborhood add nothing.
pub fn greedy_random_sampling<R: Rng + ?Sized>(
    g: &Hypergraph,
    k: usize,
    iterations: u64,
    rng: &mut R,
) -> CliqueSet {
    let mut out = CliqueSet::new(k);
    let s = g.s();
    let n = g.n();
    if k < s - 1 || k > n || s - 1 > n {
        return out;
    }
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..iterations {
        chosen.clear();
        chosen.extend(sample(rng, n, s - 1).into_iter());
        while chosen.len() < k {
            let cn = g.common_neighbors(&chosen);
            match pick_uniform(&cn, rng) {
                Some(v) => chosen.push(v),
                None => break,
            }
        }
        if chosen.len() == k {
            out.insert(&chosen);
        }
    }
    out
}

fn pick_uniform<R: Rng + ?Sized>(set: &FixedBitSet, rng: &mut R) -> Option<usize> {
    let size = set.count_ones(..);
    if size == 0 {
        return None;
    }
    set.ones().nth(rng.random_range(0..size))
}

/// Iteration count sufficient for greedy sampling to find every k-clique of
/// `G(n, c, s)` with high probability, using natural logarithms:
///
/// * `k >= tau + 1`: `2 n^(tau+1) c^C(tau+1, s) (ln n)^(3 (k - tau) (1 + eps))`
/// * `k <  tau + 1`: `2 n^k c^C(k, s) (ln n)^(1 + eps)`
pub fn required_iterations(n: usize, c: f64, k: usize, s: usize, eps: f64) -> Result<u64> {
    let profile = SparsityProfile::new(n, c, s)?;
    let nf = n as f64;
    let ln_n = nf.ln();
    let tau = profile.tau;
    let t = if k > tau {
        let j = tau + 1;
        2.0 * nf.powi(j as i32)
            * c.powf(binomial(j as u64, s as u64) as f64)
            * ln_n.powf(3.0 * (k - tau) as f64 * (1.0 + eps))
    } else {
        2.0 * nf.powi(k as i32) * c.powf(binomial(k as u64, s as u64) as f64) * ln_n.powf(1.0 + eps)
    };
    Ok(t.ceil().max(1.0) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::list_cliques;
    use crate::hypergraph::sample_er;
    use crate::seed::rng_from_seed;

    #[test]
    fn finds_all_triangles_of_k4() {
        let g = Hypergraph::complete(4, 2);
        let found = greedy_random_sampling(&g, 3, 500, &mut rng_from_seed(1));
        assert_eq!(found.len(), 4);
        let empty = Hypergraph::empty(6, 2);
        assert!(greedy_random_sampling(&empty, 3, 100, &mut rng_from_seed(1)).is_empty());
    }

    #[test]
    fn iteration_formula() {
        // n=100, c=0.5: alpha = 0.1505, tau = 6, so k = 3 uses the second branch.
        let want = (2.0 * 1e6 * 0.125 * 100f64.ln().powf(1.1)).ceil() as u64;
        assert_eq!(required_iterations(100, 0.5, 3, 2, 0.1).unwrap(), want);
        // k = 8 >= tau + 1 = 7 uses the first branch.
        let want = (2.0 * 100f64.powi(7) * 0.5f64.powi(21) * 100f64.ln().powf(3.0 * 2.0 * 1.1)).ceil() as u64;
        assert_eq!(required_iterations(100, 0.5, 8, 2, 0.1).unwrap(), want);
    }

    #[test]
    fn always_sound() {
        let mut rng = rng_from_seed(2);
        for _ in 0..20 {
            let g = sample_er(12, 0.5, 3, &mut rng);
            let truth = list_cliques(&g, 4);
            let found = greedy_random_sampling(&g, 4, 50, &mut rng);
            assert!(found.is_subset(&truth));
        }
    }
}
