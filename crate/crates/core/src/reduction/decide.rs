use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Default constant `C` in the `C 2^k` random restrictions.
pub const DEFAULT_DECIDE_CONST: usize = 8;

/// Decides whether `g` has a k-clique with a parity solver.
///
/// The parity of the k-cliques inside a vertex subset `U` is the value at the
/// indicator of `U` of the multilinear polynomial
/// `P_G(z) = sum over k-cliques K of prod_{v in K} z_v` over `F_2`. It is the
/// zero polynomial iff `g` has no k-clique, and otherwise it is nonzero on at
/// least a `2^-k` fraction of inputs. So `C 2^k` uniformly random subsets
/// miss a nonzero value with probability at most `(1 - 2^-k)^(C 2^k) <= e^-C`,
/// and a clique-free `g` is never accepted.
pub fn decide_via_parity<F, R>(g: &Hypergraph, k: usize, mut parity_solver: F, c_const: usize, rng: &mut R) -> Result<bool>
where
    F: FnMut(&Hypergraph) -> Result<u8>,
    R: Rng + ?Sized,
{
    if k >= usize::BITS as usize {
        return Err(Error::invalid(format!("k = {k} is too large")));
    }
    let trials = c_const
        .checked_mul(1 << k)
        .ok_or_else(|| Error::invalid("trial count overflows"))?;
    for _ in 0..trials {
        let kept: Vec<usize> = (0..g.n()).filter(|_| rng.random_bool(0.5)).collect();
        if parity_solver(&g.induced(&kept))? & 1 == 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::parity_count;
    use crate::seed::rng_from_seed;

    fn brute(k: usize) -> impl FnMut(&Hypergraph) -> Result<u8> {
        move |h| Ok(parity_count(h, k))
    }

    fn petersen() -> Hypergraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push([i, (i + 1) % 5]);
            edges.push([i, i + 5]);
            edges.push([i + 5, (i + 2) % 5 + 5]);
        }
        Hypergraph::from_edges(10, 2, edges).unwrap()
    }

    #[test]
    fn rejects_clique_free_inputs() {
        let mut rng = rng_from_seed(81);
        let p = petersen();
        assert_eq!(p.edge_count(), 15);
        assert_eq!(crate::cliques::brute_force_count(&p, 3), 0u32.into());
        for _ in 0..20 {
            assert!(!decide_via_parity(&p, 3, brute(3), DEFAULT_DECIDE_CONST, &mut rng).unwrap());
            assert!(!decide_via_parity(&Hypergraph::empty(10, 2), 4, brute(4), DEFAULT_DECIDE_CONST, &mut rng).unwrap());
        }
    }

    #[test]
    fn detects_planted_clique() {
        let mut rng = rng_from_seed(82);
        let mut hits = 0;
        for _ in 0..200 {
            let mut edges: Vec<[usize; 2]> = Vec::new();
            for a in 0..10 {
                for b in a + 1..10 {
                    if (a < 4 && b < 4) || rng.random_bool(0.2) {
                        edges.push([a, b]);
                    }
                }
            }
            let g = Hypergraph::from_edges(10, 2, edges).unwrap();
            hits += usize::from(decide_via_parity(&g, 4, brute(4), DEFAULT_DECIDE_CONST, &mut rng).unwrap());
        }
        assert!(hits >= 198, "{hits}/200");
    }
}
