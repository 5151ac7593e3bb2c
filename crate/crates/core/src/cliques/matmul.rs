use num_bigint::BigUint;

use super::{it_gen_cliques, Cutoffs};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// `M[A][B] = 1` when every vertex of `A` is below every vertex of `B` and
/// `A + B` is a clique. Rows and columns are cliques themselves, so only the
/// cross edges need checking.
fn ordered_join_matrix(g: &Hypergraph, rows: &[Vec<usize>], cols: &[Vec<usize>]) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|a| {
            cols.iter()
                .map(|b| {
                    let below = a.last().unwrap() < b.first().unwrap();
                    let joined = below && a.iter().all(|&x| b.iter().all(|&y| g.has_edge(&[x, y])));
                    u64::from(joined)
                })
                .collect()
        })
        .collect()
}

fn matmul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![0u64; cols];
            for (l, &x) in row.iter().enumerate() {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(&b[l]) {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Counts k-cliques of a graph by splitting each clique into its lowest
/// `floor(k/3)` vertices `A`, highest `ceil(k/3)` vertices `B` and the middle
/// part `C`, and counting the middle parts with one matrix product.
///
/// With `S1 = cl_floor(k/3)`, `S2 = cl_ceil(k/3)` and `M1, M2, M3` the ordered
/// join matrices on `S1 x S1`, `S1 x S2`, `S2 x S2`, the product is `M1^2`,
/// `M1 M2` or `M2 M3` for `k = 0, 1, 2 (mod 3)`, summed over the support of
/// `M1` (first case) or `M2` (other cases).
pub fn matrix_mult_count(g: &Hypergraph, k: usize) -> Result<BigUint> {
    if g.s() != 2 || k < 3 {
        return Err(Error::invalid("matrix multiplication counting needs s = 2 and k >= 3"));
    }
    let lo = k / 3;
    let hi = k.div_ceil(3);
    let s1: Vec<Vec<usize>> = it_gen_cliques(g, lo, &Cutoffs::unbounded(2, lo))?.iter().collect();
    let s2: Vec<Vec<usize>> = it_gen_cliques(g, hi, &Cutoffs::unbounded(2, hi))?.iter().collect();
    let m1 = ordered_join_matrix(g, &s1, &s1);
    let (product, support) = match k % 3 {
        0 => (matmul(&m1, &m1), m1),
        1 => {
            let m2 = ordered_join_matrix(g, &s1, &s2);
            (matmul(&m1, &m2), m2)
        }
        _ => {
            let m2 = ordered_join_matrix(g, &s1, &s2);
            let m3 = ordered_join_matrix(g, &s2, &s2);
            (matmul(&m2, &m3), m2)
        }
    };
    let mut total = 0u128;
    for (prow, srow) in product.iter().zip(&support) {
        for (&p, &s) in prow.iter().zip(srow) {
            if s != 0 {
                total += u128::from(p);
            }
        }
    }
    Ok(BigUint::from(total))
}
