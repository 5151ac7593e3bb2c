use super::CliqueSet;
use crate::combin::{binomial, subsets};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Size cutoffs `C_{s-1}, ..., C_k` for [`it_gen_cliques`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cutoffs {
    first_level: usize,
    values: Vec<f64>,
}

impl Cutoffs {
    /// `values[j]` is the cutoff for level `s - 1 + j`.
    pub fn new(s: usize, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::invalid("cutoffs must be positive"));
        }
        Ok(Cutoffs {
            first_level: s - 1,
            values,
        })
    }

    /// No cutoffs at any level up to `k`.
    pub fn unbounded(s: usize, k: usize) -> Self {
        Cutoffs {
            first_level: s - 1,
            values: vec![f64::INFINITY; k + 2 - s],
        }
    }

    /// Cutoff for level `t`; levels past the end are unbounded.
    pub fn at(&self, t: usize) -> f64 {
        t.checked_sub(self.first_level)
            .and_then(|j| self.values.get(j))
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `C_t = 2 n^t c^C(t, s)` for `s <= t <= k`; level `s - 1` is unbounded.
pub fn default_cutoffs(n: usize, c: f64, k: usize, s: usize) -> Cutoffs {
    let mut values = vec![f64::INFINITY];
    for t in s..=k {
        values.push(2.0 * (n as f64).powi(t as i32) * c.powf(binomial(t as u64, s as u64) as f64));
    }
    Cutoffs {
        first_level: s - 1,
        values,
    }
}

/// Builds `S_{s-1}, S_s, ..., S_k` level by level.
///
/// `S_{s-1}` holds every (s-1)-subset. `S_{i+1}` holds `A + v` for `A` in
/// `S_i` and `v` above every vertex of `A` with `A + v` a clique, so each
/// clique is produced once, from its largest vertex. Generation stops with
/// [`Error::CutoffExceeded`] as soon as `|S_{i+1}|` reaches `C_{i+1}`.
pub fn it_gen_cliques(g: &Hypergraph, k: usize, cutoffs: &Cutoffs) -> Result<CliqueSet> {
    let s = g.s();
    if k + 1 < s {
        return Err(Error::invalid(format!("clique size {k} is below s - 1 = {}", s - 1)));
    }
    let mut level: Vec<Vec<usize>> = subsets(g.n(), s - 1);
    for t in s - 1..k {
        let cutoff = cutoffs.at(t + 1);
        let mut next = Vec::new();
        for a in &level {
            let start = a.last().map_or(0, |&m| m + 1);
            let cn = g.common_neighbors(a);
            for v in cn.ones().filter(|&v| v >= start) {
                let mut b = a.clone();
                b.push(v);
                next.push(b);
                if next.len() as f64 >= cutoff {
                    return Err(Error::CutoffExceeded {
                        level: t + 1,
                        size: next.len(),
                        cutoff,
                    });
                }
            }
        }
        level = next;
    }
    let mut out = CliqueSet::new(k);
    for c in &level {
        out.insert(c);
    }
    Ok(out)
}
