use super::ColoringAssignment;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fields::{ext_decompose, ExtFieldCtx, Semiring};
use crate::hypergraph::EdgeIndex;

use super::unweighted::MAX_COLORINGS;

/// Evaluates the clique polynomial over `GF(p^t)` at `x` from evaluations
/// over `F_p`.
///
/// Writing `x_j = sum_i x_j^(i) beta^(p^i)` in the normal basis,
/// `P(x) = sum_a (prod_S beta^(p^a(S))) P(x^(a o L))` over the `t^D`
/// colorings `a`, where `x^(a o L)_j = x_j^(a(L(j)))`. `base_eval(a, y)` is
/// asked for `P(y)` over `F_p` at each `y = x^(a o L)`.
pub fn ext_to_base_reduce<E>(ctx: &ExtFieldCtx, index: &EdgeIndex, x: &[u32], base_eval: E, exec: Exec) -> Result<u32>
where
    E: Fn(&ColoringAssignment, &[u64]) -> Result<u64> + Sync + Send,
{
    if x.len() != index.len() {
        return Err(Error::invalid("input length does not match the edge index"));
    }
    let field = &ctx.field;
    let t = ctx.degree();
    let d = index.degree();
    let coords: Vec<Vec<u64>> = x.iter().map(|&v| ext_decompose(v, ctx)).collect();
    let count = ColoringAssignment::count(d, t)
        .filter(|&c| c <= MAX_COLORINGS)
        .ok_or_else(|| Error::invalid(format!("{t}^{d} colorings are too many to enumerate")))?;
    let terms = exec.map_range(count as usize, |i| {
        let a = ColoringAssignment::from_index(i as u64, d, t);
        let y: Vec<u64> = coords
            .iter()
            .enumerate()
            .map(|(j, c)| c[a.color(index.labelset_of(j))])
            .collect();
        let v = base_eval(&a, &y)?;
        let weight = a
            .colors()
            .iter()
            .fold(field.one(), |w, &c| field.mul(w, ctx.conjugates[c]));
        Ok(field.mul(weight, field.embed(v)))
    });
    terms
        .into_iter()
        .try_fold(field.zero(), |acc, term: Result<u32>| Ok(field.add(acc, term?)))
}
