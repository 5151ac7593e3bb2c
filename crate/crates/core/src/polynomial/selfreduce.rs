use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fields::{berlekamp_welch_decode, Field};

/// Number of curve evaluations for a degree-`d` polynomial, `12 d`.
pub fn self_reduction_degree(d: usize) -> usize {
    12 * d
}

/// Points of the random curve `g(t) = x + t y_1 + t^2 y_2` at the first `12 d`
/// nonzero field elements, with `y_1, y_2` uniform in `F^N`.
///
/// Every `g(t_i)` with `t_i != 0` is uniform in `F^N`, and the composition of
/// a degree-`d` polynomial with `g` has degree at most `2 d` in `t`.
pub fn self_reduction_points<F: Field, R: Rng + ?Sized>(
    field: &F,
    x: &[F::Elem],
    d: usize,
    rng: &mut R,
) -> Result<Vec<(F::Elem, Vec<F::Elem>)>> {
    let m = self_reduction_degree(d);
    if field.order() <= m as u64 {
        return Err(Error::invalid(format!(
            "field of order {} has fewer than {m} nonzero points",
            field.order()
        )));
    }
    let y1: Vec<F::Elem> = x.iter().map(|_| field.random(rng)).collect();
    let y2: Vec<F::Elem> = x.iter().map(|_| field.random(rng)).collect();
    Ok((1..=m as u64)
        .map(|i| {
            let t = field.element(i);
            let t2 = field.mul(t, t);
            let point = x
                .iter()
                .zip(y1.iter().zip(&y2))
                .map(|(&a, (&b, &c))| field.add(a, field.add(field.mul(t, b), field.mul(t2, c))))
                .collect();
            (t, point)
        })
        .collect())
}

/// Evaluates a degree-`d` polynomial at the worst-case point `x` from its
/// claimed values at `12 d` random points.
///
/// `eval_at(i, z)` should return the polynomial at `z`, the `i`-th curve point;
/// up to `floor((10 d - 1) / 2)` of its answers may be wrong. The values are
/// decoded by Berlekamp-Welch as a polynomial of degree `2 d` in the curve
/// parameter and evaluated at `t = 0`, where the curve passes through `x`.
pub fn random_self_reduce<F, R, E>(
    field: &F,
    x: &[F::Elem],
    d: usize,
    eval_at: E,
    rng: &mut R,
    exec: Exec,
) -> Result<F::Elem>
where
    F: Field,
    R: Rng + ?Sized,
    E: Fn(usize, &[F::Elem]) -> Result<F::Elem> + Sync + Send,
{
    let points = self_reduction_points(field, x, d, rng)?;
    let values = exec.map_range(points.len(), |i| eval_at(i, &points[i].1));
    let samples = points
        .iter()
        .zip(values)
        .map(|((t, _), v)| Ok((*t, v?)))
        .collect::<Result<Vec<_>>>()?;
    berlekamp_welch_decode(field, &samples, 2 * d)
}
