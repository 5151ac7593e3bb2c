use super::linalg::solve;
use super::Field;
use crate::error::{Error, Result};

/// Evaluates a polynomial given low-to-high coefficients.
pub(crate) fn horner<F: Field>(f: &F, coeffs: &[F::Elem], x: F::Elem) -> F::Elem {
    coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
}

/// Value at `x` of the Lagrange interpolant through `points`.
pub fn interpolate_at<F: Field>(f: &F, points: &[(F::Elem, F::Elem)], x: F::Elem) -> F::Elem {
    let mut acc = f.zero();
    for (i, &(ti, yi)) in points.iter().enumerate() {
        let mut num = f.one();
        let mut den = f.one();
        for (j, &(tj, _)) in points.iter().enumerate() {
            if i != j {
                num = f.mul(num, f.sub(x, tj));
                den = f.mul(den, f.sub(ti, tj));
            }
        }
        let basis = f.mul(num, f.inv(den).expect("interpolation nodes are distinct"));
        acc = f.add(acc, f.mul(yi, basis));
    }
    acc
}

/// Divides `num` by `den` (low-to-high coefficients), returning quotient and
/// remainder. `den` must have a nonzero leading coefficient.
fn poly_divmod<F: Field>(f: &F, num: &[F::Elem], den: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let dd = den.len() - 1;
    let lead_inv = f.inv(den[dd]).expect("nonzero leading coefficient");
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return (vec![f.zero()], rem);
    }
    let mut quot = vec![f.zero(); rem.len() - dd];
    for top in (dd..rem.len()).rev() {
        let c = f.mul(rem[top], lead_inv);
        quot[top - dd] = c;
        if f.is_zero(c) {
            continue;
        }
        for (i, &di) in den.iter().enumerate() {
            let idx = top - dd + i;
            rem[idx] = f.sub(rem[idx], f.mul(c, di));
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

/// Recovers the polynomial of degree at most `deg_bound` agreeing with all but
/// at most `e = floor((m - deg_bound - 1) / 2)` of the `m` points.
pub fn berlekamp_welch<F: Field>(
    f: &F,
    points: &[(F::Elem, F::Elem)],
    deg_bound: usize,
) -> Result<Vec<F::Elem>> {
    let m = points.len();
    if m < deg_bound + 1 {
        return Err(Error::invalid(format!(
            "{m} points cannot determine a degree-{deg_bound} polynomial"
        )));
    }
    for (i, &(ti, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|&(tj, _)| tj == ti) {
            return Err(Error::invalid("evaluation points must be distinct"));
        }
    }
    let e = (m - deg_bound - 1) / 2;
    let q_len = e + deg_bound + 1;

    // Unknowns: Q_0..Q_{e+d}, then E_0..E_{e-1} with E monic of degree e.
    // Q(t_i) - y_i * sum_j E_j t_i^j = y_i * t_i^e.
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for &(t, y) in points {
        let mut row = Vec::with_capacity(q_len + e);
        let mut pw = f.one();
        let mut powers = Vec::with_capacity(q_len);
        for _ in 0..q_len {
            powers.push(pw);
            pw = f.mul(pw, t);
        }
        row.extend_from_slice(&powers);
        row.extend(powers[..e].iter().map(|&tp| f.neg(f.mul(y, tp))));
        rows.push(row);
        rhs.push(f.mul(y, powers[e]));
    }
    let sol = solve(f, &rows, &rhs).ok_or(Error::DecodeFailure("error-locator system is inconsistent"))?;
    let q = &sol[..q_len];
    let mut locator = sol[q_len..].to_vec();
    locator.push(f.one());

    let (h, rem) = poly_divmod(f, q, &locator);
    if rem.iter().any(|&c| !f.is_zero(c)) {
        return Err(Error::DecodeFailure("error locator does not divide Q"));
    }
    let disagreements = points.iter().filter(|&&(t, y)| horner(f, &h, t) != y).count();
    if disagreements > e {
        return Err(Error::DecodeFailure("too many corrupted evaluations"));
    }
    Ok(h)
}

/// Berlekamp-Welch decoding followed by evaluation at zero.
pub fn berlekamp_welch_decode<F: Field>(
    f: &F,
    points: &[(F::Elem, F::Elem)],
    deg_bound: usize,
) -> Result<F::Elem> {
    let h = berlekamp_welch(f, points, deg_bound)?;
    Ok(h[0])
}
