//! Dense Gaussian elimination over an arbitrary field.

use super::Field;

pub(crate) type Matrix<E> = Vec<Vec<E>>;

/// Reduces `a` in place to reduced row echelon form and returns the pivot
/// columns.
pub(crate) fn rref<F: Field>(f: &F, a: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(a[i][c]) {
                let factor = a[i][c];
                for j in c..cols {
                    let d = f.mul(factor, a[r][j]);
                    a[i][j] = f.sub(a[i][j], d);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn invert<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.len();
    let mut aug: Matrix<F::Elem> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub(crate) fn mat_vec<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
        })
        .collect()
}

#[cfg(test)]
pub(crate) fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(f.zero(), |acc, l| f.add(acc, f.mul(row[l], b[l][j]))))
                .collect()
        })
        .collect()
}

/// Solves `a x = b`, returning one solution (free variables set to zero) or
/// `None` when the system is inconsistent.
pub(crate) fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix<F::Elem> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols];
    }
    Some(x)
}
