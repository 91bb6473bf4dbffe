//! Exact dense linear algebra over the rationals.

use num::Zero;

use crate::lattice::Vector;
use crate::rational::Rational;

/// Row-reduces `rows` (each of length `ncols`) in place to reduced row
/// echelon form and returns the pivot column of each nonzero row. Zero rows
/// are moved to the bottom.
pub fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for a in rows[r].iter_mut() {
            *a *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (a, b) in row.iter_mut().zip(&pivot_row) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let ncols = first.len();
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    rref(&mut rows, ncols).len()
}

/// Some solution `x` of `Σ_j x_j · columns[j] = b`, or `None` when the
/// system is inconsistent. Free variables are set to zero.
pub fn solve_columns(columns: &[Vector], b: &Vector, dim: usize) -> Option<Vector> {
    let nc = columns.len();
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|k| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[k].clone()).collect();
            row.push(b[k].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, nc + 1);
    if pivots.last() == Some(&nc) {
        return None;
    }
    let mut x = vec![Rational::zero(); nc];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][nc].clone();
    }
    Some(Vector::new(x))
}

/// Some solution of `A x = b` with `A` given by rows, or `None`.
pub fn solve_rows(a: &[Vector], b: &[Rational], ncols: usize) -> Option<Vector> {
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.entries().to_vec();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][ncols].clone();
    }
    Some(Vector::new(x))
}

/// Unique solution of the square system `A x = b`, or `None` when `A` is
/// singular.
pub fn solve_square(a: &[Vector], b: &[Rational]) -> Option<Vector> {
    let n = a.len();
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.entries().to_vec();
            row.push(bi.clone());
            row
        })
        .collect();
    // Forward elimination with back substitution; cheaper than full RREF.
    for c in 0..n {
        let p = (c..n).find(|&i| !rows[i][c].is_zero())?;
        rows.swap(c, p);
        for i in c + 1..n {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &rows[c][c];
            let (top, bottom) = rows.split_at_mut(i);
            let pivot_row = &top[c];
            for (a, b) in bottom[0][c..].iter_mut().zip(&pivot_row[c..]) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
    }
    let mut x = vec![Rational::zero(); n];
    for c in (0..n).rev() {
        let mut acc = rows[c][n].clone();
        for j in c + 1..n {
            if !rows[c][j].is_zero() {
                acc -= &rows[c][j] * &x[j];
            }
        }
        x[c] = acc / &rows[c][c];
    }
    Some(Vector::new(x))
}

/// A basis of `{u ∈ Q^ncols : row · u = 0 for every row}`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut u = vec![Rational::zero(); ncols];
            u[f] = Rational::from_integer(1.into());
            for (i, &p) in pivots.iter().enumerate() {
                u[p] = -m[i][f].clone();
            }
            Vector::new(u)
        })
        .collect()
}

/// A left inverse `L` (as rows) of the matrix whose columns are `columns`,
/// i.e. `L · M = I`. Returns `None` when the columns are dependent.
pub fn left_inverse(columns: &[Vector], dim: usize) -> Option<Vec<Vector>> {
    let k = columns.len();
    // Gram matrix G = Mᵀ M; L = G⁻¹ Mᵀ.
    let gram: Vec<Vector> = (0..k)
        .map(|i| (0..k).map(|j| columns[i].dot(&columns[j])).collect())
        .collect();
    let mut rows = Vec::with_capacity(k);
    let mut inv_cols = Vec::with_capacity(k);
    for j in 0..k {
        let e: Vec<Rational> = (0..k)
            .map(|i| {
                if i == j {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            })
            .collect();
        inv_cols.push(solve_square(&gram, &e)?);
    }
    for i in 0..k {
        // Row i of G⁻¹ Mᵀ: Σ_j (G⁻¹)_{ij} · columns[j].
        let coeffs: Vec<Rational> = (0..k).map(|j| inv_cols[j][i].clone()).collect();
        rows.push(crate::lattice::combine(dim, columns, &coeffs));
    }
    Some(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    #[test]
    fn rank_and_nullspace() {
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]), 1);
        assert_eq!(rank(&[v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 2])]), 2);
        let ns = nullspace(&[v(&[1, 1, 0])], 3);
        assert_eq!(ns.len(), 2);
        for u in &ns {
            assert_eq!(v(&[1, 1, 0]).dot(u), int(0));
        }
        assert_eq!(nullspace(&[], 2).len(), 2);
    }

    #[test]
    fn square_solve() {
        let a = [v(&[2, 1]), v(&[1, 3])];
        let x = solve_square(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, Vector::new(vec![ratio(4, 5), ratio(7, 5)]));
        assert!(solve_square(&[v(&[1, 2]), v(&[2, 4])], &[int(1), int(2)]).is_none());
        assert!(solve_square(&[v(&[0, 1]), v(&[1, 0])], &[int(1), int(2)]).is_some());
    }

    #[test]
    fn column_solve_and_left_inverse() {
        let cols = [v(&[1, 0, 1]), v(&[0, 1, 1])];
        assert_eq!(solve_columns(&cols, &v(&[2, 3, 5]), 3), Some(v(&[2, 3])));
        assert_eq!(solve_columns(&cols, &v(&[2, 3, 4]), 3), None);
        let l = left_inverse(&cols, 3).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { int(1) } else { int(0) };
                assert_eq!(l[i].dot(&cols[j]), want);
            }
        }
    }
}
