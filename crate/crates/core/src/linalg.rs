//! Exact Gauss-Jordan elimination over the rationals.

use num_traits::Zero;

use crate::error::Error;
use crate::rat::Rat;
use crate::sparse::SparseVec;

/// Reduced row echelon form of a set of sparse rows, with canonical pivot
/// order (smallest column first). Zero rows are dropped; the surviving rows
/// are returned sorted by pivot column, each with leading coefficient one.
pub fn rref(rows: Vec<SparseVec<usize>>) -> Vec<SparseVec<usize>> {
    let mut pending: Vec<SparseVec<usize>> = rows.into_iter().filter(|r| !r.is_zero()).collect();
    let mut done: Vec<SparseVec<usize>> = Vec::new();
    while !pending.is_empty() {
        // pick the row whose leading column is smallest
        let mut best = 0;
        for i in 1..pending.len() {
            if pending[i].leading().unwrap().0 < pending[best].leading().unwrap().0 {
                best = i;
            }
        }
        let row = pending.swap_remove(best);
        let (&pivot, lead) = row.leading().unwrap();
        let row = row.scale(&lead.clone().recip());
        for other in pending.iter_mut().chain(done.iter_mut()) {
            let c = other.coeff(&pivot);
            if !c.is_zero() {
                other.add_scaled(&row, &(-c));
            }
        }
        pending.retain(|r| !r.is_zero());
        done.push(row);
    }
    done.sort_by_key(|r| *r.leading().unwrap().0);
    done
}

/// Inverse of a dense symmetric matrix. Fails with `SingularMetric` when the
/// matrix is not of full rank.
pub fn invert_matrix(m: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>, Error> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { crate::rat::rat(1) } else { Rat::zero() }).collect())
        .collect();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::SingularMetric);
        };
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let t = &a[col][j] * &factor;
                a[r][j] = &a[r][j] - &t;
                let t = &inv[col][j] * &factor;
                inv[r][j] = &inv[r][j] - &t;
            }
        }
    }
    Ok(inv)
}

/// Exact rank of a dense matrix.
pub fn rank(m: &[Vec<Rat>]) -> usize {
    let rows: Vec<SparseVec<usize>> = m
        .iter()
        .map(|row| {
            SparseVec::from_terms(row.iter().enumerate().map(|(j, c)| (j, c.clone())))
        })
        .collect();
    rref(rows).len()
}

/// Expresses `v` in the span of RREF `basis` rows; `None` when `v` is
/// outside the span. Since the basis is reduced, the coordinate on each row
/// is just the coefficient of `v` at that row's pivot.
pub fn coordinates_in_rref(
    basis: &[SparseVec<usize>],
    v: &SparseVec<usize>,
) -> Option<Vec<Rat>> {
    let mut coords = Vec::with_capacity(basis.len());
    let mut rebuilt = SparseVec::new();
    for row in basis {
        let pivot = row.leading().expect("rref rows are nonzero").0;
        let c = v.coeff(pivot);
        rebuilt.add_scaled(row, &c);
        coords.push(c);
    }
    if &rebuilt == v {
        Some(coords)
    } else {
        None
    }
}
