use num_traits::Zero;

use crate::polyrat::BigRat;

/// Basis of the right null space of a dense rational matrix, by exact
/// Gauss–Jordan elimination. Each basis vector has a `1` in its free column.
pub fn nullspace(mut rows: Vec<Vec<BigRat>>, ncols: usize) -> Vec<Vec<BigRat>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRat::zero(); ncols];
            v[f] = BigRat::from_integer(1.into());
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][f].clone();
            }
            v
        })
        .collect()
}
