//! Exact integer linear algebra on small dense matrices.

use num_integer::Integer;

use crate::error::{Error, Result};

fn checked(x: Option<i128>) -> i128 {
    x.expect("integer overflow in exact elimination")
}

/// Rank over ℚ via fraction-free (Bareiss) elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> =
        rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..cols {
                let v = checked(m[r][c].checked_mul(m[i][j]))
                    - checked(m[i][c].checked_mul(m[r][j]));
                m[i][j] = v / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// A ℤ-basis of the integer kernel `{x ∈ ℤ^k : A x = 0}` of the `m × k`
/// matrix `a`, obtained from a column Hermite reduction `A U = H`.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = a.len();
    let k = if m == 0 { 0 } else { a[0].len() };
    // columns of A and U, as column vectors
    let mut acol: Vec<Vec<i128>> = (0..k).map(|j| (0..m).map(|i| a[i][j] as i128).collect()).collect();
    let mut ucol: Vec<Vec<i128>> =
        (0..k).map(|j| (0..k).map(|i| (i == j) as i128).collect()).collect();

    let mut pivot = 0;
    for row in 0..m {
        if pivot == k {
            break;
        }
        // Euclid across columns pivot..k on this row
        loop {
            let nz: Vec<usize> = (pivot..k).filter(|&j| acol[j][row] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&j| acol[j][row].abs()).unwrap();
            acol.swap(pivot, best);
            ucol.swap(pivot, best);
            let mut done = true;
            for j in pivot + 1..k {
                let q = Integer::div_floor(&acol[j][row], &acol[pivot][row]);
                if q != 0 {
                    for i in 0..m {
                        acol[j][i] -= checked(q.checked_mul(acol[pivot][i]));
                    }
                    for i in 0..k {
                        ucol[j][i] -= checked(q.checked_mul(ucol[pivot][i]));
                    }
                }
                if acol[j][row] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if acol[pivot][row] != 0 {
            pivot += 1;
        }
    }
    ucol[pivot..]
        .iter()
        .map(|c| {
            let g = c.iter().fold(0i128, |g, &x| g.gcd(&x));
            debug_assert!(g == 1 || g == 0);
            c.iter().map(|&x| i64::try_from(x).expect("kernel entry overflow")).collect()
        })
        .collect()
}

/// Row-reduces a lattice basis (rows) into echelon form along `col_order`
/// using unimodular row operations. Returns the pivot columns.
fn row_echelon(rows: &mut [Vec<i128>], col_order: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in col_order {
        if r == rows.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                let q = Integer::div_floor(&rows[i][c], &rows[r][c]);
                if q != 0 {
                    let (head, tail) = rows.split_at_mut(i);
                    for (x, y) in tail[0].iter_mut().zip(head[r].iter()) {
                        *x -= checked(q.checked_mul(*y));
                    }
                }
                if rows[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c] != 0 {
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// Searches for coordinates `τ` on which some basis of the lattice spanned by
/// `basis` is the identity matrix, and returns that basis with `τ`.
///
/// Such a basis makes the projection onto `τ` an isomorphism onto `ℤ^τ`.
pub fn identity_on_free_coordinates(basis: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, Vec<usize>)> {
    if basis.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let k = basis[0].len();
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    for attempt in 0..200 {
        let mut order: Vec<usize> = (0..k).collect();
        if attempt == 1 {
            order.reverse();
        } else if attempt > 1 {
            for i in (1..k).rev() {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                order.swap(i, (seed % (i as u64 + 1)) as usize);
            }
        }
        let mut rows: Vec<Vec<i128>> =
            basis.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let pivots = row_echelon(&mut rows, &order);
        if pivots.len() != rows.len() || pivots.iter().enumerate().any(|(i, &c)| rows[i][c].abs() != 1) {
            continue;
        }
        for i in 0..rows.len() {
            if rows[i][pivots[i]] < 0 {
                rows[i].iter_mut().for_each(|x| *x = -*x);
            }
        }
        // back-substitute to clear the pivot columns
        for i in (0..rows.len()).rev() {
            for h in 0..rows.len() {
                if h == i {
                    continue;
                }
                let q = rows[h][pivots[i]];
                if q != 0 {
                    let src = rows[i].clone();
                    for (x, y) in rows[h].iter_mut().zip(src) {
                        *x -= checked(q.checked_mul(y));
                    }
                }
            }
        }
        let out = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("overflow")).collect())
            .collect();
        return Ok((out, pivots));
    }
    Err(Error::Internal("no unimodular coordinate projection found for the lattice".into()))
}
