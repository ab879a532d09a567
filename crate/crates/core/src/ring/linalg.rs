//! Dense linear algebra over any [`Ring`].
//!
//! Matrices are row-major `Vec<Vec<_>>`. Determinants are division free, so
//! they work over tensors and localized fractions; elimination routines
//! require a field.

use super::Ring;

pub type Matrix<E> = Vec<Vec<E>>;

/// Determinant by Laplace expansion along rows, memoised over column subsets.
///
/// Uses `n·2^n` ring multiplications and no division.
pub fn det<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    assert!(n <= 20, "determinant too large for subset expansion");
    let full = 1usize << n;
    let mut layer: Vec<Option<R::Elem>> = vec![None; full];
    layer[0] = Some(ring.one());
    for row in 0..n {
        let mut next: Vec<Option<R::Elem>> = vec![None; full];
        for (set, value) in layer.iter().enumerate() {
            let Some(value) = value else { continue };
            if ring.is_zero(value) {
                continue;
            }
            for col in 0..n {
                if set & (1 << col) != 0 || ring.is_zero(&m[row][col]) {
                    continue;
                }
                let above = (set >> (col + 1)).count_ones();
                let mut term = ring.mul(value, &m[row][col]);
                if above % 2 == 1 {
                    term = ring.neg(&term);
                }
                let slot = &mut next[set | (1 << col)];
                *slot = Some(match slot.take() {
                    Some(acc) => ring.add(&acc, &term),
                    None => term,
                });
            }
        }
        layer = next;
    }
    layer[full - 1].take().unwrap_or_else(|| ring.zero())
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect()
}

pub fn matmul<R: Ring>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> Matrix<R::Elem> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(ring.zero(), |acc, k| ring.add(&acc, &ring.mul(&row[k], &b[k][j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<R: Ring>(ring: &R, a: &[Vec<R::Elem>], v: &[R::Elem]) -> Vec<R::Elem> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y))))
        .collect()
}

pub fn transpose<E: Clone>(a: &[Vec<E>]) -> Matrix<E> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn trace<R: Ring>(ring: &R, a: &[Vec<R::Elem>]) -> R::Elem {
    (0..a.len()).fold(ring.zero(), |acc, i| ring.add(&acc, &a[i][i]))
}

pub fn matrices_equal<R: Ring>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(ra, rb)| ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| ring.equal(x, y)))
}

/// Solves `m · v = rhs` by Cramer's rule. Requires `det(m)` to be a unit.
pub fn cramer_solve<R: Ring>(ring: &R, m: &[Vec<R::Elem>], rhs: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let d = det(ring, m);
    if !ring.is_unit(&d) {
        return None;
    }
    let n = m.len();
    (0..n)
        .map(|k| {
            let mk: Matrix<R::Elem> = m
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut row = row.clone();
                    row[k] = rhs[i].clone();
                    row
                })
                .collect();
            ring.div_exact(&det(ring, &mk), &d)
        })
        .collect()
}

/// Reduced row echelon form over a field. Returns the reduced rows (zero rows
/// dropped) and the pivot column of each.
pub fn rref<R: Ring>(ring: &R, rows: &[Vec<R::Elem>]) -> (Matrix<R::Elem>, Vec<usize>) {
    let mut a: Matrix<R::Elem> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !ring.is_zero(&a[i][c])) else { continue };
        a.swap(r, p);
        let inv = ring.div_exact(&ring.one(), &a[r][c]).expect("rref needs a field");
        a[r] = a[r].iter().map(|x| ring.mul(x, &inv)).collect();
        for i in 0..a.len() {
            if i != r && !ring.is_zero(&a[i][c]) {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = ring.sub(x, &ring.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank<R: Ring>(ring: &R, rows: &[Vec<R::Elem>]) -> usize {
    rref(ring, rows).1.len()
}

/// Basis of `{ v : m · v = 0 }` over a field.
pub fn nullspace<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> Matrix<R::Elem> {
    let cols = m.first().map_or(0, Vec::len);
    let (red, pivots) = rref(ring, m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ring.zero(); cols];
            v[f] = ring.one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = ring.neg(&row[f]);
            }
            v
        })
        .collect()
}

/// One solution of `m · v = rhs` over a field, free variables set to zero.
pub fn solve_field<R: Ring>(ring: &R, m: &[Vec<R::Elem>], rhs: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let cols = m.first().map_or(0, Vec::len);
    let augmented: Matrix<R::Elem> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut row = row.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let (red, pivots) = rref(ring, &augmented);
    if pivots.contains(&cols) {
        return None;
    }
    let mut v = vec![ring.zero(); cols];
    for (row, &p) in red.iter().zip(&pivots) {
        v[p] = row[cols].clone();
    }
    Some(v)
}
