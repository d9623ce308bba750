//! Gaussian elimination over a [`Field`].

use super::{Field, FieldElement};

/// Row-reduces `[rows | rhs]` in place. Returns the pivot columns; the
/// augmented column (index `ncols`) is a pivot iff the system is inconsistent.
fn reduce(f: &Field, m: &mut [Vec<FieldElement>], ncols: usize) -> Vec<usize> {
    let width = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut().skip(c) {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !f.is_zero(p) {
                    *x = f.sub(x, &f.mul(&factor, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if c >= ncols {
            break;
        }
    }
    pivots
}

/// A nonzero solution of `rows * c = 0`, if one exists.
pub(crate) fn kernel_vector(
    f: &Field,
    rows: &[Vec<FieldElement>],
    ncols: usize,
) -> Option<Vec<FieldElement>> {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let pivots = reduce(f, &mut m, ncols);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut c = vec![f.zero(); ncols];
    c[free] = f.one();
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = f.neg(&m[r][free]);
    }
    Some(c)
}

/// Any solution of `rows * x = rhs`, with free variables set to zero.
pub(crate) fn solve(
    f: &Field,
    rows: &[Vec<FieldElement>],
    ncols: usize,
    rhs: &[FieldElement],
) -> Option<Vec<FieldElement>> {
    let mut m: Vec<Vec<FieldElement>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut row = row.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = reduce(f, &mut m, ncols);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][ncols].clone();
    }
    Some(x)
}

/// Determinant by elimination with first-nonzero pivoting.
pub(crate) fn determinant(f: &Field, rows: &[Vec<FieldElement>]) -> FieldElement {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let n = m.len();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&m[i][c])) else {
            return f.zero();
        };
        if p != c {
            m.swap(p, c);
            det = f.neg(&det);
        }
        det = f.mul(&det, &m[c][c]);
        let inv = f.inv(&m[c][c]).expect("pivot is nonzero");
        for i in c + 1..n {
            if f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = f.mul(&m[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &m[c][j]);
                m[i][j] = f.sub(&m[i][j], &t);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve_over_gf5() {
        let f: Field = "GF(5)".parse().unwrap();
        let e = |n| f.from_int(n);
        let rows = vec![vec![e(1), e(2), e(3)], vec![e(2), e(4), e(2)]];
        let k = kernel_vector(&f, &rows, 3).unwrap();
        for row in &rows {
            let dot = f.sum(&row.iter().zip(&k).map(|(a, b)| f.mul(a, b)).collect::<Vec<_>>());
            assert!(f.is_zero(&dot));
        }
        assert!(k.iter().any(|x| !f.is_zero(x)));
        let x = solve(&f, &rows, 3, &[e(1), e(0)]).unwrap();
        let lhs: Vec<_> = rows
            .iter()
            .map(|row| f.sum(&row.iter().zip(&x).map(|(a, b)| f.mul(a, b)).collect::<Vec<_>>()))
            .collect();
        assert_eq!(lhs, vec![e(1), e(0)]);
        let singular = vec![vec![e(1), e(1)], vec![e(2), e(2)]];
        assert!(solve(&f, &singular, 2, &[e(1), e(1)]).is_none());
        let full = vec![vec![e(1), e(0)], vec![e(0), e(1)]];
        assert!(kernel_vector(&f, &full, 2).is_none());
        assert_eq!(determinant(&f, &full), e(1));
        assert_eq!(determinant(&f, &singular), e(0));
        assert_eq!(determinant(&f, &[vec![e(0), e(2)], vec![e(3), e(1)]]), e(4));
    }
}
