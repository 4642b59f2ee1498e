//! Dense integer matrices and the exact routines built on them: fraction-free
//! determinants and adjugates, leading and bordered minors, and Smith normal
//! form with retained unimodular transforms.
//!
//! Entries are stored as `i64`; every elimination runs on an `i128` working
//! copy so intermediate minors of desk-scale forms cannot overflow.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![0; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows. Returns `None` when the rows are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Option<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != ncols {
                return None;
            }
            data.extend_from_slice(r);
        }
        Some(Self { nrows, ncols, data })
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.nrows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)])
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.nrows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.nrows.min(self.ncols)).map(|i| self[(i, i)]).collect()
    }

    pub fn neg(&self) -> Self {
        Self { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.ncols, "dimension mismatch");
        (0..self.nrows)
            .map(|i| {
                let s: i128 = self.row(i).iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
                narrow(s)
            })
            .collect()
    }

    /// `v^T M v` for a square matrix.
    pub fn quadratic_form(&self, v: &[i64]) -> i128 {
        assert!(self.is_square() && v.len() == self.ncols, "dimension mismatch");
        let mut acc = 0i128;
        for i in 0..self.nrows {
            let mut s = 0i128;
            for j in 0..self.ncols {
                s += self[(i, j)] as i128 * v[j] as i128;
            }
            acc += v[i] as i128 * s;
        }
        acc
    }

    /// Principal submatrix on the given index set, in the given order.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    fn to_wide(&self) -> Vec<Vec<i128>> {
        (0..self.nrows).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect()
    }

    fn from_wide(rows: &[Vec<i128>], ncols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = narrow(x);
            }
        }
        m
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer entry exceeds 64 bits")
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[i * self.ncols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[i * self.ncols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch");
        IntMatrix::from_fn(self.nrows, rhs.ncols, |i, j| {
            narrow((0..self.ncols).map(|k| self[(i, k)] as i128 * rhs[(k, j)] as i128).sum())
        })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.nrows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Determinant by Bareiss fraction-free elimination. The empty matrix has
/// determinant 1.
pub fn determinant(m: &IntMatrix) -> i128 {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.nrows();
    let mut a = m.to_wide();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                debug_assert_eq!(num % prev, 0);
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * prev
}

/// Determinant and adjugate by fraction-free Gauss–Jordan elimination on
/// `[M | I]`. Returns `None` when `M` is singular.
///
/// Every row operation divides exactly by the previous pivot, so the
/// right-hand block ends as `d * M^{-1}` where `d` is the determinant of the
/// row-permuted matrix.
pub fn det_and_adjugate(m: &IntMatrix) -> Option<(i128, IntMatrix)> {
    assert!(m.is_square(), "adjugate of a non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return Some((1, IntMatrix::zeros(0, 0)));
    }
    let mut a: Vec<Vec<i128>> = m
        .to_wide()
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..n).map(|j| i128::from(i == j)));
            r
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let p = (k..n).find(|&i| a[i][k] != 0)?;
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let pivot_row = a[k].clone();
        let piv = pivot_row[k];
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k];
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let num = piv * row[j] - factor * pivot_row[j];
                debug_assert_eq!(num % prev, 0, "fraction-free step was not exact");
                row[j] = num / prev;
            }
            row[k] = 0;
        }
        prev = piv;
    }
    // Each later step rescales earlier pivot rows by p_new / p_old, so every
    // diagonal entry telescopes to the final pivot.
    for (k, row) in a.iter().enumerate() {
        debug_assert_eq!(row[k], prev);
    }
    let adj: Vec<Vec<i128>> = a.iter().map(|r| r[n..].iter().map(|&x| sign * x).collect()).collect();
    Some((sign * prev, IntMatrix::from_wide(&adj, n)))
}

/// Leading principal minors `M_0 = 1, M_1, ..., M_n`.
pub fn leading_minors(m: &IntMatrix) -> Vec<i128> {
    assert!(m.is_square());
    (0..=m.nrows())
        .map(|k| determinant(&m.principal(&(0..k).collect::<Vec<_>>())))
        .collect()
}

/// Bordered minors of the leading `k x k` block: entry `(i, j)` is the
/// determinant of `M` restricted to rows `{0..k, k+i}` and columns
/// `{0..k, k+j}`. By Sylvester's identity this equals `M_k` times the Schur
/// complement of the leading block.
pub fn bordered_minors(m: &IntMatrix, k: usize) -> Vec<Vec<i128>> {
    let n = m.nrows();
    let lead: Vec<usize> = (0..k).collect();
    (k..n)
        .map(|r| {
            (k..n)
                .map(|c| {
                    let rows: Vec<usize> = lead.iter().copied().chain([r]).collect();
                    let cols: Vec<usize> = lead.iter().copied().chain([c]).collect();
                    let sub = IntMatrix::from_fn(k + 1, k + 1, |i, j| m[(rows[i], cols[j])]);
                    determinant(&sub)
                })
                .collect()
        })
        .collect()
}

/// Smith normal form `left * A * right = diag(d_1, ..., d_r, 0, ...)` with
/// `d_1 | d_2 | ...`, all `d_i >= 0`. `left_inv` is the inverse of `left`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<i64>,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
}

struct SmithWork {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    uinv: Vec<Vec<i128>>,
    w: Vec<Vec<i128>>,
}

impl SmithWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for r in self.uinv.iter_mut() {
            r.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.w.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(src) {
                *x += c * y;
            }
        }
        for r in self.uinv.iter_mut() {
            r[j] -= c * r[i];
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        for r in self.a.iter_mut().chain(self.w.iter_mut()) {
            r[i] += c * r[j];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -*x;
        }
        for r in self.uinv.iter_mut() {
            r[i] = -r[i];
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (nr, nc) = (m.nrows(), m.ncols());
    let ident = |n: usize| -> Vec<Vec<i128>> {
        (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
    };
    let mut s = SmithWork { a: m.to_wide(), u: ident(nr), uinv: ident(nr), w: ident(nc) };

    let mut t = 0;
    while t < nr.min(nc) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    let x = s.a[i][j];
                    if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < s.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                t = nr.min(nc);
                break;
            };
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            let piv = s.a[t][t];
            let mut dirty = false;
            for i in t + 1..nr {
                let q = s.a[i][t] / piv;
                if q != 0 {
                    s.add_row(i, t, -q);
                }
                dirty |= s.a[i][t] != 0;
            }
            for j in t + 1..nc {
                let q = s.a[t][j] / piv;
                if q != 0 {
                    s.add_col(j, t, -q);
                }
                dirty |= s.a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad_row = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| s.a[i][j] % piv != 0));
            if let Some(i) = bad_row {
                s.add_row(t, i, 1);
                continue;
            }
            if piv < 0 {
                s.negate_row(t);
            }
            t += 1;
            break;
        }
    }

    SmithForm {
        diagonal: (0..nr.min(nc)).map(|i| narrow(s.a[i][i])).collect(),
        left: IntMatrix::from_wide(&s.u, nr),
        left_inv: IntMatrix::from_wide(&s.uinv, nr),
        right: IntMatrix::from_wide(&s.w, nc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    // Laplace expansion; independent of the elimination code paths.
    fn cofactor_det(m: &IntMatrix) -> i128 {
        let n = m.nrows();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                    m[(r + 1, if c < j { c } else { c + 1 })]
                });
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[(0, j)] as i128 * cofactor_det(&minor)
            })
            .sum()
    }

    fn cofactor_adj(m: &IntMatrix) -> IntMatrix {
        let n = m.nrows();
        IntMatrix::from_fn(n, n, |i, j| {
            // adj[i][j] = (-1)^{i+j} det(M without row j, col i)
            let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                m[(if r < j { r } else { r + 1 }, if c < i { c } else { c + 1 })]
            });
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            (s * cofactor_det(&minor)) as i64
        })
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&mat(&[&[-2]])), -2);
        assert_eq!(determinant(&mat(&[&[-4, 2], &[2, -6]])), 20);
        assert_eq!(determinant(&mat(&[&[-3, 1, 1], &[1, -3, 1], &[1, 1, -3]])), -16);
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)), 1);
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), 0);
    }

    #[test]
    fn adjugate_needs_pivoting() {
        let m = mat(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        let (det, adj) = det_and_adjugate(&m).unwrap();
        assert_eq!(det, cofactor_det(&m));
        assert_eq!(adj, cofactor_adj(&m));
        assert!(det_and_adjugate(&mat(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn smith_of_case_one_form() {
        let s = smith_normal_form(&mat(&[&[-4, 2], &[2, -6]]));
        assert_eq!(s.diagonal, vec![2, 10]);
    }

    #[test]
    fn smith_reference_matrix() {
        let m = mat(&[&[-6, 111, -36, 6], &[5, -672, 210, 74], &[0, -255, 81, 24], &[-7, 255, -81, -10]]);
        assert_eq!(smith_normal_form(&m).diagonal, vec![1, 3, 21, 0]);
    }

    fn square(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-6i64..=6, n * n)
            .prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| v[i * n + j]))
    }

    proptest! {
        #[test]
        fn elimination_agrees_with_cofactors(m in (1usize..=5).prop_flat_map(square)) {
            let det = cofactor_det(&m);
            prop_assert_eq!(determinant(&m), det);
            match det_and_adjugate(&m) {
                Some((d, adj)) => {
                    prop_assert_eq!(d, det);
                    prop_assert_eq!(adj, cofactor_adj(&m));
                }
                None => prop_assert_eq!(det, 0),
            }
        }

        #[test]
        fn smith_transforms_are_consistent(m in (1usize..=4).prop_flat_map(square)) {
            let s = smith_normal_form(&m);
            let n = m.nrows();
            let d = &(&s.left * &m) * &s.right;
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { s.diagonal[i] } else { 0 };
                    prop_assert_eq!(d[(i, j)], want);
                }
            }
            prop_assert_eq!(&s.left * &s.left_inv, IntMatrix::identity(n));
            for w in s.diagonal.windows(2) {
                prop_assert!(w[0] >= 0 && w[1] >= 0);
                if w[0] != 0 { prop_assert_eq!(w[1] % w[0], 0); } else { prop_assert_eq!(w[1], 0); }
            }
            let prod: i128 = s.diagonal.iter().map(|&x| x as i128).product();
            prop_assert_eq!(prod, cofactor_det(&m).abs());
        }
    }
}
