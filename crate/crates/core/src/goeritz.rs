//! The quadratic form on the cycle space of a black graph, with exact inverse
//! and the dual norm `|α|² = a Q⁻¹ aᵀ`.

use num_rational::Ratio;
use thiserror::Error;

use crate::blackgraph::{circuit_matrix, spanning_tree, BlackGraph, CircuitMatrix};
use crate::linalg::{det_and_adjugate, leading_minors, IntMatrix};

pub type Rational = Ratio<i128>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("matrix is not square and symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
    #[error("form is not negative definite")]
    NotNegativeDefinite,
}

/// Symmetric negative-definite integer form with its determinant and
/// adjugate. `Q⁻¹ = adj / det`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoeritzForm {
    q: IntMatrix,
    det: i128,
    adj: IntMatrix,
}

impl GoeritzForm {
    pub fn from_matrix(q: IntMatrix) -> Result<Self, FormError> {
        if !q.is_symmetric() {
            return Err(FormError::NotSymmetric);
        }
        if !is_negative_definite(&q) {
            return Err(FormError::NotNegativeDefinite);
        }
        let (det, adj) = det_and_adjugate(&q).ok_or(FormError::Singular)?;
        Ok(Self { q, det, adj })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, FormError> {
        Self::from_matrix(IntMatrix::from_rows(rows).ok_or(FormError::NotSymmetric)?)
    }

    /// Rank `b` of the cycle lattice.
    pub fn rank(&self) -> usize {
        self.q.nrows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.q
    }

    /// Signed determinant; its sign is `(-1)^b`.
    pub fn det(&self) -> i128 {
        self.det
    }

    pub fn det_abs(&self) -> i128 {
        self.det.abs()
    }

    pub fn adjugate(&self) -> &IntMatrix {
        &self.adj
    }

    pub fn inverse(&self) -> Vec<Vec<Rational>> {
        let b = self.rank();
        (0..b)
            .map(|i| (0..b).map(|j| Rational::new(self.adj[(i, j)] as i128, self.det)).collect())
            .collect()
    }

    /// `Q(v, v)`.
    pub fn eval(&self, v: &[i64]) -> i128 {
        self.q.quadratic_form(v)
    }

    /// The row vector `q(v) = (Q v)ᵀ`.
    pub fn q_of(&self, v: &[i64]) -> Vec<i64> {
        self.q.mul_vec(v)
    }
}

/// `Q = -N Nᵀ`: the signed count of shared edges of two fundamental circuits.
pub fn gram_matrix(n: &CircuitMatrix) -> Result<GoeritzForm, FormError> {
    let q = (&n.rows * &n.rows.transpose()).neg();
    let (det, adj) = det_and_adjugate(&q).ok_or(FormError::Singular)?;
    debug_assert!(is_negative_definite(&q));
    Ok(GoeritzForm { q, det, adj })
}

/// Form of a graph using the breadth-first spanning tree.
pub fn goeritz_form(g: &BlackGraph) -> GoeritzForm {
    gram_matrix(&circuit_matrix(g, &spanning_tree(g))).expect("fundamental circuits are independent")
}

pub fn det_and_inverse(q: &IntMatrix) -> Result<(i128, Vec<Vec<Rational>>), FormError> {
    if !q.is_square() {
        return Err(FormError::NotSymmetric);
    }
    let (det, adj) = det_and_adjugate(q).ok_or(FormError::Singular)?;
    let n = q.nrows();
    let inv = (0..n).map(|i| (0..n).map(|j| Rational::new(adj[(i, j)] as i128, det)).collect()).collect();
    Ok((det, inv))
}

/// Leading principal minors alternate in sign, starting negative.
pub fn is_negative_definite(q: &IntMatrix) -> bool {
    q.is_symmetric()
        && leading_minors(q)
            .iter()
            .enumerate()
            .skip(1)
            .all(|(k, &m)| if k % 2 == 1 { m < 0 } else { m > 0 })
}

/// `α Q⁻¹ αᵀ`, which is `max_v α(v)² / Q(v, v)` over real `v ≠ 0`.
pub fn dual_norm_sq(f: &GoeritzForm, alpha: &[i64]) -> Rational {
    Rational::new(f.adj.quadratic_form(alpha), f.det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackgraph::wheel_graph;

    fn form(rows: &[&[i64]]) -> GoeritzForm {
        GoeritzForm::from_rows(rows).unwrap()
    }

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn wheel_gram_matrices() {
        let f = goeritz_form(&wheel_graph(&[2, 4]).unwrap());
        assert_eq!(f.matrix().to_rows(), vec![vec![-4, 2], vec![2, -6]]);

        let f = goeritz_form(&wheel_graph(&[1, 1, 1]).unwrap());
        assert_eq!(f.matrix().to_rows(), vec![vec![-3, 1, 1], vec![1, -3, 1], vec![1, 1, -3]]);

        let f = goeritz_form(&wheel_graph(&[3, 5, 7]).unwrap());
        assert_eq!(f.matrix().to_rows(), vec![vec![-5, 1, 1], vec![1, -7, 1], vec![1, 1, -9]]);

        let a = [1i64, 3, 2, 1];
        let q: Vec<u32> = a.iter().map(|&x| 2 * x as u32).collect();
        let f = goeritz_form(&wheel_graph(&q).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j {
                    -2 * a[i] - 2
                } else if (i + 1) % 4 == j || (j + 1) % 4 == i {
                    1
                } else {
                    0
                };
                assert_eq!(f.matrix()[(i, j)], want, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn determinants_and_inverses() {
        let (d, inv) = det_and_inverse(&IntMatrix::from_rows(&[[-2]]).unwrap()).unwrap();
        assert_eq!(d, -2);
        assert_eq!(inv, vec![vec![r(-1, 2)]]);
        assert_eq!(form(&[&[-4, 2], &[2, -6]]).det(), 20);
        assert_eq!(form(&[&[-3, 1, 1], &[1, -3, 1], &[1, 1, -3]]).det(), -16);
        assert_eq!(
            det_and_inverse(&IntMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap()),
            Err(FormError::Singular)
        );
    }

    #[test]
    fn definiteness() {
        assert!(is_negative_definite(&IntMatrix::from_rows(&[[-1]]).unwrap()));
        assert!(!is_negative_definite(&IntMatrix::from_rows(&[[1]]).unwrap()));
        assert!(is_negative_definite(&IntMatrix::from_rows(&[[-4, 2], [2, -6]]).unwrap()));
        assert!(!is_negative_definite(&IntMatrix::from_rows(&[[-1, 2], [2, -1]]).unwrap()));
        assert_eq!(GoeritzForm::from_rows(&[[1]]), Err(FormError::NotNegativeDefinite));
        assert_eq!(GoeritzForm::from_rows(&[[-1, 0], [1, -1]]), Err(FormError::NotSymmetric));
    }

    #[test]
    fn dual_norms() {
        let f = form(&[&[-4, 2], &[2, -6]]);
        assert_eq!(dual_norm_sq(&f, &[0, 0]), r(0, 1));
        assert_eq!(dual_norm_sq(&f, &[-4, 2]), r(-4, 1));
        let f = form(&[&[-3, 1, 1], &[1, -3, 1], &[1, 1, -3]]);
        assert_eq!(dual_norm_sq(&f, &[1, -1, 1]), r(-1, 1));
        let inv = f.inverse();
        let x: Vec<Rational> = (0..3).map(|i| inv[i][0] - inv[i][1] + inv[i][2]).collect();
        assert_eq!(x, vec![r(-1, 2), r(0, 1), r(-1, 2)]);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let f = form(&[&[-5, 1, 1], &[1, -7, 1], &[1, 1, -9]]);
        let inv = f.inverse();
        for i in 0..3 {
            for j in 0..3 {
                let s: Rational = (0..3).map(|k| Rational::from(f.matrix()[(i, k)] as i128) * inv[k][j]).sum();
                assert_eq!(s, Rational::from(i128::from(i == j)));
            }
        }
    }
}
