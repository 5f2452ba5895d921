use super::{PlumbedTree, PlumbingError};
use crate::arith::Rational;

/// Symmetric integer form `e_v . e_w` of a plumbing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    matrix: Vec<Vec<i64>>,
    det: i128,
}

impl IntersectionForm {
    pub fn from_tree(tree: &PlumbedTree) -> Result<Self, PlumbingError> {
        let n = tree.len();
        let mut matrix = vec![vec![0i64; n]; n];
        for (v, &w) in tree.weights().iter().enumerate() {
            matrix[v][v] = w;
        }
        for &(a, b) in tree.edges() {
            matrix[a][b] = 1;
            matrix[b][a] = 1;
        }
        Self::from_matrix(matrix)
    }

    /// Accepts any symmetric matrix whose off-diagonal support is a forest.
    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Result<Self, PlumbingError> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|row| row.len() != n) {
            return Err(PlumbingError::DimensionMismatch);
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(PlumbingError::NotSymmetric);
                }
            }
        }
        let form = Self { matrix, det: 0 };
        if !form.support_is_forest() {
            return Err(PlumbingError::NotATree);
        }
        let det = determinant(&form.matrix)?;
        if det == 0 {
            return Err(PlumbingError::SingularForm);
        }
        Ok(Self { det, ..form })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    pub fn weights(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.matrix[i][i]).collect()
    }

    /// Off-diagonal nonzero pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.matrix[i][j] != 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn support_is_forest(&self) -> bool {
        // union-find over the off-diagonal support
        let n = self.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, j) in self.edges() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// Leading principal minors, in order, by fraction-free elimination.
    /// Stops early (returning the minors so far plus a zero) when one vanishes.
    pub fn leading_minors(&self) -> Vec<i128> {
        let n = self.dim();
        let mut a: Vec<Vec<i128>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut minors = Vec::with_capacity(n);
        let mut prev = 1i128;
        for k in 0..n {
            let pivot = a[k][k];
            minors.push(pivot);
            if pivot == 0 {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = pivot;
        }
        minors
    }

    /// `(-1)^k * D_k > 0` for every leading principal minor `D_k`.
    pub fn is_negative_definite(&self) -> bool {
        let minors = self.leading_minors();
        minors.len() == self.dim()
            && minors
                .iter()
                .enumerate()
                .all(|(k, &d)| if k % 2 == 0 { d < 0 } else { d > 0 })
    }

    /// Solves `Q y = b` exactly.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>, PlumbingError> {
        let n = self.dim();
        if b.len() != n {
            return Err(PlumbingError::DimensionMismatch);
        }
        let mut a: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .zip(b)
            .map(|(row, &rhs)| {
                let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from(x)).collect();
                r.push(rhs);
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(PlumbingError::SingularForm)?;
            a.swap(col, pivot);
            let inv = a[col][col]
                .recip()
                .map_err(|_| PlumbingError::SingularForm)?;
            for x in a[col].iter_mut().skip(col) {
                *x = *x * inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col];
                    for c in col..=n {
                        let sub = factor * a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|r| r[n]).collect())
    }

    /// `Q^{-1}` as rows of exact rationals.
    pub fn inverse(&self) -> Result<Vec<Vec<Rational>>, PlumbingError> {
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<Rational> = (0..n)
                .map(|i| {
                    if i == j {
                        Rational::ONE
                    } else {
                        Rational::ZERO
                    }
                })
                .collect();
            cols.push(self.solve(&e)?);
        }
        Ok((0..n)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect())
    }

    /// `det(Q) * Q^{-1}`, an integer matrix.
    pub fn adjugate(&self) -> Result<Vec<Vec<i128>>, PlumbingError> {
        let det = Rational::from(self.det);
        self.inverse()?
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| {
                        let y = x * det;
                        if y.is_integer() {
                            Ok(y.numer())
                        } else {
                            Err(PlumbingError::Overflow)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `K^T Q^{-1} K`.
    pub fn char_square(&self, k: &[i64]) -> Result<Rational, PlumbingError> {
        let rhs: Vec<Rational> = k.iter().map(|&x| Rational::from(x)).collect();
        let y = self.solve(&rhs)?;
        Ok(rhs.iter().zip(&y).map(|(a, b)| *a * *b).sum())
    }

    /// `K_v = m(v) (mod 2)` for every vertex.
    pub fn is_characteristic(&self, k: &[i64]) -> bool {
        k.len() == self.dim()
            && k.iter()
                .enumerate()
                .all(|(v, &x)| (x - self.matrix[v][v]).rem_euclid(2) == 0)
    }
}

/// Exact determinant by Bareiss elimination with row pivoting.
pub fn determinant(matrix: &[Vec<i64>]) -> Result<i128, PlumbingError> {
    let n = matrix.len();
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return Ok(0);
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .ok_or(PlumbingError::Overflow)?;
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ContinuedFraction;

    fn chain(w: &[i64]) -> IntersectionForm {
        IntersectionForm::from_tree(&PlumbedTree::linear(
            &ContinuedFraction::new(w.to_vec()).unwrap(),
        ))
        .unwrap()
    }

    /// Cofactor expansion along the first row; exponential, only for tiny matrices.
    fn cofactor_det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0] as i128;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(chain(&[-2]).det(), -2);
        let q = chain(&[-3, -2, -2]);
        assert_eq!(q.det(), -7);
        assert_eq!(q.matrix()[0], vec![-3, 1, 0]);
        let star = PlumbedTree::new(
            &[(0, -2), (1, -2), (2, -2), (3, -2)],
            &[(0, 1), (0, 2), (0, 3)],
        )
        .unwrap();
        let q = IntersectionForm::from_tree(&star).unwrap();
        assert_eq!(q.det(), cofactor_det(q.matrix()));
        assert_eq!(q.det(), 4);
    }

    #[test]
    fn bareiss_agrees_with_cofactors() {
        let trees = [
            vec![-5, -1, -3, -2],
            vec![-2, -2, -2, -2, -2],
            vec![-1, -2],
            vec![3, -7, 2],
        ];
        for w in trees {
            let cf = ContinuedFraction::new(w.clone()).unwrap();
            let tree = PlumbedTree::linear(&cf);
            let mut m = vec![vec![0i64; w.len()]; w.len()];
            for (i, &x) in w.iter().enumerate() {
                m[i][i] = x;
            }
            for &(a, b) in tree.edges() {
                m[a][b] = 1;
                m[b][a] = 1;
            }
            assert_eq!(determinant(&m).unwrap(), cofactor_det(&m), "{w:?}");
        }
    }

    #[test]
    fn singular_forms_rejected() {
        // [-1, -1]: det = 1 - 1 = 0
        let tree = PlumbedTree::linear(&ContinuedFraction::new(vec![-1, -1]).unwrap());
        assert_eq!(
            IntersectionForm::from_tree(&tree),
            Err(PlumbingError::SingularForm)
        );
    }

    #[test]
    fn definiteness_examples() {
        assert!(chain(&[-2]).is_negative_definite());
        let q = chain(&[-3, -2, -2]);
        assert_eq!(q.leading_minors(), vec![-3, 5, -7]);
        assert!(q.is_negative_definite());
        let q = IntersectionForm::from_matrix(vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(!q.is_negative_definite());
    }

    #[test]
    fn char_square_examples() {
        assert_eq!(chain(&[-2]).char_square(&[0]).unwrap(), Rational::ZERO);
        assert_eq!(
            chain(&[-2]).char_square(&[2]).unwrap(),
            Rational::from(-2i64)
        );
        assert_eq!(
            chain(&[-3]).char_square(&[1]).unwrap(),
            Rational::new(-1, 3)
        );
        let q = chain(&[-3, -2, -2]);
        let adj = q.adjugate().unwrap();
        let inv = q.inverse().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(Rational::from(adj[i][j]), inv[i][j] * Rational::from(-7i64));
            }
        }
    }

    #[test]
    fn rejects_cycles_and_asymmetry() {
        let tri = vec![vec![-3, 1, 1], vec![1, -3, 1], vec![1, 1, -3]];
        assert_eq!(
            IntersectionForm::from_matrix(tri),
            Err(PlumbingError::NotATree)
        );
        let asym = vec![vec![-3, 1], vec![0, -3]];
        assert_eq!(
            IntersectionForm::from_matrix(asym),
            Err(PlumbingError::NotSymmetric)
        );
    }
}
