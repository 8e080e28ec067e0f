//! Dense matrices over a [`FieldSpec`], with the elimination routines the rest of
//! the crate leans on. Pivoting is deterministic: columns are processed left to
//! right and the first row with a nonzero entry wins, so identical inputs give
//! identical reduced forms on every run.

use crate::field::{FieldError, FieldSpec, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinearError {
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Row echelon data produced by [`ExactMatrix::rref`].
pub struct Echelon {
    pub mat: ExactMatrix,
    /// pivot column of each pivot row, in row order
    pub pivots: Vec<usize>,
}

/// A solved linear system: one particular solution (free variables set to zero)
/// plus the nullity of the coefficient matrix.
pub struct Solution {
    pub particular: ExactMatrix,
    pub rank: usize,
    pub nullity: usize,
}

impl ExactMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> ExactMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> ExactMatrix {
        assert!(!rows.is_empty(), "from_rows needs at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let nrows = rows.len();
        ExactMatrix { rows: nrows, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        ExactMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c]).clone()
        })
    }

    pub fn stack_vertical(parts: &[&ExactMatrix]) -> ExactMatrix {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        assert!(parts.iter().all(|m| m.cols == cols), "column mismatch in stack");
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            data.extend_from_slice(&m.data);
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn hstack(parts: &[&ExactMatrix]) -> ExactMatrix {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        assert!(parts.iter().all(|m| m.rows == rows), "row mismatch in hstack");
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for m in parts {
                out.extend_from_slice(m.row(r));
            }
        }
        ExactMatrix { rows, cols, data: out }
    }

    pub fn mul(&self, field: &FieldSpec, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        ExactMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = field.zero();
            for k in 0..self.cols {
                let term = field.mul(self.get(r, k), other.get(k, c));
                acc = field.add(&acc, &term);
            }
            acc
        })
    }

    pub fn matvec(&self, field: &FieldSpec, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = field.zero();
                for c in 0..self.cols {
                    acc = field.add(&acc, &field.mul(self.get(r, c), &v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, field: &FieldSpec, s: &Scalar) -> ExactMatrix {
        ExactMatrix::from_fn(self.rows, self.cols, |r, c| field.mul(self.get(r, c), s))
    }

    pub fn add(&self, field: &FieldSpec, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix::from_fn(self.rows, self.cols, |r, c| {
            field.add(self.get(r, c), other.get(r, c))
        })
    }

    pub fn sub(&self, field: &FieldSpec, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix::from_fn(self.rows, self.cols, |r, c| {
            field.sub(self.get(r, c), other.get(r, c))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..r {
                if self.get(r, c) != self.get(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self, field: &FieldSpec) -> bool {
        self.data.iter().all(|s| field.is_zero(s))
    }

    /// Reduced row echelon form with first-nonzero pivoting.
    pub fn rref(&self, field: &FieldSpec) -> Echelon {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let hit = (pivot_row..m.rows).find(|&r| !field.is_zero(m.get(r, col)));
            let Some(r0) = hit else { continue };
            if r0 != pivot_row {
                for c in 0..m.cols {
                    m.data.swap(pivot_row * m.cols + c, r0 * m.cols + c);
                }
            }
            let inv = field
                .inv(m.get(pivot_row, col))
                .expect("pivot is nonzero by construction");
            for c in col..m.cols {
                let v = field.mul(m.get(pivot_row, c), &inv);
                m.set(pivot_row, c, v);
            }
            for r in 0..m.rows {
                if r == pivot_row || field.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = field.sub(m.get(r, c), &field.mul(&factor, m.get(pivot_row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Echelon { mat: m, pivots }
    }

    pub fn rank(&self, field: &FieldSpec) -> usize {
        self.rref(field).pivots.len()
    }

    /// Basis of the right null space, one kernel vector per column.
    pub fn kernel(&self, field: &FieldSpec) -> ExactMatrix {
        let ech = self.rref(field);
        let pivots = &ech.pivots;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = ExactMatrix::zeros(field, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, field.one());
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, field.neg(ech.mat.get(r, fc)));
            }
        }
        out
    }

    /// Solves self * X = rhs. Free variables are set to zero in the particular
    /// solution; inconsistency is an error.
    pub fn solve(&self, field: &FieldSpec, rhs: &ExactMatrix) -> Result<Solution, LinearError> {
        if rhs.rows != self.rows {
            return Err(LinearError::Shape(format!(
                "rhs has {} rows, matrix has {}",
                rhs.rows, self.rows
            )));
        }
        let aug = ExactMatrix::hstack(&[self, rhs]);
        let ech = aug.rref(field);
        let rank = ech.pivots.iter().filter(|&&c| c < self.cols).count();
        if ech.pivots.iter().any(|&c| c >= self.cols) {
            return Err(LinearError::Inconsistent);
        }
        let mut x = ExactMatrix::zeros(field, self.cols, rhs.cols);
        for (r, &pc) in ech.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, ech.mat.get(r, self.cols + j).clone());
            }
        }
        Ok(Solution { particular: x, rank, nullity: self.cols - rank })
    }

    pub fn det(&self, field: &FieldSpec) -> Result<Scalar, LinearError> {
        if self.rows != self.cols {
            return Err(LinearError::NotSquare(self.rows, self.cols));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = field.one();
        for col in 0..n {
            let hit = (col..n).find(|&r| !field.is_zero(m.get(r, col)));
            let Some(r0) = hit else {
                return Ok(field.zero());
            };
            if r0 != col {
                for c in 0..n {
                    m.data.swap(col * n + c, r0 * n + c);
                }
                det = field.neg(&det);
            }
            let pivot = m.get(col, col).clone();
            det = field.mul(&det, &pivot);
            let inv = field.inv(&pivot).expect("nonzero pivot");
            for r in col + 1..n {
                if field.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = field.mul(m.get(r, col), &inv);
                for c in col..n {
                    let v = field.sub(m.get(r, c), &field.mul(&factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    /// Classical adjugate via cofactors, so it is defined for singular input too.
    pub fn adjugate(&self, field: &FieldSpec) -> Result<ExactMatrix, LinearError> {
        if self.rows != self.cols {
            return Err(LinearError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        if n == 1 {
            let mut m = ExactMatrix::zeros(field, 1, 1);
            m.set(0, 0, field.one());
            return Ok(m);
        }
        let mut adj = ExactMatrix::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.submatrix(&rows, &cols).det(field)?;
                let signed = if (i + j) % 2 == 0 { minor } else { field.neg(&minor) };
                adj.set(i, j, signed);
            }
        }
        Ok(adj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f101() -> FieldSpec {
        FieldSpec::prime(101).unwrap()
    }

    #[test]
    fn rref_and_rank() {
        let f = f101();
        let m = ExactMatrix::from_rows(vec![
            vec![f.from_i64(1), f.from_i64(2), f.from_i64(3)],
            vec![f.from_i64(2), f.from_i64(4), f.from_i64(6)],
            vec![f.from_i64(1), f.from_i64(0), f.from_i64(1)],
        ]);
        assert_eq!(m.rank(&f), 2);
        let ech = m.rref(&f);
        assert_eq!(ech.pivots, vec![0, 1]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let m = ExactMatrix::from_fn(4, 7, |_, _| f.rand_scalar(&mut rng));
            let k = m.kernel(&f);
            assert_eq!(m.rank(&f) + k.ncols(), 7);
            let prod = m.mul(&f, &k);
            assert!(prod.is_zero(&f));
        }
    }

    #[test]
    fn rank_nullity_many_shapes() {
        let f = FieldSpec::ext_field(7, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (r, c) in [(3, 5), (6, 2), (5, 5), (1, 8)] {
            let m = ExactMatrix::from_fn(r, c, |_, _| f.rand_scalar(&mut rng));
            let k = m.kernel(&f);
            assert_eq!(m.rank(&f) + k.ncols(), c);
        }
    }

    #[test]
    fn solve_unique_and_inconsistent() {
        let f = f101();
        let a = ExactMatrix::from_rows(vec![
            vec![f.from_i64(2), f.from_i64(1)],
            vec![f.from_i64(1), f.from_i64(3)],
        ]);
        let b = ExactMatrix::from_rows(vec![vec![f.from_i64(5)], vec![f.from_i64(10)]]);
        let sol = a.solve(&f, &b).unwrap();
        assert_eq!(sol.nullity, 0);
        assert_eq!(a.mul(&f, &sol.particular), b);

        let bad = ExactMatrix::from_rows(vec![
            vec![f.from_i64(1), f.from_i64(1)],
            vec![f.from_i64(2), f.from_i64(2)],
        ]);
        let rhs = ExactMatrix::from_rows(vec![vec![f.from_i64(1)], vec![f.from_i64(3)]]);
        assert!(matches!(bad.solve(&f, &rhs), Err(LinearError::Inconsistent)));
    }

    #[test]
    fn determinant_rational() {
        let f = FieldSpec::rationals();
        let m = ExactMatrix::from_rows(vec![
            vec![Scalar::rat_i64(1, 2), Scalar::rat_i64(1, 3)],
            vec![Scalar::rat_i64(1, 4), Scalar::rat_i64(1, 5)],
        ]);
        // 1/10 - 1/12 = 1/60
        assert_eq!(m.det(&f).unwrap(), Scalar::rat_i64(1, 60));
    }

    #[test]
    fn adjugate_identity_up_to_12() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in [1usize, 2, 3, 5, 8, 12] {
            let m = ExactMatrix::from_fn(n, n, |_, _| f.rand_scalar(&mut rng));
            let adj = m.adjugate(&f).unwrap();
            let d = m.det(&f).unwrap();
            let prod = m.mul(&f, &adj);
            let expect = ExactMatrix::identity(&f, n).scale(&f, &d);
            assert_eq!(prod, expect, "M * adj(M) != det(M) I at n={n}");
        }
    }

    #[test]
    fn adjugate_of_singular_matrix() {
        let f = f101();
        // rank 1, so the adjugate of the 3x3 must vanish
        let m = ExactMatrix::from_rows(vec![
            vec![f.from_i64(1), f.from_i64(2), f.from_i64(3)],
            vec![f.from_i64(2), f.from_i64(4), f.from_i64(6)],
            vec![f.from_i64(3), f.from_i64(6), f.from_i64(9)],
        ]);
        let adj = m.adjugate(&f).unwrap();
        assert!(adj.is_zero(&f));

        // rank 2: adjugate has rank 1 and M * adj = 0
        let m2 = ExactMatrix::from_rows(vec![
            vec![f.from_i64(1), f.from_i64(0), f.from_i64(0)],
            vec![f.from_i64(0), f.from_i64(1), f.from_i64(0)],
            vec![f.from_i64(1), f.from_i64(1), f.from_i64(0)],
        ]);
        let adj2 = m2.adjugate(&f).unwrap();
        assert_eq!(adj2.rank(&f), 1);
        assert!(m2.mul(&f, &adj2).is_zero(&f));
    }

    #[test]
    fn det_multiplicative() {
        let f = FieldSpec::ext_field(13, 2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let a = ExactMatrix::from_fn(4, 4, |_, _| f.rand_scalar(&mut rng));
            let b = ExactMatrix::from_fn(4, 4, |_, _| f.rand_scalar(&mut rng));
            let lhs = a.mul(&f, &b).det(&f).unwrap();
            let rhs = f.mul(&a.det(&f).unwrap(), &b.det(&f).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}
