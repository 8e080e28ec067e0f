//! Arbitrary-precision integer matrices: fraction-free determinants and Smith
//! normal form with recorded unimodular transforms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Smith decomposition left * a * right = d with d diagonal, entries
/// nonnegative, each dividing the next.
pub struct Snf {
    pub d: IntMat,
    pub left: IntMat,
    pub right: IntMat,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> IntMat {
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols));
        IntMat {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> IntMat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMat { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        IntMat::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += self.get(r, k) * other.get(k, c);
            }
            acc
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Bareiss fraction-free determinant.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let swap = (k + 1..n).find(|&r| !m.get(r, k).is_zero());
                match swap {
                    Some(r) => {
                        for c in 0..n {
                            let tmp = m.get(k, c).clone();
                            m.set(k, c, m.get(r, c).clone());
                            m.set(r, c, tmp);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                    m.set(i, j, num / &prev);
                }
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn row_op(&mut self, target: usize, source: usize, q: &BigInt) {
        // row[target] -= q * row[source]
        for c in 0..self.cols {
            let v = self.get(target, c) - q * self.get(source, c);
            self.set(target, c, v);
        }
    }

    fn col_op(&mut self, target: usize, source: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, target) - q * self.get(r, source);
            self.set(r, target, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// Smith normal form. Row operations accumulate into `left`, column
    /// operations into `right`, so `left * self * right == d` exactly.
    pub fn smith(&self) -> Snf {
        let mut a = self.clone();
        let mut left = IntMat::identity(self.rows);
        let mut right = IntMat::identity(self.cols);
        let steps = self.rows.min(self.cols);

        for t in 0..steps {
            'pivot: loop {
                // smallest nonzero entry of the trailing block becomes the pivot
                let mut best: Option<(usize, usize)> = None;
                for i in t..self.rows {
                    for j in t..self.cols {
                        if a.get(i, j).is_zero() {
                            continue;
                        }
                        match best {
                            None => best = Some((i, j)),
                            Some((bi, bj)) => {
                                if a.get(i, j).abs() < a.get(bi, bj).abs() {
                                    best = Some((i, j));
                                }
                            }
                        }
                    }
                }
                let Some((pi, pj)) = best else { break 'pivot };
                a.swap_rows(t, pi);
                left.swap_rows(t, pi);
                a.swap_cols(t, pj);
                right.swap_cols(t, pj);

                let mut dirty = false;
                for i in t + 1..self.rows {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = a.get(i, t) / a.get(t, t);
                    a.row_op(i, t, &q);
                    left.row_op(i, t, &q);
                    if !a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = a.get(t, j) / a.get(t, t);
                    a.col_op(j, t, &q);
                    right.col_op(j, t, &q);
                    if !a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    continue 'pivot;
                }
                // pivot now alone in its row and column; force divisibility
                let pivot = a.get(t, t).clone();
                let offender = (t + 1..self.rows)
                    .flat_map(|i| (t + 1..self.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(a.get(i, j) % &pivot).is_zero());
                match offender {
                    Some((i, _)) => {
                        let minus_one = BigInt::from(-1);
                        a.row_op(t, i, &minus_one); // row[t] += row[i]
                        left.row_op(t, i, &minus_one);
                        continue 'pivot;
                    }
                    None => break 'pivot,
                }
            }
        }
        for t in 0..steps {
            if a.get(t, t).is_negative() {
                a.negate_row(t);
                left.negate_row(t);
            }
        }
        Snf { d: a, left, right }
    }

    /// Invariant factors different from 1 (the discriminant group data for a
    /// nonsingular Gram matrix).
    pub fn nontrivial_invariant_factors(&self) -> Vec<BigInt> {
        self.smith()
            .d
            .diagonal()
            .into_iter()
            .filter(|v| !v.is_one())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMat) {
        let snf = m.smith();
        let lhs = snf.left.mul(m).mul(&snf.right);
        assert_eq!(lhs, snf.d, "L*A*R != D");
        assert_eq!(snf.left.det().abs(), BigInt::one(), "left not unimodular");
        assert_eq!(snf.right.det().abs(), BigInt::one(), "right not unimodular");
        let diag = snf.d.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {diag:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
        for r in 0..snf.d.nrows() {
            for c in 0..snf.d.ncols() {
                if r != c {
                    assert!(snf.d.get(r, c).is_zero());
                }
            }
        }
    }

    #[test]
    fn smith_small_known() {
        let m = IntMat::from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        check_snf(&m);
        let d = m.smith().d.diagonal();
        // classical example: invariant factors 2, 2, 156
        assert_eq!(
            d,
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
    }

    #[test]
    fn smith_rectangular_and_rank_deficient() {
        let m = IntMat::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        check_snf(&m);
        let d = m.smith().d.diagonal();
        assert_eq!(d, vec![BigInt::from(1), BigInt::zero()]);
    }

    #[test]
    fn smith_random_matrices() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let r = rng.gen_range(1..6);
            let c = rng.gen_range(1..6);
            let m = IntMat::from_fn(r, c, |_, _| BigInt::from(rng.gen_range(-30i64..30)));
            check_snf(&m);
        }
    }

    #[test]
    fn bareiss_matches_cofactor_on_small() {
        let m = IntMat::from_i64_rows(&[
            vec![3, 1, -2, 4],
            vec![0, 2, 5, -1],
            vec![7, -3, 1, 1],
            vec![2, 2, 2, 3],
        ]);
        // row-multilinearity against the singular variant with last row (2,2,2,2)
        // leaves det [[3,1,-2],[0,2,5],[7,-3,1]] = 114
        assert_eq!(m.det(), BigInt::from(114));
        let id = IntMat::identity(5);
        assert_eq!(id.det(), BigInt::one());
    }

    #[test]
    fn det_of_singular_is_zero() {
        let m = IntMat::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.det(), BigInt::zero());
    }
}
