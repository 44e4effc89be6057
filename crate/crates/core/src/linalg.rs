//! Dense exact linear algebra: rank and kernel bases over the session field.
//!
//! Gaussian elimination only; correctness comes from the exactness of the
//! field, not from numerical care. Matrices at desk scale (a few thousand
//! rows/columns at most) are stored row-major.

use crate::field::Field;

#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = m.field.one();
        }
        m
    }

    /// Build from a list of rows; all rows must have length `cols`.
    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix { field, rows: nrows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut F::Elem {
        &mut self.data[r * self.cols + c]
    }
    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zero(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for c in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.at(r, c), &v[c]));
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form. Returns the pivot columns in order.
    fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut pr = 0; // next pivot row
        for col in 0..self.cols {
            if pr == self.rows {
                break;
            }
            // locate a nonzero entry in this column at or below pr
            let Some(src) = (pr..self.rows).find(|&r| !f.is_zero(self.at(r, col))) else {
                continue;
            };
            if src != pr {
                for c in 0..self.cols {
                    self.data.swap(src * self.cols + c, pr * self.cols + c);
                }
            }
            let inv = f.inv(self.at(pr, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                *self.at_mut(pr, c) = f.mul(self.at(pr, c), &inv);
            }
            for r in 0..self.rows {
                if r == pr || f.is_zero(self.at(r, col)) {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let sub = f.mul(&factor, self.at(pr, c));
                    *self.at_mut(r, c) = f.sub(self.at(r, c), &sub);
                }
            }
            pivots.push(col);
            pr += 1;
        }
        pivots
    }

    /// Exact rank over the session field. Degenerate (0-row or 0-column)
    /// matrices have rank 0.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A basis of the right kernel: exactly `cols - rank` independent vectors
    /// `v` with `self * v = 0`. For a 0-row matrix this is the full standard
    /// basis.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.at(r, free));
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, PrimeField, RationalField};
    use proptest::prelude::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    /// Independent test oracle: plain textbook elimination, sharing no code
    /// with `Matrix::rref`. Entries are given as integers mod p.
    fn oracle_rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
        let mut m: Vec<Vec<i64>> =
            rows.iter().map(|r| r.iter().map(|&x| ((x % p) + p) % p).collect()).collect();
        let nrows = m.len();
        if nrows == 0 {
            return 0;
        }
        let ncols = m[0].len();
        let mut rank = 0;
        for col in 0..ncols {
            let mut piv = None;
            for r in rank..nrows {
                if m[r][col] != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            m.swap(rank, piv);
            for r in (rank + 1)..nrows {
                // eliminate via cross-multiplication, no inverses needed
                let (a, b) = (m[rank][col], m[r][col]);
                if b == 0 {
                    continue;
                }
                for c in 0..ncols {
                    m[r][c] = (((a * m[r][c] - b * m[rank][c]) % p) + p) % p;
                }
            }
            rank += 1;
            if rank == nrows {
                break;
            }
        }
        rank
    }

    fn fp_matrix(field: PrimeField, rows: &[Vec<i64>]) -> Matrix<PrimeField> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            field,
            cols,
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect(),
        )
    }

    #[test]
    fn zero_and_identity_ranks() {
        let f = PrimeField::new(65537).unwrap();
        assert_eq!(Matrix::zero(f, 3, 3).rank(), 0);
        assert_eq!(Matrix::identity(f, 3).rank(), 3);
    }

    #[test]
    fn vandermonde_style_evaluation_matrix_has_full_rank() {
        // monomials {1, s, u, su} evaluated at four points of Q with distinct
        // coordinates, over F_101; frozen expected rank = 4, confirmed by the
        // independent oracle.
        let pts = [(2i64, 3i64), (5, 7), (11, 13), (17, 19)];
        let rows: Vec<Vec<i64>> =
            pts.iter().map(|&(s, u)| vec![1, s, u, s * u]).collect();
        let p = 101;
        assert_eq!(oracle_rank_mod_p(&rows, p), 4);
        let f = PrimeField::new(p as u64).unwrap();
        assert_eq!(fp_matrix(f, &rows).rank(), 4);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let f = PrimeField::new(65537).unwrap();
        assert!(Matrix::identity(f, 2).kernel_basis().is_empty());
        let z = Matrix::zero(f, 1, 3);
        let basis = z.kernel_basis();
        assert_eq!(basis.len(), 3);
        // 0-row matrix: full standard basis
        let empty = Matrix::zero(f, 0, 4);
        assert_eq!(empty.rank(), 0);
        assert_eq!(empty.kernel_basis().len(), 4);
        // 0-column matrix
        let thin = Matrix::zero(f, 4, 0);
        assert_eq!(thin.rank(), 0);
        assert!(thin.kernel_basis().is_empty());
    }

    #[test]
    fn unique_bilinear_curve_through_three_general_points() {
        // (1,1) monomials {1, u, s, su} at 3 points: kernel is 1-dimensional
        // (the unique (1,1) curve through 3 general points). Oracle: the
        // independent elimination gives rank 3.
        let pts = [(2i64, 9i64), (4, 25), (7, 3)];
        let rows: Vec<Vec<i64>> =
            pts.iter().map(|&(s, u)| vec![1, u, s, s * u]).collect();
        assert_eq!(oracle_rank_mod_p(&rows, 101), 3);
        let f = PrimeField::new(101).unwrap();
        let m = fp_matrix(f, &rows);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        let img = m.apply(&basis[0]);
        assert!(img.iter().all(|x| *x == 0));
    }

    #[test]
    fn rank_agrees_between_fp_and_rationals_on_small_integer_matrices() {
        // entries in [-3,3] on 4x4: every minor is < 65537 in absolute value,
        // so a nonzero rational minor stays nonzero mod p.
        let fp = PrimeField::new(65537).unwrap();
        let fq = RationalField;
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows: Vec<Vec<i64>> = (0..4)
                .map(|_| (0..4).map(|_| (rng.next_u64() % 7) as i64 - 3).collect())
                .collect();
            let mp = fp_matrix(fp, &rows);
            let mq = Matrix::from_rows(
                fq,
                4,
                rows.iter()
                    .map(|r| r.iter().map(|&x| fq.from_i64(x)).collect())
                    .collect(),
            );
            assert_eq!(mp.rank(), mq.rank());
        }
    }

    proptest! {
        #[test]
        fn rank_plus_kernel_dim_is_cols(entries in proptest::collection::vec(0i64..65537, 1..36)) {
            let cols = 6usize.min(entries.len());
            let rows: Vec<Vec<i64>> = entries.chunks(cols).filter(|c| c.len() == cols)
                .map(|c| c.to_vec()).collect();
            prop_assume!(!rows.is_empty());
            let f = PrimeField::new(65537).unwrap();
            let m = fp_matrix(f, &rows);
            let basis = m.kernel_basis();
            prop_assert_eq!(m.rank() + basis.len(), m.cols());
            for v in &basis {
                let img = m.apply(v);
                prop_assert!(img.iter().all(|x| *x == 0));
            }
        }

        #[test]
        fn rank_invariant_under_row_permutation_and_scaling(seed in 0u64..1000) {
            let f = PrimeField::new(65537).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let rows: Vec<Vec<u64>> = (0..5)
                .map(|_| (0..7).map(|_| f.random(&mut rng)).collect())
                .collect();
            let m = Matrix::from_rows(f, 7, rows.clone());
            // scale each row by a nonzero scalar and reverse the order
            let mut scaled: Vec<Vec<u64>> = rows
                .iter()
                .map(|r| {
                    let mut c = f.random(&mut rng);
                    if c == 0 { c = 1; }
                    r.iter().map(|x| f.mul(x, &c)).collect()
                })
                .collect();
            scaled.reverse();
            let m2 = Matrix::from_rows(f, 7, scaled);
            prop_assert_eq!(m.rank(), m2.rank());
        }

        #[test]
        fn rank_equals_transpose_rank(seed in 0u64..1000) {
            let f = PrimeField::new(101).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let rows: Vec<Vec<u64>> = (0..4)
                .map(|_| (0..6).map(|_| if rng.next_u64() % 3 == 0 { 0 } else { f.random(&mut rng) }).collect())
                .collect();
            let m = Matrix::from_rows(f, 6, rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
