//! Dense matrices over an exact integer scalar, and Smith normal form.
//!
//! The scalar is any signed integer type from `num-traits`/`num-integer`;
//! the library instantiates it with `BigInt` (see the `IntMatrix` alias at
//! the crate root) so no computation ever overflows.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::Signed;

/// Scalars the matrix kernel works over: exact signed integers.
pub trait IntScalar: Integer + Signed + Clone + fmt::Debug + fmt::Display {}

impl<T> IntScalar for T where T: Integer + Signed + Clone + fmt::Debug + fmt::Display {}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Matrix<T> {
        Matrix {
            rows,
            cols,
            data: std::iter::repeat_with(T::zero).take(rows * cols).collect(),
        }
    }

    pub fn identity(n: usize) -> Matrix<T> {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Matrix<T> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Matrix<T> {
        let mut m = Matrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out: Matrix<T> = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn neg(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[Matrix<T>]) -> Matrix<T> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(ro + i, co + j)] = b[(i, j)].clone();
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Writes `block` into `self` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &Matrix<T>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut m = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let tmp = m[(k, j)].clone();
                            m[(k, j)] = m[(i, j)].clone();
                            m[(i, j)] = tmp;
                        }
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(k, k)].clone() * m[(i, j)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone();
                    m[(i, j)] = num / prev.clone();
                }
                m[(i, k)] = T::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Smith normal form `U · A · V = D` with `U`, `V` unimodular and `D`
/// diagonal with a divisibility chain `d₁ | d₂ | …`.
#[derive(Debug, Clone)]
pub struct Snf<T> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntScalar> Snf<T> {
    /// Diagonal entries of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Nonzero invariant factors, including any leading 1s.
    pub fn invariant_factors(&self) -> Vec<T> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }
}

struct Worker<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
}

impl<T: IntScalar> Worker<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.cols() {
            let tmp = self.a[(i, c)].clone();
            self.a[(i, c)] = self.a[(j, c)].clone();
            self.a[(j, c)] = tmp;
        }
        for c in 0..self.u.cols() {
            let tmp = self.u[(i, c)].clone();
            self.u[(i, c)] = self.u[(j, c)].clone();
            self.u[(j, c)] = tmp;
        }
        // inverse of a swap is the same swap, applied on the right
        for r in 0..self.u_inv.rows() {
            let tmp = self.u_inv[(r, i)].clone();
            self.u_inv[(r, i)] = self.u_inv[(r, j)].clone();
            self.u_inv[(r, j)] = tmp;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.rows() {
            let tmp = self.a[(r, i)].clone();
            self.a[(r, i)] = self.a[(r, j)].clone();
            self.a[(r, j)] = tmp;
        }
        for r in 0..self.v.rows() {
            let tmp = self.v[(r, i)].clone();
            self.v[(r, i)] = self.v[(r, j)].clone();
            self.v[(r, j)] = tmp;
        }
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &T) {
        for c in 0..self.a.cols() {
            let t = self.a[(i, c)].clone() + q.clone() * self.a[(j, c)].clone();
            self.a[(i, c)] = t;
        }
        for c in 0..self.u.cols() {
            let t = self.u[(i, c)].clone() + q.clone() * self.u[(j, c)].clone();
            self.u[(i, c)] = t;
        }
        for r in 0..self.u_inv.rows() {
            let t = self.u_inv[(r, j)].clone() - q.clone() * self.u_inv[(r, i)].clone();
            self.u_inv[(r, j)] = t;
        }
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &T) {
        for r in 0..self.a.rows() {
            let t = self.a[(r, i)].clone() + q.clone() * self.a[(r, j)].clone();
            self.a[(r, i)] = t;
        }
        for r in 0..self.v.rows() {
            let t = self.v[(r, i)].clone() + q.clone() * self.v[(r, j)].clone();
            self.v[(r, i)] = t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols() {
            self.a[(i, c)] = -self.a[(i, c)].clone();
        }
        for c in 0..self.u.cols() {
            self.u[(i, c)] = -self.u[(i, c)].clone();
        }
        for r in 0..self.u_inv.rows() {
            self.u_inv[(r, i)] = -self.u_inv[(r, i)].clone();
        }
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                if self.a[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if self.a[(i, j)].abs() < self.a[(bi, bj)].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }
}

/// Computes the Smith normal form of `a`.
pub fn snf<T: IntScalar>(a: &Matrix<T>) -> Snf<T> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Worker {
        a: a.clone(),
        u: Matrix::identity(rows),
        u_inv: Matrix::identity(rows),
        v: Matrix::identity(cols),
    };
    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = w.pivot(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            // clear column t below/above the pivot
            let mut touched = false;
            for i in 0..rows {
                if i == t || w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = -div_round(&w.a[(i, t)], &w.a[(t, t)]);
                if !q.is_zero() {
                    w.add_row(i, t, &q);
                }
                if !w.a[(i, t)].is_zero() {
                    // remainder smaller than pivot: promote it
                    w.swap_rows(t, i);
                    touched = true;
                }
            }
            if touched {
                continue;
            }
            for j in 0..cols {
                if j == t || w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = -div_round(&w.a[(t, j)], &w.a[(t, t)]);
                if !q.is_zero() {
                    w.add_col(j, t, &q);
                }
                if !w.a[(t, j)].is_zero() {
                    w.swap_cols(t, j);
                    touched = true;
                }
            }
            if touched {
                continue;
            }
            // row and column are clear; enforce divisibility of the
            // remaining submatrix by the pivot
            let mut offender = None;
            'search: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !w.a[(i, j)].mod_floor(&w.a[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = T::one();
                    w.add_row(t, i, &one);
                }
                None => break,
            }
        }
        t += 1;
    }
    for i in 0..steps {
        if w.a[(i, i)].is_negative() {
            w.negate_row(i);
        }
    }
    Snf {
        u: w.u,
        u_inv: w.u_inv,
        d: w.a,
        v: w.v,
    }
}

/// Rounded division: the quotient minimizing the remainder's magnitude.
fn div_round<T: IntScalar>(a: &T, b: &T) -> T {
    let (q, r) = a.div_mod_floor(b);
    let two_r = r.clone() + r.clone();
    if two_r.abs() > b.abs() {
        q + T::one()
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    fn check_contract(a: &Matrix<BigInt>) -> Snf<BigInt> {
        let s = snf(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "U·A·V = D");
        assert_eq!(s.u.det().abs(), BigInt::from(1), "U unimodular");
        assert_eq!(s.v.det().abs(), BigInt::from(1), "V unimodular");
        assert!(s.u.mul(&s.u_inv).is_identity(), "U · U⁻¹ = I");
        let diag = s.diagonal();
        for wnd in diag.windows(2) {
            if !wnd[0].is_zero() {
                assert!(
                    wnd[1].mod_floor(&wnd[0]).is_zero() || wnd[1].is_zero(),
                    "divisibility chain"
                );
            } else {
                assert!(wnd[1].is_zero(), "zeros trail");
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let a: Matrix<BigInt> = Matrix::identity(3);
        let s = check_contract(&a);
        assert_eq!(s.d, a);
    }

    #[test]
    fn two_by_two_example() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let s = check_contract(&a);
        assert_eq!(
            s.diagonal(),
            vec![BigInt::from(2), BigInt::from(4)],
            "diag(2,4)"
        );
    }

    #[test]
    fn borromean_monodromy_minus_identity() {
        // M - I for the order-4 block monodromy [[0,-I2],[I2,0]]
        let a = m(&[
            &[-1, 0, -1, 0],
            &[0, -1, 0, -1],
            &[1, 0, -1, 0],
            &[0, 1, 0, -1],
        ]);
        let s = check_contract(&a);
        let facs: Vec<i64> = s
            .invariant_factors()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(facs, vec![1, 1, 2, 2]);
    }

    #[test]
    fn zero_matrix() {
        let a = m(&[&[0, 0], &[0, 0]]);
        let s = check_contract(&a);
        assert!(s.invariant_factors().is_empty());
    }

    #[test]
    fn rectangular() {
        let a = m(&[&[2, 0, 0], &[0, 0, 3]]);
        check_contract(&a);
    }
}
