//! Dense exact matrices: Bareiss determinants, rank, linear solves,
//! characteristic polynomials and integer lattice indices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{lcm_of_denominators, ExactDiv, Field, Ring};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Ring> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl<F: Ring> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
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

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Determinant by permutation expansion. Only usable for tiny sizes, but
    /// needs nothing beyond ring operations, so it expands symbolic entries.
    pub fn det_leibniz(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = F::zero();
        leibniz_rec(self, 0, &mut perm, true, &mut total);
        total
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

fn leibniz_rec<F: Ring>(m: &Matrix<F>, k: usize, perm: &mut Vec<usize>, even: bool, total: &mut F) {
    let n = perm.len();
    if k == n {
        let mut p = F::one();
        for (r, &c) in perm.iter().enumerate() {
            let e = m.get(r, c);
            if e.is_zero() {
                return;
            }
            p = p * e.clone();
        }
        *total = if even {
            total.clone() + p
        } else {
            total.clone() - p
        };
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        leibniz_rec(m, k + 1, perm, if i == k { even } else { !even }, total);
        perm.swap(k, i);
    }
}

impl<F: Ring + ExactDiv> Matrix<F> {
    /// Fraction-free Gaussian elimination (Bareiss). Every division is exact.
    pub fn det_bareiss(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = F::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        negate = !negate;
                    }
                    None => return F::zero(),
                }
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                let aik = a.get(i, k).clone();
                for j in k + 1..n {
                    let v = pivot.clone() * a.get(i, j).clone() - aik.clone() * a.get(k, j).clone();
                    a.set(i, j, v.div_exact(&prev));
                }
                a.set(i, k, F::zero());
            }
            prev = pivot;
        }
        let d = a.get(n - 1, n - 1).clone();
        if negate {
            -d
        } else {
            d
        }
    }
}

impl Matrix<BigRational> {
    /// Determinant by clearing each row's denominators and running integer
    /// Bareiss, which keeps intermediate entries small.
    pub fn det_rational(&self) -> BigRational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut scale = BigInt::one();
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let l = lcm_of_denominators(self.row(r));
            rows.push(
                self.row(r)
                    .iter()
                    .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
                    .collect(),
            );
            scale *= l;
        }
        BigRational::new(Matrix::<BigInt>::from_rows(rows).det_bareiss(), scale)
    }
}

impl<F: Field> Matrix<F> {
    /// Row echelon form in place; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).try_inv().expect("nonzero pivot");
            for i in r + 1..self.rows {
                let f = self.get(i, c).clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j).clone() - f.clone() * self.get(r, j).clone();
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Solves `self * X = rhs` for a square invertible `self`, elimination
    /// done fraction-free (Bareiss) and back-substitution in the field.
    pub fn solve(&self, rhs: &Matrix<F>) -> Result<Matrix<F>> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::Invalid("dimension mismatch in linear solve".into()));
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut a = Matrix::zeros(n, n + m);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, self.get(i, j).clone());
            }
            for j in 0..m {
                a.set(i, n + j, rhs.get(i, j).clone());
            }
        }
        let mut prev = F::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
                return Err(Error::Invalid("singular system".into()));
            };
            a.swap_rows(k, p);
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                let aik = a.get(i, k).clone();
                for j in k + 1..n + m {
                    let v = pivot.clone() * a.get(i, j).clone() - aik.clone() * a.get(k, j).clone();
                    a.set(i, j, v.div_exact(&prev));
                }
                a.set(i, k, F::zero());
            }
            prev = pivot;
        }
        let mut x: Matrix<F> = Matrix::zeros(n, m);
        for col in 0..m {
            for i in (0..n).rev() {
                let mut s = a.get(i, n + col).clone();
                for j in i + 1..n {
                    s = s - a.get(i, j).clone() * x.get(j, col).clone();
                }
                let inv = a.get(i, i).try_inv().expect("nonzero pivot");
                x.set(i, col, s * inv);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix<F>> {
        self.solve(&Matrix::identity(self.rows))
    }

    /// `det(xI - self)` by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> UniPoly<F> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        let mut m = Matrix::<F>::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k) / k
            let mut mk = self.mul(&m);
            for i in 0..n {
                let v = mk.get(i, i).clone() + coeffs[n - k + 1].clone();
                mk.set(i, i, v);
            }
            let am = self.mul(&mk);
            let tr = (0..n).fold(F::zero(), |acc, i| acc + am.get(i, i).clone());
            let kinv = F::from_i64(k as i64).try_inv().expect("characteristic zero");
            coeffs[n - k] = -(tr * kinv);
            m = mk;
        }
        UniPoly::new(coeffs)
    }
}

/// Hermite normal form (upper triangular, positive diagonal) of the lattice
/// spanned by the given integer rows. Zero rows are dropped.
pub fn hermite_normal_form(gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(dim) = gens.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
    let mut out = Vec::new();
    for c in 0..dim {
        // gcd-combine every row with a nonzero entry in column c into one pivot row
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(rows.len());
        for row in rows.into_iter() {
            if row[c].is_zero() {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let ext = p[c].extended_gcd(&row[c]);
                    let (a, b) = (&p[c] / &ext.gcd, &row[c] / &ext.gcd);
                    let new_p: Vec<BigInt> = p.iter().zip(&row).map(|(x, y)| &ext.x * x + &ext.y * y).collect();
                    let reduced: Vec<BigInt> = p.iter().zip(&row).map(|(x, y)| &a * y - &b * x).collect();
                    rest.push(reduced);
                    pivot = Some(new_p);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = pivot {
            if p[c].is_negative() {
                p.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(p);
        }
    }
    // reduce entries above each pivot into [0, pivot)
    for i in 0..out.len() {
        let c = out[i].iter().position(|x| !x.is_zero()).expect("pivot row is nonzero");
        for k in 0..i {
            let f = out[k][c].div_floor(&out[i][c]);
            if !f.is_zero() {
                let pi = out[i].clone();
                for (x, y) in out[k].iter_mut().zip(&pi) {
                    *x -= &f * y;
                }
            }
        }
    }
    out
}

/// Index `[Z^dim : L]` of the full-rank lattice spanned by `gens`.
pub fn lattice_index(gens: &[Vec<BigInt>], dim: usize) -> Result<BigInt> {
    if gens.iter().any(|g| g.len() != dim) {
        return Err(Error::Invalid("generator of wrong length".into()));
    }
    let hnf = hermite_normal_form(gens);
    if hnf.len() != dim {
        return Err(Error::Invalid("lattice is not of full rank".into()));
    }
    Ok(hnf.iter().enumerate().map(|(i, r)| r[i].clone()).product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MPoly;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn int_matrix(v: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    #[test]
    fn small_determinants() {
        let m = int_matrix(&[&[1, -2], &[1, 1]]);
        assert_eq!(m.det_bareiss(), BigInt::from(3));
        let z = int_matrix(&[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6]]);
        assert_eq!(z.det_bareiss(), BigInt::zero());
        let p = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(p.det_bareiss(), BigInt::from(-1));
        assert_eq!(p.det_leibniz(), BigInt::from(-1));
    }

    #[test]
    fn rational_determinant() {
        let m = Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 5)]]);
        assert_eq!(m.det_rational(), rat(1, 10) - rat(1, 12));
        assert_eq!(m.det_bareiss(), m.det_rational());
    }

    #[test]
    fn symbolic_leibniz_expansion() {
        // det of a generic 2x2 has 2 terms
        let v = |i| MPoly::<BigInt>::var(i);
        let m = Matrix::from_rows(vec![vec![v(0), v(1)], vec![v(2), v(3)]]);
        assert_eq!(m.det_leibniz().len(), 2);
    }

    #[test]
    fn solve_and_inverse() {
        let m = Matrix::from_rows(vec![
            vec![rat_int(2), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(3)],
            vec![rat_int(1), rat_int(4), rat_int(1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert_eq!(m.rank(), 3);
        assert!(Matrix::from_rows(vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]])
            .inverse()
            .is_err());
    }

    #[test]
    fn char_poly_of_companion() {
        // companion matrix of x^2 - 2
        let m = Matrix::from_rows(vec![vec![rat_int(0), rat_int(2)], vec![rat_int(1), rat_int(0)]]);
        assert_eq!(m.char_poly(), UniPoly::new(vec![rat_int(-2), rat_int(0), rat_int(1)]));
    }

    #[test]
    fn lattice_indices() {
        let i = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(lattice_index(&[i(&[2]), i(&[4])], 1).unwrap(), BigInt::from(2));
        assert_eq!(lattice_index(&[i(&[2, 0]), i(&[0, 2]), i(&[1, 1])], 2).unwrap(), BigInt::from(2));
        assert!(lattice_index(&[i(&[1, 1]), i(&[2, 2])], 2).is_err());
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(entries in prop::collection::vec(-9i64..10, 16)) {
            let m = Matrix::from_rows(entries.chunks(4).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
            prop_assert_eq!(m.det_bareiss(), m.det_leibniz());
        }

        #[test]
        fn index_equals_abs_det(entries in prop::collection::vec(-9i64..10, 9)) {
            let rows: Vec<Vec<BigInt>> = entries.chunks(3).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let det = Matrix::from_rows(rows.clone()).det_bareiss();
            match lattice_index(&rows, 3) {
                Ok(idx) => prop_assert_eq!(idx, det.abs()),
                Err(_) => prop_assert!(det.is_zero()),
            }
        }
    }
}
