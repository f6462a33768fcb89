//! Dense exact linear algebra over a [`FieldSpec`].

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::scalar::{FieldSpec, Scalar, ScalarError};

/// A column vector.
pub type Vector = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("both vectors are zero")]
    BothZero,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            field,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Mat {
        Mat::from_fn(field, n, n, |i, j| Scalar::from_i64(field, (i == j) as i64))
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            rows,
            cols,
            field,
            data,
        }
    }

    /// Builds a matrix from rows; every entry must live in `field`.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Mat, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|x| x.field() != field) {
            return Err(ScalarError::FieldMismatch(field, bad.field()).into());
        }
        Ok(Mat {
            rows: r,
            cols: c,
            field,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: FieldSpec, cols: &[Vector]) -> Result<Mat, LinalgError> {
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != r) {
            return Err(LinalgError::DimensionMismatch("ragged columns".into()));
        }
        Ok(Mat::from_fn(field, r, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn diag(field: FieldSpec, entries: &[Scalar]) -> Mat {
        let n = entries.len();
        Mat::from_fn(field, n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Scalar::zero(field)
            }
        })
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(field: FieldSpec, perm: &[usize]) -> Mat {
        let n = perm.len();
        Mat::from_fn(field, n, n, |i, j| Scalar::from_i64(field, (perm[j] == i) as i64))
    }

    /// Entrywise conversion into another field.
    pub fn convert(&self, field: FieldSpec) -> Result<Mat, LinalgError> {
        let data = self
            .data
            .iter()
            .map(|x| x.convert(field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Mat { field, data, ..*self })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, o: &Mat) -> Result<Mat, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if self.field != o.field {
            return Err(ScalarError::FieldMismatch(self.field, o.field).into());
        }
        let f = self.field;
        Ok(Mat::from_fn(f, self.rows, o.cols, |i, j| {
            let mut acc = Scalar::zero(f);
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if !a.is_zero() {
                    acc = acc + a * &o[(k, j)];
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.field);
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc + &self[(i, k)] * x;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, o: &Mat) -> Result<Mat, LinalgError> {
        self.same_shape(o)?;
        Ok(Mat {
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, o: &Mat) -> Result<Mat, LinalgError> {
        self.same_shape(o)?;
        Ok(Mat {
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }

    fn same_shape(&self, o: &Mat) -> Result<(), LinalgError> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(LinalgError::DimensionMismatch("shapes differ".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
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

    /// Entrywise square.
    pub fn hadamard_square(&self) -> Mat {
        Mat {
            data: self.data.iter().map(|x| x * x).collect(),
            ..self.clone()
        }
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// Reduced row echelon form and pivot columns. Pivots are chosen as the
    /// first nonzero entry in column order.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] = &m[(i, j)] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if !self.field.is_exact() {
            for x in m.data.iter_mut() {
                if x.is_zero() {
                    *x = Scalar::zero(self.field);
                }
            }
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space. One vector per free column, with that
    /// free variable set to 1 and the other free variables 0.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let f = self.field;
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Scalar::zero(f); self.cols];
                v[free] = Scalar::one(f);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, free)];
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Mat::from_fn(self.field, n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                Scalar::from_i64(self.field, (j - n == i) as i64)
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Mat::from_fn(self.field, n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Solves `self * x = b`, returning one solution if any.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vector>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch("right-hand side length".into()));
        }
        let aug = Mat::from_fn(self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let f = self.field;
        if n == 0 {
            return Ok(Scalar::one(f));
        }
        let mut m = self.clone();
        let mut sign = Scalar::one(f);
        let mut prev = Scalar::one(f);
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(Scalar::zero(f));
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = t.try_div(&prev)?;
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Bilinear dot product `sum u_i v_i` (no conjugation).
pub fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    assert_eq!(u.len(), v.len());
    let f = u.first().map(Scalar::field).unwrap_or(FieldSpec::GaussianRational);
    u.iter().zip(v).fold(Scalar::zero(f), |acc, (a, b)| acc + a * b)
}

pub fn scale_vec(v: &[Scalar], s: &Scalar) -> Vector {
    v.iter().map(|x| x * s).collect()
}

pub fn add_vec(u: &[Scalar], v: &[Scalar]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub_vec(u: &[Scalar], v: &[Scalar]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Entrywise square of a matrix, as a free function.
pub fn hadamard_square(m: &Mat) -> Mat {
    m.hadamard_square()
}

pub fn inverse(m: &Mat) -> Result<Mat, LinalgError> {
    m.inverse()
}

pub fn nullspace(m: &Mat) -> Vec<Vector> {
    m.nullspace()
}

pub fn rank(m: &Mat) -> usize {
    m.rank()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Proportionality {
    /// `v = factor * u`.
    Factor(Scalar),
    NotProportional,
}

/// Decides whether `v` is a multiple of `u`.
pub fn proportional(u: &[Scalar], v: &[Scalar]) -> Result<Proportionality, LinalgError> {
    if u.len() != v.len() {
        return Err(LinalgError::DimensionMismatch("vector lengths".into()));
    }
    let uz = is_zero_vec(u);
    if uz && is_zero_vec(v) {
        return Err(LinalgError::BothZero);
    }
    if uz {
        return Ok(Proportionality::NotProportional);
    }
    let p = u.iter().position(|x| !x.is_zero()).unwrap();
    let lambda = v[p].try_div(&u[p])?;
    if u.iter().zip(v).all(|(a, b)| (a * &lambda) == *b) {
        Ok(Proportionality::Factor(lambda))
    } else {
        Ok(Proportionality::NotProportional)
    }
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_first(v: &[Scalar]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let inv = p.inv().unwrap();
            let mut out = scale_vec(v, &inv);
            let f = p.field();
            for x in out.iter_mut() {
                if x.is_zero() {
                    *x = Scalar::zero(f);
                }
            }
            out
        }
        None => v.to_vec(),
    }
}
