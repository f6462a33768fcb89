//! Evolution algebras given by their structure matrix in a natural basis.

use std::fmt::Write as _;

use thiserror::Error;

use crate::linalg::{LinalgError, Mat, Vector};
use crate::scalar::{FieldSpec, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("change of basis matrix is singular")]
    Singular,
    #[error("new basis is not natural: e{}*e{} != 0", .0 + 1, .1 + 1)]
    NotNaturalBasis(usize, usize),
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<LinalgError> for AlgebraError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Singular => AlgebraError::Singular,
            LinalgError::Scalar(s) => AlgebraError::Scalar(s),
            other => AlgebraError::DimensionMismatch(other.to_string()),
        }
    }
}

/// An evolution algebra: column `i` of the structure matrix holds the
/// coordinates of `e_i^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionAlgebra {
    matrix: Mat,
}

/// Named families of every dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    /// Zero product.
    O(usize),
    /// `e_j^2 = e_1` for all j.
    E(usize),
    /// `e_1^2 = e_1 + i e_2`, `e_j^2 = e_1^2`.
    I(usize),
    /// `e_1^2 = 0`, `e_k^2 = e_1` for k >= 2.
    N(usize),
}

impl EvolutionAlgebra {
    pub fn new(matrix: Mat) -> Result<Self, AlgebraError> {
        if !matrix.is_square() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "structure matrix is {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rows() == 0 {
            return Err(AlgebraError::InvalidDimension(0));
        }
        Ok(EvolutionAlgebra { matrix })
    }

    /// Builds from row-major literal rows over the given field.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self, AlgebraError> {
        EvolutionAlgebra::new(Mat::from_rows(field, rows)?)
    }

    /// The same structure constants read in another field.
    pub fn convert(&self, field: FieldSpec) -> Result<Self, AlgebraError> {
        EvolutionAlgebra::new(self.matrix.convert(field)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat {
        self.matrix
    }

    /// Structure constant `w_ij`, the coefficient of `e_i` in `e_j^2`.
    pub fn w(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[(i, j)]
    }

    /// Coordinates of `e_i^2`.
    pub fn square(&self, i: usize) -> Vector {
        self.matrix.col(i)
    }

    /// Product `x * y = sum_i x_i y_i e_i^2`.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, AlgebraError> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(AlgebraError::DimensionMismatch(format!(
                "vectors of length {} and {}, dim {n}",
                x.len(),
                y.len()
            )));
        }
        let coeffs: Vector = x.iter().zip(y).map(|(a, b)| a * b).collect();
        Ok(self.matrix.mul_vec(&coeffs)?)
    }

    /// Indices `i` with `e_i^2 = 0`; these span the annihilator.
    pub fn annihilator(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.square(i).iter().all(Scalar::is_zero))
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.annihilator().is_empty()
    }

    /// `dim A^2`, the rank of the structure matrix.
    pub fn dim_square(&self) -> usize {
        self.matrix.rank()
    }

    /// Structure matrix in the basis given by the columns of `c`:
    /// `C^-1 M C^(2)`. Fails if the new basis is not natural.
    pub fn change_basis(&self, c: &Mat) -> Result<EvolutionAlgebra, AlgebraError> {
        let n = self.dim();
        if c.rows() != n || c.cols() != n {
            return Err(AlgebraError::DimensionMismatch(format!(
                "basis matrix {}x{}, dim {n}",
                c.rows(),
                c.cols()
            )));
        }
        let cinv = c.inverse()?;
        let cols: Vec<Vector> = (0..n).map(|j| c.col(j)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let p = self.mul(&cols[i], &cols[j])?;
                if p.iter().any(|x| !x.is_zero()) {
                    return Err(AlgebraError::NotNaturalBasis(i, j));
                }
            }
        }
        let m = cinv.matmul(&self.matrix)?.matmul(&c.hadamard_square())?;
        EvolutionAlgebra::new(snap(m))
    }

    /// The named algebra of dimension `n` over `field`.
    pub fn named(which: Named, field: FieldSpec) -> Result<Self, AlgebraError> {
        let n = match which {
            Named::O(n) | Named::E(n) | Named::N(n) => n,
            Named::I(n) => {
                if n < 2 {
                    return Err(AlgebraError::InvalidDimension(n));
                }
                n
            }
        };
        if n == 0 {
            return Err(AlgebraError::InvalidDimension(0));
        }
        let one = Scalar::one(field);
        let mut m = Mat::zeros(field, n, n);
        match which {
            Named::O(_) => {}
            Named::E(_) => {
                for j in 0..n {
                    m[(0, j)] = one.clone();
                }
            }
            Named::I(_) => {
                let i = Scalar::imag_unit(field)?;
                for j in 0..n {
                    m[(0, j)] = one.clone();
                    m[(1, j)] = i.clone();
                }
            }
            Named::N(_) => {
                for j in 1..n {
                    m[(0, j)] = one.clone();
                }
            }
        }
        EvolutionAlgebra::new(m)
    }

    /// Direct sum: block-diagonal structure matrix.
    pub fn direct_sum(&self, other: &EvolutionAlgebra) -> Result<EvolutionAlgebra, AlgebraError> {
        if self.field() != other.field() {
            return Err(ScalarError::FieldMismatch(self.field(), other.field()).into());
        }
        let (a, b) = (self.dim(), other.dim());
        let f = self.field();
        let m = Mat::from_fn(f, a + b, a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.matrix[(i, j)].clone(),
            (false, false) => other.matrix[(i - a, j - a)].clone(),
            _ => Scalar::zero(f),
        });
        EvolutionAlgebra::new(m)
    }

    /// Graphviz DOT of the associated graph: an edge `i -> j` whenever
    /// `w_ij != 0`. Edge labels carry the weights when `weighted` is set.
    pub fn graph_export(&self, weighted: bool) -> String {
        let n = self.dim();
        let mut out = String::from("digraph evoalg {\n");
        for i in 0..n {
            let _ = writeln!(out, "  {};", i + 1);
        }
        for i in 0..n {
            for j in 0..n {
                let w = self.w(i, j);
                if !w.is_zero() {
                    if weighted {
                        let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", i + 1, j + 1, w);
                    } else {
                        let _ = writeln!(out, "  {} -> {};", i + 1, j + 1);
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Replaces approximately-zero entries by exact zeros.
fn snap(m: Mat) -> Mat {
    if m.field().is_exact() {
        return m;
    }
    let f = m.field();
    Mat::from_fn(f, m.rows(), m.cols(), |i, j| {
        let x = &m[(i, j)];
        if x.is_zero() {
            Scalar::zero(f)
        } else {
            x.clone()
        }
    })
}

/// The product in `a` as a free function.
pub fn mul(a: &EvolutionAlgebra, x: &[Scalar], y: &[Scalar]) -> Result<Vector, AlgebraError> {
    a.mul(x, y)
}

pub fn annihilator(a: &EvolutionAlgebra) -> Vec<usize> {
    a.annihilator()
}

pub fn is_nondegenerate(a: &EvolutionAlgebra) -> bool {
    a.is_nondegenerate()
}

pub fn change_basis(a: &EvolutionAlgebra, c: &Mat) -> Result<EvolutionAlgebra, AlgebraError> {
    a.change_basis(c)
}

pub fn make_named(which: Named, field: FieldSpec) -> Result<EvolutionAlgebra, AlgebraError> {
    EvolutionAlgebra::named(which, field)
}

pub fn graph_export(a: &EvolutionAlgebra, weighted: bool) -> String {
    a.graph_export(weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    const Q: FieldSpec = FieldSpec::GaussianRational;

    fn alg(rows: &[&[&str]]) -> EvolutionAlgebra {
        EvolutionAlgebra::from_rows(Q, rows.iter().map(|r| r.iter().map(|s| qi(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn product_of_basis_vectors() {
        let a = alg(&[&["1", "2"], &["3", "4"]]);
        let e1 = vec![qi("1"), qi("0")];
        let e2 = vec![qi("0"), qi("1")];
        assert_eq!(a.mul(&e1, &e1).unwrap(), vec![qi("1"), qi("3")]);
        assert_eq!(a.mul(&e1, &e2).unwrap(), vec![qi("0"), qi("0")]);
    }

    #[test]
    fn annihilator_of_zero_algebra() {
        let o = EvolutionAlgebra::named(Named::O(3), Q).unwrap();
        assert_eq!(o.annihilator(), vec![0, 1, 2]);
        assert!(!o.is_nondegenerate());
        assert!(EvolutionAlgebra::named(Named::E(3), Q)
            .unwrap()
            .annihilator()
            .is_empty());
    }

    #[test]
    fn change_basis_rules() {
        let e2 = EvolutionAlgebra::named(Named::E(2), Q).unwrap();
        let id = Mat::identity(Q, 2);
        assert_eq!(e2.change_basis(&id).unwrap(), e2);
        let sing = Mat::from_rows(Q, vec![vec![qi("1"), qi("1")], vec![qi("1"), qi("1")]]).unwrap();
        assert_eq!(e2.change_basis(&sing), Err(AlgebraError::Singular));
        let shear = Mat::from_rows(Q, vec![vec![qi("1"), qi("1")], vec![qi("0"), qi("1")]]).unwrap();
        assert_eq!(e2.change_basis(&shear), Err(AlgebraError::NotNaturalBasis(0, 1)));
        // (1,1),(1,-1) is natural for E_2 since 1*1 + 1*(-1) = 0
        let rot = Mat::from_rows(Q, vec![vec![qi("1"), qi("1")], vec![qi("1"), qi("-1")]]).unwrap();
        let b = e2.change_basis(&rot).unwrap();
        assert_eq!(b.matrix().col(0), vec![qi("1"), qi("1")]);
    }

    #[test]
    fn dot_export() {
        let e2 = EvolutionAlgebra::named(Named::E(2), Q).unwrap();
        let dot = e2.graph_export(true);
        assert!(dot.contains("1 -> 1 [label=\"1\"];"));
        assert!(dot.contains("1 -> 2 [label=\"1\"];"));
        assert!(!dot.contains("2 -> "));
    }
}
