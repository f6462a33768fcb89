//! Derivation algebras: `D(xy) = D(x) y + x D(y)`.
//!
//! A derivation is stored as a matrix whose column `i` holds `D(e_i)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::EvolutionAlgebra;
use crate::exec::Exec;
use crate::invariants::{canonical_presentation, decompose, InvariantError};
use crate::linalg::Mat;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DerivationError {
    #[error("not available over {0}")]
    UnsupportedField(FieldSpec),
    #[error("algebra is degenerate (annihilator is nonzero)")]
    Degenerate,
    #[error("{0}")]
    Invariant(#[from] InvariantError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationSpace {
    pub algebra_dim: usize,
    pub field: FieldSpec,
    /// Nullspace basis of the Leibniz system, one free coordinate set to 1
    /// per element.
    pub basis: Vec<Mat>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Coefficient rows of the Leibniz identity on the pair `(i, j)`, over the
/// unknowns `d[k][l]` at index `k * n + l`.
fn leibniz_rows(a: &EvolutionAlgebra, i: usize, j: usize) -> Vec<Vec<Scalar>> {
    let n = a.dim();
    let f = a.field();
    let var = |k: usize, l: usize| k * n + l;
    (0..n)
        .map(|r| {
            let mut row = vec![Scalar::zero(f); n * n];
            if i != j {
                // d_ji e_j^2 + d_ij e_i^2 = 0, component r
                row[var(j, i)] = a.w(r, j).clone();
                row[var(i, j)] = row[var(i, j)].clone() + a.w(r, i).clone();
            } else {
                // D(e_i^2) - 2 d_ii e_i^2 = 0, component r
                for k in 0..n {
                    row[var(r, k)] = a.w(k, i).clone();
                }
                let two = Scalar::from_i64(f, 2);
                row[var(i, i)] = row[var(i, i)].clone() - two * a.w(r, i);
            }
            row
        })
        .collect()
}

/// Every derivation of `a`, by solving the Leibniz identity on basis pairs.
pub fn derivation_space(a: &EvolutionAlgebra) -> Result<DerivationSpace, DerivationError> {
    derivation_space_with(a, Exec::default())
}

pub fn derivation_space_with(a: &EvolutionAlgebra, exec: Exec) -> Result<DerivationSpace, DerivationError> {
    let f = a.field();
    if f.characteristic() == 2 {
        return Err(DerivationError::UnsupportedField(f));
    }
    let n = a.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let rows: Vec<Vec<Scalar>> = exec
        .map(&pairs, |&(i, j)| leibniz_rows(a, i, j))
        .into_iter()
        .flatten()
        .collect();
    let sys = Mat::from_rows(f, rows).expect("rectangular system");
    let basis = sys
        .nullspace()
        .into_iter()
        .map(|v| Mat::from_fn(f, n, n, |k, l| v[k * n + l].clone()))
        .collect();
    Ok(DerivationSpace {
        algebra_dim: n,
        field: f,
        basis,
    })
}

/// Leibniz identity on all basis pairs.
pub fn is_derivation(a: &EvolutionAlgebra, d: &Mat) -> bool {
    let n = a.dim();
    if d.rows() != n || d.cols() != n || d.field() != a.field() {
        return false;
    }
    let f = a.field();
    let e = |i: usize| -> Vec<Scalar> { (0..n).map(|k| Scalar::from_i64(f, (k == i) as i64)).collect() };
    (0..n).all(|i| {
        (i..n).all(|j| {
            let (ei, ej) = (e(i), e(j));
            let lhs = d.mul_vec(&a.mul(&ei, &ej).expect("dims")).expect("dims");
            let x = a.mul(&d.col(i), &ej).expect("dims");
            let y = a.mul(&ei, &d.col(j)).expect("dims");
            lhs.iter().zip(x.iter().zip(&y)).all(|(l, (p, q))| *l == p + q)
        })
    })
}

/// `D1 D2 - D2 D1`.
pub fn commutator(d1: &Mat, d2: &Mat) -> Mat {
    d1.matmul(d2)
        .expect("square")
        .sub(&d2.matmul(d1).expect("square"))
        .expect("square")
}

fn restricted_ok(a: &EvolutionAlgebra, d: &Mat, groups: &[Vec<usize>]) -> bool {
    let n = a.dim();
    let owner: Vec<usize> = (0..n)
        .map(|i| groups.iter().position(|g| g.contains(&i)).expect("partition"))
        .collect();
    let block_diag = (0..n).all(|k| (0..n).all(|l| owner[k] == owner[l] || d[(k, l)].is_zero()));
    block_diag
        && groups.iter().all(|g| {
            let sub = EvolutionAlgebra::new(a.matrix().select(g, g)).expect("square block");
            is_derivation(&sub, &d.select(g, g))
        })
}

/// `d` is block-diagonal along the standard decomposition and each block
/// is a derivation of its block algebra; checked both in the given basis
/// and, when it exists, in the canonical presentation.
pub fn block_restriction_check(a: &EvolutionAlgebra, d: &Mat) -> Result<bool, DerivationError> {
    if !a.is_nondegenerate() {
        return Err(DerivationError::Degenerate);
    }
    let dec = decompose(a)?;
    let groups: Vec<Vec<usize>> = dec.blocks.iter().map(|b| b.indices.clone()).collect();
    if !restricted_ok(a, d, &groups) {
        return Ok(false);
    }
    match canonical_presentation(a) {
        Ok(p) => {
            let c = &p.witness;
            let dc = c
                .inverse()
                .expect("basis")
                .matmul(d)
                .and_then(|m| m.matmul(c))
                .expect("square");
            let groups: Vec<Vec<usize>> = p.blocks.iter().map(|(_, r)| r.clone().collect()).collect();
            Ok(restricted_ok(&p.algebra, &dc, &groups))
        }
        Err(InvariantError::ExtensionRequired(_)) => Ok(true),
        Err(e) => Err(e.into()),
    }
}

type Poly = BTreeMap<Vec<u8>, Scalar>;

fn poly_mul_linear(p: &Poly, lin: &[Scalar]) -> Poly {
    let mut out = Poly::new();
    for (mono, c) in p {
        for (m, l) in lin.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            let mut k = mono.clone();
            k[m] += 1;
            let v = c * l;
            match out.get_mut(&k) {
                Some(x) => *x = x.clone() + v,
                None => {
                    out.insert(k, v);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn poly_add(acc: &mut Poly, p: Poly, negate: bool) {
    for (k, v) in p {
        let v = if negate { -v } else { v };
        match acc.get_mut(&k) {
            Some(x) => *x = x.clone() + v,
            None => {
                acc.insert(k, v);
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
}

/// `det(sum_m t_m D_m)` as a polynomial in the `t_m`, by expanding over
/// the columns with row subsets as states.
pub fn symbolic_determinant(s: &DerivationSpace) -> BTreeMap<Vec<u8>, Scalar> {
    let n = s.algebra_dim;
    let m = s.basis.len();
    let f = s.field;
    let mut states: Vec<Poly> = vec![Poly::new(); 1 << n];
    states[0].insert(vec![0; m], Scalar::one(f));
    for col in 0..n {
        let mut next: Vec<Poly> = vec![Poly::new(); 1 << n];
        for (set, p) in states.iter().enumerate() {
            if p.is_empty() || (set as u32).count_ones() as usize != col {
                continue;
            }
            for r in (0..n).filter(|r| set & (1 << r) == 0) {
                let lin: Vec<Scalar> = s.basis.iter().map(|d| d[(r, col)].clone()).collect();
                let term = poly_mul_linear(p, &lin);
                let above = (set >> (r + 1)).count_ones();
                poly_add(&mut next[set | (1 << r)], term, above % 2 == 1);
            }
        }
        states = next;
    }
    states.pop().unwrap_or_default()
}

/// Random exact evaluations of `det(sum t_m D_m)`; `true` as soon as one is
/// nonzero.
fn some_evaluation_nonzero(s: &DerivationSpace, points: usize, seed: u64) -> bool {
    let f = s.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s.algebra_dim;
    (0..points).any(|_| {
        let t: Vec<Scalar> = s
            .basis
            .iter()
            .map(|_| Scalar::from_i64(f, rng.gen_range(-1000..=1000)))
            .collect();
        let mut m = Mat::zeros(f, n, n);
        for (d, c) in s.basis.iter().zip(&t) {
            m = m.add(&d.scale(c)).expect("same shape");
        }
        m.det().is_ok_and(|x| !x.is_zero())
    })
}

/// Whether some derivation in the space is invertible. Exact for
/// `n <= 5` (full symbolic determinant); beyond that a nonzero value at one
/// of 20 random points proves `true`, and `false` holds with probability at
/// least `1 - (n / 2001)^20`.
pub fn has_nonsingular_derivation(s: &DerivationSpace) -> Result<bool, DerivationError> {
    if s.field != FieldSpec::GaussianRational {
        return Err(DerivationError::UnsupportedField(s.field));
    }
    if s.basis.is_empty() {
        return Ok(s.algebra_dim == 0);
    }
    if some_evaluation_nonzero(s, 20, 0x5eed) {
        return Ok(true);
    }
    if s.algebra_dim <= 5 {
        return Ok(!symbolic_determinant(s).is_empty());
    }
    Ok(false)
}
