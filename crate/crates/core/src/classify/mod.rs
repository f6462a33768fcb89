//! Canonical labels, isomorphism decisions and automorphisms.

mod aut;
mod label;
mod rank2;
mod twoli;

use thiserror::Error;

pub use aut::{
    gen_automorphism_e, gen_automorphism_i2, is_automorphism_e, is_automorphism_i, random_conformal, GroupElement,
};
pub use label::{CanonicalLabel, Family, Sign};
pub use twoli::{permutation_search, permutations, SearchOutcome};

use crate::algebra::{AlgebraError, EvolutionAlgebra};
use crate::exec::Exec;
use crate::invariants::{canonical_presentation, decompose, delta_index, delta_trace, BlockKind, InvariantError};
use crate::linalg::{LinalgError, Mat};
use crate::scalar::{FieldSpec, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("algebra is degenerate (annihilator is nonzero)")]
    Degenerate,
    #[error("extension required: a root of {0} is not in the field")]
    ExtensionRequired(Scalar),
    #[error("dim A^2 is not 1")]
    NotSquare1,
    #[error("no classification in dimension {0}")]
    UnsupportedDimension(usize),
    #[error("classification is not available over {0}")]
    UnsupportedField(FieldSpec),
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl From<InvariantError> for ClassifyError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Degenerate => ClassifyError::Degenerate,
            InvariantError::ExtensionRequired(r) => ClassifyError::ExtensionRequired(r),
            InvariantError::NotABlockAlgebra => ClassifyError::Internal(e.to_string()),
            InvariantError::Algebra(a) => ClassifyError::Algebra(a),
        }
    }
}

impl From<ScalarError> for ClassifyError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::ExtensionRequired(r) => ClassifyError::ExtensionRequired(r),
            other => ClassifyError::Algebra(other.into()),
        }
    }
}

impl From<LinalgError> for ClassifyError {
    fn from(e: LinalgError) -> Self {
        ClassifyError::Algebra(e.into())
    }
}

/// A canonical label and a basis (columns, in input coordinates) in which
/// the input has exactly the representative's structure matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub label: CanonicalLabel,
    pub witness: Mat,
}

fn check_input(a: &EvolutionAlgebra) -> Result<(), ClassifyError> {
    if a.field().characteristic() == 2 {
        return Err(ClassifyError::UnsupportedField(a.field()));
    }
    if !a.is_nondegenerate() {
        return Err(ClassifyError::Degenerate);
    }
    Ok(())
}

fn finish(a: &EvolutionAlgebra, label: CanonicalLabel, witness: Mat) -> Result<Classification, ClassifyError> {
    let rep = label.representative(a.field())?;
    match a.change_basis(&witness) {
        Ok(got) if got == rep => Ok(Classification { label, witness }),
        Ok(got) => Err(ClassifyError::Internal(format!(
            "witness for {label} gives\n{}",
            got.matrix()
        ))),
        Err(e) => Err(ClassifyError::Internal(format!("witness for {label}: {e}"))),
    }
}

/// Classifies any non-degenerate algebra of dimension at most 3, and any
/// algebra with `dim A^2 = 1`.
pub fn classify(a: &EvolutionAlgebra) -> Result<Classification, ClassifyError> {
    check_input(a)?;
    match a.dim() {
        2 => classify2(a),
        3 => classify3(a),
        n => {
            if decompose(a)?.blocks.len() == 1 {
                classify_square1(a)
            } else {
                Err(ClassifyError::UnsupportedDimension(n))
            }
        }
    }
}

/// `E_n` or `I_n`, for algebras with `dim A^2 = 1`.
pub fn classify_square1(a: &EvolutionAlgebra) -> Result<Classification, ClassifyError> {
    check_input(a)?;
    if decompose(a)?.blocks.len() != 1 {
        return Err(ClassifyError::NotSquare1);
    }
    let p = canonical_presentation(a)?;
    let n = a.dim();
    let family = match p.blocks[0].0.kind {
        BlockKind::E => Family::E(n),
        BlockKind::I => Family::I(n),
        BlockKind::O => return Err(ClassifyError::Internal("single O block".into())),
    };
    finish(a, CanonicalLabel::new(family, vec![]), p.witness)
}

fn classify_2li(a: &EvolutionAlgebra) -> Result<Classification, ClassifyError> {
    let p = canonical_presentation(a)?;
    let kinds: Vec<BlockKind> = p.blocks.iter().map(|(t, _)| t.kind).collect();
    match twoli::normalize(&p.algebra, &kinds) {
        Ok(nf) => finish(a, nf.label, p.witness.matmul(&nf.basis)?),
        Err(Some(r)) => Err(ClassifyError::ExtensionRequired(r)),
        Err(None) => Err(ClassifyError::Internal("no family matches".into())),
    }
}

pub fn classify2(a: &EvolutionAlgebra) -> Result<Classification, ClassifyError> {
    check_input(a)?;
    if a.dim() != 2 {
        return Err(ClassifyError::Mismatch(format!(
            "expected dimension 2, got {}",
            a.dim()
        )));
    }
    if delta_index(a)?.0.len() == 1 {
        classify_square1(a)
    } else {
        classify_2li(a)
    }
}

pub fn classify3(a: &EvolutionAlgebra) -> Result<Classification, ClassifyError> {
    check_input(a)?;
    if a.dim() != 3 {
        return Err(ClassifyError::Mismatch(format!(
            "expected dimension 3, got {}",
            a.dim()
        )));
    }
    match delta_index(a)?.0.as_slice() {
        [3] => classify_square1(a),
        [2, 1] => {
            let p = canonical_presentation(a)?;
            let (label, basis) = rank2::normalize(&p.algebra, p.blocks[0].0.kind, p.blocks[1].0.kind)?;
            finish(a, label, p.witness.matmul(&basis)?)
        }
        _ => classify_2li(a),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsoVerdict {
    /// Columns of the matrix are a basis of the first algebra in which it
    /// has the structure matrix of the second.
    Isomorphic(Mat),
    NotIsomorphic(String),
    Unknown(String),
}

/// Decides whether `a` and `b` are isomorphic over their common field.
pub fn iso_check(a: &EvolutionAlgebra, b: &EvolutionAlgebra) -> Result<IsoVerdict, ClassifyError> {
    iso_check_with(a, b, Exec::default())
}

pub fn iso_check_with(a: &EvolutionAlgebra, b: &EvolutionAlgebra, exec: Exec) -> Result<IsoVerdict, ClassifyError> {
    if a.field() != b.field() {
        return Err(ClassifyError::Mismatch(format!(
            "fields {} and {}",
            a.field(),
            b.field()
        )));
    }
    if a.dim() != b.dim() {
        return Err(ClassifyError::Mismatch(format!(
            "dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    check_input(a)?;
    check_input(b)?;
    let n = a.dim();
    let small = n <= 3;
    let differ = |what: String| {
        IsoVerdict::NotIsomorphic(if small {
            format!("canonical labels differ: {what}")
        } else {
            what
        })
    };
    let (da, db) = (delta_index(a)?, delta_index(b)?);
    if da != db {
        return Ok(differ(format!("delta index {da} vs {db}")));
    }
    let (ta, tb) = (delta_trace(a)?, delta_trace(b)?);
    if ta != tb {
        return Ok(differ(format!("Delta trace {ta} vs {tb}")));
    }
    if small || da.0.len() == 1 {
        match (classify(a), classify(b)) {
            (Ok(x), Ok(y)) => {
                if x.label != y.label {
                    return Ok(differ(format!("{} vs {}", x.label, y.label)));
                }
                let c = x.witness.matmul(&y.witness.inverse()?)?;
                return checked(a, b, c);
            }
            (Err(ClassifyError::ExtensionRequired(r)), _) | (_, Err(ClassifyError::ExtensionRequired(r))) => {
                if !da.is_2li() {
                    return Ok(IsoVerdict::Unknown(format!(
                        "extension required: a root of {r} is not in the field"
                    )));
                }
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    if da.is_2li() {
        return match permutation_search(a, b, exec) {
            SearchOutcome::Found(c) => checked(a, b, c),
            SearchOutcome::Exhausted => Ok(IsoVerdict::NotIsomorphic(
                "no permutation and scaling of the natural basis matches".into(),
            )),
            SearchOutcome::NeedsExtension => Ok(IsoVerdict::Unknown("scaling requires roots outside the field".into())),
        };
    }
    Ok(IsoVerdict::Unknown(format!(
        "no complete invariant for delta index {da} in dimension {n}"
    )))
}

fn checked(a: &EvolutionAlgebra, b: &EvolutionAlgebra, c: Mat) -> Result<IsoVerdict, ClassifyError> {
    verify_iso_reason(a, b, &c).map_err(ClassifyError::Internal)?;
    Ok(IsoVerdict::Isomorphic(c))
}

/// True iff `c` is invertible, its columns form a natural basis of `a`,
/// and `a` has the structure matrix of `b` in that basis.
pub fn verify_iso(a: &EvolutionAlgebra, b: &EvolutionAlgebra, c: &Mat) -> bool {
    verify_iso_reason(a, b, c).is_ok()
}

pub fn verify_iso_reason(a: &EvolutionAlgebra, b: &EvolutionAlgebra, c: &Mat) -> Result<(), String> {
    if a.dim() != b.dim() {
        return Err(format!("dimensions {} and {}", a.dim(), b.dim()));
    }
    let got = a.change_basis(c).map_err(|e| e.to_string())?;
    if got != *b {
        return Err("structure matrices differ after the change of basis".into());
    }
    Ok(())
}
