//! Canonical labels and the representative algebra of each label.

use std::fmt;

use crate::algebra::{AlgebraError, EvolutionAlgebra, Named};
use crate::scalar::{FieldSpec, Scalar};

/// Family of a canonical form. `A2_*`/`A3_*` are the two- and
/// three-dimensional algebras with a unique natural basis up to scaling and
/// permutation, `B3_*` the three-dimensional ones with delta index (2,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    O(usize),
    E(usize),
    I(usize),
    A2(u8),
    A3(u8),
    B3(u8),
}

impl Family {
    /// Number of scalar parameters of the family (the sign slot of `B3_9`
    /// is not counted).
    pub fn arity(self) -> usize {
        match self {
            Family::O(_) | Family::E(_) | Family::I(_) => 0,
            Family::A2(k) => [0, 1, 2][k as usize - 1],
            Family::A3(k) => [3, 1, 4, 3, 2, 5, 6][k as usize - 1],
            Family::B3(k) => [0, 0, 1, 0, 2, 1, 3, 1, 0, 0, 0, 2, 1, 0, 1][k as usize - 1],
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Family::O(n) | Family::E(n) | Family::I(n) => n,
            Family::A2(_) => 2,
            Family::A3(_) | Family::B3(_) => 3,
        }
    }

    /// Every family of the two- and three-dimensional lists, in listed order.
    pub fn listed() -> Vec<Family> {
        let mut v = vec![Family::E(2), Family::I(2)];
        v.extend((1..=3).map(Family::A2));
        v.extend([Family::E(3), Family::I(3)]);
        v.extend((1..=7).map(Family::A3));
        v.extend((1..=15).map(Family::B3));
        v
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::O(n) => write!(f, "O_{n}"),
            Family::E(n) => write!(f, "E_{n}"),
            Family::I(n) => write!(f, "I_{n}"),
            Family::A2(k) => write!(f, "A2_{k}"),
            Family::A3(k) => write!(f, "A3_{k}"),
            Family::B3(k) => write!(f, "B3_{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalLabel {
    pub family: Family,
    pub params: Vec<Scalar>,
    /// Only used by `B3_9`.
    pub sign: Option<Sign>,
}

impl CanonicalLabel {
    pub fn new(family: Family, params: Vec<Scalar>) -> Self {
        CanonicalLabel {
            family,
            params,
            sign: None,
        }
    }

    pub fn signed(family: Family, sign: Sign) -> Self {
        CanonicalLabel {
            family,
            params: Vec::new(),
            sign: Some(sign),
        }
    }

    /// The canonical algebra carrying this label.
    pub fn representative(&self, field: FieldSpec) -> Result<EvolutionAlgebra, AlgebraError> {
        if self.params.len() != self.family.arity() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} takes {} parameters, got {}",
                self.family,
                self.family.arity(),
                self.params.len()
            )));
        }
        let rows = match self.family {
            Family::O(n) => return EvolutionAlgebra::named(Named::O(n), field),
            Family::E(n) => return EvolutionAlgebra::named(Named::E(n), field),
            Family::I(n) => return EvolutionAlgebra::named(Named::I(n), field),
            _ => self.rows(field)?,
        };
        EvolutionAlgebra::from_rows(field, rows)
    }

    fn rows(&self, field: FieldSpec) -> Result<Vec<Vec<Scalar>>, AlgebraError> {
        let o = || Scalar::zero(field);
        let l = || Scalar::one(field);
        let i = || Scalar::imag_unit(field);
        let p = |k: usize| self.params[k].convert(field);
        let (a, b, c, d, e, z) = (0, 1, 2, 3, 4, 5);
        let r = match self.family {
            Family::A2(1) => vec![vec![o(), l()], vec![l(), o()]],
            Family::A2(2) => vec![vec![o(), p(a)?], vec![l(), l()]],
            Family::A2(3) => vec![vec![l(), p(a)?], vec![p(b)?, l()]],
            Family::A3(1) => vec![vec![o(), l(), p(a)?], vec![p(b)?, o(), l()], vec![l(), p(c)?, o()]],
            Family::A3(2) => vec![vec![o(), o(), o()], vec![p(a)?, o(), l()], vec![l(), l(), o()]],
            Family::A3(3) => vec![vec![o(), p(a)?, p(b)?], vec![p(c)?, o(), p(d)?], vec![l(), l(), l()]],
            Family::A3(4) => vec![vec![o(), p(a)?, p(b)?], vec![l(), o(), p(c)?], vec![o(), l(), l()]],
            Family::A3(5) => vec![vec![o(), l(), p(a)?], vec![l(), o(), p(b)?], vec![o(), o(), l()]],
            Family::A3(6) => vec![vec![o(), p(a)?, p(b)?], vec![l(), l(), p(c)?], vec![p(d)?, p(e)?, l()]],
            Family::A3(7) => vec![
                vec![l(), p(a)?, p(b)?],
                vec![p(c)?, l(), p(d)?],
                vec![p(e)?, p(z)?, l()],
            ],
            Family::B3(1) => vec![vec![o(), o(), o()], vec![o(), o(), l()], vec![l(), l(), o()]],
            Family::B3(2) => vec![vec![o(), o(), l()], vec![o(), o(), i()?], vec![l(), l(), o()]],
            Family::B3(3) => vec![vec![o(), o(), o()], vec![o(), o(), l()], vec![p(a)?, p(a)?, l()]],
            Family::B3(4) => vec![vec![o(), o(), l()], vec![o(), o(), i()?], vec![l(), l(), l()]],
            Family::B3(5) => vec![vec![l(), l(), p(a)?], vec![o(), o(), p(b)?], vec![l(), l(), o()]],
            Family::B3(6) => vec![vec![l(), l(), p(a)?], vec![o(), o(), l()], vec![o(), o(), o()]],
            Family::B3(7) => vec![vec![l(), l(), p(b)?], vec![o(), o(), p(c)?], vec![p(a)?, p(a)?, l()]],
            Family::B3(8) => vec![vec![l(), l(), p(a)?], vec![i()?, i()?, o()], vec![l(), l(), o()]],
            Family::B3(9) => {
                let s = match self.sign {
                    Some(Sign::Minus) => -i()?,
                    _ => i()?,
                };
                vec![vec![l(), l(), l()], vec![i()?, i()?, s], vec![l(), l(), o()]]
            }
            Family::B3(10) => vec![vec![l(), l(), l()], vec![i()?, i()?, o()], vec![o(), o(), o()]],
            Family::B3(11) => vec![vec![l(), l(), l()], vec![i()?, i()?, -i()?], vec![o(), o(), o()]],
            Family::B3(12) => vec![vec![l(), l(), p(a)?], vec![i()?, i()?, p(b)?], vec![l(), l(), l()]],
            Family::B3(13) => vec![vec![l(), l(), p(a)?], vec![i()?, i()?, o()], vec![o(), o(), l()]],
            Family::B3(14) => vec![vec![l(), l(), l()], vec![i()?, i()?, i()?], vec![o(), o(), l()]],
            Family::B3(15) => {
                let al = p(a)?;
                let m = -(&al * &i()?);
                vec![vec![l(), l(), al], vec![i()?, i()?, m], vec![o(), o(), l()]]
            }
            other => {
                return Err(AlgebraError::DimensionMismatch(format!("no family {other}")));
            }
        };
        Ok(r)
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if let Some(s) = self.sign {
            return write!(f, "({})", if s == Sign::Plus { "+" } else { "-" });
        }
        if !self.params.is_empty() {
            let v: Vec<String> = self.params.iter().map(ToString::to_string).collect();
            write!(f, "({})", v.join(","))?;
        }
        Ok(())
    }
}
