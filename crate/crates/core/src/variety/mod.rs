//! Degenerations along one-parameter families, orbit dimensions and
//! polynomial identities.

mod identity;
mod ratfun;

use thiserror::Error;

pub use identity::{
    check_identity, check_identity_with, degree3_monomials, find_multilinear_identities, IdentityError, IdentitySpec,
    Tree,
};
pub use ratfun::{RatFun, RatFunError};

use crate::algebra::{EvolutionAlgebra, Named};
use crate::derivations::{derivation_space, DerivationError};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VarietyError {
    #[error("g * g_inv is not the identity")]
    NotInverse,
    #[error("entry c_{}{}^{} has a pole at t = 0", .0 + 1, .1 + 1, .2 + 1)]
    NegativePower(usize, usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown built-in family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    RatFun(#[from] RatFunError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

/// Square matrix of rational functions; `[r][c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMat {
    pub entries: Vec<Vec<RatFun>>,
}

impl RatMat {
    pub fn from_rows(entries: Vec<Vec<RatFun>>) -> Result<RatMat, VarietyError> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(VarietyError::DimensionMismatch("matrix is not square".into()));
        }
        Ok(RatMat { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> RatFun) -> RatMat {
        RatMat {
            entries: (0..n).map(|r| (0..n).map(|c| f(r, c)).collect()).collect(),
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> RatMat {
        RatMat::from_fn(n, |r, c| {
            if r == c {
                RatFun::one(field)
            } else {
                RatFun::zero(field)
            }
        })
    }

    pub fn diag(field: FieldSpec, d: Vec<RatFun>) -> RatMat {
        let n = d.len();
        RatMat::from_fn(n, |r, c| if r == c { d[r].clone() } else { RatFun::zero(field) })
    }

    /// Constant matrix.
    pub fn constant(m: &crate::linalg::Mat) -> RatMat {
        RatMat::from_fn(m.rows(), |r, c| RatFun::constant(m[(r, c)].clone()))
    }

    pub fn matmul(&self, o: &RatMat) -> RatMat {
        let n = self.dim();
        let f = self.entries[0][0].field();
        RatMat::from_fn(n, |r, c| {
            (0..n).fold(RatFun::zero(f), |acc, k| {
                acc.add(&self.entries[r][k].mul(&o.entries[k][c]))
            })
        })
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        (0..n).all(|r| {
            (0..n).all(|c| {
                let x = &self.entries[r][c];
                if r == c {
                    *x == RatFun::one(x.field())
                } else {
                    x.is_zero()
                }
            })
        })
    }

    /// Value at `t = t0`, or `None` at a pole.
    pub fn eval(&self, t0: &Scalar) -> Option<crate::linalg::Mat> {
        let n = self.dim();
        let f = t0.field();
        let vals: Option<Vec<Vec<Scalar>>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.eval(t0)).collect())
            .collect();
        crate::linalg::Mat::from_rows(f, vals?).ok().filter(|m| m.rows() == n)
    }
}

/// Symmetric bilinear structure constants: `e_i e_j = sum_k c[i][j][k] e_k`.
pub type Bilinear<T> = Vec<Vec<Vec<T>>>;

/// A commutative algebra depending on `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricAlgebra {
    pub n: usize,
    pub field: FieldSpec,
    pub constants: Bilinear<RatFun>,
}

/// Constants of an evolution algebra: `e_i e_i = sum_k w_ki e_k`, and zero
/// off the diagonal.
pub fn bilinear(a: &EvolutionAlgebra) -> Bilinear<Scalar> {
    let n = a.dim();
    let f = a.field();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| if i == j { a.w(k, i).clone() } else { Scalar::zero(f) })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Transport of the product of `a` along `g`:
/// `(g * mu)(x, y) = g mu(g^-1 x, g^-1 y)`.
pub fn act(g: &RatMat, g_inv: &RatMat, a: &EvolutionAlgebra) -> Result<ParametricAlgebra, VarietyError> {
    let n = a.dim();
    if g.dim() != n || g_inv.dim() != n {
        return Err(VarietyError::DimensionMismatch(format!(
            "g is {}x{}, algebra dim {n}",
            g.dim(),
            g.dim()
        )));
    }
    if !g.matmul(g_inv).is_identity() {
        return Err(VarietyError::NotInverse);
    }
    let f = a.field();
    let w: Vec<Vec<RatFun>> = (0..n)
        .map(|r| (0..n).map(|c| RatFun::constant(a.w(r, c).clone())).collect())
        .collect();
    let u = |i: usize, l: usize| &g_inv.entries[l][i];
    // mu(u_i, u_j) = sum_l u_i[l] u_j[l] e_l^2, then apply g
    let pair = |i: usize, j: usize| -> Vec<RatFun> {
        let coeff: Vec<RatFun> = (0..n).map(|l| u(i, l).mul(u(j, l))).collect();
        let prod: Vec<RatFun> = (0..n)
            .map(|k| (0..n).fold(RatFun::zero(f), |acc, l| acc.add(&coeff[l].mul(&w[k][l]))))
            .collect();
        (0..n)
            .map(|k| (0..n).fold(RatFun::zero(f), |acc, l| acc.add(&g.entries[k][l].mul(&prod[l]))))
            .collect()
    };
    let upper: Vec<Vec<Vec<RatFun>>> = (0..n).map(|i| (i..n).map(|j| pair(i, j)).collect()).collect();
    let constants = (0..n)
        .map(|i| (0..n).map(|j| upper[i.min(j)][i.max(j) - i.min(j)].clone()).collect())
        .collect();
    Ok(ParametricAlgebra { n, field: f, constants })
}

/// Entrywise value at `t = 0`.
pub fn limit_t0(p: &ParametricAlgebra) -> Result<Bilinear<Scalar>, VarietyError> {
    p.constants
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| {
                    v.iter()
                        .enumerate()
                        .map(|(k, x)| x.at_zero().ok_or(VarietyError::NegativePower(i, j, k)))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// True iff the family `g(t) * a` tends to `b` as `t -> 0`.
pub fn check_degeneration(
    a: &EvolutionAlgebra,
    b: &EvolutionAlgebra,
    g: &RatMat,
    g_inv: &RatMat,
) -> Result<bool, VarietyError> {
    if a.dim() != b.dim() || a.field() != b.field() {
        return Err(VarietyError::DimensionMismatch(format!(
            "{}-dimensional over {} vs {}-dimensional over {}",
            a.dim(),
            a.field(),
            b.dim(),
            b.field()
        )));
    }
    let lim = limit_t0(&act(g, g_inv, a)?)?;
    Ok(lim == bilinear(b))
}

/// `n^2 - dim Der(a)`.
pub fn orbit_dim(a: &EvolutionAlgebra) -> Result<usize, VarietyError> {
    let n = a.dim();
    Ok(n * n - derivation_space(a)?.dim())
}

/// A built-in degeneration: source, target and the acting family.
#[derive(Clone, Debug)]
pub struct Degeneration {
    pub source: EvolutionAlgebra,
    pub target: EvolutionAlgebra,
    pub g: RatMat,
    pub g_inv: RatMat,
}

/// `E_k` (or `I_k`) padded with a zero algebra to dimension `n`.
pub fn padded(which: Named, n: usize, field: FieldSpec) -> Result<EvolutionAlgebra, VarietyError> {
    let k = match which {
        Named::E(k) | Named::I(k) | Named::N(k) | Named::O(k) => k,
    };
    let map = |e: crate::algebra::AlgebraError| VarietyError::DimensionMismatch(e.to_string());
    let a = EvolutionAlgebra::named(which, field).map_err(map)?;
    if k == n {
        return Ok(a);
    }
    a.direct_sum(&EvolutionAlgebra::named(Named::O(n - k), field).map_err(map)?)
        .map_err(map)
}

fn pow_t(f: FieldSpec, e: i32) -> RatFun {
    let t = RatFun::t(f);
    if e >= 0 {
        t.pow(e as u32)
    } else {
        RatFun::one(f).div(&t.pow((-e) as u32)).expect("t != 0")
    }
}

fn lit(s: &str, f: FieldSpec) -> RatFun {
    RatFun::parse(s, f).expect("built-in literal")
}

/// Built-in families:
/// - `En_to_In`: `E_n -> I_n`;
/// - `En_to_Nn`: `E_n -> N_n` with `g = diag(t^-2, t^-1, ..., t^-1)`;
/// - `Ek_drop:k`: `E_k + O -> E_(k-1) + O`, scaling `e_k` by `1/t`;
/// - `Ik_drop:k`: `I_k + O -> I_(k-1) + O`, likewise (k >= 3).
pub fn builtin(name: &str, n: usize, field: FieldSpec) -> Result<Degeneration, VarietyError> {
    let f = field;
    let unknown = || VarietyError::UnknownFamily(name.to_owned());
    let (base, k) = match name.split_once(':') {
        Some((b, k)) => (b, Some(k.parse::<usize>().map_err(|_| unknown())?)),
        None => (name, None),
    };
    match base {
        "En_to_In" => {
            if n < 2 {
                return Err(unknown());
            }
            let (g, g_inv) = e_to_i(n, f);
            Ok(Degeneration {
                source: padded(Named::E(n), n, f)?,
                target: padded(Named::I(n), n, f)?,
                g,
                g_inv,
            })
        }
        "En_to_Nn" => {
            let d: Vec<i32> = (0..n).map(|i| if i == 0 { 2 } else { 1 }).collect();
            Ok(Degeneration {
                source: padded(Named::E(n), n, f)?,
                target: padded(Named::N(n), n, f)?,
                g: RatMat::diag(f, d.iter().map(|&e| pow_t(f, -e)).collect()),
                g_inv: RatMat::diag(f, d.iter().map(|&e| pow_t(f, e)).collect()),
            })
        }
        "Ek_drop" | "Ik_drop" => {
            let k = k.unwrap_or(n);
            let is_e = base == "Ek_drop";
            let min = if is_e { 2 } else { 3 };
            if k < min || k > n {
                return Err(unknown());
            }
            let mk = |m: usize| if is_e { Named::E(m) } else { Named::I(m) };
            let scale = |e: i32| {
                (0..n)
                    .map(|i| if i == k - 1 { pow_t(f, e) } else { RatFun::one(f) })
                    .collect()
            };
            Ok(Degeneration {
                source: padded(mk(k), n, f)?,
                target: padded(mk(k - 1), n, f)?,
                g: RatMat::diag(f, scale(-1)),
                g_inv: RatMat::diag(f, scale(1)),
            })
        }
        _ => Err(unknown()),
    }
}

/// `E_n -> I_n`. In dimension 2 the family `h(e_1) = (e_1 + i e_2)/(2t^2)`,
/// `h(e_2) = (i(1-t^2) e_1 - (1+t^2) e_2)/(2t^2)`. From dimension 3 on the
/// remaining vectors are scaled by `1/((1+i)t)`, which leaves
/// `e_k^2 = i(e_1 + i e_2)` in the limit; a constant automorphism-like
/// rescaling `f` of the first two coordinates with `f(e_1 + i e_2) = i(e_1 + i e_2)`
/// then lands exactly on `I_n` without leaving Q(i).
fn e_to_i(n: usize, f: FieldSpec) -> (RatMat, RatMat) {
    let h2 = [["1/(2*t^2)", "i*(1-t^2)/(2*t^2)"], ["i/(2*t^2)", "-(1+t^2)/(2*t^2)"]];
    let g2 = [["1+t^2", "i*(1-t^2)"], ["i", "-1"]];
    let z = || RatFun::zero(f);
    let h = RatMat::from_fn(n, |r, c| match (r < 2, c < 2) {
        (true, true) => lit(h2[r][c], f),
        (false, false) if r == c => lit("1/((1+i)*t)", f),
        _ => z(),
    });
    let g = RatMat::from_fn(n, |r, c| match (r < 2, c < 2) {
        (true, true) => lit(g2[r][c], f),
        (false, false) if r == c => lit("(1+i)*t", f),
        _ => z(),
    });
    if n == 2 {
        return (h, g);
    }
    // columns f(e_1) = x e_1 - x e_2, f(e_2) = x e_1 + x e_2 with x = (1+i)/2
    let fm = RatMat::from_fn(n, |r, c| match (r, c) {
        (0, 0) | (0, 1) | (1, 1) => lit("(1+i)/2", f),
        (1, 0) => lit("-(1+i)/2", f),
        _ if r == c => RatFun::one(f),
        _ => z(),
    });
    let fm_inv = RatMat::from_fn(n, |r, c| match (r, c) {
        (0, 0) | (1, 0) | (1, 1) => lit("(1-i)/2", f),
        (0, 1) => lit("-(1-i)/2", f),
        _ if r == c => RatFun::one(f),
        _ => z(),
    });
    (fm_inv.matmul(&h), g.matmul(&fm))
}

/// Parses a family file: `g` followed by n rows, then `g_inv` followed by
/// n rows, entries separated by whitespace. `#` starts a comment line.
pub fn parse_family(text: &str, n: usize, field: FieldSpec) -> Result<(RatMat, RatMat), VarietyError> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let bad = |m: String| VarietyError::DimensionMismatch(m);
    let block = |name: &str, at: usize| -> Result<RatMat, VarietyError> {
        if lines.get(at) != Some(&name) {
            return Err(bad(format!("expected a `{name}` line")));
        }
        let rows = lines
            .get(at + 1..at + 1 + n)
            .ok_or_else(|| bad(format!("`{name}` needs {n} rows")))?;
        let entries = rows
            .iter()
            .map(|r| {
                r.split_whitespace()
                    .map(|s| RatFun::parse(s, field))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        RatMat::from_rows(entries)
    };
    let g = block("g", 0)?;
    let g_inv = block("g_inv", n + 1)?;
    if lines.len() != 2 * n + 2 {
        return Err(bad("trailing lines in family file".into()));
    }
    Ok((g, g_inv))
}
