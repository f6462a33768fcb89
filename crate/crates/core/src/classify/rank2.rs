//! Three-dimensional algebras with delta index (2,1), given in canonical
//! presentation: block of size two on indices 0,1 and size one on index 2.
//!
//! With `b = w_31`, `c = (w_13, w_23)` and `d = w_33`, the basis change
//! `diag(D, x)` with `D^T D = lambda I` acts by
//! `b -> lambda b / x`, `c -> x^2 D^-1 c`, `d -> x d`.

use super::label::{CanonicalLabel, Family, Sign};
use super::ClassifyError;
use crate::algebra::EvolutionAlgebra;
use crate::invariants::BlockKind;
use crate::linalg::Mat;
use crate::scalar::{FieldSpec, Scalar};

fn basis(f: FieldSpec, d: [[Scalar; 2]; 2], x: Scalar) -> Mat {
    let o = Scalar::zero(f);
    Mat::from_rows(
        f,
        vec![
            vec![d[0][0].clone(), d[0][1].clone(), o.clone()],
            vec![d[1][0].clone(), d[1][1].clone(), o.clone()],
            vec![o.clone(), o, x],
        ],
    )
    .expect("3x3")
}

fn half(f: FieldSpec) -> Scalar {
    Scalar::from_i64(f, 2).inv().expect("char != 2")
}

fn div(a: &Scalar, b: &Scalar) -> Result<Scalar, ClassifyError> {
    Ok(a.try_div(b)?)
}

fn sqrt(a: &Scalar) -> Result<Scalar, ClassifyError> {
    a.sqrt().map_err(|e| ClassifyError::ExtensionRequired(e.radicand))
}

/// `D` with `D^-1 gamma (1,i) = (1,i)` and `lambda = 1/beta` for an
/// `O2` block whose third coordinate is `beta`.
fn isotropic_frame(f: FieldSpec, gamma: &Scalar, beta: &Scalar) -> Result<[[Scalar; 2]; 2], ClassifyError> {
    let i = Scalar::imag_unit(f)?;
    let m = gamma.clone();
    let n = div(&Scalar::one(f), &(gamma * beta))?;
    let p = (&m + &n) * half(f);
    let r = &i * &(&m - &n) * half(f);
    Ok([[p.clone(), -&r], [r, p]])
}

/// The automorphism of the `I2` block with `D^T D = (2y - 1) I`.
fn i_frame(f: FieldSpec, mu: &Scalar) -> Result<[[Scalar; 2]; 2], ClassifyError> {
    let i = Scalar::imag_unit(f)?;
    let y = (mu + &Scalar::one(f)) * half(f);
    let off = &i - &(&i * &y);
    Ok([[y.clone(), off.clone()], [-off, y]])
}

fn pick_min(a: Vec<Scalar>, b: Vec<Scalar>) -> (Vec<Scalar>, bool) {
    let ord = a
        .iter()
        .zip(&b)
        .map(|(x, y)| x.canonical_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal);
    if ord.is_gt() {
        (b, true)
    } else {
        (a, false)
    }
}

pub(crate) fn normalize(
    m: &EvolutionAlgebra,
    k2: BlockKind,
    k1: BlockKind,
) -> Result<(CanonicalLabel, Mat), ClassifyError> {
    let f = m.field();
    let one = Scalar::one(f);
    let zero = Scalar::zero(f);
    let id = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
    let refl = [[one.clone(), zero.clone()], [zero.clone(), -&one]];
    let b = m.w(2, 0).clone();
    let (c1, c2) = (m.w(0, 2).clone(), m.w(1, 2).clone());
    let lab = |k: u8, p: Vec<Scalar>| CanonicalLabel::new(Family::B3(k), p);

    Ok(match k2 {
        BlockKind::O => {
            let q = &c1 * &c1 + &c2 * &c2;
            if !q.is_zero() {
                let rot = [[c2.clone(), c1.clone()], [-&c1, c2.clone()]];
                if k1 == BlockKind::O {
                    let x = div(&one, &(&q * &b))?
                        .nth_root(3)
                        .map_err(|e| ClassifyError::ExtensionRequired(e.radicand))?;
                    let s = &x * &x;
                    let d = rot.map(|r| r.map(|v| &v * &s));
                    (lab(1, vec![]), basis(f, d, x))
                } else {
                    (lab(3, vec![&q * &b]), basis(f, rot, one))
                }
            } else {
                // c is a multiple of (1, i) or of (1, -i)
                let i = Scalar::imag_unit(f)?;
                let (pre, gamma) = if c2 == &i * &c1 {
                    (id, c1.clone())
                } else {
                    (refl, c1.clone())
                };
                let d = isotropic_frame(f, &gamma, &b)?;
                let prod =
                    std::array::from_fn(|r| std::array::from_fn(|c| &pre[r][0] * &d[0][c] + &pre[r][1] * &d[1][c]));
                let k = if k1 == BlockKind::O { 2 } else { 4 };
                (lab(k, vec![]), basis(f, prod, one))
            }
        }
        BlockKind::E => {
            if k1 == BlockKind::O {
                if !b.is_zero() {
                    let s = &b * &b;
                    let (p, flip) = pick_min(vec![&s * &c1, &s * &c2], vec![&s * &c1, -(&s * &c2)]);
                    (lab(5, p), basis(f, if flip { refl } else { id }, b.clone()))
                } else {
                    let (p, flip) = pick_min(vec![div(&c1, &c2)?], vec![-div(&c1, &c2)?]);
                    let x2 = if flip { -div(&one, &c2)? } else { div(&one, &c2)? };
                    (lab(6, p), basis(f, if flip { refl } else { id }, sqrt(&x2)?))
                }
            } else {
                let (p, flip) = pick_min(
                    vec![b.clone(), c1.clone(), c2.clone()],
                    vec![b.clone(), c1.clone(), -&c2],
                );
                (lab(7, p), basis(f, if flip { refl } else { id }, one))
            }
        }
        BlockKind::I => {
            let i = Scalar::imag_unit(f)?;
            let h = half(f);
            let p = (&c1 - &(&i * &c2)) * h.clone();
            let r = (&c1 + &(&i * &c2)) * h;
            let (label, mu, x) = if k1 == BlockKind::O {
                match (b.is_zero(), p.is_zero(), r.is_zero()) {
                    (false, false, false) => {
                        let a = Scalar::from_i64(f, 2) * &p * &p * &b * &b * r.inv()?;
                        (lab(8, vec![a]), div(&p, &r)?, div(&(&p * &b), &r)?)
                    }
                    (false, _, true) => {
                        let x = div(&one, &(&p * &b))?;
                        let mu = div(&one, &(&p * &b * &b))?;
                        (CanonicalLabel::signed(Family::B3(9), Sign::Plus), mu, x)
                    }
                    (false, true, false) => {
                        let x = sqrt(&r.inv()?)?;
                        let mu = div(&x, &b)?;
                        (CanonicalLabel::signed(Family::B3(9), Sign::Minus), mu, x)
                    }
                    (true, false, false) => {
                        let x = sqrt(&(Scalar::from_i64(f, 2) * &r).inv()?)?;
                        (lab(10, vec![]), div(&p, &r)?, x)
                    }
                    (true, true, false) => (lab(11, vec![]), one.clone(), sqrt(&r.inv()?)?),
                    _ => return Err(ClassifyError::Internal("third column lies in the I2 block".into())),
                }
            } else {
                match (b.is_zero(), p.is_zero(), r.is_zero()) {
                    (false, _, _) => {
                        let pb = &p * &b;
                        let beta = &i * &(&pb - &r);
                        (lab(12, vec![&pb + &r, beta]), b.inv()?, one.clone())
                    }
                    (true, false, false) => (lab(13, vec![Scalar::from_i64(f, 2) * &r]), div(&p, &r)?, one.clone()),
                    (true, false, true) => (lab(14, vec![]), p.clone(), one.clone()),
                    (true, true, _) => (lab(15, vec![r.clone()]), one.clone(), one.clone()),
                }
            };
            (label, basis(f, i_frame(f, &mu)?, x))
        }
    })
}
