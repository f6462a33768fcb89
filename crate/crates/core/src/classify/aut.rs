//! Automorphisms of `E_n` and `I_n`, and the group acting on canonical
//! presentations.

use rand::Rng;

use super::ClassifyError;
use crate::invariants::BlockType;
use crate::linalg::Mat;
use crate::scalar::{FieldSpec, Scalar};

fn conformal_factor(phi: &Mat) -> Option<Scalar> {
    let g = phi.transpose().matmul(phi).ok()?;
    let l = g[(0, 0)].clone();
    let n = phi.rows();
    let ok = (0..n).all(|r| (0..n).all(|c| if r == c { g[(r, c)] == l } else { g[(r, c)].is_zero() }));
    ok.then_some(l)
}

/// `phi` fixes `e_1`, has zeros elsewhere in its first row and column, and
/// is orthogonal.
pub fn is_automorphism_e(n: usize, phi: &Mat) -> bool {
    if phi.rows() != n || phi.cols() != n || n == 0 {
        return false;
    }
    let pattern = (0..n).all(|k| {
        let want = |v: &Scalar| if k == 0 { v.is_one() } else { v.is_zero() };
        want(&phi[(0, k)]) && want(&phi[(k, 0)])
    });
    pattern && conformal_factor(phi).is_some_and(|l| l.is_one())
}

/// Embeds an orthogonal `(n-1) x (n-1)` matrix as an automorphism of `E_n`.
pub fn gen_automorphism_e(n: usize, q: &Mat) -> Result<Mat, ClassifyError> {
    if n == 0 || q.rows() != n - 1 || q.cols() != n - 1 {
        return Err(ClassifyError::Mismatch(format!(
            "expected a {0}x{0} matrix",
            n.saturating_sub(1)
        )));
    }
    let f = q.field();
    if n > 1 && !q.transpose().matmul(q)?.is_identity() {
        return Err(ClassifyError::NotOrthogonal);
    }
    Ok(Mat::from_fn(f, n, n, |r, c| match (r, c) {
        (0, 0) => Scalar::one(f),
        (0, _) | (_, 0) => Scalar::zero(f),
        _ => q[(r - 1, c - 1)].clone(),
    }))
}

/// Structural test: `v_21 = i v_11 - i`, `v_22 = i v_12 + 1`,
/// `v_k2 = i v_k1` for `k >= 3`, and `phi^T phi = (v_11 + i v_12) I` with a
/// nonzero factor.
pub fn is_automorphism_i(n: usize, phi: &Mat) -> bool {
    if phi.rows() != n || phi.cols() != n || n < 2 {
        return false;
    }
    let Ok(i) = Scalar::imag_unit(phi.field()) else {
        return false;
    };
    let one = Scalar::one(phi.field());
    let v = |r: usize, c: usize| &phi[(r, c)];
    let pattern = *v(1, 0) == &i * v(0, 0) - i.clone()
        && *v(1, 1) == &i * v(0, 1) + one
        && (2..n).all(|k| *v(k, 1) == &i * v(k, 0));
    if !pattern {
        return false;
    }
    let lambda = v(0, 0) + &(&i * v(0, 1));
    !lambda.is_zero() && conformal_factor(phi).is_some_and(|l| l == lambda)
}

/// The automorphism `[[x, i - i x], [i x - i, x]]` of `I_2`.
pub fn gen_automorphism_i2(x: &Scalar) -> Result<Mat, ClassifyError> {
    let f = x.field();
    let i = Scalar::imag_unit(f)?;
    let two = Scalar::from_i64(f, 2);
    if (&two * x).is_one() {
        return Err(ClassifyError::InvalidParameter(
            "x = 1/2 gives a singular matrix".into(),
        ));
    }
    let off = &i - &(&i * x);
    Ok(Mat::from_rows(
        f,
        vec![vec![x.clone(), off.clone()], vec![-off, x.clone()]],
    )?)
}

/// An element of the group preserving a canonical presentation: per-block
/// factors `D_k` with `D_k^T D_k = lambda_k I`, then a permutation sending
/// block `k` to block `perm[k]` (between blocks of equal type).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub blocks: Vec<Mat>,
    pub perm: Vec<usize>,
}

impl GroupElement {
    /// True when every factor is conformal and the permutation only swaps
    /// blocks of the same type.
    pub fn is_valid(&self, types: &[BlockType]) -> bool {
        self.blocks.len() == types.len()
            && self.perm.len() == types.len()
            && self
                .blocks
                .iter()
                .zip(types)
                .all(|(d, t)| d.rows() == t.size && conformal_factor(d).is_some_and(|l| !l.is_zero()))
            && (0..types.len()).all(|k| self.perm.contains(&k) && types[self.perm[k]] == types[k])
    }

    /// Basis matrix acting on a presentation with contiguous blocks of the
    /// given types, in order.
    pub fn matrix(&self, field: FieldSpec, types: &[BlockType]) -> Mat {
        let starts: Vec<usize> = types
            .iter()
            .scan(0, |acc, t| {
                let s = *acc;
                *acc += t.size;
                Some(s)
            })
            .collect();
        let n = types.iter().map(|t| t.size).sum();
        let mut m = Mat::zeros(field, n, n);
        for (k, d) in self.blocks.iter().enumerate() {
            let (src, dst) = (starts[k], starts[self.perm[k]]);
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    m[(dst + r, src + c)] = d[(r, c)].clone();
                }
            }
        }
        m
    }

    /// A random element over the Gaussian rationals with small entries.
    pub fn random<R: Rng>(rng: &mut R, types: &[BlockType]) -> GroupElement {
        let f = FieldSpec::GaussianRational;
        let blocks = types.iter().map(|t| random_conformal(rng, f, t.size)).collect();
        let mut perm: Vec<usize> = (0..types.len()).collect();
        for k in (1..perm.len()).rev() {
            let j = rng.gen_range(0..=k);
            if types[perm[j]] == types[perm[k]] {
                perm.swap(j, k);
            }
        }
        GroupElement { blocks, perm }
    }
}

fn small<R: Rng>(rng: &mut R, f: FieldSpec) -> Scalar {
    let re = rng.gen_range(-3..=3);
    let im = if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 };
    Scalar::from_i64(f, re) + Scalar::from_i64(f, im) * Scalar::imag_unit(f).expect("Q(i)")
}

fn nonzero<R: Rng>(rng: &mut R, f: FieldSpec) -> Scalar {
    loop {
        let s = small(rng, f);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random `k x k` matrix with `D^T D = lambda I`, `lambda != 0`: a scalar
/// times the Cayley transform `(I - K)(I + K)^-1` of a skew matrix `K`,
/// optionally composed with a sign change.
pub fn random_conformal<R: Rng>(rng: &mut R, f: FieldSpec, k: usize) -> Mat {
    let s = nonzero(rng, f);
    loop {
        let mut kk = Mat::zeros(f, k, k);
        for r in 0..k {
            for c in r + 1..k {
                let v = small(rng, f);
                kk[(c, r)] = -&v;
                kk[(r, c)] = v;
            }
        }
        let id = Mat::identity(f, k);
        let Ok(inv) = id.add(&kk).expect("square").inverse() else {
            continue;
        };
        let mut q = id.sub(&kk).expect("square").matmul(&inv).expect("square");
        if k > 0 && rng.gen_bool(0.5) {
            for r in 0..k {
                q[(r, 0)] = -&q[(r, 0)];
            }
        }
        return q.scale(&s);
    }
}
