//! Block decomposition, the delta index, the Delta trace and the canonical
//! block presentation.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, EvolutionAlgebra};
use crate::linalg::{add_vec, dot, is_zero_vec, normalize_first, scale_vec, sub_vec, Mat, Vector};
use crate::scalar::{ExtensionRequired, FieldSpec, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("algebra is degenerate (annihilator is nonzero)")]
    Degenerate,
    #[error("not a block algebra: columns are not pairwise proportional")]
    NotABlockAlgebra,
    #[error("extension required: a root of {0} is not in the field")]
    ExtensionRequired(Scalar),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<ExtensionRequired> for InvariantError {
    fn from(e: ExtensionRequired) -> Self {
        InvariantError::ExtensionRequired(e.radicand)
    }
}

impl From<ScalarError> for InvariantError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::ExtensionRequired(x) => InvariantError::ExtensionRequired(x),
            other => InvariantError::Algebra(other.into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    O,
    E,
    I,
}

/// Isomorphism type of a block algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockType {
    pub kind: BlockKind,
    pub size: usize,
}

impl BlockType {
    /// Size descending, then O < E < I.
    pub fn trace_cmp(&self, o: &BlockType) -> Ordering {
        o.size.cmp(&self.size).then(self.kind.cmp(&o.kind))
    }
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.size)
    }
}

/// One block of the decomposition: every column at `indices[j]` equals
/// `multipliers[j] * direction`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub indices: Vec<usize>,
    pub direction: Vector,
    pub multipliers: Vec<Scalar>,
    pub kind: BlockKind,
}

impl Block {
    pub fn block_type(&self) -> BlockType {
        BlockType {
            kind: self.kind,
            size: self.indices.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaIndex(pub Vec<usize>);

impl DeltaIndex {
    pub fn is_2li(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }
}

impl fmt::Display for DeltaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", v.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTrace(pub Vec<BlockType>);

impl fmt::Display for DeltaTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", v.join(","))
    }
}

fn lex_cmp(a: &[Scalar], b: &[Scalar]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.canonical_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Kind of a block with direction `w` (restricted to the block) and
/// multipliers `lambda`: E iff `sum w_j^2 lambda_j != 0`.
fn block_kind(w: &[Scalar], lambda: &[Scalar]) -> BlockKind {
    if is_zero_vec(w) {
        return BlockKind::O;
    }
    let f = w[0].field();
    let s = w
        .iter()
        .zip(lambda)
        .fold(Scalar::zero(f), |acc, (a, l)| acc + a * a * l);
    if s.is_zero() {
        BlockKind::I
    } else {
        BlockKind::E
    }
}

/// Splits the basis into classes of proportional columns.
pub fn decompose(a: &EvolutionAlgebra) -> Result<Decomposition, InvariantError> {
    if !a.is_nondegenerate() {
        return Err(InvariantError::Degenerate);
    }
    let n = a.dim();
    let mut dirs: Vec<Vector> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for j in 0..n {
        let d = normalize_first(&a.square(j));
        match dirs.iter().position(|x| *x == d) {
            Some(k) => members[k].push(j),
            None => {
                dirs.push(d);
                members.push(vec![j]);
            }
        }
    }
    let mut blocks: Vec<Block> = dirs
        .into_iter()
        .zip(members)
        .map(|(direction, indices)| {
            let p = direction.iter().position(|x| !x.is_zero()).unwrap();
            let multipliers: Vec<Scalar> = indices.iter().map(|&j| a.w(p, j).clone()).collect();
            let w: Vec<Scalar> = indices.iter().map(|&j| direction[j].clone()).collect();
            let kind = block_kind(&w, &multipliers);
            Block {
                indices,
                direction,
                multipliers,
                kind,
            }
        })
        .collect();
    blocks.sort_by(|x, y| {
        y.indices
            .len()
            .cmp(&x.indices.len())
            .then(x.kind.cmp(&y.kind))
            .then_with(|| lex_cmp(&x.direction, &y.direction))
    });
    Ok(Decomposition { blocks })
}

pub fn delta_index(a: &EvolutionAlgebra) -> Result<DeltaIndex, InvariantError> {
    Ok(DeltaIndex(
        decompose(a)?.blocks.iter().map(|b| b.indices.len()).collect(),
    ))
}

/// The block algebra on `b`: column `j` is `lambda_j` times the direction
/// restricted to the block.
pub fn block_algebra(a: &EvolutionAlgebra, b: &Block) -> EvolutionAlgebra {
    let k = b.indices.len();
    let m = Mat::from_fn(a.field(), k, k, |r, c| &b.multipliers[c] * &b.direction[b.indices[r]]);
    EvolutionAlgebra::new(m).expect("square")
}

/// O/E/I type of a block algebra.
pub fn classify_block(b: &EvolutionAlgebra) -> Result<BlockType, InvariantError> {
    let k = b.dim();
    if b.matrix().rank() > 1 {
        return Err(InvariantError::NotABlockAlgebra);
    }
    let size = k;
    let Some(j) = (0..k).find(|&j| !is_zero_vec(&b.square(j))) else {
        return Ok(BlockType {
            kind: BlockKind::O,
            size,
        });
    };
    let w = b.square(j);
    let kind = if is_zero_vec(&b.mul(&w, &w)?) {
        BlockKind::I
    } else {
        BlockKind::E
    };
    Ok(BlockType { kind, size })
}

pub fn delta_trace(a: &EvolutionAlgebra) -> Result<DeltaTrace, InvariantError> {
    let d = decompose(a)?;
    let mut t: Vec<BlockType> = d
        .blocks
        .iter()
        .map(|b| classify_block(&block_algebra(a, b)))
        .collect::<Result<_, _>>()?;
    t.sort_by(BlockType::trace_cmp);
    Ok(DeltaTrace(t))
}

/// Canonical presentation together with the basis realizing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub algebra: EvolutionAlgebra,
    /// Columns are the new basis in old coordinates.
    pub witness: Mat,
    /// Blocks in presentation order, as index ranges of the new basis.
    pub blocks: Vec<(BlockType, std::ops::Range<usize>)>,
}

/// Rewrites `a` in a natural basis where every block is contiguous, its
/// columns are equal, and its diagonal block is the canonical O, E or I
/// matrix. Blocks are ordered by size descending, kind, then smallest
/// original index.
pub fn canonical_presentation(a: &EvolutionAlgebra) -> Result<Presentation, InvariantError> {
    let dec = decompose(a)?;
    let f = a.field();
    let n = a.dim();
    let mut blocks = dec.blocks.clone();
    blocks.sort_by(|x, y| {
        y.indices
            .len()
            .cmp(&x.indices.len())
            .then(x.kind.cmp(&y.kind))
            .then(x.indices[0].cmp(&y.indices[0]))
    });

    // equalize multipliers inside each block: f_j = (lambda_1/lambda_j)^(1/2) e_j
    let mut s = vec![Scalar::one(f); n];
    for b in &blocks {
        for (j, l) in b.indices.iter().zip(&b.multipliers).skip(1) {
            s[*j] = b.multipliers[0].try_div(l)?.sqrt()?;
        }
    }
    let c1 = Mat::diag(f, &s);
    let a1 = a.change_basis(&c1)?;

    // canonical form inside each block
    let mut c2 = Mat::identity(f, n);
    for b in &blocks {
        let ix = &b.indices;
        let w: Vector = ix.iter().map(|&r| a1.w(r, ix[0]).clone()).collect();
        let d = match b.kind {
            BlockKind::O => Mat::identity(f, ix.len()),
            BlockKind::E => e_block_basis(&w)?,
            BlockKind::I => i_block_basis(&w)?,
        };
        for (p, &r) in ix.iter().enumerate() {
            for (q, &c) in ix.iter().enumerate() {
                c2[(r, c)] = d[(p, q)].clone();
            }
        }
    }

    // make blocks contiguous
    let order: Vec<usize> = blocks.iter().flat_map(|b| b.indices.iter().copied()).collect();
    let p = Mat::from_fn(f, n, n, |i, j| Scalar::from_i64(f, (order[j] == i) as i64));
    let witness = c1.matmul(&c2).and_then(|m| m.matmul(&p)).map_err(AlgebraError::from)?;
    let algebra = a.change_basis(&witness)?;
    let mut ranges = Vec::new();
    let mut start = 0;
    for b in &blocks {
        let k = b.indices.len();
        ranges.push((b.block_type(), start..start + k));
        start += k;
    }
    debug_assert!(ranges.iter().all(|(t, r)| diagonal_block_ok(&algebra, t, r.clone())));
    Ok(Presentation {
        algebra,
        witness,
        blocks: ranges,
    })
}

fn diagonal_block_ok(a: &EvolutionAlgebra, t: &BlockType, r: std::ops::Range<usize>) -> bool {
    let f = a.field();
    let Ok(i) = Scalar::imag_unit(f) else {
        return t.kind != BlockKind::I;
    };
    r.clone().all(|c| {
        r.clone().enumerate().all(|(p, row)| {
            let want = match (t.kind, p) {
                (BlockKind::E, 0) | (BlockKind::I, 0) => Scalar::one(f),
                (BlockKind::I, 1) => i.clone(),
                _ => Scalar::zero(f),
            };
            *a.w(row, c) == want
        })
    })
}

/// Basis of a block whose (equal) columns are `w` with `w.w != 0`, taking
/// it to the canonical E matrix.
fn e_block_basis(w: &[Scalar]) -> Result<Mat, InvariantError> {
    let f = w[0].field();
    let s = dot(w, w);
    let sinv = s.inv()?;
    let mut cols = vec![scale_vec(w, &sinv)];
    let perp = perp_within(&standard_basis(f, w.len()), &[w.to_vec()]);
    cols.extend(conformal_frame(&perp, &sinv)?);
    Ok(Mat::from_cols(f, &cols).expect("square"))
}

/// Same for `w.w = 0`, taking the block to the canonical I matrix.
fn i_block_basis(w: &[Scalar]) -> Result<Mat, InvariantError> {
    let f = w[0].field();
    let i = Scalar::imag_unit(f).map_err(|_| InvariantError::ExtensionRequired(Scalar::from_i64(f, -1)))?;
    let p = w.iter().position(|x| !x.is_zero()).unwrap();
    let mut u = vec![Scalar::zero(f); w.len()];
    u[p] = w[p].inv()?;
    // w' = u - (u.u / 2) w is isotropic with w.w' = 1
    let half = Scalar::from_i64(f, 2).inv()?;
    let wp = sub_vec(&u, &scale_vec(w, &(dot(&u, &u) * &half)));
    let hw = scale_vec(w, &half);
    let f1 = add_vec(&hw, &wp);
    let f2 = scale_vec(&sub_vec(&hw, &wp), &-&i);
    let perp = perp_within(&standard_basis(f, w.len()), &[w.to_vec(), wp]);
    let mut cols = vec![f1, f2];
    cols.extend(conformal_frame(&perp, &Scalar::one(f))?);
    Ok(Mat::from_cols(f, &cols).expect("square"))
}

fn standard_basis(f: FieldSpec, n: usize) -> Vec<Vector> {
    (0..n)
        .map(|k| (0..n).map(|j| Scalar::from_i64(f, (j == k) as i64)).collect())
        .collect()
}

/// Basis of `{x in span(space) : x.s = 0 for s in against}`.
fn perp_within(space: &[Vector], against: &[Vector]) -> Vec<Vector> {
    if space.is_empty() {
        return Vec::new();
    }
    let f = space[0][0].field();
    if against.is_empty() {
        return space.to_vec();
    }
    let m = Mat::from_fn(f, against.len(), space.len(), |r, c| dot(&against[r], &space[c]));
    m.nullspace()
        .into_iter()
        .map(|coef| {
            coef.iter()
                .zip(space)
                .fold(vec![Scalar::zero(f); space[0].len()], |acc, (c, v)| {
                    add_vec(&acc, &scale_vec(v, c))
                })
        })
        .collect()
}

/// Mutually orthogonal vectors spanning `space` with `z.z = c` each.
/// Hyperbolic planes are split off through isotropic vectors, which keeps
/// the construction inside Q(i) whenever a frame exists there.
fn conformal_frame(space: &[Vector], c: &Scalar) -> Result<Vec<Vector>, InvariantError> {
    let mut rest = space.to_vec();
    let mut out = Vec::new();
    let f = c.field();
    while !rest.is_empty() {
        // a spanning vector whose norm is c times a square; by Witt
        // cancellation splitting it off never blocks a later step
        let mut pick = None;
        for v in &rest {
            let q = dot(v, v);
            if q.is_zero() {
                continue;
            }
            if let Ok(r) = c.try_div(&q)?.sqrt() {
                pick = Some(scale_vec(v, &r));
                break;
            }
        }
        if let Some(z) = pick {
            rest = perp_within(&rest, std::slice::from_ref(&z));
            out.push(z);
            continue;
        }
        // otherwise split off a hyperbolic plane through an isotropic vector
        let plane = if rest.len() >= 2 {
            isotropic_vector(&rest).and_then(|h| hyperbolic_pair(&rest, h, c))
        } else {
            None
        };
        let Some((z1, z2)) = plane else {
            let q = rest
                .iter()
                .map(|v| dot(v, v))
                .find(|q| !q.is_zero())
                .unwrap_or_else(|| Scalar::zero(f));
            let rad = if q.is_zero() { q } else { c.try_div(&q)? };
            return Err(InvariantError::ExtensionRequired(rad));
        };
        rest = perp_within(&rest, &[z1.clone(), z2.clone()]);
        out.push(z1);
        out.push(z2);
    }
    Ok(out)
}

/// Two orthogonal vectors of norm `c` in the hyperbolic plane through the
/// isotropic vector `h`.
fn hyperbolic_pair(space: &[Vector], h: Vector, c: &Scalar) -> Option<(Vector, Vector)> {
    let f = c.field();
    let g = space.iter().find(|v| !dot(&h, v).is_zero())?.clone();
    let two = Scalar::from_i64(f, 2);
    let beta = dot(&h, &g);
    let h2 = sub_vec(&g, &scale_vec(&h, &dot(&g, &g).try_div(&(&two * &beta)).ok()?));
    let beta = dot(&h, &h2);
    let t = c.try_div(&(&two * &beta)).ok()?;
    let i = Scalar::imag_unit(f).ok()?;
    let z1 = add_vec(&h, &scale_vec(&h2, &t));
    let z2 = scale_vec(&sub_vec(&h, &scale_vec(&h2, &t)), &i);
    Some((z1, z2))
}

/// A nonzero isotropic vector in the span of `space`, searched on pairs of
/// spanning vectors.
fn isotropic_vector(space: &[Vector]) -> Option<Vector> {
    for v in space {
        if dot(v, v).is_zero() {
            return Some(v.clone());
        }
    }
    for a in 0..space.len() {
        for b in a + 1..space.len() {
            let (u, v) = (&space[a], &space[b]);
            // (t u + v).(t u + v) = qu t^2 + 2 buv t + qv
            let (qu, buv, qv) = (dot(u, u), dot(u, v), dot(v, v));
            let disc = &buv * &buv - &qu * &qv;
            if let Ok(r) = disc.sqrt() {
                let t = (-&buv + r).try_div(&qu).ok()?;
                let h = add_vec(&scale_vec(u, &t), v);
                if !is_zero_vec(&h) {
                    return Some(h);
                }
            }
        }
    }
    None
}
