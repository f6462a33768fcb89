#![allow(dead_code)]

use evoalg::algebra::EvolutionAlgebra;
use evoalg::classify::{CanonicalLabel, Family, Sign};
use evoalg::invariants::{delta_index, delta_trace};
use evoalg::linalg::Mat;
use evoalg::scalar::{qi, FieldSpec, Scalar};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const Q: FieldSpec = FieldSpec::GaussianRational;

/// Seed for randomized suites, overridable with `EVOALG_SEED`.
pub fn seed() -> u64 {
    std::env::var("EVOALG_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_240_917)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt)
}

pub fn alg(rows: &[&[&str]]) -> EvolutionAlgebra {
    EvolutionAlgebra::from_rows(Q, rows.iter().map(|r| r.iter().map(|s| qi(s)).collect()).collect()).unwrap()
}

pub fn mat(rows: &[&[&str]]) -> Mat {
    Mat::from_rows(Q, rows.iter().map(|r| r.iter().map(|s| qi(s)).collect()).collect()).unwrap()
}

/// Delta trace every member of the family has.
pub fn expected_trace(f: Family) -> &'static str {
    match f {
        Family::E(2) => "E2",
        Family::I(2) => "I2",
        Family::E(3) => "E3",
        Family::I(3) => "I3",
        Family::A2(1) => "O1,O1",
        Family::A2(2) => "O1,E1",
        Family::A2(3) => "E1,E1",
        Family::A3(1) | Family::A3(2) => "O1,O1,O1",
        Family::A3(3..=5) => "O1,O1,E1",
        Family::A3(6) => "O1,E1,E1",
        Family::A3(7) => "E1,E1,E1",
        Family::B3(1 | 2) => "O2,O1",
        Family::B3(3 | 4) => "O2,E1",
        Family::B3(5 | 6) => "E2,O1",
        Family::B3(7) => "E2,E1",
        Family::B3(8..=11) => "I2,O1",
        Family::B3(12..=15) => "I2,E1",
        other => panic!("no trace for {other}"),
    }
}

const POOL: [&str; 12] = ["0", "1", "-1", "2", "-3", "1/2", "i", "1+i", "-2i", "3/4", "5", "-1/3"];

/// Members of the family whose representative is non-degenerate with the
/// family's delta index and trace. Parameterless families yield one label
/// (two for the signed one).
pub fn samples(f: Family, count: usize, salt: u64) -> Vec<CanonicalLabel> {
    if f == Family::B3(9) {
        return vec![
            CanonicalLabel::signed(f, Sign::Plus),
            CanonicalLabel::signed(f, Sign::Minus),
        ];
    }
    if f.arity() == 0 {
        return vec![CanonicalLabel::new(f, vec![])];
    }
    let mut r = rng(salt ^ (f.dim() as u64 * 1000 + f.arity() as u64 * 31));
    let mut out: Vec<CanonicalLabel> = Vec::new();
    for _ in 0..2000 {
        if out.len() == count {
            break;
        }
        let params: Vec<Scalar> = (0..f.arity()).map(|_| qi(POOL.choose(&mut r).unwrap())).collect();
        let l = CanonicalLabel::new(f, params);
        if out.contains(&l) {
            continue;
        }
        let a = l.representative(Q).unwrap();
        let ok = delta_trace(&a).is_ok_and(|t| t.to_string() == expected_trace(f))
            && delta_index(&a).is_ok_and(|d| d.0.iter().sum::<usize>() == f.dim());
        if ok {
            out.push(l);
        }
    }
    out
}

/// A permutation matrix times an invertible diagonal one.
pub fn is_monomial(c: &Mat) -> bool {
    let n = c.rows();
    (0..n).all(|r| (0..n).filter(|&k| !c[(r, k)].is_zero()).count() == 1)
        && (0..n).all(|k| (0..n).filter(|&r| !c[(r, k)].is_zero()).count() == 1)
}

/// Small Gaussian integer, `re` in -3..=3 and `im` in -2..=2.
pub fn small(r: &mut ChaCha8Rng) -> Scalar {
    use rand::Rng;
    let re = r.gen_range(-3..=3);
    let im = if r.gen_bool(0.3) { r.gen_range(-2..=2) } else { 0 };
    Scalar::from_i64(Q, re) + Scalar::from_i64(Q, im) * qi("i")
}

pub fn nonzero(r: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = small(r);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Random non-degenerate algebra of dimension `n` whose standard
/// decomposition has contiguous blocks with equal columns and canonical
/// diagonal patterns.
pub fn random_block_algebra(r: &mut ChaCha8Rng, n: usize) -> EvolutionAlgebra {
    use rand::Rng;
    loop {
        let mut sizes = Vec::new();
        let mut left = n;
        while left > 0 {
            let s = r.gen_range(1..=left.min(3));
            sizes.push(s);
            left -= s;
        }
        let mut m = Mat::zeros(Q, n, n);
        let mut start = 0;
        for &s in &sizes {
            let kind = r.gen_range(0..if s >= 2 { 3 } else { 2 });
            let mut v: Vec<Scalar> = (0..n).map(|_| small(r)).collect();
            for (k, x) in v.iter_mut().enumerate().skip(start).take(s) {
                *x = match (kind, k - start) {
                    (1, 0) | (2, 0) => qi("1"),
                    (2, 1) => qi("i"),
                    _ => qi("0"),
                };
            }
            for c in start..start + s {
                for (k, x) in v.iter().enumerate() {
                    m[(k, c)] = x.clone();
                }
            }
            start += s;
        }
        let a = EvolutionAlgebra::new(m).unwrap();
        if a.is_nondegenerate() && delta_index(&a).is_ok_and(|d| d.0.len() == sizes.len()) {
            return a;
        }
    }
}

/// A random natural basis for `a`: presentation witness, then a random
/// block-conformal group element, a diagonal scaling and a permutation.
pub fn random_natural_basis(r: &mut ChaCha8Rng, a: &EvolutionAlgebra) -> Mat {
    let p = evoalg::invariants::canonical_presentation(a).unwrap();
    let types: Vec<_> = p.blocks.iter().map(|(t, _)| *t).collect();
    let ge = evoalg::classify::GroupElement::random(r, &types);
    let n = a.dim();
    let d = Mat::diag(Q, &(0..n).map(|_| nonzero(r)).collect::<Vec<_>>());
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let pm = Mat::permutation(Q, &perm);
    p.witness
        .matmul(&ge.matrix(Q, &types))
        .unwrap()
        .matmul(&d)
        .unwrap()
        .matmul(&pm)
        .unwrap()
}

/// Random non-degenerate algebra with `delta = (1, ..., 1)`.
pub fn random_2li(r: &mut ChaCha8Rng, n: usize) -> EvolutionAlgebra {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| small(r)).collect()).collect();
        let a = EvolutionAlgebra::from_rows(Q, rows).unwrap();
        if a.is_nondegenerate() && delta_index(&a).is_ok_and(|d| d.is_2li()) {
            return a;
        }
    }
}

/// The 5-dimensional worked example with blocks {1,3}, {2,5}, {4}.
pub fn ex1() -> EvolutionAlgebra {
    alg(&[
        &["1", "0", "-1", "0", "0"],
        &["1", "2", "-1", "0", "1"],
        &["2", "4", "-2", "0", "2"],
        &["2", "0", "-2", "0", "0"],
        &["0", "0", "0", "1", "0"],
    ])
}

/// `e1^2 = e3, e2^2 = e3, e3^2 = e1 + i e2`.
pub fn nonsingular_example() -> EvolutionAlgebra {
    alg(&[&["0", "0", "1"], &["0", "0", "i"], &["1", "1", "0"]])
}

/// Serialized invariants, compared verbatim.
pub fn invariants_line(a: &EvolutionAlgebra) -> String {
    format!("delta={} Delta={}", delta_index(a).unwrap(), delta_trace(a).unwrap())
}
