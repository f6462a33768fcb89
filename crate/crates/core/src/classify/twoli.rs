//! Algebras whose natural basis is unique up to scaling and permutation:
//! normal forms by template matching and a direct isomorphism search.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};

use super::label::{CanonicalLabel, Family};
use crate::algebra::EvolutionAlgebra;
use crate::exec::Exec;
use crate::invariants::BlockKind;
use crate::lattice::{solve_monomial, torsion, MonomialEq, MonomialSolution};
use crate::linalg::Mat;
use crate::scalar::Scalar;

type Pos = (usize, usize);

/// Shape of a family's structure matrix: `units` are entries equal to 1,
/// `zeros` are forced zeros, `params` are free entries in parameter order.
/// Positions are (row, column).
struct Template {
    family: Family,
    units: &'static [Pos],
    zeros: &'static [Pos],
    params: &'static [Pos],
}

const fn t(family: Family, units: &'static [Pos], zeros: &'static [Pos], params: &'static [Pos]) -> Template {
    Template {
        family,
        units,
        zeros,
        params,
    }
}

static DIM2: [&[Template]; 3] = [
    &[t(Family::A2(1), &[(0, 1), (1, 0)], &[], &[])],
    &[t(Family::A2(2), &[(1, 0)], &[], &[(0, 1)])],
    &[t(Family::A2(3), &[], &[], &[(0, 1), (1, 0)])],
];

static DIM3: [&[Template]; 4] = [
    &[
        t(Family::A3(1), &[(0, 1), (1, 2), (2, 0)], &[], &[(0, 2), (1, 0), (2, 1)]),
        t(Family::A3(2), &[(1, 2), (2, 0), (2, 1)], &[(0, 1), (0, 2)], &[(1, 0)]),
    ],
    &[
        t(Family::A3(3), &[(2, 0), (2, 1)], &[], &[(0, 1), (0, 2), (1, 0), (1, 2)]),
        t(Family::A3(4), &[(1, 0), (2, 1)], &[(2, 0)], &[(0, 1), (0, 2), (1, 2)]),
        t(Family::A3(5), &[(0, 1), (1, 0)], &[(2, 0), (2, 1)], &[(0, 2), (1, 2)]),
    ],
    &[t(
        Family::A3(6),
        &[(1, 0)],
        &[],
        &[(0, 1), (0, 2), (1, 2), (2, 0), (2, 1)],
    )],
    &[t(
        Family::A3(7),
        &[],
        &[],
        &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)],
    )],
];

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| cur[k] < cur[k + 1]) else {
            return out;
        };
        let l = (k + 1..n).rev().find(|&l| cur[k] < cur[l]).expect("successor exists");
        cur.swap(k, l);
        cur[k + 1..].reverse();
    }
}

fn lex(a: &[Scalar], b: &[Scalar]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.canonical_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Exponent row of `x_i^2 / x_j`.
fn ratio_exponents(n: usize, j: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] += 2;
    e[j] -= 1;
    e
}

pub(crate) struct Normalized {
    pub label: CanonicalLabel,
    /// Basis change from the input presentation to the representative.
    pub basis: Mat,
}

/// Normal form of a presentation with all blocks of size one, `O` indices
/// first. The error carries a radicand when every candidate needs a root
/// outside the field, and is `None` if no template matches at all.
pub(crate) fn normalize(m: &EvolutionAlgebra, kinds: &[BlockKind]) -> Result<Normalized, Option<Scalar>> {
    let n = m.dim();
    let f = m.field();
    let e_count = kinds.iter().filter(|&&k| k == BlockKind::E).count();
    let templates: &[Template] = match n {
        2 => DIM2[e_count],
        3 => DIM3[e_count],
        _ => return Err(None),
    };
    let mut missing = None;
    let perms: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|s| (0..n).all(|j| kinds[s[j]] == kinds[j]))
        .collect();

    let mut best: Option<(usize, Vec<Scalar>, Mat)> = None;
    for (ti, tpl) in templates.iter().enumerate() {
        if best.as_ref().is_some_and(|b| b.0 < ti) {
            break;
        }
        let mut rows: Vec<Vec<i64>> = tpl.units.iter().map(|&(j, i)| ratio_exponents(n, j, i)).collect();
        for (k, kind) in kinds.iter().enumerate() {
            if *kind == BlockKind::E {
                let mut e = vec![0; n];
                e[k] = 1;
                rows.push(e);
            }
        }
        let tor = torsion(n, &rows);
        for s in &perms {
            let w = |j: usize, i: usize| m.w(s[j], s[i]);
            if tpl.units.iter().any(|&(j, i)| w(j, i).is_zero()) || tpl.zeros.iter().any(|&(j, i)| !w(j, i).is_zero()) {
                continue;
            }
            let mut eqs: Vec<MonomialEq> = tpl
                .units
                .iter()
                .zip(&rows)
                .map(|(&(j, i), r)| MonomialEq {
                    exponents: r.clone(),
                    rhs: w(j, i).inv().expect("nonzero"),
                })
                .collect();
            for r in &rows[tpl.units.len()..] {
                eqs.push(MonomialEq {
                    exponents: r.clone(),
                    rhs: Scalar::one(f),
                });
            }
            let x = match solve_monomial(f, n, &eqs) {
                MonomialSolution::Solved(x) => x,
                MonomialSolution::NeedsRoot(r) => {
                    missing.get_or_insert(r);
                    continue;
                }
                MonomialSolution::Inconsistent => continue,
            };
            for el in &tor.elements {
                let Some(zeta) = el
                    .iter()
                    .map(|&a| Scalar::root_of_unity(f, a, tor.modulus))
                    .collect::<Option<Vec<Scalar>>>()
                else {
                    continue;
                };
                let y: Vec<Scalar> = x.iter().zip(&zeta).map(|(a, b)| a * b).collect();
                let params: Vec<Scalar> = tpl
                    .params
                    .iter()
                    .map(|&(j, i)| w(j, i) * &y[i] * &y[i] * y[j].inv().expect("nonzero"))
                    .collect();
                let better = match &best {
                    None => true,
                    Some((bt, bp, _)) => ti < *bt || lex(&params, bp).is_lt(),
                };
                if better {
                    let c = Mat::permutation(f, s).matmul(&Mat::diag(f, &y)).expect("square");
                    best = Some((ti, params, c));
                }
            }
        }
    }
    best.map(|(ti, params, basis)| Normalized {
        label: CanonicalLabel::new(templates[ti].family, params),
        basis,
    })
    .ok_or(missing)
}

/// Outcome of the permutation-and-scaling search.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(Mat),
    /// No permutation admits a scaling, even over the algebraic closure.
    Exhausted,
    /// Some permutation needs roots outside the field.
    NeedsExtension,
}

/// Searches for an isomorphism `a -> b` of the form permutation times
/// diagonal. Complete when both algebras have delta index (1,...,1). The
/// lexicographically least permutation wins.
pub fn permutation_search(a: &EvolutionAlgebra, b: &EvolutionAlgebra, exec: Exec) -> SearchOutcome {
    let n = a.dim();
    let f = a.field();
    let perms = permutations(n);
    let blocked = AtomicBool::new(false);
    let found = exec.find_first(&perms, |s| {
        let mut eqs = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let (wa, wb) = (a.w(s[j], s[i]), b.w(j, i));
                match (wa.is_zero(), wb.is_zero()) {
                    (true, true) => {}
                    (false, false) => eqs.push(MonomialEq {
                        exponents: ratio_exponents(n, j, i),
                        rhs: wb.try_div(wa).ok()?,
                    }),
                    _ => return None,
                }
            }
        }
        match solve_monomial(f, n, &eqs) {
            MonomialSolution::Solved(x) => Some(Mat::permutation(f, s).matmul(&Mat::diag(f, &x)).expect("square")),
            MonomialSolution::NeedsRoot(_) => {
                blocked.store(true, AtomicOrdering::Relaxed);
                None
            }
            MonomialSolution::Inconsistent => None,
        }
    });
    match found {
        Some(c) => SearchOutcome::Found(c),
        None if blocked.load(AtomicOrdering::Relaxed) => SearchOutcome::NeedsExtension,
        None => SearchOutcome::Exhausted,
    }
}
