//! Smith normal form over the integers and solving of multiplicative
//! (monomial) systems `prod_j x_j^a_rj = rho_r` in a field.

use num_integer::Integer;

use crate::scalar::{FieldSpec, Scalar};

/// Smith normal form `U * A * V = S` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: Vec<Vec<i64>>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    /// Nonzero diagonal entries, each positive and dividing the next.
    pub invariants: Vec<i64>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

fn row_op(m: &mut [Vec<i64>], dst: usize, src: usize, q: i64) {
    // row dst -= q * row src
    let s = m[src].clone();
    for (d, x) in m[dst].iter_mut().zip(s) {
        *d -= q * x;
    }
}

fn col_op(m: &mut [Vec<i64>], dst: usize, src: usize, q: i64) {
    for row in m.iter_mut() {
        row[dst] -= q * row[src];
    }
}

fn swap_cols(m: &mut [Vec<i64>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith(a: &[Vec<i64>]) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut s = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[i][j] != 0 && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap(t, bi);
        u.swap(t, bi);
        swap_cols(&mut s, t, bj);
        swap_cols(&mut v, t, bj);
        let mut clean = true;
        for i in t + 1..rows {
            let q = Integer::div_floor(&s[i][t], &s[t][t]);
            if q != 0 {
                row_op(&mut s, i, t, q);
                row_op(&mut u, i, t, q);
            }
            clean &= s[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = Integer::div_floor(&s[t][j], &s[t][t]);
            if q != 0 {
                col_op(&mut s, j, t, q);
                col_op(&mut v, j, t, q);
            }
            clean &= s[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into the pivot row and redo
        let p = s[t][t];
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s[i][j] % p != 0)) {
            row_op(&mut s, t, i, -1);
            row_op(&mut u, t, i, -1);
            continue;
        }
        if p < 0 {
            for x in s[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let invariants = (0..rows.min(cols)).map(|i| s[i][i]).take_while(|&d| d != 0).collect();
    Smith { s, u, v, invariants }
}

/// One multiplicative equation `prod_j x_j^exponents[j] = rhs`.
#[derive(Clone, Debug)]
pub struct MonomialEq {
    pub exponents: Vec<i64>,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MonomialSolution {
    Solved(Vec<Scalar>),
    /// No solution even over the algebraic closure.
    Inconsistent,
    /// Consistent over the closure but a root of this value is missing.
    NeedsRoot(Scalar),
}

/// The finite group of root-of-unity solutions of the homogeneous system:
/// element `e` scales `x_j` by `exp(2 pi i e[j] / modulus)`.
#[derive(Clone, Debug)]
pub struct Torsion {
    pub modulus: u64,
    pub elements: Vec<Vec<i64>>,
    /// The homogeneous system has a positive-dimensional solution set.
    pub continuous: bool,
}

fn product(field: FieldSpec, rhs: &[Scalar], exps: &[i64]) -> Result<Scalar, crate::scalar::ScalarError> {
    let mut acc = Scalar::one(field);
    for (r, &e) in rhs.iter().zip(exps) {
        if e != 0 {
            acc = acc * r.pow(e)?;
        }
    }
    Ok(acc)
}

/// Solves a monomial system in `vars` unknowns, all required nonzero.
pub fn solve_monomial(field: FieldSpec, vars: usize, eqs: &[MonomialEq]) -> MonomialSolution {
    if eqs.iter().any(|e| e.rhs.is_zero()) {
        return MonomialSolution::Inconsistent;
    }
    if eqs.is_empty() {
        return MonomialSolution::Solved(vec![Scalar::one(field); vars]);
    }
    let a: Vec<Vec<i64>> = eqs.iter().map(|e| e.exponents.clone()).collect();
    let sm = smith(&a);
    let rhs: Vec<Scalar> = eqs.iter().map(|e| e.rhs.clone()).collect();
    let rank = sm.invariants.len();
    let mut z = vec![Scalar::one(field); vars];
    for (c, urow) in sm.u.iter().enumerate() {
        let sigma = product(field, &rhs, urow).expect("nonzero right-hand sides");
        if c < rank {
            match sigma.nth_root(sm.invariants[c] as u32) {
                Ok(r) => z[c] = r,
                Err(e) => return MonomialSolution::NeedsRoot(e.radicand),
            }
        } else if !sigma.is_one() {
            return MonomialSolution::Inconsistent;
        }
    }
    let x: Vec<Scalar> = (0..vars)
        .map(|j| product(field, &z, &sm.v[j]).expect("nonzero roots"))
        .collect();
    debug_assert!(eqs.iter().all(|e| product(field, &x, &e.exponents).unwrap() == e.rhs));
    MonomialSolution::Solved(x)
}

/// Root-of-unity solutions of the homogeneous system `prod x^a = 1`.
pub fn torsion(vars: usize, exponents: &[Vec<i64>]) -> Torsion {
    let sm = smith(exponents);
    let rank = sm.invariants.len();
    let modulus = sm.invariants.iter().fold(1i64, |l, &d| l.lcm(&d)) as u64;
    let mut elements = vec![vec![0i64; vars]];
    for c in 0..rank {
        let d = sm.invariants[c];
        let step = modulus as i64 / d;
        let mut next = Vec::new();
        for e in &elements {
            for k in 0..d {
                next.push(
                    (0..vars)
                        .map(|j| (e[j] + sm.v[j][c] * k * step).rem_euclid(modulus as i64))
                        .collect(),
                );
            }
        }
        elements = next;
    }
    elements.sort();
    elements.dedup();
    Torsion {
        modulus,
        elements,
        continuous: rank < vars,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        (0..a.len())
            .map(|i| {
                (0..b[0].len())
                    .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn smith_identity_holds() {
        let a = vec![vec![2, -1, 0], vec![0, 2, -1], vec![-1, 0, 2]];
        let sm = smith(&a);
        assert_eq!(mul(&mul(&sm.u, &a), &sm.v), sm.s);
        assert_eq!(sm.invariants, vec![1, 1, 7]);
        let b = vec![vec![2, 4], vec![6, 8]];
        assert_eq!(smith(&b).invariants, vec![2, 4]);
    }

    #[test]
    fn monomial_cycle() {
        // x2^2/x1 = 2, x3^2/x2 = 3, x1^2/x3 = 5 has a 7th-root obstruction
        let f = FieldSpec::GaussianRational;
        let eq = |e: [i64; 3], r: &str| MonomialEq {
            exponents: e.to_vec(),
            rhs: qi(r),
        };
        let sys = [eq([-1, 2, 0], "2"), eq([0, -1, 2], "3"), eq([2, 0, -1], "5")];
        assert!(matches!(solve_monomial(f, 3, &sys), MonomialSolution::NeedsRoot(_)));
        let sys = [eq([-1, 2, 0], "1"), eq([0, -1, 2], "1"), eq([2, 0, -1], "1")];
        assert_eq!(solve_monomial(f, 3, &sys), MonomialSolution::Solved(vec![qi("1"); 3]));
        let t = torsion(3, &sys.iter().map(|e| e.exponents.clone()).collect::<Vec<_>>());
        assert_eq!((t.modulus, t.elements.len(), t.continuous), (7, 7, false));
    }

    #[test]
    fn monomial_inconsistent() {
        let f = FieldSpec::GaussianRational;
        let sys = [
            MonomialEq {
                exponents: vec![1, 1],
                rhs: qi("2"),
            },
            MonomialEq {
                exponents: vec![2, 2],
                rhs: qi("3"),
            },
        ];
        assert_eq!(solve_monomial(f, 2, &sys), MonomialSolution::Inconsistent);
    }
}
