//! Multilinear polynomial identities in commutative algebras.

use thiserror::Error;

use crate::algebra::EvolutionAlgebra;
use crate::exec::Exec;
use crate::linalg::{Mat, Vector};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Var(usize),
    Mul(Box<Tree>, Box<Tree>),
}

impl Tree {
    fn vars(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Var(v) => out.push(*v),
            Tree::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    fn eval(&self, a: &EvolutionAlgebra, args: &[Vector]) -> Vector {
        match self {
            Tree::Var(v) => args[*v].clone(),
            Tree::Mul(x, y) => a.mul(&x.eval(a, args), &y.eval(a, args)).expect("matching dimensions"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("term {0} is not multilinear")]
    NotMultilinear(usize),
    #[error("invalid identity: {0}")]
    Parse(String),
}

/// `sum_k coefficient_k * term_k(x_1, ..., x_d)`, each term using every
/// variable exactly once.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySpec {
    pub degree: usize,
    pub variables: Vec<char>,
    pub terms: Vec<(Scalar, Tree)>,
}

impl IdentitySpec {
    pub fn new(degree: usize, variables: Vec<char>, terms: Vec<(Scalar, Tree)>) -> Result<Self, IdentityError> {
        for (k, (_, t)) in terms.iter().enumerate() {
            let mut v = Vec::new();
            t.vars(&mut v);
            v.sort_unstable();
            if v != (0..degree).collect::<Vec<_>>() {
                return Err(IdentityError::NotMultilinear(k));
            }
        }
        Ok(IdentitySpec {
            degree,
            variables,
            terms,
        })
    }

    /// Parses text such as `+1*((x*y)*z)*t  -1*((x*y)*t)*z`. Variables are
    /// single letters other than `i`; the coefficient and its `*` may be
    /// omitted.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Self, IdentityError> {
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        for &c in &s {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            // a sign inside a leading complex coefficient such as 1/2+3i
            // does not start a new term
            let in_coef = chunks.last().is_some_and(|(_, b)| {
                !b.is_empty() && b.chars().all(|ch| ch.is_ascii_digit() || matches!(ch, '/' | '.' | 'i'))
            });
            if depth == 0 && (c == '+' || c == '-') && !in_coef {
                chunks.push((c == '-', String::new()));
            } else {
                if chunks.is_empty() {
                    chunks.push((false, String::new()));
                }
                chunks.last_mut().unwrap().1.push(c);
            }
        }
        let mut vars: Vec<char> = Vec::new();
        let mut terms = Vec::new();
        for (neg, body) in chunks {
            let (coef, expr) = match body.split_once('*') {
                Some((c, rest)) if Scalar::parse(c, field).is_ok() => {
                    (Scalar::parse(c, field).unwrap(), rest.to_string())
                }
                _ => (Scalar::one(field), body.clone()),
            };
            let coef = if neg { -coef } else { coef };
            let mut p = TreeParser {
                s: expr.chars().collect(),
                pos: 0,
                vars: &mut vars,
            };
            let t = p.expr()?;
            if p.pos != p.s.len() {
                return Err(IdentityError::Parse(format!("unexpected input in {expr:?}")));
            }
            terms.push((coef, t));
        }
        if terms.is_empty() {
            return Err(IdentityError::Parse("no terms".into()));
        }
        IdentitySpec::new(vars.len(), vars, terms)
    }
}

struct TreeParser<'a> {
    s: Vec<char>,
    pos: usize,
    vars: &'a mut Vec<char>,
}

impl TreeParser<'_> {
    fn expr(&mut self) -> Result<Tree, IdentityError> {
        let mut acc = self.atom()?;
        while self.s.get(self.pos) == Some(&'*') {
            self.pos += 1;
            let r = self.atom()?;
            acc = Tree::Mul(Box::new(acc), Box::new(r));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Tree, IdentityError> {
        match self.s.get(self.pos).copied() {
            Some('(') => {
                self.pos += 1;
                let t = self.expr()?;
                if self.s.get(self.pos) != Some(&')') {
                    return Err(IdentityError::Parse("expected )".into()));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(c) if c.is_ascii_alphabetic() && c != 'i' => {
                self.pos += 1;
                let k = match self.vars.iter().position(|&v| v == c) {
                    Some(k) => k,
                    None => {
                        self.vars.push(c);
                        self.vars.len() - 1
                    }
                };
                Ok(Tree::Var(k))
            }
            other => Err(IdentityError::Parse(format!("unexpected {other:?}"))),
        }
    }
}

fn basis_vec(f: FieldSpec, n: usize, i: usize) -> Vector {
    (0..n).map(|k| Scalar::from_i64(f, (k == i) as i64)).collect()
}

fn tuple(mut idx: usize, n: usize, d: usize) -> Vec<usize> {
    (0..d)
        .map(|_| {
            let r = idx % n;
            idx /= n;
            r
        })
        .collect()
}

/// True iff the identity vanishes on every tuple of basis vectors, which
/// suffices for multilinear identities.
pub fn check_identity(a: &EvolutionAlgebra, spec: &IdentitySpec) -> bool {
    check_identity_with(a, spec, Exec::default())
}

pub fn check_identity_with(a: &EvolutionAlgebra, spec: &IdentitySpec, exec: Exec) -> bool {
    let n = a.dim();
    let f = a.field();
    let basis: Vec<Vector> = (0..n).map(|i| basis_vec(f, n, i)).collect();
    let total = n.pow(spec.degree as u32);
    exec.all_range(total, |idx| {
        let args: Vec<Vector> = tuple(idx, n, spec.degree)
            .into_iter()
            .map(|i| basis[i].clone())
            .collect();
        let mut acc = vec![Scalar::zero(f); n];
        for (c, t) in &spec.terms {
            for (x, y) in acc.iter_mut().zip(t.eval(a, &args)) {
                *x = x.clone() + c * &y;
            }
        }
        acc.iter().all(Scalar::is_zero)
    })
}

/// The three commutative degree-3 multilinear monomials `(xy)z`, `(yz)x`,
/// `(zx)y`.
pub fn degree3_monomials() -> [Tree; 3] {
    let v = Tree::Var;
    let m = |a: Tree, b: Tree| Tree::Mul(Box::new(a), Box::new(b));
    [m(m(v(0), v(1)), v(2)), m(m(v(1), v(2)), v(0)), m(m(v(2), v(0)), v(1))]
}

/// Basis of the coefficient vectors `(c1, c2, c3)` for which
/// `c1 (xy)z + c2 (yz)x + c3 (zx)y` vanishes identically on `a`.
pub fn find_multilinear_identities(a: &EvolutionAlgebra, degree: usize) -> Result<Vec<Vector>, IdentityError> {
    if degree != 3 {
        return Err(IdentityError::Parse(format!(
            "only degree 3 is implemented, got {degree}"
        )));
    }
    let n = a.dim();
    let f = a.field();
    let basis: Vec<Vector> = (0..n).map(|i| basis_vec(f, n, i)).collect();
    let monos = degree3_monomials();
    let mut rows = Vec::new();
    for idx in 0..n.pow(3) {
        let args: Vec<Vector> = tuple(idx, n, 3).into_iter().map(|i| basis[i].clone()).collect();
        let vals: Vec<Vector> = monos.iter().map(|m| m.eval(a, &args)).collect();
        for k in 0..n {
            rows.push(vals.iter().map(|v| v[k].clone()).collect());
        }
    }
    let sys = Mat::from_rows(f, rows).expect("three columns");
    Ok(sys.nullspace())
}
