//! Text format for algebras and matrices.
//!
//! ```text
//! evoalg 1
//! field Qi
//! dim 2
//! 1 1
//! 0 0
//! ```
//!
//! Row `k` lists `w_k1 .. w_kn`. The field line is `field Qi`,
//! `field Fp <p>` or `field approx <tol>`. Blank lines and lines starting
//! with `#` are ignored.

use thiserror::Error;

use crate::algebra::EvolutionAlgebra;
use crate::linalg::Mat;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses the `field ...` line.
pub fn parse_field(line_no: usize, line: &str) -> Result<FieldSpec, ParseError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    match parts.as_slice() {
        ["field", "Qi"] => Ok(FieldSpec::GaussianRational),
        ["field", "Fp", p] => {
            let p: u64 = p.parse().map_err(|_| perr(line_no, format!("bad prime {p:?}")))?;
            FieldSpec::prime(p).map_err(|e| perr(line_no, e.to_string()))
        }
        ["field", "approx", t] => {
            let t: f64 = t.parse().map_err(|_| perr(line_no, format!("bad tolerance {t:?}")))?;
            FieldSpec::approx(t).map_err(|e| perr(line_no, e.to_string()))
        }
        _ => Err(perr(
            line_no,
            format!("expected `field Qi|Fp <p>|approx <tol>`, got {line:?}"),
        )),
    }
}

/// Parses a full algebra file and returns the square matrix it contains.
pub fn parse_matrix_file(text: &str) -> Result<Mat, ParseError> {
    let mut lines = content_lines(text);
    let (l1, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["evoalg", "1"] {
        return Err(perr(l1, format!("expected `evoalg 1`, got {header:?}")));
    }
    let (l2, fl) = lines.next().ok_or_else(|| perr(l1 + 1, "missing field line"))?;
    let field = parse_field(l2, fl)?;
    let (l3, dl) = lines.next().ok_or_else(|| perr(l2 + 1, "missing dim line"))?;
    let n: usize = match dl.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["dim", n] => n.parse().map_err(|_| perr(l3, format!("bad dimension {n:?}")))?,
        _ => return Err(perr(l3, format!("expected `dim <n>`, got {dl:?}"))),
    };
    if n == 0 {
        return Err(perr(l3, "dimension must be positive"));
    }
    let rows = parse_rows(&mut lines, n, field, l3)?;
    if let Some((l, extra)) = lines.next() {
        return Err(perr(l, format!("unexpected trailing line {extra:?}")));
    }
    Mat::from_rows(field, rows).map_err(|e| perr(l3, e.to_string()))
}

/// Reads `n` rows of `n` scalar literals.
pub fn parse_rows<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    n: usize,
    field: FieldSpec,
    after: usize,
) -> Result<Vec<Vec<Scalar>>, ParseError> {
    let mut rows = Vec::with_capacity(n);
    let mut last = after;
    for k in 0..n {
        let (l, row) = lines
            .next()
            .ok_or_else(|| perr(last + 1, format!("missing matrix row {}", k + 1)))?;
        last = l;
        let entries: Vec<&str> = row.split_whitespace().collect();
        if entries.len() != n {
            return Err(perr(l, format!("expected {n} entries, found {}", entries.len())));
        }
        let parsed = entries
            .iter()
            .map(|s| Scalar::parse(s, field).map_err(|e| perr(l, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(parsed);
    }
    Ok(rows)
}

pub fn parse_algebra(text: &str) -> Result<EvolutionAlgebra, ParseError> {
    let m = parse_matrix_file(text)?;
    EvolutionAlgebra::new(m).map_err(|e| perr(1, e.to_string()))
}

/// Matrix rows, one per line, entries separated by a space.
pub fn write_matrix_block(m: &Mat) -> String {
    m.to_string()
}

pub fn write_matrix_file(m: &Mat) -> String {
    format!(
        "evoalg 1\nfield {}\ndim {}\n{}",
        m.field(),
        m.rows(),
        write_matrix_block(m)
    )
}

pub fn write_algebra(a: &EvolutionAlgebra) -> String {
    write_matrix_file(a.matrix())
}

/// Renders a 0-based index set 1-based, e.g. `{1,3}`.
pub fn index_set(ix: &[usize]) -> String {
    let v: Vec<String> = ix.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn round_trip() {
        let text = "evoalg 1\nfield Qi\ndim 2\n1 1/2+i\n0 -i\n";
        let a = parse_algebra(text).unwrap();
        assert_eq!(a.w(0, 1), &qi("1/2+i"));
        assert_eq!(write_algebra(&a), text);
        assert_eq!(parse_algebra(&write_algebra(&a)).unwrap(), a);
    }

    #[test]
    fn prime_field_file() {
        let a = parse_algebra("evoalg 1\nfield Fp 3\ndim 2\n0 1\n1 0\n").unwrap();
        assert_eq!(a.field(), FieldSpec::PrimeField(3));
        assert!(parse_algebra("evoalg 1\nfield Fp 4\ndim 1\n0\n").is_err());
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_algebra("evoalg 1\nfield Qi\ndim 2\n1 1\n1\n").unwrap_err();
        assert_eq!(e.line, 5);
        let e = parse_algebra("evoalg 2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_algebra("evoalg 1\nfield Qi\ndim 1\n1/0\n").unwrap_err();
        assert_eq!(e.line, 4);
    }
}
