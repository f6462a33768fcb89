//! Rational functions in one variable `t`.

use std::fmt;

use thiserror::Error;

use crate::scalar::{FieldSpec, Scalar};

/// Polynomial coefficients, lowest degree first, no trailing zeros.
type Poly = Vec<Scalar>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

fn p_add(a: &[Scalar], b: &[Scalar], f: FieldSpec) -> Poly {
    let n = a.len().max(b.len());
    let z = Scalar::zero(f);
    trim(
        (0..n)
            .map(|k| a.get(k).unwrap_or(&z) + b.get(k).unwrap_or(&z))
            .collect(),
    )
}

fn p_neg(a: &[Scalar]) -> Poly {
    a.iter().map(|x| -x).collect()
}

fn p_mul(a: &[Scalar], b: &[Scalar], f: FieldSpec) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(f); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

fn p_scale(a: &[Scalar], s: &Scalar) -> Poly {
    trim(a.iter().map(|x| x * s).collect())
}

/// Quotient and remainder; `b` must be nonzero.
fn p_divrem(a: &[Scalar], b: &[Scalar], f: FieldSpec) -> (Poly, Poly) {
    let lead = b.last().expect("nonzero divisor").inv().expect("nonzero lead");
    let mut r: Poly = a.to_vec();
    let mut q = vec![Scalar::zero(f); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() * &lead;
        for (j, y) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &(&c * y);
        }
        q[k] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn p_gcd(a: &[Scalar], b: &[Scalar], f: FieldSpec) -> Poly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = p_divrem(&x, &y, f);
        x = y;
        y = r;
    }
    match x.last() {
        Some(l) => p_scale(&x, &l.inv().expect("nonzero")),
        None => x,
    }
}

fn p_eval(a: &[Scalar], t: &Scalar, f: FieldSpec) -> Scalar {
    a.iter()
        .rev()
        .fold(Scalar::zero(f), |acc, c| acc * t.clone() + c.clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFunError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational function literal {0:?}: {1}")]
    Parse(String, String),
}

/// Reduced fraction with a monic denominator, so equal functions have
/// equal representations.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
    field: FieldSpec,
}

impl RatFun {
    pub fn new(num: Vec<Scalar>, den: Vec<Scalar>, field: FieldSpec) -> Result<RatFun, RatFunError> {
        let (num, den) = (trim(num), trim(den));
        if den.is_empty() {
            return Err(RatFunError::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(RatFun::zero(field));
        }
        let g = p_gcd(&num, &den, field);
        let (num, _) = p_divrem(&num, &g, field);
        let (den, _) = p_divrem(&den, &g, field);
        let l = den.last().expect("nonzero").inv().expect("nonzero");
        Ok(RatFun {
            num: p_scale(&num, &l),
            den: p_scale(&den, &l),
            field,
        })
    }

    pub fn constant(c: Scalar) -> RatFun {
        let f = c.field();
        RatFun::new(vec![c], vec![Scalar::one(f)], f).expect("nonzero denominator")
    }

    pub fn zero(field: FieldSpec) -> RatFun {
        RatFun {
            num: Vec::new(),
            den: vec![Scalar::one(field)],
            field,
        }
    }

    pub fn one(field: FieldSpec) -> RatFun {
        RatFun::constant(Scalar::one(field))
    }

    /// The variable `t`.
    pub fn t(field: FieldSpec) -> RatFun {
        RatFun {
            num: vec![Scalar::zero(field), Scalar::one(field)],
            den: vec![Scalar::one(field)],
            field,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn numerator(&self) -> &[Scalar] {
        &self.num
    }

    pub fn denominator(&self) -> &[Scalar] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        let f = self.field;
        let n = p_add(&p_mul(&self.num, &o.den, f), &p_mul(&o.num, &self.den, f), f);
        RatFun::new(n, p_mul(&self.den, &o.den, f), f).expect("nonzero denominators")
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: p_neg(&self.num),
            den: self.den.clone(),
            field: self.field,
        }
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        let f = self.field;
        RatFun::new(p_mul(&self.num, &o.num, f), p_mul(&self.den, &o.den, f), f).expect("nonzero denominators")
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun, RatFunError> {
        if o.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        let f = self.field;
        RatFun::new(p_mul(&self.num, &o.den, f), p_mul(&self.den, &o.num, f), f)
    }

    pub fn pow(&self, e: u32) -> RatFun {
        (0..e).fold(RatFun::one(self.field), |acc, _| acc.mul(self))
    }

    /// Value at `t = t0`, or `None` at a pole.
    pub fn eval(&self, t0: &Scalar) -> Option<Scalar> {
        let d = p_eval(&self.den, t0, self.field);
        if d.is_zero() {
            return None;
        }
        Some(p_eval(&self.num, t0, self.field).try_div(&d).expect("nonzero"))
    }

    /// Value at `t = 0`, or `None` if `t = 0` is a pole.
    pub fn at_zero(&self) -> Option<Scalar> {
        self.eval(&Scalar::zero(self.field))
    }

    /// Parses a literal such as `t^2`, `1/(2*t^2)` or `i*(1-t^2)/(2*t^2)`.
    /// Plain scalar literals (`1/2+3i`) are read with the scalar grammar.
    pub fn parse(s: &str, field: FieldSpec) -> Result<RatFun, RatFunError> {
        if let Ok(c) = Scalar::parse(s, field) {
            return Ok(RatFun::constant(c));
        }
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
            field,
        };
        let r = p.expr().map_err(|e| RatFunError::Parse(s.to_owned(), e))?;
        if p.pos != p.s.len() {
            return Err(RatFunError::Parse(
                s.to_owned(),
                format!("unexpected input at {}", p.pos),
            ));
        }
        Ok(r)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    field: FieldSpec,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFun, String> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let r = self.term()?;
            acc = if c == b'+' { acc.add(&r) } else { acc.sub(&r) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun, String> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let r = self.unary()?;
            acc = if c == b'*' {
                acc.mul(&r)
            } else {
                acc.div(&r).map_err(|e| e.to_string())?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFun, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFun, String> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| "expected an exponent".to_string())?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun, String> {
        let f = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err("expected )".into());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(RatFun::t(f))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(RatFun::constant(Scalar::imag_unit(f).map_err(|e| e.to_string())?))
            }
            Some(b'0'..=b'9') => {
                // a scalar literal: digits, optional `/digits`, optional `i`
                let start = self.pos;
                let digits = |p: &mut Self| {
                    while matches!(p.peek(), Some(b'0'..=b'9' | b'.')) {
                        p.pos += 1;
                    }
                };
                digits(self);
                if self.peek() == Some(b'/') && matches!(self.s.get(self.pos + 1), Some(b'0'..=b'9')) {
                    self.pos += 1;
                    digits(self);
                }
                if self.peek() == Some(b'i') {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                Scalar::parse(lit, f).map(RatFun::constant).map_err(|e| e.to_string())
            }
            other => Err(format!("unexpected {:?}", other.map(char::from))),
        }
    }
}

fn fmt_poly(p: &[Scalar]) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{k}"),
        };
        let coef = c.to_string();
        parts.push(match (k, coef.as_str()) {
            (0, _) => coef,
            (_, "1") => mono,
            (_, "-1") => format!("-{mono}"),
            _ if coef.contains(['+', 'i']) || coef[1..].contains('-') => format!("({coef})*{mono}"),
            _ => format!("{coef}*{mono}"),
        });
    }
    let mut s = parts[0].clone();
    for q in &parts[1..] {
        if q.starts_with('-') {
            s.push_str(q);
        } else {
            s.push('+');
            s.push_str(q);
        }
    }
    s
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_poly(&self.num);
        if self.den.len() == 1 {
            return write!(f, "{n}");
        }
        let wrap = |s: String, p: &[Scalar]| {
            if p.iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(n, &self.num), wrap(fmt_poly(&self.den), &self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    const Q: FieldSpec = FieldSpec::GaussianRational;

    fn r(s: &str) -> RatFun {
        RatFun::parse(s, Q).unwrap()
    }

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(r("(t^2-1)/(t-1)"), r("t+1"));
        assert_eq!(r("(2*t)/(4*t^2)"), r("1/(2*t)"));
        assert_eq!(r("1/2"), RatFun::constant(qi("1/2")));
        assert_eq!(r("i*(1-t^2)/(2*t^2)").denominator(), &[qi("0"), qi("0"), qi("1")]);
    }

    #[test]
    fn limits_at_zero() {
        assert_eq!(r("(1+t^2)/(1-t)").at_zero(), Some(qi("1")));
        assert_eq!(r("t/t").at_zero(), Some(qi("1")));
        assert_eq!(r("1/t").at_zero(), None);
    }

    #[test]
    fn display_reparses() {
        for s in [
            "t^2",
            "1/(2*t^2)",
            "i*(1-t^2)/(2*t^2)",
            "(1+i)*t-3",
            "-t",
            "2i*t+1/2i",
            "3/4*t^3",
        ] {
            assert_eq!(r(&r(s).to_string()), r(s), "{s}");
        }
    }
}
