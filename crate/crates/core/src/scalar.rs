//! Scalars over the three supported fields: exact Gaussian rationals, prime
//! fields, and floating-point complex numbers with a tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default tolerance of approximate mode.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldSpec {
    /// Exact arithmetic in Q(i).
    GaussianRational,
    /// The prime field F_p.
    PrimeField(u64),
    /// Complex floating point; comparisons use the stored tolerance.
    ApproxComplex(f64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if p < 2 || !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn approx(tol: f64) -> Result<Self, ScalarError> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(ScalarError::BadTolerance(tol));
        }
        Ok(FieldSpec::ApproxComplex(tol))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, FieldSpec::ApproxComplex(_))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::GaussianRational => write!(f, "Qi"),
            FieldSpec::PrimeField(p) => write!(f, "Fp {p}"),
            FieldSpec::ApproxComplex(t) => write!(f, "approx {t:e}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid tolerance {0}")]
    BadTolerance(f64),
    #[error("root of {0} is not in the field")]
    ExtensionRequired(Scalar),
    #[error("root index must be positive")]
    ZeroRootIndex,
}

/// A root that does not exist in the ground field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("extension required for a root of {radicand}")]
pub struct ExtensionRequired {
    pub radicand: Scalar,
}

impl From<ExtensionRequired> for ScalarError {
    fn from(e: ExtensionRequired) -> Self {
        ScalarError::ExtensionRequired(e.radicand)
    }
}

/// An element of Q(i), stored as two big rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn neg(&self) -> Self {
        GaussRat::new(-&self.re, -&self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussRat::new(&self.re / &n, -&self.im / &n))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A field element tagged with its field.
#[derive(Clone, Debug)]
pub enum Scalar {
    Qi(GaussRat),
    Fp { value: u64, p: u64 },
    Approx { z: Complex64, tol: f64 },
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Qi(a), Scalar::Qi(b)) => a == b,
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) => p == q && a == b,
            (Scalar::Approx { z: a, tol }, Scalar::Approx { z: b, .. }) => approx_eq(*a, *b, *tol),
            _ => false,
        }
    }
}

fn approx_eq(a: Complex64, b: Complex64, tol: f64) -> bool {
    let scale = 1f64.max(a.norm()).max(b.norm());
    (a - b).norm() <= tol * scale
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldSpec) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, n: i64) -> Scalar {
        match field {
            FieldSpec::GaussianRational => Scalar::Qi(GaussRat::from_int(n)),
            FieldSpec::PrimeField(p) => Scalar::Fp {
                value: (n as i128).rem_euclid(p as i128) as u64,
                p,
            },
            FieldSpec::ApproxComplex(tol) => Scalar::Approx {
                z: Complex64::new(n as f64, 0.0),
                tol,
            },
        }
    }

    /// `re + im*i` from two rationals given as integer fractions.
    pub fn from_gauss(field: FieldSpec, re: BigRational, im: BigRational) -> Result<Scalar, ScalarError> {
        match field {
            FieldSpec::GaussianRational => Ok(Scalar::Qi(GaussRat::new(re, im))),
            FieldSpec::ApproxComplex(tol) => Ok(Scalar::Approx {
                z: Complex64::new(rat_to_f64(&re), rat_to_f64(&im)),
                tol,
            }),
            FieldSpec::PrimeField(p) => {
                let r = rat_mod(&re, p)?;
                if im.is_zero() {
                    return Ok(Scalar::Fp { value: r, p });
                }
                let i = Scalar::imag_unit(field)?;
                let s = Scalar::Fp {
                    value: rat_mod(&im, p)?,
                    p,
                };
                Ok(&Scalar::Fp { value: r, p } + &(&s * &i))
            }
        }
    }

    pub fn from_complex(field: FieldSpec, z: Complex64) -> Scalar {
        match field {
            FieldSpec::ApproxComplex(tol) => Scalar::Approx { z, tol },
            _ => panic!("from_complex requires approximate mode"),
        }
    }

    /// A square root of -1 in the field, when one exists.
    pub fn imag_unit(field: FieldSpec) -> Result<Scalar, ScalarError> {
        match field {
            FieldSpec::GaussianRational => Ok(Scalar::Qi(GaussRat::new(BigRational::zero(), BigRational::one()))),
            FieldSpec::ApproxComplex(tol) => Ok(Scalar::Approx {
                z: Complex64::new(0.0, 1.0),
                tol,
            }),
            FieldSpec::PrimeField(_) => Ok(Scalar::from_i64(field, -1).sqrt()?),
        }
    }

    /// A primitive-or-not root of unity `exp(2 pi i k / m)`, if the field
    /// contains the m-th roots of unity.
    pub fn root_of_unity(field: FieldSpec, k: i64, m: u64) -> Option<Scalar> {
        assert!(m > 0);
        let k = k.rem_euclid(m as i64) as u64;
        let g = k.gcd(&m);
        let (k, m) = (k / g, m / g);
        match field {
            FieldSpec::GaussianRational => {
                let i = Scalar::imag_unit(field).ok()?;
                match m {
                    1 => Some(Scalar::one(field)),
                    2 => Some(Scalar::from_i64(field, -1)),
                    4 => Some(i.pow(k as i64).ok()?),
                    _ => None,
                }
            }
            FieldSpec::ApproxComplex(tol) => {
                let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                Some(Scalar::Approx {
                    z: Complex64::new(t.cos(), t.sin()),
                    tol,
                })
            }
            FieldSpec::PrimeField(p) => {
                if (p - 1) % m != 0 {
                    return None;
                }
                let g = primitive_root(p);
                let zeta = mod_pow(g, (p - 1) / m, p);
                Some(Scalar::Fp {
                    value: mod_pow(zeta, k, p),
                    p,
                })
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Qi(_) => FieldSpec::GaussianRational,
            Scalar::Fp { p, .. } => FieldSpec::PrimeField(*p),
            Scalar::Approx { tol, .. } => FieldSpec::ApproxComplex(*tol),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Qi(a) => a.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
            Scalar::Approx { z, tol } => z.norm() <= *tol,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one(self.field())
    }

    fn check(&self, o: &Scalar) -> Result<(), ScalarError> {
        let (a, b) = (self.field(), o.field());
        if a == b {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(a, b))
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(o)?;
        Ok(match (self, o) {
            (Scalar::Qi(a), Scalar::Qi(b)) => Scalar::Qi(a.add(b)),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            (Scalar::Approx { z: a, tol }, Scalar::Approx { z: b, .. }) => Scalar::Approx { z: a + b, tol: *tol },
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&o.neg_ref())
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(o)?;
        Ok(match (self, o) {
            (Scalar::Qi(a), Scalar::Qi(b)) => Scalar::Qi(a.mul(b)),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: mul_mod(*a, *b, *p),
                p: *p,
            },
            (Scalar::Approx { z: a, tol }, Scalar::Approx { z: b, .. }) => Scalar::Approx { z: a * b, tol: *tol },
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(o)?;
        self.try_mul(&o.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Qi(a) => Scalar::Qi(a.inv().ok_or(ScalarError::DivisionByZero)?),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: mod_pow(*value, p - 2, *p),
                p: *p,
            },
            Scalar::Approx { z, tol } => Scalar::Approx { z: z.inv(), tol: *tol },
        })
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Qi(a) => Scalar::Qi(a.neg()),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: (p - value) % p,
                p: *p,
            },
            Scalar::Approx { z, tol } => Scalar::Approx { z: -z, tol: *tol },
        }
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one(self.field());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Square root. Over Q(i) and C the principal branch is returned: the
    /// root with positive real part, or zero real part and non-negative
    /// imaginary part.
    pub fn sqrt(&self) -> Result<Scalar, ExtensionRequired> {
        self.nth_root(2)
    }

    /// An n-th root in the field. Over Q(i) the root closest in argument to
    /// the principal complex root is chosen; over F_p the least residue.
    pub fn nth_root(&self, n: u32) -> Result<Scalar, ExtensionRequired> {
        assert!(n > 0, "root index must be positive");
        let fail = || ExtensionRequired { radicand: self.clone() };
        if n == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        match self {
            Scalar::Qi(a) => {
                let roots = gauss_nth_roots(a, n);
                if roots.is_empty() {
                    return Err(fail());
                }
                Ok(Scalar::Qi(choose_branch(a, roots, n)))
            }
            Scalar::Fp { value, p } => {
                let e = n as u64;
                (1..*p)
                    .find(|r| mod_pow(*r, e, *p) == *value)
                    .map(|r| Scalar::Fp { value: r, p: *p })
                    .ok_or_else(fail)
            }
            Scalar::Approx { z, tol } => {
                let (r, t) = z.to_polar();
                Ok(Scalar::Approx {
                    z: Complex64::from_polar(r.powf(1.0 / n as f64), t / n as f64),
                    tol: *tol,
                })
            }
        }
    }

    /// Complex value, for display and approximate comparisons.
    pub fn to_complex(&self) -> Option<Complex64> {
        match self {
            Scalar::Qi(a) => Some(a.to_complex()),
            Scalar::Approx { z, .. } => Some(*z),
            Scalar::Fp { .. } => None,
        }
    }

    pub fn as_gauss(&self) -> Option<&GaussRat> {
        match self {
            Scalar::Qi(a) => Some(a),
            _ => None,
        }
    }

    /// Converts to another field. Q(i) maps into F_p (when denominators are
    /// invertible and i exists) and into C; C maps nowhere exactly.
    pub fn convert(&self, field: FieldSpec) -> Result<Scalar, ScalarError> {
        if self.field() == field {
            return Ok(self.clone());
        }
        match (self, field) {
            (Scalar::Qi(a), _) => Scalar::from_gauss(field, a.re.clone(), a.im.clone()),
            (Scalar::Approx { z, .. }, FieldSpec::ApproxComplex(tol)) => Ok(Scalar::Approx { z: *z, tol }),
            (Scalar::Fp { value, p }, FieldSpec::PrimeField(q)) if *p == q => Ok(Scalar::Fp { value: *value, p: q }),
            _ => Err(ScalarError::FieldMismatch(self.field(), field)),
        }
    }

    /// Total order used to choose canonical parameters. Zero first, then the
    /// half plane `re > 0 or (re = 0 and im > 0)`, then the other half; ties
    /// broken by real then imaginary part. Over F_p residues are compared.
    pub fn canonical_cmp(&self, o: &Scalar) -> Ordering {
        match (self, o) {
            (Scalar::Qi(a), Scalar::Qi(b)) => {
                let key = |x: &GaussRat| -> u8 {
                    if x.is_zero() {
                        0
                    } else if x.re.is_positive() || (x.re.is_zero() && x.im.is_positive()) {
                        1
                    } else {
                        2
                    }
                };
                key(a)
                    .cmp(&key(b))
                    .then_with(|| a.re.cmp(&b.re))
                    .then_with(|| a.im.cmp(&b.im))
            }
            (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) => a.cmp(b),
            (Scalar::Approx { z: a, tol }, Scalar::Approx { z: b, .. }) => {
                if approx_eq(*a, *b, *tol) {
                    return Ordering::Equal;
                }
                let key = |x: Complex64| -> u8 {
                    if x.norm() <= *tol {
                        0
                    } else if x.re > *tol || (x.re.abs() <= *tol && x.im > 0.0) {
                        1
                    } else {
                        2
                    }
                };
                let snap = |v: f64, w: f64| {
                    if (v - w).abs() <= *tol {
                        Ordering::Equal
                    } else {
                        v.total_cmp(&w)
                    }
                };
                key(*a)
                    .cmp(&key(*b))
                    .then_with(|| snap(a.re, b.re))
                    .then_with(|| snap(a.im, b.im))
            }
            _ => self.field().to_string().cmp(&o.field().to_string()),
        }
    }

    /// Parses a scalar literal in the given field.
    pub fn parse(s: &str, field: FieldSpec) -> Result<Scalar, ParseScalarError> {
        parse_scalar(s.trim(), field)
    }
}

fn rat_mod(r: &BigRational, p: u64) -> Result<u64, ScalarError> {
    let pb = BigInt::from(p);
    let n = r.numer().mod_floor(&pb).to_u64().unwrap();
    let d = r.denom().mod_floor(&pb).to_u64().unwrap();
    if d == 0 {
        return Err(ScalarError::DivisionByZero);
    }
    Ok(mul_mod(n, mod_pow(d, p - 2, p), p))
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|g| factors.iter().all(|q| mod_pow(*g, (p - 1) / q, p) != 1))
        .unwrap()
}

// Gaussian integer helpers, represented as (re, im) pairs.
type GInt = (BigInt, BigInt);

fn gmul(a: &GInt, b: &GInt) -> GInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gpow(a: &GInt, n: u32) -> GInt {
    let mut acc = (BigInt::one(), BigInt::zero());
    for _ in 0..n {
        acc = gmul(&acc, a);
    }
    acc
}

fn big_to_f64_scaled(x: &BigInt, shift: u64) -> f64 {
    (x >> shift).to_f64().unwrap_or(0.0)
}

/// All n-th roots of `a` lying in Q(i).
fn gauss_nth_roots(a: &GaussRat, n: u32) -> Vec<GaussRat> {
    let d = a.re.denom().lcm(a.im.denom());
    let ar = a.re.numer() * (&d / a.re.denom());
    let ai = a.im.numer() * (&d / a.im.denom());
    // z = y*d satisfies z^n = (ar + ai i) d^(n-1), a Gaussian integer.
    let dn1 = num_traits::pow(d.clone(), (n - 1) as usize);
    let beta: GInt = (&ar * &dn1, &ai * &dn1);
    let norm = &beta.0 * &beta.0 + &beta.1 * &beta.1;
    let m = norm.nth_root(n);
    if num_traits::pow(m.clone(), n as usize) != norm {
        return Vec::new();
    }
    let bits = beta.0.bits().max(beta.1.bits());
    let shift = bits.saturating_sub(60);
    let theta = big_to_f64_scaled(&beta.1, shift).atan2(big_to_f64_scaled(&beta.0, shift));
    let radius = m.sqrt();
    let Some(r) = radius.to_f64().filter(|r| r.is_finite()) else {
        return Vec::new();
    };
    let mut found: Option<GInt> = None;
    'outer: for k in 0..n {
        let t = (theta + 2.0 * std::f64::consts::PI * k as f64) / n as f64;
        let mut z: GInt = (f64_to_big((r * t.cos()).round()), f64_to_big((r * t.sin()).round()));
        for _ in 0..64 {
            let zn = gpow(&z, n);
            if zn == beta {
                found = Some(z);
                break 'outer;
            }
            // Newton step z - (z^n - beta) / (n z^(n-1)), rounded.
            let zn1 = gpow(&z, n - 1);
            let num = GaussRat::new(
                BigRational::from_integer(&zn.0 - &beta.0),
                BigRational::from_integer(&zn.1 - &beta.1),
            );
            let den = GaussRat::new(
                BigRational::from_integer(&zn1.0 * BigInt::from(n)),
                BigRational::from_integer(&zn1.1 * BigInt::from(n)),
            );
            let Some(di) = den.inv() else { break };
            let step = num.mul(&di);
            let next = (&z.0 - step.re.round().to_integer(), &z.1 - step.im.round().to_integer());
            if next == z {
                break;
            }
            z = next;
        }
    }
    let Some(z) = found else {
        return Vec::new();
    };
    let dq = BigRational::from_integer(d);
    let mut roots = Vec::new();
    let mut u = z;
    for _ in 0..4 {
        if gpow(&u, n) == beta {
            let r = GaussRat::new(
                BigRational::from_integer(u.0.clone()) / &dq,
                BigRational::from_integer(u.1.clone()) / &dq,
            );
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        u = (-u.1.clone(), u.0.clone());
    }
    roots
}

fn f64_to_big(x: f64) -> BigInt {
    num_traits::FromPrimitive::from_f64(x).unwrap_or_else(BigInt::zero)
}

fn choose_branch(a: &GaussRat, roots: Vec<GaussRat>, n: u32) -> GaussRat {
    if n == 2 {
        return roots
            .into_iter()
            .find(|r| r.re.is_positive() || (r.re.is_zero() && !r.im.is_negative()))
            .expect("square roots come in +- pairs");
    }
    let principal = a.to_complex().arg() / n as f64;
    let dist = |r: &GaussRat| {
        let d = (r.to_complex().arg() - principal).rem_euclid(2.0 * std::f64::consts::PI);
        d.min(2.0 * std::f64::consts::PI - d)
    };
    roots
        .into_iter()
        .min_by(|x, y| {
            let (dx, dy) = (dist(x), dist(y));
            if (dx - dy).abs() < 1e-9 {
                y.re.cmp(&x.re).then_with(|| y.im.cmp(&x.im))
            } else {
                dx.total_cmp(&dy)
            }
        })
        .unwrap()
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$checked(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// Binary operation selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic.
pub fn arith(a: &Scalar, b: &Scalar, op: Op) -> Result<Scalar, ScalarError> {
    match op {
        Op::Add => a.try_add(b),
        Op::Sub => a.try_sub(b),
        Op::Mul => a.try_mul(b),
        Op::Div => a.try_div(b),
    }
}

/// Square root as a free function.
pub fn sqrt(a: &Scalar) -> Result<Scalar, ExtensionRequired> {
    a.sqrt()
}

/// n-th root as a free function.
pub fn nth_root(a: &Scalar, n: u32) -> Result<Scalar, ScalarError> {
    if n == 0 {
        return Err(ScalarError::ZeroRootIndex);
    }
    Ok(a.nth_root(n)?)
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_float(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn fmt_parts(re: Option<String>, im: Option<(bool, String)>) -> String {
    // im = (negative, magnitude); magnitude "1" is written as a bare i.
    match (re, im) {
        (None, None) => "0".into(),
        (Some(r), None) => r,
        (None, Some((neg, m))) => {
            let m = if m == "1" { String::new() } else { m };
            format!("{}{}i", if neg { "-" } else { "" }, m)
        }
        (Some(r), Some((neg, m))) => {
            let m = if m == "1" { String::new() } else { m };
            format!("{r}{}{m}i", if neg { "-" } else { "+" })
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Qi(a) => {
                let re = (!a.re.is_zero()).then(|| fmt_rat(&a.re));
                let im = (!a.im.is_zero()).then(|| (a.im.is_negative(), fmt_rat(&a.im.abs())));
                write!(f, "{}", fmt_parts(re, im))
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
            Scalar::Approx { z, tol } => {
                let re = (z.re.abs() > *tol).then(|| fmt_float(z.re));
                let im = (z.im.abs() > *tol).then(|| (z.im < 0.0, fmt_float(z.im.abs())));
                write!(f, "{}", fmt_parts(re, im))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal {literal:?}: {reason}")]
pub struct ParseScalarError {
    pub literal: String,
    pub reason: String,
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }
}

enum Num {
    Rat(BigRational),
    Float(f64),
}

fn parse_number(c: &mut Cursor<'_>, allow_float: bool) -> Result<Option<Num>, String> {
    let start = c.pos;
    let Some(int) = c.digits().map(str::to_owned) else {
        return Ok(None);
    };
    if allow_float && matches!(c.peek(), Some(b'.') | Some(b'e') | Some(b'E')) {
        if c.peek() == Some(b'.') {
            c.pos += 1;
            c.digits();
        }
        if matches!(c.peek(), Some(b'e') | Some(b'E')) {
            c.pos += 1;
            c.sign();
            c.digits().ok_or("missing exponent digits")?;
        }
        let text = std::str::from_utf8(&c.s[start..c.pos]).unwrap();
        return text
            .parse::<f64>()
            .map(|x| Some(Num::Float(x)))
            .map_err(|e| e.to_string());
    }
    let n: BigInt = int.parse().unwrap();
    if c.peek() == Some(b'/') {
        c.pos += 1;
        let d: BigInt = c.digits().ok_or("missing denominator")?.parse().unwrap();
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(Some(Num::Rat(BigRational::new(n, d))));
    }
    Ok(Some(Num::Rat(BigRational::from_integer(n))))
}

fn parse_scalar(s: &str, field: FieldSpec) -> Result<Scalar, ParseScalarError> {
    let err = |reason: &str| ParseScalarError {
        literal: s.to_owned(),
        reason: reason.to_owned(),
    };
    if let FieldSpec::PrimeField(p) = field {
        let v: BigInt = s.parse().map_err(|_| err("expected an integer residue"))?;
        let r = v.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        return Ok(Scalar::Fp { value: r, p });
    }
    let approx = !field.is_exact();
    let mut c = Cursor {
        s: s.as_bytes(),
        pos: 0,
    };
    let mut re = Num::Rat(BigRational::zero());
    let mut im = Num::Rat(BigRational::zero());
    let neg1 = c.sign().unwrap_or(false);
    let first = parse_number(&mut c, approx).map_err(|e| err(&e))?;
    let apply = |neg: bool, x: Num| match x {
        Num::Rat(r) => Num::Rat(if neg { -r } else { r }),
        Num::Float(f) => Num::Float(if neg { -f } else { f }),
    };
    match (first, c.peek()) {
        (None, Some(b'i')) => {
            c.pos += 1;
            im = apply(neg1, Num::Rat(BigRational::one()));
        }
        (None, _) => return Err(err("expected a number or i")),
        (Some(x), Some(b'i')) => {
            c.pos += 1;
            im = apply(neg1, x);
        }
        (Some(x), None) => re = apply(neg1, x),
        (Some(x), Some(_)) => {
            re = apply(neg1, x);
            let neg2 = c.sign().ok_or_else(|| err("expected + or -"))?;
            let y = parse_number(&mut c, approx)
                .map_err(|e| err(&e))?
                .unwrap_or(Num::Rat(BigRational::one()));
            if c.peek() != Some(b'i') {
                return Err(err("expected i"));
            }
            c.pos += 1;
            im = apply(neg2, y);
        }
    }
    if c.pos != c.s.len() {
        return Err(err("trailing characters"));
    }
    match (re, im, field) {
        (Num::Rat(r), Num::Rat(i), _) => Scalar::from_gauss(field, r, i).map_err(|e| err(&e.to_string())),
        (r, i, FieldSpec::ApproxComplex(tol)) => {
            let f = |x: Num| match x {
                Num::Rat(r) => rat_to_f64(&r),
                Num::Float(f) => f,
            };
            Ok(Scalar::Approx {
                z: Complex64::new(f(r), f(i)),
                tol,
            })
        }
        _ => Err(err("decimal literal outside approximate mode")),
    }
}

/// Shorthand constructor used throughout tests and representatives:
/// parses a literal over Q(i), panicking on malformed input.
pub fn qi(s: &str) -> Scalar {
    Scalar::parse(s, FieldSpec::GaussianRational).unwrap_or_else(|e| panic!("{e}"))
}
