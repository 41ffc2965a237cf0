//! Exact arithmetic in a number field `Q[z]/(m(z))`.
//!
//! Every coefficient in the workbench lives in one of these fields. The default
//! field is the 12th cyclotomic field, which contains `i = z^3`, `sqrt(3) = 2z - z^3`
//! and the primitive cube root of unity `z^2 - 1`. Degree one (`m = z`) gives plain
//! rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is a zero divisor; the modulus is reducible")]
    ZeroDivisor,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("cannot parse scalar `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

/// Description of a number field: a monic modulus and an optional conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    /// Coefficients of the monic modulus, ascending degree; length `deg + 1`.
    pub minimal_polynomial: Vec<BigRational>,
    /// Image of the generator under conjugation, as a residue polynomial.
    pub conjugation_image: Option<Vec<BigRational>>,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec {
            minimal_polynomial: vec![BigRational::zero(), BigRational::one()],
            conjugation_image: None,
        }
    }

    /// `Q(zeta_12) = Q[z]/(z^4 - z^2 + 1)` with conjugation `z -> z - z^3 = z^{-1}`.
    pub fn cyclotomic12() -> Self {
        let r = |n: i64| BigRational::from_integer(n.into());
        FieldSpec {
            minimal_polynomial: vec![r(1), r(0), r(-1), r(0), r(1)],
            conjugation_image: Some(vec![r(0), r(1), r(0), r(-1)]),
        }
    }

    pub fn degree(&self) -> usize {
        self.minimal_polynomial.len().saturating_sub(1)
    }
}

/// The field used when nothing else is configured.
pub fn field_default() -> FieldSpec {
    FieldSpec::cyclotomic12()
}

/// A validated field with precomputed reduction tables.
#[derive(Debug)]
pub struct Field {
    spec: FieldSpec,
    degree: usize,
    /// `z^(degree + k) mod m` for `k = 0..degree-1`.
    high_powers: Vec<Vec<BigRational>>,
    /// `conj(z^k)` for `k = 0..degree-1`.
    conj_powers: Vec<Vec<BigRational>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

pub type FieldRef = Arc<Field>;

impl Field {
    pub fn new(spec: FieldSpec) -> Result<FieldRef, ScalarError> {
        let degree = spec.degree();
        if degree == 0 {
            return Err(ScalarError::InvalidField("modulus must have degree >= 1".into()));
        }
        if !spec.minimal_polynomial[degree].is_one() {
            return Err(ScalarError::InvalidField("modulus must be monic".into()));
        }
        if degree >= 2 {
            if let Some(root) = rational_root(&spec.minimal_polynomial) {
                return Err(ScalarError::InvalidField(format!(
                    "modulus has the rational root {root}"
                )));
            }
        }

        // reduction table: z^degree = -(m_0 + ... + m_{deg-1} z^{deg-1})
        let mut high_powers = Vec::with_capacity(degree);
        let mut cur: Vec<BigRational> = spec.minimal_polynomial[..degree]
            .iter()
            .map(|c| -c.clone())
            .collect();
        for _ in 0..degree {
            high_powers.push(cur.clone());
            // multiply by z
            let top = cur[degree - 1].clone();
            let mut next = vec![BigRational::zero(); degree];
            for k in (1..degree).rev() {
                next[k] = cur[k - 1].clone();
            }
            if !top.is_zero() {
                for k in 0..degree {
                    next[k] += &top * &high_powers[0][k];
                }
            }
            cur = next;
        }

        let mut field = Field {
            spec: spec.clone(),
            degree,
            high_powers,
            conj_powers: Vec::new(),
        };

        let image = match &spec.conjugation_image {
            Some(img) => {
                if img.len() > degree {
                    return Err(ScalarError::InvalidField(
                        "conjugation image must be a reduced residue".into(),
                    ));
                }
                let mut v = img.clone();
                trim(&mut v);
                v
            }
            None => {
                let mut v = vec![BigRational::zero(), BigRational::one()];
                if degree == 1 {
                    // z reduces to -m_0
                    v = vec![-spec.minimal_polynomial[0].clone()];
                }
                trim(&mut v);
                v
            }
        };
        // conj(z^k) = image^k
        let mut conj_powers = Vec::with_capacity(degree);
        let mut p = vec![BigRational::one()];
        for _ in 0..degree {
            conj_powers.push(p.clone());
            p = field.mul_poly(&p, &image);
        }
        field.conj_powers = conj_powers;

        let field = Arc::new(field);
        // conj must be an involution that fixes m
        let z = Scalar::generator(&field);
        if z.conj().conj() != z {
            return Err(ScalarError::InvalidField(
                "conjugation applied twice is not the identity".into(),
            ));
        }
        let mut m_at_image = Scalar::zero(&field);
        let mut power = Scalar::one(&field);
        let zc = z.conj();
        for c in &spec.minimal_polynomial {
            m_at_image += &power.scale(c);
            power = &power * &zc;
        }
        if !m_at_image.is_zero() {
            return Err(ScalarError::InvalidField(
                "conjugation image is not a root of the modulus".into(),
            ));
        }
        Ok(field)
    }

    pub fn default_field() -> FieldRef {
        Field::new(field_default()).expect("built-in field is valid")
    }

    pub fn rationals() -> FieldRef {
        Field::new(FieldSpec::rationals()).expect("built-in field is valid")
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn mul_poly(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        self.reduce(prod)
    }

    fn reduce(&self, mut p: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree;
        if p.len() > 2 * d - 1 {
            let (_, mut r) = poly_divmod(&p, &self.spec.minimal_polynomial);
            trim(&mut r);
            return r;
        }
        if p.len() > d {
            let mut out: Vec<BigRational> = p[..d].to_vec();
            for (k, c) in p.drain(d..).enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j, h) in self.high_powers[k].iter().enumerate() {
                    if !h.is_zero() {
                        out[j] += &c * h;
                    }
                }
            }
            p = out;
        }
        trim(&mut p);
        p
    }
}

/// Looks for a rational root of an integer-scaled polynomial via the rational root test.
fn rational_root(poly: &[BigRational]) -> Option<BigRational> {
    use num_integer::Integer;
    // clear denominators
    let lcm = poly
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = poly.iter().map(|c| (c * &lcm).to_integer()).collect();
    let first_nonzero = ints.iter().position(|c| !c.is_zero())?;
    if first_nonzero > 0 {
        return Some(BigRational::zero());
    }
    let lead = ints.last()?.abs();
    let constant = ints[0].abs();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut k = BigInt::one();
        while &k * &k <= *n {
            if (n % &k).is_zero() {
                out.push(k.clone());
                out.push(n / &k);
            }
            k += 1;
        }
        out
    };
    for p in divisors(&constant) {
        for q in divisors(&lead) {
            for sign in [1, -1] {
                let cand = BigRational::new(&p * sign, q.clone());
                let mut acc = BigRational::zero();
                for c in poly.iter().rev() {
                    acc = acc * &cand + c;
                }
                if acc.is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// An element of a number field, stored as a reduced residue polynomial.
#[derive(Clone)]
pub struct Scalar {
    field: FieldRef,
    /// Ascending coefficients with trailing zeros trimmed; empty means zero.
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn zero(field: &FieldRef) -> Self {
        Scalar { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_i64(field: &FieldRef, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(field: &FieldRef, num: i64, den: i64) -> Self {
        Self::from_rational(field, BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(field: &FieldRef, r: BigRational) -> Self {
        let mut coeffs = vec![r];
        trim(&mut coeffs);
        Scalar { field: field.clone(), coeffs }
    }

    /// Builds `sum c_k z^k`, reducing modulo the field modulus.
    pub fn from_poly(field: &FieldRef, coeffs: Vec<BigRational>) -> Self {
        Scalar { field: field.clone(), coeffs: field.reduce(coeffs) }
    }

    /// The field generator `z`.
    pub fn generator(field: &FieldRef) -> Self {
        Self::from_poly(field, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// Residue coefficients, ascending, trimmed.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Returns the value as a rational if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Scalar::zero(&self.field);
        }
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the configured conjugation automorphism.
    pub fn conj(&self) -> Self {
        let d = self.field.degree;
        let mut out = vec![BigRational::zero(); d];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, p) in self.field.conj_powers[k].iter().enumerate() {
                out[j] += c * p;
            }
        }
        trim(&mut out);
        Scalar { field: self.field.clone(), coeffs: out }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on residues.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(Scalar::from_rational(&self.field, self.coeffs[0].recip()));
        }
        // invariant: s * a == r0 (mod m), t * a == r1 (mod m)
        let mut r0 = self.field.spec.minimal_polynomial.clone();
        let mut r1 = self.coeffs.clone();
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is the gcd; it must be a nonzero constant
        if r0.len() != 1 {
            return Err(ScalarError::ZeroDivisor);
        }
        let c = r0[0].recip();
        let inv: Vec<BigRational> = s0.iter().map(|x| x * &c).collect();
        Ok(Scalar::from_poly(&self.field, inv))
    }

    pub fn div(&self, other: &Scalar) -> Result<Self, ScalarError> {
        Ok(self * &other.inv()?)
    }

    fn check_field(&self, other: &Scalar) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.spec == other.field.spec,
            "scalars from different fields"
        );
    }

    /// Parses the literal grammar: a sum of `rational [z[^k]]` terms, with optional
    /// parentheses around a rational coefficient, e.g. `2z - z^3` or `(3/2)z^2`.
    pub fn parse(field: &FieldRef, text: &str) -> Result<Self, ScalarError> {
        parse_poly(field, text)
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let coef = rem.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &coef * y;
        }
        quot[shift] = coef;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.check_field(other);
        self.coeffs == other.coeffs
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

/// Canonical ascending rendering, e.g. `1/2 + 2z - (3/2)z^3`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let zpart = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{zpart}")?;
            } else if mag.is_integer() {
                write!(f, "{mag}{zpart}")?;
            } else {
                write!(f, "({mag}){zpart}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.check_field(rhs);
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigRational::zero());
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[i] += c;
        }
        trim(&mut self.coeffs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.check_field(rhs);
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigRational::zero());
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[i] -= c;
        }
        trim(&mut self.coeffs);
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero(&self.field);
        }
        if self.coeffs.len() == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.coeffs.len() == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        Scalar {
            field: self.field.clone(),
            coeffs: self.field.mul_poly(&self.coeffs, &rhs.coeffs),
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Parses an unsigned rational `digits[/digits]`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let (neg, num) = match num.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, num),
    };
    if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    let r = BigRational::new(n, d);
    Some(if neg { -r } else { r })
}

fn parse_poly(field: &FieldRef, text: &str) -> Result<Scalar, ScalarError> {
    Ok(Scalar::from_poly(field, parse_polynomial(text)?))
}

/// Parses a polynomial in `z` with rational coefficients, lowest degree first, without
/// reducing it modulo any field.
pub fn parse_polynomial(text: &str) -> Result<Vec<BigRational>, ScalarError> {
    let err = |reason: &str| ScalarError::Parse { text: text.to_string(), reason: reason.to_string() };
    let raw: Vec<char> = text.chars().collect();
    for w in raw.windows(3) {
        if w[1].is_whitespace() && (w[0].is_ascii_alphanumeric() || w[0] == '/') && (w[2].is_ascii_digit() || w[2] == '/') {
            return Err(err("whitespace inside a number"));
        }
    }
    let chars: Vec<char> = raw.into_iter().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty literal"));
    }
    let mut pos = 0;
    let mut acc: Vec<BigRational> = Vec::new();
    let mut first = true;
    while pos < chars.len() {
        let mut negative = false;
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                negative = true;
                pos += 1
            }
            _ if first => {}
            _ => return Err(err("expected `+` or `-` between terms")),
        }
        first = false;
        // coefficient
        let mut coef: Option<BigRational> = None;
        if pos < chars.len() && chars[pos] == '(' {
            let close = chars[pos..]
                .iter()
                .position(|&c| c == ')')
                .ok_or_else(|| err("unbalanced parenthesis"))?;
            let inner: String = chars[pos + 1..pos + close].iter().collect();
            coef = Some(parse_rational(&inner).ok_or_else(|| err("bad rational in parentheses"))?);
            pos += close + 1;
        } else {
            let start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                pos += 1;
            }
            if pos > start {
                let s: String = chars[start..pos].iter().collect();
                coef = Some(parse_rational(&s).ok_or_else(|| err("bad rational"))?);
            }
        }
        if pos < chars.len() && chars[pos] == '*' {
            pos += 1;
        }
        let mut power = 0usize;
        if pos < chars.len() && chars[pos] == 'z' {
            pos += 1;
            power = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let s: String = chars[start..pos].iter().collect();
                power = s.parse().map_err(|_| err("bad exponent"))?;
            }
        } else if coef.is_none() {
            return Err(err("expected a rational or `z`"));
        }
        let mut c = coef.unwrap_or_else(BigRational::one);
        if negative {
            c = -c;
        }
        if acc.len() <= power {
            acc.resize(power + 1, BigRational::zero());
        }
        acc[power] += c;
    }
    Ok(acc)
}
