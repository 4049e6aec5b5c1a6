//! Dense polynomials over GF(q) and the factorization / divisor-enumeration
//! machinery that produces long constacyclic generators.
//!
//! Coefficients are stored ascending: index `i` holds the coefficient of
//! `x^i`, trailing zeros are trimmed, and the zero polynomial is the empty
//! sequence. The same convention drives the text format: `"1331"` means
//! `1 + 3x + 3x^2 + x^3`.

mod divisors;
mod factor;

pub use divisors::{enumerate_divisors, DivisorEnumeration};
pub use factor::{factorize_xn_minus_a, FactoredModulus};

use std::fmt;

use thiserror::Error;

use crate::galois::{FieldSpec, GaloisError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division left a nonzero remainder where an exact quotient was required")]
    InexactDivision,
    #[error("gcd requires at least one nonzero input")]
    GcdOfZeros,
    #[error("coefficient digit {ch:?} is not a residue below {q}")]
    BadDigit { ch: char, q: u8 },
    #[error("modulus x^N - a requires N >= 1")]
    ZeroLength,
    #[error("shift constant a must be nonzero")]
    ZeroShift,
    #[error("degree window [{deg_min}, {deg_max}] does not fit inside [0, {n}]")]
    BadWindow { deg_min: usize, deg_max: usize, n: usize },
    #[error("enumeration cap must be at least 1")]
    ZeroCap,
}

/// Polynomial over a prime field, dense ascending coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<u8>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "poly({:?}, 0)", self.field)
        } else {
            write!(f, "poly({:?}, {})", self.field, format_poly(self))
        }
    }
}

impl Polynomial {
    fn trimmed(field: FieldSpec, mut coeffs: Vec<u8>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        Polynomial { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Polynomial { field, coeffs: vec![1] }
    }

    pub fn constant(field: FieldSpec, c: u8) -> Result<Self, PolyError> {
        field.check(c)?;
        Ok(Self::trimmed(field, vec![c]))
    }

    pub fn monomial(field: FieldSpec, c: u8, deg: usize) -> Result<Self, PolyError> {
        field.check(c)?;
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Ok(Self::trimmed(field, coeffs))
    }

    /// `x^n - a`. Accepts any residue `a`; the factorization entry point
    /// enforces `a != 0` separately.
    pub fn x_pow_minus_const(field: FieldSpec, n: usize, a: u8) -> Result<Self, PolyError> {
        if n == 0 {
            return Err(PolyError::ZeroLength);
        }
        field.check(a)?;
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = field.neg(a);
        coeffs[n] = 1;
        Ok(Polynomial { field, coeffs })
    }

    pub fn from_coeffs(field: FieldSpec, coeffs: Vec<u8>) -> Result<Self, PolyError> {
        for &c in &coeffs {
            field.check(c)?;
        }
        Ok(Self::trimmed(field, coeffs))
    }

    /// Construction for coefficients already known to be reduced.
    pub(crate) fn from_reduced(field: FieldSpec, coeffs: Vec<u8>) -> Self {
        Self::trimmed(field, coeffs)
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Coefficient of `x^i`, zero beyond the stored length.
    #[inline]
    pub fn coeff(&self, i: usize) -> u8 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<u8> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Coefficients padded with zeros to exactly `len` entries.
    /// Panics if the polynomial does not fit.
    pub fn coeff_vector(&self, len: usize) -> Vec<u8> {
        assert!(self.coeffs.len() <= len, "polynomial does not fit in {len} coefficients");
        let mut v = self.coeffs.clone();
        v.resize(len, 0);
        v
    }

    pub fn eval(&self, x: u8) -> u8 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn scale(&self, c: u8) -> Self {
        let f = self.field;
        if c == 0 {
            return Self::zero(f);
        }
        Self::trimmed(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc)),
        }
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.field, other.field,
            "polynomial operands must share a field"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(self.coeff(i), other.coeff(i)));
        }
        Self::trimmed(f, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.sub(self.coeff(i), other.coeff(i)));
        }
        Self::trimmed(f, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        // Accumulate in u32: with q <= 7 each product is < 49 and even the
        // longest paper instances stay far below u32::MAX.
        let mut acc = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u32;
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a * b as u32;
            }
        }
        let q = f.q() as u32;
        Self::trimmed(f, acc.into_iter().map(|v| (v % q) as u8).collect())
    }

    /// Multiply by `x^k`.
    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial { field: self.field, coeffs }
    }

    /// Euclidean division: `self = quot * div + rem` with deg(rem) < deg(div).
    pub fn divmod(&self, div: &Self) -> Result<(Self, Self), PolyError> {
        self.same_field(div);
        let f = self.field;
        let db = match div.degree() {
            None => return Err(PolyError::DivisionByZero),
            Some(d) => d,
        };
        let da = match self.degree() {
            None => return Ok((Self::zero(f), Self::zero(f))),
            Some(d) => d,
        };
        if da < db {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv(div.leading().unwrap());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u8; da - db + 1];
        for i in (0..=da - db).rev() {
            let c = f.mul(rem[i + db], lead_inv);
            if c != 0 {
                quot[i] = c;
                for (j, &dj) in div.coeffs.iter().enumerate() {
                    rem[i + j] = f.sub(rem[i + j], f.mul(c, dj));
                }
            }
        }
        debug_assert!(rem[db..].iter().all(|&c| c == 0));
        rem.truncate(db);
        Ok((Self::trimmed(f, quot), Self::trimmed(f, rem)))
    }

    pub fn rem(&self, div: &Self) -> Result<Self, PolyError> {
        Ok(self.divmod(div)?.1)
    }

    /// Division that must leave no remainder.
    pub fn div_exact(&self, div: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.divmod(div)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::InexactDivision)
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        match other.rem(self) {
            Ok(r) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic greatest common divisor. `gcd(f, 0) = monic(f)`;
    /// both inputs zero is an error.
    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_field(other);
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::GcdOfZeros);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor inside gcd loop");
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Remainder modulo `x^n - a`, computed by exponent folding
    /// (`x^(n t + r) = a^t x^r`) instead of long division.
    pub fn reduce_mod_xn_minus_a(&self, n: usize, a: u8) -> Self {
        assert!(n >= 1);
        let f = self.field;
        if self.coeffs.len() <= n {
            return self.clone();
        }
        let mut out = vec![0u8; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let scaled = f.mul(c, f.pow(a, (i / n) as u64));
            out[i % n] = f.add(out[i % n], scaled);
        }
        Self::trimmed(f, out)
    }

    /// Canonical ordering used for factor and divisor listings:
    /// by degree, then by the coefficient sequence from the constant term up.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl std::fmt::Display for Polynomial {
    /// Digit-string form, lowest degree first; the zero polynomial is "0".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&display_poly(self))
    }
}

/// Monic gcd of any number of polynomials (zero entries are skipped).
pub fn gcd_many<'a, I>(polys: I) -> Result<Polynomial, PolyError>
where
    I: IntoIterator<Item = &'a Polynomial>,
{
    let mut acc: Option<Polynomial> = None;
    for p in polys {
        acc = Some(match acc {
            None => {
                if p.is_zero() {
                    continue;
                }
                p.monic()
            }
            Some(g) => {
                if g.is_one() {
                    return Ok(g); // cannot shrink further
                }
                g.gcd(p)?
            }
        });
    }
    acc.ok_or(PolyError::GcdOfZeros)
}

/// Parses an optionally bracket-wrapped digit string, lowest degree first.
/// The empty string (or `[]`) is the zero polynomial.
pub fn parse_poly(field: FieldSpec, text: &str) -> Result<Polynomial, PolyError> {
    let mut s = text.trim();
    if let Some(stripped) = s.strip_prefix('[') {
        s = stripped.strip_suffix(']').unwrap_or(stripped);
    }
    let s = s.trim();
    let mut coeffs = Vec::with_capacity(s.len());
    for ch in s.chars() {
        let d = ch.to_digit(10).ok_or(PolyError::BadDigit { ch, q: field.q() })?;
        if d >= field.q() as u32 {
            return Err(PolyError::BadDigit { ch, q: field.q() });
        }
        coeffs.push(d as u8);
    }
    Ok(Polynomial::trimmed(field, coeffs))
}

/// Inverse of [`parse_poly`]: digits lowest degree first, no brackets,
/// trailing zeros trimmed. The zero polynomial formats as the empty string.
pub fn format_poly(p: &Polynomial) -> String {
    p.coeffs.iter().map(|&c| char::from(b'0' + c)).collect()
}

/// Like [`format_poly`] but renders the zero polynomial as `"0"`,
/// for human-facing output.
pub fn display_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        "0".to_string()
    } else {
        format_poly(p)
    }
}
