//! Arithmetic in the prime fields GF(2), GF(3), GF(5), GF(7).
//!
//! Everything downstream works with raw `u8` residues for speed and uses
//! [`FieldSpec`] as the carrier of the modulus; [`Element`] is a checked
//! wrapper for callers that want field membership enforced at the type level.

use std::fmt;

use thiserror::Error;

/// Field orders this crate supports. All are primes small enough that modular
/// arithmetic on `u8` never overflows an intermediate `u16`.
pub const SUPPORTED_ORDERS: [u8; 4] = [2, 3, 5, 7];

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum GaloisError {
    #[error("unsupported field order {0}: expected one of 2, 3, 5, 7")]
    UnsupportedOrder(u8),
    #[error("value {value} is not a residue modulo {q}")]
    ValueOutOfRange { value: u8, q: u8 },
    #[error("operands live in different fields: GF({0}) vs GF({1})")]
    FieldMismatch(u8, u8),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero has no multiplicative order")]
    ZeroOrder,
}

/// A prime field GF(q), q in {2, 3, 5, 7}.
///
/// `FieldSpec` is `Copy` and one byte wide, so it is passed by value
/// everywhere. The raw-residue methods (`add`, `mul`, ...) assume reduced
/// inputs and only check that in debug builds; use [`FieldSpec::element`] or
/// [`FieldSpec::check`] at trust boundaries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    q: u8,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl FieldSpec {
    pub fn new(q: u8) -> Result<Self, GaloisError> {
        if SUPPORTED_ORDERS.contains(&q) {
            Ok(FieldSpec { q })
        } else {
            Err(GaloisError::UnsupportedOrder(q))
        }
    }

    #[inline]
    pub fn q(self) -> u8 {
        self.q
    }

    /// Validates that `value` is a reduced residue and returns it unchanged.
    #[inline]
    pub fn check(self, value: u8) -> Result<u8, GaloisError> {
        if value < self.q {
            Ok(value)
        } else {
            Err(GaloisError::ValueOutOfRange { value, q: self.q })
        }
    }

    pub fn element(self, value: u8) -> Result<Element, GaloisError> {
        self.check(value)?;
        Ok(Element { value, field: self })
    }

    /// All residues 0..q.
    pub fn values(self) -> impl Iterator<Item = u8> {
        0..self.q
    }

    /// All nonzero residues 1..q.
    pub fn nonzero_values(self) -> impl Iterator<Item = u8> {
        1..self.q
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        debug_assert!(a < self.q && b < self.q);
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        debug_assert!(a < self.q);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        debug_assert!(a < self.q && b < self.q);
        (a as u16 * b as u16 % self.q as u16) as u8
    }

    /// Multiplicative inverse of a nonzero residue. Panics on zero; use
    /// [`Element::inv`] for a checked variant.
    #[inline]
    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero in {self}");
        // q - 2 multiplications at most; q <= 7 makes a table pointless.
        self.pow(a, self.q as u64 - 2)
    }

    pub fn pow(self, a: u8, mut e: u64) -> u8 {
        debug_assert!(a < self.q);
        let mut base = a;
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero residue: the least t >= 1 with
    /// a^t = 1. Always divides q - 1.
    pub fn element_order(self, a: u8) -> Result<u32, GaloisError> {
        if a == 0 {
            return Err(GaloisError::ZeroOrder);
        }
        debug_assert!(a < self.q);
        let mut acc = a;
        let mut t = 1;
        while acc != 1 {
            acc = self.mul(acc, a);
            t += 1;
        }
        Ok(t)
    }
}

/// A residue tagged with its field. Binary operations verify that both
/// operands agree on the field and report [`GaloisError::FieldMismatch`]
/// otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Element {
    value: u8,
    field: FieldSpec,
}

// Checked arithmetic returning Result on field mismatch; the std ops
// traits cannot express that, so the method names stay.
#[allow(clippy::should_implement_trait)]
impl Element {
    #[inline]
    pub fn value(self) -> u8 {
        self.value
    }

    #[inline]
    pub fn field(self) -> FieldSpec {
        self.field
    }

    fn same_field(self, other: Element) -> Result<FieldSpec, GaloisError> {
        if self.field == other.field {
            Ok(self.field)
        } else {
            Err(GaloisError::FieldMismatch(self.field.q, other.field.q))
        }
    }

    pub fn add(self, other: Element) -> Result<Element, GaloisError> {
        let f = self.same_field(other)?;
        Ok(Element { value: f.add(self.value, other.value), field: f })
    }

    pub fn sub(self, other: Element) -> Result<Element, GaloisError> {
        let f = self.same_field(other)?;
        Ok(Element { value: f.sub(self.value, other.value), field: f })
    }

    pub fn mul(self, other: Element) -> Result<Element, GaloisError> {
        let f = self.same_field(other)?;
        Ok(Element { value: f.mul(self.value, other.value), field: f })
    }

    pub fn neg(self) -> Element {
        Element { value: self.field.neg(self.value), field: self.field }
    }

    pub fn inv(self) -> Result<Element, GaloisError> {
        if self.value == 0 {
            return Err(GaloisError::ZeroInverse);
        }
        Ok(Element { value: self.field.inv(self.value), field: self.field })
    }

    pub fn order(self) -> Result<u32, GaloisError> {
        self.field.element_order(self.value)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
