//! Factorization of `x^N - a` over GF(q).
//!
//! The characteristic-p identity `x^N - a = (x^{N'} - a)^{q^v}` (with
//! `N = N' q^v`, `gcd(N', q) = 1`) reduces the problem to the squarefree
//! binomial `x^{N'} - a`, which is handled by distinct-degree factorization
//! followed by Cantor–Zassenhaus equal-degree splitting.
//!
//! The DDF stage never performs a generic modular exponentiation: because the
//! modulus is a divisor of `x^{N'} - a`, the Frobenius powers stay binomial,
//!
//! ```text
//! x^(q^i) = a^(T div N') * x^(T mod N')   (mod x^{N'} - a),  T = q^i,
//! ```
//!
//! and the pair `(T div N' mod r, T mod N')` (r = order of `a`) is tracked
//! with one u64 multiplication per step. Only the gcds touch full-size
//! polynomials.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::galois::FieldSpec;

use super::{Polynomial, PolyError};

/// Complete factorization of `x^N - a`.
#[derive(Clone, Debug)]
pub struct FactoredModulus {
    pub field: FieldSpec,
    pub n: usize,
    pub a: u8,
    /// Squarefree length `N'` with `N = N' * q^v` and `gcd(N', q) = 1`.
    pub n_prime: usize,
    /// The exponent `v` above.
    pub char_exp: u32,
    /// Distinct monic irreducible factors with their multiplicity in
    /// `x^N - a`. Every multiplicity equals `q^v`. Sorted by degree, then by
    /// coefficient sequence.
    pub factors: Vec<(Polynomial, usize)>,
}

impl FactoredModulus {
    /// `x^N - a` itself.
    pub fn modulus(&self) -> Polynomial {
        Polynomial::x_pow_minus_const(self.field, self.n, self.a).expect("validated on construction")
    }

    /// `x^{N'} - a`, the squarefree part.
    pub fn squarefree_part(&self) -> Polynomial {
        Polynomial::x_pow_minus_const(self.field, self.n_prime, self.a)
            .expect("validated on construction")
    }

    pub fn multiplicity(&self) -> usize {
        (self.field.q() as usize).pow(self.char_exp)
    }

    /// Multiplies every factor back out to its multiplicity. Intended for
    /// verification; cost grows with N^2.
    pub fn reconstruct(&self) -> Polynomial {
        let mut acc = Polynomial::one(self.field);
        for (f, mult) in &self.factors {
            for _ in 0..*mult {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// Factors `x^N - a` over GF(q), `a` nonzero. Deterministic: the internal
/// equal-degree splitting is seeded from `(q, N, a)`.
pub fn factorize_xn_minus_a(field: FieldSpec, n: usize, a: u8) -> Result<FactoredModulus, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroLength);
    }
    field.check(a)?;
    if a == 0 {
        return Err(PolyError::ZeroShift);
    }

    let q = field.q() as usize;
    let mut n_prime = n;
    let mut char_exp = 0u32;
    while n_prime.is_multiple_of(q) {
        n_prime /= q;
        char_exp += 1;
    }
    let multiplicity = q.pow(char_exp);

    let mut rng = ChaCha12Rng::seed_from_u64(mix_seed(field.q(), n, a));
    let mut irreducibles = distinct_degree_stage(field, n_prime, a, &mut rng)?;
    irreducibles.sort_by(|x, y| x.canonical_cmp(y));

    Ok(FactoredModulus {
        field,
        n,
        a,
        n_prime,
        char_exp,
        factors: irreducibles.into_iter().map(|f| (f, multiplicity)).collect(),
    })
}

/// Stable seed mixer (splitmix64 finalizer); deliberately not the std hasher,
/// whose output may change between toolchains.
fn mix_seed(q: u8, n: usize, a: u8) -> u64 {
    let mut z = (q as u64) << 48 ^ (n as u64) << 8 ^ a as u64;
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn distinct_degree_stage(
    field: FieldSpec,
    n_prime: usize,
    a: u8,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<Polynomial>, PolyError> {
    let q = field.q() as u64;
    let r = field.element_order(a).expect("a nonzero") as u64;
    let rho_mod = n_prime as u64 * r;

    let x = Polynomial::monomial(field, 1, 1)?;
    let mut f_cur = Polynomial::x_pow_minus_const(field, n_prime, a)?;
    let mut out = Vec::new();
    let mut rho = 1u64; // q^i mod (N' * r)
    let mut i = 0usize;

    while let Some(deg) = f_cur.degree() {
        if deg == 0 {
            break;
        }
        i += 1;
        if deg < 2 * i {
            // whatever remains has no factor of degree < i, so it is irreducible
            out.push(f_cur.monic());
            break;
        }
        rho = rho * q % rho_mod;
        let v_exp = (rho % n_prime as u64) as usize;
        let u_exp = rho / n_prime as u64; // already < r
        // x^(q^i) - x mod f_cur, still a two-term polynomial before reduction
        let frob = Polynomial::monomial(field, field.pow(a, u_exp), v_exp)?;
        let probe = frob.sub(&x).rem(&f_cur)?;
        let g = f_cur.gcd(&probe)?;
        if g.degree().is_some_and(|d| d > 0) {
            split_equal_degree(&g, i, rng, &mut out)?;
            f_cur = f_cur.div_exact(&g)?;
        }
    }
    Ok(out)
}

/// Cantor–Zassenhaus: splits a product of distinct irreducibles of the same
/// degree `d` into its factors.
fn split_equal_degree(
    g: &Polynomial,
    d: usize,
    rng: &mut ChaCha12Rng,
    out: &mut Vec<Polynomial>,
) -> Result<(), PolyError> {
    let deg_g = g.degree().expect("nonzero product");
    debug_assert_eq!(deg_g % d, 0);
    if deg_g == d {
        out.push(g.monic());
        return Ok(());
    }
    let field = g.field();
    let q = field.q();

    loop {
        let h = random_poly_below(field, deg_g, rng);
        if h.is_zero() {
            continue;
        }
        // A shared factor of h already splits g.
        let shared = g.gcd(&h)?;
        if splits(&shared, deg_g) {
            return recurse(g, &shared, d, rng, out);
        }
        let w = if q == 2 {
            trace_map(&h, d, g)?
        } else {
            let e = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1;
            pow_mod(&h, &e, g)?.sub(&Polynomial::one(field))
        };
        if w.is_zero() {
            continue;
        }
        let s = g.gcd(&w)?;
        if splits(&s, deg_g) {
            return recurse(g, &s, d, rng, out);
        }
    }
}

fn splits(s: &Polynomial, deg_g: usize) -> bool {
    s.degree().is_some_and(|ds| ds > 0 && ds < deg_g)
}

fn recurse(
    g: &Polynomial,
    s: &Polynomial,
    d: usize,
    rng: &mut ChaCha12Rng,
    out: &mut Vec<Polynomial>,
) -> Result<(), PolyError> {
    split_equal_degree(s, d, rng, out)?;
    split_equal_degree(&g.div_exact(s)?, d, rng, out)
}

fn random_poly_below(field: FieldSpec, deg_bound: usize, rng: &mut ChaCha12Rng) -> Polynomial {
    let q = field.q();
    let coeffs: Vec<u8> = (0..deg_bound).map(|_| rng.gen_range(0..q)).collect();
    Polynomial::from_reduced(field, coeffs)
}

/// `base^e mod modulus` by square-and-multiply over the bits of `e`.
pub(crate) fn pow_mod(
    base: &Polynomial,
    e: &BigUint,
    modulus: &Polynomial,
) -> Result<Polynomial, PolyError> {
    let mut acc = Polynomial::one(base.field());
    let b = base.rem(modulus)?;
    for j in (0..e.bits()).rev() {
        acc = acc.mul(&acc).rem(modulus)?;
        if e.bit(j) {
            acc = acc.mul(&b).rem(modulus)?;
        }
    }
    Ok(acc)
}

/// GF(2) replacement for the odd-q power map: h + h^2 + h^4 + ... + h^(2^(d-1)).
fn trace_map(h: &Polynomial, d: usize, modulus: &Polynomial) -> Result<Polynomial, PolyError> {
    let mut acc = h.rem(modulus)?;
    let mut cur = acc.clone();
    for _ in 1..d {
        cur = cur.mul(&cur).rem(modulus)?;
        acc = acc.add(&cur);
    }
    Ok(acc)
}
