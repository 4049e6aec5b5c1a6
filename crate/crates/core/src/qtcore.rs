//! Quasi-twisted code construction.
//!
//! A length-`m` vector over GF(q) is identified with a polynomial in
//! `GF(q)[x]/(x^m - a)`; multiplying by `x` there is exactly the constacyclic
//! shift with constant `a`. A twistulant block is the m×m matrix whose rows
//! are the successive shifts of a defining polynomial, and an index-`t`
//! quasi-twisted (QT) code is generated by joining `t` such blocks
//! side by side.
//!
//! Two routes produce the blocks:
//!
//! * **split**: de-interleave one long generator `G` with `deg G < N = m·p`
//!   into `p` defining polynomials (coefficient `j` of `g_i` is coefficient
//!   `i + j·p` of `G`), then read the dimension off the standard generator
//!   `D = gcd(x^m - a, g_1, …, g_p)` as `k = m - deg D`;
//! * **asr**: pick `g | x^m - a` and multipliers `f_i` coprime to
//!   `(x^m - a)/g`, and generate with blocks `g·f_i`; the resulting code has
//!   dimension `m - deg g` and minimum distance at least `ℓ·d(C_g)` where
//!   `C_g` is the constacyclic code generated by `g`.
//!
//! Blocks are arranged contiguously (block `i` occupies columns
//! `[i·m, (i+1)·m)`), which differs from an interleaved column order by a
//! fixed permutation and therefore preserves every parameter; closure checks
//! use the same convention.

use thiserror::Error;

use crate::galois::{FieldSpec, GaloisError};
use crate::lincode::{
    in_row_space, min_distance_auto, rref, EngineBudget, GenMatrix, LinCodeError,
};
use crate::polyring::{gcd_many, PolyError, Polynomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QtError {
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    LinCode(#[from] LinCodeError),
    #[error("shift constant must be nonzero")]
    ZeroShiftConstant,
    #[error("block length m must be at least 1")]
    ZeroBlockLength,
    #[error("shift by {shift} is outside 1..={len}")]
    ShiftOutOfRange { shift: usize, len: usize },
    #[error("block length {m} does not divide the long length {n_long}")]
    BadEnsemble { n_long: usize, m: usize },
    #[error("degree {degree} is not below the block length {m}")]
    DegreeTooLarge { degree: usize, m: usize },
    #[error("long generator must be nonzero with degree below {n_long}")]
    BadLongGenerator { n_long: usize },
    #[error("no defining polynomials selected")]
    EmptySelection,
    #[error("all defining polynomials are zero")]
    AllZeroDefs,
    #[error("matrix width {cols} is not a multiple of the block length {m}")]
    BlockMismatch { cols: usize, m: usize },
    #[error("base polynomial does not divide x^{m} - {a}")]
    NotADivisor { m: usize, a: u8 },
    #[error("multiplier {index} shares a factor with the check polynomial")]
    NotCoprime { index: usize },
    #[error("base distance was not certified exact within the budget")]
    InexactBaseDistance,
}

/// The shape of one split: a long length `N = m·p` cut into `p` blocks of
/// length `m`, with a fixed nonzero shift constant `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnsembleSpec {
    field: FieldSpec,
    a: u8,
    n_long: usize,
    m: usize,
    p: usize,
}

impl EnsembleSpec {
    pub fn new(field: FieldSpec, a: u8, n_long: usize, m: usize) -> Result<Self, QtError> {
        field.check(a)?;
        if a == 0 {
            return Err(QtError::ZeroShiftConstant);
        }
        if m == 0 {
            return Err(QtError::ZeroBlockLength);
        }
        if n_long == 0 || !n_long.is_multiple_of(m) {
            return Err(QtError::BadEnsemble { n_long, m });
        }
        Ok(EnsembleSpec { field, a, n_long, m, p: n_long / m })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn a(&self) -> u8 {
        self.a
    }
    pub fn n_long(&self) -> usize {
        self.n_long
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn p(&self) -> usize {
        self.p
    }
}

/// Constacyclic shift by `l` positions: the last `l` coordinates wrap to the
/// front scaled by `a`.
pub fn consta_shift(field: FieldSpec, v: &[u8], l: usize, a: u8) -> Result<Vec<u8>, QtError> {
    field.check(a)?;
    if a == 0 {
        return Err(QtError::ZeroShiftConstant);
    }
    let n = v.len();
    if l == 0 || l > n {
        return Err(QtError::ShiftOutOfRange { shift: l, len: n });
    }
    for &x in v {
        field.check(x)?;
    }
    let mut out = Vec::with_capacity(n);
    out.extend(v[n - l..].iter().map(|&x| field.mul(a, x)));
    out.extend_from_slice(&v[..n - l]);
    Ok(out)
}

/// One block of a QT generator: the m×m matrix whose row `i+1` is the
/// constacyclic shift of row `i`, determined by its defining polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistulantBlock {
    g: Polynomial,
    m: usize,
    a: u8,
    rank: usize,
}

impl TwistulantBlock {
    pub fn g(&self) -> &Polynomial {
        &self.g
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn a(&self) -> u8 {
        self.a
    }
    /// Row-reduction rank of the materialized matrix, cached at build time.
    /// Always equals `m - deg(gcd(g, x^m - a))`, and 0 exactly when `g = 0`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn materialize(&self) -> GenMatrix {
        GenMatrix::new(self.g.field(), block_rows(&self.g, self.m, self.a))
            .expect("block rows are square and reduced")
    }
}

fn block_rows(g: &Polynomial, m: usize, a: u8) -> Vec<Vec<u8>> {
    let field = g.field();
    let mut rows = Vec::with_capacity(m);
    let mut row = g.coeff_vector(m);
    for _ in 0..m - 1 {
        let next = consta_shift(field, &row, 1, a).expect("validated shift");
        rows.push(row);
        row = next;
    }
    rows.push(row);
    rows
}

/// Builds a twistulant block. The defining polynomial must already be
/// reduced: its degree has to be below `m`.
pub fn twistulant(g: &Polynomial, m: usize, a: u8) -> Result<TwistulantBlock, QtError> {
    g.field().check(a)?;
    if a == 0 {
        return Err(QtError::ZeroShiftConstant);
    }
    if m == 0 {
        return Err(QtError::ZeroBlockLength);
    }
    if let Some(degree) = g.degree() {
        if degree >= m {
            return Err(QtError::DegreeTooLarge { degree, m });
        }
    }
    let matrix = GenMatrix::new(g.field(), block_rows(g, m, a))?;
    let rank = rref(&matrix).rank;
    Ok(TwistulantBlock { g: g.clone(), m, a, rank })
}

/// Block rank straight from the algebra, without materializing the matrix:
/// `m - deg(gcd(g mod (x^m - a), x^m - a))`, with rank 0 for `g ≡ 0`.
pub fn rank_of_block(g: &Polynomial, m: usize, a: u8) -> Result<usize, QtError> {
    let field = g.field();
    field.check(a)?;
    if a == 0 {
        return Err(QtError::ZeroShiftConstant);
    }
    if m == 0 {
        return Err(QtError::ZeroBlockLength);
    }
    let modulus = Polynomial::x_pow_minus_const(field, m, a)?;
    let reduced = g.reduce_mod_xn_minus_a(m, a);
    if reduced.is_zero() {
        return Ok(0);
    }
    let d = reduced.gcd(&modulus)?;
    Ok(m - d.degree().expect("gcd of nonzero inputs is nonzero"))
}

/// A long generator split into defining polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    pub spec: EnsembleSpec,
    pub long_gen: Polynomial,
    /// `defs[i]` collects the long coefficients `i, i+p, i+2p, …`.
    pub defs: Vec<Polynomial>,
    /// Standard generator `D = gcd(x^m - a, g_1, …, g_p)`.
    pub standard: Polynomial,
    /// Dimension of every same-rank QT code built from this split: `m - deg D`.
    pub k: usize,
}

/// De-interleaves a long generator at stride `p` into `p` defining
/// polynomials of degree below `m`.
pub fn split_defining_polys(long_gen: &Polynomial, spec: &EnsembleSpec) -> Result<SplitResult, QtError> {
    let field = spec.field;
    if long_gen.is_zero() || long_gen.degree().is_none_or(|d| d >= spec.n_long) {
        return Err(QtError::BadLongGenerator { n_long: spec.n_long });
    }
    let coeffs = long_gen.coeff_vector(spec.n_long);
    let mut defs = Vec::with_capacity(spec.p);
    for i in 0..spec.p {
        let block: Vec<u8> = (0..spec.m).map(|j| coeffs[i + j * spec.p]).collect();
        defs.push(Polynomial::from_coeffs(field, block)?);
    }
    let (standard, k) = standard_generator(&defs, spec.m, spec.a)?;
    Ok(SplitResult { spec: *spec, long_gen: long_gen.clone(), defs, standard, k })
}

/// Inverse of `split_defining_polys`: re-interleaves defining polynomials
/// into the long generator.
pub fn interleave_defs(defs: &[Polynomial], spec: &EnsembleSpec) -> Result<Polynomial, QtError> {
    if defs.len() != spec.p {
        return Err(QtError::BadEnsemble { n_long: spec.n_long, m: spec.m });
    }
    let mut coeffs = vec![0u8; spec.n_long];
    for (i, g) in defs.iter().enumerate() {
        if let Some(degree) = g.degree() {
            if degree >= spec.m {
                return Err(QtError::DegreeTooLarge { degree, m: spec.m });
            }
        }
        for j in 0..spec.m {
            coeffs[i + j * spec.p] = g.coeff(j);
        }
    }
    Ok(Polynomial::from_coeffs(spec.field, coeffs)?)
}

/// Monic `D = gcd(x^m - a, defs…)` and the dimension `k = m - deg D`.
pub fn standard_generator(
    defs: &[Polynomial],
    m: usize,
    a: u8,
) -> Result<(Polynomial, usize), QtError> {
    if defs.is_empty() {
        return Err(QtError::EmptySelection);
    }
    let field = defs[0].field();
    field.check(a)?;
    if a == 0 {
        return Err(QtError::ZeroShiftConstant);
    }
    if m == 0 {
        return Err(QtError::ZeroBlockLength);
    }
    if defs.iter().all(|g| g.is_zero()) {
        return Err(QtError::AllZeroDefs);
    }
    let modulus = Polynomial::x_pow_minus_const(field, m, a)?;
    let all = std::iter::once(&modulus).chain(defs.iter());
    let d = gcd_many(all)?;
    let k = m - d.degree().expect("gcd with the modulus is nonzero");
    Ok((d, k))
}

/// Horizontally joins the twistulant blocks of the selected defining
/// polynomials (reduced mod `x^m - a` first) and row-reduces the `m` emitted
/// rows down to a basis. The result generates a QT code of length
/// `t·m` and dimension `m - deg(gcd(x^m - a, selection))`.
pub fn join_blocks(defs: &[Polynomial], m: usize, a: u8) -> Result<GenMatrix, QtError> {
    if defs.is_empty() {
        return Err(QtError::EmptySelection);
    }
    let field = defs[0].field();
    field.check(a)?;
    if a == 0 {
        return Err(QtError::ZeroShiftConstant);
    }
    if m == 0 {
        return Err(QtError::ZeroBlockLength);
    }
    let blocks: Vec<Vec<Vec<u8>>> = defs
        .iter()
        .map(|g| block_rows(&g.reduce_mod_xn_minus_a(m, a), m, a))
        .collect();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m * defs.len());
        for b in &blocks {
            row.extend_from_slice(&b[i]);
        }
        rows.push(row);
    }
    let joined = GenMatrix::new(field, rows)?;
    let reduced = rref(&joined);
    if reduced.rank == 0 {
        return Err(QtError::AllZeroDefs);
    }
    let basis: Vec<Vec<u8>> =
        (0..reduced.rank).map(|i| reduced.matrix.row(i).to_vec()).collect();
    Ok(GenMatrix::new(field, basis)?)
}

/// Whether the row space of `matrix` is closed under the simultaneous
/// constacyclic shift of each length-`m` block of coordinates.
pub fn is_qt_closed(matrix: &GenMatrix, m: usize, a: u8) -> Result<bool, QtError> {
    let field = matrix.field();
    field.check(a)?;
    if a == 0 {
        return Err(QtError::ZeroShiftConstant);
    }
    if m == 0 {
        return Err(QtError::ZeroBlockLength);
    }
    let n = matrix.cols();
    if !n.is_multiple_of(m) {
        return Err(QtError::BlockMismatch { cols: n, m });
    }
    let reduced = rref(matrix);
    for row in matrix.iter_rows() {
        let mut shifted = Vec::with_capacity(n);
        for block in row.chunks(m) {
            shifted.extend(consta_shift(field, block, 1, a)?);
        }
        if !in_row_space(&reduced, &shifted) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn checked_base(g: &Polynomial, m: usize, a: u8) -> Result<(Polynomial, Polynomial), QtError> {
    let field = g.field();
    field.check(a)?;
    if a == 0 {
        return Err(QtError::ZeroShiftConstant);
    }
    if m == 0 {
        return Err(QtError::ZeroBlockLength);
    }
    let modulus = Polynomial::x_pow_minus_const(field, m, a)?;
    if g.is_zero() || !g.divides(&modulus) {
        return Err(QtError::NotADivisor { m, a });
    }
    let check = modulus.div_exact(g)?;
    Ok((modulus, check))
}

/// One-generator QT code with blocks `g·f_i mod (x^m - a)`: `g` must divide
/// `x^m - a` and each multiplier must be coprime to the check polynomial
/// `h = (x^m - a)/g`. The generator has `m - deg g` rows; under these
/// preconditions they are independent, so that is also the code dimension.
pub fn asr_generate(
    g: &Polynomial,
    multipliers: &[Polynomial],
    m: usize,
    a: u8,
) -> Result<GenMatrix, QtError> {
    if multipliers.is_empty() {
        return Err(QtError::EmptySelection);
    }
    let (_, check) = checked_base(g, m, a)?;
    for (index, f) in multipliers.iter().enumerate() {
        let coprime = match f.gcd(&check) {
            Ok(d) => d.is_one(),
            // gcd(0, 1) is an error case only when the check polynomial is
            // also trivial; a zero multiplier is never coprime
            Err(_) => false,
        };
        if !coprime && !check.is_one() {
            return Err(QtError::NotCoprime { index });
        }
        if f.is_zero() {
            return Err(QtError::NotCoprime { index });
        }
    }
    let field = g.field();
    let k = m - g.degree().expect("nonzero divisor");
    let blocks: Vec<Vec<Vec<u8>>> = multipliers
        .iter()
        .map(|f| {
            let base = g.mul(f).reduce_mod_xn_minus_a(m, a);
            block_rows(&base, m, a)
        })
        .collect();
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(m * multipliers.len());
        for b in &blocks {
            row.extend_from_slice(&b[i]);
        }
        rows.push(row);
    }
    let out = GenMatrix::new(field, rows)?;
    debug_assert_eq!(rref(&out).rank, k, "coprime multipliers must keep the rows independent");
    Ok(out)
}

/// The guaranteed floor `ℓ · d(C_g)` for any code built by `asr_generate`
/// with `ℓ` multipliers over the base constacyclic code `C_g`.
pub fn asr_distance_bound(
    g: &Polynomial,
    ell: usize,
    m: usize,
    a: u8,
    budget: &EngineBudget,
) -> Result<u32, QtError> {
    if ell == 0 {
        return Err(QtError::EmptySelection);
    }
    checked_base(g, m, a)?;
    let base = join_blocks(std::slice::from_ref(g), m, a)?;
    let report = min_distance_auto(&base, budget)?;
    let exact = report.params.d.exact().ok_or(QtError::InexactBaseDistance)?;
    Ok(ell as u32 * exact)
}

/// Compares the gcd taken over the highest-rank defining polynomials with
/// the gcd over all of them (both always include `x^m - a`). Whenever the
/// highest rank equals `m - deg(gcd_all)`, the two agree.
pub fn check_highest_rank_gcd(
    defs: &[Polynomial],
    m: usize,
    a: u8,
) -> Result<(Polynomial, Polynomial, bool), QtError> {
    if defs.is_empty() {
        return Err(QtError::EmptySelection);
    }
    if defs.iter().all(|g| g.is_zero()) {
        return Err(QtError::AllZeroDefs);
    }
    let ranks: Vec<usize> = defs
        .iter()
        .map(|g| rank_of_block(g, m, a))
        .collect::<Result<_, _>>()?;
    let top = *ranks.iter().max().expect("nonempty");
    let top_defs: Vec<&Polynomial> = defs
        .iter()
        .zip(&ranks)
        .filter(|(_, &r)| r == top)
        .map(|(g, _)| g)
        .collect();
    let field = defs[0].field();
    let modulus = Polynomial::x_pow_minus_const(field, m, a)?;
    let gcd_all = gcd_many(std::iter::once(&modulus).chain(defs.iter()))?;
    let gcd_top = gcd_many(std::iter::once(&modulus).chain(top_defs))?;
    let equal = gcd_all == gcd_top;
    Ok((gcd_all, gcd_top, equal))
}
