//! Arithmetic in GF(p^e).
//!
//! Elements are carried as integer codes in `[0, q)`: the element
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` has code `sum c_i p^i`. For a prime
//! field the code is the residue itself.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

/// Fields up to this order get full operation tables.
const TABLE_LIMIT: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("field order {p}^{e} exceeds 2^31")]
    TooLarge { p: u64, e: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus must be monic of degree {expected} with coefficients below {p}")]
    BadModulus { expected: u32, p: u64 },
    #[error("modulus {0} is reducible")]
    Reducible(String),
    #[error("{code} is not an element of GF({q})")]
    NotAnElement { code: u64, q: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone)]
enum Backend {
    /// Residues mod p, computed directly.
    Prime,
    /// Row-major `q * q` add/mul tables plus negation and inverse tables.
    Tables {
        add: Vec<u32>,
        mul: Vec<u32>,
        neg: Vec<u32>,
        inv: Vec<u32>,
    },
    /// Polynomial arithmetic on base-p digits.
    Poly,
}

/// A finite field GF(p^e) with a fixed modulus.
#[derive(Clone)]
pub struct Field {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus, low degree first, `e + 1` entries. Empty for prime fields.
    modulus: Vec<u64>,
    backend: Backend,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` into `(p, e)` with `q = p^e`.
pub fn factor_prime_power(q: u64) -> Result<(u64, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    Ok((p, e))
}

fn checked_order(p: u64, e: u32) -> Result<u64, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e < 1 {
        return Err(FieldError::BadDegree(e));
    }
    p.checked_pow(e)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or(FieldError::TooLarge { p, e })
}

impl Field {
    /// GF(p^e) with the lexicographically least monic irreducible modulus,
    /// coefficient tuples compared constant term first.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        let q = checked_order(p, e)?;
        if e == 1 {
            return Ok(Self::assemble(p, 1, q, Vec::new()));
        }
        let modulus = least_irreducible(p, e);
        Ok(Self::assemble(p, e, q, modulus))
    }

    /// The field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = factor_prime_power(q)?;
        Self::new(p, e)
    }

    /// GF(p^e) with an explicit monic modulus given low degree first
    /// (`e + 1` coefficients, the last one 1). Irreducibility is verified.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, FieldError> {
        if modulus.len() < 2 {
            return Err(FieldError::BadModulus { expected: 1, p });
        }
        let e = (modulus.len() - 1) as u32;
        let q = checked_order(p, e)?;
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus { expected: e, p });
        }
        if !is_irreducible(p, modulus) {
            return Err(FieldError::Reducible(poly_to_string(modulus)));
        }
        if e == 1 {
            // Every monic linear polynomial gives the same prime field.
            return Ok(Self::assemble(p, 1, q, Vec::new()));
        }
        Ok(Self::assemble(p, e, q, modulus.to_vec()))
    }

    fn assemble(p: u64, e: u32, q: u64, modulus: Vec<u64>) -> Self {
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            backend: if e == 1 { Backend::Prime } else { Backend::Poly },
        };
        if q <= TABLE_LIMIT {
            field.backend = field.build_tables();
        }
        field
    }

    fn build_tables(&self) -> Backend {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.slow_add(a as u32, b as u32);
                mul[a * q + b] = self.slow_mul(a as u32, b as u32);
            }
        }
        let neg = (0..q as u32).map(|a| self.slow_neg(a)).collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u32;
        }
        Backend::Tables { add, mul, neg, inv }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, low degree first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u64]> {
        if self.modulus.is_empty() {
            None
        } else {
            Some(&self.modulus)
        }
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    pub fn contains(&self, a: u32) -> bool {
        u64::from(a) < self.q
    }

    /// Validates an integer code.
    pub fn element(&self, code: u64) -> Result<u32, FieldError> {
        if code < self.q {
            Ok(code as u32)
        } else {
            Err(FieldError::NotAnElement { code, q: self.q })
        }
    }

    /// Reduces an arbitrary integer into the prime subfield.
    pub fn from_integer(&self, n: u64) -> u32 {
        (n % self.p) as u32
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.q as u32
    }

    /// Little-endian base-p digits of `a`.
    pub fn coeffs(&self, a: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.e as usize);
        let mut rest = u64::from(a);
        for _ in 0..self.e {
            out.push(rest % self.p);
            rest /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<u32, FieldError> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::NotAnElement {
                code: u64::MAX,
                q: self.q,
            });
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c) as u32)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.backend {
            Backend::Tables { add, .. } => add[a as usize * self.q as usize + b as usize],
            Backend::Prime => {
                let s = u64::from(a) + u64::from(b);
                (if s >= self.p { s - self.p } else { s }) as u32
            }
            Backend::Poly => self.slow_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(self.contains(a));
        match &self.backend {
            Backend::Tables { neg, .. } => neg[a as usize],
            Backend::Prime => {
                if a == 0 {
                    0
                } else {
                    (self.p - u64::from(a)) as u32
                }
            }
            Backend::Poly => self.slow_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.backend {
            Backend::Tables { mul, .. } => mul[a as usize * self.q as usize + b as usize],
            Backend::Prime => (u64::from(a) * u64::from(b) % self.p) as u32,
            Backend::Poly => self.slow_mul(a, b),
        }
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(match &self.backend {
            Backend::Tables { inv, .. } => inv[a as usize],
            _ => self.pow(a, self.q - 2),
        })
    }

    /// Checked binary operation on raw codes.
    pub fn arith(&self, op: ArithOp, a: u64, b: u64) -> Result<u32, FieldError> {
        let a = self.element(a)?;
        let b = self.element(b)?;
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
        })
    }

    /// Human-readable polynomial form of an element, e.g. `x+1`.
    pub fn display(&self, a: u32) -> String {
        if self.e == 1 {
            return a.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = (0..c.len())
            .rev()
            .filter(|&i| c[i] != 0)
            .map(|i| monomial(c[i], i))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.from_coeffs(&sum).unwrap()
    }

    fn slow_neg(&self, a: u32) -> u32 {
        let c: Vec<u64> = self
            .coeffs(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.from_coeffs(&c).unwrap()
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (u64::from(a) * u64::from(b) % self.p) as u32;
        }
        let prod = poly_mul(self.p, &self.coeffs(a), &self.coeffs(b));
        let mut rem = poly_rem(self.p, &prod, &self.modulus);
        rem.resize(self.e as usize, 0);
        self.from_coeffs(&rem).unwrap()
    }
}

fn monomial(c: u64, i: usize) -> String {
    let coef = if c == 1 && i > 0 {
        String::new()
    } else {
        c.to_string()
    };
    match i {
        0 => coef,
        1 => format!("{coef}x"),
        _ => format!("{coef}x^{i}"),
    }
}

pub(crate) fn poly_to_string(coeffs: &[u64]) -> String {
    let terms: Vec<String> = (0..coeffs.len())
        .rev()
        .filter(|&i| coeffs[i] != 0)
        .map(|i| monomial(coeffs[i], i))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y % p) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    debug_assert_eq!(m[dm], 1);
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = lead * c % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    if f[0] == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let mut g = vec![0u64; d + 1];
        g[d] = 1;
        loop {
            if poly_rem(p, f, &g).is_empty() {
                return false;
            }
            // next monic g of degree d, counting on the low coefficients
            let mut i = 0;
            while i < d {
                g[i] += 1;
                if g[i] < p {
                    break;
                }
                g[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

fn least_irreducible(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    // Lexicographic order on (c_0, ..., c_{e-1}) makes c_{e-1} the fastest digit.
    let mut f = vec![0u64; e + 1];
    f[e] = 1;
    loop {
        if is_irreducible(p, &f) {
            return f;
        }
        let mut i = e - 1;
        loop {
            f[i] += 1;
            if f[i] < p {
                break;
            }
            f[i] = 0;
            // irreducibles of every degree exist, so the scan ends before wrapping
            i -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<Field> {
        [2u64, 3, 4, 5, 7, 8, 9]
            .iter()
            .map(|&q| Field::with_order(q).unwrap())
            .collect()
    }

    /// Brute-force irreducibility: no root-free factorization search, just
    /// check that no product of two monic polynomials of lower degree equals f.
    fn irreducible_by_products(p: u64, f: &[u64]) -> bool {
        let deg = f.len() - 1;
        let monics = |d: usize| -> Vec<Vec<u64>> {
            let mut out = Vec::new();
            for code in 0..p.pow(d as u32) {
                let mut g = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    g.push(c % p);
                    c /= p;
                }
                g.push(1);
                out.push(g);
            }
            out
        };
        for d in 1..deg {
            for a in monics(d) {
                for b in monics(deg - d) {
                    if poly_mul(p, &a, &b) == f {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_has_no_modulus() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        assert!(f.modulus().is_none());
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), Some(&[1, 1, 1][..]));
    }

    #[test]
    fn gf9_modulus_matches_exhaustive_scan() {
        // scan monic quadratics over F_3 in (c0, c1) order with a product oracle
        let mut first = None;
        'outer: for c0 in 0..3 {
            for c1 in 0..3 {
                if irreducible_by_products(3, &[c0, c1, 1]) {
                    first = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(first, Some(vec![1, 0, 1]));
        assert_eq!(Field::new(3, 2).unwrap().modulus(), Some(&[1, 0, 1][..]));
    }

    #[test]
    fn trial_division_agrees_with_product_oracle() {
        for p in [2u64, 3] {
            for deg in 2..=4usize {
                for code in 0..p.pow(deg as u32) {
                    let mut f = Vec::new();
                    let mut c = code;
                    for _ in 0..deg {
                        f.push(c % p);
                        c /= p;
                    }
                    f.push(1);
                    assert_eq!(is_irreducible(p, &f), irreducible_by_products(p, &f), "{f:?}");
                }
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(Field::new(3, 0), Err(FieldError::BadDegree(0)));
        assert!(matches!(Field::new(2, 32), Err(FieldError::TooLarge { .. })));
        assert!(matches!(Field::with_order(12), Err(FieldError::NotPrimePower(12))));
        assert!(matches!(
            Field::with_modulus(2, &[1, 0, 1]),
            Err(FieldError::Reducible(_))
        ));
    }

    #[test]
    fn large_prime_field_without_tables() {
        let f = Field::with_order(999_999_937).unwrap();
        assert_eq!(f.mul(999_999_936, 999_999_936), 1);
        let a = 123_456_789;
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
    }

    #[test]
    fn large_extension_field_uses_polynomials() {
        let f = Field::new(2, 10).unwrap();
        for a in [1u32, 2, 3, 517, 1023] {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.pow(a, 1024), a);
        }
    }

    #[test]
    fn arithmetic_examples() {
        let gf3 = Field::with_order(3).unwrap();
        assert_eq!(gf3.arith(ArithOp::Add, 2, 2), Ok(1));
        let gf4 = Field::with_order(4).unwrap();
        // x * x = x + 1 in F_2[x]/(x^2+x+1)
        assert_eq!(gf4.arith(ArithOp::Mul, 2, 2), Ok(3));
        assert_eq!(gf4.display(3), "x+1");
        assert_eq!(gf4.inv(2), Ok(3));
        let gf5 = Field::with_order(5).unwrap();
        assert_eq!(gf5.arith(ArithOp::Mul, 3, 2), Ok(1));
        assert_eq!(gf5.inv(3), Ok(2));
        assert_eq!(gf5.inv(0), Err(FieldError::ZeroInverse));
        assert!(gf5.arith(ArithOp::Add, 5, 1).is_err());
        for f in small_fields() {
            assert_eq!(f.inv(1), Ok(1));
        }
    }

    #[test]
    fn enumeration_is_canonical() {
        let gf3 = Field::with_order(3).unwrap();
        assert_eq!(gf3.elements().collect::<Vec<_>>(), vec![0, 1, 2]);
        let gf4 = Field::with_order(4).unwrap();
        let shown: Vec<String> = gf4.elements().map(|a| gf4.display(a)).collect();
        assert_eq!(shown, ["0", "1", "x", "x+1"]);
        for f in small_fields() {
            assert_eq!(f.elements().count() as u64, f.order());
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            let els: Vec<u32> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.pow(a, f.order()), a, "Frobenius in GF({})", f.order());
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.slow_add(a, b));
                assert_eq!(f.mul(a, b), f.slow_mul(a, b));
            }
        }
    }

    #[test]
    fn code_round_trip() {
        for f in small_fields() {
            for a in f.elements() {
                assert_eq!(f.from_coeffs(&f.coeffs(a)), Ok(a));
            }
        }
    }

    #[test]
    fn alternate_modulus() {
        let f = Field::with_modulus(2, &[1, 1, 0, 1]).unwrap();
        let g = Field::new(2, 3).unwrap();
        assert_eq!(g.modulus(), Some(&[1, 0, 1, 1][..]));
        assert_ne!(f, g);
        assert_eq!(f.order(), 8);
    }
}
