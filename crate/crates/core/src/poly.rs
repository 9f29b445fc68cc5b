//! Univariate polynomials over a prime field 𝔽_p.
//!
//! Coefficients are stored constant term first and trimmed, so the zero
//! polynomial has an empty coefficient vector.

use std::cmp::Ordering;
use std::fmt;

use crate::field::{Field, PrimeField};
use crate::linalg::Matrix;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    /// Reduces every coefficient mod `p` and trims leading zeros.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        FpPoly::new(
            p,
            coeffs
                .iter()
                .map(|c| c.rem_euclid(p as i64) as u64)
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        FpPoly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        FpPoly::new(p, vec![c])
    }

    /// The polynomial `h`.
    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    /// `h - a`.
    pub fn linear_root(p: u64, a: u64) -> Self {
        FpPoly::new(p, vec![(p - a % p) % p, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("polynomial modulus is prime")
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `h^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let f = self.field();
        let inv = f.inv(&self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        FpPoly::new(
            self.p,
            self.coeffs
                .iter()
                .map(|a| a * (c % self.p) % self.p)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        FpPoly::zero(self.p).sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        FpPoly::new(p, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let p = self.p;
        let inv = self.field().inv(&divisor.lead()).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (FpPoly::zero(p), FpPoly::zero(p));
        };
        if nd < dd {
            return (FpPoly::zero(p), self.clone());
        }
        let mut quot = vec![0u64; nd - dd + 1];
        for i in (dd..=nd).rev() {
            let c = rem[i] * inv % p;
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = (rem[k] + p - c * d % p) % p;
            }
        }
        rem.truncate(dd);
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        FpPoly::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % self.p) * c % self.p)
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (acc * (x % p) + c) % p)
    }

    /// `self(inner(h))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = FpPoly::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&FpPoly::constant(self.p, c));
        }
        acc
    }

    /// `self(inner) mod modulus`, keeping intermediate degrees bounded.
    pub fn compose_mod(&self, inner: &Self, modulus: &Self) -> Self {
        let inner = inner.rem(modulus);
        let mut acc = FpPoly::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .mul(&inner)
                .add(&FpPoly::constant(self.p, c))
                .rem(modulus);
        }
        acc
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut exp: u64, modulus: &Self) -> Self {
        let mut acc = FpPoly::one(self.p).rem(modulus);
        let mut base = self.rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            exp >>= 1;
        }
        acc
    }

    /// Inverse modulo an irreducible `modulus`; `None` if not coprime.
    pub fn inv_mod(&self, modulus: &Self) -> Option<Self> {
        // extended Euclid on (self, modulus)
        let mut r0 = modulus.clone();
        let mut r1 = self.rem(modulus);
        let mut s0 = FpPoly::zero(self.p);
        let mut s1 = FpPoly::one(self.p);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let inv = self.field().inv(&r0.lead())?;
        Some(s0.scale(inv).rem(modulus))
    }

    /// Coefficient vector padded (or truncated) to `len` entries.
    pub fn to_vec(&self, len: usize) -> Vec<u64> {
        (0..len).map(|i| self.coeff(i)).collect()
    }

    /// Rabin's test: monic of degree `n` is irreducible iff `h^{p^n} ≡ h` and
    /// `gcd(h^{p^{n/q}} - h, self) = 1` for every prime `q | n`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let x = FpPoly::x(self.p);
        let frob = |k: usize| -> FpPoly {
            let mut y = x.rem(&f);
            for _ in 0..k {
                y = y.pow_mod(self.p, &f);
            }
            y
        };
        if frob(n).sub(&x).rem(&f) != FpPoly::zero(self.p) {
            return false;
        }
        prime_divisors(n as u64)
            .into_iter()
            .all(|q| frob(n / q as usize).sub(&x).gcd(&f).is_one())
    }

    /// Matrix of multiplication by `self` on `𝔽_p[h]/(modulus)` in the basis `1, h, …`.
    pub fn multiplication_matrix(&self, modulus: &Self) -> Matrix<u64> {
        let d = modulus.degree().expect("nonzero modulus");
        let cols: Vec<Vec<u64>> = (0..d)
            .map(|j| {
                let basis = FpPoly::new(self.p, {
                    let mut v = vec![0; j + 1];
                    v[j] = 1;
                    v
                });
                self.mul_mod(&basis, modulus).to_vec(d)
            })
            .collect();
        Matrix::from_columns(d, &cols)
    }

    /// Human rendering with coefficients in `[0, p)`, e.g. `h^2+3h+1`.
    /// Monic linear polynomials render by their root: `h-4`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.degree() == Some(1) && self.is_monic() {
            let root = (self.p - self.coeff(0)) % self.p;
            return if root == 0 {
                "h".to_string()
            } else {
                format!("h-{root}")
            };
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            let term = match i {
                0 => coef,
                1 => format!("{coef}h"),
                _ => format!("{coef}h^{i}"),
            };
            parts.push(term);
        }
        parts.join("+")
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.render(), self.p)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Ordered by degree, then lexicographically on the coefficient vector
/// (constant term first).
impl Ord for FpPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
            .then_with(|| self.p.cmp(&other.p))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Parses a polynomial expression in `h` such as `h^2+3h+1`, `(h-4)`, `2h - 1`.
/// Integer coefficients are reduced mod `p`.
pub fn parse_poly_expr(p: u64, s: &str) -> Option<FpPoly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(&s);
    if s.is_empty() {
        return None;
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let num: Option<i64> = if i > start {
            s[start..i].parse().ok()
        } else {
            None
        };
        let mut exp = 0usize;
        let has_h = i < bytes.len() && bytes[i] == b'h';
        if has_h {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let es = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = s[es..i].parse().ok()?;
            }
        }
        if num.is_none() && !has_h {
            return None;
        }
        let c = sign * num.unwrap_or(1);
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] = (coeffs[exp] + c).rem_euclid(p as i64);
        if i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            return None;
        }
    }
    Some(FpPoly::from_i64(p, &coeffs))
}

/// Parses a comma-separated coefficient list, constant term first (`0,0,1` = h²).
pub fn parse_coeff_list(p: u64, s: &str) -> Option<FpPoly> {
    let coeffs: Option<Vec<i64>> = s.split(',').map(|t| t.trim().parse().ok()).collect();
    Some(FpPoly::from_i64(p, &coeffs?))
}
