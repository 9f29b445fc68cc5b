//! Computable presentations of `(R, σ, t)`.
//!
//! Three backends are supported:
//!
//! * `FinitePoly`: `R = 𝔽_p[h]`, `σ(h) = f`, points are monic irreducibles.
//! * `PowerMap`: `f = hⁿ` over ℂ restricted to zero and roots of unity
//!   (stored as exact angles), `t = h + ż`.
//! * `Affine`: `f = a·h + b` over ℚ restricted to rational points.
//!
//! Every point `m` has a unique `down(m)` with `σ(down(m)) ⊂ m`; `up(m)` lists
//! the points whose `down` is `m`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::factor::{irreducible_factors, monic_irreducibles};
use crate::field::{format_rational, parse_rational, Field, PrimeField};
use crate::linalg::Matrix;
use crate::poly::{parse_poly_expr, FpPoly};
use crate::scalar::{Angle, CycloScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("{0} is not a prime modulus below 2^31")]
    NonPrimeModulus(u64),
    #[error("leading coefficient of the affine map is zero")]
    ZeroLeadingCoefficient,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0} is not a point of this universe")]
    ForeignIdeal(String),
    #[error("cannot parse point {0:?}")]
    BadIdeal(String),
    #[error("{from} -> {to} is not an edge: down({to}) != {from}")]
    NotAnEdge { from: String, to: String },
    #[error("edge {from} -> {to} is not essential")]
    NotEssential { from: String, to: String },
    #[error("residue lives at {actual}, expected {expected}")]
    WrongHome { expected: String, actual: String },
    #[error("unsupported exact arithmetic: {0}")]
    Unsupported(String),
}

type Result<T> = std::result::Result<T, UniverseError>;

/// A maximal ideal of `R`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum MaxIdeal {
    /// Monic irreducible polynomial over 𝔽_p.
    Poly(FpPoly),
    /// The point `0` of the power-map backend.
    Zero,
    /// The root of unity `e^{2πiq}`.
    Angle(Angle),
    /// A rational point `χ` of the affine backend.
    Rational(BigRational),
}

impl MaxIdeal {
    fn rank(&self) -> u8 {
        match self {
            MaxIdeal::Poly(_) => 0,
            MaxIdeal::Zero => 1,
            MaxIdeal::Angle(_) => 2,
            MaxIdeal::Rational(_) => 3,
        }
    }

    /// Degree of the residue field over its prime field (1 outside `FinitePoly`).
    pub fn degree(&self) -> usize {
        match self {
            MaxIdeal::Poly(q) => q.degree().unwrap_or(0),
            _ => 1,
        }
    }

    pub fn angle(num: i64, den: i64) -> Option<Self> {
        Angle::new(num, den).map(MaxIdeal::Angle)
    }

    pub fn rational(num: i64, den: i64) -> Self {
        MaxIdeal::Rational(BigRational::new(num.into(), den.into()))
    }

    /// `(h - a)` over 𝔽_p.
    pub fn linear(p: u64, a: i64) -> Self {
        MaxIdeal::Poly(FpPoly::linear_root(p, a.rem_euclid(p as i64) as u64))
    }

    pub fn as_poly(&self) -> Option<&FpPoly> {
        match self {
            MaxIdeal::Poly(q) => Some(q),
            _ => None,
        }
    }
}

/// Polynomials by `(degree, coefficients)`, angles and rationals by
/// `(numerator, denominator)`.
impl Ord for MaxIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MaxIdeal::Poly(a), MaxIdeal::Poly(b)) => a.cmp(b),
            (MaxIdeal::Angle(a), MaxIdeal::Angle(b)) => a.cmp(b),
            (MaxIdeal::Rational(a), MaxIdeal::Rational(b)) => {
                (a.numer(), a.denom()).cmp(&(b.numer(), b.denom()))
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for MaxIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MaxIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxIdeal::Poly(q) => write!(f, "({})", q.render()),
            MaxIdeal::Zero => f.write_str("zero"),
            MaxIdeal::Angle(q) => write!(f, "angle:{q}"),
            MaxIdeal::Rational(x) => write!(f, "chi:{}", format_rational(x)),
        }
    }
}

impl fmt::Debug for MaxIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Where `t` vanishes on the power-map backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ZDot {
    /// `-ż` is not a stored point, so `t` vanishes nowhere.
    Outside,
    /// `t = h + ż` vanishes exactly at this point (`ż = -point`).
    At(MaxIdeal),
}

/// Backend description accepted by [`WeightUniverse::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniverseSpec {
    /// Coefficients constant term first, reduced mod `p`.
    FinitePoly {
        p: u64,
        f: Vec<i64>,
        t: Vec<i64>,
    },
    PowerMap {
        n: u64,
        zdot: ZDot,
    },
    /// `t` has at most two coefficients `[t0, t1]`, meaning `t0 + t1·h`.
    Affine {
        a: BigRational,
        b: BigRational,
        t: Vec<BigRational>,
    },
    /// Constant `f = theta` over ℚ; shares the affine backend with `a = 0`.
    Constant {
        theta: BigRational,
        t: Vec<BigRational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Backend {
    FinitePoly {
        field: PrimeField,
        f: FpPoly,
        t: FpPoly,
    },
    PowerMap {
        n: u64,
        zdot: ZDot,
    },
    Affine {
        a: BigRational,
        b: BigRational,
        t0: BigRational,
        t1: BigRational,
    },
}

/// A value in a residue field `R/m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Residue {
    /// Coefficients of a representative of degree `< deg m`, padded to `deg m`.
    Poly(Vec<u64>),
    Rational(BigRational),
    Cyclo(CycloScalar),
}

/// A residue together with the point it lives at.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueElement {
    pub home: MaxIdeal,
    pub value: Residue,
}

impl ResidueElement {
    /// The value alone, without the point it lives at.
    pub fn value_string(&self) -> String {
        match &self.value {
            Residue::Poly(v) => {
                let p = self.home.as_poly().map_or(2, FpPoly::modulus);
                FpPoly::new(p, v.clone()).render()
            }
            Residue::Rational(q) => format_rational(q),
            Residue::Cyclo(c) => c.to_string(),
        }
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Residue::Poly(v) => {
                let p = self.home.as_poly().map_or(2, FpPoly::modulus);
                write!(
                    f,
                    "{} mod {}",
                    FpPoly::new(p, v.clone()).render(),
                    self.home
                )
            }
            Residue::Rational(q) => write!(f, "{} at {}", format_rational(q), self.home),
            Residue::Cyclo(c) => write!(f, "{c} at {}", self.home),
        }
    }
}

/// An element of `R` that can be reduced at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingElem {
    Poly(FpPoly),
    /// Rational coefficients, constant term first.
    Rational(Vec<BigRational>),
}

/// Which of `t`, `σ(t)` lie in a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vanishing {
    pub t_in: bool,
    pub sigma_t_in: bool,
}

/// An immutable presentation of `(R, σ, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightUniverse {
    backend: Backend,
}

/// Convenience wrapper for [`WeightUniverse::new`].
pub fn make_universe(spec: UniverseSpec) -> Result<WeightUniverse> {
    WeightUniverse::new(spec)
}

impl WeightUniverse {
    pub fn new(spec: UniverseSpec) -> Result<Self> {
        let backend = match spec {
            UniverseSpec::FinitePoly { p, f, t } => {
                let field = PrimeField::new(p).ok_or(UniverseError::NonPrimeModulus(p))?;
                Backend::FinitePoly {
                    field,
                    f: FpPoly::from_i64(p, &f),
                    t: FpPoly::from_i64(p, &t),
                }
            }
            UniverseSpec::PowerMap { n, zdot } => {
                if n == 0 {
                    return Err(UniverseError::InvalidParameter(
                        "power map exponent must be at least 1".into(),
                    ));
                }
                if let ZDot::At(pt) = &zdot {
                    if !matches!(pt, MaxIdeal::Zero | MaxIdeal::Angle(_)) {
                        return Err(UniverseError::ForeignIdeal(pt.to_string()));
                    }
                }
                Backend::PowerMap { n, zdot }
            }
            UniverseSpec::Affine { a, b, t } => {
                if a.is_zero() {
                    return Err(UniverseError::ZeroLeadingCoefficient);
                }
                affine_backend(a, b, t)?
            }
            UniverseSpec::Constant { theta, t } => affine_backend(BigRational::zero(), theta, t)?,
        };
        Ok(WeightUniverse { backend })
    }

    /// The normalized description this universe was built from.
    pub fn spec(&self) -> UniverseSpec {
        match &self.backend {
            Backend::FinitePoly { field, f, t } => UniverseSpec::FinitePoly {
                p: field.modulus(),
                f: f.coeffs().iter().map(|&c| c as i64).collect(),
                t: t.coeffs().iter().map(|&c| c as i64).collect(),
            },
            Backend::PowerMap { n, zdot } => UniverseSpec::PowerMap {
                n: *n,
                zdot: zdot.clone(),
            },
            Backend::Affine { a, b, t0, t1 } if a.is_zero() => UniverseSpec::Constant {
                theta: b.clone(),
                t: vec![t0.clone(), t1.clone()],
            },
            Backend::Affine { a, b, t0, t1 } => UniverseSpec::Affine {
                a: a.clone(),
                b: b.clone(),
                t: vec![t0.clone(), t1.clone()],
            },
        }
    }

    /// The prime field of a `FinitePoly` universe.
    pub fn prime_field(&self) -> Option<PrimeField> {
        match &self.backend {
            Backend::FinitePoly { field, .. } => Some(*field),
            _ => None,
        }
    }

    /// `(f, t)` of a `FinitePoly` universe.
    pub fn poly_data(&self) -> Option<(&FpPoly, &FpPoly)> {
        match &self.backend {
            Backend::FinitePoly { f, t, .. } => Some((f, t)),
            _ => None,
        }
    }

    /// `(a, b, t0, t1)` of an affine universe.
    pub fn affine_data(&self) -> Option<(&BigRational, &BigRational, &BigRational, &BigRational)> {
        match &self.backend {
            Backend::Affine { a, b, t0, t1 } => Some((a, b, t0, t1)),
            _ => None,
        }
    }

    /// `(n, ż)` of a power-map universe.
    pub fn power_data(&self) -> Option<(u64, &ZDot)> {
        match &self.backend {
            Backend::PowerMap { n, zdot } => Some((*n, zdot)),
            _ => None,
        }
    }

    pub fn is_finite_poly(&self) -> bool {
        matches!(self.backend, Backend::FinitePoly { .. })
    }

    pub fn check_member(&self, m: &MaxIdeal) -> Result<()> {
        let ok = match (&self.backend, m) {
            (Backend::FinitePoly { field, .. }, MaxIdeal::Poly(q)) => {
                q.modulus() == field.modulus() && q.is_monic() && q.is_irreducible()
            }
            (Backend::PowerMap { .. }, MaxIdeal::Zero | MaxIdeal::Angle(_)) => true,
            (Backend::Affine { .. }, MaxIdeal::Rational(_)) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(UniverseError::ForeignIdeal(m.to_string()))
        }
    }

    /// Parses `(h-4)`, `(h^2+3h+1)`, `angle:1/4`, `zero`, or `chi:3/2`.
    pub fn parse_ideal(&self, s: &str) -> Result<MaxIdeal> {
        let bad = || UniverseError::BadIdeal(s.to_string());
        let s = s.trim();
        let m = match &self.backend {
            Backend::FinitePoly { field, .. } => {
                MaxIdeal::Poly(parse_poly_expr(field.modulus(), s).ok_or_else(bad)?)
            }
            Backend::PowerMap { .. } => {
                if s == "zero" || s == "0" {
                    MaxIdeal::Zero
                } else {
                    let body = s.strip_prefix("angle:").unwrap_or(s);
                    let q = parse_rational(body).ok_or_else(bad)?;
                    let num = i64::try_from(q.numer()).map_err(|_| bad())?;
                    let den = i64::try_from(q.denom()).map_err(|_| bad())?;
                    MaxIdeal::angle(num, den).ok_or_else(bad)?
                }
            }
            Backend::Affine { .. } => {
                let body = s.strip_prefix("chi:").unwrap_or(s);
                MaxIdeal::Rational(parse_rational(body).ok_or_else(bad)?)
            }
        };
        self.check_member(&m)?;
        Ok(m)
    }

    /// The unique `n` with `σ(n) ⊂ m`.
    ///
    /// # Panics
    /// If `m` is not a point of this universe.
    pub fn down(&self, m: &MaxIdeal) -> MaxIdeal {
        match (&self.backend, m) {
            (Backend::FinitePoly { field, f, .. }, MaxIdeal::Poly(q)) => {
                MaxIdeal::Poly(minimal_polynomial(field, &f.rem(q), q))
            }
            (Backend::PowerMap { .. }, MaxIdeal::Zero) => MaxIdeal::Zero,
            (Backend::PowerMap { n, .. }, MaxIdeal::Angle(q)) => MaxIdeal::Angle(q.times(*n)),
            (Backend::Affine { a, b, .. }, MaxIdeal::Rational(x)) => MaxIdeal::Rational(a * x + b),
            _ => panic!("{m} is not a point of this universe"),
        }
    }

    /// All points `m'` with `down(m') = m`, sorted.
    ///
    /// Over 𝔽_p these are the irreducible factors of `m∘f`. When `m∘f`
    /// vanishes identically (constant `f`), every irreducible maps to `m`;
    /// the answer is then truncated to degrees `≤ degree_bound`.
    pub fn up(&self, m: &MaxIdeal, degree_bound: usize) -> Vec<MaxIdeal> {
        match (&self.backend, m) {
            (Backend::FinitePoly { field, f, .. }, MaxIdeal::Poly(q)) => {
                let comp = q.compose(f);
                if comp.is_zero() {
                    (1..=degree_bound)
                        .flat_map(|d| monic_irreducibles(field.modulus(), d))
                        .map(MaxIdeal::Poly)
                        .collect()
                } else {
                    irreducible_factors(&comp)
                        .into_iter()
                        .map(MaxIdeal::Poly)
                        .collect()
                }
            }
            (Backend::PowerMap { .. }, MaxIdeal::Zero) => vec![MaxIdeal::Zero],
            (Backend::PowerMap { n, .. }, MaxIdeal::Angle(q)) => {
                q.preimages(*n).into_iter().map(MaxIdeal::Angle).collect()
            }
            // constant f: nothing or every rational maps to m; the latter is not enumerated
            (Backend::Affine { a, .. }, MaxIdeal::Rational(_)) if a.is_zero() => Vec::new(),
            (Backend::Affine { a, b, .. }, MaxIdeal::Rational(x)) => {
                vec![MaxIdeal::Rational((x - b) / a)]
            }
            _ => panic!("{m} is not a point of this universe"),
        }
    }

    /// Whether `up(m)` can be empty only by truncation (constant `f` over 𝔽_p).
    pub fn up_is_truncated(&self, m: &MaxIdeal) -> bool {
        match (&self.backend, m) {
            (Backend::FinitePoly { f, .. }, MaxIdeal::Poly(q)) => q.compose(f).is_zero(),
            (Backend::Affine { a, b, .. }, MaxIdeal::Rational(x)) => a.is_zero() && x == b,
            _ => false,
        }
    }

    pub fn vanishing(&self, m: &MaxIdeal) -> Vanishing {
        match (&self.backend, m) {
            (Backend::FinitePoly { f, t, .. }, MaxIdeal::Poly(q)) => Vanishing {
                t_in: t.rem(q).is_zero(),
                sigma_t_in: t.compose_mod(f, q).is_zero(),
            },
            (Backend::PowerMap { zdot, .. }, _) => {
                let at = |x: &MaxIdeal| matches!(zdot, ZDot::At(p) if p == x);
                Vanishing {
                    t_in: at(m),
                    sigma_t_in: at(&self.down(m)),
                }
            }
            (Backend::Affine { t0, t1, .. }, MaxIdeal::Rational(x)) => {
                let fx = self.down(m);
                let MaxIdeal::Rational(fx) = fx else {
                    unreachable!()
                };
                Vanishing {
                    t_in: (t0 + t1 * x).is_zero(),
                    sigma_t_in: (t0 + t1 * fx).is_zero(),
                }
            }
            _ => panic!("{m} is not a point of this universe"),
        }
    }

    /// Points where `t` vanishes; `None` when `t = 0`.
    pub fn t_zeros(&self) -> Option<Vec<MaxIdeal>> {
        match &self.backend {
            Backend::FinitePoly { t, .. } => {
                if t.is_zero() {
                    None
                } else {
                    Some(
                        irreducible_factors(t)
                            .into_iter()
                            .map(MaxIdeal::Poly)
                            .collect(),
                    )
                }
            }
            Backend::PowerMap { zdot, .. } => Some(match zdot {
                ZDot::Outside => Vec::new(),
                ZDot::At(p) => vec![p.clone()],
            }),
            Backend::Affine { t0, t1, .. } => {
                if t1.is_zero() {
                    if t0.is_zero() {
                        None
                    } else {
                        Some(Vec::new())
                    }
                } else {
                    Some(vec![MaxIdeal::Rational(-t0 / t1)])
                }
            }
        }
    }

    // ---- residue arithmetic ----

    fn check_home(&self, x: &ResidueElement, m: &MaxIdeal) -> Result<()> {
        if &x.home == m {
            Ok(())
        } else {
            Err(UniverseError::WrongHome {
                expected: m.to_string(),
                actual: x.home.to_string(),
            })
        }
    }

    fn make(&self, m: &MaxIdeal, value: Residue) -> ResidueElement {
        ResidueElement {
            home: m.clone(),
            value,
        }
    }

    pub fn from_int(&self, m: &MaxIdeal, v: i64) -> ResidueElement {
        let value = match &self.backend {
            Backend::FinitePoly { field, .. } => {
                let mut vec = vec![0; m.degree()];
                vec[0] = field.reduce_i64(v);
                Residue::Poly(vec)
            }
            Backend::PowerMap { .. } => Residue::Cyclo(CycloScalar::from_i64(v)),
            Backend::Affine { .. } => Residue::Rational(BigRational::from_integer(BigInt::from(v))),
        };
        self.make(m, value)
    }

    pub fn zero(&self, m: &MaxIdeal) -> ResidueElement {
        self.from_int(m, 0)
    }

    pub fn one(&self, m: &MaxIdeal) -> ResidueElement {
        self.from_int(m, 1)
    }

    /// Builds a residue from a prime-field coefficient vector (`FinitePoly` only).
    pub fn from_vector(&self, m: &MaxIdeal, v: &[u64]) -> Result<ResidueElement> {
        let q = self.poly_point(m)?;
        let d = m.degree();
        Ok(self.make(
            m,
            Residue::Poly(FpPoly::new(q.modulus(), v.to_vec()).rem(q).to_vec(d)),
        ))
    }

    /// Coordinates over the prime field (`FinitePoly` only).
    pub fn to_vector(&self, x: &ResidueElement) -> Result<Vec<u64>> {
        match &x.value {
            Residue::Poly(v) => Ok(v.clone()),
            _ => Err(UniverseError::Unsupported("not a finite residue".into())),
        }
    }

    fn poly_point<'a>(&self, m: &'a MaxIdeal) -> Result<&'a FpPoly> {
        match (&self.backend, m) {
            (Backend::FinitePoly { .. }, MaxIdeal::Poly(q)) => Ok(q),
            _ => Err(UniverseError::ForeignIdeal(m.to_string())),
        }
    }

    fn as_poly(&self, x: &ResidueElement) -> FpPoly {
        match (&x.value, &x.home) {
            (Residue::Poly(v), MaxIdeal::Poly(q)) => FpPoly::new(q.modulus(), v.clone()),
            _ => panic!("not a finite-field residue"),
        }
    }

    #[allow(clippy::wrong_self_convention)]
    fn from_poly(&self, m: &MaxIdeal, r: &FpPoly) -> ResidueElement {
        let q = m.as_poly().expect("finite point");
        self.make(m, Residue::Poly(r.rem(q).to_vec(m.degree())))
    }

    /// Reduces a ring element at `m`.
    pub fn reduce(&self, m: &MaxIdeal, r: &RingElem) -> Result<ResidueElement> {
        match (&self.backend, r) {
            (Backend::FinitePoly { .. }, RingElem::Poly(r)) => {
                self.poly_point(m)?;
                Ok(self.from_poly(m, r))
            }
            (Backend::Affine { .. }, RingElem::Rational(cs)) => {
                let MaxIdeal::Rational(x) = m else {
                    return Err(UniverseError::ForeignIdeal(m.to_string()));
                };
                let mut acc = BigRational::zero();
                for c in cs.iter().rev() {
                    acc = acc * x + c;
                }
                Ok(self.make(m, Residue::Rational(acc)))
            }
            (Backend::PowerMap { .. }, RingElem::Rational(cs)) => {
                let mut acc = CycloScalar::zero();
                for (k, c) in cs.iter().enumerate() {
                    let term = match m {
                        MaxIdeal::Zero if k == 0 => CycloScalar::rational(c.clone()),
                        MaxIdeal::Zero => CycloScalar::zero(),
                        MaxIdeal::Angle(q) => {
                            CycloScalar::root_of_unity(c.clone(), q.times(k as u64))
                        }
                        _ => return Err(UniverseError::ForeignIdeal(m.to_string())),
                    };
                    acc = acc.add(&term).ok_or_else(|| {
                        UniverseError::Unsupported("sum of distinct roots of unity".into())
                    })?;
                }
                Ok(self.make(m, Residue::Cyclo(acc)))
            }
            _ => Err(UniverseError::Unsupported(
                "ring element of the wrong backend".into(),
            )),
        }
    }

    /// The residue of `h` at `m`.
    pub fn h_value(&self, m: &MaxIdeal) -> ResidueElement {
        match (&self.backend, m) {
            (Backend::FinitePoly { field, .. }, _) => {
                self.from_poly(m, &FpPoly::x(field.modulus()))
            }
            (Backend::PowerMap { .. }, MaxIdeal::Zero) => {
                self.make(m, Residue::Cyclo(CycloScalar::zero()))
            }
            (Backend::PowerMap { .. }, MaxIdeal::Angle(q)) => self.make(
                m,
                Residue::Cyclo(CycloScalar::root_of_unity(BigRational::one(), *q)),
            ),
            (Backend::Affine { .. }, MaxIdeal::Rational(x)) => {
                self.make(m, Residue::Rational(x.clone()))
            }
            _ => panic!("{m} is not a point of this universe"),
        }
    }

    /// `t + m`.
    pub fn t_value(&self, m: &MaxIdeal) -> ResidueElement {
        match (&self.backend, m) {
            (Backend::FinitePoly { t, .. }, _) => self.from_poly(m, t),
            (Backend::PowerMap { zdot, .. }, _) => {
                let v = match zdot {
                    ZDot::At(p) if p == m => CycloScalar::zero(),
                    ZDot::At(MaxIdeal::Zero) => match m {
                        MaxIdeal::Angle(q) => CycloScalar::root_of_unity(BigRational::one(), *q),
                        _ => unreachable!("zero handled above"),
                    },
                    ZDot::At(MaxIdeal::Angle(p)) if *m == MaxIdeal::Zero => {
                        CycloScalar::root_of_unity(-BigRational::one(), *p)
                    }
                    _ => CycloScalar::symbol(m.clone()),
                };
                self.make(m, Residue::Cyclo(v))
            }
            (Backend::Affine { t0, t1, .. }, MaxIdeal::Rational(x)) => {
                self.make(m, Residue::Rational(t0 + t1 * x))
            }
            _ => panic!("{m} is not a point of this universe"),
        }
    }

    /// `σ(t) + m`.
    pub fn sigma_t_value(&self, m: &MaxIdeal) -> ResidueElement {
        match &self.backend {
            Backend::FinitePoly { f, t, .. } => {
                self.from_poly(m, &t.compose_mod(f, m.as_poly().expect("finite point")))
            }
            _ => {
                let below = self.down(m);
                let v = self.t_value(&below).value;
                self.make(m, v)
            }
        }
    }

    pub fn is_zero(&self, x: &ResidueElement) -> bool {
        match &x.value {
            Residue::Poly(v) => v.iter().all(|&c| c == 0),
            Residue::Rational(q) => q.is_zero(),
            Residue::Cyclo(c) => c.is_zero(),
        }
    }

    pub fn add(&self, x: &ResidueElement, y: &ResidueElement) -> Result<ResidueElement> {
        self.check_home(y, &x.home)?;
        let value = match (&x.value, &y.value) {
            (Residue::Poly(_), Residue::Poly(_)) => {
                return Ok(self.from_poly(&x.home, &self.as_poly(x).add(&self.as_poly(y))))
            }
            (Residue::Rational(a), Residue::Rational(b)) => Residue::Rational(a + b),
            (Residue::Cyclo(a), Residue::Cyclo(b)) => {
                Residue::Cyclo(a.add(b).ok_or_else(|| {
                    UniverseError::Unsupported(format!("{a} + {b} is not a monomial"))
                })?)
            }
            _ => return Err(UniverseError::Unsupported("mixed residue kinds".into())),
        };
        Ok(self.make(&x.home, value))
    }

    pub fn neg(&self, x: &ResidueElement) -> ResidueElement {
        let value = match &x.value {
            Residue::Poly(_) => return self.from_poly(&x.home, &self.as_poly(x).neg()),
            Residue::Rational(a) => Residue::Rational(-a),
            Residue::Cyclo(a) => Residue::Cyclo(a.neg()),
        };
        self.make(&x.home, value)
    }

    pub fn sub(&self, x: &ResidueElement, y: &ResidueElement) -> Result<ResidueElement> {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &ResidueElement, y: &ResidueElement) -> Result<ResidueElement> {
        self.check_home(y, &x.home)?;
        let value = match (&x.value, &y.value) {
            (Residue::Poly(_), Residue::Poly(_)) => {
                let q = x.home.as_poly().expect("finite point");
                return Ok(self.from_poly(&x.home, &self.as_poly(x).mul_mod(&self.as_poly(y), q)));
            }
            (Residue::Rational(a), Residue::Rational(b)) => Residue::Rational(a * b),
            (Residue::Cyclo(a), Residue::Cyclo(b)) => Residue::Cyclo(a.mul(b)),
            _ => return Err(UniverseError::Unsupported("mixed residue kinds".into())),
        };
        Ok(self.make(&x.home, value))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: &ResidueElement) -> Option<ResidueElement> {
        let value = match &x.value {
            Residue::Poly(_) => {
                let q = x.home.as_poly().expect("finite point");
                return self
                    .as_poly(x)
                    .inv_mod(q)
                    .map(|r| self.from_poly(&x.home, &r));
            }
            Residue::Rational(a) => Residue::Rational(Field::inv(&crate::field::Rationals, a)?),
            Residue::Cyclo(a) => Residue::Cyclo(a.inv()?),
        };
        Some(self.make(&x.home, value))
    }

    // ---- σ on residues ----

    fn check_edge(&self, from: &MaxIdeal, to: &MaxIdeal) -> Result<()> {
        if &self.down(to) == from {
            Ok(())
        } else {
            Err(UniverseError::NotAnEdge {
                from: from.to_string(),
                to: to.to_string(),
            })
        }
    }

    /// Matrix over 𝔽_p of `r + from ↦ σ(r) + to` in the monomial bases.
    pub fn sigma_matrix(&self, from: &MaxIdeal, to: &MaxIdeal) -> Result<Matrix<u64>> {
        self.check_edge(from, to)?;
        let Backend::FinitePoly { f, .. } = &self.backend else {
            return Err(UniverseError::Unsupported(
                "sigma matrix needs a finite backend".into(),
            ));
        };
        let q_to = self.poly_point(to)?;
        let p = q_to.modulus();
        let cols: Vec<Vec<u64>> = (0..from.degree())
            .map(|j| {
                let mut v = vec![0; j + 1];
                v[j] = 1;
                FpPoly::new(p, v).compose_mod(f, q_to).to_vec(to.degree())
            })
            .collect();
        Ok(Matrix::from_columns(to.degree(), &cols))
    }

    /// Image of `x ∈ R/from` under the residue map induced by `σ`.
    pub fn sigma_residue(
        &self,
        from: &MaxIdeal,
        to: &MaxIdeal,
        x: &ResidueElement,
    ) -> Result<ResidueElement> {
        self.check_edge(from, to)?;
        self.check_home(x, from)?;
        match &self.backend {
            Backend::FinitePoly { f, .. } => {
                let q_to = self.poly_point(to)?;
                Ok(self.from_poly(to, &self.as_poly(x).compose_mod(f, q_to)))
            }
            _ => Ok(self.make(to, x.value.clone())),
        }
    }

    /// Whether the residue map along `from -> to` is surjective.
    pub fn is_essential_edge(&self, from: &MaxIdeal, to: &MaxIdeal) -> Result<bool> {
        match &self.backend {
            Backend::FinitePoly { field, .. } => {
                let m = self.sigma_matrix(from, to)?;
                Ok(m.rank(field) == to.degree())
            }
            _ => {
                self.check_edge(from, to)?;
                Ok(true)
            }
        }
    }

    /// The unique `s + down(to)` with `σ(s) ≡ x (mod to)`.
    pub fn invert_sigma(&self, to: &MaxIdeal, x: &ResidueElement) -> Result<ResidueElement> {
        self.check_home(x, to)?;
        let from = self.down(to);
        match &self.backend {
            Backend::FinitePoly { field, .. } => {
                let m = self.sigma_matrix(&from, to)?;
                if m.rank(field) != to.degree() {
                    return Err(UniverseError::NotEssential {
                        from: from.to_string(),
                        to: to.to_string(),
                    });
                }
                let sol = m.solve(field, &self.to_vector(x)?).expect("surjective map");
                Ok(self.make(&from, Residue::Poly(sol)))
            }
            _ => Ok(self.make(&from, x.value.clone())),
        }
    }
}

fn affine_backend(a: BigRational, b: BigRational, mut t: Vec<BigRational>) -> Result<Backend> {
    while t.len() > 2 && t.last().is_some_and(Zero::is_zero) {
        t.pop();
    }
    if t.len() > 2 {
        return Err(UniverseError::InvalidParameter(
            "affine t must have degree at most 1".into(),
        ));
    }
    let t0 = t.first().cloned().unwrap_or_else(BigRational::zero);
    let t1 = t.get(1).cloned().unwrap_or_else(BigRational::zero);
    Ok(Backend::Affine { a, b, t0, t1 })
}

/// Minimal polynomial over 𝔽_p of `g` in `𝔽_p[h]/(q)`.
fn minimal_polynomial(field: &PrimeField, g: &FpPoly, q: &FpPoly) -> FpPoly {
    let p = field.modulus();
    let d = q.degree().expect("nonzero modulus");
    let mut powers: Vec<Vec<u64>> = vec![FpPoly::one(p).to_vec(d)];
    let mut cur = FpPoly::one(p);
    loop {
        cur = cur.mul_mod(g, q);
        let target = cur.to_vec(d);
        let basis = Matrix::from_columns(d, &powers);
        if let Some(c) = basis.solve(field, &target) {
            let k = powers.len();
            let mut coeffs: Vec<u64> = c.iter().map(|v| field.neg(v)).collect();
            coeffs.resize(k, 0);
            coeffs.push(1);
            return FpPoly::new(p, coeffs);
        }
        powers.push(target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, f: &[i64], t: &[i64]) -> WeightUniverse {
        make_universe(UniverseSpec::FinitePoly {
            p,
            f: f.to_vec(),
            t: t.to_vec(),
        })
        .unwrap()
    }

    fn lin(p: u64, a: i64) -> MaxIdeal {
        MaxIdeal::linear(p, a)
    }

    fn power(n: u64, zdot: ZDot) -> WeightUniverse {
        make_universe(UniverseSpec::PowerMap { n, zdot }).unwrap()
    }

    fn ang(a: i64, b: i64) -> MaxIdeal {
        MaxIdeal::angle(a, b).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            make_universe(UniverseSpec::FinitePoly {
                p: 6,
                f: vec![0, 0, 1],
                t: vec![0, 1]
            }),
            Err(UniverseError::NonPrimeModulus(6))
        );
        assert_eq!(
            make_universe(UniverseSpec::Affine {
                a: BigRational::zero(),
                b: BigRational::one(),
                t: vec![]
            }),
            Err(UniverseError::ZeroLeadingCoefficient)
        );
        assert!(make_universe(UniverseSpec::PowerMap {
            n: 0,
            zdot: ZDot::Outside
        })
        .is_err());
    }

    #[test]
    fn down_over_f5_squaring() {
        let u = fp(5, &[0, 0, 1], &[0, 1]);
        assert_eq!(u.down(&lin(5, 2)), lin(5, 4));
        let q = u.parse_ideal("(h^2-2)").unwrap();
        assert_eq!(u.down(&q), lin(5, 2));
    }

    #[test]
    fn down_identity_map() {
        let u = fp(7, &[0, 1], &[0, 1]);
        for m in [lin(7, 3), u.parse_ideal("(h^2+1)").unwrap()] {
            assert_eq!(u.down(&m), m);
        }
    }

    #[test]
    fn up_over_f5_squaring() {
        let u = fp(5, &[0, 0, 1], &[0, 1]);
        let mut want = vec![lin(5, 2), lin(5, 3)];
        want.sort();
        assert_eq!(u.up(&lin(5, 4), 1), want);
        assert_eq!(u.up(&lin(5, 2), 1), vec![u.parse_ideal("(h^2-2)").unwrap()]);
        for m in u.up(&lin(5, 4), 1) {
            assert_eq!(u.down(&m), lin(5, 4));
        }
    }

    #[test]
    fn power_map_dynamics() {
        let u = power(2, ZDot::Outside);
        assert_eq!(u.down(&ang(1, 4)), ang(1, 2));
        assert_eq!(u.up(&ang(1, 2), 0), vec![ang(1, 4), ang(3, 4)]);
        assert_eq!(u.up(&MaxIdeal::Zero, 0), vec![MaxIdeal::Zero]);
        assert_eq!(
            u.vanishing(&ang(1, 3)),
            Vanishing {
                t_in: false,
                sigma_t_in: false
            }
        );
    }

    #[test]
    fn vanishing_over_f7() {
        let u = fp(7, &[0, 0, 1], &[-2, 1]);
        assert_eq!(
            u.vanishing(&lin(7, 2)),
            Vanishing {
                t_in: true,
                sigma_t_in: false
            }
        );
        assert_eq!(
            u.vanishing(&lin(7, 4)),
            Vanishing {
                t_in: false,
                sigma_t_in: true
            }
        );
    }

    #[test]
    fn sigma_residue_examples() {
        let u = fp(5, &[0, 0, 1], &[0, 1]);
        let (m4, m2) = (lin(5, 4), lin(5, 2));
        let three = u.from_int(&m4, 3);
        assert_eq!(
            u.sigma_residue(&m4, &m2, &three).unwrap(),
            u.from_int(&m2, 3)
        );
        let h = u.h_value(&m4);
        assert_eq!(u.sigma_residue(&m4, &m2, &h).unwrap(), u.from_int(&m2, 4));
        let q = u.parse_ideal("(h^2-2)").unwrap();
        let h2 = u.h_value(&m2);
        assert_eq!(u.sigma_residue(&m2, &q, &h2).unwrap(), u.from_int(&q, 2));
        assert!(matches!(
            u.sigma_residue(&m2, &m4, &h2),
            Err(UniverseError::NotAnEdge { .. })
        ));
    }

    #[test]
    fn essentiality_examples() {
        let u = fp(5, &[0, 0, 1], &[0, 1]);
        assert!(u.is_essential_edge(&lin(5, 4), &lin(5, 2)).unwrap());
        let q = u.parse_ideal("(h^2-2)").unwrap();
        assert!(!u.is_essential_edge(&lin(5, 2), &q).unwrap());
        let c = fp(5, &[2], &[0, 1]);
        let q = c.parse_ideal("(h^2+2)").unwrap();
        assert!(!c.is_essential_edge(&lin(5, 2), &q).unwrap());
        assert!(matches!(
            u.invert_sigma(
                &u.parse_ideal("(h^2-2)").unwrap(),
                &u.one(&u.parse_ideal("(h^2-2)").unwrap())
            ),
            Err(UniverseError::NotEssential { .. })
        ));
    }

    #[test]
    fn invert_sigma_examples() {
        let u = fp(5, &[0, 0, 1], &[0, 1]);
        let m2 = lin(5, 2);
        assert_eq!(
            u.invert_sigma(&m2, &u.from_int(&m2, 3)).unwrap(),
            u.from_int(&lin(5, 4), 3)
        );
        assert_eq!(
            u.invert_sigma(&m2, &u.zero(&m2)).unwrap(),
            u.zero(&lin(5, 4))
        );
        let pm = power(2, ZDot::Outside);
        let x = ResidueElement {
            home: ang(1, 4),
            value: Residue::Cyclo(CycloScalar::from_i64(5)),
        };
        let y = pm.invert_sigma(&ang(1, 4), &x).unwrap();
        assert_eq!(y.home, ang(1, 2));
        assert_eq!(y.value, x.value);
    }

    #[test]
    fn frobenius_fixed_quadratic() {
        // over F_2 with f = h^2, θ ↦ θ^2 is the conjugate root of h^2+h+1
        let u = fp(2, &[0, 0, 1], &[0, 1]);
        let q = u.parse_ideal("(h^2+h+1)").unwrap();
        assert_eq!(u.down(&q), q);
        assert!(u.is_essential_edge(&q, &q).unwrap());
        let h = u.h_value(&q);
        let s = u.sigma_residue(&q, &q, &h).unwrap();
        assert_eq!(s, u.mul(&h, &h).unwrap());
        assert_ne!(s, h);
    }

    #[test]
    fn ideal_rendering_roundtrip() {
        let u = fp(5, &[0, 0, 1], &[0, 1]);
        for s in ["(h-4)", "(h^2+h+2)", "(h)"] {
            assert_eq!(u.parse_ideal(s).unwrap().to_string(), s);
        }
        let pm = power(2, ZDot::Outside);
        for s in ["angle:1/4", "zero", "angle:0"] {
            assert_eq!(pm.parse_ideal(s).unwrap().to_string(), s);
        }
        let af = make_universe(UniverseSpec::Affine {
            a: BigRational::from_integer(2.into()),
            b: BigRational::one(),
            t: vec![BigRational::zero(), BigRational::one()],
        })
        .unwrap();
        assert_eq!(af.parse_ideal("chi:3/2").unwrap().to_string(), "chi:3/2");
        assert_eq!(
            af.down(&af.parse_ideal("chi:3/2").unwrap()).to_string(),
            "chi:4"
        );
        assert!(u.parse_ideal("(h^2-4)").is_err());
    }

    #[test]
    fn power_map_t_values() {
        let u = power(2, ZDot::At(MaxIdeal::Zero));
        assert!(u.t_value(&MaxIdeal::Zero).value == Residue::Cyclo(CycloScalar::zero()));
        assert_eq!(
            u.t_value(&ang(1, 3)).value,
            Residue::Cyclo(CycloScalar::root_of_unity(
                BigRational::one(),
                Angle::new(1, 3).unwrap()
            ))
        );
        assert_eq!(
            u.sigma_t_value(&ang(1, 3)).value,
            u.t_value(&ang(2, 3)).value
        );
    }
}
