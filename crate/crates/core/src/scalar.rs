//! Exact scalars for the one-dimensional residue fields of the power-map
//! backend.
//!
//! Points there are roots of unity `e^{2πiq}` (stored as the angle `q`) or
//! zero. Residue values are never expanded into cyclotomic fields: a nonzero
//! value is a monomial `c · ζ^q · ∏ t(x)^{e_x}`, where `t(x)` is the formal
//! (known nonzero) value of `t` at a point `x` that has no closed form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::format_rational;
use crate::universe::MaxIdeal;

/// A rational angle in `[0, 1)`, standing for the root of unity `e^{2πiq}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    num: i64,
    den: i64,
}

impl Angle {
    /// Reduces `num/den` modulo 1; `None` for a non-positive denominator.
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den <= 0 {
            return None;
        }
        let n = num.rem_euclid(den);
        let g = n.gcd(&den).max(1);
        Some(Angle {
            num: n / g,
            den: den / g,
        })
    }

    pub fn zero() -> Self {
        Angle { num: 0, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn add(&self, other: &Angle) -> Angle {
        let den = (self.den as i128) * (other.den as i128);
        let num =
            (self.num as i128) * (other.den as i128) + (other.num as i128) * (self.den as i128);
        Angle::from_i128(num, den)
    }

    pub fn neg(&self) -> Angle {
        Angle::new(-self.num, self.den).expect("positive denominator")
    }

    /// `n · q mod 1`.
    pub fn times(&self, n: u64) -> Angle {
        Angle::from_i128((self.num as i128) * (n as i128), self.den as i128)
    }

    /// The `n` solutions of `n · x ≡ q (mod 1)`, in increasing order.
    pub fn preimages(&self, n: u64) -> Vec<Angle> {
        let den = (self.den as i128) * (n as i128);
        let mut out: Vec<Angle> = (0..n as i128)
            .map(|k| Angle::from_i128(self.num as i128 + k * self.den as i128, den))
            .collect();
        out.sort();
        out
    }

    fn from_i128(num: i128, den: i128) -> Angle {
        let n = num.rem_euclid(den);
        let g = n.gcd(&den).max(1);
        Angle {
            num: i64::try_from(n / g).expect("angle numerator fits in i64"),
            den: i64::try_from(den / g).expect("angle denominator fits in i64"),
        }
    }
}

/// Ordered by `(numerator, denominator)`.
impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num, self.den).cmp(&(other.num, other.den))
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({self})")
    }
}

/// Nonzero monomial `coeff · ζ^root · ∏ t(x)^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    coeff: BigRational,
    root: Angle,
    symbols: BTreeMap<MaxIdeal, i64>,
}

/// An exact residue value at a power-map point; `None` is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloScalar(Option<Monomial>);

impl CycloScalar {
    pub fn zero() -> Self {
        CycloScalar(None)
    }

    pub fn one() -> Self {
        CycloScalar::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        if q.is_zero() {
            return CycloScalar(None);
        }
        CycloScalar(Some(Monomial {
            coeff: q,
            root: Angle::zero(),
            symbols: BTreeMap::new(),
        }))
    }

    pub fn from_i64(v: i64) -> Self {
        CycloScalar::rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `coeff · e^{2πi·angle}`.
    pub fn root_of_unity(coeff: BigRational, angle: Angle) -> Self {
        if coeff.is_zero() {
            return CycloScalar(None);
        }
        CycloScalar(Some(Monomial {
            coeff,
            root: angle,
            symbols: BTreeMap::new(),
        }))
    }

    /// The formal nonzero value `t(point)`.
    pub fn symbol(point: MaxIdeal) -> Self {
        CycloScalar(Some(Monomial {
            coeff: BigRational::one(),
            root: Angle::zero(),
            symbols: BTreeMap::from([(point, 1)]),
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    /// The rational value, when the scalar has no root or symbol part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.0 {
            None => Some(BigRational::zero()),
            Some(m) if m.root == Angle::zero() && m.symbols.is_empty() => Some(m.coeff.clone()),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (Some(a), Some(b)) = (&self.0, &other.0) else {
            return CycloScalar(None);
        };
        let mut symbols = a.symbols.clone();
        for (k, e) in &b.symbols {
            let entry = symbols.entry(k.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                symbols.remove(k);
            }
        }
        CycloScalar(Some(Monomial {
            coeff: &a.coeff * &b.coeff,
            root: a.root.add(&b.root),
            symbols,
        }))
    }

    pub fn inv(&self) -> Option<Self> {
        let m = self.0.as_ref()?;
        Some(CycloScalar(Some(Monomial {
            coeff: m.coeff.recip(),
            root: m.root.neg(),
            symbols: m.symbols.iter().map(|(k, e)| (k.clone(), -e)).collect(),
        })))
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            None => CycloScalar(None),
            Some(m) => CycloScalar(Some(Monomial {
                coeff: -m.coeff.clone(),
                ..m.clone()
            })),
        }
    }

    /// Sum, defined when one side is zero or both share root and symbol part.
    pub fn add(&self, other: &Self) -> Option<Self> {
        match (&self.0, &other.0) {
            (None, _) => Some(other.clone()),
            (_, None) => Some(self.clone()),
            (Some(a), Some(b)) if a.root == b.root && a.symbols == b.symbols => {
                let coeff = &a.coeff + &b.coeff;
                if coeff.is_zero() {
                    Some(CycloScalar(None))
                } else {
                    Some(CycloScalar(Some(Monomial { coeff, ..a.clone() })))
                }
            }
            _ => None,
        }
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(m) = &self.0 else {
            return f.write_str("0");
        };
        let mut parts = Vec::new();
        let bare = m.root == Angle::zero() && m.symbols.is_empty();
        if bare || !m.coeff.is_one() {
            parts.push(format_rational(&m.coeff));
        }
        if m.root != Angle::zero() {
            parts.push(format!("zeta^({})", m.root));
        }
        for (k, e) in &m.symbols {
            if *e == 1 {
                parts.push(format!("t[{k}]"));
            } else {
                parts.push(format!("t[{k}]^{e}"));
            }
        }
        f.write_str(&parts.join("*"))
    }
}
