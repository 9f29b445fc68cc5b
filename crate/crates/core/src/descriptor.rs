//! Versioned JSON descriptors for universes, modules and reports.
//!
//! Every document carries `"schema": "wgwa/1"`. Ideals are stored in their
//! canonical rendering (`(h-4)`, `angle:1/3`, `zero`, `chi:3/2`), which
//! [`WeightUniverse::parse_ideal`] reads back.

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::band::{
    band_data_from_cycle, build_band, BandError, BandModule, BandVariant, PModuleData,
};
use crate::classify::{
    BandFamily, CatalogueItem, CatalogueReport, ClassificationReport, ItemContent, SimpleVerdict,
    StringFamily,
};
use crate::dynamics::{ClassKind, OrbitReport};
use crate::field::{format_rational, parse_rational, PrimeField, Rationals};
use crate::linalg::Matrix;
use crate::oracle::{FiniteModule, Realization};
use crate::scalar::CycloScalar;
use crate::string::{build_string, StringError, StringKind, StringModule, TailCertificate};
use crate::universe::{
    MaxIdeal, Residue, ResidueElement, UniverseError, UniverseSpec, WeightUniverse, ZDot,
};

pub const SCHEMA: &str = "wgwa/1";

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}, expected {SCHEMA:?}")]
    Schema(String),
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Band(#[from] BandError),
}

pub type Result<T> = std::result::Result<T, DescriptorError>;

fn invalid(msg: impl Into<String>) -> DescriptorError {
    DescriptorError::Invalid(msg.into())
}

fn schema() -> String {
    SCHEMA.to_string()
}

/// Documents that carry a schema tag.
pub trait Versioned {
    fn schema(&self) -> &str;
}

macro_rules! versioned {
    ($($t:ty),*) => {$(
        impl Versioned for $t {
            fn schema(&self) -> &str {
                &self.schema
            }
        }
    )*};
}

/// Parses a document and checks its schema tag.
pub fn from_json<T: DeserializeOwned + Versioned>(text: &str) -> Result<T> {
    let doc: T = serde_json::from_str(text)?;
    if doc.schema() != SCHEMA {
        return Err(DescriptorError::Schema(doc.schema().to_string()));
    }
    Ok(doc)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("descriptors always serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum UniverseDescriptor {
    FinitePoly {
        p: u64,
        f: Vec<i64>,
        t: Vec<i64>,
    },
    /// `zdot` is the point where `t` vanishes, or `null`.
    PowerMap {
        n: u64,
        zdot: Option<String>,
    },
    Affine {
        a: String,
        b: String,
        t: Vec<String>,
    },
    Constant {
        theta: String,
        t: Vec<String>,
    },
}

impl UniverseDescriptor {
    pub fn from_spec(spec: &UniverseSpec) -> Self {
        let rats = |v: &[BigRational]| v.iter().map(format_rational).collect();
        match spec {
            UniverseSpec::FinitePoly { p, f, t } => UniverseDescriptor::FinitePoly {
                p: *p,
                f: f.clone(),
                t: t.clone(),
            },
            UniverseSpec::PowerMap { n, zdot } => UniverseDescriptor::PowerMap {
                n: *n,
                zdot: match zdot {
                    ZDot::Outside => None,
                    ZDot::At(m) => Some(m.to_string()),
                },
            },
            UniverseSpec::Affine { a, b, t } => UniverseDescriptor::Affine {
                a: format_rational(a),
                b: format_rational(b),
                t: rats(t),
            },
            UniverseSpec::Constant { theta, t } => UniverseDescriptor::Constant {
                theta: format_rational(theta),
                t: rats(t),
            },
        }
    }

    pub fn of(u: &WeightUniverse) -> Self {
        Self::from_spec(&u.spec())
    }

    pub fn to_spec(&self) -> Result<UniverseSpec> {
        let rat = |s: &str| parse_rational(s).ok_or_else(|| invalid(format!("bad rational {s:?}")));
        let rats = |v: &[String]| v.iter().map(|s| rat(s)).collect::<Result<Vec<_>>>();
        Ok(match self {
            UniverseDescriptor::FinitePoly { p, f, t } => UniverseSpec::FinitePoly {
                p: *p,
                f: f.clone(),
                t: t.clone(),
            },
            UniverseDescriptor::PowerMap { n, zdot } => {
                let zdot = match zdot {
                    None => ZDot::Outside,
                    Some(s) => {
                        // parse against a universe without zeros, then attach
                        let probe = WeightUniverse::new(UniverseSpec::PowerMap {
                            n: *n,
                            zdot: ZDot::Outside,
                        })?;
                        ZDot::At(probe.parse_ideal(s)?)
                    }
                };
                UniverseSpec::PowerMap { n: *n, zdot }
            }
            UniverseDescriptor::Affine { a, b, t } => UniverseSpec::Affine {
                a: rat(a)?,
                b: rat(b)?,
                t: rats(t)?,
            },
            UniverseDescriptor::Constant { theta, t } => UniverseSpec::Constant {
                theta: rat(theta)?,
                t: rats(t)?,
            },
        })
    }

    pub fn universe(&self) -> Result<WeightUniverse> {
        Ok(WeightUniverse::new(self.to_spec()?)?)
    }
}

fn render_ideals(v: &[MaxIdeal]) -> Vec<String> {
    v.iter().map(MaxIdeal::to_string).collect()
}

fn parse_ideals(u: &WeightUniverse, v: &[String]) -> Result<Vec<MaxIdeal>> {
    v.iter().map(|s| Ok(u.parse_ideal(s)?)).collect()
}

/// A scalar entry: an integer mod `p`, a coefficient vector over 𝔽_p for
/// larger residue fields, or a rational written as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(u64),
    Coeffs(Vec<u64>),
    Text(String),
}

fn residue_entry(x: &ResidueElement) -> Result<Entry> {
    Ok(match &x.value {
        Residue::Poly(v) if v.len() == 1 => Entry::Int(v[0]),
        Residue::Poly(v) => Entry::Coeffs(v.clone()),
        Residue::Rational(q) => Entry::Text(format_rational(q)),
        Residue::Cyclo(c) => match c.as_rational() {
            Some(q) => Entry::Text(format_rational(&q)),
            None => return Err(invalid(format!("scalar {c} has no exact JSON form"))),
        },
    })
}

fn entry_residue(u: &WeightUniverse, at: &MaxIdeal, e: &Entry) -> Result<ResidueElement> {
    let rational =
        |s: &str| parse_rational(s).ok_or_else(|| invalid(format!("bad rational {s:?}")));
    match (u.spec(), e) {
        (UniverseSpec::FinitePoly { .. }, Entry::Int(v)) => Ok(u.from_vector(at, &[*v])?),
        (UniverseSpec::FinitePoly { .. }, Entry::Coeffs(v)) => Ok(u.from_vector(at, v)?),
        (UniverseSpec::PowerMap { .. }, Entry::Text(s)) => Ok(ResidueElement {
            home: at.clone(),
            value: Residue::Cyclo(CycloScalar::rational(rational(s)?)),
        }),
        (UniverseSpec::Affine { .. } | UniverseSpec::Constant { .. }, Entry::Text(s)) => {
            Ok(ResidueElement {
                home: at.clone(),
                value: Residue::Rational(rational(s)?),
            })
        }
        (_, Entry::Int(v)) => Ok(u.from_int(
            at,
            i64::try_from(*v).map_err(|_| invalid("entry too large"))?,
        )),
        _ => Err(invalid(format!("entry {e:?} does not fit this universe"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindTag {
    DoubleInfinite,
    RightInfinite,
    LeftInfinite,
    Bounded,
}

fn kind_parts(kind: StringKind) -> (KindTag, Option<usize>) {
    match kind {
        StringKind::DoubleInfinite => (KindTag::DoubleInfinite, None),
        StringKind::RightInfinite => (KindTag::RightInfinite, None),
        StringKind::LeftInfinite => (KindTag::LeftInfinite, None),
        StringKind::Bounded(n) => (KindTag::Bounded, Some(n)),
    }
}

fn kind_from_parts(tag: KindTag, n: Option<usize>) -> Result<StringKind> {
    Ok(match (tag, n) {
        (KindTag::DoubleInfinite, None) => StringKind::DoubleInfinite,
        (KindTag::RightInfinite, None) => StringKind::RightInfinite,
        (KindTag::LeftInfinite, None) => StringKind::LeftInfinite,
        (KindTag::Bounded, Some(n)) => StringKind::Bounded(n),
        (KindTag::Bounded, None) => return Err(invalid("bounded strings need n")),
        (_, Some(_)) => return Err(invalid("only bounded strings take n")),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateDescriptor {
    Periodic(usize),
    EventuallyConstantTail,
    DistinctTail,
}

impl From<TailCertificate> for CertificateDescriptor {
    fn from(c: TailCertificate) -> Self {
        match c {
            TailCertificate::Periodic(k) => CertificateDescriptor::Periodic(k),
            TailCertificate::EventuallyConstantTail => {
                CertificateDescriptor::EventuallyConstantTail
            }
            TailCertificate::DistinctTail => CertificateDescriptor::DistinctTail,
        }
    }
}

impl From<CertificateDescriptor> for TailCertificate {
    fn from(c: CertificateDescriptor) -> Self {
        match c {
            CertificateDescriptor::Periodic(k) => TailCertificate::Periodic(k),
            CertificateDescriptor::EventuallyConstantTail => {
                TailCertificate::EventuallyConstantTail
            }
            CertificateDescriptor::DistinctTail => TailCertificate::DistinctTail,
        }
    }
}

/// A string module: kind, stored window and what is known above it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringDescriptor {
    #[serde(default = "schema")]
    pub schema: String,
    pub universe: UniverseDescriptor,
    pub kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub lo: i64,
    pub window: Vec<String>,
    #[serde(default)]
    pub certificate: Option<CertificateDescriptor>,
}

impl StringDescriptor {
    pub fn from_module(m: &StringModule) -> Self {
        let (kind, n) = kind_parts(m.kind());
        StringDescriptor {
            schema: schema(),
            universe: UniverseDescriptor::of(m.universe()),
            kind,
            n,
            lo: m.lo(),
            window: render_ideals(m.window()),
            certificate: m.certificate().map(Into::into),
        }
    }

    pub fn to_module(&self) -> Result<StringModule> {
        let u = self.universe.universe()?;
        let kind = kind_from_parts(self.kind, self.n)?;
        let window = parse_ideals(&u, &self.window)?;
        Ok(build_string(&u, kind, self.lo, window)?
            .with_certificate(self.certificate.map(Into::into)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VariantTag {
    M,
    N,
}

impl From<BandVariant> for VariantTag {
    fn from(v: BandVariant) -> Self {
        match v {
            BandVariant::M => VariantTag::M,
            BandVariant::N => VariantTag::N,
        }
    }
}

impl From<VariantTag> for BandVariant {
    fn from(v: VariantTag) -> Self {
        match v {
            VariantTag::M => BandVariant::M,
            VariantTag::N => BandVariant::N,
        }
    }
}

/// A band module: the cycle `c_0, …, c_{k-1}` (with `down(c_{i+1}) = c_i`),
/// the matrix `alpha` over the residue field at `c_0`, and the variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandDescriptor {
    #[serde(default = "schema")]
    pub schema: String,
    pub universe: UniverseDescriptor,
    pub cycle: Vec<String>,
    pub k: usize,
    pub dim: usize,
    pub alpha: Vec<Vec<Entry>>,
    pub variant: VariantTag,
}

impl BandDescriptor {
    pub fn from_module(m: &BandModule) -> Result<Self> {
        let alpha = m
            .pmodule()
            .alpha
            .iter()
            .map(|row| row.iter().map(residue_entry).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BandDescriptor {
            schema: schema(),
            universe: UniverseDescriptor::of(m.universe()),
            cycle: render_ideals(m.cycle()),
            k: m.period(),
            dim: m.dim(),
            alpha,
            variant: m.variant().into(),
        })
    }

    pub fn to_module(&self) -> Result<BandModule> {
        let u = self.universe.universe()?;
        let cycle = parse_ideals(&u, &self.cycle)?;
        if cycle.len() != self.k {
            return Err(invalid(format!(
                "k = {} but the cycle has {} points",
                self.k,
                cycle.len()
            )));
        }
        if self.alpha.len() != self.dim || self.alpha.iter().any(|r| r.len() != self.dim) {
            return Err(invalid(format!("alpha must be {0}x{0}", self.dim)));
        }
        let data = band_data_from_cycle(&u, cycle)?;
        let c0 = data.cycle()[0].clone();
        let alpha = self
            .alpha
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| entry_residue(&u, &c0, e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(build_band(
            &data,
            &PModuleData { alpha },
            self.variant.into(),
        )?)
    }
}

/// Row-major matrices of a finite-dimensional module. Over 𝔽_p entries are
/// integers in `[0, p)`; over ℚ (`p = 0`) they are rationals as text.
/// `f` and `t` are coefficient lists, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    #[serde(default = "schema")]
    pub schema: String,
    pub p: u64,
    pub dim: usize,
    #[serde(rename = "H")]
    pub h: Vec<Vec<Entry>>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<Entry>>,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<Entry>>,
    pub f: Vec<Entry>,
    pub t: Vec<Entry>,
}

fn prime_rows(m: &Matrix<u64>) -> Vec<Vec<Entry>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Entry::Int).collect())
        .collect()
}

fn rational_rows(m: &Matrix<BigRational>) -> Vec<Vec<Entry>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.iter().map(|q| Entry::Text(format_rational(q))).collect())
        .collect()
}

fn prime_entry(field: &PrimeField, e: &Entry) -> Result<u64> {
    match e {
        Entry::Int(v) if *v < field.modulus() => Ok(*v),
        Entry::Int(v) => Err(invalid(format!(
            "entry {v} not in [0, {})",
            field.modulus()
        ))),
        Entry::Text(s) => s
            .trim()
            .parse::<i64>()
            .map(|v| field.reduce_i64(v))
            .map_err(|_| invalid(format!("bad entry {s:?}"))),
        Entry::Coeffs(_) => Err(invalid("matrix entries must be scalars")),
    }
}

fn rational_entry(e: &Entry) -> Result<BigRational> {
    match e {
        Entry::Int(v) => Ok(BigRational::from_integer((*v).into())),
        Entry::Text(s) => parse_rational(s).ok_or_else(|| invalid(format!("bad rational {s:?}"))),
        Entry::Coeffs(_) => Err(invalid("matrix entries must be scalars")),
    }
}

fn square<E: Clone>(rows: Vec<Vec<E>>, dim: usize, name: &str) -> Result<Matrix<E>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(invalid(format!("{name} must be {dim}x{dim}")));
    }
    if dim == 0 {
        return Ok(Matrix::from_fn(0, 0, |_, _| unreachable!()));
    }
    Matrix::from_rows(rows).ok_or_else(|| invalid(format!("{name} is ragged")))
}

impl MatrixDump {
    pub fn from_realization(r: &Realization) -> Self {
        match r {
            Realization::Prime(fm) => MatrixDump {
                schema: schema(),
                p: fm.field.modulus(),
                dim: fm.dim,
                h: prime_rows(&fm.h),
                x: prime_rows(&fm.x),
                y: prime_rows(&fm.y),
                f: fm.f.iter().copied().map(Entry::Int).collect(),
                t: fm.t.iter().copied().map(Entry::Int).collect(),
            },
            Realization::Rational(fm) => MatrixDump {
                schema: schema(),
                p: 0,
                dim: fm.dim,
                h: rational_rows(&fm.h),
                x: rational_rows(&fm.x),
                y: rational_rows(&fm.y),
                f: fm
                    .f
                    .iter()
                    .map(|q| Entry::Text(format_rational(q)))
                    .collect(),
                t: fm
                    .t
                    .iter()
                    .map(|q| Entry::Text(format_rational(q)))
                    .collect(),
            },
        }
    }

    pub fn to_realization(&self) -> Result<Realization> {
        if self.p == 0 {
            let conv = |m: &[Vec<Entry>], name| {
                let rows = m
                    .iter()
                    .map(|r| r.iter().map(rational_entry).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                square(rows, self.dim, name)
            };
            let poly = |v: &[Entry]| v.iter().map(rational_entry).collect::<Result<Vec<_>>>();
            return Ok(Realization::Rational(FiniteModule {
                field: Rationals,
                dim: self.dim,
                h: conv(&self.h, "H")?,
                x: conv(&self.x, "X")?,
                y: conv(&self.y, "Y")?,
                f: poly(&self.f)?,
                t: poly(&self.t)?,
            }));
        }
        let field = PrimeField::new(self.p)
            .ok_or_else(|| invalid(format!("{} is not a supported prime", self.p)))?;
        let conv = |m: &[Vec<Entry>], name| {
            let rows = m
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| prime_entry(&field, e))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            square(rows, self.dim, name)
        };
        let poly = |v: &[Entry]| {
            v.iter()
                .map(|e| prime_entry(&field, e))
                .collect::<Result<Vec<_>>>()
        };
        Ok(Realization::Prime(FiniteModule {
            field,
            dim: self.dim,
            h: conv(&self.h, "H")?,
            x: conv(&self.x, "X")?,
            y: conv(&self.y, "Y")?,
            f: poly(&self.f)?,
            t: poly(&self.t)?,
        }))
    }
}

/// A `down`-orbit: the tail (starting at the seed) and the cycle it enters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDescriptor {
    #[serde(default = "schema")]
    pub schema: String,
    pub universe: UniverseDescriptor,
    pub start: String,
    pub tail: Vec<String>,
    pub cycle: Vec<String>,
    pub steps_used: usize,
}

impl OrbitDescriptor {
    pub fn new(u: &WeightUniverse, start: &MaxIdeal, orbit: &OrbitReport) -> Self {
        OrbitDescriptor {
            schema: schema(),
            universe: UniverseDescriptor::of(u),
            start: start.to_string(),
            tail: render_ideals(&orbit.tail),
            cycle: render_ideals(&orbit.cycle),
            steps_used: orbit.steps_used,
        }
    }

    pub fn to_report(&self) -> Result<OrbitReport> {
        let u = self.universe.universe()?;
        Ok(OrbitReport {
            tail: parse_ideals(&u, &self.tail)?,
            cycle: parse_ideals(&u, &self.cycle)?,
            steps_used: self.steps_used,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassKindDescriptor {
    Rooted { root: String },
    Unrooted,
    Undetermined { budget: usize },
}

impl From<&ClassKind> for ClassKindDescriptor {
    fn from(k: &ClassKind) -> Self {
        match k {
            ClassKind::Rooted { root } => ClassKindDescriptor::Rooted {
                root: root.to_string(),
            },
            ClassKind::Unrooted => ClassKindDescriptor::Unrooted,
            ClassKind::Undetermined { budget } => {
                ClassKindDescriptor::Undetermined { budget: *budget }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictDescriptor {
    Simple,
    NotSimple,
    Undetermined(String),
}

impl From<&SimpleVerdict> for VerdictDescriptor {
    fn from(v: &SimpleVerdict) -> Self {
        match v {
            SimpleVerdict::Simple => VerdictDescriptor::Simple,
            SimpleVerdict::NotSimple => VerdictDescriptor::NotSimple,
            SimpleVerdict::Undetermined(w) => VerdictDescriptor::Undetermined(w.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryDescriptor {
    pub point: String,
    pub t_in: bool,
    pub sigma_t_in: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringFamilyDescriptor {
    pub kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub shape: String,
    pub lo: i64,
    pub window: Vec<String>,
    pub certificate: Option<CertificateDescriptor>,
    pub verdict: VerdictDescriptor,
    pub repeats_with_period: Option<usize>,
}

impl From<&StringFamily> for StringFamilyDescriptor {
    fn from(s: &StringFamily) -> Self {
        let (kind, n) = kind_parts(s.kind);
        StringFamilyDescriptor {
            kind,
            n,
            shape: s.shape(),
            lo: s.lo,
            window: render_ideals(&s.window),
            certificate: s.certificate.map(Into::into),
            verdict: (&s.verdict).into(),
            repeats_with_period: s.repeats_with_period,
        }
    }
}

impl StringFamilyDescriptor {
    /// The representative string module, over the given universe.
    pub fn to_module(&self, u: &WeightUniverse) -> Result<StringModule> {
        let kind = kind_from_parts(self.kind, self.n)?;
        let window = parse_ideals(u, &self.window)?;
        Ok(build_string(u, kind, self.lo, window)?
            .with_certificate(self.certificate.map(Into::into)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandFamilyDescriptor {
    pub cycle: Vec<String>,
    pub k: usize,
    pub residue_degree: usize,
    pub sigma_bar_order: usize,
    pub variants: Vec<VariantTag>,
    pub m_iso_n_possible: bool,
    pub parameterization: String,
}

impl From<&BandFamily> for BandFamilyDescriptor {
    fn from(b: &BandFamily) -> Self {
        BandFamilyDescriptor {
            cycle: render_ideals(&b.cycle),
            k: b.period(),
            residue_degree: b.residue_degree,
            sigma_bar_order: b.sigma_bar_order,
            variants: b.variants.iter().map(|&v| v.into()).collect(),
            m_iso_n_possible: b.m_iso_n_possible,
            parameterization: b.parameterization.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDescriptor {
    #[serde(default = "schema")]
    pub schema: String,
    pub universe: UniverseDescriptor,
    pub seed: String,
    pub class_kind: ClassKindDescriptor,
    pub orbit: OrbitDescriptor,
    pub boundary: Vec<BoundaryDescriptor>,
    pub string_families: Vec<StringFamilyDescriptor>,
    pub band_families: Vec<BandFamilyDescriptor>,
    pub dead_points: Vec<String>,
    pub truncated: bool,
    pub notes: Vec<String>,
}

impl ClassificationDescriptor {
    pub fn new(u: &WeightUniverse, r: &ClassificationReport) -> Self {
        ClassificationDescriptor {
            schema: schema(),
            universe: UniverseDescriptor::of(u),
            seed: r.seed.to_string(),
            class_kind: (&r.class_kind).into(),
            orbit: OrbitDescriptor::new(u, &r.seed, &r.orbit),
            boundary: r
                .boundary
                .iter()
                .map(|b| BoundaryDescriptor {
                    point: b.point.to_string(),
                    t_in: b.t_in,
                    sigma_t_in: b.sigma_t_in,
                })
                .collect(),
            string_families: r.string_families.iter().map(Into::into).collect(),
            band_families: r.band_families.iter().map(Into::into).collect(),
            dead_points: render_ideals(&r.dead_points),
            truncated: r.truncated,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CatalogueEntry {
    String {
        label: String,
        #[serde(flatten)]
        family: StringFamilyDescriptor,
    },
    Band {
        label: String,
        cycle: Vec<String>,
        variant: VariantTag,
        alpha: String,
        x_action: String,
        y_action: String,
    },
}

impl From<&CatalogueItem> for CatalogueEntry {
    fn from(item: &CatalogueItem) -> Self {
        match &item.content {
            ItemContent::String(s) => CatalogueEntry::String {
                label: item.label.clone(),
                family: s.into(),
            },
            ItemContent::Band {
                cycle,
                variant,
                alpha,
                x_action,
                y_action,
            } => CatalogueEntry::Band {
                label: item.label.clone(),
                cycle: render_ideals(cycle),
                variant: (*variant).into(),
                alpha: alpha.clone(),
                x_action: x_action.clone(),
                y_action: y_action.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueDescriptor {
    #[serde(default = "schema")]
    pub schema: String,
    pub universe: UniverseDescriptor,
    pub items: Vec<CatalogueEntry>,
    pub notes: Vec<String>,
}

impl From<&CatalogueReport> for CatalogueDescriptor {
    fn from(r: &CatalogueReport) -> Self {
        CatalogueDescriptor {
            schema: schema(),
            universe: UniverseDescriptor::from_spec(&r.universe),
            items: r.items.iter().map(Into::into).collect(),
            notes: r.notes.clone(),
        }
    }
}

/// Machine-readable error output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDescriptor {
    #[serde(default = "schema")]
    pub schema: String,
    pub error: String,
    pub message: String,
}

impl ErrorDescriptor {
    pub fn new(error: impl Into<String>, message: impl Into<String>) -> Self {
        ErrorDescriptor {
            schema: schema(),
            error: error.into(),
            message: message.into(),
        }
    }
}

/// Relation check result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDescriptor {
    #[serde(default = "schema")]
    pub schema: String,
    pub ok: bool,
    pub violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple: Option<String>,
}

versioned!(
    StringDescriptor,
    BandDescriptor,
    MatrixDump,
    OrbitDescriptor,
    ClassificationDescriptor,
    CatalogueDescriptor,
    ErrorDescriptor,
    RelationDescriptor
);

/// Reads a string module descriptor.
pub fn read_string(text: &str) -> Result<StringModule> {
    from_json::<StringDescriptor>(text)?.to_module()
}

/// Reads a band module descriptor.
pub fn read_band(text: &str) -> Result<BandModule> {
    from_json::<BandDescriptor>(text)?.to_module()
}

/// Reads a matrix dump.
pub fn read_matrices(text: &str) -> Result<Realization> {
    from_json::<MatrixDump>(text)?.to_realization()
}
