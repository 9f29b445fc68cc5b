//! Classification reports for the class of a point, and catalogues for
//! generalized Heisenberg algebras `H(f)` with central character `ż`.
//!
//! Every simple weight module is a string module or a band module, so a
//! report lists string families (one representative window each) and band
//! families on the cycle of the class, with a simplicity verdict for each.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::band::{
    band_data_from_cycle, build_band, BandData, BandError, BandVariant, PModuleData,
};
use crate::dynamics::{class_kind, forward_orbit, ClassKind, OrbitReport};
use crate::field::format_rational;
use crate::scalar::Angle;
use crate::string::{
    build_string, string_is_simple, StringError, StringKind, StringModule, TailCertificate,
};
use crate::universe::{make_universe, MaxIdeal, UniverseError, UniverseSpec, WeightUniverse, ZDot};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyBounds {
    /// `down` steps allowed when computing the orbit.
    pub orbit_steps: usize,
    /// Height of the explored `up`-tree above the seed.
    pub up_depth: usize,
    /// Degree cap for `up` when `f` is constant over 𝔽_p.
    pub degree_bound: usize,
    /// Stop after this many string families.
    pub max_families: usize,
}

impl Default for ClassifyBounds {
    fn default() -> Self {
        ClassifyBounds {
            orbit_steps: 10_000,
            up_depth: 3,
            degree_bound: 1,
            max_families: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimpleVerdict {
    Simple,
    NotSimple,
    Undetermined(String),
}

impl fmt::Display for SimpleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleVerdict::Simple => f.write_str("simple"),
            SimpleVerdict::NotSimple => f.write_str("not simple"),
            SimpleVerdict::Undetermined(why) => write!(f, "undetermined ({why})"),
        }
    }
}

/// Where `t` or `σ(t)` vanishes along the orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMark {
    pub point: MaxIdeal,
    pub t_in: bool,
    pub sigma_t_in: bool,
}

/// A string module given by a representative window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringFamily {
    pub kind: StringKind,
    pub lo: i64,
    pub window: Vec<MaxIdeal>,
    pub certificate: Option<TailCertificate>,
    pub verdict: SimpleVerdict,
    /// Set when the chain below the top runs around a cycle free of zeros of
    /// `t`, so longer strings repeat this one with the given period.
    pub repeats_with_period: Option<usize>,
}

impl StringFamily {
    /// Index shape of the support: `∞Q∞`, `Q∞`, `∞Q` or `Q_n`.
    pub fn shape(&self) -> String {
        match self.kind {
            StringKind::DoubleInfinite => "inf-Q-inf".into(),
            StringKind::RightInfinite => "Q-inf".into(),
            StringKind::LeftInfinite => "inf-Q".into(),
            StringKind::Bounded(n) => format!("Q_{n}"),
        }
    }

    pub fn module(&self, u: &WeightUniverse) -> Result<StringModule, StringError> {
        Ok(build_string(u, self.kind, self.lo, self.window.clone())?
            .with_certificate(self.certificate))
    }
}

/// Band modules on a cycle, with one-dimensional data `alpha = c` as parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandFamily {
    pub cycle: Vec<MaxIdeal>,
    pub residue_degree: usize,
    pub sigma_bar_order: usize,
    /// `[M]` when `t` avoids the cycle (then `M ≅ N` for matching data), `[M, N]` otherwise.
    pub variants: Vec<BandVariant>,
    /// Whether `M`- and `N`-modules can be isomorphic (no zero of `t` on the cycle).
    pub m_iso_n_possible: bool,
    pub parameterization: String,
}

impl BandFamily {
    pub fn period(&self) -> usize {
        self.cycle.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub seed: MaxIdeal,
    pub class_kind: ClassKind,
    pub orbit: OrbitReport,
    pub boundary: Vec<BoundaryMark>,
    pub string_families: Vec<StringFamily>,
    pub band_families: Vec<BandFamily>,
    /// Explored points no weight module can have in its support.
    pub dead_points: Vec<MaxIdeal>,
    /// Some search was cut short by a bound.
    pub truncated: bool,
    pub notes: Vec<String>,
}

/// Explores the class of `m` and reports its string and band families.
pub fn classify_point(
    u: &WeightUniverse,
    m: &MaxIdeal,
    bounds: &ClassifyBounds,
) -> ClassificationReport {
    let mut notes = Vec::new();
    let mut truncated = false;
    let orbit = forward_orbit(u, m, bounds.orbit_steps);
    if !orbit.is_complete() {
        truncated = true;
        notes.push(format!(
            "orbit did not close within {} steps",
            bounds.orbit_steps
        ));
    }
    let boundary: Vec<BoundaryMark> = orbit
        .points()
        .filter_map(|x| {
            let v = u.vanishing(x);
            (v.t_in || v.sigma_t_in).then(|| BoundaryMark {
                point: x.clone(),
                t_in: v.t_in,
                sigma_t_in: v.sigma_t_in,
            })
        })
        .collect();

    let up_of = |x: &MaxIdeal| u.up(x, bounds.degree_bound.max(x.degree()));
    // up-tree above the seed, plus the orbit below it
    let mut region: BTreeSet<MaxIdeal> = orbit.points().cloned().collect();
    let mut queue = VecDeque::from([(m.clone(), 0usize)]);
    let mut seen = BTreeSet::from([m.clone()]);
    while let Some((x, depth)) = queue.pop_front() {
        region.insert(x.clone());
        if depth >= bounds.up_depth {
            continue;
        }
        if u.up_is_truncated(&x) {
            truncated = true;
            notes.push(format!(
                "up({x}) is infinite; only degrees <= {} explored",
                bounds.degree_bound
            ));
        }
        for y in up_of(&x) {
            if seen.insert(y.clone()) {
                queue.push_back((y, depth + 1));
            }
        }
    }
    let dead_points: Vec<MaxIdeal> = region
        .iter()
        .filter(|x| !u.vanishing(x).t_in && !u.up_is_truncated(x) && up_of(x).is_empty())
        .cloned()
        .collect();

    let mut families = FamilyList::new(bounds.max_families);
    for x in &region {
        if u.vanishing(x).t_in {
            downward_families(u, x, bounds, &mut families, &mut notes);
        }
    }
    for x in &region {
        let v = u.vanishing(x);
        if v.sigma_t_in && !v.t_in {
            for path in upward_paths(u, x, bounds) {
                if path.len() != bounds.up_depth + 1 || path.iter().any(|p| u.vanishing(p).t_in) {
                    continue;
                }
                if !continues_upward(u, path.last().expect("nonempty"), bounds, true) {
                    continue;
                }
                families.push_built(u, StringKind::RightInfinite, 0, path, None);
            }
        }
    }
    double_infinite_families(u, m, &orbit, bounds, &mut families);
    truncated |= families.overflow;
    if families.overflow {
        notes.push(format!(
            "stopped after {} string families",
            bounds.max_families
        ));
    }

    let mut band_families = Vec::new();
    if orbit.is_complete() {
        let k = orbit.cycle.len();
        let cycle: Vec<MaxIdeal> = (0..k).map(|i| orbit.cycle[(k - i) % k].clone()).collect();
        match band_data_from_cycle(u, cycle) {
            Ok(data) => band_families.push(band_family(&data)),
            Err(e) => notes.push(format!("no band modules on the cycle: {e}")),
        }
    }

    ClassificationReport {
        seed: m.clone(),
        class_kind: class_kind(u, m, bounds.orbit_steps),
        orbit,
        boundary,
        string_families: families.items,
        band_families,
        dead_points,
        truncated,
        notes,
    }
}

struct FamilyList {
    items: Vec<StringFamily>,
    keys: BTreeSet<(String, i64, Vec<MaxIdeal>)>,
    cap: usize,
    overflow: bool,
}

impl FamilyList {
    fn new(cap: usize) -> Self {
        FamilyList {
            items: Vec::new(),
            keys: BTreeSet::new(),
            cap,
            overflow: false,
        }
    }

    /// Builds the string, computes its verdict and records it unless it is
    /// known not to be simple.
    fn push_built(
        &mut self,
        u: &WeightUniverse,
        kind: StringKind,
        lo: i64,
        window: Vec<MaxIdeal>,
        certificate: Option<TailCertificate>,
    ) -> Option<SimpleVerdict> {
        let module = build_string(u, kind, lo, window.clone()).ok()?;
        let verdict = match string_is_simple(&module, certificate) {
            Ok(true) => SimpleVerdict::Simple,
            Ok(false) => SimpleVerdict::NotSimple,
            Err(e) => SimpleVerdict::Undetermined(e.to_string()),
        };
        if verdict != SimpleVerdict::NotSimple {
            self.push(StringFamily {
                kind,
                lo,
                window,
                certificate,
                verdict: verdict.clone(),
                repeats_with_period: None,
            });
        }
        Some(verdict)
    }

    fn push(&mut self, family: StringFamily) {
        let key = (family.kind.to_string(), family.lo, family.window.clone());
        if self.keys.contains(&key) {
            return;
        }
        if self.items.len() >= self.cap {
            self.overflow = true;
            return;
        }
        self.keys.insert(key);
        self.items.push(family);
    }
}

/// Strings whose top is the zero `x` of `t`: bounded ones ending at a zero of
/// `σ(t)` below `x`, and the left-infinite one.
fn downward_families(
    u: &WeightUniverse,
    x: &MaxIdeal,
    bounds: &ClassifyBounds,
    out: &mut FamilyList,
    notes: &mut Vec<String>,
) {
    let mut chain = vec![x.clone()];
    let mut visited = BTreeMap::from([(x.clone(), 0usize)]);
    let period;
    loop {
        let bottom = chain.last().expect("nonempty").clone();
        if u.vanishing(&bottom).sigma_t_in {
            let n = chain.len() - 1;
            let window: Vec<MaxIdeal> = chain.iter().rev().cloned().collect();
            if let Ok(module) = build_string(u, StringKind::Bounded(n), 0, window.clone()) {
                if string_is_simple(&module, None).unwrap_or(false) {
                    out.push(StringFamily {
                        kind: StringKind::Bounded(n),
                        lo: 0,
                        window,
                        certificate: None,
                        verdict: SimpleVerdict::Simple,
                        repeats_with_period: None,
                    });
                }
            }
        }
        if chain.len() > bounds.orbit_steps {
            notes.push(format!(
                "chain below {x} cut at {} steps",
                bounds.orbit_steps
            ));
            return;
        }
        let next = u.down(&bottom);
        if !u.is_essential_edge(&next, &bottom).unwrap_or(false) {
            return;
        }
        if u.vanishing(&next).t_in {
            // strings reaching further down are not simple
            return;
        }
        if let Some(&first) = visited.get(&next) {
            period = Some(chain.len() - first);
            break;
        }
        visited.insert(next.clone(), chain.len());
        chain.push(next);
    }
    // the chain below x avoids t forever, so the left-infinite string is simple
    out.push_built(u, StringKind::LeftInfinite, 0, vec![x.clone()], None);
    if let Some(k) = period {
        for fam in out.items.iter_mut() {
            if matches!(fam.kind, StringKind::Bounded(_)) && fam.window.last() == Some(x) {
                fam.repeats_with_period = Some(k);
            }
        }
    }
}

/// All paths `x = p_0 ← p_1 ← …` upward, maximal up to length `up_depth + 1`.
fn upward_paths(u: &WeightUniverse, x: &MaxIdeal, bounds: &ClassifyBounds) -> Vec<Vec<MaxIdeal>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![x.clone()]];
    while let Some(path) = stack.pop() {
        let top = path.last().expect("nonempty");
        let ups = if path.len() > bounds.up_depth {
            Vec::new()
        } else {
            u.up(top, bounds.degree_bound.max(top.degree()))
        };
        let mut extended = false;
        for y in ups.into_iter().rev() {
            if u.is_essential_edge(top, &y).unwrap_or(false) {
                let mut p = path.clone();
                p.push(y);
                stack.push(p);
                extended = true;
            }
        }
        if !extended {
            out.push(path);
        }
        if out.len() > 4 * bounds.max_families {
            break;
        }
    }
    out.sort();
    out
}

/// Whether some infinite upward path of essential edges starts at `top`
/// (avoiding zeros of `t` when `avoid_t` is set).
///
/// Over 𝔽_p essential edges keep the residue degree, so an infinite upward
/// path lives in a finite set and ends up periodic; since `down` of a periodic
/// point is periodic, this forces `top` itself onto a cycle and the path to
/// run around it. Elsewhere every point with a preimage continues.
fn continues_upward(
    u: &WeightUniverse,
    top: &MaxIdeal,
    bounds: &ClassifyBounds,
    avoid_t: bool,
) -> bool {
    if u.is_finite_poly() {
        let orbit = forward_orbit(u, top, bounds.orbit_steps);
        if !orbit.tail.is_empty() || !orbit.is_complete() {
            return false;
        }
        return !avoid_t || orbit.cycle.iter().all(|x| !u.vanishing(x).t_in);
    }
    u.up_is_truncated(top) || !u.up(top, bounds.degree_bound.max(top.degree())).is_empty()
}

/// Double-infinite strings through `m`, one per upward path that leaves the cycle.
fn double_infinite_families(
    u: &WeightUniverse,
    m: &MaxIdeal,
    orbit: &OrbitReport,
    bounds: &ClassifyBounds,
    out: &mut FamilyList,
) {
    if !orbit.is_complete() {
        return;
    }
    let on_cycle: BTreeSet<&MaxIdeal> = orbit.cycle.iter().collect();
    for path in upward_paths(u, m, bounds) {
        if path.len() != bounds.up_depth + 1 {
            continue;
        }
        let top = path.last().expect("nonempty");
        // above an off-cycle point every continuation is off-cycle, hence injective
        if on_cycle.contains(top) || !continues_upward(u, top, bounds, false) {
            continue;
        }
        out.push_built(
            u,
            StringKind::DoubleInfinite,
            0,
            path,
            Some(TailCertificate::DistinctTail),
        );
    }
}

fn band_family(data: &BandData) -> BandFamily {
    let u = data.universe();
    let t_on_cycle = data.cycle().iter().any(|c| u.vanishing(c).t_in);
    let degree = data.cycle()[0].degree();
    let parameterization = if data.sigma_bar_is_identity() {
        "alpha = c for c in k*, distinct c non-isomorphic; higher-dimensional alpha on request"
            .into()
    } else {
        format!(
            "alpha = c for c in k*, up to c ~ sbar(s) c / s; sbar has order {}",
            data.sigma_bar_order()
        )
    };
    BandFamily {
        cycle: data.cycle().to_vec(),
        residue_degree: degree,
        sigma_bar_order: data.sigma_bar_order(),
        variants: if t_on_cycle {
            vec![BandVariant::M, BandVariant::N]
        } else {
            vec![BandVariant::M]
        },
        m_iso_n_possible: !t_on_cycle,
        parameterization,
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class of {}", self.seed)?;
        match &self.class_kind {
            ClassKind::Rooted { root } => writeln!(f, "  rooted at {root}")?,
            ClassKind::Unrooted => writeln!(f, "  unrooted")?,
            ClassKind::Undetermined { budget } => {
                writeln!(f, "  rootedness undetermined (budget {budget})")?
            }
        }
        let list = |v: &[MaxIdeal]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        writeln!(f, "  orbit tail: [{}]", list(&self.orbit.tail))?;
        writeln!(f, "  orbit cycle: [{}]", list(&self.orbit.cycle))?;
        for b in &self.boundary {
            let mut flags = Vec::new();
            if b.t_in {
                flags.push("t");
            }
            if b.sigma_t_in {
                flags.push("sigma(t)");
            }
            writeln!(
                f,
                "  boundary {}: {} vanishes",
                b.point,
                flags.join(" and ")
            )?;
        }
        writeln!(f, "string families: {}", self.string_families.len())?;
        for s in &self.string_families {
            write!(
                f,
                "  {} {} lo={} [{}]: {}",
                s.shape(),
                s.kind,
                s.lo,
                list(&s.window),
                s.verdict
            )?;
            if let Some(k) = s.repeats_with_period {
                write!(f, " (repeats with period {k})")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "band families: {}", self.band_families.len())?;
        for b in &self.band_families {
            let variants: Vec<String> = b.variants.iter().map(ToString::to_string).collect();
            writeln!(
                f,
                "  cycle [{}] k={} variants {} ({}); {}",
                list(&b.cycle),
                b.period(),
                variants.join("/"),
                if b.m_iso_n_possible {
                    "M and N agree"
                } else {
                    "t vanishes on the cycle, M and N differ"
                },
                b.parameterization
            )?;
        }
        if !self.dead_points.is_empty() {
            writeln!(f, "dead points: {}", list(&self.dead_points))?;
        }
        if self.truncated {
            writeln!(f, "results truncated by bounds")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Heisenberg catalogues
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("unsupported f: {0}")]
    UnsupportedFSpec(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Band(#[from] BandError),
}

/// `f` and `ż` for `H(f)_ż`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeisenbergSpec {
    Constant {
        theta: BigRational,
        zdot: BigRational,
    },
    Affine {
        a: BigRational,
        b: BigRational,
        zdot: BigRational,
    },
    /// `f = h^n`; `zdot` is where `t = h + ż` vanishes (so `At(x)` means `ż = -x`).
    Power { n: u64, zdot: ZDot },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItemContent {
    String(StringFamily),
    Band {
        cycle: Vec<MaxIdeal>,
        variant: BandVariant,
        /// `alpha` as a function of the family parameter `c`.
        alpha: String,
        x_action: String,
        y_action: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogueItem {
    pub label: String,
    pub content: ItemContent,
}

impl CatalogueItem {
    pub fn is_family(&self) -> bool {
        matches!(self.content, ItemContent::Band { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogueReport {
    pub universe: UniverseSpec,
    pub items: Vec<CatalogueItem>,
    pub notes: Vec<String>,
}

impl CatalogueReport {
    pub fn string_items(&self) -> impl Iterator<Item = &StringFamily> {
        self.items.iter().filter_map(|i| match &i.content {
            ItemContent::String(s) => Some(s),
            _ => None,
        })
    }

    pub fn family_count(&self) -> usize {
        self.items.iter().filter(|i| i.is_family()).count()
    }
}

pub fn heisenberg_universe(spec: &HeisenbergSpec) -> Result<WeightUniverse, ClassifyError> {
    let t = |zdot: &BigRational| vec![zdot.clone(), BigRational::one()];
    let u = match spec {
        HeisenbergSpec::Constant { theta, zdot } => make_universe(UniverseSpec::Constant {
            theta: theta.clone(),
            t: t(zdot),
        })?,
        HeisenbergSpec::Affine { a, b, zdot } => {
            if a.is_zero() {
                return Err(ClassifyError::UnsupportedFSpec(
                    "a = 0 is the constant case".into(),
                ));
            }
            if a.is_one() && b.is_zero() {
                return Err(ClassifyError::UnsupportedFSpec(
                    "f = h gives a commutative algebra".into(),
                ));
            }
            make_universe(UniverseSpec::Affine {
                a: a.clone(),
                b: b.clone(),
                t: t(zdot),
            })?
        }
        HeisenbergSpec::Power { n, zdot } => {
            if *n < 2 {
                return Err(ClassifyError::UnsupportedFSpec(format!(
                    "power n = {n} needs n >= 2"
                )));
            }
            make_universe(UniverseSpec::PowerMap {
                n: *n,
                zdot: zdot.clone(),
            })?
        }
    };
    Ok(u)
}

/// The simple weight modules of `H(f)_ż`, as string representatives and
/// one-parameter band families.
pub fn heisenberg_catalogue(
    spec: &HeisenbergSpec,
    bounds: &ClassifyBounds,
) -> Result<CatalogueReport, ClassifyError> {
    let u = heisenberg_universe(spec)?;
    let mut items = Vec::new();
    let mut notes = Vec::new();
    match spec {
        HeisenbergSpec::Constant { theta, zdot } => {
            constant_catalogue(&u, theta, zdot, &mut items)?;
        }
        HeisenbergSpec::Affine { a, b, zdot } => {
            affine_catalogue(&u, a, b, zdot, bounds, &mut items, &mut notes)?;
        }
        HeisenbergSpec::Power { n, zdot } => {
            power_catalogue(&u, *n, zdot, bounds, &mut items, &mut notes)?;
        }
    }
    Ok(CatalogueReport {
        universe: u.spec(),
        items,
        notes,
    })
}

fn rat_point(x: &BigRational) -> MaxIdeal {
    MaxIdeal::Rational(x.clone())
}

fn simple_verdict(module: &StringModule) -> SimpleVerdict {
    match string_is_simple(module, None) {
        Ok(true) => SimpleVerdict::Simple,
        Ok(false) => SimpleVerdict::NotSimple,
        Err(e) => SimpleVerdict::Undetermined(e.to_string()),
    }
}

fn string_item(label: &str, module: &StringModule, verdict: SimpleVerdict) -> CatalogueItem {
    CatalogueItem {
        label: label.into(),
        content: ItemContent::String(StringFamily {
            kind: module.kind(),
            lo: module.lo(),
            window: module.window().to_vec(),
            certificate: module.certificate(),
            verdict,
            repeats_with_period: None,
        }),
    }
}

/// Band items on a cycle of one-dimensional residue fields: `N` with `alpha = c`
/// always, and `M` with `alpha = 1/c` when `t` vanishes on the cycle.
fn band_items(
    u: &WeightUniverse,
    cycle: Vec<MaxIdeal>,
    items: &mut Vec<CatalogueItem>,
) -> Result<(), ClassifyError> {
    let data = band_data_from_cycle(u, cycle)?;
    let family = band_family(&data);
    let k = data.period();
    let c0 = &data.cycle()[0];
    let describe = |scalar: String| {
        if k == 1 {
            scalar
        } else {
            format!("{scalar} around the cycle")
        }
    };
    // one-dimensional actions at c_0 for k = 1 in terms of c
    let t_c0 = u.t_value(c0);
    let st_c0 = u.sigma_t_value(c0);
    let over_c = |v: &crate::universe::ResidueElement| {
        if u.is_zero(v) {
            "0".to_string()
        } else {
            let s = v.value_string();
            if s.trim_start_matches('-').contains(['+', '-', '*', '^']) {
                format!("({s})/c")
            } else {
                format!("{s}/c")
            }
        }
    };
    let label_cycle = data
        .cycle()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    items.push(CatalogueItem {
        label: format!("band family N on [{label_cycle}], c != 0"),
        content: ItemContent::Band {
            cycle: data.cycle().to_vec(),
            variant: BandVariant::N,
            alpha: "c".into(),
            x_action: describe(if k == 1 { "c".into() } else { "X^k = c".into() }),
            y_action: describe(if k == 1 {
                over_c(&t_c0)
            } else {
                "t / X".into()
            }),
        },
    });
    if family.variants.contains(&BandVariant::N) {
        items.push(CatalogueItem {
            label: format!("band family M on [{label_cycle}], c != 0"),
            content: ItemContent::Band {
                cycle: data.cycle().to_vec(),
                variant: BandVariant::M,
                alpha: "1/c".into(),
                x_action: describe(if k == 1 {
                    over_c(&st_c0)
                } else {
                    "sigma(t) / Y".into()
                }),
                y_action: describe(if k == 1 { "c".into() } else { "Y^k = c".into() }),
            },
        });
    }
    Ok(())
}

/// The 1-dimensional data `alpha = c` (variant `N`) or `alpha = 1/c` (variant `M`) of a catalogue item.
pub fn catalogue_pmodule(
    u: &WeightUniverse,
    cycle0: &MaxIdeal,
    variant: BandVariant,
    c: &BigRational,
) -> Option<PModuleData> {
    let alpha = match variant {
        BandVariant::N => c.clone(),
        BandVariant::M => c.recip(),
    };
    if c.is_zero() {
        return None;
    }
    let value = match u.affine_data() {
        Some(_) => crate::universe::Residue::Rational(alpha),
        None => crate::universe::Residue::Cyclo(crate::scalar::CycloScalar::rational(alpha)),
    };
    Some(PModuleData::scalar(crate::universe::ResidueElement {
        home: cycle0.clone(),
        value,
    }))
}

/// Builds the band module of a catalogue item for the parameter value `c`.
pub fn catalogue_band(
    u: &WeightUniverse,
    item: &CatalogueItem,
    c: &BigRational,
) -> Result<Option<crate::band::BandModule>, ClassifyError> {
    let ItemContent::Band { cycle, variant, .. } = &item.content else {
        return Ok(None);
    };
    let data = band_data_from_cycle(u, cycle.clone())?;
    let Some(l) = catalogue_pmodule(u, &cycle[0], *variant, c) else {
        return Ok(None);
    };
    Ok(Some(build_band(&data, &l, *variant)?))
}

fn constant_catalogue(
    u: &WeightUniverse,
    theta: &BigRational,
    zdot: &BigRational,
    items: &mut Vec<CatalogueItem>,
) -> Result<(), ClassifyError> {
    let fixed = rat_point(theta);
    let zero_of_t = rat_point(&-zdot.clone());
    if fixed != zero_of_t {
        let s = build_string(
            u,
            StringKind::LeftInfinite,
            -1,
            vec![fixed.clone(), zero_of_t],
        )?;
        let verdict = simple_verdict(&s);
        items.push(string_item(
            "left-infinite string (..., theta, theta, -zdot)",
            &s,
            verdict,
        ));
    } else {
        let s = build_string(u, StringKind::Bounded(0), 0, vec![fixed.clone()])?;
        let verdict = simple_verdict(&s);
        items.push(string_item(
            "one-dimensional module with X = Y = 0",
            &s,
            verdict,
        ));
    }
    band_items(u, vec![fixed], items)
}

fn affine_catalogue(
    u: &WeightUniverse,
    a: &BigRational,
    b: &BigRational,
    zdot: &BigRational,
    bounds: &ClassifyBounds,
    items: &mut Vec<CatalogueItem>,
    notes: &mut Vec<String>,
) -> Result<(), ClassifyError> {
    notes.push("only rational points are represented; complex orbits are not enumerated".into());
    let f = |x: &BigRational| a * x + b;
    let f_inv = |x: &BigRational| (x - b) / a;
    let z = -zdot.clone();
    let depth = bounds.up_depth.max(1);

    // N-down through -zdot
    let mut below = vec![z.clone()];
    for _ in 0..depth {
        let next = f(below.last().expect("nonempty"));
        below.push(next);
    }
    below.reverse();
    let window: Vec<MaxIdeal> = below.iter().map(rat_point).collect();
    let s = build_string(u, StringKind::LeftInfinite, -(depth as i64), window)?;
    let verdict = simple_verdict(&s);
    items.push(string_item(
        "left-infinite string ending at -zdot",
        &s,
        verdict,
    ));

    // N-up from alpha with f(alpha) = -zdot
    let mut above = vec![f_inv(&z)];
    for _ in 0..depth {
        let next = f_inv(above.last().expect("nonempty"));
        above.push(next);
    }
    let s = build_string(
        u,
        StringKind::RightInfinite,
        0,
        above.iter().map(rat_point).collect(),
    )?;
    let verdict = simple_verdict(&s);
    items.push(string_item(
        "right-infinite string starting at f^-1(-zdot)",
        &s,
        verdict,
    ));

    // double-infinite: a representative through a point off the grand orbit of -zdot
    let orbit_budget = bounds.orbit_steps.min(64);
    let grand_orbit_contains = |x: &BigRational| {
        let mut fwd = x.clone();
        let mut bwd = x.clone();
        for _ in 0..=orbit_budget {
            if fwd == z || bwd == z {
                return true;
            }
            fwd = f(&fwd);
            bwd = f_inv(&bwd);
        }
        false
    };
    let periodic = |x: &BigRational| {
        forward_orbit(u, &rat_point(x), orbit_budget)
            .tail
            .is_empty()
            && forward_orbit(u, &rat_point(x), orbit_budget).is_complete()
    };
    let candidates = (0..)
        .flat_map(|k: i64| [k, -k - 1])
        .take(200)
        .map(|k| BigRational::from_integer(k.into()));
    let mut found_double = false;
    for beta in candidates.clone() {
        if grand_orbit_contains(&beta) || periodic(&beta) {
            continue;
        }
        let mut path = vec![beta.clone()];
        for _ in 0..depth {
            let next = f_inv(path.last().expect("nonempty"));
            path.push(next);
        }
        let s = build_string(
            u,
            StringKind::DoubleInfinite,
            0,
            path.iter().map(rat_point).collect(),
        )?
        .with_certificate(Some(TailCertificate::DistinctTail));
        let verdict = simple_verdict(&s);
        items.push(string_item(
            "double-infinite strings through beta outside the grand orbit of -zdot (representative)",
            &s,
            verdict,
        ));
        found_double = true;
        break;
    }
    if !found_double {
        notes.push(
            "no aperiodic rational point off the grand orbit of -zdot among the small integers"
                .into(),
        );
    }

    // bands on rational cycles: the fixed point, and 2-cycles when a = -1
    let mut cycles: BTreeSet<Vec<MaxIdeal>> = BTreeSet::new();
    if !a.is_one() {
        let fixed = b / (BigRational::one() - a);
        cycles.insert(vec![rat_point(&fixed)]);
    }
    if *a == -BigRational::one() {
        for beta in candidates.take(20) {
            let other = f(&beta);
            if other != beta {
                let mut pair = vec![rat_point(&beta), rat_point(&other)];
                pair.sort();
                // down(c_1) = c_0
                cycles.insert(pair);
                break;
            }
        }
        notes.push(
            "every rational other than the fixed point lies on a 2-cycle; one representative shown"
                .into(),
        );
    }
    for cycle in cycles {
        band_items(u, cycle, items)?;
    }
    Ok(())
}

fn power_catalogue(
    u: &WeightUniverse,
    n: u64,
    zdot: &ZDot,
    bounds: &ClassifyBounds,
    items: &mut Vec<CatalogueItem>,
    notes: &mut Vec<String>,
) -> Result<(), ClassifyError> {
    notes.push("only 0 and roots of unity are represented; the component of other nonzero points is not enumerated".into());
    notes.push("band modules are finite dimensional".into());

    // the component {0}
    if matches!(zdot, ZDot::At(MaxIdeal::Zero)) {
        let s = build_string(u, StringKind::Bounded(0), 0, vec![MaxIdeal::Zero])?;
        let verdict = simple_verdict(&s);
        items.push(string_item(
            "one-dimensional module at 0 with X = Y = 0",
            &s,
            verdict,
        ));
    }
    band_items(u, vec![MaxIdeal::Zero], items)?;

    // roots of unity: cycles with small denominators coprime to n
    let max_den = (bounds.up_depth as i64 + 4).max(3);
    let mut seen_cycles: BTreeSet<MaxIdeal> = BTreeSet::new();
    for den in 1..=max_den {
        if num_integer::gcd(den, n as i64) != 1 {
            continue;
        }
        for num in 0..den {
            let Some(q) = Angle::new(num, den) else {
                continue;
            };
            if q.denom() != den {
                continue;
            }
            let p = MaxIdeal::Angle(q);
            if seen_cycles.contains(&p) {
                continue;
            }
            let orbit = forward_orbit(u, &p, bounds.orbit_steps);
            if !orbit.is_complete() || !orbit.tail.is_empty() {
                continue;
            }
            seen_cycles.extend(orbit.cycle.iter().cloned());
            let k = orbit.cycle.len();
            let cycle: Vec<MaxIdeal> = (0..k).map(|i| orbit.cycle[(k - i) % k].clone()).collect();
            band_items(u, cycle, items)?;
        }
    }

    // aperiodic paths: the sequence of the worked example, 1/n^j above the fixed point 1
    let depth = bounds.up_depth.max(1);
    let mut window = vec![MaxIdeal::angle(0, 1).expect("valid")];
    let mut den: i64 = 1;
    for _ in 0..depth {
        den = den.saturating_mul(n as i64);
        window.push(MaxIdeal::angle(1, den).expect("valid"));
    }
    let s = build_string(u, StringKind::DoubleInfinite, 0, window)?
        .with_certificate(Some(TailCertificate::DistinctTail));
    let verdict = simple_verdict(&s);
    items.push(string_item(
        "double-infinite string (..., 1, 1, zeta_n, zeta_n^2 root, ...)",
        &s,
        verdict,
    ));

    // paths through the zero of t give one-sided strings
    if let ZDot::At(p @ MaxIdeal::Angle(_)) = zdot {
        let s = build_string(u, StringKind::LeftInfinite, 0, vec![p.clone()])?;
        let verdict = simple_verdict(&s);
        items.push(string_item(
            "left-infinite string ending at the zero of t",
            &s,
            verdict,
        ));
        for pre in u.up(p, 1) {
            let mut window = vec![pre.clone()];
            for _ in 0..depth {
                let next = u
                    .up(window.last().expect("nonempty"), 1)
                    .into_iter()
                    .next()
                    .expect("power map up is nonempty");
                window.push(next);
            }
            if let Ok(s) = build_string(u, StringKind::RightInfinite, 0, window) {
                let verdict = simple_verdict(&s);
                items.push(string_item(
                    "right-infinite string starting above the zero of t",
                    &s,
                    verdict,
                ));
            }
        }
    }

    let bounded_exists = items.iter().any(|i| {
        matches!(&i.content, ItemContent::String(s) if matches!(s.kind, StringKind::Bounded(_)) && s.verdict == SimpleVerdict::Simple)
    });
    if !bounded_exists {
        notes.push("bounded string modules do not exist".into());
    } else {
        notes.push(
            "bounded string modules exist only as the one-dimensional zero-action module".into(),
        );
    }
    Ok(())
}

impl fmt::Display for CatalogueReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "catalogue: {} items", self.items.len())?;
        for item in &self.items {
            match &item.content {
                ItemContent::String(s) => {
                    let w: Vec<String> = s.window.iter().map(ToString::to_string).collect();
                    writeln!(
                        f,
                        "  {}: {} lo={} [{}], {}",
                        item.label,
                        s.kind,
                        s.lo,
                        w.join(", "),
                        s.verdict
                    )?;
                }
                ItemContent::Band {
                    x_action,
                    y_action,
                    alpha,
                    ..
                } => {
                    writeln!(
                        f,
                        "  {}: alpha = {alpha}, X = {x_action}, Y = {y_action}",
                        item.label
                    )?;
                }
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Renders a rational for labels.
pub fn show_rational(q: &BigRational) -> String {
    format_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{band_matrices, check_relations, Realization};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn f7(f: &[i64], t: &[i64]) -> WeightUniverse {
        make_universe(UniverseSpec::FinitePoly {
            p: 7,
            f: f.to_vec(),
            t: t.to_vec(),
        })
        .unwrap()
    }

    #[test]
    fn f7_squaring_report() {
        let u = f7(&[0, 0, 1], &[-2, 1]);
        let r = classify_point(&u, &MaxIdeal::linear(7, 4), &ClassifyBounds::default());
        let bounded: Vec<_> = r
            .string_families
            .iter()
            .filter(|s| matches!(s.kind, StringKind::Bounded(_)))
            .collect();
        assert_eq!(bounded.len(), 1);
        assert_eq!(
            bounded[0].window,
            vec![MaxIdeal::linear(7, 4), MaxIdeal::linear(7, 2)]
        );
        assert_eq!(bounded[0].verdict, SimpleVerdict::Simple);
        assert_eq!(r.band_families.len(), 1);
        let band = &r.band_families[0];
        assert_eq!(
            band.cycle,
            vec![MaxIdeal::linear(7, 4), MaxIdeal::linear(7, 2)]
        );
        assert!(!band.m_iso_n_possible);
        assert_eq!(band.variants.len(), 2);
        assert_eq!(r.class_kind, ClassKind::Unrooted);
    }

    #[test]
    fn identity_map_gives_k1_bands_only() {
        let u = f7(&[0, 1], &[-2, 1]);
        let r = classify_point(&u, &MaxIdeal::linear(7, 5), &ClassifyBounds::default());
        assert!(r.string_families.is_empty());
        assert_eq!(r.band_families.len(), 1);
        assert_eq!(r.band_families[0].period(), 1);
        assert!(r.band_families[0].m_iso_n_possible);
    }

    #[test]
    fn power_map_third_angle() {
        let u = make_universe(UniverseSpec::PowerMap {
            n: 2,
            zdot: ZDot::Outside,
        })
        .unwrap();
        let r = classify_point(
            &u,
            &MaxIdeal::angle(1, 3).unwrap(),
            &ClassifyBounds::default(),
        );
        assert_eq!(r.class_kind, ClassKind::Unrooted);
        assert_eq!(r.band_families.len(), 1);
        assert_eq!(r.band_families[0].period(), 2);
        let doubles: Vec<_> = r
            .string_families
            .iter()
            .filter(|s| s.kind == StringKind::DoubleInfinite)
            .collect();
        assert!(!doubles.is_empty());
        assert!(doubles.iter().all(|s| s.verdict == SimpleVerdict::Simple));
    }

    #[test]
    fn constant_catalogue_generic_branch() {
        let spec = HeisenbergSpec::Constant {
            theta: q(2),
            zdot: q(1),
        };
        let cat = heisenberg_catalogue(&spec, &ClassifyBounds::default()).unwrap();
        assert_eq!(cat.items.len(), 2);
        assert_eq!(cat.family_count(), 1);
        let s = cat.string_items().next().unwrap();
        assert_eq!(s.kind, StringKind::LeftInfinite);
        assert_eq!(s.verdict, SimpleVerdict::Simple);
        let ItemContent::Band {
            y_action, x_action, ..
        } = &cat.items[1].content
        else {
            panic!()
        };
        assert_eq!(x_action, "c");
        assert_eq!(y_action, "3/c");
        let u = heisenberg_universe(&spec).unwrap();
        for c in [1, 2, -3] {
            let b = catalogue_band(&u, &cat.items[1], &q(c)).unwrap().unwrap();
            let Realization::Rational(fm) = band_matrices(&b).unwrap() else {
                panic!()
            };
            assert!(check_relations(&fm).ok);
            assert_eq!(fm.x.get(0, 0), &q(c));
            assert_eq!(fm.y.get(0, 0), &(q(3) / q(c)));
        }
    }

    #[test]
    fn constant_catalogue_degenerate_branch() {
        let spec = HeisenbergSpec::Constant {
            theta: q(2),
            zdot: q(-2),
        };
        let cat = heisenberg_catalogue(&spec, &ClassifyBounds::default()).unwrap();
        assert_eq!(cat.items.len(), 3);
        assert_eq!(cat.family_count(), 2);
        let s = cat.string_items().next().unwrap();
        assert_eq!(s.kind, StringKind::Bounded(0));
        assert_eq!(s.verdict, SimpleVerdict::Simple);
    }

    #[test]
    fn power_catalogue_notes() {
        let cat = heisenberg_catalogue(
            &HeisenbergSpec::Power {
                n: 2,
                zdot: ZDot::Outside,
            },
            &ClassifyBounds::default(),
        )
        .unwrap();
        assert!(cat
            .notes
            .iter()
            .any(|n| n == "bounded string modules do not exist"));
        let with_zero = heisenberg_catalogue(
            &HeisenbergSpec::Power {
                n: 2,
                zdot: ZDot::At(MaxIdeal::Zero),
            },
            &ClassifyBounds::default(),
        )
        .unwrap();
        assert!(!with_zero
            .notes
            .iter()
            .any(|n| n == "bounded string modules do not exist"));
        assert!(matches!(
            heisenberg_catalogue(
                &HeisenbergSpec::Power {
                    n: 1,
                    zdot: ZDot::Outside
                },
                &ClassifyBounds::default()
            ),
            Err(ClassifyError::UnsupportedFSpec(_))
        ));
    }

    #[test]
    fn affine_catalogue_families() {
        let spec = HeisenbergSpec::Affine {
            a: q(2),
            b: q(1),
            zdot: q(0),
        };
        let cat = heisenberg_catalogue(&spec, &ClassifyBounds::default()).unwrap();
        let kinds: Vec<StringKind> = cat.string_items().map(|s| s.kind).collect();
        assert!(kinds.contains(&StringKind::LeftInfinite));
        assert!(kinds.contains(&StringKind::RightInfinite));
        assert!(kinds.contains(&StringKind::DoubleInfinite));
        // fixed point -1 of 2h+1 carries one band family since t = h does not vanish there
        assert_eq!(cat.family_count(), 1);
    }
}
