//! String modules `N(m̲)` on chains `… ← m_{i-1} ← m_i ← m_{i+1} ← …`.
//!
//! The weight space at position `i` is the residue field at `m_i`; `X` moves
//! up one position by `r ↦ σ(t·r)` and `Y` moves down by inverting `σ` on
//! residues. Positions below the stored window are recovered canonically with
//! `down`; positions above it are unknown, since `up` may branch.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::dynamics::{forward_orbit, orbit_meets};
use crate::universe::{MaxIdeal, ResidueElement, RingElem, UniverseError, WeightUniverse};

/// Budget of `down` steps used when certifying the canonical downward tail.
pub const TAIL_ORBIT_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StringKind {
    /// Positions `ℤ`.
    DoubleInfinite,
    /// Positions `0, 1, 2, …`; `Y` kills position 0.
    RightInfinite,
    /// Positions `…, -1, 0`; `X` kills position 0.
    LeftInfinite,
    /// Positions `0..=n`.
    Bounded(usize),
}

impl fmt::Display for StringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StringKind::DoubleInfinite => f.write_str("double-infinite"),
            StringKind::RightInfinite => f.write_str("right-infinite"),
            StringKind::LeftInfinite => f.write_str("left-infinite"),
            StringKind::Bounded(n) => write!(f, "bounded({n})"),
        }
    }
}

/// What the caller knows about the sequence above the stored window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailCertificate {
    /// `m_{i+k} = m_i` for all `i`.
    Periodic(usize),
    /// The upward tail is eventually constant (which forces the whole
    /// sequence to be constant, since `down` of a fixed point is itself).
    EventuallyConstantTail,
    /// Points above the window are pairwise distinct.
    DistinctTail,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StringError {
    #[error("chain broken at position {0}: down(m_{0}) differs from m_{{{0}-1}}")]
    ChainBroken(i64),
    #[error("{kind} string needs {which}")]
    BoundaryConditionFailed {
        kind: StringKind,
        which: &'static str,
    },
    #[error("edge into position {0} is not essential")]
    NotEssential(i64),
    #[error("position {0} is outside the stored window")]
    WindowExhausted(i64),
    #[error("a tail certificate is required for {0} strings")]
    CertificateRequired(StringKind),
    #[error("certificate contradicts the window: {0}")]
    CertificateContradicted(String),
    #[error("t vanishes at {0}, which lies above the window on a possible continuation")]
    TailAmbiguous(String),
    #[error("downward orbit did not close within {0} steps")]
    OrbitBudget(usize),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

type Result<T> = std::result::Result<T, StringError>;

/// A weight vector `r + m_i` at a position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StringElement {
    pub position: i64,
    pub value: ResidueElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    X,
    Y,
    Scalar(RingElem),
}

/// A validated string module over a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringModule {
    universe: WeightUniverse,
    kind: StringKind,
    lo: i64,
    window: Vec<MaxIdeal>,
    certificate: Option<TailCertificate>,
}

/// Validates the chain, boundary and essentiality conditions and returns the module.
///
/// `window[j]` is the point at position `lo + j`. Bounded and right-infinite
/// strings start at 0; left-infinite strings end at 0.
pub fn build_string(
    u: &WeightUniverse,
    kind: StringKind,
    lo: i64,
    window: Vec<MaxIdeal>,
) -> Result<StringModule> {
    if window.is_empty() {
        return Err(StringError::InvalidWindow("empty window".into()));
    }
    for m in &window {
        u.check_member(m)?;
    }
    let top = lo + window.len() as i64 - 1;
    match kind {
        StringKind::Bounded(n) if lo != 0 || window.len() != n + 1 => {
            return Err(StringError::InvalidWindow(format!(
                "bounded({n}) needs positions 0..={n}"
            )))
        }
        StringKind::RightInfinite if lo != 0 => {
            return Err(StringError::InvalidWindow(
                "right-infinite strings start at 0".into(),
            ))
        }
        StringKind::LeftInfinite if top != 0 => {
            return Err(StringError::InvalidWindow(
                "left-infinite strings end at 0".into(),
            ))
        }
        _ => {}
    }
    for j in 1..window.len() {
        if u.down(&window[j]) != window[j - 1] {
            return Err(StringError::ChainBroken(lo + j as i64));
        }
    }
    if matches!(kind, StringKind::Bounded(_) | StringKind::RightInfinite)
        && !u.vanishing(&window[0]).sigma_t_in
    {
        return Err(StringError::BoundaryConditionFailed {
            kind,
            which: "sigma(t) in the lowest point",
        });
    }
    if matches!(kind, StringKind::Bounded(_) | StringKind::LeftInfinite)
        && !u.vanishing(&window[window.len() - 1]).t_in
    {
        return Err(StringError::BoundaryConditionFailed {
            kind,
            which: "t in the highest point",
        });
    }
    for j in 1..window.len() {
        if !u.is_essential_edge(&window[j - 1], &window[j])? {
            return Err(StringError::NotEssential(lo + j as i64));
        }
    }
    // edges are only ever inessential on the finite backend, where orbits close
    if u.is_finite_poly() && matches!(kind, StringKind::DoubleInfinite | StringKind::LeftInfinite) {
        // every edge below the window lies on the orbit of the lowest point
        let orbit = forward_orbit(u, &window[0], TAIL_ORBIT_BUDGET);
        if !orbit.is_complete() {
            return Err(StringError::OrbitBudget(TAIL_ORBIT_BUDGET));
        }
        for (j, x) in orbit.points().enumerate() {
            if !u.is_essential_edge(&u.down(x), x)? {
                return Err(StringError::NotEssential(lo - j as i64));
            }
        }
    }
    Ok(StringModule {
        universe: u.clone(),
        kind,
        lo,
        window,
        certificate: None,
    })
}

impl StringModule {
    pub fn universe(&self) -> &WeightUniverse {
        &self.universe
    }

    pub fn kind(&self) -> StringKind {
        self.kind
    }

    /// Lowest stored position.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored position.
    pub fn top(&self) -> i64 {
        self.lo + self.window.len() as i64 - 1
    }

    pub fn window(&self) -> &[MaxIdeal] {
        &self.window
    }

    pub fn certificate(&self) -> Option<TailCertificate> {
        self.certificate
    }

    /// Attaches a tail certificate used by [`string_is_simple`] when none is passed.
    pub fn with_certificate(mut self, cert: Option<TailCertificate>) -> Self {
        self.certificate = cert;
        self
    }

    fn extends_down(&self) -> bool {
        matches!(
            self.kind,
            StringKind::DoubleInfinite | StringKind::LeftInfinite
        )
    }

    /// Lowest position of the module, if any.
    pub fn min_position(&self) -> Option<i64> {
        if self.extends_down() {
            None
        } else {
            Some(self.lo)
        }
    }

    /// Whether the module has weight space at `i` (known or not).
    pub fn has_position(&self, i: i64) -> bool {
        match self.kind {
            StringKind::DoubleInfinite => true,
            StringKind::RightInfinite => i >= 0,
            StringKind::LeftInfinite => i <= 0,
            StringKind::Bounded(n) => (0..=n as i64).contains(&i),
        }
    }

    /// The point at position `i`, extending below the window with `down`.
    pub fn point(&self, i: i64) -> Result<MaxIdeal> {
        if !self.has_position(i) || i > self.top() {
            return Err(StringError::WindowExhausted(i));
        }
        if i >= self.lo {
            return Ok(self.window[(i - self.lo) as usize].clone());
        }
        let mut m = self.window[0].clone();
        for _ in i..self.lo {
            m = self.universe.down(&m);
        }
        Ok(m)
    }

    /// The points at positions `from..=to`, computed with a single downward walk.
    pub fn points(&self, from: i64, to: i64) -> Result<Vec<MaxIdeal>> {
        if from > to {
            return Ok(Vec::new());
        }
        for i in [from, to] {
            if !self.has_position(i) || i > self.top() {
                return Err(StringError::WindowExhausted(i));
            }
        }
        let mut out = Vec::new();
        if from < self.lo {
            // walk down once, collecting m_{lo-1}, …, m_from
            let mut m = self.window[0].clone();
            for _ in from..self.lo {
                m = self.universe.down(&m);
                out.push(m.clone());
            }
            out.reverse();
            out.truncate((to.min(self.lo - 1) - from + 1) as usize);
        }
        if to >= self.lo {
            let start = (from.max(self.lo) - self.lo) as usize;
            out.extend_from_slice(&self.window[start..=(to - self.lo) as usize]);
        }
        Ok(out)
    }

    /// A weight vector with value `1` at position `i`.
    pub fn unit(&self, i: i64) -> Result<StringElement> {
        let m = self.point(i)?;
        Ok(StringElement {
            position: i,
            value: self.universe.one(&m),
        })
    }
}

/// Applies `X`, `Y`, or an element of `R` to a weight vector; `None` is the zero vector.
pub fn string_act(
    module: &StringModule,
    generator: &Generator,
    elem: &StringElement,
) -> Result<Option<StringElement>> {
    let u = &module.universe;
    let i = elem.position;
    let here = module.point(i)?;
    if elem.value.home != here {
        return Err(UniverseError::WrongHome {
            expected: here.to_string(),
            actual: elem.value.home.to_string(),
        }
        .into());
    }
    match generator {
        Generator::X => {
            let kills = match module.kind {
                StringKind::Bounded(n) => i == n as i64,
                StringKind::LeftInfinite => i == 0,
                _ => false,
            };
            if kills {
                return Ok(None);
            }
            if i + 1 > module.top() {
                return Err(StringError::WindowExhausted(i + 1));
            }
            let next = module.point(i + 1)?;
            let tr = u.mul(&u.t_value(&here), &elem.value)?;
            Ok(Some(StringElement {
                position: i + 1,
                value: u.sigma_residue(&here, &next, &tr)?,
            }))
        }
        Generator::Y => {
            if module.min_position() == Some(i) {
                return Ok(None);
            }
            Ok(Some(StringElement {
                position: i - 1,
                value: u.invert_sigma(&here, &elem.value)?,
            }))
        }
        Generator::Scalar(r) => {
            let rv = u.reduce(&here, r)?;
            Ok(Some(StringElement {
                position: i,
                value: u.mul(&rv, &elem.value)?,
            }))
        }
    }
}

/// Whether the string module is simple.
///
/// Bounded strings are simple iff `t ∉ m_i` for `i < n`. Infinite strings
/// need `t` to avoid every point of the sequence, and double-infinite ones
/// also need an aperiodic sequence, which only a certificate can vouch for.
/// A zero of `t` that some upward continuation of the window could reach
/// makes the answer depend on data not stored, reported as `TailAmbiguous`.
pub fn string_is_simple(
    module: &StringModule,
    certificate: Option<TailCertificate>,
) -> Result<bool> {
    let u = &module.universe;
    let t_in = |m: &MaxIdeal| u.vanishing(m).t_in;
    match module.kind {
        StringKind::Bounded(n) => Ok(!module.window[..n].iter().any(t_in)),
        StringKind::LeftInfinite => {
            if module.window[..module.window.len() - 1].iter().any(t_in) {
                return Ok(false);
            }
            below_window_avoids_t(module)
        }
        StringKind::RightInfinite => {
            if module.window.iter().any(t_in) {
                return Ok(false);
            }
            above_window_avoids_t(module)
        }
        StringKind::DoubleInfinite => {
            let cert = certificate
                .or(module.certificate)
                .ok_or(StringError::CertificateRequired(module.kind))?;
            match cert {
                TailCertificate::Periodic(k) => {
                    if k == 0 {
                        return Err(StringError::CertificateContradicted("period 0".into()));
                    }
                    let w = &module.window;
                    if (k..w.len()).any(|j| w[j] != w[j - k]) {
                        return Err(StringError::CertificateContradicted(format!(
                            "window is not {k}-periodic"
                        )));
                    }
                    Ok(false)
                }
                TailCertificate::EventuallyConstantTail => Ok(false),
                TailCertificate::DistinctTail => {
                    if module.window.iter().any(t_in) {
                        return Ok(false);
                    }
                    if !below_window_avoids_t(module)? {
                        return Ok(false);
                    }
                    above_window_avoids_t(module)
                }
            }
        }
    }
}

fn below_window_avoids_t(module: &StringModule) -> Result<bool> {
    let u = &module.universe;
    let Some(zeros) = u.t_zeros() else {
        return Ok(false);
    };
    match orbit_meets(u, &u.down(&module.window[0]), &zeros, TAIL_ORBIT_BUDGET) {
        Some(hit) => Ok(!hit),
        None => Err(StringError::OrbitBudget(TAIL_ORBIT_BUDGET)),
    }
}

/// Decides whether `t` can vanish on some point above the window top.
fn above_window_avoids_t(module: &StringModule) -> Result<bool> {
    let u = &module.universe;
    let top = &module.window[module.window.len() - 1];
    let Some(zeros) = u.t_zeros() else {
        return Ok(false);
    };
    for z in zeros {
        match orbit_meets(u, &u.down(&z), std::slice::from_ref(top), TAIL_ORBIT_BUDGET) {
            Some(true) => return Err(StringError::TailAmbiguous(z.to_string())),
            Some(false) => {}
            None => return Err(StringError::OrbitBudget(TAIL_ORBIT_BUDGET)),
        }
    }
    Ok(true)
}

/// How much of an isomorphism answer is proven.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certainty {
    Exact,
    /// Valid for everything the stored windows determine.
    Window,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsoOutcome {
    Equal,
    /// `m1_i = m2_{i+k}` for all `i`.
    Shift(i64),
    NotIsomorphic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StringIso {
    pub outcome: IsoOutcome,
    pub certainty: Certainty,
}

/// Decides isomorphism of two string modules.
///
/// Double-infinite strings are isomorphic exactly when one sequence is a
/// shift of the other. Because positions below the windows follow from `down`,
/// a shift `k` matches iff `m1_T = m2_{T+k}` at the highest position `T`
/// both windows determine. All shifts with overlapping windows are tried,
/// preferring `0`, then the smallest `|k|`.
pub fn string_iso(a: &StringModule, b: &StringModule) -> StringIso {
    let not = |certainty| StringIso {
        outcome: IsoOutcome::NotIsomorphic,
        certainty,
    };
    if a.universe != b.universe || a.kind != b.kind {
        return not(Certainty::Exact);
    }
    match a.kind {
        StringKind::Bounded(_) => {
            if a.window == b.window {
                StringIso {
                    outcome: IsoOutcome::Equal,
                    certainty: Certainty::Exact,
                }
            } else {
                not(Certainty::Exact)
            }
        }
        StringKind::LeftInfinite => {
            if a.window.last() == b.window.last() {
                StringIso {
                    outcome: IsoOutcome::Equal,
                    certainty: Certainty::Exact,
                }
            } else {
                not(Certainty::Exact)
            }
        }
        StringKind::RightInfinite => {
            let common = a.window.len().min(b.window.len());
            if a.window[..common] != b.window[..common] {
                not(Certainty::Exact)
            } else {
                StringIso {
                    outcome: IsoOutcome::Equal,
                    certainty: Certainty::Window,
                }
            }
        }
        StringKind::DoubleInfinite => {
            let lo_k = b.lo - a.top();
            let hi_k = b.top() - a.lo;
            let mut shifts: Vec<i64> = (lo_k..=hi_k).collect();
            shifts.sort_by_key(|k| (k.abs(), *k < 0));
            for k in shifts {
                let top = a.top().min(b.top() - k);
                let (Ok(x), Ok(y)) = (a.point(top), b.point(top + k)) else {
                    continue;
                };
                if x == y {
                    return StringIso {
                        outcome: if k == 0 {
                            IsoOutcome::Equal
                        } else {
                            IsoOutcome::Shift(k)
                        },
                        certainty: Certainty::Window,
                    };
                }
            }
            not(Certainty::Window)
        }
    }
}

/// Number of positions in `from..=to` carrying each point.
pub fn support_multiset(
    module: &StringModule,
    from: i64,
    to: i64,
) -> Result<BTreeMap<MaxIdeal, usize>> {
    let mut out = BTreeMap::new();
    for m in module.points(from, to)? {
        *out.entry(m).or_insert(0) += 1;
    }
    Ok(out)
}
