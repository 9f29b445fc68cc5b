//! Band modules on periodic `down`-cycles.
//!
//! A cycle `c_0, …, c_{k-1}` with `down(c_{i+1}) = c_i` (indices mod `k`)
//! carries weight spaces `V_i = 𝕜_{c_i}^d`. The module is determined by a
//! `d × d` matrix `alpha` over `𝕜 = 𝕜_{c_0}`, giving the semilinear map
//! `α(v) = alpha · σ̄(v)` on `V_0`.
//!
//! Going once around the cycle through the residue maps `σ` gives `σ̄`. The
//! "forward" step `V_i → V_{i+1}` is `σ` on each coordinate, except that the
//! step back into `V_0` is followed by `alpha`, so a full turn is `α`.
//!
//! * Variant `N`: `X` is the forward step and `Y = t · X⁻¹`, so `X^k = α` on `V_0`.
//! * Variant `M`: `Y` is the inverse of the forward step and `X = σ(t) · Y⁻¹`,
//!   so `Y^k = α⁻¹` on `V_0`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamics::forward_orbit;
use crate::field::{Field, PrimeField, Rationals};
use crate::linalg::{closure, Matrix};
use crate::oracle::{band_matrices, Realization};
use crate::universe::{MaxIdeal, Residue, ResidueElement, RingElem, UniverseError, WeightUniverse};

/// Default number of seeds the exhaustive searches may visit.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

const INTERTWINER_SEED: u64 = 0xba4d_15e0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BandError {
    #[error("{0} does not lie on a down-cycle of period at most {1}")]
    NotOnCycle(String, usize),
    #[error("cycle edge {from} -> {to} is not essential")]
    NotEssential { from: String, to: String },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("alpha is not invertible")]
    AlphaNotInvertible,
    #[error("search space too large for the budget {0}")]
    FieldTooLarge(u64),
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

type Result<T> = std::result::Result<T, BandError>;

/// A minimal `down`-cycle through a point, with its residue-field maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandData {
    universe: WeightUniverse,
    cycle: Vec<MaxIdeal>,
    /// `τ_i : 𝕜_{c_0} → 𝕜_{c_i}` over 𝔽_p (finite backend only).
    tau: Vec<Matrix<u64>>,
    sigma_bar: Option<Matrix<u64>>,
}

/// Finds the cycle through `m` and its residue isomorphisms.
pub fn detect_band_data(u: &WeightUniverse, m: &MaxIdeal, max_period: usize) -> Result<BandData> {
    u.check_member(m)?;
    let orbit = forward_orbit(u, m, max_period.max(1));
    if !orbit.tail.is_empty() || orbit.cycle.is_empty() {
        return Err(BandError::NotOnCycle(m.to_string(), max_period));
    }
    let k = orbit.cycle.len();
    let cycle: Vec<MaxIdeal> = (0..k).map(|i| orbit.cycle[(k - i) % k].clone()).collect();
    band_data_from_cycle(u, cycle)
}

/// Builds band data from an explicit cycle `c_0, …, c_{k-1}` with `down(c_{i+1}) = c_i`.
pub fn band_data_from_cycle(u: &WeightUniverse, cycle: Vec<MaxIdeal>) -> Result<BandData> {
    let k = cycle.len();
    if k == 0 {
        return Err(BandError::NotOnCycle("empty cycle".into(), 0));
    }
    for (i, c) in cycle.iter().enumerate() {
        u.check_member(c)?;
        let next = &cycle[(i + 1) % k];
        if u.down(next) != *c {
            return Err(BandError::NotOnCycle(c.to_string(), k));
        }
        if !u.is_essential_edge(c, next)? {
            return Err(BandError::NotEssential {
                from: c.to_string(),
                to: next.to_string(),
            });
        }
    }
    // minimality: no proper rotation reproduces the cycle
    if (1..k).any(|r| k.is_multiple_of(r) && (0..k).all(|i| cycle[i] == cycle[(i + r) % k])) {
        return Err(BandError::NotOnCycle(cycle[0].to_string(), k));
    }
    let (tau, sigma_bar) = match u.prime_field() {
        Some(field) => {
            let e = cycle[0].degree();
            let mut tau = vec![Matrix::identity(&field, e)];
            for i in 0..k - 1 {
                let step = u.sigma_matrix(&cycle[i], &cycle[i + 1])?;
                tau.push(step.mul(&field, &tau[i]));
            }
            let sb = u
                .sigma_matrix(&cycle[k - 1], &cycle[0])?
                .mul(&field, &tau[k - 1]);
            debug_assert!(sb.pow(&field, e as u64) == Matrix::identity(&field, e));
            (tau, Some(sb))
        }
        None => (Vec::new(), None),
    };
    Ok(BandData {
        universe: u.clone(),
        cycle,
        tau,
        sigma_bar,
    })
}

impl BandData {
    pub fn universe(&self) -> &WeightUniverse {
        &self.universe
    }

    pub fn cycle(&self) -> &[MaxIdeal] {
        &self.cycle
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn tau(&self) -> &[Matrix<u64>] {
        &self.tau
    }

    /// `σ̄` on `𝕜_{c_0}` over 𝔽_p; `None` on the scalar backends, where it is the identity.
    pub fn sigma_bar(&self) -> Option<&Matrix<u64>> {
        self.sigma_bar.as_ref()
    }

    /// Whether `σ̄` is the identity.
    pub fn sigma_bar_is_identity(&self) -> bool {
        match (&self.sigma_bar, self.universe.prime_field()) {
            (Some(sb), Some(field)) => *sb == Matrix::identity(&field, sb.rows()),
            _ => true,
        }
    }

    /// Order of `σ̄` as a field automorphism.
    pub fn sigma_bar_order(&self) -> usize {
        let (Some(sb), Some(field)) = (&self.sigma_bar, self.universe.prime_field()) else {
            return 1;
        };
        let id = Matrix::identity(&field, sb.rows());
        let mut acc = sb.clone();
        let mut order = 1;
        while acc != id {
            acc = acc.mul(&field, sb);
            order += 1;
        }
        order
    }
}

/// The data `(𝕜^d, alpha)` of a module over the skew Laurent ring `𝕜[α^{±1}; σ̄]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PModuleData {
    /// `alpha[row][col]`, every entry a residue at `c_0`.
    pub alpha: Vec<Vec<ResidueElement>>,
}

impl PModuleData {
    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// One-dimensional data `alpha = (c)`.
    pub fn scalar(c: ResidueElement) -> Self {
        PModuleData {
            alpha: vec![vec![c]],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BandVariant {
    /// `Y` acts bijectively.
    M,
    /// `X` acts bijectively.
    N,
}

impl fmt::Display for BandVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandVariant::M => f.write_str("M"),
            BandVariant::N => f.write_str("N"),
        }
    }
}

/// A vector in the weight space at cycle position `position`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandVector {
    pub position: usize,
    pub coords: Vec<ResidueElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BandGenerator {
    X,
    Y,
    Scalar(RingElem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandModule {
    data: BandData,
    pmodule: PModuleData,
    alpha_inv: Vec<Vec<ResidueElement>>,
    variant: BandVariant,
}

pub fn build_band(band: &BandData, l: &PModuleData, variant: BandVariant) -> Result<BandModule> {
    let u = &band.universe;
    let c0 = &band.cycle[0];
    let d = l.dim();
    if d == 0 || l.alpha.iter().any(|row| row.len() != d) {
        return Err(BandError::FieldMismatch(
            "alpha must be a nonempty square matrix".into(),
        ));
    }
    for entry in l.alpha.iter().flatten() {
        if entry.home != *c0 {
            return Err(BandError::FieldMismatch(format!(
                "alpha entry lives at {}, cycle starts at {c0}",
                entry.home
            )));
        }
    }
    let alpha_inv = invert_residue_matrix(u, c0, &l.alpha)?.ok_or(BandError::AlphaNotInvertible)?;
    Ok(BandModule {
        data: band.clone(),
        pmodule: l.clone(),
        alpha_inv,
        variant,
    })
}

/// Inverse of a matrix over the residue field at `c`; `None` when singular.
fn invert_residue_matrix(
    u: &WeightUniverse,
    c: &MaxIdeal,
    a: &[Vec<ResidueElement>],
) -> Result<Option<Vec<Vec<ResidueElement>>>> {
    let d = a.len();
    if d == 1 {
        return Ok(u.inv(&a[0][0]).map(|x| vec![vec![x]]));
    }
    if let Some(field) = u.prime_field() {
        let e = c.degree();
        let flat = flatten_matrix(u, c, a)?;
        let Some(inv) = flat.inverse(&field) else {
            return Ok(None);
        };
        // every e×e block is multiplication by a residue; its first column is that residue
        let mut out = Vec::with_capacity(d);
        for r in 0..d {
            let mut row = Vec::with_capacity(d);
            for col in 0..d {
                row.push(u.from_vector(c, &inv.block(r * e, col * e, e, e).column(0))?);
            }
            out.push(row);
        }
        return Ok(Some(out));
    }
    let rat = |x: &ResidueElement| match &x.value {
        Residue::Rational(q) => Ok(q.clone()),
        _ => Err(BandError::FieldTooLarge(0)),
    };
    let m = Matrix::from_rows(
        a.iter()
            .map(|row| row.iter().map(rat).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
    )
    .expect("square");
    Ok(m.inverse(&Rationals).map(|inv| {
        inv.to_rows()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|q| ResidueElement {
                        home: c.clone(),
                        value: Residue::Rational(q),
                    })
                    .collect()
            })
            .collect()
    }))
}

/// 𝔽_p-matrix of the 𝕜-linear map `v ↦ a·v` on `𝕜^d`.
fn flatten_matrix(
    u: &WeightUniverse,
    c: &MaxIdeal,
    a: &[Vec<ResidueElement>],
) -> Result<Matrix<u64>> {
    let field = u.prime_field().expect("finite backend");
    let e = c.degree();
    let d = a.len();
    let q = c.as_poly().expect("finite point");
    let mut out = Matrix::zero(&field, d * e, d * e);
    for (r, row) in a.iter().enumerate() {
        for (col, x) in row.iter().enumerate() {
            let poly = crate::poly::FpPoly::new(field.modulus(), u.to_vector(x)?);
            out.set_block(r * e, col * e, &poly.multiplication_matrix(q));
        }
    }
    Ok(out)
}

impl BandModule {
    pub fn data(&self) -> &BandData {
        &self.data
    }

    pub fn universe(&self) -> &WeightUniverse {
        &self.data.universe
    }

    pub fn cycle(&self) -> &[MaxIdeal] {
        &self.data.cycle
    }

    pub fn period(&self) -> usize {
        self.data.cycle.len()
    }

    pub fn dim(&self) -> usize {
        self.pmodule.dim()
    }

    pub fn pmodule(&self) -> &PModuleData {
        &self.pmodule
    }

    pub fn variant(&self) -> BandVariant {
        self.variant
    }

    pub fn zero_vector(&self, position: usize) -> BandVector {
        let c = &self.data.cycle[position];
        BandVector {
            position,
            coords: vec![self.universe().zero(c); self.dim()],
        }
    }

    /// The vector with `value` in coordinate `coord` and zeros elsewhere.
    pub fn basis_vector(&self, position: usize, coord: usize, value: ResidueElement) -> BandVector {
        let mut v = self.zero_vector(position);
        v.coords[coord] = value;
        v
    }

    fn mat_vec(
        &self,
        a: &[Vec<ResidueElement>],
        v: &[ResidueElement],
    ) -> Result<Vec<ResidueElement>> {
        let u = self.universe();
        a.iter()
            .map(|row| {
                let mut acc = u.zero(&row[0].home);
                for (x, y) in row.iter().zip(v) {
                    acc = u.add(&acc, &u.mul(x, y)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// `V_j → V_{j+1}`: `σ` on coordinates, then `alpha` when wrapping to `V_0`.
    fn forward(&self, v: &BandVector) -> Result<BandVector> {
        let u = self.universe();
        let k = self.period();
        let j = v.position;
        let (from, to) = (&self.data.cycle[j], &self.data.cycle[(j + 1) % k]);
        let mut coords = v
            .coords
            .iter()
            .map(|x| u.sigma_residue(from, to, x))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if j + 1 == k {
            coords = self.mat_vec(&self.pmodule.alpha, &coords)?;
        }
        Ok(BandVector {
            position: (j + 1) % k,
            coords,
        })
    }

    /// Inverse of [`Self::forward`]: `V_j → V_{j-1}`.
    fn backward(&self, w: &BandVector) -> Result<BandVector> {
        let u = self.universe();
        let k = self.period();
        let j = w.position;
        let to = &self.data.cycle[j];
        let coords = if j == 0 {
            self.mat_vec(&self.alpha_inv, &w.coords)?
        } else {
            w.coords.clone()
        };
        let coords = coords
            .iter()
            .map(|x| u.invert_sigma(to, x))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(BandVector {
            position: (j + k - 1) % k,
            coords,
        })
    }

    fn scale(&self, s: &ResidueElement, v: BandVector) -> Result<BandVector> {
        let u = self.universe();
        let coords = v
            .coords
            .iter()
            .map(|x| u.mul(s, x))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(BandVector {
            position: v.position,
            coords,
        })
    }

    /// Applies a generator to a weight vector.
    pub fn act(&self, generator: &BandGenerator, v: &BandVector) -> Result<BandVector> {
        let u = self.universe();
        let k = self.period();
        match (generator, self.variant) {
            (BandGenerator::X, BandVariant::N) => self.forward(v),
            (BandGenerator::Y, BandVariant::M) => self.backward(v),
            (BandGenerator::X, BandVariant::M) => {
                let w = self.forward(v)?;
                let st = u.sigma_t_value(&self.data.cycle[w.position]);
                self.scale(&st, w)
            }
            (BandGenerator::Y, BandVariant::N) => {
                let w = self.backward(v)?;
                let t = u.t_value(&self.data.cycle[w.position]);
                self.scale(&t, w)
            }
            (BandGenerator::Scalar(r), _) => {
                let c = &self.data.cycle[v.position % k];
                let s = u.reduce(c, r)?;
                self.scale(&s, v.clone())
            }
        }
    }

    /// Whether `Y` is bijective: always for `M`, and for `N` iff `t ∉ c_i` for all `i`.
    pub fn y_bijective(&self) -> bool {
        match self.variant {
            BandVariant::M => true,
            BandVariant::N => self
                .cycle()
                .iter()
                .all(|c| !self.universe().vanishing(c).t_in),
        }
    }

    /// Whether `X` is bijective: always for `N`, and for `M` iff `σ(t) ∉ c_i` for all `i`.
    pub fn x_bijective(&self) -> bool {
        match self.variant {
            BandVariant::N => true,
            BandVariant::M => self
                .cycle()
                .iter()
                .all(|c| !self.universe().vanishing(c).sigma_t_in),
        }
    }
}

/// Whether `𝕜^d` has no proper nonzero 𝕜-subspace stable under `α = alpha·σ̄`.
pub fn pmodule_is_simple(band: &BandData, l: &PModuleData, budget: u64) -> Result<bool> {
    let d = l.dim();
    if d == 1 {
        return Ok(true);
    }
    let u = &band.universe;
    let Some(field) = u.prime_field() else {
        return Err(BandError::FieldTooLarge(budget));
    };
    let c0 = &band.cycle[0];
    let e = c0.degree();
    let n = d * e;
    let sb = band
        .sigma_bar
        .as_ref()
        .expect("finite backend has sigma_bar");
    let mut twist = Matrix::zero(&field, n, n);
    let mut scalars = Matrix::zero(&field, n, n);
    let hmul = crate::poly::FpPoly::x(field.modulus())
        .multiplication_matrix(c0.as_poly().expect("finite point"));
    for r in 0..d {
        twist.set_block(r * e, r * e, sb);
        scalars.set_block(r * e, r * e, &hmul);
    }
    let a = flatten_matrix(u, c0, &l.alpha)?.mul(&field, &twist);
    let ops = [&a, &scalars];
    let p = field.modulus();
    let seeds = projective_count(p, n);
    if seeds > budget as u128 {
        return Err(BandError::FieldTooLarge(budget));
    }
    let mut all_simple = true;
    for_each_projective_point(p, n, |v| {
        let span = closure(&field, &ops, &[v.to_vec()]);
        if span.dim() < n {
            all_simple = false;
            return false;
        }
        true
    });
    Ok(all_simple)
}

/// Number of lines through the origin in `𝔽_p^n`.
pub fn projective_count(p: u64, n: usize) -> u128 {
    let pn = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    (pn - 1) / (p as u128 - 1)
}

/// Calls `visit` on one representative (first nonzero coordinate 1) of every
/// line in `𝔽_p^n`, stopping early when `visit` returns false.
pub fn for_each_projective_point(p: u64, n: usize, mut visit: impl FnMut(&[u64]) -> bool) {
    for lead in 0..n {
        let free = n - lead - 1;
        let count = (p as u128).pow(free as u32);
        let mut v = vec![0u64; n];
        v[lead] = 1;
        for idx in 0..count {
            let mut rest = idx;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (rest % p as u128) as u64;
                rest /= p as u128;
            }
            if !visit(&v) {
                return;
            }
        }
    }
}

/// Decides whether two band modules are isomorphic.
///
/// On the finite backend this searches for an invertible `S` with
/// `S·H₁ = H₂·S`, `S·X₁ = X₂·S`, `S·Y₁ = Y₂·S`. With one-dimensional data
/// on the scalar backends it compares the scalar by which `Y^k` (or `X^k`)
/// acts on the weight space of a common cycle point.
pub fn band_iso(a: &BandModule, b: &BandModule, budget: u64) -> Result<bool> {
    if a.universe() != b.universe() || a.dim() != b.dim() || a.period() != b.period() {
        return Ok(false);
    }
    let Some(shift) = (0..b.period()).find(|&j| b.cycle()[j] == a.cycle()[0]) else {
        return Ok(false);
    };
    if (0..a.period()).any(|i| a.cycle()[i] != b.cycle()[(i + shift) % b.period()]) {
        return Ok(false);
    }
    if a.y_bijective() != b.y_bijective() || a.x_bijective() != b.x_bijective() {
        return Ok(false);
    }
    match (band_matrices(a), band_matrices(b)) {
        (Ok(Realization::Prime(ma)), Ok(Realization::Prime(mb))) => Ok(has_invertible_intertwiner(
            &ma.field,
            [(&ma.h, &mb.h), (&ma.x, &mb.x), (&ma.y, &mb.y)],
            budget,
        )),
        _ if a.dim() == 1 => scalar_band_iso(a, b, shift),
        (Ok(Realization::Rational(ma)), Ok(Realization::Rational(mb))) => {
            Ok(has_invertible_intertwiner(
                &Rationals,
                [(&ma.h, &mb.h), (&ma.x, &mb.x), (&ma.y, &mb.y)],
                budget,
            ))
        }
        _ => Err(BandError::FieldTooLarge(budget)),
    }
}

fn scalar_band_iso(a: &BandModule, b: &BandModule, shift: usize) -> Result<bool> {
    let gen = if a.y_bijective() {
        BandGenerator::Y
    } else {
        BandGenerator::X
    };
    let turn = |m: &BandModule, pos: usize| -> Result<ResidueElement> {
        let mut v = m.basis_vector(pos, 0, m.universe().one(&m.cycle()[pos]));
        for _ in 0..m.period() {
            v = m.act(&gen, &v)?;
        }
        Ok(v.coords[0].clone())
    };
    Ok(turn(a, 0)? == turn(b, shift)?)
}

/// Matching actions `(A, B)` of one generator on two modules.
pub type ActionPair<'a, E> = (&'a Matrix<E>, &'a Matrix<E>);

/// Whether some invertible `S` satisfies `S·A = B·S` for every pair.
pub fn has_invertible_intertwiner<F: Field>(
    field: &F,
    pairs: [ActionPair<'_, F::Elem>; 3],
    budget: u64,
) -> bool {
    let n = pairs[0].0.rows();
    if pairs[0].1.rows() != n {
        return false;
    }
    if n == 0 {
        return true;
    }
    // unknown S_{il} sits at index i*n + l
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (a, b) in pairs {
        for i in 0..n {
            for j in 0..n {
                let mut eq = vec![field.zero(); n * n];
                for l in 0..n {
                    let idx = i * n + l;
                    eq[idx] = field.add(&eq[idx], a.get(l, j));
                    let idx = l * n + j;
                    eq[idx] = field.sub(&eq[idx], b.get(i, l));
                }
                rows.push(eq);
            }
        }
    }
    let system = Matrix::from_rows(rows).expect("rectangular");
    let kernel = system.kernel(field);
    if kernel.is_empty() {
        return false;
    }
    let as_matrix = |v: &[F::Elem]| Matrix::from_fn(n, n, |i, l| v[i * n + l].clone());
    let combine = |coeffs: &[F::Elem]| {
        let mut v = vec![field.zero(); n * n];
        for (c, basis) in coeffs.iter().zip(&kernel) {
            for (slot, x) in v.iter_mut().zip(basis) {
                *slot = field.add(slot, &field.mul(c, x));
            }
        }
        v
    };
    if let Some(p) = field.order() {
        let total = (p as u128).checked_pow(kernel.len() as u32);
        if total.is_some_and(|t| t <= budget as u128) {
            let mut found = false;
            for_each_projective_point(p, kernel.len(), |c| {
                let coeffs: Vec<F::Elem> = c.iter().map(|&x| field.from_i64(x as i64)).collect();
                if as_matrix(&combine(&coeffs)).is_invertible(field) {
                    found = true;
                    return false;
                }
                true
            });
            return found;
        }
    }
    if kernel.len() == 1 {
        return as_matrix(&kernel[0]).is_invertible(field);
    }
    // invertible elements form a Zariski-open subset, so random
    // combinations find one quickly when it exists
    let mut rng = ChaCha8Rng::seed_from_u64(INTERTWINER_SEED);
    (0..256).any(|_| {
        let coeffs: Vec<F::Elem> = (0..kernel.len())
            .map(|_| field.from_i64(rng.gen_range(-1000..=1000)))
            .collect();
        as_matrix(&combine(&coeffs)).is_invertible(field)
    })
}

/// Convenience: a 1-dimensional datum with `alpha = c` (an integer) at `c_0`.
pub fn scalar_pmodule(band: &BandData, c: i64) -> PModuleData {
    PModuleData::scalar(band.universe.from_int(&band.cycle[0], c))
}

/// The prime field of a band over the finite backend.
pub fn band_field(band: &BandData) -> Option<PrimeField> {
    band.universe.prime_field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::check_relations;
    use crate::universe::{make_universe, UniverseSpec};

    fn f7(t: &[i64]) -> WeightUniverse {
        make_universe(UniverseSpec::FinitePoly {
            p: 7,
            f: vec![0, 0, 1],
            t: t.to_vec(),
        })
        .unwrap()
    }

    fn lin(a: i64) -> MaxIdeal {
        MaxIdeal::linear(7, a)
    }

    #[test]
    fn detects_two_cycle() {
        let u = f7(&[0, 1]);
        let b = detect_band_data(&u, &lin(2), 10).unwrap();
        assert_eq!(b.cycle(), &[lin(2), lin(4)]);
        assert!(b.sigma_bar_is_identity());
        assert!(matches!(
            detect_band_data(&u, &lin(3), 10),
            Err(BandError::NotOnCycle(..))
        ));
    }

    #[test]
    fn frobenius_sigma_bar() {
        let u = make_universe(UniverseSpec::FinitePoly {
            p: 2,
            f: vec![0, 0, 1],
            t: vec![0, 1],
        })
        .unwrap();
        let q = u.parse_ideal("(h^2+h+1)").unwrap();
        let b = detect_band_data(&u, &q, 4).unwrap();
        assert_eq!(b.period(), 1);
        assert!(!b.sigma_bar_is_identity());
        assert_eq!(b.sigma_bar_order(), 2);
    }

    #[test]
    fn wrap_entry_is_inverse_of_alpha() {
        let u = f7(&[0, 1]);
        let b = detect_band_data(&u, &lin(2), 10).unwrap();
        let m = build_band(&b, &scalar_pmodule(&b, 3), BandVariant::M).unwrap();
        let v = m.basis_vector(0, 0, u.one(&lin(2)));
        let y = m.act(&BandGenerator::Y, &v).unwrap();
        assert_eq!(y.position, 1);
        assert_eq!(y.coords[0], u.from_int(&lin(4), 5));
        let Realization::Prime(fm) = band_matrices(&m).unwrap() else {
            panic!()
        };
        assert!(check_relations(&fm).ok);
    }

    #[test]
    fn pmodule_simplicity_examples() {
        let u = make_universe(UniverseSpec::FinitePoly {
            p: 7,
            f: vec![0, 1],
            t: vec![0, 1],
        })
        .unwrap();
        let b = detect_band_data(&u, &lin(3), 1).unwrap();
        let c = |v| u.from_int(&lin(3), v);
        let diag = PModuleData {
            alpha: vec![vec![c(1), c(0)], vec![c(0), c(2)]],
        };
        assert!(!pmodule_is_simple(&b, &diag, DEFAULT_SEARCH_BUDGET).unwrap());
        // companion matrix of x^2 - 3, irreducible since 3 is not a square mod 7
        let comp = PModuleData {
            alpha: vec![vec![c(0), c(3)], vec![c(1), c(0)]],
        };
        assert!(pmodule_is_simple(&b, &comp, DEFAULT_SEARCH_BUDGET).unwrap());
        assert!(pmodule_is_simple(&b, &scalar_pmodule(&b, 4), DEFAULT_SEARCH_BUDGET).unwrap());
    }

    #[test]
    fn iso_one_dimensional() {
        let u = f7(&[0, 1]);
        let b = detect_band_data(&u, &lin(2), 10).unwrap();
        let m = |c, v| build_band(&b, &scalar_pmodule(&b, c), v).unwrap();
        assert!(band_iso(&m(3, BandVariant::M), &m(3, BandVariant::M), 1000).unwrap());
        assert!(!band_iso(&m(3, BandVariant::M), &m(5, BandVariant::M), 1000).unwrap());
        // t = h vanishes on neither cycle point, so M^c ≅ N^{c'} for suitable c'
        let found = (1..7)
            .filter(|&c| band_iso(&m(3, BandVariant::M), &m(c, BandVariant::N), 1000).unwrap())
            .count();
        assert_eq!(found, 1);
    }

    #[test]
    fn m_vs_n_blocked_by_t() {
        let u = f7(&[-2, 1]);
        let b = detect_band_data(&u, &lin(2), 10).unwrap();
        for c in 1..7 {
            for c2 in 1..7 {
                let m = build_band(&b, &scalar_pmodule(&b, c), BandVariant::M).unwrap();
                let n = build_band(&b, &scalar_pmodule(&b, c2), BandVariant::N).unwrap();
                assert!(!band_iso(&m, &n, 1000).unwrap());
            }
        }
    }

    #[test]
    fn rotation_of_cycle_is_recognized() {
        let u = f7(&[0, 1]);
        let b = detect_band_data(&u, &lin(2), 10).unwrap();
        let b2 = detect_band_data(&u, &lin(4), 10).unwrap();
        let m = build_band(&b, &scalar_pmodule(&b, 3), BandVariant::M).unwrap();
        let hits = (1..7)
            .filter(|&c| {
                band_iso(
                    &m,
                    &build_band(&b2, &scalar_pmodule(&b2, c), BandVariant::M).unwrap(),
                    1000,
                )
                .unwrap()
            })
            .count();
        assert_eq!(hits, 1);
    }
}
