//! Independent checks on flat matrix realizations.
//!
//! A finite-dimensional module is written out once as matrices `H`, `X`, `Y`
//! by applying the module's own action to a basis. Everything after that
//! (relation checks, simplicity, weight decomposition) only uses matrix
//! arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::band::{BandError, BandGenerator, BandModule, BandVector};
use crate::factor::factor;
use crate::field::{Field, PrimeField, Rationals};
use crate::linalg::{closure, Matrix, SubspaceBuilder};
use crate::poly::FpPoly;
use crate::string::{string_act, Generator, StringElement, StringError, StringKind, StringModule};
use crate::universe::{MaxIdeal, Residue, ResidueElement, RingElem, WeightUniverse};

/// Default number of closure starts for the exhaustive simplicity search.
pub const DEFAULT_CLOSURE_BUDGET: u64 = 1_000_000;
/// Trials of the randomized fallback.
pub const RANDOM_TRIALS: usize = 10_000;
/// Seed of the randomized fallback.
pub const RANDOM_SEED: u64 = 0x0c1a_5e1f;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("module is not finite-dimensional over a prime field or the rationals: {0}")]
    NotFinite(String),
    #[error("closure search needs {needed} starts, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Band(#[from] BandError),
}

type Result<T> = std::result::Result<T, OracleError>;

/// Matrices of `h`, `X`, `Y` on a finite-dimensional module, plus the
/// coefficient lists (lowest degree first) of `f` and `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule<F: Field> {
    pub field: F,
    pub dim: usize,
    pub h: Matrix<F::Elem>,
    pub x: Matrix<F::Elem>,
    pub y: Matrix<F::Elem>,
    pub f: Vec<F::Elem>,
    pub t: Vec<F::Elem>,
}

/// A realization over 𝔽_p (finite backend) or ℚ (affine backend).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    Prime(FiniteModule<PrimeField>),
    Rational(FiniteModule<Rationals>),
}

impl Realization {
    pub fn dim(&self) -> usize {
        match self {
            Realization::Prime(m) => m.dim,
            Realization::Rational(m) => m.dim,
        }
    }

    pub fn check_relations(&self) -> RelationReport {
        match self {
            Realization::Prime(m) => check_relations(m),
            Realization::Rational(m) => check_relations(m),
        }
    }

    pub fn brute_simple(&self, opts: &BruteOptions) -> Result<Simplicity> {
        match self {
            Realization::Prime(m) => brute_simple(m, opts),
            Realization::Rational(m) => brute_simple_rational(m, opts),
        }
    }
}

/// Either kind of finite-dimensional module.
#[derive(Clone, Copy, Debug)]
pub enum ModuleRef<'a> {
    String(&'a StringModule),
    Band(&'a BandModule),
}

pub fn to_matrices(module: ModuleRef<'_>) -> Result<Realization> {
    match module {
        ModuleRef::String(s) => string_matrices(s),
        ModuleRef::Band(b) => band_matrices(b),
    }
}

/// A weight vector: block index and coordinates in `𝕜_block^d`.
type WeightVec = (usize, Vec<ResidueElement>);

/// Fills matrices by acting on the basis `{h^s · e_{block, coord}}`.
fn realize(
    u: &WeightUniverse,
    blocks: &[MaxIdeal],
    d: usize,
    act: impl Fn(&str, WeightVec) -> Result<Option<WeightVec>>,
) -> Result<Realization> {
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, m| {
            let here = *acc;
            *acc += d * m.degree();
            Some(here)
        })
        .collect();
    let n: usize = blocks.iter().map(|m| d * m.degree()).sum();
    let mut basis: Vec<WeightVec> = Vec::with_capacity(n);
    for (j, m) in blocks.iter().enumerate() {
        for coord in 0..d {
            for s in 0..m.degree() {
                let mut coords = vec![u.zero(m); d];
                coords[coord] = match u.prime_field() {
                    Some(_) => {
                        let mut v = vec![0; s + 1];
                        v[s] = 1;
                        u.from_vector(m, &v).map_err(BandError::from)?
                    }
                    None => u.one(m),
                };
                basis.push((j, coords));
            }
        }
    }
    let mut columns: [Vec<Vec<ResidueElement>>; 3] = Default::default();
    let mut landing: [Vec<Option<WeightVec>>; 3] = Default::default();
    for (g, name) in ["h", "X", "Y"].iter().enumerate() {
        for b in &basis {
            landing[g].push(act(name, b.clone())?);
        }
        columns[g].clear();
    }
    match u.prime_field() {
        Some(field) => {
            let flat = |w: &Option<WeightVec>| -> Result<Vec<u64>> {
                let mut col = vec![0u64; n];
                if let Some((j, coords)) = w {
                    let e = blocks[*j].degree();
                    for (c, x) in coords.iter().enumerate() {
                        let v = u.to_vector(x).map_err(BandError::from)?;
                        col[offsets[*j] + c * e..offsets[*j] + (c + 1) * e].copy_from_slice(&v);
                    }
                }
                Ok(col)
            };
            let mat = |g: usize| -> Result<Matrix<u64>> {
                let cols = landing[g].iter().map(flat).collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_columns(n, &cols))
            };
            let (f, t) = u.poly_data().expect("finite backend");
            Ok(Realization::Prime(FiniteModule {
                field,
                dim: n,
                h: mat(0)?,
                x: mat(1)?,
                y: mat(2)?,
                f: f.coeffs().to_vec(),
                t: t.coeffs().to_vec(),
            }))
        }
        None => {
            let Some((a, b, t0, t1)) = u.affine_data() else {
                return Err(OracleError::NotFinite(
                    "residue fields are not prime fields".into(),
                ));
            };
            let flat = |w: &Option<WeightVec>| -> Result<Vec<num_rational::BigRational>> {
                let mut col = vec![Rationals.zero(); n];
                if let Some((j, coords)) = w {
                    for (c, x) in coords.iter().enumerate() {
                        let Residue::Rational(q) = &x.value else {
                            return Err(OracleError::NotFinite("non-rational residue".into()));
                        };
                        col[offsets[*j] + c] = q.clone();
                    }
                }
                Ok(col)
            };
            let mat = |g: usize| -> Result<Matrix<num_rational::BigRational>> {
                let cols = landing[g].iter().map(flat).collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_columns(n, &cols))
            };
            Ok(Realization::Rational(FiniteModule {
                field: Rationals,
                dim: n,
                h: mat(0)?,
                x: mat(1)?,
                y: mat(2)?,
                f: vec![b.clone(), a.clone()],
                t: vec![t0.clone(), t1.clone()],
            }))
        }
    }
}

fn h_element(u: &WeightUniverse) -> RingElem {
    match u.prime_field() {
        Some(field) => RingElem::Poly(FpPoly::x(field.modulus())),
        None => RingElem::Rational(vec![Rationals.zero(), Rationals.one()]),
    }
}

/// Realizes a bounded string module.
pub fn string_matrices(module: &StringModule) -> Result<Realization> {
    let u = module.universe();
    let StringKind::Bounded(_) = module.kind() else {
        return Err(OracleError::NotFinite(format!("{} string", module.kind())));
    };
    if u.power_data().is_some() {
        return Err(OracleError::NotFinite("power-map residues".into()));
    }
    let blocks = module.window().to_vec();
    let h = h_element(u);
    realize(u, &blocks, 1, |g, (j, coords)| {
        let gen = match g {
            "h" => Generator::Scalar(h.clone()),
            "X" => Generator::X,
            _ => Generator::Y,
        };
        let elem = StringElement {
            position: j as i64,
            value: coords[0].clone(),
        };
        Ok(string_act(module, &gen, &elem)?.map(|e| (e.position as usize, vec![e.value])))
    })
}

/// Realizes a band module.
pub fn band_matrices(module: &BandModule) -> Result<Realization> {
    let u = module.universe();
    if u.power_data().is_some() {
        return Err(OracleError::NotFinite("power-map residues".into()));
    }
    let h = h_element(u);
    realize(u, module.cycle(), module.dim(), |g, (j, coords)| {
        let gen = match g {
            "h" => BandGenerator::Scalar(h.clone()),
            "X" => BandGenerator::X,
            _ => BandGenerator::Y,
        };
        let w = module.act(
            &gen,
            &BandVector {
                position: j,
                coords,
            },
        )?;
        Ok(Some((w.position, w.coords)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `Y·X = t(H)`
    YxIsT,
    /// `X·Y = t(f(H))`
    XyIsSigmaT,
    /// `X·H = f(H)·X`
    XTwistsH,
    /// `H·Y = Y·f(H)`
    YTwistsH,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::YxIsT => "Y*X = t(H)",
            Relation::XyIsSigmaT => "X*Y = t(f(H))",
            Relation::XTwistsH => "X*H = f(H)*X",
            Relation::YTwistsH => "H*Y = Y*f(H)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub ok: bool,
    pub violations: Vec<Relation>,
}

pub fn check_relations<F: Field>(fm: &FiniteModule<F>) -> RelationReport
where
    F::Elem: PartialEq,
{
    let k = &fm.field;
    let fh = fm.h.eval_poly(k, &fm.f);
    let th = fm.h.eval_poly(k, &fm.t);
    let tfh = fh.eval_poly(k, &fm.t);
    let mut violations = Vec::new();
    if fm.y.mul(k, &fm.x) != th {
        violations.push(Relation::YxIsT);
    }
    if fm.x.mul(k, &fm.y) != tfh {
        violations.push(Relation::XyIsSigmaT);
    }
    if fm.x.mul(k, &fm.h) != fh.mul(k, &fm.x) {
        violations.push(Relation::XTwistsH);
    }
    if fm.h.mul(k, &fm.y) != fm.y.mul(k, &fh) {
        violations.push(Relation::YTwistsH);
    }
    RelationReport {
        ok: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Simplicity {
    Simple,
    NotSimple,
    /// No proper submodule found by the randomized search.
    ProbablySimple,
}

impl Simplicity {
    /// True unless a proper submodule was found.
    pub fn is_simple(self) -> bool {
        !matches!(self, Simplicity::NotSimple)
    }

    pub fn is_certain(self) -> bool {
        !matches!(self, Simplicity::ProbablySimple)
    }
}

impl fmt::Display for Simplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Simplicity::Simple => "simple",
            Simplicity::NotSimple => "not simple",
            Simplicity::ProbablySimple => "probably simple",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteOptions {
    /// Maximum number of closure starts for the exact search.
    pub budget: u64,
    /// Fall back to random seeds when over budget instead of failing.
    pub randomized: bool,
    pub seed: u64,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions {
            budget: DEFAULT_CLOSURE_BUDGET,
            randomized: true,
            seed: RANDOM_SEED,
        }
    }
}

/// Characteristic polynomial over 𝔽_p, via reduction to Hessenberg form.
pub fn char_poly(field: &PrimeField, a: &Matrix<u64>) -> FpPoly {
    let p = field.modulus();
    let n = a.rows();
    let mut m = a.clone();
    for col in 0..n.saturating_sub(2) {
        let pivot_row = col + 1;
        let Some(i) = (pivot_row..n).find(|&i| *m.get(i, col) != 0) else {
            continue;
        };
        if i != pivot_row {
            for c in 0..n {
                let (x, y) = (*m.get(i, c), *m.get(pivot_row, c));
                m.set(i, c, y);
                m.set(pivot_row, c, x);
            }
            for r in 0..n {
                let (x, y) = (*m.get(r, i), *m.get(r, pivot_row));
                m.set(r, i, y);
                m.set(r, pivot_row, x);
            }
        }
        let pinv = field.inv(m.get(pivot_row, col)).expect("nonzero pivot");
        for j in pivot_row + 1..n {
            let factor = field.mul(m.get(j, col), &pinv);
            if factor == 0 {
                continue;
            }
            // row_j -= factor * row_pivot; col_pivot += factor * col_j
            for c in 0..n {
                let v = field.sub(m.get(j, c), &field.mul(&factor, m.get(pivot_row, c)));
                m.set(j, c, v);
            }
            for r in 0..n {
                let v = field.add(m.get(r, pivot_row), &field.mul(&factor, m.get(r, j)));
                m.set(r, pivot_row, v);
            }
        }
    }
    // p_k = (x - m_kk) p_{k-1} - Σ_i m_{k-i,k} (∏ subdiagonal) p_{k-i-1}, 1-based
    let mut polys = vec![FpPoly::one(p)];
    for k in 1..=n {
        let diag = FpPoly::new(p, vec![field.neg(m.get(k - 1, k - 1)), 1]);
        let mut pk = diag.mul(&polys[k - 1]);
        let mut prod = 1u64;
        for i in 1..k {
            prod = field.mul(&prod, m.get(k - i, k - i - 1));
            let coeff = field.mul(&prod, m.get(k - i - 1, k - 1));
            pk = pk.sub(&polys[k - i - 1].scale(coeff));
        }
        polys.push(pk);
    }
    polys.pop().expect("nonempty")
}

/// `q(A)` for a polynomial over 𝔽_p.
fn eval_fp(field: &PrimeField, a: &Matrix<u64>, q: &FpPoly) -> Matrix<u64> {
    a.eval_poly(field, q.coeffs())
}

/// Seed spaces for the exact search: for each irreducible factor `q` of the
/// characteristic polynomial, a basis of `ker q(H)` over `𝕜_q = 𝔽_p[h]/(q)`,
/// given as the vectors `H^s b_i` for `s < deg q`.
///
/// Every nonzero submodule is `H`-stable, so it meets some `ker q(H)` in a
/// nonzero `𝕜_q`-subspace; one seed per `𝕜_q`-line of that kernel suffices.
fn kernel_seed_spaces(fm: &FiniteModule<PrimeField>) -> Vec<(usize, Vec<Vec<Vec<u64>>>)> {
    let field = &fm.field;
    let cp = char_poly(field, &fm.h);
    let mut out = Vec::new();
    for (q, _) in factor(&cp) {
        let e = q.degree().expect("nonconstant factor");
        let kernel = eval_fp(field, &fm.h, &q).kernel(field);
        let mut span = SubspaceBuilder::new(*field, fm.dim);
        let mut basis = Vec::new();
        for v in kernel {
            if span.contains(&v) {
                continue;
            }
            let mut powers = vec![v];
            for _ in 1..e {
                let next = fm.h.mul_vec(field, powers.last().expect("nonempty"));
                powers.push(next);
            }
            for w in &powers {
                span.insert(w);
            }
            basis.push(powers);
        }
        out.push((e, basis));
    }
    out
}

/// Whether the module has no proper nonzero submodule, by closure search.
pub fn brute_simple(fm: &FiniteModule<PrimeField>, opts: &BruteOptions) -> Result<Simplicity> {
    let n = fm.dim;
    if n == 0 {
        return Ok(Simplicity::NotSimple);
    }
    let field = &fm.field;
    let p = field.modulus() as u128;
    let ops = [&fm.h, &fm.x, &fm.y];
    let spaces = kernel_seed_spaces(fm);
    let needed: u128 = spaces
        .iter()
        .map(|(e, basis)| {
            let qe = p.saturating_pow(*e as u32);
            qe.checked_pow(basis.len() as u32)
                .map(|t| (t - 1) / (qe - 1))
                .unwrap_or(u128::MAX)
        })
        .fold(0u128, |a, b| a.saturating_add(b));
    let spans = |seed: Vec<u64>| closure(field, &ops, &[seed]).dim() == n;

    if needed <= opts.budget as u128 {
        for (e, basis) in &spaces {
            let combos = residue_lines(field.modulus(), *e, basis.len());
            for coeffs in combos {
                if !spans(combine(field, n, basis, &coeffs)) {
                    return Ok(Simplicity::NotSimple);
                }
            }
        }
        return Ok(Simplicity::Simple);
    }
    if !opts.randomized {
        return Err(OracleError::BudgetExceeded {
            needed,
            budget: opts.budget,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..RANDOM_TRIALS {
        let (e, basis) = &spaces[rng.gen_range(0..spaces.len())];
        let coeffs: Vec<Vec<u64>> = (0..basis.len())
            .map(|_| (0..*e).map(|_| rng.gen_range(0..field.modulus())).collect())
            .collect();
        let v = combine(field, n, basis, &coeffs);
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        if !spans(v) {
            return Ok(Simplicity::NotSimple);
        }
    }
    Ok(Simplicity::ProbablySimple)
}

/// `Σ_i c_i(H) b_i` where `c_i` has 𝔽_p-coordinates `coeffs[i]` in the basis `1, h, …`.
fn combine(field: &PrimeField, n: usize, basis: &[Vec<Vec<u64>>], coeffs: &[Vec<u64>]) -> Vec<u64> {
    let mut v = vec![0u64; n];
    for (powers, c) in basis.iter().zip(coeffs) {
        for (w, &a) in powers.iter().zip(c) {
            if a == 0 {
                continue;
            }
            for (slot, x) in v.iter_mut().zip(w) {
                *slot = field.add(slot, &field.mul(&a, x));
            }
        }
    }
    v
}

/// One representative per line of `𝕜^m` where `𝕜 = 𝔽_{p^e}`: coefficient
/// tuples whose first nonzero entry is `1`.
fn residue_lines(p: u64, e: usize, m: usize) -> impl Iterator<Item = Vec<Vec<u64>>> {
    let q = (p as u128).pow(e as u32);
    (0..m).flat_map(move |lead| {
        let free = m - lead - 1;
        (0..q.pow(free as u32)).map(move |idx| {
            let mut out = vec![vec![0u64; e]; m];
            out[lead][0] = 1;
            let mut rest = idx;
            for slot in out.iter_mut().skip(lead + 1) {
                let mut digit = rest % q;
                rest /= q;
                for c in slot.iter_mut() {
                    *c = (digit % p as u128) as u64;
                    digit /= p as u128;
                }
            }
            out
        })
    })
}

/// Simplicity over ℚ. Exact when `H` is diagonal with one-dimensional
/// eigenspaces, randomized otherwise.
pub fn brute_simple_rational(
    fm: &FiniteModule<Rationals>,
    opts: &BruteOptions,
) -> Result<Simplicity> {
    let n = fm.dim;
    if n == 0 {
        return Ok(Simplicity::NotSimple);
    }
    let field = &Rationals;
    let ops = [&fm.h, &fm.x, &fm.y];
    let spans = |seed: Vec<num_rational::BigRational>| closure(field, &ops, &[seed]).dim() == n;
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || field.is_zero(fm.h.get(i, j))));
    if diagonal {
        let mut eigen: BTreeMap<num_rational::BigRational, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            eigen.entry(fm.h.get(i, i).clone()).or_default().push(i);
        }
        if eigen.values().all(|idx| idx.len() == 1) {
            for idx in eigen.values() {
                let mut v = vec![field.zero(); n];
                v[idx[0]] = field.one();
                if !spans(v) {
                    return Ok(Simplicity::NotSimple);
                }
            }
            return Ok(Simplicity::Simple);
        }
    }
    if !opts.randomized {
        return Err(OracleError::BudgetExceeded {
            needed: u128::MAX,
            budget: opts.budget,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..RANDOM_TRIALS.min(200) {
        let v: Vec<_> = (0..n)
            .map(|_| field.from_i64(rng.gen_range(-5..=5)))
            .collect();
        if v.iter().all(|x| field.is_zero(x)) {
            continue;
        }
        if !spans(v) {
            return Ok(Simplicity::NotSimple);
        }
    }
    Ok(Simplicity::ProbablySimple)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightDims {
    pub generalized_dim: usize,
    pub weight_dim: usize,
}

/// Generalized and honest weight space dimensions (over 𝔽_p) per irreducible
/// factor of the characteristic polynomial of `H`.
pub fn generalized_weight_decomposition(
    fm: &FiniteModule<PrimeField>,
) -> BTreeMap<MaxIdeal, WeightDims> {
    let field = &fm.field;
    let n = fm.dim;
    factor(&char_poly(field, &fm.h))
        .into_iter()
        .map(|(q, _)| {
            let qh = eval_fp(field, &fm.h, &q);
            let weight_dim = n - qh.rank(field);
            let generalized_dim = n - qh.pow(field, n as u64).rank(field);
            (
                MaxIdeal::Poly(q),
                WeightDims {
                    generalized_dim,
                    weight_dim,
                },
            )
        })
        .collect()
}

/// Whether `X` and `Y` are each either invertible or nilpotent.
pub fn invertible_or_nilpotent<F: Field>(fm: &FiniteModule<F>) -> bool
where
    F::Elem: PartialEq,
{
    [&fm.x, &fm.y]
        .iter()
        .all(|m| m.is_invertible(&fm.field) || m.is_nilpotent(&fm.field))
}

/// Dimension of `span{Y^i · r(H) · X^j · v}`.
pub fn monomial_span_dim<F: Field>(fm: &FiniteModule<F>, v: &[F::Elem]) -> usize
where
    F::Elem: PartialEq,
{
    let k = &fm.field;
    let after_x = closure(k, &[&fm.x], &[v.to_vec()]).basis();
    let after_h = closure(k, &[&fm.h], &after_x).basis();
    closure(k, &[&fm.y], &after_h).dim()
}

/// Direct sum of two realizations over the same field.
pub fn direct_sum<F: Field>(a: &FiniteModule<F>, b: &FiniteModule<F>) -> FiniteModule<F>
where
    F::Elem: PartialEq,
{
    let n = a.dim + b.dim;
    let sum = |x: &Matrix<F::Elem>, y: &Matrix<F::Elem>| {
        let mut m = Matrix::zero(&a.field, n, n);
        m.set_block(0, 0, x);
        m.set_block(a.dim, a.dim, y);
        m
    };
    FiniteModule {
        field: a.field.clone(),
        dim: n,
        h: sum(&a.h, &b.h),
        x: sum(&a.x, &b.x),
        y: sum(&a.y, &b.y),
        f: a.f.clone(),
        t: a.t.clone(),
    }
}
