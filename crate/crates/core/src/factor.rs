//! Factorization over 𝔽_p: square-free decomposition, distinct-degree
//! splitting, and Cantor–Zassenhaus equal-degree splitting.
//!
//! A root scan over the whole prime field cross-checks the linear factors
//! whenever `p · deg ≤ 10⁴`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::FpPoly;

/// Inputs with `p · deg` at or below this bound get the root-scan cross-check.
pub const ROOT_SCAN_LIMIT: u64 = 10_000;

const EDF_SEED: u64 = 0x5eed0ff1e1d;

/// Monic irreducible factors with multiplicity, sorted by the polynomial order.
/// Constants (including zero) have no factors.
pub fn factor(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (sqf, mult) in squarefree_decomposition(&f.monic()) {
        for (block, d) in distinct_degree(&sqf) {
            for q in equal_degree(&block, d) {
                out.push((q, mult));
            }
        }
    }
    out.sort();
    let p = f.modulus();
    let deg = f.degree().unwrap_or(0) as u64;
    if p.saturating_mul(deg) <= ROOT_SCAN_LIMIT {
        let linear: Vec<FpPoly> = out
            .iter()
            .filter(|(q, _)| q.degree() == Some(1))
            .map(|(q, _)| q.clone())
            .collect();
        assert_eq!(
            linear,
            root_scan(f),
            "equal-degree splitting disagrees with root scan"
        );
    }
    out
}

/// Distinct monic irreducible factors, sorted.
pub fn irreducible_factors(f: &FpPoly) -> Vec<FpPoly> {
    factor(f).into_iter().map(|(q, _)| q).collect()
}

/// Linear factors `h - a` found by evaluating at every element of 𝔽_p.
pub fn root_scan(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.modulus();
    if f.is_zero() {
        return Vec::new();
    }
    let mut roots: Vec<FpPoly> = (0..p)
        .filter(|&a| f.eval(a) == 0)
        .map(|a| FpPoly::linear_root(p, a))
        .collect();
    roots.sort();
    roots
}

/// Square-free parts `(g_i, i)` with `f = ∏ g_i^i` for monic `f`.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.modulus();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_decomposition(&pth_root(f)) {
            out.push((g, m * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() && c.degree().unwrap_or(0) > 0 {
        for (g, m) in squarefree_decomposition(&pth_root(&c.monic())) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// `g` with `g^p = f`, for `f` whose exponents are multiples of `p`.
fn pth_root(f: &FpPoly) -> FpPoly {
    let p = f.modulus() as usize;
    let coeffs: Vec<u64> = f.coeffs().iter().step_by(p).copied().collect();
    FpPoly::new(f.modulus(), coeffs)
}

/// Splits a square-free monic polynomial into blocks whose irreducible
/// factors all share one degree.
pub fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.modulus();
    let x = FpPoly::x(p);
    let mut rest = f.monic();
    let mut out = Vec::new();
    let mut frob = x.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        frob = frob.pow_mod(p, &rest);
        let g = rest.gcd(&frob.sub(&x));
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            frob = frob.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

/// Splits a square-free monic product of degree-`d` irreducibles.
pub fn equal_degree(f: &FpPoly, d: usize) -> Vec<FpPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED ^ f.modulus() ^ ((d as u64) << 32));
    let mut out = Vec::new();
    split(f, d, &mut rng, &mut out);
    out.sort();
    out
}

fn split(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(f.monic());
        return;
    }
    let p = f.modulus();
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = a.gcd(f);
        let candidate = if !g.is_one() {
            g
        } else if p == 2 {
            let mut term = a.rem(f);
            let mut trace = term.clone();
            for _ in 1..d {
                term = term.mul_mod(&term, f);
                trace = trace.add(&term);
            }
            trace.gcd(f)
        } else {
            // a^((p^d - 1)/2) = (∏_{i<d} a^{p^i})^((p-1)/2)
            let mut conj = a.rem(f);
            let mut norm = conj.clone();
            for _ in 1..d {
                conj = conj.pow_mod(p, f);
                norm = norm.mul_mod(&conj, f);
            }
            let b = norm.pow_mod((p - 1) / 2, f);
            b.sub(&FpPoly::one(p)).gcd(f)
        };
        let cd = candidate.degree().unwrap_or(0);
        if cd > 0 && cd < n {
            let other = f.div_rem(&candidate).0;
            split(&candidate, d, rng, out);
            split(&other, d, rng, out);
            return;
        }
    }
}

/// Every monic irreducible polynomial of exactly degree `deg` over 𝔽_p,
/// sorted. Enumerates all `p^deg` monic candidates.
pub fn monic_irreducibles(p: u64, deg: usize) -> Vec<FpPoly> {
    let count = (p as u128).pow(deg as u32);
    let mut out = Vec::new();
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(deg + 1);
        let mut rest = idx;
        for _ in 0..deg {
            coeffs.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        coeffs.push(1);
        let q = FpPoly::new(p, coeffs);
        if q.is_irreducible() {
            out.push(q);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(factors: &[(FpPoly, usize)], p: u64) -> FpPoly {
        factors.iter().fold(FpPoly::one(p), |acc, (q, m)| {
            (0..*m).fold(acc, |a, _| a.mul(q))
        })
    }

    #[test]
    fn h_squared_minus_four_over_f5() {
        let f = FpPoly::from_i64(5, &[-4, 0, 1]);
        let fs = irreducible_factors(&f);
        let mut want = vec![FpPoly::linear_root(5, 2), FpPoly::linear_root(5, 3)];
        want.sort();
        assert_eq!(fs, want);
    }

    #[test]
    fn frobenius_power_is_detected_as_pth_power() {
        // (h - 3)∘h^5 = h^5 - 3 = (h - 3)^5 over F_5
        let f = FpPoly::from_i64(5, &[-3, 0, 0, 0, 0, 1]);
        assert_eq!(factor(&f), vec![(FpPoly::linear_root(5, 3), 5)]);
    }

    #[test]
    fn mixed_degrees_over_f2() {
        // (h^2+h+1)(h^3+h+1)(h+1)^2
        let a = FpPoly::from_i64(2, &[1, 1, 1]);
        let b = FpPoly::from_i64(2, &[1, 1, 0, 1]);
        let c = FpPoly::from_i64(2, &[1, 1]);
        let f = a.mul(&b).mul(&c).mul(&c);
        let fs = factor(&f);
        assert_eq!(product(&fs, 2), f);
        assert!(fs.iter().all(|(q, _)| q.is_irreducible()));
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // (1/n) Σ_{d|n} μ(d) p^{n/d} for p = 5: 5, 10, 40
        assert_eq!(monic_irreducibles(5, 1).len(), 5);
        assert_eq!(monic_irreducibles(5, 2).len(), 10);
        assert_eq!(monic_irreducibles(5, 3).len(), 40);
        assert_eq!(monic_irreducibles(2, 4).len(), 3);
    }

    #[test]
    fn product_roundtrip_larger_prime() {
        let p = 101;
        let f = FpPoly::from_i64(p, &[7, -3, 0, 12, 5, 0, 1, 9]);
        let fs = factor(&f);
        assert_eq!(product(&fs, p), f.monic());
        assert!(fs.iter().all(|(q, _)| q.is_irreducible() && q.is_monic()));
    }
}
