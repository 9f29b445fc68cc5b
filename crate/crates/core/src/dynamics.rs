//! Orbits of `down`, the class relation `∼`, and graph export.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::universe::{MaxIdeal, WeightUniverse};

/// Forward orbit of a point under `down`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// Pre-periodic part, starting with the seed.
    pub tail: Vec<MaxIdeal>,
    /// Minimal cycle entered after the tail; empty if none was found in budget.
    pub cycle: Vec<MaxIdeal>,
    /// Number of `down` evaluations performed.
    pub steps_used: usize,
}

impl OrbitReport {
    pub fn is_complete(&self) -> bool {
        !self.cycle.is_empty()
    }

    /// Every point of the orbit, tail first.
    pub fn points(&self) -> impl Iterator<Item = &MaxIdeal> {
        self.tail.iter().chain(self.cycle.iter())
    }

    pub fn contains(&self, m: &MaxIdeal) -> bool {
        self.points().any(|x| x == m)
    }
}

/// Iterates `down` from `m`, detecting the cycle with Brent's algorithm.
///
/// Every point the hare visits is the next orbit element, so the orbit is
/// recorded as it is walked; the tail length is read off once the period is known.
pub fn forward_orbit(u: &WeightUniverse, m: &MaxIdeal, max_steps: usize) -> OrbitReport {
    let max_steps = max_steps.max(1);
    let mut seq = vec![m.clone()];
    let mut power = 1usize;
    let mut lam = 1usize;
    let mut tortoise = 0usize;
    seq.push(u.down(m));
    let mut steps = 1usize;
    while seq[tortoise] != seq[steps] {
        if steps >= max_steps {
            seq.pop();
            return OrbitReport {
                tail: seq,
                cycle: Vec::new(),
                steps_used: steps,
            };
        }
        if power == lam {
            tortoise = steps;
            power *= 2;
            lam = 0;
        }
        let next = u.down(&seq[steps]);
        seq.push(next);
        steps += 1;
        lam += 1;
    }
    let mu = (0..)
        .find(|&i| seq[i] == seq[i + lam])
        .expect("cycle found");
    OrbitReport {
        tail: seq[..mu].to_vec(),
        cycle: seq[mu..mu + lam].to_vec(),
        steps_used: steps,
    }
}

/// Whether the forward orbit of `start` (including `start`) meets `targets`.
///
/// Exact on the affine backend, where orbits need not close; elsewhere the
/// orbit is walked for at most `budget` steps and `None` means it did not close.
pub fn orbit_meets(
    u: &WeightUniverse,
    start: &MaxIdeal,
    targets: &[MaxIdeal],
    budget: usize,
) -> Option<bool> {
    if targets.is_empty() {
        return Some(false);
    }
    if let (Some((a, b, _, _)), MaxIdeal::Rational(x)) = (u.affine_data(), start) {
        return Some(targets.iter().any(|z| match z {
            MaxIdeal::Rational(z) => affine_reaches(a, b, x, z),
            _ => false,
        }));
    }
    let orbit = forward_orbit(u, start, budget);
    if targets.iter().any(|z| orbit.contains(z)) {
        Some(true)
    } else if orbit.is_complete() {
        Some(false)
    } else {
        None
    }
}

/// Whether `f^j(x) = z` for some `j ≥ 0`, where `f(h) = a·h + b`.
fn affine_reaches(a: &BigRational, b: &BigRational, x: &BigRational, z: &BigRational) -> bool {
    if x == z {
        return true;
    }
    if a.is_zero() {
        return z == b;
    }
    if a.is_one() {
        // x + j·b = z
        if b.is_zero() {
            return false;
        }
        let j = (z - x) / b;
        return j.is_integer() && j.is_positive();
    }
    // f^j(x) - c = a^j (x - c) around the fixed point c
    let c = b / (BigRational::one() - a);
    if *x == c {
        return false;
    }
    let ratio = (z - &c) / (x - &c);
    if ratio.is_zero() {
        return false;
    }
    let (abs_a, abs_r) = (a.abs(), ratio.abs());
    let mut power = a.clone();
    loop {
        if power == ratio {
            return true;
        }
        let pa = power.abs();
        let past = if abs_a > BigRational::one() {
            pa > abs_r
        } else if abs_a < BigRational::one() {
            pa < abs_r
        } else {
            // a = -1: powers alternate between -1 and 1
            return ratio == -BigRational::one() || ratio.is_one();
        };
        if past {
            return false;
        }
        power *= a;
    }
}

/// A yes/no answer that may be left open when a budget binds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undetermined { budget: usize },
}

/// Whether the forward orbits of `m` and `n` meet.
pub fn same_class(u: &WeightUniverse, m: &MaxIdeal, n: &MaxIdeal, bound: usize) -> Verdict {
    if m == n {
        return Verdict::Yes;
    }
    let a = forward_orbit(u, m, bound.max(1));
    let b = forward_orbit(u, n, bound.max(1));
    let seen: BTreeSet<&MaxIdeal> = a.points().collect();
    if b.points().any(|x| seen.contains(x)) {
        Verdict::Yes
    } else if a.is_complete() && b.is_complete() {
        Verdict::No
    } else {
        Verdict::Undetermined { budget: bound }
    }
}

/// Whether a class has a root: a point with no `down`-predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    Rooted { root: MaxIdeal },
    Unrooted,
    Undetermined { budget: usize },
}

/// Classifies the class of `m`. A root is a point `n` with `σ(k) ⊄ n` for all
/// `k`, i.e. one where `down` is undefined. `down` is total on every backend,
/// so every class is certified unrooted.
pub fn class_kind(_u: &WeightUniverse, _m: &MaxIdeal, _bound: usize) -> ClassKind {
    ClassKind::Unrooted
}

/// Points of the class with an empty `up`-set found by breadth-first search
/// upward from the orbit of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafSearch {
    pub leaves: Vec<MaxIdeal>,
    pub explored: usize,
    /// False when the node budget cut the search short.
    pub exhausted: bool,
}

/// Searches the class of `m` for points nothing maps onto under `down`.
///
/// Exploration visits at most `bound` points and, over 𝔽_p, only up-sets of
/// degree at most `degree_bound` when `up` is unbounded.
pub fn class_leaves(
    u: &WeightUniverse,
    m: &MaxIdeal,
    bound: usize,
    degree_bound: usize,
) -> LeafSearch {
    let orbit = forward_orbit(u, m, bound.max(1));
    let mut seen: BTreeSet<MaxIdeal> = orbit.points().cloned().collect();
    let mut queue: VecDeque<MaxIdeal> = seen.iter().cloned().collect();
    let mut leaves = Vec::new();
    let mut explored = 0;
    let mut exhausted = orbit.is_complete();
    while let Some(x) = queue.pop_front() {
        if explored >= bound {
            exhausted = false;
            break;
        }
        explored += 1;
        let ups = u.up(&x, degree_bound.max(x.degree()));
        if ups.is_empty() {
            leaves.push(x.clone());
        }
        if u.up_is_truncated(&x) {
            exhausted = false;
        }
        for y in ups {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    leaves.sort();
    LeafSearch {
        leaves,
        explored,
        exhausted: exhausted && queue.is_empty(),
    }
}

/// Graphviz rendering of everything within `depth` steps of the seeds,
/// moving along `down` and `up`. An edge `m -> n` means `n = down(m)`.
pub fn export_dot(u: &WeightUniverse, seeds: &[MaxIdeal], depth: usize) -> String {
    let mut dist: BTreeMap<MaxIdeal, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if !dist.contains_key(s) {
            dist.insert(s.clone(), 0);
            queue.push_back(s.clone());
        }
    }
    let mut edges: BTreeSet<(MaxIdeal, MaxIdeal)> = BTreeSet::new();
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d >= depth {
            continue;
        }
        let below = u.down(&x);
        edges.insert((x.clone(), below.clone()));
        let mut next = vec![below];
        for y in u.up(&x, x.degree()) {
            edges.insert((y.clone(), x.clone()));
            next.push(y);
        }
        for y in next {
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    let mut out = String::from("digraph wgwa {\n  rankdir=LR;\n");
    for m in dist.keys() {
        let v = u.vanishing(m);
        let mut label = m.to_string();
        if v.t_in {
            label.push_str("\\nt in m");
        }
        if v.sigma_t_in {
            label.push_str("\\nsigma(t) in m");
        }
        let shape = if v.t_in || v.sigma_t_in {
            "box"
        } else {
            "ellipse"
        };
        let _ = writeln!(out, "  \"{m}\" [label=\"{label}\", shape={shape}];");
    }
    for (from, to) in &edges {
        let _ = writeln!(out, "  \"{from}\" -> \"{to}\";");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{make_universe, UniverseSpec, ZDot};

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

    fn ang(a: i64, b: i64) -> MaxIdeal {
        MaxIdeal::angle(a, b).unwrap()
    }

    #[test]
    fn orbit_over_f7() {
        let u = fp(7, &[0, 0, 1], &[-2, 1]);
        let r = forward_orbit(&u, &lin(7, 3), 100);
        assert_eq!(r.tail, vec![lin(7, 3)]);
        assert_eq!(r.cycle, vec![lin(7, 2), lin(7, 4)]);
    }

    #[test]
    fn orbit_of_fixed_point() {
        let u = fp(7, &[0, 1], &[0, 1]);
        let r = forward_orbit(&u, &lin(7, 5), 10);
        assert!(r.tail.is_empty());
        assert_eq!(r.cycle, vec![lin(7, 5)]);
    }

    #[test]
    fn orbit_of_angle_eighth() {
        let u = make_universe(UniverseSpec::PowerMap {
            n: 2,
            zdot: ZDot::Outside,
        })
        .unwrap();
        let r = forward_orbit(&u, &ang(1, 8), 100);
        assert_eq!(r.tail, vec![ang(1, 8), ang(1, 4), ang(1, 2)]);
        assert_eq!(r.cycle, vec![ang(0, 1)]);
    }

    #[test]
    fn orbit_budget_exhaustion() {
        let u = make_universe(UniverseSpec::Affine {
            a: num_rational::BigRational::from_integer(2.into()),
            b: num_rational::BigRational::from_integer(0.into()),
            t: vec![],
        })
        .unwrap();
        let r = forward_orbit(&u, &MaxIdeal::rational(3, 1), 5);
        assert!(r.cycle.is_empty());
        assert_eq!(r.tail.len(), 5);
        assert_eq!(r.steps_used, 5);
    }

    #[test]
    fn affine_orbit_membership() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        // f = 2h + 1: 0 -> 1 -> 3 -> 7
        assert!(affine_reaches(&q(2, 1), &q(1, 1), &q(0, 1), &q(7, 1)));
        assert!(!affine_reaches(&q(2, 1), &q(1, 1), &q(0, 1), &q(5, 1)));
        assert!(!affine_reaches(&q(2, 1), &q(1, 1), &q(7, 1), &q(0, 1)));
        // f = h/2: 8 -> 4 -> 2
        assert!(affine_reaches(&q(1, 2), &q(0, 1), &q(8, 1), &q(2, 1)));
        assert!(!affine_reaches(&q(1, 2), &q(0, 1), &q(8, 1), &q(0, 1)));
        // f = h + 3
        assert!(affine_reaches(&q(1, 1), &q(3, 1), &q(1, 1), &q(10, 1)));
        assert!(!affine_reaches(&q(1, 1), &q(3, 1), &q(1, 1), &q(-2, 1)));
        // f = -h + 1 swaps 0 and 1
        assert!(affine_reaches(&q(-1, 1), &q(1, 1), &q(0, 1), &q(1, 1)));
        assert!(!affine_reaches(&q(-1, 1), &q(1, 1), &q(0, 1), &q(2, 1)));
        // constant f = 5
        assert!(affine_reaches(&q(0, 1), &q(5, 1), &q(2, 1), &q(5, 1)));
    }

    #[test]
    fn class_examples() {
        let u = fp(7, &[0, 0, 1], &[-2, 1]);
        assert_eq!(same_class(&u, &lin(7, 3), &lin(7, 5), 50), Verdict::Yes);
        assert_eq!(same_class(&u, &lin(7, 6), &lin(7, 6), 0), Verdict::Yes);
        let pm = make_universe(UniverseSpec::PowerMap {
            n: 2,
            zdot: ZDot::Outside,
        })
        .unwrap();
        assert_eq!(
            same_class(&pm, &MaxIdeal::Zero, &ang(1, 3), 50),
            Verdict::No
        );
        assert_eq!(class_kind(&pm, &ang(1, 3), 10), ClassKind::Unrooted);
    }

    #[test]
    fn leaves_of_constant_map() {
        let u = fp(5, &[2], &[0, 1]);
        let s = class_leaves(&u, &lin(5, 2), 100, 1);
        let mut want = vec![lin(5, 0), lin(5, 1), lin(5, 3), lin(5, 4)];
        want.sort();
        assert_eq!(s.leaves, want);
        assert!(!s.exhausted);
    }

    #[test]
    fn dot_export_counts() {
        let u = fp(5, &[0, 0, 1], &[0, 1]);
        let dot = export_dot(&u, &[lin(5, 4)], 1);
        assert_eq!(dot.matches("->").count(), 3);
        for n in ["(h-4)", "(h-1)", "(h-2)", "(h-3)"] {
            assert!(dot.contains(&format!("\"{n}\" [")), "{n} missing");
        }
        let single = export_dot(&u, &[lin(5, 4)], 0);
        assert_eq!(single.matches("->").count(), 0);
        assert_eq!(single.matches("[label").count(), 1);
        assert_eq!(dot, export_dot(&u, &[lin(5, 4)], 1));
    }
}
