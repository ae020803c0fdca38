//! Independent brute-force oracles, deliberately slow and duplicative:
//! seeded-sample equivalence, shrinking-epsilon deltas, and exhaustive
//! sign-vector cell enumeration backed by vertex enumeration of a slack
//! program. Used only to cross-check the main pipeline.

use maxarity::arrangement::{Hyperplane, Sign};
use maxarity::delta::{make_directional, Flag};
use maxarity::expr::CpwlExpr;
use maxarity::linalg::AffineSubspace;
use maxarity::rat::{dot, rat, ratio, vaxpy, QVec, Rat};
use num_traits::{One, Signed, Zero};

/// Deterministic xorshift64* generator for reproducible rational samples.
pub struct SampleRng(u64);

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// A rational in [-10, 10] with denominator 8.
    pub fn coordinate(&mut self) -> Rat {
        let num = (self.next_u64() % 161) as i64 - 80;
        ratio(num, 8)
    }

    pub fn point(&mut self, dim: usize) -> QVec {
        (0..dim).map(|_| self.coordinate()).collect()
    }
}

/// Compares two expressions at `count` deterministic rational points in
/// [-10, 10]^n; returns the first disagreeing point, if any.
pub fn sample_equivalent(
    f: &CpwlExpr,
    g: &CpwlExpr,
    count: usize,
    seed: u64,
) -> Option<QVec> {
    assert_eq!(f.dimension(), g.dimension());
    let mut rng = SampleRng::new(seed);
    for _ in 0..count {
        let x = rng.point(f.dimension());
        if f.eval(&x).unwrap() != g.eval(&x).unwrap() {
            return Some(x);
        }
    }
    None
}

/// Evaluates the iterated two-sided jump of the gradient along the flag's
/// directionals at epsilon in {1/8, 1/16, ...}, level i scaled by
/// epsilon^(depth - i), until two consecutive values agree. Panics with
/// NO_STABILIZATION after 20 halvings.
pub fn delta_by_shrinking(f: &CpwlExpr, flag: &Flag, x: &[Rat]) -> QVec {
    let dirs = make_directional(flag).unwrap().dirs;
    let mut eps = ratio(1, 8);
    let mut previous: Option<QVec> = None;
    for _ in 0..20 {
        if let Some(value) = try_delta_at(f, &dirs, x, &eps) {
            if previous.as_ref() == Some(&value) {
                return value;
            }
            previous = Some(value);
        } else {
            previous = None;
        }
        eps /= rat(2);
    }
    panic!("NO_STABILIZATION: delta did not stabilize after 20 halvings");
}

/// One evaluation of the iterated difference with fixed base epsilon;
/// None when some evaluation point lands on a tie.
fn try_delta_at(f: &CpwlExpr, dirs: &[QVec], x: &[Rat], eps: &Rat) -> Option<QVec> {
    fn recurse(f: &CpwlExpr, dirs: &[QVec], x: &[Rat], eps: &Rat) -> Option<QVec> {
        match dirs.split_last() {
            None => f.gradient_at(x).ok(),
            Some((v, prefix)) => {
                let plus = recurse(f, prefix, &vaxpy(x, eps, v), eps)?;
                let minus = recurse(f, prefix, &vaxpy(x, &-eps.clone(), v), eps)?;
                Some(maxarity::rat::vsub(&plus, &minus))
            }
        }
    }
    // level i (1-based, innermost first) steps by eps^(depth - i + 1): the
    // outermost difference moves farthest, inner limits are taken first
    let depth = dirs.len() as i32;
    let scaled: Vec<QVec> = dirs
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let weight = power(eps, depth - i as i32);
            v.iter().map(|c| c * &weight).collect()
        })
        .collect();
    recurse(f, &scaled, x, &Rat::one())
}

fn power(base: &Rat, exp: i32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp.max(0) {
        out *= base;
    }
    out
}

/// All full-dimensional cells of the arrangement, as strict sign vectors
/// (true = positive side), by exhausting all 2^m candidates. Feasibility of
/// each open polyhedron is decided independently of the main pipeline: the
/// margin program max t s.t. s_i (a_i . x - b_i) >= t, boxed to make it a
/// polytope, is solved by enumerating basic solutions.
pub fn brute_cells(hs: &[Hyperplane]) -> Vec<Vec<bool>> {
    assert!(hs.len() <= 12, "size cap exceeded");
    let dim = hs.first().map_or(0, |h| h.normal.len());
    if hs.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << hs.len() {
        let signs: Vec<bool> = (0..hs.len()).map(|i| mask >> i & 1 == 1).collect();
        if strictly_feasible(hs, &signs, dim) {
            out.push(signs);
        }
    }
    out
}

/// All cells of every dimension, as full sign vectors over {-, 0, +}, by
/// exhausting 3^m candidates.
pub fn brute_all_cells(hs: &[Hyperplane]) -> Vec<Vec<Sign>> {
    assert!(hs.len() <= 5, "size cap exceeded");
    let dim = hs.first().map_or(0, |h| h.normal.len());
    if hs.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for mask in 0u32..3u32.pow(hs.len() as u32) {
        let mut rest = mask;
        let signs: Vec<Sign> = (0..hs.len())
            .map(|_| {
                let s = match rest % 3 {
                    0 => Sign::Neg,
                    1 => Sign::Zero,
                    _ => Sign::Pos,
                };
                rest /= 3;
                s
            })
            .collect();
        if sign_vector_feasible(hs, &signs, dim) {
            out.push(signs);
        }
    }
    out
}

/// Decides whether the open polyhedron with the given strict sides is
/// nonempty, by vertex enumeration of the boxed margin program in (x, t).
fn strictly_feasible(hs: &[Hyperplane], signs: &[bool], dim: usize) -> bool {
    let full: Vec<Sign> = signs
        .iter()
        .map(|p| if *p { Sign::Pos } else { Sign::Neg })
        .collect();
    sign_vector_feasible(hs, &full, dim)
}

fn sign_vector_feasible(hs: &[Hyperplane], signs: &[Sign], dim: usize) -> bool {
    // rows: c . (x, t) >= d; zero signs become a pair of equalities that do
    // not consume slack
    let mut rows: Vec<(QVec, Rat)> = Vec::new();
    for (h, sign) in hs.iter().zip(signs) {
        if *sign == Sign::Zero {
            let mut c: QVec = h.normal.clone();
            c.push(Rat::zero());
            rows.push((c.clone(), h.offset.clone()));
            let neg: QVec = c.iter().map(|a| -a.clone()).collect();
            rows.push((neg, -h.offset.clone()));
            continue;
        }
        let flip = if *sign == Sign::Pos { Rat::one() } else { -Rat::one() };
        let mut c: QVec = h.normal.iter().map(|a| a * &flip).collect();
        c.push(-Rat::one());
        rows.push((c, &h.offset * &flip));
    }
    // the rational data in the fixtures is small, so any strictly feasible
    // system has a point well inside this box
    let bound = rat(1_000_000);
    for i in 0..dim {
        let mut lo = vec![Rat::zero(); dim + 1];
        lo[i] = Rat::one();
        rows.push((lo, -bound.clone()));
        let mut hi = vec![Rat::zero(); dim + 1];
        hi[i] = -Rat::one();
        rows.push((hi, -bound.clone()));
    }
    let mut cap = vec![Rat::zero(); dim + 1];
    cap[dim] = -Rat::one();
    rows.push((cap, -Rat::one()));

    // the boxed program is a polytope, so its maximum of t sits at a basic
    // solution: try every (dim+1)-subset of tight constraints
    for subset in combinations(rows.len(), dim + 1) {
        if let Some(point) = basic_solution(&rows, &subset, dim + 1) {
            let feasible = rows.iter().all(|(c, d)| dot(c, &point) >= *d);
            if feasible && point[dim].is_positive() {
                return true;
            }
        }
    }
    false
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

fn basic_solution(rows: &[(QVec, Rat)], subset: &[usize], vars: usize) -> Option<QVec> {
    let eqs: Vec<(QVec, Rat)> = subset.iter().map(|&i| rows[i].clone()).collect();
    match AffineSubspace::solve(vars, &eqs) {
        Ok(Some(space)) if space.dim() == 0 => Some(space.anchor()),
        _ => None,
    }
}
