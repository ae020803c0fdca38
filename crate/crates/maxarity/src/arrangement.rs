//! Hyperplane arrangements induced by CPWL expressions: canonical
//! hyperplanes, exact cell enumeration over a support flat, sample points in
//! the relative interior of every cell, and clearance queries.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::Zero;

use crate::expr::CpwlExpr;
use crate::feas::{self, Constraint};
use crate::linalg::AffineSubspace;
use crate::rat::{dot, primitive, vaxpy, vsub, QVec, Rat};

/// A hyperplane `{x : normal . x = offset}` in canonical form: the normal is
/// an integer-primitive vector whose first nonzero entry is positive, so
/// equal sets compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: QVec,
    pub offset: Rat,
}

impl Hyperplane {
    /// Canonicalizes `{x : a . x = b}`; returns None when `a = 0`.
    pub fn new(a: &[Rat], b: &Rat) -> Option<Hyperplane> {
        if a.iter().all(Rat::is_zero) {
            return None;
        }
        let normal = primitive(a);
        // primitive() scales by a positive rational s with normal = s * a.
        let i = a.iter().position(|c| !c.is_zero()).unwrap();
        let s = &normal[i] / &a[i];
        Some(Hyperplane { normal, offset: b * s })
    }

    /// Hyperplane separating two affine functions: `{x : g(x) = h(x)}`.
    pub fn between(g_a: &[Rat], g_b: &Rat, h_a: &[Rat], h_b: &Rat) -> Option<Hyperplane> {
        Hyperplane::new(&vsub(g_a, h_a), &(h_b - g_b))
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.normal, x) - &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn as_subspace(&self) -> AffineSubspace {
        AffineSubspace::solve(self.dim(), &[(self.normal.clone(), self.offset.clone())])
            .expect("consistent single equation")
            .expect("nonzero normal")
    }
}

/// Sign of a hyperplane at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(v: &Rat) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v > &Rat::zero() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// A relatively open cell of a stratified arrangement: the set of points with
/// the given sign pattern. `hull` is its affine hull, `dim` the dimension of
/// the cell, `sample` an exact point in its relative interior.
#[derive(Debug, Clone)]
pub struct Cell {
    pub sign_vector: Vec<Sign>,
    pub dim: usize,
    pub hull: AffineSubspace,
    pub sample: QVec,
}

/// The cells of an arrangement restricted to an affine support flat. Cells
/// partition the support; each is identified by its sign vector.
#[derive(Debug, Clone)]
pub struct StratifiedFamily {
    pub support: AffineSubspace,
    pub hyperplanes: Vec<Hyperplane>,
    pub cells: Vec<Cell>,
}

impl StratifiedFamily {
    /// Cells of full dimension inside the support flat.
    pub fn full_cells(&self) -> impl Iterator<Item = &Cell> {
        let d = self.support.dim();
        self.cells.iter().filter(move |c| c.dim == d)
    }

    /// The unique cell containing `x`, or None when `x` lies outside the
    /// support flat.
    pub fn locate(&self, x: &[Rat]) -> Option<&Cell> {
        if !self.support.contains(x) {
            return None;
        }
        let sv: Vec<Sign> = self.hyperplanes.iter().map(|h| Sign::of(&h.eval(x))).collect();
        self.cells.iter().find(|c| c.sign_vector == sv)
    }
}

/// Hyperplanes where some max term of `f` can switch argmax: all pairwise
/// argument differences, canonicalized and deduplicated.
pub fn arrangement_of(f: &CpwlExpr) -> Vec<Hyperplane> {
    let mut hs = Vec::new();
    for t in f.terms() {
        for (i, g) in t.arguments.iter().enumerate() {
            for h in &t.arguments[i + 1..] {
                if let Some(hp) = Hyperplane::between(&g.a, &g.b, &h.a, &h.b) {
                    hs.push(hp);
                }
            }
        }
    }
    hs.sort();
    hs.dedup();
    hs
}

/// Does the hyperplane cut the flat into two (i.e. neither contains nor is
/// disjoint as a constraint direction)? True iff the normal is not orthogonal
/// to the flat's direction space.
fn cuts(h: &Hyperplane, flat: &AffineSubspace) -> bool {
    flat.directions().basis().iter().any(|d| !dot(&h.normal, d).is_zero())
}

/// Every flat obtained by intersecting the support with subsets of the
/// hyperplanes, deduplicated by canonical form. BFS from the support itself.
fn flats(hs: &[Hyperplane], support: &AffineSubspace) -> Vec<AffineSubspace> {
    let mut seen: HashSet<AffineSubspace> = HashSet::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<AffineSubspace> = VecDeque::new();
    seen.insert(support.clone());
    queue.push_back(support.clone());
    while let Some(flat) = queue.pop_front() {
        out.push(flat.clone());
        for h in hs {
            if !cuts(h, &flat) {
                continue;
            }
            let meet = flat.intersect(&h.as_subspace()).expect("same ambient dimension");
            if let Some(sub) = meet {
                if seen.insert(sub.clone()) {
                    queue.push_back(sub);
                }
            }
        }
    }
    out
}

/// Enumerates all relatively open cells of the arrangement `hs` inside the
/// `support` flat, with an exact interior sample point for each. Cells of
/// every dimension are produced; together they partition the support.
pub fn enumerate_cells(hs: &[Hyperplane], support: &AffineSubspace) -> StratifiedFamily {
    let n = support.ambient();
    let mut cells: Vec<Cell> = Vec::new();
    // Avoid emitting the same cell twice when two flats coincide in sign
    // pattern (cannot happen for distinct flats, but cheap to guard).
    let mut seen: HashSet<Vec<Sign>> = HashSet::new();
    for flat in flats(hs, support) {
        // Split hyperplanes into those containing the flat (sign Zero
        // everywhere on it), those missing it, and those cutting it.
        let anchor = flat.anchor();
        let mut fixed: HashMap<usize, Sign> = HashMap::new();
        let mut cutting: Vec<usize> = Vec::new();
        for (i, h) in hs.iter().enumerate() {
            if cuts(h, &flat) {
                cutting.push(i);
            } else {
                fixed.insert(i, Sign::of(&h.eval(&anchor)));
            }
        }
        // Only cells whose zero set is exactly this flat belong to it: every
        // containing hyperplane is Zero by construction; cutting hyperplanes
        // must be strictly off. Enumerate feasible strict sign assignments of
        // the cutting hyperplanes incrementally.
        let eqs = flat.equations();
        let base: Vec<Constraint> = Vec::new();
        let mut partial: Vec<(Vec<Sign>, Vec<Constraint>)> = vec![(Vec::new(), base)];
        for &ci in &cutting {
            let h = &hs[ci];
            let mut next = Vec::new();
            for (signs, cons) in partial {
                for sign in [Sign::Neg, Sign::Pos] {
                    let c = match sign {
                        Sign::Pos => Constraint::strict(h.normal.clone(), h.offset.clone()),
                        _ => Constraint::strict(
                            crate::rat::vneg(&h.normal),
                            -h.offset.clone(),
                        ),
                    };
                    let mut cons2 = cons.clone();
                    cons2.push(c);
                    if feasible_on(eqs, &cons2, n) {
                        let mut s2 = signs.clone();
                        s2.push(sign);
                        next.push((s2, cons2));
                    }
                }
            }
            partial = next;
        }
        for (signs, cons) in partial {
            let sample = sample_on(&flat, &cons, n);
            let mut sv = vec![Sign::Zero; hs.len()];
            for (&i, &s) in &fixed {
                sv[i] = s;
            }
            for (k, &ci) in cutting.iter().enumerate() {
                sv[ci] = signs[k];
            }
            debug_assert_eq!(
                sv,
                hs.iter().map(|h| Sign::of(&h.eval(&sample))).collect::<Vec<_>>()
            );
            if seen.insert(sv.clone()) {
                cells.push(Cell { sign_vector: sv, dim: flat.dim(), hull: flat.clone(), sample });
            }
        }
    }
    StratifiedFamily { support: support.clone(), hyperplanes: hs.to_vec(), cells }
}

/// Augmented rows `[a | b]` of the flat's equations `a . x = b`, turned into
/// opposite weak inequalities.
fn with_equalities(eqs: &[QVec], cons: &[Constraint], dim: usize) -> Vec<Constraint> {
    let mut all: Vec<Constraint> = cons.to_vec();
    for row in eqs {
        let a = row[..dim].to_vec();
        let b = row[dim].clone();
        all.push(Constraint::weak(crate::rat::vneg(&a), -&b));
        all.push(Constraint::weak(a, b));
    }
    all
}

fn feasible_on(eqs: &[QVec], cons: &[Constraint], dim: usize) -> bool {
    feas::feasible(&with_equalities(eqs, cons, dim), dim)
}

fn sample_on(flat: &AffineSubspace, cons: &[Constraint], dim: usize) -> QVec {
    feas::solve(&with_equalities(flat.equations(), cons, dim), dim)
        .expect("feasibility was established before sampling")
}

/// Half the distance (in parameter `t`) from `x` along `v` to the nearest
/// hyperplane not already containing the ray, or 1 when none is hit. For any
/// `0 < s <= clearance`, the open segment `x + (0, s] v` crosses no
/// hyperplane that `x` is not on, and stays strictly off every hyperplane
/// `x` is off.
pub fn clearance(x: &[Rat], v: &[Rat], hs: &[Hyperplane]) -> Rat {
    let mut best: Option<Rat> = None;
    for h in hs {
        let slope = dot(&h.normal, v);
        if slope.is_zero() {
            continue;
        }
        let val = h.eval(x);
        if val.is_zero() {
            continue; // crossing at t = 0 only; any t > 0 leaves it
        }
        let t = -val / slope;
        if t > Rat::zero() && best.as_ref().is_none_or(|b| &t < b) {
            best = Some(t);
        }
    }
    match best {
        Some(t) => t / crate::rat::rat(2),
        None => crate::rat::rat(1),
    }
}

/// Cells of the arrangement restricted to a flat of arbitrary codimension.
pub fn restrict(hs: &[Hyperplane], flat: &AffineSubspace) -> StratifiedFamily {
    enumerate_cells(hs, flat)
}

/// A generic point of `f` obtained by nudging `x` along `v`: lies strictly
/// off every arrangement hyperplane not containing the whole ray.
pub fn nudge(x: &[Rat], v: &[Rat], hs: &[Hyperplane]) -> QVec {
    let t = clearance(x, v, hs);
    vaxpy(x, &t, v)
}
