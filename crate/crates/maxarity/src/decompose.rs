//! Explicit minimal-arity decompositions.
//!
//! For an expression whose minimal max-arity `k*` is at most 3, this module
//! rewrites it as an equivalent expression whose max terms all have at most
//! `k*` arguments. The algorithm peels local cones: pick a deepest flag
//! along which the gradient field still jumps, homogenize the expression at
//! a generic point of the flag's last member, split off the lineality of the
//! resulting cone, synthesize the low-dimensional remainder directly (one
//! variable: breakpoints; two variables: a fan of tent functions), and
//! subtract. Every step is verified exactly; the final result is checked
//! equivalent to the input.

use num_traits::{One, Zero};

use crate::arity::minimal_arity_of_field;
use crate::arrangement;
use crate::delta::{Flag, GradientField};
use crate::expr::{equivalent, AffineFunc, AffineMap, CpwlExpr, MaxTerm};
use crate::linalg::{invert, AffineSubspace, LinearSubspace};
use crate::rat::{dot, primitive, qvec, rat, vscale, QVec, Rat};
use crate::{Error, Result};

/// The local cone of `f` at `x0`: keeps only the max arguments attaining the
/// maximum at `x0` and re-anchors them to vanish there. The result `G`
/// satisfies `G(x0 + t d) = t G(x0 + d)` for `t >= 0` and agrees with
/// `f - f(x0)` in a neighborhood of `x0`.
pub fn homogenize(f: &CpwlExpr, x0: &QVec) -> Result<CpwlExpr> {
    let n = f.dimension();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
    }
    let anchor = |g: &AffineFunc| AffineFunc::new(g.a.clone(), -dot(&g.a, x0));
    let affine = anchor(f.affine_part());
    let mut terms = Vec::new();
    for t in f.terms() {
        let best = t.arguments.iter().map(|g| g.eval(x0)).max().unwrap();
        let args = t
            .arguments
            .iter()
            .filter(|g| g.eval(x0) == best)
            .map(anchor)
            .collect::<Vec<_>>();
        terms.push(MaxTerm { coefficient: t.coefficient.clone(), arguments: args });
    }
    CpwlExpr::new(n, affine, terms)
}

/// A cone split `G(x) = ell(x) + core(c_w(x))`: `ell` is linear, `c_w`
/// projects onto coordinates transverse to the lineality space, and `core`
/// is a cone about the origin in those coordinates with trivial lineality.
#[derive(Debug, Clone)]
pub struct SplitLineality {
    pub lineality: LinearSubspace,
    pub ell: AffineFunc,
    /// Cone on `Q^(n - dim lineality)` with no invariant direction.
    pub core: CpwlExpr,
    /// Projection `Q^n -> Q^(n - dim lineality)` onto core coordinates.
    pub c_w: AffineMap,
    /// Embedding of core coordinates back into `Q^n` (a basis of the
    /// complement of the lineality space, as columns).
    pub w_basis: Vec<QVec>,
}

fn check_conical(g: &CpwlExpr, field: &GradientField) -> Result<()> {
    if !g.eval(&vec![Rat::zero(); g.dimension()])?.is_zero() {
        return Err(Error::InternalVerification("cone does not vanish at the origin".into()));
    }
    for h in field.hyperplanes() {
        if !h.offset.is_zero() {
            return Err(Error::InternalVerification(
                "cone has a switching hyperplane missing the origin".into(),
            ));
        }
    }
    Ok(())
}

/// Splits a cone about the origin into a linear part along its lineality
/// space and a lineality-free cone on the transverse coordinates. The
/// reconstruction `ell + core ∘ c_w` is verified equivalent to the input.
pub fn split_lineality(g: &CpwlExpr) -> Result<SplitLineality> {
    let n = g.dimension();
    let field = GradientField::new(g.clone());
    check_conical(g, &field)?;
    let lin = crate::delta::lineality(&field)?.space;
    let m = lin.dim();
    let u_basis: Vec<QVec> = lin.basis().to_vec();
    let w_basis: Vec<QVec> = lin.complement().basis().to_vec();
    // Rows of the basis matrix B with columns u_1..u_m, w_1..w_{n-m}.
    let b_rows: Vec<QVec> = (0..n)
        .map(|i| u_basis.iter().chain(&w_basis).map(|c| c[i].clone()).collect())
        .collect();
    let b_inv = invert(&b_rows).ok_or_else(|| {
        Error::InternalVerification("lineality complement is not a complement".into())
    })?;
    // On the lineality space the cone is linear; its values on the basis
    // determine the linear part ell(x) = sum_i G(u_i) * coordinate_i(x).
    let mut a_ell = vec![Rat::zero(); n];
    for (i, u) in u_basis.iter().enumerate() {
        let gu = g.eval(u)?;
        for j in 0..n {
            a_ell[j] += &gu * &b_inv[i][j];
        }
    }
    let ell = AffineFunc::new(a_ell, Rat::zero());
    // Core: the cone restricted to the complement, in its own coordinates.
    let embed_rows: Vec<QVec> =
        (0..n).map(|i| w_basis.iter().map(|c| c[i].clone()).collect()).collect();
    let core = g.compose_affine(&AffineMap::linear(embed_rows))?;
    let c_w = AffineMap::linear(b_inv[m..].to_vec());
    let rebuilt = CpwlExpr::affine_expr(ell.clone()).add(&core.compose_affine(&c_w)?)?;
    if !equivalent(g, &rebuilt)?.is_equal() {
        return Err(Error::InternalVerification("lineality split does not reconstruct".into()));
    }
    Ok(SplitLineality { lineality: lin, ell, core, c_w, w_basis })
}

/// Decomposes a CPWL function of one variable into an affine part plus one
/// `max(0, x - t)` hinge per breakpoint: arity 2, the minimum unless the
/// function is affine.
fn decompose_1d(f: &CpwlExpr) -> Result<CpwlExpr> {
    debug_assert_eq!(f.dimension(), 1);
    let hs = arrangement::arrangement_of(f);
    let mut breaks: Vec<Rat> = hs.iter().map(|h| &h.offset / &h.normal[0]).collect();
    breaks.sort();
    breaks.dedup();
    // Sample points: one per maximal interval between breakpoints.
    let mut samples = Vec::new();
    match breaks.first() {
        None => samples.push(vec![Rat::zero()]),
        Some(t0) => {
            samples.push(vec![t0 - Rat::one()]);
            for w in breaks.windows(2) {
                samples.push(vec![(&w[0] + &w[1]) / rat(2)]);
            }
            samples.push(vec![breaks.last().unwrap() + Rat::one()]);
        }
    }
    let slopes: Vec<Rat> =
        samples.iter().map(|x| Ok(f.gradient_at(x)?[0].clone())).collect::<Result<Vec<_>>>()?;
    let left = &samples[0];
    let b0 = f.eval(left)? - &slopes[0] * &left[0];
    let affine = AffineFunc::new(vec![slopes[0].clone()], b0);
    let mut terms = Vec::new();
    for (j, t) in breaks.iter().enumerate() {
        let c = &slopes[j + 1] - &slopes[j];
        terms.push(MaxTerm {
            coefficient: c,
            arguments: vec![
                AffineFunc::zero(1),
                AffineFunc::new(vec![Rat::one()], -t.clone()),
            ],
        });
    }
    let out = CpwlExpr::new(1, affine, terms)?;
    if !equivalent(f, &out)?.is_equal() {
        return Err(Error::InternalVerification("1-d synthesis mismatch".into()));
    }
    Ok(out)
}

/// Cyclic order of primitive plane vectors: upper half-plane (including the
/// positive x-axis) first, counterclockwise within each half.
fn ray_order(a: &QVec, b: &QVec) -> std::cmp::Ordering {
    let upper = |v: &QVec| v[1] > Rat::zero() || (v[1].is_zero() && v[0] > Rat::zero());
    match (upper(a), upper(b)) {
        (true, false) => std::cmp::Ordering::Less,
        (false, true) => std::cmp::Ordering::Greater,
        _ => {
            let cross = &a[0] * &b[1] - &a[1] * &b[0];
            // cross > 0: b lies counterclockwise of a, so a comes first.
            Rat::zero().cmp(&cross)
        }
    }
}

/// `max(0, min(u, v))` for linear `u, v`, via
/// `max(0,u) + max(0,v) - max(0,u,v)`: three terms of arity at most 3.
fn hinge_min(u: AffineFunc, v: AffineFunc) -> Vec<MaxTerm> {
    let zero = AffineFunc::zero(u.dim());
    vec![
        MaxTerm { coefficient: rat(1), arguments: vec![zero.clone(), u.clone()] },
        MaxTerm { coefficient: rat(1), arguments: vec![zero.clone(), v.clone()] },
        MaxTerm { coefficient: rat(-1), arguments: vec![zero, u, v] },
    ]
}

/// Decomposes a cone about the origin in the plane into a sum of tent
/// functions of arity at most 3. Each tent is supported on the union of two
/// adjacent sectors of a fan refining the cone's switching lines; the cone
/// is the sum of its ray values times the tents.
fn decompose_cone_2d(f: &CpwlExpr) -> Result<CpwlExpr> {
    debug_assert_eq!(f.dimension(), 2);
    let field = GradientField::new(f.clone());
    check_conical(f, &field)?;
    // Fan rays: both directions of every switching line, refined by the
    // eight compass directions so consecutive gaps stay below a right angle
    // (which keeps each tent's support a convex-free union of two sectors).
    let mut rays: Vec<QVec> = Vec::new();
    for h in field.hyperplanes() {
        let dir = primitive(&[-h.normal[1].clone(), h.normal[0].clone()]);
        rays.push(vscale(&dir, &rat(-1)));
        rays.push(dir);
    }
    for d in [[1, 0], [1, 1], [0, 1], [-1, 1], [-1, 0], [-1, -1], [0, -1], [1, -1]] {
        rays.push(qvec(&d));
    }
    // Normalize to integer-primitive while preserving direction (plain
    // `primitive` canonicalizes up to sign, which would merge opposite rays).
    let keep_direction = |v: &QVec| {
        let p = primitive(v);
        if dot(&p, v) < Rat::zero() {
            vscale(&p, &rat(-1))
        } else {
            p
        }
    };
    let rays: Vec<QVec> = {
        let mut r: Vec<QVec> = rays.iter().map(keep_direction).collect();
        r.sort_by(ray_order);
        r.dedup();
        r
    };
    let m = rays.len();
    let affine = AffineFunc::zero(2);
    let mut terms: Vec<MaxTerm> = Vec::new();
    for i in 0..m {
        let value = f.eval(&rays[i])?;
        if value.is_zero() {
            continue;
        }
        let prev = &rays[(i + m - 1) % m];
        let next = &rays[(i + 1) % m];
        // Linear functional vanishing on the line through `other`, equal to
        // 1 at the tent's peak ray.
        let side = |other: &QVec| -> Result<AffineFunc> {
            let normal = vec![-other[1].clone(), other[0].clone()];
            let s = dot(&normal, &rays[i]);
            if s.is_zero() {
                return Err(Error::InternalVerification(
                    "adjacent fan rays are collinear".into(),
                ));
            }
            Ok(AffineFunc::new(vscale(&normal, &(Rat::one() / s)), Rat::zero()))
        };
        for mut t in hinge_min(side(prev)?, side(next)?) {
            t.coefficient *= &value;
            terms.push(t);
        }
    }
    let out = CpwlExpr::new(2, affine, terms)?;
    if let crate::expr::Equivalence::Differs { witness, lhs, rhs } = equivalent(f, &out)? {
        return Err(Error::InternalVerification(format!(
            "2-d cone synthesis mismatch at {:?}: {} vs {}",
            witness, lhs, rhs
        )));
    }
    Ok(out)
}

/// Direct synthesis in low dimension: any function of one variable
/// (breakpoint hinges, arity 2), or a cone about the origin in two variables
/// (tent functions, arity at most 3).
pub fn decompose_low_dim(f: &CpwlExpr) -> Result<CpwlExpr> {
    match f.dimension() {
        0 => Ok(f.clone()),
        1 => decompose_1d(f),
        2 => decompose_cone_2d(f),
        d => Err(Error::DimensionMismatch { expected: 2, found: d }),
    }
}

/// One peeling step of the decomposition, kept for tracing.
#[derive(Debug, Clone)]
pub struct PeelStep {
    /// The deepest flag with a nonzero delta that this step removed.
    pub flag: Flag,
    /// Generic point of the flag's last member where the cone was taken.
    pub base_point: QVec,
    /// Dimension of the lineality-free core that was synthesized.
    pub core_dim: usize,
    /// The subtracted piece, already in minimal-arity form.
    pub piece: CpwlExpr,
}

/// Result of a decomposition request.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub original: CpwlExpr,
    /// Equivalent expression; all max terms have at most `k_star` arguments
    /// when `synthesized` is true, otherwise this is the input unchanged.
    pub result: CpwlExpr,
    pub k_star: usize,
    /// Max-arity actually achieved by `result`.
    pub achieved_arity: usize,
    /// False when `k_star > 3`, where no synthesis is attempted.
    pub synthesized: bool,
    pub steps: Vec<PeelStep>,
}

/// All flags (length >= 1) along which the gradient field has a delta that
/// is not identically zero. Every proper prefix of such a flag has a
/// non-constant delta, so these are exactly the one-step extensions of the
/// non-constant family that do not vanish.
fn nonzero_flag_set(field: &GradientField) -> Result<Vec<Flag>> {
    let mut out = Vec::new();
    let mut parents = vec![Flag::empty(field.dimension())];
    parents.extend(field.nonconstant_flags()?);
    parents.sort();
    parents.dedup();
    for p in &parents {
        if !p.is_empty() && field.delta(p)?.is_constant() {
            continue;
        }
        for cand in field.extension_candidates(p) {
            let ext = p.extend(cand)?;
            if !field.delta(&ext)?.is_zero() {
                out.push(ext);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Measure that strictly decreases across peeling steps: depth of the
/// deepest nonzero flag, then how many flags have that depth.
fn peel_measure(flags: &[Flag]) -> (usize, usize) {
    let deepest = flags.iter().map(Flag::len).max().unwrap_or(0);
    (deepest, flags.iter().filter(|f| f.len() == deepest).count())
}

/// Rewrites the expression with max terms of at most `k*` arguments, for
/// `k* <= 3`. For `k* > 3` the certificate is still computed but the input
/// is returned unchanged with `synthesized = false`.
pub fn decompose(f: &CpwlExpr) -> Result<Decomposition> {
    let field = GradientField::new(f.clone());
    let cert = minimal_arity_of_field(&field)?;
    let k_star = cert.k_star;
    if k_star > 3 {
        return Ok(Decomposition {
            original: f.clone(),
            result: f.clone(),
            k_star,
            achieved_arity: f.arity(),
            synthesized: false,
            steps: vec![],
        });
    }
    if f.arity() <= k_star {
        return Ok(Decomposition {
            original: f.clone(),
            result: f.clone(),
            k_star,
            achieved_arity: f.arity(),
            synthesized: true,
            steps: vec![],
        });
    }
    let n = f.dimension();
    let mut remainder = f.clone();
    let mut acc = CpwlExpr::affine_expr(AffineFunc::zero(n));
    let mut steps: Vec<PeelStep> = Vec::new();
    let mut field = GradientField::new(remainder.clone());
    let mut flags = nonzero_flag_set(&field)?;
    while !flags.is_empty() {
        let measure = peel_measure(&flags);
        let deepest = measure.0;
        let flag =
            flags.iter().filter(|g| g.len() == deepest).min().expect("nonempty").clone();
        // A generic point of the flag's last member: sample of its first
        // full-dimensional cell in the restricted arrangement.
        let fam = field.family_on(&flag.last());
        let x0 = fam.full_cells().next().expect("member is covered by cells").sample.clone();
        // Local cone at x0; every switching hyperplane of the remainder
        // through x0 contains the whole member, so the cone's lineality
        // contains the member's directions and the core has dimension at
        // most the flag length (<= k* - 1 <= 2).
        let cone = homogenize(&remainder, &x0)?;
        let shift = AffineMap::translation(x0.clone());
        let cone0 = cone.compose_affine(&shift)?;
        let split = split_lineality(&cone0)?;
        let core_dim = split.core.dimension();
        if core_dim > 2 {
            return Err(Error::InternalVerification(format!(
                "core dimension {} exceeds 2 during a k* = {} peel",
                core_dim, k_star
            )));
        }
        let core_min = decompose_low_dim(&split.core)?;
        // piece(x) = R(x0) + ell(x - x0) + core(c_w(x - x0))
        let neg_x0 = vscale(&x0, &rat(-1));
        let unshift = AffineMap::translation(neg_x0.clone());
        let mut piece = CpwlExpr::affine_expr(AffineFunc::new(
            split.ell.a.clone(),
            remainder.eval(&x0)? + dot(&split.ell.a, &neg_x0),
        ));
        let project = AffineMap {
            matrix: split.c_w.matrix.clone(),
            offset: split.c_w.apply(&unshift.offset),
        };
        piece = piece.add(&core_min.compose_affine(&project)?)?;
        if piece.arity() > k_star {
            return Err(Error::InternalVerification(format!(
                "peeled piece has arity {} above k* = {}",
                piece.arity(),
                k_star
            )));
        }
        remainder = remainder.sub(&piece)?;
        acc = acc.add(&piece)?;
        steps.push(PeelStep { flag: flag.clone(), base_point: x0, core_dim, piece });
        field = GradientField::new(remainder.clone());
        flags = nonzero_flag_set(&field)?;
        if !flags.is_empty() && peel_measure(&flags) >= measure {
            return Err(Error::InternalVerification(
                "peeling did not reduce the nonzero flag set".into(),
            ));
        }
    }
    // No nonzero flags left: the remainder's gradient never jumps, so it is
    // affine; fold it into the accumulator exactly.
    let whole = AffineSubspace::whole_space(n);
    let fam = field.family_on(&whole);
    let x = &fam.full_cells().next().expect("space is covered").sample;
    let a = remainder.gradient_at(x)?;
    let b = remainder.eval(x)? - dot(&a, x);
    acc = acc.add(&CpwlExpr::affine_expr(AffineFunc::new(a, b)))?;
    if !equivalent(f, &acc)?.is_equal() {
        return Err(Error::InternalVerification("decomposition does not reproduce input".into()));
    }
    let achieved = acc.arity();
    if achieved > k_star {
        return Err(Error::InternalVerification(format!(
            "decomposition arity {} above k* = {}",
            achieved, k_star
        )));
    }
    Ok(Decomposition {
        original: f.clone(),
        result: acc,
        k_star,
        achieved_arity: achieved,
        synthesized: true,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qvec, ratio};

    fn af(a: &[i64], b: i64) -> AffineFunc {
        AffineFunc::new(qvec(a), rat(b))
    }

    fn max_of(dim: usize, rows: &[(&[i64], i64)]) -> CpwlExpr {
        CpwlExpr::max_of(dim, rows.iter().map(|(a, b)| af(a, *b)).collect()).unwrap()
    }

    #[test]
    fn homogenize_keeps_local_behavior() {
        // max(0, x, y) at (1, 1): both x and y achieve the max; the cone is
        // max(x - 1, y - 1).
        let g1 = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)]);
        let x0 = qvec(&[1, 1]);
        let g = homogenize(&g1, &x0).unwrap();
        assert_eq!(g.eval(&x0).unwrap(), rat(0));
        assert_eq!(g.arity(), 2);
        // Near x0 it matches g1 - g1(x0).
        let p = vec![ratio(9, 8), ratio(5, 4)];
        assert_eq!(g.eval(&p).unwrap(), g1.eval(&p).unwrap() - g1.eval(&x0).unwrap());
        // Positively homogeneous about x0.
        let d = qvec(&[3, -2]);
        let x1: QVec = (0..2).map(|i| &x0[i] + &d[i]).collect();
        let x2: QVec = (0..2).map(|i| &x0[i] + rat(5) * &d[i]).collect();
        assert_eq!(g.eval(&x2).unwrap(), rat(5) * g.eval(&x1).unwrap());
    }

    #[test]
    fn split_lineality_of_ridge() {
        // max(x - y, y - x) = |x - y| has lineality along (1, 1).
        let f = max_of(2, &[(&[1, -1], 0), (&[-1, 1], 0)]);
        let s = split_lineality(&f).unwrap();
        assert_eq!(s.lineality.dim(), 1);
        assert!(s.lineality.contains(&qvec(&[1, 1])));
        assert_eq!(s.core.dimension(), 1);
        assert!(crate::rat::is_zero_vec(&s.ell.a));
    }

    #[test]
    fn one_dim_breakpoints() {
        // max(0, x, 2x - 1): slopes 0, 1, 2 with breaks at 0 and 1.
        let f = max_of(1, &[(&[0], 0), (&[1], 0), (&[2], -1)]);
        let d = decompose_1d(&f).unwrap();
        assert_eq!(d.arity(), 2);
        assert!(equivalent(&f, &d).unwrap().is_equal());
    }

    #[test]
    fn cone_2d_tents() {
        let g1 = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)]);
        let d = decompose_cone_2d(&g1).unwrap();
        assert!(d.arity() <= 3);
        assert!(equivalent(&g1, &d).unwrap().is_equal());
    }

    #[test]
    fn decompose_g3_to_arity_two() {
        // max(0, x, y) + max(0, -x, -y) has k* = 2 but is written with
        // arity-3 terms; decomposition must find an arity-2 form.
        let g3 = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)])
            .add(&max_of(2, &[(&[0, 0], 0), (&[-1, 0], 0), (&[0, -1], 0)]))
            .unwrap();
        let d = decompose(&g3).unwrap();
        assert!(d.synthesized);
        assert_eq!(d.k_star, 2);
        assert!(d.achieved_arity <= 2);
        assert!(equivalent(&g3, &d.result).unwrap().is_equal());
    }

    #[test]
    fn decompose_arity_four_term_with_k_three() {
        // max(0, x, y, x + y) = max(0, x) + max(0, y) has k* = 2.
        let f = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 0)]);
        let d = decompose(&f).unwrap();
        assert!(d.synthesized);
        assert_eq!(d.k_star, 2);
        assert!(d.achieved_arity <= 2);
        assert!(equivalent(&f, &d.result).unwrap().is_equal());
    }

    #[test]
    fn decompose_already_minimal_is_identity() {
        let g1 = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)]);
        let d = decompose(&g1).unwrap();
        assert!(d.synthesized);
        assert_eq!(d.k_star, 3);
        assert_eq!(d.result, g1);
        assert!(d.steps.is_empty());
    }

    #[test]
    fn decompose_gives_up_above_three() {
        // max(0, x, y, z) in three variables needs arity 4.
        let f = max_of(
            3,
            &[(&[0, 0, 0], 0), (&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0)],
        );
        let d = decompose(&f).unwrap();
        assert!(!d.synthesized);
        assert_eq!(d.k_star, 4);
        assert_eq!(d.result, f);
    }
}
