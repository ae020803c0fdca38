//! Delta functions of the gradient field along flags of affine subspaces.
//!
//! The gradient field of a CPWL expression is a piecewise-constant (PC)
//! function with values in Q^n. Its delta function along a flag
//! `H_1 ⊃ H_2 ⊃ ... ⊃ H_k` (with `dim H_i = n - i`) is the iterated two-sided
//! jump: at the innermost level the jump of the gradient itself across `H_1`,
//! then the jump of that function across `H_2` inside `H_1`, and so on. All
//! limits are evaluated exactly by stepping a positive rational distance
//! small enough (by clearance) that no further arrangement hyperplane is
//! crossed.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;


use crate::arrangement::{self, Hyperplane, StratifiedFamily};
use crate::expr::CpwlExpr;
use crate::linalg::AffineSubspace;
use crate::rat::{is_zero_vec, rat, ratio, vaxpy, vscale, vsub, QVec, Rat};
use crate::{Error, Result};

/// A flag of affine subspaces `H_1 ⊃ ... ⊃ H_k` with `dim H_i = n - i`.
/// Length 0 (the whole space) is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    ambient: usize,
    spaces: Vec<AffineSubspace>,
}

impl Flag {
    pub fn new(ambient: usize, spaces: Vec<AffineSubspace>) -> Result<Flag> {
        for (i, h) in spaces.iter().enumerate() {
            if h.ambient() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: h.ambient() });
            }
            if h.dim() != ambient - (i + 1) {
                return Err(Error::InvalidFlag(format!(
                    "member {} must have dimension {}, found {}",
                    i + 1,
                    ambient as isize - (i as isize + 1),
                    h.dim()
                )));
            }
            if i > 0 && !h.is_subset_of(&spaces[i - 1]) {
                return Err(Error::InvalidFlag(format!(
                    "member {} is not contained in member {}",
                    i + 1,
                    i
                )));
            }
        }
        Ok(Flag { ambient, spaces })
    }

    pub fn empty(ambient: usize) -> Flag {
        Flag { ambient, spaces: vec![] }
    }

    /// Builds a flag from hyperplane equations `a . x = b`: member `i` is the
    /// intersection of the first `i` hyperplanes, which must drop dimension
    /// at every step.
    pub fn from_equations(ambient: usize, eqs: &[(QVec, Rat)]) -> Result<Flag> {
        let mut spaces = Vec::new();
        let mut system: Vec<(QVec, Rat)> = Vec::new();
        for (a, b) in eqs {
            system.push((a.clone(), b.clone()));
            let sub = AffineSubspace::solve(ambient, &system)?
                .ok_or_else(|| Error::InvalidFlag("inconsistent equations".into()))?;
            spaces.push(sub);
        }
        Flag::new(ambient, spaces)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn spaces(&self) -> &[AffineSubspace] {
        &self.spaces
    }

    /// The innermost member `H_k`, or the whole space for the empty flag.
    pub fn last(&self) -> AffineSubspace {
        self.spaces.last().cloned().unwrap_or_else(|| AffineSubspace::whole_space(self.ambient))
    }

    /// Extends the flag by one more subspace of the next codimension.
    pub fn extend(&self, h: AffineSubspace) -> Result<Flag> {
        let mut spaces = self.spaces.clone();
        spaces.push(h);
        Flag::new(self.ambient, spaces)
    }
}

/// A directional `(v_1, ..., v_k)` for a flag: `v_i` is parallel to
/// `H_{i-1}` but not to `H_i`, so stepping from `H_i` along `±v_i` moves off
/// `H_i` while staying inside `H_{i-1}`.
#[derive(Debug, Clone)]
pub struct Directional {
    pub dirs: Vec<QVec>,
}

/// The canonical directional: for each level, the first reduced-basis vector
/// of the enclosing member's direction space that leaves the member.
pub fn make_directional(flag: &Flag) -> Result<Directional> {
    directional_with(flag, false)
}

/// A second, independent directional for the same flag: a different vector on
/// the same side of every member. Delta functions computed with either
/// directional agree; this generator exists so that invariance can be
/// exercised in tests.
pub fn make_directional_alt(flag: &Flag) -> Result<Directional> {
    directional_with(flag, true)
}

fn directional_with(flag: &Flag, alt: bool) -> Result<Directional> {
    let n = flag.ambient();
    let mut dirs = Vec::new();
    let mut prev = crate::linalg::LinearSubspace::full(n);
    for h in flag.spaces() {
        let cur = h.directions();
        let mut v = prev
            .basis()
            .iter()
            .find(|v| !cur.contains(v))
            .cloned()
            .ok_or_else(|| Error::InvalidFlag("flag member does not drop dimension".into()))?;
        if alt {
            // Same side of the member: adding a vector parallel to it and
            // scaling by a positive rational both preserve the side.
            if let Some(w) = cur.basis().first() {
                v = crate::rat::vadd(&v, w);
            }
            v = vscale(&v, &ratio(3, 2));
        }
        dirs.push(v);
        prev = cur;
    }
    Ok(Directional { dirs })
}

/// A delta function along a flag: piecewise constant on the cells of the
/// gradient arrangement restricted to the flag's innermost member, with one
/// exact Q^n value per full-dimensional cell.
#[derive(Debug, Clone)]
pub struct DeltaFunction {
    pub flag: Flag,
    pub family: Rc<StratifiedFamily>,
    /// Values aligned with `family.full_cells()` in order.
    pub values: Vec<QVec>,
}

impl DeltaFunction {
    /// Value at a generic point of the flag's innermost member. Errors when
    /// the point lies on a lower-dimensional cell or off the member.
    pub fn value_at(&self, x: &[Rat]) -> Result<&QVec> {
        let d = self.family.support.dim();
        let cell = self
            .family
            .locate(x)
            .ok_or_else(|| Error::InvalidFlag("point is not on the flag's last member".into()))?;
        if cell.dim != d {
            return Err(Error::NonGeneric);
        }
        let idx = self
            .family
            .full_cells()
            .position(|c| std::ptr::eq(c, cell))
            .expect("located cell is a full cell");
        Ok(&self.values[idx])
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| is_zero_vec(v))
    }

    /// Two full cells realizing different values, when not constant.
    pub fn nonconstant_witness(&self) -> Option<(QVec, QVec)> {
        let cells: Vec<_> = self.family.full_cells().collect();
        for i in 1..self.values.len() {
            if self.values[i] != self.values[0] {
                return Some((cells[0].sample.clone(), cells[i].sample.clone()));
            }
        }
        None
    }
}

/// The gradient field of a CPWL expression, with memoized cell families and
/// delta functions keyed by flag.
pub struct GradientField {
    expr: CpwlExpr,
    hyperplanes: Vec<Hyperplane>,
    families: RefCell<HashMap<AffineSubspace, Rc<StratifiedFamily>>>,
    deltas: RefCell<HashMap<Flag, Rc<DeltaFunction>>>,
}

impl GradientField {
    pub fn new(expr: CpwlExpr) -> GradientField {
        let hyperplanes = arrangement::arrangement_of(&expr);
        GradientField {
            expr,
            hyperplanes,
            families: RefCell::new(HashMap::new()),
            deltas: RefCell::new(HashMap::new()),
        }
    }

    pub fn expr(&self) -> &CpwlExpr {
        &self.expr
    }

    pub fn dimension(&self) -> usize {
        self.expr.dimension()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    /// Cells of the gradient arrangement restricted to a flat, memoized.
    pub fn family_on(&self, support: &AffineSubspace) -> Rc<StratifiedFamily> {
        if let Some(fam) = self.families.borrow().get(support) {
            return fam.clone();
        }
        let fam = Rc::new(arrangement::enumerate_cells(&self.hyperplanes, support));
        self.families.borrow_mut().insert(support.clone(), fam.clone());
        fam
    }

    /// The delta value at a single generic point of the flag's innermost
    /// member, computed by exact iterated two-sided jumps along the
    /// directional.
    pub fn delta_at(&self, dirs: &[QVec], x: &QVec) -> Result<QVec> {
        match dirs.split_last() {
            None => self.expr.gradient_at(x),
            Some((v, inner)) => {
                // Any epsilon below both one-sided clearances realizes the
                // limit: no arrangement hyperplane is crossed on the way.
                let eps = arrangement::clearance(x, v, &self.hyperplanes)
                    .min(arrangement::clearance(x, &vscale(v, &rat(-1)), &self.hyperplanes));
                let plus = self.delta_at(inner, &vaxpy(x, &eps, v))?;
                let minus = self.delta_at(inner, &vaxpy(x, &(-eps), v))?;
                Ok(vsub(&plus, &minus))
            }
        }
    }

    /// The full delta function along a flag, memoized: one exact value per
    /// full-dimensional cell of the arrangement restricted to the flag's
    /// innermost member.
    pub fn delta(&self, flag: &Flag) -> Result<Rc<DeltaFunction>> {
        if flag.ambient() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: flag.ambient(),
            });
        }
        if let Some(d) = self.deltas.borrow().get(flag) {
            return Ok(d.clone());
        }
        let dirs = make_directional(flag)?.dirs;
        let family = self.family_on(&flag.last());
        let values = family
            .full_cells()
            .map(|c| self.delta_at(&dirs, &c.sample))
            .collect::<Result<Vec<_>>>()?;
        let d = Rc::new(DeltaFunction { flag: flag.clone(), family, values });
        self.deltas.borrow_mut().insert(flag.clone(), d.clone());
        Ok(d)
    }

    /// Candidate extensions of a flag: affine hulls of the codimension-one
    /// flats obtained by cutting the innermost member with an arrangement
    /// hyperplane. Every extension by any other subspace has zero delta, so
    /// these are the only ones that matter.
    pub fn extension_candidates(&self, flag: &Flag) -> Vec<AffineSubspace> {
        let last = flag.last();
        let mut out: Vec<AffineSubspace> = Vec::new();
        for h in &self.hyperplanes {
            let hsub = h.as_subspace();
            if last.is_subset_of(&hsub) {
                continue;
            }
            if let Ok(Some(cut)) = last.intersect(&hsub) {
                if cut.dim() + 1 == last.dim() {
                    out.push(cut);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// All flags with non-constant delta, grouped by construction: starting
    /// from the empty flag, each level keeps the extensions that remain
    /// non-constant. Extensions of a constant delta are identically zero, so
    /// the search is complete. The returned list includes the empty flag when
    /// the gradient itself is non-constant.
    pub fn nonconstant_flags(&self) -> Result<Vec<Flag>> {
        let mut out = Vec::new();
        let mut frontier = Vec::new();
        let empty = Flag::empty(self.dimension());
        if !self.delta(&empty)?.is_constant() {
            out.push(empty.clone());
            frontier.push(empty);
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for flag in &frontier {
                for cand in self.extension_candidates(flag) {
                    let ext = flag.extend(cand)?;
                    if !self.delta(&ext)?.is_constant() {
                        next.push(ext);
                    }
                }
            }
            next.sort();
            next.dedup();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }
}

/// The lineality space of a delta function along a flag: all directions
/// parallel to the flag's innermost member along which the delta function is
/// translation invariant.
pub fn lineality_of_delta(
    field: &GradientField,
    flag: &Flag,
) -> Result<crate::linalg::LinearSubspace> {
    let last = flag.last();
    let mut space = last.directions();
    for wall in field.extension_candidates(flag) {
        let jump = field.delta(&flag.extend(wall.clone())?)?;
        if !jump.is_zero() {
            space = space.intersect(&wall.directions());
        }
    }
    Ok(space)
}

/// Result of a lineality computation for the gradient field itself.
#[derive(Debug, Clone)]
pub struct LinealityResult {
    pub space: crate::linalg::LinearSubspace,
}

impl LinealityResult {
    pub fn lnum(&self) -> usize {
        self.space.dim()
    }
}

/// The lineality space of the gradient field: directions `y` with
/// `∇F(x + y) = ∇F(x)` for all generic `x`. A direction qualifies exactly
/// when it is parallel to every arrangement hyperplane across which the
/// gradient actually jumps; the result is verified by exact translation
/// checks on every full cell.
pub fn lineality(field: &GradientField) -> Result<LinealityResult> {
    let n = field.dimension();
    let mut real_normals: Vec<QVec> = Vec::new();
    for h in field.hyperplanes() {
        let flag = Flag::new(n, vec![h.as_subspace()])?;
        if !field.delta(&flag)?.is_zero() {
            real_normals.push(h.normal.clone());
        }
    }
    let space = crate::linalg::LinearSubspace::kernel(n, &real_normals);
    // Verification: translating any full-cell sample by a lineality direction
    // must not change the gradient. A translated sample can be non-generic;
    // shrink the step until it is (only finitely many steps can fail).
    let fam = field.family_on(&AffineSubspace::whole_space(n));
    for y in space.basis() {
        for cell in fam.full_cells() {
            let mut checked = false;
            for k in 1..=10i64 {
                let x2 = vaxpy(&cell.sample, &ratio(1, k), y);
                if let Ok(g) = field.expr().gradient_at(&x2) {
                    let g0 = field.expr().gradient_at(&cell.sample)?;
                    if g != g0 {
                        return Err(Error::InternalVerification(
                            "lineality candidate fails translation check".into(),
                        ));
                    }
                    checked = true;
                    break;
                }
            }
            if !checked {
                return Err(Error::InternalVerification(
                    "could not find a generic translate for lineality check".into(),
                ));
            }
        }
    }
    Ok(LinealityResult { space })
}

/// Convenience wrapper: the delta function of the expression's gradient
/// field along one flag.
pub fn delta(expr: &CpwlExpr, flag: &Flag) -> Result<DeltaFunction> {
    let field = GradientField::new(expr.clone());
    let d = field.delta(flag)?;
    Ok((*d).clone())
}

/// All flags with non-constant delta for the expression's gradient field.
pub fn nonconstant_flags(expr: &CpwlExpr) -> Result<Vec<Flag>> {
    GradientField::new(expr.clone()).nonconstant_flags()
}
