//! The CPWL expression algebra: constants plus signed rational combinations
//! of max terms over affine functions, with exact evaluation, arithmetic,
//! gradients at generic points, and exact equivalence checking.

use num_traits::{One, Zero};

use crate::arrangement::{self, Hyperplane};
use crate::linalg::AffineSubspace;
use crate::rat::{dot, format_rat, is_zero_vec, rat, vadd, vaxpy, vscale, vsub, QVec, Rat};
use crate::{Error, Result};

/// An affine-linear function `x -> a . x + b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFunc {
    pub a: QVec,
    pub b: Rat,
}

impl AffineFunc {
    pub fn new(a: QVec, b: Rat) -> Self {
        AffineFunc { a, b }
    }

    pub fn zero(dim: usize) -> Self {
        AffineFunc { a: vec![Rat::zero(); dim], b: Rat::zero() }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        AffineFunc { a: vec![Rat::zero(); dim], b: c }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.a, x) + &self.b
    }

    pub fn add(&self, other: &AffineFunc) -> AffineFunc {
        AffineFunc { a: vadd(&self.a, &other.a), b: &self.b + &other.b }
    }

    pub fn scale(&self, c: &Rat) -> AffineFunc {
        AffineFunc { a: vscale(&self.a, c), b: &self.b * c }
    }
}

impl std::fmt::Display for AffineFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*x{}", format_rat(c), i + 1)?;
            first = false;
        }
        if !self.b.is_zero() || first {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rat(&self.b))?;
        }
        Ok(())
    }
}

impl std::fmt::Display for CpwlExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let trivial_affine = is_zero_vec(&self.affine.a) && self.affine.b.is_zero();
        if !trivial_affine || self.terms.is_empty() {
            write!(f, "{}", self.affine)?;
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 || !trivial_affine || self.terms.is_empty() {
                write!(f, " + ")?;
            }
            if !t.coefficient.is_one() {
                write!(f, "{}*", format_rat(&t.coefficient))?;
            }
            write!(f, "max(")?;
            for (j, g) in t.arguments.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// One `coefficient * max(arguments...)` term. The coefficient generalizes
/// the sign sigma_i in {-1, 1} to an arbitrary nonzero rational; such a
/// combination is re-expressible in sign form by repetition, so the arity
/// theory applies unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaxTerm {
    pub coefficient: Rat,
    pub arguments: Vec<AffineFunc>,
}

impl MaxTerm {
    pub fn arity(&self) -> usize {
        self.arguments.len()
    }

    pub fn max_at(&self, x: &[Rat]) -> Rat {
        self.arguments.iter().map(|g| g.eval(x)).max().expect("nonempty arguments")
    }

    /// The unique argmax index, or None on a tie.
    fn strict_argmax(&self, x: &[Rat]) -> Option<usize> {
        let values: Vec<Rat> = self.arguments.iter().map(|g| g.eval(x)).collect();
        let best = values.iter().max().unwrap().clone();
        let mut winners = values.iter().enumerate().filter(|(_, v)| **v == best);
        let (idx, _) = winners.next().unwrap();
        if winners.next().is_some() {
            None
        } else {
            Some(idx)
        }
    }
}

/// A CPWL function `F(x) = affine(x) + sum_i c_i * max_j g_{i,j}(x)`.
///
/// Construction canonicalizes: duplicate arguments inside a term are removed,
/// arity-1 terms are absorbed into the affine part, terms with identical
/// argument sets are merged by summing coefficients, and zero coefficients
/// are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CpwlExpr {
    dimension: usize,
    affine: AffineFunc,
    terms: Vec<MaxTerm>,
}

impl CpwlExpr {
    pub fn new(dimension: usize, affine: AffineFunc, terms: Vec<MaxTerm>) -> Result<Self> {
        if affine.dim() != dimension {
            return Err(Error::DimensionMismatch { expected: dimension, found: affine.dim() });
        }
        for t in &terms {
            if t.arguments.is_empty() {
                return Err(Error::Parse("max term with no arguments".into()));
            }
            for g in &t.arguments {
                if g.dim() != dimension {
                    return Err(Error::DimensionMismatch { expected: dimension, found: g.dim() });
                }
            }
        }
        Ok(Self::canonical(dimension, affine, terms))
    }

    fn canonical(dimension: usize, mut affine: AffineFunc, terms: Vec<MaxTerm>) -> Self {
        let mut merged: Vec<MaxTerm> = Vec::new();
        for t in terms {
            if t.coefficient.is_zero() {
                continue;
            }
            let mut args = t.arguments;
            args.sort();
            args.dedup();
            if args.len() == 1 {
                affine = affine.add(&args[0].scale(&t.coefficient));
                continue;
            }
            if let Some(m) = merged.iter_mut().find(|m| m.arguments == args) {
                m.coefficient += &t.coefficient;
            } else {
                merged.push(MaxTerm { coefficient: t.coefficient, arguments: args });
            }
        }
        merged.retain(|m| !m.coefficient.is_zero());
        merged.sort_by(|a, b| a.arguments.cmp(&b.arguments));
        CpwlExpr { dimension, affine, terms: merged }
    }

    pub fn affine_expr(f: AffineFunc) -> Self {
        let dimension = f.dim();
        CpwlExpr { dimension, affine: f, terms: vec![] }
    }

    /// Single term `max(g_1, ..., g_s)` with unit coefficient.
    pub fn max_of(dimension: usize, args: Vec<AffineFunc>) -> Result<Self> {
        CpwlExpr::new(
            dimension,
            AffineFunc::zero(dimension),
            vec![MaxTerm { coefficient: rat(1), arguments: args }],
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn affine_part(&self) -> &AffineFunc {
        &self.affine
    }

    pub fn terms(&self) -> &[MaxTerm] {
        &self.terms
    }

    /// Max over the terms' arities; 1 for a pure affine expression.
    pub fn arity(&self) -> usize {
        self.terms.iter().map(MaxTerm::arity).max().unwrap_or(1)
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: x.len() });
        }
        let mut v = self.affine.eval(x);
        for t in &self.terms {
            v += &t.coefficient * t.max_at(x);
        }
        Ok(v)
    }

    pub fn add(&self, other: &CpwlExpr) -> Result<CpwlExpr> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(CpwlExpr::canonical(self.dimension, self.affine.add(&other.affine), terms))
    }

    /// Scaling by zero yields the zero expression with no terms; scaling by a
    /// negative rational flips term coefficients, never max into min.
    pub fn scale(&self, c: &Rat) -> CpwlExpr {
        if c.is_zero() {
            return CpwlExpr::affine_expr(AffineFunc::zero(self.dimension));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| MaxTerm { coefficient: &t.coefficient * c, arguments: t.arguments.clone() })
            .collect();
        CpwlExpr::canonical(self.dimension, self.affine.scale(c), terms)
    }

    pub fn sub(&self, other: &CpwlExpr) -> Result<CpwlExpr> {
        self.add(&other.scale(&rat(-1)))
    }

    /// `F o M` for an affine map `M: Q^m -> Q^n`.
    pub fn compose_affine(&self, map: &AffineMap) -> Result<CpwlExpr> {
        if map.output_dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: map.output_dim(),
            });
        }
        let compose_func = |g: &AffineFunc| -> AffineFunc {
            // a.(Mx + c) + b = (M^T a).x + (a.c + b)
            let a_new: QVec = (0..map.input_dim())
                .map(|j| g.a.iter().zip(&map.matrix).map(|(ai, row)| ai * &row[j]).sum())
                .collect();
            AffineFunc { a: a_new, b: dot(&g.a, &map.offset) + &g.b }
        };
        let terms = self
            .terms
            .iter()
            .map(|t| MaxTerm {
                coefficient: t.coefficient.clone(),
                arguments: t.arguments.iter().map(compose_func).collect(),
            })
            .collect();
        Ok(CpwlExpr::canonical(map.input_dim(), compose_func(&self.affine), terms))
    }

    /// Gradient of the expression at a generic point: strict unique argmax in
    /// every term, checked exactly.
    pub fn gradient_at(&self, x: &[Rat]) -> Result<QVec> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: x.len() });
        }
        let mut grad = self.affine.a.clone();
        for t in &self.terms {
            let j = t.strict_argmax(x).ok_or(Error::NonGeneric)?;
            grad = vaxpy(&grad, &t.coefficient, &t.arguments[j].a);
        }
        Ok(grad)
    }

    /// The affine function the expression coincides with on the open cell
    /// containing the generic point `x`.
    pub fn affine_piece_at(&self, x: &[Rat]) -> Result<AffineFunc> {
        let a = self.gradient_at(x)?;
        let b = self.eval(x)? - dot(&a, x);
        Ok(AffineFunc { a, b })
    }
}

/// An affine map `x -> M x + c` from Q^m to Q^n, rows of M given explicitly.
#[derive(Debug, Clone)]
pub struct AffineMap {
    /// n rows of m entries each.
    pub matrix: Vec<QVec>,
    pub offset: QVec,
}

impl AffineMap {
    pub fn linear(matrix: Vec<QVec>) -> Self {
        let n = matrix.len();
        let offset = vec![Rat::zero(); n];
        AffineMap { matrix, offset }
    }

    pub fn translation(offset: QVec) -> Self {
        let n = offset.len();
        let matrix = (0..n)
            .map(|i| {
                let mut row = vec![Rat::zero(); n];
                row[i] = Rat::one();
                row
            })
            .collect();
        AffineMap { matrix, offset }
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.first().map_or(self.offset.len(), |r| r.len())
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[Rat]) -> QVec {
        vadd(&crate::linalg::mat_vec(&self.matrix, x), &self.offset)
    }
}

/// Outcome of an exact equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    Differs { witness: QVec, lhs: Rat, rhs: Rat },
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }
}

/// Decides `F == G` on all of Q^n by comparing the exact affine piece on
/// every full-dimensional cell of the common refined arrangement. On
/// inequality, returns a concrete witness point.
pub fn equivalent(f: &CpwlExpr, g: &CpwlExpr) -> Result<Equivalence> {
    if f.dimension() != g.dimension() {
        return Err(Error::DimensionMismatch {
            expected: f.dimension(),
            found: g.dimension(),
        });
    }
    let n = f.dimension();
    let mut hs: Vec<Hyperplane> = arrangement_of_pair(f, g);
    hs.sort();
    hs.dedup();
    let fam = arrangement::enumerate_cells(&hs, &AffineSubspace::whole_space(n));
    for cell in fam.full_cells() {
        let x = &cell.sample;
        let fv = f.eval(x)?;
        let gv = g.eval(x)?;
        if fv != gv {
            return Ok(Equivalence::Differs { witness: x.clone(), lhs: fv, rhs: gv });
        }
        let fa = f.gradient_at(x)?;
        let ga = g.gradient_at(x)?;
        if fa != ga {
            // Values agree at the sample but slopes differ: step inside the
            // cell along the gradient difference to expose a value gap.
            let v = vsub(&fa, &ga);
            let t = arrangement::clearance(x, &v, &hs);
            let w = vaxpy(x, &t, &v);
            let fv = f.eval(&w)?;
            let gv = g.eval(&w)?;
            debug_assert_ne!(fv, gv);
            return Ok(Equivalence::Differs { witness: w, lhs: fv, rhs: gv });
        }
    }
    Ok(Equivalence::Equal)
}

fn arrangement_of_pair(f: &CpwlExpr, g: &CpwlExpr) -> Vec<Hyperplane> {
    let mut hs = arrangement::arrangement_of(f);
    hs.extend(arrangement::arrangement_of(g));
    hs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qvec, ratio};

    fn af(a: &[i64], b: i64) -> AffineFunc {
        AffineFunc::new(qvec(a), rat(b))
    }

    #[test]
    fn canonicalization_merges_and_absorbs() {
        // 2*max(x, y) + 3*max(y, x) + 5*max(x) - 5*max(x, y)
        let t = |c: i64, args: Vec<AffineFunc>| MaxTerm { coefficient: rat(c), arguments: args };
        let x = af(&[1, 0], 0);
        let y = af(&[0, 1], 0);
        let f = CpwlExpr::new(
            2,
            AffineFunc::zero(2),
            vec![
                t(2, vec![x.clone(), y.clone()]),
                t(3, vec![y.clone(), x.clone()]),
                t(5, vec![x.clone()]),
                t(-5, vec![x.clone(), y.clone()]),
            ],
        )
        .unwrap();
        assert_eq!(f.terms().len(), 0); // 2 + 3 - 5 = 0
        assert_eq!(f.affine_part(), &af(&[5, 0], 0));
    }

    #[test]
    fn eval_relu_like() {
        let f = CpwlExpr::max_of(1, vec![af(&[0], 0), af(&[1], 0)]).unwrap();
        assert_eq!(f.eval(&qvec(&[3])).unwrap(), rat(3));
        assert_eq!(f.eval(&qvec(&[-4])).unwrap(), rat(0));
        assert_eq!(f.arity(), 2);
    }

    #[test]
    fn gradient_generic_and_tie() {
        let f = CpwlExpr::max_of(2, vec![af(&[1, 0], 0), af(&[0, 1], 0)]).unwrap();
        assert_eq!(f.gradient_at(&qvec(&[2, 1])).unwrap(), qvec(&[1, 0]));
        assert!(matches!(f.gradient_at(&qvec(&[1, 1])), Err(Error::NonGeneric)));
    }

    #[test]
    fn compose_with_affine_map() {
        // F(x, y) = max(x, y); M(t) = (t, 2t + 1); F(M(t)) = max(t, 2t + 1)
        let f = CpwlExpr::max_of(2, vec![af(&[1, 0], 0), af(&[0, 1], 0)]).unwrap();
        let m = AffineMap { matrix: vec![qvec(&[1]), qvec(&[2])], offset: qvec(&[0, 1]) };
        let g = f.compose_affine(&m).unwrap();
        assert_eq!(g.eval(&qvec(&[-3])).unwrap(), rat(-3)); // max(-3, -5)
        assert_eq!(g.eval(&qvec(&[1])).unwrap(), rat(3)); // max(1, 3)
    }

    #[test]
    fn equivalence_abs_two_forms() {
        // |x| = max(x, -x) = 2*max(0, x) - x
        let a = CpwlExpr::max_of(1, vec![af(&[1], 0), af(&[-1], 0)]).unwrap();
        let b = CpwlExpr::new(
            1,
            af(&[-1], 0),
            vec![MaxTerm { coefficient: rat(2), arguments: vec![af(&[0], 0), af(&[1], 0)] }],
        )
        .unwrap();
        assert!(equivalent(&a, &b).unwrap().is_equal());
    }

    #[test]
    fn equivalence_witness_when_slopes_differ() {
        let a = CpwlExpr::max_of(1, vec![af(&[1], 0), af(&[-1], 0)]).unwrap();
        let b = a.scale(&ratio(1, 2));
        match equivalent(&a, &b).unwrap() {
            Equivalence::Differs { witness, lhs, rhs } => {
                assert_eq!(a.eval(&witness).unwrap(), lhs);
                assert_eq!(b.eval(&witness).unwrap(), rhs);
                assert_ne!(lhs, rhs);
            }
            Equivalence::Equal => panic!("expected a witness"),
        }
    }
}
