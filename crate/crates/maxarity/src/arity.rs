//! Minimal max-arity certification.
//!
//! An expression is representable with max terms of at most `k` arguments if
//! and only if every flag of length `k - 1` has a constant delta function.
//! The minimal such `k` (written `k*`) is therefore two more than the length
//! of the deepest flag with a non-constant delta, or 1 when the gradient is
//! already constant.

use crate::delta::{Flag, GradientField};
use crate::expr::CpwlExpr;
use crate::rat::QVec;
use crate::Result;

/// A verified certificate for the minimal max-arity of an expression.
#[derive(Debug, Clone)]
pub struct ArityCertificate {
    /// The minimal number of arguments `k*` any max term needs.
    pub k_star: usize,
    /// Depth sufficient for a max-plus circuit of fan-in two computing the
    /// function: `ceil(log2(k*)) + 1`.
    pub depth_bound: usize,
    /// All flags with non-constant delta, the exhaustive obstruction set.
    /// Empty exactly when `k* = 1` (the function is affine).
    pub nonconstant_flags: Vec<Flag>,
    /// For `k* >= 2`: a flag of length `k* - 2` together with two points on
    /// its last member where the delta function takes different values. This
    /// witnesses that arity `k* - 1` is impossible.
    pub lower_bound_witness: Option<(Flag, QVec, QVec)>,
}

/// Certifies the minimal max-arity of the expression.
pub fn minimal_arity(expr: &CpwlExpr) -> Result<ArityCertificate> {
    let field = GradientField::new(expr.clone());
    minimal_arity_of_field(&field)
}

/// Same as [`minimal_arity`], reusing an existing gradient field's caches.
pub fn minimal_arity_of_field(field: &GradientField) -> Result<ArityCertificate> {
    let flags = field.nonconstant_flags()?;
    let deepest = flags.iter().map(Flag::len).max();
    let k_star = match deepest {
        None => 1,
        Some(m) => m + 2,
    };
    let lower_bound_witness = match deepest {
        None => None,
        Some(m) => {
            let flag = flags.iter().find(|f| f.len() == m).expect("deepest flag exists").clone();
            let d = field.delta(&flag)?;
            let (a, b) = d
                .nonconstant_witness()
                .expect("flag was collected because its delta is non-constant");
            Some((flag, a, b))
        }
    };
    Ok(ArityCertificate {
        k_star,
        depth_bound: depth_bound_for(k_star),
        nonconstant_flags: flags,
        lower_bound_witness,
    })
}

/// `ceil(log2(k)) + 1`: a balanced tree of two-argument max gates of this
/// depth suffices for a `k`-argument max, plus one layer for the weighted
/// sum.
pub fn depth_bound_for(k: usize) -> usize {
    let mut d = 0;
    let mut cap = 1usize;
    while cap < k {
        cap *= 2;
        d += 1;
    }
    d + 1
}

/// Is the expression representable with max terms of at most `k` arguments?
/// `k` must be at least 1.
pub fn check_arity(expr: &CpwlExpr, k: usize) -> Result<bool> {
    if k == 0 {
        return Ok(false);
    }
    Ok(minimal_arity(expr)?.k_star <= k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::AffineFunc;
    use crate::rat::{qvec, rat};

    fn af(a: &[i64], b: i64) -> AffineFunc {
        AffineFunc::new(qvec(a), rat(b))
    }

    fn max_of(dim: usize, rows: &[(&[i64], i64)]) -> CpwlExpr {
        CpwlExpr::max_of(dim, rows.iter().map(|(a, b)| af(a, *b)).collect()).unwrap()
    }

    #[test]
    fn affine_has_arity_one() {
        let f = CpwlExpr::affine_expr(af(&[3, -2], 7));
        let c = minimal_arity(&f).unwrap();
        assert_eq!(c.k_star, 1);
        assert_eq!(c.depth_bound, 1);
        assert!(c.lower_bound_witness.is_none());
    }

    #[test]
    fn abs_has_arity_two() {
        let f = max_of(1, &[(&[1], 0), (&[-1], 0)]);
        let c = minimal_arity(&f).unwrap();
        assert_eq!(c.k_star, 2);
        assert_eq!(c.depth_bound, 2);
        assert!(check_arity(&f, 2).unwrap());
        assert!(!check_arity(&f, 1).unwrap());
    }

    #[test]
    fn g1_needs_three() {
        let g1 = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)]);
        let c = minimal_arity(&g1).unwrap();
        assert_eq!(c.k_star, 3);
        assert_eq!(c.depth_bound, 3);
        let (flag, a, b) = c.lower_bound_witness.unwrap();
        assert_eq!(flag.len(), 1);
        // The witness points really separate the delta values.
        let field = GradientField::new(g1);
        let d = field.delta(&flag).unwrap();
        assert_ne!(d.value_at(&a).unwrap(), d.value_at(&b).unwrap());
    }

    #[test]
    fn g3_sum_collapses_to_two() {
        // max(0, x, y) + max(0, -x, -y) is representable with arity 2.
        let g3 = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)])
            .add(&max_of(2, &[(&[0, 0], 0), (&[-1, 0], 0), (&[0, -1], 0)]))
            .unwrap();
        assert_eq!(minimal_arity(&g3).unwrap().k_star, 2);
    }

    #[test]
    fn g4_weighted_sum_stays_three() {
        let g4 = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)])
            .scale(&rat(6))
            .add(&max_of(2, &[(&[0, 0], 0), (&[-1, 0], 0), (&[0, -1], 0)]))
            .unwrap();
        assert_eq!(minimal_arity(&g4).unwrap().k_star, 3);
    }

    #[test]
    fn depth_bounds() {
        assert_eq!(depth_bound_for(1), 1);
        assert_eq!(depth_bound_for(2), 2);
        assert_eq!(depth_bound_for(3), 3);
        assert_eq!(depth_bound_for(4), 3);
        assert_eq!(depth_bound_for(5), 4);
    }
}
