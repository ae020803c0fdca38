//! Summary statistics of a CPWL expression: the number of distinct affine
//! pieces, the number of linear regions, and the minimal-arity certificate
//! data.

use std::collections::HashMap;

use crate::arity::minimal_arity_of_field;
use crate::arrangement::Sign;
use crate::delta::GradientField;
use crate::expr::CpwlExpr;
use crate::linalg::AffineSubspace;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub dimension: usize,
    pub term_count: usize,
    /// Max-arity of the representation as given.
    pub arity: usize,
    /// Number of distinct affine functions the expression realizes on
    /// full-dimensional cells.
    pub affine_pieces: usize,
    /// Number of linear regions: maximal unions of full-dimensional cells
    /// glued across shared facets on which the expression is one affine
    /// function.
    pub linear_regions: usize,
    /// Minimal max-arity over all representations.
    pub k_star: usize,
    /// Sufficient depth for a fan-in-two max circuit.
    pub depth_bound: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Computes the summary report. Exact throughout: pieces compare as rational
/// coefficient vectors, adjacency is read off sign vectors.
pub fn report(f: &CpwlExpr) -> Result<Report> {
    let field = GradientField::new(f.clone());
    let cert = minimal_arity_of_field(&field)?;
    let n = f.dimension();
    let fam = field.family_on(&AffineSubspace::whole_space(n));
    let full: Vec<_> = fam.full_cells().collect();
    let pieces: Vec<_> =
        full.iter().map(|c| f.affine_piece_at(&c.sample)).collect::<Result<Vec<_>>>()?;
    let mut distinct = pieces.clone();
    distinct.sort();
    distinct.dedup();
    // Facet cells have exactly one Zero sign; their two neighbors flip it.
    let index: HashMap<&[Sign], usize> =
        full.iter().enumerate().map(|(i, c)| (c.sign_vector.as_slice(), i)).collect();
    let mut uf = UnionFind::new(full.len());
    for cell in fam.cells.iter().filter(|c| n > 0 && c.dim == n - 1) {
        let zeros: Vec<usize> = cell
            .sign_vector
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Zero)
            .map(|(i, _)| i)
            .collect();
        if zeros.len() != 1 {
            continue;
        }
        let mut a = cell.sign_vector.clone();
        let mut b = cell.sign_vector.clone();
        a[zeros[0]] = Sign::Pos;
        b[zeros[0]] = Sign::Neg;
        if let (Some(&i), Some(&j)) = (index.get(a.as_slice()), index.get(b.as_slice())) {
            if pieces[i] == pieces[j] {
                uf.union(i, j);
            }
        }
    }
    let mut roots: Vec<usize> = (0..full.len()).map(|i| uf.find(i)).collect();
    roots.sort();
    roots.dedup();
    Ok(Report {
        dimension: n,
        term_count: f.terms().len(),
        arity: f.arity(),
        affine_pieces: distinct.len(),
        linear_regions: roots.len(),
        k_star: cert.k_star,
        depth_bound: cert.depth_bound,
    })
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
    fn g1_three_pieces_three_regions() {
        let g1 = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)]);
        let r = report(&g1).unwrap();
        assert_eq!(r.dimension, 2);
        assert_eq!(r.affine_pieces, 3);
        assert_eq!(r.linear_regions, 3);
        assert_eq!(r.k_star, 3);
        assert_eq!(r.depth_bound, 3);
    }

    #[test]
    fn affine_single_region() {
        let f = CpwlExpr::affine_expr(af(&[1, 2], 3));
        let r = report(&f).unwrap();
        assert_eq!(r.affine_pieces, 1);
        assert_eq!(r.linear_regions, 1);
        assert_eq!(r.k_star, 1);
    }

    #[test]
    fn regions_merge_across_flat_facet() {
        // max(0, x) + max(0, -x) = |x| in the plane has hyperplane x = 0 only
        // once; but max(0, x, y, x + y) = max(0, x) + max(0, y) has four
        // quadrant cells and four distinct pieces.
        let f = max_of(2, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 0)]);
        let r = report(&f).unwrap();
        assert_eq!(r.affine_pieces, 4);
        assert_eq!(r.linear_regions, 4);
        assert_eq!(r.k_star, 2);
    }
}
