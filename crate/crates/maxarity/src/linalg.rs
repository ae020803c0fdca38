//! Exact linear algebra over Q: reduced row echelon form, linear and affine
//! subspaces with canonical representations.
//!
//! Affine subspaces carry the reduced row echelon form of their equation
//! system, so set-equal subspaces compare equal structurally and can serve as
//! dictionary keys (flags are built out of them).

use num_traits::{One, Zero};

use crate::rat::{dot, is_zero_vec, vadd, vscale, QVec, Rat};
use crate::{Error, Result};

/// Reduces `mat` in place to reduced row echelon form; returns pivot columns.
/// Zero rows are removed.
pub fn rref(mat: &mut Vec<QVec>) -> Vec<usize> {
    if mat.is_empty() {
        return vec![];
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].recip();
        for x in mat[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..mat.len() {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                let pivot_row = mat[row].clone();
                for (x, p) in mat[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == mat.len() {
            break;
        }
    }
    mat.truncate(row);
    pivots
}

pub fn rank(rows: &[QVec]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m);
    m.len()
}

/// Null space of the matrix with the given rows, as a canonical (RREF) basis.
pub fn null_space(rows: &[QVec], ambient: usize) -> Vec<QVec> {
    let mut m: Vec<QVec> = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    let free: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
    for &f in &free {
        let mut v = vec![Rat::zero(); ambient];
        v[f] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][f].clone();
        }
        basis.push(v);
    }
    // Free-column construction already yields an RREF-like basis, but run it
    // through rref so the representation is canonical regardless of source.
    rref(&mut basis);
    basis
}

/// Exact inverse of a square matrix given by rows. None when singular.
pub fn invert(rows: &[QVec]) -> Option<Vec<QVec>> {
    let n = rows.len();
    let mut aug: Vec<QVec> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), n);
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Matrix-vector product, rows x v.
pub fn mat_vec(rows: &[QVec], v: &[Rat]) -> QVec {
    rows.iter().map(|r| dot(r, v)).collect()
}

/// A linear subspace of Q^n with a canonical RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSubspace {
    ambient: usize,
    basis: Vec<QVec>,
}

impl LinearSubspace {
    pub fn span(ambient: usize, vectors: &[QVec]) -> Self {
        let mut basis: Vec<QVec> = vectors.iter().filter(|v| !is_zero_vec(v)).cloned().collect();
        for v in &basis {
            assert_eq!(v.len(), ambient);
        }
        rref(&mut basis);
        LinearSubspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        LinearSubspace { ambient, basis: vec![] }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rat::zero(); ambient];
                v[i] = Rat::one();
                v
            })
            .collect();
        LinearSubspace { ambient, basis }
    }

    /// Kernel of the linear map with the given rows.
    pub fn kernel(ambient: usize, rows: &[QVec]) -> Self {
        LinearSubspace { ambient, basis: null_space(rows, ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut m = self.basis.clone();
        m.push(v.to_vec());
        rank(&m) == self.basis.len()
    }

    pub fn is_subspace_of(&self, other: &LinearSubspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Equations cutting out this subspace: a canonical basis of the
    /// orthogonal complement. Over Q the complement is a true complement.
    pub fn equations(&self) -> Vec<QVec> {
        null_space(&self.basis, self.ambient)
    }

    pub fn intersect(&self, other: &LinearSubspace) -> LinearSubspace {
        assert_eq!(self.ambient, other.ambient);
        let mut eqs = self.equations();
        eqs.extend(other.equations());
        LinearSubspace::kernel(self.ambient, &eqs)
    }

    pub fn sum(&self, other: &LinearSubspace) -> LinearSubspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        LinearSubspace::span(self.ambient, &vs)
    }

    /// Orthogonal complement W with self (+) W = Q^n.
    pub fn complement(&self) -> LinearSubspace {
        LinearSubspace { ambient: self.ambient, basis: null_space(&self.basis, self.ambient) }
    }
}

/// An affine subspace of Q^n, canonically represented by the RREF of its
/// equation system `A x = b` (rows of [A | b]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineSubspace {
    ambient: usize,
    /// RREF rows of the augmented system [A | b]; empty for the whole space.
    eqs: Vec<QVec>,
}

impl AffineSubspace {
    /// Solution set of the simultaneous equations `a . x = b`, or None when
    /// the system is infeasible.
    pub fn solve(ambient: usize, system: &[(QVec, Rat)]) -> Result<Option<AffineSubspace>> {
        let mut rows = Vec::new();
        for (a, b) in system {
            if a.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: a.len(),
                });
            }
            let mut row = a.clone();
            row.push(b.clone());
            rows.push(row);
        }
        let pivots = rref(&mut rows);
        // A pivot in the augmented column signals 0 = 1.
        if pivots.contains(&ambient) {
            return Ok(None);
        }
        Ok(Some(AffineSubspace { ambient, eqs: rows }))
    }

    pub fn whole_space(ambient: usize) -> Self {
        AffineSubspace { ambient, eqs: vec![] }
    }

    pub fn point(x: &QVec) -> Self {
        let ambient = x.len();
        let eqs = x
            .iter()
            .enumerate()
            .map(|(i, xi)| {
                let mut row = vec![Rat::zero(); ambient + 1];
                row[i] = Rat::one();
                row[ambient] = xi.clone();
                row
            })
            .collect();
        AffineSubspace { ambient, eqs }
    }

    pub fn from_anchor_directions(anchor: &QVec, directions: &LinearSubspace) -> Self {
        let ambient = anchor.len();
        assert_eq!(directions.ambient(), ambient);
        let system: Vec<(QVec, Rat)> = directions
            .equations()
            .into_iter()
            .map(|a| {
                let b = dot(&a, anchor);
                (a, b)
            })
            .collect();
        AffineSubspace::solve(ambient, &system)
            .expect("dimensions agree")
            .expect("anchor satisfies its own equations")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.eqs.len()
    }

    pub fn codim(&self) -> usize {
        self.eqs.len()
    }

    /// The canonical equation rows [A | b].
    pub fn equations(&self) -> &[QVec] {
        &self.eqs
    }

    /// A particular solution: free variables set to zero.
    pub fn anchor(&self) -> QVec {
        let mut x = vec![Rat::zero(); self.ambient];
        for row in &self.eqs {
            let pivot = row[..self.ambient]
                .iter()
                .position(|c| !c.is_zero())
                .expect("no zero rows in RREF");
            x[pivot] = row[self.ambient].clone();
        }
        x
    }

    /// Direction space (solutions of the homogeneous system).
    pub fn directions(&self) -> LinearSubspace {
        let rows: Vec<QVec> = self.eqs.iter().map(|r| r[..self.ambient].to_vec()).collect();
        LinearSubspace::kernel(self.ambient, &rows)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.ambient);
        self.eqs
            .iter()
            .all(|row| dot(&row[..self.ambient], x) == row[self.ambient])
    }

    pub fn is_subset_of(&self, other: &AffineSubspace) -> bool {
        other.contains(&self.anchor()) && self.directions().is_subspace_of(&other.directions())
    }

    /// Exact intersection; None when empty (parallel or skew).
    pub fn intersect(&self, other: &AffineSubspace) -> Result<Option<AffineSubspace>> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let system: Vec<(QVec, Rat)> = self
            .eqs
            .iter()
            .chain(&other.eqs)
            .map(|row| (row[..self.ambient].to_vec(), row[self.ambient].clone()))
            .collect();
        AffineSubspace::solve(self.ambient, &system)
    }

    /// Shifts the subspace by `t`.
    pub fn translate(&self, t: &QVec) -> AffineSubspace {
        AffineSubspace::from_anchor_directions(&vadd(&self.anchor(), t), &self.directions())
    }
}

/// Complement basis with L (+) W = Q^n, orthogonal under the standard inner
/// product so the choice is canonical.
pub fn complement_basis(l: &LinearSubspace) -> LinearSubspace {
    l.complement()
}

/// A point of the subspace with the given coefficients on its direction basis.
pub fn point_on(sub: &AffineSubspace, coeffs: &[Rat]) -> QVec {
    let dirs = sub.directions();
    let mut x = sub.anchor();
    for (c, b) in coeffs.iter().zip(dirs.basis()) {
        x = vadd(&x, &vscale(b, c));
    }
    x
}
