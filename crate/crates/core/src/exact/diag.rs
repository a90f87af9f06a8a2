use num_traits::{Signed, Zero};

use super::{Mat, Rat};
use crate::{Error, Result};

/// `pᵀ · g · p = d` with `d` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub p: Mat,
    pub d: Mat,
}

impl Diagonalization {
    /// `(positive, negative)` counts of the diagonal.
    pub fn signature(&self) -> (usize, usize) {
        let n = self.d.rows();
        let pos = (0..n).filter(|&i| self.d[(i, i)].is_positive()).count();
        let neg = (0..n).filter(|&i| self.d[(i, i)].is_negative()).count();
        (pos, neg)
    }

    /// Columns of `p`: an orthogonal basis of the quadratic space.
    pub fn basis(&self) -> alloc::vec::Vec<alloc::vec::Vec<Rat>> {
        (0..self.p.cols()).map(|j| self.p.column(j)).collect()
    }
}

/// Symmetric Gaussian elimination over ℚ.
///
/// When no remaining diagonal entry is usable, the basis vector at the pivot
/// position is replaced by its sum with a partner of nonzero pairing, which
/// has square `2·(b_k, b_j) ≠ 0`.
pub fn congruence_diagonalize(g: &Mat) -> Result<Diagonalization> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = g.rows();
    let mut d = g.clone();
    let mut p = Mat::identity(n);

    for k in 0..n {
        if d[(k, k)].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !d[(i, i)].is_zero()) {
                d.swap_rows(k, i);
                d.swap_cols(k, i);
                p.swap_cols(k, i);
            } else if let Some(j) = (k + 1..n).find(|&j| !d[(k, j)].is_zero()) {
                add_basis(&mut d, &mut p, k, j, &Rat::from_integer(1.into()));
            } else {
                return Err(Error::DegenerateForm);
            }
        }
        let pivot = d[(k, k)].clone();
        for j in k + 1..n {
            if d[(k, j)].is_zero() {
                continue;
            }
            let c = -(&d[(k, j)] / &pivot);
            add_basis(&mut d, &mut p, j, k, &c);
        }
    }
    Ok(Diagonalization { p, d })
}

/// Replace basis vector `dst` by `dst + c·src`, updating the Gram matrix `d`.
fn add_basis(d: &mut Mat, p: &mut Mat, dst: usize, src: usize, c: &Rat) {
    let n = d.rows();
    for i in 0..n {
        let t = c * &p[(i, src)];
        p[(i, dst)] += t;
    }
    for i in 0..n {
        let t = c * &d[(src, i)];
        d[(dst, i)] += t;
    }
    for i in 0..n {
        let t = c * &d[(i, src)];
        d[(i, dst)] += t;
    }
}
