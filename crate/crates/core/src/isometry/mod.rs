//! Isometries of `L⊗ℚ` as exact matrices: reflections, Eichler
//! transvections, reflection decompositions, spinor norms and membership in
//! the subgroups `O`, `SO`, `O⁺`, `Õ`, `Õ⁺`, `S̃O⁺`, `O′`.

mod spinor;
mod word;

use alloc::vec::Vec;
use core::ops::Mul;

use num_traits::{One, Signed, Zero};

use crate::exact::{Mat, Rat};
use crate::lattice::Lattice;
use crate::{Error, Result};

pub use spinor::{
    cartan_dieudonne, cartan_dieudonne_with_order, spinor_norm_q, spinor_norm_r, SquareClass,
};
pub use word::{Atom, CompiledWord, GroupWord};

/// Exact matrix preserving the Gram form of its lattice.
///
/// The matrix acts on column vectors of coordinates; the constructor checks
/// `Mᵀ·G·M = G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsometryMap {
    matrix: Mat,
}

impl IsometryMap {
    pub fn new(lattice: &Lattice, matrix: Mat) -> Result<Self> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Dimension("matrix size differs from lattice rank"));
        }
        if !preserves_gram(lattice, &matrix) {
            return Err(Error::NotIsometry);
        }
        Ok(IsometryMap { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: Mat) -> Self {
        IsometryMap { matrix }
    }

    pub fn identity(n: usize) -> Self {
        IsometryMap {
            matrix: Mat::identity(n),
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat {
        self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn is_integral(&self) -> bool {
        self.matrix.is_integral()
    }

    pub fn det(&self) -> Rat {
        self.matrix.determinant()
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.mul_vec(v)
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &IsometryMap) -> IsometryMap {
        IsometryMap {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// `G⁻¹·Mᵀ·G`.
    pub fn inverse(&self, lattice: &Lattice) -> IsometryMap {
        let m = &(lattice.gram_inverse() * &self.matrix.transpose()) * lattice.gram();
        IsometryMap { matrix: m }
    }

    /// `self · x · self⁻¹`.
    pub fn conjugate(&self, lattice: &Lattice, x: &IsometryMap) -> IsometryMap {
        self.compose(x).compose(&self.inverse(lattice))
    }

    /// `σ_a: v ↦ v − 2(a,v)/(a,a)·a`.
    pub fn reflection(lattice: &Lattice, a: &[Rat]) -> Result<Self> {
        lattice.check_len(a.len())?;
        let aa = lattice.norm(a);
        if aa.is_zero() {
            return Err(Error::IsotropicMirror);
        }
        let ga = lattice.gram().mul_vec(a);
        let c = Rat::from_integer(2.into()) / aa;
        let m = &Mat::identity(a.len()) - &Mat::outer(a, &ga).scale(&c);
        Ok(IsometryMap { matrix: m })
    }

    /// Eichler transvection `v ↦ v − (a,v)e + (e,v)a − ½(a,a)(e,v)e`.
    ///
    /// Requires `(e,e) = 0` and `(e,a) = 0`; both may be rational.
    pub fn transvection(lattice: &Lattice, e: &[Rat], a: &[Rat]) -> Result<Self> {
        lattice.check_len(e.len())?;
        lattice.check_len(a.len())?;
        if !lattice.norm(e).is_zero() {
            return Err(Error::NotIsotropic);
        }
        if !lattice.inner(e, a).is_zero() {
            return Err(Error::NotOrthogonal);
        }
        let ge = lattice.gram().mul_vec(e);
        let ga = lattice.gram().mul_vec(a);
        let half_aa = lattice.norm(a) / Rat::from_integer(2.into());
        let n = e.len();
        let m = Mat::from_fn(n, n, |i, j| {
            let mut x = if i == j { Rat::one() } else { Rat::zero() };
            x -= &e[i] * &ga[j];
            x += &a[i] * &ge[j];
            x -= &half_aa * &e[i] * &ge[j];
            x
        });
        Ok(IsometryMap { matrix: m })
    }
}

impl Mul for &IsometryMap {
    type Output = IsometryMap;

    fn mul(self, rhs: &IsometryMap) -> IsometryMap {
        self.compose(rhs)
    }
}

impl Mul for IsometryMap {
    type Output = IsometryMap;

    fn mul(self, rhs: IsometryMap) -> IsometryMap {
        self.compose(&rhs)
    }
}

pub(crate) fn preserves_gram(lattice: &Lattice, m: &Mat) -> bool {
    m.rows() == lattice.rank()
        && m.cols() == lattice.rank()
        && &(&m.transpose() * lattice.gram()) * m == *lattice.gram()
}

/// Which of the groups of integral isometries a matrix belongs to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Membership {
    /// Integral and preserves the Gram form.
    pub in_o: bool,
    pub in_so: bool,
    /// `O⁺(L) = O(L) ∩ ker sn_ℝ`.
    pub in_o_plus: bool,
    /// `Õ(L)`: trivial on the discriminant group.
    pub in_stable: bool,
    pub in_stable_plus: bool,
    pub in_stable_so_plus: bool,
    /// `O′(L) = SO(L) ∩ ker sn_ℚ`.
    pub in_spinorial_kernel: bool,
}

impl Membership {
    /// Classify an arbitrary square matrix. Non-isometries get all-false flags.
    pub fn classify(lattice: &Lattice, m: &Mat) -> Membership {
        if !m.is_integral() || !preserves_gram(lattice, m) {
            return Membership::default();
        }
        let g = IsometryMap::from_matrix_unchecked(m.clone());
        let det_one = g.det().is_one();
        let sn_q = spinor_norm_q(lattice, &g).expect("isometry decomposes");
        let plus = sn_q.value().is_positive();
        let stable = lattice
            .discriminant_form()
            .is_stable(m)
            .expect("integral isometry induces a map on D(L)");
        Membership {
            in_o: true,
            in_so: det_one,
            in_o_plus: plus,
            in_stable: stable,
            in_stable_plus: stable && plus,
            in_stable_so_plus: stable && plus && det_one,
            in_spinorial_kernel: det_one && sn_q.is_trivial(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, rats};
    use crate::lattice::{Block, Lattice};

    fn u_plus_u1() -> Lattice {
        // basis (e, e1, f1, f)
        let g =
            crate::exact::Mat::from_i64(4, 4, &[0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0]);
        Lattice::new(g.to_int_rows().unwrap(), None).unwrap()
    }

    #[test]
    fn reflection_swaps_hyperbolic_basis() {
        let l = Lattice::from_blocks(&[Block::u()]).unwrap();
        let s = IsometryMap::reflection(&l, &rats(&[1, -1])).unwrap();
        assert_eq!(s.matrix(), &Mat::from_i64(2, 2, &[0, 1, 1, 0]));
        assert_eq!(s.det(), -Rat::one());
        assert!(s.compose(&s).is_identity());
        assert_eq!(
            IsometryMap::reflection(&l, &rats(&[1, 0])),
            Err(Error::IsotropicMirror)
        );
    }

    #[test]
    fn transvection_on_two_planes() {
        let l = u_plus_u1();
        let t = IsometryMap::transvection(&l, &rats(&[1, 0, 0, 0]), &rats(&[0, 1, 0, 0])).unwrap();
        // e ↦ e, e1 ↦ e1, f1 ↦ f1 − e, f ↦ f + e1
        assert_eq!(t.apply(&rats(&[1, 0, 0, 0])), rats(&[1, 0, 0, 0]));
        assert_eq!(t.apply(&rats(&[0, 1, 0, 0])), rats(&[0, 1, 0, 0]));
        assert_eq!(t.apply(&rats(&[0, 0, 1, 0])), rats(&[-1, 0, 1, 0]));
        assert_eq!(t.apply(&rats(&[0, 0, 0, 1])), rats(&[0, 1, 0, 1]));
        assert!(IsometryMap::new(&l, t.matrix().clone()).is_ok());
    }

    #[test]
    fn trivial_transvections() {
        let l = u_plus_u1();
        let e = rats(&[1, 0, 0, 0]);
        assert!(IsometryMap::transvection(&l, &e, &rats(&[0, 0, 0, 0]))
            .unwrap()
            .is_identity());
        let xe: Vec<Rat> = e.iter().map(|c| c * ratio(7, 3)).collect();
        assert!(IsometryMap::transvection(&l, &e, &xe)
            .unwrap()
            .is_identity());
        assert_eq!(
            IsometryMap::transvection(&l, &rats(&[1, 0, 0, 1]), &e),
            Err(Error::NotIsotropic)
        );
        assert_eq!(
            IsometryMap::transvection(&l, &e, &rats(&[0, 0, 0, 1])),
            Err(Error::NotOrthogonal)
        );
    }

    #[test]
    fn membership_examples() {
        let l = Lattice::hyperbolic_sum_with(2, -6).unwrap();
        let t = IsometryMap::transvection(&l, &rats(&[1, 0, 0, 0, 0]), &rats(&[0, 0, 1, 2, 1]))
            .unwrap();
        let m = Membership::classify(&l, t.matrix());
        assert!(m.in_stable_so_plus && m.in_spinorial_kernel);

        let s = IsometryMap::reflection(&l, &rats(&[1, -1, 0, 0, 0])).unwrap();
        let m = Membership::classify(&l, s.matrix());
        assert!(m.in_o_plus && !m.in_so && m.in_stable_plus);

        let m = Membership::classify(&l, &-&Mat::identity(5));
        assert!(m.in_o && !m.in_stable);

        let m = Membership::classify(&l, &Mat::identity(5));
        assert!(m.in_o && m.in_so && m.in_o_plus && m.in_stable && m.in_spinorial_kernel);

        let junk = Mat::from_i64(5, 5, &[1; 25]);
        assert_eq!(Membership::classify(&l, &junk), Membership::default());
    }

    #[test]
    fn inverse_matches_gauss_jordan() {
        let l = Lattice::hyperbolic_sum_with(2, -4).unwrap();
        let t = IsometryMap::transvection(&l, &rats(&[0, 1, 0, 0, 0]), &rats(&[0, 0, 1, -1, 2]))
            .unwrap();
        assert_eq!(t.inverse(&l).into_matrix(), t.matrix().inverse().unwrap());
    }
}
