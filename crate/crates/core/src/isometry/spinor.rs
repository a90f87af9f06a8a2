use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{preserves_gram, IsometryMap};
use crate::exact::{add_vec, congruence_diagonalize, sub_vec, Int, Mat, Rat};
use crate::lattice::Lattice;
use crate::{Error, Result};

/// Element of `ℚ^×/(ℚ^×)²`, stored as a signed squarefree integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass(Int);

impl SquareClass {
    pub fn one() -> Self {
        SquareClass(Int::one())
    }

    /// Class of a nonzero rational. Panics on zero.
    pub fn of(x: &Rat) -> Self {
        assert!(!x.is_zero(), "square class of zero");
        SquareClass(squarefree_part(&(x.numer() * x.denom())))
    }

    pub fn value(&self) -> &Int {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_one()
    }

    /// The real spinor norm: sign of the class.
    pub fn sign(&self) -> i8 {
        if self.0.is_negative() {
            -1
        } else {
            1
        }
    }
}

impl Mul for &SquareClass {
    type Output = SquareClass;

    fn mul(self, rhs: &SquareClass) -> SquareClass {
        let g = self.0.gcd(&rhs.0);
        // (a·b)/g² stays squarefree when a, b are
        SquareClass(&self.0 / &g * (&rhs.0 / &g))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Signed squarefree part of a nonzero integer, by trial division.
pub(crate) fn squarefree_part(n: &Int) -> Int {
    let sign = if n.is_negative() {
        -Int::one()
    } else {
        Int::one()
    };
    let mut m = n.abs();
    let mut out = Int::one();
    let mut p = Int::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += if p == Int::from(2) {
            Int::one()
        } else {
            Int::from(2)
        };
    }
    sign * out * m
}

/// Mirrors `v₁, …, v_m` with `g = σ_{v₁}·…·σ_{v_m}`, using the lattice's
/// cached orthogonal basis.
pub fn cartan_dieudonne(lattice: &Lattice, g: &IsometryMap) -> Result<Vec<Vec<Rat>>> {
    decompose(lattice, g, lattice.orthogonal_basis())
}

/// Same as [`cartan_dieudonne`], but orthogonalizing the basis vectors in the
/// given order. Different orders give different mirrors with the same
/// spinor norm.
pub fn cartan_dieudonne_with_order(
    lattice: &Lattice,
    g: &IsometryMap,
    order: &[usize],
) -> Result<Vec<Vec<Rat>>> {
    let n = lattice.rank();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::Dimension("order must be a permutation of the basis"));
    }
    let diag = congruence_diagonalize(&lattice.gram().permute_symmetric(order))?;
    let basis: Vec<Vec<Rat>> = diag
        .basis()
        .into_iter()
        .map(|w| {
            let mut v = alloc::vec![Rat::zero(); n];
            for (k, &i) in order.iter().enumerate() {
                v[i] = w[k].clone();
            }
            v
        })
        .collect();
    decompose(lattice, g, &basis)
}

fn decompose(lattice: &Lattice, g: &IsometryMap, basis: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    if !preserves_gram(lattice, g.matrix()) {
        return Err(Error::NotIsometry);
    }
    let mut cur: Mat = g.matrix().clone();
    let mut mirrors = Vec::new();
    for w in basis {
        let gw = cur.mul_vec(w);
        if gw == *w {
            continue;
        }
        let d = sub_vec(w, &gw);
        if !lattice.norm(&d).is_zero() {
            let s = IsometryMap::reflection(lattice, &d)?;
            cur = s.matrix() * &cur;
            mirrors.push(d);
        } else {
            // (w+gw)² = 4(w,w) − (w−gw)² = 4(w,w) ≠ 0
            let p = add_vec(w, &gw);
            let s1 = IsometryMap::reflection(lattice, &p)?;
            let s2 = IsometryMap::reflection(lattice, w)?;
            cur = &(s2.matrix() * s1.matrix()) * &cur;
            mirrors.push(p);
            mirrors.push(w.clone());
        }
    }
    debug_assert!(cur.is_identity());
    if !cur.is_identity() {
        return Err(Error::NotIsometry);
    }
    // σ_m ⋯ σ_1 g = id, so g = σ_1 ⋯ σ_m
    Ok(mirrors)
}

/// Square class of `∏ −(v_i,v_i)/2` over a reflection decomposition.
pub fn spinor_norm_q(lattice: &Lattice, g: &IsometryMap) -> Result<SquareClass> {
    let mirrors = cartan_dieudonne(lattice, g)?;
    Ok(spinor_norm_of_mirrors(lattice, &mirrors))
}

pub(crate) fn spinor_norm_of_mirrors(lattice: &Lattice, mirrors: &[Vec<Rat>]) -> SquareClass {
    let half = Rat::new(Int::from(-1), Int::from(2));
    let prod = mirrors
        .iter()
        .fold(Rat::one(), |acc, v| acc * (&half * lattice.norm(v)));
    SquareClass::of(&prod)
}

/// Sign of the rational spinor norm.
pub fn spinor_norm_r(lattice: &Lattice, g: &IsometryMap) -> Result<i8> {
    Ok(spinor_norm_q(lattice, g)?.sign())
}
