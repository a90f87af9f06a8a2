//! The Jacobi group `Γ^J(L₀)` inside `O(U ⊕ U₁ ⊕ L₀)`.
//!
//! Matrices are written in the frame basis `(e, e₁, L₀…, f₁, f)` and moved
//! to lattice coordinates by a permutation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::eichler::HyperbolicSplitting;
use crate::exact::{to_rat_vec, Int, Mat, Rat};
use crate::isometry::{Atom, GroupWord, IsometryMap};
use crate::lattice::Lattice;
use crate::{Error, Result};

/// `[A]·[u, v; z]` read back from a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiElement {
    pub a: [[Int; 2]; 2],
    pub u: Vec<Int>,
    pub v: Vec<Int>,
    pub z: Int,
}

/// One named identity with its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: &str, holds: bool) -> Self {
        IdentityCheck {
            name: name.into(),
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamodularReport {
    pub t: u64,
    /// The displayed matrix equals `σ_{e+f}·σ_{e₁+f₁}`.
    pub matrix_matches: bool,
    pub mirrors_have_norm_two: bool,
    pub det_one: bool,
    pub involution: bool,
    /// Generators of `Γ^J(Λ_{2t})` followed by `σ_{e₁−f₁}`.
    pub generators: Vec<(String, GroupWord)>,
    /// Every generator lies in `Õ⁺(Λ_{2t})`.
    pub generators_stable_plus: bool,
}

/// Lattice with a chosen splitting `U ⊕ U₁ ⊕ L₀` and the frame ordering.
#[derive(Clone, Debug)]
pub struct JacobiFrame<'a> {
    lattice: &'a Lattice,
    order: Vec<usize>,
}

impl<'a> JacobiFrame<'a> {
    pub fn new(lattice: &'a Lattice) -> Result<Self> {
        let split = HyperbolicSplitting::detect(lattice).ok_or(Error::MissingSplitting)?;
        JacobiFrame::with_splitting(lattice, split)
    }

    pub fn with_splitting(lattice: &'a Lattice, split: HyperbolicSplitting) -> Result<Self> {
        let split = HyperbolicSplitting::new(lattice, split.e, split.f, split.second)?;
        let (e1, f1) = split.second.ok_or(Error::MissingSplitting)?;
        let plane = [split.e, split.f, e1, f1];
        let mut order = vec![split.e, e1];
        order.extend((0..lattice.rank()).filter(|i| !plane.contains(i)));
        order.extend([f1, split.f]);
        Ok(JacobiFrame { lattice, order })
    }

    pub fn lattice(&self) -> &'a Lattice {
        self.lattice
    }

    /// `order[k]` is the lattice index of the `k`-th frame vector.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn l0_rank(&self) -> usize {
        self.order.len() - 4
    }

    fn n(&self) -> usize {
        self.order.len()
    }

    fn frame_index(&self, name: &str) -> usize {
        let n = self.n();
        match name {
            "e" => 0,
            "e1" => 1,
            "f1" => n - 2,
            "f" => n - 1,
            _ => unreachable!(),
        }
    }

    /// Lattice vector of a frame basis vector.
    pub fn vector(&self, name: &str) -> Vec<Rat> {
        self.lattice
            .basis_vector_rat(self.order[self.frame_index(name)])
    }

    /// Embed `L₀` coordinates into lattice coordinates.
    pub fn l0_vector(&self, u: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.n()];
        for (k, x) in u.iter().enumerate() {
            out[self.order[2 + k]] = x.clone();
        }
        out
    }

    /// Gram matrix of `L₀` (`S₀`).
    pub fn s0(&self) -> Mat {
        let idx: Vec<usize> = self.order[2..self.n() - 2].to_vec();
        self.lattice.gram().select(&idx, &idx)
    }

    pub fn to_lattice(&self, frame: &Mat) -> Mat {
        let n = self.n();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(self.order[i], self.order[j])] = frame[(i, j)].clone();
            }
        }
        m
    }

    pub fn to_frame(&self, lattice_mat: &Mat) -> Mat {
        Mat::from_fn(self.n(), self.n(), |i, j| {
            lattice_mat[(self.order[i], self.order[j])].clone()
        })
    }

    fn check_unimodular(a: &[[Int; 2]; 2]) -> Result<()> {
        let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
        if det.is_one() {
            Ok(())
        } else {
            Err(Error::NotUnimodular)
        }
    }

    fn block_a(&self, a: &[[Int; 2]; 2], star: Mat) -> Mat {
        let n = self.n();
        let mut m = Mat::identity(n);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = star[(i, j)].clone();
                m[(n - 2 + i, n - 2 + j)] = Rat::from_integer(a[i][j].clone());
            }
        }
        self.to_lattice(&m)
    }

    fn a_mat(a: &[[Int; 2]; 2]) -> Mat {
        Mat::from_int_rows(&[a[0].to_vec(), a[1].to_vec()])
    }

    /// `[A] = diag(A*, 1, A)` with `A* = J·(A⁻¹)ᵀ·J`, `J = [[0,1],[1,0]]`.
    pub fn jacobi_embed(&self, a: &[[Int; 2]; 2]) -> Result<IsometryMap> {
        Self::check_unimodular(a)?;
        let j = Mat::from_i64(2, 2, &[0, 1, 1, 0]);
        let inv = Self::a_mat(a).inverse().ok_or(Error::NotUnimodular)?;
        let star = &(&j * &inv.transpose()) * &j;
        IsometryMap::new(self.lattice, self.block_a(a, star))
    }

    /// `[A]` with `A* = J·A⁻¹·J` taken literally, without the transpose.
    /// Preserves the form only when `A` is symmetric.
    pub fn jacobi_embed_untransposed(&self, a: &[[Int; 2]; 2]) -> Result<Mat> {
        Self::check_unimodular(a)?;
        let j = Mat::from_i64(2, 2, &[0, 1, 1, 0]);
        let inv = Self::a_mat(a).inverse().ok_or(Error::NotUnimodular)?;
        Ok(self.block_a(a, &(&j * &inv) * &j))
    }

    /// `[u, v; z]` for `u, v` in `L₀` coordinates.
    pub fn heis_embed(&self, u: &[Int], v: &[Int], z: &Int) -> Result<IsometryMap> {
        let n0 = self.l0_rank();
        if u.len() != n0 || v.len() != n0 {
            return Err(Error::Dimension("L0 vector length"));
        }
        let n = self.n();
        let s0 = self.s0();
        let (u, v) = (to_rat_vec(u), to_rat_vec(v));
        let (su, sv) = (s0.mul_vec(&u), s0.mul_vec(&v));
        let dot = |x: &[Rat], y: &[Rat]| -> Rat { x.iter().zip(y).map(|(a, b)| a * b).sum() };
        let half = Rat::new(Int::one(), Int::from(2));
        let z = Rat::from_integer(z.clone());
        let mut m = Mat::identity(n);
        for k in 0..n0 {
            m[(0, 2 + k)] = -sv[k].clone();
            m[(1, 2 + k)] = -su[k].clone();
            m[(2 + k, n - 2)] = u[k].clone();
            m[(2 + k, n - 1)] = v[k].clone();
        }
        m[(0, n - 2)] = -dot(&u, &sv) - &z;
        m[(0, n - 1)] = -dot(&v, &sv) * &half;
        m[(1, n - 2)] = -dot(&u, &su) * &half;
        m[(1, n - 1)] = z;
        IsometryMap::new(self.lattice, self.to_lattice(&m))
    }

    /// Split `g` as `[A]·[u, v; z]`, or `None` when `g ∉ Γ^J(L₀)`.
    pub fn decompose(&self, g: &IsometryMap) -> Option<JacobiElement> {
        let fm = self.to_frame(g.matrix());
        let n = self.n();
        let int = |x: &Rat| x.is_integer().then(|| x.to_integer());
        let a = [
            [int(&fm[(n - 2, n - 2)])?, int(&fm[(n - 2, n - 1)])?],
            [int(&fm[(n - 1, n - 2)])?, int(&fm[(n - 1, n - 1)])?],
        ];
        let big_a = self.jacobi_embed(&a).ok()?;
        let h = big_a.inverse(self.lattice).compose(g);
        let hf = self.to_frame(h.matrix());
        let n0 = self.l0_rank();
        let u: Option<Vec<Int>> = (0..n0).map(|k| int(&hf[(2 + k, n - 2)])).collect();
        let v: Option<Vec<Int>> = (0..n0).map(|k| int(&hf[(2 + k, n - 1)])).collect();
        let (u, v) = (u?, v?);
        let z = int(&hf[(1, n - 1)])?;
        let rebuilt = self.heis_embed(&u, &v, &z).ok()?;
        (rebuilt == h).then_some(JacobiElement { a, u, v, z })
    }

    /// `[S]` with `S = [[0, −1], [1, 0]]`.
    pub fn s_element(&self) -> IsometryMap {
        let s = [[Int::zero(), -Int::one()], [Int::one(), Int::zero()]];
        self.jacobi_embed(&s).expect("S is unimodular")
    }

    /// `σ₁ = σ_{e₁−f₁}`.
    pub fn sigma1(&self) -> IsometryMap {
        let r: Vec<Rat> = self
            .vector("e1")
            .iter()
            .zip(self.vector("f1"))
            .map(|(a, b)| a - b)
            .collect();
        IsometryMap::reflection(self.lattice, &r).expect("e1 - f1 is anisotropic")
    }

    fn t(&self, c: &str, a: &[Rat]) -> IsometryMap {
        IsometryMap::transvection(self.lattice, &self.vector(c), a).expect("valid transvection")
    }

    /// Identities around `S` and `σ₁`, for `u ∈ L₀` (frame coordinates).
    ///
    /// `S²` is `−1` on `U ⊕ U₁` and `+1` on `L₀`, so the literal `S² = −id`
    /// holds only for `L₀ = 0`. The conjugate of `t(e, u)` by `Sσ₁Sσ₁` is
    /// `t(f, −u)`; both forms are reported.
    pub fn verify_sigma1_identities(&self, u: &[Int]) -> Result<Vec<IdentityCheck>> {
        if u.len() != self.l0_rank() {
            return Err(Error::Dimension("L0 vector length"));
        }
        let l = self.lattice;
        let s = self.s_element();
        let sigma = self.sigma1();
        let neg = |v: Vec<Rat>| -> Vec<Rat> { v.into_iter().map(|x| -x).collect() };
        let n = self.n();

        let s2 = s.compose(&s);
        let mut minus_on_plane = true;
        let mut plus_on_l0 = true;
        for k in 0..n {
            let b = l.basis_vector_rat(self.order[k]);
            let img = s2.apply(&b);
            if k < 2 || k >= n - 2 {
                minus_on_plane &= img == neg(b);
            } else {
                plus_on_l0 &= img == b;
            }
        }

        let ff1 = sigma
            .compose(&self.t("f", &self.vector("e1")))
            .compose(&sigma);
        let uvec = self.l0_vector(&to_rat_vec(u));
        let c = s.compose(&sigma).compose(&s).compose(&sigma);
        let conj = c.compose(&self.t("e", &uvec)).compose(&c.inverse(l));

        Ok(vec![
            IdentityCheck::new(
                "S(e) = -e1",
                s.apply(&self.vector("e")) == neg(self.vector("e1")),
            ),
            IdentityCheck::new(
                "S(f) = -f1",
                s.apply(&self.vector("f")) == neg(self.vector("f1")),
            ),
            IdentityCheck::new("S^2 = -id on U+U1", minus_on_plane),
            IdentityCheck::new("S^2 = id on L0", plus_on_l0),
            IdentityCheck::new(
                "S^2 = -id",
                s2 == IsometryMap::from_matrix_unchecked(Mat::identity(n).scale(&-Rat::one())),
            ),
            IdentityCheck::new(
                "sigma1 t(f,e1) sigma1 = t(f,f1)",
                ff1 == self.t("f", &self.vector("f1")),
            ),
            IdentityCheck::new(
                "(S sigma1 S sigma1) t(e,u) (..)^-1 = t(f,-u)",
                conj == self.t("f", &neg(uvec.clone())),
            ),
            IdentityCheck::new(
                "(S sigma1 S sigma1) t(e,u) (..)^-1 = t(f,u)",
                conj == self.t("f", &uvec),
            ),
        ])
    }

    /// Generators `t(e,f₁)`, `t(f,e₁)`, `t(e,e₁)`, `t(e,b)`, `t(e₁,b)` for `b`
    /// running over the `L₀` basis.
    pub fn generators(&self) -> Vec<(String, GroupWord)> {
        let mut out = Vec::new();
        let tw = |c: Vec<Rat>, a: Vec<Rat>| GroupWord::new(vec![Atom::transvection(c, a)]);
        out.push((
            String::from("t(e,f1)"),
            tw(self.vector("e"), self.vector("f1")),
        ));
        out.push((
            String::from("t(f,e1)"),
            tw(self.vector("f"), self.vector("e1")),
        ));
        out.push((
            String::from("t(e,e1)"),
            tw(self.vector("e"), self.vector("e1")),
        ));
        for k in 0..self.l0_rank() {
            let b = self.lattice.basis_vector_rat(self.order[2 + k]);
            let label = &self.lattice.labels()[self.order[2 + k]];
            out.push((
                alloc::format!("t(e,{label})"),
                tw(self.vector("e"), b.clone()),
            ));
            out.push((alloc::format!("t(e1,{label})"), tw(self.vector("e1"), b)));
        }
        out
    }
}

/// `Φ(J_t)` as displayed, in the basis `(e, e₁, g, f₁, f)`.
pub fn displayed_phi_jt() -> Mat {
    Mat::from_i64(
        5,
        5,
        &[
            0, 0, 0, 0, -1, //
            0, 0, 0, -1, 0, //
            0, 0, 1, 0, 0, //
            0, -1, 0, 0, 0, //
            -1, 0, 0, 0, 0,
        ],
    )
}

/// Compare the displayed `Φ(J_t)` with `σ_{e+f}·σ_{e₁+f₁}` on `Λ_{2t}`.
pub fn paramodular_jt_check(t: u64) -> Result<ParamodularReport> {
    if t == 0 {
        return Err(Error::ZeroScale);
    }
    let n = -2
        * i64::try_from(t).map_err(|_| Error::TooLarge {
            size: t,
            cap: i64::MAX as u64 / 2,
        })?;
    let lat = Lattice::hyperbolic_sum_with(2, n)?;
    let frame = JacobiFrame::new(&lat)?;
    let plus = |a: &str, b: &str| -> Vec<Rat> {
        frame
            .vector(a)
            .iter()
            .zip(frame.vector(b))
            .map(|(x, y)| x + y)
            .collect()
    };
    let (m1, m2) = (plus("e", "f"), plus("e1", "f1"));
    let two = Rat::from_integer(Int::from(2));
    let mirrors_have_norm_two = lat.norm(&m1) == two && lat.norm(&m2) == two;
    let prod = IsometryMap::reflection(&lat, &m1)?.compose(&IsometryMap::reflection(&lat, &m2)?);
    let frame_mat = frame.to_frame(prod.matrix());
    let mut generators = frame.generators();
    let r: Vec<Rat> = frame
        .vector("e1")
        .iter()
        .zip(frame.vector("f1"))
        .map(|(a, b)| a - b)
        .collect();
    generators.push((
        String::from("sigma(e1-f1)"),
        GroupWord::new(vec![Atom::Reflection(r)]),
    ));
    let generators_stable_plus = generators.iter().all(|(_, w)| {
        w.evaluate(&lat)
            .map(|g| crate::isometry::Membership::classify(&lat, g.matrix()).in_stable_plus)
            .unwrap_or(false)
    });
    Ok(ParamodularReport {
        t,
        matrix_matches: frame_mat == displayed_phi_jt(),
        mirrors_have_norm_two,
        det_one: prod.det().is_one(),
        involution: prod.compose(&prod).is_identity(),
        generators,
        generators_stable_plus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ints;
    use crate::isometry::Membership;
    use crate::lattice::Block;

    fn lat() -> Lattice {
        Lattice::from_blocks(&[Block::u().repeat(2), Block::A2]).unwrap()
    }

    fn sl(a: i64, b: i64, c: i64, d: i64) -> [[Int; 2]; 2] {
        [[a.into(), b.into()], [c.into(), d.into()]]
    }

    #[test]
    fn frame_order() {
        let l = lat();
        let fr = JacobiFrame::new(&l).unwrap();
        assert_eq!(fr.order(), &[0, 2, 4, 5, 3, 1]);
        assert_eq!(fr.l0_rank(), 2);
    }

    #[test]
    fn generator_identifications() {
        let l = lat();
        let fr = JacobiFrame::new(&l).unwrap();
        let z = ints(&[0, 0]);
        let a1 = ints(&[1, 0]);
        assert_eq!(
            fr.heis_embed(&z, &z, &Int::one()).unwrap(),
            fr.t("e", &fr.vector("e1"))
        );
        assert_eq!(
            fr.jacobi_embed(&sl(1, 1, 0, 1)).unwrap(),
            fr.t("e", &fr.vector("f1"))
        );
        assert_eq!(
            fr.jacobi_embed(&sl(1, 0, -1, 1)).unwrap(),
            fr.t("f", &fr.vector("e1"))
        );
        let a1v = fr.l0_vector(&to_rat_vec(&a1));
        assert_eq!(
            fr.heis_embed(&a1, &z, &Int::zero()).unwrap(),
            fr.t("e1", &a1v)
        );
        assert_eq!(
            fr.heis_embed(&z, &a1, &Int::zero()).unwrap(),
            fr.t("e", &a1v)
        );
    }

    #[test]
    fn untransposed_star_breaks_the_form() {
        let l = lat();
        let fr = JacobiFrame::new(&l).unwrap();
        let m = fr.jacobi_embed_untransposed(&sl(1, 1, 0, 1)).unwrap();
        assert!(IsometryMap::new(&l, m).is_err());
        assert!(matches!(
            fr.jacobi_embed(&sl(2, 0, 0, 1)),
            Err(Error::NotUnimodular)
        ));
    }

    #[test]
    fn sigma_identities() {
        let l = lat();
        let fr = JacobiFrame::new(&l).unwrap();
        let checks = fr.verify_sigma1_identities(&ints(&[2, -1])).unwrap();
        let holds: Vec<bool> = checks.iter().map(|c| c.holds).collect();
        assert_eq!(holds, [true, true, true, true, false, true, true, false]);

        let two_u = Lattice::from_blocks(&[Block::u().repeat(2)]).unwrap();
        let fr = JacobiFrame::new(&two_u).unwrap();
        let checks = fr.verify_sigma1_identities(&[]).unwrap();
        assert!(checks.iter().find(|c| c.name == "S^2 = -id").unwrap().holds);
    }

    #[test]
    fn decomposition_round_trip() {
        let l = lat();
        let fr = JacobiFrame::new(&l).unwrap();
        let a = sl(2, 3, 1, 2);
        let h = fr
            .heis_embed(&ints(&[1, -2]), &ints(&[0, 3]), &Int::from(5))
            .unwrap();
        let g = fr.jacobi_embed(&a).unwrap().compose(&h);
        let el = fr.decompose(&g).unwrap();
        assert_eq!(
            el,
            JacobiElement {
                a,
                u: ints(&[1, -2]),
                v: ints(&[0, 3]),
                z: Int::from(5)
            }
        );
        assert!(fr.decompose(&fr.sigma1()).is_none());
    }

    #[test]
    fn heisenberg_law_and_semidirect_shape() {
        let l = lat();
        let fr = JacobiFrame::new(&l).unwrap();
        let (u, v, z) = (ints(&[1, 2]), ints(&[-1, 0]), Int::from(3));
        let (u2, v2, z2) = (ints(&[0, -1]), ints(&[2, 1]), Int::from(-4));
        let p = fr
            .heis_embed(&u, &v, &z)
            .unwrap()
            .compose(&fr.heis_embed(&u2, &v2, &z2).unwrap());
        let el = fr.decompose(&p).unwrap();
        assert_eq!(el.u, ints(&[1, 1]));
        assert_eq!(el.v, ints(&[1, 1]));
        assert_eq!(
            el.z,
            &z + &z2 - l.inner_int(&fr_l0(&fr, &u), &fr_l0(&fr, &v2))
        );

        let a = fr.jacobi_embed(&sl(1, 1, 0, 1)).unwrap();
        let conj = a
            .compose(&fr.heis_embed(&u, &v, &z).unwrap())
            .compose(&a.inverse(&l));
        assert_eq!(fr.decompose(&conj).unwrap().a, sl(1, 0, 0, 1));
    }

    fn fr_l0(fr: &JacobiFrame<'_>, u: &[Int]) -> Vec<Int> {
        crate::exact::to_int_vec(&fr.l0_vector(&to_rat_vec(u))).unwrap()
    }

    #[test]
    fn embeddings_are_stable_so_plus() {
        let l = lat();
        let fr = JacobiFrame::new(&l).unwrap();
        for g in [
            fr.jacobi_embed(&sl(2, 3, 1, 2)).unwrap(),
            fr.s_element(),
            fr.heis_embed(&ints(&[1, 1]), &ints(&[0, -2]), &Int::from(7))
                .unwrap(),
        ] {
            assert!(Membership::classify(&l, g.matrix()).in_stable_so_plus);
        }
    }

    #[test]
    fn paramodular_matrix() {
        for t in [1, 2, 5] {
            let r = paramodular_jt_check(t).unwrap();
            assert!(r.matrix_matches && r.mirrors_have_norm_two && r.det_one && r.involution);
            assert!(r.generators_stable_plus);
            assert_eq!(r.generators.len(), 6);
        }
    }
}
