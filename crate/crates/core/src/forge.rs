//! Commutator certificates over `L ⊗ ℚ`.
//!
//! A certificate is a product of formal commutators `[x, y] = x·y·x⁻¹·y⁻¹`
//! whose evaluation equals a target isometry exactly.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::eichler::HyperbolicSplitting;
use crate::exact::{add_vec, neg_vec, scale_vec, sub_vec, Int, Mat, Rat};
use crate::isometry::{Atom, GroupWord, IsometryMap};
use crate::lattice::Lattice;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scope {
    /// Some atom has non-integral parameters.
    Rational,
    Integral,
}

/// `target = ∏ [x_i, y_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorCertificate {
    pub target: IsometryMap,
    pub commutators: Vec<(GroupWord, GroupWord)>,
    pub word: GroupWord,
    /// Another word for the same target, checked alongside the commutators.
    pub expansion: Option<GroupWord>,
    pub scope: Scope,
}

fn commutator(x: &GroupWord, y: &GroupWord) -> GroupWord {
    GroupWord::concat(&[x, y, &x.inverse(), &y.inverse()])
}

fn scope_of(word: &GroupWord) -> Scope {
    let integral = word.atoms().iter().all(|a| match a {
        Atom::Reflection(v) => v.iter().all(Rat::is_integer),
        _ => a.is_integral_transvection(),
    });
    if integral {
        Scope::Integral
    } else {
        Scope::Rational
    }
}

impl CommutatorCertificate {
    pub fn new(target: IsometryMap, commutators: Vec<(GroupWord, GroupWord)>) -> Self {
        let parts: Vec<GroupWord> = commutators.iter().map(|(x, y)| commutator(x, y)).collect();
        let refs: Vec<&GroupWord> = parts.iter().collect();
        let word = GroupWord::concat(&refs);
        let scope = scope_of(&word);
        CommutatorCertificate {
            target,
            commutators,
            word,
            expansion: None,
            scope,
        }
    }

    fn with_expansion(mut self, expansion: GroupWord) -> Self {
        if scope_of(&expansion) == Scope::Rational {
            self.scope = Scope::Rational;
        }
        self.expansion = Some(expansion);
        self
    }

    /// The word is literally the concatenation of `x·y·x⁻¹·y⁻¹` blocks.
    pub fn has_commutator_shape(&self) -> bool {
        let mut atoms = self.word.atoms();
        for (x, y) in &self.commutators {
            let block = commutator(x, y);
            let n = block.len();
            if atoms.len() < n || atoms[..n] != *block.atoms() {
                return false;
            }
            atoms = &atoms[n..];
        }
        atoms.is_empty()
    }

    /// Shape check plus exact evaluation of the word and any expansion.
    pub fn verify(&self, lattice: &Lattice) -> Result<bool> {
        if !self.has_commutator_shape() || self.word.evaluate(lattice)? != self.target {
            return Ok(false);
        }
        match &self.expansion {
            Some(w) => Ok(w.evaluate(lattice)? == self.target),
            None => Ok(true),
        }
    }

    /// Certificate for the product of the two targets.
    pub fn product(&self, other: &CommutatorCertificate) -> CommutatorCertificate {
        let mut commutators = self.commutators.clone();
        commutators.extend(other.commutators.iter().cloned());
        CommutatorCertificate::new(self.target.compose(&other.target), commutators)
    }
}

/// Certificates on a lattice with a hyperbolic plane `U = ℤe ⊕ ℤf`.
#[derive(Clone, Debug)]
pub struct Forge<'a> {
    lattice: &'a Lattice,
    split: HyperbolicSplitting,
}

impl<'a> Forge<'a> {
    pub fn new(lattice: &'a Lattice) -> Result<Self> {
        let split = HyperbolicSplitting::detect(lattice).ok_or(Error::MissingSplitting)?;
        Ok(Forge { lattice, split })
    }

    pub fn with_splitting(lattice: &'a Lattice, split: HyperbolicSplitting) -> Result<Self> {
        let split = HyperbolicSplitting::new(lattice, split.e, split.f, split.second)?;
        Ok(Forge { lattice, split })
    }

    pub fn lattice(&self) -> &'a Lattice {
        self.lattice
    }

    pub fn e(&self) -> Vec<Rat> {
        self.lattice.basis_vector_rat(self.split.e)
    }

    pub fn f(&self) -> Vec<Rat> {
        self.lattice.basis_vector_rat(self.split.f)
    }

    fn second(&self) -> Result<(Vec<Rat>, Vec<Rat>)> {
        let (e1, f1) = self.split.second.ok_or(Error::MissingSplitting)?;
        Ok((
            self.lattice.basis_vector_rat(e1),
            self.lattice.basis_vector_rat(f1),
        ))
    }

    fn t(&self, c: &[Rat], a: &[Rat]) -> Atom {
        Atom::transvection(c.to_vec(), a.to_vec())
    }

    fn teval(&self, c: &[Rat], a: &[Rat]) -> Result<IsometryMap> {
        IsometryMap::transvection(self.lattice, c, a)
    }

    fn check_in_l1(&self, w: &[Rat]) -> Result<()> {
        self.lattice.check_len(w.len())?;
        let l = self.lattice;
        if !l.inner(w, &self.e()).is_zero() || !l.inner(w, &self.f()).is_zero() {
            return Err(Error::NotOrthogonal);
        }
        Ok(())
    }

    fn check_in_l0(&self, w: &[Rat]) -> Result<()> {
        self.check_in_l1(w)?;
        let (e1, f1) = self.second()?;
        let l = self.lattice;
        if !l.inner(w, &e1).is_zero() || !l.inner(w, &f1).is_zero() {
            return Err(Error::NotOrthogonal);
        }
        Ok(())
    }

    /// `P(s)`: `e ↦ s⁻¹e`, `f ↦ sf`, identity on `L₁`.
    pub fn p_map(&self, s: &Rat) -> Result<IsometryMap> {
        if s.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut m = Mat::identity(self.lattice.rank());
        m[(self.split.e, self.split.e)] = s.recip();
        m[(self.split.f, self.split.f)] = s.clone();
        IsometryMap::new(self.lattice, m)
    }

    /// `σ_{e−sf}·σ_{e−f}`, which equals `P(s)` for every `s ≠ 0`.
    pub fn p_word(&self, s: &Rat) -> Result<GroupWord> {
        if s.is_zero() {
            return Err(Error::ZeroScale);
        }
        let (e, f) = (self.e(), self.f());
        Ok(GroupWord::new(vec![
            Atom::Reflection(sub_vec(&e, &scale_vec(s, &f))),
            Atom::Reflection(sub_vec(&e, &f)),
        ]))
    }

    /// `t(f,sw)·t(e,w) = t(e,c⁻¹w)·t(f,scw)·P(c²)` with `c = 1 − s(w,w)/2`.
    pub fn verify_master_identity(&self, w: &[Rat], s: &Rat) -> Result<bool> {
        self.check_in_l1(w)?;
        let c = Rat::one() - s * self.lattice.norm(w) / Rat::from_integer(Int::from(2));
        if c.is_zero() {
            return Err(Error::SingularScale);
        }
        let (e, f) = (self.e(), self.f());
        let lhs = self
            .teval(&f, &scale_vec(s, w))?
            .compose(&self.teval(&e, w)?);
        let rhs = self
            .teval(&e, &scale_vec(&c.recip(), w))?
            .compose(&self.teval(&f, &scale_vec(&(s * &c), w))?)
            .compose(&self.p_map(&(&c * &c))?);
        Ok(lhs == rhs)
    }

    /// `e₁ + 3f₁`.
    pub fn default_v6(&self) -> Result<Vec<Rat>> {
        let (e1, f1) = self.second().map_err(|_| Error::NoNormSixVector)?;
        Ok(add_vec(
            &e1,
            &scale_vec(&Rat::from_integer(Int::from(3)), &f1),
        ))
    }

    /// `P(4)` as `[σ_{e+2f}, t(e,−v)·t(f,−v)]`, with the expansion
    /// `t(f,2v)·t(e,v/2)·t(f,v)·t(e,v)`.
    pub fn certificate_p4(&self, v6: Option<&[Rat]>) -> Result<CommutatorCertificate> {
        let v = match v6 {
            Some(v) => v.to_vec(),
            None => self.default_v6()?,
        };
        self.check_in_l1(&v)?;
        let norm = self.lattice.norm(&v);
        if norm != Rat::from_integer(Int::from(6)) {
            return Err(Error::WrongNorm(norm));
        }
        let (e, f) = (self.e(), self.f());
        let two = Rat::from_integer(Int::from(2));
        let x = GroupWord::new(vec![Atom::Reflection(add_vec(&e, &scale_vec(&two, &f)))]);
        let y = GroupWord::new(vec![self.t(&e, &neg_vec(&v)), self.t(&f, &neg_vec(&v))]);
        let expansion = GroupWord::new(vec![
            self.t(&f, &scale_vec(&two, &v)),
            self.t(&e, &scale_vec(&two.recip(), &v)),
            self.t(&f, &v),
            self.t(&e, &v),
        ]);
        let target = self.p_map(&Rat::from_integer(Int::from(4)))?;
        Ok(CommutatorCertificate::new(target, vec![(x, y)]).with_expansion(expansion))
    }

    /// `t(e,u) = [P(4)⁻¹, t(e,u/3)]` with `P(4)` expanded into transvections.
    pub fn certificate_transvection(&self, u: &[Rat]) -> Result<CommutatorCertificate> {
        self.check_in_l1(u)?;
        let p4 = self.certificate_p4(None)?;
        let x = p4.expansion.expect("p4 carries its expansion").inverse();
        let third = Rat::new(Int::one(), Int::from(3));
        let y = GroupWord::new(vec![self.t(&self.e(), &scale_vec(&third, u))]);
        let target = self.teval(&self.e(), u)?;
        Ok(CommutatorCertificate::new(target, vec![(x, y)]))
    }

    /// `[t(e,−sf₁), t(e₁,u)] = t(e, su − s(u,u)/2·e₁)` for `u ∈ L₀ ⊗ ℚ`.
    pub fn heisenberg_commutator(&self, s: &Rat, u: &[Rat]) -> Result<CommutatorCertificate> {
        self.check_in_l0(u)?;
        let (e1, _) = self.second()?;
        let x = self.heis_x(s)?;
        let y = GroupWord::new(vec![self.t(&e1, u)]);
        let half_norm = self.lattice.norm(u) / Rat::from_integer(Int::from(2));
        let a = sub_vec(&scale_vec(s, u), &scale_vec(&(s * half_norm), &e1));
        let target = self.teval(&self.e(), &a)?;
        Ok(CommutatorCertificate::new(target, vec![(x, y)]))
    }

    fn heis_x(&self, s: &Rat) -> Result<GroupWord> {
        let (_, f1) = self.second()?;
        Ok(GroupWord::new(
            vec![self.t(&self.e(), &scale_vec(&-s, &f1))],
        ))
    }

    /// `t(e, s(u,v)e₁) = [x, t(e₁,u)]·[x, t(e₁,v)]·[t(e₁,u+v), x]`
    /// with `x = t(e,−sf₁)`; the last factor is `[x, t(e₁,u+v)]⁻¹`.
    pub fn triple_product(&self, s: &Rat, u: &[Rat], v: &[Rat]) -> Result<CommutatorCertificate> {
        self.check_in_l0(u)?;
        self.check_in_l0(v)?;
        let (e1, _) = self.second()?;
        let x = self.heis_x(s)?;
        let tu = |w: &[Rat]| GroupWord::new(vec![self.t(&e1, w)]);
        let uv = self.lattice.inner(u, v);
        let target = self.teval(&self.e(), &scale_vec(&(s * uv), &e1))?;
        Ok(CommutatorCertificate::new(
            target,
            vec![
                (x.clone(), tu(u)),
                (x.clone(), tu(v)),
                (tu(&add_vec(u, v)), x),
            ],
        ))
    }

    /// The product with third factor `[x, t(e₁,−u−v)]` in place of
    /// `[x, t(e₁,u+v)]⁻¹`; returns whether it evaluates to `t(e, s(u,v)e₁)`.
    pub fn triple_product_with_negated_sum(&self, s: &Rat, u: &[Rat], v: &[Rat]) -> Result<bool> {
        let cert = self.triple_product(s, u, v)?;
        let (e1, _) = self.second()?;
        let x = self.heis_x(s)?;
        let w = GroupWord::new(vec![self.t(&e1, &neg_vec(&add_vec(u, v)))]);
        let mut parts = cert.commutators.clone();
        parts[2] = (x, w);
        let alt = CommutatorCertificate::new(cert.target.clone(), parts);
        Ok(alt.word.evaluate(self.lattice)? == cert.target)
    }
}
