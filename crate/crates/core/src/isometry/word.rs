use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use super::IsometryMap;
use crate::exact::{neg_vec, to_int_vec, Int, Rat};
use crate::lattice::Lattice;
use crate::Result;

/// One letter of a [`GroupWord`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Reflection(Vec<Rat>),
    Transvection { e: Vec<Rat>, a: Vec<Rat> },
    Inverse(Box<Atom>),
}

impl Atom {
    pub fn transvection(e: Vec<Rat>, a: Vec<Rat>) -> Atom {
        Atom::Transvection { e, a }
    }

    pub fn evaluate(&self, lattice: &Lattice) -> Result<IsometryMap> {
        match self {
            Atom::Reflection(v) => IsometryMap::reflection(lattice, v),
            Atom::Transvection { e, a } => IsometryMap::transvection(lattice, e, a),
            Atom::Inverse(inner) => Ok(inner.evaluate(lattice)?.inverse(lattice)),
        }
    }

    /// Formal inverse: reflections are involutions and `t(e,a)⁻¹ = t(e,−a)`.
    pub fn inverse(&self) -> Atom {
        match self {
            Atom::Reflection(v) => Atom::Reflection(v.clone()),
            Atom::Transvection { e, a } => Atom::Transvection {
                e: e.clone(),
                a: neg_vec(a),
            },
            Atom::Inverse(inner) => (**inner).clone(),
        }
    }

    /// Image of `v` without building the matrix.
    pub fn apply(&self, lattice: &Lattice, v: &[Rat]) -> Result<Vec<Rat>> {
        match self {
            Atom::Reflection(a) => {
                let aa = lattice.norm(a);
                if aa.is_zero() {
                    return Err(crate::Error::IsotropicMirror);
                }
                let c = Rat::from_integer(2.into()) * lattice.inner(a, v) / aa;
                Ok(v.iter().zip(a).map(|(x, y)| x - &c * y).collect())
            }
            Atom::Transvection { e, a } => {
                if !lattice.norm(e).is_zero() {
                    return Err(crate::Error::NotIsotropic);
                }
                if !lattice.inner(e, a).is_zero() {
                    return Err(crate::Error::NotOrthogonal);
                }
                let av = lattice.inner(a, v);
                let ev = lattice.inner(e, v);
                let ce = -av - lattice.norm(a) * &ev / Rat::from_integer(2.into());
                Ok(v.iter()
                    .zip(e.iter().zip(a))
                    .map(|(x, (ei, ai))| x + &ce * ei + &ev * ai)
                    .collect())
            }
            Atom::Inverse(inner) => inner.inverse().apply(lattice, v),
        }
    }

    /// A transvection `t(c, a)` with `c`, `a` integral.
    pub fn is_integral_transvection(&self) -> bool {
        match self {
            Atom::Transvection { e, a } => e.iter().chain(a).all(Rat::is_integer),
            Atom::Inverse(inner) => inner.is_integral_transvection(),
            Atom::Reflection(_) => false,
        }
    }
}

/// Ordered product of atoms. `g₁g₂…g_k` acts as `v ↦ g₁(g₂(…g_k(v)))`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    atoms: Vec<Atom>,
}

impl GroupWord {
    pub fn new(atoms: Vec<Atom>) -> Self {
        GroupWord { atoms }
    }

    pub fn empty() -> Self {
        GroupWord::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Append `atom` on the right (it will act first).
    pub fn push(&mut self, atom: Atom) {
        self.atoms.push(atom);
    }

    /// Prepend `atom` on the left (it will act last).
    pub fn push_left(&mut self, atom: Atom) {
        self.atoms.insert(0, atom);
    }

    /// `self · other`.
    pub fn then_after(&self, other: &GroupWord) -> GroupWord {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        GroupWord { atoms }
    }

    pub fn concat(words: &[&GroupWord]) -> GroupWord {
        GroupWord {
            atoms: words.iter().flat_map(|w| w.atoms.iter().cloned()).collect(),
        }
    }

    /// Formal inverse: reversed order, each atom inverted.
    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            atoms: self.atoms.iter().rev().map(Atom::inverse).collect(),
        }
    }

    /// Map every atom through `f`, keeping the order.
    pub fn map_atoms(&self, f: impl FnMut(&Atom) -> Atom) -> GroupWord {
        GroupWord {
            atoms: self.atoms.iter().map(f).collect(),
        }
    }

    pub fn evaluate(&self, lattice: &Lattice) -> Result<IsometryMap> {
        let mut acc = IsometryMap::identity(lattice.rank());
        for atom in &self.atoms {
            acc = acc.compose(&atom.evaluate(lattice)?);
        }
        Ok(acc)
    }

    /// Image of `v`, applying the rightmost atom first.
    pub fn apply(&self, lattice: &Lattice, v: &[Rat]) -> Result<Vec<Rat>> {
        let mut cur = v.to_vec();
        for atom in self.atoms.iter().rev() {
            cur = atom.apply(lattice, &cur)?;
        }
        Ok(cur)
    }
}

/// A word of integral transvections and root-type reflections pre-reduced to
/// machine integers, for applying to many integral vectors quickly.
/// Arithmetic is checked; overflow yields `None`.
#[derive(Clone, Debug)]
pub struct CompiledWord {
    // rightmost first
    steps: Vec<Step>,
}

#[derive(Clone, Debug)]
enum Step {
    Transvection {
        e: Vec<i64>,
        a: Vec<i64>,
        ge: Vec<i64>,
        ga: Vec<i64>,
        half_aa: i64,
    },
    Reflection {
        a: Vec<i64>,
        ga: Vec<i64>,
        aa: i64,
    },
}

impl CompiledWord {
    /// `None` if some atom has non-integral data or entries too large.
    pub fn compile(lattice: &Lattice, word: &GroupWord) -> Option<CompiledWord> {
        let small = |v: &[Int]| -> Option<Vec<i64>> { v.iter().map(ToPrimitive::to_i64).collect() };
        let pair = |v: &[Rat]| -> Option<(Vec<i64>, Vec<i64>)> {
            let iv = to_int_vec(v)?;
            Some((small(&iv)?, small(&lattice.pairings(&iv))?))
        };
        let mut steps = Vec::with_capacity(word.len());
        for atom in word.atoms().iter().rev() {
            let atom = match atom {
                Atom::Inverse(inner) => inner.inverse(),
                other => other.clone(),
            };
            match atom {
                Atom::Transvection { e, a } => {
                    let (e, ge) = pair(&e)?;
                    let (a, ga) = pair(&a)?;
                    let aa: i64 = dot(&a, &ga)?;
                    let ee: i64 = dot(&e, &ge)?;
                    if ee != 0 || dot(&e, &ga)? != 0 || aa % 2 != 0 {
                        return None;
                    }
                    steps.push(Step::Transvection {
                        e,
                        a,
                        ge,
                        ga,
                        half_aa: aa / 2,
                    });
                }
                Atom::Reflection(v) => {
                    let (a, ga) = pair(&v)?;
                    let aa = dot(&a, &ga)?;
                    if aa == 0 {
                        return None;
                    }
                    steps.push(Step::Reflection { a, ga, aa });
                }
                Atom::Inverse(_) => return None,
            }
        }
        Some(CompiledWord { steps })
    }

    pub fn apply(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut cur = v.to_vec();
        for step in &self.steps {
            match step {
                Step::Transvection {
                    e,
                    a,
                    ge,
                    ga,
                    half_aa,
                } => {
                    let av = dot(ga, &cur)?;
                    let ev = dot(ge, &cur)?;
                    let ce = av.checked_neg()?.checked_sub(half_aa.checked_mul(ev)?)?;
                    for i in 0..cur.len() {
                        cur[i] = cur[i]
                            .checked_add(ce.checked_mul(e[i])?)?
                            .checked_add(ev.checked_mul(a[i])?)?;
                    }
                }
                Step::Reflection { a, ga, aa } => {
                    let num = dot(ga, &cur)?.checked_mul(2)?;
                    if num % aa != 0 {
                        return None;
                    }
                    let c = num / aa;
                    for i in 0..cur.len() {
                        cur[i] = cur[i].checked_sub(c.checked_mul(a[i])?)?;
                    }
                }
            }
        }
        Some(cur)
    }
}

fn dot(x: &[i64], y: &[i64]) -> Option<i64> {
    x.iter()
        .zip(y)
        .try_fold(0i64, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))
}
