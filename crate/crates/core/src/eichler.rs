//! Eichler-criterion machinery on a lattice `L = U ⊕ U₁ ⊕ L₀`.
//!
//! Every witness is returned as a [`GroupWord`] of integral transvections
//! `t(e, a)`, `t(f, a)` with `a ∈ L₁ = U₁ ⊕ L₀`, so membership in `E_U(L₁)`
//! can be read off the word itself.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::discform::DiscElement;
use crate::exact::{round_div, solve_linear, to_int_vec, to_rat_vec, Int, Mat, Rat};
use crate::isometry::{Atom, GroupWord, IsometryMap};
use crate::lattice::Lattice;
use crate::{Error, Result};

/// Basis indices of hyperbolic planes `U = ℤe ⊕ ℤf` and optionally
/// `U₁ = ℤe₁ ⊕ ℤf₁`, each orthogonal to every other basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HyperbolicSplitting {
    pub e: usize,
    pub f: usize,
    pub second: Option<(usize, usize)>,
}

impl HyperbolicSplitting {
    /// Validate the given indices.
    pub fn new(
        lattice: &Lattice,
        e: usize,
        f: usize,
        second: Option<(usize, usize)>,
    ) -> Result<Self> {
        let mut used = vec![e, f];
        if let Some((e1, f1)) = second {
            used.extend([e1, f1]);
        }
        let mut dedup = used.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() != used.len() || used.iter().any(|&i| i >= lattice.rank()) {
            return Err(Error::MissingSplitting);
        }
        let ok = is_split_pair(lattice, e, f)
            && second.is_none_or(|(a, b)| is_split_pair(lattice, a, b));
        if ok {
            Ok(HyperbolicSplitting { e, f, second })
        } else {
            Err(Error::MissingSplitting)
        }
    }

    /// First two disjoint basis pairs spanning orthogonal hyperbolic planes.
    pub fn detect(lattice: &Lattice) -> Option<Self> {
        let n = lattice.rank();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if is_split_pair(lattice, i, j)
                    && !pairs
                        .iter()
                        .any(|&(a, b)| a == i || b == i || a == j || b == j)
                {
                    pairs.push((i, j));
                }
            }
        }
        let (e, f) = *pairs.first()?;
        Some(HyperbolicSplitting {
            e,
            f,
            second: pairs.get(1).copied(),
        })
    }
}

fn is_split_pair(lattice: &Lattice, i: usize, j: usize) -> bool {
    let g = lattice.gram_int();
    let n = lattice.rank();
    g[i][j].is_one()
        && (0..n).all(|k| (k == j || g[i][k].is_zero()) && (k == i || g[j][k].is_zero()))
}

/// `(norm, class of l/div(l), div(l))`: equal invariants mean equal
/// `E_U(L₁)`-orbits for primitive vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitInvariant {
    pub norm: Int,
    pub divisor: Int,
    pub class: DiscElement,
}

/// A vector moved into `L₁` together with the data the transport step needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// `word(v) = image`.
    pub word: GroupWord,
    pub image: Vec<Int>,
    pub divisor: Int,
    /// `partner ∈ L₁` with `(image, partner) = divisor`.
    pub partner: Vec<Int>,
}

/// Result of [`Eichler::stabilize_plane`]: `eval(tau)·g` fixes `U` pointwise
/// and equals `1_U ⊕ h` with `h ∈ O(L₁)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneStabilization {
    pub tau: GroupWord,
    pub h: IsometryMap,
    /// `h` restricted to `L₁`, in the basis of the remaining indices.
    pub h_complement: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusClass {
    pub invariant: OrbitInvariant,
    /// Lexicographically first root with this invariant.
    pub witness: Vec<Int>,
    pub count: usize,
}

/// Roots in a coordinate box grouped by orbit invariant. Exhaustive only
/// inside the box, so `classes.len()` is a lower bound on the number of orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub bound: usize,
    pub roots: usize,
    pub classes: Vec<CensusClass>,
}

/// Eichler-criterion operations for a lattice with two split hyperbolic planes.
#[derive(Clone, Copy, Debug)]
pub struct Eichler<'a> {
    lattice: &'a Lattice,
    e: usize,
    f: usize,
    e1: usize,
    f1: usize,
}

impl<'a> Eichler<'a> {
    pub fn new(lattice: &'a Lattice) -> Result<Self> {
        let split = HyperbolicSplitting::detect(lattice).ok_or(Error::MissingSplitting)?;
        Eichler::with_splitting(lattice, split)
    }

    pub fn with_splitting(lattice: &'a Lattice, split: HyperbolicSplitting) -> Result<Self> {
        let split = HyperbolicSplitting::new(lattice, split.e, split.f, split.second)?;
        let (e1, f1) = split.second.ok_or(Error::MissingSplitting)?;
        Ok(Eichler {
            lattice,
            e: split.e,
            f: split.f,
            e1,
            f1,
        })
    }

    pub fn lattice(&self) -> &'a Lattice {
        self.lattice
    }

    pub fn splitting(&self) -> HyperbolicSplitting {
        HyperbolicSplitting {
            e: self.e,
            f: self.f,
            second: Some((self.e1, self.f1)),
        }
    }

    fn unit(&self, i: usize) -> Vec<Rat> {
        self.lattice.basis_vector_rat(i)
    }

    pub fn e(&self) -> Vec<Rat> {
        self.unit(self.e)
    }

    pub fn f(&self) -> Vec<Rat> {
        self.unit(self.f)
    }

    pub fn e1(&self) -> Vec<Rat> {
        self.unit(self.e1)
    }

    pub fn f1(&self) -> Vec<Rat> {
        self.unit(self.f1)
    }

    /// Indices spanning `L₁`, the complement of `U`.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.lattice.rank())
            .filter(|&i| i != self.e && i != self.f)
            .collect()
    }

    fn scaled_unit(&self, i: usize, k: &Int) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.lattice.rank()];
        v[i] = Rat::from_integer(k.clone());
        v
    }

    /// Atom `t(c, k·d)` for basis indices `c`, `d`.
    fn atom(&self, c: usize, d: usize, k: &Int) -> Atom {
        Atom::transvection(self.unit(c), self.scaled_unit(d, k))
    }

    pub fn invariant(&self, v: &[Int]) -> Result<OrbitInvariant> {
        let d = self.lattice.discriminant_form();
        let class = d.class_of(self.lattice, v)?;
        Ok(OrbitInvariant {
            norm: self.lattice.norm_int(v),
            divisor: self.lattice.divisor(v)?,
            class,
        })
    }

    /// Move `v ∈ U ⊕ U₁` into `U₁` with a word in `t(e,e₁)`, `t(e,f₁)`,
    /// `t(f,e₁)`, `t(f,f₁)` (integer multiples of the second argument).
    pub fn so22_reduce(&self, v: &[Int]) -> Result<(GroupWord, Vec<Int>)> {
        self.lattice.check_len(v.len())?;
        let plane = [self.e, self.f, self.e1, self.f1];
        if v.iter()
            .enumerate()
            .any(|(i, c)| !c.is_zero() && !plane.contains(&i))
        {
            return Err(Error::UnsupportedCoordinates);
        }
        Ok(self.reduce_plane_part(v))
    }

    /// Euclidean reduction of `X = [[x₁, x], [y, −y₁]]` to diagonal form
    /// under `X ↦ B·X·A⁻¹`; the `L₀` part of `v` is untouched.
    fn reduce_plane_part(&self, v: &[Int]) -> (GroupWord, Vec<Int>) {
        let (mut x, mut y) = (v[self.e].clone(), v[self.f].clone());
        let (mut x1, mut y1) = (v[self.e1].clone(), v[self.f1].clone());
        let mut word = GroupWord::empty();
        let (e, f, e1, f1) = (self.e, self.f, self.e1, self.f1);

        // Each closure applies one transvection to the coordinates and
        // records it on the left of the word.
        macro_rules! op {
            (row1_plus_row2, $k:expr) => {{
                // t(e, k e1): x -= k y1, x1 += k y
                let k: Int = $k;
                x -= &k * &y1;
                x1 += &k * &y;
                word.push_left(self.atom(e, e1, &k));
            }};
            (row2_minus_row1, $k:expr) => {{
                // t(f, k f1): y -= k x1, y1 += k x
                let k: Int = $k;
                y -= &k * &x1;
                y1 += &k * &x;
                word.push_left(self.atom(f, f1, &k));
            }};
            (col2_minus_col1, $k:expr) => {{
                // t(e, k f1): x -= k x1, y1 += k y
                let k: Int = $k;
                x -= &k * &x1;
                y1 += &k * &y;
                word.push_left(self.atom(e, f1, &k));
            }};
            (col1_plus_col2, $k:expr) => {{
                // t(f, k e1): y -= k y1, x1 += k x
                let k: Int = $k;
                y -= &k * &y1;
                x1 += &k * &x;
                word.push_left(self.atom(f, e1, &k));
            }};
        }

        while !(x.is_zero() && y.is_zero()) {
            while !x.is_zero() {
                if x1.is_zero() {
                    op!(col1_plus_col2, Int::one());
                }
                let q = round_div(&x, &x1);
                op!(col2_minus_col1, q);
                if x.is_zero() {
                    break;
                }
                let q = round_div(&x1, &x);
                op!(col1_plus_col2, -q);
            }
            while !y.is_zero() {
                if x1.is_zero() {
                    op!(row1_plus_row2, Int::one());
                }
                let q = round_div(&y, &x1);
                op!(row2_minus_row1, q);
                if y.is_zero() {
                    break;
                }
                let q = round_div(&x1, &y);
                op!(row1_plus_row2, -q);
            }
        }
        let mut image = v.to_vec();
        image[self.e] = x;
        image[self.f] = y;
        image[self.e1] = x1;
        image[self.f1] = y1;
        (word, image)
    }

    /// Eichler criterion: equal norm and equal class of `v/div(v)` in `D(L)`.
    pub fn eichler_equivalent(&self, u: &[Int], v: &[Int]) -> Result<bool> {
        let iu = self.invariant(u)?;
        let iv = self.invariant(v)?;
        Ok(iu == iv)
    }

    /// Reduce a primitive vector into `L₁` and find its partner.
    pub fn prepare(&self, u: &[Int]) -> Result<Reduction> {
        self.lattice.check_len(u.len())?;
        if !self.lattice.is_primitive(u) {
            return Err(if u.iter().all(Zero::is_zero) {
                Error::ZeroVector
            } else {
                Error::NotPrimitive
            });
        }
        let divisor = self.lattice.divisor(u)?;
        let (word, image) = self.reduce_plane_part(u);
        let idx = self.complement_indices();
        let pairings = self.lattice.pairings(&image);
        let row: Vec<Int> = idx.iter().map(|&i| pairings[i].clone()).collect();
        let a = Mat::from_int_rows(&[row]);
        let sol = solve_linear(&a, core::slice::from_ref(&divisor))?
            .ok_or(Error::InternalSolveFailure)?;
        let mut partner = vec![Int::zero(); self.lattice.rank()];
        for (&i, x) in idx.iter().zip(sol) {
            partner[i] = x;
        }
        Ok(Reduction {
            word,
            image,
            divisor,
            partner,
        })
    }

    /// Word `τ ∈ E_U(L₁)` with `τ(u) = v`.
    pub fn transport_witness(&self, u: &[Int], v: &[Int]) -> Result<GroupWord> {
        if !self.eichler_equivalent(u, v)? {
            return Err(Error::EquivalenceFails);
        }
        if u == v {
            return Ok(GroupWord::empty());
        }
        let pu = self.prepare(u)?;
        let pv = self.prepare(v)?;
        self.transport_between(&pu, &pv)
    }

    /// Transport between two prepared vectors already known to be equivalent:
    /// `u ↦ u₁ ↦ u₁ − de ↦ v₁ − de ↦ v₁ ↦ v`.
    pub fn transport_between(&self, pu: &Reduction, pv: &Reduction) -> Result<GroupWord> {
        if pu.divisor != pv.divisor {
            return Err(Error::EquivalenceFails);
        }
        let d = Rat::from_integer(pu.divisor.clone());
        let diff: Vec<Rat> = pu
            .image
            .iter()
            .zip(&pv.image)
            .map(|(a, b)| Rat::from_integer(a - b) / &d)
            .collect();
        let w = to_int_vec(&diff).ok_or(Error::EquivalenceFails)?;
        let e = self.e();
        let f = self.f();
        let mut middle = GroupWord::empty();
        if pu.image != pv.image {
            let neg_partner: Vec<Rat> = to_rat_vec(&pv.partner).into_iter().map(|x| -x).collect();
            middle = GroupWord::new(vec![
                Atom::transvection(e.clone(), neg_partner),
                Atom::transvection(f, to_rat_vec(&w)),
                Atom::transvection(e, to_rat_vec(&pu.partner)),
            ]);
        }
        Ok(GroupWord::concat(&[&pv.word.inverse(), &middle, &pu.word]))
    }

    /// Find `τ ∈ E_U(L₁)` with `τ·g` acting trivially on `U`.
    pub fn stabilize_plane(&self, g: &IsometryMap) -> Result<PlaneStabilization> {
        let l = self.lattice;
        if !g.is_integral() || IsometryMap::new(l, g.matrix().clone()).is_err() {
            return Err(Error::NotIntegralIsometry);
        }
        let ge = to_int_vec(&g.apply(&self.e())).ok_or(Error::NotIntegralIsometry)?;
        let e_int = l.basis_vector(self.e);
        let tau1 = self.transport_witness(&ge, &e_int)?;
        let tg = tau1.evaluate(l)?.compose(g);
        let mut b = tg.apply(&self.f());
        b[self.e] = Rat::zero();
        b[self.f] = Rat::zero();
        let neg_b: Vec<Rat> = b.iter().map(|x| -x).collect();
        let mut tau = tau1;
        if !neg_b.iter().all(Zero::is_zero) {
            tau.push_left(Atom::transvection(self.e(), neg_b));
        }
        let h = tau.evaluate(l)?.compose(g);
        let idx = self.complement_indices();
        let h_complement = h.matrix().select(&idx, &idx);
        Ok(PlaneStabilization {
            tau,
            h,
            h_complement,
        })
    }

    /// `σ_{e−f}·t(c,a)·σ_{e−f}` atom-wise: swaps the roles of `e` and `f`.
    fn swap_ef(&self, word: &GroupWord) -> GroupWord {
        let e = self.e();
        let f = self.f();
        word.map_atoms(|atom| match atom {
            Atom::Transvection { e: c, a } if *c == e => Atom::transvection(f.clone(), a.clone()),
            Atom::Transvection { e: c, a } if *c == f => Atom::transvection(e.clone(), a.clone()),
            other => other.clone(),
        })
    }

    fn check_root(&self, r: &[Int]) -> Result<()> {
        self.lattice.check_len(r.len())?;
        if self.lattice.norm_int(r) != Int::from(-2) {
            return Err(Error::NotRoot);
        }
        Ok(())
    }

    /// `ρ ∈ E_U(L₁)` with `σ_r = eval(ρ)·σ_{e−f}`.
    fn rewrite_against_ef(&self, r: &[Int]) -> Result<GroupWord> {
        self.check_root(r)?;
        let (tau, a) = self.reduce_plane_part(r);
        let a = to_rat_vec(&a);
        let neg_a: Vec<Rat> = a.iter().map(|x| -x).collect();
        // σ_a = t(f,a)·t(e,−a)·t(f,a)·σ_{e−f}
        let core = GroupWord::new(vec![
            Atom::transvection(self.f(), a.clone()),
            Atom::transvection(self.e(), neg_a),
            Atom::transvection(self.f(), a),
        ]);
        Ok(GroupWord::concat(&[
            &tau.inverse(),
            &core,
            &self.swap_ef(&tau),
        ]))
    }

    /// `ρ ∈ E_U(L₁)` with `σ_r = eval(ρ)·σ_m` for roots `r` and anchor `m`.
    pub fn rewrite_reflection(&self, r: &[Int], anchor: &[Int]) -> Result<GroupWord> {
        self.check_root(anchor)?;
        self.check_root(r)?;
        let neg_anchor: Vec<Int> = anchor.iter().map(|x| -x).collect();
        if r == anchor || r == neg_anchor.as_slice() {
            return Ok(GroupWord::empty());
        }
        let rho_r = self.rewrite_against_ef(r)?;
        let ef = self.e_minus_f();
        if anchor == ef.as_slice() {
            return Ok(rho_r);
        }
        let rho_m = self.rewrite_against_ef(anchor)?;
        Ok(rho_r.then_after(&rho_m.inverse()))
    }

    pub fn e_minus_f(&self) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.lattice.rank()];
        v[self.e] = Int::one();
        v[self.f] = -Int::one();
        v
    }

    pub fn e1_minus_f1(&self) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.lattice.rank()];
        v[self.e1] = Int::one();
        v[self.f1] = -Int::one();
        v
    }

    /// Group the roots with coordinates in `[-bound, bound]` by orbit invariant.
    pub fn root_orbit_census(&self, bound: usize) -> Census {
        let roots = self.lattice.enumerate_vectors(&Int::from(-2), bound);
        let mut classes: BTreeMap<OrbitInvariant, (Vec<Int>, usize)> = BTreeMap::new();
        for r in &roots {
            let inv = self.invariant(r).expect("roots are primitive");
            classes.entry(inv).or_insert_with(|| (r.clone(), 0)).1 += 1;
        }
        Census {
            bound,
            roots: roots.len(),
            classes: classes
                .into_iter()
                .map(|(invariant, (witness, count))| CensusClass {
                    invariant,
                    witness,
                    count,
                })
                .collect(),
        }
    }
}

/// Atoms of `word` are integral transvections `t(c, a)` with `c ∈ {e, f}` and
/// `a ∈ L₁` integral; that is, `word` is visibly an element of `E_U(L₁)`.
pub fn is_in_eu(eichler: &Eichler<'_>, word: &GroupWord) -> bool {
    let e = eichler.e();
    let f = eichler.f();
    word.atoms().iter().all(|atom| match atom {
        Atom::Transvection { e: c, a } => {
            (*c == e || *c == f)
                && a.iter().all(Rat::is_integer)
                && a[eichler.e].is_zero()
                && a[eichler.f].is_zero()
        }
        _ => false,
    })
}
