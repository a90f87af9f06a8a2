//! The discriminant group `D(L) = L^∨/L` with its finite quadratic form.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{rat_mod, smith_normal_form, to_int_vec, to_rat_vec, Int, Mat, Rat};
use crate::lattice::Lattice;
use crate::{Error, Result};

/// Element of `D(L)` as coordinates on the cyclic generators, each reduced
/// into `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscElement {
    pub coords: Vec<Int>,
}

/// Finite quadratic form on `L^∨/L`.
///
/// Generators are the columns of `V·S⁻¹` for the Smith form `U·G·V = S`,
/// keeping only invariant factors greater than one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantForm {
    orders: Vec<Int>,
    generators: Vec<Vec<Rat>>,
    // row i: s_i times row i of V⁻¹, so that class coordinate i of x is row_i · x
    class_rows: Vec<Vec<Rat>>,
    gram: Mat,
    q: Vec<Rat>,
    b: Vec<Vec<Rat>>,
}

impl DiscriminantForm {
    pub fn new(lattice: &Lattice) -> Self {
        lattice.discriminant_form().clone()
    }

    pub(crate) fn from_gram(gram: &Mat) -> Result<Self> {
        let snf = smith_normal_form(gram)?;
        let v_inv = snf.v.inverse().ok_or(Error::DegenerateForm)?;
        let diag = snf.diagonal();
        let mut orders = Vec::new();
        let mut generators: Vec<Vec<Rat>> = Vec::new();
        let mut class_rows = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if d.is_zero() {
                return Err(Error::DegenerateForm);
            }
            if d.is_one() {
                continue;
            }
            let dr = Rat::from_integer(d.clone());
            generators.push(snf.v.column(i).iter().map(|x| x / &dr).collect());
            class_rows.push(v_inv.row(i).iter().map(|x| x * &dr).collect());
            orders.push(d.clone());
        }
        let two = Rat::from_integer(Int::from(2));
        let one = Rat::one();
        let ip = |x: &[Rat], y: &[Rat]| -> Rat {
            x.iter().zip(gram.mul_vec(y)).map(|(a, b)| a * b).sum()
        };
        let q = generators
            .iter()
            .map(|g| rat_mod(&ip(g, g), &two))
            .collect();
        let b = generators
            .iter()
            .map(|g| {
                generators
                    .iter()
                    .map(|h| rat_mod(&ip(g, h), &one))
                    .collect()
            })
            .collect();
        Ok(DiscriminantForm {
            orders,
            generators,
            class_rows,
            gram: gram.clone(),
            q,
            b,
        })
    }

    /// Invariant factors `d₁ | d₂ | …` greater than one.
    pub fn orders(&self) -> &[Int] {
        &self.orders
    }

    /// `|D(L)|`.
    pub fn size(&self) -> Int {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Generators as vectors of `L⊗ℚ`.
    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    /// `q(gen_i)` in `[0, 2)`.
    pub fn q_values(&self) -> &[Rat] {
        &self.q
    }

    /// `b(gen_i, gen_j)` in `[0, 1)`.
    pub fn b_values(&self) -> &[Vec<Rat>] {
        &self.b
    }

    pub fn zero(&self) -> DiscElement {
        DiscElement {
            coords: vec![Int::zero(); self.orders.len()],
        }
    }

    pub fn generator(&self, i: usize) -> DiscElement {
        let mut x = self.zero();
        x.coords[i] = Int::one();
        x
    }

    fn reduce(&self, coords: Vec<Int>) -> DiscElement {
        DiscElement {
            coords: coords
                .into_iter()
                .zip(&self.orders)
                .map(|(c, d)| c.mod_floor(d))
                .collect(),
        }
    }

    /// Class of a dual-lattice vector. Errors if `x ∉ L^∨`.
    pub fn class_of_dual(&self, x: &[Rat]) -> Result<DiscElement> {
        let pairings = self.gram.mul_vec(x);
        if !pairings.iter().all(Rat::is_integer) {
            return Err(Error::NotIntegral);
        }
        let coords: Vec<Rat> = self
            .class_rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        let coords = to_int_vec(&coords).ok_or(Error::NotIntegral)?;
        Ok(self.reduce(coords))
    }

    /// Class of `l / div(l)` for a primitive lattice vector `l`.
    pub fn class_of(&self, lattice: &Lattice, l: &[Int]) -> Result<DiscElement> {
        if !lattice.is_primitive(l) {
            return Err(if l.iter().all(Zero::is_zero) {
                Error::ZeroVector
            } else {
                Error::NotPrimitive
            });
        }
        let d = Rat::from_integer(lattice.divisor(l)?);
        let x: Vec<Rat> = to_rat_vec(l).iter().map(|c| c / &d).collect();
        self.class_of_dual(&x)
    }

    /// A representative of `x` in `L^∨`.
    pub fn lift(&self, x: &DiscElement) -> Vec<Rat> {
        let n = self.gram.rows();
        let mut v = vec![Rat::zero(); n];
        for (c, g) in x.coords.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            let c = Rat::from_integer(c.clone());
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += &c * gi;
            }
        }
        v
    }

    pub fn add(&self, x: &DiscElement, y: &DiscElement) -> DiscElement {
        self.reduce(x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, n: &Int, x: &DiscElement) -> DiscElement {
        self.reduce(x.coords.iter().map(|a| a * n).collect())
    }

    pub fn neg(&self, x: &DiscElement) -> DiscElement {
        self.scale(&Int::from(-1), x)
    }

    /// Order of `x` in the group.
    pub fn order_of(&self, x: &DiscElement) -> Int {
        x.coords
            .iter()
            .zip(&self.orders)
            .fold(Int::one(), |acc, (c, d)| acc.lcm(&(d / c.gcd(d))))
    }

    /// `q(x)` reduced into `[0, 2)`.
    pub fn q(&self, x: &DiscElement) -> Rat {
        let two = Rat::from_integer(Int::from(2));
        let mut acc = Rat::zero();
        for (i, ci) in x.coords.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let ci = Rat::from_integer(ci.clone());
            acc += &ci * &ci * &self.q[i];
            for (j, cj) in x.coords.iter().enumerate().skip(i + 1) {
                if !cj.is_zero() {
                    acc += &two * &ci * Rat::from_integer(cj.clone()) * &self.b[i][j];
                }
            }
        }
        rat_mod(&acc, &two)
    }

    /// `b(x, y)` reduced into `[0, 1)`.
    pub fn b(&self, x: &DiscElement, y: &DiscElement) -> Rat {
        let mut acc = Rat::zero();
        for (i, ci) in x.coords.iter().enumerate() {
            for (j, cj) in y.coords.iter().enumerate() {
                if !ci.is_zero() && !cj.is_zero() {
                    acc += Rat::from_integer(ci * cj) * &self.b[i][j];
                }
            }
        }
        rat_mod(&acc, &Rat::one())
    }

    /// All elements, lexicographic in coordinates. Requires `|D| ≤ cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<DiscElement>> {
        let size = self.size_checked(cap)?;
        let orders: Vec<u64> = self.orders.iter().map(|d| d.to_u64().unwrap()).collect();
        let mut out = Vec::with_capacity(size as usize);
        let mut c = vec![0u64; orders.len()];
        loop {
            out.push(DiscElement {
                coords: c.iter().map(|&x| Int::from(x)).collect(),
            });
            let mut k = orders.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                c[k] += 1;
                if c[k] < orders[k] {
                    break;
                }
                c[k] = 0;
            }
        }
    }

    fn size_checked(&self, cap: u64) -> Result<u64> {
        match self.size().to_u64() {
            Some(s) if s <= cap => Ok(s),
            s => Err(Error::TooLarge {
                size: s.unwrap_or(u64::MAX),
                cap,
            }),
        }
    }

    /// Automorphism of `D(L)` induced by an integral isometry `g` of `L`.
    pub fn induced_map(&self, g: &Mat) -> Result<DiscAut> {
        let n = self.gram.rows();
        if g.rows() != n || g.cols() != n {
            return Err(Error::Dimension("matrix size differs from lattice rank"));
        }
        if !g.is_integral() {
            return Err(Error::NotIntegral);
        }
        if &(&g.transpose() * &self.gram) * g != self.gram {
            return Err(Error::NotIsometry);
        }
        let images = self
            .generators
            .iter()
            .map(|x| self.class_of_dual(&g.mul_vec(x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiscAut { images })
    }

    /// `g` acts trivially on `D(L)`.
    pub fn is_stable(&self, g: &Mat) -> Result<bool> {
        Ok(self.induced_map(g)?.is_identity(self))
    }

    /// Whether `a` is a group automorphism preserving `q`.
    pub fn preserves_form(&self, a: &DiscAut) -> bool {
        let k = self.orders.len();
        (0..k).all(|i| {
            self.q(&a.images[i]) == self.q[i]
                && (0..k).all(|j| self.b(&a.images[i], &a.images[j]) == self.b[i][j])
        })
    }

    /// Every automorphism of `D` preserving `q`, by backtracking over
    /// generator images with pruning on order and on `q`, `b` values.
    pub fn enumerate_orthogonal_group(&self, cap: u64) -> Result<Vec<DiscAut>> {
        let elements = self.elements(cap)?;
        let k = self.orders.len();
        let qs: Vec<Rat> = elements.iter().map(|x| self.q(x)).collect();
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        self.extend_images(&elements, &qs, &mut chosen, &mut out);
        Ok(out)
    }

    fn extend_images(
        &self,
        elements: &[DiscElement],
        qs: &[Rat],
        chosen: &mut Vec<usize>,
        out: &mut Vec<DiscAut>,
    ) {
        let i = chosen.len();
        if i == self.orders.len() {
            let aut = DiscAut {
                images: chosen.iter().map(|&c| elements[c].clone()).collect(),
            };
            if aut.is_bijective(self, elements) {
                out.push(aut);
            }
            return;
        }
        let d = &self.orders[i];
        for (idx, x) in elements.iter().enumerate() {
            if qs[idx] != self.q[i] {
                continue;
            }
            if !self.scale(d, x).coords.iter().all(Zero::is_zero) {
                continue;
            }
            if chosen
                .iter()
                .enumerate()
                .any(|(j, &c)| self.b(&elements[c], x) != self.b[j][i])
            {
                continue;
            }
            chosen.push(idx);
            self.extend_images(elements, qs, chosen, out);
            chosen.pop();
        }
    }
}

/// Group endomorphism of `D(L)` given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscAut {
    pub images: Vec<DiscElement>,
}

impl DiscAut {
    pub fn identity(d: &DiscriminantForm) -> Self {
        DiscAut {
            images: (0..d.orders.len()).map(|i| d.generator(i)).collect(),
        }
    }

    pub fn is_identity(&self, d: &DiscriminantForm) -> bool {
        *self == DiscAut::identity(d)
    }

    pub fn apply(&self, d: &DiscriminantForm, x: &DiscElement) -> DiscElement {
        let mut acc = d.zero();
        for (c, img) in x.coords.iter().zip(&self.images) {
            if !c.is_zero() {
                acc = d.add(&acc, &d.scale(c, img));
            }
        }
        acc
    }

    /// `self ∘ other`.
    pub fn compose(&self, d: &DiscriminantForm, other: &DiscAut) -> DiscAut {
        DiscAut {
            images: other.images.iter().map(|x| self.apply(d, x)).collect(),
        }
    }

    fn is_bijective(&self, d: &DiscriminantForm, elements: &[DiscElement]) -> bool {
        let mut seen: Vec<DiscElement> = elements.iter().map(|x| self.apply(d, x)).collect();
        seen.sort();
        seen.dedup();
        seen.len() == elements.len()
    }
}
