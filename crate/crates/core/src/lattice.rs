//! Even integral lattices: builders, invariants, the Kneser-condition
//! predicate and bounded vector enumeration.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::discform::DiscriminantForm;
use crate::exact::{congruence_diagonalize, det_int, gcd_all, Int, Mat, Rat};
use crate::{Error, Result};

/// One summand of a block expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// The hyperbolic plane `U`.
    Hyperbolic,
    /// `⟨n⟩`, the rank-one lattice generated by a vector of square `n`.
    Rank1(Int),
    /// `A₂` with Gram `[[2,-1],[-1,2]]`.
    A2,
    /// The positive definite even unimodular `E₈`.
    E8,
    /// Gram matrix of the inner block multiplied by the scalar.
    Scaled(Box<Block>, Int),
    /// Direct sum.
    Sum(Vec<Block>),
}

impl Block {
    pub fn u() -> Block {
        Block::Hyperbolic
    }

    pub fn rank1(n: i64) -> Block {
        Block::Rank1(Int::from(n))
    }

    pub fn scaled(self, m: i64) -> Block {
        Block::Scaled(Box::new(self), Int::from(m))
    }

    pub fn repeat(self, k: usize) -> Block {
        Block::Sum(vec![self; k])
    }

    pub fn rank(&self) -> usize {
        match self {
            Block::Hyperbolic | Block::A2 => 2,
            Block::Rank1(_) => 1,
            Block::E8 => 8,
            Block::Scaled(b, _) => b.rank(),
            Block::Sum(bs) => bs.iter().map(Block::rank).sum(),
        }
    }

    /// Gram matrix of the block.
    pub fn gram(&self) -> Vec<Vec<Int>> {
        match self {
            Block::Hyperbolic => small_gram(2, &[0, 1, 1, 0]),
            Block::Rank1(n) => vec![vec![n.clone()]],
            Block::A2 => small_gram(2, &[2, -1, -1, 2]),
            Block::E8 => e8_gram(),
            Block::Scaled(b, m) => b
                .gram()
                .into_iter()
                .map(|row| row.into_iter().map(|x| x * m).collect())
                .collect(),
            Block::Sum(bs) => {
                let n = self.rank();
                let mut g = vec![vec![Int::zero(); n]; n];
                let mut off = 0;
                for b in bs {
                    let gb = b.gram();
                    for (i, row) in gb.iter().enumerate() {
                        for (j, x) in row.iter().enumerate() {
                            g[off + i][off + j] = x.clone();
                        }
                    }
                    off += gb.len();
                }
                g
            }
        }
    }

    fn leaves<'a>(&'a self, scale: &Int, out: &mut Vec<(&'a Block, Int)>) {
        match self {
            Block::Sum(bs) => bs.iter().for_each(|b| b.leaves(scale, out)),
            Block::Scaled(b, m) => b.leaves(&(scale * m), out),
            leaf => out.push((leaf, scale.clone())),
        }
    }

    /// Basis labels: unscaled hyperbolic planes get `e,f`, `e1,f1`, … in
    /// order; every other basis vector is `b<block>.<index>`.
    pub fn labels(&self) -> Vec<String> {
        let mut leaves = Vec::new();
        self.leaves(&Int::one(), &mut leaves);
        let mut labels = Vec::new();
        let mut planes = 0usize;
        for (k, (leaf, scale)) in leaves.iter().enumerate() {
            if matches!(leaf, Block::Hyperbolic) && scale.is_one() {
                if planes == 0 {
                    labels.push(String::from("e"));
                    labels.push(String::from("f"));
                } else {
                    labels.push(format!("e{planes}"));
                    labels.push(format!("f{planes}"));
                }
                planes += 1;
            } else {
                for i in 0..leaf.rank() {
                    labels.push(format!("b{k}.{i}"));
                }
            }
        }
        labels
    }
}

fn small_gram(n: usize, entries: &[i64]) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| Int::from(entries[i * n + j])).collect())
        .collect()
}

/// Cartan matrix of `E₈` (Bourbaki numbering).
fn e8_gram() -> Vec<Vec<Int>> {
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = vec![vec![Int::zero(); 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = Int::from(2);
    }
    for (a, b) in edges {
        g[a][b] = Int::from(-1);
        g[b][a] = Int::from(-1);
    }
    g
}

/// An even integral lattice given by its Gram matrix.
///
/// Immutable after construction. Determinant, signature, an orthogonal basis
/// of `L⊗ℚ`, the inverse Gram matrix and the discriminant form are computed
/// once in the constructor.
#[derive(Clone, Debug)]
pub struct Lattice {
    gram: Mat,
    gram_int: Vec<Vec<Int>>,
    gram_inv: Mat,
    labels: Vec<String>,
    det: Int,
    signature: (usize, usize),
    orthogonal_basis: Vec<Vec<Rat>>,
    disc: DiscriminantForm,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram_int == other.gram_int && self.labels == other.labels
    }
}

impl Eq for Lattice {}

impl Lattice {
    /// Validates symmetry, evenness and nondegeneracy.
    pub fn new(gram: Vec<Vec<Int>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("Gram matrix must be square"));
        }
        let labels = match labels {
            Some(l) if l.len() != n => return Err(Error::Dimension("label count")),
            Some(l) => l,
            None => (0..n).map(|i| format!("b{i}")).collect(),
        };
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
            if gram[i][i].is_odd() {
                return Err(Error::OddDiagonal(gram[i][i].clone()));
            }
        }
        let det = det_int(&gram);
        if det.is_zero() {
            return Err(Error::DegenerateForm);
        }
        let g = Mat::from_int_rows(&gram);
        let diag = congruence_diagonalize(&g)?;
        let signature = diag.signature();
        let orthogonal_basis = diag.basis();
        let gram_inv = g.inverse().ok_or(Error::DegenerateForm)?;
        let disc = DiscriminantForm::from_gram(&g)?;
        Ok(Lattice {
            gram: g,
            gram_int: gram,
            gram_inv,
            labels,
            det,
            signature,
            orthogonal_basis,
            disc,
        })
    }

    pub fn from_blocks(blocks: &[Block]) -> Result<Self> {
        Lattice::build(&Block::Sum(blocks.to_vec()))
    }

    pub fn build(block: &Block) -> Result<Self> {
        let gram = block.gram();
        if let Some(i) = (0..gram.len()).find(|&i| gram[i][i].is_odd()) {
            return Err(Error::OddDiagonal(gram[i][i].clone()));
        }
        Lattice::new(gram, Some(block.labels()))
    }

    /// `kU ⊕ ⟨-2d⟩`, labelled `e,f,e1,f1,…,g`.
    pub fn hyperbolic_sum_with(k: usize, n: i64) -> Result<Self> {
        let mut l = Lattice::from_blocks(&[Block::u().repeat(k), Block::rank1(n)])?;
        let last = l.rank() - 1;
        l.labels[last] = String::from("g");
        Ok(l)
    }

    pub fn rank(&self) -> usize {
        self.gram_int.len()
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn gram_int(&self) -> &[Vec<Int>] {
        &self.gram_int
    }

    pub fn gram_inverse(&self) -> &Mat {
        &self.gram_inv
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn determinant(&self) -> &Int {
        &self.det
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Witt index over ℝ, `min(p, q)`.
    pub fn real_witt_index(&self) -> usize {
        self.signature.0.min(self.signature.1)
    }

    /// An orthogonal basis of `L⊗ℚ` with anisotropic vectors.
    pub fn orthogonal_basis(&self) -> &[Vec<Rat>] {
        &self.orthogonal_basis
    }

    pub fn discriminant_form(&self) -> &DiscriminantForm {
        &self.disc
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.rank()];
        v[i] = Int::one();
        v
    }

    pub fn basis_vector_rat(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.rank()];
        v[i] = Rat::one();
        v
    }

    /// Scale every Gram entry by `m` (must keep the lattice even and nondegenerate).
    pub fn rescale(&self, m: &Int) -> Result<Self> {
        let g = self
            .gram_int
            .iter()
            .map(|row| row.iter().map(|x| x * m).collect())
            .collect();
        Lattice::new(g, Some(self.labels.clone()))
    }

    pub fn direct_sum(&self, other: &Lattice) -> Result<Self> {
        let n = self.rank() + other.rank();
        let mut g = vec![vec![Int::zero(); n]; n];
        for (i, row) in self.gram_int.iter().enumerate() {
            g[i][..row.len()].clone_from_slice(row);
        }
        let off = self.rank();
        for (i, row) in other.gram_int.iter().enumerate() {
            g[off + i][off..].clone_from_slice(row);
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| format!("{l}'")));
        Lattice::new(g, Some(labels))
    }

    /// `(u, v)` for rational coordinate vectors.
    pub fn inner(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                let g = &self.gram_int[i][j];
                if vj.is_zero() || g.is_zero() {
                    continue;
                }
                acc += ui * vj * g;
            }
        }
        acc
    }

    pub fn norm(&self, v: &[Rat]) -> Rat {
        self.inner(v, v)
    }

    pub fn inner_int(&self, u: &[Int], v: &[Int]) -> Int {
        let mut acc = Int::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                let g = &self.gram_int[i][j];
                if !vj.is_zero() && !g.is_zero() {
                    acc += ui * vj * g;
                }
            }
        }
        acc
    }

    pub fn norm_int(&self, v: &[Int]) -> Int {
        self.inner_int(v, v)
    }

    /// `G·v`: the pairings of `v` with the basis.
    pub fn pairings(&self, v: &[Int]) -> Vec<Int> {
        self.gram_int
            .iter()
            .map(|row| row.iter().zip(v).map(|(g, x)| g * x).sum())
            .collect()
    }

    /// Positive generator of the ideal `(l, L)`.
    pub fn divisor(&self, l: &[Int]) -> Result<Int> {
        self.check_len(l.len())?;
        let g = gcd_all(&self.pairings(l));
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(g)
    }

    pub fn is_primitive(&self, l: &[Int]) -> bool {
        gcd_all(l).is_one()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if n == self.rank() {
            Ok(())
        } else {
            Err(Error::Dimension("vector length differs from lattice rank"))
        }
    }

    /// Rank over `𝔽_p` of the Gram matrix.
    pub fn rank_p(&self, p: u64) -> usize {
        let n = self.rank();
        let pm = Int::from(p);
        let mut a: Vec<Vec<u64>> = self
            .gram_int
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.mod_floor(&pm).to_u64().expect("reduced residue fits"))
                    .collect()
            })
            .collect();
        let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(piv, rank);
            let inv = pow_mod(a[rank][col], p - 2, p);
            for i in 0..n {
                if i == rank || a[i][col] == 0 {
                    continue;
                }
                let c = mulmod(a[i][col], inv);
                for j in col..n {
                    let t = mulmod(c, a[rank][j]);
                    a[i][j] = (a[i][j] + p - t) % p;
                }
            }
            rank += 1;
        }
        rank
    }

    /// All vectors with coordinates in `[-bound, bound]` and `(v,v) = norm`,
    /// in lexicographic order of coordinates.
    pub fn enumerate_vectors(&self, norm: &Int, bound: usize) -> Vec<Vec<Int>> {
        let mut out = Vec::new();
        self.for_each_in_box(bound, |v, q| {
            if q == norm {
                out.push(v.to_vec());
            }
            true
        });
        out
    }

    /// Visit every box vector in lexicographic order with its norm; stop when `f` returns false.
    fn for_each_in_box(&self, bound: usize, mut f: impl FnMut(&[Int], &Int) -> bool) {
        let n = self.rank();
        let b = bound as i64;
        let small: Option<Vec<Vec<i64>>> = self
            .gram_int
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.to_i64().filter(|v| v.abs() < 1 << 40))
                    .collect()
            })
            .collect();
        let mut coords = vec![-b; n];
        let mut big = vec![Int::from(-b); n];
        loop {
            let q = match &small {
                Some(g) if b < 1 << 10 => {
                    let mut acc: i128 = 0;
                    for i in 0..n {
                        let mut row: i128 = 0;
                        for j in 0..n {
                            row += g[i][j] as i128 * coords[j] as i128;
                        }
                        acc += row * coords[i] as i128;
                    }
                    Int::from(acc)
                }
                _ => self.norm_int(&big),
            };
            if !f(&big, &q) {
                return;
            }
            // odometer increment, last coordinate fastest
            let mut k = n;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if coords[k] < b {
                    coords[k] += 1;
                    big[k] = Int::from(coords[k]);
                    break;
                }
                coords[k] = -b;
                big[k] = Int::from(-b);
            }
        }
    }

    /// Evaluate the Kneser conditions. `search_bound` limits the box search
    /// for a vector of square `-2`; the search is skipped when the box has
    /// more than `KNESER_BOX_LIMIT` points.
    pub fn kneser_check(&self, search_bound: usize) -> KneserReport {
        let even = self
            .gram_int
            .iter()
            .enumerate()
            .all(|(i, row)| row[i].is_even());
        let rank2 = self.rank_p(2);
        let rank3 = self.rank_p(3);
        KneserReport {
            even,
            witt_ok: self.real_witt_index() >= 2,
            rank2,
            rank3,
            rank2_ok: rank2 >= 6,
            rank3_ok: rank3 >= 5,
            represents_minus_two: self.find_minus_two(search_bound),
        }
    }

    fn find_minus_two(&self, bound: usize) -> RepresentsMinusTwo {
        let n = self.rank();
        let target = Int::from(-2);
        // known witnesses first: e − f in a hyperbolic pair, basis vectors, b_i ± b_j
        for i in 0..n {
            for j in 0..n {
                if i != j
                    && self.gram_int[i][i].is_zero()
                    && self.gram_int[j][j].is_zero()
                    && self.gram_int[i][j].is_one()
                {
                    let mut v = self.basis_vector(i);
                    v[j] = Int::from(-1);
                    return RepresentsMinusTwo::Found(v);
                }
            }
        }
        for i in 0..n {
            if self.gram_int[i][i] == target {
                return RepresentsMinusTwo::Found(self.basis_vector(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for sign in [-1i64, 1] {
                    let s = Int::from(sign);
                    let q = &self.gram_int[i][i]
                        + &self.gram_int[j][j]
                        + Int::from(2) * &s * &self.gram_int[i][j];
                    if q == target {
                        let mut v = self.basis_vector(i);
                        v[j] = s;
                        return RepresentsMinusTwo::Found(v);
                    }
                }
            }
        }
        let side = 2 * bound as u128 + 1;
        let exhaustive = side
            .checked_pow(n as u32)
            .is_some_and(|points| points <= KNESER_BOX_LIMIT);
        if exhaustive {
            let mut found = None;
            self.for_each_in_box(bound, |v, q| {
                if *q == target {
                    found = Some(v.to_vec());
                    false
                } else {
                    true
                }
            });
            if let Some(v) = found {
                return RepresentsMinusTwo::Found(v);
            }
        }
        RepresentsMinusTwo::NotFoundWithinBound { bound, exhaustive }
    }
}

/// Largest box (in points) that `kneser_check` will search exhaustively.
pub const KNESER_BOX_LIMIT: u128 = 5_000_000;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepresentsMinusTwo {
    Found(Vec<Int>),
    /// No witness among the known candidates or in the box. `exhaustive` is
    /// false when the box was too large to scan.
    NotFoundWithinBound {
        bound: usize,
        exhaustive: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneserReport {
    pub even: bool,
    pub witt_ok: bool,
    pub rank2: usize,
    pub rank3: usize,
    pub rank2_ok: bool,
    pub rank3_ok: bool,
    pub represents_minus_two: RepresentsMinusTwo,
}

impl KneserReport {
    pub fn passes(&self) -> bool {
        self.even
            && self.witt_ok
            && self.rank2_ok
            && self.rank3_ok
            && matches!(self.represents_minus_two, RepresentsMinusTwo::Found(_))
    }
}
