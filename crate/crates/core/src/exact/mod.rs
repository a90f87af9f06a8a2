//! Exact integer and rational scalars, dense matrices, Smith normal form,
//! congruence diagonalization and integral linear solving.

mod diag;
pub(crate) mod mat;
mod snf;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use diag::{congruence_diagonalize, Diagonalization};
pub use mat::{det_int, Mat};
pub use snf::{smith_normal_form, solve_linear, SmithForm};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().cloned().map(Rat::from_integer).collect()
}

/// Integer coordinates of a rational vector, if every entry is integral.
pub fn to_int_vec(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| c * x).collect()
}

pub fn neg_vec(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

/// gcd of all entries; zero for the zero vector.
pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Reduce `x` into `[0, m)` for positive rational `m`.
pub fn rat_mod(x: &Rat, m: &Rat) -> Rat {
    let q = (x / m).floor();
    x - q * m
}

/// Nearest integer to `a / b`, ties toward zero. `b` must be nonzero.
pub fn round_div(a: &Int, b: &Int) -> Int {
    let two = Int::from(2);
    let (q, r) = a.div_mod_floor(b);
    // r has the sign of b; compare 2|r| against |b|
    let twice = (&r * &two).abs();
    let babs = b.abs();
    if twice > babs || (twice == babs && q.is_negative()) {
        q + Int::one()
    } else {
        q
    }
}
