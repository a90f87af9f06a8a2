use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, Mat};
use crate::{Error, Result};

/// `u · m · v = s` with `u`, `v` unimodular and `s` diagonal, `s₁ | s₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Mat,
    pub s: Mat,
    pub v: Mat,
}

impl SmithForm {
    /// Diagonal entries of `s` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s[(i, i)].to_integer()).collect()
    }
}

struct Work {
    a: Vec<Vec<Int>>,
    u: Vec<Vec<Int>>,
    v: Vec<Vec<Int>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_dst += c · row_src
    fn add_row(&mut self, dst: usize, src: usize, c: &Int) {
        for m in [&mut self.a, &mut self.u] {
            let src_row = m[src].clone();
            for (x, y) in m[dst].iter_mut().zip(&src_row) {
                if !y.is_zero() {
                    *x += c * y;
                }
            }
        }
    }

    /// col_dst += c · col_src
    fn add_col(&mut self, dst: usize, src: usize, c: &Int) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                if !row[src].is_zero() {
                    let t = c * &row[src];
                    row[dst] += t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -core::mem::take(x);
            }
        }
    }
}

fn identity_rows(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form of an integer matrix.
///
/// Pivot: smallest nonzero absolute value in the remaining block, ties broken by
/// the lowest `(row, col)`. Outputs are deterministic.
pub fn smith_normal_form(m: &Mat) -> Result<SmithForm> {
    let a = m.to_int_rows().ok_or(Error::NotIntegral)?;
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a,
        u: identity_rows(rows),
        v: identity_rows(cols),
    };

    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pi, pj)) if w.a[pi][pj].abs() <= x.abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Ok(finish(w, rows, cols));
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let p = w.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&p);
                w.add_row(i, t, &-q);
                clean &= w.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&p);
                w.add_col(j, t, &-q);
                clean &= w.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(t, i, &Int::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    Ok(finish(w, rows, cols))
}

fn finish(w: Work, _rows: usize, _cols: usize) -> SmithForm {
    SmithForm {
        u: Mat::from_int_rows(&w.u),
        s: Mat::from_int_rows(&w.a),
        v: Mat::from_int_rows(&w.v),
    }
}

/// Integral solution of `a·x = b`, or `None` when none exists over ℤ.
pub fn solve_linear(a: &Mat, b: &[Int]) -> Result<Option<Vec<Int>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension("right-hand side length"));
    }
    let snf = smith_normal_form(a)?;
    let u = snf
        .u
        .to_int_rows()
        .expect("unimodular transform is integral");
    let v = snf
        .v
        .to_int_rows()
        .expect("unimodular transform is integral");
    let ub: Vec<Int> = u
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    let diag = snf.diagonal();
    let mut y = alloc::vec![Int::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(Int::zero);
        if d.is_zero() {
            if !ubi.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = ubi.div_rem(&d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    let x = v
        .iter()
        .map(|row| row.iter().zip(&y).map(|(p, q)| p * q).sum())
        .collect();
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ints, mat::det_int};

    fn check(m: &Mat) -> SmithForm {
        let f = smith_normal_form(m).unwrap();
        assert_eq!(&(&f.u * m) * &f.v, f.s);
        assert!(f.s.is_diagonal());
        let du = det_int(&f.u.to_int_rows().unwrap());
        let dv = det_int(&f.v.to_int_rows().unwrap());
        assert!(du == Int::one() || du == -Int::one());
        assert!(dv == Int::one() || dv == -Int::one());
        let d = f.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        assert!(d.iter().all(|x| !x.is_negative()));
        f
    }

    #[test]
    fn diag_two_three() {
        let f = check(&Mat::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(f.diagonal(), ints(&[1, 6]));
    }

    #[test]
    fn identity_is_fixed() {
        let f = check(&Mat::identity(3));
        assert_eq!(f.s, Mat::identity(3));
        assert_eq!(f.u, Mat::identity(3));
        assert_eq!(f.v, Mat::identity(3));
    }

    #[test]
    fn swap_matrix() {
        let f = check(&Mat::from_i64(2, 2, &[0, 1, 1, 0]));
        assert_eq!(f.diagonal(), ints(&[1, 1]));
    }

    #[test]
    fn rectangular_and_singular() {
        let f = check(&Mat::from_i64(2, 3, &[2, 4, 6, 4, 8, 12]));
        assert_eq!(f.diagonal(), ints(&[2, 0]));
        check(&Mat::from_i64(3, 2, &[0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn solve_gcd_row() {
        let a = Mat::from_i64(1, 2, &[2, 3]);
        let x = solve_linear(&a, &ints(&[1])).unwrap().unwrap();
        assert_eq!(&x[0] * Int::from(2) + &x[1] * Int::from(3), Int::one());
    }

    #[test]
    fn solve_parity_obstruction() {
        let a = Mat::from_i64(1, 1, &[2]);
        assert_eq!(solve_linear(&a, &ints(&[1])).unwrap(), None);
    }

    #[test]
    fn solve_identity() {
        let b = ints(&[4, -7, 0]);
        assert_eq!(solve_linear(&Mat::identity(3), &b).unwrap(), Some(b));
    }

    #[test]
    fn rejects_rational_input() {
        let m = Mat::new(1, 1, alloc::vec![crate::exact::ratio(1, 2)]);
        assert_eq!(smith_normal_form(&m), Err(Error::NotIntegral));
    }
}
