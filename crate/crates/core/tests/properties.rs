use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use orthlat_core::eichler::is_in_eu;
use orthlat_core::exact::{
    congruence_diagonalize, ints, smith_normal_form, to_int_vec, to_rat_vec, Int, Mat, Rat,
};
use orthlat_core::isometry::{cartan_dieudonne, cartan_dieudonne_with_order, spinor_norm_q};
use orthlat_core::{Atom, Block, Eichler, GroupWord, IsometryMap, Lattice, Membership};
use proptest::prelude::*;

// basis e, f, e1, f1, a1, a2
fn uua2() -> Lattice {
    Lattice::from_blocks(&[Block::u().repeat(2), Block::A2]).unwrap()
}

fn l2d(d: i64) -> Lattice {
    Lattice::hyperbolic_sum_with(2, -2 * d).unwrap()
}

fn small_vec(n: usize, r: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-r..=r, n)
}

fn rv(v: &[i64]) -> Vec<Rat> {
    to_rat_vec(&ints(v))
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

fn t(l: &Lattice, e: &[Rat], a: &[Rat]) -> IsometryMap {
    IsometryMap::transvection(l, e, a).unwrap()
}

fn refl(l: &Lattice, a: &[Rat]) -> IsometryMap {
    IsometryMap::reflection(l, a).unwrap()
}

/// Word in `t(e,·)`, `t(f,·)` with small integral parameters in `L₁`.
fn eu_word(l: &Lattice, params: &[(bool, Vec<i64>)]) -> GroupWord {
    let n = l.rank();
    GroupWord::new(
        params
            .iter()
            .map(|(at_e, a)| {
                let mut a = rv(a);
                a[0] = Rat::zero();
                a[1] = Rat::zero();
                Atom::transvection(unit(n, if *at_e { 0 } else { 1 }), a)
            })
            .collect(),
    )
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Mat {
    let mut m = Mat::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = Mat::identity(n);
        e[(i, j)] = Rat::from_integer(k.into());
        m = &m * &e;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snf_is_a_valid_factorisation(rows in 1usize..4, cols in 1usize..4, data in small_vec(9, 9)) {
        let m = Mat::from_i64(rows, cols, &data[..rows * cols]);
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.s.clone());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero() && !w[0].is_zero());
        }
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn signature_and_prank_invariant_under_base_change(ops in prop::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..8)) {
        let l = uua2();
        let a = unimodular(6, &ops);
        let g2 = &(&a.transpose() * l.gram()) * &a;
        let l2 = Lattice::new(g2.to_int_rows().unwrap(), None).unwrap();
        let d = congruence_diagonalize(&g2).unwrap();
        prop_assert_eq!(&(&d.p.transpose() * &g2) * &d.p, d.d.clone());
        prop_assert_eq!(l2.signature(), l.signature());
        for p in [2, 3, 5] {
            prop_assert_eq!(l2.rank_p(p), l.rank_p(p));
        }
        prop_assert_eq!(l2.discriminant_form().orders(), l.discriminant_form().orders());
    }

    #[test]
    fn discriminant_form_identities(d in 1i64..8, x in 0i64..16, y in 0i64..16) {
        let l = Lattice::from_blocks(&[Block::u(), Block::rank1(-2 * d), Block::A2.scaled(-1)]).unwrap();
        let df = l.discriminant_form();
        prop_assert_eq!(df.size(), l.determinant().abs());
        let elems = df.elements(1000).unwrap();
        let a = &elems[(x as usize) % elems.len()];
        let b = &elems[(y as usize) % elems.len()];
        let two = Rat::from_integer(2.into());
        let lhs = df.q(&df.add(a, b)) - df.q(a) - df.q(b) - &two * df.b(a, b);
        prop_assert!((lhs / &two).is_integer());
        let n = Int::from(x);
        let q = df.q(&df.scale(&n, a)) - Rat::from_integer(&n * &n) * df.q(a);
        prop_assert!((q / &two).is_integer());
    }

    #[test]
    fn t3_t5_and_unipotence(a in small_vec(6, 4), b in small_vec(6, 4), xn in 1i64..6, xd in 1i64..6) {
        let l = uua2();
        let e = unit(6, 0);
        let (mut a, mut b) = (rv(&a), rv(&b));
        a[1] = Rat::zero();
        b[1] = Rat::zero();
        let sum: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        prop_assert_eq!(t(&l, &e, &a).compose(&t(&l, &e, &b)), t(&l, &e, &sum));
        let neg: Vec<Rat> = a.iter().map(|x| -x).collect();
        prop_assert_eq!(t(&l, &e, &a).inverse(&l), t(&l, &e, &neg));
        let x = Rat::new(xn.into(), xd.into());
        let xe: Vec<Rat> = e.iter().map(|c| c * &x).collect();
        let xa: Vec<Rat> = a.iter().map(|c| c * &x).collect();
        prop_assert_eq!(t(&l, &xe, &a), t(&l, &e, &xa));
        prop_assert!(t(&l, &e, &xe).is_identity());
        let n = &(t(&l, &e, &a).into_matrix()) - &Mat::identity(6);
        prop_assert!((&(&n * &n) * &n).entries().iter().all(Zero::is_zero));
    }

    #[test]
    fn t4_conjugation(a in small_vec(6, 3), word in prop::collection::vec((any::<bool>(), small_vec(6, 2)), 0..4), r in 0usize..2) {
        let l = uua2();
        let e = unit(6, 0);
        let mut a = rv(&a);
        a[1] = Rat::zero();
        let mut gamma = eu_word(&l, &word).evaluate(&l).unwrap();
        if r == 1 {
            gamma = gamma.compose(&refl(&l, &rv(&[0, 0, 1, -1, 0, 0])));
        }
        let lhs = gamma.compose(&t(&l, &e, &a)).compose(&gamma.inverse(&l));
        prop_assert_eq!(lhs, t(&l, &gamma.apply(&e), &gamma.apply(&a)));
    }

    #[test]
    fn t6_t7(a in small_vec(4, 3)) {
        let l = uua2();
        let (e, f) = (unit(6, 0), unit(6, 1));
        let a = rv(&[0, 0, a[0], a[1], a[2], a[3]]);
        let aa = l.norm(&a);
        prop_assume!(!aa.is_zero());
        let half = &aa / Rat::from_integer(2.into());
        let m: Vec<Rat> = a.iter().zip(&e).map(|(x, y)| x + &half * y).collect();
        prop_assert_eq!(refl(&l, &a).compose(&refl(&l, &m)), t(&l, &e, &a));
        let c = Rat::from_integer(2.into()) / &aa;
        let scale = |k: &Rat, v: &[Rat]| -> Vec<Rat> { v.iter().map(|x| x * k).collect() };
        let plus = |k: &Rat| -> Vec<Rat> { e.iter().zip(&f).map(|(x, y)| x + k * y).collect() };
        let lhs = t(&l, &f, &a).compose(&t(&l, &e, &scale(&c, &a))).compose(&t(&l, &f, &a));
        prop_assert_eq!(&lhs, &refl(&l, &a).compose(&refl(&l, &plus(&c.recip()))));
        let scaled_lhs = t(&l, &f, &scale(&c, &a)).compose(&t(&l, &e, &a)).compose(&t(&l, &f, &scale(&c, &a)));
        prop_assert_eq!(&scaled_lhs, &refl(&l, &a).compose(&refl(&l, &plus(&c))));
        // the right side σ_a·σ_{e+(2/(a,a))f} needs (a,a) = ±2
        let other = lhs == refl(&l, &a).compose(&refl(&l, &plus(&c)));
        prop_assert_eq!(other, aa.abs() == Rat::from_integer(2.into()));
    }

    #[test]
    fn cartan_dieudonne_reconstructs(word in prop::collection::vec((any::<bool>(), small_vec(6, 2)), 0..4), flip in any::<bool>()) {
        let l = uua2();
        let mut g = eu_word(&l, &word).evaluate(&l).unwrap();
        if flip {
            g = g.compose(&refl(&l, &rv(&[1, -1, 0, 0, 1, -1])));
        }
        let mirrors = cartan_dieudonne(&l, &g).unwrap();
        prop_assert!(mirrors.len() <= 2 * l.rank());
        let prod = mirrors.iter().fold(IsometryMap::identity(6), |acc, m| acc.compose(&refl(&l, m)));
        prop_assert_eq!(prod, g);
    }

    #[test]
    fn spinor_norm_is_a_decomposition_independent_character(
        w1 in prop::collection::vec((0usize..3, small_vec(5, 2)), 1..4),
        w2 in prop::collection::vec((0usize..3, small_vec(5, 2)), 1..4),
    ) {
        let l = l2d(1);
        let build = |w: &[(usize, Vec<i64>)]| -> IsometryMap {
            w.iter().fold(IsometryMap::identity(5), |acc, (kind, v)| {
                let v = rv(v);
                let g = match kind {
                    0 if !l.norm(&v).is_zero() => refl(&l, &v),
                    _ => {
                        let mut a = v.clone();
                        a[1] = Rat::zero();
                        t(&l, &unit(5, if *kind == 2 { 1 } else { 0 }), &{ a[0] = Rat::zero(); a })
                    }
                };
                acc.compose(&g)
            })
        };
        let (g, h) = (build(&w1), build(&w2));
        let sg = spinor_norm_q(&l, &g).unwrap();
        let mirrors = cartan_dieudonne_with_order(&l, &g, &[4, 2, 0, 3, 1]).unwrap();
        let half = Rat::new(Int::from(-1), Int::from(2));
        let alt = mirrors.iter().fold(Rat::one(), |acc, v| acc * (&half * l.norm(v)));
        prop_assert_eq!(orthlat_core::SquareClass::of(&alt), sg.clone());
        let sh = spinor_norm_q(&l, &h).unwrap();
        prop_assert_eq!(spinor_norm_q(&l, &g.compose(&h)).unwrap(), &sg * &sh);
    }

    #[test]
    fn integral_transvections_are_stable_and_spinorial(e_choice in 0usize..4, a in small_vec(5, 3), d in 1i64..5) {
        let l = l2d(d);
        let e = [unit(5, 0), unit(5, 1), unit(5, 2), unit(5, 3)][e_choice].clone();
        let mut a = rv(&a);
        let partner = [1, 0, 3, 2][e_choice];
        a[partner] = Rat::zero();
        let g = t(&l, &e, &a);
        let m = Membership::classify(&l, g.matrix());
        prop_assert!(m.in_stable_so_plus && m.in_spinorial_kernel);
    }

    #[test]
    fn induced_map_is_a_homomorphism(w1 in prop::collection::vec((any::<bool>(), small_vec(5, 2)), 0..3), w2 in prop::collection::vec((any::<bool>(), small_vec(5, 2)), 0..3), d in 2i64..6) {
        let l = l2d(d);
        let minus = IsometryMap::new(&l, Mat::identity(5).scale(&-Rat::one())).unwrap();
        let g = eu_word(&l, &w1).evaluate(&l).unwrap().compose(&minus);
        let h = eu_word(&l, &w2).evaluate(&l).unwrap().compose(&refl(&l, &rv(&[0, 0, 0, 0, 1])));
        let df = l.discriminant_form();
        let ig = df.induced_map(g.matrix()).unwrap();
        let ih = df.induced_map(h.matrix()).unwrap();
        let igh = df.induced_map(g.compose(&h).matrix()).unwrap();
        prop_assert_eq!(ig.compose(df, &ih), igh.clone());
        prop_assert!(df.preserves_form(&igh));
    }

    #[test]
    fn orbit_invariant_constant_along_eu(word in prop::collection::vec((any::<bool>(), small_vec(5, 2)), 0..5), v in small_vec(5, 3), d in 1i64..6) {
        let l = l2d(d);
        let v = ints(&v);
        prop_assume!(l.is_primitive(&v));
        let ei = Eichler::new(&l).unwrap();
        let w = eu_word(&l, &word);
        let gv = to_int_vec(&w.apply(&l, &to_rat_vec(&v)).unwrap()).unwrap();
        prop_assert_eq!(ei.invariant(&gv).unwrap(), ei.invariant(&v).unwrap());
        let tau = ei.transport_witness(&v, &gv).unwrap();
        prop_assert!(is_in_eu(&ei, &tau));
        prop_assert_eq!(to_int_vec(&tau.apply(&l, &to_rat_vec(&v)).unwrap()).unwrap(), gv);
    }

    #[test]
    fn unimodular_transvections_are_conjugate_into_eu(word in prop::collection::vec((any::<bool>(), small_vec(5, 2)), 1..5), a in small_vec(5, 2)) {
        // E(L) = E_U(L₁): t(u,b) = τ⁻¹ t(e, τb) τ with τ(u) = e
        let l = l2d(2);
        let ei = Eichler::new(&l).unwrap();
        let e = ints(&[1, 0, 0, 0, 0]);
        let g = eu_word(&l, &word);
        let u = to_int_vec(&g.apply(&l, &to_rat_vec(&e)).unwrap()).unwrap();
        let ur = to_rat_vec(&u);
        // project a onto u^⊥ over ℤ: b = a − (a,u)·f' with (f',u) = 1 is not needed;
        // instead take b = (u,u')a − (a,u)u' for any u' with (u,u') = 1
        let red = ei.prepare(&u).unwrap();
        let up = red.word.inverse().apply(&l, &to_rat_vec(&red.partner)).unwrap();
        let ar = rv(&a);
        let k = l.inner(&ar, &ur);
        let b: Vec<Rat> = ar.iter().zip(&up).map(|(x, y)| x - &k * y).collect();
        prop_assert!(l.inner(&b, &ur).is_zero());
        let tau = ei.transport_witness(&u, &e).unwrap();
        let tm = tau.evaluate(&l).unwrap();
        let rhs = tm.inverse(&l).compose(&t(&l, &unit(5, 0), &tm.apply(&b))).compose(&tm);
        prop_assert_eq!(t(&l, &ur, &b), rhs);
    }

    #[test]
    fn orthogonal_group_of_d_is_a_group(d in 1i64..9) {
        let l = l2d(d);
        let df = l.discriminant_form();
        let auts = df.enumerate_orthogonal_group(10_000).unwrap();
        prop_assert!(auts.iter().any(|a| a.is_identity(df)));
        for a in &auts {
            prop_assert!(df.preserves_form(a));
            for b in &auts {
                prop_assert!(auts.contains(&a.compose(df, b)));
            }
            prop_assert!(auts.iter().any(|b| a.compose(df, b).is_identity(df)));
        }
    }
}

#[test]
fn divisor_of_the_rank_one_generator() {
    let l = l2d(3);
    let g = ints(&[0, 0, 0, 0, 1]);
    assert_eq!(l.divisor(&g).unwrap(), BigInt::from(6));
    let df = l.discriminant_form();
    assert_eq!(df.order_of(&df.class_of(&l, &g).unwrap()), BigInt::from(6));
}
