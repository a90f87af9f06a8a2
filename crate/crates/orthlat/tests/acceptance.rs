//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criterion 9 compares the O(D) count against the number of units mod 4d
//! squaring to one. That count is twice the true order of O(D), so the
//! criterion is expected to fail; the harness succeeds when exactly that
//! criterion fails and every other one passes.

use std::collections::{BTreeMap, HashMap};
use std::process::Command;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use orthlat::format::lattice_from_spec;
use orthlat::suite;
use orthlat_core::isometry::{
    cartan_dieudonne, cartan_dieudonne_with_order, spinor_norm_q, CompiledWord,
};
use orthlat_core::{
    is_in_eu, Atom, Eichler, GroupWord, Int, IsometryMap, Lattice, Membership, Rat, SquareClass,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXPECTED_FAILURES: &[u32] = &[9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(t: Duration, secs: u64) -> bool {
    t < Duration::from_secs(secs)
}

fn rat(x: i64) -> Rat {
    Rat::from_integer(x.into())
}

fn c1_identity_suite() -> Outcome {
    let start = Instant::now();
    let r = suite::run(42);
    let t = start.elapsed();
    let eichler: Vec<_> = r.group("eichler").collect();
    let ok = eichler.len() == 7 && eichler.iter().all(|e| e.pass() && e.trials >= 100);
    let failed: Vec<_> = eichler
        .iter()
        .filter(|e| !e.pass())
        .map(|e| e.name.clone())
        .collect();
    outcome(
        ok && within(t, 5),
        format!(
            "{} identities, min trials {}, failed {failed:?}, whole suite {t:.2?}",
            eichler.len(),
            eichler.iter().map(|e| e.trials).min().unwrap_or(0)
        ),
    )
}

fn c2_forge() -> Outcome {
    let start = Instant::now();
    let r = suite::run(42);
    let t = start.elapsed();
    let forge: Vec<_> = r.group("forge").collect();
    let trials = |prefix: &str| {
        forge
            .iter()
            .find(|e| e.name.starts_with(prefix))
            .map_or(0, |e| e.trials)
    };
    let counts_ok = trials("t(f,sw)") >= 50
        && trials("t(e,u) =") >= 20
        && trials("[t(e,-sf1)") >= 20
        && trials("t(e,s(u,v)e1)") >= 20;
    let ok = counts_ok && forge.iter().all(|e| e.pass());
    outcome(
        ok && within(t, 10),
        format!(
            "{} checks, {} certificate targets with det 1 and sn 1, {t:.2?}",
            forge.len(),
            forge
                .iter()
                .find(|e| e.name.starts_with("certificate targets"))
                .map_or(0, |e| e.passed)
        ),
    )
}

fn c3_eichler_criterion() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0usize;
    let mut bad = Vec::new();
    for d in 1..=5i64 {
        let l = Lattice::hyperbolic_sum_with(2, -2 * d).unwrap();
        let eich = Eichler::new(&l).unwrap();
        let roots = l.enumerate_vectors(&Int::from(-2), 3);
        let mut classes: BTreeMap<_, Vec<usize>> = BTreeMap::new();
        for (i, r) in roots.iter().enumerate() {
            classes
                .entry(eich.invariant(r).unwrap())
                .or_default()
                .push(i);
        }
        let prepared: Vec<_> = roots.iter().map(|r| eich.prepare(r).unwrap()).collect();
        let small: Vec<Vec<i64>> = roots
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect();
        let mut stable: HashMap<Atom, bool> = HashMap::new();
        let mut atom_ok = |a: &Atom| {
            *stable.entry(a.clone()).or_insert_with(|| {
                let m = a.evaluate(&l).unwrap();
                let flags = Membership::classify(&l, m.matrix());
                m.is_integral() && flags.in_stable_so_plus && flags.in_spinorial_kernel
            })
        };
        // Every transport word is inverse(prepare(v)) · middle · prepare(u); the
        // outer pieces are compiled and checked once per root, and each pair's
        // word is matched against them literally.
        let inverses: Vec<GroupWord> = prepared.iter().map(|p| p.word.inverse()).collect();
        let forward: Vec<CompiledWord> = prepared
            .iter()
            .map(|p| CompiledWord::compile(&l, &p.word).unwrap())
            .collect();
        let backward: Vec<CompiledWord> = inverses
            .iter()
            .map(|w| CompiledWord::compile(&l, w).unwrap())
            .collect();
        let root_ok: Vec<bool> = prepared
            .iter()
            .zip(&inverses)
            .map(|(p, w)| p.word.atoms().iter().chain(w.atoms()).all(&mut atom_ok))
            .collect();
        for members in classes.values() {
            for (k, &i) in members.iter().enumerate() {
                for &j in &members[k + 1..] {
                    pairs += 1;
                    let w = eich.transport_between(&prepared[i], &prepared[j]).unwrap();
                    let atoms = w.atoms();
                    let (head, tail) = (inverses[j].atoms(), prepared[i].word.atoms());
                    let framed = atoms.len() >= head.len() + tail.len()
                        && atoms.starts_with(head)
                        && atoms.ends_with(tail);
                    let ok = framed && {
                        let middle =
                            GroupWord::new(atoms[head.len()..atoms.len() - tail.len()].to_vec());
                        let maps = forward[i]
                            .apply(&small[i])
                            .and_then(|x| CompiledWord::compile(&l, &middle)?.apply(&x))
                            .and_then(|x| backward[j].apply(&x))
                            .is_some_and(|img| img == small[j]);
                        maps && root_ok[i]
                            && root_ok[j]
                            && is_in_eu(&eich, &w)
                            && middle.atoms().iter().all(&mut atom_ok)
                    };
                    if !ok && bad.len() < 3 {
                        bad.push((d, roots[i].clone(), roots[j].clone()));
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && pairs >= 200 && within(t, 30),
        format!("{pairs} unordered pairs, failures {bad:?}, {t:.2?}"),
    )
}

fn c4_kneser() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for t in [1, 2, 3, 5, 6] {
        let r = lattice_from_spec(&format!("2U+<-{}>", 2 * t))
            .unwrap()
            .kneser_check(2);
        ok &= r.rank2 == 4;
    }
    notes.push("rank2(2U+<-2t>) = 4".to_string());
    let r3 = lattice_from_spec("2U+A2(-3)")
        .unwrap()
        .kneser_check(2)
        .rank3;
    ok &= r3 == 4;
    notes.push(format!("rank3(2U+A2(-3)) = {r3}"));
    let r2 = lattice_from_spec("U(2)+U+E8(-2)")
        .unwrap()
        .kneser_check(2)
        .rank2;
    ok &= r2 == 2;
    notes.push(format!("rank2(U(2)+U+E8(-2)) = {r2}"));
    for d in 1..=6 {
        let r = lattice_from_spec(&format!("2U+2E8(-1)+<-{}>", 2 * d))
            .unwrap()
            .kneser_check(2);
        ok &= r.passes();
    }
    notes.push("2U+2E8(-1)+<-2d> passes for d <= 6".into());
    outcome(ok, notes.join(", "))
}

/// Random anisotropic integral vector with entries in `[-2, 2]`.
fn mirror(rng: &mut ChaCha8Rng, l: &Lattice) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..l.rank()).map(|_| rat(rng.gen_range(-2..=2))).collect();
        if !l.norm(&v).is_zero() {
            return v;
        }
    }
}

/// Random integral transvection `t(c, a)` with `c` one of the isotropic
/// vectors `e + x·e₁`, `f + x·f₁`, `e₁`, `f₁` of the two leading planes.
fn integral_transvection(rng: &mut ChaCha8Rng, l: &Lattice) -> Atom {
    let n = l.rank();
    let unit = |i: usize| -> Vec<Rat> { (0..n).map(|k| rat(i64::from(k == i))).collect() };
    let (c, partner) = match rng.gen_range(0..4) {
        0 => (
            add(&unit(0), &scale(&unit(2), rng.gen_range(-2..=2))),
            unit(1),
        ),
        1 => (
            add(&unit(1), &scale(&unit(3), rng.gen_range(-2..=2))),
            unit(0),
        ),
        2 => (unit(2), unit(3)),
        _ => (unit(3), unit(2)),
    };
    let a: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
    let a = add(&a, &scale_r(&partner, &-l.inner(&c, &a)));
    Atom::transvection(c, a)
}

fn add(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

fn scale(u: &[Rat], x: i64) -> Vec<Rat> {
    scale_r(u, &rat(x))
}

fn scale_r(u: &[Rat], x: &Rat) -> Vec<Rat> {
    u.iter().map(|a| a * x).collect()
}

fn sn_of_mirrors(l: &Lattice, mirrors: &[Vec<Rat>]) -> SquareClass {
    let half = Rat::new((-1).into(), 2.into());
    SquareClass::of(
        &mirrors
            .iter()
            .fold(Rat::one(), |acc, v| acc * (&half * l.norm(v))),
    )
}

fn c5_spinor_norm() -> Outcome {
    let l = Lattice::hyperbolic_sum_with(2, -2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let word = |rng: &mut ChaCha8Rng| -> IsometryMap {
        let len = rng.gen_range(1..=5);
        let atoms = (0..len)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Atom::Reflection(mirror(rng, &l))
                } else {
                    integral_transvection(rng, &l)
                }
            })
            .collect();
        GroupWord::new(atoms).evaluate(&l).unwrap()
    };
    let (mut same, mut mult) = (0, 0);
    for _ in 0..100 {
        let g = word(&mut rng);
        let mut order: Vec<usize> = (0..l.rank()).collect();
        order.shuffle(&mut rng);
        let a = sn_of_mirrors(&l, &cartan_dieudonne(&l, &g).unwrap());
        let b = sn_of_mirrors(&l, &cartan_dieudonne_with_order(&l, &g, &order).unwrap());
        same += usize::from(a == b);
    }
    for _ in 0..100 {
        let (g, h) = (word(&mut rng), word(&mut rng));
        let sg = spinor_norm_q(&l, &g).unwrap();
        let sh = spinor_norm_q(&l, &h).unwrap();
        mult += usize::from(spinor_norm_q(&l, &g.compose(&h)).unwrap() == &sg * &sh);
    }
    outcome(
        same == 100 && mult == 100,
        format!("{same}/100 order-independent, {mult}/100 multiplicative"),
    )
}

fn c6_spinorial_kernel() -> Outcome {
    let spec = "2U+2E8(-1)+<-2>";
    let l = lattice_from_spec(spec).unwrap();
    let kneser = l.kneser_check(2).passes();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut good = 0;
    for _ in 0..100 {
        let len = rng.gen_range(1..=4);
        let w = GroupWord::new(
            (0..len)
                .map(|_| integral_transvection(&mut rng, &l))
                .collect(),
        );
        let m = Membership::classify(&l, w.evaluate(&l).unwrap().matrix());
        good += usize::from(m.in_spinorial_kernel && m.in_stable_so_plus);
    }
    outcome(
        kneser && good == 100,
        format!("{spec} passes Kneser: {kneser}, {good}/100 words in both groups"),
    )
}

fn c7_jacobi() -> Outcome {
    let r = suite::run(42);
    let entries: Vec<_> = r.group("jacobi").chain(r.group("paramodular")).collect();
    let failed: Vec<_> = entries
        .iter()
        .filter(|e| !e.pass())
        .map(|e| e.name.clone())
        .collect();
    outcome(
        entries.len() >= 8 && failed.is_empty(),
        format!("{} checks, failed {failed:?}", entries.len()),
    )
}

/// Orbit invariant of a root of `2U + <-2d>` computed from coordinates:
/// norm, divisor, and `2d·x₅/div mod 2d`.
fn oracle_key(d: i64, x: &[i64]) -> (i64, i64, i64) {
    let norm = 2 * (x[0] * x[1] + x[2] * x[3]) - 2 * d * x[4] * x[4];
    if norm == 0 {
        return (0, 0, 0);
    }
    let div = [x[1], x[0], x[3], x[2], 2 * d * x[4]]
        .iter()
        .fold(0i64, |g, &v| g.gcd(&v));
    (norm, div, (2 * d * x[4] / div).rem_euclid(2 * d))
}

fn c8_census() -> Outcome {
    let two_u = lattice_from_spec("2U").unwrap();
    let c = Eichler::new(&two_u).unwrap().root_orbit_census(2);
    let mut ok = c.classes.len() == 1;
    let mut notes = vec![format!(
        "2U box 2: {} roots in {} class",
        c.roots,
        c.classes.len()
    )];
    for d in 1..=5i64 {
        let l = Lattice::hyperbolic_sum_with(2, -2 * d).unwrap();
        let census = Eichler::new(&l).unwrap().root_orbit_census(3);
        let mut oracle: BTreeMap<(i64, i64, i64), usize> = BTreeMap::new();
        for x0 in -3..=3 {
            for x1 in -3..=3 {
                for x2 in -3..=3 {
                    for x3 in -3..=3 {
                        for x4 in -3..=3i64 {
                            let x = [x0, x1, x2, x3, x4];
                            let key = oracle_key(d, &x);
                            if key.0 == -2 {
                                *oracle.entry(key).or_default() += 1;
                            }
                        }
                    }
                }
            }
        }
        let mut from_census: BTreeMap<(i64, i64, i64), usize> = BTreeMap::new();
        for class in &census.classes {
            let w: Vec<i64> = class.witness.iter().map(|v| v.to_i64().unwrap()).collect();
            *from_census.entry(oracle_key(d, &w)).or_default() += class.count;
        }
        let same = from_census == oracle && census.classes.len() == oracle.len();
        ok &= same;
        notes.push(format!(
            "d={d}: {} roots, {} classes, oracle agrees: {same}",
            census.roots,
            census.classes.len()
        ));
    }
    outcome(ok, notes.join("; "))
}

fn count_square_roots_of_one(m: i64) -> usize {
    (0..m)
        .filter(|u| u.gcd(&m) == 1 && (u * u - 1).rem_euclid(m) == 0)
        .count()
}

fn prime_divisors(mut n: i64) -> u32 {
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            k += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    k + u32::from(n > 1)
}

fn c9_orth_d() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut rows = Vec::new();
    for d in 1..=12i64 {
        let l = Lattice::hyperbolic_sum_with(2, -2 * d).unwrap();
        let count = l
            .discriminant_form()
            .enumerate_orthogonal_group(10_000)
            .unwrap()
            .len();
        let mod4d = count_square_roots_of_one(4 * d);
        let mod2d = (0..2 * d)
            .filter(|u| u.gcd(&(2 * d)) == 1 && (u * u - 1).rem_euclid(4 * d) == 0)
            .count();
        let formula = 1usize << prime_divisors(d);
        ok &= count == mod4d;
        rows.push(format!(
            "d={d}: {count} (mod 4d {mod4d}, mod 2d {mod2d}, 2^rho {formula})"
        ));
    }
    let t = start.elapsed();
    outcome(ok && within(t, 5), format!("{}; {t:.2?}", rows.join(", ")))
}

fn c10_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_orthlat"))
            .args(["suite", "run", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let all_pass = serde_json::from_slice::<serde_json::Value>(&a.stdout)
        .map(|v| v["allPass"] == true)
        .unwrap_or(false);
    outcome(
        a.status.success() && a.stdout == b.stdout && all_pass,
        format!(
            "{} bytes, identical: {}, allPass: {all_pass}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "identity suite", c1_identity_suite),
        (2, "commutator certificates", c2_forge),
        (3, "Eichler criterion transport", c3_eichler_criterion),
        (4, "Kneser fixtures", c4_kneser),
        (5, "spinor norm well-defined", c5_spinor_norm),
        (
            6,
            "integral transvections in the spinorial kernel",
            c6_spinorial_kernel,
        ),
        (7, "Jacobi and paramodular identities", c7_jacobi),
        (8, "root orbit census", c8_census),
        (9, "O(D) against units mod 4d", c9_orth_d),
        (10, "determinism", c10_determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let o = std::panic::catch_unwind(check).unwrap_or_else(|_| outcome(false, "panicked"));
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let expected = if !o.pass && EXPECTED_FAILURES.contains(&id) {
            " (expected)"
        } else {
            ""
        };
        println!(
            "{tag} {id:>2} {name}{expected}: {} [{:.2?}]",
            o.detail,
            start.elapsed()
        );
        if !o.pass {
            failed.push(id);
        }
    }
    if failed != EXPECTED_FAILURES {
        println!("unexpected outcome: failed {failed:?}, expected {EXPECTED_FAILURES:?}");
        std::process::exit(1);
    }
}
