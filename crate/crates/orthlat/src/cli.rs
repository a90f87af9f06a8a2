//! Argument parsing and dispatch. Every command prints exactly one JSON
//! document; [`run`] never panics on malformed input.

use std::fs;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use orthlat_core::isometry::{cartan_dieudonne, spinor_norm_q};
use orthlat_core::{
    is_in_eu, paramodular_jt_check, CommutatorCertificate, DiscAut, DiscElement, Eichler, Forge,
    Int, IsometryMap, JacobiFrame, Lattice, Mat, Membership, OrbitInvariant, Rat,
    RepresentsMinusTwo, Scope,
};
use serde_json::{json, Map, Value};

use crate::format::{
    int_json, int_vec_json, lattice_from_spec, lattice_json, matrix_json, parse_int, parse_int_vec,
    parse_lattice, parse_matrix, parse_rat, parse_rat_vec, parse_word, rat_json, rat_vec_json,
    word_json, Failure, Result,
};
use crate::suite;

/// Lattice used by `witness` and `jacobi` when none is given.
pub const DEFAULT_SPEC: &str = "2U+A2";

#[derive(Parser, Debug)]
#[command(
    name = "orthlat",
    version,
    about = "Exact computations in orthogonal groups of even lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone, Default)]
struct Opts {
    /// Block spec such as "2U+2E8(-1)+<-6>".
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Path to a lattice JSON file {"gram": [[...]], "labels": [...]}.
    #[arg(long, global = true)]
    file: Option<String>,
    /// Seed for the identity suite.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Box bound for vector searches.
    #[arg(long = "box", global = true)]
    bound: Option<usize>,
    /// Size cap for discriminant-group enumeration.
    #[arg(long, global = true, default_value_t = 10_000)]
    cap: u64,
    /// Command payload: inline JSON, or @path to a JSON file.
    #[arg(long, global = true)]
    json: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Disc(DiscCmd),
    #[command(subcommand)]
    Elem(ElemCmd),
    #[command(subcommand)]
    Orbit(OrbitCmd),
    #[command(subcommand)]
    Jacobi(JacobiCmd),
    #[command(subcommand)]
    Witness(WitnessCmd),
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Gram matrix, signature, determinant and discriminant orders.
    Info,
    /// Kneser conditions.
    Kneser,
    /// Root classes by orbit invariant inside a box.
    Census,
}

#[derive(Subcommand, Debug)]
enum DiscCmd {
    /// Invariant factors, q-values and the order of O(D).
    Form,
    /// All automorphisms of D preserving q.
    Autgroup,
}

#[derive(Subcommand, Debug)]
enum ElemCmd {
    /// Membership flags of {"matrix": ...}.
    Check,
    /// Spinor norms of {"matrix": ...} or {"word": [...]}.
    Spinor,
    /// Reflection in {"v": ...}.
    Reflect,
    /// Transvection t(e,a) from {"e": ..., "a": ...}.
    Transvect,
}

#[derive(Subcommand, Debug)]
enum OrbitCmd {
    /// Compare orbit invariants of {"u": ..., "v": ...}.
    Equiv,
    /// A word in integral transvections taking u to v.
    Transport,
}

#[derive(Subcommand, Debug)]
enum JacobiCmd {
    /// Embed {"a": [[a,b],[c,d]]} or {"u": ..., "v": ..., "z": ...}.
    Embed,
    /// Check the Jacobi-group and paramodular identities.
    Verify,
}

#[derive(Subcommand, Debug)]
enum WitnessCmd {
    /// Commutator word for P(4); optional {"v6": ...}.
    P4,
    /// Commutator certificate for t(e,u) from {"u": ...}.
    Transvection,
    /// Check the transvection product identity for {"w": ..., "s": ...}.
    Master,
    /// Commutator certificate for the chosen target.
    Commutator {
        #[arg(long, value_enum)]
        target: Target,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    P4,
    Transvection,
    Heisenberg,
    Triple,
}

#[derive(Subcommand, Debug)]
enum SuiteCmd {
    /// Run every identity on seeded random instances.
    Run,
}

/// Parse `argv` (including the program name) and execute. Returns the exit
/// code and the JSON document for stdout.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return (0, json!({"help": e.to_string()}).to_string());
        }
        Err(e) => {
            let f = Failure::Usage(e.kind().to_string());
            return (f.exit_code(), render(&f.to_json()));
        }
    };
    let outcome = std::panic::catch_unwind(|| dispatch(&cli));
    match outcome {
        Ok(Ok(v)) => (0, render(&v)),
        Ok(Err(f)) => (f.exit_code(), render(&f.to_json())),
        Err(_) => (
            1,
            render(&json!({"error": "Internal", "detail": "unexpected failure"})),
        ),
    }
}

fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Ctx<'a> {
    opts: &'a Opts,
    payload: Value,
}

impl Ctx<'_> {
    fn lattice(&self, default: Option<&str>) -> Result<Lattice> {
        if let Some(spec) = &self.opts.spec {
            return lattice_from_spec(spec);
        }
        if let Some(path) = &self.opts.file {
            let text =
                fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
            let v: Value =
                serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
            return parse_lattice(&v);
        }
        match self.payload.get("lattice") {
            Some(Value::String(spec)) => return lattice_from_spec(spec),
            Some(v @ Value::Object(_)) => return parse_lattice(v),
            Some(_) => {
                return Err(usage(
                    "\"lattice\" must be a spec string or a lattice object",
                ))
            }
            None => {}
        }
        match default {
            Some(spec) => lattice_from_spec(spec),
            None => Err(usage(
                "no lattice given: use --spec, --file or a \"lattice\" field",
            )),
        }
    }

    fn field(&self, key: &str) -> Result<&Value> {
        self.payload
            .get(key)
            .ok_or_else(|| usage(format!("payload needs field {key:?}")))
    }

    fn rat_vec(&self, key: &str, n: usize) -> Result<Vec<Rat>> {
        let v = parse_rat_vec(self.field(key)?)?;
        check_len(key, v.len(), n)?;
        Ok(v)
    }

    fn int_vec(&self, key: &str, n: usize) -> Result<Vec<Int>> {
        let v = parse_int_vec(self.field(key)?)?;
        check_len(key, v.len(), n)?;
        Ok(v)
    }

    fn matrix(&self, n: usize) -> Result<Mat> {
        let m = parse_matrix(self.field("matrix")?)?;
        if m.rows() != n || m.cols() != n {
            return Err(usage(format!("matrix must be {n}x{n}")));
        }
        Ok(m)
    }
}

fn check_len(key: &str, got: usize, want: usize) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(usage(format!("{key:?} has length {got}, expected {want}")))
    }
}

fn read_payload(opts: &Opts) -> Result<Value> {
    let Some(raw) = &opts.json else {
        return Ok(Value::Object(Map::new()));
    };
    let text = match raw.strip_prefix('@') {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?
        }
        None => raw.clone(),
    };
    let v: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("payload is not JSON: {e}")))?;
    if !v.is_object() {
        return Err(usage("payload must be a JSON object"));
    }
    Ok(v)
}

fn dispatch(cli: &Cli) -> Result<Value> {
    let ctx = Ctx {
        opts: &cli.opts,
        payload: read_payload(&cli.opts)?,
    };
    match &cli.command {
        Command::Lattice(c) => lattice_cmd(&ctx, c),
        Command::Disc(c) => disc_cmd(&ctx, c),
        Command::Elem(c) => elem_cmd(&ctx, c),
        Command::Orbit(c) => orbit_cmd(&ctx, c),
        Command::Jacobi(c) => jacobi_cmd(&ctx, c),
        Command::Witness(c) => witness_cmd(&ctx, c),
        Command::Suite(SuiteCmd::Run) => Ok(suite::run(cli.opts.seed).to_json()),
    }
}

fn lattice_cmd(ctx: &Ctx, cmd: &LatticeCmd) -> Result<Value> {
    let l = ctx.lattice(None)?;
    match cmd {
        LatticeCmd::Info => {
            let (pos, neg) = l.signature();
            Ok(json!({
                "lattice": lattice_json(&l),
                "rank": l.rank(),
                "signature": [pos, neg],
                "determinant": int_json(l.determinant()),
                "wittIndex": l.real_witt_index(),
                "discriminantOrders": int_vec_json(l.discriminant_form().orders()),
            }))
        }
        LatticeCmd::Kneser => {
            let r = l.kneser_check(ctx.opts.bound.unwrap_or(3));
            let minus_two = match &r.represents_minus_two {
                RepresentsMinusTwo::Found(w) => json!({"found": true, "witness": int_vec_json(w)}),
                RepresentsMinusTwo::NotFoundWithinBound { bound, exhaustive } => {
                    json!({"found": false, "bound": bound, "exhaustive": exhaustive})
                }
            };
            Ok(json!({
                "rank2OK": r.rank2_ok,
                "rank3OK": r.rank3_ok,
                "rank2": r.rank2,
                "rank3": r.rank3,
                "even": r.even,
                "wittOK": r.witt_ok,
                "representsMinusTwo": minus_two,
                "passes": r.passes(),
            }))
        }
        LatticeCmd::Census => {
            let eich = Eichler::new(&l)?;
            let c = eich.root_orbit_census(ctx.opts.bound.unwrap_or(2));
            Ok(json!({
                "bound": c.bound,
                "roots": c.roots,
                "classes": c.classes.iter().map(|k| {
                    let mut inv = invariant_json(&k.invariant);
                    inv["witness"] = int_vec_json(&k.witness);
                    inv["count"] = json!(k.count);
                    inv
                }).collect::<Vec<_>>(),
            }))
        }
    }
}

fn disc_element_json(x: &DiscElement) -> Value {
    int_vec_json(&x.coords)
}

fn aut_json(a: &DiscAut) -> Value {
    Value::Array(a.images.iter().map(disc_element_json).collect())
}

fn invariant_json(inv: &OrbitInvariant) -> Value {
    json!({"norm": int_json(&inv.norm), "divisor": int_json(&inv.divisor), "class": disc_element_json(&inv.class)})
}

fn disc_cmd(ctx: &Ctx, cmd: &DiscCmd) -> Result<Value> {
    let l = ctx.lattice(None)?;
    let d = l.discriminant_form();
    let auts = d.enumerate_orthogonal_group(ctx.opts.cap)?;
    match cmd {
        DiscCmd::Form => Ok(json!({
            "orders": int_vec_json(d.orders()),
            "q": d.q_values().iter().map(rat_json).collect::<Vec<_>>(),
            "b": d.b_values().iter().map(|r| rat_vec_json(r)).collect::<Vec<_>>(),
            "generators": d.generators().iter().map(|g| rat_vec_json(g)).collect::<Vec<_>>(),
            "autOrder": auts.len(),
        })),
        DiscCmd::Autgroup => Ok(json!({
            "orders": int_vec_json(d.orders()),
            "count": auts.len(),
            "automorphisms": auts.iter().map(aut_json).collect::<Vec<_>>(),
        })),
    }
}

fn membership_json(m: &Membership) -> Value {
    json!({
        "inO": m.in_o,
        "inSO": m.in_so,
        "inOplus": m.in_o_plus,
        "inStable": m.in_stable,
        "inStablePlus": m.in_stable_plus,
        "inStableSOplus": m.in_stable_so_plus,
        "inSpinorialKernel": m.in_spinorial_kernel,
    })
}

/// Matrix, determinant, spinor norms and membership of a rational isometry.
fn describe(l: &Lattice, g: &IsometryMap) -> Result<Value> {
    let sn = spinor_norm_q(l, g)?;
    Ok(json!({
        "matrix": matrix_json(g.matrix()),
        "det": rat_json(&g.det()),
        "spinorNormQ": int_json(sn.value()),
        "spinorNormR": sn.sign(),
        "membership": membership_json(&Membership::classify(l, g.matrix())),
    }))
}

fn elem_cmd(ctx: &Ctx, cmd: &ElemCmd) -> Result<Value> {
    let l = ctx.lattice(None)?;
    let n = l.rank();
    match cmd {
        ElemCmd::Check => {
            let m = ctx.matrix(n)?;
            let membership = membership_json(&Membership::classify(&l, &m));
            let mut out = json!({"isometry": false, "membership": membership});
            if let Ok(g) = IsometryMap::new(&l, m) {
                let sn = spinor_norm_q(&l, &g)?;
                out["isometry"] = json!(true);
                out["det"] = rat_json(&g.det());
                out["spinorNormQ"] = int_json(sn.value());
                out["spinorNormR"] = json!(sn.sign());
            }
            Ok(out)
        }
        ElemCmd::Spinor => {
            let g = if ctx.payload.get("word").is_some() {
                let w = parse_word(ctx.field("word")?)?;
                check_word(&w, n)?;
                w.evaluate(&l)?
            } else {
                IsometryMap::new(&l, ctx.matrix(n)?)?
            };
            let sn = spinor_norm_q(&l, &g)?;
            let mirrors = cartan_dieudonne(&l, &g)?;
            Ok(json!({
                "spinorNormQ": int_json(sn.value()),
                "spinorNormR": sn.sign(),
                "det": rat_json(&g.det()),
                "mirrors": mirrors.iter().map(|v| rat_vec_json(v)).collect::<Vec<_>>(),
            }))
        }
        ElemCmd::Reflect => describe(&l, &IsometryMap::reflection(&l, &ctx.rat_vec("v", n)?)?),
        ElemCmd::Transvect => {
            let (e, a) = (ctx.rat_vec("e", n)?, ctx.rat_vec("a", n)?);
            describe(&l, &IsometryMap::transvection(&l, &e, &a)?)
        }
    }
}

/// Reject words whose vectors do not match the lattice rank.
fn check_word(w: &orthlat_core::GroupWord, n: usize) -> Result<()> {
    use orthlat_core::Atom;
    fn ok(a: &Atom, n: usize) -> bool {
        match a {
            Atom::Reflection(v) => v.len() == n,
            Atom::Transvection { e, a } => e.len() == n && a.len() == n,
            Atom::Inverse(inner) => ok(inner, n),
        }
    }
    if w.atoms().iter().all(|a| ok(a, n)) {
        Ok(())
    } else {
        Err(usage(format!("word vectors must have length {n}")))
    }
}

fn orbit_cmd(ctx: &Ctx, cmd: &OrbitCmd) -> Result<Value> {
    let l = ctx.lattice(None)?;
    let n = l.rank();
    let eich = Eichler::new(&l)?;
    let (u, v) = (ctx.int_vec("u", n)?, ctx.int_vec("v", n)?);
    match cmd {
        OrbitCmd::Equiv => {
            let (iu, iv) = (eich.invariant(&u)?, eich.invariant(&v)?);
            Ok(
                json!({"equivalent": iu == iv, "invariantU": invariant_json(&iu), "invariantV": invariant_json(&iv)}),
            )
        }
        OrbitCmd::Transport => {
            let w = eich.transport_witness(&u, &v)?;
            let image = w.apply(&l, &to_rat(&u))?;
            Ok(json!({
                "word": word_json(&w),
                "length": w.len(),
                "verified": image == to_rat(&v),
                "integralTransvections": is_in_eu(&eich, &w),
            }))
        }
    }
}

fn to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().cloned().map(Rat::from_integer).collect()
}

fn sl2(v: &Value) -> Result<[[Int; 2]; 2]> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == 2)
        .ok_or_else(|| usage("\"a\" must be a 2x2 matrix"))?;
    let row = |r: &Value| -> Result<[Int; 2]> {
        let x = parse_int_vec(r)?;
        check_len("a row", x.len(), 2)?;
        Ok([x[0].clone(), x[1].clone()])
    };
    Ok([row(&rows[0])?, row(&rows[1])?])
}

fn jacobi_cmd(ctx: &Ctx, cmd: &JacobiCmd) -> Result<Value> {
    let l = ctx.lattice(Some(DEFAULT_SPEC))?;
    let fr = JacobiFrame::new(&l)?;
    let k = fr.l0_rank();
    match cmd {
        JacobiCmd::Embed => {
            let g = if let Some(a) = ctx.payload.get("a") {
                fr.jacobi_embed(&sl2(a)?)?
            } else {
                let z = parse_int(ctx.field("z")?)?;
                fr.heis_embed(&ctx.int_vec("u", k)?, &ctx.int_vec("v", k)?, &z)?
            };
            let mut out = describe(&l, &g)?;
            out["frameMatrix"] = matrix_json(&fr.to_frame(g.matrix()));
            Ok(out)
        }
        JacobiCmd::Verify => {
            let u = match ctx.payload.get("u") {
                Some(_) => ctx.int_vec("u", k)?,
                None => (0..k)
                    .map(|i| if i == 0 { Int::one() } else { Int::zero() })
                    .collect(),
            };
            let mut checks: Vec<Value> = fr
                .verify_sigma1_identities(&u)?
                .into_iter()
                .map(|c| json!({"name": c.name, "holds": c.holds}))
                .collect();
            let one = |a: i64, b: i64, c: i64, d: i64| {
                [[Int::from(a), Int::from(b)], [Int::from(c), Int::from(d)]]
            };
            let (e, f, e1, f1) = (
                fr.vector("e"),
                fr.vector("f"),
                fr.vector("e1"),
                fr.vector("f1"),
            );
            let t_ef1 = IsometryMap::transvection(&l, &e, &f1)?;
            let t_fe1 = IsometryMap::transvection(&l, &f, &e1)?;
            checks.push(json!({"name": "[[1,1],[0,1]] = t(e,f1)", "holds": fr.jacobi_embed(&one(1, 1, 0, 1))? == t_ef1}));
            checks.push(json!({"name": "[[1,0],[-1,1]] = t(f,e1)", "holds": fr.jacobi_embed(&one(1, 0, -1, 1))? == t_fe1}));
            let ts: Vec<u64> = match ctx.payload.get("t") {
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| usage("\"t\" must be an array"))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .filter(|&t| t > 0 && t < 1 << 20)
                            .ok_or_else(|| usage("t must be a positive integer"))
                    })
                    .collect::<Result<_>>()?,
                None => vec![1, 2, 5],
            };
            let mut paramodular = Vec::new();
            for t in ts {
                let r = paramodular_jt_check(t)?;
                paramodular.push(json!({
                    "t": t,
                    "matrixMatches": r.matrix_matches,
                    "mirrorsHaveNormTwo": r.mirrors_have_norm_two,
                    "detOne": r.det_one,
                    "involution": r.involution,
                    "generatorsStablePlus": r.generators_stable_plus,
                }));
            }
            Ok(json!({"u": int_vec_json(&u), "checks": checks, "paramodular": paramodular}))
        }
    }
}

fn certificate_json(l: &Lattice, c: &CommutatorCertificate) -> Result<Value> {
    let verified = c.verify(l)?;
    let sn = spinor_norm_q(l, &c.target)?;
    Ok(json!({
        "target": matrix_json(c.target.matrix()),
        "commutators": c.commutators.iter().map(|(x, y)| json!({"x": word_json(x), "y": word_json(y)})).collect::<Vec<_>>(),
        "word": word_json(&c.word),
        "expansion": c.expansion.as_ref().map(word_json),
        "scope": match c.scope { Scope::Rational => "rational", Scope::Integral => "integral" },
        "commutatorShape": c.has_commutator_shape(),
        "targetDet": rat_json(&c.target.det()),
        "targetSpinorNormQ": int_json(sn.value()),
        "verified": verified,
    }))
}

fn witness_cmd(ctx: &Ctx, cmd: &WitnessCmd) -> Result<Value> {
    let l = ctx.lattice(Some(DEFAULT_SPEC))?;
    let n = l.rank();
    let fg = Forge::new(&l)?;
    let cert = match cmd {
        WitnessCmd::Master => {
            let w = ctx.rat_vec("w", n)?;
            let s = parse_rat(ctx.field("s")?)?;
            return Ok(json!({"holds": fg.verify_master_identity(&w, &s)?}));
        }
        WitnessCmd::P4 | WitnessCmd::Commutator { target: Target::P4 } => {
            let v6 = match ctx.payload.get("v6") {
                Some(_) => Some(ctx.rat_vec("v6", n)?),
                None => None,
            };
            fg.certificate_p4(v6.as_deref())?
        }
        WitnessCmd::Transvection
        | WitnessCmd::Commutator {
            target: Target::Transvection,
        } => fg.certificate_transvection(&ctx.rat_vec("u", n)?)?,
        WitnessCmd::Commutator {
            target: Target::Heisenberg,
        } => fg.heisenberg_commutator(&parse_rat(ctx.field("s")?)?, &ctx.rat_vec("u", n)?)?,
        WitnessCmd::Commutator {
            target: Target::Triple,
        } => {
            let s = parse_rat(ctx.field("s")?)?;
            fg.triple_product(&s, &ctx.rat_vec("u", n)?, &ctx.rat_vec("v", n)?)?
        }
    };
    certificate_json(&l, &cert)
}
