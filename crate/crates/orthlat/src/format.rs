//! JSON encodings and the block-spec mini-language.
//!
//! Integers and rationals travel as decimal strings (`"-7"`, `"3/4"`);
//! plain JSON integers are accepted on input.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use orthlat_core::{Atom, Block, GroupWord, Int, Lattice, Mat, Rat};
use serde_json::{json, Value};

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad argv or malformed payload; exit code 2.
    Usage(String),
    /// The library rejected well-formed input; exit code 1.
    Domain(orthlat_core::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Failure::Usage(msg) => json!({"error": "Usage", "detail": msg}),
            Failure::Domain(e) => json!({"error": e.code(), "detail": e.to_string()}),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage: {msg}"),
            Failure::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<orthlat_core::Error> for Failure {
    fn from(e: orthlat_core::Error) -> Self {
        Failure::Domain(e)
    }
}

pub type Result<T> = std::result::Result<T, Failure>;

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn parse_int_str(s: &str) -> Result<Int> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| bad(format!("not an integer: {s:?}")))
}

pub fn parse_rat_str(s: &str) -> Result<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int_str(d)?;
            if d.is_zero() {
                return Err(bad(format!("zero denominator: {s:?}")));
            }
            Ok(Rat::new(parse_int_str(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_int_str(s)?)),
    }
}

pub fn parse_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat_str(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rat_str(&n.to_string()),
        _ => Err(bad(format!("expected a decimal string, got {v}"))),
    }
}

pub fn parse_int(v: &Value) -> Result<Int> {
    let r = parse_rat(v)?;
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(bad(format!("expected an integer, got {v}")))
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be a JSON array")))
}

pub fn parse_rat_vec(v: &Value) -> Result<Vec<Rat>> {
    array(v, "vector")?.iter().map(parse_rat).collect()
}

pub fn parse_int_vec(v: &Value) -> Result<Vec<Int>> {
    array(v, "vector")?.iter().map(parse_int).collect()
}

pub fn parse_matrix(v: &Value) -> Result<Mat> {
    let rows: Vec<Vec<Rat>> = array(v, "matrix")?
        .iter()
        .map(parse_rat_vec)
        .collect::<Result<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
        return Err(bad("matrix rows must be non-empty and of equal length"));
    }
    Ok(Mat::from_rat_rows(&rows))
}

pub fn rat_json(x: &Rat) -> Value {
    Value::String(x.to_string())
}

pub fn int_json(x: &Int) -> Value {
    Value::String(x.to_string())
}

pub fn rat_vec_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

pub fn int_vec_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn matrix_json(m: &Mat) -> Value {
    Value::Array(m.to_rat_rows().iter().map(|r| rat_vec_json(r)).collect())
}

/// `{"gram": [[...]], "labels": [...]}`.
pub fn lattice_json(l: &Lattice) -> Value {
    json!({
        "gram": Value::Array(l.gram_int().iter().map(|r| int_vec_json(r)).collect()),
        "labels": l.labels(),
    })
}

pub fn parse_lattice(v: &Value) -> Result<Lattice> {
    let gram = v
        .get("gram")
        .ok_or_else(|| bad("lattice JSON needs a \"gram\" field"))?;
    let rows: Vec<Vec<Int>> = array(gram, "gram")?
        .iter()
        .map(parse_int_vec)
        .collect::<Result<_>>()?;
    if rows.len() > MAX_RANK {
        return Err(bad(format!("rank {} exceeds {MAX_RANK}", rows.len())));
    }
    let labels = match v.get("labels") {
        None | Some(Value::Null) => None,
        Some(l) => Some(
            array(l, "labels")?
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(String::from)
                        .ok_or_else(|| bad("labels must be strings"))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    Ok(Lattice::new(rows, labels)?)
}

pub fn atom_json(a: &Atom) -> Value {
    match a {
        Atom::Reflection(v) => json!({"type": "reflection", "v": rat_vec_json(v)}),
        Atom::Transvection { e, a } => {
            json!({"type": "transvection", "e": rat_vec_json(e), "a": rat_vec_json(a)})
        }
        Atom::Inverse(inner) => json!({"type": "inverse", "atom": atom_json(inner)}),
    }
}

pub fn word_json(w: &GroupWord) -> Value {
    Value::Array(w.atoms().iter().map(atom_json).collect())
}

pub fn parse_atom(v: &Value) -> Result<Atom> {
    let field = |k: &str| {
        v.get(k)
            .ok_or_else(|| bad(format!("atom needs field {k:?}")))
    };
    match v.get("type").and_then(Value::as_str) {
        Some("reflection") => Ok(Atom::Reflection(parse_rat_vec(field("v")?)?)),
        Some("transvection") => Ok(Atom::transvection(
            parse_rat_vec(field("e")?)?,
            parse_rat_vec(field("a")?)?,
        )),
        Some("inverse") => Ok(Atom::Inverse(Box::new(parse_atom(field("atom")?)?))),
        _ => Err(bad("atom type must be reflection, transvection or inverse")),
    }
}

pub fn parse_word(v: &Value) -> Result<GroupWord> {
    Ok(GroupWord::new(
        array(v, "word")?
            .iter()
            .map(parse_atom)
            .collect::<Result<_>>()?,
    ))
}

/// Parse a block spec such as `2U+2E8(-1)+<-6>`, `U(2)+U+E8(-2)` or `2U+A2(-3)`.
pub fn parse_block_spec(spec: &str) -> Result<Block> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad("empty block spec"));
    }
    let mut blocks = Vec::new();
    for term in split_terms(&s) {
        blocks.push(
            parse_term(term)
                .ok_or_else(|| bad(format!("cannot parse block {term:?} in {spec:?}")))?,
        );
    }
    Ok(if blocks.len() == 1 {
        blocks.pop().unwrap()
    } else {
        Block::Sum(blocks)
    })
}

/// Split on `+` outside `<...>` and `(...)`.
fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '<' | '(' => depth += 1,
            '>' | ')' => depth -= 1,
            '+' if depth == 0 && i > start => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_term(term: &str) -> Option<Block> {
    let digits = term.chars().take_while(char::is_ascii_digit).count();
    let count: usize = if digits == 0 {
        1
    } else {
        term[..digits].parse().ok()?
    };
    let rest = &term[digits..];
    if count == 0 || count > MAX_RANK {
        return None;
    }
    let base = if let Some(inner) = rest.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        let n: i64 = inner.parse().ok()?;
        if n == 0 {
            return None;
        }
        Block::rank1(n)
    } else {
        let (name, scale) = match rest.find('(') {
            Some(p) => {
                let inner = rest[p + 1..].strip_suffix(')')?;
                let m: i64 = inner.parse().ok()?;
                if m == 0 {
                    return None;
                }
                (&rest[..p], Some(m))
            }
            None => (rest, None),
        };
        let b = match name {
            "U" => Block::u(),
            "E8" => Block::E8,
            "A2" => Block::A2,
            _ => return None,
        };
        match scale {
            Some(m) if m != 1 => b.scaled(m),
            _ => b,
        }
    };
    Some(if count == 1 { base } else { base.repeat(count) })
}

/// Largest rank the CLI will build from a spec or Gram matrix.
pub const MAX_RANK: usize = 64;

pub fn lattice_from_spec(spec: &str) -> Result<Lattice> {
    let block = parse_block_spec(spec)?;
    if block.rank() > MAX_RANK {
        return Err(bad(format!("rank {} exceeds {MAX_RANK}", block.rank())));
    }
    Ok(Lattice::build(&block)?)
}
