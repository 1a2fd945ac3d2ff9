//! Canonical JSON for every type that crosses the command line. Keys come out
//! sorted (serde_json's default map is ordered) and every number that is not
//! a small count is a string, so files diff cleanly and round-trip exactly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

use qfalab_core::exactnum::{Exponents, PRIMES};
use qfalab_core::harness::{CollisionReport, EndToEndReport};
use qfalab_core::kronpoly::{KronPlan, PlanPolynomial, Position};
use qfalab_core::mmpcp::{MixedSolution, MmpcpInstance};
use qfalab_core::polypack::Polynomial;
use qfalab_core::qfa::{InitialFold, Qfa, RadicalGenerator, RadicalQfa};
use qfalab_core::{RadicalSignature, RatMatrix, Rational, Word};

/// Input that does not match a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, FormatError> {
    v.get(key).ok_or_else(|| FormatError(format!("missing field \"{key}\"")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str, FormatError> {
    v.as_str().ok_or_else(|| FormatError(format!("{what} must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| FormatError(format!("{what} must be an array")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| FormatError(format!("{what} must be an object")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| FormatError(format!("{what} must be a non-negative integer")))
}

fn as_bool(v: &Value, what: &str) -> Result<bool, FormatError> {
    v.as_bool().ok_or_else(|| FormatError(format!("{what} must be a boolean")))
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>, FormatError> {
    as_array(v, what)?.iter().map(|x| as_str(x, what).map(String::from)).collect()
}

/// Pretty-printed with a trailing newline; the form written to files.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn parse_text(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError(format!("invalid JSON: {e}")))
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rational_from_json(v: &Value) -> Result<Rational, FormatError> {
    let s = as_str(v, "rational")?;
    s.parse().map_err(|e| FormatError(format!("bad rational \"{s}\": {e}")))
}

pub fn matrix_to_json(m: &RatMatrix) -> Value {
    let rows: Vec<Value> = m.to_rows().iter().map(|r| r.iter().map(rational_to_json).collect()).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

pub fn matrix_from_json(v: &Value) -> Result<RatMatrix, FormatError> {
    let rows = as_usize(field(v, "rows")?, "rows")?;
    let cols = as_usize(field(v, "cols")?, "cols")?;
    let entries = as_array(field(v, "entries")?, "entries")?;
    if entries.len() != rows {
        return err(format!("expected {rows} rows, found {}", entries.len()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in entries {
        let row = as_array(row, "matrix row")?;
        if row.len() != cols {
            return err(format!("expected {cols} columns, found {}", row.len()));
        }
        for x in row {
            data.push(rational_from_json(x)?);
        }
    }
    RatMatrix::new(rows, cols, data).map_err(|e| FormatError(e.to_string()))
}

pub fn qfa_to_json(q: &Qfa) -> Value {
    let mut gens = Map::new();
    for (name, m) in q.generators() {
        gens.insert(name.clone(), matrix_to_json(m));
    }
    let letters: Vec<&String> = q.generators().iter().map(|(n, _)| n).collect();
    json!({
        "dimension": q.dimension(),
        "projection": matrix_to_json(q.projection()),
        "generators": gens,
        "letters": letters,
        "initial": q.initial().iter().map(rational_to_json).collect::<Vec<_>>(),
    })
}

/// Letter order: the `letters` list when present, else the generator names
/// in key order.
fn letter_order(v: &Value, table: &Map<String, Value>) -> Result<Vec<String>, FormatError> {
    let names = match v.get("letters") {
        Some(l) => string_list(l, "letters")?,
        None => table.keys().cloned().collect(),
    };
    if names.len() != table.len() || names.iter().any(|n| !table.contains_key(n)) {
        return err("letters must list every generator exactly once");
    }
    Ok(names)
}

pub fn qfa_from_json(v: &Value) -> Result<Qfa, FormatError> {
    let dim = as_usize(field(v, "dimension")?, "dimension")?;
    let projection = matrix_from_json(field(v, "projection")?)?;
    let table = as_object(field(v, "generators")?, "generators")?;
    let mut gens = Vec::new();
    for name in letter_order(v, table)? {
        gens.push((name.clone(), matrix_from_json(&table[&name])?));
    }
    let initial = as_array(field(v, "initial")?, "initial")?
        .iter()
        .map(rational_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let q = Qfa::new(projection, gens, initial).map_err(|e| FormatError(e.to_string()))?;
    if q.dimension() != dim {
        return err(format!("dimension {dim} does not match the matrices ({})", q.dimension()));
    }
    Ok(q)
}

pub fn radical_to_json(q: &RadicalQfa) -> Value {
    let mut blocks = Map::new();
    for g in q.generators() {
        let mut b = Map::new();
        b.insert("left".into(), matrix_to_json(&g.left));
        b.insert("right".into(), matrix_to_json(&g.right));
        if let Some(c) = g.corner {
            b.insert("corner".into(), json!(c));
        }
        blocks.insert(g.name.clone(), Value::Object(b));
    }
    let mut out = Map::new();
    out.insert("kind".into(), json!("radical"));
    out.insert("ambiguity".into(), json!(q.is_ambiguity_extended()));
    out.insert("dimension".into(), json!(q.dimension()));
    out.insert("letters".into(), json!(q.generators().iter().map(|g| &g.name).collect::<Vec<_>>()));
    out.insert("blocks".into(), Value::Object(blocks));
    if let Some(fold) = q.initial_fold() {
        out.insert("initial_fold".into(), json!({ "left": matrix_to_json(&fold.left), "right": matrix_to_json(&fold.right) }));
    }
    Value::Object(out)
}

pub fn radical_from_json(v: &Value) -> Result<RadicalQfa, FormatError> {
    if as_str(field(v, "kind")?, "kind")? != "radical" {
        return err("kind must be \"radical\"");
    }
    let ambiguity = as_bool(field(v, "ambiguity")?, "ambiguity")?;
    let table = as_object(field(v, "blocks")?, "blocks")?;
    let mut gens = Vec::new();
    for name in letter_order(v, table)? {
        let b = &table[&name];
        let corner = match b.get("corner") {
            None => None,
            Some(c) => Some(
                c.as_i64()
                    .and_then(|x| i8::try_from(x).ok())
                    .ok_or_else(|| FormatError("corner must be 1 or -1".into()))?,
            ),
        };
        gens.push(RadicalGenerator {
            name,
            left: matrix_from_json(field(b, "left")?)?,
            right: matrix_from_json(field(b, "right")?)?,
            corner,
        });
    }
    let fold = match v.get("initial_fold") {
        None => None,
        Some(f) => Some(InitialFold { left: matrix_from_json(field(f, "left")?)?, right: matrix_from_json(field(f, "right")?)? }),
    };
    let q = RadicalQfa::new(gens, ambiguity, fold).map_err(|e| FormatError(e.to_string()))?;
    if let Some(d) = v.get("dimension") {
        if as_usize(d, "dimension")? != q.dimension() {
            return err("dimension does not match the ambiguity flag");
        }
    }
    Ok(q)
}

/// Either automaton kind, told apart by the `kind` field.
#[derive(Debug, Clone)]
pub enum AnyQfa {
    Rational(Qfa),
    Radical(RadicalQfa),
}

impl AnyQfa {
    pub fn letter_names(&self) -> Vec<String> {
        match self {
            AnyQfa::Rational(q) => q.generators().iter().map(|(n, _)| n.clone()).collect(),
            AnyQfa::Radical(q) => q.generators().iter().map(|g| g.name.clone()).collect(),
        }
    }

    /// Full generator matrices with their names.
    pub fn bases(&self) -> Vec<(String, RatMatrix)> {
        match self {
            AnyQfa::Rational(q) => q.generators().to_vec(),
            AnyQfa::Radical(q) => q.generators().iter().map(|g| (g.name.clone(), g.matrix())).collect(),
        }
    }
}

pub fn any_qfa_from_json(v: &Value) -> Result<AnyQfa, FormatError> {
    if v.get("kind").is_some() {
        radical_from_json(v).map(AnyQfa::Radical)
    } else {
        qfa_from_json(v).map(AnyQfa::Rational)
    }
}

/// Reads `"x1 x3"`, generator names, or `"ε"`/empty for the empty word.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, FormatError> {
    let mut ix = Vec::new();
    let t = text.trim();
    if !(t.is_empty() || t == "ε") {
        for tok in t.split_whitespace() {
            let i = match names.iter().position(|n| n == tok) {
                Some(i) => i + 1,
                None => tok
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| FormatError(format!("unknown letter \"{tok}\"")))?,
            };
            ix.push(i);
        }
    }
    Word::from_indices(&ix, names.len()).map_err(|e| FormatError(e.to_string()))
}

pub fn instance_to_json(inst: &MmpcpInstance) -> Value {
    let images = |pick: fn(&MmpcpInstance) -> &[Vec<usize>]| -> Map<String, Value> {
        inst.sigma()
            .iter()
            .zip(pick(inst))
            .map(|(s, img)| (s.clone(), Value::String(inst.target_text(img))))
            .collect()
    };
    json!({
        "sigma": inst.sigma(),
        "delta": inst.delta(),
        "h": images(MmpcpInstance::h),
        "g": images(MmpcpInstance::g),
        "claus": inst.is_claus(),
    })
}

pub fn instance_from_json(v: &Value) -> Result<MmpcpInstance, FormatError> {
    let sigma = string_list(field(v, "sigma")?, "sigma")?;
    let delta = string_list(field(v, "delta")?, "delta")?;
    let map = |key: &str| -> Result<Vec<(String, String)>, FormatError> {
        as_object(field(v, key)?, key)?
            .iter()
            .map(|(k, x)| Ok((k.clone(), as_str(x, "image")?.to_string())))
            .collect()
    };
    let claus = match v.get("claus") {
        Some(c) => as_bool(c, "claus")?,
        None => false,
    };
    MmpcpInstance::from_named(sigma, delta, &map("h")?, &map("g")?, claus).map_err(|e| FormatError(e.to_string()))
}

pub fn solution_to_json(inst: &MmpcpInstance, sol: &MixedSolution) -> Value {
    let sels = |s: &[qfalab_core::mmpcp::Selector]| s.iter().map(|x| x.as_str()).collect::<Vec<_>>();
    json!({
        "word": sol.word.iter().map(|&i| inst.sigma()[i].as_str()).collect::<Vec<_>>(),
        "sel_a": sels(&sol.sel_a),
        "sel_b": sels(&sol.sel_b),
        "image": inst.target_text(&inst.apply(&sol.word, &sol.sel_a)),
    })
}

pub fn signature_to_json(s: &RadicalSignature) -> Value {
    Value::Array(
        s.terms()
            .map(|(e, c)| json!({ "exponents": e.to_vec(), "coeff": rational_to_json(c) }))
            .collect(),
    )
}

pub fn signature_from_json(v: &Value) -> Result<RadicalSignature, FormatError> {
    let mut s = RadicalSignature::new();
    for t in as_array(v, "signature")? {
        let raw = as_array(field(t, "exponents")?, "exponents")?;
        if raw.len() != PRIMES.len() {
            return err("exponents need six entries");
        }
        let mut e: Exponents = [0; 6];
        for (slot, x) in e.iter_mut().zip(raw) {
            *slot = x.as_u64().and_then(|n| u8::try_from(n).ok()).filter(|&n| n <= 3).ok_or_else(|| {
                FormatError("exponents are quarter powers in 0..=3".into())
            })?;
        }
        let term = RadicalSignature::monomial(e, rational_from_json(field(t, "coeff")?)?)
            .map_err(|e| FormatError(e.to_string()))?;
        s = &s + &term;
    }
    Ok(s)
}

/// Decimal text of `n / 10^digits`.
pub fn scaled_decimal(n: &BigInt, digits: u32) -> String {
    let neg = n.sign() == num_bigint::Sign::Minus;
    let mut s = n.magnitude().to_string();
    let d = digits as usize;
    if s.len() <= d {
        s = "0".repeat(d + 1 - s.len()) + &s;
    }
    let (int, frac) = s.split_at(s.len() - d);
    let body = if d == 0 { int.to_string() } else { format!("{int}.{frac}") };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn rational_decimal(r: &Rational, digits: u32) -> String {
    scaled_decimal(&r.round_scaled(digits), digits)
}

/// Collision value that knows its own JSON and decimal forms.
pub trait ReportValue {
    fn to_json(&self) -> Value;
    /// Acceptance probability to `digits` decimal places.
    fn decimal(&self, digits: u32) -> String;
}

impl ReportValue for Rational {
    fn to_json(&self) -> Value {
        rational_to_json(self)
    }

    fn decimal(&self, digits: u32) -> String {
        rational_decimal(self, digits)
    }
}

impl ReportValue for RadicalSignature {
    fn to_json(&self) -> Value {
        signature_to_json(self)
    }

    fn decimal(&self, digits: u32) -> String {
        signature_probability(self, digits)
    }
}

/// `s / N` with `N = sum sqrt(p_i)`, to `digits` places.
pub fn signature_probability(s: &RadicalSignature, digits: u32) -> String {
    let guard = digits + 12;
    let num = s.approx_scaled(guard);
    let den = qfalab_core::qfa::normalizer().approx_scaled(guard);
    let q = num * BigInt::from(10u32).pow(digits) / den;
    scaled_decimal(&q, digits)
}

pub fn collision_report_to_json<V: ReportValue>(r: &CollisionReport<V>, float: Option<u32>) -> Value {
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|p| {
            let mut o = Map::new();
            o.insert("first".into(), json!(p.first.to_string()));
            o.insert("second".into(), json!(p.second.to_string()));
            o.insert("value".into(), p.value.to_json());
            if let Some(d) = float {
                o.insert("float".into(), json!(p.value.decimal(d)));
            }
            Value::Object(o)
        })
        .collect();
    json!({
        "status": if r.is_injective() { "injective" } else { "collision" },
        "max_len": r.max_len,
        "words_checked": r.words_checked,
        "digest": format!("{:016x}", r.digest),
        "pairs": pairs,
    })
}

pub fn end_to_end_to_json(inst: &MmpcpInstance, r: &EndToEndReport, float: Option<u32>) -> Value {
    json!({
        "verdict": r.verdict.as_str(),
        "solution": r.solution.as_ref().map(|s| solution_to_json(inst, s)),
        "solution_words": r.solution_words.as_ref().map(|(a, b)| json!([a.to_string(), b.to_string()])),
        "collisions": collision_report_to_json(&r.collisions, float),
        "converse_checked": r.converse_checked,
        "issues": r.issues,
    })
}

fn biguint_to_json(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

fn biguint_from_json(v: &Value, what: &str) -> Result<BigUint, FormatError> {
    let s = as_str(v, what)?;
    s.parse().map_err(|_| FormatError(format!("{what} must be a decimal integer string")))
}

fn positions_from_json(v: &Value) -> Result<Vec<Position>, FormatError> {
    as_array(v, "positions")?
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([r, c]) => Ok(Position::new(as_usize(r, "row")?, as_usize(c, "col")?)),
            _ => err("positions are [row, col] pairs"),
        })
        .collect()
}

pub fn plan_to_json(p: &KronPlan) -> Value {
    let mut out = Map::new();
    out.insert("n".into(), json!(p.n()));
    out.insert("positions".into(), json!(p.positions().iter().map(|q| [q.row, q.col]).collect::<Vec<_>>()));
    match p.polynomial() {
        PlanPolynomial::Terms(ts) => {
            let terms: Vec<Value> = ts
                .iter()
                .map(|t| {
                    json!({
                        "coeff": biguint_to_json(&t.coeff),
                        "exponents": t.exponents,
                        "split": t.split,
                        "index": [t.index.s, t.index.r],
                    })
                })
                .collect();
            out.insert("terms".into(), Value::Array(terms));
        }
        PlanPolynomial::Nested { arity } => {
            out.insert("nested".into(), json!(arity));
        }
    }
    out.insert("total_weight".into(), biguint_to_json(p.total_weight()));
    out.insert("delta".into(), biguint_to_json(p.delta()));
    out.insert("delta_split".into(), json!(p.delta_split()));
    Value::Object(out)
}

/// Rebuilds a plan from `n`, `positions` and either `terms` (coefficient and
/// exponents are read; derived fields, when present, must agree) or
/// `nested`.
pub fn plan_from_json(v: &Value) -> Result<KronPlan, FormatError> {
    let n = as_usize(field(v, "n")?, "n")?;
    let positions = positions_from_json(field(v, "positions")?)?;
    let plan = if let Some(a) = v.get("nested") {
        let arity = as_usize(a, "nested")?;
        if arity != positions.len() {
            return err("nested arity must equal the number of positions");
        }
        KronPlan::nested(n, positions).map_err(|e| FormatError(e.to_string()))?
    } else {
        let mut terms = Vec::new();
        for t in as_array(field(v, "terms")?, "terms")? {
            let coeff = biguint_from_json(field(t, "coeff")?, "coeff")?;
            let exps = as_array(field(t, "exponents")?, "exponents")?
                .iter()
                .map(|e| e.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| FormatError("bad exponent".into())))
                .collect::<Result<Vec<u32>, _>>()?;
            terms.push((exps, coeff));
        }
        let poly = Polynomial::from_terms(positions.len(), terms).map_err(|e| FormatError(e.to_string()))?;
        KronPlan::from_polynomial(n, positions, &poly).map_err(|e| FormatError(e.to_string()))?
    };
    if let Some(d) = v.get("delta") {
        if &biguint_from_json(d, "delta")? != plan.delta() {
            return err("delta does not match the polynomial");
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfalab_core::qfa::example_one;
    use qfalab_core::reduction::{claus_trim, compile_ambiguity, compile_injectivity};

    fn instance() -> MmpcpInstance {
        let v = parse_text(r#"{"sigma":["s1","s2"],"delta":["d1","d2"],"h":{"s1":"d1 d2","s2":"d2"},"g":{"s1":"d1","s2":"d2 d2"},"claus":true}"#).unwrap();
        instance_from_json(&v).unwrap()
    }

    #[test]
    fn rational_and_matrix_round_trip() {
        let m = RatMatrix::from_rows(vec![vec![Rational::frac(3, 5), Rational::frac(-4, 5)], vec![Rational::frac(4, 5), Rational::frac(3, 5)]]).unwrap();
        let v = matrix_to_json(&m);
        assert_eq!(v["entries"][0][1], json!("-4/5"));
        assert_eq!(matrix_from_json(&v).unwrap(), m);
        assert!(matrix_from_json(&json!({"rows":1,"cols":2,"entries":[["1"]]})).is_err());
        assert!(rational_from_json(&json!("1/0")).is_err());
        assert_eq!(rational_from_json(&json!("6/4")).unwrap(), Rational::frac(3, 2));
    }

    #[test]
    fn automata_round_trip_byte_for_byte() {
        let inst = instance();
        for q in [compile_injectivity(&inst).unwrap(), compile_ambiguity(&inst).unwrap(), claus_trim(&inst).unwrap()] {
            let text = to_text(&radical_to_json(&q));
            let back = radical_from_json(&parse_text(&text).unwrap()).unwrap();
            assert_eq!(back, q);
            assert_eq!(to_text(&radical_to_json(&back)), text);
        }
        let q = example_one();
        let text = to_text(&qfa_to_json(&q));
        assert!(matches!(any_qfa_from_json(&parse_text(&text).unwrap()).unwrap(), AnyQfa::Rational(_)));
        assert_eq!(to_text(&qfa_to_json(&qfa_from_json(&parse_text(&text).unwrap()).unwrap())), text);
    }

    #[test]
    fn instance_round_trip() {
        let inst = instance();
        assert_eq!(instance_from_json(&instance_to_json(&inst)).unwrap(), inst);
        assert!(instance_from_json(&json!({"sigma":["s1"],"delta":["d1"],"h":{"s1":"d9"},"g":{"s1":"d1"}})).is_err());
    }

    #[test]
    fn signatures_round_trip() {
        let q = compile_injectivity(&instance()).unwrap();
        let w = parse_word("x1 x3", &q.generators().iter().map(|g| g.name.clone()).collect::<Vec<_>>()).unwrap();
        let s = qfalab_core::qfa::accept_signature(&q, &w).unwrap();
        assert_eq!(signature_from_json(&signature_to_json(&s)).unwrap(), s);
        assert_eq!(signature_probability(&qfalab_core::qfa::normalizer(), 10), "1.0000000000");
    }

    #[test]
    fn words_by_index_or_name() {
        let names = vec!["L:s1:H".to_string(), "L:s1:G".to_string()];
        assert_eq!(parse_word("x2 L:s1:H", &names).unwrap().to_string(), "x2 x1");
        assert_eq!(parse_word("ε", &names).unwrap(), Word::empty());
        assert!(parse_word("x3", &names).is_err());
        assert!(parse_word("y", &names).is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(scaled_decimal(&BigInt::from(-5), 3), "-0.005");
        assert_eq!(scaled_decimal(&BigInt::from(12345), 2), "123.45");
        assert_eq!(rational_decimal(&Rational::frac(9, 25), 4), "0.3600");
    }

    #[test]
    fn plans_round_trip() {
        let poly = qfalab_core::polypack::f2_polynomial();
        let plan = KronPlan::from_polynomial(2, vec![Position::new(1, 1), Position::new(1, 2)], &poly).unwrap();
        let v = plan_to_json(&plan);
        assert_eq!(plan_from_json(&v).unwrap(), plan);
        let nested = KronPlan::f6();
        assert_eq!(plan_from_json(&plan_to_json(&nested)).unwrap(), nested);
        let mut bad = v.clone();
        bad["delta"] = json!("5");
        assert!(plan_from_json(&bad).is_err());
    }
}
