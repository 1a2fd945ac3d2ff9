//! Acceptance suite: one line per criterion with its verdict and runtime.
//! Built with `harness = false` so the lines always print.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfalab_core::exactnum::{radsig_to_float, RadicalSignature, Rational};
use qfalab_core::harness::{
    end_to_end, enumerate_uniqueness, freeness_enumeration, power_distinctness, verify_lemma_identities, Verdict,
    DEFAULT_BUDGET,
};
use qfalab_core::kronpoly::{build_dense, build_initial_vector, eval_lazy, KronPlan, Position};
use qfalab_core::mmpcp::MmpcpInstance;
use qfalab_core::polypack::{cantor_pair, complete_square, f2, four_squares, injectivity_scan, Polynomial};
use qfalab_core::qfa::{accept_rational, example_one, validate};
use qfalab_core::quaternion::gamma2;
use qfalab_core::reduction::{claus_trim, compile_ambiguity, compile_injectivity, generator_name, GeneratorTag};
use qfalab_core::words::{free_reduce, Gen};
use qfalab_core::{QuatRat, RatMatrix, Word};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q25(a: i64, b: i64, c: i64, d: i64) -> QuatRat {
    let f = |n| Rational::frac(n, 25);
    QuatRat::new(f(a), f(b), f(c), f(d))
}

fn sign_identities() -> Outcome {
    let n = verify_lemma_identities(1000, 20, 2024).map_err(|c| format!("{} under {:?}", c.word, c.transform))?;
    Ok(format!("{n} reduced words, all four identities exact"))
}

fn key_uniqueness() -> Outcome {
    let n = enumerate_uniqueness(3, 4).map_err(|e| e.to_string())?;
    ensure(n == 120, || format!("{n} words checked, expected 120"))?;
    let ab = gamma2(&free_reduce([(Gen::A, 1), (Gen::B, 1)]));
    let ba = gamma2(&free_reduce([(Gen::B, 1), (Gen::A, 1)]));
    ensure(ab == q25(9, 12, 12, -16), || format!("ab -> {ab}"))?;
    ensure(ba == q25(9, 12, 12, 16), || format!("ba -> {ba}"))?;
    let key = |q: &QuatRat| [q.a.abs(), q.b.abs(), q.c.abs()];
    ensure(key(&ab) == key(&ba), || "foil quaternions should share the abs triple".into())?;
    Ok("120 keys distinct, unit top rows, ab/ba = (9,12,12,-/+16)/25".into())
}

fn freeness() -> Outcome {
    let (distinct, words) = freeness_enumeration(10);
    ensure(words == 2046 && distinct == 2046, || format!("{distinct} distinct of {words}"))?;
    Ok("2046 distinct products".into())
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn instance(h: Vec<Vec<usize>>, g: Vec<Vec<usize>>, delta: usize, claus: bool) -> MmpcpInstance {
    MmpcpInstance::new(names("s", h.len()), names("d", delta), h, g, claus).unwrap()
}

fn reduction_structure() -> Outcome {
    let samples = [
        instance(vec![vec![0]], vec![vec![0, 0]], 1, false),
        instance(vec![vec![0, 1], vec![1]], vec![vec![0], vec![1, 1]], 2, true),
        instance(vec![vec![0], vec![1, 0], vec![2]], vec![vec![1], vec![0], vec![1, 2]], 3, true),
    ];
    for inst in &samples {
        let k = inst.sigma().len();
        let inj = compile_injectivity(inst).map_err(|e| e.to_string())?;
        ensure(inj.dimension() == 8 && inj.alphabet_size() == 2 * k, || "injectivity automaton shape".into())?;
        for g in inj.generators() {
            let m = g.matrix();
            ensure(m.shape() == (8, 8) && m.is_orthogonal(), || format!("{} is not 8x8 orthogonal", g.name))?;
        }
        let amb = compile_ambiguity(inst).map_err(|e| e.to_string())?;
        ensure(amb.dimension() == 9 && amb.alphabet_size() == 2 * k, || "ambiguity automaton shape".into())?;
        let corner_name = generator_name(inst, GeneratorTag { source: 0, selector: qfalab_core::mmpcp::Selector::H });
        for g in amb.generators() {
            let m = g.matrix();
            ensure(m.shape() == (9, 9) && m.is_orthogonal(), || format!("{} is not 9x9 orthogonal", g.name))?;
            let want = if g.name == corner_name { -1 } else { 1 };
            ensure(g.corner == Some(want), || format!("{} has corner {:?}", g.name, g.corner))?;
        }
        if inst.is_claus() {
            let t = claus_trim(inst).map_err(|e| e.to_string())?;
            ensure(t.alphabet_size() == 2 * k - 1, || format!("trim kept {} generators", t.alphabet_size()))?;
            ensure(t.generators().iter().all(|g| g.matrix().is_orthogonal()), || "trimmed generator not orthogonal".into())?;
        }
    }
    Ok("8-state and 9-state orthogonal generators, 2|S|-1 after trimming".into())
}

/// Every one-letter instance with images of length 1 or 2 over two target
/// letters, plus a handful of two-letter instances.
fn toy_instances() -> Vec<(MmpcpInstance, usize)> {
    let images: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
    let mut out = Vec::new();
    for h in &images {
        for g in &images {
            out.push((instance(vec![h.clone()], vec![g.clone()], 2, false), 6));
        }
    }
    let two = [
        (vec![vec![0], vec![0, 0]], vec![vec![0, 0], vec![0]]),
        (vec![vec![0, 1], vec![1]], vec![vec![0], vec![1, 1]]),
        (vec![vec![0, 1], vec![1]], vec![vec![0, 1], vec![1]]),
        (vec![vec![0], vec![1]], vec![vec![1], vec![0]]),
        (vec![vec![0, 0], vec![1]], vec![vec![0], vec![0, 1]]),
        (vec![vec![1, 0], vec![0]], vec![vec![1], vec![0, 0]]),
    ];
    for (h, g) in two {
        out.push((instance(h, g, 2, false), 4));
    }
    out
}

fn end_to_end_soundness() -> Outcome {
    let mut positive = 0;
    let mut negative = 0;
    let mut converse = 0;
    let list = toy_instances();
    for (inst, max_len) in &list {
        let r = end_to_end(inst, *max_len, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Consistent, || format!("h={:?} g={:?}: {:?}", inst.h(), inst.g(), r.issues))?;
        if r.solution.is_some() {
            positive += 1;
            ensure(r.solution_words.is_some(), || "solution without automaton words".into())?;
        } else {
            negative += 1;
        }
        converse += r.converse_checked;
    }
    ensure(positive >= 5 && negative >= 5, || format!("{positive} positive, {negative} negative"))?;
    Ok(format!("{} instances consistent ({positive} with solutions, {negative} without), {converse} collisions read back as solutions", list.len()))
}

fn example_one_distinct() -> Outcome {
    let q = example_one();
    match power_distinctness(&q, 1000).map_err(|e| e.to_string())? {
        None => Ok("a^0..a^1000 pairwise distinct".into()),
        Some((i, j)) => Err(format!("a^{i} and a^{j} share a value")),
    }
}

fn packing_scan() -> Outcome {
    let nine = Rational::from(9);
    for k in [2, 3] {
        let r = injectivity_scan(f2, k).map_err(|e| e.to_string())?;
        let expected = 5usize.pow(2 * k);
        ensure(r.pairs == expected, || format!("k_max {k}: {} pairs", r.pairs))?;
        ensure(r.is_injective(), || format!("k_max {k}: {} collisions", r.collisions.len()))?;
        ensure(r.max_abs <= nine, || format!("k_max {k}: |f| reaches {}", r.max_abs))?;
    }

    let cantor = injectivity_scan(cantor_pair, 2).map_err(|e| e.to_string())?;
    let frac = |n| Rational::frac(n, 25);
    let target = Rational::frac(297, 625);
    let witness = cantor.collisions.iter().any(|c| {
        c.value == target && c.first == (frac(2), frac(11)) && c.second == (frac(3), frac(9))
    });
    ensure(witness, || "Cantor collision at 297/625 missing".into())?;

    // Over points whose numerators are prime to 5, that collision is the least.
    let mut groups: BTreeMap<Rational, Vec<(i64, i64)>> = BTreeMap::new();
    for a in (1..25).filter(|a| a % 5 != 0) {
        for b in (1..25).filter(|b| b % 5 != 0) {
            groups.entry(cantor_pair(&frac(a), &frac(b))).or_default().push((a, b));
        }
    }
    let least = groups.iter().find(|(_, v)| v.len() > 1);
    ensure(least == Some((&target, &vec![(2, 11), (3, 9)])), || format!("least collision {least:?}"))?;
    Ok(format!(
        "f2 injective on 625 and 15625 grid pairs with |f| <= 9; Cantor pairing collides at 297/625 ({} colliding values overall)",
        cantor.colliding_values()
    ))
}

fn lagrange_and_normalization() -> Outcome {
    for n in 0..=100_000u64 {
        let s = four_squares(n).map_err(|e| e.to_string())?;
        ensure(s.iter().map(|a| a * a).sum::<u64>() == n, || format!("four_squares({n}) = {s:?}"))?;
    }
    for s in 1..=100_000u64 {
        let d = complete_square(&BigUint::from(s));
        let d = u64::try_from(&d).map_err(|_| "delta does not fit".to_string())?;
        let total = s + d;
        let r = total.isqrt();
        ensure(r * r == total, || format!("S = {s}: S + delta = {total} is not a square"))?;
        ensure(r == 0 || (r - 1) * (r - 1) < s, || format!("S = {s}: delta = {d} is not minimal"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut plans = 0;
    for _ in 0..200 {
        let plan = random_plan(&mut rng, 1_000_000);
        let u = build_initial_vector(&plan).map_err(|e| e.to_string())?;
        let len: Rational = u.unit.iter().map(Rational::square).sum();
        ensure(len.is_one(), || format!("start vector has squared length {len}"))?;
        plans += 1;
    }
    Ok(format!("n <= 1e5 split, S <= 1e5 completed minimally, {plans} unit start vectors"))
}

fn pyth(a: i64, b: i64, c: i64, reflect: bool) -> RatMatrix {
    let f = |n| Rational::frac(n, c);
    let rows = if reflect { vec![vec![f(a), f(b)], vec![f(b), f(-a)]] } else { vec![vec![f(a), f(-b)], vec![f(b), f(a)]] };
    RatMatrix::from_rows(rows).unwrap()
}

fn toy_bases() -> Vec<(String, RatMatrix)> {
    vec![
        ("r".into(), pyth(3, 4, 5, false)),
        ("s".into(), pyth(5, 12, 13, true)),
        ("t".into(), pyth(8, 15, 17, false)),
    ]
}

/// Random polynomial plan over 2x2 entries with 1 to 3 terms of degree 1 to 3.
fn random_plan(rng: &mut ChaCha8Rng, max_coeff: u64) -> KronPlan {
    let all = [Position::new(1, 1), Position::new(1, 2), Position::new(2, 1), Position::new(2, 2)];
    let m = rng.gen_range(1..=3usize);
    let positions: Vec<Position> = (0..m).map(|i| all[(i + rng.gen_range(0..4)) % 4]).collect();
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = vec![0u32; m];
        let degree = rng.gen_range(1..=3);
        for _ in 0..degree {
            e[rng.gen_range(0..m)] += 1;
        }
        terms.push((e, BigUint::from(rng.gen_range(1..=max_coeff))));
    }
    let poly = Polynomial::from_terms(m, terms).unwrap();
    KronPlan::from_polynomial(2, positions, &poly).unwrap()
}

fn dense_lazy_equivalence() -> Outcome {
    let bases = toy_bases();
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let mut cases = 0;
    let mut max_dim = 0;
    for _ in 0..30 {
        let plan = random_plan(&mut rng, 50);
        let dense = build_dense(&bases, &plan).map_err(|e| e.to_string())?;
        validate(&dense).map_err(|v| format!("invalid dense automaton: {v:?}"))?;
        max_dim = max_dim.max(dense.dimension());
        for _ in 0..4 {
            let len = rng.gen_range(0..=5);
            let ix: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=bases.len())).collect();
            let w = Word::from_indices(&ix, bases.len()).unwrap();
            let d = accept_rational(&dense, &w).map_err(|e| e.to_string())?;
            let l = eval_lazy(&bases, &plan, &w).map_err(|e| e.to_string())?.probability();
            ensure(d == l, || format!("word {w}: dense {d} vs lazy {l}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (plan, word) cases agree exactly, dense dimension up to {max_dim}"))
}

fn radical_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let floor = BigInt::from(10u64).pow(10);
    let mut smallest: Option<(BigInt, String)> = None;
    for _ in 0..1000 {
        let mut s = RadicalSignature::new();
            // Constant plus single square roots, each present with probability 1/2.
        while s.is_zero() {
            for j in 0..7 {
                if rng.gen_bool(0.5) {
                    continue;
                }
                let mut num = rng.gen_range(1..=100i64);
                if rng.gen_bool(0.5) {
                    num = -num;
                }
                let c = Rational::frac(num, rng.gen_range(1..=100i64));
                let term = if j == 6 { RadicalSignature::constant(c) } else { RadicalSignature::sqrt_prime(j, c) };
                s = &s + &term;
            }
        }
        ensure(s.is_square_root_case(), || "generated a quarter-exponent term".into())?;
        // 30 digits: |value| > 1e-20 means more than 1e10 units of 1e-30.
        let text = radsig_to_float(&s, 30).replace(['-', '.'], "");
        let v: BigInt = text.parse().map_err(|_| format!("unparsable decimal {text}"))?;
        ensure(v > floor, || format!("{s} evaluates to {v}e-30"))?;
        if smallest.as_ref().is_none_or(|m| v < m.0) {
            smallest = Some((v, radsig_to_float(&s, 30)));
        }
    }
    Ok(format!("1000 signatures, value closest to zero {}", smallest.unwrap().1))
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("sign identities", 10, sign_identities),
        ("key uniqueness", 5, key_uniqueness),
        ("freeness", 10, freeness),
        ("reduction structure", 60, reduction_structure),
        ("end-to-end soundness", 60, end_to_end_soundness),
        ("example-one distinctness", 5, example_one_distinct),
        ("packing scan", 30, packing_scan),
        ("lagrange and normalization", 30, lagrange_and_normalization),
        ("dense/lazy equivalence", 60, dense_lazy_equivalence),
        ("radical sanity", 10, radical_sanity),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let line = match result {
            Ok(_) if took > Duration::from_secs(*limit) => {
                failed += 1;
                format!("FAIL  {}", format_args!("over the {limit}s limit"))
            }
            Ok(detail) => format!("PASS  {detail}"),
            Err(why) => {
                failed += 1;
                format!("FAIL  {why}")
            }
        };
        println!("criterion {:>2} [{name}] {:.2}s: {line}", i + 1, took.as_secs_f64());
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
