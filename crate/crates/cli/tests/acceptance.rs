//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

#[path = "../../core/tests/support/gen.rs"]
mod gen;
#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qrank_cli::{run, verify_report, Command, Input, Report};
use qrank_core::{
    brute_force_max_rank_oracle, format_rational, full_rank_rectangular, interval_as_subset,
    max_rank, max_rank_witness, null_pair_search, parse_rational, rank_deficient_rational_witness,
    rankone_any, rankone_criterion_bruteforce, rankone_feasibility_witness, rohn_square_full_rank,
    strongly_singular, Budgets, FieldDescriptor, Interval, IntervalMatrix, NullSearch, Rational,
    RationalMatrix, SubsetEntry, SubsetMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const ROHN_INSTANCES: usize = 1000;
const ROHN_TIME_LIMIT: Duration = Duration::from_secs(120);
const DEFICIENT_INSTANCES: usize = 500;
const CRITERION_INSTANCES: usize = 1000;
const CRITERION_TIME_LIMIT: Duration = Duration::from_secs(300);
const PLANTED_INSTANCES: usize = 500;
const SUBSET_RANDOM_INSTANCES: usize = 500;
const SUBSET_TIME_LIMIT: Duration = Duration::from_secs(120);
const BRIDGE_INSTANCES: usize = 500;
const CERTIFICATE_INPUTS: usize = 120;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn budgets() -> Budgets {
    Budgets::default()
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn rank(m: &RationalMatrix) -> usize {
    oracle::rank(&oracle::grid(m))
}

/// Outcome of one criterion: a summary for the report line.
type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rohn_equivalence() -> Outcome {
    let mut r = rng(101);
    let start = Instant::now();
    let (mut regular, mut singular) = (0, 0);
    for _ in 0..ROHN_INSTANCES {
        let p = r.gen_range(1..=3);
        let a = gen::interval_matrix(&mut r, p, p, 4, &[1, 2], 0.25);
        let rohn = rohn_square_full_rank(&a, &budgets()).map_err(|e| e.to_string())?;
        let search = null_pair_search(&a, &budgets()).map_err(|e| e.to_string())?;
        let by_search = matches!(search, NullSearch::FullRank(_));
        let by_vertices = oracle::vertex_regular(&a);
        check(rohn.full_rank == by_search && by_search == by_vertices, || {
            format!("mismatch on {a}: rohn {}, search {by_search}, vertices {by_vertices}", rohn.full_rank)
        })?;
        if rohn.full_rank {
            regular += 1;
        } else {
            singular += 1;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < ROHN_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{ROHN_INSTANCES} matrices ({regular} regular, {singular} singular), 0 mismatches, {elapsed:.1?}"))
}

fn rational_rank_deficiency_witnesses() -> Outcome {
    let mut r = rng(202);
    let (mut found, mut tried) = (0, 0);
    while found < DEFICIENT_INSTANCES {
        tried += 1;
        check(tried < 50 * DEFICIENT_INSTANCES, || "too few rank-deficient instances".into())?;
        let q = r.gen_range(1..=3);
        let p = r.gen_range(q..=4);
        let a = gen::interval_matrix(&mut r, p, q, 4, &[1, 2], 0.3);
        if full_rank_rectangular(&a, &budgets()).map_err(|e| e.to_string())? {
            continue;
        }
        found += 1;
        let w = rank_deficient_rational_witness(&a, &budgets())
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no witness for {a}"))?;
        check(oracle::contains(&a, &w) && rank(&w) < q, || format!("bad witness for {a}"))?;
    }
    Ok(format!("{found} rank-deficient instances out of {tried}, all with verified rational witnesses"))
}

fn product_criterion_equivalence() -> Outcome {
    let mut r = rng(303);
    let start = Instant::now();
    let mut feasible = 0;
    let shapes = [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (4, 2), (3, 4), (4, 3)];
    for k in 0..CRITERION_INSTANCES {
        let (p, q) = shapes[k % shapes.len()];
        let a = gen::reduced_nonnegative(&mut r, p, q, 5, 0.3);
        let crit = rankone_criterion_bruteforce(&a, &budgets()).map_err(|e| e.to_string())?;
        let feas = rankone_feasibility_witness(&a).map_err(|e| e.to_string())?;
        check(crit.is_none() == feas.is_ok(), || format!("mismatch on {a}"))?;
        match feas {
            Ok(w) => {
                feasible += 1;
                let b = w.matrix();
                check(oracle::contains(&a, &b) && rank(&b) == 1, || format!("bad witness for {a}"))?;
            }
            Err(v) => check(v.verify(&a), || format!("bad violation for {a}"))?,
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < CRITERION_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{CRITERION_INSTANCES} matrices ({feasible} with a rank-one member), 0 mismatches, {elapsed:.1?}"
    ))
}

fn planted_rank_one_recovery() -> Outcome {
    let mut r = rng(404);
    let (mut degenerate, mut straddling) = (0, 0);
    for _ in 0..PLANTED_INSTANCES {
        let (p, q) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let nonzero = |r: &mut ChaCha8Rng| {
            let v = Rational::new(r.gen_range(1..=4).into(), r.gen_range(1..=3).into());
            if r.gen_bool(0.5) {
                -v
            } else {
                v
            }
        };
        let u: Vec<Rational> = (0..p).map(|i| if i > 0 && r.gen_bool(0.15) { int(0) } else { nonzero(&mut r) }).collect();
        let v: Vec<Rational> = (0..q).map(|_| nonzero(&mut r)).collect();
        let b = RationalMatrix::outer(&u, &v);
        let a = IntervalMatrix::from_fn(p, q, |i, j| {
            let c = b.get(i, j).clone();
            if r.gen_bool(0.35) {
                degenerate += 1;
                return Interval::point(c);
            }
            let below = Rational::new(r.gen_range(0..=6).into(), 2.into());
            let above = Rational::new(r.gen_range(0..=6).into(), 2.into());
            let e = Interval::new(&c - below, &c + above).unwrap();
            if e.straddles_zero() {
                straddling += 1;
            }
            e
        });
        let d = rankone_any(&a, &budgets()).map_err(|e| e.to_string())?;
        let w = d.witness().ok_or_else(|| format!("no witness for planted {a}"))?;
        let m = w.matrix();
        check(oracle::contains(&a, &m) && rank(&m) == 1, || format!("bad witness for {a}"))?;
    }
    Ok(format!(
        "{PLANTED_INSTANCES}/{PLANTED_INSTANCES} recovered ({degenerate} degenerate entries, {straddling} straddling zero)"
    ))
}

fn exhaustive_gf_max_rank(s: &SubsetMatrix, p: u64) -> usize {
    let n = s.cols();
    let values: Vec<Vec<u64>> = s
        .entries()
        .iter()
        .map(|e| match e {
            SubsetEntry::Singleton(v) => vec![format_rational(v).parse().unwrap()],
            SubsetEntry::FiniteSet(vs) => vs.iter().map(|v| format_rational(v).parse().unwrap()).collect(),
            SubsetEntry::Any => unreachable!(),
        })
        .collect();
    let total: usize = values.iter().map(Vec::len).product();
    (0..total)
        .map(|mut code| {
            let flat: Vec<u64> = values
                .iter()
                .map(|vs| {
                    let v = vs[code % vs.len()];
                    code /= vs.len();
                    v
                })
                .collect();
            oracle::rank_mod_p(&flat.chunks(n).map(<[u64]>::to_vec).collect::<Vec<_>>(), p)
        })
        .max()
        .unwrap()
}

fn check_subset(s: &SubsetMatrix, p: u64) -> Result<(), String> {
    let n = s.rows();
    let truth = exhaustive_gf_max_rank(s, p);
    let lib_oracle = brute_force_max_rank_oracle(s, &budgets()).map_err(|e| e.to_string())?;
    let singular = strongly_singular(s, &budgets()).map_err(|e| e.to_string())?.is_none();
    let mrk = max_rank(s, &budgets()).map_err(|e| e.to_string())?.rank;
    let w = max_rank_witness(s, &budgets()).map_err(|e| e.to_string())?;
    let w_rank = oracle::rank_mod_p(
        &(0..n)
            .map(|i| w.row(i).iter().map(|v| format_rational(v).parse().unwrap()).collect())
            .collect::<Vec<_>>(),
        p,
    );
    check(
        lib_oracle == truth && singular == (truth < n) && mrk == truth && s.contains(&w) && w_rank == truth,
        || format!("mismatch on {s}: exhaustive {truth}, oracle {lib_oracle}, strongly singular {singular}, max rank {mrk}, witness rank {w_rank}"),
    )
}

fn subset_matrices() -> Outcome {
    let start = Instant::now();
    let gf2 = FieldDescriptor::prime(2).unwrap();
    let choices = [
        SubsetEntry::Singleton(int(0)),
        SubsetEntry::Singleton(int(1)),
        SubsetEntry::FiniteSet(vec![int(0), int(1)]),
    ];
    for code in 0..81usize {
        let cells: Vec<SubsetEntry> = (0..4).map(|k| choices[code / 3usize.pow(k) % 3].clone()).collect();
        let s = SubsetMatrix::from_rows(gf2, vec![cells[..2].to_vec(), cells[2..].to_vec()]).unwrap();
        check_subset(&s, 2)?;
    }
    let mut r = rng(505);
    for k in 0..SUBSET_RANDOM_INSTANCES {
        let p = if k % 2 == 0 { 2 } else { 3 };
        let field = FieldDescriptor::prime(p).unwrap();
        let rows = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let a = r.gen_range(0..p);
                        if r.gen_bool(0.5) {
                            SubsetEntry::Singleton(int(a as i64))
                        } else {
                            SubsetEntry::FiniteSet(vec![int(a as i64), int(((a + r.gen_range(1..p)) % p) as i64)])
                        }
                    })
                    .collect()
            })
            .collect();
        check_subset(&SubsetMatrix::from_rows(field, rows).unwrap(), p)?;
    }
    let elapsed = start.elapsed();
    check(elapsed < SUBSET_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "81 exhaustive 2x2 over GF(2) and {SUBSET_RANDOM_INSTANCES} random 3x3 over GF(2)/GF(3), 0 mismatches, {elapsed:.1?}"
    ))
}

fn interval_max_rank_bridge() -> Outcome {
    let mut r = rng(606);
    let mut by_rank = [0usize; 5];
    for _ in 0..BRIDGE_INSTANCES {
        let (p, q) = (r.gen_range(1..=4), r.gen_range(1..=4));
        // Keep the vertex count manageable on the larger shapes.
        let point = if p * q > 9 { 0.6 } else { 0.3 };
        let a = gen::interval_matrix(&mut r, p, q, 3, &[1, 2], point);
        let cert = max_rank(&interval_as_subset(&a), &budgets()).map_err(|e| e.to_string())?;
        let truth = oracle::vertex_max_rank(&a);
        check(cert.rank == truth, || format!("mismatch on {a}: {} vs vertex {truth}", cert.rank))?;
        by_rank[truth] += 1;
    }
    Ok(format!("{BRIDGE_INSTANCES} matrices up to 4x4, 0 mismatches, ranks 0..4: {by_rank:?}"))
}

fn report_inputs() -> Vec<Input> {
    let mut r = rng(707);
    let mut out = Vec::new();
    for k in 0..CERTIFICATE_INPUTS {
        let (p, q) = (r.gen_range(1..=3), r.gen_range(1..=3));
        if k % 4 == 3 {
            let prime = [2, 3, 5][k % 3];
            let field = FieldDescriptor::prime(prime).unwrap();
            let n = r.gen_range(1..=3);
            let rows = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let a = r.gen_range(0..prime);
                            if r.gen_bool(0.5) {
                                SubsetEntry::Singleton(int(a as i64))
                            } else {
                                SubsetEntry::FiniteSet(vec![int(a as i64), int(((a + 1) % prime) as i64)])
                            }
                        })
                        .collect()
                })
                .collect();
            out.push(Input::Subset(SubsetMatrix::from_rows(field, rows).unwrap()));
        } else {
            out.push(Input::Interval(gen::interval_matrix(&mut r, p, q, 3, &[1, 2], 0.3)));
        }
    }
    out
}

fn commands_for(input: &Input) -> Vec<Command> {
    let square = input.shape().0 == input.shape().1;
    Command::ALL
        .into_iter()
        .filter(|c| match input {
            Input::Interval(_) => square || !matches!(c, Command::DetC | Command::StronglySingular),
            Input::Subset(_) => matches!(c, Command::MaxRank | Command::DetC | Command::StronglySingular),
        })
        .collect()
}

fn set_str(v: &mut Value, s: String) {
    *v = Value::String(s);
}

fn bump(v: &mut Value) {
    let x = parse_rational(v.as_str().unwrap()).unwrap();
    set_str(v, format_rational(&(x + int(1))));
}

/// One mutation per applicable field, each guaranteed to invalidate.
fn mutations(doc: &Value, input: &Input) -> Vec<(&'static str, Value)> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, f: &dyn Fn(&mut Value)| {
        let mut m = doc.clone();
        f(&mut m);
        out.push((name, m));
    };
    let flip = |m: &mut Value| {
        let d = m["decision"].as_bool().unwrap();
        m["decision"] = Value::Bool(!d);
    };
    match doc["command"].as_str().unwrap() {
        "fullrank" | "singular-witness" => {
            push("decision flipped", &flip);
            if doc["decision"].as_bool().unwrap() {
                push("negative multiplier", &|m| set_str(&mut m["infeasibility"][0]["multipliers"][0], "-1".into()));
            } else {
                let Input::Interval(alpha) = input else { unreachable!() };
                let transposed = doc["transposed"].as_bool().unwrap();
                let hi = alpha.get(0, 0).hi().clone();
                push("witness entry outside its interval", &|m| {
                    set_str(&mut m["witness_A"][0][0], format_rational(&(hi.clone() + int(1))))
                });
                let a = &doc["witness_A"];
                let line_nonzero = |k: usize| {
                    let cells: Vec<&Value> = if transposed {
                        a[k].as_array().unwrap().iter().collect()
                    } else {
                        a.as_array().unwrap().iter().map(|row| &row[k]).collect()
                    };
                    cells.iter().any(|c| c.as_str() != Some("0"))
                };
                let len = doc["witness_x"].as_array().unwrap().len();
                if let Some(k) = (0..len).find(|&k| line_nonzero(k)) {
                    push("kernel vector component changed", &|m| bump(&mut m["witness_x"][k]));
                }
            }
        }
        "rankone" | "rankone-witness" => {
            push("decision flipped", &flip);
            if doc["decision"].as_bool().unwrap() {
                push("witness entry changed", &|m| bump(&mut m["witness"]["B"][0][0]));
                push("u changed", &|m| bump(&mut m["witness"]["u"][0]));
            } else if !doc["refutation"]["branches"].as_array().unwrap().is_empty() {
                push("last branch dropped", &|m| {
                    m["refutation"]["branches"].as_array_mut().unwrap().pop();
                });
                let first_violation = doc["refutation"]["branches"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .position(|b| !b["violation"].is_null());
                if let Some(k) = first_violation {
                    push("sigma set to identity", &|m| {
                        let h = m["refutation"]["branches"][k]["violation"]["h"].as_u64().unwrap();
                        let id: Vec<Value> = (0..h).map(Value::from).collect();
                        m["refutation"]["branches"][k]["violation"]["sigma"] = Value::Array(id.clone());
                        m["violation"]["sigma"] = Value::Array(id);
                    });
                }
            }
        }
        "maxrank" => {
            push("claimed rank raised", &|m| {
                let t = m["max_rank"].as_u64().unwrap();
                m["max_rank"] = Value::from(t + 1);
            });
            if let Some(first) = doc["certificate"]["diagonal"].as_array().unwrap().first().cloned() {
                push("diagonal row duplicated", &|m| {
                    let mut dup = first.clone();
                    dup[1] = Value::from(first[1].as_u64().unwrap() + 1);
                    m["certificate"]["diagonal"].as_array_mut().unwrap().push(dup);
                });
            }
        }
        "rankrange" => {
            push("claimed maximal rank raised", &|m| {
                let t = m["max_rank"].as_u64().unwrap();
                m["max_rank"] = Value::from(t + 1);
            });
        }
        "detc" => push("value changed", &|m| bump(&mut m["value"])),
        "strongly-singular" => {
            push("decision flipped", &flip);
            if let Some(first) = doc["diagonal"].as_array().and_then(|d| d.first().cloned()) {
                push("diagonal row duplicated", &|m| {
                    let mut dup = first.clone();
                    dup[1] = Value::from(first[1].as_u64().unwrap() + 1);
                    m["diagonal"].as_array_mut().unwrap().push(dup);
                });
            }
        }
        other => panic!("unexpected command {other}"),
    }
    out
}

fn all_reports() -> Result<Vec<(Input, Report)>, String> {
    let mut out = Vec::new();
    for input in report_inputs() {
        for c in commands_for(&input) {
            let report = run(c, &input, &budgets()).map_err(|e| format!("{c}: {e}"))?;
            out.push((input.clone(), report));
        }
    }
    Ok(out)
}

fn certificate_integrity() -> Outcome {
    let reports = all_reports()?;
    let (mut accepted, mut rejected) = (0, 0);
    for (input, report) in &reports {
        let json = report.to_json();
        let v = verify_report(&json, input, &budgets()).map_err(|e| e.to_string())?;
        check(v.valid, || format!("rejected own certificate ({}):\n{json}", v.reason))?;
        accepted += 1;
        let doc: Value = serde_json::from_str(&json).unwrap();
        for (name, mutated) in mutations(&doc, input) {
            let text = serde_json::to_string(&mutated).unwrap();
            let verdict = verify_report(&text, input, &budgets());
            check(!matches!(&verdict, Ok(v) if v.valid), || {
                format!("accepted mutation {name:?}:\n{text}")
            })?;
            rejected += 1;
        }
    }
    Ok(format!("{accepted}/{accepted} certificates accepted, {rejected}/{rejected} mutations rejected"))
}

fn collect_strings<'a>(v: &'a Value, out: &mut Vec<&'a str>) {
    match v {
        Value::String(s) => out.push(s),
        Value::Array(a) => a.iter().for_each(|x| collect_strings(x, out)),
        Value::Object(m) => m
            .iter()
            .filter(|(k, _)| k.as_str() != "command")
            .for_each(|(_, x)| collect_strings(x, out)),
        _ => {}
    }
}

fn integral_numbers(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_u64() || n.is_i64(),
        Value::Array(a) => a.iter().all(integral_numbers),
        Value::Object(m) => m.values().all(integral_numbers),
        _ => true,
    }
}

fn exactness() -> Outcome {
    let mut count = 0;
    for (_, report) in all_reports()? {
        let doc: Value = serde_json::from_str(&report.to_json()).unwrap();
        let mut strings = Vec::new();
        collect_strings(&doc, &mut strings);
        for s in strings {
            let x = parse_rational(s).map_err(|e| format!("{s:?} does not parse: {e}"))?;
            check(format_rational(&x) == s, || format!("{s:?} is not canonical"))?;
            let f = oracle::Frac::parse(s);
            check(oracle::Frac::of(&x) == f, || format!("{s:?} changes value on re-parse"))?;
            count += 1;
        }
        check(integral_numbers(&doc), || "report contains a non-integer number".into())?;
    }
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/src");
    for entry in std::fs::read_dir(src).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        for token in ["f32", "f64"] {
            check(!text.contains(token), || format!("{} mentions {token}", path.display()))?;
        }
    }
    Ok(format!("{count} reported rationals re-parse exactly; no floating-point types in the core"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("square full-rank test agrees with kernel search and vertex oracle", rohn_equivalence),
        ("rational rank-deficiency witnesses", rational_rank_deficiency_witnesses),
        ("product criterion equals rank-one feasibility", product_criterion_equivalence),
        ("planted rank-one recovery", planted_rank_one_recovery),
        ("strong singularity and maximal rank of subset matrices", subset_matrices),
        ("interval maximal rank via subset matrices", interval_max_rank_bridge),
        ("certificate integrity", certificate_integrity),
        ("exact rational output", exactness),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(summary) => println!("[PASS] criterion {}: {name}: {summary}", k + 1),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {reason}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
