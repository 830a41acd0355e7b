//! End-to-end acceptance run: one PASS/FAIL line per criterion. Runs the
//! release-grade binary for report-level checks and the library for
//! independent recomputation.

use std::process::Command;
use std::time::{Duration, Instant};

use modinv_core::invariants::{ideal_slice, invariant_slice, quotient_dims, transfer_slice};
use modinv_core::sample::{random_invariant, random_poly};
use modinv_core::{CpRep, Poly, PrimeP};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::Value;

type Check = Result<String, String>;

const INSTANCES: [(u64, &[usize]); 5] = [(2, &[2]), (2, &[2, 2]), (2, &[2, 2, 2]), (3, &[3]), (3, &[2, 3])];

fn blocks_arg(b: &[usize]) -> String {
    b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Runs the binary; returns exit code, raw stdout and parsed JSON.
fn modinv(args: &[&str]) -> Result<(i32, String, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_modinv"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let json = serde_json::from_str(&stdout).map_err(|e| format!("{args:?}: bad JSON ({e})"))?;
    Ok((out.status.code().unwrap_or(-1), stdout, json))
}

fn checks(report: &Value) -> &Vec<Value> {
    report["checks"].as_array().expect("checks array")
}

fn find<'a>(report: &'a Value, name: &str) -> Result<&'a Value, String> {
    checks(report)
        .iter()
        .find(|c| c["name"] == name)
        .ok_or_else(|| format!("missing check {name}"))
}

fn witness<'a>(check: &'a Value, kind: &str) -> Result<&'a Value, String> {
    check["witnesses"]
        .as_array()
        .and_then(|ws| ws.iter().find(|w| w["kind"] == kind))
        .ok_or_else(|| format!("{}: no {kind} witness", check["name"]))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn usizes(v: &Value) -> Vec<i64> {
    v.as_array()
        .map(|a| a.iter().map(|x| x.as_i64().unwrap()).collect())
        .unwrap_or_default()
}

fn rep(p: u64, blocks: &[usize]) -> CpRep {
    CpRep::new(PrimeP::new(p).unwrap(), blocks.to_vec()).unwrap()
}

/// Every step record with `hilbert_consistent` set, rechecked from its own
/// dimension vectors: `after(d) = before(d) - before(d - e)`.
fn hilbert_steps(report: &Value, seen: &mut usize) -> Result<(), String> {
    for c in checks(report) {
        for w in c["witnesses"].as_array().into_iter().flatten() {
            let steps: Vec<&Value> = if w.get("dims_after").is_some() {
                vec![w]
            } else if let Some(ev) = w.get("evidence") {
                ev["steps"].as_array().map(|s| s.iter().collect()).unwrap_or_default()
            } else {
                vec![]
            };
            for s in steps {
                if s["injective"] != true {
                    continue;
                }
                let (before, after) = (usizes(&s["dims_before"]), usizes(&s["dims_after"]));
                let e = s["degree"].as_u64().unwrap() as usize;
                ensure(s["hilbert_consistent"] == true, format!("{}: flagged inconsistent", c["name"]))?;
                for d in 0..before.len() {
                    let shifted = if d >= e { before[d - e] } else { 0 };
                    ensure(
                        after[d] == before[d] - shifted,
                        format!("{}: degree {d} of step {}", c["name"], s["element"]),
                    )?;
                }
                *seen += 1;
            }
        }
    }
    Ok(())
}

fn criterion_1(hilbert: &mut Vec<Value>) -> Check {
    let start = Instant::now();
    let mut lengths = Vec::new();
    for (p, b) in INSTANCES {
        let (code, _, r) = modinv(&["regseq", "--p", &p.to_string(), "--blocks", &blocks_arg(b), "--sequence", "canonical", "--max-degree", "10"])?;
        let expected = (b.len() + 2).min(b.iter().sum());
        let steps: Vec<&Value> = checks(&r)
            .iter()
            .filter(|c| c["name"].as_str().unwrap().starts_with("regseq-step-"))
            .collect();
        ensure(code == 0, format!("p={p} {b:?}: exit {code}"))?;
        ensure(steps.len() == expected, format!("p={p} {b:?}: {} steps, expected {expected}", steps.len()))?;
        ensure(steps.iter().all(|s| s["pass"] == true), format!("p={p} {b:?}: failing step"))?;
        lengths.push(expected);
        hilbert.push(r);
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(180), format!("took {t:?}"))?;
    Ok(format!("5 instances, canonical lengths {lengths:?}, {:.2}s", t.as_secs_f64()))
}

fn criterion_2(depth_report: &Value) -> Check {
    let depth = |name: &str| -> Result<(i64, bool), String> {
        let ev = &witness(find(depth_report, name)?, "depth")?["evidence"];
        Ok((ev["length"].as_i64().unwrap(), ev["maximal"] == true))
    };
    let (ring, ring_max) = depth("ring-depth")?;
    ensure(ring == 4 && ring_max, format!("depth R = {ring} (maximal {ring_max})"))?;
    let mut found = Vec::new();
    for k in 1..=4 {
        let (d, m) = depth(&format!("depth-I_{k}"))?;
        ensure(d == 4 + 1 - k && m, format!("depth I_{k} = {d} (maximal {m}), expected {}", 5 - k))?;
        found.push(d);
    }
    let audit = find(depth_report, "depth-inequality-audit")?;
    ensure(audit["pass"] == true, "audit reported a violation")?;
    ensure(
        !audit["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("one-sided")),
        "audit fell back to one-sided checks",
    )?;
    Ok(format!("depth R = 4, depth I_k = {found:?}, audit clean"))
}

fn criterion_3(hilbert: &mut Vec<Value>) -> Check {
    for (p, b) in INSTANCES {
        let d = if (p, b) == (3, &[2, 3][..]) { 12 } else { 10 };
        let (code, _, r) = modinv(&["transfer-quotient", "--p", &p.to_string(), "--blocks", &blocks_arg(b), "--max-degree", &d.to_string()])?;
        let l = b.len();
        let tag = format!("p={p} {b:?}");
        ensure(code == 0, format!("{tag}: exit {code}"))?;
        for k in 1..=l {
            ensure(find(&r, &format!("norm-on-transfer-quotient-step-{k}"))?["pass"] == true, format!("{tag}: norm step {k}"))?;
        }
        let vanish = find(&r, "final-quotient-vanishes")?;
        let fin = usizes(&witness(vanish, "dims")?["final_quotient"]);
        ensure(fin.len() == d + 1, format!("{tag}: final dims length"))?;
        ensure(fin[l * p as usize + 1..].iter().all(|&x| x == 0), format!("{tag}: final quotient nonzero above {}", l * p as usize))?;
        // (1 - t^p)^l times the quotient series, recomputed here
        let series = witness(find(&r, "hilbert-numerator-nonnegative")?, "series")?;
        let mut c = usizes(&series["quotient_dims"]);
        for _ in 0..l {
            for k in (p as usize..c.len()).rev() {
                c[k] -= c[k - p as usize];
            }
        }
        ensure(c.iter().all(|&x| x >= 0), format!("{tag}: negative numerator coefficient {c:?}"))?;
        ensure(c == fin, format!("{tag}: numerator {c:?} differs from final quotient {fin:?}"))?;
        let dep = witness(find(&r, "transfer-ideal-depth")?, "depth-deduction")?;
        ensure(
            dep["depth_transfer_ideal"]["value"].as_u64() == Some(l as u64 + 1) && dep["depth_transfer_ideal"]["maximal"] == true,
            format!("{tag}: depth(I^G) evidence {}", dep["depth_transfer_ideal"]),
        )?;
        hilbert.push(r);
    }
    Ok("5 instances: norms regular, final quotient finite, numerator nonnegative, depth(I^G) = l+1".into())
}

fn criterion_4(hilbert: &mut Vec<Value>) -> Check {
    let (code, _, r) = modinv(&["regseq", "--p", "2", "--blocks", "2,2,2", "--sequence", "canonical", "--max-degree", "10"])?;
    ensure(code == 0, format!("exit {code}"))?;
    let steps = checks(&r).iter().filter(|c| c["name"].as_str().unwrap().starts_with("regseq-step-")).count();
    ensure(steps == 5, format!("{steps} steps"))?;
    let m = find(&r, "maximality-witness")?;
    ensure(m["pass"] == true, "witness recheck failed")?;
    ensure(
        m["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("evidence, not proof")),
        "missing truncation caveat",
    )?;
    let w = &witness(m, "socle")?["witness"];
    let tested = usizes(&w["annihilator_degrees_tested"]);
    ensure((1..=8).all(|e| tested.contains(&e)), format!("annihilator degrees {tested:?}"))?;

    // independent recheck through ideal slices
    let rp = rep(2, &[2, 2, 2]);
    let v = rp.parse(w["element"].as_str().unwrap()).map_err(|e| e.to_string())?;
    let dv = v.homogeneous_degree().unwrap().unwrap() as usize;
    let ring = invariant_slice(&rp, 10).unwrap();
    let seq = modinv_core::depthlab::canonical_sequence(&rp).unwrap();
    let ideal = ideal_slice(&ring, &seq, 10).unwrap();
    ensure(ring.basis().contains(&v).unwrap() && !ideal.contains(&v).unwrap(), "v is zero in the quotient")?;
    let mut products = 0;
    for e in 1..=8usize.min(10 - dv) {
        for u in ring.polys(e) {
            ensure(ideal.contains(&(&u * &v)).unwrap(), format!("u*v nonzero for u = {}", rp.render(&u)))?;
            products += 1;
        }
    }
    let msg = format!(
        "5 steps pass; v = {} (degree {dv}) killed by all {products} basis invariants of degree <= {}",
        w["element"].as_str().unwrap(),
        10 - dv
    );
    hilbert.push(r);
    Ok(msg)
}

fn criterion_5() -> Check {
    let (code, _, r) = modinv(&["grade", "--p", "2", "--blocks", "2,2", "--max-degree", "10"])?;
    ensure(code == 0, format!("exit {code}"))?;
    let g = find(&r, "bounded-grade")?;
    let ev = &witness(g, "grade")?["evidence"];
    ensure(ev["length"] == 2 && ev["maximal"] == true, format!("grade evidence {ev}"))?;
    let rp = rep(2, &[2, 2]);
    let ring = invariant_slice(&rp, 10).unwrap();
    let tr = transfer_slice(&rp, ring.ring(), 10).unwrap();
    for f in ev["sequence"].as_array().unwrap() {
        let f = rp.parse(f.as_str().unwrap()).map_err(|e| e.to_string())?;
        ensure(tr.basis().contains(&f).unwrap(), format!("{} is not in the transfer ideal", rp.render(&f)))?;
    }
    let nr = find(&r, "norm-reduction")?;
    ensure(nr["pass"] == true, "norm reduction failed")?;
    let red = witness(nr, "reduction")?;
    ensure(
        red["depth"]["length"] == 4 && red["grade"]["length"] == 2 && red["norms"] == 2,
        format!("depth {} grade {}", red["depth"]["length"], red["grade"]["length"]),
    )?;
    Ok(format!("transfers {} extend the norms; depth 4 = 2 + 2", ev["sequence"]))
}

/// Full reduction by the top norms, term by term, in reverse block order.
fn redivide(rp: &CpRep, f: &Poly) -> Poly {
    let p = rp.field().get() as u32;
    let mut r = f.clone();
    'outer: loop {
        for j in (1..=rp.num_blocks()).rev() {
            let t = rp.top_var(j).unwrap();
            let hit = r.terms().find(|(m, _)| m.exp(t) >= p).map(|(m, c)| (m.clone(), c));
            if let Some((m, c)) = hit {
                r = &r - &rp.top_norm(j).unwrap().mul_term(&m.with_exp(t, m.exp(t) - p), c);
                continue 'outer;
            }
        }
        return r;
    }
}

fn criterion_6() -> Check {
    let mut total = 0;
    for (i, (p, b)) in INSTANCES.into_iter().enumerate() {
        let tag = format!("p={p} {b:?}");
        let (code, _, r) = modinv(&["norm-decompose", "--p", &p.to_string(), "--blocks", &blocks_arg(b), "--samples", "500", "--seed", "7", "--degree", "8"])?;
        ensure(code == 0, format!("{tag}: exit {code}"))?;
        for name in ["norm-decomposition-random", "norm-decomposition-invariant"] {
            let c = find(&r, name)?;
            let counts = witness(c, "counts")?;
            ensure(c["pass"] == true && counts["inputs"] == 500 && counts["failures"] == 0, format!("{tag}: {name} {counts}"))?;
        }
        ensure(witness(find(&r, "norm-decomposition-invariant")?, "counts")?["invariant_inputs"] == 500, format!("{tag}: invariant inputs"))?;

        // library run against the local re-division oracle
        let rp = rep(p, b);
        let blocks: Vec<usize> = (1..=b.len()).collect();
        let mut rng = StdRng::seed_from_u64(100 + i as u64);
        for k in 0..500 {
            let f = if k % 2 == 0 {
                random_poly(&mut rng, rp.field(), rp.dim(), 8, 6)
            } else {
                random_invariant(&mut rng, &rp, 8, 4).unwrap()
            };
            let dec = rp.norm_decompose(&f, &blocks).unwrap();
            ensure(dec.reconstruct(&rp).unwrap() == f, format!("{tag}: reconstruction"))?;
            ensure(dec.degree_bounds_hold(&rp).unwrap(), format!("{tag}: degree bounds"))?;
            ensure(redivide(&rp, &f) == dec.remainder, format!("{tag}: remainder of {}", rp.render(&f)))?;
            if rp.is_invariant(&f) {
                ensure(
                    dec.quotients.iter().all(|q| rp.is_invariant(q)) && rp.is_invariant(&dec.remainder),
                    format!("{tag}: non-invariant quotient"),
                )?;
            }
            total += 1;
        }
    }
    Ok(format!("5 x (500 + 500) via the CLI, {total} more against the re-division oracle"))
}

fn criterion_7(reports: &[Value]) -> Check {
    let mut seen = 0;
    for r in reports {
        hilbert_steps(r, &mut seen)?;
    }
    ensure(seen > 0, "no regular steps collected")?;
    Ok(format!("{seen} regular steps, h_(M/fM)(d) = h_M(d) - h_M(d - deg f) for every d"))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let (c1, _, e1) = modinv(&["monomial-example", "--name", "example-1"])?;
    let (c2, _, e2) = modinv(&["monomial-example", "--name", "example-2"])?;
    ensure(c1 == 0 && c2 == 0, format!("exit codes {c1}, {c2}"))?;
    for r in [&e1, &e2] {
        ensure(r["summary"]["pass"] == true, "a check failed")?;
        for c in checks(r).iter().filter(|c| c["name"] == "hilbert-enumeration") {
            ensure(c["params"]["cap"] == 24 && c["pass"] == true, "Hilbert enumeration")?;
        }
    }
    let parts = |r: &Value, part: &str| -> Result<Value, String> {
        checks(r)
            .iter()
            .find(|c| c["name"] == "free-decomposition" && c["params"]["part"] == part)
            .cloned()
            .ok_or_else(|| format!("no {part} decomposition"))
    };
    ensure(parts(&e1, "ring")?["params"]["module_generators"] == serde_json::json!(["1", "x*y"]), "R = A + Axy")?;
    ensure(parts(&e1, "ideal")?["params"]["module_generators"] == serde_json::json!(["x^2", "x*y"]), "I = Ax^2 + Axy")?;
    let h1 = find(&e1, "height-witness")?;
    ensure(
        h1["witnesses"].as_array().unwrap().iter().any(|w| w["power"] == "x^2*y^2" && w["cofactor"] == "y^2"),
        "(xy)^2 = y^2 x^2",
    )?;
    let f1 = witness(find(&e1, "non-factorial-witness")?, "factorizations")?;
    ensure(f1["product"] == "x^2*y^2" && f1["second"] == serde_json::json!(["x*y", "x*y"]), "x^2 y^2 = (xy)^2")?;

    let d2 = parts(&e2, "ideal")?;
    let classes: Vec<Value> = witness(&d2, "epsilon-classes")?["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["class"].clone())
        .collect();
    ensure(
        classes == serde_json::json!([[0, 0], [1, 3], [3, 1], [2, 2]]).as_array().unwrap().clone(),
        format!("classes {classes:?}"),
    )?;
    let table = witness(&d2, "closure-table")?["entries"].as_array().unwrap().len();
    ensure(table == 8, format!("closure table has {table} entries"))?;
    let h2 = find(&e2, "height-witness")?;
    ensure(
        h2["witnesses"].as_array().unwrap().iter().any(|w| w["power"] == "x^12*y^4" && w["cofactor"] == "x^8*y^4"),
        "(x^3y)^4 = y^4 x^8 x^4",
    )?;
    let f2 = witness(find(&e2, "non-factorial-witness")?, "factorizations")?;
    ensure(
        f2["first"] == serde_json::json!(["x^4", "y^4"]) && f2["second"] == serde_json::json!(["x^3*y", "x*y^3"]),
        "x^4 y^4 = (x^3y)(xy^3)",
    )?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!("both examples, 8-entry closure table, {:.2}s", t.as_secs_f64()))
}

fn criterion_9() -> Check {
    let rp = rep(2, &[2]);
    let ring = invariant_slice(&rp, 12).unwrap();
    for d in 0..=12 {
        // coefficient of t^d in 1/((1-t)(1-t^2))
        let oracle = d / 2 + 1;
        ensure(ring.dims().get(d) == oracle, format!("dim R_{d} = {}, expected {oracle}", ring.dims().get(d)))?;
    }
    let tr = transfer_slice(&rp, ring.ring(), 12).unwrap();
    let gen = ideal_slice(&ring, &[rp.x(1, 1).unwrap()], 12).unwrap();
    for d in 0..=12 {
        ensure(tr.basis().polys(d).len() == gen.polys(d).len(), format!("degree {d}: dimensions differ from (x[1,1])"))?;
        for f in gen.polys(d) {
            ensure(tr.basis().contains(&f).unwrap(), format!("{} is not a transfer", rp.render(&f)))?;
        }
    }
    let q = quotient_dims(ring.basis(), tr.basis()).unwrap();
    let alt: Vec<usize> = (0..=12).map(|d| 1 - d % 2).collect();
    ensure(q.dims() == alt.as_slice(), format!("quotient dims {:?}", q.dims()))?;
    let (code, _, r) = modinv(&["hilbert", "--p", "2", "--blocks", "2", "--max-degree", "12"])?;
    ensure(code == 0, format!("exit {code}"))?;
    let w = witness(find(&r, "hilbert-data")?, "dimensions")?;
    ensure(usizes(&w["quotient"]) == alt.iter().map(|&x| x as i64).collect::<Vec<_>>(), "CLI quotient dims")?;
    Ok("dims 1,1,2,2,...; I^G = (x[1,1]); quotient 1,0,1,0,... to degree 12".into())
}

fn criterion_10(first: &str) -> Check {
    let (_, second, _) = modinv(&["depth-report", "--p", "2", "--blocks", "2,2", "--max-degree", "10"])?;
    ensure(first == second, "reports differ")?;
    Ok(format!("{} bytes identical", first.len()))
}

fn main() {
    let mut hilbert_reports = Vec::new();
    let (code, depth_text, depth_report) =
        modinv(&["depth-report", "--p", "2", "--blocks", "2,2", "--max-degree", "10"]).expect("depth-report runs");
    let results: Vec<(usize, Check)> = vec![
        (1, criterion_1(&mut hilbert_reports)),
        (2, if code == 0 { criterion_2(&depth_report) } else { Err(format!("depth-report exit {code}")) }),
        (3, criterion_3(&mut hilbert_reports)),
        (4, criterion_4(&mut hilbert_reports)),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, {
            hilbert_reports.push(depth_report.clone());
            criterion_7(&hilbert_reports)
        }),
        (8, criterion_8()),
        (9, criterion_9()),
        (10, criterion_10(&depth_text)),
    ];
    let mut failed = 0;
    for (k, r) in &results {
        match r {
            Ok(msg) => println!("criterion {k:>2}: PASS  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k:>2}: FAIL  {msg}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
