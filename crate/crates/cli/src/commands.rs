use std::error::Error as StdError;
use std::sync::Arc;

use modinv_core::depthlab::{
    bounded_depth, bounded_grade, canonical_sequence, depth_inequality_audit, expected_invariant_depth,
    norm_reduction_check, run_sequence, socle_search, transfer_quotient_check, verify_socle_witness,
    DepthEvidence, DepthInstance, GradedModuleView, SearchOptions,
};
use modinv_core::invariants::{
    growth_violation, ideal_slice, invariant_slice, quotient_dims, transfer_generators, transfer_slice,
    InvariantRingSlice,
};
use modinv_core::monoalg::preset;
use modinv_core::report::TRUNCATION_NOTE;
use modinv_core::sample::{random_invariant, random_poly};
use modinv_core::{CheckReport, CpRep, GradedBasis, MatFp, Poly, PrimeP};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::report::Report;
use crate::{Command, Instance};

type Outcome = Result<Report, Box<dyn StdError>>;

pub fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Hilbert { instance, .. } => hilbert(instance),
        Command::Regseq {
            instance,
            sequence,
            socle_cap,
            ..
        } => regseq(instance, sequence, *socle_cap),
        Command::TransferQuotient { instance, .. } => transfer_quotient(instance),
        Command::NormDecompose {
            instance,
            poly,
            samples,
            seed,
            degree,
            divide_by,
            ..
        } => norm_decompose(instance, poly.as_deref(), *samples, *seed, *degree, divide_by.as_deref()),
        Command::Grade {
            instance,
            search_cap,
            ..
        } => grade(instance, *search_cap),
        Command::DepthReport { instance, .. } => depth_report(instance),
        Command::MonomialExample { name, .. } => monomial_example(name),
    }
}

fn config(command: &str, inst: &Instance) -> Map<String, Value> {
    let mut c = Map::new();
    c.insert("command".into(), json!(command));
    c.insert("p".into(), json!(inst.p));
    c.insert("blocks".into(), json!(inst.blocks));
    c.insert("max_degree".into(), json!(inst.max_degree));
    c
}

/// Validated representation; `matrices` additionally requires a prime the
/// linear algebra supports.
fn representation(inst: &Instance, matrices: bool) -> Result<CpRep, Box<dyn StdError>> {
    let p = PrimeP::new(inst.p)?;
    if matrices {
        MatFp::empty(p, 0)?;
    }
    Ok(CpRep::new(p, inst.blocks.clone())?)
}

fn ring_slice(rep: &CpRep, d: usize) -> Result<Arc<InvariantRingSlice>, Box<dyn StdError>> {
    Ok(Arc::new(invariant_slice(rep, d)?))
}

fn base_check(name: &str, rep: &CpRep, d: usize) -> CheckReport {
    CheckReport::new(name)
        .param("p", rep.field().get())
        .param("blocks", rep.blocks())
        .param("max_degree", d)
}

fn hilbert(inst: &Instance) -> Outcome {
    let rep = representation(inst, true)?;
    let d = inst.max_degree;
    let ring = ring_slice(&rep, d)?;
    let tr = transfer_slice(&rep, ring.ring(), d)?;
    let mut checks = Vec::new();

    let mut nested = base_check("transfer-in-invariants", &rep, d);
    nested.degrees_checked = (0..=d).collect();
    if let Some(deg) = tr.basis().first_non_inclusion(ring.basis())? {
        nested.fail(json!({"kind": "not-invariant", "degree": deg}));
    }
    let failed = !nested.pass;
    checks.push(nested);
    if failed {
        return Ok(Report::new(config("hilbert", inst), checks));
    }
    let quotient = quotient_dims(ring.basis(), tr.basis())?;

    let mut data = base_check("hilbert-data", &rep, d);
    data.degrees_checked = (0..=d).collect();
    data.witness(json!({
        "kind": "dimensions",
        "invariants": ring.dims(),
        "transfer_ideal": tr.dims(),
        "quotient": quotient,
    }));
    checks.push(data);

    let (l, p) = (rep.num_blocks(), rep.field().get() as usize);
    let mut growth = base_check("quotient-growth", &rep, d)
        .param("order", l)
        .param("step", p);
    growth.note(format!(
        "the {l}-fold difference with step {p} of the quotient dimensions vanishes on the upper half of the degree range"
    ));
    growth.note(TRUNCATION_NOTE);
    let diffs = quotient.finite_difference(l, p);
    growth.degrees_checked = diffs.iter().map(|&(deg, _)| deg).collect();
    match growth_violation(&quotient, l, p) {
        Some((deg, value)) => growth.fail(json!({"kind": "nonzero-difference", "degree": deg, "value": value})),
        None => growth.witness(json!({"kind": "differences", "values": diffs})),
    }
    checks.push(growth);
    Ok(Report::new(config("hilbert", inst), checks))
}

fn read_sequence(rep: &CpRep, source: &str) -> Result<(Vec<Poly>, bool), Box<dyn StdError>> {
    if source == "canonical" {
        return Ok((canonical_sequence(rep)?, true));
    }
    let text = std::fs::read_to_string(source).map_err(|e| format!("{source}: {e}"))?;
    let mut seq = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        seq.push(rep.parse(line).map_err(|e| format!("{source}:{}: {e}", n + 1))?);
    }
    if seq.is_empty() {
        return Err(format!("{source}: no polynomials").into());
    }
    Ok((seq, false))
}

fn regseq(inst: &Instance, sequence: &str, socle_cap: Option<usize>) -> Outcome {
    let rep = representation(inst, true)?;
    let d = inst.max_degree;
    let (seq, canonical) = read_sequence(&rep, sequence)?;
    let ring = ring_slice(&rep, d)?;
    for f in &seq {
        ring.check_element(f)?;
    }
    let view = GradedModuleView::ring_module(ring)?;
    let (cert, fin) = run_sequence(&view, &seq)?;
    let mut checks = cert.step_reports(&rep, "regseq");

    let mut summary = base_check("regular-sequence", &rep, d)
        .param("length", seq.len())
        .param("sequence", seq.iter().map(|f| rep.render(f)).collect::<Vec<_>>());
    summary.note(TRUNCATION_NOTE);
    if !cert.passed() {
        summary.fail(json!({
            "kind": "step-failed",
            "step": cert.first_failure().map(|k| k + 1).unwrap_or(cert.steps.len()),
        }));
    }
    if canonical {
        let expected = expected_invariant_depth(&rep);
        summary = summary.param("expected_length", expected);
        summary.require(
            seq.len() == expected,
            json!({"kind": "length", "found": seq.len(), "expected": expected}),
        );
    }
    summary.witness(json!({"kind": "final-quotient-dims", "dims": fin.dims()}));

    let mut maximality = None;
    if cert.passed() {
        let cap = socle_cap.unwrap_or(d.saturating_sub(2));
        match socle_search(&fin, cap)? {
            Some(w) => {
                let mut m = base_check("maximality-witness", &rep, d).param("socle_cap", cap);
                m.note(TRUNCATION_NOTE);
                m.note(format!(
                    "v is annihilated by every invariant u with deg u <= {}",
                    d - w.degree
                ));
                m.degrees_checked = w.tested_degrees.clone();
                let ok = verify_socle_witness(&fin, &w)?;
                m.require(ok, json!({"kind": "recheck-failed", "element": rep.render(&w.element)}));
                m.witness(json!({"kind": "socle", "witness": w.to_json(&rep)}));
                maximality = Some(m);
            }
            None => summary.note(format!("no maximality witness of degree <= {cap}")),
        }
    }
    checks.push(summary);
    checks.extend(maximality);
    let mut cfg = config("regseq", inst);
    cfg.insert("sequence".into(), json!(sequence));
    Ok(Report::new(cfg, checks))
}

fn transfer_quotient(inst: &Instance) -> Outcome {
    let rep = representation(inst, true)?;
    let tq = transfer_quotient_check(&rep, inst.max_degree)?;
    Ok(Report::new(config("transfer-quotient", inst), tq.checks))
}

struct DecompOutcome {
    input: Poly,
    invariant_input: bool,
    failures: Vec<Value>,
    json: Value,
}

fn decompose_one(rep: &CpRep, f: &Poly, blocks: &[usize]) -> Result<DecompOutcome, modinv_core::Error> {
    let dec = rep.norm_decompose(f, blocks)?;
    let mut failures = Vec::new();
    let render = |g: &Poly| rep.render(g);
    if &dec.reconstruct(rep)? != f {
        failures.push(json!({"kind": "reconstruction", "input": render(f)}));
    }
    if !dec.degree_bounds_hold(rep)? {
        failures.push(json!({"kind": "degree-bound", "input": render(f)}));
    }
    let reversed: Vec<usize> = blocks.iter().rev().copied().collect();
    let nf = rep.normal_form(f, &reversed)?;
    if nf != dec.remainder {
        failures.push(json!({
            "kind": "remainder-not-unique",
            "input": render(f),
            "remainder": render(&dec.remainder),
            "other_remainder": render(&nf),
        }));
    }
    let invariant_input = rep.is_invariant(f);
    if invariant_input {
        for (q, j) in dec.quotients.iter().zip(blocks) {
            if !rep.is_invariant(q) {
                failures.push(json!({"kind": "quotient-not-invariant", "input": render(f), "block": j, "quotient": render(q)}));
            }
        }
        if !rep.is_invariant(&dec.remainder) {
            failures.push(json!({"kind": "remainder-not-invariant", "input": render(f), "remainder": render(&dec.remainder)}));
        }
    }
    let json = json!({
        "input": render(f),
        "blocks": blocks,
        "quotients": dec.quotients.iter().map(render).collect::<Vec<_>>(),
        "remainder": render(&dec.remainder),
        "invariant_input": invariant_input,
    });
    Ok(DecompOutcome {
        input: f.clone(),
        invariant_input,
        failures,
        json,
    })
}

fn norm_decompose(
    inst: &Instance,
    poly: Option<&str>,
    samples: Option<usize>,
    seed: u64,
    degree: u32,
    divide_by: Option<&[usize]>,
) -> Outcome {
    let rep = representation(inst, false)?;
    let blocks: Vec<usize> = match divide_by {
        Some(b) => b.to_vec(),
        None => (1..=rep.num_blocks()).collect(),
    };
    let mut cfg = config("norm-decompose", inst);
    cfg.insert("divide_by".into(), json!(blocks));
    let mut checks = Vec::new();
    match (poly, samples) {
        (Some(text), _) => {
            let f = rep.parse(text)?;
            let out = decompose_one(&rep, &f, &blocks)?;
            let mut r = base_check("norm-decomposition", &rep, inst.max_degree);
            r.witness(out.json);
            for w in out.failures {
                r.fail(w);
            }
            cfg.insert("poly".into(), json!(text));
            checks.push(r);
        }
        (None, Some(n)) => {
            let mut rng = StdRng::seed_from_u64(seed);
            let general: Vec<Poly> = (0..n)
                .map(|_| random_poly(&mut rng, rep.field(), rep.dim(), degree, 6))
                .collect();
            let invariant = (0..n)
                .map(|_| random_invariant(&mut rng, &rep, degree, 4))
                .collect::<Result<Vec<_>, _>>()?;
            for (name, inputs) in [("norm-decomposition-random", general), ("norm-decomposition-invariant", invariant)] {
                let outs = inputs
                    .par_iter()
                    .map(|f| decompose_one(&rep, f, &blocks))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut r = base_check(name, &rep, inst.max_degree)
                    .param("samples", n)
                    .param("seed", seed)
                    .param("degree", degree);
                let invariant_inputs = outs.iter().filter(|o| o.invariant_input).count();
                let nonzero = outs.iter().filter(|o| !o.input.is_zero()).count();
                for o in &outs {
                    for w in &o.failures {
                        r.fail(w.clone());
                    }
                }
                r.witness(json!({
                    "kind": "counts",
                    "inputs": outs.len(),
                    "nonzero_inputs": nonzero,
                    "invariant_inputs": invariant_inputs,
                    "failures": outs.iter().map(|o| o.failures.len()).sum::<usize>(),
                }));
                if name == "norm-decomposition-invariant" {
                    r.require(
                        invariant_inputs == outs.len(),
                        json!({"kind": "sampler-produced-non-invariant"}),
                    );
                }
                checks.push(r);
            }
            cfg.insert("samples".into(), json!(n));
            cfg.insert("seed".into(), json!(seed));
            cfg.insert("degree".into(), json!(degree));
        }
        (None, None) => return Err("norm-decompose needs --poly or --samples".into()),
    }
    Ok(Report::new(cfg, checks))
}

fn search_options(d: usize, cap: Option<usize>) -> SearchOptions {
    let mut opts = SearchOptions::for_bound(d);
    if let Some(c) = cap {
        opts.degree_cap = c.min(d);
    }
    opts
}

fn grade(inst: &Instance, search_cap: Option<usize>) -> Outcome {
    let rep = representation(inst, true)?;
    rep.check_nontrivial()?;
    let d = inst.max_degree;
    let opts = search_options(d, search_cap);
    let ring = ring_slice(&rep, d)?;
    let norms = (1..=rep.num_blocks())
        .map(|j| rep.top_norm(j))
        .collect::<Result<Vec<_>, _>>()?;
    let reduced = GradedModuleView::quotient_ring(ring.clone(), ideal_slice(&ring, &norms, d)?)?;
    let gens = transfer_generators(&rep, ring.ring(), opts.degree_cap)?;
    let (mut g, ev) = bounded_grade(&gens, &reduced, opts)?;
    g = g.param("module", "invariants modulo top-variable norms");
    g.note(format!("grade found: {}", ev.bound().value));
    let nr = norm_reduction_check(&GradedModuleView::ring_module(ring)?, opts)?;
    let mut cfg = config("grade", inst);
    cfg.insert("search_degree_cap".into(), json!(opts.degree_cap));
    Ok(Report::new(cfg, vec![g, nr.report]))
}

fn evidence_check(name: &str, rep: &CpRep, d: usize, ev: &DepthEvidence) -> CheckReport {
    let mut r = base_check(name, rep, d);
    r.note(TRUNCATION_NOTE);
    if ev.module_zero {
        r.note(format!("module is zero up to {d}"));
    }
    r.witness(json!({"kind": "depth", "evidence": ev.to_json(rep)}));
    r
}

fn depth_report(inst: &Instance) -> Outcome {
    let rep = representation(inst, true)?;
    rep.check_nontrivial()?;
    let d = inst.max_degree;
    let opts = SearchOptions::for_bound(d);
    let ring = ring_slice(&rep, d)?;
    let whole = GradedModuleView::ring_module(ring.clone())?;
    let seq = canonical_sequence(&rep)?;
    let (cert, _) = run_sequence(&whole, &seq)?;
    let mut checks = cert.step_reports(&rep, "canonical");

    let expected = expected_invariant_depth(&rep);
    let ring_ev = bounded_depth(&whole, opts)?;
    let mut rc = evidence_check("ring-depth", &rep, d, &ring_ev).param("expected", expected);
    rc.require(
        ring_ev.bound().value == expected,
        json!({"kind": "depth-differs", "found": ring_ev.bound().value, "expected": expected}),
    );
    checks.push(rc);

    let l = rep.num_blocks();
    let mut labels: Vec<(String, GradedBasis, Option<usize>)> = (1..=seq.len())
        .map(|k| Ok((format!("I_{k}"), ideal_slice(&ring, &seq[..k], d)?, Some(k))))
        .collect::<Result<_, modinv_core::Error>>()?;
    let tr = transfer_slice(&rep, ring.ring(), d)?;
    labels.push(("transfer-ideal".into(), tr.basis().clone(), None));
    let mut plus = ring.basis().components().to_vec();
    plus[0] = MatFp::empty(rep.field(), 1)?;
    labels.push(("maximal-ideal".into(), GradedBasis::new(ring.ring().clone(), plus)?, None));

    let results = labels
        .par_iter()
        .map(|(label, ideal, prefix)| {
            let i = bounded_depth(&GradedModuleView::ideal_module(ring.clone(), ideal.clone())?, opts)?;
            let q = bounded_depth(&GradedModuleView::quotient_ring(ring.clone(), ideal.clone())?, opts)?;
            Ok((label.clone(), *prefix, i, q))
        })
        .collect::<Result<Vec<_>, modinv_core::Error>>()?;

    let mut instances = Vec::new();
    for (label, prefix, i, q) in results {
        let mut c = evidence_check(&format!("depth-{label}"), &rep, d, &i);
        c.witness(json!({"kind": "quotient-depth", "evidence": q.to_json(&rep)}));
        if label == "transfer-ideal" {
            c = c.param("expected", l + 1);
            c.require(
                i.bound().value == l + 1 && q.bound().value == l,
                json!({"kind": "depth-differs", "ideal": i.bound(), "quotient": q.bound(), "expected_ideal": l + 1}),
            );
        }
        checks.push(c);
        instances.push(DepthInstance {
            label,
            ring: ring_ev.bound(),
            ideal: i.bound(),
            quotient: q.bound(),
            regular_prefix: prefix,
        });
    }
    checks.push(depth_inequality_audit(&instances).param("max_degree", d));
    Ok(Report::new(config("depth-report", inst), checks))
}

fn monomial_example(name: &str) -> Outcome {
    let p = preset(name).ok_or_else(|| format!("unknown example {name}"))?;
    let checks = p.run()?;
    let mut cfg = Map::new();
    cfg.insert("command".into(), json!("monomial-example"));
    cfg.insert("name".into(), json!(name));
    Ok(Report::new(cfg, checks))
}
