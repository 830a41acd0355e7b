//! Bounded verification of regular sequences, grade and depth.
//!
//! Every statement here is checked degreewise up to an explicit bound `D`.
//! "Regular up to D" means multiplication is injective on every source
//! degree `d <= D - deg f`; it is evidence, not proof. A failure is always a
//! certified counterexample: an explicit `g` with `f·g = 0` and `g ≠ 0` in
//! the module.

use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gradedla::{GradedBasis, MatFp};
use crate::invariants::{self, HilbertData, InvariantRingSlice};
use crate::poly::Poly;
use crate::rep::CpRep;
use crate::report::{CheckReport, TRUNCATION_NOTE};

/// `numerator / denominator` as a graded module over the invariant ring
/// slice. Both are graded subspaces of `K[V]` closed under multiplication by
/// invariants, with `denominator ⊆ numerator`.
#[derive(Debug, Clone)]
pub struct GradedModuleView {
    ring: Arc<InvariantRingSlice>,
    numerator: GradedBasis,
    denominator: GradedBasis,
    complements: Vec<OnceLock<MatFp>>,
}

impl GradedModuleView {
    pub fn new(
        ring: Arc<InvariantRingSlice>,
        numerator: GradedBasis,
        denominator: GradedBasis,
    ) -> Result<Self> {
        if let Some(d) = denominator.first_non_inclusion(&numerator)? {
            return Err(Error::InclusionFailure(d));
        }
        let n = numerator.max_degree() + 1;
        Ok(GradedModuleView {
            ring,
            numerator,
            denominator,
            complements: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    /// The invariant ring as a module over itself.
    pub fn ring_module(ring: Arc<InvariantRingSlice>) -> Result<Self> {
        let num = ring.basis().clone();
        let den = GradedBasis::zero(num.ring().clone(), num.max_degree())?;
        GradedModuleView::new(ring, num, den)
    }

    /// `R / J` for an ideal slice `J`.
    pub fn quotient_ring(ring: Arc<InvariantRingSlice>, ideal: GradedBasis) -> Result<Self> {
        let num = ring.basis().clone();
        GradedModuleView::new(ring, num, ideal)
    }

    /// An ideal slice `J` as a module.
    pub fn ideal_module(ring: Arc<InvariantRingSlice>, ideal: GradedBasis) -> Result<Self> {
        let den = GradedBasis::zero(ideal.ring().clone(), ideal.max_degree())?;
        GradedModuleView::new(ring, ideal, den)
    }

    pub fn ring(&self) -> &Arc<InvariantRingSlice> {
        &self.ring
    }

    pub fn rep(&self) -> &CpRep {
        self.ring.rep()
    }

    pub fn numerator(&self) -> &GradedBasis {
        &self.numerator
    }

    pub fn denominator(&self) -> &GradedBasis {
        &self.denominator
    }

    pub fn max_degree(&self) -> usize {
        self.numerator.max_degree()
    }

    pub fn dims(&self) -> HilbertData {
        HilbertData::new(
            self.numerator
                .dims()
                .iter()
                .zip(self.denominator.dims())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn dim(&self, d: usize) -> usize {
        self.numerator.dim(d) - self.denominator.dim(d)
    }

    pub fn is_zero(&self) -> bool {
        (0..=self.max_degree()).all(|d| self.dim(d) == 0)
    }

    /// Representatives of a basis of the degree-`d` component.
    pub fn complement(&self, d: usize) -> &MatFp {
        self.complements[d].get_or_init(|| {
            self.numerator
                .component(d)
                .complement_modulo(self.denominator.component(d))
                .expect("compatible components")
        })
    }

    /// Whether a homogeneous element of the numerator is zero in the module.
    pub fn is_zero_class(&self, g: &Poly) -> Result<bool> {
        self.denominator.contains(g)
    }

    /// `M / f·M`.
    pub fn quotient_by(&self, f: &Poly) -> Result<GradedModuleView> {
        let e = self.ring.check_element(f)?;
        let graded = self.numerator.ring();
        let comps = (0..=self.max_degree())
            .into_par_iter()
            .map(|d| {
                let den = self.denominator.component(d);
                if d < e {
                    return Ok(den.clone());
                }
                let prod = graded.mult_map(self.complement(d - e), d - e, f)?;
                den.span_sum(&prod)
            })
            .collect::<Result<Vec<_>>>()?;
        let den = GradedBasis::new(graded.clone(), comps)?;
        GradedModuleView::new(self.ring.clone(), self.numerator.clone(), den)
    }

    pub fn render(&self, f: &Poly) -> String {
        self.rep().render(f)
    }
}

/// An explicit `g ≠ 0` in the module with `f·g = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelWitness {
    pub degree: usize,
    pub element: Poly,
}

/// Outcome of one injectivity check of multiplication by an element.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub element: Poly,
    pub degree: usize,
    pub degrees_checked: Vec<usize>,
    /// Source degrees with a nonzero module component.
    pub nonzero_sources: Vec<usize>,
    pub injective: bool,
    pub witness: Option<KernelWitness>,
    pub dims_before: Vec<usize>,
    /// Dimensions of `M / f·M`, when the quotient was formed.
    pub dims_after: Option<Vec<usize>>,
    /// `h_{M/fM}(d) = h_M(d) - h_M(d - deg f)` for all `d <= D`.
    pub hilbert_consistent: Option<bool>,
}

impl StepRecord {
    /// Passed with at least one non-vacuous degree.
    pub fn regular(&self) -> bool {
        self.injective && !self.nonzero_sources.is_empty()
    }

    pub fn to_json(&self, rep: &CpRep) -> serde_json::Value {
        json!({
            "element": rep.render(&self.element),
            "degree": self.degree,
            "injective": self.injective,
            "degrees_checked": self.degrees_checked,
            "nonzero_source_degrees": self.nonzero_sources,
            "kernel_witness": self.witness.as_ref().map(|w| json!({
                "degree": w.degree,
                "element": rep.render(&w.element),
            })),
            "dims_before": self.dims_before,
            "dims_after": self.dims_after,
            "hilbert_consistent": self.hilbert_consistent,
        })
    }
}

fn check_injective(view: &GradedModuleView, f: &Poly) -> Result<StepRecord> {
    let e = view.ring.check_element(f)?;
    if e == 0 {
        return Err(Error::DegreeZero);
    }
    let big_d = view.max_degree();
    let degrees: Vec<usize> = if e <= big_d { (0..=big_d - e).collect() } else { Vec::new() };
    let graded = view.numerator.ring().clone();
    let outcomes = degrees
        .par_iter()
        .map(|&d| -> Result<Option<Poly>> {
            let c = view.complement(d);
            if c.nrows() == 0 {
                return Ok(None);
            }
            let img = graded
                .mult_map(c, d, f)?
                .reduce_rows(view.denominator.component(d + e))?;
            if img.rank() == c.nrows() {
                return Ok(None);
            }
            let lambda = img.left_kernel();
            let g = c.combine_rows(&lambda.row(0));
            Ok(Some(graded.from_coords(d, &g)))
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = degrees
        .iter()
        .zip(outcomes)
        .find_map(|(&d, w)| w.map(|element| KernelWitness { degree: d, element }));
    Ok(StepRecord {
        element: f.clone(),
        degree: e,
        nonzero_sources: degrees
            .iter()
            .copied()
            .filter(|&d| view.dim(d) > 0)
            .collect(),
        degrees_checked: degrees,
        injective: witness.is_none(),
        witness,
        dims_before: view.dims().dims().to_vec(),
        dims_after: None,
        hilbert_consistent: None,
    })
}

fn params(rep: &CpRep, max_degree: usize) -> CheckReport {
    CheckReport::new("")
        .param("p", rep.field().get())
        .param("blocks", rep.blocks())
        .param("max_degree", max_degree)
}

fn named(mut r: CheckReport, name: impl Into<String>) -> CheckReport {
    r.name = name.into();
    r
}

/// Injectivity of multiplication by `f` on the module, degree by degree.
pub fn is_regular_element(view: &GradedModuleView, f: &Poly) -> Result<CheckReport> {
    let start = Instant::now();
    let rec = check_injective(view, f)?;
    let rep = view.rep();
    let mut r = named(params(rep, view.max_degree()), "regular-element")
        .param("element", rep.render(f));
    r.degrees_checked = rec.degrees_checked.clone();
    r.note(TRUNCATION_NOTE);
    if view.is_zero() {
        r.note(format!("module is zero up to {}", view.max_degree()));
    } else if rec.nonzero_sources.is_empty() {
        r.note("vacuous: no nonzero source degree within the bound");
    }
    if let Some(w) = &rec.witness {
        r.fail(json!({
            "kind": "zero-divisor",
            "element": rep.render(f),
            "degree": w.degree,
            "kernel_element": rep.render(&w.element),
        }));
    }
    Ok(r.timed(start))
}

/// A nonzero class killed by every tested element of positive degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocleWitness {
    pub degree: usize,
    pub element: Poly,
    /// Degrees of the annihilating elements that were tested.
    pub tested_degrees: Vec<usize>,
}

impl SocleWitness {
    pub fn to_json(&self, rep: &CpRep) -> serde_json::Value {
        json!({
            "degree": self.degree,
            "element": rep.render(&self.element),
            "annihilator_degrees_tested": self.tested_degrees,
        })
    }
}

/// Elements the socle search tests against, grouped by degree.
pub fn invariant_annihilators(ring: &InvariantRingSlice) -> Vec<(usize, Vec<Poly>)> {
    (1..=ring.max_degree()).map(|e| (e, ring.polys(e))).collect()
}

/// Lowest-degree nonzero class `v` (of degree `<= v_cap`) with `u·v = 0` for
/// every given `u` with `deg u + deg v <= D`.
pub fn annihilated_class(
    view: &GradedModuleView,
    annihilators: &[(usize, Vec<Poly>)],
    v_cap: usize,
) -> Result<Option<SocleWitness>> {
    let big_d = view.max_degree();
    let graded = view.numerator.ring().clone();
    for dv in 0..=v_cap.min(big_d.saturating_sub(1)) {
        let c = view.complement(dv);
        if c.nrows() == 0 {
            continue;
        }
        // candidates: rows of `cur`, each a class in degree dv
        let mut cur = c.clone();
        let mut tested = Vec::new();
        'outer: for (e, us) in annihilators {
            if dv + e > big_d || us.is_empty() {
                continue;
            }
            tested.push(*e);
            let den = view.denominator.component(dv + e);
            for u in us {
                let img = graded.mult_map(&cur, dv, u)?.reduce_rows(den)?;
                if img.rank() == 0 {
                    continue;
                }
                let lambda = img.left_kernel();
                if lambda.nrows() == 0 {
                    cur = MatFp::empty(graded.field(), c.ncols())?;
                    break 'outer;
                }
                cur = lambda.mul(&cur)?.rref();
            }
        }
        if cur.nrows() > 0 && !tested.is_empty() {
            return Ok(Some(SocleWitness {
                degree: dv,
                element: graded.from_coords(dv, &cur.row(0)),
                tested_degrees: tested,
            }));
        }
    }
    Ok(None)
}

/// Socle search over the whole positive part of the invariant slice.
pub fn socle_search(view: &GradedModuleView, v_cap: usize) -> Result<Option<SocleWitness>> {
    annihilated_class(view, &invariant_annihilators(view.ring()), v_cap)
}

/// Independent recheck of a socle witness: nonzero in the module and
/// annihilated by every basis invariant `u` with `deg u + deg v <= D`.
pub fn verify_socle_witness(view: &GradedModuleView, w: &SocleWitness) -> Result<bool> {
    if view.is_zero_class(&w.element)? || !view.numerator.contains(&w.element)? {
        return Ok(false);
    }
    for e in 1..=view.max_degree().saturating_sub(w.degree) {
        for u in view.ring.polys(e) {
            if !view.is_zero_class(&(&u * &w.element))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-step record of a sequence verification plus optional maximality
/// evidence.
#[derive(Debug, Clone)]
pub struct RegSeqCert {
    pub sequence: Vec<Poly>,
    pub verified_to: usize,
    pub steps: Vec<StepRecord>,
    pub socle: Option<SocleWitness>,
}

impl RegSeqCert {
    /// Every element regular, no vacuous step, Hilbert data consistent.
    pub fn passed(&self) -> bool {
        self.steps.len() == self.sequence.len()
            && self
                .steps
                .iter()
                .all(|s| s.regular() && s.hilbert_consistent != Some(false))
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.steps.iter().position(|s| !s.regular())
    }

    /// One report per attempted step.
    pub fn step_reports(&self, rep: &CpRep, prefix: &str) -> Vec<CheckReport> {
        self.steps
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let mut r = named(params(rep, self.verified_to), format!("{prefix}-step-{}", k + 1))
                    .param("element", rep.render(&s.element))
                    .param("position", k + 1);
                r.degrees_checked = s.degrees_checked.clone();
                r.note(TRUNCATION_NOTE);
                if let Some(w) = &s.witness {
                    r.fail(json!({
                        "kind": "zero-divisor",
                        "element": rep.render(&s.element),
                        "degree": w.degree,
                        "kernel_element": rep.render(&w.element),
                    }));
                } else if s.nonzero_sources.is_empty() {
                    r.fail(json!({"kind": "vacuous", "element": rep.render(&s.element)}));
                    r.note("module is zero on every checked source degree");
                } else {
                    r.witness(s.to_json(rep));
                }
                if s.hilbert_consistent == Some(false) {
                    r.fail(json!({"kind": "hilbert-mismatch", "step": k + 1}));
                }
                r
            })
            .collect()
    }
}

fn hilbert_step_consistent(before: &[usize], after: &[usize], e: usize) -> bool {
    (0..before.len()).all(|d| {
        let shifted = if d >= e { before[d - e] } else { 0 };
        before[d] as i64 - shifted as i64 == after[d] as i64
    })
}

/// Checks and quotients one element; the returned view is `M/fM` when the
/// step is regular and `M` otherwise.
fn step(view: &GradedModuleView, f: &Poly) -> Result<(StepRecord, Option<GradedModuleView>)> {
    let mut rec = check_injective(view, f)?;
    if !rec.regular() {
        return Ok((rec, None));
    }
    let next = view.quotient_by(f)?;
    let after = next.dims().dims().to_vec();
    rec.hilbert_consistent = Some(hilbert_step_consistent(&rec.dims_before, &after, rec.degree));
    rec.dims_after = Some(after);
    Ok((rec, Some(next)))
}

/// Runs the sequence, stopping at the first failing element. Returns the
/// certificate and the last module reached.
pub fn run_sequence(view: &GradedModuleView, seq: &[Poly]) -> Result<(RegSeqCert, GradedModuleView)> {
    for f in seq {
        view.ring.check_element(f)?;
    }
    let mut cur = view.clone();
    let mut steps = Vec::with_capacity(seq.len());
    for f in seq {
        let (rec, next) = step(&cur, f)?;
        steps.push(rec);
        match next {
            Some(n) => cur = n,
            None => break,
        }
    }
    Ok((
        RegSeqCert {
            sequence: seq.to_vec(),
            verified_to: view.max_degree(),
            steps,
            socle: None,
        },
        cur,
    ))
}

pub fn verify_regular_sequence(view: &GradedModuleView, seq: &[Poly]) -> Result<RegSeqCert> {
    Ok(run_sequence(view, seq)?.0)
}

/// The maximal regular sequence of the invariant ring for a representation
/// without trivial summands:
/// `x11, x12, N(top_1), …, N(top_l)` when `l > 1`,
/// `x11, N(x21), N(x_{n_1,1})` when `l = 1, n_1 > 2`,
/// `x11, N(x21)` when `l = 1, n_1 = 2`.
pub fn canonical_sequence(rep: &CpRep) -> Result<Vec<Poly>> {
    rep.check_nontrivial()?;
    let l = rep.num_blocks();
    let mut seq = vec![rep.x(1, 1)?];
    if l > 1 {
        seq.push(rep.x(1, 2)?);
        for j in 1..=l {
            seq.push(rep.top_norm(j)?);
        }
    } else {
        seq.push(rep.norm(2, 1)?);
        if rep.blocks()[0] > 2 {
            seq.push(rep.top_norm(1)?);
        }
    }
    Ok(seq)
}

/// `min{l + 2, dim V}`.
pub fn expected_invariant_depth(rep: &CpRep) -> usize {
    (rep.num_blocks() + 2).min(rep.dim())
}

/// A bounded depth (or grade) value: the length of a verified regular
/// sequence, exact when a maximality witness was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DepthBound {
    pub value: usize,
    pub maximal: bool,
}

impl DepthBound {
    pub fn exact(value: usize) -> Self {
        DepthBound {
            value,
            maximal: true,
        }
    }

    pub fn at_least(value: usize) -> Self {
        DepthBound {
            value,
            maximal: false,
        }
    }

    fn hi(&self) -> Option<usize> {
        self.maximal.then_some(self.value)
    }
}

/// Result of a greedy search for a regular sequence.
#[derive(Debug, Clone)]
pub struct DepthEvidence {
    pub cert: RegSeqCert,
    /// Candidates rejected in the final round, with their kernel witnesses.
    pub rejected: Vec<StepRecord>,
    pub module_zero: bool,
}

impl DepthEvidence {
    pub fn bound(&self) -> DepthBound {
        DepthBound {
            value: self.cert.steps.len(),
            maximal: self.cert.socle.is_some(),
        }
    }

    pub fn sequence(&self) -> Vec<Poly> {
        self.cert.steps.iter().map(|s| s.element.clone()).collect()
    }

    pub fn to_json(&self, rep: &CpRep) -> serde_json::Value {
        json!({
            "length": self.cert.steps.len(),
            "maximal": self.cert.socle.is_some(),
            "sequence": self.cert.steps.iter().map(|s| rep.render(&s.element)).collect::<Vec<_>>(),
            "steps": self.cert.steps.iter().map(|s| s.to_json(rep)).collect::<Vec<_>>(),
            "maximality_witness": self.cert.socle.as_ref().map(|w| w.to_json(rep)),
            "module_zero": self.module_zero,
        })
    }
}

/// Limits of the greedy searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Largest candidate degree scanned.
    pub degree_cap: usize,
    /// Largest degree of a maximality witness.
    pub socle_cap: usize,
}

impl SearchOptions {
    /// Candidate cap `D - 1`, witness cap `D - 2`.
    pub fn for_bound(max_degree: usize) -> Self {
        SearchOptions {
            degree_cap: max_degree.saturating_sub(1),
            socle_cap: max_degree.saturating_sub(2),
        }
    }
}

/// Basis invariants of degrees `1..=cap`, ordered by (degree, row index).
pub fn depth_candidates(ring: &InvariantRingSlice, cap: usize) -> Vec<Poly> {
    (1..=cap.min(ring.max_degree()))
        .flat_map(|e| ring.polys(e))
        .collect()
}

/// Greedy search: repeatedly take the first candidate (by degree, then
/// index) that is regular on the current quotient. Ends with a search for an
/// element of the final quotient annihilated by every `annihilators` entry.
pub fn greedy_sequence(
    view: &GradedModuleView,
    candidates: &[Poly],
    annihilators: &[(usize, Vec<Poly>)],
    opts: SearchOptions,
) -> Result<DepthEvidence> {
    let mut cur = view.clone();
    let mut used = vec![false; candidates.len()];
    let mut steps = Vec::new();
    let mut rejected;
    loop {
        rejected = Vec::new();
        let mut advanced = false;
        for (k, f) in candidates.iter().enumerate() {
            if used[k] || f.homogeneous_degree()?.unwrap_or(0) as usize > opts.degree_cap {
                continue;
            }
            let (rec, next) = step(&cur, f)?;
            if let Some(next) = next {
                used[k] = true;
                steps.push(rec);
                cur = next;
                advanced = true;
                break;
            }
            if rec.witness.is_some() {
                rejected.push(rec);
            }
        }
        if !advanced {
            break;
        }
    }
    let socle = annihilated_class(&cur, annihilators, opts.socle_cap)?;
    Ok(DepthEvidence {
        cert: RegSeqCert {
            sequence: steps.iter().map(|s| s.element.clone()).collect(),
            verified_to: view.max_degree(),
            steps,
            socle,
        },
        rejected,
        module_zero: view.is_zero(),
    })
}

/// Bounded depth of a module: greedy over basis invariants, maximality by a
/// socle witness.
pub fn bounded_depth(view: &GradedModuleView, opts: SearchOptions) -> Result<DepthEvidence> {
    let ring = view.ring();
    greedy_sequence(
        view,
        &depth_candidates(ring, opts.degree_cap),
        &invariant_annihilators(ring),
        opts,
    )
}

/// Greedy lower bound for `grade(I, M)` where `ideal_gens` enumerates
/// homogeneous elements of `I` by degree. Maximality evidence is a class
/// killed by every listed generator.
pub fn bounded_grade(
    ideal_gens: &[Poly],
    view: &GradedModuleView,
    opts: SearchOptions,
) -> Result<(CheckReport, DepthEvidence)> {
    let start = Instant::now();
    let rep = view.rep();
    let mut by_degree: Vec<(usize, Vec<Poly>)> = Vec::new();
    for g in ideal_gens {
        let e = view.ring().check_element(g)?;
        match by_degree.iter_mut().find(|(d, _)| *d == e) {
            Some((_, v)) => v.push(g.clone()),
            None => by_degree.push((e, vec![g.clone()])),
        }
    }
    by_degree.sort_by_key(|(d, _)| *d);
    let ev = greedy_sequence(view, ideal_gens, &by_degree, opts)?;
    let mut r = named(params(rep, view.max_degree()), "bounded-grade")
        .param("search_degree_cap", opts.degree_cap)
        .param("spanning_elements", ideal_gens.len());
    r.degrees_checked = (1..=opts.degree_cap.min(view.max_degree())).collect();
    r.note(TRUNCATION_NOTE);
    r.note("greedy search: the length found is a lower bound for the grade");
    if ev.module_zero {
        r.note(format!("module is zero up to {}", view.max_degree()));
    }
    if ev.cert.socle.is_none() {
        r.note("no class annihilated by the ideal found within the bound");
    }
    r.witness(json!({"kind": "grade", "evidence": ev.to_json(rep)}));
    for rej in &ev.rejected {
        if let Some(w) = &rej.witness {
            r.witness(json!({
                "kind": "rejected",
                "element": rep.render(&rej.element),
                "degree": w.degree,
                "kernel_element": rep.render(&w.element),
            }));
        }
    }
    Ok((r.timed(start), ev))
}

/// Depth data of one instance `(R, I, R/I)`.
#[derive(Debug, Clone, Serialize)]
pub struct DepthInstance {
    pub label: String,
    pub ring: DepthBound,
    pub ideal: DepthBound,
    pub quotient: DepthBound,
    /// `I` is generated by the first `k` elements of a regular sequence of `R`.
    pub regular_prefix: Option<usize>,
}

struct Interval {
    lo: i64,
    hi: Option<i64>,
}

impl Interval {
    fn of(b: DepthBound) -> Self {
        Interval {
            lo: b.value as i64,
            hi: b.hi().map(|h| h as i64),
        }
    }
    fn shift(&self, k: i64) -> Self {
        Interval {
            lo: self.lo + k,
            hi: self.hi.map(|h| h + k),
        }
    }
    fn exact(&self) -> bool {
        self.hi == Some(self.lo)
    }
    /// Definitely `self < other`.
    fn surely_lt(&self, other: &Interval) -> bool {
        matches!(self.hi, Some(h) if h < other.lo)
    }
    fn disjoint(&self, other: &Interval) -> bool {
        self.surely_lt(other) || other.surely_lt(self)
    }
}

/// Checks the standard depth inequalities and equalities on computed
/// instances. With only lower bounds an equality degrades to a
/// compatibility check, which is recorded in the notes.
pub fn depth_inequality_audit(instances: &[DepthInstance]) -> CheckReport {
    let start = Instant::now();
    let mut r = CheckReport::new("depth-inequality-audit").param("instances", instances.len());
    r.note(TRUNCATION_NOTE);
    for inst in instances {
        let (rr, ii, qq) = (
            Interval::of(inst.ring),
            Interval::of(inst.ideal),
            Interval::of(inst.quotient),
        );
        let violation = |rule: &str, r: &mut CheckReport| {
            r.fail(json!({"kind": "violation", "instance": inst.label, "rule": rule, "data": inst}));
        };
        let min_lo = |a: &Interval, b: &Interval| Interval {
            lo: a.lo.min(b.lo),
            hi: None,
        };
        // depth R >= min{depth I, depth R/I}
        if rr.surely_lt(&min_lo(&ii, &qq)) {
            violation("depth(R) >= min{depth(I), depth(R/I)}", &mut r);
        }
        // depth I >= min{depth R, depth R/I + 1}
        if ii.surely_lt(&min_lo(&rr, &qq.shift(1))) {
            violation("depth(I) >= min{depth(R), depth(R/I)+1}", &mut r);
        }
        // depth R/I >= min{depth I - 1, depth R}
        if qq.surely_lt(&min_lo(&ii.shift(-1), &rr)) {
            violation("depth(R/I) >= min{depth(I)-1, depth(R)}", &mut r);
        }
        let equality = |rule: &str, a: &Interval, b: &Interval, r: &mut CheckReport| {
            if a.disjoint(b) || (a.exact() && b.exact() && a.lo != b.lo) {
                r.fail(json!({"kind": "violation", "instance": inst.label, "rule": rule, "data": inst}));
            } else if !(a.exact() && b.exact()) {
                r.note(format!(
                    "{}: {rule} checked one-sided (missing maximality evidence)",
                    inst.label
                ));
            }
        };
        if ii.surely_lt(&rr) || qq.surely_lt(&rr) {
            equality("depth(I) = depth(R/I) + 1", &ii, &qq.shift(1), &mut r);
        }
        if rr.surely_lt(&ii) {
            equality("depth(R/I) = depth(R)", &qq, &rr, &mut r);
        }
        if rr.surely_lt(&qq) {
            equality("depth(I) = depth(R)", &ii, &rr, &mut r);
        }
        if let Some(k) = inst.regular_prefix {
            equality(
                "depth((a_1..a_k)R) = depth(R) + 1 - k",
                &ii,
                &rr.shift(1 - k as i64),
                &mut r,
            );
        }
        r.witness(json!({"kind": "instance", "data": inst}));
    }
    r.timed(start)
}

/// The parts of the transfer-quotient check.
#[derive(Debug, Clone)]
pub struct TransferQuotientReport {
    pub checks: Vec<CheckReport>,
    pub quotient_dims: HilbertData,
    pub final_dims: Vec<usize>,
    /// `depth(I^G)` deduced from `depth(R/I^G)` and `depth(R)`.
    pub transfer_ideal_depth: Option<DepthBound>,
}

impl TransferQuotientReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Bounded instance of the statement that the norms of the top variables
/// form a regular sequence (an hsop) on `K[V]^G / I^G`.
pub fn transfer_quotient_check(rep: &CpRep, max_degree: usize) -> Result<TransferQuotientReport> {
    rep.check_nontrivial()?;
    let l = rep.num_blocks();
    let p = rep.field().get() as usize;
    if max_degree < l * p {
        return Err(Error::BoundTooSmall {
            bound: max_degree,
            required: l * p,
        });
    }
    let start = Instant::now();
    let ring = Arc::new(invariants::invariant_slice(rep, max_degree)?);
    let transfer = invariants::transfer_slice(rep, ring.ring(), max_degree)?;
    let quotient = GradedModuleView::quotient_ring(ring.clone(), transfer.basis().clone())?;
    let quotient_dims = quotient.dims();
    let norms = (1..=l).map(|j| rep.top_norm(j)).collect::<Result<Vec<_>>>()?;
    let (cert, fin) = run_sequence(&quotient, &norms)?;
    let mut checks = cert.step_reports(rep, "norm-on-transfer-quotient");
    if cert.steps.len() < norms.len() {
        let mut r = named(params(rep, max_degree), "norm-sequence-complete");
        r.fail(json!({"kind": "stopped", "at_step": cert.steps.len()}));
        checks.push(r);
    }

    let final_dims = fin.dims().dims().to_vec();
    let mut vanish = named(params(rep, max_degree), "final-quotient-vanishes")
        .param("above_degree", l * p);
    vanish.degrees_checked = (l * p + 1..=max_degree).collect();
    vanish.note(TRUNCATION_NOTE);
    vanish.witness(json!({"kind": "dims", "final_quotient": final_dims}));
    if cert.passed() {
        if let Some(d) = (l * p + 1..=max_degree).find(|&d| final_dims[d] > 0) {
            vanish.fail(json!({
                "kind": "nonzero-component",
                "degree": d,
                "element": rep.render(&fin.numerator().ring().from_coords(d, &fin.complement(d).row(0))),
            }));
        }
    } else {
        vanish.fail(json!({"kind": "skipped", "reason": "norm sequence failed"}));
    }
    checks.push(vanish);

    let series = quotient_dims.times_one_minus_t_pows(&vec![p; l]);
    let mut nonneg = named(params(rep, max_degree), "hilbert-numerator-nonnegative");
    nonneg.degrees_checked = (0..=max_degree).collect();
    nonneg.witness(json!({"kind": "series", "quotient_dims": quotient_dims, "numerator": series}));
    if let Some(d) = series.iter().position(|&c| c < 0) {
        nonneg.fail(json!({"kind": "negative-coefficient", "degree": d, "value": series[d]}));
    }
    if cert.passed() {
        let same = series.iter().zip(&final_dims).all(|(&a, &b)| a == b as i64);
        nonneg.require(same, json!({"kind": "numerator-differs-from-final-quotient"}));
    }
    checks.push(nonneg);

    // depth(I^G) from depth(R/I^G) = l (norms + maximality witness) and
    // depth(R) >= min{l+2, dim V} > l.
    let mut depth = named(params(rep, max_degree), "transfer-ideal-depth");
    depth.note(TRUNCATION_NOTE);
    let socle = if cert.passed() {
        socle_search(&fin, max_degree.saturating_sub(1))?
    } else {
        None
    };
    let canonical = canonical_sequence(rep)?;
    let ring_cert = verify_regular_sequence(&GradedModuleView::ring_module(ring.clone())?, &canonical)?;
    let quotient_depth = DepthBound {
        value: cert.steps.iter().filter(|s| s.regular()).count(),
        maximal: socle.is_some(),
    };
    let ring_depth = DepthBound::at_least(if ring_cert.passed() { canonical.len() } else { 0 });
    let transfer_ideal_depth = (cert.passed() && socle.is_some() && ring_depth.value > l)
        .then(|| DepthBound::exact(l + 1));
    depth.witness(json!({
        "kind": "depth-deduction",
        "depth_quotient": quotient_depth,
        "depth_ring_at_least": ring_depth.value,
        "quotient_maximality_witness": socle.as_ref().map(|w| w.to_json(rep)),
        "depth_transfer_ideal": transfer_ideal_depth,
        "expected": l + 1,
    }));
    depth.require(
        transfer_ideal_depth == Some(DepthBound::exact(l + 1)),
        json!({"kind": "deduction-failed"}),
    );
    depth.note("depth(I) = depth(R/I) + 1 whenever depth(R) > depth(R/I)");
    checks.push(depth);

    let elapsed = start.elapsed().as_millis() as u64;
    if let Some(first) = checks.first_mut() {
        first.millis = elapsed;
    }
    Ok(TransferQuotientReport {
        checks,
        quotient_dims,
        final_dims,
        transfer_ideal_depth,
    })
}

/// Outcome of [`norm_reduction_check`]. The evidence is absent when the
/// norms already fail to be regular.
#[derive(Debug, Clone)]
pub struct NormReduction {
    pub report: CheckReport,
    pub depth: Option<DepthEvidence>,
    pub grade: Option<DepthEvidence>,
}

/// Bounded instance of `depth(M) = grade(I^G, M/(N_1..N_l)M) + l`.
pub fn norm_reduction_check(view: &GradedModuleView, opts: SearchOptions) -> Result<NormReduction> {
    let start = Instant::now();
    let rep = view.rep().clone();
    rep.check_nontrivial()?;
    let big_d = view.max_degree();
    if view.is_zero() {
        return Err(Error::ZeroModule(big_d));
    }
    let l = rep.num_blocks();
    let norms = (1..=l).map(|j| rep.top_norm(j)).collect::<Result<Vec<_>>>()?;
    let (cert, reduced) = run_sequence(view, &norms)?;
    let mut r = named(params(&rep, big_d), "norm-reduction");
    r.note(TRUNCATION_NOTE);
    if !cert.passed() {
        let k = cert.first_failure().unwrap_or(cert.steps.len());
        r.fail(json!({
            "kind": "norms-not-regular",
            "step": k + 1,
            "record": cert.steps.get(k).map(|s| s.to_json(&rep)),
        }));
        return Ok(NormReduction {
            report: r.timed(start),
            depth: None,
            grade: None,
        });
    }
    let depth = bounded_depth(view, opts)?;
    let graded = view.numerator().ring();
    let gens = invariants::transfer_generators(&rep, graded, opts.degree_cap.min(big_d))?;
    let (_, grade) = bounded_grade(&gens, &reduced, opts)?;
    let (dv, gv) = (depth.bound(), grade.bound());
    r.witness(json!({
        "kind": "reduction",
        "depth": depth.to_json(&rep),
        "grade": grade.to_json(&rep),
        "norms": l,
    }));
    r.require(
        dv.value == gv.value + l,
        json!({"kind": "mismatch", "depth": dv.value, "grade": gv.value, "l": l}),
    );
    if !dv.maximal || !gv.maximal {
        r.note("equality compared on lower bounds (maximality evidence incomplete)");
    }
    Ok(NormReduction {
        report: r.timed(start),
        depth: Some(depth),
        grade: Some(grade),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PrimeP;

    fn setup(p: u64, blocks: &[usize], d: usize) -> (CpRep, Arc<InvariantRingSlice>) {
        let rep = CpRep::new(PrimeP::new(p).unwrap(), blocks.to_vec()).unwrap();
        let ring = Arc::new(invariants::invariant_slice(&rep, d).unwrap());
        (rep, ring)
    }

    #[test]
    fn fixed_variable_is_regular_on_v2() {
        let (rep, ring) = setup(2, &[2], 10);
        let m = GradedModuleView::ring_module(ring).unwrap();
        let r = is_regular_element(&m, &rep.x(1, 1).unwrap()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.degrees_checked, (0..=9).collect::<Vec<_>>());
    }

    #[test]
    fn zero_module_passes_vacuously_with_flag() {
        let (rep, ring) = setup(2, &[2], 4);
        let m = GradedModuleView::quotient_ring(ring.clone(), ring.basis().clone()).unwrap();
        let r = is_regular_element(&m, &rep.x(1, 1).unwrap()).unwrap();
        assert!(r.pass);
        assert!(r.notes.iter().any(|n| n.contains("module is zero up to 4")));
    }

    #[test]
    fn self_annihilation_witness_is_one() {
        let (rep, ring) = setup(2, &[2], 6);
        let x = rep.x(1, 1).unwrap();
        let m = GradedModuleView::ring_module(ring).unwrap().quotient_by(&x).unwrap();
        let r = is_regular_element(&m, &x).unwrap();
        assert!(!r.pass);
        assert_eq!(r.witnesses[0]["kernel_element"], "1");
        assert_eq!(r.witnesses[0]["degree"], 0);
    }

    #[test]
    fn repeated_element_fails_second_time() {
        let (rep, ring) = setup(2, &[2, 2], 6);
        let m = GradedModuleView::ring_module(ring).unwrap();
        let x = rep.x(1, 2).unwrap();
        let cert = verify_regular_sequence(&m, &[rep.x(1, 1).unwrap(), x.clone(), x]).unwrap();
        assert!(!cert.passed());
        assert_eq!(cert.first_failure(), Some(2));
    }

    #[test]
    fn non_invariant_element_rejected() {
        let (rep, ring) = setup(2, &[2], 4);
        let m = GradedModuleView::ring_module(ring).unwrap();
        assert!(matches!(
            is_regular_element(&m, &rep.x(2, 1).unwrap()),
            Err(Error::NotInvariant(_))
        ));
        let inhom = &rep.x(1, 1).unwrap() + &Poly::one(rep.field(), 2);
        assert_eq!(is_regular_element(&m, &inhom), Err(Error::Inhomogeneous));
        assert_eq!(
            is_regular_element(&m, &Poly::one(rep.field(), 2)),
            Err(Error::DegreeZero)
        );
    }

    #[test]
    fn canonical_sequences() {
        let rep = |p: u64, b: &[usize]| CpRep::new(PrimeP::new(p).unwrap(), b.to_vec()).unwrap();
        let r = rep(3, &[3]);
        let s = canonical_sequence(&r).unwrap();
        assert_eq!(s, vec![r.x(1, 1).unwrap(), r.norm(2, 1).unwrap(), r.norm(3, 1).unwrap()]);
        assert_eq!(canonical_sequence(&rep(2, &[2])).unwrap().len(), 2);
        assert_eq!(canonical_sequence(&rep(2, &[2, 2, 2])).unwrap().len(), 5);
        assert_eq!(
            canonical_sequence(&rep(3, &[1, 3])),
            Err(Error::TrivialSummand { block: 1 })
        );
        assert_eq!(expected_invariant_depth(&rep(2, &[2, 2, 2])), 5);
        assert_eq!(expected_invariant_depth(&rep(2, &[2])), 2);
    }

    #[test]
    fn bound_too_small() {
        let rep = CpRep::new(PrimeP::new(2).unwrap(), vec![2, 2]).unwrap();
        assert_eq!(
            transfer_quotient_check(&rep, 3).unwrap_err(),
            Error::BoundTooSmall {
                bound: 3,
                required: 4
            }
        );
    }

    #[test]
    fn zero_module_rejected_by_norm_reduction() {
        let (_, ring) = setup(2, &[2], 4);
        let m = GradedModuleView::quotient_ring(ring.clone(), ring.basis().clone()).unwrap();
        assert_eq!(
            norm_reduction_check(&m, SearchOptions::for_bound(4)).unwrap_err(),
            Error::ZeroModule(4)
        );
    }

    #[test]
    fn norm_failure_is_reported_with_step() {
        let (rep, ring) = setup(2, &[2], 6);
        let n = rep.top_norm(1).unwrap();
        let m = GradedModuleView::ring_module(ring).unwrap().quotient_by(&n).unwrap();
        let out = norm_reduction_check(&m, SearchOptions::for_bound(6)).unwrap();
        assert!(!out.report.pass);
        assert_eq!(out.report.witnesses[0]["step"], 1);
        assert!(out.depth.is_none());
    }

    #[test]
    fn audit_flags_inconsistent_instance() {
        let bad = DepthInstance {
            label: "bad".into(),
            ring: DepthBound::exact(4),
            ideal: DepthBound::exact(4),
            quotient: DepthBound::exact(1),
            regular_prefix: None,
        };
        let r = depth_inequality_audit(&[bad]);
        assert!(!r.pass);
        let ok = DepthInstance {
            label: "ok".into(),
            ring: DepthBound::exact(4),
            ideal: DepthBound::exact(2),
            quotient: DepthBound::exact(1),
            regular_prefix: Some(3),
        };
        assert!(depth_inequality_audit(&[ok]).pass);
    }

    #[test]
    fn audit_downgrades_without_maximality() {
        let inst = DepthInstance {
            label: "partial".into(),
            ring: DepthBound::exact(4),
            ideal: DepthBound::at_least(2),
            quotient: DepthBound::exact(1),
            regular_prefix: None,
        };
        let r = depth_inequality_audit(&[inst]);
        assert!(r.pass);
        assert!(r.notes.iter().any(|n| n.contains("one-sided")));
    }
}
