//! Monomial subalgebras of `K[x, y]`: semigroup membership, free
//! decompositions over a subalgebra generated by an hsop, height and
//! non-factoriality witnesses.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde_json::json;

use crate::error::{Error, Result};
use crate::poly::Mono;
use crate::report::CheckReport;

/// Degree cap of the brute-force Hilbert enumeration.
pub const HILBERT_ENUM_CAP: u32 = 24;

/// `x^i y^j`.
pub fn xy(i: u32, j: u32) -> Mono {
    Mono::new(vec![i, j])
}

pub fn render_mono(m: &Mono) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    let parts: Vec<String> = [part("x", m.exp(0)), part("y", m.exp(1))]
        .into_iter()
        .flatten()
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `ε(x^i y^j) = (i, j)`.
pub fn epsilon(m: &Mono) -> (i64, i64) {
    (m.exp(0) as i64, m.exp(1) as i64)
}

fn is_bivariate(m: &Mono) -> bool {
    m.nvars() == 2
}

/// `K[g_1, …, g_r] ⊆ K[x, y]` for monomials `g_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoAlgebra {
    gens: Vec<Mono>,
}

impl MonoAlgebra {
    pub fn new(gens: Vec<Mono>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::MonoAlgebra("no generators".into()));
        }
        if let Some(g) = gens.iter().find(|g| !is_bivariate(g)) {
            return Err(Error::MonoAlgebra(format!(
                "generator in {} variables, expected 2",
                g.nvars()
            )));
        }
        if gens.iter().any(Mono::is_one) {
            return Err(Error::MonoAlgebra("unit generator".into()));
        }
        Ok(MonoAlgebra { gens })
    }

    pub fn generators(&self) -> &[Mono] {
        &self.gens
    }

    pub fn render(&self) -> String {
        let g: Vec<String> = self.gens.iter().map(render_mono).collect();
        format!("K[{}]", g.join(","))
    }

    /// Multiplicities `c_k` with `m = Π g_k^{c_k}`, if any.
    pub fn factor(&self, m: &Mono) -> Option<Vec<u32>> {
        if !is_bivariate(m) {
            return None;
        }
        let mut dead = HashSet::new();
        let mut mult = vec![0; self.gens.len()];
        self.search(0, m.clone(), &mut mult, &mut dead).then_some(mult)
    }

    fn search(&self, k: usize, rest: Mono, mult: &mut [u32], dead: &mut HashSet<(usize, Mono)>) -> bool {
        if rest.is_one() {
            mult[k..].iter_mut().for_each(|c| *c = 0);
            return true;
        }
        if k == self.gens.len() || dead.contains(&(k, rest.clone())) {
            return false;
        }
        let g = &self.gens[k];
        let cap = rest.degree() / g.degree();
        for c in (0..=cap).rev() {
            if let Some(q) = g.pow(c).divide_into(&rest) {
                mult[k] = c;
                if self.search(k + 1, q, mult, dead) {
                    return true;
                }
            }
        }
        dead.insert((k, rest));
        false
    }

    pub fn is_member(&self, m: &Mono) -> bool {
        self.factor(m).is_some()
    }

    /// All semigroup elements of degree `<= cap`, built by closing under
    /// multiplication (independently of [`MonoAlgebra::factor`]).
    pub fn elements_up_to(&self, cap: u32) -> BTreeSet<Mono> {
        let mut seen = BTreeSet::from([xy(0, 0)]);
        let mut frontier = vec![xy(0, 0)];
        while let Some(m) = frontier.pop() {
            for g in &self.gens {
                let n = m.mul(g);
                if n.degree() <= cap && seen.insert(n.clone()) {
                    frontier.push(n);
                }
            }
        }
        seen
    }

    /// `n / m` when it lies in the algebra.
    pub fn divides_within(&self, m: &Mono, n: &Mono) -> Option<Mono> {
        m.divide_into(n).filter(|q| self.is_member(q))
    }

    /// A member that is not a product of two nonunit members.
    pub fn is_irreducible(&self, m: &Mono) -> bool {
        if m.is_one() || !self.is_member(m) {
            return false;
        }
        !self
            .elements_up_to(m.degree())
            .iter()
            .filter(|d| !d.is_one() && *d != m)
            .any(|d| self.divides_within(d, m).is_some())
    }
}

/// A full-rank lattice `L ⊆ Z²` in Hermite normal form `[[a, b], [0, c]]`
/// with `a, c > 0` and `0 <= b < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    a: i64,
    b: i64,
    c: i64,
}

impl Lattice {
    pub fn new(u: (i64, i64), v: (i64, i64)) -> Result<Self> {
        let det = u.0 * v.1 - u.1 * v.0;
        if det == 0 {
            return Err(Error::MonoAlgebra("hsop exponents are linearly dependent".into()));
        }
        // Euclid on the first column
        let (mut r0, mut r1) = (u, v);
        while r1.0 != 0 {
            let q = r0.0.div_euclid(r1.0);
            let next = (r0.0 - q * r1.0, r0.1 - q * r1.1);
            r0 = r1;
            r1 = next;
        }
        if r0.0 < 0 {
            r0 = (-r0.0, -r0.1);
        }
        let c = r1.1.abs();
        Ok(Lattice {
            a: r0.0,
            b: r0.1.rem_euclid(c),
            c,
        })
    }

    /// Canonical representative of `e + L` in `[0, a) × [0, c)`.
    pub fn class(&self, e: (i64, i64)) -> (i64, i64) {
        let k = e.0.div_euclid(self.a);
        let (u, v) = (e.0 - k * self.a, e.1 - k * self.b);
        (u, v.rem_euclid(self.c))
    }

    pub fn index(&self) -> i64 {
        self.a * self.c
    }
}

/// A candidate decomposition `M = ⊕_k A·g_k` with `A = K[h_1, h_2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeDecomp {
    hsop: [Mono; 2],
    module_gens: Vec<Mono>,
    base: MonoAlgebra,
    lattice: Lattice,
}

impl FreeDecomp {
    pub fn new(hsop: [Mono; 2], module_gens: Vec<Mono>) -> Result<Self> {
        if module_gens.is_empty() {
            return Err(Error::MonoAlgebra("no module generators".into()));
        }
        if let Some(g) = module_gens.iter().find(|g| !is_bivariate(g)) {
            return Err(Error::MonoAlgebra(format!(
                "module generator in {} variables, expected 2",
                g.nvars()
            )));
        }
        let base = MonoAlgebra::new(hsop.to_vec())?;
        let lattice = Lattice::new(epsilon(&hsop[0]), epsilon(&hsop[1]))?;
        Ok(FreeDecomp {
            hsop,
            module_gens,
            base,
            lattice,
        })
    }

    pub fn hsop(&self) -> &[Mono; 2] {
        &self.hsop
    }

    pub fn module_gens(&self) -> &[Mono] {
        &self.module_gens
    }

    /// `A = K[h_1, h_2]`.
    pub fn base(&self) -> &MonoAlgebra {
        &self.base
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn class_of(&self, m: &Mono) -> (i64, i64) {
        self.lattice.class(epsilon(m))
    }

    /// `(k, c)` with `m = c·g_k` and `c ∈ A`.
    pub fn locate(&self, m: &Mono) -> Option<(usize, Mono)> {
        self.module_gens
            .iter()
            .enumerate()
            .find_map(|(k, g)| self.base.divides_within(g, m).map(|c| (k, c)))
    }
}

fn algebra_report(name: &str, alg: &MonoAlgebra) -> CheckReport {
    CheckReport::new(name).param("algebra", alg.render())
}

fn strs(ms: &[Mono]) -> Vec<String> {
    ms.iter().map(render_mono).collect()
}

/// Directness (distinct ε classes), generation and closure of
/// `⊕ A·g_k` under multiplication by the algebra generators outside `A`.
pub fn verify_free_decomp(alg: &MonoAlgebra, dec: &FreeDecomp, ideal_gens: &[Mono]) -> CheckReport {
    let mut r = algebra_report("free-decomposition", alg)
        .param("hsop", strs(dec.hsop()))
        .param("module_generators", strs(dec.module_gens()))
        .param("ideal_generators", strs(ideal_gens));
    for m in dec.hsop().iter().chain(dec.module_gens()) {
        if !alg.is_member(m) {
            r.fail(json!({"kind": "not-a-member", "monomial": render_mono(m)}));
        }
    }

    let classes: Vec<(i64, i64)> = dec.module_gens().iter().map(|g| dec.class_of(g)).collect();
    let mut first: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (k, cl) in classes.iter().enumerate() {
        if let Some(&j) = first.get(cl) {
            r.fail(json!({
                "kind": "same-class",
                "generators": [render_mono(&dec.module_gens()[j]), render_mono(&dec.module_gens()[k])],
                "class": [cl.0, cl.1],
            }));
        } else {
            first.insert(*cl, k);
        }
    }
    r.witness(json!({
        "kind": "epsilon-classes",
        "lattice_index": dec.lattice().index(),
        "classes": dec.module_gens().iter().zip(&classes).map(|(g, cl)| json!({
            "generator": render_mono(g),
            "epsilon": [epsilon(g).0, epsilon(g).1],
            "class": [cl.0, cl.1],
        })).collect::<Vec<_>>(),
    }));

    for g in ideal_gens {
        match dec.locate(g) {
            Some((k, c)) => r.witness(json!({
                "kind": "generation",
                "element": render_mono(g),
                "summand": render_mono(&dec.module_gens()[k]),
                "cofactor": render_mono(&c),
            })),
            None => r.fail(json!({"kind": "not-generated", "element": render_mono(g)})),
        }
    }

    let mut table = Vec::new();
    for x in alg.generators().iter().filter(|x| !dec.base().is_member(x)) {
        for g in dec.module_gens() {
            let prod = x.mul(g);
            match dec.locate(&prod) {
                Some((k, c)) => table.push(json!({
                    "multiplier": render_mono(x),
                    "summand": render_mono(g),
                    "product": render_mono(&prod),
                    "lands_in": render_mono(&dec.module_gens()[k]),
                    "cofactor": render_mono(&c),
                })),
                None => r.fail(json!({
                    "kind": "not-closed",
                    "multiplier": render_mono(x),
                    "summand": render_mono(g),
                    "product": render_mono(&prod),
                })),
            }
        }
    }
    r.witness(json!({"kind": "closure-table", "entries": table}));
    r.note("closure under the hsop generators themselves holds by construction");
    r
}

/// For every degree `d <= cap`: the number of degree-`d` monomials of the
/// module, found by brute-force enumeration of the semigroup, equals
/// `Σ_k #{degree-(d - deg g_k) monomials of A}`.
pub fn hilbert_enumeration_check(
    alg: &MonoAlgebra,
    dec: &FreeDecomp,
    ideal_gens: &[Mono],
    cap: u32,
) -> CheckReport {
    let mut r = algebra_report("hilbert-enumeration", alg)
        .param("module_generators", strs(dec.module_gens()))
        .param("ideal_generators", strs(ideal_gens))
        .param("cap", cap);
    let sg = alg.elements_up_to(cap);
    let module: BTreeSet<Mono> = sg
        .iter()
        .flat_map(|s| ideal_gens.iter().map(move |g| s.mul(g)))
        .filter(|m| m.degree() <= cap)
        .collect();
    let base = dec.base().elements_up_to(cap);
    let count = |set: &BTreeSet<Mono>, d: u32| set.iter().filter(|m| m.degree() == d).count();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for d in 0..=cap {
        let free: usize = dec
            .module_gens()
            .iter()
            .filter(|g| g.degree() <= d)
            .map(|g| count(&base, d - g.degree()))
            .sum();
        let direct = count(&module, d);
        if free != direct {
            r.fail(json!({"kind": "count-mismatch", "degree": d, "module": direct, "free": free}));
        }
        lhs.push(direct);
        rhs.push(free);
    }
    r.degrees_checked = (0..=cap as usize).collect();
    r.witness(json!({"kind": "counts", "module": lhs, "free_model": rhs}));
    r
}

/// `g^k ∈ f·R` for every ideal generator `g` with declared power `k`,
/// certifying that the ideal lies in the radical of `(f)`.
pub fn verify_height_witness(
    alg: &MonoAlgebra,
    ideal_gens: &[Mono],
    f: &Mono,
    powers: &[u32],
) -> Result<CheckReport> {
    if ideal_gens.len() != powers.len() {
        return Err(Error::MonoAlgebra(format!(
            "{} generators but {} powers",
            ideal_gens.len(),
            powers.len()
        )));
    }
    if !alg.is_member(f) {
        return Err(Error::MonoAlgebra(format!("{} is not a member", render_mono(f))));
    }
    let mut r = algebra_report("height-witness", alg)
        .param("principal_generator", render_mono(f))
        .param("ideal_generators", strs(ideal_gens))
        .param("powers", powers);
    for (g, &k) in ideal_gens.iter().zip(powers) {
        let gk = g.pow(k);
        match f.divide_into(&gk) {
            None => r.fail(json!({"kind": "not-divisible", "power": render_mono(&gk)})),
            Some(c) => {
                let w = json!({
                    "power": render_mono(&gk),
                    "cofactor": render_mono(&c),
                    "factorization": alg.factor(&c),
                });
                if alg.is_member(&c) {
                    r.witness(w);
                } else {
                    r.fail(w);
                }
            }
        }
    }
    r.note("the ideal lies in the radical of a principal ideal, so its height is at most one");
    Ok(r)
}

/// `m1·m2 = m3·m4` with two different factorizations into irreducibles.
pub fn non_factorial_witness(alg: &MonoAlgebra, rel: [&Mono; 4]) -> CheckReport {
    let mut r = algebra_report("non-factorial-witness", alg)
        .param("relation", rel.iter().map(|m| render_mono(m)).collect::<Vec<_>>());
    for m in rel {
        if !alg.is_member(m) {
            r.fail(json!({"kind": "not-a-member", "monomial": render_mono(m)}));
        }
    }
    let (lhs, rhs) = (rel[0].mul(rel[1]), rel[2].mul(rel[3]));
    r.require(
        lhs == rhs,
        json!({"kind": "relation-fails", "lhs": render_mono(&lhs), "rhs": render_mono(&rhs)}),
    );
    let same = BTreeSet::from([rel[0], rel[1]]) == BTreeSet::from([rel[2], rel[3]])
        && (rel[0] == rel[1]) == (rel[2] == rel[3]);
    if same {
        r.note("same factorization");
        return r;
    }
    let irreducible: Vec<bool> = rel.iter().map(|m| alg.is_irreducible(m)).collect();
    for (m, ok) in rel.iter().zip(&irreducible) {
        r.require(*ok, json!({"kind": "reducible", "monomial": render_mono(m)}));
    }
    for a in &rel[..2] {
        for b in &rel[2..] {
            for (u, v) in [(a, b), (b, a)] {
                if let Some(c) = alg.divides_within(u, v) {
                    r.fail(json!({
                        "kind": "divides",
                        "divisor": render_mono(u),
                        "multiple": render_mono(v),
                        "cofactor": render_mono(&c),
                    }));
                }
            }
        }
    }
    r.witness(json!({
        "kind": "factorizations",
        "product": render_mono(&lhs),
        "first": [render_mono(rel[0]), render_mono(rel[1])],
        "second": [render_mono(rel[2]), render_mono(rel[3])],
    }));
    r
}

/// Built-in data for a named example.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub algebra: MonoAlgebra,
    /// `(label, decomposition, ideal generators)`.
    pub decompositions: Vec<(&'static str, FreeDecomp, Vec<Mono>)>,
    pub height: (Vec<Mono>, Mono, Vec<u32>),
    pub relation: [Mono; 4],
}

pub const PRESET_NAMES: [&str; 2] = ["example-1", "example-2"];

pub fn preset(name: &str) -> Option<Preset> {
    let p = match name {
        "example-1" => {
            let hsop = [xy(2, 0), xy(0, 2)];
            Preset {
                name: "example-1",
                algebra: MonoAlgebra::new(vec![xy(2, 0), xy(0, 2), xy(1, 1)]).ok()?,
                decompositions: vec![
                    ("ring", FreeDecomp::new(hsop.clone(), vec![xy(0, 0), xy(1, 1)]).ok()?, vec![xy(0, 0)]),
                    ("ideal", FreeDecomp::new(hsop, vec![xy(2, 0), xy(1, 1)]).ok()?, vec![xy(2, 0), xy(1, 1)]),
                ],
                height: (vec![xy(2, 0), xy(1, 1)], xy(2, 0), vec![1, 2]),
                relation: [xy(2, 0), xy(0, 2), xy(1, 1), xy(1, 1)],
            }
        }
        "example-2" => {
            let (a, p, q, b) = (xy(4, 0), xy(3, 1), xy(1, 3), xy(0, 4));
            Preset {
                name: "example-2",
                algebra: MonoAlgebra::new(vec![a.clone(), p.clone(), q.clone(), b.clone()]).ok()?,
                decompositions: vec![(
                    "ideal",
                    FreeDecomp::new(
                        [a.clone(), b.clone()],
                        vec![a.clone(), a.mul(&q), p.clone(), p.pow(2)],
                    )
                    .ok()?,
                    vec![a.clone(), p.clone()],
                )],
                height: (vec![a.clone(), p.clone()], a.clone(), vec![1, 4]),
                relation: [a, b, p, q],
            }
        }
        _ => return None,
    };
    Some(p)
}

impl Preset {
    /// All checks of the example, in a fixed order.
    pub fn run(&self) -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for (label, dec, gens) in &self.decompositions {
            out.push(verify_free_decomp(&self.algebra, dec, gens).param("part", *label));
            out.push(
                hilbert_enumeration_check(&self.algebra, dec, gens, HILBERT_ENUM_CAP).param("part", *label),
            );
        }
        let (gens, f, powers) = &self.height;
        out.push(verify_height_witness(&self.algebra, gens, f, powers)?);
        let [m1, m2, m3, m4] = &self.relation;
        out.push(non_factorial_witness(&self.algebra, [m1, m2, m3, m4]));
        if self.name == "example-2" {
            out[0].note("the ring itself is not Cohen-Macaulay; this is known but not checked here");
        }
        Ok(out)
    }
}
