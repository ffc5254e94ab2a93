//! Checks of the identities satisfied by `V_F`, each producing a [`CheckReport`].
//!
//! All comparisons are exact. Every check takes an already built
//! [`VacuumModule`]; modules built with [`VacuumModule::new_unchecked`] from
//! broken data are how the negative tests show that each check can fail.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebroid::{AxiomReport, VirasoroAlgebroid};
use crate::envelope::{graded_dimension, EnvelopeError, Factor, Monomial, State, VacuumModule};
use crate::frobenius::FrobeniusAlgebra;
use crate::modes::{charge_of_virasoro_vector, check_lie, LieLaw};
use crate::scalar::{binomial, factorial, format_scalar, int, sign, unit_vector, Scalar};

/// Mode numbers `m, n` sampled by the commutator check.
pub const DEFAULT_MODES: std::ops::RangeInclusive<i64> = -4..=4;
/// Degree bound for sampled states.
pub const DEFAULT_DEGREE: u32 = 6;
/// Number of sampled `(a, b, v)` triples when exhaustive checking is too costly.
pub const SAMPLED_TRIPLES: usize = 200;
/// Largest algebra dimension checked exhaustively.
pub const EXHAUSTIVE_MAX_DIM: usize = 2;
const SAMPLING_SEED: u64 = 0x5eed_f0b1;

/// Inputs of a failing case together with both sides of the compared identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} != {}", self.inputs, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    /// The first failing case, in the check's enumeration order.
    pub witness: Option<Witness>,
    /// Informational lines, e.g. the charge in both normalizations.
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            checked: 0,
            failed: 0,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Records a comparison of two states.
    fn compare(&mut self, lhs: &State, rhs: &State, labels: &[String], inputs: impl FnOnce() -> String) {
        self.record(lhs == rhs, || Witness {
            inputs: inputs(),
            lhs: lhs.describe(labels),
            rhs: rhs.describe(labels),
        });
    }

    /// Records a structural failure that prevented a comparison.
    fn error(&mut self, inputs: String, err: &EnvelopeError) {
        self.record(false, || Witness {
            inputs,
            lhs: format!("error: {err}"),
            rhs: "a result".to_string(),
        });
    }

    fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self.notes.extend(other.notes);
    }

    /// One tab-separated record: name, status, counts, witness, notes.
    pub fn machine_record(&self) -> String {
        let clean = |s: String| s.replace(['\t', '\n'], " ");
        let witness = self.witness.as_ref().map_or("-".to_string(), |w| clean(w.to_string()));
        let notes = if self.notes.is_empty() {
            "-".to_string()
        } else {
            clean(self.notes.join("; "))
        };
        format!(
            "{}\t{}\tchecked={}\tfailed={}\twitness={}\tnotes={}",
            self.name,
            self.status(),
            self.checked,
            self.failed,
            witness,
            notes
        )
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let noun = if self.checked == 1 { "case" } else { "cases" };
        write!(f, "{}: {} ({} {noun}", self.name, self.status(), self.checked)?;
        if self.failed > 0 {
            write!(f, ", {} failed", self.failed)?;
        }
        write!(f, ")")?;
        if let Some(w) = &self.witness {
            write!(f, "\n  witness: {w}")?;
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Helpers

fn labels(module: &VacuumModule) -> &[String] {
    module.algebra().labels()
}

/// `u_(n)v`, with results of negative degree read as zero.
fn act(module: &VacuumModule, u: &State, n: i64, v: &State) -> Result<Option<State>, EnvelopeError> {
    match module.field_action(u, n, v) {
        Ok(s) => Ok(Some(s)),
        Err(EnvelopeError::NegativeDegree(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// All basis monomials of degree `0..=max_degree`.
fn states_up_to(module: &VacuumModule, max_degree: u32) -> Result<Vec<Monomial>, EnvelopeError> {
    let mut out = Vec::new();
    for degree in 0..=max_degree {
        out.extend(module.basis(degree)?);
    }
    Ok(out)
}

/// `d` computed as the derivation with `[d, L_{-n} x] = (n - 1) L_{-n-1} x`
/// and `d|0> = 0`, by rebuilding each shifted word from the vacuum with
/// creation modes. This does not use the mode `L_{-1} e`.
fn derivation(module: &VacuumModule, mono: &Monomial) -> Result<State, EnvelopeError> {
    let dim = module.algebra().dim();
    let factors = mono.factors();
    let mut out = State::zero(mono.degree() + 1);
    for k in 0..factors.len() {
        let mut word: Vec<Factor> = factors.to_vec();
        let shifted = Factor {
            depth: word[k].depth + 1,
            index: word[k].index,
        };
        word[k] = shifted;
        let mut state = State::vacuum();
        for f in word.iter().rev() {
            state = module.apply_mode(f.mode(), &unit_vector(dim, f.index), &state)?;
        }
        out.add_scaled(&state, &int(factors[k].depth as i64 - 1));
    }
    Ok(out)
}

fn join_labels(labels: &[String], indices: &[usize]) -> String {
    indices.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(", ")
}

fn describe_mono(module: &VacuumModule, m: &Monomial) -> String {
    m.describe(labels(module))
}

fn describe_element(f: &FrobeniusAlgebra, x: &[Scalar]) -> String {
    let parts: Vec<String> = x
        .iter()
        .zip(f.labels())
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, l)| format!("{} {}", format_scalar(c), l))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// Checks

/// The unit `e` of `F` is a Virasoro vector: on every basis state of degree
/// `<= max_degree`, `e_(0)` acts as `d` and `e_(1)` as the degree; moreover
/// `e_(2)e = 0` and `e_(3)e = <e,e>|0>`. Needs a cutoff of at least
/// `max(max_degree + 1, 4)`.
pub fn check_virasoro_vector(module: &VacuumModule, max_degree: u32) -> CheckReport {
    let e = module.algebra().unit().to_vec();
    let mut report = check_virasoro_candidate(module, &e, max_degree);
    report.name = "virasoro-vector".into();
    report
}

/// As [`check_virasoro_vector`] for an arbitrary degree-2 candidate
/// `L_{-2} x |0>`, compared against `c = <x,x>`.
pub fn check_virasoro_candidate(module: &VacuumModule, x: &[Scalar], max_degree: u32) -> CheckReport {
    let f = module.algebra();
    let mut report = CheckReport::new("virasoro-candidate");
    let l = labels(module);
    let candidate = match module.embed(x) {
        Ok(s) => s,
        Err(err) => {
            report.error(format!("embed({})", describe_element(f, x)), &err);
            return report;
        }
    };
    let states = match states_up_to(module, max_degree) {
        Ok(s) => s,
        Err(err) => {
            report.error(format!("basis up to degree {max_degree}"), &err);
            return report;
        }
    };
    for mono in &states {
        let v = State::monomial(mono.clone());
        let name = describe_mono(module, mono);
        match (act(module, &candidate, 0, &v), derivation(module, mono)) {
            (Ok(Some(lhs)), Ok(rhs)) => report.compare(&lhs, &rhs, l, || format!("L_(0) on {name} vs d")),
            (Err(err), _) | (_, Err(err)) => report.error(format!("L_(0) on {name}"), &err),
            (Ok(None), _) => unreachable!("L_(0) raises degree"),
        }
        let j = int(mono.degree() as i64);
        match act(module, &candidate, 1, &v) {
            Ok(Some(lhs)) => report.compare(&lhs, &v.scaled(&j), l, || format!("L_(1) on {name} vs {j} Id")),
            Ok(None) => unreachable!("L_(1) preserves degree"),
            Err(err) => report.error(format!("L_(1) on {name}"), &err),
        }
    }
    let c = f.pairing(x, x).expect("candidate has the algebra's dimension");
    match act(module, &candidate, 2, &candidate) {
        Ok(Some(lhs)) => report.compare(&lhs, &State::zero(1), l, || "L_(2)L".into()),
        Ok(None) => unreachable!(),
        Err(err) => report.error("L_(2)L".into(), &err),
    }
    match act(module, &candidate, 3, &candidate) {
        Ok(Some(lhs)) => {
            let rhs = State::vacuum().scaled(&c);
            report.compare(&lhs, &rhs, l, || "L_(3)L vs <x,x>|0>".into());
        }
        Ok(None) => unreachable!(),
        Err(err) => report.error("L_(3)L".into(), &err),
    }
    report.notes.push(format!(
        "L_(3)L = {}|0> with <x,x> = {}; Virasoro-convention charge (L_(3)L = c/2) is 2<x,x> = {}",
        format_scalar(&c),
        format_scalar(&c),
        format_scalar(&(int(2) * &c))
    ));
    report
}

/// The four products of `e` with itself: `e_(0)e = de`, `e_(1)e = 2e`,
/// `e_(2)e = 0`, `e_(3)e = <e,e>|0>`; plus the same relations as operator
/// identities, `(e_(j)e)_(k) = (expected)_(k)` on basis states of degree
/// `<= max_degree` for every `k` landing within that degree.
pub fn check_ope_relations(module: &VacuumModule, max_degree: u32) -> CheckReport {
    let f = module.algebra();
    let l = labels(module);
    let mut report = CheckReport::new("ope-relations");
    let c = f.charge();
    let result = (|| -> Result<(), (String, EnvelopeError)> {
        fn tag(what: &'static str) -> impl Fn(EnvelopeError) -> (String, EnvelopeError) {
            move |err| (what.to_string(), err)
        }
        let e = module.embed(f.unit()).map_err(tag("embed(e)"))?;
        let de = module.translate(&e).map_err(tag("d e"))?;
        let expected = [de, e.scaled(&int(2)), State::zero(1), State::vacuum().scaled(&c)];
        let names = ["d e", "2 e", "0", "<e,e>|0>"];
        let mut products = Vec::new();
        for (j, want) in expected.iter().enumerate() {
            let got = module.field_action(&e, j as i64, &e).map_err(tag("e_(j)e"))?;
            report.compare(&got, want, l, || format!("e_({j})e vs {}", names[j]));
            products.push(got);
        }
        for mono in states_up_to(module, max_degree).map_err(tag("basis"))? {
            let v = State::monomial(mono.clone());
            for (j, (got, want)) in products.iter().zip(&expected).enumerate() {
                for k in -1..=(v.degree() as i64 + got.degree() as i64 - 1) {
                    if got.degree() as i64 + v.degree() as i64 - k - 1 > max_degree as i64 {
                        continue;
                    }
                    let inputs = || format!("(e_({j})e)_({k}) on {}", describe_mono(module, &mono));
                    let lhs = act(module, got, k, &v).map_err(|e| (inputs(), e))?;
                    let rhs = act(module, want, k, &v).map_err(|e| (inputs(), e))?;
                    if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
                        report.compare(&lhs, &rhs, l, inputs);
                    }
                }
            }
        }
        Ok(())
    })();
    if let Err((inputs, err)) = result {
        report.error(inputs, &err);
    }
    report.notes.push(format!(
        "e_(3)e = {}|0>; Virasoro-convention charge 2<e,e> = {}",
        format_scalar(&c),
        format_scalar(&charge_of_virasoro_vector(f))
    ));
    report
}

/// Cases `(a, b, v)` for the commutator check: all of them when
/// `dim <= EXHAUSTIVE_MAX_DIM`, otherwise a seeded sample.
fn commutator_cases(dim: usize, states: &[Monomial]) -> Vec<(usize, usize, Monomial)> {
    if dim <= EXHAUSTIVE_MAX_DIM {
        let mut out = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                for v in states {
                    out.push((a, b, v.clone()));
                }
            }
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
    (0..SAMPLED_TRIPLES)
        .map(|_| {
            let a = rng.gen_range(0..dim);
            let b = rng.gen_range(0..dim);
            let v = states[rng.gen_range(0..states.len())].clone();
            (a, b, v)
        })
        .collect()
}

/// `[a_(m), b_(n)] v = sum_j C(m,j) (a_(j)b)_(m+n-j) v` for generator states
/// `a, b` and basis states `v`, over every `m, n` in `modes` such that `v`,
/// the intermediate states and the result all have degree `<= max_degree`.
pub fn check_commutator_formula(
    module: &VacuumModule,
    max_degree: u32,
    modes: std::ops::RangeInclusive<i64>,
) -> CheckReport {
    let f = module.algebra();
    let dim = f.dim();
    let mut report = CheckReport::new("commutator-formula");
    let states = match states_up_to(module, max_degree) {
        Ok(s) => s,
        Err(err) => {
            report.error(format!("basis up to degree {max_degree}"), &err);
            return report;
        }
    };
    let cases = commutator_cases(dim, &states);
    if dim > EXHAUSTIVE_MAX_DIM {
        report
            .notes
            .push(format!("{} sampled (a, b, v) triples, seed {SAMPLING_SEED:#x}", cases.len()));
    }
    let max = max_degree as i64;
    let parts: Vec<CheckReport> = cases
        .par_iter()
        .map(|(a, b, mono)| {
            let mut part = CheckReport::new("commutator-formula");
            let mut run = || -> Result<(), (String, EnvelopeError)> {
                let ea = module.embed(&unit_vector(dim, *a)).map_err(|e| ("embed".to_string(), e))?;
                let eb = module.embed(&unit_vector(dim, *b)).map_err(|e| ("embed".to_string(), e))?;
                let v = State::monomial(mono.clone());
                let dv = v.degree() as i64;
                // a_(j)b for j = 0..=3; higher j have negative degree.
                let mut ab = Vec::new();
                for j in 0..=3 {
                    ab.push(module.field_action(&ea, j, &eb).map_err(|e| (format!("a_({j})b"), e))?);
                }
                for m in modes.clone() {
                    for n in modes.clone() {
                        let result = dv + 2 - m - n;
                        let via_b = dv + 1 - n;
                        let via_a = dv + 1 - m;
                        if result < 0 || result > max || via_a > max || via_b > max {
                            continue;
                        }
                        let inputs = || {
                            format!(
                                "[{}_({m}), {}_({n})] on {}",
                                f.labels()[*a],
                                f.labels()[*b],
                                describe_mono(module, mono)
                            )
                        };
                        let err = |e| (inputs(), e);
                        let mut lhs = State::zero(result as u32);
                        if via_b >= 0 {
                            let bv = module.field_action(&eb, n, &v).map_err(err)?;
                            lhs.add_scaled(&module.field_action(&ea, m, &bv).map_err(err)?, &Scalar::one());
                        }
                        if via_a >= 0 {
                            let av = module.field_action(&ea, m, &v).map_err(err)?;
                            lhs.add_scaled(&module.field_action(&eb, n, &av).map_err(err)?, &-Scalar::one());
                        }
                        let mut rhs = State::zero(result as u32);
                        for (j, abj) in ab.iter().enumerate() {
                            let coeff = binomial(m, j as u32);
                            if coeff.is_zero() || abj.is_zero() {
                                continue;
                            }
                            if let Some(term) = act(module, abj, m + n - j as i64, &v).map_err(err)? {
                                rhs.add_scaled(&term, &coeff);
                            }
                        }
                        part.compare(&lhs, &rhs, labels(module), inputs);
                    }
                }
                Ok(())
            };
            if let Err((inputs, err)) = run() {
                part.error(inputs, &err);
            }
            part
        })
        .collect();
    for part in parts {
        report.absorb(part);
    }
    report
}

/// `a_(n)b = (-1)^{n+1} sum_j (-1)^j / j! d^j (b_(n+j)a)` for all generator
/// pairs and `n` in `0..=3`.
pub fn check_skew_symmetry(module: &VacuumModule) -> CheckReport {
    let f = module.algebra();
    let dim = f.dim();
    let l = labels(module);
    let mut report = CheckReport::new("skew-symmetry");
    for i in 0..dim {
        for k in 0..dim {
            for n in 0..=3i64 {
                let inputs = || format!("{}_({n}){}", f.labels()[i], f.labels()[k]);
                let run = || -> Result<(State, State), EnvelopeError> {
                    let a = module.embed(&unit_vector(dim, i))?;
                    let b = module.embed(&unit_vector(dim, k))?;
                    let lhs = module.field_action(&a, n, &b)?;
                    let mut rhs = State::zero(lhs.degree());
                    for j in 0..=(3 - n) {
                        let mut term = module.field_action(&b, n + j, &a)?;
                        for _ in 0..j {
                            term = module.translate(&term)?;
                        }
                        let coeff = sign(n + 1 + j) / factorial(j as u32);
                        rhs.add_scaled(&term, &coeff);
                    }
                    Ok((lhs, rhs))
                };
                match run() {
                    Ok((lhs, rhs)) => report.compare(&lhs, &rhs, l, inputs),
                    Err(err) => report.error(inputs(), &err),
                }
            }
        }
    }
    report
}

/// The operations read back from `V_F` equal `Vir(F)`.
pub fn check_algebroid_recovery(module: &VacuumModule) -> CheckReport {
    match VirasoroAlgebroid::from_frobenius(module.algebra()) {
        Ok(expected) => check_algebroid_recovery_against(module, &expected),
        Err(err) => {
            let mut report = CheckReport::new("algebroid-recovery");
            report.record(false, || Witness {
                inputs: "Vir(F)".into(),
                lhs: format!("error: {err}"),
                rhs: "an algebroid".into(),
            });
            report
        }
    }
}

/// The operations read back from `V_F` equal the tables of `expected`, which
/// must be an algebroid over the rationals of the same rank.
pub fn check_algebroid_recovery_against(module: &VacuumModule, expected: &VirasoroAlgebroid) -> CheckReport {
    let f = module.algebra();
    let dim = f.dim();
    let mut report = CheckReport::new("algebroid-recovery");
    if expected.rank() != dim || expected.base().dim() != 1 {
        report.record(false, || Witness {
            inputs: "algebroid shape".into(),
            lhs: format!("rank {}, base dimension {}", expected.rank(), expected.base().dim()),
            rhs: format!("rank {dim}, base dimension 1"),
        });
        return report;
    }
    let vec = |v: &[Scalar]| format!("[{}]", v.iter().map(format_scalar).collect::<Vec<_>>().join(", "));
    for i in 0..dim {
        for j in 0..dim {
            let pair = format!("({}, {})", f.labels()[i], f.labels()[j]);
            match module.recovered_ops(&unit_vector(dim, i), &unit_vector(dim, j)) {
                Ok(got) => {
                    let tables = [
                        ("op1", got.op1.clone(), expected.op1_entry(i, j).to_vec()),
                        ("op0t", got.op0t.clone(), expected.op0t_entry(i, j).to_vec()),
                        ("form", vec![got.form.clone()], expected.form_entry(i, j).to_vec()),
                    ];
                    for (name, lhs, rhs) in tables {
                        report.record(lhs == rhs, || Witness {
                            inputs: format!("{name} {pair}"),
                            lhs: vec(&lhs),
                            rhs: vec(&rhs),
                        });
                    }
                }
                Err(err) => report.error(pair, &err),
            }
        }
    }
    report
}

/// Graded dimensions `dim V_0, ..., dim V_max_degree` by the closed formula.
pub fn character(f: &FrobeniusAlgebra, max_degree: u32) -> Vec<u128> {
    (0..=max_degree).map(|n| graded_dimension(f.dim(), n)).collect()
}

/// Enumerated PBW basis sizes against the closed formula.
pub fn check_character(module: &VacuumModule, max_degree: u32) -> CheckReport {
    let expected = character(module.algebra(), max_degree);
    check_character_against(module, &expected)
}

/// Enumerated PBW basis sizes against given dimensions, starting at degree 0.
pub fn check_character_against(module: &VacuumModule, expected: &[u128]) -> CheckReport {
    let mut report = CheckReport::new("character");
    for (n, want) in expected.iter().enumerate() {
        match module.basis(n as u32) {
            Ok(basis) => report.record(basis.len() as u128 == *want, || Witness {
                inputs: format!("degree {n}"),
                lhs: basis.len().to_string(),
                rhs: want.to_string(),
            }),
            Err(err) => report.error(format!("degree {n}"), &err),
        }
    }
    let dims: Vec<String> = expected.iter().map(u128::to_string).collect();
    report.notes.push(format!("dimensions {}", dims.join(" ")));
    report
}

/// `d` from degree 2 to degree 3 is injective.
pub fn check_translation_injective(module: &VacuumModule) -> CheckReport {
    let mut report = CheckReport::new("translation-injective");
    match module.translation_matrix(2) {
        Ok(m) => {
            let rank = m.rank();
            let want = module.algebra().dim();
            report.record(rank == want, || Witness {
                inputs: "rank of d: V_2 -> V_3".into(),
                lhs: rank.to_string(),
                rhs: want.to_string(),
            });
        }
        Err(err) => report.error("d: V_2 -> V_3".into(), &err),
    }
    report
}

pub fn check_frobenius_axioms(f: &FrobeniusAlgebra) -> CheckReport {
    let mut report = CheckReport::new("frobenius-axioms");
    let validation = f.validate();
    // Instances of commutativity, associativity, unit, symmetry, invariance.
    let d = f.dim();
    report.checked = d.pow(3) + d.pow(4) + d.pow(2) + d.pow(2) + d.pow(3);
    report.failed = validation.violations.len();
    if let Some(v) = validation.violations.first() {
        report.witness = Some(Witness {
            inputs: format!("{} at ({})", v.axiom.name(), join_labels(f.labels(), &v.indices)),
            lhs: format_scalar(&v.lhs),
            rhs: format_scalar(&v.rhs),
        });
    }
    let rank = f.form_rank();
    report.notes.push(format!(
        "charge <e,e> = {}; form rank {} of {}{}",
        format_scalar(&f.charge()),
        rank,
        f.dim(),
        if rank == f.dim() { "" } else { " (degenerate)" }
    ));
    report
}

/// The defining identities of `Vir(F)`.
pub fn check_algebroid_axioms(f: &FrobeniusAlgebra) -> CheckReport {
    let mut report = CheckReport::new("algebroid-axioms");
    match VirasoroAlgebroid::from_frobenius(f).and_then(|a| a.check_axioms()) {
        Ok(axioms) => {
            for outcome in &axioms.outcomes {
                report.checked += outcome.checked;
                report.failed += outcome.failure_count;
                if report.witness.is_none() && !outcome.passed() {
                    if let Some(w) = &outcome.first_failure {
                        report.witness = Some(Witness {
                            inputs: format!("{} at ({})", outcome.identity.name(), join_labels(f.labels(), &w.indices)),
                            lhs: format!("{:?}", w.lhs.iter().map(format_scalar).collect::<Vec<_>>()),
                            rhs: format!("{:?}", w.rhs.iter().map(format_scalar).collect::<Vec<_>>()),
                        });
                    }
                }
            }
        }
        Err(err) => report.record(false, || Witness {
            inputs: "Vir(F)".into(),
            lhs: format!("error: {err}"),
            rhs: "an algebroid".into(),
        }),
    }
    report
}

/// One report per identity of an algebroid check.
pub fn identity_reports(axioms: &AxiomReport, labels: &[String]) -> Vec<CheckReport> {
    axioms
        .outcomes
        .iter()
        .map(|o| {
            let mut r = CheckReport::new(o.identity.name());
            r.checked = o.checked;
            r.failed = o.failure_count;
            r.witness = o.first_failure.as_ref().map(|w| Witness {
                inputs: format!("({})", join_labels(labels, &w.indices)),
                lhs: format!("[{}]", w.lhs.iter().map(format_scalar).collect::<Vec<_>>().join(" ")),
                rhs: format!("[{}]", w.rhs.iter().map(format_scalar).collect::<Vec<_>>().join(" ")),
            });
            r
        })
        .collect()
}

/// Antisymmetry and Jacobi for the mode bracket with modes in `-3..=3`.
pub fn check_mode_bracket(f: &FrobeniusAlgebra) -> CheckReport {
    let mut report = CheckReport::new("mode-bracket-lie");
    let lie = check_lie(f, -3..=3);
    report.checked = lie.pairs_checked + lie.triples_checked;
    report.failed = lie.violations.len();
    if let Some(v) = lie.violations.first() {
        let law = match v.law {
            LieLaw::Antisymmetry => "antisymmetry",
            LieLaw::Jacobi => "jacobi",
        };
        report.witness = Some(Witness {
            inputs: format!("{law} at {:?}", v.generators),
            lhs: v.residual.describe(f.labels()),
            rhs: "0".into(),
        });
    }
    report
}

/// Reports of the whole suite, sorted by check name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(CheckReport::passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckReport> {
        self.reports.iter().find(|r| r.name == name)
    }

    pub fn machine_records(&self) -> Vec<String> {
        self.reports.iter().map(CheckReport::machine_record).collect()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.reports {
            writeln!(f, "{r}")?;
        }
        let failed = self.reports.iter().filter(|r| !r.passed()).count();
        write!(f, "{} checks, {} failed", self.reports.len(), failed)
    }
}

/// Cutoff needed by [`run_all`] for a given degree bound.
pub fn suite_cutoff(max_degree: u32) -> u32 {
    (max_degree + 1).max(4)
}

/// Runs every check on `F` concurrently. States are sampled up to
/// `max_degree`; the module is built with [`suite_cutoff`].
pub fn run_all(f: &FrobeniusAlgebra, max_degree: u32) -> SuiteReport {
    let module = VacuumModule::new_unchecked(f.clone(), suite_cutoff(max_degree));
    run_all_on(&module, max_degree)
}

/// Runs every check on an already built module.
pub fn run_all_on(module: &VacuumModule, max_degree: u32) -> SuiteReport {
    let f = module.algebra();
    type Check<'a> = Box<dyn Fn() -> CheckReport + Send + Sync + 'a>;
    let checks: Vec<Check> = vec![
        Box::new(|| check_frobenius_axioms(f)),
        Box::new(|| check_algebroid_axioms(f)),
        Box::new(|| check_mode_bracket(f)),
        Box::new(|| check_character(module, max_degree)),
        Box::new(|| check_translation_injective(module)),
        Box::new(|| check_virasoro_vector(module, max_degree)),
        Box::new(|| check_ope_relations(module, max_degree)),
        Box::new(|| check_commutator_formula(module, max_degree, DEFAULT_MODES)),
        Box::new(|| check_skew_symmetry(module)),
        Box::new(|| check_algebroid_recovery(module)),
    ];
    let mut reports: Vec<CheckReport> = checks.par_iter().map(|c| c()).collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    SuiteReport { reports }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{dual_numbers, k_c};

    fn module(f: FrobeniusAlgebra, cutoff: u32) -> VacuumModule {
        VacuumModule::new(f, cutoff).unwrap()
    }

    #[test]
    fn derivation_matches_translation() {
        let v = module(dual_numbers(int(1)), 7);
        for mono in states_up_to(&v, 6).unwrap() {
            let d = derivation(&v, &mono).unwrap();
            assert_eq!(d, v.translate(&State::monomial(mono)).unwrap());
        }
    }

    #[test]
    fn virasoro_vector_kc() {
        let v = module(k_c(int(5)), 7);
        let r = check_virasoro_vector(&v, 6);
        assert!(r.passed(), "{r}");
        assert!(r.notes[0].contains("2<x,x> = 10"), "{r}");
        // L_(1) on L_{-2}L_{-2}|0> has eigenvalue 4.
        let e = v.embed(&[int(1)]).unwrap();
        let ll = State::monomial(Monomial::new(vec![Factor::new(2, 0), Factor::new(2, 0)]).unwrap());
        assert_eq!(v.field_action(&e, 1, &ll).unwrap(), ll.scaled(&int(4)));
    }

    #[test]
    fn k0_has_vanishing_l3() {
        let v = module(k_c(int(0)), 7);
        let r = check_virasoro_vector(&v, 6);
        assert!(r.passed(), "{r}");
        let e = v.embed(&[int(1)]).unwrap();
        assert!(v.field_action(&e, 3, &e).unwrap().is_zero());
    }

    #[test]
    fn non_unit_candidate_fails() {
        let v = module(dual_numbers(int(0)), 5);
        let r = check_virasoro_candidate(&v, &[int(1), int(1)], 4);
        assert!(!r.passed());
        assert!(r.witness.is_some());
    }

    #[test]
    fn commutator_spot_values() {
        let v = module(k_c(int(7)), 6);
        let e = v.embed(&[int(1)]).unwrap();
        let vac = State::vacuum();
        let commutator = |m: i64, n: i64| {
            let ab = v.field_action(&e, m, &v.field_action(&e, n, &vac).unwrap()).unwrap();
            match act(&v, &e, m, &vac).unwrap() {
                Some(av) => ab.minus(&v.field_action(&e, n, &av).unwrap()),
                None => ab,
            }
        };
        // [e_(3), e_(-1)]|0> = [L_2, L_-2]|0> = c|0>.
        assert_eq!(commutator(3, -1), vac.scaled(&int(7)));
        // [e_(3), e_(-3)]|0> = C(3,1) (2e)_(-1)|0> = 6 L_-2|0>.
        assert_eq!(commutator(3, -3), e.scaled(&int(6)));
        let r = check_commutator_formula(&v, 4, -2..=2);
        assert!(r.passed(), "{r}");
        assert!(r.checked > 0);
    }

    #[test]
    fn suite_on_kc() {
        let s = run_all(&k_c(int(2)), 4);
        assert!(s.passed(), "{s}");
        let names: Vec<&str> = s.reports.iter().map(|r| r.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert_eq!(s.machine_records().len(), s.reports.len());
        assert!(s.to_string().contains("virasoro-vector: pass"));
    }

    #[test]
    fn machine_record_shape() {
        let v = module(k_c(int(1)), 4);
        let r = check_translation_injective(&v);
        let rec = r.machine_record();
        assert_eq!(rec.split('\t').count(), 6, "{rec}");
        assert!(rec.starts_with("translation-injective\tpass\t"));
    }
}
