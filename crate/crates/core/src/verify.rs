//! Verification suites with machine-readable results.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::engine::{
    automaton_agrees, decompose, exhaustive_coset_index, faithfulness_probe, inverse_rule_check,
    level_bijectivity_check, product_rule_check, states_bfs, transitivity_check, transversal_validate, BfsOutcome,
    ProbeOutcome, SelfSimilar,
};
use crate::error::{Error, Result};
use crate::instances::{power, AffineInstance, AnyInstance, BorelInstance, LampInstance, WreathInstance};
use crate::matrix::conj_by_a;
use crate::ring::DensePoly;
use crate::tame::{finiteness_report, sigma_c_for_lamp, tame_degree, SigmaCSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Borel,
    Affine,
    Lamplighter,
    Wreath,
    Tame,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Self::Core,
        Self::Borel,
        Self::Affine,
        Self::Lamplighter,
        Self::Wreath,
        Self::Tame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Core => "core",
            Self::Borel => "borel",
            Self::Affine => "affine",
            Self::Lamplighter => "lamplighter",
            Self::Wreath => "wreath",
            Self::Tame => "tame",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Sample sizes for the randomized checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random pairs for the product rule.
    pub pairs: usize,
    /// Recursion depth for the product rule.
    pub depth: usize,
    pub samples: usize,
    /// Word length for bijectivity and automaton checks.
    pub word_len: usize,
    /// State cap for automaton extraction.
    pub cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            pairs: 20,
            depth: 3,
            samples: 50,
            word_len: 4,
            cap: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub family: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn new(suite: Suite, family: &str, seed: u64, checks: Vec<CheckResult>) -> Self {
        Self {
            suite: suite.name().into(),
            family: family.into(),
            seed,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs `f`; an error becomes a failed check carrying the message.
fn check(name: &str, f: impl FnOnce() -> Result<(bool, Value)>) -> CheckResult {
    match f() {
        Ok((passed, detail)) => CheckResult {
            name: name.into(),
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name: name.into(),
            passed: false,
            detail: json!({ "error": e.to_string() }),
        },
    }
}

/// The H-part g·t_j^{-1} of a random element g ∈ H t_j.
pub fn random_h_element<I: SelfSimilar + ?Sized>(inst: &I, rng: &mut dyn RngCore) -> Result<I::Elem> {
    let g = inst.random_element(rng);
    let j = inst.coset_index(&g)?;
    Ok(inst.mul(&g, &inst.transversal_inv()[j]))
}

/// A random word of length 1..=`max_len` in the generators and their inverses,
/// retried until it is not the identity.
pub fn random_word<I: SelfSimilar + ?Sized>(inst: &I, rng: &mut dyn RngCore, max_len: usize) -> (String, I::Elem) {
    let gens = inst.generators();
    loop {
        let len = rng.gen_range(1..=max_len.max(1));
        let mut names = Vec::with_capacity(len);
        let mut g = inst.identity();
        for _ in 0..len {
            let (name, x) = &gens[rng.gen_range(0..gens.len())];
            let k = if rng.gen_bool(0.5) { 1 } else { -1 };
            g = inst.mul(&g, &power(inst, x, k));
            names.push(if k == 1 { name.clone() } else { format!("{name}^-1") });
        }
        if g != inst.identity() {
            return (names.join(" "), g);
        }
    }
}

/// Family-independent laws: transversal, product and inverse rules, level
/// bijectivity, transitivity, automaton agreement for the generators.
pub fn core_checks<I: SelfSimilar + ?Sized>(inst: &I, opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    out.push(check("transversal", || {
        let r = transversal_validate(inst, &mut rng, opts.samples)?;
        Ok((r.ok(), serde_json::to_value(&r)?))
    }));
    out.push(check("identity_decomposes_trivially", || {
        let d = decompose(inst, &inst.identity())?;
        let ok = d.perm.is_identity() && d.states.iter().all(|s| *s == inst.identity());
        Ok((ok, json!({ "perm": d.perm.0 })))
    }));
    out.push(check("product_rule", || {
        let mut failed = Vec::new();
        for i in 0..opts.pairs {
            let g = inst.random_element(&mut rng);
            let h = inst.random_element(&mut rng);
            if !product_rule_check(inst, &g, &h, opts.depth)? {
                failed.push(json!({ "pair": i, "g": inst.render(&g), "h": inst.render(&h) }));
            }
        }
        Ok((
            failed.is_empty(),
            json!({ "pairs": opts.pairs, "depth": opts.depth, "failed": failed }),
        ))
    }));
    out.push(check("inverse_rule", || {
        let mut failed = Vec::new();
        for _ in 0..opts.samples {
            let g = inst.random_element(&mut rng);
            if !inverse_rule_check(inst, &g)? {
                failed.push(inst.render(&g));
            }
        }
        Ok((failed.is_empty(), json!({ "samples": opts.samples, "failed": failed })))
    }));
    let gens = inst.generators();
    out.push(check("level_bijectivity", || {
        let mut failed = Vec::new();
        for (name, g) in &gens {
            if !level_bijectivity_check(inst, g, opts.word_len)? {
                failed.push(name.clone());
            }
        }
        Ok((failed.is_empty(), json!({ "max_len": opts.word_len, "failed": failed })))
    }));
    out.push(check("transitivity", || {
        let elems: Vec<I::Elem> = gens.iter().map(|(_, g)| g.clone()).collect();
        Ok((transitivity_check(inst, &elems)?, json!({ "generators": gens.len() })))
    }));
    out.push(check("generator_automata", || {
        let mut rows = Vec::new();
        let mut ok = true;
        for (name, g) in &gens {
            match states_bfs(inst, g, opts.cap)? {
                BfsOutcome::Finite(a) => {
                    let agrees = automaton_agrees(inst, &a, opts.word_len)?;
                    ok &= agrees;
                    rows.push(json!({ "generator": name, "states": a.len(), "agrees": agrees }));
                }
                BfsOutcome::CapExceeded { explored, frontier } => {
                    rows.push(
                        json!({ "generator": name, "cap_exceeded": { "explored": explored, "frontier": frontier } }),
                    );
                }
            }
        }
        Ok((ok, json!({ "cap": opts.cap, "generators": rows })))
    }));
    out
}

fn borel_checks(inst: &BorelInstance, opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = vec![
        check("claim1", || {
            Ok((inst.claim1_check()?, json!({ "transversal": inst.degree() })))
        }),
        check("u_states_trivial", || Ok((inst.u_states_trivial()?, Value::Null))),
    ];
    for k in 1..=inst.m() {
        for s in 0..inst.ring().rank() {
            out.push(check(&format!("claim2_x{k}_{s}"), || {
                let r = inst.claim2_check(k, s)?;
                Ok((r.ok(), serde_json::to_value(&r)?))
            }));
        }
    }
    out.push(check("coset_index_vs_search", || {
        let mut mismatches = 0;
        for _ in 0..opts.samples {
            let g = inst.random_element(&mut rng);
            if inst.coset_index(&g)? != exhaustive_coset_index(inst, &g)? {
                mismatches += 1;
            }
        }
        Ok((
            mismatches == 0,
            json!({ "samples": opts.samples, "mismatches": mismatches }),
        ))
    }));
    out
}

fn affine_checks(inst: &AffineInstance, opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let sample: Vec<_> = inst.generator_sample().into_iter().map(|(_, g)| g).collect();
    vec![
        check("warnings", || Ok((true, json!(inst.warnings())))),
        check("delta1_closure", || {
            let r = inst.delta_closure_check(1, &sample, opts.cap.max(1024))?;
            Ok((r.ok(), serde_json::to_value(&r)?))
        }),
        check("shift_power_central", || {
            let mut failed = 0;
            for _ in 0..opts.samples {
                let b = inst.random_element(&mut rng).b;
                let mut c = b.clone();
                for _ in 0..inst.n() {
                    c = conj_by_a(&c)?;
                }
                failed += usize::from(c != b);
            }
            Ok((failed == 0, json!({ "samples": opts.samples, "failed": failed })))
        }),
        check("coset_index_vs_search", || {
            let mut mismatches = 0;
            for _ in 0..opts.samples {
                let g = inst.random_element(&mut rng);
                mismatches += usize::from(inst.coset_index(&g)? != exhaustive_coset_index(inst, &g)?);
            }
            Ok((
                mismatches == 0,
                json!({ "samples": opts.samples, "mismatches": mismatches }),
            ))
        }),
    ]
}

fn random_lambdas(inst: &LampInstance, rng: &mut dyn RngCore, count: usize, max_deg: usize) -> Vec<DensePoly> {
    let p = inst.field().modulus();
    (0..count)
        .map(|_| {
            let deg = rng.gen_range(0..=max_deg);
            let coeffs = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
            DensePoly::from_raw(inst.field(), coeffs)
        })
        .collect()
}

fn lamplighter_checks(inst: &LampInstance, opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = vec![check("power_identities", || {
        let lambdas = random_lambdas(inst, &mut rng, opts.samples, 5);
        Ok((
            inst.power_identity_check(6, &lambdas)?,
            json!({ "i_max": 6, "lambdas": lambdas.len() }),
        ))
    })];
    for j in 0..inst.rank() {
        out.push(check(&format!("y{j}_closure"), || {
            let r = inst.y_closure_check(j)?;
            Ok((r.ok(), serde_json::to_value(&r)?))
        }));
    }
    out.push(check("closed_form_decompositions", || {
        let mut failed = Vec::new();
        let lambdas = random_lambdas(inst, &mut rng, opts.samples, 4);
        for (i, lam) in lambdas.iter().enumerate() {
            let j = i % inst.rank();
            for g in [
                inst.u_pow(inst.ring().from_poly(lam.clone())),
                inst.x_pow(j, 1),
                inst.u_lambda_xinv(lam, j),
            ] {
                if inst.closed_form_decompose(&g)? != decompose(inst, &g)? {
                    failed.push(inst.render(&g));
                }
            }
        }
        Ok((failed.is_empty(), json!({ "failed": failed })))
    }));
    out.push(check("h_normal_on_sample", || {
        Ok((
            inst.normality_sample(&mut rng, opts.samples),
            json!({ "samples": opts.samples }),
        ))
    }));
    out
}

fn wreath_checks(inst: &WreathInstance, opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = vec![check("endo_homomorphism", || {
        let mut failed = 0;
        for _ in 0..opts.samples {
            let g = random_h_element(inst, &mut rng)?;
            let h = random_h_element(inst, &mut rng)?;
            let lhs = inst.endo(&inst.mul(&g, &h))?;
            failed += usize::from(lhs != inst.mul(&inst.endo(&g)?, &inst.endo(&h)?));
        }
        Ok((failed == 0, json!({ "pairs": opts.samples, "failed": failed })))
    })];
    if inst.is_localized() {
        out.push(check("endo_well_defined", || {
            let p = inst.field().modulus();
            let mut failed = 0;
            for _ in 0..opts.samples {
                let g = random_h_element(inst, &mut rng)?;
                let mut extra = vec![0u32; inst.d()];
                extra[0] = p * rng.gen_range(0..=2);
                for e in extra.iter_mut().skip(1) {
                    *e = rng.gen_range(0..=2);
                }
                failed += usize::from(inst.endo(&g)? != inst.endo_with_choice(&g, &extra)?);
            }
            Ok((failed == 0, json!({ "samples": opts.samples, "failed": failed })))
        }));
    }
    out.push(check("faithfulness_probe", || {
        let mut inconclusive = Vec::new();
        for _ in 0..opts.samples {
            let (word, g) = random_word(inst, &mut rng, 6);
            if faithfulness_probe(inst, &g, 8)? == ProbeOutcome::Inconclusive {
                inconclusive.push(word);
            }
        }
        Ok((
            inconclusive.is_empty(),
            json!({ "words": opts.samples, "max_depth": 8, "inconclusive": inconclusive }),
        ))
    }));
    out
}

fn tame_checks(inst: &LampInstance) -> Vec<CheckResult> {
    let report = finiteness_report(inst);
    let n = inst.rank();
    vec![
        check("tame_degree_equals_rank", || {
            Ok((
                report.tame_degree == n,
                json!({ "n": n, "tame_degree": report.tame_degree }),
            ))
        }),
        check("finitely_presented_iff_rank_at_least_2", || {
            Ok((report.finitely_presented == (n >= 2), serde_json::to_value(&report)?))
        }),
        check("order_invariance", || {
            let mut pts = sigma_c_for_lamp(inst).points().to_vec();
            pts.reverse();
            let m = tame_degree(&SigmaCSet::new(pts)?, n + 1)?;
            Ok((m == report.tame_degree, json!({ "reversed": m })))
        }),
    ]
}

/// Runs one suite. Family suites reject instances of other families.
pub fn run_suite(any: &AnyInstance, suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let family = any.family().name();
    let mismatch = || Error::Unsupported(format!("suite {suite} does not apply to the {family} family"));
    let checks = match (suite, any) {
        (Suite::Core, any) => crate::with_instance!(any, inst => core_checks(inst, opts)),
        (Suite::Borel, AnyInstance::Borel(inst)) => borel_checks(inst, opts),
        (Suite::Affine, AnyInstance::Affine(inst)) => affine_checks(inst, opts),
        (Suite::Lamplighter, AnyInstance::Lamplighter(inst)) => lamplighter_checks(inst, opts),
        (Suite::Wreath, AnyInstance::Wreath(inst)) => wreath_checks(inst, opts),
        (Suite::Tame, AnyInstance::Lamplighter(inst)) => tame_checks(inst),
        _ => return Err(mismatch()),
    };
    Ok(SuiteReport::new(suite, family, opts.seed, checks))
}
