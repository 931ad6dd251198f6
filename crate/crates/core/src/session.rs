//! String-in, JSON-out operations shared by the command line and the C interface.

use serde::Serialize;
use serde_json::{json, Value};

use crate::element::parse_element;
use crate::engine::{decompose, portrait, states_bfs_with, AutomatonDoc, BfsOutcome, ExportFormat, SelfSimilar};
use crate::error::{Error, Result};
use crate::instances::{AnyInstance, InstanceConfig};
use crate::tame::{finiteness_report, TameReport};
use crate::verify::{run_suite, Suite, SuiteReport, VerifyOptions};
use crate::with_instance;

/// Exit status for a failed operation: 1 hypothesis failure, 2 verification
/// failure, 3 I/O, parse or usage error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) | Error::NotPrime(_) => 1,
        Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::Unsupported(_) => 3,
        _ => 2,
    }
}

/// Largest transversal listed element by element in summaries.
const LISTED_TRANSVERSAL: usize = 64;

/// Builds the instance after checking hypotheses; the report explains rejections.
pub fn build_instance(config: &InstanceConfig) -> Result<AnyInstance> {
    if !config.hypotheses_hold() {
        let report = serde_json::to_string(&config.validation()).unwrap_or_default();
        return Err(Error::InvalidConfig(report));
    }
    config.build()
}

/// Family, degree, transversal and hypothesis report.
pub fn summary(config: &InstanceConfig, inst: &AnyInstance) -> Value {
    let (degree, transversal) = with_instance!(inst, i => {
        let t: Vec<String> = i.transversal().iter().take(LISTED_TRANSVERSAL).map(|g| i.render(g)).collect();
        (i.degree(), t)
    });
    let warnings = match inst {
        AnyInstance::Affine(a) => a.warnings(),
        _ => Vec::new(),
    };
    json!({
        "family": inst.family().name(),
        "p": config.p,
        "degree": degree,
        "transversal_size": degree,
        "transversal": transversal,
        "validation": config.validation(),
        "warnings": warnings,
    })
}

/// Level permutation and rendered states, or the portrait to `depth` levels.
pub fn decompose_expr(inst: &AnyInstance, expr: &str, depth: Option<usize>) -> Result<Value> {
    with_instance!(inst, i => {
        let g = parse_element(i, expr)?;
        match depth {
            Some(k) => Ok(json!({ "element": i.render(&g), "depth": k, "portrait": portrait(i, &g, k)? })),
            None => {
                let d = decompose(i, &g)?;
                let states: Vec<String> = d.states.iter().map(|s| i.render(s)).collect();
                Ok(json!({ "element": i.render(&g), "perm": d.perm.0, "states": states }))
            }
        }
    })
}

/// Result of automaton extraction: the exported text or a cap report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum AutomatonOutput {
    Finite {
        states: usize,
        text: String,
    },
    CapExceeded {
        cap: usize,
        explored: usize,
        frontier: usize,
    },
}

pub fn automaton_expr(
    inst: &AnyInstance,
    expr: &str,
    cap: usize,
    format: ExportFormat,
    parallel: bool,
) -> Result<AutomatonOutput> {
    if cap == 0 {
        return Err(Error::Precondition("cap must be at least 1".into()));
    }
    with_instance!(inst, i => {
        let g = parse_element(i, expr)?;
        Ok(match states_bfs_with(i, &g, cap, parallel)? {
            BfsOutcome::Finite(a) => {
                let doc = AutomatonDoc::new(&a, |s| i.render(s));
                let text = match format {
                    ExportFormat::Json => doc.to_json(),
                    ExportFormat::Dot => doc.to_dot(),
                };
                AutomatonOutput::Finite { states: a.len(), text }
            }
            BfsOutcome::CapExceeded { explored, frontier } => AutomatonOutput::CapExceeded { cap, explored, frontier },
        })
    })
}

/// The suites to run when none is named: core plus the family's own suite.
pub fn default_suites(inst: &AnyInstance) -> Vec<Suite> {
    let own = match inst {
        AnyInstance::Borel(_) => Suite::Borel,
        AnyInstance::Affine(_) => Suite::Affine,
        AnyInstance::Lamplighter(_) => Suite::Lamplighter,
        AnyInstance::Wreath(_) => Suite::Wreath,
    };
    vec![Suite::Core, own]
}

pub fn verify(inst: &AnyInstance, suites: &[Suite], opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(inst, s, opts)).collect()
}

pub fn tame(inst: &AnyInstance) -> Result<TameReport> {
    match inst {
        AnyInstance::Lamplighter(l) => Ok(finiteness_report(l)),
        other => Err(Error::Unsupported(format!(
            "tameness reports cover the lamplighter family, not {}",
            other.family().name()
        ))),
    }
}
