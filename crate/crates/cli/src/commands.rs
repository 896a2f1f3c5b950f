//! Subcommand implementations. Each returns a JSON report and an exit status.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use pencil_core::indefiniteness::{
    hm_check, is_indefinite_set, is_strongly_indefinite, is_weakly_indefinite,
    sufficient_weak_check,
};
use pencil_core::oracle::{grid_feasibility, GridSpec};
use pencil_core::solver::{neutral_cone_positivity, solve_feasible_with};
use pencil_core::{classify, gen, ks, Budget, PencilError, SolveOptions};
use serde::Serialize;
use serde_json::{json, Value};

use crate::instance::{Instance, InstanceFile};

/// Exit status of a command that produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// NOT_FEASIBLE, REFUTED or an empty interval; the report is still complete.
    Negative,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
        }
    }
}

pub struct Outcome {
    pub report: Value,
    pub status: Status,
}

fn envelope(command: &str, budget: Option<&Budget>, body: Value) -> Value {
    let mut out = json!({ "command": command });
    if let Some(b) = budget {
        out["seed"] = json!(b.seed);
        out["budget"] = json!(b);
    }
    if let Value::Object(fields) = body {
        for (k, v) in fields {
            out[k] = v;
        }
    }
    out
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

pub fn classify_cmd(inst: &Instance, tol: f64) -> Result<Outcome> {
    let named = inst
        .a
        .iter()
        .map(|a| ("A".to_string(), a))
        .chain(inst.b.iter().enumerate().map(|(i, b)| (format!("B{}", i + 1), b)));
    let mut rows = Vec::new();
    for (name, m) in named {
        let c = classify(m, tol * m.spectral_norm())?;
        rows.push(json!({ "name": name, "kind": c.kind, "min_eig": c.min_eig, "max_eig": c.max_eig }));
    }
    if rows.is_empty() {
        bail!("the instance contains no matrices");
    }
    Ok(Outcome {
        report: envelope("classify", None, json!({ "tol": tol, "matrices": rows })),
        status: Status::Ok,
    })
}

pub fn interval_cmd(inst: &Instance, tol: f64) -> Result<Outcome> {
    let a = inst.base()?;
    if inst.b.len() != 1 {
        bail!("interval needs exactly one B matrix, found {}", inst.b.len());
    }
    let iv = ks::feasible_interval(a, &inst.b[0], tol).map_err(|e| match e {
        PencilError::NotIndefinite => anyhow::anyhow!("B must be indefinite"),
        e => e.into(),
    })?;
    let status = if iv.empty { Status::Negative } else { Status::Ok };
    Ok(Outcome {
        report: envelope("interval", None, json!({ "tol": tol, "interval": iv })),
        status,
    })
}

pub fn solve_cmd(inst: &Instance, opts: &SolveOptions) -> Result<Outcome> {
    let a = inst.base()?;
    let f = inst.family()?;
    let head = json!({ "order": opts.order, "tol": opts.tol });
    let (body, status) = match solve_feasible_with(a, &f, opts) {
        Ok(p) => {
            let mut body = head;
            body["status"] = json!("VERIFIED");
            body["point"] = to_value(&p);
            (body, Status::Ok)
        }
        Err(e @ (PencilError::NotFeasible { .. } | PencilError::SamplerStarved { .. })) => {
            let mut body = head;
            let code = match e {
                PencilError::NotFeasible { best_min_eig } => {
                    body["best_relative_min_eig"] = json!(best_min_eig);
                    "NOT_FEASIBLE"
                }
                _ => "SAMPLER_STARVED",
            };
            body["status"] = json!(code);
            body["message"] = json!(e.to_string());
            (body, Status::Negative)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        report: envelope("solve", Some(&opts.budget), body),
        status,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CertifyClass {
    /// Every nonzero real combination is indefinite.
    Weak,
    /// Each member is indefinite on the other members' joint neutral set.
    Indefinite,
    /// Weakly indefinite plus the common-phase cross-term condition.
    Strong,
    /// Plane condition on sampled real planes.
    Hm,
    /// Linear independence of the images of a common neutral vector.
    Sufficient,
    /// Nonnegativity of A on the joint neutral set.
    Neutral,
}

pub fn certify_cmd(inst: &Instance, class: CertifyClass, budget: &Budget) -> Result<Outcome> {
    let f = inst.family()?;
    let report = match class {
        CertifyClass::Weak => is_weakly_indefinite(&f, budget)?,
        CertifyClass::Indefinite => {
            if f.len() < 2 {
                bail!("--class indefinite needs at least two B matrices");
            }
            is_indefinite_set(&f, budget)?
        }
        CertifyClass::Strong => {
            if f.len() < 2 {
                bail!("--class strong needs at least two B matrices");
            }
            is_strongly_indefinite(&f, budget)?
        }
        CertifyClass::Hm => {
            if f.len() < 3 {
                bail!("--class hm needs at least three B matrices");
            }
            hm_check(&f, budget)?
        }
        CertifyClass::Sufficient => sufficient_weak_check(&f, budget)?,
        CertifyClass::Neutral => neutral_cone_positivity(inst.base()?, &f, budget)?,
    };
    let status = if report.is_refuted() {
        Status::Negative
    } else {
        Status::Ok
    };
    Ok(Outcome {
        report: envelope("certify", Some(budget), json!({ "report": report })),
        status,
    })
}

pub fn oracle_cmd(inst: &Instance, bounds: (f64, f64), points: usize, tol: f64) -> Result<Outcome> {
    let a = inst.base()?;
    let f = inst.family()?;
    let spec = GridSpec::new(vec![bounds; f.len()], points, tol)?;
    let feasible = grid_feasibility(a, f.members(), &spec)?;
    Ok(Outcome {
        report: envelope(
            "oracle",
            None,
            json!({ "grid": spec, "feasible_count": feasible.len(), "feasible": feasible }),
        ),
        status: Status::Ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    /// The classic four-member maximal indefinite set in dimension 4.
    Example34,
    IndefinitePair,
    StronglyIndefinite,
    Feasible,
    FeasibleM2,
    /// One indefinite B with a base A that may or may not be feasible.
    Single,
}

pub fn gen_cmd(kind: GenKind, m: usize, n: usize, seed: u64) -> Result<InstanceFile> {
    let generated = match kind {
        GenKind::Example34 => gen::Generated {
            a: None,
            family: gen::example34(),
            lambda_star: None,
        },
        GenKind::IndefinitePair => gen::Generated {
            a: None,
            family: gen::indefinite_pair(n, seed)?,
            lambda_star: None,
        },
        GenKind::StronglyIndefinite => gen::Generated {
            a: None,
            family: gen::strongly_indefinite(m, n, seed)?,
            lambda_star: None,
        },
        GenKind::Feasible => gen::feasible(m, n, seed)?,
        GenKind::FeasibleM2 => gen::feasible_m2(n, seed)?,
        GenKind::Single => gen::single(n, seed)?,
    };
    let name = clap::ValueEnum::to_possible_value(&kind).context("generator name")?;
    let mut meta = BTreeMap::new();
    meta.insert("generator".into(), json!(name.get_name()));
    if kind == GenKind::Example34 {
        meta.insert("witnesses".into(), to_value(&gen::example34_witnesses()));
    } else {
        meta.insert("seed".into(), json!(seed));
        meta.insert("m".into(), json!(generated.family.len()));
        meta.insert("n".into(), json!(generated.family.dim()));
    }
    Ok(InstanceFile::from_generated(&generated, meta))
}
