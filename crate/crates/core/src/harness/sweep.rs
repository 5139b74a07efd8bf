//! Instance expansion and the identity / theorem sweeps.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bounds::{self, Prepared, Remark, Status, Theorem};
use crate::identities;
use crate::preinvex::{library_function, library_map, CertificationReport, Instance, InstanceKey};

use super::config::{InstanceTemplate, SweepConfig};
use super::report::{
    BoundRow, CertKey, CertificationRow, IdentityKey, IdentityRow, Lemma, RemarkRow, ResultRow, RunReport,
};

/// An expanded grid point: either a valid instance or the reason it is not.
pub type Expanded = (InstanceKey, Result<Instance, String>);

fn build(key: &InstanceKey) -> Result<Instance, String> {
    let f = library_function(&key.function).map_err(|e| e.to_string())?;
    let m = library_map(&key.map).map_err(|e| e.to_string())?;
    Instance::new(f, m, key.a, key.b, key.alpha, key.lambda, key.q).map_err(|e| e.to_string())
}

fn template_keys(t: &InstanceTemplate) -> Vec<InstanceKey> {
    let mut out = Vec::new();
    for function in &t.functions {
        for map in &t.maps {
            for &a in &t.a {
                for &b in &t.b {
                    for &alpha in &t.alpha {
                        for &lambda in &t.lambda {
                            for &q in &t.q {
                                out.push(InstanceKey {
                                    function: function.clone(),
                                    map: map.clone(),
                                    a,
                                    b,
                                    alpha,
                                    lambda,
                                    q,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// All grid points of all templates, sorted by key and deduplicated.
pub fn expand_instances(cfg: &SweepConfig) -> Vec<Expanded> {
    let mut keys: Vec<InstanceKey> = cfg.instances.iter().flat_map(template_keys).collect();
    keys.sort_by(|x, y| x.total_cmp(y));
    keys.dedup_by(|x, y| x.total_cmp(y).is_eq());
    keys.into_iter()
        .map(|k| {
            let inst = build(&k);
            (k, inst)
        })
        .collect()
}

fn echo(cfg: &SweepConfig) -> serde_json::Value {
    serde_json::to_value(cfg).unwrap_or(serde_json::Value::Null)
}

/// Both integral identities over the distinct `(function, map, a, b, α)`
/// points of the grid.
pub fn run_verify_identities(cfg: &SweepConfig) -> RunReport {
    let mut keys: Vec<IdentityKey> = cfg
        .instances
        .iter()
        .flat_map(template_keys)
        .map(|k| IdentityKey {
            function: k.function,
            map: k.map,
            a: k.a,
            b: k.b,
            alpha: k.alpha,
        })
        .collect();
    keys.sort_by(|x, y| x.total_cmp(y));
    keys.dedup_by(|x, y| x.total_cmp(y).is_eq());

    let quad = cfg.quadrature;
    let rows: Vec<ResultRow> = keys
        .par_iter()
        .flat_map_iter(|key| {
            // λ and q do not enter the identities.
            let full = InstanceKey {
                function: key.function.clone(),
                map: key.map.clone(),
                a: key.a,
                b: key.b,
                alpha: key.alpha,
                lambda: 0.5,
                q: 2.0,
            };
            let inst = build(&full);
            [Lemma::FirstDerivative, Lemma::SecondDerivative].map(|lemma| {
                let outcome = inst.as_ref().map_err(Clone::clone).and_then(|i| {
                    match lemma {
                        Lemma::FirstDerivative => identities::lemma1_residual(i, &quad),
                        Lemma::SecondDerivative => identities::lemma2_residual(i, &quad),
                    }
                    .map_err(|e| e.to_string())
                });
                let (status, residual, error) = match outcome {
                    Ok(r) => (if r.passed { Status::Pass } else { Status::Fail }, Some(r), None),
                    Err(e) => (Status::Error, None, Some(e)),
                };
                ResultRow::Identity(IdentityRow {
                    key: key.clone(),
                    lemma,
                    status,
                    residual,
                    error,
                })
            })
        })
        .collect();
    RunReport::new("identities", echo(cfg), rows)
}

pub fn cert_key(theorem: Theorem, inst: &Instance) -> CertKey {
    let dom = inst.certification_domain();
    CertKey {
        function: inst.func.id.clone(),
        map: inst.map.id.clone(),
        lambda: inst.lambda,
        lo: dom.lo,
        hi: dom.hi,
        derivative_order: theorem.derivative_order(),
        power: theorem.certification_power(inst.q),
    }
}

type CertCache = HashMap<(String, String, [u64; 4], u8), Result<CertificationReport, String>>;

/// Bound reports for `theorems` on every instance, with the certification
/// of each distinct derivative-magnitude function and the remark checks
/// that apply.
pub fn run_verify_theorems(cfg: &SweepConfig, theorems: &[Theorem]) -> RunReport {
    let mut theorems = theorems.to_vec();
    theorems.sort();
    theorems.dedup();
    let quad = cfg.quadrature;
    let grid = cfg.certification.grid_size();
    let tol = cfg.certification.tolerance;
    let expanded = if theorems.is_empty() {
        Vec::new()
    } else {
        expand_instances(cfg)
    };

    // Distinct certification jobs, in key order.
    let mut jobs: Vec<(CertKey, &Instance, Theorem)> = Vec::new();
    for (_, inst) in &expanded {
        let Ok(inst) = inst else { continue };
        for &th in &theorems {
            jobs.push((cert_key(th, inst), inst, th));
        }
    }
    jobs.sort_by(|x, y| x.0.total_cmp(&y.0));
    jobs.dedup_by(|x, y| x.0.total_cmp(&y.0).is_eq());
    let certs: Vec<(CertKey, Result<CertificationReport, String>)> = jobs
        .par_iter()
        .map(|(key, inst, th)| {
            (key.clone(), bounds::certify_for(*th, inst, grid, tol).map_err(|e| e.to_string()))
        })
        .collect();
    let cache: CertCache = certs.iter().map(|(k, r)| (k.bits(), r.clone())).collect();

    let mut rows: Vec<ResultRow> = certs
        .into_iter()
        .map(|(key, r)| {
            let (status, report, error) = match r {
                Ok(c) => (if c.passed { Status::Pass } else { Status::Exploratory }, Some(c), None),
                Err(e) => (Status::Error, None, Some(e)),
            };
            ResultRow::Certification(CertificationRow {
                key,
                status,
                report,
                error,
            })
        })
        .collect();

    let per_instance: Vec<Vec<ResultRow>> = expanded
        .par_iter()
        .map(|(key, inst)| instance_rows(key, inst, &theorems, &quad, &cache))
        .collect();
    rows.extend(per_instance.into_iter().flatten());
    RunReport::new("theorems", echo(cfg), rows)
}

fn bound_error_row(key: &InstanceKey, th: Theorem, mode: bounds::BoundMode, e: String) -> ResultRow {
    ResultRow::Bound(BoundRow {
        key: key.clone(),
        theorem: th,
        mode,
        status: Status::Error,
        report: None,
        error: Some(e),
        trial: None,
        slack_ratio: None,
    })
}

fn instance_rows(
    key: &InstanceKey,
    inst: &Result<Instance, String>,
    theorems: &[Theorem],
    quad: &crate::fracquad::QuadratureConfig,
    cache: &CertCache,
) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    let inst = match inst {
        Ok(i) => i,
        Err(e) => {
            for &th in theorems {
                for &mode in th.modes() {
                    rows.push(bound_error_row(key, th, mode, e.clone()));
                }
            }
            return rows;
        }
    };
    let prepared = Prepared::new(inst, quad).map_err(|e| e.to_string());
    for &th in theorems {
        let cert = cache
            .get(&cert_key(th, inst).bits())
            .cloned()
            .unwrap_or_else(|| Err("certification was not run".into()));
        for &mode in th.modes() {
            let outcome = match (&prepared, &cert) {
                (Err(e), _) => Err(e.clone()),
                (_, Err(e)) => Err(format!("certification failed: {e}")),
                (Ok(p), Ok(c)) => p.evaluate(th, mode, quad, Some(c)).map_err(|e| e.to_string()),
            };
            rows.push(match outcome {
                Ok(report) => ResultRow::Bound(BoundRow {
                    key: key.clone(),
                    theorem: th,
                    mode,
                    status: report.status,
                    report: Some(report),
                    error: None,
                    trial: None,
                    slack_ratio: None,
                }),
                Err(e) => bound_error_row(key, th, mode, e),
            });
        }
        for &remark in bounds::remarks_for(th) {
            if !remark_applies(inst, remark) {
                continue;
            }
            let (status, check, error) = match bounds::remark_reduction_check(th, remark, inst) {
                Ok(c) => (if c.matches { Status::Pass } else { Status::Flag }, Some(c), None),
                Err(e) => (Status::Error, None, Some(e.to_string())),
            };
            rows.push(ResultRow::Remark(RemarkRow {
                key: key.clone(),
                theorem: th,
                remark,
                status,
                check,
                error,
            }));
        }
    }
    rows
}

fn remark_applies(inst: &Instance, remark: Remark) -> bool {
    let plain = (inst.eta() - (inst.b - inst.a)).abs() <= 4.0 * f64::EPSILON * inst.b.abs().max(inst.a.abs()).max(1.0);
    let pinned = inst.alpha == 1.0 && (remark != Remark::AlphaOneLambdaHalf || inst.lambda == 0.5);
    plain && pinned
}
