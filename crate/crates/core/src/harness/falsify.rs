//! Seeded random search for oracle-bound violations.
//!
//! Trial `i` draws its instance from a ChaCha stream keyed by `(seed, i)`,
//! so results do not depend on the worker count or on other trials.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{self, BoundMode, BoundReport, Prepared, Status, Theorem};
use crate::preinvex::{library_function, library_map, CertificationReport, GridSize, Instance, InstanceKey};

use super::config::{ConfigError, SweepConfig};
use super::report::{BoundRow, FalsifySummary, ResultRow, RunReport};

/// Resolved sampling space.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSpace {
    pub functions: Vec<String>,
    pub maps: Vec<String>,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub alpha: [f64; 2],
    pub lambda: [f64; 2],
    pub q: [f64; 2],
    pub theorems: Vec<Theorem>,
}

fn span(values: impl Iterator<Item = f64>) -> Option<[f64; 2]> {
    values.fold(None, |acc, v| match acc {
        None => Some([v, v]),
        Some([lo, hi]) => Some([lo.min(v), hi.max(v)]),
    })
}

fn missing(field: &str) -> ConfigError {
    ConfigError::Invalid {
        field: format!("falsify.{field}"),
        message: "not set and no instance template to derive it from".into(),
        line: None,
    }
}

impl SamplingSpace {
    pub fn from_config(cfg: &SweepConfig) -> Result<Self, ConfigError> {
        let f = &cfg.falsify;
        let t = &cfg.instances;
        let collect_ids = |explicit: &Option<Vec<String>>, pick: fn(&super::config::InstanceTemplate) -> &Vec<String>| {
            let mut ids: Vec<String> = match explicit {
                Some(v) => v.clone(),
                None => t.iter().flat_map(|x| pick(x).iter().cloned()).collect(),
            };
            ids.sort();
            ids.dedup();
            ids
        };
        let functions = collect_ids(&f.functions, |x| &x.functions);
        let maps = collect_ids(&f.maps, |x| &x.maps);
        if functions.is_empty() {
            return Err(missing("functions"));
        }
        if maps.is_empty() {
            return Err(missing("maps"));
        }
        let range = |explicit: Option<[f64; 2]>, pick: fn(&super::config::InstanceTemplate) -> &Vec<f64>, name: &str| {
            explicit
                .or_else(|| span(t.iter().flat_map(|x| pick(x).iter().copied())))
                .ok_or_else(|| missing(name))
        };
        let mut theorems = f.theorems.clone().unwrap_or_else(|| Theorem::ALL.to_vec());
        theorems.sort();
        theorems.dedup();
        let space = Self {
            functions,
            maps,
            a: range(f.a_range, |x| &x.a, "a_range")?,
            b: range(f.b_range, |x| &x.b, "b_range")?,
            alpha: range(f.alpha_range, |x| &x.alpha, "alpha_range")?,
            lambda: range(f.lambda_range, |x| &x.lambda, "lambda_range")?,
            q: range(f.q_range, |x| &x.q, "q_range")?,
            theorems,
        };
        if space.theorems.iter().any(|t| t.uses_q()) && space.q[0] <= 1.0 {
            return Err(ConfigError::Invalid {
                field: "falsify.q_range".into(),
                message: format!("theorems using q need q > 1 (range starts at {})", space.q[0]),
                line: None,
            });
        }
        Ok(space)
    }

    /// The instance key of trial `trial` under `seed`.
    pub fn sample(&self, seed: u64, trial: u64) -> InstanceKey {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut draw = |[lo, hi]: [f64; 2]| if lo == hi { lo } else { rng.gen_range(lo..=hi) };
        let a = draw(self.a);
        let b = draw(self.b);
        let alpha = draw(self.alpha);
        let lambda = draw(self.lambda);
        let q = draw(self.q);
        let function = self.functions.choose(&mut rng).expect("non-empty").clone();
        let map = self.maps.choose(&mut rng).expect("non-empty").clone();
        InstanceKey {
            function,
            map,
            a,
            b,
            alpha,
            lambda,
            q,
        }
    }
}

type Evaluation = (Theorem, BoundMode, Result<BoundReport, String>);

fn run_trial(space: &SamplingSpace, cfg: &SweepConfig, seed: u64, trial: u64, grid: GridSize) -> (InstanceKey, Result<Vec<Evaluation>, String>) {
    let key = space.sample(seed, trial);
    let built = library_function(&key.function)
        .and_then(|f| Ok((f, library_map(&key.map)?)))
        .and_then(|(f, m)| Instance::new(f, m, key.a, key.b, key.alpha, key.lambda, key.q))
        .map_err(|e| e.to_string());
    let inst = match built {
        Ok(i) => i,
        Err(e) => return (key, Err(e)),
    };
    let prepared = match Prepared::new(&inst, &cfg.quadrature) {
        Ok(p) => p,
        Err(e) => return (key, Err(e.to_string())),
    };
    let mut certs: Vec<((u8, u64), Result<CertificationReport, String>)> = Vec::new();
    let mut out = Vec::new();
    for &th in &space.theorems {
        let id = (th.derivative_order(), th.certification_power(inst.q).to_bits());
        let cert = match certs.iter().find(|(k, _)| *k == id) {
            Some((_, c)) => c.clone(),
            None => {
                let c = bounds::certify_for(th, &inst, grid, cfg.certification.tolerance).map_err(|e| e.to_string());
                certs.push((id, c.clone()));
                c
            }
        };
        for &mode in th.modes() {
            let r = match &cert {
                Ok(c) => prepared
                    .evaluate(th, mode, &cfg.quadrature, Some(c))
                    .map_err(|e| e.to_string()),
                Err(e) => Err(format!("certification failed: {e}")),
            };
            out.push((th, mode, r));
        }
    }
    (key, Ok(out))
}

fn row(key: &InstanceKey, trial: u64, th: Theorem, mode: BoundMode, status: Status, report: Option<BoundReport>, error: Option<String>, ratio: Option<f64>) -> ResultRow {
    ResultRow::Bound(BoundRow {
        key: key.clone(),
        theorem: th,
        mode,
        status,
        report,
        error,
        trial: Some(trial),
        slack_ratio: ratio,
    })
}

/// Runs `trials` seeded trials. Reported rows are every violation and
/// error plus the `top_k` certified evaluations with the largest
/// `gap / oracle_bound`.
pub fn run_falsify(cfg: &SweepConfig, trials: u64, seed: u64) -> Result<RunReport, ConfigError> {
    if trials == 0 {
        return Err(ConfigError::Invalid {
            field: "trials".into(),
            message: "must be >= 1".into(),
            line: None,
        });
    }
    let space = SamplingSpace::from_config(cfg)?;
    let [nu, nv, nt] = cfg.falsify.grid;
    let grid = GridSize::new(nu, nv, nt);
    let outcomes: Vec<(InstanceKey, Result<Vec<Evaluation>, String>)> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(&space, cfg, seed, i, grid))
        .collect();

    let mut summary = FalsifySummary {
        trials,
        seed,
        evaluations: 0,
        certified: 0,
        exploratory: 0,
        exact_equality: 0,
        violations: 0,
        errors: 0,
        max_slack_ratio: None,
    };
    let mut violations = Vec::new();
    let mut errors = Vec::new();
    let mut ranked: Vec<(f64, u64, Theorem, BoundMode, &InstanceKey, BoundReport)> = Vec::new();

    for (trial, (key, outcome)) in outcomes.iter().enumerate() {
        let trial = trial as u64;
        let evals = match outcome {
            Ok(e) => e,
            Err(e) => {
                summary.errors += 1;
                for &th in &space.theorems {
                    for &mode in th.modes() {
                        errors.push(row(key, trial, th, mode, Status::Error, None, Some(e.clone()), None));
                    }
                }
                continue;
            }
        };
        for (th, mode, r) in evals {
            summary.evaluations += 1;
            let rep = match r {
                Ok(rep) => rep,
                Err(e) => {
                    summary.errors += 1;
                    errors.push(row(key, trial, *th, *mode, Status::Error, None, Some(e.clone()), None));
                    continue;
                }
            };
            if !rep.certified {
                summary.exploratory += 1;
                continue;
            }
            summary.certified += 1;
            if rep.oracle_bound == 0.0 && rep.gap <= rep.tolerance {
                summary.exact_equality += 1;
                continue;
            }
            let ratio = if rep.oracle_bound == 0.0 { f64::MAX } else { rep.gap / rep.oracle_bound };
            summary.max_slack_ratio = Some(summary.max_slack_ratio.map_or(ratio, |m: f64| m.max(ratio)));
            if !rep.bound_holds_oracle {
                summary.violations += 1;
                violations.push(row(key, trial, *th, *mode, Status::Fail, Some(rep.clone()), None, Some(ratio)));
            } else {
                ranked.push((ratio, trial, *th, *mode, key, rep.clone()));
            }
        }
    }

    ranked.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then(x.1.cmp(&y.1))
            .then(x.2.cmp(&y.2))
            .then(x.3.cmp(&y.3))
    });
    let mut rows = violations;
    rows.extend(
        ranked
            .into_iter()
            .take(cfg.falsify.top_k)
            .map(|(ratio, trial, th, mode, key, rep)| row(key, trial, th, mode, Status::Pass, Some(rep), None, Some(ratio))),
    );
    rows.extend(errors);

    let mut echo = serde_json::to_value(cfg).unwrap_or(serde_json::Value::Null);
    if let Some(obj) = echo.as_object_mut() {
        obj.insert("trials".into(), trials.into());
        obj.insert("seed".into(), seed.into());
    }
    let mut report = RunReport::new("falsify", echo, rows);
    report.falsification = Some(summary);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_reproducible_and_in_range() {
        let cfg = SweepConfig::default_suite();
        let space = SamplingSpace::from_config(&cfg).unwrap();
        for trial in 0..50 {
            let k = space.sample(7, trial);
            assert_eq!(k, space.sample(7, trial));
            assert!((space.a[0]..=space.a[1]).contains(&k.a));
            assert!((space.lambda[0]..=space.lambda[1]).contains(&k.lambda));
            assert!(space.functions.contains(&k.function));
        }
        assert_ne!(space.sample(7, 0), space.sample(8, 0));
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_falsify(&SweepConfig::default_suite(), 0, 1).is_err());
    }
}
