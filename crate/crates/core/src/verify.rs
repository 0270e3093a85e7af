use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cherednik::{apply_m, eigenvalue_of_m, verify_bs_cos, verify_bs_sin, verify_factor_identities};
use crate::error::{Error, Result};
use crate::grassgeo::{knapp_stein_kernel_check, mc_symbols, McCell, McEstimate, KS_KERNEL_TOL};
use crate::jacobi::jacobi_polynomial;
use crate::param::{q, qi, Param, Q};
use crate::rootsystem::{generic_defect, grassmannian_preset_with, multiplicity_convention, Field, RootSystemBC, Weight};
use crate::spectra::TransformKind;

pub const BS_TOL: f64 = 1e-8;
pub const MC_SIGMAS: f64 = 3.0;
/// Fresh seeds given to a Monte-Carlo cell that first lands outside `MC_SIGMAS`.
pub const MC_RERUNS: u64 = 2;

/// Parameters shared by all suites; each suite reads what it needs.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub field: Field,
    pub n: usize,
    pub r: usize,
    /// Explicit multiplicities `(a, 2b, ι)`; override the Grassmannian preset.
    pub multiplicities: Option<(Q, Q, Q)>,
    pub convention: String,
    pub delta: f64,
    pub trials: usize,
    pub degree_bound: u32,
    pub nu: Param,
    pub t: Param,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            field: Field::R,
            n: 4,
            r: 2,
            multiplicities: None,
            convention: "geometric".into(),
            delta: 2.0,
            trials: 20,
            degree_bound: 4,
            nu: Param::from(1),
            t: Param::Exact(q(1, 4)),
            samples: 1000,
            seed: 1,
        }
    }
}

impl VerifyConfig {
    pub fn root_system(&self) -> Result<RootSystemBC> {
        match &self.multiplicities {
            Some((a, b2, iota)) => RootSystemBC::new(self.r, a.clone(), b2.clone(), iota.clone()),
            None => {
                let conv = multiplicity_convention(&self.convention)?;
                grassmannian_preset_with(conv.as_ref(), self.field, self.n, self.r)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub pass: bool,
    pub checks: usize,
    pub max_residual: f64,
    /// `None` for exact suites.
    pub tolerance: Option<f64>,
    pub failures: Vec<String>,
    pub detail: Value,
}

pub trait VerificationSuite: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, cfg: &VerifyConfig) -> Result<VerifyReport>;
}

/// Random torus points away from the reflection walls.
pub fn generic_points(rank: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..3.1)).collect();
        if generic_defect(&t) > 0.05 {
            out.push(t);
        }
    }
    out
}

struct BernsteinSato {
    sine: bool,
}

struct Factors;
struct Eigen;
struct MonteCarlo;
struct KsKernel;

impl VerificationSuite for BernsteinSato {
    fn name(&self) -> &'static str {
        if self.sine {
            "bs-sin"
        } else {
            "bs-cos"
        }
    }

    fn run(&self, cfg: &VerifyConfig) -> Result<VerifyReport> {
        let rs = cfg.root_system()?;
        let mut worst: f64 = 0.0;
        let mut failures = Vec::new();
        for t in generic_points(rs.rank(), cfg.trials, cfg.seed) {
            let res = if self.sine {
                verify_bs_sin(&rs, cfg.delta, &t)?
            } else {
                verify_bs_cos(&rs, cfg.delta, &t)?
            };
            let e = res.relative.max(res.worst_step);
            worst = worst.max(e);
            if !(e <= BS_TOL) {
                failures.push(format!("t = {t:?}: relative residual {e:e}"));
            }
        }
        Ok(VerifyReport {
            suite: self.name().into(),
            pass: failures.is_empty(),
            checks: cfg.trials,
            max_residual: worst,
            tolerance: Some(BS_TOL),
            failures,
            detail: json!({ "root_system": rs.to_string(), "delta": cfg.delta }),
        })
    }
}

impl VerificationSuite for Factors {
    fn name(&self) -> &'static str {
        "factors"
    }

    fn run(&self, cfg: &VerifyConfig) -> Result<VerifyReport> {
        let rs = cfg.root_system()?;
        let mut worst: f64 = 0.0;
        let mut failures = Vec::new();
        let mut checks = 0;
        for t in generic_points(rs.rank(), cfg.trials, cfg.seed) {
            for j in 1..=rs.rank() {
                let e = verify_factor_identities(&rs, cfg.delta, j, &t)?.max();
                checks += 1;
                worst = worst.max(e);
                if !(e <= BS_TOL) {
                    failures.push(format!("j = {j}, t = {t:?}: relative residual {e:e}"));
                }
            }
        }
        Ok(VerifyReport {
            suite: self.name().into(),
            pass: failures.is_empty(),
            checks,
            max_residual: worst,
            tolerance: Some(BS_TOL),
            failures,
            detail: json!({ "root_system": rs.to_string(), "delta": cfg.delta }),
        })
    }
}

impl VerificationSuite for Eigen {
    fn name(&self) -> &'static str {
        "eigen"
    }

    /// `M_{2ν+2} φ_m = λ φ_m` in rational arithmetic for every even `|m| ≤ deg`.
    fn run(&self, cfg: &VerifyConfig) -> Result<VerifyReport> {
        let rs = cfg.root_system()?;
        let nu = cfg
            .nu
            .exact()
            .ok_or_else(|| Error::InvalidParameter("the eigen suite needs an exact nu".into()))?;
        let delta = nu * qi(2) + qi(2);
        let mut failures = Vec::new();
        let weights = Weight::even_dominant(rs.rank(), cfg.degree_bound);
        for m in &weights {
            let phi = jacobi_polynomial(&rs, m)?.to_laurent();
            let lhs = apply_m(&rs, &delta, &phi)?;
            let rhs = phi.scale(&eigenvalue_of_m(&rs, nu, m));
            if lhs != rhs {
                failures.push(format!("m = {m}"));
            }
        }
        Ok(VerifyReport {
            suite: self.name().into(),
            pass: failures.is_empty(),
            checks: weights.len(),
            max_residual: if failures.is_empty() { 0.0 } else { f64::NAN },
            tolerance: None,
            failures,
            detail: json!({ "root_system": rs.to_string(), "nu": cfg.nu.to_string() }),
        })
    }
}

/// Monte-Carlo cells for both kernels and every even `|m| ≤ degree_bound`.
pub fn mc_cells(r: usize, nus: &[Param], degree_bound: u32) -> Vec<McCell> {
    let mut cells = Vec::new();
    for nu in nus {
        for m in Weight::even_dominant(r, degree_bound) {
            for kind in [TransformKind::Cosine, TransformKind::Sine] {
                cells.push(McCell {
                    nu: nu.clone(),
                    kind,
                    m: m.clone(),
                });
            }
        }
    }
    cells
}

#[derive(Debug, Clone, Serialize)]
pub struct McAdjudication {
    pub first: Vec<McEstimate>,
    /// Re-runs of the cells that first exceeded `MC_SIGMAS`, keyed by cell index.
    pub reruns: Vec<(usize, Vec<McEstimate>)>,
    /// Cells outside `MC_SIGMAS` in the first run and in some re-run.
    pub persistent: Vec<usize>,
}

/// Runs `cells`; a cell beyond `MC_SIGMAS` is repeated with seeds
/// `seed + 1 ..= seed + MC_RERUNS` and fails if any repeat is also beyond.
pub fn mc_adjudicate(
    field: Field,
    n: usize,
    rs: &RootSystemBC,
    cells: &[McCell],
    samples: usize,
    seed: u64,
) -> Result<McAdjudication> {
    let r = rs.rank();
    let first = mc_symbols(field, n, r, rs, cells, samples, seed)?;
    let mut reruns = Vec::new();
    let mut persistent = Vec::new();
    for (i, e) in first.iter().enumerate() {
        if e.z.abs() <= MC_SIGMAS {
            continue;
        }
        let again = (1..=MC_RERUNS)
            .map(|k| Ok(mc_symbols(field, n, r, rs, std::slice::from_ref(&cells[i]), samples, seed + k)?.remove(0)))
            .collect::<Result<Vec<_>>>()?;
        if again.iter().any(|x| x.z.abs() > MC_SIGMAS) {
            persistent.push(i);
        }
        reruns.push((i, again));
    }
    Ok(McAdjudication {
        first,
        reruns,
        persistent,
    })
}

impl VerificationSuite for MonteCarlo {
    fn name(&self) -> &'static str {
        "mc"
    }

    fn run(&self, cfg: &VerifyConfig) -> Result<VerifyReport> {
        let rs = cfg.root_system()?;
        let cells = mc_cells(cfg.r, std::slice::from_ref(&cfg.nu), cfg.degree_bound);
        let adj = mc_adjudicate(cfg.field, cfg.n, &rs, &cells, cfg.samples, cfg.seed)?;
        let worst = adj.first.iter().map(|e| e.z.abs()).fold(0.0, f64::max);
        let failures = adj
            .persistent
            .iter()
            .map(|&i| {
                let e = &adj.first[i];
                format!("{} m = {}: z = {:.2}", e.cell.kind, e.cell.m, e.z)
            })
            .collect::<Vec<_>>();
        Ok(VerifyReport {
            suite: self.name().into(),
            pass: failures.is_empty(),
            checks: cells.len(),
            max_residual: worst,
            tolerance: Some(MC_SIGMAS),
            failures,
            detail: serde_json::to_value(&adj)?,
        })
    }
}

impl VerificationSuite for KsKernel {
    fn name(&self) -> &'static str {
        "ks-kernel"
    }

    fn run(&self, cfg: &VerifyConfig) -> Result<VerifyReport> {
        let rep = knapp_stein_kernel_check(cfg.field, cfg.r, &cfg.t, cfg.samples, cfg.seed)?;
        let mut failures = Vec::new();
        if !(rep.max_kernel_rel <= KS_KERNEL_TOL) {
            failures.push(format!("kernel identity off by {:e}", rep.max_kernel_rel));
        }
        if !(rep.max_jacobian_rel <= KS_KERNEL_TOL) {
            failures.push(format!("Jacobian identity off by {:e}", rep.max_jacobian_rel));
        }
        Ok(VerifyReport {
            suite: self.name().into(),
            pass: rep.pass,
            checks: 2 * rep.samples,
            max_residual: rep.max_kernel_rel.max(rep.max_jacobian_rel),
            tolerance: Some(KS_KERNEL_TOL),
            failures,
            detail: serde_json::to_value(&rep)?,
        })
    }
}

pub fn verification_suites() -> Vec<Box<dyn VerificationSuite>> {
    vec![
        Box::new(BernsteinSato { sine: false }),
        Box::new(BernsteinSato { sine: true }),
        Box::new(Factors),
        Box::new(Eigen),
        Box::new(MonteCarlo),
        Box::new(KsKernel),
    ]
}

pub fn verification_suite(name: &str) -> Result<Box<dyn VerificationSuite>> {
    verification_suites()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::UnknownName {
            kind: "verification suite",
            name: name.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names() {
        let names: Vec<_> = verification_suites().iter().map(|s| s.name()).collect();
        assert_eq!(names, ["bs-cos", "bs-sin", "factors", "eigen", "mc", "ks-kernel"]);
        assert!(verification_suite("gram").is_err());
    }

    #[test]
    fn quick_suites_pass() {
        let cfg = VerifyConfig {
            multiplicities: Some((qi(1), qi(0), qi(0))),
            trials: 5,
            ..Default::default()
        };
        for name in ["bs-cos", "bs-sin", "factors", "eigen"] {
            let rep = verification_suite(name).unwrap().run(&cfg).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
        let rep = verification_suite("ks-kernel").unwrap().run(&VerifyConfig { samples: 50, ..cfg }).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn eigen_rejects_float_nu() {
        let cfg = VerifyConfig {
            nu: Param::Float(0.3),
            ..Default::default()
        };
        assert!(verification_suite("eigen").unwrap().run(&cfg).is_err());
    }
}
