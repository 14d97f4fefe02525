//! Seeded end-to-end checks behind `atto suite`.
//!
//! Every trial draws from its own ChaCha stream keyed by `(check, trial)`, so
//! the report depends on the config alone. Timings never enter the report;
//! they go to the human-readable table on stderr.

use std::time::{Duration, Instant};

use atto_core::characterize::{series_errors, PSI_ORIGIN_TOL};
use atto_core::prelude::*;
use atto_core::sampling::{
    random_blaschke, random_disk_point, random_operator, random_symbol, random_vector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Tolerances below this are under what double-precision assembly delivers;
/// checks that fail against them are flagged rather than trusted.
pub const FEASIBLE_TOL_FLOOR: f64 = 1e-12;

const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);
const CONSTRUCTION: f64 = 1e-10;
const REBUILD: f64 = 1e-7;
const NON_MEMBER_GAP: f64 = 1e-3;
const MONOMIAL_EXACT: f64 = 1e-12;
const SERIES_GENERAL: f64 = 1e-8;
const EQUAL_SPACE_RANK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub deg_alpha: usize,
    pub deg_beta: usize,
    pub tol: f64,
    pub quad_nodes: Option<usize>,
}

#[derive(Debug, Clone, Copy, Serialize)]
enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Above,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub verdict: bool,
    /// Worst value of the checked quantity over all trials; `None` if no
    /// trial got far enough to measure it.
    pub residual: Option<f64>,
    pub threshold: f64,
    comparison: Comparison,
    pub trials: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub tolerance_infeasible: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// One trial: the measured quantity and whether the trial passed. The
/// quantity is compared against the threshold as well.
type Trial = Result<(f64, bool)>;

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    checks: Vec<Check>,
}

impl Runner<'_> {
    fn rng(&self, check: usize, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(((check as u64) << 32) | trial as u64);
        rng
    }

    fn run(
        &mut self,
        name: &'static str,
        threshold: f64,
        comparison: Comparison,
        uses_tol: bool,
        mut trial: impl FnMut(&mut ChaCha8Rng) -> Trial,
    ) {
        let start = Instant::now();
        let id = self.checks.len();
        let mut worst = match comparison {
            Comparison::AtMost => 0.0,
            Comparison::Above => f64::INFINITY,
        };
        let (mut failures, mut first_failure, mut measured) = (0, None, false);
        for t in 0..self.cfg.trials {
            let mut rng = self.rng(id, t);
            let outcome = trial(&mut rng);
            let ok = match outcome {
                Ok((value, ok)) => {
                    measured = true;
                    let within = match comparison {
                        Comparison::AtMost => {
                            worst = f64::max(worst, value);
                            value <= threshold
                        }
                        Comparison::Above => {
                            worst = f64::min(worst, value);
                            value > threshold
                        }
                    };
                    if !ok || !within {
                        first_failure.get_or_insert_with(|| format!("trial {t}: value {value:e}"));
                    }
                    ok && within
                }
                Err(e) => {
                    first_failure.get_or_insert_with(|| format!("trial {t}: {e}"));
                    false
                }
            };
            failures += usize::from(!ok);
        }
        let verdict = failures == 0;
        self.checks.push(Check {
            name,
            verdict,
            residual: measured.then_some(worst),
            threshold,
            comparison,
            trials: self.cfg.trials,
            failures,
            first_failure,
            tolerance_infeasible: !verdict && uses_tol && self.cfg.tol < FEASIBLE_TOL_FLOOR,
            elapsed: start.elapsed(),
        });
    }
}

impl SuiteConfig {
    fn nodes(&self, da: usize, db: usize) -> usize {
        self.quad_nodes
            .unwrap_or_else(|| default_node_count(da, db))
    }

    fn spaces_of(
        &self,
        alpha: &BlaschkeProduct,
        beta: &BlaschkeProduct,
    ) -> Result<(ModelSpace, ModelSpace)> {
        let nodes = self.nodes(alpha.degree(), beta.degree());
        Ok((tm_basis(alpha, nodes)?, tm_basis(beta, nodes)?))
    }

    /// Degrees uniform in `[min, cap]`; `min` is raised to the cap if needed.
    fn spaces(&self, rng: &mut ChaCha8Rng, min: usize) -> Result<(ModelSpace, ModelSpace)> {
        let da = rng.random_range(min.min(self.deg_alpha)..=self.deg_alpha.max(min));
        let db = rng.random_range(min.min(self.deg_beta)..=self.deg_beta.max(min));
        let alpha = random_blaschke(rng, da)?;
        let beta = random_blaschke(rng, db)?;
        self.spaces_of(&alpha, &beta)
    }
}

fn relative(x: f64, op: &OperatorMatrix) -> f64 {
    x / op.frobenius_norm().max(1.0)
}

fn kernel_grid(space: &ModelSpace, w: Complex64) -> Vec<Complex64> {
    let alpha = space.alpha();
    space
        .grid()
        .nodes()
        .iter()
        .map(|&z| atto_core::model_space::kernel_value(alpha, w, z))
        .collect()
}

fn non_increasing(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let tol = cfg.tol;
    let mut r = Runner {
        cfg,
        checks: Vec::new(),
    };

    r.run(
        "kernel_reproduction",
        CONSTRUCTION,
        Comparison::AtMost,
        false,
        |rng| {
            let (space, _) = cfg.spaces(rng, 1)?;
            let w = random_disk_point(rng, 0.9);
            let f = random_vector(rng, &space);
            let ip =
                boundary_inner_product(f.boundary_samples().as_slice(), &kernel_grid(&space, w))?;
            Ok(((f.eval(w)? - ip).norm(), true))
        },
    );
    r.run(
        "conjugate_kernel",
        CONSTRUCTION,
        Comparison::AtMost,
        false,
        |rng| {
            let (space, _) = cfg.spaces(rng, 1)?;
            let w = random_disk_point(rng, 0.9);
            let ck = conjugation_matrix(&space)?.apply(&kernel_coeffs(&space, w)?)?;
            Ok((ck.distance_max(&conjugate_kernel_coeffs(&space, w)?)?, true))
        },
    );
    r.run(
        "conjugation_invariants",
        CONSTRUCTION,
        Comparison::AtMost,
        false,
        |rng| {
            let (space, _) = cfg.spaces(rng, 1)?;
            let c = conjugation_matrix(&space)?;
            let worst = c
                .unitary_deviation()
                .max(c.symmetry_deviation())
                .max(c.involution_deviation());
            Ok((worst, true))
        },
    );
    r.run("defect_identity", tol, Comparison::AtMost, true, |rng| {
        let (dom, cod) = cfg.spaces(rng, 1)?;
        let phi = random_symbol(rng, &dom, &cod)?.boundary_samples();
        let a = atto_matrix(&dom, &cod, &phi)?;
        let d = defect_t1(&a, &compressed_shift(&cod), &compressed_shift(&dom))?;
        let pair = symbol_defect_pair(&dom, &cod, &phi)?;
        let rhs = rank_one(&pair.psi, &kernel_coeffs(&dom, ORIGIN)?).add_scaled(
            Complex64::new(1.0, 0.0),
            &rank_one(&kernel_coeffs(&cod, ORIGIN)?, &pair.chi),
        )?;
        Ok((relative(d.distance(&rhs)?, &a), true))
    });
    r.run("member_residual", tol, Comparison::AtMost, true, |rng| {
        let (dom, cod) = cfg.spaces(rng, 1)?;
        let a = random_symbol(rng, &dom, &cod)?.operator();
        let res = membership(&a, Variant::T1, tol, ORIGIN, ORIGIN)?;
        Ok((res.residual, res.verdict))
    });
    r.run("symbol_rebuild", REBUILD, Comparison::AtMost, true, |rng| {
        let (dom, cod) = cfg.spaces(rng, 1)?;
        let a = random_symbol(rng, &dom, &cod)?.operator();
        let pair = recover_symbol(&a, tol)?;
        let rebuilt = atto_matrix(&dom, &cod, &pair.boundary_samples())?;
        Ok((rebuilt.distance(&a)? / a.frobenius_norm(), true))
    });
    r.run(
        "psi_origin",
        PSI_ORIGIN_TOL,
        Comparison::AtMost,
        true,
        |rng| {
            let (dom, cod) = cfg.spaces(rng, 1)?;
            let a = random_symbol(rng, &dom, &cod)?.operator();
            Ok((recover_symbol(&a, tol)?.psi.eval(ORIGIN)?.norm(), true))
        },
    );
    r.run(
        "equivalence_members",
        tol,
        Comparison::AtMost,
        true,
        |rng| {
            let (dom, cod) = cfg.spaces(rng, 1)?;
            let a = random_symbol(rng, &dom, &cod)?.operator();
            let report = equivalence_suite(&a, tol, rng.random())?;
            let worst = report
                .results
                .iter()
                .map(|x| x.residual)
                .fold(0.0, f64::max);
            Ok((worst, report.agree && report.verdict))
        },
    );
    r.run(
        "equivalence_non_members",
        NON_MEMBER_GAP,
        Comparison::Above,
        true,
        |rng| {
            let (dom, cod) = cfg.spaces(rng, 2)?;
            let a = random_symbol(rng, &dom, &cod)?.operator();
            let noise = random_operator(rng, &dom, &cod);
            let eps = 0.1 * a.frobenius_norm() / noise.frobenius_norm();
            let perturbed = a.add_scaled(Complex64::from(eps), &noise)?;
            let report = equivalence_suite(&perturbed, tol, rng.random())?;
            let least = report
                .results
                .iter()
                .map(|x| x.residual)
                .fold(f64::INFINITY, f64::min);
            Ok((least, report.agree && !report.verdict))
        },
    );
    r.run(
        "series_monomial",
        MONOMIAL_EXACT,
        Comparison::AtMost,
        true,
        |rng| {
            let p = rng.random_range(1..=cfg.deg_alpha);
            let q = rng.random_range(1..=cfg.deg_beta);
            let (dom, cod) = cfg.spaces_of(
                &BlaschkeProduct::monomial(p)?,
                &BlaschkeProduct::monomial(q)?,
            )?;
            let a = random_symbol(rng, &dom, &cod)?.operator();
            let errors = series_errors(&recover_symbol(&a, tol)?, p.max(q) + 1)?;
            let tail = errors[p.max(q) - 1..].iter().copied().fold(0.0, f64::max);
            Ok((relative(tail, &a), non_increasing(&errors)))
        },
    );
    r.run(
        "series_geometric",
        SERIES_GENERAL,
        Comparison::AtMost,
        true,
        |rng| {
            let (dom, cod) = cfg.spaces(rng, 1)?;
            let radius = dom
                .alpha()
                .max_zero_modulus()
                .max(cod.alpha().max_zero_modulus());
            let n = (SERIES_GENERAL.ln() / (radius + 1e-3).ln()).ceil().max(1.0) as usize;
            let a = random_symbol(rng, &dom, &cod)?.operator();
            let errors = series_errors(&recover_symbol(&a, tol)?, n)?;
            Ok((relative(errors[n], &a), non_increasing(&errors)))
        },
    );
    r.run(
        "equal_spaces_rank",
        EQUAL_SPACE_RANK,
        Comparison::AtMost,
        false,
        |rng| {
            let deg = rng.random_range(1..=cfg.deg_alpha);
            let alpha = random_blaschke(rng, deg)?;
            let space = tm_basis(&alpha, cfg.nodes(deg, deg))?;
            let a = random_symbol(rng, &space, &space)?.operator();
            let s = compressed_shift(&space);
            let third = |m: &OperatorMatrix| m.singular_values().get(2).copied().unwrap_or(0.0);
            let worst = third(&defect_t1(&a, &s, &s)?).max(third(&defect_c2(&a, &s, &s)?));
            Ok((worst / a.frobenius_norm(), true))
        },
    );
    r.run("divisor_spaces", tol, Comparison::AtMost, true, |rng| {
        let db = rng.random_range(1..=cfg.deg_beta);
        let dg = rng.random_range(1..=cfg.deg_alpha);
        let beta = random_blaschke(rng, db)?;
        let alpha = beta.multiply(&random_blaschke(rng, dg)?)?;
        let (dom, cod) = cfg.spaces_of(&alpha, &beta)?;
        let a = random_symbol(rng, &dom, &cod)?.operator();
        let report = equivalence_suite(&a, tol, rng.random())?;
        let worst = report
            .results
            .iter()
            .map(|x| x.residual)
            .fold(0.0, f64::max);
        Ok((worst, report.agree && report.verdict))
    });
    r.run("negative_controls", tol, Comparison::Above, true, |rng| {
        let (dom, cod) = cfg.spaces(rng, 2)?;
        let noise = random_operator(rng, &dom, &cod);
        let report = equivalence_suite(&noise, tol, rng.random())?;
        let least = report
            .results
            .iter()
            .map(|x| x.residual)
            .fold(f64::INFINITY, f64::min);
        Ok((least, report.results.iter().all(|x| !x.verdict)))
    });

    let pass = r.checks.iter().all(|c| c.verdict);
    Report {
        config: cfg.clone(),
        checks: r.checks,
        pass,
    }
}

pub fn render_table(report: &Report) -> String {
    let mut out = format!(
        "{:<24} {:>7} {:>12} {:>4} {:>10} {:>9} {:>9}\n",
        "check", "verdict", "residual", "", "threshold", "failures", "elapsed"
    );
    for c in &report.checks {
        let cmp = match c.comparison {
            Comparison::AtMost => "<=",
            Comparison::Above => ">",
        };
        let note = if c.tolerance_infeasible {
            "  (tolerance infeasible)"
        } else {
            ""
        };
        let residual = c
            .residual
            .map_or_else(|| "-".to_owned(), |r| format!("{r:.3e}"));
        out += &format!(
            "{:<24} {:>7} {:>12} {:>4} {:>10.1e} {:>5}/{:<3} {:>8.2}s{note}\n",
            c.name,
            if c.verdict { "PASS" } else { "FAIL" },
            residual,
            cmp,
            c.threshold,
            c.failures,
            c.trials,
            c.elapsed.as_secs_f64()
        );
    }
    out += if report.pass {
        "aggregate: PASS\n"
    } else {
        "aggregate: FAIL\n"
    };
    out
}
