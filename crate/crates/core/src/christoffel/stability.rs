use serde::Serialize;

use super::{ChristoffelError, ChristoffelModel};
use crate::pointcloud::{wasserstein, EmpiricalMeasure};

/// Slack allowed on every inequality check.
const SLACK: f64 = 1e-6;

/// `C = 4 · s · d²`, the constant of the Wasserstein stability bound.
pub fn stability_constant(basis_len: usize, degree: usize) -> f64 {
    4.0 * basis_len as f64 * (degree * degree) as f64
}

/// Both sides of the stability inequalities between two fitted models,
/// evaluated on a caller-provided grid. Sup norms are grid maxima and hence
/// lower bounds on the true sup norms.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub wasserstein: f64,
    pub constant: f64,
    pub sup_x: f64,
    pub sup_y: f64,
    /// `max |Λ_X − Λ_Y| / Λ_Y` over the grid.
    pub relative_gap: f64,
    /// `C · ‖Λ_X‖ · d_W`.
    pub relative_bound: f64,
    pub relative_holds: bool,
    /// `‖ln Λ_X − ln Λ_Y‖` and `ln(C · max‖Λ‖ · d_W + 1)`.
    pub log_gap_ln: f64,
    pub log_bound_ln: f64,
    /// The same pair in base 10. Both sides scale by `1/ln 10`, so the
    /// verdict does not depend on the base.
    pub log_gap_log10: f64,
    pub log_bound_log10: f64,
    pub log_holds: bool,
    /// Whether `C · ‖Λ_X‖ · d_W ≤ 1/2`, the premise of the local bound.
    pub local_premise: bool,
    /// `‖Λ_Y‖ ≤ 2‖Λ_X‖`; vacuously true when the premise fails.
    pub local_holds: bool,
}

impl StabilityReport {
    pub fn all_hold(&self) -> bool {
        self.relative_holds && self.log_holds && self.local_holds
    }
}

/// Checks the stability inequalities between `model_x` (fitted on `mu_x`)
/// and `model_y` (fitted on `mu_y`) over the row-major `grid`.
pub fn stability_gap(
    model_x: &ChristoffelModel,
    model_y: &ChristoffelModel,
    mu_x: &EmpiricalMeasure,
    mu_y: &EmpiricalMeasure,
    grid: &[f64],
) -> Result<StabilityReport, ChristoffelError> {
    if model_x.basis() != model_y.basis() {
        return Err(ChristoffelError::BasisMismatch);
    }
    let dim = model_x.basis().dim();
    if grid.len() < dim {
        return Err(ChristoffelError::EmptyGrid);
    }
    if mu_x.dim() != dim || mu_y.dim() != dim {
        return Err(ChristoffelError::DimensionMismatch {
            expected: dim,
            found: if mu_x.dim() != dim {
                mu_x.dim()
            } else {
                mu_y.dim()
            },
        });
    }
    let (dw, _) = wasserstein(mu_x, mu_y)?;
    let lx = model_x.eval_many(grid);
    let ly = model_y.eval_many(grid);
    let sup_x = lx.iter().copied().fold(0.0, f64::max);
    let sup_y = ly.iter().copied().fold(0.0, f64::max);
    let constant = stability_constant(model_x.basis().len(), model_x.basis().degree());

    let mut relative_holds = true;
    let mut relative_gap: f64 = 0.0;
    let mut log_gap_ln: f64 = 0.0;
    let relative_bound = constant * sup_x * dw;
    for (&a, &b) in lx.iter().zip(&ly) {
        relative_gap = relative_gap.max((a - b).abs() / b);
        // Checked pointwise with slack scaled by Λ_Y(x).
        relative_holds &= (a - b).abs() <= relative_bound * b + SLACK * b;
        log_gap_ln = log_gap_ln.max((a.ln() - b.ln()).abs());
    }
    let log_bound_ln = (constant * sup_x.max(sup_y) * dw).ln_1p();
    let local_premise = constant * sup_x * dw <= 0.5;
    Ok(StabilityReport {
        wasserstein: dw,
        constant,
        sup_x,
        sup_y,
        relative_gap,
        relative_bound,
        relative_holds,
        log_gap_ln,
        log_bound_ln,
        log_gap_log10: log_gap_ln / std::f64::consts::LN_10,
        log_bound_log10: log_bound_ln / std::f64::consts::LN_10,
        log_holds: log_gap_ln <= log_bound_ln + SLACK,
        local_premise,
        local_holds: !local_premise || sup_y <= 2.0 * sup_x + SLACK,
    })
}
