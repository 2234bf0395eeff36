//! The single-filter post-selection protocol.
//!
//! One qubit (default the first) is rotated by a reflection `u_theta(theta2)`
//! and measured; conditioning on one outcome forces its marginal eigenvalue
//! to 1. Another qubit (default the fourth) passes through `u_theta(theta1)`
//! followed by the non-unitary attenuator `a_gamma(gamma)`. Scanning
//! `(theta1, gamma)` moves the spectra vector of the surviving state around
//! its entanglement polytope, which is what separates states whose polytopes
//! overlap at the original spectra point.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polytope::{self, FacetSystem, Family, PolytopeId};
use crate::qcore::{LocalOperator, SpectraPoint, StateVector};

/// One run configuration of the protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSetting {
    pub theta1: f64,
    pub theta2: f64,
    pub gamma: f64,
    pub postselect_qubit: usize,
    pub outcome: u8,
    pub filtered_qubit: usize,
}

impl FilterSetting {
    /// Protocol defaults: theta2 = -pi/8, post-select qubit 1 on outcome 0,
    /// filter qubit 4.
    pub fn new(theta1: f64, gamma: f64) -> Self {
        FilterSetting {
            theta1,
            theta2: -std::f64::consts::FRAC_PI_8,
            gamma,
            postselect_qubit: 1,
            outcome: 0,
            filtered_qubit: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::GammaRange(self.gamma));
        }
        if !self.theta1.is_finite() || !self.theta2.is_finite() {
            return Err(Error::Parse("angles must be finite".into()));
        }
        if self.outcome > 1 {
            return Err(Error::InvalidOutcome(self.outcome));
        }
        if self.postselect_qubit == self.filtered_qubit {
            return Err(Error::DuplicateQubit);
        }
        for q in [self.postselect_qubit, self.filtered_qubit] {
            if q == 0 || q > 4 {
                return Err(Error::InvalidQubit {
                    qubit: q,
                    num_qubits: 4,
                });
            }
        }
        Ok(())
    }
}

/// Outcome of one protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolResult {
    /// The surviving three-qubit state.
    pub residual_state: StateVector,
    /// Spectra of the surviving qubits, in their original order.
    pub spectra: SpectraPoint,
    /// Four-entry spectra with 1 at the post-selected position.
    pub full_spectra: SpectraPoint,
    /// Discriminating value, the post-selected coordinate negated.
    pub f: f64,
    /// Post-selection probability times filter pass probability.
    pub success: f64,
}

/// The reflection R(theta) . diag(1,-1) . R(-theta); in closed form
/// [[cos 2theta, sin 2theta], [sin 2theta, -cos 2theta]].
pub fn u_theta(theta: f64) -> LocalOperator {
    let (s, c) = (theta.sin(), theta.cos());
    let rot = LocalOperator::from_rows(
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    );
    let flip = LocalOperator::diag(1.0.into(), (-1.0).into());
    let rot_back = LocalOperator::from_rows(
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
    );
    rot.compose(&flip).compose(&rot_back)
}

/// The attenuator diag(1, gamma) for gamma in (0, 1].
pub fn a_gamma(gamma: f64) -> Result<LocalOperator> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::GammaRange(gamma));
    }
    Ok(LocalOperator::diag(1.0.into(), gamma.into()))
}

/// Runs the protocol on a four-qubit state.
pub fn run_protocol(state: &StateVector, setting: &FilterSetting) -> Result<ProtocolResult> {
    setting.validate()?;
    if state.num_qubits() != 4 {
        return Err(Error::QubitCount(state.num_qubits()));
    }
    // u_theta(theta1) acts first on the filtered qubit, then the attenuator
    let filter_op = a_gamma(setting.gamma)?.compose(&u_theta(setting.theta1));
    let (rotated, pass) = state.apply_local(&[
        (setting.postselect_qubit, u_theta(setting.theta2)),
        (setting.filtered_qubit, filter_op),
    ])?;
    let (residual, born) = rotated.postselect(setting.postselect_qubit, setting.outcome)?;
    let success = pass * born;

    let spectra = residual.local_spectra();
    let mut full = spectra.values().to_vec();
    full.insert(setting.postselect_qubit - 1, 1.0);
    let full_spectra = SpectraPoint::new(full)?;
    let f = polytope::f_value(&full_spectra, setting.postselect_qubit)?;
    debug_assert!((0.0..=1.0 + 1e-12).contains(&success));
    Ok(ProtocolResult {
        residual_state: residual,
        spectra,
        full_spectra,
        f,
        success,
    })
}

/// One grid cell of a sweep; `result` is None where the protocol annihilated
/// the state.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub theta1: f64,
    pub inv_gamma_sq: f64,
    pub result: Option<ProtocolResult>,
}

/// Evaluates the protocol over the grid, theta1 outer, 1/gamma^2 inner.
pub fn sweep(
    state: &StateVector,
    theta1_grid: &[f64],
    inv_gamma_sq_grid: &[f64],
) -> Result<Vec<SweepRow>> {
    sweep_with_setting(
        state,
        &FilterSetting::new(0.0, 1.0),
        theta1_grid,
        inv_gamma_sq_grid,
    )
}

/// Sweep with explicit base setting (post-selection qubit, outcome, theta2).
pub fn sweep_with_setting(
    state: &StateVector,
    base: &FilterSetting,
    theta1_grid: &[f64],
    inv_gamma_sq_grid: &[f64],
) -> Result<Vec<SweepRow>> {
    if theta1_grid.is_empty() || inv_gamma_sq_grid.is_empty() {
        return Err(Error::Parse("sweep grids must be non-empty".into()));
    }
    for &ig in inv_gamma_sq_grid {
        if !ig.is_finite() || ig < 1.0 {
            return Err(Error::InvGammaRange(ig));
        }
    }
    let mut rows = Vec::with_capacity(theta1_grid.len() * inv_gamma_sq_grid.len());
    for &theta1 in theta1_grid {
        for &ig in inv_gamma_sq_grid {
            let setting = FilterSetting {
                theta1,
                gamma: (1.0 / ig).sqrt(),
                ..*base
            };
            let result = match run_protocol(state, &setting) {
                Ok(r) => Some(r),
                Err(Error::Annihilated(_)) => None,
                Err(e) => return Err(e),
            };
            rows.push(SweepRow {
                theta1,
                inv_gamma_sq: ig,
                result,
            });
        }
    }
    Ok(rows)
}

/// Renders sweep rows as delimited text: one header row, 12 significant
/// digits, columns theta1, inv_gamma_sq, f, success, lambda2..lambda4.
pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::from("theta1\tinv_gamma_sq\tf\tsuccess\tlambda2\tlambda3\tlambda4\n");
    for row in rows {
        let cells: [f64; 5] = match &row.result {
            Some(r) => {
                let s = r.spectra.values();
                [r.f, r.success, s[0], s[1], s[2]]
            }
            None => [f64::NAN; 5],
        };
        out.push_str(&format!("{:.11e}\t{:.11e}", row.theta1, row.inv_gamma_sq));
        for v in cells {
            out.push_str(&format!("\t{v:.11e}"));
        }
        out.push('\n');
    }
    out
}

/// Outcome of [`search_escape`].
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best_setting: FilterSetting,
    /// Largest facet violation found (negative: every setting stayed inside).
    pub best_margin: f64,
    pub escaped: bool,
}

/// Searches filter settings for a protocol output whose spectra leave the
/// target polytope (P4 against the four-entry spectra, W3 against the
/// residual three-qubit spectra). Coarse grid over theta1 in [0, pi/2) and
/// 1/gamma^2 in [1, 8], then coordinate descent with halving steps; the
/// whole search is a pure function of the inputs and the budget.
pub fn search_escape(
    state: &StateVector,
    target: &PolytopeId,
    budget: u64,
) -> Result<SearchOutcome> {
    if budget < 9 {
        return Err(Error::BudgetTooSmall(budget));
    }
    let facets = match target.family() {
        Family::P4 | Family::W3 => polytope::facet_system(target)?,
        _ => return Err(Error::InvalidSearchTarget(target.to_string())),
    };
    let use_full = target.family() == Family::P4;

    let margin_of = |theta1: f64, ig: f64| -> Option<f64> {
        let setting = FilterSetting {
            theta1,
            gamma: (1.0 / ig).sqrt(),
            ..FilterSetting::new(0.0, 1.0)
        };
        match run_protocol(state, &setting) {
            Ok(r) => {
                let point = if use_full {
                    r.full_spectra.values().to_vec()
                } else {
                    r.spectra.values().to_vec()
                };
                Some(violation_margin(&facets, &point))
            }
            Err(_) => None,
        }
    };

    let mut evals = 0u64;
    let g = ((budget / 2) as f64).sqrt().floor() as u64;
    let g = g.max(3) as usize;
    let theta_step = std::f64::consts::FRAC_PI_2 / g as f64;
    let ig_step = 7.0 / (g as f64 - 1.0);

    let mut best: Option<(f64, f64, f64)> = None; // (margin, theta1, ig)
    for i in 0..g {
        for j in 0..g {
            if evals >= budget {
                break;
            }
            let theta1 = i as f64 * theta_step;
            let ig = 1.0 + j as f64 * ig_step;
            evals += 1;
            if let Some(m) = margin_of(theta1, ig) {
                if best.is_none_or(|(bm, _, _)| m > bm) {
                    best = Some((m, theta1, ig));
                }
            }
        }
    }
    let (mut bm, mut bt, mut bi) = best.ok_or(Error::Annihilated(0.0))?;

    let mut dt = theta_step;
    let mut di = ig_step;
    while evals < budget && (dt > 1e-9 || di > 1e-9) {
        let mut moved = false;
        let candidates = [
            ((bt + dt).min(std::f64::consts::FRAC_PI_2), bi),
            ((bt - dt).max(0.0), bi),
            (bt, (bi + di).min(8.0)),
            (bt, (bi - di).max(1.0)),
        ];
        for (t, i) in candidates {
            if evals >= budget {
                break;
            }
            evals += 1;
            if let Some(m) = margin_of(t, i) {
                if m > bm {
                    bm = m;
                    bt = t;
                    bi = i;
                    moved = true;
                }
            }
        }
        if !moved {
            dt *= 0.5;
            di *= 0.5;
        }
    }

    Ok(SearchOutcome {
        best_setting: FilterSetting {
            theta1: bt,
            gamma: (1.0 / bi).sqrt(),
            ..FilterSetting::new(0.0, 1.0)
        },
        best_margin: bm,
        escaped: bm > 1e-6,
    })
}

/// How far the point violates the system: max over inequalities of
/// (achieved value - bound); positive means outside.
fn violation_margin(facets: &FacetSystem, point: &[f64]) -> f64 {
    -facets.min_slack(point)
}
