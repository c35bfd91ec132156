//! Storage/bandwidth tradeoff: smallest `α` for given repair bandwidth and
//! smallest `β_C` for given storage, solved exactly on the piecewise-linear
//! capacity.
//!
//! The closed-form candidates `(s, π)` do not depend on `α` or the β values,
//! so the capacity is the minimum of finitely many functions
//! `Σ min(w_i, α)` whose `w_i` are linear in the β values.  A threshold on
//! the capacity is the maximum of the per-candidate thresholds.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::mincut::{profile_unchecked, ClusterOrder};
use crate::optimal::{capacity, closed_form_candidates};
use crate::params::{validate, FileSize, RepairParams, SystemParams};
use crate::rational::{self, int, ratio, Rational};

/// Smallest `α` with `Σ min(w_i, α) ≥ m`, given `Σ w_i ≥ m`.
fn alpha_threshold(mut w: Vec<Rational>, m: Rational) -> Rational {
    w.sort_unstable_by(|a, b| b.cmp(a));
    // On [w_{j+1}, w_j] the cut is j·α + Σ_{i>j} w_i.
    let mut tail = Rational::zero();
    for j in (1..=w.len()).rev() {
        let top = w[j - 1];
        if int(j as i64) * top + tail >= m {
            return (m - tail) / int(j as i64);
        }
        tail += top;
    }
    unreachable!("caller checks Σ w ≥ m")
}

/// Smallest storage per node for which the capacity reaches `M`.
///
/// `rep.alpha` is ignored.  Fails with [`Error::Infeasible`] when even
/// unbounded storage leaves the cut below `M`; the deficit is
/// `M − Σ w_i` for the worst candidate.
pub fn min_alpha(sys: &SystemParams, rep: &RepairParams, m: FileSize) -> Result<Rational, Error> {
    let rep = rep.with_alpha(Rational::zero());
    validate(sys, &rep).into_result()?;
    let m = m.value();
    let profiles: Vec<Vec<Rational>> =
        closed_form_candidates(sys)?.iter().map(|(_, pi)| profile_unchecked(&rep, pi).w).collect();
    let weakest = profiles.iter().map(|w| rational::sum(w.iter().copied())).min().expect("at least one candidate");
    if weakest < m {
        return Err(Error::Infeasible { deficit: m - weakest });
    }
    Ok(profiles.into_iter().map(|w| alpha_threshold(w, m)).max().expect("at least one candidate"))
}

/// Per-position `w_i(β_C) = slope·β_C + offset` under `β_I = ε·β_C`.
fn linear_parts(rep: &RepairParams, epsilon: Rational, pi: &ClusterOrder) -> Vec<(Rational, Rational)> {
    let unit = RepairParams { beta_i: epsilon, beta_c: int(1), beta_s: Rational::zero(), ..*rep };
    let fixed = RepairParams { beta_i: Rational::zero(), beta_c: Rational::zero(), ..*rep };
    let slopes = profile_unchecked(&unit, pi).w;
    let offsets = profile_unchecked(&fixed, pi).w;
    slopes.into_iter().zip(offsets).collect()
}

fn cut_along(parts: &[(Rational, Rational)], alpha: Rational, beta: Rational) -> Rational {
    rational::sum(parts.iter().map(|&(s, c)| rational::min(s * beta + c, alpha)))
}

/// Smallest `β ≥ 0` with `Σ min(s_i β + c_i, α) ≥ m`, or the deficit of the
/// limit `β → ∞`.
fn beta_threshold(parts: &[(Rational, Rational)], alpha: Rational, m: Rational) -> Result<Rational, Rational> {
    let limit = rational::sum(parts.iter().map(|&(s, c)| if s.is_positive() { alpha } else { rational::min(c, alpha) }));
    if limit < m {
        return Err(m - limit);
    }
    let mut breaks: Vec<Rational> = parts
        .iter()
        .filter(|(s, c)| s.is_positive() && *c < alpha)
        .map(|&(s, c)| (alpha - c) / s)
        .collect();
    breaks.push(Rational::zero());
    breaks.sort_unstable();
    breaks.dedup();
    let mut prev = Rational::zero();
    for &b in &breaks {
        if cut_along(parts, alpha, b) >= m {
            if b.is_zero() {
                return Ok(b);
            }
            // Linear on [prev, b]: slope is the sum over positions not yet clipped at prev.
            let slope = rational::sum(
                parts.iter().filter(|&&(s, c)| s.is_positive() && s * prev + c < alpha).map(|&(s, _)| s),
            );
            return Ok(prev + (m - cut_along(parts, alpha, prev)) / slope);
        }
        prev = b;
    }
    unreachable!("the cut reaches its limit at the last breakpoint")
}

/// Smallest `β_C` (with `β_I = ε·β_C`) for which the capacity reaches `M` at
/// storage `α`.  Requires `ε ≥ 1`.
pub fn min_beta_c(
    sys: &SystemParams,
    alpha: Rational,
    d_c: usize,
    epsilon: Rational,
    beta_s: Rational,
    m: FileSize,
) -> Result<Rational, Error> {
    if epsilon < int(1) {
        return Err(Error::InvalidParams(crate::params::ValidationReport {
            violations: vec![crate::params::Violation::new(
                "beta_I ≥ beta_C",
                format!("ε = {} < 1", rational::to_fraction_string(&epsilon)),
            )],
        }));
    }
    let rep = RepairParams {
        alpha,
        d_i: sys.cluster_size.saturating_sub(1),
        beta_i: epsilon,
        d_c,
        beta_c: int(1),
        beta_s,
    };
    validate(sys, &rep).into_result()?;
    let m = m.value();
    let mut best = Rational::zero();
    let mut deficit: Option<Rational> = None;
    for (_, pi) in closed_form_candidates(sys)? {
        match beta_threshold(&linear_parts(&rep, epsilon, &pi), alpha, m) {
            Ok(b) => best = best.max(b),
            Err(d) => deficit = Some(deficit.map_or(d, |x: Rational| x.max(d))),
        }
    }
    match deficit {
        Some(deficit) => Err(Error::Infeasible { deficit }),
        None => Ok(best),
    }
}

/// One point of a tradeoff curve.  Infeasible points carry `alpha = None`
/// and the capacity deficit at unbounded storage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    #[serde(with = "rational::as_num_den")]
    pub beta_c: Rational,
    #[serde(with = "rational::as_num_den")]
    pub beta_i: Rational,
    #[serde(with = "rational::opt_as_num_den")]
    pub alpha: Option<Rational>,
    /// `γ_I + γ_C = d_I·β_I + d_C·β_C`.
    #[serde(with = "rational::as_num_den")]
    pub gamma: Rational,
    #[serde(with = "rational::opt_as_num_den")]
    pub capacity: Option<Rational>,
    #[serde(with = "rational::opt_as_num_den")]
    pub deficit: Option<Rational>,
}

/// Minimum storage for every `β_C` in `sweep`, with `β_I = ε·β_C`.
pub fn tradeoff_curve(
    sys: &SystemParams,
    epsilon: Rational,
    d_c: usize,
    beta_s: Rational,
    m: FileSize,
    sweep: &[Rational],
) -> Result<Vec<TradeoffPoint>, Error> {
    let base = RepairParams {
        alpha: Rational::zero(),
        d_i: sys.cluster_size.saturating_sub(1),
        beta_i: Rational::zero(),
        d_c,
        beta_c: Rational::zero(),
        beta_s,
    };
    sweep
        .iter()
        .map(|&beta_c| {
            let rep = base.with_betas(epsilon * beta_c, beta_c, beta_s);
            let gamma = rep.gamma_i() + rep.gamma_c();
            match min_alpha(sys, &rep, m) {
                Ok(alpha) => {
                    let cap = capacity(sys, &rep.with_alpha(alpha))?.capacity;
                    Ok(TradeoffPoint {
                        beta_c,
                        beta_i: rep.beta_i,
                        alpha: Some(alpha),
                        gamma,
                        capacity: Some(cap),
                        deficit: None,
                    })
                }
                Err(Error::Infeasible { deficit }) => Ok(TradeoffPoint {
                    beta_c,
                    beta_i: rep.beta_i,
                    alpha: None,
                    gamma,
                    capacity: None,
                    deficit: Some(deficit),
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// A named system configuration with its sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub sys: SystemParams,
    pub epsilon: Rational,
    /// Helper counts drawn as separate curves; the last is the default.
    pub d_c_values: Vec<usize>,
    pub file_size: Rational,
    pub sweep: Vec<Rational>,
}

impl Preset {
    pub fn default_d_c(&self) -> usize {
        *self.d_c_values.last().expect("preset has a helper count")
    }
}

/// `(12, 8, 3, 4, 0)`, `β_I = 2β_C`, `M = 32`, curves for `d_C = 6, 7, 8`.
pub fn fig5() -> Preset {
    Preset {
        name: "fig5",
        sys: SystemParams::new(12, 8, 3, 4, 0),
        epsilon: int(2),
        d_c_values: vec![6, 7, 8],
        file_size: int(32),
        sweep: (3..=24).map(|t| ratio(t, 4)).collect(),
    }
}

/// `(6, 4, 2, 3, 0)`, `d_C = 3`, `β_I = 2β_C`, `M = 8`.
pub fn fig6() -> Preset {
    Preset {
        name: "fig6",
        sys: SystemParams::new(6, 4, 2, 3, 0),
        epsilon: int(2),
        d_c_values: vec![3],
        file_size: int(8),
        sweep: (4..=24).map(|t| ratio(t, 8)).collect(),
    }
}

pub fn preset(name: &str) -> Option<Preset> {
    match name {
        "fig5" => Some(fig5()),
        "fig6" => Some(fig6()),
        _ => None,
    }
}
