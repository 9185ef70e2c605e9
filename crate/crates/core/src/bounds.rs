//! Numeric upper and lower bounds on the minimum size of a saturated
//! k-Sperner system. Everything that can overflow is kept in log2 space.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::constructions::CompositionPlan;
use crate::erf::{erf, erfc};
use crate::error::BoundsError;

/// Exponent improvement of the size-30 based upper bound.
pub fn eps_mns() -> f64 {
    1.0 - 15f64.log2() / 4.0
}

/// Exponent improvement of the 56-member based upper bound.
pub fn eps_new() -> f64 {
    1.0 - 28f64.log2() / 5.0
}

/// Counting lower bound `k/2 - 0.5`, in log2.
pub fn baseline_lower_log2(k: u32) -> f64 {
    k as f64 / 2.0 - 0.5
}

pub fn claimed_lower_log2(k: u32) -> f64 {
    k as f64 / 2.0 + (k as f64).log2() / 2.0
}

pub fn claimed_lower_log2_166(k: u32) -> f64 {
    claimed_lower_log2(k) - 1.66
}

fn check_k(k: u32) -> Result<(), BoundsError> {
    if k < 7 {
        return Err(BoundsError::KOutOfRange { k, min: 7 });
    }
    Ok(())
}

fn layer_exponent(i: u32, k: u32) -> f64 {
    2.0 * (i as f64) * ((k - i - 1) as f64) / ((k - 1) as f64)
}

/// log2 of the minimum size of layer `i` of a minimal saturated k-Sperner system.
pub fn layer_lower_bound_log2(i: u32, k: u32) -> Result<f64, BoundsError> {
    check_k(k)?;
    let max = (k - 1) / 2;
    if !(2..=max).contains(&i) {
        return Err(BoundsError::LayerOutOfRange { i, k, max });
    }
    Ok(layer_exponent(i, k))
}

/// `2^(2i(k-i-1)/(k-1))`.
pub fn layer_lower_bound(i: u32, k: u32) -> Result<f64, BoundsError> {
    layer_lower_bound_log2(i, k).map(f64::exp2)
}

/// log2 of each summand of the layer-sum bound, in order.
fn sum_terms_log2(k: u32) -> Vec<f64> {
    let mut terms = vec![1.0, ((k - 1) as f64).log2() + 1.0];
    // Terms i = 2 ..= ceil((k-1)/2) - 1, each counted twice.
    let hi = (k - 1).div_ceil(2) - 1;
    for i in 2..=hi {
        terms.push(layer_exponent(i, k) + 1.0);
    }
    if k % 2 == 1 {
        terms.push((k - 1) as f64 / 2.0);
    }
    terms
}

/// `2 + 2(k-1) + 2 Σ_{i=2}^{⌈(k-1)/2⌉-1} 2^{2i(k-i-1)/(k-1)} + 2^{(k-1)/2}[k odd]`.
pub fn sum_lower_bound(k: u32) -> Result<f64, BoundsError> {
    check_k(k)?;
    Ok(sum_terms_log2(k).into_iter().map(f64::exp2).sum())
}

/// [`sum_lower_bound`] in log2, stable for any k.
pub fn sum_lower_bound_log2(k: u32) -> Result<f64, BoundsError> {
    check_k(k)?;
    let terms = sum_terms_log2(k);
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rest: f64 = terms.iter().map(|t| (t - top).exp2()).sum();
    Ok(top + rest.log2())
}

/// `erf(sqrt((k-3)^2 ln2 / (2(k-1)))) - erf(sqrt(2 ln2 / (k-1)))`.
pub fn erf_difference(k: u32) -> f64 {
    let kf = k as f64;
    let a = ((kf - 3.0).powi(2) * LN_2 / (2.0 * (kf - 1.0))).sqrt();
    let b = (2.0 * LN_2 / (kf - 1.0)).sqrt();
    (1.0 - erfc(a)) - erf(b)
}

/// `sqrt(pi (k-1) / (4 k ln2)) * erf_difference(k)`; the closed-form bound
/// divided by `sqrt(k) 2^(k/2)`.
pub fn bracket_factor(k: u32) -> f64 {
    let kf = k as f64;
    (PI * (kf - 1.0) / (4.0 * kf * LN_2)).sqrt() * erf_difference(k)
}

/// log2 of the closed-form lower bound
/// `2^{k/2} sqrt(k) sqrt(pi(k-1)/(4k ln2)) (erf(..) - erf(..))`.
pub fn erf_lower_bound_log2(k: u32) -> Result<f64, BoundsError> {
    check_k(k)?;
    let kf = k as f64;
    let diff = erf_difference(k);
    if diff <= 0.0 {
        return Err(BoundsError::NonPositiveErfDifference(k));
    }
    Ok(kf / 2.0
        + kf.sqrt().log2()
        + 0.5 * (PI * (kf - 1.0) / (4.0 * kf * LN_2)).log2()
        + diff.log2())
}

/// `erf_lower_bound_log2(k) - (k/2 + log2(k)/2)`.
pub fn threshold_margin(k: u32) -> Result<f64, BoundsError> {
    Ok(erf_lower_bound_log2(k)? - claimed_lower_log2(k))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub k_max: u32,
    /// Least k such that the bound holds for every k' in `[k, k_max]`.
    pub threshold: Option<u32>,
    /// `(k, log2 margin, bracket factor - 1)` for every k in `[7, k_max]`.
    pub margins: Vec<(u32, f64, f64)>,
}

impl ThresholdReport {
    pub fn margin_at(&self, k: u32) -> Option<f64> {
        self.margins.iter().find(|m| m.0 == k).map(|m| m.1)
    }
}

pub fn find_threshold(k_max: u32) -> Result<ThresholdReport, BoundsError> {
    check_k(k_max)?;
    let margins: Vec<(u32, f64, f64)> = (7..=k_max)
        .map(|k| Ok((k, threshold_margin(k)?, bracket_factor(k) - 1.0)))
        .collect::<Result<_, BoundsError>>()?;
    let mut threshold = None;
    for &(k, margin, _) in margins.iter().rev() {
        if margin < 0.0 {
            break;
        }
        threshold = Some(k);
    }
    Ok(ThresholdReport {
        k_max,
        threshold,
        margins,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperBound {
    pub k: u32,
    pub j: u32,
    pub s: u32,
    /// `2^(s+1) 28^j` when it fits in 128 bits.
    pub size: Option<u128>,
    pub upper_log2: f64,
    pub eps_new: f64,
    pub eps_mns: f64,
    /// `(1 - eps_new) k - upper_log2`; meaningful for k >= 7.
    pub exponent_margin: f64,
}

pub fn upper_bound_report(k: u32) -> Result<UpperBound, BoundsError> {
    let plan = CompositionPlan::new(k).map_err(|_| BoundsError::KOutOfRange { k, min: 2 })?;
    let size = 28u128
        .checked_pow(plan.j)
        .and_then(|p| p.checked_mul(1u128 << (plan.s + 1)));
    let upper_log2 = plan.log2_size();
    Ok(UpperBound {
        k,
        j: plan.j,
        s: plan.s,
        size,
        upper_log2,
        eps_new: eps_new(),
        eps_mns: eps_mns(),
        exponent_margin: (1.0 - eps_new()) * k as f64 - upper_log2,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerBound {
    pub i: u32,
    pub log2: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Margins {
    /// `erf_lower_log2 - claimed_lower_log2_166`.
    pub erf_vs_claimed_166: f64,
    /// `erf_lower_log2 - claimed_lower_log2`; positive from the threshold on.
    pub erf_vs_claimed: f64,
    /// `upper_log2 - sum_lower_log2`; the two bounds must not cross.
    pub upper_vs_sum: f64,
    pub bracket_factor_minus_one: f64,
}

/// Every bound for one k. Lower-bound fields are absent below k = 7.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub k: u32,
    pub baseline_lower_log2: f64,
    pub layer_bounds: Vec<LayerBound>,
    pub sum_lower: Option<f64>,
    pub sum_lower_log2: Option<f64>,
    pub erf_lower_log2: Option<f64>,
    pub claimed_lower_log2_166: f64,
    pub claimed_lower_log2: f64,
    pub upper: UpperBound,
    pub upper_log2: f64,
    pub eps_mns: f64,
    pub eps_new: f64,
    pub margins: Option<Margins>,
}

pub fn bound_report(k: u32) -> Result<BoundReport, BoundsError> {
    let upper = upper_bound_report(k)?;
    let mut report = BoundReport {
        k,
        baseline_lower_log2: baseline_lower_log2(k),
        layer_bounds: Vec::new(),
        sum_lower: None,
        sum_lower_log2: None,
        erf_lower_log2: None,
        claimed_lower_log2_166: claimed_lower_log2_166(k),
        claimed_lower_log2: claimed_lower_log2(k),
        upper_log2: upper.upper_log2,
        upper,
        eps_mns: eps_mns(),
        eps_new: eps_new(),
        margins: None,
    };
    if k >= 7 {
        report.layer_bounds = (2..=(k - 1) / 2)
            .map(|i| {
                let log2 = layer_exponent(i, k);
                LayerBound {
                    i,
                    log2,
                    value: log2.exp2(),
                }
            })
            .collect();
        let sum = sum_lower_bound(k)?;
        let sum_log2 = sum_lower_bound_log2(k)?;
        let erf_log2 = erf_lower_bound_log2(k)?;
        report.sum_lower = sum.is_finite().then_some(sum);
        report.sum_lower_log2 = Some(sum_log2);
        report.erf_lower_log2 = Some(erf_log2);
        report.margins = Some(Margins {
            erf_vs_claimed_166: erf_log2 - report.claimed_lower_log2_166,
            erf_vs_claimed: erf_log2 - report.claimed_lower_log2,
            upper_vs_sum: report.upper_log2 - sum_log2,
            bracket_factor_minus_one: bracket_factor(k) - 1.0,
        });
    }
    Ok(report)
}
