//! Additive split of the national synergy into per-group contributions,
//! transmission power, and the K / P average-deviation percentages.
//!
//! Every entropy term of the synergy is a sum over cells of
//! `-p_ijk * log2(m)`, where `m` is the marginal (or joint) probability the
//! term is built from. A group's share of a term is the part of that sum over
//! the group's own cells, so the per-group contributions add up to the total
//! exactly and cross-terms are weighted by each group's joint probability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::PanelSeries;
use crate::tensor::{Axis, ContingencyTensor, EntropySet};

/// |T| at or below this is treated as zero synergy.
pub const ZERO_SYNERGY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub axis: Axis,
    pub group_labels: Vec<String>,
    /// Signed bits per group; sums to `total`.
    pub contributions: Vec<f64>,
    /// Each group's additive share of the seven entropy terms. Shares sum to
    /// the national [`EntropySet`] term by term but need not satisfy
    /// subadditivity on their own.
    pub shares: Vec<EntropySet>,
    /// National synergy T in bits.
    pub total: f64,
}

pub fn decompose(tensor: &ContingencyTensor, axis: Axis) -> Result<DecompositionResult> {
    let model = tensor.probabilities()?;
    let [n0, n1, n2] = model.shape();
    let pg = model.marginal(Axis::Geo);
    let po = model.marginal(Axis::Org);
    let pt = model.marginal(Axis::Tech);
    let pgo = model.pairwise(Axis::Geo, Axis::Org)?;
    let pgt = model.pairwise(Axis::Geo, Axis::Tech)?;
    let pot = model.pairwise(Axis::Org, Axis::Tech)?;

    let groups = tensor.shape()[axis.index()];
    let zero = EntropySet {
        h1: 0.0,
        h2: 0.0,
        h3: 0.0,
        h12: 0.0,
        h13: 0.0,
        h23: 0.0,
        h123: 0.0,
    };
    let mut shares = vec![zero; groups];

    for i in 0..n0 {
        for j in 0..n1 {
            for k in 0..n2 {
                let p = model.p(i, j, k);
                if p == 0.0 {
                    continue;
                }
                let s = &mut shares[[i, j, k][axis.index()]];
                s.h1 -= p * pg[i].log2();
                s.h2 -= p * po[j].log2();
                s.h3 -= p * pt[k].log2();
                s.h12 -= p * pgo[i * n1 + j].log2();
                s.h13 -= p * pgt[i * n2 + k].log2();
                s.h23 -= p * pot[j * n2 + k].log2();
                s.h123 -= p * p.log2();
            }
        }
    }
    Ok(DecompositionResult {
        axis,
        group_labels: tensor.labels(axis).to_vec(),
        contributions: shares.iter().map(EntropySet::synergy).collect(),
        shares,
        total: model.entropy_set().synergy(),
    })
}

/// [`decompose`] applied to every year of a panel.
pub fn decompose_panel(panel: &PanelSeries, axis: Axis) -> Result<Vec<DecompositionResult>> {
    panel.tensors().iter().map(|t| decompose(t, axis)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerBranch {
    #[serde(rename = "negative-T")]
    NegativeT,
    #[serde(rename = "positive-T")]
    PositiveT,
    #[serde(rename = "zero-T")]
    ZeroT,
}

impl PowerBranch {
    pub fn name(self) -> &'static str {
        match self {
            PowerBranch::NegativeT => "negative-T",
            PowerBranch::PositiveT => "positive-T",
            PowerBranch::ZeroT => "zero-T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmissionPower {
    pub tau: f64,
    pub branch: PowerBranch,
}

/// Share of the synergy produced relative to the system size:
/// T / (H123 − H1 − H2 − H3) for T < 0, T / H123 for T > 0, and 0 otherwise.
pub fn transmission_power(entropies: &EntropySet) -> Result<TransmissionPower> {
    let t = entropies.synergy();
    if t.abs() <= ZERO_SYNERGY_TOLERANCE {
        return Ok(TransmissionPower {
            tau: 0.0,
            branch: PowerBranch::ZeroT,
        });
    }
    let (denominator, branch) = if t < 0.0 {
        (
            entropies.h123 - entropies.h1 - entropies.h2 - entropies.h3,
            PowerBranch::NegativeT,
        )
    } else {
        (entropies.h123, PowerBranch::PositiveT)
    };
    if denominator == 0.0 {
        return Err(Error::DegenerateDenominator { synergy: t });
    }
    Ok(TransmissionPower {
        tau: t / denominator,
        branch,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDeviation {
    pub label: String,
    /// Years in which the group had at least one count.
    pub years_used: usize,
    pub tau_avg: f64,
    pub synergy_avg: f64,
    /// Efficiency deviation K, percent.
    pub k_percent: f64,
    /// Synergy deviation P, percent.
    pub p_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub axis: Axis,
    pub groups: Vec<GroupDeviation>,
    /// Mean of the per-group period averages of τ.
    pub tau_mean: f64,
    /// Mean of the per-group period averages of T.
    pub synergy_mean: f64,
}

/// Per-group period averages of transmission power and synergy contribution
/// and their percentage deviation from the cross-group mean. Years in which
/// a group has no counts do not enter its averages; groups with no counts in
/// any year are left out.
pub fn deviations(panel: &PanelSeries, axis: Axis) -> Result<DeviationReport> {
    let labels = panel.labels(axis).to_vec();
    let mut tau_sum = vec![0.0; labels.len()];
    let mut t_sum = vec![0.0; labels.len()];
    let mut used = vec![0usize; labels.len()];

    for tensor in panel.tensors() {
        let present = tensor.marginal_counts(axis);
        let dec = decompose(tensor, axis)?;
        for g in 0..labels.len() {
            if present[g] == 0 {
                continue;
            }
            tau_sum[g] += transmission_power(&dec.shares[g])?.tau;
            t_sum[g] += dec.contributions[g];
            used[g] += 1;
        }
    }

    let mut groups: Vec<GroupDeviation> = labels
        .into_iter()
        .enumerate()
        .filter(|&(g, _)| used[g] > 0)
        .map(|(g, label)| GroupDeviation {
            label,
            years_used: used[g],
            tau_avg: tau_sum[g] / used[g] as f64,
            synergy_avg: t_sum[g] / used[g] as f64,
            k_percent: 0.0,
            p_percent: 0.0,
        })
        .collect();
    if groups.is_empty() {
        return Err(Error::EmptyData("no group has counts in any year".into()));
    }

    let taus: Vec<f64> = groups.iter().map(|g| g.tau_avg).collect();
    let syns: Vec<f64> = groups.iter().map(|g| g.synergy_avg).collect();
    let (tau_mean, k) = percent_deviations(&taus, "transmission power")?;
    let (synergy_mean, p) = percent_deviations(&syns, "synergy")?;
    for ((g, k), p) in groups.iter_mut().zip(k).zip(p) {
        g.k_percent = k;
        g.p_percent = p;
    }
    Ok(DeviationReport {
        axis,
        groups,
        tau_mean,
        synergy_mean,
    })
}

/// Arithmetic mean of `values` and each value's deviation from it in percent.
pub fn percent_deviations(values: &[f64], quantity: &'static str) -> Result<(f64, Vec<f64>)> {
    if values.is_empty() {
        return Err(Error::EmptyData(format!("no {quantity} values")));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if mean.abs() <= ZERO_SYNERGY_TOLERANCE {
        return Err(Error::ZeroMeanBaseline(quantity));
    }
    Ok((mean, values.iter().map(|v| (v - mean) / mean * 100.0).collect()))
}
