//! Three-way contingency tensors, their probability models and the Shannon
//! entropies / mutual information derived from them. All entropies are in
//! bits.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sum-to-one tolerance accepted by [`entropy`].
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// One of the three categorical dimensions of a tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Geo,
    Org,
    Tech,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Geo, Axis::Org, Axis::Tech];

    pub fn index(self) -> usize {
        match self {
            Axis::Geo => 0,
            Axis::Org => 1,
            Axis::Tech => 2,
        }
    }

    pub fn from_index(index: usize) -> Option<Axis> {
        Axis::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Geo => "geo",
            Axis::Org => "org",
            Axis::Tech => "tech",
        }
    }

    /// The two remaining axes, in ascending order.
    pub fn others(self) -> (Axis, Axis) {
        match self {
            Axis::Geo => (Axis::Org, Axis::Tech),
            Axis::Org => (Axis::Geo, Axis::Tech),
            Axis::Tech => (Axis::Geo, Axis::Org),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "geo" | "g" | "geography" => Ok(Axis::Geo),
            "org" | "o" | "organization" => Ok(Axis::Org),
            "tech" | "t" | "technology" => Ok(Axis::Tech),
            other => Err(Error::InvalidAxes(format!("unknown axis {other:?}"))),
        }
    }
}

/// Non-negative integer counts over three labeled categorical axes, stored
/// densely in row-major (geo, org, tech) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTensor {
    labels: [Vec<String>; 3],
    shape: [usize; 3],
    counts: Vec<u64>,
    total: u64,
}

impl ContingencyTensor {
    pub fn new(labels: [Vec<String>; 3], counts: Vec<u64>) -> Result<Self> {
        for (axis, names) in Axis::ALL.iter().zip(labels.iter()) {
            if names.is_empty() {
                return Err(Error::InvalidTensor(format!("{axis} axis has no categories")));
            }
            let mut seen = HashSet::with_capacity(names.len());
            for name in names {
                if !seen.insert(name.as_str()) {
                    return Err(Error::InvalidTensor(format!(
                        "duplicate {axis} label {name:?}"
                    )));
                }
            }
        }
        let shape = [labels[0].len(), labels[1].len(), labels[2].len()];
        let cells = shape.iter().product::<usize>();
        if counts.len() != cells {
            return Err(Error::ShapeMismatch(format!(
                "{} counts for a {}x{}x{} tensor",
                counts.len(),
                shape[0],
                shape[1],
                shape[2]
            )));
        }
        let total = counts.iter().sum();
        Ok(ContingencyTensor {
            labels,
            shape,
            counts,
            total,
        })
    }

    /// Tensor with generated labels `"0"`, `"1"`, ... on every axis.
    pub fn from_counts(shape: [usize; 3], counts: Vec<u64>) -> Result<Self> {
        let labels = shape.map(|n| (0..n).map(|i| i.to_string()).collect());
        Self::new(labels, counts)
    }

    pub fn zeros(labels: [Vec<String>; 3]) -> Result<Self> {
        let cells = labels.iter().map(Vec::len).product();
        Self::new(labels, vec![0; cells])
    }

    pub fn labels(&self, axis: Axis) -> &[String] {
        &self.labels[axis.index()]
    }

    pub fn all_labels(&self) -> &[Vec<String>; 3] {
        &self.labels
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// N, the sum over all cells.
    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.shape[1] + j) * self.shape[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.counts[self.offset(i, j, k)]
    }

    pub fn add(&mut self, i: usize, j: usize, k: usize, count: u64) {
        let at = self.offset(i, j, k);
        self.counts[at] += count;
        self.total += count;
    }

    /// Count marginal along one axis.
    pub fn marginal_counts(&self, axis: Axis) -> Vec<u64> {
        let mut out = vec![0u64; self.shape[axis.index()]];
        for i in 0..self.shape[0] {
            for j in 0..self.shape[1] {
                for k in 0..self.shape[2] {
                    let idx = [i, j, k][axis.index()];
                    out[idx] += self.get(i, j, k);
                }
            }
        }
        out
    }

    /// Reorders the axes: axis `d` of the result is axis `order[d]` of `self`.
    pub fn permute_axes(&self, order: [Axis; 3]) -> Result<Self> {
        let idx = order.map(Axis::index);
        let mut seen = [false; 3];
        for &d in &idx {
            if seen[d] {
                return Err(Error::InvalidAxes(format!("{order:?} is not a permutation")));
            }
            seen[d] = true;
        }
        let labels = idx.map(|d| self.labels[d].clone());
        let shape = idx.map(|d| self.shape[d]);
        let mut counts = vec![0u64; self.counts.len()];
        for i in 0..self.shape[0] {
            for j in 0..self.shape[1] {
                for k in 0..self.shape[2] {
                    let src = [i, j, k];
                    let dst = idx.map(|d| src[d]);
                    counts[(dst[0] * shape[1] + dst[1]) * shape[2] + dst[2]] = self.get(i, j, k);
                }
            }
        }
        Self::new(labels, counts)
    }

    /// Merges categories on `axis`: old category `c` is summed into new
    /// category `assign[c]`, with `new_labels` naming the targets.
    pub fn regroup(&self, axis: Axis, new_labels: Vec<String>, assign: &[usize]) -> Result<Self> {
        let a = axis.index();
        if assign.len() != self.shape[a] {
            return Err(Error::ShapeMismatch(format!(
                "{} assignments for {} {axis} categories",
                assign.len(),
                self.shape[a]
            )));
        }
        if let Some(bad) = assign.iter().find(|&&t| t >= new_labels.len()) {
            return Err(Error::ShapeMismatch(format!("target index {bad} out of range")));
        }
        let mut labels = self.labels.clone();
        labels[a] = new_labels;
        let mut out = Self::zeros(labels)?;
        for i in 0..self.shape[0] {
            for j in 0..self.shape[1] {
                for k in 0..self.shape[2] {
                    let mut at = [i, j, k];
                    at[a] = assign[at[a]];
                    out.add(at[0], at[1], at[2], self.get(i, j, k));
                }
            }
        }
        Ok(out)
    }

    pub fn probabilities(&self) -> Result<ProbabilityModel> {
        probabilities(self)
    }
}

/// Joint distribution p_ijk over a three-way table. Marginals are derived on
/// demand from the joint.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityModel {
    shape: [usize; 3],
    joint: Vec<f64>,
}

impl ProbabilityModel {
    /// Wraps an explicit joint distribution (row-major), validating it.
    pub fn from_joint(shape: [usize; 3], joint: Vec<f64>) -> Result<Self> {
        if shape.contains(&0) {
            return Err(Error::InvalidTensor("zero-length axis".into()));
        }
        if joint.len() != shape.iter().product::<usize>() {
            return Err(Error::ShapeMismatch(format!(
                "{} probabilities for shape {shape:?}",
                joint.len()
            )));
        }
        check_distribution(&joint)?;
        Ok(ProbabilityModel { shape, joint })
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn joint(&self) -> &[f64] {
        &self.joint
    }

    pub fn p(&self, i: usize, j: usize, k: usize) -> f64 {
        self.joint[(i * self.shape[1] + j) * self.shape[2] + k]
    }

    pub fn marginal(&self, axis: Axis) -> Vec<f64> {
        let mut out = vec![0.0; self.shape[axis.index()]];
        self.for_each(|at, p| out[at[axis.index()]] += p);
        out
    }

    /// Pairwise marginal over `(a, b)`, row-major with `a` as the row index.
    pub fn pairwise(&self, a: Axis, b: Axis) -> Result<Vec<f64>> {
        if a == b {
            return Err(Error::InvalidAxes(format!("axis {a} given twice")));
        }
        let (ai, bi) = (a.index(), b.index());
        let cols = self.shape[bi];
        let mut out = vec![0.0; self.shape[ai] * cols];
        self.for_each(|at, p| out[at[ai] * cols + at[bi]] += p);
        Ok(out)
    }

    fn for_each(&self, mut f: impl FnMut([usize; 3], f64)) {
        let [n0, n1, n2] = self.shape;
        let mut it = self.joint.iter();
        for i in 0..n0 {
            for j in 0..n1 {
                for k in 0..n2 {
                    f([i, j, k], *it.next().unwrap());
                }
            }
        }
    }

    pub fn entropy_set(&self) -> EntropySet {
        entropy_set(self)
    }
}

/// Converts counts to probabilities, p_ijk = n_ijk / N.
pub fn probabilities(tensor: &ContingencyTensor) -> Result<ProbabilityModel> {
    if tensor.total == 0 {
        return Err(Error::EmptyData("tensor has no counts".into()));
    }
    let n = tensor.total as f64;
    Ok(ProbabilityModel {
        shape: tensor.shape,
        joint: tensor.counts.iter().map(|&c| c as f64 / n).collect(),
    })
}

fn check_distribution(dist: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (i, &p) in dist.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!("entry {i} = {p}")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("sums to {sum}")));
    }
    Ok(())
}

/// Shannon entropy in bits, with 0·log2(0) = 0.
pub fn entropy(dist: &[f64]) -> Result<f64> {
    check_distribution(dist)?;
    Ok(entropy_unchecked(dist))
}

pub(crate) fn entropy_unchecked(dist: &[f64]) -> f64 {
    let h: f64 = dist.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum();
    // -0.0 for a certain outcome
    h.max(0.0)
}

/// Entropies of the one-, two- and three-dimensional distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropySet {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub h12: f64,
    pub h13: f64,
    pub h23: f64,
    pub h123: f64,
}

impl EntropySet {
    /// Signed three-way mutual information,
    /// H1 + H2 + H3 − H12 − H13 − H23 + H123.
    pub fn synergy(&self) -> f64 {
        self.h1 + self.h2 + self.h3 - self.h12 - self.h13 - self.h23 + self.h123
    }

    pub fn single(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Geo => self.h1,
            Axis::Org => self.h2,
            Axis::Tech => self.h3,
        }
    }

    pub fn pair(&self, a: Axis, b: Axis) -> Result<f64> {
        match (a.min(b), a.max(b)) {
            (Axis::Geo, Axis::Org) => Ok(self.h12),
            (Axis::Geo, Axis::Tech) => Ok(self.h13),
            (Axis::Org, Axis::Tech) => Ok(self.h23),
            _ => Err(Error::InvalidAxes(format!("axis {a} given twice"))),
        }
    }
}

pub fn entropy_set(model: &ProbabilityModel) -> EntropySet {
    let h = |axis| entropy_unchecked(&model.marginal(axis));
    let hp = |a, b| entropy_unchecked(&model.pairwise(a, b).expect("distinct axes"));
    EntropySet {
        h1: h(Axis::Geo),
        h2: h(Axis::Org),
        h3: h(Axis::Tech),
        h12: hp(Axis::Geo, Axis::Org),
        h13: hp(Axis::Geo, Axis::Tech),
        h23: hp(Axis::Org, Axis::Tech),
        h123: entropy_unchecked(&model.joint),
    }
}

/// Two-way mutual information H_a + H_b − H_ab in bits.
pub fn mutual_info_2d(model: &ProbabilityModel, a: Axis, b: Axis) -> Result<f64> {
    let joint = model.pairwise(a, b)?;
    let ha = entropy_unchecked(&model.marginal(a));
    let hb = entropy_unchecked(&model.marginal(b));
    Ok(ha + hb - entropy_unchecked(&joint))
}

/// Signed ternary mutual information T in bits. Negative values mean the
/// three dimensions jointly reduce uncertainty (synergy).
pub fn synergy_3d(model: &ProbabilityModel) -> f64 {
    entropy_set(model).synergy()
}
