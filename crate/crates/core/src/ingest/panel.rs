use crate::error::{Error, Result};
use crate::tensor::{probabilities, synergy_3d, Axis, ContingencyTensor};

/// Year-indexed sequence of contingency tensors sharing one set of axis
/// labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PanelSeries {
    years: Vec<i32>,
    tensors: Vec<ContingencyTensor>,
}

impl PanelSeries {
    pub fn new(years: Vec<i32>, tensors: Vec<ContingencyTensor>) -> Result<Self> {
        if years.is_empty() {
            return Err(Error::EmptyData("panel has no years".into()));
        }
        if years.len() != tensors.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} years for {} tensors",
                years.len(),
                tensors.len()
            )));
        }
        if let Some(w) = years.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::PanelInconsistent(format!(
                "years not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        let first = tensors[0].all_labels();
        for (year, t) in years.iter().zip(&tensors).skip(1) {
            for axis in Axis::ALL {
                if t.labels(axis) != first[axis.index()].as_slice() {
                    return Err(Error::PanelInconsistent(format!(
                        "{axis} labels of {year} differ from {}",
                        years[0]
                    )));
                }
            }
        }
        Ok(PanelSeries { years, tensors })
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn tensors(&self) -> &[ContingencyTensor] {
        &self.tensors
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn start_year(&self) -> i32 {
        self.years[0]
    }

    pub fn labels(&self, axis: Axis) -> &[String] {
        self.tensors[0].labels(axis)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &ContingencyTensor)> {
        self.years.iter().copied().zip(&self.tensors)
    }

    /// National synergy T per year, in bits.
    pub fn synergy_series(&self) -> Result<Vec<f64>> {
        self.tensors
            .iter()
            .map(|t| probabilities(t).map(|p| synergy_3d(&p)))
            .collect()
    }
}
