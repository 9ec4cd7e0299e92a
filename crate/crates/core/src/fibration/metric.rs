//! Extended pseudometrics on finite carriers with exact rational values.

use crate::finset::FinSet;
use crate::util::rational::ExtQ;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("nonzero distance on the diagonal at `{0}`")]
    NonzeroDiagonal(String),
    #[error("asymmetric distance between `{0}` and `{1}`")]
    Asymmetric(String, String),
    #[error("triangle inequality violated via `{0}`: d({1},{2}) > d({1},{0}) + d({0},{2})")]
    Triangle(String, String, String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Metric {
    carrier: FinSet,
    // row-major |X|×|X| matrix
    dist: Vec<ExtQ>,
}

impl Metric {
    pub fn new(carrier: FinSet, dist: Vec<ExtQ>) -> Result<Metric, MetricError> {
        let n = carrier.len();
        assert_eq!(dist.len(), n * n, "distance matrix shape mismatch");
        let m = Metric { carrier, dist };
        for i in 0..n {
            if !m.at(i, i).is_zero() {
                return Err(MetricError::NonzeroDiagonal(m.carrier.atom(i).clone()));
            }
            for j in 0..n {
                if m.at(i, j) != m.at(j, i) {
                    return Err(MetricError::Asymmetric(
                        m.carrier.atom(i).clone(),
                        m.carrier.atom(j).clone(),
                    ));
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = m.at(i, k).clone() + m.at(k, j).clone();
                    if *m.at(i, j) > via {
                        return Err(MetricError::Triangle(
                            m.carrier.atom(k).clone(),
                            m.carrier.atom(i).clone(),
                            m.carrier.atom(j).clone(),
                        ));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn zero(carrier: &FinSet) -> Metric {
        let n = carrier.len();
        Metric {
            carrier: carrier.clone(),
            dist: vec![ExtQ::zero(); n * n],
        }
    }

    /// Everything infinitely far apart except each point from itself.
    pub fn discrete_inf(carrier: &FinSet) -> Metric {
        let n = carrier.len();
        let dist = (0..n * n)
            .map(|k| if k / n == k % n { ExtQ::zero() } else { ExtQ::Inf })
            .collect();
        Metric {
            carrier: carrier.clone(),
            dist,
        }
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn at(&self, i: usize, j: usize) -> &ExtQ {
        &self.dist[i * self.carrier.len() + j]
    }

    /// Inverse image along `images : dom → carrier`: `d ∘ (f × f)`.
    pub fn reindex_along(&self, images: &[usize], dom: &FinSet) -> Metric {
        let n = dom.len();
        let dist = (0..n * n)
            .map(|k| self.at(images[k / n], images[k % n]).clone())
            .collect();
        Metric {
            carrier: dom.clone(),
            dist,
        }
    }

    /// Meet in the fibre: the pointwise supremum (larger pseudometrics sit
    /// lower in the fibre order).
    pub fn meet(&self, other: &Metric) -> Metric {
        assert_eq!(self.carrier, other.carrier, "fibre carrier mismatch");
        let dist = self
            .dist
            .iter()
            .zip(other.dist.iter())
            .map(|(a, b)| a.clone().max(b.clone()))
            .collect();
        Metric {
            carrier: self.carrier.clone(),
            dist,
        }
    }

    /// Fibre order: `self ≤ other` iff `self` is pointwise ≥ `other`.
    pub fn below(&self, other: &Metric) -> bool {
        assert_eq!(self.carrier, other.carrier, "fibre carrier mismatch");
        self.dist.iter().zip(other.dist.iter()).all(|(a, b)| a >= b)
    }

    /// Non-expansiveness of `images : dom_metric.carrier → carrier`.
    pub fn non_expansive_from(&self, dom: &Metric, images: &[usize]) -> bool {
        let n = dom.carrier.len();
        (0..n).all(|i| {
            (0..n).all(|j| dom.at(i, j) >= self.at(images[i], images[j]))
        })
    }
}
