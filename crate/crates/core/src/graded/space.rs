use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Scalar, Vector};

/// A finitely supported graded vector space with labelled bases.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    components: BTreeMap<i32, Vec<String>>,
    index: HashMap<String, (i32, usize)>,
    offsets: BTreeMap<i32, usize>,
    total: usize,
}

impl GradedSpace {
    pub fn new<I, L>(components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, Vec<L>)>,
        L: Into<String>,
    {
        let mut comps: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (deg, labels) in components {
            comps
                .entry(deg)
                .or_default()
                .extend(labels.into_iter().map(Into::into));
        }
        comps.retain(|_, v| !v.is_empty());
        let mut index = HashMap::new();
        let mut offsets = BTreeMap::new();
        let mut total = 0;
        for (&deg, labels) in &comps {
            offsets.insert(deg, total);
            for (i, l) in labels.iter().enumerate() {
                if index.insert(l.clone(), (deg, i)).is_some() {
                    return Err(Error::DuplicateLabel(l.clone()));
                }
            }
            total += labels.len();
        }
        Ok(GradedSpace {
            components: comps,
            index,
            offsets,
            total,
        })
    }

    pub fn empty() -> Self {
        GradedSpace::default()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.components.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.components.keys().next_back().copied()
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.components.get(&degree).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.components.iter().map(|(&k, v)| (k, v.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.components.get(&degree).map_or(&[], |v| v.as_slice())
    }

    pub fn label(&self, degree: i32, i: usize) -> &str {
        &self.components[&degree][i]
    }

    pub fn locate(&self, label: &str) -> Option<(i32, usize)> {
        self.index.get(label).copied()
    }

    pub fn locate_or_err(&self, label: &str) -> Result<(i32, usize)> {
        self.locate(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn offset(&self, degree: i32) -> usize {
        self.offsets.get(&degree).copied().unwrap_or(self.total)
    }

    pub fn global(&self, degree: i32, i: usize) -> usize {
        self.offsets[&degree] + i
    }

    /// Inverse of [`global`](Self::global).
    pub fn from_global(&self, g: usize) -> (i32, usize) {
        let (&deg, &off) = self
            .offsets
            .range(..)
            .rev()
            .find(|(_, &off)| off <= g)
            .expect("global index in range");
        (deg, g - off)
    }

    pub fn global_label(&self, g: usize) -> &str {
        let (d, i) = self.from_global(g);
        self.label(d, i)
    }

    pub fn degree_of_global(&self, g: usize) -> i32 {
        self.from_global(g).0
    }

    pub fn witness(&self, degree: i32, v: &[Scalar]) -> Witness {
        Witness {
            degree,
            coefficients: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.label(degree, i).to_string(), c.clone()))
                .collect(),
        }
    }

    pub fn basis_vector(&self, degree: i32, i: usize) -> Vector {
        crate::linalg::unit_vector(self.dim(degree), i)
    }
}

/// A vector in the model's labelled basis, used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub degree: i32,
    pub coefficients: Vec<(String, Scalar)>,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0 (degree {})", self.degree);
        }
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .map(|(l, c)| format!("({c})*{l}"))
            .collect();
        write!(f, "{} (degree {})", terms.join(" + "), self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing() {
        let s = GradedSpace::new([(1, vec!["b", "c"]), (0, vec!["a"]), (2, vec![])]).unwrap();
        assert_eq!(s.total_dim(), 3);
        assert_eq!(s.degrees().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(s.locate("c"), Some((1, 1)));
        assert_eq!(s.global(1, 1), 2);
        assert_eq!(s.from_global(2), (1, 1));
        assert_eq!(s.from_global(0), (0, 0));
        assert_eq!(s.dim(7), 0);
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(GradedSpace::new([(0, vec!["a"]), (1, vec!["a"])]).is_err());
    }
}
