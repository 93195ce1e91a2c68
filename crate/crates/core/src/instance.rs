use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// A multiset of job sizes (criticality levels), kept sorted non-increasing
/// so that `sizes()[0]` is the most critical job.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Instance {
    sizes: Vec<u64>,
}

impl Instance {
    pub fn new(raw_sizes: &[i64]) -> Result<Self> {
        if raw_sizes.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if let Some(&bad) = raw_sizes.iter().find(|&&p| p <= 0) {
            return Err(Error::NonPositiveSize(bad));
        }
        Self::from_sizes(raw_sizes.iter().map(|&p| p as u64).collect())
    }

    pub fn from_sizes(mut sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if sizes.contains(&0) {
            return Err(Error::NonPositiveSize(0));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Largest size, `p_1`.
    pub fn max_size(&self) -> u64 {
        self.sizes[0]
    }

    pub fn total(&self) -> u64 {
        self.sizes.iter().sum()
    }

    pub fn scaled(&self, factor: u64) -> Self {
        assert!(factor > 0);
        Self {
            sizes: self.sizes.iter().map(|p| p * factor).collect(),
        }
    }

    /// `max_{i>=2} p_{ceil(i/2)} / p_i` with 1-based indices; 1 for a single job.
    pub fn binary_tree_ratio(&self) -> Rational {
        let p = &self.sizes;
        (2..=p.len())
            .map(|i| Rational::new(p[i.div_ceil(2) - 1] as i128, p[i - 1] as i128))
            .max()
            .unwrap_or_else(|| int(1))
    }

    /// Lower bound on the optimal makespan: twice the smaller half of the
    /// sizes, plus the median size when `n` is odd.
    pub fn lower_bound(&self) -> u64 {
        let n = self.sizes.len();
        let small_half: u64 = self.sizes[n.div_ceil(2)..].iter().sum();
        let middle = if n % 2 == 1 { self.sizes[n / 2] } else { 0 };
        middle + 2 * small_half
    }
}

/// On-disk form: `{"sizes": [..]}` in any order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub sizes: Vec<i64>,
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(file: InstanceFile) -> Result<Self> {
        Instance::new(&file.sizes)
    }
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        Self {
            sizes: inst.sizes.iter().map(|&p| p as i64).collect(),
        }
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = InstanceFile::deserialize(d)?;
        Instance::try_from(file).map_err(serde::de::Error::custom)
    }
}
