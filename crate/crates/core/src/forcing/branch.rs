use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

/// A map `[2n] → [2n]`, stored as its table of 1-based values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchMap(SmallVec<[u8; 8]>);

impl BranchMap {
    /// Table `values[i-1] = φ(i)`. Range checks are left to validation so
    /// that malformed maps can be represented and reported.
    pub fn new(values: impl IntoIterator<Item = usize>) -> Self {
        BranchMap(
            values
                .into_iter()
                .map(|v| u8::try_from(v).expect("branch value exceeds 255"))
                .collect(),
        )
    }

    pub fn constant(value: usize, branches: usize) -> Self {
        BranchMap::new(std::iter::repeat(value).take(branches))
    }

    pub fn identity(branches: usize) -> Self {
        BranchMap::new(1..=branches)
    }

    /// Size of the domain.
    pub fn branches(&self) -> usize {
        self.0.len()
    }

    /// φ(i) for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1] as usize
    }

    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize)
    }

    /// Domain is `[branches]` and every value lies in `[branches]`.
    pub fn is_total_on(&self, branches: usize) -> bool {
        self.branches() == branches && self.values().all(|v| (1..=branches).contains(&v))
    }

    pub fn constant_value(&self) -> Option<usize> {
        let first = *self.0.first()?;
        self.0.iter().all(|&v| v == first).then_some(first as usize)
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn preimage(&self, j: usize) -> Vec<usize> {
        (1..=self.branches()).filter(|&i| self.apply(i) == j).collect()
    }

    /// Every fibre `φ⁻¹(j)` has as many odd as even members.
    pub fn is_parity_balanced(&self) -> bool {
        let mut excess = vec![0i32; self.branches() + 1];
        for (i, v) in self.values().enumerate() {
            let Some(slot) = excess.get_mut(v) else {
                return false;
            };
            // position i holds φ(i+1); i+1 odd iff i even
            *slot += if i % 2 == 0 { 1 } else { -1 };
        }
        excess.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for BranchMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.values().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for BranchMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BranchMap {
    type Err = String;

    /// Parses `1,1,3,3` (parentheses optional).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values = inner
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("bad branch value {v:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.iter().any(|&v| v > 255) {
            return Err(format!("branch value out of range in {s:?}"));
        }
        Ok(BranchMap::new(values))
    }
}
