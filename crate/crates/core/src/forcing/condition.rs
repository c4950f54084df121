use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::model::{BitString, Space};

use super::branch::BranchMap;

/// A value `f_ξ(s) = (φ, η)`: on `V_s` the ξ-sets follow the η-sets through
/// φ, or, when `source == ξ`, all of `V_s` lies in `A_{ξ, φ(1)}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Assignment {
    pub map: BranchMap,
    pub source: usize,
}

impl Assignment {
    pub fn new(map: BranchMap, source: usize) -> Self {
        Assignment { map, source }
    }

    /// `(constant value, owner)`.
    pub fn constant(value: usize, branches: usize, owner: usize) -> Self {
        Assignment {
            map: BranchMap::constant(value, branches),
            source: owner,
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.map, self.source)
    }
}

/// The function `f_ξ` of a condition, tabulated over all strings of the
/// condition's depth. The entry at `x_ξ|depth` is absent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AssignmentTable {
    depth: usize,
    entries: Vec<Option<Assignment>>,
}

impl AssignmentTable {
    pub fn empty(depth: usize) -> Self {
        AssignmentTable {
            depth,
            entries: vec![None; 1 << depth],
        }
    }

    /// Tabulates `value(s)` for every `s` of length `depth` except `hole`.
    pub fn from_fn(
        depth: usize,
        hole: BitString,
        mut value: impl FnMut(BitString) -> Assignment,
    ) -> Self {
        let entries = BitString::all_of_len(depth)
            .map(|s| (s != hole).then(|| value(s)))
            .collect();
        AssignmentTable { depth, entries }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn get(&self, s: BitString) -> Option<&Assignment> {
        if s.len() != self.depth {
            return None;
        }
        self.entries.get(s.value() as usize)?.as_ref()
    }

    pub fn set(&mut self, s: BitString, value: Option<Assignment>) {
        assert_eq!(s.len(), self.depth);
        self.entries[s.value() as usize] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (BitString, Option<&Assignment>)> {
        let depth = self.depth;
        self.entries
            .iter()
            .enumerate()
            .map(move |(v, e)| (BitString::new(v as u64, depth).unwrap(), e.as_ref()))
    }
}

/// A forcing condition `(F_p, n_p, (f_ξ)_{ξ ∈ F_p})`.
///
/// Conditions are plain values: construction never validates, so that
/// malformed conditions can be represented and reported by [`validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Condition {
    depth: usize,
    tables: BTreeMap<usize, Arc<AssignmentTable>>,
}

impl Condition {
    /// `(∅, 0, ())`, the weakest condition.
    pub fn trivial() -> Self {
        Condition {
            depth: 0,
            tables: BTreeMap::new(),
        }
    }

    pub fn from_tables(depth: usize, tables: BTreeMap<usize, AssignmentTable>) -> Self {
        Condition {
            depth,
            tables: tables.into_iter().map(|(k, t)| (k, Arc::new(t))).collect(),
        }
    }

    pub(crate) fn from_shared(depth: usize, tables: BTreeMap<usize, Arc<AssignmentTable>>) -> Self {
        Condition { depth, tables }
    }

    pub(crate) fn shared_tables(&self) -> &BTreeMap<usize, Arc<AssignmentTable>> {
        &self.tables
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `F_p` in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.tables.keys().copied()
    }

    pub fn index_count(&self) -> usize {
        self.tables.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.tables.contains_key(&index)
    }

    pub fn table(&self, index: usize) -> Option<&AssignmentTable> {
        self.tables.get(&index).map(|t| t.as_ref())
    }

    /// `f_ξ(s)`; `None` when ξ ∉ F, `|s| ≠ depth`, or `s = x_ξ|depth`.
    pub fn value(&self, index: usize, s: BitString) -> Option<&Assignment> {
        self.tables.get(&index)?.get(s)
    }

    /// Same condition with `f_ξ(s)` replaced. Used to build perturbed
    /// conditions for checks.
    pub fn with_value(&self, index: usize, s: BitString, value: Option<Assignment>) -> Self {
        let mut out = self.clone();
        let table = out
            .tables
            .get_mut(&index)
            .expect("index not in condition");
        Arc::make_mut(table).set(s, value);
        out
    }

    /// Restriction to the indices in `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Self {
        Condition {
            depth: self.depth,
            tables: self
                .tables
                .iter()
                .filter(|(k, _)| keep(**k))
                .map(|(k, t)| (*k, Arc::clone(t)))
                .collect(),
        }
    }

    /// Whether `F = {0, …, Λ-1}` and `depth = M`.
    pub fn is_complete(&self, space: &Space) -> bool {
        self.depth == space.resolution()
            && self.tables.len() == space.index_count()
            && self.tables.keys().copied().eq(0..space.index_count())
    }
}

/// One failed clause of the definition of a condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Clause 1: indices are split indices of the space.
    IndexOutOfRange { index: usize, count: usize },
    /// Clause 2 (resolution): the depth exceeds the model's code length.
    DepthTooLarge { depth: usize, resolution: usize },
    /// Clause 2: `x_ξ|n ≠ x_η|n` for distinct ξ, η in F.
    SharedPrefix {
        first: usize,
        second: usize,
        prefix: BitString,
    },
    /// Clause 3: the table of ξ does not have the condition's depth.
    TableDepth { index: usize, depth: usize },
    /// Clause 3: `f_ξ` is defined at `x_ξ|n`.
    DefinedAtOwnPrefix { index: usize, prefix: BitString },
    /// Clause 3: `f_ξ(s)` is undefined for some `s ≠ x_ξ|n`.
    Undefined { index: usize, s: BitString },
    /// Clause 3: φ is not a map `[2n] → [2n]`.
    MapOutOfRange { index: usize, s: BitString },
    /// Clause 3: η must belong to `F ∩ (ξ+1)`.
    SourceInvalid {
        index: usize,
        s: BitString,
        source: usize,
    },
    /// Clause 3a: η = ξ requires a constant φ.
    NotConstant { index: usize, s: BitString },
    /// Clause 3b: η < ξ requires a parity-balanced φ.
    NotBalanced { index: usize, s: BitString },
}

impl Violation {
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::IndexOutOfRange { .. } => "1",
            Violation::DepthTooLarge { .. } | Violation::SharedPrefix { .. } => "2",
            Violation::TableDepth { .. }
            | Violation::DefinedAtOwnPrefix { .. }
            | Violation::Undefined { .. }
            | Violation::MapOutOfRange { .. }
            | Violation::SourceInvalid { .. } => "3",
            Violation::NotConstant { .. } => "3a",
            Violation::NotBalanced { .. } => "3b",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {}: ", self.clause())?;
        match self {
            Violation::IndexOutOfRange { index, count } => {
                write!(f, "index {index} is not below {count}")
            }
            Violation::DepthTooLarge { depth, resolution } => {
                write!(f, "depth {depth} exceeds resolution {resolution}")
            }
            Violation::SharedPrefix {
                first,
                second,
                prefix,
            } => write!(f, "indices {first} and {second} share the prefix {prefix}"),
            Violation::TableDepth { index, depth } => {
                write!(f, "table of {index} has depth {depth}")
            }
            Violation::DefinedAtOwnPrefix { index, prefix } => {
                write!(f, "f_{index} is defined at its own prefix {prefix}")
            }
            Violation::Undefined { index, s } => write!(f, "f_{index}({s}) is undefined"),
            Violation::MapOutOfRange { index, s } => {
                write!(f, "f_{index}({s}) is not a map on the branches")
            }
            Violation::SourceInvalid { index, s, source } => {
                write!(f, "f_{index}({s}) points at {source}, outside F ∩ ({index}+1)")
            }
            Violation::NotConstant { index, s } => {
                write!(f, "f_{index}({s}) has source {index} but a non-constant map")
            }
            Violation::NotBalanced { index, s } => {
                write!(f, "f_{index}({s}) has an earlier source but an unbalanced map")
            }
        }
    }
}

/// Checks the three numbered clauses (with 3a/3b) of the definition of a
/// condition and returns every violation found.
pub fn validate(c: &Condition, space: &Space) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let branches = space.branches();
    let depth = c.depth();
    for index in c.indices() {
        if index >= space.index_count() {
            out.push(Violation::IndexOutOfRange {
                index,
                count: space.index_count(),
            });
        }
    }
    if depth > space.resolution() {
        out.push(Violation::DepthTooLarge {
            depth,
            resolution: space.resolution(),
        });
    }
    if !out.is_empty() {
        return Err(out);
    }

    let mut prefixes: Vec<(BitString, usize)> = c
        .indices()
        .map(|xi| (space.code(xi).prefix(depth), xi))
        .collect();
    prefixes.sort();
    for w in prefixes.windows(2) {
        if w[0].0 == w[1].0 {
            out.push(Violation::SharedPrefix {
                first: w[0].1,
                second: w[1].1,
                prefix: w[0].0,
            });
        }
    }

    for (&index, table) in c.shared_tables() {
        if table.depth() != depth {
            out.push(Violation::TableDepth {
                index,
                depth: table.depth(),
            });
            continue;
        }
        let own = space.code(index).prefix(depth);
        for (s, entry) in table.iter() {
            let Some(a) = entry else {
                if s != own {
                    out.push(Violation::Undefined { index, s });
                }
                continue;
            };
            if s == own {
                out.push(Violation::DefinedAtOwnPrefix { index, prefix: s });
                continue;
            }
            if !a.map.is_total_on(branches) {
                out.push(Violation::MapOutOfRange { index, s });
                continue;
            }
            if a.source > index || !c.contains(a.source) {
                out.push(Violation::SourceInvalid {
                    index,
                    s,
                    source: a.source,
                });
            } else if a.source == index {
                if !a.map.is_constant() {
                    out.push(Violation::NotConstant { index, s });
                }
            } else if !a.map.is_parity_balanced() {
                out.push(Violation::NotBalanced { index, s });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// `q ≤ p`: q has more indices, at least the depth, and every value of p is
/// inherited by every extension in q of its string.
pub fn extends(q: &Condition, p: &Condition, space: &Space) -> bool {
    if q.depth() < p.depth() || !p.indices().all(|xi| q.contains(xi)) {
        return false;
    }
    let (nq, np) = (q.depth(), p.depth());
    p.indices().all(|xi| {
        let code = space.code(xi);
        let (own_q, own_p) = (code.prefix(nq), code.prefix(np));
        BitString::all_of_len(nq).all(|s| {
            let t = s.prefix(np);
            s == own_q || t == own_p || p.value(xi, t) == q.value(xi, s)
        })
    })
}
