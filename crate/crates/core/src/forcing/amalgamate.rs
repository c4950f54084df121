use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{BitString, Space};

use super::branch::BranchMap;
use super::condition::{validate, Assignment, AssignmentTable, Condition, Violation};
use super::density::{isomorphic, OrderBijection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamationError {
    #[error("input condition {which} is not a condition: {}", .violations[0])]
    InvalidInput {
        which: usize,
        violations: Vec<Violation>,
    },
    #[error("hypothesis F1∩F2 < F1\\F2 < F2\\F1 fails")]
    BlockOrder,
    #[error("hypothesis n1 = n2 fails ({first} vs {second})")]
    DepthMismatch { first: usize, second: usize },
    #[error("hypothesis fails: no order-preserving bijection transports p1 onto p2")]
    NotIsomorphic,
    #[error("no {kind} map given for index {index}")]
    MissingMap { kind: &'static str, index: usize },
    #[error("{kind} map given for index {index}, which is not in F1\\F2")]
    UnexpectedMap { kind: &'static str, index: usize },
    #[error("ε map for index {index} is not parity-balanced (condition 3b)")]
    EpsilonNotBalanced { index: usize },
    #[error("δ map for index {index} is not a constant map on the branches (condition 3a)")]
    DeltaNotConstant { index: usize },
    #[error("separating all prefixes needs depth {needed}, resolution is {resolution}")]
    ResolutionExhausted { needed: usize, resolution: usize },
}

/// The amalgamation `q ≤ p₁, p₂` of two isomorphic conditions.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub condition: Condition,
    pub bijection: OrderBijection,
}

/// Least depth ≥ `floor` at which all the given codes have distinct prefixes.
pub fn separating_depth(codes: &[BitString], floor: usize) -> usize {
    let mut sorted = codes.to_vec();
    sorted.sort();
    sorted
        .windows(2)
        .map(|w| w[0].common_prefix_len(&w[1]) + 1)
        .max()
        .unwrap_or(0)
        .max(floor)
}

/// Builds q by the four-case definition.
///
/// Root indices (F₁ ∩ F₂) are given `(constant 1, ξ)` above their own old
/// prefix; the four cases leave that region open for them.
pub fn amalgamate(
    p1: &Condition,
    p2: &Condition,
    eps: &BTreeMap<usize, BranchMap>,
    deltas: &BTreeMap<usize, BranchMap>,
    space: &Space,
) -> Result<Amalgam, AmalgamationError> {
    for (which, p) in [(1, p1), (2, p2)] {
        validate(p, space).map_err(|violations| AmalgamationError::InvalidInput { which, violations })?;
    }
    let f1: BTreeSet<usize> = p1.indices().collect();
    let f2: BTreeSet<usize> = p2.indices().collect();
    let root: Vec<usize> = f1.intersection(&f2).copied().collect();
    let left: Vec<usize> = f1.difference(&f2).copied().collect();
    let right: Vec<usize> = f2.difference(&f1).copied().collect();
    let below = |a: &[usize], b: &[usize]| match (a.last(), b.first()) {
        (Some(x), Some(y)) => x < y,
        _ => true,
    };
    if !below(&root, &left) || !below(&left, &right) || !below(&root, &right) {
        return Err(AmalgamationError::BlockOrder);
    }
    if p1.depth() != p2.depth() {
        return Err(AmalgamationError::DepthMismatch {
            first: p1.depth(),
            second: p2.depth(),
        });
    }
    let e = isomorphic(p1, p2, space).ok_or(AmalgamationError::NotIsomorphic)?;
    let branches = space.branches();
    for (kind, maps) in [("ε", eps), ("δ", deltas)] {
        if let Some(&index) = maps.keys().find(|k| !left.contains(k)) {
            return Err(AmalgamationError::UnexpectedMap { kind, index });
        }
        if let Some(&index) = left.iter().find(|k| !maps.contains_key(k)) {
            return Err(AmalgamationError::MissingMap { kind, index });
        }
    }
    for (&index, m) in eps {
        if !m.is_total_on(branches) || !m.is_parity_balanced() {
            return Err(AmalgamationError::EpsilonNotBalanced { index });
        }
    }
    for (&index, m) in deltas {
        if !m.is_total_on(branches) || !m.is_constant() {
            return Err(AmalgamationError::DeltaNotConstant { index });
        }
    }

    let n = p1.depth();
    let all: Vec<usize> = f1.union(&f2).copied().collect();
    let codes: Vec<BitString> = all.iter().map(|&xi| space.code(xi)).collect();
    let nq = separating_depth(&codes, n);
    if nq > space.resolution() {
        return Err(AmalgamationError::ResolutionExhausted {
            needed: nq,
            resolution: space.resolution(),
        });
    }

    let mut tables = BTreeMap::new();
    for &xi in &all {
        let code = space.code(xi);
        let own_n = code.prefix(n);
        let in_f1 = f1.contains(&xi);
        let table = AssignmentTable::from_fn(nq, code.prefix(nq), |t| {
            let tn = t.prefix(n);
            if tn != own_n {
                // cases 1 and 2 agree on the root
                let source = if in_f1 { p1 } else { p2 };
                return source.value(xi, tn).expect("valid input").clone();
            }
            if in_f1 {
                // case 3; the root has no δ
                match deltas.get(&xi) {
                    Some(d) => Assignment::new(d.clone(), xi),
                    None => Assignment::constant(1, branches, xi),
                }
            } else {
                // case 4
                let pre = e.inverse(xi).expect("xi in range of e");
                Assignment::new(eps[&pre].clone(), pre)
            }
        });
        tables.insert(xi, table);
    }
    Ok(Amalgam {
        condition: Condition::from_tables(nq, tables),
        bijection: e,
    })
}

/// The two equalities the amalgam must satisfy for each ξ ∈ F₁\F₂;
/// returns the first index at which one fails.
pub fn check_eq1(
    q: &Condition,
    e: &OrderBijection,
    eps: &BTreeMap<usize, BranchMap>,
    deltas: &BTreeMap<usize, BranchMap>,
    space: &Space,
) -> Result<(), usize> {
    let nq = q.depth();
    for (&xi, delta) in deltas {
        let Some(image) = e.apply(xi) else {
            return Err(xi);
        };
        let left = q.value(xi, space.code(image).prefix(nq));
        let right = q.value(image, space.code(xi).prefix(nq));
        if left != Some(&Assignment::new(delta.clone(), xi))
            || right != eps.get(&xi).map(|m| Assignment::new(m.clone(), xi)).as_ref()
        {
            return Err(xi);
        }
    }
    Ok(())
}
