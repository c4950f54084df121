use std::collections::BTreeSet;

/// Largest family size searched exactly.
pub const EXACT_LIMIT: usize = 20;

/// A sub-family whose pairwise intersections all equal `root`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSystem {
    /// Positions in the input family, increasing.
    pub members: Vec<usize>,
    pub root: BTreeSet<usize>,
    /// False when the greedy fallback was used.
    pub exact: bool,
}

/// Finds a largest Δ-subsystem: exact for at most [`EXACT_LIMIT`] sets,
/// greedy beyond. Ties are broken by the lexicographically smallest list
/// of member positions.
pub fn delta_system(family: &[BTreeSet<usize>]) -> DeltaSystem {
    match family.len() {
        0 => DeltaSystem {
            members: vec![],
            root: BTreeSet::new(),
            exact: true,
        },
        1 => DeltaSystem {
            members: vec![0],
            root: family[0].clone(),
            exact: true,
        },
        len if len <= EXACT_LIMIT => exact(family),
        _ => greedy(family),
    }
}

fn candidate_roots(family: &[BTreeSet<usize>]) -> BTreeSet<BTreeSet<usize>> {
    let mut roots = BTreeSet::new();
    for (a, x) in family.iter().enumerate() {
        for y in &family[a + 1..] {
            roots.insert(x.intersection(y).copied().collect());
        }
    }
    roots
}

fn exact(family: &[BTreeSet<usize>]) -> DeltaSystem {
    let len = family.len();
    let mut best: Option<(Vec<usize>, BTreeSet<usize>)> = None;
    for root in candidate_roots(family) {
        // compatibility graph: a ~ b iff a ∩ b = root
        let mut adj = vec![0u32; len];
        for a in 0..len {
            if !root.is_subset(&family[a]) {
                continue;
            }
            for b in a + 1..len {
                if root.is_subset(&family[b])
                    && family[a].intersection(&family[b]).eq(root.iter())
                {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
            }
        }
        let clique = max_clique(&adj);
        let members: Vec<usize> = (0..len).filter(|&i| clique >> i & 1 == 1).collect();
        let better = match &best {
            None => true,
            Some((m, _)) => members.len() > m.len() || (members.len() == m.len() && members < *m),
        };
        if better {
            best = Some((members, root));
        }
    }
    let (members, root) = best.expect("at least one candidate root");
    DeltaSystem {
        members,
        root,
        exact: true,
    }
}

/// Maximum clique as a bitmask, preferring the lexicographically smallest
/// member list among cliques of maximum size.
fn max_clique(adj: &[u32]) -> u32 {
    fn lex_smaller(a: u32, b: u32) -> bool {
        // a < b as sorted member lists of equal size
        let diff = a ^ b;
        diff != 0 && (a & diff).trailing_zeros() < (b & diff).trailing_zeros()
    }
    fn grow(adj: &[u32], chosen: u32, candidates: u32, best: &mut u32) {
        if candidates == 0 {
            let (c, b) = (chosen.count_ones(), best.count_ones());
            if c > b || (c == b && lex_smaller(chosen, *best)) {
                *best = chosen;
            }
            return;
        }
        if chosen.count_ones() + candidates.count_ones() < best.count_ones() {
            return;
        }
        let v = candidates.trailing_zeros();
        let bit = 1u32 << v;
        grow(adj, chosen | bit, candidates & adj[v as usize], best);
        grow(adj, chosen, candidates & !bit, best);
    }
    let mut best = 0u32;
    let all = if adj.len() == 32 { u32::MAX } else { (1u32 << adj.len()) - 1 };
    grow(adj, 0, all, &mut best);
    best
}

fn greedy(family: &[BTreeSet<usize>]) -> DeltaSystem {
    let mut best: Option<(Vec<usize>, BTreeSet<usize>)> = None;
    for root in candidate_roots(family) {
        let mut members: Vec<usize> = Vec::new();
        for (i, set) in family.iter().enumerate() {
            if root.is_subset(set)
                && members
                    .iter()
                    .all(|&m| family[m].intersection(set).eq(root.iter()))
            {
                members.push(i);
            }
        }
        if best.as_ref().is_none_or(|(m, _)| members.len() > m.len()) {
            best = Some((members, root));
        }
    }
    let (members, root) = best.expect("family has at least two sets");
    DeltaSystem {
        members,
        root,
        exact: false,
    }
}
