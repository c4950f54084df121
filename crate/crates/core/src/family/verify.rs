use std::ops::Range;

use crate::model::{BitString, Point, PointId, Space};

use super::SplittingFamily;

/// One failed clause of the splitting-family definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplittingFailure {
    /// (1) `(x_ξ, i) ∉ A_{ξ,i}`.
    Pointed { index: usize, branch: usize },
    /// (2) `point ∈ A_{ξ,first} ∩ A_{ξ,second}`.
    Overlap {
        index: usize,
        first: usize,
        second: usize,
        point: PointId,
    },
    /// (3) `point` lies in no `A_{ξ,j}`.
    Uncovered { index: usize, point: PointId },
    /// (4) no k ≤ M puts `A_{η,i} ∩ V_{x_η|k}` inside one `A_{ξ,j}`;
    /// the two points lie in different ξ-sets (or `first == second` is unlabelled).
    Inherit {
        lower: usize,
        upper: usize,
        branch: usize,
        first: PointId,
        second: PointId,
    },
    /// (5) no k ≤ M puts `V_{x|k}` inside one `A_{ξ,j}`, where x is the
    /// code of `point` (ground, or `x_η` with η > ξ).
    Locally { index: usize, point: PointId },
}

impl SplittingFailure {
    pub fn clause(&self) -> u8 {
        match self {
            SplittingFailure::Pointed { .. } => 1,
            SplittingFailure::Overlap { .. } => 2,
            SplittingFailure::Uncovered { .. } => 3,
            SplittingFailure::Inherit { .. } => 4,
            SplittingFailure::Locally { .. } => 5,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplittingReport {
    pub failures: Vec<SplittingFailure>,
    /// Largest minimal k needed by clause (4), over all η < ξ and i.
    pub inherit_depth: usize,
    /// Largest minimal k needed by clause (5).
    pub local_depth: usize,
}

impl SplittingReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// (6) failed: `R_η ∩ A_{ξ,j}` has `odd` odd and `even` even branches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceFailure {
    pub index: usize,
    pub other: usize,
    pub j: usize,
    pub odd: usize,
    pub even: usize,
}

/// Checks clauses (1)–(5). Clause (4) is checked separately for each
/// branch i; clause (5) for every ground point and every `x_η`, η > ξ.
pub fn verify_splitting(family: &SplittingFamily) -> SplittingReport {
    let space = family.space();
    let mut report = SplittingReport::default();
    let labels: Vec<Vec<u8>> = (0..space.index_count()).map(|xi| family.labels(xi)).collect();

    for xi in 0..space.index_count() {
        for i in 1..=space.branches() {
            if !family.member(space.split_point(xi, i), xi, i) {
                report.failures.push(SplittingFailure::Pointed { index: xi, branch: i });
            }
        }
        for y in space.ids() {
            let mask = family.mask(xi, y);
            if mask == 0 {
                report.failures.push(SplittingFailure::Uncovered { index: xi, point: y });
            } else if mask.count_ones() > 1 {
                let first = mask.trailing_zeros() as usize + 1;
                let second = (mask & (mask - 1)).trailing_zeros() as usize + 1;
                report.failures.push(SplittingFailure::Overlap {
                    index: xi,
                    first,
                    second,
                    point: y,
                });
            }
        }
    }

    for upper in 0..space.index_count() {
        for lower in 0..upper {
            check_inherit(space, &labels, lower, upper, &mut report);
        }
        check_locally(space, &labels[upper], upper, &mut report);
    }
    report
}

/// Per branch i of η: the least k with `A_{η,i} ∩ V_{x_η|k}` inside one ξ-set.
fn check_inherit(
    space: &Space,
    labels: &[Vec<u8>],
    lower: usize,
    upper: usize,
    report: &mut SplittingReport,
) {
    let (eta, xi) = (&labels[lower], &labels[upper]);
    let code = space.code(lower);
    let m = space.resolution();
    let branches = space.branches();
    // seen[i] = (ξ-label, witness) of the first point of A_{η,i} met so far
    let mut seen: Vec<Option<(u8, PointId)>> = vec![None; branches + 1];
    let mut broken: Vec<Option<(PointId, PointId)>> = vec![None; branches + 1];
    let mut min_k = vec![m; branches + 1];
    let mut failed = vec![false; branches + 1];
    let mut prev: Range<usize> = 0..0;
    for k in (0..=m).rev() {
        let range = space.v_range(&code.prefix(k)).expect("k ≤ M");
        let fresh = if k == m {
            range.clone().chain(0..0)
        } else {
            (range.start..prev.start).chain(prev.end..range.end)
        };
        for y in fresh {
            let i = eta[y] as usize;
            if i == 0 || i > branches || broken[i].is_some() {
                continue;
            }
            let j = xi[y];
            match seen[i] {
                None if j == 0 => broken[i] = Some((PointId(y), PointId(y))),
                None => seen[i] = Some((j, PointId(y))),
                Some((j0, _)) if j0 == j => {}
                Some((_, w)) => broken[i] = Some((w, PointId(y))),
            }
        }
        for i in 1..=branches {
            if broken[i].is_none() {
                min_k[i] = k;
            }
        }
        if k == m {
            for i in 1..=branches {
                if let Some((first, second)) = broken[i] {
                    failed[i] = true;
                    report.failures.push(SplittingFailure::Inherit {
                        lower,
                        upper,
                        branch: i,
                        first,
                        second,
                    });
                }
            }
        }
        if broken[1..].iter().all(Option::is_some) {
            break;
        }
        prev = range;
    }
    for i in 1..=branches {
        if !failed[i] {
            report.inherit_depth = report.inherit_depth.max(min_k[i]);
        }
    }
}

const MIXED: u8 = u8::MAX;

/// Heap position of the tree node `s`.
fn node(s: BitString) -> usize {
    (1usize << s.len()) | s.value() as usize
}

/// Clause (5) for ξ = `index` via the uniform V-nodes of its labelling.
fn check_locally(space: &Space, labels: &[u8], index: usize, report: &mut SplittingReport) {
    let m = space.resolution();
    let mut uniform = vec![MIXED; 1 << (m + 1)];
    for code in BitString::all_of_len(m) {
        let range = space.v_range(&code).expect("length M");
        let first = labels[range.start];
        let same = labels[range.clone()].iter().all(|&l| l == first);
        uniform[node(code)] = if first != 0 && same { first } else { MIXED };
    }
    for len in (0..m).rev() {
        for s in BitString::all_of_len(len) {
            let (a, b) = (uniform[node(s.push(false))], uniform[node(s.push(true))]);
            uniform[node(s)] = if a == b { a } else { MIXED };
        }
    }
    // least uniform ancestor depth, top-down
    let mut least = vec![usize::MAX; 1 << (m + 1)];
    for len in 0..=m {
        for s in BitString::all_of_len(len) {
            let inherited = if len == 0 { usize::MAX } else { least[node(s.prefix(len - 1))] };
            least[node(s)] = if inherited != usize::MAX {
                inherited
            } else if uniform[node(s)] != MIXED {
                len
            } else {
                usize::MAX
            };
        }
    }
    for y in space.ids() {
        let relevant = match space.point(y) {
            Point::Ground(_) => true,
            Point::Split { index: eta, branch } => eta > index && branch == 1,
        };
        if !relevant {
            continue;
        }
        match least[node(space.code_of(y))] {
            usize::MAX => report.failures.push(SplittingFailure::Locally { index, point: y }),
            k => report.local_depth = report.local_depth.max(k),
        }
    }
}

/// Clause (6): for distinct ξ, η and every j, `R_η ∩ A_{ξ,j}` has as many
/// odd as even branches.
pub fn verify_balanced(family: &SplittingFamily) -> Vec<BalanceFailure> {
    let space = family.space();
    let branches = space.branches();
    let mut out = Vec::new();
    for xi in 0..space.index_count() {
        for eta in 0..space.index_count() {
            if eta == xi {
                continue;
            }
            for j in 1..=branches {
                let set = family.set(xi, j);
                let (mut odd, mut even) = (0, 0);
                for b in 1..=branches {
                    if set.contains(space.split_point(eta, b)) {
                        if b % 2 == 1 {
                            odd += 1;
                        } else {
                            even += 1;
                        }
                    }
                }
                if odd != even {
                    out.push(BalanceFailure {
                        index: xi,
                        other: eta,
                        j,
                        odd,
                        even,
                    });
                }
            }
        }
    }
    out
}
