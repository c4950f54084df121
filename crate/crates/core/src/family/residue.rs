use crate::model::{ClopenSet, Partition};

use super::SplittingFamily;

/// The atoms of `𝒜_α` for every α ≤ Λ: `𝒜_0` is generated by the V-sets,
/// `𝒜_{α+1}` adds `A_{α,1}, …, A_{α,2n}`.
pub struct SubalgebraChain {
    partitions: Vec<Partition>,
}

impl SubalgebraChain {
    pub fn new(family: &SplittingFamily) -> Self {
        let space = family.space();
        let mut current = Partition::trivial(space.len());
        // the full-length V-sets generate every V_s
        current.refine_by(|y| space.code_of(y));
        let mut partitions = Vec::with_capacity(space.index_count() + 1);
        partitions.push(current.clone());
        for xi in 0..space.index_count() {
            current.refine_by(|y| family.mask(xi, y));
            partitions.push(current.clone());
        }
        SubalgebraChain { partitions }
    }

    /// Atoms of `𝒜_α`.
    pub fn atoms(&self, alpha: usize) -> &Partition {
        &self.partitions[alpha]
    }

    pub fn contains(&self, alpha: usize, set: &ClopenSet) -> bool {
        self.partitions[alpha].contains_set(set)
    }
}

/// Whether `candidate ∈ 𝒜_α`.
pub fn in_subalgebra(family: &SplittingFamily, alpha: usize, candidate: &ClopenSet) -> bool {
    SubalgebraChain::new(family).contains(alpha, candidate)
}

/// Whether `A_{α,i} \ V_{x_α|k} ∈ 𝒜_α` for every branch i.
pub fn residue_in_subalgebra(family: &SplittingFamily, alpha: usize, k: usize) -> bool {
    residue_holds(family, &SubalgebraChain::new(family), alpha, k)
}

fn residue_holds(family: &SplittingFamily, chain: &SubalgebraChain, alpha: usize, k: usize) -> bool {
    let space = family.space();
    let Ok(v) = space.v_set(&space.code(alpha).prefix(k)) else {
        return false;
    };
    (1..=space.branches()).all(|i| chain.contains(alpha, &family.set(alpha, i).difference(&v)))
}

/// `table[α][k]` for every α < Λ and k ≤ M, sharing one subalgebra chain.
pub fn residue_table(family: &SplittingFamily) -> Vec<Vec<bool>> {
    let chain = SubalgebraChain::new(family);
    let space = family.space();
    (0..space.index_count())
        .map(|alpha| {
            (0..=space.resolution())
                .map(|k| residue_holds(family, &chain, alpha, k))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::derive_family;
    use crate::forcing::{build_chain, Fill, Step};
    use crate::model::{algebra_atoms, in_generated_algebra, BitString, Space, SpaceConfig};

    fn family(seed: u64) -> SplittingFamily {
        let codes = ["00000", "01101", "10010", "11111", "00110", "10101"]
            .iter()
            .map(|c| c.parse().unwrap())
            .collect();
        let sp = Space::new(SpaceConfig::new(2, 5, codes)).unwrap();
        let chain = build_chain(&sp, &[Step::Complete { fill: Fill::Seeded }], seed).unwrap();
        derive_family(&sp, &chain).unwrap()
    }

    /// The generators listed literally: every V_s with |s| ≤ M and every
    /// `A_{ξ,j}` with ξ < α.
    fn generators(f: &SplittingFamily, alpha: usize) -> Vec<ClopenSet> {
        let sp = f.space();
        let mut g: Vec<ClopenSet> = (0..=sp.resolution())
            .flat_map(|len| BitString::all_of_len(len).map(|s| sp.v_set(&s).unwrap()))
            .collect();
        for xi in 0..alpha {
            g.extend(f.sets(xi).iter().cloned());
        }
        g
    }

    #[test]
    fn table_is_all_true_and_matches_generic_check() {
        for seed in 0..5 {
            let f = family(seed);
            let table = residue_table(&f);
            let sp = f.space();
            for alpha in 0..sp.index_count() {
                let gens = generators(&f, alpha);
                for k in 0..=sp.resolution() {
                    assert!(table[alpha][k]);
                    let v = sp.v_set(&sp.code(alpha).prefix(k)).unwrap();
                    for i in 1..=4 {
                        let residue = f.set(alpha, i).difference(&v);
                        assert!(in_generated_algebra(sp, &residue, &gens));
                    }
                }
            }
        }
    }

    #[test]
    fn partitions_match_atoms() {
        let f = family(9);
        let chain = SubalgebraChain::new(&f);
        for alpha in [0, 3, 6] {
            let atoms = algebra_atoms(f.space(), &generators(&f, alpha));
            assert_eq!(chain.atoms(alpha).cells(), atoms);
        }
    }

    #[test]
    fn set_splitting_a_later_fibre_is_outside() {
        let f = family(4);
        let sp = f.space();
        for alpha in 0..sp.index_count() - 1 {
            let beta = alpha + 1;
            let mut candidate = sp.none();
            candidate.insert(sp.split_point(beta, 1));
            assert!(!in_subalgebra(&f, alpha, &candidate));
            // but the whole fibre is a V-set
            assert!(in_subalgebra(&f, alpha, &sp.fiber(beta)));
        }
    }
}
