use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::model::{ClopenSet, PointId};
use crate::rational::Rational;

/// A finitely supported measure with exact rational weights.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AtomicMeasure {
    atoms: BTreeMap<PointId, Rational>,
}

impl AtomicMeasure {
    pub fn zero() -> Self {
        AtomicMeasure::default()
    }

    /// `δ_y`.
    pub fn dirac(y: PointId) -> Self {
        let mut m = AtomicMeasure::zero();
        m.add(y, crate::rational::one());
        m
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = (PointId, Rational)>) -> Self {
        let mut m = AtomicMeasure::zero();
        for (y, w) in atoms {
            m.add(y, w);
        }
        m
    }

    /// Adds `w·δ_y`, dropping the atom if its weight becomes zero.
    pub fn add(&mut self, y: PointId, w: Rational) {
        let entry = self.atoms.entry(y).or_insert_with(Rational::zero);
        *entry += w;
        if entry.is_zero() {
            self.atoms.remove(&y);
        }
    }

    pub fn weight(&self, y: PointId) -> Rational {
        self.atoms.get(&y).cloned().unwrap_or_else(Rational::zero)
    }

    /// Atoms in increasing point order.
    pub fn atoms(&self) -> impl Iterator<Item = (PointId, &Rational)> {
        self.atoms.iter().map(|(y, w)| (*y, w))
    }

    pub fn support(&self) -> Vec<PointId> {
        self.atoms.keys().copied().collect()
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `μ(B)`.
    pub fn measure(&self, set: &ClopenSet) -> Rational {
        self.atoms
            .iter()
            .filter(|(y, _)| set.contains(**y))
            .map(|(_, w)| w)
            .sum()
    }

    /// `|μ|(B)`.
    pub fn variation_on(&self, set: &ClopenSet) -> Rational {
        self.atoms
            .iter()
            .filter(|(y, _)| set.contains(**y))
            .map(|(_, w)| w.abs())
            .sum()
    }

    /// `‖μ‖`.
    pub fn norm(&self) -> Rational {
        self.atoms.values().map(|w| w.abs()).sum()
    }

    pub fn plus(&self, other: &AtomicMeasure) -> AtomicMeasure {
        let mut out = self.clone();
        for (y, w) in other.atoms() {
            out.add(y, w.clone());
        }
        out
    }

    pub fn scaled(&self, c: &Rational) -> AtomicMeasure {
        AtomicMeasure::from_atoms(self.atoms().map(|(y, w)| (y, w * c)))
    }
}

/// A rational combination `Σ c_t χ_{S_t}` of indicator functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFunction {
    universe: usize,
    terms: Vec<(Rational, ClopenSet)>,
}

impl SimpleFunction {
    pub fn zero(universe: usize) -> Self {
        SimpleFunction {
            universe,
            terms: Vec::new(),
        }
    }

    /// `χ_S`.
    pub fn indicator(set: ClopenSet) -> Self {
        SimpleFunction {
            universe: set.universe(),
            terms: vec![(crate::rational::one(), set)],
        }
    }

    pub fn from_terms(universe: usize, terms: Vec<(Rational, ClopenSet)>) -> Self {
        assert!(terms.iter().all(|(_, s)| s.universe() == universe));
        SimpleFunction { universe, terms }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn terms(&self) -> &[(Rational, ClopenSet)] {
        &self.terms
    }

    pub fn add_term(&mut self, c: Rational, set: ClopenSet) {
        assert_eq!(set.universe(), self.universe);
        self.terms.push((c, set));
    }

    pub fn plus(&self, other: &SimpleFunction) -> SimpleFunction {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SimpleFunction::from_terms(self.universe, terms)
    }

    pub fn scaled(&self, c: &Rational) -> SimpleFunction {
        let terms = self.terms.iter().map(|(a, s)| (a * c, s.clone())).collect();
        SimpleFunction::from_terms(self.universe, terms)
    }

    /// `f(y)`.
    pub fn eval(&self, y: PointId) -> Rational {
        self.terms
            .iter()
            .filter(|(_, s)| s.contains(y))
            .map(|(c, _)| c)
            .sum()
    }

    /// The value at every point.
    pub fn values(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.universe];
        for (c, s) in &self.terms {
            for y in s.iter() {
                out[y.0] += c;
            }
        }
        out
    }

    /// `‖f‖_∞`.
    pub fn sup_norm(&self) -> Rational {
        self.values()
            .into_iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// `∫ f dμ = Σ_y f(y)·μ({y})`.
pub fn integrate(f: &SimpleFunction, mu: &AtomicMeasure) -> Rational {
    mu.atoms().map(|(y, w)| f.eval(y) * w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn set(universe: usize, ids: &[usize]) -> ClopenSet {
        ClopenSet::from_ids(universe, ids.iter().map(|&i| PointId(i)))
    }

    #[test]
    fn zero_measure_integrates_to_zero() {
        let f = SimpleFunction::indicator(set(5, &[0, 1]));
        assert_eq!(integrate(&f, &AtomicMeasure::zero()), int(0));
    }

    #[test]
    fn point_evaluation() {
        let f = SimpleFunction::indicator(set(5, &[0, 3]));
        assert_eq!(integrate(&f, &AtomicMeasure::dirac(PointId(3))), int(1));
        assert_eq!(integrate(&f, &AtomicMeasure::dirac(PointId(2))), int(0));
    }

    #[test]
    fn cancelling_atoms_vanish() {
        let mut m = AtomicMeasure::dirac(PointId(1));
        m.add(PointId(1), int(-1));
        assert!(m.is_zero());
        let m = AtomicMeasure::from_atoms([(PointId(0), rat(1, 2)), (PointId(2), rat(-3, 2))]);
        assert_eq!(m.norm(), int(2));
        assert_eq!(m.variation_on(&set(3, &[2])), rat(3, 2));
        assert_eq!(m.measure(&set(3, &[0, 2])), int(-1));
    }

    #[test]
    fn values_and_norm() {
        let mut f = SimpleFunction::indicator(set(4, &[0, 1]));
        f.add_term(rat(-5, 2), set(4, &[1, 2]));
        assert_eq!(f.values(), vec![int(1), rat(-3, 2), rat(-5, 2), int(0)]);
        assert_eq!(f.sup_norm(), rat(5, 2));
    }
}
