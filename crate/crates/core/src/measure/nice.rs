use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::family::SplittingFamily;
use crate::model::{ClopenSet, Point, PointId};
use crate::rational::{int, Rational};

use super::biorth::{check_biorthogonal, check_nice, BiorthCandidate, PairingWitness};
use super::simple::{AtomicMeasure, SimpleFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("f_{0} is not an indicator function")]
    NotIndicator(usize),
    #[error("μ_{0} is not supported on a single fibre with at most three atoms")]
    BadSupport(usize),
    #[error("input is not biorthogonal at ({}, {})", .0.i, .0.j)]
    NotBiorthogonal(PairingWitness),
}

/// Which case of the extraction produced the output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceCase {
    /// Functionals acting as one point evaluation, combined by differencing
    /// consecutive members.
    Single,
    /// Functionals already of the form `δ_x − δ_z`.
    Pair,
    /// Three-atom functionals with zero total weight, reduced to one
    /// separated pair of atoms common to the whole group.
    Triple,
}

/// Counts gathered while classifying the input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtractionReport {
    pub singles: usize,
    pub pairs: usize,
    pub triples_balanced: usize,
    /// Three-atom members with nonzero total weight; excluding them needs
    /// the pattern hypothesis `R_{η_β} ⊆ A_{η_α, j}` for some α < β.
    pub triples_unbalanced: usize,
    /// Size of the largest group of balanced triples separating the same
    /// pair of atom positions.
    pub largest_group: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extraction {
    Nice {
        candidate: BiorthCandidate,
        /// Input positions of the functions kept.
        sources: Vec<usize>,
        case: NiceCase,
        report: ExtractionReport,
    },
    /// No case yields a nonempty nice system.
    Report(ExtractionReport),
}

struct Member {
    set: ClopenSet,
    atoms: Vec<(PointId, Rational)>,
}

/// Turns a biorthogonal system of indicators against functionals carried
/// by at most three points of one fibre into a nice one, case by case.
/// The largest output among the applicable cases is returned.
pub fn extract_nice_3supported(
    c: &BiorthCandidate,
    family: &SplittingFamily,
) -> Result<Extraction, ExtractError> {
    let space = family.space();
    let mut members = Vec::with_capacity(c.len());
    for (pos, (f, mu)) in c.pairs.iter().enumerate() {
        let values = f.values();
        if values.iter().any(|v| !v.is_zero() && !v.is_one()) {
            return Err(ExtractError::NotIndicator(pos));
        }
        let set = ClopenSet::from_ids(
            values.len(),
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_one())
                .map(|(y, _)| PointId(y)),
        );
        let atoms: Vec<(PointId, Rational)> = mu.atoms().map(|(y, w)| (y, w.clone())).collect();
        let fibre = |y: PointId| match space.point(y) {
            Point::Split { index, .. } => Some(index),
            Point::Ground(_) => None,
        };
        let first = atoms.first().and_then(|(y, _)| fibre(*y));
        if atoms.is_empty()
            || atoms.len() > 3
            || first.is_none()
            || atoms.iter().any(|(y, _)| fibre(*y) != first)
        {
            return Err(ExtractError::BadSupport(pos));
        }
        members.push(Member { set, atoms });
    }
    check_biorthogonal(c).map_err(ExtractError::NotBiorthogonal)?;

    let mut report = ExtractionReport::default();
    let mut singles: Vec<(usize, PointId)> = Vec::new();
    let mut pairs: Vec<usize> = Vec::new();
    let mut groups: BTreeMap<(usize, usize), Vec<(usize, PointId, PointId)>> = BTreeMap::new();
    for (pos, m) in members.iter().enumerate() {
        let total: Rational = m.atoms.iter().map(|(_, w)| w).sum();
        match m.atoms.len() {
            1 => singles.push((pos, m.atoms[0].0)),
            2 if !total.is_zero() => {
                // some atom lies in A_α since μ_α(A_α) = 1
                let y = m.atoms.iter().find(|(y, _)| m.set.contains(*y)).expect("μ(A) = 1").0;
                singles.push((pos, y));
            }
            2 => pairs.push(pos),
            _ if !total.is_zero() => report.triples_unbalanced += 1,
            _ => {
                let inside = |k: usize| m.set.contains(m.atoms[k].0);
                let separated = (0..3)
                    .flat_map(|a| (0..3).map(move |b| (a, b)))
                    .find(|&(a, b)| inside(a) && !inside(b))
                    .expect("μ(A) = 1 with zero total weight");
                groups
                    .entry(separated)
                    .or_default()
                    .push((pos, m.atoms[separated.0].0, m.atoms[separated.1].0));
            }
        }
    }
    report.singles = singles.len();
    report.pairs = pairs.len();
    report.triples_balanced = groups.values().map(Vec::len).sum();
    let best_group = groups.values().max_by_key(|g| g.len()).cloned().unwrap_or_default();
    report.largest_group = best_group.len();

    let dirac_pair = |x: PointId, z: PointId| AtomicMeasure::from_atoms([(x, int(1)), (z, int(-1))]);
    let indicator = |pos: usize| SimpleFunction::indicator(members[pos].set.clone());
    let options: [(NiceCase, Vec<(usize, AtomicMeasure)>); 3] = [
        (
            NiceCase::Single,
            singles
                .chunks_exact(2)
                .map(|w| (w[1].0, dirac_pair(w[1].1, w[0].1)))
                .collect(),
        ),
        (
            NiceCase::Pair,
            pairs.iter().map(|&pos| (pos, c.pairs[pos].1.clone())).collect(),
        ),
        (
            NiceCase::Triple,
            best_group.iter().map(|&(pos, x, z)| (pos, dirac_pair(x, z))).collect(),
        ),
    ];
    let Some((case, chosen)) = options
        .into_iter()
        .filter(|(_, o)| !o.is_empty())
        .max_by_key(|(case, o)| (o.len(), std::cmp::Reverse(*case as u8)))
    else {
        return Ok(Extraction::Report(report));
    };
    let sources: Vec<usize> = chosen.iter().map(|(pos, _)| *pos).collect();
    let candidate = BiorthCandidate::new(
        chosen
            .into_iter()
            .map(|(pos, mu)| (indicator(pos), mu))
            .collect(),
    );
    if !check_nice(&candidate) {
        return Ok(Extraction::Report(report));
    }
    Ok(Extraction::Nice {
        candidate,
        sources,
        case,
        report,
    })
}
