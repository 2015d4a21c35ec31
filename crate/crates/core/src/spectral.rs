//! Exact spectrality checks.
//!
//! The character sum `sum_{e in E} exp(2 pi i <a - b, e> / p)` vanishes iff
//! the p level-set sizes `#{e : <a - b, e> = m}` are all equal, because the
//! only rational relation among the p-th roots of unity is the all-equal one.
//! Every decision in this module is made on those integer counts.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupParams, GroupVector, PointSet};
use crate::index::ElementIndex;
use crate::SearchLimits;

/// Level-set sizes of `e -> <delta, e>` over a set E.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingVector {
    #[serde(skip)]
    params: GroupParams,
    counts: Vec<u64>,
}

impl CountingVector {
    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// All p entries equal, i.e. the character sum vanishes.
    pub fn is_constant(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn counting_vector(delta: &GroupVector, set: &PointSet) -> Result<CountingVector> {
    let params = set.params();
    params.ensure_same(&delta.params())?;
    let mut counts = vec![0u64; params.p() as usize];
    for e in set {
        counts[delta.dot(e)? as usize] += 1;
    }
    Ok(CountingVector { params, counts })
}

/// Whether the characters of `a` and `b` are orthogonal in L^2(E).
///
/// `a == b` gives `false`: a character has positive norm on a nonempty set.
pub fn chars_orthogonal(a: &GroupVector, b: &GroupVector, set: &PointSet) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    a.params().ensure_same(&b.params())?;
    if a == b {
        return Ok(false);
    }
    Ok(counting_vector(&(a - b), set)?.is_constant())
}

/// Whether the characters indexed by `spectrum` form an orthogonal basis of L^2(E).
///
/// Pairwise orthogonal characters are linearly independent, so `|A| = |E|`
/// pairwise orthogonal ones already span.
pub fn is_spectrum(spectrum: &PointSet, set: &PointSet) -> Result<bool> {
    spectrum.params().ensure_same(&set.params())?;
    if set.is_empty() || spectrum.len() != set.len() {
        return Ok(false);
    }
    let a = spectrum.to_vec();
    for (k, x) in a.iter().enumerate() {
        for y in &a[k + 1..] {
            if !chars_orthogonal(x, y, set)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Counting vector of E along `delta` and whether E is equidistributed over
/// the parallel class of hyperplanes `<delta, x> = c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equidistribution {
    pub counting_vector: CountingVector,
    pub equidistributed: bool,
}

pub fn equidistribution_report(set: &PointSet, delta: &GroupVector) -> Result<Equidistribution> {
    if delta.is_zero() {
        return Err(Error::Parameter(
            "equidistribution needs a nonzero direction".into(),
        ));
    }
    let cv = counting_vector(delta, set)?;
    let equidistributed = cv.is_constant();
    Ok(Equidistribution {
        counting_vector: cv,
        equidistributed,
    })
}

/// For every group element `delta`, whether the counting vector of E along
/// `delta` is constant. Entry 0 is always `false` for nonempty E with p > 1.
///
/// This is the adjacency of the orthogonality graph: `a ~ b` iff
/// `table[index(a - b)]`.
pub fn orthogonal_differences(index: &ElementIndex, set: &[usize]) -> Vec<bool> {
    let p = index.params().p() as usize;
    let mut counts = vec![0u32; p];
    (0..index.order())
        .map(|delta| {
            if delta == 0 || set.len() % p != 0 {
                return false;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for &e in set {
                counts[index.dot(delta, e) as usize] += 1;
            }
            counts.windows(2).all(|w| w[0] == w[1])
        })
        .collect()
}

/// Clique search in the orthogonality graph restricted to the neighbourhood
/// of 0. Candidates are kept in ascending index order, so the first clique
/// found is the lexicographically least spectrum containing 0.
struct CliqueSearch<'a> {
    index: &'a ElementIndex,
    adjacent: &'a [bool],
    target: usize,
}

impl CliqueSearch<'_> {
    fn extend(&self, chosen: &mut Vec<usize>, candidates: &[usize]) -> bool {
        if chosen.len() == self.target {
            return true;
        }
        let need = self.target - chosen.len();
        for (k, &v) in candidates.iter().enumerate() {
            if candidates.len() - k < need {
                return false;
            }
            if self.branch(chosen, v, &candidates[k + 1..]) {
                return true;
            }
        }
        false
    }

    fn branch(&self, chosen: &mut Vec<usize>, v: usize, rest: &[usize]) -> bool {
        let next: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&u| self.adjacent[self.index.sub(u, v)])
            .collect();
        chosen.push(v);
        if chosen.len() + next.len() >= self.target && self.extend(chosen, &next) {
            return true;
        }
        chosen.pop();
        false
    }
}

/// Index-level spectrum search. `set` must be nonempty; returns sorted indices.
pub fn find_spectrum_indexed(index: &ElementIndex, set: &[usize], workers: usize) -> Option<Vec<usize>> {
    let size = set.len();
    let p = index.params().p() as usize;
    if size == 1 {
        return Some(vec![0]);
    }
    if size % p != 0 || size > index.order() {
        return None;
    }
    let adjacent = orthogonal_differences(index, set);
    let candidates: Vec<usize> = (1..index.order()).filter(|&v| adjacent[v]).collect();
    let search = CliqueSearch {
        index,
        adjacent: &adjacent,
        target: size,
    };
    let run_branch = |k: usize| {
        let mut chosen = vec![0];
        search
            .branch(&mut chosen, candidates[k], &candidates[k + 1..])
            .then_some(chosen)
    };
    if workers <= 1 {
        let mut chosen = vec![0];
        return search.extend(&mut chosen, &candidates).then_some(chosen);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| {
        (0..candidates.len())
            .into_par_iter()
            .filter(|&k| candidates.len() - k >= size - 1)
            .map(run_branch)
            .find_map_first(|x| x)
    })
}

/// Finds a spectrum of E, if one exists. The result always contains 0
/// (translates of spectra are spectra) and is the lexicographically least
/// such spectrum.
pub fn find_spectrum(set: &PointSet, limits: &SearchLimits) -> Result<Option<PointSet>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let index = ElementIndex::new(set.params(), limits.max_group_order)?;
    let members = index.indices(set)?;
    Ok(find_spectrum_indexed(&index, &members, limits.workers).map(|a| index.to_point_set(&a)))
}
