//! Brute-force classification of every subset of a small group as tiling
//! and/or spectral.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupParams, GroupVector, PointSet};
use crate::index::ElementIndex;
use crate::linalg::{apply_map, enumerate_subspaces, FpMatrix, Subspace};
use crate::spectral::find_spectrum_indexed;
use crate::tiling::{self, find_partner_indexed, is_tiling_pair};
use crate::SearchLimits;

/// Default bound on `p^d` for [`prove_fuglede`].
pub const DEFAULT_PROVE_BOUND: u64 = 16;
/// Hard bound with `force`: subset ids must fit in a `u64`.
pub const FORCED_PROVE_BOUND: u64 = 63;

const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRecord {
    /// Bit k set iff the k-th element in lexicographic order is a member.
    /// Absent for groups with more than 64 elements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<u64>,
    pub size: usize,
    pub spectral: bool,
    pub tiling: bool,
}

/// Spectral and tiling flags for a subset given by sorted element indices.
/// Size prechecks run first: a spectral set has size 1, `p^d`, or a multiple
/// of p; a tiling set has size dividing `p^d`.
pub fn classify_indexed(index: &ElementIndex, members: &[usize], workers: usize) -> (bool, bool) {
    let size = members.len();
    if size == 0 {
        return (false, false);
    }
    let p = index.params().p() as usize;
    let spectral = if size == 1 || size == index.order() {
        true
    } else if size % p != 0 {
        false
    } else {
        find_spectrum_indexed(index, members, workers).is_some()
    };
    let tiling = index.order() % size == 0 && find_partner_indexed(index, members, workers).0.is_some();
    (spectral, tiling)
}

/// Classifies a single set. The empty set is neither spectral nor tiling.
pub fn classify_set(set: &PointSet, limits: &SearchLimits) -> Result<ClassificationRecord> {
    let index = ElementIndex::new(set.params(), limits.max_group_order)?;
    let members = index.indices(set)?;
    let (spectral, tiling) = classify_indexed(&index, &members, limits.workers);
    let id = (index.order() <= 64).then(|| members.iter().fold(0u64, |acc, &k| acc | 1 << k));
    Ok(ClassificationRecord {
        id,
        size: set.len(),
        spectral,
        tiling,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub size: usize,
    pub spectral: bool,
    pub tiling: bool,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub params: GroupParams,
    pub total_subsets: u64,
    pub counts: Vec<ClassCount>,
    /// Nonempty subsets whose spectral and tiling flags differ.
    pub discrepancies: Vec<ClassificationRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost_warning: Option<String>,
    #[serde(skip)]
    pub records: Vec<ClassificationRecord>,
}

impl ProofReport {
    pub fn verified(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProveOptions {
    pub workers: usize,
    pub force: bool,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            workers: 1,
            force: false,
        }
    }
}

/// Classifies all `2^(p^d)` subsets of the group and collects every
/// nonempty subset that is spectral but not tiling or vice versa.
pub fn prove_fuglede(params: GroupParams, options: ProveOptions) -> Result<ProofReport> {
    let bound = if options.force {
        FORCED_PROVE_BOUND
    } else {
        DEFAULT_PROVE_BOUND
    };
    let order = params.ensure_order_at_most(bound)?;
    let cost_warning = (order > DEFAULT_PROVE_BOUND)
        .then(|| format!("classifying 2^{order} subsets; this may take a very long time"));
    let index = ElementIndex::new(params, bound)?;
    let total = 1u64 << order;
    let chunks = total.div_ceil(CHUNK);

    let classify_chunk = |c: u64| -> Vec<ClassificationRecord> {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut members = Vec::with_capacity(order as usize);
        (start..end)
            .map(|id| {
                members.clear();
                members.extend((0..order as usize).filter(|&k| id >> k & 1 == 1));
                let (spectral, tiling) = classify_indexed(&index, &members, 1);
                ClassificationRecord {
                    id: Some(id),
                    size: members.len(),
                    spectral,
                    tiling,
                }
            })
            .collect()
    };

    let records: Vec<ClassificationRecord> = if options.workers <= 1 {
        (0..chunks).flat_map(classify_chunk).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| Error::Parameter(format!("cannot start {} workers: {e}", options.workers)))?;
        let parts: Vec<Vec<ClassificationRecord>> =
            pool.install(|| (0..chunks).into_par_iter().map(classify_chunk).collect());
        parts.into_iter().flatten().collect()
    };

    let mut counts: BTreeMap<(usize, bool, bool), u64> = BTreeMap::new();
    for r in &records {
        *counts.entry((r.size, r.spectral, r.tiling)).or_default() += 1;
    }
    let discrepancies = records
        .iter()
        .filter(|r| r.size > 0 && r.spectral != r.tiling)
        .copied()
        .collect();
    Ok(ProofReport {
        params,
        total_subsets: total,
        counts: counts
            .into_iter()
            .map(|((size, spectral, tiling), count)| ClassCount {
                size,
                spectral,
                tiling,
                count,
            })
            .collect(),
        discrepancies,
        cost_warning,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeViolation {
    pub size: usize,
    pub count: u64,
    pub rule: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeAudit {
    /// Distinct sizes of nonempty spectral sets in the report.
    pub spectral_sizes: Vec<usize>,
    pub violations: Vec<SizeViolation>,
    pub pass: bool,
}

/// Sizes a nonempty spectral set may have: 1, `p^d`, or `kp` with
/// `1 <= k <= p^(d-2)`; for p = 2 additionally 1, 2 or a multiple of 4.
pub fn size_rules(params: GroupParams, size: usize) -> Vec<&'static str> {
    let p = params.p() as u128;
    let d = params.d() as u32;
    let size = size as u128;
    let full = p.checked_pow(d);
    let mut broken = Vec::new();
    let general = size == 1
        || Some(size) == full
        || (d >= 2 && size % p == 0 && p.checked_pow(d - 2).is_none_or(|cap| size / p <= cap));
    if !general {
        broken.push("size in {1, p^d} or kp with 1 <= k <= p^(d-2)");
    }
    if p == 2 && !(size == 1 || size == 2 || size % 4 == 0) {
        broken.push("p = 2: size in {1, 2} or a multiple of 4");
    }
    broken
}

pub fn audit_size_restrictions(report: &ProofReport) -> SizeAudit {
    let mut spectral_sizes = Vec::new();
    let mut violations = Vec::new();
    for c in report.counts.iter().filter(|c| c.spectral && c.size > 0) {
        if spectral_sizes.last() != Some(&c.size) {
            spectral_sizes.push(c.size);
        }
        for rule in size_rules(report.params, c.size) {
            violations.push(SizeViolation {
                size: c.size,
                count: c.count,
                rule,
            });
        }
    }
    let pass = violations.is_empty();
    SizeAudit {
        spectral_sizes,
        violations,
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoCase {
    pub name: &'static str,
    pub set: PointSet,
    pub partner: PointSet,
    pub affine_dimension: usize,
    pub tiles: bool,
    pub partner_is_subspace: bool,
    pub dual_is_spectrum: bool,
    pub searched_subspace_partner: Option<Subspace>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneDemo {
    pub cases: Vec<DemoCase>,
    pub pass: bool,
}

/// Dimension of the smallest affine subspace containing `set`.
pub fn affine_dimension(set: &PointSet) -> Result<usize> {
    let Some(first) = set.iter().next() else {
        return Ok(0);
    };
    let diffs: Vec<GroupVector> = set.iter().map(|v| v - first).collect();
    Ok(Subspace::span(set.params(), &diffs)?.dim())
}

fn closed_under_addition(set: &PointSet) -> bool {
    set.contains(&GroupVector::zero(set.params()))
        && set.iter().all(|x| set.iter().all(|y| set.contains(&(x + y))))
}

fn demo_case(name: &'static str, set: PointSet, partner: PointSet, limits: &SearchLimits) -> Result<DemoCase> {
    let params = set.params();
    let tiles = is_tiling_pair(&set, &partner)?;
    let partner_is_subspace = closed_under_addition(&partner);
    let w = Subspace::span(params, &partner.to_vec())?;
    let dual_is_spectrum = partner_is_subspace && tiling::dual_is_spectrum(&set, &w, limits)?;
    let audit = tiling::audit_subspace_dual(&set, limits)?;
    let affine_dimension = affine_dimension(&set)?;
    let pass = tiles && partner_is_subspace && dual_is_spectrum && audit.applicable && audit.pass;
    Ok(DemoCase {
        name,
        set,
        partner,
        affine_dimension,
        tiles,
        partner_is_subspace,
        dual_is_spectrum,
        searched_subspace_partner: audit.partner,
        pass,
    })
}

/// The two size-4 configurations in (Z/2Z)^4: a plane, and four points in
/// general position with its explicit subspace partner.
pub fn canonical_plane_demo() -> Result<PlaneDemo> {
    let g = GroupParams::new(2, 4)?;
    let limits = SearchLimits::default();
    let plane = PointSet::from_rows(g, &[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 1, 0, 0]])?;
    let complement = PointSet::from_rows(g, &[&[0, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 1, 1]])?;
    let general = PointSet::from_rows(g, &[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]])?;
    let partner = PointSet::from_rows(g, &[&[0, 0, 0, 0], &[0, 0, 0, 1], &[1, 1, 1, 0], &[1, 1, 1, 1]])?;
    let a = demo_case("plane", plane, complement, &limits)?;
    let mut b = demo_case("non_planar", general, partner, &limits)?;
    b.pass &= b.affine_dimension == 3;
    let pass = a.pass && a.affine_dimension == 2 && b.pass;
    Ok(PlaneDemo {
        cases: vec![a, b],
        pass,
    })
}

/// Uniformly random nonempty subset of the group.
pub fn random_subset<R: Rng + ?Sized>(index: &ElementIndex, rng: &mut R) -> PointSet {
    loop {
        let members: Vec<usize> = (0..index.order()).filter(|_| rng.gen_bool(0.5)).collect();
        if !members.is_empty() {
            return index.to_point_set(&members);
        }
    }
}

/// A random subspace W and a random complete set of coset representatives
/// E of W, so that E tiles with W.
pub fn random_subspace_tiling<R: Rng + ?Sized>(
    index: &ElementIndex,
    limits: &SearchLimits,
    rng: &mut R,
) -> Result<(PointSet, Subspace)> {
    let params = index.params();
    let k = rng.gen_range(0..=params.d());
    let subspaces: Vec<Subspace> = enumerate_subspaces(params, k, limits.max_subspaces)?.collect();
    let w = subspaces
        .choose(rng)
        .cloned()
        .ok_or_else(|| Error::Consistency("no subspaces enumerated".into()))?;
    let reps_needed = index.order() / w.cardinality().unwrap_or(1) as usize;
    let mut order: Vec<usize> = (0..index.order()).collect();
    order.shuffle(rng);
    let mut reps: Vec<GroupVector> = Vec::with_capacity(reps_needed);
    for k in order {
        let x = index.vector(k);
        if reps.iter().all(|y| !w.contains(&(&x - y))) {
            reps.push(x);
            if reps.len() == reps_needed {
                break;
            }
        }
    }
    Ok((PointSet::new(params, reps)?, w))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitMismatch {
    pub set: PointSet,
    pub image: PointSet,
    pub before: (bool, bool),
    pub after: (bool, bool),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub samples: usize,
    pub mismatches: Vec<OrbitMismatch>,
    pub pass: bool,
}

/// Samples random (E, M) pairs and checks that classification is unchanged
/// under E -> M E for invertible M.
pub fn orbit_consistency<R: Rng + ?Sized>(
    params: GroupParams,
    samples: usize,
    limits: &SearchLimits,
    rng: &mut R,
) -> Result<OrbitReport> {
    let index = ElementIndex::new(params, limits.max_group_order)?;
    let mut mismatches = Vec::new();
    for _ in 0..samples {
        let set = random_subset(&index, rng);
        let m = FpMatrix::random_invertible(params, rng);
        let image = apply_map(&m, &set)?;
        let before = classify_set(&set, limits)?;
        let after = classify_set(&image, limits)?;
        if (before.spectral, before.tiling) != (after.spectral, after.tiling) {
            mismatches.push(OrbitMismatch {
                set,
                image,
                before: (before.spectral, before.tiling),
                after: (after.spectral, after.tiling),
            });
        }
    }
    let pass = mismatches.is_empty();
    Ok(OrbitReport {
        samples,
        mismatches,
        pass,
    })
}
