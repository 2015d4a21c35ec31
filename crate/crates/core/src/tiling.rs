//! Translational tilings of (Z/pZ)^d: verification, exact-cover partner
//! search, and subspace partners.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::PointSet;
use crate::index::ElementIndex;
use crate::linalg::{enumerate_subspaces, Subspace};
use crate::spectral::is_spectrum;
use crate::SearchLimits;

/// Whether `{E + t : t in T}` partitions the group.
pub fn is_tiling_pair(set: &PointSet, partner: &PointSet) -> Result<bool> {
    let params = set.params();
    params.ensure_same(&partner.params())?;
    let product = (set.len() as u64).checked_mul(partner.len() as u64);
    if product.is_none() || product != params.order() || set.is_empty() {
        return Ok(false);
    }
    // |E||T| = p^d, so the table is no larger than the inputs' product.
    let mut seen = vec![false; product.unwrap() as usize];
    let p = params.p() as usize;
    for e in set {
        for t in partner {
            let k = e
                .coords()
                .iter()
                .zip(t.coords())
                .fold(0usize, |acc, (&x, &y)| acc * p + (x as usize + y as usize) % p);
            if std::mem::replace(&mut seen[k], true) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilingCertificate {
    pub set: PointSet,
    pub partner: PointSet,
    pub verified: bool,
}

impl TilingCertificate {
    pub fn check(set: PointSet, partner: PointSet) -> Result<Self> {
        let verified = is_tiling_pair(&set, &partner)?;
        Ok(TilingCertificate {
            set,
            partner,
            verified,
        })
    }
}

/// `log_p |E|` when `|E|` divides `p^d`.
pub fn size_exponent(set: &PointSet) -> Option<usize> {
    let p = set.params().p() as usize;
    let mut size = set.len();
    if size == 0 {
        return None;
    }
    let mut k = 0;
    while size % p == 0 {
        size /= p;
        k += 1;
    }
    (size == 1 && k <= set.params().d()).then_some(k)
}

/// Outcome of a partner search, with the number of translates placed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartnerSearch {
    pub found: bool,
    pub partner: Option<PointSet>,
    pub nodes_explored: u64,
}

struct ExactCover<'a> {
    index: &'a ElementIndex,
    set: &'a [usize],
}

impl ExactCover<'_> {
    /// Translates covering `u`, in ascending order.
    fn translates_through(&self, u: usize) -> Vec<usize> {
        let mut ts: Vec<usize> = self.set.iter().map(|&e| self.index.sub(u, e)).collect();
        ts.sort_unstable();
        ts
    }

    fn place(&self, covered: &mut [bool], t: usize) -> bool {
        let cells: Vec<usize> = self.set.iter().map(|&e| self.index.add(e, t)).collect();
        if cells.iter().any(|&c| covered[c]) {
            return false;
        }
        for c in cells {
            covered[c] = true;
        }
        true
    }

    fn unplace(&self, covered: &mut [bool], t: usize) {
        for &e in self.set {
            covered[self.index.add(e, t)] = false;
        }
    }

    /// Places `t`, then covers the rest always branching on the least
    /// uncovered element.
    fn branch(&self, covered: &mut [bool], partner: &mut Vec<usize>, t: usize, from: usize, nodes: &mut u64) -> bool {
        if !self.place(covered, t) {
            return false;
        }
        *nodes += 1;
        partner.push(t);
        let Some(u) = (from..covered.len()).find(|&x| !covered[x]) else {
            return true;
        };
        for next in self.translates_through(u) {
            if self.branch(covered, partner, next, u + 1, nodes) {
                return true;
            }
        }
        partner.pop();
        self.unplace(covered, t);
        false
    }

    fn run_top_branch(&self, t: usize) -> (Option<Vec<usize>>, u64) {
        let mut covered = vec![false; self.index.order()];
        let mut partner = Vec::new();
        let mut nodes = 0;
        let found = self.branch(&mut covered, &mut partner, t, 1, &mut nodes);
        (found.then_some(partner), nodes)
    }
}

/// Index-level partner search. Returns the partner (in discovery order) and
/// the node count.
pub fn find_partner_indexed(index: &ElementIndex, set: &[usize], workers: usize) -> (Option<Vec<usize>>, u64) {
    if set.is_empty() || index.order() % set.len() != 0 {
        return (None, 0);
    }
    let cover = ExactCover { index, set };
    let top = cover.translates_through(0);
    let mut nodes = 0;
    if workers <= 1 {
        for t in top {
            let (found, n) = cover.run_top_branch(t);
            nodes += n;
            if found.is_some() {
                return (found, nodes);
            }
        }
        return (None, nodes);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let branches: Vec<(Option<Vec<usize>>, u64)> =
        pool.install(|| top.par_iter().map(|&t| cover.run_top_branch(t)).collect());
    for (found, n) in branches {
        nodes += n;
        if found.is_some() {
            return (found, nodes);
        }
    }
    (None, nodes)
}

/// Exact-cover search for a tiling partner of E. Sets whose size does not
/// divide `p^d` are rejected before any search or size guard.
pub fn tiling_partner_search(set: &PointSet, limits: &SearchLimits) -> Result<PartnerSearch> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let none = PartnerSearch {
        found: false,
        partner: None,
        nodes_explored: 0,
    };
    if size_exponent(set).is_none() {
        return Ok(none);
    }
    let index = ElementIndex::new(set.params(), limits.max_group_order)?;
    let members = index.indices(set)?;
    let (partner, nodes_explored) = find_partner_indexed(&index, &members, limits.workers);
    Ok(PartnerSearch {
        found: partner.is_some(),
        partner: partner.map(|t| index.to_point_set(&t)),
        nodes_explored,
    })
}

pub fn find_tiling_partner(set: &PointSet, limits: &SearchLimits) -> Result<Option<PointSet>> {
    Ok(tiling_partner_search(set, limits)?.partner)
}

/// First subspace W (in enumeration order) with `E + W` a tiling.
/// Absent when `|E|` is not a power of p dividing `p^d`.
pub fn find_subspace_partner(set: &PointSet, limits: &SearchLimits) -> Result<Option<Subspace>> {
    let Some(k) = size_exponent(set) else {
        return Ok(None);
    };
    let params = set.params();
    let order = params.ensure_order_at_most(limits.max_group_order)?;
    for w in enumerate_subspaces(params, params.d() - k, limits.max_subspaces)? {
        if is_tiling_pair(set, &w.elements(order)?)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// `W^perp` as a point set, checked as a spectrum of E.
pub fn dual_is_spectrum(set: &PointSet, partner: &Subspace, limits: &SearchLimits) -> Result<bool> {
    is_spectrum(&partner.perp().elements(limits.max_group_order)?, set)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceAudit {
    pub applicable: bool,
    pub partner: Option<Subspace>,
    pub dual: Option<Subspace>,
    pub dual_is_spectrum: Option<bool>,
    pub pass: bool,
}

/// When E tiles with a subspace W, checks that `W^perp` is a spectrum of E.
pub fn audit_subspace_dual(set: &PointSet, limits: &SearchLimits) -> Result<SubspaceAudit> {
    let Some(w) = find_subspace_partner(set, limits)? else {
        return Ok(SubspaceAudit {
            applicable: false,
            partner: None,
            dual: None,
            dual_is_spectrum: None,
            pass: true,
        });
    };
    let ok = dual_is_spectrum(set, &w, limits)?;
    Ok(SubspaceAudit {
        applicable: true,
        dual: Some(w.perp()),
        partner: Some(w),
        dual_is_spectrum: Some(ok),
        pass: ok,
    })
}
