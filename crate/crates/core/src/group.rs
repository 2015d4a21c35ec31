//! Elements and finite subsets of the elementary abelian group (Z/pZ)^d.
//!
//! Coordinates are always stored fully reduced into `[0, p)`, so derived
//! equality, hashing and ordering are the canonical ones. The derived order on
//! vectors of equal parameters is the lexicographic order on coordinates,
//! which is also the order used to number group elements (see [`crate::index`]).

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue;

/// Largest prime modulus accepted by [`GroupParams::new`].
pub const MAX_PRIME: u32 = 10_000;

/// The ambient group (Z/pZ)^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    p: u32,
    d: usize,
}

impl GroupParams {
    pub fn new(p: u32, d: usize) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::Parameter(format!(
                "modulus {p} exceeds the supported bound {MAX_PRIME}"
            )));
        }
        if !residue::is_prime(p) {
            return Err(Error::Parameter(format!("modulus {p} is not prime")));
        }
        if d == 0 {
            return Err(Error::Parameter("rank d must be at least 1".into()));
        }
        Ok(GroupParams { p, d })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// `p^d`, or `None` if it does not fit in a `u64`.
    pub fn order(&self) -> Option<u64> {
        u64::from(self.p).checked_pow(u32::try_from(self.d).ok()?)
    }

    pub(crate) fn ensure_same(&self, other: &GroupParams) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "mismatched groups: (p={}, d={}) vs (p={}, d={})",
                self.p, self.d, other.p, other.d
            )))
        }
    }

    /// Fails with [`Error::Infeasible`] when `p^d` exceeds `limit`.
    pub fn ensure_order_at_most(&self, limit: u64) -> Result<u64> {
        match self.order() {
            Some(n) if n <= limit => Ok(n),
            n => Err(Error::Infeasible {
                what: format!("group order {}^{}", self.p, self.d),
                count: n.map_or(u128::MAX, u128::from),
                limit: u128::from(limit),
            }),
        }
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} d={}", self.p, self.d)
    }
}

/// An element of (Z/pZ)^d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupVector {
    params: GroupParams,
    coords: Vec<u32>,
}

impl GroupVector {
    /// Builds a vector, reducing every coordinate mod p.
    pub fn new(params: GroupParams, coords: Vec<u32>) -> Result<Self> {
        if coords.len() != params.d {
            return Err(Error::Parameter(format!(
                "expected {} coordinates, got {}",
                params.d,
                coords.len()
            )));
        }
        let coords = coords.into_iter().map(|c| c % params.p).collect();
        Ok(GroupVector { params, coords })
    }

    /// Builds a vector from signed integers, reducing mod p.
    pub fn from_ints(params: GroupParams, coords: &[i64]) -> Result<Self> {
        if coords.len() != params.d {
            return Err(Error::Parameter(format!(
                "expected {} coordinates, got {}",
                params.d,
                coords.len()
            )));
        }
        let coords = coords
            .iter()
            .map(|&c| residue::reduce(c, params.p))
            .collect();
        Ok(GroupVector { params, coords })
    }

    pub fn zero(params: GroupParams) -> Self {
        GroupVector {
            params,
            coords: vec![0; params.d],
        }
    }

    /// The k-th standard basis vector (0-based).
    pub fn unit(params: GroupParams, k: usize) -> Self {
        let mut v = Self::zero(params);
        v.coords[k] = 1 % params.p;
        v
    }

    pub(crate) fn from_reduced(params: GroupParams, coords: Vec<u32>) -> Self {
        debug_assert!(coords.len() == params.d && coords.iter().all(|&c| c < params.p));
        GroupVector { params, coords }
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// `a_1 x_1 + ... + a_d x_d mod p`.
    pub fn dot(&self, other: &GroupVector) -> Result<u32> {
        self.params.ensure_same(&other.params)?;
        Ok(residue::dot(&self.coords, &other.coords, self.params.p))
    }

    pub fn scale(&self, c: u32) -> GroupVector {
        let p = self.params.p;
        let coords = self
            .coords
            .iter()
            .map(|&x| residue::mul(x, c % p, p))
            .collect();
        GroupVector::from_reduced(self.params, coords)
    }

    fn zip_with(&self, other: &GroupVector, f: impl Fn(u32, u32) -> u32) -> GroupVector {
        assert_eq!(
            self.params, other.params,
            "vector arithmetic across different groups"
        );
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f(a, b))
            .collect();
        GroupVector::from_reduced(self.params, coords)
    }
}

/// Panics if the operands live in different groups.
impl Add for &GroupVector {
    type Output = GroupVector;

    fn add(self, rhs: &GroupVector) -> GroupVector {
        let p = self.params.p;
        self.zip_with(rhs, |a, b| residue::add(a, b, p))
    }
}

/// Panics if the operands live in different groups.
impl Sub for &GroupVector {
    type Output = GroupVector;

    fn sub(self, rhs: &GroupVector) -> GroupVector {
        let p = self.params.p;
        self.zip_with(rhs, |a, b| residue::sub(a, b, p))
    }
}

impl Neg for &GroupVector {
    type Output = GroupVector;

    fn neg(self) -> GroupVector {
        let p = self.params.p;
        let coords = self.coords.iter().map(|&a| residue::sub(0, a, p)).collect();
        GroupVector::from_reduced(self.params, coords)
    }
}

impl fmt::Display for GroupVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for GroupVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

/// A finite subset of (Z/pZ)^d, kept sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    params: GroupParams,
    elements: BTreeSet<GroupVector>,
}

impl PointSet {
    pub fn empty(params: GroupParams) -> Self {
        PointSet {
            params,
            elements: BTreeSet::new(),
        }
    }

    /// Collects vectors into a set, silently merging duplicates.
    pub fn new<I>(params: GroupParams, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupVector>,
    {
        let mut set = Self::empty(params);
        for v in vectors {
            params.ensure_same(&v.params)?;
            set.elements.insert(v);
        }
        Ok(set)
    }

    /// Like [`PointSet::new`] but rejects duplicate vectors.
    pub fn from_distinct<I>(params: GroupParams, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupVector>,
    {
        let mut set = Self::empty(params);
        for v in vectors {
            params.ensure_same(&v.params)?;
            if set.elements.contains(&v) {
                return Err(Error::Parameter(format!("duplicate vector ({v})")));
            }
            set.elements.insert(v);
        }
        Ok(set)
    }

    /// Convenience constructor from rows of signed integers.
    pub fn from_rows(params: GroupParams, rows: &[&[i64]]) -> Result<Self> {
        let vectors = rows
            .iter()
            .map(|r| GroupVector::from_ints(params, r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, vectors)
    }

    pub fn singleton(v: GroupVector) -> Self {
        let params = v.params;
        let mut elements = BTreeSet::new();
        elements.insert(v);
        PointSet { params, elements }
    }

    /// The whole group, guarded by `limit` on `p^d`.
    pub fn full_space(params: GroupParams, limit: u64) -> Result<Self> {
        let index = crate::index::ElementIndex::new(params, limit)?;
        Ok(index.to_point_set((0..index.order()).collect::<Vec<_>>().as_slice()))
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: &GroupVector) -> bool {
        self.elements.contains(v)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &GroupVector> + '_ {
        self.elements.iter()
    }

    /// `{ x + v : x in self }`.
    pub fn translate(&self, v: &GroupVector) -> Result<PointSet> {
        self.params.ensure_same(&v.params)?;
        Ok(PointSet {
            params: self.params,
            elements: self.elements.iter().map(|x| x + v).collect(),
        })
    }

    pub fn to_vec(&self) -> Vec<GroupVector> {
        self.elements.iter().cloned().collect()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a GroupVector;
    type IntoIter = std::collections::btree_set::Iter<'a, GroupVector>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements.iter())
    }
}
