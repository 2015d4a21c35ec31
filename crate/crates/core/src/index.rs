//! Dense numbering of the elements of a small group.
//!
//! Element `k` is the k-th vector in lexicographic order, i.e. the base-p
//! number whose most significant digit is the first coordinate. The search
//! routines work on these indices instead of heap-allocated vectors.

use crate::error::{Error, Result};
use crate::group::{GroupParams, GroupVector, PointSet};
use crate::residue;

#[derive(Clone, Debug)]
pub struct ElementIndex {
    params: GroupParams,
    order: usize,
    coords: Vec<u32>,
}

impl ElementIndex {
    /// Tabulates every element; fails when `p^d > limit`.
    pub fn new(params: GroupParams, limit: u64) -> Result<Self> {
        let order = params.ensure_order_at_most(limit)? as usize;
        let (p, d) = (params.p(), params.d());
        let mut coords = vec![0u32; order * d];
        for k in 0..order {
            let mut rest = k;
            for c in (0..d).rev() {
                coords[k * d + c] = (rest % p as usize) as u32;
                rest /= p as usize;
            }
        }
        Ok(ElementIndex {
            params,
            order,
            coords,
        })
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn coords(&self, k: usize) -> &[u32] {
        let d = self.params.d();
        &self.coords[k * d..(k + 1) * d]
    }

    #[inline]
    pub fn encode(&self, coords: &[u32]) -> usize {
        let p = self.params.p() as usize;
        coords.iter().fold(0usize, |acc, &c| acc * p + c as usize)
    }

    #[inline]
    fn combine(&self, a: usize, b: usize, f: impl Fn(u32, u32) -> u32) -> usize {
        let p = self.params.p() as usize;
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .fold(0usize, |acc, (&x, &y)| acc * p + f(x, y) as usize)
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        let p = self.params.p();
        self.combine(a, b, |x, y| residue::add(x, y, p))
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        let p = self.params.p();
        self.combine(a, b, |x, y| residue::sub(x, y, p))
    }

    #[inline]
    pub fn dot(&self, a: usize, b: usize) -> u32 {
        residue::dot(self.coords(a), self.coords(b), self.params.p())
    }

    pub fn vector(&self, k: usize) -> GroupVector {
        GroupVector::from_reduced(self.params, self.coords(k).to_vec())
    }

    pub fn index_of(&self, v: &GroupVector) -> Result<usize> {
        self.params.ensure_same(&v.params())?;
        Ok(self.encode(v.coords()))
    }

    /// Sorted element indices of `set`.
    pub fn indices(&self, set: &PointSet) -> Result<Vec<usize>> {
        self.params.ensure_same(&set.params())?;
        // PointSet iterates lexicographically, which is index order.
        Ok(set.iter().map(|v| self.encode(v.coords())).collect())
    }

    pub fn to_point_set(&self, indices: &[usize]) -> PointSet {
        PointSet::new(self.params, indices.iter().map(|&k| self.vector(k)))
            .expect("indices belong to this group")
    }

    /// Decodes a subset bitmask (bit k = element k).
    pub fn subset_from_mask(&self, mask: u64) -> Result<Vec<usize>> {
        if self.order < 64 && mask >> self.order != 0 {
            return Err(Error::Parameter(format!(
                "subset id {mask} has bits beyond the group order {}",
                self.order
            )));
        }
        Ok((0..self.order.min(64))
            .filter(|&k| mask >> k & 1 == 1)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbering_is_lexicographic() {
        let g = GroupParams::new(3, 2).unwrap();
        let idx = ElementIndex::new(g, 100).unwrap();
        let all: Vec<Vec<u32>> = (0..idx.order()).map(|k| idx.coords(k).to_vec()).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(idx.coords(5), &[1, 2]);
        for k in 0..idx.order() {
            assert_eq!(idx.encode(idx.coords(k)), k);
        }
    }

    #[test]
    fn arithmetic_matches_vectors() {
        let g = GroupParams::new(5, 2).unwrap();
        let idx = ElementIndex::new(g, 100).unwrap();
        for a in 0..idx.order() {
            for b in 0..idx.order() {
                let (va, vb) = (idx.vector(a), idx.vector(b));
                assert_eq!(idx.vector(idx.add(a, b)), &va + &vb);
                assert_eq!(idx.vector(idx.sub(a, b)), &va - &vb);
                assert_eq!(idx.dot(a, b), va.dot(&vb).unwrap());
            }
        }
    }

    #[test]
    fn masks() {
        let g = GroupParams::new(2, 2).unwrap();
        let idx = ElementIndex::new(g, 100).unwrap();
        assert_eq!(idx.subset_from_mask(0b1010).unwrap(), vec![1, 3]);
        assert!(idx.subset_from_mask(0b10000).is_err());
    }
}
