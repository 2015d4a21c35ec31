//! Naive reference deciders for groups with at most 16 elements.
//!
//! Subsets are bitmasks over the elements in lexicographic order. Nothing here
//! calls into the library's search code: orthogonality is decided from
//! floating-point character sums rather than integer counting vectors, and
//! partners/spectra are found by enumerating every candidate of the right
//! size.

#![allow(dead_code)]

use std::f64::consts::PI;

pub struct SmallGroup {
    pub p: u32,
    pub d: usize,
    pub n: usize,
    coords: Vec<Vec<u32>>,
    add: Vec<Vec<usize>>,
    sub: Vec<Vec<usize>>,
}

impl SmallGroup {
    pub fn new(p: u32, d: usize) -> Self {
        let n = (p as usize).pow(d as u32);
        assert!(n <= 16, "oracle is for tiny groups only");
        let coords: Vec<Vec<u32>> = (0..n)
            .map(|k| {
                let mut v = vec![0u32; d];
                let mut rest = k;
                for c in (0..d).rev() {
                    v[c] = (rest % p as usize) as u32;
                    rest /= p as usize;
                }
                v
            })
            .collect();
        let find = |v: &[u32]| coords.iter().position(|w| w.as_slice() == v).unwrap();
        let op = |f: &dyn Fn(u32, u32) -> u32| -> Vec<Vec<usize>> {
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let v: Vec<u32> = coords[a].iter().zip(&coords[b]).map(|(&x, &y)| f(x, y)).collect();
                            find(&v)
                        })
                        .collect()
                })
                .collect()
        };
        let add = op(&|x, y| (x + y) % p);
        let sub = op(&|x, y| (x + p - y) % p);
        SmallGroup { p, d, n, coords, add, sub }
    }

    pub fn coords(&self, k: usize) -> &[u32] {
        &self.coords[k]
    }

    fn members(mask: u32) -> Vec<usize> {
        (0..32).filter(|&k| mask >> k & 1 == 1).collect()
    }

    fn masks_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
        (0u32..1 << n).filter(move |m| m.count_ones() as usize == k)
    }

    /// Whether some T of size `n / |E|` has every element hit exactly once.
    pub fn tiles(&self, e_mask: u32) -> bool {
        let e = Self::members(e_mask);
        if e.is_empty() || self.n % e.len() != 0 {
            return false;
        }
        Self::masks_of_size(self.n, self.n / e.len()).any(|t_mask| {
            let mut hit = 0u32;
            for t in Self::members(t_mask) {
                for &x in &e {
                    let s = self.add[x][t];
                    if hit >> s & 1 == 1 {
                        return false;
                    }
                    hit |= 1 << s;
                }
            }
            true
        })
    }

    /// `|sum_{e in E} exp(2 pi i <delta, e> / p)| ~ 0`.
    pub fn character_sum_vanishes(&self, delta: usize, e: &[usize]) -> bool {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for &x in e {
            let dot: u32 = self.coords[delta].iter().zip(&self.coords[x]).map(|(a, b)| a * b).sum::<u32>() % self.p;
            let angle = 2.0 * PI * f64::from(dot) / f64::from(self.p);
            re += angle.cos();
            im += angle.sin();
        }
        re.hypot(im) < 1e-9
    }

    /// Whether some A of size |E| has pairwise orthogonal characters on E.
    /// A may be translated to contain 0, so only such A are enumerated.
    pub fn spectral(&self, e_mask: u32) -> bool {
        let e = Self::members(e_mask);
        if e.is_empty() {
            return false;
        }
        let orth: Vec<bool> = (0..self.n).map(|delta| delta != 0 && self.character_sum_vanishes(delta, &e)).collect();
        let pool: Vec<usize> = (1..self.n).filter(|&x| orth[x]).collect();
        let need = e.len() - 1;
        if need > pool.len() {
            return false;
        }
        Self::masks_of_size(pool.len(), need).any(|pick| {
            let a: Vec<usize> = Self::members(pick).into_iter().map(|k| pool[k]).collect();
            a.iter().enumerate().all(|(k, &x)| a[k + 1..].iter().all(|&y| orth[self.sub[x][y]]))
        })
    }
}

/// Every (p, d) with p^d <= 16.
pub const SMALL_GROUPS: [(u32, usize); 10] = [
    (2, 1),
    (2, 2),
    (2, 3),
    (2, 4),
    (3, 1),
    (3, 2),
    (5, 1),
    (7, 1),
    (11, 1),
    (13, 1),
];
