//! Linear algebra over F_p: square matrices acting on (Z/pZ)^d, and
//! subspaces in canonical reduced row echelon form.

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{GroupParams, GroupVector, PointSet};
use crate::residue;

/// A d x d matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    params: GroupParams,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn new(params: GroupParams, rows: &[&[i64]]) -> Result<Self> {
        let d = params.d();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Parameter(format!("matrix must be {d}x{d}")));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| residue::reduce(x, params.p())))
            .collect();
        Ok(FpMatrix { params, entries })
    }

    pub fn identity(params: GroupParams) -> Self {
        let d = params.d();
        let mut entries = vec![0; d * d];
        for k in 0..d {
            entries[k * d + k] = 1;
        }
        FpMatrix { params, entries }
    }

    /// Matrix permuting coordinates: output coordinate `k` is input coordinate `perm[k]`.
    pub fn permutation(params: GroupParams, perm: &[usize]) -> Result<Self> {
        let d = params.d();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&c| c >= d || std::mem::replace(&mut seen[c], true)) {
            return Err(Error::Parameter("not a permutation of the coordinates".into()));
        }
        let mut entries = vec![0; d * d];
        for (row, &col) in perm.iter().enumerate() {
            entries[row * d + col] = 1;
        }
        Ok(FpMatrix { params, entries })
    }

    pub fn random<R: Rng + ?Sized>(params: GroupParams, rng: &mut R) -> Self {
        let d = params.d();
        let entries = (0..d * d).map(|_| rng.gen_range(0..params.p())).collect();
        FpMatrix { params, entries }
    }

    /// Rejection-samples a uniformly random invertible matrix.
    pub fn random_invertible<R: Rng + ?Sized>(params: GroupParams, rng: &mut R) -> Self {
        loop {
            let m = Self::random(params, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.params.d() + col]
    }

    fn rows(&self) -> Vec<Vec<u32>> {
        self.entries
            .chunks(self.params.d())
            .map(<[u32]>::to_vec)
            .collect()
    }

    pub fn determinant(&self) -> u32 {
        let p = self.params.p();
        let d = self.params.d();
        let mut m = self.rows();
        let mut det = 1u32;
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| m[r][col] != 0) else {
                return 0;
            };
            if pivot != col {
                m.swap(pivot, col);
                det = residue::neg(det, p);
            }
            det = residue::mul(det, m[col][col], p);
            let inv = residue::inv(m[col][col], p).expect("nonzero pivot");
            for r in col + 1..d {
                let factor = residue::mul(m[r][col], inv, p);
                if factor != 0 {
                    for c in col..d {
                        let sub = residue::mul(factor, m[col][c], p);
                        m[r][c] = residue::sub(m[r][c], sub, p);
                    }
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.determinant() != 0
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<FpMatrix> {
        let p = self.params.p();
        let d = self.params.d();
        let mut aug: Vec<Vec<u32>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(r, mut row)| {
                row.extend((0..d).map(|c| u32::from(c == r)));
                row
            })
            .collect();
        let pivots = rref_rows(&mut aug, p, d);
        if pivots.len() < d {
            return Err(Error::SingularMatrix { p });
        }
        let entries = aug.iter().flat_map(|row| row[d..].iter().copied()).collect();
        Ok(FpMatrix {
            params: self.params,
            entries,
        })
    }

    pub fn mul_vector(&self, v: &GroupVector) -> Result<GroupVector> {
        self.params.ensure_same(&v.params())?;
        let p = self.params.p();
        let coords = self
            .entries
            .chunks(self.params.d())
            .map(|row| residue::dot(row, v.coords(), p))
            .collect();
        Ok(GroupVector::from_reduced(self.params, coords))
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.params.ensure_same(&other.params)?;
        let p = self.params.p();
        let d = self.params.d();
        let mut entries = vec![0u32; d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = 0;
                for k in 0..d {
                    acc = residue::add(acc, residue::mul(self.entry(r, k), other.entry(k, c), p), p);
                }
                entries[r * d + c] = acc;
            }
        }
        Ok(FpMatrix {
            params: self.params,
            entries,
        })
    }
}

/// `{ M v : v in set }`. Singular maps are rejected because they do not
/// preserve tiling or spectral status.
pub fn apply_map(m: &FpMatrix, set: &PointSet) -> Result<PointSet> {
    m.params.ensure_same(&set.params())?;
    if !m.is_invertible() {
        return Err(Error::SingularMatrix { p: m.params.p() });
    }
    let image = set
        .iter()
        .map(|v| m.mul_vector(v))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(set.params(), image)
}

/// Row-reduces `rows` in place using the first `ncols` columns for pivots,
/// drops zero rows and returns the pivot columns.
fn rref_rows(rows: &mut Vec<Vec<u32>>, p: u32, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        let Some(found) = (next..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next, found);
        let inv = residue::inv(rows[next][col], p).expect("nonzero pivot");
        for x in rows[next].iter_mut() {
            *x = residue::mul(*x, inv, p);
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row[col] != 0 {
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = residue::sub(*x, residue::mul(factor, y, p), p);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    pivots
}

/// A linear subspace of (Z/pZ)^d, stored as its unique RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    params: GroupParams,
    basis: Vec<GroupVector>,
}

impl Subspace {
    /// Span of arbitrary generators.
    pub fn span<'a, I>(params: GroupParams, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a GroupVector>,
    {
        let mut rows = Vec::new();
        for g in generators {
            params.ensure_same(&g.params())?;
            rows.push(g.coords().to_vec());
        }
        Ok(Self::from_rows(params, rows))
    }

    fn from_rows(params: GroupParams, mut rows: Vec<Vec<u32>>) -> Self {
        rref_rows(&mut rows, params.p(), params.d());
        let basis = rows
            .into_iter()
            .map(|r| GroupVector::from_reduced(params, r))
            .collect();
        Subspace { params, basis }
    }

    pub fn zero(params: GroupParams) -> Self {
        Subspace {
            params,
            basis: Vec::new(),
        }
    }

    pub fn full(params: GroupParams) -> Self {
        let basis = (0..params.d()).map(|k| GroupVector::unit(params, k)).collect();
        Subspace { params, basis }
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn basis(&self) -> &[GroupVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `p^dim`, or `None` on overflow.
    pub fn cardinality(&self) -> Option<u64> {
        u64::from(self.params.p()).checked_pow(self.dim() as u32)
    }

    pub fn contains(&self, v: &GroupVector) -> bool {
        if v.params() != self.params {
            return false;
        }
        let mut rows: Vec<Vec<u32>> = self.basis.iter().map(|b| b.coords().to_vec()).collect();
        rows.push(v.coords().to_vec());
        rref_rows(&mut rows, self.params.p(), self.params.d()).len() == self.dim()
    }

    /// Every element of the subspace, guarded by `limit` on the cardinality.
    pub fn elements(&self, limit: u64) -> Result<PointSet> {
        let count = self.cardinality().filter(|&c| c <= limit).ok_or_else(|| Error::Infeasible {
            what: format!("subspace cardinality {}^{}", self.params.p(), self.dim()),
            count: self.cardinality().map_or(u128::MAX, u128::from),
            limit: u128::from(limit),
        })?;
        let p = self.params.p();
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0u32; self.dim()];
        loop {
            let mut acc = GroupVector::zero(self.params);
            for (b, &c) in self.basis.iter().zip(&digits) {
                if c != 0 {
                    acc = &acc + &b.scale(c);
                }
            }
            out.push(acc);
            // odometer over coefficient tuples
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return PointSet::new(self.params, out);
                }
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    /// `{ a : a . w = 0 for all w in self }`.
    pub fn perp(&self) -> Subspace {
        let p = self.params.p();
        let d = self.params.d();
        let rows: Vec<&[u32]> = self.basis.iter().map(GroupVector::coords).collect();
        let pivots: Vec<usize> = rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
            .collect();
        let mut kernel = Vec::with_capacity(d - pivots.len());
        for free in (0..d).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; d];
            v[free] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = residue::neg(row[free], p);
            }
            kernel.push(v);
        }
        Self::from_rows(self.params, kernel)
    }
}

impl serde::Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Subspace", 2)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}

/// Number of k-dimensional subspaces of F_p^d, saturating at `u128::MAX`.
pub fn gaussian_binomial(p: u32, d: usize, k: usize) -> u128 {
    if k > d {
        return 0;
    }
    let p = u128::from(p);
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = p.checked_pow((d - i) as u32).map(|x| x - 1);
        let den = p.pow((i + 1) as u32) - 1;
        match num.and_then(|n| acc.checked_mul(n)) {
            Some(x) => acc = x / den,
            None => return u128::MAX,
        }
    }
    acc
}

/// Default cap on the number of subspaces [`enumerate_subspaces`] will produce.
pub const DEFAULT_SUBSPACE_LIMIT: u128 = 1_000_000;

/// Streams every k-dimensional subspace exactly once, by walking pivot
/// patterns and the free entries of their RREF matrices.
pub fn enumerate_subspaces(params: GroupParams, k: usize, limit: u128) -> Result<SubspaceIter> {
    if k > params.d() {
        return Err(Error::Parameter(format!(
            "subspace dimension {k} exceeds rank {}",
            params.d()
        )));
    }
    let count = gaussian_binomial(params.p(), params.d(), k);
    if count > limit {
        return Err(Error::Infeasible {
            what: format!(
                "number of {k}-dimensional subspaces of F_{}^{} (Gaussian binomial)",
                params.p(),
                params.d()
            ),
            count,
            limit,
        });
    }
    let mut it = SubspaceIter {
        params,
        pivots: (0..k).collect(),
        free: Vec::new(),
        values: Vec::new(),
        done: false,
    };
    it.reset_free();
    Ok(it)
}

pub struct SubspaceIter {
    params: GroupParams,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    values: Vec<u32>,
    done: bool,
}

impl SubspaceIter {
    fn reset_free(&mut self) {
        let d = self.params.d();
        self.free = self
            .pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let pivots = &self.pivots;
                (pc + 1..d)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        self.values = vec![0; self.free.len()];
    }

    fn next_pivots(&mut self) -> bool {
        let k = self.pivots.len();
        let d = self.params.d();
        for i in (0..k).rev() {
            if self.pivots[i] < d - k + i {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Subspace {
        let d = self.params.d();
        let mut rows = vec![vec![0u32; d]; self.pivots.len()];
        for (r, &pc) in self.pivots.iter().enumerate() {
            rows[r][pc] = 1;
        }
        for (&(r, c), &v) in self.free.iter().zip(&self.values) {
            rows[r][c] = v;
        }
        Subspace {
            params: self.params,
            basis: rows
                .into_iter()
                .map(|r| GroupVector::from_reduced(self.params, r))
                .collect(),
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let out = self.current();
        let p = self.params.p();
        let mut k = 0;
        loop {
            if k == self.values.len() {
                if self.next_pivots() {
                    self.reset_free();
                } else {
                    self.done = true;
                }
                break;
            }
            self.values[k] += 1;
            if self.values[k] < p {
                break;
            }
            self.values[k] = 0;
            k += 1;
        }
        Some(out)
    }
}
