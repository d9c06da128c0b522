//! Dense linear algebra over `F_q` and canonical subspaces.

use crate::error::{Error, Result};
use crate::gf::{Elem, FqField};

/// Dense row-major matrix over `F_q`. The field is passed to each operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl FqMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries must fill a {rows}x{cols} matrix");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn add(&self, f: &FqField, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, f: &FqField, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, f: &FqField, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, f: &FqField, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(())
    }

    /// Reduced row echelon form (same shape, zero rows last) and rank.
    pub fn rref(&self, f: &FqField) -> (Self, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place(f, None);
        (m, rank)
    }

    /// Eliminates in place; records pivot columns if asked. Returns the rank.
    fn rref_in_place(&mut self, f: &FqField, mut pivots: Option<&mut Vec<usize>>) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in c..cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..cols {
                    let v = f.add(self.get(i, j), f.mul(nf, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            if let Some(p) = pivots.as_deref_mut() {
                p.push(c);
            }
            r += 1;
        }
        r
    }

    pub fn rank(&self, f: &FqField) -> usize {
        self.clone().rref_in_place(f, None)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self, f: &FqField) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let mut pivots = Vec::new();
        aug.rref_in_place(f, Some(&mut pivots));
        if pivots.iter().take_while(|&&c| c < n).count() < n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    /// Right null space `{v : self * v = 0}` as a subspace of `F_q^cols`.
    pub fn kernel(&self, f: &FqField) -> Subspace {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let rank = m.rref_in_place(f, Some(&mut pivots));
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0 as Elem; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = f.neg(m.get(r, fc));
            }
            basis.push(v);
        }
        Subspace::span(f, self.cols, &basis)
    }
}

/// `rank(a - b)`, the rank-metric distance.
pub fn rank_distance(f: &FqField, a: &FqMatrix, b: &FqMatrix) -> Result<usize> {
    Ok(a.sub(f, b)?.rank(f))
}

/// A subspace of `F_q^ambient`, stored canonically as the RREF of a basis
/// (one basis vector per row, no zero rows).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: FqMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: FqMatrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: FqMatrix::identity(ambient) }
    }

    /// Span of the given vectors (any number, possibly dependent).
    pub fn span(f: &FqField, ambient: usize, vectors: &[Vec<Elem>]) -> Self {
        let m = FqMatrix::from_rows(ambient, vectors);
        Self::from_matrix_rows(f, &m)
    }

    /// Row space of `m`.
    pub fn from_matrix_rows(f: &FqField, m: &FqMatrix) -> Self {
        let (r, rank) = m.rref(f);
        let data = r.data[..rank * m.cols].to_vec();
        Self { ambient: m.cols, basis: FqMatrix::new(rank, m.cols, data) }
    }

    /// Column space of `m`.
    pub fn from_matrix_columns(f: &FqField, m: &FqMatrix) -> Self {
        Self::from_matrix_rows(f, &m.transpose())
    }

    /// Wraps a matrix that is already in RREF with no zero rows.
    pub(crate) fn from_rref_unchecked(basis: FqMatrix) -> Self {
        Self { ambient: basis.cols, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.dim()).map(move |r| self.basis.row(r))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    fn stacked(&self, other: &Self) -> FqMatrix {
        let mut data = self.basis.data.clone();
        data.extend_from_slice(&other.basis.data);
        FqMatrix::new(self.dim() + other.dim(), self.ambient, data)
    }

    pub fn sum(&self, f: &FqField, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_matrix_rows(f, &self.stacked(other)))
    }

    /// Intersection from the left kernel of the stacked bases.
    pub fn intersection(&self, f: &FqField, other: &Self) -> Result<Self> {
        self.check(other)?;
        let stacked = self.stacked(other);
        let relations = stacked.transpose().kernel(f);
        let d = self.dim();
        let vectors: Vec<Vec<Elem>> = relations
            .basis_vectors()
            .map(|coef| {
                let mut v = vec![0 as Elem; self.ambient];
                for (i, &c) in coef[..d].iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (vj, &bj) in v.iter_mut().zip(self.basis.row(i)) {
                        *vj = f.add(*vj, f.mul(c, bj));
                    }
                }
                v
            })
            .collect();
        Ok(Self::span(f, self.ambient, &vectors))
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, f: &FqField, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.stacked(other).rank(f) == self.dim())
    }

    pub fn contains_vector(&self, f: &FqField, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut data = self.basis.data.clone();
        data.extend_from_slice(v);
        FqMatrix::new(self.dim() + 1, self.ambient, data).rank(f) == self.dim()
    }

    /// Sum, intersection and containment (`b ⊆ a`) in one call.
    pub fn lattice_ops(f: &FqField, a: &Self, b: &Self) -> Result<LatticeOps> {
        Ok(LatticeOps { sum: a.sum(f, b)?, intersection: a.intersection(f, b)?, contains: a.contains(f, b)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeOps {
    pub sum: Subspace,
    pub intersection: Subspace,
    pub contains: bool,
}

/// Calls `visit` on every `dim`-dimensional subspace of `F_q^ambient`, in
/// order of pivot sets (lexicographic) and then free entries.
pub fn for_each_subspace(f: &FqField, ambient: usize, dim: usize, mut visit: impl FnMut(Subspace)) {
    if dim > ambient {
        return;
    }
    let q = f.q() as u64;
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // free positions: (row r, col c) with c > pivots[r] and c not a pivot
        let mut free = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..ambient {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let count = q.pow(free.len() as u32);
        for mut idx in 0..count {
            let mut m = FqMatrix::zeros(dim, ambient);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, 1);
            }
            for &(r, c) in free.iter().rev() {
                m.set(r, c, (idx % q) as Elem);
                idx /= q;
            }
            visit(Subspace::from_rref_unchecked(m));
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < ambient - dim + i {
                pivots[i] += 1;
                for j in i + 1..dim {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(q: u32) -> FqField {
        FqField::new(q).unwrap()
    }

    fn e(ambient: usize, i: usize) -> Vec<Elem> {
        let mut v = vec![0; ambient];
        v[i] = 1;
        v
    }

    #[test]
    fn rref_examples() {
        let f2 = f(2);
        let (r, rank) = FqMatrix::zeros(2, 2).rref(&f2);
        assert_eq!((r, rank), (FqMatrix::zeros(2, 2), 0));
        let (r, rank) = FqMatrix::identity(3).rref(&f2);
        assert_eq!((r, rank), (FqMatrix::identity(3), 3));
        let (r, rank) = FqMatrix::new(2, 2, vec![1, 1, 1, 1]).rref(&f2);
        assert_eq!((r, rank), (FqMatrix::new(2, 2, vec![1, 1, 0, 0]), 1));
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2, 3, 4, 9] {
            let fq = f(q);
            for _ in 0..20 {
                let m = FqMatrix::new(3, 3, (0..9).map(|_| rng.gen_range(0..q) as Elem).collect());
                match m.inverse(&fq) {
                    Some(inv) => assert_eq!(m.mul(&fq, &inv).unwrap(), FqMatrix::identity(3)),
                    None => assert!(m.rank(&fq) < 3),
                }
            }
        }
    }

    #[test]
    fn rref_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 4, 5] {
            let fq = f(q);
            for _ in 0..200 {
                let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..6));
                let m = FqMatrix::new(r, c, (0..r * c).map(|_| rng.gen_range(0..q) as Elem).collect());
                let (once, k1) = m.rref(&fq);
                let (twice, k2) = once.rref(&fq);
                assert_eq!(once, twice);
                assert_eq!(k1, k2);
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let f2 = f(2);
        assert_eq!(FqMatrix::identity(3).kernel(&f2).dim(), 0);
        assert_eq!(FqMatrix::zeros(2, 3).kernel(&f2), Subspace::full(3));
        let k = FqMatrix::new(2, 3, vec![1, 1, 0, 0, 1, 1]).kernel(&f2);
        assert_eq!(k, Subspace::span(&f2, 3, &[vec![1, 1, 1]]));
    }

    #[test]
    fn rank_nullity_exhaustive() {
        for q in [2u32, 3] {
            let fq = f(q);
            for (r, c) in [(2usize, 2usize), (2, 3)] {
                let total = (q as u64).pow((r * c) as u32);
                for mut idx in 0..total {
                    let data = (0..r * c)
                        .map(|_| {
                            let d = (idx % q as u64) as Elem;
                            idx /= q as u64;
                            d
                        })
                        .collect();
                    let m = FqMatrix::new(r, c, data);
                    let ker = m.kernel(&fq);
                    assert_eq!(m.rank(&fq) + ker.dim(), c);
                    for v in ker.basis_vectors() {
                        assert!(m.mul_vec(&fq, v).iter().all(|&x| x == 0));
                    }
                }
            }
        }
    }

    #[test]
    fn rank_distance_examples() {
        let f2 = f(2);
        let a = FqMatrix::new(2, 2, vec![1, 0, 1, 1]);
        assert_eq!(rank_distance(&f2, &a, &a).unwrap(), 0);
        let b = a.sub(&f2, &FqMatrix::identity(2)).unwrap();
        assert_eq!(rank_distance(&f2, &a, &b).unwrap(), 2);
        let c = a.sub(&f2, &FqMatrix::new(2, 2, vec![1, 0, 1, 0])).unwrap();
        assert_eq!(rank_distance(&f2, &a, &c).unwrap(), 1);
        assert!(matches!(rank_distance(&f2, &a, &FqMatrix::zeros(2, 3)), Err(Error::ShapeMismatch(..))));
    }

    #[test]
    fn lattice_examples() {
        let f2 = f(2);
        let a = Subspace::span(&f2, 3, &[e(3, 0), e(3, 1)]);
        let ops = Subspace::lattice_ops(&f2, &a, &a).unwrap();
        assert_eq!((ops.sum, ops.intersection, ops.contains), (a.clone(), a.clone(), true));

        let l1 = Subspace::span(&f2, 2, &[vec![1, 0]]);
        let l2 = Subspace::span(&f2, 2, &[vec![1, 1]]);
        let ops = Subspace::lattice_ops(&f2, &l1, &l2).unwrap();
        assert_eq!(ops.sum, Subspace::full(2));
        assert_eq!(ops.intersection.dim(), 0);
        assert!(!ops.contains);

        let b = Subspace::span(&f2, 3, &[e(3, 1), e(3, 2)]);
        assert_eq!(a.intersection(&f2, &b).unwrap(), Subspace::span(&f2, 3, &[e(3, 1)]));
        assert_eq!(a.sum(&f2, &Subspace::zero(4)), Err(Error::AmbientMismatch(3, 4)));
    }

    #[test]
    fn modular_law_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2, 3, 4, 5] {
            let fq = f(q);
            for _ in 0..1000 {
                let amb = rng.gen_range(2..7);
                let ka = rng.gen_range(0..=amb);
                let kb = rng.gen_range(0..=amb);
                let mut pick = |k: usize| -> Subspace {
                    let vs: Vec<Vec<Elem>> =
                        (0..k).map(|_| (0..amb).map(|_| rng.gen_range(0..q) as Elem).collect()).collect();
                    Subspace::span(&fq, amb, &vs)
                };
                let (a, b) = (pick(ka), pick(kb));
                let s = a.sum(&fq, &b).unwrap();
                let i = a.intersection(&fq, &b).unwrap();
                assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
                assert!(a.contains(&fq, &i).unwrap() && b.contains(&fq, &i).unwrap());
                assert!(s.contains(&fq, &a).unwrap() && s.contains(&fq, &b).unwrap());
            }
        }
    }

    #[test]
    fn subspace_enumeration_counts() {
        // [4 choose 2]_2 = 35, [3 choose 1]_3 = 13
        let f2 = f(2);
        let mut seen = std::collections::HashSet::new();
        for_each_subspace(&f2, 4, 2, |s| {
            assert_eq!(s.dim(), 2);
            assert_eq!(Subspace::from_matrix_rows(&f2, s.basis()), s);
            seen.insert(s);
        });
        assert_eq!(seen.len(), 35);
        let mut n = 0;
        for_each_subspace(&f(3), 3, 1, |_| n += 1);
        assert_eq!(n, 13);
        let mut n = 0;
        for_each_subspace(&f2, 3, 0, |_| n += 1);
        assert_eq!(n, 1);
    }
}
