//! The attenuated space `A_q(n+l, E)` in rank-metric coordinates.
//!
//! `E` is the span of the last `l` coordinates of `F_q^{n+l}`. A vertex (an
//! `n`-space meeting `E` trivially) is the column space of `[I_n; A]` for a
//! unique `l x n` matrix `A`; a point is `<(u; v)>` with `u` normalized.
//! The point `(u, v)` lies on the vertex `A` iff `A u = v`, and
//! `dim(A ∩ B) = n - rank(A - B)`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fqlinalg::{for_each_subspace, FqMatrix, Subspace};
use crate::gf::{Elem, FqField};
use crate::vertexset::VertexSet;

/// Default cap on enumerated objects.
pub const DEFAULT_CAP: u128 = 1 << 20;

/// The parameters `(q, n, l)` with `1 <= n <= l` and the field context.
#[derive(Debug, Clone)]
pub struct SpaceParams {
    q: u32,
    n: usize,
    l: usize,
    field: Arc<FqField>,
    cap: u128,
}

impl PartialEq for SpaceParams {
    fn eq(&self, other: &Self) -> bool {
        (self.q, self.n, self.l) == (other.q, other.n, other.l)
    }
}

impl Eq for SpaceParams {}

impl SpaceParams {
    pub fn new(q: u32, n: usize, l: usize) -> Result<Self> {
        let field = FqField::new(q)?;
        if n == 0 {
            return Err(Error::BadParams("n must be at least 1".into()));
        }
        if n > l {
            return Err(Error::BadParams(format!("n = {n} exceeds l = {l}")));
        }
        Ok(Self { q, n, l, field: Arc::new(field), cap: DEFAULT_CAP })
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + self.l
    }

    pub fn num_vertices_u128(&self) -> u128 {
        (self.q as u128).pow((self.n * self.l) as u32)
    }

    /// `q^{nl}`; panics if it does not fit the cap.
    pub fn num_vertices(&self) -> usize {
        self.check_cap(self.num_vertices_u128()).expect("vertex count exceeds cap");
        self.num_vertices_u128() as usize
    }

    pub fn num_points_u128(&self) -> u128 {
        let q = self.q as u128;
        q.pow(self.l as u32) * ((q.pow(self.n as u32) - 1) / (q - 1))
    }

    pub fn check_cap(&self, required: u128) -> Result<()> {
        if required > self.cap {
            return Err(Error::CapExceeded { required, cap: self.cap });
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("({},{},{})", self.q, self.n, self.l)
    }

    // ---- vertices ---------------------------------------------------------

    /// Vertex with canonical index `idx`: row-major entries of `A`, first entry most significant.
    pub fn vertex(&self, idx: usize) -> Vertex {
        let (n, l) = (self.n, self.l);
        let mut data = vec![0 as Elem; n * l];
        let mut rest = idx;
        for slot in data.iter_mut().rev() {
            *slot = (rest % self.q as usize) as Elem;
            rest /= self.q as usize;
        }
        Vertex { a: FqMatrix::new(l, n, data) }
    }

    pub fn vertex_index(&self, v: &Vertex) -> usize {
        v.a.data().iter().fold(0usize, |acc, &d| acc * self.q as usize + d as usize)
    }

    /// All `q^{nl}` vertices in canonical order.
    pub fn enumerate_vertices(&self) -> Result<Vec<Vertex>> {
        self.check_cap(self.num_vertices_u128())?;
        Ok((0..self.num_vertices_u128() as usize).map(|i| self.vertex(i)).collect())
    }

    /// Vertices in the index range `[start, end)`; any chunking gives the same sequence.
    pub fn vertex_range(&self, start: usize, end: usize) -> impl Iterator<Item = Vertex> + '_ {
        (start..end).map(move |i| self.vertex(i))
    }

    // ---- points -----------------------------------------------------------

    /// All points ordered by the base-`q` key of `(u, v)` (first coordinate most significant).
    pub fn enumerate_points(&self) -> Result<Vec<Point>> {
        self.check_cap(self.num_points_u128())?;
        let q = self.q as u64;
        let mut pts = Vec::with_capacity(self.num_points_u128() as usize);
        for first in 0..self.n {
            // u = (0,..,0,1,*,..,*) with the leading 1 at position `first`
            let tail = self.n - first - 1;
            for ut in 0..q.pow(tail as u32) {
                let mut u = vec![0 as Elem; self.n];
                u[first] = 1;
                digits_into(ut, q, &mut u[first + 1..]);
                for vi in 0..q.pow(self.l as u32) {
                    let mut v = vec![0 as Elem; self.l];
                    digits_into(vi, q, &mut v);
                    pts.push(Point { u: u.clone(), v });
                }
            }
        }
        pts.sort_by_key(|p| self.point_key(p));
        Ok(pts)
    }

    pub fn point_key(&self, p: &Point) -> u64 {
        p.u.iter().chain(&p.v).fold(0u64, |acc, &d| acc * self.q as u64 + d as u64)
    }

    /// Normalizes a nonzero `u` (scaling `v` along) so the first nonzero entry of `u` is 1.
    pub fn normalized_point(&self, u: &[Elem], v: &[Elem]) -> Result<Point> {
        let f = self.field();
        let Some(&lead) = u.iter().find(|&&c| c != 0) else {
            return Err(Error::BadParams("point must meet E trivially (u = 0)".into()));
        };
        let s = f.inv(lead);
        Ok(Point { u: u.iter().map(|&c| f.mul(c, s)).collect(), v: v.iter().map(|&c| f.mul(c, s)).collect() })
    }

    /// Indices of all vertices through `p`, ascending. There are `q^{(n-1)l}`.
    pub fn vertices_through(&self, p: &Point) -> Vec<usize> {
        let f = self.field();
        let (n, l, q) = (self.n, self.l, self.q as u64);
        let j = p.u.iter().position(|&c| c != 0).expect("normalized point");
        let others: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let mut out = Vec::with_capacity(q.pow(((n - 1) * l) as u32) as usize);
        let mut a = FqMatrix::zeros(l, n);
        for idx in 0..q.pow(((n - 1) * l) as u32) {
            let mut rest = idx;
            for &c in others.iter().rev() {
                for r in (0..l).rev() {
                    a.set(r, c, (rest % q) as Elem);
                    rest /= q;
                }
            }
            // column j solves A u = v (u_j = 1)
            for r in 0..l {
                let mut s = p.v[r];
                for &c in &others {
                    s = f.sub(s, f.mul(a.get(r, c), p.u[c]));
                }
                a.set(r, j, s);
            }
            out.push(self.vertex_index(&Vertex { a: a.clone() }));
        }
        out.sort_unstable();
        out
    }

    // ---- typed subspaces --------------------------------------------------

    /// All subspaces `P` of `F_q^{n+l}` with `dim P = m`, `dim(P ∩ E) = k`,
    /// found by scanning every `m`-space.
    pub fn enumerate_typed_subspaces(&self, m: usize, k: usize) -> Result<Vec<Subspace>> {
        let amb = self.ambient_dim();
        if m > amb || k > m.min(self.l) || m - k > self.n {
            return Err(Error::BadIndices(format!("type ({m},{k}) impossible for n={}, l={}", self.n, self.l)));
        }
        self.check_cap(subspace_scan_size(self.q, amb, m))?;
        let f = self.field();
        let mut out = Vec::new();
        for_each_subspace(f, amb, m, |s| {
            if dim_meet_e(f, self.n, &s) == k {
                out.push(s);
            }
        });
        Ok(out)
    }

    /// `dim(P ∩ E)` of a subspace of the ambient space.
    pub fn dim_meet_e(&self, s: &Subspace) -> usize {
        dim_meet_e(self.field(), self.n, s)
    }

    // ---- hyperplanes ------------------------------------------------------

    pub fn hyperplane(&self, a: Vec<Elem>, b: Vec<Elem>) -> Result<TypedHyperplane> {
        if a.len() != self.n || b.len() != self.l {
            return Err(Error::LengthMismatch { expected: self.n + self.l, got: a.len() + b.len() });
        }
        let f = self.field();
        let Some(&lead) = b.iter().find(|&&c| c != 0) else {
            return Err(Error::BadParams("hyperplane must have b != 0".into()));
        };
        let s = f.inv(lead);
        Ok(TypedHyperplane { a: a.iter().map(|&c| f.mul(c, s)).collect(), b: b.iter().map(|&c| f.mul(c, s)).collect() })
    }

    /// The hyperplane `V_x = <e_i + x_i e_{n+1} (i <= n), e_{n+2}, ..., e_{n+l}>`,
    /// i.e. `w_1 = x . u`. Its vertices are the matrices with first row `x`.
    pub fn footnote_hyperplane(&self, x: &[Elem]) -> Result<TypedHyperplane> {
        let f = self.field();
        let a = x.iter().map(|&c| f.neg(c)).collect();
        let mut b = vec![0; self.l];
        b[0] = 1;
        self.hyperplane(a, b)
    }

    /// `{A : A^t b = -a}`, of size `q^{n(l-1)}`.
    pub fn vertices_in_hyperplane(&self, h: &TypedHyperplane) -> Result<VertexSet> {
        self.check_cap(self.num_vertices_u128())?;
        let mut set = VertexSet::empty(self);
        for idx in 0..self.num_vertices() {
            if h.contains_vertex(self.field(), &self.vertex(idx)) {
                set.insert(idx);
            }
        }
        Ok(set)
    }
}

fn digits_into(mut x: u64, q: u64, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (x % q) as Elem;
        x /= q;
    }
}

fn dim_meet_e(f: &FqField, n: usize, s: &Subspace) -> usize {
    let b = s.basis();
    let mut proj = FqMatrix::zeros(b.rows(), n);
    for r in 0..b.rows() {
        for c in 0..n {
            proj.set(r, c, b.get(r, c));
        }
    }
    s.dim() - proj.rank(f)
}

/// Total number of `m`-spaces of `F_q^amb` (the work of a full scan).
fn subspace_scan_size(q: u32, amb: usize, m: usize) -> u128 {
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..m {
        num = num.saturating_mul(q.pow((amb - i) as u32) - 1);
        den = den.saturating_mul(q.pow((i + 1) as u32) - 1);
    }
    if num == u128::MAX {
        u128::MAX
    } else {
        num / den
    }
}

/// An element of `M_n`: the column space of `[I_n; A]` with `A` of shape `l x n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub a: FqMatrix,
}

impl Vertex {
    pub fn incident(&self, f: &FqField, p: &Point) -> bool {
        self.a.mul_vec(f, &p.u) == p.v
    }

    /// `n - rank(A - B)`.
    pub fn dim_intersection(&self, f: &FqField, other: &Vertex) -> usize {
        self.a.cols() - self.a.sub(f, &other.a).expect("same parameters").rank(f)
    }

    pub fn to_subspace(&self, f: &FqField) -> Subspace {
        let (l, n) = (self.a.rows(), self.a.cols());
        let mut m = FqMatrix::zeros(n + l, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        for r in 0..l {
            for c in 0..n {
                m.set(n + r, c, self.a.get(r, c));
            }
        }
        Subspace::from_matrix_columns(f, &m)
    }
}

/// An element of `M_1`: `<(u; v)>` with the first nonzero entry of `u` equal to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    #[serde(serialize_with = "crate::serde_util::elems_str")]
    pub u: Vec<Elem>,
    #[serde(serialize_with = "crate::serde_util::elems_str")]
    pub v: Vec<Elem>,
}

impl Point {
    pub fn to_subspace(&self, f: &FqField) -> Subspace {
        let mut vec = self.u.clone();
        vec.extend_from_slice(&self.v);
        Subspace::span(f, vec.len(), &[vec])
    }
}

/// A hyperplane `{(u; w) : a.u + b.w = 0}` with `b != 0` normalized; it is of
/// type `(n+l-1, l-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TypedHyperplane {
    #[serde(serialize_with = "crate::serde_util::elems_str")]
    pub a: Vec<Elem>,
    #[serde(serialize_with = "crate::serde_util::elems_str")]
    pub b: Vec<Elem>,
}

impl TypedHyperplane {
    pub fn contains_vertex(&self, f: &FqField, w: &Vertex) -> bool {
        // A^t b = -a
        let at = w.a.transpose();
        let lhs = at.mul_vec(f, &self.b);
        lhs.iter().zip(&self.a).all(|(&x, &y)| f.add(x, y) == 0)
    }

    pub fn contains_point(&self, f: &FqField, p: &Point) -> bool {
        let s = self.a.iter().zip(&p.u).chain(self.b.iter().zip(&p.v));
        s.fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y))) == 0
    }

    pub fn to_subspace(&self, f: &FqField) -> Subspace {
        let mut row = self.a.clone();
        row.extend_from_slice(&self.b);
        FqMatrix::new(1, row.len(), row).kernel(f)
    }
}

/// Precomputed rank-metric data for fast pairwise vertex queries.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    n: usize,
    q: usize,
    digits: Vec<Vec<Elem>>,
    rank_of: Vec<u8>,
    field: Arc<FqField>,
}

impl DistanceTable {
    pub fn new(sp: &SpaceParams) -> Result<Self> {
        sp.check_cap(sp.num_vertices_u128())?;
        let count = sp.num_vertices();
        let f = sp.field();
        let mut digits = Vec::with_capacity(count);
        let mut rank_of = Vec::with_capacity(count);
        for idx in 0..count {
            let v = sp.vertex(idx);
            rank_of.push(v.a.rank(f) as u8);
            digits.push(v.a.data().to_vec());
        }
        Ok(Self { n: sp.n(), q: sp.q() as usize, digits, rank_of, field: sp.field.clone() })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `rank(A_i - A_j)`.
    #[inline]
    pub fn rank_distance(&self, i: usize, j: usize) -> usize {
        let f = &self.field;
        let key = self.digits[i]
            .iter()
            .zip(&self.digits[j])
            .fold(0usize, |acc, (&a, &b)| acc * self.q + f.sub(a, b) as usize);
        self.rank_of[key] as usize
    }

    #[inline]
    pub fn disjoint(&self, i: usize, j: usize) -> bool {
        self.rank_distance(i, j) == self.n
    }

    #[inline]
    pub fn dim_intersection(&self, i: usize, j: usize) -> usize {
        self.n - self.rank_distance(i, j)
    }

    /// Rank of the matrix of vertex `i` itself.
    pub fn rank_of_vertex(&self, i: usize) -> usize {
        self.rank_of[i] as usize
    }
}
