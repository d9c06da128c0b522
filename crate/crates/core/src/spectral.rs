//! Exact integer matrices attached to `Bil_q(n, l)` and the spectral checks
//! built on them.
//!
//! Elimination is fraction-free Gauss-Jordan: every intermediate entry is an
//! integer minor, so no rationals are needed until a caller asks for them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::attenuated::{DistanceTable, Point, SpaceParams};
use crate::counting::{self, delta_value, qpow, EigenPair};
use crate::error::{Error, Result};

/// Largest dimension of a dense exact matrix.
pub const MAX_MATRIX_DIM: usize = 4096;
/// Default memory allowance for dense matrices, overridable with `CLFORMS_CAP_MB`.
pub const DEFAULT_CAP_MB: u128 = 2048;

/// Memory allowance in bytes.
pub fn matrix_cap_bytes() -> u128 {
    std::env::var("CLFORMS_CAP_MB")
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
        .unwrap_or(DEFAULT_CAP_MB)
        .saturating_mul(1 << 20)
}

/// Rough size of one stored entry, counting the `BigInt` header.
const ENTRY_BYTES: u128 = 32;

fn check_matrix(rows: usize, cols: usize) -> Result<()> {
    let dim = rows.max(cols) as u128;
    if dim > MAX_MATRIX_DIM as u128 {
        return Err(Error::CapExceeded { required: dim, cap: MAX_MATRIX_DIM as u128 });
    }
    let bytes = rows as u128 * cols as u128 * ENTRY_BYTES;
    let cap = matrix_cap_bytes();
    if bytes > cap {
        return Err(Error::CapExceeded { required: bytes, cap });
    }
    Ok(())
}

/// Dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// A vector of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn from_ints<T: Into<BigInt> + Copy>(v: &[T]) -> Self {
        Self(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn dot(&self, other: &Self) -> BigRational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Scales to a primitive integer vector with the same direction.
    pub fn to_primitive_integers(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> =
            self.0.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            ints
        } else {
            ints.into_iter().map(|x| x / &g).collect()
        }
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_matrix(rows, cols)?;
        Ok(Self { rows, cols, data: vec![BigInt::zero(); rows * cols] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        Ok(m)
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, got: entries.len() });
        }
        check_matrix(rows, cols)?;
        Ok(Self { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols)?;
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &RationalVector) -> Result<RationalVector> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: v.len() });
        }
        Ok(RationalVector(
            (0..self.rows)
                .map(|r| {
                    self.row(r)
                        .iter()
                        .zip(&v.0)
                        .filter(|(a, _)| !a.is_zero())
                        .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
                        .sum()
                })
                .collect(),
        ))
    }

    /// `self - lambda * I`.
    pub fn minus_scalar(&self, lambda: &BigInt) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i) - lambda;
            m.set(i, i, v);
        }
        m
    }

    /// Fraction-free Gauss-Jordan form.
    ///
    /// Returns the reduced matrix and its pivot columns. Every pivot entry
    /// equals the same nonzero integer `d` and each pivot column is `d` times
    /// a unit vector.
    pub fn fraction_free_rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..cols {
                    a.data.swap(p * cols + j, r * cols + j);
                }
            }
            let piv = a.get(r, c).clone();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = a.get(i, c).clone();
                for j in 0..cols {
                    let v = &piv * a.get(i, j) - &factor * a.get(r, j);
                    let (quot, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero());
                    a.data[i * cols + j] = quot;
                }
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        // earlier pivot rows were scaled by later pivots only through the row
        // operations on them; bring every pivot row to the final common value
        let d = prev;
        for (i, &c) in pivots.iter().enumerate() {
            let p = a.get(i, c).clone();
            if p != d {
                let (num, den) = (&d, &p);
                for j in 0..cols {
                    let v = a.get(i, j) * num;
                    let (quot, rem) = v.div_rem(den);
                    debug_assert!(rem.is_zero());
                    a.data[i * cols + j] = quot;
                }
            }
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.fraction_free_rref().1.len()
    }

    /// Basis of the right null space; each vector is a primitive integer vector.
    pub fn kernel_basis(&self) -> Vec<RationalVector> {
        self.kernel_integer_basis()
            .into_iter()
            .map(|v| RationalVector(v.into_iter().map(BigRational::from_integer).collect()))
            .collect()
    }

    pub(crate) fn kernel_integer_basis(&self) -> Vec<Vec<BigInt>> {
        let (a, pivots) = self.fraction_free_rref();
        let d = pivots.first().map(|&c| a.get(0, c).clone()).unwrap_or_else(BigInt::one);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![BigInt::zero(); self.cols];
            v[f] = d.clone();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -a.get(i, f).clone();
            }
            let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if g > BigInt::one() {
                v.iter_mut().for_each(|x| *x /= &g);
            }
            out.push(v);
        }
        out
    }
}

/// `v ∈ Im(M^t)`, decided as `v ⟂ ker(M)`.
pub fn in_image_of_transpose(m: &ExactMatrix, v: &RationalVector) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::LengthMismatch { expected: m.cols(), got: v.len() });
    }
    Ok(m.kernel_basis().iter().all(|k| k.dot(v).is_zero()))
}

/// Point-vertex incidence matrix with its row labels.
#[derive(Debug, Clone)]
pub struct Incidence {
    pub points: Vec<Point>,
    pub matrix: ExactMatrix,
}

pub fn build_incidence(sp: &SpaceParams) -> Result<Incidence> {
    let nv = sp.num_vertices_u128();
    let np = sp.num_points_u128();
    if nv > MAX_MATRIX_DIM as u128 || np > MAX_MATRIX_DIM as u128 {
        return Err(Error::CapExceeded { required: nv.max(np), cap: MAX_MATRIX_DIM as u128 });
    }
    let points = sp.enumerate_points()?;
    let mut m = ExactMatrix::zeros(points.len(), nv as usize)?;
    for (r, p) in points.iter().enumerate() {
        for w in sp.vertices_through(p) {
            m.set(r, w, BigInt::one());
        }
    }
    Ok(Incidence { points, matrix: m })
}

/// Adjacency of the attenuated q-Kneser graph (disjointness).
pub fn build_kneser(sp: &SpaceParams) -> Result<ExactMatrix> {
    let nv = sp.num_vertices_u128();
    if nv > MAX_MATRIX_DIM as u128 {
        return Err(Error::CapExceeded { required: nv, cap: MAX_MATRIX_DIM as u128 });
    }
    let dt = DistanceTable::new(sp)?;
    let nv = nv as usize;
    let mut k = ExactMatrix::zeros(nv, nv)?;
    for i in 0..nv {
        for j in 0..nv {
            if dt.disjoint(i, j) {
                k.set(i, j, BigInt::one());
            }
        }
    }
    Ok(k)
}

/// Point graph `G`: distinct points are adjacent when they span a 2-space
/// meeting `E` trivially, i.e. their `u` parts are independent.
pub fn build_point_graph(points: &[Point]) -> Result<ExactMatrix> {
    let np = points.len();
    let mut a = ExactMatrix::zeros(np, np)?;
    for i in 0..np {
        for j in 0..np {
            if points[i].u != points[j].u {
                a.set(i, j, BigInt::one());
            }
        }
    }
    Ok(a)
}

/// `M M^t = q^{(n-1)l} I + q^{(n-2)l} A`, entrywise.
pub fn gram_check(sp: &SpaceParams) -> Result<bool> {
    let inc = build_incidence(sp)?;
    gram_check_with(sp, &inc)
}

pub fn gram_check_with(sp: &SpaceParams, inc: &Incidence) -> Result<bool> {
    let (q, n, l) = (sp.q(), sp.n() as i64, sp.l() as i64);
    let m = &inc.matrix;
    let gram = m.mul(&m.transpose())?;
    let a = build_point_graph(&inc.points)?;
    let diag = qpow(q, (n - 1) * l);
    let off = if n >= 2 { qpow(q, (n - 2) * l) } else { BigInt::zero() };
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            let expect = if i == j { diag.clone() } else { &off * a.get(i, j) };
            if gram.get(i, j) != &expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of an eigenspace membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenStatus {
    InV1,
    NotInV1,
    /// The zero vector lies in every eigenspace; reported apart from a real pass.
    ZeroVector,
}

/// Whether `K v = λ_1 v`.
pub fn eigen_membership_v1(sp: &SpaceParams, k: &ExactMatrix, v: &RationalVector) -> Result<EigenStatus> {
    if v.len() != k.cols() {
        return Err(Error::LengthMismatch { expected: k.cols(), got: v.len() });
    }
    if v.is_zero() {
        return Ok(EigenStatus::ZeroVector);
    }
    let lambda1 = BigRational::from_integer(counting::kneser_eigenvalue(sp.q(), sp.n() as i64, sp.l() as i64, 1));
    let kv = k.mul_vec(v)?;
    let ok = kv.0.iter().zip(&v.0).all(|(a, b)| *a == &lambda1 * b);
    Ok(if ok { EigenStatus::InV1 } else { EigenStatus::NotInV1 })
}

/// `χ_L - x q^{-l} j` with `x = |L| q^{-(n-1)l}`.
pub fn centered_vector(sp: &SpaceParams, members: &[usize]) -> RationalVector {
    let nv = sp.num_vertices();
    let shift = BigRational::new(BigInt::from(members.len()), qpow(sp.q(), (sp.n() * sp.l()) as i64));
    let mut v = vec![-shift.clone(); nv];
    for &i in members {
        v[i] += BigRational::one();
    }
    RationalVector(v)
}

/// `M (χ_{M̄_n(w)} - (q^{-(n-1)l} j - χ_{w}) Δ) = 0`, checked after scaling by `q^{(n-1)l}`.
pub fn verify_lemma_2_7(sp: &SpaceParams, inc: &Incidence, dt: &DistanceTable, w: usize) -> bool {
    let (q, n, l) = (sp.q(), sp.n() as i64, sp.l() as i64);
    let top = qpow(q, (n - 1) * l);
    let delta = delta_value(q, n, l);
    let nv = dt.len();
    let vec: Vec<BigInt> = (0..nv)
        .map(|i| {
            let mut x = if dt.disjoint(w, i) { top.clone() } else { BigInt::zero() };
            x -= &delta;
            if i == w {
                x += &delta * &top;
            }
            x
        })
        .collect();
    let m = &inc.matrix;
    (0..m.rows())
        .all(|r| m.row(r).iter().zip(&vec).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum::<BigInt>().is_zero())
}

/// One eigenvalue of `K` with its expected and measured multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenCheck {
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub value: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub expected: BigInt,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub measured: usize,
}

/// Results of the spectral identities at one parameter set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub rank_m: usize,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub rank_m_formula: BigInt,
    pub rank_ok: bool,
    pub gram_ok: bool,
    pub kneser: Vec<EigenCheck>,
    pub kneser_ok: bool,
    /// `K j = -λ_1 (q^l - 1) j`.
    pub kneser_row_sum_ok: bool,
    pub lemma27_ok: bool,
    pub image_dim_ok: bool,
    pub g_spectrum: Vec<EigenPair>,
    pub g_ok: bool,
}

impl SpectralReport {
    pub fn all_ok(&self) -> bool {
        self.rank_ok
            && self.gram_ok
            && self.kneser_ok
            && self.kneser_row_sum_ok
            && self.lemma27_ok
            && self.image_dim_ok
            && self.g_ok
    }
}

/// Multiplicity of `lambda` in a symmetric matrix: `dim - rank(K - lambda I)`.
pub fn multiplicity(k: &ExactMatrix, lambda: &BigInt) -> usize {
    k.rows() - k.minus_scalar(lambda).rank()
}

/// Runs every spectral identity: rank of `M`, the Gram identity, the spectrum
/// of `K`, the kernel vector attached to every vertex, and the spectrum of the
/// point graph.
pub fn spectral_report(sp: &SpaceParams) -> Result<SpectralReport> {
    let inc = build_incidence(sp)?;
    let k = build_kneser(sp)?;
    let dt = DistanceTable::new(sp)?;
    let formulas = counting::spectra(sp);

    let rank_m = inc.matrix.rank();
    let rank_ok = BigInt::from(rank_m) == formulas.rank_m;
    let gram_ok = gram_check_with(sp, &inc)?;

    let kneser: Vec<EigenCheck> = formulas
        .kneser
        .iter()
        .map(|p| EigenCheck {
            value: p.value.clone(),
            expected: p.multiplicity.clone(),
            measured: multiplicity(&k, &p.value),
        })
        .collect();
    let total: usize = kneser.iter().map(|e| e.measured).sum();
    let kneser_ok = total == k.rows() && kneser.iter().all(|e| BigInt::from(e.measured) == e.expected);

    let (q, n, l) = (sp.q(), sp.n() as i64, sp.l() as i64);
    let lambda1 = counting::kneser_eigenvalue(q, n, l, 1);
    let row_sum = -&lambda1 * (qpow(q, l) - 1);
    let kneser_row_sum_ok = (0..k.rows()).all(|r| k.row(r).iter().sum::<BigInt>() == row_sum);

    let lemma27_ok = (0..dt.len()).all(|w| verify_lemma_2_7(sp, &inc, &dt, w));
    let v01: BigInt = formulas.kneser[0].multiplicity.clone()
        + &formulas.kneser.get(1).map(|p| p.multiplicity.clone()).unwrap_or_default();
    let image_dim_ok = BigInt::from(rank_m) == v01;

    let a = build_point_graph(&inc.points)?;
    let mut g_total = 0usize;
    let mut g_ok = true;
    let mut seen: Vec<&BigInt> = Vec::new();
    for p in &formulas.g {
        if seen.contains(&&p.value) {
            // repeated value (n = 1): multiplicities add
            continue;
        }
        seen.push(&p.value);
        let expected: BigInt = formulas.g.iter().filter(|o| o.value == p.value).map(|o| o.multiplicity.clone()).sum();
        let measured = multiplicity(&a, &p.value);
        g_total += measured;
        g_ok &= BigInt::from(measured) == expected;
    }
    g_ok &= g_total == a.rows();

    Ok(SpectralReport {
        rank_m,
        rank_m_formula: formulas.rank_m,
        rank_ok,
        gram_ok,
        kneser,
        kneser_ok,
        kneser_row_sum_ok,
        lemma27_ok,
        image_dim_ok,
        g_spectrum: formulas.g,
        g_ok,
    })
}

/// `|L| / q^{(n-1)l}` as an exact rational.
pub fn parameter(sp: &SpaceParams, size: usize) -> BigRational {
    BigRational::new(BigInt::from(size), qpow(sp.q(), ((sp.n() - 1) * sp.l()) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: u32, n: usize, l: usize) -> SpaceParams {
        SpaceParams::new(q, n, l).unwrap()
    }

    fn m(rows: usize, cols: usize, e: &[i64]) -> ExactMatrix {
        ExactMatrix::from_i64(rows, cols, e).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert!(ExactMatrix::identity(4).unwrap().kernel_basis().is_empty());
        let ones = m(1, 5, &[1; 5]);
        let k = ones.kernel_basis();
        assert_eq!(k.len(), 4);
        for v in &k {
            assert!(ones.mul_vec(v).unwrap().is_zero());
        }
        let a = m(3, 4, &[2, 4, 1, 3, 1, 2, 0, 1, 3, 6, 1, 4]);
        assert_eq!(a.rank(), 2);
        for v in a.kernel_basis() {
            assert!(a.mul_vec(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(2, 2, &[0, 0, 0, 0]).rank(), 0);
        assert_eq!(m(2, 2, &[1, 2, 2, 4]).rank(), 1);
        assert_eq!(m(3, 3, &[2, -1, 0, -1, 2, -1, 0, -1, 2]).rank(), 3);
    }

    #[test]
    fn incidence_shapes() {
        let inc = build_incidence(&sp(2, 2, 2)).unwrap();
        assert_eq!((inc.matrix.rows(), inc.matrix.cols()), (12, 16));
        for r in 0..12 {
            assert_eq!(inc.matrix.row(r).iter().sum::<BigInt>(), 4.into());
        }
        let t = inc.matrix.transpose();
        for r in 0..16 {
            assert_eq!(t.row(r).iter().sum::<BigInt>(), 3.into());
        }
        let inc = build_incidence(&sp(2, 1, 1)).unwrap();
        assert_eq!((inc.matrix.rows(), inc.matrix.cols()), (2, 2));
    }

    #[test]
    fn kernel_of_incidence_at_222() {
        let inc = build_incidence(&sp(2, 2, 2)).unwrap();
        assert_eq!(inc.matrix.kernel_basis().len(), 6);
        let j = RationalVector::from_ints(&[1i64; 16]);
        assert!(in_image_of_transpose(&inc.matrix, &j).unwrap());
        let mut single = vec![0i64; 16];
        single[5] = 1;
        assert!(!in_image_of_transpose(&inc.matrix, &RationalVector::from_ints(&single)).unwrap());
        let row: Vec<i64> = inc.matrix.row(3).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert!(in_image_of_transpose(&inc.matrix, &RationalVector::from_ints(&row)).unwrap());
    }

    #[test]
    fn eigen_membership_examples() {
        let s = sp(2, 2, 2);
        let k = build_kneser(&s).unwrap();
        let zero = RationalVector::from_ints(&[0i64; 16]);
        assert_eq!(eigen_membership_v1(&s, &k, &zero).unwrap(), EigenStatus::ZeroVector);
        let p = &s.enumerate_points().unwrap()[0];
        let pencil = s.vertices_through(p);
        assert_eq!(eigen_membership_v1(&s, &k, &centered_vector(&s, &pencil)).unwrap(), EigenStatus::InV1);
        assert_eq!(eigen_membership_v1(&s, &k, &centered_vector(&s, &[0, 1, 2, 7])).unwrap(), EigenStatus::NotInV1);
    }

    #[test]
    fn spectral_report_222() {
        let r = spectral_report(&sp(2, 2, 2)).unwrap();
        assert_eq!(r.rank_m, 10);
        assert!(r.all_ok(), "{r:?}");
        let measured: Vec<usize> = r.kneser.iter().map(|e| e.measured).collect();
        assert_eq!(measured, vec![1, 9, 6]);
    }

    #[test]
    fn spectral_report_small_cases() {
        for (q, n, l) in [(2, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 3)] {
            let r = spectral_report(&sp(q, n, l)).unwrap();
            assert!(r.all_ok(), "({q},{n},{l}) {r:?}");
        }
    }
}
