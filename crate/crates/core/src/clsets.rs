//! Cameron-Liebler sets: constructions, spreads, the membership verdict and
//! a triviality classifier.
//!
//! A set `L ⊆ M_n` is Cameron-Liebler with parameter `x = |L| q^{-(n-1)l}`
//! when every vertex `w` is disjoint from exactly `(x - [w ∈ L]) Δ` members.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attenuated::{DistanceTable, Point, SpaceParams, TypedHyperplane, Vertex};
use crate::bits::Bits;
use crate::clique::max_clique;
use crate::counting::{self, delta_value, qpow};
use crate::error::{Error, Result};
use crate::fqlinalg::FqMatrix;
use crate::gf::{Elem, ExtField, FqField};
use crate::spectral::{build_incidence, MAX_MATRIX_DIM};
use crate::vertexset::VertexSet;

// ---- constructions ---------------------------------------------------------

/// All vertices through `p`.
pub fn point_pencil(sp: &SpaceParams, p: &Point) -> VertexSet {
    VertexSet::from_indices(sp, sp.vertices_through(p))
}

pub fn hyperplane_set(sp: &SpaceParams, h: &TypedHyperplane) -> Result<VertexSet> {
    sp.vertices_in_hyperplane(h)
}

fn digits(mut idx: u64, q: u64, len: usize) -> Vec<Elem> {
    let mut out = vec![0 as Elem; len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % q) as Elem;
        idx /= q;
    }
    out
}

/// `τ_x = <e_1 + Σ x_i e_{n+i}>` with `x` the base-`q` digits of `idx`.
pub fn footnote_point(sp: &SpaceParams, idx: u64) -> Result<Point> {
    let count = (sp.q() as u64).pow(sp.l() as u32);
    if idx >= count {
        return Err(Error::BadIndices(format!("footnote point {idx} out of range {count}")));
    }
    let mut u = vec![0 as Elem; sp.n()];
    u[0] = 1;
    Ok(Point { u, v: digits(idx, sp.q() as u64, sp.l()) })
}

/// Union of the footnote pencils `τ_0, ..., τ_{k-1}`; they are pairwise disjoint.
pub fn footnote_pencil_union(sp: &SpaceParams, k: u64) -> Result<VertexSet> {
    let mut set = VertexSet::empty(sp);
    for idx in 0..k {
        for w in sp.vertices_through(&footnote_point(sp, idx)?) {
            set.insert(w);
        }
    }
    Ok(set)
}

/// `V_x` with `x ∈ F_q^n` the base-`q` digits of `idx`.
pub fn footnote_hyperplane(sp: &SpaceParams, idx: u64) -> Result<TypedHyperplane> {
    let count = (sp.q() as u64).pow(sp.n() as u32);
    if idx >= count {
        return Err(Error::BadIndices(format!("footnote hyperplane {idx} out of range {count}")));
    }
    sp.footnote_hyperplane(&digits(idx, sp.q() as u64, sp.n()))
}

/// Vertices whose first row is the `idx`-th tuple; same as `hyperplane_set(V_x)`.
fn footnote_hyperplane_members(sp: &SpaceParams, idx: u64) -> VertexSet {
    let row_len = sp.n();
    let block = (sp.q() as usize).pow(((sp.l() - 1) * row_len) as u32);
    let start = idx as usize * block;
    VertexSet::from_indices(sp, start..start + block)
}

/// Union of `M_n(V_x)` for the first `y` footnote hyperplanes, `x = y q^{l-n}`.
pub fn hyperplane_union(sp: &SpaceParams, y: u64) -> Result<VertexSet> {
    let count = (sp.q() as u64).pow(sp.n() as u32);
    if y > count {
        return Err(Error::BadParams(format!("y = {y} exceeds q^n = {count}")));
    }
    sp.check_cap(sp.num_vertices_u128())?;
    let mut set = VertexSet::empty(sp);
    for idx in 0..y {
        set = set.union(&footnote_hyperplane_members(sp, idx));
    }
    Ok(set)
}

/// The non-trivial family `∪_{i<=y} M_n(V_i)`; needs `l > n >= 2` and `1 <= y < q^{n-1}`.
pub fn nontrivial_family(sp: &SpaceParams, y: u64) -> Result<VertexSet> {
    let (n, l) = (sp.n(), sp.l());
    if !(l > n && n >= 2) {
        return Err(Error::BadParams(format!("nontrivial family needs l > n >= 2, got n = {n}, l = {l}")));
    }
    let ymax = (sp.q() as u64).pow(n as u32 - 1);
    if y == 0 || y >= ymax {
        return Err(Error::BadParams(format!("nontrivial family needs 1 <= y < {ymax}, got {y}")));
    }
    hyperplane_union(sp, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureOp {
    Complement,
    UnionDisjoint,
    DifferenceNested,
}

/// Complement, disjoint union or nested difference. `b` is ignored for the complement.
pub fn closure(a: &VertexSet, b: Option<&VertexSet>, op: ClosureOp) -> Result<VertexSet> {
    let need_b = || b.ok_or_else(|| Error::BadParams(format!("{op:?} needs a second set")));
    match op {
        ClosureOp::Complement => Ok(a.complement()),
        ClosureOp::UnionDisjoint => {
            let b = need_b()?;
            if !a.is_disjoint(b) {
                return Err(Error::PreconditionViolated("union_disjoint: sets intersect".into()));
            }
            Ok(a.union(b))
        }
        ClosureOp::DifferenceNested => {
            let b = need_b()?;
            if !b.is_subset(a) {
                return Err(Error::PreconditionViolated("difference_nested: b is not a subset of a".into()));
            }
            Ok(a.difference(b))
        }
    }
}

/// A named example with its expected parameter.
#[derive(Debug, Clone)]
pub struct Construction {
    pub name: String,
    pub set: VertexSet,
    pub x: BigRational,
}

/// The standard examples at `sp`: a pencil, a hyperplane set, pencil plus
/// hyperplane, the footnote pencil unions of every size (from the empty to the
/// full set), hyperplane unions and, when defined, the non-trivial families.
pub fn standard_constructions(sp: &SpaceParams) -> Result<Vec<Construction>> {
    let (q, n, l) = (sp.q() as u64, sp.n(), sp.l());
    let rat = |v: u64| BigRational::from_integer(BigInt::from(v));
    let ql = q.pow(l as u32);
    let qln = q.pow((l - n) as u32);
    let mut out = Vec::new();
    let mut push = |name: String, set: VertexSet, x: u64| out.push(Construction { name, set, x: rat(x) });

    let pencil = point_pencil(sp, &footnote_point(sp, 0)?);
    push("pencil".into(), pencil, 1);
    let hyp = hyperplane_set(sp, &footnote_hyperplane(sp, 0)?)?;
    push("hyperplane".into(), hyp.clone(), qln);
    // τ = <e_1 + e_{n+1}> is not in V_0 (first row zero)
    let tau = point_pencil(sp, &footnote_point(sp, ql / q)?);
    push("pencil_plus_hyperplane".into(), closure(&hyp, Some(&tau), ClosureOp::UnionDisjoint)?, qln + 1);
    for k in 0..=ql {
        push(format!("footnote_pencils_{k}"), footnote_pencil_union(sp, k)?, k);
    }
    for y in 1..q.pow(n as u32 - 1).max(2) {
        push(format!("hyperplane_union_{y}"), hyperplane_union(sp, y)?, y * qln);
    }
    if l > n && n >= 2 {
        for y in 1..q.pow(n as u32 - 1) {
            push(format!("nontrivial_family_{y}"), nontrivial_family(sp, y)?, y * qln);
        }
    }
    Ok(out)
}

// ---- spreads ---------------------------------------------------------------

/// How a spread was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SpreadOrigin {
    /// `u ↦ α φ(u)` over `F_{q^l}`; seed 0 is the power-basis embedding.
    Field {
        #[serde(serialize_with = "crate::serde_util::display_str")]
        multiplier_seed: u64,
    },
    /// An attenuated-space automorphism applied to another spread.
    Transformed {
        base: Box<SpreadOrigin>,
        #[serde(serialize_with = "crate::serde_util::display_str")]
        seed: u64,
    },
}

/// An attenuated `n`-spread: `q^l` pairwise disjoint vertices covering every point once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spread {
    sp: SpaceParams,
    members: Vec<usize>,
    origin: SpreadOrigin,
}

impl Spread {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn origin(&self) -> &SpreadOrigin {
        &self.origin
    }

    pub fn params(&self) -> &SpaceParams {
        &self.sp
    }

    pub fn to_set(&self) -> VertexSet {
        VertexSet::from_indices(&self.sp, self.members.iter().copied())
    }

    /// Checks size, pairwise disjointness and point coverage by census.
    pub fn validate(&self) -> Result<()> {
        let sp = &self.sp;
        let f = sp.field();
        let ql = (sp.q() as usize).pow(sp.l() as u32);
        if self.members.len() != ql {
            return Err(Error::PreconditionViolated(format!("spread has {} members, want {ql}", self.members.len())));
        }
        let verts: Vec<Vertex> = self.members.iter().map(|&i| sp.vertex(i)).collect();
        for (i, a) in verts.iter().enumerate() {
            for b in &verts[i + 1..] {
                if a.dim_intersection(f, b) != 0 {
                    return Err(Error::PreconditionViolated("spread members meet".into()));
                }
            }
        }
        for p in sp.enumerate_points()? {
            let hits = verts.iter().filter(|v| v.incident(f, &p)).count();
            if hits != 1 {
                return Err(Error::PreconditionViolated(format!("point {p:?} covered {hits} times")));
            }
        }
        Ok(())
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, q: u32, rows: usize, cols: usize) -> FqMatrix {
    FqMatrix::new(rows, cols, (0..rows * cols).map(|_| rng.gen_range(0..q) as Elem).collect())
}

fn random_full_rank(rng: &mut ChaCha8Rng, f: &FqField, rows: usize, cols: usize) -> FqMatrix {
    loop {
        let m = random_matrix(rng, f.q(), rows, cols);
        if m.rank(f) == rows.min(cols) {
            return m;
        }
    }
}

/// The `l x n` matrix of `u ↦ α φ(u)` for `φ` given by the columns of `phi`.
fn multiplier_matrix(ext: &ExtField, alpha: &[Elem], phi: &FqMatrix) -> FqMatrix {
    let (l, n) = (phi.rows(), phi.cols());
    let mut a = FqMatrix::zeros(l, n);
    for c in 0..n {
        let col: Vec<Elem> = (0..l).map(|r| phi.get(r, c)).collect();
        let img = ext.mul(alpha, &col);
        for (r, &e) in img.iter().enumerate() {
            a.set(r, c, e);
        }
    }
    a
}

/// The field-construction spread. Seed 0 embeds `F_q^n` onto the first `n`
/// power-basis elements of `F_{q^l}`; any other seed uses a seeded random
/// injective embedding.
pub fn spread(sp: &SpaceParams, multiplier_seed: u64) -> Result<Spread> {
    let (n, l) = (sp.n(), sp.l());
    let f = sp.field();
    let ext = ExtField::new(f, l)?;
    let phi = if multiplier_seed == 0 {
        let mut m = FqMatrix::zeros(l, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    } else {
        random_full_rank(&mut ChaCha8Rng::seed_from_u64(multiplier_seed), f, l, n)
    };
    let members =
        ext.elements().map(|alpha| sp.vertex_index(&Vertex { a: multiplier_matrix(&ext, &alpha, &phi) })).collect();
    Ok(Spread { sp: sp.clone(), members, origin: SpreadOrigin::Field { multiplier_seed } })
}

/// The image of the vertex `A` under `(u; v) ↦ (S u; T v + R u)`: `(T A + R) S^{-1}`.
fn transform_vertex(f: &FqField, a: &FqMatrix, s_inv: &FqMatrix, t: &FqMatrix, r: &FqMatrix) -> FqMatrix {
    let ta = t.mul(f, a).expect("shapes").add(f, r).expect("shapes");
    ta.mul(f, s_inv).expect("shapes")
}

/// Applies a seeded automorphism of the attenuated space; seed 0 is the identity.
pub fn transformed_spread(s: &Spread, seed: u64) -> Result<Spread> {
    let sp = &s.sp;
    let origin = SpreadOrigin::Transformed { base: Box::new(s.origin.clone()), seed };
    if seed == 0 {
        return Ok(Spread { sp: sp.clone(), members: s.members.clone(), origin });
    }
    let f = sp.field();
    let (n, l) = (sp.n(), sp.l());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sm = random_full_rank(&mut rng, f, n, n);
    let t = random_full_rank(&mut rng, f, l, l);
    let r = random_matrix(&mut rng, f.q(), l, n);
    let s_inv = sm.inverse(f).expect("full rank");
    let members = s
        .members
        .iter()
        .map(|&i| {
            let a = transform_vertex(f, &sp.vertex(i).a, &s_inv, &t, &r);
            sp.vertex_index(&Vertex { a })
        })
        .collect();
    Ok(Spread { sp: sp.clone(), members, origin })
}

/// A spread of `A_q(2n, Σ ∩ E)` for `Σ = <π, π'>` with `π, π'` disjoint:
/// the vertices `A + (A' - A) B_β`, `B_β` running over the field spread of
/// `n x n` matrices. It contains `π` and `π'`.
pub fn sigma_spread(sp: &SpaceParams, pi: usize, pi_prime: usize) -> Result<Vec<usize>> {
    let f = sp.field();
    let n = sp.n();
    let (a, a2) = (sp.vertex(pi).a, sp.vertex(pi_prime).a);
    let d = a2.sub(f, &a)?;
    if d.rank(f) != n {
        return Err(Error::PreconditionViolated("sigma spread needs disjoint vertices".into()));
    }
    let ext = ExtField::new(f, n)?;
    let id = FqMatrix::identity(n);
    let mut out: Vec<usize> = ext
        .elements()
        .map(|beta| {
            let b = multiplier_matrix(&ext, &beta, &id);
            let m = a.add(f, &d.mul(f, &b).expect("shapes")).expect("shapes");
            sp.vertex_index(&Vertex { a: m })
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

// ---- verdict ---------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Fast,
    Full,
}

/// The characterizations that the verdict evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Definition {
    #[serde(rename = "image")]
    Image,
    #[serde(rename = "kernel_orth")]
    KernelOrth,
    #[serde(rename = "disjoint_count")]
    DisjointCount,
    #[serde(rename = "eigen_V1")]
    EigenV1,
    #[serde(rename = "spread_sampled")]
    SpreadSampled,
    #[serde(rename = "switching_sampled")]
    SwitchingSampled,
}

pub const ALL_DEFINITIONS: [Definition; 6] = [
    Definition::Image,
    Definition::KernelOrth,
    Definition::DisjointCount,
    Definition::EigenV1,
    Definition::SpreadSampled,
    Definition::SwitchingSampled,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
    /// The centered vector is zero (`L` empty or full); it lies in every eigenspace.
    ZeroVector,
}

impl Outcome {
    fn of(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// First counterexample of a failed test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub definition: Definition,
    pub kind: &'static str,
    /// Vertex, kernel vector, spread or pair index, depending on `kind`.
    #[serde(serialize_with = "crate::serde_util::opt_usize_str")]
    pub index: Option<usize>,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CLVerdict {
    pub is_cl: bool,
    #[serde(serialize_with = "crate::serde_util::rational_str")]
    pub x: BigRational,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub size: usize,
    pub level: Level,
    pub per_definition: BTreeMap<Definition, Outcome>,
    pub witnesses: Vec<Witness>,
}

impl CLVerdict {
    pub fn outcome(&self, d: Definition) -> Outcome {
        self.per_definition[&d]
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }

    /// `x` as an integer when it is one.
    pub fn x_integer(&self) -> Option<u64> {
        if self.x.is_integer() {
            self.x.to_integer().to_u64()
        } else {
            None
        }
    }
}

struct FullData {
    /// Pivot columns and rows of the fraction-free reduced incidence matrix; all pivots equal `d`.
    row_pivots: Vec<usize>,
    rows: Vec<Vec<BigInt>>,
    d: BigInt,
    kernel: Vec<Vec<BigInt>>,
    lambda0: i128,
    lambda1: i128,
    spreads: Vec<Spread>,
    switching: Vec<(Bits, Bits)>,
}

/// Precomputed data for repeated verdicts at one parameter set.
pub struct ClContext {
    sp: SpaceParams,
    dt: DistanceTable,
    disjoint: Vec<Bits>,
    top: u64,
    total: u64,
    delta: u64,
    full: Option<FullData>,
}

/// Number of transformed spreads sampled at the full level.
pub const SAMPLED_TRANSFORMS: u64 = 8;

impl ClContext {
    /// At `Level::Full` the incidence matrix and its kernel are computed, and
    /// the base spread plus transforms `seed+1 ..= seed+8` are sampled.
    pub fn new(sp: &SpaceParams, level: Level, seed: u64) -> Result<Self> {
        let dt = DistanceTable::new(sp)?;
        let nv = dt.len();
        let disjoint: Vec<Bits> =
            (0..nv).into_par_iter().map(|i| Bits::from_indices(nv, (0..nv).filter(|&j| dt.disjoint(i, j)))).collect();
        let (q, n, l) = (sp.q(), sp.n() as i64, sp.l() as i64);
        let to_u64 = |v: BigInt| v.to_u64().ok_or_else(|| Error::Unsupported("count exceeds u64".into()));
        let top = to_u64(qpow(q, (n - 1) * l))?;
        let total = nv as u64;
        let delta = to_u64(delta_value(q, n, l))?;
        let full = match level {
            Level::Fast => None,
            Level::Full => Some(Self::full_data(sp, &disjoint, seed)?),
        };
        Ok(Self { sp: sp.clone(), dt, disjoint, top, total, delta, full })
    }

    fn full_data(sp: &SpaceParams, disjoint: &[Bits], seed: u64) -> Result<FullData> {
        let inc = build_incidence(sp)?;
        let (red, pivots) = inc.matrix.fraction_free_rref();
        let d = pivots.first().map(|&c| red.get(0, c).clone()).unwrap_or_else(|| BigInt::from(1));
        let rows = (0..pivots.len()).map(|i| red.row(i).to_vec()).collect();
        let kernel = inc.matrix.kernel_integer_basis();
        let (q, n, l) = (sp.q(), sp.n() as i64, sp.l() as i64);
        let lambda0 = disjoint[0].count() as i128;
        let lambda1 = counting::kneser_eigenvalue(q, n, l, 1)
            .to_i128()
            .ok_or_else(|| Error::Unsupported("eigenvalue exceeds i128".into()))?;
        let base = spread(sp, 0)?;
        let mut spreads = vec![base.clone()];
        let mut switching = Vec::new();
        let base_bits = base.to_set().bits().clone();
        for i in 1..=SAMPLED_TRANSFORMS {
            let t = transformed_spread(&base, seed.wrapping_add(i))?;
            let tb = t.to_set().bits().clone();
            switching.push((base_bits.and_not(&tb), tb.and_not(&base_bits)));
            spreads.push(t);
        }
        Ok(FullData { row_pivots: pivots, rows, d, kernel, lambda0, lambda1, spreads, switching })
    }

    pub fn params(&self) -> &SpaceParams {
        &self.sp
    }

    pub fn level(&self) -> Level {
        if self.full.is_some() {
            Level::Full
        } else {
            Level::Fast
        }
    }

    pub fn distance_table(&self) -> &DistanceTable {
        &self.dt
    }

    /// Disjointness rows of the attenuated q-Kneser graph.
    pub fn disjoint_rows(&self) -> &[Bits] {
        &self.disjoint
    }

    /// `q^{(n-1)l}`, the size of a pencil.
    pub fn pencil_size(&self) -> u64 {
        self.top
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// The sampled spreads (empty at the fast level).
    pub fn spreads(&self) -> &[Spread] {
        self.full.as_ref().map(|f| f.spreads.as_slice()).unwrap_or(&[])
    }

    /// Members of `bits` disjoint from each vertex.
    pub fn disjoint_counts(&self, bits: &Bits) -> Vec<u64> {
        let nv = self.disjoint.len();
        if nv >= 2048 {
            self.disjoint.par_iter().map(|row| row.and_count(bits) as u64).collect()
        } else {
            self.disjoint.iter().map(|row| row.and_count(bits) as u64).collect()
        }
    }

    pub fn verdict(&self, set: &VertexSet) -> CLVerdict {
        self.verdict_bits(set.bits())
    }

    pub fn verdict_bits(&self, bits: &Bits) -> CLVerdict {
        let size = bits.count();
        let x = BigRational::new(BigInt::from(size), BigInt::from(self.top));
        let mut per = BTreeMap::new();
        let mut witnesses = Vec::new();

        // (iii): top * |L ∩ M̄(w)| = (|L| - top [w ∈ L]) Δ
        let counts = self.disjoint_counts(bits);
        let (top, delta, sz) = (self.top as i128, self.delta as i128, size as i128);
        let disjoint_ok = if !(size as u64).is_multiple_of(self.top) {
            witnesses.push(Witness {
                definition: Definition::DisjointCount,
                kind: "non_integral_size",
                index: None,
                expected: Some(format!("multiple of {}", self.top)),
                actual: Some(size.to_string()),
            });
            false
        } else {
            let bad = counts.iter().enumerate().find(|&(w, &c)| {
                let inside = bits.get(w) as i128;
                top * c as i128 != (sz - top * inside) * delta
            });
            if let Some((w, &c)) = bad {
                let expect = (sz / top - bits.get(w) as i128) * delta;
                witnesses.push(Witness {
                    definition: Definition::DisjointCount,
                    kind: "vertex",
                    index: Some(w),
                    expected: Some(expect.to_string()),
                    actual: Some(c.to_string()),
                });
            }
            bad.is_none()
        };
        per.insert(Definition::DisjointCount, Outcome::of(disjoint_ok));
        let mut is_cl = disjoint_ok;

        match &self.full {
            None => {
                for d in [
                    Definition::Image,
                    Definition::KernelOrth,
                    Definition::EigenV1,
                    Definition::SpreadSampled,
                    Definition::SwitchingSampled,
                ] {
                    per.insert(d, Outcome::Skipped);
                }
            }
            Some(fd) => {
                let image = self.image_test(fd, bits, &mut witnesses);
                per.insert(Definition::Image, Outcome::of(image));

                let kernel_ok = self.kernel_test(fd, bits, &mut witnesses);
                per.insert(Definition::KernelOrth, Outcome::of(kernel_ok));

                let eigen = self.eigen_test(fd, bits, &counts, &mut witnesses);
                per.insert(Definition::EigenV1, eigen);

                // sampled tests are recorded but never decide membership
                let spread_ok = self.spread_test(fd, bits, size, &mut witnesses);
                per.insert(Definition::SpreadSampled, Outcome::of(spread_ok));
                let bad = fd.switching.iter().position(|(r, r2)| r.and_count(bits) != r2.and_count(bits));
                if let Some(i) = bad {
                    let (r, r2) = &fd.switching[i];
                    witnesses.push(Witness {
                        definition: Definition::SwitchingSampled,
                        kind: "switching_pair",
                        index: Some(i),
                        expected: Some(r.and_count(bits).to_string()),
                        actual: Some(r2.and_count(bits).to_string()),
                    });
                }
                per.insert(Definition::SwitchingSampled, Outcome::of(bad.is_none()));

                is_cl = is_cl && kernel_ok && eigen != Outcome::Fail;
            }
        }
        CLVerdict { is_cl, x, size, level: self.level(), per_definition: per, witnesses }
    }

    /// `χ` lies in the row space of `M`: `d χ = Σ_i χ_{c_i} R_i`.
    fn image_test(&self, fd: &FullData, bits: &Bits, witnesses: &mut Vec<Witness>) -> bool {
        let nv = bits.len();
        let mut acc = vec![BigInt::zero(); nv];
        for (row, &c) in fd.rows.iter().zip(&fd.row_pivots) {
            if bits.get(c) {
                for (a, r) in acc.iter_mut().zip(row) {
                    *a += r;
                }
            }
        }
        let bad = (0..nv).find(|&j| {
            let want = if bits.get(j) { fd.d.clone() } else { BigInt::zero() };
            acc[j] != want
        });
        if let Some(j) = bad {
            witnesses.push(Witness {
                definition: Definition::Image,
                kind: "vertex",
                index: Some(j),
                expected: Some(if bits.get(j) { fd.d.to_string() } else { "0".into() }),
                actual: Some(acc[j].to_string()),
            });
        }
        bad.is_none()
    }

    fn kernel_test(&self, fd: &FullData, bits: &Bits, witnesses: &mut Vec<Witness>) -> bool {
        for (i, k) in fd.kernel.iter().enumerate() {
            let s: BigInt = bits.ones().map(|j| &k[j]).sum();
            if !s.is_zero() {
                witnesses.push(Witness {
                    definition: Definition::KernelOrth,
                    kind: "kernel_vector",
                    index: Some(i),
                    expected: Some("0".into()),
                    actual: Some(s.to_string()),
                });
                return false;
            }
        }
        true
    }

    /// `v = q^{nl} χ - |L| j` satisfies `K v = λ_1 v`.
    fn eigen_test(&self, fd: &FullData, bits: &Bits, counts: &[u64], witnesses: &mut Vec<Witness>) -> Outcome {
        let size = bits.count() as i128;
        let total = self.total as i128;
        if size == 0 || size == total {
            return Outcome::ZeroVector;
        }
        for (w, &c) in counts.iter().enumerate() {
            let kv = total * c as i128 - size * fd.lambda0;
            let v = total * bits.get(w) as i128 - size;
            if kv != fd.lambda1 * v {
                witnesses.push(Witness {
                    definition: Definition::EigenV1,
                    kind: "vertex",
                    index: Some(w),
                    expected: Some((fd.lambda1 * v).to_string()),
                    actual: Some(kv.to_string()),
                });
                return Outcome::Fail;
            }
        }
        Outcome::Pass
    }

    /// `top |L ∩ S| = |L|` for every sampled spread.
    fn spread_test(&self, fd: &FullData, bits: &Bits, size: usize, witnesses: &mut Vec<Witness>) -> bool {
        for (i, s) in fd.spreads.iter().enumerate() {
            let meet = s.members.iter().filter(|&&m| bits.get(m)).count();
            if meet as u64 * self.top != size as u64 {
                witnesses.push(Witness {
                    definition: Definition::SpreadSampled,
                    kind: "spread",
                    index: Some(i),
                    expected: Some(rational_x(size, self.top)),
                    actual: Some(meet.to_string()),
                });
                return false;
            }
        }
        true
    }
}

fn rational_x(size: usize, top: u64) -> String {
    crate::serde_util::rational_to_string(&BigRational::new(BigInt::from(size), BigInt::from(top)))
}

/// One-shot verdict.
pub fn verdict(set: &VertexSet, level: Level) -> Result<CLVerdict> {
    Ok(ClContext::new(set.params(), level, 0)?.verdict(set))
}

// ---- censuses --------------------------------------------------------------

/// For each member `π`, the number of members meeting `π` (including `π`).
pub fn meeting_census(ctx: &ClContext, set: &VertexSet) -> Vec<(usize, u64)> {
    let size = set.len() as u64;
    set.members().map(|p| (p, size - ctx.disjoint[p].and_count(set.bits()) as u64)).collect()
}

/// Members disjoint from / meeting both of two disjoint members, and `|S_0 ∩ L|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCensus {
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub pi: usize,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub pi_prime: usize,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub disjoint_both: u64,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub meeting_both: u64,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub s0_meet: u64,
}

/// Census for the pair `(π, π')` with `S_0 = sigma_spread(π, π')`.
pub fn pair_census(ctx: &ClContext, set: &VertexSet, pi: usize, pi_prime: usize) -> Result<PairCensus> {
    if !set.contains(pi) || !set.contains(pi_prime) {
        return Err(Error::PreconditionViolated("pair census needs two members".into()));
    }
    if !ctx.dt.disjoint(pi, pi_prime) {
        return Err(Error::PreconditionViolated("pair census needs disjoint members".into()));
    }
    let b = set.bits();
    let (r1, r2) = (&ctx.disjoint[pi], &ctx.disjoint[pi_prime]);
    let disjoint_both = r1.and(r2).and_count(b) as u64;
    let meeting_both = b.and_not(r1).and_not(r2).count() as u64;
    let s0 = sigma_spread(&ctx.sp, pi, pi_prime)?;
    let s0_meet = s0.iter().filter(|&&m| set.contains(m)).count() as u64;
    Ok(PairCensus { pi, pi_prime, disjoint_both, meeting_both, s0_meet })
}

// ---- triviality ------------------------------------------------------------

/// Evidence that a CL set is not a union of `x` intersecting families: no
/// intersecting subfamily exceeds `max_intersecting`, and `x` of them cannot
/// reach `size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonTrivialityCertificate {
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub max_intersecting: usize,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub x: u64,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triviality {
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub x: u64,
    pub trivial_as_pencil_union: bool,
    /// Points whose pencils make up the decomposition.
    pub cover: Vec<Point>,
    /// Hyperplanes whose vertex sets complete the decomposition (only when `n = l`).
    pub hyperplane_cover: Vec<TypedHyperplane>,
    pub unresolved: bool,
    pub certificate: Option<NonTrivialityCertificate>,
}

impl Triviality {
    pub fn decomposed(&self) -> bool {
        self.trivial_as_pencil_union || !self.hyperplane_cover.is_empty()
    }
}

enum Cover {
    Found(Vec<usize>),
    None,
    OutOfBudget,
}

fn exact_cover(target: &Bits, blocks: &[Bits], budget: u64) -> Cover {
    let nv = target.len();
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, b) in blocks.iter().enumerate() {
        for v in b.ones() {
            by_vertex[v].push(i);
        }
    }
    fn rec(
        rest: &Bits,
        blocks: &[Bits],
        by_vertex: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
        budget: u64,
    ) -> Option<bool> {
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let Some(v) = rest.first_one() else { return Some(true) };
        for &b in &by_vertex[v] {
            if blocks[b].is_subset(rest) {
                chosen.push(b);
                match rec(&rest.and_not(&blocks[b]), blocks, by_vertex, chosen, nodes, budget) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                chosen.pop();
            }
        }
        Some(false)
    }
    let mut chosen = Vec::new();
    let mut nodes = 0;
    match rec(target, blocks, &by_vertex, &mut chosen, &mut nodes, budget) {
        Some(true) => Cover::Found(chosen),
        Some(false) => Cover::None,
        None => Cover::OutOfBudget,
    }
}

/// All typed hyperplanes `a.u + b.w = 0`, `b` normalized.
fn all_hyperplanes(sp: &SpaceParams) -> Result<Vec<TypedHyperplane>> {
    let q = sp.q() as u64;
    let (n, l) = (sp.n(), sp.l());
    let mut out = Vec::new();
    for bi in 1..q.pow(l as u32) {
        let b = digits(bi, q, l);
        if b.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        for ai in 0..q.pow(n as u32) {
            out.push(sp.hyperplane(digits(ai, q, n), b.clone())?);
        }
    }
    Ok(out)
}

/// Default node budget for the classifier's searches.
pub const CLASSIFY_BUDGET: u64 = 10_000_000;

/// Tries to write `L` as a disjoint union of `x` pencils (and, when `n = l`,
/// hyperplane sets). Failing that, bounds the largest intersecting subfamily
/// of `L`; if `x` such families cannot cover `L` a certificate is returned.
pub fn classify_trivial(ctx: &ClContext, set: &VertexSet, budget: u64) -> Result<Triviality> {
    let v = ctx.verdict(set);
    let x = match (v.is_cl, v.x_integer()) {
        (true, Some(x)) => x,
        _ => return Err(Error::NotCL),
    };
    let sp = &ctx.sp;
    let nv = set.bits().len();
    let points = sp.enumerate_points()?;
    let mut pencil_pts = Vec::new();
    let mut blocks = Vec::new();
    for p in points {
        let b = Bits::from_indices(nv, sp.vertices_through(&p));
        if b.is_subset(set.bits()) {
            pencil_pts.push(p);
            blocks.push(b);
        }
    }
    match exact_cover(set.bits(), &blocks, budget) {
        Cover::Found(chosen) => {
            let mut cover: Vec<Point> = chosen.into_iter().map(|i| pencil_pts[i].clone()).collect();
            cover.sort();
            return Ok(Triviality {
                x,
                trivial_as_pencil_union: true,
                cover,
                hyperplane_cover: Vec::new(),
                unresolved: false,
                certificate: None,
            });
        }
        Cover::OutOfBudget | Cover::None => {}
    }
    if sp.n() == sp.l() {
        let mut hyps = Vec::new();
        for h in all_hyperplanes(sp)? {
            let b = sp.vertices_in_hyperplane(&h)?.bits().clone();
            if b.is_subset(set.bits()) {
                hyps.push(h);
                blocks.push(b);
            }
        }
        if !hyps.is_empty() {
            match exact_cover(set.bits(), &blocks, budget) {
                Cover::Found(chosen) => {
                    let np = pencil_pts.len();
                    let mut cover: Vec<Point> =
                        chosen.iter().filter(|&&i| i < np).map(|&i| pencil_pts[i].clone()).collect();
                    cover.sort();
                    let hyperplane_cover = chosen.iter().filter(|&&i| i >= np).map(|&i| hyps[i - np].clone()).collect();
                    return Ok(Triviality {
                        x,
                        trivial_as_pencil_union: false,
                        cover,
                        hyperplane_cover,
                        unresolved: false,
                        certificate: None,
                    });
                }
                Cover::OutOfBudget | Cover::None => {}
            }
        }
    }
    let certificate = match max_intersecting_in(ctx, set, budget) {
        Ok(m) if (x as u128) * (m as u128) < set.len() as u128 => {
            Some(NonTrivialityCertificate { max_intersecting: m, x, size: set.len() })
        }
        Ok(_) | Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Triviality {
        x,
        trivial_as_pencil_union: false,
        cover: Vec::new(),
        hyperplane_cover: Vec::new(),
        unresolved: certificate.is_none(),
        certificate,
    })
}

/// Size of the largest pairwise-intersecting subfamily of `L`.
pub fn max_intersecting_in(ctx: &ClContext, set: &VertexSet, budget: u64) -> Result<usize> {
    if set.len() > MAX_MATRIX_DIM {
        return Err(Error::CapExceeded { required: set.len() as u128, cap: MAX_MATRIX_DIM as u128 });
    }
    let nv = set.bits().len();
    let adj: Vec<Bits> = (0..nv)
        .map(|i| {
            let mut row = ctx.disjoint[i].not();
            row.unset(i);
            row
        })
        .collect();
    Ok(max_clique(&adj, set.bits(), budget)?.len())
}
