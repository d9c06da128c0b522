//! Exhaustive enumeration of Cameron-Liebler sets at small parameters.
//!
//! Sets are deduplicated by their raw bit vector; no isomorphism reduction is
//! attempted. Reports are sorted by the canonical bit key, so they do not
//! depend on the number of worker threads.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::attenuated::SpaceParams;
use crate::bits::Bits;
use crate::clique::max_clique;
use crate::clsets::{ClContext, Definition, Level, Outcome};
use crate::error::{Error, Result};
use crate::spectral::{build_incidence, ExactMatrix, MAX_MATRIX_DIM};
use crate::vertexset::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FullPowerSet,
    FixedXSubsets,
    KernelConstrained,
}

/// Largest vertex count for the power-set method.
pub const POWER_SET_MAX_VERTICES: usize = 16;
/// Largest `C(|M_n|, |L|)` for the fixed-size method when chosen automatically.
pub const FIXED_X_MAX_SUBSETS: u128 = 100_000_000;
/// Default limit on search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 32;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub x: Option<u64>,
    pub method: Option<Method>,
    pub node_budget: u64,
    pub record_elapsed: bool,
    /// Seed for the sampled spreads used when re-verifying found sets.
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { x: None, method: None, node_budget: DEFAULT_NODE_BUDGET, record_elapsed: false, seed: 0 }
    }
}

/// Cross-check of the membership tests over every subset visited by the power-set method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementSummary {
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub subsets: u64,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub disagreements: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    #[serde(serialize_with = "params_ser")]
    pub sp: SpaceParams,
    pub method: Method,
    pub x: Option<String>,
    /// Number of sets per parameter `x`.
    #[serde(serialize_with = "count_map_ser")]
    pub by_parameter: BTreeMap<u64, u64>,
    #[serde(serialize_with = "sets_ser")]
    pub sets: Vec<VertexSet>,
    /// Level at which every reported set was re-verified.
    pub verified_level: Level,
    pub agreement: Option<AgreementSummary>,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "elapsed_ser")]
    pub elapsed: Option<Duration>,
    pub dedup: &'static str,
}

fn params_ser<S: Serializer>(sp: &SpaceParams, s: S) -> std::result::Result<S::Ok, S::Error> {
    let m: BTreeMap<&str, String> =
        [("q", sp.q().to_string()), ("n", sp.n().to_string()), ("l", sp.l().to_string())].into();
    m.serialize(s)
}

fn count_map_ser<S: Serializer>(m: &BTreeMap<u64, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let m: BTreeMap<String, String> = m.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    m.serialize(s)
}

fn sets_ser<S: Serializer>(sets: &[VertexSet], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = sets.iter().map(|l| l.members().map(|i| i.to_string()).collect()).collect();
    v.serialize(s)
}

fn elapsed_ser<S: Serializer>(d: &Option<Duration>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_str(&format!("{:.3}", d.as_secs_f64())),
        None => s.serialize_none(),
    }
}

impl SearchReport {
    pub fn count(&self, x: u64) -> u64 {
        self.by_parameter.get(&x).copied().unwrap_or(0)
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.sets.binary_search(set).is_ok()
    }

    /// `count(x) = count(q^l - x)` for every `x`.
    pub fn complement_symmetric(&self) -> bool {
        let ql = (self.sp.q() as u64).pow(self.sp.l() as u32);
        self.by_parameter.iter().all(|(&x, &c)| x <= ql && self.count(ql - x) == c)
    }
}

/// All CL sets, or those with parameter `x`.
pub fn exhaustive(sp: &SpaceParams, x: Option<u64>) -> Result<SearchReport> {
    exhaustive_with(sp, &SearchOptions { x, ..Default::default() })
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn exhaustive_with(sp: &SpaceParams, opts: &SearchOptions) -> Result<SearchReport> {
    let start = Instant::now();
    let nv128 = sp.num_vertices_u128();
    if nv128 > MAX_MATRIX_DIM as u128 {
        return Err(Error::CapExceeded { required: nv128, cap: MAX_MATRIX_DIM as u128 });
    }
    let nv = nv128 as usize;
    let top = (sp.q() as u64).pow(((sp.n() - 1) * sp.l()) as u32);
    let ql = (sp.q() as u64).pow(sp.l() as u32);
    let target = match opts.x {
        Some(x) if x > ql => return Err(Error::BadParams(format!("x = {x} exceeds q^l = {ql}"))),
        Some(x) => Some(x * top),
        None => None,
    };
    let method = match opts.method {
        Some(m) => m,
        None if nv <= POWER_SET_MAX_VERTICES => Method::FullPowerSet,
        None if target.is_some_and(|t| binomial(nv as u128, t as u128) <= FIXED_X_MAX_SUBSETS) => Method::FixedXSubsets,
        None => Method::KernelConstrained,
    };
    let level = if build_incidence(sp).is_ok() { Level::Full } else { Level::Fast };
    let ctx = ClContext::new(sp, level, opts.seed)?;

    let (found, nodes, agreement) = match method {
        Method::FullPowerSet => power_set(&ctx, target, opts.node_budget)?,
        Method::FixedXSubsets => {
            let t = target.ok_or_else(|| Error::BadParams("fixed_x_subsets needs x".into()))?;
            let (f, n) = fixed_size(&ctx, t as usize, opts.node_budget)?;
            (f, n, None)
        }
        Method::KernelConstrained => {
            let (f, n) = kernel_constrained(sp, target.map(|t| t as usize), opts.node_budget)?;
            (f, n, None)
        }
    };

    let mut sets: Vec<VertexSet> = found.into_iter().map(|b| VertexSet::from_bits(sp, b)).collect();
    sets.sort();
    sets.dedup();
    let verdicts: Vec<_> = sets.par_iter().map(|s| ctx.verdict(s)).collect();
    let mut by_parameter = BTreeMap::new();
    for (s, v) in sets.iter().zip(&verdicts) {
        let x = match (v.is_cl, v.x_integer()) {
            (true, Some(x)) => x,
            _ => {
                return Err(Error::PreconditionViolated(format!(
                    "search produced a set of size {} that fails the verdict",
                    s.len()
                )))
            }
        };
        *by_parameter.entry(x).or_insert(0) += 1;
    }
    Ok(SearchReport {
        sp: sp.clone(),
        method,
        x: opts.x.map(|x| x.to_string()),
        by_parameter,
        sets,
        verified_level: level,
        agreement,
        nodes,
        elapsed: opts.record_elapsed.then(|| start.elapsed()),
        dedup: "raw bit vector, no isomorphism reduction",
    })
}

type Found = (Vec<Bits>, u64, Option<AgreementSummary>);

/// Tests every subset by the disjoint-count definition; at the full level
/// also checks that kernel orthogonality and eigenvector membership agree.
fn power_set(ctx: &ClContext, target: Option<u64>, budget: u64) -> Result<Found> {
    let nv = ctx.distance_table().len();
    if nv > POWER_SET_MAX_VERTICES {
        return Err(Error::CapExceeded { required: 1u128 << nv.min(127), cap: 1 << POWER_SET_MAX_VERTICES });
    }
    let total = 1u64 << nv;
    if total > budget {
        return Err(Error::CapExceeded { required: total as u128, cap: budget as u128 });
    }
    let full = ctx.level() == Level::Full;
    let chunks: Vec<(Vec<Bits>, u64)> = (0..total)
        .into_par_iter()
        .fold(
            || (Vec::new(), 0u64),
            |(mut found, mut bad), mask| {
                if target.is_some_and(|t| mask.count_ones() as u64 != t) {
                    return (found, bad);
                }
                let bits = Bits::from_indices(nv, (0..nv).filter(|&i| mask >> i & 1 == 1));
                let v = ctx.verdict_bits(&bits);
                let by_count = v.outcome(Definition::DisjointCount) == Outcome::Pass;
                if full {
                    let by_kernel = v.outcome(Definition::KernelOrth) == Outcome::Pass;
                    let by_eigen = v.outcome(Definition::EigenV1) != Outcome::Fail;
                    let by_image = v.outcome(Definition::Image) == Outcome::Pass;
                    if by_kernel != by_count || by_eigen != by_count || by_image != by_count {
                        bad += 1;
                    }
                }
                if by_count {
                    found.push(bits);
                }
                (found, bad)
            },
        )
        .collect();
    let mut found = Vec::new();
    let mut bad = 0;
    for (f, b) in chunks {
        found.extend(f);
        bad += b;
    }
    let subsets = match target {
        Some(t) => binomial(nv as u128, t as u128) as u64,
        None => total,
    };
    let agreement = full.then_some(AgreementSummary { subsets, disagreements: bad });
    Ok((found, subsets, agreement))
}

/// Subsets of a fixed size, pruned by the disjoint counts: each vertex must
/// end up disjoint from `(x - [w ∈ L]) Δ` members.
fn fixed_size(ctx: &ClContext, size: usize, budget: u64) -> Result<(Vec<Bits>, u64)> {
    let nv = ctx.distance_table().len();
    let top = ctx.pencil_size() as usize;
    if !size.is_multiple_of(top) {
        return Ok((Vec::new(), 0));
    }
    let x = size / top;
    let delta = ctx.delta() as usize;
    let hi = x * delta;
    let lo = x.saturating_sub(1) * delta;
    let rows = ctx.disjoint_rows();

    struct St<'a> {
        rows: &'a [Bits],
        nv: usize,
        size: usize,
        lo: usize,
        hi: usize,
        chosen: Bits,
        counts: Vec<usize>,
        nodes: u64,
        budget: u64,
        out: Vec<Bits>,
    }
    impl St<'_> {
        fn feasible(&self, next: usize) -> bool {
            // vertices >= next are still open: at most `next..` more disjoint members
            let open = Bits::from_indices(self.nv, next..self.nv);
            (0..self.nv).all(|w| {
                let c = self.counts[w];
                let avail = self.rows[w].and_count(&open);
                let (want_lo, want_hi) = if w < next {
                    if self.chosen.get(w) {
                        (self.lo, self.lo)
                    } else {
                        (self.hi, self.hi)
                    }
                } else {
                    (self.lo, self.hi)
                };
                c <= want_hi && c + avail >= want_lo
            })
        }

        fn rec(&mut self, next: usize, picked: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::CapExceeded { required: self.nodes as u128, cap: self.budget as u128 });
            }
            if picked == self.size {
                let ok = (0..self.nv).all(|w| {
                    let want = if self.chosen.get(w) { self.lo } else { self.hi };
                    self.counts[w] == want
                });
                if ok {
                    self.out.push(self.chosen.clone());
                }
                return Ok(());
            }
            if next == self.nv || self.nv - next < self.size - picked {
                return Ok(());
            }
            // include `next`
            self.chosen.set(next);
            for w in self.rows[next].ones() {
                self.counts[w] += 1;
            }
            if self.feasible(next + 1) {
                self.rec(next + 1, picked + 1)?;
            }
            for w in self.rows[next].ones() {
                self.counts[w] -= 1;
            }
            self.chosen.unset(next);
            // exclude `next`
            if self.feasible(next + 1) {
                self.rec(next + 1, picked)?;
            }
            Ok(())
        }
    }
    let mut st =
        St { rows, nv, size, lo, hi, chosen: Bits::new(nv), counts: vec![0; nv], nodes: 0, budget, out: Vec::new() };
    st.rec(0, 0)?;
    Ok((st.out, st.nodes))
}

/// A basis of `ker(M)` in which every vector has a "tail pivot": its last
/// nonzero coordinate is zero in all other basis vectors.
fn tail_pivot_kernel(sp: &SpaceParams) -> Result<Vec<Vec<i64>>> {
    let m = build_incidence(sp)?.matrix;
    let kernel = m.kernel_integer_basis();
    if kernel.is_empty() {
        return Ok(Vec::new());
    }
    let nv = m.cols();
    let mut rev = ExactMatrix::zeros(kernel.len(), nv)?;
    for (i, k) in kernel.iter().enumerate() {
        for (j, e) in k.iter().enumerate() {
            rev.set(i, nv - 1 - j, e.clone());
        }
    }
    let (red, pivots) = rev.fraction_free_rref();
    let mut out = Vec::with_capacity(pivots.len());
    for i in 0..pivots.len() {
        let mut row: Vec<BigInt> = (0..nv).map(|j| red.get(i, nv - 1 - j).clone()).collect();
        let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g > BigInt::one() {
            row.iter_mut().for_each(|x| *x /= &g);
        }
        let row: Option<Vec<i64>> = row.iter().map(|x| x.to_i64()).collect();
        out.push(row.ok_or_else(|| Error::Unsupported("kernel entries exceed i64".into()))?);
    }
    Ok(out)
}

/// Depth-first search over 0/1 vectors orthogonal to `ker(M)`, in canonical
/// vertex order. Each kernel vector gives one linear equation; the reachable
/// range of its partial sum prunes the tree, and the tail pivots force the
/// last variable of every equation.
fn kernel_constrained(sp: &SpaceParams, size: Option<usize>, budget: u64) -> Result<(Vec<Bits>, u64)> {
    let kernel = tail_pivot_kernel(sp)?;
    let nv = sp.num_vertices();
    let nk = kernel.len();
    // reachable range of Σ_{j' >= j} k_{j'} z_{j'}
    let mut pos = vec![vec![0i64; nv + 1]; nk];
    let mut neg = vec![vec![0i64; nv + 1]; nk];
    for (i, k) in kernel.iter().enumerate() {
        for j in (0..nv).rev() {
            pos[i][j] = pos[i][j + 1] + k[j].max(0);
            neg[i][j] = neg[i][j + 1] + k[j].min(0);
        }
    }
    let by_col: Vec<Vec<(usize, i64)>> =
        (0..nv).map(|j| (0..nk).filter(|&i| kernel[i][j] != 0).map(|i| (i, kernel[i][j])).collect()).collect();
    let prob = Problem { nv, size, pos, neg, by_col };

    // split on a prefix for parallelism
    let depth = nv.min(12);
    let mut prefixes = vec![State::new(nk, nv)];
    for j in 0..depth {
        let mut next = Vec::with_capacity(prefixes.len() * 2);
        for s in prefixes {
            for z in [false, true] {
                let mut t = s.clone();
                if prob.assign(&mut t, j, z) {
                    next.push(t);
                }
            }
        }
        prefixes = next;
    }
    let results: Vec<Result<(Vec<Bits>, u64)>> = prefixes
        .into_par_iter()
        .map(|mut s| {
            let mut out = Vec::new();
            let mut nodes = 0;
            prob.dfs(&mut s, depth, &mut out, &mut nodes, budget)?;
            Ok((out, nodes))
        })
        .collect();
    let mut found = Vec::new();
    let mut nodes = 0u64;
    for r in results {
        let (f, n) = r?;
        found.extend(f);
        nodes = nodes.saturating_add(n);
        if nodes > budget {
            return Err(Error::CapExceeded { required: nodes as u128, cap: budget as u128 });
        }
    }
    Ok((found, nodes))
}

struct Problem {
    nv: usize,
    size: Option<usize>,
    pos: Vec<Vec<i64>>,
    neg: Vec<Vec<i64>>,
    by_col: Vec<Vec<(usize, i64)>>,
}

#[derive(Clone)]
struct State {
    partial: Vec<i64>,
    bits: Bits,
    picked: usize,
}

impl State {
    fn new(nk: usize, nv: usize) -> Self {
        Self { partial: vec![0; nk], bits: Bits::new(nv), picked: 0 }
    }
}

impl Problem {
    /// Sets variable `j` and reports whether every touched equation stays solvable.
    fn assign(&self, s: &mut State, j: usize, z: bool) -> bool {
        if z {
            s.bits.set(j);
            s.picked += 1;
            for &(i, k) in &self.by_col[j] {
                s.partial[i] += k;
            }
        }
        if let Some(size) = self.size {
            if s.picked > size || s.picked + (self.nv - j - 1) < size {
                return false;
            }
        }
        self.by_col[j].iter().all(|&(i, _)| {
            let p = s.partial[i];
            p + self.neg[i][j + 1] <= 0 && 0 <= p + self.pos[i][j + 1]
        })
    }

    fn unassign(&self, s: &mut State, j: usize) {
        if s.bits.get(j) {
            s.bits.unset(j);
            s.picked -= 1;
            for &(i, k) in &self.by_col[j] {
                s.partial[i] -= k;
            }
        }
    }

    fn dfs(&self, s: &mut State, j: usize, out: &mut Vec<Bits>, nodes: &mut u64, budget: u64) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::CapExceeded { required: *nodes as u128, cap: budget as u128 });
        }
        if j == self.nv {
            out.push(s.bits.clone());
            return Ok(());
        }
        for z in [false, true] {
            if self.assign(s, j, z) {
                self.dfs(s, j + 1, out, nodes, budget)?;
            }
            self.unassign(s, j);
        }
        Ok(())
    }
}

// ---- disjointness and intersecting families --------------------------------

/// Default node budget for clique searches.
pub const CLIQUE_BUDGET: u64 = 50_000_000;

/// Largest number of pairwise disjoint members of `L`.
pub fn max_disjoint_in(ctx: &ClContext, set: &VertexSet) -> Result<usize> {
    if set.len() > MAX_MATRIX_DIM {
        return Err(Error::CapExceeded { required: set.len() as u128, cap: MAX_MATRIX_DIM as u128 });
    }
    Ok(max_clique(ctx.disjoint_rows(), set.bits(), CLIQUE_BUDGET)?.len())
}

/// Largest vertex count accepted by `ekr_check`.
pub const EKR_MAX_VERTICES: u128 = 256;

/// Size of a largest intersecting family of vertices.
pub fn ekr_check(sp: &SpaceParams) -> Result<usize> {
    let nv = sp.num_vertices_u128();
    if nv > EKR_MAX_VERTICES {
        return Err(Error::CapExceeded { required: nv, cap: EKR_MAX_VERTICES });
    }
    let ctx = ClContext::new(sp, Level::Fast, 0)?;
    crate::clsets::max_intersecting_in(&ctx, &VertexSet::full(sp), CLIQUE_BUDGET)
}
