//! Brute-force enumeration oracles, one per closed form in [`crate::counting`].
//!
//! Each census walks the actual objects (subspaces, matrices, vertices) and
//! counts them with subspace or rank tests. `budget` bounds the number of
//! objects enumerated; exceeding it returns `CapExceeded` before any work.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::attenuated::{Point, SpaceParams, Vertex};
use crate::counting::{gbinom, qpow};
use crate::error::{Error, Result};
use crate::fqlinalg::{for_each_subspace, FqMatrix, Subspace};
use crate::gf::{Elem, FqField};

fn check(required: BigInt, budget: u128) -> Result<()> {
    let req = required.to_u128().unwrap_or(u128::MAX);
    if req > budget {
        return Err(Error::CapExceeded { required: req, cap: budget });
    }
    Ok(())
}

fn unit(len: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// Counts the `k`-subspaces of `F_q^n`.
pub fn gaussian_binomial(f: &FqField, n: usize, k: usize, budget: u128) -> Result<BigInt> {
    check(gbinom(n as i64, k as i64, f.q()), budget)?;
    let mut count = 0u64;
    for_each_subspace(f, n, k, |_| count += 1);
    Ok(count.into())
}

/// Counts `n x l` matrices of rank `m` by enumerating all `q^{nl}`.
pub fn rank_count(f: &FqField, n: usize, l: usize, m: usize, budget: u128) -> Result<BigInt> {
    let total = qpow(f.q(), (n * l) as i64);
    check(total.clone(), budget)?;
    let q = f.q() as u64;
    let mut count = 0u64;
    let mut data = vec![0 as Elem; n * l];
    for idx in 0..total.to_u64().unwrap() {
        let mut rest = idx;
        for slot in data.iter_mut() {
            *slot = (rest % q) as Elem;
            rest /= q;
        }
        if FqMatrix::new(n, l, data.clone()).rank(f) == m {
            count += 1;
        }
    }
    Ok(count.into())
}

/// Scans every `j`-space of `F_q^{n+l}` and counts those of type `(j, 0)`
/// through a fixed `(i, 0)` subspace.
pub fn count_through(sp: &SpaceParams, i: usize, j: usize, budget: u128) -> Result<BigInt> {
    if i < 1 || i > j || j > sp.n() {
        return Err(Error::BadIndices(format!("need 1 <= i <= j <= n, got i={i}, j={j}")));
    }
    let f = sp.field();
    let amb = sp.ambient_dim();
    check(gbinom(amb as i64, j as i64, f.q()), budget)?;
    // τ = <e_1 + e_{n+1}, e_2, ..., e_i>, which meets E trivially
    let mut gens = vec![unit(amb, 0)];
    gens[0][sp.n()] = 1;
    gens.extend((1..i).map(|c| unit(amb, c)));
    let tau = Subspace::span(f, amb, &gens);
    let mut count = 0u64;
    for_each_subspace(f, amb, j, |s| {
        if sp.dim_meet_e(&s) == 0 && s.contains(f, &tau).unwrap() {
            count += 1;
        }
    });
    Ok(count.into())
}

fn all_vertices(sp: &SpaceParams, budget: u128) -> Result<impl Iterator<Item = Vertex> + '_> {
    check(sp.num_vertices_u128().into(), budget)?;
    Ok(sp.vertex_range(0, sp.num_vertices_u128() as usize))
}

fn disjoint(f: &FqField, a: &Vertex, b: &Vertex) -> bool {
    a.dim_intersection(f, b) == 0
}

/// Vertices disjoint from the zero-matrix vertex.
pub fn count_disjoint_pair(sp: &SpaceParams, budget: u128) -> Result<BigInt> {
    let f = sp.field();
    let pi = sp.vertex(0);
    Ok(all_vertices(sp, budget)?.filter(|w| disjoint(f, &pi, w)).count().into())
}

/// The point `<e_1 + e_{n+1}>`, which is not on the zero-matrix vertex.
fn off_point(sp: &SpaceParams) -> Point {
    Point { u: unit(sp.n(), 0), v: unit(sp.l(), 0) }
}

/// `(Δ, C)`: vertices through a point off `π`, split by disjointness from `π`.
pub fn delta_and_c(sp: &SpaceParams, budget: u128) -> Result<(BigInt, BigInt)> {
    let f = sp.field();
    let pi = sp.vertex(0);
    let tau = off_point(sp);
    let (mut d, mut c) = (0u64, 0u64);
    for w in all_vertices(sp, budget)?.filter(|w| w.incident(f, &tau)) {
        if disjoint(f, &pi, &w) {
            d += 1;
        } else {
            c += 1;
        }
    }
    Ok((d.into(), c.into()))
}

/// Vertices in the hyperplane `w_1 = 0` that are disjoint from a vertex `π`
/// chosen inside or outside it.
pub fn count_hyperplane_disjoint(sp: &SpaceParams, pi_in_v: bool, budget: u128) -> Result<BigInt> {
    let f = sp.field();
    let h = sp.footnote_hyperplane(&vec![0; sp.n()])?;
    let mut pi = sp.vertex(0);
    if !pi_in_v {
        pi.a.set(0, 0, 1);
    }
    assert_eq!(h.contains_vertex(f, &pi), pi_in_v);
    let count = all_vertices(sp, budget)?.filter(|w| h.contains_vertex(f, w) && disjoint(f, &pi, w)).count();
    Ok(count.into())
}

/// Three pairwise disjoint `n`-spaces of `F_q^{2n}`: the two coordinate halves and the diagonal.
struct Triple {
    pi1: Subspace,
    pi2: Subspace,
    pi3: Subspace,
}

fn triple(f: &FqField, n: usize) -> Triple {
    let amb = 2 * n;
    let pi1 = Subspace::span(f, amb, &(0..n).map(|i| unit(amb, i)).collect::<Vec<_>>());
    let pi2 = Subspace::span(f, amb, &(n..amb).map(|i| unit(amb, i)).collect::<Vec<_>>());
    let diag: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut v = unit(amb, i);
            v[n + i] = 1;
            v
        })
        .collect();
    let pi3 = Subspace::span(f, amb, &diag);
    Triple { pi1, pi2, pi3 }
}

fn meets(f: &FqField, a: &Subspace, b: &Subspace) -> usize {
    a.intersection(f, b).unwrap().dim()
}

fn check_kmn(k: usize, m: usize, n: usize, k_min: usize) -> Result<()> {
    if k < k_min || k > m || m > n {
        return Err(Error::BadIndices(format!("need {k_min} <= k <= m <= n, got k={k}, m={m}, n={n}")));
    }
    Ok(())
}

/// `m`-spaces through `σ_0 = <e_i + e_{n+i} : i < k>` missing both halves of `F_q^{2n}`.
pub fn d_km(f: &FqField, n: usize, k: usize, m: usize, budget: u128) -> Result<BigInt> {
    check_kmn(k, m, n, 1)?;
    check(gbinom(2 * n as i64, m as i64, f.q()), budget)?;
    let t = triple(f, n);
    let amb = 2 * n;
    let sigma0: Vec<Vec<Elem>> = (0..k)
        .map(|i| {
            let mut v = unit(amb, i);
            v[n + i] = 1;
            v
        })
        .collect();
    let sigma0 = Subspace::span(f, amb, &sigma0);
    let mut count = 0u64;
    for_each_subspace(f, amb, m, |s| {
        if s.contains(f, &sigma0).unwrap() && meets(f, &s, &t.pi1) == 0 && meets(f, &s, &t.pi2) == 0 {
            count += 1;
        }
    });
    Ok(count.into())
}

/// Pairs `(τ, σ)`: `τ` a `k`-space of the diagonal, `σ ⊇ τ` an `m`-space missing both halves.
pub fn x_km(f: &FqField, n: usize, k: usize, m: usize, budget: u128) -> Result<BigInt> {
    check_kmn(k, m, n, 1)?;
    check(gbinom(2 * n as i64, m as i64, f.q()) + gbinom(n as i64, k as i64, f.q()), budget)?;
    let t = triple(f, n);
    let amb = 2 * n;
    let mut taus = Vec::new();
    for_each_subspace(f, n, k, |s| {
        // lift a subspace of F_q^n onto the diagonal
        let lifted: Vec<Vec<Elem>> = s
            .basis_vectors()
            .map(|r| {
                let mut v = r.to_vec();
                v.extend_from_slice(r);
                v
            })
            .collect();
        taus.push(Subspace::span(f, amb, &lifted));
    });
    let mut count = 0u64;
    for_each_subspace(f, amb, m, |s| {
        if meets(f, &s, &t.pi1) == 0 && meets(f, &s, &t.pi2) == 0 {
            count += taus.iter().filter(|tau| s.contains(f, tau).unwrap()).count() as u64;
        }
    });
    Ok(count.into())
}

/// `m`-spaces missing both halves and meeting the diagonal in dimension exactly `k`.
pub fn z_km(f: &FqField, n: usize, k: usize, m: usize, budget: u128) -> Result<BigInt> {
    if k > m || m > n {
        return Err(Error::BadIndices(format!("need k <= m <= n, got k={k}, m={m}, n={n}")));
    }
    check(gbinom(2 * n as i64, m as i64, f.q()), budget)?;
    let t = triple(f, n);
    let mut count = 0u64;
    for_each_subspace(f, 2 * n, m, |s| {
        if meets(f, &s, &t.pi1) == 0 && meets(f, &s, &t.pi2) == 0 && meets(f, &s, &t.pi3) == k {
            count += 1;
        }
    });
    Ok(count.into())
}

/// `m`-spaces of `F_q^{2n}` missing all three of the fixed `n`-spaces.
pub fn z_0m(f: &FqField, n: usize, m: usize, budget: u128) -> Result<BigInt> {
    z_km(f, n, 0, m, budget)
}

/// The two disjoint vertices used for all `W` censuses: `π = 0` and `π' = [I_n; 0]`,
/// spanning `Σ = <e_1, ..., e_{2n}>`.
pub struct SigmaFrame {
    pub pi: Vertex,
    pub pi_prime: Vertex,
    pub sigma: Subspace,
}

pub fn sigma_frame(sp: &SpaceParams) -> SigmaFrame {
    let (n, l) = (sp.n(), sp.l());
    let pi = sp.vertex(0);
    let mut a = FqMatrix::zeros(l, n);
    for i in 0..n {
        a.set(i, i, 1);
    }
    let pi_prime = Vertex { a };
    let amb = sp.ambient_dim();
    let sigma = Subspace::span(sp.field(), amb, &(0..2 * n).map(|i| unit(amb, i)).collect::<Vec<_>>());
    SigmaFrame { pi, pi_prime, sigma }
}

/// `W_i` for `i = 0..n`: vertices disjoint from `π, π'`, by `dim(π'' ∩ Σ)`.
pub fn w_i(sp: &SpaceParams, budget: u128) -> Result<Vec<BigInt>> {
    let f = sp.field();
    let fr = sigma_frame(sp);
    let mut counts = vec![0u64; sp.n() + 1];
    for w in all_vertices(sp, budget)? {
        if disjoint(f, &fr.pi, &w) && disjoint(f, &fr.pi_prime, &w) {
            counts[meets(f, &w.to_subspace(f), &fr.sigma)] += 1;
        }
    }
    Ok(counts.into_iter().map(BigInt::from).collect())
}

/// Distribution of a per-point count over a family of points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointCensus {
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub points: u64,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub min: u64,
    #[serde(serialize_with = "crate::serde_util::display_str")]
    pub max: u64,
    #[serde(serialize_with = "crate::serde_util::rational_str")]
    pub mean: BigRational,
    /// Whether every point of the family was examined.
    pub exhaustive: bool,
}

impl PointCensus {
    fn from_counts(counts: &[u64], exhaustive: bool) -> Self {
        let total: u64 = counts.iter().sum();
        let points = counts.len() as u64;
        Self {
            points,
            min: counts.iter().copied().min().unwrap_or(0),
            max: counts.iter().copied().max().unwrap_or(0),
            mean: if points == 0 { BigRational::zero() } else { BigRational::new(total.into(), points.into()) },
            exhaustive,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.min == self.max
    }
}

fn common_disjoint_through(sp: &SpaceParams, fr: &SigmaFrame, p: &Point) -> u64 {
    let f = sp.field();
    sp.vertices_through(p)
        .into_iter()
        .map(|i| sp.vertex(i))
        .filter(|w| disjoint(f, &fr.pi, w) && disjoint(f, &fr.pi_prime, w))
        .count() as u64
}

/// Points of `Σ` off `π` and `π'`: `(u, (s; 0))` with `s ∉ {0, u}`.
pub fn sigma_points(sp: &SpaceParams) -> Result<Vec<Point>> {
    let n = sp.n();
    Ok(sp
        .enumerate_points()?
        .into_iter()
        .filter(|p| p.v[n..].iter().all(|&c| c == 0) && p.v[..n].iter().any(|&c| c != 0) && p.v[..n] != p.u[..])
        .collect())
}

/// `|M'_n(τ) ∩ M̄_n(π) ∩ M̄_n(π')|` for every point `τ ∈ Σ` off `π ∪ π'`.
pub fn w_sigma(sp: &SpaceParams, budget: u128) -> Result<PointCensus> {
    let pts = sigma_points(sp)?;
    let per = qpow(sp.q(), ((sp.n() - 1) * sp.l()) as i64);
    check(per * pts.len(), budget)?;
    let fr = sigma_frame(sp);
    let counts: Vec<u64> = pts.iter().map(|p| common_disjoint_through(sp, &fr, p)).collect();
    Ok(PointCensus::from_counts(&counts, true))
}

/// The same count for points `τ'` outside `Σ`. When all of them do not fit
/// in `budget`, the first ones in canonical order are taken.
pub fn w_sigma_bar(sp: &SpaceParams, budget: u128) -> Result<PointCensus> {
    let n = sp.n();
    let pts: Vec<Point> = sp.enumerate_points()?.into_iter().filter(|p| p.v[n..].iter().any(|&c| c != 0)).collect();
    let per = qpow(sp.q(), ((n - 1) * sp.l()) as i64).to_u128().unwrap_or(u128::MAX).max(1);
    let take = ((budget / per) as usize).min(pts.len());
    if take == 0 {
        return Err(Error::CapExceeded { required: per, cap: budget });
    }
    let fr = sigma_frame(sp);
    let counts: Vec<u64> = pts[..take].iter().map(|p| common_disjoint_through(sp, &fr, p)).collect();
    Ok(PointCensus::from_counts(&counts, take == pts.len()))
}

/// Vertices through a point off `π` meeting `π` in exactly a 1-space.
pub fn lemma46(sp: &SpaceParams, budget: u128) -> Result<BigInt> {
    let f = sp.field();
    let pi = sp.vertex(0);
    let tau = off_point(sp);
    let count = all_vertices(sp, budget)?.filter(|w| w.incident(f, &tau) && w.dim_intersection(f, &pi) == 1).count();
    Ok(count.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting;

    const BUDGET: u128 = 1 << 18;

    fn sp(q: u32, n: usize, l: usize) -> SpaceParams {
        SpaceParams::new(q, n, l).unwrap()
    }

    #[test]
    fn spec_census_examples() {
        let f2 = FqField::new(2).unwrap();
        assert_eq!(gaussian_binomial(&f2, 4, 2, BUDGET).unwrap(), 35.into());
        assert_eq!(rank_count(&f2, 2, 2, 1, BUDGET).unwrap(), 9.into());
        assert_eq!(count_through(&sp(2, 2, 2), 1, 2, BUDGET).unwrap(), 4.into());
        assert_eq!(count_disjoint_pair(&sp(2, 2, 2), BUDGET).unwrap(), 6.into());
        assert_eq!(delta_and_c(&sp(2, 2, 3), BUDGET).unwrap().0, 6.into());
        assert_eq!(d_km(&f2, 2, 1, 2, BUDGET).unwrap(), 2.into());
        assert_eq!(z_0m(&f2, 2, 1, BUDGET).unwrap(), 6.into());
        assert_eq!(z_km(&f2, 2, 2, 2, BUDGET).unwrap(), 1.into());
        assert_eq!(w_i(&sp(2, 2, 4), BUDGET).unwrap()[0], 96.into());
    }

    #[test]
    fn d_km_223_matches_closed_form() {
        let f2 = FqField::new(2).unwrap();
        let census = d_km(&f2, 3, 1, 2, BUDGET).unwrap();
        assert_eq!(census, counting::d_km(2, 3, 1, 2).unwrap().value);
        assert_eq!(census, 18.into());
    }

    #[test]
    fn budget_is_enforced() {
        let f3 = FqField::new(3).unwrap();
        assert!(matches!(rank_count(&f3, 3, 4, 2, 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn w_sigma_mean_matches_double_count() {
        for (q, n, l) in [(2, 2, 4), (3, 2, 4), (3, 1, 3)] {
            let s = sp(q, n, l);
            let census = w_sigma(&s, 1 << 22).unwrap();
            assert_eq!(Some(census.mean), counting::w_counts(&s).w_sigma_double_count);
        }
    }
}
