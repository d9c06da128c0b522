//! Table-driven arithmetic in `F_q` for prime powers `q <= 16`, plus the
//! degree-`l` extension `F_{q^l}` used by the spread construction.
//!
//! Elements of `F_q` are integers `0..q` whose base-`p` digits are the
//! coefficients of a polynomial in `t` (digit `i` is the coefficient of
//! `t^i`) reduced modulo the field's defining polynomial.

use crate::error::{Error, Result};

/// Largest field order supported.
pub const MAX_Q: u32 = 16;

/// Element of `F_q`, encoded as described in the module docs.
pub type Elem = u8;

/// Arithmetic context for `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    q: u32,
    p: u32,
    e: u32,
    /// Monic defining polynomial over `F_p`, constant term first, length `e + 1`.
    modulus: Vec<u8>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    exp_table: Vec<Elem>,
    log_table: Vec<u32>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Minimal view of a field needed by the polynomial helpers below.
trait Coeffs {
    fn order(&self) -> u32;
    fn add(&self, a: Elem, b: Elem) -> Elem;
    fn mul(&self, a: Elem, b: Elem) -> Elem;
    fn neg(&self, a: Elem) -> Elem;
}

struct PrimeField(u32);

impl Coeffs for PrimeField {
    fn order(&self) -> u32 {
        self.0
    }
    fn add(&self, a: Elem, b: Elem) -> Elem {
        ((a as u32 + b as u32) % self.0) as Elem
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        ((a as u32 * b as u32) % self.0) as Elem
    }
    fn neg(&self, a: Elem) -> Elem {
        ((self.0 - a as u32) % self.0) as Elem
    }
}

impl Coeffs for FqField {
    fn order(&self) -> u32 {
        self.q
    }
    fn add(&self, a: Elem, b: Elem) -> Elem {
        FqField::add(self, a, b)
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        FqField::mul(self, a, b)
    }
    fn neg(&self, a: Elem) -> Elem {
        FqField::neg(self, a)
    }
}

/// Remainder of `a` modulo the monic polynomial `m` (both constant term first).
fn poly_rem<F: Coeffs>(f: &F, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            let c = f.neg(lead);
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = f.add(r[shift + i], f.mul(c, mi));
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomials of degree `d`, in lexicographic order of
/// `(c_0, c_1, ..., c_{d-1})` with each coefficient ordered by its encoding.
fn monic_polys(order: u32, d: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = (order as u64).pow(d as u32);
    (0..total).map(move |mut idx| {
        let mut coeffs = vec![0 as Elem; d + 1];
        for i in (0..d).rev() {
            coeffs[i] = (idx % order as u64) as Elem;
            idx /= order as u64;
        }
        coeffs[d] = 1;
        coeffs
    })
}

fn is_irreducible<F: Coeffs>(f: &F, poly: &[Elem]) -> bool {
    let d = poly.len() - 1;
    if d == 0 {
        return false;
    }
    for k in 1..=d / 2 {
        for g in monic_polys(f.order(), k) {
            if poly_rem(f, poly, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible<F: Coeffs>(f: &F, d: usize) -> Vec<Elem> {
    monic_polys(f.order(), d).find(|g| is_irreducible(f, g)).expect("irreducible polynomials exist in every degree")
}

impl FqField {
    /// Builds `F_q`. The defining polynomial is the lexicographically least
    /// monic irreducible of degree `e` over `F_p`.
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(Error::Unsupported(format!("field order {q} exceeds {MAX_Q}")));
        }
        let pf = PrimeField(p);
        let modulus = least_irreducible(&pf, e as usize);
        debug_assert!(is_irreducible(&pf, &modulus));

        let qs = q as usize;
        let digits = |mut x: usize| -> Vec<Elem> {
            (0..e)
                .map(|_| {
                    let d = (x % p as usize) as Elem;
                    x /= p as usize;
                    d
                })
                .collect()
        };
        let undigits =
            |v: &[Elem]| -> Elem { v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize) as Elem };

        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..qs {
            let da = digits(a);
            for b in 0..qs {
                let db = digits(b);
                let sum: Vec<Elem> = da.iter().zip(&db).map(|(&x, &y)| pf.add(x, y)).collect();
                add[a * qs + b] = undigits(&sum);
                let mut prod = vec![0 as Elem; 2 * e as usize - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = pf.add(prod[i + j], pf.mul(x, y));
                    }
                }
                let mut r = poly_rem(&pf, &prod, &modulus);
                r.resize(e as usize, 0);
                mul[a * qs + b] = undigits(&r);
            }
        }
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }

        // smallest primitive element
        let generator = (1..qs)
            .find(|&g| {
                let mut x = g;
                let mut order = 1;
                while x != 1 {
                    x = mul[x * qs + g] as usize;
                    order += 1;
                }
                order == qs - 1
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp_table = Vec::with_capacity(qs - 1);
        let mut log_table = vec![0u32; qs];
        let mut x = 1usize;
        for k in 0..qs - 1 {
            exp_table.push(x as Elem);
            log_table[x] = k as u32;
            x = mul[x * qs + generator] as usize;
        }

        Ok(Self { q, p, e, modulus, add, mul, neg, inv, exp_table, log_table })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Defining polynomial over `F_p`, constant term first (monic, length `e + 1`).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn exp_table(&self) -> &[Elem] {
        &self.exp_table
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log_table
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let l = self.log_table[a as usize] as u64 * k % (self.q as u64 - 1);
        self.exp_table[l as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }
}

/// The extension `F_{q^l}` as polynomials of degree `< l` over `F_q`.
///
/// An element is a coefficient vector in the power basis `1, t, ..., t^{l-1}`,
/// which is also its coordinate vector in `F_q^l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    base: FqField,
    degree: usize,
    modulus: Vec<Elem>,
}

impl ExtField {
    pub fn new(base: &FqField, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::BadParams("extension degree must be at least 1".into()));
        }
        let modulus = least_irreducible(base, degree);
        Ok(Self { base: base.clone(), degree, modulus })
    }

    pub fn base(&self) -> &FqField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Defining polynomial over `F_q`, constant term first, monic.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        (self.base.q() as u64).pow(self.degree as u32)
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![0; self.degree]
    }

    pub fn one(&self) -> Vec<Elem> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    /// Element with index `idx`, read as base-`q` digits with `t^0` least significant.
    pub fn from_index(&self, mut idx: u64) -> Vec<Elem> {
        let q = self.base.q() as u64;
        (0..self.degree)
            .map(|_| {
                let d = (idx % q) as Elem;
                idx /= q;
                d
            })
            .collect()
    }

    pub fn to_index(&self, a: &[Elem]) -> u64 {
        let q = self.base.q() as u64;
        a.iter().rev().fold(0, |acc, &d| acc * q + d as u64)
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.base.sub(x, y)).collect()
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &self.base;
        let mut prod = vec![0 as Elem; 2 * self.degree - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        let mut r = poly_rem(f, &prod, &self.modulus);
        r.resize(self.degree, 0);
        r
    }

    pub fn pow(&self, a: &[Elem], mut k: u64) -> Vec<Elem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(q^l - 2)`. Panics on zero.
    pub fn inv(&self, a: &[Elem]) -> Vec<Elem> {
        assert!(a.iter().any(|&c| c != 0), "zero has no inverse");
        self.pow(a, self.order() - 2)
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.order()).map(|i| self.from_index(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(FqField::new(6), Err(Error::NotPrimePower(6)));
        assert_eq!(FqField::new(12), Err(Error::NotPrimePower(12)));
        assert_eq!(FqField::new(1), Err(Error::NotPrimePower(1)));
        assert!(matches!(FqField::new(32), Err(Error::Unsupported(_))));
        assert!(matches!(FqField::new(17), Err(Error::Unsupported(_))));
    }

    #[test]
    fn f2_characteristic_two() {
        let f = FqField::new(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn f4_modulus_and_square_of_t() {
        let f = FqField::new(4).unwrap();
        // t^2 + t + 1 is the only irreducible quadratic over F_2
        let quadratics: Vec<_> = monic_polys(2, 2).filter(|g| is_irreducible(&PrimeField(2), g)).collect();
        assert_eq!(quadratics, vec![vec![1, 1, 1]]);
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // t is encoded as 2, t + 1 as 3
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn chosen_moduli() {
        assert_eq!(FqField::new(8).unwrap().modulus(), &[1, 0, 1, 1]);
        assert_eq!(FqField::new(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FqField::new(16).unwrap().modulus(), &[1, 0, 0, 1, 1]);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in ORDERS {
            let f = FqField::new(q).unwrap();
            assert_eq!(f.exp_table().len() as u32, q - 1);
            let mut seen = f.exp_table().to_vec();
            seen.sort();
            assert_eq!(seen, (1..q as u8).collect::<Vec<_>>());
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for q in ORDERS {
            let f = FqField::new(q).unwrap();
            let p = f.characteristic() as u64;
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                }
            }
        }
    }

    #[test]
    fn ext_degree_one_is_base() {
        let f2 = FqField::new(2).unwrap();
        let e = ExtField::new(&f2, 1).unwrap();
        assert_eq!(e.order(), 2);
        assert_eq!(e.mul(&[1], &[1]), vec![1]);
        assert_eq!(e.add(&[1], &[1]), vec![0]);
    }

    #[test]
    fn ext_f4_over_f2_table() {
        let f2 = FqField::new(2).unwrap();
        let e = ExtField::new(&f2, 2).unwrap();
        let els: Vec<_> = e.elements().collect();
        let mut nonzero_products = 0;
        for a in &els {
            for b in &els {
                if e.mul(a, b).iter().any(|&c| c != 0) {
                    nonzero_products += 1;
                }
            }
        }
        assert_eq!(nonzero_products, 9);
    }

    #[test]
    fn ext_f9_is_cyclic_of_order_8() {
        let f3 = FqField::new(3).unwrap();
        let e = ExtField::new(&f3, 2).unwrap();
        let one = e.one();
        let has_generator = e.elements().skip(1).any(|g| {
            let mut x = g.clone();
            let mut ord = 1;
            while x != one {
                x = e.mul(&x, &g);
                ord += 1;
            }
            ord == 8
        });
        assert!(has_generator);
    }

    #[test]
    fn ext_multiplication_by_nonzero_is_bijective() {
        for (q, l) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (2, 6)] {
            let f = FqField::new(q).unwrap();
            let e = ExtField::new(&f, l).unwrap();
            let n = e.order() as usize;
            for beta in e.elements().skip(1) {
                let mut hit = vec![false; n];
                for a in e.elements() {
                    hit[e.to_index(&e.mul(&a, &beta)) as usize] = true;
                }
                assert!(hit.iter().all(|&h| h));
                assert_eq!(e.mul(&beta, &e.inv(&beta)), e.one());
            }
        }
    }

    #[test]
    fn ext_modulus_irreducible() {
        for q in [2, 3, 4, 5] {
            let f = FqField::new(q).unwrap();
            for l in 1..=4 {
                let e = ExtField::new(&f, l).unwrap();
                assert!(is_irreducible(&f, e.modulus()));
            }
        }
    }
}
