//! Sparse homogeneous multivariate polynomials.
//!
//! Terms live in a BTreeMap keyed by exponent vectors; since every stored key has
//! the same total degree, the map's maximal key is the graded-lex leading monomial
//! for the order x_0 > x_1 > ... > x_{n-1}. Two interpolation routines are
//! provided: a dense linear solve against an explicit monomial basis, and a
//! divided-difference scheme on the triangular grid {sum of indices <= d} that
//! recovers inhomogeneous polynomials of bounded total degree without solving any
//! linear system.

use crate::field::{FieldSpec, Scalar};
use crate::matrix::{ExactMatrix, LinearError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("term {0:?} has degree {1}, expected {2}")]
    NotHomogeneous(Vec<u8>, usize, usize),
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("division leaves remainder with leading term {0:?}")]
    NotDivisible(Vec<u8>),
    #[error("division by zero polynomial")]
    DivByZeroPoly,
    #[error("interpolation system is underdetermined: rank {rank} of {need}")]
    Underdetermined { rank: usize, need: usize },
    #[error("interpolation samples are inconsistent with degree-{0} form")]
    Inconsistent(usize),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

/// All exponent vectors of total degree exactly d in n variables, listed in
/// descending graded-lex order (leading monomial first).
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    let mut out = vec![];
    let mut cur = vec![0u8; n];
    fn rec(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, pos: usize, left: usize) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u8;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e as u8;
            rec(out, cur, pos + 1, left - e);
        }
    }
    if n == 0 {
        if d == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(&mut out, &mut cur, 0, d);
    out
}

/// Exponent vectors of total degree at most d, same ordering convention.
pub fn simplex_exponents(n: usize, d: usize) -> Vec<Vec<u8>> {
    let mut out = vec![];
    for deg in (0..=d).rev() {
        out.extend(monomials(n, deg));
    }
    out.sort();
    out.reverse();
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Dimension of the space of degree-d forms in n variables.
pub fn form_space_dim(n: usize, d: usize) -> usize {
    binomial(n + d - 1, d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    pub n: usize,
    pub d: usize,
    pub terms: BTreeMap<Vec<u8>, Scalar>,
}

impl MultiPoly {
    pub fn zero(n: usize, d: usize) -> MultiPoly {
        MultiPoly { n, d, terms: BTreeMap::new() }
    }

    pub fn monomial(n: usize, exp: &[u8], c: Scalar, field: &FieldSpec) -> MultiPoly {
        let d = exp.iter().map(|&e| e as usize).sum();
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(exp.to_vec(), c);
        }
        MultiPoly { n, d, terms }
    }

    pub fn from_terms(
        n: usize,
        d: usize,
        field: &FieldSpec,
        items: impl IntoIterator<Item = (Vec<u8>, Scalar)>,
    ) -> Result<MultiPoly, PolyError> {
        let mut terms: BTreeMap<Vec<u8>, Scalar> = BTreeMap::new();
        for (exp, c) in items {
            if exp.len() != n {
                return Err(PolyError::VarMismatch(exp.len(), n));
            }
            let deg: usize = exp.iter().map(|&e| e as usize).sum();
            if deg != d {
                return Err(PolyError::NotHomogeneous(exp, deg, d));
            }
            let entry = terms.entry(exp).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        terms.retain(|_, c| !field.is_zero(c));
        Ok(MultiPoly { n, d, terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Vec<u8>, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, exp: &[u8]) -> Option<&Scalar> {
        self.terms.get(exp)
    }

    pub fn add(&self, field: &FieldSpec, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n);
        assert!(self.is_zero() || other.is_zero() || self.d == other.d, "degree mismatch in add");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(|| field.zero());
            *entry = field.add(entry, c);
        }
        terms.retain(|_, c| !field.is_zero(c));
        MultiPoly { n: self.n, d: if self.is_zero() { other.d } else { self.d }, terms }
    }

    pub fn sub(&self, field: &FieldSpec, other: &MultiPoly) -> MultiPoly {
        self.add(field, &other.scale(field, &field.from_i64(-1)))
    }

    pub fn scale(&self, field: &FieldSpec, s: &Scalar) -> MultiPoly {
        if field.is_zero(s) {
            return MultiPoly::zero(self.n, self.d);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), field.mul(c, s))).collect();
        MultiPoly { n: self.n, d: self.d, terms }
    }

    pub fn mul(&self, field: &FieldSpec, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n);
        let mut terms: BTreeMap<Vec<u8>, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let prod = field.mul(ca, cb);
                let entry = terms.entry(exp).or_insert_with(|| field.zero());
                *entry = field.add(entry, &prod);
            }
        }
        terms.retain(|_, c| !field.is_zero(c));
        MultiPoly { n: self.n, d: self.d + other.d, terms }
    }

    pub fn pow(&self, field: &FieldSpec, e: usize) -> MultiPoly {
        let mut acc = MultiPoly::monomial(self.n, &vec![0; self.n], field.one(), field);
        for _ in 0..e {
            acc = acc.mul(field, self);
        }
        acc
    }

    pub fn eval(&self, field: &FieldSpec, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.n);
        // power tables up to the declared degree
        let mut pows: Vec<Vec<Scalar>> = Vec::with_capacity(self.n);
        for x in point {
            let mut row = Vec::with_capacity(self.d + 1);
            row.push(field.one());
            for _ in 0..self.d {
                let last = row.last().unwrap();
                row.push(field.mul(last, x));
            }
            pows.push(row);
        }
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    term = field.mul(&term, &pows[i][ei as usize]);
                }
            }
            acc = field.add(&acc, &term);
        }
        acc
    }

    pub fn partial(&self, field: &FieldSpec, var: usize) -> MultiPoly {
        assert!(var < self.n);
        let d = if self.d == 0 { 0 } else { self.d - 1 };
        let mut terms: BTreeMap<Vec<u8>, Scalar> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp[var] -= 1;
            let coef = field.mul(c, &field.from_u64(e[var] as u64));
            if !field.is_zero(&coef) {
                terms.insert(exp, coef);
            }
        }
        MultiPoly { n: self.n, d, terms }
    }

    pub fn gradient(&self, field: &FieldSpec) -> Vec<MultiPoly> {
        (0..self.n).map(|i| self.partial(field, i)).collect()
    }

    /// Scales so the graded-lex leading coefficient becomes 1.
    pub fn normalize(&self, field: &FieldSpec) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = field.inv(c).expect("leading coefficient nonzero");
                self.scale(field, &inv)
            }
        }
    }

    /// Exact division: errors unless the remainder is zero.
    pub fn divide_exact(&self, field: &FieldSpec, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
        assert_eq!(self.n, g.n);
        let Some((g_lead, g_lc)) = g.leading() else {
            return Err(PolyError::DivByZeroPoly);
        };
        let g_lead = g_lead.clone();
        let g_lc_inv = field.inv(g_lc).expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let quot_deg = self.d.saturating_sub(g.d);
        let mut quot = MultiPoly::zero(self.n, quot_deg);
        while let Some((r_lead, r_lc)) = rem.leading() {
            let mut q_exp = vec![0u8; self.n];
            let mut divisible = true;
            for i in 0..self.n {
                if r_lead[i] < g_lead[i] {
                    divisible = false;
                    break;
                }
                q_exp[i] = r_lead[i] - g_lead[i];
            }
            if !divisible {
                return Err(PolyError::NotDivisible(r_lead.clone()));
            }
            let q_c = field.mul(r_lc, &g_lc_inv);
            let q_term = MultiPoly::monomial(self.n, &q_exp, q_c, field);
            rem = rem.sub(field, &q_term.mul(field, g));
            quot = quot.add(field, &q_term);
        }
        Ok(quot)
    }

    /// Substitutes x_i = sum_j sub[i][j] y_j; `sub` is n_old x n_new.
    pub fn substitute_linear(&self, field: &FieldSpec, sub: &ExactMatrix) -> MultiPoly {
        assert_eq!(sub.nrows(), self.n);
        let n_new = sub.ncols();
        let lin: Vec<MultiPoly> = (0..self.n)
            .map(|i| {
                let items = (0..n_new).map(|j| {
                    let mut e = vec![0u8; n_new];
                    e[j] = 1;
                    (e, sub.get(i, j).clone())
                });
                MultiPoly::from_terms(n_new, 1, field, items).unwrap()
            })
            .collect();
        // memoized powers of each substituted linear form
        let mut pow_memo: Vec<Vec<MultiPoly>> = lin
            .iter()
            .map(|l| vec![MultiPoly::monomial(n_new, &vec![0; n_new], field.one(), field), l.clone()])
            .collect();
        let mut acc = MultiPoly::zero(n_new, self.d);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::monomial(n_new, &vec![0; n_new], c.clone(), field);
            for (i, &ei) in e.iter().enumerate() {
                let ei = ei as usize;
                while pow_memo[i].len() <= ei {
                    let next = pow_memo[i].last().unwrap().mul(field, &lin[i]);
                    pow_memo[i].push(next);
                }
                if ei > 0 {
                    term = term.mul(field, &pow_memo[i][ei]);
                }
            }
            acc = acc.add(field, &term);
        }
        acc
    }

    /// Dense coefficient vector against `monomials(n, d)` in its order.
    pub fn to_dense(&self, field: &FieldSpec, basis: &[Vec<u8>]) -> Vec<Scalar> {
        basis
            .iter()
            .map(|e| self.terms.get(e).cloned().unwrap_or_else(|| field.zero()))
            .collect()
    }

    pub fn from_dense(
        n: usize,
        d: usize,
        field: &FieldSpec,
        basis: &[Vec<u8>],
        coeffs: &[Scalar],
    ) -> MultiPoly {
        let items = basis.iter().cloned().zip(coeffs.iter().cloned());
        MultiPoly::from_terms(n, d, field, items).unwrap()
    }
}

/// Recovers the unique degree-d form through the samples, or explains why it is
/// not unique. Extra samples act as consistency checks.
pub fn interpolate(
    field: &FieldSpec,
    n: usize,
    d: usize,
    samples: &[(Vec<Scalar>, Scalar)],
) -> Result<MultiPoly, PolyError> {
    let basis = monomials(n, d);
    let need = basis.len();
    let mut rows = Vec::with_capacity(samples.len());
    let mut rhs = Vec::with_capacity(samples.len());
    for (pt, val) in samples {
        let mut pows: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        for x in pt {
            let mut row = Vec::with_capacity(d + 1);
            row.push(field.one());
            for _ in 0..d {
                let last = row.last().unwrap();
                row.push(field.mul(last, x));
            }
            pows.push(row);
        }
        let row: Vec<Scalar> = basis
            .iter()
            .map(|e| {
                let mut v = field.one();
                for (i, &ei) in e.iter().enumerate() {
                    if ei > 0 {
                        v = field.mul(&v, &pows[i][ei as usize]);
                    }
                }
                v
            })
            .collect();
        rows.push(row);
        rhs.push(vec![val.clone()]);
    }
    let a = ExactMatrix::from_rows(rows);
    let b = ExactMatrix::from_rows(rhs);
    let sol = match a.solve(field, &b) {
        Ok(s) => s,
        Err(LinearError::Inconsistent) => return Err(PolyError::Inconsistent(d)),
        Err(e) => return Err(e.into()),
    };
    if sol.nullity > 0 {
        return Err(PolyError::Underdetermined { rank: sol.rank, need });
    }
    let coeffs: Vec<Scalar> = (0..need).map(|i| sol.particular.get(i, 0).clone()).collect();
    Ok(MultiPoly::from_dense(n, d, field, &basis, &coeffs))
}

/// Newton interpolation on the triangular grid.
///
/// Evaluates `eval` at the points (nodes[e_0], .., nodes[e_{m-1}]) for every
/// exponent pattern with e_0 + .. + e_{m-1} <= d, and returns the coefficient
/// map (total degree <= d, keys of length m) of the unique such polynomial
/// agreeing with all the evaluations. Needs d+1 distinct node values.
pub fn newton_simplex_interpolate(
    field: &FieldSpec,
    m: usize,
    d: usize,
    nodes: &[Scalar],
    mut eval: impl FnMut(&[Scalar]) -> Scalar,
) -> BTreeMap<Vec<u8>, Scalar> {
    assert!(nodes.len() >= d + 1, "need d+1 interpolation nodes");
    let grid = simplex_exponents(m, d);
    let mut values: BTreeMap<Vec<u8>, Scalar> = BTreeMap::new();
    let mut point = vec![field.zero(); m];
    for idx in &grid {
        for (i, &e) in idx.iter().enumerate() {
            point[i] = nodes[e as usize].clone();
        }
        values.insert(idx.clone(), eval(&point));
    }

    // divided differences along each variable in turn
    for var in 0..m {
        let rest_keys: Vec<Vec<u8>> = {
            let mut ks: Vec<Vec<u8>> = values
                .keys()
                .map(|k| {
                    let mut r = k.clone();
                    r[var] = 0;
                    r
                })
                .collect();
            ks.sort();
            ks.dedup();
            ks
        };
        for rest in rest_keys {
            let rest_deg: usize = rest.iter().map(|&e| e as usize).sum();
            let len = d - rest_deg; // slice indices 0..=len
            let mut slice: Vec<Scalar> = (0..=len)
                .map(|i| {
                    let mut key = rest.clone();
                    key[var] = i as u8;
                    values[&key].clone()
                })
                .collect();
            for j in 1..=len {
                for i in (j..=len).rev() {
                    let num = field.sub(&slice[i], &slice[i - 1]);
                    let den = field.sub(&nodes[i], &nodes[i - j]);
                    slice[i] = field.div(&num, &den).expect("distinct nodes");
                }
            }
            for (i, v) in slice.into_iter().enumerate() {
                let mut key = rest.clone();
                key[var] = i as u8;
                values.insert(key, v);
            }
        }
    }

    // expand from the Newton tensor basis to monomials, one variable at a time
    let mut newton_basis: Vec<Vec<Scalar>> = vec![vec![field.one()]];
    for j in 0..d {
        let prev = newton_basis.last().unwrap().clone();
        // multiply by (x - nodes[j])
        let mut next = vec![field.zero(); prev.len() + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] = field.add(&next[i + 1], c);
            let shift = field.mul(c, &nodes[j]);
            next[i] = field.sub(&next[i], &shift);
        }
        newton_basis.push(next);
    }

    let mut cur = values;
    for var in 0..m {
        let mut next: BTreeMap<Vec<u8>, Scalar> = BTreeMap::new();
        for (key, coef) in &cur {
            if field.is_zero(coef) {
                continue;
            }
            let e = key[var] as usize;
            for (pow, c) in newton_basis[e].iter().enumerate() {
                if field.is_zero(c) {
                    continue;
                }
                let mut nk = key.clone();
                nk[var] = pow as u8;
                let add = field.mul(coef, c);
                let entry = next.entry(nk).or_insert_with(|| field.zero());
                *entry = field.add(entry, &add);
            }
        }
        cur = next;
    }
    cur.retain(|_, c| !field.is_zero(c));
    cur
}

/// Lifts an inhomogeneous coefficient map (keys of length n-1, total degree <= d)
/// to the degree-d form obtained by homogenizing with variable `h`.
pub fn homogenize(
    field: &FieldSpec,
    inhom: &BTreeMap<Vec<u8>, Scalar>,
    n: usize,
    d: usize,
    h: usize,
) -> MultiPoly {
    let items = inhom.iter().map(|(k, c)| {
        let deg: usize = k.iter().map(|&e| e as usize).sum();
        assert!(deg <= d, "inhomogeneous degree exceeds target");
        let mut exp = Vec::with_capacity(n);
        exp.extend_from_slice(&k[..h]);
        exp.push((d - deg) as u8);
        exp.extend_from_slice(&k[h..]);
        (exp, c.clone())
    });
    MultiPoly::from_terms(n, d, field, items).unwrap()
}

/// Strips variable h from a form, substituting x_h = 1.
pub fn dehomogenize(f: &MultiPoly, field: &FieldSpec, h: usize) -> BTreeMap<Vec<u8>, Scalar> {
    let mut out: BTreeMap<Vec<u8>, Scalar> = BTreeMap::new();
    for (e, c) in &f.terms {
        let mut k = Vec::with_capacity(f.n - 1);
        k.extend_from_slice(&e[..h]);
        k.extend_from_slice(&e[h + 1..]);
        let entry = out.entry(k).or_insert_with(|| field.zero());
        *entry = field.add(entry, c);
    }
    out.retain(|_, c| !field.is_zero(c));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f101() -> FieldSpec {
        FieldSpec::prime(101).unwrap()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(6, 3).len(), 56);
        assert_eq!(monomials(6, 6).len(), 462);
        assert_eq!(monomials(3, 6).len(), 28);
        assert_eq!(monomials(6, 10).len(), 3003);
        assert_eq!(simplex_exponents(5, 10).len(), 3003);
    }

    #[test]
    fn leading_term_order() {
        let f = f101();
        // x0*x1 + x1^2: leading must be x0*x1 under x0 > x1
        let p = MultiPoly::from_terms(
            2,
            2,
            &f,
            vec![
                (vec![1, 1], f.one()),
                (vec![0, 2], f.one()),
            ],
        )
        .unwrap();
        assert_eq!(p.leading().unwrap().0, &vec![1, 1]);
    }

    #[test]
    fn homogeneity_enforced() {
        let f = f101();
        let bad = MultiPoly::from_terms(2, 2, &f, vec![(vec![1, 0], f.one())]);
        assert!(matches!(bad, Err(PolyError::NotHomogeneous(_, 1, 2))));
    }

    #[test]
    fn product_and_eval_agree() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let basis2 = monomials(3, 2);
        let basis3 = monomials(3, 3);
        for _ in 0..20 {
            let a = MultiPoly::from_dense(
                3,
                2,
                &f,
                &basis2,
                &basis2.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
            );
            let b = MultiPoly::from_dense(
                3,
                3,
                &f,
                &basis3,
                &basis3.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
            );
            let prod = a.mul(&f, &b);
            let pt: Vec<Scalar> = (0..3).map(|_| f.rand_scalar(&mut rng)).collect();
            let lhs = prod.eval(&f, &pt);
            let rhs = f.mul(&a.eval(&f, &pt), &b.eval(&f, &pt));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn euler_relation() {
        // sum_i x_i d f/d x_i = d * f for homogeneous f
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let basis = monomials(4, 5);
        let poly = MultiPoly::from_dense(
            4,
            5,
            &f,
            &basis,
            &basis.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
        );
        let pt: Vec<Scalar> = (0..4).map(|_| f.rand_scalar(&mut rng)).collect();
        let mut acc = f.zero();
        for i in 0..4 {
            let term = f.mul(&pt[i], &poly.partial(&f, i).eval(&f, &pt));
            acc = f.add(&acc, &term);
        }
        let expect = f.mul(&f.from_u64(5), &poly.eval(&f, &pt));
        assert_eq!(acc, expect);
    }

    #[test]
    fn divide_exact_roundtrip() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let b2 = monomials(3, 2);
        for _ in 0..10 {
            let a = MultiPoly::from_dense(
                3,
                2,
                &f,
                &b2,
                &b2.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
            );
            let g = MultiPoly::from_dense(
                3,
                2,
                &f,
                &b2,
                &b2.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
            );
            if a.is_zero() || g.is_zero() {
                continue;
            }
            let prod = a.mul(&f, &g);
            let q = prod.divide_exact(&f, &g).unwrap();
            assert_eq!(q, a);
        }
    }

    #[test]
    fn divide_rejects_non_multiple() {
        let f = f101();
        // x0^2 + x1^2 is not divisible by x0
        let num = MultiPoly::from_terms(
            2,
            2,
            &f,
            vec![(vec![2, 0], f.one()), (vec![0, 2], f.one())],
        )
        .unwrap();
        let den = MultiPoly::monomial(2, &[1, 0], f.one(), &f);
        assert!(matches!(num.divide_exact(&f, &den), Err(PolyError::NotDivisible(_))));
    }

    #[test]
    fn pure_power_division() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let b3 = monomials(4, 3);
        let q = MultiPoly::from_dense(
            4,
            3,
            &f,
            &b3,
            &b3.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
        );
        let x2_4 = MultiPoly::monomial(4, &[0, 0, 4, 0], f.one(), &f);
        let prod = q.mul(&f, &x2_4);
        assert_eq!(prod.divide_exact(&f, &x2_4).unwrap(), q);
    }

    #[test]
    fn substitute_linear_matches_eval() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let b = monomials(6, 3);
        let poly = MultiPoly::from_dense(
            6,
            3,
            &f,
            &b,
            &b.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
        );
        let sub = ExactMatrix::from_fn(6, 3, |_, _| f.rand_scalar(&mut rng));
        let restricted = poly.substitute_linear(&f, &sub);
        assert_eq!(restricted.n, 3);
        assert_eq!(restricted.d, 3);
        for _ in 0..10 {
            let y: Vec<Scalar> = (0..3).map(|_| f.rand_scalar(&mut rng)).collect();
            let x = sub.matvec(&f, &y);
            assert_eq!(restricted.eval(&f, &y), poly.eval(&f, &x));
        }
    }

    #[test]
    fn dense_interpolation_recovers() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let basis = monomials(3, 4);
        let target = MultiPoly::from_dense(
            3,
            4,
            &f,
            &basis,
            &basis.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
        );
        let mut samples = vec![];
        for _ in 0..basis.len() + 20 {
            let pt: Vec<Scalar> = (0..3).map(|_| f.rand_scalar(&mut rng)).collect();
            let v = target.eval(&f, &pt);
            samples.push((pt, v));
        }
        let got = interpolate(&f, 3, 4, &samples).unwrap();
        assert_eq!(got, target);
    }

    #[test]
    fn interpolation_underdetermined_detected() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let mut samples = vec![];
        for _ in 0..5 {
            let pt: Vec<Scalar> = (0..3).map(|_| f.rand_scalar(&mut rng)).collect();
            samples.push((pt, f.one()));
        }
        assert!(matches!(
            interpolate(&f, 3, 4, &samples),
            Err(PolyError::Underdetermined { .. })
        ));
    }

    #[test]
    fn newton_simplex_matches_dense() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for (m, d) in [(2usize, 3usize), (3, 4), (1, 6)] {
            // random inhomogeneous polynomial of total degree <= d
            let exps = simplex_exponents(m, d);
            let coeffs: BTreeMap<Vec<u8>, Scalar> =
                exps.iter().map(|e| (e.clone(), f.rand_scalar(&mut rng))).collect();
            let eval_poly = |pt: &[Scalar]| {
                let mut acc = f.zero();
                for (e, c) in &coeffs {
                    let mut t = c.clone();
                    for (i, &ei) in e.iter().enumerate() {
                        for _ in 0..ei {
                            t = f.mul(&t, &pt[i]);
                        }
                    }
                    acc = f.add(&acc, &t);
                }
                acc
            };
            let nodes: Vec<Scalar> = (0..=d as u64).map(|i| f.from_u64(i)).collect();
            let got = newton_simplex_interpolate(&f, m, d, &nodes, eval_poly);
            let mut want = coeffs.clone();
            want.retain(|_, c| !f.is_zero(c));
            assert_eq!(got, want, "m={m} d={d}");
        }
    }

    #[test]
    fn homogenize_dehomogenize_roundtrip() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let basis = monomials(4, 5);
        let poly = MultiPoly::from_dense(
            4,
            5,
            &f,
            &basis,
            &basis.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
        );
        for h in 0..4 {
            let inhom = dehomogenize(&poly, &f, h);
            let back = homogenize(&f, &inhom, 4, 5, h);
            // dehomogenizing can merge monomials only when two exponents differ
            // just in x_h, which cannot happen for a fixed total degree
            assert_eq!(back, poly);
        }
    }

    #[test]
    fn newton_then_homogenize_recovers_form() {
        let f = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let basis = monomials(3, 5);
        let target = MultiPoly::from_dense(
            3,
            5,
            &f,
            &basis,
            &basis.iter().map(|_| f.rand_scalar(&mut rng)).collect::<Vec<_>>(),
        );
        let h = 1usize;
        let nodes: Vec<Scalar> = (0..=5u64).map(|i| f.from_u64(i)).collect();
        let inhom = newton_simplex_interpolate(&f, 2, 5, &nodes, |pt| {
            let full = vec![pt[0].clone(), f.one(), pt[1].clone()];
            target.eval(&f, &full)
        });
        let got = homogenize(&f, &inhom, 3, 5, h);
        assert_eq!(got, target);
    }
}
