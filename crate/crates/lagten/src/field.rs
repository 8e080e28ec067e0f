//! Field contexts and scalars.
//!
//! A [`FieldSpec`] owns the arithmetic; a [`Scalar`] is inert data. All operations
//! go through the context so that extension-field reduction and rational
//! normalization stay in one place. Supported fields: Q, F_p for odd primes p < 2^31, and
//! F_{p^k} for k up to [`MAX_EXT`] presented as F_p[t]/(m(t)) with m monic
//! irreducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest supported extension degree over the prime field.
pub const MAX_EXT: usize = 6;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} too large, need p < 2^31")]
    PrimeTooLarge(u64),
    #[error("extension degree {0} out of range 1..={MAX_EXT}")]
    BadDegree(usize),
    #[error("polynomial is not monic of the declared degree")]
    BadMinPoly,
    #[error("polynomial is reducible over F_{0}")]
    Reducible(u64),
    #[error("no irreducible polynomial found in {0} attempts")]
    SearchExhausted(usize),
    #[error("scalar does not belong to this field")]
    WrongField,
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of F_{p^k} stored as coefficients of 1, t, .., t^(k-1).
/// Unused slots stay zero, so equality is plain array equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtElem(pub [u64; MAX_EXT]);

/// A field element. `Fp` and `Ext` values are already reduced; `Rat` values are
/// kept in lowest terms by `BigRational`.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Fp(u64),
    Ext(ExtElem),
    Rat(Box<BigRational>),
}

impl Scalar {
    pub fn rat_i64(n: i64, d: i64) -> Scalar {
        Scalar::Rat(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }
}

/// Field descriptor plus arithmetic. `p == 0` means the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    k: usize,
    /// Monic minimal polynomial, coefficients ascending, length k+1. Empty for k == 1.
    min_poly: Vec<u64>,
}

impl FieldSpec {
    pub fn rationals() -> FieldSpec {
        FieldSpec { p: 0, k: 1, min_poly: vec![] }
    }

    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec { p, k: 1, min_poly: vec![] })
    }

    /// Builds F_{p^k} with a seeded deterministic search for a monic irreducible
    /// minimal polynomial. The same (p, k, seed) always yields the same field.
    pub fn ext_field(p: u64, k: usize, seed: u64) -> Result<FieldSpec, FieldError> {
        if k == 0 || k > MAX_EXT {
            return Err(FieldError::BadDegree(k));
        }
        let base = FieldSpec::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c61_6774_656e_0001);
        const ATTEMPTS: usize = 20_000;
        for _ in 0..ATTEMPTS {
            let mut mp = vec![0u64; k + 1];
            mp[k] = 1;
            for c in mp.iter_mut().take(k) {
                *c = rng.gen_range(0..p);
            }
            if mp[0] == 0 {
                continue;
            }
            if poly_is_irreducible(&mp, p) {
                return Ok(FieldSpec { p, k, min_poly: mp });
            }
        }
        Err(FieldError::SearchExhausted(ATTEMPTS))
    }

    /// Rebuilds a field from an explicit minimal polynomial, re-checking
    /// irreducibility. Used when deserializing.
    pub fn with_min_poly(p: u64, k: usize, min_poly: Vec<u64>) -> Result<FieldSpec, FieldError> {
        if k == 0 || k > MAX_EXT {
            return Err(FieldError::BadDegree(k));
        }
        let base = FieldSpec::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        if min_poly.len() != k + 1 || min_poly[k] != 1 || min_poly.iter().any(|&c| c >= p) {
            return Err(FieldError::BadMinPoly);
        }
        if !poly_is_irreducible(&min_poly, p) {
            return Err(FieldError::Reducible(p));
        }
        Ok(FieldSpec { p, k, min_poly })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn min_poly(&self) -> &[u64] {
        &self.min_poly
    }

    pub fn is_rational(&self) -> bool {
        self.p == 0
    }

    /// Number of elements, None for the rationals.
    pub fn order(&self) -> Option<u128> {
        if self.p == 0 {
            None
        } else {
            Some((self.p as u128).pow(self.k as u32))
        }
    }

    pub fn zero(&self) -> Scalar {
        match (self.p, self.k) {
            (0, _) => Scalar::Rat(Box::new(BigRational::zero())),
            (_, 1) => Scalar::Fp(0),
            _ => Scalar::Ext(ExtElem([0; MAX_EXT])),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match (self.p, self.k) {
            (0, _) => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(v)))),
            (p, 1) => Scalar::Fp(v.rem_euclid(p as i64) as u64),
            (p, _) => {
                let mut c = [0u64; MAX_EXT];
                c[0] = v.rem_euclid(p as i64) as u64;
                Scalar::Ext(ExtElem(c))
            }
        }
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        match (self.p, self.k) {
            (0, _) => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(v)))),
            (p, 1) => Scalar::Fp(v % p),
            (p, _) => {
                let mut c = [0u64; MAX_EXT];
                c[0] = v % p;
                Scalar::Ext(ExtElem(c))
            }
        }
    }

    /// The generator t of F_{p^k} over F_p. Errors outside a proper extension.
    pub fn gen_t(&self) -> Result<Scalar, FieldError> {
        if self.p == 0 || self.k == 1 {
            return Err(FieldError::BadDegree(self.k));
        }
        let mut c = [0u64; MAX_EXT];
        c[1] = 1;
        Ok(Scalar::Ext(ExtElem(c)))
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(x) => *x == 0,
            Scalar::Ext(e) => e.0.iter().all(|&c| c == 0),
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % self.p),
            (Scalar::Ext(x), Scalar::Ext(y)) => {
                let mut c = [0u64; MAX_EXT];
                for i in 0..self.k {
                    c[i] = (x.0[i] + y.0[i]) % self.p;
                }
                Scalar::Ext(ExtElem(c))
            }
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(Box::new(&**x + &**y)),
            _ => panic!("scalar kind mismatch in add"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Fp(x) => Scalar::Fp(if *x == 0 { 0 } else { self.p - x }),
            Scalar::Ext(x) => {
                let mut c = [0u64; MAX_EXT];
                for i in 0..self.k {
                    c[i] = if x.0[i] == 0 { 0 } else { self.p - x.0[i] };
                }
                Scalar::Ext(ExtElem(c))
            }
            Scalar::Rat(x) => Scalar::Rat(Box::new(-&**x)),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(mulmod(*x, *y, self.p)),
            (Scalar::Ext(x), Scalar::Ext(y)) => Scalar::Ext(self.ext_mul(x, y)),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(Box::new(&**x * &**y)),
            _ => panic!("scalar kind mismatch in mul"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match a {
            Scalar::Fp(x) => Scalar::Fp(inv_mod(*x, self.p)),
            Scalar::Ext(x) => Scalar::Ext(self.ext_inv(x)),
            Scalar::Rat(x) => Scalar::Rat(Box::new(x.recip())),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u128) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius x -> x^p. Identity on the rationals.
    pub fn frobenius(&self, a: &Scalar) -> Scalar {
        if self.p == 0 {
            a.clone()
        } else {
            self.pow(a, self.p as u128)
        }
    }

    fn ext_mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let k = self.k;
        let p = self.p as u128;
        let mut conv = [0u128; 2 * MAX_EXT];
        for i in 0..k {
            if a.0[i] == 0 {
                continue;
            }
            let ai = a.0[i] as u128;
            for j in 0..k {
                conv[i + j] += ai * b.0[j] as u128;
            }
        }
        for c in conv.iter_mut() {
            *c %= p;
        }
        // fold degrees >= k using t^k = -(m_0 + m_1 t + .. + m_{k-1} t^{k-1})
        for deg in (k..2 * k - 1).rev() {
            let coef = conv[deg] % p;
            if coef == 0 {
                continue;
            }
            conv[deg] = 0;
            for j in 0..k {
                let m = self.min_poly[j] as u128;
                if m == 0 {
                    continue;
                }
                // subtract coef * m at position deg - k + j
                let sub = coef * m % p;
                let idx = deg - k + j;
                conv[idx] = (conv[idx] + p - sub) % p;
            }
        }
        let mut out = [0u64; MAX_EXT];
        for i in 0..k {
            out[i] = conv[i] as u64;
        }
        ExtElem(out)
    }

    fn ext_inv(&self, a: &ExtElem) -> ExtElem {
        // extended Euclid in F_p[t] against the minimal polynomial
        let p = self.p;
        let modulus: Vec<u64> = self.min_poly.clone();
        let elem: Vec<u64> = a.0[..self.k].to_vec();
        let (mut r0, mut r1) = (modulus, poly_trim(elem));
        let (mut s0, mut s1) = (vec![], vec![1u64]);
        while !r1.is_empty() {
            let (q, rem) = poly_divmod(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 is the gcd, a nonzero constant since the modulus is irreducible
        let c = inv_mod(r0[0], p);
        let mut out = [0u64; MAX_EXT];
        for (i, v) in s0.iter().enumerate() {
            out[i] = mulmod(*v, c, p);
        }
        ExtElem(out)
    }

    /// Uniform random element (finite fields) or a small random fraction (Q).
    pub fn rand_scalar(&self, rng: &mut ChaCha8Rng) -> Scalar {
        match (self.p, self.k) {
            (0, _) => {
                let n = rng.gen_range(-20i64..=20);
                let d = rng.gen_range(1i64..=20);
                Scalar::rat_i64(n, d)
            }
            (p, 1) => Scalar::Fp(rng.gen_range(0..p)),
            (p, k) => {
                let mut c = [0u64; MAX_EXT];
                for slot in c.iter_mut().take(k) {
                    *slot = rng.gen_range(0..p);
                }
                Scalar::Ext(ExtElem(c))
            }
        }
    }

    pub fn rand_nonzero(&self, rng: &mut ChaCha8Rng) -> Scalar {
        loop {
            let s = self.rand_scalar(rng);
            if !self.is_zero(&s) {
                return s;
            }
        }
    }

    /// The idx-th element in the fixed enumeration of a finite field
    /// (base-p digits become coefficients of 1, t, t^2, ..).
    pub fn element_from_index(&self, idx: u64) -> Scalar {
        assert!(self.p > 0, "enumeration needs a finite field");
        match self.k {
            1 => Scalar::Fp(idx % self.p),
            k => {
                let mut c = [0u64; MAX_EXT];
                let mut v = idx;
                for slot in c.iter_mut().take(k) {
                    *slot = v % self.p;
                    v /= self.p;
                }
                Scalar::Ext(ExtElem(c))
            }
        }
    }

    /// Some(c) when the element lies in the prime subfield.
    pub fn as_prime_subfield(&self, a: &Scalar) -> Option<u64> {
        match a {
            Scalar::Fp(x) => Some(*x),
            Scalar::Ext(e) => {
                if e.0[1..].iter().all(|&c| c == 0) {
                    Some(e.0[0])
                } else {
                    None
                }
            }
            Scalar::Rat(_) => None,
        }
    }

    /// Reinterprets a prime-field scalar as a constant of this (extension) field.
    pub fn embed_constant(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        match a {
            Scalar::Fp(x) => {
                if self.p == 0 {
                    return Err(FieldError::WrongField);
                }
                Ok(self.from_u64(*x))
            }
            Scalar::Ext(e) => {
                if e.0[1..].iter().all(|&c| c == 0) {
                    Ok(self.from_u64(e.0[0]))
                } else {
                    Err(FieldError::WrongField)
                }
            }
            Scalar::Rat(_) => Err(FieldError::WrongField),
        }
    }

    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Fp(x) => format!("{x}"),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Ext(e) => {
                let mut parts = vec![];
                for (i, &c) in e.0[..self.k].iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    parts.push(match i {
                        0 => format!("{c}"),
                        1 if c == 1 => "t".into(),
                        1 => format!("{c}*t"),
                        _ if c == 1 => format!("t^{i}"),
                        _ => format!("{c}*t^{i}"),
                    });
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join("+")
                }
            }
        }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on integers
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "inverse of non-unit {a} mod {p}");
    (t.rem_euclid(p as i128)) as u64
}

pub(crate) fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// --- dense univariate polynomials over F_p, coefficients ascending, trimmed ---

fn poly_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    poly_trim(out)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_trim(out)
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = poly_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = poly_trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quo = vec![0u64; rem.len() - b.len() + 1];
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = mulmod(*rem.last().unwrap(), lead_inv, p);
        quo[shift] = c;
        for (j, &bc) in b.iter().enumerate() {
            let idx = shift + j;
            rem[idx] = (rem[idx] + p - mulmod(c, bc, p)) % p;
        }
        rem = poly_trim(rem);
    }
    (poly_trim(quo), rem)
}

fn poly_powmod_xp(modulus: &[u64], p: u64, reps: usize) -> Vec<u64> {
    // computes x^(p^reps) mod modulus by repeated Frobenius
    let mut acc = vec![0u64, 1]; // x
    for _ in 0..reps {
        acc = poly_powmod(&acc, p, modulus, p);
    }
    acc
}

fn poly_powmod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut b = poly_divmod(base, modulus, p).1;
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_divmod(&poly_mul(&acc, &b, p), modulus, p).1;
        }
        b = poly_divmod(&poly_mul(&b, &b, p), modulus, p).1;
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut r0, mut r1) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !r1.is_empty() {
        let rem = poly_divmod(&r0, &r1, p).1;
        r0 = r1;
        r1 = rem;
    }
    r0
}

fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    // x^(p^k) must equal x mod f, and x^(p^(k/q)) - x must be coprime to f
    // for every prime divisor q of k
    let xpk = poly_powmod_xp(f, p, k);
    if poly_trim(poly_sub(&xpk, &[0, 1], p)) != Vec::<u64>::new() {
        return false;
    }
    let mut rem = k;
    let mut q = 2;
    let mut prime_divs = vec![];
    while q * q <= rem {
        if rem % q == 0 {
            prime_divs.push(q);
            while rem % q == 0 {
                rem /= q;
            }
        }
        q += 1;
    }
    if rem > 1 {
        prime_divs.push(rem);
    }
    for q in prime_divs {
        let d = k / q;
        let xpd = poly_powmod_xp(f, p, d);
        let g = poly_sub(&xpd, &[0, 1], p);
        let gcd = poly_gcd(&g, f, p);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FieldSpec::prime(29).unwrap();
        let a = f.from_i64(-7);
        assert_eq!(a, Scalar::Fp(22));
        let b = f.from_u64(10);
        assert_eq!(f.mul(&a, &b), Scalar::Fp(220 % 29));
        assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        let inv = f.inv(&b).unwrap();
        assert_eq!(f.mul(&b, &inv), f.one());
    }

    #[test]
    fn rejects_composites_and_huge_primes() {
        assert!(matches!(FieldSpec::prime(91), Err(FieldError::NotPrime(91))));
        assert!(matches!(
            FieldSpec::prime((1 << 31) + 11),
            Err(FieldError::PrimeTooLarge(_))
        ));
    }

    #[test]
    fn quadratic_extension_of_f29() {
        let f = FieldSpec::ext_field(29, 2, 0).unwrap();
        assert_eq!(f.order(), Some(841));
        // the minimal polynomial t^2 + m1 t + m0 must have no root in F_29
        let mp = f.min_poly();
        for x in 0..29u64 {
            let v = (x * x + mp[1] * x + mp[0]) % 29;
            assert_ne!(v, 0, "min poly has root {x}");
        }
        let t = f.gen_t().unwrap();
        let t2 = f.mul(&t, &t);
        // t^2 = -(m0 + m1 t)
        let expect = f.neg(&f.add(
            &f.from_u64(mp[0]),
            &f.mul(&f.from_u64(mp[1]), &t),
        ));
        assert_eq!(t2, expect);
    }

    #[test]
    fn cubic_extension_of_f2() {
        let f = FieldSpec::ext_field(2, 3, 7).unwrap();
        assert_eq!(f.order(), Some(8));
        let mp = f.min_poly();
        for x in 0..2u64 {
            let v = (x * x * x + mp[2] * x * x + mp[1] * x + mp[0]) % 2;
            assert_ne!(v, 0);
        }
        // multiplicative group has order 7, so every nonzero element satisfies a^7 = 1
        for idx in 1..8 {
            let a = f.element_from_index(idx);
            assert_eq!(f.pow(&a, 7), f.one());
        }
    }

    #[test]
    fn thousand_random_inverses() {
        let specs = [
            FieldSpec::prime(101).unwrap(),
            FieldSpec::ext_field(29, 2, 0).unwrap(),
            FieldSpec::ext_field(5, 3, 1).unwrap(),
        ];
        for f in &specs {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            for _ in 0..1000 {
                let a = f.rand_nonzero(&mut rng);
                let b = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &b), f.one());
            }
        }
    }

    #[test]
    fn field_axioms_sampled() {
        let specs = [
            FieldSpec::rationals(),
            FieldSpec::prime(29).unwrap(),
            FieldSpec::ext_field(11, 2, 3).unwrap(),
        ];
        for f in &specs {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..300 {
                let a = f.rand_scalar(&mut rng);
                let b = f.rand_scalar(&mut rng);
                let c = f.rand_scalar(&mut rng);
                let ab_c = f.mul(&f.mul(&a, &b), &c);
                let a_bc = f.mul(&a, &f.mul(&b, &c));
                assert_eq!(ab_c, a_bc);
                let distr = f.mul(&a, &f.add(&b, &c));
                let distr2 = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                assert_eq!(distr, distr2);
                assert_eq!(f.add(&a, &b), f.add(&b, &a));
            }
        }
    }

    #[test]
    fn frobenius_order_is_k() {
        let f = FieldSpec::ext_field(7, 4, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // find an element outside every proper subfield, then check the orbit size
        let gen = loop {
            let a = f.rand_nonzero(&mut rng);
            let mut proper = false;
            for d in [1usize, 2] {
                if f.pow(&a, (7u128).pow(d as u32)) == a {
                    proper = true;
                    break;
                }
            }
            if !proper {
                break a;
            }
        };
        let mut x = gen.clone();
        for _ in 0..4 {
            x = f.frobenius(&x);
        }
        assert_eq!(x, gen);
        let mut y = f.frobenius(&gen);
        for _ in 0..2 {
            assert_ne!(y, gen);
            y = f.frobenius(&y);
        }
    }

    #[test]
    fn rational_arithmetic_exact() {
        let f = FieldSpec::rationals();
        let a = Scalar::rat_i64(1, 3);
        let b = Scalar::rat_i64(1, 6);
        assert_eq!(f.add(&a, &b), Scalar::rat_i64(1, 2));
        assert_eq!(f.div(&a, &b).unwrap(), f.from_i64(2));
        assert_eq!(f.format(&Scalar::rat_i64(-4, 8)), "-1/2");
    }

    #[test]
    fn element_enumeration_roundtrip() {
        let f = FieldSpec::ext_field(3, 2, 0).unwrap();
        let mut seen = std::collections::HashSet::new();
        for i in 0..9 {
            let e = f.element_from_index(i);
            seen.insert(format!("{:?}", e));
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn prime_subfield_detection() {
        let f = FieldSpec::ext_field(29, 2, 0).unwrap();
        let c = f.from_i64(17);
        assert_eq!(f.as_prime_subfield(&c), Some(17));
        let t = f.gen_t().unwrap();
        assert_eq!(f.as_prime_subfield(&t), None);
        assert_eq!(f.embed_constant(&Scalar::Fp(5)).unwrap(), f.from_u64(5));
    }
}
