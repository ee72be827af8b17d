//! Exact arithmetic in cyclotomic fields.
//!
//! A [`CycNum`] is an element of some `Q(ζ_n)`, stored in the power basis
//! `1, ζ_n, …, ζ_n^(φ(n)-1)` modulo the `n`-th cyclotomic polynomial. The
//! conductor is always lowered to the smallest `n` whose field contains the
//! value, and `n ≡ 2 (mod 4)` never occurs, so equality is structural.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Largest conductor accepted from serialized input.
pub const MAX_CONDUCTOR: u32 = 1024;

/// An element of a cyclotomic field in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    n: u32,
    terms: Vec<(u32, BigRational)>,
}

/// A root of unity `exp(2πi · num/den)`, kept as a reduced fraction in `Q/Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    num: u32,
    den: u32,
}

impl Root {
    pub const ONE: Root = Root { num: 0, den: 1 };

    /// `ζ_den^num`.
    pub fn new(num: i64, den: u32) -> Root {
        assert!(den > 0, "root of unity with zero order");
        let d = den as i64;
        let e = num.rem_euclid(d);
        let g = e.gcd(&d).max(1);
        Root {
            num: (e / g) as u32,
            den: (d / g) as u32,
        }
    }

    pub fn num(self) -> u32 {
        self.num
    }

    /// Multiplicative order.
    pub fn order(self) -> u32 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == 0
    }

    pub fn mul(self, other: Root) -> Root {
        let l = self.den.lcm(&other.den);
        Root::new(
            (self.num * (l / self.den)) as i64 + (other.num * (l / other.den)) as i64,
            l,
        )
    }

    pub fn inv(self) -> Root {
        Root::new(-(self.num as i64), self.den)
    }

    pub fn div(self, other: Root) -> Root {
        self.mul(other.inv())
    }

    pub fn pow(self, k: i64) -> Root {
        Root::new(self.num as i64 * k, self.den)
    }

    /// Exponent of this root as a power of `ζ_m`, if it lies in `μ_m`.
    pub fn exponent_mod(self, m: u32) -> Option<u32> {
        if m % self.den == 0 {
            Some(self.num * (m / self.den))
        } else {
            None
        }
    }

    pub fn to_cyc(self) -> CycNum {
        CycNum::root_of_unity(self.den, self.num as i64)
    }
}

pub(crate) fn phi(n: u32) -> u32 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Canonical conductor for the field `Q(ζ_n)`.
fn canonical_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// Coefficients of Φ_n, lowest degree first.
fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_poly(d);
            num = poly_exact_div(&num, &div);
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn poly_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    q
}

/// Reduce a polynomial in ζ_n (any length) to the power basis of length φ(n).
fn reduce_mod_phi(n: u32, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let f = phi(n) as usize;
    // ζ_n^n = 1 first, which keeps the length at most n
    if poly.len() > n as usize {
        let extra = poly.split_off(n as usize);
        for (i, c) in extra.into_iter().enumerate() {
            if !c.is_zero() {
                let k = i % n as usize;
                poly[k] += c;
            }
        }
    }
    let cyc = cyclotomic_poly(n);
    let nonzero: Vec<(usize, i64)> = cyc[..f]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect();
    for d in (f..poly.len()).rev() {
        if poly[d].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[d], BigRational::zero());
        for &(k, ck) in &nonzero {
            poly[d - f + k] -= &c * BigRational::from_integer(BigInt::from(ck));
        }
    }
    poly.resize(f, BigRational::zero());
    poly
}

/// Embedding data for `Q(ζ_m) ⊂ Q(ζ_l)`: the embedding matrix and a left inverse
/// supported on a set of pivot rows.
struct Projection {
    embed: Vec<Vec<BigRational>>, // φ(l) rows × φ(m) cols
    pivots: Vec<usize>,
    inverse: Vec<Vec<BigRational>>, // φ(m) × φ(m)
}

fn projection(l: u32, m: u32) -> Arc<Projection> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Projection>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&(l, m)) {
        return p.clone();
    }
    let fl = phi(l) as usize;
    let fm = phi(m) as usize;
    let mult = l / m;
    let mut cols = Vec::with_capacity(fm);
    for j in 0..fm {
        let mut poly = vec![BigRational::zero(); l as usize];
        poly[(j * mult as usize) % l as usize] = BigRational::one();
        cols.push(reduce_mod_phi(l, poly));
    }
    let embed: Vec<Vec<BigRational>> = (0..fl)
        .map(|r| (0..fm).map(|c| cols[c][r].clone()).collect())
        .collect();
    // choose independent rows by elimination on the row space
    let mut pivots = Vec::new();
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut lead: Vec<usize> = Vec::new();
    for (r, row) in embed.iter().enumerate() {
        let mut v = row.clone();
        for (b, &lc) in basis.iter().zip(&lead) {
            if !v[lc].is_zero() {
                let f = v[lc].clone() / &b[lc];
                for k in 0..fm {
                    if !b[k].is_zero() {
                        let t = &f * &b[k];
                        v[k] -= t;
                    }
                }
            }
        }
        if let Some(lc) = v.iter().position(|x| !x.is_zero()) {
            basis.push(v);
            lead.push(lc);
            pivots.push(r);
            if pivots.len() == fm {
                break;
            }
        }
    }
    let sub: Vec<Vec<BigRational>> = pivots.iter().map(|&r| embed[r].clone()).collect();
    let inverse = invert_rational(sub).expect("embedding has full column rank");
    let p = Arc::new(Projection {
        embed,
        pivots,
        inverse,
    });
    cache.lock().unwrap().insert((l, m), p.clone());
    p
}

fn invert_rational(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        if !p.is_one() {
            for k in 0..n {
                a[col][k] = &a[col][k] / &p;
                inv[col][k] = &inv[col][k] / &p;
            }
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..n {
                    if !a[col][k].is_zero() {
                        let t = &f * &a[col][k];
                        a[r][k] -= t;
                    }
                    if !inv[col][k].is_zero() {
                        let t = &f * &inv[col][k];
                        inv[r][k] -= t;
                    }
                }
            }
        }
    }
    Some(inv)
}

fn try_project(l: u32, m: u32, x: &[BigRational]) -> Option<Vec<BigRational>> {
    let p = projection(l, m);
    let fm = p.pivots.len();
    let y: Vec<BigRational> = (0..fm)
        .map(|i| {
            let mut s = BigRational::zero();
            for (k, &r) in p.pivots.iter().enumerate() {
                if !x[r].is_zero() && !p.inverse[i][k].is_zero() {
                    s += &p.inverse[i][k] * &x[r];
                }
            }
            s
        })
        .collect();
    for (r, row) in p.embed.iter().enumerate() {
        let mut s = BigRational::zero();
        for (c, e) in row.iter().enumerate() {
            if !e.is_zero() && !y[c].is_zero() {
                s += e * &y[c];
            }
        }
        if s != x[r] {
            return None;
        }
    }
    Some(y)
}

impl CycNum {
    pub fn zero() -> CycNum {
        CycNum {
            n: 1,
            terms: Vec::new(),
        }
    }

    pub fn one() -> CycNum {
        CycNum::from_rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> CycNum {
        CycNum::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(q: BigRational) -> CycNum {
        if q.is_zero() {
            return CycNum::zero();
        }
        CycNum {
            n: 1,
            terms: vec![(0, q)],
        }
    }

    /// `p/q` as a field element. Panics if `q == 0`.
    pub fn frac(p: i64, q: i64) -> CycNum {
        CycNum::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `ζ_n^(e mod n)`.
    pub fn root_of_unity(n: u32, e: i64) -> CycNum {
        assert!(n >= 1, "root_of_unity needs n >= 1");
        let e = e.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigRational::zero(); n as usize];
        poly[e] = BigRational::one();
        CycNum::from_dense(n, poly)
    }

    /// `(1/denom) · Σ counts[e] ζ_n^e`.
    pub fn from_exponent_counts(n: u32, counts: &[i64], denom: i64) -> CycNum {
        let d = BigInt::from(denom);
        let poly = counts
            .iter()
            .map(|&c| BigRational::new(BigInt::from(c), d.clone()))
            .collect();
        CycNum::from_dense(n, poly)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Nonzero power-basis coefficients `(exponent, coefficient)`, sorted.
    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match (self.n, self.terms.as_slice()) {
            (1, []) => Some(BigRational::zero()),
            (1, [(0, q)]) => Some(q.clone()),
            _ => None,
        }
    }

    /// Unreduced coefficients in `Q[ζ_l]` (length `l`), for `n | l`.
    fn dense(&self, l: u32) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); l as usize];
        let step = l / self.n;
        for (e, c) in &self.terms {
            v[(e * step) as usize] += c;
        }
        v
    }

    /// Canonicalize a polynomial in `ζ_n`.
    fn from_dense(n: u32, poly: Vec<BigRational>) -> CycNum {
        let (n, poly) = if n % 4 == 2 {
            // ζ_{2m} = -ζ_m^{(m+1)/2} for odd m
            let m = n / 2;
            let half = (m + 1) / 2;
            let mut out = vec![BigRational::zero(); m as usize];
            for (e, c) in poly.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = e as u32 % n;
                let k = ((e * half) % m) as usize;
                if e % 2 == 0 {
                    // ζ_{2m}^{2j} = ζ_m^j
                    out[((e / 2) % m) as usize] += c;
                } else {
                    out[k] -= c;
                }
            }
            (m, out)
        } else {
            (n, poly)
        };
        let mut l = n;
        let mut x = reduce_mod_phi(l, poly);
        if x.iter().all(Zero::is_zero) {
            l = 1;
            x = vec![BigRational::zero()];
        }
        'outer: loop {
            if l == 1 {
                break;
            }
            for p in prime_factors(l) {
                let m = canonical_conductor(l / p);
                if let Some(y) = try_project(l, m, &x) {
                    x = y;
                    l = m;
                    continue 'outer;
                }
            }
            break;
        }
        let terms: Vec<(u32, BigRational)> = x
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as u32, c))
            .collect();
        if terms.is_empty() {
            return CycNum::zero();
        }
        CycNum { n: l, terms }
    }

    fn binary(&self, other: &CycNum, op: impl Fn(&mut [BigRational], &[BigRational])) -> CycNum {
        let l = self.n.lcm(&other.n);
        let mut a = self.dense(l);
        let b = other.dense(l);
        op(&mut a, &b);
        CycNum::from_dense(l, a)
    }

    pub fn scale(&self, q: &BigRational) -> CycNum {
        if q.is_zero() {
            return CycNum::zero();
        }
        CycNum {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycNum::from_rational(q.recip()));
        }
        // solve (multiplication by self) · y = 1 in the power basis
        let f = phi(self.n) as usize;
        let mut cols = Vec::with_capacity(f);
        for j in 0..f {
            let shifted = self.mul(&CycNum::root_of_unity(self.n, j as i64));
            let mut v = vec![BigRational::zero(); self.n as usize];
            let step = self.n / shifted.n;
            for (e, c) in &shifted.terms {
                v[(e * step) as usize] += c;
            }
            cols.push(reduce_mod_phi(self.n, v));
        }
        let m: Vec<Vec<BigRational>> = (0..f)
            .map(|r| (0..f).map(|c| cols[c][r].clone()).collect())
            .collect();
        let minv = invert_rational(m).ok_or(Error::DivisionByZero)?;
        let y: Vec<BigRational> = (0..f).map(|r| minv[r][0].clone()).collect();
        let mut poly = y;
        poly.resize(self.n as usize, BigRational::zero());
        Ok(CycNum::from_dense(self.n, poly))
    }

    pub fn pow(&self, k: i64) -> Result<CycNum> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = CycNum::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Returns the root of unity equal to `self`, if there is one.
    pub fn as_root(&self) -> Option<Root> {
        if self.is_zero() {
            return None;
        }
        // roots of unity in Q(ζ_n) are the 2n-th roots (n odd) or n-th roots
        let m = if self.n % 2 == 1 { 2 * self.n } else { self.n };
        (0..m as i64)
            .map(|e| Root::new(e, m))
            .find(|r| &r.to_cyc() == self)
    }

    /// Serialized form `{"n": n, "terms": [[e, "p/q"], ...]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!([e, rational_to_string(c)]))
            .collect();
        json!({ "n": self.n, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<CycNum> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse("CycNum must be a JSON object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("CycNum needs a positive integer \"n\""))?;
        if n == 0 || n > MAX_CONDUCTOR as u64 {
            return Err(Error::parse(format!(
                "conductor {n} outside 1..={MAX_CONDUCTOR}"
            )));
        }
        let n = n as u32;
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("CycNum needs a \"terms\" array"))?;
        let mut poly = vec![BigRational::zero(); n as usize];
        for t in terms {
            let pair = t
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::parse("CycNum term must be [exponent, \"p/q\"]"))?;
            let e = pair[0]
                .as_u64()
                .filter(|&e| e < n as u64)
                .ok_or_else(|| Error::parse("term exponent must lie in 0..n"))?;
            let c = match &pair[1] {
                Value::String(s) => parse_rational(s)?,
                Value::Number(num) => num
                    .as_i64()
                    .map(|i| BigRational::from_integer(BigInt::from(i)))
                    .ok_or_else(|| Error::parse("integer coefficient out of range"))?,
                _ => return Err(Error::parse("coefficient must be a string \"p/q\"")),
            };
            poly[e as usize] += c;
        }
        Ok(CycNum::from_dense(n, poly))
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::parse(format!("malformed rational {s:?}"));
    if s.len() > 4096 {
        return Err(bad());
    }
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::parse("zero denominator"));
    }
    Ok(BigRational::new(p, q))
}

/// Unique odd-order square root of a root of unity `x` with `x^m = 1`, `m` odd.
pub fn sqrt_odd_root(x: &CycNum, m: u32) -> Result<CycNum> {
    if m % 2 == 0 || m == 0 {
        return Err(Error::NotOddRoot);
    }
    let r = x.as_root().ok_or(Error::NotOddRoot)?;
    if m % r.order() != 0 {
        return Err(Error::NotOddRoot);
    }
    Ok(r.pow(((m + 1) / 2) as i64).to_cyc())
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{}", rational_to_string(&a))?,
                (_, true) => write!(f, "z{}^{}", self.n, e)?,
                (_, false) => write!(f, "{}*z{}^{}", rational_to_string(&a), self.n, e)?,
            }
        }
        Ok(())
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_rational(), rhs.as_rational()) {
            return CycNum::from_rational(a + b);
        }
        self.binary(rhs, |a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        })
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        if rhs.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_rational(), rhs.as_rational()) {
            return CycNum::from_rational(a - b);
        }
        self.binary(rhs, |a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= y;
                }
            }
        })
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if self.is_zero() || rhs.is_zero() {
            return CycNum::zero();
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        let l = self.n.lcm(&rhs.n);
        let (sa, sb) = (l / self.n, l / rhs.n);
        let mut out = vec![BigRational::zero(); l as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ((ea * sa + eb * sb) % l) as usize;
                out[e] += ca * cb;
            }
        }
        CycNum::from_dense(l, out)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl Default for CycNum {
    fn default() -> Self {
        CycNum::zero()
    }
}

impl From<i64> for CycNum {
    fn from(v: i64) -> Self {
        CycNum::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, e: i64) -> CycNum {
        CycNum::root_of_unity(n, e)
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycNum::from_int(-1));
    }

    #[test]
    fn sqrt_two_squared() {
        let s2 = &z(8, 1) + &z(8, 7);
        assert_eq!(s2.conductor(), 8);
        assert_eq!(&s2 * &s2, CycNum::from_int(2));
    }

    #[test]
    fn cube_roots_sum() {
        assert_eq!(&z(3, 1) + &z(3, 2), CycNum::from_int(-1));
    }

    #[test]
    fn inverses() {
        assert_eq!(CycNum::from_int(2).inv().unwrap(), CycNum::frac(1, 2));
        assert_eq!(z(8, 1).inv().unwrap(), z(8, 7));
        let x = &CycNum::one() + &z(4, 1);
        let expect = (&CycNum::one() - &z(4, 1)).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(x.inv().unwrap(), expect);
        assert_eq!(&x * &expect, CycNum::one());
        assert!(matches!(CycNum::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn small_roots() {
        assert_eq!(z(1, 0), CycNum::one());
        assert_eq!(z(2, 1), CycNum::from_int(-1));
        assert_eq!(z(6, 3), CycNum::from_int(-1));
        // conductor 6 is never stored
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(z(12, 4), z(3, 1));
        assert_eq!(z(12, 3), z(4, 1));
    }

    #[test]
    fn conductor_lowers() {
        // ζ_12^3 + ζ_12^9 = i + (-i) = 0
        assert!((&z(12, 3) + &z(12, 9)).is_zero());
        // ζ_15^5 lives in Q(ζ_3)
        assert_eq!(z(15, 5).conductor(), 3);
        // √-3 = ζ_3 - ζ_3^2 has conductor 3
        assert_eq!((&z(3, 1) - &z(3, 2)).conductor(), 3);
        // √2 embedded in conductor 24 comes back to 8
        let s2 = &z(24, 3) + &z(24, 21);
        assert_eq!(s2.conductor(), 8);
    }

    #[test]
    fn odd_square_roots() {
        assert_eq!(sqrt_odd_root(&z(3, 1), 3).unwrap(), z(3, 2));
        assert_eq!(sqrt_odd_root(&CycNum::one(), 5).unwrap(), CycNum::one());
        let r = sqrt_odd_root(&z(9, 4), 9).unwrap();
        assert_eq!(r, z(9, 2));
        assert_eq!(&r * &r, z(9, 4));
        assert!(matches!(sqrt_odd_root(&z(4, 1), 3), Err(Error::NotOddRoot)));
        assert!(matches!(
            sqrt_odd_root(&CycNum::from_int(2), 3),
            Err(Error::NotOddRoot)
        ));
    }

    #[test]
    fn odd_square_roots_exhaustive() {
        for m in (1..=15u32).step_by(2) {
            for e in 0..m as i64 {
                let x = z(m, e);
                let y = sqrt_odd_root(&x, m).unwrap();
                assert_eq!(&y * &y, x);
                assert!(y.pow(m as i64).unwrap().is_one());
            }
        }
    }

    #[test]
    fn json_shape() {
        let x = &z(8, 1) + &z(8, 7);
        let v = x.to_json();
        assert_eq!(v, json!({"n": 8, "terms": [[1, "1"], [3, "-1"]]}));
        assert_eq!(CycNum::from_json(&v).unwrap(), x);
        let half = CycNum::frac(-3, 6);
        assert_eq!(half.to_json(), json!({"n": 1, "terms": [[0, "-1/2"]]}));
        assert!(CycNum::from_json(&json!({"n": 0, "terms": []})).is_err());
        assert!(CycNum::from_json(&json!({"n": 4, "terms": [[4, "1"]]})).is_err());
        assert!(CycNum::from_json(&json!({"n": 4, "terms": [[1, "1/0"]]})).is_err());
    }

    #[test]
    fn root_detection() {
        assert_eq!(z(8, 3).as_root(), Some(Root::new(3, 8)));
        assert_eq!(CycNum::from_int(-1).as_root(), Some(Root::new(1, 2)));
        assert_eq!(z(3, 1).scale(&BigRational::from_integer((-1).into())).as_root(), Some(Root::new(5, 6)));
        assert_eq!(CycNum::from_int(2).as_root(), None);
    }
}
