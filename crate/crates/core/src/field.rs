//! Exact scalar fields: the rationals and prime fields GF(p) for odd p.
//!
//! Arithmetic goes through a field context (`F: Field`) rather than operator
//! traits on the element type, because a prime field's modulus is only known
//! at run time.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use thiserror::Error;

use crate::matrix::{gauss_determinant, Matrix};

/// Largest modulus accepted for GF(p); keeps products inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;
/// Default prime for randomized checks.
pub const DEFAULT_PRIME: u64 = 10007;
const FULL_LOG_TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("malformed scalar `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("unknown field `{0}` (expected Q or F<p>)")]
    BadFieldSpec(String),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("modulus {0} is too large (limit {MAX_MODULUS})")]
    ModulusTooLarge(u64),
    #[error("zero has no discrete logarithm")]
    LogOfZero,
}

impl FieldError {
    /// True for well-formed requests the library cannot serve, as opposed to bad input.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            FieldError::NotPrime(_) | FieldError::CharacteristicTwo | FieldError::ModulusTooLarge(_)
        )
    }
}

/// Which base field a matrix lives over, as written in files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| FieldError::BadFieldSpec(s.to_string()))?;
        check_modulus(p)?;
        Ok(FieldSpec::Prime(p))
    }
}

fn check_modulus(p: u64) -> Result<(), FieldError> {
    if p == 2 {
        return Err(FieldError::CharacteristicTwo);
    }
    if p >= MAX_MODULUS {
        return Err(FieldError::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicative coordinates of a list of nonzero elements.
///
/// The unit group spanned by the inputs is written as a product of cyclic
/// components; component `k` has generator `generators[k]` and order
/// `moduli[k]`, where 0 stands for infinite order. `exponents[x][k]` is the
/// exponent of input `x` on component `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitCoordinates<E> {
    pub moduli: Vec<BigInt>,
    pub generators: Vec<E>,
    pub exponents: Vec<Vec<BigInt>>,
}

pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Canonical square root in the base field: the smaller residue in GF(p),
    /// the nonnegative root over Q.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn parse(&self, text: &str) -> Result<Self::Elem, FieldError>;
    fn format(&self, a: &Self::Elem) -> String;
    fn random_nonzero(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// Errors when some input is zero.
    fn unit_coordinates(&self, xs: &[Self::Elem]) -> Result<UnitCoordinates<Self::Elem>, FieldError>;

    fn determinant(&self, m: &Matrix<Self::Elem>) -> Self::Elem {
        gauss_determinant(self, m)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `a^e`; `None` for a negative power of zero.
    fn pow(&self, a: &Self::Elem, e: &BigInt) -> Option<Self::Elem> {
        let (mut base, mut k) = if e.is_negative() {
            (self.inv(a)?, -e)
        } else {
            (a.clone(), e.clone())
        };
        let mut acc = self.one();
        let two = BigInt::from(2);
        while !k.is_zero() {
            if k.is_odd() {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k /= &two;
        }
        Some(acc)
    }
}

/// The field of rational numbers, backed by `BigRational`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

fn parse_fraction(text: &str) -> Result<(BigInt, BigInt), FieldError> {
    let cleaned = text.trim().replace('\u{2212}', "-");
    let malformed = || FieldError::Malformed(text.to_string());
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (cleaned.as_str(), "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return Err(malformed());
    }
    let n = BigInt::from_str(num.trim_start_matches('+')).map_err(|_| malformed())?;
    let d = BigInt::from_str(den.trim_start_matches('+')).map_err(|_| malformed())?;
    if d.is_zero() {
        return Err(FieldError::ZeroDenominator(text.to_string()));
    }
    Ok((n, d))
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Pairwise coprime integers > 1 such that every input factors over them.
/// None of the returned elements is a perfect power.
fn coprime_base(values: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = values.iter().filter(|v| !v.is_one()).cloned().collect();
    base.sort();
    base.dedup();
    'refine: loop {
        for a in 0..base.len() {
            for b in a + 1..base.len() {
                let g = base[a].gcd(&base[b]);
                if g.is_one() {
                    continue;
                }
                let x = &base[a] / &g;
                let y = &base[b] / &g;
                let mut next: Vec<BigInt> = base
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != a && k != b)
                    .map(|(_, v)| v.clone())
                    .collect();
                next.extend([g, x, y].into_iter().filter(|v| !v.is_one()));
                next.sort();
                next.dedup();
                base = next;
                continue 'refine;
            }
        }
        break;
    }
    let mut roots: Vec<BigInt> = base.into_iter().map(|b| power_root(&b)).collect();
    roots.sort();
    roots.dedup();
    roots
}

/// The smallest `r` with `r^k = b` for some `k >= 1`.
fn power_root(b: &BigInt) -> BigInt {
    let bits = b.bits() as u32;
    for k in (2..=bits.max(2)).rev() {
        let r = b.nth_root(k);
        if r > BigInt::one() && num::pow(r.clone(), k as usize) == *b {
            return power_root(&r);
        }
    }
    b.clone()
}

fn valuation(n: &mut BigInt, b: &BigInt) -> BigInt {
    let mut k = BigInt::zero();
    while (&*n % b).is_zero() {
        *n /= b;
        k += 1;
    }
    k
}

/// Fraction-free elimination on an integer matrix.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        let n = exact_sqrt(a.numer())?;
        let d = exact_sqrt(a.denom())?;
        Some(BigRational::new(n, d))
    }

    fn parse(&self, text: &str) -> Result<BigRational, FieldError> {
        let (n, d) = parse_fraction(text)?;
        Ok(BigRational::new(n, d))
    }

    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn random_nonzero(&self, rng: &mut dyn RngCore) -> BigRational {
        let mut v: i64 = rng.gen_range(1..=100);
        if rng.gen_bool(0.5) {
            v = -v;
        }
        self.from_i64(v)
    }

    /// Sign component of order 2, then one infinite cyclic component per
    /// element of a coprime base of all numerators and denominators.
    fn unit_coordinates(&self, xs: &[BigRational]) -> Result<UnitCoordinates<BigRational>, FieldError> {
        if xs.iter().any(|x| x.is_zero()) {
            return Err(FieldError::LogOfZero);
        }
        let parts: Vec<BigInt> =
            xs.iter().flat_map(|x| [x.numer().abs(), x.denom().clone()]).collect();
        let base = coprime_base(&parts);
        let mut moduli = vec![BigInt::from(2)];
        moduli.extend(base.iter().map(|_| BigInt::zero()));
        let mut generators = vec![self.from_i64(-1)];
        generators.extend(base.iter().map(|b| BigRational::from_integer(b.clone())));
        let exponents = xs
            .iter()
            .map(|x| {
                let mut num = x.numer().abs();
                let mut den = x.denom().clone();
                let mut row = vec![BigInt::from(u8::from(x.is_negative()))];
                for b in &base {
                    row.push(valuation(&mut num, b) - valuation(&mut den, b));
                }
                debug_assert!(num.is_one() && den.is_one());
                row
            })
            .collect();
        Ok(UnitCoordinates { moduli, generators, exponents })
    }

    /// Clears denominators row by row, then runs Bareiss elimination.
    fn determinant(&self, m: &Matrix<BigRational>) -> BigRational {
        assert!(m.is_square(), "determinant of a non-square matrix");
        let mut scale = BigInt::one();
        let rows: Vec<Vec<BigInt>> = m
            .rows()
            .map(|row| {
                let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                scale *= &l;
                row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
            })
            .collect();
        BigRational::new(bareiss(rows), scale)
    }
}

/// Residue modulo the field's prime, always in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue(u64);

impl Residue {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
enum LogTable {
    Full(Vec<u32>),
    BabyGiant { step: u64, baby: HashMap<u64, u64>, giant: u64 },
}

#[derive(Debug)]
struct PrimeInner {
    p: u64,
    generator: u64,
    logs: OnceLock<LogTable>,
}

/// GF(p) for an odd prime `p < 2^31`, with a cached smallest primitive root.
#[derive(Debug, Clone)]
pub struct PrimeField {
    inner: Arc<PrimeInner>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
    }
}

impl Eq for PrimeField {}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn smallest_primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime field has a primitive root")
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        check_modulus(p)?;
        let generator = smallest_primitive_root(p);
        Ok(PrimeField { inner: Arc::new(PrimeInner { p, generator, logs: OnceLock::new() }) })
    }

    pub fn modulus(&self) -> u64 {
        self.inner.p
    }

    pub fn generator(&self) -> Residue {
        Residue(self.inner.generator)
    }

    pub fn residue(&self, v: u64) -> Residue {
        Residue(v % self.inner.p)
    }

    fn table(&self) -> &LogTable {
        self.inner.logs.get_or_init(|| {
            let p = self.inner.p;
            let g = self.inner.generator;
            if p <= FULL_LOG_TABLE_LIMIT {
                let mut logs = vec![0u32; p as usize];
                let mut x = 1u64;
                for k in 0..p - 1 {
                    logs[x as usize] = k as u32;
                    x = x * g % p;
                }
                LogTable::Full(logs)
            } else {
                let step = ((p - 1) as f64).sqrt().ceil() as u64;
                let mut baby = HashMap::with_capacity(step as usize);
                let mut x = 1u64;
                for j in 0..step {
                    baby.entry(x).or_insert(j);
                    x = x * g % p;
                }
                let giant = pow_mod(pow_mod(g, step, p), p - 2, p);
                LogTable::BabyGiant { step, baby, giant }
            }
        })
    }

    /// `k` in `[0, p-1)` with `g^k = x` for the cached generator `g`.
    pub fn discrete_log(&self, x: Residue) -> Result<u64, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::LogOfZero);
        }
        match self.table() {
            LogTable::Full(logs) => Ok(u64::from(logs[x.0 as usize])),
            LogTable::BabyGiant { step, baby, giant } => {
                let p = self.inner.p;
                let mut gamma = x.0;
                for i in 0..*step {
                    if let Some(j) = baby.get(&gamma) {
                        return Ok((i * step + j) % (p - 1));
                    }
                    gamma = gamma * giant % p;
                }
                unreachable!("generator spans the unit group")
            }
        }
    }
}

impl Field for PrimeField {
    type Elem = Residue;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.inner.p)
    }

    fn zero(&self) -> Residue {
        Residue(0)
    }

    fn one(&self) -> Residue {
        Residue(1)
    }

    fn from_i64(&self, v: i64) -> Residue {
        Residue(v.rem_euclid(self.inner.p as i64) as u64)
    }

    fn add(&self, a: &Residue, b: &Residue) -> Residue {
        Residue((a.0 + b.0) % self.inner.p)
    }

    fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        Residue((a.0 + self.inner.p - b.0) % self.inner.p)
    }

    fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(a.0 * b.0 % self.inner.p)
    }

    fn neg(&self, a: &Residue) -> Residue {
        Residue((self.inner.p - a.0) % self.inner.p)
    }

    fn inv(&self, a: &Residue) -> Option<Residue> {
        (a.0 != 0).then(|| Residue(pow_mod(a.0, self.inner.p - 2, self.inner.p)))
    }

    fn is_zero(&self, a: &Residue) -> bool {
        a.0 == 0
    }

    fn sqrt(&self, a: &Residue) -> Option<Residue> {
        if a.0 == 0 {
            return Some(Residue(0));
        }
        let k = self.discrete_log(*a).ok()?;
        if k % 2 == 1 {
            return None;
        }
        let y = pow_mod(self.inner.generator, k / 2, self.inner.p);
        Some(Residue(y.min(self.inner.p - y)))
    }

    fn parse(&self, text: &str) -> Result<Residue, FieldError> {
        let (n, d) = parse_fraction(text)?;
        let p = BigInt::from(self.inner.p);
        let reduce = |v: &BigInt| v.mod_floor(&p).to_u64().expect("residue fits in u64");
        let den = Residue(reduce(&d));
        let inv = self.inv(&den).ok_or_else(|| FieldError::ZeroDenominator(text.to_string()))?;
        Ok(self.mul(&Residue(reduce(&n)), &inv))
    }

    fn format(&self, a: &Residue) -> String {
        a.0.to_string()
    }

    fn random_nonzero(&self, rng: &mut dyn RngCore) -> Residue {
        Residue(rng.gen_range(1..self.inner.p))
    }

    fn unit_coordinates(&self, xs: &[Residue]) -> Result<UnitCoordinates<Residue>, FieldError> {
        let exponents = xs
            .iter()
            .map(|&x| self.discrete_log(x).map(|k| vec![BigInt::from(k)]))
            .collect::<Result<_, _>>()?;
        Ok(UnitCoordinates {
            moduli: vec![BigInt::from(self.inner.p - 1)],
            generators: vec![self.generator()],
            exponents,
        })
    }
}
