//! Arithmetic over prime fields GF(p) and extension fields GF(p^m).
//!
//! Elements carry their m-tuple (a_0, ..., a_{m-1}) over GF(p), lowest degree
//! first, so that α^l = a_0 + a_1 α + ... + a_{m-1} α^{m-1}. Fields of order
//! at most [`TABLE_LIMIT`] also get log/antilog tables and therefore power
//! indices and multiplication. Larger fields (GF(2^300) for the massive-user
//! simulations) are tuple-only: addition, scaling by GF(p) and basis
//! elements are all that the orthogonal codes need there.
//!
//! The zero element has power index −1.

mod poly;

pub use poly::{default_primitive, is_prime, is_primitive, search_primitive};

use crate::error::{Error, Result};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

/// Largest field order for which log/antilog tables are built.
pub const TABLE_LIMIT: u128 = 1 << 20;

/// Power index of the zero element.
pub const ZERO_POWER: i64 = -1;

const NO_LOG: u32 = u32::MAX;

struct Tables {
    /// exp[i] = packed α^i, for 0 <= i < q - 1.
    exp: Vec<u32>,
    /// log[packed] = i, NO_LOG for zero.
    log: Vec<u32>,
}

struct FieldInner {
    p: u32,
    m: usize,
    poly: Option<Vec<u32>>,
    tables: Option<Tables>,
}

/// A finite field GF(p^m). Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.poly == other.0.poly)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.m.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

/// Descriptor text `p=<int> m=<int> poly=<g_0,...,g_m>`; `poly` is omitted
/// for prime fields and for tuple-only fields built without one.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} m={}", self.0.p, self.0.m)?;
        if let Some(g) = &self.0.poly {
            let coeffs: Vec<String> = g.iter().map(|c| c.to_string()).collect();
            write!(f, " poly={}", coeffs.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = None;
        let mut m = None;
        let mut poly = None;
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Descriptor(format!("expected key=value, got `{token}`")))?;
            let bad = |_| Error::Descriptor(format!("bad value in `{token}`"));
            match key {
                "p" => p = Some(value.parse::<u32>().map_err(bad)?),
                "m" => m = Some(value.parse::<usize>().map_err(bad)?),
                "poly" => {
                    let coeffs = value
                        .split(',')
                        .map(|c| c.trim().parse::<u32>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(bad)?;
                    poly = Some(coeffs);
                }
                other => return Err(Error::Descriptor(format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| Error::Descriptor("missing p".into()))?;
        let m = m.unwrap_or(1);
        build_field(p, m, poly.as_deref())
    }
}

/// Builds GF(p^m). With `m > 1` and no polynomial, the pinned default for
/// (p, m) is used, falling back to the smallest primitive polynomial.
/// Tuple-only fields beyond the default table may be built without one.
pub fn build_field(p: u32, m: usize, primitive_poly: Option<&[u32]>) -> Result<FieldSpec> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = (p as u128).checked_pow(m as u32);
    let tabled = matches!(q, Some(q) if q <= TABLE_LIMIT);

    if m == 1 {
        let tables = tabled.then(|| prime_tables(p));
        return Ok(FieldSpec(Arc::new(FieldInner { p, m, poly: None, tables })));
    }

    let poly: Option<Vec<u32>> = match primitive_poly {
        Some(g) => {
            if g.len() != m + 1 || g[m] != 1 || g.iter().any(|&c| c >= p) {
                return Err(Error::BadPolynomial { p, expected: m, got: g.to_vec() });
            }
            Some(g.to_vec())
        }
        None => match default_primitive(p, m) {
            Some(g) => Some(g.to_vec()),
            None if tabled => Some(
                search_primitive(p, m).ok_or(Error::NoDefaultPolynomial { p, m })?,
            ),
            None => None,
        },
    };

    let tables = if tabled {
        let g = poly.as_ref().expect("tabled fields always carry a polynomial");
        Some(extension_tables(p, m, g)?)
    } else {
        if let Some(g) = &poly {
            if q.is_none() || !is_primitive(g, p) {
                return Err(Error::NotPrimitive { p, poly: g.clone() });
            }
        }
        None
    };
    Ok(FieldSpec(Arc::new(FieldInner { p, m, poly, tables })))
}

fn prime_tables(p: u32) -> Tables {
    let order = p as u64 - 1;
    let factors: Vec<u64> = poly_factors(order);
    let generator = (1..p as u64)
        .find(|&g| {
            factors
                .iter()
                .all(|&r| mod_pow(g, order / r, p as u64) != 1)
        })
        .expect("every prime field has a primitive root");
    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![NO_LOG; p as usize];
    let mut x = 1u64;
    for i in 0..order {
        exp.push(x as u32);
        log[x as usize] = i as u32;
        x = x * generator % p as u64;
    }
    Tables { exp, log }
}

fn poly_factors(n: u64) -> Vec<u64> {
    poly::prime_factors(n as u128).into_iter().map(|f| f as u64).collect()
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn extension_tables(p: u32, m: usize, g: &[u32]) -> Result<Tables> {
    let q = (p as usize).pow(m as u32);
    let mut exp = Vec::with_capacity(q - 1);
    let mut log = vec![NO_LOG; q];
    let mut cur = vec![0u32; m];
    cur[0] = 1;
    for i in 0..q - 1 {
        let packed = pack_digits(&cur, p);
        if log[packed as usize] != NO_LOG {
            return Err(Error::NotPrimitive { p, poly: g.to_vec() });
        }
        log[packed as usize] = i as u32;
        exp.push(packed);
        // multiply by α: shift up, reduce X^m = -(g_0 + ... + g_{m-1} X^{m-1})
        let top = cur[m - 1];
        for k in (1..m).rev() {
            cur[k] = cur[k - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for k in 0..m {
                cur[k] = (cur[k] + (p - top * g[k] % p)) % p;
            }
        }
    }
    if cur[0] != 1 || cur[1..].iter().any(|&c| c != 0) {
        return Err(Error::NotPrimitive { p, poly: g.to_vec() });
    }
    Ok(Tables { exp, log })
}

fn pack_digits(tuple: &[u32], p: u32) -> u32 {
    tuple.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// An element of a [`FieldSpec`], stored as its m-tuple over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldSpec,
    tuple: Vec<u32>,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// The m-tuple (a_0, ..., a_{m-1}).
    pub fn tuple(&self) -> &[u32] {
        &self.tuple
    }

    pub fn is_zero(&self) -> bool {
        self.tuple.iter().all(|&a| a == 0)
    }

    /// Power index l with α^l equal to this element, −1 for zero.
    pub fn power_index(&self) -> Result<i64> {
        self.field.tuple_to_power(&self.tuple)
    }

    /// Integer a_0 + a_1 p + ... ; the element value itself for prime fields.
    /// `None` when it does not fit in 64 bits.
    pub fn packed(&self) -> Option<u64> {
        let p = self.field.p() as u64;
        self.tuple
            .iter()
            .rev()
            .try_fold(0u64, |acc, &d| acc.checked_mul(p)?.checked_add(d as u64))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prime-field elements print as integers; extension-field elements print
/// their tuple, digits concatenated when p < 10 (`1100`), comma-separated
/// otherwise.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tuple.len() == 1 {
            return write!(f, "{}", self.tuple[0]);
        }
        let digits: Vec<String> = self.tuple.iter().map(|d| d.to_string()).collect();
        if self.field.p() < 10 {
            write!(f, "{}", digits.concat())
        } else {
            write!(f, "{}", digits.join(","))
        }
    }
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    /// q = p^m, when it fits in 128 bits.
    pub fn order(&self) -> Option<u128> {
        (self.0.p as u128).checked_pow(self.0.m as u32)
    }

    pub fn primitive_poly(&self) -> Option<&[u32]> {
        self.0.poly.as_deref()
    }

    /// Whether power indices and multiplication are available.
    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }

    fn tables(&self) -> Result<&Tables> {
        self.0.tables.as_ref().ok_or(Error::NoMultiplication { p: self.0.p, m: self.0.m })
    }

    fn check(&self, e: &FieldElement) -> Result<()> {
        if &e.field == self {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), tuple: vec![0; self.0.m] }
    }

    pub fn one(&self) -> FieldElement {
        self.basis(0)
    }

    /// α^i for 0 <= i < m: the tuple with a single 1 at position i.
    pub fn basis(&self, i: usize) -> FieldElement {
        assert!(i < self.0.m, "basis index {i} out of range for m = {}", self.0.m);
        let mut tuple = vec![0; self.0.m];
        tuple[i] = 1;
        FieldElement { field: self.clone(), tuple }
    }

    pub fn from_tuple(&self, tuple: &[u32]) -> Result<FieldElement> {
        if tuple.len() != self.0.m {
            return Err(Error::TupleLength { expected: self.0.m, got: tuple.len() });
        }
        if let Some(&d) = tuple.iter().find(|&&d| d >= self.0.p) {
            return Err(Error::TupleDigit(d));
        }
        Ok(FieldElement { field: self.clone(), tuple: tuple.to_vec() })
    }

    /// Element from its packed integer (the value itself for prime fields).
    pub fn from_packed(&self, mut value: u64) -> Result<FieldElement> {
        let p = self.0.p as u64;
        let mut tuple = Vec::with_capacity(self.0.m);
        for _ in 0..self.0.m {
            tuple.push((value % p) as u32);
            value /= p;
        }
        if value != 0 {
            return Err(Error::InvalidArgument("packed value exceeds field order".into()));
        }
        Ok(FieldElement { field: self.clone(), tuple })
    }

    /// α^l, with l = −1 giving zero.
    pub fn from_power(&self, l: i64) -> Result<FieldElement> {
        let tuple = self.power_to_tuple(l)?;
        Ok(FieldElement { field: self.clone(), tuple })
    }

    pub fn power_to_tuple(&self, l: i64) -> Result<Vec<u32>> {
        if l == ZERO_POWER {
            return Ok(vec![0; self.0.m]);
        }
        let t = self.tables()?;
        if l < 0 || l as usize >= t.exp.len() {
            return Err(Error::PowerOutOfRange(l));
        }
        Ok(self.unpack(t.exp[l as usize]))
    }

    pub fn tuple_to_power(&self, tuple: &[u32]) -> Result<i64> {
        if tuple.len() != self.0.m {
            return Err(Error::TupleLength { expected: self.0.m, got: tuple.len() });
        }
        if let Some(&d) = tuple.iter().find(|&&d| d >= self.0.p) {
            return Err(Error::TupleDigit(d));
        }
        if tuple.iter().all(|&d| d == 0) {
            return Ok(ZERO_POWER);
        }
        let t = self.tables()?;
        Ok(t.log[pack_digits(tuple, self.0.p) as usize] as i64)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let p = self.0.p;
        let tuple = a.tuple.iter().zip(&b.tuple).map(|(&x, &y)| (x + y) % p).collect();
        Ok(FieldElement { field: self.clone(), tuple })
    }

    pub fn additive_inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let p = self.0.p;
        let tuple = a.tuple.iter().map(|&x| (p - x) % p).collect();
        Ok(FieldElement { field: self.clone(), tuple })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.add(a, &self.additive_inverse(b)?)
    }

    /// Multiplication by a prime-subfield scalar; works in tuple-only fields.
    pub fn scale(&self, c: u32, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let p = self.0.p as u64;
        let c = c as u64 % p;
        let tuple = a.tuple.iter().map(|&x| (x as u64 * c % p) as u32).collect();
        Ok(FieldElement { field: self.clone(), tuple })
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let t = self.tables()?;
        if a.is_zero() || b.is_zero() {
            return Ok(self.zero());
        }
        let la = t.log[pack_digits(&a.tuple, self.0.p) as usize] as usize;
        let lb = t.log[pack_digits(&b.tuple, self.0.p) as usize] as usize;
        let n = t.exp.len();
        Ok(FieldElement { field: self.clone(), tuple: self.unpack(t.exp[(la + lb) % n]) })
    }

    /// All q elements in packed order; only for tabled fields.
    pub fn elements(&self) -> Result<Vec<FieldElement>> {
        let t = self.tables()?;
        Ok((0..t.log.len() as u32).map(|v| FieldElement {
            field: self.clone(),
            tuple: self.unpack(v),
        })
        .collect())
    }

    // Packed-symbol arithmetic for the codecs. Symbols are a_0 + a_1 p + ...
    // and the field must be tabled.

    pub fn pack(&self, tuple: &[u32]) -> u32 {
        pack_digits(tuple, self.0.p)
    }

    pub fn unpack(&self, mut v: u32) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.m)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn add_packed(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.m == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.m {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn neg_packed(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.m {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn mul_packed(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = self.0.tables.as_ref().expect("packed multiplication needs tables");
        let n = t.exp.len();
        t.exp[(t.log[a as usize] as usize + t.log[b as usize] as usize) % n]
    }

    pub fn inv_packed(&self, a: u32) -> u32 {
        assert!(a != 0, "zero has no inverse");
        let t = self.0.tables.as_ref().expect("packed inversion needs tables");
        let n = t.exp.len();
        t.exp[(n - t.log[a as usize] as usize) % n]
    }

    /// α^i as a packed symbol; i is reduced modulo q − 1.
    pub fn exp_packed(&self, i: usize) -> u32 {
        let t = self.0.tables.as_ref().expect("exp needs tables");
        t.exp[i % t.exp.len()]
    }

    pub fn log_packed(&self, a: u32) -> Option<u32> {
        let t = self.0.tables.as_ref()?;
        match t.log[a as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, m: usize) -> FieldSpec {
        build_field(p, m, None).unwrap()
    }

    fn el(f: &FieldSpec, v: u64) -> FieldElement {
        f.from_packed(v).unwrap()
    }

    #[test]
    fn gf5_elements() {
        let f = gf(5, 1);
        let values: Vec<u64> = f.elements().unwrap().iter().map(|e| e.packed().unwrap()).collect();
        assert_eq!(values, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn gf2_is_smallest_field() {
        let f = gf(2, 1);
        assert_eq!(f.order(), Some(2));
        assert_eq!(f.one().power_index().unwrap(), 0);
    }

    #[test]
    fn alpha4_in_gf16() {
        // X^4 = X + 1 mod X^4 + X + 1
        let f = build_field(2, 4, Some(&[1, 1, 0, 0, 1])).unwrap();
        assert_eq!(f.power_to_tuple(4).unwrap(), vec![1, 1, 0, 0]);
        assert_eq!(f.power_to_tuple(0).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(build_field(15, 1, None).unwrap_err(), Error::NotPrime(15));
        assert!(matches!(
            build_field(2, 4, Some(&[1, 1, 1, 1, 1])),
            Err(Error::NotPrimitive { .. })
        ));
        assert!(matches!(
            build_field(2, 4, Some(&[1, 1, 0, 1])),
            Err(Error::BadPolynomial { .. })
        ));
    }

    #[test]
    fn addition_examples() {
        let f5 = gf(5, 1);
        assert_eq!(f5.add(&el(&f5, 1), &el(&f5, 4)).unwrap(), f5.zero());
        assert_eq!(f5.add(&el(&f5, 0), &el(&f5, 3)).unwrap(), el(&f5, 3));
        let f17 = gf(17, 1);
        assert_eq!(f17.add(&el(&f17, 15), &el(&f17, 4)).unwrap(), el(&f17, 2));
    }

    #[test]
    fn multiplication_examples() {
        let f5 = gf(5, 1);
        assert_eq!(f5.mul(&el(&f5, 2), &el(&f5, 3)).unwrap(), el(&f5, 1));
        assert_eq!(f5.mul(&f5.zero(), &el(&f5, 3)).unwrap(), f5.zero());
        let f16 = gf(2, 4);
        let a7 = f16.from_power(7).unwrap();
        let a9 = f16.from_power(9).unwrap();
        assert_eq!(f16.mul(&a7, &a9).unwrap().power_index().unwrap(), 1);
    }

    #[test]
    fn additive_inverse_examples() {
        let f5 = gf(5, 1);
        assert_eq!(f5.additive_inverse(&el(&f5, 2)).unwrap(), el(&f5, 3));
        assert_eq!(f5.additive_inverse(&f5.zero()).unwrap(), f5.zero());
        let f17 = gf(17, 1);
        assert_eq!(f17.additive_inverse(&el(&f17, 8)).unwrap(), el(&f17, 9));
    }

    #[test]
    fn power_tuple_examples() {
        let f16 = gf(2, 4);
        assert_eq!(f16.power_to_tuple(0).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(f16.power_to_tuple(ZERO_POWER).unwrap(), vec![0, 0, 0, 0]);
        let f625 = gf(5, 4);
        assert_eq!(f625.power_to_tuple(1).unwrap(), vec![0, 1, 0, 0]);
        assert!(matches!(f16.power_to_tuple(15), Err(Error::PowerOutOfRange(15))));
        assert!(matches!(
            f16.tuple_to_power(&[1, 0, 0]),
            Err(Error::TupleLength { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn mismatched_fields() {
        let a = gf(5, 1).one();
        let f7 = gf(7, 1);
        assert_eq!(f7.add(&a, &f7.one()).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn tuple_only_field() {
        let f = gf(2, 300);
        assert!(!f.has_tables());
        let s = f.add(&f.basis(0), &f.basis(299)).unwrap();
        assert_eq!(s.tuple().iter().sum::<u32>(), 2);
        assert!(matches!(f.mul(&s, &s), Err(Error::NoMultiplication { .. })));
    }

    #[test]
    fn descriptor_round_trip() {
        let f: FieldSpec = "p=2 m=4 poly=1,1,0,0,1".parse().unwrap();
        assert_eq!(f.to_string(), "p=2 m=4 poly=1,1,0,0,1");
        let g: FieldSpec = "p=17 m=1".parse().unwrap();
        assert_eq!(g.to_string(), "p=17 m=1");
        assert!("p=2 m=4 bogus=1".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn exhaustive_round_trip_and_orbit() {
        for (p, m) in [(2, 4), (2, 8), (5, 4), (17, 2), (2, 16), (3, 5)] {
            let f = gf(p, m);
            let q = f.order().unwrap() as i64;
            let mut seen = std::collections::HashSet::new();
            for l in -1..q - 1 {
                let t = f.power_to_tuple(l).unwrap();
                assert_eq!(f.tuple_to_power(&t).unwrap(), l);
                assert!(seen.insert(t));
            }
            assert_eq!(seen.len() as i64, q);
        }
    }

    #[test]
    fn packed_arithmetic_matches_elements() {
        let f = gf(5, 4);
        for a in (0..625u32).step_by(7) {
            for b in (0..625u32).step_by(11) {
                let ea = el(&f, a as u64);
                let eb = el(&f, b as u64);
                assert_eq!(f.add(&ea, &eb).unwrap().packed().unwrap() as u32, f.add_packed(a, b));
                assert_eq!(f.mul(&ea, &eb).unwrap().packed().unwrap() as u32, f.mul_packed(a, b));
            }
            if a != 0 {
                assert_eq!(f.mul_packed(a, f.inv_packed(a)), 1);
            }
        }
    }
}
