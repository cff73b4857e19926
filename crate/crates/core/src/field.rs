//! Prime fields GF(q) and extension fields GF(q^m) with Frobenius powers and
//! subfield-chain membership.
//!
//! Extension-field elements are stored as the integer `sum c_i q^i` of their
//! coordinates in the polynomial basis `1, x, ..., x^(m-1)` of the modulus.
//! For `q = 2` this is exactly the bit-packed coefficient vector. The field
//! handle [`ExtField`] owns all precomputed tables and is cheap to clone.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::gfpoly;

/// Fields larger than this get log/antilog multiplication tables.
const LOG_TABLE_LIMIT: u128 = 1 << 16;

/// Common arithmetic interface for the base field and its extensions, used
/// by the generic matrix code.
pub trait FieldOps: Clone + fmt::Debug {
    type Elem: Copy + Eq + Hash + fmt::Debug;

    /// `"base"` or `"ext"`, as used in matrix headers.
    const KIND: &'static str;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn same_field(&self, other: &Self) -> bool;
    fn format_elem(&self, a: Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BaseField {
    q: u32,
}

impl BaseField {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::InvalidField(format!("q={q} is not prime")));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

impl FieldOps for BaseField {
    type Elem = u32;
    const KIND: &'static str = "base";

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.q as u64 - b as u64) % self.q as u64) as u32
    }
    fn neg(&self, a: u32) -> u32 {
        (self.q - a) % self.q
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }
    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut result = 1u64;
        let mut base = a as u64;
        let mut e = self.q as u64 - 2;
        let q = self.q as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        Some(result as u32)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }
    fn same_field(&self, other: &Self) -> bool {
        self.q == other.q
    }
    fn format_elem(&self, a: u32) -> String {
        char::from_digit(a, 36).map(String::from).unwrap_or_else(|| a.to_string())
    }
    fn parse_elem(&self, s: &str) -> Result<u32> {
        let v = if s.len() == 1 {
            s.chars().next().and_then(|c| c.to_digit(36))
        } else {
            s.parse::<u32>().ok()
        };
        match v {
            Some(v) if v < self.q => Ok(v),
            _ => Err(Error::Parse(format!("bad base-field element `{s}`"))),
        }
    }
}

/// An element of GF(q^m): the integer `sum c_i q^i` of its polynomial-basis
/// coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u128);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Parameters describing GF(q^m) and an optional declared subfield chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    pub q: u32,
    pub m: usize,
    /// Monic irreducible modulus, low-degree first, length `m + 1`.
    pub modulus: Vec<u32>,
    /// Strictly increasing divisor chain `s_0 | s_1 | ... | s_l = m`; empty
    /// when no chain is declared.
    pub chain: Vec<usize>,
}

impl FieldParams {
    /// `FIELD q=<q> m=<m> mod=<c_0,...,c_m>`, with ` chain=<s_0,...>` appended
    /// when a chain is declared.
    pub fn descriptor(&self) -> String {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        let mut line = format!("FIELD q={} m={} mod={}", self.q, self.m, coeffs.join(","));
        if !self.chain.is_empty() {
            let chain: Vec<String> = self.chain.iter().map(|c| c.to_string()).collect();
            line.push_str(&format!(" chain={}", chain.join(",")));
        }
        line
    }

    pub fn parse_descriptor(line: &str) -> Result<Self> {
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("FIELD") {
            return Err(Error::Parse(format!("expected FIELD line, got `{line}`")));
        }
        let mut q = None;
        let mut m = None;
        let mut modulus = None;
        let mut chain = Vec::new();
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad FIELD token `{tok}`")))?;
            match key {
                "q" => q = Some(parse_int::<u32>(value)?),
                "m" => m = Some(parse_int::<usize>(value)?),
                "mod" => modulus = Some(parse_list::<u32>(value)?),
                "chain" => chain = parse_list::<usize>(value)?,
                _ => return Err(Error::Parse(format!("unknown FIELD key `{key}`"))),
            }
        }
        let q = q.ok_or_else(|| Error::Parse("FIELD missing q".into()))?;
        let m = m.ok_or_else(|| Error::Parse("FIELD missing m".into()))?;
        let modulus = modulus.ok_or_else(|| Error::Parse("FIELD missing mod".into()))?;
        Ok(Self { q, m, modulus, chain })
    }
}

pub(crate) fn parse_int<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse::<T>()
        .map_err(|_| Error::Parse(format!("bad integer `{s}`")))
}

pub(crate) fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_int).collect()
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Tables {
    /// `q^m - 1`, the largest element value.
    max_value: u128,
    /// Bit mask of valid coordinates when `q = 2`.
    mask: u128,
    /// `x^m` reduced, as an element (the low part of the modulus, negated).
    xm: u128,
    /// `frob[i][j] = (x^j)^(q^i)`.
    frob: Vec<Vec<FieldElement>>,
    log: Option<LogTables>,
}

struct Inner {
    params: FieldParams,
    tables: Arc<Tables>,
}

/// Handle to GF(q^m). Cloning is cheap; all clones share tables.
#[derive(Clone)]
pub struct ExtField {
    inner: Arc<Inner>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.q(), self.m())
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.params.q == other.inner.params.q
                && self.inner.params.modulus == other.inner.params.modulus)
    }
}

fn modulus_cache() -> &'static Mutex<HashMap<(u32, usize), Vec<u32>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Vec<u32>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// First monic irreducible of degree `m` over GF(q), ordering candidates by
/// the integer `sum c_i q^i` of their lower coefficients.
pub fn default_modulus(q: u32, m: usize) -> Result<Vec<u32>> {
    BaseField::new(q)?;
    if m == 0 {
        return Err(Error::InvalidField("m must be at least 1".into()));
    }
    if let Some(found) = modulus_cache().lock().unwrap().get(&(q, m)) {
        return Ok(found.clone());
    }
    let mut digits = vec![0u32; m];
    loop {
        if m == 1 || digits[0] != 0 {
            let mut f = digits.clone();
            f.push(1);
            if gfpoly::is_irreducible(&f, q) {
                modulus_cache().lock().unwrap().insert((q, m), f.clone());
                return Ok(f);
            }
        }
        // increment base-q counter
        let mut i = 0;
        loop {
            if i == m {
                return Err(Error::InvalidField(format!("no irreducible of degree {m}")));
            }
            digits[i] += 1;
            if digits[i] == q {
                digits[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

fn checked_order(q: u32, m: usize) -> Option<u128> {
    // returns q^m - 1 if q^m <= 2^128
    let mut acc: u128 = 1;
    for _ in 0..m {
        match acc.checked_mul(q as u128) {
            Some(v) => acc = v,
            None => {
                // only q = 2, m = 128 lands exactly on 2^128
                return if q == 2 && m == 128 { Some(u128::MAX) } else { None };
            }
        }
    }
    Some(acc - 1)
}

impl ExtField {
    /// GF(q^m) with the default (first lexicographic irreducible) modulus.
    pub fn new(q: u32, m: usize) -> Result<Self> {
        let modulus = default_modulus(q, m)?;
        Self::with_modulus(q, m, modulus)
    }

    pub fn with_modulus(q: u32, m: usize, modulus: Vec<u32>) -> Result<Self> {
        Self::from_params(FieldParams { q, m, modulus, chain: Vec::new() })
    }

    pub fn from_params(params: FieldParams) -> Result<Self> {
        let FieldParams { q, m, .. } = params;
        BaseField::new(q)?;
        if m == 0 {
            return Err(Error::InvalidField("m must be at least 1".into()));
        }
        let max_value = checked_order(q, m)
            .ok_or_else(|| Error::InvalidField(format!("{q}^{m} exceeds 128-bit storage")))?;
        if params.modulus.len() != m + 1 || params.modulus[m] != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree m".into()));
        }
        if params.modulus.iter().any(|&c| c >= q) {
            return Err(Error::InvalidField("modulus coefficients must be reduced mod q".into()));
        }
        if !gfpoly::is_irreducible(&params.modulus, q) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let chain = params.chain.clone();
        let tables = Arc::new(build_tables(q, m, &params.modulus, max_value));
        let field = ExtField {
            inner: Arc::new(Inner { params: FieldParams { chain: Vec::new(), ..params }, tables }),
        };
        if chain.is_empty() {
            Ok(field)
        } else {
            field.with_chain(chain)
        }
    }

    /// Same field with a declared subfield chain `s_0 | s_1 | ... | s_l = m`.
    pub fn with_chain(&self, chain: Vec<usize>) -> Result<Self> {
        let m = self.m();
        if chain.is_empty() {
            return Err(Error::InvalidField("empty chain".into()));
        }
        if chain[0] == 0 || *chain.last().unwrap() != m {
            return Err(Error::InvalidField("chain must start at s_0 >= 1 and end at m".into()));
        }
        for w in chain.windows(2) {
            if w[0] >= w[1] || w[1] % w[0] != 0 {
                return Err(Error::InvalidField(format!(
                    "chain entries {} and {} are not strictly nested divisors",
                    w[0], w[1]
                )));
            }
        }
        let mut params = self.inner.params.clone();
        params.chain = chain;
        Ok(ExtField { inner: Arc::new(Inner { params, tables: self.inner.tables.clone() }) })
    }

    pub fn params(&self) -> &FieldParams {
        &self.inner.params
    }

    pub fn q(&self) -> u32 {
        self.inner.params.q
    }

    pub fn m(&self) -> usize {
        self.inner.params.m
    }

    pub fn chain(&self) -> &[usize] {
        &self.inner.params.chain
    }

    pub fn base(&self) -> BaseField {
        BaseField { q: self.q() }
    }

    /// `q^m - 1`.
    pub fn max_value(&self) -> u128 {
        self.inner.tables.max_value
    }

    /// Number of elements `q^m`, if it fits in a `u128`.
    pub fn order(&self) -> Option<u128> {
        self.max_value().checked_add(1)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 <= self.max_value()
    }

    /// Embeds a base-field scalar as a constant polynomial.
    pub fn embed(&self, c: u32) -> FieldElement {
        FieldElement((c % self.q()) as u128)
    }

    /// The generator `x` of the polynomial basis (equals `q` as an integer).
    pub fn generator(&self) -> FieldElement {
        if self.m() == 1 {
            // x is reduced modulo the degree-1 modulus x + c_0
            return self.neg(self.embed(self.params().modulus[0]));
        }
        FieldElement(self.q() as u128)
    }

    /// Coordinates in the polynomial basis, low degree first, length `m`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let q = self.q();
        let m = self.m();
        if q == 2 {
            return (0..m).map(|i| ((a.0 >> i) & 1) as u32).collect();
        }
        let mut v = a.0;
        (0..m)
            .map(|_| {
                let d = (v % q as u128) as u32;
                v /= q as u128;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.m() {
            return Err(Error::LengthMismatch { expected: self.m(), got: coeffs.len() });
        }
        if coeffs.iter().any(|&c| c >= self.q()) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.pack(coeffs))
    }

    fn pack(&self, coeffs: &[u32]) -> FieldElement {
        let q = self.q() as u128;
        let mut v: u128 = 0;
        for &c in coeffs.iter().rev() {
            v = v.wrapping_mul(q).wrapping_add(c as u128);
        }
        FieldElement(v)
    }

    /// Checked arithmetic entry point.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::FieldMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => {
                let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
                self.mul(a, inv)
            }
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.arith(a, b, ArithOp::Div)
    }

    pub fn pow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        let mut result = FieldElement::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Multiplication by a base-field scalar.
    pub fn scale(&self, c: u32, a: FieldElement) -> FieldElement {
        let q = self.q();
        let c = c % q;
        if c == 0 {
            return FieldElement::ZERO;
        }
        if c == 1 {
            return a;
        }
        let digits: Vec<u32> =
            self.coeffs(a).into_iter().map(|d| ((d as u64 * c as u64) % q as u64) as u32).collect();
        self.pack(&digits)
    }

    /// `a^(q^i)`; negative `i` applies the inverse automorphism.
    pub fn frobenius(&self, a: FieldElement, i: i64) -> FieldElement {
        let m = self.m() as i64;
        let idx = i.rem_euclid(m) as usize;
        if idx == 0 || a.is_zero() {
            return a;
        }
        let images = &self.inner.tables.frob[idx];
        if self.q() == 2 {
            let mut acc = 0u128;
            let mut bits = a.0;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                acc ^= images[j].0;
                bits &= bits - 1;
            }
            return FieldElement(acc);
        }
        let mut acc = FieldElement::ZERO;
        for (j, d) in self.coeffs(a).into_iter().enumerate() {
            if d != 0 {
                acc = self.add(acc, self.scale(d, images[j]));
            }
        }
        acc
    }

    /// True iff `a` lies in the subfield GF(q^s), i.e. `a^(q^s) = a`.
    pub fn in_subfield(&self, a: FieldElement, s: usize) -> Result<bool> {
        let m = self.m();
        if s == 0 || !m.is_multiple_of(s) {
            return Err(Error::NonDivisorDegree { s, m });
        }
        Ok(self.frobenius(a, s as i64) == a)
    }

    /// Relative trace onto GF(q^s): `sum_j a^(q^(s j))` for `j < m/s`.
    pub fn relative_trace(&self, a: FieldElement, s: usize) -> Result<FieldElement> {
        let m = self.m();
        if s == 0 || !m.is_multiple_of(s) {
            return Err(Error::NonDivisorDegree { s, m });
        }
        let mut acc = FieldElement::ZERO;
        for j in 0..m / s {
            acc = self.add(acc, self.frobenius(a, (s * j) as i64));
        }
        Ok(acc)
    }

    /// Uniform element of the subfield GF(q^s) (the trace map is a surjective
    /// linear map with equal-sized fibres).
    pub fn random_in_subfield<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> Result<FieldElement> {
        let a = self.random(rng);
        self.relative_trace(a, s)
    }

    /// Samples `eta` in layer `i` of the declared chain:
    /// `eta` in GF(q^(s_i)) but not in GF(q^(s_(i-1))).
    pub fn sample_eta_in_layer<R: Rng + ?Sized>(&self, layer: usize, rng: &mut R) -> Result<FieldElement> {
        let chain = self.chain();
        if chain.is_empty() {
            return Err(Error::NoChainDeclared);
        }
        if layer == 0 || layer >= chain.len() {
            return Err(Error::InvalidField(format!(
                "layer {layer} outside 1..={}",
                chain.len() - 1
            )));
        }
        let (lower, upper) = (chain[layer - 1], chain[layer]);
        if lower == upper {
            return Err(Error::EmptyLayer(layer));
        }
        loop {
            let eta = self.random_in_subfield(upper, rng)?;
            if !self.in_subfield(eta, lower)? {
                return Ok(eta);
            }
        }
    }

    /// True iff the entries are linearly independent over GF(q). More than
    /// `m` entries are always dependent and give `false`.
    pub fn linearly_independent_over_base(&self, v: &[FieldElement]) -> bool {
        if v.is_empty() {
            return true;
        }
        if v.len() > self.m() {
            return false;
        }
        crate::matrix::base_rank_of_elements(self, v) == v.len()
    }

    /// A generator of the multiplicative group, when `q^m - 1` is small
    /// enough to factor by trial division.
    pub fn primitive_element(&self) -> Option<FieldElement> {
        if let Some(log) = &self.inner.tables.log {
            return Some(FieldElement(log.exp[1] as u128));
        }
        let order = self.max_value();
        if order > (1u128 << 40) {
            return None;
        }
        let primes = prime_factors(order);
        let mut candidate = 2u128;
        while candidate <= order {
            let g = FieldElement(candidate);
            if primes.iter().all(|&p| self.pow(g, order / p) != FieldElement::ONE) {
                return Some(g);
            }
            candidate += 1;
        }
        None
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        mul_slow(self.q(), self.m(), &self.inner.tables, &self.inner.params.modulus, a, b)
    }
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
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

fn mul_slow(q: u32, m: usize, tables: &Tables, modulus: &[u32], a: FieldElement, b: FieldElement) -> FieldElement {
    if q == 2 {
        let mut acc = 0u128;
        let top = m - 1;
        for i in (0..m).rev() {
            let carry = (acc >> top) & 1;
            acc = (acc << 1) & tables.mask;
            if carry == 1 {
                acc ^= tables.xm;
            }
            if (b.0 >> i) & 1 == 1 {
                acc ^= a.0;
            }
        }
        return FieldElement(acc);
    }
    let qq = q as u64;
    let digits = |v: u128| -> Vec<u64> {
        let mut v = v;
        (0..m)
            .map(|_| {
                let d = (v % q as u128) as u64;
                v /= q as u128;
                d
            })
            .collect()
    };
    let da = digits(a.0);
    let db = digits(b.0);
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % qq;
        }
    }
    // reduce using x^m = -(c_0 + ... + c_{m-1} x^{m-1})
    for d in (m..2 * m - 1).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (j, &mc) in modulus[..m].iter().enumerate() {
            let slot = &mut prod[d - m + j];
            *slot = (*slot + qq - (c * mc as u64) % qq) % qq;
        }
    }
    let mut v: u128 = 0;
    for &c in prod[..m].iter().rev() {
        v = v * q as u128 + c as u128;
    }
    FieldElement(v)
}

fn build_tables(q: u32, m: usize, modulus: &[u32], max_value: u128) -> Tables {
    let mask = if q == 2 { max_value } else { 0 };
    let xm = if q == 2 {
        // x^m = sum_{i<m} c_i x^i in characteristic 2
        let mut v = 0u128;
        for (i, &c) in modulus[..m].iter().enumerate() {
            v |= (c as u128) << i;
        }
        v
    } else {
        0
    };
    let mut tables = Tables { max_value, mask, xm, frob: Vec::new(), log: None };

    let mul = |t: &Tables, a: FieldElement, b: FieldElement| mul_slow(q, m, t, modulus, a, b);
    let pow_q = |t: &Tables, a: FieldElement| {
        let mut result = FieldElement::ONE;
        for _ in 0..q {
            result = mul(t, result, a);
        }
        result
    };

    // basis images x^j, j < m, as elements
    let basis: Vec<FieldElement> = (0..m)
        .map(|j| {
            if q == 2 {
                FieldElement(1u128 << j)
            } else {
                FieldElement((q as u128).pow(j as u32))
            }
        })
        .collect();
    let basis = if m == 1 { vec![FieldElement::ONE] } else { basis };
    let mut frob = Vec::with_capacity(m);
    frob.push(basis);
    for i in 1..m {
        let next: Vec<FieldElement> = frob[i - 1].iter().map(|&a| pow_q(&tables, a)).collect();
        frob.push(next);
    }
    tables.frob = frob;

    if max_value < LOG_TABLE_LIMIT {
        let order = max_value as u64; // size of the multiplicative group
        let primes: Vec<u64> = prime_factors(max_value).into_iter().map(|p| p as u64).collect();
        let pow = |t: &Tables, a: FieldElement, mut e: u64| {
            let mut r = FieldElement::ONE;
            let mut b = a;
            while e > 0 {
                if e & 1 == 1 {
                    r = mul(t, r, b);
                }
                b = mul(t, b, b);
                e >>= 1;
            }
            r
        };
        let mut g = None;
        for cand in 1..=max_value {
            let c = FieldElement(cand);
            if order == 1 || primes.iter().all(|&p| pow(&tables, c, order / p) != FieldElement::ONE) {
                g = Some(c);
                break;
            }
        }
        let g = g.expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; max_value as usize + 1];
        let mut cur = FieldElement::ONE;
        for (e, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0 as u32;
            log[cur.0 as usize] = e as u32;
            cur = mul(&tables, cur, g);
        }
        tables.log = Some(LogTables { exp, log });
    }
    tables
}

/// Operation selector for [`ExtField::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldOps for ExtField {
    type Elem = FieldElement;
    const KIND: &'static str = "ext";

    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    #[inline]
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let q = self.q();
        if q == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let qq = q as u128;
        let mut out = 0u128;
        let mut place = 1u128;
        for _ in 0..self.m() {
            let d = (x % qq + y % qq) % qq;
            out += d * place;
            x /= qq;
            y /= qq;
            place = place.wrapping_mul(qq);
        }
        FieldElement(out)
    }

    #[inline]
    fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.q() == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    fn neg(&self, a: FieldElement) -> FieldElement {
        let q = self.q();
        if q == 2 {
            return a;
        }
        self.scale(q - 1, a)
    }

    #[inline]
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let tables = &self.inner.tables;
        if let Some(log) = &tables.log {
            let n = log.exp.len();
            let mut e = log.log[a.0 as usize] as usize + log.log[b.0 as usize] as usize;
            if e >= n {
                e -= n;
            }
            return FieldElement(log.exp[e] as u128);
        }
        self.mul_slow(a, b)
    }

    fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        if let Some(log) = &self.inner.tables.log {
            let n = log.exp.len();
            let e = (n - log.log[a.0 as usize] as usize) % n;
            return Some(FieldElement(log.exp[e] as u128));
        }
        Some(self.pow(a, self.max_value() - 1))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        if self.q() == 2 {
            return FieldElement(rng.gen::<u128>() & self.inner.tables.mask);
        }
        FieldElement(rng.gen_range(0..=self.max_value()))
    }

    fn same_field(&self, other: &Self) -> bool {
        self == other
    }

    /// Base-q digits, low degree first, zero-padded to length `m`.
    fn format_elem(&self, a: FieldElement) -> String {
        self.coeffs(a)
            .into_iter()
            .map(|d| char::from_digit(d, 36).unwrap_or('?'))
            .collect()
    }

    fn parse_elem(&self, s: &str) -> Result<FieldElement> {
        if s.chars().count() != self.m() {
            return Err(Error::Parse(format!(
                "element `{s}` must have exactly {} digits",
                self.m()
            )));
        }
        let digits = s
            .chars()
            .map(|c| c.to_digit(36).filter(|&d| d < self.q()))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::Parse(format!("bad digit in element `{s}`")))?;
        Ok(self.pack(&digits))
    }
}
