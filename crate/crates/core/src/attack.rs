//! Structural attacks on GPT public keys and work-factor estimates.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::codes::gab_decode;
use crate::error::{Error, Result};
use crate::field::{BaseField, ExtField, FieldElement, FieldOps};
use crate::gpt::{self, GptPublicKey};
use crate::matrix::{self, expand_to_base, Matrix};
use crate::params::{System, SystemParams};
use crate::qsum;

/// Reference ciphertexts an attack must decrypt before it counts as a success.
pub const REFERENCE_CIPHERTEXTS: usize = 10;

/// Decryption capability rebuilt from a public key alone.
#[derive(Clone, Debug)]
pub struct RecoveredDecoder {
    /// `T^-T`, lifted: maps the public code onto `[* | G'']`.
    transform: Matrix<ExtField>,
    lambda: usize,
    alpha: Vec<FieldElement>,
    k: usize,
    /// Last `n` columns of the transformed public generator.
    section: Matrix<ExtField>,
}

impl RecoveredDecoder {
    pub fn alpha(&self) -> &[FieldElement] {
        &self.alpha
    }

    pub fn decrypt(&self, ciphertext: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let y = self.transform.left_mul_vec(ciphertext)?;
        let decoded = gab_decode(self.transform.field(), &self.alpha, self.k, &y[self.lambda..])?;
        self.section
            .solve_left(&decoded.codeword)
            .ok_or_else(|| Error::DecodingFailure("decoded word outside the recovered code".into()))
    }
}

#[derive(Clone, Debug)]
pub struct AttackReport {
    pub attack: &'static str,
    pub success: bool,
    /// The q-sum index the attack worked at.
    pub i_used: Option<usize>,
    /// Dual dimension at `i_used` (or at the last non-saturated index).
    pub dual_dimension: usize,
    /// Dual dimension of `Λ_i(G_pub)` for every computed `i`.
    pub dual_dims: Vec<usize>,
    pub recovered_decoder: Option<RecoveredDecoder>,
    /// Parity-type vector found by the exponential search.
    pub recovered_vector: Option<Vec<FieldElement>>,
    pub work_counter: u128,
    pub budget_exceeded: bool,
    pub diagnostic: String,
}

impl AttackReport {
    fn new(attack: &'static str, dual_dims: Vec<usize>) -> Self {
        Self {
            attack,
            success: false,
            i_used: None,
            dual_dimension: 0,
            dual_dims,
            recovered_decoder: None,
            recovered_vector: None,
            work_counter: 0,
            budget_exceeded: false,
            diagnostic: String::new(),
        }
    }

    fn fail(mut self, msg: impl Into<String>) -> Self {
        self.success = false;
        self.diagnostic = msg.into();
        self
    }

    /// `trial=<n> attack=<name> success=<bool> i=<int> dualdim=<int> work=<count>`.
    pub fn campaign_line(&self, trial: usize) -> String {
        let i = self.i_used.map(|i| i as i64).unwrap_or(-1);
        format!(
            "trial={trial} attack={} success={} i={i} dualdim={} work={}",
            self.attack, self.success, self.dual_dimension, self.work_counter
        )
    }
}

pub fn campaign_summary(attack: &str, reports: &[AttackReport]) -> String {
    let wins = reports.iter().filter(|r| r.success).count();
    let work: u128 = reports.iter().map(|r| r.work_counter).sum();
    let mean = if reports.is_empty() { 0.0 } else { work as f64 / reports.len() as f64 };
    format!("summary attack={attack} trials={} successes={wins} mean_work={mean:.1}", reports.len())
}

fn last_non_saturated(dual_dims: &[usize]) -> Option<usize> {
    dual_dims.iter().rposition(|&d| d > 0)
}

/// Completes the columns `first` (as rows) to an invertible matrix using
/// unit vectors; the given vectors become the leading columns.
fn complete_basis(base: &BaseField, first: &Matrix<BaseField>, dim: usize) -> Result<Matrix<BaseField>> {
    let mut cols = first.clone();
    for j in 0..dim {
        if cols.rows() == dim {
            break;
        }
        let mut unit = Matrix::zeros(base, 1, dim);
        unit.set(0, j, 1);
        let candidate = cols.vstack(&unit)?;
        if candidate.rank() == candidate.rows() {
            cols = candidate;
        }
    }
    Ok(cols.transpose())
}

/// Overbeck's attack: find the first q-sum of the public code with a
/// one-dimensional dual, strip the distortion columns and rebuild a
/// Gabidulin decoder.
pub fn overbeck_attack<R: Rng + ?Sized>(pk: &GptPublicKey, rng: &mut R) -> Result<AttackReport> {
    let bases = qsum::qsum_bases(&pk.g_pub)?;
    let total = pk.length();
    let dual_dims: Vec<usize> = bases.iter().map(|b| total - b.rows()).collect();
    let mut report = AttackReport::new("overbeck", dual_dims.clone());
    report.work_counter = bases.len() as u128;
    let Some(i) = dual_dims.iter().position(|&d| d == 1) else {
        report.i_used = last_non_saturated(&dual_dims);
        report.dual_dimension = report.i_used.map(|i| dual_dims[i]).unwrap_or(0);
        return Ok(report.fail("no q-sum index with a one-dimensional dual"));
    };
    report.i_used = Some(i);
    report.dual_dimension = 1;

    let f = pk.field();
    let (n, k, lambda) = (pk.n, pk.k, pk.lambda);
    let v = bases[i].right_kernel().row(0).to_vec();
    let r = matrix::rank_weight(f, &v);
    if r != n {
        return Ok(report.fail(format!("dual vector has rank {r}, expected {n}")));
    }

    // columns of T: GF(q)-kernel of v first, then a completion
    let base = f.base();
    let kernel = expand_to_base(f, &v).right_kernel();
    let t = complete_basis(&base, &kernel, total)?;
    let t_inv_t = t.inverse()?.transpose().lift(f)?;
    let vt = t.lift(f)?.left_mul_vec(&v)?;
    let gamma = &vt[lambda..];
    let g_prime = pk.g_pub.mul(&t_inv_t)?;
    let section = g_prime.select_cols(&(lambda..total).collect::<Vec<_>>());

    let locators = Matrix::moore_from(f, gamma, -((n as i64) - 2), n - 1).right_kernel();
    if locators.rows() != 1 {
        return Ok(report.fail(format!("locator space has dimension {}", locators.rows())));
    }
    let alpha = locators.row(0).to_vec();
    if !f.linearly_independent_over_base(&alpha) {
        return Ok(report.fail("recovered locators are dependent"));
    }
    let parity = Matrix::moore_from(f, gamma, -((n - k - 1) as i64), n - k);
    if !parity.mul(&section.transpose())?.is_zero() {
        return Ok(report.fail("recovered parity structure does not annihilate the public code"));
    }

    let decoder = RecoveredDecoder { transform: t_inv_t, lambda, alpha, k, section };
    for _ in 0..REFERENCE_CIPHERTEXTS {
        let m: Vec<FieldElement> = (0..k).map(|_| f.random(rng)).collect();
        let c = gpt::encrypt(pk, &m, rng)?;
        match decoder.decrypt(&c) {
            Ok(x) if x == m => {}
            _ => return Ok(report.fail("recovered decoder failed on a reference ciphertext")),
        }
    }
    report.success = true;
    report.recovered_decoder = Some(decoder);
    report.diagnostic = "decoder recovered".into();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applicability {
    /// Largest `i` with `Λ_i` not the full space.
    pub critical_i: Option<usize>,
    pub dual_dim: usize,
    /// One more q-sum step adds exactly one dimension.
    pub moore_structured: bool,
}

pub fn overbeck_applicability(g: &Matrix<ExtField>) -> Result<Applicability> {
    let p = qsum::profile(g)?;
    let n = g.cols();
    let Some(ci) = p.dims.iter().rposition(|&d| d < n) else {
        return Ok(Applicability { critical_i: None, dual_dim: 0, moore_structured: false });
    };
    let moore_structured = p.dims.get(ci + 1).is_some_and(|&next| next == p.dims[ci] + 1);
    Ok(Applicability { critical_i: Some(ci), dual_dim: n - p.dims[ci], moore_structured })
}

/// Enumeration of projective points of an `d`-dimensional space over a
/// field with `order` elements.
enum CandidateOrder {
    /// `index(j) = (a j + b) mod count`, a bijection since `gcd(a, count) = 1`.
    Affine { a: u128, b: u128, count: u128 },
    /// Space too large to index: uniform random points.
    Random,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn projective_count(order: u128, d: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for p in 0..d {
        if p > 0 {
            power = power.checked_mul(order)?;
        }
        total = total.checked_add(power)?;
    }
    Some(total)
}

/// Coefficients of the `index`-th normalized point: block `p` (of size
/// `order^p`) has its leading one at position `d-1-p`.
fn projective_point(f: &ExtField, d: usize, mut index: u128) -> Vec<FieldElement> {
    let order = f.order().expect("indexed fields are small");
    let mut coeffs = vec![FieldElement::ZERO; d];
    let mut size: u128 = 1;
    for p in 0..d {
        if index < size {
            coeffs[d - 1 - p] = FieldElement::ONE;
            for slot in coeffs.iter_mut().skip(d - p) {
                *slot = FieldElement(index % order);
                index /= order;
            }
            return coeffs;
        }
        index -= size;
        size *= order;
    }
    unreachable!("index beyond projective space")
}

fn random_projective_point<R: Rng + ?Sized>(f: &ExtField, d: usize, rng: &mut R) -> Vec<FieldElement> {
    loop {
        let v: Vec<FieldElement> = (0..d).map(|_| f.random(rng)).collect();
        if let Some(lead) = v.iter().find(|x| !x.is_zero()) {
            let inv = f.inv(*lead).unwrap();
            return v.into_iter().map(|x| f.mul(x, inv)).collect();
        }
    }
}

/// Exponential dual search: enumerates the dual of the last non-saturated
/// q-sum in a seeded random order and accepts a vector `v` of rank `n`
/// for which `G_pub [v^[0], v^[-1], ..., v^[-(n-k-1)]]^T` has rank at most
/// `dual_dim - 1`.
pub fn exponential_attack<R: Rng + ?Sized>(pk: &GptPublicKey, budget: u128, rng: &mut R) -> Result<AttackReport> {
    let bases = qsum::qsum_bases(&pk.g_pub)?;
    let total = pk.length();
    let dual_dims: Vec<usize> = bases.iter().map(|b| total - b.rows()).collect();
    let mut report = AttackReport::new("exhaustive", dual_dims.clone());
    let Some(ci) = last_non_saturated(&dual_dims) else {
        return Ok(report.fail("public code has a trivial dual"));
    };
    let f = pk.field().clone();
    let dual = bases[ci].right_kernel();
    let d = dual.rows();
    let ell_est = d - 1;
    report.i_used = Some(ci);
    report.dual_dimension = d;
    let (n, k) = (pk.n, pk.k);

    let order = match f.order().and_then(|o| projective_count(o, d)) {
        Some(count) if count < 1 << 64 => {
            let a = loop {
                let a = rng.gen_range(1..count.max(2));
                if gcd(a, count) == 1 {
                    break a;
                }
            };
            CandidateOrder::Affine { a: a % count, b: rng.gen_range(0..count), count }
        }
        _ => CandidateOrder::Random,
    };
    let limit = match order {
        CandidateOrder::Affine { count, .. } => budget.min(count),
        CandidateOrder::Random => budget,
    };

    let rows = dual.row_vecs();
    let mut j: u128 = 0;
    while j < limit {
        let coeffs = match order {
            CandidateOrder::Affine { a, b, count } => projective_point(&f, d, (a * j + b) % count),
            CandidateOrder::Random => random_projective_point(&f, d, rng),
        };
        j += 1;
        let mut v = vec![FieldElement::ZERO; total];
        for (c, row) in coeffs.iter().zip(&rows) {
            if c.is_zero() {
                continue;
            }
            for (slot, &x) in v.iter_mut().zip(row) {
                *slot = f.add(*slot, f.mul(*c, x));
            }
        }
        if matrix::rank_weight(&f, &v) != n {
            continue;
        }
        let shifts = Matrix::moore_from(&f, &v, -((n - k - 1) as i64), n - k);
        if pk.g_pub.mul(&shifts.transpose())?.rank() <= ell_est {
            report.work_counter = j;
            report.success = true;
            report.recovered_vector = Some(v);
            report.diagnostic = "parity-type vector found".into();
            return Ok(report);
        }
    }
    report.work_counter = j;
    if j == budget {
        report.budget_exceeded = true;
        Ok(report.fail(format!("budget of {budget} candidates exceeded")))
    } else {
        Ok(report.fail("candidate space exhausted"))
    }
}

/// Exact work factor `Q^(ell+1) / (Q - 1)` with `Q = q^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkFactor {
    pub numerator: BigUint,
    pub denominator: BigUint,
    pub log2: f64,
}

pub fn work_factor_exponential(q: u32, m: usize, ell: usize) -> Result<WorkFactor> {
    if q < 2 || m == 0 {
        return Err(Error::InvalidField(format!("work factor needs q >= 2 and m >= 1, got q={q}, m={m}")));
    }
    let big_q = BigUint::from(q).pow(m as u32);
    let numerator = big_q.pow((ell + 1) as u32);
    let denominator = &big_q - BigUint::one();
    let bits_q = m as f64 * (q as f64).log2();
    // log2(Q - 1) = log2(Q) + log2(1 - 1/Q)
    let log2_den = bits_q + (-(q as f64).powf(-(m as f64))).ln_1p() / std::f64::consts::LN_2;
    Ok(WorkFactor { numerator, denominator, log2: (ell + 1) as f64 * bits_q - log2_den })
}

/// External work-factor model for a parameter set.
pub trait WorkFactorEstimator {
    fn name(&self) -> &str;
    /// Whether this estimator accounts for generic decoding attacks.
    fn covers_decoding_attacks(&self) -> bool;
    fn log2_work(&self, params: &SystemParams) -> Option<f64>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecurityEntry {
    pub name: String,
    pub log2_work: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecurityReport {
    pub entries: Vec<SecurityEntry>,
    pub exponential_bits: Option<f64>,
    /// Minimum over all entries.
    pub overall_bits: Option<f64>,
    /// False unless a decoding-attack estimator contributed.
    pub complete: bool,
}

pub fn estimate_security(params: &SystemParams, estimators: &[&dyn WorkFactorEstimator]) -> Result<SecurityReport> {
    let mut entries = Vec::new();
    let mut exponential_bits = None;
    if params.system == System::TwistedGpt {
        let m = params.require(params.m, "m")?;
        let ell = params.require(params.ell, "ell")?;
        let bits = work_factor_exponential(params.q, m, ell)?.log2;
        exponential_bits = Some(bits);
        entries.push(SecurityEntry { name: "exponential_dual_search".into(), log2_work: bits });
    }
    let mut complete = false;
    for est in estimators {
        if let Some(bits) = est.log2_work(params) {
            complete |= est.covers_decoding_attacks();
            entries.push(SecurityEntry { name: est.name().to_string(), log2_work: bits });
        }
    }
    let overall_bits = entries.iter().map(|e| e.log2_work).reduce(f64::min);
    Ok(SecurityReport { entries, exponential_bits, overall_bits, complete })
}
