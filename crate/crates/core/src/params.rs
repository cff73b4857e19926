//! Key-size and rate calculators for code-based systems and the parameter
//! search for resistant twisted GPT instances.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::attack::{estimate_security, work_factor_exponential};
use crate::codes::resistance_delta;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    McEliece,
    Loidreau,
    TwistedGpt,
    QcMdpc,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::McEliece => "mceliece",
            System::Loidreau => "loidreau",
            System::TwistedGpt => "twisted_gpt",
            System::QcMdpc => "qc_mdpc",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mceliece" => Ok(System::McEliece),
            "loidreau" => Ok(System::Loidreau),
            "twisted_gpt" => Ok(System::TwistedGpt),
            "qc_mdpc" => Ok(System::QcMdpc),
            _ => Err(Error::Parse(format!("unknown system `{s}`"))),
        }
    }
}

/// One parameter set. Fields a system does not use stay `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemParams {
    pub system: System,
    pub q: u32,
    pub k: usize,
    pub n: usize,
    pub m: Option<usize>,
    pub ell: Option<usize>,
    pub lambda: Option<usize>,
    pub s: Option<usize>,
    pub t: Option<usize>,
    /// Hamming error weight (McEliece).
    pub tau: Option<usize>,
    /// Rank error weight (Loidreau).
    pub t_loi: Option<usize>,
    /// Subspace dimension (Loidreau).
    pub lambda_prime: Option<usize>,
}

impl SystemParams {
    fn bare(system: System, k: usize, n: usize) -> Self {
        Self {
            system,
            q: 2,
            k,
            n,
            m: None,
            ell: None,
            lambda: None,
            s: None,
            t: None,
            tau: None,
            t_loi: None,
            lambda_prime: None,
        }
    }

    pub fn mceliece(k: usize, n: usize, m: usize, tau: usize) -> Self {
        Self { m: Some(m), tau: Some(tau), ..Self::bare(System::McEliece, k, n) }
    }

    pub fn loidreau(k: usize, n: usize, m: usize, t_loi: usize, lambda_prime: usize) -> Self {
        Self { m: Some(m), t_loi: Some(t_loi), lambda_prime: Some(lambda_prime), ..Self::bare(System::Loidreau, k, n) }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn twisted_gpt(k: usize, n: usize, m: usize, ell: usize, lambda: usize, s: usize, t: usize) -> Self {
        Self {
            m: Some(m),
            ell: Some(ell),
            lambda: Some(lambda),
            s: Some(s),
            t: Some(t),
            ..Self::bare(System::TwistedGpt, k, n)
        }
    }

    pub fn qc_mdpc(k: usize, n: usize) -> Self {
        Self::bare(System::QcMdpc, k, n)
    }

    pub fn require(&self, value: Option<usize>, name: &'static str) -> Result<usize> {
        value.ok_or(Error::MissingField(name))
    }
}

/// Exact key size and rate with the two-decimal values a table prints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySizeReport {
    pub key_bits: u128,
    /// Key size in units of 10 bytes (KB = 1000 bytes), rounded half up.
    pub key_kb_hundredths: u128,
    pub rate_num: u128,
    pub rate_den: u128,
    pub rate_hundredths: u128,
}

impl KeySizeReport {
    /// Bytes as a float; exact whenever `key_bits` is a multiple of 8.
    pub fn key_bytes(&self) -> f64 {
        self.key_bits as f64 / 8.0
    }

    pub fn key_kb(&self) -> String {
        format_hundredths(self.key_kb_hundredths)
    }

    pub fn rate(&self) -> String {
        format_hundredths(self.rate_hundredths)
    }
}

/// `round(100 * num / den)` with ties rounded up.
pub fn round_hundredths(num: u128, den: u128) -> u128 {
    (200 * num + den) / (2 * den)
}

fn format_hundredths(h: u128) -> String {
    format!("{}.{:02}", h / 100, h % 100)
}

/// Systematic-form public key size and code rate.
pub fn key_size(p: &SystemParams) -> Result<KeySizeReport> {
    let (k, n) = (p.k as u128, p.n as u128);
    if k == 0 || n <= k {
        return Err(Error::InfeasibleParameters(format!("need 0 < k < n, got k={k}, n={n}")));
    }
    let (bits, rate_den) = match p.system {
        System::TwistedGpt => {
            let m = p.require(p.m, "m")? as u128;
            let lambda = p.require(p.lambda, "lambda")? as u128;
            if n + lambda <= k {
                return Err(Error::InfeasibleParameters("n + lambda must exceed k".into()));
            }
            (k * (n + lambda - k) * m, n + lambda)
        }
        System::Loidreau => {
            let m = p.require(p.m, "m")? as u128;
            (k * (n - k) * m, n)
        }
        System::McEliece => (k * (n - k), n),
        System::QcMdpc => (n - k, n),
    };
    Ok(KeySizeReport {
        key_bits: bits,
        key_kb_hundredths: round_hundredths(bits, 8000),
        rate_num: k,
        rate_den,
        rate_hundredths: round_hundredths(k, rate_den),
    })
}

/// The twelve comparison rows: McEliece, Loidreau, twisted GPT and QC-MDPC at
/// three security levels each.
pub fn reference_rows() -> Vec<SystemParams> {
    vec![
        SystemParams::mceliece(1436, 1876, 11, 41),
        SystemParams::loidreau(32, 50, 50, 3, 3),
        SystemParams::twisted_gpt(18, 26, 104, 2, 6, 1, 4),
        SystemParams::qc_mdpc(4801, 9602),
        SystemParams::mceliece(2482, 3262, 12, 66),
        SystemParams::loidreau(40, 64, 96, 4, 3),
        SystemParams::twisted_gpt(21, 33, 132, 2, 8, 1, 6),
        SystemParams::qc_mdpc(9857, 19714),
        SystemParams::mceliece(5318, 7008, 13, 133),
        SystemParams::loidreau(80, 120, 128, 4, 5),
        SystemParams::twisted_gpt(32, 48, 192, 2, 12, 2, 8),
        SystemParams::qc_mdpc(32771, 65542),
    ]
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

/// Security cell: only a structural lower bound is ever printed.
fn security_cell(p: &SystemParams) -> String {
    match estimate_security(p, &[]) {
        Ok(report) => match report.exponential_bits {
            Some(bits) => format!(">={bits:.2} bits (structural)"),
            None => "n/a (external)".into(),
        },
        Err(_) => "n/a (external)".into(),
    }
}

/// Aligned text table with parameters, rate, key size and security context.
pub fn render_table(rows: &[SystemParams]) -> Result<String> {
    let header = [
        "system", "q", "k", "n", "m", "ell", "lambda", "s", "t", "tau", "t_loi", "lambda'", "rate", "key_kb",
        "security",
    ];
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for p in rows {
        let ks = key_size(p)?;
        cells.push(vec![
            p.system.to_string(),
            p.q.to_string(),
            p.k.to_string(),
            p.n.to_string(),
            opt(p.m),
            opt(p.ell),
            opt(p.lambda),
            opt(p.s),
            opt(p.t),
            opt(p.tau),
            opt(p.t_loi),
            opt(p.lambda_prime),
            ks.rate(),
            ks.key_kb(),
            security_cell(p),
        ]);
    }
    let widths: Vec<usize> =
        (0..header.len()).map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    Ok(out)
}

/// Constraints for [`feasible_params`].
#[derive(Clone, Debug)]
pub struct SearchQuery {
    pub q: u32,
    pub n_range: RangeInclusive<usize>,
    pub k_range: RangeInclusive<usize>,
    pub ell_range: RangeInclusive<usize>,
    pub lambda: usize,
    pub s: usize,
    pub max_key_bytes: Option<u128>,
    pub min_exp_bits: f64,
}

/// Resistant twisted GPT parameters with a doubling chain starting at
/// `s_0 = n` (so `m = 2^ell n`), sorted by key size.
pub fn feasible_params(query: &SearchQuery) -> Vec<SystemParams> {
    let mut out = Vec::new();
    for n in query.n_range.clone() {
        for k in query.k_range.clone() {
            for ell in query.ell_range.clone() {
                if ell == 0 || k >= n || k < 2 * ell + 1 || resistance_delta(n, k, ell).is_none() {
                    continue;
                }
                let Some(m) = n.checked_shl(ell as u32).filter(|m| m >> ell == n) else {
                    continue;
                };
                let Ok(wf) = work_factor_exponential(query.q, m, ell) else {
                    continue;
                };
                if wf.log2 < query.min_exp_bits {
                    continue;
                }
                let p = SystemParams {
                    q: query.q,
                    ..SystemParams::twisted_gpt(k, n, m, ell, query.lambda, query.s, (n - k) / 2)
                };
                let Ok(ks) = key_size(&p) else {
                    continue;
                };
                if query.max_key_bytes.is_some_and(|max| ks.key_bits > max * 8) {
                    continue;
                }
                out.push((ks.key_bits, p));
            }
        }
    }
    out.sort_by_key(|(bits, p)| (*bits, p.n, p.k, p.ell));
    out.into_iter().map(|(_, p)| p).collect()
}
