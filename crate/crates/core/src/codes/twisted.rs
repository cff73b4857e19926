use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement, FieldOps};
use crate::linearized::LinPoly;
use crate::matrix::{self, Matrix};
use crate::qsum::{self, Family};

use super::gabidulin::check_evaluation_points;

/// Twisted Gabidulin code: evaluations at `alpha` of
/// `sum_{i<k} f_i x^[i] + sum_j eta_j f_{h_j} x^[k-1+t_j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedGabidulinCode {
    field: ExtField,
    alpha: Vec<FieldElement>,
    k: usize,
    t: Vec<usize>,
    h: Vec<usize>,
    eta: Vec<FieldElement>,
    mrd_chain_validated: bool,
    overbeck_conditions_validated: bool,
}

/// Outcome of checking the subfield-chain conditions for the MRD property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrdChainReport {
    pub chain: Vec<usize>,
    pub n_within_s0: bool,
    pub alpha_in_s0: Vec<bool>,
    /// Smallest chain index `i` with `eta_j` in GF(q^(s_i)), per twist.
    pub eta_layers: Vec<usize>,
    /// The etas occupy layers `1..=ell`, one each.
    pub layers_ok: bool,
}

impl MrdChainReport {
    pub fn passed(&self) -> bool {
        self.n_within_s0 && self.alpha_in_s0.iter().all(|&b| b) && self.layers_ok
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.n_within_s0 {
            out.push(format!("n exceeds s_0={}", self.chain.first().copied().unwrap_or(0)));
        }
        for (i, ok) in self.alpha_in_s0.iter().enumerate() {
            if !ok {
                out.push(format!("alpha_{i} not in GF(q^s_0)"));
            }
        }
        if !self.layers_ok {
            out.push(format!("eta layers {:?} do not cover 1..=ell once each", self.eta_layers));
        }
        out
    }
}

/// Outcome of checking the conditions that force large q-sum dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResistanceReport {
    pub delta: Option<usize>,
    pub twist_spacing: bool,
    pub hook_spacing: bool,
    pub measured: Vec<usize>,
    pub predicted: Vec<usize>,
}

impl ResistanceReport {
    pub fn profile_matches(&self) -> bool {
        self.measured.len() == self.predicted.len()
            && self.measured.iter().zip(&self.predicted).skip(1).all(|(a, b)| a == b)
    }

    pub fn passed(&self) -> bool {
        self.delta.is_some() && self.twist_spacing && self.hook_spacing && self.profile_matches()
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.delta.is_none() {
            out.push("(n-k-ell)/(ell+1) is not a positive integer".to_string());
        }
        if !self.twist_spacing {
            out.push("twists are not the multiples i*(delta+1)".to_string());
        }
        if !self.hook_spacing {
            out.push("hooks are not inside (0, k-1) with gaps > 1".to_string());
        }
        if !self.profile_matches() {
            out.push(format!("q-sum profile {:?} differs from {:?}", self.measured, self.predicted));
        }
        out
    }
}

/// `(n - k - ell) / (ell + 1)` when it is a positive integer.
pub fn resistance_delta(n: usize, k: usize, ell: usize) -> Option<usize> {
    let num = n.checked_sub(k)?.checked_sub(ell)?;
    (num % (ell + 1) == 0 && num > ell).then_some(num / (ell + 1))
}

impl TwistedGabidulinCode {
    /// Builds the code; the `(h, t, eta)` triples are sorted by hook.
    pub fn new(
        field: &ExtField,
        alpha: Vec<FieldElement>,
        k: usize,
        t: Vec<usize>,
        h: Vec<usize>,
        eta: Vec<FieldElement>,
    ) -> Result<Self> {
        check_evaluation_points(field, &alpha, k)?;
        let n = alpha.len();
        let ell = t.len();
        if h.len() != ell {
            return Err(Error::LengthMismatch { expected: ell, got: h.len() });
        }
        if eta.len() != ell {
            return Err(Error::LengthMismatch { expected: ell, got: eta.len() });
        }
        if ell > n - k {
            return Err(Error::InvalidCode(format!("ell={ell} exceeds n-k={}", n - k)));
        }
        for (i, &ti) in t.iter().enumerate() {
            if ti == 0 || ti > n - k {
                return Err(Error::InvalidCode(format!("twist {ti} outside 1..={}", n - k)));
            }
            if t[..i].contains(&ti) {
                return Err(Error::InvalidCode(format!("twist {ti} repeated")));
            }
        }
        if let Some(&bad) = h.iter().find(|&&x| x >= k) {
            return Err(Error::InvalidCode(format!("hook {bad} outside 0..{k}")));
        }
        if eta.iter().any(|e| e.is_zero() || !field.contains(*e)) {
            return Err(Error::InvalidCode("eta entries must be nonzero field elements".into()));
        }
        let mut triples: Vec<(usize, usize, FieldElement)> =
            h.into_iter().zip(t).zip(eta).map(|((h, t), e)| (h, t, e)).collect();
        triples.sort_by_key(|&(h, t, _)| (h, t));
        Ok(Self {
            field: field.clone(),
            alpha,
            k,
            h: triples.iter().map(|x| x.0).collect(),
            t: triples.iter().map(|x| x.1).collect(),
            eta: triples.iter().map(|x| x.2).collect(),
            mrd_chain_validated: false,
            overbeck_conditions_validated: false,
        })
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }
    pub fn alpha(&self) -> &[FieldElement] {
        &self.alpha
    }
    pub fn n(&self) -> usize {
        self.alpha.len()
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn ell(&self) -> usize {
        self.t.len()
    }
    pub fn t(&self) -> &[usize] {
        &self.t
    }
    pub fn h(&self) -> &[usize] {
        &self.h
    }
    pub fn eta(&self) -> &[FieldElement] {
        &self.eta
    }
    pub fn mrd_chain_validated(&self) -> bool {
        self.mrd_chain_validated
    }
    pub fn overbeck_conditions_validated(&self) -> bool {
        self.overbeck_conditions_validated
    }

    /// `floor((n - k) / 2)`, the radius used for decryption.
    pub fn radius(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// Row `j` is `alpha^[j]` plus `eta_i alpha^[k-1+t_i]` for every hook
    /// `h_i = j`.
    pub fn generator(&self) -> Matrix<ExtField> {
        let f = &self.field;
        let mut g = Matrix::moore(f, &self.alpha, self.k);
        for ((&h, &t), &eta) in self.h.iter().zip(&self.t).zip(&self.eta) {
            let power = (self.k - 1 + t) as i64;
            for (j, &a) in self.alpha.iter().enumerate() {
                let v = f.add(g.get(h, j), f.mul(eta, f.frobenius(a, power)));
                g.set(h, j, v);
            }
        }
        g
    }

    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: message.len() });
        }
        self.generator().left_mul_vec(message)
    }

    /// The twisted polynomial whose free coefficients are `message`.
    pub fn polynomial(&self, message: &[FieldElement]) -> Result<LinPoly> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: message.len() });
        }
        let f = &self.field;
        let mut coeffs = message.to_vec();
        coeffs.resize(self.n(), FieldElement::ZERO);
        for ((&h, &t), &eta) in self.h.iter().zip(&self.t).zip(&self.eta) {
            let idx = self.k - 1 + t;
            coeffs[idx] = f.add(coeffs[idx], f.mul(eta, message[h]));
        }
        Ok(LinPoly::new(f, coeffs))
    }

    pub fn encode_poly(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Ok(self.polynomial(message)?.evaluate_many(&self.alpha))
    }

    /// Checks `n <= s_0`, `alpha` inside GF(q^s_0) and one eta per layer.
    pub fn validate_mrd_chain(&mut self) -> Result<MrdChainReport> {
        let chain = self.field.chain().to_vec();
        if chain.is_empty() {
            return Err(Error::NoChainDeclared);
        }
        let s0 = chain[0];
        let alpha_in_s0 = self
            .alpha
            .iter()
            .map(|&a| self.field.in_subfield(a, s0))
            .collect::<Result<Vec<_>>>()?;
        let mut eta_layers = Vec::with_capacity(self.ell());
        for &eta in &self.eta {
            let mut layer = chain.len() - 1;
            for (i, &s) in chain.iter().enumerate() {
                if self.field.in_subfield(eta, s)? {
                    layer = i;
                    break;
                }
            }
            eta_layers.push(layer);
        }
        let mut sorted = eta_layers.clone();
        sorted.sort_unstable();
        let layers_ok = sorted == (1..=self.ell()).collect::<Vec<_>>();
        let report = MrdChainReport {
            chain,
            n_within_s0: self.n() <= s0,
            alpha_in_s0,
            eta_layers,
            layers_ok,
        };
        self.mrd_chain_validated = report.passed();
        Ok(report)
    }

    /// Checks the twist/hook spacing conditions and compares the measured
    /// q-sum profile with the closed form.
    pub fn validate_overbeck_conditions(&mut self) -> Result<ResistanceReport> {
        let (n, k, ell) = (self.n(), self.k, self.ell());
        let delta = resistance_delta(n, k, ell);
        let twist_spacing = delta.is_some_and(|d| {
            let mut t = self.t.clone();
            t.sort_unstable();
            t == (1..=ell).map(|i| i * (d + 1)).collect::<Vec<_>>()
        });
        let hook_spacing = self.h.iter().all(|&h| h > 0 && h + 1 < k)
            && self.h.windows(2).all(|w| w[1] > w[0] + 1);
        let measured = qsum::profile(&self.generator())?.dims;
        let predicted = qsum::predicted_profile(Family::TwistedResistant, n, k, ell);
        let report = ResistanceReport { delta, twist_spacing, hook_spacing, measured, predicted };
        self.overbeck_conditions_validated = report.passed();
        Ok(report)
    }
}

fn chain_base(field: &ExtField, n: usize, ell: usize) -> Result<usize> {
    let chain = field.chain();
    if chain.is_empty() {
        return Err(Error::NoChainDeclared);
    }
    if chain.len() < ell + 1 {
        return Err(Error::InfeasibleParameters(format!(
            "chain has {} layers, ell={ell} needs {}",
            chain.len() - 1,
            ell
        )));
    }
    if chain.windows(2).all(|w| w[1] == 2 * w[0]) {
        assert_eq!(field.m(), chain[0] << (chain.len() - 1));
    }
    if n > chain[0] {
        return Err(Error::InfeasibleParameters(format!("n={n} exceeds s_0={}", chain[0])));
    }
    Ok(chain[0])
}

fn sample_points_and_etas<R: Rng + ?Sized>(
    field: &ExtField,
    n: usize,
    ell: usize,
    rng: &mut R,
) -> Result<(Vec<FieldElement>, Vec<FieldElement>)> {
    let s0 = chain_base(field, n, ell)?;
    let alpha = matrix::random_independent_in_subfield(field, s0, n, rng)?;
    let eta = (1..=ell)
        .map(|i| field.sample_eta_in_layer(i, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok((alpha, eta))
}

/// Twisted code satisfying only the subfield-chain conditions, with random
/// distinct twists and random hooks.
pub fn sample_mrd_code<R: Rng + ?Sized>(
    field: &ExtField,
    n: usize,
    k: usize,
    ell: usize,
    rng: &mut R,
) -> Result<TwistedGabidulinCode> {
    if k == 0 || k >= n || ell > n - k {
        return Err(Error::InfeasibleParameters(format!("need 0 < k < n and ell <= n-k (n={n}, k={k}, ell={ell})")));
    }
    let (alpha, eta) = sample_points_and_etas(field, n, ell, rng)?;
    let mut twists: Vec<usize> = (1..=n - k).collect();
    twists.shuffle(rng);
    twists.truncate(ell);
    let hooks = (0..ell).map(|_| rng.gen_range(0..k)).collect();
    let mut code = TwistedGabidulinCode::new(field, alpha, k, twists, hooks, eta)?;
    let report = code.validate_mrd_chain()?;
    if !report.passed() {
        return Err(Error::InfeasibleParameters(report.violations().join("; ")));
    }
    Ok(code)
}

/// Random hooks `0 < h_1 < ... < h_ell < k-1` with consecutive gaps above 1.
fn sample_spaced_hooks<R: Rng + ?Sized>(k: usize, ell: usize, rng: &mut R) -> Vec<usize> {
    // shifting a sorted ell-subset of 1..=k-2-(ell-1) by its index spreads gaps by one
    let span = k - 2 - (ell - 1);
    let mut picks = rand::seq::index::sample(rng, span, ell).into_vec();
    picks.sort_unstable();
    picks.iter().enumerate().map(|(i, &p)| p + 1 + i).collect()
}

/// Twisted code meeting the chain conditions and the large-q-sum
/// conditions, with twists `t_i = i (delta + 1)`.
pub fn sample_resistant_code<R: Rng + ?Sized>(
    field: &ExtField,
    n: usize,
    k: usize,
    ell: usize,
    rng: &mut R,
) -> Result<TwistedGabidulinCode> {
    if ell == 0 {
        return Err(Error::InfeasibleParameters("ell must be at least 1".into()));
    }
    if k >= n {
        return Err(Error::InfeasibleParameters(format!("k={k} must be below n={n}")));
    }
    let delta = resistance_delta(n, k, ell).ok_or_else(|| {
        Error::InfeasibleParameters(format!("(n-k-ell)/(ell+1) = ({n}-{k}-{ell})/{} is not a positive integer", ell + 1))
    })?;
    if k < 2 * ell + 1 {
        return Err(Error::InfeasibleParameters(format!("k={k} cannot hold {ell} spaced hooks (need k >= {})", 2 * ell + 1)));
    }
    let (alpha, eta) = sample_points_and_etas(field, n, ell, rng)?;
    let twists = (1..=ell).map(|i| i * (delta + 1)).collect();
    let hooks = sample_spaced_hooks(k, ell, rng);
    let mut code = TwistedGabidulinCode::new(field, alpha, k, twists, hooks, eta)?;
    let chain = code.validate_mrd_chain()?;
    if !chain.passed() {
        return Err(Error::InfeasibleParameters(chain.violations().join("; ")));
    }
    let resistance = code.validate_overbeck_conditions()?;
    if !resistance.passed() {
        return Err(Error::InfeasibleParameters(resistance.violations().join("; ")));
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn hook_rows_carry_twists() {
        let f = ExtField::new(2, 32).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let alpha = matrix::random_independent(&f, 27, &mut rng).unwrap();
        let eta = vec![f.random(&mut rng), f.random(&mut rng)];
        let code = TwistedGabidulinCode::new(&f, alpha.clone(), 10, vec![6, 12], vec![5, 6], eta.clone()).unwrap();
        let g = code.generator();
        let pw = |i: i64| alpha.iter().map(|&a| f.frobenius(a, i)).collect::<Vec<_>>();
        let twisted = |i: i64, e, j: i64| {
            pw(i).iter().zip(pw(j)).map(|(&a, b)| f.add(a, f.mul(e, b))).collect::<Vec<_>>()
        };
        assert_eq!(g.row(5), twisted(5, eta[0], 15).as_slice());
        assert_eq!(g.row(6), twisted(6, eta[1], 21).as_slice());
        for r in (0..10).filter(|r| *r != 5 && *r != 6) {
            assert_eq!(g.row(r), pw(r as i64).as_slice());
        }
        assert_eq!(g.rank(), 10);
    }

    #[test]
    fn polynomial_and_matrix_encoders_agree() {
        let f = ExtField::new(2, 16).unwrap().with_chain(vec![8, 16]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let code = sample_resistant_code(&f, 8, 3, 1, &mut rng).unwrap();
        for _ in 0..20 {
            let msg: Vec<_> = (0..3).map(|_| f.random(&mut rng)).collect();
            assert_eq!(code.encode(&msg).unwrap(), code.encode_poly(&msg).unwrap());
        }
    }

    #[test]
    fn unsorted_hooks_are_normalized() {
        let f = ExtField::new(2, 8).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let alpha = matrix::random_independent(&f, 8, &mut rng).unwrap();
        let (e1, e2) = (FieldElement(3), FieldElement(5));
        let a = TwistedGabidulinCode::new(&f, alpha.clone(), 4, vec![2, 4], vec![3, 1], vec![e1, e2]).unwrap();
        let b = TwistedGabidulinCode::new(&f, alpha, 4, vec![4, 2], vec![1, 3], vec![e2, e1]).unwrap();
        assert_eq!(a.h(), &[1, 3]);
        assert_eq!(a.generator(), b.generator());
    }

    #[test]
    fn smallest_resistant_instance() {
        let f = ExtField::new(2, 16).unwrap().with_chain(vec![8, 16]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let code = sample_resistant_code(&f, 8, 3, 1, &mut rng).unwrap();
        assert_eq!(code.t(), &[3]);
        assert_eq!(code.h(), &[1]);
        assert!(code.mrd_chain_validated() && code.overbeck_conditions_validated());
    }

    #[test]
    fn example_parameters_give_delta_five() {
        assert_eq!(resistance_delta(27, 10, 2), Some(5));
        let f = ExtField::new(2, 128).unwrap().with_chain(vec![32, 64, 128]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let code = sample_resistant_code(&f, 27, 10, 2, &mut rng).unwrap();
        assert_eq!(code.t(), &[6, 12]);
    }

    #[test]
    fn infeasible_parameters_are_named() {
        let f = ExtField::new(2, 16).unwrap().with_chain(vec![8, 16]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let err = sample_resistant_code(&f, 8, 4, 1, &mut rng).unwrap_err();
        assert!(matches!(err, Error::InfeasibleParameters(ref s) if s.contains("not a positive integer")));
        let plain = ExtField::new(2, 16).unwrap();
        assert_eq!(sample_resistant_code(&plain, 8, 3, 1, &mut rng).unwrap_err(), Error::NoChainDeclared);
    }

    #[test]
    fn chain_violations_are_reported() {
        let f = ExtField::new(2, 8).unwrap().with_chain(vec![4, 8]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let alpha = matrix::random_independent_in_subfield(&f, 4, 4, &mut rng).unwrap();
        let low_eta = loop {
            let e = f.random_in_subfield(4, &mut rng).unwrap();
            if !e.is_zero() {
                break e;
            }
        };
        let mut code = TwistedGabidulinCode::new(&f, alpha, 2, vec![1], vec![0], vec![low_eta]).unwrap();
        let report = code.validate_mrd_chain().unwrap();
        assert!(!report.passed());
        assert!(!code.mrd_chain_validated());

        let wide = matrix::random_independent(&f, 6, &mut rng).unwrap();
        let eta = f.sample_eta_in_layer(1, &mut rng).unwrap();
        let mut code = TwistedGabidulinCode::new(&f, wide, 2, vec![1], vec![0], vec![eta]).unwrap();
        assert!(!code.validate_mrd_chain().unwrap().n_within_s0);
    }
}
