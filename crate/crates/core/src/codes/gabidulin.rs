use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement, FieldOps};
use crate::linearized::{LinPoly, QDegree};
use crate::matrix::{self, Matrix};

/// Result of a successful decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<FieldElement>,
    pub codeword: Vec<FieldElement>,
    pub error: Vec<FieldElement>,
}

/// Gabidulin code of length `n = alpha.len()` and dimension `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GabidulinCode {
    field: ExtField,
    alpha: Vec<FieldElement>,
    k: usize,
}

pub(crate) fn check_evaluation_points(field: &ExtField, alpha: &[FieldElement], k: usize) -> Result<()> {
    let n = alpha.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidCode(format!("need 0 < k < n, got k={k}, n={n}")));
    }
    if n > field.m() {
        return Err(Error::InvalidCode(format!("n={n} exceeds m={}", field.m())));
    }
    if !field.linearly_independent_over_base(alpha) {
        return Err(Error::DependentBasis);
    }
    Ok(())
}

impl GabidulinCode {
    pub fn new(field: &ExtField, alpha: Vec<FieldElement>, k: usize) -> Result<Self> {
        check_evaluation_points(field, &alpha, k)?;
        Ok(Self { field: field.clone(), alpha, k })
    }

    /// Code with random GF(q)-independent evaluation points.
    pub fn random<R: Rng + ?Sized>(field: &ExtField, n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if n > field.m() {
            return Err(Error::InvalidCode(format!("n={n} exceeds m={}", field.m())));
        }
        let alpha = matrix::random_independent(field, n, rng)?;
        Self::new(field, alpha, k)
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

    /// Unique decoding radius `floor((n - k) / 2)`.
    pub fn radius(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// The `k x n` Moore matrix on `alpha`.
    pub fn generator(&self) -> Matrix<ExtField> {
        Matrix::moore(&self.field, &self.alpha, self.k)
    }

    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: message.len() });
        }
        self.generator().left_mul_vec(message)
    }

    /// Evaluates `f` (q-degree below `k`) at the code locators.
    pub fn encode_poly(&self, f: &LinPoly) -> Result<Vec<FieldElement>> {
        if let QDegree::Finite(d) = f.q_degree() {
            if d >= self.k {
                return Err(Error::InvalidCode(format!("q-degree {d} is not below k={}", self.k)));
            }
        }
        Ok(f.evaluate_many(&self.alpha))
    }

    /// Vector `gamma` whose `(n-k) x n` Moore matrix is a parity-check matrix.
    pub fn parity_gamma(&self) -> Result<Vec<FieldElement>> {
        let (n, k) = (self.n(), self.k);
        let kernel = Matrix::moore(&self.field, &self.alpha, n - 1).right_kernel();
        if kernel.rows() != 1 {
            return Err(Error::InvalidCode(format!("kernel dimension {} instead of 1", kernel.rows())));
        }
        let shift = -((n - k - 1) as i64);
        let gamma: Vec<FieldElement> =
            kernel.row(0).iter().map(|&g| self.field.frobenius(g, shift)).collect();
        let check = Matrix::moore(&self.field, &gamma, n - k).mul(&self.generator().transpose())?;
        if !check.is_zero() || !self.field.linearly_independent_over_base(&gamma) {
            return Err(Error::InvalidCode("parity vector failed verification".into()));
        }
        Ok(gamma)
    }

    pub fn parity_check(&self) -> Result<Matrix<ExtField>> {
        let gamma = self.parity_gamma()?;
        Ok(Matrix::moore(&self.field, &gamma, self.n() - self.k))
    }

    pub fn decode(&self, received: &[FieldElement]) -> Result<Decoded> {
        gab_decode(&self.field, &self.alpha, self.k, received)
    }
}

/// Interpolation decoder: solves `V(r_j) = N(alpha_j)` with
/// `deg_q V <= t`, `deg_q N < k + t`, then recovers `f` from `N = V ∘ f`.
pub fn gab_decode(
    field: &ExtField,
    alpha: &[FieldElement],
    k: usize,
    received: &[FieldElement],
) -> Result<Decoded> {
    let n = alpha.len();
    if received.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: received.len() });
    }
    let t = (n - k) / 2;
    let cols = (t + 1) + (k + t);
    let mut system = Matrix::zeros(field, n, cols);
    for j in 0..n {
        for i in 0..=t {
            system.set(j, i, field.frobenius(received[j], i as i64));
        }
        for i in 0..k + t {
            system.set(j, t + 1 + i, field.neg(field.frobenius(alpha[j], i as i64)));
        }
    }
    let kernel = system.right_kernel();
    if kernel.rows() == 0 {
        return Err(Error::DecodingFailure("interpolation system has only the zero solution".into()));
    }
    let sol = kernel.row(0);
    let v = LinPoly::new(field, sol[..=t].to_vec());
    let nn = LinPoly::new(field, sol[t + 1..].to_vec());
    if v.is_zero() {
        return Err(Error::DecodingFailure("error locator vanished".into()));
    }
    let (f, rem) = nn.left_divide(&v)?;
    if !rem.is_zero() {
        return Err(Error::DecodingFailure("interpolation polynomials are not divisible".into()));
    }
    if f.q_degree() >= QDegree::Finite(k) {
        return Err(Error::DecodingFailure("recovered polynomial has too large q-degree".into()));
    }
    let codeword = f.evaluate_many(alpha);
    let error: Vec<FieldElement> =
        received.iter().zip(&codeword).map(|(&r, &c)| field.sub(r, c)).collect();
    if matrix::rank_weight(field, &error) > t {
        return Err(Error::DecodingFailure("no codeword within the decoding radius".into()));
    }
    let message = (0..k).map(|i| f.coeff(i)).collect();
    Ok(Decoded { message, codeword, error })
}
