//! GPT public-key encryption: `G_pub = S [X | G] P`.

use rand::Rng;

use crate::codes::{HiddenCode, DEFAULT_GUARD};
use crate::error::{Error, Result};
use crate::field::{BaseField, ExtField, FieldElement, FieldOps};
use crate::matrix::{self, Matrix};

#[derive(Clone, Debug, PartialEq)]
pub struct GptPublicKey {
    pub g_pub: Matrix<ExtField>,
    pub n: usize,
    pub lambda: usize,
    pub k: usize,
    /// Error rank `floor((n - k) / 2)`.
    pub t: usize,
}

impl GptPublicKey {
    pub fn field(&self) -> &ExtField {
        self.g_pub.field()
    }

    /// Total length `n + lambda`.
    pub fn length(&self) -> usize {
        self.n + self.lambda
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GptSecretKey {
    pub s: Matrix<ExtField>,
    /// `k x lambda` distortion block of rank `distortion_rank`.
    pub x: Matrix<ExtField>,
    pub p: Matrix<BaseField>,
    pub code: HiddenCode,
    pub distortion_rank: usize,
}

impl GptSecretKey {
    pub fn field(&self) -> &ExtField {
        self.code.field()
    }

    pub fn lambda(&self) -> usize {
        self.x.cols()
    }

    /// Recomputes `S [X | G] P`.
    pub fn public_key(&self) -> Result<GptPublicKey> {
        let f = self.field();
        let xg = self.x.hstack(&self.code.generator())?;
        let g_pub = self.s.mul(&xg)?.mul(&self.p.lift(f)?)?;
        let (n, k) = (self.code.n(), self.code.k());
        Ok(GptPublicKey { g_pub, n, lambda: self.lambda(), k, t: (n - k) / 2 })
    }

    /// Checks the structural invariants of a parsed or generated key.
    pub fn validate(&self) -> Result<()> {
        let (n, k, lambda) = (self.code.n(), self.code.k(), self.lambda());
        if self.s.rows() != k || self.s.cols() != k || self.s.rank() != k {
            return Err(Error::InvalidCode("S must be an invertible k x k matrix".into()));
        }
        if self.x.rows() != k {
            return Err(Error::LengthMismatch { expected: k, got: self.x.rows() });
        }
        if self.p.rows() != n + lambda || self.p.cols() != n + lambda || self.p.rank() != n + lambda {
            return Err(Error::InvalidCode("P must be an invertible (n+lambda) square matrix".into()));
        }
        check_distortion(lambda, self.distortion_rank, k)?;
        if self.x.rank() != self.distortion_rank {
            return Err(Error::InvalidDistortionRank { s: self.x.rank(), lambda });
        }
        Ok(())
    }
}

fn check_distortion(lambda: usize, s: usize, k: usize) -> Result<()> {
    let ok = if lambda == 0 { s == 0 } else { s >= 1 && s <= lambda && s <= k };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidDistortionRank { s, lambda })
    }
}

/// Generates a key pair hiding `code` with a `lambda`-column distortion of
/// rank `s`.
pub fn keygen<R: Rng + ?Sized>(
    code: HiddenCode,
    lambda: usize,
    s: usize,
    rng: &mut R,
) -> Result<(GptPublicKey, GptSecretKey)> {
    let f = code.field().clone();
    let (n, k) = (code.n(), code.k());
    check_distortion(lambda, s, k)?;
    let s_mat = Matrix::random_full_rank(&f, k, k, rng);
    let x = Matrix::random_of_rank(&f, k, lambda, s, rng)?;
    let p = Matrix::random_full_rank(&f.base(), n + lambda, n + lambda, rng);
    let sk = GptSecretKey { s: s_mat, x, p, code, distortion_rank: s };
    let pk = sk.public_key()?;
    debug_assert_eq!(pk.g_pub.rank(), k);
    Ok((pk, sk))
}

/// Random vector of length `n_total` with rank weight exactly `t`.
pub fn rank_t_error<R: Rng + ?Sized>(field: &ExtField, n_total: usize, t: usize, rng: &mut R) -> Result<Vec<FieldElement>> {
    matrix::random_rank_vector(field, n_total, t, rng)
}

/// `c = m G_pub + z` with `rank(z) = t`.
pub fn encrypt<R: Rng + ?Sized>(pk: &GptPublicKey, message: &[FieldElement], rng: &mut R) -> Result<Vec<FieldElement>> {
    if message.len() != pk.k {
        return Err(Error::LengthMismatch { expected: pk.k, got: message.len() });
    }
    let f = pk.field();
    let mut c = pk.g_pub.left_mul_vec(message)?;
    let z = rank_t_error(f, pk.length(), pk.t, rng)?;
    for (ci, zi) in c.iter_mut().zip(z) {
        *ci = f.add(*ci, zi);
    }
    Ok(c)
}

/// Decodes the last `n` symbols of `c P^-1` and unscrambles with `S^-1`.
pub fn decrypt(sk: &GptSecretKey, ciphertext: &[FieldElement]) -> Result<Vec<FieldElement>> {
    decrypt_with_guard(sk, ciphertext, DEFAULT_GUARD)
}

pub fn decrypt_with_guard(sk: &GptSecretKey, ciphertext: &[FieldElement], guard: u128) -> Result<Vec<FieldElement>> {
    let f = sk.field();
    let total = sk.code.n() + sk.lambda();
    if ciphertext.len() != total {
        return Err(Error::LengthMismatch { expected: total, got: ciphertext.len() });
    }
    let p_inv = sk.p.inverse()?.lift(f)?;
    let y = p_inv.left_mul_vec(ciphertext)?;
    let decoded = sk.code.decode(&y[sk.lambda()..], guard)?;
    let t = (sk.code.n() - sk.code.k()) / 2;
    if matrix::rank_weight(f, &decoded.error) > t {
        return Err(Error::DecodingFailure("residual error exceeds t".into()));
    }
    sk.s.inverse()?.left_mul_vec(&decoded.message)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{sample_resistant_code, GabidulinCode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn toy(rng: &mut ChaCha20Rng) -> (GptPublicKey, GptSecretKey) {
        let f = ExtField::new(2, 12).unwrap();
        let code = GabidulinCode::random(&f, 12, 4, rng).unwrap();
        keygen(HiddenCode::Gabidulin(code), 2, 1, rng).unwrap()
    }

    #[test]
    fn public_key_reconstructs() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let (pk, sk) = toy(&mut rng);
        assert_eq!(sk.public_key().unwrap(), pk);
        assert_eq!(pk.g_pub.rank(), 4);
        assert_eq!(pk.t, 4);
        sk.validate().unwrap();
    }

    #[test]
    fn distortion_rank_is_checked() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let f = ExtField::new(2, 8).unwrap();
        let code = HiddenCode::Gabidulin(GabidulinCode::random(&f, 8, 4, &mut rng).unwrap());
        for (lambda, s) in [(0, 1), (2, 0), (2, 3)] {
            assert_eq!(
                keygen(code.clone(), lambda, s, &mut rng).unwrap_err(),
                Error::InvalidDistortionRank { s, lambda }
            );
        }
        let (pk, _) = keygen(code, 0, 0, &mut rng).unwrap();
        assert_eq!(pk.g_pub.cols(), 8);
    }

    #[test]
    fn round_trip_and_error_weight() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (pk, sk) = toy(&mut rng);
        let f = pk.field().clone();
        for _ in 0..50 {
            let m: Vec<_> = (0..4).map(|_| f.random(&mut rng)).collect();
            let c = encrypt(&pk, &m, &mut rng).unwrap();
            let clean = pk.g_pub.left_mul_vec(&m).unwrap();
            assert_eq!(matrix::rank_distance(&f, &c, &clean).unwrap(), 4);
            assert_eq!(decrypt(&sk, &c).unwrap(), m);
        }
    }

    #[test]
    fn encryption_is_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (pk, _) = toy(&mut rng);
        let m = vec![FieldElement::ONE; 4];
        let a = encrypt(&pk, &m, &mut rng).unwrap();
        let b = encrypt(&pk, &m, &mut rng).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn twisted_round_trip_by_brute_force() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let f = ExtField::new(2, 16).unwrap().with_chain(vec![8, 16]).unwrap();
        let code = sample_resistant_code(&f, 8, 3, 1, &mut rng).unwrap();
        let (pk, sk) = keygen(HiddenCode::Twisted(code), 0, 0, &mut rng).unwrap();
        for _ in 0..5 {
            let m: Vec<_> = (0..3).map(|_| f.random(&mut rng)).collect();
            let c = encrypt(&pk, &m, &mut rng).unwrap();
            assert_eq!(decrypt(&sk, &c).unwrap(), m);
        }
    }
}
