//! Exhaustive minimum distance and bounded rank-distance decoding for small
//! codes given by a generator matrix.

use crate::error::{Error, Result};
use crate::field::{BaseField, ExtField, FieldElement, FieldOps};
use crate::matrix::{self, Matrix};

use super::Decoded;

/// Default enumeration limit, `2^20` codewords or error supports.
pub const DEFAULT_GUARD: u128 = 1 << 20;

/// Minimum rank weight over all `q^(mk)` nonzero codewords.
pub fn bruteforce_min_distance(g: &Matrix<ExtField>, guard: u128) -> Result<usize> {
    let f = g.field();
    let k = g.rows();
    let order = f.order().ok_or(Error::TooLargeToEnumerate { count: u128::MAX, guard })?;
    let count = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(order));
    let count = match count {
        Some(c) if c <= guard => c,
        Some(c) => return Err(Error::TooLargeToEnumerate { count: c, guard }),
        None => return Err(Error::TooLargeToEnumerate { count: u128::MAX, guard }),
    };
    let rows = g.row_vecs();
    let mut best = g.cols().min(f.m());
    let mut word = vec![FieldElement::ZERO; g.cols()];
    let mut msg = vec![0u128; k];
    for _ in 1..count {
        // odometer over messages; update the codeword by the row deltas
        let mut i = 0;
        loop {
            let old = FieldElement(msg[i]);
            msg[i] = if msg[i] == order - 1 { 0 } else { msg[i] + 1 };
            let delta = f.sub(FieldElement(msg[i]), old);
            for (w, &r) in word.iter_mut().zip(&rows[i]) {
                *w = f.add(*w, f.mul(delta, r));
            }
            if msg[i] != 0 {
                break;
            }
            i += 1;
        }
        let w = matrix::rank_weight(f, &word);
        if w < best {
            best = w;
        }
    }
    Ok(best)
}

/// Number of `w`-dimensional subspaces of GF(q)^n, if it fits.
pub fn gaussian_binomial(n: usize, w: usize, q: u32) -> Option<u128> {
    if w > n {
        return Some(0);
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..w {
        num = num.checked_mul(q.checked_pow((n - i) as u32)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow((i + 1) as u32)?.checked_sub(1)?)?;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    Some(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Calls `visit` with every `w x n` GF(q) matrix in reduced row echelon form
/// of rank `w`.
fn for_each_rref(base: &BaseField, n: usize, w: usize, visit: &mut dyn FnMut(&Matrix<BaseField>) -> Result<()>) -> Result<()> {
    let q = base.q();
    let mut pivots: Vec<usize> = (0..w).collect();
    loop {
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let free: Vec<(usize, usize)> = (0..w)
            .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut m = Matrix::zeros(base, w, n);
        for (r, &p) in pivots.iter().enumerate() {
            m.set(r, p, 1);
        }
        let mut digits = vec![0u32; free.len()];
        loop {
            for (&(r, c), &d) in free.iter().zip(&digits) {
                m.set(r, c, d);
            }
            visit(&m)?;
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
        // next combination of pivot columns
        let mut i = w;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if pivots[i] < n - w + i {
                pivots[i] += 1;
                for j in i + 1..w {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Decodes `received` to the unique codeword within rank distance `radius`
/// by enumerating candidate error supports `B` and solving
/// `H B^T a^T = H r^T`.
pub fn bruteforce_rank_decode(
    g: &Matrix<ExtField>,
    received: &[FieldElement],
    radius: usize,
    guard: u128,
) -> Result<Decoded> {
    let f = g.field();
    let n = g.cols();
    if received.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: received.len() });
    }
    let radius = radius.min(n).min(f.m());
    let mut total: u128 = 0;
    for w in 0..=radius {
        let c = gaussian_binomial(n, w, f.q()).ok_or(Error::TooLargeToEnumerate { count: u128::MAX, guard })?;
        total = total.saturating_add(c);
    }
    if total > guard {
        return Err(Error::TooLargeToEnumerate { count: total, guard });
    }
    let h = g.right_kernel();
    let syndrome = h.mul_vec(received)?;
    let base = f.base();
    let mut found: Vec<Vec<FieldElement>> = Vec::new();
    let mut ambiguous = false;
    for w in 0..=radius {
        for_each_rref(&base, n, w, &mut |b| {
            let b_ext = b.lift(f)?;
            let system = h.mul(&b_ext.transpose())?;
            let Some(a) = system.solve_right(&syndrome) else {
                return Ok(());
            };
            if system.rank() < w {
                ambiguous = true;
            }
            let e = b_ext.left_mul_vec(&a)?;
            let c: Vec<FieldElement> = received.iter().zip(&e).map(|(&r, &x)| f.sub(r, x)).collect();
            if !found.contains(&c) {
                found.push(c);
            }
            Ok(())
        })?;
    }
    if ambiguous || found.len() > 1 {
        return Err(Error::AmbiguousDecoding(found.len().max(2)));
    }
    let Some(codeword) = found.pop() else {
        return Err(Error::DecodingFailure(format!("no codeword within rank distance {radius}")));
    };
    let message = g
        .solve_left(&codeword)
        .ok_or_else(|| Error::DecodingFailure("codeword outside the row space".into()))?;
    let error = received.iter().zip(&codeword).map(|(&r, &c)| f.sub(r, c)).collect();
    Ok(Decoded { message, codeword, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::GabidulinCode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), Some(35));
        assert_eq!(gaussian_binomial(6, 1, 2), Some(63));
        assert_eq!(gaussian_binomial(5, 0, 3), Some(1));
        assert_eq!(gaussian_binomial(3, 4, 2), Some(0));
    }

    #[test]
    fn rref_enumeration_counts_subspaces() {
        let base = BaseField::new(2).unwrap();
        for n in 1..=5 {
            for w in 0..=n {
                let mut count = 0u128;
                for_each_rref(&base, n, w, &mut |m| {
                    assert_eq!(m.rank(), w);
                    count += 1;
                    Ok(())
                })
                .unwrap();
                assert_eq!(Some(count), gaussian_binomial(n, w, 2), "n={n} w={w}");
            }
        }
    }

    #[test]
    fn gabidulin_is_mrd() {
        let f = ExtField::new(2, 4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let code = GabidulinCode::random(&f, 4, 2, &mut rng).unwrap();
        assert_eq!(bruteforce_min_distance(&code.generator(), DEFAULT_GUARD).unwrap(), 3);
    }

    #[test]
    fn guard_is_enforced() {
        let f = ExtField::new(2, 12).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let code = GabidulinCode::random(&f, 12, 4, &mut rng).unwrap();
        assert!(matches!(
            bruteforce_min_distance(&code.generator(), DEFAULT_GUARD),
            Err(Error::TooLargeToEnumerate { .. })
        ));
    }

    #[test]
    fn radius_zero_is_membership() {
        let f = ExtField::new(2, 6).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let code = GabidulinCode::random(&f, 6, 2, &mut rng).unwrap();
        let msg = vec![f.random(&mut rng), f.random(&mut rng)];
        let c = code.encode(&msg).unwrap();
        assert_eq!(bruteforce_rank_decode(&code.generator(), &c, 0, DEFAULT_GUARD).unwrap().message, msg);
        let mut r = c.clone();
        r[0] = f.add(r[0], FieldElement::ONE);
        assert!(matches!(
            bruteforce_rank_decode(&code.generator(), &r, 0, DEFAULT_GUARD),
            Err(Error::DecodingFailure(_))
        ));
    }

    #[test]
    fn agrees_with_interpolation_decoder() {
        let f = ExtField::new(2, 8).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let code = GabidulinCode::random(&f, 8, 4, &mut rng).unwrap();
        for _ in 0..20 {
            let msg: Vec<_> = (0..4).map(|_| f.random(&mut rng)).collect();
            let e = matrix::random_rank_vector(&f, 8, 2, &mut rng).unwrap();
            let r: Vec<_> = code.encode(&msg).unwrap().iter().zip(&e).map(|(&a, &b)| f.add(a, b)).collect();
            let a = bruteforce_rank_decode(&code.generator(), &r, 2, DEFAULT_GUARD).unwrap();
            let b = code.decode(&r).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn too_large_radius_is_ambiguous() {
        let f = ExtField::new(2, 4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let code = GabidulinCode::random(&f, 4, 2, &mut rng).unwrap();
        let r: Vec<_> = (0..4).map(|_| f.random(&mut rng)).collect();
        assert!(matches!(
            bruteforce_rank_decode(&code.generator(), &r, 3, DEFAULT_GUARD),
            Err(Error::AmbiguousDecoding(_))
        ));
    }
}
