//! Shared oracles and property checks for the integration targets.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use twisted_gpt::linearized::LinPoly;
use twisted_gpt::matrix::{self, Matrix};
use twisted_gpt::{qsum, ExtField, FieldElement, FieldOps};

/// Rank of a matrix over GF(q), q prime, by plain Gaussian elimination.
pub fn rank_mod_q(mut rows: Vec<Vec<u32>>, q: u32) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = (1..q).find(|x| x * rows[rank][c] % q == 1).unwrap();
        let pivot: Vec<u32> = rows[rank].iter().map(|&x| x * inv % q).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = (*x + q * q - f * p % q) % q;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Rank weight from the coefficient expansion, independent of the library's
/// matrix code.
pub fn oracle_rank_weight(field: &ExtField, v: &[FieldElement]) -> usize {
    let rows: Vec<Vec<u32>> = v.iter().map(|&x| field.coeffs(x)).collect();
    rank_mod_q(rows, field.q())
}

pub fn test_fields() -> Vec<ExtField> {
    vec![ExtField::new(2, 8).unwrap(), ExtField::new(3, 5).unwrap(), ExtField::new(2, 13).unwrap()]
}

fn elem(field: &ExtField, raw: u128) -> FieldElement {
    FieldElement(raw % (field.max_value() + 1))
}

fn elems(field: &ExtField, raw: &[u128]) -> Vec<FieldElement> {
    raw.iter().map(|&r| elem(field, r)).collect()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

/// Field index, three raw vectors of a common length and a seed.
fn vector_triples() -> impl Strategy<Value = (usize, Vec<u128>, Vec<u128>, Vec<u128>, u64)> {
    (0usize..3, 1usize..=8).prop_flat_map(|(fi, n)| {
        (
            Just(fi),
            prop::collection::vec(any::<u128>(), n),
            prop::collection::vec(any::<u128>(), n),
            prop::collection::vec(any::<u128>(), n),
            any::<u64>(),
        )
    })
}

pub fn rank_metric_axioms(cases: u32) -> Result<(), String> {
    let fields = test_fields();
    runner(cases)
        .run(&vector_triples(), |(fi, a, b, c, seed)| {
            let f = &fields[fi];
            let (x, y, z) = (elems(f, &a), elems(f, &b), elems(f, &c));
            let d = |u: &[FieldElement], v: &[FieldElement]| matrix::rank_distance(f, u, v).unwrap();
            prop_assert_eq!(d(&x, &x), 0);
            prop_assert_eq!(d(&x, &y), d(&y, &x));
            prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
            prop_assert_eq!(d(&x, &y) == 0, x == y);
            let w = matrix::rank_weight(f, &x);
            prop_assert_eq!(w, oracle_rank_weight(f, &x));
            prop_assert!(w <= x.len().min(f.m()));
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let scalar = loop {
                let s = f.random(&mut rng);
                if !s.is_zero() {
                    break s;
                }
            };
            let scaled: Vec<_> = x.iter().map(|&e| f.mul(scalar, e)).collect();
            prop_assert_eq!(matrix::rank_weight(f, &scaled), w);
            let p = Matrix::random_full_rank(&f.base(), x.len(), x.len(), &mut rng).lift(f).unwrap();
            prop_assert_eq!(matrix::rank_weight(f, &p.left_mul_vec(&x).unwrap()), w);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn frobenius_laws(cases: u32) -> Result<(), String> {
    let fields = test_fields();
    let strategy = (0usize..3, any::<u128>(), any::<u128>(), -30i64..30, -30i64..30, any::<u32>());
    runner(cases)
        .run(&strategy, |(fi, ra, rb, i, j, c)| {
            let f = &fields[fi];
            let (a, b) = (elem(f, ra), elem(f, rb));
            let phi = |x: FieldElement, e: i64| f.frobenius(x, e);
            prop_assert_eq!(phi(f.add(a, b), i), f.add(phi(a, i), phi(b, i)));
            prop_assert_eq!(phi(f.mul(a, b), i), f.mul(phi(a, i), phi(b, i)));
            prop_assert_eq!(phi(phi(a, i), j), phi(a, i + j));
            prop_assert_eq!(phi(phi(a, i), -i), a);
            prop_assert_eq!(phi(a, f.m() as i64), a);
            prop_assert_eq!(phi(a, 1), f.pow(a, f.q() as u128));
            let base = f.embed(c % f.q());
            prop_assert_eq!(phi(base, 1), base);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn lin_polys() -> impl Strategy<Value = (usize, Vec<Vec<u128>>, u128)> {
    (0usize..3, prop::collection::vec(prop::collection::vec(any::<u128>(), 0..5), 3), any::<u128>())
}

pub fn linearized_ring_axioms(cases: u32) -> Result<(), String> {
    let fields = test_fields();
    runner(cases)
        .run(&lin_polys(), |(fi, polys, rx)| {
            let f = &fields[fi];
            let p: Vec<LinPoly> = polys.iter().map(|c| LinPoly::new(f, elems(f, c))).collect();
            let (a, b, c) = (&p[0], &p[1], &p[2]);
            let x = elem(f, rx);
            let comp = |u: &LinPoly, v: &LinPoly| u.compose(v).unwrap();
            let sum = |u: &LinPoly, v: &LinPoly| u.add(v).unwrap();
            prop_assert_eq!(comp(&comp(a, b), c), comp(a, &comp(b, c)));
            prop_assert_eq!(comp(a, &sum(b, c)), sum(&comp(a, b), &comp(a, c)));
            prop_assert_eq!(comp(&sum(b, c), a), sum(&comp(b, a), &comp(c, a)));
            prop_assert_eq!(sum(a, b), sum(b, a));
            prop_assert!(sum(a, &a.neg()).is_zero());
            let id = LinPoly::x(f);
            prop_assert_eq!(&comp(&id, a), a);
            prop_assert_eq!(&comp(a, &id), a);
            prop_assert_eq!(comp(a, b).evaluate(x), a.evaluate(b.evaluate(x)));
            prop_assert_eq!(sum(a, b).evaluate(x), f.add(a.evaluate(x), b.evaluate(x)));
            if let (Some(da), Some(db)) = (a.q_degree().finite(), b.q_degree().finite()) {
                prop_assert_eq!(comp(a, b).q_degree().finite(), Some(da + db));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn generators() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (0usize..3, 2usize..=7).prop_flat_map(|(fi, n)| (Just(fi), Just(n), 1..n, any::<u64>()))
}

fn row_space(m: &Matrix<ExtField>) -> Matrix<ExtField> {
    let (r, pivots) = m.rref();
    r.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
}

pub fn qsum_row_space_invariance(cases: u32) -> Result<(), String> {
    let fields = test_fields();
    runner(cases)
        .run(&generators(), |(fi, n, k, seed)| {
            let f = &fields[fi];
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let g = Matrix::random(f, k, n, &mut rng);
            let s = Matrix::random_full_rank(f, k, k, &mut rng);
            let p = Matrix::random_full_rank(&f.base(), n, n, &mut rng).lift(f).unwrap();
            let sg = s.mul(&g).unwrap();
            let gp = g.mul(&p).unwrap();
            for i in 0..=n {
                let lam = qsum::qsum_matrix(&g, i).unwrap();
                prop_assert_eq!(row_space(&lam), row_space(&qsum::qsum_matrix(&sg, i).unwrap()));
                let lam_p = row_space(&lam.mul(&p).unwrap());
                prop_assert_eq!(lam_p, row_space(&qsum::qsum_matrix(&gp, i).unwrap()));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn profile_monotonicity(cases: u32) -> Result<(), String> {
    let fields = test_fields();
    runner(cases)
        .run(&generators(), |(fi, n, k, seed)| {
            let f = &fields[fi];
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let rank = (seed % k as u64) as usize + 1;
            let g = Matrix::random_of_rank(f, k, n, rank, &mut rng).unwrap();
            let p = qsum::profile(&g).unwrap();
            prop_assert_eq!(p.dims[0], rank);
            for (i, w) in p.dims.windows(2).enumerate() {
                prop_assert!(w[0] <= w[1]);
                prop_assert!(w[1] <= n.min((i + 2) * rank));
            }
            for i in 0..=n {
                prop_assert_eq!(qsum::qsum_dimension(&g, i).unwrap(), p.dim(i));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}
