//! q-sums `Λ_i(C) = C + C^[1] + ... + C^[i]`, their dimension profiles and the
//! structural classifier built on them.

use std::fmt;

use crate::error::Result;
use crate::field::ExtField;
use crate::matrix::Matrix;

/// Vertical stack `[A; A^[1]; ...; A^[i]]`.
pub fn qsum_matrix(a: &Matrix<ExtField>, i: usize) -> Result<Matrix<ExtField>> {
    let mut out = a.clone();
    for j in 1..=i {
        out = out.vstack(&a.frobenius(j as i64))?;
    }
    Ok(out)
}

/// `dim Λ_i` of the row space of `g`, from the literal stacked matrix.
pub fn qsum_dimension(g: &Matrix<ExtField>, i: usize) -> Result<usize> {
    Ok(qsum_matrix(g, i)?.rank())
}

/// Nonzero rows of the reduced echelon form.
fn row_basis(a: &Matrix<ExtField>) -> Matrix<ExtField> {
    let (r, pivots) = a.rref();
    r.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
}

/// Iterates `Λ_{i+1} = C + Λ_i^[1]`, yielding a row basis of each `Λ_i`
/// until the space saturates at `n`, stops growing, or `i` reaches `n`.
pub fn qsum_bases(g: &Matrix<ExtField>) -> Result<Vec<Matrix<ExtField>>> {
    let n = g.cols();
    let base = row_basis(g);
    let mut bases = vec![base.clone()];
    for _ in 0..n {
        let last = bases.last().unwrap();
        if last.rows() == n {
            break;
        }
        let next = row_basis(&base.vstack(&last.frobenius(1))?);
        if next.rows() == last.rows() {
            break;
        }
        bases.push(next);
    }
    Ok(bases)
}

/// Dimension sequence `d_0, d_1, ...` of the q-sums of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSumProfile {
    pub n: usize,
    pub k: usize,
    pub dims: Vec<usize>,
}

impl QSumProfile {
    /// `increments()[i] = d_i - d_{i-1}`, with 0 at `i = 0`.
    pub fn increments(&self) -> Vec<usize> {
        let mut out = vec![0];
        out.extend(self.dims.windows(2).map(|w| w[1] - w[0]));
        out
    }

    pub fn saturated(&self) -> bool {
        self.dims.last() == Some(&self.n)
    }

    /// `dim Λ_i`, extending a saturated or stalled profile as constant.
    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or_else(|| *self.dims.last().unwrap_or(&0))
    }

    pub fn report(&self, class: &Classification) -> String {
        let mut out = String::new();
        for (i, (d, g)) in self.dims.iter().zip(self.increments()).enumerate() {
            out.push_str(&format!("i={i} dim={d} inc={g}\n"));
        }
        out.push_str(&format!("class={}\n", class.class));
        out
    }
}

pub fn profile(g: &Matrix<ExtField>) -> Result<QSumProfile> {
    let dims = qsum_bases(g)?.iter().map(|b| b.rows()).collect::<Vec<_>>();
    Ok(QSumProfile { n: g.cols(), k: dims[0], dims })
}

/// Code families with a closed-form q-sum profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Gabidulin,
    TwistedResistant,
    Random,
}

/// Predicted `d_0, d_1, ...` up to and including the first value `n`.
pub fn predicted_profile(family: Family, n: usize, k: usize, ell: usize) -> Vec<usize> {
    let mut dims = vec![k.min(n)];
    let mut i = 1;
    while *dims.last().unwrap() < n {
        let d = match family {
            Family::Gabidulin => k + i,
            Family::TwistedResistant => k - 1 + (i + 1) * (ell + 1),
            Family::Random => (i + 1) * k,
        };
        dims.push(d.min(n));
        i += 1;
        if k == 0 {
            break;
        }
    }
    dims
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeClass {
    GabidulinLike,
    TwistedLike { ell_estimate: usize },
    RandomLike,
}

impl fmt::Display for CodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeClass::GabidulinLike => write!(f, "gabidulin_like"),
            CodeClass::TwistedLike { ell_estimate } => write!(f, "twisted_like({ell_estimate})"),
            CodeClass::RandomLike => write!(f, "random_like"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: CodeClass,
    pub diagnostic: Option<String>,
}

/// Classifies a profile by its stable increment. The `0 -> 1` step is
/// skipped and a final step that hits `n` is only used when nothing else
/// is left.
pub fn classify_profile(p: &QSumProfile) -> Classification {
    let incs = p.increments();
    let last = incs.len() - 1;
    let hits_n = p.saturated();
    let mut steps: Vec<usize> = (2..incs.len()).filter(|&i| !(hits_n && i == last)).map(|i| incs[i]).collect();
    if steps.is_empty() {
        steps = incs.iter().skip(2).copied().collect();
    }
    if steps.is_empty() {
        steps = incs.iter().skip(1).copied().collect();
    }
    let Some(&g) = steps.first() else {
        return Classification {
            class: CodeClass::RandomLike,
            diagnostic: Some("profile saturates immediately".into()),
        };
    };
    if steps.iter().any(|&s| s != g) {
        return Classification {
            class: CodeClass::RandomLike,
            diagnostic: Some(format!("non-constant increments {steps:?}")),
        };
    }
    match g {
        0 => Classification {
            class: CodeClass::RandomLike,
            diagnostic: Some(format!("q-sums stall at dimension {}", p.dim(p.dims.len()))),
        },
        1 => Classification { class: CodeClass::GabidulinLike, diagnostic: None },
        g if g < p.k => Classification { class: CodeClass::TwistedLike { ell_estimate: g - 1 }, diagnostic: None },
        _ => Classification { class: CodeClass::RandomLike, diagnostic: None },
    }
}

pub fn classify(g: &Matrix<ExtField>) -> Result<Classification> {
    Ok(classify_profile(&profile(g)?))
}
