//! Linearized polynomials `sum f_i x^[i]` over GF(q^m) under addition and
//! composition.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement, FieldOps};

/// q-degree of a linearized polynomial; the zero polynomial has degree
/// `NegInfinity`, which compares below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QDegree {
    NegInfinity,
    Finite(usize),
}

impl QDegree {
    pub fn finite(self) -> Option<usize> {
        match self {
            QDegree::NegInfinity => None,
            QDegree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for QDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QDegree::NegInfinity => write!(f, "-inf"),
            QDegree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// `coeffs[i]` multiplies `x^[i] = x^(q^i)`. Trailing zeros are trimmed.
#[derive(Clone, Debug)]
pub struct LinPoly {
    field: ExtField,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for LinPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl LinPoly {
    pub fn new(field: &ExtField, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { field: field.clone(), coeffs }
    }

    pub fn zero(field: &ExtField) -> Self {
        Self::new(field, Vec::new())
    }

    /// The identity map `x = x^[0]`.
    pub fn x(field: &ExtField) -> Self {
        Self::monomial(field, FieldElement::ONE, 0)
    }

    /// `c * x^[i]`.
    pub fn monomial(field: &ExtField, c: FieldElement, i: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; i + 1];
        coeffs[i] = c;
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^[i]` (zero past the end).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn q_degree(&self) -> QDegree {
        match self.coeffs.len() {
            0 => QDegree::NegInfinity,
            n => QDegree::Finite(n - 1),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(FieldElement, FieldElement) -> FieldElement) -> Result<Self> {
        self.check(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::new(&self.field, coeffs))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        Self::new(&self.field, coeffs)
    }

    /// Left scalar multiple `c * self`.
    pub fn scale(&self, c: FieldElement) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(c, a)).collect();
        Self::new(&self.field, coeffs)
    }

    /// `self ∘ other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, f.frobenius(b, i as i64)));
            }
        }
        Ok(Self::new(f, out))
    }

    pub fn evaluate(&self, point: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs.iter().enumerate().fold(FieldElement::ZERO, |acc, (i, &c)| {
            f.add(acc, f.mul(c, f.frobenius(point, i as i64)))
        })
    }

    pub fn evaluate_many(&self, points: &[FieldElement]) -> Vec<FieldElement> {
        points.iter().map(|&p| self.evaluate(p)).collect()
    }

    /// Monic polynomial of q-degree `basis.len()` vanishing exactly on the
    /// GF(q)-span of `basis`.
    pub fn annihilator(field: &ExtField, basis: &[FieldElement]) -> Result<Self> {
        let mut acc = Self::x(field);
        let q = field.q() as u128;
        for &beta in basis {
            let c = acc.evaluate(beta);
            if c.is_zero() {
                return Err(Error::DependentBasis);
            }
            let step = Self::new(field, vec![field.neg(field.pow(c, q - 1)), FieldElement::ONE]);
            acc = step.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Left division `self = divisor ∘ quotient + remainder` with
    /// `q_degree(remainder) < q_degree(divisor)`.
    pub fn left_divide(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor)?;
        let QDegree::Finite(t) = divisor.q_degree() else {
            return Err(Error::DivisionByZero);
        };
        let f = &self.field;
        let lead = divisor.coeffs[t];
        let mut rem = self.coeffs.clone();
        let mut quotient = vec![FieldElement::ZERO; rem.len().saturating_sub(t)];
        while rem.len() > t {
            let top = rem.len() - 1;
            let d = top - t;
            let coeff = f.frobenius(f.div(rem[top], lead)?, -(t as i64));
            quotient[d] = coeff;
            for (j, &v) in divisor.coeffs.iter().enumerate() {
                let term = f.mul(v, f.frobenius(coeff, j as i64));
                rem[j + d] = f.sub(rem[j + d], term);
            }
            debug_assert!(rem[top].is_zero());
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Self::new(f, quotient), Self::new(f, rem)))
    }
}
