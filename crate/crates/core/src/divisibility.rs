//! Power maps `h_d(x) = x^d`, divisibility, and the Cauchy and elementwise
//! Lagrange properties.

use serde::Serialize;

use crate::error::{LoopError, Result};
use crate::loops::{FiniteLoop, IdentityScheme};

/// Each flag is computed independently of the others.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityReport {
    pub d: u64,
    /// `h_d` is onto.
    pub surjective: bool,
    /// `h_d` is one-to-one.
    pub injective: bool,
    /// Least `x ≠ 1` whose order divides `d`.
    pub order_dividing_witness: Option<usize>,
    /// Least `x` whose order is a prime dividing `d`.
    pub prime_order_witness: Option<usize>,
    /// `gcd(|Q|, d) = 1`.
    pub coprime: bool,
}

impl DivisibilityReport {
    pub fn uniquely_divisible(&self) -> bool {
        self.surjective && self.injective
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

fn orders(q: &FiniteLoop) -> Result<Vec<usize>> {
    q.element_orders().map_err(|_| LoopError::NotPowerAssociative)
}

/// `x ↦ x^d` as an array.
pub fn power_map(q: &FiniteLoop, d: u64) -> Result<Vec<usize>> {
    let os = orders(q)?;
    q.elements()
        .map(|a| q.power(a, (d % os[a] as u64) as i64))
        .collect()
}

pub fn divisibility(q: &FiniteLoop, d: u64) -> Result<DivisibilityReport> {
    if d < 2 {
        return Err(LoopError::SpecInvalid(format!("exponent {d} must exceed 1")));
    }
    let os = orders(q)?;
    let h = power_map(q, d)?;
    let mut fiber = vec![0usize; q.order()];
    for &v in &h {
        fiber[v] += 1;
    }
    Ok(DivisibilityReport {
        d,
        surjective: fiber.iter().all(|&c| c > 0),
        injective: fiber.iter().all(|&c| c <= 1),
        order_dividing_witness: (1..q.order()).find(|&a| d.is_multiple_of(os[a] as u64)),
        prime_order_witness: q.elements().find(|&a| {
            let o = os[a] as u64;
            is_prime(o) && d.is_multiple_of(o)
        }),
        coprime: gcd(q.order() as u64, d) == 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CauchyOutcome {
    /// `p` does not divide `|Q|`.
    NotApplicable,
    /// Least element of order exactly `p`.
    Holds { witness: usize },
    FailsNoWitness,
}

pub fn cauchy(q: &FiniteLoop, p: u64) -> Result<CauchyOutcome> {
    if !is_prime(p) {
        return Err(LoopError::SpecInvalid(format!("{p} is not prime")));
    }
    if !(q.order() as u64).is_multiple_of(p) {
        return Ok(CauchyOutcome::NotApplicable);
    }
    let os = orders(q)?;
    Ok(match q.elements().find(|&a| os[a] as u64 == p) {
        Some(witness) => CauchyOutcome::Holds { witness },
        None => CauchyOutcome::FailsNoWitness,
    })
}

/// Every element order divides `|Q|`.
pub fn elementwise_lagrange(q: &FiniteLoop) -> Result<bool> {
    let os = orders(q)?;
    Ok(os.iter().all(|&o| q.order().is_multiple_of(o)))
}

/// `(ab^i)b^j = ab^{i+j}`, under which element orders must divide `|Q|`.
pub fn right_power_alternative(q: &FiniteLoop) -> bool {
    q.satisfies_identity(IdentityScheme::RightPowerAlternative).holds
}
