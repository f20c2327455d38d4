//! Geometric codes for pairs and triples of integers: the bijection between
//! triples (a,b,N) and 6-tuples (α,β,γ,a | t,u).

use serde::{Deserialize, Serialize};

use crate::numth::gcd;
use crate::{Error, Result};

/// Code of a pair (a, N): N = a·t + α with α = N mod a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCode {
    pub alpha: u64,
    pub a: u64,
    pub t: u64,
}

pub fn encode_pair(a: u64, n: u64) -> Result<PairCode> {
    if a == 0 || a >= n {
        return Err(Error::Domain(format!("encode_pair: need 0 < a < N, got a={a}, N={n}")));
    }
    Ok(PairCode { alpha: n % a, a, t: n / a })
}

pub fn decode_pair(code: &PairCode) -> (u64, u64) {
    (code.a, code.a * code.t + code.alpha)
}

/// The combinatorial part (α, β, γ, a) of a triple code. Triples sharing it
/// form one two-parametric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CombPart {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
    pub a: u64,
}

impl CombPart {
    pub fn new(alpha: u64, beta: u64, gamma: u64, a: u64) -> CombPart {
        CombPart { alpha, beta, gamma, a }
    }

    /// b(t) = α·a·t + β.
    pub fn b_of(&self, t: u64) -> u64 {
        self.alpha * self.a * t + self.beta
    }

    /// N(t,u) = b(t)·(a·u + γ) + α.
    pub fn n_of(&self, t: u64, u: u64) -> u64 {
        self.b_of(t) * (self.a * u + self.gamma) + self.alpha
    }
}

impl std::fmt::Display for CombPart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}:{}", self.alpha, self.beta, self.gamma, self.a)
    }
}

/// Full geometric code of a triple (a, b, N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeometricCode {
    pub comb: CombPart,
    pub t: u64,
    pub u: u64,
}

/// Validity of the structural bounds (conditions 3.1) and of the
/// coprimality conditions (conditions 3.2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeConditions {
    pub cond31: bool,
    pub cond32: bool,
}

/// α = N mod b, β = b mod (αa), γ = ⌊N/b⌋ mod a, t = ⌊b/(αa)⌋,
/// u = ⌊⌊N/b⌋/a⌋.
pub fn encode_triple(a: u64, b: u64, n: u64) -> Result<GeometricCode> {
    if b < 2 {
        return Err(Error::Domain(format!("encode_triple: need b >= 2, got b={b}")));
    }
    if n % b == 0 {
        return Err(Error::Domain(format!(
            "encode_triple: N={n} is divisible by b={b}"
        )));
    }
    if a == 0 {
        return Err(Error::Domain("encode_triple: need a >= 1".into()));
    }
    let alpha = n % b;
    let beta = b % (alpha * a);
    let q = n / b;
    Ok(GeometricCode {
        comb: CombPart::new(alpha, beta, q % a, a),
        t: b / (alpha * a),
        u: q / a,
    })
}

/// Inverse map: b = αat + β, N = b(au + γ) + α. Requires conditions (3.1),
/// in particular α < b for the produced b.
pub fn decode_code(code: &GeometricCode) -> Result<(u64, u64, u64)> {
    let c = check_conditions(code);
    if !c.cond31 {
        return Err(Error::Domain(format!(
            "decode_code: conditions (3.1) fail for ({}|t={},u={})",
            code.comb, code.t, code.u
        )));
    }
    let b = code.comb.b_of(code.t);
    Ok((code.comb.a, b, code.comb.n_of(code.t, code.u)))
}

/// Evaluate both condition sets. cond32 holds iff the decoded N is coprime
/// to both a and b.
pub fn check_conditions(code: &GeometricCode) -> CodeConditions {
    let CombPart { alpha, beta, gamma, a } = code.comb;
    let b = code.comb.b_of(code.t);
    let cond31 = alpha > 0 && alpha < b && beta < alpha * a && gamma < a;
    let cond32 = gcd(alpha, beta) == 1 && gcd(a, alpha + beta * gamma) == 1;
    CodeConditions { cond31, cond32 }
}
