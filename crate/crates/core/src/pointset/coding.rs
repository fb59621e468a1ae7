//! Digit codings `ω^γ → ω` by iterated Cantor pairing.

use serde::{Deserialize, Serialize};

use crate::ordinal::{Ordinal, Term};
use crate::{Error, Result};

/// Cantor pairing `⟨a, b⟩ = (a+b)(a+b+1)/2 + b`.
pub fn pair(a: u64, b: u64) -> Option<u64> {
    let s = a.checked_add(b)?;
    let tri = (s as u128) * (s as u128 + 1) / 2;
    let z = tri + b as u128;
    u64::try_from(z).ok()
}

pub fn unpair(z: u64) -> (u64, u64) {
    let z128 = z as u128;
    // w = floor((sqrt(8z+1) - 1) / 2), corrected for rounding
    let mut w = ((((8 * z128 + 1) as f64).sqrt() - 1.0) / 2.0) as u128;
    while w * (w + 1) / 2 > z128 {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z128 {
        w += 1;
    }
    let t = w * (w + 1) / 2;
    let b = (z128 - t) as u64;
    let a = w as u64 - b;
    (a, b)
}

/// A bijection between the ordinal `ω^γ` (for finite `γ ≥ 1`) and `ω`.
///
/// A point `ω^(γ-1)·c_(γ-1) + … + c_0` is sent to
/// `⟨c_(γ-1), ⟨c_(γ-2), …, ⟨c_1, c_0⟩…⟩⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coding {
    gamma: u32,
    /// Defect injection: the code at this position decodes one unit off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    corrupt_at: Option<u64>,
}

impl Coding {
    pub fn digits(gamma: &Ordinal) -> Result<Self> {
        match gamma.as_nat() {
            Some(g) if (1..=64).contains(&g) => Ok(Coding {
                gamma: g as u32,
                corrupt_at: None,
            }),
            _ => Err(Error::UnsupportedGamma(gamma.clone())),
        }
    }

    /// A deliberately broken copy whose decoding of `code` is perturbed.
    pub fn with_corrupted_digit(mut self, code: u64) -> Self {
        self.corrupt_at = Some(code);
        self
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn is_corrupted(&self) -> bool {
        self.corrupt_at.is_some()
    }

    /// The source ground set `ω^γ`.
    pub fn source_ground(&self) -> Ordinal {
        Ordinal::omega_pow(Ordinal::nat(self.gamma as u64))
    }

    pub fn encode(&self, point: &Ordinal) -> Result<u64> {
        let mut digits = vec![0u64; self.gamma as usize];
        for t in point.terms() {
            let e = t
                .exp
                .as_nat()
                .filter(|&e| e < self.gamma as u64)
                .ok_or_else(|| Error::Invalid(format!("{point} is not below w^{}", self.gamma)))?;
            digits[e as usize] = t.coeff;
        }
        let mut code = digits[0];
        for &d in &digits[1..] {
            code = pair(d, code).ok_or_else(|| {
                Error::RepresentationOverflow(format!("code of {point} exceeds u64"))
            })?;
        }
        Ok(code)
    }

    pub fn decode(&self, code: u64) -> Ordinal {
        let mut digits = vec![0u64; self.gamma as usize];
        let mut rest = code;
        for i in (1..self.gamma as usize).rev() {
            let (d, r) = unpair(rest);
            digits[i] = d;
            rest = r;
        }
        digits[0] = rest;
        if self.corrupt_at == Some(code) {
            digits[0] += 1;
        }
        let terms = digits
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c > 0)
            .map(|(e, &c)| Term::new(Ordinal::nat(e as u64), c))
            .collect();
        Ordinal::from_terms_unchecked(terms)
    }

    /// Round-trip scan of all codes below `bound`; returns the first code
    /// that fails to come back, if any.
    pub fn first_roundtrip_failure(&self, bound: u64) -> Option<u64> {
        (0..bound).find(|&n| self.encode(&self.decode(n)).ok() != Some(n))
    }
}
