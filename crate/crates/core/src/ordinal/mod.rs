//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is a list of terms `ω^e·c` with strictly decreasing
//! exponents and positive coefficients. The representation is canonical,
//! so derived structural equality and hashing coincide with ordinal equality.

mod arith;
pub mod oracle;
pub(crate) mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use parse::{eval_with, parse_ordinal};

/// Largest coefficient admitted by the representation.
pub const MAX_COEFF: u64 = 1 << 62;
/// Default bound on exponent nesting depth.
pub const MAX_DEPTH: usize = 8;

/// One Cantor-normal-form term `ω^exp · coeff`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: u64,
}

// Shared term slices make clones O(1); values are never mutated in place.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Arc<[Term]>,
}

impl Term {
    pub fn new(exp: Ordinal, coeff: u64) -> Self {
        Term { exp, coeff }
    }
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Arc::new([]) }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: Arc::new([Term::new(Ordinal::zero(), n)]),
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal {
            terms: Arc::new([Term::new(e, 1)]),
        }
    }

    /// `ω^e · c` (zero when `c == 0`).
    pub fn monomial(e: Ordinal, c: u64) -> Self {
        if c == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: Arc::new([Term::new(e, c)]),
            }
        }
    }

    /// Builds an ordinal from terms, rejecting non-canonical input.
    pub fn from_terms(terms: Vec<Term>) -> crate::Result<Self> {
        let o = Ordinal { terms: terms.into() };
        o.validate()?;
        Ok(o)
    }

    /// Builds from terms already known to be canonical.
    pub(crate) fn from_terms_unchecked(terms: Vec<Term>) -> Self {
        Ordinal { terms: terms.into() }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms.to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exp.is_zero())
    }

    pub fn as_nat(&self) -> Option<u64> {
        match &self.terms[..] {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    /// Successor ordinals are those whose last term is finite.
    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exp.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exp.is_zero())
    }

    pub fn leading_exp(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exp)
    }

    pub fn last_term(&self) -> Option<&Term> {
        self.terms.last()
    }

    /// Exponent of the last term: the Cantor-Bendixson rank of this
    /// ordinal inside any ordinal space containing it (zero for 0).
    pub fn cb_rank(&self) -> Ordinal {
        self.terms.last().map(|t| t.exp.clone()).unwrap_or_default()
    }

    pub fn succ(&self) -> Ordinal {
        let mut terms = self.terms.to_vec();
        match terms.last_mut() {
            Some(t) if t.exp.is_zero() => t.coeff += 1,
            _ => terms.push(Term::new(Ordinal::zero(), 1)),
        }
        Ordinal { terms: terms.into() }
    }

    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.to_vec();
        let last = terms.last_mut().expect("successor has a term");
        if last.coeff == 1 {
            terms.pop();
        } else {
            last.coeff -= 1;
        }
        Some(Ordinal { terms: terms.into() })
    }

    /// Exponent nesting depth; `0` has depth 0 and naturals depth 1.
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|t| 1 + t.exp.depth())
            .max()
            .unwrap_or(0)
    }

    /// Checks the canonical-form invariants recursively.
    pub fn validate(&self) -> crate::Result<()> {
        for (i, t) in self.terms.iter().enumerate() {
            if t.coeff == 0 || t.coeff > MAX_COEFF {
                return Err(crate::Error::InvalidOrdinal(format!(
                    "coefficient {} out of range in term {i}",
                    t.coeff
                )));
            }
            t.exp.validate()?;
            if i > 0 && self.terms[i - 1].exp <= t.exp {
                return Err(crate::Error::InvalidOrdinal(format!(
                    "exponents not strictly decreasing at term {i}"
                )));
            }
        }
        Ok(())
    }
}

/// Ordinals `≤ top` whose exponents are finite and whose coefficients are
/// at most `digits`, increasing, always ending with `top`; at most `cap`
/// entries before `top`. Tops with infinite exponents give `0..=digits`.
pub fn grid(top: &Ordinal, digits: u64, cap: usize) -> Vec<Ordinal> {
    let k = match top.leading_exp().map(|e| e.as_nat()) {
        None => return vec![Ordinal::zero()],
        Some(Some(k)) => k as usize,
        Some(None) => {
            let mut out: Vec<Ordinal> = (0..=digits).map(Ordinal::nat).filter(|x| x < top).collect();
            out.truncate(cap);
            out.push(top.clone());
            return out;
        }
    };
    let mut out = Vec::new();
    let mut digs = vec![0u64; k + 1];
    'outer: loop {
        let terms: Vec<Term> = digs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c > 0)
            .map(|(e, &c)| Term::new(Ordinal::nat(e as u64), c))
            .collect();
        let x = Ordinal { terms: terms.into() };
        if x >= *top || out.len() >= cap {
            break;
        }
        out.push(x);
        for d in digs.iter_mut() {
            if *d < digits {
                *d += 1;
                continue 'outer;
            }
            *d = 0;
        }
        break;
    }
    out.push(top.clone());
    out
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let ord = a.exp.cmp(&b.exp).then(a.coeff.cmp(&b.coeff));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match t.exp.as_nat() {
                Some(0) => write!(f, "{}", t.coeff)?,
                Some(1) => f.write_str("w")?,
                Some(n) => write!(f, "w^{n}")?,
                None => write!(f, "w^({})", t.exp)?,
            }
            if t.coeff != 1 && !t.exp.is_zero() {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl std::str::FromStr for Ordinal {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        parse_ordinal(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare_basics() {
        assert_eq!(Ordinal::zero().cmp(&Ordinal::zero()), Ordering::Equal);
        assert_eq!(Ordinal::omega().cmp(&Ordinal::nat(5)), Ordering::Greater);
        assert_eq!(o("w^2*2+3").cmp(&o("w^2*2+w")), Ordering::Less);
    }

    #[test]
    fn successor_and_limit() {
        assert!(o("w+1").is_successor());
        assert!(o("w*2").is_limit());
        assert!(!Ordinal::zero().is_limit() && !Ordinal::zero().is_successor());
        assert_eq!(o("w+1").pred(), Some(Ordinal::omega()));
        assert_eq!(o("w*2").succ(), o("w*2+1"));
        assert_eq!(o("w^2+w*3").cb_rank(), Ordinal::one());
    }

    #[test]
    fn validate_rejects_bad_terms() {
        let bad = vec![
            Term::new(Ordinal::zero(), 1),
            Term::new(Ordinal::one(), 1),
        ];
        assert!(Ordinal::from_terms(bad).is_err());
        assert!(Ordinal::from_terms(vec![Term::new(Ordinal::one(), 0)]).is_err());
    }

    #[test]
    fn grid_is_increasing_and_ends_at_top() {
        let g = grid(&o("w*2"), 3, 100);
        let shown: Vec<String> = g.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["0", "1", "2", "3", "w", "w + 1", "w + 2", "w + 3", "w*2"]);
        assert_eq!(grid(&o("5"), 10, 100).len(), 6);
        assert_eq!(grid(&o("w^(w)"), 2, 100).len(), 4);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn depth_counts_nesting() {
        assert_eq!(Ordinal::zero().depth(), 0);
        assert_eq!(Ordinal::nat(7).depth(), 1);
        assert_eq!(o("w^(w)").depth(), 3);
    }
}
