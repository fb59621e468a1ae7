//! Cantor-normal-form arithmetic.

use std::ops::{Add, Mul};

use super::{Ordinal, Term, MAX_COEFF, MAX_DEPTH};
use crate::{Error, Result};

fn coeff_add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b)
        .filter(|&c| c <= MAX_COEFF)
        .ok_or_else(|| Error::RepresentationOverflow(format!("coefficient {a} + {b}")))
}

fn coeff_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .filter(|&c| c <= MAX_COEFF)
        .ok_or_else(|| Error::RepresentationOverflow(format!("coefficient {a} * {b}")))
}

impl Ordinal {
    /// Ordinal sum. Terms of `self` below the leading exponent of `rhs`
    /// are absorbed.
    pub fn checked_add(&self, rhs: &Ordinal) -> Result<Ordinal> {
        let Some(lead) = rhs.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut merged = None;
        for t in self.terms.iter() {
            match t.exp.cmp(&lead.exp) {
                std::cmp::Ordering::Greater => terms.push(t.clone()),
                std::cmp::Ordering::Equal => merged = Some(t.coeff),
                std::cmp::Ordering::Less => break,
            }
        }
        let first_coeff = match merged {
            Some(c) => coeff_add(c, lead.coeff)?,
            None => lead.coeff,
        };
        terms.push(Term::new(lead.exp.clone(), first_coeff));
        terms.extend(rhs.terms[1..].iter().cloned());
        Ok(Ordinal::from_terms_unchecked(terms))
    }

    /// Ordinal product, distributing `self` over the terms of `rhs`.
    pub fn checked_mul(&self, rhs: &Ordinal) -> Result<Ordinal> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Ordinal::zero());
        }
        let lead = &self.terms[0];
        let mut acc = Ordinal::zero();
        for t in rhs.terms.iter() {
            let piece = if t.exp.is_zero() {
                let mut terms = self.terms.to_vec();
                terms[0].coeff = coeff_mul(lead.coeff, t.coeff)?;
                Ordinal::from_terms_unchecked(terms)
            } else {
                Ordinal::monomial(lead.exp.checked_add(&t.exp)?, t.coeff)
            };
            acc = acc.checked_add(&piece)?;
        }
        Ok(acc)
    }

    /// Ordinal exponentiation `self^rhs`, bounded by [`MAX_DEPTH`].
    pub fn pow(&self, rhs: &Ordinal) -> Result<Ordinal> {
        self.pow_with_depth(rhs, MAX_DEPTH)
    }

    pub fn pow_with_depth(&self, rhs: &Ordinal, max_depth: usize) -> Result<Ordinal> {
        if rhs.is_zero() {
            return Ok(Ordinal::one());
        }
        if self.is_zero() {
            return Ok(Ordinal::zero());
        }
        if *self == Ordinal::one() {
            return Ok(Ordinal::one());
        }
        // rhs = ω·limit_part + finite_part
        let (limit_part, finite_part) = rhs.divmod(&Ordinal::omega())?;
        let finite_part = finite_part.as_nat().expect("remainder below ω is finite");
        let result = match self.as_nat() {
            Some(n) => {
                let mut p: u64 = 1;
                for _ in 0..finite_part {
                    p = coeff_mul(p, n)?;
                }
                Ordinal::omega_pow(limit_part).checked_mul(&Ordinal::nat(p))?
            }
            None => {
                let lead = self.leading_exp().expect("nonzero");
                let exponent = lead.checked_mul(&Ordinal::omega())?.checked_mul(&limit_part)?;
                let head = Ordinal::omega_pow(exponent);
                head.checked_mul(&self.pow_finite(finite_part)?)?
            }
        };
        if result.depth() > max_depth {
            return Err(Error::RepresentationOverflow(format!(
                "nesting depth {} exceeds {max_depth}",
                result.depth()
            )));
        }
        Ok(result)
    }

    fn pow_finite(&self, mut k: u64) -> Result<Ordinal> {
        let mut base = self.clone();
        let mut acc = Ordinal::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The unique `x` with `b + x = self`, when `b <= self`.
    pub fn left_sub(&self, b: &Ordinal) -> Option<Ordinal> {
        let mut i = 0;
        while i < b.terms.len() {
            let Some(a_t) = self.terms.get(i) else {
                return None;
            };
            let b_t = &b.terms[i];
            if a_t == b_t {
                i += 1;
                continue;
            }
            return match a_t.exp.cmp(&b_t.exp) {
                std::cmp::Ordering::Greater => {
                    Some(Ordinal::from_terms_unchecked(self.terms[i..].to_vec()))
                }
                std::cmp::Ordering::Equal if a_t.coeff > b_t.coeff => {
                    let mut terms = vec![Term::new(a_t.exp.clone(), a_t.coeff - b_t.coeff)];
                    terms.extend(self.terms[i + 1..].iter().cloned());
                    Some(Ordinal::from_terms_unchecked(terms))
                }
                _ => None,
            };
        }
        Some(Ordinal::from_terms_unchecked(self.terms[i..].to_vec()))
    }

    /// Left division: `self = d·q + r` with `r < d`.
    pub fn divmod(&self, d: &Ordinal) -> Result<(Ordinal, Ordinal)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut q_terms: Vec<Term> = Vec::new();
        let mut rem = self.clone();
        let d_lead = &d.terms[0];
        while rem >= *d {
            let r_lead = rem.terms[0].clone();
            if r_lead.exp > d_lead.exp {
                let x = r_lead
                    .exp
                    .left_sub(&d_lead.exp)
                    .expect("leading exponent of divisor is smaller");
                q_terms.push(Term::new(x, r_lead.coeff));
                rem = Ordinal::from_terms_unchecked(rem.terms[1..].to_vec());
            } else {
                let mut m = r_lead.coeff / d_lead.coeff;
                let mut prod = d.checked_mul(&Ordinal::nat(m))?;
                if prod > rem {
                    m -= 1;
                    prod = d.checked_mul(&Ordinal::nat(m))?;
                }
                rem = rem.left_sub(&prod).expect("d·m <= rem");
                q_terms.push(Term::new(Ordinal::zero(), m));
                break;
            }
        }
        Ok((Ordinal::from_terms_unchecked(q_terms), rem))
    }
}

impl Add<&Ordinal> for &Ordinal {
    type Output = Ordinal;

    /// Panics on coefficient overflow; use [`Ordinal::checked_add`] otherwise.
    fn add(self, rhs: &Ordinal) -> Ordinal {
        self.checked_add(rhs).expect("ordinal coefficient overflow")
    }
}

impl Mul<&Ordinal> for &Ordinal {
    type Output = Ordinal;

    fn mul(self, rhs: &Ordinal) -> Ordinal {
        self.checked_mul(rhs).expect("ordinal coefficient overflow")
    }
}

#[cfg(test)]
mod tests {
    use crate::ordinal::Ordinal;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn addition() {
        assert_eq!(&o("1") + &o("w"), o("w"));
        assert_eq!(&o("w") + &o("1"), o("w+1"));
        assert_eq!(&o("w^2*2+3") + &o("w*4"), o("w^2*2+w*4"));
        assert_eq!(&o("w+1") + &o("w"), o("w*2"));
    }

    #[test]
    fn multiplication() {
        assert_eq!(&o("2") * &o("w"), o("w"));
        assert_eq!(&o("w") * &o("2"), o("w*2"));
        assert_eq!(&o("w+1") * &o("w"), o("w^2"));
        assert_eq!(&o("w+1") * &o("3"), o("w*3+1"));
        assert_eq!(&o("w") * &o("0"), o("0"));
    }

    #[test]
    fn exponentiation() {
        assert_eq!(o("w").pow(&o("2")).unwrap(), o("w^2"));
        assert_eq!(o("2").pow(&o("w")).unwrap(), o("w"));
        assert_eq!(o("w*2").pow(&o("2")).unwrap(), o("w^2*2"));
        assert_eq!(o("2").pow(&o("w+3")).unwrap(), o("w*8"));
        assert_eq!(o("w").pow(&o("w")).unwrap(), o("w^(w)"));
        assert_eq!(o("0").pow(&o("0")).unwrap(), o("1"));
    }

    #[test]
    fn exponentiation_overflow_is_reported() {
        let ww = o("w^(w)");
        assert_eq!(ww.pow(&ww).unwrap(), o("w^(w^(w))"));
        assert!(matches!(
            ww.pow_with_depth(&ww, 3),
            Err(crate::Error::RepresentationOverflow(_))
        ));
        assert!(o("2").pow(&o("70")).is_err());
    }

    #[test]
    fn division() {
        let a = o("w^2*3+w*2+5");
        assert_eq!(a.divmod(&o("1")).unwrap(), (a.clone(), o("0")));
        assert_eq!(o("5").divmod(&o("w")).unwrap(), (o("0"), o("5")));
        assert_eq!(a.divmod(&o("w^2")).unwrap(), (o("3"), o("w*2+5")));
        assert_eq!(o("w^2*3+5").divmod(&o("w")).unwrap(), (o("w*3"), o("5")));
        assert!(matches!(a.divmod(&o("0")), Err(crate::Error::DivisionByZero)));
    }

    #[test]
    fn left_subtraction() {
        assert_eq!(o("w*2+3").left_sub(&o("w")), Some(o("w+3")));
        assert_eq!(o("w").left_sub(&o("5")), Some(o("w")));
        assert_eq!(o("5").left_sub(&o("w")), None);
        assert_eq!(o("w^2").left_sub(&o("w^2")), Some(o("0")));
    }
}
