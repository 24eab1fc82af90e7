//! Sparse single-variable Laurent polynomials over ℚ.
//!
//! The variable symbol travels with the polynomial (T, t, or s where
//! q = s²) and binary operations insist the symbols match.

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::mpoly::MPoly;
use crate::rat::{rat_int, Rat};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub var: char,
    terms: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero(var: char) -> Self {
        LaurentPoly { var, terms: BTreeMap::new() }
    }

    pub fn one(var: char) -> Self {
        Self::monomial(var, 0, rat_int(1))
    }

    pub fn monomial(var: char, k: i64, c: Rat) -> Self {
        let mut p = Self::zero(var);
        p.add_term(k, c);
        p
    }

    pub fn from_terms(var: char, terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero(var);
        for &(k, c) in terms {
            p.add_term(k, rat_int(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| *c == rat_int(1))
    }

    pub fn add_term(&mut self, k: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, k: i64) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn assert_same_var(&self, rhs: &Self) {
        assert_eq!(self.var, rhs.var, "mixed Laurent variables {} and {}", self.var, rhs.var);
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_same_var(rhs);
        let mut out = self.clone();
        for (k, c) in rhs.terms.iter() {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.var);
        for (k, c) in self.terms.iter() {
            out.terms.insert(*k, -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_same_var(rhs);
        let mut out = Self::zero(self.var);
        for (ka, ca) in self.terms.iter() {
            for (kb, cb) in rhs.terms.iter() {
                out.add_term(ka + kb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.var);
        if c.is_zero() {
            return out;
        }
        for (k, v) in self.terms.iter() {
            out.terms.insert(*k, v * c);
        }
        out
    }

    pub fn shift(&self, d: i64) -> Self {
        let mut out = Self::zero(self.var);
        for (k, c) in self.terms.iter() {
            out.terms.insert(k + d, c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.var);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        self.assert_same_var(rhs);
        if rhs.is_zero() {
            return Err(Error::InexactDivision("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.var));
        }
        // Reduce to ordinary polynomial division by shifting both to min exp 0.
        let mut rem = self.shift(-self.min_exp().unwrap());
        let den = rhs.shift(-rhs.min_exp().unwrap());
        let out_shift = self.min_exp().unwrap() - rhs.min_exp().unwrap();
        let dlead = den.max_exp().unwrap();
        let dc = den.coeff(dlead);
        let mut q = Self::zero(self.var);
        while !rem.is_zero() {
            let rlead = rem.max_exp().unwrap();
            if rlead < dlead {
                return Err(Error::InexactDivision(format!(
                    "nonzero remainder of degree {}",
                    rlead
                )));
            }
            let c = rem.coeff(rlead) / &dc;
            let k = rlead - dlead;
            q.add_term(k, c.clone());
            rem = rem.sub(&den.mul(&Self::monomial(self.var, k, c)));
        }
        Ok(q.shift(out_shift))
    }

    /// Formal derivative d/dvar.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.var);
        for (k, c) in self.terms.iter() {
            out.add_term(k - 1, c * rat_int(*k));
        }
        out
    }

    /// Sum of coefficients, i.e. the value at var = 1.
    pub fn eval_one(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |acc, c| acc + c)
    }

    /// var ↦ var⁻¹.
    pub fn invert_var(&self) -> Self {
        let mut out = Self::zero(self.var);
        for (k, c) in self.terms.iter() {
            out.terms.insert(-k, c.clone());
        }
        out
    }

    pub fn rename(&self, var: char) -> Self {
        LaurentPoly { var, terms: self.terms.clone() }
    }

    /// Substitute var ↦ exp(c·h·p) producing an h-series of the given order.
    pub fn substitute_exp(&self, c: i64, p: &MPoly, order: usize) -> HSeries {
        let mut out = HSeries::zero(order);
        for (k, coef) in self.terms.iter() {
            let arg = p.scale(&rat_int(c * k));
            out = out.add(&HSeries::exp_h_poly(&arg, order).scale(&MPoly::constant(coef.clone())));
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // ascending exponents with explicit signs, e.g. `t^-1 - 1 + t`
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter() {
            let (sign, mag) = if c < &Rat::zero() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let unit_mag = mag == rat_int(1);
            match (*k, unit_mag) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "{}", self.var)?,
                (1, false) => write!(f, "{}·{}", mag, self.var)?,
                (_, true) => write!(f, "{}^{}", self.var, k)?,
                (_, false) => write!(f, "{}·{}^{}", mag, self.var, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn arithmetic_and_exact_division() {
        // (t - 1 + t^-1)(t + 1) = t^2 + t^-1... compute and divide back
        let a = LaurentPoly::from_terms('t', &[(-1, 1), (0, -1), (1, 1)]);
        let b = LaurentPoly::from_terms('t', &[(0, 1), (1, 1)]);
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(a.div_exact(&b).is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let p = LaurentPoly::from_terms('T', &[(-2, 1), (1, 3)]);
        let d = p.derivative();
        assert_eq!(d.coeff(-3), rat_int(-2));
        assert_eq!(d.coeff(0), rat_int(3));
        assert_eq!(p.eval_one(), rat_int(4));
    }

    #[test]
    fn display_ascending() {
        let p = LaurentPoly::from_terms('t', &[(-1, 1), (0, -1), (1, 1)]);
        assert_eq!(p.to_string(), "t^-1 - 1 + t");
    }

    #[test]
    fn exp_substitution() {
        // t - 1 + t^-1 at t = e^{2hλ}: constant term 1, h^1 zero, h^2 (2λ)^2
        let p = LaurentPoly::from_terms('t', &[(-1, 1), (0, -1), (1, 1)]);
        let s = p.substitute_exp(2, &MPoly::var(crate::mpoly::Var::Lambda), 4);
        assert_eq!(s.coeff(0).unwrap().constant_term(), rat_int(1));
        assert!(s.coeff(1).unwrap().is_zero());
        assert_eq!(s.coeff_of(2, &[2, 0, 0, 0]).unwrap(), rat(4, 1));
    }
}
