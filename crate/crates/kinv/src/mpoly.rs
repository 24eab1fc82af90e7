//! Sparse multivariate polynomials over ℚ in the fixed alphabet {λ, ε, a, b}.
//!
//! ε is a Laurent variable (negative exponents allowed); λ, a, b are
//! ordinary polynomial variables. Terms with zero coefficient are never
//! stored. Different contexts use different subsets of the alphabet: the
//! module-level engines work in ℚ[λ], the algebra 𝔻 in ℚ[ε,ε⁻¹] with a, b
//! appearing only transiently during normal ordering.

use crate::rat::{binomial, rat_int, rat_pow, Rat};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Index into the exponent tuple of an [`MPoly`] term.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Var {
    Lambda = 0,
    Eps = 1,
    GenA = 2,
    GenB = 3,
}

pub const NVARS: usize = 4;

pub type Exps = [i32; NVARS];

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(rat_int(1))
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term([0; NVARS], c);
        p
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(v, 1, rat_int(1))
    }

    /// c · v^k; only ε may carry a negative k.
    pub fn monomial(v: Var, k: i32, c: Rat) -> Self {
        let mut e = [0; NVARS];
        e[v as usize] = k;
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&[0; NVARS]).map_or(false, |c| *c == rat_int(1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Constant (all-exponent-zero) coefficient.
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&[0; NVARS]).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, e: &Exps) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: Exps, c: Rat) {
        debug_assert!(e[Var::Lambda as usize] >= 0, "negative λ exponent");
        debug_assert!(e[Var::GenA as usize] >= 0, "negative a exponent");
        debug_assert!(e[Var::GenB as usize] >= 0, "negative b exponent");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms.iter() {
            out.terms.insert(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                let mut e = *ea;
                for i in 0..NVARS {
                    e[i] += eb[i];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (e, v) in self.terms.iter() {
            out.terms.insert(*e, v * c);
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Largest exponent of `v` over all terms (0 for the zero polynomial).
    pub fn degree_in(&self, v: Var) -> i32 {
        self.terms.keys().map(|e| e[v as usize]).max().unwrap_or(0)
    }

    pub fn min_exponent_in(&self, v: Var) -> i32 {
        self.terms.keys().map(|e| e[v as usize]).min().unwrap_or(0)
    }

    /// True if no term references `v`.
    pub fn is_free_of(&self, v: Var) -> bool {
        self.terms.keys().all(|e| e[v as usize] == 0)
    }

    /// A unit of ℚ[λ,a,b][ε,ε⁻¹] is a single term c·ε^k with c ≠ 0.
    pub fn as_unit(&self) -> Option<(i32, Rat)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if e[Var::Lambda as usize] == 0 && e[Var::GenA as usize] == 0 && e[Var::GenB as usize] == 0 {
            Some((e[Var::Eps as usize], c.clone()))
        } else {
            None
        }
    }

    pub fn inv_unit(&self) -> Option<Self> {
        let (k, c) = self.as_unit()?;
        Some(Self::monomial(Var::Eps, -k, c.recip()))
    }

    /// Substitute `v ↦ v + shift`, where `shift` must not involve `v`.
    /// Negative exponents of `v` are not supported here (ε shifts never occur).
    pub fn shift_var(&self, v: Var, shift: &MPoly) -> Self {
        debug_assert!(shift.is_free_of(v));
        if shift.is_zero() {
            return self.clone();
        }
        let vi = v as usize;
        let mut out = Self::zero();
        for (e, c) in self.terms.iter() {
            let k = e[vi];
            assert!(k >= 0, "shift of a Laurent exponent");
            let mut base = *e;
            base[vi] = 0;
            // (v + s)^k = Σ C(k,r) v^r s^(k-r)
            for r in 0..=k {
                let sp = shift.pow((k - r) as u32);
                for (es, cs) in sp.terms.iter() {
                    let mut en = base;
                    for i in 0..NVARS {
                        en[i] += es[i];
                    }
                    en[vi] += r;
                    out.add_term(en, c * cs * binomial(k as u32, r as u32));
                }
            }
        }
        out
    }

    /// Substitute a rational value for `v` (requires non-negative exponents of `v`
    /// unless the value is invertible).
    pub fn eval_var(&self, v: Var, value: &Rat) -> Self {
        let vi = v as usize;
        let mut out = Self::zero();
        for (e, c) in self.terms.iter() {
            let k = e[vi];
            if k < 0 {
                assert!(!value.is_zero(), "zero substituted into a Laurent position");
            }
            let mut en = *e;
            en[vi] = 0;
            out.add_term(en, c * rat_pow(value, k as i64));
        }
        out
    }

    /// Substitute `v ↦ sign · v` (used for the mirror map λ ↦ −λ).
    pub fn negate_var(&self, v: Var) -> Self {
        let vi = v as usize;
        let mut out = Self::zero();
        for (e, c) in self.terms.iter() {
            let k = e[vi];
            let c = if k.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
            out.add_term(*e, c);
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["λ", "ε", "a", "b"];
        let mut first = true;
        for (e, c) in self.terms.iter() {
            let mut s = String::new();
            for i in 0..NVARS {
                if e[i] != 0 {
                    if e[i] == 1 {
                        s.push_str(names[i]);
                    } else {
                        s.push_str(&format!("{}^{}", names[i], e[i]));
                    }
                }
            }
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if s.is_empty() {
                write!(f, "{}", c)?;
            } else if *c == rat_int(1) {
                write!(f, "{}", s)?;
            } else {
                write!(f, "{}·{}", c, s)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn mul_and_shift() {
        // (a + b)^2 = a^2 + 2ab + b^2
        let s = MPoly::var(Var::GenA).add(&MPoly::var(Var::GenB));
        let sq = s.mul(&s);
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(sq.coeff(&[0, 0, 1, 1]), rat_int(2));

        // shift a ↦ a - 1 in a^2: (a-1)^2 = a^2 - 2a + 1
        let a2 = MPoly::monomial(Var::GenA, 2, rat_int(1));
        let shifted = a2.shift_var(Var::GenA, &MPoly::constant(rat_int(-1)));
        assert_eq!(shifted.coeff(&[0, 0, 1, 0]), rat_int(-2));
        assert_eq!(shifted.constant_term(), rat_int(1));
    }

    #[test]
    fn laurent_eps_unit() {
        let u = MPoly::monomial(Var::Eps, -2, rat(3, 4));
        let inv = u.inv_unit().unwrap();
        assert!(u.mul(&inv).is_one());
        let not_unit = MPoly::var(Var::GenA).add(&MPoly::one());
        assert!(not_unit.inv_unit().is_none());
    }

    #[test]
    fn eval_and_negate() {
        // λ^2 - λ at λ = 3 → 6
        let p = MPoly::monomial(Var::Lambda, 2, rat_int(1)).sub(&MPoly::var(Var::Lambda));
        assert_eq!(p.eval_var(Var::Lambda, &rat_int(3)).constant_term(), rat_int(6));
        let q = p.negate_var(Var::Lambda);
        assert_eq!(q.coeff(&[1, 0, 0, 0]), rat_int(1));
    }
}
