//! Truncated formal power series in h with exact polynomial coefficients.
//!
//! An `HSeries` holds coefficients for h^0 .. h^V where V is the valid
//! order: the order through which the coefficients are trusted. Binary
//! operations truncate to the minimum valid order of their inputs; exact
//! h-division lowers the valid order by the divisor's h-valuation.
//! Requesting a coefficient beyond the valid order is an error, never a
//! silent zero.

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Var};
use crate::rat::{factorial, rat_int, Rat};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct HSeries {
    /// coeffs[i] is the coefficient of h^i; len = valid_order + 1.
    coeffs: Vec<MPoly>,
}

impl HSeries {
    pub fn zero(order: usize) -> Self {
        HSeries { coeffs: vec![MPoly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(MPoly::one(), order)
    }

    pub fn constant(c: MPoly, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_rat(c: Rat, order: usize) -> Self {
        Self::constant(MPoly::constant(c), order)
    }

    /// c · h^k.
    pub fn h_power(k: usize, c: MPoly, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<MPoly>) -> Self {
        assert!(!coeffs.is_empty(), "valid order must be ≥ 0");
        HSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of h^i, or an error when i exceeds the valid order.
    pub fn coeff(&self, i: usize) -> Result<&MPoly> {
        self.coeffs.get(i).ok_or(Error::OrderExceeded { requested: i, valid: self.order() })
    }

    /// Coefficient of h^i; panics past the valid order. For call sites that
    /// have already checked the order.
    pub fn coeff_unchecked(&self, i: usize) -> &MPoly {
        &self.coeffs[i]
    }

    /// Exact coefficient of h^i · (monomial with the given exponent tuple).
    pub fn coeff_of(&self, i: usize, exps: &[i32; 4]) -> Result<Rat> {
        Ok(self.coeff(i)?.coeff(exps))
    }

    /// Index of the lowest nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        HSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].add(&rhs.coeffs[i])).collect();
        HSeries { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].sub(&rhs.coeffs[i])).collect();
        HSeries { coeffs }
    }

    pub fn neg(&self) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![MPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        HSeries { coeffs }
    }

    pub fn scale(&self, c: &MPoly) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeffs[0].inv_unit().ok_or(Error::NonInvertibleConstant)?;
        // self = c0⁻¹-normalized: self·c0 = 1 - w with val(w) ≥ 1.
        let n = self.order();
        let normalized = self.scale(&c0);
        let mut w = normalized.neg();
        w.coeffs[0] = w.coeffs[0].add(&MPoly::one());
        // Σ w^k, finite because val(w) ≥ 1.
        let mut acc = Self::one(n);
        let mut pw = Self::one(n);
        for _ in 1..=n {
            pw = pw.mul(&w);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&c0))
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ExpNonzeroConstant);
        }
        let n = self.order();
        let mut acc = Self::one(n);
        let mut pw = Self::one(n);
        for k in 1..=n {
            pw = pw.mul(self);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw.scale_rat(&factorial(k as u32).recip()));
        }
        Ok(acc)
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::LogConstantNotOne);
        }
        let n = self.order();
        let mut w = self.clone();
        w.coeffs[0] = MPoly::zero();
        let mut acc = Self::zero(n);
        let mut pw = Self::one(n);
        for k in 1..=n {
            pw = pw.mul(&w);
            if pw.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { rat_int(1) } else { rat_int(-1) };
            acc = acc.add(&pw.scale_rat(&(sign / rat_int(k as i64))));
        }
        Ok(acc)
    }

    /// Exact division. Requires valuation(self) ≥ valuation(rhs) and the
    /// lowest nonzero coefficient of rhs to be a unit. The result's valid
    /// order is min(orders) − valuation(rhs).
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        let dval = rhs.valuation().ok_or_else(|| {
            Error::InexactDivision("division by the zero series".into())
        })?;
        let n = self.order().min(rhs.order());
        if dval > n {
            return Err(Error::InexactDivision("divisor vanishes through the valid order".into()));
        }
        if let Some(nval) = self.valuation() {
            if nval < dval {
                return Err(Error::InexactDivision(format!(
                    "numerator valuation {} < divisor valuation {}",
                    nval, dval
                )));
            }
        }
        let out_order = n - dval;
        let num = HSeries { coeffs: self.coeffs[dval..=n].to_vec() };
        let den = HSeries { coeffs: rhs.coeffs[dval..=n].to_vec() };
        if den.coeffs[0].inv_unit().is_none() {
            return Err(Error::InexactDivision(
                "divisor's lowest coefficient is not a unit".into(),
            ));
        }
        let q = num.mul(&den.inv()?);
        debug_assert_eq!(q.order(), out_order);
        Ok(q)
    }

    /// Integer powers; negative exponents require an invertible constant term.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.order());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// exp(h · p) for a polynomial p, exact through the valid order.
    pub fn exp_h_poly(p: &MPoly, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut pk = MPoly::one();
        coeffs.push(MPoly::one());
        for k in 1..=order {
            pk = pk.mul(p);
            coeffs.push(pk.scale(&factorial(k as u32).recip()));
        }
        HSeries { coeffs }
    }

    /// Substitute an h-series for the variable v in every coefficient.
    /// Negative exponents of v require the replacement to be invertible.
    pub fn substitute_var(&self, v: Var, replacement: &Self) -> Result<Self> {
        let order = self.order().min(replacement.order());
        let mut out = Self::zero(order);
        let lo = self.coeffs.iter().map(|c| c.min_exponent_in(v)).min().unwrap_or(0);
        let hi = self.coeffs.iter().map(|c| c.degree_in(v)).max().unwrap_or(0);
        let inv = if lo < 0 { Some(replacement.inv()?) } else { None };
        // replacement^k for k in lo..=hi, built incrementally
        let mut pow_cache: Vec<HSeries> = Vec::new();
        let mut acc = Self::one(order);
        for _ in 0..=hi.max(0) {
            pow_cache.push(acc.clone());
            acc = acc.mul(&replacement.truncate(order));
        }
        let mut neg_cache: Vec<HSeries> = Vec::new();
        if let Some(invr) = &inv {
            let mut acc = Self::one(order);
            for _ in 0..(-lo.min(0)) {
                acc = acc.mul(&invr.truncate(order));
                neg_cache.push(acc.clone());
            }
        }
        for (i, c) in self.coeffs.iter().enumerate().take(order + 1) {
            for (e, coef) in c.terms() {
                let k = e[v as usize];
                let mut stripped = *e;
                stripped[v as usize] = 0;
                let factor = if k >= 0 {
                    &pow_cache[k as usize]
                } else {
                    &neg_cache[(-k - 1) as usize]
                };
                let term = factor
                    .scale(&MPoly::from_term(stripped, coef.clone()))
                    .shift_up(i, order);
                out = out.add(&term);
            }
        }
        Ok(out)
    }

    /// Multiply by h^i, truncating at `order`.
    fn shift_up(&self, i: usize, order: usize) -> Self {
        let mut coeffs = vec![MPoly::zero(); order + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if i + j <= order {
                coeffs[i + j] = c.clone();
            }
        }
        HSeries { coeffs }
    }

    /// h ↦ −h.
    pub fn negate_h(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        HSeries { coeffs }
    }

    /// Apply a polynomial map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&MPoly) -> MPoly) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Largest λ-degree appearing in the coefficient of h^i.
    pub fn lambda_degree_at(&self, i: usize) -> Result<i32> {
        Ok(self.coeff(i)?.degree_in(Var::Lambda))
    }
}

impl MPoly {
    pub fn from_term(e: [i32; 4], c: Rat) -> Self {
        let mut p = MPoly::zero();
        p.add_term(e, c);
        p
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})·h^{}", c, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.order() + 1)
    }
}

impl fmt::Debug for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn lam() -> MPoly {
        MPoly::var(Var::Lambda)
    }

    #[test]
    fn exp_inverse_identity() {
        // exp(h) · exp(−h) = 1 through order 8
        let h = HSeries::h_power(1, MPoly::one(), 8);
        let e = h.exp().unwrap();
        let em = h.neg().exp().unwrap();
        assert_eq!(e.mul(&em), HSeries::one(8));
    }

    #[test]
    fn geometric_inverse() {
        // inv(1 + h) = 1 - h + h^2 - ...
        let s = HSeries::one(6).add(&HSeries::h_power(1, MPoly::one(), 6));
        let inv = s.inv().unwrap();
        for i in 0..=6 {
            let expect = if i % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            assert_eq!(inv.coeff(i).unwrap().constant_term(), expect);
        }
        assert_eq!(s.mul(&inv), HSeries::one(6));
    }

    #[test]
    fn div_exact_sinh_ratio() {
        // (e^{hλ} − e^{−hλ}) / (e^{h} − e^{−h}): hand oracle through order 6:
        // numerator   = 2hλ + h³λ³/3 + h⁵λ⁵/60 + …
        // denominator = 2h  + h³/3  + h⁵/60  + …
        // quotient constant term λ; h² coefficient (λ³−λ)/6.
        let order = 8;
        let num = HSeries::exp_h_poly(&lam(), order).sub(&HSeries::exp_h_poly(&lam().neg(), order));
        let den = HSeries::exp_h_poly(&MPoly::one(), order)
            .sub(&HSeries::exp_h_poly(&MPoly::constant(rat_int(-1)), order));
        assert_eq!(num.coeff(1).unwrap(), &lam().scale(&rat_int(2)));
        assert_eq!(num.coeff(3).unwrap(), &lam().pow(3).scale(&rat(1, 3)));
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q.order(), order - 1);
        assert_eq!(q.coeff(0).unwrap(), &lam());
        let expect_h2 = lam().pow(3).sub(&lam()).scale(&rat(1, 6));
        assert_eq!(q.coeff(2).unwrap(), &expect_h2);
    }

    #[test]
    fn div_exact_order_bookkeeping() {
        // k exact valuation-1 divisions from order N leave exactly N − k.
        let n = 6;
        let den = HSeries::h_power(1, MPoly::one(), n).add(&HSeries::h_power(2, MPoly::one(), n));
        let mut x = HSeries::h_power(1, MPoly::one(), n)
            .add(&HSeries::h_power(2, MPoly::constant(rat_int(5)), n));
        let mut x3 = x.mul(&x).mul(&x); // valuation 3, order 6
        for k in 1..=3usize {
            x3 = x3.div_exact(&den).unwrap();
            assert_eq!(x3.order(), n - k);
        }
        let _ = x;
        x = HSeries::one(n);
        assert!(x.div_exact(&HSeries::zero(n)).is_err());
    }

    #[test]
    fn log_exp_roundtrip() {
        let s = HSeries::h_power(1, lam(), 7).add(&HSeries::h_power(2, MPoly::one(), 7));
        assert_eq!(s.exp().unwrap().log().unwrap(), s);
        let u = HSeries::one(7).add(&HSeries::h_power(1, lam(), 7));
        assert_eq!(u.log().unwrap().exp().unwrap(), u);
    }

    #[test]
    fn substitute_eps_to_2h() {
        // ε·h with ε ↦ 2h gives 2h²
        let s = HSeries::h_power(1, MPoly::var(Var::Eps), 5);
        let two_h = HSeries::h_power(1, MPoly::constant(rat_int(2)), 5);
        let out = s.substitute_var(Var::Eps, &two_h).unwrap();
        assert_eq!(out, HSeries::h_power(2, MPoly::constant(rat_int(2)), 5));
        // substituting a non-invertible series into ε⁻¹ errors
        let bad = HSeries::constant(MPoly::monomial(Var::Eps, -1, rat_int(1)), 5);
        assert!(bad.substitute_var(Var::Eps, &two_h).is_err());
    }

    #[test]
    fn coeff_beyond_order_is_error() {
        let s = HSeries::one(3);
        assert!(s.coeff(4).is_err());
        assert!(s.coeff_of(2, &[0, 0, 0, 0]).is_ok());
    }

    #[test]
    fn taylor_coefficient_of_exp() {
        // coeff_of(exp(hλ), 2, λ²) = 1/2
        let s = HSeries::exp_h_poly(&lam(), 4);
        assert_eq!(s.coeff_of(2, &[2, 0, 0, 0]).unwrap(), rat(1, 2));
        assert_eq!(HSeries::one(4).coeff_of(3, &[0, 0, 0, 0]).unwrap(), rat_int(0));
    }
}
