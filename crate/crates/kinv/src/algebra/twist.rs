//! Twisting elements, the twisted R-matrix, the XC-axiom suite, and the
//! Cartan-factor twisting identity transported from the Drinfeld double
//! into 𝔻.

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::mpoly::{MPoly, Var};
use crate::rat::{rat, rat_int};
use serde::Serialize;

use super::rmatrix::{pivot, r_matrix};
#[cfg(test)]
use super::rmatrix::r_matrix_inverse;
use super::tensor::TensorElement;
use super::{distribute_series, AlgebraElement};

/// φ is a twisting element when [φ, κ] = 0 and [φ⊗φ, R] = 0, both through
/// the given order. φ must be invertible.
pub fn is_twisting_element(phi: &AlgebraElement, order: usize) -> Result<bool> {
    phi.invert_unit()?;
    let kappa = pivot(order);
    if !phi.truncate(order).commutes_with(&kappa) {
        return Ok(false);
    }
    let r = r_matrix(order);
    let phi2 = TensorElement::embed(&phi.truncate(order), 2, 1)
        .mul(&TensorElement::embed(&phi.truncate(order), 2, 2));
    Ok(phi2.commutator(&r).is_zero())
}

/// Ř = (1 ⊗ φ⁻¹) R (φ ⊗ 1). The equivalent two-sided form
/// (φ ⊗ 1) R (1 ⊗ φ⁻¹) is verified before returning.
pub fn twist(r: &TensorElement, phi: &AlgebraElement) -> Result<TensorElement> {
    let order = r.order().min(phi.order());
    if !is_twisting_element(phi, order)? {
        return Err(Error::NotTwisting("twist element precondition".into()));
    }
    let phi = phi.truncate(order);
    let phi_inv = phi.invert_unit()?;
    let left = TensorElement::embed(&phi_inv, 2, 2);
    let right = TensorElement::embed(&phi, 2, 1);
    let twisted = left.mul(&r.truncate(order)).mul(&right);
    let other = TensorElement::embed(&phi, 2, 1)
        .mul(&r.truncate(order))
        .mul(&TensorElement::embed(&phi_inv, 2, 2));
    if !twisted.sub(&other).is_zero() {
        return Err(Error::internal("twist", "two-sided twisted forms disagree"));
    }
    Ok(twisted)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct XcReport {
    pub balanced_conjugation: bool,
    pub kappa_mu3: bool,
    pub kappa_five_fold: bool,
    pub yang_baxter: bool,
}

impl XcReport {
    pub fn all(&self) -> bool {
        self.balanced_conjugation && self.kappa_mu3 && self.kappa_five_fold && self.yang_baxter
    }
}

/// Check the four XC-structure axioms for a candidate R-matrix and
/// balancing element by exact expansion in 2-, 3-, and 5-fold tensor
/// powers. The multi-fold multiplications μ^{[3]} and μ compose right to
/// left, the same direction beads are read along a strand; with the
/// left-to-right reading the balancing element would have to be κ⁻¹.
/// Failures are reported, not thrown.
pub fn verify_xc(rc: &TensorElement, kappa: &AlgebraElement, order: usize) -> Result<XcReport> {
    let rc = rc.truncate(order);
    let rc_inv = rc.invert_unit()?;
    let kappa = kappa.truncate(order);
    let kappa_inv = kappa.invert_unit()?;

    // (1) R = (κ⊗κ) R (κ⁻¹⊗κ⁻¹)
    let kk = TensorElement::embed(&kappa, 2, 1).mul(&TensorElement::embed(&kappa, 2, 2));
    let kkinv =
        TensorElement::embed(&kappa_inv, 2, 1).mul(&TensorElement::embed(&kappa_inv, 2, 2));
    let balanced_conjugation = kk.mul(&rc).mul(&kkinv).sub(&rc).is_zero();

    // (2) μ³(R₁₃ κ₂) = μ³(R₃₁ κ₂⁻¹): Σ β κ α = Σ α κ⁻¹ β
    let r13 = TensorElement::embed_pair(&rc, 3, 1, 3);
    let r31 = TensorElement::embed_pair(&rc, 3, 3, 1);
    let k2 = TensorElement::embed(&kappa, 3, 2);
    let k2inv = TensorElement::embed(&kappa_inv, 3, 2);
    let lhs = r13.mul(&k2).contract_rtl(&[3]).into_algebra();
    let rhs = r31.mul(&k2inv).contract_rtl(&[3]).into_algebra();
    let kappa_mu3 = lhs.sub(&rhs).is_zero();

    // (3) κ⊗1 = (μ³⊗μ)(R₃₄⁻¹ R₁₅ κ₂)
    let r34inv = TensorElement::embed_pair(&rc_inv, 5, 3, 4);
    let r15 = TensorElement::embed_pair(&rc, 5, 1, 5);
    let k2five = TensorElement::embed(&kappa, 5, 2);
    let contracted = r34inv.mul(&r15).mul(&k2five).contract_rtl(&[3, 2]);
    let expect = TensorElement::embed(&kappa, 2, 1);
    let kappa_five_fold = contracted.sub(&expect).is_zero();

    // (4) R₁₂ R₁₃ R₂₃ = R₂₃ R₁₃ R₁₂
    let r12 = TensorElement::embed_pair(&rc, 3, 1, 2);
    let r13 = TensorElement::embed_pair(&rc, 3, 1, 3);
    let r23 = TensorElement::embed_pair(&rc, 3, 2, 3);
    let yang_baxter = r12.mul(&r13).mul(&r23).sub(&r23.mul(&r13).mul(&r12)).is_zero();

    Ok(XcReport { balanced_conjugation, kappa_mu3, kappa_five_fold, yang_baxter })
}

/// Images of the Drinfeld-double generators inside 𝔻 under φ⁻¹, where
/// φ: 𝔻 → 𝔇 maps b ↦ −εH/2, y ↦ E, a ↦ H̃/2,
/// x ↦ (q−q⁻¹)/(2hε⁻¹) · q^{−H̃} F and rescales h ↦ 2hε⁻¹. Under φ⁻¹ the
/// double's h becomes εh/2, so its q becomes exp(εh/2).
pub struct DoubleImages {
    pub order: usize,
}

impl DoubleImages {
    pub fn new(order: usize) -> Self {
        DoubleImages { order }
    }

    /// exp(εh/2 · m), i.e. q^m for integer m of the double.
    pub fn q_pow(&self, m: i64) -> HSeries {
        HSeries::exp_h_poly(&MPoly::monomial(Var::Eps, 1, rat(m, 2)), self.order)
    }

    /// q^{m/2} for the q^{k(k−1)/2}-type scalars with m possibly odd.
    pub fn q_half_pow(&self, m: i64) -> HSeries {
        HSeries::exp_h_poly(&MPoly::monomial(Var::Eps, 1, rat(m, 4)), self.order)
    }

    /// q − q⁻¹ = exp(εh/2) − exp(−εh/2).
    pub fn q_minus_qinv(&self) -> HSeries {
        self.q_pow(1).sub(&self.q_pow(-1))
    }

    /// [k]_q = Σ_{r<k} q^{k−1−2r}.
    pub fn quantum_int(&self, k: u32) -> HSeries {
        let mut acc = HSeries::zero(self.order);
        for r in 0..k as i64 {
            acc = acc.add(&self.q_pow(k as i64 - 1 - 2 * r));
        }
        acc
    }

    pub fn quantum_factorial(&self, k: u32) -> HSeries {
        let mut acc = HSeries::one(self.order);
        for j in 1..=k {
            acc = acc.mul(&self.quantum_int(j));
        }
        acc
    }

    /// c ↦ ε⁻¹b − a.
    pub fn c(&self) -> AlgebraElement {
        let b = AlgebraElement::from_mono(
            super::Mono { b: 1, ..super::Mono::ONE },
            HSeries::constant(MPoly::monomial(Var::Eps, -1, rat_int(1)), self.order),
        );
        b.sub(&AlgebraElement::generator('a', self.order))
    }

    /// H' ↦ −ε⁻¹b − a.
    pub fn h_prime(&self) -> AlgebraElement {
        let b = AlgebraElement::from_mono(
            super::Mono { b: 1, ..super::Mono::ONE },
            HSeries::constant(MPoly::monomial(Var::Eps, -1, rat_int(-1)), self.order),
        );
        b.sub(&AlgebraElement::generator('a', self.order))
    }

    /// E ↦ y.
    pub fn gen_e(&self) -> AlgebraElement {
        AlgebraElement::generator('y', self.order)
    }

    /// F ↦ exp(εh·a) · (h / (q−q⁻¹)) · x: inverting the x-image
    /// x ↦ (q−q⁻¹)/(2hε⁻¹) · q^{−H̃} F, where the double's own h in the
    /// denominator also rescales to εh/2.
    pub fn gen_f(&self) -> Result<AlgebraElement> {
        let num = HSeries::h_power(1, MPoly::one(), self.order + 1);
        let den = {
            let d = DoubleImages { order: self.order + 1 };
            d.q_minus_qinv()
        };
        let scalar = num.div_exact(&den)?;
        let mut out = AlgebraElement::zero(self.order);
        distribute_series(
            &mut out,
            0,
            1,
            &HSeries::exp_h_poly(
                &MPoly::monomial(Var::Eps, 1, rat_int(1)).mul(&MPoly::var(Var::GenA)),
                self.order,
            ),
        );
        Ok(out.scale(&scalar))
    }

    /// F' = exp(h_𝔇 c) F ↦ exp((h/2)(b − εa)) · F.
    pub fn gen_f_prime(&self) -> Result<AlgebraElement> {
        let arg = MPoly::var(Var::GenB)
            .sub(&MPoly::monomial(Var::Eps, 1, rat_int(1)).mul(&MPoly::var(Var::GenA)))
            .scale(&rat(1, 2));
        let mut expc = AlgebraElement::zero(self.order);
        distribute_series(&mut expc, 0, 0, &HSeries::exp_h_poly(&arg, self.order));
        Ok(expc.mul(&self.gen_f()?))
    }

    /// q^{s/2 · u⊗v} = exp(s·εh/4 · u⊗v) as a 2-leg tensor, s = ±1.
    pub fn cartan_tensor_exp(
        &self,
        u: &AlgebraElement,
        v: &AlgebraElement,
        s: i64,
    ) -> Result<TensorElement> {
        let uv = TensorElement::embed(u, 2, 1).mul(&TensorElement::embed(v, 2, 2));
        let scale = HSeries::h_power(1, MPoly::monomial(Var::Eps, 1, rat(s, 4)), self.order);
        uv.scale(&scale).exp_nilpotent()
    }

    /// φ⁻¹(R_𝔇) = Σ_k (q−q⁻¹)^k/[k]_q! · q^{−H⊗H̃/2 + k(k−1)/2} E^k ⊗ F^k
    /// with H ↦ −2ε⁻¹b, H̃ ↦ 2a; the Cartan factor becomes exp(h·b⊗a).
    pub fn r_double(&self) -> Result<TensorElement> {
        let cartan = {
            let b = AlgebraElement::generator('b', self.order);
            let a = AlgebraElement::generator('a', self.order);
            let ba = TensorElement::embed(&b, 2, 1).mul(&TensorElement::embed(&a, 2, 2));
            ba.scale(&HSeries::h_power(1, MPoly::one(), self.order)).exp_nilpotent()?
        };
        let f = self.gen_f()?;
        let e = self.gen_e();
        self.r_sum(&cartan, &e, &f, true)
    }

    /// φ⁻¹(Ř_𝔇) = Σ_k (q−q⁻¹)^k/[k]_q! · q^{H'⊗H'/2 + k(k−1)/2} E'^k ⊗ F'^k.
    pub fn r_double_twisted(&self) -> Result<TensorElement> {
        let hp = self.h_prime();
        let cartan = self.cartan_tensor_exp(&hp, &hp, 1)?;
        let f = self.gen_f_prime()?;
        let e = self.gen_e();
        self.r_sum(&cartan, &e, &f, true)
    }

    fn r_sum(
        &self,
        cartan: &TensorElement,
        e: &AlgebraElement,
        f: &AlgebraElement,
        cartan_left: bool,
    ) -> Result<TensorElement> {
        let mut acc = TensorElement::zero(2, self.order);
        let mut e_pow = AlgebraElement::one(self.order);
        let mut f_pow = AlgebraElement::one(self.order);
        let mut qmq_pow = HSeries::one(self.order);
        for k in 0..=self.order as u32 {
            if k > 0 {
                e_pow = e_pow.mul(e);
                f_pow = f_pow.mul(f);
                qmq_pow = qmq_pow.mul(&self.q_minus_qinv());
            }
            let scalar = qmq_pow
                .mul(&self.quantum_factorial(k).inv()?)
                .mul(&self.q_half_pow(k as i64 * (k as i64 - 1)));
            let ef = TensorElement::embed(&e_pow, 2, 1).mul(&TensorElement::embed(&f_pow, 2, 2));
            let term = if cartan_left { cartan.mul(&ef) } else { ef.mul(cartan) };
            acc = acc.add(&term.scale(&scalar));
        }
        Ok(acc)
    }
}

/// The Cartan twisting identity of the double, transported into 𝔻:
///   q^{½c⊗c} q^{½c⊗H'} R_𝔇 q^{−½H'⊗c} = Ř_𝔇.
pub fn verify_cartan_twist_identity(order: usize) -> Result<bool> {
    let im = DoubleImages::new(order);
    let c = im.c();
    let hp = im.h_prime();
    let lhs = im
        .cartan_tensor_exp(&c, &c, 1)?
        .mul(&im.cartan_tensor_exp(&c, &hp, 1)?)
        .mul(&im.r_double()?)
        .mul(&im.cartan_tensor_exp(&hp, &c, -1)?);
    let rhs = im.r_double_twisted()?;
    Ok(lhs.sub(&rhs).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rmatrix::cartan_a;

    #[test]
    fn twisting_elements() {
        let n = 3;
        let kappa = pivot(n);
        assert!(is_twisting_element(&kappa, n).unwrap());
        assert!(is_twisting_element(&cartan_a(n), n).unwrap());
        // 1 + h·y is invertible but not twisting
        let bad = AlgebraElement::one(2).add(&AlgebraElement::from_mono(
            super::super::Mono { y: 1, ..super::super::Mono::ONE },
            HSeries::h_power(1, MPoly::one(), 2),
        ));
        assert!(!is_twisting_element(&bad, 2).unwrap());
        // bare y is not even invertible
        assert!(is_twisting_element(&AlgebraElement::generator('y', 2), 2).is_err());
    }

    #[test]
    fn twist_by_identity_and_inverse() {
        let n = 3;
        let r = r_matrix(n);
        let one = AlgebraElement::one(n);
        assert_eq!(twist(&r, &one).unwrap(), r);
        let kappa = pivot(n);
        let tw = twist(&r, &kappa).unwrap();
        let back = twist(&tw, &kappa.invert_unit().unwrap()).unwrap();
        assert_eq!(back, r);
        // explicit check against (1⊗κ⁻¹)R(κ⊗1) at order 2
        let r2 = r_matrix(2);
        let k2 = pivot(2);
        let expect = TensorElement::embed(&k2.invert_unit().unwrap(), 2, 2)
            .mul(&r2)
            .mul(&TensorElement::embed(&k2, 2, 1));
        assert_eq!(twist(&r2, &k2).unwrap(), expect);
    }

    #[test]
    fn xc_axioms_order_zero_and_two() {
        let kappa0 = pivot(0);
        let rep0 = verify_xc(&r_matrix(0), &kappa0, 0).unwrap();
        assert!(rep0.all());
        let kappa2 = pivot(2);
        let rep2 = verify_xc(&r_matrix(2), &kappa2, 2).unwrap();
        assert!(rep2.all(), "{:?}", rep2);
    }

    #[test]
    fn double_r_image_matches_native_r() {
        // φ is an isomorphism of ribbon Hopf algebras, so φ⁻¹(R_𝔇) = R_𝔻.
        for order in [1, 3] {
            let im = DoubleImages::new(order);
            let lhs = im.r_double().unwrap();
            assert_eq!(lhs, r_matrix(order), "mismatch at order {}", order);
        }
    }

    #[test]
    fn cartan_twist_identity_low_order() {
        assert!(verify_cartan_twist_identity(0).unwrap());
        assert!(verify_cartan_twist_identity(2).unwrap());
    }

    #[test]
    fn r_inverse_image_identity() {
        // (q⁻¹−q)^k with the inverse Cartan on the right reproduces R⁻¹.
        let order = 3;
        let im = DoubleImages::new(order);
        let cartan_inv = {
            let b = AlgebraElement::generator('b', order);
            let a = AlgebraElement::generator('a', order);
            let ba = TensorElement::embed(&b, 2, 1).mul(&TensorElement::embed(&a, 2, 2));
            ba.scale(&HSeries::h_power(1, MPoly::constant(rat_int(-1)), order))
                .exp_nilpotent()
                .unwrap()
        };
        let e = im.gen_e();
        let f = im.gen_f().unwrap();
        let mut acc = TensorElement::zero(2, order);
        let mut e_pow = AlgebraElement::one(order);
        let mut f_pow = AlgebraElement::one(order);
        let mut qmq_pow = HSeries::one(order);
        for k in 0..=order as u32 {
            if k > 0 {
                e_pow = e_pow.mul(&e);
                f_pow = f_pow.mul(&f);
                qmq_pow = qmq_pow.mul(&im.q_minus_qinv().neg());
            }
            let scalar = qmq_pow
                .mul(&im.quantum_factorial(k).inv().unwrap())
                .mul(&im.q_half_pow(-(k as i64) * (k as i64 - 1)));
            let ef = TensorElement::embed(&e_pow, 2, 1).mul(&TensorElement::embed(&f_pow, 2, 2));
            acc = acc.add(&ef.mul(&cartan_inv).scale(&scalar));
        }
        assert_eq!(acc, r_matrix_inverse(order));
    }
}
