//! The universal R-matrix of 𝔻, the balancing element κ, the ribbon
//! element, and the central elements W and T.
//!
//!   R = Σ_{m,n} h^{m+n} / ({m}_{q_ε}! · n!) · y^m b^n ⊗ a^n x^m
//!
//! truncated to m + n ≤ N: the h^{m+n} prefactor puts every higher term
//! beyond the valid order. R⁻¹ is produced by order-by-order inversion in
//! 𝔻⊗𝔻 and certified by multiplying back. κ = (AB)^{1/2} is stored
//! expanded as exp(−h(εa+b)/2). The ribbon element is v = κ⁻¹u with
//! u = Σ S(β)·α over the R-summands.

use crate::error::Result;
use crate::hseries::HSeries;
use crate::mpoly::{MPoly, Var};
use crate::rat::{factorial, rat, rat_int};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::tensor::TensorElement;
use super::{distribute_series, q_eps, AlgebraElement, Mono};

/// Modified quantum integer {m}_{q_ε} = 1 + q_ε + … + q_ε^{m−1}.
pub fn mod_quantum_int(m: u32, order: usize) -> HSeries {
    let mut acc = HSeries::zero(order);
    for j in 0..m {
        acc = acc.add(&HSeries::exp_h_poly(
            &MPoly::monomial(Var::Eps, 1, rat_int(j as i64)),
            order,
        ));
    }
    acc
}

/// {m}_{q_ε}! = {1}{2}⋯{m}; the empty product is 1.
pub fn mod_quantum_factorial(m: u32, order: usize) -> HSeries {
    let mut acc = HSeries::one(order);
    for j in 1..=m {
        acc = acc.mul(&mod_quantum_int(j, order));
    }
    acc
}

fn r_cache() -> &'static Mutex<HashMap<(usize, bool), Arc<TensorElement>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Arc<TensorElement>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The universal R-matrix truncated at order N.
pub fn r_matrix(order: usize) -> TensorElement {
    if let Some(hit) = r_cache().lock().unwrap().get(&(order, false)) {
        return (**hit).clone();
    }
    let mut r = TensorElement::zero(2, order);
    for m in 0..=order as u32 {
        for n in 0..=(order as u32 - m) {
            let scalar = HSeries::h_power(
                (m + n) as usize,
                MPoly::one(),
                order,
            );
            let denom = mod_quantum_factorial(m, order).scale_rat(&factorial(n));
            let coeff = scalar.mul(&denom.inv().expect("quantum factorial is invertible"));
            let key = vec![
                Mono { y: m as u16, b: n as u16, ..Mono::ONE },
                Mono { a: n as u16, x: m as u16, ..Mono::ONE },
            ];
            r.add_term(key, coeff);
        }
    }
    r_cache().lock().unwrap().insert((order, false), Arc::new(r.clone()));
    r
}

/// R⁻¹ by series inversion, certified by multiplication inside
/// `TensorElement::invert_unit`.
pub fn r_matrix_inverse(order: usize) -> TensorElement {
    if let Some(hit) = r_cache().lock().unwrap().get(&(order, true)) {
        return (**hit).clone();
    }
    let rinv = r_matrix(order)
        .invert_unit()
        .expect("R is invertible: unit constant term by construction");
    r_cache().lock().unwrap().insert((order, true), Arc::new(rinv.clone()));
    rinv
}

/// κ = (AB)^{1/2} = exp(−h(εa+b)/2), the positive square root as a power
/// series in h.
pub fn pivot(order: usize) -> AlgebraElement {
    let arg = MPoly::var(Var::GenB)
        .add(&MPoly::monomial(Var::Eps, 1, rat_int(1)).mul(&MPoly::var(Var::GenA)))
        .scale(&rat(-1, 2));
    let series = HSeries::exp_h_poly(&arg, order);
    let mut out = AlgebraElement::zero(order);
    distribute_series(&mut out, 0, 0, &series);
    out
}

/// A = exp(−εh·a).
pub fn cartan_a(order: usize) -> AlgebraElement {
    let arg = MPoly::monomial(Var::Eps, 1, rat_int(-1)).mul(&MPoly::var(Var::GenA));
    let mut out = AlgebraElement::zero(order);
    distribute_series(&mut out, 0, 0, &HSeries::exp_h_poly(&arg, order));
    out
}

/// B = exp(−h·b).
pub fn cartan_b(order: usize) -> AlgebraElement {
    let arg = MPoly::var(Var::GenB).neg();
    let mut out = AlgebraElement::zero(order);
    distribute_series(&mut out, 0, 0, &HSeries::exp_h_poly(&arg, order));
    out
}

/// u = Σ S(β)·α over the R-summands α = scalar·y^m b^n, β = a^n x^m.
fn drinfeld_u(order: usize) -> AlgebraElement {
    let mut u = AlgebraElement::zero(order);
    for m in 0..=order as u32 {
        for n in 0..=(order as u32 - m) {
            let scalar = HSeries::h_power((m + n) as usize, MPoly::one(), order);
            let denom = mod_quantum_factorial(m, order).scale_rat(&factorial(n));
            let coeff = scalar.mul(&denom.inv().expect("invertible"));
            let beta = AlgebraElement::from_mono(
                Mono { a: n as u16, x: m as u16, ..Mono::ONE },
                HSeries::one(order),
            );
            let alpha = AlgebraElement::from_mono(
                Mono { y: m as u16, b: n as u16, ..Mono::ONE },
                HSeries::one(order),
            );
            u = u.add(&beta.antipode().mul(&alpha).scale(&coeff));
        }
    }
    u
}

/// (κ, v): the pivot and the ribbon element v = κ⁻¹u. Centrality of v is a
/// consequence of the Hopf structure; `verify_ribbon_central` checks it.
pub fn pivot_and_ribbon(order: usize) -> (AlgebraElement, AlgebraElement) {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(AlgebraElement, AlgebraElement)>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&order) {
        return (**hit).clone();
    }
    let kappa = pivot(order);
    let v = kappa.invert_unit().expect("κ is invertible").mul(&drinfeld_u(order));
    cache.lock().unwrap().insert(order, Arc::new((kappa.clone(), v.clone())));
    (kappa, v)
}

pub fn verify_ribbon_central(order: usize) -> bool {
    let (_, v) = pivot_and_ribbon(order);
    ['y', 'b', 'a', 'x']
        .iter()
        .all(|&g| v.commutes_with(&AlgebraElement::generator(g, order)))
}

/// (W, T): the two central elements. T = exp(−h(b − εa));
/// W = y A⁻¹ x + (q_ε A⁻¹ + AT − ½(1+T)(q_ε+1)) / (h(q_ε − 1)).
/// Both the scalar-part numerator and denominator have positive h-valuation,
/// so the quotient is taken with `div_exact` at an internally raised order.
pub fn central_elements(order: usize) -> Result<(AlgebraElement, AlgebraElement)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(AlgebraElement, AlgebraElement)>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&order) {
        let (w, t) = (**hit).clone();
        return Ok((w, t));
    }
    // guard: the denominator h(q_ε − 1) has h-valuation 2
    let n = order + 2;
    let t_arg = MPoly::var(Var::GenB)
        .sub(&MPoly::monomial(Var::Eps, 1, rat_int(1)).mul(&MPoly::var(Var::GenA)))
        .neg();
    let mut t_elem = AlgebraElement::zero(n);
    distribute_series(&mut t_elem, 0, 0, &HSeries::exp_h_poly(&t_arg, n));

    // y A⁻¹ x: already normal ordered, A⁻¹ = exp(εh·a)
    let ainv_series = HSeries::exp_h_poly(
        &MPoly::monomial(Var::Eps, 1, rat_int(1)).mul(&MPoly::var(Var::GenA)),
        n,
    );
    let mut yax = AlgebraElement::zero(n);
    distribute_series(&mut yax, 1, 1, &ainv_series);

    let qe = q_eps(n);
    let a_elem = cartan_a(n);
    let mut ainv = AlgebraElement::zero(n);
    distribute_series(&mut ainv, 0, 0, &ainv_series);

    let one = AlgebraElement::one(n);
    let qe_plus_1 = qe.add(&HSeries::one(n));
    let numerator = ainv
        .scale(&qe)
        .add(&a_elem.mul(&t_elem))
        .sub(&one.add(&t_elem).scale(&qe_plus_1).scale_rat(&rat(1, 2)));
    let denominator = HSeries::h_power(1, MPoly::one(), n).mul(&qe.sub(&HSeries::one(n)));
    let scalar_part = numerator.div_exact_scalar(&denominator)?;
    let w = yax.truncate(order).add(&scalar_part.truncate(order));
    let t_out = t_elem.truncate(order);
    cache.lock().unwrap().insert(order, Arc::new((w.clone(), t_out.clone())));
    Ok((w, t_out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_matrix_low_order_terms() {
        // r_matrix(1) = 1⊗1 + h(y⊗x + b⊗a)
        let r = r_matrix(1);
        let mut expect = TensorElement::one(2, 1);
        expect.add_term(
            vec![Mono { y: 1, ..Mono::ONE }, Mono { x: 1, ..Mono::ONE }],
            HSeries::h_power(1, MPoly::one(), 1),
        );
        expect.add_term(
            vec![Mono { b: 1, ..Mono::ONE }, Mono { a: 1, ..Mono::ONE }],
            HSeries::h_power(1, MPoly::one(), 1),
        );
        assert_eq!(r, expect);
        // r_matrix(0) = 1⊗1
        assert_eq!(r_matrix(0), TensorElement::one(2, 0));
    }

    #[test]
    fn r_times_r_inverse() {
        for order in [2, 4] {
            let r = r_matrix(order);
            let rinv = r_matrix_inverse(order);
            let id = TensorElement::one(2, order);
            assert_eq!(r.mul(&rinv), id);
            assert_eq!(rinv.mul(&r), id);
        }
    }

    #[test]
    fn r_is_h_graded_per_leg() {
        // Every nonzero coefficient at h^d has y-degree + x-degree ≤ d in
        // each leg separately; this is the bound that truncates the R-sum
        // at m + n ≤ N. (Summed across legs the bound is 2d: products of
        // bead legs along a strand produce y·x at h¹.)
        for t in [r_matrix(4), r_matrix_inverse(4)] {
            for (key, c) in t.terms() {
                let grade = key.iter().map(|m| (m.y + m.x) as usize).max().unwrap();
                for d in 0..grade.min(c.order() + 1) {
                    assert!(c.coeff(d).unwrap().is_zero(), "grading violated at {:?} h^{}", key, d);
                }
            }
        }
    }

    #[test]
    fn pivot_squares_to_ab() {
        let n = 6;
        let kappa = pivot(n);
        assert_eq!(kappa.coeff(&Mono::ONE).unwrap().coeff(0).unwrap(), &MPoly::one());
        let ab = cartan_a(n).mul(&cartan_b(n));
        assert_eq!(kappa.mul(&kappa), ab);
    }

    #[test]
    fn ribbon_is_central() {
        assert!(verify_ribbon_central(4));
    }

    #[test]
    fn central_elements_commute_and_shape() {
        let n = 4;
        let (w, t) = central_elements(n).unwrap();
        for g in ['y', 'b', 'a', 'x'] {
            let gen = AlgebraElement::generator(g, n);
            assert!(w.commutes_with(&gen), "[W, {}] ≠ 0", g);
            assert!(t.commutes_with(&gen), "[T, {}] ≠ 0", g);
        }
        // T at order 0 is 1
        let t0 = central_elements(0).unwrap().1;
        assert!(t0.is_one());
        // W mod h: the y·x term has coefficient 1 at h⁰
        let yx = w.coeff(&Mono { y: 1, x: 1, ..Mono::ONE }).unwrap();
        assert_eq!(yx.coeff(0).unwrap(), &MPoly::one());
        // and the rest of the h⁰ part is a polynomial in a and t alone:
        // every h⁰ monomial besides y·x is cartan (no y, no x)
        for (m, c) in w.terms() {
            if !c.coeff(0).unwrap().is_zero() && !(m.y == 1 && m.x == 1) {
                assert!(m.is_cartan(), "unexpected h⁰ monomial {:?}", m);
            }
        }
    }
}
