//! Evaluation of the universal invariant on the highest weight vector of
//! the Drinfeld-double Verma module M̃_h(λ, σλ).
//!
//! Beads stream along the traversal as operators on a sparse state
//! Σ_p c_p(λ, h) m_p. The double acts through
//!
//!   H' m_p = (λ−2p) m_p,   c m_p = μ m_p   (μ = σλ),
//!   E' m_{p+1} = [p+1]_q m_p,   E' m_0 = 0,
//!   F' m_p = (q^{λ−p} − q^{p−λ})/(q−q⁻¹) m_{p+1},
//!
//! with H = H' − c, H̃ = −H' − c, E = E', F = q^{−c} F', κ = q^{H'}. The
//! R-matrix is Σ_n (q−q⁻¹)^n/[n]_q! · q^{−H⊗H̃/2 + n(n−1)/2} E^n ⊗ F^n;
//! the (q−q⁻¹)^n cancels the F-denominators exactly, so no h-division is
//! ever performed and the result is trusted through the full working
//! order. The sum over n truncates at n ≤ N because each cancelled
//! F-factor q^{λ−p} − q^{p−λ} has h-valuation 1.
//!
//! A crossing's two legs are visited at different times; the state keeps,
//! per open crossing, the R-summation index n and the Cartan weight
//! recorded at the first leg, and resolves the coupling
//! exp(∓(h/2)·w_H·w_H̃) when the second leg closes it.

use crate::diagrams::{BeadKind, LongKnotDiagram};
use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::mpoly::{MPoly, Var};
use crate::rat::{rat, rat_int};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// e^{h·(a·λ + b)} with integer a, b, cached.
fn exp_linear(a: i64, b: i64, order: usize) -> HSeries {
    static CACHE: OnceLock<Mutex<HashMap<(i64, i64, usize), HSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(a, b, order)) {
        return hit.clone();
    }
    let arg = MPoly::monomial(Var::Lambda, 1, rat_int(a)).add(&MPoly::constant(rat_int(b)));
    let s = HSeries::exp_h_poly(&arg, order);
    cache.lock().unwrap().insert((a, b, order), s.clone());
    s
}

/// [j]_q = Σ_{r<j} q^{j−1−2r} as an h-series (λ-free).
fn quantum_int(j: u32, order: usize) -> HSeries {
    let mut acc = HSeries::zero(order);
    for r in 0..j as i64 {
        acc = acc.add(&exp_linear(0, j as i64 - 1 - 2 * r, order));
    }
    acc
}

/// 1/[n]_q!, cached.
fn inv_quantum_factorial(n: u32, order: usize) -> HSeries {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), HSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(n, order)) {
        return hit.clone();
    }
    let mut acc = HSeries::one(order);
    for j in 1..=n {
        acc = acc.mul(&quantum_int(j, order));
    }
    let inv = acc.inv().expect("[n]_q! has constant term n!");
    cache.lock().unwrap().insert((n, order), inv.clone());
    inv
}

/// q^{m/2} = e^{mh/2} for the q^{±n(n−1)/2} scalars.
fn q_half_pow(m: i64, order: usize) -> HSeries {
    HSeries::exp_h_poly(&MPoly::constant(rat(m, 2)), order)
}

type StateVec = HashMap<u32, HSeries>;

/// One pending crossing: R-index n and the Cartan weight already recorded
/// at the first leg (an integer pair (cλ, c1) meaning cλ·λ + c1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
struct Pending {
    crossing: u16,
    n: u8,
    w_lambda: i16,
    w_const: i16,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
struct BranchKey(Vec<Pending>);

impl BranchKey {
    fn with(&self, p: Pending) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|e| e.crossing < p.crossing);
        v.insert(pos, p);
        BranchKey(v)
    }

    fn take(&self, crossing: u16) -> Option<(Pending, Self)> {
        let pos = self.0.iter().position(|e| e.crossing == crossing)?;
        let mut v = self.0.clone();
        let p = v.remove(pos);
        Some((p, BranchKey(v)))
    }
}

struct Evaluator {
    sigma: i64,
    order: usize,
}

impl Evaluator {
    /// H-eigenvalue (λ − 2p − μ) with μ = σλ: (1−σ)λ − 2p.
    fn weight_h(&self, p: u32) -> (i16, i16) {
        ((1 - self.sigma) as i16, -2 * (p as i16))
    }

    /// H̃-eigenvalue (2p − λ − μ): −(1+σ)λ + 2p.
    fn weight_ht(&self, p: u32) -> (i16, i16) {
        (-(1 + self.sigma) as i16, 2 * (p as i16))
    }

    /// E^n: lowers p by n with factors [p]_q [p−1]_q ⋯.
    fn apply_e(&self, vec: &StateVec, n: u8) -> StateVec {
        if n == 0 {
            return vec.clone();
        }
        let mut out = StateVec::new();
        for (&p, c) in vec {
            if p < n as u32 {
                continue;
            }
            let mut factor = HSeries::one(self.order);
            for r in 0..n as u32 {
                factor = factor.mul(&quantum_int(p - r, self.order));
            }
            add_into(&mut out, p - n as u32, c.mul(&factor));
        }
        out
    }

    /// F̌^n: raises p by n with the cancelled factors
    /// q^{−μ}(q^{λ−p'} − q^{p'−λ}) at p' = p, p+1, ….
    fn apply_f(&self, vec: &StateVec, n: u8) -> StateVec {
        if n == 0 {
            return vec.clone();
        }
        let mut out = StateVec::new();
        for (&p, c) in vec {
            let mut factor = HSeries::one(self.order);
            for r in 0..n as i64 {
                let pr = p as i64 + r;
                let diff = exp_linear(1, -pr, self.order).sub(&exp_linear(-1, pr, self.order));
                let qmu = exp_linear(-self.sigma, 0, self.order);
                factor = factor.mul(&qmu.mul(&diff));
            }
            add_into(&mut out, p + n as u32, c.mul(&factor));
        }
        out
    }

    /// exp(sign·(h/2)·w1·w2) for recorded integer-pair weights.
    fn coupling(&self, w1: (i16, i16), w2: (i16, i16), sign: i64) -> HSeries {
        let poly = MPoly::monomial(Var::Lambda, 1, rat_int(w1.0 as i64))
            .add(&MPoly::constant(rat_int(w1.1 as i64)))
            .mul(
                &MPoly::monomial(Var::Lambda, 1, rat_int(w2.0 as i64))
                    .add(&MPoly::constant(rat_int(w2.1 as i64))),
            )
            .scale(&rat(sign, 2));
        HSeries::exp_h_poly(&poly, self.order)
    }
}

fn add_into(vec: &mut StateVec, p: u32, c: HSeries) {
    if c.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match vec.entry(p) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().add(&c);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn merge_branch(state: &mut HashMap<BranchKey, StateVec>, key: BranchKey, vec: StateVec) {
    if vec.is_empty() {
        return;
    }
    use std::collections::hash_map::Entry;
    match state.entry(key) {
        Entry::Vacant(v) => {
            v.insert(vec);
        }
        Entry::Occupied(mut o) => {
            for (p, c) in vec {
                add_into(o.get_mut(), p, c);
            }
            if o.get().is_empty() {
                o.remove();
            }
        }
    }
}

/// The raw (framed) eigenvalue of the beaded diagram on m₀.
pub fn eval_raw(d: &LongKnotDiagram, sigma: i64, order: usize) -> Result<HSeries> {
    assert!(sigma == 1 || sigma == -1, "σ must be ±1");
    let ev = Evaluator { sigma, order };
    let mut state: HashMap<BranchKey, StateVec> = HashMap::new();
    let mut m0 = StateVec::new();
    m0.insert(0, HSeries::one(order));
    state.insert(BranchKey::default(), m0);

    for slot in &d.traversal {
        let mut next: HashMap<BranchKey, StateVec> = HashMap::new();
        match slot.kind {
            BeadKind::Pivot(pow) => {
                // κ^{±1} = q^{±H'}: diagonal factor e^{±h(λ−2p)}
                for (key, vec) in &state {
                    let mut out = StateVec::new();
                    for (&p, c) in vec {
                        let f = exp_linear(pow as i64, -2 * pow as i64 * p as i64, order);
                        add_into(&mut out, p, c.mul(&f));
                    }
                    merge_branch(&mut next, key.clone(), out);
                }
            }
            kind => {
                let crossing = slot.crossing.expect("crossing slots carry ids") as u16;
                let positive = matches!(kind, BeadKind::ROver | BeadKind::RUnder);
                let over = matches!(kind, BeadKind::ROver | BeadKind::RinvOver);
                for (key, vec) in &state {
                    if let Some((pending, reduced)) = key.take(crossing) {
                        // second leg: apply this leg and resolve the coupling
                        let n = pending.n;
                        let w1 = (pending.w_lambda, pending.w_const);
                        let couple_sign = if positive { -1 } else { 1 };
                        let scalar = if positive {
                            q_half_pow(n as i64 * (n as i64 - 1), order)
                                .mul(&inv_quantum_factorial(n as u32, order))
                        } else {
                            let s = q_half_pow(-(n as i64) * (n as i64 - 1), order)
                                .mul(&inv_quantum_factorial(n as u32, order));
                            if n % 2 == 1 {
                                s.neg()
                            } else {
                                s
                            }
                        };
                        let mut out = StateVec::new();
                        if positive {
                            // op first, then Cartan at the new index
                            let applied =
                                if over { ev.apply_e(vec, n) } else { ev.apply_f(vec, n) };
                            for (&p, c) in &applied {
                                let w2 = if over { ev.weight_h(p) } else { ev.weight_ht(p) };
                                let coup = ev.coupling(w1, w2, couple_sign);
                                add_into(&mut out, p, c.mul(&coup).mul(&scalar));
                            }
                        } else {
                            // Cartan at the current index, then op
                            let mut staged = StateVec::new();
                            for (&p, c) in vec {
                                let w2 = if over { ev.weight_h(p) } else { ev.weight_ht(p) };
                                let coup = ev.coupling(w1, w2, couple_sign);
                                add_into(&mut staged, p, c.mul(&coup).mul(&scalar));
                            }
                            out =
                                if over { ev.apply_e(&staged, n) } else { ev.apply_f(&staged, n) };
                        }
                        merge_branch(&mut next, reduced, out);
                    } else {
                        // first leg: branch over the R-summation index; the
                        // recorded weight depends on the basis index at
                        // recording time, so branches also split per index
                        for n in 0..=order as u8 {
                            if positive {
                                let applied =
                                    if over { ev.apply_e(vec, n) } else { ev.apply_f(vec, n) };
                                for (&p, c) in &applied {
                                    let w = if over { ev.weight_h(p) } else { ev.weight_ht(p) };
                                    let mut single = StateVec::new();
                                    single.insert(p, c.clone());
                                    let pend =
                                        Pending { crossing, n, w_lambda: w.0, w_const: w.1 };
                                    merge_branch(&mut next, key.with(pend), single);
                                }
                            } else {
                                // record at the pre-op index; the op shifts all
                                // indices uniformly by ±n
                                let shift: i64 = if over { -(n as i64) } else { n as i64 };
                                let applied =
                                    if over { ev.apply_e(vec, n) } else { ev.apply_f(vec, n) };
                                for (&p_post, c) in &applied {
                                    let p_pre = (p_post as i64 - shift) as u32;
                                    let w = if over {
                                        ev.weight_h(p_pre)
                                    } else {
                                        ev.weight_ht(p_pre)
                                    };
                                    let mut single = StateVec::new();
                                    single.insert(p_post, c.clone());
                                    let pend =
                                        Pending { crossing, n, w_lambda: w.0, w_const: w.1 };
                                    merge_branch(&mut next, key.with(pend), single);
                                }
                            }
                        }
                    }
                }
            }
        }
        state = next;
        if state.is_empty() {
            return Err(Error::internal("eval_verma", "state vanished mid-traversal"));
        }
    }

    if state.len() != 1 {
        return Err(Error::internal(
            "eval_verma",
            format!("{} unresolved branches at end of traversal", state.len()),
        ));
    }
    let (key, vec) = state.into_iter().next().unwrap();
    if !key.0.is_empty() {
        return Err(Error::internal("eval_verma", "unconsumed crossing legs"));
    }
    let mut scalar = None;
    for (p, c) in vec {
        if p == 0 {
            scalar = Some(c);
        } else if !c.is_zero() {
            return Err(Error::NotHighestWeight(format!(
                "residual component at basis index {}",
                p
            )));
        }
    }
    scalar.ok_or_else(|| Error::NotHighestWeight("empty final state".into()))
}

/// Raw eigenvalue of the positive kink (the 2-strand braid [1] closed to a
/// one-crossing unknot diagram), memoized per (σ, order).
pub fn kink_eigenvalue(sigma: i64, order: usize) -> Result<HSeries> {
    static CACHE: OnceLock<Mutex<HashMap<(i64, usize), HSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(sigma, order)) {
        return Ok(hit.clone());
    }
    let braid = crate::diagrams::BraidWord::new(2, vec![1])?;
    let d = crate::diagrams::braid_to_long_knot(&braid)?;
    let k = eval_raw(&d, sigma, order)?;
    cache.lock().unwrap().insert((sigma, order), k.clone());
    Ok(k)
}

/// The colored Jones function 𝐉(λ, h) of the 0-framed long knot: the raw
/// bead eigenvalue with the kink eigenvalue divided out writhe times.
pub fn eval_verma(d: &LongKnotDiagram, sigma: i64, order: usize) -> Result<HSeries> {
    let raw = eval_raw(d, sigma, order)?;
    let kink = kink_eigenvalue(sigma, order)?;
    let correction = kink.powi(-d.writhe)?;
    Ok(raw.mul(&correction))
}

/// The eigenvalues of the central beads φ(W) and φ(T) on m₀, computed
/// from the module action tables. The φ(W) eigenvalue is returned
/// rescaled by 2h/ε so it is a plain series in ℚ[λ]⟦h⟧; the closed forms
/// it is matched against are (σ/2)(1 − q^{−2σλ}) and q^{−2σλ}.
pub fn central_eigenvalues(sigma: i64, order: usize) -> Result<(HSeries, HSeries)> {
    // 2h/ε · φ(W) m₀
    //   = [ (q−q⁻¹)·EF + (q·q^{H̃} + q⁻¹·q^{H} − ½(1+q^{H+H̃})(q+q⁻¹))/(q−q⁻¹) ] m₀
    // with eigenvalues at p = 0: EF m₀ = q^{−μ}(q^λ−q^{−λ})/(q−q⁻¹) m₀,
    // H = (1−σ)λ, H̃ = −(1+σ)λ, H+H̃ = −2σλ. The (q−q⁻¹) cancels against
    // the EF denominator; the scalar part is an exact valuation-2 division.
    let guard = order + 1;
    let ef = exp_linear(1, 0, guard)
        .sub(&exp_linear(-1, 0, guard))
        .mul(&exp_linear(-sigma, 0, guard));
    let term1 = exp_linear(-(1 + sigma), 1, guard); // q·q^{H̃}
    let term2 = exp_linear(1 - sigma, -1, guard); // q⁻¹·q^{H}
    let one_plus_t = HSeries::one(guard).add(&exp_linear(-2 * sigma, 0, guard));
    let q_plus_qinv = exp_linear(0, 1, guard).add(&exp_linear(0, -1, guard));
    let scalar = term1
        .add(&term2)
        .sub(&one_plus_t.mul(&q_plus_qinv).scale_rat(&rat(1, 2)));
    let qmq = exp_linear(0, 1, guard).sub(&exp_linear(0, -1, guard));
    let w_eig = ef.truncate(order).add(&scalar.div_exact(&qmq)?);
    let t_eig = exp_linear(-2 * sigma, 0, order);
    Ok((w_eig, t_eig))
}

/// The closed forms from the highest-weight-vector eigenvalue identity:
/// ((σ/2)(1 − q^{−2σλ}), q^{−2σλ}).
pub fn central_eigenvalue_closed_forms(sigma: i64, order: usize) -> (HSeries, HSeries) {
    let t = exp_linear(-2 * sigma, 0, order);
    let w = HSeries::one(order).sub(&t).scale_rat(&rat(sigma, 2));
    (w, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{braid_to_long_knot, parse_braid};

    fn eval(text: &str, sigma: i64, order: usize) -> HSeries {
        let d = braid_to_long_knot(&parse_braid(text).unwrap()).unwrap();
        eval_verma(&d, sigma, order).unwrap()
    }

    #[test]
    fn unknot_is_one() {
        assert_eq!(eval("[]", -1, 6), HSeries::one(6));
        // one-crossing unknots correct to 1 after framing
        assert_eq!(eval("[1]", -1, 6), HSeries::one(6));
        assert_eq!(eval("[-1]", -1, 6), HSeries::one(6));
        assert_eq!(eval("[1]", 1, 5), HSeries::one(5));
    }

    #[test]
    fn kink_times_inverse_kink_is_one() {
        let order = 6;
        let plus = kink_eigenvalue(-1, order).unwrap();
        let braid = crate::diagrams::BraidWord::new(2, vec![-1]).unwrap();
        let d = braid_to_long_knot(&braid).unwrap();
        let minus = eval_raw(&d, -1, order).unwrap();
        assert_eq!(plus.mul(&minus), HSeries::one(order));
    }

    #[test]
    fn reidemeister_invariance_small() {
        let order = 5;
        // RII: (1,1,−1) reduces to (1)
        assert_eq!(eval("[1,1,-1]", -1, order), eval("[1]", -1, order));
        // Markov stabilization (writhe changes, framing correction at work)
        assert_eq!(eval("[1,1,1,2]", -1, order), eval("[1,1,1]", -1, order));
        // Markov conjugation by σ1
        assert_eq!(eval("[1,1,1,1,2,-1]", -1, order), eval("[1,1,1,2]", -1, order));
    }

    #[test]
    fn trefoil_diagonal_matches_inverse_alexander() {
        // The fixed-T reorganization's leading term is 1/Δ: the coefficient
        // of h^m λ^m in 𝐉 equals [z^m] 1/Δ(e^{2z}) for σ = −1.
        let j = eval("[1,1,1]", -1, 6);
        assert!(j.coeff(0).unwrap().is_one());
        let delta = crate::alexander::alexander_poly(&parse_braid("[1,1,1]").unwrap()).unwrap();
        let inv = crate::alexander::inverse_delta_series(&delta, 2, &MPoly::one(), 6).unwrap();
        for m in 0..=6usize {
            let got = j.coeff_of(m, &[m as i32, 0, 0, 0]).unwrap();
            let expect = inv.coeff_of(m, &[0, 0, 0, 0]).unwrap();
            assert_eq!(got, expect, "diagonal mismatch at m = {}", m);
        }
    }

    #[test]
    fn central_eigen_anchor_formulas() {
        for sigma in [-1, 1] {
            let (w, t) = central_eigenvalues(sigma, 6).unwrap();
            let (w_closed, t_closed) = central_eigenvalue_closed_forms(sigma, 6);
            assert_eq!(w, w_closed, "W eigenvalue anchor failed for σ = {}", sigma);
            assert_eq!(t, t_closed, "T eigenvalue anchor failed for σ = {}", sigma);
        }
    }

    #[test]
    fn lambda_degree_bound() {
        // the h^i coefficient of 𝐉 has λ-degree ≤ 2i (Cartan bound); the
        // sharper Melvin–Morton bound lives in the mmr module
        let j = eval("[1,-2,1,-2]", -1, 5);
        for i in 0..=5usize {
            assert!(j.lambda_degree_at(i).unwrap() <= 2 * i as i32);
        }
    }
}
