//! Colored Jones polynomials: evaluation on the (n)-dimensional simple
//! module V_{n−1}, exact in the variable s with q = s².
//!
//! The module action (U_h presentation, V = V_{n−1} with basis v_0..v_{n−1}):
//!
//!   H v_p = (n−1−2p) v_p,
//!   E v_p = [p]_q v_{p−1},
//!   F v_p = [n−1−p]_q v_{p+1},
//!
//! with R = Σ_k (q−q⁻¹)^k/[k]_q! · q^{H⊗H/2 + k(k−1)/2} E^k ⊗ F^k. The
//! Cartan factor acts as the integer power s^{w₁w₂} and the (q−q⁻¹)^k is
//! folded into the F-side factors (q^{n−1−p} − q^{p−n+1}), so every branch
//! stays a Laurent polynomial; the one division per crossing, by [k]_q!,
//! is exact. The sum over k is finite: E and F are nilpotent on V.

use crate::diagrams::{BeadKind, LongKnotDiagram};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rat::rat_int;
use std::collections::HashMap;

fn s_pow(k: i64) -> LaurentPoly {
    LaurentPoly::monomial('s', k, rat_int(1))
}

/// [j]_q = Σ_{r<j} q^{j−1−2r} in s.
fn quantum_int(j: i64) -> LaurentPoly {
    let mut acc = LaurentPoly::zero('s');
    for r in 0..j {
        acc = acc.add(&s_pow(2 * (j - 1 - 2 * r)));
    }
    acc
}

fn quantum_factorial(k: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one('s');
    for j in 1..=k as i64 {
        acc = acc.mul(&quantum_int(j));
    }
    acc
}

type StateVec = HashMap<u32, LaurentPoly>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
struct Pending {
    crossing: u16,
    k: u8,
    weight: i16,
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
    /// highest weight n−1 of V_{n−1} (color n = dimension)
    top: u32,
}

impl Evaluator {
    fn weight(&self, p: u32) -> i16 {
        (self.top as i64 - 2 * p as i64) as i16
    }

    /// E^k with factors [p]_q [p−1]_q ⋯
    fn apply_e(&self, vec: &StateVec, k: u8) -> StateVec {
        if k == 0 {
            return vec.clone();
        }
        let mut out = StateVec::new();
        for (&p, c) in vec {
            if p < k as u32 {
                continue;
            }
            let mut factor = LaurentPoly::one('s');
            for r in 0..k as i64 {
                factor = factor.mul(&quantum_int(p as i64 - r));
            }
            add_into(&mut out, p - k as u32, c.mul(&factor));
        }
        out
    }

    /// F̂^k with the cancelled factors (q^{n−1−p'} − q^{p'−n+1}); vectors
    /// above the top of the module vanish.
    fn apply_f(&self, vec: &StateVec, k: u8) -> StateVec {
        if k == 0 {
            return vec.clone();
        }
        let mut out = StateVec::new();
        for (&p, c) in vec {
            if p + k as u32 > self.top {
                continue;
            }
            let mut factor = LaurentPoly::one('s');
            for r in 0..k as i64 {
                let m = self.top as i64 - (p as i64 + r);
                factor = factor.mul(&s_pow(2 * m).sub(&s_pow(-2 * m)));
            }
            add_into(&mut out, p + k as u32, c.mul(&factor));
        }
        out
    }
}

fn add_into(vec: &mut StateVec, p: u32, c: LaurentPoly) {
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

fn eval_raw(d: &LongKnotDiagram, n: u32) -> Result<LaurentPoly> {
    assert!(n >= 1, "color must be at least 1");
    let ev = Evaluator { top: n - 1 };
    let mut state: HashMap<BranchKey, StateVec> = HashMap::new();
    let mut v0 = StateVec::new();
    v0.insert(0, LaurentPoly::one('s'));
    state.insert(BranchKey::default(), v0);

    for slot in &d.traversal {
        let mut next: HashMap<BranchKey, StateVec> = HashMap::new();
        match slot.kind {
            BeadKind::Pivot(pow) => {
                // κ = q^H: s^{2·pow·(n−1−2p)}
                for (key, vec) in &state {
                    let mut out = StateVec::new();
                    for (&p, c) in vec {
                        let w = ev.weight(p) as i64;
                        add_into(&mut out, p, c.mul(&s_pow(2 * pow as i64 * w)));
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
                        let k = pending.k;
                        let w1 = pending.weight as i64;
                        let mut out = StateVec::new();
                        if positive {
                            // op first, then Cartan s^{+w1·w2} at the new index
                            let applied =
                                if over { ev.apply_e(vec, k) } else { ev.apply_f(vec, k) };
                            for (&p, c) in &applied {
                                let w2 = ev.weight(p) as i64;
                                add_into(&mut out, p, c.mul(&s_pow(w1 * w2)));
                            }
                        } else {
                            // Cartan s^{−w1·w2} at the current index, then op
                            let mut staged = StateVec::new();
                            for (&p, c) in vec {
                                let w2 = ev.weight(p) as i64;
                                add_into(&mut staged, p, c.mul(&s_pow(-w1 * w2)));
                            }
                            out =
                                if over { ev.apply_e(&staged, k) } else { ev.apply_f(&staged, k) };
                        }
                        // crossing scalar: q^{±k(k−1)/2} (sign of crossing),
                        // (−1)^k for negative, and the exact division by [k]_q!
                        let kk = k as i64;
                        let mut scaled = StateVec::new();
                        let qfact = quantum_factorial(k as u32);
                        for (p, c) in out {
                            let mut c = c.mul(&s_pow(if positive {
                                kk * (kk - 1)
                            } else {
                                -kk * (kk - 1)
                            }));
                            if !positive && k % 2 == 1 {
                                c = c.neg();
                            }
                            let c = c.div_exact(&qfact).map_err(|e| {
                                Error::internal("eval_vn", format!("[k]_q! division: {}", e))
                            })?;
                            add_into(&mut scaled, p, c);
                        }
                        merge_branch(&mut next, reduced, scaled);
                    } else {
                        // first leg: branch over k and the recording index
                        for k in 0..=ev.top.min(255) as u8 {
                            if positive {
                                let applied =
                                    if over { ev.apply_e(vec, k) } else { ev.apply_f(vec, k) };
                                for (&p, c) in &applied {
                                    let pend =
                                        Pending { crossing, k, weight: ev.weight(p) };
                                    let mut single = StateVec::new();
                                    single.insert(p, c.clone());
                                    merge_branch(&mut next, key.with(pend), single);
                                }
                            } else {
                                let shift: i64 = if over { -(k as i64) } else { k as i64 };
                                let applied =
                                    if over { ev.apply_e(vec, k) } else { ev.apply_f(vec, k) };
                                for (&p_post, c) in &applied {
                                    let p_pre = (p_post as i64 - shift) as u32;
                                    let pend =
                                        Pending { crossing, k, weight: ev.weight(p_pre) };
                                    let mut single = StateVec::new();
                                    single.insert(p_post, c.clone());
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
            return Err(Error::internal("eval_vn", "state vanished mid-traversal"));
        }
    }

    if state.len() != 1 {
        return Err(Error::internal("eval_vn", "unresolved branches at end of traversal"));
    }
    let (key, vec) = state.into_iter().next().unwrap();
    if !key.0.is_empty() {
        return Err(Error::internal("eval_vn", "unconsumed crossing legs"));
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

/// Kink eigenvalue on V_{n−1} (a unit ± s^k).
pub fn kink_eigenvalue(n: u32) -> Result<LaurentPoly> {
    let braid = crate::diagrams::BraidWord::new(2, vec![1])?;
    let d = crate::diagrams::braid_to_long_knot(&braid)?;
    eval_raw(&d, n)
}

/// The colored Jones polynomial J^n as an exact Laurent polynomial in s
/// (q = s²), normalized so the unknot gives 1; the writhe is corrected by
/// the kink eigenvalue on V_{n−1}.
pub fn eval_vn(d: &LongKnotDiagram, n: u32) -> Result<LaurentPoly> {
    let raw = eval_raw(d, n)?;
    let kink = kink_eigenvalue(n)?;
    let w = d.writhe;
    if w >= 0 {
        let mut den = LaurentPoly::one('s');
        for _ in 0..w {
            den = den.mul(&kink);
        }
        raw.div_exact(&den)
    } else {
        let mut num = raw;
        for _ in 0..(-w) {
            num = num.mul(&kink);
        }
        Ok(num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{braid_to_long_knot, parse_braid};

    fn eval(text: &str, n: u32) -> LaurentPoly {
        let d = braid_to_long_knot(&parse_braid(text).unwrap()).unwrap();
        eval_vn(&d, n).unwrap()
    }

    #[test]
    fn unknot_any_color() {
        for n in 1..=6 {
            assert!(eval("[]", n).is_one());
            assert!(eval("[1]", n).is_one());
            assert!(eval("[-1]", n).is_one());
        }
    }

    #[test]
    fn color_one_is_trivial() {
        // V_0 is the trivial module: everything evaluates to 1
        for text in ["[1,1,1]", "[1,-2,1,-2]"] {
            assert!(eval(text, 1).is_one());
        }
    }

    #[test]
    fn kink_is_monomial() {
        for n in 2..=4 {
            let k = kink_eigenvalue(n).unwrap();
            assert_eq!(k.terms().count(), 1, "kink on V_{} is ±s^m, got {}", n - 1, k);
        }
    }

    #[test]
    fn trefoil_invariance() {
        for n in 2..=3 {
            assert_eq!(eval("[1,1,1]", n), eval("[1,1,1,2]", n));
        }
    }

    #[test]
    fn trefoil_jones_value() {
        // J² of the right trefoil: in q = s² this engine produces the
        // classical Jones polynomial; mirroring inverts s.
        let j2 = eval("[1,1,1]", 2);
        let j2m = eval("[-1,-1,-1]", 2);
        assert_eq!(j2.invert_var(), j2m);
        assert_eq!(j2.eval_one(), crate::rat::rat_int(1));
        println!("J²(3_1) = {}", j2);
    }
}
