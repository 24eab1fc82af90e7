//! Alexander polynomials from braid words via the reduced Burau
//! representation:
//!
//!   Δ(t) ≐ det(I − ρ(β)) · (1 − t)/(1 − t^n),
//!
//! normalized by the unique unit ±t^{m/2} making Δ(t) = Δ(t⁻¹) and
//! Δ(1) = 1. The half-integer intermediate lives in the s-variable with
//! t = s²; for knots the normalized result is integral in t.

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::laurent::LaurentPoly;
use crate::mpoly::MPoly;
use crate::rat::rat_int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderPoly(pub LaurentPoly);

impl AlexanderPoly {
    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn is_symmetric(&self) -> bool {
        self.0 == self.0.invert_var()
    }
}

impl std::fmt::Display for AlexanderPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

type Matrix = Vec<Vec<LaurentPoly>>;

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { LaurentPoly::one('t') } else { LaurentPoly::zero('t') })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![LaurentPoly::zero('t'); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

/// Reduced Burau image of the generator σ_i (1-indexed) in B_n, size
/// (n−1)×(n−1). `inverse` selects σ_i⁻¹.
fn burau_generator(i: usize, n: usize, inverse: bool) -> Matrix {
    assert!(n >= 2 && (1..n).contains(&i));
    let m = n - 1;
    let mut g = identity(m);
    let t = LaurentPoly::monomial('t', 1, rat_int(1));
    let tinv = LaurentPoly::monomial('t', -1, rat_int(1));
    let one = LaurentPoly::one('t');
    // 0-indexed row/col r corresponds to basis vector r+1
    let r = i - 1;
    if !inverse {
        g[r][r] = t.scale(&rat_int(-1));
        if r > 0 {
            g[r - 1][r] = t.clone();
        }
        if r + 1 < m {
            g[r + 1][r] = one.clone();
        }
    } else {
        g[r][r] = tinv.scale(&rat_int(-1));
        if r > 0 {
            g[r - 1][r] = one.clone();
        }
        if r + 1 < m {
            g[r + 1][r] = tinv.clone();
        }
    }
    g
}

/// Product of generator images along the braid word.
pub fn burau_reduced(braid: &crate::diagrams::BraidWord) -> Matrix {
    let n = braid.strand_count;
    if n == 1 {
        return Vec::new();
    }
    let mut acc = identity(n - 1);
    for &g in &braid.letters {
        let gen = burau_generator(g.unsigned_abs() as usize, n, g < 0);
        acc = mat_mul(&acc, &gen);
    }
    acc
}

/// Determinant by fraction-free expansion (the matrices are small).
fn det(m: &Matrix) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one('t');
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = LaurentPoly::zero('t');
    for (j, pivot) in m[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Matrix = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = pivot.mul(&det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Δ of the braid closure, normalized so Δ(t) = Δ(t⁻¹) and Δ(1) = 1.
pub fn alexander_poly(braid: &crate::diagrams::BraidWord) -> Result<AlexanderPoly> {
    if !braid.is_single_cycle() {
        let d = crate::diagrams::braid_to_long_knot(braid);
        return Err(d.err().unwrap_or(Error::Normalization("closure is not a knot".into())));
    }
    let n = braid.strand_count;
    if n == 1 {
        return Ok(AlexanderPoly(LaurentPoly::one('t')));
    }
    let rho = burau_reduced(braid);
    let mut i_minus = identity(n - 1);
    for r in 0..n - 1 {
        for c in 0..n - 1 {
            i_minus[r][c] = i_minus[r][c].sub(&rho[r][c]);
        }
    }
    let d = det(&i_minus);
    // (1 − t)/(1 − t^n) exactly: d·(1−t) must be divisible by 1 − t^n.
    let one_minus_t = LaurentPoly::from_terms('t', &[(0, 1), (1, -1)]);
    let one_minus_tn = LaurentPoly::from_terms('t', &[(0, 1), (n as i64, -1)]);
    let p = d.mul(&one_minus_t).div_exact(&one_minus_tn).map_err(|e| {
        Error::Normalization(format!("Burau determinant not divisible by 1−t^n: {}", e))
    })?;
    normalize(p)
}

/// Normalize by ±t^{m/2}: symmetrize the exponent support, then fix the
/// sign by Δ(1) = 1.
fn normalize(p: LaurentPoly) -> Result<AlexanderPoly> {
    if p.is_zero() {
        return Err(Error::Normalization("zero determinant polynomial".into()));
    }
    let lo = p.min_exp().unwrap();
    let hi = p.max_exp().unwrap();
    if (lo + hi) % 2 != 0 {
        return Err(Error::Normalization(
            "support center is half-integral; closure is not a knot".into(),
        ));
    }
    let centered = p.shift(-(lo + hi) / 2);
    if centered != centered.invert_var() {
        return Err(Error::Normalization("centered polynomial is not symmetric".into()));
    }
    let at_one = centered.eval_one();
    if at_one == rat_int(1) {
        Ok(AlexanderPoly(centered))
    } else if at_one == rat_int(-1) {
        Ok(AlexanderPoly(centered.neg()))
    } else {
        Err(Error::Normalization(format!("Δ(1) = {}, expected ±1", at_one)))
    }
}

/// Exact truncated expansion of 1/Δ(e^{c·h·p}) with c ∈ {±2}; requires
/// Δ(1) = 1 so the constant term is invertible. `p` is the polynomial
/// multiplying h in the exponent (λ for the bivariate series, 1 for
/// diagonal z-series work).
pub fn inverse_delta_series(
    delta: &AlexanderPoly,
    c: i64,
    p: &MPoly,
    order: usize,
) -> Result<HSeries> {
    let substituted = delta.0.substitute_exp(c, p, order);
    substituted.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{parse_braid, KnotTable};
    use crate::mpoly::Var;

    #[test]
    fn burau_base_cases() {
        // empty word → identity
        let b = parse_braid("[]").unwrap();
        assert!(burau_reduced(&b).is_empty());
        let b = crate::diagrams::BraidWord::new(3, vec![]).unwrap();
        let m = burau_reduced(&b);
        assert_eq!(m, identity(2));
        // (1) on 2 strands → the 1×1 matrix (−t)
        let b = parse_braid("[1]").unwrap();
        let m = burau_reduced(&b);
        assert_eq!(m[0][0], LaurentPoly::monomial('t', 1, rat_int(-1)));
        // word followed by its inverse → identity
        let b = crate::diagrams::BraidWord::new(3, vec![1, 2, -2, -1]).unwrap();
        assert_eq!(burau_reduced(&b), identity(2));
    }

    #[test]
    fn alexander_of_table_knots() {
        let table = KnotTable::bundled();
        let expect = |name: &str| -> LaurentPoly {
            match name {
                "unknot" => LaurentPoly::from_terms('t', &[(0, 1)]),
                "3_1" => LaurentPoly::from_terms('t', &[(-1, 1), (0, -1), (1, 1)]),
                "4_1" => LaurentPoly::from_terms('t', &[(-1, -1), (0, 3), (1, -1)]),
                "5_1" => LaurentPoly::from_terms('t', &[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]),
                "5_2" => LaurentPoly::from_terms('t', &[(-1, 2), (0, -3), (1, 2)]),
                "6_1" => LaurentPoly::from_terms('t', &[(-1, -2), (0, 5), (1, -2)]),
                _ => unreachable!(),
            }
        };
        for name in table.primary_names() {
            let d1 = alexander_poly(table.get(name).unwrap()).unwrap();
            assert_eq!(d1.0, expect(name), "Δ({}) = {}", name, d1);
            assert!(d1.is_symmetric());
            assert_eq!(d1.0.eval_one(), rat_int(1));
            // Markov-move stability across the stored pair
            let d2 = alexander_poly(table.alternate(name).unwrap()).unwrap();
            assert_eq!(d1, d2, "presentations of {} disagree", name);
        }
    }

    #[test]
    fn inverse_delta_trefoil() {
        // Δ(e^{2hλ}) = 1 + (2hλ)² + O(h⁴) for Δ = t − 1 + t⁻¹; inverse has
        // h⁰ coefficient 1, h¹ coefficient 0, h² coefficient −4λ².
        let delta = alexander_poly(&parse_braid("[1,1,1]").unwrap()).unwrap();
        let s = inverse_delta_series(&delta, 2, &MPoly::var(Var::Lambda), 4).unwrap();
        assert!(s.coeff(0).unwrap().is_one());
        assert!(s.coeff(1).unwrap().is_zero());
        assert_eq!(s.coeff_of(2, &[2, 0, 0, 0]).unwrap(), rat_int(-4));
        // Δ = 1 → inverse 1
        let one = AlexanderPoly(LaurentPoly::one('t'));
        assert_eq!(inverse_delta_series(&one, 2, &MPoly::var(Var::Lambda), 4).unwrap(), HSeries::one(4));
    }

    #[test]
    fn shift_identity_first_order() {
        // 1/Δ(e^{2h(λ−1)}) = 1/Δ(e^{2hλ}) + 2e^{2hλ}Δ'(e^{2hλ})/Δ²(e^{2hλ}) · h + O(h²)
        let delta = alexander_poly(&parse_braid("[1,1,1]").unwrap()).unwrap();
        let order = 5;
        let lam = MPoly::var(Var::Lambda);
        let shifted_arg = lam.sub(&MPoly::one());
        let lhs = inverse_delta_series(&delta, 2, &shifted_arg, order).unwrap();
        let base = inverse_delta_series(&delta, 2, &lam, order).unwrap();
        let dprime = delta.0.derivative();
        let correction = LaurentPoly::monomial('t', 1, rat_int(2))
            .mul(&dprime)
            .substitute_exp(2, &lam, order)
            .mul(&base)
            .mul(&base)
            .mul(&HSeries::h_power(1, MPoly::one(), order));
        let diff = lhs.sub(&base.add(&correction));
        assert!(diff.coeff(0).unwrap().is_zero());
        assert!(diff.coeff(1).unwrap().is_zero(), "h¹ residual {:?}", diff.coeff(1).unwrap());
        assert!(!diff.is_zero(), "difference should appear at h² and beyond");
    }

    #[test]
    fn rejects_multicomponent() {
        let b = crate::diagrams::BraidWord::new(2, vec![1, -1]).unwrap();
        assert!(alexander_poly(&b).is_err());
    }
}
