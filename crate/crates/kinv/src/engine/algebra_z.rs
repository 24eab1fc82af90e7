//! The universal invariant at algebra level: Z_𝔻 of a long knot as a
//! normal-ordered element of 𝔻, its twisted variant Ž, and the braid
//! conjugation theorem check.
//!
//! Beads multiply along the strand from right to left: processing the
//! traversal front to back, each new bead multiplies the accumulated
//! product on the left. A crossing's two legs share one summation index;
//! partial products branch per open crossing index and merge when the
//! second leg closes it. Terms whose h-valuation exceeds the truncation
//! order die off automatically.

use crate::algebra::rmatrix::{pivot, r_matrix, r_matrix_inverse};
use crate::algebra::tensor::TensorElement;
use crate::algebra::twist::is_twisting_element;
use crate::algebra::{AlgebraElement, Mono};
use crate::diagrams::{BeadKind, BraidWord, LongKnotDiagram};
use crate::error::{Error, Result};
use crate::hseries::HSeries;
use std::collections::HashMap;

/// The summands of R^{±1} as (over-leg monomial, under-leg monomial,
/// coefficient) triples; the coefficient is attached once per crossing.
fn bead_pairs(order: usize, positive: bool) -> Vec<(Mono, Mono, HSeries)> {
    let r = if positive { r_matrix(order) } else { r_matrix_inverse(order) };
    r.terms().map(|(key, c)| (key[0], key[1], c.clone())).collect()
}

/// Beads for the twisted R-matrix: Ř = Σ αφ ⊗ φ⁻¹β and
/// Ř⁻¹ = Σ φ⁻¹ᾱ ⊗ β̄φ. Over-leg and under-leg elements are returned
/// separately since twisting breaks the monomial form.
fn twisted_bead_pairs(
    order: usize,
    positive: bool,
    phi: &AlgebraElement,
    phi_inv: &AlgebraElement,
) -> Vec<(AlgebraElement, AlgebraElement, HSeries)> {
    bead_pairs(order, positive)
        .into_iter()
        .map(|(over, under, c)| {
            let over_e = AlgebraElement::from_mono(over, HSeries::one(order));
            let under_e = AlgebraElement::from_mono(under, HSeries::one(order));
            if positive {
                (over_e.mul(phi), phi_inv.mul(&under_e), c)
            } else {
                (phi_inv.mul(&over_e), under_e.mul(phi), c)
            }
        })
        .collect()
}

type Key = Vec<(u16, u16)>; // (crossing id, summand index), sorted

fn key_with(key: &Key, c: u16, t: u16) -> Key {
    let mut v = key.clone();
    let pos = v.partition_point(|e| e.0 < c);
    v.insert(pos, (c, t));
    v
}

fn key_take(key: &Key, c: u16) -> Option<(u16, Key)> {
    let pos = key.iter().position(|e| e.0 == c)?;
    let mut v = key.clone();
    let (_, t) = v.remove(pos);
    Some((t, v))
}

fn merge(state: &mut HashMap<Key, AlgebraElement>, key: Key, elem: AlgebraElement) {
    if elem.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match state.entry(key) {
        Entry::Vacant(v) => {
            v.insert(elem);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().add(&elem);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

enum Beads {
    Plain,
    Twisted { phi: AlgebraElement, phi_inv: AlgebraElement },
}

fn eval_raw(d: &LongKnotDiagram, order: usize, beads: &Beads) -> Result<AlgebraElement> {
    let kappa = pivot(order);
    let kappa_inv = kappa.invert_unit()?;
    let mut plain_cache: HashMap<bool, Vec<(Mono, Mono, HSeries)>> = HashMap::new();
    let mut twist_cache: HashMap<bool, Vec<(AlgebraElement, AlgebraElement, HSeries)>> =
        HashMap::new();

    let mut state: HashMap<Key, AlgebraElement> = HashMap::new();
    state.insert(Vec::new(), AlgebraElement::one(order));

    for slot in &d.traversal {
        let mut next: HashMap<Key, AlgebraElement> = HashMap::new();
        match slot.kind {
            BeadKind::Pivot(pow) => {
                let bead = if pow >= 0 { &kappa } else { &kappa_inv };
                for (key, elem) in &state {
                    let mut acc = elem.clone();
                    for _ in 0..pow.unsigned_abs() {
                        acc = bead.mul(&acc);
                    }
                    merge(&mut next, key.clone(), acc);
                }
            }
            kind => {
                let crossing = slot.crossing.expect("crossing slots carry ids") as u16;
                let positive = matches!(kind, BeadKind::ROver | BeadKind::RUnder);
                let over = matches!(kind, BeadKind::ROver | BeadKind::RinvOver);
                match beads {
                    Beads::Plain => {
                        let pairs = plain_cache
                            .entry(positive)
                            .or_insert_with(|| bead_pairs(order, positive));
                        for (key, elem) in &state {
                            if let Some((t, reduced)) = key_take(key, crossing) {
                                let (o, u, _) = &pairs[t as usize];
                                let mono = if over { o } else { u };
                                let bead = AlgebraElement::from_mono(*mono, HSeries::one(order));
                                merge(&mut next, reduced, bead.mul(elem));
                            } else {
                                for (t, (o, u, c)) in pairs.iter().enumerate() {
                                    let mono = if over { o } else { u };
                                    let bead = AlgebraElement::from_mono(*mono, c.clone());
                                    let prod = bead.mul(elem);
                                    merge(&mut next, key_with(key, crossing, t as u16), prod);
                                }
                            }
                        }
                    }
                    Beads::Twisted { phi, phi_inv } => {
                        let pairs = twist_cache.entry(positive).or_insert_with(|| {
                            twisted_bead_pairs(order, positive, phi, phi_inv)
                        });
                        for (key, elem) in &state {
                            if let Some((t, reduced)) = key_take(key, crossing) {
                                let (o, u, _) = &pairs[t as usize];
                                let bead = if over { o } else { u };
                                merge(&mut next, reduced, bead.mul(elem));
                            } else {
                                for (t, (o, u, c)) in pairs.iter().enumerate() {
                                    let bead = if over { o } else { u };
                                    let prod = bead.scale(c).mul(elem);
                                    merge(&mut next, key_with(key, crossing, t as u16), prod);
                                }
                            }
                        }
                    }
                }
            }
        }
        state = next;
        if state.is_empty() {
            return Err(Error::internal("compute_z", "state vanished mid-traversal"));
        }
    }

    if state.len() != 1 {
        return Err(Error::internal("compute_z", "unresolved crossing branches"));
    }
    let (key, elem) = state.into_iter().next().unwrap();
    if !key.is_empty() {
        return Err(Error::internal("compute_z", "unconsumed crossing legs"));
    }
    Ok(elem)
}

/// Raw value of the positive kink diagram (braid [1] closed) in 𝔻.
pub fn kink_value(order: usize) -> Result<AlgebraElement> {
    let braid = BraidWord::new(2, vec![1])?;
    let d = crate::diagrams::braid_to_long_knot(&braid)?;
    eval_raw(&d, order, &Beads::Plain)
}

/// Z_𝔻 of the 0-framed long knot: the beaded product with the kink value
/// divided out writhe times. The kink value is the ribbon element's
/// inverse (`kink_is_inverse_ribbon` pins this), so this equals
/// multiplication by v^{writhe}.
pub fn compute_z_algebra(d: &LongKnotDiagram, order: usize) -> Result<AlgebraElement> {
    let raw = eval_raw(d, order, &Beads::Plain)?;
    let kink = kink_value(order)?;
    Ok(raw.mul(&kink.powi(-d.writhe)?))
}

/// Ž_𝔻 with the twisted R-matrix beads; for long knots this equals
/// `compute_z_algebra` output.
pub fn compute_z_twisted(
    d: &LongKnotDiagram,
    phi: &AlgebraElement,
    order: usize,
) -> Result<AlgebraElement> {
    if !is_twisting_element(phi, order)? {
        return Err(Error::NotTwisting("compute_z_twisted".into()));
    }
    let phi = phi.truncate(order);
    let phi_inv = phi.invert_unit()?;
    let beads = Beads::Twisted { phi: phi.clone(), phi_inv };
    let raw = eval_raw(d, order, &beads)?;
    let braid = BraidWord::new(2, vec![1])?;
    let kink_d = crate::diagrams::braid_to_long_knot(&braid)?;
    let kink = eval_raw(&kink_d, order, &beads)?;
    Ok(raw.mul(&kink.powi(-d.writhe)?))
}

/// Z_A(B) of an open braid: one tensor leg per strand (indexed by bottom
/// position), beads multiplying right to left along each strand.
fn braid_tensor(b: &BraidWord, order: usize, beads: &Beads) -> Result<TensorElement> {
    let legs = b.strand_count;
    let mut z = TensorElement::one(legs, order);
    // strand occupying each position, by bottom index
    let mut at: Vec<usize> = (0..legs).collect();
    let plain_pos = bead_pairs(order, true);
    let plain_neg = bead_pairs(order, false);
    for &g in &b.letters {
        let i = g.unsigned_abs() as usize - 1;
        let positive = g > 0;
        // entering position i goes over at positive crossings
        let (over_strand, under_strand) =
            if positive { (at[i], at[i + 1]) } else { (at[i + 1], at[i]) };
        let mut letter = TensorElement::zero(legs, order);
        match beads {
            Beads::Plain => {
                let pairs = if positive { &plain_pos } else { &plain_neg };
                for (o, u, c) in pairs {
                    let t = TensorElement::embed(
                        &AlgebraElement::from_mono(*o, c.clone()),
                        legs,
                        over_strand + 1,
                    )
                    .mul(&TensorElement::embed(
                        &AlgebraElement::from_mono(*u, HSeries::one(order)),
                        legs,
                        under_strand + 1,
                    ));
                    letter = letter.add(&t);
                }
            }
            Beads::Twisted { phi, phi_inv } => {
                let pairs = twisted_bead_pairs(order, positive, phi, phi_inv);
                for (o, u, c) in &pairs {
                    let t = TensorElement::embed(&o.scale(c), legs, over_strand + 1)
                        .mul(&TensorElement::embed(u, legs, under_strand + 1));
                    letter = letter.add(&t);
                }
            }
        }
        z = letter.mul(&z);
        at.swap(i, i + 1);
    }
    Ok(z)
}

/// The braid conjugation theorem: with σ the permutation induced by the
/// braid, σ_* ∘ Ž_A(B) = C · (σ_* ∘ Z_A(B)) · C⁻¹ for the conjugator
/// C = 1 ⊗ φ ⊗ ⋯ ⊗ φ^{N−1}.
pub fn braid_conjugation_check(
    b: &BraidWord,
    phi: &AlgebraElement,
    order: usize,
) -> Result<bool> {
    if !is_twisting_element(phi, order)? {
        return Err(Error::NotTwisting("braid_conjugation_check".into()));
    }
    let phi = phi.truncate(order);
    let phi_inv = phi.invert_unit()?;
    let legs = b.strand_count;
    let z = braid_tensor(b, order, &Beads::Plain)?;
    let zt = braid_tensor(
        b,
        order,
        &Beads::Twisted { phi: phi.clone(), phi_inv: phi_inv.clone() },
    )?;
    // The theorem is operator-level: σ_* ∘ Ž = ρ(C) ∘ σ_* ∘ Z ∘ ρ(C)⁻¹ for
    // C = 1 ⊗ φ ⊗ ⋯ ⊗ φ^{N−1}, with the source conjugator indexed by
    // bottom positions and the target one by top positions. Pulling the
    // target factor through the permutation, the tensor-element identity is
    //   Ž = [⊗_k φ^{σ(k)} at leg k] · Z · [⊗_k φ^{−k} at leg k],
    // where leg k is the strand starting at bottom position k (0-indexed).
    let perm = b.permutation();
    let mut left = TensorElement::one(legs, order);
    let mut right = TensorElement::one(legs, order);
    for leg in 0..legs {
        left = left.mul(&TensorElement::embed(&phi.powi(perm[leg] as i64)?, legs, leg + 1));
        right = right.mul(&TensorElement::embed(&phi_inv.powi(leg as i64)?, legs, leg + 1));
    }
    Ok(left.mul(&z).mul(&right).sub(&zt).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rmatrix::{cartan_a, pivot_and_ribbon};
    use crate::diagrams::{braid_to_long_knot, parse_braid};

    fn diagram(text: &str) -> LongKnotDiagram {
        braid_to_long_knot(&parse_braid(text).unwrap()).unwrap()
    }

    #[test]
    fn unknot_value_is_one() {
        let order = 4;
        assert!(compute_z_algebra(&diagram("[]"), order).unwrap().is_one());
        assert!(compute_z_algebra(&diagram("[1]"), order).unwrap().is_one());
        assert!(compute_z_algebra(&diagram("[-1]"), order).unwrap().is_one());
    }

    #[test]
    fn rii_reduction() {
        let order = 3;
        let z1 = compute_z_algebra(&diagram("[1,1,-1]"), order).unwrap();
        assert!(z1.is_one());
    }

    #[test]
    fn kink_is_inverse_ribbon() {
        // the raw positive-kink value multiplies 0-framed values by v⁻¹;
        // equivalently kink · v = 1 for the ribbon element v = κ⁻¹u
        let order = 4;
        let kink = kink_value(order).unwrap();
        let (_, v) = pivot_and_ribbon(order);
        assert!(kink.mul(&v).is_one(), "kink·v = {}", kink.mul(&v));
    }

    #[test]
    fn trefoil_is_central() {
        let order = 3;
        let z = compute_z_algebra(&diagram("[1,1,1]"), order).unwrap();
        assert!(!z.is_one());
        for g in ['y', 'b', 'a', 'x'] {
            let gen = AlgebraElement::generator(g, order);
            assert!(z.commutes_with(&gen), "[Z(3_1), {}] ≠ 0", g);
        }
    }

    #[test]
    fn twisted_equals_untwisted_for_long_knots() {
        let order = 3;
        let d = diagram("[1,1,1]");
        let z = compute_z_algebra(&d, order).unwrap();
        let one = AlgebraElement::one(order);
        assert_eq!(compute_z_twisted(&d, &one, order).unwrap(), z);
        let zk = compute_z_twisted(&d, &pivot(order), order).unwrap();
        assert_eq!(zk, z);
        let za = compute_z_twisted(&d, &cartan_a(order), order).unwrap();
        assert_eq!(za, z);
    }

    #[test]
    fn conjugation_theorem_small() {
        let order = 3;
        // trivial braid: both sides are the identity
        let trivial = BraidWord::new(2, vec![]).unwrap();
        assert!(braid_conjugation_check(&trivial, &pivot(order), order).unwrap());
        // single positive crossing on 2 strands, conjugator 1 ⊗ φ
        let b = BraidWord::new(2, vec![1]).unwrap();
        assert!(braid_conjugation_check(&b, &pivot(order), order).unwrap());
        // (1,2) on 3 strands, conjugator 1 ⊗ φ ⊗ φ²
        let b = BraidWord::new(3, vec![1, 2]).unwrap();
        assert!(braid_conjugation_check(&b, &cartan_a(order), order).unwrap());
    }
}
