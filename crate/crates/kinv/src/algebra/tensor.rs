//! Tensor powers of 𝔻 with leg-wise normal-ordered multiplication.
//!
//! `TensorElement` handles 𝔻⊗𝔻 as well as the 3- and 5-fold powers needed
//! by the XC-axiom checks. Legs are 0-indexed internally; the `R_{ij}`-style
//! embedding helpers take the 1-indexed convention used in the axioms.

use crate::error::{Error, Result};
use crate::exec;
use crate::hseries::HSeries;
use crate::rat::Rat;
use std::collections::BTreeMap;
use std::fmt;

use super::{mono_product, AlgebraElement, Mono};

#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    legs: usize,
    order: usize,
    terms: BTreeMap<Vec<Mono>, HSeries>,
}

impl TensorElement {
    pub fn zero(legs: usize, order: usize) -> Self {
        TensorElement { legs, order, terms: BTreeMap::new() }
    }

    pub fn one(legs: usize, order: usize) -> Self {
        let mut t = Self::zero(legs, order);
        t.add_term(vec![Mono::ONE; legs], HSeries::one(order));
        t
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Mono>, &HSeries)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Vec<Mono>, coeff: HSeries) {
        debug_assert_eq!(key.len(), self.legs);
        let coeff = coeff.truncate(self.order.min(coeff.order()));
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.legs, rhs.legs);
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.legs, self.order);
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), c.neg());
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = Self::zero(self.legs, order);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.truncate(order));
        }
        out
    }

    pub fn scale(&self, s: &HSeries) -> Self {
        let order = self.order.min(s.order());
        let mut out = Self::zero(self.legs, order);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.mul(s));
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.legs, self.order);
        for (k, s) in &self.terms {
            out.add_term(k.clone(), s.scale_rat(c));
        }
        out
    }

    /// Embed an algebra element into the given 1-indexed leg.
    pub fn embed(elem: &AlgebraElement, legs: usize, pos: usize) -> Self {
        assert!((1..=legs).contains(&pos));
        let mut out = Self::zero(legs, elem.order());
        for (m, c) in elem.terms() {
            let mut key = vec![Mono::ONE; legs];
            key[pos - 1] = *m;
            out.add_term(key, c.clone());
        }
        out
    }

    /// Embed a two-leg element with its first factor at leg `i` and second
    /// at leg `j` (1-indexed), i.e. the R_{ij} convention.
    pub fn embed_pair(pair: &TensorElement, legs: usize, i: usize, j: usize) -> Self {
        assert_eq!(pair.legs, 2);
        assert!(i != j && (1..=legs).contains(&i) && (1..=legs).contains(&j));
        let mut out = Self::zero(legs, pair.order);
        for (k, c) in &pair.terms {
            let mut key = vec![Mono::ONE; legs];
            key[i - 1] = k[0];
            key[j - 1] = k[1];
            out.add_term(key, c.clone());
        }
        out
    }

    /// Leg-wise normal-ordered product.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.legs, rhs.legs);
        let order = self.order.min(rhs.order);
        let legs = self.legs;
        let pairs: Vec<(Vec<Mono>, HSeries, Vec<Mono>, HSeries)> = self
            .terms
            .iter()
            .flat_map(|(k1, c1)| {
                rhs.terms
                    .iter()
                    .map(move |(k2, c2)| (k1.clone(), c1.clone(), k2.clone(), c2.clone()))
            })
            .collect();
        exec::map_reduce(
            pairs,
            || Self::zero(legs, order),
            |(k1, c1, k2, c2)| {
                let mut partial: Vec<(Vec<Mono>, HSeries)> =
                    vec![(Vec::with_capacity(legs), c1.truncate(order).mul(&c2.truncate(order)))];
                for leg in 0..legs {
                    let prod = mono_product(k1[leg], k2[leg], order);
                    let mut next = Vec::with_capacity(partial.len() * prod.num_terms());
                    for (m, c) in prod.terms() {
                        for (key, coeff) in &partial {
                            let mut key2 = key.clone();
                            key2.push(*m);
                            next.push((key2, coeff.mul(c)));
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                let mut out = Self::zero(legs, order);
                for (key, coeff) in partial {
                    out.add_term(key, coeff);
                }
                out
            },
            |a, b| a.add(&b),
        )
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Swap the two legs of a 2-leg element.
    pub fn flip(&self) -> Self {
        assert_eq!(self.legs, 2);
        let mut out = Self::zero(2, self.order);
        for (k, c) in &self.terms {
            out.add_term(vec![k[1], k[0]], c.clone());
        }
        out
    }

    /// Reindex legs: the component on leg i moves to leg perm[i].
    pub fn permute_legs(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.legs);
        let mut out = Self::zero(self.legs, self.order);
        for (k, c) in &self.terms {
            let mut key = vec![Mono::ONE; self.legs];
            for (i, m) in k.iter().enumerate() {
                key[perm[i]] = *m;
            }
            out.add_term(key, c.clone());
        }
        out
    }

    /// Multiply consecutive leg groups into single legs; `groups` lists the
    /// group sizes left to right and must sum to the leg count. Within a
    /// group the legs are multiplied in ascending order.
    pub fn contract(&self, groups: &[usize]) -> Self {
        assert_eq!(groups.iter().sum::<usize>(), self.legs);
        let out_legs = groups.len();
        let order = self.order;
        let items: Vec<(Vec<Mono>, HSeries)> =
            self.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        exec::map_reduce(
            items,
            || Self::zero(out_legs, order),
            |(k, c)| {
                // per group: product of the group's monomials, left to right
                let mut partial: Vec<(Vec<Mono>, HSeries)> = vec![(Vec::new(), c)];
                let mut offset = 0;
                for &g in groups {
                    let mut acc = AlgebraElement::one(order);
                    for leg in offset..offset + g {
                        acc = acc.mul(&AlgebraElement::from_mono(k[leg], HSeries::one(order)));
                    }
                    offset += g;
                    let mut next = Vec::with_capacity(partial.len() * acc.num_terms().max(1));
                    for (m, mc) in acc.terms() {
                        for (key, coeff) in &partial {
                            let mut key2 = key.clone();
                            key2.push(*m);
                            next.push((key2, coeff.mul(mc)));
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                let mut out = Self::zero(out_legs, order);
                for (key, coeff) in partial {
                    out.add_term(key, coeff);
                }
                out
            },
            |a, b| a.add(&b),
        )
    }

    /// Like `contract`, but legs within each group multiply right to left,
    /// matching the bead convention of reading products along a strand.
    pub fn contract_rtl(&self, groups: &[usize]) -> Self {
        let mut perm = vec![0usize; self.legs];
        let mut offset = 0;
        for &g in groups {
            for k in 0..g {
                perm[offset + k] = offset + g - 1 - k;
            }
            offset += g;
        }
        self.permute_legs(&perm).contract(groups)
    }

    /// Collapse a 1-leg tensor back to an algebra element.
    pub fn into_algebra(&self) -> AlgebraElement {
        assert_eq!(self.legs, 1);
        let mut out = AlgebraElement::zero(self.order);
        for (k, c) in &self.terms {
            out.add_term(k[0], c.clone());
        }
        out
    }

    /// Inverse of a tensor whose h⁰ part is the identity, by the Neumann
    /// series; the result is certified by multiplying back.
    pub fn invert_unit(&self) -> Result<Self> {
        let id = Self::one(self.legs, self.order);
        let w = id.sub(self);
        // require h-valuation ≥ 1
        for c in w.terms.values() {
            if !c.coeff(0)?.is_zero() {
                return Err(Error::NonInvertibleConstant);
            }
        }
        let mut acc = id.clone();
        let mut pw = id.clone();
        for _ in 1..=self.order {
            pw = pw.mul(&w);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        let check = self.mul(&acc);
        if !check.sub(&id).is_zero() {
            return Err(Error::internal("tensor inversion", "certification product is not 1"));
        }
        Ok(acc)
    }

    /// exp of a tensor with h-valuation ≥ 1.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        for c in self.terms.values() {
            if !c.coeff(0)?.is_zero() {
                return Err(Error::ExpNonzeroConstant);
            }
        }
        let mut acc = Self::one(self.legs, self.order);
        let mut pw = Self::one(self.legs, self.order);
        for k in 1..=self.order {
            pw = pw.mul(self);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw.scale_rat(&crate::rat::factorial(k as u32).recip()));
        }
        Ok(acc)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElement[{} legs, {} terms, order {}]", self.legs, self.terms.len(), self.order)
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rmatrix;

    #[test]
    fn embed_and_flip() {
        let n = 3;
        let r = rmatrix::r_matrix(n);
        let r13 = TensorElement::embed_pair(&r, 3, 1, 3);
        let r31 = TensorElement::embed_pair(&r, 3, 3, 1);
        // flipping legs 1 and 3 of R13 gives R31
        let perm = vec![2usize, 1, 0];
        assert_eq!(r13.permute_legs(&perm), r31);
    }

    #[test]
    fn contract_disjoint_product() {
        // (x ⊗ 1) · (1 ⊗ y) contracted to one leg equals x·y
        let n = 4;
        let x = AlgebraElement::generator('x', n);
        let y = AlgebraElement::generator('y', n);
        let t = TensorElement::embed(&x, 2, 1).mul(&TensorElement::embed(&y, 2, 2));
        let c = t.contract(&[2]).into_algebra();
        assert_eq!(c, x.mul(&y));
    }
}
