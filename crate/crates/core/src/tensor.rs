//! Symmetric tensors of degree n over the free algebra: the n-fold tensor
//! power with tuples of words as basis, restricted to permutation-invariant
//! elements. An independent model of the divided-powers algebra used as a
//! brute-force correctness oracle for the star product.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gamma::{FreeElem, GammaElem};
use crate::words::Word;

/// A permutation-invariant element of the n-fold tensor power. Keys are
/// n-tuples of words; invariance is checked on construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymTensor {
    n: usize,
    terms: BTreeMap<Vec<Word>, BigInt>,
}

impl SymTensor {
    fn from_terms(n: usize, terms: BTreeMap<Vec<Word>, BigInt>) -> Self {
        let t = SymTensor { n, terms };
        assert!(t.is_invariant(), "tensor is not S_n-invariant");
        t
    }

    pub fn zero(n: usize) -> Self {
        SymTensor {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// 1 x 1 x ... x 1, the multiplicative identity.
    pub fn unit(n: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![Word::empty(); n], BigInt::from(1));
        SymTensor { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &BigInt)> {
        self.terms.iter()
    }

    /// Adjacent transpositions generate the symmetric group, so checking
    /// those suffices.
    fn is_invariant(&self) -> bool {
        for (tuple, coeff) in &self.terms {
            for slot in 0..self.n.saturating_sub(1) {
                let mut swapped = tuple.clone();
                swapped.swap(slot, slot + 1);
                if self.terms.get(&swapped) != Some(coeff) {
                    return false;
                }
            }
        }
        true
    }

    fn add_term(terms: &mut BTreeMap<Vec<Word>, BigInt>, key: Vec<Word>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Slot-wise concatenation product: the coefficient of a tuple
    /// (w_1..w_n) collects s(u) * t(v) over all slot-wise factorizations
    /// w_i = u_i v_i. Computed in the forward direction.
    pub fn mul(&self, other: &SymTensor) -> Result<SymTensor> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch(self.n, other.n));
        }
        let mut terms = BTreeMap::new();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let key: Vec<Word> = u.iter().zip(v).map(|(a, b)| a.concat(b)).collect();
                Self::add_term(&mut terms, key, cu * cv);
            }
        }
        Ok(SymTensor::from_terms(self.n, terms))
    }

    pub fn add(&self, other: &SymTensor) -> Result<SymTensor> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch(self.n, other.n));
        }
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            Self::add_term(&mut terms, k.clone(), c.clone());
        }
        Ok(SymTensor::from_terms(self.n, terms))
    }

    pub fn scale(&self, k: &BigInt) -> SymTensor {
        if k.is_zero() {
            return SymTensor::zero(self.n);
        }
        SymTensor {
            n: self.n,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * k)).collect(),
        }
    }

    /// The image of a divided-powers element: a basis element with parts
    /// w1^(a1)..wh^(ah) maps to the sum, coefficient 1 each, of all
    /// distinct arrangements of the multiset {w1 x a1, ..., wh x ah,
    /// 1 x (n - weight)} into the n slots; extended linearly.
    pub fn embed(u: &GammaElem) -> SymTensor {
        let n = u.n();
        let mut terms = BTreeMap::new();
        for (basis, coeff) in u.terms() {
            let mut pool: Vec<(Word, u32)> = basis.parts().to_vec();
            let filler = basis.unit_exponent() as u32;
            if filler > 0 {
                // the empty word sorts first, keep the pool sorted anyway
                pool.insert(0, (Word::empty(), filler));
            }
            let mut slots: Vec<Word> = Vec::with_capacity(n);
            arrangements(&mut pool, &mut slots, n, &mut |tuple| {
                Self::add_term(&mut terms, tuple.to_vec(), coeff.clone());
            });
        }
        SymTensor::from_terms(n, terms)
    }

    /// f tensored with itself n times: the image of the n-th divided power
    /// of f under the embedding, computed without either.
    pub fn tensor_power(f: &FreeElem, n: usize) -> SymTensor {
        let support: Vec<(&Word, &BigInt)> = f.terms().collect();
        let mut terms = BTreeMap::new();
        let mut tuple: Vec<usize> = vec![0; n];
        fn rec(
            slot: usize,
            n: usize,
            support: &[(&Word, &BigInt)],
            tuple: &mut Vec<usize>,
            terms: &mut BTreeMap<Vec<Word>, BigInt>,
        ) {
            if slot == n {
                let key: Vec<Word> = tuple.iter().map(|&i| support[i].0.clone()).collect();
                let coeff = tuple
                    .iter()
                    .fold(BigInt::from(1), |acc, &i| acc * support[i].1);
                SymTensor::add_term(terms, key, coeff);
                return;
            }
            for i in 0..support.len() {
                tuple[slot] = i;
                rec(slot + 1, n, support, tuple, terms);
            }
        }
        if support.is_empty() {
            if n == 0 {
                return SymTensor::unit(0);
            }
            return SymTensor::zero(n);
        }
        rec(0, n, &support, &mut tuple, &mut terms);
        SymTensor::from_terms(n, terms)
    }
}

/// Distinct arrangements of a multiset of words into `slots_left` slots.
fn arrangements(
    pool: &mut Vec<(Word, u32)>,
    slots: &mut Vec<Word>,
    total: usize,
    visit: &mut impl FnMut(&[Word]),
) {
    if slots.len() == total {
        visit(slots);
        return;
    }
    for idx in 0..pool.len() {
        if pool[idx].1 == 0 {
            continue;
        }
        pool[idx].1 -= 1;
        slots.push(pool[idx].0.clone());
        arrangements(pool, slots, total, visit);
        slots.pop();
        pool[idx].1 += 1;
    }
}

/// Exact equality of symmetric tensors.
pub fn ts_equal(s: &SymTensor, t: &SymTensor) -> bool {
    s == t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::{basis_elements, random_elem, GammaBasisElem};
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(letters: &[u8]) -> Word {
        Word::from_letters(letters)
    }

    fn gen(n: usize, i: usize, letters: &[u8]) -> GammaElem {
        GammaElem::from_basis(GammaBasisElem::generator(n, i, &w(letters)).unwrap())
    }

    fn tensor(n: usize, entries: &[(&[&[u8]], i64)]) -> SymTensor {
        let mut terms = BTreeMap::new();
        for (tuple, c) in entries {
            let key: Vec<Word> = tuple
                .iter()
                .map(|ls| {
                    if ls.is_empty() {
                        Word::empty()
                    } else {
                        w(ls)
                    }
                })
                .collect();
            assert_eq!(key.len(), n);
            terms.insert(key, BigInt::from(*c));
        }
        SymTensor::from_terms(n, terms)
    }

    #[test]
    fn embed_generator_two_arrangements() {
        let t = SymTensor::embed(&gen(2, 1, &[1]));
        assert_eq!(t, tensor(2, &[(&[&[1], &[]], 1), (&[&[], &[1]], 1)]));
    }

    #[test]
    fn embed_full_power_single_arrangement() {
        let t = SymTensor::embed(&gen(2, 2, &[1]));
        assert_eq!(t, tensor(2, &[(&[&[1], &[1]], 1)]));
    }

    #[test]
    fn embed_two_distinct_parts() {
        let u = GammaElem::from_basis(
            GammaBasisElem::new(2, vec![(w(&[1]), 1), (w(&[2]), 1)]).unwrap(),
        );
        assert_eq!(
            SymTensor::embed(&u),
            tensor(2, &[(&[&[1], &[2]], 1), (&[&[2], &[1]], 1)])
        );
    }

    #[test]
    fn mul_matches_hand_expansion() {
        // (x1 (x) 1 + 1 (x) x1)(x2 (x) 1 + 1 (x) x2)
        let s = SymTensor::embed(&gen(2, 1, &[1]));
        let t = SymTensor::embed(&gen(2, 1, &[2]));
        let expected = tensor(
            2,
            &[
                (&[&[1], &[2]], 1),
                (&[&[2], &[1]], 1),
                (&[&[1, 2], &[]], 1),
                (&[&[], &[1, 2]], 1),
            ],
        );
        assert_eq!(s.mul(&t).unwrap(), expected);
    }

    #[test]
    fn unit_is_identity() {
        let one = SymTensor::unit(3);
        let s = SymTensor::embed(&gen(3, 2, &[1, 2]));
        assert_eq!(one.mul(&s).unwrap(), s);
        assert_eq!(s.mul(&one).unwrap(), s);
    }

    #[test]
    fn mul_preserves_total_degree() {
        let s = SymTensor::embed(&gen(2, 1, &[1]));
        let t = SymTensor::embed(&gen(2, 2, &[2, 1]));
        let ds: Vec<usize> = s
            .terms()
            .map(|(k, _)| k.iter().map(|x| x.degree()).sum())
            .collect();
        let dt: Vec<usize> = t
            .terms()
            .map(|(k, _)| k.iter().map(|x| x.degree()).sum())
            .collect();
        for (k, _) in s.mul(&t).unwrap().terms() {
            let d: usize = k.iter().map(|x| x.degree()).sum();
            assert_eq!(d, ds[0] + dt[0]);
        }
    }

    #[test]
    fn ts_equal_examples() {
        let s = SymTensor::embed(&gen(2, 1, &[1]));
        assert!(ts_equal(&s, &s));
        let bumped = s
            .add(&tensor(2, &[(&[&[1], &[1]], 1)]))
            .unwrap();
        assert!(!ts_equal(&s, &bumped));
    }

    #[test]
    fn embed_is_injective_on_small_basis() {
        for n in 1..=3usize {
            let all = basis_elements(n, 2, 3);
            let mut seen = BTreeMap::new();
            for b in all {
                let t = SymTensor::embed(&GammaElem::from_basis(b.clone()));
                let key: Vec<(Vec<Word>, BigInt)> =
                    t.terms().map(|(k, c)| (k.clone(), c.clone())).collect();
                if let Some(prev) = seen.insert(key, b.clone()) {
                    panic!("embed collision: {prev:?} vs {b:?}");
                }
            }
        }
    }

    /// The master oracle property: embedding is a ring homomorphism.
    #[test]
    fn embed_is_multiplicative_exhaustive_small() {
        for n in 1..=3usize {
            let all = basis_elements(n, 2, 2);
            for bu in &all {
                for bv in &all {
                    let u = GammaElem::from_basis(bu.clone());
                    let v = GammaElem::from_basis(bv.clone());
                    let lhs = SymTensor::embed(&u.star(&v).unwrap());
                    let rhs = SymTensor::embed(&u).mul(&SymTensor::embed(&v)).unwrap();
                    assert_eq!(lhs, rhs, "pair {bu:?} {bv:?}");
                }
            }
        }
    }

    #[test]
    fn embed_is_multiplicative_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let u = random_elem(&mut rng, 3, 2, 3, 2);
            let v = random_elem(&mut rng, 3, 2, 3, 2);
            let lhs = SymTensor::embed(&u.star(&v).unwrap());
            let rhs = SymTensor::embed(&u).mul(&SymTensor::embed(&v)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gamma_power_embeds_to_tensor_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let mut f = FreeElem::zero();
            for _ in 0..rng.gen_range(1..=3) {
                let deg = rng.gen_range(0..=2);
                let letters: Vec<u8> = (0..deg).map(|_| rng.gen_range(1..=2)).collect();
                let word = if letters.is_empty() {
                    Word::empty()
                } else {
                    Word::from_letters(&letters)
                };
                f.add_term(word, BigInt::from(rng.gen_range(-2i64..=2)));
            }
            for n in 1..=3usize {
                let lhs = SymTensor::embed(&GammaElem::gamma_power(&f, n));
                let rhs = SymTensor::tensor_power(&f, n);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn embed_invariance_is_asserted() {
        // constructing through embed always yields invariant tensors
        let u = gen(3, 1, &[1, 2]);
        let t = SymTensor::embed(&u);
        assert!(t.terms().count() == 3);
        assert_eq!(t.terms().map(|(_, c)| c).sum::<BigInt>(), BigInt::from(3));
        assert!(BigInt::one() == t.terms().next().unwrap().1.clone());
    }
}
