//! The degree-n divided-powers algebra of the free algebra: canonical basis
//! elements 1^(n-|a|) x w1^(a1) x ... x wh^(ah), integer combinations, the
//! star product, and divided powers of free-algebra elements.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::words::Word;

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        // numerator stays divisible at every step
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// (e1 + ... + ek)! / (e1! ... ek!) as a product of binomials.
fn multinomial(exps: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    let mut cum = 0u64;
    for &e in exps {
        cum += e as u64;
        acc *= binomial(cum, e as u64);
    }
    acc
}

/// A canonical basis element of the degree-n component: a sorted list of
/// (word, multiplicity) parts with pairwise distinct words of positive
/// degree and total multiplicity at most n. The divided power of 1 filling
/// the weight up to n is implicit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GammaBasisElem {
    n: usize,
    parts: Vec<(Word, u32)>,
}

impl GammaBasisElem {
    /// The element 1^(n), the star-product identity.
    pub fn unit(n: usize) -> Self {
        GammaBasisElem {
            n,
            parts: Vec::new(),
        }
    }

    /// Builds a basis element from distinct positive-degree words.
    pub fn new(n: usize, mut parts: Vec<(Word, u32)>) -> Result<Self> {
        parts.retain(|&(_, m)| m > 0);
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in parts.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::Domain(format!(
                    "duplicate word {} in basis element",
                    pair[0].0
                )));
            }
        }
        if parts.iter().any(|(w, _)| w.is_empty()) {
            return Err(Error::EmptyWord);
        }
        let weight: usize = parts.iter().map(|&(_, m)| m as usize).sum();
        if weight > n {
            return Err(Error::WeightExceedsDegree { weight, n });
        }
        Ok(GammaBasisElem { n, parts })
    }

    /// The generator 1^(n-i) x w^(i).
    pub fn generator(n: usize, i: usize, word: &Word) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        if i < 1 || i > n {
            return Err(Error::IndexOutOfRange { i, n });
        }
        GammaBasisElem::new(n, vec![(word.clone(), i as u32)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[(Word, u32)] {
        &self.parts
    }

    /// Total multiplicity of the explicit parts.
    pub fn weight(&self) -> usize {
        self.parts.iter().map(|&(_, m)| m as usize).sum()
    }

    /// Exponent of the implicit divided power of 1.
    pub fn unit_exponent(&self) -> usize {
        self.n - self.weight()
    }

    pub fn max_letter(&self) -> u8 {
        self.parts
            .iter()
            .map(|(w, _)| w.max_letter())
            .max()
            .unwrap_or(0)
    }
}

/// An integer combination of basis elements, all of the same degree n.
/// The term map never holds zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaElem {
    n: usize,
    terms: BTreeMap<GammaBasisElem, BigInt>,
}

impl GammaElem {
    pub fn zero(n: usize) -> Self {
        GammaElem {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize) -> Self {
        GammaElem::from_basis(GammaBasisElem::unit(n))
    }

    pub fn from_basis(b: GammaBasisElem) -> Self {
        let n = b.n;
        let mut terms = BTreeMap::new();
        terms.insert(b, BigInt::one());
        GammaElem { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GammaBasisElem, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &GammaBasisElem) -> BigInt {
        self.terms.get(b).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn max_letter(&self) -> u8 {
        self.terms.keys().map(|b| b.max_letter()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, b: GammaBasisElem, c: BigInt) {
        assert_eq!(b.n, self.n, "degree mismatch in add_term");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(b) {
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

    pub fn add(&self, other: &GammaElem) -> GammaElem {
        assert_eq!(self.n, other.n, "degree mismatch in add");
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GammaElem) -> GammaElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GammaElem {
        GammaElem {
            n: self.n,
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> GammaElem {
        if k.is_zero() {
            return GammaElem::zero(self.n);
        }
        GammaElem {
            n: self.n,
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect(),
        }
    }

    /// Groups equal words of a raw part list into a single scaled basis
    /// term. Colliding divided powers of the same word w contribute
    /// w^(i) x w^(j) = C(i+j, i) w^(i+j), so the merged term carries the
    /// product of multinomial coefficients. Returns zero when the total
    /// multiplicity exceeds n (the implicit power of 1 would be negative).
    pub fn merge_parts(n: usize, raw: &[(Word, u32)]) -> GammaElem {
        let mut groups: BTreeMap<&Word, Vec<u32>> = BTreeMap::new();
        let mut weight = 0usize;
        for (w, m) in raw {
            debug_assert!(*m >= 1, "zero multiplicity part");
            if *m == 0 {
                continue;
            }
            debug_assert!(!w.is_empty(), "empty word part");
            groups.entry(w).or_default().push(*m);
            weight += *m as usize;
        }
        if weight > n {
            return GammaElem::zero(n);
        }
        let mut coeff = BigInt::one();
        let mut parts = Vec::with_capacity(groups.len());
        for (w, exps) in groups {
            coeff *= multinomial(&exps);
            parts.push((w.clone(), exps.iter().sum()));
        }
        let basis = GammaBasisElem { n, parts };
        let mut out = GammaElem::zero(n);
        out.add_term(basis, coeff);
        out
    }

    /// The star product, by bilinear extension of the product formula: for
    /// basis elements with parts r1^(a1)..rh^(ah) and s1^(b1)..sk^(bk), sum
    /// over all nonnegative integer matrices (gamma_ij) for 0 <= i <= h,
    /// 0 <= j <= k (position (0,0) unused) with row sums a_i and column
    /// sums b_j; each matrix contributes the merge of
    /// { r_i^(gamma_i0), s_j^(gamma_0j), (r_i s_j)^(gamma_ij) }.
    /// Matrices of total weight above n vanish in the merge.
    pub fn star(&self, other: &GammaElem) -> Result<GammaElem> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch(self.n, other.n));
        }
        let mut out = GammaElem::zero(self.n);
        for (bu, cu) in &self.terms {
            for (bv, cv) in &other.terms {
                let scale = cu * cv;
                star_basis_into(&mut out, bu, bv, &scale);
            }
        }
        Ok(out)
    }

    /// The n-th divided power of a free-algebra element, expanded in the
    /// canonical basis: for f = sum c_w w, sum over all multi-indices xi on
    /// the support with |xi| = n of (prod c_w^xi_w) times the basis element
    /// with parts (w, xi_w); parts on the empty word join the implicit
    /// power of 1.
    pub fn gamma_power(f: &FreeElem, n: usize) -> GammaElem {
        if n == 0 {
            return GammaElem::unit(0);
        }
        let support: Vec<(&Word, &BigInt)> = f.terms.iter().collect();
        let mut out = GammaElem::zero(n);
        let mut exps = vec![0u32; support.len()];
        compositions(n as u32, 0, &mut exps, &mut |exps| {
            let mut coeff = BigInt::one();
            let mut parts = Vec::new();
            for (slot, &(w, c)) in support.iter().enumerate() {
                let e = exps[slot];
                if e == 0 {
                    continue;
                }
                coeff *= c.pow(e);
                if !w.is_empty() {
                    parts.push((w.clone(), e));
                }
            }
            let basis = GammaBasisElem { n, parts };
            out.add_term(basis, coeff);
        });
        out
    }
}

/// All ways to write `total` as an ordered sum over the slots.
fn compositions(total: u32, slot: usize, exps: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if exps.is_empty() {
        if total == 0 {
            visit(&[]);
        }
        return;
    }
    if slot + 1 == exps.len() {
        exps[slot] = total;
        visit(exps);
        return;
    }
    for e in 0..=total {
        exps[slot] = e;
        compositions(total - e, slot + 1, exps, visit);
    }
}

fn star_basis_into(out: &mut GammaElem, bu: &GammaBasisElem, bv: &GammaBasisElem, scale: &BigInt) {
    let n = out.n;
    let alpha: Vec<u32> = bu.parts.iter().map(|&(_, m)| m).collect();
    let beta: Vec<u32> = bv.parts.iter().map(|&(_, m)| m).collect();
    let h = alpha.len();
    let k = beta.len();
    let mut inner = vec![0u32; h * k];
    let mut col_rem: Vec<u32> = beta.clone();
    let mut row_left = vec![0u32; h];
    gamma_matrices(
        &alpha,
        &mut inner,
        &mut col_rem,
        &mut row_left,
        k,
        0,
        0,
        if h > 0 { alpha[0] } else { 0 },
        &mut |inner, row_left, col_left| {
            let mut raw: Vec<(Word, u32)> = Vec::new();
            for (i, &(ref r, _)) in bu.parts.iter().enumerate() {
                if row_left[i] > 0 {
                    raw.push((r.clone(), row_left[i]));
                }
            }
            for (j, &(ref s, _)) in bv.parts.iter().enumerate() {
                if col_left[j] > 0 {
                    raw.push((s.clone(), col_left[j]));
                }
            }
            for (i, &(ref r, _)) in bu.parts.iter().enumerate() {
                for (j, &(ref s, _)) in bv.parts.iter().enumerate() {
                    let g = inner[i * k + j];
                    if g > 0 {
                        raw.push((r.concat(s), g));
                    }
                }
            }
            let merged = GammaElem::merge_parts(n, &raw);
            for (b, c) in &merged.terms {
                out.add_term(b.clone(), c * scale);
            }
        },
    );
}

/// Backtracking over the inner h-by-k block of the product-formula matrix,
/// cell by cell in row-major order. Row i keeps `row_rem` of its budget
/// a_i; whatever remains at the end of the row is gamma_i0. Column budgets
/// (remaining b_j) prune candidates; what remains of column j at the end is
/// gamma_0j.
#[allow(clippy::too_many_arguments)]
fn gamma_matrices(
    alpha: &[u32],
    inner: &mut Vec<u32>,
    col_rem: &mut Vec<u32>,
    row_left: &mut Vec<u32>,
    k: usize,
    i: usize,
    j: usize,
    row_rem: u32,
    visit: &mut impl FnMut(&[u32], &[u32], &[u32]),
) {
    let h = alpha.len();
    if i == h {
        visit(inner, row_left, col_rem);
        return;
    }
    if j == k {
        row_left[i] = row_rem;
        let next_rem = if i + 1 < h { alpha[i + 1] } else { 0 };
        gamma_matrices(alpha, inner, col_rem, row_left, k, i + 1, 0, next_rem, visit);
        return;
    }
    let max = row_rem.min(col_rem[j]);
    for g in 0..=max {
        inner[i * k + j] = g;
        col_rem[j] -= g;
        gamma_matrices(alpha, inner, col_rem, row_left, k, i, j + 1, row_rem - g, visit);
        col_rem[j] += g;
    }
    inner[i * k + j] = 0;
}

/// An element of the free algebra: an integer combination of words. The
/// empty word carries the constant term.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FreeElem {
    terms: BTreeMap<Word, BigInt>,
}

impl FreeElem {
    pub fn zero() -> Self {
        FreeElem::default()
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        FreeElem { terms }
    }

    pub fn constant(c: BigInt) -> Self {
        let mut out = FreeElem::zero();
        out.add_term(Word::empty(), c);
        out
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
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

    pub fn add(&self, other: &FreeElem) -> FreeElem {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> FreeElem {
        if k.is_zero() {
            return FreeElem::zero();
        }
        FreeElem {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn max_letter(&self) -> u8 {
        self.terms.keys().map(|w| w.max_letter()).max().unwrap_or(0)
    }
}

/// All basis elements of weight at most n over words of degree 1..=max_degree
/// in m letters, in ascending order. Exhaustive test drivers and the CLI
/// self checks iterate this.
pub fn basis_elements(n: usize, m: u8, max_degree: usize) -> Vec<GammaBasisElem> {
    let words = crate::words::words_up_to(m, max_degree);
    let mut out = Vec::new();
    let mut parts: Vec<(Word, u32)> = Vec::new();
    fn rec(
        n: usize,
        words: &[Word],
        from: usize,
        budget: u32,
        parts: &mut Vec<(Word, u32)>,
        out: &mut Vec<GammaBasisElem>,
    ) {
        out.push(GammaBasisElem {
            n,
            parts: parts.clone(),
        });
        for idx in from..words.len() {
            for mult in 1..=budget {
                parts.push((words[idx].clone(), mult));
                rec(n, words, idx + 1, budget - mult, parts, out);
                parts.pop();
            }
        }
    }
    rec(n, &words, 0, n as u32, &mut parts, &mut out);
    out.sort();
    out
}

/// A uniformly sampled basis element with weight <= n and words of degree
/// <= max_degree (sampled part by part, not uniform over the basis).
pub fn random_basis_elem(
    rng: &mut impl Rng,
    n: usize,
    m: u8,
    max_degree: usize,
) -> GammaBasisElem {
    loop {
        let weight = rng.gen_range(0..=n as u32);
        let mut parts: Vec<(Word, u32)> = Vec::new();
        let mut left = weight;
        while left > 0 {
            let mult = rng.gen_range(1..=left);
            let deg = rng.gen_range(1..=max_degree);
            let letters: Vec<u8> = (0..deg).map(|_| rng.gen_range(1..=m)).collect();
            parts.push((Word::from_letters(&letters), mult));
            left -= mult;
        }
        if let Ok(b) = GammaBasisElem::new(n, parts) {
            return b;
        }
        // duplicate word sampled; retry
    }
}

/// A random integer combination of sampled basis elements.
pub fn random_elem(
    rng: &mut impl Rng,
    n: usize,
    m: u8,
    max_degree: usize,
    max_terms: usize,
) -> GammaElem {
    let mut out = GammaElem::zero(n);
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let b = random_basis_elem(rng, n, m, max_degree);
        let c = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        out.add_term(b, BigInt::from(c));
    }
    out
}
