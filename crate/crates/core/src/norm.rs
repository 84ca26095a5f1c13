//! Generic matrices and the norm map: the universal representation sends
//! the letter x_k to the generic matrix xi_k whose entries are independent
//! variables; a basis element maps to a coefficient of a multi-parameter
//! characteristic polynomial, landing in the subring of conjugation
//! invariants generated by the e_i of word images.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::GenPoly;
use crate::error::{Error, Result};
use crate::exact::{Matrix, MultiPoly, PolyMatrix, RatMatrix, VarId};
use crate::gamma::{GammaBasisElem, GammaElem};
use crate::words::Word;

/// A polynomial in the generic-matrix entries known to lie in the invariant
/// subring (constructed through the e_i of word images or the norm map).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantPoly(MultiPoly);

impl InvariantPoly {
    pub fn poly(&self) -> &MultiPoly {
        &self.0
    }

    pub fn into_poly(self) -> MultiPoly {
        self.0
    }

    pub fn mul(&self, other: &InvariantPoly) -> InvariantPoly {
        InvariantPoly(self.0.mul(&other.0))
    }

    pub fn add(&self, other: &InvariantPoly) -> InvariantPoly {
        InvariantPoly(self.0.add(&other.0))
    }
}

impl std::fmt::Display for InvariantPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The m generic n-by-n matrices, with their compounds cached for
/// characteristic-coefficient evaluation along words. Word images and
/// characteristic coefficients are memoized behind locks; results do not
/// depend on evaluation order, so the context stays shareable.
#[derive(Debug)]
pub struct GenericMatrixContext {
    n: usize,
    m: u8,
    xi: Vec<PolyMatrix>,
    // compounds[k][i-1] is the i-th compound of xi_k
    compounds: Vec<Vec<PolyMatrix>>,
    word_images: Mutex<HashMap<Word, PolyMatrix>>,
    char_values: Mutex<HashMap<(Word, usize), MultiPoly>>,
}

impl GenericMatrixContext {
    pub fn new(n: usize, m: u8) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        assert!(m >= 1, "alphabet must be nonempty");
        let xi: Vec<PolyMatrix> = (1..=m as u32)
            .map(|k| {
                Matrix::from_fn(n, n, |i, j| {
                    MultiPoly::var(VarId::xi(k, i as u32 + 1, j as u32 + 1))
                })
            })
            .collect();
        let compounds = xi
            .iter()
            .map(|x| {
                (1..=n)
                    .map(|i| x.compound(i).expect("square generic matrix"))
                    .collect()
            })
            .collect();
        GenericMatrixContext {
            n,
            m,
            xi,
            compounds,
            word_images: Mutex::new(HashMap::new()),
            char_values: Mutex::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    /// The generic matrix for letter k (1-based).
    pub fn generic_matrix(&self, k: u8) -> Result<&PolyMatrix> {
        if k < 1 || k > self.m {
            return Err(Error::LetterOutOfRange {
                letter: k as usize,
                m: self.m as usize,
            });
        }
        Ok(&self.xi[k as usize - 1])
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        for &l in w.letters() {
            if l > self.m {
                return Err(Error::LetterOutOfRange {
                    letter: l as usize,
                    m: self.m as usize,
                });
            }
        }
        Ok(())
    }

    /// The image of a word under the universal representation: the ordered
    /// product of generic matrices; the empty word maps to the identity.
    /// Prefix products are memoized, so families of related words cost one
    /// matrix multiplication per new letter.
    pub fn eval_word(&self, w: &Word) -> Result<PolyMatrix> {
        self.check_word(w)?;
        let mut cache = self.word_images.lock().unwrap();
        let mut acc = PolyMatrix::identity(self.n);
        let mut start = 0;
        for l in (1..=w.degree()).rev() {
            let prefix = Word::from_letters(&w.letters()[..l]);
            if let Some(hit) = cache.get(&prefix) {
                acc = hit.clone();
                start = l;
                break;
            }
        }
        for idx in start..w.degree() {
            let letter = w.letters()[idx] as usize;
            acc = acc.mul(&self.xi[letter - 1])?;
            cache.insert(Word::from_letters(&w.letters()[..=idx]), acc.clone());
        }
        Ok(acc)
    }

    /// e_i of the word image. Computed as the trace of the product of the
    /// letter compounds, which equals the sum of principal i-by-i minors of
    /// the product matrix (compounds are multiplicative); this keeps the
    /// cost linear in the word instead of expanding minors of huge entries.
    pub fn char_gen(&self, w: &Word, i: usize) -> Result<InvariantPoly> {
        self.check_word(w)?;
        if i < 1 || i > self.n {
            return Err(Error::IndexOutOfRange { i, n: self.n });
        }
        if let Some(hit) = self.char_values.lock().unwrap().get(&(w.clone(), i)) {
            return Ok(InvariantPoly(hit.clone()));
        }
        let size = self.compounds[0][i - 1].rows();
        let mut acc = PolyMatrix::identity(size);
        for &l in w.letters() {
            acc = acc.mul(&self.compounds[l as usize - 1][i - 1])?;
        }
        let value = acc.trace()?;
        self.char_values
            .lock()
            .unwrap()
            .insert((w.clone(), i), value.clone());
        Ok(InvariantPoly(value))
    }

    /// The norm of a basis element 1^(n-|a|) x r_1^(a_1) .. r_h^(a_h): the
    /// coefficient of t_1^(a_1) .. t_h^(a_h) in det(I + sum_s t_s xi(r_s)).
    /// Single-part elements short-circuit through char_gen, the single
    /// variable case of the same expansion.
    pub fn norm_basis(&self, b: &GammaBasisElem) -> Result<InvariantPoly> {
        if b.n() != self.n {
            return Err(Error::DegreeMismatch(b.n(), self.n));
        }
        if b.parts().len() == 1 {
            let (w, a) = &b.parts()[0];
            return self.char_gen(w, *a as usize);
        }
        self.norm_basis_by_extraction(b)
    }

    /// The defining computation, with no short-circuit: the coefficient of
    /// t_1^(a_1) .. t_h^(a_h) in det(I + sum_s t_s X_s) over Z[xi][t].
    /// Expanding det(I + M) = sum over principal minors of M and noting M
    /// is linear in t, only minors of size |a| can carry the target
    /// t-monomial, so the expansion forms exactly the matching terms and
    /// the componentwise degree truncation is built in.
    pub fn norm_basis_by_extraction(&self, b: &GammaBasisElem) -> Result<InvariantPoly> {
        if b.n() != self.n {
            return Err(Error::DegreeMismatch(b.n(), self.n));
        }
        let caps: Vec<u32> = b.parts().iter().map(|&(_, a)| a).collect();
        let images: Vec<PolyMatrix> = b
            .parts()
            .iter()
            .map(|(w, _)| self.eval_word(w))
            .collect::<Result<_>>()?;
        let weight: usize = caps.iter().map(|&a| a as usize).sum();
        // the t-index sequence multiset: index s appears a_s times
        let mut pool: Vec<(usize, u32)> = caps.iter().copied().enumerate().collect();
        let mut out = MultiPoly::zero();
        for rows in (0..self.n).combinations(weight) {
            for (perm, sign) in signed_permutations(weight) {
                let mut seq = Vec::with_capacity(weight);
                index_sequences(&mut pool, &mut seq, weight, &mut |seq| {
                    let mut term = MultiPoly::one();
                    for (p, &s) in seq.iter().enumerate() {
                        term = term.mul(images[s].get(rows[p], rows[perm[p]]));
                    }
                    out = if sign {
                        out.sub(&term)
                    } else {
                        out.add(&term)
                    };
                });
            }
        }
        Ok(InvariantPoly(out))
    }

    /// Linear extension of `norm_basis`.
    pub fn norm(&self, u: &GammaElem) -> Result<InvariantPoly> {
        if u.n() != self.n {
            return Err(Error::DegreeMismatch(u.n(), self.n));
        }
        let mut acc = MultiPoly::zero();
        for (b, c) in u.terms() {
            acc = acc.add(&self.norm_basis(b)?.0.scale(c));
        }
        Ok(InvariantPoly(acc))
    }

    /// Symbol-wise evaluation of a generator polynomial: E(i, w) goes to
    /// e_i(xi(w)) and products multiply in the commutative target. This is
    /// the decomposition route to the same invariant.
    pub fn norm_genpoly(&self, g: &GenPoly) -> Result<InvariantPoly> {
        if g.n() != self.n {
            return Err(Error::DegreeMismatch(g.n(), self.n));
        }
        let mut acc = MultiPoly::zero();
        for (seq, c) in g.terms() {
            let mut term = MultiPoly::one();
            for sym in seq {
                term = term.mul(&self.char_gen(&sym.word, sym.i)?.0);
            }
            acc = acc.add(&term.scale(c));
        }
        Ok(InvariantPoly(acc))
    }

    /// Probabilistic conjugation-invariance check: evaluates the polynomial
    /// at seeded random integer specializations of the generic matrices and
    /// at their conjugates by random invertible rational g, and compares
    /// exactly. Singular samples of g are re-drawn a bounded number of
    /// times.
    pub fn check_conj_invariance(
        &self,
        p: &MultiPoly,
        trials: usize,
        seed: u64,
    ) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let mats: Vec<RatMatrix> = (0..self.m)
                .map(|_| {
                    Matrix::from_fn(self.n, self.n, |_, _| {
                        BigRational::from_integer(rng.gen_range(-3i64..=3).into())
                    })
                })
                .collect();
            let g = sample_invertible(&mut rng, self.n, 16)?;
            let ginv = g.inverse()?;
            let mut plain = BTreeMap::new();
            let mut conj = BTreeMap::new();
            for (k, mat) in mats.iter().enumerate() {
                let conj_mat = g.mul(mat)?.mul(&ginv)?;
                for i in 0..self.n {
                    for j in 0..self.n {
                        let v = VarId::xi(k as u32 + 1, i as u32 + 1, j as u32 + 1);
                        plain.insert(v, mat.get(i, j).clone());
                        conj.insert(v, conj_mat.get(i, j).clone());
                    }
                }
            }
            if p.eval(&plain)? != p.eval(&conj)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn sample_invertible(rng: &mut ChaCha8Rng, n: usize, retries: usize) -> Result<RatMatrix> {
    for _ in 0..retries {
        let g: RatMatrix = Matrix::from_fn(n, n, |_, _| {
            BigRational::from_integer(rng.gen_range(-3i64..=3).into())
        });
        if !Zero::is_zero(&g.det().expect("square")) {
            return Ok(g);
        }
    }
    Err(Error::Singular)
}

/// All permutations of 0..w with their parity (true = odd).
fn signed_permutations(w: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    for perm in (0..w).permutations(w) {
        let mut inversions = 0usize;
        for i in 0..w {
            for j in i + 1..w {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        out.push((perm, inversions % 2 == 1));
    }
    if w == 0 {
        // permutations(0) yields one empty permutation already
        debug_assert_eq!(out.len(), 1);
    }
    out
}

/// Distinct sequences drawing index s exactly its multiplicity many times.
fn index_sequences(
    pool: &mut Vec<(usize, u32)>,
    seq: &mut Vec<usize>,
    total: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if seq.len() == total {
        visit(seq);
        return;
    }
    for slot in 0..pool.len() {
        if pool[slot].1 == 0 {
            continue;
        }
        pool[slot].1 -= 1;
        seq.push(pool[slot].0);
        index_sequences(pool, seq, total, visit);
        seq.pop();
        pool[slot].1 += 1;
    }
}
