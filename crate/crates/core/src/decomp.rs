//! Rewriting basis elements as integer polynomials in the generators
//! E(i, w) = 1^(n-i) x w^(i): decomposition by the product-formula
//! subtraction step, reduction of generator words to primitive ones via the
//! P_{h,k} plethysm polynomials, and cyclic normalization modulo
//! commutators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gamma::{GammaBasisElem, GammaElem};
use crate::symfun;
use crate::words::Word;

/// A single generator symbol E(i, w). Ordered by (i, word), which is the
/// canonical sort used after abelianization.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenSymbol {
    pub i: usize,
    pub word: Word,
}

impl fmt::Display for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({}; {})", self.i, self.word)
    }
}

/// An integer combination of ordered products of generator symbols: a
/// noncommutative polynomial in the E(i, w). In abelianized form every
/// product is sorted canonically and words are cyclic representatives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenPoly {
    n: usize,
    abelianized: bool,
    terms: BTreeMap<Vec<GenSymbol>, BigInt>,
}

impl GenPoly {
    pub fn zero(n: usize) -> Self {
        GenPoly {
            n,
            abelianized: false,
            terms: BTreeMap::new(),
        }
    }

    /// The empty product.
    pub fn unit(n: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), BigInt::one());
        GenPoly {
            n,
            abelianized: false,
            terms,
        }
    }

    pub fn from_symbol(n: usize, i: usize, word: &Word) -> Result<Self> {
        // validates the range exactly as the basis element would
        GammaBasisElem::generator(n, i, word)?;
        let mut terms = BTreeMap::new();
        terms.insert(
            vec![GenSymbol {
                i,
                word: word.clone(),
            }],
            BigInt::one(),
        );
        Ok(GenPoly {
            n,
            abelianized: false,
            terms,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_abelianized(&self) -> bool {
        self.abelianized
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<GenSymbol>, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, seq: Vec<GenSymbol>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(seq) {
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

    pub fn add(&self, other: &GenPoly) -> GenPoly {
        assert_eq!(self.n, other.n, "degree mismatch");
        assert_eq!(self.abelianized, other.abelianized, "form mismatch");
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GenPoly) -> GenPoly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> GenPoly {
        if k.is_zero() {
            return GenPoly {
                n: self.n,
                abelianized: self.abelianized,
                terms: BTreeMap::new(),
            };
        }
        GenPoly {
            n: self.n,
            abelianized: self.abelianized,
            terms: self.terms.iter().map(|(s, c)| (s.clone(), c * k)).collect(),
        }
    }

    /// Concatenation product of symbol sequences; sequences are re-sorted
    /// when either side is abelianized.
    pub fn mul(&self, other: &GenPoly) -> GenPoly {
        assert_eq!(self.n, other.n, "degree mismatch");
        let abelianized = self.abelianized || other.abelianized;
        let mut out = GenPoly {
            n: self.n,
            abelianized,
            terms: BTreeMap::new(),
        };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut seq = Vec::with_capacity(a.len() + b.len());
                seq.extend(a.iter().cloned());
                seq.extend(b.iter().cloned());
                if abelianized {
                    seq.sort();
                }
                out.add_term(seq, ca * cb);
            }
        }
        out
    }

    fn prepend_symbol(&self, sym: &GenSymbol) -> GenPoly {
        let mut out = GenPoly {
            n: self.n,
            abelianized: self.abelianized,
            terms: BTreeMap::new(),
        };
        for (seq, c) in &self.terms {
            let mut s = Vec::with_capacity(seq.len() + 1);
            s.push(sym.clone());
            s.extend(seq.iter().cloned());
            out.add_term(s, c.clone());
        }
        out
    }

    /// Evaluates every product by star multiplication in the written
    /// order. Refuses abelianized input, where the order is gone.
    pub fn expand(&self) -> Result<GammaElem> {
        if self.abelianized {
            return Err(Error::Domain(
                "cannot expand an abelianized generator polynomial".into(),
            ));
        }
        let mut acc = GammaElem::zero(self.n);
        for (seq, c) in &self.terms {
            let mut term = GammaElem::unit(self.n);
            for sym in seq {
                let g = GammaElem::from_basis(GammaBasisElem::generator(
                    self.n, sym.i, &sym.word,
                )?);
                term = term.star(&g)?;
            }
            acc = acc.add(&term.scale(c));
        }
        Ok(acc)
    }

    /// Replaces every symbol E(i, f^k) with k >= 2 by P_{i,k} evaluated at
    /// the E(j, f) for the primitive root f, monomials multiplied out left
    /// to right. Expand-invariant; afterwards every generator word is
    /// primitive.
    pub fn reduce_powers(&self) -> GenPoly {
        let mut out = GenPoly {
            n: self.n,
            abelianized: self.abelianized,
            terms: BTreeMap::new(),
        };
        for (seq, c) in &self.terms {
            let mut term = GenPoly {
                n: self.n,
                abelianized: self.abelianized,
                terms: [(Vec::new(), BigInt::one())].into(),
            };
            for sym in seq {
                let (root, k) = sym.word.primitive_root().expect("nonempty generator word");
                let factor = if k == 1 {
                    GenPoly::from_symbol(self.n, sym.i, &sym.word).expect("valid symbol")
                } else {
                    let ep = symfun::p_hk(sym.i, k, self.n).expect("generator index in range");
                    genpoly_from_epoly(self.n, &ep, &root)
                };
                term = term.mul(&factor);
            }
            out = out.add(&term.scale(c));
        }
        debug_assert!(out.terms.keys().all(|seq| seq
            .iter()
            .all(|s| s.word.is_primitive().unwrap_or(false))));
        out
    }

    /// The image modulo commutators: every word goes to its least cyclic
    /// rotation and every product is sorted canonically by (i, word).
    pub fn abelianize(&self) -> GenPoly {
        let mut out = GenPoly {
            n: self.n,
            abelianized: true,
            terms: BTreeMap::new(),
        };
        for (seq, c) in &self.terms {
            let mut canon: Vec<GenSymbol> = seq
                .iter()
                .map(|s| GenSymbol {
                    i: s.i,
                    word: s.word.cyclic_canonical().expect("nonempty generator word"),
                })
                .collect();
            canon.sort();
            out.add_term(canon, c.clone());
        }
        out
    }
}

/// P as a generator polynomial: e_j^(a_j) becomes a_j copies of E(j, root),
/// factors ordered by ascending j.
fn genpoly_from_epoly(n: usize, ep: &symfun::EPoly, root: &Word) -> GenPoly {
    let mut out = GenPoly {
        n,
        abelianized: false,
        terms: BTreeMap::new(),
    };
    for (exps, c) in ep.terms() {
        let mut seq = Vec::new();
        for (idx, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                seq.push(GenSymbol {
                    i: idx + 1,
                    word: root.clone(),
                });
            }
        }
        out.add_term(seq, c.clone());
    }
    out
}

/// Expresses a basis element as a generator polynomial with exact expansion
/// back to the element. Recursion on the total part weight: split off the
/// first part as a generator, star it against the rest, and subtract the
/// lower-weight correction terms the product formula produces.
pub fn decompose(b: &GammaBasisElem) -> GenPoly {
    let mut memo = HashMap::new();
    decompose_memo(b, &mut memo, 0)
}

fn decompose_memo(
    b: &GammaBasisElem,
    memo: &mut HashMap<GammaBasisElem, GenPoly>,
    depth: usize,
) -> GenPoly {
    assert!(
        depth <= b.n() + 1,
        "decomposition recursion exceeded the weight bound"
    );
    if let Some(hit) = memo.get(b) {
        return hit.clone();
    }
    let n = b.n();
    let result = if b.parts().is_empty() {
        GenPoly::unit(n)
    } else if b.parts().len() == 1 {
        let (w, a) = &b.parts()[0];
        GenPoly::from_symbol(n, *a as usize, w).expect("basis part is a valid generator")
    } else {
        let (w1, a1) = b.parts()[0].clone();
        let sym = GenSymbol {
            i: a1 as usize,
            word: w1.clone(),
        };
        let first = GammaElem::from_basis(
            GammaBasisElem::generator(n, a1 as usize, &w1).expect("valid generator"),
        );
        let rest_basis =
            GammaBasisElem::new(n, b.parts()[1..].to_vec()).expect("valid sub-element");
        let rest = GammaElem::from_basis(rest_basis.clone());
        let prod = first.star(&rest).expect("same degree");
        debug_assert!(prod.coeff(b).is_one(), "split product must contain b once");
        let mut acc = decompose_memo(&rest_basis, memo, depth + 1).prepend_symbol(&sym);
        for (bc, c) in prod.terms() {
            if bc == b {
                continue;
            }
            assert!(
                bc.weight() < b.weight(),
                "correction term must have smaller weight"
            );
            let sub = decompose_memo(bc, memo, depth + 1);
            acc = acc.sub(&sub.scale(c));
        }
        acc
    };
    memo.insert(b.clone(), result.clone());
    result
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (seq, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if seq.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            for (k, sym) in seq.iter().enumerate() {
                if k > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{sym}")?;
            }
        }
        Ok(())
    }
}
