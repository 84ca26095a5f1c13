//! Monomials of the free associative algebra: words over letters x1..xm,
//! cyclic equivalence, primitivity, and necklace enumeration.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A monomial of the free algebra: a finite sequence of letter indices,
/// 1-based. The empty sequence is the monomial 1. Degree equals length.
///
/// Words are ordered by (degree, lexicographic on letters); this is the
/// order used everywhere words act as map keys or get printed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u8) -> Self {
        assert!(i >= 1, "letters are 1-based");
        Word(vec![i])
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        assert!(letters.iter().all(|&l| l >= 1), "letters are 1-based");
        Word(letters.to_vec())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_letter(&self) -> u8 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * k);
        for _ in 0..k {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    fn rotated(&self, k: usize) -> Word {
        let n = self.0.len();
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.0.len().max(1)).map(|k| self.rotated(k % self.0.len().max(1)))
    }

    /// Lexicographically least rotation. Naive scan; degrees stay small.
    pub fn cyclic_canonical(&self) -> Result<Word> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok((0..self.0.len())
            .map(|k| self.rotated(k))
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("nonempty word"))
    }

    /// Smallest period: the shortest prefix f with self = f^k; returns
    /// (f, k). k = 1 exactly when the word is primitive.
    pub fn primitive_root(&self) -> Result<(Word, usize)> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let n = self.0.len();
        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            let prefix = &self.0[..d];
            if self.0.chunks(d).all(|c| c == prefix) {
                return Ok((Word(prefix.to_vec()), n / d));
            }
        }
        unreachable!("d = n always matches");
    }

    /// True iff the word is not a proper power of a shorter word.
    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.primitive_root()?.1 == 1)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Dot-separated letters, "1" for the empty word: "x1.x2.x1".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

/// The canonical representative of a cyclic equivalence class of words,
/// together with its primitivity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Necklace {
    word: Word,
    primitive: bool,
}

impl Necklace {
    pub fn of(w: &Word) -> Result<Necklace> {
        let word = w.cyclic_canonical()?;
        let primitive = word.is_primitive()?;
        Ok(Necklace { word, primitive })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn degree(&self) -> usize {
        self.word.degree()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// Every word of degree 1..=max_degree over m letters, in (degree, lex)
/// order.
pub fn words_up_to(m: u8, max_degree: usize) -> Vec<Word> {
    assert!(m >= 1, "alphabet must be nonempty");
    let mut out = Vec::new();
    let mut current = Vec::new();
    for d in 1..=max_degree {
        current.clear();
        current.resize(d, 1u8);
        loop {
            out.push(Word(current.clone()));
            let mut pos = d;
            while pos > 0 && current[pos - 1] == m {
                current[pos - 1] = 1;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            current[pos - 1] += 1;
        }
    }
    out
}

/// All primitive necklaces of degree 1..=max_degree over m letters, sorted
/// by (degree, lex), without duplicates.
pub fn necklaces_up_to(m: u8, max_degree: usize) -> Vec<Necklace> {
    assert!(m >= 1, "alphabet must be nonempty");
    let mut out = Vec::new();
    let mut current = Vec::new();
    for d in 1..=max_degree {
        current.clear();
        current.resize(d, 1u8);
        loop {
            let w = Word(current.clone());
            if w.cyclic_canonical().expect("nonempty") == w && w.is_primitive().expect("nonempty") {
                out.push(Necklace {
                    word: w,
                    primitive: true,
                });
            }
            // odometer step in lex order
            let mut pos = d;
            while pos > 0 && current[pos - 1] == m {
                current[pos - 1] = 1;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            current[pos - 1] += 1;
        }
    }
    out
}
