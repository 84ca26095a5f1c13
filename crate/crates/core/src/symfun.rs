//! Classical symmetric polynomials in n commuting variables x(1,1)..x(1,n):
//! elementary symmetric polynomials, power sums, expression in the e-basis
//! by leading-term subtraction, plethysm with p_k, and the composite
//! polynomials P_{h,k} expressing e_h(x^k) in the e-basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Monomial, MultiPoly, VarId};
use crate::gamma::GammaElem;

fn xvar(j: usize) -> VarId {
    VarId::x(1, j as u32)
}

/// A polynomial in the n commuting variables x(1,1)..x(1,n), expected to be
/// invariant under permutations of the variables. Invariance is checked by
/// the operations that need it, not at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymPoly {
    n: usize,
    poly: MultiPoly,
}

impl SymPoly {
    pub fn new(n: usize, poly: MultiPoly) -> Result<Self> {
        for v in poly.vars() {
            match v {
                VarId::X { i: 1, j } if j >= 1 && (j as usize) <= n => {}
                other => {
                    return Err(Error::Domain(format!(
                        "variable {other} outside x(1,1)..x(1,{n})"
                    )))
                }
            }
        }
        Ok(SymPoly { n, poly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    /// Invariance under all adjacent transpositions of the variables.
    pub fn is_symmetric(&self) -> bool {
        (1..self.n).all(|j| {
            let swapped = self.poly.map_vars(|v| {
                if v == xvar(j) {
                    xvar(j + 1)
                } else if v == xvar(j + 1) {
                    xvar(j)
                } else {
                    v
                }
            });
            swapped == self.poly
        })
    }

    /// Exponent vector (a_1..a_n) of a monomial in the x-variables.
    fn exponents(&self, m: &Monomial) -> Vec<u32> {
        (1..=self.n).map(|j| m.exponent_of(xvar(j))).collect()
    }

    /// Leading term under lex with x(1,1) > x(1,2) > ... > x(1,n).
    fn leading_lex(&self) -> Option<(Vec<u32>, BigInt)> {
        self.poly
            .terms()
            .map(|(m, c)| (self.exponents(m), c.clone()))
            .max_by(|a, b| a.0.cmp(&b.0))
    }
}

/// The i-th elementary symmetric polynomial in n variables.
pub fn elementary(i: usize, n: usize) -> Result<SymPoly> {
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { i, n });
    }
    let mut poly = MultiPoly::zero();
    for subset in (1..=n).combinations(i) {
        let mono = Monomial::from_pairs(subset.into_iter().map(|j| (xvar(j), 1)));
        poly = poly.add(&MultiPoly::from_term(mono, BigInt::one()));
    }
    SymPoly::new(n, poly)
}

/// The r-th power sum x_1^r + ... + x_n^r.
pub fn power_sum(r: usize, n: usize) -> Result<SymPoly> {
    if r < 1 {
        return Err(Error::IndexOutOfRange { i: r, n });
    }
    let mut poly = MultiPoly::zero();
    for j in 1..=n {
        poly = poly.add(&MultiPoly::from_term(
            Monomial::from_pairs([(xvar(j), r as u32)]),
            BigInt::one(),
        ));
    }
    SymPoly::new(n, poly)
}

/// A polynomial with integer coefficients in the formal symbols e1..en,
/// stored as exponent vectors of length n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl EPoly {
    pub fn zero(n: usize) -> Self {
        EPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
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

    /// Substitutes e_i -> elementary(i, n) and expands.
    pub fn eval_elementary(&self) -> Result<SymPoly> {
        let es: Vec<SymPoly> = (1..=self.n)
            .map(|i| elementary(i, self.n))
            .collect::<Result<_>>()?;
        let mut acc = MultiPoly::zero();
        for (exps, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone());
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(es[i].poly());
                }
            }
            acc = acc.add(&term);
        }
        SymPoly::new(self.n, acc)
    }

    /// Substitutes e_i -> gens[i-1] and multiplies out with the star
    /// product, factors of each monomial taken left to right (e1 powers
    /// first, then e2, and so on).
    pub fn eval_star(&self, gens: &[GammaElem]) -> Result<GammaElem> {
        if gens.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} generator images, got {}",
                self.n,
                gens.len()
            )));
        }
        let deg = gens
            .first()
            .map(|g| g.n())
            .ok_or_else(|| Error::Domain("no generator images".into()))?;
        let mut acc = GammaElem::zero(deg);
        for (exps, c) in &self.terms {
            let mut term = GammaElem::unit(deg);
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.star(&gens[i])?;
                }
            }
            acc = acc.add(&term.scale(c));
        }
        Ok(acc)
    }
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (exps, c)) in self.terms.iter().rev().enumerate() {
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
            let is_const = exps.iter().all(|&e| e == 0);
            if is_const {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            let mut first = true;
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "e{}", i + 1)?;
                } else {
                    write!(f, "e{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Writes a symmetric polynomial as a polynomial in e1..en by the standard
/// leading-term subtraction: the lex-leading monomial x^a (with a weakly
/// decreasing) is killed by c * e1^(a1-a2) ... e(n-1)^(a(n-1)-an) * en^(an).
pub fn express_in_elementary(f: &SymPoly) -> Result<EPoly> {
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = f.n;
    let es: Vec<SymPoly> = (1..=n).map(|i| elementary(i, n)).collect::<Result<_>>()?;
    let mut rem = f.clone();
    let mut out = EPoly::zero(n);
    while let Some((a, c)) = rem.leading_lex() {
        debug_assert!(
            a.windows(2).all(|p| p[0] >= p[1]),
            "leading exponent of a symmetric polynomial must be weakly decreasing"
        );
        let mut eexp = vec![0u32; n];
        for i in 0..n {
            let next = if i + 1 < n { a[i + 1] } else { 0 };
            eexp[i] = a[i] - next;
        }
        let mut product = MultiPoly::constant(c.clone());
        for (i, &e) in eexp.iter().enumerate() {
            for _ in 0..e {
                product = product.mul(es[i].poly());
            }
        }
        rem = SymPoly {
            n,
            poly: rem.poly.sub(&product),
        };
        out.add_term(eexp, c);
    }
    Ok(out)
}

/// Plethysm with the k-th power sum: substitutes x_i -> x_i^r.
pub fn plethysm_pk(g: &SymPoly, r: usize) -> SymPoly {
    assert!(r >= 1, "plethysm exponent must be positive");
    let mut poly = MultiPoly::zero();
    for (m, c) in g.poly.terms() {
        let scaled = Monomial::from_pairs(m.iter().map(|(v, e)| (v, e * r as u32)));
        poly = poly.add(&MultiPoly::from_term(scaled, c.clone()));
    }
    SymPoly { n: g.n, poly }
}

/// P_{h,k} in n variables: e_h(x_1^k, ..., x_n^k) written in the e-basis.
/// Memoized; the table is shared and thread-safe.
pub fn p_hk(h: usize, k: usize, n: usize) -> Result<EPoly> {
    if h < 1 || h > n {
        return Err(Error::IndexOutOfRange { i: h, n });
    }
    if k < 1 {
        return Err(Error::IndexOutOfRange { i: k, n });
    }
    type Table = Mutex<HashMap<(usize, usize, usize), EPoly>>;
    static CACHE: OnceLock<Table> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(h, k, n)) {
        return Ok(hit.clone());
    }
    let computed = express_in_elementary(&plethysm_pk(&elementary(h, n)?, k))?;
    cache
        .lock()
        .unwrap()
        .insert((h, k, n), computed.clone());
    Ok(computed)
}
