//! Desk-scale points of the representation space: m-tuples of rational
//! n-by-n matrices, marked-vector triples with cyclicity and equivalence
//! testing, stabilizer ranks, and evaluation of the Hilbert-Chow map
//! (all characteristic-polynomial coefficients of all word images, indexed
//! by primitive necklaces up to a degree cutoff).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Matrix, RatMatrix};
use crate::words::{necklaces_up_to, Necklace, Word};

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// A point of the representation space: images of the m letters as rational
/// n-by-n matrices. `commutative` records that pairwise commutativity was
/// checked at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepPoint {
    n: usize,
    m: usize,
    mats: Vec<RatMatrix>,
    commutative: bool,
}

impl RepPoint {
    pub fn new(n: usize, mats: Vec<RatMatrix>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::DimensionMismatch("no matrices given".into()));
        }
        for mat in &mats {
            if mat.rows() != n || mat.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "expected {n}x{n} matrices, found {}x{}",
                    mat.rows(),
                    mat.cols()
                )));
            }
        }
        let m = mats.len();
        Ok(RepPoint {
            n,
            m,
            mats,
            commutative: false,
        })
    }

    /// Like `new`, but also verifies that all images commute.
    pub fn new_commutative(n: usize, mats: Vec<RatMatrix>) -> Result<Self> {
        let mut rep = RepPoint::new(n, mats)?;
        if !rep.check_commuting() {
            return Err(Error::Domain("matrices do not commute".into()));
        }
        rep.commutative = true;
        Ok(rep)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrices(&self) -> &[RatMatrix] {
        &self.mats
    }

    pub fn is_flagged_commutative(&self) -> bool {
        self.commutative
    }

    /// All pairwise commutators vanish.
    pub fn check_commuting(&self) -> bool {
        for a in 0..self.m {
            for b in a + 1..self.m {
                let ab = self.mats[a].mul(&self.mats[b]).expect("square");
                let ba = self.mats[b].mul(&self.mats[a]).expect("square");
                if ab != ba {
                    return false;
                }
            }
        }
        true
    }

    /// The image of a word: the ordered product of the letter matrices.
    pub fn eval_word(&self, w: &Word) -> Result<RatMatrix> {
        let mut acc = RatMatrix::identity(self.n);
        for &l in w.letters() {
            if l as usize > self.m {
                return Err(Error::LetterOutOfRange {
                    letter: l as usize,
                    m: self.m,
                });
            }
            acc = acc.mul(&self.mats[l as usize - 1])?;
        }
        Ok(acc)
    }
}

/// A representation point with a marked vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triple {
    pub rep: RepPoint,
    pub v: Vec<BigRational>,
}

impl Triple {
    pub fn new(rep: RepPoint, v: Vec<BigRational>) -> Self {
        Triple { rep, v }
    }

    fn check_dims(&self) -> Result<()> {
        if self.v.len() != self.rep.n {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match matrix size {}",
                self.v.len(),
                self.rep.n
            )));
        }
        Ok(())
    }

    /// Iterated span growth from the marked vector: adjoin all images of
    /// the current spanning set under the letter matrices until the
    /// dimension is stable; cyclic means the span is everything.
    pub fn is_cyclic(&self) -> Result<bool> {
        self.check_dims()?;
        let n = self.rep.n;
        let mut rows: Vec<Vec<BigRational>> = vec![self.v.clone()];
        let mut rank = Matrix::from_rows(rows.clone())?.rank();
        for _ in 0..n {
            if rank == n {
                return Ok(true);
            }
            let mut next = rows.clone();
            for r in &rows {
                for mat in &self.rep.mats {
                    next.push(mat.mul_vec(r)?);
                }
            }
            let new_rank = Matrix::from_rows(next.clone())?.rank();
            if new_rank == rank {
                return Ok(false);
            }
            rows = next;
            rank = new_rank;
        }
        Ok(rank == n)
    }

    /// Basis change: (X_i, v) goes to (g X_i g^-1, g v).
    pub fn conjugate(&self, g: &RatMatrix) -> Result<Triple> {
        self.check_dims()?;
        let ginv = g.inverse()?;
        let mats = self
            .rep
            .mats
            .iter()
            .map(|x| g.mul(x)?.mul(&ginv))
            .collect::<Result<Vec<_>>>()?;
        let v = g.mul_vec(&self.v)?;
        Ok(Triple {
            rep: RepPoint {
                n: self.rep.n,
                m: self.rep.m,
                mats,
                commutative: self.rep.commutative,
            },
            v,
        })
    }

    /// Rank of the linear map g -> ([g, X_1], ..., [g, X_m], g v) on n-by-n
    /// matrices. Full rank n^2 certifies a free infinitesimal action at
    /// this point.
    pub fn stabilizer_rank(&self) -> Result<usize> {
        self.check_dims()?;
        let n = self.rep.n;
        let m = self.rep.m;
        let unknowns = n * n;
        let rows = m * n * n + n;
        let mut sys = RatMatrix::zero(rows, unknowns);
        // [g, X_k] entry (p,q): sum_r g_pr Xk[r][q] - Xk[p][r] g_rq
        for (k, mat) in self.rep.mats.iter().enumerate() {
            for p in 0..n {
                for q in 0..n {
                    let row = k * n * n + p * n + q;
                    for r in 0..n {
                        let cur = sys.get(row, p * n + r).clone() + mat.get(r, q);
                        sys.set(row, p * n + r, cur);
                        let cur = sys.get(row, r * n + q).clone() - mat.get(p, r);
                        sys.set(row, r * n + q, cur);
                    }
                }
            }
        }
        // (g v) entry p: sum_r g_pr v_r
        for p in 0..n {
            let row = m * n * n + p;
            for r in 0..n {
                sys.set(row, p * n + r, self.v[r].clone());
            }
        }
        Ok(sys.rank())
    }
}

/// Outcome of the module-isomorphism test between two triples. The search
/// for an invertible intertwiner is exact when the solution space is a
/// point and sampled otherwise, so a three-valued answer is honest.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Equivalence {
    Equivalent,
    NotEquivalent,
    Indeterminate,
}

/// Number of sampled combinations tried before giving up on finding an
/// invertible element of a positive-dimensional solution space.
const EQUIV_RETRIES: usize = 32;
const EQUIV_SEED: u64 = 0x5eed;

/// Decides whether two triples are isomorphic as modules with marked
/// vector: looks for invertible alpha with alpha X_k = X'_k alpha for all k
/// and alpha v = v'. The linear constraints are solved exactly over the
/// rationals; an invertible solution is then searched for directly.
pub fn triples_equivalent(t1: &Triple, t2: &Triple) -> Result<Equivalence> {
    t1.check_dims()?;
    t2.check_dims()?;
    if t1.rep.n != t2.rep.n || t1.rep.m != t2.rep.m {
        return Err(Error::DimensionMismatch(
            "triples have different shapes".into(),
        ));
    }
    let n = t1.rep.n;
    let m = t1.rep.m;
    let unknowns = n * n;
    let rows = m * n * n + n;
    let mut sys = RatMatrix::zero(rows, unknowns);
    let mut rhs = vec![BigRational::zero(); rows];
    // alpha X_k - X'_k alpha = 0
    for k in 0..m {
        let x = &t1.rep.mats[k];
        let xp = &t2.rep.mats[k];
        for p in 0..n {
            for q in 0..n {
                let row = k * n * n + p * n + q;
                for r in 0..n {
                    let cur = sys.get(row, p * n + r).clone() + x.get(r, q);
                    sys.set(row, p * n + r, cur);
                    let cur = sys.get(row, r * n + q).clone() - xp.get(p, r);
                    sys.set(row, r * n + q, cur);
                }
            }
        }
    }
    // alpha v = v'
    for p in 0..n {
        let row = m * n * n + p;
        for r in 0..n {
            sys.set(row, p * n + r, t1.v[r].clone());
        }
        rhs[row] = t2.v[p].clone();
    }
    let Some((particular, nullspace)) = sys.solve_affine(&rhs) else {
        return Ok(Equivalence::NotEquivalent);
    };
    let as_matrix = |coords: &[BigRational]| {
        Matrix::from_fn(n, n, |p, q| coords[p * n + q].clone())
    };
    let invertible =
        |mat: &RatMatrix| -> bool { !Zero::is_zero(&mat.det().expect("square")) };
    if nullspace.is_empty() {
        return Ok(if invertible(&as_matrix(&particular)) {
            Equivalence::Equivalent
        } else {
            Equivalence::NotEquivalent
        });
    }
    if invertible(&as_matrix(&particular)) {
        return Ok(Equivalence::Equivalent);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(EQUIV_SEED);
    for _ in 0..EQUIV_RETRIES {
        let mut candidate = particular.clone();
        for basis_vec in &nullspace {
            let c = rat(rng.gen_range(-5i64..=5));
            for (slot, b) in candidate.iter_mut().zip(basis_vec) {
                *slot += &c * b;
            }
        }
        if invertible(&as_matrix(&candidate)) {
            return Ok(Equivalence::Equivalent);
        }
    }
    Ok(Equivalence::Indeterminate)
}

/// The image of a representation point under the Hilbert-Chow map,
/// truncated at word degree `max_degree`: the value e_i(image of w) for
/// every primitive necklace w of degree <= max_degree and every i in 1..=n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HCPoint {
    n: usize,
    m: usize,
    max_degree: usize,
    coords: BTreeMap<(Word, usize), BigRational>,
}

impl HCPoint {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn coords(&self) -> impl Iterator<Item = (&(Word, usize), &BigRational)> {
        self.coords.iter()
    }

    pub fn get(&self, necklace: &Necklace, i: usize) -> Option<&BigRational> {
        self.coords.get(&(necklace.word().clone(), i))
    }

    /// Stable JSON form: coordinates sorted by (degree, necklace, i),
    /// rationals as "p/q" strings.
    pub fn to_json(&self) -> Value {
        let coords: Vec<Value> = self
            .coords
            .iter()
            .map(|((w, i), val)| {
                json!({
                    "necklace": w.to_string(),
                    "i": i,
                    "value": format_rational(val),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "m": self.m,
            "max_degree": self.max_degree,
            "coords": coords,
        })
    }
}

/// Evaluates the Hilbert-Chow map at a representation point. The cutoff
/// must be at least 1; the conventional default is n^2.
pub fn hc_eval(rep: &RepPoint, max_degree: usize) -> Result<HCPoint> {
    if max_degree < 1 {
        return Err(Error::Domain("degree cutoff must be at least 1".into()));
    }
    let mut coords = BTreeMap::new();
    for necklace in necklaces_up_to(rep.m as u8, max_degree) {
        let img = rep.eval_word(necklace.word())?;
        for i in 1..=rep.n {
            coords.insert(
                (necklace.word().clone(), i),
                img.char_coeff(i)?,
            );
        }
    }
    Ok(HCPoint {
        n: rep.n,
        m: rep.m,
        max_degree,
        coords,
    })
}

/// The Hilbert-Chow map factors through forgetting the marked vector.
pub fn hc_eval_triple(t: &Triple, max_degree: usize) -> Result<HCPoint> {
    hc_eval(&t.rep, max_degree)
}

/// Reads a representation point (and optional marked vector) from the JSON
/// document {"n": .., "m": .., "matrices": [[[..]]], "v": [..]} with
/// rational entries as "p/q" strings (plain integers also accepted).
pub fn read_rep_json(src: &str) -> Result<(RepPoint, Option<Vec<BigRational>>)> {
    let doc: Value = serde_json::from_str(src)
        .map_err(|e| Error::Domain(format!("invalid JSON: {e}")))?;
    let n = doc
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Domain("missing field \"n\"".into()))? as usize;
    let m = doc
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Domain("missing field \"m\"".into()))? as usize;
    if n < 1 || m < 1 {
        return Err(Error::Domain("n and m must be at least 1".into()));
    }
    let entry = |v: &Value| -> Result<BigRational> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(x) => {
                if let Some(i) = x.as_i64() {
                    Ok(rat(i))
                } else {
                    Err(Error::Domain(format!("non-integer number {x}")))
                }
            }
            other => Err(Error::Domain(format!("bad rational entry {other}"))),
        }
    };
    let mats_json = doc
        .get("matrices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Domain("missing field \"matrices\"".into()))?;
    if mats_json.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "expected {m} matrices, found {}",
            mats_json.len()
        )));
    }
    let mut mats = Vec::with_capacity(m);
    for mj in mats_json {
        let rows_json = mj
            .as_array()
            .ok_or_else(|| Error::Domain("matrix must be an array of rows".into()))?;
        let mut rows = Vec::with_capacity(rows_json.len());
        for row in rows_json {
            let cells = row
                .as_array()
                .ok_or_else(|| Error::Domain("matrix row must be an array".into()))?;
            rows.push(cells.iter().map(&entry).collect::<Result<Vec<_>>>()?);
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "matrices must be {n}x{n}"
            )));
        }
        mats.push(Matrix::from_rows(rows)?);
    }
    let rep = RepPoint::new(n, mats)?;
    let v = match doc.get("v") {
        None | Some(Value::Null) => None,
        Some(Value::Array(cells)) => {
            let v = cells.iter().map(&entry).collect::<Result<Vec<_>>>()?;
            if v.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "vector must have length {n}"
                )));
            }
            Some(v)
        }
        Some(other) => return Err(Error::Domain(format!("bad vector field {other}"))),
    };
    Ok((rep, v))
}

/// Samples a cyclic triple with small integer entries, retrying until the
/// marked vector generates.
pub fn random_cyclic_triple(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Triple {
    loop {
        let mats: Vec<RatMatrix> = (0..m)
            .map(|_| Matrix::from_fn(n, n, |_, _| rat(rng.gen_range(-3i64..=3))))
            .collect();
        let v: Vec<BigRational> = (0..n).map(|_| rat(rng.gen_range(-3i64..=3))).collect();
        let t = Triple::new(RepPoint::new(n, mats).expect("square"), v);
        if t.is_cyclic().expect("dims agree") {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nilpotent_triple(v0: i64, v1: i64) -> Triple {
        let x = RatMatrix::from_i64(vec![vec![0, 1], vec![0, 0]]);
        Triple::new(RepPoint::new(2, vec![x]).unwrap(), vec![rat(v0), rat(v1)])
    }

    #[test]
    fn cyclicity_examples() {
        assert!(!nilpotent_triple(1, 0).is_cyclic().unwrap());
        assert!(nilpotent_triple(0, 1).is_cyclic().unwrap());
        let zero = RepPoint::new(2, vec![RatMatrix::zero(2, 2)]).unwrap();
        for v in [[0, 0], [1, 0], [2, 3]] {
            let t = Triple::new(zero.clone(), vec![rat(v[0]), rat(v[1])]);
            assert!(!t.is_cyclic().unwrap());
        }
    }

    #[test]
    fn dimension_mismatch_reported() {
        let x = RatMatrix::identity(2);
        let t = Triple::new(RepPoint::new(2, vec![x]).unwrap(), vec![rat(1)]);
        assert!(t.is_cyclic().is_err());
    }

    #[test]
    fn conjugate_by_identity_fixes() {
        let t = nilpotent_triple(0, 1);
        assert_eq!(t.conjugate(&RatMatrix::identity(2)).unwrap(), t);
    }

    #[test]
    fn cyclicity_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..10 {
            let t = random_cyclic_triple(&mut rng, 2, 2);
            let g = loop {
                let g: RatMatrix =
                    Matrix::from_fn(2, 2, |_, _| rat(rng.gen_range(-3i64..=3)));
                if !Zero::is_zero(&g.det().unwrap()) {
                    break g;
                }
            };
            assert!(t.conjugate(&g).unwrap().is_cyclic().unwrap());
        }
    }

    #[test]
    fn conjugate_singular_is_error() {
        let t = nilpotent_triple(0, 1);
        assert!(t.conjugate(&RatMatrix::zero(2, 2)).is_err());
    }

    #[test]
    fn equivalence_with_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10 {
            let t = random_cyclic_triple(&mut rng, 2, 2);
            let g = loop {
                let g: RatMatrix =
                    Matrix::from_fn(2, 2, |_, _| rat(rng.gen_range(-3i64..=3)));
                if !Zero::is_zero(&g.det().unwrap()) {
                    break g;
                }
            };
            let tg = t.conjugate(&g).unwrap();
            assert_eq!(
                triples_equivalent(&t, &tg).unwrap(),
                Equivalence::Equivalent
            );
            assert_eq!(
                triples_equivalent(&tg, &t).unwrap(),
                Equivalence::Equivalent
            );
            assert_eq!(
                triples_equivalent(&t, &t).unwrap(),
                Equivalence::Equivalent
            );
            // equivalent triples share their coordinates at every cutoff
            for cutoff in 1..=4usize {
                assert_eq!(
                    hc_eval_triple(&t, cutoff).unwrap(),
                    hc_eval_triple(&tg, cutoff).unwrap()
                );
            }
        }
    }

    #[test]
    fn equivalence_distinguishes_char_polys() {
        let a = Triple::new(
            RepPoint::new(2, vec![RatMatrix::from_i64(vec![vec![1, 0], vec![0, 2]])]).unwrap(),
            vec![rat(1), rat(1)],
        );
        let b = Triple::new(
            RepPoint::new(2, vec![RatMatrix::from_i64(vec![vec![1, 0], vec![0, 3]])]).unwrap(),
            vec![rat(1), rat(1)],
        );
        assert!(a.is_cyclic().unwrap() && b.is_cyclic().unwrap());
        assert_eq!(
            triples_equivalent(&a, &b).unwrap(),
            Equivalence::NotEquivalent
        );
    }

    #[test]
    fn stabilizer_rank_examples() {
        // cyclic nilpotent pair: free action, full rank 4
        assert_eq!(nilpotent_triple(0, 1).stabilizer_rank().unwrap(), 4);
        // zero matrices with zero vector: everything stabilizes
        let zero = RepPoint::new(2, vec![RatMatrix::zero(2, 2)]).unwrap();
        let t = Triple::new(zero, vec![rat(0), rat(0)]);
        assert_eq!(t.stabilizer_rank().unwrap(), 0);
        // never exceeds n^2
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        for _ in 0..5 {
            let t = random_cyclic_triple(&mut rng, 3, 2);
            assert!(t.stabilizer_rank().unwrap() <= 9);
        }
    }

    #[test]
    fn hc_scalars() {
        let rep = RepPoint::new(
            1,
            vec![
                Matrix::from_rows(vec![vec![rat(5)]]).unwrap(),
                Matrix::from_rows(vec![vec![rat(-2)]]).unwrap(),
            ],
        )
        .unwrap();
        let hc = hc_eval(&rep, 1).unwrap();
        let k1 = Necklace::of(&Word::letter(1)).unwrap();
        let k2 = Necklace::of(&Word::letter(2)).unwrap();
        assert_eq!(hc.get(&k1, 1), Some(&rat(5)));
        assert_eq!(hc.get(&k2, 1), Some(&rat(-2)));
    }

    #[test]
    fn hc_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..5 {
            let t = random_cyclic_triple(&mut rng, 2, 2);
            let g = loop {
                let g: RatMatrix =
                    Matrix::from_fn(2, 2, |_, _| rat(rng.gen_range(-3i64..=3)));
                if !Zero::is_zero(&g.det().unwrap()) {
                    break g;
                }
            };
            let tg = t.conjugate(&g).unwrap();
            assert_eq!(
                hc_eval_triple(&t, 4).unwrap(),
                hc_eval_triple(&tg, 4).unwrap()
            );
        }
    }

    #[test]
    fn hc_diagonal_gives_symmetric_functions() {
        let rep = RepPoint::new(
            2,
            vec![RatMatrix::from_i64(vec![vec![3, 0], vec![0, 7]])],
        )
        .unwrap();
        let hc = hc_eval(&rep, 2).unwrap();
        let x1 = Necklace::of(&Word::letter(1)).unwrap();
        assert_eq!(hc.get(&x1, 1), Some(&rat(10))); // e1 = 3 + 7
        assert_eq!(hc.get(&x1, 2), Some(&rat(21))); // e2 = 3 * 7
    }

    #[test]
    fn hc_rejects_zero_cutoff() {
        let rep = RepPoint::new(1, vec![RatMatrix::identity(1)]).unwrap();
        assert!(hc_eval(&rep, 0).is_err());
    }

    #[test]
    fn commuting_checks() {
        let d1 = RatMatrix::from_i64(vec![vec![1, 0], vec![0, 2]]);
        let d2 = RatMatrix::from_i64(vec![vec![3, 0], vec![0, 4]]);
        assert!(RepPoint::new(2, vec![d1.clone(), d2.clone()])
            .unwrap()
            .check_commuting());
        assert!(RepPoint::new_commutative(2, vec![d1.clone(), d2]).is_ok());
        let x = RatMatrix::from_i64(vec![vec![0, 1], vec![0, 0]]);
        let xt = RatMatrix::from_i64(vec![vec![0, 0], vec![1, 0]]);
        let rep = RepPoint::new(2, vec![x.clone(), xt.clone()]).unwrap();
        assert!(!rep.check_commuting());
        assert!(RepPoint::new_commutative(2, vec![x, xt]).is_err());
        assert!(RepPoint::new(2, vec![d1]).unwrap().check_commuting());
    }

    #[test]
    fn json_input_round_trip() {
        let src = r#"{
            "n": 2, "m": 1,
            "matrices": [[["1/2", 1], [0, "3"]]],
            "v": ["1", "0"]
        }"#;
        let (rep, v) = read_rep_json(src).unwrap();
        assert_eq!(rep.n(), 2);
        assert_eq!(rep.matrices()[0].get(0, 0), &parse_rational("1/2").unwrap());
        assert_eq!(v.unwrap().len(), 2);

        let bad = r#"{"n": 2, "m": 1, "matrices": [[["1"]]]}"#;
        assert!(read_rep_json(bad).is_err());
    }

    #[test]
    fn hc_json_shape() {
        let rep = RepPoint::new(
            1,
            vec![Matrix::from_rows(vec![vec![parse_rational("2/3").unwrap()]]).unwrap()],
        )
        .unwrap();
        let hc = hc_eval(&rep, 1).unwrap();
        let j = hc.to_json();
        assert_eq!(j["n"], 1);
        assert_eq!(j["coords"][0]["necklace"], "x1");
        assert_eq!(j["coords"][0]["i"], 1);
        assert_eq!(j["coords"][0]["value"], "2/3");
    }
}
