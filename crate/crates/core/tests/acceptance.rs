//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Everything is exact arithmetic; the randomized parts take fixed
//! seeds and replay identically.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divided_powers::decomp::decompose;
use divided_powers::exact::{Matrix, RatMatrix};
use divided_powers::gamma::{basis_elements, random_elem, GammaBasisElem, GammaElem};
use divided_powers::hilb::{hc_eval_triple, random_cyclic_triple, RepPoint, Triple};
use divided_powers::norm::{GenericMatrixContext, InvariantPoly};
use divided_powers::symfun;
use divided_powers::tensor::SymTensor;
use divided_powers::text::{parse_element, render_element};
use divided_powers::words::{necklaces_up_to, words_up_to, Necklace, Word};

/// Prints PASS when completed, FAIL when dropped during a panic.
struct Criterion(&'static str);

impl Criterion {
    fn pass(self) {
        println!("{}: PASS", self.0);
        std::mem::forget(self);
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        println!("{}: FAIL", self.0);
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn embed_check(u: &GammaElem, v: &GammaElem) -> bool {
    let lhs = SymTensor::embed(&u.star(v).expect("same degree"));
    let rhs = SymTensor::embed(u)
        .mul(&SymTensor::embed(v))
        .expect("same degree");
    lhs == rhs
}

#[test]
fn criterion_01_oracle_equivalence() {
    let c = Criterion("criterion 1 (oracle equivalence, product formula vs symmetric tensors)");
    let start = Instant::now();
    let mut pairs = 0usize;
    for n in 1..=3usize {
        let all = basis_elements(n, 2, 2);
        for bu in &all {
            for bv in &all {
                let u = GammaElem::from_basis(bu.clone());
                let v = GammaElem::from_basis(bv.clone());
                assert!(embed_check(&u, &v), "exhaustive pair failed: {u} / {v}");
                pairs += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1001 + n as u64);
        for _ in 0..200 {
            let u = random_elem(&mut rng, n, 2, 3, 3);
            let v = random_elem(&mut rng, n, 2, 3, 3);
            assert!(embed_check(&u, &v), "random pair failed: {u} / {v}");
            pairs += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "oracle equivalence took {elapsed:?}, budget is 60 s"
    );
    println!("  checked {pairs} pairs in {elapsed:?}");
    c.pass();
}

#[test]
fn criterion_02_associativity_and_unit() {
    let c = Criterion("criterion 2 (star is associative with unit)");
    let start = Instant::now();
    for n in 2..=3usize {
        let one = GammaElem::unit(n);
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + n as u64);
        for _ in 0..100 {
            let u = random_elem(&mut rng, n, 2, 3, 3);
            let v = random_elem(&mut rng, n, 2, 3, 3);
            let w = random_elem(&mut rng, n, 2, 3, 3);
            let lhs = u.star(&v).unwrap().star(&w).unwrap();
            let rhs = u.star(&v.star(&w).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "associativity failed at n={n}");
            assert_eq!(u.star(&one).unwrap(), u);
            assert_eq!(one.star(&u).unwrap(), u);
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "associativity took {elapsed:?}, budget is 30 s"
    );
    c.pass();
}

#[test]
fn criterion_03_plethysm_identity() {
    let c = Criterion("criterion 3 (plethysm identity for generator powers)");
    for n in 1..=3usize {
        for f in words_up_to(2, 2) {
            let gens: Vec<GammaElem> = (1..=n)
                .map(|j| GammaElem::from_basis(GammaBasisElem::generator(n, j, &f).unwrap()))
                .collect();
            for h in 1..=n {
                for k in 1..=3usize {
                    let lhs = GammaElem::from_basis(
                        GammaBasisElem::generator(n, h, &f.pow(k)).unwrap(),
                    );
                    let rhs = symfun::p_hk(h, k, n)
                        .unwrap()
                        .eval_star(&gens)
                        .unwrap();
                    assert_eq!(lhs, rhs, "n={n} f={f} h={h} k={k}");
                }
            }
        }
    }
    c.pass();
}

#[test]
fn criterion_04_decomposition_round_trip() {
    let c = Criterion("criterion 4 (generator decomposition round trip, primitive words)");
    let mut count = 0usize;
    for n in 1..=3usize {
        for b in basis_elements(n, 2, 3) {
            let g = decompose(&b).reduce_powers();
            for (seq, _) in g.terms() {
                for sym in seq {
                    assert!(
                        sym.word.is_primitive().unwrap(),
                        "non-primitive generator word {} for {b:?}",
                        sym.word
                    );
                }
            }
            assert_eq!(
                g.expand().unwrap(),
                GammaElem::from_basis(b.clone()),
                "round trip failed for {b:?}"
            );
            count += 1;
        }
    }
    println!("  round-tripped {count} basis elements");
    c.pass();
}

fn cached_norm<'a>(
    ctx: &GenericMatrixContext,
    cache: &'a mut HashMap<GammaBasisElem, InvariantPoly>,
    b: &GammaBasisElem,
) -> &'a InvariantPoly {
    if !cache.contains_key(b) {
        let val = ctx.norm_basis(b).expect("norm in range");
        cache.insert(b.clone(), val);
    }
    cache.get(b).expect("just inserted")
}

fn norm_elem(
    ctx: &GenericMatrixContext,
    cache: &mut HashMap<GammaBasisElem, InvariantPoly>,
    u: &GammaElem,
) -> divided_powers::exact::MultiPoly {
    let mut acc = divided_powers::exact::MultiPoly::zero();
    for (b, coeff) in u.terms() {
        acc = acc.add(&cached_norm(ctx, cache, b).poly().scale(coeff));
    }
    acc
}

#[test]
fn criterion_05_norm_homomorphism() {
    let c = Criterion("criterion 5 (norm is a ring homomorphism)");
    let start = Instant::now();
    let ctx2 = GenericMatrixContext::new(2, 2);
    let mut cache: HashMap<GammaBasisElem, InvariantPoly> = HashMap::new();
    let all = basis_elements(2, 2, 3);
    let mut pairs = 0usize;
    for bu in &all {
        for bv in &all {
            let u = GammaElem::from_basis(bu.clone());
            let v = GammaElem::from_basis(bv.clone());
            let lhs = norm_elem(&ctx2, &mut cache, &u.star(&v).unwrap());
            cached_norm(&ctx2, &mut cache, bu);
            cached_norm(&ctx2, &mut cache, bv);
            let rhs = cache[bu].poly().mul(cache[bv].poly());
            assert_eq!(lhs, rhs, "norm homomorphism failed at {u} / {v}");
            pairs += 1;
        }
    }
    let ctx3 = GenericMatrixContext::new(3, 2);
    let mut cache3: HashMap<GammaBasisElem, InvariantPoly> = HashMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    for _ in 0..50 {
        let u = random_elem(&mut rng, 3, 2, 2, 2);
        let v = random_elem(&mut rng, 3, 2, 2, 2);
        let lhs = norm_elem(&ctx3, &mut cache3, &u.star(&v).unwrap());
        let rhs = norm_elem(&ctx3, &mut cache3, &u).mul(&norm_elem(&ctx3, &mut cache3, &v));
        assert_eq!(lhs, rhs, "norm homomorphism failed at n=3: {u} / {v}");
        pairs += 1;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(120),
        "norm homomorphism took {elapsed:?}, budget is 120 s"
    );
    println!("  checked {pairs} pairs in {elapsed:?}");
    c.pass();
}

#[test]
fn criterion_06_cyclic_invariance() {
    let c = Criterion("criterion 6 (norm is invariant under cyclic rotation)");
    let words = words_up_to(2, 3);
    for n in 1..=3usize {
        let ctx = GenericMatrixContext::new(n, 2);
        let mut cache: HashMap<(Word, usize), InvariantPoly> = HashMap::new();
        let eval = |w: &Word, i: usize, cache: &mut HashMap<(Word, usize), InvariantPoly>| {
            if let Some(hit) = cache.get(&(w.clone(), i)) {
                return hit.clone();
            }
            let b = GammaBasisElem::generator(n, i, w).unwrap();
            let val = ctx.norm_basis(&b).unwrap();
            cache.insert((w.clone(), i), val.clone());
            val
        };
        for r in &words {
            for s in &words {
                let rs = r.concat(s);
                let sr = s.concat(r);
                for i in 1..=n {
                    let a = eval(&rs, i, &mut cache);
                    let b = eval(&sr, i, &mut cache);
                    assert_eq!(a, b, "cyclic invariance failed: n={n} r={r} s={s} i={i}");
                }
            }
        }
    }
    c.pass();
}

#[test]
fn criterion_07_conjugation_invariance() {
    let c = Criterion("criterion 7 (norm outputs are conjugation invariants)");
    // every basis element at n=2, m=2, word degree <= 2, plus seeded random
    // elements at n=2 and n=3
    let ctx2 = GenericMatrixContext::new(2, 2);
    for b in basis_elements(2, 2, 2) {
        let p = ctx2.norm_basis(&b).unwrap();
        assert!(
            ctx2.check_conj_invariance(p.poly(), 20, 7007).unwrap(),
            "norm of {b:?} failed the invariance check"
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7070);
    for _ in 0..20 {
        let u = random_elem(&mut rng, 2, 2, 3, 3);
        let p = ctx2.norm(&u).unwrap();
        assert!(ctx2.check_conj_invariance(p.poly(), 20, 7171).unwrap());
    }
    let ctx3 = GenericMatrixContext::new(3, 2);
    for _ in 0..10 {
        let u = random_elem(&mut rng, 3, 2, 2, 2);
        let p = ctx3.norm(&u).unwrap();
        assert!(ctx3.check_conj_invariance(p.poly(), 20, 7272).unwrap());
    }
    c.pass();
}

#[test]
fn criterion_08_newton_identities_and_phk_table() {
    let c = Criterion("criterion 8 (Newton identities and the P_{h,k} table)");
    for n in 1..=4usize {
        // p_r = sum_{i<r} (-1)^(i-1) e_i p_(r-i) + (-1)^(r-1) r e_r,
        // with e_i = 0 beyond n
        for r in 1..=6usize {
            let mut acc = symfun::power_sum(r, n).unwrap().poly().clone();
            for i in 1..r.min(n + 1) {
                let term = symfun::elementary(i, n)
                    .unwrap()
                    .poly()
                    .mul(symfun::power_sum(r - i, n).unwrap().poly());
                acc = if i % 2 == 1 {
                    acc.sub(&term)
                } else {
                    acc.add(&term)
                };
            }
            if r <= n {
                let last = symfun::elementary(r, n)
                    .unwrap()
                    .poly()
                    .scale(&BigInt::from(r as i64));
                acc = if r % 2 == 1 {
                    acc.sub(&last)
                } else {
                    acc.add(&last)
                };
            }
            assert!(acc.is_zero(), "Newton identity failed for n={n}, r={r}");
        }
        // the P table matches its defining plethysm after substitution
        for h in 1..=n {
            for k in 1..=6usize {
                let table = symfun::p_hk(h, k, n).unwrap();
                let expanded = table.eval_elementary().unwrap();
                let direct = symfun::plethysm_pk(&symfun::elementary(h, n).unwrap(), k);
                assert_eq!(expanded, direct, "P table failed for n={n} h={h} k={k}");
            }
        }
    }
    c.pass();
}

#[test]
fn criterion_09_hilbert_scheme_shadow() {
    let c = Criterion("criterion 9 (free action rank and conjugation-invariant coordinates)");
    for (n, m) in [(2usize, 1usize), (2, 2), (3, 2)] {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + (n * 10 + m) as u64);
        for _ in 0..50 {
            let t = random_cyclic_triple(&mut rng, n, m);
            assert_eq!(
                t.stabilizer_rank().unwrap(),
                n * n,
                "cyclic triple does not act freely (n={n}, m={m})"
            );
            let g = loop {
                let g: RatMatrix =
                    Matrix::from_fn(n, n, |_, _| rat(rng.gen_range(-3i64..=3)));
                if !Zero::is_zero(&g.det().unwrap()) {
                    break g;
                }
            };
            let cutoff = n * n;
            let before = hc_eval_triple(&t, cutoff).unwrap();
            let after = hc_eval_triple(&t.conjugate(&g).unwrap(), cutoff).unwrap();
            assert_eq!(before, after, "coordinates moved under conjugation");
        }
    }
    c.pass();
}

#[test]
fn criterion_10_symmetric_product_sanity() {
    let c = Criterion("criterion 10 (diagonal points give elementary symmetric coordinates)");
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for n in 1..=3usize {
        for _ in 0..20 {
            let diag: Vec<i64> = (0..n).map(|_| rng.gen_range(-4i64..=4)).collect();
            let mat = Matrix::from_fn(n, n, |i, j| if i == j { rat(diag[i]) } else { rat(0) });
            let rep = RepPoint::new_commutative(n, vec![mat]).unwrap();
            let t = Triple::new(rep, vec![rat(1); n]);
            let hc = hc_eval_triple(&t, n * n).unwrap();
            let x1 = Necklace::of(&Word::letter(1)).unwrap();
            for i in 1..=n {
                // e_i of the diagonal entries, brute force over subsets
                let mut expected = BigRational::zero();
                for subset in subsets(n, i) {
                    let mut prod = BigRational::one();
                    for &idx in &subset {
                        prod *= rat(diag[idx]);
                    }
                    expected += prod;
                }
                assert_eq!(hc.get(&x1, i), Some(&expected), "n={n} i={i} diag={diag:?}");
            }
        }
    }
    c.pass();
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn mobius(mut n: usize) -> i64 {
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

#[test]
fn criterion_11_necklace_counts() {
    let c = Criterion("criterion 11 (necklace counts match the Moebius formula)");
    for m in 1..=3usize {
        let all = necklaces_up_to(m as u8, 8);
        for d in 1..=8usize {
            let found = all.iter().filter(|x| x.degree() == d).count() as i64;
            let total: i64 = (1..=d)
                .filter(|e| d % e == 0)
                .map(|e| mobius(e) * (m as i64).pow((d / e) as u32))
                .sum();
            assert_eq!(found, total / d as i64, "m={m} d={d}");
        }
    }
    c.pass();
}

#[test]
fn criterion_12_cli_determinism_and_round_trip() {
    let c = Criterion("criterion 12 (CLI determinism and parse/render round trip)");
    let bin = env!("CARGO_BIN_EXE_gamma");

    let hc_input = std::env::temp_dir().join("dp_acceptance_hc_input.json");
    std::fs::write(
        &hc_input,
        r#"{"n":2,"m":1,"matrices":[[["3","1/2"],["0","7"]]],"v":["1","0"]}"#,
    )
    .unwrap();
    let hc_path = hc_input.to_str().unwrap();

    let documented: Vec<Vec<&str>> = vec![
        vec!["mul", "--n", "2", "--m", "2", "D(2;x1)", "D(2;x2)"],
        vec!["mul", "--n", "2", "--m", "2", "--json", "D(2;x1)", "D(2;x2)"],
        vec!["power", "--n", "2", "--m", "2", "x1 + x2"],
        vec!["decompose", "--n", "2", "--m", "2", "D(2; x1, x2)"],
        vec![
            "decompose",
            "--n",
            "2",
            "--m",
            "2",
            "--primitive",
            "--abelianize",
            "D(2; x1.x1)",
        ],
        vec!["norm", "--n", "2", "--m", "2", "D(2; x1, x2)"],
        vec!["norm", "--n", "2", "--m", "2", "--json", "D(2; x1)"],
        vec!["symfun", "--n", "2", "phk", "1", "2"],
        vec!["symfun", "--n", "3", "elementary", "2"],
        vec!["symfun", "--n", "2", "power-sum", "4"],
        vec!["necklaces", "--m", "2", "--max-degree", "3"],
        vec!["necklaces", "--m", "3", "--max-degree", "4", "--json"],
        vec!["hc", "--input", hc_path, "--max-degree", "2"],
        vec!["oracle-check", "--n", "2", "--m", "2", "--samples", "5", "--seed", "42"],
        vec![
            "invariance-check",
            "--n",
            "2",
            "--m",
            "2",
            "--samples",
            "3",
            "--trials",
            "5",
            "--seed",
            "42",
        ],
        vec!["selftest"],
    ];

    for args in &documented {
        let run = |args: &[&str]| {
            let out = Command::new(bin)
                .args(args)
                .output()
                .expect("binary runs");
            assert!(
                out.status.success(),
                "command {:?} failed: {}",
                args,
                String::from_utf8_lossy(&out.stderr)
            );
            out.stdout
        };
        let first = run(args);
        let second = run(args);
        assert_eq!(first, second, "non-deterministic output for {args:?}");
        assert!(!first.is_empty(), "no output for {args:?}");
    }

    // exit codes: domain errors are 1, usage errors are 2
    let bad = Command::new(bin)
        .args(["mul", "--n", "2", "--m", "2", "D(2; x9)", "D(2; x1)"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let usage = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));

    // parse/render round trip on 500 seeded random elements
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    for _ in 0..500 {
        let u = random_elem(&mut rng, 3, 2, 3, 4);
        let text = render_element(&u);
        assert_eq!(parse_element(&text, 3, 2).unwrap(), u, "round trip of {text}");
    }
    c.pass();
}
