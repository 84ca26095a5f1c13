use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use divided_powers::decomp::{decompose, GenPoly};
use divided_powers::error::{Error, Result};
use divided_powers::gamma::{basis_elements, random_basis_elem, random_elem, GammaElem};
use divided_powers::hilb::{hc_eval, read_rep_json};
use divided_powers::norm::GenericMatrixContext;
use divided_powers::symfun;
use divided_powers::tensor::SymTensor;
use divided_powers::text::{
    element_to_json, parse_element, parse_free_elem, poly_to_json, render_element,
};
use divided_powers::words::necklaces_up_to;

/// Exact divided-powers algebra calculator: star products, divided powers,
/// generator decompositions, norms into generic-matrix invariants, necklace
/// enumeration and Hilbert-Chow evaluation.
#[derive(Parser)]
#[command(name = "gamma", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Star-multiply two elements given in the D(n; ...) grammar.
    Mul {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u8,
        lhs: String,
        rhs: String,
        #[arg(long)]
        json: bool,
    },
    /// n-th divided power of a free-algebra element ("x1 + 2*x2 - 1").
    Power {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u8,
        elem: String,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite an element as a polynomial in the generators E(i; w).
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u8,
        elem: String,
        /// Reduce generator words to primitive ones.
        #[arg(long)]
        primitive: bool,
        /// Normalize words to cyclic representatives and sort products.
        #[arg(long)]
        abelianize: bool,
        #[arg(long)]
        json: bool,
    },
    /// Norm of an element: a polynomial in the generic-matrix entries.
    Norm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u8,
        elem: String,
        #[arg(long)]
        json: bool,
    },
    /// Check the star product against the symmetric-tensor model.
    OracleCheck {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: u8,
        /// Word degree bound for the exhaustive sweep.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Number of random element pairs to test on top.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Symmetric-function tables: elementary, power sums, P_{h,k}.
    Symfun {
        #[arg(long)]
        n: usize,
        #[command(subcommand)]
        op: SymfunOp,
    },
    /// List primitive necklaces up to a degree.
    Necklaces {
        #[arg(long)]
        m: u8,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the Hilbert-Chow map on a JSON representation point.
    Hc {
        /// Input file; "-" or absent reads stdin. Expected document:
        /// {"n":2,"m":1,"matrices":[[["0","1"],["0","0"]]],"v":["1","0"]}
        /// with rationals as "p/q" strings; "v" is optional and unused.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Necklace degree cutoff; defaults to n^2.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Probabilistic conjugation-invariance check of sampled norms.
    InvarianceCheck {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: u8,
        /// Number of sampled basis elements to norm and check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run the built-in oracle and homomorphism suites at small degree.
    Selftest,
}

#[derive(Subcommand)]
enum SymfunOp {
    /// The i-th elementary symmetric polynomial.
    Elementary { i: usize },
    /// The r-th power sum.
    PowerSum { r: usize },
    /// e_h(x^k) expressed in the e-basis.
    Phk { h: usize, k: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn print_elem(u: &GammaElem, json: bool) {
    if json {
        println!("{}", element_to_json(u));
    } else {
        println!("{}", render_element(u));
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Mul { n, m, lhs, rhs, json } => {
            let a = parse_element(&lhs, n, m)?;
            let b = parse_element(&rhs, n, m)?;
            print_elem(&a.star(&b)?, json);
            Ok(())
        }
        Cmd::Power { n, m, elem, json } => {
            let f = parse_free_elem(&elem, m)?;
            print_elem(&GammaElem::gamma_power(&f, n), json);
            Ok(())
        }
        Cmd::Decompose {
            n,
            m,
            elem,
            primitive,
            abelianize,
            json,
        } => {
            let u = parse_element(&elem, n, m)?;
            let mut acc = GenPoly::zero(n);
            for (b, c) in u.terms() {
                acc = acc.add(&decompose(b).scale(c));
            }
            if primitive {
                acc = acc.reduce_powers();
            }
            if abelianize {
                acc = acc.abelianize();
            }
            if json {
                println!("{}", genpoly_json(&acc));
            } else {
                println!("{acc}");
            }
            Ok(())
        }
        Cmd::Norm { n, m, elem, json } => {
            let u = parse_element(&elem, n, m)?;
            let ctx = GenericMatrixContext::new(n, m);
            let p = ctx.norm(&u)?;
            if json {
                println!("{}", poly_to_json(p.poly()));
            } else {
                println!("{}", p.poly());
            }
            Ok(())
        }
        Cmd::OracleCheck {
            n,
            m,
            max_degree,
            samples,
            seed,
        } => oracle_check(n, m, max_degree, samples, seed),
        Cmd::Symfun { n, op } => {
            match op {
                SymfunOp::Elementary { i } => {
                    println!("{}", symfun::elementary(i, n)?.poly());
                }
                SymfunOp::PowerSum { r } => {
                    println!("{}", symfun::power_sum(r, n)?.poly());
                }
                SymfunOp::Phk { h, k } => {
                    println!("{}", symfun::p_hk(h, k, n)?);
                }
            }
            Ok(())
        }
        Cmd::Necklaces { m, max_degree, json } => {
            let all = necklaces_up_to(m, max_degree);
            if json {
                let words: Vec<String> = all.iter().map(|x| x.to_string()).collect();
                println!("{}", serde_json::json!({ "necklaces": words }));
            } else {
                for x in &all {
                    println!("{x}");
                }
            }
            Ok(())
        }
        Cmd::Hc { input, max_degree } => {
            let src = match input {
                Some(ref p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
                    .map_err(|e| Error::Domain(format!("cannot read {}: {e}", p.display())))?,
                _ => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| Error::Domain(format!("cannot read stdin: {e}")))?;
                    buf
                }
            };
            let (rep, _v) = read_rep_json(&src)?;
            let cutoff = max_degree.unwrap_or(rep.n() * rep.n());
            let point = hc_eval(&rep, cutoff)?;
            println!("{}", point.to_json());
            Ok(())
        }
        Cmd::InvarianceCheck {
            n,
            m,
            samples,
            trials,
            seed,
        } => invariance_check(n, m, samples, trials, seed),
        Cmd::Selftest => selftest(),
    }
}

fn genpoly_json(g: &GenPoly) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = g
        .terms()
        .map(|(seq, c)| {
            let symbols: Vec<serde_json::Value> = seq
                .iter()
                .map(|s| serde_json::json!({"i": s.i, "word": s.word.to_string()}))
                .collect();
            serde_json::json!({"coeff": c.to_string(), "symbols": symbols})
        })
        .collect();
    serde_json::json!({
        "n": g.n(),
        "abelianized": g.is_abelianized(),
        "terms": terms,
    })
}

fn oracle_check(n: usize, m: u8, max_degree: usize, samples: usize, seed: u64) -> Result<()> {
    let all = basis_elements(n, m, max_degree);
    let mut checked = 0usize;
    for bu in &all {
        for bv in &all {
            let u = GammaElem::from_basis(bu.clone());
            let v = GammaElem::from_basis(bv.clone());
            let lhs = SymTensor::embed(&u.star(&v)?);
            let rhs = SymTensor::embed(&u).mul(&SymTensor::embed(&v))?;
            if lhs != rhs {
                return Err(Error::Domain(format!(
                    "oracle mismatch on basis pair {u} / {v}"
                )));
            }
            checked += 1;
        }
    }
    println!(
        "oracle-check: exhaustive basis pairs (degree <= {max_degree}): ok ({checked} pairs)"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let u = random_elem(&mut rng, n, m, max_degree.max(1), 3);
        let v = random_elem(&mut rng, n, m, max_degree.max(1), 3);
        let lhs = SymTensor::embed(&u.star(&v)?);
        let rhs = SymTensor::embed(&u).mul(&SymTensor::embed(&v))?;
        if lhs != rhs {
            return Err(Error::Domain(format!(
                "oracle mismatch on random pair {u} / {v}"
            )));
        }
    }
    println!("oracle-check: random pairs: ok ({samples} pairs, seed {seed})");
    Ok(())
}

fn invariance_check(n: usize, m: u8, samples: usize, trials: usize, seed: u64) -> Result<()> {
    let ctx = GenericMatrixContext::new(n, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    for idx in 0..samples {
        let b = random_basis_elem(&mut rng, n, m, 2);
        let p = ctx.norm_basis(&b)?;
        let ok = ctx.check_conj_invariance(p.poly(), trials, seed.wrapping_add(idx as u64))?;
        println!(
            "invariance-check: {} -> {}",
            GammaElem::from_basis(b),
            if ok { "ok" } else { "FAILED" }
        );
        if !ok {
            failures += 1;
        }
    }
    if failures > 0 {
        return Err(Error::Domain(format!(
            "{failures} of {samples} sampled norms failed the invariance check"
        )));
    }
    println!("invariance-check: all {samples} sampled norms invariant ({trials} trials each)");
    Ok(())
}

fn selftest() -> Result<()> {
    for n in 1..=2usize {
        let all = basis_elements(n, 2, 2);
        for bu in &all {
            for bv in &all {
                let u = GammaElem::from_basis(bu.clone());
                let v = GammaElem::from_basis(bv.clone());
                let lhs = SymTensor::embed(&u.star(&v)?);
                let rhs = SymTensor::embed(&u).mul(&SymTensor::embed(&v))?;
                if lhs != rhs {
                    return Err(Error::Domain(format!("oracle suite failed at {u} / {v}")));
                }
            }
        }
        println!(
            "selftest: oracle suite (n = {n}): ok ({} pairs)",
            all.len() * all.len()
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let u = random_elem(&mut rng, 2, 2, 2, 2);
        let v = random_elem(&mut rng, 2, 2, 2, 2);
        let t = random_elem(&mut rng, 2, 2, 2, 2);
        let lhs = u.star(&v)?.star(&t)?;
        let rhs = u.star(&v.star(&t)?)?;
        if lhs != rhs {
            return Err(Error::Domain("associativity suite failed".into()));
        }
    }
    println!("selftest: associativity suite (n = 2): ok (20 triples)");

    let ctx = GenericMatrixContext::new(2, 2);
    let all = basis_elements(2, 2, 2);
    for bu in &all {
        for bv in &all {
            let u = GammaElem::from_basis(bu.clone());
            let v = GammaElem::from_basis(bv.clone());
            let lhs = ctx.norm(&u.star(&v)?)?;
            let rhs = ctx.norm(&u)?.mul(&ctx.norm(&v)?);
            if lhs != rhs {
                return Err(Error::Domain(format!(
                    "norm homomorphism suite failed at {u} / {v}"
                )));
            }
        }
    }
    println!(
        "selftest: norm homomorphism suite (n = 2): ok ({} pairs)",
        all.len() * all.len()
    );
    Ok(())
}
