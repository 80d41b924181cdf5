//! Randomized invariants: the degree-one differential, cell suffix closure,
//! Smith forms against determinantal divisors, cyclotomic identities,
//! specialization at `t = ±1`, and the parallel engine.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use garside_homology::algebra::{cyclotomic, Fp, Poly, Rational};
use garside_homology::complex::{Chain, Resolution, Term};
use garside_homology::engine::{run_degree, run_through, store_digest, EngineError, RunOptions};
use garside_homology::garside::{build_from_data, build_from_presentation, dual_braid_data, GarsideStructure, Presentation};
use garside_homology::matrix::SparseMatrix;
use garside_homology::smith::{smith_dense, smith_multimodular, smith_sparse};
use garside_homology::specialize::{Coefficients, WeightedComplex};

pub type Property = fn() -> Result<(), String>;

pub const SUITE: [(&str, Property); 9] = [
    ("d1 Γ(g) = g[∅] − [∅]", gamma_bounds_to_g_minus_one),
    ("cells are closed under suffixes", cells_are_closed_under_suffixes),
    ("Smith factors equal determinantal divisor quotients", smith_matches_determinantal_divisors),
    ("Smith transforms are unimodular", smith_transforms_are_unimodular),
    ("multimodular Smith over Q[t] equals exact elimination", multimodular_smith_matches_exact),
    ("Φ_{m p^i} ≡ Φ_m^φ(p^i) mod p", cyclotomic_reduction_mod_p),
    ("(t^20−1)/(t+1) = Φ1Φ4Φ5Φ10Φ20", t20_minus_one_over_t_plus_one),
    ("Laurent at t = ±1 equals trivial and sign", laurent_at_plus_minus_one_is_trivial_and_sign),
    ("I2(6) engine is deterministic and resumable", engine_is_deterministic_and_resumable),
];

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() }).run(&strategy, test).map_err(|e| e.to_string())
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn structures() -> &'static [GarsideStructure] {
    static S: OnceLock<Vec<GarsideStructure>> = OnceLock::new();
    S.get_or_init(|| {
        let d = dual_braid_data(4).unwrap();
        vec![
            build_from_presentation(&Presentation::g12()).unwrap(),
            build_from_presentation(&Presentation::g22()).unwrap(),
            build_from_presentation(&Presentation::dihedral(5).unwrap()).unwrap(),
            build_from_presentation(&Presentation::type_a(3).unwrap()).unwrap(),
            build_from_data("dual A3", &d.atoms, &d.simples, &d.lengths).unwrap(),
        ]
    })
}

fn weighted(g: &GarsideStructure) -> WeightedComplex {
    let mut res = Resolution::new(g);
    res.compute_through(res.top_degree()).unwrap();
    WeightedComplex::from_resolution(&res, res.top_degree()).unwrap()
}

pub fn gamma_bounds_to_g_minus_one() -> Result<(), String> {
    let strategy = (0..structures().len(), prop::collection::vec(0..16u16, 0..12));
    run(256, strategy, |(which, word)| {
        let g = &structures()[which];
        let word: Vec<u16> = word.into_iter().map(|a| a % g.num_atoms() as u16).collect();
        let x = g.normal_form(&word);
        let mut res = Resolution::new(g);
        res.compute_through(1).unwrap();
        let d = res.apply(1, &res.gamma(&x).unwrap()).unwrap();
        let expected = Chain::from_terms([
            Term { cell: 0, element: x, coeff: BigInt::one() },
            Term { cell: 0, element: g.normal_form(&[]), coeff: -BigInt::one() },
        ]);
        prop_assert_eq!(d, expected);
        Ok(())
    })
}

pub fn cells_are_closed_under_suffixes() -> Result<(), String> {
    for g in structures() {
        let res = Resolution::new(g);
        let cells = res.cells();
        for n in 1..=cells.top_degree() {
            for c in cells.cells(n) {
                let tail = c.tail();
                ensure(tail.degree() == n - 1 && cells.index_of(&tail).is_some(), || {
                    format!("{}: tail of {c:?} is not a cell", g.name())
                })?;
            }
        }
    }
    Ok(())
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let s = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                s * &m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors from the gcds of the `k × k` minors.
fn determinantal_factors(a: &[Vec<BigInt>]) -> (usize, Vec<BigInt>) {
    let (rows, cols) = (a.len(), a[0].len());
    let mut divisors = vec![BigInt::one()];
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    let rank = divisors.len() - 1;
    let factors = divisors.windows(2).map(|w| &w[1] / &w[0]).filter(|f| !f.is_one()).collect();
    (rank, factors)
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    a.iter().map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect()).collect()
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    (1..=4usize, 1..=4usize)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec((-6i64..=6).prop_map(BigInt::from), c), r))
}

pub fn smith_matches_determinantal_divisors() -> Result<(), String> {
    run(256, int_matrix(), |a| {
        let s = smith_sparse(&SparseMatrix::from_dense(&a, ()));
        for w in s.factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(s.factors.iter().all(|f| f.is_positive() && !f.is_one()));
        prop_assert_eq!((s.rank, s.factors), determinantal_factors(&a));
        Ok(())
    })
}

pub fn smith_transforms_are_unimodular() -> Result<(), String> {
    run(256, int_matrix(), |a| {
        let t = smith_dense(&a, ());
        prop_assert_eq!(matmul(&matmul(&t.u, &a), &t.v), t.d.clone());
        for (i, row) in t.d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert!(i == j || x.is_zero());
            }
        }
        for w in t.diagonal.windows(2) {
            prop_assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
        }
        prop_assert!(det(&t.u).abs().is_one());
        prop_assert!(det(&t.v).abs().is_one());
        Ok(())
    })
}

pub fn multimodular_smith_matches_exact() -> Result<(), String> {
    let poly = prop::collection::vec(-3i64..=3, 0..4).prop_map(|c| Poly::<Rational>::from_ints((), &c));
    run(64, prop::collection::vec(prop::collection::vec(poly, 3), 1..=3), |rows| {
        let m = SparseMatrix::from_dense(&rows, ());
        prop_assert_eq!(smith_multimodular(&m), smith_sparse(&m));
        Ok(())
    })
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

pub fn cyclotomic_reduction_mod_p() -> Result<(), String> {
    for (p, q) in [(2u32, 2u32), (3, 3), (2, 4), (5, 5), (7, 7), (2, 8), (3, 9), (11, 11), (13, 13), (2, 16)] {
        for m in (1..=20u32).filter(|m| m % p != 0) {
            let lhs = Poly::<Fp>::from_bigints(p as u64, &cyclotomic(m * q));
            let rhs = Poly::<Fp>::from_bigints(p as u64, &cyclotomic(m)).pow(euler_phi(q));
            ensure(lhs == rhs, || format!("m = {m}, p^i = {q}: {lhs} against {rhs}"))?;
        }
    }
    Ok(())
}

pub fn t20_minus_one_over_t_plus_one() -> Result<(), String> {
    use garside_homology::algebra::{Euclidean, Ring};

    let phi = |n| Poly::<Rational>::from_bigints((), &cyclotomic(n));
    let mut t20 = vec![0i64; 21];
    t20[0] = -1;
    t20[20] = 1;
    let quotient = Poly::<Rational>::from_ints((), &t20).exact_div(&Poly::from_ints((), &[1, 1])).unwrap();
    let product = [1, 4, 5, 10, 20].into_iter().map(phi).fold(Poly::one(()), |acc, f| acc.mul(&f));
    ensure(quotient == product, || format!("{quotient} against {product}"))
}

pub fn laurent_at_plus_minus_one_is_trivial_and_sign() -> Result<(), String> {
    for g in structures() {
        let w = weighted(g);
        let l = w.specialize_laurent::<Rational>(());
        for (x, c) in [(Rational::one(), Coefficients::Trivial), (-Rational::one(), Coefficients::Sign)] {
            let at = l.evaluate(&x);
            let z = w.specialize_integer(c).to_rational();
            for n in 1..at.matrices.len() {
                ensure(at.matrices[n].to_dense() == z.matrices[n].to_dense(), || {
                    format!("{} degree {n} at t = {x}", g.name())
                })?;
            }
        }
    }
    Ok(())
}

fn i2_6() -> &'static GarsideStructure {
    static G: OnceLock<GarsideStructure> = OnceLock::new();
    G.get_or_init(|| build_from_presentation(&Presentation::dihedral(6).unwrap()).unwrap())
}

fn reference_digests(g: &GarsideStructure) -> Vec<String> {
    let mut r = Resolution::new(g);
    let top = r.top_degree();
    run_through(&mut r, top, &RunOptions { workers: 1, ..RunOptions::default() }).unwrap();
    (1..=top).map(|d| store_digest(&r, d).unwrap()).collect()
}

/// Every degree is killed after `kill` records, then finished by a fresh
/// resolution replaying the journal.
pub fn engine_is_deterministic_and_resumable() -> Result<(), String> {
    let g = i2_6();
    let expected = reference_digests(g);
    run(16, (1..=8usize, 1..4usize), |(workers, kill)| {
        let dir = tempfile::tempdir().unwrap();
        let journal = RunOptions { workers, journal_dir: Some(dir.path().to_path_buf()), ..RunOptions::default() };
        let mut first = Resolution::new(g);
        for degree in 1..=first.top_degree() {
            let total = first.cells().count(degree);
            let killed = RunOptions { workers, journal_dir: journal.journal_dir.clone(), stop_after: Some(kill), progress: None };
            match run_degree(&mut first, degree, &killed) {
                Err(EngineError::Interrupted { written }) => prop_assert!(written == kill && kill <= total),
                Ok(_) => prop_assert!(kill > total),
                Err(e) => panic!("{e}"),
            }
            let mut resumed = Resolution::new(g);
            run_through(&mut resumed, degree - 1, &journal).unwrap();
            let report = run_degree(&mut resumed, degree, &journal).unwrap();
            prop_assert_eq!(report.resumed + report.computed, total);
            prop_assert_eq!(report.resumed, kill.min(total));
            prop_assert_eq!(&report.digest, &expected[degree - 1]);
            first = resumed;
        }
        Ok(())
    })
}
