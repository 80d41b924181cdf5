//! Independent routes to the same homology must agree: the order complex of
//! the dihedral Artin monoids against their Salvetti complexes, and the
//! classical against the dual braid monoid of the same braid group.

use garside_homology::algebra::{Fp, Rational};
use garside_homology::complex::Resolution;
use garside_homology::garside::{
    build_from_data, build_from_presentation, classical_braid_data, dual_braid_data, GarsideStructure, Presentation,
};
use garside_homology::homology::{integer_homology, laurent_homology, AbelianGroup, LaurentHomology, Limits};
use garside_homology::salvetti::DihedralComplex;
use garside_homology::specialize::{Coefficients, WeightedComplex};

fn weighted(g: &GarsideStructure) -> WeightedComplex {
    let mut res = Resolution::new(g);
    res.compute_through(res.top_degree()).unwrap();
    WeightedComplex::from_resolution(&res, res.top_degree()).unwrap()
}

struct Rows {
    trivial: Vec<AbelianGroup>,
    sign: Vec<AbelianGroup>,
    laurent: LaurentHomology<Rational>,
    mod2: LaurentHomology<Fp>,
}

fn rows(w: &WeightedComplex) -> Rows {
    let top = w.top_degree();
    Rows {
        trivial: integer_homology(&w.specialize_integer(Coefficients::Trivial)).unwrap(),
        sign: integer_homology(&w.specialize_integer(Coefficients::Sign)).unwrap(),
        laurent: laurent_homology::<Rational>(w, (), top, Limits::default()).unwrap(),
        mod2: laurent_homology::<Fp>(w, 2, top, Limits::default()).unwrap(),
    }
}

fn assert_same(a: &Rows, b: &Rows, what: &str) {
    assert_eq!(a.trivial, b.trivial, "{what}: trivial");
    assert_eq!(a.sign, b.sign, "{what}: sign");
    assert_eq!(a.laurent.homology, b.laurent.homology, "{what}: laurent");
    assert_eq!(a.mod2.homology, b.mod2.homology, "{what}: laurent mod 2");
}

#[test]
fn dihedral_order_complex_matches_salvetti() {
    for m in [3, 4, 5, 6] {
        let g = build_from_presentation(&Presentation::dihedral(m).unwrap()).unwrap();
        let dl = rows(&weighted(&g));
        let salvetti = rows(&DihedralComplex::new(m).unwrap().weighted(1, 1));
        assert_same(&dl, &salvetti, &format!("I2({m})"));
    }
}

#[test]
fn dihedral_rows_have_the_expected_shape() {
    // H_1 = Z for odd m (one conjugacy class of generators), Z^2 for even m
    for m in 3..=8 {
        let row = rows(&DihedralComplex::new(m).unwrap().weighted(1, 1)).trivial;
        let h1 = if m % 2 == 1 { "Z" } else { "Z^2" };
        let h2 = if m % 2 == 1 { "0" } else { "Z" };
        assert_eq!(row.iter().map(ToString::to_string).collect::<Vec<_>>(), ["Z", h1, h2], "m = {m}");
    }
}

#[test]
fn classical_and_dual_braid_monoids_agree() {
    for n in 3..=5 {
        let c = classical_braid_data(n).unwrap();
        let d = dual_braid_data(n).unwrap();
        let gc = build_from_data("classical", &c.atoms, &c.simples, &c.lengths).unwrap();
        let gd = build_from_data("dual", &d.atoms, &d.simples, &d.lengths).unwrap();
        assert_same(&rows(&weighted(&gc)), &rows(&weighted(&gd)), &format!("{n} strands"));
    }
}

#[test]
fn presentation_and_permutation_routes_agree() {
    for n in 2..=4 {
        let p = build_from_presentation(&Presentation::type_a(n).unwrap()).unwrap();
        let c = classical_braid_data(n + 1).unwrap();
        let d = build_from_data("classical", &c.atoms, &c.simples, &c.lengths).unwrap();
        assert_eq!(p.num_simples(), d.num_simples());
        assert_eq!(weighted(&p), weighted(&d), "A{n}");
    }
}

/// Fuks: `dim H^q(B_n; F_2)` is the number of ways of writing `n` as a sum
/// of powers of two with `n − q` parts.
fn fuks_betti(n: usize) -> Vec<usize> {
    fn count(rest: usize, largest: usize, parts: usize, out: &mut Vec<usize>, n: usize) {
        if rest == 0 {
            out[n - parts] += 1;
            return;
        }
        let mut p = largest;
        while p >= 1 {
            if p <= rest {
                count(rest - p, p, parts + 1, out, n);
            }
            p /= 2;
        }
    }
    let mut out = vec![0; n];
    count(n, n.next_power_of_two(), 0, &mut out, n);
    out
}

/// Mod-2 Betti numbers of an integral homology row, by universal coefficients.
fn mod2_betti(row: &[AbelianGroup]) -> Vec<usize> {
    let even = |g: &AbelianGroup| g.torsion.iter().filter(|t| !t.bit(0)).count();
    (0..row.len()).map(|q| row[q].free_rank + even(&row[q]) + if q > 0 { even(&row[q - 1]) } else { 0 }).collect()
}

#[test]
fn braid_groups_have_fuks_mod_two_betti_numbers() {
    assert_eq!(fuks_betti(4), [1, 1, 1, 1]);
    for n in 3..=6 {
        let d = dual_braid_data(n).unwrap();
        let g = build_from_data("dual", &d.atoms, &d.simples, &d.lengths).unwrap();
        let row = integer_homology(&weighted(&g).specialize_integer(Coefficients::Trivial)).unwrap();
        assert_eq!(row[1].to_string(), "Z");
        assert_eq!(mod2_betti(&row), fuks_betti(n), "{n} strands");
    }
}
