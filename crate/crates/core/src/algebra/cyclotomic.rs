use std::fmt;

use num_bigint::BigInt;

use super::field::{Field, Rational};
use super::poly::Poly;
use super::{Euclidean, Ring};

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest first,
/// from `Φ_n = ∏_{d|n} (t^d − 1)^{μ(n/d)}`.
pub fn cyclotomic(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num: Poly<Rational> = Ring::one(());
    let mut den: Poly<Rational> = Ring::one(());
    for d in (1..=n).filter(|d| n % d == 0) {
        let mut c = vec![0i64; d as usize + 1];
        c[0] = -1;
        c[d as usize] = 1;
        let f = Poly::from_ints((), &c);
        match mobius(n / d) {
            1 => num = num.mul(&f),
            -1 => den = den.mul(&f),
            _ => {}
        }
    }
    let q = num.exact_div(&den).expect("cyclotomic quotient is exact");
    q.coeffs().iter().map(|c| c.to_integer()).collect()
}

/// Result of greedy trial division by `Φ_1, …, Φ_{n_max}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclotomicReport<F: Field> {
    /// `(n, multiplicity)` in increasing `n`.
    pub factors: Vec<(u32, u32)>,
    /// Monic cofactor left after all divisions (1 when fully cyclotomic).
    pub remainder: Poly<F>,
}

impl<F: Field> CyclotomicReport<F> {
    pub fn is_complete(&self) -> bool {
        self.remainder.is_unit()
    }
}

/// Divides out cyclotomic factors, smallest index first. Over a prime field
/// the reductions mod `p` are used, so the decomposition need not be unique.
pub fn cyclotomic_report<F: Field>(poly: &Poly<F>, n_max: u32) -> CyclotomicReport<F> {
    let ctx = poly.ctx();
    let mut rest = poly.normalize();
    let mut factors = Vec::new();
    if rest.is_zero() {
        return CyclotomicReport { factors, remainder: rest };
    }
    for n in 1..=n_max {
        if rest.is_unit() {
            break;
        }
        let phi = Poly::from_bigints(ctx, &cyclotomic(n));
        if phi.degree() > rest.degree() {
            continue;
        }
        let mut mult = 0;
        while let Some(q) = rest.exact_div(&phi) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((n, mult));
        }
    }
    CyclotomicReport { factors, remainder: rest }
}

impl<F: Field> fmt::Display for CyclotomicReport<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(n, m)| if m == 1 { format!("Phi{n}") } else { format!("Phi{n}^{m}") })
            .collect();
        if !self.remainder.is_unit() {
            parts.push(format!("({})", self.remainder));
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fp;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(2), ints(&[1, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(9), ints(&[1, 0, 0, 1, 0, 0, 1]));
        // first cyclotomic with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic(105).iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn product_over_divisors_is_t_n_minus_one() {
        for n in 1..=30u32 {
            let prod = (1..=n)
                .filter(|d| n % d == 0)
                .fold(Poly::<Rational>::one(()), |acc, d| acc.mul(&Poly::from_bigints((), &cyclotomic(d))));
            let mut c = vec![0i64; n as usize + 1];
            c[0] = -1;
            c[n as usize] = 1;
            assert_eq!(prod, Poly::from_ints((), &c));
        }
    }

    #[test]
    fn report_over_rationals() {
        let p = Poly::<Rational>::from_ints((), &[1, -1, 0, 1, 0, -1, 1]);
        let r = cyclotomic_report(&p, 100);
        assert_eq!(r.factors, vec![(6, 1), (12, 1)]);
        assert!(r.is_complete());
        assert_eq!(r.to_string(), "Phi6 * Phi12");
    }

    #[test]
    fn report_mod_two() {
        let p = Poly::<Fp>::from_ints(2, &[1, -1, 0, 1, 0, -1, 1]);
        let r = cyclotomic_report(&p, 100);
        assert_eq!(r.factors, vec![(3, 3)]);
    }

    #[test]
    fn remainder_is_kept() {
        let p = Poly::<Rational>::from_ints((), &[-2, 0, 1]);
        let r = cyclotomic_report(&p, 50);
        assert!(r.factors.is_empty());
        assert_eq!(r.remainder, p);
        assert_eq!(r.to_string(), "(t^2 - 2)");
    }
}
