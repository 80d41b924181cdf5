use std::fmt;

use num_bigint::BigInt;

use super::field::Field;
use super::{Euclidean, Ring};

/// A univariate polynomial in `t`, coefficients lowest degree first, with no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<F: Field> {
    ctx: F::Ctx,
    c: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(ctx: F::Ctx, mut c: Vec<F>) -> Self {
        while c.last().is_some_and(Field::is_zero) {
            c.pop();
        }
        Poly { ctx, c }
    }

    pub fn from_ints(ctx: F::Ctx, coeffs: &[i64]) -> Self {
        Poly::new(ctx, coeffs.iter().map(|&v| F::from_bigint(&BigInt::from(v), ctx)).collect())
    }

    pub fn from_bigints(ctx: F::Ctx, coeffs: &[BigInt]) -> Self {
        Poly::new(ctx, coeffs.iter().map(|v| F::from_bigint(v, ctx)).collect())
    }

    pub fn constant(v: F) -> Self {
        let ctx = v.ctx();
        Poly::new(ctx, vec![v])
    }

    /// `t^k`.
    pub fn monomial(ctx: F::Ctx, k: usize) -> Self {
        let mut c = vec![F::zero(ctx); k + 1];
        c[k] = F::one(ctx);
        Poly { ctx, c }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.c.last()
    }

    /// Largest `k` with `t^k` dividing `self`.
    pub fn t_valuation(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    /// `self / t^k`, assuming `t^k` divides.
    pub fn shift_down(&self, k: usize) -> Self {
        Poly::new(self.ctx, self.c[k.min(self.c.len())..].to_vec())
    }

    /// Removes every factor `t`; `t` is a unit in the Laurent ring.
    pub fn strip_t(&self) -> Self {
        self.shift_down(self.t_valuation())
    }

    pub fn eval(&self, x: &F) -> F {
        self.c.iter().rev().fold(F::zero(self.ctx), |acc, a| acc.mul(x).add(a))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Ring::one(self.ctx), |acc: Self, _| acc.mul(self))
    }

    pub fn scale(&self, s: &F) -> Self {
        Poly::new(self.ctx, self.c.iter().map(|a| a.mul(s)).collect())
    }
}

impl<F: Field> Ring for Poly<F> {
    type Ctx = F::Ctx;

    fn ctx(&self) -> F::Ctx {
        self.ctx
    }
    fn zero(ctx: F::Ctx) -> Self {
        Poly { ctx, c: Vec::new() }
    }
    fn one(ctx: F::Ctx) -> Self {
        Poly::constant(F::one(ctx))
    }
    fn from_i64(v: i64, ctx: F::Ctx) -> Self {
        Poly::constant(F::from_bigint(&BigInt::from(v), ctx))
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let z = F::zero(self.ctx);
        let c = (0..n).map(|i| self.c.get(i).unwrap_or(&z).add(other.c.get(i).unwrap_or(&z))).collect();
        Poly::new(self.ctx, c)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.c.is_empty() || other.c.is_empty() {
            return Ring::zero(self.ctx);
        }
        let mut c = vec![F::zero(self.ctx); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(self.ctx, c)
    }
    fn neg(&self) -> Self {
        Poly { ctx: self.ctx, c: self.c.iter().map(Field::neg).collect() }
    }
}

impl<F: Field> Euclidean for Poly<F> {
    fn norm(&self) -> u64 {
        self.c.len() as u64
    }

    fn div_rem(&self, other: &Self) -> (Self, Self) {
        let d = other.degree().expect("division by zero polynomial");
        let inv = other.c[d].inv();
        let mut r = self.c.clone();
        if r.len() <= d {
            return (Ring::zero(self.ctx), self.clone());
        }
        let mut q = vec![F::zero(self.ctx); r.len() - d];
        for k in (d..r.len()).rev() {
            let coef = r[k].mul(&inv);
            if coef.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                r[k - d + j] = r[k - d + j].sub(&coef.mul(b));
            }
            q[k - d] = coef;
        }
        r.truncate(d);
        (Poly::new(self.ctx, q), Poly::new(self.ctx, r))
    }

    fn is_unit(&self) -> bool {
        self.c.len() == 1
    }

    fn normalizing_unit(&self) -> Self {
        match self.leading() {
            None => Ring::one(self.ctx),
            Some(l) => Poly::constant(l.inv()),
        }
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let one = F::one(self.ctx);
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let abs = if neg { a.neg() } else { a.clone() };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let coeff = if abs == one && k > 0 { String::new() } else { abs.to_string() };
            match k {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}t")?,
                _ => write!(f, "{coeff}t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, Rational};

    type Q = Poly<Rational>;

    #[test]
    fn division_with_remainder() {
        let a = Q::from_ints((), &[-1, 0, 0, 1]);
        let b = Q::from_ints((), &[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Q::from_ints((), &[1, 1, 1]));
        assert!(r.is_zero());
        let (_, r) = Q::from_ints((), &[1, 0, 1]).div_rem(&b);
        assert_eq!(r, Q::from_ints((), &[2]));
    }

    #[test]
    fn gcd_is_monic() {
        let a = Q::from_ints((), &[-2, 0, 2]);
        let b = Q::from_ints((), &[3, 3]);
        assert_eq!(a.gcd(&b), Q::from_ints((), &[1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(Q::from_ints((), &[1, -1, 0, 1, 0, -1, 1]).to_string(), "t^6 - t^5 + t^3 - t + 1");
        assert_eq!(Q::from_ints((), &[0, -2]).to_string(), "-2t");
        assert_eq!(Poly::<Fp>::from_ints(2, &[1, 1, 1]).to_string(), "t^2 + t + 1");
    }

    #[test]
    fn strip_t_powers() {
        let a = Q::from_ints((), &[0, 0, 1, 1]);
        assert_eq!(a.t_valuation(), 2);
        assert_eq!(a.strip_t(), Q::from_ints((), &[1, 1]));
    }
}
