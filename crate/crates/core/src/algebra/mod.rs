//! Coefficient rings: integers, the rationals, prime fields and univariate
//! polynomials over a field.

mod cyclotomic;
mod expr;
mod field;
mod poly;

pub use cyclotomic::{cyclotomic, cyclotomic_report, CyclotomicReport};
pub use expr::{parse_poly, ExprError};
pub use field::{check_prime, Field, Fp, Rational};
pub use poly::Poly;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// A commutative ring whose elements may need a runtime context (the
/// characteristic of a prime field, for instance) to build constants.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Ctx: Copy + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one(self.ctx())
    }
}

/// A Euclidean domain.
pub trait Euclidean: Ring {
    /// Size used for pivot selection; remainders are strictly smaller in
    /// the underlying Euclidean function.
    fn norm(&self) -> u64;
    fn div_rem(&self, other: &Self) -> (Self, Self);
    fn is_unit(&self) -> bool;
    /// Unit `u` such that `u·self` is the canonical associate.
    fn normalizing_unit(&self) -> Self;

    /// Canonical associate: nonnegative integers, monic polynomials.
    fn normalize(&self) -> Self {
        self.mul(&self.normalizing_unit())
    }

    /// `Some(self / other)` when `other` divides `self`.
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return self.is_zero().then(|| self.clone());
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.normalize()
    }

    /// `(g, x, y)` with `x·self + y·other = g`; `g` is not normalized.
    fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let ctx = self.ctx();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut x0, mut x1) = (Self::one(ctx), Self::zero(ctx));
        let (mut y0, mut y1) = (Self::zero(ctx), Self::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let x2 = x0.sub(&q.mul(&x1));
            x0 = std::mem::replace(&mut x1, x2);
            let y2 = y0.sub(&q.mul(&y1));
            y0 = std::mem::replace(&mut y1, y2);
        }
        (r0, x0, y0)
    }

    fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ctx());
        }
        let g = self.gcd(other);
        self.exact_div(&g).expect("gcd divides").mul(other).normalize()
    }
}

impl Ring for BigInt {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        Zero::zero()
    }
    fn one(_: ()) -> Self {
        One::one()
    }
    fn from_i64(v: i64, _: ()) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Euclidean for BigInt {
    fn norm(&self) -> u64 {
        self.bits()
    }
    fn div_rem(&self, other: &Self) -> (Self, Self) {
        Integer::div_rem(self, other)
    }
    fn is_unit(&self) -> bool {
        One::is_one(&num_traits::Signed::abs(self))
    }
    fn normalizing_unit(&self) -> Self {
        if num_traits::Signed::is_negative(self) {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        }
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
}

/// Rewrites a list of nonzero elements into a divisibility chain with the
/// same product and the same module `⊕ R/(d_i)`, dropping units.
pub fn invariant_chain<R: Euclidean>(diagonal: &[R]) -> Vec<R> {
    let mut d: Vec<R> = diagonal.iter().filter(|x| !x.is_unit()).map(Euclidean::normalize).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i].is_zero() || d[j].exact_div(&d[i]).is_some() {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|x| !x.is_unit());
    d
}
