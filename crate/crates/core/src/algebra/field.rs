use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::Poly;
use crate::matrix::SparseMatrix;
use crate::smith::{smith_sparse, SmithResult};

/// Coefficient field of a polynomial ring.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    type Ctx: Copy + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_bigint(v: &BigInt, ctx: Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
    /// Whether the printed form needs parentheses as a coefficient.
    fn is_negative(&self) -> bool;
    fn characteristic(ctx: Self::Ctx) -> u64;

    /// Rank and invariant factors of a polynomial matrix.
    fn smith_poly(m: &SparseMatrix<Poly<Self>>) -> SmithResult<Poly<Self>>
    where
        Self: Sized,
    {
        smith_sparse(m)
    }
}

pub type Rational = BigRational;

impl Field for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        Zero::zero()
    }
    fn one(_: ()) -> Self {
        One::one()
    }
    fn from_bigint(v: &BigInt, _: ()) -> Self {
        BigRational::from_integer(v.clone())
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
    fn inv(&self) -> Self {
        self.recip()
    }
    fn is_negative(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
    fn characteristic(_: ()) -> u64 {
        0
    }

    fn smith_poly(m: &SparseMatrix<Poly<Self>>) -> SmithResult<Poly<Self>> {
        crate::smith::smith_multimodular(m)
    }
}

impl super::Ring for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        Zero::zero()
    }
    fn one(_: ()) -> Self {
        One::one()
    }
    fn from_i64(v: i64, _: ()) -> Self {
        BigRational::from_integer(BigInt::from(v))
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

/// An element of the prime field `F_p`, carrying its characteristic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.v;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            e >>= 1;
        }
        Fp { v: acc, p: self.p }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Field for Fp {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.p
    }
    fn zero(p: u64) -> Self {
        Fp { v: 0, p }
    }
    fn one(p: u64) -> Self {
        Fp { v: 1 % p, p }
    }
    fn from_bigint(v: &BigInt, p: u64) -> Self {
        let r = v.mod_floor(&BigInt::from(p));
        Fp { v: r.to_u64().expect("reduced"), p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp { v: ((self.v as u128 + other.v as u128) % self.p as u128) as u64, p: self.p }
    }
    fn sub(&self, other: &Self) -> Self {
        Fp { v: ((self.v as u128 + (self.p - other.v) as u128) % self.p as u128) as u64, p: self.p }
    }
    fn mul(&self, other: &Self) -> Self {
        Fp { v: mulmod(self.v, other.v, self.p), p: self.p }
    }
    fn neg(&self) -> Self {
        Fp { v: (self.p - self.v) % self.p, p: self.p }
    }
    fn inv(&self) -> Self {
        assert!(self.v != 0, "inverse of zero in F_{}", self.p);
        self.pow(self.p - 2)
    }
    fn is_negative(&self) -> bool {
        false
    }
    fn characteristic(p: u64) -> u64 {
        p
    }
}

impl super::Ring for Fp {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.p
    }
    fn zero(p: u64) -> Self {
        <Fp as Field>::zero(p)
    }
    fn one(p: u64) -> Self {
        <Fp as Field>::one(p)
    }
    fn from_i64(v: i64, p: u64) -> Self {
        Fp::from_bigint(&BigInt::from(v), p)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, other: &Self) -> Self {
        Field::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Field::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Field::mul(self, other)
    }
    fn neg(&self) -> Self {
        Field::neg(self)
    }
}

impl super::Euclidean for Fp {
    fn norm(&self) -> u64 {
        0
    }
    fn div_rem(&self, other: &Self) -> (Self, Self) {
        (Field::mul(self, &other.inv()), <Fp as Field>::zero(self.p))
    }
    fn is_unit(&self) -> bool {
        self.v != 0
    }
    fn normalizing_unit(&self) -> Self {
        if self.v == 0 {
            <Fp as Field>::one(self.p)
        } else {
            self.inv()
        }
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn check_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if p % b == 0 {
            return p == b;
        }
    }
    let mut d = p - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for b in BASES {
        let mut x = Fp { v: b, p }.pow(d).v;
        if x == 1 || x == p - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, p);
            if x == p - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
