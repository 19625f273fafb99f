//! Exact integers with an `i64` fast path.
//!
//! Coefficients stay small for most inputs, but symmetrization can grow them
//! without bound, so every operation falls back to `BigInt` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn add(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_add(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_sub(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() - o.to_big())
    }

    pub fn mul(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_mul(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() * o.to_big())
    }

    pub fn neg(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }

    pub fn add_assign(&mut self, o: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, o) {
            if let Some(c) = a.checked_add(*b) {
                *self = Int::Small(c);
                return;
            }
        }
        *self = self.add(o);
    }

    /// `self += a * b`
    pub fn add_mul_assign(&mut self, a: &Int, b: &Int) {
        if let (Int::Small(s), Int::Small(x), Int::Small(y)) = (&*self, a, b) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(c) = s.checked_add(p) {
                    *self = Int::Small(c);
                    return;
                }
            }
        }
        *self = self.add(&a.mul(b));
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Int) -> Option<Int> {
        if d.is_zero() {
            return None;
        }
        if let (Int::Small(a), Int::Small(b)) = (self, d) {
            if *b != -1 || *a != i64::MIN {
                return if a % b == 0 { Some(Int::Small(a / b)) } else { None };
            }
        }
        let (q, r) = self.to_big().div_rem(&d.to_big());
        if r.is_zero() {
            Some(Int::from_big(q))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn factorial(n: u32) -> Int {
        let mut acc = Int::ONE;
        for k in 2..=n as i64 {
            acc = acc.mul(&Int::Small(k));
        }
        acc
    }

    pub fn binomial(n: u32, k: u32) -> Int {
        if k > n {
            return Int::ZERO;
        }
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        Int::from_big(acc)
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Int {
        Int::from_big(v)
    }
}

impl PartialEq for Int {
    fn eq(&self, o: &Int) -> bool {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => a == b,
            (Int::Big(a), Int::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl PartialOrd for Int {
    fn partial_cmp(&self, o: &Int) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Int {
    fn cmp(&self, o: &Int) -> Ordering {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl std::str::FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Int, Self::Err> {
        Ok(Int::from_big(s.parse::<BigInt>()?))
    }
}

impl Zero for Int {
    fn zero() -> Int {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl std::ops::Add for Int {
    type Output = Int;
    fn add(self, o: Int) -> Int {
        Int::add(&self, &o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes() {
        let a = Int::Small(i64::MAX);
        let b = a.add(&Int::ONE);
        assert!(matches!(b, Int::Big(_)));
        assert_eq!(b.sub(&Int::ONE), a);
        let sq = a.mul(&a);
        assert_eq!(sq.div_exact(&a), Some(a.clone()));
    }

    #[test]
    fn exact_division() {
        assert_eq!(Int::Small(6).div_exact(&Int::Small(3)), Some(Int::Small(2)));
        assert_eq!(Int::Small(7).div_exact(&Int::Small(2)), None);
        assert_eq!(Int::Small(i64::MIN).div_exact(&Int::Small(-1)).unwrap().neg(), Int::Small(i64::MIN));
    }

    #[test]
    fn binomials() {
        assert_eq!(Int::binomial(6, 3), Int::Small(20));
        assert_eq!(Int::binomial(3, 5), Int::ZERO);
        assert_eq!(Int::factorial(5), Int::Small(120));
    }
}
