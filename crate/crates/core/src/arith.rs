//! Modular arithmetic on `Z_{2p}` and its unit group.
//!
//! Everything here is exact `u64` arithmetic on desk-scale moduli. The unit
//! group `Z_{2p}^*` is cyclic of order `p - 1`; [`primitive_root_2p`] fixes a
//! generator and [`discrete_log`] indexes units by their exponent.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd prime, validated by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(Error::InvalidPrime(p));
        }
        let mut d = 3;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::InvalidPrime(p));
            }
            d += 2;
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// The modulus `2p` of the cyclic part `<a>`.
    #[inline]
    pub fn two_p(self) -> u64 {
        2 * self.0
    }

    /// `|Aut(T_8p)| = 4p(p - 1)`.
    pub fn aut_order(self) -> u64 {
        4 * self.0 * (self.0 - 1)
    }

    /// Size of the pair domain, `4p`.
    pub fn domain_size(self) -> usize {
        4 * self.0 as usize
    }

    /// Order of the group, `8p`.
    pub fn group_order(self) -> usize {
        8 * self.0 as usize
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<OddPrime> for u64 {
    fn from(p: OddPrime) -> u64 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A unit of `Z_{2p}`: odd, nonzero, and different from `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitResidue {
    value: u64,
    p: OddPrime,
}

impl UnitResidue {
    /// Reduces `value` modulo `2p` and checks coprimality.
    pub fn new(value: u64, p: OddPrime) -> Result<Self> {
        let m = p.two_p();
        let value = value % m;
        if value.gcd(&m) != 1 {
            return Err(Error::NotAUnit { value, modulus: m });
        }
        Ok(Self { value, p })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> OddPrime {
        self.p
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::MismatchedPrime { left: self.p.get(), right: other.p.get() });
        }
        Ok(Self { value: self.value * other.value % self.p.two_p(), p: self.p })
    }

    pub fn pow(self, e: u64) -> Self {
        Self { value: pow_mod(self.value, e, self.p.two_p()), p: self.p }
    }
}

impl fmt::Display for UnitResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// All units of `Z_{2p}` in ascending order.
pub fn units_2p(p: OddPrime) -> Vec<UnitResidue> {
    let m = p.two_p();
    (1..m)
        .filter(|u| u.gcd(&m) == 1)
        .map(|value| UnitResidue { value, p })
        .collect()
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    result
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined on positive integers");
    let mut result = n;
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors is defined on positive integers");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Multiplicative order of `u` modulo `modulus`.
pub fn mult_order(u: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 || u.gcd(&modulus) != 1 {
        return Err(Error::NotAUnit { value: u, modulus });
    }
    if modulus == 1 {
        return Ok(1);
    }
    let u = u % modulus;
    let mut x = u;
    let mut m = 1;
    while x != 1 {
        x = x * u % modulus;
        m += 1;
    }
    Ok(m)
}

/// The smallest generator of the cyclic group `Z_{2p}^*`.
pub fn primitive_root_2p(p: OddPrime) -> UnitResidue {
    let m = p.two_p();
    units_2p(p)
        .into_iter()
        .find(|z| mult_order(z.value, m) == Ok(p.get() - 1))
        .expect("Z_2p^* is cyclic for every odd prime p")
}

/// Least `i >= 0` with `z^i = u` in `Z_{2p}`.
pub fn discrete_log(z: UnitResidue, u: UnitResidue) -> Result<u64> {
    if z.p != u.p {
        return Err(Error::MismatchedPrime { left: z.p.get(), right: u.p.get() });
    }
    let m = z.p.two_p();
    let mut x = 1 % m;
    for i in 0..z.p.get() - 1 {
        if x == u.value {
            return Ok(i);
        }
        x = x * z.value % m;
    }
    Err(Error::InvalidArgument(format!("{u} is not a power of {z} modulo {m}")))
}

/// The unique unit `x` with `x - alpha * x = t (mod 2p)`, for `alpha != 1`
/// and `t` a nonzero even residue. Found by scanning all units.
pub fn unique_x(alpha: UnitResidue, t: u64) -> Result<UnitResidue> {
    let p = alpha.p;
    let m = p.two_p();
    if alpha.is_one() {
        return Err(Error::InvalidArgument("alpha must differ from 1".into()));
    }
    if t == 0 || t >= m || t % 2 == 1 {
        return Err(Error::InvalidArgument(format!("t must lie in {{2, 4, ..., {}}} (got {t})", m - 2)));
    }
    let mut hits = units_2p(p).into_iter().filter(|x| {
        let ax = alpha.value * x.value % m;
        (x.value + m - ax) % m == t
    });
    match (hits.next(), hits.next()) {
        (Some(x), None) => Ok(x),
        (None, _) => Err(Error::Internal(format!("no unit solves x - {alpha}x = {t} mod {m}"))),
        (Some(_), Some(_)) => Err(Error::Internal(format!("several units solve x - {alpha}x = {t} mod {m}"))),
    }
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes_between(lo: u64, hi: u64) -> Vec<OddPrime> {
    (lo..=hi).filter_map(|n| OddPrime::new(n).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: u64, p: u64) -> UnitResidue {
        UnitResidue::new(v, OddPrime::new(p).unwrap()).unwrap()
    }

    #[test]
    fn prime_validation() {
        for bad in [0, 1, 2, 4, 9, 15, 21, 25, 91] {
            assert_eq!(OddPrime::new(bad), Err(Error::InvalidPrime(bad)));
        }
        let primes: Vec<u64> = odd_primes_between(0, 31).into_iter().map(OddPrime::get).collect();
        assert_eq!(primes, [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]);
    }

    #[test]
    fn unit_residue_rejects_non_units() {
        let p = OddPrime::new(5).unwrap();
        assert!(UnitResidue::new(5, p).is_err());
        assert!(UnitResidue::new(4, p).is_err());
        assert_eq!(UnitResidue::new(13, p).unwrap().value(), 3);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(12), 4);
        for n in 1..200u64 {
            let brute = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute, "n = {n}");
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(1), [1]);
        assert_eq!(divisors(6), [1, 2, 3, 6]);
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(36), [1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn order_examples() {
        assert_eq!(mult_order(1, 6), Ok(1));
        assert_eq!(mult_order(5, 6), Ok(2));
        assert_eq!(mult_order(3, 10), Ok(4));
        assert!(mult_order(2, 6).is_err());
        assert!(mult_order(3, 6).is_err());
    }

    #[test]
    fn primitive_root_examples() {
        let z = |p| primitive_root_2p(OddPrime::new(p).unwrap()).value();
        assert_eq!(z(3), 5);
        assert_eq!(z(5), 3);
        assert_eq!(z(7), 3);
    }

    #[test]
    fn discrete_log_examples() {
        assert_eq!(discrete_log(unit(5, 3), unit(1, 3)), Ok(0));
        assert_eq!(discrete_log(unit(5, 3), unit(5, 3)), Ok(1));
        assert_eq!(discrete_log(unit(3, 5), unit(9, 5)), Ok(2));
        // 9 has order 2 mod 10 and does not generate 3
        assert!(discrete_log(unit(9, 5), unit(3, 5)).is_err());
    }

    #[test]
    fn unique_x_examples() {
        assert_eq!(unique_x(unit(5, 3), 2).unwrap().value(), 1);
        assert_eq!(unique_x(unit(5, 3), 4).unwrap().value(), 5);
        // p = 5, alpha = 3: x - 3x = -2x = 2 (mod 10) -> x in {4, 9}; only 9 is a unit
        assert_eq!(unique_x(unit(3, 5), 2).unwrap().value(), 9);
    }

    #[test]
    fn unique_x_rejects_bad_inputs() {
        assert!(unique_x(unit(1, 5), 2).is_err());
        assert!(unique_x(unit(3, 5), 0).is_err());
        assert!(unique_x(unit(3, 5), 3).is_err());
        assert!(unique_x(unit(3, 5), 10).is_err());
    }

    #[test]
    fn unique_x_exhaustive_up_to_31() {
        for p in odd_primes_between(3, 31) {
            let m = p.two_p();
            for alpha in units_2p(p).into_iter().filter(|a| !a.is_one()) {
                for t in (2..m).step_by(2) {
                    let count = units_2p(p)
                        .iter()
                        .filter(|x| (x.value() + m - alpha.value() * x.value() % m) % m == t)
                        .count();
                    assert_eq!(count, 1, "p = {p}, alpha = {alpha}, t = {t}");
                    assert!(unique_x(alpha, t).is_ok());
                }
            }
        }
    }

    #[test]
    fn primitive_root_generates_and_logs_invert_powers() {
        for p in odd_primes_between(3, 31) {
            let z = primitive_root_2p(p);
            assert_eq!(mult_order(z.value(), p.two_p()), Ok(euler_phi(p.two_p())));
            assert_eq!(euler_phi(p.two_p()), p.get() - 1);
            for i in 0..p.get() - 1 {
                assert_eq!(discrete_log(z, z.pow(i)), Ok(i));
            }
        }
    }
}
