//! The group `T_8p = <a, b | a^2p = b^8 = e, a^p = b^4, b^-1 a b = a^-1>`.
//!
//! Elements are kept in the normal form `a^k b^l` with `0 <= k < 2p` and
//! `0 <= l < 4`; powers `b^4` are rewritten as `a^p` eagerly. [`GElement`]
//! models the presentation `<x, b | x^p = b^8 = 1, b^-1 x b = x^-1>` and
//! [`iso_f`] is an explicit isomorphism `T_8p -> G`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::OddPrime;
use crate::error::{Error, Result};

fn check_same(p: OddPrime, q: OddPrime) -> Result<()> {
    if p != q {
        return Err(Error::MismatchedPrime { left: p.get(), right: q.get() });
    }
    Ok(())
}

/// `a^k b^l` in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    p: OddPrime,
    k: u64,
    l: u8,
}

impl GroupElement {
    /// Normalizes an arbitrary word `a^k b^l`: each `b^4` removed from `l`
    /// contributes `a^p`, then `k` is reduced modulo `2p`.
    pub fn new(p: OddPrime, k: i64, l: i64) -> Self {
        let m = p.two_p() as i64;
        let quarters = l.div_euclid(4);
        let l = l.rem_euclid(4);
        // a^p has order 2, so only the parity of the number of b^4 factors matters
        let k = (k + quarters.rem_euclid(2) * p.get() as i64).rem_euclid(m);
        Self { p, k: k as u64, l: l as u8 }
    }

    pub fn identity(p: OddPrime) -> Self {
        Self { p, k: 0, l: 0 }
    }

    pub fn a(p: OddPrime) -> Self {
        Self { p, k: 1, l: 0 }
    }

    pub fn b(p: OddPrime) -> Self {
        Self { p, k: 0, l: 1 }
    }

    #[inline]
    pub fn prime(self) -> OddPrime {
        self.p
    }

    /// Exponent of `a`, in `0..2p`.
    #[inline]
    pub fn k(self) -> u64 {
        self.k
    }

    /// Exponent of `b`, in `0..4`.
    #[inline]
    pub fn l(self) -> u8 {
        self.l
    }

    pub fn is_identity(self) -> bool {
        self.k == 0 && self.l == 0
    }

    /// Dense index `l * 2p + k`, a bijection onto `0..8p`.
    #[inline]
    pub fn index(self) -> usize {
        self.l as usize * self.p.two_p() as usize + self.k as usize
    }

    pub fn from_index(p: OddPrime, index: usize) -> Self {
        let m = p.two_p() as usize;
        assert!(index < 4 * m, "element index {index} out of range for p = {p}");
        Self { p, k: (index % m) as u64, l: (index / m) as u8 }
    }

    /// All `8p` elements in index order.
    pub fn all(p: OddPrime) -> impl Iterator<Item = Self> {
        (0..p.group_order()).map(move |i| Self::from_index(p, i))
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        check_same(self.p, other.p)?;
        Ok(self.mul_unchecked(other))
    }

    /// `(a^k b^l)(a^m b^n) = a^(k + (-1)^l m) b^(l + n)`, folding `b^4` into `a^p`.
    pub(crate) fn mul_unchecked(self, other: Self) -> Self {
        let m = self.p.two_p();
        let twisted = if self.l % 2 == 0 { other.k } else { (m - other.k) % m };
        let mut k = self.k + twisted;
        let mut l = self.l + other.l;
        if l >= 4 {
            l -= 4;
            k += self.p.get();
        }
        Self { p: self.p, k: k % m, l }
    }

    /// Closed-form inverse:
    /// `(a^r)^-1 = a^-r`, `(a^r b)^-1 = a^(r+p) b^3`,
    /// `(a^r b^2)^-1 = a^(p-r) b^2`, `(a^r b^3)^-1 = a^(r+p) b`.
    pub fn inv(self) -> Self {
        let p = self.p.get() as i64;
        let r = self.k as i64;
        match self.l {
            0 => Self::new(self.p, -r, 0),
            1 => Self::new(self.p, r + p, 3),
            2 => Self::new(self.p, p - r, 2),
            _ => Self::new(self.p, r + p, 1),
        }
    }

    pub fn pow(self, n: u64) -> Self {
        let mut acc = Self::identity(self.p);
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(base);
            }
            base = base.mul_unchecked(base);
            n >>= 1;
        }
        acc
    }

    /// Element order from the closed form by element type:
    /// `a^i` has order `2p / gcd(i, 2p)`, `a^i b^2` has order
    /// `lcm(2p / gcd(i, 2p), 4)`, and `a^i b^j` with `j` odd has order 8.
    pub fn order(self) -> u64 {
        let m = self.p.two_p();
        let cyclic = m / self.k.gcd(&m);
        match self.l {
            0 => cyclic,
            2 => cyclic.lcm(&4),
            _ => 8,
        }
    }

    /// Element order by repeated multiplication.
    pub fn order_by_iteration(self) -> u64 {
        let mut x = self;
        let mut n = 1;
        while !x.is_identity() {
            x = x.mul_unchecked(self);
            n += 1;
        }
        n
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{} b^{}", self.k, self.l)
    }
}

/// `x^i b^j` in `G = <x, b | x^p = b^8 = 1, b^-1 x b = x^-1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GElement {
    p: OddPrime,
    i: u64,
    j: u8,
}

impl GElement {
    pub fn new(p: OddPrime, i: i64, j: i64) -> Self {
        Self { p, i: i.rem_euclid(p.get() as i64) as u64, j: j.rem_euclid(8) as u8 }
    }

    pub fn i(self) -> u64 {
        self.i
    }

    pub fn j(self) -> u8 {
        self.j
    }

    pub fn all(p: OddPrime) -> impl Iterator<Item = Self> {
        (0..8).flat_map(move |j| (0..p.get()).map(move |i| Self { p, i, j }))
    }

    /// `(x^i b^j)(x^m b^n) = x^(i + (-1)^j m) b^(j + n)`.
    pub fn mul(self, other: Self) -> Result<Self> {
        check_same(self.p, other.p)?;
        let p = self.p.get();
        let twisted = if self.j % 2 == 0 { other.i } else { (p - other.i) % p };
        Ok(Self { p: self.p, i: (self.i + twisted) % p, j: (self.j + other.j) % 8 })
    }
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} b^{}", self.i, self.j)
    }
}

/// `f(a^k b^l) = x^(k/2) b^l` for even `k`, `x^((k-p)/2) b^(l+4)` for odd `k`.
pub fn iso_f(g: GroupElement) -> GElement {
    let p = g.p.get() as i64;
    let k = g.k as i64;
    let l = g.l as i64;
    if k % 2 == 0 {
        GElement::new(g.p, k / 2, l)
    } else {
        GElement::new(g.p, (k - p) / 2, l + 4)
    }
}
