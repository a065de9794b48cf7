//! Cycle index of `Aut(T_8p)` acting on the pair domain, and the closed-form
//! counts derived from it.
//!
//! Three polynomials are available and are compared against each other by
//! the verification report:
//!
//! * [`cycle_index_bruteforce`]: averages the cycle types of the induced
//!   permutations, decomposed directly.
//! * [`cycle_index_from_closed_forms`]: averages the piecewise closed-form
//!   cycle types ([`closed_form_cycle_type`]).
//! * [`cycle_index_closed_form`]: the closed expression with its
//!   divisor sums over `d | p - 1`.
//!
//! Counts are unbounded integers; coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, OddPrime};
use crate::aut::enumerate_aut;
use crate::domain::{closed_form_cycle_type, ActionTable, CycleType};
use crate::error::{Error, Result};

/// `x_{k1}^{e1} x_{k2}^{e2} ...` with strictly increasing `k` and positive `e`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(k: usize, e: u32) -> Self {
        Self::one().times(k, e)
    }

    pub fn from_cycle_type(ct: &CycleType) -> Self {
        ct.iter().fold(Self::one(), |m, (k, b)| m.times(k, b as u32))
    }

    /// Multiplies in `x_k^e`.
    pub fn times(mut self, k: usize, e: u32) -> Self {
        assert!(k >= 1, "variables are indexed from 1");
        if e == 0 {
            return self;
        }
        match self.0.binary_search_by_key(&k, |&(v, _)| v) {
            Ok(i) => self.0[i].1 += e,
            Err(i) => self.0.insert(i, (k, e)),
        }
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        other.0.iter().fold(self.clone(), |m, &(k, e)| m.times(k, e))
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    /// `Σ k·e_k`.
    pub fn weighted_degree(&self) -> usize {
        self.0.iter().map(|&(k, e)| k * e as usize).sum()
    }

    /// `Σ e_k`, the exponent of `m` after substituting every variable by `m`.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(k, e)| if e == 1 { format!("x{k}") } else { format!("x{k}^{e}") })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

/// A polynomial with exact rational coefficients; zero terms are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · m · other`.
    pub fn add_scaled(&mut self, other: &Poly, m: &Monomial, c: &BigRational) {
        for (mono, coeff) in &other.terms {
            self.add_term(mono.mul(m), coeff * c);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Substitutes every variable by `m`.
    pub fn evaluate_rational(&self, m: u64) -> BigRational {
        let base = BigInt::from(m);
        self.terms
            .iter()
            .map(|(mono, c)| c * BigRational::from_integer(num_traits::pow(base.clone(), mono.total_degree() as usize)))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }
}

/// Cycle index of `Aut(T_8p)` on the pair domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleIndexPoly {
    p: OddPrime,
    poly: Poly,
}

impl CycleIndexPoly {
    /// Average of the cycle-type monomials of a multiset of group elements.
    pub fn from_cycle_types<'a>(p: OddPrime, types: impl IntoIterator<Item = &'a CycleType>) -> Self {
        let mut counts: BTreeMap<Monomial, u64> = BTreeMap::new();
        for ct in types {
            *counts.entry(Monomial::from_cycle_type(ct)).or_insert(0) += 1;
        }
        let order = BigInt::from(p.aut_order());
        let mut poly = Poly::default();
        for (m, n) in counts {
            poly.add_term(m, BigRational::new(BigInt::from(n), order.clone()));
        }
        Self { p, poly }
    }

    pub fn prime(&self) -> OddPrime {
        self.p
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.poly.coefficient(m)
    }

    /// Checks the structural invariants: positive coefficients summing to 1,
    /// every monomial of weighted degree `4p`, denominators dividing `4p(p-1)`.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.p.domain_size();
        let order = BigInt::from(self.p.aut_order());
        for (m, c) in self.poly.terms() {
            if !c.is_positive() {
                return Err(Error::Internal(format!("non-positive coefficient {c} on {m}")));
            }
            if m.weighted_degree() != n {
                return Err(Error::Internal(format!("{m} has weighted degree {} ≠ {n}", m.weighted_degree())));
            }
            if !(&order % c.denom()).is_zero() {
                return Err(Error::Internal(format!("denominator of {c} does not divide {order}")));
            }
        }
        if !self.poly.evaluate_rational(1).is_one() {
            return Err(Error::Internal("coefficients do not sum to 1".into()));
        }
        Ok(())
    }

    /// Terms as structured records, highest monomial first.
    pub fn records(&self) -> Vec<TermRecord> {
        self.poly
            .terms()
            .rev()
            .map(|(m, c)| TermRecord {
                coeff_num: c.numer().to_string(),
                coeff_den: c.denom().to_string(),
                monomial: m.factors().iter().map(|&(k, e)| [k as u64, e as u64]).collect(),
            })
            .collect()
    }
}

impl fmt::Display for CycleIndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.poly.terms().rev().map(|(m, c)| format!("{c}·{m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff_num: String,
    pub coeff_den: String,
    pub monomial: Vec<[u64; 2]>,
}

/// Averages the directly decomposed cycle types of all induced permutations.
pub fn cycle_index_bruteforce(p: OddPrime) -> Result<CycleIndexPoly> {
    let table = ActionTable::cached(p)?;
    let types: Vec<CycleType> = table.permutations.iter().map(|perm| perm.cycle_type()).collect();
    Ok(CycleIndexPoly::from_cycle_types(p, &types))
}

/// Averages the piecewise closed-form cycle types over the enumerated group.
pub fn cycle_index_from_closed_forms(p: OddPrime) -> CycleIndexPoly {
    let types: Vec<CycleType> = enumerate_aut(p).into_iter().map(closed_form_cycle_type).collect();
    CycleIndexPoly::from_cycle_types(p, &types)
}

fn q(n: i64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The closed expression for the cycle index, assembled term by term.
pub fn cycle_index_closed_form(p: OddPrime) -> CycleIndexPoly {
    let pv = p.get() as usize;
    let pm1 = pv - 1;
    let x = |k: usize, e: usize| Monomial::var(k, e as u32);

    let mut poly = Poly::default();

    // the 1/4p block
    let quarter_p = q(1, 4 * p.get());
    let block: [(i64, Monomial); 8] = [
        (-1, x(1, 4 * pv)),
        (-1, x(1, 2 * pv).mul(&x(2, pv))),
        (1, x(1, 2 * pv).mul(&x(pv, 2))),
        (1, x(1, 2 * pv).mul(&x(2 * pv, 1))),
        (-1, x(1, pv + 1).mul(&x(2, (3 * pv - 1) / 2))),
        (-1, x(2, (pv - 1) / 2).mul(&x(1, 3 * pv + 1))),
        (1, x(2, (pv - 1) / 2).mul(&x(1, pv + 1)).mul(&x(pv, 2))),
        (1, x(2, (pv - 1) / 2).mul(&x(1, pv + 1)).mul(&x(2 * pv, 1))),
    ];
    for (sign, m) in block {
        poly.add_term(m, &quarter_p * BigInt::from(sign));
    }

    let scale = q(1, 4 * (p.get() - 1));
    let divs: Vec<usize> = divisors(pm1 as u64).into_iter().map(|d| d as usize).collect();
    let phi = |d: usize| BigRational::from_integer(BigInt::from(euler_phi(d as u64)));

    let mut all_d = Poly::default();
    let mut even_d = Poly::default();
    let mut odd_d_pair = Poly::default();
    let mut odd_d_single = Poly::default();
    for &d in &divs {
        all_d.add_term(x(d, 4 * pm1 / d), phi(d));
        if d % 2 == 0 {
            even_d.add_term(x(d, 4 * pm1 / d), phi(d));
        } else {
            odd_d_pair.add_term(x(d, 2 * pm1 / d).mul(&x(2 * d, pm1 / d)), phi(d));
            odd_d_pair.add_term(x(d, pm1 / d).mul(&x(2 * d, 3 * pm1 / (2 * d))), phi(d));
            odd_d_single.add_term(x(d, 3 * pm1 / d).mul(&x(2 * d, pm1 / (2 * d))), phi(d));
        }
    }

    let x1_4 = x(1, 4);
    let x1_2_x2 = x(1, 2).mul(&x(2, 1));
    poly.add_scaled(&all_d, &x1_4, &scale);
    poly.add_scaled(&even_d, &x1_2_x2, &(&scale * BigInt::from(2)));
    poly.add_scaled(&even_d, &x1_4, &scale);
    poly.add_scaled(&odd_d_pair, &x1_2_x2, &scale);
    poly.add_scaled(&odd_d_single, &x1_4, &scale);

    CycleIndexPoly { p, poly }
}

/// `P(m, m, ..., m)`, which must be an integer.
pub fn evaluate(poly: &CycleIndexPoly, m: u64) -> Result<BigInt> {
    integral(poly.poly.evaluate_rational(m), "cycle index evaluation")
}

fn integral(x: BigRational, what: &str) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::Internal(format!("{what} is not an integer: {x}")))
    }
}

fn pow2(e: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << e)
}

/// Number of Cayley graphs over `T_8p` by the closed formula,
/// evaluated summand by summand as written.
pub fn n_total(p: OddPrime) -> Result<BigInt> {
    let pv = p.get() as usize;
    let pm1 = pv - 1;
    let divs: Vec<usize> = divisors(pm1 as u64).into_iter().map(|d| d as usize).collect();
    let phi = |d: usize| BigRational::from_integer(BigInt::from(euler_phi(d as u64)));
    let over = |n: i64| q(n, p.get() - 1);

    let head = q(1, 4 * p.get())
        * (-pow2(4 * pv)
            + pow2(2 * pv) * (-pow2(pv) + BigRational::from_integer(6.into()))
            - pow2((5 * pv + 1) / 2)
            + pow2((pv - 1) / 2) * (-pow2(3 * pv + 1) + pow2(pv + 3) + pow2(pv + 2)));

    let sum_all: BigRational = divs.iter().map(|&d| phi(d) * pow2(4 * pm1 / d)).sum();
    let sum_even: BigRational =
        divs.iter().filter(|&&d| d % 2 == 0).map(|&d| phi(d) * pow2(4 * pm1 / d)).sum();
    let sum_odd_pair: BigRational = divs
        .iter()
        .filter(|&&d| d % 2 == 1)
        .map(|&d| phi(d) * (pow2(3 * pm1 / d) + pow2(5 * pm1 / (2 * d))))
        .sum();
    let sum_odd_single: BigRational =
        divs.iter().filter(|&&d| d % 2 == 1).map(|&d| phi(d) * pow2(7 * pm1 / (2 * d))).sum();

    let total = head
        + over(4) * sum_all
        + over(8) * sum_even
        + over(2) * sum_odd_pair
        + over(4) * sum_odd_single;
    integral(total, "closed-form count of Cayley graphs")
}

/// Number of circulant graphs of order `2p` by the closed formula
/// `(2 / (p-1)) Σ_{d | p-1} φ(d) 2^((p-1)/d)`.
pub fn n_circulant(p: OddPrime) -> Result<BigInt> {
    let pm1 = p.get() as usize - 1;
    let sum: BigRational = divisors(pm1 as u64)
        .into_iter()
        .map(|d| BigRational::from_integer(BigInt::from(euler_phi(d))) * pow2(pm1 / d as usize))
        .sum();
    integral(q(2, p.get() - 1) * sum, "closed-form count of circulant graphs")
}

/// `N - N_c^2 - 8`.
pub fn n_connected(p: OddPrime) -> Result<BigInt> {
    let nc = n_circulant(p)?;
    Ok(n_total(p)? - &nc * &nc - 8)
}
