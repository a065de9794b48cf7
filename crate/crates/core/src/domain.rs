//! The pair domain `D` of inverse-closed classes `{s, s^-1}` of
//! `T_8p \ {e}`, the permutations `Aut(T_8p)` induces on it, and their cycle
//! types.
//!
//! Class order (this is also the bit order of connection-set masks):
//!
//! | block  | size    | classes                                              |
//! |--------|---------|------------------------------------------------------|
//! | `A1`   | `p - 1` | `{a^i, a^-i}` for `i = 1..p-1`                       |
//! | `A2`   | `p`     | `{a^l b^2, a^(p-l) b^2}` for `l = 0..(p-1)/2, p+1..(3p-1)/2` |
//! | `Ap`   | `1`     | `{a^p}`                                              |
//! | `B`    | `2p`    | `{a^j b, a^(p+j) b^3}` for `j = 0..2p-1`             |

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{discrete_log, primitive_root_2p, OddPrime};
use crate::aut::{enumerate_aut, Automorphism, Family};
use crate::error::{Error, Result};
use crate::group::GroupElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    A1,
    A2,
    Ap,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClass {
    pub kind: ClassKind,
    /// Member with the least `(l, k)`.
    pub rep: GroupElement,
    /// `{s, s^-1}`, ordered by `(l, k)`; a singleton only for `{a^p}`.
    pub members: Vec<GroupElement>,
}

impl PairClass {
    fn new(kind: ClassKind, s: GroupElement) -> Self {
        let mut members = vec![s, s.inv()];
        members.sort_by_key(|g| (g.l(), g.k()));
        members.dedup();
        Self { kind, rep: members[0], members }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone)]
pub struct Domain {
    p: OddPrime,
    classes: Vec<PairClass>,
    /// Class index of every element (by element index); `None` for `e`.
    class_of: Vec<Option<usize>>,
}

impl Domain {
    pub fn build(p: OddPrime) -> Self {
        let pv = p.get() as i64;
        let mut classes = Vec::with_capacity(p.domain_size());
        for i in 1..pv {
            classes.push(PairClass::new(ClassKind::A1, GroupElement::new(p, i, 0)));
        }
        for l in (0..=(pv - 1) / 2).chain(pv + 1..=(3 * pv - 1) / 2) {
            classes.push(PairClass::new(ClassKind::A2, GroupElement::new(p, l, 2)));
        }
        classes.push(PairClass::new(ClassKind::Ap, GroupElement::new(p, pv, 0)));
        for j in 0..2 * pv {
            classes.push(PairClass::new(ClassKind::B, GroupElement::new(p, j, 1)));
        }

        let mut class_of = vec![None; p.group_order()];
        for (c, class) in classes.iter().enumerate() {
            for g in &class.members {
                assert!(class_of[g.index()].replace(c).is_none(), "{g} lies in two classes");
            }
        }
        assert!(class_of[0].is_none());
        assert!(class_of[1..].iter().all(Option::is_some), "classes must cover T_8p \\ {{e}}");

        Self { p, classes, class_of }
    }

    #[inline]
    pub fn prime(&self) -> OddPrime {
        self.p
    }

    pub fn classes(&self) -> &[PairClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, g: GroupElement) -> Option<usize> {
        self.class_of[g.index()]
    }

    /// Index range of a block.
    pub fn block(&self, kind: ClassKind) -> std::ops::Range<usize> {
        let p = self.p.get() as usize;
        match kind {
            ClassKind::A1 => 0..p - 1,
            ClassKind::A2 => p - 1..2 * p - 1,
            ClassKind::Ap => 2 * p - 1..2 * p,
            ClassKind::B => 2 * p..4 * p,
        }
    }

    /// Mask with the bits of one block set.
    pub fn block_mask(&self, kind: ClassKind) -> u64 {
        self.block(kind).fold(0, |m, i| m | 1 << i)
    }

    /// Permutation of class indices induced by `f`.
    pub fn induced_permutation(&self, f: Automorphism) -> Result<Permutation> {
        if f.prime() != self.p {
            return Err(Error::MismatchedPrime { left: self.p.get(), right: f.prime().get() });
        }
        let images = self
            .classes
            .iter()
            .map(|class| {
                let targets: Vec<usize> = class
                    .members
                    .iter()
                    .map(|&g| self.class_of(f.apply_unchecked(g)).expect("automorphisms fix only e"))
                    .collect();
                if targets.iter().any(|&t| t != targets[0]) {
                    return Err(Error::Internal(format!("{f} splits the class {class}")));
                }
                Ok(targets[0])
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

/// A permutation of `0..n`, stored as the image of each point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("images do not form a permutation".into()));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    /// Lengths of the disjoint cycles, in order of their least point.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.images.len()];
        let mut lengths = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut ct = CycleType::default();
        for len in self.cycle_lengths() {
            ct.add(len, 1);
        }
        ct
    }
}

/// Multiplicities `b_k` of cycle lengths `k`; zero entries are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CycleType {
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut ct = Self::default();
        for (k, m) in pairs {
            ct.add(k, m);
        }
        ct
    }

    /// Adds `m` cycles of length `k`; coinciding lengths accumulate.
    pub fn add(&mut self, k: usize, m: usize) {
        assert!(k >= 1, "cycle lengths are positive");
        if m > 0 {
            *self.counts.entry(k).or_insert(0) += m;
        }
    }

    pub fn get(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&k, &m)| (k, m))
    }

    /// `Σ k·b_k`, the number of points permuted.
    pub fn weighted_degree(&self) -> usize {
        self.iter().map(|(k, m)| k * m).sum()
    }

    /// `Σ b_k`.
    pub fn total_cycles(&self) -> usize {
        self.counts.values().sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, m)| format!("{k}^{m}")).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn cycle_type_of(perm: &Permutation) -> CycleType {
    perm.cycle_type()
}

/// Cycle type of `f` on `D` read off the piecewise closed formulas.
///
/// * `alpha = 1`: the `sigma(1, beta)` and `tau(1, delta)` tables.
/// * `alpha = z^i != 1`, with `g = gcd(i, p - 1)` and `o = (p - 1) / g`:
///   the type depends only on the parity of `beta` (resp. `delta`) and is
///   the `sigma(alpha, 0)`, `sigma(alpha, 1)`, `tau(gamma, 0)` or
///   `tau(gamma, 1)` table.
///
/// Entries landing on the same length are summed (this happens when `o = 2`).
/// The result is *not* guaranteed to match [`Permutation::cycle_type`]: when
/// `o` is even, `-1` is a power of `alpha` and the `A1` classes `{a^i, a^-i}`
/// close up after `o / 2` steps, which these tables do not account for.
pub fn closed_form_cycle_type(f: Automorphism) -> CycleType {
    let p = f.prime();
    let pv = p.get() as usize;
    let beta = f.beta() as usize;
    let mut ct = CycleType::default();

    if f.alpha().is_one() {
        match f.family() {
            Family::Sigma => {
                if beta == 0 {
                    ct.add(1, 4 * pv);
                } else {
                    ct.add(1, 2 * pv);
                    if beta == pv {
                        ct.add(2, pv);
                    } else if beta % 2 == 0 {
                        ct.add(pv, 2);
                    } else {
                        ct.add(2 * pv, 1);
                    }
                }
            }
            Family::Tau => {
                let delta = beta;
                ct.add(1, if delta == pv { 3 * pv + 1 } else { pv + 1 });
                ct.add(2, if delta == 0 { (3 * pv - 1) / 2 } else { (pv - 1) / 2 });
                if delta % 2 == 1 && delta != pv {
                    ct.add(pv, 2);
                }
                if delta % 2 == 0 && delta != 0 {
                    ct.add(2 * pv, 1);
                }
            }
        }
        return ct;
    }

    let z = primitive_root_2p(p);
    let i = discrete_log(z, f.alpha()).expect("a primitive root reaches every unit") as usize;
    let g = i.gcd(&(pv - 1));
    let o = (pv - 1) / g;
    let odd_shift = beta % 2 == 1;

    match (f.family(), odd_shift) {
        (Family::Sigma, false) => {
            ct.add(1, 4);
            ct.add(o, 4 * g);
        }
        (Family::Sigma, true) => {
            ct.add(1, 2);
            ct.add(2, 1);
            if o % 2 == 0 {
                ct.add(o, 4 * g);
            } else {
                ct.add(o, 2 * g);
                ct.add(2 * o, g);
            }
        }
        (Family::Tau, false) => {
            ct.add(1, 2);
            ct.add(2, 1);
            if o % 2 == 0 {
                ct.add(o, 4 * g);
            } else {
                ct.add(o, g);
                ct.add(2 * o, 3 * g / 2);
            }
        }
        (Family::Tau, true) => {
            ct.add(1, 4);
            if o % 2 == 0 {
                ct.add(o, 4 * g);
            } else {
                ct.add(o, 3 * g);
                ct.add(2 * o, g / 2);
            }
        }
    }
    ct
}

/// Domain, automorphisms in enumeration order, and their induced permutations.
#[derive(Debug)]
pub struct ActionTable {
    pub domain: Domain,
    pub automorphisms: Vec<Automorphism>,
    pub permutations: Vec<Permutation>,
}

impl ActionTable {
    pub fn build(p: OddPrime) -> Result<Self> {
        let domain = Domain::build(p);
        let automorphisms = enumerate_aut(p);
        let permutations = automorphisms
            .iter()
            .map(|&f| domain.induced_permutation(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { domain, automorphisms, permutations })
    }

    /// Shared table for `p`, built at most once per process.
    pub fn cached(p: OddPrime) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<OddPrime, Arc<ActionTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("cache lock").get(&p) {
            return Ok(Arc::clone(t));
        }
        let built = Arc::new(Self::build(p)?);
        let mut guard = cache.lock().expect("cache lock");
        Ok(Arc::clone(guard.entry(p).or_insert(built)))
    }

    pub fn prime(&self) -> OddPrime {
        self.domain.prime()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Automorphism, &Permutation)> {
        self.automorphisms.iter().copied().zip(&self.permutations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn ct(pairs: &[(usize, usize)]) -> CycleType {
        CycleType::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn block_sizes() {
        for (n, total) in [(3, 12), (5, 20), (7, 28)] {
            let d = Domain::build(p(n));
            assert_eq!(d.len(), total);
            let count = |k| d.classes().iter().filter(|c| c.kind == k).count();
            let pv = n as usize;
            assert_eq!(count(ClassKind::A1), pv - 1);
            assert_eq!(count(ClassKind::A2), pv);
            assert_eq!(count(ClassKind::Ap), 1);
            assert_eq!(count(ClassKind::B), 2 * pv);
            for kind in [ClassKind::A1, ClassKind::A2, ClassKind::Ap, ClassKind::B] {
                assert!(d.block(kind).all(|i| d.classes()[i].kind == kind));
            }
        }
    }

    #[test]
    fn classes_partition_the_non_identity_elements() {
        let d = Domain::build(p(3));
        let mut members: Vec<_> = d.classes().iter().flat_map(|c| c.members.clone()).collect();
        members.sort();
        let mut expected: Vec<_> = GroupElement::all(p(3)).filter(|g| !g.is_identity()).collect();
        expected.sort();
        assert_eq!(members.len(), 23);
        assert_eq!(members, expected);
    }

    #[test]
    fn classes_are_inverse_pairs_with_least_representative() {
        for n in [3, 5, 7, 11] {
            let d = Domain::build(p(n));
            for c in d.classes() {
                let s = c.members[0];
                assert_eq!(c.rep, s);
                assert!(c.members.contains(&s.inv()));
                assert_eq!(c.members.len() == 1, s == s.inv(), "{c}");
                assert!(c.members.iter().all(|g| (c.rep.l(), c.rep.k()) <= (g.l(), g.k())));
            }
        }
    }

    #[test]
    fn a2_labels_are_class_representatives() {
        let d = Domain::build(p(7));
        let labels: Vec<u64> = d.block(ClassKind::A2).map(|i| d.classes()[i].rep.k()).collect();
        assert_eq!(labels, [0, 1, 2, 3, 8, 9, 10]);
    }

    #[test]
    fn induced_permutation_examples() {
        let pr = p(3);
        let d = Domain::build(pr);
        let id = d.induced_permutation(Automorphism::identity(pr)).unwrap();
        assert_eq!(id, Permutation::identity(12));

        let shift = d.induced_permutation(Automorphism::sigma(pr, 1, 3).unwrap()).unwrap();
        for i in 0..d.block(ClassKind::B).start {
            assert_eq!(shift.image(i), i);
        }
        assert_eq!(shift.cycle_type(), ct(&[(1, 6), (2, 3)]));

        let tau = d.induced_permutation(Automorphism::tau(pr, 1, 0).unwrap()).unwrap();
        assert_eq!(tau.cycle_type().get(2), 4);
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(Permutation::identity(12).cycle_type(), ct(&[(1, 12)]));
        let rotation = Permutation::new((0..12).map(|i| (i + 1) % 12).collect()).unwrap();
        assert_eq!(rotation.cycle_type(), ct(&[(12, 1)]));
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert_eq!(ct(&[(1, 4), (2, 4)]).to_string(), "1^4 2^4");
    }

    #[test]
    fn closed_form_examples() {
        let pr = p(3);
        let s = |a, b| Automorphism::sigma(pr, a, b).unwrap();
        let t = |a, b| Automorphism::tau(pr, a, b).unwrap();
        assert_eq!(closed_form_cycle_type(s(1, 0)), ct(&[(1, 12)]));
        assert_eq!(closed_form_cycle_type(t(1, 3)), ct(&[(1, 10), (2, 1)]));
        // the tables put 2 + 4 fixed/transposed classes here; lengths 2 coincide and add
        assert_eq!(closed_form_cycle_type(s(5, 1)), ct(&[(1, 2), (2, 5)]));
    }

    #[test]
    fn closed_form_disagrees_when_minus_one_is_a_power_of_alpha() {
        let pr = p(3);
        let d = Domain::build(pr);
        let f = Automorphism::sigma(pr, 5, 1).unwrap();
        // alpha = 5 = -1 fixes both A1 classes {a, a^5} and {a^2, a^4}
        let brute = d.induced_permutation(f).unwrap().cycle_type();
        assert_eq!(brute, ct(&[(1, 4), (2, 4)]));
        assert_ne!(brute, closed_form_cycle_type(f));
    }

    #[test]
    fn closed_forms_match_brute_force_for_alpha_one() {
        for n in [3, 5, 7, 11, 13] {
            let table = ActionTable::build(p(n)).unwrap();
            for (f, perm) in table.iter().filter(|(f, _)| f.alpha().is_one()) {
                assert_eq!(closed_form_cycle_type(f), perm.cycle_type(), "{f}");
            }
        }
    }

    #[test]
    fn closed_forms_have_weighted_degree_4p() {
        for n in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for f in enumerate_aut(p(n)) {
                assert_eq!(closed_form_cycle_type(f).weighted_degree(), 4 * n as usize, "{f}");
            }
        }
    }

    #[test]
    fn induced_permutations_compose() {
        for n in [3, 5] {
            let table = ActionTable::build(p(n)).unwrap();
            for (f, pf) in table.iter() {
                for (g, pg) in table.iter() {
                    let fg = table.domain.induced_permutation(f.compose(g).unwrap()).unwrap();
                    assert_eq!(fg, pf.compose(pg));
                }
            }
        }
    }

    #[test]
    fn cached_tables_are_shared() {
        let a = ActionTable::cached(p(5)).unwrap();
        let b = ActionTable::cached(p(5)).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.permutations.len(), 80);
    }
}
