//! Brute-force counting that does not rely on any closed form.
//!
//! Connection sets are bit masks over the pair domain (bit `i` selects class
//! `i` of [`Domain`]). Two sets give isomorphic Cayley graphs exactly when an
//! automorphism maps one onto the other, so the exhaustive counts below are
//! orbit counts: a mask is counted when it is the numerically least mask of
//! its orbit under all induced permutations.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{units_2p, OddPrime};
use crate::domain::{ActionTable, ClassKind, Domain, Permutation};
use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Default largest `p` for the exhaustive connection-set sweep.
pub const DEFAULT_ORACLE_CAP: u64 = 5;

/// Hard limit for the sweep: `2^(4p)` masks must stay enumerable.
pub const MAX_SWEEP_P: u64 = 7;

/// Hard limit for the circulant sweep over `2^p` masks.
pub const MAX_CIRCULANT_P: u64 = 23;

/// An inverse-closed subset of `T_8p \ {e}`, as a set of domain classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConnectionSet {
    p: OddPrime,
    mask: u64,
}

impl ConnectionSet {
    pub fn new(p: OddPrime, mask: u64) -> Result<Self> {
        let n = p.domain_size();
        if n < 64 && mask >> n != 0 {
            return Err(Error::InvalidArgument(format!("mask {mask:#x} selects classes beyond the {n} of D")));
        }
        if n > 64 {
            return Err(Error::InvalidArgument(format!("masks hold at most 64 classes (p = {p} needs {n})")));
        }
        Ok(Self { p, mask })
    }

    /// The set containing the classes of the given elements.
    pub fn from_elements(domain: &Domain, elements: &[GroupElement]) -> Result<Self> {
        let mut mask = 0;
        for &g in elements {
            let c = domain
                .class_of(g)
                .ok_or_else(|| Error::InvalidArgument("the identity is never a connection element".into()))?;
            mask |= 1 << c;
        }
        Self::new(domain.prime(), mask)
    }

    pub fn empty(p: OddPrime) -> Self {
        Self { p, mask: 0 }
    }

    pub fn prime(&self) -> OddPrime {
        self.p
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// The selected classes expanded to group elements.
    pub fn elements(&self, domain: &Domain) -> Vec<GroupElement> {
        domain
            .classes()
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.mask >> i & 1 == 1)
            .flat_map(|(_, c)| c.members.iter().copied())
            .collect()
    }

    /// Fixed-width hexadecimal (`p` digits for the `4p` class bits).
    pub fn to_hex(&self) -> String {
        format!("{:0width$x}", self.mask, width = self.p.get() as usize)
    }

    pub fn from_hex(p: OddPrime, s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
        let mask = u64::from_str_radix(digits, 16)
            .map_err(|e| Error::InvalidArgument(format!("bad hexadecimal mask {s:?}: {e}")))?;
        Self::new(p, mask)
    }
}

/// `Cay(T_8p, S)`: vertex `x` is adjacent to `s·x` for every `s` in `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGraph {
    p: OddPrime,
    adjacency: Vec<Vec<usize>>,
}

impl CayleyGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency.iter().all(|n| n.len() == d).then_some(d)
    }

    pub fn is_symmetric(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(u, ns)| ns.iter().all(|&v| self.adjacency[v].binary_search(&u).is_ok()))
    }

    /// Number of vertices reachable from the identity.
    pub fn reach_from_identity(&self) -> usize {
        let mut seen = vec![false; self.adjacency.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.reach_from_identity() == self.vertex_count()
    }

    /// Graphviz rendering with vertices labelled `a^k b^l`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cayley {\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", GroupElement::from_index(self.p, v));
        }
        for (u, ns) in self.adjacency.iter().enumerate() {
            for &v in ns.iter().filter(|&&v| v > u) {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_cayley_graph(set: &ConnectionSet, domain: &Domain) -> CayleyGraph {
    let p = set.prime();
    let elements = set.elements(domain);
    let adjacency = GroupElement::all(p)
        .map(|x| {
            let mut ns: Vec<usize> = elements.iter().map(|s| s.mul_unchecked(x).index()).collect();
            ns.sort_unstable();
            ns.dedup();
            ns
        })
        .collect();
    CayleyGraph { p, adjacency }
}

pub fn is_connected(set: &ConnectionSet, domain: &Domain) -> bool {
    build_cayley_graph(set, domain).is_connected()
}

/// `Σ_f 2^c(f)` over all automorphisms, `c(f)` the number of cycles of the
/// induced permutation.
pub fn burnside_raw_sum(p: OddPrime) -> Result<BigInt> {
    let table = ActionTable::cached(p)?;
    Ok(table
        .permutations
        .iter()
        .map(|perm| BigInt::from(1) << perm.cycle_lengths().len())
        .sum())
}

/// Number of orbits of `Aut(T_8p)` on subsets of the pair domain, by Burnside.
pub fn burnside_count(p: OddPrime) -> Result<BigInt> {
    let raw = burnside_raw_sum(p)?;
    let order = BigInt::from(p.aut_order());
    if !(&raw % &order).is_zero() {
        return Err(Error::Internal(format!("Burnside sum {raw} is not divisible by |Aut| = {order}")));
    }
    Ok(raw / order)
}

/// Images of bit masks under a family of permutations, via per-byte lookup.
#[derive(Debug, Clone)]
pub struct MaskAction {
    n: usize,
    /// `tables[perm][chunk][byte]`: image of `byte << 8 * chunk`.
    tables: Vec<Vec<[u64; 256]>>,
}

impl MaskAction {
    /// Identity permutations are dropped; they never lower a mask.
    pub fn new(n: usize, perms: &[Permutation]) -> Self {
        assert!(n <= 64, "masks hold at most 64 points");
        let chunks = n.div_ceil(8);
        let tables = perms
            .iter()
            .filter(|perm| perm.images().iter().enumerate().any(|(i, &j)| i != j))
            .map(|perm| {
                assert_eq!(perm.len(), n);
                (0..chunks)
                    .map(|c| {
                        let mut t = [0u64; 256];
                        for (byte, slot) in t.iter_mut().enumerate() {
                            for bit in 0..8 {
                                let i = 8 * c + bit;
                                if byte >> bit & 1 == 1 && i < n {
                                    *slot |= 1 << perm.image(i);
                                }
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        Self { n, tables }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    #[inline]
    fn image_with(tables: &[[u64; 256]], mask: u64) -> u64 {
        tables.iter().enumerate().fold(0, |acc, (c, t)| acc | t[(mask >> (8 * c)) as usize & 0xff])
    }

    pub fn image(&self, perm: usize, mask: u64) -> u64 {
        Self::image_with(&self.tables[perm], mask)
    }

    /// True when no permutation maps `mask` to a smaller mask.
    #[inline]
    pub fn is_orbit_minimum(&self, mask: u64) -> bool {
        self.tables.iter().all(|t| Self::image_with(t, mask) >= mask)
    }

    pub fn orbit_minimum(&self, mask: u64) -> u64 {
        self.tables.iter().map(|t| Self::image_with(t, mask)).fold(mask, u64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Largest `p` accepted without complaint.
    pub cap: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_ORACLE_CAP, workers: None }
    }
}

/// Per-orbit tallies from one exhaustive sweep of all `2^(4p)` masks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub orbits: u64,
    pub connected: u64,
    /// Disconnected orbits whose representative avoids block `B`.
    pub disconnected_a_only: u64,
    /// Disconnected orbits whose representative meets block `B`.
    pub disconnected_b_touching: u64,
    /// Least masks of the `B`-touching disconnected orbits, ascending.
    pub b_touching_representatives: Vec<u64>,
}

impl SweepSummary {
    fn merge(mut self, other: Self) -> Self {
        self.orbits += other.orbits;
        self.connected += other.connected;
        self.disconnected_a_only += other.disconnected_a_only;
        self.disconnected_b_touching += other.disconnected_b_touching;
        self.b_touching_representatives.extend(other.b_touching_representatives);
        self
    }

    pub fn disconnected(&self) -> u64 {
        self.orbits - self.connected
    }
}

/// Left-multiplication data for fast generation tests during a sweep.
struct Connectivity {
    group_order: usize,
    /// `left[s][x]`: index of `s·x`.
    left: Vec<Vec<u16>>,
    /// Element indices of each class.
    class_members: Vec<Vec<usize>>,
}

impl Connectivity {
    fn new(domain: &Domain) -> Self {
        let p = domain.prime();
        let elements: Vec<_> = GroupElement::all(p).collect();
        let left = elements
            .iter()
            .map(|s| elements.iter().map(|&x| s.mul_unchecked(x).index() as u16).collect())
            .collect();
        let class_members =
            domain.classes().iter().map(|c| c.members.iter().map(|g| g.index()).collect()).collect();
        Self { group_order: p.group_order(), left, class_members }
    }

    fn connected(&self, mask: u64, stack: &mut Vec<usize>, seen: &mut [bool], generators: &mut Vec<usize>) -> bool {
        generators.clear();
        for (c, members) in self.class_members.iter().enumerate() {
            if mask >> c & 1 == 1 {
                generators.extend_from_slice(members);
            }
        }
        if generators.is_empty() {
            return false;
        }
        seen.fill(false);
        stack.clear();
        stack.push(0);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &s in generators.iter() {
                let y = self.left[s][x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    if count == self.group_order {
                        return true;
                    }
                    stack.push(y);
                }
            }
        }
        false
    }
}

fn check_cap(p: OddPrime, cap: u64) -> Result<()> {
    if p.get() > cap {
        return Err(Error::AboveOracleCap { p: p.get(), cap });
    }
    if p.get() > MAX_SWEEP_P {
        return Err(Error::AboveOracleCap { p: p.get(), cap: MAX_SWEEP_P });
    }
    Ok(())
}

fn run_in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Internal(format!("could not start worker pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

const CHUNK_BITS: u32 = 14;

/// Exhaustive sweep of every connection set for `p`.
///
/// The mask space is cut into fixed contiguous ranges whose tallies are
/// added, so the result does not depend on the number of workers.
pub fn sweep(p: OddPrime, options: &SweepOptions) -> Result<SweepSummary> {
    check_cap(p, options.cap)?;
    let table = ActionTable::cached(p)?;
    let action = MaskAction::new(table.domain.len(), &table.permutations);
    let conn = Connectivity::new(&table.domain);
    let b_mask = table.domain.block_mask(ClassKind::B);
    let total: u64 = 1 << table.domain.len();
    let chunk = 1u64 << CHUNK_BITS.min(table.domain.len() as u32);

    let run = || {
        (0..total / chunk)
            .into_par_iter()
            .map(|c| {
                let mut out = SweepSummary::default();
                let mut stack = Vec::new();
                let mut seen = vec![false; conn.group_order];
                let mut generators = Vec::new();
                for mask in c * chunk..(c + 1) * chunk {
                    if !action.is_orbit_minimum(mask) {
                        continue;
                    }
                    out.orbits += 1;
                    if conn.connected(mask, &mut stack, &mut seen, &mut generators) {
                        out.connected += 1;
                    } else if mask & b_mask == 0 {
                        out.disconnected_a_only += 1;
                    } else {
                        out.disconnected_b_touching += 1;
                        out.b_touching_representatives.push(mask);
                    }
                }
                out
            })
            .reduce(SweepSummary::default, SweepSummary::merge)
    };
    let mut summary = run_in_pool(options.workers, run)?;
    summary.b_touching_representatives.sort_unstable();
    Ok(summary)
}

/// Number of `Aut(T_8p)`-orbits on connection sets, by exhaustive sweep.
pub fn orbit_partition_count(p: OddPrime, cap: u64) -> Result<BigInt> {
    Ok(sweep(p, &SweepOptions { cap, workers: None })?.orbits.into())
}

/// Number of orbits whose Cayley graph is connected, by exhaustive sweep.
pub fn connected_orbit_count(p: OddPrime, cap: u64) -> Result<BigInt> {
    Ok(sweep(p, &SweepOptions { cap, workers: None })?.connected.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisconnectedCensus {
    pub a_only_orbits: u64,
    pub b_touching_orbits: u64,
}

pub fn disconnected_census(p: OddPrime, cap: u64) -> Result<DisconnectedCensus> {
    let s = sweep(p, &SweepOptions { cap, workers: None })?;
    Ok(DisconnectedCensus { a_only_orbits: s.disconnected_a_only, b_touching_orbits: s.disconnected_b_touching })
}

/// The `p` inverse-closed classes `{x, -x}` of `Z_2p \ {0}`, `x = 1..p`, and
/// the permutations of them induced by the units of `Z_2p`.
pub fn circulant_action(p: OddPrime) -> Vec<Permutation> {
    let m = p.two_p();
    let class_of = |x: u64| {
        let x = x % m;
        (x.min(m - x) - 1) as usize
    };
    units_2p(p)
        .into_iter()
        .map(|u| {
            let images = (1..=p.get()).map(|x| class_of(u.value() * x)).collect();
            Permutation::new(images).expect("units permute the classes")
        })
        .collect()
}

/// Orbits of inverse-closed subsets of `Z_2p \ {0}` under multiplication by
/// units, i.e. circulant graphs of order `2p` up to isomorphism.
pub fn circulant_orbit_count(p: OddPrime) -> Result<BigInt> {
    if p.get() > MAX_CIRCULANT_P {
        return Err(Error::AboveOracleCap { p: p.get(), cap: MAX_CIRCULANT_P });
    }
    let action = MaskAction::new(p.get() as usize, &circulant_action(p));
    let count = (0..1u64 << p.get()).into_par_iter().filter(|&m| action.is_orbit_minimum(m)).count();
    Ok(BigInt::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn set_of(domain: &Domain, els: &[(i64, i64)]) -> ConnectionSet {
        let pr = domain.prime();
        let elements: Vec<_> = els.iter().map(|&(k, l)| GroupElement::new(pr, k, l)).collect();
        ConnectionSet::from_elements(domain, &elements).unwrap()
    }

    #[test]
    fn involution_gives_a_perfect_matching() {
        let d = Domain::build(p(3));
        let g = build_cayley_graph(&set_of(&d, &[(3, 0)]), &d);
        assert_eq!(g.vertex_count(), 24);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.regular_degree(), Some(1));
        assert!(g.is_symmetric());
    }

    #[test]
    fn empty_set_is_edgeless_and_disconnected() {
        let d = Domain::build(p(3));
        let empty = ConnectionSet::empty(p(3));
        let g = build_cayley_graph(&empty, &d);
        assert_eq!(g.edge_count(), 0);
        assert!(!is_connected(&empty, &d));
    }

    #[test]
    fn generators_connect() {
        let d = Domain::build(p(3));
        let s = set_of(&d, &[(1, 0), (0, 1)]);
        assert_eq!(s.elements(&d).len(), 4);
        assert!(is_connected(&s, &d));
        let g = build_cayley_graph(&s, &d);
        assert_eq!(g.regular_degree(), Some(4));
    }

    #[test]
    fn sets_inside_a_are_disconnected() {
        let d = Domain::build(p(5));
        let a_blocks = d.block_mask(ClassKind::A1) | d.block_mask(ClassKind::A2) | d.block_mask(ClassKind::Ap);
        let all_a = ConnectionSet::new(p(5), a_blocks).unwrap();
        assert!(!is_connected(&all_a, &d));
        assert_eq!(build_cayley_graph(&all_a, &d).reach_from_identity(), 20);
    }

    #[test]
    fn hex_round_trip_and_width() {
        let s = ConnectionSet::new(p(3), 0x801).unwrap();
        assert_eq!(s.to_hex(), "801");
        assert_eq!(ConnectionSet::from_hex(p(3), "0x801").unwrap(), s);
        assert_eq!(ConnectionSet::new(p(5), 1).unwrap().to_hex(), "00001");
        assert!(ConnectionSet::new(p(3), 1 << 12).is_err());
        assert!(ConnectionSet::from_hex(p(3), "xyz").is_err());
    }

    #[test]
    fn dot_output_labels_vertices() {
        let d = Domain::build(p(3));
        let dot = build_cayley_graph(&set_of(&d, &[(3, 0)]), &d).to_dot();
        assert!(dot.starts_with("graph cayley {"));
        assert!(dot.contains("0 [label=\"a^0 b^0\"];"));
        assert!(dot.contains("0 -- 3;"));
        assert_eq!(dot.matches(" -- ").count(), 12);
    }

    #[test]
    fn burnside_raw_sum_p3() {
        // frozen from an element-level orbit enumeration (624 orbits × 24)
        assert_eq!(burnside_raw_sum(p(3)).unwrap(), BigInt::from(14976));
        assert_eq!(burnside_count(p(3)).unwrap(), BigInt::from(624));
    }

    #[test]
    fn sweep_refuses_large_p() {
        assert_eq!(orbit_partition_count(p(7), 5), Err(Error::AboveOracleCap { p: 7, cap: 5 }));
        assert_eq!(orbit_partition_count(p(11), 11), Err(Error::AboveOracleCap { p: 11, cap: MAX_SWEEP_P }));
    }

    #[test]
    fn empty_mask_is_its_own_orbit() {
        let table = ActionTable::cached(p(3)).unwrap();
        let action = MaskAction::new(12, &table.permutations);
        assert!(action.is_orbit_minimum(0));
        assert_eq!(action.orbit_minimum(0), 0);
    }

    #[test]
    fn circulant_classes() {
        let perms = circulant_action(p(3));
        assert_eq!(perms.len(), 2);
        // -1 fixes every class {x, -x}
        assert!(perms.iter().all(|perm| *perm == Permutation::identity(3)));
        assert_eq!(circulant_orbit_count(p(3)).unwrap(), BigInt::from(8));
    }
}
