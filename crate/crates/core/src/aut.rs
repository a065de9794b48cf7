//! `Aut(T_8p)` as the two parametric families
//! `sigma(alpha, beta): a -> a^alpha, b -> a^beta b` and
//! `tau(gamma, delta): a -> a^gamma, b -> a^delta b^3`,
//! with `alpha, gamma` units of `Z_2p` and `beta, delta` in `Z_2p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{units_2p, OddPrime, UnitResidue};
use crate::error::{Error, Result};
use crate::group::GroupElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sigma,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    family: Family,
    alpha: UnitResidue,
    beta: u64,
}

impl Automorphism {
    pub fn new(family: Family, alpha: UnitResidue, beta: u64) -> Self {
        let beta = beta % alpha.prime().two_p();
        Self { family, alpha, beta }
    }

    pub fn sigma(p: OddPrime, alpha: u64, beta: u64) -> Result<Self> {
        Ok(Self::new(Family::Sigma, UnitResidue::new(alpha, p)?, beta))
    }

    pub fn tau(p: OddPrime, gamma: u64, delta: u64) -> Result<Self> {
        Ok(Self::new(Family::Tau, UnitResidue::new(gamma, p)?, delta))
    }

    pub fn identity(p: OddPrime) -> Self {
        Self::sigma(p, 1, 0).expect("1 is a unit")
    }

    #[inline]
    pub fn family(self) -> Family {
        self.family
    }

    /// The multiplier of `a` (`alpha` or `gamma`).
    #[inline]
    pub fn alpha(self) -> UnitResidue {
        self.alpha
    }

    /// The shift carried by the image of `b` (`beta` or `delta`).
    #[inline]
    pub fn beta(self) -> u64 {
        self.beta
    }

    #[inline]
    pub fn prime(self) -> OddPrime {
        self.alpha.prime()
    }

    pub fn apply(self, g: GroupElement) -> Result<GroupElement> {
        if g.prime() != self.prime() {
            return Err(Error::MismatchedPrime { left: self.prime().get(), right: g.prime().get() });
        }
        Ok(self.apply_unchecked(g))
    }

    pub(crate) fn apply_unchecked(self, g: GroupElement) -> GroupElement {
        let p = self.prime();
        let ka = (g.k() * self.alpha.value()) as i64;
        let shift = self.beta as i64;
        let (k, l) = match (self.family, g.l()) {
            (_, 0) => (ka, 0),
            (Family::Sigma, 1) => (ka + shift, 1),
            (Family::Sigma, 2) => (ka, 2),
            (Family::Sigma, _) => (ka + shift, 3),
            (Family::Tau, 1) => (ka + shift, 3),
            (Family::Tau, 2) => (ka + p.get() as i64, 2),
            (Family::Tau, _) => (ka + shift, 1),
        };
        GroupElement::new(p, k, l)
    }

    /// Images of all `8p` elements, indexed by [`GroupElement::index`].
    pub fn table(self) -> Vec<GroupElement> {
        GroupElement::all(self.prime()).map(|g| self.apply_unchecked(g)).collect()
    }

    /// Recovers the family member sending `a -> a_image` and `b -> b_image`,
    /// if the images have that shape.
    pub fn from_generator_images(a_image: GroupElement, b_image: GroupElement) -> Option<Self> {
        let p = a_image.prime();
        if b_image.prime() != p || a_image.l() != 0 {
            return None;
        }
        let alpha = UnitResidue::new(a_image.k(), p).ok()?;
        match b_image.l() {
            1 => Some(Self::new(Family::Sigma, alpha, b_image.k())),
            3 => Some(Self::new(Family::Tau, alpha, b_image.k())),
            _ => None,
        }
    }

    /// `self ∘ other`, identified with an enumerated member and checked pointwise.
    pub fn compose(self, other: Self) -> Result<Self> {
        let p = self.prime();
        if other.prime() != p {
            return Err(Error::MismatchedPrime { left: p.get(), right: other.prime().get() });
        }
        let image = |g| self.apply_unchecked(other.apply_unchecked(g));
        let candidate =
            Self::from_generator_images(image(GroupElement::a(p)), image(GroupElement::b(p)))
                .ok_or_else(|| {
                    Error::Internal(format!("{self} ∘ {other} is not a member of either family"))
                })?;
        if GroupElement::all(p).any(|g| candidate.apply_unchecked(g) != image(g)) {
            return Err(Error::Internal(format!(
                "{self} ∘ {other} agrees with {candidate} on generators but not pointwise"
            )));
        }
        Ok(candidate)
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::Sigma => "sigma",
            Family::Tau => "tau",
        };
        write!(f, "{name}({},{})", self.alpha, self.beta)
    }
}

/// All `4p(p - 1)` automorphisms: sigma before tau, then `alpha` ascending,
/// then `beta` ascending.
pub fn enumerate_aut(p: OddPrime) -> Vec<Automorphism> {
    let units = units_2p(p);
    [Family::Sigma, Family::Tau]
        .into_iter()
        .flat_map(|family| {
            units.iter().flat_map(move |&alpha| {
                (0..p.two_p()).map(move |beta| Automorphism { family, alpha, beta })
            })
        })
        .collect()
}

/// The endomorphism candidate `a^k b^l -> A^k B^l` for chosen generator images.
/// Whether it is well defined and bijective is exactly what [`verify_map`] tests.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorMap {
    pub a_image: GroupElement,
    pub b_image: GroupElement,
}

impl GeneratorMap {
    pub fn table(&self) -> Vec<GroupElement> {
        let p = self.a_image.prime();
        GroupElement::all(p)
            .map(|g| self.a_image.pow(g.k()).mul_unchecked(self.b_image.pow(g.l() as u64)))
            .collect()
    }
}

/// True when `images` (indexed by element index) is a bijective homomorphism.
pub fn verify_map(p: OddPrime, images: &[GroupElement]) -> bool {
    let n = p.group_order();
    if images.len() != n || images.iter().any(|g| g.prime() != p) {
        return false;
    }
    let mut hit = vec![false; n];
    for g in images {
        if std::mem::replace(&mut hit[g.index()], true) {
            return false;
        }
    }
    let elements: Vec<_> = GroupElement::all(p).collect();
    elements.iter().all(|&x| {
        elements.iter().all(|&y| {
            images[x.mul_unchecked(y).index()] == images[x.index()].mul_unchecked(images[y.index()])
        })
    })
}

pub fn verify_automorphism(f: Automorphism) -> bool {
    verify_map(f.prime(), &f.table())
}
