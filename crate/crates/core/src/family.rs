//! Set families in atom representation.
//!
//! A member is a subset of the singleton atoms `{1..m}` together with a flag
//! telling whether it contains the homogeneous block `H`. Members without `H`
//! are *small*, members containing all of `H` are *large*. The ground-set
//! size `n` is never stored; wherever `n - |S|` is needed the n-free
//! *co-size* `m - popcount(mask)` of a large member is used instead.

use std::cmp::Ordering;
use std::fmt;

use crate::error::FamilyError;

/// Largest supported number of singleton atoms.
pub const MAX_ATOMS: u32 = 62;

/// Bitmask with the low `m` bits set.
#[inline]
pub fn full_mask(m: u32) -> u64 {
    if m == 0 {
        0
    } else {
        u64::MAX >> (64 - m)
    }
}

/// One set of a family. Bit `i` of `mask` stands for atom `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Member {
    pub mask: u64,
    pub large: bool,
}

impl Member {
    pub const EMPTY: Member = Member {
        mask: 0,
        large: false,
    };

    pub fn small(mask: u64) -> Self {
        Member { mask, large: false }
    }

    pub fn large(mask: u64) -> Self {
        Member { mask, large: true }
    }

    /// Builds a member from 1-based atom labels.
    pub fn from_atoms(atoms: &[u32], large: bool) -> Self {
        let mask = atoms.iter().fold(0u64, |acc, &a| acc | (1u64 << (a - 1)));
        Member { mask, large }
    }

    /// Number of singleton atoms in the member.
    #[inline]
    pub fn popcount(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Number of singleton atoms missing from the member.
    #[inline]
    pub fn co_size(&self, m: u32) -> u32 {
        m - self.popcount()
    }

    /// Cardinality once instantiated on a ground set of size `n`.
    pub fn cardinality(&self, m: u32, n: u32) -> u32 {
        if self.large {
            self.popcount() + (n - m)
        } else {
            self.popcount()
        }
    }

    /// `self ⊆ other`.
    #[inline]
    pub fn is_subset_of(&self, other: &Member) -> bool {
        self.mask & !other.mask == 0 && (!self.large || other.large)
    }

    /// `self ⊊ other`.
    #[inline]
    pub fn is_strict_subset_of(&self, other: &Member) -> bool {
        self != other && self.is_subset_of(other)
    }

    #[inline]
    pub fn comparable(&self, other: &Member) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self)
    }

    /// Complement within `{1..m} ∪ H`. Exchanges small and large.
    #[inline]
    pub fn complement(&self, m: u32) -> Member {
        Member {
            mask: !self.mask & full_mask(m),
            large: !self.large,
        }
    }

    /// 1-based atom labels in increasing order.
    pub fn atoms(&self) -> impl Iterator<Item = u32> + '_ {
        let mask = self.mask;
        (0..64).filter(move |b| mask >> b & 1 == 1).map(|b| b + 1)
    }

    fn sort_key(&self) -> (bool, u32, u64) {
        (self.large, self.popcount(), self.mask)
    }
}

impl Ord for Member {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Member {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Formats as one member line of the family text format.
impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mask == 0 && !self.large {
            return f.write_str("empty");
        }
        let mut first = true;
        for a in self.atoms() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        if self.large {
            if !first {
                f.write_str(" ")?;
            }
            f.write_str("H")?;
        }
        Ok(())
    }
}

/// A duplicate-free family over `m` singleton atoms, kept in canonical order.
///
/// The canonical order sorts by `(large, popcount, mask)`. Since a strict
/// subset is either small-below-large or has fewer atoms, the order is a
/// linear extension of containment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    m: u32,
    members: Vec<Member>,
}

impl Family {
    /// Builds a family, rejecting out-of-range atoms and duplicates.
    pub fn new(m: u32, members: impl IntoIterator<Item = Member>) -> Result<Self, FamilyError> {
        if m > MAX_ATOMS {
            return Err(FamilyError::TooManyAtoms(m));
        }
        let full = full_mask(m);
        let mut members: Vec<Member> = members.into_iter().collect();
        for x in &members {
            if x.mask & !full != 0 {
                return Err(FamilyError::AtomOutOfRange { member: x.mask, m });
            }
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(FamilyError::DuplicateMember(w[0].to_string()));
        }
        Ok(Family { m, members })
    }

    /// Like [`Family::new`] but silently drops duplicates.
    pub fn from_members_dedup(
        m: u32,
        members: impl IntoIterator<Item = Member>,
    ) -> Result<Self, FamilyError> {
        let mut v: Vec<Member> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Family::new(m, v)
    }

    pub(crate) fn from_sorted_unchecked(m: u32, members: Vec<Member>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family { m, members }
    }

    pub fn empty(m: u32) -> Self {
        Family {
            m,
            members: Vec::new(),
        }
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &Member) -> bool {
        self.members.binary_search(x).is_ok()
    }

    pub fn small(&self) -> impl Iterator<Item = &Member> {
        self.members.iter().filter(|x| !x.large)
    }

    pub fn large(&self) -> impl Iterator<Item = &Member> {
        self.members.iter().filter(|x| x.large)
    }

    pub fn small_count(&self) -> usize {
        self.small().count()
    }

    pub fn large_count(&self) -> usize {
        self.large().count()
    }

    pub fn without(&self, x: &Member) -> Family {
        Family {
            m: self.m,
            members: self.members.iter().copied().filter(|y| y != x).collect(),
        }
    }

    /// Image of the family under member-wise complement.
    pub fn complement(&self) -> Family {
        let mut members: Vec<Member> = self.members.iter().map(|x| x.complement(self.m)).collect();
        members.sort_unstable();
        Family { m: self.m, members }
    }

    pub fn is_complement_closed(&self) -> bool {
        self.members
            .iter()
            .all(|x| self.contains(&x.complement(self.m)))
    }

    pub fn is_antichain(&self) -> bool {
        is_antichain(&self.members)
    }

    /// Number of sets in a longest chain; zero for the empty family.
    pub fn longest_chain_length(&self) -> usize {
        heights(&self.members).into_iter().max().unwrap_or(0)
    }

    /// Peels minimal elements off repeatedly.
    pub fn canonical_decomposition(&self) -> Result<LayerDecomposition, FamilyError> {
        if self.members.is_empty() {
            return Err(FamilyError::EmptyFamily);
        }
        // The layer of a member is the length of the longest chain ending at it.
        let h = heights(&self.members);
        let depth = h.iter().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); depth];
        for (x, &hx) in self.members.iter().zip(&h) {
            layers[hx - 1].push(*x);
        }
        let layers = layers
            .into_iter()
            .map(|v| Family::from_sorted_unchecked(self.m, v))
            .collect();
        Ok(LayerDecomposition {
            layers,
            source: self.clone(),
        })
    }
}

/// True iff no member strictly contains another.
pub fn is_antichain(members: &[Member]) -> bool {
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if a.is_strict_subset_of(b) || b.is_strict_subset_of(a) {
                return false;
            }
        }
    }
    true
}

/// Longest chain ending at each member. `members` must be in canonical order.
pub(crate) fn heights(members: &[Member]) -> Vec<usize> {
    let mut h = vec![1usize; members.len()];
    for i in 0..members.len() {
        let x = members[i];
        let mut best = 0;
        for j in 0..i {
            if h[j] > best && members[j].is_strict_subset_of(&x) {
                best = h[j];
            }
        }
        h[i] = best + 1;
    }
    h
}

/// Ordered antichain layers of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub layers: Vec<Family>,
    pub source: Family,
}

impl LayerDecomposition {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn m(&self) -> u32 {
        self.source.m()
    }
}

/// Every member of layer `i >= 1` strictly contains some member of layer `i - 1`.
pub fn is_layered(layers: &[Family]) -> bool {
    layers.windows(2).all(|w| {
        w[1].members()
            .iter()
            .all(|x| w[0].members().iter().any(|y| y.is_strict_subset_of(x)))
    })
}

/// Layering restricted to the small parts of each layer.
pub fn is_small_layered(layers: &[Family]) -> bool {
    layers.windows(2).all(|w| {
        w[1].small()
            .all(|x| w[0].small().any(|y| y.is_strict_subset_of(x)))
    })
}
