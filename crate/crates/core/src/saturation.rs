//! Saturation checks.
//!
//! Two independent routes decide whether a family is a saturated k-Sperner
//! system:
//!
//! * [`verify_saturated_k_sperner`] works at atom level: the family must
//!   decompose into exactly `k` antichain layers, each of which is a saturated
//!   antichain. A layer is saturated iff every `T ⊆ {1..m}` contains a small
//!   member or lies inside a large member; this is a `2^m` scan that does not
//!   depend on the size of the homogeneous block.
//! * [`brute_force_saturated`] instantiates the block as concrete elements
//!   and tries every subset of the ground set.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FamilyError, SaturationError};
use crate::family::{full_mask, Family, LayerDecomposition, Member};

/// Largest atom count accepted by the layer saturation scan.
pub const MAX_SCAN_ATOMS: u32 = 28;
/// Largest ground set accepted by the brute-force oracle.
pub const MAX_ORACLE_GROUND: u32 = 24;

/// A family on an explicit ground set `{1..n}`; bit `i` is element `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteFamily {
    n: u32,
    members: Vec<u64>,
}

impl ConcreteFamily {
    pub fn new(n: u32, members: impl IntoIterator<Item = u64>) -> Result<Self, FamilyError> {
        if n > 63 {
            return Err(FamilyError::TooManyAtoms(n));
        }
        let full = full_mask(n);
        let mut members: Vec<u64> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&s| s & !full != 0) {
            return Err(FamilyError::AtomOutOfRange { member: bad, m: n });
        }
        members.sort_unstable_by_key(|&s| (s.count_ones(), s));
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(FamilyError::DuplicateMember(format!("{:#x}", w[0])));
        }
        Ok(ConcreteFamily { n, members })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Members sorted by `(cardinality, bits)`.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Bitset over all subsets of `{1..m}`.
struct SubsetBits {
    m: u32,
    words: Vec<u64>,
}

// Bit positions whose index has bit `b` clear, for `b < 6`.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

impl SubsetBits {
    fn new(m: u32) -> Self {
        let len = if m <= 6 { 1 } else { 1usize << (m - 6) };
        SubsetBits {
            m,
            words: vec![0; len],
        }
    }

    fn set(&mut self, t: u64) {
        self.words[(t >> 6) as usize] |= 1 << (t & 63);
    }

    /// After this call bit `T` is set iff some set bit `S ⊆ T` existed.
    fn close_upward(&mut self) {
        for b in 0..self.m {
            if b < 6 {
                let sh = 1u32 << b;
                for w in &mut self.words {
                    *w |= (*w & LOW_HALF[b as usize]) << sh;
                }
            } else {
                let stride = 1usize << (b - 6);
                for chunk in self.words.chunks_mut(stride * 2) {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    for (h, l) in hi.iter_mut().zip(lo.iter()) {
                        *h |= *l;
                    }
                }
            }
        }
    }

    /// After this call bit `T` is set iff some set bit `S ⊇ T` existed.
    fn close_downward(&mut self) {
        for b in 0..self.m {
            if b < 6 {
                let sh = 1u32 << b;
                for w in &mut self.words {
                    *w |= (*w >> sh) & LOW_HALF[b as usize];
                }
            } else {
                let stride = 1usize << (b - 6);
                for chunk in self.words.chunks_mut(stride * 2) {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    for (l, h) in lo.iter_mut().zip(hi.iter()) {
                        *l |= *h;
                    }
                }
            }
        }
    }
}

/// Outcome of a single-layer saturation scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayerSaturation {
    pub saturated: bool,
    /// Least uncovered `T` ordered by `(popcount, mask)`.
    pub witness: Option<u64>,
}

/// Decides saturation of an antichain layer by scanning all `T ⊆ {1..m}`.
pub fn is_saturated_antichain(layer: &Family) -> Result<LayerSaturation, SaturationError> {
    if !layer.is_antichain() {
        return Err(SaturationError::NotAntichain);
    }
    saturation_scan(layer.m(), layer.members())
}

pub(crate) fn saturation_scan(
    m: u32,
    members: &[Member],
) -> Result<LayerSaturation, SaturationError> {
    if m > MAX_SCAN_ATOMS {
        return Err(SaturationError::ScanTooLarge(m, MAX_SCAN_ATOMS));
    }
    let mut up = SubsetBits::new(m);
    let mut down = SubsetBits::new(m);
    for x in members {
        if x.large {
            down.set(x.mask);
        } else {
            up.set(x.mask);
        }
    }
    up.close_upward();
    down.close_downward();

    let total = 1u64 << m;
    let mut witness: Option<u64> = None;
    for (wi, (u, d)) in up.words.iter().zip(&down.words).enumerate() {
        let mut miss = !(u | d);
        if total < 64 {
            miss &= (1u64 << total) - 1;
        }
        while miss != 0 {
            let t = ((wi as u64) << 6) | miss.trailing_zeros() as u64;
            miss &= miss - 1;
            let better = match witness {
                None => true,
                Some(w) => (t.count_ones(), t) < (w.count_ones(), w),
            };
            if better {
                witness = Some(t);
            }
        }
    }
    Ok(LayerSaturation {
        saturated: witness.is_none(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerReport {
    pub index: usize,
    pub size: usize,
    pub small: usize,
    pub large: usize,
    pub antichain: bool,
    pub saturated: bool,
    /// Uncovered atom set, as 1-based labels.
    pub witness: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "code", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    WrongLayerCount { expected: usize, found: usize },
    LayerNotSaturated { layer: usize, witness: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub verdict: bool,
    pub k: usize,
    pub layer_count: usize,
    pub size: usize,
    pub layers: Vec<LayerReport>,
    pub reasons: Vec<Reason>,
}

fn mask_atoms(t: u64) -> Vec<u32> {
    Member::small(t).atoms().collect()
}

/// Layer-based verdict: exactly `k` canonical layers, each a saturated antichain.
pub fn verify_saturated_k_sperner(
    f: &Family,
    k: usize,
) -> Result<VerificationReport, SaturationError> {
    if f.is_empty() {
        return Ok(VerificationReport {
            verdict: false,
            k,
            layer_count: 0,
            size: 0,
            layers: Vec::new(),
            reasons: vec![Reason::WrongLayerCount {
                expected: k,
                found: 0,
            }],
        });
    }
    let d = f.canonical_decomposition()?;
    let mut reasons = Vec::new();
    if d.len() != k {
        reasons.push(Reason::WrongLayerCount {
            expected: k,
            found: d.len(),
        });
    }
    let mut layers = Vec::with_capacity(d.len());
    for (i, layer) in d.layers.iter().enumerate() {
        let antichain = layer.is_antichain();
        let scan = saturation_scan(layer.m(), layer.members())?;
        if let Some(t) = scan.witness {
            reasons.push(Reason::LayerNotSaturated {
                layer: i,
                witness: mask_atoms(t),
            });
        }
        layers.push(LayerReport {
            index: i,
            size: layer.len(),
            small: layer.small_count(),
            large: layer.large_count(),
            antichain,
            saturated: antichain && scan.saturated,
            witness: scan.witness.map(mask_atoms),
        });
    }
    Ok(VerificationReport {
        verdict: reasons.is_empty(),
        k,
        layer_count: d.len(),
        size: f.len(),
        layers,
        reasons,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerSizeDiagnostics {
    pub index: usize,
    pub min_small_size: Option<u32>,
    pub min_large_co_size: Option<u32>,
    /// Every small has at least `index` atoms.
    pub small_size_ok: bool,
    /// Every large misses at least `k - 1 - index` atoms.
    pub large_co_size_ok: bool,
    pub flat: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeDiagnostics {
    pub k: usize,
    pub layers: Vec<LayerSizeDiagnostics>,
    pub bottom_is_empty_set: bool,
    pub top_is_full_set: bool,
    /// Layer 1 holds at least `k - 2` singleton smalls and exactly one large.
    pub second_layer_shape: bool,
    /// Layer `k - 2` holds at least `k - 2` larges of co-size 1 and exactly one small.
    pub penultimate_layer_shape: bool,
}

impl SizeDiagnostics {
    pub fn all_pass(&self) -> bool {
        self.bottom_is_empty_set
            && self.top_is_full_set
            && self.second_layer_shape
            && self.penultimate_layer_shape
            && self
                .layers
                .iter()
                .all(|l| l.small_size_ok && l.large_co_size_ok)
    }

    pub fn all_flat(&self) -> bool {
        self.layers.iter().all(|l| l.flat)
    }
}

/// Size diagnostics for a decomposition into `k` layers. Not a saturation verdict.
pub fn size_bounds_check(
    d: &LayerDecomposition,
    k: usize,
) -> Result<SizeDiagnostics, SaturationError> {
    if d.len() != k {
        return Err(SaturationError::LayerCount {
            expected: k,
            found: d.len(),
        });
    }
    let m = d.m();
    let layers = d
        .layers
        .iter()
        .enumerate()
        .map(|(i, layer)| {
            let small_sizes: Vec<u32> = layer.small().map(|x| x.popcount()).collect();
            let large_cos: Vec<u32> = layer.large().map(|x| x.co_size(m)).collect();
            let min_small_size = small_sizes.iter().copied().min();
            let min_large_co_size = large_cos.iter().copied().min();
            let need_co = (k - 1 - i) as u32;
            LayerSizeDiagnostics {
                index: i,
                min_small_size,
                min_large_co_size,
                small_size_ok: min_small_size.is_none_or(|s| s >= i as u32),
                large_co_size_ok: min_large_co_size.is_none_or(|c| c >= need_co),
                flat: small_sizes.windows(2).all(|w| w[0] == w[1])
                    && large_cos.windows(2).all(|w| w[0] == w[1]),
            }
        })
        .collect();

    let full = Member::large(full_mask(m));
    let bottom_is_empty_set = d
        .layers
        .first()
        .is_some_and(|l| l.members() == [Member::EMPTY]);
    let top_is_full_set = d.layers.last().is_some_and(|l| l.members() == [full]);
    let (second_layer_shape, penultimate_layer_shape) = if k >= 3 {
        let a1 = &d.layers[1];
        let singles = a1.small().filter(|x| x.popcount() == 1).count();
        let second = singles >= k - 2 && a1.large_count() == 1;
        let ak = &d.layers[k - 2];
        let co_one = ak.large().filter(|x| x.co_size(m) == 1).count();
        let pen = co_one >= k - 2 && ak.small_count() == 1;
        (second, pen)
    } else {
        (true, true)
    };
    Ok(SizeDiagnostics {
        k,
        layers,
        bottom_is_empty_set,
        top_is_full_set,
        second_layer_shape,
        penultimate_layer_shape,
    })
}

/// Realizes `H` as the elements `{m+1..m+h}` of a ground set of size `m + h`.
pub fn instantiate(f: &Family, h: u32) -> Result<ConcreteFamily, SaturationError> {
    if h < 2 {
        return Err(SaturationError::BlockTooSmall(h));
    }
    let n = f.m() + h;
    if n > MAX_ORACLE_GROUND {
        return Err(SaturationError::GroundSetTooLarge(n, MAX_ORACLE_GROUND));
    }
    let block = full_mask(n) & !full_mask(f.m());
    let members = f
        .members()
        .iter()
        .map(|x| if x.large { x.mask | block } else { x.mask });
    Ok(ConcreteFamily::new(n, members)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomPartition {
    /// Classes of 1-based elements, ordered by their least element.
    pub classes: Vec<Vec<u32>>,
    /// Indices into `classes` of the classes with at least two elements.
    pub homogeneous: Vec<usize>,
    /// At most one homogeneous class exists.
    pub homogeneous_unique: bool,
}

impl AtomPartition {
    pub fn homogeneous_classes(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.homogeneous.iter().map(|&i| &self.classes[i])
    }
}

/// Groups ground elements by their membership fingerprint across the family.
pub fn find_atoms(c: &ConcreteFamily) -> AtomPartition {
    let words = c.len().div_ceil(64).max(1);
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for e in 0..c.n() {
        let mut fp = vec![0u64; words];
        for (j, &s) in c.members().iter().enumerate() {
            if s >> e & 1 == 1 {
                fp[j / 64] |= 1 << (j % 64);
            }
        }
        let id = *index.entry(fp).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(e + 1);
    }
    let homogeneous: Vec<usize> = (0..classes.len())
        .filter(|&i| classes[i].len() >= 2)
        .collect();
    AtomPartition {
        homogeneous_unique: homogeneous.len() <= 1,
        classes,
        homogeneous,
    }
}

/// Exhaustive saturation test over every subset of the ground set.
///
/// For each absent `S` the longest chain through `S` is one plus the longest
/// chain of members inside `S` plus the longest chain of members above `S`.
pub fn brute_force_saturated(c: &ConcreteFamily, k: usize) -> Result<bool, SaturationError> {
    let n = c.n();
    if n > MAX_ORACLE_GROUND {
        return Err(SaturationError::GroundSetTooLarge(n, MAX_ORACLE_GROUND));
    }
    let ms = c.members();
    let len = ms.len();
    // Members are sorted by cardinality, so strict subsets come first.
    let mut down = vec![1u8; len];
    for i in 0..len {
        for j in 0..i {
            if ms[j] != ms[i] && ms[j] & !ms[i] == 0 {
                down[i] = down[i].max(down[j] + 1);
            }
        }
    }
    let mut up = vec![1u8; len];
    for i in (0..len).rev() {
        for j in i + 1..len {
            if ms[i] != ms[j] && ms[i] & !ms[j] == 0 {
                up[i] = up[i].max(up[j] + 1);
            }
        }
    }
    if down.iter().any(|&d| d as usize > k) {
        return Ok(false);
    }

    let size = 1usize << n;
    let mut below = vec![0u8; size];
    let mut above = vec![0u8; size];
    let mut present = vec![false; size];
    for (i, &s) in ms.iter().enumerate() {
        below[s as usize] = down[i];
        above[s as usize] = up[i];
        present[s as usize] = true;
    }
    for b in 0..n {
        let half = 1usize << b;
        below.par_chunks_mut(half * 2).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h = (*h).max(*l);
            }
        });
        above.par_chunks_mut(half * 2).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (l, h) in lo.iter_mut().zip(hi.iter()) {
                *l = (*l).max(*h);
            }
        });
    }
    let ok = (0..size)
        .into_par_iter()
        .all(|s| present[s] || 1 + below[s] as usize + above[s] as usize > k);
    Ok(ok)
}

/// The proof parameter `(ln 2 / 2)(1 - 2i/(k-1))`; sampling probability is `1/2 - eps`.
pub fn eps_of(i: u32, k: u32) -> f64 {
    std::f64::consts::LN_2 / 2.0 * (1.0 - 2.0 * i as f64 / (k as f64 - 1.0))
}

/// Expected number of smalls inside, plus larges around, a random set that
/// keeps each element with probability `q`.
pub fn expected_hits(layer: &Family, q: f64) -> Result<f64, SaturationError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(SaturationError::ProbabilityOutOfRange(q));
    }
    let m = layer.m();
    Ok(layer
        .members()
        .iter()
        .map(|x| {
            if x.large {
                (1.0 - q).powi(x.co_size(m) as i32)
            } else {
                q.powi(x.popcount() as i32)
            }
        })
        .sum())
}
