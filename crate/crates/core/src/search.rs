//! Bounded exhaustive search for small saturated k-Sperner systems.
//!
//! A saturated antichain is determined by its small part: the large part must
//! be exactly the maximal atom sets containing no small member. The search
//! therefore builds families layer by layer, choosing an antichain of small
//! masks for each layer, deriving the larges, and keeping only layers where
//! every member strictly contains a member of the layer below. Partial
//! families isomorphic (under atom relabeling) to one already expanded are
//! skipped. Sizes are minimized by branch and bound.
//!
//! With forcing enabled the structure every minimum-size system must have is
//! imposed up front: bottom layer `{∅}`, top layer the full set, smalls of
//! layer `i` with at least `i` atoms, larges of layer `i` missing at least
//! `k - 1 - i` atoms, layer 1 made of at least `k - 2` singletons plus one
//! large, and the mirror image for layer `k - 2`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::SearchError;
use crate::family::{full_mask, Family, Member};
use crate::saturation::verify_saturated_k_sperner;

pub const MAX_SEARCH_ATOMS: u32 = 10;
pub const MAX_SEARCH_SIZE: usize = 64;
pub const MAX_CANONICAL_ATOMS: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub k: usize,
    pub max_atoms: u32,
    pub max_size: usize,
    /// Maximum number of candidate layers examined.
    pub budget: u64,
    pub forcing: bool,
}

impl SearchBounds {
    pub fn new(k: usize, max_atoms: u32, max_size: usize) -> Self {
        SearchBounds {
            k,
            max_atoms,
            max_size,
            budget: 10_000_000,
            forcing: true,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.k == 0 {
            return Err(SearchError::BadK);
        }
        if self.max_atoms > MAX_SEARCH_ATOMS {
            return Err(SearchError::TooManyAtoms(self.max_atoms));
        }
        if self.max_size > MAX_SEARCH_SIZE {
            return Err(SearchError::SizeTooLarge(self.max_size));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(Family),
    NoneWithinBounds,
    BudgetExhausted { best: Option<Family> },
}

/// The region a search result speaks for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub k: usize,
    pub max_atoms: u32,
    pub max_size: usize,
    pub forcing: bool,
    /// Whether the region below the reported size was fully explored.
    pub exhaustive: bool,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub nodes: u64,
    pub certificate: Certificate,
}

/// Applies an atom permutation to masks over `m <= 8` atoms via a lookup table.
struct Relabel {
    table: Vec<u64>,
}

impl Relabel {
    fn new(perm: &[u8]) -> Self {
        let m = perm.len();
        let mut table = vec![0u64; 1 << m];
        for mask in 1..table.len() {
            let low = mask.trailing_zeros() as usize;
            table[mask] = table[mask & (mask - 1)] | 1 << perm[low];
        }
        Relabel { table }
    }

    fn apply(&self, x: &Member) -> Member {
        Member {
            mask: self.table[x.mask as usize],
            large: x.large,
        }
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Least relabeling of a layered structure, comparing layer by layer in
/// canonical member order.
fn canonical_layers(m: u32, layers: &[Vec<Member>]) -> Vec<Vec<Member>> {
    let mut perm: Vec<u8> = (0..m as u8).collect();
    let mut best: Option<Vec<Vec<Member>>> = None;
    loop {
        let r = Relabel::new(&perm);
        let image: Vec<Vec<Member>> = layers
            .iter()
            .map(|l| {
                let mut v: Vec<Member> = l.iter().map(|x| r.apply(x)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("at least the identity permutation")
}

/// Least relabeling of `f` over all permutations of its atoms (`H` fixed).
pub fn canonical_form(f: &Family) -> Result<Family, SearchError> {
    if f.m() > MAX_CANONICAL_ATOMS {
        return Err(SearchError::CanonicalTooLarge(f.m()));
    }
    let mut layers = canonical_layers(f.m(), &[f.members().to_vec()]);
    Ok(Family::from_sorted_unchecked(
        f.m(),
        layers.pop().unwrap_or_default(),
    ))
}

pub fn is_isomorphic(a: &Family, b: &Family) -> Result<bool, SearchError> {
    Ok(a.m() == b.m() && a.len() == b.len() && canonical_form(a)? == canonical_form(b)?)
}

/// Maximal atom sets that contain no small member.
fn derive_larges(m: u32, smalls: &[u64]) -> Vec<u64> {
    let full = full_mask(m);
    let uncovered = |t: u64| smalls.iter().all(|&s| s & !t != 0);
    (0..=full)
        .filter(|&t| uncovered(t))
        .filter(|&t| (0..m).all(|b| t >> b & 1 == 1 || !uncovered(t | 1 << b)))
        .collect()
}

struct Searcher<'a> {
    bounds: &'a SearchBounds,
    m: u32,
    nodes: u64,
    out_of_budget: bool,
    /// Largest family size still worth finding.
    limit: usize,
    best: Option<Family>,
    seen: HashSet<Vec<Vec<Member>>>,
    symmetry: bool,
}

impl Searcher<'_> {
    fn forced(&self) -> bool {
        self.bounds.forcing && self.bounds.k >= 2
    }

    fn min_layer_size(&self, i: usize) -> usize {
        let k = self.bounds.k;
        if i == 0 || i == k - 1 {
            return 1;
        }
        if self.forced() && (i == 1 || i == k - 2) {
            return k - 1;
        }
        2
    }

    fn min_rest(&self, from: usize) -> usize {
        (from..self.bounds.k).map(|i| self.min_layer_size(i)).sum()
    }

    fn dfs(&mut self, layers: &mut Vec<Vec<Member>>, used: usize) {
        if self.out_of_budget {
            return;
        }
        let k = self.bounds.k;
        let depth = layers.len();
        if depth == k {
            self.leaf(layers, used);
            return;
        }
        if used + self.min_rest(depth) > self.limit {
            return;
        }
        let room = self.limit - used - self.min_rest(depth + 1);
        for layer in self.candidates(depth, layers.last(), room) {
            self.nodes += 1;
            if self.nodes > self.bounds.budget {
                self.out_of_budget = true;
                return;
            }
            let size = layer.len();
            if used + size + self.min_rest(depth + 1) > self.limit {
                continue;
            }
            layers.push(layer);
            let fresh = !self.symmetry || self.seen.insert(canonical_layers(self.m, layers));
            if fresh {
                self.dfs(layers, used + size);
            }
            layers.pop();
            if self.out_of_budget {
                return;
            }
        }
    }

    fn leaf(&mut self, layers: &[Vec<Member>], used: usize) {
        let members = layers.iter().flatten().copied();
        let Ok(family) = Family::new(self.m, members) else {
            return;
        };
        let verified = verify_saturated_k_sperner(&family, self.bounds.k)
            .map(|r| r.verdict)
            .unwrap_or(false);
        if verified && used <= self.limit {
            self.best = Some(family);
            self.limit = used.saturating_sub(1);
        }
    }

    /// Candidate layers at index `i`, each at most `room` members, in a
    /// deterministic order.
    fn candidates(&self, i: usize, prev: Option<&Vec<Member>>, room: usize) -> Vec<Vec<Member>> {
        let k = self.bounds.k;
        let m = self.m;
        let full = full_mask(m);
        let forced = self.forced();
        if forced && i == 0 {
            return vec![vec![Member::EMPTY]];
        }
        if forced && i == k - 1 {
            let top = Member::large(full);
            let ok = prev.is_none_or(|p| p.iter().all(|y| y.is_strict_subset_of(&top)));
            return if ok { vec![vec![top]] } else { vec![] };
        }

        let prev_smalls: Vec<u64> = prev
            .map(|p| p.iter().filter(|y| !y.large).map(|y| y.mask).collect())
            .unwrap_or_default();
        let min_small = if forced { i as u32 } else { 0 };
        let mut pool: Vec<u64> = (0..=full)
            .filter(|&s| s.count_ones() >= min_small)
            .filter(|&s| prev.is_none() || prev_smalls.iter().any(|&p| p != s && p & !s == 0))
            .filter(|&s| !(forced && i == 1) || s.count_ones() == 1)
            .collect();
        pool.sort_unstable_by_key(|&s| (s.count_ones(), s));

        let max_smalls = if forced && i == k - 2 { 1 } else { room };
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.antichains(&pool, 0, &mut chosen, max_smalls, &mut |smalls| {
            if let Some(layer) = self.complete_layer(i, prev, smalls, room) {
                out.push(layer);
            }
        });
        out
    }

    fn antichains(
        &self,
        pool: &[u64],
        start: usize,
        chosen: &mut Vec<u64>,
        cap: usize,
        emit: &mut dyn FnMut(&[u64]),
    ) {
        emit(chosen);
        if chosen.len() >= cap {
            return;
        }
        for idx in start..pool.len() {
            let s = pool[idx];
            if chosen.iter().all(|&c| c & !s != 0 && s & !c != 0) {
                chosen.push(s);
                self.antichains(pool, idx + 1, chosen, cap, emit);
                chosen.pop();
            }
        }
    }

    fn complete_layer(
        &self,
        i: usize,
        prev: Option<&Vec<Member>>,
        smalls: &[u64],
        room: usize,
    ) -> Option<Vec<Member>> {
        let k = self.bounds.k;
        let m = self.m;
        let forced = self.forced();
        let larges = derive_larges(m, smalls);
        if smalls.len() + larges.len() > room {
            return None;
        }
        if forced {
            let need_co = (k - 1 - i) as u32;
            if larges.iter().any(|&l| m - l.count_ones() < need_co) {
                return None;
            }
            if i == 1 && (larges.len() != 1 || smalls.len() < k - 2) {
                return None;
            }
            if i == k - 2 {
                let co_one = larges.iter().filter(|&&l| m - l.count_ones() == 1).count();
                if smalls.len() != 1 || co_one < k - 2 {
                    return None;
                }
            }
        }
        let mut layer: Vec<Member> = smalls.iter().map(|&s| Member::small(s)).collect();
        layer.extend(larges.iter().map(|&l| Member::large(l)));
        if let Some(p) = prev {
            let supported = layer
                .iter()
                .filter(|x| x.large)
                .all(|x| p.iter().any(|y| y.is_strict_subset_of(x)));
            if !supported {
                return None;
            }
        }
        layer.sort_unstable();
        Some(layer)
    }
}

fn statement(b: &SearchBounds, outcome: &Outcome) -> String {
    let scope = if b.forcing && b.k >= 2 {
        "with the structure forced on minimum systems"
    } else {
        "without structural forcing"
    };
    match outcome {
        Outcome::Found(f) => format!(
            "minimum within bounds: size {} over {} atoms; no saturated {}-Sperner family with fewer members over 0..={} atoms ({scope})",
            f.len(),
            f.m(),
            b.k,
            b.max_atoms
        ),
        Outcome::NoneWithinBounds => format!(
            "no saturated {}-Sperner family with at most {} members over 0..={} atoms ({scope})",
            b.k, b.max_size, b.max_atoms
        ),
        Outcome::BudgetExhausted { .. } => format!(
            "node budget of {} exhausted; nothing is claimed for k = {}, atoms <= {}, size <= {}",
            b.budget, b.k, b.max_atoms, b.max_size
        ),
    }
}

/// Searches universes of `0..=max_atoms` atoms for the smallest saturated
/// k-Sperner system with at most `max_size` members.
pub fn search_min(bounds: &SearchBounds) -> Result<SearchResult, SearchError> {
    bounds.validate()?;
    let mut nodes = 0u64;
    let mut limit = bounds.max_size;
    let mut best: Option<Family> = None;
    let mut out_of_budget = false;

    for m in 0..=bounds.max_atoms {
        let mut s = Searcher {
            bounds,
            m,
            nodes,
            out_of_budget: false,
            limit,
            best: None,
            seen: HashSet::new(),
            symmetry: m <= MAX_CANONICAL_ATOMS,
        };
        s.dfs(&mut Vec::new(), 0);
        nodes = s.nodes;
        if let Some(f) = s.best {
            limit = s.limit;
            best = Some(f);
        }
        if s.out_of_budget {
            out_of_budget = true;
            break;
        }
    }

    let outcome = match (out_of_budget, best) {
        (true, best) => Outcome::BudgetExhausted { best },
        (false, Some(f)) => Outcome::Found(f),
        (false, None) => Outcome::NoneWithinBounds,
    };
    let certificate = Certificate {
        k: bounds.k,
        max_atoms: bounds.max_atoms,
        max_size: bounds.max_size,
        forcing: bounds.forcing && bounds.k >= 2,
        exhaustive: !out_of_budget,
        statement: statement(bounds, &outcome),
    };
    Ok(SearchResult {
        outcome,
        nodes,
        certificate,
    })
}
