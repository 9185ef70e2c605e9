#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sperner_core::family::full_mask;
use sperner_core::{compose, seven56, three_sperner, trivial_construction, Family, Member};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random antichain of masks over `m` atoms, grown greedily in random order.
pub fn random_antichain(rng: &mut ChaCha8Rng, m: u32, tries: usize) -> Vec<u64> {
    let total = 1u64 << m;
    let mut picked: Vec<u64> = Vec::new();
    for _ in 0..tries {
        let t = rng.gen_range(0..total);
        if picked.iter().all(|&p| p & !t != 0 && t & !p != 0) {
            picked.push(t);
        }
    }
    picked
}

/// Maximal masks over `m` atoms containing none of `smalls`.
pub fn maximal_free(m: u32, smalls: &[u64]) -> Vec<u64> {
    let full = full_mask(m);
    let free: Vec<u64> = (0..=full)
        .filter(|&t| smalls.iter().all(|&s| s & !t != 0))
        .collect();
    free.iter()
        .copied()
        .filter(|&t| (0..m).all(|b| t >> b & 1 == 1 || !free.contains(&(t | 1 << b))))
        .collect()
}

/// Minimal masks over `m` atoms inside none of `larges`.
pub fn minimal_uncovered(m: u32, larges: &[u64]) -> Vec<u64> {
    let full = full_mask(m);
    let comp: Vec<u64> = larges.iter().map(|&l| !l & full).collect();
    maximal_free(m, &comp)
        .into_iter()
        .map(|t| !t & full)
        .collect()
}

/// Saturated antichain built from a random antichain of smalls, or of larges
/// when `larges_first` is set.
pub fn random_saturated_antichain(rng: &mut ChaCha8Rng, m: u32, larges_first: bool) -> Family {
    let tries = rng.gen_range(1..=8);
    let seed = random_antichain(rng, m, tries);
    let (smalls, larges) = if larges_first {
        (minimal_uncovered(m, &seed), seed)
    } else {
        let l = maximal_free(m, &seed);
        (seed, l)
    };
    let members = smalls
        .into_iter()
        .map(Member::small)
        .chain(larges.into_iter().map(Member::large));
    Family::new(m, members).unwrap()
}

/// Every possible member over `m` atoms.
pub fn all_members(m: u32) -> Vec<Member> {
    (0..1u64 << m)
        .flat_map(|t| [Member::small(t), Member::large(t)])
        .collect()
}

/// Every nonempty family over `m <= 2` atoms.
pub fn all_families(m: u32) -> Vec<Family> {
    let pool = all_members(m);
    (1u64..1 << pool.len())
        .map(|sel| {
            let ms = (0..pool.len())
                .filter(|&i| sel >> i & 1 == 1)
                .map(|i| pool[i]);
            Family::new(m, ms).unwrap()
        })
        .collect()
}

pub fn random_family(rng: &mut ChaCha8Rng, m: u32, max_len: usize) -> Family {
    let mut pool = all_members(m);
    pool.shuffle(rng);
    let len = rng.gen_range(1..=max_len.min(pool.len()));
    Family::new(m, pool.into_iter().take(len)).unwrap()
}

/// `f` with one random member removed or one random absent member added.
pub fn mutate(rng: &mut ChaCha8Rng, f: &Family) -> Family {
    if f.len() > 1 && rng.gen_bool(0.5) {
        let x = *f.members().choose(rng).unwrap();
        return f.without(&x);
    }
    let absent: Vec<Member> = all_members(f.m())
        .into_iter()
        .filter(|x| !f.contains(x))
        .collect();
    match absent.choose(rng) {
        Some(&x) => Family::new(f.m(), f.members().iter().copied().chain([x])).unwrap(),
        None => f.clone(),
    }
}

pub fn builtins() -> Vec<(String, Family)> {
    let s56 = seven56();
    let three = three_sperner();
    let mut v = vec![
        ("three".to_string(), three.clone()),
        ("seven56".to_string(), s56.clone()),
        ("seven56*three".to_string(), compose(&s56, &three).unwrap()),
        ("seven56*seven56".to_string(), compose(&s56, &s56).unwrap()),
        ("three*three".to_string(), compose(&three, &three).unwrap()),
    ];
    for k in 2..=10 {
        v.push((format!("trivial({k})"), trivial_construction(k).unwrap()));
    }
    v
}

/// Layer count of `f`, used as the `k` under test.
pub fn layer_count(f: &Family) -> usize {
    f.canonical_decomposition().map(|d| d.len()).unwrap_or(0)
}

/// `(layer verdict, brute-force verdict)` at `k` with the block expanded to `h` elements.
pub fn both_verdicts(f: &Family, k: usize, h: u32) -> (bool, bool) {
    let layered = sperner_core::verify_saturated_k_sperner(f, k)
        .unwrap()
        .verdict;
    let c = sperner_core::instantiate(f, h).unwrap();
    let brute = sperner_core::brute_force_saturated(&c, k).unwrap();
    (layered, brute)
}

/// Small families for oracle comparison: every family over at most two atoms,
/// compositions of the saturated ones, their one-member mutations, and random
/// families over three to five atoms.
pub fn oracle_cases(seed: u64) -> Vec<Family> {
    let mut rng = rng(seed);
    let mut cases: Vec<Family> = (0..=2).flat_map(all_families).collect();
    let saturated: Vec<Family> = cases
        .iter()
        .filter(|f| {
            let k = layer_count(f);
            sperner_core::verify_saturated_k_sperner(f, k)
                .unwrap()
                .verdict
        })
        .cloned()
        .collect();
    let mut grown = Vec::new();
    for a in &saturated {
        for b in &saturated {
            if a.m() + b.m() <= 5 && rng.gen_bool(0.5) {
                let g = compose(a, b).unwrap();
                if !g.is_empty() {
                    grown.push(g);
                }
            }
        }
    }
    for f in grown.clone() {
        grown.push(mutate(&mut rng, &f));
    }
    cases.extend(grown);
    for _ in 0..600 {
        let m = rng.gen_range(3..=5);
        cases.push(random_family(&mut rng, m, 12));
    }
    cases
}
