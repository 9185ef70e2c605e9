//! Built-in saturated systems, the product composition and the bootstrap
//! that chains compositions to reach any k.

use serde::Serialize;

use crate::error::ConstructionError;
use crate::family::{Family, Member, MAX_ATOMS};

/// Upper limit on members materialized by [`bootstrapped`].
pub const MAX_MATERIALIZED: u128 = 1 << 22;

/// Every subset of `{1..k-2}` together with its complement. Size `2^(k-1)`.
pub fn trivial_construction(k: u32) -> Result<Family, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::KTooSmall { k, min: 2 });
    }
    let m = k - 2;
    if 1u128 << (k - 1).min(127) > MAX_MATERIALIZED {
        return Err(ConstructionError::TooManyMembers(1u128 << (k - 1).min(127)));
    }
    let members = (0..1u64 << m).flat_map(|a| {
        let x = Member::small(a);
        [x, x.complement(m)]
    });
    Ok(Family::new(m, members)?)
}

/// `{∅, {1}, H, {1} ∪ H}`.
pub fn three_sperner() -> Family {
    Family::new(
        1,
        [
            Member::EMPTY,
            Member::small(1),
            Member::large(0),
            Member::large(1),
        ],
    )
    .expect("static family")
}

const FANO_LINES: [[u32; 3]; 7] = [
    [1, 2, 6],
    [2, 3, 7],
    [1, 3, 4],
    [2, 4, 5],
    [3, 5, 6],
    [4, 6, 7],
    [1, 5, 7],
];

/// Layers `A0..A3` of the 56-member saturated 7-Sperner system; the upper
/// three layers are complements of `A2, A1, A0`.
fn seven56_lower_layers() -> [Vec<Member>; 4] {
    let s = |a: &[u32]| Member::from_atoms(a, false);
    let l = |a: &[u32]| Member::from_atoms(a, true);
    let a0 = vec![Member::EMPTY];
    let a1 = vec![s(&[2]), s(&[3]), s(&[5]), s(&[6]), s(&[7]), l(&[1, 4])];
    // Cyclically consecutive pairs, and 3-sets with no consecutive pair.
    let mut a2: Vec<Member> = (1..=7u32).map(|i| s(&[i, i % 7 + 1])).collect();
    for t in [
        [3, 5, 7],
        [1, 4, 6],
        [2, 5, 7],
        [1, 3, 6],
        [2, 4, 7],
        [1, 3, 5],
        [2, 4, 6],
    ] {
        a2.push(l(&t));
    }
    let mut a3: Vec<Member> = FANO_LINES.iter().map(|line| s(line)).collect();
    let larges: Vec<Member> = a3.iter().map(|x| x.complement(7)).collect();
    a3.extend(larges);
    [a0, a1, a2, a3]
}

/// The 56-member saturated 7-Sperner system over 7 atoms.
pub fn seven56() -> Family {
    let lower = seven56_lower_layers();
    let mut members: Vec<Member> = Vec::with_capacity(56);
    for layer in &lower {
        members.extend(layer.iter().copied());
    }
    for layer in &lower[..3] {
        members.extend(layer.iter().map(|x| x.complement(7)));
    }
    Family::new(7, members).expect("static family")
}

/// The seven layers of [`seven56`] as listed, bottom to top.
pub fn seven56_layers() -> Vec<Family> {
    let lower = seven56_lower_layers();
    let mut layers: Vec<Vec<Member>> = lower.to_vec();
    for i in (0..3).rev() {
        layers.push(lower[i].iter().map(|x| x.complement(7)).collect());
    }
    layers
        .into_iter()
        .map(|v| Family::new(7, v).expect("static layer"))
        .collect()
}

/// Product of two systems on disjoint universes: small×small and large×large
/// unions, with the two homogeneous blocks merged.
pub fn compose(f1: &Family, f2: &Family) -> Result<Family, ConstructionError> {
    let m = f1.m() + f2.m();
    if m > MAX_ATOMS {
        return Err(ConstructionError::UniverseTooLarge(m));
    }
    let shift = f1.m();
    let mut members = Vec::with_capacity(
        f1.small_count() * f2.small_count() + f1.large_count() * f2.large_count(),
    );
    for a in f1.small() {
        for b in f2.small() {
            members.push(Member::small(a.mask | b.mask << shift));
        }
    }
    for s in f1.large() {
        for t in f2.large() {
            members.push(Member::large(s.mask | t.mask << shift));
        }
    }
    // Disjoint universes make every union distinct.
    Ok(Family::new(m, members)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Seven56,
    ThreeSperner,
    Trivial(u32),
}

/// How [`bootstrapped`] reaches a given k: `k = 5j + 2 + s` with `0 <= s <= 4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionPlan {
    pub k: u32,
    pub j: u32,
    pub s: u32,
    pub factors: Vec<Factor>,
    pub atoms: u32,
    pub small: u128,
    pub large: u128,
}

impl CompositionPlan {
    pub fn new(k: u32) -> Result<Self, ConstructionError> {
        if k < 2 {
            return Err(ConstructionError::KTooSmall { k, min: 2 });
        }
        let (j, s) = ((k - 2) / 5, (k - 2) % 5);
        if j == 0 {
            let half = 1u128 << s;
            return Ok(CompositionPlan {
                k,
                j,
                s,
                factors: vec![Factor::Trivial(k)],
                atoms: k - 2,
                small: half,
                large: half,
            });
        }
        let mut factors = vec![Factor::Seven56; j as usize];
        factors.extend(std::iter::repeat_n(Factor::ThreeSperner, s as usize));
        // Fold the size identity |G^s| = |F1^s||F2^s|, |G^l| = |F1^l||F2^l|.
        let (mut small, mut large) = (1u128, 1u128);
        for f in &factors {
            let (fs, fl) = match f {
                Factor::Seven56 => (28, 28),
                _ => (2, 2),
            };
            small = small.saturating_mul(fs);
            large = large.saturating_mul(fl);
        }
        Ok(CompositionPlan {
            k,
            j,
            s,
            factors,
            atoms: 7 * j + s,
            small,
            large,
        })
    }

    /// `2^(s+1) * 28^j`.
    pub fn predicted_size(&self) -> u128 {
        self.small + self.large
    }

    /// Sperner degree of the composed system: `Σ k_i - 2(factors - 1)`.
    pub fn composed_degree(&self) -> u32 {
        let sum: u32 = self
            .factors
            .iter()
            .map(|f| match f {
                Factor::Seven56 => 7,
                Factor::ThreeSperner => 3,
                Factor::Trivial(k) => *k,
            })
            .sum();
        sum - 2 * (self.factors.len() as u32 - 1)
    }

    pub fn log2_size(&self) -> f64 {
        (self.s + 1) as f64 + self.j as f64 * 28f64.log2()
    }
}

/// Saturated k-Sperner system of size `2^(s+1) * 28^j`, or `2^(k-1)` below k = 7.
pub fn bootstrapped(k: u32) -> Result<(Family, CompositionPlan), ConstructionError> {
    let plan = CompositionPlan::new(k)?;
    if plan.atoms > MAX_ATOMS {
        return Err(ConstructionError::UniverseTooLarge(plan.atoms));
    }
    if plan.predicted_size() > MAX_MATERIALIZED {
        return Err(ConstructionError::TooManyMembers(plan.predicted_size()));
    }
    if plan.j == 0 {
        return Ok((trivial_construction(k)?, plan));
    }
    let seven = seven56();
    let three = three_sperner();
    let mut acc = seven.clone();
    for f in &plan.factors[1..] {
        let next = match f {
            Factor::Seven56 => &seven,
            _ => &three,
        };
        acc = compose(&acc, next)?;
    }
    Ok((acc, plan))
}
