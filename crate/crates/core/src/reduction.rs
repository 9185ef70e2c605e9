//! Reduction of a saturated antichain to one whose small members are all
//! singletons, without growing it and without losing saturation.
//!
//! Tie-breaks are fixed so traces are reproducible:
//! the member to split is the first non-singleton small in canonical order,
//! the atom is its lowest one, and containment pairs are resolved one at a
//! time, always taking the first pair `(i, j)` in canonical index order.

use std::fmt;

use crate::error::ConstructionError;
use crate::family::{is_antichain, Family, Member};
use crate::saturation::saturation_scan;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceAction {
    /// Start of an outer round: split `member` at `atom`.
    Choose { member: Member, atom: u32 },
    /// `before` becomes the singleton `after`.
    Replace { before: Member, after: Member },
    /// The current atom is removed from `before`.
    Strip { before: Member, after: Member },
    /// A containment pair was resolved by dropping `removed`.
    Remove { removed: Member, kept: Member },
    /// A small inside a large: continue with `atom` of `small`.
    Reassign {
        small: Member,
        large: Member,
        atom: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub action: TraceAction,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    fn push(&mut self, action: TraceAction) {
        let step = self.steps.len() + 1;
        self.steps.push(TraceStep { step, action });
    }

    /// Re-applies the recorded mutations to `input`.
    pub fn replay(&self, input: &Family) -> Family {
        let mut items: Vec<Member> = input.members().to_vec();
        for s in &self.steps {
            match &s.action {
                TraceAction::Replace { before, after } | TraceAction::Strip { before, after } => {
                    if let Some(p) = items.iter().position(|y| y == before) {
                        items[p] = *after;
                    }
                }
                TraceAction::Remove { removed, .. } => {
                    if let Some(p) = items.iter().position(|y| y == removed) {
                        items.remove(p);
                    }
                }
                TraceAction::Choose { .. } | TraceAction::Reassign { .. } => {}
            }
        }
        items.sort_unstable();
        Family::from_sorted_unchecked(input.m(), items)
    }
}

/// One line per step: `step<TAB>action<TAB>before<TAB>after`.
impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            match &s.action {
                TraceAction::Choose { member, atom } => {
                    writeln!(f, "{}\tchoose\t{member}\tx={atom}", s.step)?
                }
                TraceAction::Replace { before, after } => {
                    writeln!(f, "{}\treplace\t{before}\t{after}", s.step)?
                }
                TraceAction::Strip { before, after } => {
                    writeln!(f, "{}\tstrip\t{before}\t{after}", s.step)?
                }
                TraceAction::Remove { removed, kept } => {
                    writeln!(f, "{}\tremove\t{removed}\tkept={kept}", s.step)?
                }
                TraceAction::Reassign { small, large, atom } => {
                    writeln!(f, "{}\treassign\t{small}\tx={atom} under={large}", s.step)?
                }
            }
        }
        Ok(())
    }
}

fn lowest_atom(x: &Member) -> u32 {
    x.mask.trailing_zeros() + 1
}

/// First containment pair `(i, j)`, `i != j`, with `items[i] ⊆ items[j]`.
fn first_containment(items: &[Member]) -> Option<(usize, usize)> {
    for i in 0..items.len() {
        for j in 0..items.len() {
            if i != j && items[i].is_subset_of(&items[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

fn is_saturated(m: u32, items: &[Member]) -> bool {
    saturation_scan(m, items)
        .map(|s| s.saturated)
        .unwrap_or(false)
}

/// Runs the reduction and checks its postconditions on the way out.
pub fn reduce_antichain(a: &Family) -> Result<(Family, ReductionTrace), ConstructionError> {
    let m = a.m();
    if !a.is_antichain() || !is_saturated(m, a.members()) {
        return Err(ConstructionError::NotSaturatedAntichain);
    }
    let bound = (m as usize * a.len()).max(1);
    let mut items: Vec<Member> = a.members().to_vec();
    let mut trace = ReductionTrace::default();
    let mut rounds = 0usize;

    while let Some(target) = items.iter().find(|x| !x.large && x.popcount() > 1).copied() {
        let mut x = lowest_atom(&target);
        trace.push(TraceAction::Choose {
            member: target,
            atom: x,
        });
        let mut current = target;
        'split: loop {
            rounds += 1;
            if rounds > bound {
                return Err(ConstructionError::IterationBound(bound));
            }
            let bit = 1u64 << (x - 1);
            let single = Member::small(bit);
            let pos = items
                .iter()
                .position(|y| *y == current)
                .expect("tracked member");
            if current != single {
                trace.push(TraceAction::Replace {
                    before: current,
                    after: single,
                });
                if items.contains(&single) {
                    items.remove(pos);
                } else {
                    items[pos] = single;
                }
            }
            for y in items.iter_mut() {
                if *y != single && y.mask & bit != 0 {
                    let after = Member {
                        mask: y.mask & !bit,
                        large: y.large,
                    };
                    trace.push(TraceAction::Strip { before: *y, after });
                    *y = after;
                }
            }
            items.sort_unstable();

            while let Some((i, j)) = first_containment(&items) {
                let (lo, hi) = (items[i], items[j]);
                match (lo.large, hi.large) {
                    (false, true) if lo.mask != 0 => {
                        x = lowest_atom(&lo);
                        trace.push(TraceAction::Reassign {
                            small: lo,
                            large: hi,
                            atom: x,
                        });
                        current = lo;
                        continue 'split;
                    }
                    // Empty small under a large: the empty set already covers everything.
                    (false, true) | (false, false) => {
                        trace.push(TraceAction::Remove {
                            removed: hi,
                            kept: lo,
                        });
                        items.remove(j);
                    }
                    (true, true) => {
                        trace.push(TraceAction::Remove {
                            removed: lo,
                            kept: hi,
                        });
                        items.remove(i);
                    }
                    (true, false) => unreachable!("a large is never inside a small"),
                }
            }
            break;
        }
    }

    let out = Family::from_sorted_unchecked(m, items);
    check_postconditions(a, &out)?;
    Ok((out, trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Postcondition {
    SizeNonIncreasing,
    Antichain,
    Saturated,
    SingletonSmalls,
    Idempotent,
}

/// Postconditions violated by `output` as a reduction of `input`.
pub fn postcondition_failures(input: &Family, output: &Family) -> Vec<Postcondition> {
    let mut bad = Vec::new();
    if output.len() > input.len() {
        bad.push(Postcondition::SizeNonIncreasing);
    }
    if !is_antichain(output.members()) {
        bad.push(Postcondition::Antichain);
    }
    if !is_saturated(output.m(), output.members()) {
        bad.push(Postcondition::Saturated);
    }
    if output.small().any(|x| x.popcount() > 1) {
        bad.push(Postcondition::SingletonSmalls);
    }
    if input.small().all(|x| x.popcount() <= 1) && input != output {
        bad.push(Postcondition::Idempotent);
    }
    bad
}

fn check_postconditions(input: &Family, output: &Family) -> Result<(), ConstructionError> {
    match postcondition_failures(input, output).first() {
        None => Ok(()),
        Some(p) => Err(ConstructionError::Postcondition(format!("{p:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::seven56_layers;

    #[test]
    fn singleton_layer_is_untouched() {
        let a1 = &seven56_layers()[1];
        let (out, trace) = reduce_antichain(a1).unwrap();
        assert_eq!(&out, a1);
        assert!(trace.steps.is_empty());

        let e = Family::new(3, [Member::EMPTY]).unwrap();
        assert_eq!(reduce_antichain(&e).unwrap().0, e);
    }

    #[test]
    fn rejects_unsaturated_input() {
        let f = Family::new(2, [Member::small(0b01)]).unwrap();
        assert_eq!(
            reduce_antichain(&f),
            Err(ConstructionError::NotSaturatedAntichain)
        );
        let f = Family::new(1, [Member::EMPTY, Member::small(1)]).unwrap();
        assert_eq!(
            reduce_antichain(&f),
            Err(ConstructionError::NotSaturatedAntichain)
        );
    }

    #[test]
    fn second_layer_snapshot() {
        let a2 = &seven56_layers()[2];
        let (out, trace) = reduce_antichain(a2).unwrap();
        assert!(postcondition_failures(a2, &out).is_empty());
        assert!(out.len() <= 14);
        assert_eq!(trace.replay(a2), out);
        let text = crate::format::serialize_family(&out);
        assert_eq!(text, SECOND_LAYER_REDUCED);
    }

    const SECOND_LAYER_REDUCED: &str = include_str!("../tests/data/seven56_a2_reduced.txt");
}
