//! Branch-and-bound over vertex subsets of a fixed size.
//!
//! Every exact checker in this module reduces to the same question: is
//! there a set `A` of size `a`, drawn from a candidate list, whose closed
//! neighborhood `A ∪ N(A)` has fewer than `limit` vertices? The closed
//! neighborhood only grows when vertices are added, so a partial set whose
//! closed neighborhood already reaches `limit` certifies its whole subtree.

use fixedbitset::FixedBitSet;

use super::ConditionError;
use crate::graph::{Graph, Vertex};

/// Running count of subset-search nodes, with a hard ceiling.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WorkMeter {
    pub work: u64,
    pub budget: u64,
}

impl WorkMeter {
    pub fn new(budget: u64) -> Self {
        WorkMeter { work: 0, budget }
    }

    pub fn tick(&mut self) -> Result<(), ConditionError> {
        self.work += 1;
        if self.work > self.budget {
            Err(ConditionError::BudgetExceeded {
                work: self.work,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }
}

/// A set found by [`find_small_closure`] with the size of its closed
/// neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Found {
    pub set: Vec<Vertex>,
    pub closure: FixedBitSet,
}

/// Lexicographically first `size`-subset of `candidates` (taken in the
/// given order) with `|A ∪ N(A)| < limit`.
pub(crate) fn find_small_closure(
    g: &Graph,
    candidates: &[Vertex],
    size: usize,
    limit: usize,
    meter: &mut WorkMeter,
) -> Result<Option<Found>, ConditionError> {
    // |A ∪ N(A)| >= |A|, so nothing can undercut a limit of at most `size`
    if size == 0 || size > candidates.len() || limit <= size {
        return Ok(None);
    }
    let mut chosen = Vec::with_capacity(size);
    let empty = FixedBitSet::with_capacity(g.n());
    descend(g, candidates, 0, size, limit, &empty, &mut chosen, meter)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    g: &Graph,
    candidates: &[Vertex],
    start: usize,
    size: usize,
    limit: usize,
    closure: &FixedBitSet,
    chosen: &mut Vec<Vertex>,
    meter: &mut WorkMeter,
) -> Result<Option<Found>, ConditionError> {
    let need = size - chosen.len();
    for idx in start..=candidates.len() - need {
        meter.tick()?;
        let v = candidates[idx];
        let mut next = closure.clone();
        next.insert(v);
        for &w in g.neighbors(v) {
            next.insert(w);
        }
        if next.count_ones(..) >= limit {
            continue;
        }
        chosen.push(v);
        if need == 1 {
            return Ok(Some(Found {
                set: chosen.clone(),
                closure: next,
            }));
        }
        if let Some(found) = descend(g, candidates, idx + 1, size, limit, &next, chosen, meter)? {
            return Ok(Some(found));
        }
        chosen.pop();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};

    #[test]
    fn finds_lexicographically_first() {
        let c6 = generate(&Family::Cycle { n: 6 }, 0).unwrap();
        let all: Vec<_> = (0..6).collect();
        let mut meter = WorkMeter::new(1000);
        // closed neighborhood of two adjacent cycle vertices has 4 vertices
        let f = find_small_closure(&c6, &all, 2, 5, &mut meter).unwrap().unwrap();
        assert_eq!(f.set, vec![0, 1]);
        assert_eq!(f.closure.count_ones(..), 4);
        let mut meter = WorkMeter::new(1000);
        assert!(find_small_closure(&c6, &all, 2, 4, &mut meter).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::empty(30);
        let all: Vec<_> = (0..30).collect();
        let mut meter = WorkMeter::new(10);
        assert_eq!(find_small_closure(&g, &all, 3, 3, &mut meter).unwrap(), None);
        assert_eq!(meter.work, 0);
        let f = find_small_closure(&g, &all, 3, 4, &mut meter).unwrap().unwrap();
        assert_eq!(f.set, vec![0, 1, 2]);
        // three vertices of a long cycle always close over at least 5
        let c30 = generate(&Family::Cycle { n: 30 }, 0).unwrap();
        let mut meter = WorkMeter::new(50);
        let r = find_small_closure(&c30, &all, 3, 5, &mut meter);
        assert!(matches!(r, Err(ConditionError::BudgetExceeded { .. })));
    }
}
