//! Seeded random contractions, checked against the identity
//! `cohomological_test = almost_semistable ∧ tree_like`.
//!
//! Instance `i` draws from its own ChaCha stream, so results do not depend
//! on how instances are split across threads.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::skeleton::{contract, Contraction, Skeleton};
use crate::SCHEMA_VERSION;

pub const MAX_FUZZ_VERTICES: usize = 8;

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A skeleton with at most [`MAX_FUZZ_VERTICES`] vertices and at least one
/// leg on every component. Half the draws are forests with genus-0 vertices
/// only, so both sides of the identity come up often.
pub fn random_skeleton(rng: &mut impl Rng) -> Skeleton {
    let n = rng.gen_range(1..=MAX_FUZZ_VERTICES);
    let forest = rng.gen_bool(0.5);
    let genera: Vec<u64> =
        (0..n).map(|_| if forest || rng.gen_bool(0.75) { 0 } else { rng.gen_range(1..=2) }).collect();
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen_bool(0.8) {
            edges.push((rng.gen_range(0..v), v));
        }
    }
    if !forest {
        for _ in 0..rng.gen_range(0..=3) {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
    }
    let bare = Skeleton::from_parts(&genera, &edges, &[]).expect("indices in range");
    let mut legs: Vec<usize> =
        bare.components().iter().map(|c| *c.choose(rng).expect("components are non-empty")).collect();
    for _ in 0..rng.gen_range(0..=2) {
        legs.push(rng.gen_range(0..n));
    }
    legs.sort_unstable();
    Skeleton::from_parts(&genera, &edges, &legs).expect("indices in range")
}

/// Up to three disjoint connected vertex sets, grown from random seeds.
pub fn random_pieces(s: &Skeleton, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let n = s.num_vertices();
    let mut taken = vec![false; n];
    let mut pieces = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let free: Vec<usize> = (0..n).filter(|&v| !taken[v]).collect();
        let Some(&start) = free.choose(rng) else { break };
        let target = rng.gen_range(1..=3);
        let mut piece = vec![start];
        taken[start] = true;
        while piece.len() < target {
            let frontier: Vec<usize> = s
                .edges()
                .iter()
                .filter_map(|&(a, b)| match (piece.contains(&a), piece.contains(&b)) {
                    (true, false) if !taken[b] => Some(b),
                    (false, true) if !taken[a] => Some(a),
                    _ => None,
                })
                .collect();
            let Some(&next) = frontier.choose(rng) else { break };
            taken[next] = true;
            piece.push(next);
        }
        piece.sort_unstable();
        pieces.push(piece);
    }
    pieces
}

pub fn random_contraction(rng: &mut impl Rng) -> Result<Contraction> {
    let fine = random_skeleton(rng);
    let pieces = random_pieces(&fine, rng);
    contract(&fine, &pieces)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub index: u64,
    pub fine: Skeleton,
    pub pieces: Vec<Vec<usize>>,
    pub coarse: Skeleton,
    pub cohomological_test: bool,
    pub almost_semistable: bool,
    pub tree_like: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FuzzStats {
    pub both_true: u64,
    pub both_false: u64,
    pub not_almost_semistable: u64,
    pub not_tree_like: u64,
    pub merged_fibers: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub schema_version: u32,
    pub seed: u64,
    pub count: u64,
    pub checked: u64,
    pub discrepancies: u64,
    pub first_counterexample: Option<Counterexample>,
    pub stats: FuzzStats,
}

enum Outcome {
    Agree { value: bool, almost: bool, tree: bool, merged: u64 },
    Disagree(Box<Counterexample>),
}

fn run_one(seed: u64, index: u64) -> Result<Outcome> {
    let mut rng = instance_rng(seed, index);
    let fine = random_skeleton(&mut rng);
    let pieces = random_pieces(&fine, &mut rng);
    let c = contract(&fine, &pieces)?;
    let lhs = c.cohomological_test()?;
    let almost = c.is_almost_semistable();
    let tree = c.is_tree_like();
    if lhs == (almost && tree) {
        Ok(Outcome::Agree { value: lhs, almost, tree, merged: c.fibers.iter().filter(|f| f.merged).count() as u64 })
    } else {
        Ok(Outcome::Disagree(Box::new(Counterexample {
            index,
            fine,
            pieces,
            coarse: c.coarse,
            cohomological_test: lhs,
            almost_semistable: almost,
            tree_like: tree,
        })))
    }
}

#[derive(Default)]
struct Shard {
    checked: u64,
    discrepancies: u64,
    first: Option<Counterexample>,
    stats: FuzzStats,
}

impl Shard {
    fn absorb(&mut self, other: Shard) {
        self.checked += other.checked;
        self.discrepancies += other.discrepancies;
        self.stats.both_true += other.stats.both_true;
        self.stats.both_false += other.stats.both_false;
        self.stats.not_almost_semistable += other.stats.not_almost_semistable;
        self.stats.not_tree_like += other.stats.not_tree_like;
        self.stats.merged_fibers += other.stats.merged_fibers;
        self.first = match (self.first.take(), other.first) {
            (Some(a), Some(b)) => Some(if a.index <= b.index { a } else { b }),
            (a, b) => a.or(b),
        };
    }
}

fn run_range(seed: u64, range: std::ops::Range<u64>) -> Result<Shard> {
    let mut shard = Shard::default();
    for index in range {
        shard.checked += 1;
        match run_one(seed, index)? {
            Outcome::Agree { value, almost, tree, merged } => {
                if value {
                    shard.stats.both_true += 1;
                } else {
                    shard.stats.both_false += 1;
                }
                shard.stats.not_almost_semistable += u64::from(!almost);
                shard.stats.not_tree_like += u64::from(!tree);
                shard.stats.merged_fibers += merged;
            }
            Outcome::Disagree(cx) => {
                shard.discrepancies += 1;
                if shard.first.is_none() {
                    shard.first = Some(*cx);
                }
            }
        }
    }
    Ok(shard)
}

/// Check `count` instances on `workers` threads (at least one).
pub fn run_fuzz(seed: u64, count: u64, workers: usize) -> Result<FuzzSummary> {
    let workers = workers.max(1) as u64;
    let chunk = count.div_ceil(workers).max(1);
    let shards: Vec<Result<Shard>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = (w * chunk).min(count);
                let hi = ((w + 1) * chunk).min(count);
                scope.spawn(move || run_range(seed, lo..hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("fuzz worker panicked")).collect()
    });
    let mut total = Shard::default();
    for shard in shards {
        total.absorb(shard?);
    }
    Ok(FuzzSummary {
        schema_version: SCHEMA_VERSION,
        seed,
        count,
        checked: total.checked,
        discrepancies: total.discrepancies,
        first_counterexample: total.first,
        stats: total.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_skeletons_have_legs_everywhere() {
        let mut rng = instance_rng(7, 0);
        for _ in 0..500 {
            let s = random_skeleton(&mut rng);
            assert!(s.component_stats().iter().all(|c| c.legs > 0));
            let pieces = random_pieces(&s, &mut rng);
            assert!(contract(&s, &pieces).is_ok());
        }
    }

    #[test]
    fn empty_run() {
        let s = run_fuzz(3, 0, 4).unwrap();
        assert_eq!((s.checked, s.discrepancies), (0, 0));
        assert!(s.first_counterexample.is_none());
    }

    #[test]
    fn sharding_does_not_change_the_result() {
        let one = run_fuzz(11, 300, 1).unwrap();
        let many = run_fuzz(11, 300, 7).unwrap();
        assert_eq!(one, many);
        assert_eq!(one.discrepancies, 0);
        assert!(one.stats.both_true > 0 && one.stats.both_false > 0);
    }
}
