//! Seeded random instances for tests and benchmarks.

use crate::graph::{DemandGraph, SlsnInstance, WeightedGraph};
use crate::rational::{int, Rational};
use rand::seq::SliceRandom;
use rand::Rng;
use std::ops::RangeInclusive;

pub use rand_chacha::ChaCha8Rng as SeededRng;
pub use rand::SeedableRng;

#[derive(Clone, Debug)]
pub enum Weights {
    Unit,
    /// Uniform integers in the range.
    Integer(RangeInclusive<i64>),
    /// num/den with both drawn uniformly.
    Fraction {
        num: RangeInclusive<i64>,
        den: RangeInclusive<i64>,
    },
}

impl Weights {
    pub fn sample(&self, rng: &mut impl Rng) -> Rational {
        match self {
            Weights::Unit => int(1),
            Weights::Integer(r) => int(rng.random_range(r.clone())),
            Weights::Fraction { num, den } => Rational::new(
                rng.random_range(num.clone()).into(),
                rng.random_range(den.clone()).into(),
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomConfig {
    pub n: RangeInclusive<usize>,
    pub m: RangeInclusive<usize>,
    pub p: RangeInclusive<usize>,
    pub bound: Weights,
    pub lengths: Weights,
    pub costs: Weights,
    /// All demands share one root.
    pub star: bool,
}

impl RandomConfig {
    /// Unit lengths, integer costs 1..=10, n ≤ 8, m ≤ 12, p ≤ 3, L ≤ 4.
    pub fn small_unit_length() -> Self {
        RandomConfig {
            n: 3..=8,
            m: 2..=12,
            p: 1..=3,
            bound: Weights::Integer(1..=4),
            lengths: Weights::Unit,
            costs: Weights::Integer(1..=10),
            star: false,
        }
    }
}

/// A random simple graph: a random spanning forest plus extra pairs, then
/// random demands. Feasibility is not guaranteed.
pub fn random_instance(rng: &mut impl Rng, cfg: &RandomConfig) -> SlsnInstance {
    let n = rng.random_range(cfg.n.clone()).max(2);
    let max_m = n * (n - 1) / 2;
    let m = rng.random_range(cfg.m.clone()).min(max_m);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 1..n {
        if pairs.len() == m {
            break;
        }
        let j = rng.random_range(0..i);
        let (a, b) = (order[i], order[j]);
        pairs.push((a.min(b), a.max(b)));
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|pr| !pairs.contains(pr))
        .collect();
    rest.shuffle(rng);
    pairs.extend(rest.into_iter().take(m - pairs.len()));
    pairs.shuffle(rng);
    let mut g = WeightedGraph::new(n);
    for (a, b) in pairs {
        let (a, b) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
        let len = cfg.lengths.sample(rng);
        let cost = cfg.costs.sample(rng);
        g.add_edge(a, b, len, cost).expect("valid random edge");
    }
    let p = rng.random_range(cfg.p.clone());
    let demands = if cfg.star {
        let root = rng.random_range(0..n);
        let mut leaves: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        leaves.shuffle(rng);
        leaves.truncate(p.min(n - 1));
        DemandGraph::new(leaves.into_iter().map(|l| (root, l)))
    } else {
        let mut all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        all.shuffle(rng);
        all.truncate(p.min(max_m));
        DemandGraph::new(all)
    }
    .expect("distinct random demands");
    let bound = cfg.bound.sample(rng);
    SlsnInstance::new(g, bound, demands).expect("valid random instance")
}

/// Draws until the full graph satisfies every demand.
pub fn random_feasible_instance(rng: &mut impl Rng, cfg: &RandomConfig) -> SlsnInstance {
    loop {
        let inst = random_instance(rng, cfg);
        let all = inst.all_edges();
        if crate::graph::feasibility_check(&inst, &all).is_ok_and(|r| r.feasible()) {
            return inst;
        }
    }
}

/// Random corpus of `count` feasible instances from one seed.
pub fn feasible_corpus(seed: u64, count: usize, cfg: &RandomConfig) -> Vec<SlsnInstance> {
    let mut rng = SeededRng::seed_from_u64(seed);
    (0..count).map(|_| random_feasible_instance(&mut rng, cfg)).collect()
}
