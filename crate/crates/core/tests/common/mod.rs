#![allow(dead_code)]

use std::collections::VecDeque;

use isotree::{Rational, Subpartition, WeightedTree};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub struct Ranges {
    pub omega: (i64, i64),
    pub flow: (i64, i64),
    pub potential: (i64, i64),
}

pub const SMALL: Ranges = Ranges { omega: (1, 16), flow: (1, 16), potential: (0, 8) };

/// Uniform random recursive tree, relabeled by a random permutation, with a random root.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, ranges: &Ranges) -> WeightedTree {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<(usize, usize, i64)> = (1..n)
        .map(|v| (perm[rng.gen_range(0..v)], perm[v], rng.gen_range(ranges.flow.0..=ranges.flow.1)))
        .collect();
    let omega: Vec<i64> = (0..n).map(|_| rng.gen_range(ranges.omega.0..=ranges.omega.1)).collect();
    let pot: Vec<i64> = (0..n).map(|_| rng.gen_range(ranges.potential.0..=ranges.potential.1)).collect();
    WeightedTree::from_integers(&omega, &pot, &edges, rng.gen_range(0..n)).unwrap()
}

pub fn random_alpha<R: Rng>(rng: &mut R) -> Rational {
    [r(0, 1), r(1, 2), r(1, 1)][rng.gen_range(0..3)].clone()
}

/// Does `set` induce a connected subgraph of `tree`?
pub fn is_connected(tree: &WeightedTree, set: &[usize]) -> bool {
    let Some(&start) = set.first() else {
        return false;
    };
    let mut inside = vec![false; tree.len()];
    for &v in set {
        inside[v] = true;
    }
    let mut seen = vec![false; tree.len()];
    seen[start] = true;
    let mut count = 1;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in tree.neighbors(x) {
            if inside[y] && !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count == set.len()
}

pub fn all_parts_connected(tree: &WeightedTree, sub: &Subpartition) -> bool {
    sub.parts().iter().all(|p| is_connected(tree, p))
}

/// The star with center x = 0, x_1..x_3 = 1..3, y_1 = 4 and z_1..z_8 = 5..12.
pub fn star() -> WeightedTree {
    let mut omega = vec![1, 18, 18, 19, 1];
    omega.extend([14; 8]);
    let edges: Vec<_> = (1..13).map(|v| (0, v, 1)).collect();
    WeightedTree::from_integers(&omega, &[0; 13], &edges, 0).unwrap()
}

/// Path a–b–c with unit weights and flows and potentials (0, 0, 10).
pub fn p3() -> WeightedTree {
    WeightedTree::from_integers(&[1, 1, 1], &[0, 0, 10], &[(0, 1, 1), (1, 2, 1)], 2).unwrap()
}
