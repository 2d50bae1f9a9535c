#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use cmkit::{FiniteGroup, GeneratingVector, Permutation, QuasiplatonicSurface, Signature};
use proptest::prelude::*;

pub fn perm(text: &str, degree: usize) -> Permutation {
    Permutation::parse_cycles(text, degree).unwrap()
}

pub fn group(degree: usize, gens: &[&str]) -> Arc<FiniteGroup> {
    let gens = gens.iter().map(|g| perm(g, degree)).collect();
    Arc::new(FiniteGroup::from_generators(degree, gens).unwrap())
}

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    let images = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    Arc::new(FiniteGroup::from_generators(n, vec![Permutation::new(images).unwrap()]).unwrap())
}

pub fn klein() -> Arc<FiniteGroup> {
    group(4, &["(0 1)(2 3)", "(0 2)(1 3)"])
}

pub fn s3() -> Arc<FiniteGroup> {
    group(3, &["(0 1)", "(0 1 2)"])
}

pub fn s4() -> Arc<FiniteGroup> {
    group(4, &["(0 1)", "(0 1 2 3)"])
}

pub fn dihedral(n: usize) -> Arc<FiniteGroup> {
    let rot = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    let refl = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
    Arc::new(
        FiniteGroup::from_generators(
            n,
            vec![
                Permutation::new(rot).unwrap(),
                Permutation::new(refl).unwrap(),
            ],
        )
        .unwrap(),
    )
}

pub fn a5() -> Arc<FiniteGroup> {
    group(5, &["(0 1 2)", "(0 1 2 3 4)"])
}

/// `PSL(2,7)` acting on the seven points of the Fano plane.
pub fn psl27() -> Arc<FiniteGroup> {
    group(7, &["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)", "(0 1)(2 5)"])
}

/// Hyperelliptic `C2` action with `r` branch points.
pub fn hyperelliptic(r: usize) -> QuasiplatonicSurface {
    let g = cyclic(2);
    GeneratingVector::new(g, vec![1; r])
        .and_then(QuasiplatonicSurface::new)
        .unwrap()
}

pub fn first_surface(g: &Arc<FiniteGroup>, periods: &[u64]) -> QuasiplatonicSurface {
    let sig = Signature::spherical(periods.to_vec());
    let v = cmkit::find_generating_vectors(g, &sig, 1)
        .unwrap()
        .remove(0);
    QuasiplatonicSurface::new(v).unwrap()
}

/// `C6` with periods (2, 2, 3, 3), genus 2.
pub fn c6_exception() -> QuasiplatonicSurface {
    let g = cyclic(6);
    let t = g.index_of(&perm("(0 1 2 3 4 5)", 6)).unwrap();
    let entries = [3, 3, 2, 4].iter().map(|&k| g.pow(t, k)).collect();
    QuasiplatonicSurface::new(GeneratingVector::new(g, entries).unwrap()).unwrap()
}

/// Every subgroup, found by repeatedly joining known subgroups with single
/// elements. Independent of the library's lattice code apart from `closure`.
pub fn brute_force_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![vec![g.identity()]];
    seen.insert(vec![g.identity()]);
    while let Some(h) = frontier.pop() {
        let members: HashSet<usize> = h.iter().copied().collect();
        for x in 0..g.order() {
            if members.contains(&x) {
                continue;
            }
            let mut elems = brute_close(g, &h, x);
            elems.sort_unstable();
            if seen.insert(elems.clone()) {
                frontier.push(elems);
            }
        }
    }
    seen
}

fn brute_close(g: &FiniteGroup, h: &[usize], x: usize) -> Vec<usize> {
    let mut set: HashSet<usize> = h.iter().copied().collect();
    set.insert(x);
    let mut queue: Vec<usize> = set.iter().copied().collect();
    while let Some(a) = queue.pop() {
        let current: Vec<usize> = set.iter().copied().collect();
        for b in current {
            for c in [g.mul(a, b), g.mul(b, a)] {
                if set.insert(c) {
                    queue.push(c);
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Random permutation groups of small degree.
pub fn small_group(max_degree: usize) -> impl Strategy<Value = Arc<FiniteGroup>> {
    (2..=max_degree)
        .prop_flat_map(|n| {
            let one = Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle();
            (Just(n), proptest::collection::vec(one, 1..=2))
        })
        .prop_map(|(n, gens)| {
            let gens = gens
                .into_iter()
                .map(|v| Permutation::new(v).unwrap())
                .collect();
            Arc::new(FiniteGroup::from_generators(n, gens).unwrap())
        })
}
