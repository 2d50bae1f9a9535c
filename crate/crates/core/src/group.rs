//! Finite permutation groups with an eagerly enumerated element list.
//!
//! Elements are addressed by their index in the sorted element list; index 0
//! is always the identity. Products follow the left-to-right convention of
//! [`Permutation::compose`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default bound on the order of a constructed group.
pub const DEFAULT_MAX_ORDER: usize = 100_000;
/// Default bound on the order of a group whose subgroup lattice is enumerated.
pub const DEFAULT_MAX_SUBGROUP_ORDER: usize = 10_000;

const TABLE_THRESHOLD: usize = 512;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    representative: usize,
    members: Vec<usize>,
    order: u64,
}

impl ConjugacyClass {
    pub fn representative(&self) -> usize {
        self.representative
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Common order of the members.
    pub fn order(&self) -> u64 {
        self.order
    }
}

/// A subgroup of a [`FiniteGroup`], stored as a sorted list of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent_id: u64,
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.elements.binary_search(&element).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.parent_id == other.parent_id && self.elements.iter().all(|&e| other.contains(e))
    }
}

/// Action of a group on the right cosets `Hg` of a subgroup.
///
/// Point 0 is the coset `H` itself; the remaining cosets are ordered by
/// their least element index.
#[derive(Debug, Clone)]
pub struct CosetAction {
    coset_of: Vec<usize>,
    representatives: Vec<usize>,
    images: Vec<Permutation>,
}

impl CosetAction {
    pub fn degree(&self) -> usize {
        self.representatives.len()
    }

    /// Coset containing an element.
    pub fn coset_of(&self, element: usize) -> usize {
        self.coset_of[element]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    /// Permutation of the cosets induced by right multiplication with `element`.
    pub fn image(&self, element: usize) -> &Permutation {
        &self.images[element]
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }
}

/// A quotient `N/H`, realized as a permutation group on the cosets of `H` in `N`.
#[derive(Debug, Clone)]
pub struct Quotient {
    group: FiniteGroup,
    projection: HashMap<usize, usize>,
}

impl Quotient {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn into_group(self) -> FiniteGroup {
        self.group
    }

    /// Image of a parent element, if it lies in the numerator subgroup.
    pub fn project(&self, element: usize) -> Option<usize> {
        self.projection.get(&element).copied()
    }

    /// Parent elements mapping into the given subgroup of the quotient.
    pub fn preimage(&self, sub: &Subgroup) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .projection
            .iter()
            .filter(|(_, &q)| sub.contains(q))
            .map(|(&g, _)| g)
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    id: u64,
    degree: usize,
    generators: Vec<Permutation>,
    generator_indices: Vec<usize>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    table: Option<Vec<u32>>,
    inverses: Vec<usize>,
    orders: Vec<u64>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl FiniteGroup {
    /// Group generated by `gens`, bounded by [`DEFAULT_MAX_ORDER`].
    pub fn from_generators(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        Self::from_generators_bounded(degree, gens, DEFAULT_MAX_ORDER)
    }

    pub fn from_generators_bounded(
        degree: usize,
        gens: Vec<Permutation>,
        max_order: usize,
    ) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {g} has degree {} but group degree is {degree}",
                    g.degree()
                )));
            }
        }
        let identity = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= max_order {
                        return Err(Error::GroupTooLarge { bound: max_order });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        let index: HashMap<Permutation, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let n = elements.len();
        let table = (n <= TABLE_THRESHOLD).then(|| {
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = index[&elements[i].compose(&elements[j])] as u32;
                }
            }
            t
        });
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let orders = elements.iter().map(Permutation::order).collect();
        let generator_indices = gens.iter().map(|g| index[g]).collect();
        let mut group = Self {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            degree,
            generators: gens,
            generator_indices,
            elements,
            index,
            table,
            inverses,
            orders,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.order() + j] as usize,
            None => self.index[&self.elements[i].compose(&self.elements[j])],
        }
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn pow(&self, i: usize, exp: i64) -> usize {
        let ord = self.orders[i] as i64;
        let e = exp.rem_euclid(ord);
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, i);
        }
        acc
    }

    /// `g^-1 x g`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn element_index_order(&self, i: usize) -> u64 {
        self.orders[i]
    }

    pub fn element_order(&self, g: &Permutation) -> Result<u64> {
        let i = self.index_of(g).ok_or(Error::ElementNotInGroup)?;
        Ok(self.orders[i])
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &o| acc.lcm(&o))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generator_indices;
        g.iter()
            .all(|&x| g.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = raw.len();
            let mut members = vec![start];
            class_of[start] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                k += 1;
                for &g in &self.generator_indices {
                    let y = self.conjugate(x, g);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            raw.push(members);
        }
        raw.sort_by_key(|m| (self.orders[m[0]], m.len(), m[0]));
        let mut class_of = vec![0; n];
        let classes = raw
            .into_iter()
            .enumerate()
            .map(|(c, members)| {
                for &x in &members {
                    class_of[x] = c;
                }
                ConjugacyClass {
                    representative: members[0],
                    order: self.orders[members[0]],
                    members,
                }
            })
            .collect();
        self.classes = classes;
        self.class_of = class_of;
    }

    /// Conjugacy classes, identity class first, sorted by (element order, size, least member).
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Class of `g^k` for a representative `g` of each class.
    pub fn power_class_map(&self, k: i64) -> Vec<usize> {
        self.classes
            .iter()
            .map(|c| self.class_of[self.pow(c.representative, k)])
            .collect()
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        self.extend_closure(&[0], gens)
    }

    /// Closure of a subgroup's elements together with extra generators.
    fn extend_closure(&self, base: &[usize], gens: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out: Vec<usize> = Vec::with_capacity(base.len());
        for &b in base {
            if !seen[b] {
                seen[b] = true;
                out.push(b);
            }
        }
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            k += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `⟨H, gens⟩` as a union of right cosets `Hr`, given the sorted elements
    /// of `H` and a generating set containing generators of `H`. `scratch`
    /// must be all false and is left that way.
    fn join(&self, h: &[usize], gens: &[usize], scratch: &mut [bool]) -> Vec<usize> {
        let mut out = h.to_vec();
        for &e in h {
            scratch[e] = true;
        }
        let mut reps = vec![0usize];
        let mut k = 0;
        while k < reps.len() {
            let r = reps[k];
            k += 1;
            for &s in gens {
                let y = self.mul(r, s);
                if scratch[y] {
                    continue;
                }
                reps.push(y);
                for &e in h {
                    let z = self.mul(e, y);
                    scratch[z] = true;
                    out.push(z);
                }
            }
        }
        for &e in &out {
            scratch[e] = false;
        }
        out.sort_unstable();
        out
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup(&self, gens: &[usize]) -> Subgroup {
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        Subgroup {
            parent_id: self.id,
            elements: self.closure(&gens),
            generators: gens,
        }
    }

    /// Subgroup generated by permutations.
    pub fn subgroup_from_perms(&self, gens: &[Permutation]) -> Result<Subgroup> {
        let idx = gens
            .iter()
            .map(|p| self.index_of(p).ok_or(Error::ElementNotInGroup))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.subgroup(&idx))
    }

    /// Wraps a closed element set, choosing a small generating set greedily.
    pub fn subgroup_from_elements(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        let mut gens = Vec::new();
        let mut current = vec![0usize];
        // Prefer high-order elements so generating sets stay short.
        let mut candidates = elements.clone();
        candidates.sort_by_key(|&e| (std::cmp::Reverse(self.orders[e]), e));
        for &e in &candidates {
            if current.binary_search(&e).is_err() {
                gens.push(e);
                current = self.extend_closure(&current, &gens);
            }
        }
        if current != elements {
            return Err(Error::InvalidParameter(
                "element set is not closed under multiplication".into(),
            ));
        }
        gens.sort_unstable();
        Ok(Subgroup {
            parent_id: self.id,
            elements,
            generators: gens,
        })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup(&[])
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            parent_id: self.id,
            elements: (0..self.order()).collect(),
            generators: self
                .generator_indices
                .iter()
                .copied()
                .filter(|&g| g != 0)
                .collect(),
        }
    }

    pub fn owns(&self, h: &Subgroup) -> bool {
        h.parent_id == self.id
    }

    fn check_owned(&self, h: &Subgroup) -> Result<()> {
        if self.owns(h) {
            Ok(())
        } else {
            Err(Error::SubgroupMismatch)
        }
    }

    /// Every subgroup exactly once, ordered by (order, element list).
    ///
    /// Cyclic extension: every subgroup is reached from a cyclic subgroup by
    /// repeatedly joining further cyclic subgroups.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.all_subgroups_bounded(DEFAULT_MAX_SUBGROUP_ORDER)
    }

    pub fn all_subgroups_bounded(&self, max_order: usize) -> Result<Vec<Subgroup>> {
        if self.order() > max_order {
            return Err(Error::GroupTooLarge { bound: max_order });
        }
        let mut cyclic: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut seen_cyclic: HashSet<Vec<usize>> = HashSet::new();
        for x in 1..self.order() {
            let c = self.closure(&[x]);
            if seen_cyclic.insert(c.clone()) {
                cyclic.push((x, c));
            }
        }
        let mut found: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        found.insert(vec![0], Vec::new());
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for (x, c) in &cyclic {
            found.insert(c.clone(), vec![*x]);
            queue.push_back(c.clone());
        }
        let mut member = vec![false; self.order()];
        while let Some(h) = queue.pop_front() {
            let gens = found[&h].clone();
            for (x, _) in &cyclic {
                if h.binary_search(x).is_ok() {
                    continue;
                }
                let mut new_gens = gens.clone();
                new_gens.push(*x);
                let j = self.join(&h, &new_gens, &mut member);
                if !found.contains_key(&j) {
                    found.insert(j.clone(), new_gens);
                    queue.push_back(j);
                }
            }
        }
        let mut subs: Vec<Subgroup> = found
            .into_iter()
            .map(|(elements, generators)| Subgroup {
                parent_id: self.id,
                elements,
                generators,
            })
            .collect();
        subs.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        Ok(subs)
    }

    /// Indices into `subs` grouped by conjugacy; groups and members in input order.
    pub fn subgroup_conjugacy_classes(&self, subs: &[Subgroup]) -> Vec<Vec<usize>> {
        let lookup: HashMap<&[usize], usize> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.elements.as_slice(), i))
            .collect();
        let mut assigned = vec![false; subs.len()];
        let mut out = Vec::new();
        for i in 0..subs.len() {
            if assigned[i] {
                continue;
            }
            let mut class = Vec::new();
            for g in 0..self.order() {
                let mut conj: Vec<usize> = subs[i]
                    .elements
                    .iter()
                    .map(|&h| self.conjugate(h, g))
                    .collect();
                conj.sort_unstable();
                if let Some(&j) = lookup.get(conj.as_slice()) {
                    if !assigned[j] {
                        assigned[j] = true;
                        class.push(j);
                    }
                }
            }
            class.sort_unstable();
            out.push(class);
        }
        out
    }

    fn normalizes(&self, g: usize, h: &Subgroup) -> bool {
        h.generators
            .iter()
            .all(|&x| h.contains(self.conjugate(x, g)))
    }

    pub fn is_normal(&self, h: &Subgroup) -> Result<bool> {
        self.check_owned(h)?;
        Ok(self
            .generator_indices
            .iter()
            .all(|&g| self.normalizes(g, h)))
    }

    /// Largest subgroup in which `h` is normal.
    pub fn normalizer(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check_owned(h)?;
        let elements: Vec<usize> = (0..self.order())
            .filter(|&g| self.normalizes(g, h))
            .collect();
        self.subgroup_from_elements(&elements)
    }

    /// Action on the right cosets of `h` by right multiplication.
    pub fn coset_action(&self, h: &Subgroup) -> Result<CosetAction> {
        self.check_owned(h)?;
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(g);
            for &x in &h.elements {
                coset_of[self.mul(x, g)] = c;
            }
        }
        let images = (0..n)
            .map(|x| {
                let imgs = representatives
                    .iter()
                    .map(|&r| coset_of[self.mul(r, x)] as u32)
                    .collect();
                Permutation::new(imgs).expect("coset action is a bijection")
            })
            .collect();
        Ok(CosetAction {
            coset_of,
            representatives,
            images,
        })
    }

    /// `G/N` via the regular action on cosets.
    pub fn quotient_group(&self, n: &Subgroup) -> Result<FiniteGroup> {
        Ok(self.quotient(&self.whole(), n)?.into_group())
    }

    /// `N/H` for `H` normal in `N`, both subgroups of this group.
    pub fn quotient(&self, numerator: &Subgroup, h: &Subgroup) -> Result<Quotient> {
        self.check_owned(numerator)?;
        self.check_owned(h)?;
        if !h.is_subset_of(numerator) {
            return Err(Error::SubgroupMismatch);
        }
        if !numerator.generators.iter().all(|&g| self.normalizes(g, h)) {
            return Err(Error::NotNormal);
        }
        let mut coset_of: HashMap<usize, usize> = HashMap::new();
        let mut representatives = Vec::new();
        for &g in &numerator.elements {
            if coset_of.contains_key(&g) {
                continue;
            }
            let c = representatives.len();
            representatives.push(g);
            for &x in &h.elements {
                coset_of.insert(self.mul(x, g), c);
            }
        }
        let act = |x: usize| -> Permutation {
            let imgs = representatives
                .iter()
                .map(|&r| coset_of[&self.mul(r, x)] as u32)
                .collect();
            Permutation::new(imgs).expect("coset action is a bijection")
        };
        let degree = representatives.len();
        let gens: Vec<Permutation> = numerator.generators.iter().map(|&g| act(g)).collect();
        let group = FiniteGroup::from_generators(degree, gens)?;
        let projection = numerator
            .elements
            .iter()
            .map(|&g| (g, group.index_of(&act(g)).expect("image lies in quotient")))
            .collect();
        Ok(Quotient { group, projection })
    }

    /// Realizes a subgroup as a group in its own right, on the same points.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<FiniteGroup> {
        self.check_owned(h)?;
        let gens = h
            .generators
            .iter()
            .map(|&g| self.elements[g].clone())
            .collect();
        FiniteGroup::from_generators(self.degree, gens)
    }

    /// Invariant factors `d1 | d2 | …` of an abelian group; `None` otherwise.
    pub fn abelian_invariants(&self) -> Option<Vec<u64>> {
        if !self.is_abelian() {
            return None;
        }
        let n = self.order() as u64;
        let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
        for p in prime_factors(n) {
            // s_k = log_p #{x : x^(p^k) = 1} = sum_i min(k, lambda_i)
            let mut exps = Vec::new();
            let mut prev = 0u32;
            let mut k = 1u32;
            loop {
                let pk = p.pow(k);
                let count = self.orders.iter().filter(|&&o| pk % o == 0).count() as u64;
                let s = count.ilog(p);
                if s == prev {
                    break;
                }
                exps.push(s - prev);
                prev = s;
                k += 1;
            }
            // exps[k-1] = number of cyclic factors with exponent >= k
            let mut lambdas = Vec::new();
            for (k, w) in exps.iter().enumerate() {
                let next = exps.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(w - next) {
                    lambdas.push(k as u32 + 1);
                }
            }
            lambdas.sort_unstable_by(|a, b| b.cmp(a));
            primary.push((p, lambdas));
        }
        let len = primary.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, lambdas) in &primary {
            for (i, &l) in lambdas.iter().enumerate() {
                factors[i] *= p.pow(l);
            }
        }
        factors.reverse();
        Some(factors)
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
