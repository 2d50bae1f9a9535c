//! Riemann surfaces with a group action, given combinatorially by a
//! generating vector over the sphere.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::character::{Character, CharacterTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::perm::Permutation;
use crate::scalar::Scalar;

/// Branch data of a Galois cover: base genus and sorted periods.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub orbit_genus: u64,
    pub periods: Vec<u64>,
}

impl Signature {
    pub fn new(orbit_genus: u64, mut periods: Vec<u64>) -> Self {
        periods.sort_unstable();
        Self {
            orbit_genus,
            periods,
        }
    }

    /// Signature over the sphere.
    pub fn spherical(periods: Vec<u64>) -> Self {
        Self::new(0, periods)
    }

    /// `2h - 2 + Σ(1 - 1/m_i) > 0`.
    pub fn is_hyperbolic(&self) -> bool {
        let mut total = Ratio::from_integer(2 * self.orbit_genus as i64 - 2);
        for &m in &self.periods {
            total += Ratio::new(m as i64 - 1, m as i64);
        }
        total > Ratio::from_integer(0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.orbit_genus)?;
        for (i, m) in self.periods.iter().enumerate() {
            write!(f, "{}{m}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, ")")
    }
}

/// `(g_1, …, g_r)` with `g_1 ⋯ g_r = 1` generating the group.
#[derive(Debug, Clone)]
pub struct GeneratingVector {
    group: Arc<FiniteGroup>,
    entries: Vec<usize>,
}

impl GeneratingVector {
    pub fn new(group: Arc<FiniteGroup>, entries: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&x| x >= group.order()) {
            return Err(Error::InvalidVector(format!(
                "element index {bad} out of range"
            )));
        }
        let product = entries
            .iter()
            .fold(group.identity(), |acc, &x| group.mul(acc, x));
        if product != group.identity() {
            return Err(Error::InvalidVector(
                "product of entries is not the identity".into(),
            ));
        }
        if entries.iter().any(|&x| x == group.identity()) {
            return Err(Error::InvalidVector(
                "entries must have order at least 2".into(),
            ));
        }
        if group.closure(&entries).len() != group.order() {
            return Err(Error::InvalidVector(
                "entries do not generate the group".into(),
            ));
        }
        Ok(Self { group, entries })
    }

    pub fn from_perms(group: Arc<FiniteGroup>, perms: &[Permutation]) -> Result<Self> {
        let entries = perms
            .iter()
            .map(|p| group.index_of(p).ok_or(Error::ElementNotInGroup))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, entries)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn entry_perms(&self) -> Vec<Permutation> {
        self.entries
            .iter()
            .map(|&x| self.group.element(x).clone())
            .collect()
    }

    /// Orders of the entries, in vector order.
    pub fn periods(&self) -> Vec<u64> {
        self.entries
            .iter()
            .map(|&x| self.group.element_index_order(x))
            .collect()
    }

    /// The vector conjugated entrywise by `g`.
    pub fn conjugated(&self, g: usize) -> Self {
        Self {
            group: self.group.clone(),
            entries: self
                .entries
                .iter()
                .map(|&x| self.group.conjugate(x, g))
                .collect(),
        }
    }
}

/// `g = 1 + (|G|/2)(r - 2 - Σ 1/m_i)`.
pub fn genus_from_data(order: usize, periods: &[u64]) -> Result<u64> {
    let r = periods.len() as i64;
    let mut acc = Ratio::from_integer(r - 2);
    for &m in periods {
        acc -= Ratio::new(1, m as i64);
    }
    let genus = Ratio::from_integer(1) + acc * Ratio::new(order as i64, 2);
    if !genus.is_integer() {
        return Err(Error::NonIntegerGenus(genus.to_string()));
    }
    if genus < Ratio::from_integer(0) {
        return Err(Error::NegativeGenus(genus.to_string()));
    }
    Ok(genus.to_integer() as u64)
}

pub fn genus_from_vector(v: &GeneratingVector) -> Result<u64> {
    genus_from_data(v.group.order(), &v.periods())
}

/// Up to `limit` generating vectors with the given periods, in deterministic order.
///
/// The first entry runs over class representatives only, since conjugating a
/// whole vector gives an equivalent cover.
pub fn find_generating_vectors(
    group: &Arc<FiniteGroup>,
    sig: &Signature,
    limit: usize,
) -> Result<Vec<GeneratingVector>> {
    if sig.orbit_genus != 0 {
        return Err(Error::UnsupportedSignature(format!(
            "orbit genus {} is not supported",
            sig.orbit_genus
        )));
    }
    let periods = &sig.periods;
    let mut out = Vec::new();
    if periods.is_empty() || limit == 0 {
        return Ok(out);
    }
    let by_order: HashMap<u64, Vec<usize>> =
        (0..group.order()).fold(HashMap::new(), |mut acc, x| {
            acc.entry(group.element_index_order(x))
                .or_insert_with(Vec::new)
                .push(x);
            acc
        });
    let first: Vec<usize> = group
        .conjugacy_classes()
        .iter()
        .filter(|c| c.order() == periods[0])
        .map(|c| c.representative())
        .collect();
    let empty = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(periods.len());
    search(
        group,
        periods,
        &by_order,
        &first,
        &empty,
        &mut stack,
        group.identity(),
        limit,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    group: &Arc<FiniteGroup>,
    periods: &[u64],
    by_order: &HashMap<u64, Vec<usize>>,
    first: &[usize],
    empty: &Vec<usize>,
    stack: &mut Vec<usize>,
    product: usize,
    limit: usize,
    out: &mut Vec<GeneratingVector>,
) {
    if out.len() >= limit {
        return;
    }
    let pos = stack.len();
    if pos + 1 == periods.len() {
        let last = group.inv(product);
        if group.element_index_order(last) == periods[pos] {
            stack.push(last);
            if group.closure(stack).len() == group.order() {
                out.push(GeneratingVector {
                    group: group.clone(),
                    entries: stack.clone(),
                });
            }
            stack.pop();
        }
        return;
    }
    let candidates = if pos == 0 {
        first
    } else {
        by_order.get(&periods[pos]).unwrap_or(empty)
    };
    for &x in candidates {
        stack.push(x);
        search(
            group,
            periods,
            by_order,
            first,
            empty,
            stack,
            group.mul(product, x),
            limit,
            out,
        );
        stack.pop();
        if out.len() >= limit {
            return;
        }
    }
}

/// A compact surface `X` with an action of `G` such that `X/G` is the sphere.
#[derive(Debug, Clone)]
pub struct QuasiplatonicSurface {
    vector: GeneratingVector,
    genus: u64,
    signature: Signature,
}

/// Ramification over one branch value of `X/H → X/G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchPoint {
    /// Period of the base point in the original signature.
    pub period: u64,
    /// Ramification indices of the points above it.
    pub ramification: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct QuotientSurface {
    pub subgroup: Subgroup,
    pub index: usize,
    pub genus: u64,
    pub branch_data: Vec<BranchPoint>,
}

impl QuotientSurface {
    /// Number of base points over which `X/H → X/G` actually ramifies.
    pub fn branch_values(&self) -> usize {
        self.branch_data
            .iter()
            .filter(|b| b.ramification.iter().any(|&e| e > 1))
            .count()
    }
}

impl QuasiplatonicSurface {
    pub fn new(vector: GeneratingVector) -> Result<Self> {
        let genus = genus_from_vector(&vector)?;
        let signature = Signature::spherical(vector.periods());
        Ok(Self {
            vector,
            genus,
            signature,
        })
    }

    pub fn vector(&self) -> &GeneratingVector {
        &self.vector
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.vector.group
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// `X/H` and its branch data over `X/G`, by counting cycles of the
    /// vector entries on the cosets of `H`.
    pub fn quotient(&self, h: &Subgroup) -> Result<QuotientSurface> {
        let g = self.group();
        let action = g.coset_action(h)?;
        let n = action.degree() as i64;
        let mut ramified = 0i64;
        let mut branch_data = Vec::with_capacity(self.vector.entries.len());
        for &x in &self.vector.entries {
            let mut lengths = action.image(x).cycle_lengths();
            lengths.sort_unstable();
            ramified += n - lengths.len() as i64;
            branch_data.push(BranchPoint {
                period: g.element_index_order(x),
                ramification: lengths,
            });
        }
        // 2g - 2 = -2n + Σ (n - c_i)
        let twice = ramified - 2 * n + 2;
        debug_assert!(twice >= 0 && twice % 2 == 0);
        Ok(QuotientSurface {
            subgroup: h.clone(),
            index: n as usize,
            genus: (twice / 2) as u64,
            branch_data,
        })
    }

    /// Signature of the Galois cover `X/H → X/N` with group `N/H`.
    pub fn galois_quotient_signature(&self, h: &Subgroup, n: &Subgroup) -> Result<Signature> {
        let g = self.group();
        if !g.owns(h) || !g.owns(n) || !h.is_subset_of(n) {
            return Err(Error::SubgroupMismatch);
        }
        let normal = n.generators().iter().all(|&x| {
            h.generators()
                .iter()
                .all(|&y| h.contains(g.conjugate(y, x)))
        });
        if !normal {
            return Err(Error::NotNormalInN);
        }
        let act_h = g.coset_action(h)?;
        let act_n = g.coset_action(n)?;
        // N-coset below each H-coset
        let below: Vec<usize> = act_h
            .representatives()
            .iter()
            .map(|&r| act_n.coset_of(r))
            .collect();
        let mut periods = Vec::new();
        for &x in &self.vector.entries {
            let upper = act_h.image(x).cycles();
            let lower = act_n.image(x).cycles();
            let mut lower_len = vec![0usize; act_n.degree()];
            let mut lower_id = vec![0usize; act_n.degree()];
            for (id, c) in lower.iter().enumerate() {
                for &p in c {
                    lower_len[p as usize] = c.len();
                    lower_id[p as usize] = id;
                }
            }
            let mut ratio: Vec<Option<usize>> = vec![None; lower.len()];
            for c in &upper {
                let base = below[c[0] as usize];
                let l_prime = lower_len[base];
                if c.len() % l_prime != 0 {
                    return Err(Error::InconsistentRamification);
                }
                let e = c.len() / l_prime;
                let slot = &mut ratio[lower_id[base]];
                match slot {
                    Some(prev) if *prev != e => return Err(Error::InconsistentRamification),
                    _ => *slot = Some(e),
                }
            }
            periods.extend(
                ratio
                    .into_iter()
                    .flatten()
                    .filter(|&e| e > 1)
                    .map(|e| e as u64),
            );
        }
        let base_genus = self.quotient(n)?.genus;
        Ok(Signature::new(base_genus, periods))
    }
}

/// Sign convention for local monodromy eigenvalues: the eigenvalue
/// `exp(2πiα/m)` of `ρ(g_i)` contributes `frac(ORIENTATION·α/m)`. Flipping the
/// sign replaces the analytic character by its complex conjugate.
pub const ORIENTATION: i64 = -1;

/// Multiplicity of each irreducible in the action on holomorphic 1-forms.
pub fn chevalley_weil_multiplicities<T: Scalar>(
    surface: &QuasiplatonicSurface,
    table: &CharacterTable<T>,
) -> Result<Vec<u64>> {
    let g = surface.group();
    if !Arc::ptr_eq(g, table.group()) && **g != **table.group() {
        return Err(Error::GroupMismatch);
    }
    let e = g.exponent();
    // weights[m][j] = Σ_α frac(ORIENTATION·α/m) ζ_m^(-αj)
    let mut weights: HashMap<u64, Vec<Cyclotomic<T>>> = HashMap::new();
    let mut powers: Vec<Vec<usize>> = Vec::new();
    for &x in surface.vector.entries() {
        let m = g.element_index_order(x);
        weights.entry(m).or_insert_with(|| {
            let step = (e / m) as i64;
            (0..m as i64)
                .map(|j| {
                    Cyclotomic::from_exponents(
                        e,
                        (1..m as i64).map(|alpha| {
                            let w = (ORIENTATION * alpha).rem_euclid(m as i64);
                            (-alpha * j * step, T::from_ratio(w, m as i64))
                        }),
                    )
                })
                .collect()
        });
        let mut classes = Vec::with_capacity(m as usize);
        let mut y = g.identity();
        for _ in 0..m {
            classes.push(g.class_of(y));
            y = g.mul(y, x);
        }
        powers.push(classes);
    }

    let mut out = Vec::with_capacity(table.len());
    for (idx, chi) in table.irreducibles().iter().enumerate() {
        let degree = chi
            .degree()
            .ok_or_else(|| Error::NonIntegralMultiplicity("degree".into()))?;
        let trivial = i64::from(idx == 0 && chi.values().iter().all(|v| v.to_integer() == Some(1)));
        let mut acc = Cyclotomic::from_int(e, trivial - degree);
        for classes in &powers {
            let m = classes.len() as u64;
            let w = &weights[&m];
            let mut local = Cyclotomic::zero(e);
            for (j, &c) in classes.iter().enumerate() {
                local = &local + &(chi.value(c) * &w[j]);
            }
            acc = &acc + &local.scale(&T::from_ratio(1, m as i64));
        }
        match acc.to_integer() {
            Some(n) if n >= 0 => out.push(n as u64),
            _ => return Err(Error::NonIntegralMultiplicity(acc.to_string())),
        }
    }
    Ok(out)
}

/// Character of the representation on `H^0(X, Ω)`.
pub fn analytic_character<T: Scalar>(
    surface: &QuasiplatonicSurface,
    table: &CharacterTable<T>,
) -> Result<Character<T>> {
    let mult = chevalley_weil_multiplicities(surface, table)?;
    Ok(table.combine(&mult))
}
