//! Sufficient criteria for complex multiplication of `JX`.
//!
//! A verdict is either certified, with evidence that can be re-checked, or
//! inconclusive. Inconclusive never means "no CM".

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::character::{Character, CharacterTable};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, DEFAULT_MAX_SUBGROUP_ORDER};
use crate::scalar::Scalar;
use crate::surface::{
    analytic_character, chevalley_weil_multiplicities, QuasiplatonicSurface, Signature,
};

/// Default number of candidate relations tried by [`cm_verdict`].
pub const DEFAULT_SEARCH_LIMIT: usize = 1000;
const MAX_COLLECTION_SIZE: usize = 6;
const MAX_COMBINATIONS: usize = 1_000_000;

/// `JX^n ~ JY_1^{n_1} × ⋯ × JY_s^{n_s}` with `Y_i = X/H_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsogenyRelation {
    pub n: u64,
    pub factors: Vec<(Subgroup, u64)>,
}

impl IsogenyRelation {
    pub fn new(group: &FiniteGroup, n: u64, factors: Vec<(Subgroup, u64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRelation("n must be positive".into()));
        }
        if factors.is_empty() {
            return Err(Error::InvalidRelation("no factors".into()));
        }
        for (h, k) in &factors {
            if !group.owns(h) {
                return Err(Error::SubgroupMismatch);
            }
            if *k == 0 {
                return Err(Error::InvalidRelation(
                    "multiplicities must be positive".into(),
                ));
            }
            if h.is_trivial() || h.order() == group.order() {
                return Err(Error::NotProperNontrivial);
            }
        }
        Ok(Self { n, factors })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    StatementA,
    StatementB,
    GenusZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementAEvidence {
    pub quotient_order: usize,
    /// Invariant factors of the abelian quotient `G/H`.
    pub abelian_invariants: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementBEvidence {
    /// Lifts to `G` of generators of `K ≤ N_G(H)/H`.
    pub k_generators: Vec<String>,
    pub k_order: usize,
    pub k_invariants: Vec<u64>,
    /// `4(g - 1)`.
    pub bound: i64,
    /// Signature of `Y → Y/K`.
    pub branch_signature: Signature,
    /// Certified through `K ≅ C6` with periods (2, 2, 3, 3).
    pub exception: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    StatementA(StatementAEvidence),
    StatementB(StatementBEvidence),
    GenusZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorCertificate {
    pub subgroup: Subgroup,
    pub multiplicity: u64,
    pub genus: u64,
    pub route: Route,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    CmCertified,
    Inconclusive,
}

/// One line of the per-irreducible isogeny check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibleCheck {
    pub irreducible: usize,
    pub degree: u64,
    /// Multiplicity in `H^1(X) = H^0(X,Ω) ⊕ conj`.
    pub h1_multiplicity: u64,
    /// `n·d_ρ`.
    pub lhs: u64,
    /// `Σ n_i·dim V_ρ^{H_i}`.
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub holds: bool,
    pub report: Vec<IrreducibleCheck>,
}

#[derive(Debug, Clone)]
pub struct CMVerdict {
    pub status: Status,
    pub streit_value: Option<u64>,
    pub relation: Option<IsogenyRelation>,
    pub certificates: Vec<FactorCertificate>,
    pub irreducible_report: Vec<IrreducibleCheck>,
    /// Notes from the search, in search order.
    pub log: Vec<String>,
}

/// Statement A: `H` is normal and `G/H` is abelian.
pub fn check_statement_a(g: &FiniteGroup, h: &Subgroup) -> Result<Option<StatementAEvidence>> {
    if !g.owns(h) {
        return Err(Error::SubgroupMismatch);
    }
    if h.is_trivial() || h.order() == g.order() {
        return Err(Error::NotProperNontrivial);
    }
    if !g.is_normal(h)? {
        return Ok(None);
    }
    let q = g.quotient_group(h)?;
    Ok(q.abelian_invariants()
        .map(|abelian_invariants| StatementAEvidence {
            quotient_order: q.order(),
            abelian_invariants,
        }))
}

/// Statement B: `Y = X/H` carries an abelian group `K` of automorphisms, induced
/// from `N_G(H)/H`, with `|K| > 4(g_Y - 1)`, or `K ≅ C6` acting with periods
/// (2, 2, 3, 3). For `g_Y = 1` the quotient `Y/K` must also be `P¹` with at
/// most three branch values.
pub fn check_statement_b(
    x: &QuasiplatonicSurface,
    h: &Subgroup,
) -> Result<Option<StatementBEvidence>> {
    let g = x.group();
    let y = x.quotient(h)?;
    if y.genus == 0 {
        return Err(Error::GenusZeroQuotient);
    }
    let bound = 4 * (y.genus as i64 - 1);
    let normalizer = g.normalizer(h)?;
    let quotient = g.quotient(&normalizer, h)?;
    let q = quotient.group();
    let mut candidates: Vec<Subgroup> = q
        .all_subgroups_bounded(DEFAULT_MAX_SUBGROUP_ORDER)?
        .into_iter()
        .filter(|k| !k.is_trivial())
        .filter(|k| {
            k.generators()
                .iter()
                .all(|&a| k.generators().iter().all(|&b| q.mul(a, b) == q.mul(b, a)))
        })
        .collect();
    // largest first; ties keep lattice order
    candidates.sort_by_key(|k| std::cmp::Reverse(k.order()));
    let exceptional = Signature::spherical(vec![2, 2, 3, 3]);
    for k in candidates {
        let lifted = quotient.preimage(&k);
        let k_full = g.subgroup_from_elements(&lifted)?;
        let order = k.order();
        let is_c6 = order == 6;
        let large = order as i64 > bound;
        if !is_c6 && !large {
            continue;
        }
        let signature = x.galois_quotient_signature(h, &k_full)?;
        let exception = is_c6 && signature == exceptional;
        if !(exception || large) {
            continue;
        }
        // The bound is vacuous in genus 1; require Y → Y/K to be a Belyi cover.
        if y.genus == 1 && (signature.orbit_genus != 0 || signature.periods.len() > 3) {
            continue;
        }
        let k_group = q.subgroup_as_group(&k)?;
        let k_generators = k
            .generators()
            .iter()
            .map(|&kg| {
                let lift = lifted
                    .iter()
                    .copied()
                    .find(|&e| quotient.project(e) == Some(kg))
                    .expect("every quotient element has a lift");
                g.element(lift).to_string()
            })
            .collect();
        return Ok(Some(StatementBEvidence {
            k_generators,
            k_order: order,
            k_invariants: k_group.abelian_invariants().unwrap_or_default(),
            bound,
            branch_signature: signature,
            exception,
        }));
    }
    Ok(None)
}

/// Certifies one factor, trying genus zero, then A, then B.
pub fn certify_factor(
    x: &QuasiplatonicSurface,
    h: &Subgroup,
    multiplicity: u64,
) -> Result<Option<FactorCertificate>> {
    let genus = x.quotient(h)?.genus;
    let make = |route, evidence| FactorCertificate {
        subgroup: h.clone(),
        multiplicity,
        genus,
        route,
        evidence,
    };
    if genus == 0 {
        return Ok(Some(make(Route::GenusZero, Evidence::GenusZero)));
    }
    if let Some(ev) = check_statement_a(x.group(), h)? {
        return Ok(Some(make(Route::StatementA, Evidence::StatementA(ev))));
    }
    if let Some(ev) = check_statement_b(x, h)? {
        return Ok(Some(make(Route::StatementB, Evidence::StatementB(ev))));
    }
    Ok(None)
}

/// Multiplicities in `H^1(X)` of every irreducible.
fn h1_multiplicities<T: Scalar>(
    x: &QuasiplatonicSurface,
    table: &CharacterTable<T>,
) -> Result<Vec<u64>> {
    let holo = chevalley_weil_multiplicities(x, table)?;
    let conj = table.conjugate_indices();
    Ok((0..holo.len()).map(|i| holo[i] + holo[conj[i]]).collect())
}

fn fixed_dims<T: Scalar>(table: &CharacterTable<T>, h: &Subgroup) -> Result<Vec<u64>> {
    table
        .irreducibles()
        .iter()
        .map(|chi| chi.fixed_space_dimension(h))
        .collect()
}

/// Per-irreducible identity `n·d_ρ = Σ n_i·dim V_ρ^{H_i}` for every `ρ` in `H^1(X)`.
pub fn verify_isogeny_relation<T: Scalar>(
    x: &QuasiplatonicSurface,
    table: &CharacterTable<T>,
    relation: &IsogenyRelation,
) -> Result<RelationCheck> {
    let g = x.group();
    if **g != **table.group() {
        return Err(Error::GroupMismatch);
    }
    if relation.factors.iter().any(|(h, _)| !g.owns(h)) {
        return Err(Error::GroupMismatch);
    }
    let mu = h1_multiplicities(x, table)?;
    let dims = relation
        .factors
        .iter()
        .map(|(h, _)| fixed_dims(table, h))
        .collect::<Result<Vec<_>>>()?;
    let degrees = table.degrees();
    let mut report = Vec::new();
    for (rho, &m) in mu.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let lhs = relation.n * degrees[rho];
        let rhs = relation
            .factors
            .iter()
            .zip(&dims)
            .map(|((_, k), d)| k * d[rho])
            .sum();
        report.push(IrreducibleCheck {
            irreducible: rho,
            degree: degrees[rho],
            h1_multiplicity: m,
            lhs,
            rhs,
        });
    }
    let holds = report.iter().all(|r| r.lhs == r.rhs);
    if holds {
        // n·g_X = Σ n_i·g_i follows from summing the identity over H^0
        let lhs = relation.n * x.genus();
        let rhs: u64 = relation
            .factors
            .iter()
            .map(|(h, k)| x.quotient(h).map(|q| k * q.genus))
            .sum::<Result<u64>>()?;
        assert_eq!(
            lhs, rhs,
            "dimension identity violated by a verified relation"
        );
    }
    Ok(RelationCheck { holds, report })
}

/// `⟨S²(χ_a), 1⟩_G`; zero certifies CM.
pub fn streit_test<T: Scalar>(x: &QuasiplatonicSurface, table: &CharacterTable<T>) -> Result<u64> {
    let chi = analytic_character(x, table)?;
    streit_value(&chi)
}

/// `⟨S²(χ), 1⟩` for an arbitrary character.
pub fn streit_value<T: Scalar>(chi: &Character<T>) -> Result<u64> {
    let trivial = Character::trivial(chi.group().clone());
    chi.symmetric_square().multiplicity(&trivial)
}

/// Verifies a relation and certifies each factor.
pub fn certify_relation<T: Scalar>(
    x: &QuasiplatonicSurface,
    table: &CharacterTable<T>,
    relation: &IsogenyRelation,
) -> Result<CMVerdict> {
    let check = verify_isogeny_relation(x, table, relation)?;
    let mut log = Vec::new();
    let mut certificates = Vec::new();
    let mut all = check.holds;
    if !check.holds {
        log.push("isogeny relation fails the per-irreducible identity".into());
    }
    for (h, k) in &relation.factors {
        match certify_factor(x, h, *k)? {
            Some(c) => certificates.push(c),
            None => {
                all = false;
                log.push(format!(
                    "factor {} satisfies neither statement A nor B",
                    describe(x.group(), h)
                ));
            }
        }
    }
    Ok(CMVerdict {
        status: if all {
            Status::CmCertified
        } else {
            Status::Inconclusive
        },
        streit_value: None,
        relation: Some(relation.clone()),
        certificates,
        irreducible_report: check.report,
        log,
    })
}

/// Re-checks an emitted certificate from scratch. Every route recorded in
/// the verdict must hold again.
pub fn recheck<T: Scalar>(
    x: &QuasiplatonicSurface,
    table: &CharacterTable<T>,
    verdict: &CMVerdict,
) -> Result<bool> {
    if verdict.status != Status::CmCertified {
        return Ok(false);
    }
    let streit_ok = verdict.streit_value == Some(0);
    if streit_ok && streit_test(x, table)? != 0 {
        return Ok(false);
    }
    match &verdict.relation {
        Some(relation) => {
            let again = certify_relation(x, table, relation)?;
            Ok(again.status == Status::CmCertified && again.certificates == verdict.certificates)
        }
        None => Ok(streit_ok),
    }
}

fn describe(g: &FiniteGroup, h: &Subgroup) -> String {
    let gens: Vec<String> = h
        .generators()
        .iter()
        .map(|&x| g.element(x).to_string())
        .collect();
    format!("<{}> (order {})", gens.join(", "), h.order())
}

struct Candidate {
    subgroup: Subgroup,
    index: usize,
    certificate: FactorCertificate,
    dims: Vec<u64>,
}

/// A verified relation together with a certificate for every factor.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCertificate {
    pub relation: IsogenyRelation,
    pub certificates: Vec<FactorCertificate>,
    pub report: Vec<IrreducibleCheck>,
    /// Candidate collections examined, including the successful one.
    pub tried: usize,
}

/// Searches subgroup collections, smallest first and then by total index,
/// for a verified relation whose factors all satisfy A or B or have genus 0.
/// Candidates are conjugacy-class representatives of certifiable subgroups.
pub fn search_relation<T: Scalar>(
    x: &QuasiplatonicSurface,
    table: &CharacterTable<T>,
    search_limit: usize,
    log: &mut Vec<String>,
) -> Result<Option<RelationCertificate>> {
    let g = x.group();
    let mu = h1_multiplicities(x, table)?;
    let support: Vec<usize> = (0..mu.len()).filter(|&i| mu[i] > 0).collect();
    let degrees = table.degrees();

    let subs = g.all_subgroups()?;
    let mut candidates: Vec<Candidate> = Vec::new();
    for class in g.subgroup_conjugacy_classes(&subs) {
        let h = &subs[class[0]];
        if h.is_trivial() || h.order() == g.order() {
            continue;
        }
        let genus = x.quotient(h)?.genus;
        if genus == 0 {
            continue;
        }
        match certify_factor(x, h, 1)? {
            Some(certificate) => {
                let all = fixed_dims(table, h)?;
                candidates.push(Candidate {
                    subgroup: h.clone(),
                    index: g.order() / h.order(),
                    certificate,
                    dims: support.iter().map(|&r| all[r]).collect(),
                });
            }
            None => log.push(format!(
                "{} (genus {genus}) not certifiable",
                describe(g, h)
            )),
        }
    }
    log.push(format!("{} certifiable subgroup classes", candidates.len()));

    let support_degrees: Vec<u64> = support.iter().map(|&r| degrees[r]).collect();
    let mut tried = 0usize;
    for size in 1..=candidates.len().min(MAX_COLLECTION_SIZE) {
        let Some(mut combos) = combinations(candidates.len(), size, MAX_COMBINATIONS) else {
            log.push(format!(
                "collections of size {size} exceed the enumeration cap"
            ));
            break;
        };
        combos.sort_by_key(|c| {
            (
                c.iter().map(|&i| candidates[i].index).sum::<usize>(),
                c.clone(),
            )
        });
        for combo in combos {
            if tried >= search_limit {
                log.push(format!("search limit {search_limit} reached"));
                return Ok(None);
            }
            tried += 1;
            let columns: Vec<&[u64]> = combo
                .iter()
                .map(|&i| candidates[i].dims.as_slice())
                .collect();
            let Some(solution) = solve_multiplicities(&support_degrees, &columns, g.order() as u64)
            else {
                continue;
            };
            let relation = IsogenyRelation::new(
                g,
                solution[0],
                combo
                    .iter()
                    .zip(&solution[1..])
                    .map(|(&i, &k)| (candidates[i].subgroup.clone(), k))
                    .collect(),
            )?;
            let check = verify_isogeny_relation(x, table, &relation)?;
            if !check.holds {
                continue;
            }
            let certificates = combo
                .iter()
                .zip(&solution[1..])
                .map(|(&i, &k)| FactorCertificate {
                    multiplicity: k,
                    ..candidates[i].certificate.clone()
                })
                .collect();
            log.push(format!("relation found after {tried} candidates"));
            return Ok(Some(RelationCertificate {
                relation,
                certificates,
                report: check.report,
                tried,
            }));
        }
    }
    log.push(format!("no relation among {tried} candidates"));
    Ok(None)
}

/// Streit value, then the relation search. The search runs whatever the
/// Streit value.
pub fn cm_verdict<T: Scalar>(
    x: &QuasiplatonicSurface,
    table: &CharacterTable<T>,
    search_limit: usize,
) -> Result<CMVerdict> {
    let streit = streit_test(x, table)?;
    let mut log = vec![format!("Streit value is {streit}")];
    let found = search_relation(x, table, search_limit, &mut log)?;
    let certified = streit == 0 || found.is_some();
    let (relation, certificates, irreducible_report) = match found {
        Some(c) => (Some(c.relation), c.certificates, c.report),
        None => (None, Vec::new(), Vec::new()),
    };
    Ok(CMVerdict {
        status: if certified {
            Status::CmCertified
        } else {
            Status::Inconclusive
        },
        streit_value: Some(streit),
        relation,
        certificates,
        irreducible_report,
        log,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order, or `None` past `cap`.
fn combinations(n: usize, k: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    let mut count: u128 = 1;
    for i in 0..k {
        count = count * (n - i) as u128 / (i + 1) as u128;
    }
    if count > cap as u128 {
        return None;
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return Some(out);
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Positive integers `(n, n_1, …, n_s)`, all at most `bound`, with
/// `n·d_ρ = Σ n_i·f_{ρ,i}` for every row.
fn solve_multiplicities(degrees: &[u64], columns: &[&[u64]], bound: u64) -> Option<Vec<u64>> {
    let cols = columns.len() + 1;
    let rows: Vec<Vec<BigRational>> = degrees
        .iter()
        .enumerate()
        .map(|(r, &d)| {
            let mut row = vec![BigRational::from_integer(d.into())];
            row.extend(
                columns
                    .iter()
                    .map(|c| -BigRational::from_integer(c[r].into())),
            );
            row
        })
        .collect();
    let basis = rational_nullspace(rows, cols);
    if basis.is_empty() {
        return None;
    }
    // small non-negative combinations of the basis, in a fixed order
    let t = basis.len();
    let range = if t == 1 { 1 } else { 3 };
    let mut coeffs = vec![0usize; t];
    loop {
        let mut carry = 0;
        while carry < t {
            coeffs[carry] += 1;
            if coeffs[carry] <= range {
                break;
            }
            coeffs[carry] = 0;
            carry += 1;
        }
        if carry == t {
            return None;
        }
        let mut v = vec![BigRational::zero(); cols];
        for (c, b) in coeffs.iter().zip(&basis) {
            for (slot, x) in v.iter_mut().zip(b) {
                *slot += x * BigRational::from_integer((*c).into());
            }
        }
        if let Some(ints) = primitive_positive(&v) {
            if ints.iter().all(|&x| x <= bound) {
                return Some(ints);
            }
        }
    }
}

fn primitive_positive(v: &[BigRational]) -> Option<Vec<u64>> {
    let sign = if v.iter().all(|x| x.is_positive()) {
        1
    } else if v.iter().all(|x| x.is_negative()) {
        -1
    } else {
        return None;
    };
    let lcm = v.iter().fold(num_bigint::BigInt::one(), |acc, x| {
        num_integer::Integer::lcm(&acc, x.denom())
    });
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &lcm).to_integer() * sign).collect();
    let gcd = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| {
        num_integer::Integer::gcd(&acc, x)
    });
    ints.iter().map(|x| (x / &gcd).to_u64()).collect()
}

fn rational_nullspace(mut a: Vec<Vec<BigRational>>, cols: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        let inv = a[row][col].recip();
        for c in 0..cols {
            a[row][c] = &a[row][c] * &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..cols {
                    let delta = &factor * &a[row][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][free].clone();
            }
            v
        })
        .collect()
}
