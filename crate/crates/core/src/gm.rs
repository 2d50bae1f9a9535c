//! The family `G_m = ⟨a, b, t | a² = b² = (ab)² = t^m = 1, tat⁻¹ = a, tbt⁻¹ = ab⟩`
//! for even `m >= 6`.
//!
//! The group acts faithfully on `m + 4` points: `a` and `b` translate the
//! four points of `C2²`, while `t` fixes `a`, swaps `b` and `ab`, and cycles
//! the remaining `m` points.

use std::sync::{Arc, OnceLock};

use crate::criteria::IsogenyRelation;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;
use crate::surface::{find_generating_vectors, GeneratingVector, QuasiplatonicSurface, Signature};

/// Values recorded for the family, by residue of `m` mod 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmExpected {
    pub genus: u64,
    pub signature: Signature,
    /// Genus of `X/⟨a⟩`.
    pub genus_y: u64,
    /// Genus of `X/⟨b⟩`, recorded when `m ≡ 0 mod 4`.
    pub genus_z: Option<u64>,
    pub curve_y: String,
    pub curve_z: Option<String>,
}

#[derive(Debug)]
pub struct GmInstance {
    pub m: u64,
    pub group: Arc<FiniteGroup>,
    pub a: usize,
    pub b: usize,
    pub t: usize,
    pub expected: GmExpected,
    vector: OnceLock<GeneratingVector>,
}

/// Parses a builtin group name such as `gm:8`.
pub fn parse_builtin(name: &str) -> Option<Result<u64>> {
    let rest = name.strip_prefix("gm:")?;
    Some(
        rest.parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad family parameter in {name:?}"))),
    )
}

pub fn build_gm(m: u64) -> Result<GmInstance> {
    if m < 6 || m % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "m must be an even integer at least 6, got {m}"
        )));
    }
    let degree = m as usize + 4;
    let mut a = vec![1, 0, 3, 2];
    let mut b = vec![2, 3, 0, 1];
    let mut t = vec![0, 1, 3, 2];
    for i in 0..m as u32 {
        a.push(4 + i);
        b.push(4 + i);
        t.push(4 + (i + 1) % m as u32);
    }
    let [a, b, t] = [a, b, t].map(|v| Permutation::new(v).expect("valid permutation"));
    let group = Arc::new(FiniteGroup::from_generators(
        degree,
        vec![a.clone(), b.clone(), t.clone()],
    )?);
    let idx = |p: &Permutation| group.index_of(p).expect("generator in group");
    let (ia, ib, it) = (idx(&a), idx(&b), idx(&t));

    let ab = group.mul(ia, ib);
    let conj = |x: usize| group.mul(group.mul(it, x), group.inv(it));
    let relations = [
        group.mul(ia, ia) == 0,
        group.mul(ib, ib) == 0,
        group.mul(ab, ab) == 0,
        group.element_index_order(it) == m,
        conj(ia) == ia,
        conj(ib) == ab,
        group.order() as u64 == 4 * m,
    ];
    if relations.contains(&false) {
        return Err(Error::InvalidParameter(format!(
            "permutation model violates the relations for m = {m}"
        )));
    }

    let expected = if m % 4 == 2 {
        GmExpected {
            genus: m - 2,
            signature: Signature::spherical(vec![2, m, 2 * m]),
            genus_y: m / 2 - 1,
            genus_z: None,
            curve_y: format!("y^2 = x^{m} - 1"),
            curve_z: None,
        }
    } else {
        GmExpected {
            genus: m - 3,
            signature: Signature::spherical(vec![2, m, m]),
            genus_y: m / 2 - 1,
            genus_z: Some(m / 4 - 1),
            curve_y: format!("y^2 = x^{m} - 1"),
            curve_z: Some(format!("y^2 = x^{} - 1", m / 2)),
        }
    };
    Ok(GmInstance {
        m,
        group,
        a: ia,
        b: ib,
        t: it,
        expected,
        vector: OnceLock::new(),
    })
}

impl GmInstance {
    /// First generating vector with the family's signature, found by search.
    pub fn canonical_vector(&self) -> Result<GeneratingVector> {
        if let Some(v) = self.vector.get() {
            return Ok(v.clone());
        }
        let sig = &self.expected.signature;
        let v = find_generating_vectors(&self.group, sig, 1)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::VectorNotFound(sig.to_string()))?;
        Ok(self.vector.get_or_init(|| v).clone())
    }

    pub fn surface(&self) -> Result<QuasiplatonicSurface> {
        QuasiplatonicSurface::new(self.canonical_vector()?)
    }

    /// `JX ~ JY²` for `m ≡ 2 mod 4`, `JX ~ JY × JZ²` for `m ≡ 0 mod 4`, where
    /// `Y = X/⟨a⟩` and `Z = X/⟨b⟩`.
    pub fn known_subgroup_collection(&self) -> IsogenyRelation {
        let g = &self.group;
        let ha = g.subgroup(&[self.a]);
        let factors = if self.m % 4 == 2 {
            vec![(ha, 2)]
        } else {
            vec![(ha, 1), (g.subgroup(&[self.b]), 2)]
        };
        IsogenyRelation::new(g, 1, factors).expect("family relation is well formed")
    }
}
