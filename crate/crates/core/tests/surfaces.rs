mod common;

use std::sync::Arc;

use cmkit::surface::genus_from_data;
use cmkit::{
    analytic_character, build_gm, chevalley_weil_multiplicities, find_generating_vectors,
    genus_from_vector, streit_test, Error, ExactTable, FiniteGroup, FloatTable, GeneratingVector,
    QuasiplatonicSurface, Signature,
};
use common::*;
use proptest::prelude::*;

/// Surfaces used by the exhaustive checks.
fn surfaces() -> Vec<(String, QuasiplatonicSurface)> {
    let mut out: Vec<(String, QuasiplatonicSurface)> = (6..=12)
        .step_by(2)
        .map(|m| (format!("G{m}"), build_gm(m).unwrap().surface().unwrap()))
        .collect();
    out.push(("C7".into(), first_surface(&cyclic(7), &[7, 7, 7])));
    out.push(("S4".into(), first_surface(&s4(), &[3, 4, 4])));
    out.push(("A5".into(), first_surface(&a5(), &[2, 5, 5])));
    out.push(("D6".into(), first_surface(&dihedral(6), &[2, 2, 2, 6])));
    out.push(("PSL27".into(), first_surface(&psl27(), &[2, 3, 7])));
    out.push(("C6".into(), c6_exception()));
    out.push(("hyp6".into(), hyperelliptic(6)));
    out
}

#[test]
fn genus_examples() {
    for m in (6..=20).step_by(2) {
        let inst = build_gm(m).unwrap();
        let v = inst.canonical_vector().unwrap();
        let expect = if m % 4 == 2 { m - 2 } else { m - 3 };
        assert_eq!(genus_from_vector(&v).unwrap(), expect);
        assert_eq!(
            genus_from_data(4 * m as usize, &inst.expected.signature.periods).unwrap(),
            expect
        );
    }
    assert_eq!(genus_from_data(6, &[2, 2, 3, 3]).unwrap(), 2);
    assert!(matches!(
        genus_from_data(5, &[2, 3, 7]),
        Err(Error::NonIntegerGenus(_))
    ));
    assert!(matches!(
        genus_from_data(8, &[2, 2, 2]),
        Err(Error::NegativeGenus(_))
    ));
}

#[test]
fn vector_search_examples() {
    let v4 = klein();
    let vs = find_generating_vectors(&v4, &Signature::spherical(vec![2, 2, 2]), 10).unwrap();
    assert!(!vs.is_empty());
    let e = vs[0].entries();
    assert_eq!(v4.mul(v4.mul(e[0], e[1]), e[2]), v4.identity());
    let g6 = build_gm(6).unwrap().group;
    assert!(
        !find_generating_vectors(&g6, &Signature::spherical(vec![2, 6, 12]), 1)
            .unwrap()
            .is_empty()
    );
    let c3 = cyclic(3);
    let vs = find_generating_vectors(&c3, &Signature::spherical(vec![3, 3, 3]), 100).unwrap();
    assert!(vs
        .iter()
        .any(|v| v.entries()[0] == v.entries()[1] && v.entries()[1] == v.entries()[2]));
    // no element of order 5
    assert!(
        find_generating_vectors(&g6, &Signature::spherical(vec![2, 5, 10]), 1)
            .unwrap()
            .is_empty()
    );
    assert!(matches!(
        find_generating_vectors(&g6, &Signature::new(1, vec![2]), 1),
        Err(Error::UnsupportedSignature(_))
    ));
}

#[test]
fn vector_validation() {
    let g = cyclic(6);
    let t = g.index_of(&perm("(0 1 2 3 4 5)", 6)).unwrap();
    assert!(GeneratingVector::new(g.clone(), vec![t, t]).is_err());
    assert!(GeneratingVector::new(g.clone(), vec![0, t, g.inv(t)]).is_err());
    let t2 = g.pow(t, 2);
    assert!(GeneratingVector::new(g.clone(), vec![t2, t2, t2]).is_err());
    assert!(GeneratingVector::new(g.clone(), vec![t, g.inv(t)]).is_ok());
}

#[test]
fn quotient_examples() {
    for m in (6..=20).step_by(2) {
        let inst = build_gm(m).unwrap();
        let x = inst.surface().unwrap();
        let g = &inst.group;
        assert_eq!(x.quotient(&g.subgroup(&[inst.a])).unwrap().genus, m / 2 - 1);
        if m % 4 == 0 {
            assert_eq!(x.quotient(&g.subgroup(&[inst.b])).unwrap().genus, m / 4 - 1);
        }
        assert_eq!(x.quotient(&g.trivial_subgroup()).unwrap().genus, x.genus());
        assert_eq!(x.quotient(&g.whole()).unwrap().genus, 0);
    }
    let x = build_gm(6).unwrap().surface().unwrap();
    assert!(matches!(
        x.quotient(&klein().whole()),
        Err(Error::SubgroupMismatch)
    ));
}

#[test]
fn galois_quotient_examples() {
    let inst = build_gm(8).unwrap();
    let x = inst.surface().unwrap();
    let g = &inst.group;
    let hb = g.subgroup(&[inst.b]);
    let n = g.normalizer(&hb).unwrap();
    let sig = x.galois_quotient_signature(&hb, &n).unwrap();
    assert_eq!(sig, Signature::spherical(vec![2, 4, 4]));
    let same = x.galois_quotient_signature(&n, &n).unwrap();
    assert!(same.periods.is_empty());
    assert_eq!(same.orbit_genus, x.quotient(&n).unwrap().genus);
    let whole = x
        .galois_quotient_signature(&g.trivial_subgroup(), &g.whole())
        .unwrap();
    assert_eq!(&whole, x.signature());
    assert!(matches!(
        x.galois_quotient_signature(&hb, &g.whole()),
        Err(Error::NotNormalInN)
    ));
}

#[test]
fn chevalley_weil_examples() {
    for (r, g) in [(6, 2), (8, 3)] {
        let x = hyperelliptic(r);
        let t = ExactTable::compute(x.group().clone()).unwrap();
        assert_eq!(x.genus(), g);
        assert_eq!(chevalley_weil_multiplicities(&x, &t).unwrap(), vec![0, g]);
    }
    for (m, g) in [(6, 4), (8, 5)] {
        let x = build_gm(m).unwrap().surface().unwrap();
        let t = ExactTable::compute(x.group().clone()).unwrap();
        let n = chevalley_weil_multiplicities(&x, &t).unwrap();
        let sum: u64 = n.iter().zip(t.degrees()).map(|(a, d)| a * d).sum();
        assert_eq!(sum, g);
        let chi = analytic_character(&x, &t).unwrap();
        assert_eq!(chi.degree(), Some(g as i64));
        assert_eq!(chi.fixed_space_dimension(&x.group().whole()).unwrap(), 0);
    }
}

#[test]
fn dual_method_genus_and_riemann_hurwitz() {
    for (name, x) in surfaces() {
        let g = x.group();
        let t = ExactTable::compute(g.clone()).unwrap();
        let chi = analytic_character(&x, &t).unwrap();
        for h in g.all_subgroups().unwrap() {
            let q = x.quotient(&h).unwrap();
            assert_eq!(
                q.genus,
                chi.fixed_space_dimension(&h).unwrap(),
                "{name}, |H| = {}",
                h.order()
            );
            let n = q.index as i64;
            let ramification: i64 = q
                .branch_data
                .iter()
                .flat_map(|b| b.ramification.iter())
                .map(|&l| l as i64 - 1)
                .sum();
            assert_eq!(ramification, 2 * q.genus as i64 - 2 + 2 * n, "{name}");
            for b in &q.branch_data {
                assert_eq!(b.ramification.iter().sum::<usize>(), q.index);
            }
        }
    }
}

#[test]
fn chevalley_weil_totals_and_duality() {
    for (name, x) in surfaces() {
        let t = ExactTable::compute(x.group().clone()).unwrap();
        let n = chevalley_weil_multiplicities(&x, &t).unwrap();
        let d = t.degrees();
        assert_eq!(n[0], 0, "{name}");
        assert_eq!(
            n.iter().zip(&d).map(|(a, b)| a * b).sum::<u64>(),
            x.genus(),
            "{name}"
        );
        let conj = t.conjugate_indices();
        let h1: u64 = (0..n.len()).map(|i| (n[i] + n[conj[i]]) * d[i]).sum();
        assert_eq!(h1, 2 * x.genus(), "{name}");
    }
}

/// Trace of every element on holomorphic 1-forms from fixed points alone:
/// `1 + Σ_p ξ_p/(1 - ξ_p)` with `ξ_p` the local multiplier. `sign` picks the
/// multiplier of a generating-vector entry at its fixed point.
fn fixed_point_traces(x: &QuasiplatonicSurface, sign: f64) -> Vec<(f64, f64)> {
    let g = x.group();
    let n = g.order();
    let mut traces = vec![(x.genus() as f64, 0.0)];
    for h in 1..n {
        let (mut re, mut im) = (1.0, 0.0);
        for &c in x.vector().entries() {
            let m = g.element_index_order(c) as usize;
            let powers: Vec<usize> = (0..m).map(|k| g.pow(c, k as i64)).collect();
            for y in 0..n {
                let conj = g.mul(g.mul(g.inv(y), h), y);
                if let Some(k) = powers.iter().position(|&p| p == conj) {
                    let theta = sign * 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    let (xr, xi) = (theta.cos(), theta.sin());
                    // ξ/(1-ξ), weighted by 1/m for the m representatives of the point
                    let (dr, di) = (1.0 - xr, -xi);
                    let d2 = dr * dr + di * di;
                    re += (xr * dr + xi * di) / d2 / m as f64;
                    im += (xi * dr - xr * di) / d2 / m as f64;
                }
            }
        }
        traces.push((re, im));
    }
    traces
}

fn complex_values(x: &QuasiplatonicSurface) -> Vec<(f64, f64)> {
    let g = x.group();
    let t = FloatTable::compute(g.clone()).unwrap();
    let chi = analytic_character(x, &t).unwrap();
    (0..g.order())
        .map(|h| {
            let v = chi.at(h);
            let e = v.conductor() as f64;
            v.coeffs()
                .iter()
                .enumerate()
                .fold((0.0, 0.0), |(re, im), (k, c)| {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / e;
                    (re + c * theta.cos(), im + c * theta.sin())
                })
        })
        .collect()
}

fn close(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    a.iter()
        .zip(b)
        .all(|(p, q)| (p.0 - q.0).abs() < 1e-8 && (p.1 - q.1).abs() < 1e-8)
}

#[test]
fn analytic_character_matches_fixed_point_traces() {
    let mut cases = surfaces();
    cases.extend([14u64, 16].map(|m| (format!("G{m}"), build_gm(m).unwrap().surface().unwrap())));
    let mut signs = Vec::new();
    for (name, x) in &cases {
        let chi = complex_values(x);
        let sign = [1.0, -1.0]
            .into_iter()
            .find(|&s| close(&chi, &fixed_point_traces(x, s)))
            .unwrap_or_else(|| panic!("{name}: no multiplier convention matches"));
        signs.push(sign);

        // ⟨S²χ, 1⟩ from the oracle traces alone
        let g = x.group();
        let tr = fixed_point_traces(x, sign);
        let total: f64 = (0..g.order())
            .map(|h| {
                let (a, b) = tr[h];
                let (sq, _) = tr[g.mul(h, h)];
                (a * a - b * b + sq) / 2.0
            })
            .sum::<f64>()
            / g.order() as f64;
        let t = ExactTable::compute(g.clone()).unwrap();
        assert_eq!(total.round() as u64, streit_test(x, &t).unwrap(), "{name}");
        assert!((total - total.round()).abs() < 1e-8, "{name}");
    }
    // one convention throughout
    assert!(signs.windows(2).all(|w| w[0] == w[1]));
}

fn surface_strategy() -> impl Strategy<Value = (Arc<FiniteGroup>, QuasiplatonicSurface)> {
    prop_oneof![
        Just((6u64, vec![2u64, 6, 12])),
        Just((8, vec![2, 8, 8])),
        Just((10, vec![2, 10, 20])),
        Just((12, vec![2, 12, 12])),
    ]
    .prop_flat_map(|(m, periods)| {
        let inst = build_gm(m).unwrap();
        let vs = find_generating_vectors(&inst.group, &Signature::spherical(periods), 64).unwrap();
        let g = inst.group.clone();
        proptest::sample::select(vs)
            .prop_map(move |v| (g.clone(), QuasiplatonicSurface::new(v).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chevalley_weil_is_conjugation_invariant((g, x) in surface_strategy(), seed in any::<usize>()) {
        let t = ExactTable::compute(g.clone()).unwrap();
        let base = chevalley_weil_multiplicities(&x, &t).unwrap();
        let y = QuasiplatonicSurface::new(x.vector().conjugated(seed % g.order())).unwrap();
        prop_assert_eq!(y.genus(), x.genus());
        prop_assert_eq!(chevalley_weil_multiplicities(&y, &t).unwrap(), base);
    }
}
