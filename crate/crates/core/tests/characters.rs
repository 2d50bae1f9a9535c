mod common;

use std::sync::Arc;

use cmkit::{
    analytic_character, build_gm, Character, Cyclo, ExactCharacter, ExactTable, FiniteGroup,
    Subgroup,
};
use common::*;
use proptest::prelude::*;

fn fixtures() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    vec![
        ("C2", cyclic(2)),
        ("C7", cyclic(7)),
        ("V4", klein()),
        ("S3", s3()),
        ("D4", dihedral(4)),
        ("D5", dihedral(5)),
        (
            "Q8",
            group(8, &["(0 1 2 3)(4 5 6 7)", "(0 4 2 6)(1 7 3 5)"]),
        ),
        ("A4", group(4, &["(0 1 2)", "(0 1)(2 3)"])),
        ("S4", s4()),
        ("G6", build_gm(6).unwrap().group),
        ("G8", build_gm(8).unwrap().group),
        ("G10", build_gm(10).unwrap().group),
        ("A5", a5()),
        ("PSL27", psl27()),
    ]
}

fn int(e: u64, v: i64) -> Cyclo {
    Cyclo::from_int(e, v)
}

/// Row and column orthogonality plus the degree sum.
fn check_table(g: &Arc<FiniteGroup>, t: &ExactTable) -> Result<(), String> {
    let e = g.exponent();
    let k = g.num_classes();
    if t.len() != k {
        return Err(format!("{} rows for {k} classes", t.len()));
    }
    let irr = t.irreducibles();
    for i in 0..k {
        for j in 0..k {
            let ip = irr[i].inner_product(&irr[j]).unwrap();
            if ip != int(e, i64::from(i == j)) {
                return Err(format!("<chi{i}, chi{j}> = {ip}"));
            }
        }
    }
    let classes = g.conjugacy_classes();
    for a in 0..k {
        for b in 0..k {
            let mut sum = Cyclo::zero(e);
            for chi in irr {
                sum = &sum + &(chi.value(a) * &chi.value(b).conj());
            }
            let expect = if a == b {
                (g.order() / classes[a].size()) as i64
            } else {
                0
            };
            if sum != int(e, expect) {
                return Err(format!("column sum ({a}, {b}) = {sum}"));
            }
        }
    }
    let total: u64 = t.degrees().iter().map(|d| d * d).sum();
    if total != g.order() as u64 {
        return Err(format!("sum of squared degrees {total}"));
    }
    Ok(())
}

/// `Ind_H^G 1` from the induced-character formula.
fn induced_trivial(g: &Arc<FiniteGroup>, h: &Subgroup) -> ExactCharacter {
    let e = g.exponent();
    let values = g
        .conjugacy_classes()
        .iter()
        .map(|c| {
            let r = c.representative();
            let hits = (0..g.order())
                .filter(|&x| h.contains(g.conjugate(r, x)))
                .count();
            int(e, (hits / h.order()) as i64)
        })
        .collect();
    Character::new(g.clone(), values).unwrap()
}

#[test]
fn tables_satisfy_orthogonality() {
    for (name, g) in fixtures() {
        let t = ExactTable::compute(g.clone()).unwrap();
        check_table(&g, &t).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn table_examples() {
    let t = ExactTable::compute(cyclic(2)).unwrap();
    let rows: Vec<Vec<i64>> = t
        .irreducibles()
        .iter()
        .map(|c| c.values().iter().map(|v| v.to_integer().unwrap()).collect())
        .collect();
    assert_eq!(rows, vec![vec![1, 1], vec![1, -1]]);
    assert_eq!(ExactTable::compute(s3()).unwrap().degrees(), vec![1, 1, 2]);
    let g10 = build_gm(10).unwrap().group;
    let t = ExactTable::compute(g10.clone()).unwrap();
    assert_eq!(t.degrees().iter().map(|d| d * d).sum::<u64>(), 40);
    assert_eq!(t.len(), g10.num_classes());
}

#[test]
fn inner_product_examples() {
    let g = s3();
    let t = ExactTable::compute(g.clone()).unwrap();
    for chi in t.irreducibles() {
        assert_eq!(chi.multiplicity(chi).unwrap(), 1);
    }
    let trivial = Character::trivial(g.clone());
    assert_eq!(
        Character::regular(g.clone())
            .multiplicity(&trivial)
            .unwrap(),
        1
    );
    let std = &t.irreducibles()[2];
    let s2 = std.symmetric_square();
    let values: Vec<i64> = s2
        .values()
        .iter()
        .map(|v| v.to_integer().unwrap())
        .collect();
    assert_eq!(values, vec![3, 1, 0]);
    assert_eq!(s2.multiplicity(&trivial).unwrap(), 1);
    let c5 = cyclic(5);
    assert!(matches!(
        std.inner_product(&Character::trivial(c5)),
        Err(cmkit::Error::GroupMismatch)
    ));
}

#[test]
fn power_map_examples() {
    let g = s3();
    assert_eq!(g.power_class_map(1), vec![0, 1, 2]);
    assert_eq!(g.power_class_map(g.order() as i64), vec![0, 0, 0]);
    // classes: identity, transpositions, 3-cycles
    assert_eq!(g.power_class_map(2), vec![0, 0, 2]);
}

#[test]
fn symmetric_square_examples() {
    let g = cyclic(2);
    let t = ExactTable::compute(g.clone()).unwrap();
    let trivial = Character::trivial(g.clone());
    assert_eq!(trivial.symmetric_square(), trivial);
    assert_eq!(t.irreducibles()[1].symmetric_square(), trivial);
}

#[test]
fn fixed_space_examples() {
    let inst = build_gm(6).unwrap();
    let g = &inst.group;
    let t = ExactTable::compute(g.clone()).unwrap();
    for chi in t.irreducibles() {
        let d = chi.degree().unwrap() as u64;
        assert_eq!(chi.fixed_space_dimension(&g.trivial_subgroup()).unwrap(), d);
    }
    for chi in &t.irreducibles()[1..] {
        assert_eq!(chi.fixed_space_dimension(&g.whole()).unwrap(), 0);
    }
    let x = inst.surface().unwrap();
    let chi_a = analytic_character(&x, &t).unwrap();
    assert_eq!(
        chi_a.fixed_space_dimension(&g.subgroup(&[inst.a])).unwrap(),
        2
    );
}

#[test]
fn square_identities_and_reciprocity() {
    for (name, g) in fixtures() {
        let t = ExactTable::compute(g.clone()).unwrap();
        let irr = t.irreducibles();
        let check_small = g.order() <= 48;
        let subs = if check_small {
            g.all_subgroups().unwrap()
        } else {
            Vec::new()
        };
        for (i, chi) in irr.iter().enumerate() {
            let d = chi.degree().unwrap();
            let s2 = chi.symmetric_square();
            let l2 = chi.antisymmetric_square();
            assert_eq!(s2.degree(), Some(d * (d + 1) / 2), "{name} chi{i}");
            assert_eq!(
                s2.add(&l2).unwrap(),
                chi.tensor(chi).unwrap(),
                "{name} chi{i}"
            );
            // genuine characters decompose with non-negative integer multiplicities
            for psi in irr {
                for c in [&s2, &l2] {
                    let ip = c.inner_product(psi).unwrap();
                    assert!(ip.to_integer().is_some_and(|v| v >= 0), "{name}: {ip}");
                }
            }
            for h in &subs {
                let lhs = chi.fixed_space_dimension(h).unwrap();
                let rhs = chi.multiplicity(&induced_trivial(&g, h)).unwrap();
                assert_eq!(lhs, rhs, "{name} chi{i} H of order {}", h.order());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_groups_have_valid_tables(g in small_group(5)) {
        let t = ExactTable::compute(g.clone()).unwrap();
        prop_assert!(check_table(&g, &t).is_ok(), "{:?}", check_table(&g, &t));
        let float = cmkit::FloatTable::compute(g.clone()).unwrap();
        prop_assert_eq!(float.degrees(), t.degrees());
    }
}
