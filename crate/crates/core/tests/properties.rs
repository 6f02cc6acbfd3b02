//! Randomized invariants across modules.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use cikit::ci_ideal::{permute_ring_ideal, sum_ci_ideals};
use cikit::ci_model::{apply_permutation, enumerate_elementary};
use cikit::cone::{Cone, Facet, FaceLattice};
use cikit::imset::{build_matrix, decompose, elementary_imset, recognize_semi_elementary, semi_elementary_imset};
use cikit::poly::{dim_degree, groebner, ideal_equal, ideal_membership, normal_form, verify_groebner, Monomial};
use cikit::relation_lang::{parse_relation, parse_statement, render};
use cikit::toric::{graver_basis, in_kernel, kernel_basis, markov_basis, permute_binomial, ToricBinomial};
use cikit::{Budget, CIStatement, IdealHandle, IndexSet, MonomialOrder, Permutation, Polynomial, Ring, StateVector};

fn budget() -> Budget {
    Budget::seconds(120.0)
}

fn perm(n: u8) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<u8>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

/// Any statement over [n]: each variable goes to I, J, K or nowhere.
fn statement(n: u8) -> impl Strategy<Value = CIStatement> {
    prop::collection::vec(0u8..4, n as usize)
        .prop_filter("I and J nonempty", |v| v.contains(&1) && v.contains(&2))
        .prop_map(|v| {
            let pick = |k: u8| IndexSet::from_indices(&(1..=v.len() as u8).filter(|&i| v[i as usize - 1] == k).collect::<Vec<_>>()).unwrap();
            CIStatement::new(pick(1), pick(2), pick(3)).unwrap()
        })
}

fn lattice(n: u8) -> &'static (Cone, Vec<Facet>, FaceLattice) {
    static L3: OnceLock<(Cone, Vec<Facet>, FaceLattice)> = OnceLock::new();
    static L4: OnceLock<(Cone, Vec<Facet>, FaceLattice)> = OnceLock::new();
    let cell = if n == 3 { &L3 } else { &L4 };
    cell.get_or_init(|| {
        let c = Cone::new(n).unwrap();
        let f = c.facets().unwrap();
        let l = c.face_lattice().unwrap();
        (c, f, l)
    })
}

fn markov4() -> &'static Vec<ToricBinomial> {
    static M: OnceLock<Vec<ToricBinomial>> = OnceLock::new();
    M.get_or_init(|| markov_basis(&build_matrix(4).unwrap(), &budget()).unwrap())
}

fn ring3() -> Arc<Ring> {
    Ring::new(vec!["x".into(), "y".into(), "z".into()], MonomialOrder::GrevLex).unwrap()
}

fn poly(ring: &Ring) -> impl Strategy<Value = Polynomial> {
    let nv = ring.nvars();
    let ring = Arc::new(ring.clone());
    prop::collection::vec((prop::collection::vec(0u16..3, nv), -5i64..=5), 0..5).prop_map(move |terms| {
        let t = terms
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(e, c)| (Monomial::new(e), BigRational::from_integer(BigInt::from(c))))
            .collect();
        Polynomial::from_terms(t, &ring)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn semi_elementary_roundtrip(s in statement(5)) {
        let u = semi_elementary_imset(&s, 5).unwrap();
        prop_assert_eq!(recognize_semi_elementary(&u), Some(s));
    }

    #[test]
    fn decompositions_sum_to_target(s in statement(4)) {
        if s.is_elementary() {
            prop_assert!(decompose(&s, 4, 4).is_err());
            return Ok(());
        }
        let target = semi_elementary_imset(&s, 4).unwrap();
        for d in decompose(&s, 4, 4).unwrap() {
            let mut sum = cikit::Imset::zero(4);
            for p in &d.parts {
                sum.add_assign(&elementary_imset(p, 4).unwrap());
            }
            prop_assert_eq!(&sum, &target);
        }
    }

    #[test]
    fn imset_permutation_equivariance(s in statement(4), g in perm(4)) {
        let img = apply_permutation(&s, &g).unwrap();
        let u = semi_elementary_imset(&s, 4).unwrap();
        let v = semi_elementary_imset(&img, 4).unwrap();
        for (set, c) in u.support() {
            prop_assert_eq!(v.get(g.apply_set(set)), c);
        }
    }

    #[test]
    fn kernel_combinations_stay_in_kernel(coeffs in prop::collection::vec(-3i64..=3, 13)) {
        let a = build_matrix(4).unwrap();
        let k = kernel_basis(&a);
        prop_assert_eq!(k.len(), 13);
        let mut x = vec![0i64; a.num_cols()];
        for (c, v) in coeffs.iter().zip(&k) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += c * vi;
            }
        }
        prop_assert!(in_kernel(&a, &x));
    }

    #[test]
    fn markov_basis_is_symmetric(g in perm(4)) {
        let a = build_matrix(4).unwrap();
        let m = markov4();
        for b in m.iter() {
            let img = permute_binomial(b, &a, &g).unwrap();
            prop_assert!(in_kernel(&a, img.vector()));
            // relabelling variables permutes the columns of 𝒜 and keeps degrees
            prop_assert_eq!(img.degree(), b.degree());
        }
    }

    #[test]
    fn closure_is_the_smallest_face(mask in 0u64..(1 << 24)) {
        let (c, facets, l) = lattice(4);
        let cl = c.closure(mask, facets);
        prop_assert_eq!(cl & mask, mask);
        prop_assert!(l.contains(cl));
        prop_assert_eq!(c.closure(cl, facets), cl);
        for f in facets {
            prop_assert!(f.incident_rays & mask != mask || f.incident_rays & cl == cl);
        }
    }

    #[test]
    fn faces_are_closed_under_intersection(i in 0usize..22108, j in 0usize..22108) {
        let (_, _, l) = lattice(4);
        let meet = l.faces[i].incident_rays & l.faces[j].incident_rays;
        prop_assert!(l.contains(meet));
    }

    #[test]
    fn statement_render_roundtrip(s in statement(6)) {
        let text = s.to_string();
        prop_assert_eq!(parse_statement(&text).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in poly(&ring3()), b in poly(&ring3()), c in poly(&ring3())) {
        let r = ring3();
        prop_assert_eq!(a.add(&b, &r), b.add(&a, &r));
        prop_assert_eq!(a.mul(&b, &r), b.mul(&a, &r));
        prop_assert_eq!(a.add(&b, &r).mul(&c, &r), a.mul(&c, &r).add(&b.mul(&c, &r), &r));
        prop_assert!(a.sub(&a, &r).is_zero());
    }

    #[test]
    fn groebner_basis_properties(f in poly(&ring3()), g in poly(&ring3()), h in poly(&ring3())) {
        let r = ring3();
        let gb = groebner(&[f.clone(), g.clone()], &r, &budget()).unwrap();
        prop_assert!(verify_groebner(&gb, &r, &budget()).unwrap());
        for p in &gb {
            prop_assert_eq!(p.leading_coeff().map(|c| c == &BigRational::from_integer(1.into())), Some(true));
        }
        // f·h + g lies in (f, g) and reduces to zero
        let member = f.mul(&h, &r).add(&g, &r);
        prop_assert!(normal_form(&member, &gb, &r).is_zero());
        let ideal = IdealHandle::new(r.clone(), vec![f, g]).unwrap();
        prop_assert!(ideal_membership(&member, &ideal, &budget()).unwrap());
    }

    #[test]
    fn ci_ideal_permutation_equivariance(mask in 1u8..64, g in perm(3)) {
        let e3 = enumerate_elementary(3).unwrap();
        let model: Vec<CIStatement> = e3.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s).collect();
        let image: Vec<CIStatement> = model.iter().map(|s| apply_permutation(s, &g).unwrap()).collect();
        let states = StateVector::binary(3);
        let i = sum_ci_ideals(&model, &states).unwrap();
        let j = sum_ci_ideals(&image, &states).unwrap();
        let moved = permute_ring_ideal(&i, &g, &states).unwrap();
        prop_assert!(ideal_equal(&moved, &j, &budget()).unwrap());
        prop_assert_eq!(dim_degree(&i, &budget()).unwrap(), dim_degree(&j, &budget()).unwrap());
    }

    #[test]
    fn dim_degree_bounds(mask in 1u8..64) {
        let e3 = enumerate_elementary(3).unwrap();
        let model: Vec<CIStatement> = e3.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s).collect();
        let i = sum_ci_ideals(&model, &StateVector::binary(3)).unwrap();
        let dd = dim_degree(&i, &budget()).unwrap();
        prop_assert!(dd.krull_dim >= 1 && dd.krull_dim <= 7 && dd.degree >= 1);
    }

    #[test]
    fn relation_render_roundtrip(i in 0usize..32) {
        let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/appendix_corrected.rel")).unwrap();
        let lines: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).collect();
        let r = parse_relation(lines[i]).unwrap();
        prop_assert_eq!(parse_relation(&render(&r)).unwrap(), r);
    }
}

#[test]
fn graver_n3_symmetric() {
    let a = build_matrix(3).unwrap();
    let g = graver_basis(&a, &budget()).unwrap();
    for p in Permutation::all(3) {
        for b in &g {
            let img = permute_binomial(b, &a, &p).unwrap();
            let neg = ToricBinomial::new(img.vector().iter().map(|x| -x).collect()).unwrap();
            assert!(g.contains(&img) || g.contains(&neg));
        }
    }
}
