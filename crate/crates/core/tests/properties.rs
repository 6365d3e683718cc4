mod common;

use std::collections::HashSet;

use common::*;
use pgclass::catalog::{self, Glue, ENTRIES};
use pgclass::central_products::{central_product, factor_multiset, GluingMap};
use pgclass::digraph::{emit, parse};
use pgclass::ff::{enumerate_gl, gl_order, FpMatrix, Prime, Subspace};
use pgclass::invariants::*;
use pgclass::isomorphism::{distinguish, is_isomorphic, IsoOutcome, SearchBudget};
use pgclass::{CommutatorStructure, FlowDigraph};
use proptest::prelude::*;
use rand::Rng;

fn primes() -> impl Strategy<Value = u32> {
    prop_oneof![Just(3u32), Just(5u32), Just(7u32)]
}

/// `(p, d, upper-triangle entries)` of one alternating matrix.
fn antisymmetric() -> impl Strategy<Value = (u32, usize, Vec<i64>)> {
    (primes(), 1usize..=9).prop_flat_map(|(p, d)| {
        (Just(p), Just(d), proptest::collection::vec(0..p as i64, d * (d - 1) / 2))
    })
}

fn structure() -> impl Strategy<Value = (u32, usize, usize, u64)> {
    (primes(), 1usize..=7, 1usize..=3, any::<u64>())
}

fn digraph() -> impl Strategy<Value = FlowDigraph> {
    (primes(), 1usize..=7, 1usize..=3)
        .prop_flat_map(|(p, d, r)| {
            let pairs: Vec<(usize, usize)> = (1..=d).flat_map(|i| (i + 1..=d).map(move |j| (i, j))).collect();
            let n = pairs.len();
            (
                Just((p, d, r)),
                Just(pairs),
                proptest::collection::vec(proptest::collection::vec(0..p as i64, r), n),
                proptest::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|((p, d, r), pairs, flows, keep)| {
            let mut g = FlowDigraph::new("g", Prime::new(p).unwrap(), r, d);
            for (((i, j), flow), k) in pairs.into_iter().zip(flows).zip(keep) {
                if k && flow.iter().any(|&x| x != 0) {
                    g.add_edge(i, j, &flow).unwrap();
                }
            }
            g
        })
}

fn alternating(p: Prime, d: usize, upper: &[i64]) -> FpMatrix {
    let mut m = FpMatrix::zeros(p, d, d);
    let mut it = upper.iter();
    for i in 0..d {
        for j in i + 1..d {
            let v = *it.next().unwrap();
            m.set(i, j, v);
            m.set(j, i, -v);
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn alternating_rank_is_even((p, d, upper) in antisymmetric()) {
        let m = alternating(prime(p), d, &upper);
        let rows: Vec<Vec<i64>> = (0..d).map(|i| m.row(i).iter().map(|&x| x as i64).collect()).collect();
        prop_assert_eq!(m.rank() % 2, 0);
        prop_assert_eq!(m.rank(), oracle_rank(p, &rows));
    }

    #[test]
    fn fdg_round_trip(g in digraph()) {
        let text = emit(&g);
        prop_assert_eq!(parse(&text).unwrap(), g.clone());
        let cs = CommutatorStructure::from_digraph(&g);
        prop_assert_eq!(cs.to_digraph("g"), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kernel_plus_rank((p, rows, cols, seed) in (primes(), 1usize..=8, 1usize..=8, any::<u64>())) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, prime(p), rows, cols);
        prop_assert_eq!(m.kernel().dim() + m.rank(), cols);
        for v in m.kernel().basis() {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn subspace_form_is_canonical((p, n, k, seed) in (primes(), 1usize..=6, 0usize..=6, any::<u64>())) {
        let p = prime(p);
        let mut r = rng(seed);
        let vecs: Vec<Vec<u8>> = (0..k).map(|_| random_matrix(&mut r, p, 1, n).row(0).to_vec()).collect();
        let a = Subspace::span(p, n, &vecs);
        // a different spanning set: random combinations plus the originals reversed
        let mix = random_matrix(&mut r, p, k + 2, k.max(1));
        let mut other: Vec<Vec<u8>> = (0..k + 2)
            .map(|i| {
                let mut v = vec![0u8; n];
                for (j, w) in vecs.iter().enumerate() {
                    for (x, &y) in v.iter_mut().zip(w) {
                        *x = p.mul_add(*x, mix.get(i, j), y);
                    }
                }
                v
            })
            .collect();
        other.extend(vecs.iter().rev().cloned());
        prop_assert_eq!(Subspace::span(p, n, &other), a);
    }

    #[test]
    fn commutator_is_bilinear((p, d, r, seed) in structure()) {
        let p = prime(p);
        let mut g = rng(seed);
        let cs = random_structure(&mut g, p, d, r);
        let v = |g: &mut rand_chacha::ChaCha8Rng| random_matrix(g, p, 1, d).row(0).to_vec();
        let (u, u2, w) = (v(&mut g), v(&mut g), v(&mut g));
        let sum: Vec<u8> = u.iter().zip(&u2).map(|(&a, &b)| p.add(a, b)).collect();
        let lhs = cs.commutator(&sum, &w);
        let rhs: Vec<u8> = cs.commutator(&u, &w).iter().zip(cs.commutator(&u2, &w)).map(|(&a, b)| p.add(a, b)).collect();
        prop_assert_eq!(lhs, rhs);
        let swapped: Vec<u8> = cs.commutator(&w, &u).iter().map(|&x| p.neg(x)).collect();
        prop_assert_eq!(cs.commutator(&u, &w), swapped);
        prop_assert!(cs.commutator(&u, &u).iter().all(|&x| x == 0));
    }

    #[test]
    fn change_of_basis_convention((p, d, r, seed) in structure()) {
        let p = prime(p);
        let mut g = rng(seed);
        let cs = random_structure(&mut g, p, d, r);
        let s = random_invertible(&mut g, p, d);
        let t = random_invertible(&mut g, p, r);
        let moved = cs.change_of_basis(&s, &t).unwrap();
        for f in moved.forms() {
            prop_assert!(f.is_alternating());
        }
        let u = random_matrix(&mut g, p, 1, d).row(0).to_vec();
        let v = random_matrix(&mut g, p, 1, d).row(0).to_vec();
        // c'(u, v) = T c(Su, Sv)
        prop_assert_eq!(moved.commutator(&u, &v), t.mul_vec(&cs.commutator(&s.mul_vec(&u), &s.mul_vec(&v))));
    }

    #[test]
    fn change_of_basis_is_an_action((p, d, r, seed) in structure()) {
        let p = prime(p);
        let mut g = rng(seed);
        let cs = random_structure(&mut g, p, d, r);
        let (s1, s2, s3) = (random_invertible(&mut g, p, d), random_invertible(&mut g, p, d), random_invertible(&mut g, p, d));
        let (t1, t2, t3) = (random_invertible(&mut g, p, r), random_invertible(&mut g, p, r), random_invertible(&mut g, p, r));
        let stepwise = cs
            .change_of_basis(&s1, &t1).unwrap()
            .change_of_basis(&s2, &t2).unwrap()
            .change_of_basis(&s3, &t3).unwrap();
        let s = s1.mul(&s2).unwrap().mul(&s3).unwrap();
        let t = t3.mul(&t2).unwrap().mul(&t1).unwrap();
        prop_assert_eq!(cs.change_of_basis(&s, &t).unwrap(), stepwise.clone());
        // associativity of the grouping
        let left = cs.change_of_basis(&s1.mul(&s2).unwrap(), &t2.mul(&t1).unwrap()).unwrap().change_of_basis(&s3, &t3).unwrap();
        let right = cs.change_of_basis(&s1, &t1).unwrap().change_of_basis(&s2.mul(&s3).unwrap(), &t3.mul(&t2).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, stepwise);
    }

    #[test]
    fn structural_data_is_invariant((p, d, r, seed) in structure()) {
        let p = prime(p);
        let mut g = rng(seed);
        let cs = random_structure(&mut g, p, d, r);
        let moved = moved(&mut g, &cs);
        prop_assert_eq!(cs.is_special(), moved.is_special());
        prop_assert_eq!(cs.radical().dim(), moved.radical().dim());
        prop_assert_eq!(cs.derived_span().dim(), moved.derived_span().dim());
        let ranks = |c: &CommutatorStructure| {
            let mut v: Vec<usize> = central_lines(p, c.r()).iter().map(|phi| c.pencil_member(phi).rank()).collect();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(ranks(&cs), ranks(&moved));
        prop_assert_eq!(rank_signature(&cs).unwrap(), rank_signature(&moved).unwrap());
    }

    #[test]
    fn structure_digraph_round_trip((p, d, r, seed) in structure()) {
        let mut g = rng(seed);
        let cs = random_structure(&mut g, prime(p), d, r);
        prop_assert_eq!(CommutatorStructure::from_digraph(&cs.to_digraph("x")), cs);
    }

    #[test]
    fn frequency_paths_agree((p, d, seed) in (primes(), 1usize..=7, any::<u64>())) {
        let p = prime(p);
        let mut g = rng(seed);
        let cs = random_structure(&mut g, p, d, 2);
        let fv = frequency_vector(&cs).unwrap();
        prop_assert_eq!(fv.total(), p.value() as usize + 1);
        prop_assert_eq!(frequency_vector_by_quotients(&cs).unwrap(), fv);
        for z in central_lines(p, 2) {
            let q = quotient_structure(&cs, &z).unwrap();
            prop_assert_eq!(quotient_type(&cs, &z).unwrap().n * 2, q.form(0).rank());
            if cs.is_special() {
                prop_assert_eq!(q.derived_span().dim(), 1);
            }
        }
    }

    #[test]
    fn reversed_edges_negate((p, i, j, e1, e2) in (primes(), 1usize..=5, 1usize..=5, 0i64..7, 1i64..7)) {
        prop_assume!(i != j && (e1 % p as i64 != 0 || e2 % p as i64 != 0));
        let text = |a: usize, b: usize, f: [i64; 2]| format!("group g\np {p}\nderived 2\ngens 5\nedge {a} {b} {} {}\n", f[0], f[1]);
        prop_assert_eq!(parse(&text(j, i, [e1, e2])).unwrap(), parse(&text(i, j, [-e1, -e2])).unwrap());
    }

    #[test]
    fn rejections_carry_line_numbers(lines in proptest::collection::vec("[a-z0-9 #]{0,12}", 0..8)) {
        let text = format!("group g\np 3\nderived 1\ngens 3\n{}", lines.join("\n"));
        if let Err(e) = parse(&text) {
            prop_assert!(e.line >= 1 && e.line <= 4 + lines.len().max(1));
            let prefix = format!("line {}", e.line);
            prop_assert!(e.to_string().starts_with(&prefix));
        }
    }
}

#[test]
fn gl_enumeration_counts() {
    for (d, p) in [(1, 3), (1, 5), (1, 7), (2, 3), (2, 5), (2, 7), (3, 3)] {
        let p = prime(p);
        let order = gl_order(d, p);
        assert!(order <= 100_000);
        let seen: HashSet<Vec<u8>> = enumerate_gl(d, p, order).unwrap().map(|m| m.data().to_vec()).collect();
        assert_eq!(seen.len() as u128, order);
        let expected: u128 = (0..d).map(|i| (p.value() as u128).pow(d as u32) - (p.value() as u128).pow(i as u32)).product();
        assert_eq!(order, expected);
    }
}

fn invariants_of(cs: &CommutatorStructure) -> (Option<FrequencyVector>, RankSignature, (bool, bool, u128), Option<Vec<(usize, bool)>>) {
    let sc = small_centralizer_properties(cs).unwrap();
    (
        frequency_vector(cs).ok(),
        rank_signature(cs).unwrap(),
        (sc.is_subspace, sc.is_commuting, sc.points),
        center_preimage_profile(cs).ok().map(|pr| preimage_multiset(&pr)),
    )
}

fn check_invariance(q: u32, trials: usize, seed: u64) {
    let p = prime(q);
    let mut g = rng(seed);
    for e in &ENTRIES {
        let cs = catalog::build(e.name, p).unwrap();
        let base = invariants_of(&cs);
        for _ in 0..trials {
            assert_eq!(invariants_of(&moved(&mut g, &cs)), base, "{} at p = {q}", e.name);
        }
    }
}

#[test]
fn catalog_invariants_survive_100_basis_changes_p3() {
    check_invariance(3, 100, 1);
}

#[test]
fn catalog_invariants_survive_basis_changes_p5_p7() {
    check_invariance(5, 5, 2);
    check_invariance(7, 2, 3);
}

fn small_catalog(p: Prime) -> Vec<(&'static str, CommutatorStructure)> {
    ENTRIES
        .iter()
        .filter(|e| e.gens <= 4)
        .map(|e| (e.name, catalog::build(e.name, p).unwrap()))
        .collect()
}

#[test]
fn iso_is_symmetric_on_small_catalog_pairs() {
    let p = prime(3);
    let mut g = rng(4);
    let groups = small_catalog(p);
    for (a, ca) in &groups {
        for (b, cb) in &groups {
            let cb = moved(&mut g, cb);
            let ab = is_isomorphic(ca, &cb, SearchBudget::default()).unwrap();
            let ba = is_isomorphic(&cb, ca, SearchBudget::default()).unwrap();
            assert_eq!(ab.is_iso(), ba.is_iso(), "{a} {b}");
            assert_eq!(ab.is_iso(), a == b, "{a} {b}");
            assert!(!matches!(ab, IsoOutcome::Exhausted { .. }));
        }
    }
}

#[test]
fn witnesses_revalidate_on_orbit_mates() {
    let mut g = rng(5);
    for k in 0..1000 {
        let p = prime([3, 5, 7][k % 3]);
        let d = g.gen_range(2..=4);
        let cs = random_structure(&mut g, p, d, 2);
        let other = moved(&mut g, &cs);
        assert!(!distinguish(&cs, &other).is_distinct());
        match is_isomorphic(&cs, &other, SearchBudget::default()).unwrap() {
            IsoOutcome::Iso(w) => assert_eq!(cs.change_of_basis(w.s(), w.t()).unwrap(), other),
            other => panic!("orbit mates not found isomorphic: {other:?}"),
        }
    }
}

#[test]
fn distinguish_never_contradicts_on_catalog_pairs() {
    let p = prime(3);
    let budget = SearchBudget {
        max_nodes: 200_000,
        ..SearchBudget::default()
    };
    for (i, a) in ENTRIES.iter().enumerate() {
        let ca = catalog::build(a.name, p).unwrap();
        assert!(!distinguish(&ca, &ca).is_distinct());
        for b in &ENTRIES[i + 1..] {
            let cb = catalog::build(b.name, p).unwrap();
            if distinguish(&ca, &cb).is_distinct() {
                let outcome = is_isomorphic(&ca, &cb, budget).unwrap();
                assert!(!outcome.is_iso(), "{} {}", a.name, b.name);
            }
        }
    }
}

fn glue(p: Prime, g: &Glue) -> GluingMap {
    match *g {
        Glue::Identity => GluingMap::identity(p, 2),
        Glue::Line(a, b) => GluingMap::line(p, &[a, b]).unwrap(),
    }
}

fn recipe_product(name: &str, p: Prime) -> CommutatorStructure {
    let e = catalog::lookup(name).unwrap();
    let factors: Vec<_> = e.recipe.iter().map(|(f, _)| catalog::build(f, p).unwrap()).collect();
    let maps: Vec<_> = e.recipe.iter().map(|(_, g)| glue(p, g)).collect();
    central_product(&factors, &maps, 2).unwrap()
}

#[test]
fn recipes_rebuild_the_catalog_at_p3() {
    let p = prime(3);
    for e in ENTRIES.iter().filter(|e| !e.recipe.is_empty()) {
        let prod = recipe_product(e.name, p);
        assert!(prod.is_special(), "{}", e.name);
        let cs = catalog::build(e.name, p).unwrap();
        match is_isomorphic(&prod, &cs, SearchBudget::default()).unwrap() {
            IsoOutcome::Iso(w) => assert_eq!(prod.change_of_basis(w.s(), w.t()).unwrap(), cs),
            other => panic!("{}: {other:?}", e.name),
        }
        let mut names: Vec<String> = e.recipe.iter().map(|(f, _)| f.to_string()).collect();
        names.sort();
        assert_eq!(factor_multiset(&prod).unwrap(), names, "{}", e.name);
    }
}

#[test]
fn recipes_at_p5() {
    let p = prime(5);
    for e in ENTRIES.iter().filter(|e| !e.recipe.is_empty()) {
        let prod = recipe_product(e.name, p);
        let cs = catalog::build(e.name, p).unwrap();
        if e.gens <= 6 {
            assert!(is_isomorphic(&prod, &cs, SearchBudget::default()).unwrap().is_iso(), "{}", e.name);
        } else {
            assert!(!distinguish(&prod, &cs).is_distinct(), "{}", e.name);
        }
    }
}

#[test]
fn product_specialness_follows_factors() {
    let p = prime(3);
    let e3 = catalog::build("E3", p).unwrap();
    let g531 = catalog::build("5.3.1", p).unwrap();
    let id = GluingMap::identity(p, 2);
    let line = GluingMap::line(p, &[1, 1]).unwrap();
    assert!(central_product(&[g531.clone(), e3.clone()], &[id.clone(), line.clone()], 2).unwrap().is_special());
    // a factor with a central generator gives a non-special product
    let degenerate = CommutatorStructure::from_upper(p, 3, 1, |i, j| vec![(i == 0 && j == 1) as i64]);
    assert!(!central_product(&[g531, degenerate], &[id, line.clone()], 2).unwrap().is_special());
    // images that miss part of W
    assert!(central_product(&[e3.clone(), e3], &[line.clone(), line], 2).is_err());
}
