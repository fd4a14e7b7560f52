use proptest::prelude::*;

use evoalg::classify::{case_spec, classify_case, PatternSource};
use evoalg::field::{Field, PrimeField};
use evoalg::ideals::{closure, is_basic_simple, is_closed, maximal_basic_ideals};
use evoalg::isotest::{find_isomorphism, verify_isomorphism};
use evoalg::matrix::{mul, Matrix};
use evoalg::snf::smith_normal_form;
use evoalg::{EvolutionAlgebra, IndexSet, MonomialMap, PermSubgroup, Permutation, SupportPattern};
use num::{BigInt, Zero};

const P: u64 = 10007;

fn gf() -> PrimeField {
    PrimeField::new(P).unwrap()
}

/// Entries are zero about a third of the time.
fn algebra(n: usize) -> impl Strategy<Value = EvolutionAlgebra<PrimeField>> {
    proptest::collection::vec(prop_oneof![1 => Just(0u64), 2 => 1..P], n * n).prop_map(move |cells| {
        let f = gf();
        let rows = cells.chunks(n).map(|r| r.iter().map(|&v| f.from_i64(v as i64)).collect()).collect();
        EvolutionAlgebra::from_rows(f, rows).unwrap()
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn monomial(n: usize) -> impl Strategy<Value = MonomialMap<<PrimeField as Field>::Elem>> {
    (permutation(n), proptest::collection::vec(1..P, n)).prop_map(|(s, d)| {
        let f = gf();
        MonomialMap::new(&f, s, d.into_iter().map(|v| f.from_i64(v as i64)).collect()).unwrap()
    })
}

fn with_maps(count: usize) -> impl Strategy<Value = (EvolutionAlgebra<PrimeField>, Vec<MonomialMap<<PrimeField as Field>::Elem>>)> {
    (1usize..=4).prop_flat_map(move |n| (algebra(n), proptest::collection::vec(monomial(n), count)))
}

fn pattern(n: usize) -> impl Strategy<Value = SupportPattern> {
    proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| SupportPattern::from_fn(n, |k, i| bits[k * n + i]).unwrap())
}

fn any_pattern() -> impl Strategy<Value = SupportPattern> {
    (1usize..=4).prop_flat_map(pattern)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn action_preserves_invariants((a, maps) in with_maps(1)) {
        let b = a.apply_monomial(&maps[0]).unwrap();
        prop_assert_eq!(b.zero_count(), a.zero_count());
        prop_assert_eq!(b.diag_zero_count(), a.diag_zero_count());
        prop_assert_eq!(b.rank(), a.rank());
        prop_assert_eq!(b.support(), a.support().permute(&maps[0].sigma.inverse()));
        prop_assert_eq!(b.support().fingerprint(), a.support().fingerprint());
    }

    #[test]
    fn action_composes((a, maps) in with_maps(2)) {
        let f = gf();
        let (p, q) = (&maps[0], &maps[1]);
        let pq = p.compose(q, &f);
        let stepwise = a.apply_monomial(q).unwrap().apply_monomial(p).unwrap();
        prop_assert_eq!(a.apply_monomial(&pq).unwrap(), stepwise);
        let product = mul(&f, &q.to_matrix(&f), &p.to_matrix(&f)).unwrap();
        prop_assert_eq!(pq.to_matrix(&f), product);
        let back = a.apply_monomial(p).unwrap().apply_monomial(&p.inverse(&f)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn oracle_recovers_monomial_images((a, maps) in with_maps(1)) {
        prop_assume!(a.is_perfect());
        let b = a.apply_monomial(&maps[0]).unwrap();
        let outcome = find_isomorphism(&a, &b).unwrap();
        let map = outcome.map().expect("monomial images are isomorphic");
        prop_assert!(verify_isomorphism(map, &a, &b));
    }

    #[test]
    fn basic_simple_iff_strongly_connected(p in any_pattern()) {
        prop_assert_eq!(is_basic_simple(&p), p.graph().is_strongly_connected());
        prop_assert_eq!(maximal_basic_ideals(&p).is_basic_simple, is_basic_simple(&p));
    }

    #[test]
    fn closure_is_least_closed_superset(p in any_pattern(), bits in any::<u32>()) {
        let s = IndexSet::from_bits(bits & IndexSet::full(p.dim()).bits());
        let c = closure(&p, s).unwrap();
        prop_assert!(s.is_subset(c));
        prop_assert!(is_closed(&p, c));
        for t in maximal_basic_ideals(&p).all_closed_proper_sets {
            if s.is_subset(t) {
                prop_assert!(c.is_subset(t));
            }
        }
    }

    #[test]
    fn quotient_by_maximal_ideal_is_basic_simple(a in algebra(4)) {
        prop_assume!(a.is_perfect());
        for ideal in maximal_basic_ideals(&a.support()).maximal_basic_ideals {
            let q = a.quotient(ideal).unwrap();
            prop_assert!(q.is_perfect());
            prop_assert!(is_basic_simple(&q.support()));
        }
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant(p in pattern(4), s in permutation(4)) {
        let g = PermSubgroup::fixing(4, &[3]);
        let s = if g.contains(&s) { s } else { Permutation::identity(4) };
        prop_assert_eq!(p.permute(&s).canonical(&g), p.canonical(&g));
        let all = PermSubgroup::symmetric(4);
        prop_assert!(p.orbit(&all).contains(&p.canonical(&all)));
        prop_assert_eq!(p.generically_perfect(), p.permute(&s).generically_perfect());
    }

    #[test]
    fn smith_form_diagonalizes(rows in 1usize..4, cols in 1usize..4, cells in proptest::collection::vec(-9i64..10, 9)) {
        let a: Vec<Vec<BigInt>> = (0..rows).map(|r| (0..cols).map(|c| BigInt::from(cells[r * 3 + c])).collect()).collect();
        let s = smith_normal_form(&a, cols);
        let to_q = |m: &[Vec<BigInt>]| Matrix::from_rows(m.iter().map(|r| r.iter().map(|x| num::BigRational::from_integer(x.clone())).collect()).collect()).unwrap();
        let q = evoalg::Rationals;
        let prod = mul(&q, &mul(&q, &to_q(&s.u), &to_q(&a)).unwrap(), &to_q(&s.v)).unwrap();
        for r in 0..rows {
            for c in 0..cols {
                let want = if r == c { s.d[r].clone() } else { BigInt::zero() };
                prop_assert_eq!(prod.get(r, c).clone(), num::BigRational::from_integer(want));
            }
        }
    }
}

#[test]
fn classification_ignores_enumeration_order() {
    let spec = case_spec("4.2.2").unwrap();
    let mut reversed = spec.clone();
    if let PatternSource::Blocks { y, u_nonzeros, .. } = &mut reversed.source {
        y.reverse();
        u_nonzeros.reverse();
    }
    assert_eq!(classify_case(&spec).unwrap(), classify_case(&reversed).unwrap());
}
