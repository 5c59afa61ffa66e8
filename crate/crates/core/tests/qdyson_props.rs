use ct_forge_core::qdyson::{
    build_Qbrk, certify_main_lemma, check_composition, eval_Pa, eval_Qa, recurse_case_ii,
    validate_certificate, verify_dyson_q1, verify_qdyson, zero_test_case_i,
};
use ct_forge_core::tournament::{build_tournament, exhaustive_lemma_check, find_witness};
use ct_forge_core::{Method, ProofPath, TournamentInstance};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_path(rng: &mut ChaCha8Rng, n: usize, b: i64) -> ProofPath {
    let mut r: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
    if r.is_empty() {
        r.push(rng.gen_range(1..=n));
    }
    let k = r.iter().map(|_| rng.gen_range(1..=b)).collect();
    ProofPath::new(r, k).unwrap()
}

#[test]
fn composition_law_on_random_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let b = rng.gen_range(1..=5);
        let p = random_path(&mut rng, n, b);
        if p.last_var() == n {
            continue;
        }
        let r_next = rng.gen_range(p.last_var() + 1..=n);
        let k_next = rng.gen_range(1..=b);
        check_composition(&p, r_next, k_next, n).unwrap();
    }
}

#[test]
fn qdyson_small_grid() {
    for a0 in 0..=2u32 {
        for a1 in 0..=2u32 {
            for a2 in 0..=1u32 {
                let r = verify_qdyson(a0, &[a1, a2], Method::Both).unwrap();
                assert!(r.holds(), "{r}");
            }
            assert!(verify_qdyson(a0, &[a1], Method::Both).unwrap().holds());
        }
    }
}

#[test]
fn classical_case_matches_multinomials() {
    for all in [[1u32, 1, 1], [2, 1, 0], [2, 2, 1], [3, 1, 1]] {
        let r = verify_dyson_q1(all[0], &all[1..]).unwrap();
        assert!(r.holds(), "{all:?}");
    }
}

#[test]
fn qa_matches_closed_form_for_signed_b() {
    for a in [vec![1u32], vec![2], vec![1, 1], vec![2, 1]] {
        let total: i64 = a.iter().map(|&x| x as i64).sum();
        for b in -total - 2..=2 {
            assert_eq!(eval_Qa(&a, b).unwrap(), eval_Pa(&a, b), "a={a:?} b={b}");
        }
    }
}

#[test]
fn certificates_exist_and_validate() {
    for a in [vec![1u32, 1], vec![2, 1], vec![1, 1, 1], vec![2, 2]] {
        let total: u32 = a.iter().sum();
        for b in 1..=total {
            let c = certify_main_lemma(&a, b).unwrap();
            let st = validate_certificate(&c).unwrap();
            assert_eq!(st.leaves + st.recursed, st.nodes);
            assert!(st.depth <= a.len());
        }
    }
}

#[test]
fn every_node_is_zero_or_splits() {
    // totality: each path either carries a witness, or splits with the
    // predicted degree, and in the latter case Q(b | r; k) has no witness
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let total: u32 = a.iter().sum();
        if total == 0 {
            continue;
        }
        let b = rng.gen_range(1..=total);
        let p = random_path(&mut rng, n, b as i64);
        let f = build_Qbrk(b, &a, &p).unwrap();
        match zero_test_case_i(&a, &p) {
            Some(_) => assert!(f.is_zero(), "a={a:?} b={b} {p}"),
            None if p.len() < n => {
                let kids = recurse_case_ii(b, &a, &p).unwrap();
                assert_eq!(kids.len(), (n - p.last_var()) * b as usize);
            }
            None => {}
        }
    }
}

#[test]
fn lemma_holds_exhaustively_on_small_vectors() {
    let rep = exhaustive_lemma_check(3, 2).unwrap();
    assert_eq!(rep.instances, rep.case1 + rep.case2);
    assert!(rep.instances > 0);
}

proptest! {
    #[test]
    fn in_range_instances_have_witnesses(
        a in proptest::collection::vec(0u32..=3, 1..=4),
        seeds in proptest::collection::vec(1i64..=100, 4),
    ) {
        let total: i64 = a.iter().map(|&x| x as i64).sum();
        prop_assume!(total >= 1);
        let k: Vec<i64> = seeds.iter().take(a.len()).map(|s| 1 + (s - 1) % total).collect();
        let inst = TournamentInstance::new(a.clone(), k.clone()).unwrap();
        prop_assert!(find_witness(inst.a(), inst.k()).is_some());
    }

    #[test]
    fn witness_free_instances_leave_the_range(
        a in proptest::collection::vec(0u32..=3, 1..=4),
        k in proptest::collection::vec(1i64..=15, 4),
    ) {
        let k = k[..a.len()].to_vec();
        prop_assume!(find_witness(&a, &k).is_none());
        let inst = TournamentInstance::relaxed(a, k).unwrap();
        let t = build_tournament(&inst).unwrap();
        prop_assert!(t.contradicts(&inst));
        prop_assert!(inst.k().iter().any(|&x| x > inst.total()));
    }
}
