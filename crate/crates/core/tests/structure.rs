mod common;

use common::*;
use proptest::prelude::*;
use regtourn::canon::{are_isomorphic, canonical_form, enumerate_tournaments};
use regtourn::digraph::Tournament;
use regtourn::embed::{contains, find_subtournament, hom_count};
use regtourn::families;

fn tournament(n: usize, bits: &[bool]) -> Tournament {
    let mut k = 0;
    Tournament::from_fn(n, |_, _| {
        let b = bits[k];
        k += 1;
        b
    })
}

fn arb_tournament(max_n: usize) -> impl Strategy<Value = Tournament> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| tournament(n, &bits))
    })
}

fn arb_with_perm(max_n: usize) -> impl Strategy<Value = (Tournament, Vec<usize>)> {
    arb_tournament(max_n).prop_flat_map(|t| {
        let n = t.order();
        (Just(t), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

#[test]
fn canonical_form_matches_brute_force_up_to_five_vertices() {
    for n in 1..=5 {
        let perms = permutations(n);
        for a in all_labeled(n).iter().step_by(3) {
            for b in all_labeled(n).iter().step_by(7) {
                let ta = tournament_from_adjacency(a);
                let tb = tournament_from_adjacency(b);
                let brute = brute_canonical(a, &perms) == brute_canonical(b, &perms);
                assert_eq!(are_isomorphic(&ta, &tb), brute, "n={n}");
            }
        }
    }
}

#[test]
fn enumeration_gives_one_representative_per_class() {
    for n in 1..=5 {
        let perms = permutations(n);
        let keys: Vec<Vec<bool>> = enumerate_tournaments(n)
            .unwrap()
            .iter()
            .map(|t| brute_canonical(&adjacency(t), &perms))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), keys.len(), "duplicate classes on {n} vertices");
    }
}

#[test]
fn subtournament_search_matches_subset_oracle() {
    let patterns: Vec<Tournament> = (3..=5).flat_map(|k| enumerate_tournaments(k).unwrap()).collect();
    for n in 3..=6 {
        for host_adj in all_labeled(n).iter().step_by(37) {
            let host = tournament_from_adjacency(host_adj);
            for p in &patterns {
                let oracle = brute_contains(host_adj, &adjacency(p));
                let found = find_subtournament(&host, p);
                assert_eq!(found.is_some(), oracle);
                assert_eq!(contains(&host, p), oracle);
                if let Some(e) = found {
                    assert!(e.is_valid(p, &host));
                }
                assert_eq!(hom_count(p, &host) as u64, brute_hom_count(&adjacency(p), host_adj));
            }
        }
    }
}

#[test]
fn carousel_neighbourhoods_are_transitive() {
    for v in (3..=15).step_by(2) {
        let t = families::carousel(v).unwrap();
        let adj = adjacency(&t);
        for x in 0..v {
            assert!(is_transitive_adj(&adj, &t.out_neighbors(x)));
            assert!(is_transitive_adj(&adj, &t.in_neighbors(x)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_ignores_relabeling((t, perm) in arb_with_perm(8)) {
        let relabeled = t.relabel(&perm);
        prop_assert_eq!(canonical_form(&t), canonical_form(&relabeled));
        prop_assert!(are_isomorphic(&t, &relabeled));
    }

    #[test]
    fn canonical_form_is_idempotent(t in arb_tournament(8)) {
        let c = canonical_form(&t);
        prop_assert_eq!(canonical_form(c.tournament()), c.clone());
        prop_assert!(are_isomorphic(&t, c.tournament()));
    }

    #[test]
    fn reverse_is_an_involution(t in arb_tournament(8)) {
        prop_assert_eq!(t.reverse().reverse(), t.clone());
        prop_assert_eq!(t.reverse().is_transitive(), t.is_transitive());
    }

    #[test]
    fn containment_is_monotone(t in arb_tournament(7), p in arb_tournament(4)) {
        if contains(&t.induced(&(0..t.order().saturating_sub(1)).collect::<Vec<_>>()), &p) {
            prop_assert!(contains(&t, &p));
        }
    }

    #[test]
    fn containment_agrees_with_oracle(t in arb_tournament(6), p in arb_tournament(4)) {
        prop_assert_eq!(contains(&t, &p), brute_contains(&adjacency(&t), &adjacency(&p)));
    }

    #[test]
    fn carousel_rotation_is_an_automorphism(k in 1usize..7, shift in 0usize..15) {
        let v = 2 * k + 1;
        let t = families::carousel(v).unwrap();
        let perm: Vec<usize> = (0..v).map(|x| (x + shift) % v).collect();
        prop_assert_eq!(t.relabel(&perm), t);
    }
}
