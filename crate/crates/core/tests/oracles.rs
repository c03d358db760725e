mod common;

use common::{bell, brute_assignment_count, cofactor_det, spd_from};
use relaycap_core::enumeration::{assignments, constraint_family, partitions};
use relaycap_core::gaussian::{log2_det, SymMatrix};

fn sym(m: &[Vec<f64>]) -> SymMatrix {
    SymMatrix::from_fn(m.len(), |r, c| m[r][c])
}

#[test]
fn bell_oracle_known_values() {
    let expected = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
    for (n, &b) in expected.iter().enumerate() {
        assert_eq!(bell(n), b);
    }
}

#[test]
fn partition_counts_follow_bell() {
    for n in 1..=7 {
        let items: Vec<usize> = (2..2 + n).collect();
        assert_eq!(partitions(&items).count() as u64, bell(n), "n = {n}");
    }
}

#[test]
fn five_element_set_has_52_partitions() {
    assert_eq!(partitions(&[2, 3, 4, 5, 6]).count(), 52);
}

#[test]
fn assignment_counts_match_brute_force() {
    for t in 3..=6usize {
        let relays: Vec<usize> = (2..t).collect();
        let candidates: Vec<usize> = (2..=t).collect();
        for mask in 1u32..(1 << relays.len()) {
            let s: Vec<usize> = relays
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &id)| id)
                .collect();
            for p in partitions(&s) {
                let product: usize = p.iter().map(|b| candidates.len() - b.len()).product();
                let generated = assignments(&p, &candidates).unwrap().count();
                assert_eq!(generated, product);
                assert_eq!(generated, brute_assignment_count(&p, &candidates));
            }
        }
    }
}

#[test]
fn every_instance_is_well_formed_up_to_six_nodes() {
    for t in 3..=6usize {
        let relays: Vec<usize> = (2..t).collect();
        let candidates: Vec<usize> = (2..=t).collect();
        let family: Vec<_> = constraint_family(&relays, &candidates).collect();
        assert!(family.iter().all(|c| c.is_well_formed(&candidates)));
        let unique: std::collections::HashSet<_> = family.iter().collect();
        assert_eq!(unique.len(), family.len());
        assert_eq!(
            family,
            constraint_family(&relays, &candidates).collect::<Vec<_>>()
        );
    }
}

#[test]
fn random_spd_log_det_matches_cofactor_expansion() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let entries: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = spd_from(&entries, 5, 0.5);
        let oracle = cofactor_det(&m);
        let ours = log2_det(&sym(&m)).unwrap().exp2();
        assert!(
            ((ours - oracle) / oracle).abs() < 1e-10,
            "{ours} vs {oracle}"
        );
    }
}
