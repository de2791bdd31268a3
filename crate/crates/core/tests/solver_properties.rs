use std::collections::BTreeMap;
use std::f64::consts::PI;

use proptest::prelude::*;
use ringchain::gap_solvers::{
    geometric_eigenvalues, mixed_eigenvalues, two_ring_eigenvalues, weak_compact_eigenvalues,
};
use ringchain::{Background, GapEigenvalue, WeakMode, WeakPerturbation};

fn per_gap(evs: &[GapEigenvalue]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for e in evs {
        *m.entry(e.gap_index).or_insert(0) += 1;
    }
    m
}

fn field() -> impl Strategy<Value = f64> {
    (0.05f64..0.45, any::<bool>()).prop_map(|(f, neg)| if neg { -f } else { f })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_ring_gives_at_most_one_root_per_gap(
        alpha in -2.0f64..2.0, a in field(), a1 in -0.6f64..0.6, a2 in -0.6f64..0.6,
    ) {
        let bg = Background::new(alpha, a);
        let evs = two_ring_eigenvalues(&bg, a1, a2, 6).unwrap();
        prop_assert!(per_gap(&evs).values().all(|&n| n == 1));
        prop_assert!(evs.iter().all(|e| e.residual < 1e-9));
    }

    #[test]
    fn mixed_gives_at_most_one_root_per_gap(
        alpha in -2.0f64..2.0, a in field(), alpha1 in -4.0f64..4.0, a1 in -0.6f64..0.6,
    ) {
        let bg = Background::new(alpha, a);
        let evs = mixed_eigenvalues(&bg, alpha1, a1, 6).unwrap();
        prop_assert!(per_gap(&evs).values().all(|&n| n == 1));
    }

    #[test]
    fn field_only_mixed_matches_two_ring(alpha in -2.0f64..2.0, a in field(), a1 in -0.6f64..0.6) {
        let bg = Background::new(alpha, a);
        let mixed = mixed_eigenvalues(&bg, alpha, a1, 6).unwrap();
        let two = two_ring_eigenvalues(&bg, a1, a, 6).unwrap();
        prop_assert_eq!(mixed.len(), two.len());
        for (m, t) in mixed.iter().zip(&two) {
            prop_assert_eq!(m.gap_index, t.gap_index);
            prop_assert!((m.energy - t.energy).abs() < 1e-10, "{} vs {}", m.energy, t.energy);
        }
    }

    #[test]
    fn unperturbed_weak_chain_has_no_roots(
        alpha in -2.0f64..2.0, a in field(),
        alphas in prop::collection::vec(-1.0f64..1.0, 1..4),
    ) {
        let fields = vec![0.1; alphas.len()];
        let wp = WeakPerturbation::new(alphas, fields, 0.0).unwrap();
        let evs = weak_compact_eigenvalues(&Background::new(alpha, a), &wp, 6, WeakMode::Exact).unwrap();
        prop_assert!(evs.is_empty());
    }
}

#[test]
fn geometric_counts_follow_coupling_sign_and_grow() {
    let grid: Vec<f64> = (1..=24).map(|i| 0.5 * i as f64).collect();
    for alpha in [0.5, 1.0, 2.0, -0.5, -1.0, -2.0] {
        let bg = Background::new(alpha, 0.2);
        let counts: Vec<usize> = grid
            .iter()
            .map(|&l| geometric_eigenvalues(&bg, l, 1).unwrap().1)
            .collect();
        for (&l, &n) in grid.iter().zip(&counts) {
            if l < PI {
                assert_eq!(n, usize::from(alpha < 0.0), "alpha {alpha}, ell1 {l}");
            } else if alpha < 0.0 {
                assert_eq!(n, 0, "alpha {alpha}, ell1 {l}");
            }
        }
        if alpha > 0.0 {
            let tail: Vec<usize> = counts[6..].to_vec();
            assert!(tail.windows(2).all(|w| w[1] >= w[0]), "alpha {alpha}: {counts:?}");
            assert!(tail[tail.len() - 1] >= 2, "alpha {alpha}: {counts:?}");
        }
    }
}
