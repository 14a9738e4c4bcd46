use dtlocal::random::{random_det_tree, random_table};
use dtlocal::tree::{collapse_single_child, prune_unrealizable, solves, tree_class, SolveMode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn prune_then_collapse_reaches_binary_deterministic_form(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = random_table(&mut rng, n, Some(3));
        let tree = random_det_tree(&mut rng, &table);
        prop_assert!(solves(&tree, &table, SolveMode::Det));
        let normal = collapse_single_child(&prune_unrealizable(&tree, &table));
        prop_assert!(solves(&normal, &table, SolveMode::Det));
        prop_assert!(tree_class(&normal).in_g_d2);
        let m = normal.metrics();
        prop_assert_eq!(m.working + 1, m.terminals);
        prop_assert!(m.nodes <= tree.metrics().nodes);
    }
}
